//! Spectral linear algebra for matrices over `C[t]/(t^m)`.

mod exp;
mod log;
mod matrix;
mod spectral;
mod sylvester;

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use exp::{mexp_scaled, ExpRegistry, ExpStrategy, SplitExp, TaylorExp};
pub use log::{in_tau, mlog_tau, tau_exponent};
pub use matrix::{CMatrix, LambdaMatrix};
pub use spectral::{
    cluster_eigenvalues, eigen_projections, fiber_eigenvalues, jordan_chevalley, spectrum,
    JCDecomposition, SpectralData,
};
pub use sylvester::{sylvester_kernel, sylvester_operator, sylvester_solve};

use crate::error::{Error, Result};

/// Numerical thresholds shared by every operation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Fiber eigenvalues closer than this are identified; also the slack
    /// for deciding that an exponent difference is an integer.
    pub cluster_tol: f64,
    /// Relative singular-value cutoff for null spaces and invertibility.
    pub zero_tol: f64,
    /// Relative Frobenius tolerance for identity checks (commutators, towers).
    pub check_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            cluster_tol: 1e-8,
            zero_tol: 1e-10,
            check_tol: 1e-9,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("cluster_tol", self.cluster_tol),
            ("zero_tol", self.zero_tol),
            ("check_tol", self.check_tol),
        ] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::Invalid(format!("{name} must lie in (0, 1), got {v}")));
            }
        }
        Ok(())
    }
}

/// Tolerances plus the exponential strategy used wherever `exp` of a matrix
/// is needed.
#[derive(Debug, Clone)]
pub struct Context {
    pub tol: Tolerances,
    exp: Arc<dyn ExpStrategy>,
}

impl Default for Context {
    fn default() -> Self {
        Context {
            tol: Tolerances::default(),
            exp: Arc::new(TaylorExp),
        }
    }
}

impl Context {
    pub fn new(tol: Tolerances, exp: Arc<dyn ExpStrategy>) -> Self {
        Context { tol, exp }
    }

    /// Context with the named strategy from the default registry.
    pub fn with_strategy(tol: Tolerances, name: &str) -> Result<Self> {
        Ok(Context::new(tol, ExpRegistry::default().get(name)?))
    }

    pub fn exp_strategy(&self) -> &dyn ExpStrategy {
        self.exp.as_ref()
    }

    pub fn mexp(&self, t: &LambdaMatrix) -> LambdaMatrix {
        self.exp.exp(t, &self.tol)
    }

    /// `exp(-2 pi i T)`.
    pub fn monodromy_of(&self, t: &LambdaMatrix) -> LambdaMatrix {
        mexp_scaled(t, minus_two_pi_i(), self.exp.as_ref(), &self.tol)
    }
}

pub fn minus_two_pi_i() -> Complex64 {
    Complex64::new(0.0, -2.0 * std::f64::consts::PI)
}

/// `exp(T)` with the default strategy.
pub fn mexp(t: &LambdaMatrix) -> LambdaMatrix {
    Context::default().mexp(t)
}
