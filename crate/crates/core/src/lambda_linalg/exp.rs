//! Matrix exponential over `C[t]/(t^m)`.
//!
//! Two interchangeable strategies sit behind [`ExpStrategy`] and are looked
//! up by name in an [`ExpRegistry`]:
//!
//! * `split`: `T = S + N` with `S = sum rho P_rho` and `N` nilpotent, both
//!   polynomials in `T`; then `exp T = (sum e^rho P_rho) * sum_k N^k / k!`,
//!   a finite sum.
//! * `taylor`: scaling and squaring around a truncated Taylor series.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use super::matrix::{c, LambdaMatrix};
use super::spectral::eigen_projections;
use super::Tolerances;
use crate::error::{Error, Result};

pub trait ExpStrategy: Send + Sync {
    fn name(&self) -> &'static str;

    fn exp(&self, t: &LambdaMatrix, tol: &Tolerances) -> LambdaMatrix;
}

impl fmt::Debug for dyn ExpStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExpStrategy({})", self.name())
    }
}

/// Exact on the commuting semisimple + nilpotent split.
#[derive(Debug, Default, Clone, Copy)]
pub struct SplitExp;

impl ExpStrategy for SplitExp {
    fn name(&self) -> &'static str {
        "split"
    }

    fn exp(&self, t: &LambdaMatrix, tol: &Tolerances) -> LambdaMatrix {
        let spectral = eigen_projections(t, tol);
        let semisimple = spectral.apply(|rho| rho);
        let exp_semisimple = spectral.apply(|rho| rho.exp());
        let nil = t - &semisimple;
        exp_semisimple.try_mul(&nilpotent_exp(&nil)).expect("same shape")
    }
}

/// `sum_{k < n m} N^k / k!` for `C`-linearly nilpotent `N`.
pub(crate) fn nilpotent_exp(nil: &LambdaMatrix) -> LambdaMatrix {
    let (n, trunc) = (nil.n(), nil.trunc());
    let mut sum = LambdaMatrix::identity(n, trunc);
    let mut term = LambdaMatrix::identity(n, trunc);
    for k in 1..n * nil.m() {
        term = (&term * nil).scale(c(1.0 / k as f64, 0.0));
        if term.norm() == 0.0 {
            break;
        }
        sum = &sum + &term;
    }
    sum
}

/// Scaling and squaring with a Taylor series.
#[derive(Debug, Default, Clone, Copy)]
pub struct TaylorExp;

impl ExpStrategy for TaylorExp {
    fn name(&self) -> &'static str {
        "taylor"
    }

    fn exp(&self, t: &LambdaMatrix, _tol: &Tolerances) -> LambdaMatrix {
        let norm = t.sum_norm();
        let squarings = if norm > 0.5 {
            (norm / 0.5).log2().ceil() as i32
        } else {
            0
        };
        let scaled = t.scale(c(0.5f64.powi(squarings), 0.0));
        let (n, trunc) = (t.n(), t.trunc());
        let mut sum = LambdaMatrix::identity(n, trunc);
        let mut term = LambdaMatrix::identity(n, trunc);
        for k in 1..40 {
            term = (&term * &scaled).scale(c(1.0 / k as f64, 0.0));
            sum = &sum + &term;
            if term.norm() <= f64::EPSILON * 1e-3 * sum.norm() {
                break;
            }
        }
        for _ in 0..squarings {
            sum = &sum * &sum;
        }
        sum
    }
}

/// Name-indexed collection of exponential strategies.
#[derive(Clone)]
pub struct ExpRegistry {
    strategies: BTreeMap<&'static str, Arc<dyn ExpStrategy>>,
}

impl ExpRegistry {
    pub const DEFAULT: &'static str = "taylor";

    pub fn empty() -> Self {
        ExpRegistry {
            strategies: BTreeMap::new(),
        }
    }

    pub fn register(&mut self, strategy: Arc<dyn ExpStrategy>) {
        self.strategies.insert(strategy.name(), strategy);
    }

    pub fn get(&self, name: &str) -> Result<Arc<dyn ExpStrategy>> {
        self.strategies
            .get(name)
            .cloned()
            .ok_or_else(|| Error::UnknownStrategy(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.strategies.keys().copied()
    }
}

impl Default for ExpRegistry {
    fn default() -> Self {
        let mut r = ExpRegistry::empty();
        r.register(Arc::new(SplitExp));
        r.register(Arc::new(TaylorExp));
        r
    }
}

impl fmt::Debug for ExpRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.strategies.keys()).finish()
    }
}

/// `exp(z T)` for a scalar `z`.
pub fn mexp_scaled(
    t: &LambdaMatrix,
    z: Complex64,
    strategy: &dyn ExpStrategy,
    tol: &Tolerances,
) -> LambdaMatrix {
    strategy.exp(&t.scale(z), tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::artinian::{Jet, Truncation};

    fn tr(m: usize) -> Truncation {
        Truncation::new(m).unwrap()
    }

    fn strategies() -> Vec<Arc<dyn ExpStrategy>> {
        let reg = ExpRegistry::default();
        reg.names().map(|n| reg.get(n).unwrap()).collect()
    }

    #[test]
    fn registry_lookup() {
        let reg = ExpRegistry::default();
        assert_eq!(reg.names().collect::<Vec<_>>(), vec!["split", "taylor"]);
        assert_eq!(reg.get("split").unwrap().name(), "split");
        assert!(matches!(reg.get("pade"), Err(Error::UnknownStrategy(_))));
    }

    #[test]
    fn paper_monodromy_matrix() {
        // exp([[t,1],[0,t]]) = e^t [[1,1],[0,1]]; over m = 2 that is [[1+t,1+t],[0,1+t]]
        let t = LambdaMatrix::from_real(&[&[&[0., 1.], &[1., 0.]], &[&[0., 0.], &[0., 1.]]]).unwrap();
        let expected =
            LambdaMatrix::from_real(&[&[&[1., 1.], &[1., 1.]], &[&[0., 0.], &[1., 1.]]]).unwrap();
        for s in strategies() {
            let got = s.exp(&t, &Tolerances::default());
            assert!(got.max_abs_diff(&expected) < 1e-13, "{}", s.name());
        }
    }

    #[test]
    fn zero_and_diagonal() {
        for s in strategies() {
            let z = LambdaMatrix::zeros(3, tr(2));
            assert!(s.exp(&z, &Tolerances::default()).max_abs_diff(&LambdaMatrix::identity(3, tr(2))) < 1e-15);

            let a = Jet::from_real(&[0.3, -1.0, 2.0]).unwrap();
            let b = Jet::from_real(&[-0.7, 0.5, 0.0]).unwrap();
            let zero = Jet::zero(tr(3));
            let d = LambdaMatrix::from_entries(&[vec![a.clone(), zero.clone()], vec![zero.clone(), b.clone()]]).unwrap();
            let expected =
                LambdaMatrix::from_entries(&[vec![a.exp(), zero.clone()], vec![zero, b.exp()]]).unwrap();
            assert!(s.exp(&d, &Tolerances::default()).max_abs_diff(&expected) < 1e-13, "{}", s.name());
        }
    }
}
