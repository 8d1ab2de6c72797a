//! The rank-two example whose Galois group is the group `N` of pairs
//! `(a, lambda)` with `lambda = exp(t a)`, acting on `R^2` through
//! `(a, lambda) -> [[lambda, lambda a], [0, lambda]]`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::artinian::{Jet, Truncation};
use crate::connections::{monodromy, ConstantLogConnection};
use crate::error::{Error, Result};
use crate::lambda_linalg::{Context, LambdaMatrix};

/// Coefficient-wise tolerance for every membership test.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

/// An `R`-point of `N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NPoint {
    pub a: Jet,
    pub lambda: Jet,
}

impl NPoint {
    /// `(a, exp(t a))`.
    pub fn from_a(a: Jet) -> NPoint {
        let lambda = t_times(&a).exp();
        NPoint { a, lambda }
    }

    pub fn identity(trunc: Truncation) -> NPoint {
        NPoint::from_a(Jet::zero(trunc))
    }

    /// Largest coefficient of `lambda - exp(t a)`.
    pub fn defect(&self) -> f64 {
        t_times(&self.a)
            .exp()
            .max_abs_diff(&self.lambda)
            .unwrap_or(f64::INFINITY)
    }

    /// Group law `(a, lambda)(a', lambda') = (a + a', lambda lambda')`.
    pub fn compose(&self, other: &NPoint) -> Result<NPoint> {
        Ok(NPoint {
            a: self.a.add(&other.a)?,
            lambda: self.lambda.mul(&other.lambda)?,
        })
    }

    /// `[[lambda, lambda a], [0, lambda]]`.
    pub fn embed(&self) -> Result<LambdaMatrix> {
        let trunc = self.lambda.trunc();
        LambdaMatrix::from_entries(&[
            vec![self.lambda.clone(), self.lambda.mul(&self.a)?],
            vec![Jet::zero(trunc), self.lambda.clone()],
        ])
    }
}

fn t_times(a: &Jet) -> Jet {
    let mut c = vec![Complex64::new(0.0, 0.0)];
    c.extend_from_slice(&a.coeffs()[..a.coeffs().len() - 1]);
    Jet::new(c).expect("same length")
}

/// `n_embed(a) = [[e^{ta}, e^{ta} a], [0, e^{ta}]]`.
pub fn n_embed(a: &Jet) -> LambdaMatrix {
    NPoint::from_a(a.clone()).embed().expect("same truncation")
}

/// `T = -(1/2 pi i) [[t, 1], [0, t]]` over `C[t]/(t^m)`.
pub fn paper_example(m: usize) -> Result<ConstantLogConnection> {
    example_with_offdiag(m, 1.0)
}

/// The same family with `T_12 = -c/(2 pi i)`.
pub fn example_with_offdiag(m: usize, c: f64) -> Result<ConstantLogConnection> {
    let trunc = Truncation::new(m)?;
    let factor = Complex64::new(0.0, 1.0 / (2.0 * std::f64::consts::PI));
    let t = Jet::t(trunc);
    let base = LambdaMatrix::from_entries(&[
        vec![t.clone(), Jet::constant(Complex64::new(c, 0.0), trunc)],
        vec![Jet::zero(trunc), t],
    ])?;
    Ok(ConstantLogConnection::single(base.scale(factor)))
}

/// Outcome of [`n_membership`]; failing the test is a value, not an error.
#[derive(Debug, Clone, PartialEq)]
pub enum Membership {
    Member(NPoint),
    NotInN(String),
}

pub fn n_membership(m: &LambdaMatrix) -> Membership {
    use Membership::NotInN;
    if m.shape() != (2, 2) {
        return NotInN(format!("shape {:?} is not 2x2", m.shape()));
    }
    let e = m.rows();
    let lower = e[1][0].coeffs().iter().map(|z| z.norm()).fold(0.0, f64::max);
    if lower > MEMBERSHIP_TOL {
        return NotInN(format!("lower-left entry is nonzero ({lower:.3e})"));
    }
    let diag = e[0][0].max_abs_diff(&e[1][1]).unwrap_or(f64::INFINITY);
    if diag > MEMBERSHIP_TOL {
        return NotInN(format!("diagonal entries differ ({diag:.3e})"));
    }
    let lambda = e[0][0].clone();
    let inv = match lambda.inv() {
        Ok(inv) => inv,
        Err(_) => return NotInN("diagonal entry is not a unit".into()),
    };
    let a = inv.mul(&e[0][1]).expect("same truncation");
    let point = NPoint { a, lambda };
    let defect = point.defect();
    if defect > MEMBERSHIP_TOL {
        return NotInN(format!("lambda differs from exp(t a) by {defect:.3e}"));
    }
    Membership::Member(point)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "group")]
pub enum GaloisReport {
    #[serde(rename = "N")]
    N {
        a: Jet,
        lambda: Jet,
        levels_checked: Vec<usize>,
    },
    #[serde(rename = "unknown")]
    Unknown {
        failed_at: String,
        level: usize,
        detail: String,
    },
}

impl GaloisReport {
    pub fn is_n(&self) -> bool {
        matches!(self, GaloisReport::N { .. })
    }
}

/// Monodromy of a single-branch rank-two connection, tested for membership in `N`.
pub fn verify_connection_galois(c: &ConstantLogConnection, ctx: &Context) -> Result<GaloisReport> {
    if c.branches() != 1 || c.rank() != 2 {
        return Err(Error::ShapeMismatch("expected a single-branch rank-2 connection".into()));
    }
    let level = c.trunc().order();
    let g = monodromy(c, ctx)?;
    Ok(match n_membership(&g.generators()[0]) {
        Membership::Member(p) => GaloisReport::N {
            a: p.a,
            lambda: p.lambda,
            levels_checked: vec![level],
        },
        Membership::NotInN(detail) => GaloisReport::Unknown {
            failed_at: "membership".into(),
            level,
            detail,
        },
    })
}

/// Runs the example at every order `2..=m` and checks that the generator is `(1, e^t)`.
pub fn verify_paper_galois(m: usize, ctx: &Context) -> Result<GaloisReport> {
    if m < 2 {
        return Err(Error::Invalid(format!("the example needs m >= 2, got {m}")));
    }
    let mut last = None;
    for level in 2..=m {
        let report = verify_connection_galois(&paper_example(level)?, ctx)?;
        let GaloisReport::N { a, lambda, .. } = report else {
            return Ok(report);
        };
        let trunc = a.trunc();
        let a_err = a.max_abs_diff(&Jet::one(trunc))?;
        let l_err = lambda.max_abs_diff(&Jet::t(trunc).exp())?;
        if a_err.max(l_err) > MEMBERSHIP_TOL {
            return Ok(GaloisReport::Unknown {
                failed_at: "identification".into(),
                level,
                detail: format!("generator is not (1, e^t): |a - 1| = {a_err:.3e}, |lambda - e^t| = {l_err:.3e}"),
            });
        }
        last = Some((a, lambda));
    }
    let (a, lambda) = last.expect("m >= 2");
    Ok(GaloisReport::N {
        a,
        lambda,
        levels_checked: (2..=m).collect(),
    })
}
