//! Dissonance and horizontal morphisms between single-branch connections.
//!
//! A horizontal arrow `E -> F` away from `x = 0` is a matrix Laurent
//! polynomial `Phi(x) = sum_k Phi_k x^k` with `x Phi' = Phi T_E - T_F Phi`.
//! The equation splits by degree into `Phi_k T_E - T_F Phi_k = k Phi_k`,
//! which has nonzero solutions only when `k` is a difference of exponents
//! `e - f`. The pole order of any solution is therefore at most the
//! dissonance from `F` to `E`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{all_exponents, exponents, ConstantLogConnection};
use crate::error::{Error, Result};
use crate::lambda_linalg::{sylvester_kernel, Context, LambdaMatrix, Tolerances};

/// `Phi(x) = sum_{k >= k_min} Phi_k x^k` with `Phi_{k_min} != 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "LaurentWire", into = "LaurentWire")]
pub struct LaurentHom {
    k_min: i64,
    coeffs: Vec<LambdaMatrix>,
}

impl LaurentHom {
    /// Leading zero coefficients are stripped, so `k_min` may move up.
    pub fn new(k_min: i64, coeffs: Vec<LambdaMatrix>) -> Result<Self> {
        if let Some(first) = coeffs.first() {
            for c in &coeffs[1..] {
                first.check_same_shape(c)?;
            }
        }
        let skip = coeffs.iter().take_while(|c| c.is_zero()).count();
        Ok(LaurentHom {
            k_min: k_min + skip as i64,
            coeffs: coeffs.into_iter().skip(skip).collect(),
        })
    }

    pub fn monomial(k: i64, coeff: LambdaMatrix) -> Self {
        LaurentHom {
            k_min: k,
            coeffs: vec![coeff],
        }
    }

    pub fn k_min(&self) -> i64 {
        self.k_min
    }

    pub fn coeffs(&self) -> &[LambdaMatrix] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Order of the pole at `x = 0`; zero for holomorphic arrows.
    pub fn pole_order(&self) -> u64 {
        if self.coeffs.is_empty() {
            0
        } else {
            (-self.k_min).max(0) as u64
        }
    }

    /// Largest Frobenius norm over the coefficients of `x Phi' - Phi T_E + T_F Phi`.
    pub fn horizontality_defect(&self, t_e: &LambdaMatrix, t_f: &LambdaMatrix) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, phi)| {
                let k = (self.k_min + i as i64) as f64;
                let lhs = phi.scale(Complex64::new(k, 0.0));
                let rhs = &(phi * t_e) - &(t_f * phi);
                (&lhs - &rhs).norm()
            })
            .fold(0.0, f64::max)
    }
}

#[derive(Serialize, Deserialize)]
struct LaurentWire {
    k_min: i64,
    coeffs: Vec<LambdaMatrix>,
}

impl TryFrom<LaurentWire> for LaurentHom {
    type Error = Error;

    fn try_from(w: LaurentWire) -> Result<Self> {
        if w.coeffs.first().is_some_and(LambdaMatrix::is_zero) {
            return Err(Error::Invalid("leading Laurent coefficient must be nonzero".into()));
        }
        LaurentHom::new(w.k_min, w.coeffs)
    }
}

impl From<LaurentHom> for LaurentWire {
    fn from(h: LaurentHom) -> Self {
        LaurentWire {
            k_min: h.k_min,
            coeffs: h.coeffs,
        }
    }
}

/// Largest natural number in `union_j (B_j - A_j)`, or zero when there is none.
/// A difference counts as natural when within `int_tol` of one.
pub fn dissonance_of_families(b: &[Vec<Complex64>], a: &[Vec<Complex64>], int_tol: f64) -> Result<u64> {
    if a.len() != b.len() {
        return Err(Error::ShapeMismatch(format!(
            "exponent families indexed by {} and {} branches",
            b.len(),
            a.len()
        )));
    }
    let mut best = 0u64;
    for (bj, aj) in b.iter().zip(a) {
        for x in bj {
            for y in aj {
                if let Some(k) = as_integer(x - y, int_tol) {
                    if k >= 0 {
                        best = best.max(k as u64);
                    }
                }
            }
        }
    }
    Ok(best)
}

pub(crate) fn as_integer(z: Complex64, tol: f64) -> Option<i64> {
    let k = z.re.round();
    ((z.re - k).abs() <= tol && z.im.abs() <= tol).then_some(k as i64)
}

/// Dissonance from `F` to `E`: branch `j` of `F` is paired with branch `j` of `E`.
pub fn dissonance(f: &ConstantLogConnection, e: &ConstantLogConnection, tol: &Tolerances) -> Result<u64> {
    if f.branches() != e.branches() {
        return Err(Error::ShapeMismatch(format!(
            "branch counts {} and {} differ",
            f.branches(),
            e.branches()
        )));
    }
    dissonance_of_families(&all_exponents(f, tol), &all_exponents(e, tol), tol.cluster_tol)
}

/// A basis of horizontal arrows together with the bound it must respect.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HomSpace {
    pub basis: Vec<LaurentHom>,
    pub max_pole_order: u64,
    /// Dissonance from the target to the source.
    pub dissonance: u64,
}

/// Horizontal arrows `E -> F` between one-variable, single-branch connections.
pub fn horizontal_homs(
    e: &ConstantLogConnection,
    f: &ConstantLogConnection,
    ctx: &Context,
) -> Result<HomSpace> {
    for c in [e, f] {
        if c.branches() != 1 || c.n_vars() != 1 {
            return Err(Error::ShapeMismatch(
                "horizontal morphisms are computed for one variable and one branch".into(),
            ));
        }
    }
    e.trunc().check_same(f.trunc())?;
    let tol = &ctx.tol;
    let (t_e, t_f) = (&e.residues()[0], &f.residues()[0]);
    let exp_e = exponents(e, 0, tol)?;
    let exp_f = exponents(f, 0, tol)?;
    let diffs: Vec<Complex64> = exp_e
        .iter()
        .flat_map(|x| exp_f.iter().map(move |y| x - y))
        .filter(|d| d.im.abs() <= tol.cluster_tol)
        .collect();
    let mut basis = Vec::new();
    if !diffs.is_empty() {
        let lo = diffs.iter().map(|d| d.re).fold(f64::INFINITY, f64::min);
        let hi = diffs.iter().map(|d| d.re).fold(f64::NEG_INFINITY, f64::max);
        let (lo, hi) = ((lo - tol.cluster_tol).ceil() as i64, (hi + tol.cluster_tol).floor() as i64);
        for k in lo..=hi {
            for phi in sylvester_kernel(t_e, t_f, k, tol)? {
                basis.push(LaurentHom::monomial(k, phi));
            }
        }
    }
    let max_pole_order = basis.iter().map(LaurentHom::pole_order).max().unwrap_or(0);
    Ok(HomSpace {
        basis,
        max_pole_order,
        dissonance: dissonance(f, e, tol)?,
    })
}
