//! The logarithm with spectrum in the strip `tau = { 0 <= Re z < 1 }`.
//!
//! For invertible `g` there is exactly one `T` with `exp(-2 pi i T) = g` and
//! spectrum in `tau`; it is a polynomial in `g`, so it commutes with
//! everything that commutes with `g`. It is computed as a Riesz-Dunford
//! integral of the resolvent of `g`, one circle per fiber eigenvalue.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::matrix::{c, LambdaMatrix};
use super::spectral::{cluster_eigenvalues, fiber_eigenvalues, riesz_integral, separation};
use super::Tolerances;
use crate::artinian::principal_ln;
use crate::error::{Error, Result};

/// The unique `l` in `tau` with `exp(-2 pi i l) = rho`.
pub fn tau_exponent(rho: Complex64) -> Complex64 {
    let ln = principal_ln(rho);
    // -2 pi i l = ln(r) + i theta  =>  l = -theta / 2pi + i ln(r) / 2pi
    let x = -ln.im / (2.0 * PI);
    let mut re = x - x.floor();
    if re >= 1.0 - 1e-14 {
        re = 0.0;
    }
    Complex64::new(re, ln.re / (2.0 * PI))
}

/// Membership in `tau`, allowing `tol` of slack below the left edge.
pub fn in_tau(z: Complex64, tol: f64) -> bool {
    z.re >= -tol && z.re < 1.0
}

/// `T` with `exp(-2 pi i T) = g`, spectrum in `tau`, commuting with every
/// member of `commutant`.
pub fn mlog_tau(
    g: &LambdaMatrix,
    commutant: &[LambdaMatrix],
    tol: &Tolerances,
) -> Result<LambdaMatrix> {
    for (index, h) in commutant.iter().enumerate() {
        g.check_same_shape(h)?;
        let norm = g.commutator(h).norm();
        if norm > tol.check_tol * (g.norm() * h.norm()).max(1.0) {
            return Err(Error::NonCommuting { index, norm });
        }
    }
    let clusters = cluster_eigenvalues(&fiber_eigenvalues(&g.residue_fiber()), tol.cluster_tol);
    if clusters.iter().any(|(rho, _)| rho.norm() <= tol.zero_tol) {
        return Err(Error::Singular);
    }
    if let [(rho, _)] = clusters[..] {
        return Ok(single_cluster_log(g, rho));
    }
    let mut out = LambdaMatrix::zeros(g.n(), g.trunc());
    for (i, &(rho, _)) in clusters.iter().enumerate() {
        // on the disk around rho, l(z) = l(rho) + (i / 2 pi) ln(z / rho) is the
        // branch of -ln(z) / 2 pi i through the tau exponent of rho
        let radius = 0.5 * separation(&clusters, i).min(rho.norm());
        let base = tau_exponent(rho);
        let ell = |z: Complex64| base + c(0.0, 1.0 / (2.0 * PI)) * (z / rho).ln();
        out = &out + &riesz_integral(g, rho, radius, ell);
    }
    Ok(out)
}

/// `l(rho) I + (i / 2 pi) log(g / rho)` when `g / rho - I` is nilpotent; the
/// series terminates.
fn single_cluster_log(g: &LambdaMatrix, rho: Complex64) -> LambdaMatrix {
    let (n, trunc) = (g.n(), g.trunc());
    let v = g.scale(rho.inv()).shift(c(-1.0, 0.0));
    let mut log_u = LambdaMatrix::zeros(n, trunc);
    let mut power = LambdaMatrix::identity(n, trunc);
    for k in 1..=n * g.m() {
        power = &power * &v;
        if power.norm() == 0.0 {
            break;
        }
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        log_u = &log_u + &power.scale(c(sign / k as f64, 0.0));
    }
    &LambdaMatrix::identity(n, trunc).scale(tau_exponent(rho)) + &log_u.scale(c(0.0, 1.0 / (2.0 * PI)))
}
