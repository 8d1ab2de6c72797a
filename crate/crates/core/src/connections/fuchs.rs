//! Fuchsian normalization in one variable.
//!
//! `nabla = d + A(x) dx/x` with `A(x) = sum_{i <= K} A_i x^i`. A gauge
//! `G(x) = sum_k G_k x^k`, `G_0 = I`, with `x G' + A G - G A_0 = 0` modulo
//! `x^{K+1}` carries the connection to the constant one `d + A_0 dx/x`.
//! Degree by degree:
//!
//! `(A_0 + k) G_k - G_k A_0 = -sum_{i=1..k} A_i G_{k-i}`,
//!
//! uniquely solvable when no two exponents of `A_0` differ by `k`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::homs::as_integer;
use super::monodromy::Representation;
use super::wire::{check_kind, check_matrices};
use super::ConstantLogConnection;
use crate::artinian::Truncation;
use crate::error::{Error, Result};
use crate::lambda_linalg::{spectrum, sylvester_solve, Context, LambdaMatrix};

/// `A_0 + A_1 x + ... + A_K x^K`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PolyLogWire", into = "PolyLogWire")]
pub struct PolyLog1D {
    coeffs: Vec<LambdaMatrix>,
}

impl PolyLog1D {
    pub fn new(coeffs: Vec<LambdaMatrix>) -> Result<Self> {
        let first = coeffs
            .first()
            .ok_or_else(|| Error::Invalid("a polynomial connection needs A_0".into()))?;
        if !first.is_square() {
            return Err(Error::ShapeMismatch("connection matrices must be square".into()));
        }
        for a in &coeffs[1..] {
            first.check_same_shape(a)?;
        }
        Ok(PolyLog1D { coeffs })
    }

    pub fn coeffs(&self) -> &[LambdaMatrix] {
        &self.coeffs
    }

    /// `K`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn rank(&self) -> usize {
        self.coeffs[0].n()
    }

    pub fn trunc(&self) -> Truncation {
        self.coeffs[0].trunc()
    }

    /// `A_0`.
    pub fn residue(&self) -> &LambdaMatrix {
        &self.coeffs[0]
    }
}

#[derive(Serialize, Deserialize)]
struct PolyLogWire {
    #[serde(rename = "type")]
    kind: String,
    rank: usize,
    m: usize,
    order: usize,
    #[serde(rename = "A")]
    coeffs: Vec<LambdaMatrix>,
}

impl TryFrom<PolyLogWire> for PolyLog1D {
    type Error = Error;

    fn try_from(w: PolyLogWire) -> Result<Self> {
        check_kind(&w.kind, "poly_log_1d")?;
        if w.coeffs.len() != w.order + 1 {
            return Err(Error::ShapeMismatch(format!(
                "order {} needs {} coefficients, got {}",
                w.order,
                w.order + 1,
                w.coeffs.len()
            )));
        }
        check_matrices(&w.coeffs, w.rank, w.m)?;
        PolyLog1D::new(w.coeffs)
    }
}

impl From<PolyLog1D> for PolyLogWire {
    fn from(p: PolyLog1D) -> Self {
        PolyLogWire {
            kind: "poly_log_1d".into(),
            rank: p.rank(),
            m: p.trunc().order(),
            order: p.order(),
            coeffs: p.coeffs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FuchsNormalization {
    /// `G_0 = I, G_1, .., G_K`.
    pub gauge: Vec<LambdaMatrix>,
    pub normalized: ConstantLogConnection,
}

/// Positive integers `k <= max_k` that occur as exponent differences.
fn resonances(exps: &[Complex64], max_k: usize, tol: f64) -> Vec<i64> {
    let mut out: Vec<i64> = exps
        .iter()
        .flat_map(|a| exps.iter().map(move |b| a - b))
        .filter_map(|d| as_integer(d, tol))
        .filter(|k| *k >= 1 && *k as usize <= max_k)
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

pub fn fuchs_normalize(p: &PolyLog1D, ctx: &Context) -> Result<FuchsNormalization> {
    let tol = &ctx.tol;
    let a0 = p.residue();
    let res = resonances(&spectrum(a0, tol), p.order(), tol.cluster_tol);
    if !res.is_empty() {
        return Err(Error::Resonant(res));
    }
    let mut gauge = vec![LambdaMatrix::identity(p.rank(), p.trunc())];
    for k in 1..=p.order() {
        let mut rhs = LambdaMatrix::zeros(p.rank(), p.trunc());
        for i in 1..=k {
            rhs = &rhs + &(&p.coeffs[i] * &gauge[k - i]);
        }
        gauge.push(sylvester_solve(a0, a0, Complex64::new(k as f64, 0.0), &rhs, tol)?);
    }
    Ok(FuchsNormalization {
        gauge,
        normalized: ConstantLogConnection::single(a0.clone()),
    })
}

/// Coefficients of `x G' + A G - G A_0` in degrees `0..=K`.
pub fn fuchs_residual(p: &PolyLog1D, gauge: &[LambdaMatrix]) -> Result<Vec<LambdaMatrix>> {
    if gauge.len() != p.coeffs.len() {
        return Err(Error::ShapeMismatch(format!(
            "gauge has {} coefficients, connection {}",
            gauge.len(),
            p.coeffs.len()
        )));
    }
    let a0 = p.residue();
    Ok((0..gauge.len())
        .map(|k| {
            let mut r = &gauge[k].scale(Complex64::new(k as f64, 0.0)) - &(&gauge[k] * a0);
            for i in 0..=k {
                r = &r + &(&p.coeffs[i] * &gauge[k - i]);
            }
            r
        })
        .collect())
}

/// Monodromy of the normalized model, `exp(-2 pi i A_0)`.
pub fn poly_monodromy(p: &PolyLog1D, ctx: &Context) -> Result<Representation> {
    let norm = fuchs_normalize(p, ctx)?;
    super::monodromy(&norm.normalized, ctx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambda_linalg::Tolerances;

    #[test]
    fn triangular_example() {
        // A(x) = [[0, x], [0, 1/2]]
        let a0 = LambdaMatrix::from_real(&[&[&[0.0], &[0.0]], &[&[0.0], &[0.5]]]).unwrap();
        let a1 = LambdaMatrix::from_real(&[&[&[0.0], &[1.0]], &[&[0.0], &[0.0]]]).unwrap();
        let p = PolyLog1D::new(vec![a0, a1]).unwrap();
        let n = fuchs_normalize(&p, &Context::default()).unwrap();
        // degree one: (A_0 + 1) G_1 - G_1 A_0 = -E_12 forces G_12 (1 - 1/2) = -1
        let g12 = n.gauge[1].entry(0, 1).constant_term();
        assert!((g12 - Complex64::new(-2.0, 0.0)).norm() < 1e-12);
        for r in fuchs_residual(&p, &n.gauge).unwrap() {
            assert!(r.norm() < 1e-12);
        }
    }

    #[test]
    fn constant_connection_needs_no_gauge() {
        let a0 = LambdaMatrix::from_real(&[&[&[0.2, 1.0], &[0.0, 0.0]], &[&[0.0, 0.0], &[0.3, 0.0]]]).unwrap();
        let z = LambdaMatrix::zeros(2, a0.trunc());
        let p = PolyLog1D::new(vec![a0.clone(), z.clone(), z]).unwrap();
        let n = fuchs_normalize(&p, &Context::default()).unwrap();
        assert_eq!(n.gauge[0], LambdaMatrix::identity(2, a0.trunc()));
        assert!(n.gauge[1].is_zero() && n.gauge[2].is_zero());
    }

    #[test]
    fn resonant_instance_is_rejected() {
        let a0 = LambdaMatrix::from_real(&[&[&[0.0], &[0.0]], &[&[0.0], &[1.0]]]).unwrap();
        let a1 = LambdaMatrix::from_real(&[&[&[0.0], &[1.0]], &[&[0.0], &[0.0]]]).unwrap();
        let p = PolyLog1D::new(vec![a0, a1]).unwrap();
        assert_eq!(fuchs_normalize(&p, &Context::default()).unwrap_err(), Error::Resonant(vec![1]));
        // the same residue at order zero is fine
        let p0 = PolyLog1D::new(vec![p.residue().clone()]).unwrap();
        assert!(fuchs_normalize(&p0, &Context::default()).is_ok());
    }

    #[test]
    fn resonance_list() {
        let e = [Complex64::new(0.0, 0.0), Complex64::new(2.0, 0.0), Complex64::new(3.0 + 1e-12, 0.0)];
        assert_eq!(resonances(&e, 6, Tolerances::default().cluster_tol), vec![1, 2, 3]);
        assert_eq!(resonances(&e, 1, 1e-8), vec![1]);
    }

    #[test]
    fn json_round_trip() {
        let a0 = LambdaMatrix::from_real(&[&[&[0.25, 0.5]]]).unwrap();
        let p = PolyLog1D::new(vec![a0.clone(), a0]).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        assert!(s.starts_with(r#"{"type":"poly_log_1d","rank":1,"m":2,"order":1,"A":"#));
        assert_eq!(serde_json::from_str::<PolyLog1D>(&s).unwrap(), p);
        let bad = s.replace(r#""order":1"#, r#""order":2"#);
        assert!(serde_json::from_str::<PolyLog1D>(&bad).is_err());
    }
}
