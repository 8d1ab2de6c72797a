//! Arithmetic in the truncated ring `C[t]/(t^m)`.
//!
//! A [`Jet`] stores the `m` coefficients of `t^0 .. t^(m-1)`. Products are
//! convolutions truncated at degree `m - 1`; the maximal ideal consists of
//! the jets with vanishing constant term.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Constant terms with modulus at or below this are not units.
pub const UNIT_TOL: f64 = 1e-10;

/// Number of stored coefficients `m` of `C[t]/(t^m)`; always at least one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct Truncation(usize);

impl Truncation {
    pub fn new(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::Invalid("truncation order must be at least 1".into()));
        }
        Ok(Truncation(m))
    }

    pub fn order(self) -> usize {
        self.0
    }

    pub(crate) fn check_same(self, other: Truncation) -> Result<()> {
        if self != other {
            return Err(Error::TruncationMismatch {
                left: self.0,
                right: other.0,
            });
        }
        Ok(())
    }
}

impl TryFrom<usize> for Truncation {
    type Error = Error;

    fn try_from(m: usize) -> Result<Self> {
        Truncation::new(m)
    }
}

impl From<Truncation> for usize {
    fn from(t: Truncation) -> usize {
        t.0
    }
}

impl fmt::Display for Truncation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C[t]/(t^{})", self.0)
    }
}

/// Principal logarithm with the argument taken in `(-pi, pi]`.
///
/// `Complex64::ln` returns `-i pi` for `-1 - 0i`; the sign of a zero
/// imaginary part is ignored here.
pub fn principal_ln(z: Complex64) -> Complex64 {
    let arg = if z.im == 0.0 && z.re < 0.0 {
        PI
    } else {
        z.arg()
    };
    Complex64::new(z.norm().ln(), arg)
}

/// An element of `C[t]/(t^m)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "wire::JetWire", into = "wire::JetWire")]
pub struct Jet {
    coeffs: Vec<Complex64>,
}

impl Jet {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Invalid("a jet needs at least one coefficient".into()));
        }
        Ok(Jet { coeffs })
    }

    /// Jet with real coefficients.
    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Jet::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero(trunc: Truncation) -> Self {
        Jet {
            coeffs: vec![Complex64::new(0.0, 0.0); trunc.order()],
        }
    }

    pub fn constant(c: Complex64, trunc: Truncation) -> Self {
        let mut j = Jet::zero(trunc);
        j.coeffs[0] = c;
        j
    }

    pub fn one(trunc: Truncation) -> Self {
        Jet::constant(Complex64::new(1.0, 0.0), trunc)
    }

    /// The jet `t` (zero when `m = 1`).
    pub fn t(trunc: Truncation) -> Self {
        let mut j = Jet::zero(trunc);
        if trunc.order() > 1 {
            j.coeffs[1] = Complex64::new(1.0, 0.0);
        }
        j
    }

    pub fn trunc(&self) -> Truncation {
        Truncation(self.coeffs.len())
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn constant_term(&self) -> Complex64 {
        self.coeffs[0]
    }

    pub fn is_unit(&self) -> bool {
        self.coeffs[0].norm() > UNIT_TOL
    }

    pub fn add(&self, other: &Jet) -> Result<Jet> {
        self.trunc().check_same(other.trunc())?;
        Ok(Jet {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Jet) -> Result<Jet> {
        self.trunc().check_same(other.trunc())?;
        Ok(Jet {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn scale(&self, c: Complex64) -> Jet {
        Jet {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Truncated convolution.
    pub fn mul(&self, other: &Jet) -> Result<Jet> {
        self.trunc().check_same(other.trunc())?;
        let m = self.coeffs.len();
        let mut out = vec![Complex64::new(0.0, 0.0); m];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs[..m - i].iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Ok(Jet { coeffs: out })
    }

    pub fn inv(&self) -> Result<Jet> {
        let a0 = self.coeffs[0];
        if a0.norm() <= UNIT_TOL {
            return Err(Error::NonUnit(a0.norm()));
        }
        let m = self.coeffs.len();
        let b0 = a0.inv();
        let mut b = vec![Complex64::new(0.0, 0.0); m];
        b[0] = b0;
        for k in 1..m {
            let s: Complex64 = (1..=k).map(|i| self.coeffs[i] * b[k - i]).sum();
            b[k] = -b0 * s;
        }
        Ok(Jet { coeffs: b })
    }

    /// Truncated exponential, from `k b_k = sum_j j a_j b_{k-j}`.
    pub fn exp(&self) -> Jet {
        let m = self.coeffs.len();
        let mut b = vec![Complex64::new(0.0, 0.0); m];
        b[0] = self.coeffs[0].exp();
        for k in 1..m {
            let s: Complex64 = (1..=k)
                .map(|j| self.coeffs[j] * b[k - j] * j as f64)
                .sum();
            b[k] = s / k as f64;
        }
        Jet { coeffs: b }
    }

    /// Principal logarithm on the constant term plus the finite series of
    /// `log(1 + n)` for the nilpotent part.
    pub fn log(&self) -> Result<Jet> {
        let a0 = self.coeffs[0];
        if a0.norm() <= UNIT_TOL {
            return Err(Error::NonUnit(a0.norm()));
        }
        let m = self.coeffs.len();
        let mut b = vec![Complex64::new(0.0, 0.0); m];
        b[0] = principal_ln(a0);
        for k in 1..m {
            let s: Complex64 = (1..k)
                .map(|j| b[j] * self.coeffs[k - j] * j as f64)
                .sum();
            b[k] = (self.coeffs[k] * k as f64 - s) / (a0 * k as f64);
        }
        Ok(Jet { coeffs: b })
    }

    /// Keep the first `m` coefficients.
    pub fn truncate(&self, m: usize) -> Result<Jet> {
        if m == 0 || m > self.coeffs.len() {
            return Err(Error::OrderViolation {
                from: self.coeffs.len(),
                to: m,
            });
        }
        Ok(Jet {
            coeffs: self.coeffs[..m].to_vec(),
        })
    }

    /// Largest coefficient-wise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Jet) -> Result<f64> {
        self.trunc().check_same(other.trunc())?;
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

impl fmt::Display for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.norm() == 0.0 && !(first && k + 1 == self.coeffs.len()) {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if c.im == 0.0 {
                write!(f, "{}", c.re)?;
            } else {
                write!(f, "({}{:+}i)", c.re, c.im)?;
            }
            match k {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{k}")?,
            }
        }
        Ok(())
    }
}

pub(crate) mod wire {
    use super::*;

    /// `[re, im]`
    pub type ComplexWire = [f64; 2];

    pub fn to_wire(c: Complex64) -> ComplexWire {
        [c.re, c.im]
    }

    pub fn from_wire(w: ComplexWire) -> Complex64 {
        Complex64::new(w[0], w[1])
    }

    #[derive(Serialize, Deserialize)]
    pub struct JetWire {
        pub m: usize,
        pub coeffs: Vec<ComplexWire>,
    }

    impl TryFrom<JetWire> for Jet {
        type Error = Error;

        fn try_from(w: JetWire) -> Result<Jet> {
            Truncation::new(w.m)?;
            if w.coeffs.len() != w.m {
                return Err(Error::Invalid(format!(
                    "jet declares m = {} but has {} coefficients",
                    w.m,
                    w.coeffs.len()
                )));
            }
            Jet::new(w.coeffs.into_iter().map(from_wire).collect())
        }
    }

    impl From<Jet> for JetWire {
        fn from(j: Jet) -> JetWire {
            JetWire {
                m: j.coeffs.len(),
                coeffs: j.coeffs.into_iter().map(to_wire).collect(),
            }
        }
    }
}
