//! Logarithmic connections relative to `C[t]/(t^m)`.
//!
//! On a punctured polydisk every such connection is, locally, of the form
//! `d + sum_j T_j dx_j / x_j` with pairwise commuting residue matrices `T_j`,
//! one per branch `x_j = 0` of the divisor ([`ConstantLogConnection`]). In one
//! variable, polynomial coefficient connections `d + A(x) dx / x` are also
//! admitted ([`PolyLog1D`]) and reduced to that form by [`fuchs_normalize`].
//!
//! Branch indices are zero-based throughout.

mod fuchs;
mod homs;
mod monodromy;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use fuchs::{fuchs_normalize, fuchs_residual, poly_monodromy, FuchsNormalization, PolyLog1D};
pub use homs::{dissonance, dissonance_of_families, horizontal_homs, HomSpace, LaurentHom};
pub use monodromy::{deligne_manin, monodromy, Representation};

use crate::artinian::Truncation;
use crate::error::{Error, Result};
use crate::lambda_linalg::{spectrum, LambdaMatrix, Tolerances};

/// `d + sum_j T_j dx_j / x_j` on an `n_vars`-dimensional polydisk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "wire::ConstantLogWire", into = "wire::ConstantLogWire")]
pub struct ConstantLogConnection {
    n_vars: usize,
    residues: Vec<LambdaMatrix>,
}

impl ConstantLogConnection {
    /// Shapes are checked here; integrability is not (see [`curvature_check`]).
    pub fn new(n_vars: usize, residues: Vec<LambdaMatrix>) -> Result<Self> {
        let first = residues
            .first()
            .ok_or_else(|| Error::Invalid("a connection needs at least one branch".into()))?;
        if residues.len() > n_vars {
            return Err(Error::ShapeMismatch(format!(
                "{} branches exceed {} variables",
                residues.len(),
                n_vars
            )));
        }
        for t in &residues[1..] {
            first.check_same_shape(t)?;
        }
        Ok(ConstantLogConnection { n_vars, residues })
    }

    /// One variable, one branch.
    pub fn single(residue: LambdaMatrix) -> Self {
        ConstantLogConnection {
            n_vars: 1,
            residues: vec![residue],
        }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn branches(&self) -> usize {
        self.residues.len()
    }

    pub fn rank(&self) -> usize {
        self.residues[0].n()
    }

    pub fn trunc(&self) -> Truncation {
        self.residues[0].trunc()
    }

    pub fn residues(&self) -> &[LambdaMatrix] {
        &self.residues
    }

    pub(crate) fn map_residues(
        &self,
        f: impl FnMut(&LambdaMatrix) -> Result<LambdaMatrix>,
    ) -> Result<Self> {
        Ok(ConstantLogConnection {
            n_vars: self.n_vars,
            residues: self.residues.iter().map(f).collect::<Result<_>>()?,
        })
    }

    /// Largest coefficient-wise modulus of the residue differences.
    pub fn max_abs_diff(&self, other: &ConstantLogConnection) -> f64 {
        self.residues
            .iter()
            .zip(&other.residues)
            .map(|(a, b)| a.max_abs_diff(b))
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvatureReport {
    pub integrable: bool,
    pub worst_commutator: f64,
}

/// Integrability: all residue matrices commute, to relative `check_tol`.
pub fn curvature_check(c: &ConstantLogConnection, tol: &Tolerances) -> CurvatureReport {
    let mut worst: f64 = 0.0;
    let mut integrable = true;
    for (i, a) in c.residues.iter().enumerate() {
        for b in &c.residues[i + 1..] {
            let norm = a.commutator(b).norm();
            worst = worst.max(norm);
            if norm > tol.check_tol * (a.norm() * b.norm()).max(1.0) {
                integrable = false;
            }
        }
    }
    CurvatureReport {
        integrable,
        worst_commutator: worst,
    }
}

pub fn residue(c: &ConstantLogConnection, branch: usize) -> Result<&LambdaMatrix> {
    c.residues.get(branch).ok_or(Error::BranchOutOfRange {
        branch,
        branches: c.branches(),
    })
}

/// Eigenvalues of the residue along `branch`, reduced modulo `t`.
pub fn exponents(c: &ConstantLogConnection, branch: usize, tol: &Tolerances) -> Result<Vec<Complex64>> {
    Ok(spectrum(residue(c, branch)?, tol))
}

pub fn all_exponents(c: &ConstantLogConnection, tol: &Tolerances) -> Vec<Vec<Complex64>> {
    c.residues.iter().map(|t| spectrum(t, tol)).collect()
}

/// Tensor with `O(kY)`: every residue becomes `T_j - k I`.
pub fn twist(c: &ConstantLogConnection, k: i64) -> ConstantLogConnection {
    c.map_residues(|t| Ok(t.shift(Complex64::new(-(k as f64), 0.0))))
        .expect("infallible")
}

/// `T_j -> -T_j^T`.
pub fn dual(c: &ConstantLogConnection) -> ConstantLogConnection {
    c.map_residues(|t| Ok(-&t.transpose())).expect("infallible")
}

/// `T_j -> T_j (x) I + I (x) T'_j`.
pub fn tensor(a: &ConstantLogConnection, b: &ConstantLogConnection) -> Result<ConstantLogConnection> {
    if a.branches() != b.branches() || a.n_vars != b.n_vars {
        return Err(Error::ShapeMismatch(format!(
            "branch counts {} and {} differ",
            a.branches(),
            b.branches()
        )));
    }
    a.trunc().check_same(b.trunc())?;
    let (ra, rb) = (a.rank(), b.rank());
    let residues = a
        .residues
        .iter()
        .zip(&b.residues)
        .map(|(ta, tb)| {
            let left = ta.kron(&LambdaMatrix::identity(rb, tb.trunc()))?;
            let right = LambdaMatrix::identity(ra, ta.trunc()).kron(tb)?;
            Ok(&left + &right)
        })
        .collect::<Result<Vec<_>>>()?;
    ConstantLogConnection::new(a.n_vars, residues)
}

pub(crate) mod wire {
    use super::*;

    pub(crate) fn check_kind(found: &str, expected: &str) -> Result<()> {
        if found != expected {
            return Err(Error::Invalid(format!(
                "expected type {expected:?}, found {found:?}"
            )));
        }
        Ok(())
    }

    pub(crate) fn check_matrices(mats: &[LambdaMatrix], rank: usize, m: usize) -> Result<()> {
        for t in mats {
            if t.shape() != (rank, rank) {
                return Err(Error::ShapeMismatch(format!(
                    "matrix of shape {:?} in rank-{rank} object",
                    t.shape()
                )));
            }
            if t.m() != m {
                return Err(Error::TruncationMismatch { left: m, right: t.m() });
            }
        }
        Ok(())
    }

    #[derive(Serialize, Deserialize)]
    pub struct ConstantLogWire {
        #[serde(rename = "type")]
        pub kind: String,
        pub n_vars: usize,
        pub branches: usize,
        pub rank: usize,
        pub m: usize,
        #[serde(rename = "T")]
        pub residues: Vec<LambdaMatrix>,
    }

    impl TryFrom<ConstantLogWire> for ConstantLogConnection {
        type Error = Error;

        fn try_from(w: ConstantLogWire) -> Result<Self> {
            check_kind(&w.kind, "constant_log")?;
            if w.residues.len() != w.branches {
                return Err(Error::ShapeMismatch(format!(
                    "declares {} branches but lists {} residues",
                    w.branches,
                    w.residues.len()
                )));
            }
            check_matrices(&w.residues, w.rank, w.m)?;
            ConstantLogConnection::new(w.n_vars, w.residues)
        }
    }

    impl From<ConstantLogConnection> for ConstantLogWire {
        fn from(c: ConstantLogConnection) -> Self {
            ConstantLogWire {
                kind: "constant_log".into(),
                n_vars: c.n_vars,
                branches: c.branches(),
                rank: c.rank(),
                m: c.trunc().order(),
                residues: c.residues,
            }
        }
    }
}
