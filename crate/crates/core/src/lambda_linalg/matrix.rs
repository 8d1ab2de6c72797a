use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::artinian::{Jet, Truncation};
use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

pub(crate) fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// A matrix over `C[t]/(t^m)`, stored as its coefficient matrices
/// `M = M_0 + t M_1 + ... + t^(m-1) M_(m-1)`.
///
/// Matrices are square unless built through [`LambdaMatrix::from_coeffs`]
/// with rectangular coefficients (arrows between connections of different
/// rank). Operations that only make sense for endomorphisms panic on
/// rectangular input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "wire::MatrixWire", into = "wire::MatrixWire")]
pub struct LambdaMatrix {
    coeffs: Vec<CMatrix>,
}

impl LambdaMatrix {
    pub fn from_coeffs(coeffs: Vec<CMatrix>) -> Result<Self> {
        let first = coeffs
            .first()
            .ok_or_else(|| Error::Invalid("matrix needs at least one coefficient".into()))?;
        let (r, c) = first.shape();
        if r == 0 || c == 0 {
            return Err(Error::Invalid("matrix must have positive size".into()));
        }
        if coeffs.iter().any(|m| m.shape() != (r, c)) {
            return Err(Error::ShapeMismatch(format!(
                "coefficient matrices must all be {r}x{c}"
            )));
        }
        Ok(LambdaMatrix { coeffs })
    }

    /// Matrix with entries in `C`, lifted to the given truncation.
    pub fn constant(fiber: CMatrix, trunc: Truncation) -> Self {
        let (r, c) = fiber.shape();
        let mut coeffs = vec![CMatrix::zeros(r, c); trunc.order()];
        coeffs[0] = fiber;
        LambdaMatrix { coeffs }
    }

    pub fn zeros(n: usize, trunc: Truncation) -> Self {
        LambdaMatrix::zeros_rect(n, n, trunc)
    }

    pub fn zeros_rect(rows: usize, cols: usize, trunc: Truncation) -> Self {
        LambdaMatrix {
            coeffs: vec![CMatrix::zeros(rows, cols); trunc.order()],
        }
    }

    pub fn identity(n: usize, trunc: Truncation) -> Self {
        LambdaMatrix::constant(CMatrix::identity(n, n), trunc)
    }

    pub fn scalar(s: &Jet, n: usize) -> Self {
        LambdaMatrix {
            coeffs: s
                .coeffs()
                .iter()
                .map(|&c| CMatrix::identity(n, n) * c)
                .collect(),
        }
    }

    pub fn from_entries(rows: &[Vec<Jet>]) -> Result<Self> {
        let nrows = rows.len();
        if nrows == 0 {
            return Err(Error::Invalid("matrix must have positive size".into()));
        }
        let ncols = rows[0].len();
        let trunc = rows[0]
            .first()
            .ok_or_else(|| Error::ShapeMismatch("empty row".into()))?
            .trunc();
        let mut coeffs = vec![CMatrix::zeros(nrows, ncols); trunc.order()];
        for (i, row) in rows.iter().enumerate() {
            if row.len() != ncols {
                return Err(Error::ShapeMismatch(format!(
                    "row {i} has {} entries, expected {ncols}",
                    row.len()
                )));
            }
            for (j, e) in row.iter().enumerate() {
                trunc.check_same(e.trunc())?;
                for (k, v) in e.coeffs().iter().enumerate() {
                    coeffs[k][(i, j)] = *v;
                }
            }
        }
        Ok(LambdaMatrix { coeffs })
    }

    /// Convenience constructor from real coefficient lists, `rows[i][j][k]`
    /// being the `t^k` coefficient of entry `(i, j)`.
    pub fn from_real(rows: &[&[&[f64]]]) -> Result<Self> {
        let jets = rows
            .iter()
            .map(|r| r.iter().map(|e| Jet::from_real(e)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        LambdaMatrix::from_entries(&jets)
    }

    /// Size of a square matrix.
    pub fn n(&self) -> usize {
        let (r, c) = self.shape();
        assert_eq!(r, c, "expected a square matrix");
        r
    }

    pub fn shape(&self) -> (usize, usize) {
        self.coeffs[0].shape()
    }

    pub fn is_square(&self) -> bool {
        let (r, c) = self.shape();
        r == c
    }

    pub fn m(&self) -> usize {
        self.coeffs.len()
    }

    pub fn trunc(&self) -> Truncation {
        Truncation::new(self.coeffs.len()).expect("nonempty by construction")
    }

    pub fn coeffs(&self) -> &[CMatrix] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &CMatrix {
        &self.coeffs[k]
    }

    pub fn entry(&self, i: usize, j: usize) -> Jet {
        Jet::new(self.coeffs.iter().map(|c| c[(i, j)]).collect()).expect("m >= 1")
    }

    pub fn rows(&self) -> Vec<Vec<Jet>> {
        let (r, c) = self.shape();
        (0..r)
            .map(|i| (0..c).map(|j| self.entry(i, j)).collect())
            .collect()
    }

    /// Reduction modulo `t`: the entrywise constant coefficients.
    pub fn residue_fiber(&self) -> CMatrix {
        self.coeffs[0].clone()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.iter().all(|z| z.re == 0.0 && z.im == 0.0))
    }

    pub fn check_same_shape(&self, other: &LambdaMatrix) -> Result<()> {
        self.trunc().check_same(other.trunc())?;
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch(format!(
                "{:?} vs {:?}",
                self.shape(),
                other.shape()
            )));
        }
        Ok(())
    }

    pub fn try_mul(&self, other: &LambdaMatrix) -> Result<LambdaMatrix> {
        self.trunc().check_same(other.trunc())?;
        if self.shape().1 != other.shape().0 {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {:?} by {:?}",
                self.shape(),
                other.shape()
            )));
        }
        Ok(self * other)
    }

    pub fn scale(&self, s: Complex64) -> LambdaMatrix {
        LambdaMatrix {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// Multiply every entry by the jet `s`.
    pub fn scale_jet(&self, s: &Jet) -> Result<LambdaMatrix> {
        self.trunc().check_same(s.trunc())?;
        Ok(&LambdaMatrix::scalar(s, self.shape().0) * self)
    }

    /// `self + s I` for a complex scalar `s`.
    pub fn shift(&self, s: Complex64) -> LambdaMatrix {
        let mut out = self.clone();
        for i in 0..self.n() {
            out.coeffs[0][(i, i)] += s;
        }
        out
    }

    pub fn transpose(&self) -> LambdaMatrix {
        LambdaMatrix {
            coeffs: self.coeffs.iter().map(|c| c.transpose()).collect(),
        }
    }

    /// Kronecker product over the ring.
    pub fn kron(&self, other: &LambdaMatrix) -> Result<LambdaMatrix> {
        self.trunc().check_same(other.trunc())?;
        let m = self.m();
        let (r1, c1) = self.shape();
        let (r2, c2) = other.shape();
        let mut coeffs = vec![CMatrix::zeros(r1 * r2, c1 * c2); m];
        for i in 0..m {
            for j in 0..m - i {
                coeffs[i + j] += self.coeffs[i].kronecker(&other.coeffs[j]);
            }
        }
        Ok(LambdaMatrix { coeffs })
    }

    pub fn pow(&self, e: usize) -> LambdaMatrix {
        let mut out = LambdaMatrix::identity(self.n(), self.trunc());
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    pub fn commutator(&self, other: &LambdaMatrix) -> LambdaMatrix {
        &(self * other) - &(other * self)
    }

    pub fn truncate(&self, m: usize) -> Result<LambdaMatrix> {
        if m == 0 || m > self.m() {
            return Err(Error::OrderViolation {
                from: self.m(),
                to: m,
            });
        }
        Ok(LambdaMatrix {
            coeffs: self.coeffs[..m].to_vec(),
        })
    }

    /// Frobenius norm of the coefficient stack, i.e. of all complex coordinates.
    pub fn norm(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|c| c.norm_squared())
            .sum::<f64>()
            .sqrt()
    }

    /// `sum_k |M_k|_F`; submultiplicative, used to pick scaling steps.
    pub fn sum_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    /// Largest coefficient-wise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &LambdaMatrix) -> f64 {
        assert_eq!(self.shape(), other.shape());
        assert_eq!(self.m(), other.m());
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .flat_map(|(a, b)| a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()))
            .fold(0.0, f64::max)
    }

    /// `|self - other|_F / max(1, |other|_F)`.
    pub fn rel_diff(&self, other: &LambdaMatrix) -> f64 {
        (self - other).norm() / other.norm().max(1.0)
    }

    /// Inverse over the ring; fails when the fiber is singular.
    pub fn inverse(&self, zero_tol: f64) -> Result<LambdaMatrix> {
        let n = self.n();
        let fiber = &self.coeffs[0];
        let svd = fiber.clone().svd(false, false);
        let smax = svd.singular_values.max();
        let smin = svd.singular_values.min();
        if smin <= zero_tol * smax.max(1.0) {
            return Err(Error::Singular);
        }
        let b0 = fiber.clone().try_inverse().ok_or(Error::Singular)?;
        let m = self.m();
        let mut b: Vec<CMatrix> = Vec::with_capacity(m);
        b.push(b0.clone());
        for k in 1..m {
            let mut s = CMatrix::zeros(n, n);
            for i in 1..=k {
                s += &self.coeffs[i] * &b[k - i];
            }
            b.push(-(&b0 * s));
        }
        Ok(LambdaMatrix { coeffs: b })
    }

    /// The matrix of `M` acting `C`-linearly on `C^(n m)`, coordinates of
    /// `sum_k t^k v_k` ordered as `k n + i`. Block-lower-triangular Toeplitz.
    pub fn realization(&self) -> CMatrix {
        let (n, m) = (self.n(), self.m());
        let mut r = CMatrix::zeros(n * m, n * m);
        for row in 0..m {
            for col in 0..=row {
                r.view_mut((row * n, col * n), (n, n))
                    .copy_from(&self.coeffs[row - col]);
            }
        }
        r
    }

    /// Coordinates in `C^(rows cols m)`, index `k rows cols + i cols + j`.
    pub fn to_vector(&self) -> Vec<Complex64> {
        let (r, c) = self.shape();
        let mut v = Vec::with_capacity(r * c * self.m());
        for ck in &self.coeffs {
            for i in 0..r {
                for j in 0..c {
                    v.push(ck[(i, j)]);
                }
            }
        }
        v
    }

    pub fn from_vector(n: usize, trunc: Truncation, v: &[Complex64]) -> Self {
        LambdaMatrix::from_vector_rect(n, n, trunc, v)
    }

    pub fn from_vector_rect(rows: usize, cols: usize, trunc: Truncation, v: &[Complex64]) -> Self {
        assert_eq!(v.len(), rows * cols * trunc.order());
        let coeffs = v
            .chunks(rows * cols)
            .map(|chunk| CMatrix::from_row_slice(rows, cols, chunk))
            .collect();
        LambdaMatrix { coeffs }
    }
}

impl Mul for &LambdaMatrix {
    type Output = LambdaMatrix;

    /// Panics on shape mismatch; use [`LambdaMatrix::try_mul`] at API boundaries.
    fn mul(self, rhs: &LambdaMatrix) -> LambdaMatrix {
        assert_eq!(self.shape().1, rhs.shape().0, "inner dimension mismatch");
        assert_eq!(self.m(), rhs.m(), "truncation mismatch");
        let m = self.m();
        let mut coeffs = vec![CMatrix::zeros(self.shape().0, rhs.shape().1); m];
        for i in 0..m {
            if self.coeffs[i].iter().all(|z| *z == Complex64::new(0.0, 0.0)) {
                continue;
            }
            for j in 0..m - i {
                coeffs[i + j] += &self.coeffs[i] * &rhs.coeffs[j];
            }
        }
        LambdaMatrix { coeffs }
    }
}

impl Add for &LambdaMatrix {
    type Output = LambdaMatrix;

    fn add(self, rhs: &LambdaMatrix) -> LambdaMatrix {
        assert_eq!(self.shape(), rhs.shape(), "shape mismatch");
        assert_eq!(self.m(), rhs.m(), "truncation mismatch");
        LambdaMatrix {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &LambdaMatrix {
    type Output = LambdaMatrix;

    fn sub(self, rhs: &LambdaMatrix) -> LambdaMatrix {
        assert_eq!(self.shape(), rhs.shape(), "shape mismatch");
        assert_eq!(self.m(), rhs.m(), "truncation mismatch");
        LambdaMatrix {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &LambdaMatrix {
    type Output = LambdaMatrix;

    fn neg(self) -> LambdaMatrix {
        self.scale(c(-1.0, 0.0))
    }
}

pub(crate) mod wire {
    use super::*;

    /// `cols` appears only for rectangular matrices.
    #[derive(Serialize, Deserialize)]
    pub struct MatrixWire {
        pub n: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        pub cols: Option<usize>,
        pub m: usize,
        pub rows: Vec<Vec<Jet>>,
    }

    impl TryFrom<MatrixWire> for LambdaMatrix {
        type Error = Error;

        fn try_from(w: MatrixWire) -> Result<LambdaMatrix> {
            if w.rows.len() != w.n {
                return Err(Error::ShapeMismatch(format!(
                    "matrix declares n = {} but has {} rows",
                    w.n,
                    w.rows.len()
                )));
            }
            let mat = LambdaMatrix::from_entries(&w.rows)?;
            let cols = w.cols.unwrap_or(w.n);
            if mat.shape().1 != cols {
                return Err(Error::ShapeMismatch(format!(
                    "matrix declares {cols} columns but has {}",
                    mat.shape().1
                )));
            }
            if mat.m() != w.m {
                return Err(Error::TruncationMismatch {
                    left: w.m,
                    right: mat.m(),
                });
            }
            Ok(mat)
        }
    }

    impl From<LambdaMatrix> for MatrixWire {
        fn from(mat: LambdaMatrix) -> MatrixWire {
            let (rows, cols) = mat.shape();
            MatrixWire {
                n: rows,
                cols: (rows != cols).then_some(cols),
                m: mat.m(),
                rows: mat.rows(),
            }
        }
    }
}
