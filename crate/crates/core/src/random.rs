//! Seeded generators of random instances for property suites.
//!
//! All generators draw from a caller-supplied RNG so that suites are
//! reproducible from a single seed.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use crate::artinian::{Jet, Truncation};
use crate::lambda_linalg::{fiber_eigenvalues, CMatrix, LambdaMatrix};

pub fn complex<R: Rng + ?Sized>(rng: &mut R, scale: f64) -> Complex64 {
    Complex64::new(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale))
}

pub fn jet<R: Rng + ?Sized>(rng: &mut R, trunc: Truncation, scale: f64) -> Jet {
    Jet::new((0..trunc.order()).map(|_| complex(rng, scale)).collect()).expect("m >= 1")
}

pub fn fiber<R: Rng + ?Sized>(rng: &mut R, n: usize, scale: f64) -> CMatrix {
    DMatrix::from_fn(n, n, |_, _| complex(rng, scale))
}

/// Entries with every coefficient uniform in the square of half-width `scale`.
pub fn matrix<R: Rng + ?Sized>(rng: &mut R, n: usize, trunc: Truncation, scale: f64) -> LambdaMatrix {
    LambdaMatrix::from_coeffs((0..trunc.order()).map(|_| fiber(rng, n, scale)).collect())
        .expect("square coefficients")
}

fn min_gap(vals: &[Complex64]) -> f64 {
    let mut gap = f64::INFINITY;
    for i in 0..vals.len() {
        for j in i + 1..vals.len() {
            gap = gap.min((vals[i] - vals[j]).norm());
        }
    }
    gap
}

/// Random matrix whose fiber eigenvalues are pairwise at least `gap` apart
/// and at least `gap` away from zero.
pub fn separated_matrix<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    trunc: Truncation,
    gap: f64,
) -> LambdaMatrix {
    loop {
        let m = matrix(rng, n, trunc, 1.0);
        let vals = fiber_eigenvalues(&m.residue_fiber());
        if min_gap(&vals) >= gap && vals.iter().all(|v| v.norm() >= gap) {
            return m;
        }
    }
}

/// Random invertible matrix with fiber condition number below `1 / gap`.
pub fn invertible<R: Rng + ?Sized>(rng: &mut R, n: usize, trunc: Truncation) -> LambdaMatrix {
    loop {
        let m = matrix(rng, n, trunc, 1.0);
        let sv = m.residue_fiber().svd(false, false).singular_values;
        if sv.min() >= 0.1 * sv.max() {
            return m;
        }
    }
}

/// `V U V^-1` where `U` is upper triangular modulo `t` with the prescribed
/// fiber eigenvalues and `V` is a random invertible matrix.
pub fn with_fiber_spectrum<R: Rng + ?Sized>(
    rng: &mut R,
    eigenvalues: &[Complex64],
    trunc: Truncation,
) -> LambdaMatrix {
    let n = eigenvalues.len();
    let mut coeffs: Vec<CMatrix> = (0..trunc.order()).map(|_| fiber(rng, n, 0.5)).collect();
    for i in 0..n {
        for j in 0..i {
            coeffs[0][(i, j)] = Complex64::new(0.0, 0.0);
        }
        coeffs[0][(i, i)] = eigenvalues[i];
    }
    let u = LambdaMatrix::from_coeffs(coeffs).expect("square");
    let v = invertible(rng, n, trunc);
    let v_inv = v.inverse(1e-12).expect("well conditioned");
    &(&v * &u) * &v_inv
}

/// How to draw the constant terms of block eigenvalues in [`commuting_family`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Placement {
    /// Real part in `[0, 1)`, imaginary part in `[-0.3, 0.3]`.
    Tau,
    /// Anywhere in the square of half-width 1.
    Free,
}

fn placed<R: Rng + ?Sized>(rng: &mut R, placement: Placement) -> Complex64 {
    match placement {
        Placement::Tau => Complex64::new(rng.gen_range(0.0..1.0), rng.gen_range(-0.3..0.3)),
        Placement::Free => complex(rng, 1.0),
    }
}

/// `count` pairwise commuting rank-`n` matrices.
///
/// Built as `V X_j V^-1` with `V = I + t W` and `X_j` block diagonal, each
/// block `lambda I + c J` for a fixed nilpotent Jordan shift `J`, so fibers
/// are upper triangular and may be defective.
pub fn commuting_family<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    trunc: Truncation,
    count: usize,
    placement: Placement,
) -> Vec<LambdaMatrix> {
    let mut sizes = Vec::new();
    let mut left = n;
    while left > 0 {
        let s = rng.gen_range(1..=left);
        sizes.push(s);
        left -= s;
    }
    let mut w_coeffs: Vec<CMatrix> = (0..trunc.order()).map(|_| fiber(rng, n, 0.5)).collect();
    w_coeffs[0] = CMatrix::identity(n, n);
    let v = LambdaMatrix::from_coeffs(w_coeffs).expect("square");
    let v_inv = v.inverse(1e-12).expect("unipotent fiber");
    (0..count)
        .map(|_| {
            let mut x = LambdaMatrix::zeros(n, trunc);
            let mut offset = 0;
            for &s in &sizes {
                let mut lambda = jet(rng, trunc, 0.5);
                let mut coeffs = lambda.coeffs().to_vec();
                coeffs[0] = placed(rng, placement);
                lambda = Jet::new(coeffs).expect("m >= 1");
                let shift = jet(rng, trunc, 1.0);
                let mut block = vec![CMatrix::zeros(n, n); trunc.order()];
                for (k, bk) in block.iter_mut().enumerate() {
                    for i in 0..s {
                        bk[(offset + i, offset + i)] = lambda.coeffs()[k];
                        if i + 1 < s {
                            bk[(offset + i, offset + i + 1)] = shift.coeffs()[k];
                        }
                    }
                }
                x = &x + &LambdaMatrix::from_coeffs(block).expect("square");
                offset += s;
            }
            &(&v * &x) * &v_inv
        })
        .collect()
}

/// `count` pairwise commuting matrices given as polynomials of degree below
/// `n` in one random matrix with well separated fiber eigenvalues.
pub fn polynomial_family<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    trunc: Truncation,
    count: usize,
) -> Vec<LambdaMatrix> {
    let base = separated_matrix(rng, n, trunc, 0.2);
    (0..count)
        .map(|_| {
            let mut acc = LambdaMatrix::zeros(n, trunc);
            let mut power = LambdaMatrix::identity(n, trunc);
            for _ in 0..n {
                acc = &acc + &power.scale(complex(rng, 0.6));
                power = &power * &base;
            }
            acc
        })
        .collect()
}
