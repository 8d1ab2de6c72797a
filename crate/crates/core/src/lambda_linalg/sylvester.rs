//! Linear equations `X R - L X - k X = C` over `C[t]/(t^m)`, solved on the
//! `n^2 m` complex coordinates of `X`.

use nalgebra::DVector;
use num_complex::Complex64;

use super::matrix::{c, CMatrix, LambdaMatrix};
use super::Tolerances;
use crate::error::{Error, Result};

/// Matrix of `X -> X right - left X - k X` on the coordinates of
/// [`LambdaMatrix::to_vector`]; `X` has as many rows as `left` and as many
/// columns as `right`.
pub fn sylvester_operator(left: &LambdaMatrix, right: &LambdaMatrix, k: Complex64) -> Result<CMatrix> {
    left.trunc().check_same(right.trunc())?;
    if !left.is_square() || !right.is_square() {
        return Err(Error::ShapeMismatch("Sylvester coefficients must be square".into()));
    }
    let (rows, cols, trunc) = (left.n(), right.n(), left.trunc());
    let dim = rows * cols * trunc.order();
    let mut op = CMatrix::zeros(dim, dim);
    let mut unit = vec![c(0.0, 0.0); dim];
    for col in 0..dim {
        unit[col] = c(1.0, 0.0);
        let x = LambdaMatrix::from_vector_rect(rows, cols, trunc, &unit);
        let image = &(&(&x * right) - &(left * &x)) - &x.scale(k);
        for (row, v) in image.to_vector().into_iter().enumerate() {
            op[(row, col)] = v;
        }
        unit[col] = c(0.0, 0.0);
    }
    Ok(op)
}

/// A `C`-basis, in reduced row echelon form, of `{ X : X A - B X = k X }`.
/// `X` is `B.n() x A.n()`.
pub fn sylvester_kernel(
    a: &LambdaMatrix,
    b: &LambdaMatrix,
    k: i64,
    tol: &Tolerances,
) -> Result<Vec<LambdaMatrix>> {
    let op = sylvester_operator(b, a, c(k as f64, 0.0))?;
    let dim = op.ncols();
    let svd = op.svd(false, true);
    let v_t = svd.v_t.expect("requested");
    let smax = svd.singular_values.max();
    let cutoff = tol.zero_tol * smax.max(1.0);
    let null_rows: Vec<Vec<Complex64>> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, s)| **s <= cutoff)
        .map(|(i, _)| (0..dim).map(|j| v_t[(i, j)].conj()).collect())
        .collect();
    let basis = row_echelon(null_rows, 1e-9);
    Ok(basis
        .into_iter()
        .map(|v| LambdaMatrix::from_vector_rect(b.n(), a.n(), a.trunc(), &v))
        .collect())
}

/// Reduced row echelon form of the span of `rows`, dropping dependent rows.
fn row_echelon(mut rows: Vec<Vec<Complex64>>, pivot_tol: f64) -> Vec<Vec<Complex64>> {
    let Some(dim) = rows.first().map(Vec::len) else {
        return rows;
    };
    let mut rank = 0;
    for col in 0..dim {
        if rank == rows.len() {
            break;
        }
        let (best, mag) = (rank..rows.len())
            .map(|r| (r, rows[r][col].norm()))
            .fold((rank, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if mag <= pivot_tol {
            continue;
        }
        rows.swap(rank, best);
        let inv = rows[rank][col].inv();
        for v in rows[rank].iter_mut() {
            *v *= inv;
        }
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank {
                let f = row[col];
                if f.norm() != 0.0 {
                    for (x, p) in row.iter_mut().zip(&pivot) {
                        *x -= f * p;
                    }
                }
            }
        }
        rank += 1;
    }
    rows.truncate(rank);
    for row in rows.iter_mut() {
        for x in row.iter_mut() {
            if x.re.abs() < 1e-14 {
                x.re = 0.0;
            }
            if x.im.abs() < 1e-14 {
                x.im = 0.0;
            }
        }
    }
    rows
}

/// Unique solution of `X right - left X - k X = rhs`; `Singular` when the
/// operator is not invertible.
pub fn sylvester_solve(
    left: &LambdaMatrix,
    right: &LambdaMatrix,
    k: Complex64,
    rhs: &LambdaMatrix,
    tol: &Tolerances,
) -> Result<LambdaMatrix> {
    if rhs.shape() != (left.n(), right.n()) {
        return Err(Error::ShapeMismatch("right-hand side has the wrong shape".into()));
    }
    left.trunc().check_same(rhs.trunc())?;
    let op = sylvester_operator(left, right, k)?;
    let svd = op.clone().svd(false, false);
    if svd.singular_values.min() <= tol.zero_tol * svd.singular_values.max().max(1.0) {
        return Err(Error::Singular);
    }
    let b = DVector::from_vec(rhs.to_vector());
    let x = op.lu().solve(&b).ok_or(Error::Singular)?;
    Ok(LambdaMatrix::from_vector_rect(left.n(), right.n(), left.trunc(), x.as_slice()))
}
