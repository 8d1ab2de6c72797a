//! Spectra, generalized eigenprojections and the multiplicative
//! Jordan-Chevalley decomposition of matrices over `C[t]/(t^m)`.
//!
//! The spectrum of `M` acting `C`-linearly on `C^(n m)` coincides with the
//! spectrum of its reduction modulo `t`, so every eigenvalue computation
//! happens on the `n x n` fiber. Projections are polynomials in `M`: a
//! Hermite interpolant against the factored characteristic polynomial of the
//! fiber gives an idempotent modulo `t`, which the polynomial iteration
//! `P <- 3P^2 - 2P^3` lifts to the unique idempotent of `C[M]` over it.

use num_complex::Complex64;

use super::matrix::{c, CMatrix, LambdaMatrix};
use super::Tolerances;
use crate::error::{Error, Result};

/// Eigenvalues of a complex square matrix, with multiplicity.
///
/// Triangular inputs are read off the diagonal so that exactly repeated
/// eigenvalues of defective fibers stay exactly repeated.
pub fn fiber_eigenvalues(fiber: &CMatrix) -> Vec<Complex64> {
    let n = fiber.nrows();
    let zero = c(0.0, 0.0);
    let upper = (0..n).all(|i| (0..i).all(|j| fiber[(i, j)] == zero));
    let lower = (0..n).all(|i| (i + 1..n).all(|j| fiber[(i, j)] == zero));
    if upper || lower {
        return (0..n).map(|i| fiber[(i, i)]).collect();
    }
    fiber
        .clone()
        .schur()
        .eigenvalues()
        .expect("complex Schur form is triangular")
        .iter()
        .copied()
        .collect()
}

/// Single-linkage clustering at absolute distance `tol`. Each cluster is
/// represented by its mean and carries its size. Output is sorted by real
/// part, then imaginary part.
pub fn cluster_eigenvalues(values: &[Complex64], tol: f64) -> Vec<(Complex64, usize)> {
    let n = values.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if (values[i] - values[j]).norm() <= tol {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<(usize, Complex64, usize)> = Vec::new();
    for i in 0..n {
        let root = find(&mut parent, i);
        match groups.iter_mut().find(|g| g.0 == root) {
            Some(g) => {
                g.1 += values[i];
                g.2 += 1;
            }
            None => groups.push((root, values[i], 1)),
        }
    }
    let mut out: Vec<(Complex64, usize)> = groups
        .into_iter()
        .map(|(_, sum, k)| (sum / k as f64, k))
        .collect();
    out.sort_by(|a, b| {
        a.0.re
            .total_cmp(&b.0.re)
            .then(a.0.im.total_cmp(&b.0.im))
    });
    out
}

/// Distinct eigenvalues of `M`, i.e. of its fiber modulo `t`.
pub fn spectrum(m: &LambdaMatrix, tol: &Tolerances) -> Vec<Complex64> {
    cluster_eigenvalues(&fiber_eigenvalues(&m.residue_fiber()), tol.cluster_tol)
        .into_iter()
        .map(|(rho, _)| rho)
        .collect()
}

/// Distinct eigenvalues with their generalized eigenprojections.
#[derive(Debug, Clone)]
pub struct SpectralData {
    pub eigenvalues: Vec<Complex64>,
    /// Algebraic multiplicity of each eigenvalue in the fiber.
    pub multiplicities: Vec<usize>,
    pub projections: Vec<LambdaMatrix>,
}

impl SpectralData {
    /// `sum_rho f(rho) P_rho`.
    pub fn apply(&self, f: impl Fn(Complex64) -> Complex64) -> LambdaMatrix {
        let first = &self.projections[0];
        let mut out = LambdaMatrix::zeros(first.n(), first.trunc());
        for (rho, p) in self.eigenvalues.iter().zip(&self.projections) {
            out = &out + &p.scale(f(*rho));
        }
        out
    }

    /// Worst violation among `sum P = I`, `P^2 = P`, `P_i P_j = 0`, `P M = M P`.
    pub fn defect(&self, m: &LambdaMatrix) -> f64 {
        let id = LambdaMatrix::identity(m.n(), m.trunc());
        let mut sum = LambdaMatrix::zeros(m.n(), m.trunc());
        let mut worst: f64 = 0.0;
        for (i, p) in self.projections.iter().enumerate() {
            sum = &sum + p;
            worst = worst.max((&(p * p) - p).norm());
            worst = worst.max(p.commutator(m).norm() / m.norm().max(1.0));
            for q in &self.projections[i + 1..] {
                worst = worst.max((p * q).norm());
            }
        }
        worst.max((&sum - &id).norm())
    }
}

/// `(1 / 2 pi i) \oint f(z) (z - M)^{-1} dz` over the circle of radius `radius`
/// around `center`, by the trapezoid rule. The rule is exact for the pole at
/// the center up to order `nodes`, and converges geometrically in the ratio
/// of `radius` to the distance of the nearest singularity outside.
pub(crate) fn riesz_integral(
    m: &LambdaMatrix,
    center: Complex64,
    radius: f64,
    f: impl Fn(Complex64) -> Complex64,
) -> LambdaMatrix {
    let (n, trunc) = (m.n(), m.trunc());
    let nodes = (4 * n * trunc.order()).max(64);
    let mut acc = LambdaMatrix::zeros(n, trunc);
    for j in 0..nodes {
        let w = Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * j as f64 / nodes as f64);
        let z = center + w;
        let resolvent = (-m).shift(z).inverse(0.0).expect("contour avoids the spectrum");
        acc = &acc + &resolvent.scale(f(z) * w);
    }
    acc.scale(c(1.0 / nodes as f64, 0.0))
}

/// Distance from cluster `i` to the nearest other cluster, infinite if alone.
pub(crate) fn separation(clusters: &[(Complex64, usize)], i: usize) -> f64 {
    clusters
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != i)
        .map(|(_, o)| (o.0 - clusters[i].0).norm())
        .fold(f64::INFINITY, f64::min)
}

fn idempotent_lift(mut p: LambdaMatrix) -> LambdaMatrix {
    let steps = usize::BITS - p.m().leading_zeros() + 3;
    let mut defect = (&(&p * &p) - &p).norm();
    for _ in 0..steps {
        if defect == 0.0 {
            break;
        }
        let p2 = &p * &p;
        let p3 = &p2 * &p;
        let next = &p2.scale(c(3.0, 0.0)) - &p3.scale(c(2.0, 0.0));
        let next_defect = (&(&next * &next) - &next).norm();
        if next_defect > defect && defect < 1e-12 {
            break;
        }
        p = next;
        defect = next_defect;
    }
    p
}

/// Generalized eigenprojections of `M` as a `C`-linear map: Riesz integrals of
/// the resolvent over circles separating the fiber eigenvalue clusters,
/// polished by the idempotent iteration.
pub fn eigen_projections(m: &LambdaMatrix, tol: &Tolerances) -> SpectralData {
    let clusters = cluster_eigenvalues(&fiber_eigenvalues(&m.residue_fiber()), tol.cluster_tol);
    let (n, trunc) = (m.n(), m.trunc());
    let eigenvalues: Vec<Complex64> = clusters.iter().map(|c| c.0).collect();
    let multiplicities: Vec<usize> = clusters.iter().map(|c| c.1).collect();
    if clusters.len() == 1 {
        return SpectralData {
            eigenvalues,
            multiplicities,
            projections: vec![LambdaMatrix::identity(n, trunc)],
        };
    }
    let projections = (0..clusters.len())
        .map(|i| {
            let radius = 0.5 * separation(&clusters, i);
            idempotent_lift(riesz_integral(m, clusters[i].0, radius, |_| c(1.0, 0.0)))
        })
        .collect();
    SpectralData {
        eigenvalues,
        multiplicities,
        projections,
    }
}

/// `g = s u` with `s` semisimple and `u` unipotent, both polynomials in `g`.
#[derive(Debug, Clone)]
pub struct JCDecomposition {
    pub s: LambdaMatrix,
    pub u: LambdaMatrix,
    pub spectral: SpectralData,
}

pub fn jordan_chevalley(g: &LambdaMatrix, tol: &Tolerances) -> Result<JCDecomposition> {
    let spectral = eigen_projections(g, tol);
    if spectral.eigenvalues.iter().any(|rho| rho.norm() <= tol.zero_tol) {
        return Err(Error::Singular);
    }
    let s = spectral.apply(|rho| rho);
    let s_inv = spectral.apply(|rho| rho.inv());
    let u = &s_inv * g;
    Ok(JCDecomposition { s, u, spectral })
}
