use serde::{Deserialize, Serialize};

use super::wire::{check_kind, check_matrices};
use super::{curvature_check, ConstantLogConnection};
use crate::artinian::Truncation;
use crate::error::{Error, Result};
use crate::lambda_linalg::{mlog_tau, Context, LambdaMatrix, Tolerances};

/// Commuting automorphisms `g_1 .. g_m`, the images of the loops around the
/// branches; the fundamental group of the punctured polydisk is free abelian
/// on those loops.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RepresentationWire", into = "RepresentationWire")]
pub struct Representation {
    generators: Vec<LambdaMatrix>,
}

impl Representation {
    /// Shapes are checked here; commutation and invertibility by [`Representation::validate`].
    pub fn new(generators: Vec<LambdaMatrix>) -> Result<Self> {
        let first = generators
            .first()
            .ok_or_else(|| Error::Invalid("a representation needs at least one generator".into()))?;
        for g in &generators[1..] {
            first.check_same_shape(g)?;
        }
        Ok(Representation { generators })
    }

    pub fn generators(&self) -> &[LambdaMatrix] {
        &self.generators
    }

    pub fn branches(&self) -> usize {
        self.generators.len()
    }

    pub fn rank(&self) -> usize {
        self.generators[0].n()
    }

    pub fn trunc(&self) -> Truncation {
        self.generators[0].trunc()
    }

    pub fn validate(&self, tol: &Tolerances) -> Result<()> {
        for g in &self.generators {
            g.inverse(tol.zero_tol)?;
        }
        for (i, a) in self.generators.iter().enumerate() {
            for (j, b) in self.generators.iter().enumerate().skip(i + 1) {
                let norm = a.commutator(b).norm();
                if norm > tol.check_tol * (a.norm() * b.norm()).max(1.0) {
                    return Err(Error::NonCommuting { index: j, norm });
                }
            }
        }
        Ok(())
    }

    pub fn truncate(&self, m: usize) -> Result<Representation> {
        Ok(Representation {
            generators: self
                .generators
                .iter()
                .map(|g| g.truncate(m))
                .collect::<Result<_>>()?,
        })
    }

    pub fn max_abs_diff(&self, other: &Representation) -> f64 {
        self.generators
            .iter()
            .zip(&other.generators)
            .map(|(a, b)| a.max_abs_diff(b))
            .fold(0.0, f64::max)
    }

    /// Largest relative Frobenius distance over generators.
    pub fn rel_diff(&self, other: &Representation) -> f64 {
        self.generators
            .iter()
            .zip(&other.generators)
            .map(|(a, b)| a.rel_diff(b))
            .fold(0.0, f64::max)
    }
}

/// `g_j = exp(-2 pi i T_j)`.
pub fn monodromy(c: &ConstantLogConnection, ctx: &Context) -> Result<Representation> {
    let report = curvature_check(c, &ctx.tol);
    if !report.integrable {
        return Err(Error::NotIntegrable(report.worst_commutator));
    }
    Representation::new(c.residues().iter().map(|t| ctx.monodromy_of(t)).collect())
}

/// The logarithmic model with all exponents in `tau`: `T_j` is the
/// `tau`-logarithm of `g_j`, computed against the other generators.
pub fn deligne_manin(r: &Representation, ctx: &Context) -> Result<ConstantLogConnection> {
    r.validate(&ctx.tol)?;
    let residues = r
        .generators
        .iter()
        .enumerate()
        .map(|(j, g)| {
            let others: Vec<LambdaMatrix> = r
                .generators
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != j)
                .map(|(_, h)| h.clone())
                .collect();
            mlog_tau(g, &others, &ctx.tol)
        })
        .collect::<Result<Vec<_>>>()?;
    ConstantLogConnection::new(r.branches(), residues)
}

#[derive(Serialize, Deserialize)]
struct RepresentationWire {
    #[serde(rename = "type")]
    kind: String,
    branches: usize,
    rank: usize,
    m: usize,
    g: Vec<LambdaMatrix>,
}

impl TryFrom<RepresentationWire> for Representation {
    type Error = Error;

    fn try_from(w: RepresentationWire) -> Result<Self> {
        check_kind(&w.kind, "representation")?;
        if w.g.len() != w.branches {
            return Err(Error::ShapeMismatch(format!(
                "declares {} branches but lists {} generators",
                w.branches,
                w.g.len()
            )));
        }
        check_matrices(&w.g, w.rank, w.m)?;
        Representation::new(w.g)
    }
}

impl From<Representation> for RepresentationWire {
    fn from(r: Representation) -> Self {
        RepresentationWire {
            kind: "representation".into(),
            branches: r.branches(),
            rank: r.rank(),
            m: r.trunc().order(),
            g: r.generators,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambda_linalg::in_tau;
    use crate::random;
    use num_complex::Complex64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn ctx() -> Context {
        Context::default()
    }

    fn real(rows: &[&[&[f64]]]) -> LambdaMatrix {
        LambdaMatrix::from_real(rows).unwrap()
    }

    fn paper_connection() -> ConstantLogConnection {
        let base = real(&[&[&[0., 1.], &[1., 0.]], &[&[0., 0.], &[0., 1.]]]);
        ConstantLogConnection::single(base.scale(Complex64::new(0.0, 1.0 / (2.0 * PI))))
    }

    fn paper_monodromy() -> LambdaMatrix {
        real(&[&[&[1., 1.], &[1., 1.]], &[&[0., 0.], &[1., 1.]]])
    }

    #[test]
    fn monodromy_examples() {
        let r = monodromy(&paper_connection(), &ctx()).unwrap();
        assert!(r.generators()[0].max_abs_diff(&paper_monodromy()) < 1e-14);

        let half = ConstantLogConnection::single(real(&[&[&[0.5]]]));
        let r = monodromy(&half, &ctx()).unwrap();
        assert!(r.generators()[0].max_abs_diff(&real(&[&[&[-1.0]]])) < 1e-15);

        let zero = ConstantLogConnection::single(real(&[&[&[0., 0.]]]));
        let r = monodromy(&zero, &ctx()).unwrap();
        assert_eq!(r.generators()[0], real(&[&[&[1., 0.]]]));
    }

    #[test]
    fn monodromy_needs_integrability() {
        let c = ConstantLogConnection::new(
            2,
            vec![real(&[&[&[0.], &[1.]], &[&[0.], &[0.]]]), real(&[&[&[0.], &[0.]], &[&[1.], &[0.]]])],
        )
        .unwrap();
        assert!(matches!(monodromy(&c, &ctx()), Err(Error::NotIntegrable(_))));
    }

    #[test]
    fn deligne_manin_examples() {
        let r = Representation::new(vec![paper_monodromy()]).unwrap();
        let c = deligne_manin(&r, &ctx()).unwrap();
        assert!(c.max_abs_diff(&paper_connection()) < 1e-14);

        let r = Representation::new(vec![real(&[&[&[1.0]]])]).unwrap();
        assert_eq!(deligne_manin(&r, &ctx()).unwrap().residues()[0], real(&[&[&[0.0]]]));

        let g = (Complex64::new(0.0, -2.0 * PI / 3.0)).exp();
        let r = Representation::new(vec![LambdaMatrix::constant(
            crate::lambda_linalg::CMatrix::from_element(1, 1, g),
            Truncation::new(1).unwrap(),
        )])
        .unwrap();
        let c = deligne_manin(&r, &ctx()).unwrap();
        assert!((c.residues()[0].coeff(0)[(0, 0)] - Complex64::new(1.0 / 3.0, 0.0)).norm() < 1e-15);
        let back = monodromy(&c, &ctx()).unwrap();
        assert!(back.max_abs_diff(&r) < 1e-14);
    }

    #[test]
    fn deligne_manin_rejects_bad_representations() {
        let r = Representation::new(vec![
            real(&[&[&[2.], &[0.]], &[&[0.], &[3.]]]),
            real(&[&[&[1.], &[1.]], &[&[0.], &[1.]]]),
        ])
        .unwrap();
        assert!(matches!(deligne_manin(&r, &ctx()), Err(Error::NonCommuting { .. })));
        let r = Representation::new(vec![real(&[&[&[0., 1.]]])]).unwrap();
        assert_eq!(deligne_manin(&r, &ctx()).unwrap_err(), Error::Singular);
    }

    #[test]
    fn round_trips_on_random_families() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for case in 0..20 {
            let trunc = Truncation::new(1 + case % 4).unwrap();
            let n = 1 + case % 3;
            let branches = 1 + case % 2;
            let seeds = random::commuting_family(&mut rng, n, trunc, branches, random::Placement::Tau);
            let c = ConstantLogConnection::new(branches, seeds).unwrap();
            let r = monodromy(&c, &ctx()).unwrap();
            let back = deligne_manin(&r, &ctx()).unwrap();
            assert!(back.max_abs_diff(&c) < 1e-9, "case {case}: {}", back.max_abs_diff(&c));
            for t in back.residues() {
                for e in crate::lambda_linalg::spectrum(t, &ctx().tol) {
                    assert!(in_tau(e, 1e-9));
                }
            }
        }
    }
}
