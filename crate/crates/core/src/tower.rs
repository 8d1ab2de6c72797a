//! Finite towers over `C[t]/(t^{k+1})`, `k = 0..=K`: the computable prefix of
//! an object over `C[[t]]`.

use std::thread;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::connections::{deligne_manin, ConstantLogConnection, Representation};
use crate::error::{Error, Result};
use crate::lambda_linalg::{Context, Tolerances};

/// Largest top level accepted by the tower constructors.
pub const MAX_TOP_LEVEL: usize = 16;

/// Something that lives over `C[t]/(t^m)` and can be cut down to a lower order.
pub trait Level: Clone + Sized + Send + Sync {
    const KIND: &'static str;

    fn order(&self) -> usize;
    /// `(branches, rank)`.
    fn shape(&self) -> (usize, usize);
    fn truncate_to(&self, m: usize) -> Result<Self>;
    fn max_abs_diff(&self, other: &Self) -> f64;
}

impl Level for ConstantLogConnection {
    const KIND: &'static str = "connection_tower";

    fn order(&self) -> usize {
        self.trunc().order()
    }

    fn shape(&self) -> (usize, usize) {
        (self.branches(), self.rank())
    }

    fn truncate_to(&self, m: usize) -> Result<Self> {
        truncate_connection(self, m)
    }

    fn max_abs_diff(&self, other: &Self) -> f64 {
        ConstantLogConnection::max_abs_diff(self, other)
    }
}

impl Level for Representation {
    const KIND: &'static str = "representation_tower";

    fn order(&self) -> usize {
        self.trunc().order()
    }

    fn shape(&self) -> (usize, usize) {
        (self.branches(), self.rank())
    }

    fn truncate_to(&self, m: usize) -> Result<Self> {
        self.truncate(m)
    }

    fn max_abs_diff(&self, other: &Self) -> f64 {
        Representation::max_abs_diff(self, other)
    }
}

/// Levels `0..=K`, level `k` over `C[t]/(t^{k+1})`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tower<L> {
    levels: Vec<L>,
}

pub type ConnectionTower = Tower<ConstantLogConnection>;
pub type RepresentationTower = Tower<Representation>;

impl<L: Level> Tower<L> {
    /// Checks orders and shapes; compatibility is left to [`Tower::check_compat`].
    pub fn new(levels: Vec<L>) -> Result<Self> {
        let first = levels
            .first()
            .ok_or_else(|| Error::Invalid("a tower needs level 0".into()))?;
        if levels.len() > MAX_TOP_LEVEL + 1 {
            return Err(Error::Invalid(format!(
                "top level {} exceeds the cap {MAX_TOP_LEVEL}",
                levels.len() - 1
            )));
        }
        for (k, level) in levels.iter().enumerate() {
            if level.order() != k + 1 {
                return Err(Error::TruncationMismatch {
                    left: k + 1,
                    right: level.order(),
                });
            }
            if level.shape() != first.shape() {
                return Err(Error::ShapeMismatch(format!(
                    "level {k} has shape {:?}, level 0 has {:?}",
                    level.shape(),
                    first.shape()
                )));
            }
        }
        Ok(Tower { levels })
    }

    /// Successive truncations of `top`, which sits at level `K = m - 1`.
    pub fn from_top(top: &L) -> Result<Self> {
        let mut levels = (1..top.order())
            .map(|m| top.truncate_to(m))
            .collect::<Result<Vec<_>>>()?;
        levels.push(top.clone());
        Tower::new(levels)
    }

    #[allow(non_snake_case)]
    pub fn K(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn levels(&self) -> &[L] {
        &self.levels
    }

    pub fn top(&self) -> &L {
        self.levels.last().expect("nonempty")
    }

    pub fn levels_mut(&mut self) -> &mut [L] {
        &mut self.levels
    }

    /// Largest discrepancy between level `k` and the truncation of level `k + 1`.
    pub fn compat_defect(&self) -> f64 {
        self.levels
            .windows(2)
            .map(|w| match w[1].truncate_to(w[0].order()) {
                Ok(cut) => cut.max_abs_diff(&w[0]),
                Err(_) => f64::INFINITY,
            })
            .fold(0.0, f64::max)
    }

    pub fn check_compat(&self, tol: &Tolerances) -> bool {
        self.compat_defect() <= tol.check_tol
    }
}

#[derive(Serialize, Deserialize)]
struct TowerWire<L> {
    #[serde(rename = "type")]
    kind: String,
    #[serde(rename = "K")]
    top: usize,
    levels: Vec<L>,
}

impl<L: Level + Serialize> Serialize for Tower<L> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TowerWire {
            kind: L::KIND.to_string(),
            top: self.K(),
            levels: self.levels.iter().collect::<Vec<&L>>(),
        }
        .serialize(s)
    }
}

impl<'de, L: Level + DeserializeOwned> Deserialize<'de> for Tower<L> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let w = TowerWire::<L>::deserialize(d)?;
        if w.kind != L::KIND {
            return Err(D::Error::custom(format!(
                "expected type {:?}, found {:?}",
                L::KIND,
                w.kind
            )));
        }
        if w.levels.len() != w.top + 1 {
            return Err(D::Error::custom(format!(
                "K = {} needs {} levels, got {}",
                w.top,
                w.top + 1,
                w.levels.len()
            )));
        }
        Tower::new(w.levels).map_err(D::Error::custom)
    }
}

/// Entrywise truncation of every residue to order `m`.
pub fn truncate_connection(c: &ConstantLogConnection, m: usize) -> Result<ConstantLogConnection> {
    c.map_residues(|t| t.truncate(m))
}

pub fn build_tower(top: &ConstantLogConnection) -> Result<ConnectionTower> {
    Tower::from_top(top)
}

pub fn build_rep_tower(top: &Representation) -> Result<RepresentationTower> {
    Tower::from_top(top)
}

pub fn check_compat<L: Level>(tower: &Tower<L>, tol: &Tolerances) -> bool {
    tower.check_compat(tol)
}

/// Deligne-Manin extension at every level; levels are processed on separate threads.
pub fn dm_tower(r: &RepresentationTower, ctx: &Context) -> Result<ConnectionTower> {
    let levels = thread::scope(|s| {
        let handles: Vec<_> = r
            .levels
            .iter()
            .map(|rep| s.spawn(move || deligne_manin(rep, ctx)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("level worker panicked"))
            .collect::<Result<Vec<_>>>()
    })?;
    Tower::new(levels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::artinian::{Jet, Truncation};
    use crate::connections::monodromy;
    use crate::galois::paper_example;
    use crate::lambda_linalg::LambdaMatrix;
    use crate::random;
    use num_complex::Complex64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    #[test]
    fn paper_connection_tower() {
        let tol = Tolerances::default();
        let tower = build_tower(&paper_example(5).unwrap()).unwrap();
        assert_eq!(tower.K(), 4);
        assert!(tower.check_compat(&tol));
        for (k, level) in tower.levels().iter().enumerate() {
            assert!(level.max_abs_diff(&paper_example(k + 1).unwrap()) < 1e-15);
        }
        // special fiber: T = -(1/2 pi i) E_12
        let t0 = &tower.levels()[0].residues()[0];
        let expect = Complex64::new(0.0, 1.0 / (2.0 * PI));
        assert!((t0.entry(0, 1).constant_term() - expect).norm() < 1e-15);
        assert!(t0.entry(0, 0).constant_term().norm() == 0.0);
    }

    #[test]
    fn corrupted_level_is_detected() {
        let tol = Tolerances::default();
        let mut tower = build_tower(&paper_example(4).unwrap()).unwrap();
        let bad = {
            let t = &tower.levels()[1].residues()[0];
            let mut rows = t.rows();
            let e = &rows[1][1];
            rows[1][1] = e.add(&Jet::constant(Complex64::new(1e-3, 0.0), e.trunc())).unwrap();
            ConstantLogConnection::single(LambdaMatrix::from_entries(&rows).unwrap())
        };
        tower.levels_mut()[1] = bad;
        assert!(!tower.check_compat(&tol));
        assert!((tower.compat_defect() - 1e-3).abs() < 1e-12);
    }

    #[test]
    fn structural_checks() {
        let c = paper_example(3).unwrap();
        assert!(Tower::new(vec![c.clone()]).is_err());
        assert!(truncate_connection(&c, 4).is_err());
        assert_eq!(truncate_connection(&c, 3).unwrap(), c);
        let big = paper_example(MAX_TOP_LEVEL + 2).unwrap();
        assert!(build_tower(&big).is_err());
    }

    #[test]
    fn identity_tower_has_zero_residues() {
        let ctx = Context::default();
        let g = LambdaMatrix::identity(2, Truncation::new(4).unwrap());
        let r = build_rep_tower(&Representation::new(vec![g]).unwrap()).unwrap();
        let c = dm_tower(&r, &ctx).unwrap();
        assert!(c.levels().iter().all(|l| l.residues()[0].is_zero()));
    }

    #[test]
    fn exponential_tower_gives_paper_connection() {
        let ctx = Context::default();
        let trunc = Truncation::new(4).unwrap();
        let et = Jet::t(trunc).exp();
        let g = LambdaMatrix::from_entries(&[vec![et.clone(), et.clone()], vec![Jet::zero(trunc), et]]).unwrap();
        let r = build_rep_tower(&Representation::new(vec![g]).unwrap()).unwrap();
        let c = dm_tower(&r, &ctx).unwrap();
        assert!(c.check_compat(&ctx.tol));
        for (k, level) in c.levels().iter().enumerate() {
            assert!(level.max_abs_diff(&paper_example(k + 1).unwrap()) < 1e-12, "level {k}");
        }
    }

    #[test]
    fn random_towers_round_trip() {
        let ctx = Context::default();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for case in 0..10 {
            let trunc = Truncation::new(4).unwrap();
            let n = 1 + case % 3;
            let ts = random::commuting_family(&mut rng, n, trunc, 1 + case % 2, random::Placement::Free);
            let c = ConstantLogConnection::new(ts.len(), ts).unwrap();
            let r = build_rep_tower(&monodromy(&c, &ctx).unwrap()).unwrap();
            let dm = dm_tower(&r, &ctx).unwrap();
            assert!(dm.check_compat(&ctx.tol), "case {case}: {}", dm.compat_defect());
            for (level, rep) in dm.levels().iter().zip(r.levels()) {
                assert!(monodromy(level, &ctx).unwrap().rel_diff(rep) < 1e-9);
            }
        }
    }

    #[test]
    fn json_shape() {
        let tower = build_tower(&paper_example(2).unwrap()).unwrap();
        let s = serde_json::to_string(&tower).unwrap();
        assert!(s.starts_with(r#"{"type":"connection_tower","K":1,"levels":[{"type":"constant_log""#));
        assert_eq!(serde_json::from_str::<ConnectionTower>(&s).unwrap(), tower);
        assert!(serde_json::from_str::<RepresentationTower>(&s).is_err());
        assert!(serde_json::from_str::<ConnectionTower>(&s.replace(r#""K":1"#, r#""K":2"#)).is_err());
    }
}
