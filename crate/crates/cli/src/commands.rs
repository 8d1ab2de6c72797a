use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;
use rhrel::connections::{
    all_exponents, curvature_check, deligne_manin, dissonance, exponents, fuchs_normalize,
    horizontal_homs, monodromy, poly_monodromy, twist, ConstantLogConnection,
};
use rhrel::galois::verify_paper_galois;
use rhrel::lambda_linalg::{in_tau, spectrum, Context};
use rhrel::tower::{dm_tower, Level, Tower};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::Config;
use crate::document::Document;
use crate::failure::Failure;
use crate::selftest;

/// Everything a command may look at.
pub struct Invocation {
    pub inputs: Vec<Document>,
    pub config: Config,
    pub ctx: Context,
    pub m: Option<usize>,
    pub k: Option<i64>,
    pub cases: usize,
    pub threads: usize,
}

pub trait Command: Send + Sync {
    fn name(&self) -> &'static str;
    fn about(&self) -> &'static str;
    /// Number of input files.
    fn arity(&self) -> usize {
        1
    }
    /// Whether `--m` truncates the inputs before the command sees them.
    fn truncates_inputs(&self) -> bool {
        true
    }
    fn run(&self, inv: &Invocation) -> Result<Value, Failure>;
    /// Exit status for a successful run.
    fn exit_code(&self, _out: &Value) -> i32 {
        0
    }
}

#[derive(Clone)]
pub struct Registry {
    commands: BTreeMap<&'static str, Arc<dyn Command>>,
}

impl Registry {
    pub fn empty() -> Self {
        Registry {
            commands: BTreeMap::new(),
        }
    }

    pub fn register(&mut self, c: Arc<dyn Command>) {
        self.commands.insert(c.name(), c);
    }

    pub fn get(&self, name: &str) -> Result<Arc<dyn Command>, Failure> {
        self.commands.get(name).cloned().ok_or_else(|| Failure::Usage {
            kind: "UnknownCommand",
            detail: format!(
                "unknown command {name:?}; available: {}",
                self.commands.keys().copied().collect::<Vec<_>>().join(", ")
            ),
        })
    }

    /// One `name  about` line per command.
    pub fn summary(&self) -> String {
        let width = self.commands.keys().map(|k| k.len()).max().unwrap_or(0);
        self.commands
            .values()
            .map(|c| format!("  {:width$}  {}", c.name(), c.about()))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

impl Default for Registry {
    fn default() -> Self {
        let mut r = Registry::empty();
        let all: Vec<Arc<dyn Command>> = vec![
            Arc::new(Residue),
            Arc::new(Exponents),
            Arc::new(Dissonance),
            Arc::new(Monodromy),
            Arc::new(Dm),
            Arc::new(Homs),
            Arc::new(Normalize),
            Arc::new(Twist),
            Arc::new(Check),
            Arc::new(TowerCheck),
            Arc::new(DmTower),
            Arc::new(GaloisExample),
            Arc::new(selftest::Selftest),
        ];
        for c in all {
            r.register(c);
        }
        r
    }
}

fn to_value<T: Serialize>(v: &T) -> Result<Value, Failure> {
    serde_json::to_value(v).map_err(|e| Failure::usage(format!("serialization failed: {e}")))
}

fn wrong(doc: &Document, expected: &str) -> Failure {
    Failure::usage(format!("expected a {expected} document, got {}", doc.kind()))
}

fn connection<'a>(doc: &'a Document) -> Result<&'a ConstantLogConnection, Failure> {
    match doc {
        Document::Connection(c) => Ok(c),
        other => Err(wrong(other, "constant_log")),
    }
}

fn complex_list(v: &[Complex64]) -> Value {
    Value::Array(v.iter().map(|z| json!([z.re, z.im])).collect())
}

struct Residue;

impl Command for Residue {
    fn name(&self) -> &'static str {
        "residue"
    }
    fn about(&self) -> &'static str {
        "residue matrix along each branch"
    }
    fn run(&self, inv: &Invocation) -> Result<Value, Failure> {
        match &inv.inputs[0] {
            Document::Connection(c) => Ok(json!({ "residues": to_value(&c.residues())? })),
            Document::Poly(p) => Ok(json!({ "residues": [to_value(p.residue())?] })),
            other => Err(wrong(other, "constant_log or poly_log_1d")),
        }
    }
}

struct Exponents;

impl Command for Exponents {
    fn name(&self) -> &'static str {
        "exponents"
    }
    fn about(&self) -> &'static str {
        "exponents (residue spectra) per branch, as [re, im] pairs"
    }
    fn run(&self, inv: &Invocation) -> Result<Value, Failure> {
        let families = match &inv.inputs[0] {
            Document::Connection(c) => all_exponents(c, &inv.ctx.tol),
            Document::Poly(p) => vec![spectrum(p.residue(), &inv.ctx.tol)],
            other => return Err(wrong(other, "constant_log or poly_log_1d")),
        };
        Ok(json!({ "exponents": families.iter().map(|f| complex_list(f)).collect::<Vec<_>>() }))
    }
}

struct Dissonance;

impl Command for Dissonance {
    fn name(&self) -> &'static str {
        "dissonance"
    }
    fn about(&self) -> &'static str {
        "dissonance from the first connection to the second"
    }
    fn arity(&self) -> usize {
        2
    }
    fn run(&self, inv: &Invocation) -> Result<Value, Failure> {
        let (f, e) = (connection(&inv.inputs[0])?, connection(&inv.inputs[1])?);
        Ok(json!({ "dissonance": dissonance(f, e, &inv.ctx.tol)? }))
    }
}

struct Monodromy;

impl Command for Monodromy {
    fn name(&self) -> &'static str {
        "monodromy"
    }
    fn about(&self) -> &'static str {
        "monodromy representation g_j = exp(-2 pi i T_j)"
    }
    fn run(&self, inv: &Invocation) -> Result<Value, Failure> {
        match &inv.inputs[0] {
            Document::Connection(c) => to_value(&monodromy(c, &inv.ctx)?),
            Document::Poly(p) => to_value(&poly_monodromy(p, &inv.ctx)?),
            other => Err(wrong(other, "constant_log or poly_log_1d")),
        }
    }
}

struct Dm;

impl Command for Dm {
    fn name(&self) -> &'static str {
        "dm"
    }
    fn about(&self) -> &'static str {
        "Deligne-Manin extension of a representation, exponents in [0, 1)"
    }
    fn run(&self, inv: &Invocation) -> Result<Value, Failure> {
        match &inv.inputs[0] {
            Document::Representation(r) => to_value(&deligne_manin(r, &inv.ctx)?),
            other => Err(wrong(other, "representation")),
        }
    }
}

struct Homs;

impl Command for Homs {
    fn name(&self) -> &'static str {
        "homs"
    }
    fn about(&self) -> &'static str {
        "basis of horizontal arrows from the first connection to the second"
    }
    fn arity(&self) -> usize {
        2
    }
    fn run(&self, inv: &Invocation) -> Result<Value, Failure> {
        let (e, f) = (connection(&inv.inputs[0])?, connection(&inv.inputs[1])?);
        to_value(&horizontal_homs(e, f, &inv.ctx)?)
    }
}

struct Normalize;

impl Command for Normalize {
    fn name(&self) -> &'static str {
        "normalize"
    }
    fn about(&self) -> &'static str {
        "gauge a polynomial connection to its residue"
    }
    fn run(&self, inv: &Invocation) -> Result<Value, Failure> {
        match &inv.inputs[0] {
            Document::Poly(p) => to_value(&fuchs_normalize(p, &inv.ctx)?),
            other => Err(wrong(other, "poly_log_1d")),
        }
    }
}

struct Twist;

impl Command for Twist {
    fn name(&self) -> &'static str {
        "twist"
    }
    fn about(&self) -> &'static str {
        "twist by O(kY): every residue becomes T_j - k (needs --k)"
    }
    fn run(&self, inv: &Invocation) -> Result<Value, Failure> {
        let k = inv.k.ok_or_else(|| Failure::usage("twist needs --k"))?;
        to_value(&twist(connection(&inv.inputs[0])?, k))
    }
}

struct Check;

impl Command for Check {
    fn name(&self) -> &'static str {
        "check"
    }
    fn about(&self) -> &'static str {
        "curvature, exponents and monodromy round trip of a connection"
    }
    fn run(&self, inv: &Invocation) -> Result<Value, Failure> {
        let tol = &inv.ctx.tol;
        match &inv.inputs[0] {
            Document::Connection(c) => {
                let curv = curvature_check(c, tol);
                let exps = all_exponents(c, tol);
                let in_tau_all = exps.iter().flatten().all(|z| in_tau(*z, tol.cluster_tol));
                let round_trip = if curv.integrable {
                    let g = monodromy(c, &inv.ctx)?;
                    let back = monodromy(&deligne_manin(&g, &inv.ctx)?, &inv.ctx)?;
                    Some(back.rel_diff(&g))
                } else {
                    None
                };
                let mut branches = Vec::new();
                for j in 0..c.branches() {
                    branches.push(complex_list(&exponents(c, j, tol)?));
                }
                Ok(json!({
                    "integrable": curv.integrable,
                    "worst_commutator": curv.worst_commutator,
                    "exponents": branches,
                    "exponents_in_tau": in_tau_all,
                    "round_trip_defect": round_trip,
                }))
            }
            Document::Representation(r) => {
                let (valid, detail) = match r.validate(tol) {
                    Ok(()) => (true, None),
                    Err(e) => (false, Some(e.to_string())),
                };
                Ok(json!({ "valid": valid, "detail": detail }))
            }
            other => Err(wrong(other, "constant_log or representation")),
        }
    }
}

fn tower_report<L: Level>(t: &Tower<L>, inv: &Invocation) -> Value {
    json!({
        "type": L::KIND,
        "K": t.K(),
        "compatible": t.check_compat(&inv.ctx.tol),
        "defect": t.compat_defect(),
    })
}

struct TowerCheck;

impl Command for TowerCheck {
    fn name(&self) -> &'static str {
        "tower-check"
    }
    fn about(&self) -> &'static str {
        "truncation compatibility of a tower"
    }
    fn run(&self, inv: &Invocation) -> Result<Value, Failure> {
        match &inv.inputs[0] {
            Document::ConnectionTower(t) => Ok(tower_report(t, inv)),
            Document::RepresentationTower(t) => Ok(tower_report(t, inv)),
            other => Err(wrong(other, "tower")),
        }
    }
}

struct DmTower;

impl Command for DmTower {
    fn name(&self) -> &'static str {
        "dm-tower"
    }
    fn about(&self) -> &'static str {
        "levelwise Deligne-Manin extension of a representation tower"
    }
    fn run(&self, inv: &Invocation) -> Result<Value, Failure> {
        match &inv.inputs[0] {
            Document::RepresentationTower(t) => to_value(&dm_tower(t, &inv.ctx)?),
            other => Err(wrong(other, "representation_tower")),
        }
    }
}

struct GaloisExample;

impl Command for GaloisExample {
    fn name(&self) -> &'static str {
        "galois-example"
    }
    fn about(&self) -> &'static str {
        "membership of the worked example's monodromy in N, orders 2..=m"
    }
    fn arity(&self) -> usize {
        0
    }
    fn truncates_inputs(&self) -> bool {
        false
    }
    fn run(&self, inv: &Invocation) -> Result<Value, Failure> {
        let m = inv.m.unwrap_or(inv.config.default_trunc);
        to_value(&verify_paper_galois(m, &inv.ctx)?)
    }
}

/// Cuts a document down to order `m`; towers keep levels `0..m`.
pub fn truncate_document(doc: Document, m: usize) -> Result<Document, Failure> {
    fn cut<L: Level>(t: Tower<L>, m: usize) -> Result<Tower<L>, Failure> {
        if m > t.K() + 1 {
            return Err(rhrel::Error::OrderViolation { from: t.K() + 1, to: m }.into());
        }
        Ok(Tower::new(t.levels()[..m].to_vec())?)
    }
    Ok(match doc {
        Document::Connection(c) => Document::Connection(c.truncate_to(m)?),
        Document::Representation(r) => Document::Representation(r.truncate(m)?),
        Document::Poly(p) => Document::Poly(rhrel::connections::PolyLog1D::new(
            p.coeffs().iter().map(|a| a.truncate(m)).collect::<Result<_, _>>()?,
        )?),
        Document::ConnectionTower(t) => Document::ConnectionTower(cut(t, m)?),
        Document::RepresentationTower(t) => Document::RepresentationTower(cut(t, m)?),
    })
}
