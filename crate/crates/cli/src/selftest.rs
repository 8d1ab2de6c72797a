//! Randomized property checks, reproducible from `--seed`.
//!
//! Case `i` runs property `i % PROPERTIES.len()` with its own generator
//! seeded from `(seed, i)`, so results do not depend on the thread count.

use std::thread;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rhrel::artinian::Truncation;
use rhrel::connections::{all_exponents, deligne_manin, monodromy, twist, ConstantLogConnection};
use rhrel::galois::NPoint;
use rhrel::lambda_linalg::{in_tau, mlog_tau, spectrum, Context};
use rhrel::random::{self, Placement};
use rhrel::tower::{build_rep_tower, dm_tower};
use serde::Serialize;
use serde_json::Value;

use crate::commands::{Command, Invocation};
use crate::failure::Failure;

type Check = fn(&mut ChaCha8Rng, &Context) -> Result<f64, String>;

const PROPERTIES: &[(&str, f64, Check)] = &[
    ("mlog_tau", 1e-8, mlog_case),
    ("dm_round_trip", 1e-8, dm_case),
    ("twist_exponents", 1e-8, twist_case),
    ("tower_compat", 1e-9, tower_case),
    ("n_group_law", 1e-10, n_case),
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseResult {
    pub id: usize,
    pub property: &'static str,
    pub passed: bool,
    pub metric: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub seed: u64,
    pub cases: usize,
    pub passed: usize,
    pub results: Vec<CaseResult>,
}

fn case_seed(seed: u64, id: usize) -> u64 {
    seed ^ (id as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

pub fn run_case(seed: u64, id: usize, ctx: &Context) -> CaseResult {
    let (property, bound, check) = PROPERTIES[id % PROPERTIES.len()];
    let mut rng = ChaCha8Rng::seed_from_u64(case_seed(seed, id));
    let (passed, metric, detail) = match check(&mut rng, ctx) {
        Ok(metric) => (metric <= bound, Some(metric), None),
        Err(detail) => (false, None, Some(detail)),
    };
    CaseResult {
        id,
        property,
        passed,
        metric,
        detail,
    }
}

pub fn run(seed: u64, cases: usize, threads: usize, ctx: &Context) -> Report {
    let threads = threads.clamp(1, cases.max(1));
    let mut results: Vec<CaseResult> = thread::scope(|s| {
        let handles: Vec<_> = (0..threads)
            .map(|w| {
                s.spawn(move || {
                    (w..cases)
                        .step_by(threads)
                        .map(|id| run_case(seed, id, ctx))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("selftest worker panicked"))
            .collect()
    });
    results.sort_by_key(|r| r.id);
    Report {
        seed,
        cases,
        passed: results.iter().filter(|r| r.passed).count(),
        results,
    }
}

fn shape(rng: &mut ChaCha8Rng) -> (usize, Truncation) {
    let n = rng.gen_range(1..=3);
    let m = [1, 2, 4][rng.gen_range(0..3)];
    (n, Truncation::new(m).expect("positive"))
}

fn mlog_case(rng: &mut ChaCha8Rng, ctx: &Context) -> Result<f64, String> {
    let (n, trunc) = shape(rng);
    let g = random::invertible(rng, n, trunc);
    let t = mlog_tau(&g, &[], &ctx.tol).map_err(|e| e.to_string())?;
    if !spectrum(&t, &ctx.tol).iter().all(|z| in_tau(*z, ctx.tol.cluster_tol)) {
        return Err("spectrum of the logarithm leaves [0, 1)".into());
    }
    Ok(ctx.monodromy_of(&t).rel_diff(&g))
}

fn dm_case(rng: &mut ChaCha8Rng, ctx: &Context) -> Result<f64, String> {
    let (n, trunc) = shape(rng);
    let branches = rng.gen_range(1..=3);
    let ts = random::commuting_family(rng, n, trunc, branches, Placement::Free);
    let c = ConstantLogConnection::new(branches, ts).map_err(|e| e.to_string())?;
    let g = monodromy(&c, ctx).map_err(|e| e.to_string())?;
    let back = deligne_manin(&g, ctx)
        .and_then(|d| monodromy(&d, ctx))
        .map_err(|e| e.to_string())?;
    Ok(back.rel_diff(&g))
}

fn twist_case(rng: &mut ChaCha8Rng, ctx: &Context) -> Result<f64, String> {
    let (n, trunc) = shape(rng);
    let ts = random::commuting_family(rng, n, trunc, 1, Placement::Free);
    let c = ConstantLogConnection::single(ts.into_iter().next().expect("one"));
    let k = rng.gen_range(-3..=3);
    let before = &all_exponents(&c, &ctx.tol)[0];
    let after = &all_exponents(&twist(&c, k), &ctx.tol)[0];
    if before.len() != after.len() {
        return Err("twist changed the number of exponents".into());
    }
    let mut worst = 0.0f64;
    for z in before {
        let shifted = z - k as f64;
        let best = after.iter().map(|w| (w - shifted).norm()).fold(f64::INFINITY, f64::min);
        worst = worst.max(best);
    }
    Ok(worst)
}

fn tower_case(rng: &mut ChaCha8Rng, ctx: &Context) -> Result<f64, String> {
    let n = rng.gen_range(1..=3);
    let trunc = Truncation::new(4).expect("positive");
    let branches = rng.gen_range(1..=2);
    let ts = random::commuting_family(rng, n, trunc, branches, Placement::Free);
    let c = ConstantLogConnection::new(ts.len(), ts).map_err(|e| e.to_string())?;
    let g = monodromy(&c, ctx).map_err(|e| e.to_string())?;
    let tower = build_rep_tower(&g)
        .and_then(|r| dm_tower(&r, ctx))
        .map_err(|e| e.to_string())?;
    Ok(tower.compat_defect())
}

fn n_case(rng: &mut ChaCha8Rng, _ctx: &Context) -> Result<f64, String> {
    let trunc = Truncation::new(rng.gen_range(1..=8)).expect("positive");
    let p = NPoint::from_a(random::jet(rng, trunc, 1.0));
    let q = NPoint::from_a(random::jet(rng, trunc, 1.0));
    Ok(p.compose(&q).map_err(|e| e.to_string())?.defect())
}

pub struct Selftest;

impl Command for Selftest {
    fn name(&self) -> &'static str {
        "selftest"
    }
    fn about(&self) -> &'static str {
        "randomized property checks (--seed, --cases, --threads)"
    }
    fn arity(&self) -> usize {
        0
    }
    fn truncates_inputs(&self) -> bool {
        false
    }
    fn run(&self, inv: &Invocation) -> Result<Value, Failure> {
        let report = run(inv.config.seed, inv.cases, inv.threads, &inv.ctx);
        serde_json::to_value(&report).map_err(|e| Failure::usage(e.to_string()))
    }
    fn exit_code(&self, out: &Value) -> i32 {
        if out["passed"] == out["cases"] {
            0
        } else {
            1
        }
    }
}
