//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::process::ExitCode;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rhrel::artinian::{Jet, Truncation};
use rhrel::connections::{
    all_exponents, deligne_manin, dissonance, exponents, fuchs_normalize, horizontal_homs,
    monodromy, twist, ConstantLogConnection, PolyLog1D, Representation,
};
use rhrel::galois::{n_membership, paper_example, Membership};
use rhrel::lambda_linalg::{in_tau, mlog_tau, spectrum, Context, LambdaMatrix};
use rhrel::random::{self, Placement};
use rhrel::tower::{build_rep_tower, dm_tower, truncate_connection};
use rhrel::Error;

type Outcome = Result<String, String>;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Largest distance from a point of `a` to the nearest point of `b`, both ways.
fn set_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    let one_way = |x: &[Complex64], y: &[Complex64]| {
        x.iter()
            .map(|p| y.iter().map(|q| (p - q).norm()).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    if a.is_empty() && b.is_empty() {
        return 0.0;
    }
    one_way(a, b).max(one_way(b, a))
}

/// `sum_k t^k / k!` coefficients, computed directly.
fn exp_t(m: usize) -> Vec<f64> {
    let mut out = vec![1.0];
    for k in 1..m {
        out.push(out[k - 1] / k as f64);
    }
    out
}

fn jet_err(j: &Jet, expect: &[f64]) -> f64 {
    j.coeffs()
        .iter()
        .zip(expect)
        .map(|(a, b)| (a - c(*b)).norm())
        .fold(0.0, f64::max)
}

fn galois_example() -> Outcome {
    let ctx = Context::default();
    let start = Instant::now();
    let mut worst = 0.0f64;
    for m in 2..=8 {
        let g = monodromy(&paper_example(m).map_err(|e| e.to_string())?, &ctx).map_err(|e| e.to_string())?;
        let rows = g.generators()[0].rows();
        let et = exp_t(m);
        let zero = vec![0.0; m];
        for (entry, expect) in [(&rows[0][0], &et), (&rows[0][1], &et), (&rows[1][0], &zero), (&rows[1][1], &et)] {
            worst = worst.max(jet_err(entry, expect));
        }
        let Membership::Member(p) = n_membership(&g.generators()[0]) else {
            return Err(format!("m = {m}: monodromy is not in N"));
        };
        let mut one = vec![0.0; m];
        one[0] = 1.0;
        worst = worst.max(jet_err(&p.a, &one)).max(jet_err(&p.lambda, &et));
    }
    let secs = start.elapsed().as_secs_f64();
    check(worst <= 1e-9, || format!("coefficient error {worst:.2e}"))?;
    check(secs < 1.0, || format!("took {secs:.2} s"))?;
    Ok(format!("m = 2..8, max coefficient error {worst:.2e}, {secs:.3} s"))
}

fn tau_logarithm() -> Outcome {
    let ctx = Context::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0xA2);
    let start = Instant::now();
    let (mut worst_g, mut worst_t) = (0.0f64, 0.0f64);
    for case in 0..200 {
        let m = [1, 2, 4][case % 3];
        let n = 1 + (case / 3) % 3;
        let trunc = Truncation::new(m).unwrap();
        let g = random::invertible(&mut rng, n, trunc);
        let t = mlog_tau(&g, &[], &ctx.tol).map_err(|e| format!("case {case}: {e}"))?;
        worst_g = worst_g.max(ctx.monodromy_of(&t).rel_diff(&g));
        let sp = spectrum(&t, &ctx.tol);
        check(sp.iter().all(|z| in_tau(*z, 0.0)), || format!("case {case}: spectrum {sp:?} leaves tau"))?;
    }
    for case in 0..200 {
        let m = [1, 2, 4][case % 3];
        let n = 1 + (case / 3) % 3;
        let trunc = Truncation::new(m).unwrap();
        let t = if case % 2 == 0 {
            random::commuting_family(&mut rng, n, trunc, 1, Placement::Tau).remove(0)
        } else {
            let eig: Vec<Complex64> = (0..n)
                .map(|_| Complex64::new(rng.gen_range(0.0..1.0), rng.gen_range(-0.5..0.5)))
                .collect();
            random::with_fiber_spectrum(&mut rng, &eig, trunc)
        };
        let back = mlog_tau(&ctx.monodromy_of(&t), &[], &ctx.tol).map_err(|e| format!("case {case}: {e}"))?;
        worst_t = worst_t.max(back.rel_diff(&t));
    }
    let secs = start.elapsed().as_secs_f64();
    check(worst_g <= 1e-8, || format!("exp(-2 pi i log g) off by {worst_g:.2e}"))?;
    check(worst_t <= 1e-8, || format!("log(exp(-2 pi i T)) off by {worst_t:.2e}"))?;
    check(secs < 30.0, || format!("took {secs:.1} s"))?;
    Ok(format!("200 + 200 cases, errors {worst_g:.2e} / {worst_t:.2e}, {secs:.2} s"))
}

fn random_representation(rng: &mut ChaCha8Rng, case: usize, ctx: &Context) -> Representation {
    let trunc = Truncation::new(1 + case % 4).unwrap();
    let n = 1 + (case / 4) % 3;
    let branches = 1 + (case / 12) % 3;
    let placement = if case % 2 == 0 { Placement::Free } else { Placement::Tau };
    let ts = random::commuting_family(rng, n, trunc, branches, placement);
    monodromy(&ConstantLogConnection::new(branches, ts).unwrap(), ctx).unwrap()
}

fn dm_round_trip() -> Outcome {
    let ctx = Context::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0xA3);
    let (mut worst_r, mut worst_c) = (0.0f64, 0.0f64);
    for case in 0..100 {
        let r = random_representation(&mut rng, case, &ctx);
        let dm = deligne_manin(&r, &ctx).map_err(|e| format!("case {case}: {e}"))?;
        let exps = all_exponents(&dm, &ctx.tol);
        check(exps.iter().flatten().all(|z| in_tau(*z, 0.0)), || format!("case {case}: exponents {exps:?}"))?;
        worst_r = worst_r.max(monodromy(&dm, &ctx).map_err(|e| e.to_string())?.rel_diff(&r));

        let trunc = Truncation::new(1 + case % 4).unwrap();
        let branches = 1 + case % 3;
        let ts = random::commuting_family(&mut rng, 1 + case % 3, trunc, branches, Placement::Tau);
        let cn = ConstantLogConnection::new(branches, ts).unwrap();
        let back = deligne_manin(&monodromy(&cn, &ctx).unwrap(), &ctx).map_err(|e| format!("case {case}: {e}"))?;
        for (a, b) in back.residues().iter().zip(cn.residues()) {
            worst_c = worst_c.max(a.rel_diff(b));
        }
    }
    check(worst_r <= 1e-8, || format!("monodromy(dm(R)) off by {worst_r:.2e}"))?;
    check(worst_c <= 1e-8, || format!("dm(monodromy(C)) off by {worst_c:.2e}"))?;
    Ok(format!("100 representations, errors {worst_r:.2e} / {worst_c:.2e}"))
}

fn pole_bound() -> Outcome {
    let ctx = Context::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0xA4);
    let (mut nonempty, mut worst_defect) = (0, 0.0f64);
    for case in 0..100 {
        let trunc = Truncation::new(1 + case % 3).unwrap();
        let rf = 1 + case % 3;
        let re = 1 + (case / 3) % 3;
        let f_exp: Vec<Complex64> = (0..rf).map(|_| random::complex(&mut rng, 1.0)).collect();
        let e_exp: Vec<Complex64> = (0..re)
            .map(|i| {
                if i == 0 || rng.gen_bool(0.5) {
                    f_exp[rng.gen_range(0..rf)] + c(rng.gen_range(-3..=3) as f64)
                } else {
                    random::complex(&mut rng, 1.0)
                }
            })
            .collect();
        let e = ConstantLogConnection::single(random::with_fiber_spectrum(&mut rng, &e_exp, trunc));
        let f = ConstantLogConnection::single(random::with_fiber_spectrum(&mut rng, &f_exp, trunc));
        let h = horizontal_homs(&e, &f, &ctx).map_err(|e| format!("case {case}: {e}"))?;
        let delta = dissonance(&f, &e, &ctx.tol).map_err(|e| e.to_string())?;
        for b in &h.basis {
            check(b.pole_order() <= delta, || {
                format!("case {case}: pole order {} exceeds dissonance {delta}", b.pole_order())
            })?;
            let scale = b.coeffs()[0].norm().max(1.0);
            worst_defect = worst_defect.max(b.horizontality_defect(&e.residues()[0], &f.residues()[0]) / scale);
        }
        nonempty += usize::from(!h.basis.is_empty());
    }
    check(worst_defect <= 1e-8, || format!("basis element not horizontal ({worst_defect:.2e})"))?;
    let mut attained = 0;
    for k in 1..=3i64 {
        for r in 1..=3 {
            let trunc = Truncation::new(2).unwrap();
            let e = ConstantLogConnection::single(LambdaMatrix::identity(r, trunc).scale(c(-k as f64)));
            let f = ConstantLogConnection::single(LambdaMatrix::zeros(r, trunc));
            let h = horizontal_homs(&e, &f, &ctx).map_err(|e| e.to_string())?;
            let delta = dissonance(&f, &e, &ctx.tol).map_err(|e| e.to_string())?;
            check(h.max_pole_order == delta && delta == k as u64, || {
                format!("T_E = -{k}, T_F = 0, rank {r}: pole {} vs dissonance {delta}", h.max_pole_order)
            })?;
            attained += 1;
        }
    }
    Ok(format!(
        "100 planted pairs ({nonempty} with arrows), bound attained in {attained} T_E = -k, T_F = 0 cases"
    ))
}

/// Eigenvalues of the `nm x nm` realization, grouped at `1e-3` and averaged:
/// the `m`-fold eigenvalues of the block Toeplitz form spread like `eps^(1/m)`.
fn realization_spectrum(m: &LambdaMatrix) -> Vec<Complex64> {
    let eig: Vec<Complex64> = m.realization().schur().eigenvalues().expect("complex Schur").iter().copied().collect();
    let mut groups: Vec<Vec<Complex64>> = Vec::new();
    for z in eig {
        match groups.iter_mut().find(|g| g.iter().any(|w| (w - z).norm() < 1e-3)) {
            Some(g) => g.push(z),
            None => groups.push(vec![z]),
        }
    }
    groups
        .iter()
        .map(|g| g.iter().sum::<Complex64>() / g.len() as f64)
        .collect()
}

fn spectrum_lemma() -> Outcome {
    let ctx = Context::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0xA5);
    let mut worst = 0.0f64;
    for case in 0..100 {
        let trunc = Truncation::new(1 + case % 4).unwrap();
        let n = 1 + (case / 4) % 3;
        let m = random::separated_matrix(&mut rng, n, trunc, 0.05);
        let d = set_distance(&spectrum(&m, &ctx.tol), &realization_spectrum(&m));
        worst = worst.max(d);
    }
    check(worst <= 1e-6, || format!("fiber and realization spectra differ by {worst:.2e}"))?;
    Ok(format!("100 matrices, max set distance {worst:.2e}"))
}

/// `x G' + A G - G A_0` coefficientwise, largest norm over degrees `0..=K`.
fn gauge_residual(a: &[LambdaMatrix], g: &[LambdaMatrix]) -> f64 {
    (0..a.len())
        .map(|k| {
            let mut r = &g[k].scale(c(k as f64)) - &(&g[k] * &a[0]);
            for i in 0..=k {
                r = &r + &(&a[i] * &g[k - i]);
            }
            r.norm()
        })
        .fold(0.0, f64::max)
}

fn fuchs() -> Outcome {
    let ctx = Context::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0xA6);
    let (mut worst, mut done, mut resampled) = (0.0f64, 0, 0);
    while done < 50 {
        let n = 1 + done % 3;
        let order = done % 7;
        let trunc = Truncation::new(1 + done % 3).unwrap();
        let mut coeffs = vec![random::matrix(&mut rng, n, trunc, 1.0)];
        for _ in 0..order {
            coeffs.push(random::matrix(&mut rng, n, trunc, 0.5));
        }
        let p = PolyLog1D::new(coeffs.clone()).unwrap();
        let norm = match fuchs_normalize(&p, &ctx) {
            Ok(norm) => norm,
            Err(Error::Resonant(_)) => {
                resampled += 1;
                continue;
            }
            Err(e) => return Err(format!("instance {done}: {e}")),
        };
        let scale = norm.gauge.iter().map(LambdaMatrix::norm).fold(1.0, f64::max)
            * coeffs.iter().map(LambdaMatrix::norm).fold(1.0, f64::max);
        worst = worst.max(gauge_residual(&coeffs, &norm.gauge) / scale);
        done += 1;
    }
    check(worst <= 1e-8, || format!("gauge residual {worst:.2e}"))?;

    let a0 = LambdaMatrix::from_real(&[&[&[0.0], &[0.0]], &[&[0.0], &[0.5]]]).unwrap();
    let a1 = LambdaMatrix::from_real(&[&[&[0.0], &[1.0]], &[&[0.0], &[0.0]]]).unwrap();
    let g = fuchs_normalize(&PolyLog1D::new(vec![a0, a1]).unwrap(), &ctx).map_err(|e| e.to_string())?;
    let g12 = g.gauge[1].entry(0, 1).constant_term();
    let target = c(2.0 / 3.0);
    check((g12 - target).norm() <= 1e-12, || {
        format!(
            "50 residuals fine ({worst:.2e}), but diag(0, 1/2) + x E12 gives G12 = {:.6} + {:.1e}i, expected 2/3",
            g12.re, g12.im
        )
    })?;
    Ok(format!("50 instances ({resampled} resonant resampled), residual {worst:.2e}, G12 = 2/3"))
}

fn tower_square() -> Outcome {
    let ctx = Context::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0xA7);
    let mut worst = 0.0f64;
    for case in 0..50 {
        let trunc = Truncation::new(5).unwrap();
        let n = 1 + case % 3;
        let branches = 1 + (case / 3) % 3;
        let ts = if case % 2 == 0 {
            random::commuting_family(&mut rng, n, trunc, branches, Placement::Free)
        } else {
            random::polynomial_family(&mut rng, n, trunc, branches)
        };
        let top = monodromy(&ConstantLogConnection::new(branches, ts).unwrap(), &ctx).unwrap();
        let tower = build_rep_tower(&top).map_err(|e| e.to_string())?;
        let dm = dm_tower(&tower, &ctx).map_err(|e| format!("case {case}: {e}"))?;
        check(dm.check_compat(&ctx.tol), || format!("case {case}: defect {:.2e}", dm.compat_defect()))?;
        let top_dm = deligne_manin(&top, &ctx).map_err(|e| e.to_string())?;
        for (k, level) in dm.levels().iter().enumerate() {
            let cut = truncate_connection(&top_dm, k + 1).map_err(|e| e.to_string())?;
            worst = worst.max(level.max_abs_diff(&cut));
        }
    }
    check(worst <= 1e-9, || format!("levelwise vs truncated top differ by {worst:.2e}"))?;
    Ok(format!("50 towers with K = 4, max deviation {worst:.2e}"))
}

fn exponent_invariance() -> Outcome {
    let ctx = Context::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0xA8);
    let tol = ctx.tol.cluster_tol;
    let (mut worst_tw, mut worst_tr) = (0.0f64, 0.0f64);
    for case in 0..100 {
        let m = 1 + case % 4;
        let trunc = Truncation::new(m).unwrap();
        let branches = 1 + (case / 4) % 3;
        let ts = random::commuting_family(&mut rng, 1 + case % 3, trunc, branches, Placement::Free);
        let cn = ConstantLogConnection::new(branches, ts).unwrap();
        let k = rng.gen_range(-4..=4);
        let m2 = rng.gen_range(1..=m);
        let tw = twist(&cn, k);
        let tr = truncate_connection(&cn, m2).map_err(|e| e.to_string())?;
        for j in 0..branches {
            let base = exponents(&cn, j, &ctx.tol).unwrap();
            let shifted: Vec<Complex64> = base.iter().map(|z| z - c(k as f64)).collect();
            let after = exponents(&tw, j, &ctx.tol).unwrap();
            check(after.len() == base.len(), || format!("case {case}: twist changed the exponent count"))?;
            worst_tw = worst_tw.max(set_distance(&after, &shifted));
            let cut = exponents(&tr, j, &ctx.tol).unwrap();
            check(cut.len() == base.len(), || format!("case {case}: truncation changed the exponent count"))?;
            worst_tr = worst_tr.max(set_distance(&cut, &base));
        }
    }
    check(worst_tw <= tol && worst_tr <= tol, || {
        format!("twist {worst_tw:.2e}, truncation {worst_tr:.2e}")
    })?;
    Ok(format!("100 connections, twist {worst_tw:.2e}, truncation {worst_tr:.2e}"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("worked Galois example", galois_example),
        ("tau-logarithm contract", tau_logarithm),
        ("Deligne-Manin round trip", dm_round_trip),
        ("pole bound", pole_bound),
        ("spectrum lemma", spectrum_lemma),
        ("Fuchsian normalization", fuchs),
        ("tower commuting square", tower_square),
        ("exponents under twist and truncation", exponent_invariance),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
