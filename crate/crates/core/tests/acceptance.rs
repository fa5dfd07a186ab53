//! Acceptance run: one PASS/FAIL line per criterion, at full scale.
//!
//! Runs without the libtest harness so the lines land in the plain
//! `cargo test` output; exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use normbridge::checks::{
    agm_classical, cauchy_schwarz_classical, check_majorization_chain, check_sv_product_majorization, check_theorem1, check_weyl_majorant,
    cq_mix, gram,
};
use normbridge::gauge::{holder_gauge_check, ui_norm, GaugeSelector, GaugeSpec};
use normbridge::hunt::{default_q_grid, hunt_counterexample, random_pair, sweep_with, HuntConfig, HuntOutcome, HuntTarget, Violation};
use normbridge::instance::InstancePair;
use normbridge::linalg::random::{gaussian_matrix, random_psd_with, random_unitary, substream};
use normbridge::linalg::{pseudo_inverse, psd_sqrt, Field};
use normbridge::pipeline::{final_identity, trace_pipeline, DEGENERATE_CONDITION};
use normbridge::{Error, Hermitian, Matrix, Psd};
use rand::Rng;
use serde_json::Value;

const TOL: f64 = 1e-9;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn fields(i: usize) -> Field {
    if i.is_multiple_of(2) {
        Field::Real
    } else {
        Field::Complex
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

/// `theorem2` sweep over the q grid plus ten random q values.
fn c1_theorem2_sweep() -> Verdict {
    let mut rng = substream(1, u64::MAX);
    let mut q_grid = default_q_grid();
    q_grid.extend((0..10).map(|_| rng.random_range(0.0..1.0)));
    let cfg = HuntConfig {
        dims: (1..=8).collect(),
        q_grid,
        samples: 10_000,
        seed: 1,
        ..HuntConfig::new(HuntTarget::Theorem2)
    };
    let mut deficient = 0;
    let s = sweep_with(&cfg, |s| deficient += usize::from(s.rank_a < s.dim || s.rank_b < s.dim)).expect("sweep runs");
    verdict(
        s.failures == 0 && s.min_margin >= -TOL,
        format!(
            "{} instances ({deficient} rank-deficient), {} reports, {} failures, min relative margin {:.2e}",
            s.samples, s.reports, s.failures, s.min_margin
        ),
    )
}

/// `theorem1` on the full gauge grid, plus the classical endpoints.
fn c2_theorem1_sweep() -> Verdict {
    let cfg = HuntConfig {
        dims: (1..=8).collect(),
        q_grid: vec![0.0, 0.25, 0.5, 0.75, 1.0],
        norms: vec![GaugeSelector::Grid],
        samples: 1000,
        seed: 2,
        ..HuntConfig::new(HuntTarget::Theorem1)
    };
    let mut endpoint_err = 0.0f64;
    let mut endpoint_checks = 0;
    let s = sweep_with(&cfg, |s| {
        let (x, y) = s.pair.factor_pair().unwrap();
        for phi in GaugeSpec::test_grid(s.dim) {
            let cs = cauchy_schwarz_classical(&x, &y, &phi).unwrap();
            for q in [0.0, 1.0] {
                let t = check_theorem1(&x, &y, q, &phi).unwrap();
                endpoint_err = endpoint_err.max(rel(t.lhs, cs.lhs)).max(rel(t.rhs, cs.rhs));
            }
            let agm = agm_classical(&x, &y, &phi).unwrap();
            let t = check_theorem1(&x, &y, 0.5, &phi).unwrap();
            endpoint_err = endpoint_err.max(rel(t.lhs.sqrt(), agm.lhs)).max(rel(t.rhs.sqrt(), agm.rhs));
            endpoint_checks += 3;
        }
    })
    .expect("sweep runs");
    verdict(
        s.failures == 0 && endpoint_err <= 1e-10,
        format!(
            "{} pairs x 5 q x grid: {} reports, {} failures, min relative margin {:.2e}; {endpoint_checks} endpoint comparisons, max deviation {endpoint_err:.2e}",
            s.samples, s.reports, s.failures, s.min_margin
        ),
    )
}

/// Proof pipeline on non-degenerate instances, and the final identity.
fn c3_pipeline() -> Verdict {
    let (mut ok, mut failed, mut trivial, mut degenerate) = (0, 0, 0, 0);
    let mut worst_bound = f64::INFINITY;
    let mut first_failure = None;
    let mut index = 0u64;
    while ok + failed < 1000 {
        let mut rng = substream(3, index);
        index += 1;
        let n = rng.random_range(1..=6usize);
        let rank = |rng: &mut normbridge::linalg::random::InstanceRng| if rng.random_bool(0.5) { n } else { rng.random_range(1..=n) };
        let ranks = (rank(&mut rng), rank(&mut rng));
        let k = rng.random_range(1..=n);
        let q = rng.random_range(0.1..=0.9);
        let pair = random_pair(&mut rng, false, n, ranks, fields(index as usize)).unwrap();
        let (a, b) = pair.psd_pair().unwrap();
        match trace_pipeline(&a, &b, q, k) {
            Err(Error::TriviallyTrue(_)) => trivial += 1,
            Err(e) => {
                failed += 1;
                first_failure.get_or_insert(format!("instance {}: {e}", index - 1));
            }
            Ok(t) if t.blocks.a11_condition > DEGENERATE_CONDITION => degenerate += 1,
            Ok(t) => {
                worst_bound = worst_bound.min(t.final_bound);
                if t.passed() && t.final_bound >= 1.0 - 1e-8 {
                    ok += 1;
                } else {
                    failed += 1;
                    let why = t.steps.iter().find_map(|s| s.first_failure().map(|(k, v, g)| format!("{}.{k} = {v:.2e} > {g:.0e}", s.name)));
                    first_failure.get_or_insert(format!("instance {}: {}", index - 1, why.unwrap_or_else(|| "final bound".into())));
                }
            }
        }
    }
    let identity_err = (1..1000).map(|i| (final_identity(i as f64 / 1000.0) - 1.0).abs()).fold(0.0, f64::max);
    verdict(
        failed == 0 && identity_err <= 1e-12,
        format!(
            "{ok} traces pass, {failed} fail, {trivial} trivially true and {degenerate} degenerate skipped; min final bound {worst_bound:.6}; identity error {identity_err:.1e}{}",
            first_failure.map(|f| format!("; first failure {f}")).unwrap_or_default()
        ),
    )
}

/// Majorization chain and Hölder forms.
fn c4_chain() -> Verdict {
    let (mut reports, mut failures) = (0usize, 0usize);
    let mut min_rel = f64::INFINITY;
    let mut tally = |r: normbridge::CheckReport| {
        reports += 1;
        failures += usize::from(!r.holds || r.tol > TOL);
        min_rel = min_rel.min(r.relative_margin());
    };
    for i in 0..1000u64 {
        let mut rng = substream(4, i);
        let n = rng.random_range(1..=8usize);
        let q = rng.random_range(0.0..=1.0);
        let field = fields(i as usize);
        let x: Matrix = gaussian_matrix(&mut rng, n, n, field);
        let y: Matrix = gaussian_matrix(&mut rng, n, n, field);
        let (a, b) = (gram(&x).unwrap(), gram(&y).unwrap());
        let c = cq_mix(&a, &b, q).unwrap();
        let c_bar = cq_mix(&a, &b, 1.0 - q).unwrap();
        for r in [0.5, 1.0, 2.0] {
            tally(check_weyl_majorant(&a, &b, r).unwrap());
            tally(check_sv_product_majorization(&x, &y, r).unwrap());
            check_majorization_chain(&x, &y, q, r).unwrap().into_iter().for_each(&mut tally);
            let (u, v) = (c.spectrum().powf(r), c_bar.spectrum().powf(r));
            for p in [2.0, 3.0, 1.5] {
                for phi in GaugeSpec::test_grid(n) {
                    tally(holder_gauge_check(&phi, &u, &v, p).unwrap());
                }
            }
        }
    }
    verdict(failures == 0, format!("1000 instances, {reports} reports, {failures} failures, min relative margin {min_rel:.2e}"))
}

/// Default-budget hunt for the false variant, and the committed fixture.
fn c5_false_variant() -> Verdict {
    let start = Instant::now();
    let cfg = HuntConfig::new(HuntTarget::FalseVariant);
    let outcome = hunt_counterexample(&cfg).expect("hunt runs");
    let elapsed = start.elapsed().as_secs_f64();
    let HuntOutcome::Found { violation, stats } = outcome else {
        return verdict(false, format!("no violation in {} evaluations", outcome.stats().evaluations));
    };
    let text = violation.to_json().to_string();
    let back = Violation::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
    let round_trip = (back.margin() - violation.margin()).abs();

    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/violation.json");
    let stored: Value = serde_json::from_str(&std::fs::read_to_string(path).expect("fixture present")).unwrap();
    let fixture = Violation::from_json(&stored).unwrap();
    let fixture_drift = (fixture.margin() - stored["margin"].as_f64().unwrap()).abs();
    verdict(
        violation.margin() < -1e-6
            && stats.evaluations <= 100_000
            && round_trip <= 1e-12
            && fixture.margin() < -1e-6
            && fixture_drift <= 1e-12
            && elapsed < 300.0,
        format!(
            "margin {:.3e} at n = {}, {}, q = {:?}, k = {:?} after {} of budget {} evaluations ({elapsed:.1}s); serialized re-check drift {round_trip:.1e}; fixture margin {:.3e}, drift {fixture_drift:.1e}",
            violation.margin(),
            violation.pair.dim(),
            violation.field(),
            violation.q.unwrap(),
            violation.k.unwrap(),
            stats.evaluations,
            cfg.budget(),
            fixture.margin()
        ),
    )
}

/// The same budget aimed at the true inequalities.
fn c6_robustness() -> Verdict {
    let mut pass = true;
    let mut parts = Vec::new();
    for target in [HuntTarget::Theorem2, HuntTarget::Theorem1, HuntTarget::SingularForm, HuntTarget::AgmSingular] {
        let outcome = hunt_counterexample(&HuntConfig::new(target)).expect("hunt runs");
        let s = outcome.stats();
        let ok = outcome.violation().is_none() && s.min_margin >= -TOL;
        pass &= ok;
        parts.push(format!(
            "{target}: {} ({} evals, min {:.1e})",
            if outcome.violation().is_none() { "not found" } else { "FOUND" },
            s.evaluations,
            s.min_margin
        ));
    }
    verdict(pass, parts.join("; "))
}

/// Eigensolver, pseudo-inverse, square root and gauge invariance residuals.
fn c7_numerical_core() -> Verdict {
    let (mut eig, mut pinv, mut sqrt) = (0.0f64, 0.0f64, 0.0f64);
    for i in 0..1000u64 {
        let mut rng = substream(7, i);
        let n = rng.random_range(1..=16usize);
        let field = fields(i as usize);
        let g: Matrix = gaussian_matrix(&mut rng, n, n, field);
        let h = Hermitian::symmetrize(g.clone());
        let e = h.eig().unwrap();
        let scale = h.as_matrix().frobenius_norm().max(f64::MIN_POSITIVE);
        let orth = e.vectors.adjoint().matmul(&e.vectors).unwrap().sub(&Matrix::identity(n)).unwrap().frobenius_norm();
        eig = eig.max(e.reconstruct().sub(h.as_matrix()).unwrap().frobenius_norm() / scale).max(orth);

        let rank = rng.random_range(1..=n);
        let a: Psd = random_psd_with(&mut rng, n, rank, field).unwrap();
        let am = a.as_matrix();
        let an = am.frobenius_norm();
        let p = pseudo_inverse(&a, 1e-10).unwrap();
        let pm = p.as_matrix();
        let pn = pm.frobenius_norm();
        let ap = am.matmul(pm).unwrap();
        let pa = pm.matmul(am).unwrap();
        pinv = pinv
            .max(ap.matmul(am).unwrap().sub(am).unwrap().frobenius_norm() / an)
            .max(pa.matmul(pm).unwrap().sub(pm).unwrap().frobenius_norm() / pn)
            .max(ap.sub(&ap.adjoint()).unwrap().frobenius_norm() / ap.frobenius_norm())
            .max(pa.sub(&pa.adjoint()).unwrap().frobenius_norm() / pa.frobenius_norm());
        let s = psd_sqrt(&a).unwrap();
        sqrt = sqrt.max(s.as_matrix().matmul(s.as_matrix()).unwrap().sub(am).unwrap().frobenius_norm() / an);
    }
    let mut drift = 0.0f64;
    for i in 0..100u64 {
        let mut rng = substream(77, i);
        let n = rng.random_range(1..=16usize);
        let field = fields(i as usize);
        let x: Matrix = gaussian_matrix(&mut rng, n, n, field);
        let u: Matrix = random_unitary(&mut rng, n, field);
        let v: Matrix = random_unitary(&mut rng, n, field);
        let uxv = u.matmul(&x).unwrap().matmul(&v).unwrap();
        for phi in GaugeSpec::test_grid(n) {
            drift = drift.max(rel(ui_norm(&phi, &x).unwrap(), ui_norm(&phi, &uxv).unwrap()));
        }
    }
    let limit = 1e-10;
    verdict(
        eig <= limit && pinv <= limit && sqrt <= limit && drift <= limit,
        format!("max relative residuals: eig {eig:.1e}, pinv {pinv:.1e}, sqrt {sqrt:.1e}; ui_norm drift {drift:.1e}"),
    )
}

fn in_pool<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> R {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(f)
}

/// Identical configs give identical bytes, whatever the thread count.
fn c8_determinism() -> Verdict {
    let sweep_cfg = HuntConfig {
        samples: 1500,
        ..HuntConfig::new(HuntTarget::FalseVariant)
    };
    let sweep = || {
        let mut lines = Vec::new();
        let s = sweep_with(&sweep_cfg, |s| lines.extend(s.reports.iter().map(|r| serde_json::to_string(r).unwrap()))).unwrap();
        (lines, serde_json::to_string(&s).unwrap())
    };
    let hunt_cfg = HuntConfig::new(HuntTarget::FalseVariant);
    let hunt = || hunt_counterexample(&hunt_cfg).unwrap().to_json().to_string();
    let trace = || {
        let pair = random_pair(&mut substream(8, 0), false, 5, (5, 3), Field::Complex).unwrap();
        let InstancePair::Psd { a, b } = pair else { unreachable!() };
        trace_pipeline(&a, &b, 0.3, 2).unwrap().to_json().to_string()
    };
    let sweeps = (in_pool(1, sweep), in_pool(4, sweep), sweep());
    let hunts = (in_pool(1, hunt), in_pool(4, hunt));
    let traces = (trace(), in_pool(3, trace));
    let same_sweep = sweeps.0 == sweeps.1 && sweeps.1 == sweeps.2;
    verdict(
        same_sweep && hunts.0 == hunts.1 && traces.0 == traces.1,
        format!(
            "sweep ({} report lines) identical across 1/4/default threads: {same_sweep}; hunt identical across 1/4 threads: {}; pipeline trace identical: {}",
            sweeps.0 .0.len(),
            hunts.0 == hunts.1,
            traces.0 == traces.1
        ),
    )
}

type Criterion = (&'static str, fn() -> Verdict);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("theorem2 sweep", c1_theorem2_sweep),
        ("theorem1 sweep and endpoints", c2_theorem1_sweep),
        ("proof pipeline", c3_pipeline),
        ("majorization chain", c4_chain),
        ("false variant counterexample", c5_false_variant),
        ("true-inequality robustness", c6_robustness),
        ("numerical core", c7_numerical_core),
        ("determinism", c8_determinism),
    ];
    let mut all = true;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = run();
        all &= v.pass;
        println!(
            "acceptance criterion {} ({name}): {} [{:.1}s] {}",
            i + 1,
            if v.pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64(),
            v.detail
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
