//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rkhs_core::kernels::{Domain, Kernel};
use rkhs_core::metrics::{
    bs_length, curve_length, inner_distance, Curve, GridSearch, KernelMetric, MetricKind,
};
use rkhs_core::npkernels::{
    blaschke_product, blaschke_values, zero_set_criteria, Classification, CriteriaSpace,
    ZeroSetGenerator, ZeroSetVerdict,
};
use rkhs_core::{Point, C64};
use rkhs_geometry::suites::{self, run_suite, Suite, SuiteConfig, SuiteReport};
use rkhs_geometry::{execute, Command, Verb};

const SEED: u64 = 20_240_601;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let v = f();
    (v, start.elapsed())
}

fn suite(s: Suite, samples: usize, tol: f64) -> (SuiteReport, Duration) {
    let config = SuiteConfig {
        seed: SEED,
        samples: Some(samples),
        tolerance: Some(tol),
    };
    let (r, t) = timed(|| run_suite(s, &config));
    (
        r.unwrap_or_else(|e| panic!("suite {} errored: {e}", s.name())),
        t,
    )
}

/// Pass state, check count and worst error over the checks of the given identities.
fn identities(r: &SuiteReport, names: &[&str]) -> (bool, usize, f64) {
    let sel: Vec<_> = r
        .checks
        .iter()
        .filter(|c| names.contains(&c.identity))
        .collect();
    let worst = sel.iter().map(|c| c.error).fold(0.0, f64::max);
    (
        !sel.is_empty() && sel.iter().all(|c| c.passed),
        sel.len(),
        worst,
    )
}

fn c1() -> Outcome {
    let (r, t) = suite(Suite::Magic, 1000, 1e-12);
    let (ok, n, worst) = identities(&r, &[suites::MAGIC]);
    let fast = t < Duration::from_secs(1);
    outcome(
        ok && n == 1000 && fast,
        format!(
            "{n} pairs, max |δ - ρ| = {worst:.2e} (< 1e-12), {:.3} s (< 1 s)",
            t.as_secs_f64()
        ),
    )
}

fn c2() -> Outcome {
    let (r, t) = suite(Suite::Norm, 300, 1e-10);
    let (ok, n, worst) = identities(&r, &[suites::NORM_OP, suites::NORM_TRACE]);
    let fast = t < Duration::from_secs(5);
    outcome(
        ok && n == 2 * 300 * 4 && fast,
        format!(
            "300 pairs x 4 families, {n} checks, max error {worst:.2e} (< 1e-10), {:.3} s (< 5 s)",
            t.as_secs_f64()
        ),
    )
}

fn c3() -> Outcome {
    let (r, t) = suite(Suite::Commutator, 300, 1e-10);
    let (ok, n, worst) = identities(&r, &[suites::COMMUTATOR]);
    let fast = t < Duration::from_secs(5);
    outcome(
        ok && n == 300 && fast,
        format!(
            "{n} pairs, max error {worst:.2e} (< 1e-10), {:.3} s (< 5 s)",
            t.as_secs_f64()
        ),
    )
}

fn product_report() -> (SuiteReport, Duration) {
    suite(Suite::Product, 500, 1e-12)
}

fn c4(r: &SuiteReport, t: Duration) -> Outcome {
    let (law, n, worst) = identities(r, &[suites::PRODUCT_LAW, suites::PRODUCT_BOUNDS]);
    let (hardy, m, worst_h) = identities(r, &[suites::PRODUCT_HARDY]);
    let fast = t < Duration::from_secs(2);
    outcome(
        law && hardy && n == 3 * 500 && fast,
        format!(
            "500 pairs, {n} law/bound checks max {worst:.2e} (< 1e-12); {m} Hardy^2 vs DHB(2) max {worst_h:.2e} (< 1e-13); {:.3} s (< 2 s)",
            t.as_secs_f64()
        ),
    )
}

fn c5(r: &SuiteReport) -> Outcome {
    let (ok, n, worst) = identities(r, &[suites::RESCALING]);
    outcome(
        ok && n == 5 * 250,
        format!("5 rescalings x 250 pairs, max |Δδ| = {worst:.2e} (< 1e-12)"),
    )
}

fn c6(r: &SuiteReport) -> Outcome {
    let (ok, n, worst) = identities(r, &[suites::POWER]);
    let pairs = r
        .checks
        .iter()
        .filter(|c| c.identity == suites::POWER)
        .count();
    outcome(
        ok && pairs == 250 * 4 + 250 * 2,
        format!("250 DHB pairs over α ∈ {{0.5,1,1.5,2,3}}, 250 Fock pairs over β ∈ {{0.5,1,2}}; {n} steps, max decrease {worst:.2e} (slack 1e-12)"),
    )
}

fn c7() -> Outcome {
    let (r, _) = suite(Suite::Same, 50, 0.2);
    let (slope_ok, n, worst) = identities(&r, &[suites::SAME_ORDER]);
    let (ratio_ok, m, worst_ratio) = identities(&r, &[suites::SAME_RATIO]);
    outcome(
        slope_ok && ratio_ok,
        format!("{n} slopes, max |slope - 3| = {worst:.3} (≤ 0.2); {m} far pairs, max |δ/(δ̂/√2) - 1| = {worst_ratio:.2e} (≤ 1e-2)"),
    )
}

fn c8() -> Outcome {
    let artanh_half = 0.5f64.atanh();
    let h = Kernel::hardy();
    let m = KernelMetric::new(MetricKind::Delta, &h);
    let inner = inner_distance(
        &m,
        &Domain::Disk,
        &Point::real(0.0),
        &Point::real(0.5),
        &GridSearch::default(),
    )
    .unwrap();
    let err = (inner.value - artanh_half).abs();
    let gap = inner.value - inner.direct;

    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 8);
    let families = [
        Kernel::hardy(),
        Kernel::dhb(2.0).unwrap(),
        Kernel::fock(1.0).unwrap(),
    ];
    let mut ratios = Vec::new();
    for i in 0..20 {
        let k = &families[i % 3];
        let mut p = || {
            C64::from_polar(
                0.85 * rng.gen::<f64>().sqrt(),
                std::f64::consts::TAU * rng.gen::<f64>(),
            )
        };
        let curve = if i % 2 == 0 {
            Curve::segment(p(), p())
        } else {
            Curve::polyline(vec![p(), p(), p()]).unwrap()
        };
        let ld = curve_length(&KernelMetric::new(MetricKind::Delta, k), &curve)
            .unwrap()
            .value;
        let lb = bs_length(k, &curve).unwrap().value;
        ratios.push(ld / lb);
    }
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    let residual = ratios.iter().map(|r| (r - mean).abs()).fold(0.0, f64::max);
    outcome(
        err < 2e-3 && gap > 0.04 && residual < 1e-3,
        format!(
            "δ* = {:.6} vs artanh(0.5) = {artanh_half:.6} (err {err:.1e} < 2e-3), δ* - δ = {gap:.4} (> 0.04); ℓ_δ/ℓ_BS = {mean:.6} over 20 curves, residual {residual:.1e} (< 1e-3)",
            inner.value
        ),
    )
}

fn c9() -> Outcome {
    let k = Kernel::finite_length_example();
    let (l, t) = timed(|| {
        bs_length(
            &k,
            &Curve::segment(C64::new(0.0, 0.0), C64::new(1.0 - 1e-6, 0.0)),
        )
        .unwrap()
    });
    let rel = (l.value - 1.0).abs();
    let ok = l.value.is_finite() && rel <= 0.05 && t < Duration::from_secs(10);
    outcome(
        ok,
        format!(
            "bs_length = {:.6} (finite: {}), target 1 within 5%: relative deviation {:.3}; {:.3} s (< 10 s)",
            l.value,
            l.value.is_finite(),
            rel,
            t.as_secs_f64()
        ),
    )
}

fn c10() -> Outcome {
    let (r, _) = suite(Suite::Berezin, 100, 1e-10);
    let (lip, n, w1) = identities(&r, &[suites::BEREZIN_LIPSCHITZ]);
    let (sharp, m, w2) = identities(&r, &[suites::BEREZIN_SHARP]);
    let (var, v, w3) = identities(&r, &[suites::BEREZIN_VARIATION]);
    outcome(
        lip && sharp && var && m == 100 && v == suites::BEREZIN_CURVES,
        format!("{n} Lipschitz checks excess {w1:.1e} (slack 1e-10); {m} sharpness max {w2:.1e} (< 1e-12); {v} curves, variation excess {w3:.1e}"),
    )
}

fn np_report() -> SuiteReport {
    suite(Suite::NpMono, 200, 1e-12).0
}

fn c11(r: &SuiteReport) -> Outcome {
    let (psd, n, w1) = identities(r, &[suites::NP_PSD]);
    let (witness, _, w2) = identities(r, &[suites::NP_WITNESS]);
    let (mult, m, w3) = identities(r, &[suites::NP_MULTIPLIER]);
    outcome(
        psd && witness && mult,
        format!(
            "{n} random sets PSD (max negativity {w1:.1e}); DHB(2) on {{±0.5}} min eig error {w2:.1e} (< 1e-12); {m} multiplier checks max {w3:.1e} (1e-12 x boundary scale)"
        ),
    )
}

fn c12() -> Outcome {
    let gen = ZeroSetGenerator::Geometric { ratio: 0.5 };
    let prefix = 2000;
    let hardy = Kernel::hardy();
    let dirichlet = Kernel::dhb(0.0).unwrap();
    let o = Point::real(0.0);
    let crit_h = zero_set_criteria(CriteriaSpace::Hardy, &gen, prefix).unwrap();
    let rep_h = blaschke_product(&hardy, &gen, &o, prefix).unwrap();
    let lower = rep_h
        .partial_products
        .iter()
        .map(|p| p.1)
        .fold(f64::INFINITY, f64::min);
    let hardy_ok = crit_h.verdict == ZeroSetVerdict::ZeroSet
        && crit_h.blaschke_converges
        && rep_h.classification == Classification::Converges
        && lower > 0.0;
    let rep_d = blaschke_product(&dirichlet, &gen, &o, prefix).unwrap();
    let decreasing = rep_d.partial_products.windows(2).all(|w| w[1].1 <= w[0].1);
    let dir_ok = rep_d.classification == Classification::DivergesToZero && decreasing;
    let queries: Vec<Point> = gen
        .points(30)
        .unwrap()
        .iter()
        .map(|p| Point::scalar(p.z))
        .collect();
    let (values, used) = blaschke_values(&hardy, &gen, &Point::real(0.1), 30, &queries).unwrap();
    let vanish = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    outcome(
        hardy_ok && dir_ok && vanish < 1e-12,
        format!(
            "{{1 - 2^-n}}: Hardy criterion sum {:.4}, partial products ≥ {lower:.4} → admissible; Dirichlet partial products {:.3e} → {:.3e} under the declared tail law → inadmissible; max |B(x_j)| = {vanish:.1e} over {used} zeros (< 1e-12)",
            rep_h.criterion_sum,
            rep_d.partial_products[0].1,
            rep_d.product_at_basepoint()
        ),
    )
}

fn c13(np: &SuiteReport) -> Outcome {
    let (inner, n, w1) = identities(np, &[suites::INNER_DELTA, suites::INNER_PERP]);
    let perp = np
        .checks
        .iter()
        .filter(|c| c.identity == suites::INNER_PERP)
        .count();
    let (pick, m, w2) = identities(np, &[suites::NP_ORDER]);
    let (b, _) = suite(Suite::BergmanMono, 200, 1e-10);
    let (bergman, k, w3) = identities(&b, &[suites::BERGMAN_ORDER]);
    let (t, _) = suite(Suite::TSeries, 1, 0.02);
    let (series, _, w4) = identities(
        &t,
        &[
            suites::T_SMALL,
            suites::T_LARGE,
            suites::T_COEFF_LHS,
            suites::T_COEFF_RHS,
        ],
    );
    outcome(
        inner && perp == 200 && pick && bergman && k == 200 && series,
        format!(
            "{perp} Hardy inner instances, {n} checks max {w1:.1e} (< 1e-10); {m} Pick orderings (excess {w2:.1e}); {k} DHB(2) pairs δ_J ≤ δ_H (excess {w3:.1e}); t-series signs and t⁶ coefficients (max rel. dev. {w4:.1e} ≤ 2%)"
        ),
    )
}

fn c14() -> Outcome {
    let (r, _) = suite(Suite::Shape, 200, 1e-10);
    let (formula, n, w1) = identities(&r, &[suites::SHAPE_FORMULA]);
    let (cyclic, m, w2) = identities(&r, &[suites::SHAPE_CYCLIC]);
    outcome(
        formula && cyclic && n == 600,
        format!("{n} triples, max |formula - projection| = {w1:.1e} (< 1e-10); {m} cyclic checks, max {w2:.1e}"),
    )
}

fn c15() -> Outcome {
    let run = |threads| {
        let mut cmd = Command::new(Verb::IdentityCheck);
        cmd.suite = Some("all".into());
        cmd.seed = SEED;
        cmd.threads = threads;
        execute(&cmd).expect("identity suite runs")
    };
    let ((a, b), t) = timed(|| (run(Some(1)), run(Some(4))));
    let same = a.rendered == b.rendered;
    outcome(
        same && a.failures == 0 && t < Duration::from_secs(120),
        format!(
            "two runs (1 and 4 threads) byte-identical: {same}, {} bytes, failures {}; {:.2} s total (< 120 s)",
            a.rendered.len(),
            a.failures,
            t.as_secs_f64()
        ),
    )
}

type Criterion<'a> = Box<dyn Fn() -> Outcome + 'a>;

fn main() -> ExitCode {
    let (product, product_time) = product_report();
    let np = np_report();
    let criteria: Vec<(&str, Criterion)> = vec![
        ("δ = ρ for the Hardy kernel", Box::new(c1)),
        ("‖P_x - P_y‖ = δ and ‖P_x - P_y‖_S1 = 2δ", Box::new(c2)),
        ("‖[P_x, P_y]‖² = δ²(1 - δ²)", Box::new(c3)),
        (
            "product law and bounds",
            Box::new(|| c4(&product, product_time)),
        ),
        ("rescaling invariance", Box::new(|| c5(&product))),
        ("power monotonicity", Box::new(|| c6(&product))),
        ("δ, δ̂, δ̌ agree to third order", Box::new(c7)),
        ("inner distance and length proportionality", Box::new(c8)),
        ("finite BS length to the boundary", Box::new(c9)),
        ("Berezin Lipschitz bound", Box::new(c10)),
        ("complete Pick tests", Box::new(|| c11(&np))),
        ("zero sets", Box::new(c12)),
        ("invariant subspaces", Box::new(|| c13(&np))),
        ("shape invariant", Box::new(c14)),
        ("CLI determinism", Box::new(c15)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        if !o.pass {
            failed += 1;
        }
        println!(
            "{} {:>2} {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            i + 1,
            o.detail
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
