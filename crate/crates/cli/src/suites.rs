//! Seeded numerical identity suites.
//!
//! Each suite draws its samples sequentially from a ChaCha8 stream keyed by the
//! seed and the suite, evaluates them on the current rayon pool and collects
//! the checks in sample order, so reports do not depend on the thread count.

use std::f64::consts::{PI, SQRT_2};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rkhs_core::kernels::{Kernel, Rescaling};
use rkhs_core::linalg::CMatrix;
use rkhs_core::metrics::{delta, delta_check, delta_hat, rho_disk, Curve};
use rkhs_core::npkernels::{maximal_multiplier, np_test};
use rkhs_core::operators::{
    commutator_norm, projection, variation_along_curve, SpanBasis, SpanOperator,
};
use rkhs_core::subspaces::{
    delta_sub, hardy_inner_delta, monotonicity_report, shape_invariant, t_series_check, Part,
    SubspaceSpec,
};
use rkhs_core::{Error, Point, C64};
use serde_json::{json, Map, Value};

use crate::error::{CliError, Result};
use crate::points::{num, point_to_json};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Magic,
    Norm,
    Commutator,
    Product,
    Same,
    Berezin,
    NpMono,
    BergmanMono,
    Shape,
    TSeries,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::Magic,
        Suite::Norm,
        Suite::Commutator,
        Suite::Product,
        Suite::Same,
        Suite::Berezin,
        Suite::NpMono,
        Suite::BergmanMono,
        Suite::Shape,
        Suite::TSeries,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Magic => "magic",
            Suite::Norm => "norm",
            Suite::Commutator => "commutator",
            Suite::Product => "product",
            Suite::Same => "same",
            Suite::Berezin => "berezin",
            Suite::NpMono => "np-mono",
            Suite::BergmanMono => "bergman-mono",
            Suite::Shape => "shape",
            Suite::TSeries => "t-series",
        }
    }

    /// Parses a suite name; `all` yields every suite.
    pub fn parse_list(name: &str) -> Option<Vec<Suite>> {
        if name == "all" {
            return Some(Suite::ALL.to_vec());
        }
        name.split(',')
            .map(|part| Suite::ALL.iter().find(|s| s.name() == part.trim()).copied())
            .collect()
    }

    pub fn default_samples(&self) -> usize {
        match self {
            Suite::Magic => 1000,
            Suite::Norm | Suite::Commutator => 300,
            Suite::Product => 500,
            Suite::Same => 50,
            Suite::Berezin => 100,
            Suite::NpMono => 100,
            Suite::BergmanMono | Suite::Shape => 200,
            Suite::TSeries => 1,
        }
    }

    /// The tolerance `--tol` replaces.
    pub fn default_tolerance(&self) -> f64 {
        match self {
            Suite::Magic | Suite::Product | Suite::NpMono => 1e-12,
            Suite::Norm
            | Suite::Commutator
            | Suite::Berezin
            | Suite::BergmanMono
            | Suite::Shape => 1e-10,
            Suite::Same => 0.2,
            Suite::TSeries => 0.02,
        }
    }

    fn salt(&self) -> u64 {
        0x9e37_79b9_7f4a_7c15u64.wrapping_mul(*self as u64 + 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub samples: Option<usize>,
    pub tolerance: Option<f64>,
}

/// One evaluated identity or inequality.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub identity: &'static str,
    pub case: String,
    /// Violation size: `|lhs - rhs|` for identities, the excess for inequalities.
    pub error: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    fn equal(identity: &'static str, case: String, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        let error = (lhs - rhs).abs();
        Check {
            identity,
            case,
            error,
            tolerance,
            passed: error <= tolerance,
        }
    }

    /// `lhs ≤ rhs + slack`.
    fn at_most(identity: &'static str, case: String, lhs: f64, rhs: f64, slack: f64) -> Self {
        let error = (lhs - rhs).max(0.0);
        Check {
            identity,
            case,
            error,
            tolerance: slack,
            passed: lhs <= rhs + slack,
        }
    }

    fn holds(identity: &'static str, case: String, passed: bool) -> Self {
        Check {
            identity,
            case,
            error: if passed { 0.0 } else { 1.0 },
            tolerance: 0.0,
            passed,
        }
    }

    fn from_error(identity: &'static str, case: String, e: &Error) -> Self {
        let error = match *e {
            Error::BoundViolated { value, bound } => value - bound,
            Error::Inconsistent { numeric, analytic } => (numeric - analytic).abs(),
            Error::InnerBelowDirect { inner, direct } => direct - inner,
            Error::NonMonotone { previous, next } => previous - next,
            _ => f64::NAN,
        };
        Check {
            identity,
            case: format!("{case}: {e}"),
            error,
            tolerance: 0.0,
            passed: false,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "identity": self.identity,
            "case": self.case,
            "error": num(self.error),
            "tolerance": num(self.tolerance),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub samples: usize,
    pub tolerance: f64,
    pub checks: Vec<Check>,
    pub summary: Map<String, Value>,
}

impl SuiteReport {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn max_error(&self) -> Option<f64> {
        self.checks
            .iter()
            .filter(|c| c.error.is_finite())
            .map(|c| c.error)
            .reduce(f64::max)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite.name(),
            "seed": self.seed,
            "samples": self.samples,
            "tolerance": num(self.tolerance),
            "checks": self.checks.len(),
            "max_error": self.max_error().map_or(Value::Null, num),
            "passed": self.passed(),
            "summary": Value::Object(self.summary.clone()),
            "findings": self.failures().map(Check::to_json).collect::<Vec<_>>(),
        })
    }
}

fn is_assertion(e: &Error) -> bool {
    matches!(
        e,
        Error::Inconsistent { .. }
            | Error::BoundViolated { .. }
            | Error::InnerBelowDirect { .. }
            | Error::NonMonotone { .. }
    )
}

/// Routes failed library assertions into a failing check; other errors abort the suite.
fn checked<T>(
    r: rkhs_core::Result<T>,
    identity: &'static str,
    case: impl Fn() -> String,
) -> Result<std::result::Result<T, Check>> {
    match r {
        Ok(v) => Ok(Ok(v)),
        Err(e) if is_assertion(&e) => Ok(Err(Check::from_error(identity, case(), &e))),
        Err(e) => Err(CliError::Core(e)),
    }
}

/// Evaluates `f` on every sample in parallel, keeping sample order and
/// reporting the first error in that order.
fn evaluate<T, F>(samples: &[T], f: F) -> Result<Vec<Check>>
where
    T: Sync,
    F: Fn(usize, &T) -> Result<Vec<Check>> + Sync + Send,
{
    let results: Vec<Result<Vec<Check>>> = samples
        .par_iter()
        .enumerate()
        .map(|(i, s)| f(i, s))
        .collect();
    let mut out = Vec::new();
    for r in results {
        out.extend(r?);
    }
    Ok(out)
}

fn disk_point(rng: &mut ChaCha8Rng, rmax: f64) -> Point {
    let r = rmax * rng.gen::<f64>().sqrt();
    let t = 2.0 * PI * rng.gen::<f64>();
    Point::scalar(C64::from_polar(r, t))
}

fn plane_point(rng: &mut ChaCha8Rng, radius: f64) -> Point {
    disk_point(rng, radius)
}

fn ball_point(rng: &mut ChaCha8Rng, n: usize, rmax: f64) -> Point {
    let v: Vec<C64> = (0..n)
        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let norm = v
        .iter()
        .map(|z| z.norm_sqr())
        .sum::<f64>()
        .sqrt()
        .max(1e-300);
    let r = rmax * rng.gen::<f64>().powf(1.0 / (2 * n) as f64);
    Point::vector(v.into_iter().map(|z| z * (r / norm)).collect())
}

fn unit(rng: &mut ChaCha8Rng) -> C64 {
    C64::from_polar(1.0, 2.0 * PI * rng.gen::<f64>())
}

fn fmt_point(p: &Point) -> String {
    point_to_json(p).to_string()
}

fn pair_case(label: &str, x: &Point, y: &Point) -> String {
    format!("{label} x={} y={}", fmt_point(x), fmt_point(y))
}

fn draw_kernel_point(rng: &mut ChaCha8Rng, k: &Kernel) -> Point {
    use rkhs_core::kernels::Domain;
    match k.domain() {
        Domain::Plane => plane_point(rng, 1.5),
        Domain::Ball(n) => ball_point(rng, n, 0.9),
        _ => disk_point(rng, 0.95),
    }
}

fn norm_families() -> Result<Vec<Kernel>> {
    Ok(vec![
        Kernel::hardy(),
        Kernel::dhb(2.0)?,
        Kernel::fock(1.0)?,
        Kernel::drury_arveson(2)?,
    ])
}

/// Runs one suite. `samples == 0` performs no checks.
pub fn run_suite(suite: Suite, config: &SuiteConfig) -> Result<SuiteReport> {
    let samples = config.samples.unwrap_or_else(|| suite.default_samples());
    let tol = config
        .tolerance
        .unwrap_or_else(|| suite.default_tolerance());
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(CliError::Usage(format!(
            "tolerance must be a finite non-negative number, got {tol}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ suite.salt());
    let mut summary = Map::new();
    let checks = if samples == 0 {
        Vec::new()
    } else {
        match suite {
            Suite::Magic => magic(&mut rng, samples, tol)?,
            Suite::Norm => norm(&mut rng, samples, tol)?,
            Suite::Commutator => commutator(&mut rng, samples, tol)?,
            Suite::Product => product(&mut rng, samples, tol)?,
            Suite::Same => same(&mut rng, samples, tol, &mut summary)?,
            Suite::Berezin => berezin(&mut rng, samples, tol)?,
            Suite::NpMono => np_mono(&mut rng, samples, tol, &mut summary)?,
            Suite::BergmanMono => bergman_mono(&mut rng, samples, tol)?,
            Suite::Shape => shape(&mut rng, samples, tol)?,
            Suite::TSeries => t_series(tol, &mut summary)?,
        }
    };
    Ok(SuiteReport {
        suite,
        seed: config.seed,
        samples,
        tolerance: tol,
        checks,
        summary,
    })
}

pub const MAGIC: &str = "δ(x, y) = ρ(x, y) = |x - y| / |1 - x̄y| for the Hardy kernel 1/(1 - xȳ)";

fn magic(rng: &mut ChaCha8Rng, n: usize, tol: f64) -> Result<Vec<Check>> {
    let k = Kernel::hardy();
    let pairs: Vec<(Point, Point)> = (0..n)
        .map(|_| (disk_point(rng, 0.99), disk_point(rng, 0.99)))
        .collect();
    evaluate(&pairs, |_, (x, y)| {
        let d = delta(&k, x, y)?;
        let r = rho_disk(x, y)?;
        Ok(vec![Check::equal(
            MAGIC,
            pair_case("hardy", x, y),
            d,
            r,
            tol,
        )])
    })
}

pub const NORM_OP: &str = "‖P_x - P_y‖ = δ(x, y)";
pub const NORM_TRACE: &str = "‖P_x - P_y‖_S1 = 2δ(x, y)";

fn norm(rng: &mut ChaCha8Rng, n: usize, tol: f64) -> Result<Vec<Check>> {
    let families = norm_families()?;
    let pairs: Vec<(usize, Point, Point)> = (0..n)
        .flat_map(|_| (0..families.len()).collect::<Vec<_>>())
        .map(|f| {
            let x = draw_kernel_point(rng, &families[f]);
            let y = draw_kernel_point(rng, &families[f]);
            (f, x, y)
        })
        .collect();
    evaluate(&pairs, |_, (f, x, y)| {
        let k = &families[*f];
        let d = delta(k, x, y)?;
        let basis = SpanBasis::new(k.clone(), &[x.clone(), y.clone()])?;
        let diff = projection(&basis, 0)?.sub(&projection(&basis, 1)?)?;
        let case = || pair_case(&k.label(), x, y);
        Ok(vec![
            Check::equal(NORM_OP, case(), diff.norm(), d, tol),
            Check::equal(NORM_TRACE, case(), diff.schatten_norm(1.0)?, 2.0 * d, tol),
        ])
    })
}

pub const COMMUTATOR: &str = "‖[P_x, P_y]‖² = δ²(1 - δ²)";

fn commutator(rng: &mut ChaCha8Rng, n: usize, tol: f64) -> Result<Vec<Check>> {
    let families = norm_families()?;
    let pairs: Vec<(usize, Point, Point)> = (0..n)
        .map(|i| {
            let f = i % families.len();
            let x = draw_kernel_point(rng, &families[f]);
            let y = draw_kernel_point(rng, &families[f]);
            (f, x, y)
        })
        .collect();
    evaluate(&pairs, |_, (f, x, y)| {
        let k = &families[*f];
        let d2 = delta(k, x, y)?.powi(2);
        let basis = SpanBasis::new(k.clone(), &[x.clone(), y.clone()])?;
        let c = commutator_norm(&basis, 0, 1)?;
        Ok(vec![Check::equal(
            COMMUTATOR,
            pair_case(&k.label(), x, y),
            c * c,
            d2 * (1.0 - d2),
            tol,
        )])
    })
}

pub const PRODUCT_LAW: &str = "δ₁₂² = δ₁² + δ₂² - δ₁²δ₂² for the product kernel K₁K₂";
pub const PRODUCT_BOUNDS: &str = "max(δ₁, δ₂) ≤ δ₁₂ ≤ δ₁ + δ₂";
pub const PRODUCT_HARDY: &str = "δ for the product of two Hardy kernels equals δ for DHB(2)";
pub const RESCALING: &str =
    "δ is unchanged under K(x, y) ↦ G(x)K(x, y)conj(G(y)) with G nonvanishing";
pub const POWER: &str = "δ for K^α is nondecreasing in α";

struct ProductSample {
    fock: bool,
    a: f64,
    b: f64,
    x: Point,
    y: Point,
}

fn random_rescalings(rng: &mut ChaCha8Rng) -> Vec<Rescaling> {
    let mut c = || C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    let constant = Rescaling::Constant(c() + C64::new(2.0, 0.0));
    let exp1 = Rescaling::ExpPolynomial {
        scale: c() + C64::new(0.0, 1.5),
        coeffs: vec![c(), c()],
    };
    let exp2 = Rescaling::ExpPolynomial {
        scale: c() - C64::new(1.5, 0.0),
        coeffs: vec![c(), c(), c()],
    };
    let exp3 = Rescaling::ExpPolynomial {
        scale: c() + C64::new(1.5, 0.0),
        coeffs: vec![C64::new(0.0, 0.0), c(), c(), c()],
    };
    let a = c() + C64::new(3.0, 0.0);
    let affine = Rescaling::Affine { a, b: c() * 0.9 };
    vec![constant, exp1, exp2, exp3, affine]
}

fn product(rng: &mut ChaCha8Rng, n: usize, tol: f64) -> Result<Vec<Check>> {
    let hardy = Kernel::hardy();
    let dhb2 = Kernel::dhb(2.0)?;
    let hardy_sq = Kernel::product(hardy.clone(), hardy.clone())?;
    let rescaled = random_rescalings(rng)
        .into_iter()
        .map(|g| Kernel::rescale(hardy.clone(), g))
        .collect::<rkhs_core::Result<Vec<_>>>()?;
    let dhb_powers = [0.5, 1.0, 1.5, 2.0, 3.0]
        .iter()
        .map(|a| Kernel::power(hardy.clone(), *a))
        .collect::<rkhs_core::Result<Vec<_>>>()?;
    let fock_powers = [0.5, 1.0, 2.0]
        .iter()
        .map(|b| Kernel::power(Kernel::fock(1.0)?, *b))
        .collect::<rkhs_core::Result<Vec<_>>>()?;
    let samples: Vec<ProductSample> = (0..n)
        .map(|i| {
            let fock = i % 2 == 1;
            let a = rng.gen_range(0.25..2.5);
            let b = rng.gen_range(0.25..2.5);
            let (x, y) = if fock {
                (plane_point(rng, 1.5), plane_point(rng, 1.5))
            } else {
                (disk_point(rng, 0.95), disk_point(rng, 0.95))
            };
            ProductSample { fock, a, b, x, y }
        })
        .collect();
    evaluate(&samples, |_, s| {
        let (x, y) = (&s.x, &s.y);
        let (k1, k2) = if s.fock {
            (Kernel::fock(s.a)?, Kernel::fock(s.b)?)
        } else {
            (Kernel::dhb(s.a)?, Kernel::dhb(s.b)?)
        };
        let label = format!("{} * {}", k1.label(), k2.label());
        let d1 = delta(&k1, x, y)?;
        let d2 = delta(&k2, x, y)?;
        let d12 = delta(&Kernel::product(k1, k2)?, x, y)?;
        let (a2, b2) = (d1 * d1, d2 * d2);
        let mut out = vec![
            Check::equal(
                PRODUCT_LAW,
                pair_case(&label, x, y),
                d12 * d12,
                a2 + b2 - a2 * b2,
                tol,
            ),
            Check::at_most(
                PRODUCT_BOUNDS,
                pair_case(&label, x, y),
                d1.max(d2),
                d12,
                tol,
            ),
            Check::at_most(PRODUCT_BOUNDS, pair_case(&label, x, y), d12, d1 + d2, tol),
        ];
        if s.fock {
            let ds = fock_powers
                .iter()
                .map(|k| delta(k, x, y))
                .collect::<rkhs_core::Result<Vec<_>>>()?;
            for w in ds.windows(2) {
                out.push(Check::at_most(
                    POWER,
                    pair_case("fock(1)^β", x, y),
                    w[0],
                    w[1],
                    tol,
                ));
            }
        } else {
            let h = delta(&hardy, x, y)?;
            out.push(Check::equal(
                PRODUCT_HARDY,
                pair_case("hardy * hardy", x, y),
                delta(&hardy_sq, x, y)?,
                delta(&dhb2, x, y)?,
                tol / 10.0,
            ));
            for k in &rescaled {
                out.push(Check::equal(
                    RESCALING,
                    pair_case(&k.label(), x, y),
                    delta(k, x, y)?,
                    h,
                    tol,
                ));
            }
            let ds = dhb_powers
                .iter()
                .map(|k| delta(k, x, y))
                .collect::<rkhs_core::Result<Vec<_>>>()?;
            for w in ds.windows(2) {
                out.push(Check::at_most(
                    POWER,
                    pair_case("hardy^α", x, y),
                    w[0],
                    w[1],
                    tol,
                ));
            }
        }
        Ok(out)
    })
}

pub const SAME_ORDER: &str =
    "max |δ - δ̂|, |δ - δ̌|, |δ̂ - δ̌| = O(ε³) at distance ε (log-log slope 3)";
pub const SAME_RATIO: &str = "δ / (δ̂/√2) → 1 as δ → 1";
pub const SAME_EPSILONS: [f64; 3] = [1e-1, 1e-2, 1e-3];
const SAME_RATIO_TOLERANCE: f64 = 1e-2;

/// Least-squares slope of `log y` against `log x`.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// Largest pairwise difference among `δ`, `δ̂`, `δ̌`.
pub fn max_spread(k: &Kernel, x: &Point, y: &Point) -> Result<f64> {
    let (a, b, c) = (delta(k, x, y)?, delta_hat(k, x, y)?, delta_check(k, x, y)?);
    Ok((a - b).abs().max((a - c).abs()).max((b - c).abs()))
}

/// The point at pseudohyperbolic distance `eps` from `x` in direction `dir`.
fn mobius(x: C64, eps: f64, dir: C64) -> Point {
    let w = dir * eps;
    Point::scalar((x + w) / (C64::new(1.0, 0.0) + x.conj() * w))
}

fn same(
    rng: &mut ChaCha8Rng,
    n: usize,
    tol: f64,
    summary: &mut Map<String, Value>,
) -> Result<Vec<Check>> {
    let families = [Kernel::hardy(), Kernel::dhb(2.0)?];
    struct Sample {
        f: usize,
        x: C64,
        dir: C64,
        r: f64,
    }
    let samples: Vec<Sample> = (0..n)
        .map(|i| Sample {
            f: i % 2,
            x: disk_point(rng, 0.9).coords()[0],
            dir: unit(rng),
            r: rng.gen_range(0.99..0.999),
        })
        .collect();
    let checks = evaluate(&samples, |_, s| {
        let k = &families[s.f];
        let xp = Point::scalar(s.x);
        let spreads = SAME_EPSILONS
            .iter()
            .map(|e| max_spread(k, &xp, &mobius(s.x, *e, s.dir)))
            .collect::<Result<Vec<_>>>()?;
        let slope = log_log_slope(&SAME_EPSILONS, &spreads);
        let case = format!(
            "{} x={} direction={}",
            k.label(),
            fmt_point(&xp),
            fmt_point(&Point::scalar(s.dir))
        );
        let mut out = vec![Check::equal(SAME_ORDER, case, slope, 3.0, tol)];
        let far_x = Point::scalar(s.dir * s.r);
        let far_y = Point::scalar(-s.dir * s.r);
        let d = delta(k, &far_x, &far_y)?;
        if d > 1.0 - 1e-4 {
            let ratio = d / (delta_hat(k, &far_x, &far_y)? / SQRT_2);
            out.push(Check::equal(
                SAME_RATIO,
                pair_case(&k.label(), &far_x, &far_y),
                ratio,
                1.0,
                SAME_RATIO_TOLERANCE,
            ));
        }
        Ok(out)
    })?;
    let slopes: Vec<f64> = checks
        .iter()
        .filter(|c| c.identity == SAME_ORDER)
        .map(|c| 3.0 + c.error)
        .collect();
    if let Some(worst) = slopes.iter().cloned().reduce(f64::max) {
        summary.insert("max_slope_deviation".into(), num(worst - 3.0));
    }
    summary.insert("ratio_tolerance".into(), num(SAME_RATIO_TOLERANCE));
    Ok(checks)
}

pub const BEREZIN_LIPSCHITZ: &str = "|Â(x) - Â(y)| ≤ 2‖A‖δ(x, y)";
pub const BEREZIN_SHARP: &str = "|Â(x) - Â(y)| = 2‖A‖δ(x, y) for A = P_x - P_y";
pub const BEREZIN_VARIATION: &str = "Var(Â, γ) ≤ 2‖A‖ℓ_δ(γ)";
pub const BEREZIN_CURVES: usize = 20;
const BEREZIN_PAIRS: usize = 5;

struct BerezinSample {
    f: usize,
    basis: Vec<Point>,
    coeffs: CMatrix,
    pairs: Vec<(Point, Point)>,
}

fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
    let mut m = CMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = C64::new(rng.gen_range(-1.0..1.0), 0.0);
        for j in 0..i {
            let z = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    m
}

fn berezin(rng: &mut ChaCha8Rng, n: usize, tol: f64) -> Result<Vec<Check>> {
    let families = [Kernel::hardy(), Kernel::dhb(2.0)?];
    let samples: Vec<BerezinSample> = (0..n)
        .map(|i| {
            let basis: Vec<Point> = (0..3).map(|_| disk_point(rng, 0.8)).collect();
            let coeffs = random_hermitian(rng, 3);
            let pairs = (0..BEREZIN_PAIRS)
                .map(|_| (disk_point(rng, 0.9), disk_point(rng, 0.9)))
                .collect();
            BerezinSample {
                f: i % 2,
                basis,
                coeffs,
                pairs,
            }
        })
        .collect();
    evaluate(&samples, |i, s| {
        let k = &families[s.f];
        let basis = SpanBasis::new(k.clone(), &s.basis)?;
        let op = SpanOperator::new(basis, s.coeffs.clone())?;
        let a = op.norm();
        let label = format!("{} operator {i}", k.label());
        let mut out = Vec::new();
        for (x, y) in &s.pairs {
            let jump = (op.berezin(x)? - op.berezin(y)?).norm();
            out.push(Check::at_most(
                BEREZIN_LIPSCHITZ,
                pair_case(&label, x, y),
                jump,
                2.0 * a * delta(k, x, y)?,
                tol,
            ));
        }
        let (x, y) = &s.pairs[0];
        let two = SpanBasis::new(k.clone(), &[x.clone(), y.clone()])?;
        let p = projection(&two, 0)?.sub(&projection(&two, 1)?)?;
        let jump = (p.berezin(x)? - p.berezin(y)?).norm();
        out.push(Check::equal(
            BEREZIN_SHARP,
            pair_case(&k.label(), x, y),
            jump,
            2.0 * p.norm() * delta(k, x, y)?,
            tol / 100.0,
        ));
        if i < BEREZIN_CURVES {
            let (a, b) = (s.basis[0].coords()[0], y.coords()[0]);
            let case = || {
                format!(
                    "{label} segment {} -> {}",
                    fmt_point(&s.basis[0]),
                    fmt_point(y)
                )
            };
            let v = variation_along_curve(&op, &Curve::segment(a, b));
            out.push(match checked(v, BEREZIN_VARIATION, case)? {
                Ok(v) => {
                    Check::at_most(BEREZIN_VARIATION, case(), v.variation.value, v.bound, 1e-8)
                }
                Err(c) => c,
            });
        }
        Ok(out)
    })
}

pub const NP_PSD: &str = "[1 - 1/K(x_i, x_j)] is positive semidefinite for a complete Pick kernel";
pub const NP_WITNESS: &str =
    "[1 - 1/K(x_i, x_j)] for DHB(2) on {1/2, -1/2} has minimum eigenvalue -1/8";
pub const NP_MULTIPLIER: &str = "the maximal multiplier satisfies G(x) = 0 and Re G(y) = δ(x, y)";
pub const NP_ORDER: &str = "δ_J ≥ δ_H ≥ δ_J⊥ for complete Pick kernels";
pub const INNER_DELTA: &str = "δ_J = ρ for J = ΘH² with Θ inner";
pub const INNER_PERP: &str =
    "δ_J⊥² = (ρ² - ρ_Θ²)/(1 - ρ_Θ²) for J = ΘH², matching the Gram projection";
const INNER_TOLERANCE: f64 = 1e-10;
const NP_SET_SIZE: usize = 5;

struct NpSample {
    pick: usize,
    set: Vec<Point>,
    mm: usize,
    x: Point,
    y: Point,
    sub: usize,
    vanish: Point,
    zeros: Vec<C64>,
    constant: C64,
}

fn boundary_scale(p: &Point) -> f64 {
    let r = p.coords().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    1.0 / (1.0 - r)
}

fn np_mono(
    rng: &mut ChaCha8Rng,
    n: usize,
    tol: f64,
    summary: &mut Map<String, Value>,
) -> Result<Vec<Check>> {
    let pick = [
        Kernel::dhb(0.0)?,
        Kernel::dhb(0.5)?,
        Kernel::hardy(),
        Kernel::drury_arveson(1)?,
        Kernel::drury_arveson(2)?,
        Kernel::drury_arveson(3)?,
        Kernel::drury_arveson(4)?,
    ];
    let multiplier = [Kernel::dhb(0.0)?, Kernel::dhb(0.5)?, Kernel::hardy()];
    let samples: Vec<NpSample> = (0..n)
        .map(|i| {
            let p = i % pick.len();
            let set = (0..NP_SET_SIZE)
                .map(|_| draw_kernel_point(rng, &pick[p]))
                .collect();
            let zeros = (0..1 + i % 3)
                .map(|_| disk_point(rng, 0.9).coords()[0])
                .collect();
            NpSample {
                pick: p,
                set,
                mm: i % multiplier.len(),
                x: disk_point(rng, 0.9),
                y: disk_point(rng, 0.9),
                sub: (i / multiplier.len()) % multiplier.len(),
                vanish: disk_point(rng, 0.9),
                zeros,
                constant: unit(rng),
            }
        })
        .collect();
    let hardy = Kernel::hardy();
    let mut checks = evaluate(&samples, |_, s| {
        let mut out = Vec::new();
        let k = &pick[s.pick];
        let verdict = np_test(k, &s.set)?;
        let set_case = format!(
            "{} points={}",
            k.label(),
            Value::Array(s.set.iter().map(point_to_json).collect())
        );
        let scale = verdict.trace.abs().max(1.0);
        out.push(Check::at_most(
            NP_PSD,
            set_case,
            -verdict.min_eigenvalue,
            0.0,
            tol * scale,
        ));

        let (x, y) = (&s.x, &s.y);
        let mk = &multiplier[s.mm];
        let g = maximal_multiplier(mk, x, y)?;
        let cond = boundary_scale(x).max(boundary_scale(y));
        out.push(Check::equal(
            NP_MULTIPLIER,
            pair_case(&mk.label(), x, y),
            g.value_at_base()?.re,
            g.delta,
            tol * cond,
        ));
        out.push(Check::equal(
            NP_MULTIPLIER,
            pair_case(&mk.label(), x, y),
            g.eval(x)?.norm(),
            0.0,
            tol * cond,
        ));

        let sk = &multiplier[s.sub];
        let sub = SubspaceSpec::vanish_on(sk.clone(), vec![s.vanish.clone()], vec![1])?;
        let row = &monotonicity_report(&sub, &[(x.clone(), y.clone())])?.rows[0];
        let case = || {
            format!(
                "{} vanish at {} {}",
                sk.label(),
                fmt_point(&s.vanish),
                pair_case("", x, y)
            )
        };
        if let Some(j) = row.delta_j {
            out.push(Check::at_most(
                NP_ORDER,
                case(),
                row.delta_h,
                j,
                INNER_TOLERANCE,
            ));
        }
        if let Some(p) = row.delta_jperp {
            out.push(Check::at_most(
                NP_ORDER,
                case(),
                p,
                row.delta_h,
                INNER_TOLERANCE,
            ));
        }

        let inner = SubspaceSpec::hardy_inner(hardy.clone(), s.zeros.clone(), s.constant)?;
        let zero_points: Vec<Point> = s.zeros.iter().map(|z| Point::scalar(*z)).collect();
        let gram = SubspaceSpec::vanish_on(hardy.clone(), zero_points, vec![1; s.zeros.len()])?;
        let (closed_j, closed_perp) = hardy_inner_delta(&s.zeros, s.constant, x, y)?;
        let zeros_json = Value::Array(
            s.zeros
                .iter()
                .map(|z| point_to_json(&Point::scalar(*z)))
                .collect(),
        );
        let case = || format!("zeros={zeros_json} {}", pair_case("", x, y));
        if let Some(cj) = closed_j {
            out.push(Check::equal(
                INNER_DELTA,
                case(),
                delta_sub(&inner, Part::J, x, y)?,
                cj,
                INNER_TOLERANCE,
            ));
            out.push(Check::equal(
                INNER_DELTA,
                case(),
                cj,
                rho_disk(x, y)?,
                INNER_TOLERANCE,
            ));
        }
        out.push(Check::equal(
            INNER_PERP,
            case(),
            closed_perp,
            delta_sub(&gram, Part::JPerp, x, y)?,
            INNER_TOLERANCE,
        ));
        Ok(out)
    })?;
    let witness = np_test(&Kernel::dhb(2.0)?, &[Point::real(0.5), Point::real(-0.5)])?;
    summary.insert("witness_min_eigenvalue".into(), num(witness.min_eigenvalue));
    summary.insert("subspace_tolerance".into(), num(INNER_TOLERANCE));
    checks.push(Check::equal(
        NP_WITNESS,
        "dhb(2) points=[0.5,-0.5]".into(),
        witness.min_eigenvalue,
        -0.125,
        tol,
    ));
    checks.push(Check::holds(
        NP_WITNESS,
        "dhb(2) points=[0.5,-0.5] witness present".into(),
        witness.witness.is_some(),
    ));
    Ok(checks)
}

pub const BERGMAN_ORDER: &str = "δ_J ≤ δ_H for J = {f ∈ DHB(2) : f(0) = 0}";

fn bergman_mono(rng: &mut ChaCha8Rng, n: usize, tol: f64) -> Result<Vec<Check>> {
    let sub = SubspaceSpec::vanish_on(Kernel::dhb(2.0)?, vec![Point::real(0.0)], vec![1])?;
    let pairs: Vec<(Point, Point)> = (0..n)
        .map(|_| (disk_point(rng, 0.95), disk_point(rng, 0.95)))
        .collect();
    evaluate(&pairs, |_, (x, y)| {
        let row = &monotonicity_report(&sub, &[(x.clone(), y.clone())])?.rows[0];
        Ok(match row.delta_j {
            Some(j) => vec![Check::at_most(
                BERGMAN_ORDER,
                pair_case("dhb(2)", x, y),
                j,
                row.delta_h,
                tol,
            )],
            None => Vec::new(),
        })
    })
}

pub const SHAPE_FORMULA: &str =
    "δ_J(y, z)² = (δ_xy² + δ_xz² + δ_yz² - 2 + 2Υ)/(δ_xy² δ_xz²) for J = {f : f(x) = 0}";
pub const SHAPE_CYCLIC: &str = "Υ(x, y, z) = Υ(y, z, x)";
/// Cyclic permutation reorders one complex product, which can move the last bit.
const CYCLIC_TOLERANCE: f64 = 4.0 * f64::EPSILON;

fn shape(rng: &mut ChaCha8Rng, n: usize, tol: f64) -> Result<Vec<Check>> {
    let families = [Kernel::hardy(), Kernel::dhb(2.0)?, Kernel::fock(1.0)?];
    let triples: Vec<(usize, [Point; 3])> = (0..n)
        .flat_map(|_| 0..families.len())
        .map(|f| {
            let k = &families[f];
            (
                f,
                [
                    draw_kernel_point(rng, k),
                    draw_kernel_point(rng, k),
                    draw_kernel_point(rng, k),
                ],
            )
        })
        .collect();
    evaluate(&triples, |_, (f, [x, y, z])| {
        let k = &families[*f];
        let case = || {
            format!(
                "{} x={} y={} z={}",
                k.label(),
                fmt_point(x),
                fmt_point(y),
                fmt_point(z)
            )
        };
        let a = match checked(shape_invariant(k, x, y, z), SHAPE_FORMULA, case)? {
            Ok(a) => a,
            Err(c) => return Ok(vec![c]),
        };
        let b = match checked(shape_invariant(k, y, z, x), SHAPE_FORMULA, case)? {
            Ok(b) => b,
            Err(c) => return Ok(vec![c]),
        };
        Ok(vec![
            Check::equal(
                SHAPE_FORMULA,
                case(),
                a.delta_j_sq,
                a.delta_j_sq_projection,
                tol,
            ),
            Check::equal(SHAPE_CYCLIC, case(), a.upsilon, b.upsilon, CYCLIC_TOLERANCE),
        ])
    })
}

pub const T_SMALL: &str = "(1 - 2t²)²/(1 + 2t²)² < (1 - t²)⁴/(1 + t²)⁴ at t = 0.1";
pub const T_LARGE: &str = "(1 - 2t²)²/(1 + 2t²)² > (1 - t²)⁴/(1 + t²)⁴ at t = 0.9";
pub const T_COEFF_LHS: &str = "the t⁶ coefficient of (1 - 2t²)²/(1 + 2t²)² is -96";
pub const T_COEFF_RHS: &str = "the t⁶ coefficient of (1 - t²)⁴/(1 + t²)⁴ is -88";

fn t_series(tol: f64, summary: &mut Map<String, Value>) -> Result<Vec<Check>> {
    let small = t_series_check(0.1)?;
    let large = t_series_check(0.9)?;
    for (key, s) in [("t=0.1", &small), ("t=0.9", &large)] {
        summary.insert(
            key.into(),
            json!({"lhs": num(s.lhs), "rhs": num(s.rhs), "difference": num(s.difference)}),
        );
    }
    summary.insert("lhs_t6".into(), num(small.lhs_t6));
    summary.insert("rhs_t6".into(), num(small.rhs_t6));
    Ok(vec![
        Check::at_most(T_SMALL, "t=0.1".into(), small.lhs, small.rhs, 0.0),
        Check::at_most(T_LARGE, "t=0.9".into(), large.rhs, large.lhs, 0.0),
        Check::equal(
            T_COEFF_LHS,
            "extrapolated".into(),
            small.lhs_t6 / -96.0,
            1.0,
            tol,
        ),
        Check::equal(
            T_COEFF_RHS,
            "extrapolated".into(),
            small.rhs_t6 / -88.0,
            1.0,
            tol,
        ),
    ])
}
