//! Command dispatch.

use std::path::PathBuf;

use rayon::prelude::*;
use rkhs_core::kernels::Kernel;
use rkhs_core::metrics::{
    self, curve_length, inner_distance, Curve, GridSearch, KernelMetric, MetricKind,
};
use rkhs_core::npkernels::{
    blaschke_product, blaschke_values, np_test, zero_set_criteria, Classification, CriteriaSpace,
    TailLaw, ZeroSetVerdict,
};
use rkhs_core::subspaces::{delta_sub, monotonicity_report, t_series_check, Part};
use rkhs_core::{Error, Point};
use serde_json::{json, Map, Value};

use crate::error::{CliError, Result};
use crate::formats::{load_json, write_text, zero_set_from_json};
use crate::points::{complex_to_json, load_points, num, opt_num, point_to_json};
use crate::render::{csv_float, render_json, Table};
use crate::spec::{kernel_from_spec, parse_subspace};
use crate::suites::{run_suite, Suite, SuiteConfig};

pub const THREADS_ENV: &str = "RKHS_GEOMETRY_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verb {
    DistTable,
    IdentityCheck,
    Geodesic,
    Zeroset,
    Subspace,
    NpTest,
    SeriesCheck,
}

impl Verb {
    pub fn name(&self) -> &'static str {
        match self {
            Verb::DistTable => "dist-table",
            Verb::IdentityCheck => "identity-check",
            Verb::Geodesic => "geodesic",
            Verb::Zeroset => "zeroset",
            Verb::Subspace => "subspace",
            Verb::NpTest => "np-test",
            Verb::SeriesCheck => "series-check",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Command {
    pub verb: Verb,
    pub kernel: Option<String>,
    pub metric: Option<String>,
    /// Inline JSON or a path.
    pub points: Option<String>,
    pub subspace: Option<String>,
    /// Zero-set description, inline JSON or a path.
    pub zeros: Option<String>,
    pub suite: Option<String>,
    pub seed: u64,
    pub samples: Option<usize>,
    pub tol: Option<f64>,
    pub format: Format,
    pub output: Option<PathBuf>,
    /// Directory that relative file references resolve against.
    pub base_dir: PathBuf,
    /// Worker count; `None` reads the environment.
    pub threads: Option<usize>,
}

impl Command {
    pub fn new(verb: Verb) -> Self {
        Command {
            verb,
            kernel: None,
            metric: None,
            points: None,
            subspace: None,
            zeros: None,
            suite: None,
            seed: 0,
            samples: None,
            tol: None,
            format: Format::Json,
            output: None,
            base_dir: PathBuf::from("."),
            threads: None,
        }
    }

    fn kernel_spec(&self) -> Result<&str> {
        self.kernel
            .as_deref()
            .ok_or_else(|| CliError::Usage(format!("{} needs --kernel", self.verb.name())))
    }

    fn kernel(&self) -> Result<Kernel> {
        kernel_from_spec(self.kernel_spec()?, &self.base_dir)
    }

    fn points(&self) -> Result<Vec<Point>> {
        let source = self
            .points
            .as_deref()
            .ok_or_else(|| CliError::Usage(format!("{} needs --points", self.verb.name())))?;
        load_points(source, &self.base_dir)
    }
}

/// The rendered artifact and how many mathematical checks failed.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub results: Vec<Value>,
    pub table: Table,
    pub failures: usize,
    pub rendered: String,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.failures == 0 {
            0
        } else {
            1
        }
    }
}

fn thread_count(cmd: &Command) -> Result<Option<usize>> {
    if let Some(n) = cmd.threads {
        return Ok(Some(n));
    }
    match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|n| *n > 0)
            .map(Some)
            .ok_or_else(|| {
                CliError::Usage(format!(
                    "{THREADS_ENV} must be a positive integer, got '{v}'"
                ))
            }),
        Err(_) => Ok(None),
    }
}

/// Runs the command, renders its report and writes it to `cmd.output` if set.
pub fn execute(cmd: &Command) -> Result<Outcome> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_count(cmd)? {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))?;
    let (results, table, failures) = pool.install(|| dispatch(cmd))?;
    let rendered = match cmd.format {
        Format::Json => render_json(&results),
        Format::Csv => table.render_csv(),
    };
    if let Some(path) = &cmd.output {
        write_text(path, &rendered)?;
    }
    Ok(Outcome {
        results,
        table,
        failures,
        rendered,
    })
}

type Dispatched = (Vec<Value>, Table, usize);

fn dispatch(cmd: &Command) -> Result<Dispatched> {
    match cmd.verb {
        Verb::DistTable => dist_table(cmd),
        Verb::IdentityCheck => identity_check(cmd),
        Verb::Geodesic => geodesic(cmd),
        Verb::Zeroset => zeroset(cmd),
        Verb::Subspace => subspace(cmd),
        Verb::NpTest => np(cmd),
        Verb::SeriesCheck => series(cmd),
    }
}

pub const METRIC_NAMES: [&str; 7] = [
    "delta",
    "delta_hat",
    "delta_check",
    "rho_disk",
    "beta_disk",
    "rho_ball",
    "bs_geodesic",
];

fn metric_kind(name: &str, points: &[Point]) -> Result<MetricKind> {
    Ok(match name {
        "delta" => MetricKind::Delta,
        "delta_hat" => MetricKind::DeltaHat,
        "delta_check" => MetricKind::DeltaCheck,
        "rho_disk" => MetricKind::RhoDisk,
        "beta_disk" => MetricKind::BetaDisk,
        "rho_ball" => MetricKind::RhoBall(points.first().map_or(1, Point::dim)),
        "bs_geodesic" => MetricKind::BsGeodesic,
        _ => {
            return Err(CliError::Usage(format!(
                "unknown metric '{name}' (expected one of {})",
                METRIC_NAMES.join(", ")
            )))
        }
    })
}

fn undefined_as_none(r: rkhs_core::Result<f64>) -> Result<Option<f64>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::UndefinedDistance | Error::UndefinedPairing) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

fn points_json(points: &[Point]) -> Value {
    Value::Array(points.iter().map(point_to_json).collect())
}

fn dist_table(cmd: &Command) -> Result<Dispatched> {
    let kernel = cmd.kernel()?;
    let points = cmd.points()?;
    let name = cmd.metric.as_deref().unwrap_or("delta");
    let kind = metric_kind(name, &points)?;
    let n = points.len();
    let cells: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let values = cells
        .par_iter()
        .map(|&(i, j)| undefined_as_none(metrics::distance(kind, &kernel, &points[i], &points[j])))
        .collect::<Vec<_>>()
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let mut table = Table::new(&["i", "j", "value"]);
    for (&(i, j), v) in cells.iter().zip(&values) {
        table.push(vec![i.to_string(), j.to_string(), csv_float(*v)]);
    }
    let matrix: Vec<Value> = values
        .chunks(n.max(1))
        .take(n)
        .map(|row| Value::Array(row.iter().map(|v| opt_num(*v)).collect()))
        .collect();
    let result = json!({
        "command": "dist-table",
        "kernel": cmd.kernel_spec()?,
        "metric": name,
        "points": points_json(&points),
        "matrix": matrix,
    });
    Ok((vec![result], table, 0))
}

fn identity_check(cmd: &Command) -> Result<Dispatched> {
    let name = cmd.suite.as_deref().unwrap_or("all");
    let suites = Suite::parse_list(name).ok_or_else(|| {
        let names: Vec<&str> = Suite::ALL.iter().map(Suite::name).collect();
        CliError::Usage(format!(
            "unknown suite '{name}' (expected all or a comma-separated list of {})",
            names.join(", ")
        ))
    })?;
    let config = SuiteConfig {
        seed: cmd.seed,
        samples: cmd.samples,
        tolerance: cmd.tol,
    };
    let mut results = Vec::new();
    let mut table = Table::new(&[
        "suite",
        "checks",
        "failures",
        "max_error",
        "tolerance",
        "passed",
    ]);
    let mut failures = 0;
    for suite in suites {
        let report = run_suite(suite, &config)?;
        let failed = report.failures().count();
        failures += failed;
        table.push(vec![
            suite.name().into(),
            report.checks.len().to_string(),
            failed.to_string(),
            csv_float(report.max_error()),
            csv_float(Some(report.tolerance)),
            report.passed().to_string(),
        ]);
        results.push(report.to_json());
    }
    Ok((results, table, failures))
}

fn two_points(cmd: &Command) -> Result<(Point, Point)> {
    let pts = cmd.points()?;
    match <[Point; 2]>::try_from(pts) {
        Ok([x, y]) => Ok((x, y)),
        Err(v) => Err(CliError::Usage(format!(
            "{} needs exactly two points, got {}",
            cmd.verb.name(),
            v.len()
        ))),
    }
}

fn geodesic(cmd: &Command) -> Result<Dispatched> {
    let kernel = cmd.kernel()?;
    let (x, y) = two_points(cmd)?;
    let name = cmd.metric.as_deref().unwrap_or("delta");
    let kind = metric_kind(name, std::slice::from_ref(&x))?;
    let metric = KernelMetric::new(kind, &kernel);
    let domain = kernel.domain();
    if !domain.is_scalar() {
        return Err(CliError::Usage(
            "geodesic searches need a disk or plane kernel".into(),
        ));
    }
    let inner = inner_distance(&metric, &domain, &x, &y, &GridSearch::default())?;
    let (a, b) = (x.coords()[0], y.coords()[0]);
    let segment = curve_length(&metric, &Curve::segment(a, b))?;
    let mut table = Table::new(&["k", "re", "im"]);
    for (k, z) in inner.path.iter().enumerate() {
        table.push(vec![
            k.to_string(),
            csv_float(Some(z.re)),
            csv_float(Some(z.im)),
        ]);
    }
    let result = json!({
        "command": "geodesic",
        "kernel": cmd.kernel_spec()?,
        "metric": name,
        "from": point_to_json(&x),
        "to": point_to_json(&y),
        "direct": num(inner.direct),
        "inner_distance": num(inner.value),
        "graph_length": num(inner.graph_length),
        "segment_length": num(segment.value),
        "segment_converged": segment.converged,
        "path": Value::Array(inner.path.iter().map(|z| complex_to_json(*z)).collect()),
    });
    Ok((vec![result], table, 0))
}

fn tail_law_json(law: TailLaw) -> Value {
    match law {
        TailLaw::Finite => json!({"kind": "finite"}),
        TailLaw::Geometric { ratio } => json!({"kind": "geometric", "ratio": num(ratio)}),
        TailLaw::Power { exponent } => json!({"kind": "power", "exponent": num(exponent)}),
    }
}

/// How many prefix zeros the vanishing check evaluates at.
const ZERO_CHECKS: usize = 32;

fn zeroset(cmd: &Command) -> Result<Dispatched> {
    let kernel = cmd.kernel()?;
    let source = cmd
        .zeros
        .as_deref()
        .ok_or_else(|| CliError::Usage("zeroset needs --zeros".into()))?;
    let trimmed = source.trim_start();
    let (value, origin) = if trimmed.starts_with('{') {
        let v = serde_json::from_str(trimmed).map_err(|source| CliError::Json {
            origin: "--zeros".into(),
            source,
        })?;
        (v, "--zeros".to_string())
    } else {
        let path = cmd.base_dir.join(source);
        (load_json(&path)?, path.display().to_string())
    };
    let input = zero_set_from_json(&value, &origin)?;
    let basepoint = match &cmd.points {
        Some(_) => {
            let pts = cmd.points()?;
            match <[Point; 1]>::try_from(pts) {
                Ok([p]) => p,
                Err(_) => {
                    return Err(CliError::Usage(
                        "zeroset takes a single basepoint in --points".into(),
                    ))
                }
            }
        }
        None => Point::real(0.0),
    };
    let report = blaschke_product(&kernel, &input.generator, &basepoint, input.prefix)?;
    let queries: Vec<Point> = input
        .generator
        .points(input.prefix.min(ZERO_CHECKS))?
        .into_iter()
        .filter(|p| p.is_representable())
        .map(|p| Point::scalar(p.z))
        .collect();
    let (values, factors) = blaschke_values(
        &kernel,
        &input.generator,
        &basepoint,
        input.prefix.min(ZERO_CHECKS),
        &queries,
    )?;
    let max_at_zeros = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let tol = cmd.tol.unwrap_or(1e-12);
    let failures = usize::from(max_at_zeros > tol);
    let mut result = Map::new();
    result.insert("command".into(), json!("zeroset"));
    result.insert("kernel".into(), json!(cmd.kernel_spec()?));
    result.insert("alpha".into(), num(report.alpha));
    result.insert("basepoint".into(), point_to_json(&basepoint));
    result.insert("tail_law".into(), tail_law_json(report.tail_law));
    result.insert("prefix".into(), json!(report.prefix));
    result.insert(
        "partial_products".into(),
        Value::Array(
            report
                .partial_products
                .iter()
                .map(|(n, p)| json!([n, num(*p)]))
                .collect(),
        ),
    );
    result.insert("criterion_sum".into(), num(report.criterion_sum));
    let class = match report.classification {
        Classification::Converges => "converges",
        Classification::DivergesToZero => "diverges-to-zero",
    };
    result.insert("classification".into(), json!(class));
    result.insert("vanishing_check_factors".into(), json!(factors));
    result.insert("max_abs_at_zeros".into(), num(max_at_zeros));
    let space = match report.alpha {
        1.0 => Some(CriteriaSpace::Hardy),
        0.0 => Some(CriteriaSpace::Dirichlet),
        _ => None,
    };
    if let Some(space) = space {
        let c = zero_set_criteria(space, &input.generator, input.prefix)?;
        let verdict = match c.verdict {
            ZeroSetVerdict::ZeroSet => "zero-set",
            ZeroSetVerdict::NotZeroSet => "not-zero-set",
            ZeroSetVerdict::Inconclusive => "inconclusive",
        };
        result.insert(
            "criteria".into(),
            json!({
                "space": if space == CriteriaSpace::Hardy { "hardy" } else { "dirichlet" },
                "blaschke_sum": num(c.blaschke_sum),
                "blaschke_converges": c.blaschke_converges,
                "shapiro_shields_sum": num(c.shapiro_shields_sum),
                "shapiro_shields_converges": c.shapiro_shields_converges,
                "verdict": verdict,
            }),
        );
    }
    let mut table = Table::new(&["n", "partial_product"]);
    for (n, p) in &report.partial_products {
        table.push(vec![n.to_string(), csv_float(Some(*p))]);
    }
    if max_at_zeros > tol {
        result.insert(
            "findings".into(),
            json!([{"identity": "B(x_j) = 0 at every zero x_j", "error": num(max_at_zeros), "tolerance": num(tol)}]),
        );
    } else {
        result.insert("findings".into(), json!([]));
    }
    Ok((vec![Value::Object(result)], table, failures))
}

/// `(δ_J, δ_H, δ_J⊥, pick ordering, bergman ordering)`
type SubspaceRow = (Option<f64>, f64, Option<f64>, Option<bool>, Option<bool>);

fn subspace(cmd: &Command) -> Result<Dispatched> {
    let kernel = cmd.kernel()?;
    let text = cmd
        .subspace
        .as_deref()
        .ok_or_else(|| CliError::Usage("subspace needs --subspace".into()))?;
    let sub = parse_subspace(text)?.build(kernel)?;
    let points = cmd.points()?;
    let pairs: Vec<(Point, Point)> = (0..points.len())
        .flat_map(|i| (i + 1..points.len()).map(move |j| (i, j)))
        .map(|(i, j)| (points[i].clone(), points[j].clone()))
        .collect();
    let report = match monotonicity_report(&sub, &pairs) {
        Ok(r) => Some(r),
        Err(Error::Unsupported(_)) => None,
        Err(e) => return Err(e.into()),
    };
    let rows: Vec<SubspaceRow> = match &report {
        Some(r) => r
            .rows
            .iter()
            .map(|row| {
                (
                    row.delta_j,
                    row.delta_h,
                    row.delta_jperp,
                    row.pick_ordering,
                    row.bergman_ordering,
                )
            })
            .collect(),
        None => pairs
            .par_iter()
            .map(|(x, y)| {
                Ok((
                    undefined_as_none(delta_sub(&sub, Part::J, x, y))?,
                    metrics::delta(sub.parent(), x, y)?,
                    undefined_as_none(delta_sub(&sub, Part::JPerp, x, y))?,
                    None,
                    None,
                ))
            })
            .collect::<Vec<Result<_>>>()
            .into_iter()
            .collect::<Result<Vec<_>>>()?,
    };
    let mut table = Table::new(&["x", "y", "delta_j", "delta_h", "delta_jperp"]);
    let mut out = Vec::new();
    let mut findings = Vec::new();
    for ((x, y), (dj, dh, dp, pick, bergman)) in pairs.iter().zip(&rows) {
        table.push(vec![
            point_to_json(x).to_string(),
            point_to_json(y).to_string(),
            csv_float(*dj),
            csv_float(Some(*dh)),
            csv_float(*dp),
        ]);
        if *pick == Some(false) {
            findings.push(json!({"identity": "δ_J ≥ δ_H ≥ δ_J⊥ for complete Pick kernels", "x": point_to_json(x), "y": point_to_json(y)}));
        }
        if *bergman == Some(false) {
            findings.push(json!({"identity": "δ_J ≤ δ_H for vanishing subspaces of DHB(α), 1 ≤ α ≤ 2", "x": point_to_json(x), "y": point_to_json(y)}));
        }
        out.push(json!({
            "x": point_to_json(x),
            "y": point_to_json(y),
            "delta_j": opt_num(*dj),
            "delta_h": num(*dh),
            "delta_jperp": opt_num(*dp),
            "pick_ordering": pick,
            "bergman_ordering": bergman,
        }));
    }
    let failures = findings.len();
    let result = json!({
        "command": "subspace",
        "kernel": cmd.kernel_spec()?,
        "subspace": text,
        "jittered": sub.is_jittered(),
        "rows": out,
        "findings": findings,
    });
    Ok((vec![result], table, failures))
}

fn np(cmd: &Command) -> Result<Dispatched> {
    let kernel = cmd.kernel()?;
    let points = cmd.points()?;
    let v = np_test(&kernel, &points)?;
    let witness = v.witness.as_ref().map_or(Value::Null, |w| {
        Value::Array(w.iter().map(|z| complex_to_json(*z)).collect())
    });
    let mut table = Table::new(&["is_psd", "min_eigenvalue", "trace"]);
    table.push(vec![
        v.is_psd.to_string(),
        csv_float(Some(v.min_eigenvalue)),
        csv_float(Some(v.trace)),
    ]);
    let result = json!({
        "command": "np-test",
        "kernel": cmd.kernel_spec()?,
        "complete_pick_family": kernel.is_complete_np(),
        "points": points_json(&points),
        "is_psd": v.is_psd,
        "min_eigenvalue": num(v.min_eigenvalue),
        "trace": num(v.trace),
        "witness": witness,
    });
    Ok((vec![result], table, 0))
}

const SERIES_DEFAULT_T: [f64; 3] = [0.1, 0.5, 0.9];

fn series(cmd: &Command) -> Result<Dispatched> {
    let ts: Vec<f64> = match &cmd.points {
        Some(_) => cmd
            .points()?
            .iter()
            .map(|p| match p.as_scalar() {
                Some(z) if z.im == 0.0 => Ok(z.re),
                _ => Err(CliError::Usage(
                    "series-check takes real t values in --points".into(),
                )),
            })
            .collect::<Result<_>>()?,
        None => SERIES_DEFAULT_T.to_vec(),
    };
    let tol = cmd.tol.unwrap_or(0.02);
    let mut table = Table::new(&["t", "lhs", "rhs", "difference"]);
    let mut rows = Vec::new();
    let mut coefficients = None;
    for t in ts {
        let s = t_series_check(t)?;
        table.push(vec![
            csv_float(Some(t)),
            csv_float(Some(s.lhs)),
            csv_float(Some(s.rhs)),
            csv_float(Some(s.difference)),
        ]);
        rows.push(json!({"t": num(t), "lhs": num(s.lhs), "rhs": num(s.rhs), "difference": num(s.difference)}));
        coefficients = Some((s.lhs_t6, s.rhs_t6));
    }
    let (lhs_t6, rhs_t6) = match coefficients {
        Some(c) => c,
        None => {
            let s = t_series_check(0.5)?;
            (s.lhs_t6, s.rhs_t6)
        }
    };
    let mut findings = Vec::new();
    for (name, value, expected) in [("lhs", lhs_t6, -96.0), ("rhs", rhs_t6, -88.0)] {
        let err = (value / expected - 1.0).abs();
        if err > tol {
            findings.push(json!({"identity": format!("the t⁶ coefficient of the {name} is {expected}"), "error": num(err), "tolerance": num(tol)}));
        }
    }
    let failures = findings.len();
    let result = json!({
        "command": "series-check",
        "rows": rows,
        "lhs_t6": num(lhs_t6),
        "rhs_t6": num(rhs_t6),
        "findings": findings,
    });
    Ok((vec![result], table, failures))
}
