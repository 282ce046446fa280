use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rkhs_geometry::{execute, Command, Format, Verb};

/// Distance tables, identity checks and subspace comparisons for kernel-induced metrics.
#[derive(Debug, Parser)]
#[command(name = "rkhs-geometry", version)]
struct Cli {
    #[command(subcommand)]
    verb: VerbArgs,
}

#[derive(Debug, Subcommand)]
enum VerbArgs {
    /// Pairwise distance matrix between points.
    DistTable(Common),
    /// Run seeded identity suites.
    IdentityCheck(Common),
    /// Approximate inner distance and path between two points.
    Geodesic(Common),
    /// Blaschke-type products and zero-set criteria.
    Zeroset(Common),
    /// Compare δ_J, δ_H and δ_J⊥ for an invariant subspace.
    Subspace(Common),
    /// Positivity test of the matrix [1 - 1/K(x_i, x_j)].
    NpTest(Common),
    /// Compare the two sides of the t-series inequality.
    SeriesCheck(Common),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct Common {
    /// Kernel specification, e.g. `dhb:alpha=1` or `product(dhb:alpha=1,fock:beta=2)`.
    #[arg(long)]
    kernel: Option<String>,
    /// delta, delta_hat, delta_check, rho_disk, beta_disk, rho_ball or bs_geodesic.
    #[arg(long)]
    metric: Option<String>,
    /// Inline JSON point list or a path to one.
    #[arg(long)]
    points: Option<String>,
    /// Subspace specification, e.g. `vanish:points=[0]` or `hardy-inner:zeros=[0.5]`.
    #[arg(long)]
    subspace: Option<String>,
    /// Zero-set description, inline JSON or a path.
    #[arg(long)]
    zeros: Option<String>,
    /// Suite name, a comma-separated list of names, or `all`.
    #[arg(long)]
    suite: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    samples: Option<usize>,
    /// Overrides the suite or command tolerance.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

fn command(cli: Cli) -> Command {
    let (verb, a) = match cli.verb {
        VerbArgs::DistTable(a) => (Verb::DistTable, a),
        VerbArgs::IdentityCheck(a) => (Verb::IdentityCheck, a),
        VerbArgs::Geodesic(a) => (Verb::Geodesic, a),
        VerbArgs::Zeroset(a) => (Verb::Zeroset, a),
        VerbArgs::Subspace(a) => (Verb::Subspace, a),
        VerbArgs::NpTest(a) => (Verb::NpTest, a),
        VerbArgs::SeriesCheck(a) => (Verb::SeriesCheck, a),
    };
    let mut cmd = Command::new(verb);
    cmd.kernel = a.kernel;
    cmd.metric = a.metric;
    cmd.points = a.points;
    cmd.subspace = a.subspace;
    cmd.zeros = a.zeros;
    cmd.suite = a.suite;
    cmd.seed = a.seed;
    cmd.samples = a.samples;
    cmd.tol = a.tol;
    cmd.format = match a.format {
        FormatArg::Json => Format::Json,
        FormatArg::Csv => Format::Csv,
    };
    cmd.output = a.output;
    cmd
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let cmd = command(cli);
    match execute(&cmd) {
        Ok(outcome) => {
            if cmd.output.is_none() {
                let mut out = std::io::stdout().lock();
                if out.write_all(outcome.rendered.as_bytes()).is_err() {
                    return ExitCode::from(2);
                }
            }
            if outcome.failures > 0 {
                eprintln!("{} check(s) failed", outcome.failures);
            }
            ExitCode::from(outcome.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
