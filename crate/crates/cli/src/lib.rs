//! Command-line front end: argument model, dispatch and exit codes.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use fracseries::io::{
    fmt_g17, parse_problem, parse_series, series_to_json, solution_to_json, to_json_string, SeriesRecord,
};
use fracseries::wiman_valiron::write_wv_csv;
use fracseries::{
    bell_recursive, caputo_iterate, geometric_grid, mittag_leffler, predict_order, solve_cauchy,
    verify_sharp_order_with, wv_identity_points, wv_samples, CoefficientSequence, EntireCoeffs, Error,
    ExtReal, GrowthReport, MittagLefflerSeries, OrderFitConfig, SharpOrderConfig, Verdict, WVSample,
};

/// Exit status for success.
pub const EXIT_OK: i32 = 0;
/// Domain, argument, parse or I/O failure.
pub const EXIT_ERROR: i32 = 1;
/// A verification ran and failed.
pub const EXIT_VERIFICATION: i32 = 2;

/// One invocation of the tool.
#[derive(Debug, Clone, Parser)]
#[command(name = "fracseries", version, about = "Fractional power series toolkit")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Input file (problem or series, depending on the command).
    #[arg(short, long, global = true)]
    pub input: Option<PathBuf>,

    /// Output file for the main result; stdout if omitted.
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Solve a Cauchy problem file and write the solution series.
    Solve {
        /// Override the truncation order N from the file.
        #[arg(long)]
        order: Option<usize>,
    },
    /// Apply the Caputo-Djrbashian derivative j times to a series file.
    Deriv {
        #[arg(long, default_value_t = 1)]
        j: usize,
        /// Expected alpha; required when the file has none.
        #[arg(long, allow_negative_numbers = true)]
        alpha: Option<f64>,
    },
    /// Evaluate the Mittag-Leffler function E_alpha(z).
    Ml {
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long, allow_negative_numbers = true)]
        z: f64,
        #[arg(long, default_value_t = 1e-15)]
        tol: f64,
    },
    /// Evaluate the incomplete Bell polynomial B_{n,k}(z_1, ..., z_{n-k+1}).
    Bell {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Arguments z_1, z_2, ...
        #[arg(last = true, allow_negative_numbers = true)]
        z: Vec<f64>,
    },
    /// Predict the growth order from coefficient degrees.
    ///
    /// Degrees are in z = t^alpha. Use `none` for a vanishing coefficient.
    Order {
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long)]
        n: usize,
        /// Comma-separated degrees d_0, ..., d_{n-1}.
        #[arg(long, value_delimiter = ',', value_parser = parse_degree)]
        degrees: Vec<Option<u64>>,
    },
    /// Solve a problem with polynomial coefficients and compare the fitted
    /// order with the prediction.
    Verify {
        #[arg(long)]
        order: Option<usize>,
        #[command(flatten)]
        grid: GridArgs,
        /// Relative tolerance on the order.
        #[arg(long, default_value_t = 0.15)]
        tolerance: f64,
        /// Minimum decades spanned by the resolved part of the grid.
        #[arg(long, default_value_t = 4.0)]
        min_decades: f64,
        /// Write the per-radius CSV here.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Tabulate the Wiman-Valiron identity error for j = 1, 2 as CSV.
    ///
    /// Without --input the closed-form E_alpha(lambda z) is used.
    Wv {
        /// Operator order alpha (defaults to the series alpha).
        #[arg(long, allow_negative_numbers = true)]
        alpha: Option<f64>,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        lambda: f64,
        #[command(flatten)]
        grid: GridArgs,
    },
}

#[derive(Debug, Clone, Copy, Args)]
pub struct GridArgs {
    #[arg(long, default_value_t = 10.0)]
    pub r_min: f64,
    #[arg(long, default_value_t = 1e5)]
    pub r_max: f64,
    #[arg(long, default_value_t = 40)]
    pub points: usize,
}

fn parse_degree(s: &str) -> Result<Option<u64>, String> {
    match s.trim() {
        "none" | "-" => Ok(None),
        t => t.parse().map(Some).map_err(|e| format!("bad degree `{t}`: {e}")),
    }
}

/// Failure of a run, with the exit status it maps to.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Library(#[from] Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Library(Error::Verification(_)) => EXIT_VERIFICATION,
            _ => EXIT_ERROR,
        }
    }
}

/// Result of a successful dispatch.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    /// Main artifact; goes to `--output` or stdout.
    pub primary: String,
    /// Human-readable summary for the terminal, if any.
    pub summary: Option<String>,
    pub exit_code: i32,
}

impl Outcome {
    fn ok(primary: String) -> Self {
        Outcome {
            primary,
            summary: None,
            exit_code: EXIT_OK,
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn require_input<'a>(cfg: &'a RunConfig, what: &str) -> Result<&'a Path, CliError> {
    cfg.input
        .as_deref()
        .ok_or_else(|| CliError::Usage(format!("--input <{what} file> is required")))
}

fn fmt_ext(x: ExtReal) -> String {
    if x.is_zero() || x.logmag().abs() < 700.0 {
        fmt_g17(x.to_f64())
    } else {
        let s = if x.sign() < 0 { "-" } else { "" };
        format!("{s}exp({})", fmt_g17(x.logmag()))
    }
}

/// Runs one command. Writes side files (CSV) itself; the primary artifact
/// is returned for the caller to place.
pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    match &cfg.command {
        Command::Solve { order } => {
            let (prob, n) = parse_problem(&read(require_input(cfg, "problem")?)?)?;
            let n = order.unwrap_or(n);
            let sol = solve_cauchy(&prob, n)?;
            if !sol.cancelled.is_empty() {
                log::warn!("{} coefficients cancelled to zero", sol.cancelled.len());
            }
            Ok(Outcome::ok(solution_to_json(&sol)))
        }
        Command::Deriv { j, alpha } => {
            let text = read(require_input(cfg, "series")?)?;
            let rec: SeriesRecord =
                serde_json::from_str(&text).map_err(|e| Error::Parse(format!("series: {e}")))?;
            let (u, _) = rec.to_series(*alpha, "series")?;
            let it = caputo_iterate(&u, *j)?;
            if it.exhausted {
                log::warn!("j = {j} exceeds the truncation order {}; result is zero", u.order());
            }
            Ok(Outcome::ok(series_to_json(&it.series, false)))
        }
        Command::Ml { alpha, z, tol } => Ok(Outcome::ok(format!("{}\n", fmt_ext(mittag_leffler(*alpha, *z, *tol)?)))),
        Command::Bell { n, k, z } => Ok(Outcome::ok(format!("{}\n", fmt_g17(bell_recursive(*n, *k, z)?)))),
        Command::Order { alpha, n, degrees } => Ok(Outcome::ok(to_json_string(&predict_order(*alpha, *n, degrees)?))),
        Command::Verify {
            order,
            grid,
            tolerance,
            min_decades,
            csv,
        } => {
            let (prob, n) = parse_problem(&read(require_input(cfg, "problem")?)?)?;
            let r_grid = geometric_grid(grid.r_min, grid.r_max, grid.points)?;
            let sharp = SharpOrderConfig {
                tolerance: *tolerance,
                fit: OrderFitConfig {
                    min_decades: *min_decades,
                    ..OrderFitConfig::default()
                },
                ..SharpOrderConfig::standard()
            };
            let n = order.unwrap_or(n);
            let report = verify_sharp_order_with(&prob, n, &r_grid, &sharp)?;
            if let Some(path) = csv {
                let sol = solve_cauchy(&prob, n)?;
                let f = EntireCoeffs::from(&sol.series);
                write(path, &identity_csv(&f, prob.alpha(), &report.samples)?)?;
            }
            Ok(Outcome {
                primary: to_json_string(&report),
                summary: Some(summary_table(&report)),
                exit_code: match report.verdict {
                    Verdict::Pass => EXIT_OK,
                    Verdict::Fail => EXIT_VERIFICATION,
                },
            })
        }
        Command::Wv { alpha, lambda, grid } => {
            let r_grid = geometric_grid(grid.r_min, grid.r_max, grid.points)?;
            let csv = match &cfg.input {
                Some(path) => {
                    let (u, _) = parse_series(&read(path)?)?;
                    let f = EntireCoeffs::from(&u);
                    let samples = wv_samples(&f, &r_grid)?;
                    identity_csv(&f, alpha.unwrap_or(u.alpha()), &samples)?
                }
                None => {
                    let a = alpha.ok_or_else(|| CliError::Usage("--alpha is required without --input".into()))?;
                    let f = MittagLefflerSeries::new(a, *lambda)?;
                    let samples = wv_samples(&f, &r_grid)?;
                    identity_csv(&f, a, &samples)?
                }
            };
            Ok(Outcome::ok(csv))
        }
    }
}

/// CSV rows for `samples`; identity errors are `nan` when `f` has a
/// negative coefficient.
fn identity_csv<S: CoefficientSequence>(f: &S, alpha: f64, samples: &[WVSample]) -> Result<String, CliError> {
    let rows: Vec<(WVSample, f64, f64)> = if f.first_negative().is_some() {
        samples.iter().map(|s| (*s, f64::NAN, f64::NAN)).collect()
    } else {
        let grid: Vec<f64> = samples.iter().map(|s| s.r).collect();
        wv_identity_points(f, alpha, &[1, 2], &grid)?
            .into_iter()
            .map(|p| (p.sample, p.rel_err[0], p.rel_err[1]))
            .collect()
    };
    let mut buf = Vec::new();
    write_wv_csv(&mut buf, &rows).expect("in-memory write");
    Ok(String::from_utf8(buf).expect("CSV is ASCII"))
}

fn summary_table(rep: &GrowthReport) -> String {
    let predicted = rep.prediction.sigma_exact.unwrap_or(rep.prediction.sigma_upper);
    let kind = if rep.prediction.sigma_exact.is_some() { "exact" } else { "upper" };
    let verdict = match rep.verdict {
        Verdict::Pass => "PASS",
        Verdict::Fail => "FAIL",
    };
    let rows = [
        ("terms N", rep.terms.to_string()),
        (&format!("predicted ({kind})")[..], fmt_g17(predicted)),
        ("fitted", fmt_g17(rep.empirical)),
        ("gap", fmt_g17(rep.abs_gap)),
        ("tolerance", fmt_g17(rep.tolerance)),
        ("verdict", verdict.to_string()),
    ]
    .map(|(k, v)| (k.to_string(), v));
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    rows.iter().map(|(k, v)| format!("{k:<width$}  {v}\n")).collect()
}

/// Reads `FRACSERIES_THREADS` (0 or unset: rayon's default).
pub fn thread_count() -> Result<usize, CliError> {
    match std::env::var("FRACSERIES_THREADS") {
        Err(_) => Ok(0),
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("FRACSERIES_THREADS = `{v}` is not a nonnegative integer"))),
    }
}

/// Places the outcome: primary to `--output` or stdout, summary to stdout
/// when the primary went to a file and to stderr otherwise.
pub fn emit(cfg: &RunConfig, outcome: &Outcome) -> Result<(), CliError> {
    match &cfg.output {
        Some(path) => {
            write(path, &outcome.primary)?;
            if let Some(s) = &outcome.summary {
                print!("{s}");
            }
        }
        None => {
            print!("{}", outcome.primary);
            if let Some(s) = &outcome.summary {
                eprint!("{s}");
            }
        }
    }
    Ok(())
}
