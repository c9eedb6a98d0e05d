use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rklab::harness::{ResolventMode, SCENARIO_NAMES};
use rklab::operators::{OperatorParams, OPERATOR_NAMES};
use rklab::Polynomial;

use crate::{EXIT_OK, EXIT_USAGE};

/// Largest operator size accepted unless `RKLAB_MAX_N` says otherwise.
pub const DEFAULT_MAX_N: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub path: Option<PathBuf>,
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorSpec {
    pub name: String,
    pub params: OperatorParams,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Job {
    Region {
        method: Polynomial,
        bbox: [f64; 4],
        nx: usize,
        ny: usize,
    },
    Numrange {
        op: OperatorSpec,
        angles: usize,
    },
    Cfl {
        method: Polynomial,
        op: OperatorSpec,
        dt: f64,
        angles: usize,
        tol: f64,
    },
    Powers {
        method: Polynomial,
        op: OperatorSpec,
        /// Absent only for `jordan`, whose matrix is then the step matrix itself.
        dt: Option<f64>,
        n_max: usize,
        threshold: f64,
    },
    Resolvent {
        method: Polynomial,
        op: OperatorSpec,
        dt: Option<f64>,
        mode: ResolventMode,
        samples: usize,
    },
    Crouzeix {
        method: Polynomial,
        op: OperatorSpec,
        dt: f64,
        angles: usize,
    },
    CrouzeixSweep {
        overrides: BTreeMap<String, f64>,
    },
    Scenario {
        name: String,
        overrides: BTreeMap<String, f64>,
    },
    VerifyPaper,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub job: Job,
    pub output: Output,
}

/// A rejected command line. `code` is 0 for `--help` and `--version`.
#[derive(Debug, Clone, PartialEq)]
pub struct UsageError {
    pub code: i32,
    pub message: String,
}

impl UsageError {
    fn flag(flag: &str, msg: impl std::fmt::Display) -> Self {
        Self {
            code: EXIT_USAGE,
            message: format!("error: {flag}: {msg}"),
        }
    }

    /// Prints the message to the right stream and returns the exit code.
    pub fn report(&self) -> i32 {
        if self.code == EXIT_OK {
            print!("{}", self.message);
        } else {
            eprintln!("{}", self.message.trim_end());
        }
        self.code
    }
}

#[derive(Parser)]
#[command(name = "rklab", version, about = "Stability of Runge-Kutta schemes through weighted numerical ranges")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample |P(z)| on a grid.
    Region {
        #[arg(long)]
        method: String,
        /// re_min,re_max,im_min,im_max
        #[arg(long, default_value = "-5,1,-3.5,3.5", allow_hyphen_values = true)]
        bbox: String,
        #[arg(long, default_value_t = 201)]
        nx: usize,
        #[arg(long, default_value_t = 201)]
        ny: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Boundary of the weighted numerical range of an operator.
    Numrange {
        #[command(flatten)]
        op: OpArgs,
        #[arg(long, default_value_t = 720)]
        angles: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Check dt W_H(L) against the stability region.
    Cfl {
        #[arg(long)]
        method: String,
        #[command(flatten)]
        op: OpArgs,
        #[arg(long, value_parser = parse_number)]
        dt: f64,
        #[arg(long, default_value_t = 720)]
        angles: usize,
        #[arg(long, default_value = "1e-12", value_parser = parse_number)]
        tol: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Norms of the powers of P(dt L).
    Powers {
        #[arg(long)]
        method: String,
        #[command(flatten)]
        op: OpArgs,
        #[arg(long, value_parser = parse_number)]
        dt: Option<f64>,
        #[arg(long, default_value_t = 1000)]
        nmax: usize,
        #[arg(long, default_value = "1e6", value_parser = parse_number)]
        threshold: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Sampled resolvent constant of P(dt L).
    Resolvent {
        #[arg(long)]
        method: String,
        #[command(flatten)]
        op: OpArgs,
        #[arg(long, value_parser = parse_number)]
        dt: Option<f64>,
        #[arg(long, value_enum, default_value = "standard")]
        mode: ModeArg,
        #[arg(long, default_value_t = 64)]
        samples: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// ||p(A)|| over max |p| on W_H(A), for one operator or a seeded random sweep.
    Crouzeix {
        /// Polynomial p; required together with --op.
        #[arg(long)]
        method: Option<String>,
        #[arg(long)]
        op: Option<String>,
        #[command(flatten)]
        params: OpParams,
        /// A = dt L.
        #[arg(long, default_value = "1", value_parser = parse_number)]
        dt: f64,
        #[arg(long, default_value_t = 256)]
        angles: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        count: Option<usize>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Run a named experiment.
    Scenario {
        name: String,
        /// Parameter override, repeatable.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Run every experiment and print claimed against measured values.
    VerifyPaper {
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Args)]
struct OpArgs {
    #[arg(long)]
    op: String,
    #[command(flatten)]
    params: OpParams,
}

#[derive(Args)]
struct OpParams {
    #[arg(long = "N", default_value_t = 64)]
    n: usize,
    #[arg(long, default_value = "1", value_parser = parse_number)]
    a: f64,
    #[arg(long, value_parser = parse_number)]
    dx: Option<f64>,
    #[arg(long, value_parser = parse_number)]
    lambda: Option<f64>,
    #[arg(long, value_parser = parse_number, allow_hyphen_values = true)]
    q: Option<f64>,
}

#[derive(Args)]
struct OutArgs {
    #[arg(long)]
    out: Option<PathBuf>,
    /// Defaults to the extension of --out, else json.
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Standard,
    Dissipative,
}

/// Decimal or simple fraction such as `1/6`.
pub(crate) fn parse_number(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let v = match s.split_once('/') {
        Some((a, b)) => {
            let num: f64 = a.trim().parse().map_err(|_| format!("`{s}` is not a number"))?;
            let den: f64 = b.trim().parse().map_err(|_| format!("`{s}` is not a number"))?;
            if den == 0.0 {
                return Err(format!("`{s}` divides by zero"));
            }
            num / den
        }
        None => s.parse().map_err(|_| format!("`{s}` is not a number"))?,
    };
    if !v.is_finite() {
        return Err(format!("`{s}` is not finite"));
    }
    Ok(v)
}

fn parse_method(flag: &str, s: &str) -> Result<Polynomial, UsageError> {
    if s.contains(',') {
        let coeffs = s
            .split(',')
            .map(parse_number)
            .collect::<Result<Vec<f64>, String>>()
            .map_err(|e| UsageError::flag(flag, e))?;
        return Polynomial::new(coeffs, s).map_err(|e| UsageError::flag(flag, e));
    }
    Polynomial::from_label(s).map_err(|e| UsageError::flag(flag, e))
}

fn max_n() -> Result<usize, UsageError> {
    match std::env::var("RKLAB_MAX_N") {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map_err(|_| UsageError::flag("RKLAB_MAX_N", format!("`{v}` is not a positive integer"))),
        Err(_) => Ok(DEFAULT_MAX_N),
    }
}

fn operator(name: &str, p: &OpParams) -> Result<OperatorSpec, UsageError> {
    if !OPERATOR_NAMES.contains(&name) {
        return Err(UsageError::flag(
            "--op",
            format!("unknown operator `{name}`; known operators: {}", OPERATOR_NAMES.join(", ")),
        ));
    }
    let cap = max_n()?;
    if p.n == 0 || p.n > cap {
        return Err(UsageError::flag("--N", format!("must be in 1..={cap} (set RKLAB_MAX_N to raise the cap)")));
    }
    positive("--a", Some(p.a))?;
    positive("--dx", p.dx)?;
    positive("--lambda", p.lambda)?;
    if name == "lw" && p.lambda.is_none() {
        return Err(UsageError::flag("--lambda", "required by the lw operator"));
    }
    Ok(OperatorSpec {
        name: name.to_string(),
        params: OperatorParams {
            n: p.n,
            a: p.a,
            dx: p.dx,
            lambda: p.lambda,
            q: p.q,
        },
    })
}

fn positive(flag: &str, v: Option<f64>) -> Result<(), UsageError> {
    match v {
        Some(x) if !(x > 0.0) => Err(UsageError::flag(flag, "must be positive")),
        _ => Ok(()),
    }
}

fn at_least(flag: &str, v: usize, min: usize) -> Result<(), UsageError> {
    if v < min {
        return Err(UsageError::flag(flag, format!("must be at least {min}")));
    }
    Ok(())
}

fn output(o: OutArgs) -> Output {
    let inferred = o
        .out
        .as_ref()
        .and_then(|p| p.extension())
        .filter(|e| e.eq_ignore_ascii_case("csv"))
        .map(|_| Format::Csv);
    Output {
        format: o.format.or(inferred).unwrap_or(Format::Json),
        path: o.out,
    }
}

fn json_only(out: &Output) -> Result<(), UsageError> {
    if out.format == Format::Csv {
        return Err(UsageError::flag("--format", "this command only writes json"));
    }
    Ok(())
}

fn overrides(items: &[String]) -> Result<BTreeMap<String, f64>, UsageError> {
    let cap = max_n()?;
    let mut map = BTreeMap::new();
    for item in items {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| UsageError::flag("--set", format!("`{item}` is not KEY=VALUE")))?;
        let v = parse_number(v).map_err(|e| UsageError::flag("--set", e))?;
        if k == "N" && v > cap as f64 {
            return Err(UsageError::flag("--set", format!("N must be at most {cap} (RKLAB_MAX_N)")));
        }
        map.insert(k.trim().to_string(), v);
    }
    Ok(map)
}

/// Parses and validates a full command line (including the program name).
pub fn parse_args<I, T>(argv: I) -> Result<RunConfig, UsageError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| UsageError {
        code: if e.use_stderr() { EXIT_USAGE } else { EXIT_OK },
        message: e.render().to_string(),
    })?;
    let (job, out) = match cli.command {
        Command::Region { method, bbox, nx, ny, out } => {
            let parts = bbox
                .split(',')
                .map(parse_number)
                .collect::<Result<Vec<f64>, String>>()
                .map_err(|e| UsageError::flag("--bbox", e))?;
            let bbox: [f64; 4] = parts
                .try_into()
                .map_err(|_| UsageError::flag("--bbox", "expected re_min,re_max,im_min,im_max"))?;
            if !(bbox[0] < bbox[1] && bbox[2] < bbox[3]) {
                return Err(UsageError::flag("--bbox", "needs re_min < re_max and im_min < im_max"));
            }
            at_least("--nx", nx, 2)?;
            at_least("--ny", ny, 2)?;
            (
                Job::Region {
                    method: parse_method("--method", &method)?,
                    bbox,
                    nx,
                    ny,
                },
                output(out),
            )
        }
        Command::Numrange { op, angles, out } => {
            at_least("--angles", angles, 8)?;
            (
                Job::Numrange {
                    op: operator(&op.op, &op.params)?,
                    angles,
                },
                output(out),
            )
        }
        Command::Cfl { method, op, dt, angles, tol, out } => {
            positive("--dt", Some(dt))?;
            at_least("--angles", angles, 64)?;
            if tol < 0.0 {
                return Err(UsageError::flag("--tol", "must be nonnegative"));
            }
            let out = output(out);
            json_only(&out)?;
            (
                Job::Cfl {
                    method: parse_method("--method", &method)?,
                    op: operator(&op.op, &op.params)?,
                    dt,
                    angles,
                    tol,
                },
                out,
            )
        }
        Command::Powers { method, op, dt, nmax, threshold, out } => {
            positive("--dt", dt)?;
            positive("--threshold", Some(threshold))?;
            at_least("--nmax", nmax, 1)?;
            if dt.is_none() && op.op != "jordan" {
                return Err(UsageError::flag("--dt", "required unless --op is jordan"));
            }
            (
                Job::Powers {
                    method: parse_method("--method", &method)?,
                    op: operator(&op.op, &op.params)?,
                    dt,
                    n_max: nmax,
                    threshold,
                },
                output(out),
            )
        }
        Command::Resolvent { method, op, dt, mode, samples, out } => {
            positive("--dt", dt)?;
            at_least("--samples", samples, 16)?;
            if dt.is_none() && op.op != "jordan" {
                return Err(UsageError::flag("--dt", "required unless --op is jordan"));
            }
            let out = output(out);
            json_only(&out)?;
            let mode = match mode {
                ModeArg::Standard => ResolventMode::Standard,
                ModeArg::Dissipative => ResolventMode::Dissipative,
            };
            (
                Job::Resolvent {
                    method: parse_method("--method", &method)?,
                    op: operator(&op.op, &op.params)?,
                    dt,
                    mode,
                    samples,
                },
                out,
            )
        }
        Command::Crouzeix { method, op, params, dt, angles, seed, count, out } => {
            let out = output(out);
            match (op, method) {
                (Some(op), Some(method)) => {
                    json_only(&out)?;
                    positive("--dt", Some(dt))?;
                    at_least("--angles", angles, 256)?;
                    if seed.is_some() || count.is_some() {
                        return Err(UsageError::flag("--seed", "only applies to the random sweep (omit --op)"));
                    }
                    (
                        Job::Crouzeix {
                            method: parse_method("--method", &method)?,
                            op: operator(&op, &params)?,
                            dt,
                            angles,
                        },
                        out,
                    )
                }
                (None, None) => {
                    let mut overrides = BTreeMap::new();
                    if let Some(s) = seed {
                        overrides.insert("seed".to_string(), s as f64);
                    }
                    if let Some(c) = count {
                        at_least("--count", c, 1)?;
                        overrides.insert("count".to_string(), c as f64);
                    }
                    (Job::CrouzeixSweep { overrides }, out)
                }
                (Some(_), None) => return Err(UsageError::flag("--method", "required with --op")),
                (None, Some(_)) => return Err(UsageError::flag("--op", "required with --method")),
            }
        }
        Command::Scenario { name, set, out } => {
            if !SCENARIO_NAMES.contains(&name.as_str()) {
                return Err(UsageError::flag(
                    "scenario",
                    format!("unknown scenario `{name}`; known scenarios: {}", SCENARIO_NAMES.join(", ")),
                ));
            }
            (
                Job::Scenario {
                    name,
                    overrides: overrides(&set)?,
                },
                output(out),
            )
        }
        Command::VerifyPaper { out } => {
            let out = output(out);
            json_only(&out)?;
            (Job::VerifyPaper, out)
        }
    };
    Ok(RunConfig { job, output: out })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<RunConfig, UsageError> {
        parse_args(std::iter::once("rklab").chain(s.split_whitespace()))
    }

    #[test]
    fn numbers_and_fractions() {
        assert_eq!(parse_number("1/6").unwrap(), 1.0 / 6.0);
        assert_eq!(parse_number(" -2.5 ").unwrap(), -2.5);
        assert!(parse_number("1/0").is_err());
        assert!(parse_number("x").is_err());
        assert!(parse_number("inf").is_err());
    }

    #[test]
    fn region_job() {
        let cfg = parse("region --method rk4 --bbox -4,1,-3,3 --nx 400 --ny 400 --out a.csv").unwrap();
        assert_eq!(cfg.output.format, Format::Csv);
        match cfg.job {
            Job::Region { method, bbox, nx, ny } => {
                assert_eq!(method.label(), "rk4");
                assert_eq!(bbox, [-4.0, 1.0, -3.0, 3.0]);
                assert_eq!((nx, ny), (400, 400));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn cfl_and_powers_jobs() {
        let cfg = parse("cfl --method rk4 --op upwind --N 64 --a 1 --dx 0.015625 --dt 0.02").unwrap();
        assert!(matches!(cfg.job, Job::Cfl { dt, .. } if dt == 0.02));
        let cfg = parse("powers --method rk1 --op jordan --q 0.5 --N 64 --nmax 128").unwrap();
        match cfg.job {
            Job::Powers { op, dt, n_max, .. } => {
                assert_eq!(op.params.q, Some(0.5));
                assert_eq!(op.params.n, 64);
                assert_eq!(dt, None);
                assert_eq!(n_max, 128);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn coefficient_lists() {
        let cfg = parse("region --method 1,1,1/2,1/6").unwrap();
        match cfg.job {
            Job::Region { method, .. } => assert_eq!(method.order(), 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn usage_errors_name_the_flag() {
        let e = parse("region --method rk9x").unwrap_err();
        assert_eq!(e.code, EXIT_USAGE);
        assert!(e.message.contains("--method") && e.message.contains("rk1"), "{}", e.message);
        let e = parse("cfl --method rk4 --op nope --dt 0.1").unwrap_err();
        assert!(e.message.contains("--op") && e.message.contains("upwind"));
        let e = parse("cfl --method rk4 --op upwind --dt -1").unwrap_err();
        assert!(e.message.contains("--dt"));
        let e = parse("powers --method rk4 --op upwind").unwrap_err();
        assert!(e.message.contains("--dt"));
        let e = parse("numrange --op upwind --N 100000").unwrap_err();
        assert!(e.message.contains("--N"));
        let e = parse("region --method rk4 --bogus 1").unwrap_err();
        assert_eq!(e.code, EXIT_USAGE);
        assert!(e.message.contains("--bogus"));
        let e = parse("scenario nope").unwrap_err();
        assert!(e.message.contains("fe-stable"));
        let e = parse("scenario fe-stable --set N").unwrap_err();
        assert!(e.message.contains("--set"));
        let e = parse("cfl --method rk4 --op lw --dt 0.01").unwrap_err();
        assert!(e.message.contains("--lambda"));
    }

    #[test]
    fn help_is_not_an_error() {
        let e = parse("--help").unwrap_err();
        assert_eq!(e.code, EXIT_OK);
        assert!(e.message.contains("verify-paper"));
    }

    #[test]
    fn format_inference() {
        assert_eq!(parse("scenario fig1 --out x.json").unwrap().output.format, Format::Json);
        assert_eq!(parse("scenario fig1 --out x.CSV").unwrap().output.format, Format::Csv);
        assert_eq!(parse("scenario fig1").unwrap().output.format, Format::Json);
        assert!(parse("cfl --method rk4 --op upwind --dt 0.01 --format csv").is_err());
    }
}
