use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rklab::harness::{
    crouzeix_ratio, power_growth, resolvent_constant, rk_matrix, run_scenario, verify_cfl,
    GrowthMeta, ScenarioReport, Series, SCENARIO_NAMES,
};
use rklab::numerical_range::range_boundary;
use rklab::operators::build_operator;
use rklab::stability_polynomials::{region_grid, Bbox};
use rklab::{Bundle, Error, Matrix};
use serde_json::json;

use crate::args::{Format, Job, OperatorSpec, Output, RunConfig};
use crate::{EXIT_NUMERICAL, EXIT_OK, EXIT_USAGE, EXIT_VERDICT_FAIL};

const CROUZEIX_BOUND: f64 = 1.0 + std::f64::consts::SQRT_2;

/// A finished command: what to write and how to summarize it.
struct Outcome {
    /// Main artifact, written to `--out` or stdout.
    body: Vec<u8>,
    /// Extra files keyed by suffix, written next to `--out` only.
    extras: Vec<(String, Vec<u8>)>,
    /// Always printed to stdout; `body` then goes only to `--out`.
    console: Option<Vec<u8>>,
    summary: String,
    code: i32,
}

impl Outcome {
    fn new(body: Vec<u8>, summary: String, code: i32) -> Self {
        Self {
            body,
            extras: Vec::new(),
            console: None,
            summary,
            code,
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidParameter(_)
        | Error::UnknownScenario { .. }
        | Error::InvalidOverride { .. }
        | Error::UnknownOperator { .. }
        | Error::UnknownMethod { .. }
        | Error::StencilTooWide { .. } => EXIT_USAGE,
        _ => EXIT_NUMERICAL,
    }
}

fn verdict_code(pass: bool) -> i32 {
    if pass {
        EXIT_OK
    } else {
        EXIT_VERDICT_FAIL
    }
}

fn pass_word(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

/// Runs the job, writes its artifacts and returns the process exit code.
pub fn execute(cfg: &RunConfig) -> i32 {
    let outcome = match run(&cfg.job, cfg.output.format) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    if let Err(msg) = write_outputs(&cfg.output, &outcome) {
        eprintln!("error: {msg}");
        return EXIT_NUMERICAL;
    }
    eprintln!("{}", outcome.summary);
    outcome.code
}

fn extra_path(out: &Path, suffix: &str) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    out.with_file_name(format!("{stem}_{suffix}.csv"))
}

fn print(bytes: &[u8]) -> Result<(), String> {
    let mut stdout = std::io::stdout().lock();
    stdout
        .write_all(bytes)
        .and_then(|_| stdout.flush())
        .map_err(|e| format!("stdout: {e}"))
}

fn write_outputs(out: &Output, o: &Outcome) -> Result<(), String> {
    if let Some(text) = &o.console {
        print(text)?;
    }
    let Some(path) = &out.path else {
        return match o.console {
            Some(_) => Ok(()),
            None => print(&o.body),
        };
    };
    let mut targets = vec![(path.clone(), &o.body)];
    targets.extend(o.extras.iter().map(|(s, b)| (extra_path(path, s), b)));
    let mut written = Vec::new();
    for (p, bytes) in targets {
        if let Err(e) = fs::write(&p, bytes) {
            for w in written.iter().chain(std::iter::once(&p)) {
                let _ = fs::remove_file(w);
            }
            return Err(format!("{}: {e}", p.display()));
        }
        written.push(p);
    }
    Ok(())
}

fn json_bytes<S: serde::Serialize>(value: &S) -> Result<Vec<u8>, Error> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s.into_bytes())
}

fn csv_bytes(f: impl FnOnce(&mut Vec<u8>) -> rklab::Result<()>) -> Result<Vec<u8>, Error> {
    let mut buf = Vec::new();
    f(&mut buf)?;
    Ok(buf)
}

fn operator(op: &OperatorSpec) -> Result<Bundle, Error> {
    build_operator(&op.name, &op.params)
}

/// `P(dt L)`, or the operator matrix itself when no step is given.
fn step_matrix(method: &rklab::Polynomial, op: &Bundle, dt: Option<f64>) -> Matrix {
    match dt {
        Some(dt) => rk_matrix(method, dt, op.matrix()),
        None => op.matrix().clone(),
    }
}

fn run(job: &Job, format: Format) -> Result<Outcome, Error> {
    match job {
        Job::Region { method, bbox, nx, ny } => {
            let grid = region_grid(method, Bbox::new(bbox[0], bbox[1], bbox[2], bbox[3])?, *nx, *ny)?;
            let body = match format {
                Format::Csv => csv_bytes(|b| grid.write_csv(b))?,
                Format::Json => json_bytes(&grid)?,
            };
            let summary = format!(
                "region: {} on {nx}x{ny} grid, {:.4} of nodes inside",
                method.label(),
                grid.inside_fraction()
            );
            Ok(Outcome::new(body, summary, EXIT_OK))
        }
        Job::Numrange { op, angles } => {
            let l = operator(op)?;
            let w = range_boundary(l.matrix(), l.symmetrizer(), *angles)?;
            let body = match format {
                Format::Csv => csv_bytes(|b| w.write_csv(b))?,
                Format::Json => json_bytes(&w.to_json())?,
            };
            let summary = format!("numrange: {} radius {:.12}", l.label(), w.radius());
            Ok(Outcome::new(body, summary, EXIT_OK))
        }
        Job::Cfl { method, op, dt, angles, tol } => {
            let l = operator(op)?;
            let report = verify_cfl(method, *dt, &l, *angles, *tol)?;
            let summary = format!(
                "cfl: {} {} on {} dt={dt}: dt*r_H = {:.6}, required {}",
                pass_word(report.pass),
                method.label(),
                l.label(),
                report.radius_measured,
                report
                    .radius_required
                    .map_or_else(|| "none".to_string(), |r| format!("{r:.6}")),
            );
            Ok(Outcome::new(json_bytes(&report)?, summary, verdict_code(report.pass)))
        }
        Job::Powers { method, op, dt, n_max, threshold } => {
            let l = operator(op)?;
            let p = step_matrix(method, &l, *dt);
            let meta = GrowthMeta {
                polynomial: dt.map(|_| method.label().to_string()),
                operator: Some(l.label().to_string()),
                dt: *dt,
                cfl: None,
            };
            let g = power_growth(&p, *n_max, l.symmetrizer(), *threshold)?.with_meta(meta);
            let body = match format {
                Format::Csv => {
                    let r = ScenarioReport {
                        scenario: "powers".into(),
                        params: BTreeMap::new(),
                        verdicts: Vec::new(),
                        series: Series::from_norms(&g.norms),
                        statistics: BTreeMap::new(),
                        grids: Vec::new(),
                    };
                    csv_bytes(|b| r.write_series_csv(b))?
                }
                Format::Json => json_bytes(&g)?,
            };
            let summary = format!(
                "powers: {} sup norm {:.6e} over {} steps, {}",
                l.label(),
                g.sup_norm,
                g.norms.len() - 1,
                match g.first_exceed {
                    Some(n) => format!("diverged at n = {n}"),
                    None if g.diverged => "diverged".to_string(),
                    None => "bounded".to_string(),
                }
            );
            Ok(Outcome::new(body, summary, EXIT_OK))
        }
        Job::Resolvent { method, op, dt, mode, samples } => {
            let l = operator(op)?;
            let p = l.symmetrizer().transform(&step_matrix(method, &l, *dt))?;
            let r = resolvent_constant(&p, *mode, *samples)?;
            let summary = format!(
                "resolvent: {} constant {:.6e} ({} singular samples skipped)",
                l.label(),
                r.constant,
                r.skipped
            );
            Ok(Outcome::new(json_bytes(&r)?, summary, EXIT_OK))
        }
        Job::Crouzeix { method, op, dt, angles } => {
            let l = operator(op)?;
            let a = l.matrix().scale(*dt);
            let ratio = crouzeix_ratio(&a, l.symmetrizer(), method, *angles)?;
            let pass = ratio <= CROUZEIX_BOUND + 1e-6;
            let body = json_bytes(&json!({
                "polynomial": method.label(),
                "operator": l.label(),
                "dt": dt,
                "ratio": ratio,
                "bound": CROUZEIX_BOUND,
                "pass": pass,
            }))?;
            let summary = format!(
                "crouzeix: {} {} on {}: ratio {ratio:.9} against {CROUZEIX_BOUND:.9}",
                pass_word(pass),
                method.label(),
                l.label()
            );
            Ok(Outcome::new(body, summary, verdict_code(pass)))
        }
        Job::CrouzeixSweep { overrides } => scenario("crouzeix-sweep", overrides, format),
        Job::Scenario { name, overrides } => scenario(name, overrides, format),
        Job::VerifyPaper => verify_paper(),
    }
}

fn scenario(name: &str, overrides: &BTreeMap<String, f64>, format: Format) -> Result<Outcome, Error> {
    let r = run_scenario(name, overrides)?;
    let body = match format {
        Format::Csv => csv_bytes(|b| r.write_series_csv(b))?,
        Format::Json => r.to_json().map(|mut s| {
            s.push('\n');
            s.into_bytes()
        })?,
    };
    let mut extras = Vec::new();
    for (label, grid) in &r.grids {
        extras.push((label.clone(), csv_bytes(|b| grid.write_csv(b))?));
    }
    let failed: Vec<&str> = r.verdicts.iter().filter(|v| !v.pass).map(|v| v.name.as_str()).collect();
    let summary = if failed.is_empty() {
        format!("scenario {name}: PASS ({} verdicts)", r.verdicts.len())
    } else {
        format!("scenario {name}: FAIL ({})", failed.join(", "))
    };
    Ok(Outcome {
        body,
        extras,
        console: None,
        summary,
        code: verdict_code(r.pass()),
    })
}

fn verify_paper() -> Result<Outcome, Error> {
    let mut reports = Vec::new();
    let mut table = String::new();
    table.push_str(&format!(
        "{:<16} {:<32} {:>14} {:>14} {:>10}  {}\n",
        "scenario", "claim", "measured", "bound", "tol", "result"
    ));
    let mut all_agree = true;
    let mut unexpected = 0;
    for name in SCENARIO_NAMES {
        let r = run_scenario(name, &BTreeMap::new())?;
        for v in &r.verdicts {
            let note = match (v.pass, v.expected) {
                (true, _) => "PASS",
                (false, false) => "FAIL (expected)",
                (false, true) => "FAIL",
            };
            table.push_str(&format!(
                "{:<16} {:<32} {:>14.6e} {:>14.6e} {:>10.1e}  {note}\n",
                name, v.name, v.measured, v.bound, v.tolerance
            ));
        }
        all_agree &= r.agrees();
        unexpected += r.verdicts.iter().filter(|v| !v.agrees()).count();
        reports.push(r);
    }
    // A verdict the theory predicts to fail confirms the claim when it fails.
    let mut out = Outcome::new(json_bytes(&reports)?, String::new(), verdict_code(all_agree));
    out.console = Some(table.into_bytes());
    let failed = reports.iter().filter(|r| !r.agrees()).map(|r| r.scenario.as_str()).collect::<Vec<_>>();
    out.summary = if all_agree {
        format!("verify-paper: PASS ({} scenarios)", reports.len())
    } else {
        format!("verify-paper: FAIL in {} ({unexpected} verdicts disagree with theory)", failed.join(", "))
    };
    Ok(out)
}
