mod args;
mod output;
mod sweep;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use hcube_core::cube::{BiasedMeasure, BooleanFunction};
use hcube_core::gaussian::{
    smoothed_gradient_oracle, threshold_grid, trapezoid_gradient, verify_ctns, Halfspace,
};
use hcube_core::inequalities::{proof_chain_trace, search_extremal, SearchSpace};
use hcube_core::isoperimetry::log_profile_constant;
use hcube_core::normal;
use hcube_core::report::{worst_violation, InequalityReport, Law, Tolerance};
use serde_json::json;

use args::{
    Cli, Command, Format, GaussArgs, ProfileArgs, SearchArgs, Space, TraceArgs, VerifyArgs,
};
use output::{document, emit, to_value, Outcome};
use sweep::{Source, Sweep};

/// Smoothed gradients must land this close to `2 phi(a)` at the finest width.
const ORACLE_TOL: f64 = 1e-2;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(hcube_core::Error),
    Io(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(s) => write!(f, "{s}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(s) => write!(f, "i/o: {s}"),
        }
    }
}

impl From<hcube_core::Error> for CliError {
    fn from(e: hcube_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp
                | ErrorKind::DisplayVersion
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    let argv: Vec<String> = std::env::args().skip(1).collect();
    match run(cli.command, &argv) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("HCUBE_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw.trim().parse().ok().filter(|&t| t > 0).ok_or_else(|| {
        CliError::Usage(format!(
            "HCUBE_THREADS must be a positive integer, got `{raw}`"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn run(command: Command, argv: &[String]) -> Result<u8, CliError> {
    let (name, outcome, output) = match command {
        Command::Verify(a) => ("verify", verify(&a)?, a.output),
        Command::Search(a) => ("search", search(&a)?, a.output),
        Command::Trace(a) => ("trace", trace(&a)?, a.output),
        Command::Profile(a) => ("profile", profile(&a)?, a.output),
        Command::Gauss(a) => ("gauss", gauss(&a)?, a.output),
        Command::Report(a) => {
            let text = std::fs::read_to_string(&a.input)
                .map_err(|e| CliError::Io(format!("{}: {e}", a.input.display())))?;
            let doc: serde_json::Value = serde_json::from_str(&text).map_err(|e| {
                CliError::Usage(format!("{}: not a JSON report: {e}", a.input.display()))
            })?;
            let mut out = a.output;
            if out.format == Format::Json && out.out.is_none() {
                out.format = Format::Csv;
            }
            output::emit(&doc, &out)?;
            return Ok(0);
        }
    };
    let doc = document(name, argv, &outcome);
    emit(&doc, &output)?;
    let violations = outcome.violations();
    if output.out.is_some() {
        println!(
            "{name}: {} rows, {violations} violations",
            outcome.reports.len()
        );
    }
    if violations == 0 {
        return Ok(0);
    }
    match worst_violation(&outcome.reports) {
        Some(w) => eprintln!("{}", describe(w)),
        None => eprintln!("{violations} checks failed; see the report"),
    }
    Ok(2)
}

fn describe(r: &InequalityReport) -> String {
    format!(
        "worst violation: law={} n={} p={} witness={} lhs={:.12e} bound={:.12e} slack={:.3e}{}",
        r.law,
        r.n,
        r.p.map_or("-".into(), |p| p.to_string()),
        r.witness_hex.as_deref().unwrap_or("-"),
        r.lhs,
        r.constant * r.rhs_unit,
        r.slack,
        r.note
            .as_deref()
            .map_or(String::new(), |n| format!(" ({n})")),
    )
}

fn tolerance(tol: f64) -> Result<Tolerance, CliError> {
    if tol > 0.0 && tol.is_finite() {
        Ok(Tolerance(tol))
    } else {
        Err(CliError::Usage(format!(
            "--tol must be positive, got {tol}"
        )))
    }
}

fn measure(p: f64) -> Result<BiasedMeasure, CliError> {
    Ok(BiasedMeasure::new(p)?)
}

fn parse_fn(s: &str) -> Result<BooleanFunction, CliError> {
    Ok(s.parse::<BooleanFunction>()?)
}

fn source(n: usize, space: &Space, function: Option<&str>) -> Result<Source, CliError> {
    if let Some(f) = function {
        return Ok(Source::Single(parse_fn(f)?));
    }
    match (space.random, space.seed) {
        (Some(count), Some(seed)) => Ok(Source::Random { n, count, seed }),
        _ => Ok(Source::Exhaustive(n)),
    }
}

fn verify(a: &VerifyArgs) -> Result<Outcome, CliError> {
    let tol = tolerance(a.tol)?;
    let m = measure(a.p)?;
    if let Some(grid) = &a.t_grid {
        if let Some(t) = grid.iter().find(|t| t.is_nan() || **t < 0.0) {
            return Err(CliError::Usage(format!(
                "times must be nonnegative, got {t}"
            )));
        }
    }
    let reports = if a.all {
        sweep::run_all(m, tol)?
    } else {
        let law = a.law.expect("clap requires --law without --all");
        sweep::run(&Sweep {
            law,
            source: source(a.n, &a.space, a.function.as_deref())?,
            m,
            t_grid: a.t_grid.clone(),
            r_grid: a.r_grid.clone(),
            c: a.c,
            tol,
        })?
    };
    Ok(Outcome {
        reports,
        ..Outcome::default()
    })
}

fn search(a: &SearchArgs) -> Result<Outcome, CliError> {
    let tol = tolerance(a.tol)?;
    let m = measure(a.p)?;
    let space = match (a.space.random, a.space.seed) {
        (Some(count), Some(seed)) => SearchSpace::Random { count, seed },
        _ => SearchSpace::Exhaustive,
    };
    let dedup = !a.no_dedup && space == SearchSpace::Exhaustive;
    let result = search_extremal(a.n, &m, a.law, space, dedup).map_err(|e| match e {
        hcube_core::Error::ExhaustiveTooLarge { .. } | hcube_core::Error::UnknownLaw(_) => {
            CliError::Usage(e.to_string())
        }
        other => CliError::Core(other),
    })?;
    let positive = result.min_ratio > 0.0 && result.min_ratio.is_finite();
    let mut row = InequalityReport::at_least(a.law, a.n, result.min_ratio, 1.0, 0.0, tol)
        .with_p(a.p)
        .with_param("evaluated", result.evaluated as f64)
        .require("positive", positive, result.min_ratio)
        .with_note("minimum ratio");
    if let Some(f) = &result.argmin {
        row = row.with_witness(f);
    }
    Ok(Outcome {
        reports: vec![row],
        result: Some(to_value(&result)),
        extra_violations: 0,
    })
}

fn trace(a: &TraceArgs) -> Result<Outcome, CliError> {
    let tol = tolerance(a.tol)?;
    let m = measure(a.p)?;
    let f = parse_fn(&a.function)?;
    let tr = proof_chain_trace(&f, &m, tol).map_err(|e| match e {
        hcube_core::Error::Degenerate => {
            CliError::Usage(format!("{f} is constant; the trace needs Var > 0"))
        }
        other => CliError::Core(other),
    })?;
    Ok(Outcome {
        reports: vec![sweep::trace_report(&tr, tol)],
        result: Some(to_value(&tr)),
        extra_violations: 0,
    })
}

fn profile(a: &ProfileArgs) -> Result<Outcome, CliError> {
    let tol = tolerance(a.tol)?;
    let xs = match &a.x {
        Some(xs) => xs.clone(),
        None if a.grid >= 2 => sweep::unit_grid(a.grid),
        None => return Err(CliError::Usage("--grid needs at least 2 points".into())),
    };
    let mut reports = sweep::profile_reports(Law::ProfileQuadratic, &xs, tol)?;
    reports.extend(sweep::profile_reports(Law::ProfileLog, &xs, tol)?);
    let c = log_profile_constant();
    Ok(Outcome {
        reports,
        result: Some(json!({ "c_log": to_value(&c) })),
        extra_violations: 0,
    })
}

fn gauss(a: &GaussArgs) -> Result<Outcome, CliError> {
    let tol = tolerance(a.tol)?;
    if !(a.range > 0.0 && a.range.is_finite()) {
        return Err(CliError::Usage(format!(
            "--range must be positive, got {}",
            a.range
        )));
    }
    let grid = threshold_grid(a.grid, a.range)?;
    let sweep = verify_ctns(&grid, a.c3, a.c4, tol)?;
    let mut failures = 0;
    if sweep.poincare_gap_at_zero.is_some_and(|g| g > 1e-12) {
        failures += 1;
    }
    let mut oracle = Vec::new();
    for &t in &a.a {
        let h = Halfspace::new(1, 0, t)?;
        let closed = 2.0 * normal::pdf(t);
        let mut last = f64::INFINITY;
        for (i, &eps) in a.eps.iter().enumerate() {
            let quad = smoothed_gradient_oracle(&h, eps)?;
            let trap = trapezoid_gradient(&h, eps)?;
            let err = (quad - closed).abs();
            let decreasing = err < last;
            let finest = i + 1 == a.eps.len();
            let pass = decreasing && (!finest || err < ORACLE_TOL);
            failures += usize::from(!pass);
            last = err;
            oracle.push(json!({
                "a": t, "eps": eps, "quadrature": quad, "trapezoid": trap,
                "closed_form": closed, "error": err, "pass": pass,
            }));
        }
    }
    let result = json!({
        "min_ratio_talagrand": sweep.min_ratio_talagrand,
        "min_ratio_eldan_gross": sweep.min_ratio_eldan_gross,
        "c_talagrand": sweep.c_talagrand,
        "c_eldan_gross": sweep.c_eldan_gross,
        "poincare_gap_at_zero": sweep.poincare_gap_at_zero,
        "smoothed_gradient": oracle,
        "note": "E|grad f| of a halfspace is the limit of tanh((a - x)/eps) approximants",
    });
    Ok(Outcome {
        reports: sweep.reports,
        result: Some(result),
        extra_violations: failures,
    })
}
