//! Law-by-law sweeps behind `verify`.

use hcube_core::cube::{BiasedMeasure, BooleanFunction, RealFunction};
use hcube_core::gaussian::{threshold_grid, verify_ctns, DEFAULT_GRID, DEFAULT_RANGE};
use hcube_core::hypercontract::{
    appendix_reports, appendix_sweep, lsi_report, nineteen_point_bias_grid,
    verify_hypercontractivity,
};
use hcube_core::inequalities::{
    chain_constant, numerical_fact_min, numerical_fact_report, proof_chain_trace,
    verify_eldan_gross, verify_talagrand_logvar,
};
use hcube_core::inequalities::{MAX_EXHAUSTIVE_DIM, MAX_RANDOM_DIM};
use hcube_core::isoperimetry::{
    bobkov_gotze_check, local_bobkov_discrete, profile_lower_bounds, verify_variance_drop,
};
use hcube_core::report::{InequalityReport, Law, Tolerance};
use hcube_core::sampling::{random_boolean, random_real};
use hcube_core::semigroup::{default_t_grid, variance_decay_report, verify_variance_decay};
use rayon::prelude::*;

use crate::CliError;

/// Where the functions of a sweep come from.
#[derive(Debug, Clone)]
pub enum Source {
    Exhaustive(usize),
    Random { n: usize, count: u64, seed: u64 },
    Single(BooleanFunction),
}

impl Source {
    pub fn check(&self) -> Result<(), CliError> {
        match *self {
            Source::Exhaustive(n) if !(1..=MAX_EXHAUSTIVE_DIM).contains(&n) => {
                Err(CliError::Usage(format!(
                    "exhaustive sweeps need 1 <= n <= {MAX_EXHAUSTIVE_DIM}, got {n}"
                )))
            }
            Source::Random { n, .. } if !(1..=MAX_RANDOM_DIM).contains(&n) => Err(CliError::Usage(
                format!("random sweeps need 1 <= n <= {MAX_RANDOM_DIM}, got {n}"),
            )),
            _ => Ok(()),
        }
    }

    fn n(&self) -> usize {
        match self {
            Source::Exhaustive(n) | Source::Random { n, .. } => *n,
            Source::Single(f) => f.n(),
        }
    }

    fn booleans(&self) -> Result<Vec<BooleanFunction>, CliError> {
        Ok(match self {
            Source::Exhaustive(n) => {
                let n = *n;
                (0..1u64 << (1 << n))
                    .map(|t| BooleanFunction::from_u64(n, t))
                    .collect::<Result<_, _>>()?
            }
            Source::Random { n, count, seed } => (0..*count)
                .into_par_iter()
                .map(|i| random_boolean(*n, *seed, i))
                .collect::<Result<_, _>>()?,
            Source::Single(f) => vec![f.clone()],
        })
    }

    /// Real-valued inputs: random tables on `[lo, hi)` in random mode, the
    /// Boolean tables mapped through `boolean` otherwise.
    fn reals(
        &self,
        lo: f64,
        hi: f64,
        boolean: fn(&BooleanFunction) -> RealFunction,
    ) -> Result<Vec<RealFunction>, CliError> {
        Ok(match self {
            Source::Random { n, count, seed } => (0..*count)
                .into_par_iter()
                .map(|i| random_real(*n, *seed, i, lo, hi))
                .collect::<Result<_, _>>()?,
            _ => self.booleans()?.iter().map(boolean).collect(),
        })
    }
}

#[derive(Debug, Clone)]
pub struct Sweep {
    pub law: Law,
    pub source: Source,
    pub m: BiasedMeasure,
    pub t_grid: Option<Vec<f64>>,
    pub r_grid: Option<Vec<f64>>,
    pub c: Option<f64>,
    pub tol: Tolerance,
}

fn default_r_grid() -> Vec<f64> {
    (1..=9).map(|k| 1.0 + k as f64 / 10.0).collect()
}

fn flat<T: Send>(rows: Vec<Result<Vec<T>, CliError>>) -> Result<Vec<T>, CliError> {
    let mut out = Vec::new();
    for r in rows {
        out.extend(r?);
    }
    Ok(out)
}

pub fn run(s: &Sweep) -> Result<Vec<InequalityReport>, CliError> {
    let m = &s.m;
    let tol = s.tol;
    let times = s.t_grid.clone().unwrap_or_else(default_t_grid);
    match s.law {
        Law::EldanGross | Law::TalagrandLogvar => {
            s.source.check()?;
            let c = match s.c {
                Some(c) => c,
                None => chain_constant(s.law, m)?,
            };
            let check = if s.law == Law::EldanGross {
                verify_eldan_gross
            } else {
                verify_talagrand_logvar
            };
            Ok(s.source
                .booleans()?
                .par_iter()
                .map(|f| check(f, m, c, tol))
                .collect())
        }
        Law::VarianceDecay => {
            s.source.check()?;
            let rows = match &s.source {
                Source::Random { .. } => s
                    .source
                    .reals(-1.0, 1.0, BooleanFunction::to_real)?
                    .par_iter()
                    .map(|f| {
                        times
                            .iter()
                            .map(|&t| Ok(variance_decay_report(f, m, t, tol)?))
                            .collect()
                    })
                    .collect(),
                _ => s
                    .source
                    .booleans()?
                    .par_iter()
                    .map(|f| Ok(verify_variance_decay(f, m, &times, tol)?))
                    .collect(),
            };
            flat(rows)
        }
        Law::VarianceDrop | Law::LocalBobkov => {
            s.source.check()?;
            let check = if s.law == Law::VarianceDrop {
                verify_variance_drop
            } else {
                local_bobkov_discrete
            };
            flat(
                s.source
                    .booleans()?
                    .par_iter()
                    .map(|f| times.iter().map(|&t| Ok(check(f, m, t, tol)?)).collect())
                    .collect(),
            )
        }
        Law::BobkovGotze => {
            s.source.check()?;
            let measures = vec![*m; s.source.n()];
            s.source
                .booleans()?
                .par_iter()
                .map(|h| Ok(bobkov_gotze_check(h, &measures, tol)?.with_p(m.p())))
                .collect()
        }
        Law::Hypercontractivity => {
            s.source.check()?;
            let rs = s.r_grid.clone().unwrap_or_else(default_r_grid);
            flat(
                s.source
                    .reals(-1.0, 1.0, BooleanFunction::to_real)?
                    .par_iter()
                    .map(|f| {
                        rs.iter()
                            .map(|&r| Ok(verify_hypercontractivity(f, m, r, tol)?))
                            .collect()
                    })
                    .collect(),
            )
        }
        Law::LogSobolev => {
            s.source.check()?;
            s.source
                .reals(0.0, 1.0, BooleanFunction::to_indicator)?
                .par_iter()
                .map(|f| Ok(lsi_report(f, m, tol)?))
                .collect()
        }
        Law::ProofChain => {
            s.source.check()?;
            s.source
                .booleans()?
                .par_iter()
                .filter(|f| !f.is_constant())
                .map(|f| {
                    let tr = proof_chain_trace(f, m, tol)?;
                    Ok(trace_report(&tr, tol))
                })
                .collect()
        }
        Law::Appendix => {
            let sweep = appendix_sweep(2000, &nineteen_point_bias_grid())?;
            Ok(appendix_reports(&sweep, 1e-10, tol))
        }
        Law::NumericalFact => {
            let fact = numerical_fact_min(10_001, tol)?;
            Ok(vec![numerical_fact_report(&fact, tol)])
        }
        Law::ProfileQuadratic | Law::ProfileLog => profile_reports(s.law, &unit_grid(1001), tol),
        Law::GaussTalagrand | Law::GaussEldanGross | Law::GaussPoincare => {
            let grid = threshold_grid(DEFAULT_GRID, DEFAULT_RANGE)?;
            let sweep = verify_ctns(&grid, None, None, tol)?;
            Ok(sweep
                .reports
                .into_iter()
                .filter(|r| r.law == s.law)
                .collect())
        }
    }
}

pub fn trace_report(tr: &hcube_core::inequalities::ProofTrace, tol: Tolerance) -> InequalityReport {
    let unit = tr.var * (1.0 + std::f64::consts::E / tr.w).ln().sqrt();
    let failed = tr.failed_steps().count();
    let mut r = InequalityReport::at_least(
        Law::ProofChain,
        tr.n,
        tr.e_grad,
        unit,
        tr.implied_constant,
        tol,
    )
    .with_p(tr.p)
    .with_witness(&tr.witness_hex)
    .with_param("W", tr.w)
    .with_param("var", tr.var)
    .require("failed_steps", failed == 0, failed as f64);
    if let Some(eps) = tr.epsilon {
        r = r.with_param("epsilon", eps);
    }
    let branch = serde_json::to_value(tr.branch).expect("branch serializes");
    r.with_note(branch.as_str().unwrap_or_default())
}

pub fn unit_grid(count: usize) -> Vec<f64> {
    (0..count).map(|i| i as f64 / (count - 1) as f64).collect()
}

pub fn profile_reports(
    law: Law,
    xs: &[f64],
    tol: Tolerance,
) -> Result<Vec<InequalityReport>, CliError> {
    xs.iter()
        .map(|&x| {
            let e = profile_lower_bounds(x)?;
            let lower = if law == Law::ProfileLog {
                e.lower_log
            } else {
                e.lower_quadratic
            };
            let mut r = InequalityReport::at_most(law, 0, lower, e.value, tol).with_param("x", x);
            if law == Law::ProfileLog {
                r = r.with_param("c_log", e.c_log);
            }
            Ok(r)
        })
        .collect()
}

/// Every law at `n = 1, 2, 3` exhaustively; dimension-free laws once.
pub fn run_all(m: BiasedMeasure, tol: Tolerance) -> Result<Vec<InequalityReport>, CliError> {
    let mut out = Vec::new();
    for law in Law::ALL {
        let dims: &[usize] = match law {
            Law::Appendix
            | Law::NumericalFact
            | Law::ProfileQuadratic
            | Law::ProfileLog
            | Law::GaussTalagrand
            | Law::GaussEldanGross
            | Law::GaussPoincare => &[1],
            _ => &[1, 2, 3],
        };
        for &n in dims {
            out.extend(run(&Sweep {
                law,
                source: Source::Exhaustive(n),
                m,
                t_grid: None,
                r_grid: None,
                c: None,
                tol,
            })?);
        }
    }
    Ok(out)
}
