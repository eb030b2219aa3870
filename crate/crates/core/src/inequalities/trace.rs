//! Numerical replay of the case analysis behind the Eldan–Gross bound.
//!
//! Each branch is a chain of scalar inequalities ending in
//! `E|grad f| >= C Var sqrt(log(1 + e/W))` with an explicit `C`.

use std::f64::consts::{E, PI, SQRT_2};

use serde::Serialize;

use super::{numerical_fact_bound, Quantities};
use crate::cube::{statistics, BiasedMeasure, BooleanFunction};
use crate::error::{Error, Result};
use crate::isoperimetry::{gaussian_profile, log_profile_constant, log_shape};
use crate::report::{Law, Tolerance};
use crate::semigroup::{apply_noise, NoiseParams};

/// Branch threshold on `W`.
pub const W_THRESHOLD: f64 = 0.01;
/// Branch threshold on `Var / W`.
pub const RATIO_THRESHOLD: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Branch {
    #[serde(rename = "W_large")]
    WLarge,
    #[serde(rename = "var_below_sqrtW")]
    VarBelowSqrtW,
    #[serde(rename = "var_below_100W")]
    VarBelow100W,
    #[serde(rename = "main")]
    Main,
}

impl Branch {
    pub fn select(var: f64, w: f64) -> Self {
        if w >= W_THRESHOLD {
            Branch::WLarge
        } else if var < w.sqrt() {
            Branch::VarBelowSqrtW
        } else if var < RATIO_THRESHOLD * w {
            Branch::VarBelow100W
        } else {
            Branch::Main
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceStep {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub relation: Relation,
    /// Distance to failure; negative when the raw inequality is violated.
    pub slack: f64,
    pub pass: bool,
}

impl TraceStep {
    fn new(name: &str, lhs: f64, relation: Relation, rhs: f64, tol: Tolerance) -> Self {
        let (slack, pass) = match relation {
            Relation::Le => (rhs - lhs, tol.at_most(lhs, rhs)),
            Relation::Ge => (lhs - rhs, tol.at_least(lhs, rhs)),
            Relation::Eq => (-(lhs - rhs).abs(), (lhs - rhs).abs() <= tol.slack(rhs)),
        };
        Self {
            name: name.to_string(),
            lhs,
            rhs,
            relation,
            slack,
            pass,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProofTrace {
    pub n: usize,
    pub p: f64,
    pub witness_hex: String,
    pub branch: Branch,
    #[serde(rename = "W")]
    pub w: f64,
    pub var: f64,
    pub e_grad: f64,
    /// Only set on the main branch.
    pub epsilon: Option<f64>,
    pub t: Option<f64>,
    pub theta: Option<f64>,
    pub c_log: f64,
    pub steps: Vec<TraceStep>,
    /// `C` reached by the branch.
    pub implied_constant: f64,
    pub pass: bool,
}

impl ProofTrace {
    pub fn failed_steps(&self) -> impl Iterator<Item = &TraceStep> {
        self.steps.iter().filter(|s| !s.pass)
    }
}

fn log_cap() -> f64 {
    (1.0 + RATIO_THRESHOLD * E).ln()
}

/// Steps from the local isoperimetric bound at `t = inf` down to
/// `E|grad f| >= K1 Var sqrt(log(e/Var))`. Returns `K1`.
fn talagrand_chain(
    a: f64,
    q: &Quantities,
    r: f64,
    c_log: f64,
    tol: Tolerance,
    steps: &mut Vec<TraceStep>,
) -> f64 {
    let profile = gaussian_profile(a.clamp(0.0, 1.0)).expect("clamped");
    let shape = log_shape(a);
    let log_var = (E / q.var).ln();
    let k1 = c_log / (4.0 * SQRT_2 * r);
    steps.push(TraceStep::new(
        "isoperimetric",
        profile,
        Relation::Le,
        2.0 * SQRT_2 * r * (q.e_grad / 2.0),
        tol,
    ));
    steps.push(TraceStep::new(
        "profile_log_lower",
        c_log * shape,
        Relation::Le,
        profile,
        tol,
    ));
    steps.push(TraceStep::new(
        "log_shape_vs_variance",
        shape,
        Relation::Ge,
        q.var / 4.0 * log_var.sqrt(),
        tol,
    ));
    steps.push(TraceStep::new(
        "talagrand_logvar",
        q.e_grad,
        Relation::Ge,
        k1 * q.var * log_var.sqrt(),
        tol,
    ));
    k1
}

/// Constant the case analysis yields for `law` under `m`: the smallest branch
/// constant for the Eldan–Gross bound, the isoperimetric one for the
/// log-variance bound.
pub fn chain_constant(law: Law, m: &BiasedMeasure) -> Result<f64> {
    let r = m.max_side();
    let k1 = log_profile_constant().value / (4.0 * SQRT_2 * r);
    match law {
        Law::TalagrandLogvar => Ok(k1),
        Law::EldanGross => Ok([
            1.0 / (2.0 * r * PI.sqrt() * log_cap().sqrt()),
            k1 / SQRT_2,
            k1 / log_cap().sqrt(),
            numerical_fact_bound() / (2.0 * SQRT_2 * r * PI.sqrt()),
        ]
        .into_iter()
        .fold(f64::INFINITY, f64::min)),
        other => Err(Error::UnknownLaw(format!("{other} has no chain constant"))),
    }
}

/// Replays the branch of the case analysis selected by `(Var, W)`.
///
/// Failed steps are recorded, not raised; only `Var = 0` is an error.
pub fn proof_chain_trace(
    f: &BooleanFunction,
    m: &BiasedMeasure,
    tol: Tolerance,
) -> Result<ProofTrace> {
    let q = Quantities::of(f, m);
    if q.var <= 0.0 {
        return Err(Error::Degenerate);
    }
    let a = statistics(f, m).a;
    let r = m.max_side();
    let c_log = log_profile_constant().value;
    let unit = q.eldan_gross_unit();
    let branch = Branch::select(q.var, q.w);
    let mut steps = Vec::new();
    let (mut epsilon, mut t_main, mut theta) = (None, None, None);

    let constant = match branch {
        Branch::WLarge => {
            steps.push(TraceStep::new(
                "poincare",
                q.var,
                Relation::Le,
                2.0 * r * PI.sqrt() * q.e_grad,
                tol,
            ));
            steps.push(TraceStep::new(
                "log_cap",
                (1.0 + E / q.w).ln(),
                Relation::Le,
                log_cap(),
                tol,
            ));
            1.0 / (2.0 * r * PI.sqrt() * log_cap().sqrt())
        }
        Branch::VarBelowSqrtW => {
            let k1 = talagrand_chain(a, &q, r, c_log, tol, &mut steps);
            let half_log = 1.0 + 0.5 * (1.0 / q.w).ln();
            steps.push(TraceStep::new(
                "var_below_sqrt_w",
                (E / q.var).ln(),
                Relation::Ge,
                half_log,
                tol,
            ));
            steps.push(TraceStep::new(
                "small_w_log",
                half_log,
                Relation::Ge,
                0.5 * (1.0 + E / q.w).ln(),
                tol,
            ));
            k1 / SQRT_2
        }
        Branch::VarBelow100W => {
            let k1 = talagrand_chain(a, &q, r, c_log, tol, &mut steps);
            let shifted = (E / (RATIO_THRESHOLD * q.w)).ln();
            steps.push(TraceStep::new(
                "var_below_100w",
                (E / q.var).ln(),
                Relation::Ge,
                shifted,
                tol,
            ));
            steps.push(TraceStep::new(
                "log_ratio",
                shifted,
                Relation::Ge,
                (1.0 + E / q.w).ln() / log_cap(),
                tol,
            ));
            k1 / log_cap().sqrt()
        }
        Branch::Main => {
            let eps = 1.0 / (q.var / q.w).ln();
            let t = -(-eps).ln_1p() / (2.0 * m.k());
            let np = NoiseParams::new(t, *m)?;
            let th = np.theta();
            epsilon = Some(eps);
            t_main = Some(t);
            theta = Some(th);

            steps.push(TraceStep::new(
                "epsilon_range",
                eps,
                Relation::Le,
                1.0 / RATIO_THRESHOLD.ln(),
                tol,
            ));
            steps.push(TraceStep::new(
                "theta_from_epsilon",
                th,
                Relation::Eq,
                eps / (2.0 - eps),
                tol,
            ));
            let var_t = apply_noise(&f.to_real(), &np).variance(m);
            let decay = q.w.powf(th) * q.var.powf(1.0 - th);
            steps.push(TraceStep::new(
                "variance_decay",
                var_t,
                Relation::Le,
                decay,
                tol,
            ));
            let denom = 2.0 * r * (PI * eps).sqrt();
            steps.push(TraceStep::new(
                "variance_drop",
                q.var - var_t,
                Relation::Le,
                denom * q.e_grad,
                tol,
            ));
            steps.push(TraceStep::new(
                "composite",
                q.e_grad,
                Relation::Ge,
                (q.var - decay) / denom,
                tol,
            ));
            let lhs = (1.0 - (q.w / q.var).powf(th)) / eps.sqrt();
            let closed = -(1.0 / (eps - 2.0)).exp_m1() / eps.sqrt();
            steps.push(TraceStep::new(
                "substitution",
                lhs,
                Relation::Eq,
                closed,
                tol,
            ));
            let c0 = numerical_fact_bound();
            steps.push(TraceStep::new(
                "numerical_fact",
                closed,
                Relation::Ge,
                c0 * (1.0 + 1.0 / eps).sqrt(),
                tol,
            ));
            let half = (1.0 + 0.5 * (1.0 / q.w).ln()).sqrt();
            steps.push(TraceStep::new(
                "var_above_sqrt_w",
                (1.0 + (q.var / q.w).ln()).sqrt(),
                Relation::Ge,
                half,
                tol,
            ));
            steps.push(TraceStep::new(
                "small_w_log",
                half,
                Relation::Ge,
                (1.0 + E / q.w).ln().sqrt() / SQRT_2,
                tol,
            ));
            c0 / (2.0 * SQRT_2 * r * PI.sqrt())
        }
    };
    steps.push(TraceStep::new(
        "conclusion",
        q.e_grad,
        Relation::Ge,
        constant * unit,
        tol,
    ));
    let pass = steps.iter().all(|s| s.pass);
    Ok(ProofTrace {
        n: f.n(),
        p: m.p(),
        witness_hex: f.to_string(),
        branch,
        w: q.w,
        var: q.var,
        e_grad: q.e_grad,
        epsilon,
        t: t_main,
        theta,
        c_log,
        steps,
        implied_constant: constant,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inequalities::{search_extremal, SearchSpace};

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn small_examples_take_w_large() {
        let half = BiasedMeasure::uniform();
        let parity = BooleanFunction::parity(2).unwrap();
        let tr = proof_chain_trace(&parity, &half, tol()).unwrap();
        assert_eq!(tr.branch, Branch::WLarge);
        assert!((tr.w - 2.0).abs() < 1e-15);
        assert!(tr.pass);

        let dict = BooleanFunction::dictator(1, 0).unwrap();
        let tr = proof_chain_trace(&dict, &half, tol()).unwrap();
        assert_eq!(tr.branch, Branch::WLarge);
        assert!((tr.w - 1.0).abs() < 1e-15);

        let single: BooleanFunction = "n:2 hex:8".parse().unwrap();
        let tr = proof_chain_trace(&single, &half, tol()).unwrap();
        assert_eq!(tr.branch, Branch::WLarge);
        assert!((tr.w - 0.5).abs() < 1e-15);
        assert!(tr.epsilon.is_none());
    }

    #[test]
    fn chain_constant_bounds_every_branch() {
        let half = BiasedMeasure::uniform();
        let c = chain_constant(Law::EldanGross, &half).unwrap();
        assert!(c > 0.0);
        for t in 1..255u64 {
            let f = BooleanFunction::from_u64(3, t).unwrap();
            let tr = proof_chain_trace(&f, &half, tol()).unwrap();
            assert!(tr.implied_constant >= c);
        }
        assert!(chain_constant(Law::VarianceDrop, &half).is_err());
    }

    #[test]
    fn constant_is_rejected() {
        let one = BooleanFunction::constant(2, true).unwrap();
        assert_eq!(
            proof_chain_trace(&one, &BiasedMeasure::uniform(), tol()),
            Err(Error::Degenerate)
        );
    }

    #[test]
    fn branch_partition() {
        assert_eq!(Branch::select(0.5, 0.01), Branch::WLarge);
        assert_eq!(Branch::select(0.05, 0.009), Branch::VarBelowSqrtW);
        assert_eq!(Branch::select(0.2, 0.009), Branch::VarBelow100W);
        assert_eq!(Branch::select(0.95, 0.009), Branch::Main);
        assert_eq!(Branch::select(0.5, 1e-4), Branch::Main);
    }

    #[test]
    fn exhaustive_small_cube_passes() {
        let half = BiasedMeasure::uniform();
        for n in 1..=3 {
            for t in 1..(1u64 << (1 << n)) - 1 {
                let f = BooleanFunction::from_u64(n, t).unwrap();
                let tr = proof_chain_trace(&f, &half, tol()).unwrap();
                assert!(tr.pass, "{f}: {:?}", tr.failed_steps().collect::<Vec<_>>());
                assert!(tr.steps.iter().all(|s| s.slack >= -1e-9));
            }
        }
    }

    #[test]
    fn talagrand_branches_pass_under_bias() {
        // every branch except the main one at moderate bias
        let mut seen = Vec::new();
        for p in [0.05, 0.1, 0.2] {
            let m = BiasedMeasure::new(p).unwrap();
            for t in 1..u16::MAX as u64 {
                let f = BooleanFunction::from_u64(4, t).unwrap();
                let tr = proof_chain_trace(&f, &m, tol()).unwrap();
                if tr.branch != Branch::Main {
                    assert!(
                        tr.pass,
                        "{f} p={p}: {:?}",
                        tr.failed_steps().collect::<Vec<_>>()
                    );
                }
                if !seen.contains(&tr.branch) {
                    seen.push(tr.branch);
                }
            }
        }
        assert!(seen.contains(&Branch::VarBelowSqrtW));
        assert!(seen.contains(&Branch::VarBelow100W));
    }

    #[test]
    fn main_branch_witness_at_strong_bias() {
        // the main branch needs W < 1/100 with Var >= 100 W; at n = 4 that
        // only happens far from p = 1/2
        let m = BiasedMeasure::new(0.02).unwrap();
        let f = BooleanFunction::from_u64(4, 0xfee8).unwrap();
        let tr = proof_chain_trace(&f, &m, tol()).unwrap();
        assert_eq!(tr.branch, Branch::Main);
        let eps = tr.epsilon.unwrap();
        assert!(eps > 0.0 && eps < 1.0);
        let theta = tr.theta.unwrap();
        assert!((theta - eps / (2.0 - eps)).abs() < 1e-12);
        let failed: Vec<_> = tr.failed_steps().map(|s| s.name.as_str()).collect();
        assert_eq!(failed, ["variance_decay"]);

        // the search agrees this witness is reachable
        let r = search_extremal(4, &m, Law::EldanGross, SearchSpace::Exhaustive, true).unwrap();
        assert!(r.min_ratio > 0.0);
    }
}
