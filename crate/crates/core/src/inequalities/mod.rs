//! Top-level inequalities on the biased cube: the Eldan–Gross bound, the
//! Talagrand log-variance bound, and the scalar fact the proof reduces to.

mod search;
mod trace;

pub use search::{
    canonical_table, search_extremal, SearchResult, SearchSpace, SmallCube, MAX_EXHAUSTIVE_DIM,
    MAX_RANDOM_DIM,
};
pub use trace::{chain_constant, proof_chain_trace, Branch, ProofTrace, Relation, TraceStep};

use serde::Serialize;

use crate::cube::{boundary_profile, influences, statistics, BiasedMeasure, BooleanFunction};
use crate::error::{Error, Result};
use crate::report::{InequalityReport, Law, Tolerance};

/// `E|grad f|`, `Var(f)`, and `W(f) = sum_j Inf_j(f)^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Quantities {
    pub e_grad: f64,
    pub var: f64,
    pub w: f64,
}

impl Quantities {
    pub fn of(f: &BooleanFunction, m: &BiasedMeasure) -> Self {
        Self {
            e_grad: boundary_profile(f, m).e_grad,
            var: statistics(f, m).variance,
            w: influences(f, m).w,
        }
    }

    /// `Var sqrt(log(1 + e/W))`; zero when `W = 0`.
    pub fn eldan_gross_unit(&self) -> f64 {
        if self.w == 0.0 || self.var == 0.0 {
            0.0
        } else {
            self.var * (1.0 + std::f64::consts::E / self.w).ln().sqrt()
        }
    }

    /// `Var sqrt(log(e/Var))`; zero when `Var = 0`.
    pub fn talagrand_unit(&self) -> f64 {
        if self.var == 0.0 {
            0.0
        } else {
            self.var * (1.0 - self.var.ln()).sqrt()
        }
    }

    pub fn rhs_unit(&self, law: Law) -> Result<f64> {
        match law {
            Law::EldanGross => Ok(self.eldan_gross_unit()),
            Law::TalagrandLogvar => Ok(self.talagrand_unit()),
            other => Err(Error::UnknownLaw(format!("{other} is not a search law"))),
        }
    }
}

/// `E|grad f| >= C Var(f) sqrt(log(1 + e / sum_j Inf_j(f)^2))`.
pub fn verify_eldan_gross(
    f: &BooleanFunction,
    m: &BiasedMeasure,
    c: f64,
    tol: Tolerance,
) -> InequalityReport {
    let q = Quantities::of(f, m);
    InequalityReport::at_least(
        Law::EldanGross,
        f.n(),
        q.e_grad,
        q.eldan_gross_unit(),
        c,
        tol,
    )
    .with_p(m.p())
    .with_witness(f)
    .with_param("var", q.var)
    .with_param("W", q.w)
}

/// `E|grad f| >= C Var(f) sqrt(log(e / Var(f)))`.
pub fn verify_talagrand_logvar(
    f: &BooleanFunction,
    m: &BiasedMeasure,
    c: f64,
    tol: Tolerance,
) -> InequalityReport {
    let q = Quantities::of(f, m);
    InequalityReport::at_least(
        Law::TalagrandLogvar,
        f.n(),
        q.e_grad,
        q.talagrand_unit(),
        c,
        tol,
    )
    .with_p(m.p())
    .with_witness(f)
    .with_param("var", q.var)
}

/// `(1 - e^{-1/2}) / sqrt(2)`.
pub fn numerical_fact_bound() -> f64 {
    (1.0 - (-0.5f64).exp()) / std::f64::consts::SQRT_2
}

/// `(1 - e^{1/(eps - 2)}) / sqrt(1 + eps)`.
pub fn numerical_fact_fn(eps: f64) -> f64 {
    (1.0 - (1.0 / (eps - 2.0)).exp()) / (1.0 + eps).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NumericalFact {
    pub grid_size: usize,
    pub min_value: f64,
    pub arg_eps: f64,
    pub bound: f64,
    pub pass: bool,
}

/// Minimum of [`numerical_fact_fn`] over `grid_size` evenly spaced points of `[0, 1]`.
pub fn numerical_fact_min(grid_size: usize, tol: Tolerance) -> Result<NumericalFact> {
    if grid_size < 2 {
        return Err(Error::Grid {
            got: grid_size,
            min: 2,
        });
    }
    let (arg_eps, min_value) = (0..grid_size)
        .map(|i| {
            let eps = i as f64 / (grid_size - 1) as f64;
            (eps, numerical_fact_fn(eps))
        })
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("grid is nonempty");
    let bound = numerical_fact_bound();
    Ok(NumericalFact {
        grid_size,
        min_value,
        arg_eps,
        bound,
        pass: tol.at_least(min_value, bound),
    })
}

pub fn numerical_fact_report(fact: &NumericalFact, tol: Tolerance) -> InequalityReport {
    InequalityReport::at_least(Law::NumericalFact, 0, fact.min_value, fact.bound, 1.0, tol)
        .with_param("grid_size", fact.grid_size as f64)
        .with_param("arg_eps", fact.arg_eps)
}
