//! L^r norms, the hypercontractive time on the biased cube, and the two-point
//! log-Sobolev inequality with the `psi` / `phi` calculus that proves it.

use serde::Serialize;

use crate::cube::{BiasedMeasure, RealFunction};
use crate::error::{Error, Result};
use crate::report::{InequalityReport, Law, Tolerance};
use crate::semigroup::{apply_noise, NoiseParams};

/// `(E|f|^r)^{1/r}` under `m`.
pub fn lp_norm(f: &RealFunction, m: &BiasedMeasure, r: f64) -> Result<f64> {
    if !(r >= 1.0 && r.is_finite()) {
        return Err(Error::Exponent {
            got: r,
            expected: "r >= 1",
        });
    }
    let pow: Vec<f64> = f.values().iter().map(|v| v.abs().powf(r)).collect();
    Ok(m.expect(f.n(), &pow).powf(1.0 / r))
}

fn check_open_exponent(r: f64) -> Result<()> {
    if r > 1.0 && r < 2.0 {
        Ok(())
    } else {
        Err(Error::Exponent {
            got: r,
            expected: "1 < r < 2",
        })
    }
}

/// `t*(r) = 2pq log(1/(r-1))`.
pub fn hypercontractive_time(r: f64, m: &BiasedMeasure) -> Result<f64> {
    check_open_exponent(r)?;
    Ok(2.0 * m.p() * m.q() * (1.0 / (r - 1.0)).ln())
}

fn l2_after(f: &RealFunction, m: &BiasedMeasure, t: f64) -> Result<f64> {
    let np = NoiseParams::new(t, *m)?;
    lp_norm(&apply_noise(f, &np), m, 2.0)
}

/// `||P_t f||_2 <= ||f||_r` at `t = t*(r)`, and again at `2 t*(r)`.
pub fn verify_hypercontractivity(
    f: &RealFunction,
    m: &BiasedMeasure,
    r: f64,
    tol: Tolerance,
) -> Result<InequalityReport> {
    let t = hypercontractive_time(r, m)?;
    let rhs = lp_norm(f, m, r)?;
    let lhs = l2_after(f, m, t)?;
    let lhs_double = l2_after(f, m, 2.0 * t)?;
    Ok(
        InequalityReport::at_most(Law::Hypercontractivity, f.n(), lhs, rhs, tol)
            .with_p(m.p())
            .with_param("r", r)
            .with_param("t", t)
            .require("lhs_at_2t", tol.at_most(lhs_double, rhs), lhs_double),
    )
}

/// Smallest `t` with `||P_t f||_2 <= ||f||_r`, by bisection to relative width `1e-10`.
///
/// `||P_t f||_2` is nonincreasing in `t`, so the admissible set is a half-line.
/// Returns `None` if the inequality still fails at `t = 1e4`.
pub fn minimal_hypercontractive_time(
    f: &RealFunction,
    m: &BiasedMeasure,
    r: f64,
) -> Result<Option<f64>> {
    check_open_exponent(r)?;
    let target = lp_norm(f, m, r)?;
    let holds = |t: f64| -> Result<bool> { Ok(l2_after(f, m, t)? <= target) };
    if holds(0.0)? {
        return Ok(Some(0.0));
    }
    let mut hi = 1e-3;
    while !holds(hi)? {
        hi *= 2.0;
        if hi > 1e4 {
            return Ok(None);
        }
    }
    let mut lo = 0.0;
    while hi - lo > 1e-10 * hi {
        let mid = 0.5 * (lo + hi);
        if holds(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(hi))
}

/// Outcome of probing the hypercontractive time over a family of functions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimeProbe {
    pub r: f64,
    pub p: f64,
    pub t_star: f64,
    /// Largest minimal time over the family.
    pub t_empirical: f64,
    /// Index of the function attaining `t_empirical`.
    pub worst: usize,
    pub sufficient: bool,
}

pub fn probe_hypercontractive_time(
    family: &[RealFunction],
    m: &BiasedMeasure,
    r: f64,
) -> Result<TimeProbe> {
    let t_star = hypercontractive_time(r, m)?;
    let mut t_empirical = 0.0;
    let mut worst = 0;
    for (i, f) in family.iter().enumerate() {
        let t = minimal_hypercontractive_time(f, m, r)?.unwrap_or(f64::INFINITY);
        if t > t_empirical {
            t_empirical = t;
            worst = i;
        }
    }
    Ok(TimeProbe {
        r,
        p: m.p(),
        t_star,
        t_empirical,
        worst,
        sufficient: t_empirical <= t_star * (1.0 + 1e-9),
    })
}

/// `1 + s x` on one coordinate for `s` on a symmetric grid in `[-1, 1]`, skipping 0.
pub fn two_point_family(steps: usize) -> Vec<RealFunction> {
    (0..=steps)
        .map(|k| -1.0 + 2.0 * k as f64 / steps as f64)
        .filter(|s| *s != 0.0)
        .map(|s| RealFunction::from_raw(1, vec![1.0 - s, 1.0 + s]))
        .collect()
}

/// `x log x` with `0 log 0 = 0`.
fn xlogx(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// One instance of the two-point log-Sobolev inequality, tensorised over coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LsiInstance {
    pub n: usize,
    pub p: f64,
    /// `E[f^2 log f^2] - E[f^2] log E[f^2]`.
    pub entropy: f64,
    /// `-sum_j E[f L_j f]` with `L_j f = E_{x_j} f - f`.
    pub dirichlet: f64,
    /// `dirichlet / (2pq)`.
    pub dirichlet_bound: f64,
    pub deficit: f64,
    /// `n > 1`: the per-coordinate sum, not the one-dimensional statement.
    pub extended: bool,
}

pub fn lsi_check(f: &RealFunction, m: &BiasedMeasure) -> Result<LsiInstance> {
    if let Some((x, &v)) = f.values().iter().enumerate().find(|(_, v)| **v < 0.0) {
        return Err(Error::Negative { x, value: v });
    }
    let n = f.n();
    let sq: Vec<f64> = f.values().iter().map(|v| v * v).collect();
    let e_sq = m.expect(n, &sq);
    let ent_terms: Vec<f64> = sq.iter().map(|&v| xlogx(v)).collect();
    let entropy = m.expect(n, &ent_terms) - xlogx(e_sq);
    let dirichlet: f64 = (0..n)
        .map(|j| {
            let avg = f.average_out(j, m);
            let terms: Vec<f64> = f
                .values()
                .iter()
                .zip(avg.values())
                .map(|(v, a)| v * (v - a))
                .collect();
            m.expect(n, &terms)
        })
        .sum();
    let dirichlet_bound = dirichlet / (2.0 * m.p() * m.q());
    Ok(LsiInstance {
        n,
        p: m.p(),
        entropy,
        dirichlet,
        dirichlet_bound,
        deficit: dirichlet_bound - entropy,
        extended: n > 1,
    })
}

pub fn lsi_report(f: &RealFunction, m: &BiasedMeasure, tol: Tolerance) -> Result<InequalityReport> {
    let inst = lsi_check(f, m)?;
    let mut report = InequalityReport::at_most(
        Law::LogSobolev,
        inst.n,
        inst.entropy,
        inst.dirichlet_bound,
        tol,
    )
    .with_p(m.p());
    if inst.extended {
        report = report.with_note("tensorised: sum of one-coordinate Dirichlet forms");
    }
    Ok(report)
}

/// The functions `psi(s)` and `phi(p)` from the reduction of the two-point
/// log-Sobolev inequality to `f = 1 + s x`, with their derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AppendixValues {
    pub s: f64,
    pub p: f64,
    pub psi: f64,
    pub psi1: f64,
    pub psi2: f64,
    pub phi_of_p: f64,
    pub phi1_of_p: f64,
    pub phi2_of_p: f64,
}

fn mix(s: f64, p: f64) -> f64 {
    p * (1.0 + s) * (1.0 + s) + (1.0 - p) * (1.0 - s) * (1.0 - s)
}

/// `4 a log b` with the `a = 0` case taken as 0 even when `b = 0`.
fn scaled_log(a: f64, b: f64) -> f64 {
    if a == 0.0 {
        0.0
    } else {
        4.0 * a * b.ln()
    }
}

/// `psi(s) = p(1+s)^2 log(1+s)^2 + q(1-s)^2 log(1-s)^2 - D log D - 2 s^2`,
/// `D = p(1+s)^2 + q(1-s)^2`.
pub fn psi(s: f64, p: f64) -> f64 {
    let q = 1.0 - p;
    let d = mix(s, p);
    p * xlogx((1.0 + s) * (1.0 + s)) + q * xlogx((1.0 - s) * (1.0 - s)) - xlogx(d) - 2.0 * s * s
}

/// `psi'(s) = 4p(1+s) log(1+s) - 4q(1-s) log(1-s) - 2[p(1+s) - q(1-s)] log D - 4s`.
pub fn psi1(s: f64, p: f64) -> f64 {
    let q = 1.0 - p;
    let d = mix(s, p);
    4.0 * p * xlogx(1.0 + s)
        - 4.0 * q * xlogx(1.0 - s)
        - 2.0 * (p * (1.0 + s) - q * (1.0 - s)) * d.ln()
        - 4.0 * s
}

/// `psi''(s) = phi(p) - 4(s + p - q)^2 / D`; `-inf` at `s = +-1` unless the
/// matching weight vanishes.
pub fn psi2(s: f64, p: f64) -> f64 {
    let q = 1.0 - p;
    let d = mix(s, p);
    phi(s, p) - 4.0 * (s + p - q) * (s + p - q) / d
}

/// `phi(p) = 4p log(1+s) + 4q log(1-s) - 2 log D`, defined for `p` in `[0, 1]`.
pub fn phi(s: f64, p: f64) -> f64 {
    let q = 1.0 - p;
    scaled_log(p, 1.0 + s) + scaled_log(q, 1.0 - s) - 2.0 * mix(s, p).ln()
}

/// `phi'(p) = 4 log(1+s) - 4 log(1-s) - 8s / D`.
pub fn phi1(s: f64, p: f64) -> f64 {
    4.0 * (1.0 + s).ln() - 4.0 * (1.0 - s).ln() - 8.0 * s / mix(s, p)
}

/// `phi''(p) = 32 s^2 / D^2`.
pub fn phi2(s: f64, p: f64) -> f64 {
    let d = mix(s, p);
    32.0 * s * s / (d * d)
}

pub fn appendix_calculus(s: f64, p: f64) -> Result<AppendixValues> {
    if !(-1.0..=1.0).contains(&s) {
        return Err(Error::Exponent {
            got: s,
            expected: "-1 <= s <= 1",
        });
    }
    BiasedMeasure::new(p)?;
    Ok(AppendixValues {
        s,
        p,
        psi: psi(s, p),
        psi1: psi1(s, p),
        psi2: psi2(s, p),
        phi_of_p: phi(s, p),
        phi1_of_p: phi1(s, p),
        phi2_of_p: phi2(s, p),
    })
}

/// Extremes of the appendix quantities over an `s` grid times a `p` grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AppendixSweep {
    pub points: usize,
    pub max_psi: f64,
    pub max_psi2: f64,
    pub min_phi2: f64,
    pub max_phi: f64,
}

/// `s_steps + 1` evenly spaced `s` in `[-1, 1]` against every `p` in `p_grid`.
pub fn appendix_sweep(s_steps: usize, p_grid: &[f64]) -> Result<AppendixSweep> {
    let mut out = AppendixSweep {
        points: 0,
        max_psi: f64::NEG_INFINITY,
        max_psi2: f64::NEG_INFINITY,
        min_phi2: f64::INFINITY,
        max_phi: f64::NEG_INFINITY,
    };
    for k in 0..=s_steps {
        let s = -1.0 + 2.0 * k as f64 / s_steps as f64;
        for &p in p_grid {
            let v = appendix_calculus(s, p)?;
            out.points += 1;
            out.max_psi = out.max_psi.max(v.psi);
            out.max_psi2 = out.max_psi2.max(v.psi2);
            out.min_phi2 = out.min_phi2.min(v.phi2_of_p);
            out.max_phi = out.max_phi.max(v.phi_of_p);
        }
    }
    Ok(out)
}

/// Sweep bounds as reports: `max psi <= cap`, `max psi'' <= cap`, `-min phi'' <= 0`.
pub fn appendix_reports(sweep: &AppendixSweep, cap: f64, tol: Tolerance) -> Vec<InequalityReport> {
    let points = sweep.points as f64;
    [
        ("max_psi", sweep.max_psi, cap),
        ("max_psi2", sweep.max_psi2, cap),
        ("neg_min_phi2", -sweep.min_phi2, 0.0),
    ]
    .into_iter()
    .map(|(name, lhs, rhs)| {
        InequalityReport::at_most(Law::Appendix, 1, lhs, rhs, tol)
            .with_param("points", points)
            .with_note(name)
    })
    .collect()
}

/// `{0.05, 0.10, ..., 0.95}`.
pub fn nineteen_point_bias_grid() -> Vec<f64> {
    (1..=19).map(|k| k as f64 * 0.05).collect()
}
