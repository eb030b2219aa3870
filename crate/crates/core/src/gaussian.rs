//! Coordinate halfspaces on Gauss space under the Ornstein–Uhlenbeck semigroup.
//!
//! `E|grad f|` of the ±1 halfspace is taken as the limit `2 phi(a)` of the
//! smooth approximants `tanh((a - x)/eps)`; [`smoothed_gradient_oracle`]
//! computes the approximants by quadrature.

use std::f64::consts::{E, PI};
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::normal;
use crate::report::{InequalityReport, Law, Tolerance};

pub const HERMITE_NODES: usize = 201;
pub const DEFAULT_GRID: usize = 1201;
pub const DEFAULT_RANGE: f64 = 6.0;

/// `+1` on `{x_coord < a}`, `-1` elsewhere. `coord` is 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Halfspace {
    pub n: usize,
    pub coord: usize,
    pub a: f64,
}

impl Halfspace {
    pub fn new(n: usize, coord: usize, a: f64) -> Result<Self> {
        if coord >= n {
            return Err(Error::Coordinate { coord, n });
        }
        if !a.is_finite() {
            return Err(Error::Threshold(a));
        }
        Ok(Self { n, coord, a })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HalfspaceStats {
    pub variance: f64,
    pub e_grad: f64,
    pub influences: Vec<f64>,
    #[serde(rename = "W")]
    pub w: f64,
}

pub fn halfspace_stats(h: &Halfspace) -> HalfspaceStats {
    let variance = 4.0 * normal::cdf(h.a) * normal::cdf(-h.a);
    let mut influences = vec![0.0; h.n];
    influences[h.coord] = variance;
    HalfspaceStats {
        variance,
        e_grad: 2.0 * normal::pdf(h.a),
        influences,
        w: variance * variance,
    }
}

const PIM4: f64 = 0.751_125_544_464_942_5;

/// Orthonormal Hermite polynomial of degree `n` at `z` and its derivative.
fn hermite(n: usize, z: f64) -> (f64, f64) {
    let mut p1 = PIM4;
    let mut p2 = 0.0;
    for j in 1..=n {
        let p3 = p2;
        p2 = p1;
        let jf = j as f64;
        p1 = z * (2.0 / jf).sqrt() * p2 - ((jf - 1.0) / jf).sqrt() * p3;
    }
    (p1, (2.0 * n as f64).sqrt() * p2)
}

fn polish(n: usize, mut lo: f64, mut hi: f64) -> f64 {
    let sign_lo = hermite(n, lo).0.signum();
    let mut z = 0.5 * (lo + hi);
    for _ in 0..200 {
        let (v, d) = hermite(n, z);
        if v == 0.0 {
            return z;
        }
        if v.signum() == sign_lo {
            lo = z;
        } else {
            hi = z;
        }
        let newton = z - v / d;
        let next = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - z).abs() <= 1e-15 * z.abs().max(1.0) {
            return next;
        }
        z = next;
    }
    z
}

/// Physicists' Gauss–Hermite rule: nodes and `w_i e^{x_i^2}`, so that
/// `int g(u) du ~ sum_i w_i e^{x_i^2} g(x_i)`.
#[derive(Debug, Clone)]
pub struct HermiteRule {
    pub nodes: Vec<f64>,
    pub scaled_weights: Vec<f64>,
}

impl HermiteRule {
    /// Roots are bracketed by sign changes on a fine grid of `[0, sqrt(2n+1) + 1]`
    /// and polished by safeguarded Newton steps.
    pub fn new(count: usize) -> Self {
        assert!(count >= 1);
        let half = count / 2;
        let top = (2.0 * count as f64 + 1.0).sqrt() + 1.0;
        let cells = 64 * count.max(8);
        let h = top / cells as f64;
        let mut positive = Vec::with_capacity(half);
        let mut lo = h * 0.5;
        let mut f_lo = hermite(count, lo).0;
        for k in 1..=cells {
            let hi = h * (k as f64 + 0.5);
            let f_hi = hermite(count, hi).0;
            if f_lo == 0.0 || f_lo.signum() != f_hi.signum() {
                positive.push(polish(count, lo, hi));
            }
            lo = hi;
            f_lo = f_hi;
        }
        assert_eq!(positive.len(), half, "root bracketing failed");
        let mut nodes = Vec::with_capacity(count);
        nodes.extend(positive.iter().rev().copied());
        if count % 2 == 1 {
            nodes.push(0.0);
        }
        nodes.extend(positive.iter().map(|z| -z));
        let scaled_weights = nodes
            .iter()
            .map(|&z| {
                let pp = hermite(count, z).1;
                // w = 2 / pp^2, combined with e^{z^2} in log space
                (2f64.ln() - 2.0 * pp.abs().ln() + z * z).exp()
            })
            .collect();
        Self {
            nodes,
            scaled_weights,
        }
    }

    pub fn integrate(&self, g: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.scaled_weights)
            .map(|(&x, &w)| w * g(x))
            .sum()
    }
}

fn hermite_rule() -> &'static HermiteRule {
    static RULE: OnceLock<HermiteRule> = OnceLock::new();
    RULE.get_or_init(|| HermiteRule::new(HERMITE_NODES))
}

fn sech2(u: f64) -> f64 {
    let c = (-2.0 * u.abs()).exp();
    4.0 * c / ((1.0 + c) * (1.0 + c))
}

/// Integrand after `x = a + eps u`: `|f_eps'| phi dx = sech^2(u) phi(a + eps u) du`.
fn bump(h: &Halfspace, eps: f64) -> impl Fn(f64) -> f64 + '_ {
    move |u| sech2(u) * normal::pdf(h.a + eps * u)
}

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps.is_finite() {
        Ok(())
    } else {
        Err(Error::Smoothing(eps))
    }
}

/// `E|grad f_eps|` for `f_eps = tanh((a - x_coord)/eps)` by Gauss–Hermite
/// quadrature in the scaled variable.
pub fn smoothed_gradient_oracle(h: &Halfspace, eps: f64) -> Result<f64> {
    check_eps(eps)?;
    Ok(hermite_rule().integrate(bump(h, eps)))
}

/// Same integral by the trapezoid rule on `u` in `[-40, 40]`, halving the
/// step until two passes agree to `1e-14`.
pub fn trapezoid_gradient(h: &Halfspace, eps: f64) -> Result<f64> {
    check_eps(eps)?;
    let g = bump(h, eps);
    let (lo, hi) = (-40.0, 40.0);
    let mut steps = 64usize;
    let mut step = (hi - lo) / steps as f64;
    let mut sum = 0.5 * (g(lo) + g(hi)) + (1..steps).map(|i| g(lo + i as f64 * step)).sum::<f64>();
    let mut value = sum * step;
    for _ in 0..20 {
        // add midpoints of the current panels
        sum += (0..steps)
            .map(|i| g(lo + (i as f64 + 0.5) * step))
            .sum::<f64>();
        steps *= 2;
        step *= 0.5;
        let next = sum * step;
        if (next - value).abs() <= 1e-14 * next.abs().max(1e-300) {
            return Ok(next);
        }
        value = next;
    }
    Ok(value)
}

/// Evenly spaced thresholds on `[-range, range]`.
pub fn threshold_grid(count: usize, range: f64) -> Result<Vec<f64>> {
    if count < 2 {
        return Err(Error::Grid { got: count, min: 2 });
    }
    Ok((0..count)
        .map(|i| -range + 2.0 * range * i as f64 / (count - 1) as f64)
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GaussSweep {
    pub reports: Vec<InequalityReport>,
    pub min_ratio_talagrand: f64,
    pub min_ratio_eldan_gross: f64,
    /// Constants the lower-bound reports were checked against.
    pub c_talagrand: f64,
    pub c_eldan_gross: f64,
    /// `max |Var - sqrt(pi/2) E|grad f||` over thresholds with `|a| <= 1e-12`.
    pub poincare_gap_at_zero: Option<f64>,
}

impl GaussSweep {
    pub fn violations(&self) -> usize {
        self.reports.iter().filter(|r| !r.pass).count()
    }
}

/// Checks on the one-coordinate halfspace at each threshold:
/// `E|grad f| >= C3 Var sqrt(log(e/Var))`,
/// `E|grad f| >= C4 Var sqrt(log(1 + e/W))`, and `Var <= sqrt(pi/2) E|grad f|`.
///
/// Missing constants default to the grid minima of the ratios.
pub fn verify_ctns(
    thresholds: &[f64],
    c3: Option<f64>,
    c4: Option<f64>,
    tol: Tolerance,
) -> Result<GaussSweep> {
    let stats: Vec<(f64, HalfspaceStats)> = thresholds
        .par_iter()
        .map(|&a| Ok((a, halfspace_stats(&Halfspace::new(1, 0, a)?))))
        .collect::<Result<_>>()?;
    let units: Vec<(f64, f64)> = stats
        .iter()
        .map(|(_, s)| {
            let talagrand = s.variance * (E / s.variance).ln().sqrt();
            let eldan_gross = s.variance * (1.0 + E / s.w).ln().sqrt();
            (talagrand, eldan_gross)
        })
        .collect();
    let min_ratio = |pick: fn(&(f64, f64)) -> f64| {
        stats
            .iter()
            .zip(&units)
            .filter(|(_, u)| pick(u) > 0.0)
            .map(|((_, s), u)| s.e_grad / pick(u))
            .fold(f64::INFINITY, f64::min)
    };
    let min_t = min_ratio(|u| u.0);
    let min_eg = min_ratio(|u| u.1);
    let c_talagrand = c3.unwrap_or(min_t);
    let c_eldan_gross = c4.unwrap_or(min_eg);
    let poincare = (PI / 2.0).sqrt();
    let mut reports = Vec::with_capacity(3 * stats.len());
    let mut gap_at_zero: Option<f64> = None;
    for ((a, s), (ut, ue)) in stats.iter().zip(&units) {
        reports.push(
            InequalityReport::at_least(Law::GaussTalagrand, 1, s.e_grad, *ut, c_talagrand, tol)
                .with_param("a", *a),
        );
        reports.push(
            InequalityReport::at_least(Law::GaussEldanGross, 1, s.e_grad, *ue, c_eldan_gross, tol)
                .with_param("a", *a)
                .with_param("W", s.w),
        );
        let rhs = poincare * s.e_grad;
        reports.push(
            InequalityReport::at_most(Law::GaussPoincare, 1, s.variance, rhs, tol)
                .with_param("a", *a),
        );
        if a.abs() <= 1e-12 {
            let gap = (s.variance - rhs).abs();
            gap_at_zero = Some(gap_at_zero.map_or(gap, |g| g.max(gap)));
        }
    }
    Ok(GaussSweep {
        reports,
        min_ratio_talagrand: min_t,
        min_ratio_eldan_gross: min_eg,
        c_talagrand,
        c_eldan_gross,
        poincare_gap_at_zero: gap_at_zero,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half(a: f64) -> Halfspace {
        Halfspace::new(3, 1, a).unwrap()
    }

    #[test]
    fn halfspace_examples() {
        let s = halfspace_stats(&half(0.0));
        assert!((s.variance - 1.0).abs() < 1e-15);
        assert!((s.e_grad - 0.79788).abs() < 1e-5);
        assert_eq!(s.influences, vec![0.0, 1.0, 0.0]);

        let s = halfspace_stats(&half(1.0));
        assert!((s.variance - 0.53394).abs() < 1e-5);
        assert!((s.e_grad - 0.48394).abs() < 1e-5);
        assert!((s.w - s.variance * s.variance).abs() < 1e-16);
        assert_eq!(s.influences[0], 0.0);
        assert_eq!(s.influences[2], 0.0);

        let s = halfspace_stats(&half(40.0));
        assert!(s.variance < 1e-300 && s.e_grad < 1e-300 && s.w == 0.0);
    }

    #[test]
    fn halfspace_validation() {
        assert!(matches!(
            Halfspace::new(2, 2, 0.0),
            Err(Error::Coordinate { .. })
        ));
        assert!(matches!(
            Halfspace::new(2, 0, f64::NAN),
            Err(Error::Threshold(_))
        ));
        assert!(Halfspace::new(2, 0, f64::INFINITY).is_err());
    }

    #[test]
    fn hermite_rule_integrates_gaussians() {
        let rule = HermiteRule::new(HERMITE_NODES);
        let total = rule.integrate(|u| (-u * u).exp());
        assert!((total - PI.sqrt()).abs() < 1e-12, "{total}");
        let second = rule.integrate(|u| u * u * (-u * u).exp());
        assert!((second - PI.sqrt() / 2.0).abs() < 1e-12);
        assert!(rule.nodes.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn smoothed_gradient_examples() {
        for (a, target) in [(0.0, 0.79788), (2.0, 0.10799)] {
            let v = smoothed_gradient_oracle(&half(a), 1e-3).unwrap();
            assert!((v - target).abs() < 1e-2, "{a}: {v}");
            assert!((v - 2.0 * normal::pdf(a)).abs() < 1e-5);
        }
        let closed = 2.0 * normal::pdf(0.0);
        let coarse = (smoothed_gradient_oracle(&half(0.0), 1e-2).unwrap() - closed).abs();
        let fine = (smoothed_gradient_oracle(&half(0.0), 5e-3).unwrap() - closed).abs();
        assert!(fine < coarse);
        assert!(matches!(
            smoothed_gradient_oracle(&half(0.0), 0.0),
            Err(Error::Smoothing(_))
        ));
        assert!(smoothed_gradient_oracle(&half(0.0), -1.0).is_err());
    }

    #[test]
    fn smoothed_gradient_converges() {
        for a in [0.0, 1.0, 2.0] {
            let closed = 2.0 * normal::pdf(a);
            let errs: Vec<f64> = [1e-1, 1e-2, 1e-3]
                .iter()
                .map(|&eps| (smoothed_gradient_oracle(&half(a), eps).unwrap() - closed).abs())
                .collect();
            assert!(errs[0] > errs[1] && errs[1] > errs[2], "{a}: {errs:?}");
            assert!(errs[2] < 1e-2);
        }
    }

    #[test]
    fn quadrature_agrees_with_trapezoid() {
        for a in [-3.0, 0.0, 0.7, 2.0] {
            for eps in [1.0, 1e-1, 1e-3] {
                let gh = smoothed_gradient_oracle(&half(a), eps).unwrap();
                let tr = trapezoid_gradient(&half(a), eps).unwrap();
                assert!((gh - tr).abs() < 1e-10, "a={a} eps={eps}: {gh} vs {tr}");
            }
        }
    }

    #[test]
    fn ctns_examples() {
        let tol = Tolerance::default();
        let sweep = verify_ctns(&[0.0], Some(0.5), Some(0.5), tol).unwrap();
        let t = &sweep.reports[0];
        assert!((t.ratio.unwrap() - 0.797_884_560_802_865_4).abs() < 1e-12);
        let p = &sweep.reports[2];
        assert!((p.lhs - 1.0).abs() < 1e-15);
        assert!((p.rhs_unit - 1.0).abs() < 1e-12);
        assert!(p.pass);
        assert!(sweep.poincare_gap_at_zero.unwrap() < 1e-12);
    }

    #[test]
    fn ctns_full_grid() {
        let grid = threshold_grid(DEFAULT_GRID, DEFAULT_RANGE).unwrap();
        assert!(grid.contains(&0.0));
        let sweep = verify_ctns(&grid, None, None, Tolerance::default()).unwrap();
        assert_eq!(sweep.reports.len(), 3 * DEFAULT_GRID);
        assert_eq!(sweep.violations(), 0);
        assert!(sweep.min_ratio_talagrand > 0.0);
        assert!(sweep.min_ratio_eldan_gross > 0.0);
        assert!(sweep.poincare_gap_at_zero.unwrap() < 1e-12);
    }
}
