//! The Gaussian isoperimetric profile `I = phi o Phi^{-1}`, its elementary lower
//! bounds, and the isoperimetric inequalities on the biased cube derived from it.

use std::f64::consts::{PI, SQRT_2};
use std::sync::OnceLock;

use serde::Serialize;

use crate::cube::{boundary_profile, statistics, BiasedMeasure, BooleanFunction};
use crate::error::{Error, Result};
use crate::normal;
use crate::report::{InequalityReport, Law, Tolerance};
use crate::semigroup::{apply_noise, NoiseParams};

/// Below this the profile switches to `x sqrt(2 log(1/x))`.
const TINY: f64 = 1e-300;

/// Tolerance for `Var(f) - Var(P_t f) = 1 - E|P_t f|^2`.
pub const DROP_IDENTITY_TOL: f64 = 1e-12;

fn profile_unchecked(x: f64) -> f64 {
    let s = if x <= 0.5 { x } else { 1.0 - x };
    if s <= 0.0 {
        0.0
    } else if s < TINY {
        s * (2.0 * (1.0 / s).ln()).sqrt()
    } else {
        normal::pdf(normal::quantile(s))
    }
}

/// `I(x)` for `x` in `[0, 1]`.
pub fn gaussian_profile(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Unit { got: x });
    }
    Ok(profile_unchecked(x))
}

/// `sqrt(2/pi) (1/2 - 2 (1/2 - x)^2)`.
pub fn quadratic_lower(x: f64) -> f64 {
    (2.0 / PI).sqrt() * (0.5 - 2.0 * (0.5 - x) * (0.5 - x))
}

/// `x (1 - x) sqrt(log(1 / (x (1 - x))))`, zero at the endpoints.
pub fn log_shape(x: f64) -> f64 {
    let v = x * (1.0 - x);
    if v <= 0.0 {
        0.0
    } else {
        v * (1.0 / v).ln().sqrt()
    }
}

/// Empirical constant `C` with `I(x) >= C x(1-x) sqrt(log 1/(x(1-x)))` on `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogConstant {
    pub value: f64,
    pub argmin: f64,
    pub grid_size: usize,
}

fn log_ratio(x: f64) -> f64 {
    profile_unchecked(x) / log_shape(x)
}

/// Minimises `I(x) / (x(1-x) sqrt(log 1/(x(1-x))))` over a log-spaced grid on
/// `[1e-300, 1/2]`, then polishes the best cell by golden-section search.
pub fn calibrate_log_constant(grid_size: usize) -> Result<LogConstant> {
    if grid_size < 2 {
        return Err(Error::Grid {
            got: grid_size,
            min: 2,
        });
    }
    let (lo, hi) = (TINY.ln(), 0.5f64.ln());
    let xs: Vec<f64> = (0..grid_size)
        .map(|i| (lo + (hi - lo) * i as f64 / (grid_size - 1) as f64).exp())
        .chain(std::iter::once(0.5))
        .collect();
    let (best, _) = xs
        .iter()
        .enumerate()
        .map(|(i, &x)| (i, log_ratio(x)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("grid is nonempty");
    let mut a = xs[best.saturating_sub(1)].ln();
    let mut b = xs[(best + 1).min(xs.len() - 1)].ln();
    let g = |lx: f64| log_ratio(lx.exp().min(0.5));
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..200 {
        let c = b - phi * (b - a);
        let d = a + phi * (b - a);
        if g(c) < g(d) {
            b = d;
        } else {
            a = c;
        }
    }
    let polished = (0.5 * (a + b)).exp().min(0.5);
    let (value, argmin) = [
        (log_ratio(xs[best]), xs[best]),
        (log_ratio(polished), polished),
    ]
    .into_iter()
    .min_by(|a, b| a.0.total_cmp(&b.0))
    .unwrap();
    Ok(LogConstant {
        value,
        argmin,
        grid_size,
    })
}

/// The calibrated constant on a 4001-point grid, computed once.
pub fn log_profile_constant() -> LogConstant {
    static CELL: OnceLock<LogConstant> = OnceLock::new();
    *CELL.get_or_init(|| calibrate_log_constant(4001).expect("fixed grid size is valid"))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProfileEval {
    pub x: f64,
    pub value: f64,
    pub lower_quadratic: f64,
    pub lower_log: f64,
    /// Calibrated constant behind `lower_log` (empirical).
    pub c_log: f64,
}

pub fn profile_lower_bounds(x: f64) -> Result<ProfileEval> {
    let value = gaussian_profile(x)?;
    let c_log = log_profile_constant().value;
    Ok(ProfileEval {
        x,
        value,
        lower_quadratic: quadratic_lower(x),
        lower_log: c_log * log_shape(x),
        c_log,
    })
}

/// `I(E_nu h) <= sqrt(2) E_nu sqrt(sum_i Var_{nu_i}(h))` for `h` in `{0,1}` (set
/// bits are 1) under the product of the two-point measures in `measures`.
pub fn bobkov_gotze_check(
    h: &BooleanFunction,
    measures: &[BiasedMeasure],
    tol: Tolerance,
) -> Result<InequalityReport> {
    let n = h.n();
    if measures.len() != n {
        return Err(Error::DimensionMismatch(measures.len(), n));
    }
    let weight = |x: u64| -> f64 {
        measures
            .iter()
            .enumerate()
            .map(|(i, m)| if x >> i & 1 == 1 { m.p() } else { m.q() })
            .product()
    };
    let hv = |x: u64| if h.is_plus(x) { 1.0 } else { 0.0 };
    let mut mean = 0.0;
    let mut rhs = 0.0;
    for x in 0..1u64 << n {
        let w = weight(x);
        mean += w * hv(x);
        let var_sum: f64 = measures
            .iter()
            .enumerate()
            .map(|(i, m)| {
                let d = hv(x | 1 << i) - hv(x & !(1 << i));
                m.p() * m.q() * d * d
            })
            .sum();
        rhs += w * var_sum.sqrt();
    }
    let lhs = profile_unchecked(mean.clamp(0.0, 1.0));
    let mut report =
        InequalityReport::at_most(Law::BobkovGotze, n, lhs, SQRT_2 * rhs, tol).with_witness(h);
    for (i, m) in measures.iter().enumerate() {
        report = report.with_param(&format!("p{}", i + 1), m.p());
    }
    Ok(report)
}

/// `I(P_t h) <= 2 sqrt(2) max(p,q) sqrt(1 - e^{-2t}) P_t|grad h|` at every point,
/// with `h = (1 + f)/2`. The report carries the tightest point.
pub fn local_bobkov_discrete(
    f: &BooleanFunction,
    m: &BiasedMeasure,
    t: f64,
    tol: Tolerance,
) -> Result<InequalityReport> {
    let np = NoiseParams::new(t, *m)?;
    let n = f.n();
    let h = f.to_indicator();
    let grad = crate::cube::RealFunction::from_raw(
        n,
        (0..1u64 << n)
            .map(|x| 0.5 * (f.sensitivity(x) as f64).sqrt())
            .collect(),
    );
    let pt_h = apply_noise(&h, &np);
    let pt_grad = apply_noise(&grad, &np);
    let scale = 2.0 * SQRT_2 * m.max_side() * (-(-2.0 * t).exp_m1()).sqrt();
    let mut worst: Option<(u64, f64, f64)> = None;
    let mut all_pass = true;
    for x in 0..1u64 << n {
        let lhs = profile_unchecked(pt_h.get(x).clamp(0.0, 1.0));
        let rhs = scale * pt_grad.get(x);
        all_pass &= tol.at_most(lhs, rhs);
        if worst.is_none_or(|(_, l, r)| rhs - lhs < r - l) {
            worst = Some((x, lhs, rhs));
        }
    }
    let (x, lhs, rhs) = worst.expect("cube is nonempty");
    let mut report = InequalityReport::at_most(Law::LocalBobkov, n, lhs, rhs, tol)
        .with_p(m.p())
        .with_witness(f)
        .with_param("t", t)
        .with_param("worst_point", x as f64);
    report.pass = all_pass;
    Ok(report)
}

/// `Var(f) - Var(P_t f) <= 2 max(p,q) sqrt(pi (1 - e^{-2t})) E|grad f|`;
/// `t = +inf` gives `Var(f) <= 2 max(p,q) sqrt(pi) E|grad f|`.
pub fn verify_variance_drop(
    f: &BooleanFunction,
    m: &BiasedMeasure,
    t: f64,
    tol: Tolerance,
) -> Result<InequalityReport> {
    let np = NoiseParams::new(t, *m)?;
    let var = statistics(f, m).variance;
    let pt = apply_noise(&f.to_real(), &np);
    let var_t = pt.variance(m);
    let sq: Vec<f64> = pt.values().iter().map(|v| v * v).collect();
    let one_minus = 1.0 - m.expect(f.n(), &sq);
    let lhs = var - var_t;
    let e_grad = boundary_profile(f, m).e_grad;
    let rhs = 2.0 * m.max_side() * (PI * -(-2.0 * t).exp_m1()).sqrt() * e_grad;
    let identity_err = (lhs - one_minus).abs();
    Ok(
        InequalityReport::at_most(Law::VarianceDrop, f.n(), lhs, rhs, tol)
            .with_p(m.p())
            .with_witness(f)
            .with_param("t", t)
            .require(
                "identity_err",
                identity_err <= DROP_IDENTITY_TOL,
                identity_err,
            ),
    )
}
