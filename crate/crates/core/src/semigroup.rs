//! The biased depolarizing semigroup `P_t = (e^{-t} id + (1 - e^{-t}) E)^{(x)n}`
//! and the variance-decay bound it satisfies.

use serde::Serialize;

use crate::cube::{influences, statistics, BiasedMeasure, BooleanFunction, RealFunction};
use crate::error::{Error, Result};
use crate::report::{InequalityReport, Law, Tolerance};

/// Tolerance for the `E_{x_j} P_t = P_t E_{x_j}` commutation check.
pub const COMMUTATION_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NoiseParams {
    t: f64,
    m: BiasedMeasure,
    theta: f64,
}

impl NoiseParams {
    /// `t` may be `+inf`, in which case `P_t f = E f`.
    pub fn new(t: f64, m: BiasedMeasure) -> Result<Self> {
        if t.is_nan() || t < 0.0 {
            return Err(Error::NegativeTime(t));
        }
        Ok(Self {
            t,
            m,
            theta: theta(t, &m),
        })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn measure(&self) -> &BiasedMeasure {
        &self.m
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
}

/// `theta(t) = (1 - e^{-2Kt}) / (1 + e^{-2Kt}) = tanh(Kt)` with `K = 1/(4pq)`.
pub fn theta(t: f64, m: &BiasedMeasure) -> f64 {
    (m.k() * t).tanh()
}

/// `P_t f`, one coordinate at a time.
pub fn apply_noise(f: &RealFunction, np: &NoiseParams) -> RealFunction {
    let n = f.n();
    let keep = (-np.t).exp();
    let mix = 1.0 - keep;
    let (p, q) = (np.m.p(), np.m.q());
    let mut g = f.values().to_vec();
    for j in 0..n {
        let bit = 1usize << j;
        for x in 0..g.len() {
            if x & bit == 0 {
                let avg = p * g[x | bit] + q * g[x];
                g[x] = keep * g[x] + mix * avg;
                g[x | bit] = keep * g[x | bit] + mix * avg;
            }
        }
    }
    RealFunction::from_raw(n, g)
}

/// Convenience wrapper around [`apply_noise`].
pub fn noise(f: &RealFunction, t: f64, m: &BiasedMeasure) -> Result<RealFunction> {
    Ok(apply_noise(f, &NoiseParams::new(t, *m)?))
}

/// `t` values spaced evenly in log scale on `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => vec![],
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.ln(), hi.ln());
            (0..count)
                .map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp())
                .collect()
        }
    }
}

/// 25 log-spaced times in `[1e-3, 10]`.
pub fn default_t_grid() -> Vec<f64> {
    log_grid(1e-3, 10.0, 25)
}

/// The Doob martingale `f^{(j)} = E_{x_1..x_j} f`, `j = 0..=n`.
#[derive(Debug, Clone, PartialEq)]
pub struct MartingaleDecomposition {
    pub levels: Vec<RealFunction>,
}

impl MartingaleDecomposition {
    /// `||f^{(j-1)} - f^{(j)}||_2^2` for `j = 1..=n`.
    pub fn increments(&self, m: &BiasedMeasure) -> Vec<f64> {
        self.levels
            .windows(2)
            .map(|w| {
                let n = w[0].n();
                let sq: Vec<f64> = w[0]
                    .values()
                    .iter()
                    .zip(w[1].values())
                    .map(|(a, b)| (a - b) * (a - b))
                    .collect();
                m.expect(n, &sq)
            })
            .collect()
    }

    /// `||f^{(j-1)} - f^{(j)}||_1` for `j = 1..=n`.
    pub fn l1_increments(&self, m: &BiasedMeasure) -> Vec<f64> {
        self.levels
            .windows(2)
            .map(|w| {
                let n = w[0].n();
                let dev: Vec<f64> = w[0]
                    .values()
                    .iter()
                    .zip(w[1].values())
                    .map(|(a, b)| (a - b).abs())
                    .collect();
                m.expect(n, &dev)
            })
            .collect()
    }

    /// `|Var(f) - sum of increments|`.
    pub fn orthogonality_defect(&self, m: &BiasedMeasure) -> f64 {
        let var = self.levels[0].variance(m);
        (var - self.increments(m).iter().sum::<f64>()).abs()
    }
}

pub fn martingale_decompose(f: &RealFunction, m: &BiasedMeasure) -> MartingaleDecomposition {
    let mut levels = Vec::with_capacity(f.n() + 1);
    levels.push(f.clone());
    for j in 0..f.n() {
        let next = levels[j].average_out(j, m);
        levels.push(next);
    }
    MartingaleDecomposition { levels }
}

/// Largest `|E_{x_j} P_t f - P_t E_{x_j} f|` over coordinates and points.
pub fn commutation_error(f: &RealFunction, np: &NoiseParams) -> f64 {
    let m = np.measure();
    let pt = apply_noise(f, np);
    (0..f.n())
        .map(|j| {
            let a = pt.average_out(j, m);
            let b = apply_noise(&f.average_out(j, m), np);
            a.max_abs_diff(&b)
        })
        .fold(0.0, f64::max)
}

/// `Var(P_t f) <= W^theta Var(f)^{1 - theta}` at one time, for a real-valued `f`.
pub fn variance_decay_report(
    f: &RealFunction,
    m: &BiasedMeasure,
    t: f64,
    tol: Tolerance,
) -> Result<InequalityReport> {
    let np = NoiseParams::new(t, *m)?;
    let var = f.variance(m);
    let w = f.influences(m).w;
    Ok(decay_report(f, &np, var, w, tol))
}

fn decay_report(
    f: &RealFunction,
    np: &NoiseParams,
    var: f64,
    w: f64,
    tol: Tolerance,
) -> InequalityReport {
    let m = np.measure();
    let th = np.theta();
    let lhs = apply_noise(f, np).variance(m);
    let rhs = w.powf(th) * var.powf(1.0 - th);
    let comm = commutation_error(f, np);
    InequalityReport::at_most(Law::VarianceDecay, f.n(), lhs, rhs, tol)
        .with_p(m.p())
        .with_param("t", np.t())
        .with_param("theta", th)
        .require("commutation_err", comm <= COMMUTATION_TOL, comm)
}

/// One report per time in `t_grid`; failures are carried in the reports.
pub fn verify_variance_decay(
    f: &BooleanFunction,
    m: &BiasedMeasure,
    t_grid: &[f64],
    tol: Tolerance,
) -> Result<Vec<InequalityReport>> {
    let real = f.to_real();
    let var = statistics(f, m).variance;
    let w = influences(f, m).w;
    t_grid
        .iter()
        .map(|&t| {
            let np = NoiseParams::new(t, *m)?;
            Ok(decay_report(&real, &np, var, w, tol).with_witness(f))
        })
        .collect()
}
