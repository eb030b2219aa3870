//! Functions on the discrete cube `{-1,1}^n` under the p-biased product measure.
//!
//! Points are `u64` indices: bit `j` of the index is coordinate `j` (0-based),
//! and a set bit means the coordinate is `+1`. Flipping coordinate `j` is
//! `x ^ (1 << j)` and the weight of a point depends only on its popcount.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

/// Largest dimension for dense tables.
pub const MAX_DIM: usize = 24;

pub(crate) fn check_dim(n: usize) -> Result<()> {
    if (1..=MAX_DIM).contains(&n) {
        Ok(())
    } else {
        Err(Error::Dimension { n, max: MAX_DIM })
    }
}

/// The product measure `mu_p^{(x)n}` on the cube.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BiasedMeasure {
    p: f64,
    q: f64,
    k: f64,
}

impl BiasedMeasure {
    pub fn new(p: f64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::InvalidBias(p));
        }
        let q = 1.0 - p;
        Ok(Self {
            p,
            q,
            k: 1.0 / (4.0 * p * q),
        })
    }

    pub fn uniform() -> Self {
        Self {
            p: 0.5,
            q: 0.5,
            k: 1.0,
        }
    }

    /// Mass of `+1` in each coordinate.
    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// `1 / (4pq)`, at least 1 with equality only for the uniform measure.
    pub fn k(&self) -> f64 {
        self.k
    }

    /// `max(p, q)`.
    pub fn max_side(&self) -> f64 {
        self.p.max(self.q)
    }

    /// Weight of a point with `ones` coordinates equal to `+1`, indexed by popcount.
    pub(crate) fn popcount_weights(&self, n: usize) -> Vec<f64> {
        (0..=n)
            .map(|k| self.p.powi(k as i32) * self.q.powi((n - k) as i32))
            .collect()
    }

    /// Dense weight table over all `2^n` points.
    pub fn weights(&self, n: usize) -> Vec<f64> {
        let by_count = self.popcount_weights(n);
        (0..1u64 << n)
            .map(|x| by_count[x.count_ones() as usize])
            .collect()
    }

    /// `E[v]` for a table of `2^n` values.
    pub fn expect(&self, n: usize, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), 1 << n);
        let by_count = self.popcount_weights(n);
        values
            .iter()
            .enumerate()
            .map(|(x, v)| by_count[(x as u64).count_ones() as usize] * v)
            .sum()
    }

    /// `E_{x_j}` applied to a table: averages coordinate `j` out.
    pub fn coordinate_average(&self, n: usize, values: &[f64], j: usize) -> Vec<f64> {
        debug_assert!(j < n);
        let bit = 1usize << j;
        let mut out = vec![0.0; values.len()];
        for x in 0..values.len() {
            if x & bit == 0 {
                let avg = self.p * values[x | bit] + self.q * values[x];
                out[x] = avg;
                out[x | bit] = avg;
            }
        }
        out
    }
}

/// Probability of point `x` under `mu_p^{(x)n}`.
pub fn point_weight(x: u64, m: &BiasedMeasure, n: usize) -> Result<f64> {
    if n >= 64 {
        return Err(Error::Dimension { n, max: 63 });
    }
    if x >> n != 0 {
        return Err(Error::PointIndex { x, n });
    }
    let ones = x.count_ones() as i32;
    Ok(m.p.powi(ones) * m.q.powi(n as i32 - ones))
}

/// `f: {-1,1}^n -> {-1,1}` as a packed truth table; a set bit encodes `f(x) = +1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BooleanFunction {
    n: usize,
    words: Vec<u64>,
}

fn word_count(n: usize) -> usize {
    (1usize << n).div_ceil(64)
}

fn tail_mask(n: usize) -> u64 {
    if n >= 6 {
        u64::MAX
    } else {
        (1u64 << (1 << n)) - 1
    }
}

impl BooleanFunction {
    pub fn new(n: usize, words: Vec<u64>) -> Result<Self> {
        check_dim(n)?;
        let expected = word_count(n);
        if words.len() != expected {
            return Err(Error::TableLength {
                n,
                got: words.len() * 64,
                expected: 1 << n,
            });
        }
        if words[0] & !tail_mask(n) != 0 {
            return Err(Error::Parse(format!(
                "bits set beyond the 2^{n} table entries"
            )));
        }
        Ok(Self { n, words })
    }

    /// Truth table packed into one word, for `n <= 6`.
    pub fn from_u64(n: usize, table: u64) -> Result<Self> {
        if n > 6 {
            return Err(Error::Dimension { n, max: 6 });
        }
        Self::new(n, vec![table])
    }

    pub fn from_fn(n: usize, f: impl Fn(u64) -> bool) -> Result<Self> {
        check_dim(n)?;
        let mut words = vec![0u64; word_count(n)];
        for x in 0..1u64 << n {
            if f(x) {
                words[(x >> 6) as usize] |= 1 << (x & 63);
            }
        }
        Ok(Self { n, words })
    }

    pub fn constant(n: usize, value: bool) -> Result<Self> {
        Self::from_fn(n, |_| value)
    }

    /// `f(x) = x_j`.
    pub fn dictator(n: usize, j: usize) -> Result<Self> {
        if j >= n {
            return Err(Error::Coordinate { coord: j, n });
        }
        Self::from_fn(n, |x| x >> j & 1 == 1)
    }

    /// `f(x) = x_1 x_2 ... x_n`.
    pub fn parity(n: usize) -> Result<Self> {
        Self::from_fn(n, |x| (n as u32 - x.count_ones()).is_multiple_of(2))
    }

    /// `+1` at the single point `x`, `-1` elsewhere.
    pub fn point_indicator(n: usize, x: u64) -> Result<Self> {
        check_dim(n)?;
        if x >> n != 0 {
            return Err(Error::PointIndex { x, n });
        }
        Self::from_fn(n, |y| y == x)
    }

    /// `+1` only at `(1, ..., 1)`.
    pub fn top_point(n: usize) -> Result<Self> {
        check_dim(n)?;
        Self::point_indicator(n, (1u64 << n) - 1)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of points, `2^n`.
    pub fn len(&self) -> usize {
        1 << self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// The truth table as one integer when `n <= 6`.
    pub fn table_u64(&self) -> Option<u64> {
        (self.n <= 6).then(|| self.words[0])
    }

    #[inline]
    pub fn is_plus(&self, x: u64) -> bool {
        self.words[(x >> 6) as usize] >> (x & 63) & 1 == 1
    }

    /// `f(x)` as `+1.0` or `-1.0`.
    #[inline]
    pub fn value(&self, x: u64) -> f64 {
        if self.is_plus(x) {
            1.0
        } else {
            -1.0
        }
    }

    pub fn count_plus(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn is_constant(&self) -> bool {
        let c = self.count_plus();
        c == 0 || c == self.len() as u64
    }

    /// `-f`.
    pub fn negate(&self) -> Self {
        let mask = tail_mask(self.n);
        let mut words: Vec<u64> = self.words.iter().map(|w| !w).collect();
        words[0] &= mask;
        Self { n: self.n, words }
    }

    /// `g(x) = f(y)` where coordinate `perm[j]` of `y` is coordinate `j` of `x`.
    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::DimensionMismatch(perm.len(), self.n));
        }
        let mut seen = vec![false; self.n];
        for &j in perm {
            if j >= self.n || seen[j] {
                return Err(Error::Parse(format!("{perm:?} is not a permutation")));
            }
            seen[j] = true;
        }
        Self::from_fn(self.n, |x| {
            let mut y = 0u64;
            for (j, &pj) in perm.iter().enumerate() {
                y |= (x >> j & 1) << pj;
            }
            self.is_plus(y)
        })
    }

    /// Number of coordinates whose flip changes `f` at `x`.
    #[inline]
    pub fn sensitivity(&self, x: u64) -> u32 {
        let fx = self.is_plus(x);
        (0..self.n)
            .filter(|&j| self.is_plus(x ^ (1 << j)) != fx)
            .count() as u32
    }

    pub fn to_real(&self) -> RealFunction {
        RealFunction {
            n: self.n,
            values: (0..1u64 << self.n).map(|x| self.value(x)).collect(),
        }
    }

    /// `(1 + f) / 2` as a `{0,1}`-valued table.
    pub fn to_indicator(&self) -> RealFunction {
        RealFunction {
            n: self.n,
            values: (0..1u64 << self.n)
                .map(|x| if self.is_plus(x) { 1.0 } else { 0.0 })
                .collect(),
        }
    }

    fn hex_digits(&self) -> usize {
        (self.len() / 4).max(1)
    }
}

impl fmt::Display for BooleanFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n:{} hex:", self.n)?;
        for d in (0..self.hex_digits()).rev() {
            let bit = 4 * d;
            let nibble = (self.words[bit / 64] >> (bit % 64)) & 0xf;
            write!(f, "{nibble:x}")?;
        }
        Ok(())
    }
}

impl FromStr for BooleanFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut n_field = None;
        let mut hex_field = None;
        for part in s.split_whitespace() {
            if let Some(v) = part.strip_prefix("n:") {
                n_field = Some(v);
            } else if let Some(v) = part.strip_prefix("hex:") {
                hex_field = Some(v);
            } else {
                return Err(Error::Parse(format!("unexpected token `{part}`")));
            }
        }
        let n: usize = n_field
            .ok_or_else(|| Error::Parse("missing `n:` field".into()))?
            .parse()
            .map_err(|e| Error::Parse(format!("bad dimension: {e}")))?;
        check_dim(n)?;
        let hex = hex_field.ok_or_else(|| Error::Parse("missing `hex:` field".into()))?;
        let digits = ((1usize << n) / 4).max(1);
        if hex.len() != digits {
            return Err(Error::Parse(format!(
                "expected {digits} hex digits for n = {n}, got {}",
                hex.len()
            )));
        }
        let mut words = vec![0u64; word_count(n)];
        for (i, c) in hex.chars().rev().enumerate() {
            let nibble = c
                .to_digit(16)
                .ok_or_else(|| Error::Parse(format!("invalid hex digit `{c}`")))?
                as u64;
            let bit = 4 * i;
            words[bit / 64] |= nibble << (bit % 64);
        }
        Self::new(n, words)
    }
}

/// A dense real-valued function on `{-1,1}^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct RealFunction {
    n: usize,
    values: Vec<f64>,
}

impl RealFunction {
    pub fn new(n: usize, values: Vec<f64>) -> Result<Self> {
        check_dim(n)?;
        if values.len() != 1 << n {
            return Err(Error::TableLength {
                n,
                got: values.len(),
                expected: 1 << n,
            });
        }
        if let Some(x) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(x));
        }
        Ok(Self { n, values })
    }

    pub(crate) fn from_raw(n: usize, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), 1 << n);
        Self { n, values }
    }

    pub fn constant(n: usize, c: f64) -> Result<Self> {
        check_dim(n)?;
        Self::new(n, vec![c; 1 << n])
    }

    pub fn from_fn(n: usize, f: impl Fn(u64) -> f64) -> Result<Self> {
        check_dim(n)?;
        Self::new(n, (0..1u64 << n).map(f).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn get(&self, x: u64) -> f64 {
        self.values[x as usize]
    }

    pub fn mean(&self, m: &BiasedMeasure) -> f64 {
        m.expect(self.n, &self.values)
    }

    /// `E f^2 - (E f)^2`.
    pub fn variance(&self, m: &BiasedMeasure) -> f64 {
        let mean = self.mean(m);
        let sq: Vec<f64> = self.values.iter().map(|v| v * v).collect();
        (m.expect(self.n, &sq) - mean * mean).max(0.0)
    }

    /// `E_{x_j} f`, constant in coordinate `j`.
    pub fn average_out(&self, j: usize, m: &BiasedMeasure) -> Self {
        Self::from_raw(self.n, m.coordinate_average(self.n, &self.values, j))
    }

    /// L1 influences `E|f - E_{x_j} f|` and their sum of squares.
    pub fn influences(&self, m: &BiasedMeasure) -> Influences {
        let inf: Vec<f64> = (0..self.n)
            .map(|j| {
                let avg = m.coordinate_average(self.n, &self.values, j);
                let dev: Vec<f64> = self
                    .values
                    .iter()
                    .zip(&avg)
                    .map(|(v, a)| (v - a).abs())
                    .collect();
                m.expect(self.n, &dev)
            })
            .collect();
        Influences::from_vec(inf)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        Ok(Self::from_raw(
            self.n,
            self.values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a - b)
                .collect(),
        ))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Sensitivity, gradient norm, and boundary count of a Boolean function at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PointStats {
    pub sensitivity: u32,
    pub gradient_norm: f64,
    /// `h_f(x)`: edges from `x` leaving `{f = 1}`, zero off that set.
    pub boundary_count: u32,
}

pub fn point_stats(f: &BooleanFunction, x: u64) -> Result<PointStats> {
    if x >> f.n != 0 {
        return Err(Error::PointIndex { x, n: f.n });
    }
    let s = f.sensitivity(x);
    Ok(PointStats {
        sensitivity: s,
        gradient_norm: (s as f64).sqrt(),
        boundary_count: if f.is_plus(x) { s } else { 0 },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Statistics {
    pub mean: f64,
    pub variance: f64,
    /// `E|f - E f|`.
    pub l1_centered: f64,
    /// Measure of `{f = 1}`.
    pub a: f64,
}

pub fn statistics(f: &BooleanFunction, m: &BiasedMeasure) -> Statistics {
    let by_count = m.popcount_weights(f.n);
    let a: f64 = (0..1u64 << f.n)
        .filter(|&x| f.is_plus(x))
        .map(|x| by_count[x.count_ones() as usize])
        .sum();
    let mean = 2.0 * a - 1.0;
    let l1_centered = (0..1u64 << f.n)
        .map(|x| by_count[x.count_ones() as usize] * (f.value(x) - mean).abs())
        .sum();
    Statistics {
        mean,
        variance: (1.0 - mean * mean).max(0.0),
        l1_centered,
        a,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Influences {
    pub inf: Vec<f64>,
    /// Sum of squared influences.
    #[serde(rename = "W")]
    pub w: f64,
}

impl Influences {
    pub fn from_vec(inf: Vec<f64>) -> Self {
        let w = inf.iter().map(|i| i * i).sum();
        Self { inf, w }
    }
}

/// L1 influences of a Boolean function under `m`.
///
/// Along an edge where `f` changes, `|f - E_{x_j} f|` is `2q` at the `+1` end
/// and `2p` at the `-1` end; it vanishes elsewhere.
pub fn influences(f: &BooleanFunction, m: &BiasedMeasure) -> Influences {
    let by_count = m.popcount_weights(f.n);
    let inf = (0..f.n)
        .map(|j| {
            let bit = 1u64 << j;
            (0..1u64 << f.n)
                .filter(|&x| x & bit == 0 && f.is_plus(x) != f.is_plus(x | bit))
                .map(|x| {
                    let lo = by_count[x.count_ones() as usize];
                    let hi = by_count[(x | bit).count_ones() as usize];
                    2.0 * m.q * hi + 2.0 * m.p * lo
                })
                .sum()
        })
        .collect();
    Influences::from_vec(inf)
}

/// `E|D_j f|` with `D_j f(x) = (f(x) - f(x^{(+)j})) / 2`.
pub fn mean_abs_derivative(f: &BooleanFunction, m: &BiasedMeasure, j: usize) -> f64 {
    let by_count = m.popcount_weights(f.n);
    let bit = 1u64 << j;
    (0..1u64 << f.n)
        .filter(|&x| f.is_plus(x) != f.is_plus(x ^ bit))
        .map(|x| by_count[x.count_ones() as usize])
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryProfile {
    /// `E|grad f|`.
    pub e_grad: f64,
    /// `E sqrt(h_f)`.
    pub e_sqrt_hf: f64,
    /// `E sqrt(h_{-f})`.
    pub e_sqrt_h_neg_f: f64,
}

pub fn boundary_profile(f: &BooleanFunction, m: &BiasedMeasure) -> BoundaryProfile {
    let by_count = m.popcount_weights(f.n);
    let mut out = BoundaryProfile {
        e_grad: 0.0,
        e_sqrt_hf: 0.0,
        e_sqrt_h_neg_f: 0.0,
    };
    for x in 0..1u64 << f.n {
        let s = f.sensitivity(x);
        if s == 0 {
            continue;
        }
        let w = by_count[x.count_ones() as usize];
        let root = (s as f64).sqrt();
        out.e_grad += w * root;
        if f.is_plus(x) {
            out.e_sqrt_hf += w * root;
        } else {
            out.e_sqrt_h_neg_f += w * root;
        }
    }
    out
}

/// `E|grad f|` for a real-valued table.
pub fn mean_gradient_norm(f: &RealFunction, m: &BiasedMeasure) -> f64 {
    let n = f.n;
    let grad: Vec<f64> = (0..1u64 << n)
        .map(|x| {
            let fx = f.get(x);
            (0..n)
                .map(|j| {
                    let d = 0.5 * (fx - f.get(x ^ (1 << j)));
                    d * d
                })
                .sum::<f64>()
                .sqrt()
        })
        .collect();
    m.expect(n, &grad)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn point_weight_examples() {
        let half = BiasedMeasure::uniform();
        assert_eq!(point_weight(0, &half, 1).unwrap(), 0.5);
        let m = BiasedMeasure::new(0.3).unwrap();
        assert!(close(point_weight(3, &m, 2).unwrap(), 0.09, 1e-15));
        let total: f64 = (0..4).map(|x| point_weight(x, &m, 2).unwrap()).sum();
        assert!(close(total, 1.0, 1e-15));
    }

    #[test]
    fn point_weight_errors() {
        let m = BiasedMeasure::uniform();
        assert!(matches!(
            point_weight(0, &m, 64),
            Err(Error::Dimension { .. })
        ));
        assert!(matches!(
            point_weight(4, &m, 2),
            Err(Error::PointIndex { .. })
        ));
    }

    #[test]
    fn weights_sum_to_one() {
        for k in 1..=99 {
            let m = BiasedMeasure::new(k as f64 / 100.0).unwrap();
            for n in [1, 5, 12, 16] {
                let s: f64 = m.weights(n).iter().sum();
                // plain summation of 2^n terms
                assert!(close(s, 1.0, 1e-11), "p={} n={n} sum={s}", m.p());
            }
        }
        for p in [0.01, 0.5, 0.99] {
            let m = BiasedMeasure::new(p).unwrap();
            let s: f64 = m.weights(MAX_DIM).iter().sum();
            assert!(close(s, 1.0, 1e-9), "p={p} sum={s}");
        }
    }

    #[test]
    fn measure_rejects_bad_bias() {
        for p in [0.0, 1.0, -0.1, 1.5, f64::NAN] {
            assert!(BiasedMeasure::new(p).is_err());
        }
        let m = BiasedMeasure::new(0.5).unwrap();
        assert_eq!(m.k(), 1.0);
        assert!(BiasedMeasure::new(0.2).unwrap().k() > 1.0);
    }

    #[test]
    fn point_stats_examples() {
        let parity = BooleanFunction::parity(2).unwrap();
        for x in 0..4 {
            let s = point_stats(&parity, x).unwrap();
            assert_eq!(s.sensitivity, 2);
            assert!(close(s.gradient_norm, 2f64.sqrt(), 1e-15));
        }
        let single = BooleanFunction::top_point(2).unwrap();
        let s = point_stats(&single, 3).unwrap();
        assert_eq!((s.sensitivity, s.boundary_count), (2, 2));
        let one = BooleanFunction::constant(3, true).unwrap();
        for x in 0..8 {
            let s = point_stats(&one, x).unwrap();
            assert_eq!(s.sensitivity, 0);
            assert_eq!(s.gradient_norm, 0.0);
        }
        assert!(point_stats(&one, 8).is_err());
    }

    #[test]
    fn statistics_examples() {
        let half = BiasedMeasure::uniform();
        let one = BooleanFunction::constant(2, true).unwrap();
        let s = statistics(&one, &half);
        assert_eq!((s.mean, s.variance, s.a), (1.0, 0.0, 1.0));

        let dict = BooleanFunction::dictator(1, 0).unwrap();
        let s = statistics(&dict, &half);
        assert!(close(s.variance, 1.0, 1e-15));
        assert!(close(s.a, 0.5, 1e-15));
        assert!(close(s.l1_centered, 1.0, 1e-15));

        let single = BooleanFunction::top_point(2).unwrap();
        let s = statistics(&single, &half);
        assert!(close(s.a, 0.25, 1e-15));
        assert!(close(s.variance, 0.75, 1e-15));
    }

    #[test]
    fn influence_examples() {
        let half = BiasedMeasure::uniform();
        let dict = BooleanFunction::dictator(1, 0).unwrap();
        let i = influences(&dict, &half);
        assert!(close(i.inf[0], 1.0, 1e-15) && close(i.w, 1.0, 1e-15));

        let parity = BooleanFunction::parity(2).unwrap();
        let i = influences(&parity, &half);
        assert!(close(i.inf[0], 1.0, 1e-15) && close(i.inf[1], 1.0, 1e-15));
        assert!(close(i.w, 2.0, 1e-15));

        for p in [0.1, 0.3, 0.77] {
            let m = BiasedMeasure::new(p).unwrap();
            let i = influences(&dict, &m);
            assert!(close(i.inf[0], 4.0 * p * (1.0 - p), 1e-15));
        }
    }

    #[test]
    fn boundary_profile_examples() {
        let half = BiasedMeasure::uniform();
        let single = BooleanFunction::top_point(2).unwrap();
        let b = boundary_profile(&single, &half);
        assert!(close(b.e_grad, (2.0 + 2f64.sqrt()) / 4.0, 1e-15));
        assert!(close(b.e_sqrt_hf, 2f64.sqrt() / 4.0, 1e-15));

        let one = BooleanFunction::constant(3, false).unwrap();
        let b = boundary_profile(&one, &half);
        assert_eq!((b.e_grad, b.e_sqrt_hf, b.e_sqrt_h_neg_f), (0.0, 0.0, 0.0));

        let dict = BooleanFunction::dictator(1, 0).unwrap();
        let b = boundary_profile(&dict, &half);
        assert!(close(b.e_grad, 1.0, 1e-15));
        assert!(close(b.e_sqrt_hf, 0.5, 1e-15));
    }

    #[test]
    fn hex_format() {
        let single = BooleanFunction::top_point(2).unwrap();
        assert_eq!(single.to_string(), "n:2 hex:8");
        let parsed: BooleanFunction = "n:2 hex:8".parse().unwrap();
        assert_eq!(parsed, single);
        let dict = BooleanFunction::dictator(1, 0).unwrap();
        assert_eq!(dict.to_string(), "n:1 hex:2");
        let f = BooleanFunction::top_point(7).unwrap();
        let s = f.to_string();
        assert_eq!(s.len(), "n:7 hex:".len() + 32);
        assert!(s.ends_with(&format!("8{}", "0".repeat(31))));
        assert_eq!(s.parse::<BooleanFunction>().unwrap(), f);
    }

    #[test]
    fn hex_rejects_malformed() {
        for bad in [
            "n:2 hex:80",
            "n:2 hex:g",
            "n:1 hex:4",
            "n:0 hex:1",
            "n:25 hex:0",
            "hex:8",
            "n:2",
            "n:2 hex:8 extra",
            "n:x hex:8",
        ] {
            assert!(bad.parse::<BooleanFunction>().is_err(), "{bad}");
        }
    }

    #[test]
    fn negate_and_permute() {
        let f = BooleanFunction::from_u64(3, 0b1110_1000).unwrap();
        assert_eq!(f.negate().table_u64(), Some(0b0001_0111));
        assert_eq!(f.negate().negate(), f);
        let d0 = BooleanFunction::dictator(3, 0).unwrap();
        let d2 = BooleanFunction::dictator(3, 2).unwrap();
        assert_eq!(d0.permute(&[2, 1, 0]).unwrap(), d2);
        assert!(f.permute(&[0, 0, 1]).is_err());
    }

    #[test]
    fn real_function_validation() {
        assert!(RealFunction::new(2, vec![0.0; 3]).is_err());
        assert!(matches!(
            RealFunction::new(1, vec![0.0, f64::NAN]),
            Err(Error::NonFinite(1))
        ));
        let f = RealFunction::new(1, vec![2.0, 0.0]).unwrap();
        let half = BiasedMeasure::uniform();
        assert!(close(f.mean(&half), 1.0, 1e-15));
        assert!(close(f.variance(&half), 1.0, 1e-15));
    }
}
