//! Extremal-ratio search over Boolean functions.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use super::Quantities;
use crate::cube::{BiasedMeasure, BooleanFunction};
use crate::error::{Error, Result};
use crate::report::Law;
use crate::sampling;

pub const MAX_EXHAUSTIVE_DIM: usize = 4;
pub const MAX_RANDOM_DIM: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchSpace {
    Exhaustive,
    Random { count: u64, seed: u64 },
}

fn as_hex<S: Serializer>(
    f: &Option<BooleanFunction>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match f {
        Some(f) => s.serialize_str(&f.to_string()),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchResult {
    pub n: usize,
    pub p: f64,
    pub law: Law,
    /// `+inf` when every candidate was degenerate.
    pub min_ratio: f64,
    #[serde(serialize_with = "as_hex")]
    pub argmin: Option<BooleanFunction>,
    pub space: SearchSpace,
    pub dedup: bool,
    /// Constant functions skipped.
    pub excluded: u64,
    /// Functions whose ratio was computed.
    pub evaluated: u64,
}

/// Truth-table kernel for `n <= 6`: a function is one `u64`, edges along
/// coordinate `j` are found with a shift and a mask.
#[derive(Debug, Clone)]
pub struct SmallCube {
    n: usize,
    p: f64,
    q: f64,
    weights: Vec<f64>,
    /// Points whose coordinate `j` is `-1`.
    low: Vec<u64>,
    sqrt: Vec<f64>,
}

impl SmallCube {
    pub fn new(n: usize, m: &BiasedMeasure) -> Result<Self> {
        if !(1..=6).contains(&n) {
            return Err(Error::Dimension { n, max: 6 });
        }
        let low = (0..n)
            .map(|j| {
                (0..1u64 << n)
                    .filter(|x| x >> j & 1 == 0)
                    .fold(0u64, |acc, x| acc | 1 << x)
            })
            .collect();
        Ok(Self {
            n,
            p: m.p(),
            q: m.q(),
            weights: m.weights(n),
            low,
            sqrt: (0..=n).map(|s| (s as f64).sqrt()).collect(),
        })
    }

    pub fn full(&self) -> u64 {
        if self.n == 6 {
            u64::MAX
        } else {
            (1u64 << (1 << self.n)) - 1
        }
    }

    /// Same quantities as [`Quantities::of`] on the packed table.
    pub fn quantities(&self, table: u64) -> Quantities {
        let mut sens = [0u8; 64];
        let mut w = 0.0;
        for j in 0..self.n {
            let shift = 1u32 << j;
            // low endpoints of edges along j where the table changes
            let cut = (table ^ (table >> shift)) & self.low[j];
            let mut bits = cut;
            let mut inf = 0.0;
            while bits != 0 {
                let x = bits.trailing_zeros() as usize;
                let hi = x | (1 << j);
                sens[x] += 1;
                sens[hi] += 1;
                inf += 2.0 * self.q * self.weights[hi] + 2.0 * self.p * self.weights[x];
                bits &= bits - 1;
            }
            w += inf * inf;
        }
        let mut a = 0.0;
        let mut e_grad = 0.0;
        for (x, (&wx, &s)) in self.weights.iter().zip(&sens).enumerate() {
            if table >> x & 1 == 1 {
                a += wx;
            }
            e_grad += wx * self.sqrt[s as usize];
        }
        let mean = 2.0 * a - 1.0;
        Quantities {
            e_grad,
            var: 1.0 - mean * mean,
            w,
        }
    }
}

fn point_perms(n: usize) -> Vec<Vec<usize>> {
    fn permutations(items: Vec<usize>) -> Vec<Vec<usize>> {
        if items.len() <= 1 {
            return vec![items];
        }
        let mut out = Vec::new();
        for i in 0..items.len() {
            let mut rest = items.clone();
            let head = rest.remove(i);
            for mut tail in permutations(rest) {
                tail.insert(0, head);
                out.push(tail);
            }
        }
        out
    }
    permutations((0..n).collect())
        .into_iter()
        .map(|perm| {
            (0..1usize << n)
                .map(|x| {
                    perm.iter()
                        .enumerate()
                        .fold(0usize, |y, (j, &pj)| y | ((x >> j & 1) << pj))
                })
                .collect()
        })
        .collect()
}

fn apply_point_perm(table: u64, map: &[usize]) -> u64 {
    map.iter()
        .enumerate()
        .fold(0u64, |acc, (x, &y)| acc | ((table >> y & 1) << x))
}

/// Smallest table in the orbit of `table` under coordinate permutations and `f -> -f`.
pub fn canonical_table(n: usize, table: u64) -> u64 {
    canonical_with(&point_perms(n), full_mask(n), table)
}

fn full_mask(n: usize) -> u64 {
    if n == 6 {
        u64::MAX
    } else {
        (1u64 << (1 << n)) - 1
    }
}

fn canonical_with(perms: &[Vec<usize>], full: u64, table: u64) -> u64 {
    perms
        .iter()
        .flat_map(|map| {
            let t = apply_point_perm(table, map);
            [t, !t & full]
        })
        .min()
        .expect("identity permutation is present")
}

#[derive(Debug, Clone, Copy)]
struct Best {
    ratio: f64,
    table: u64,
}

impl Best {
    const NONE: Best = Best {
        ratio: f64::INFINITY,
        table: u64::MAX,
    };

    fn merge(self, other: Best) -> Best {
        match self.ratio.total_cmp(&other.ratio) {
            Ordering::Less => self,
            Ordering::Greater => other,
            Ordering::Equal => {
                if self.table <= other.table {
                    self
                } else {
                    other
                }
            }
        }
    }
}

fn compare_tables(a: &BooleanFunction, b: &BooleanFunction) -> Ordering {
    a.words().iter().rev().cmp(b.words().iter().rev())
}

/// Minimal `lhs / rhs_unit` of `law` over nonconstant functions.
///
/// Ties go to the smallest truth-table integer. With `dedup`, only the
/// smallest member of each orbit under coordinate permutations and negation
/// is evaluated; the ratio is invariant on orbits.
pub fn search_extremal(
    n: usize,
    m: &BiasedMeasure,
    law: Law,
    space: SearchSpace,
    dedup: bool,
) -> Result<SearchResult> {
    if !matches!(law, Law::EldanGross | Law::TalagrandLogvar) {
        return Err(Error::UnknownLaw(format!("{law} is not a search law")));
    }
    match space {
        SearchSpace::Exhaustive => exhaustive(n, m, law, dedup),
        SearchSpace::Random { count, seed } => random(n, m, law, count, seed),
    }
}

fn exhaustive(n: usize, m: &BiasedMeasure, law: Law, dedup: bool) -> Result<SearchResult> {
    if !(1..=MAX_EXHAUSTIVE_DIM).contains(&n) {
        return Err(Error::ExhaustiveTooLarge {
            n,
            max: MAX_EXHAUSTIVE_DIM,
        });
    }
    let cube = SmallCube::new(n, m)?;
    let full = cube.full();
    let perms = if dedup { point_perms(n) } else { Vec::new() };
    let (best, evaluated) = (1..full)
        .into_par_iter()
        .filter(|&t| !dedup || canonical_with(&perms, full, t) == t)
        .map(|t| {
            let q = cube.quantities(t);
            let unit = q.rhs_unit(law).expect("law checked above");
            (
                Best {
                    ratio: q.e_grad / unit,
                    table: t,
                },
                1u64,
            )
        })
        .reduce(|| (Best::NONE, 0), |(a, ca), (b, cb)| (a.merge(b), ca + cb));
    Ok(SearchResult {
        n,
        p: m.p(),
        law,
        min_ratio: best.ratio,
        argmin: (evaluated > 0)
            .then(|| BooleanFunction::from_u64(n, best.table))
            .transpose()?,
        space: SearchSpace::Exhaustive,
        dedup,
        excluded: 2,
        evaluated,
    })
}

fn random(n: usize, m: &BiasedMeasure, law: Law, count: u64, seed: u64) -> Result<SearchResult> {
    if !(1..=MAX_RANDOM_DIM).contains(&n) {
        return Err(Error::Dimension {
            n,
            max: MAX_RANDOM_DIM,
        });
    }
    type Acc = Option<(f64, BooleanFunction)>;
    fn pick(a: Acc, b: Acc) -> Acc {
        match (a, b) {
            (None, x) | (x, None) => x,
            (Some(a), Some(b)) => match a.0.total_cmp(&b.0) {
                Ordering::Less => Some(a),
                Ordering::Greater => Some(b),
                Ordering::Equal => {
                    if compare_tables(&a.1, &b.1) != Ordering::Greater {
                        Some(a)
                    } else {
                        Some(b)
                    }
                }
            },
        }
    }
    let (best, excluded) = (0..count)
        .into_par_iter()
        .map(|i| -> Result<(Acc, u64)> {
            let f = sampling::random_boolean(n, seed, i)?;
            if f.is_constant() {
                return Ok((None, 1));
            }
            let q = Quantities::of(&f, m);
            let ratio = q.e_grad / q.rhs_unit(law)?;
            Ok((Some((ratio, f)), 0))
        })
        .try_reduce(|| (None, 0), |(a, ea), (b, eb)| Ok((pick(a, b), ea + eb)))?;
    let (min_ratio, argmin) = match best {
        Some((r, f)) => (r, Some(f)),
        None => (f64::INFINITY, None),
    };
    Ok(SearchResult {
        n,
        p: m.p(),
        law,
        min_ratio,
        argmin,
        space: SearchSpace::Random { count, seed },
        dedup: false,
        excluded,
        evaluated: count - excluded,
    })
}
