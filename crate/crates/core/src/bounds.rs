//! Exponents and known bounds on the minimal rank `r(m, k, n)`.

use std::fmt;

use crate::algorithm::{BilinearAlgorithm, DimensionTriple};
use crate::{Error, Result};

/// Writes `x >= 2` as `base^exp` with the largest possible `exp`.
fn perfect_power(x: u128) -> (u128, u32) {
    debug_assert!(x >= 2);
    for exp in (2..=127u32).rev() {
        if let Some(base) = exact_root(x, exp) {
            return (base, exp);
        }
    }
    (x, 1)
}

fn exact_root(x: u128, exp: u32) -> Option<u128> {
    let guess = (x as f64).powf(1.0 / exp as f64).round() as u128;
    let lo = guess.saturating_sub(1).max(2);
    (lo..=guess + 1).find(|&b| b.checked_pow(exp) == Some(x))
}

/// `3 log_{mkn} R`, the exponent of the recursive algorithm built from `alg`.
///
/// Both `R` and `m k n` are first written as perfect powers and the common exponent is
/// cancelled, so an algorithm and its tensor cubes give bit-identical results.
pub fn exponent(alg: &BilinearAlgorithm) -> Result<f64> {
    exponent_of(alg.dims(), alg.rank() as u128)
}

pub fn exponent_of(dims: DimensionTriple, rank: u128) -> Result<f64> {
    let volume = dims.volume();
    if volume < 2 {
        return Err(Error::Undefined("the exponent of MM(1, 1, 1) is undefined".into()));
    }
    if rank == 0 {
        return Err(Error::Undefined("rank must be positive".into()));
    }
    if rank == volume {
        return Ok(3.0);
    }
    if rank == 1 {
        return Ok(0.0);
    }
    let (rb, re) = perfect_power(rank);
    let (vb, ve) = perfect_power(volume);
    let g = num_integer::gcd(re, ve);
    let (re, ve) = (re / g, ve / g);
    if rb == vb {
        return Ok(f64::from(3 * re) / f64::from(ve));
    }
    let ratio = (re as f64 * (rb as f64).ln()) / (ve as f64 * (vb as f64).ln());
    Ok(3.0 * ratio)
}

/// Whether the rank respects `(m + n - 1) k <= R`.
pub fn sanity_rank_lower_bound(alg: &BilinearAlgorithm) -> bool {
    alg.rank() as u128 >= generic_lower_bound(alg.dims())
}

/// `(m + n - 1) k`.
pub fn generic_lower_bound(dims: DimensionTriple) -> u128 {
    (dims.m() as u128 + dims.n() as u128 - 1) * dims.k() as u128
}

/// Which problem sizes a bound applies to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundPattern {
    Exact(DimensionTriple),
    /// `MM(2, 2, n)` for `n >= min_n`, lower bound `3n + 2`.
    TwoByTwoByN {
        min_n: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundEntry {
    pub pattern: BoundPattern,
    pub lower: Option<u64>,
    pub upper: Option<u64>,
    pub note: &'static str,
}

/// The published rank bounds, plus the generic rule `(m + n - 1) k <= r(m, k, n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnownRankBounds {
    pub entries: Vec<BoundEntry>,
}

/// Combined bounds for one problem size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundRow {
    pub dims: DimensionTriple,
    pub lower: Option<u64>,
    pub upper: Option<u64>,
    pub notes: Vec<&'static str>,
}

impl fmt::Display for BoundRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |x: Option<u64>| x.map_or_else(|| "-".to_string(), |v| v.to_string());
        write!(f, "[{},{}]", show(self.lower), show(self.upper))
    }
}

fn dims(m: usize, k: usize, n: usize) -> DimensionTriple {
    DimensionTriple::new(m, k, n).expect("positive")
}

pub fn known_bounds() -> KnownRankBounds {
    let exact = |m, k, n, lower, upper, note| BoundEntry {
        pattern: BoundPattern::Exact(dims(m, k, n)),
        lower,
        upper,
        note,
    };
    KnownRankBounds {
        entries: vec![
            exact(
                2,
                2,
                2,
                Some(7),
                Some(7),
                "r(2,2,2) = 7 (Strassen; lower bound by Hopcroft-Kerr)",
            ),
            exact(2, 3, 3, Some(15), Some(16), "15 <= r(2,3,3) <= 16"),
            exact(2, 3, 4, Some(19), None, "r(2,3,4) >= 19"),
            exact(3, 3, 3, Some(18), None, "r(3,3,3) >= 18"),
            exact(2, 4, 4, None, Some(27), "r(2,4,4) <= 27"),
            BoundEntry {
                pattern: BoundPattern::TwoByTwoByN { min_n: 3 },
                lower: None,
                upper: None,
                note: "r(2,2,n) >= 3n + 2 for n >= 3",
            },
        ],
    }
}

/// The six orderings of a dimension triple. The minimal rank is the same for all of them.
fn permutations(d: DimensionTriple) -> [DimensionTriple; 6] {
    let (m, k, n) = (d.m(), d.k(), d.n());
    [(m, k, n), (m, n, k), (k, m, n), (k, n, m), (n, m, k), (n, k, m)].map(|(a, b, c)| dims(a, b, c))
}

impl KnownRankBounds {
    /// Best bounds for `d`: table entries and the `MM(2, 2, n)` rule are matched against
    /// every ordering of `d`, and the generic lower bound is taken over every ordering.
    pub fn lookup(&self, d: DimensionTriple) -> BoundRow {
        let perms = permutations(d);
        let mut lower = perms
            .iter()
            .map(|&p| generic_lower_bound(p) as u64)
            .max()
            .expect("six permutations");
        let mut upper: Option<u64> = None;
        let mut notes = Vec::new();
        for e in &self.entries {
            let (lo, hi) = match e.pattern {
                BoundPattern::Exact(t) if perms.contains(&t) => (e.lower, e.upper),
                BoundPattern::TwoByTwoByN { min_n } => {
                    let n = perms
                        .iter()
                        .filter(|p| p.m() == 2 && p.k() == 2 && p.n() >= min_n)
                        .map(|p| p.n())
                        .next();
                    match n {
                        Some(n) => (Some(3 * n as u64 + 2), None),
                        None => continue,
                    }
                }
                _ => continue,
            };
            notes.push(e.note);
            if let Some(lo) = lo {
                lower = lower.max(lo);
            }
            if let Some(hi) = hi {
                upper = Some(upper.map_or(hi, |u| u.min(hi)));
            }
        }
        BoundRow {
            dims: d,
            lower: Some(lower),
            upper,
            notes,
        }
    }

    pub fn exact_entry(&self, d: DimensionTriple) -> Option<&BoundEntry> {
        self.entries.iter().find(|e| e.pattern == BoundPattern::Exact(d))
    }
}
