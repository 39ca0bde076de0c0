//! Block species: node-valence multisets solving the Diophantine valence
//! equation, plus the closed-form block statistics and bounds.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpeciesError {
    #[error("block size must be positive, got {0}")]
    BlockSize(i64),
    #[error("node count {n} outside [{lo}, {hi}] for i = {i}")]
    NodeCount { i: u32, n: u32, lo: u32, hi: u32 },
    #[error("malformed species {0:?}")]
    Parse(String),
}

/// A multiset of node valences, stored non-increasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Species {
    pub i: u32,
    pub n: u32,
    pub valences: Vec<u32>,
}

/// Limits of vertices and edges per tile.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockStats {
    pub v: Rational,
    pub e: Rational,
}

fn check_i(i: i64) -> Result<u32, SpeciesError> {
    if i <= 0 {
        return Err(SpeciesError::BlockSize(i));
    }
    Ok(i as u32)
}

pub fn node_bounds(i: i64) -> Result<(u32, u32), SpeciesError> {
    let i = check_i(i)?;
    Ok((5 * i, 6 * i))
}

fn check_n(i: i64, n: u32) -> Result<u32, SpeciesError> {
    let (lo, hi) = node_bounds(i)?;
    if n < lo || n > hi {
        return Err(SpeciesError::NodeCount { i: i as u32, n, lo, hi });
    }
    Ok(i as u32)
}

/// Admissible count of valence-3 nodes; the upper formula is clamped at `n`.
pub fn trivalent_bounds(i: i64, n: u32) -> Result<(u32, u32), SpeciesError> {
    let i = check_n(i, n)?;
    let lo = 3 * n - 12 * i;
    let hi = ((3 * n - 6 * i) / 2).min(n);
    Ok((lo, hi))
}

/// Average valence `2n / (n - 2i)`.
pub fn average_valence(i: u32, n: u32) -> Rational {
    Rational::new(2 * n as i128, n as i128 - 2 * i as i128)
}

fn reciprocal_sum(vals: &[u32]) -> Rational {
    vals.iter().map(|&a| Rational::new(1, a as i128)).sum()
}

/// Every species for `(i, n)`, sorted lexicographically descending.
///
/// Valences are bounded only by the equation itself (finitely many
/// solutions exist for fixed `n`); the `12i` tiling cap is applied later by
/// the topological-type filter, so e.g. `<3^13.7.42>` is listed for `(3, 15)`.
pub fn enumerate_species(i: i64, n: u32) -> Result<Vec<Species>, SpeciesError> {
    enumerate_species_capped(i, n, u32::MAX)
}

/// As [`enumerate_species`], keeping only species with every valence `<= cap`.
pub fn enumerate_species_capped(i: i64, n: u32, cap: u32) -> Result<Vec<Species>, SpeciesError> {
    let i = check_n(i, n)?;
    let target = Rational::new(n as i128 - 2 * i as i128, 2);
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n as usize);
    search(n as usize, 3, cap, target, &mut cur, &mut out);
    for v in out.iter_mut() {
        v.reverse();
    }
    out.sort_by(|a, b| b.cmp(a));
    Ok(out
        .into_iter()
        .map(|valences| Species { i, n, valences })
        .collect())
}

// Values are chosen non-decreasing from `min`; `rem` is the reciprocal sum
// still needed by `slots` values. Each next value `a` must satisfy
// `1/a <= rem` and `slots/a >= rem`.
fn search(slots: usize, min: u32, cap: u32, rem: Rational, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if slots == 0 {
        if rem.is_zero() {
            out.push(cur.clone());
        }
        return;
    }
    if rem <= Rational::zero() {
        return;
    }
    let k = Ratio::from_integer(slots as i128);
    let lo = (rem.recip().ceil().to_integer() as u32).max(min);
    let hi = (k / rem).floor().to_integer().min(cap as i128) as u32;
    for a in lo..=hi {
        cur.push(a);
        search(slots - 1, a, cap, rem - Rational::new(1, a as i128), cur, out);
        cur.pop();
    }
}

pub fn block_stats(s: &Species) -> BlockStats {
    let i = s.i as i128;
    BlockStats {
        v: reciprocal_sum(&s.valences) / Rational::from_integer(i),
        e: Rational::new(s.n as i128, 2 * i),
    }
}

impl Species {
    /// Validates the invariants and sorts the valences.
    pub fn new(i: u32, mut valences: Vec<u32>) -> Result<Self, SpeciesError> {
        let n = valences.len() as u32;
        check_n(i as i64, n)?;
        valences.sort_unstable_by(|a, b| b.cmp(a));
        let bad = || SpeciesError::Parse(format!("{valences:?}"));
        if valences.iter().any(|&a| a < 3) {
            return Err(bad());
        }
        if reciprocal_sum(&valences) != Rational::new(n as i128 - 2 * i as i128, 2) {
            return Err(bad());
        }
        Ok(Species { i, n, valences })
    }

    /// Distinct valences with multiplicities, ascending.
    pub fn multiplicities(&self) -> Vec<(u32, usize)> {
        let mut out: Vec<(u32, usize)> = Vec::new();
        for &a in self.valences.iter().rev() {
            match out.last_mut() {
                Some((v, m)) if *v == a => *m += 1,
                _ => out.push((a, 1)),
            }
        }
        out
    }

    pub fn count_of(&self, a: u32) -> usize {
        self.valences.iter().filter(|&&x| x == a).count()
    }
}

/// Exponent notation, e.g. `<3^13.8.24>`.
impl fmt::Display for Species {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .multiplicities()
            .into_iter()
            .map(|(a, m)| if m == 1 { a.to_string() } else { format!("{a}^{m}") })
            .collect();
        write!(f, "<{}>", parts.join("."))
    }
}

/// Parses the exponent notation back; the block size must be given
/// separately, so this yields the raw valence list.
pub fn parse_valences(s: &str) -> Result<Vec<u32>, SpeciesError> {
    let err = || SpeciesError::Parse(s.to_string());
    let body = s.trim().trim_start_matches('<').trim_end_matches('>');
    let mut out = Vec::new();
    for part in body.split('.') {
        let (a, m) = match part.split_once('^') {
            Some((a, m)) => (a, m.parse::<usize>().map_err(|_| err())?),
            None => (part, 1),
        };
        let a = u32::from_str(a.trim()).map_err(|_| err())?;
        out.extend(std::iter::repeat(a).take(m));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(i: u32, s: &str) -> Species {
        Species::new(i, parse_valences(s).unwrap()).unwrap()
    }

    #[test]
    fn bounds() {
        assert_eq!(node_bounds(1).unwrap(), (5, 6));
        assert_eq!(node_bounds(3).unwrap(), (15, 18));
        assert!(node_bounds(0).is_err());
        assert_eq!(trivalent_bounds(3, 15).unwrap(), (9, 13));
        assert_eq!(trivalent_bounds(1, 6).unwrap(), (6, 6));
        assert_eq!(trivalent_bounds(2, 10).unwrap(), (6, 9));
        assert!(trivalent_bounds(2, 13).is_err());
    }

    #[test]
    fn small_cases() {
        let s: Vec<String> = enumerate_species(1, 5).unwrap().iter().map(|s| s.to_string()).collect();
        assert_eq!(s, vec!["<3^4.6>", "<3^3.4^2>"]);
        let s: Vec<String> = enumerate_species(3, 17).unwrap().iter().map(|s| s.to_string()).collect();
        assert_eq!(s, vec!["<3^16.6>", "<3^15.4^2>"]);
        let all: Vec<String> = enumerate_species(3, 15).unwrap().iter().map(|s| s.to_string()).collect();
        assert_eq!(all.len(), 14, "{all:?}");
        assert_eq!(enumerate_species_capped(3, 15, 36).unwrap().len(), 13);
    }

    #[test]
    fn stats() {
        let b = block_stats(&sp(2, "<3^6.4^4>"));
        assert_eq!((b.v, b.e), (Rational::new(3, 2), Rational::new(5, 2)));
        let b = block_stats(&sp(1, "<3^6>"));
        assert_eq!((b.v, b.e), (Rational::from_integer(2), Rational::from_integer(3)));
    }

    #[test]
    fn average_valence_range() {
        for i in 1..=4 {
            for n in 5 * i..=6 * i {
                let p = average_valence(i, n);
                assert!(p >= Rational::from_integer(3) && p <= Rational::new(10, 3));
            }
        }
    }

    #[test]
    fn roundtrip_notation() {
        let s = sp(3, "<3^12.4.6.12>");
        assert_eq!(s.to_string(), "<3^12.4.6.12>");
        assert!(Species::new(1, vec![3, 3, 3, 3, 3]).is_err());
    }
}
