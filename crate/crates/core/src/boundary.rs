//! Boundary codes, the 1-imbalance statistic and partitioned boundary codes.

use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BoundaryError {
    #[error("malformed partitioned code {0:?}")]
    Parse(String),
}

/// `#1s - #non-1s`.
pub fn delta(code: &[u32]) -> i64 {
    code.iter().map(|&b| if b == 1 { 1 } else { -1 }).sum()
}

/// A boundary code with marked arc endpoints (sorted positions).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartitionedCode {
    pub code: Vec<u32>,
    pub marks: Vec<usize>,
}

impl PartitionedCode {
    pub fn arc_count(&self) -> usize {
        self.marks.len()
    }

    /// Arc `a` as the code entries from mark `a` to mark `a + 1` inclusive.
    pub fn arc(&self, a: usize) -> Vec<u32> {
        let m = self.code.len();
        let (s, e) = self.arc_bounds(a);
        let len = (e + m - s) % m;
        let len = if len == 0 { m } else { len };
        (0..=len).map(|t| self.code[(s + t) % m]).collect()
    }

    /// Start and end positions of arc `a`.
    pub fn arc_bounds(&self, a: usize) -> (usize, usize) {
        let k = self.marks.len();
        (self.marks[a], self.marks[(a + 1) % k])
    }

    pub fn arc_len(&self, a: usize) -> usize {
        let m = self.code.len();
        let (s, e) = self.arc_bounds(a);
        match (e + m - s) % m {
            0 => m,
            l => l,
        }
    }
}

/// Machine notation: digits, a trailing `'` marks an endpoint.
impl fmt::Display for PartitionedCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (p, b) in self.code.iter().enumerate() {
            write!(f, "{b}")?;
            if self.marks.contains(&p) {
                write!(f, "'")?;
            }
        }
        Ok(())
    }
}

impl FromStr for PartitionedCode {
    type Err = BoundaryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || BoundaryError::Parse(s.to_string());
        let mut code = Vec::new();
        let mut marks = Vec::new();
        for c in s.trim().chars() {
            match c {
                '1'..='9' => code.push(c.to_digit(10).unwrap()),
                '\'' => {
                    let p = code.len().checked_sub(1).ok_or_else(err)?;
                    if marks.last() == Some(&p) {
                        return Err(err());
                    }
                    marks.push(p);
                }
                c if c.is_whitespace() => {}
                _ => return Err(err()),
            }
        }
        if code.is_empty() {
            return Err(err());
        }
        Ok(PartitionedCode { code, marks })
    }
}

/// Whether a mark placement passes the imbalance constraints.
pub fn passes_imbalance(code: &[u32], marks: &[usize]) -> bool {
    let d = delta(code);
    let k = marks.len();
    let on_ones = marks.iter().filter(|&&p| code[p] == 1).count();
    match d {
        d if d > 6 => false,
        6 => k == 6 && on_ones == k,
        5 => (5..=6).contains(&k) && on_ones == k,
        4 => match k {
            4 | 5 => on_ones == k,
            6 => on_ones >= 5,
            _ => false,
        },
        _ => true,
    }
}

/// Interior runs of 1s must meet a run of at least as many non-1 entries
/// on some arc, since 1s cannot meet 1s.
pub fn passes_interior_ones(code: &[u32], marks: &[usize]) -> bool {
    let m = code.len();
    let mut longest_big = 0;
    for s in 0..m {
        let run = (0..m).take_while(|t| code[(s + t) % m] > 1).count();
        longest_big = longest_big.max(run);
    }
    let mut run = 0;
    // Walk once around starting just after a mark so runs never wrap a mark.
    let first = marks[0];
    for t in 1..=m {
        let p = (first + t) % m;
        if marks.contains(&p) {
            run = 0;
        } else if code[p] == 1 {
            run += 1;
            if run > longest_big {
                return false;
            }
        } else {
            run = 0;
        }
    }
    true
}

/// Every placement of 3–6 arc endpoints surviving the imbalance and
/// interior-1 filters, ordered by mark positions. No symmetry reduction.
pub fn enumerate_partitions(code: &[u32], _i: u32) -> Vec<PartitionedCode> {
    let m = code.len();
    let mut out = Vec::new();
    if delta(code) > 6 || m > 31 {
        return out;
    }
    for mask in 0u32..1 << m {
        let k = mask.count_ones() as usize;
        if !(3..=6).contains(&k) {
            continue;
        }
        let marks: Vec<usize> = (0..m).filter(|p| mask & (1 << p) != 0).collect();
        if passes_imbalance(code, &marks) && passes_interior_ones(code, &marks) {
            out.push(PartitionedCode { code: code.to_vec(), marks });
        }
    }
    out.sort();
    out
}

/// How two arcs meet: `Same` (e1⁺ with e2⁺, entries pair up reversed),
/// `Opposite` (e1⁺ with e2⁻, entries pair up in order) or `Either`
/// (a symmetric edge, both conditions).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Same,
    Opposite,
    Either,
}

/// Matching conditions for two arcs given as entries from endpoint to
/// endpoint. With per-position valence targets the sums must hit them;
/// without, only the 1+1 ban and the `2i` cap apply.
pub fn check_edge_match(
    e1: &[u32],
    e2: &[u32],
    o: Orientation,
    i: u32,
    v1: Option<&[u32]>,
    v2: Option<&[u32]>,
) -> bool {
    if e1.len() != e2.len() || e1.len() < 2 {
        return false;
    }
    let k = e1.len() - 1;
    let cond = |reversed: bool| {
        (1..k).all(|t| {
            let u = if reversed { k - t } else { t };
            let s = e1[t] + e2[u];
            if s < 3 || s > 2 * i {
                return false;
            }
            v1.is_none_or(|v| v[t] == s) && v2.is_none_or(|v| v[u] == s)
        })
    };
    match o {
        Orientation::Same => cond(true),
        Orientation::Opposite => cond(false),
        Orientation::Either => cond(true) && cond(false),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code(s: &str) -> Vec<u32> {
        s.chars().map(|c| c.to_digit(10).unwrap()).collect()
    }

    #[test]
    fn deltas() {
        assert_eq!(delta(&code("21112111")), 4);
        assert_eq!(delta(&code("2111211111")), 6);
        assert_eq!(delta(&code("11111")), 5);
    }

    #[test]
    fn notation_roundtrip() {
        let p: PartitionedCode = "2'1'1'1'21'1'11'".parse().unwrap();
        assert_eq!(p.marks, vec![0, 1, 2, 3, 5, 6, 8]);
        assert_eq!(p.to_string(), "2'1'1'1'21'1'11'");
        assert!("'21".parse::<PartitionedCode>().is_err());
        assert!("21''".parse::<PartitionedCode>().is_err());
        assert!("2x1".parse::<PartitionedCode>().is_err());
    }

    #[test]
    fn table_two_count() {
        let ps = enumerate_partitions(&code("2111211111"), 2);
        assert_eq!(ps.len(), 22);
        assert_eq!(ps[0].to_string(), "21'1'1'21'1'11'1");
    }

    #[test]
    fn single_cells() {
        let ps = enumerate_partitions(&code("111111"), 1);
        assert_eq!(ps.len(), 1);
        assert_eq!(ps[0].marks.len(), 6);
        let ps = enumerate_partitions(&code("11111"), 1);
        assert_eq!(ps.len(), 1);
    }

    #[test]
    fn edge_matching() {
        let (a, b) = (code("111"), code("121"));
        assert!(!check_edge_match(&a, &a, Orientation::Opposite, 2, None, None));
        assert!(check_edge_match(&b, &a, Orientation::Opposite, 2, Some(&[0, 3, 0]), None));
        let c = code("1221");
        assert!(check_edge_match(&c, &c, Orientation::Same, 2, Some(&[0, 4, 4, 0]), None));
        assert!(!check_edge_match(&a, &c, Orientation::Same, 2, None, None));
    }

    #[test]
    fn arcs() {
        let p: PartitionedCode = "21'1'1'21'1'11'1".parse().unwrap();
        assert_eq!(p.arc(2), vec![1, 2, 1]);
        assert_eq!(p.arc(5), vec![1, 1, 2, 1]);
        assert_eq!(p.arc_len(5), 3);
    }
}
