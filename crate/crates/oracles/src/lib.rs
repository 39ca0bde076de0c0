//! Independent brute-force oracles and pinned reference values used by the
//! test suites. Nothing here depends on the main crate.

pub mod fixtures;

use std::collections::BTreeSet;

use num_rational::Ratio;

type Q = Ratio<i64>;

/// Every multiset of `n` valences (each ≥ 3) whose reciprocals sum to
/// `(n − 2i)/2`, as non-increasing vectors.
///
/// Scans non-decreasing sequences, pruning only when the remaining sum is
/// non-positive or exceeds what the remaining slots give at the current
/// minimum; the last slot is solved directly.
pub fn brute_species(i: u32, n: u32) -> BTreeSet<Vec<u32>> {
    let target = Q::new(n as i64 - 2 * i as i64, 2);
    let mut out = BTreeSet::new();
    let mut cur = Vec::new();
    scan(n as usize, 3, target, &mut cur, &mut out);
    out
}

fn scan(left: usize, min: u32, rem: Q, cur: &mut Vec<u32>, out: &mut BTreeSet<Vec<u32>>) {
    if left == 0 {
        if rem == Q::from_integer(0) {
            let mut v = cur.clone();
            v.sort_unstable_by(|a, b| b.cmp(a));
            out.insert(v);
        }
        return;
    }
    if rem <= Q::from_integer(0) {
        return;
    }
    if left == 1 {
        // The last valence is forced: 1/rem must be an integer ≥ min.
        let a = rem.recip();
        if a.is_integer() && a.to_integer() >= min as i64 {
            cur.push(a.to_integer() as u32);
            scan(0, min, Q::from_integer(0), cur, out);
            cur.pop();
        }
        return;
    }
    let mut a = min;
    loop {
        // With every remaining value ≥ a the sum is at most left/a.
        if Q::new(left as i64, a as i64) < rem {
            return;
        }
        let next = rem - Q::new(1, a as i64);
        if next >= Q::from_integer(0) {
            cur.push(a);
            scan(left - 1, a, next, cur, out);
            cur.pop();
        }
        a += 1;
    }
}

/// `#1s − #non-1s` of a boundary code.
fn imbalance(code: &[u32]) -> i64 {
    code.iter().map(|&b| if b == 1 { 1 } else { -1 }).sum()
}

/// Every set of marked positions of `code` (as sorted position lists) with
/// 3–6 arcs, the imbalance rules for Δ ≥ 4, and no two consecutive unmarked
/// 1s inside an arc.
pub fn brute_partitions(code: &[u32]) -> BTreeSet<Vec<usize>> {
    let m = code.len();
    assert!(m <= 16, "code too long for the oracle");
    let d = imbalance(code);
    let mut out = BTreeSet::new();
    for mask in 0u32..(1 << m) {
        let marks: Vec<usize> = (0..m).filter(|&p| mask >> p & 1 == 1).collect();
        let k = marks.len();
        if !(3..=6).contains(&k) {
            continue;
        }
        let ones = marks.iter().filter(|&&p| code[p] == 1).count();
        let ok = match d {
            d if d > 6 => false,
            6 => k == 6 && ones == k,
            5 => k >= 5 && ones == k,
            4 => ((k == 4 || k == 5) && ones == k) || (k == 6 && ones >= 5),
            _ => true,
        };
        if !ok {
            continue;
        }
        let interior_pair = (0..m).any(|p| {
            let q = (p + 1) % m;
            code[p] == 1 && code[q] == 1 && !marks.contains(&p) && !marks.contains(&q)
        });
        if !interior_pair {
            out.insert(marks);
        }
    }
    out
}

/// Machine notation of a marked code: a trailing `'` marks an endpoint.
pub fn notation(code: &[u32], marks: &[usize]) -> String {
    let mut s = String::new();
    for (p, b) in code.iter().enumerate() {
        s.push(char::from_digit(*b, 10).expect("single digit"));
        if marks.contains(&p) {
            s.push('\'');
        }
    }
    s
}

/// Whether found systems reproduce an expected type set. Each system is
/// given by every type it matches (a system can match several types under
/// relabeling). Agreement: each expected type is matched by some system,
/// and no typed system lies wholly outside the expected set.
pub fn agrees(expected: &[u32], systems: &[Vec<u32>]) -> bool {
    let typed: Vec<&Vec<u32>> = systems.iter().filter(|s| !s.is_empty()).collect();
    expected.iter().all(|t| typed.iter().any(|s| s.contains(t)))
        && typed.iter().all(|s| s.iter().any(|t| expected.contains(t)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn species_examples() {
        assert_eq!(brute_species(1, 6), BTreeSet::from([vec![3; 6]]));
        let mut a = vec![3; 10];
        a.insert(0, 6);
        let mut b = vec![3; 9];
        b.insert(0, 4);
        b.insert(0, 4);
        assert_eq!(brute_species(2, 11), BTreeSet::from([a, b]));
        assert_eq!(brute_species(3, 18), BTreeSet::from([vec![3; 18]]));
    }

    #[test]
    fn six_ones_mark_everything() {
        let ps = brute_partitions(&[1; 6]);
        assert_eq!(ps.len(), 1);
        assert_eq!(ps.iter().next().unwrap().len(), 6);
    }

    #[test]
    fn agreement_rule() {
        assert!(agrees(&[4], &[vec![2, 4]]));
        assert!(agrees(&[], &[vec![]]));
        assert!(!agrees(&[1, 2], &[vec![1]]));
        assert!(!agrees(&[1], &[vec![1], vec![3]]));
    }

    #[test]
    fn notation_marks_endpoints() {
        assert_eq!(notation(&[2, 1, 1], &[1, 2]), "21'1'");
    }
}
