use std::collections::BTreeSet;
use std::time::Instant;

use pentile::blockforms::list_block_forms;
use pentile::boundary::{delta, enumerate_partitions, PartitionedCode};
use pentile_oracles::brute_partitions;
use pentile_oracles::fixtures::{PENT_HEPT_CODE, PENT_HEPT_PARTITIONS};

fn digits(s: &str) -> Vec<u32> {
    s.chars().map(|c| c.to_digit(10).unwrap()).collect()
}

fn core(code: &[u32], i: u32) -> BTreeSet<Vec<usize>> {
    enumerate_partitions(code, i).into_iter().map(|p| p.marks).collect()
}

fn form_codes(i: u32) -> BTreeSet<Vec<u32>> {
    list_block_forms(i).unwrap().iter().map(|f| f.code.clone()).collect()
}

#[test]
fn pentagon_heptagon_partitions() {
    let start = Instant::now();
    let code = digits(PENT_HEPT_CODE);
    assert_eq!(delta(&code), 6);
    let got: BTreeSet<String> = enumerate_partitions(&code, 2).iter().map(|p| p.to_string()).collect();
    let want: BTreeSet<String> = PENT_HEPT_PARTITIONS.iter().map(|s| s.to_string()).collect();
    assert_eq!(got.len(), 22);
    assert_eq!(got, want);
    assert!(start.elapsed().as_secs_f64() < 1.0);
}

#[test]
fn equals_brute_force_on_small_block_codes() {
    for i in 1..=2 {
        let codes = form_codes(i);
        assert!(!codes.is_empty());
        for code in codes {
            assert_eq!(core(&code, i), brute_partitions(&code), "i={i} code={code:?}");
        }
    }
}

#[test]
fn contains_brute_force_on_three_block_codes() {
    // The interior-1s rule is relaxed for codes with adjacent non-1s, so
    // the core may keep more placements, never fewer.
    for code in form_codes(3) {
        let core = core(&code, 3);
        let brute = brute_partitions(&code);
        assert!(brute.is_subset(&core), "code={code:?}");
        let has_adjacent_big = (0..code.len()).any(|p| code[p] > 1 && code[(p + 1) % code.len()] > 1);
        if !has_adjacent_big {
            assert_eq!(core, brute, "code={code:?}");
        }
    }
}

#[test]
fn six_node_single_tile_code() {
    let ps = enumerate_partitions(&[1; 6], 1);
    assert_eq!(ps.len(), 1);
    assert_eq!(ps[0].marks, vec![0, 1, 2, 3, 4, 5]);
}

#[test]
fn notation_round_trips() {
    for s in PENT_HEPT_PARTITIONS {
        let p: PartitionedCode = s.parse().unwrap();
        assert_eq!(p.to_string(), s);
        assert_eq!(pentile_oracles::notation(&p.code, &p.marks), s);
        assert_eq!(p.arc_count(), 6);
    }
}

#[test]
fn oversized_imbalance_has_no_partitions() {
    assert!(enumerate_partitions(&[1; 8], 1).is_empty());
}
