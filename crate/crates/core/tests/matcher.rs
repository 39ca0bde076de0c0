use pentile::algebra::{classify, equivalent, simplify, Classification, EquationSystem, ReducedSystem, Simplified};
use pentile::blockforms::{enumerate_labelings, list_block_forms, BlockForm};
use pentile::boundary::PartitionedCode;
use pentile::isohedral::lookup;
use pentile::matcher::*;
use std::sync::Arc;

fn form(i: u32, name: &str) -> Arc<BlockForm> {
    list_block_forms(i).unwrap().into_iter().find(|f| f.name == name).unwrap()
}

fn reduced(text: &str) -> ReducedSystem {
    match simplify(&EquationSystem::parse(text).unwrap()) {
        Simplified::Reduced(r) => r,
        other => panic!("{other:?}"),
    }
}

fn names(p: &PartitionedCode, i: u32) -> Vec<String> {
    compatible_isohedral_types(p, i).iter().map(|t| t.name.clone()).collect()
}

/// Reduced systems from every labeling of `form` under `ih` that match `want`.
fn hits(form: &Arc<BlockForm>, marks: &[usize], ih: &str, want: &ReducedSystem) -> Vec<ReducedSystem> {
    let p = PartitionedCode { code: form.code.clone(), marks: marks.to_vec() };
    let ih = lookup(ih).unwrap();
    let mut out = Vec::new();
    for l in enumerate_labelings(form) {
        for a in apply_incidence_symbol(&l, &p, ih) {
            if let Simplified::Reduced(r) = simplify(&extract_equations(&a)) {
                if equivalent(&r, want) {
                    out.push(r);
                }
            }
        }
    }
    out
}

#[test]
fn compatible_types_for_two_block_partition() {
    let p = PartitionedCode { code: form(2, "2-57").code.clone(), marks: vec![2, 3, 5, 6, 7, 9] };
    assert_eq!(names(&p, 2), ["IH4", "IH5", "IH6"]);
}

#[test]
fn compatible_types_for_three_block_partition() {
    // 1121121112 with marks at 0,1,2,4,6,8, read in the opposite direction.
    let f = form(3, "3-r556");
    let p = PartitionedCode { code: f.code.clone(), marks: vec![0, 1, 2, 4, 6, 8] };
    assert_eq!(p.to_string(), "2'1'1'21'11'21'1");
    assert_eq!(names(&p, 3), ["IH2", "IH5", "IH7", "IH15", "IH16"]);
}

#[test]
fn two_block_ih6_gives_type_eleven() {
    let want = reduced("2A+B=2π, C=π/2, D=3π/2-A, a=b, e=a-2c");
    let found = hits(&form(2, "2-57"), &[2, 3, 5, 6, 7, 9], "IH6", &want);
    assert!(!found.is_empty());
    for r in &found {
        assert_eq!(classify(r), Classification::Known { id: 11, all: vec![11] });
    }
}

#[test]
fn three_block_ih5_gives_type_fifteen() {
    let want = reduced("2A+B+C=2π, 2E+A=2π, 2D+π=2π, 2C+E=2π, 2B+D=2π, e=b=d, a=e+d");
    assert!(equivalent(&want, &reduced("A=π/3, B=3π/4, C=7π/12, D=π/2, E=5π/6, a=2b=2d=2e")));
    let found = hits(&form(3, "3-r556"), &[0, 1, 2, 4, 6, 8], "IH5", &want);
    assert!(!found.is_empty());
    // Unique up to symmetry.
    assert!(found.iter().all(|r| equivalent(r, &found[0])));
    assert_eq!(classify(&found[0]), Classification::Untyped);
}

#[test]
fn one_block_ih22_gives_type_one() {
    let f = &list_block_forms(1).unwrap()[0];
    let want = reduced("B+C+D=2π, A+E=π, b=e, c=d");
    let found = hits(f, &[0, 1, 2, 3, 4], "IH22", &want);
    assert!(!found.is_empty());
    assert!(matches!(classify(&found[0]), Classification::Known { id: 1, .. }));
}

#[test]
fn incompatible_partition_has_no_assignments() {
    let p = PartitionedCode { code: form(2, "2-57").code.clone(), marks: vec![0, 5] };
    assert!(compatible_isohedral_types(&p, 2).is_empty());
}
