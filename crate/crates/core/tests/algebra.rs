use num_traits::{One, Zero};
use pentile::algebra::*;
use pentile::Rational;
use proptest::prelude::*;

/// Rank by plain Gaussian elimination, independent of the crate's RREF.
fn rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c] / rows[r][c];
                for j in 0..cols {
                    let v = rows[r][j];
                    rows[i][j] -= f * v;
                }
            }
        }
        r += 1;
    }
    r
}

fn angle_rows(s: &EquationSystem) -> Vec<Vec<Rational>> {
    s.angles.iter().map(|e| e.coef.iter().cloned().chain([e.rhs]).collect()).collect()
}

fn side_rows(s: &EquationSystem) -> Vec<Vec<Rational>> {
    s.sides.iter().map(|e| e.coef.to_vec()).collect()
}

/// Same row space: neither side adds rank to the other.
fn same_span(x: Vec<Vec<Rational>>, y: Vec<Vec<Rational>>) -> bool {
    let both: Vec<_> = x.iter().chain(&y).cloned().collect();
    let r = rank(both);
    r == rank(x) && r == rank(y)
}

/// A convex pentagon's angles (π units) and sides, plus random relations it
/// satisfies.
#[derive(Debug, Clone)]
struct Planted {
    angles: [Rational; 5],
    sides: [Rational; 5],
    system: EquationSystem,
}

fn planted() -> impl Strategy<Value = Planted> {
    let angle = (1i128..12, 2i128..13).prop_map(|(p, q)| Rational::new(p % q + 1, q + 1));
    (
        proptest::array::uniform4(angle),
        proptest::array::uniform5(1i128..7),
        proptest::collection::vec(proptest::array::uniform5(-2i128..3), 0..5),
        proptest::collection::vec((proptest::array::uniform5(-2i128..3), 0usize..5), 0..5),
    )
        .prop_filter_map("angles must close convexly", |(four, sides, acoefs, scoefs)| {
            let last = Rational::from_integer(3) - four.iter().cloned().sum::<Rational>();
            if last <= Rational::zero() || last >= Rational::one() {
                return None;
            }
            let angles = [four[0], four[1], four[2], four[3], last];
            let sides = sides.map(Rational::from_integer);
            let mut system = EquationSystem::new();
            for c in acoefs {
                let coef = c.map(Rational::from_integer);
                let rhs = coef.iter().zip(&angles).map(|(x, y)| x * y).sum();
                system.angles.push(AngleEq { coef, rhs });
            }
            for (c, k) in scoefs {
                let mut coef = c.map(Rational::from_integer);
                let rest: Rational = (0..5).filter(|&j| j != k).map(|j| coef[j] * sides[j]).sum();
                coef[k] = -rest / sides[k];
                if coef.iter().all(|x| x.is_zero()) {
                    continue;
                }
                system.sides.push(SideEq { coef });
            }
            Some(Planted { angles, sides, system })
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn simplify_is_idempotent_and_preserves_solutions(p in planted()) {
        let red = match simplify(&p.system) {
            Simplified::Reduced(r) => r,
            other => panic!("a convex solution exists, got {other:?}"),
        };
        prop_assert_eq!(simplify(&red.to_system()), Simplified::Reduced(red.clone()));
        let back = red.to_system();
        prop_assert!(same_span(angle_rows(&p.system), angle_rows(&back)));
        prop_assert!(same_span(side_rows(&p.system), side_rows(&back)) || (p.system.sides.is_empty() && back.sides.is_empty()));
        for e in &back.angles {
            let lhs: Rational = e.coef.iter().zip(&p.angles).map(|(x, y)| x * y).sum();
            prop_assert_eq!(lhs, e.rhs);
        }
        for e in &back.sides {
            let lhs: Rational = e.coef.iter().zip(&p.sides).map(|(x, y)| x * y).sum();
            prop_assert!(lhs.is_zero());
        }
    }
}

fn reduce(s: &EquationSystem) -> ReducedSystem {
    match simplify(s) {
        Simplified::Reduced(r) => r,
        other => panic!("{other:?}"),
    }
}

#[test]
fn classification_is_invariant_under_relabeling() {
    for t in catalog() {
        let base = classify_extended(&reduce(&t.system));
        match &base {
            Classification::Known { all, .. } => assert!(all.contains(&t.id), "type {} not self-recognized", t.id),
            Classification::Untyped => panic!("type {} not recognized", t.id),
        }
        for g in Relabel::all() {
            let moved = reduce(&g.system(&t.system));
            assert_eq!(classify_extended(&moved), base, "type {} under {g:?}", t.id);
            assert_eq!(classify(&moved), classify(&reduce(&t.system)), "type {} under {g:?}", t.id);
        }
    }
}

#[test]
fn relabelings_form_the_dihedral_group() {
    let all: Vec<Relabel> = Relabel::all().collect();
    assert_eq!(all.len(), 10);
    for g in &all {
        let perm: Vec<usize> = (0..5).map(|x| g.corner(x)).collect();
        let mut sorted = perm.clone();
        sorted.sort();
        assert_eq!(sorted, vec![0, 1, 2, 3, 4]);
        // Sides keep joining the images of their corners.
        for x in 0..5 {
            let (p, q) = (g.corner((x + 4) % 5), g.corner(x));
            let s = g.side(x);
            assert!([(p, q), (q, p)].contains(&((s + 4) % 5, s)), "{g:?} side {x}");
        }
    }
}

#[test]
fn worked_example_classifications() {
    let two = reduce(&EquationSystem::parse("2A+B=2π, C=π/2, D=3π/2-A, a=b, e=a-2c").unwrap());
    assert!(matches!(classify(&two), Classification::Known { id: 11, .. }));
    let one = reduce(&EquationSystem::parse("B+C+D=2π, A+E=π, b=e, c=d").unwrap());
    assert!(matches!(classify(&one), Classification::Known { id: 1, .. }));
    let fifteen = reduce(&EquationSystem::parse("A=π/3, B=3π/4, C=7π/12, D=π/2, E=5π/6, a=2b=2d=2e").unwrap());
    assert_eq!(classify(&fifteen), Classification::Untyped);
    assert!(matches!(classify_extended(&fifteen), Classification::Known { id: 15, .. }));
}

#[test]
fn inconsistent_and_nonconvex_systems_are_rejected() {
    assert_eq!(simplify(&EquationSystem::parse("A=π/2, A=π/3").unwrap()), Simplified::Inconsistent);
    assert!(matches!(simplify(&EquationSystem::parse("A=π/2, A+B=3π/2").unwrap()), Simplified::ConvexityViolation(_)));
    assert!(matches!(simplify(&EquationSystem::parse("a+b=0").unwrap()), Simplified::ConvexityViolation(_)));
}
