use pentile::realizability::ClosureInstance;
use pentile::render::{pentagon_vertices, render_pentagon, RenderError};
use pentile_oracles::fixtures::{type15_sides, TYPE15_ANGLES_DEG};

fn type15() -> ClosureInstance {
    ClosureInstance { angles: TYPE15_ANGLES_DEG.map(f64::to_radians), sides: type15_sides() }
}

#[test]
fn vertices_reproduce_side_lengths_and_convexity() {
    let w = type15();
    let v = pentagon_vertices(&w);
    let mut lengths: Vec<f64> = (0..5).map(|k| {
        let (p, q) = (v[k], v[(k + 1) % 5]);
        (q.0 - p.0).hypot(q.1 - p.1)
    }).collect();
    let mut want = w.sides.to_vec();
    lengths.sort_by(f64::total_cmp);
    want.sort_by(f64::total_cmp);
    for (a, b) in lengths.iter().zip(&want) {
        assert!((a - b).abs() < 1e-9, "{lengths:?} vs {want:?}");
    }
    // Counterclockwise and convex: every turn is a left turn.
    for k in 0..5 {
        let (p, q, r) = (v[k], v[(k + 1) % 5], v[(k + 2) % 5]);
        let cross = (q.0 - p.0) * (r.1 - q.1) - (q.1 - p.1) * (r.0 - q.0);
        assert!(cross > 0.0);
    }
}

#[test]
fn pentagon_svg_is_well_formed() {
    let svg = render_pentagon(&type15()).unwrap();
    assert!(svg.starts_with("<svg") || svg.starts_with("<?xml"));
    assert!(svg.trim_end().ends_with("</svg>"));
    assert!(svg.contains("<polygon"));
    for label in ["A", "B", "C", "D", "E", "a", "b", "c", "d", "e"] {
        assert!(svg.contains(&format!(">{label}<")), "missing label {label}");
    }
}

#[test]
fn open_or_concave_shapes_are_rejected() {
    let mut w = type15();
    w.sides[2] *= 1.5;
    assert!(matches!(render_pentagon(&w), Err(RenderError::InvalidPentagon(_))));
    let flat = ClosureInstance { angles: [std::f64::consts::PI, 0.5, 1.0, 1.0, 0.212], sides: [1.0; 5] };
    assert!(render_pentagon(&flat).is_err());
}
