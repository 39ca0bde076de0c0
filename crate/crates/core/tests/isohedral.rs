use pentile::isohedral::{database, lookup, Source, TopologicalType};

// Vertex stars generated from tactile's tiling geometry: for each corner, the
// corner-orbit representatives of the tiles meeting there.
const STARS: &str = include_str!("data/ih_stars.txt");

#[test]
fn stars_match_geometry() {
    let mut checked = 0;
    for line in STARS.lines().filter(|l| !l.trim().is_empty()) {
        let (name, rest) = line.split_once(' ').unwrap();
        let t = lookup(name).unwrap();
        let orbit = t.corner_orbits();
        let want: Vec<Vec<usize>> = rest
            .split('|')
            .map(|s| s.split_whitespace().map(|x| x.parse().unwrap()).collect())
            .collect();
        for (c, w) in want.iter().enumerate() {
            let mut got: Vec<usize> = t.star(c).iter().map(|&x| orbit[x]).collect();
            got.sort_unstable();
            assert_eq!(&got, w, "{name} corner {c}");
        }
        checked += 1;
    }
    assert_eq!(checked, database().len());
}

#[test]
fn adjacency_is_involution() {
    for t in database() {
        for ch in t.letters() {
            let y = t.adjacent(ch);
            let back = t.adjacent(y.ch);
            assert_eq!((back.ch, back.sign), (ch, y.sign), "{}", t.name);
        }
        assert_eq!(t.edge_classes.len(), t.topo.edge_count());
    }
}

#[test]
fn table_of_one_block_types() {
    let want = [
        ("IH21", "[a+b+c+d+e+;e+c+b+d+a+]", "αββγα"),
        ("IH22", "[a+b+c+d+e+;a-e+d-c-b+]", "αβγγβ"),
        ("IH23", "[a+b+c+d+e+;a+e+c+d+b+]", "αβγδβ"),
        ("IH24", "[a+b+c+d+e+;a-e+c+d+b+]", "αβγδβ"),
        ("IH25", "[a+b+c+d+e+;a+e+d-c-b+]", "αβγγβ"),
        ("IH26", "[ab+c+c-b-;ab-c+]", "αβγγβ"),
        ("IH27", "[a+b+c+d+e+;a+d-e-b-c-]", "αβγβγ"),
        ("IH29", "[ab+c+c-b-;ac+b+]", "αββββ"),
    ];
    for (name, sym, ec) in want {
        let t = lookup(name).unwrap();
        assert_eq!(t.symbol(), sym, "{name}");
        assert_eq!(t.edge_classes.iter().collect::<String>(), ec, "{name}");
        assert_eq!(t.source, Source::Paper);
    }
    let ih28 = lookup("IH28").unwrap();
    assert_eq!(ih28.topo, TopologicalType::T3_2_4_3_4);
    assert_eq!(ih28.edge_classes.iter().collect::<String>(), "αββγγ");
}

#[test]
fn every_topological_type_is_populated() {
    for topo in TopologicalType::ALL {
        assert!(!pentile::isohedral::types_of(topo).is_empty(), "{topo}");
    }
}
