//! Unmarked isohedral tiling types (3 to 6 edges) and the topological-type
//! filter that decides which block tilings a species can underlie.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::species::Species;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IsohedralError {
    #[error("unknown isohedral type {0:?}")]
    Unknown(String),
    #[error("unknown topological type {0:?}")]
    Topo(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// The 11 topological types of isohedral tilings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TopologicalType {
    T3_6,
    T3_4_6,
    T3_3_4_2,
    T3_2_4_3_4,
    T4_4,
    T3_6_3_6,
    T3_4_6_4,
    T6_3,
    T4_8_2,
    T3_12_2,
    T4_6_12,
}

use TopologicalType::*;

impl TopologicalType {
    pub const ALL: [TopologicalType; 11] =
        [T3_6, T3_4_6, T3_3_4_2, T3_2_4_3_4, T4_4, T3_6_3_6, T3_4_6_4, T6_3, T4_8_2, T3_12_2, T4_6_12];

    /// Vertex valences around the prototile, in the cyclic order of the name.
    pub fn valences(self) -> &'static [u32] {
        match self {
            T3_6 => &[3, 3, 3, 3, 3, 3],
            T3_4_6 => &[3, 3, 3, 3, 6],
            T3_3_4_2 => &[3, 3, 3, 4, 4],
            T3_2_4_3_4 => &[3, 3, 4, 3, 4],
            T4_4 => &[4, 4, 4, 4],
            T3_6_3_6 => &[3, 6, 3, 6],
            T3_4_6_4 => &[3, 4, 6, 4],
            T6_3 => &[6, 6, 6],
            T4_8_2 => &[4, 8, 8],
            T3_12_2 => &[3, 12, 12],
            T4_6_12 => &[4, 6, 12],
        }
    }

    pub fn edge_count(self) -> usize {
        self.valences().len()
    }

    /// Identifies the type of a cyclic valence list (any rotation or reflection).
    pub fn from_cycle(v: &[u32]) -> Option<Self> {
        Self::ALL.into_iter().find(|t| same_cycle(t.valences(), v))
    }
}

fn same_cycle(a: &[u32], b: &[u32]) -> bool {
    let k = a.len();
    if k != b.len() {
        return false;
    }
    (0..k).any(|s| (0..k).all(|j| a[j] == b[(s + j) % k]) || (0..k).all(|j| a[j] == b[(s + k - j) % k]))
}

impl fmt::Display for TopologicalType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.valences();
        let mut parts = Vec::new();
        let mut j = 0;
        while j < v.len() {
            let run = v[j..].iter().take_while(|&&x| x == v[j]).count();
            parts.push(if run == 1 { v[j].to_string() } else { format!("{}^{run}", v[j]) });
            j += run;
        }
        write!(f, "[{}]", parts.join("."))
    }
}

impl FromStr for TopologicalType {
    type Err = IsohedralError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        Self::ALL
            .into_iter()
            .find(|x| x.to_string() == t)
            .ok_or_else(|| IsohedralError::Topo(s.to_string()))
    }
}

/// Largest pentagon-tiling valence at a vertex shared with the block tiling
/// (`12i` for `[4.6.12]`, which the itemized bounds do not list).
pub fn max_tiling_valence(topo: TopologicalType, i: u32) -> u32 {
    let k = match topo {
        T3_6 => 3,
        T3_3_4_2 | T3_2_4_3_4 | T4_4 => 4,
        T3_4_6 | T3_6_3_6 | T6_3 | T3_4_6_4 => 6,
        T4_8_2 => 8,
        T3_12_2 | T4_6_12 => 12,
    };
    k * i
}

// ---------------------------------------------------------------------------
// Topological-type filter

/// Switches for the individual elimination rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lemmas {
    /// Valence caps at block-tiling vertices.
    pub caps: bool,
    /// Each prototile corner sits on a distinct node of valence at least the
    /// corner's valence.
    pub injection: bool,
    /// Nodes of valence above `2i` cannot lie inside a block-tiling edge.
    pub edge_interior: bool,
    /// High-valence entries of multiplicity 1 or 2 force matching corners.
    pub exact: bool,
}

impl Lemmas {
    pub const ALL: Lemmas = Lemmas { caps: true, injection: true, edge_interior: true, exact: true };
    pub const NONE: Lemmas = Lemmas { caps: false, injection: false, edge_interior: false, exact: false };
}

/// A rule that eliminates a topological type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Lemma {
    /// Fewer nodes than prototile corners; no rule needed.
    Structure,
    Caps,
    Injection,
    EdgeInterior,
    Exact,
    /// Only the enabled rules together eliminate the type.
    Combined,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilterReport {
    pub kept: Vec<TopologicalType>,
    /// Each eliminated type with every enabled rule that removes it alone.
    pub eliminated: Vec<(TopologicalType, Vec<Lemma>)>,
}

/// Topological types not excluded by any rule, in canonical order.
pub fn filter_topological_types(s: &Species) -> Vec<TopologicalType> {
    filter_with(s, Lemmas::ALL).kept
}

/// Runs the filter with the given rules and reports which rules remove each
/// eliminated type.
pub fn filter_with(s: &Species, lemmas: Lemmas) -> FilterReport {
    let single = [
        (Lemma::Caps, lemmas.caps, Lemmas { caps: true, ..Lemmas::NONE }),
        (Lemma::Injection, lemmas.injection, Lemmas { injection: true, ..Lemmas::NONE }),
        (Lemma::EdgeInterior, lemmas.edge_interior, Lemmas { edge_interior: true, ..Lemmas::NONE }),
        (Lemma::Exact, lemmas.exact, Lemmas { exact: true, ..Lemmas::NONE }),
    ];
    let mut report = FilterReport { kept: Vec::new(), eliminated: Vec::new() };
    for topo in TopologicalType::ALL {
        if admissible(s, topo, lemmas) {
            report.kept.push(topo);
            continue;
        }
        let why = if !admissible(s, topo, Lemmas::NONE) {
            vec![Lemma::Structure]
        } else {
            let v: Vec<Lemma> =
                single.iter().filter(|(_, on, l)| *on && !admissible(s, topo, *l)).map(|(k, _, _)| *k).collect();
            if v.is_empty() { vec![Lemma::Combined] } else { v }
        };
        report.eliminated.push((topo, why));
    }
    report
}

/// Whether some placement of the prototile corners on the block's nodes
/// satisfies the enabled rules.
///
/// Each corner takes a group of `1..=i` equal-valence nodes of one block (the
/// block may meet a tiling vertex several times). High entries are those of
/// valence above `2i`.
pub fn admissible(s: &Species, topo: TopologicalType, lemmas: Lemmas) -> bool {
    let i = s.i;
    let cap = max_tiling_valence(topo, i);
    if lemmas.caps && s.valences.iter().any(|&a| a > 2 * i && a > cap) {
        return false;
    }
    let mut corners = topo.valences().to_vec();
    corners.sort_unstable_by(|a, b| b.cmp(a));
    let counts: BTreeMap<u32, usize> = s.multiplicities().into_iter().collect();
    let mut rem = counts.clone();
    let mut used = Vec::new();
    place(&corners, &counts, &mut rem, &mut used, i, lemmas)
}

fn place(
    corners: &[u32],
    counts: &BTreeMap<u32, usize>,
    rem: &mut BTreeMap<u32, usize>,
    used: &mut Vec<(u32, u32, usize)>,
    i: u32,
    lemmas: Lemmas,
) -> bool {
    let Some((&t, rest)) = corners.split_first() else {
        return complete(counts, rem, used, i, lemmas);
    };
    let values: Vec<u32> = rem.keys().copied().collect();
    for a in values {
        if lemmas.injection && a < t {
            continue;
        }
        let avail = rem[&a];
        for g in 1..=avail.min(i as usize) {
            *rem.get_mut(&a).unwrap() -= g;
            used.push((t, a, g));
            let ok = place(rest, counts, rem, used, i, lemmas);
            used.pop();
            *rem.get_mut(&a).unwrap() += g;
            if ok {
                return true;
            }
        }
    }
    false
}

fn complete(
    counts: &BTreeMap<u32, usize>,
    rem: &BTreeMap<u32, usize>,
    used: &[(u32, u32, usize)],
    i: u32,
    lemmas: Lemmas,
) -> bool {
    for (&a, &m) in counts.range(2 * i + 1..) {
        if lemmas.edge_interior && rem[&a] > 0 {
            return false;
        }
        if !lemmas.exact {
            continue;
        }
        let mut at: Vec<(u32, usize)> = used.iter().filter(|u| u.1 == a).map(|u| (u.0, u.2)).collect();
        at.sort_unstable();
        let ok = match m {
            1 => at == [(a, 1)],
            // Two distinct corners of valence a; one corner of valence a/2
            // holding both; or one of each.
            2 => at == [(a, 1), (a, 1)] || (a % 2 == 0 && (at == [(a / 2, 2)] || at == [(a / 2, 1), (a, 1)])),
            _ => true,
        };
        if !ok {
            return false;
        }
    }
    true
}

// ---------------------------------------------------------------------------
// Incidence symbols

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// A letter of an incidence symbol; `sign == None` marks a symmetric edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Letter {
    pub ch: char,
    pub sign: Option<Sign>,
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.sign {
            Some(Sign::Plus) => "+",
            Some(Sign::Minus) => "-",
            None => "",
        };
        write!(f, "{}{s}", self.ch)
    }
}

/// Parses a run of letters such as `ab+c+dc-b-`; anything other than
/// lowercase letters and `+`/`-` directly after a letter is rejected.
pub fn parse_letters(s: &str) -> Result<Vec<Letter>, String> {
    let mut out: Vec<Letter> = Vec::new();
    for c in s.chars() {
        match c {
            'a'..='z' => out.push(Letter { ch: c, sign: None }),
            '+' | '-' => {
                let last = out.last_mut().ok_or_else(|| format!("orientation {c:?} without a letter"))?;
                if last.sign.is_some() {
                    return Err(format!("doubled orientation after {:?}", last.ch));
                }
                last.sign = Some(if c == '+' { Sign::Plus } else { Sign::Minus });
            }
            _ => return Err(format!("unexpected character {c:?}")),
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Source {
    Paper,
    Tactile,
}

/// An element of the dihedral group acting on a k-gon's edges:
/// `p -> rot + p`, or `p -> rot - p` when `reflect`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dihedral {
    pub rot: usize,
    pub reflect: bool,
}

impl Dihedral {
    pub fn edge(self, p: usize, k: usize) -> usize {
        if self.reflect {
            (self.rot + k - p % k) % k
        } else {
            (self.rot + p) % k
        }
    }

    /// Corner `c` is the start of edge `c`.
    pub fn corner(self, c: usize, k: usize) -> usize {
        if self.reflect {
            (self.rot + 1 + k - c % k) % k
        } else {
            (self.rot + c) % k
        }
    }

    pub fn all(k: usize) -> impl Iterator<Item = Dihedral> {
        (0..2 * k).map(move |j| Dihedral { rot: j % k, reflect: j >= k })
    }
}

/// How edge `p` of a tile meets edge `m` of its neighbour. `reversed` means
/// the neighbour is a direct copy, so the edge's start meets `m`'s end.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Pairing {
    pub m: usize,
    pub reversed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsohedralType {
    pub name: String,
    pub topo: TopologicalType,
    /// Valence of the block-tiling vertex at the start of each edge.
    pub corners: Vec<u32>,
    pub tile: Vec<Letter>,
    pub adjacency: Vec<Letter>,
    pub edge_classes: Vec<char>,
    pub source: Source,
}

impl IsohedralType {
    pub fn edge_count(&self) -> usize {
        self.tile.len()
    }

    pub fn number(&self) -> u32 {
        self.name[2..].parse().unwrap_or(0)
    }

    pub fn symbol(&self) -> String {
        let t: String = self.tile.iter().map(|l| l.to_string()).collect();
        let a: String = self.adjacency.iter().map(|l| l.to_string()).collect();
        format!("[{t};{a}]")
    }

    /// Distinct tile letters in order of first appearance.
    pub fn letters(&self) -> Vec<char> {
        let mut out = Vec::new();
        for l in &self.tile {
            if !out.contains(&l.ch) {
                out.push(l.ch);
            }
        }
        out
    }

    /// The adjacency entry of a tile letter.
    pub fn adjacent(&self, ch: char) -> Letter {
        let j = self.letters().iter().position(|&c| c == ch).expect("letter of the tile symbol");
        self.adjacency[j]
    }

    /// Symmetries of the labeled tile: dihedral maps preserving letters,
    /// with orientations flipped by reflections.
    pub fn stabilizer(&self) -> Vec<Dihedral> {
        let k = self.edge_count();
        Dihedral::all(k)
            .filter(|g| {
                (0..k).all(|p| {
                    let (a, b) = (self.tile[p], self.tile[g.edge(p, k)]);
                    let s = if g.reflect { a.sign.map(Sign::flip) } else { a.sign };
                    a.ch == b.ch && s == b.sign
                })
            })
            .collect()
    }

    /// Every way edge `p` can meet its neighbour; symmetric letters allow
    /// both correspondences.
    pub fn pairings(&self, p: usize) -> Vec<Pairing> {
        let x = self.tile[p];
        let y = self.adjacent(x.ch);
        let mut out = Vec::new();
        for (m, l) in self.tile.iter().enumerate() {
            if l.ch != y.ch {
                continue;
            }
            match (x.sign, y.sign, l.sign) {
                (Some(sp), Some(u), Some(sm)) => {
                    let minus = [sp, u, sm].iter().filter(|&&s| s == Sign::Minus).count();
                    out.push(Pairing { m, reversed: minus % 2 == 0 });
                }
                _ => {
                    out.push(Pairing { m, reversed: true });
                    out.push(Pairing { m, reversed: false });
                }
            }
        }
        out
    }

    /// Orbit representative (smallest index) of each corner under the
    /// stabilizer.
    pub fn corner_orbits(&self) -> Vec<usize> {
        let k = self.edge_count();
        let stab = self.stabilizer();
        (0..k).map(|c| stab.iter().map(|g| g.corner(c, k)).min().unwrap()).collect()
    }

    /// Edge transitivity classes: edges related by the stabilizer or by
    /// adjacency, labelled in order of first appearance.
    pub fn computed_edge_classes(&self) -> Vec<usize> {
        let k = self.edge_count();
        let mut parent: Vec<usize> = (0..k).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut x = x;
            while p[x] != x {
                x = p[x];
            }
            x
        }
        let stab = self.stabilizer();
        for p in 0..k {
            let mut others: Vec<usize> = self.pairings(p).iter().map(|q| q.m).collect();
            others.extend(stab.iter().map(|g| g.edge(p, k)));
            for q in others {
                let (a, b) = (find(&mut parent, p), find(&mut parent, q));
                parent[a] = b;
            }
        }
        let mut label = BTreeMap::new();
        (0..k)
            .map(|p| {
                let r = find(&mut parent, p);
                let n = label.len();
                *label.entry(r).or_insert(n)
            })
            .collect()
    }

    /// Corners of the tiles met walking around the vertex at corner `c`,
    /// starting with `c` itself and crossing edge `c` first.
    pub fn star(&self, c: usize) -> Vec<usize> {
        let k = self.edge_count();
        let (mut corner, mut exit) = (c, c);
        let mut out = Vec::with_capacity(self.corners[c] as usize);
        for _ in 0..self.corners[c] {
            out.push(corner);
            (corner, exit) = self.step(corner, exit);
        }
        debug_assert!(self.same_state((corner, exit), (c, c % k)));
        out
    }

    // Walk states (corner, exit edge) agree up to a tile symmetry.
    fn same_state(&self, a: (usize, usize), b: (usize, usize)) -> bool {
        let k = self.edge_count();
        self.stabilizer().iter().any(|g| g.corner(a.0, k) == b.0 && g.edge(a.1, k) == b.1)
    }

    // Crosses edge `exit` at corner `corner`; returns the neighbour's corner
    // and the other edge at that corner.
    fn step(&self, corner: usize, exit: usize) -> (usize, usize) {
        let k = self.edge_count();
        let at_start = corner == exit;
        let q = self.pairings(exit)[0];
        let to_start = at_start != q.reversed;
        if to_start {
            (q.m, (q.m + k - 1) % k)
        } else {
            ((q.m + 1) % k, (q.m + 1) % k)
        }
    }

    fn validate(&self) -> Result<(), String> {
        let k = self.edge_count();
        if !(3..=6).contains(&k) || self.corners.len() != k || self.edge_classes.len() != k {
            return Err("edge count mismatch".into());
        }
        if TopologicalType::from_cycle(&self.corners) != Some(self.topo) {
            return Err("corner valences do not match the topological type".into());
        }
        let letters = self.letters();
        if self.adjacency.len() != letters.len() {
            return Err("adjacency length differs from the number of letters".into());
        }
        for &ch in &letters {
            let signs: Vec<bool> = self.tile.iter().filter(|l| l.ch == ch).map(|l| l.sign.is_some()).collect();
            if signs.iter().any(|&s| s != signs[0]) {
                return Err(format!("letter {ch} is both oriented and symmetric"));
            }
            let y = self.adjacent(ch);
            if !letters.contains(&y.ch) {
                return Err(format!("adjacency letter {} not in the tile", y.ch));
            }
            let back = self.adjacent(y.ch);
            if back.ch != ch || back.sign != y.sign {
                return Err(format!("adjacency is not an involution at {ch}"));
            }
        }
        let mut label = BTreeMap::new();
        let classes: Vec<usize> = self
            .edge_classes
            .iter()
            .map(|c| {
                let n = label.len();
                *label.entry(*c).or_insert(n)
            })
            .collect();
        if classes != self.computed_edge_classes() {
            return Err("edge classes inconsistent with the symbol".into());
        }
        for c in 0..k {
            let (mut corner, mut exit) = (c, c);
            for _ in 0..self.corners[c] {
                if self.corners[corner] != self.corners[c] {
                    return Err(format!("vertex at corner {c} mixes valences"));
                }
                (corner, exit) = self.step(corner, exit);
            }
            if !self.same_state((corner, exit), (c, c)) {
                return Err(format!("walk around corner {c} does not close"));
            }
        }
        Ok(())
    }
}

const DATA: &str = include_str!("../data/ih_types.txt");

/// Parses the type database (grammar documented in the data file).
pub fn parse_database(text: &str) -> Result<Vec<IsohedralType>, IsohedralError> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let err = |msg: String| IsohedralError::Parse { line, msg };
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let f: Vec<&str> = body.split_whitespace().collect();
        let [name, topo, corners, symbol, classes, source] = f[..] else {
            return Err(err(format!("expected 6 fields, got {}", f.len())));
        };
        if !name.starts_with("IH") || name[2..].parse::<u32>().is_err() {
            return Err(err(format!("bad name {name:?}")));
        }
        let topo = topo.parse().map_err(|e: IsohedralError| err(e.to_string()))?;
        let corners = corners
            .split('.')
            .map(|x| x.parse::<u32>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| err(e.to_string()))?;
        let inner = symbol
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(|| err("symbol must be bracketed".into()))?;
        let (tile, adjacency) = inner.split_once(';').ok_or_else(|| err("symbol lacks ';'".into()))?;
        let tile = parse_letters(tile).map_err(err)?;
        let adjacency = parse_letters(adjacency).map_err(err)?;
        let source = match source {
            "paper" => Source::Paper,
            "tactile" => Source::Tactile,
            s => return Err(err(format!("unknown source {s:?}"))),
        };
        let t = IsohedralType {
            name: name.to_string(),
            topo,
            corners,
            tile,
            adjacency,
            edge_classes: classes.chars().collect(),
            source,
        };
        t.validate().map_err(err)?;
        out.push(t);
    }
    Ok(out)
}

/// The embedded database, parsed once.
pub fn database() -> &'static [IsohedralType] {
    static DB: OnceLock<Vec<IsohedralType>> = OnceLock::new();
    DB.get_or_init(|| parse_database(DATA).expect("embedded isohedral database is valid"))
}

pub fn lookup(name: &str) -> Result<&'static IsohedralType, IsohedralError> {
    database()
        .iter()
        .find(|t| t.name == name)
        .ok_or_else(|| IsohedralError::Unknown(name.to_string()))
}

/// All types of a topological type.
pub fn types_of(topo: TopologicalType) -> Vec<&'static IsohedralType> {
    database().iter().filter(|t| t.topo == topo).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::species::parse_valences;

    fn sp(i: u32, s: &str) -> Species {
        Species::new(i, parse_valences(s).unwrap()).unwrap()
    }

    fn names(v: &[TopologicalType]) -> Vec<String> {
        v.iter().map(|t| t.to_string()).collect()
    }

    #[test]
    fn topo_notation() {
        assert_eq!(T3_2_4_3_4.to_string(), "[3^2.4.3.4]");
        assert_eq!("[4.8^2]".parse::<TopologicalType>().unwrap(), T4_8_2);
        assert!("[5^3]".parse::<TopologicalType>().is_err());
        assert_eq!(TopologicalType::from_cycle(&[4, 4, 3, 3, 3]), Some(T3_3_4_2));
    }

    #[test]
    fn caps() {
        assert_eq!(max_tiling_valence(T3_6, 2), 6);
        assert_eq!(max_tiling_valence(T4_8_2, 3), 24);
        assert_eq!(max_tiling_valence(T3_2_4_3_4, 1), 4);
        assert_eq!(max_tiling_valence(T4_6_12, 3), 36);
    }

    #[test]
    fn filter_examples() {
        assert_eq!(names(&filter_topological_types(&sp(2, "<3^10.6>"))), ["[3^4.6]"]);
        assert!(filter_topological_types(&sp(3, "<3^13.8.24>")).is_empty());
        assert_eq!(names(&filter_topological_types(&sp(3, "<3^12.4.6.12>"))), ["[4.6.12]"]);
        assert!(filter_topological_types(&sp(4, "<3^17.5.15^2>")).is_empty());
    }

    #[test]
    fn elimination_report_names_rules() {
        let r = filter_with(&sp(3, "<3^13.8.24>"), Lemmas::ALL);
        assert!(r.kept.is_empty());
        let why = |t| r.eliminated.iter().find(|(x, _)| *x == t).unwrap().1.clone();
        assert!(why(T6_3).contains(&Lemma::Caps));
        assert!(why(T4_8_2).contains(&Lemma::Exact));
        assert!(why(T3_12_2).contains(&Lemma::Exact));
        let r = filter_with(&sp(1, "<3^4.6>"), Lemmas::ALL);
        assert!(r.eliminated.contains(&(T3_6, vec![Lemma::Structure])));
    }

    #[test]
    fn paper_symbols_pinned() {
        assert_eq!(lookup("IH6").unwrap().symbol(), "[a+b+c+d+e+f+;a+e-c+f-b-d-]");
        assert_eq!(lookup("IH5").unwrap().symbol(), "[a+b+c+d+e+f+;a+e+d-c-b+f+]");
        assert_eq!(lookup("IH12").unwrap().symbol(), "[ab+c+dc-b-;dc-b-a]");
        let ec: String = lookup("IH27").unwrap().edge_classes.iter().collect();
        assert_eq!(ec, "αβγβγ");
        assert!(lookup("IH19").is_err());
    }

    #[test]
    fn parser_rejects_bad_orientation() {
        assert!(parse_letters("a+b").is_ok());
        assert!(parse_letters("+a").is_err());
        assert!(parse_letters("a++").is_err());
        assert!(parse_letters("a^+").is_err());
        let bad = "IH99 [6^3] 6.6.6 [a*b+c+;a-c-b-] αββ tactile";
        assert!(parse_database(bad).is_err());
    }

    #[test]
    fn stabilizer_and_orbits() {
        let t = lookup("IH18").unwrap();
        assert_eq!(t.stabilizer().len(), 6);
        assert_eq!(t.corner_orbits(), vec![0; 6]);
        assert_eq!(lookup("IH5").unwrap().stabilizer().len(), 1);
    }
}
