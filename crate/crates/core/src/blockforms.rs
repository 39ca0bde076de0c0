//! Topological block forms (patches of cells glued along sides) and their
//! angle labelings.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::species::node_bounds;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormError {
    #[error("no curated block forms for i = {0}; supply a catalog file")]
    Uncurated(u32),
    #[error("form {name}: {msg}")]
    Invalid { name: String, msg: String },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// A node label: corners `A`..`E` are `0..5`, a flat node is [`FLAT`].
pub type Label = u8;
pub const FLAT: Label = 5;

pub fn label_name(l: Label) -> &'static str {
    ["A", "B", "C", "D", "E", "π"][l as usize]
}

/// Pentagon side between consecutive corners `p` and `q`: side `x` joins the
/// corner before `X` to `X` (side `a` joins `E` and `A`).
pub fn side_between(p: Label, q: Label) -> Label {
    if q == (p + 1) % 5 { q } else { p }
}

pub fn side_name(s: Label) -> char {
    (b'a' + s) as char
}

/// A (cell, node) or (cell, side) index.
pub type Slot = (usize, usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockForm {
    pub name: String,
    /// Node count of each cell.
    pub cells: Vec<usize>,
    /// Glued side pairs.
    pub glue: Vec<(Slot, Slot)>,
    /// Node where the boundary code starts.
    pub start: Slot,
    /// Vertex id of every (cell, node).
    pub vertex: Vec<Vec<usize>>,
    /// All (cell, node) incidences of each vertex.
    pub incidences: Vec<Vec<Slot>>,
    /// Boundary sides in counterclockwise order from `start`; boundary
    /// vertex `t` is the start of side `t`.
    pub boundary: Vec<Slot>,
    /// Boundary vertex ids, aligned with `boundary`.
    pub boundary_vertices: Vec<usize>,
    /// Cells incident with each boundary vertex.
    pub code: Vec<u32>,
}

impl BlockForm {
    /// Builds a form and checks that it is a disk with admissible cells.
    pub fn new(name: &str, cells: Vec<usize>, glue: Vec<(Slot, Slot)>, start: Slot) -> Result<Self, FormError> {
        let bad = |msg: String| FormError::Invalid { name: name.to_string(), msg };
        if cells.is_empty() || cells.iter().any(|k| !(5..=7).contains(k)) {
            return Err(bad("cells must have 5, 6 or 7 nodes".into()));
        }
        let i = cells.len() as i64;
        let n: usize = cells.iter().sum();
        let (lo, hi) = node_bounds(i).map_err(|e| bad(e.to_string()))?;
        if n < lo as usize || n > hi as usize {
            return Err(bad(format!("node count {n} outside [{lo}, {hi}]")));
        }
        let mut glued = BTreeSet::new();
        for &(a, b) in &glue {
            for (c, s) in [a, b] {
                if c >= cells.len() || s >= cells[c] || !glued.insert((c, s)) {
                    return Err(bad(format!("bad or repeated side {c}.{s}")));
                }
            }
            if a.0 == b.0 {
                return Err(bad("a cell glued to itself".into()));
            }
        }
        let idx = |c: usize, j: usize| cells[..c].iter().sum::<usize>() + j % cells[c];
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for &((c1, s1), (c2, s2)) in &glue {
            for (x, y) in [(idx(c1, s1), idx(c2, s2 + 1)), (idx(c1, s1 + 1), idx(c2, s2))] {
                let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
                parent[rx] = ry;
            }
        }
        let mut ids = BTreeMap::new();
        let mut vertex = Vec::new();
        let mut incidences: Vec<Vec<Slot>> = Vec::new();
        for (c, &k) in cells.iter().enumerate() {
            let mut row = Vec::new();
            for j in 0..k {
                let r = find(&mut parent, idx(c, j));
                let next = ids.len();
                let v = *ids.entry(r).or_insert(next);
                if v == incidences.len() {
                    incidences.push(Vec::new());
                }
                if incidences[v].iter().any(|s| s.0 == c) {
                    return Err(bad(format!("cell {c} meets a vertex twice")));
                }
                incidences[v].push((c, j));
                row.push(v);
            }
            vertex.push(row);
        }
        let nv = incidences.len();
        let edges = n - glue.len();
        if nv + cells.len() != edges + 1 {
            return Err(bad("not a disk (Euler characteristic)".into()));
        }
        // Connectivity through glued sides.
        let mut seen = vec![false; cells.len()];
        let mut stack = vec![0];
        while let Some(c) = stack.pop() {
            if std::mem::replace(&mut seen[c], true) {
                continue;
            }
            for &((a, _), (b, _)) in &glue {
                if a == c {
                    stack.push(b);
                }
                if b == c {
                    stack.push(a);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(bad("cells not edge-connected".into()));
        }
        let mut out_side: BTreeMap<usize, Slot> = BTreeMap::new();
        for (c, &k) in cells.iter().enumerate() {
            for j in 0..k {
                if !glued.contains(&(c, j)) && out_side.insert(vertex[c][j], (c, j)).is_some() {
                    return Err(bad("boundary is pinched".into()));
                }
            }
        }
        if start.0 >= cells.len() || start.1 >= cells[start.0] {
            return Err(bad("start node out of range".into()));
        }
        let v0 = vertex[start.0][start.1];
        let mut boundary = Vec::new();
        let mut boundary_vertices = Vec::new();
        let mut v = v0;
        loop {
            let Some(&(c, j)) = out_side.get(&v) else {
                return Err(bad("start node is not on the boundary".into()));
            };
            boundary.push((c, j));
            boundary_vertices.push(v);
            v = vertex[c][(j + 1) % cells[c]];
            if v == v0 {
                break;
            }
            if boundary.len() > n {
                return Err(bad("boundary does not close".into()));
            }
        }
        if boundary.len() != out_side.len() {
            return Err(bad("boundary is not a single cycle".into()));
        }
        for (v, inc) in incidences.iter().enumerate() {
            if !boundary_vertices.contains(&v) && inc.len() < 3 {
                return Err(bad("interior vertex with fewer than 3 cells".into()));
            }
        }
        let code = boundary_vertices.iter().map(|&v| incidences[v].len() as u32).collect();
        Ok(BlockForm {
            name: name.to_string(),
            cells,
            glue,
            start,
            vertex,
            incidences,
            boundary,
            boundary_vertices,
            code,
        })
    }

    pub fn i(&self) -> u32 {
        self.cells.len() as u32
    }

    pub fn n(&self) -> u32 {
        self.cells.iter().sum::<usize>() as u32
    }

    pub fn vertex_count(&self) -> usize {
        self.incidences.len()
    }

    pub fn code_string(&self) -> String {
        self.code.iter().map(|b| b.to_string()).collect()
    }

    /// Vertices not on the boundary.
    pub fn interior_vertices(&self) -> Vec<usize> {
        (0..self.vertex_count()).filter(|v| !self.boundary_vertices.contains(v)).collect()
    }

    /// Combinatorial symmetries as maps (cell, node) -> (cell, node); a
    /// reflection reverses every cell.
    pub fn automorphisms(&self) -> Vec<Vec<Vec<Slot>>> {
        let m = self.cells.len();
        let glue: BTreeSet<(Slot, Slot)> = self.glue.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        let mut out = Vec::new();
        for perm in permutations(m) {
            if (0..m).any(|c| self.cells[perm[c]] != self.cells[c]) {
                continue;
            }
            for reflect in [false, true] {
                let mut rots = vec![0usize; m];
                loop {
                    let node = |c: usize, j: usize| {
                        let k = self.cells[c];
                        let t = if reflect { (rots[c] + k - j % k) % k } else { (rots[c] + j) % k };
                        (perm[c], t)
                    };
                    let side = |(c, s): Slot| {
                        let k = self.cells[c];
                        if reflect { (perm[c], (rots[c] + 2 * k - s - 1) % k) } else { node(c, s) }
                    };
                    let ok = self.glue.iter().all(|&(a, b)| {
                        let (x, y) = (side(a), side(b));
                        glue.contains(&(x.min(y), x.max(y)))
                    });
                    if ok {
                        out.push((0..m).map(|c| (0..self.cells[c]).map(|j| node(c, j)).collect()).collect());
                    }
                    let mut c = 0;
                    while c < m {
                        rots[c] += 1;
                        if rots[c] < self.cells[c] {
                            break;
                        }
                        rots[c] = 0;
                        c += 1;
                    }
                    if c == m {
                        break;
                    }
                }
            }
        }
        out
    }
}

fn permutations(m: usize) -> Vec<Vec<usize>> {
    if m == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(m - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, m - 1);
            out.push(q);
        }
    }
    out
}

const CATALOG: &str = include_str!("../data/block_forms.txt");

/// Parses a block-form catalog (grammar documented in the data file).
pub fn parse_catalog(text: &str) -> Result<Vec<BlockForm>, FormError> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let err = |msg: String| FormError::Parse { line, msg };
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let mut f = body.split_whitespace();
        if f.next() != Some("form") {
            return Err(err("expected 'form'".into()));
        }
        let name = f.next().ok_or_else(|| err("missing name".into()))?;
        let mut fields = BTreeMap::new();
        for kv in f {
            let (k, v) = kv.split_once('=').ok_or_else(|| err(format!("bad field {kv:?}")))?;
            fields.insert(k, v);
        }
        let get = |k: &str| fields.get(k).copied().ok_or_else(|| err(format!("missing {k}")));
        let slot = |s: &str| -> Result<Slot, FormError> {
            let (a, b) = s.split_once('.').ok_or_else(|| err(format!("bad slot {s:?}")))?;
            Ok((a.parse().map_err(|_| err(format!("bad slot {s:?}")))?, b.parse().map_err(|_| err(format!("bad slot {s:?}")))?))
        };
        let cells = get("cells")?
            .split(',')
            .map(|x| x.parse::<usize>().map_err(|_| err(format!("bad cell size {x:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        let glue_s = fields.get("glue").copied().unwrap_or("");
        let mut glue = Vec::new();
        for g in glue_s.split(',').filter(|g| !g.is_empty()) {
            let (a, b) = g.split_once('-').ok_or_else(|| err(format!("bad glue {g:?}")))?;
            glue.push((slot(a)?, slot(b)?));
        }
        let start = slot(get("start")?)?;
        let form = BlockForm::new(name, cells, glue, start)?;
        if let Some(code) = fields.get("code") {
            if *code != form.code_string() {
                return Err(err(format!("code {code} does not match derived {}", form.code_string())));
            }
        }
        out.push(form);
    }
    Ok(out)
}

/// The curated catalog for `i` in 1..=3.
pub fn list_block_forms(i: u32) -> Result<Vec<Arc<BlockForm>>, FormError> {
    if !(1..=3).contains(&i) {
        return Err(FormError::Uncurated(i));
    }
    Ok(parse_catalog(CATALOG)
        .expect("embedded block-form catalog is valid")
        .into_iter()
        .filter(|f| f.i() == i)
        .map(Arc::new)
        .collect())
}

/// A block form with every node labeled.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledBlock {
    pub form: Arc<BlockForm>,
    /// Label of each (cell, node).
    pub labels: Vec<Vec<Label>>,
}

impl LabeledBlock {
    /// Whether the corners of cell `c` run A..E counterclockwise.
    pub fn ccw(&self, c: usize) -> bool {
        let corners: Vec<Label> = self.labels[c].iter().copied().filter(|&l| l != FLAT).collect();
        corners[1] == (corners[0] + 1) % 5
    }

    /// Pentagon side containing side (segment) `j` of cell `c`.
    pub fn side_of(&self, c: usize, j: usize) -> Label {
        let row = &self.labels[c];
        let k = row.len();
        let before = (0..k).map(|t| row[(j + k - t) % k]).find(|&l| l != FLAT).unwrap();
        let after = (1..=k).map(|t| row[(j + t) % k]).find(|&l| l != FLAT).unwrap();
        side_between(before, after)
    }

    pub fn label(&self, (c, j): Slot) -> Label {
        self.labels[c][j]
    }

    /// Compact text, cells separated by `|`, e.g. `ABCDE|CBπAEπD`.
    pub fn key(&self) -> String {
        self.labels
            .iter()
            .map(|row| row.iter().map(|&l| label_name(l)).collect::<String>())
            .collect::<Vec<_>>()
            .join("|")
    }

    /// Inverse of [`LabeledBlock::key`]; `None` unless the result is valid.
    pub fn from_key(form: &Arc<BlockForm>, key: &str) -> Option<LabeledBlock> {
        let labels = key
            .split('|')
            .map(|row| {
                row.chars()
                    .map(|ch| match ch {
                        'A'..='E' => Some(ch as u8 - b'A'),
                        'π' => Some(FLAT),
                        _ => None,
                    })
                    .collect::<Option<Vec<Label>>>()
            })
            .collect::<Option<Vec<_>>>()?;
        let l = LabeledBlock { form: form.clone(), labels };
        l.is_valid().then_some(l)
    }

    /// Checks the labeling invariants against its form.
    pub fn is_valid(&self) -> bool {
        self.labels.len() == self.form.cells.len()
            && self.labels.iter().zip(&self.form.cells).all(|(row, &k)| {
                let mut corners: Vec<Label> = row.iter().copied().filter(|&l| l != FLAT).collect();
                let cyclic = corners.len() == 5
                    && (corners.windows(2).all(|w| w[1] == (w[0] + 1) % 5)
                        || corners.windows(2).all(|w| (w[1] + 1) % 5 == w[0]));
                corners.sort_unstable();
                row.len() == k && cyclic && corners == [0, 1, 2, 3, 4]
            })
    }
}

impl fmt::Display for LabeledBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.form.name, self.key())
    }
}

/// Every labeling of one cell with `k` nodes: flat-node placement, the
/// node carrying `A`, and the direction of A..E.
pub fn cell_labelings(k: usize) -> Vec<Vec<Label>> {
    let mut out = Vec::new();
    for mask in 0u32..1 << k {
        if mask.count_ones() as usize != k - 5 {
            continue;
        }
        let corners: Vec<usize> = (0..k).filter(|j| mask & (1 << j) == 0).collect();
        for s in 0..5u8 {
            for ccw in [true, false] {
                let mut row = vec![FLAT; k];
                for (t, &j) in corners.iter().enumerate() {
                    let t = t as u8;
                    row[j] = if ccw { (s + t) % 5 } else { (s + 5 - t) % 5 };
                }
                out.push(row);
            }
        }
    }
    out
}

/// Relabels corner names by a dihedral map of A..E.
fn rename(l: Label, rot: u8, reflect: bool) -> Label {
    if l == FLAT {
        return FLAT;
    }
    if reflect { (rot + 5 - l) % 5 } else { (rot + l) % 5 }
}

/// All labelings of a form, one per class under the form's symmetries and
/// the dihedral renaming of A..E (pentagon types are invariant under it).
pub fn enumerate_labelings(form: &Arc<BlockForm>) -> Vec<LabeledBlock> {
    let autos = form.automorphisms();
    let per_cell: Vec<Vec<Vec<Label>>> = form.cells.iter().map(|&k| cell_labelings(k)).collect();
    // Renaming makes cell 0 start with A counterclockwise at its first corner.
    let first: Vec<Vec<Label>> = per_cell[0]
        .iter()
        .filter(|row| {
            let c: Vec<Label> = row.iter().copied().filter(|&l| l != FLAT).collect();
            c[0] == 0 && c[1] == 1
        })
        .cloned()
        .collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut cur: Vec<Vec<Label>> = vec![first[0].clone()];
    let mut choose = |cur: &Vec<Vec<Label>>| {
        let key = canonical(cur, &autos);
        if seen.insert(key.clone()) {
            out.push(LabeledBlock { form: form.clone(), labels: key });
        }
    };
    fn rec(
        c: usize,
        cur: &mut Vec<Vec<Label>>,
        first: &[Vec<Label>],
        per_cell: &[Vec<Vec<Label>>],
        f: &mut dyn FnMut(&Vec<Vec<Label>>),
    ) {
        if c == per_cell.len() {
            f(cur);
            return;
        }
        let opts = if c == 0 { first } else { &per_cell[c][..] };
        for row in opts {
            cur.truncate(c);
            cur.push(row.clone());
            rec(c + 1, cur, first, per_cell, f);
        }
    }
    cur.clear();
    rec(0, &mut cur, &first, &per_cell, &mut choose);
    out.sort_by_key(|l| l.labels.clone());
    out
}

/// Smallest image of a labeling under form symmetries and renamings.
pub fn canonical(labels: &[Vec<Label>], autos: &[Vec<Vec<Slot>>]) -> Vec<Vec<Label>> {
    let mut best: Option<Vec<Vec<Label>>> = None;
    for auto in autos {
        let mut moved: Vec<Vec<Label>> = labels.iter().map(|r| vec![0; r.len()]).collect();
        for (c, row) in labels.iter().enumerate() {
            for (j, &l) in row.iter().enumerate() {
                let (c2, j2) = auto[c][j];
                moved[c2][j2] = l;
            }
        }
        for rot in 0..5 {
            for reflect in [false, true] {
                let img: Vec<Vec<Label>> =
                    moved.iter().map(|r| r.iter().map(|&l| rename(l, rot, reflect)).collect()).collect();
                if best.as_ref().is_none_or(|b| img < *b) {
                    best = Some(img);
                }
            }
        }
    }
    best.expect("identity automorphism")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curated_counts_and_codes() {
        let codes = |i| list_block_forms(i).unwrap().iter().map(|f| f.code_string()).collect::<Vec<_>>();
        assert_eq!(codes(1), ["11111", "111111"]);
        assert_eq!(codes(2), ["21112111", "211121111", "2111211111", "2111121111"]);
        assert_eq!(list_block_forms(3).unwrap().len(), 34);
        assert!(list_block_forms(4).is_err());
    }

    #[test]
    fn rejects_bad_forms() {
        assert!(BlockForm::new("x", vec![5, 8], vec![((0, 0), (1, 0))], (0, 1)).is_err());
        assert!(BlockForm::new("x", vec![5, 5], vec![], (0, 0)).is_err());
        let bad = "form x cells=5,5 glue=0.0-1.0 start=0.1 code=2111111";
        assert!(parse_catalog(bad).is_err());
    }

    #[test]
    fn automorphism_groups() {
        let f = &list_block_forms(1).unwrap()[0];
        assert_eq!(f.automorphisms().len(), 10);
        let f = &list_block_forms(2).unwrap()[2];
        assert_eq!(f.automorphisms().len(), 2);
        let f = &list_block_forms(2).unwrap()[0];
        assert_eq!(f.automorphisms().len(), 4);
    }

    #[test]
    fn one_block_labelings() {
        let forms = list_block_forms(1).unwrap();
        assert_eq!(enumerate_labelings(&forms[0]).len(), 1);
        let six = enumerate_labelings(&forms[1]);
        assert_eq!(six.len(), 1);
        assert!(six.iter().all(|l| l.is_valid()));
    }

    #[test]
    fn sides() {
        let forms = list_block_forms(1).unwrap();
        let l = LabeledBlock { form: forms[1].clone(), labels: vec![vec![0, 1, FLAT, 2, 3, 4]] };
        let s: String = (0..6).map(|j| side_name(l.side_of(0, j))).collect();
        assert_eq!(s, "bccdea");
        assert!(l.ccw(0));
    }
}
