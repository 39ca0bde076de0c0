//! Applying an isohedral adjacency symbol to a partitioned, labeled block and
//! reading off the angle and side equations of one corona.
//!
//! Arc `t` of a partition runs counterclockwise from mark `t` to mark
//! `t + 1`. An [`Assignment`] sends arcs to tile edges, either in the
//! symbol's own direction or mirrored.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{AngleEq, EquationSystem, SideEq};
use crate::blockforms::{BlockForm, LabeledBlock};
use crate::boundary::PartitionedCode;
use crate::isohedral::{database, Dihedral, IsohedralType};
use crate::linalg::rref_ordered;
use crate::species::Species;
use crate::Rational;

/// Arc `t` becomes tile edge `rot + t`, or `rot - t` traversed backwards
/// when `mirror`. `partners[p]` is the neighbour edge met by tile edge `p`
/// and whether the correspondence reverses direction; it is a choice
/// among the symbol's readings when a letter repeats.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Assignment {
    pub mirror: bool,
    pub rot: usize,
    pub partners: Vec<(usize, bool)>,
}

/// Every consistent choice of neighbour edges: an involution on the tile
/// edges following the adjacency symbol. Symmetric edges meet reversed.
pub fn partner_choices(ih: &IsohedralType) -> Vec<Vec<(usize, bool)>> {
    let k = ih.edge_count();
    let options: Vec<Vec<(usize, bool)>> = (0..k)
        .map(|p| {
            let mut o: Vec<(usize, bool)> = Vec::new();
            for q in ih.pairings(p) {
                if !o.iter().any(|x| x.0 == q.m) {
                    o.push((q.m, q.reversed));
                }
            }
            o
        })
        .collect();
    let mut out = Vec::new();
    let mut cur: Vec<Option<(usize, bool)>> = vec![None; k];
    fn rec(p: usize, cur: &mut Vec<Option<(usize, bool)>>, options: &[Vec<(usize, bool)>], out: &mut Vec<Vec<(usize, bool)>>) {
        let k = cur.len();
        let Some(p) = (p..k).find(|&q| cur[q].is_none()) else {
            out.push(cur.iter().map(|x| x.unwrap()).collect());
            return;
        };
        for &(m, rev) in &options[p] {
            if cur[m].is_some() {
                continue;
            }
            cur[p] = Some((m, rev));
            cur[m] = Some((p, rev));
            rec(p + 1, cur, options, out);
            cur[p] = None;
            cur[m] = None;
        }
    }
    rec(0, &mut cur, &options, &mut out);
    out
}

impl Assignment {
    /// Every assignment for an edge count and partner choice set.
    pub fn all(ih: &IsohedralType) -> Vec<Assignment> {
        let k = ih.edge_count();
        let mut out = Vec::new();
        for partners in partner_choices(ih) {
            for j in 0..2 * k {
                out.push(Assignment { mirror: j >= k, rot: j % k, partners: partners.clone() });
            }
        }
        out
    }

    pub fn edge(&self, t: usize, k: usize) -> usize {
        if self.mirror { (self.rot + k - t % k) % k } else { (self.rot + t) % k }
    }

    pub fn arc_of_edge(&self, p: usize, k: usize) -> usize {
        if self.mirror { (self.rot + k - p % k) % k } else { (p + k - self.rot) % k }
    }

    /// The mark sitting at tile corner `c`.
    pub fn mark_of_corner(&self, c: usize, k: usize) -> usize {
        if self.mirror { (self.rot + 1 + k - c % k) % k } else { (c + k - self.rot) % k }
    }

    /// The tile corner at mark `t`.
    pub fn corner_of_mark(&self, t: usize, k: usize) -> usize {
        if self.mirror { (self.edge(t, k) + 1) % k } else { self.edge(t, k) }
    }

    /// How arc `t` meets its neighbour: the partner arc and whether the
    /// correspondence reverses direction.
    pub fn partner(&self, t: usize, k: usize) -> (usize, bool) {
        let (m, rev) = self.partners[self.edge(t, k)];
        (self.arc_of_edge(m, k), rev)
    }

    /// Composes with a tile symmetry.
    fn then(&self, g: Dihedral, k: usize) -> Assignment {
        let mut partners = vec![(0, false); k];
        for (p, &(m, rev)) in self.partners.iter().enumerate() {
            partners[g.edge(p, k)] = (g.edge(m, k), rev);
        }
        Assignment { mirror: self.mirror != g.reflect, rot: g.edge(self.edge(0, k), k), partners }
    }

    /// Smallest equivalent assignment under the tile's symmetries.
    pub fn canonical(&self, ih: &IsohedralType) -> Assignment {
        let k = ih.edge_count();
        ih.stabilizer().into_iter().map(|g| self.then(g, k)).min().unwrap_or_else(|| self.clone())
    }

    /// Corners of the tiles around the vertex at tile corner `c`, walking
    /// across edge `c` first.
    pub fn star(&self, ih: &IsohedralType, c: usize) -> Vec<usize> {
        let k = ih.edge_count();
        let (mut corner, mut exit) = (c, c);
        let mut out = Vec::with_capacity(ih.corners[c] as usize);
        for _ in 0..ih.corners[c] {
            out.push(corner);
            let (m, rev) = self.partners[exit];
            let to_start = (corner == exit) != rev;
            (corner, exit) = if to_start { (m, (m + k - 1) % k) } else { ((m + 1) % k, (m + 1) % k) };
        }
        out
    }
}

/// Code positions of arc `t`, from its start mark to its end mark.
fn arc_positions(part: &PartitionedCode, t: usize) -> Vec<usize> {
    let m = part.code.len();
    let s = part.marks[t];
    (0..=part.arc_len(t)).map(|j| (s + j) % m).collect()
}

/// Pairs of positions identified by the assignment: the neighbour vertex
/// across each arc interior, and the segment across each arc side.
struct Links {
    nodes: Vec<(usize, usize)>,
    segments: Vec<(usize, usize)>,
}

fn links(part: &PartitionedCode, t: usize, u: usize, reversed: bool) -> Option<Links> {
    let (pt, pu) = (arc_positions(part, t), arc_positions(part, u));
    if pt.len() != pu.len() {
        return None;
    }
    let l = pt.len() - 1;
    let nodes = (1..l).map(|j| (pt[j], if reversed { pu[l - j] } else { pu[j] })).collect();
    let segments = (0..l).map(|j| (pt[j], if reversed { pu[l - 1 - j] } else { pu[j] })).collect();
    Some(Links { nodes, segments })
}

/// Positions and segments identified by the tile symmetries: arc `t` and
/// its image, in the same direction unless the symmetry reflects.
fn symmetry_links(part: &PartitionedCode, ih: &IsohedralType, a: &Assignment) -> Links {
    let k = ih.edge_count();
    let mut out = Links { nodes: Vec::new(), segments: Vec::new() };
    for g in ih.stabilizer() {
        if g == (Dihedral { rot: 0, reflect: false }) {
            continue;
        }
        for t in 0..k {
            let u = a.arc_of_edge(g.edge(a.edge(t, k), k), k);
            let (pt, pu) = (arc_positions(part, t), arc_positions(part, u));
            let l = pt.len() - 1;
            for j in 0..=l {
                out.nodes.push((pt[j], if g.reflect { pu[l - j] } else { pu[j] }));
            }
            for j in 0..l {
                out.segments.push((pt[j], if g.reflect { pu[l - 1 - j] } else { pu[j] }));
            }
        }
    }
    out
}

/// Arcs related by a tile symmetry must have equal lengths.
fn symmetric_lengths(part: &PartitionedCode, ih: &IsohedralType, a: &Assignment) -> bool {
    let k = ih.edge_count();
    ih.stabilizer()
        .iter()
        .all(|g| (0..k).all(|t| part.arc_len(t) == part.arc_len(a.arc_of_edge(g.edge(a.edge(t, k), k), k))))
}

/// Arc-level conditions independent of any labeling: paired and
/// symmetric arcs have equal lengths, and glued interior positions meet
/// the matching conditions (both ways round for symmetric edges).
pub fn structurally_valid(part: &PartitionedCode, ih: &IsohedralType, a: &Assignment, i: u32) -> bool {
    let k = ih.edge_count();
    if part.arc_count() != k || !symmetric_lengths(part, ih, a) {
        return false;
    }
    let b = &part.code;
    (0..k).all(|t| {
        let p = a.edge(t, k);
        let (u, rev) = a.partner(t, k);
        let ways: &[bool] = if ih.tile[p].sign.is_none() { &[true, false] } else { &[rev] };
        ways.iter().all(|&r| match links(part, t, u, r) {
            Some(l) => l.nodes.iter().all(|&(x, y)| (3..=2 * i).contains(&(b[x] + b[y]))),
            None => false,
        })
    })
}

/// Assignments passing [`structurally_valid`], one per class under the
/// tile's symmetries.
pub fn valid_assignments(part: &PartitionedCode, ih: &IsohedralType, i: u32) -> Vec<Assignment> {
    if part.arc_count() != ih.edge_count() {
        return Vec::new();
    }
    Assignment::all(ih)
        .into_iter()
        .filter(|a| a.canonical(ih) == *a && structurally_valid(part, ih, a, i))
        .collect()
}

/// Isohedral types with the partition's edge count admitting at least one
/// structurally valid assignment, in database order.
pub fn compatible_isohedral_types(part: &PartitionedCode, i: u32) -> Vec<&'static IsohedralType> {
    database().iter().filter(|ih| !valid_assignments(part, ih, i).is_empty()).collect()
}

/// The tiles around one boundary vertex of the central block: the
/// block's total angle at each listed position adds up to 2π.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Star {
    /// Boundary positions of the blocks meeting here (with repetition).
    pub members: Vec<usize>,
    /// Pentagon-tiling valence.
    pub valence: u32,
}

/// One corona of a block under an assignment, independent of labels.
#[derive(Debug, Clone)]
pub struct Corona {
    pub form: Arc<BlockForm>,
    pub partition: PartitionedCode,
    pub ih: &'static IsohedralType,
    pub assignment: Assignment,
    /// Distinct stars of the boundary vertices.
    pub stars: Vec<Star>,
    /// Boundary positions exchanged by a tile symmetry: the block's
    /// total angles there agree.
    pub symmetric: Vec<(usize, usize)>,
    /// Segment ids of equal length.
    pub same_segment: Vec<(usize, usize)>,
    /// Pentagon-tiling valence of every vertex of the block.
    pub valence: Vec<u32>,
    /// Segment id of each (cell, side): glued sides first, then boundary
    /// sides by code position.
    pub segment: Vec<Vec<usize>>,
    pub segment_count: usize,
}

impl Corona {
    /// Surrounds the block; `None` when the assignment is structurally
    /// invalid or the identifications disagree.
    pub fn build(
        form: &Arc<BlockForm>,
        part: &PartitionedCode,
        ih: &'static IsohedralType,
        a: Assignment,
        i: u32,
    ) -> Option<Corona> {
        if part.code != form.code || !structurally_valid(part, ih, &a, i) {
            return None;
        }
        let k = ih.edge_count();
        let m = part.code.len();
        let b = &part.code;
        let mut stars = BTreeSet::new();
        let mut boundary_valence = vec![0u32; m];
        let mut seg_links = Vec::new();
        for t in 0..k {
            let (u, rev) = a.partner(t, k);
            let l = links(part, t, u, rev)?;
            for (x, y) in l.nodes {
                let mut members = vec![x, y];
                members.sort_unstable();
                let valence = b[x] + b[y];
                boundary_valence[x] = valence;
                stars.insert(Star { members, valence });
            }
            seg_links.extend(l.segments);
        }
        let sym = symmetry_links(part, ih, &a);
        seg_links.extend(sym.segments);
        let mut symmetric: Vec<(usize, usize)> =
            sym.nodes.into_iter().filter(|(x, y)| x != y).map(|(x, y)| (x.min(y), x.max(y))).collect();
        symmetric.sort_unstable();
        symmetric.dedup();
        for t in 0..k {
            let c = a.corner_of_mark(t, k);
            let mut members: Vec<usize> = a.star(ih, c).iter().map(|&c2| part.marks[a.mark_of_corner(c2, k)]).collect();
            let valence = members.iter().map(|&p| b[p]).sum();
            if members[0] != part.marks[t] {
                return None;
            }
            boundary_valence[part.marks[t]] = valence;
            members.sort_unstable();
            stars.insert(Star { members, valence });
        }
        let mut valence: Vec<u32> = form.incidences.iter().map(|inc| inc.len() as u32).collect();
        for (p, &v) in form.boundary_vertices.iter().enumerate() {
            valence[v] = boundary_valence[p];
        }
        let (segment, segment_count) = segment_ids(form);
        let seg_at = |p: usize| {
            let (c, s) = form.boundary[p];
            segment[c][s]
        };
        let mut same_segment: Vec<(usize, usize)> = seg_links
            .into_iter()
            .map(|(x, y)| {
                let (x, y) = (seg_at(x), seg_at(y));
                (x.min(y), x.max(y))
            })
            .filter(|(x, y)| x != y)
            .collect();
        same_segment.sort_unstable();
        same_segment.dedup();
        Some(Corona {
            form: form.clone(),
            partition: part.clone(),
            ih,
            assignment: a,
            stars: stars.into_iter().collect(),
            symmetric,
            same_segment,
            valence,
            segment,
            segment_count,
        })
    }

    /// The block species implied by the valences, if it solves the valence
    /// equation.
    pub fn species(&self) -> Option<Species> {
        let vals: Vec<u32> = self.form.vertex.iter().flatten().map(|&v| self.valence[v]).collect();
        Species::new(self.form.i(), vals).ok()
    }

    /// `[A, B, C, D, E, π]` counts of the labels at a block vertex.
    fn vertex_counts(labeled: &LabeledBlock, v: usize) -> [i64; 6] {
        let mut out = [0i64; 6];
        for &slot in &labeled.form.incidences[v] {
            out[labeled.label(slot) as usize] += 1;
        }
        out
    }

    /// Angle relations as integer rows `[A..E | rhs]` in units of π.
    pub fn angle_rows(&self, labeled: &LabeledBlock) -> Vec<[i64; 6]> {
        let form = &self.form;
        let at = |p: usize| Self::vertex_counts(labeled, form.boundary_vertices[p]);
        let mut rows = Vec::new();
        let push = |rows: &mut Vec<[i64; 6]>, c: [i64; 6], rhs: i64| {
            let mut r = [c[0], c[1], c[2], c[3], c[4], rhs - c[5]];
            if r.iter().any(|&x| x != 0) {
                if r[..5].iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
                    r.iter_mut().for_each(|x| *x = -*x);
                }
                rows.push(r);
            }
        };
        for s in &self.stars {
            let mut c = [0i64; 6];
            for &p in &s.members {
                let x = at(p);
                (0..6).for_each(|j| c[j] += x[j]);
            }
            push(&mut rows, c, 2);
        }
        for v in form.interior_vertices() {
            push(&mut rows, Self::vertex_counts(labeled, v), 2);
        }
        for &(p, q) in &self.symmetric {
            let (x, y) = (at(p), at(q));
            push(&mut rows, std::array::from_fn(|j| x[j] - y[j]), 0);
        }
        rows.sort_unstable();
        rows.dedup();
        rows
    }

    /// The exact angle part.
    pub fn angle_equations(&self, labeled: &LabeledBlock) -> Vec<AngleEq> {
        self.angle_rows(labeled)
            .into_iter()
            .map(|r| AngleEq {
                coef: std::array::from_fn(|j| Rational::from_integer(r[j] as i128)),
                rhs: Rational::from_integer(r[5] as i128),
            })
            .collect()
    }

    /// Side relations after eliminating the segment lengths.
    pub fn side_equations(&self, labeled: &LabeledBlock) -> Vec<SideEq> {
        let ns = self.segment_count;
        let width = ns + 5;
        let mut rows: Vec<Vec<Rational>> = Vec::new();
        for (c, ids) in self.segment.iter().enumerate() {
            let mut per_side: [Vec<usize>; 5] = Default::default();
            for (j, &id) in ids.iter().enumerate() {
                per_side[labeled.side_of(c, j) as usize].push(id);
            }
            for (x, segs) in per_side.iter().enumerate() {
                let mut r = vec![Rational::zero(); width];
                r[ns + x] = Rational::one();
                for &id in segs {
                    r[id] -= Rational::one();
                }
                rows.push(r);
            }
        }
        for &(x, y) in &self.same_segment {
            let mut r = vec![Rational::zero(); width];
            r[x] = Rational::one();
            r[y] = -Rational::one();
            rows.push(r);
        }
        let order: Vec<usize> = (0..width).collect();
        let pivots = rref_ordered(&mut rows, &order, 0.0);
        rows.into_iter()
            .zip(pivots)
            .filter(|&(_, p)| p >= ns)
            .map(|(r, _)| SideEq { coef: std::array::from_fn(|j| r[ns + j]) })
            .collect()
    }

    /// The full system, including the angle sum.
    pub fn equations(&self, labeled: &LabeledBlock) -> EquationSystem {
        let mut sys = EquationSystem::new();
        sys.angles.extend(self.angle_equations(labeled));
        sys.sides = self.side_equations(labeled);
        sys
    }
}

/// Segment ids of a form: one per glued pair, then one per boundary side.
pub fn segment_ids(form: &BlockForm) -> (Vec<Vec<usize>>, usize) {
    let mut seg: Vec<Vec<usize>> = form.cells.iter().map(|&k| vec![usize::MAX; k]).collect();
    for (g, &((c1, s1), (c2, s2))) in form.glue.iter().enumerate() {
        seg[c1][s1] = g;
        seg[c2][s2] = g;
    }
    let base = form.glue.len();
    for (p, &(c, s)) in form.boundary.iter().enumerate() {
        seg[c][s] = base + p;
    }
    (seg, base + form.boundary.len())
}

/// Quick exact test of integer angle rows `[A..E | rhs]` (units of π)
/// together with the angle sum: inconsistent systems and determined
/// angles outside `(0, π)` fail.
pub fn angles_admissible(rows: &[[i64; 6]]) -> bool {
    let mut m: Vec<[i64; 6]> = rows.to_vec();
    m.push([1, 1, 1, 1, 1, 3]);
    let mut rank = 0;
    for col in 0..6 {
        let Some(p) = (rank..m.len()).find(|&r| m[r][col] != 0) else { continue };
        if col == 5 {
            return false;
        }
        m.swap(rank, p);
        let piv = m[rank];
        for r in 0..m.len() {
            if r == rank || m[r][col] == 0 {
                continue;
            }
            let f = m[r][col];
            let mut row = [0i64; 6];
            for j in 0..6 {
                row[j] = m[r][j] * piv[col] - piv[j] * f;
            }
            let g = row.iter().fold(0i64, |g, &x| num_integer::gcd(g, x));
            if g > 1 {
                row.iter_mut().for_each(|x| *x /= g);
            }
            m[r] = row;
        }
        rank += 1;
    }
    m[..rank].iter().all(|r| {
        let nz: Vec<usize> = (0..5).filter(|&j| r[j] != 0).collect();
        if nz.len() != 1 {
            return true;
        }
        let (c, v) = (r[nz[0]], r[5]);
        let (c, v) = if c < 0 { (-c, -v) } else { (c, v) };
        v > 0 && v < c
    })
}

/// A symbol applied to a labeled block.
#[derive(Debug, Clone)]
pub struct SymbolApplication {
    pub labeled: LabeledBlock,
    pub corona: Corona,
    pub system: EquationSystem,
}

/// Every application of `ih` to the labeled, partitioned block whose
/// angle relations are consistent and convex, one per symmetry class.
pub fn apply_incidence_symbol(
    labeled: &LabeledBlock,
    part: &PartitionedCode,
    ih: &'static IsohedralType,
) -> Vec<SymbolApplication> {
    let i = labeled.form.i();
    let mut seen = BTreeSet::new();
    valid_assignments(part, ih, i)
        .into_iter()
        .filter_map(|a| Corona::build(&labeled.form, part, ih, a, i))
        .filter(|c| seen.insert((c.stars.clone(), c.symmetric.clone(), c.same_segment.clone())))
        .filter(|c| angles_admissible(&c.angle_rows(labeled)))
        .map(|corona| {
            let system = corona.equations(labeled);
            SymbolApplication { labeled: labeled.clone(), corona, system }
        })
        .collect()
}

/// The equation system of an application.
pub fn extract_equations(app: &SymbolApplication) -> EquationSystem {
    app.system.clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isohedral::lookup;

    #[test]
    fn assignment_maps_are_inverse() {
        for ih in database() {
            let k = ih.edge_count();
            for a in Assignment::all(ih) {
                for t in 0..k {
                    assert_eq!(a.arc_of_edge(a.edge(t, k), k), t);
                    assert_eq!(a.mark_of_corner(a.corner_of_mark(t, k), k), t);
                }
            }
        }
    }

    #[test]
    fn partner_choices_are_involutions() {
        for ih in database() {
            let choices = partner_choices(ih);
            assert!(!choices.is_empty(), "{}", ih.name);
            for c in choices {
                for (p, &(m, rev)) in c.iter().enumerate() {
                    assert_eq!(c[m], (p, rev));
                }
            }
        }
        assert_eq!(partner_choices(lookup("IH16").unwrap()).len(), 4);
    }

    #[test]
    fn quick_angle_check() {
        assert!(angles_admissible(&[[2, 1, 0, 0, 0, 2]]));
        assert!(!angles_admissible(&[[0, 0, 0, 0, 1, 1]]));
        assert!(!angles_admissible(&[[1, 0, 1, 1, 0, 2], [2, 0, 2, 2, 0, 2]]));
    }

    #[test]
    fn wrong_edge_count_is_empty() {
        let part: PartitionedCode = "1'1'1'1'1'".parse().unwrap();
        assert!(valid_assignments(&part, lookup("IH1").unwrap(), 1).is_empty());
    }
}
