//! SVG drawings of a pentagon, a labeled block and one corona.

use std::f64::consts::PI;
use std::fmt::Write;

use minilp::{ComparisonOp, OptimizationDirection, Problem};

use crate::blockforms::{label_name, side_name, LabeledBlock, FLAT};
use crate::matcher::Corona;
use crate::realizability::ClosureInstance;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum RenderError {
    #[error("not a convex pentagon: {0}")]
    InvalidPentagon(String),
    #[error("the block's segments admit no positive lengths")]
    NoSegments,
}

type Pt = (f64, f64);

const PALETTE: [&str; 3] = ["#8ecae6", "#ffb703", "#90be6d"];

/// Corners E, A, B, C, D in order: side `a` runs from the first to the
/// second and the heading turns by π minus each angle.
pub fn pentagon_vertices(w: &ClosureInstance) -> [Pt; 5] {
    let mut out = [(0.0, 0.0); 5];
    let mut h = 0.0f64;
    for k in 0..4 {
        let (x, y) = out[k];
        out[k + 1] = (x + w.sides[k] * h.cos(), y + w.sides[k] * h.sin());
        h += PI - w.angles[k];
    }
    out
}

fn check(w: &ClosureInstance) -> Result<(), RenderError> {
    if w.is_valid_witness() {
        Ok(())
    } else {
        Err(RenderError::InvalidPentagon(format!("angles {:?}, sides {:?}", w.angles, w.sides)))
    }
}

struct Canvas {
    body: String,
    min: Pt,
    max: Pt,
}

impl Canvas {
    fn new() -> Self {
        Canvas { body: String::new(), min: (f64::INFINITY, f64::INFINITY), max: (f64::NEG_INFINITY, f64::NEG_INFINITY) }
    }

    fn grow(&mut self, p: Pt) {
        self.min = (self.min.0.min(p.0), self.min.1.min(p.1));
        self.max = (self.max.0.max(p.0), self.max.1.max(p.1));
    }

    fn polygon(&mut self, pts: &[Pt], fill: &str, opacity: f64) {
        pts.iter().for_each(|&p| self.grow(p));
        let coords: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.6},{:.6}", -y)).collect();
        writeln!(
            self.body,
            r#"<polygon points="{}" fill="{fill}" fill-opacity="{opacity}" stroke="black" stroke-width="0.01"/>"#,
            coords.join(" ")
        )
        .unwrap();
    }

    fn text(&mut self, p: Pt, s: &str, size: f64) {
        writeln!(
            self.body,
            r#"<text x="{:.6}" y="{:.6}" font-size="{size:.4}" text-anchor="middle" dominant-baseline="middle">{s}</text>"#,
            p.0, -p.1
        )
        .unwrap();
    }

    fn finish(self) -> String {
        let pad = 0.05 * (self.max.0 - self.min.0).max(self.max.1 - self.min.1);
        let (x0, y0) = (self.min.0 - pad, -self.max.1 - pad);
        let (w, h) = (self.max.0 - self.min.0 + 2.0 * pad, self.max.1 - self.min.1 + 2.0 * pad);
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{x0:.6} {y0:.6} {w:.6} {h:.6}\" width=\"600\" height=\"{:.0}\">\n{}</svg>\n",
            600.0 * h / w,
            self.body
        )
    }
}

fn centroid(pts: &[Pt]) -> Pt {
    let n = pts.len() as f64;
    (pts.iter().map(|p| p.0).sum::<f64>() / n, pts.iter().map(|p| p.1).sum::<f64>() / n)
}

fn toward(p: Pt, c: Pt, t: f64) -> Pt {
    (p.0 + (c.0 - p.0) * t, p.1 + (c.1 - p.1) * t)
}

/// The pentagon with its corner and side labels.
pub fn render_pentagon(w: &ClosureInstance) -> Result<String, RenderError> {
    check(w)?;
    let v = pentagon_vertices(w);
    let mut cv = Canvas::new();
    cv.polygon(&v, PALETTE[0], 0.8);
    let c = centroid(&v);
    let size = 0.06 * w.sides.iter().sum::<f64>() / 5.0 * 2.0;
    for k in 0..5 {
        // Vertex k + 1 is corner k; side k runs from vertex k to k + 1.
        cv.text(toward(v[(k + 1) % 5], c, 0.18), label_name(k as u8), size);
        let mid = ((v[k].0 + v[(k + 1) % 5].0) / 2.0, (v[k].1 + v[(k + 1) % 5].1) / 2.0);
        cv.text(toward(mid, c, -0.12), &side_name(k as u8).to_string(), size);
    }
    Ok(cv.finish())
}

/// Segment lengths making every cell side match the pentagon, as even as
/// possible (the smallest segment is maximized).
fn segment_lengths(corona: &Corona, labeled: &LabeledBlock, w: &ClosureInstance) -> Result<Vec<f64>, RenderError> {
    let mut p = Problem::new(OptimizationDirection::Maximize);
    let segs: Vec<_> = (0..corona.segment_count).map(|_| p.add_var(0.0, (0.0, f64::INFINITY))).collect();
    let t = p.add_var(1.0, (0.0, f64::INFINITY));
    for &s in &segs {
        p.add_constraint([(s, 1.0), (t, -1.0)], ComparisonOp::Ge, 0.0);
    }
    for (c, ids) in corona.segment.iter().enumerate() {
        for x in 0..5u8 {
            let terms: Vec<_> =
                ids.iter().enumerate().filter(|&(j, _)| labeled.side_of(c, j) == x).map(|(_, &id)| (segs[id], 1.0)).collect();
            p.add_constraint(terms, ComparisonOp::Eq, w.sides[x as usize]);
        }
    }
    for &(x, y) in &corona.same_segment {
        p.add_constraint([(segs[x], 1.0), (segs[y], -1.0)], ComparisonOp::Eq, 0.0);
    }
    let sol = p.solve().map_err(|_| RenderError::NoSegments)?;
    if sol[t] <= 1e-9 {
        return Err(RenderError::NoSegments);
    }
    Ok(segs.iter().map(|&s| sol[s]).collect())
}

/// Rigid motion (with optional reflection) sending `s0, s1` to `t0, t1`.
fn motion(s0: Pt, s1: Pt, t0: Pt, t1: Pt, reflect: bool) -> impl Fn(Pt) -> Pt {
    let f = move |p: Pt| if reflect { (p.0, -p.1) } else { p };
    let (a0, a1) = (f(s0), f(s1));
    let rot = (t1.1 - t0.1).atan2(t1.0 - t0.0) - (a1.1 - a0.1).atan2(a1.0 - a0.0);
    let (cs, sn) = (rot.cos(), rot.sin());
    move |p: Pt| {
        let q = f(p);
        let (dx, dy) = (q.0 - a0.0, q.1 - a0.1);
        (t0.0 + cs * dx - sn * dy, t0.1 + sn * dx + cs * dy)
    }
}

/// Cell polygons of the block in the plane.
pub fn block_geometry(corona: &Corona, labeled: &LabeledBlock, w: &ClosureInstance) -> Result<Vec<Vec<Pt>>, RenderError> {
    check(w)?;
    let form = &corona.form;
    let len = segment_lengths(corona, labeled, w)?;
    let local: Vec<Vec<Pt>> = form
        .cells
        .iter()
        .enumerate()
        .map(|(c, &k)| {
            let angle = |j: usize| match labeled.labels[c][j % k] {
                FLAT => PI,
                l => w.angles[l as usize],
            };
            let mut pts = vec![(0.0, 0.0)];
            let mut h = 0.0f64;
            for j in 0..k - 1 {
                let (x, y) = pts[j];
                let s = len[corona.segment[c][j]];
                pts.push((x + s * h.cos(), y + s * h.sin()));
                h += PI - angle(j + 1);
            }
            pts
        })
        .collect();
    let mut placed: Vec<Option<Vec<Pt>>> = vec![None; form.cells.len()];
    placed[0] = Some(local[0].clone());
    while placed.iter().any(|p| p.is_none()) {
        let before = placed.iter().filter(|p| p.is_some()).count();
        for &((c1, s1), (c2, s2)) in &form.glue {
            for ((a, sa), (b, sb)) in [((c1, s1), (c2, s2)), ((c2, s2), (c1, s1))] {
                if placed[b].is_some() {
                    continue;
                }
                let Some(pa) = placed[a].clone() else { continue };
                let (ka, kb) = (form.cells[a], form.cells[b]);
                let m = motion(local[b][(sb + 1) % kb], local[b][sb], pa[sa], pa[(sa + 1) % ka], false);
                placed[b] = Some(local[b].iter().map(|&p| m(p)).collect());
            }
        }
        if placed.iter().filter(|p| p.is_some()).count() == before {
            break;
        }
    }
    Ok(placed.into_iter().map(|p| p.unwrap_or_default()).collect())
}

/// The block (labeled, colored per cell) surrounded by its neighbours
/// across every arc.
pub fn render_block(corona: &Corona, labeled: &LabeledBlock, w: &ClosureInstance) -> Result<String, RenderError> {
    let cells = block_geometry(corona, labeled, w)?;
    let form = &corona.form;
    let part = &corona.partition;
    let bpt: Vec<Pt> = form.boundary.iter().map(|&(c, s)| cells[c][s]).collect();
    let m = bpt.len();
    let k = part.arc_count();
    let positions = |t: usize| -> Vec<usize> { (0..=part.arc_len(t)).map(|j| (part.marks[t] + j) % m).collect() };
    let mut cv = Canvas::new();
    for t in 0..k {
        let (u, rev) = corona.assignment.partner(t, k);
        let (pt, pu) = (positions(t), positions(u));
        let l = pt.len() - 1;
        let (j0, j1) = if rev { (l, 0) } else { (0, l) };
        let f = motion(bpt[pu[j0]], bpt[pu[j1]], bpt[pt[0]], bpt[pt[l]], !rev);
        for (c, poly) in cells.iter().enumerate() {
            let img: Vec<Pt> = poly.iter().map(|&p| f(p)).collect();
            cv.polygon(&img, PALETTE[c % PALETTE.len()], 0.35);
        }
    }
    let scale = w.sides.iter().sum::<f64>() / 5.0;
    for (c, poly) in cells.iter().enumerate() {
        cv.polygon(poly, PALETTE[c % PALETTE.len()], 0.9);
        let ctr = centroid(poly);
        for (j, &p) in poly.iter().enumerate() {
            cv.text(toward(p, ctr, 0.2), label_name(labeled.labels[c][j]), 0.12 * scale);
        }
    }
    Ok(cv.finish())
}
