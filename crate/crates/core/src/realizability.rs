//! Realizability of reduced systems by convex pentagons.
//!
//! Walking the boundary a, A, b, B, …, the side vectors must sum to zero.
//! Sides enter linearly, so for fixed angles closure is a 2×k linear system
//! on the free side parameters; only free angles are ever sampled.

use std::fmt;

use minilp::{ComparisonOp, OptimizationDirection, Problem};
use num_traits::{Float, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{
    augment_and_reclassify, classify, simplify, AngleEq, Classification, EquationSystem, ReducedSystem, SideEq,
    Simplified,
};
use crate::linalg::{nullspace, rref_ordered};
use crate::{Rational, Real};

pub const RESIDUAL_TOL: Real = 1e-9;
pub const MARGIN: Real = 1e-7;
pub const SURD_TOL: Real = 1e-12;
/// Samples per free angle on a line.
pub const GRID: usize = 1000;
/// Samples per free angle on a plane.
pub const GRID_2D: usize = 200;
/// Samples per free angle with three free angles.
pub const GRID_3D: usize = 60;
const MAX_DEPTH: usize = 3;
const ANGLE_NAMES: [char; 5] = ['A', 'B', 'C', 'D', 'E'];
const SIDE_NAMES: [char; 5] = ['a', 'b', 'c', 'd', 'e'];

/// A concrete pentagon: angles in radians, sides as lengths.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosureInstance<F = Real> {
    pub angles: [F; 5],
    pub sides: [F; 5],
}

/// The cosine and sine closure conditions.
pub fn closure_residual<F: Float>(inst: &ClosureInstance<F>) -> (F, F) {
    let [a, b, c, d, e] = inst.sides;
    let [aa, bb, cc, dd, _] = inst.angles;
    let r1 = a - b * aa.cos() + c * (aa + bb).cos() - d * (aa + bb + cc).cos() + e * (aa + bb + cc + dd).cos();
    let r2 = b * aa.sin() - c * (aa + bb).sin() + d * (aa + bb + cc).sin() - e * (aa + bb + cc + dd).sin();
    (r1, r2)
}

/// Rows of the closure conditions as linear forms in the sides.
pub fn closure_matrix<F: Float>(angles: &[F; 5]) -> [[F; 5]; 2] {
    let s1 = angles[0];
    let s2 = s1 + angles[1];
    let s3 = s2 + angles[2];
    let s4 = s3 + angles[3];
    [
        [F::one(), -s1.cos(), s2.cos(), -s3.cos(), s4.cos()],
        [F::zero(), s1.sin(), -s2.sin(), s3.sin(), -s4.sin()],
    ]
}

impl ClosureInstance<Real> {
    /// Witness acceptance: closure, convexity and angle sum with margins.
    pub fn is_valid_witness(&self) -> bool {
        let (r1, r2) = closure_residual(self);
        let pi = std::f64::consts::PI;
        r1.abs() < RESIDUAL_TOL
            && r2.abs() < RESIDUAL_TOL
            && self.angles.iter().all(|&x| x > MARGIN && x < pi - MARGIN)
            && self.sides.iter().all(|&x| x > MARGIN)
            && (self.angles.iter().sum::<f64>() - 3.0 * pi).abs() < RESIDUAL_TOL
    }
}

/// `p + q√2 + r√3 + s√6`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Surd {
    pub coef: [Rational; 4],
}

const SURD_ROOTS: [(f64, &str); 3] = [(std::f64::consts::SQRT_2, "√2"), (1.732_050_807_568_877_2, "√3"), (2.449_489_742_783_178, "√6")];

impl Surd {
    pub fn value(&self) -> f64 {
        let mut v = rat_f64(&self.coef[0]);
        for (k, (root, _)) in SURD_ROOTS.iter().enumerate() {
            v += rat_f64(&self.coef[k + 1]) * root;
        }
        v
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let den = self.coef.iter().fold(1i128, |l, c| num_integer::lcm(l, *c.denom()));
        let mut parts = String::new();
        for (k, c) in self.coef.iter().enumerate() {
            let n = (c * Rational::from_integer(den)).to_integer();
            if n == 0 {
                continue;
            }
            let sign = if n < 0 { "-" } else if parts.is_empty() { "" } else { "+" };
            let name = if k == 0 { "" } else { SURD_ROOTS[k - 1].1 };
            let mag = match (n.abs(), k) {
                (m, 0) => m.to_string(),
                (1, _) => name.to_string(),
                (m, _) => format!("{m}{name}"),
            };
            parts.push_str(&format!("{sign}{mag}"));
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        let terms = self.coef.iter().filter(|c| !c.is_zero()).count();
        match (den, terms) {
            (1, _) => write!(f, "{parts}"),
            (_, 1) => write!(f, "{parts}/{den}"),
            _ => write!(f, "({parts})/{den}"),
        }
    }
}

fn rat_f64(r: &Rational) -> f64 {
    r.numer().to_f64().unwrap() / r.denom().to_f64().unwrap()
}

/// Best rational approximation with denominator ≤ `max_den`, if within `tol`.
pub fn recognize_rational(x: f64, max_den: i128, tol: f64) -> Option<Rational> {
    if !x.is_finite() || x.abs() > 1e9 {
        return None;
    }
    // Continued-fraction convergents.
    let (mut h0, mut h1, mut k0, mut k1) = (0i128, 1i128, 1i128, 0i128);
    let mut y = x;
    for _ in 0..64 {
        let a = y.floor();
        let ai = a as i128;
        let (h2, k2) = (ai * h1 + h0, ai * k1 + k0);
        if k2 > max_den {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        if (x - h1 as f64 / k1 as f64).abs() <= tol {
            return Some(Rational::new(h1, k1));
        }
        let frac = y - a;
        if frac.abs() < 1e-300 {
            break;
        }
        y = 1.0 / frac;
    }
    None
}

/// Recognizes `x` as `p + q√2 + r√3 + s√6` with small rational
/// coefficients, simplest forms first.
pub fn recognize_surd(x: f64, tol: f64) -> Option<Surd> {
    if let Some(p) = recognize_rational(x, 48, tol) {
        return Some(Surd { coef: [p, Rational::zero(), Rational::zero(), Rational::zero()] });
    }
    const SUBSETS: [&[usize]; 7] = [&[0], &[1], &[2], &[0, 1], &[0, 2], &[1, 2], &[0, 1, 2]];
    for terms in 1..=3 {
        let dens: &[i128] = if terms == 3 { &[1, 2, 4] } else { &[1, 2, 3, 4, 6, 8, 12, 24] };
        for &den in dens {
            for subset in SUBSETS.iter().filter(|s| s.len() == terms) {
                if let Some(s) = search_surd(x, tol, den, subset) {
                    return Some(s);
                }
            }
        }
    }
    None
}

fn search_surd(x: f64, tol: f64, den: i128, subset: &[usize]) -> Option<Surd> {
    let lim = 4 * den;
    let mut nums = vec![-lim; subset.len()];
    loop {
        if nums.iter().all(|&n| n != 0) {
            let mut rem = x;
            for (&k, &n) in subset.iter().zip(&nums) {
                rem -= n as f64 / den as f64 * SURD_ROOTS[k].0;
            }
            if let Some(p) = recognize_rational(rem, 48, tol) {
                let mut coef = [p, Rational::zero(), Rational::zero(), Rational::zero()];
                for (&k, &n) in subset.iter().zip(&nums) {
                    coef[k + 1] = Rational::new(n, den);
                }
                return Some(Surd { coef });
            }
        }
        let mut i = 0;
        loop {
            if i == nums.len() {
                return None;
            }
            nums[i] += 1;
            if nums[i] <= lim {
                break;
            }
            nums[i] = -lim;
            i += 1;
        }
    }
}

/// Evidence behind a negative or inconclusive verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trace {
    pub reason: String,
    pub samples: usize,
    /// Largest positivity margin seen (sides normalized to unit perimeter,
    /// angles in radians), if any point had a closure solution.
    pub best_margin: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum RealizabilityVerdict {
    Feasible {
        witness: ClosureInstance,
        /// Exact relations implied by closure, in equation syntax.
        learned: Vec<String>,
        /// Closed forms recognized for witness values (scale a = 1).
        closed_forms: Vec<(String, String)>,
        /// Whether every witness value has a recognized closed form.
        exact: bool,
    },
    Infeasible {
        trace: Trace,
    },
    Unresolved {
        evidence: Trace,
    },
}

impl RealizabilityVerdict {
    pub fn is_feasible(&self) -> bool {
        matches!(self, RealizabilityVerdict::Feasible { .. })
    }

    pub fn is_infeasible(&self) -> bool {
        matches!(self, RealizabilityVerdict::Infeasible { .. })
    }
}

/// `Division`: the expression eliminated against vanishes, giving a new
/// system that is classified before being realized. `Root`: a component of
/// the closure solution set itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BranchKind {
    Division,
    Root,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum BranchOutcome {
    Excluded(String),
    Known(Classification),
    Realized(Box<Realization>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Branch {
    pub kind: BranchKind,
    pub condition: String,
    pub outcome: BranchOutcome,
}

/// A verdict for the generic case plus the special branches explored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Realization {
    pub verdict: RealizabilityVerdict,
    pub branches: Vec<Branch>,
}

impl Realization {
    fn leaf(verdict: RealizabilityVerdict) -> Self {
        Realization { verdict, branches: Vec::new() }
    }

    /// First known classification reached through a division branch.
    pub fn known_branch(&self) -> Option<(&str, &Classification)> {
        self.branches.iter().find_map(|b| match &b.outcome {
            BranchOutcome::Known(c) => Some((b.condition.as_str(), c)),
            BranchOutcome::Realized(r) => r.known_branch(),
            BranchOutcome::Excluded(_) => None,
        })
    }

    /// Whether the generic case or some branch admits a pentagon (or a
    /// known type, which is accepted without realization).
    pub fn admits_pentagon(&self) -> bool {
        !self.verdict.is_infeasible()
            || self.branches.iter().any(|b| match &b.outcome {
                BranchOutcome::Known(_) => true,
                BranchOutcome::Realized(r) => r.admits_pentagon(),
                BranchOutcome::Excluded(_) => false,
            })
    }
}

/// Free angles of a reduced system: `angles = base + Σ t_k dirs[k]` (π units),
/// where `t_k` is the value of angle `free[k]`.
#[derive(Debug, Clone)]
struct AngleParams {
    free: Vec<usize>,
    base: [f64; 5],
    dirs: Vec<[f64; 5]>,
    exact_base: [Rational; 5],
    exact_dirs: Vec<[Rational; 5]>,
}

impl AngleParams {
    /// Pivots are taken from the last angles so the earliest stay free.
    fn new(red: &ReducedSystem) -> Self {
        let mut rows = red.angles.clone();
        let pivots = rref_ordered(&mut rows, &[4, 3, 2, 1, 0], 0.0);
        let free: Vec<usize> = (0..5).filter(|j| !pivots.contains(j)).collect();
        let mut base: [Rational; 5] = std::array::from_fn(|_| Rational::zero());
        let mut dirs = vec![base; free.len()];
        for (k, &f) in free.iter().enumerate() {
            dirs[k][f] = Rational::one();
        }
        for (row, &p) in rows.iter().zip(&pivots) {
            base[p] = row[5];
            for (k, &f) in free.iter().enumerate() {
                dirs[k][p] = -row[f];
            }
        }
        AngleParams {
            free,
            base: base.map(|r| rat_f64(&r)),
            dirs: dirs.iter().map(|d| d.map(|r| rat_f64(&r))).collect(),
            exact_base: base,
            exact_dirs: dirs,
        }
    }

    /// Angles in π units.
    fn at(&self, t: &[f64]) -> [f64; 5] {
        std::array::from_fn(|j| self.base[j] + self.dirs.iter().zip(t).map(|(d, x)| d[j] * x).sum::<f64>())
    }

    fn in_domain(&self, t: &[f64]) -> bool {
        self.at(t).iter().all(|&x| x > 0.0 && x < 1.0)
    }

    /// Open interval of the single parameter keeping every angle in (0, π).
    fn interval(&self) -> Option<(Rational, Rational)> {
        let (mut lo, mut hi) = (Rational::zero(), Rational::one());
        for j in 0..5 {
            let (b, d) = (self.exact_base[j], self.exact_dirs[0][j]);
            if d.is_zero() {
                if b <= Rational::zero() || b >= Rational::one() {
                    return None;
                }
                continue;
            }
            let (x0, x1) = (-b / d, (Rational::one() - b) / d);
            let (l, h) = if d.is_positive() { (x0, x1) } else { (x1, x0) };
            lo = lo.max(l);
            hi = hi.min(h);
        }
        (lo < hi).then_some((lo, hi))
    }
}

/// Basis of the side solution space, one vector per free side; pivots are
/// taken from the last sides so `a` is free (the scale) whenever possible.
fn side_basis(red: &ReducedSystem) -> Vec<[f64; 5]> {
    let mut rows = red.sides.clone();
    let pivots = if rows.is_empty() { Vec::new() } else { rref_ordered(&mut rows, &[4, 3, 2, 1, 0], 0.0) };
    let free: Vec<usize> = (0..5).filter(|j| !pivots.contains(j)).collect();
    free.iter()
        .map(|&f| {
            let mut v = [0.0; 5];
            v[f] = 1.0;
            for (row, &p) in rows.iter().zip(&pivots) {
                v[p] = -rat_f64(&row[f]);
            }
            v
        })
        .collect()
}

fn radians(pi_units: &[f64; 5]) -> [f64; 5] {
    pi_units.map(|x| x * std::f64::consts::PI)
}

/// Closure restricted to the side basis.
fn reduced_closure(angles_pi: &[f64; 5], basis: &[[f64; 5]]) -> Vec<Vec<f64>> {
    let m = closure_matrix(&radians(angles_pi));
    m.iter().map(|row| basis.iter().map(|v| (0..5).map(|j| row[j] * v[j]).sum()).collect()).collect()
}

/// Functions that must vanish for the closure kernel to be nontrivial:
/// none when there are more free sides than conditions.
fn singular_measure(q: &[Vec<f64>]) -> Vec<f64> {
    match q[0].len() {
        1 => vec![q[0][0], q[1][0]],
        2 => vec![q[0][0] * q[1][1] - q[0][1] * q[1][0]],
        _ => Vec::new(),
    }
}

/// Functions vanishing exactly where the closure matrix has rank below
/// `rank`, so its solution space grows: 2×2 minors below rank 2, entries
/// below rank 1.
fn rank_drop(q: &[Vec<f64>], rank: usize) -> Vec<f64> {
    let k = q[0].len();
    match rank {
        0 => vec![1.0],
        1 => q.iter().flatten().cloned().collect(),
        _ => {
            let mut out = Vec::new();
            for i in 0..k {
                for j in i + 1..k {
                    out.push(q[0][i] * q[1][j] - q[0][j] * q[1][i]);
                }
            }
            out
        }
    }
}

/// Largest numerical rank of the closure matrix over sample parameters.
fn generic_rank(params: &AngleParams, basis: &[[f64; 5]]) -> usize {
    let d = params.free.len();
    let ts = grid(0.0, 1.0, 7);
    let mut rank = 0;
    for idx in 0..7usize.pow(d as u32) {
        let t: Vec<f64> = (0..d).map(|k| ts[idx / 7usize.pow(k as u32) % 7]).collect();
        if !params.in_domain(&t) {
            continue;
        }
        let q = reduced_closure(&params.at(&t), basis);
        if rank_drop(&q, 2).iter().any(|h| h.abs() > 1e-7) {
            return 2;
        }
        if q.iter().flatten().any(|h| h.abs() > 1e-7) {
            rank = 1;
        }
    }
    rank
}

#[derive(Debug, Clone)]
struct Point {
    angles_pi: [f64; 5],
    /// Side vectors spanning the closure solutions.
    kernel: Vec<[f64; 5]>,
    margin: f64,
    sides: [f64; 5],
}

fn solve_at(angles_pi: [f64; 5], basis: &[[f64; 5]]) -> Point {
    let q = reduced_closure(&angles_pi, basis);
    let scale = q.iter().flatten().fold(1.0f64, |m, x| m.max(x.abs()));
    let ys = nullspace(&q, basis.len(), 1e-9 * scale);
    let kernel: Vec<[f64; 5]> = ys
        .iter()
        .map(|y| std::array::from_fn(|j| basis.iter().zip(y).map(|(v, c)| v[j] * c).sum()))
        .collect();
    let angle_margin = angles_pi.iter().map(|&x| x.min(1.0 - x) * std::f64::consts::PI).fold(f64::INFINITY, f64::min);
    let (side_margin, sides) = best_sides(&kernel).unwrap_or((f64::NEG_INFINITY, [0.0; 5]));
    Point { angles_pi, kernel, margin: side_margin.min(angle_margin), sides }
}

/// Maximizes the smallest side over the kernel, perimeter normalized to 1.
fn best_sides(kernel: &[[f64; 5]]) -> Option<(f64, [f64; 5])> {
    let combine = |ys: &[f64]| -> [f64; 5] { std::array::from_fn(|j| ys.iter().zip(kernel).map(|(y, w)| y * w[j]).sum()) };
    let totals: Vec<f64> = kernel.iter().map(|w| w.iter().sum()).collect();
    match kernel.len() {
        0 => return None,
        1 if totals[0].abs() < 1e-12 => return None,
        1 => {
            let s = combine(&[1.0 / totals[0]]);
            return Some((s.iter().cloned().fold(f64::INFINITY, f64::min), s));
        }
        2 => return best_sides_pencil(&kernel[..2].try_into().unwrap(), [totals[0], totals[1]]),
        _ => {}
    }
    let mut p = Problem::new(OptimizationDirection::Maximize);
    let ys: Vec<_> = kernel.iter().map(|_| p.add_var(0.0, (-1e9, 1e9))).collect();
    let t = p.add_var(1.0, (-1e9, 1.0));
    for j in 0..5 {
        let mut terms: Vec<_> = ys.iter().zip(kernel).map(|(&y, w)| (y, w[j])).collect();
        terms.push((t, -1.0));
        p.add_constraint(terms, ComparisonOp::Ge, 0.0);
    }
    let total: Vec<_> = ys.iter().zip(kernel).map(|(&y, w)| (y, w.iter().sum::<f64>())).collect();
    if total.iter().all(|(_, c)| c.abs() < 1e-12) {
        return None;
    }
    p.add_constraint(total, ComparisonOp::Eq, 1.0);
    let sol = p.solve().ok()?;
    let sides = std::array::from_fn(|j| ys.iter().zip(kernel).map(|(&y, w)| sol[y] * w[j]).sum());
    Some((sol[t], sides))
}

/// Two-dimensional kernel: on the normalizing line the sides are `p + λq`,
/// and the concave function `min_j` peaks where a rising side meets a
/// falling one.
fn best_sides_pencil(w: &[[f64; 5]; 2], totals: [f64; 2]) -> Option<(f64, [f64; 5])> {
    let (i, o) = if totals[0].abs() >= totals[1].abs() { (0, 1) } else { (1, 0) };
    if totals[i].abs() < 1e-12 {
        return None;
    }
    let p: [f64; 5] = std::array::from_fn(|j| w[i][j] / totals[i]);
    let q: [f64; 5] = std::array::from_fn(|j| w[o][j] - w[i][j] * totals[o] / totals[i]);
    let at = |l: f64| -> [f64; 5] { std::array::from_fn(|j| p[j] + l * q[j]) };
    let min = |s: &[f64; 5]| s.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut best = (min(&p), p);
    for a in 0..5 {
        for b in 0..5 {
            if q[a] > 0.0 && q[b] < 0.0 {
                let s = at((p[b] - p[a]) / (q[a] - q[b]));
                let m = min(&s);
                if m > best.0 {
                    best = (m, s);
                }
            }
        }
    }
    Some((best.0.min(1.0), best.1))
}

/// Kernel of a closure matrix with at most three columns by cofactors; an
/// elimination-free second route used to confirm closed forms.
fn cofactor_kernel(q: &[Vec<f64>]) -> Option<Vec<f64>> {
    match q[0].len() {
        1 => Some(vec![1.0]),
        2 => {
            let r = if q[0][0].hypot(q[0][1]) >= q[1][0].hypot(q[1][1]) { &q[0] } else { &q[1] };
            Some(vec![-r[1], r[0]])
        }
        3 => {
            let (u, v) = (&q[0], &q[1]);
            Some(vec![u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]])
        }
        _ => None,
    }
}

/// Decides realizability of a consistent reduced system.
pub fn realize(red: &ReducedSystem) -> Realization {
    realize_at(red, 0)
}

fn realize_at(red: &ReducedSystem, depth: usize) -> Realization {
    let params = AngleParams::new(red);
    let basis = side_basis(red);
    if basis.is_empty() {
        return Realization::leaf(infeasible("side relations force every side to zero", 0, None));
    }
    match params.free.len() {
        0 => realize_point(red, &params, &basis),
        1 => realize_line(red, &params, &basis, depth),
        2 => realize_plane(red, &params, &basis, depth),
        3 if basis.len() > 2 => realize_space(red, &params, &basis, depth),
        k => Realization::leaf(RealizabilityVerdict::Unresolved {
            evidence: Trace { reason: format!("{k} free angles"), samples: 0, best_margin: None },
        }),
    }
}

fn infeasible(reason: impl Into<String>, samples: usize, best_margin: Option<f64>) -> RealizabilityVerdict {
    RealizabilityVerdict::Infeasible { trace: Trace { reason: reason.into(), samples, best_margin } }
}

fn realize_point(red: &ReducedSystem, params: &AngleParams, basis: &[[f64; 5]]) -> Realization {
    let p = solve_at(params.at(&[]), basis);
    let verdict = if p.kernel.is_empty() {
        infeasible("closure admits only zero sides", 1, None)
    } else if p.margin > MARGIN {
        feasible(red, params, basis, &[p])
    } else {
        infeasible("no closure solution with all sides positive", 1, Some(p.margin))
    };
    Realization::leaf(verdict)
}

/// Builds a Feasible verdict from feasible samples (best first or not).
fn feasible(red: &ReducedSystem, params: &AngleParams, basis: &[[f64; 5]], samples: &[Point]) -> RealizabilityVerdict {
    let best = samples.iter().max_by(|x, y| x.margin.total_cmp(&y.margin)).unwrap();
    let norm = if best.sides[0] > MARGIN { best.sides[0] } else { best.sides.iter().sum() };
    let witness = ClosureInstance { angles: radians(&best.angles_pi), sides: best.sides.map(|s| s / norm) };
    let unique: Vec<[f64; 5]> = samples.iter().filter(|p| p.kernel.len() == 1).map(|p| p.sides).collect();
    let learned = if unique.len() == samples.len() { side_relations(red, &unique) } else { Vec::new() };
    let mut closed_forms = Vec::new();
    let mut exact = false;
    if samples.len() == 1 && best.kernel.len() == 1 && params.free.is_empty() && witness.sides[0] > MARGIN {
        let q = reduced_closure(&best.angles_pi, basis);
        let alt = cofactor_kernel(&q).map(|y| -> [f64; 5] {
            let v: [f64; 5] = std::array::from_fn(|j| basis.iter().zip(&y).map(|(b, c)| b[j] * c).sum());
            v.map(|s| s / v[0])
        });
        exact = true;
        for (j, &s) in witness.sides.iter().enumerate() {
            let confirmed = recognize_surd(s, SURD_TOL).filter(|f| {
                alt.is_some_and(|v| (v[j] - f.value()).abs() < SURD_TOL) && (s - f.value()).abs() < SURD_TOL
            });
            match confirmed {
                Some(f) => closed_forms.push((SIDE_NAMES[j].to_string(), f.to_string())),
                None => exact = false,
            }
        }
    }
    RealizabilityVerdict::Feasible { witness, learned, closed_forms, exact }
}

/// Side ratios constant over every sample and rational with small terms,
/// not already implied by the system.
fn side_relations(red: &ReducedSystem, samples: &[[f64; 5]]) -> Vec<String> {
    let mut sys = red.to_system();
    let mut out = Vec::new();
    for i in 0..5 {
        for j in 0..i {
            let ratios: Vec<f64> = samples.iter().map(|s| s[i] / s[j]).collect();
            if ratios.iter().any(|r| !r.is_finite()) {
                continue;
            }
            let r0 = ratios[0];
            if ratios.iter().any(|r| (r - r0).abs() > 1e-9 * r0.abs().max(1.0)) {
                continue;
            }
            let Some(r) = recognize_rational(r0, 12, 1e-9 * r0.abs().max(1.0)) else { continue };
            if r.abs() > Rational::from_integer(12) || r.is_zero() {
                continue;
            }
            let mut coef: [Rational; 5] = std::array::from_fn(|_| Rational::zero());
            coef[i] = Rational::one();
            coef[j] = -r;
            let eq = SideEq { coef };
            if let Simplified::Reduced(cur) = simplify(&sys) {
                if cur.contains_side(&eq.coef) {
                    continue;
                }
            }
            out.push(eq.to_string());
            sys.sides.push(eq);
        }
    }
    out
}

/// Sign-change and near-tangency roots of `f` on a sorted grid, refined.
fn roots_on_grid(ts: &[f64], f: &dyn Fn(f64) -> f64) -> Vec<f64> {
    let vals: Vec<f64> = ts.iter().map(|&t| f(t)).collect();
    let mut roots: Vec<f64> = Vec::new();
    let push = |r: f64, roots: &mut Vec<f64>| {
        if roots.iter().all(|x| (x - r).abs() > 1e-9) {
            roots.push(r);
        }
    };
    for i in 0..ts.len() {
        if vals[i] == 0.0 {
            push(ts[i], &mut roots);
        }
        if i + 1 < ts.len() && vals[i] * vals[i + 1] < 0.0 {
            push(bisect(f, ts[i], ts[i + 1]), &mut roots);
        }
        if i > 0 && i + 1 < ts.len() {
            let (a, b, c) = (vals[i - 1].abs(), vals[i].abs(), vals[i + 1].abs());
            if b <= a && b <= c && b < 1e-4 && vals[i - 1] * vals[i + 1] > 0.0 {
                let t = golden_min(&|t| f(t).abs(), ts[i - 1], ts[i + 1]);
                if f(t).abs() < 1e-11 {
                    push(t, &mut roots);
                }
            }
        }
    }
    roots.sort_by(f64::total_cmp);
    roots
}

fn bisect(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let fa = f(a);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

fn golden_min(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..200 {
        let (c, d) = (b - g * (b - a), a + g * (b - a));
        if f(c) < f(d) {
            b = d;
        } else {
            a = c;
        }
        if b - a < 1e-16 {
            break;
        }
    }
    0.5 * (a + b)
}

thread_local! {
    static GRID_OFFSET: std::cell::Cell<f64> = const { std::cell::Cell::new(0.5) };
}

/// Runs `f` with sample points shifted to `offset` (in `(0, 1)`) of each
/// grid cell instead of its centre; for robustness re-runs.
pub fn with_grid_offset<R>(offset: f64, f: impl FnOnce() -> R) -> R {
    let offset = offset.clamp(1e-3, 1.0 - 1e-3);
    let old = GRID_OFFSET.with(|c| c.replace(offset));
    let out = f();
    GRID_OFFSET.with(|c| c.set(old));
    out
}

fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let off = GRID_OFFSET.with(|c| c.get());
    (0..n).map(|i| lo + (hi - lo) * (i as f64 + off) / n as f64).collect()
}

fn fmt_rat(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Adds `eq` to the system and resolves the resulting branch.
fn branch(red: &ReducedSystem, kind: BranchKind, eq: AngleEq, depth: usize) -> Branch {
    let condition = eq.to_string();
    let mut sys = red.to_system();
    sys.angles.push(eq);
    let outcome = match simplify(&sys) {
        Simplified::Reduced(r) => match (kind, classify(&r)) {
            (BranchKind::Division, c @ Classification::Known { .. }) => BranchOutcome::Known(c),
            _ => BranchOutcome::Realized(Box::new(realize_at(&r, depth + 1))),
        },
        Simplified::Inconsistent => BranchOutcome::Excluded("inconsistent".into()),
        Simplified::ConvexityViolation(why) => BranchOutcome::Excluded(why),
    };
    Branch { kind, condition, outcome }
}

fn param_eq(params: &AngleParams, coefs: &[Rational], rhs: Rational) -> AngleEq {
    let mut coef: [Rational; 5] = std::array::from_fn(|_| Rational::zero());
    for (&f, c) in params.free.iter().zip(coefs) {
        coef[f] = *c;
    }
    AngleEq { coef, rhs }
}

/// Lifts the first feasible branch to a verdict for the whole system.
fn lift_branch(branches: &[Branch]) -> Option<RealizabilityVerdict> {
    branches.iter().find_map(|b| match &b.outcome {
        BranchOutcome::Realized(r) => match &r.verdict {
            RealizabilityVerdict::Feasible { witness, learned, closed_forms, exact } => {
                let mut l = vec![b.condition.clone()];
                l.extend(learned.iter().cloned());
                Some(RealizabilityVerdict::Feasible {
                    witness: *witness,
                    learned: l,
                    closed_forms: closed_forms.clone(),
                    exact: *exact,
                })
            }
            _ => None,
        },
        _ => None,
    })
}

fn any_unresolved(branches: &[Branch]) -> bool {
    branches.iter().any(|b| match &b.outcome {
        BranchOutcome::Realized(r) => matches!(r.verdict, RealizabilityVerdict::Unresolved { .. }),
        _ => false,
    })
}

fn realize_line(red: &ReducedSystem, params: &AngleParams, basis: &[[f64; 5]], depth: usize) -> Realization {
    let name = ANGLE_NAMES[params.free[0]];
    let Some((lo, hi)) = params.interval() else {
        return Realization::leaf(infeasible(format!("no {name} keeps every angle in (0,π)"), 0, None));
    };
    let (lo_f, hi_f) = (rat_f64(&lo), rat_f64(&hi));
    let ts = grid(lo_f, hi_f, GRID);
    let span = format!("{name}∈({}π,{}π)", fmt_rat(&lo), fmt_rat(&hi));
    let measure = |t: f64| singular_measure(&reduced_closure(&params.at(&[t]), basis));
    let generic_kernel = basis.len() > 2 || ts.iter().all(|&t| measure(t).iter().all(|h| h.abs() < 1e-10));

    if generic_kernel {
        let points: Vec<Point> = ts.iter().map(|&t| solve_at(params.at(&[t]), basis)).collect();
        let best = points.iter().map(|p| p.margin).fold(f64::NEG_INFINITY, f64::max);
        let good: Vec<Point> = points.into_iter().filter(|p| p.margin > MARGIN).collect();
        let mut branches = Vec::new();
        if basis.len() > 2 && depth < MAX_DEPTH {
            // Eliminating free sides against the sine condition divides by
            // its coefficients; their rational zeros are separate cases.
            for k in 1..basis.len() {
                let coef = |t: f64| reduced_closure(&params.at(&[t]), basis)[1][k];
                for r in roots_on_grid(&ts, &coef) {
                    if let Some(v) = recognize_rational(r, 48, SURD_TOL) {
                        let eq = param_eq(params, &[Rational::one()], v);
                        if branches.iter().all(|b: &Branch| b.condition != eq.to_string()) {
                            branches.push(branch(red, BranchKind::Division, eq, depth));
                        }
                    }
                }
            }
        }
        if good.is_empty() && basis.len() > 2 && depth < MAX_DEPTH {
            // Positive sides may exist only where the kernel grows.
            let rank = generic_rank(params, basis);
            let drop = |t: f64| rank_drop(&reduced_closure(&params.at(&[t]), basis), rank);
            for r in roots_on_grid(&ts, &|t| drop(t)[0]) {
                if drop(r).iter().all(|h| h.abs() < 1e-9) {
                    if let Some(v) = recognize_rational(r, 48, SURD_TOL) {
                        let eq = param_eq(params, &[Rational::one()], v);
                        if branches.iter().all(|b: &Branch| b.condition != eq.to_string()) {
                            branches.push(branch(red, BranchKind::Root, eq, depth));
                        }
                    }
                }
            }
        }
        let verdict = if !good.is_empty() {
            feasible(red, params, basis, &good)
        } else if let Some(v) = lift_branch(&branches) {
            v
        } else {
            infeasible(format!("largest positivity margin over {span} is not positive"), GRID, Some(best))
        };
        return Realization { verdict, branches };
    }

    // Closure needs a singular matrix: only isolated angles qualify.
    let first = |t: f64| measure(t)[0];
    let mut branches = Vec::new();
    let mut numeric = Vec::new();
    for r in roots_on_grid(&ts, &first) {
        if measure(r).iter().any(|h| h.abs() > 1e-9) {
            continue;
        }
        match recognize_rational(r, 48, SURD_TOL) {
            Some(v) if depth < MAX_DEPTH => {
                branches.push(branch(red, BranchKind::Root, param_eq(params, &[Rational::one()], v), depth))
            }
            _ => numeric.push(solve_at(params.at(&[r]), basis)),
        }
    }
    let good: Vec<Point> = numeric.iter().filter(|p| p.margin > MARGIN).cloned().collect();
    let verdict = if let Some(v) = lift_branch(&branches) {
        v
    } else if let Some(p) = good.into_iter().max_by(|x, y| x.margin.total_cmp(&y.margin)) {
        feasible(red, params, basis, &[p])
    } else if any_unresolved(&branches) {
        RealizabilityVerdict::Unresolved {
            evidence: Trace { reason: "a closure branch is unresolved".into(), samples: GRID, best_margin: None },
        }
    } else {
        let best = numeric.iter().map(|p| p.margin).fold(None, |m: Option<f64>, x| Some(m.map_or(x, |m| m.max(x))));
        let reason = if branches.is_empty() && numeric.is_empty() {
            format!("closure matrix is nonsingular on {span}")
        } else {
            format!("every closure solution on {span} fails positivity")
        };
        infeasible(reason, GRID, best)
    };
    Realization { verdict, branches }
}

/// Rational lines `t2 = p·t1 + q` (or `t1 = q`) through the unit box along
/// which the closure matrix loses rank.
fn singular_lines(params: &AngleParams, basis: &[[f64; 5]]) -> Vec<(Rational, Rational, Rational)> {
    let rank = generic_rank(params, basis);
    let zero_on = |pts: &[(f64, f64)]| {
        pts.len() >= 4
            && pts.iter().all(|&(a, b)| rank_drop(&reduced_closure(&params.at(&[a, b]), basis), rank).iter().all(|h| h.abs() < 1e-9))
    };
    let samples: Vec<f64> = grid(0.0, 1.0, 64);
    let mut fracs: Vec<Rational> = Vec::new();
    for den in 1..=12i128 {
        for num in -3 * den..=3 * den {
            let r = Rational::new(num, den);
            if !fracs.contains(&r) {
                fracs.push(r);
            }
        }
    }
    let slopes: Vec<Rational> = fracs.iter().filter(|r| *r.denom() <= 4).cloned().collect();
    let mut out = Vec::new();
    // (c1, c2, rhs): c1·t1 + c2·t2 = rhs.
    for q in fracs.iter().filter(|q| q.is_positive() && **q < Rational::one()) {
        let pts: Vec<(f64, f64)> = samples.iter().map(|&b| (rat_f64(q), b)).collect();
        if zero_on(&pts) {
            out.push((Rational::one(), Rational::zero(), *q));
        }
    }
    for p in &slopes {
        for q in &fracs {
            let pts: Vec<(f64, f64)> = samples
                .iter()
                .map(|&a| (a, rat_f64(p) * a + rat_f64(q)))
                .filter(|&(_, b)| b > 0.0 && b < 1.0)
                .collect();
            if zero_on(&pts) {
                out.push((-*p, Rational::one(), *q));
            }
        }
    }
    out
}

fn realize_plane(red: &ReducedSystem, params: &AngleParams, basis: &[[f64; 5]], depth: usize) -> Realization {
    let ts = grid(0.0, 1.0, GRID_2D);
    let pts: Vec<(f64, f64)> =
        ts.iter().flat_map(|&a| ts.iter().map(move |&b| (a, b))).filter(|&(a, b)| params.in_domain(&[a, b])).collect();
    if pts.is_empty() {
        return Realization::leaf(infeasible("no free angles keep every angle in (0,π)", 0, None));
    }
    let measure = |a: f64, b: f64| singular_measure(&reduced_closure(&params.at(&[a, b]), basis));
    let generic_kernel = basis.len() > 2 || pts.iter().all(|&(a, b)| measure(a, b).iter().all(|h| h.abs() < 1e-10));
    if generic_kernel {
        let points: Vec<Point> = pts.iter().map(|&(a, b)| solve_at(params.at(&[a, b]), basis)).collect();
        let best = points.iter().map(|p| p.margin).fold(f64::NEG_INFINITY, f64::max);
        let good: Vec<Point> = points.into_iter().filter(|p| p.margin > MARGIN).collect();
        if !good.is_empty() {
            return Realization::leaf(feasible(red, params, basis, &good));
        }
        let mut branches = Vec::new();
        if basis.len() > 2 && depth < MAX_DEPTH {
            for (c1, c2, q) in singular_lines(params, basis) {
                branches.push(branch(red, BranchKind::Root, param_eq(params, &[c1, c2], q), depth));
            }
        }
        let verdict = lift_branch(&branches).unwrap_or_else(|| {
            infeasible("largest positivity margin over the angle domain is not positive", pts.len(), Some(best))
        });
        return Realization { verdict, branches };
    }

    let lines = singular_lines(params, basis);
    let mut branches = Vec::new();
    if depth < MAX_DEPTH {
        for (c1, c2, q) in &lines {
            branches.push(branch(red, BranchKind::Root, param_eq(params, &[*c1, *c2], *q), depth));
        }
    }
    // Closure roots on grid rows not explained by a rational line.
    let on_line = |a: f64, b: f64| {
        lines.iter().any(|(c1, c2, q)| (rat_f64(c1) * a + rat_f64(c2) * b - rat_f64(q)).abs() < 1e-6)
    };
    let mut stray = Vec::new();
    for &a in &ts {
        let row: Vec<f64> = ts.iter().cloned().filter(|&b| params.in_domain(&[a, b])).collect();
        if row.len() < 2 {
            continue;
        }
        for b in roots_on_grid(&row, &|b| measure(a, b)[0]) {
            if params.in_domain(&[a, b]) && !on_line(a, b) && measure(a, b).iter().all(|h| h.abs() < 1e-9) {
                stray.push(solve_at(params.at(&[a, b]), basis));
            }
        }
    }
    let good: Vec<Point> = stray.iter().filter(|p| p.margin > MARGIN).cloned().collect();
    let verdict = if let Some(v) = lift_branch(&branches) {
        v
    } else if !good.is_empty() {
        feasible(red, params, basis, &good)
    } else if !stray.is_empty() || any_unresolved(&branches) {
        let best = stray.iter().map(|p| p.margin).fold(None, |m: Option<f64>, x| Some(m.map_or(x, |m| m.max(x))));
        RealizabilityVerdict::Unresolved {
            evidence: Trace {
                reason: format!("{} closure roots off rational lines, none positive", stray.len()),
                samples: pts.len(),
                best_margin: best,
            },
        }
    } else {
        infeasible(format!("closure solutions lie on {} rational lines, none realizable", lines.len()), pts.len(), None)
    };
    Realization { verdict, branches }
}

/// Rational planes `c·t = q` (small integer `c`) through the unit cube on
/// which the closure matrix loses rank.
fn singular_planes(params: &AngleParams, basis: &[[f64; 5]]) -> Vec<([Rational; 3], Rational)> {
    let rank = generic_rank(params, basis);
    let samples = grid(0.0, 1.0, 12);
    let mut out = Vec::new();
    for c0 in 0..=3i128 {
        for c1 in -3..=3i128 {
            for c2 in -3..=3i128 {
                let c = [c0, c1, c2];
                let lead = c.iter().position(|&x| x != 0);
                if lead.is_none_or(|l| c[l] < 0) || gcd3(c) != 1 {
                    continue;
                }
                // Solve for the coordinate with the largest coefficient.
                let k = (0..3).max_by_key(|&j| c[j].abs()).unwrap();
                let (o1, o2) = ((k + 1) % 3, (k + 2) % 3);
                let lo: i128 = c.iter().map(|&x| x.min(0)).sum();
                let hi: i128 = c.iter().map(|&x| x.max(0)).sum();
                for den in 1..=12i128 {
                    for num in lo * den + 1..hi * den {
                        let q = Rational::new(num, den);
                        if *q.denom() != den {
                            continue;
                        }
                        let qf = rat_f64(&q);
                        let mut hits = 0;
                        let mut ok = true;
                        'pts: for &u in &samples {
                            for &v in &samples {
                                let mut t = [0.0; 3];
                                t[o1] = u;
                                t[o2] = v;
                                t[k] = (qf - c[o1] as f64 * u - c[o2] as f64 * v) / c[k] as f64;
                                if !params.in_domain(&t) {
                                    continue;
                                }
                                if rank_drop(&reduced_closure(&params.at(&t), basis), rank).iter().any(|h| h.abs() > 1e-9) {
                                    ok = false;
                                    break 'pts;
                                }
                                hits += 1;
                            }
                        }
                        if ok && hits >= 4 {
                            out.push((c.map(Rational::from_integer), q));
                        }
                    }
                }
            }
        }
    }
    out
}

fn gcd3(c: [i128; 3]) -> i128 {
    c.iter().fold(0i128, |g, &x| num_integer::Integer::gcd(&g, &x))
}

/// Three free angles with more free sides than closure conditions: the
/// margin is sampled, and where it is nowhere positive the rational planes
/// on which the kernel grows are realized separately.
fn realize_space(red: &ReducedSystem, params: &AngleParams, basis: &[[f64; 5]], depth: usize) -> Realization {
    let ts = grid(0.0, 1.0, GRID_3D);
    let mut best = f64::NEG_INFINITY;
    let mut good = Vec::new();
    let mut samples = 0;
    for &a in &ts {
        for &b in &ts {
            for &c in &ts {
                if !params.in_domain(&[a, b, c]) {
                    continue;
                }
                samples += 1;
                let p = solve_at(params.at(&[a, b, c]), basis);
                best = best.max(p.margin);
                if p.margin > MARGIN {
                    good.push(p);
                }
            }
        }
    }
    if samples == 0 {
        return Realization::leaf(infeasible("no free angles keep every angle in (0,π)", 0, None));
    }
    if !good.is_empty() {
        return Realization::leaf(feasible(red, params, basis, &good));
    }
    let mut branches = Vec::new();
    if depth < MAX_DEPTH {
        for (c, q) in singular_planes(params, basis) {
            branches.push(branch(red, BranchKind::Root, param_eq(params, &c, q), depth));
        }
    }
    let verdict = lift_branch(&branches).unwrap_or_else(|| {
        infeasible("largest positivity margin over the angle domain is not positive", samples, Some(best))
    });
    Realization { verdict, branches }
}

/// Cheap sufficient test (no false positives, possible false negatives): some sampled angles admit positive sides.
pub fn sampled_pentagon(red: &ReducedSystem) -> bool {
    let params = AngleParams::new(red);
    let basis = side_basis(red);
    if basis.is_empty() {
        return false;
    }
    let d = params.free.len();
    let n = match d {
        0 => 1,
        1 => GRID,
        2 => GRID_2D,
        3 => GRID_3D,
        _ => return false,
    };
    let ts = grid(0.0, 1.0, n);
    let total = n.pow(d as u32);
    (0..total).any(|mut idx| {
        let t: Vec<f64> = (0..d)
            .map(|_| {
                let x = ts[idx % n];
                idx /= n;
                x
            })
            .collect();
        params.in_domain(&t) && solve_at(params.at(&t), &basis).margin > MARGIN
    })
}

/// Whether some convex pentagon satisfies the system (known-type branches
/// count as realizable).
pub fn admits_pentagon(red: &ReducedSystem) -> bool {
    sampled_pentagon(red) || realize(red).admits_pentagon()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TriageFlag {
    /// Closure or a division branch places the system in a known type.
    Reclassified,
    /// Realizable and still matching no known type.
    NewType,
    /// No convex pentagon satisfies the system.
    Impossible,
    /// No certificate either way; left for manual review.
    NeedsReview,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TriageReport {
    pub system: String,
    pub realization: Realization,
    pub classification: Classification,
    pub flag: TriageFlag,
}

/// Realizes an untyped system and reclassifies with what closure teaches.
pub fn triage_untyped(red: &ReducedSystem) -> TriageReport {
    let realization = realize(red);
    let (classification, flag) = match &realization.verdict {
        RealizabilityVerdict::Feasible { learned, .. } => {
            let extra = EquationSystem::parse(&learned.join(", ")).unwrap_or_default();
            match augment_and_reclassify(red, &extra) {
                Ok(c @ Classification::Known { .. }) => (c, TriageFlag::Reclassified),
                Ok(c) => (c, TriageFlag::NewType),
                Err(_) => (Classification::Untyped, TriageFlag::NeedsReview),
            }
        }
        RealizabilityVerdict::Infeasible { .. } => match realization.known_branch() {
            Some((_, c)) => (c.clone(), TriageFlag::Reclassified),
            None => (Classification::Untyped, TriageFlag::Impossible),
        },
        RealizabilityVerdict::Unresolved { .. } => (Classification::Untyped, TriageFlag::NeedsReview),
    };
    TriageReport { system: red.to_string(), realization, classification, flag }
}
