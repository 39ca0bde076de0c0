//! Exact angle/side equation systems, their reduction, and classification
//! against the known pentagon types modulo relabeling.
//!
//! Angles are measured in units of π, so `2A+B=2π` is stored as the row
//! `[2, 1, 0, 0, 0 | 2]`. Side equations are homogeneous.

use std::fmt;
use std::sync::OnceLock;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::linalg::{in_row_space, rref};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("cannot parse equation {0:?}: {1}")]
    Parse(String, String),
}

/// `Σ coef·X = rhs·π` over the angles A..E.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AngleEq {
    pub coef: [Rational; 5],
    pub rhs: Rational,
}

/// `Σ coef·x = 0` over the sides a..e.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SideEq {
    pub coef: [Rational; 5],
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EquationSystem {
    pub angles: Vec<AngleEq>,
    pub sides: Vec<SideEq>,
}

fn zero5() -> [Rational; 5] {
    std::array::from_fn(|_| Rational::zero())
}

impl AngleEq {
    /// `A+B+C+D+E = 3π`.
    pub fn angle_sum() -> Self {
        AngleEq { coef: std::array::from_fn(|_| Rational::one()), rhs: Rational::from_integer(3) }
    }

    fn row(&self) -> Vec<Rational> {
        let mut r = self.coef.to_vec();
        r.push(self.rhs);
        r
    }
}

impl EquationSystem {
    /// An empty system holding only the angle-sum relation.
    pub fn new() -> Self {
        EquationSystem { angles: vec![AngleEq::angle_sum()], sides: Vec::new() }
    }

    /// Parses equations separated by commas, semicolons or newlines; the
    /// angle-sum relation is always included.
    pub fn parse(text: &str) -> Result<Self, AlgebraError> {
        let mut sys = EquationSystem::new();
        for part in text.split([',', ';', '\n']).map(str::trim).filter(|s| !s.is_empty()) {
            sys.push_parsed(part)?;
        }
        Ok(sys)
    }

    /// Adds one (possibly chained, `a=b=c`) equation.
    pub fn push_parsed(&mut self, eq: &str) -> Result<(), AlgebraError> {
        let err = |m: &str| AlgebraError::Parse(eq.to_string(), m.to_string());
        let sides: Vec<Linear> = eq.split('=').map(parse_linear).collect::<Result<_, _>>().map_err(|m| err(&m))?;
        if sides.len() < 2 {
            return Err(err("no '='"));
        }
        for w in sides.windows(2) {
            let d = w[0].sub(&w[1]);
            let angular = d.angle.iter().any(|c| !c.is_zero()) || !d.pi.is_zero();
            let lateral = d.side.iter().any(|c| !c.is_zero());
            match (angular, lateral) {
                (true, true) => return Err(err("mixes angles and sides")),
                (true, false) => self.angles.push(AngleEq { coef: d.angle, rhs: -d.pi }),
                (false, true) => self.sides.push(SideEq { coef: d.side }),
                (false, false) => {}
            }
        }
        Ok(())
    }
}

#[derive(Clone)]
struct Linear {
    angle: [Rational; 5],
    side: [Rational; 5],
    pi: Rational,
}

impl Linear {
    fn sub(&self, o: &Linear) -> Linear {
        Linear {
            angle: std::array::from_fn(|j| self.angle[j] - o.angle[j]),
            side: std::array::from_fn(|j| self.side[j] - o.side[j]),
            pi: self.pi - o.pi,
        }
    }
}

// Terms: [sign] [int] [symbol] [/int] with symbol in A-E, a-e, π (or "pi");
// a parenthesized group may follow an integer, e.g. 2(A+C+D).
fn parse_linear(s: &str) -> Result<Linear, String> {
    let chars: Vec<char> = s.replace("pi", "π").chars().filter(|c| !c.is_whitespace()).collect();
    let mut pos = 0;
    let out = parse_sum(&chars, &mut pos)?;
    if pos != chars.len() {
        return Err(format!("unexpected {:?}", chars[pos]));
    }
    Ok(out)
}

fn parse_sum(c: &[char], pos: &mut usize) -> Result<Linear, String> {
    let mut acc = Linear { angle: zero5(), side: zero5(), pi: Rational::zero() };
    let mut first = true;
    while *pos < c.len() && c[*pos] != ')' {
        let mut sign = Rational::one();
        if c[*pos] == '+' || c[*pos] == '-' {
            if c[*pos] == '-' {
                sign = -sign;
            }
            *pos += 1;
        } else if !first {
            return Err(format!("expected sign at {:?}", c[*pos]));
        }
        first = false;
        let mut num = None;
        let start = *pos;
        while *pos < c.len() && c[*pos].is_ascii_digit() {
            *pos += 1;
        }
        if *pos > start {
            let t: String = c[start..*pos].iter().collect();
            num = Some(Rational::from_integer(t.parse::<i128>().map_err(|e| e.to_string())?));
        }
        let coef = sign * num.unwrap_or_else(Rational::one);
        let mut term = Linear { angle: zero5(), side: zero5(), pi: Rational::zero() };
        match c.get(*pos) {
            Some('(') => {
                *pos += 1;
                term = parse_sum(c, pos)?;
                if c.get(*pos) != Some(&')') {
                    return Err("unbalanced parenthesis".into());
                }
                *pos += 1;
            }
            Some(&ch @ 'A'..='E') => {
                term.angle[(ch as u8 - b'A') as usize] = Rational::one();
                *pos += 1;
            }
            Some(&ch @ 'a'..='e') => {
                term.side[(ch as u8 - b'a') as usize] = Rational::one();
                *pos += 1;
            }
            Some('π') => {
                term.pi = Rational::one();
                *pos += 1;
            }
            _ if num.as_ref().is_some_and(|n| n.is_zero()) => {}
            _ if num.is_some() => return Err("bare constants must be multiples of π".into()),
            other => return Err(format!("unexpected {other:?}")),
        }
        let mut den = Rational::one();
        if c.get(*pos) == Some(&'/') {
            *pos += 1;
            let start = *pos;
            while *pos < c.len() && c[*pos].is_ascii_digit() {
                *pos += 1;
            }
            let t: String = c[start..*pos].iter().collect();
            let d = t.parse::<i128>().map_err(|_| "bad denominator".to_string())?;
            if d == 0 {
                return Err("zero denominator".into());
            }
            den = Rational::from_integer(d);
        }
        let f = coef / den;
        for j in 0..5 {
            acc.angle[j] += f * term.angle[j];
            acc.side[j] += f * term.side[j];
        }
        acc.pi += f * term.pi;
    }
    Ok(acc)
}

fn fmt_terms(f: &mut fmt::Formatter<'_>, coef: &[Rational], names: &[&str]) -> fmt::Result {
    let mut first = true;
    for (c, n) in coef.iter().zip(names) {
        if c.is_zero() {
            continue;
        }
        let sign = if c.is_negative() { "-" } else if first { "" } else { "+" };
        let a = c.abs();
        let mag = if a.is_one() {
            n.to_string()
        } else if a.is_integer() {
            format!("{a}{n}")
        } else if a.numer().is_one() {
            format!("{n}/{}", a.denom())
        } else {
            format!("{}{n}/{}", a.numer(), a.denom())
        };
        write!(f, "{sign}{mag}")?;
        first = false;
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

fn fmt_pi(r: &Rational) -> String {
    if r.is_zero() {
        "0".into()
    } else if r.is_integer() {
        if r.is_one() { "π".into() } else if *r == -Rational::one() { "-π".into() } else { format!("{r}π") }
    } else if r.numer().abs() == 1 {
        format!("{}π/{}", if r.is_negative() { "-" } else { "" }, r.denom())
    } else {
        format!("{}π/{}", r.numer(), r.denom())
    }
}

const ANGLE_NAMES: [&str; 5] = ["A", "B", "C", "D", "E"];
const SIDE_NAMES: [&str; 5] = ["a", "b", "c", "d", "e"];

impl fmt::Display for AngleEq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(f, &self.coef, &ANGLE_NAMES)?;
        write!(f, "={}", fmt_pi(&self.rhs))
    }
}

impl fmt::Display for SideEq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Move negative terms to the right-hand side.
        let lhs: Vec<Rational> = self.coef.iter().map(|c| if c.is_positive() { *c } else { Rational::zero() }).collect();
        let rhs: Vec<Rational> = self.coef.iter().map(|c| if c.is_negative() { -*c } else { Rational::zero() }).collect();
        fmt_terms(f, &lhs, &SIDE_NAMES)?;
        write!(f, "=")?;
        fmt_terms(f, &rhs, &SIDE_NAMES)
    }
}

impl fmt::Display for EquationSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.angles.iter().map(|e| e.to_string()).chain(self.sides.iter().map(|e| e.to_string())).collect();
        write!(f, "{}", parts.join(", "))
    }
}

/// A system in reduced row echelon form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ReducedSystem {
    /// Rows `[A..E | rhs]`, leading coefficient 1.
    pub angles: Vec<Vec<Rational>>,
    pub angle_pivots: Vec<usize>,
    pub sides: Vec<Vec<Rational>>,
    pub side_pivots: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Simplified {
    Reduced(ReducedSystem),
    Inconsistent,
    ConvexityViolation(String),
}

/// Exact Gauss–Jordan reduction with consistency and convexity checks.
pub fn simplify(sys: &EquationSystem) -> Simplified {
    let mut a: Vec<Vec<Rational>> = sys.angles.iter().map(|e| e.row()).collect();
    if !sys.angles.contains(&AngleEq::angle_sum()) {
        a.push(AngleEq::angle_sum().row());
    }
    let ap = rref(&mut a, 0.0);
    if ap.contains(&5) {
        return Simplified::Inconsistent;
    }
    let mut s: Vec<Vec<Rational>> = sys.sides.iter().map(|e| e.coef.to_vec()).collect();
    let sp = if s.is_empty() { Vec::new() } else { rref(&mut s, 0.0) };
    let red = ReducedSystem { angles: a, angle_pivots: ap, sides: s, side_pivots: sp };
    match red.convexity_violation() {
        Some(why) => Simplified::ConvexityViolation(why),
        None => Simplified::Reduced(red),
    }
}

impl ReducedSystem {
    /// Angles fixed by the system, in units of π.
    pub fn determined_angles(&self) -> Vec<(usize, Rational)> {
        self.angles
            .iter()
            .filter_map(|r| {
                let nz: Vec<usize> = (0..5).filter(|&j| !r[j].is_zero()).collect();
                (nz.len() == 1).then(|| (nz[0], r[5] / r[nz[0]]))
            })
            .collect()
    }

    fn convexity_violation(&self) -> Option<String> {
        for (j, v) in self.determined_angles() {
            if v <= Rational::zero() || v >= Rational::one() {
                return Some(format!("{}={}", ANGLE_NAMES[j], fmt_pi(&v)));
            }
        }
        for r in &self.sides {
            let pos = r.iter().filter(|c| c.is_positive()).count();
            let neg = r.iter().filter(|c| c.is_negative()).count();
            if pos == 0 || neg == 0 {
                return Some(format!("{}", SideEq { coef: std::array::from_fn(|j| r[j]) }));
            }
        }
        None
    }

    /// Converts back to a plain system.
    pub fn to_system(&self) -> EquationSystem {
        EquationSystem {
            angles: self
                .angles
                .iter()
                .map(|r| AngleEq { coef: std::array::from_fn(|j| r[j]), rhs: r[5] })
                .collect(),
            sides: self.sides.iter().map(|r| SideEq { coef: std::array::from_fn(|j| r[j]) }).collect(),
        }
    }

    /// Canonical text (rows of the reduced form).
    pub fn canonical(&self) -> String {
        self.to_system().to_string()
    }

    pub fn contains_angle(&self, row: &[Rational]) -> bool {
        in_row_space(&self.angles, &self.angle_pivots, row, 0.0)
    }

    pub fn contains_side(&self, row: &[Rational]) -> bool {
        in_row_space(&self.sides, &self.side_pivots, row, 0.0)
    }
}

impl fmt::Display for ReducedSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.canonical())
    }
}

/// A relabeling of the pentagon: corner `X -> rot ± X`, sides following.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Relabel {
    pub rot: usize,
    pub reflect: bool,
}

impl Relabel {
    pub fn all() -> impl Iterator<Item = Relabel> {
        (0..10).map(|j| Relabel { rot: j % 5, reflect: j >= 5 })
    }

    pub fn corner(self, x: usize) -> usize {
        if self.reflect { (self.rot + 5 - x) % 5 } else { (self.rot + x) % 5 }
    }

    /// Side `x` joins corners `x-1` and `x`.
    pub fn side(self, x: usize) -> usize {
        if self.reflect { (self.rot + 6 - x) % 5 } else { (self.rot + x) % 5 }
    }

    pub fn angle_eq(self, e: &AngleEq) -> AngleEq {
        let mut coef = zero5();
        for x in 0..5 {
            coef[self.corner(x)] = e.coef[x];
        }
        AngleEq { coef, rhs: e.rhs }
    }

    pub fn side_eq(self, e: &SideEq) -> SideEq {
        let mut coef = zero5();
        for x in 0..5 {
            coef[self.side(x)] = e.coef[x];
        }
        SideEq { coef }
    }

    pub fn system(self, s: &EquationSystem) -> EquationSystem {
        EquationSystem {
            angles: s.angles.iter().map(|e| self.angle_eq(e)).collect(),
            sides: s.sides.iter().map(|e| self.side_eq(e)).collect(),
        }
    }
}

/// Whether two reduced systems agree up to relabeling.
pub fn equivalent(x: &ReducedSystem, y: &ReducedSystem) -> bool {
    Relabel::all().any(|g| matches!(simplify(&g.system(&x.to_system())), Simplified::Reduced(r) if r == *y))
}

/// A known pentagon type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PentagonTypeDef {
    pub id: u32,
    pub text: &'static str,
    pub system: EquationSystem,
}

const KNOWN: [(u32, &str); 15] = [
    (1, "D+E=π"),
    (2, "C+E=π, a=d"),
    (3, "A=2π/3, C=2π/3, D=2π/3, a=b, d=c+e"),
    (4, "A=π/2, C=π/2, a=b, c=d"),
    (5, "A=π/3, C=2π/3, a=b, c=d"),
    (6, "C+E=π, A=2C, a=b=e, c=d"),
    (7, "2B+C=2π, 2D+A=2π, a=b=c=d"),
    (8, "2A+B=2π, 2D+C=2π, a=b=c=d"),
    (9, "2E+B=2π, 2D+C=2π, a=b=c=d"),
    (10, "E=π/2, A+D=π, 2B-D=π, 2C+D=2π, a=e=b+d"),
    (11, "A=π/2, C+E=π, 2B+C=2π, d=e=2a+c"),
    (12, "A=π/2, C+E=π, 2B+C=2π, 2a=c+e=d"),
    (13, "A=π/2, C=π/2, 2B=2π-D, 2E=2π-D, c=d, 2c=e"),
    (14, "D=π/2, 2E+A=2π, A+C=π, b=c=2a=2d"),
    (15, "A=π/3, B=3π/4, C=7π/12, D=π/2, E=5π/6, a=2b=2d=2e"),
];

/// Types 1–15; the first 14 are the previously known ones.
pub fn catalog() -> &'static [PentagonTypeDef] {
    static CAT: OnceLock<Vec<PentagonTypeDef>> = OnceLock::new();
    CAT.get_or_init(|| {
        KNOWN
            .iter()
            .map(|&(id, text)| PentagonTypeDef {
                id,
                text,
                system: EquationSystem::parse(text).expect("type definitions parse"),
            })
            .collect()
    })
}

pub fn type_def(id: u32) -> Option<&'static PentagonTypeDef> {
    catalog().iter().find(|t| t.id == id)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Classification {
    /// Smallest matching id first, then every other match.
    Known { id: u32, all: Vec<u32> },
    Untyped,
}

/// Whether some relabeling of type `t` is implied by `red`.
pub fn matches_type(red: &ReducedSystem, t: &PentagonTypeDef) -> bool {
    Relabel::all().any(|g| {
        let s = g.system(&t.system);
        s.angles.iter().all(|e| red.contains_angle(&e.row()))
            && s.sides.iter().all(|e| red.contains_side(&e.coef))
    })
}

/// Classification against the given type ids.
pub fn classify_among(red: &ReducedSystem, ids: &[u32]) -> Classification {
    let all: Vec<u32> =
        catalog().iter().filter(|t| ids.contains(&t.id) && matches_type(red, t)).map(|t| t.id).collect();
    match all.first() {
        Some(&id) => Classification::Known { id, all },
        None => Classification::Untyped,
    }
}

/// Classification against the previously known Types 1–14.
pub fn classify(red: &ReducedSystem) -> Classification {
    classify_among(red, &(1..=14).collect::<Vec<_>>())
}

/// Classification against Types 1–15.
pub fn classify_extended(red: &ReducedSystem) -> Classification {
    classify_among(red, &(1..=15).collect::<Vec<_>>())
}

/// Adds relations learned elsewhere and classifies again.
pub fn augment_and_reclassify(red: &ReducedSystem, extra: &EquationSystem) -> Result<Classification, Simplified> {
    let mut sys = red.to_system();
    sys.angles.extend(extra.angles.iter().cloned());
    sys.sides.extend(extra.sides.iter().cloned());
    match simplify(&sys) {
        Simplified::Reduced(r) => Ok(classify(&r)),
        other => Err(other),
    }
}
