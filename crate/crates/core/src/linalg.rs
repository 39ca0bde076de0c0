//! Gauss–Jordan elimination generic over the scalar field.
//!
//! The same kernel runs over exact rationals (equation systems) and over
//! `f32`/`f64` (numeric nullspaces in the realizability stage).

use std::fmt::Debug;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Num, Signed, Zero};

/// A field usable by the elimination kernel.
pub trait Field: Num + Clone + Debug + std::ops::Neg<Output = Self> {
    /// Whether arithmetic is exact; exact fields pick the first nonzero pivot
    /// (deterministic, small entries), inexact ones use partial pivoting.
    const EXACT: bool;

    /// Zero test: exact for rationals, tolerance based for floats.
    fn negligible(&self, tol: f64) -> bool;

    /// Magnitude used for pivot selection in inexact fields.
    fn magnitude(&self) -> f64;
}

impl<T> Field for Ratio<T>
where
    T: Clone + Integer + Signed + Debug + num_traits::ToPrimitive,
{
    const EXACT: bool = true;

    fn negligible(&self, _tol: f64) -> bool {
        self.is_zero()
    }

    fn magnitude(&self) -> f64 {
        let n = self.numer().to_f64().unwrap_or(f64::MAX);
        let d = self.denom().to_f64().unwrap_or(1.0);
        (n / d).abs()
    }
}

macro_rules! float_field {
    ($($t:ty),*) => {$(
        impl Field for $t {
            const EXACT: bool = false;

            fn negligible(&self, tol: f64) -> bool {
                (*self as f64).abs() <= tol
            }

            fn magnitude(&self) -> f64 {
                (*self as f64).abs()
            }
        }
    )*};
}

float_field!(f32, f64);

/// Dense row-major matrix.
pub type Matrix<F> = Vec<Vec<F>>;

/// Reduces `m` in place to reduced row echelon form, scanning columns in
/// `order` (use `0..ncols` for the natural order). Zero rows are removed.
/// Returns the pivot column of each remaining row.
pub fn rref_ordered<F: Field>(m: &mut Matrix<F>, order: &[usize], tol: f64) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for &col in order {
        if row >= m.len() {
            break;
        }
        let pick = if F::EXACT {
            (row..m.len()).find(|&r| !m[r][col].negligible(tol))
        } else {
            (row..m.len())
                .filter(|&r| !m[r][col].negligible(tol))
                .max_by(|&a, &b| {
                    m[a][col]
                        .magnitude()
                        .partial_cmp(&m[b][col].magnitude())
                        .unwrap_or(std::cmp::Ordering::Equal)
                })
        };
        let Some(p) = pick else { continue };
        m.swap(row, p);
        let inv = F::one() / m[row][col].clone();
        for x in m[row].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for r in 0..m.len() {
            if r == row || m[r][col].negligible(tol) {
                continue;
            }
            let f = m[r][col].clone();
            for c in 0..m[r].len() {
                let delta = f.clone() * m[row][c].clone();
                m[r][c] = m[r][c].clone() - delta;
            }
            if !F::EXACT {
                m[r][col] = F::zero();
            }
        }
        pivots.push(col);
        row += 1;
    }
    m.truncate(row);
    for r in m.iter_mut() {
        for x in r.iter_mut() {
            if x.negligible(tol) {
                *x = F::zero();
            }
        }
    }
    pivots
}

/// Reduced row echelon form in natural column order.
pub fn rref<F: Field>(m: &mut Matrix<F>, tol: f64) -> Vec<usize> {
    let ncols = m.first().map_or(0, |r| r.len());
    let order: Vec<usize> = (0..ncols).collect();
    rref_ordered(m, &order, tol)
}

/// Rank of a matrix (does not modify the input).
pub fn rank<F: Field>(m: &Matrix<F>, tol: f64) -> usize {
    let mut c = m.clone();
    rref(&mut c, tol).len()
}

/// Basis of the right nullspace `{x : m x = 0}` as column vectors.
pub fn nullspace<F: Field>(m: &Matrix<F>, ncols: usize, tol: f64) -> Vec<Vec<F>> {
    let mut r = m.clone();
    let pivots = rref(&mut r, tol);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![F::zero(); ncols];
            v[f] = F::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -r[row][f].clone();
            }
            v
        })
        .collect()
}

/// Whether `v` lies in the row space spanned by an RREF matrix with the
/// given pivot columns.
pub fn in_row_space<F: Field>(rref_rows: &Matrix<F>, pivots: &[usize], v: &[F], tol: f64) -> bool {
    let mut rest = v.to_vec();
    for (row, &p) in rref_rows.iter().zip(pivots) {
        if rest[p].negligible(tol) {
            continue;
        }
        let f = rest[p].clone();
        for (x, y) in rest.iter_mut().zip(row) {
            *x = x.clone() - f.clone() * y.clone();
        }
    }
    rest.iter().all(|x| x.negligible(tol))
}

#[cfg(test)]
mod tests {
    use super::*;

    type Q = Ratio<i64>;

    fn q(n: i64) -> Q {
        Q::from_integer(n)
    }

    #[test]
    fn rref_exact() {
        let mut m = vec![vec![q(2), q(4), q(2)], vec![q(1), q(3), q(2)], vec![q(3), q(7), q(4)]];
        let p = rref(&mut m, 0.0);
        assert_eq!(p, vec![0, 1]);
        assert_eq!(m, vec![vec![q(1), q(0), q(-1)], vec![q(0), q(1), q(1)]]);
    }

    #[test]
    fn nullspace_float_matches_exact() {
        let mq = vec![vec![q(1), q(1), q(0)], vec![q(0), q(1), q(1)]];
        let mf: Matrix<f64> = vec![vec![1.0, 1.0, 0.0], vec![0.0, 1.0, 1.0]];
        let nq = nullspace(&mq, 3, 0.0);
        let nf = nullspace(&mf, 3, 1e-12);
        assert_eq!(nq, vec![vec![q(1), q(-1), q(1)]]);
        assert_eq!(nf, vec![vec![1.0, -1.0, 1.0]]);
    }

    #[test]
    fn row_space_membership() {
        let mut m = vec![vec![q(1), q(1), q(0)], vec![q(0), q(1), q(1)]];
        let p = rref(&mut m, 0.0);
        assert!(in_row_space(&m, &p, &[q(1), q(2), q(1)], 0.0));
        assert!(!in_row_space(&m, &p, &[q(1), q(0), q(0)], 0.0));
    }

    #[test]
    fn f32_instantiation() {
        let mut m: Matrix<f32> = vec![vec![2.0, 1.0], vec![4.0, 2.0]];
        assert_eq!(rref(&mut m, 1e-6).len(), 1);
    }
}
