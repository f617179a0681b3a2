//! Fraction-free and field elimination.

use super::matrix::Matrix;
use crate::scalar::{Domain, Field};

/// Result of an elimination: echelon matrix, pivot positions and the
/// sequence of pivot values.
#[derive(Clone, Debug)]
pub struct Echelon<T> {
    pub matrix: Matrix<T>,
    pub pivots: Vec<(usize, usize)>,
    pub trace: Vec<T>,
}

impl<T> Echelon<T> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        self.pivots.iter().map(|&(_, c)| c).collect()
    }
}

fn choose_pivot<T: Domain>(m: &Matrix<T>, from: usize, c: usize) -> Option<usize> {
    (from..m.rows())
        .filter(|&r| !m.get(r, c).is_zero())
        .min_by_key(|&r| (m.get(r, c).complexity(), r))
}

/// Bareiss elimination restricted to the first `limit` columns for pivot
/// search (the remaining columns are carried along).
pub fn bareiss_limited<T: Domain>(m: &Matrix<T>, limit: usize) -> Echelon<T> {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut trace = Vec::new();
    let mut prev = T::one();
    let mut r = 0;
    for c in 0..limit.min(a.cols()) {
        if r == a.rows() {
            break;
        }
        let Some(p) = choose_pivot(&a, r, c) else { continue };
        a.swap_rows(p, r);
        let piv = a.get(r, c).clone();
        for i in r + 1..a.rows() {
            let f = a.get(i, c).clone();
            for k in c + 1..a.cols() {
                let v = piv.mul(a.get(i, k)).sub(&f.mul(a.get(r, k))).exact_div(&prev);
                a.set(i, k, v);
            }
            a.set(i, c, T::zero());
        }
        pivots.push((r, c));
        trace.push(piv.clone());
        prev = piv;
        r += 1;
    }
    Echelon {
        matrix: a,
        pivots,
        trace,
    }
}

/// Fraction-free (Bareiss) row echelon form. Pivots are the lowest-complexity
/// nonzero entries of each column, scanned left to right.
pub fn bareiss<T: Domain>(m: &Matrix<T>) -> Echelon<T> {
    bareiss_limited(m, m.cols())
}

/// Reduced row echelon form over a field; pivots only in the first `limit`
/// columns.
pub fn rref_limited<F: Field>(m: &Matrix<F>, limit: usize) -> Echelon<F> {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut trace = Vec::new();
    let mut r = 0;
    for c in 0..limit.min(a.cols()) {
        if r == a.rows() {
            break;
        }
        let Some(p) = choose_pivot(&a, r, c) else { continue };
        a.swap_rows(p, r);
        let piv = a.get(r, c).clone();
        trace.push(piv.clone());
        for k in c..a.cols() {
            let v = a.get(r, k).div(&piv);
            a.set(r, k, v);
        }
        for i in 0..a.rows() {
            if i == r {
                continue;
            }
            let f = a.get(i, c).clone();
            if f.is_zero() {
                continue;
            }
            for k in c..a.cols() {
                let v = a.get(i, k).sub(&f.mul(a.get(r, k)));
                a.set(i, k, v);
            }
        }
        pivots.push((r, c));
        r += 1;
    }
    Echelon {
        matrix: a,
        pivots,
        trace,
    }
}

pub fn rref<F: Field>(m: &Matrix<F>) -> Echelon<F> {
    rref_limited(m, m.cols())
}

/// Rank over a field by plain elimination.
pub fn field_rank<F: Field>(m: &Matrix<F>) -> usize {
    rref(m).rank()
}
