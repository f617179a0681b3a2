use std::fmt;

use serde::{Deserialize, Serialize};

use crate::expr::{ratfn_to_string, Names, RatFn, ZetaVar};
use crate::jet::JetVar;
use crate::scalar::{Domain, Rational};

/// Row or column tag of a labelled matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    Index(usize),
    Jet(JetVar),
    /// Row `α` of block `i` (complete matrices) or equation `τ` prolonged by `x^i`.
    Pair(usize, usize),
    Zeta(ZetaVar),
    /// The inhomogeneous column of an augmented matrix.
    Rhs,
    Text(String),
}

/// Dense matrix with row and column labels.
#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
    pub row_labels: Vec<Label>,
    pub col_labels: Vec<Label>,
}

pub type SymMatrix = Matrix<RatFn>;
pub type QMatrix = Matrix<Rational>;

impl<T: Domain> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
            row_labels: (0..rows).map(Label::Index).collect(),
            col_labels: (0..cols).map(Label::Index).collect(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, T::one());
        }
        m
    }

    /// Builds from rows; all rows must have length `cols`.
    pub fn from_rows(rows: Vec<Vec<T>>, cols: usize) -> Self {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix");
            data.extend(row);
        }
        Matrix {
            rows: r,
            cols,
            data,
            row_labels: (0..r).map(Label::Index).collect(),
            col_labels: (0..cols).map(Label::Index).collect(),
        }
    }

    pub fn with_labels(mut self, rows: Vec<Label>, cols: Vec<Label>) -> Self {
        assert_eq!(rows.len(), self.rows);
        assert_eq!(cols.len(), self.cols);
        self.row_labels = rows;
        self.col_labels = cols;
        self
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: T) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn column(&self, c: usize) -> Vec<T> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Domain::is_zero)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
        self.row_labels.swap(a, b);
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t.row_labels = self.col_labels.clone();
        t.col_labels = self.row_labels.clone();
        t
    }

    pub fn map<U: Domain>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
            row_labels: self.row_labels.clone(),
            col_labels: self.col_labels.clone(),
        }
    }

    pub fn try_map<U: Domain, E>(&self, f: impl Fn(&T) -> Result<U, E>) -> Result<Matrix<U>, E> {
        let data = self.data.iter().map(f).collect::<Result<Vec<U>, E>>()?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
            row_labels: self.row_labels.clone(),
            col_labels: self.col_labels.clone(),
        })
    }

    /// Columns of `self` followed by those of `other`.
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        let cols = self.cols + other.cols;
        let rows = (0..self.rows)
            .map(|r| {
                let mut v = self.row(r).to_vec();
                v.extend_from_slice(other.row(r));
                v
            })
            .collect();
        let mut m = Self::from_rows(rows, cols);
        m.row_labels = self.row_labels.clone();
        m.col_labels = self.col_labels.iter().chain(&other.col_labels).cloned().collect();
        m
    }

    /// Rows of `self` followed by those of `other`.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut m = self.clone();
        m.rows += other.rows;
        m.data.extend(other.data.iter().cloned());
        m.row_labels.extend(other.row_labels.iter().cloned());
        m
    }

    pub fn select_cols(&self, cols: &[usize]) -> Self {
        let rows = (0..self.rows)
            .map(|r| cols.iter().map(|&c| self.get(r, c).clone()).collect())
            .collect();
        let mut m = Self::from_rows(rows, cols.len());
        m.row_labels = self.row_labels.clone();
        m.col_labels = cols.iter().map(|&c| self.col_labels[c].clone()).collect();
        m
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(T::zero(), |acc, (a, x)| acc.add(&a.mul(x)))
            })
            .collect()
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} cols={:?}", self.rows, self.cols, self.col_labels)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[r * self.cols..(r + 1) * self.cols])?;
        }
        Ok(())
    }
}

impl SymMatrix {
    /// Entries as strings, row by row.
    pub fn render(&self, names: &dyn Names) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|r| self.row(r).iter().map(|e| ratfn_to_string(e, names)).collect())
            .collect()
    }
}
