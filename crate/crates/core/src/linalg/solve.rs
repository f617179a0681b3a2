use super::echelon::rref_limited;
use super::matrix::Matrix;
use crate::scalar::Field;

/// General solution `particular + Σ t_k · homogeneous[k]`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineSolution<F> {
    pub particular: Vec<F>,
    pub homogeneous: Vec<Vec<F>>,
    /// Unknowns left free, one per homogeneous vector.
    pub free: Vec<usize>,
    /// Unknowns solved for.
    pub determined: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SolveOutcome<F> {
    Solved(AffineSolution<F>),
    /// Echelon row `row` reads `0 = residual`.
    Inconsistent { row: usize, residual: F },
}

impl<F> SolveOutcome<F> {
    pub fn solution(&self) -> Option<&AffineSolution<F>> {
        match self {
            SolveOutcome::Solved(s) => Some(s),
            SolveOutcome::Inconsistent { .. } => None,
        }
    }
}

/// Solves `a · x = b` over the field `F`.
pub fn solve_affine<F: Field>(a: &Matrix<F>, b: &[F]) -> SolveOutcome<F> {
    assert_eq!(a.rows(), b.len());
    let n = a.cols();
    let rhs = Matrix::from_rows(b.iter().map(|v| vec![v.clone()]).collect(), 1);
    let aug = a.hstack(&rhs);
    let e = rref_limited(&aug, n);
    let rank = e.rank();
    for r in rank..aug.rows() {
        let v = e.matrix.get(r, n);
        if !v.is_zero() {
            return SolveOutcome::Inconsistent {
                row: r,
                residual: v.clone(),
            };
        }
    }
    let determined: Vec<usize> = e.pivot_columns();
    let free: Vec<usize> = (0..n).filter(|c| !determined.contains(c)).collect();
    let mut particular = vec![F::zero(); n];
    for &(r, c) in &e.pivots {
        particular[c] = e.matrix.get(r, n).clone();
    }
    let homogeneous = free
        .iter()
        .map(|&f| {
            let mut v = vec![F::zero(); n];
            v[f] = F::one();
            for &(r, c) in &e.pivots {
                v[c] = e.matrix.get(r, f).neg();
            }
            v
        })
        .collect();
    SolveOutcome::Solved(AffineSolution {
        particular,
        homogeneous,
        free,
        determined,
    })
}

/// Basis of the right null space.
pub fn nullspace<F: Field>(a: &Matrix<F>) -> Vec<Vec<F>> {
    let zeros = vec![F::zero(); a.rows()];
    match solve_affine(a, &zeros) {
        SolveOutcome::Solved(s) => s.homogeneous,
        SolveOutcome::Inconsistent { .. } => unreachable!("homogeneous systems are consistent"),
    }
}
