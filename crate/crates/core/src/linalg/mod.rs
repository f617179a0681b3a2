//! Exact labelled matrices: elimination, generic rank, affine solving.

mod echelon;
mod matrix;
mod rank;
mod solve;

use thiserror::Error;

pub use echelon::{bareiss, bareiss_limited, field_rank, rref, rref_limited, Echelon};
pub use matrix::{Label, Matrix, QMatrix, SymMatrix};
pub use rank::{rank_generic, rank_generic_seeded, to_polynomial_rows, RankResult, DEFAULT_SEED};
pub use solve::{nullspace, solve_affine, AffineSolution, SolveOutcome};

/// Row echelon form of a symbolic matrix by fraction-free elimination.
pub fn row_echelon(m: &SymMatrix) -> Echelon<crate::expr::Poly> {
    bareiss(&to_polynomial_rows(m))
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("symbolic rank {symbolic} contradicts rank {at_point} at a random point")]
    RankGuard { symbolic: usize, at_point: usize },
    #[error("no evaluation point avoiding all pivot zeros was found")]
    NoGoodPoint,
}
