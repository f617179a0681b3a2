//! Exact symbolic expressions over a coordinate chart.

mod atom;
mod parse;
mod poly;
mod print;
mod ratfn;
mod tree;

use thiserror::Error;

pub use atom::{Atom, Coordinate, ZetaAtom, ZetaVar};
pub use parse::{parse_expr, ParseError};
pub use poly::{Monomial, Poly};
pub use print::{expr_to_string, poly_to_string, ratfn_to_string, Names, PlainNames};
pub use ratfn::RatFn;
pub use tree::{diff, eval_at, normalize, substitute, Expr};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("division by an expression that is identically zero or vanishes")]
    DivisionByZero,
    #[error("unbound atom {0}")]
    Unbound(String),
    #[error("coordinate {0} appears in its own replacement")]
    SelfReferential(String),
}
