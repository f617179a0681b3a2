use serde::{Deserialize, Serialize};

use crate::jet::{JetVar, MultiIndex};

/// A chart coordinate: an independent variable `x^i` or a jet coordinate
/// `u^α_μ`. Dependent variables are jet coordinates with `μ = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Coordinate {
    Indep(usize),
    Jet(JetVar),
}

impl Coordinate {
    pub fn dep(alpha: usize, n: usize) -> Self {
        Coordinate::Jet(JetVar::new(alpha, MultiIndex::zero(n)))
    }

    pub fn jet(alpha: usize, mu: MultiIndex) -> Self {
        Coordinate::Jet(JetVar::new(alpha, mu))
    }

    /// First-order jet `u^α_{1_i}`.
    pub fn first(alpha: usize, i: usize, n: usize) -> Self {
        Coordinate::Jet(JetVar::new(alpha, MultiIndex::unit(n, i)))
    }

    pub fn as_jet(&self) -> Option<&JetVar> {
        match self {
            Coordinate::Jet(j) => Some(j),
            Coordinate::Indep(_) => None,
        }
    }

    /// Jet order; independent variables count as order 0.
    pub fn order(&self) -> u32 {
        match self {
            Coordinate::Indep(_) => 0,
            Coordinate::Jet(j) => j.order(),
        }
    }
}

/// Component `ζ_i^{(β,h)}` of the unknown coefficient vector `ζ_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ZetaVar {
    pub i: usize,
    pub beta: usize,
    pub h: usize,
}

impl ZetaVar {
    pub fn new(i: usize, beta: usize, h: usize) -> Self {
        ZetaVar { i, beta, h }
    }
}

/// A formal unknown together with the (sorted) coordinates it has been
/// differentiated by.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ZetaAtom {
    pub var: ZetaVar,
    pub partials: Vec<Coordinate>,
}

/// Indeterminates of the polynomial ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Atom {
    Coord(Coordinate),
    /// Symbolic constant such as the `α` in `u_xx = α u`.
    Param(String),
    Zeta(ZetaAtom),
}

impl Atom {
    pub fn zeta(var: ZetaVar) -> Self {
        Atom::Zeta(ZetaAtom {
            var,
            partials: Vec::new(),
        })
    }

    pub fn is_zeta(&self) -> bool {
        matches!(self, Atom::Zeta(_))
    }

    /// Derivative of the atom with respect to a coordinate, as an atom
    /// (`None` means the derivative is 0, `Some(None)` means it is 1).
    pub(crate) fn derivative(&self, c: &Coordinate) -> Option<Option<Atom>> {
        match self {
            Atom::Coord(x) if x == c => Some(None),
            Atom::Coord(_) | Atom::Param(_) => None,
            Atom::Zeta(z) => {
                let mut partials = z.partials.clone();
                let pos = partials.binary_search(c).unwrap_or_else(|p| p);
                partials.insert(pos, c.clone());
                Some(Some(Atom::Zeta(ZetaAtom {
                    var: z.var,
                    partials,
                })))
            }
        }
    }
}

impl From<Coordinate> for Atom {
    fn from(c: Coordinate) -> Self {
        Atom::Coord(c)
    }
}
