//! Closed-form obstructions to involution for first-order systems in reduced
//! Cartan normal form.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::expr::{Coordinate, ExprError, RatFn};
use crate::jet::{formal_derivative, MultiIndex};
use crate::system::ReducedCNF;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum InvolutionError {
    #[error("({0}, {1}) is not a principal pair")]
    NotPrincipal(usize, usize),
    #[error(transparent)]
    Expr(#[from] ExprError),
}

/// Second-order label `u^δ_{hk}` with `h ≤ k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SecondOrder {
    pub delta: usize,
    pub h: usize,
    pub k: usize,
}

impl SecondOrder {
    pub fn new(delta: usize, a: usize, b: usize) -> Self {
        SecondOrder {
            delta,
            h: a.min(b),
            k: a.max(b),
        }
    }

    pub fn coordinate(&self, n: usize) -> Coordinate {
        Coordinate::jet(self.delta, MultiIndex::unit(n, self.h).plus(self.k))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Line {
    Hh,
    HkA,
    HkB,
    HiA,
    HiB,
    Hk2,
    Ik,
    Hj,
    Ij,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Bracket {
    pub coefficient: RatFn,
    pub lines: Vec<Line>,
    /// Whether `u^δ_{hk}` is itself reachable by a multiplicative prolongation.
    pub principal: bool,
}

/// Obstructions for one triple `(α, i, j)`, `(α,i) ∈ B`, `i < j`.
#[derive(Clone, Debug, PartialEq)]
pub struct Obstruction {
    pub alpha: usize,
    pub i: usize,
    pub j: usize,
    pub integrability: RatFn,
    pub brackets: BTreeMap<SecondOrder, Bracket>,
}

impl Obstruction {
    pub fn nonzero_brackets(&self) -> impl Iterator<Item = (&SecondOrder, &Bracket)> {
        self.brackets.iter().filter(|(_, b)| !b.coefficient.is_zero())
    }

    /// `integrability − Σ u^δ_{hk} · bracket`.
    pub fn assembled(&self, n: usize) -> RatFn {
        let mut out = self.integrability.clone();
        for (l, b) in &self.brackets {
            out = out.sub(&RatFn::coord(l.coordinate(n)).mul(&b.coefficient));
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ObstructionReport {
    pub triples: Vec<Obstruction>,
    pub symbol_involutive: bool,
    pub equation_involutive: bool,
}

/// `D_jΦ^α_i` restricted to `R_1` in its first-order variables.
pub fn prolongation_residue(sys: &ReducedCNF, alpha: usize, i: usize, j: usize) -> Result<RatFn, InvolutionError> {
    let phi = sys.phi(alpha, i).ok_or(InvolutionError::NotPrincipal(alpha, i))?;
    let big_phi = RatFn::coord(sys.chart.first(alpha, i)).sub(phi);
    Ok(sys.restrict(&formal_derivative(&big_phi, j))?)
}

struct Ctx<'a> {
    sys: &'a ReducedCNF,
    alpha: usize,
    i: usize,
    j: usize,
    brackets: BTreeMap<SecondOrder, Bracket>,
}

impl Ctx<'_> {
    /// `N(h) ∩ P(j)`.
    fn np(&self, h: usize, j: usize) -> Vec<usize> {
        (0..self.sys.m())
            .filter(|&g| !self.sys.is_principal(g, h) && self.sys.is_principal(g, j))
            .collect()
    }

    fn n_of(&self, h: usize) -> Vec<usize> {
        self.sys.nonprincipal_in_class(h)
    }

    /// `C^h_γ(φ^β_l)` using `φ̃`.
    fn c(&self, h: usize, gamma: usize, beta: usize, l: usize) -> RatFn {
        self.sys.ch(h, gamma, &self.sys.phi_tilde(beta, l))
    }

    /// `Σ_{γ ∈ N(a) ∩ P(j)} C^a_γ(φ^α_i) C^b_δ(φ^γ_j)`.
    fn chain(&self, a: usize, b: usize, delta: usize) -> RatFn {
        let mut s = RatFn::zero();
        for g in self.np(a, self.j) {
            let f = self.c(a, g, self.alpha, self.i);
            if !f.is_zero() {
                s = s.add(&f.mul(&self.c(b, delta, g, self.j)));
            }
        }
        s
    }

    fn push(&mut self, line: Line, delta: usize, a: usize, b: usize, coefficient: RatFn) {
        let label = SecondOrder::new(delta, a, b);
        let principal = self.sys.is_principal(delta, label.k);
        let e = self.brackets.entry(label).or_insert(Bracket {
            coefficient: RatFn::zero(),
            lines: Vec::new(),
            principal,
        });
        e.coefficient = e.coefficient.add(&coefficient);
        if !e.lines.contains(&line) {
            e.lines.push(line);
        }
    }
}

fn triple(sys: &ReducedCNF, alpha: usize, i: usize, j: usize) -> Result<Obstruction, InvolutionError> {
    let phi_i = sys.phi(alpha, i).ok_or(InvolutionError::NotPrincipal(alpha, i))?.clone();
    let phi_j = sys.phi_tilde(alpha, j);
    let mut cx = Ctx {
        sys,
        alpha,
        i,
        j,
        brackets: BTreeMap::new(),
    };

    let mut integ = sys.c1(i, &phi_j).sub(&sys.c1(j, &phi_i));
    for h in 0..=i {
        for g in cx.np(h, j) {
            let f = cx.c(h, g, alpha, i);
            if !f.is_zero() {
                integ = integ.sub(&f.mul(&sys.c1(h, &sys.phi_tilde(g, j))));
            }
        }
    }
    let integrability = sys.restrict(&integ)?;

    for h in 0..i {
        for d in cx.n_of(h) {
            let v = cx.chain(h, h, d);
            cx.push(Line::Hh, d, h, h, v);
        }
    }
    for h in 0..i {
        for k in h + 1..i {
            for d in cx.np(h, k) {
                let v = cx.chain(k, h, d);
                cx.push(Line::HkA, d, h, k, v);
            }
            for d in cx.n_of(k) {
                let v = cx.chain(h, k, d).add(&cx.chain(k, h, d));
                cx.push(Line::HkB, d, h, k, v);
            }
        }
    }
    for h in 0..i {
        for d in cx.np(h, i) {
            let v = cx.c(h, d, alpha, j).neg().add(&cx.chain(i, h, d));
            cx.push(Line::HiA, d, h, i, v);
        }
        for d in cx.n_of(i) {
            let v = cx.c(h, d, alpha, j).neg().add(&cx.chain(i, h, d)).add(&cx.chain(h, i, d));
            cx.push(Line::HiB, d, h, i, v);
        }
    }
    for h in 0..i {
        for k in i + 1..j {
            for d in cx.n_of(k) {
                let v = cx.chain(h, k, d);
                cx.push(Line::Hk2, d, h, k, v);
            }
        }
    }
    for k in i..j {
        for d in cx.n_of(k) {
            let v = cx.c(k, d, alpha, j).neg().add(&cx.chain(i, k, d));
            cx.push(Line::Ik, d, i, k, v);
        }
    }
    for h in 0..i {
        for d in cx.n_of(j) {
            let v = cx.c(h, d, alpha, i).add(&cx.chain(h, j, d));
            cx.push(Line::Hj, d, h, j, v);
        }
    }
    for d in cx.n_of(j) {
        let v = cx.c(i, d, alpha, i).sub(&cx.c(j, d, alpha, j)).add(&cx.chain(i, j, d));
        cx.push(Line::Ij, d, i, j, v);
    }

    let mut brackets = cx.brackets;
    for b in brackets.values_mut() {
        b.coefficient = sys.restrict(&b.coefficient)?;
    }
    Ok(Obstruction {
        alpha,
        i,
        j,
        integrability,
        brackets,
    })
}

/// All obstructions for `(α,i) ∈ B`, `i < j`, with the verdicts: the symbol
/// is involutive iff every bracket vanishes on `R_1`, the equation iff in
/// addition every integrability residue vanishes.
pub fn monster(sys: &ReducedCNF) -> Result<ObstructionReport, InvolutionError> {
    let mut triples = Vec::new();
    for (alpha, i) in sys.principal_pairs().collect::<Vec<_>>() {
        for j in i + 1..sys.n() {
            triples.push(triple(sys, alpha, i, j)?);
        }
    }
    triples.sort_by_key(|t| (t.i, t.j, t.alpha));
    let symbol_involutive = triples.iter().all(|t| t.nonzero_brackets().next().is_none());
    let equation_involutive = symbol_involutive && triples.iter().all(|t| t.integrability.is_zero());
    Ok(ObstructionReport {
        triples,
        symbol_involutive,
        equation_involutive,
    })
}

/// `D_jΦ^α_i − D_iΦ^α_j + Σ_{h≤i} Σ_{γ ∈ N(h)∩P(j)} C^h_γ(φ^α_i) D_hΦ^γ_j`,
/// restricted to `R_1` in first-order variables, with `Φ^α_j = 0` when
/// `(α,j) ∉ B`.
pub fn brute_force_combination(sys: &ReducedCNF, alpha: usize, i: usize, j: usize) -> Result<RatFn, InvolutionError> {
    let big = |b: usize, l: usize| RatFn::coord(sys.chart.first(b, l)).sub(&sys.phi_tilde(b, l));
    let phi_i = sys.phi(alpha, i).ok_or(InvolutionError::NotPrincipal(alpha, i))?;
    let mut out = formal_derivative(&big(alpha, i), j).sub(&formal_derivative(&big(alpha, j), i));
    for h in 0..=i {
        for g in 0..sys.m() {
            if sys.is_principal(g, h) || !sys.is_principal(g, j) {
                continue;
            }
            let f = sys.ch(h, g, phi_i);
            if !f.is_zero() {
                out = out.add(&f.mul(&formal_derivative(&big(g, j), h)));
            }
        }
    }
    Ok(sys.restrict(&out)?)
}
