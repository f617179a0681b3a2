//! First-order systems in reduced Cartan normal form, and implicit systems of
//! any order.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::expr::{ratfn_to_string, Atom, Coordinate, ExprError, RatFn};
use crate::jet::{contact_field, formal_derivative, Chart, JetVar, MultiIndex};

/// `u^α_k = φ^α_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equation {
    pub lhs: JetVar,
    pub rhs: RatFn,
}

impl Equation {
    pub fn alpha(&self) -> usize {
        self.lhs.alpha
    }

    /// Zero-based class `k` of the left side (`None` for order 0).
    pub fn class(&self) -> Option<usize> {
        self.lhs.class()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// The left side is not a first-order derivative.
    Algebraic { equation: usize, lhs: String },
    HigherOrder { equation: usize, lhs: String },
    DuplicatePrincipal { equation: usize, lhs: String },
    PrincipalOnRight { equation: usize, coordinate: String },
    /// Right side depends on a derivative of higher class than the left side.
    ClassViolation { equation: usize, coordinate: String },
    /// Right side depends on a jet of order above one.
    OrderOnRight { equation: usize, coordinate: String },
    FormalUnknown { equation: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Algebraic { equation, lhs } => write!(
                f,
                "equation {}: `{lhs}` is algebraic; solve algebraic equations and eliminate them first",
                equation + 1
            ),
            Violation::HigherOrder { equation, lhs } => write!(
                f,
                "equation {}: `{lhs}` is not first order; rewrite the system as a first-order system",
                equation + 1
            ),
            Violation::DuplicatePrincipal { equation, lhs } => {
                write!(f, "equation {}: `{lhs}` is solved for twice", equation + 1)
            }
            Violation::PrincipalOnRight { equation, coordinate } => write!(
                f,
                "equation {}: principal derivative `{coordinate}` on a right side",
                equation + 1
            ),
            Violation::ClassViolation { equation, coordinate } => write!(
                f,
                "equation {}: right side depends on `{coordinate}` of higher class than the left side",
                equation + 1
            ),
            Violation::OrderOnRight { equation, coordinate } => {
                write!(f, "equation {}: right side depends on `{coordinate}` of order above one", equation + 1)
            }
            Violation::FormalUnknown { equation } => {
                write!(f, "equation {}: right side contains formal unknowns", equation + 1)
            }
        }
    }
}

/// A first-order system `u^α_k = φ^α_k(x, u, parametric u^γ_j)` with each
/// equation solved for a derivative of maximal class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedCNF {
    pub chart: Chart,
    pub equations: Vec<Equation>,
    principal: BTreeMap<(usize, usize), usize>,
}

impl ReducedCNF {
    /// Builds the system without validating it; the chart is forced to order 1.
    pub fn new(chart: Chart, equations: Vec<Equation>) -> Self {
        let chart = chart.with_order(1);
        let mut principal = BTreeMap::new();
        for (t, e) in equations.iter().enumerate() {
            if e.lhs.order() == 1 {
                let k = e.class().expect("first order");
                principal.entry((e.alpha(), k)).or_insert(t);
            }
        }
        ReducedCNF {
            chart,
            equations,
            principal,
        }
    }

    /// Convenience constructor from `(α, k, φ)` triples.
    pub fn from_triples(chart: Chart, triples: Vec<(usize, usize, RatFn)>) -> Self {
        let n = chart.n();
        let eqs = triples
            .into_iter()
            .map(|(a, k, rhs)| Equation {
                lhs: JetVar::new(a, MultiIndex::unit(n, k)),
                rhs,
            })
            .collect();
        ReducedCNF::new(chart, eqs)
    }

    pub fn n(&self) -> usize {
        self.chart.n()
    }

    pub fn m(&self) -> usize {
        self.chart.m()
    }

    pub fn is_principal(&self, alpha: usize, k: usize) -> bool {
        self.principal.contains_key(&(alpha, k))
    }

    fn is_principal_coord(&self, c: &Coordinate) -> bool {
        match c {
            Coordinate::Jet(j) if j.order() == 1 => self.is_principal(j.alpha, j.class().unwrap()),
            _ => false,
        }
    }

    pub fn principal_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.principal.keys().copied()
    }

    /// `φ^α_k` for `(α,k) ∈ B`.
    pub fn phi(&self, alpha: usize, k: usize) -> Option<&RatFn> {
        self.principal.get(&(alpha, k)).map(|&t| &self.equations[t].rhs)
    }

    /// `φ^α_k` when principal, otherwise the coordinate `u^α_k` itself.
    pub fn phi_tilde(&self, alpha: usize, k: usize) -> RatFn {
        match self.phi(alpha, k) {
            Some(p) => p.clone(),
            None => RatFn::coord(self.chart.first(alpha, k)),
        }
    }

    /// `β_1^{(k)}`, the number of principal derivatives of class `k`.
    pub fn betas(&self) -> Vec<usize> {
        let mut b = vec![0; self.n()];
        for &(_, k) in self.principal.keys() {
            b[k] += 1;
        }
        b
    }

    /// Cartan characters `α_1^{(k)} = m − β_1^{(k)}`.
    pub fn alphas(&self) -> Vec<usize> {
        self.betas().into_iter().map(|b| self.m() - b).collect()
    }

    /// Parametric first-order pairs `(β, h)`, by increasing `h`, then `β`.
    pub fn parametric(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for h in 0..self.n() {
            for beta in 0..self.m() {
                if !self.is_principal(beta, h) {
                    out.push((beta, h));
                }
            }
        }
        out
    }

    /// `N(h)`: dependent indices whose class-`h` derivative is parametric.
    pub fn nonprincipal_in_class(&self, h: usize) -> Vec<usize> {
        (0..self.m()).filter(|&b| !self.is_principal(b, h)).collect()
    }

    /// `P(j)`: dependent indices whose class-`j` derivative is principal.
    pub fn principal_in_class(&self, j: usize) -> Vec<usize> {
        (0..self.m()).filter(|&b| self.is_principal(b, j)).collect()
    }

    pub fn validate(&self) -> Result<(), Vec<Violation>> {
        let mut out = Vec::new();
        let mut seen = BTreeSet::new();
        for (t, e) in self.equations.iter().enumerate() {
            let lhs = self.chart.jet_name(&e.lhs);
            match e.lhs.order() {
                0 => {
                    out.push(Violation::Algebraic { equation: t, lhs });
                    continue;
                }
                1 => {}
                _ => {
                    out.push(Violation::HigherOrder { equation: t, lhs });
                    continue;
                }
            }
            let k = e.class().unwrap();
            if !seen.insert((e.alpha(), k)) {
                out.push(Violation::DuplicatePrincipal { equation: t, lhs });
            }
            if e.rhs.has_zeta() {
                out.push(Violation::FormalUnknown { equation: t });
            }
            for a in e.rhs.atoms() {
                let Atom::Coord(c @ Coordinate::Jet(j)) = &a else { continue };
                let coordinate = self.chart.jet_name(j);
                if j.order() > 1 {
                    out.push(Violation::OrderOnRight { equation: t, coordinate });
                } else if self.is_principal_coord(c) {
                    out.push(Violation::PrincipalOnRight { equation: t, coordinate });
                } else if j.order() == 1 && j.class().unwrap() > k {
                    out.push(Violation::ClassViolation { equation: t, coordinate });
                }
            }
        }
        if out.is_empty() {
            Ok(())
        } else {
            Err(out)
        }
    }

    /// The substitution `u^α_k ↦ φ^α_k` over all principal pairs.
    pub fn restriction(&self) -> BTreeMap<Atom, RatFn> {
        self.principal
            .iter()
            .map(|(&(a, k), &t)| (Atom::Coord(self.chart.first(a, k)), self.equations[t].rhs.clone()))
            .collect()
    }

    /// Pull-back to `R_1`: replaces every principal derivative by its right side.
    pub fn restrict(&self, e: &RatFn) -> Result<RatFn, ExprError> {
        e.subst(&self.restriction())
    }

    /// Coordinates of the barred chart of `R_1`: `x`, `u`, parametric `u^γ_j`.
    pub fn barred_coordinates(&self) -> Vec<Coordinate> {
        let mut out: Vec<Coordinate> = (0..self.n()).map(Coordinate::Indep).collect();
        out.extend((0..self.m()).map(|a| self.chart.u(a)));
        out.extend(self.parametric().into_iter().map(|(b, h)| self.chart.first(b, h)));
        out
    }

    /// `C_i^{(1)}(f) = ∂f/∂x^i + Σ_α u^α_i ∂f/∂u^α`.
    pub fn c1(&self, i: usize, f: &RatFn) -> RatFn {
        contact_field(&self.chart, i, 1).apply(f)
    }

    /// `C^h_β(f) = ∂f/∂u^β_h`.
    pub fn ch(&self, h: usize, beta: usize, f: &RatFn) -> RatFn {
        f.diff(&self.chart.first(beta, h))
    }

    /// `Φ^α_k = u^α_k − φ^α_k` as an implicit system.
    pub fn to_implicit(&self) -> ImplicitSystem {
        let eqs = self
            .equations
            .iter()
            .map(|e| RatFn::coord(Coordinate::Jet(e.lhs.clone())).sub(&e.rhs))
            .collect();
        ImplicitSystem::new(self.chart.clone(), eqs)
    }

    pub fn display(&self) -> Vec<String> {
        self.equations
            .iter()
            .map(|e| format!("{} = {}", self.chart.jet_name(&e.lhs), ratfn_to_string(&e.rhs, &self.chart)))
            .collect()
    }
}

/// `Φ^τ(x, u^{(q)}) = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImplicitSystem {
    pub chart: Chart,
    pub equations: Vec<RatFn>,
}

/// An implicit system recognised as `leader = ψ` with distinct top-order
/// leaders that do not appear in any `ψ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolvedForm {
    pub leaders: Vec<JetVar>,
    pub bindings: BTreeMap<Atom, RatFn>,
}

impl ImplicitSystem {
    pub fn new(chart: Chart, equations: Vec<RatFn>) -> Self {
        ImplicitSystem { chart, equations }
    }

    pub fn order(&self) -> u32 {
        self.chart.order
    }

    /// Adds `D_iΦ^τ` for all `i` and `τ`, keeping the original equations.
    pub fn prolong(&self) -> ImplicitSystem {
        let mut eqs = self.equations.clone();
        for phi in &self.equations {
            for i in 0..self.chart.n() {
                let d = formal_derivative(phi, i);
                if !d.is_zero() {
                    eqs.push(d);
                }
            }
        }
        ImplicitSystem::new(self.chart.with_order(self.chart.order + 1), eqs)
    }

    /// Highest-ranked jet of top order occurring in `phi`.
    fn leader(&self, phi: &RatFn) -> Option<JetVar> {
        phi.atoms()
            .into_iter()
            .filter_map(|a| match a {
                Atom::Coord(Coordinate::Jet(j)) if j.order() == self.chart.order => Some(j),
                _ => None,
            })
            .max_by(|a, b| a.rank_cmp(b))
    }

    pub fn solved_form(&self) -> Option<SolvedForm> {
        let mut leaders = Vec::new();
        let mut bindings = BTreeMap::new();
        for phi in &self.equations {
            let l = self.leader(phi)?;
            let atom = Atom::Coord(Coordinate::Jet(l.clone()));
            let c = phi.diff_atom(&atom).constant_value()?;
            let psi = RatFn::atom(atom.clone()).sub(&phi.scale(&(c.recip())));
            if psi.contains(&atom) || bindings.contains_key(&atom) {
                return None;
            }
            leaders.push(l);
            bindings.insert(atom, psi);
        }
        if bindings.values().any(|psi| psi.atoms().iter().any(|a| bindings.contains_key(a))) {
            return None;
        }
        Some(SolvedForm { leaders, bindings })
    }

    pub fn display(&self) -> Vec<String> {
        self.equations.iter().map(|e| format!("{} = 0", ratfn_to_string(e, &self.chart))).collect()
    }
}
