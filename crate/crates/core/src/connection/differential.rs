use std::collections::{BTreeMap, BTreeSet};

use crate::expr::{Atom, Coordinate, RatFn, ZetaAtom, ZetaVar};
use crate::jet::VectorField;
use crate::system::ReducedCNF;
use crate::vessiot::{reference_complement, symbol_fields};

use super::{ConnectionError, ConnectionFamily};

/// `H^p_{ij} = U_i(ζ_j^p) − U_j(ζ_i^p)`, solved for its leader `∂ζ_i^p/∂x^j`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiffEquation {
    pub i: usize,
    pub j: usize,
    /// Parametric pair `(β, h)` of the component.
    pub p: (usize, usize),
    pub leader: Atom,
    pub expression: RatFn,
    pub rhs: RatFn,
}

impl DiffEquation {
    /// Class of the equation: the index of the leader's derivative.
    pub fn class(&self) -> usize {
        self.j
    }
}

fn leader_atom(z: ZetaVar, j: usize) -> Atom {
    Atom::Zeta(ZetaAtom {
        var: z,
        partials: vec![Coordinate::Indep(j)],
    })
}

fn solve_for(h: &RatFn, l: &Atom) -> Option<RatFn> {
    let c = h.diff_atom(l);
    if c.is_zero() || !c.is_constant() {
        return None;
    }
    let rest = h.sub(&c.mul(&RatFn::atom(l.clone())));
    rest.div(&c).ok().map(|r| r.neg())
}

fn raw_fields(sys: &ReducedCNF, upto: usize) -> Vec<VectorField> {
    let xbar = reference_complement(sys);
    let ybar = symbol_fields(sys);
    let par = sys.parametric();
    (0..upto)
        .map(|i| {
            let mut u = xbar[i].clone();
            for (k, &(b, h)) in par.iter().enumerate() {
                u = u.add(&ybar[k].scale(&RatFn::atom(Atom::zeta(ZetaVar::new(i, b, h)))));
            }
            u
        })
        .collect()
}

/// The differential conditions with every `ζ_i^p` an independent unknown.
pub fn differential_conditions(sys: &ReducedCNF, family: &ConnectionFamily) -> Vec<DiffEquation> {
    let upto = family.determined_upto;
    let u = raw_fields(sys, upto);
    let mut out = Vec::new();
    for j in 0..upto {
        for i in 0..j {
            for &(b, h) in &sys.parametric() {
                let zi = ZetaVar::new(i, b, h);
                let zj = ZetaVar::new(j, b, h);
                let e = u[i]
                    .apply(&RatFn::atom(Atom::zeta(zj)))
                    .sub(&u[j].apply(&RatFn::atom(Atom::zeta(zi))));
                let leader = leader_atom(zi, j);
                let rhs = solve_for(&e, &leader).expect("leader enters with coefficient -1");
                out.push(DiffEquation {
                    i,
                    j,
                    p: (b, h),
                    leader,
                    expression: e,
                    rhs,
                });
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReducedDifferentialSystem {
    pub equations: Vec<DiffEquation>,
    /// `(i, j, p)` of equations whose leader is not a free unknown.
    pub dropped: Vec<(usize, usize, (usize, usize))>,
    /// Dropped equations that do not vanish after one substitution pass.
    pub new_conditions: Vec<RatFn>,
    /// Free unknowns in their gap-free numbering.
    pub numbering: Vec<ZetaVar>,
    pub leaders_unique: bool,
    /// Every equation has class at least two.
    pub classes_ok: bool,
}

/// Substitutes the family into the differential conditions, keeps the
/// equations led by free unknowns and checks the dropped ones once.
pub fn reduce_differential_conditions(sys: &ReducedCNF, family: &ConnectionFamily) -> Result<ReducedDifferentialSystem, ConnectionError> {
    let upto = family.determined_upto;
    let free: BTreeSet<ZetaVar> = family.free.iter().copied().collect();
    let mut kept = Vec::new();
    let mut dropped_eqs = Vec::new();
    let mut dropped = Vec::new();
    for j in 0..upto {
        for i in 0..j {
            for &(b, h) in &sys.parametric() {
                let zi = ZetaVar::new(i, b, h);
                let zj = ZetaVar::new(j, b, h);
                let e = family.fields[i]
                    .apply(&family.values[&zj])
                    .sub(&family.fields[j].apply(&family.values[&zi]));
                let is_free = free.contains(&zi) && family.values[&zi] == RatFn::atom(Atom::zeta(zi));
                let leader = leader_atom(zi, j);
                match (is_free, solve_for(&e, &leader)) {
                    (true, Some(rhs)) => kept.push(DiffEquation {
                        i,
                        j,
                        p: (b, h),
                        leader,
                        expression: e,
                        rhs,
                    }),
                    _ => {
                        dropped.push((i, j, (b, h)));
                        dropped_eqs.push(e);
                    }
                }
            }
        }
    }
    let subst: BTreeMap<Atom, RatFn> = kept.iter().map(|d| (d.leader.clone(), d.rhs.clone())).collect();
    let mut new_conditions = Vec::new();
    for e in dropped_eqs {
        let r = e.subst(&subst)?;
        if !r.is_zero() {
            new_conditions.push(r);
        }
    }
    let mut seen = BTreeSet::new();
    let leaders_unique = kept.iter().all(|d| seen.insert(d.leader.clone()));
    let classes_ok = kept.iter().all(|d| d.class() >= 1);
    let mut numbering = family.free.clone();
    numbering.sort();
    Ok(ReducedDifferentialSystem {
        equations: kept,
        dropped,
        new_conditions,
        numbering,
        leaders_unique,
        classes_ok,
    })
}
