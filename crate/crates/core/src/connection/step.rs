use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::expr::{Atom, ExprError, RatFn, ZetaVar};
use crate::linalg::{rank_generic_seeded, rref_limited, Label, LinalgError, SymMatrix};
use crate::system::ReducedCNF;
use crate::vessiot::StructureCoefficients;

use super::ConnectionError;

/// Which ζ components are identified by the cross-derivative symmetry
/// `ζ_a^{(β,b)} = ζ_b^{(β,a)}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Contraction(pub bool);

impl Contraction {
    /// Representative of `ζ_i^{(β,h)}`: the member of its class with the
    /// lower subscript.
    pub fn rep(&self, sys: &ReducedCNF, z: ZetaVar) -> ZetaVar {
        if self.0 && z.i != z.h && !sys.is_principal(z.beta, z.i) && !sys.is_principal(z.beta, z.h) {
            ZetaVar::new(z.i.min(z.h), z.beta, z.i.max(z.h))
        } else {
            z
        }
    }
}

/// Unordered contraction label `u^β_{ih}` of `ζ_i^{(β,h)}`.
pub fn contraction_label(z: &ZetaVar) -> (usize, usize, usize) {
    (z.beta, z.i.min(z.h), z.i.max(z.h))
}

/// Column layout of step `j`: unknowns `ζ̂_j`, aliased components and the
/// parameters `ζ̂_1..ζ̂_{j−1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepLayout {
    pub j: usize,
    pub unknowns: Vec<ZetaVar>,
    pub aliases: BTreeMap<ZetaVar, ZetaVar>,
    pub params: Vec<ZetaVar>,
}

impl StepLayout {
    pub fn new(sys: &ReducedCNF, j: usize, c: Contraction) -> Self {
        let par = sys.parametric();
        let mut unknowns = Vec::new();
        let mut aliases = BTreeMap::new();
        for &(b, h) in &par {
            let z = ZetaVar::new(j, b, h);
            let r = c.rep(sys, z);
            if r == z {
                unknowns.push(z);
            } else {
                aliases.insert(z, r);
            }
        }
        let mut seen = BTreeSet::new();
        let mut params = Vec::new();
        let position = |z: &ZetaVar| par.iter().position(|&(b, h)| (b, h) == (z.beta, z.h)).unwrap();
        let mut cands: Vec<ZetaVar> = Vec::new();
        for i in 0..j {
            for &(b, h) in &par {
                cands.push(c.rep(sys, ZetaVar::new(i, b, h)));
            }
        }
        cands.extend(aliases.values().copied());
        cands.sort_by_key(|z| (z.i, position(z)));
        for z in cands {
            if seen.insert(z) {
                params.push(z);
            }
        }
        StepLayout {
            j,
            unknowns,
            aliases,
            params,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RankCondition {
    pub lhs_rank: usize,
    pub rhs_rank: usize,
    pub passes: bool,
    #[serde(skip)]
    pub caveats: Vec<RatFn>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OffendingKind {
    /// A relation among the earlier unknowns.
    ParameterConstraint,
    /// A row reading `0 = residual`.
    Residual,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OffendingRow {
    pub kind: OffendingKind,
    pub expression: RatFn,
    pub zetas: Vec<ZetaVar>,
}

impl OffendingRow {
    /// Contraction labels shared by at least two of the involved unknowns.
    pub fn shared_labels(&self) -> Vec<(usize, usize, usize)> {
        let mut count: BTreeMap<(usize, usize, usize), usize> = BTreeMap::new();
        for z in &self.zetas {
            *count.entry(contraction_label(z)).or_default() += 1;
        }
        count.into_iter().filter(|&(_, c)| c > 1).map(|(l, _)| l).collect()
    }
}

/// Affine expressions of the pivot unknowns of `ζ̂_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct StepSolution {
    pub determined: Vec<(ZetaVar, RatFn)>,
    pub free: Vec<ZetaVar>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StepResult {
    pub layout: StepLayout,
    /// `[U | P | T]` with rows `(i, α)`, `i < j`.
    pub matrix: SymMatrix,
    pub rank_condition: RankCondition,
    pub augmented: RankCondition,
    pub offending: Vec<OffendingRow>,
    pub solution: Option<StepSolution>,
}

impl StepResult {
    pub fn j(&self) -> usize {
        self.layout.j
    }

    pub fn passes(&self) -> bool {
        self.rank_condition.passes && self.augmented.passes
    }
}

fn zeta(z: &ZetaVar) -> RatFn {
    RatFn::atom(Atom::zeta(*z))
}

/// Assembles `U ζ̂_j + P ζ̂_{<j} + T = 0` from the rows `G^α_{ij}`, `i < j`.
pub fn step_matrix(sys: &ReducedCNF, sc: &StructureCoefficients, layout: &StepLayout, c: Contraction) -> SymMatrix {
    let j = layout.j;
    let nu = layout.unknowns.len();
    let np = layout.params.len();
    let ucol: BTreeMap<ZetaVar, usize> = layout.unknowns.iter().enumerate().map(|(k, z)| (*z, k)).collect();
    let pcol: BTreeMap<ZetaVar, usize> = layout.params.iter().enumerate().map(|(k, z)| (*z, nu + k)).collect();
    let par = sys.parametric();
    let mut m = SymMatrix::zeros(j * sys.m(), nu + np + 1);
    for i in 0..j {
        for a in 0..sys.m() {
            let r = i * sys.m() + a;
            for (k, &(b, h)) in par.iter().enumerate() {
                let zj = ZetaVar::new(j, b, h);
                let col = match ucol.get(&zj) {
                    Some(&c) => c,
                    None => pcol[&layout.aliases[&zj]],
                };
                let v = m.get(r, col).add(sc.xi[i].get(a, k));
                m.set(r, col, v);
                let zi = c.rep(sys, ZetaVar::new(i, b, h));
                let col = pcol[&zi];
                let v = m.get(r, col).sub(sc.xi[j].get(a, k));
                m.set(r, col, v);
            }
            m.set(r, nu + np, sc.theta[&(i, j)][a].clone());
        }
    }
    let rows = (0..j).flat_map(|i| (0..sys.m()).map(move |a| Label::Pair(i, a))).collect();
    let mut cols: Vec<Label> = layout.unknowns.iter().map(|z| Label::Zeta(*z)).collect();
    cols.extend(layout.params.iter().map(|z| Label::Zeta(*z)));
    cols.push(Label::Rhs);
    m.with_labels(rows, cols)
}

fn condition(a: &SymMatrix, b: &SymMatrix, seed: u64) -> Result<RankCondition, LinalgError> {
    let ra = rank_generic_seeded(a, seed)?;
    let rb = rank_generic_seeded(b, seed)?;
    let mut caveats = ra.caveats;
    caveats.extend(rb.caveats);
    Ok(RankCondition {
        lhs_rank: ra.rank,
        rhs_rank: rb.rank,
        passes: ra.rank == rb.rank,
        caveats,
    })
}

/// Rank conditions, offending rows and (when solvable) the solution of step `j`.
pub fn run_step(sys: &ReducedCNF, sc: &StructureCoefficients, j: usize, c: Contraction, seed: u64) -> Result<StepResult, ConnectionError> {
    let layout = StepLayout::new(sys, j, c);
    let matrix = step_matrix(sys, sc, &layout, c);
    let nu = layout.unknowns.len();
    let np = layout.params.len();
    let cols_u: Vec<usize> = (0..nu).collect();
    let cols_up: Vec<usize> = (0..nu + np).collect();
    let u = matrix.select_cols(&cols_u);
    let up = matrix.select_cols(&cols_up);
    let rank_condition = condition(&u, &up, seed)?;
    let augmented = condition(&u, &matrix, seed)?;

    let e = rref_limited(&matrix, nu);
    let rank_u = e.rank();
    let mut offending = Vec::new();
    if rank_u < matrix.rows() {
        let rest: Vec<Vec<RatFn>> = (rank_u..matrix.rows()).map(|r| e.matrix.row(r)[nu..].to_vec()).collect();
        let sub = SymMatrix::from_rows(rest, np + 1);
        let e2 = rref_limited(&sub, np);
        for r in 0..sub.rows() {
            let row = e2.matrix.row(r);
            let mut expr = row[np].clone();
            let mut zetas = Vec::new();
            for (k, v) in row[..np].iter().enumerate() {
                if !v.is_zero() {
                    expr = expr.add(&v.mul(&zeta(&layout.params[k])));
                    zetas.push(layout.params[k]);
                }
            }
            if expr.is_zero() {
                continue;
            }
            let kind = if zetas.is_empty() {
                OffendingKind::Residual
            } else {
                OffendingKind::ParameterConstraint
            };
            offending.push(OffendingRow { kind, expression: expr, zetas });
        }
    }

    let solution = if rank_condition.passes && augmented.passes {
        let pivots: BTreeSet<usize> = e.pivot_columns().into_iter().collect();
        let free: Vec<ZetaVar> = (0..nu).filter(|c| !pivots.contains(c)).map(|c| layout.unknowns[c]).collect();
        let mut determined = Vec::new();
        for &(r, c) in &e.pivots {
            let row = e.matrix.row(r);
            let mut v = row[nu + np].clone();
            for (k, x) in row.iter().enumerate().take(nu + np) {
                if k == c || x.is_zero() {
                    continue;
                }
                let z = if k < nu { layout.unknowns[k] } else { layout.params[k - nu] };
                v = v.add(&x.mul(&zeta(&z)));
            }
            determined.push((layout.unknowns[c], v.neg()));
        }
        Some(StepSolution { determined, free })
    } else {
        None
    };

    Ok(StepResult {
        layout,
        matrix,
        rank_condition,
        augmented,
        offending,
        solution,
    })
}

/// Substitutes a map of ζ values into an expression.
pub fn subst_zetas(e: &RatFn, values: &BTreeMap<ZetaVar, RatFn>) -> Result<RatFn, ExprError> {
    let b: BTreeMap<Atom, RatFn> = values.iter().map(|(z, v)| (Atom::zeta(*z), v.clone())).collect();
    e.subst(&b)
}
