//! Step-by-step construction of integral distributions
//! `U_i = X̄_i + ζ_i^k Ȳ_k` inside the Vessiot distribution.

mod differential;
mod step;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::expr::{Atom, ExprError, RatFn, ZetaVar};
use crate::jet::VectorField;
use crate::linalg::{LinalgError, DEFAULT_SEED};
use crate::system::ReducedCNF;
use crate::vessiot::{reference_complement, symbol_fields, StructureCoefficients};

pub use differential::{differential_conditions, reduce_differential_conditions, DiffEquation, ReducedDifferentialSystem};
pub use step::{
    contraction_label, run_step, step_matrix, subst_zetas, Contraction, OffendingKind, OffendingRow, RankCondition,
    StepLayout, StepResult, StepSolution,
};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ConnectionError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Expr(#[from] ExprError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Options {
    pub contract: bool,
    /// Last step to run (zero-based `j`); all steps when `None`.
    pub last_step: Option<usize>,
    pub seed: u64,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            contract: true,
            last_step: None,
            seed: DEFAULT_SEED,
        }
    }
}

/// Every `ζ_i^k` as an affine expression in the free unknowns.
#[derive(Clone, Debug, PartialEq)]
pub struct ConnectionFamily {
    pub free: Vec<ZetaVar>,
    pub values: BTreeMap<ZetaVar, RatFn>,
    pub fields: Vec<VectorField>,
    pub steps: Vec<StepResult>,
    /// Number of `ζ_i` vectors determined (all `n` unless stopped early).
    pub determined_upto: usize,
    /// `G^α_{ij} ≡ 0` after substitution.
    pub algebraic_conditions_vanish: bool,
    /// The closed-form relations for `(α,i) ∉ B`, `(α,j) ∈ B` agree.
    pub closed_form_relations_hold: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub enum FamilyOutcome {
    Built(ConnectionFamily),
    Failed { steps: Vec<StepResult> },
}

impl FamilyOutcome {
    pub fn steps(&self) -> &[StepResult] {
        match self {
            FamilyOutcome::Built(f) => &f.steps,
            FamilyOutcome::Failed { steps } => steps,
        }
    }

    pub fn family(&self) -> Option<&ConnectionFamily> {
        match self {
            FamilyOutcome::Built(f) => Some(f),
            FamilyOutcome::Failed { .. } => None,
        }
    }
}

fn zeta(z: ZetaVar) -> RatFn {
    RatFn::atom(Atom::zeta(z))
}

/// Rank conditions of every step, each evaluated independently of the others.
pub fn all_steps(sys: &ReducedCNF, opts: &Options) -> Result<Vec<StepResult>, ConnectionError> {
    let sc = StructureCoefficients::new(sys)?;
    (1..sys.n())
        .map(|j| run_step(sys, &sc, j, Contraction(opts.contract), opts.seed))
        .collect()
}

/// `G^α_{ij} = Θ^α_{ij} − Ξ^α_{jk} ζ_i^k + Ξ^α_{ik} ζ_j^k`.
pub fn algebraic_condition(sc: &StructureCoefficients, values: &BTreeMap<ZetaVar, RatFn>, alpha: usize, i: usize, j: usize) -> RatFn {
    let mut g = sc.theta[&(i, j)][alpha].clone();
    for (k, &(b, h)) in sc.columns.iter().enumerate() {
        let zi = values.get(&ZetaVar::new(i, b, h)).cloned().unwrap_or_else(|| zeta(ZetaVar::new(i, b, h)));
        let zj = values.get(&ZetaVar::new(j, b, h)).cloned().unwrap_or_else(|| zeta(ZetaVar::new(j, b, h)));
        g = g.sub(&sc.xi[j].get(alpha, k).mul(&zi)).add(&sc.xi[i].get(alpha, k).mul(&zj));
    }
    g
}

/// Runs steps `j = 2..n` in order, substituting earlier results, and
/// assembles the family of candidate fields.
pub fn build_family(sys: &ReducedCNF, opts: &Options) -> Result<FamilyOutcome, ConnectionError> {
    let sc = StructureCoefficients::new(sys)?;
    let c = Contraction(opts.contract);
    let par = sys.parametric();
    let mut values: BTreeMap<ZetaVar, RatFn> = BTreeMap::new();
    let mut free = Vec::new();
    if sys.n() > 0 {
        for &(b, h) in &par {
            let z = ZetaVar::new(0, b, h);
            values.insert(z, zeta(z));
            free.push(z);
        }
    }
    let last = opts.last_step.unwrap_or(usize::MAX).min(sys.n().saturating_sub(1));
    let mut steps = Vec::new();
    for j in 1..=last {
        let st = run_step(sys, &sc, j, c, opts.seed)?;
        let Some(sol) = st.solution.clone() else {
            steps.push(st);
            return Ok(FamilyOutcome::Failed { steps });
        };
        for z in &sol.free {
            values.insert(*z, zeta(*z));
            free.push(*z);
        }
        for (z, e) in &sol.determined {
            values.insert(*z, subst_zetas(e, &values)?);
        }
        for (z, r) in &st.layout.aliases {
            let v = values[r].clone();
            values.insert(*z, v);
        }
        steps.push(st);
    }
    let determined_upto = if sys.n() == 0 { 0 } else { last + 1 };

    let mut algebraic_conditions_vanish = true;
    for j in 0..determined_upto {
        for i in 0..j {
            for a in 0..sys.m() {
                if !algebraic_condition(&sc, &values, a, i, j).is_zero() {
                    algebraic_conditions_vanish = false;
                }
            }
        }
    }
    let closed_form_relations_hold = closed_form_check(sys, &values, determined_upto)?;

    let xbar = reference_complement(sys);
    let ybar = symbol_fields(sys);
    let fields = (0..determined_upto)
        .map(|i| {
            let mut u = xbar[i].clone();
            for (k, &(b, h)) in par.iter().enumerate() {
                u = u.add(&ybar[k].scale(&values[&ZetaVar::new(i, b, h)]));
            }
            u
        })
        .collect();
    Ok(FamilyOutcome::Built(ConnectionFamily {
        free,
        values,
        fields,
        steps,
        determined_upto,
        algebraic_conditions_vanish,
        closed_form_relations_hold,
    }))
}

/// `ζ_j^{(α,i)} = Σ_{k≤j} Σ_{γ∈N(k)} C^k_γ(φ^α_j) ζ_i^{(γ,k)} + C_i^{(1)}(φ^α_j)`
/// for `i < j`, `(α,i) ∉ B`, `(α,j) ∈ B`.
fn closed_form_check(sys: &ReducedCNF, values: &BTreeMap<ZetaVar, RatFn>, upto: usize) -> Result<bool, ExprError> {
    for j in 0..upto {
        for i in 0..j {
            for a in 0..sys.m() {
                let Some(phi) = sys.phi(a, j) else { continue };
                if sys.is_principal(a, i) {
                    continue;
                }
                let mut rhs = sys.restrict(&sys.c1(i, phi))?;
                for &(g, k) in &sys.parametric() {
                    if k > j {
                        continue;
                    }
                    let coef = sys.ch(k, g, phi);
                    if !coef.is_zero() {
                        rhs = rhs.add(&coef.mul(&values[&ZetaVar::new(i, g, k)]));
                    }
                }
                if values[&ZetaVar::new(j, a, i)] != rhs {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}
