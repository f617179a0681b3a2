//! Generic rank over the rational function field, guarded by evaluation.

use std::collections::BTreeSet;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::echelon::{bareiss, field_rank, Echelon};
use super::matrix::{Matrix, SymMatrix};
use super::LinalgError;
use crate::expr::{Atom, Poly, RatFn};
use crate::scalar::Rational;

pub const DEFAULT_SEED: u64 = 0x5eed_1e55;

#[derive(Clone, Debug)]
pub struct RankResult {
    pub rank: usize,
    /// Non-constant pivots: the generic rank may drop where they vanish.
    pub caveats: Vec<RatFn>,
    pub echelon: Echelon<Poly>,
}

/// Clears denominators row by row so that elimination runs over polynomials.
pub fn to_polynomial_rows(m: &SymMatrix) -> Matrix<Poly> {
    let mut out: Matrix<Poly> = Matrix::zeros(m.rows(), m.cols());
    out.row_labels = m.row_labels.clone();
    out.col_labels = m.col_labels.clone();
    for r in 0..m.rows() {
        let mut l = Poly::one();
        for e in m.row(r) {
            if !e.is_polynomial() {
                let g = Poly::gcd(&l, e.den());
                l = l.mul(&e.den().div_exact(&g).unwrap());
            }
        }
        for c in 0..m.cols() {
            let e = m.get(r, c);
            let v = e.num().mul(&l.div_exact(e.den()).expect("denominator divides lcm"));
            out.set(r, c, v);
        }
    }
    out
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    let n: i64 = rng.gen_range(-97..=97);
    let d: i64 = rng.gen_range(1..=13);
    Rational::new(n.into(), d.into())
}

/// Rank over the field of rational functions in all atoms of `m`.
pub fn rank_generic(m: &SymMatrix) -> Result<RankResult, LinalgError> {
    rank_generic_seeded(m, DEFAULT_SEED)
}

pub fn rank_generic_seeded(m: &SymMatrix, seed: u64) -> Result<RankResult, LinalgError> {
    let pm = to_polynomial_rows(m);
    let echelon = bareiss(&pm);
    let rank = echelon.rank();
    let caveats: Vec<RatFn> = echelon
        .trace
        .iter()
        .filter(|p| !p.is_constant())
        .map(|p| RatFn::from_poly(p.monic()))
        .collect();

    let mut atoms = BTreeSet::new();
    for r in 0..m.rows() {
        for e in m.row(r) {
            atoms.extend(e.atoms());
        }
    }
    if atoms.is_empty() {
        return Ok(RankResult { rank, caveats, echelon });
    }
    let mut guards: Vec<Poly> = echelon.trace.iter().filter(|p| !p.is_constant()).cloned().collect();
    for r in 0..m.rows() {
        for e in m.row(r) {
            if !e.is_polynomial() {
                guards.push(e.den().clone());
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checked = 0;
    let mut attempts = 0;
    while checked < 3 {
        attempts += 1;
        if attempts > 200 {
            return Err(LinalgError::NoGoodPoint);
        }
        let point: Vec<(Atom, Rational)> = atoms.iter().map(|a| (a.clone(), random_rational(&mut rng))).collect();
        let lookup = |a: &Atom| point.iter().find(|(b, _)| b == a).map(|(_, v)| v.clone());
        if guards
            .iter()
            .any(|g| g.eval::<Rational>(&lookup).map(|v| v.is_zero()).unwrap_or(true))
        {
            continue;
        }
        let qm = m
            .try_map(|e| e.eval::<Rational>(&lookup))
            .map_err(|_| LinalgError::NoGoodPoint)?;
        let r = field_rank(&qm);
        if r != rank {
            return Err(LinalgError::RankGuard { symbolic: rank, at_point: r });
        }
        checked += 1;
    }
    Ok(RankResult { rank, caveats, echelon })
}
