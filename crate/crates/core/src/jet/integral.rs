//! Pointwise test for integral elements of `R_q`.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use super::chart::Chart;
use super::contact::{contact_form_value, contact_two_form_value, formal_derivative, TangentVector};
use super::multiindex::JetVar;
use crate::expr::{Atom, Coordinate, ExprError, RatFn};
use crate::linalg::{field_rank, solve_affine, Matrix, SolveOutcome};
use crate::scalar::Rational;

/// A base point of `J_q` and tangent vectors there, in ambient coordinates.
#[derive(Clone, Debug)]
pub struct PointFrame {
    pub base: BTreeMap<Coordinate, Rational>,
    pub vectors: Vec<TangentVector>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum IntegralError {
    #[error("base point is not on the equation: residual of equation {0} does not vanish")]
    NotOnManifold(usize),
    #[error("frame vectors are linearly dependent")]
    Dependent,
    #[error("evaluation failed: {0}")]
    Eval(#[from] ExprError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntegralCheck {
    pub tangent: bool,
    pub one_forms_vanish: bool,
    pub two_forms_vanish: bool,
    pub transversal: bool,
    /// For transversal frames: whether a point of `R_{q+1}` over the base
    /// point exists whose contact plane contains the frame.
    pub witness: Option<bool>,
}

impl IntegralCheck {
    pub fn is_integral(&self) -> bool {
        self.tangent && self.one_forms_vanish && self.two_forms_vanish
    }

    /// True when the witness check was run and disagrees with the forms.
    /// The contact-map criterion assumes the equation has no integrability
    /// conditions, which is not verified here.
    pub fn witness_disagrees(&self) -> bool {
        matches!(self.witness, Some(w) if w != self.is_integral())
    }
}

fn eval_at(f: &RatFn, point: &BTreeMap<Coordinate, Rational>) -> Result<Rational, ExprError> {
    f.eval::<Rational>(&|a: &Atom| match a {
        Atom::Coord(c) => point.get(c).cloned(),
        _ => None,
    })
}

fn get(v: &TangentVector, c: &Coordinate) -> Rational {
    v.get(c).cloned().unwrap_or_else(Rational::zero)
}

/// Decides whether the span of the frame is an integral element of the
/// equation `equations = 0` of order `chart.order`.
pub fn is_integral_element(chart: &Chart, equations: &[RatFn], frame: &PointFrame) -> Result<IntegralCheck, IntegralError> {
    for (t, phi) in equations.iter().enumerate() {
        if !eval_at(phi, &frame.base)?.is_zero() {
            return Err(IntegralError::NotOnManifold(t));
        }
    }
    let coords = chart.coordinates();
    let rows: Vec<Vec<Rational>> = frame.vectors.iter().map(|v| coords.iter().map(|c| get(v, c)).collect()).collect();
    let k = frame.vectors.len();
    if field_rank(&Matrix::from_rows(rows, coords.len())) < k {
        return Err(IntegralError::Dependent);
    }

    let mut tangent = true;
    for phi in equations {
        for v in &frame.vectors {
            let mut dv = Rational::zero();
            for (c, val) in v {
                if val.is_zero() {
                    continue;
                }
                dv += eval_at(&phi.diff(c), &frame.base)? * val;
            }
            if !dv.is_zero() {
                tangent = false;
            }
        }
    }

    let lower: Vec<JetVar> = (0..chart.order).flat_map(|o| chart.jets_of_order(o)).collect();
    let one_forms_vanish = lower
        .iter()
        .all(|j| frame.vectors.iter().all(|v| contact_form_value(j, &frame.base, v).is_zero()));
    let mut two_forms_vanish = true;
    for j in &lower {
        for a in 0..k {
            for b in a + 1..k {
                if !contact_two_form_value(j, &frame.vectors[a], &frame.vectors[b]).is_zero() {
                    two_forms_vanish = false;
                }
            }
        }
    }

    let n = chart.n();
    let xrows: Vec<Vec<Rational>> = frame
        .vectors
        .iter()
        .map(|v| (0..n).map(|i| get(v, &Coordinate::Indep(i))).collect())
        .collect();
    let transversal = k > 0 && field_rank(&Matrix::from_rows(xrows, n)) == k;
    let witness = if transversal && one_forms_vanish {
        Some(witness_exists(chart, equations, frame)?)
    } else {
        None
    };

    Ok(IntegralCheck {
        tangent,
        one_forms_vanish,
        two_forms_vanish,
        transversal,
        witness,
    })
}

/// Looks for order-`q+1` values `y` with `D_iΦ(base, y) = 0` and every frame
/// vector of the form `Σ a^i Γ_{q+1}(base, y; ∂_{x^i})`.
fn witness_exists(chart: &Chart, equations: &[RatFn], frame: &PointFrame) -> Result<bool, IntegralError> {
    let n = chart.n();
    let q = chart.order;
    let unknowns: Vec<JetVar> = chart.jets_of_order(q + 1);
    let index: BTreeMap<JetVar, usize> = unknowns.iter().cloned().enumerate().map(|(k, j)| (j, k)).collect();
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    let mut rhs: Vec<Rational> = Vec::new();

    for phi in equations {
        for i in 0..n {
            let d = formal_derivative(phi, i);
            let mut row = vec![Rational::zero(); unknowns.len()];
            let mut zero_part = d.clone();
            for (j, &col) in &index {
                let atom = Atom::Coord(Coordinate::Jet(j.clone()));
                if d.contains(&atom) {
                    // D_iΦ is affine in the top-order jets.
                    row[col] = eval_at(&d.diff_atom(&atom), &frame.base)?;
                    zero_part = zero_part.subst(&[(atom, RatFn::zero())].into())?;
                }
            }
            rhs.push(-eval_at(&zero_part, &frame.base)?);
            rows.push(row);
        }
    }
    for v in &frame.vectors {
        for j in chart.jets_of_order(q) {
            let mut row = vec![Rational::zero(); unknowns.len()];
            for i in 0..n {
                let a = get(v, &Coordinate::Indep(i));
                if !a.is_zero() {
                    row[index[&JetVar::new(j.alpha, j.mu.plus(i))]] += a;
                }
            }
            rhs.push(get(v, &Coordinate::Jet(j)));
            rows.push(row);
        }
    }
    let m = Matrix::from_rows(rows, unknowns.len());
    Ok(matches!(solve_affine(&m, &rhs), SolveOutcome::Solved(_)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn coord(chart: &Chart, name: &str) -> Coordinate {
        match chart.resolve(name).unwrap() {
            Atom::Coord(c) => c,
            _ => unreachable!(),
        }
    }

    #[test]
    fn vertical_direction_is_not_integral() {
        let ch = Chart::new(&["x"], &["u"], 1);
        let base: BTreeMap<Coordinate, Rational> =
            [(coord(&ch, "x"), rat(1)), (coord(&ch, "u"), rat(2)), (coord(&ch, "u_x"), rat(3))].into();
        let frame = PointFrame {
            base,
            vectors: vec![
                [(coord(&ch, "x"), rat(1))].into(),
                [(coord(&ch, "u"), rat(1))].into(),
            ],
        };
        let r = is_integral_element(&ch, &[], &frame).unwrap();
        assert!(!r.one_forms_vanish);
        assert!(!r.is_integral());
    }

    #[test]
    fn off_manifold_is_an_error() {
        let ch = Chart::new(&["x"], &["u"], 1);
        let phi = RatFn::coord(coord(&ch, "u_x"));
        let base: BTreeMap<Coordinate, Rational> =
            [(coord(&ch, "x"), rat(0)), (coord(&ch, "u"), rat(0)), (coord(&ch, "u_x"), rat(1))].into();
        let frame = PointFrame { base, vectors: vec![] };
        assert_eq!(is_integral_element(&ch, &[phi], &frame).unwrap_err(), IntegralError::NotOnManifold(0));
    }
}
