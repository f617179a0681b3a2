use std::collections::BTreeMap;

use super::chart::Chart;
use super::field::VectorField;
use super::multiindex::{JetVar, MultiIndex};
use crate::expr::{Atom, Coordinate, RatFn};
use crate::scalar::Rational;

/// Transversal contact field `C_i^{(q)} = ∂_{x^i} + Σ_{|μ|<q} u^α_{μ+1_i} ∂_{u^α_μ}`.
pub fn contact_field(chart: &Chart, i: usize, q: u32) -> VectorField {
    let mut v = VectorField::partial(Coordinate::Indep(i));
    for k in 0..q {
        for j in chart.jets_of_order(k) {
            let up = Coordinate::jet(j.alpha, j.mu.plus(i));
            v.set(Coordinate::Jet(j), RatFn::coord(up));
        }
    }
    v
}

/// Vertical contact field `C^μ_α = ∂_{u^α_μ}`.
pub fn vertical_field(alpha: usize, mu: MultiIndex) -> VectorField {
    VectorField::partial(Coordinate::jet(alpha, mu))
}

/// Total derivative `D_i Φ = ∂Φ/∂x^i + Σ ∂Φ/∂u^α_μ · u^α_{μ+1_i}`.
pub fn formal_derivative(phi: &RatFn, i: usize) -> RatFn {
    let mut out = phi.diff(&Coordinate::Indep(i));
    for a in phi.atoms() {
        if let Atom::Coord(Coordinate::Jet(j)) = &a {
            let d = phi.diff_atom(&a);
            let up = RatFn::coord(Coordinate::jet(j.alpha, j.mu.plus(i)));
            out = out.add(&d.mul(&up));
        }
    }
    out
}

/// A tangent vector at a point, by coordinate components.
pub type TangentVector = BTreeMap<Coordinate, Rational>;

/// `Γ_q(ρ, ∂_{x^i}) = ∂_{x^i} + u^α_{μ+1_i}(ρ) ∂_{u^α_μ}` for `|μ| < q`,
/// reading the components from a point of `J_q`.
pub fn contact_map_at(chart: &Chart, point: &BTreeMap<Coordinate, Rational>, i: usize) -> Result<TangentVector, Coordinate> {
    let mut v = TangentVector::new();
    v.insert(Coordinate::Indep(i), Rational::from_integer(1.into()));
    for k in 0..chart.order {
        for j in chart.jets_of_order(k) {
            let up = Coordinate::jet(j.alpha, j.mu.plus(i));
            let val = point.get(&up).cloned().ok_or(up)?;
            v.insert(Coordinate::Jet(j), val);
        }
    }
    Ok(v)
}

/// First-order contact form coefficient `ω^α_μ(v) = v^{u^α_μ} − u^α_{μ+1_i} v^{x^i}`.
pub fn contact_form_value(j: &JetVar, point: &BTreeMap<Coordinate, Rational>, v: &TangentVector) -> Rational {
    let n = j.mu.len();
    let zero = Rational::from_integer(0.into());
    let mut val = v.get(&Coordinate::Jet(j.clone())).cloned().unwrap_or_else(|| zero.clone());
    for i in 0..n {
        let xi = v.get(&Coordinate::Indep(i)).cloned().unwrap_or_else(|| zero.clone());
        if xi == zero {
            continue;
        }
        let up = point
            .get(&Coordinate::jet(j.alpha, j.mu.plus(i)))
            .cloned()
            .unwrap_or_else(|| zero.clone());
        val -= up * xi;
    }
    val
}

/// `dω^α_μ(v, w)` with `dω^α_μ = dx^i ∧ du^α_{μ+1_i}`.
pub fn contact_two_form_value(j: &JetVar, v: &TangentVector, w: &TangentVector) -> Rational {
    let zero = Rational::from_integer(0.into());
    let get = |t: &TangentVector, c: &Coordinate| t.get(c).cloned().unwrap_or_else(|| zero.clone());
    let mut val = zero.clone();
    for i in 0..j.mu.len() {
        let x = Coordinate::Indep(i);
        let up = Coordinate::jet(j.alpha, j.mu.plus(i));
        val += get(v, &x) * get(w, &up) - get(w, &x) * get(v, &up);
    }
    val
}
