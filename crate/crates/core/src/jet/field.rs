use std::collections::{BTreeMap, BTreeSet};

use crate::expr::{ratfn_to_string, Atom, Coordinate, ExprError, Names, RatFn};

/// `Σ coeff · ∂_coordinate` with finitely many nonzero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VectorField {
    comps: BTreeMap<Coordinate, RatFn>,
}

impl VectorField {
    pub fn zero() -> Self {
        VectorField::default()
    }

    /// The coordinate direction field `∂_c`.
    pub fn partial(c: Coordinate) -> Self {
        let mut v = VectorField::zero();
        v.set(c, RatFn::one());
        v
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Coordinate, RatFn)>) -> Self {
        let mut v = VectorField::zero();
        for (c, f) in pairs {
            v.add_component(c, &f);
        }
        v
    }

    pub fn component(&self, c: &Coordinate) -> RatFn {
        self.comps.get(c).cloned().unwrap_or_else(RatFn::zero)
    }

    pub fn set(&mut self, c: Coordinate, f: RatFn) {
        if f.is_zero() {
            self.comps.remove(&c);
        } else {
            self.comps.insert(c, f);
        }
    }

    pub fn add_component(&mut self, c: Coordinate, f: &RatFn) {
        let v = self.component(&c).add(f);
        self.set(c, v);
    }

    pub fn components(&self) -> impl Iterator<Item = (&Coordinate, &RatFn)> {
        self.comps.iter()
    }

    pub fn support(&self) -> BTreeSet<Coordinate> {
        self.comps.keys().cloned().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    /// `V(f)`.
    pub fn apply(&self, f: &RatFn) -> RatFn {
        let mut out = RatFn::zero();
        for (c, a) in &self.comps {
            let d = f.diff(c);
            if !d.is_zero() {
                out = out.add(&a.mul(&d));
            }
        }
        out
    }

    /// Lie bracket `[self, other]`.
    pub fn bracket(&self, other: &VectorField) -> VectorField {
        let mut out = VectorField::zero();
        let support: BTreeSet<Coordinate> = self.support().union(&other.support()).cloned().collect();
        for c in support {
            let v = self.apply(&other.component(&c)).sub(&other.apply(&self.component(&c)));
            out.set(c, v);
        }
        out
    }

    pub fn add(&self, other: &VectorField) -> VectorField {
        let mut out = self.clone();
        for (c, f) in &other.comps {
            out.add_component(c.clone(), f);
        }
        out
    }

    pub fn sub(&self, other: &VectorField) -> VectorField {
        self.add(&other.scale(&RatFn::int(-1)))
    }

    pub fn scale(&self, f: &RatFn) -> VectorField {
        VectorField::from_pairs(self.comps.iter().map(|(c, a)| (c.clone(), a.mul(f))))
    }

    /// Applies `f` to every coefficient.
    pub fn map_coeffs(&self, f: impl Fn(&RatFn) -> Result<RatFn, ExprError>) -> Result<VectorField, ExprError> {
        let mut out = VectorField::zero();
        for (c, a) in &self.comps {
            out.set(c.clone(), f(a)?);
        }
        Ok(out)
    }

    /// Substitutes coordinates in the coefficients and drops the components
    /// along substituted coordinates (pull-back to a solved submanifold).
    pub fn restrict(&self, bindings: &BTreeMap<Atom, RatFn>) -> Result<VectorField, ExprError> {
        let mut out = VectorField::zero();
        for (c, a) in &self.comps {
            if bindings.contains_key(&Atom::Coord(c.clone())) {
                continue;
            }
            out.set(c.clone(), a.subst(bindings)?);
        }
        Ok(out)
    }

    /// Renders as `a*d_x + b*d_u_x`, in coordinate order.
    pub fn display(&self, names: &dyn Names) -> String {
        if self.comps.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (c, a)) in self.comps.iter().enumerate() {
            let d = format!("d_{}", names.coordinate(c));
            let simple = a.is_polynomial() && a.num().num_terms() == 1;
            let negative = simple && ratfn_to_string(a, names).starts_with('-');
            let a = if negative { a.neg() } else { a.clone() };
            let term = if a.is_one() {
                d
            } else if simple {
                format!("{}*{d}", ratfn_to_string(&a, names))
            } else {
                format!("({})*{d}", ratfn_to_string(&a, names))
            };
            match (k, negative) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            out.push_str(&term);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Coordinate;
    use crate::jet::Chart;

    fn c(chart: &Chart, name: &str) -> Coordinate {
        match chart.resolve(name).unwrap() {
            Atom::Coord(c) => c,
            _ => unreachable!(),
        }
    }

    #[test]
    fn derivation_and_antisymmetry() {
        let ch = Chart::new(&["x"], &["u"], 1);
        let x = c(&ch, "x");
        let u = c(&ch, "u");
        let v = VectorField::from_pairs([(x.clone(), RatFn::coord(u.clone())), (u.clone(), RatFn::coord(x.clone()))]);
        let w = VectorField::partial(x.clone());
        let f = RatFn::coord(x.clone()).mul(&RatFn::coord(u.clone()));
        let lhs = v.apply(&f);
        assert_eq!(lhs, RatFn::coord(u.clone()).mul(&RatFn::coord(u.clone())).add(&RatFn::coord(x.clone()).mul(&RatFn::coord(x.clone()))));
        assert_eq!(v.bracket(&w), w.bracket(&v).scale(&RatFn::int(-1)));
        assert!(v.bracket(&v).is_zero());
        // [u d_x + x d_u, d_x] = -d_u
        assert_eq!(v.bracket(&w), VectorField::partial(u).scale(&RatFn::int(-1)));
    }
}
