//! Canonical rational functions: the normal form of every expression.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};

use super::atom::{Atom, Coordinate};
use super::poly::Poly;
use super::ExprError;
use crate::scalar::{self, Rational, Scalar};

/// `num / den` with `gcd(num, den) = 1` and `den` of leading coefficient 1.
/// Structural equality therefore decides equality of rational functions.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFn {
    num: Poly,
    den: Poly,
}

impl Default for RatFn {
    fn default() -> Self {
        RatFn::zero()
    }
}

impl RatFn {
    pub fn zero() -> Self {
        RatFn {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        RatFn::constant(Rational::one())
    }

    pub fn int(n: i64) -> Self {
        RatFn::constant(crate::scalar::rat(n))
    }

    pub fn constant(q: Rational) -> Self {
        RatFn {
            num: Poly::constant(q),
            den: Poly::one(),
        }
    }

    pub fn atom(a: Atom) -> Self {
        RatFn::from_poly(Poly::atom(a))
    }

    pub fn coord(c: Coordinate) -> Self {
        RatFn::atom(Atom::Coord(c))
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFn {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn new(num: Poly, den: Poly) -> Result<Self, ExprError> {
        if den.is_zero() {
            return Err(ExprError::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return RatFn::zero();
        }
        if let Some(c) = den.constant_value() {
            return RatFn {
                num: num.scale(&(Rational::one() / c)),
                den: Poly::one(),
            };
        }
        let g = Poly::gcd(&num, &den);
        let (num, den) = if g.is_constant() {
            (num, den)
        } else {
            (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap())
        };
        let lc = Rational::one() / den.leading_coefficient();
        RatFn {
            num: num.scale(&lc),
            den: den.scale(&lc),
        }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_constant() && self.num == Poly::one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if self.is_polynomial() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut s = self.num.atoms();
        s.extend(self.den.atoms());
        s
    }

    pub fn contains(&self, a: &Atom) -> bool {
        self.num.contains(a) || self.den.contains(a)
    }

    pub fn has_zeta(&self) -> bool {
        self.num.has_zeta() || self.den.has_zeta()
    }

    /// Number of monomials in numerator and denominator.
    pub fn size(&self) -> usize {
        self.num.num_terms() + if self.is_polynomial() { 0 } else { self.den.num_terms() }
    }

    pub fn add(&self, other: &RatFn) -> RatFn {
        if self.is_polynomial() && other.is_polynomial() {
            return RatFn::from_poly(self.num.add(&other.num));
        }
        if self.den == other.den {
            return Self::normalized(self.num.add(&other.num), self.den.clone());
        }
        Self::normalized(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn neg(&self) -> RatFn {
        RatFn {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &RatFn) -> RatFn {
        self.add(&other.neg())
    }

    pub fn scale(&self, q: &Rational) -> RatFn {
        if q.is_zero() {
            return RatFn::zero();
        }
        RatFn {
            num: self.num.scale(q),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &RatFn) -> RatFn {
        if self.is_zero() || other.is_zero() {
            return RatFn::zero();
        }
        if self.is_polynomial() && other.is_polynomial() {
            return RatFn::from_poly(self.num.mul(&other.num));
        }
        Self::normalized(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn inv(&self) -> Result<RatFn, ExprError> {
        RatFn::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &RatFn) -> Result<RatFn, ExprError> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn powi(&self, e: i64) -> Result<RatFn, ExprError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let k = e.unsigned_abs() as u32;
        Ok(RatFn {
            num: base.num.pow(k),
            den: base.den.pow(k),
        })
    }

    /// Partial derivative with respect to an atom, all others held fixed.
    pub fn diff_atom(&self, a: &Atom) -> RatFn {
        let dn = self.num.diff_atom(a);
        if self.is_polynomial() {
            return RatFn::from_poly(dn);
        }
        let dd = self.den.diff_atom(a);
        Self::normalized(
            dn.mul(&self.den).sub(&self.num.mul(&dd)),
            self.den.mul(&self.den),
        )
    }

    /// Derivative with respect to a coordinate; formal unknowns yield
    /// formal-partial atoms.
    pub fn diff(&self, c: &Coordinate) -> RatFn {
        let dn = self.num.diff_coord(c);
        if self.is_polynomial() {
            return RatFn::from_poly(dn);
        }
        let dd = self.den.diff_coord(c);
        Self::normalized(
            dn.mul(&self.den).sub(&self.num.mul(&dd)),
            self.den.mul(&self.den),
        )
    }

    /// Simultaneous substitution of atoms by rational functions.
    pub fn subst(&self, bindings: &BTreeMap<Atom, RatFn>) -> Result<RatFn, ExprError> {
        if bindings.is_empty() || !self.atoms().iter().any(|a| bindings.contains_key(a)) {
            return Ok(self.clone());
        }
        if bindings.values().all(RatFn::is_polynomial) {
            let polys: BTreeMap<Atom, Poly> = bindings
                .iter()
                .map(|(a, r)| (a.clone(), r.num.clone()))
                .collect();
            return RatFn::new(self.num.subst(&polys), self.den.subst(&polys));
        }
        let n = subst_poly(&self.num, bindings);
        let d = subst_poly(&self.den, bindings);
        if d.is_zero() {
            return Err(ExprError::DivisionByZero);
        }
        n.div(&d)
    }

    pub fn subst_coords(&self, bindings: &BTreeMap<Coordinate, RatFn>) -> Result<RatFn, ExprError> {
        let b: BTreeMap<Atom, RatFn> = bindings
            .iter()
            .map(|(c, e)| (Atom::Coord(c.clone()), e.clone()))
            .collect();
        self.subst(&b)
    }

    pub fn eval<T: Scalar>(&self, value: &dyn Fn(&Atom) -> Option<T>) -> Result<T, ExprError> {
        let n = self
            .num
            .eval(value)
            .map_err(|a| ExprError::Unbound(format!("{a:?}")))?;
        let d = self
            .den
            .eval(value)
            .map_err(|a| ExprError::Unbound(format!("{a:?}")))?;
        if d.is_zero() {
            return Err(ExprError::DivisionByZero);
        }
        Ok(n / d)
    }
}

fn subst_poly(p: &Poly, bindings: &BTreeMap<Atom, RatFn>) -> RatFn {
    let mut out = RatFn::zero();
    for (m, q) in p.terms() {
        let mut t = RatFn::constant(q.clone());
        for (a, e) in m.factors() {
            let base = bindings.get(a).cloned().unwrap_or_else(|| RatFn::atom(a.clone()));
            t = t.mul(&base.powi(*e as i64).expect("nonnegative power"));
        }
        out = out.add(&t);
    }
    out
}

impl From<Poly> for RatFn {
    fn from(p: Poly) -> Self {
        RatFn::from_poly(p)
    }
}

impl scalar::Domain for RatFn {
    fn zero() -> Self {
        RatFn::zero()
    }
    fn one() -> Self {
        RatFn::one()
    }
    fn is_zero(&self) -> bool {
        RatFn::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        RatFn::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        RatFn::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        RatFn::mul(self, other)
    }
    fn exact_div(&self, other: &Self) -> Self {
        self.div(other).expect("division by a nonzero pivot")
    }
    fn complexity(&self) -> (usize, u32) {
        (self.size(), self.num.total_degree() + self.den.total_degree())
    }
    fn is_constant(&self) -> bool {
        RatFn::is_constant(self)
    }
}

impl scalar::Field for RatFn {}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn v(name: &str) -> RatFn {
        RatFn::atom(Atom::Param(name.into()))
    }

    #[test]
    fn cancels_common_factors() {
        let x = v("x");
        let num = x.mul(&x).sub(&RatFn::one());
        let den = x.sub(&RatFn::one());
        assert_eq!(num.div(&den).unwrap(), x.add(&RatFn::one()));
    }

    #[test]
    fn canonical_denominator() {
        let x = v("x");
        let a = RatFn::one().div(&x.scale(&rat(2))).unwrap();
        let b = RatFn::constant(crate::scalar::ratio(1, 2)).div(&x).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.den(), &Poly::atom(Atom::Param("x".into())));
    }

    #[test]
    fn division_by_zero() {
        assert_eq!(RatFn::one().div(&RatFn::zero()), Err(ExprError::DivisionByZero));
    }

    #[test]
    fn quotient_rule() {
        let x = v("x");
        let f = RatFn::one().div(&x).unwrap();
        let d = f.diff_atom(&Atom::Param("x".into()));
        assert_eq!(d, RatFn::int(-1).div(&x.mul(&x)).unwrap());
    }
}
