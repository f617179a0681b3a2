//! Expression trees and their canonical normalization.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::atom::{Atom, Coordinate};
use super::poly::Poly;
use super::ratfn::RatFn;
use super::ExprError;
use crate::scalar::{Rational, Scalar};

/// Unnormalized expression tree as produced by the parser or by hand.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Const(Rational),
    /// Coordinate, symbolic constant, formal unknown or formal partial.
    Atom(Atom),
    Sum(Vec<Expr>),
    Product(Vec<Expr>),
    Pow(Box<Expr>, i64),
    Quotient(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn int(n: i64) -> Expr {
        Expr::Const(crate::scalar::rat(n))
    }

    pub fn coord(c: Coordinate) -> Expr {
        Expr::Atom(Atom::Coord(c))
    }

    pub fn pow(self, k: i64) -> Expr {
        Expr::Pow(Box::new(self), k)
    }

    pub fn neg(self) -> Expr {
        Expr::Product(vec![Expr::int(-1), self])
    }

    pub fn to_ratfn(&self) -> Result<RatFn, ExprError> {
        Ok(match self {
            Expr::Const(q) => RatFn::constant(q.clone()),
            Expr::Atom(a) => RatFn::atom(a.clone()),
            Expr::Sum(ts) => {
                let mut acc = RatFn::zero();
                for t in ts {
                    acc = acc.add(&t.to_ratfn()?);
                }
                acc
            }
            Expr::Product(fs) => {
                let mut acc = RatFn::one();
                for f in fs {
                    acc = acc.mul(&f.to_ratfn()?);
                }
                acc
            }
            Expr::Pow(b, k) => b.to_ratfn()?.powi(*k)?,
            Expr::Quotient(a, b) => a.to_ratfn()?.div(&b.to_ratfn()?)?,
        })
    }

    /// Tree of a canonical rational function; the image of [`normalize`].
    pub fn from_ratfn(r: &RatFn) -> Expr {
        let num = poly_tree(r.num());
        if r.is_polynomial() {
            num
        } else {
            Expr::Quotient(Box::new(num), Box::new(poly_tree(r.den())))
        }
    }

    /// Direct evaluation of the tree, without normalizing first.
    pub fn eval_at<T: Scalar>(&self, value: &dyn Fn(&Atom) -> Option<T>) -> Result<T, ExprError> {
        Ok(match self {
            Expr::Const(q) => T::from_rational(q),
            Expr::Atom(a) => value(a).ok_or_else(|| ExprError::Unbound(format!("{a:?}")))?,
            Expr::Sum(ts) => {
                let mut acc = T::zero();
                for t in ts {
                    acc = acc + t.eval_at(value)?;
                }
                acc
            }
            Expr::Product(fs) => {
                let mut acc = T::one();
                for f in fs {
                    acc = acc * f.eval_at(value)?;
                }
                acc
            }
            Expr::Pow(b, k) => {
                let v = b.eval_at(value)?;
                let p = v.powi(k.unsigned_abs() as u32);
                if *k < 0 {
                    if p.is_zero() {
                        return Err(ExprError::DivisionByZero);
                    }
                    T::one() / p
                } else {
                    p
                }
            }
            Expr::Quotient(a, b) => {
                let d = b.eval_at(value)?;
                if d.is_zero() {
                    return Err(ExprError::DivisionByZero);
                }
                a.eval_at(value)? / d
            }
        })
    }
}

fn poly_tree(p: &Poly) -> Expr {
    let mut terms = Vec::new();
    for (m, c) in p.terms().rev() {
        let mut factors = Vec::new();
        if !c.is_one() || m.is_one() {
            factors.push(Expr::Const(c.clone()));
        }
        for (a, e) in m.factors() {
            let base = Expr::Atom(a.clone());
            factors.push(if *e == 1 { base } else { base.pow(*e as i64) });
        }
        terms.push(if factors.len() == 1 {
            factors.pop().unwrap()
        } else {
            Expr::Product(factors)
        });
    }
    match terms.len() {
        0 => Expr::Const(Rational::zero()),
        1 => terms.pop().unwrap(),
        _ => Expr::Sum(terms),
    }
}

/// Canonical form: expanded, reduced numerator over monic denominator.
pub fn normalize(e: &Expr) -> Result<Expr, ExprError> {
    Ok(Expr::from_ratfn(&e.to_ratfn()?))
}

pub fn diff(e: &Expr, c: &Coordinate) -> Result<Expr, ExprError> {
    Ok(Expr::from_ratfn(&e.to_ratfn()?.diff(c)))
}

/// Simultaneous substitution followed by normalization.
pub fn substitute(e: &Expr, bindings: &BTreeMap<Coordinate, Expr>) -> Result<Expr, ExprError> {
    let mut b = BTreeMap::new();
    for (c, r) in bindings {
        let r = r.to_ratfn()?;
        if r.contains(&Atom::Coord(c.clone())) {
            return Err(ExprError::SelfReferential(format!("{c:?}")));
        }
        b.insert(c.clone(), r);
    }
    Ok(Expr::from_ratfn(&e.to_ratfn()?.subst_coords(&b)?))
}

/// Exact value at a rational point.
pub fn eval_at(e: &Expr, point: &BTreeMap<Coordinate, Rational>) -> Result<Rational, ExprError> {
    let r = e.to_ratfn()?;
    if r.has_zeta() {
        return Err(ExprError::Unbound("formal unknown".into()));
    }
    r.eval(&|a: &Atom| match a {
        Atom::Coord(c) => point.get(c).cloned(),
        _ => None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::atom::ZetaVar;
    use crate::scalar::{rat, ratio};

    fn x() -> Expr {
        Expr::coord(Coordinate::Indep(0))
    }
    fn u() -> Expr {
        Expr::coord(Coordinate::dep(0, 1))
    }
    fn ux() -> Expr {
        Expr::coord(Coordinate::first(0, 0, 1))
    }

    #[test]
    fn commutativity_cancels() {
        let w = Expr::coord(Coordinate::dep(2, 1));
        let e = Expr::Sum(vec![
            Expr::Product(vec![ux(), w.clone()]),
            Expr::Product(vec![w, ux()]).neg(),
        ]);
        assert_eq!(normalize(&e).unwrap(), Expr::int(0));
    }

    #[test]
    fn polynomial_division() {
        let e = Expr::Quotient(
            Box::new(Expr::Sum(vec![x().pow(2), Expr::int(-1)])),
            Box::new(Expr::Sum(vec![x(), Expr::int(-1)])),
        );
        let expect = Expr::Sum(vec![x(), Expr::int(1)]);
        assert_eq!(normalize(&e).unwrap(), normalize(&expect).unwrap());
    }

    #[test]
    fn circle_is_canonical() {
        let e = Expr::Sum(vec![ux().pow(2), u().pow(2), x().pow(2), Expr::int(-1)]);
        let n = normalize(&e).unwrap();
        assert_eq!(normalize(&n).unwrap(), n);
        assert_eq!(n.to_ratfn().unwrap(), e.to_ratfn().unwrap());
    }

    #[test]
    fn division_by_zero_is_an_error() {
        let e = Expr::Quotient(Box::new(x()), Box::new(Expr::Sum(vec![x(), x().neg()])));
        assert_eq!(normalize(&e), Err(ExprError::DivisionByZero));
    }

    #[test]
    fn derivatives() {
        assert_eq!(
            diff(&x().pow(2), &Coordinate::Indep(0)).unwrap(),
            normalize(&Expr::Product(vec![Expr::int(2), x()])).unwrap()
        );
        let e = Expr::Product(vec![ux(), u()]);
        assert_eq!(diff(&e, &Coordinate::first(0, 0, 1)).unwrap(), u());
        let z = Expr::Atom(Atom::zeta(ZetaVar::new(0, 1, 0)));
        let d = diff(&z, &Coordinate::Indep(1)).unwrap();
        match d {
            Expr::Atom(Atom::Zeta(za)) => assert_eq!(za.partials, vec![Coordinate::Indep(1)]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn substitution() {
        let n = 2;
        let vx = Coordinate::first(1, 0, n);
        let wt = Coordinate::first(2, 1, n);
        let e = Expr::Sum(vec![Expr::coord(vx.clone()), Expr::coord(wt.clone()).neg()]);
        let b = BTreeMap::from([(wt.clone(), Expr::coord(vx.clone()))]);
        assert_eq!(substitute(&e, &b).unwrap(), Expr::int(0));
        let ut = Coordinate::first(0, 1, n);
        let v = Coordinate::dep(1, n);
        let b = BTreeMap::from([(ut.clone(), Expr::coord(v.clone()))]);
        assert_eq!(substitute(&Expr::coord(ut), &b).unwrap(), Expr::coord(v));
        let e = Expr::Sum(vec![x(), u()]);
        assert_eq!(substitute(&e, &BTreeMap::new()).unwrap(), normalize(&e).unwrap());
        let b = BTreeMap::from([(Coordinate::Indep(0), Expr::Sum(vec![x(), Expr::int(1)]))]);
        assert!(matches!(substitute(&e, &b), Err(ExprError::SelfReferential(_))));
    }

    #[test]
    fn evaluation() {
        let e = Expr::Sum(vec![ux().pow(2), u().pow(2), x().pow(2), Expr::int(-1)]);
        let p = BTreeMap::from([
            (Coordinate::first(0, 0, 1), rat(0)),
            (Coordinate::dep(0, 1), rat(1)),
            (Coordinate::Indep(0), rat(0)),
        ]);
        assert_eq!(eval_at(&e, &p).unwrap(), rat(0));
        let p = BTreeMap::from([(Coordinate::Indep(0), ratio(3, 2))]);
        let e2 = Expr::Product(vec![Expr::int(2), x()]);
        assert_eq!(eval_at(&e2, &p).unwrap(), rat(3));
        assert!(matches!(eval_at(&u(), &p), Err(ExprError::Unbound(_))));
    }
}
