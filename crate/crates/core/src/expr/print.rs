//! Canonical text rendering.

use num_traits::{One, Signed};

use super::atom::{Atom, Coordinate};
use super::poly::Poly;
use super::ratfn::RatFn;
use super::tree::Expr;
use crate::scalar::Rational;

/// Supplies display names for atoms.
pub trait Names {
    fn coordinate(&self, c: &Coordinate) -> String;

    fn atom(&self, a: &Atom) -> String {
        match a {
            Atom::Coord(c) => self.coordinate(c),
            Atom::Param(p) => p.clone(),
            Atom::Zeta(z) => {
                let base = format!(
                    "zeta{}[{}]",
                    z.var.i + 1,
                    self.coordinate(&Coordinate::first(z.var.beta, z.var.h, self.n().max(z.var.h + 1)))
                );
                if z.partials.is_empty() {
                    return base;
                }
                let ds: Vec<String> = z
                    .partials
                    .iter()
                    .map(|c| format!("d({})", self.coordinate(c)))
                    .collect();
                let k = z.partials.len();
                let head = if k == 1 { "d".to_string() } else { format!("d{k}") };
                format!("{head}({base})/{}", ds.join(""))
            }
        }
    }

    /// Number of independent variables (for formatting multi-indices).
    fn n(&self) -> usize;
}

/// Fallback names `x1, x2, …` and `u1, u1_x1x2, …`.
pub struct PlainNames(pub usize);

impl Names for PlainNames {
    fn coordinate(&self, c: &Coordinate) -> String {
        match c {
            Coordinate::Indep(i) => format!("x{}", i + 1),
            Coordinate::Jet(j) => {
                let mut s = format!("u{}", j.alpha + 1);
                if !j.mu.is_zero() {
                    s.push('_');
                    for (i, k) in j.mu.counts().iter().enumerate() {
                        for _ in 0..*k {
                            s.push_str(&format!("x{}", i + 1));
                        }
                    }
                }
                s
            }
        }
    }

    fn n(&self) -> usize {
        self.0
    }
}

fn rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn poly_to_string(p: &Poly, names: &dyn Names) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (m, c)) in p.terms().rev().enumerate() {
        let neg = c.is_negative();
        let a = c.abs();
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let factors: Vec<String> = m
            .factors()
            .iter()
            .map(|(x, e)| {
                let name = names.atom(x);
                if *e == 1 {
                    name
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect();
        if factors.is_empty() {
            out.push_str(&rational(&a));
        } else if a.is_one() {
            out.push_str(&factors.join("*"));
        } else {
            out.push_str(&rational(&a));
            out.push('*');
            out.push_str(&factors.join("*"));
        }
    }
    out
}

pub fn ratfn_to_string(r: &RatFn, names: &dyn Names) -> String {
    let num = poly_to_string(r.num(), names);
    if r.is_polynomial() {
        return num;
    }
    let num = if r.num().num_terms() > 1 { format!("({num})") } else { num };
    let den = r.den();
    let single_atom = den.num_terms() == 1
        && den
            .leading()
            .map(|(m, _)| m.factors().len() == 1 && m.factors()[0].1 == 1)
            .unwrap_or(false);
    let ds = poly_to_string(den, names);
    if single_atom {
        format!("{num}/{ds}")
    } else {
        format!("{num}/({ds})")
    }
}

pub fn expr_to_string(e: &Expr, names: &dyn Names) -> String {
    match e {
        Expr::Const(q) => {
            if q.is_negative() || !q.denom().is_one() {
                format!("({})", rational(q))
            } else {
                rational(q)
            }
        }
        Expr::Atom(a) => names.atom(a),
        Expr::Sum(ts) => {
            let parts: Vec<String> = ts.iter().map(|t| expr_to_string(t, names)).collect();
            format!("({})", parts.join(" + "))
        }
        Expr::Product(fs) => {
            let parts: Vec<String> = fs.iter().map(|t| expr_to_string(t, names)).collect();
            parts.join("*")
        }
        Expr::Pow(b, k) => format!("{}^({k})", expr_to_string(b, names)),
        Expr::Quotient(a, b) => {
            format!("({})/({})", expr_to_string(a, names), expr_to_string(b, names))
        }
    }
}
