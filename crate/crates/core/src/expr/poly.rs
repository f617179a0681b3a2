//! Sparse multivariate polynomials with rational coefficients.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};

use super::atom::{Atom, Coordinate};
use crate::scalar::{self, Rational, Scalar};

/// Power product of atoms, sorted by atom. Ordered lexicographically with
/// the smallest atom most significant, which is a monomial order.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(Vec<(Atom, u32)>);

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        loop {
            match (a.get(i), b.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some((x, ex)), Some((y, ey))) => match x.cmp(y) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => {
                        if ex != ey {
                            return ex.cmp(ey);
                        }
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(a: Atom) -> Self {
        Monomial(vec![(a, 1)])
    }

    pub fn factors(&self) -> &[(Atom, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn degree(&self, a: &Atom) -> u32 {
        self.0
            .iter()
            .find(|(x, _)| x == a)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (x, ex) = &self.0[i];
            let (y, ey) = &other.0[j];
            match x.cmp(y) {
                Ordering::Less => {
                    out.push((x.clone(), *ex));
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((y.clone(), *ey));
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((x.clone(), ex + ey));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    /// Splits off the power of `a`.
    fn split(&self, a: &Atom) -> (Monomial, u32) {
        let mut e = 0;
        let rest = self
            .0
            .iter()
            .filter(|(x, k)| {
                if x == a {
                    e = *k;
                    false
                } else {
                    true
                }
            })
            .cloned()
            .collect();
        (Monomial(rest), e)
    }

    fn with_power(&self, a: &Atom, e: u32) -> Monomial {
        if e == 0 {
            return self.clone();
        }
        self.mul(&Monomial(vec![(a.clone(), e)]))
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(q: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(Monomial::one(), q);
        }
        Poly { terms }
    }

    pub fn atom(a: Atom) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(a), Rational::one());
        Poly { terms }
    }

    pub fn coord(c: Coordinate) -> Self {
        Poly::atom(Atom::Coord(c))
    }

    pub fn from_term(m: Monomial, q: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(m, q);
        }
        Poly { terms }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if self.is_zero() {
            return Some(Rational::zero());
        }
        if self.is_constant() {
            return self.terms.values().next().cloned();
        }
        None
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::total_degree).max().unwrap_or(0)
    }

    /// Leading term under the monomial order.
    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coefficient(&self) -> Rational {
        self.leading()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut s = BTreeSet::new();
        for m in self.terms.keys() {
            for (a, _) in &m.0 {
                s.insert(a.clone());
            }
        }
        s
    }

    pub fn contains(&self, a: &Atom) -> bool {
        self.terms.keys().any(|m| m.0.iter().any(|(x, _)| x == a))
    }

    pub fn has_zeta(&self) -> bool {
        self.terms.keys().any(|m| m.0.iter().any(|(x, _)| x.is_zeta()))
    }

    fn add_term(&mut self, m: Monomial, q: Rational) {
        if q.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(q);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + q;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, q) in &other.terms {
            out.add_term(m.clone(), q.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, q) in &other.terms {
            out.add_term(m.clone(), -q.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, q)| (m.clone(), -q)).collect(),
        }
    }

    pub fn scale(&self, q: &Rational) -> Poly {
        if q.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * q)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        if let Some(c) = self.constant_value() {
            return other.scale(&c);
        }
        if let Some(c) = other.constant_value() {
            return self.scale(&c);
        }
        let mut out = Poly::zero();
        for (m1, q1) in &self.terms {
            for (m2, q2) in &other.terms {
                out.add_term(m1.mul(m2), q1 * q2);
            }
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial, q: &Rational) -> Poly {
        let mut out = Poly::zero();
        for (m1, q1) in &self.terms {
            out.add_term(m1.mul(m), q1 * q);
        }
        out
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn degree_in(&self, a: &Atom) -> u32 {
        self.terms.keys().map(|m| m.degree(a)).max().unwrap_or(0)
    }

    /// Coefficients with respect to `a`, indexed by degree.
    pub fn coeffs_in(&self, a: &Atom) -> Vec<Poly> {
        let d = self.degree_in(a) as usize;
        let mut out = vec![Poly::zero(); d + 1];
        for (m, q) in &self.terms {
            let (rest, e) = m.split(a);
            out[e as usize].add_term(rest, q.clone());
        }
        out
    }

    pub fn from_coeffs_in(a: &Atom, coeffs: &[Poly]) -> Poly {
        let mut out = Poly::zero();
        for (e, c) in coeffs.iter().enumerate() {
            for (m, q) in &c.terms {
                out.add_term(m.with_power(a, e as u32), q.clone());
            }
        }
        out
    }

    /// Partial derivative with respect to an atom.
    pub fn diff_atom(&self, a: &Atom) -> Poly {
        let mut out = Poly::zero();
        for (m, q) in &self.terms {
            let (rest, e) = m.split(a);
            if e == 0 {
                continue;
            }
            out.add_term(rest.with_power(a, e - 1), q * Rational::from_integer(e.into()));
        }
        out
    }

    /// Total derivative with respect to a coordinate: formal unknowns depend
    /// on every coordinate, so their atoms produce formal-partial atoms.
    pub fn diff_coord(&self, c: &Coordinate) -> Poly {
        let mut out = Poly::zero();
        for a in self.atoms() {
            match a.derivative(c) {
                None => {}
                Some(None) => out = out.add(&self.diff_atom(&a)),
                Some(Some(da)) => out = out.add(&self.diff_atom(&a).mul(&Poly::atom(da))),
            }
        }
        out
    }

    /// Simultaneous polynomial substitution of atoms.
    pub fn subst(&self, bindings: &BTreeMap<Atom, Poly>) -> Poly {
        let mut out = Poly::zero();
        for (m, q) in &self.terms {
            let mut term = Poly::constant(q.clone());
            let mut kept = Monomial::one();
            for (a, e) in &m.0 {
                match bindings.get(a) {
                    Some(p) => term = term.mul(&p.pow(*e)),
                    None => kept = kept.mul(&Monomial(vec![(a.clone(), *e)])),
                }
            }
            out = out.add(&term.mul_monomial(&kept, &Rational::one()));
        }
        out
    }

    /// Evaluates with the given atom values; reports the first unbound atom.
    pub fn eval<T: Scalar>(&self, value: &dyn Fn(&Atom) -> Option<T>) -> Result<T, Atom> {
        let mut acc = T::zero();
        let mut cache: BTreeMap<&Atom, T> = BTreeMap::new();
        for (m, q) in &self.terms {
            let mut t = T::from_rational(q);
            for (a, e) in &m.0 {
                let v = match cache.get(a) {
                    Some(v) => v.clone(),
                    None => {
                        let v = value(a).ok_or_else(|| a.clone())?;
                        cache.insert(a, v.clone());
                        v
                    }
                };
                t = t * v.powi(*e);
            }
            acc = acc + t;
        }
        Ok(acc)
    }

    /// Divides out the leading coefficient (zero stays zero).
    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let lc = self.leading_coefficient();
        self.scale(&(Rational::one() / lc))
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Poly::zero());
        }
        if let Some(c) = d.constant_value() {
            return Some(self.scale(&(Rational::one() / c)));
        }
        let v = d.atoms().into_iter().next()?;
        if !self.contains(&v) {
            return None;
        }
        let a = self.coeffs_in(&v);
        let b = d.coeffs_in(&v);
        let (da, db) = (a.len() - 1, b.len() - 1);
        if da < db {
            return None;
        }
        let lcb = &b[db];
        let mut r = a;
        let mut q = vec![Poly::zero(); da - db + 1];
        for k in (db..=da).rev() {
            if r[k].is_zero() {
                continue;
            }
            let qk = r[k].div_exact(lcb)?;
            for (t, bt) in b.iter().enumerate() {
                r[k - db + t] = r[k - db + t].sub(&qk.mul(bt));
            }
            q[k - db] = qk;
        }
        if r.iter().any(|p| !p.is_zero()) {
            return None;
        }
        Some(Poly::from_coeffs_in(&v, &q))
    }

    /// Greatest common divisor, normalized to leading coefficient 1.
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        gcd_rec(a, b).monic()
    }
}

fn content_in(p: &Poly, v: &Atom) -> Poly {
    let mut g = Poly::zero();
    for c in p.coeffs_in(v) {
        if c.is_zero() {
            continue;
        }
        g = gcd_rec(&g, &c);
        if g.is_constant() {
            return Poly::one();
        }
    }
    g
}

fn primitive_in(p: &Poly, v: &Atom) -> Poly {
    let c = content_in(p, v);
    p.div_exact(&c).expect("content divides")
}

fn pseudo_rem(f: &Poly, g: &Poly, v: &Atom) -> Poly {
    let dg = g.degree_in(v);
    let gc = g.coeffs_in(v);
    let lcg = &gc[dg as usize];
    let mut r = f.clone();
    while !r.is_zero() && r.contains(v) && r.degree_in(v) >= dg {
        let dr = r.degree_in(v);
        let lcr = r.coeffs_in(v).pop().unwrap();
        let shift = Poly::from_term(Monomial::one().with_power(v, dr - dg), Rational::one());
        r = r.mul(lcg).sub(&lcr.mul(&shift).mul(g));
    }
    r
}

fn gcd_rec(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if a.div_exact(b).is_some() {
        return b.clone();
    }
    if b.div_exact(a).is_some() {
        return a.clone();
    }
    let mut atoms = a.atoms();
    atoms.extend(b.atoms());
    let v = atoms.into_iter().next().unwrap();
    if !a.contains(&v) {
        return gcd_rec(a, &content_in(b, &v));
    }
    if !b.contains(&v) {
        return gcd_rec(&content_in(a, &v), b);
    }
    let ca = content_in(a, &v);
    let cb = content_in(b, &v);
    let c = gcd_rec(&ca, &cb);
    let pa = a.div_exact(&ca).unwrap();
    let pb = b.div_exact(&cb).unwrap();
    let (mut f, mut g) = if pa.degree_in(&v) >= pb.degree_in(&v) {
        (pa, pb)
    } else {
        (pb, pa)
    };
    loop {
        let r = pseudo_rem(&f, &g, &v);
        if r.is_zero() {
            break;
        }
        if !r.contains(&v) {
            g = Poly::one();
            break;
        }
        f = g;
        g = primitive_in(&r, &v);
    }
    let g = if g.contains(&v) { primitive_in(&g, &v) } else { Poly::one() };
    c.mul(&g)
}

impl scalar::Domain for Poly {
    fn zero() -> Self {
        Poly::zero()
    }
    fn one() -> Self {
        Poly::one()
    }
    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        Poly::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        Poly::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        Poly::mul(self, other)
    }
    fn exact_div(&self, other: &Self) -> Self {
        self.div_exact(other)
            .expect("fraction-free elimination divides exactly")
    }
    fn complexity(&self) -> (usize, u32) {
        (self.num_terms(), self.total_degree())
    }
    fn is_constant(&self) -> bool {
        Poly::is_constant(self)
    }
}
