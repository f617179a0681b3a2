#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vessiot::expr::{Atom, Coordinate, Expr, RatFn};
use vessiot::jet::Chart;
use vessiot::scalar::rat;
use vessiot::system::ReducedCNF;

pub fn sym(ch: &Chart, name: &str) -> RatFn {
    RatFn::atom(ch.resolve(name).unwrap())
}

const INDEP: [&str; 3] = ["x", "y", "z"];
const DEP: [&str; 3] = ["u", "v", "w"];

/// A random valid system with `n, m ≤ 3` and right sides of degree at most
/// two in the admissible variables.
pub fn random_system(seed: u64) -> ReducedCNF {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=3);
    let m = rng.gen_range(1..=3);
    let chart = Chart::new(&INDEP[..n], &DEP[..m], 1);
    // Upward-closed principal sets are the typical shape of involutive systems.
    let closed = rng.gen_bool(0.6);
    let mut principal = vec![vec![false; n]; m];
    for a in 0..m {
        if closed {
            let from = rng.gen_range(0..=n);
            for k in from..n {
                principal[a][k] = true;
            }
        } else {
            for k in 0..n {
                principal[a][k] = rng.gen_bool(0.5);
            }
        }
    }
    let linear = rng.gen_bool(0.5);
    let mut triples = Vec::new();
    for a in 0..m {
        for k in 0..n {
            if !principal[a][k] {
                continue;
            }
            let mut vars: Vec<Coordinate> = Vec::new();
            if rng.gen_bool(0.5) {
                vars.extend((0..n).map(Coordinate::Indep));
                vars.extend((0..m).map(|b| chart.u(b)));
            }
            for l in 0..=k {
                for b in 0..m {
                    if !principal[b][l] {
                        vars.push(chart.first(b, l));
                    }
                }
            }
            let mut phi = RatFn::zero();
            let terms = rng.gen_range(0..=3);
            for _ in 0..terms {
                if vars.is_empty() {
                    break;
                }
                let c = rng.gen_range(-3..=3);
                let mut t = RatFn::constant(rat(c));
                let deg = if linear { 1 } else { rng.gen_range(0..=2) };
                for _ in 0..deg {
                    let v = &vars[rng.gen_range(0..vars.len())];
                    t = t.mul(&RatFn::coord(v.clone()));
                }
                phi = phi.add(&t);
            }
            triples.push((a, k, phi));
        }
    }
    ReducedCNF::from_triples(chart, triples)
}

/// Whether `(α,k) ∈ B` implies `(α,l) ∈ B` for all `l > k`, the shape of the
/// principal set in δ-regular coordinates.
pub fn upward_closed(sys: &ReducedCNF) -> bool {
    (0..sys.m()).all(|a| (1..sys.n()).all(|k| !sys.is_principal(a, k - 1) || sys.is_principal(a, k)))
}

/// The first `count` upward-closed systems of the random corpus.
pub fn delta_regular_corpus(count: usize) -> Vec<(u64, ReducedCNF)> {
    (0..)
        .map(|seed| (seed, random_system(seed)))
        .filter(|(_, s)| upward_closed(s))
        .take(count)
        .collect()
}

type Field = BTreeMap<Coordinate, RatFn>;

fn lie_bracket(coords: &[Coordinate], a: &Field, b: &Field) -> Field {
    let mut out = Field::new();
    for c in coords {
        let mut v = RatFn::zero();
        for d in coords {
            if let Some(ad) = a.get(d) {
                v = v.add(&ad.mul(&b.get(c).map(|f| f.diff(d)).unwrap_or_else(RatFn::zero)));
            }
            if let Some(bd) = b.get(d) {
                v = v.sub(&bd.mul(&a.get(c).map(|f| f.diff(d)).unwrap_or_else(RatFn::zero)));
            }
        }
        if !v.is_zero() {
            out.insert(c.clone(), v);
        }
    }
    out
}

/// `Θ` and `Ξ` read off from Lie brackets of the push-forwards of `X̄_i` and
/// `Ȳ_k` into the first jet bundle, built here from scratch.
pub fn structure_oracle(sys: &ReducedCNF) -> (BTreeMap<(usize, usize), Vec<RatFn>>, Vec<Vec<Vec<RatFn>>>) {
    let ch = &sys.chart;
    let (n, m) = (sys.n(), sys.m());
    let coords = ch.coordinates();
    let total = |i: usize, f: &RatFn| {
        let mut v = f.diff(&Coordinate::Indep(i));
        for b in 0..m {
            v = v.add(&RatFn::coord(ch.first(b, i)).mul(&f.diff(&ch.u(b))));
        }
        v
    };
    let mut xs = Vec::new();
    for i in 0..n {
        let mut f = Field::new();
        f.insert(Coordinate::Indep(i), RatFn::one());
        for a in 0..m {
            f.insert(ch.u(a), RatFn::coord(ch.first(a, i)));
        }
        for e in &sys.equations {
            f.insert(Coordinate::Jet(e.lhs.clone()), total(i, &e.rhs));
        }
        xs.push(f);
    }
    let mut ys = Vec::new();
    for (b, h) in sys.parametric() {
        let mut f = Field::new();
        f.insert(ch.first(b, h), RatFn::one());
        for e in &sys.equations {
            f.insert(Coordinate::Jet(e.lhs.clone()), e.rhs.diff(&ch.first(b, h)));
        }
        ys.push(f);
    }
    let restrict = |f: &RatFn| sys.restrict(f).unwrap();
    let vertical = |f: &Field| -> Vec<RatFn> { (0..m).map(|a| restrict(f.get(&ch.u(a)).unwrap_or(&RatFn::zero()))).collect() };
    let mut theta = BTreeMap::new();
    for j in 0..n {
        for i in 0..j {
            theta.insert((i, j), vertical(&lie_bracket(&coords, &xs[i], &xs[j])));
        }
    }
    let xi = (0..n)
        .map(|i| {
            let cols: Vec<Vec<RatFn>> = ys.iter().map(|y| vertical(&lie_bracket(&coords, &xs[i], y))).collect();
            (0..m).map(|a| cols.iter().map(|c| c[a].clone()).collect()).collect()
        })
        .collect();
    (theta, xi)
}

/// A random expression tree over `x1, x2, x3` with small rational constants.
pub fn random_expr(rng: &mut ChaCha8Rng, depth: u32) -> Expr {
    if depth == 0 || rng.gen_bool(0.3) {
        return if rng.gen_bool(0.6) {
            Expr::Atom(Atom::Coord(Coordinate::Indep(rng.gen_range(0..3))))
        } else {
            Expr::Const(vessiot::scalar::ratio(rng.gen_range(-5..=5), rng.gen_range(1..=4)))
        };
    }
    let op = rng.gen_range(0..5);
    let k = rng.gen_range(-2..=3);
    let mut sub = || random_expr(rng, depth - 1);
    match op {
        0 => Expr::Sum(vec![sub(), sub()]),
        1 => Expr::Product(vec![sub(), sub()]),
        2 => Expr::Quotient(Box::new(sub()), Box::new(sub())),
        3 => Expr::Pow(Box::new(sub()), k),
        _ => Expr::Sum(vec![sub(), sub().neg()]),
    }
}
