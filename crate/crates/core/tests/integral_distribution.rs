mod common;

use std::collections::BTreeMap;

use common::sym;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vessiot::connection::{build_family, Options};
use vessiot::expr::{Atom, Coordinate, RatFn, ZetaAtom, ZetaVar};
use vessiot::jet::{Chart, VectorField};
use vessiot::scalar::{rat, ratio, Rational};
use vessiot::system::ReducedCNF;
use vessiot::vessiot::reference_complement;

fn wave() -> ReducedCNF {
    let ch = Chart::new(&["x", "t"], &["u", "v", "w"], 1);
    let s = |n: &str| sym(&ch, n);
    ReducedCNF::from_triples(ch.clone(), vec![(0, 1, s("v")), (1, 1, s("w_x")), (2, 1, s("v_x")), (0, 0, s("w"))])
}

fn zeta(v: ZetaVar) -> Atom {
    Atom::Zeta(ZetaAtom { var: v, partials: vec![] })
}

/// Part of `v` outside `span{X̄, Ȳ}`.
fn outside_vessiot(sys: &ReducedCNF, v: &VectorField) -> VectorField {
    let mut rest = v.clone();
    for (i, x) in reference_complement(sys).iter().enumerate() {
        let r = rest.component(&Coordinate::Indep(i));
        rest = rest.sub(&x.scale(&r));
    }
    for (b, h) in sys.parametric() {
        rest.set(sys.chart.first(b, h), RatFn::zero());
    }
    rest
}

fn value_at(f: &RatFn, p: &BTreeMap<Atom, Rational>) -> Rational {
    f.eval::<Rational>(&|a: &Atom| p.get(a).cloned()).unwrap()
}

/// Specialises the free unknowns and returns `[U_1, U_2]`.
fn bracket_with(sys: &ReducedCNF, free: &[(ZetaVar, RatFn)]) -> VectorField {
    let out = build_family(sys, &Options::default()).unwrap();
    let fam = out.family().expect("wave family");
    let binds: BTreeMap<Atom, RatFn> = free.iter().map(|(v, f)| (zeta(*v), f.clone())).collect();
    assert_eq!(fam.free.len(), binds.len());
    let u: Vec<VectorField> = fam.fields.iter().map(|f| f.map_coeffs(|c| c.subst(&binds)).unwrap()).collect();
    u[0].bracket(&u[1])
}

#[test]
fn solution_family_is_an_integral_distribution() {
    let sys = wave();
    let ch = sys.chart.clone();
    // v = (x+t)³ − (x−t)³, w = (x+t)³ + (x−t)³ give v_xx = 12t, w_xx = 12x.
    let free = [
        (ZetaVar::new(0, 1, 0), sym(&ch, "t").scale(&rat(12))),
        (ZetaVar::new(0, 2, 0), sym(&ch, "x").scale(&rat(12))),
    ];
    let br = bracket_with(&sys, &free);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let atoms: Vec<Atom> = ch.coordinates().into_iter().map(Atom::Coord).collect();
    for _ in 0..10 {
        let p: BTreeMap<Atom, Rational> = atoms.iter().map(|a| (a.clone(), ratio(rng.gen_range(-30..=30), rng.gen_range(1..=5)))).collect();
        let rest = outside_vessiot(&sys, &br);
        assert!(rest.components().all(|(_, c)| value_at(c, &p).is_zero()));
        // The differential conditions hold, so the distribution is even flat.
        assert!(br.components().all(|(_, c)| value_at(c, &p).is_zero()));
    }
}

#[test]
fn violating_the_differential_conditions_loses_flatness_only() {
    let sys = wave();
    let ch = sys.chart.clone();
    let free = [
        (ZetaVar::new(0, 1, 0), sym(&ch, "x").scale(&rat(12))),
        (ZetaVar::new(0, 2, 0), sym(&ch, "x").scale(&rat(12))),
    ];
    let br = bracket_with(&sys, &free);
    assert!(outside_vessiot(&sys, &br).is_zero());
    assert!(!br.is_zero());
}
