//! Vessiot distribution: generators, reference complement, symbol fields and
//! the extended structure coefficients.

use std::collections::BTreeMap;

use crate::expr::{Atom, Coordinate, ExprError, Names, RatFn};
use crate::jet::{contact_field, vertical_field, Chart, JetVar, VectorField};
use crate::linalg::{nullspace, rref, Label, SymMatrix};
use crate::system::{ImplicitSystem, ReducedCNF};

/// `X̄_i = ∂_{x̄^i} + Σ_α φ̃^α_i ∂_{ū^α}` in the barred chart of `R_1`.
pub fn reference_complement(sys: &ReducedCNF) -> Vec<VectorField> {
    (0..sys.n())
        .map(|i| {
            let mut v = VectorField::partial(Coordinate::Indep(i));
            for a in 0..sys.m() {
                v.set(sys.chart.u(a), sys.phi_tilde(a, i));
            }
            v
        })
        .collect()
}

/// `Ȳ^β_h = ∂_{ū^β_h}` for parametric `(β,h)`, in the order of
/// [`ReducedCNF::parametric`].
pub fn symbol_fields(sys: &ReducedCNF) -> Vec<VectorField> {
    sys.parametric()
        .into_iter()
        .map(|(b, h)| VectorField::partial(sys.chart.first(b, h)))
        .collect()
}

/// `ι_*X̄_i = C_i^{(1)} + Σ_{(α,k)∈B} C_i^{(1)}(φ^α_k) ∂_{u^α_k}`, restricted.
pub fn ambient_complement(sys: &ReducedCNF, i: usize) -> Result<VectorField, ExprError> {
    let mut v = contact_field(&sys.chart, i, 1);
    for (a, k) in sys.principal_pairs().collect::<Vec<_>>() {
        let phi = sys.phi(a, k).unwrap();
        v.set(sys.chart.first(a, k), sys.c1(i, phi));
    }
    v.map_coeffs(|f| sys.restrict(f))
}

/// `ι_*Ȳ^β_h = ∂_{u^β_h} + Σ_{(α,k)∈B} C^h_β(φ^α_k) ∂_{u^α_k}`.
pub fn ambient_symbol_field(sys: &ReducedCNF, beta: usize, h: usize) -> VectorField {
    let mut v = VectorField::partial(sys.chart.first(beta, h));
    for (a, k) in sys.principal_pairs().collect::<Vec<_>>() {
        let phi = sys.phi(a, k).unwrap();
        v.set(sys.chart.first(a, k), sys.ch(h, beta, phi));
    }
    v
}

/// Checks that the push-forwards annihilate every `Φ^α_k` on `R_1`.
pub fn ambient_tangency(sys: &ReducedCNF) -> Result<bool, ExprError> {
    let imp = sys.to_implicit();
    let mut fields = Vec::new();
    for i in 0..sys.n() {
        fields.push(ambient_complement(sys, i)?);
    }
    for (b, h) in sys.parametric() {
        fields.push(ambient_symbol_field(sys, b, h));
    }
    for f in &fields {
        for phi in &imp.equations {
            if !sys.restrict(&f.apply(phi))?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `Θ^α_{ij} = C_i^{(1)}(φ̃^α_j) − C_j^{(1)}(φ̃^α_i)` on `R_1`.
pub fn theta(sys: &ReducedCNF, i: usize, j: usize) -> Result<Vec<RatFn>, ExprError> {
    assert!(i < j, "theta needs i < j");
    (0..sys.m())
        .map(|a| {
            let v = sys.c1(i, &sys.phi_tilde(a, j)).sub(&sys.c1(j, &sys.phi_tilde(a, i)));
            sys.restrict(&v)
        })
        .collect()
}

/// `Ξ^α_{i,(β,h)} = −C^h_β(φ̃^α_i)`: rows by `α`, columns by parametric pair.
pub fn xi(sys: &ReducedCNF, i: usize) -> Result<SymMatrix, ExprError> {
    let cols = sys.parametric();
    let mut rows = Vec::new();
    for a in 0..sys.m() {
        let phi = sys.phi_tilde(a, i);
        let mut row = Vec::new();
        for &(b, h) in &cols {
            row.push(sys.restrict(&sys.ch(h, b, &phi).neg())?);
        }
        rows.push(row);
    }
    Ok(SymMatrix::from_rows(rows, cols.len()).with_labels(
        (0..sys.m()).map(Label::Index).collect(),
        cols.iter().map(|&(b, h)| Label::Jet(first_jet(sys, b, h))).collect(),
    ))
}

fn first_jet(sys: &ReducedCNF, b: usize, h: usize) -> JetVar {
    sys.chart.first(b, h).as_jet().unwrap().clone()
}

#[derive(Clone, Debug)]
pub struct StructureCoefficients {
    /// `Θ_{ij}` for `i < j`.
    pub theta: BTreeMap<(usize, usize), Vec<RatFn>>,
    pub xi: Vec<SymMatrix>,
    pub columns: Vec<(usize, usize)>,
}

impl StructureCoefficients {
    pub fn new(sys: &ReducedCNF) -> Result<Self, ExprError> {
        let mut th = BTreeMap::new();
        for j in 0..sys.n() {
            for i in 0..j {
                th.insert((i, j), theta(sys, i, j)?);
            }
        }
        let xis = (0..sys.n()).map(|i| xi(sys, i)).collect::<Result<_, _>>()?;
        Ok(StructureCoefficients {
            theta: th,
            xi: xis,
            columns: sys.parametric(),
        })
    }

    fn cols_of_class(&self, h: usize) -> Vec<usize> {
        (0..self.columns.len()).filter(|&c| self.columns[c].1 == h).collect()
    }

    /// `[Ξ_i]^h`: the columns of class `h`.
    pub fn upper_block(&self, i: usize, h: usize) -> SymMatrix {
        self.xi[i].select_cols(&self.cols_of_class(h))
    }

    /// `[Ξ_i]_h`: rows `α` with `(α,i) ∉ B`, columns of class `h`.
    pub fn lower_block(&self, sys: &ReducedCNF, i: usize, h: usize) -> SymMatrix {
        let rows: Vec<Vec<RatFn>> = sys
            .nonprincipal_in_class(i)
            .into_iter()
            .map(|a| self.xi[i].row(a).to_vec())
            .collect();
        SymMatrix::from_rows(rows, self.columns.len()).select_cols(&self.cols_of_class(h))
    }

    /// `[Ξ_i]^h = 0` for `h > i`, `[Ξ_i]_i = −1`, `[Ξ_i]_h = 0` otherwise.
    pub fn block_structure_holds(&self, sys: &ReducedCNF) -> bool {
        for i in 0..sys.n() {
            for h in 0..sys.n() {
                if h > i && !self.upper_block(i, h).is_zero() {
                    return false;
                }
                let low = self.lower_block(sys, i, h);
                for r in 0..low.rows() {
                    for c in 0..low.cols() {
                        let want = if h == i && r == c { RatFn::int(-1) } else { RatFn::zero() };
                        if *low.get(r, c) != want {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureCheck {
    pub passes: bool,
    pub discrepancies: Vec<String>,
}

/// Removes the part of `v` lying in `span{X̄, Ȳ}`; zero iff `v` is in the span.
fn modulo_span(sys: &ReducedCNF, xbar: &[VectorField], v: &VectorField) -> VectorField {
    let mut rest = v.clone();
    for (i, x) in xbar.iter().enumerate() {
        let r = rest.component(&Coordinate::Indep(i));
        if !r.is_zero() {
            rest = rest.sub(&x.scale(&r));
        }
    }
    for (b, h) in sys.parametric() {
        rest.set(sys.chart.first(b, h), RatFn::zero());
    }
    rest
}

/// Compares Lie brackets of the basis with the closed-form `Θ` and `Ξ`.
pub fn verify_structure_equations(sys: &ReducedCNF) -> Result<StructureCheck, ExprError> {
    let sc = StructureCoefficients::new(sys)?;
    let xbar = reference_complement(sys);
    let ybar = symbol_fields(sys);
    let vertical = |coeffs: &[RatFn]| VectorField::from_pairs(coeffs.iter().enumerate().map(|(a, c)| (sys.chart.u(a), c.clone())));
    let mut discrepancies = Vec::new();
    let names = &sys.chart;
    for j in 0..sys.n() {
        for i in 0..j {
            let br = xbar[i].bracket(&xbar[j]).map_coeffs(|f| sys.restrict(f))?;
            let rest = modulo_span(sys, &xbar, &br.sub(&vertical(&sc.theta[&(i, j)])));
            if !rest.is_zero() {
                discrepancies.push(format!("[X{}, X{}]: {}", i + 1, j + 1, rest.display(names)));
            }
        }
    }
    for (i, x) in xbar.iter().enumerate() {
        for (k, y) in ybar.iter().enumerate() {
            let col = sc.xi[i].column(k);
            let br = x.bracket(y).map_coeffs(|f| sys.restrict(f))?;
            let rest = modulo_span(sys, &xbar, &br.sub(&vertical(&col)));
            if !rest.is_zero() {
                discrepancies.push(format!("[X{}, Y{}]: {}", i + 1, k + 1, rest.display(names)));
            }
        }
    }
    for (k, a) in ybar.iter().enumerate() {
        for (l, b) in ybar.iter().enumerate().skip(k + 1) {
            if !a.bracket(b).is_zero() {
                discrepancies.push(format!("[Y{}, Y{}] does not vanish", k + 1, l + 1));
            }
        }
    }
    Ok(StructureCheck {
        passes: discrepancies.is_empty(),
        discrepancies,
    })
}

/// Solutions `(a, b)` of `C_i^{(q)}(Φ^τ) a^i + C^μ_α(Φ^τ) b^α_μ = 0`.
#[derive(Clone, Debug)]
pub struct ImplicitGenerators {
    /// `a^i C_i^{(q)} + b^α_μ C^μ_α` in the ambient chart; transversal ones first.
    pub fields: Vec<VectorField>,
    pub transversal: Vec<bool>,
    /// Pivots of the elimination; the basis is valid where none vanishes.
    pub caveats: Vec<RatFn>,
    /// For systems in solved form: the fields pulled back to the equation,
    /// with the leaders eliminated.
    pub barred: Option<Vec<VectorField>>,
}

pub fn implicit_vessiot_generators(sys: &ImplicitSystem) -> Result<ImplicitGenerators, ExprError> {
    let chart: &Chart = &sys.chart;
    let q = chart.order;
    let verticals = chart.jets_of_order(q);
    let transversals: Vec<VectorField> = (0..chart.n()).map(|i| contact_field(chart, i, q)).collect();
    let rows: Vec<Vec<RatFn>> = sys
        .equations
        .iter()
        .map(|phi| {
            let mut row: Vec<RatFn> = verticals.iter().map(|j| phi.diff(&Coordinate::Jet(j.clone()))).collect();
            row.extend(transversals.iter().map(|c| c.apply(phi)));
            row
        })
        .collect();
    let nv = verticals.len();
    let mat = SymMatrix::from_rows(rows, nv + chart.n());
    let caveats: Vec<RatFn> = rref(&mat).trace.into_iter().filter(|t| !t.is_constant()).collect();
    let mut basis = nullspace(&mat);
    // Transversal generators first, in the order of the free `a^i`.
    basis.sort_by_key(|v| {
        let first_a = (nv..v.len()).find(|&c| !v[c].is_zero());
        (first_a.is_none(), first_a)
    });
    let mut fields = Vec::new();
    let mut transversal = Vec::new();
    for v in &basis {
        let mut f = VectorField::zero();
        for (k, j) in verticals.iter().enumerate() {
            if !v[k].is_zero() {
                f = f.add(&vertical_field(j.alpha, j.mu.clone()).scale(&v[k]));
            }
        }
        let mut is_t = false;
        for (i, c) in transversals.iter().enumerate() {
            if !v[nv + i].is_zero() {
                is_t = true;
                f = f.add(&c.scale(&v[nv + i]));
            }
        }
        fields.push(f);
        transversal.push(is_t);
    }
    let barred = match sys.solved_form() {
        Some(sf) => Some(fields.iter().map(|f| f.restrict(&sf.bindings)).collect::<Result<Vec<_>, _>>()?),
        None => None,
    };
    Ok(ImplicitGenerators {
        fields,
        transversal,
        caveats,
        barred,
    })
}

/// Renders a list of fields one per line.
pub fn display_fields(fields: &[VectorField], names: &dyn Names) -> Vec<String> {
    fields.iter().map(|f| f.display(names)).collect()
}

/// The atom of a jet coordinate.
pub fn jet_atom(j: &JetVar) -> Atom {
    Atom::Coord(Coordinate::Jet(j.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rank_generic;
    use crate::scalar::rat;

    fn sym(ch: &Chart, name: &str) -> RatFn {
        RatFn::atom(ch.resolve(name).unwrap())
    }

    fn wave(with_condition: bool) -> ReducedCNF {
        let ch = Chart::new(&["x", "t"], &["u", "v", "w"], 1);
        let mut t = vec![(0, 1, sym(&ch, "v")), (1, 1, sym(&ch, "w_x")), (0, 0, sym(&ch, "w"))];
        if with_condition {
            t.push((2, 1, sym(&ch, "v_x")));
        }
        ReducedCNF::from_triples(ch, t)
    }

    fn qm(rows: &[&[i64]]) -> Vec<Vec<RatFn>> {
        rows.iter().map(|r| r.iter().map(|&v| RatFn::int(v)).collect()).collect()
    }

    #[test]
    fn wave_complement() {
        let s = wave(true);
        let x = reference_complement(&s);
        assert_eq!(x[0].display(&s.chart), "d_x + w*d_u + v_x*d_v + w_x*d_w");
        assert_eq!(x[1].display(&s.chart), "d_t + v*d_u + w_x*d_v + v_x*d_w");
        assert!(ambient_tangency(&s).unwrap());
    }

    #[test]
    fn wave_structure_coefficients() {
        let s = wave(true);
        let sc = StructureCoefficients::new(&s).unwrap();
        assert_eq!(sc.xi[0].row_vecs(), qm(&[&[0, 0], &[-1, 0], &[0, -1]]));
        assert_eq!(sc.xi[1].row_vecs(), qm(&[&[0, 0], &[0, -1], &[-1, 0]]));
        assert!(sc.theta[&(0, 1)].iter().all(RatFn::is_zero));
        assert!(sc.block_structure_holds(&s));
        assert_eq!(rank_generic(&sc.xi[0]).unwrap().rank, 2);
        let both = sc.xi[0].hstack(&sc.xi[1]);
        assert_eq!(rank_generic(&both).unwrap().rank, 2);
        assert!(verify_structure_equations(&s).unwrap().passes);

        let r = wave(false);
        let th = theta(&r, 0, 1).unwrap();
        assert_eq!(th[0], sym(&r.chart, "v_x").sub(&sym(&r.chart, "w_t")));
        assert!(th[1].is_zero() && th[2].is_zero());
        assert!(verify_structure_equations(&r).unwrap().passes);
    }

    #[test]
    fn wave_bracket_with_symbol_field() {
        let s = wave(true);
        let x = reference_complement(&s);
        let y = symbol_fields(&s);
        assert_eq!(x[0].bracket(&y[0]), VectorField::partial(s.chart.u(1)).scale(&RatFn::int(-1)));
        assert_eq!(x[1].bracket(&y[0]), VectorField::partial(s.chart.u(2)).scale(&RatFn::int(-1)));
    }

    #[test]
    fn trivial_system_complement() {
        let ch = Chart::new(&["x", "t"], &["u"], 1);
        let s = ReducedCNF::from_triples(ch, vec![(0, 0, RatFn::zero()), (0, 1, RatFn::zero())]);
        let x = reference_complement(&s);
        assert_eq!(x[0], VectorField::partial(Coordinate::Indep(0)));
        assert_eq!(x[1], VectorField::partial(Coordinate::Indep(1)));
        assert!(symbol_fields(&s).is_empty());
    }

    #[test]
    fn circle_generator() {
        let ch = Chart::new(&["x"], &["u"], 1);
        let (x, u, up) = (sym(&ch, "x"), sym(&ch, "u"), sym(&ch, "u_x"));
        let phi = up.mul(&up).add(&u.mul(&u)).add(&x.mul(&x)).sub(&RatFn::one());
        let g = implicit_vessiot_generators(&ImplicitSystem::new(ch.clone(), vec![phi])).unwrap();
        assert_eq!(g.fields.len(), 1);
        assert!(g.transversal[0]);
        let scaled = g.fields[0].scale(&up);
        let want = VectorField::from_pairs([
            (Coordinate::Indep(0), up.clone()),
            (ch.u(0), up.mul(&up)),
            (ch.first(0, 0), x.add(&up.mul(&u)).neg()),
        ]);
        assert_eq!(scaled, want);
        assert_eq!(g.caveats, vec![up.scale(&rat(2))]);
    }

    #[test]
    fn linear_solved_generators_match_complement() {
        let s = wave(true);
        let g = implicit_vessiot_generators(&s.to_implicit()).unwrap();
        let barred = g.barred.unwrap();
        let x = reference_complement(&s);
        let y = symbol_fields(&s);
        assert_eq!(barred.len(), x.len() + y.len());
        assert_eq!(&barred[..2], &x[..]);
        assert_eq!(barred[2..].iter().filter(|b| y.contains(b)).count(), y.len());
    }
}
