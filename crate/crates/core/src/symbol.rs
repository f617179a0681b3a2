//! Symbol matrices, their echelon indices, and Cartan's test.

use serde::Serialize;

use crate::expr::{Coordinate, RatFn};
use crate::jet::{Chart, JetVar};
use crate::linalg::{rank_generic_seeded, Label, LinalgError, SymMatrix, DEFAULT_SEED};
use crate::system::ImplicitSystem;

#[derive(Clone, Debug)]
pub struct SymbolData {
    pub order: u32,
    /// Top-order jets, in descending ranking.
    pub columns: Vec<JetVar>,
    pub matrix: SymMatrix,
    pub rank: usize,
    pub pivots: Vec<JetVar>,
    /// `β_q^{(k)}`, indexed by zero-based class.
    pub betas: Vec<usize>,
    pub dim: usize,
    pub caveats: Vec<RatFn>,
}

impl SymbolData {
    /// Each pivot with its multiplicative variables `x^1..x^k`.
    pub fn multiplicative(&self) -> Vec<(JetVar, Vec<usize>)> {
        self.pivots
            .iter()
            .map(|p| {
                let k = p.class().unwrap_or(0);
                (p.clone(), (0..=k).collect())
            })
            .collect()
    }

    /// `Σ_k k·β_q^{(k)}` with one-based classes.
    pub fn weighted_sum(&self) -> usize {
        self.betas.iter().enumerate().map(|(k, b)| (k + 1) * b).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CartanTest {
    pub passes: bool,
    pub rank_next: usize,
    pub weighted_sum: usize,
    pub betas: Vec<usize>,
}

fn top_order_matrix(chart: &Chart, equations: &[RatFn]) -> (Vec<JetVar>, SymMatrix) {
    let columns = chart.jets_of_order(chart.order);
    let mut rows: Vec<(usize, usize, Vec<RatFn>)> = equations
        .iter()
        .enumerate()
        .map(|(t, phi)| {
            let row: Vec<RatFn> = columns.iter().map(|j| phi.diff(&Coordinate::Jet(j.clone()))).collect();
            let lead = row.iter().position(|e| !e.is_zero()).unwrap_or(usize::MAX);
            (lead, t, row)
        })
        .collect();
    rows.sort_by_key(|(lead, _, _)| *lead);
    let labels = rows.iter().map(|(_, t, _)| Label::Index(*t)).collect();
    let m = SymMatrix::from_rows(rows.into_iter().map(|(_, _, r)| r).collect(), columns.len())
        .with_labels(labels, columns.iter().cloned().map(Label::Jet).collect());
    (columns, m)
}

pub fn symbol_matrix(sys: &ImplicitSystem) -> Result<SymbolData, LinalgError> {
    symbol_matrix_seeded(sys, DEFAULT_SEED)
}

/// `M_q` with entries `∂Φ^τ/∂u^α_μ`, `|μ| = q`, and its generic echelon data.
pub fn symbol_matrix_seeded(sys: &ImplicitSystem, seed: u64) -> Result<SymbolData, LinalgError> {
    let (columns, matrix) = top_order_matrix(&sys.chart, &sys.equations);
    let r = rank_generic_seeded(&matrix, seed)?;
    let pivots: Vec<JetVar> = r.echelon.pivot_columns().into_iter().map(|c| columns[c].clone()).collect();
    let mut betas = vec![0; sys.chart.n()];
    for p in &pivots {
        if let Some(k) = p.class() {
            betas[k] += 1;
        }
    }
    Ok(SymbolData {
        order: sys.chart.order,
        dim: columns.len() - r.rank,
        columns,
        matrix,
        rank: r.rank,
        pivots,
        betas,
        caveats: r.caveats,
    })
}

pub fn cartan_test(sys: &ImplicitSystem) -> Result<CartanTest, LinalgError> {
    cartan_test_seeded(sys, DEFAULT_SEED)
}

/// Compares `rank M_{q+1}` of the prolonged system with `Σ k·β_q^{(k)}`.
pub fn cartan_test_seeded(sys: &ImplicitSystem, seed: u64) -> Result<CartanTest, LinalgError> {
    let s = symbol_matrix_seeded(sys, seed)?;
    let next = symbol_matrix_seeded(&sys.prolong(), seed)?;
    let weighted_sum = s.weighted_sum();
    Ok(CartanTest {
        passes: next.rank == weighted_sum,
        rank_next: next.rank,
        weighted_sum,
        betas: s.betas,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::ReducedCNF;

    fn sym(ch: &Chart, name: &str) -> RatFn {
        RatFn::atom(ch.resolve(name).unwrap())
    }

    fn wave() -> ReducedCNF {
        let ch = Chart::new(&["x", "t"], &["u", "v", "w"], 1);
        let t = vec![
            (0, 1, sym(&ch, "v")),
            (1, 1, sym(&ch, "w_x")),
            (2, 1, sym(&ch, "v_x")),
            (0, 0, sym(&ch, "w")),
        ];
        ReducedCNF::from_triples(ch, t)
    }

    #[test]
    fn wave_symbol() {
        let s = symbol_matrix(&wave().to_implicit()).unwrap();
        assert_eq!(s.betas, vec![1, 3]);
        assert_eq!(s.dim, 2);
        assert_eq!(s.betas, wave().betas());
        let c = cartan_test(&wave().to_implicit()).unwrap();
        assert!(c.passes);
        assert_eq!((c.rank_next, c.weighted_sum), (7, 7));
    }

    #[test]
    fn characteristic_coordinates_fail() {
        let ch = Chart::new(&["x", "y"], &["u"], 2);
        let sys = ImplicitSystem::new(ch.clone(), vec![sym(&ch, "u_xy")]);
        let c = cartan_test(&sys).unwrap();
        assert!(!c.passes);
        assert_eq!((c.rank_next, c.weighted_sum), (2, 1));
        assert_eq!(c.betas, vec![1, 0]);
    }

    #[test]
    fn helmholtz_pair_symbol() {
        let ch = Chart::new(&["x", "y"], &["u"], 2).with_params(&["alpha", "beta"]);
        let s = |n: &str| sym(&ch, n);
        let sys = ImplicitSystem::new(
            ch.clone(),
            vec![s("u_xx").sub(&s("alpha").mul(&s("u"))), s("u_yy").sub(&s("beta").mul(&s("u")))],
        );
        let d = symbol_matrix(&sys).unwrap();
        assert_eq!(d.dim, 1);
        let c = cartan_test(&sys).unwrap();
        assert!(!c.passes);
        assert_eq!((c.rank_next, c.weighted_sum), (4, 3));
    }

    #[test]
    fn rows_sorted_by_leading_column() {
        let ch = Chart::new(&["x", "y"], &["u"], 1);
        let sys = ImplicitSystem::new(ch.clone(), vec![sym(&ch, "u_x"), sym(&ch, "u_y")]);
        let d = symbol_matrix(&sys).unwrap();
        assert_eq!(d.matrix.row_labels, vec![Label::Index(1), Label::Index(0)]);
        assert_eq!(d.multiplicative()[0].1, vec![0, 1]);
    }
}
