use serde::{Deserialize, Serialize};

use super::multiindex::{JetVar, MultiIndex};
use crate::expr::{Atom, Coordinate, Names};

/// Coordinate names and sizes of a jet bundle chart `J_q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chart {
    pub indep: Vec<String>,
    pub dep: Vec<String>,
    /// Symbolic constants allowed in expressions.
    pub params: Vec<String>,
    pub order: u32,
}

impl Chart {
    pub fn new(indep: &[&str], dep: &[&str], order: u32) -> Self {
        Chart {
            indep: indep.iter().map(|s| s.to_string()).collect(),
            dep: dep.iter().map(|s| s.to_string()).collect(),
            params: Vec::new(),
            order,
        }
    }

    pub fn with_params(mut self, params: &[&str]) -> Self {
        self.params = params.iter().map(|s| s.to_string()).collect();
        self
    }

    pub fn n(&self) -> usize {
        self.indep.len()
    }

    pub fn m(&self) -> usize {
        self.dep.len()
    }

    pub fn with_order(&self, order: u32) -> Chart {
        Chart {
            order,
            ..self.clone()
        }
    }

    pub fn x(&self, i: usize) -> Coordinate {
        Coordinate::Indep(i)
    }

    pub fn u(&self, alpha: usize) -> Coordinate {
        Coordinate::dep(alpha, self.n())
    }

    pub fn jet(&self, alpha: usize, mu: MultiIndex) -> Coordinate {
        Coordinate::jet(alpha, mu)
    }

    /// First-order coordinate `u^α_i`.
    pub fn first(&self, alpha: usize, i: usize) -> Coordinate {
        Coordinate::first(alpha, i, self.n())
    }

    /// Jet variables of exactly order `k`, in descending ranking.
    pub fn jets_of_order(&self, k: u32) -> Vec<JetVar> {
        let mut out: Vec<JetVar> = MultiIndex::all_of_order(self.n(), k)
            .into_iter()
            .flat_map(|mu| (0..self.m()).map(move |a| JetVar::new(a, mu.clone())))
            .collect();
        out.sort_by(|a, b| b.rank_cmp(a));
        out
    }

    /// All coordinates of `J_q`: independent variables first, then jets by
    /// ascending order.
    pub fn coordinates(&self) -> Vec<Coordinate> {
        let mut out: Vec<Coordinate> = (0..self.n()).map(Coordinate::Indep).collect();
        for k in 0..=self.order {
            let mut layer = self.jets_of_order(k);
            layer.reverse();
            out.extend(layer.into_iter().map(Coordinate::Jet));
        }
        out
    }

    pub fn jet_name(&self, j: &JetVar) -> String {
        let mut s = self.dep[j.alpha].clone();
        if !j.mu.is_zero() {
            s.push('_');
            for (i, k) in j.mu.counts().iter().enumerate() {
                for _ in 0..*k {
                    s.push_str(&self.indep[i]);
                }
            }
        }
        s
    }

    /// Splits a derivative suffix such as `xyy` into independent variables,
    /// taking the longest matching name at each position.
    pub fn parse_suffix(&self, suffix: &str) -> Result<MultiIndex, String> {
        let mut counts = vec![0u32; self.n()];
        let mut rest = suffix;
        while !rest.is_empty() {
            let best = self
                .indep
                .iter()
                .enumerate()
                .filter(|(_, name)| rest.starts_with(name.as_str()))
                .max_by_key(|(_, name)| name.len());
            match best {
                Some((i, name)) => {
                    counts[i] += 1;
                    rest = &rest[name.len()..];
                }
                None => return Err(format!("malformed derivative suffix `{suffix}`")),
            }
        }
        if counts.iter().all(|&c| c == 0) {
            return Err("empty derivative suffix".into());
        }
        Ok(MultiIndex::new(counts))
    }

    /// Resolves an identifier to an atom: independent or dependent variable,
    /// jet coordinate `u_xy`, or declared parameter.
    pub fn resolve(&self, name: &str) -> Result<Atom, String> {
        if let Some(i) = self.indep.iter().position(|s| s == name) {
            return Ok(Atom::Coord(Coordinate::Indep(i)));
        }
        if let Some(a) = self.dep.iter().position(|s| s == name) {
            return Ok(Atom::Coord(self.u(a)));
        }
        if self.params.iter().any(|s| s == name) {
            return Ok(Atom::Param(name.to_string()));
        }
        let mut last_err = None;
        for (pos, _) in name.match_indices('_') {
            let (head, tail) = (&name[..pos], &name[pos + 1..]);
            if let Some(a) = self.dep.iter().position(|s| s == head) {
                match self.parse_suffix(tail) {
                    Ok(mu) => return Ok(Atom::Coord(Coordinate::jet(a, mu))),
                    Err(e) => last_err = Some(e),
                }
            }
        }
        Err(last_err.unwrap_or_else(|| format!("unknown identifier `{name}`")))
    }
}

impl Names for Chart {
    fn coordinate(&self, c: &Coordinate) -> String {
        match c {
            Coordinate::Indep(i) => self.indep[*i].clone(),
            Coordinate::Jet(j) => self.jet_name(j),
        }
    }

    fn n(&self) -> usize {
        self.indep.len()
    }
}
