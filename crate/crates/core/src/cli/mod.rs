//! Input files, the analysis pipeline and its report.

pub mod dsl;
pub mod report;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::connection::{build_family, reduce_differential_conditions, Options, StepResult};
use crate::expr::{ratfn_to_string, Atom, Names, RatFn, ZetaVar};
use crate::involution::monster;
use crate::jet::Chart;
use crate::linalg::DEFAULT_SEED;
use crate::symbol::{cartan_test_seeded, symbol_matrix_seeded};
use crate::system::{ImplicitSystem, ReducedCNF};
use crate::vessiot::{
    implicit_vessiot_generators, reference_complement, symbol_fields, verify_structure_equations, StructureCoefficients,
};

pub use dsl::{parse, AnySystem, Diagnostic, SystemFile};
pub use report::Report;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Flags {
    pub contract: bool,
    /// Stop after this one-based step.
    pub step: Option<usize>,
    pub seed: u64,
}

impl Default for Flags {
    fn default() -> Self {
        Flags {
            contract: true,
            step: None,
            seed: DEFAULT_SEED,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum AnalyzeError {
    #[error("{}", .0.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("\n"))]
    Input(Vec<Diagnostic>),
    #[error("{section}: {message}")]
    Section { section: &'static str, message: String },
}

impl AnalyzeError {
    pub fn exit_code(&self) -> i32 {
        2
    }
}

fn in_section<T, E: std::fmt::Display>(section: &'static str, r: Result<T, E>) -> Result<T, AnalyzeError> {
    r.map_err(|e| AnalyzeError::Section {
        section,
        message: e.to_string(),
    })
}

const DELTA_NOTE: &str = "Cartan's test failed: either the symbol is not involutive or the coordinates are not \
     delta-regular; in coordinates that are not delta-regular the test always fails";
const LEMMA_NOTE: &str = "the obstructions are complete only in delta-regular coordinates, which are assumed and not verified";
const GENERIC_NOTE: &str = "ranks are generic ranks over the function field; on the zero set of a caveat the rank may drop";
const POINTWISE_NOTE: &str = "the hypothesis that the equation equals its projected prolongation is not verified";
const ONE_PASS_NOTE: &str = "eliminated differential conditions are checked with one substitution pass";

struct Ctx<'a> {
    chart: &'a Chart,
    point: BTreeMap<Atom, RatFn>,
}

impl Ctx<'_> {
    fn s(&self, e: &RatFn) -> String {
        ratfn_to_string(e, self.chart)
    }

    fn all(&self, es: &[RatFn]) -> Vec<String> {
        es.iter().map(|e| self.s(e)).collect()
    }

    fn zeta(&self, z: &ZetaVar) -> String {
        self.chart.atom(&Atom::zeta(*z))
    }

    fn pair(&self, b: usize, h: usize) -> String {
        self.chart.coordinate(&self.chart.first(b, h))
    }

    /// Caveats that vanish at the declared point.
    fn vanishing(&self, caveats: &[RatFn]) -> Vec<String> {
        if self.point.is_empty() {
            return Vec::new();
        }
        caveats
            .iter()
            .filter(|c| c.subst(&self.point).map(|v| v.is_zero()).unwrap_or(true))
            .map(|c| self.s(c))
            .collect()
    }
}

fn dedup(mut v: Vec<RatFn>) -> Vec<RatFn> {
    let mut out: Vec<RatFn> = Vec::new();
    for c in v.drain(..) {
        if !out.contains(&c) {
            out.push(c);
        }
    }
    out
}

/// Parses and analyses a system file.
pub fn analyze(text: &str, flags: &Flags) -> Result<Report, AnalyzeError> {
    let file = parse(text).map_err(AnalyzeError::Input)?;
    let chart = file.chart();
    let point = file
        .point
        .iter()
        .map(|(n, q)| (chart.resolve(n).expect("checked by the parser"), RatFn::constant(q.clone())))
        .collect();
    let cx = Ctx { chart: &chart, point };
    let mut system = report::SystemSection {
        form: String::new(),
        indep: file.indep.clone(),
        dep: file.dep.clone(),
        params: file.params.clone(),
        order: file.order,
        equations: Vec::new(),
        violations: Vec::new(),
        betas: Vec::new(),
        alphas: Vec::new(),
        parametric: Vec::new(),
        point: file.point.iter().map(|(n, q)| (n.clone(), q.to_string())).collect(),
    };
    match file.system() {
        AnySystem::Reduced(sys) => {
            system.form = "reduced".into();
            system.equations = sys.display();
            if let Err(vs) = sys.validate() {
                system.violations = vs.iter().map(|v| v.to_string()).collect();
                return Ok(Report {
                    name: file.name,
                    system,
                    symbol: None,
                    involution: None,
                    vessiot: None,
                    connection: None,
                    verdict: report::Verdict {
                        exit_code: 2,
                        summary: "the system is not in reduced Cartan normal form".into(),
                    },
                });
            }
            system.betas = sys.betas();
            system.alphas = sys.alphas();
            system.parametric = sys.parametric().into_iter().map(|(b, h)| cx.pair(b, h)).collect();
            analyze_reduced(&cx, file.name, system, &sys, flags)
        }
        AnySystem::Implicit(sys) => {
            system.form = "implicit".into();
            system.equations = sys.display();
            analyze_implicit(&cx, file.name, system, &sys, flags)
        }
    }
}

fn symbol_section(cx: &Ctx, sys: &ImplicitSystem, seed: u64) -> Result<report::SymbolSection, AnalyzeError> {
    let s = in_section("symbol", symbol_matrix_seeded(sys, seed))?;
    let c = in_section("symbol", cartan_test_seeded(sys, seed))?;
    let caveats = dedup(s.caveats.clone());
    let mut notes = vec![GENERIC_NOTE.to_string()];
    if !c.passes {
        notes.push(DELTA_NOTE.to_string());
    }
    Ok(report::SymbolSection {
        order: s.order,
        columns: s.columns.iter().map(|j| cx.chart.jet_name(j)).collect(),
        matrix: s.matrix.render(cx.chart),
        rank: s.rank,
        dim: s.dim,
        betas: s.betas.clone(),
        cartan_passes: c.passes,
        rank_next: c.rank_next,
        weighted_sum: c.weighted_sum,
        caveats_vanishing_at_point: cx.vanishing(&caveats),
        caveats: cx.all(&caveats),
        notes,
    })
}

fn analyze_implicit(
    cx: &Ctx,
    name: Option<String>,
    system: report::SystemSection,
    sys: &ImplicitSystem,
    flags: &Flags,
) -> Result<Report, AnalyzeError> {
    let symbol = symbol_section(cx, sys, flags.seed)?;
    let g = in_section("vessiot", implicit_vessiot_generators(sys))?;
    let fields = g.barred.clone().unwrap_or_else(|| g.fields.clone());
    let mut generators = Vec::new();
    let mut verticals = Vec::new();
    for (f, t) in fields.iter().zip(&g.transversal) {
        let s = f.display(cx.chart);
        if *t {
            generators.push(s);
        } else {
            verticals.push(s);
        }
    }
    let mut brackets = Vec::new();
    if g.barred.is_some() {
        for a in 0..fields.len() {
            for b in a + 1..fields.len() {
                brackets.push(report::FieldBracket {
                    left: a + 1,
                    right: b + 1,
                    value: fields[a].bracket(&fields[b]).display(cx.chart),
                });
            }
        }
    }
    let caveats = dedup(g.caveats.clone());
    let passes = symbol.cartan_passes;
    Ok(Report {
        name,
        system,
        symbol: Some(symbol),
        involution: None,
        vessiot: Some(report::VessiotSection {
            generators,
            symbol_fields: verticals,
            columns: Vec::new(),
            theta: Vec::new(),
            xi: Vec::new(),
            structure_equations_hold: None,
            brackets,
            caveats_vanishing_at_point: cx.vanishing(&caveats),
            caveats: cx.all(&caveats),
            notes: vec!["implicit systems stop after the Vessiot generators".into()],
        }),
        connection: None,
        verdict: report::Verdict {
            exit_code: if passes { 0 } else { 1 },
            summary: if passes {
                "Cartan's test passes; generators computed".into()
            } else {
                "Cartan's test fails; generators computed".into()
            },
        },
    })
}

fn step_entry(cx: &Ctx, sys: &ReducedCNF, st: &StepResult) -> report::StepEntry {
    let label = |(b, i, h): (usize, usize, usize)| format!("({}, {{{},{}}})", sys.chart.dep[b], sys.chart.indep[i], sys.chart.indep[h]);
    let mut caveats = st.rank_condition.caveats.clone();
    caveats.extend(st.augmented.caveats.iter().cloned());
    report::StepEntry {
        j: st.j() + 1,
        unknowns: st.layout.unknowns.iter().map(|z| cx.zeta(z)).collect(),
        params: st.layout.params.iter().map(|z| cx.zeta(z)).collect(),
        aliases: st.layout.aliases.iter().map(|(a, r)| (cx.zeta(a), cx.zeta(r))).collect(),
        matrix: st.matrix.render(cx.chart),
        rank_u: st.rank_condition.lhs_rank,
        rank_up: st.rank_condition.rhs_rank,
        rank_augmented: st.augmented.rhs_rank,
        rank_condition: st.rank_condition.passes,
        augmented_condition: st.augmented.passes,
        offending: st
            .offending
            .iter()
            .map(|o| report::OffendingEntry {
                kind: serde_json::to_value(o.kind)
                    .ok()
                    .and_then(|v| v.as_str().map(str::to_string))
                    .unwrap_or_default(),
                expression: cx.s(&o.expression),
                labels: o.shared_labels().into_iter().map(label).collect(),
            })
            .collect(),
        caveats: cx.all(&dedup(caveats)),
    }
}

fn analyze_reduced(
    cx: &Ctx,
    name: Option<String>,
    system: report::SystemSection,
    sys: &ReducedCNF,
    flags: &Flags,
) -> Result<Report, AnalyzeError> {
    let symbol = symbol_section(cx, &sys.to_implicit(), flags.seed)?;

    let ob = in_section("involution", monster(sys))?;
    let n = sys.n();
    let involution = report::InvolutionSection {
        obstructions: ob
            .triples
            .iter()
            .map(|t| report::ObstructionEntry {
                alpha: sys.chart.dep[t.alpha].clone(),
                i: sys.chart.indep[t.i].clone(),
                j: sys.chart.indep[t.j].clone(),
                integrability: cx.s(&t.integrability),
                brackets: t
                    .nonzero_brackets()
                    .map(|(l, b)| report::BracketEntry {
                        coordinate: cx.chart.coordinate(&l.coordinate(n)),
                        coefficient: cx.s(&b.coefficient),
                        lines: b.lines.iter().map(|l| format!("{l:?}")).collect(),
                        principal: b.principal,
                    })
                    .collect(),
            })
            .collect(),
        symbol_involutive: ob.symbol_involutive,
        equation_involutive: ob.equation_involutive,
        notes: vec![LEMMA_NOTE.to_string()],
    };

    let sc = in_section("vessiot", StructureCoefficients::new(sys))?;
    let check = in_section("vessiot", verify_structure_equations(sys))?;
    let vessiot = report::VessiotSection {
        generators: reference_complement(sys).iter().map(|f| f.display(cx.chart)).collect(),
        symbol_fields: symbol_fields(sys).iter().map(|f| f.display(cx.chart)).collect(),
        columns: sc.columns.iter().map(|&(b, h)| cx.pair(b, h)).collect(),
        theta: sc
            .theta
            .iter()
            .map(|(&(i, j), v)| report::ThetaEntry {
                i: i + 1,
                j: j + 1,
                values: cx.all(v),
            })
            .collect(),
        xi: sc.xi.iter().map(|m| m.render(cx.chart)).collect(),
        structure_equations_hold: Some(check.passes),
        brackets: Vec::new(),
        caveats: Vec::new(),
        caveats_vanishing_at_point: Vec::new(),
        notes: check.discrepancies.clone(),
    };

    let opts = Options {
        contract: flags.contract,
        last_step: flags.step.map(|j| j.saturating_sub(1)),
        seed: flags.seed,
    };
    let out = in_section("connection", build_family(sys, &opts))?;
    let steps: Vec<report::StepEntry> = out.steps().iter().map(|st| step_entry(cx, sys, st)).collect();
    let mut notes = vec![GENERIC_NOTE.to_string(), POINTWISE_NOTE.to_string()];
    let connection = match out.family() {
        Some(f) => {
            let d = in_section("connection", reduce_differential_conditions(sys, f))?;
            notes.push(ONE_PASS_NOTE.to_string());
            report::ConnectionSection {
                contract: flags.contract,
                steps,
                family_built: true,
                free: f.free.iter().map(|z| cx.zeta(z)).collect(),
                values: f
                    .values
                    .iter()
                    .filter(|(z, v)| **v != RatFn::atom(Atom::zeta(**z)))
                    .map(|(z, v)| (cx.zeta(z), cx.s(v)))
                    .collect(),
                algebraic_conditions_vanish: Some(f.algebraic_conditions_vanish),
                closed_form_relations_hold: Some(f.closed_form_relations_hold),
                differential: Some(report::DifferentialSection {
                    equations: d
                        .equations
                        .iter()
                        .map(|e| report::DiffEntry {
                            class: e.class() + 1,
                            leader: cx.chart.atom(&e.leader),
                            rhs: cx.s(&e.rhs),
                        })
                        .collect(),
                    dropped: d.dropped.len(),
                    new_conditions: cx.all(&d.new_conditions),
                    numbering: d.numbering.iter().map(|z| cx.zeta(z)).collect(),
                    leaders_unique: d.leaders_unique,
                    classes_ok: d.classes_ok,
                }),
                notes,
            }
        }
        None => report::ConnectionSection {
            contract: flags.contract,
            steps,
            family_built: false,
            free: Vec::new(),
            values: Vec::new(),
            algebraic_conditions_vanish: None,
            closed_form_relations_hold: None,
            differential: None,
            notes,
        },
    };
    let verdict = if connection.family_built {
        report::Verdict {
            exit_code: 0,
            summary: format!(
                "involutive; family of integral distributions built with {} free unknowns",
                connection.free.len()
            ),
        }
    } else {
        let j = connection.steps.last().map_or(0, |s| s.j);
        report::Verdict {
            exit_code: 1,
            summary: format!("construction failed at step {j}"),
        }
    };
    Ok(Report {
        name,
        system,
        symbol: Some(symbol),
        involution: Some(involution),
        vessiot: Some(vessiot),
        connection: Some(connection),
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const WAVE: &str = "name wave\nindep x t\ndep u v w\norder 1\neq u_t = v\neq v_t = w_x\neq w_t = v_x\neq u_x = w\n";

    #[test]
    fn wave_exits_zero_with_two_parameters() {
        let r = analyze(WAVE, &Flags::default()).unwrap();
        assert_eq!(r.verdict.exit_code, 0);
        assert_eq!(r.connection.as_ref().unwrap().free.len(), 2);
    }

    #[test]
    fn wave_without_condition_names_residual() {
        let text = WAVE.replace("eq w_t = v_x\n", "");
        let r = analyze(&text, &Flags::default()).unwrap();
        assert_eq!(r.verdict.exit_code, 1);
        let st = &r.connection.as_ref().unwrap().steps[0];
        assert_eq!(st.offending[0].expression, "v_x - w_t");
        assert_eq!(st.offending[0].kind, "residual");
    }

    #[test]
    fn garbage_is_an_input_error() {
        let e = analyze("%%% nothing", &Flags::default()).unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn invalid_system_exits_two() {
        let r = analyze("indep x t\ndep u\neq u_x = u_t\n", &Flags::default()).unwrap();
        assert_eq!(r.verdict.exit_code, 2);
        assert!(!r.system.violations.is_empty());
    }

    #[test]
    fn json_round_trip_and_determinism() {
        let r = analyze(WAVE, &Flags::default()).unwrap();
        let j = r.to_json();
        assert_eq!(Report::from_json(&j).unwrap(), r);
        assert_eq!(analyze(WAVE, &Flags::default()).unwrap().to_json(), j);
        assert!(r.to_text().contains("== connection"));
    }
}
