//! Analysis report: machine form (JSON) and human form (text).

use std::fmt::Write;

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub name: Option<String>,
    pub system: SystemSection,
    pub symbol: Option<SymbolSection>,
    pub involution: Option<InvolutionSection>,
    pub vessiot: Option<VessiotSection>,
    pub connection: Option<ConnectionSection>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub exit_code: i32,
    pub summary: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemSection {
    pub form: String,
    pub indep: Vec<String>,
    pub dep: Vec<String>,
    pub params: Vec<String>,
    pub order: u32,
    pub equations: Vec<String>,
    pub violations: Vec<String>,
    /// Number of equations per class (reduced systems).
    pub betas: Vec<usize>,
    pub alphas: Vec<usize>,
    pub parametric: Vec<String>,
    pub point: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolSection {
    pub order: u32,
    pub columns: Vec<String>,
    pub matrix: Vec<Vec<String>>,
    pub rank: usize,
    pub dim: usize,
    pub betas: Vec<usize>,
    pub cartan_passes: bool,
    pub rank_next: usize,
    pub weighted_sum: usize,
    pub caveats: Vec<String>,
    pub caveats_vanishing_at_point: Vec<String>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BracketEntry {
    pub coordinate: String,
    pub coefficient: String,
    pub lines: Vec<String>,
    pub principal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionEntry {
    pub alpha: String,
    pub i: String,
    pub j: String,
    pub integrability: String,
    /// Nonzero brackets only.
    pub brackets: Vec<BracketEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvolutionSection {
    pub obstructions: Vec<ObstructionEntry>,
    pub symbol_involutive: bool,
    pub equation_involutive: bool,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThetaEntry {
    pub i: usize,
    pub j: usize,
    pub values: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldBracket {
    pub left: usize,
    pub right: usize,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VessiotSection {
    /// Transversal generators (`X̄_i` for reduced systems).
    pub generators: Vec<String>,
    /// Vertical generators (`Ȳ_k`).
    pub symbol_fields: Vec<String>,
    /// Column labels of the `Ξ` matrices.
    pub columns: Vec<String>,
    pub theta: Vec<ThetaEntry>,
    pub xi: Vec<Vec<Vec<String>>>,
    pub structure_equations_hold: Option<bool>,
    /// Brackets of the generators, numbered transversal first (1-based).
    pub brackets: Vec<FieldBracket>,
    pub caveats: Vec<String>,
    pub caveats_vanishing_at_point: Vec<String>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OffendingEntry {
    pub kind: String,
    pub expression: String,
    /// Contraction labels `(u, {x,y})` shared by the involved unknowns.
    pub labels: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepEntry {
    /// One-based step index.
    pub j: usize,
    pub unknowns: Vec<String>,
    pub params: Vec<String>,
    pub aliases: Vec<(String, String)>,
    pub matrix: Vec<Vec<String>>,
    pub rank_u: usize,
    pub rank_up: usize,
    pub rank_augmented: usize,
    pub rank_condition: bool,
    pub augmented_condition: bool,
    pub offending: Vec<OffendingEntry>,
    pub caveats: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiffEntry {
    /// One-based class.
    pub class: usize,
    pub leader: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DifferentialSection {
    pub equations: Vec<DiffEntry>,
    pub dropped: usize,
    pub new_conditions: Vec<String>,
    pub numbering: Vec<String>,
    pub leaders_unique: bool,
    pub classes_ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConnectionSection {
    pub contract: bool,
    pub steps: Vec<StepEntry>,
    pub family_built: bool,
    pub free: Vec<String>,
    pub values: Vec<(String, String)>,
    pub algebraic_conditions_vanish: Option<bool>,
    pub closed_form_relations_hold: Option<bool>,
    pub differential: Option<DifferentialSection>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> Result<Report, serde_json::Error> {
        serde_json::from_str(s)
    }

    pub fn to_text(&self) -> String {
        let mut o = String::new();
        let s = &self.system;
        let _ = writeln!(o, "== system{}", self.name.as_ref().map(|n| format!(" {n}")).unwrap_or_default());
        let _ = writeln!(o, "form: {}, order {}", s.form, s.order);
        let _ = writeln!(o, "independent: {}; dependent: {}", s.indep.join(" "), s.dep.join(" "));
        if !s.params.is_empty() {
            let _ = writeln!(o, "parameters: {}", s.params.join(" "));
        }
        for e in &s.equations {
            let _ = writeln!(o, "  {e}");
        }
        for v in &s.violations {
            let _ = writeln!(o, "  invalid: {v}");
        }
        if !s.betas.is_empty() {
            let _ = writeln!(o, "beta = {:?}, alpha = {:?}", s.betas, s.alphas);
            let _ = writeln!(o, "parametric: {}", s.parametric.join(" "));
        }

        if let Some(y) = &self.symbol {
            let _ = writeln!(o, "\n== symbol");
            let _ = writeln!(o, "columns: {}", y.columns.join(" "));
            matrix(&mut o, &y.matrix);
            let _ = writeln!(o, "rank {}, dim {}, beta = {:?}", y.rank, y.dim, y.betas);
            let _ = writeln!(
                o,
                "Cartan test: {} (rank of prolonged symbol {} vs {})",
                pass(y.cartan_passes),
                y.rank_next,
                y.weighted_sum
            );
            list(&mut o, "caveats", &y.caveats);
            list(&mut o, "caveats vanishing at point", &y.caveats_vanishing_at_point);
            notes(&mut o, &y.notes);
        }

        if let Some(v) = &self.involution {
            let _ = writeln!(o, "\n== involution");
            for t in &v.obstructions {
                let _ = writeln!(o, "({}, {}, {}): integrability {}", t.alpha, t.i, t.j, t.integrability);
                for b in &t.brackets {
                    let _ = writeln!(o, "    {}: {} [{}]", b.coordinate, b.coefficient, b.lines.join(","));
                }
            }
            let _ = writeln!(o, "symbol involutive: {}", v.symbol_involutive);
            let _ = writeln!(o, "equation involutive: {}", v.equation_involutive);
            notes(&mut o, &v.notes);
        }

        if let Some(v) = &self.vessiot {
            let _ = writeln!(o, "\n== vessiot");
            for (k, g) in v.generators.iter().enumerate() {
                let _ = writeln!(o, "X{} = {g}", k + 1);
            }
            for (k, g) in v.symbol_fields.iter().enumerate() {
                let _ = writeln!(o, "Y{} = {g}", k + 1);
            }
            for t in &v.theta {
                let _ = writeln!(o, "Theta_{}{} = ({})", t.i, t.j, t.values.join(", "));
            }
            if !v.xi.is_empty() {
                let _ = writeln!(o, "Xi columns: {}", v.columns.join(" "));
            }
            for (i, x) in v.xi.iter().enumerate() {
                let _ = writeln!(o, "Xi_{}:", i + 1);
                matrix(&mut o, x);
            }
            if let Some(b) = v.structure_equations_hold {
                let _ = writeln!(o, "structure equations: {}", pass(b));
            }
            for b in &v.brackets {
                let _ = writeln!(o, "[Z{}, Z{}] = {}", b.left, b.right, b.value);
            }
            list(&mut o, "caveats", &v.caveats);
            list(&mut o, "caveats vanishing at point", &v.caveats_vanishing_at_point);
            notes(&mut o, &v.notes);
        }

        if let Some(c) = &self.connection {
            let _ = writeln!(o, "\n== connection (contraction {})", if c.contract { "on" } else { "off" });
            for st in &c.steps {
                let _ = writeln!(
                    o,
                    "step {}: {}x{} unknowns {}, rank {} / {} / {}: rank condition {}, augmented {}",
                    st.j,
                    st.matrix.len(),
                    st.matrix.first().map_or(0, |r| r.len().saturating_sub(1)),
                    st.unknowns.len(),
                    st.rank_u,
                    st.rank_up,
                    st.rank_augmented,
                    pass(st.rank_condition),
                    pass(st.augmented_condition)
                );
                for (a, r) in &st.aliases {
                    let _ = writeln!(o, "    {a} = {r}");
                }
                for off in &st.offending {
                    let labels = if off.labels.is_empty() {
                        String::new()
                    } else {
                        format!(" (shared {})", off.labels.join(", "))
                    };
                    let _ = writeln!(o, "    {}: {} = 0{labels}", off.kind, off.expression);
                }
            }
            if c.family_built {
                let _ = writeln!(o, "family built with {} free unknowns: {}", c.free.len(), c.free.join(" "));
                for (z, v) in &c.values {
                    let _ = writeln!(o, "    {z} = {v}");
                }
            } else {
                let _ = writeln!(o, "family not built");
            }
            if let Some(d) = &c.differential {
                let _ = writeln!(o, "differential conditions:");
                for e in &d.equations {
                    let _ = writeln!(o, "    [class {}] {} = {}", e.class, e.leader, e.rhs);
                }
                let _ = writeln!(o, "    dropped {}, leaders unique {}, classes ok {}", d.dropped, d.leaders_unique, d.classes_ok);
                list(&mut o, "new algebraic conditions", &d.new_conditions);
            }
            notes(&mut o, &c.notes);
        }
        let _ = writeln!(o, "\n== verdict\n{} (exit {})", self.verdict.summary, self.verdict.exit_code);
        o
    }
}

fn pass(b: bool) -> &'static str {
    if b {
        "passes"
    } else {
        "fails"
    }
}

fn matrix(o: &mut String, m: &[Vec<String>]) {
    for r in m {
        let _ = writeln!(o, "  [{}]", r.join(", "));
    }
}

fn list(o: &mut String, title: &str, xs: &[String]) {
    if !xs.is_empty() {
        let _ = writeln!(o, "{title}: {}", xs.join("; "));
    }
}

fn notes(o: &mut String, xs: &[String]) {
    for n in xs {
        let _ = writeln!(o, "note: {n}");
    }
}
