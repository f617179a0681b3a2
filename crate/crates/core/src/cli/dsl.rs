//! Line-oriented system files.
//!
//! ```text
//! name wave
//! indep x t
//! dep u v w
//! order 1
//! eq u_t = v
//! impl u_x^2 + u^2 + x^2 - 1
//! point x=0 t=0
//! ```

use std::fmt;

use crate::expr::{parse_expr, Atom, Coordinate, RatFn};
use crate::jet::Chart;
use crate::scalar::Rational;
use crate::system::{Equation, ImplicitSystem, ReducedCNF};

/// An error at a 1-based line and column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Body {
    Solved(Vec<Equation>),
    Implicit(Vec<RatFn>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SystemFile {
    pub name: Option<String>,
    pub indep: Vec<String>,
    pub dep: Vec<String>,
    pub params: Vec<String>,
    pub order: u32,
    pub body: Body,
    pub point: Vec<(String, Rational)>,
}

/// What the file describes once the body is interpreted.
#[derive(Clone, Debug, PartialEq)]
pub enum AnySystem {
    Reduced(ReducedCNF),
    Implicit(ImplicitSystem),
}

impl SystemFile {
    pub fn chart(&self) -> Chart {
        let indep: Vec<&str> = self.indep.iter().map(String::as_str).collect();
        let dep: Vec<&str> = self.dep.iter().map(String::as_str).collect();
        let params: Vec<&str> = self.params.iter().map(String::as_str).collect();
        Chart::new(&indep, &dep, self.order).with_params(&params)
    }

    /// First-order `eq` files become reduced systems; higher-order `eq` files
    /// are read as implicit systems `lhs − rhs = 0`.
    pub fn system(&self) -> AnySystem {
        let chart = self.chart();
        match &self.body {
            Body::Solved(eqs) if self.order == 1 => AnySystem::Reduced(ReducedCNF::new(chart, eqs.clone())),
            Body::Solved(eqs) => AnySystem::Implicit(ImplicitSystem::new(
                chart,
                eqs.iter()
                    .map(|e| RatFn::coord(Coordinate::Jet(e.lhs.clone())).sub(&e.rhs))
                    .collect(),
            )),
            Body::Implicit(eqs) => AnySystem::Implicit(ImplicitSystem::new(chart, eqs.clone())),
        }
    }
}

struct Line<'a> {
    number: usize,
    keyword: &'a str,
    /// Rest of the line and its 1-based column.
    rest: &'a str,
    rest_col: usize,
}

fn split_lines(text: &str) -> Vec<Line<'_>> {
    let mut out = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim_start();
        if trimmed.trim().is_empty() {
            continue;
        }
        let lead = content.len() - trimmed.len();
        let kw_len = trimmed.find(char::is_whitespace).unwrap_or(trimmed.len());
        let keyword = &trimmed[..kw_len];
        let after = &trimmed[kw_len..];
        let rest = after.trim_start();
        let rest_byte = lead + kw_len + (after.len() - rest.len());
        out.push(Line {
            number: k + 1,
            keyword,
            rest: rest.trim_end(),
            rest_col: content[..rest_byte].chars().count() + 1,
        });
    }
    out
}

fn words(l: &Line) -> Vec<String> {
    l.rest.split_whitespace().map(str::to_string).collect()
}

fn diag(l: &Line, column: usize, message: impl Into<String>) -> Diagnostic {
    Diagnostic {
        line: l.number,
        column,
        message: message.into(),
    }
}

fn is_identifier(w: &str) -> bool {
    let mut cs = w.chars();
    cs.next().is_some_and(char::is_alphabetic) && cs.all(|c| c.is_alphanumeric() || c == '\'')
}

fn resolver(chart: &Chart) -> impl Fn(&str) -> Result<Atom, String> + '_ {
    move |name: &str| {
        let a = chart.resolve(name)?;
        if let Atom::Coord(Coordinate::Jet(j)) = &a {
            if j.order() > chart.order {
                return Err(format!(
                    "`{name}` has order {} above the declared order {}",
                    j.order(),
                    chart.order
                ));
            }
        }
        Ok(a)
    }
}

fn parse_rhs(chart: &Chart, l: &Line, text: &str, col: usize) -> Result<RatFn, Diagnostic> {
    let r = resolver(chart);
    let e = parse_expr(text, &r).map_err(|e| diag(l, col + e.column - 1, e.message))?;
    e.to_ratfn().map_err(|e| diag(l, col, e.to_string()))
}

fn parse_rational(s: &str) -> Option<Rational> {
    let e = parse_expr(s, &|n: &str| Err(format!("unknown identifier `{n}`"))).ok()?;
    e.to_ratfn().ok()?.constant_value()
}

pub fn parse(text: &str) -> Result<SystemFile, Vec<Diagnostic>> {
    let lines = split_lines(text);
    let mut errors = Vec::new();
    let mut name = None;
    let mut indep = Vec::new();
    let mut dep = Vec::new();
    let mut params = Vec::new();
    let mut order = None;
    for l in &lines {
        match l.keyword {
            "name" => name = Some(l.rest.to_string()),
            "indep" | "dep" | "param" => {
                let ws = words(l);
                if let Some(bad) = ws.iter().find(|w| !is_identifier(w)) {
                    errors.push(diag(l, l.rest_col, format!("`{bad}` is not a valid variable name")));
                }
                match l.keyword {
                    "indep" => indep = ws,
                    "dep" => dep = ws,
                    _ => params.extend(ws),
                }
            }
            "order" => match l.rest.parse::<u32>() {
                Ok(q) if q >= 1 => order = Some(q),
                _ => errors.push(diag(l, l.rest_col, "order must be a positive integer")),
            },
            "eq" | "impl" | "point" => {}
            other => errors.push(diag(l, 1, format!("unknown keyword `{other}`"))),
        }
    }
    let first = |kw: &str| lines.iter().find(|l| l.keyword == kw);
    if indep.is_empty() {
        errors.push(Diagnostic {
            line: first("indep").map_or(1, |l| l.number),
            column: 1,
            message: "missing `indep` line".into(),
        });
    }
    if dep.is_empty() {
        errors.push(Diagnostic {
            line: first("dep").map_or(1, |l| l.number),
            column: 1,
            message: "missing `dep` line".into(),
        });
    }
    let mut seen = std::collections::BTreeSet::new();
    for v in indep.iter().chain(&dep).chain(&params) {
        if !seen.insert(v) {
            errors.push(Diagnostic {
                line: 1,
                column: 1,
                message: format!("`{v}` is declared twice"),
            });
        }
    }
    if !errors.is_empty() {
        return Err(errors);
    }
    let order = order.unwrap_or(1);
    let file = SystemFile {
        name,
        indep,
        dep,
        params,
        order,
        body: Body::Implicit(Vec::new()),
        point: Vec::new(),
    };
    let chart = file.chart();

    let mut solved = Vec::new();
    let mut implicit = Vec::new();
    let mut point = Vec::new();
    for l in &lines {
        match l.keyword {
            "eq" => {
                let Some(eqpos) = l.rest.find('=') else {
                    errors.push(diag(l, l.rest_col, "expected `<derivative> = <expression>`"));
                    continue;
                };
                let lhs = l.rest[..eqpos].trim();
                let rhs_text = &l.rest[eqpos + 1..];
                let rhs_col = l.rest_col + l.rest[..eqpos + 1].chars().count();
                let lhs_atom = resolver(&chart)(lhs);
                let lhs = match lhs_atom {
                    Ok(Atom::Coord(Coordinate::Jet(j))) if j.order() > 0 => j,
                    Ok(_) => {
                        errors.push(diag(l, l.rest_col, format!("left side `{lhs}` is not a derivative")));
                        continue;
                    }
                    Err(m) => {
                        errors.push(diag(l, l.rest_col, m));
                        continue;
                    }
                };
                match parse_rhs(&chart, l, rhs_text, rhs_col) {
                    Ok(rhs) => solved.push(Equation { lhs, rhs }),
                    Err(d) => errors.push(d),
                }
            }
            "impl" => {
                let r = match l.rest.find('=') {
                    Some(p) => {
                        let a = parse_rhs(&chart, l, &l.rest[..p], l.rest_col);
                        let b = parse_rhs(&chart, l, &l.rest[p + 1..], l.rest_col + l.rest[..p + 1].chars().count());
                        a.and_then(|a| b.map(|b| a.sub(&b)))
                    }
                    None => parse_rhs(&chart, l, l.rest, l.rest_col),
                };
                match r {
                    Ok(e) => implicit.push(e),
                    Err(d) => errors.push(d),
                }
            }
            "point" => {
                for w in l.rest.split_whitespace() {
                    let col = l.rest_col + l.rest[..l.rest.find(w).unwrap_or(0)].chars().count();
                    let Some((n, v)) = w.split_once('=') else {
                        errors.push(diag(l, col, format!("expected `name=value`, found `{w}`")));
                        continue;
                    };
                    if let Err(m) = chart.resolve(n) {
                        errors.push(diag(l, col, m));
                        continue;
                    }
                    match parse_rational(v) {
                        Some(q) => point.push((n.to_string(), q)),
                        None => errors.push(diag(l, col, format!("`{v}` is not a rational number"))),
                    }
                }
            }
            _ => {}
        }
    }
    let body = match (solved.is_empty(), implicit.is_empty()) {
        (false, false) => {
            let l = first("impl").unwrap();
            errors.push(diag(l, 1, "`eq` and `impl` lines cannot be mixed"));
            Body::Implicit(implicit)
        }
        (true, true) if first("eq").is_none() && first("impl").is_none() => {
            errors.push(Diagnostic {
                line: lines.last().map_or(1, |l| l.number),
                column: 1,
                message: "no equations".into(),
            });
            Body::Implicit(implicit)
        }
        (true, true) => Body::Implicit(implicit),
        (false, true) => Body::Solved(solved),
        (true, false) => Body::Implicit(implicit),
    };
    if !errors.is_empty() {
        errors.sort_by_key(|d| (d.line, d.column));
        return Err(errors);
    }
    Ok(SystemFile { body, point, ..file })
}

#[cfg(test)]
mod tests {
    use super::*;

    const WAVE: &str = "# first-order wave system\nname wave\nindep x t\ndep u v w\norder 1\neq u_t = v\neq v_t = w_x\neq w_t = v_x\neq u_x = w\n";

    #[test]
    fn wave_file() {
        let f = parse(WAVE).unwrap();
        let AnySystem::Reduced(s) = f.system() else { panic!() };
        assert!(s.validate().is_ok());
        assert_eq!(s.betas(), vec![1, 3]);
        assert_eq!(f.name.as_deref(), Some("wave"));
    }

    #[test]
    fn implicit_circle() {
        let f = parse("indep x\ndep u\norder 1\nimpl u_x^2 + u^2 + x^2 - 1\n").unwrap();
        let AnySystem::Implicit(s) = f.system() else { panic!() };
        assert_eq!(s.equations.len(), 1);
    }

    #[test]
    fn class_violation_is_found_by_validation() {
        let f = parse("indep x t\ndep u\neq u_x = u_t\n").unwrap();
        let AnySystem::Reduced(s) = f.system() else { panic!() };
        assert!(s.validate().is_err());
    }

    #[test]
    fn positioned_diagnostics() {
        let e = parse("indep x t\ndep u\neq u_t = q + 1\n").unwrap_err();
        assert_eq!((e[0].line, e[0].column), (3, 10));
        assert!(e[0].message.contains("unknown identifier"));

        let e = parse("indep x t\ndep u\neq u_t = u_xz\n").unwrap_err();
        assert_eq!((e[0].line, e[0].column), (3, 10));

        let e = parse("indep x t\ndep u\norder 1\neq u_t = 2*u_xx\n").unwrap_err();
        assert_eq!((e[0].line, e[0].column), (4, 12));
        assert!(e[0].message.contains("order 2"));

        assert!(parse("this is not a system").is_err());
    }

    #[test]
    fn point_and_params() {
        let f = parse("indep x y\ndep u\nparam a\norder 2\neq u_xx = a*u\npoint x=1/2 u=3\n").unwrap();
        assert_eq!(f.point.len(), 2);
        assert!(matches!(f.system(), AnySystem::Implicit(_)));
    }
}
