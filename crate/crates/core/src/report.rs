//! Deterministic text reports for the command-line tool: one section per
//! check, with PASS/FAIL clauses and plain information lines.

use std::fmt::Write as _;

use crate::context::{Context, Subcat};
use crate::error::Error;
use crate::problem::Problem;

/// One verified clause with a witness or failure description.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Clause {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Clause {
    pub fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Clause {
        Clause { name: name.into(), pass, detail: detail.into() }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Section {
    pub name: String,
    pub lines: Vec<String>,
    pub clauses: Vec<Clause>,
}

impl Section {
    pub fn new(name: impl Into<String>) -> Section {
        Section { name: name.into(), ..Section::default() }
    }

    pub fn line(&mut self, text: impl Into<String>) -> &mut Section {
        self.lines.push(text.into());
        self
    }

    pub fn clause(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) -> &mut Section {
        self.clauses.push(Clause::new(name, pass, detail));
        self
    }
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub title: String,
    pub sections: Vec<Section>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Report {
        Report { title: title.into(), sections: Vec::new() }
    }

    pub fn push(&mut self, section: Section) {
        self.sections.push(section);
    }

    pub fn passed(&self) -> bool {
        self.sections.iter().flat_map(|s| &s.clauses).all(|c| c.pass)
    }

    pub fn clauses(&self) -> impl Iterator<Item = &Clause> {
        self.sections.iter().flat_map(|s| &s.clauses)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        writeln!(out, "# {}", self.title).unwrap();
        for s in &self.sections {
            writeln!(out, "\n## {}", s.name).unwrap();
            for l in &s.lines {
                writeln!(out, "{l}").unwrap();
            }
            for c in &s.clauses {
                let tag = if c.pass { "PASS" } else { "FAIL" };
                if c.detail.is_empty() {
                    writeln!(out, "{tag} {}", c.name).unwrap();
                } else {
                    writeln!(out, "{tag} {} ({})", c.name, c.detail).unwrap();
                }
            }
        }
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        writeln!(out, "\nresult: {verdict}").unwrap();
        out
    }
}

/// Process exit status for a finished report or an error.
pub fn exit_code(outcome: &Result<Report, Error>) -> i32 {
    match outcome {
        Ok(r) if r.passed() => 0,
        Ok(_) => 1,
        Err(Error::Inconclusive(_)) => 3,
        Err(Error::Verification(_) | Error::NotExact(_)) => 1,
        Err(_) => 2,
    }
}

/// Member names of a subcategory, space separated in atlas order.
pub fn list(ctx: &Context, s: &Subcat) -> String {
    ctx.subcat_names(s).join(" ")
}

/// Compares a computed subcategory with a declared panel, if declared.
pub fn against_panel(prob: &Problem, sec: &mut Section, label: &str, panel: &str, computed: &Subcat) {
    if let Ok(expected) = prob.subcat(panel) {
        let detail = if expected == computed {
            String::new()
        } else {
            format!("expected {}, got {}", list(&prob.ctx, expected), list(&prob.ctx, computed))
        };
        sec.clause(format!("{label} matches panel {panel}"), expected == computed, detail);
    }
}

/// The computed subcategories on the module grid declared with `at`, one
/// grid per subcategory: `o` for members, `.` for other modules.
pub fn panels(prob: &Problem, named: &[(&str, &Subcat)]) -> String {
    let ctx = &prob.ctx;
    let (rows, cols) = prob
        .positions
        .values()
        .fold((0, 0), |(r, c), &(a, b)| (r.max(a + 1), c.max(b + 1)));
    let mut out = String::new();
    for (name, s) in named {
        writeln!(out, "{name}:").unwrap();
        for r in 0..rows {
            let mut line = String::new();
            for c in 0..cols {
                let cell = prob
                    .positions
                    .iter()
                    .find(|(_, &pos)| pos == (r, c))
                    .map(|(m, _)| if ctx.lookup(m).is_ok_and(|i| s.contains(i)) { 'o' } else { '.' })
                    .unwrap_or(' ');
                line.push(cell);
            }
            writeln!(out, "  {}", line.trim_end()).unwrap();
        }
    }
    out
}
