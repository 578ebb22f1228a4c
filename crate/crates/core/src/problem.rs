//! The problem file format.
//!
//! ```text
//! field 101
//! quiver
//!   vertices 1 2
//!   arrow a: 1 -> 2
//! relations
//!   # one linear combination of paths per line, e.g. 2*a.b - c.d
//! module 12
//!   dims 1 1
//!   at 0 1
//!   a = [1]
//! subcat C
//!   12
//! task main
//!   perp C
//! ```
//!
//! Section headers start in column 1; body lines are indented. Matrices are
//! row-major with rows separated by `;`, and omitted arrow matrices are zero.
//! `#` starts a comment.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::Write as _;

use crate::algebra::{Algebra, Quiver, Relation};
use crate::context::{Config, Context, Subcat};
use crate::error::{Error, Result};
use crate::linalg::{is_prime, reduce, Matrix};
use crate::rep::Rep;

pub const DEFAULT_FIELD: u32 = 101;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleDecl {
    pub name: String,
    pub dims: Vec<usize>,
    /// Grid position used when printing panels.
    pub at: Option<(usize, usize)>,
    /// Arrow name and row-major entries.
    pub maps: Vec<(String, Vec<Vec<i64>>)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProblemFile {
    pub field: u32,
    pub vertices: Vec<String>,
    pub arrows: Vec<(String, String, String)>,
    /// Each relation is a list of `(coefficient, arrow names)`.
    pub relations: Vec<Vec<(i64, Vec<String>)>>,
    pub modules: Vec<ModuleDecl>,
    pub subcats: Vec<(String, Vec<String>)>,
    pub tasks: Vec<(String, Vec<String>)>,
}

impl Default for ProblemFile {
    fn default() -> Self {
        ProblemFile {
            field: DEFAULT_FIELD,
            vertices: Vec::new(),
            arrows: Vec::new(),
            relations: Vec::new(),
            modules: Vec::new(),
            subcats: Vec::new(),
            tasks: Vec::new(),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    None,
    Quiver,
    Relations,
    Module,
    Subcat,
    Task,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax { line, column, message: message.into() }
}

/// Whitespace-separated tokens with 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out.into_iter().map(|(s, t)| (line[..s].chars().count() + 1, t)).collect()
}

fn valid_name(s: &str) -> bool {
    !s.is_empty()
        && s.chars().all(|c| c.is_alphanumeric() || matches!(c, '_' | '/' | '\'' | '+' | '-' | '.'))
}

fn valid_ident(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
}

fn parse_int(tok: &str, line: usize, col: usize) -> Result<i64> {
    tok.parse::<i64>().map_err(|_| syntax(line, col, format!("expected an integer, found `{tok}`")))
}

fn parse_relation(text: &str, line: usize, col0: usize) -> Result<Vec<(i64, Vec<String>)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    let mut terms = Vec::new();
    let col = |i: usize| col0 + i;
    let skip_ws = |i: &mut usize| {
        while *i < chars.len() && chars[*i].is_whitespace() {
            *i += 1;
        }
    };
    loop {
        skip_ws(&mut i);
        if i >= chars.len() {
            break;
        }
        let mut sign = 1i64;
        if chars[i] == '+' || chars[i] == '-' {
            if chars[i] == '-' {
                sign = -1;
            }
            i += 1;
            skip_ws(&mut i);
        } else if !terms.is_empty() {
            return Err(syntax(line, col(i), "expected `+` or `-` between terms"));
        }
        let start = i;
        while i < chars.len() && chars[i].is_ascii_digit() {
            i += 1;
        }
        let mut coeff = 1i64;
        if i > start {
            let digits: String = chars[start..i].iter().collect();
            coeff = parse_int(&digits, line, col(start))?;
            skip_ws(&mut i);
            if i < chars.len() && chars[i] == '*' {
                i += 1;
                skip_ws(&mut i);
            }
        }
        let pstart = i;
        while i < chars.len() && !chars[i].is_whitespace() && chars[i] != '+' && chars[i] != '-' {
            i += 1;
        }
        let word: String = chars[pstart..i].iter().collect();
        if word.is_empty() {
            return Err(syntax(line, col(pstart), "expected a path"));
        }
        let arrows: Vec<String> = word.split('.').map(str::to_string).collect();
        if let Some(bad) = arrows.iter().find(|a| !valid_ident(a)) {
            return Err(syntax(line, col(pstart), format!("invalid arrow name `{bad}` in path")));
        }
        terms.push((sign * coeff, arrows));
    }
    if terms.is_empty() {
        return Err(syntax(line, col0, "empty relation"));
    }
    Ok(terms)
}

fn parse_matrix(text: &str, line: usize, col0: usize) -> Result<Vec<Vec<i64>>> {
    let t = text.trim();
    if !t.starts_with('[') || !t.ends_with(']') {
        return Err(syntax(line, col0, "matrix must be written as [a b; c d]"));
    }
    let inner = &t[1..t.len() - 1];
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut rows = Vec::new();
    for part in inner.split(';') {
        let mut row = Vec::new();
        for (_, tok) in tokens(part) {
            row.push(parse_int(tok, line, col0)?);
        }
        if row.is_empty() {
            return Err(syntax(line, col0, "empty matrix row"));
        }
        rows.push(row);
    }
    if rows.iter().any(|r| r.len() != rows[0].len()) {
        return Err(syntax(line, col0, "matrix rows have different lengths"));
    }
    Ok(rows)
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<ProblemFile> {
        let mut pf = ProblemFile::default();
        let mut section = Section::None;
        let mut seen_field = false;
        for (ln, raw) in text.lines().enumerate() {
            let line_no = ln + 1;
            let line = raw.split('#').next().unwrap_or("");
            if line.trim().is_empty() {
                continue;
            }
            let toks = tokens(line);
            let indented = line.starts_with(char::is_whitespace);
            if !indented {
                let (c, kw) = toks[0];
                let rest = &toks[1..];
                section = match kw {
                    "field" => {
                        if seen_field {
                            return Err(syntax(line_no, c, "duplicate `field`"));
                        }
                        let [(c2, v)] = rest else {
                            return Err(syntax(line_no, c, "expected `field <prime>`"));
                        };
                        let p = parse_int(v, line_no, *c2)?;
                        if p < 2 || p > u32::MAX as i64 || !is_prime(p as u64) {
                            return Err(Error::NotPrime(p.max(0) as u64));
                        }
                        pf.field = p as u32;
                        seen_field = true;
                        Section::None
                    }
                    "quiver" | "relations" if !rest.is_empty() => {
                        return Err(syntax(line_no, rest[0].0, "unexpected text after header"));
                    }
                    "quiver" => Section::Quiver,
                    "relations" => Section::Relations,
                    "module" | "subcat" | "task" => {
                        let [(c2, name)] = rest else {
                            return Err(syntax(line_no, c, format!("expected `{kw} <name>`")));
                        };
                        if !valid_name(name) {
                            return Err(syntax(line_no, *c2, format!("invalid name `{name}`")));
                        }
                        let name = name.to_string();
                        match kw {
                            "module" => {
                                if pf.modules.iter().any(|m| m.name == name) {
                                    return Err(syntax(line_no, *c2, format!("duplicate module `{name}`")));
                                }
                                pf.modules.push(ModuleDecl { name, dims: Vec::new(), at: None, maps: Vec::new() });
                                Section::Module
                            }
                            "subcat" => {
                                if pf.subcats.iter().any(|s| s.0 == name) {
                                    return Err(syntax(line_no, *c2, format!("duplicate subcat `{name}`")));
                                }
                                pf.subcats.push((name, Vec::new()));
                                Section::Subcat
                            }
                            _ => {
                                if pf.tasks.iter().any(|s| s.0 == name) {
                                    return Err(syntax(line_no, *c2, format!("duplicate task `{name}`")));
                                }
                                pf.tasks.push((name, Vec::new()));
                                Section::Task
                            }
                        }
                    }
                    other => return Err(syntax(line_no, c, format!("unknown section `{other}`"))),
                };
                continue;
            }
            let (c, kw) = toks[0];
            match section {
                Section::None => return Err(syntax(line_no, c, "indented line outside a section")),
                Section::Quiver => match kw {
                    "vertices" => {
                        for &(vc, v) in &toks[1..] {
                            if !valid_name(v) {
                                return Err(syntax(line_no, vc, format!("invalid vertex `{v}`")));
                            }
                            if pf.vertices.iter().any(|w| w == v) {
                                return Err(syntax(line_no, vc, format!("duplicate vertex `{v}`")));
                            }
                            pf.vertices.push(v.to_string());
                        }
                    }
                    "arrow" => {
                        // arrow NAME: SRC -> TGT
                        let rest: Vec<&str> = toks[1..].iter().map(|t| t.1).collect();
                        let ok = rest.len() == 4 && rest[0].ends_with(':') && rest[2] == "->";
                        if !ok {
                            return Err(syntax(line_no, c, "expected `arrow <name>: <source> -> <target>`"));
                        }
                        let name = rest[0].trim_end_matches(':');
                        if !valid_ident(name) {
                            return Err(syntax(line_no, toks[1].0, format!("invalid arrow name `{name}`")));
                        }
                        if pf.arrows.iter().any(|a| a.0 == name) {
                            return Err(syntax(line_no, toks[1].0, format!("duplicate arrow `{name}`")));
                        }
                        for (k, v) in [(2usize, rest[1]), (4, rest[3])] {
                            if !pf.vertices.iter().any(|w| w == v) {
                                return Err(syntax(line_no, toks[k].0, format!("undeclared vertex `{v}`")));
                            }
                        }
                        pf.arrows.push((name.to_string(), rest[1].to_string(), rest[3].to_string()));
                    }
                    other => return Err(syntax(line_no, c, format!("unknown quiver entry `{other}`"))),
                },
                Section::Relations => {
                    let body = line.trim_start();
                    pf.relations.push(parse_relation(body.trim_end(), line_no, c)?);
                }
                Section::Module => {
                    let m = pf.modules.last_mut().expect("module section");
                    match kw {
                        "dims" => {
                            m.dims = toks[1..]
                                .iter()
                                .map(|&(dc, d)| {
                                    let v = parse_int(d, line_no, dc)?;
                                    usize::try_from(v).map_err(|_| syntax(line_no, dc, "negative dimension"))
                                })
                                .collect::<Result<_>>()?;
                        }
                        "at" => {
                            let [(rc, r), (cc, cl)] = toks[1..] else {
                                return Err(syntax(line_no, c, "expected `at <row> <column>`"));
                            };
                            let r = usize::try_from(parse_int(r, line_no, rc)?).map_err(|_| syntax(line_no, rc, "negative row"))?;
                            let cl = usize::try_from(parse_int(cl, line_no, cc)?).map_err(|_| syntax(line_no, cc, "negative column"))?;
                            m.at = Some((r, cl));
                        }
                        arrow => {
                            let Some(eq) = line.find('=') else {
                                return Err(syntax(line_no, c, "expected `<arrow> = [matrix]`"));
                            };
                            if toks.get(1).map(|t| t.1.starts_with('=')) != Some(true) {
                                return Err(syntax(line_no, c, "expected `<arrow> = [matrix]`"));
                            }
                            if m.maps.iter().any(|(a, _)| a == arrow) {
                                return Err(syntax(line_no, c, format!("duplicate matrix for `{arrow}`")));
                            }
                            let col = line[..eq + 1].chars().count() + 1;
                            let rows = parse_matrix(&line[eq + 1..], line_no, col)?;
                            m.maps.push((arrow.to_string(), rows));
                        }
                    }
                }
                Section::Subcat => {
                    let s = pf.subcats.last_mut().expect("subcat section");
                    for &(_, name) in &toks {
                        s.1.push(name.to_string());
                    }
                }
                Section::Task => {
                    let t = pf.tasks.last_mut().expect("task section");
                    if !t.1.is_empty() {
                        return Err(syntax(line_no, c, "a task holds a single command line"));
                    }
                    t.1 = toks.iter().map(|t| t.1.to_string()).collect();
                }
            }
        }
        pf.check_references(text)?;
        Ok(pf)
    }

    fn check_references(&self, text: &str) -> Result<()> {
        let locate = |needle: &str| -> String {
            text.lines()
                .enumerate()
                .find(|(_, l)| l.split('#').next().unwrap_or("").split_whitespace().any(|t| t == needle))
                .map(|(i, _)| format!(" (line {})", i + 1))
                .unwrap_or_default()
        };
        let arrows: HashSet<&str> = self.arrows.iter().map(|a| a.0.as_str()).collect();
        for rel in &self.relations {
            for (_, w) in rel {
                for a in w {
                    if !arrows.contains(a.as_str()) {
                        return Err(Error::Undeclared(format!("arrow `{a}` in a relation")));
                    }
                }
            }
        }
        for m in &self.modules {
            for (a, _) in &m.maps {
                if !arrows.contains(a.as_str()) {
                    return Err(Error::Undeclared(format!("arrow `{a}` in module `{}`{}", m.name, locate(a))));
                }
            }
        }
        let modules: HashSet<&str> = self.modules.iter().map(|m| m.name.as_str()).collect();
        for (s, members) in &self.subcats {
            for m in members {
                if !modules.contains(m.as_str()) {
                    return Err(Error::Undeclared(format!("module `{m}` in subcat `{s}`{}", locate(m))));
                }
            }
        }
        let subcats: HashSet<&str> = self.subcats.iter().map(|s| s.0.as_str()).collect();
        for (t, args) in &self.tasks {
            for a in args.iter().skip(1) {
                let known = subcats.contains(a.as_str())
                    || modules.contains(a.as_str())
                    || a.starts_with("--")
                    || a.parse::<i64>().is_ok();
                if !known {
                    return Err(Error::Undeclared(format!("`{a}` in task `{t}`{}", locate(a))));
                }
            }
        }
        Ok(())
    }

    pub fn serialize(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "field {}", self.field);
        if !self.vertices.is_empty() || !self.arrows.is_empty() {
            out.push_str("quiver\n");
            if !self.vertices.is_empty() {
                let _ = writeln!(out, "  vertices {}", self.vertices.join(" "));
            }
            for (a, s, t) in &self.arrows {
                let _ = writeln!(out, "  arrow {a}: {s} -> {t}");
            }
        }
        if !self.relations.is_empty() {
            out.push_str("relations\n");
            for rel in &self.relations {
                let terms: Vec<String> = rel
                    .iter()
                    .enumerate()
                    .map(|(i, (c, w))| {
                        let path = w.join(".");
                        let body = if c.abs() == 1 { path } else { format!("{}*{path}", c.abs()) };
                        match (i, *c < 0) {
                            (0, false) => body,
                            (0, true) => format!("-{body}"),
                            (_, false) => format!("+ {body}"),
                            (_, true) => format!("- {body}"),
                        }
                    })
                    .collect();
                let _ = writeln!(out, "  {}", terms.join(" "));
            }
        }
        for m in &self.modules {
            let _ = writeln!(out, "module {}", m.name);
            let dims: Vec<String> = m.dims.iter().map(|d| d.to_string()).collect();
            let _ = writeln!(out, "  dims {}", dims.join(" "));
            if let Some((r, c)) = m.at {
                let _ = writeln!(out, "  at {r} {c}");
            }
            for (a, rows) in &m.maps {
                let rows: Vec<String> = rows
                    .iter()
                    .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))
                    .collect();
                let _ = writeln!(out, "  {a} = [{}]", rows.join("; "));
            }
        }
        for (s, members) in &self.subcats {
            let _ = writeln!(out, "subcat {s}");
            if !members.is_empty() {
                let _ = writeln!(out, "  {}", members.join(" "));
            }
        }
        for (t, args) in &self.tasks {
            let _ = writeln!(out, "task {t}");
            if !args.is_empty() {
                let _ = writeln!(out, "  {}", args.join(" "));
            }
        }
        out
    }

    pub fn algebra(&self) -> Result<Algebra> {
        let quiver = Quiver::new(self.vertices.clone(), &self.arrows)?;
        let relations = self
            .relations
            .iter()
            .map(|rel| {
                let terms = rel
                    .iter()
                    .map(|(c, w)| {
                        let arrows = w
                            .iter()
                            .map(|a| quiver.arrow_index(a).ok_or_else(|| Error::Undeclared(format!("arrow `{a}`"))))
                            .collect::<Result<Vec<_>>>()?;
                        Ok((reduce(self.field, *c), arrows))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Relation { terms })
            })
            .collect::<Result<Vec<_>>>()?;
        Algebra::new(self.field, quiver, relations)
    }

    pub fn module(&self, alg: &Algebra, decl: &ModuleDecl) -> Result<Rep> {
        let q = alg.quiver();
        let p = alg.p();
        if decl.dims.len() != q.num_vertices() {
            return Err(Error::InvalidRep {
                name: decl.name.clone(),
                reason: format!("expected {} dimensions, found {}", q.num_vertices(), decl.dims.len()),
            });
        }
        let mut maps: Vec<Matrix> = q
            .arrows()
            .iter()
            .map(|a| Matrix::zeros(p, decl.dims[a.target], decl.dims[a.source]))
            .collect();
        for (name, rows) in &decl.maps {
            let ai = q.arrow_index(name).ok_or_else(|| Error::Undeclared(format!("arrow `{name}`")))?;
            let a = &q.arrows()[ai];
            let (r, c) = (decl.dims[a.target], decl.dims[a.source]);
            let shape_ok = if rows.is_empty() { r == 0 || c == 0 } else { rows.len() == r && rows[0].len() == c };
            if !shape_ok {
                return Err(Error::InvalidRep {
                    name: decl.name.clone(),
                    reason: format!("matrix for `{name}` must be {r}x{c}"),
                });
            }
            if !rows.is_empty() {
                let rows: Vec<Vec<u32>> = rows.iter().map(|r| r.iter().map(|&x| reduce(p, x)).collect()).collect();
                maps[ai] = Matrix::from_rows(p, c, &rows);
            }
        }
        Rep::new(alg, decl.name.clone(), decl.dims.clone(), maps)
    }

    /// Builds the context and resolves subcategories. `field` overrides the
    /// declared characteristic.
    pub fn build(&self, field: Option<u32>, config: Config) -> Result<Problem> {
        let mut pf = self.clone();
        if let Some(p) = field {
            if !is_prime(p as u64) {
                return Err(Error::NotPrime(p as u64));
            }
            pf.field = p;
        }
        let alg = pf.algebra()?;
        let atlas = pf.modules.iter().map(|m| pf.module(&alg, m)).collect::<Result<Vec<_>>>()?;
        let ctx = Context::new(alg, atlas, config)?;
        let mut subcats = BTreeMap::new();
        for (name, members) in &pf.subcats {
            let names: Vec<&str> = members.iter().map(String::as_str).collect();
            subcats.insert(name.clone(), ctx.subcat(&names)?);
        }
        let positions = pf.modules.iter().filter_map(|m| m.at.map(|a| (m.name.clone(), a))).collect();
        Ok(Problem { file: pf, ctx, subcats, positions })
    }
}

/// A parsed and validated problem.
#[derive(Debug)]
pub struct Problem {
    pub file: ProblemFile,
    pub ctx: Context,
    pub subcats: BTreeMap<String, Subcat>,
    pub positions: HashMap<String, (usize, usize)>,
}

impl Problem {
    pub fn subcat(&self, name: &str) -> Result<&Subcat> {
        self.subcats.get(name).ok_or_else(|| Error::Undeclared(format!("subcat `{name}`")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = "\
field 7
quiver
  vertices 1 2 3
  arrow a: 1 -> 2
  arrow b: 2 -> 3
relations
  a.b
module 12
  dims 1 1 0
  a = [1]
module 23
  dims 0 1 1
  b = [1]
module 1
  dims 1 0 0
module 2
  dims 0 1 0
module 3
  dims 0 0 1
subcat P
  12 23 3
task t
  perp P
";

    #[test]
    fn parse_and_round_trip() {
        let pf = ProblemFile::parse(SMALL).unwrap();
        assert_eq!(pf.field, 7);
        assert_eq!(pf.vertices.len(), 3);
        assert_eq!(pf.modules.len(), 5);
        let again = ProblemFile::parse(&pf.serialize()).unwrap();
        assert_eq!(pf, again);
        let prob = pf.build(None, Config::default()).unwrap();
        assert_eq!(prob.ctx.projectives(), *prob.subcat("P").unwrap());
    }

    #[test]
    fn errors_carry_positions() {
        let err = ProblemFile::parse("quiver\n  vertices 1\n  arrow a 1 1\n").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 3, column: 3, .. }), "{err:?}");
        let err = ProblemFile::parse("field 12\n").unwrap_err();
        assert_eq!(err, Error::NotPrime(12));
        let err = ProblemFile::parse("quiver\n  vertices 1 2\nsubcat S\n  X\n").unwrap_err();
        assert!(matches!(err, Error::Undeclared(_)));
        let err = ProblemFile::parse("bogus\n").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 1, column: 1, .. }));
    }

    #[test]
    fn empty_module_list_is_valid() {
        let pf = ProblemFile::parse("field 5\nquiver\n  vertices 1\n").unwrap();
        assert!(pf.modules.is_empty());
        let pf = ProblemFile::parse("").unwrap();
        assert_eq!(pf.field, DEFAULT_FIELD);
    }

    #[test]
    fn relation_syntax() {
        let r = parse_relation("2*a.b - c.d + 3 e.f", 1, 1).unwrap();
        assert_eq!(r[0], (2, vec!["a".into(), "b".into()]));
        assert_eq!(r[1], (-1, vec!["c".into(), "d".into()]));
        assert_eq!(r[2].0, 3);
        assert!(parse_relation("a.b c.d", 1, 1).is_err());
    }
}
