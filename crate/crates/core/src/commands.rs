//! The commands of the `heartloc` tool as library calls. Each returns a
//! [`Report`] and any Gabriel quivers it produced, as DOT text.
//!
//! Subcategories named `M`, `N`, `Mprime`, `Heart`, `HeartPrime`,
//! `Localized`, `LocalizedPrime` and `<name>perp` in a problem file are
//! treated as expected panels and compared with the computed ones.

use crate::context::Subcat;
use crate::cotorsion::{heart_nonzero, heart_objects, satisfies_rcp, verify_cotorsion_pair, TwinPair};
use crate::diamond::{check_g1_property, classify_r};
use crate::error::{Error, Result};
use crate::morita::{verify_pseudo_morita, TwinTriple};
use crate::mutation::{
    dual_input, ext2_rigidity_criterion, left_mutation, mutation_condition_equivalence, right_mutation, Mutation,
    MutationInput,
};
use crate::problem::Problem;
use crate::quotient::{GabrielQuiver, QuotientCategory};
use crate::report::{against_panel, list, panels, Report, Section};

#[derive(Clone, Debug, Default)]
pub struct Output {
    pub report: Report,
    /// `(name, DOT text)` per rendered quiver.
    pub dots: Vec<(String, String)>,
}

impl Output {
    fn new(report: Report) -> Output {
        Output { report, dots: Vec::new() }
    }

    fn dot(&mut self, name: &str, q: &GabrielQuiver) {
        self.dots.push((name.to_string(), q.to_dot(name)));
    }

    /// The report, followed by the panels of the named subcategories.
    fn with_panels(mut self, prob: &Problem, show: bool, named: &[(&str, &Subcat)]) -> Output {
        if show && !prob.positions.is_empty() {
            let mut sec = Section::new("panels");
            sec.lines.extend(panels(prob, named).lines().map(String::from));
            self.report.push(sec);
        }
        self
    }
}

fn subcat(prob: &Problem, name: &str) -> Result<Subcat> {
    prob.subcat(name).cloned()
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn check(prob: &Problem) -> Result<Output> {
    let ctx = &prob.ctx;
    let alg = ctx.algebra();
    let mut report = Report::new("check");
    let mut sec = Section::new("atlas");
    sec.line(format!("field: {}", ctx.p()));
    sec.line(format!("vertices: {}", alg.num_vertices()));
    sec.line(format!("indecomposables: {}", ctx.len()));
    sec.line(format!("projectives: {}", list(ctx, &ctx.projectives())));
    sec.line(format!("injectives: {}", list(ctx, &ctx.injectives())));
    let missing: Vec<usize> = (0..alg.num_vertices())
        .filter(|&v| !(0..ctx.len()).any(|i| ctx.member(i).dims.iter().enumerate().all(|(w, &d)| d == usize::from(w == v))))
        .collect();
    sec.clause("every simple is present", missing.is_empty(), format!("{missing:?}"));
    let stable = (0..ctx.len()).all(|i| (0..ctx.len()).all(|j| ctx.hom(i, j).dim() == ctx.hom(i, j).basis().len()));
    sec.clause("Hom spaces computed", stable, "");
    report.push(sec);
    let mut sec = Section::new("subcategories");
    for (name, s) in &prob.subcats {
        let rcp = satisfies_rcp(ctx, s);
        sec.line(format!("{name}: {} members, (RCP) {}, rigid {}", s.len(), yes(rcp.holds()), yes(ctx.is_rigid(s))));
    }
    report.push(sec);
    Ok(Output::new(report))
}

pub fn perp(prob: &Problem, name: &str, show: bool) -> Result<Output> {
    let ctx = &prob.ctx;
    let s = subcat(prob, name)?;
    let (right, left) = (ctx.right_perp(&s), ctx.left_perp(&s));
    let mut report = Report::new(format!("perp {name}"));
    let mut sec = Section::new("perpendicular categories");
    sec.line(format!("{name}^⊥1: {}", list(ctx, &right)));
    sec.line(format!("⊥1{name}: {}", list(ctx, &left)));
    against_panel(prob, &mut sec, &format!("{name}^⊥1"), &format!("{name}perp"), &right);
    report.push(sec);
    Ok(Output::new(report).with_panels(prob, show, &[(name, &s), ("right perp", &right), ("left perp", &left)]))
}

pub fn rigid(prob: &Problem, name: &str) -> Result<Output> {
    let ctx = &prob.ctx;
    let s = subcat(prob, name)?;
    let mut report = Report::new(format!("rigid {name}"));
    let mut sec = Section::new("rigidity");
    sec.line(format!("rigid: {}", ctx.is_rigid(&s)));
    for i in s.iter() {
        for j in s.iter() {
            let e = ctx.ext_dim(i, j);
            if e > 0 {
                sec.line(format!("Ext¹({}, {}) = {e}", ctx.name(i), ctx.name(j)));
            }
        }
    }
    let rcp = satisfies_rcp(ctx, &s);
    sec.line(format!("(RCP): {}", rcp.failing_clause().unwrap_or("holds")));
    report.push(sec);
    Ok(Output::new(report))
}

pub fn cotorsion(prob: &Problem, u: &str, v: &str, show: bool) -> Result<Output> {
    let ctx = &prob.ctx;
    let (us, vs) = (subcat(prob, u)?, subcat(prob, v)?);
    let cert = verify_cotorsion_pair(ctx, &us, &vs)?;
    let mut report = Report::new(format!("cotorsion {u} {v}"));
    let mut sec = Section::new("cotorsion pair");
    sec.clause(format!("({u}, {v}) is a cotorsion pair"), cert.holds(), cert.failures.join("; "));
    let heart = heart_nonzero(ctx, &TwinPair::degenerate(us.clone(), vs.clone()))?;
    sec.line(format!("heart: {}", list(ctx, &heart)));
    report.push(sec);
    Ok(Output::new(report).with_panels(prob, show, &[(u, &us), (v, &vs), ("heart", &heart)]))
}

/// Nonzero heart members of the pair `(U, V)` and the Gabriel quiver of
/// the heart.
pub fn heart_of(prob: &Problem, us: &Subcat, vs: &Subcat) -> Result<(Subcat, GabrielQuiver)> {
    let twin = TwinPair::degenerate(us.clone(), vs.clone());
    let objects = heart_objects(&prob.ctx, &twin)?;
    let nonzero = objects.difference(&twin.core());
    let g = QuotientCategory::new(&prob.ctx, objects, twin.core()).gabriel_quiver()?;
    Ok((nonzero, g))
}

/// Heart of `(U, V)` with `V = U^⊥1` when omitted.
pub fn heart(prob: &Problem, u: &str, v: Option<&str>, show: bool) -> Result<Output> {
    let ctx = &prob.ctx;
    let us = subcat(prob, u)?;
    let vs = match v {
        Some(v) => subcat(prob, v)?,
        None => ctx.right_perp(&us),
    };
    let (nonzero, g) = heart_of(prob, &us, &vs)?;
    let title = match v {
        Some(v) => format!("heart {u} {v}"),
        None => format!("heart {u}"),
    };
    let mut report = Report::new(title);
    let mut sec = Section::new("heart");
    sec.line(format!("nonzero objects ({}): {}", nonzero.len(), list(ctx, &nonzero)));
    sec.line(format!("irreducible maps: {}", g.arrows.len()));
    report.push(sec);
    let mut out = Output::new(report);
    out.dot("heart", &g);
    Ok(out.with_panels(prob, show, &[("heart", &nonzero)]))
}

/// A hard verification failure becomes a FAIL clause; other errors pass through.
fn soft<T>(sec: &mut Section, name: &str, r: Result<T>) -> Result<Option<T>> {
    match r {
        Ok(t) => {
            sec.clause(name, true, "");
            Ok(Some(t))
        }
        Err(Error::Verification(msg)) | Err(Error::NotExact(msg)) => {
            sec.clause(name, false, msg);
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

pub fn mutate(prob: &Problem, c: &str, d: &str, show: bool) -> Result<Output> {
    let ctx = &prob.ctx;
    let input = MutationInput::new(ctx, subcat(prob, c)?, subcat(prob, d)?)?;
    let c_prime = right_mutation(ctx, &input)?;
    let mut report = Report::new(format!("mutate {c} {d}"));
    let mut sec = Section::new("right mutation");
    sec.line(format!("C': {}", list(ctx, &c_prime)));
    sec.line(format!("rigid: {}", ctx.is_rigid(&c_prime)));
    against_panel(prob, &mut sec, "C'", "Cprime", &c_prime);
    if let Some(vanishes) = soft(&mut sec, "Ext² criterion consistent", ext2_rigidity_criterion(ctx, &input))? {
        sec.line(format!("Ext²(C, D) = 0: {vanishes}"));
    }
    if satisfies_rcp(ctx, &c_prime).holds() {
        let eq = soft(&mut sec, "mutation conditions agree", mutation_condition_equivalence(ctx, &input.c, &c_prime, &input.d))?;
        if let Some(eq) = eq {
            sec.clause("CoCone(D, C) = CoCone(C', D)", eq, "");
        }
    } else {
        sec.line("C' violates (RCP); the mutation conditions are not compared");
    }
    report.push(sec);
    Ok(Output::new(report).with_panels(prob, show, &[("C", &input.c), ("D", &input.d), ("C'", &c_prime)]))
}

pub fn localize(prob: &Problem, c: &str, d: &str, show: bool) -> Result<Output> {
    let ctx = &prob.ctx;
    let m = Mutation::new(ctx, MutationInput::new(ctx, subcat(prob, c)?, subcat(prob, d)?)?)?;
    let mut report = Report::new(format!("localize {c} {d}"));
    let mut sec = Section::new("localization at S_A");
    sec.line(format!("H_D: {}", list(ctx, &m.h_d)));
    sec.line(format!("C': {}", list(ctx, &m.c_prime)));
    let mut out = Output::default();
    let mut nonzero = Subcat::default();
    if let Some(a) = soft(&mut sec, "A computed two ways agrees", m.a_objects())? {
        sec.line(format!("A: {}", list(ctx, &a)));
        if let Some(lm) = soft(&mut sec, "H_D/C' is dense, full and faithful and inverts S_A", m.localization_model())? {
            nonzero = Subcat::new(lm.model.nonzero_objects());
            sec.line(format!("model objects ({}): {}", nonzero.len(), list(ctx, &nonzero)));
            out.dot("localized", &lm.model.gabriel_quiver()?);
        }
    }
    against_panel(prob, &mut sec, "model", "Localized", &nonzero);
    report.push(sec);
    out.report = report;
    Ok(out.with_panels(prob, show, &[("H_D", &m.h_d), ("C'", &m.c_prime), ("model", &nonzero)]))
}

/// The full certificate for `(C, D, C')`: hypotheses, panels, both
/// localisation models and the pseudo-Morita functors.
pub fn verify_main_theorem(prob: &Problem, c: &str, d: &str, cp: &str, show: bool) -> Result<Output> {
    let ctx = &prob.ctx;
    let (cs, ds, cps) = (subcat(prob, c)?, subcat(prob, d)?, subcat(prob, cp)?);
    let mut report = Report::new(format!("verify-main-theorem {c} {d} {cp}"));
    let mut out = Output::default();

    let mut sec = Section::new("hypotheses");
    for (name, s) in [(c, &cs), (d, &ds), (cp, &cps)] {
        let rcp = satisfies_rcp(ctx, s);
        sec.clause(format!("{name} satisfies (RCP)"), rcp.holds(), rcp.failing_clause().unwrap_or(""));
        sec.clause(format!("{name} is rigid"), ctx.is_rigid(s), "");
    }
    sec.clause(format!("{d} ⊆ {c} ∩ {cp}"), ds.is_subset(&cs.intersection(&cps)), "");
    let hypotheses = sec.clauses.iter().all(|x| x.pass);
    report.push(sec);
    if !hypotheses {
        out.report = report;
        return Ok(out);
    }
    let triple = TwinTriple::new(ctx, cs.clone(), ds.clone(), cps.clone())?;

    let mut sec = Section::new("perpendicular categories");
    for (label, panel, s) in [
        ("C^⊥1", format!("{c}perp"), &triple.c_perp),
        ("D^⊥1", format!("{d}perp"), &triple.d_perp),
        ("C'^⊥1", format!("{cp}perp"), &triple.cp_perp),
        ("M", "M".into(), &triple.m),
        ("N", "N".into(), &triple.n),
        ("M'", "Mprime".into(), &triple.m_prime),
    ] {
        sec.line(format!("{label}: {}", list(ctx, s)));
        against_panel(prob, &mut sec, label, &panel, s);
    }
    report.push(sec);

    let mut sec = Section::new("mutations");
    let input = MutationInput::new(ctx, cs.clone(), ds.clone())?;
    let right = right_mutation(ctx, &input)?;
    sec.clause(format!("right mutation of {c} along {d} is {cp}"), right == cps, list(ctx, &right));
    let left = left_mutation(ctx, &triple.m_prime, &triple.n)?;
    sec.clause("left mutation of M' along N is M", left == triple.m, list(ctx, &left));
    if let Some(eq) = soft(&mut sec, "mutation conditions agree", mutation_condition_equivalence(ctx, &cs, &cps, &ds))? {
        sec.clause("CoCone(D, C) = CoCone(C', D)", eq, "");
    }
    report.push(sec);

    let mut sec = Section::new("hearts");
    let (h1, g1) = heart_of(prob, &cs, &triple.c_perp)?;
    sec.line(format!("heart of (C, C^⊥1) ({}): {}", h1.len(), list(ctx, &h1)));
    against_panel(prob, &mut sec, "heart of (C, C^⊥1)", "Heart", &h1);
    let (h2, g2) = heart_of(prob, &triple.cp_perp, &triple.m_prime)?;
    sec.line(format!("heart of (C'^⊥1, M') ({}): {}", h2.len(), list(ctx, &h2)));
    against_panel(prob, &mut sec, "heart of (C'^⊥1, M')", "HeartPrime", &h2);
    out.dot("heart", &g1);
    out.dot("heart-prime", &g2);
    report.push(sec);

    let mut sec = Section::new("localization at S_A");
    let m = Mutation::new(ctx, input)?;
    let mut left_objects = Subcat::default();
    if let Some(lm) = soft(&mut sec, "H_D/C' is dense, full and faithful and inverts S_A", m.localization_model())? {
        left_objects = Subcat::new(lm.model.nonzero_objects());
        sec.line(format!("A: {}", list(ctx, &lm.a)));
    }
    sec.line(format!("objects ({}): {}", left_objects.len(), list(ctx, &left_objects)));
    against_panel(prob, &mut sec, "H_D/C'", "Localized", &left_objects);
    report.push(sec);

    let mut sec = Section::new("localization at S_A'");
    let dual = ctx.dual();
    let dm = Mutation::new(&dual, dual_input(&dual, &triple.m_prime, &triple.n)?)?;
    let mut right_objects = Subcat::default();
    if let Some(lm) = soft(&mut sec, "H'_N/M is dense, full and faithful and inverts S_A'", dm.localization_model())? {
        right_objects = Subcat::new(lm.model.nonzero_objects());
        sec.line(format!("A': {}", list(ctx, &lm.a)));
    }
    sec.line(format!("objects ({}): {}", right_objects.len(), list(ctx, &right_objects)));
    against_panel(prob, &mut sec, "H'_N/M", "LocalizedPrime", &right_objects);
    report.push(sec);

    let mut sec = Section::new("pseudo-Morita equivalence");
    let morita = verify_pseudo_morita(ctx, &triple)?;
    sec.clauses.extend(morita.clauses);
    let pairs: Vec<String> = morita.bijection.iter().map(|&(x, k)| format!("{} ↦ {}", ctx.name(x), ctx.name(k))).collect();
    sec.line(format!("K: {}", pairs.join(", ")));
    let ql = QuotientCategory::new(ctx, triple.h_d.clone(), triple.c_prime.clone()).gabriel_quiver()?;
    let qr = QuotientCategory::new(ctx, triple.h_n.clone(), triple.m.clone()).gabriel_quiver()?;
    sec.clause("Gabriel quivers of the two models are isomorphic", ql.isomorphism(&qr).is_some(), "");
    out.dot("localized", &ql);
    out.dot("localized-prime", &qr);
    report.push(sec);

    out.report = report;
    Ok(out.with_panels(
        prob,
        show,
        &[
            ("C^⊥1", &triple.c_perp),
            ("D^⊥1", &triple.d_perp),
            ("C'^⊥1", &triple.cp_perp),
            ("M", &triple.m),
            ("N", &triple.n),
            ("M'", &triple.m_prime),
            ("H_D/C'", &left_objects),
            ("H'_N/M", &right_objects),
        ],
    ))
}

/// Flags of every basis morphism `Y -> X`.
pub fn classify_morphism(prob: &Problem, c: &str, d: &str, y: &str, x: &str) -> Result<Output> {
    let ctx = &prob.ctx;
    let m = Mutation::new(ctx, MutationInput::new(ctx, subcat(prob, c)?, subcat(prob, d)?)?)?;
    let a = m.a_objects()?;
    let (yi, xi) = (ctx.lookup(y)?, ctx.lookup(x)?);
    let mut report = Report::new(format!("classify-morphism {y} {x}"));
    let mut sec = Section::new("classes");
    let hom = ctx.hom(yi, xi);
    sec.line(format!("dim Hom({y}, {x}) = {}", hom.dim()));
    for (k, f) in hom.basis().iter().enumerate() {
        let flags = classify_r(&m, f)?;
        sec.line(format!(
            "basis {k}: R0 {} R1 {} R~1 {} R2 {}",
            yes(flags.r0),
            yes(flags.r1),
            yes(flags.r1_tilde),
            yes(flags.r2)
        ));
        sec.clause(format!("basis {k}: flags monotone"), flags.monotone(), "");
        if flags.r1_tilde {
            soft(&mut sec, &format!("basis {k}: H(f) in S_A"), check_g1_property(&m, &a, f))?;
        }
    }
    report.push(sec);
    Ok(Output::new(report))
}

/// DOT for `heart U [V]`, `localized C D` or `localized-dual M' N`.
pub fn export_dot(prob: &Problem, kind: &str, a: &str, b: Option<&str>) -> Result<Output> {
    let ctx = &prob.ctx;
    let second = b.ok_or_else(|| Error::precondition(format!("`{kind}` needs two subcategories")));
    let mut out = match kind {
        "heart" => heart(prob, a, b, false)?,
        "localized" => localize(prob, a, second?, false)?,
        "localized-dual" => {
            let (mp, n) = (subcat(prob, a)?, subcat(prob, second?)?);
            let objects = crate::cotorsion::cone_set(ctx, &mp, &n)?;
            let ideal = left_mutation(ctx, &mp, &n)?;
            let mut out = Output::new(Report::new(format!("export-dot {kind}")));
            out.dot("localized-dual", &QuotientCategory::new(ctx, objects, ideal).gabriel_quiver()?);
            out
        }
        _ => return Err(Error::precondition(format!("unknown model `{kind}`"))),
    };
    out.report.title = format!("export-dot {kind}");
    Ok(out)
}

/// Runs a command given by name and positional arguments.
pub fn run(prob: &Problem, command: &str, args: &[String], show: bool) -> Result<Output> {
    let arg = |i: usize| {
        args.get(i)
            .map(String::as_str)
            .ok_or_else(|| Error::precondition(format!("`{command}` expects more arguments")))
    };
    let opt = |i: usize| args.get(i).map(String::as_str);
    match command {
        "check" => check(prob),
        "perp" => perp(prob, arg(0)?, show),
        "rigid" => rigid(prob, arg(0)?),
        "cotorsion" => cotorsion(prob, arg(0)?, arg(1)?, show),
        "heart" => heart(prob, arg(0)?, opt(1), show),
        "mutate" => mutate(prob, arg(0)?, arg(1)?, show),
        "localize" => localize(prob, arg(0)?, arg(1)?, show),
        "verify-main-theorem" => verify_main_theorem(prob, arg(0)?, arg(1)?, arg(2)?, show),
        "classify-morphism" => classify_morphism(prob, arg(0)?, arg(1)?, arg(2)?, arg(3)?),
        "export-dot" => export_dot(prob, arg(0)?, arg(1)?, opt(2)),
        _ => Err(Error::precondition(format!("unknown command `{command}`"))),
    }
}

/// Arguments for a command run on a shipped example: the file's `main`
/// task when it names the same command (or no command is given), otherwise
/// the subcategories `C`, `D`, `Cprime` as the command needs them.
pub fn demo_invocation(prob: &Problem, command: Option<&str>, args: &[String]) -> (String, Vec<String>) {
    let main = prob.file.tasks.iter().find(|t| t.0 == "main").map(|t| t.1.clone()).unwrap_or_default();
    let command = command.map(String::from).or_else(|| main.first().cloned()).unwrap_or_else(|| "check".into());
    if !args.is_empty() {
        return (command, args.to_vec());
    }
    if main.first() == Some(&command) {
        return (command, main[1..].to_vec());
    }
    let names: &[&str] = match command.as_str() {
        "perp" | "rigid" | "heart" => &["C"],
        "cotorsion" => &["C", "Cperp"],
        "mutate" | "localize" => &["C", "D"],
        "verify-main-theorem" => &["C", "D", "Cprime"],
        "export-dot" => &["heart", "C"],
        _ => &[],
    };
    (command, names.iter().map(|s| s.to_string()).collect())
}
