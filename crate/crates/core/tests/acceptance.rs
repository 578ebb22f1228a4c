//! One line per acceptance criterion. Runs without the test harness so the
//! PASS/FAIL lines always reach the output.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;

use heartloc::commands::heart_of;
use heartloc::context::{Config, Context, Subcat};
use heartloc::cotorsion::{cocone_membership, satisfies_rcp, star_membership};
use heartloc::diamond::{check_g1_property, classify_r};
use heartloc::error::Error;
use heartloc::fixtures;
use heartloc::heart::HeartModel;
use heartloc::morita::{verify_pseudo_morita, TwinTriple};
use heartloc::mutation::{
    dual_input, ext2_rigidity_criterion, mutation_condition_equivalence, right_mutation, Mutation, MutationInput,
};
use heartloc::problem::Problem;
use heartloc::quotient::QuotientCategory;
use heartloc::rep::{Rep, RepMap};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, what: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn ok<T>(r: heartloc::error::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn ex61() -> Problem {
    fixtures::ex61(Config::default()).unwrap()
}

fn sub(prob: &Problem, name: &str) -> Subcat {
    prob.subcat(name).unwrap().clone()
}

fn binary(args: &[&str]) -> (Option<i32>, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_heartloc")).args(args).output().expect("binary runs");
    (out.status.code(), out.stdout)
}

fn ex61_end_to_end() -> Outcome {
    let (code, _) = binary(&["demo", "ex61", "verify-main-theorem"]);
    ensure(code == Some(0), format!("verify-main-theorem exited with {code:?}"))?;
    let prob = ex61();
    let ctx = &prob.ctx;
    let (c, d, cp) = (sub(&prob, "C"), sub(&prob, "D"), sub(&prob, "Cprime"));
    for (name, s) in [("C", &c), ("D", &d), ("C'", &cp)] {
        ensure(satisfies_rcp(ctx, s).holds() && ctx.is_rigid(s), format!("{name} fails (RCP) or rigidity"))?;
    }
    let triple = ok(TwinTriple::new(ctx, c.clone(), d.clone(), cp.clone()))?;
    let computed = [
        ("Cperp", &triple.c_perp),
        ("Dperp", &triple.d_perp),
        ("Cprimeperp", &triple.cp_perp),
        ("M", &triple.m),
        ("Mprime", &triple.m_prime),
        ("N", &triple.n),
    ];
    for (panel, s) in computed {
        ensure(*s == sub(&prob, panel), format!("{panel} differs from its panel"))?;
    }
    let input = ok(MutationInput::new(ctx, c.clone(), d))?;
    ensure(ok(right_mutation(ctx, &input))? == cp, "right mutation differs from the C' panel")?;
    let (h1, _) = ok(heart_of(&prob, &c, &triple.c_perp))?;
    let (h2, _) = ok(heart_of(&prob, &triple.cp_perp, &triple.m_prime))?;
    ensure(h1.len() == 5 && h2.len() == 6, format!("hearts have {} and {} objects", h1.len(), h2.len()))?;
    let left = QuotientCategory::new(ctx, triple.h_d.clone(), triple.c_prime.clone());
    let right = QuotientCategory::new(ctx, triple.h_n.clone(), triple.m.clone());
    let (nl, nr) = (left.nonzero_objects(), right.nonzero_objects());
    ensure(nl.len() == 4 && nr.len() == 4, format!("models have {} and {} objects", nl.len(), nr.len()))?;
    let (ql, qr) = (ok(left.gabriel_quiver())?, ok(right.gabriel_quiver())?);
    ensure(ql.isomorphism(&qr).is_some(), "Gabriel quivers are not isomorphic")?;
    let morita = ok(verify_pseudo_morita(ctx, &triple))?;
    ensure(morita.bijection.len() == 4, "K is not a bijection on four objects")?;
    for &(x, kx) in &morita.bijection {
        for &(y, ky) in &morita.bijection {
            ensure(left.hom(x, y).dim() == right.hom(kx, ky).dim(), "K changes a Hom dimension")?;
        }
    }
    Ok("exit 0; panels, hearts 5/6, models 4/4 with isomorphic quivers".into())
}

fn ex62_mutation() -> Outcome {
    let prob = fixtures::ex62(Config::default()).unwrap();
    let ctx = &prob.ctx;
    let input = ok(MutationInput::new(ctx, sub(&prob, "C"), sub(&prob, "D")))?;
    let cp = ok(right_mutation(ctx, &input))?;
    ensure(cp == sub(&prob, "Cprime"), "C' differs from its panel")?;
    ensure(!ctx.is_rigid(&cp), "C' is rigid")?;
    ensure(!ok(ext2_rigidity_criterion(ctx, &input))?, "Ext² criterion holds")?;
    let (code, out) = binary(&["demo", "ex62", "mutate"]);
    ensure(code == Some(0), format!("mutate exited with {code:?}"))?;
    ensure(String::from_utf8_lossy(&out).contains("rigid: false"), "mutate does not report `rigid: false`")?;
    Ok("C' matches its panel, not rigid, Ext²(C, D) ≠ 0".into())
}

fn ext_oracle() -> Outcome {
    let mut pairs = 0;
    for n in [2, 3] {
        let prob = common::linear(n);
        let ctx = &prob.ctx;
        for i in 0..ctx.len() {
            for j in 0..ctx.len() {
                let want = common::ext1_by_cocycles(ctx.algebra(), ctx.member(i), ctx.member(j));
                ensure(ctx.ext_dim(i, j) == want, format!("A{n}: Ext¹({}, {})", ctx.name(i), ctx.name(j)))?;
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} ordered pairs on A2, A3 over F2"))
}

fn cocone_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    for n in [2, 3] {
        let prob = common::linear(n);
        let ctx = &prob.ctx;
        let mut pool = vec![ctx.projectives(), ctx.injectives(), ctx.all()];
        pool.extend(common::random_rigid(ctx, &mut rng, 2));
        ensure(pool.len() == 5, "could not draw two rigid subcategories")?;
        for bp in &pool {
            for bpp in &pool {
                for x in 0..ctx.len() {
                    let got = match cocone_membership(ctx, ctx.member(x), bp, bpp) {
                        Ok(w) => w.is_some(),
                        Err(Error::Inconclusive(_)) => false,
                        Err(e) => return Err(e.to_string()),
                    };
                    let want = common::cocone_by_search(ctx, ctx.member(x), bp, bpp, ctx.dim_cap());
                    ensure(got == want, format!("A{n}: {} in CoCone({bp:?}, {bpp:?})", ctx.name(x)))?;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} memberships on A2, A3 over F2"))
}

fn cohomological_suite() -> Outcome {
    let prob = ex61();
    let ctx = &prob.ctx;
    let h = ok(HeartModel::new(ctx, &sub(&prob, "C")))?;
    let mut conflations = 0;
    for i in 0..ctx.len() {
        for j in 0..ctx.len() {
            let ext = ctx.ext(i, j);
            for k in 0..ext.dim() {
                let mut e = vec![0; ext.dim()];
                e[k] = 1;
                let conf = ext.realize(ctx.algebra(), &e);
                let (ha, hb, hc) = (
                    ok(h.cohomological(conf.left()))?,
                    ok(h.cohomological(conf.middle()))?,
                    ok(h.cohomological(conf.right()))?,
                );
                let pf = h.phi_map(&ok(h.cohomological_map(&conf.f, &ha, &hb))?);
                let pg = h.phi_map(&ok(h.cohomological_map(&conf.g, &hb, &hc))?);
                let exact = pg.after(&pf).is_zero() && pf.rank() + pg.rank() == pg.source.dim();
                ensure(exact, format!("H not exact on {} -> E -> {}", ctx.name(j), ctx.name(i)))?;
                conflations += 1;
            }
        }
    }
    let star = sub(&prob, "C");
    for x in 0..ctx.len() {
        let killed = ok(h.cohomological_parts(ctx.member(x)))?.is_empty();
        ensure(killed == ok(star_membership(ctx, ctx.member(x), &star, &h.perp))?, format!("kill criterion at {}", ctx.name(x)))?;
    }
    for x in h.objects.iter() {
        let hx = ok(h.cohomological(ctx.member(x)))?;
        ensure(h.phi_map(&hx.to_x).is_iso(), format!("H({0}) -> {0} is not invertible in the heart", ctx.name(x)))?;
    }
    ensure(conflations > 0, "no nonsplit conflations")?;
    Ok(format!("{conflations} basis conflations, kill criterion on {} objects", ctx.len()))
}

fn random_sum(ctx: &Context, pool: &[usize], rng: &mut ChaCha8Rng, most: usize) -> std::sync::Arc<Rep> {
    let n = rng.gen_range(1..=most);
    let parts: Vec<usize> = (0..n).map(|_| pool[rng.gen_range(0..pool.len())]).collect();
    ctx.object(&parts).rep
}

fn random_map(ctx: &Context, x: &std::sync::Arc<Rep>, y: &std::sync::Arc<Rep>, rng: &mut ChaCha8Rng) -> Option<RepMap> {
    let hom = heartloc::rep::HomSpace::compute(ctx.algebra(), x, y);
    let coeffs: Vec<u32> = (0..hom.dim()).map(|_| rng.gen_range(0..ctx.p())).collect();
    let f = hom.combine(&coeffs);
    (!f.is_zero()).then_some(f)
}

/// Deflations `B -> C` between heart objects that are epic in the heart.
fn heart_deflations(h: &HeartModel, rng: &mut ChaCha8Rng, want: usize) -> Vec<RepMap> {
    let ctx = h.context();
    let objects: Vec<usize> = h.objects.iter().collect();
    let nonzero: Vec<usize> = h.nonzero().iter().collect();
    let mut out = Vec::new();
    for _ in 0..20_000 {
        if out.len() == want {
            break;
        }
        let c = random_sum(ctx, &nonzero, rng, 1);
        let b = random_sum(ctx, &objects, rng, 3);
        if let Some(g) = random_map(ctx, &b, &c, rng) {
            if g.is_surjective() && h.is_epi(&g) {
                out.push(g);
            }
        }
    }
    out
}

fn approximation_suite() -> Outcome {
    let prob = ex61();
    let ctx = &prob.ctx;
    let m = ok(Mutation::new(ctx, ok(MutationInput::new(ctx, sub(&prob, "C"), sub(&prob, "D")))?))?;
    let h = &m.heart;
    for x in 0..ctx.len() {
        ok(m.right_hd_approximation(ctx.member(x)))?;
        let d = ok(h.syzygy_approximation(ctx.member(x)))?;
        ensure(h.check_syzygy_approximation(&d), format!("f0 for {} is no approximation", ctx.name(x)))?;
        ensure(h.check_factors_through_p(&d), format!("Hom(g0, B) not onto for {}", ctx.name(x)))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let epis = heart_deflations(h, &mut rng, 150);
    ensure(epis.len() >= 50, format!("only {} epi-deflations sampled", epis.len()))?;
    for g in &epis {
        ensure(ok(h.check_syzygy_epi(g))?, format!("Hom(ΩC, g) not onto for {} -> {}", g.source.name, g.target.name))?;
    }
    let mut sequences = 0;
    for g in &epis {
        let parts = ok(h.kernel(g))?;
        let a = ctx.object(&parts).rep;
        let (pa, pg) = (h.phi_object(&a), h.phi_map(g));
        let fs = (0..20).filter_map(|_| random_map(ctx, &a, &g.source, &mut rng));
        let exact = |f: &RepMap| {
            let pf = h.phi_map(f);
            pf.is_injective() && pg.after(&pf).is_zero() && pa.module.dim() + pg.target.dim() == pg.source.dim()
        };
        if let Some(f) = fs.into_iter().find(|f| exact(f)) {
            let (conf, _) = ok(h.realize_ses(&f, g))?;
            ok(conf.check(ctx.algebra()))?;
            sequences += 1;
        }
    }
    ensure(sequences >= 20, format!("only {sequences} exact sequences sampled"))?;
    Ok(format!("{} atlas objects, {} epi-deflations, {sequences} exact sequences", ctx.len(), epis.len()))
}

fn localization_certificates() -> Outcome {
    let prob = ex61();
    let ctx = &prob.ctx;
    let m = ok(Mutation::new(ctx, ok(MutationInput::new(ctx, sub(&prob, "C"), sub(&prob, "D")))?))?;
    let dual = ctx.dual();
    let dm = ok(Mutation::new(&dual, ok(dual_input(&dual, &sub(&prob, "Mprime"), &sub(&prob, "N")))?))?;
    let mut sizes = Vec::new();
    for (label, m, panel) in [("H_D/C'", &m, "Localized"), ("H'_N/M", &dm, "LocalizedPrime")] {
        let lm = ok(m.localization_model())?;
        let objects = Subcat::new(lm.model.nonzero_objects());
        let mut hit = Subcat::default();
        for (x, _) in &lm.images {
            hit = hit.union(&Subcat::new(ok(lm.image_parts(*x))?));
        }
        ensure(hit == objects, format!("{label}: R misses an object"))?;
        ensure(objects == sub(&prob, panel), format!("{label} differs from its panel"))?;
        sizes.push(objects.len());
    }
    Ok(format!("dense, full, faithful on both models ({} and {} objects)", sizes[0], sizes[1]))
}

/// Random `(C, D)` with (RCP) over the two shipped algebras (over a
/// hereditary algebra only `add P` qualifies), paired with its mutation and
/// with a random `C'` containing `D`.
fn condition_instances(rng: &mut ChaCha8Rng, want: usize) -> Result<Vec<(bool, Option<bool>)>, String> {
    let mut out = Vec::new();
    let probs = [ex61(), fixtures::ex62(Config::default()).unwrap()];
    for _ in 0..5000 {
        if out.len() == want {
            break;
        }
        let ctx = &probs[rng.gen_range(0..probs.len())].ctx;
        let draw = |rng: &mut ChaCha8Rng, within: &Subcat| {
            ctx.projectives().union(&Subcat::new(within.iter().filter(|_| rng.gen_bool(0.3))))
        };
        let c = draw(rng, &ctx.all());
        let d = draw(rng, &c);
        if !satisfies_rcp(ctx, &c).holds() || !satisfies_rcp(ctx, &d).holds() {
            continue;
        }
        let mutated = ok(right_mutation(ctx, &MutationInput { c: c.clone(), d: d.clone() }))?;
        let other = draw(rng, &ctx.all()).union(&d);
        let answer = |cp: &Subcat| -> Result<Option<bool>, String> {
            if satisfies_rcp(ctx, cp).holds() && d.is_subset(&c.intersection(cp)) {
                return Ok(Some(ok(mutation_condition_equivalence(ctx, &c, cp, &d))?));
            }
            Ok(None)
        };
        if let Some(first) = answer(&mutated)? {
            out.push((first, answer(&other)?));
        }
    }
    Ok(out)
}

fn pseudo_morita() -> Outcome {
    let prob = ex61();
    let ctx = &prob.ctx;
    let (c, d, cp) = (sub(&prob, "C"), sub(&prob, "D"), sub(&prob, "Cprime"));
    let triple = ok(TwinTriple::new(ctx, c.clone(), d.clone(), cp.clone()))?;
    let report = ok(verify_pseudo_morita(ctx, &triple))?;
    if let Some(bad) = report.clauses.iter().find(|c| !c.pass) {
        return Err(format!("{} ({})", bad.name, bad.detail));
    }
    ensure(ok(mutation_condition_equivalence(ctx, &c, &cp, &d))?, "mutation conditions fail on the example")?;
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let instances = condition_instances(&mut rng, 10)?;
    ensure(instances.len() == 10, format!("only {} random instances", instances.len()))?;
    let agree = instances.iter().filter(|(m, _)| *m).count();
    let others: Vec<bool> = instances.iter().filter_map(|(_, o)| *o).collect();
    let held = others.iter().filter(|&&o| o).count();
    Ok(format!(
        "{} clauses; 10 random instances: conditions hold for {agree}/10 mutations and {held}/{} other rigid C'",
        report.clauses.len(),
        others.len()
    ))
}

fn r_classes() -> Outcome {
    let prob = ex61();
    let ctx = &prob.ctx;
    let m = ok(Mutation::new(ctx, ok(MutationInput::new(ctx, sub(&prob, "C"), sub(&prob, "D")))?))?;
    let a = ok(m.a_objects())?;
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let atlas: Vec<usize> = (0..ctx.len()).collect();
    let mut maps = Vec::new();
    for x in 0..ctx.len() {
        maps.push(ok(m.right_hd_approximation(ctx.member(x)))?.f().clone());
    }
    for _ in 0..10_000 {
        if maps.len() >= 120 {
            break;
        }
        let (y, x) = (random_sum(ctx, &atlas, &mut rng, 2), random_sum(ctx, &atlas, &mut rng, 2));
        if let Some(f) = random_map(ctx, &y, &x, &mut rng) {
            maps.push(f);
        }
    }
    ensure(maps.len() >= 100, format!("only {} morphisms sampled", maps.len()))?;
    let (mut tilde, mut r1) = (0, 0);
    for f in &maps {
        let flags = ok(classify_r(&m, f))?;
        ensure(flags.monotone(), format!("flags not monotone on {} -> {}", f.source.name, f.target.name))?;
        if flags.r1_tilde {
            ensure(ok(check_g1_property(&m, &a, f))?, "g1 property fails")?;
            tilde += 1;
            r1 += usize::from(flags.r1);
        }
    }
    ensure(r1 > 0, "no R₁ members harvested")?;
    Ok(format!("{} morphisms, {tilde} in R̃₁, {r1} in R₁ inverted", maps.len()))
}

fn determinism() -> Outcome {
    let runs: [&[&str]; 12] = [
        &["demo", "ex61", "check"],
        &["demo", "ex61", "perp"],
        &["demo", "ex61", "rigid"],
        &["demo", "ex61", "cotorsion"],
        &["demo", "ex61", "heart"],
        &["demo", "ex61", "mutate"],
        &["demo", "ex61", "localize"],
        &["demo", "ex61", "verify-main-theorem"],
        &["demo", "ex61", "classify-morphism", "C", "D", "2/34", "2/3"],
        &["demo", "ex61", "export-dot", "localized", "C", "D"],
        &["demo", "ex62", "mutate"],
        &["--print-panels", "demo", "ex62", "check"],
    ];
    for args in runs {
        let args: Vec<&str> = ["--seed", "5"].iter().chain(args).copied().collect();
        let (first, second) = (binary(&args), binary(&args));
        ensure(first == second, format!("`{}` differs between runs", args.join(" ")))?;
        ensure(first.0.is_some_and(|c| c != 2), format!("`{}` was rejected", args.join(" ")))?;
    }
    Ok(format!("{} commands byte-identical across two runs", runs.len()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("ex61 end to end", ex61_end_to_end),
        ("ex62 mutation", ex62_mutation),
        ("Ext¹ oracle", ext_oracle),
        ("CoCone oracle", cocone_oracle),
        ("cohomological functor", cohomological_suite),
        ("approximation suite", approximation_suite),
        ("localization certificates", localization_certificates),
        ("pseudo-Morita", pseudo_morita),
        ("R-classes", r_classes),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {}/{} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
