//! Cotorsion pairs, Cone/CoCone membership, twin cotorsion pairs and the
//! object sets of their hearts.

use std::sync::Arc;

use crate::approx::{left_approximation, right_approximation};
use crate::context::{Context, Subcat};
use crate::endo::{for_each_vector, random_vector, space_size, ENUMERATION_LIMIT};
use crate::error::{Error, Result};
use crate::homology::{cokernel, cosyzygy, factor_through_mono, kernel, pullback, Conflation, ExtSpace};
use crate::rep::{direct_sum, Rep, RepMap};

/// Outcome of the (RCP) check: projectives included, rigid, and every atlas
/// member has a surjective right approximation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RcpReport {
    pub contains_projectives: bool,
    pub rigid: bool,
    pub contravariantly_finite: bool,
}

impl RcpReport {
    pub fn holds(&self) -> bool {
        self.contains_projectives && self.rigid && self.contravariantly_finite
    }

    pub fn failing_clause(&self) -> Option<&'static str> {
        if !self.contains_projectives {
            Some("does not contain every indecomposable projective")
        } else if !self.rigid {
            Some("is not rigid")
        } else if !self.contravariantly_finite {
            Some("has a non-surjective minimal right approximation")
        } else {
            None
        }
    }
}

pub fn satisfies_rcp(ctx: &Context, c: &Subcat) -> RcpReport {
    let contains_projectives = ctx.projectives().is_subset(c);
    let rigid = ctx.is_rigid(c);
    let contravariantly_finite =
        (0..ctx.len()).all(|i| right_approximation(ctx, c, ctx.member(i), true).map.is_surjective());
    RcpReport { contains_projectives, rigid, contravariantly_finite }
}

/// The two approximation conflations `V_B -> U_B -> B` and `B -> V^B -> U^B`
/// of an object `B`.
#[derive(Clone, Debug)]
pub struct PairWitness {
    pub right: Conflation,
    pub left: Conflation,
}

#[derive(Clone, Debug)]
pub struct CotorsionPair {
    pub u: Subcat,
    pub v: Subcat,
    /// One entry per atlas member.
    pub witnesses: Vec<PairWitness>,
}

/// Result of [`verify_cotorsion_pair`]: the pair with witnesses when every
/// check passes, and a description of each failed check.
#[derive(Clone, Debug)]
pub struct PairCertificate {
    pub pair: Option<CotorsionPair>,
    pub failures: Vec<String>,
}

impl PairCertificate {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

/// `V_B -> U_B -> B` from the minimal right `U`-approximation, if its kernel
/// lies in `add V`. Exact: every witness contains the minimal one as a
/// summand, and `add V` is closed under summands.
pub fn right_witness(ctx: &Context, u: &Subcat, v: &Subcat, b: &Arc<Rep>) -> Result<Option<Conflation>> {
    let g = right_approximation(ctx, u, b, true).map;
    if !g.is_surjective() {
        return Ok(None);
    }
    let k = kernel(ctx.algebra(), &g);
    if !ctx.in_add(&k.source, v)? {
        return Ok(None);
    }
    Ok(Some(Conflation { f: k, g }))
}

/// `B -> V^B -> U^B` from the minimal left `V`-approximation.
pub fn left_witness(ctx: &Context, u: &Subcat, v: &Subcat, b: &Arc<Rep>) -> Result<Option<Conflation>> {
    let f = left_approximation(ctx, v, b, true).map;
    if !f.is_injective() {
        return Ok(None);
    }
    let c = cokernel(ctx.algebra(), &f);
    if !ctx.in_add(&c.target, u)? {
        return Ok(None);
    }
    Ok(Some(Conflation { f, g: c }))
}

pub fn verify_cotorsion_pair(ctx: &Context, u: &Subcat, v: &Subcat) -> Result<PairCertificate> {
    let mut failures = Vec::new();
    for i in u.iter() {
        for j in v.iter() {
            if ctx.ext_dim(i, j) != 0 {
                failures.push(format!("Ext¹({}, {}) ≠ 0", ctx.name(i), ctx.name(j)));
            }
        }
    }
    let mut witnesses = Vec::new();
    for b in 0..ctx.len() {
        let x = ctx.member(b);
        let right = right_witness(ctx, u, v, x)?;
        let left = left_witness(ctx, u, v, x)?;
        if right.is_none() {
            failures.push(format!("no conflation V ↣ U ↠ {}", x.name));
        }
        if left.is_none() {
            failures.push(format!("no conflation {} ↣ V ↠ U", x.name));
        }
        if let (Some(right), Some(left)) = (right, left) {
            witnesses.push(PairWitness { right, left });
        }
    }
    if ctx.left_perp(v) != *u {
        failures.push("U differs from ⊥1V".into());
    }
    if ctx.right_perp(u) != *v {
        failures.push("V differs from U^⊥1".into());
    }
    if !ctx.projectives().is_subset(u) {
        failures.push("U misses a projective".into());
    }
    if !ctx.injectives().is_subset(v) {
        failures.push("V misses an injective".into());
    }
    let pair = failures.is_empty().then(|| CotorsionPair { u: u.clone(), v: v.clone(), witnesses });
    Ok(PairCertificate { pair, failures })
}

/// `(C, C^⊥1)` for `C` satisfying (RCP), with the second witness built by
/// pulling back a right approximation along an injective envelope.
pub fn cotorsion_pair_from_rigid(ctx: &Context, c: &Subcat) -> Result<CotorsionPair> {
    let rcp = satisfies_rcp(ctx, c);
    if let Some(clause) = rcp.failing_clause() {
        return Err(Error::Precondition(format!("subcategory {clause}")));
    }
    let alg = ctx.algebra();
    let perp = ctx.right_perp(c);
    let mut witnesses = Vec::new();
    for b in 0..ctx.len() {
        let a = ctx.member(b);
        let right = right_witness(ctx, c, &perp, a)?
            .ok_or_else(|| Error::verification(format!("kernel of the C-approximation of {} not in C^⊥1", a.name)))?;
        // A -> I -> B' and C0 -> B' give A -> X -> C0 with X the pullback.
        let env = cosyzygy(alg, a);
        let approx = right_approximation(ctx, c, env.right(), true).map;
        let (to_c0, to_i) = pullback(alg, &approx, &env.g);
        let pair = direct_sum(alg, &[to_c0.target.clone(), to_i.target.clone()]);
        let incl = pair.map_into(&to_c0.source, &[to_c0.clone(), to_i]);
        let h = pair.map_into(a, &[RepMap::zero(a, &to_c0.target), env.f.clone()]);
        let f = factor_through_mono(&h, &incl).expect("A maps into the pullback");
        let left = Conflation { f, g: to_c0 };
        left.check(alg)?;
        if !ctx.in_add(left.middle(), &perp)? {
            return Err(Error::verification(format!("pullback middle term for {} not in C^⊥1", a.name)));
        }
        witnesses.push(PairWitness { right, left });
    }
    Ok(CotorsionPair { u: c.clone(), v: perp, witnesses })
}

/// Calls `f` on every nonempty multiset of members of `s` (as a sorted index
/// list) whose total dimension is at most `max_dim`. Stops when `f` returns
/// an error or `Some`.
fn for_each_multiset<T>(
    ctx: &Context,
    s: &Subcat,
    max_dim: usize,
    f: &mut dyn FnMut(&[usize]) -> Result<Option<T>>,
) -> Result<Option<T>> {
    fn go<T>(
        ctx: &Context,
        members: &[usize],
        start: usize,
        left: usize,
        cur: &mut Vec<usize>,
        f: &mut dyn FnMut(&[usize]) -> Result<Option<T>>,
    ) -> Result<Option<T>> {
        for k in start..members.len() {
            let d = ctx.member(members[k]).dim();
            if d == 0 || d > left {
                continue;
            }
            cur.push(members[k]);
            if let Some(t) = f(cur)? {
                return Ok(Some(t));
            }
            if let Some(t) = go(ctx, members, k, left - d, cur, f)? {
                return Ok(Some(t));
            }
            cur.pop();
        }
        Ok(None)
    }
    let members: Vec<usize> = s.iter().collect();
    go(ctx, &members, 0, max_dim, &mut Vec::new(), f)
}

/// Calls `f` on nonzero classes of an `e`-dimensional space: all of them
/// when the space is small, otherwise random ones. `budget` is decremented
/// per call; returns `Ok(None)` when nothing matched.
fn for_each_class<T>(
    ctx: &Context,
    e: usize,
    budget: &mut usize,
    f: &mut dyn FnMut(&[u32]) -> Result<Option<T>>,
) -> Result<Option<T>> {
    let p = ctx.p();
    if space_size(p, e).is_some_and(|n| n <= ENUMERATION_LIMIT) {
        let mut out = Ok(None);
        for_each_vector(p, e, |v| {
            if v.iter().all(|&c| c == 0) {
                return true;
            }
            if *budget == 0 {
                return false;
            }
            *budget -= 1;
            out = f(v);
            matches!(out, Ok(None))
        });
        return out;
    }
    while *budget > 0 {
        *budget -= 1;
        let v = ctx.with_rng(|rng| random_vector(rng, p, e));
        if let Some(t) = f(&v)? {
            return Ok(Some(t));
        }
    }
    Ok(None)
}

fn inconclusive(what: &str, x: &Rep, cap: usize) -> Error {
    Error::Inconclusive(format!("{what} for `{}`: no witness found up to total dimension {cap}", x.name))
}

/// Searches conflations `X -> E -> K` with `K ∈ add B''` and `E ∈ add B'`.
fn cocone_search(ctx: &Context, x: &Arc<Rep>, bp: &Subcat, bpp: &Subcat) -> Result<Conflation> {
    let alg = ctx.algebra();
    let cap = ctx.dim_cap();
    let mut budget = ctx.config().search_cap;
    let room = cap.saturating_sub(x.dim());
    let found = for_each_multiset(ctx, bpp, room, &mut |parts| {
        let k = ctx.object(parts);
        let ext = ExtSpace::compute(alg, &k.rep, x);
        for_each_class(ctx, ext.dim(), &mut budget, &mut |c| {
            let conf = ext.realize(alg, c);
            Ok(ctx.in_add(conf.middle(), bp)?.then_some(conf))
        })
    })?;
    found.ok_or_else(|| inconclusive("CoCone membership", x, cap))
}

/// Decides `X ∈ CoCone(B', B'')`, i.e. whether there is a conflation
/// `X -> B0 -> B1` with `B0 ∈ add B'` and `B1 ∈ add B''`, returning one.
///
/// Every witness inflation factors through the minimal left
/// `B'`-approximation `g`, so `g` must be injective. When
/// `Ext¹(B'', B') = 0` every witness is an approximation, hence
/// `g ⊕ (0 -> B2)`, and the cokernel of `g` decides. Otherwise a bounded
/// search runs and its failure is reported as [`Error::Inconclusive`].
pub fn cocone_membership(ctx: &Context, x: &Arc<Rep>, bp: &Subcat, bpp: &Subcat) -> Result<Option<Conflation>> {
    let g = left_approximation(ctx, bp, x, true).map;
    if !g.is_injective() {
        return Ok(None);
    }
    let q = cokernel(ctx.algebra(), &g);
    if ctx.in_add(&q.target, bpp)? {
        return Ok(Some(Conflation { f: g, g: q }));
    }
    if ctx.ext_orthogonal(bpp, bp) {
        return Ok(None);
    }
    cocone_search(ctx, x, bp, bpp).map(Some)
}

/// Decides `X ∈ Cone(B', B'')` (a conflation `B0 -> B1 -> X` with
/// `B0 ∈ add B'`, `B1 ∈ add B''`) by duality with [`cocone_membership`].
pub fn cone_membership(ctx: &Context, x: &Arc<Rep>, bp: &Subcat, bpp: &Subcat) -> Result<Option<Conflation>> {
    let dual = ctx.dual();
    let dx = Arc::new(x.dual());
    let found = cocone_membership(&dual, &dx, bpp, bp)?;
    Ok(found.map(|c| {
        let d = c.dual();
        let g = d.g.retarget(&d.g.source, x);
        Conflation { f: d.f, g }
    }))
}

/// Atlas members of `CoCone(B', B'')`.
pub fn cocone_set(ctx: &Context, bp: &Subcat, bpp: &Subcat) -> Result<Subcat> {
    let mut out = Subcat::default();
    for i in 0..ctx.len() {
        if cocone_membership(ctx, ctx.member(i), bp, bpp)?.is_some() {
            out.0.insert(i);
        }
    }
    Ok(out)
}

/// Atlas members of `Cone(B', B'')`.
pub fn cone_set(ctx: &Context, bp: &Subcat, bpp: &Subcat) -> Result<Subcat> {
    let mut out = Subcat::default();
    for i in 0..ctx.len() {
        if cone_membership(ctx, ctx.member(i), bp, bpp)?.is_some() {
            out.0.insert(i);
        }
    }
    Ok(out)
}

/// Whether `X` is a summand of a middle term `B1 -> E -> B2` with
/// `B1 ∈ add B1`, `B2 ∈ add B2`, i.e. `X ∈ add(B1 * B2)`.
///
/// Degenerate and approximation-built conflations give positive answers.
/// If `B1` is rigid and `Ext¹(B1, B2) = 0`, the long exact sequence shows
/// every such `E` lies in `B1^⊥1`, which is closed under summands; dually
/// for `⊥1B2`. Remaining cases fall back to a bounded search.
pub fn star_membership(ctx: &Context, x: &Arc<Rep>, b1: &Subcat, b2: &Subcat) -> Result<bool> {
    let alg = ctx.algebra();
    if ctx.in_add(x, b1)? || ctx.in_add(x, b2)? {
        return Ok(true);
    }
    let g = right_approximation(ctx, b1, x, true).map;
    if g.is_injective() && ctx.in_add(&cokernel(alg, &g).target, b2)? {
        return Ok(true);
    }
    let h = left_approximation(ctx, b2, x, true).map;
    if h.is_surjective() && ctx.in_add(&kernel(alg, &h).source, b1)? {
        return Ok(true);
    }
    let cross = ctx.ext_orthogonal(b1, b2);
    if cross && ctx.is_rigid(b1) {
        let outside = b1.iter().any(|i| ExtSpace::compute(alg, ctx.member(i), x).dim() != 0);
        if outside {
            return Ok(false);
        }
    }
    if cross && ctx.is_rigid(b2) {
        let outside = b2.iter().any(|j| ExtSpace::compute(alg, x, ctx.member(j)).dim() != 0);
        if outside {
            return Ok(false);
        }
    }
    star_search(ctx, x, b1, b2)
}

fn star_search(ctx: &Context, x: &Arc<Rep>, b1: &Subcat, b2: &Subcat) -> Result<bool> {
    let alg = ctx.algebra();
    let cap = ctx.dim_cap();
    let want = ctx.decompose(x)?.multiplicities();
    let mut budget = ctx.config().search_cap;
    let found = for_each_multiset(ctx, b2, cap, &mut |right| {
        let v1 = ctx.object(right);
        let room = cap - v1.rep.dim();
        for_each_multiset(ctx, b1, room, &mut |left| {
            let u1 = ctx.object(left);
            let ext = ExtSpace::compute(alg, &v1.rep, &u1.rep);
            for_each_class(ctx, ext.dim(), &mut budget, &mut |c| {
                let conf = ext.realize(alg, c);
                let have = ctx.decompose(conf.middle())?.multiplicities();
                Ok(want.iter().all(|(i, n)| have.get(i).is_some_and(|m| m >= n)).then_some(()))
            })
        })
    })?;
    match found {
        Some(()) => Ok(true),
        None => Err(inconclusive("star membership", x, cap)),
    }
}

/// A pair of cotorsion pairs `((S, T), (U, V))` with `S ⊆ U`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwinPair {
    pub s: Subcat,
    pub t: Subcat,
    pub u: Subcat,
    pub v: Subcat,
}

impl TwinPair {
    pub fn new(s: Subcat, t: Subcat, u: Subcat, v: Subcat) -> Result<TwinPair> {
        if !s.is_subset(&u) {
            return Err(Error::precondition("twin cotorsion pair needs S ⊆ U"));
        }
        Ok(TwinPair { s, t, u, v })
    }

    /// `((U, V), (U, V))`.
    pub fn degenerate(u: Subcat, v: Subcat) -> TwinPair {
        TwinPair { s: u.clone(), t: v.clone(), u, v }
    }

    /// `W = T ∩ U`.
    pub fn core(&self) -> Subcat {
        self.t.intersection(&self.u)
    }

    /// Failures of either inner pair, prefixed by which one failed.
    pub fn verify(&self, ctx: &Context) -> Result<Vec<String>> {
        let mut out = Vec::new();
        for (tag, a, b) in [("first", &self.s, &self.t), ("second", &self.u, &self.v)] {
            out.extend(verify_cotorsion_pair(ctx, a, b)?.failures.into_iter().map(|f| format!("{tag} pair: {f}")));
        }
        Ok(out)
    }
}

/// Objects admitting `V_B -> W_B -> B`, i.e. `Cone(V, W)`.
pub fn b_plus_objects(ctx: &Context, twin: &TwinPair) -> Result<Subcat> {
    cone_set(ctx, &twin.v, &twin.core())
}

/// Objects admitting `B -> W^B -> S^B`, i.e. `CoCone(W, S)`.
pub fn b_minus_objects(ctx: &Context, twin: &TwinPair) -> Result<Subcat> {
    cocone_set(ctx, &twin.core(), &twin.s)
}

/// `B⁺ ∩ B⁻`, including the members of `W`.
pub fn heart_objects(ctx: &Context, twin: &TwinPair) -> Result<Subcat> {
    Ok(b_plus_objects(ctx, twin)?.intersection(&b_minus_objects(ctx, twin)?))
}

/// Heart members that stay nonzero modulo `W`.
pub fn heart_nonzero(ctx: &Context, twin: &TwinPair) -> Result<Subcat> {
    Ok(heart_objects(ctx, twin)?.difference(&twin.core()))
}

/// The heart of a single cotorsion pair read off its minimal witnesses:
/// objects whose minimal right `U`-approximation and minimal left
/// `V`-approximation both land in `add(U ∩ V)`.
pub fn pair_heart_objects(ctx: &Context, u: &Subcat, v: &Subcat) -> Result<Subcat> {
    let w = u.intersection(v);
    let mut out = Subcat::default();
    for i in 0..ctx.len() {
        let x = ctx.member(i);
        let ub = right_approximation(ctx, u, x, true);
        let vb = left_approximation(ctx, v, x, true);
        if ub.parts.iter().all(|&j| w.contains(j)) && vb.parts.iter().all(|&j| w.contains(j)) {
            out.0.insert(i);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::Config;
    use crate::fixtures;
    use crate::problem::Problem;

    fn ex61() -> Problem {
        fixtures::ex61(Config::default()).unwrap()
    }

    #[test]
    fn perpendicular_panels() {
        let prob = ex61();
        let ctx = &prob.ctx;
        let s = |n: &str| prob.subcat(n).unwrap().clone();
        for c in ["C", "D", "Cprime"] {
            assert!(satisfies_rcp(ctx, &s(c)).holds(), "{c}");
        }
        assert_eq!(ctx.right_perp(&s("C")), s("Cperp"));
        assert_eq!(ctx.right_perp(&s("D")), s("Dperp"));
        assert_eq!(ctx.right_perp(&s("Cprime")), s("Cprimeperp"));
        assert_eq!(ctx.right_perp(&s("Cperp")), s("M"));
        assert_eq!(ctx.right_perp(&s("Dperp")), s("N"));
        assert_eq!(ctx.right_perp(&s("Cprimeperp")), s("Mprime"));
    }

    #[test]
    fn hearts_and_mutation() {
        let prob = ex61();
        let ctx = &prob.ctx;
        let s = |n: &str| prob.subcat(n).unwrap().clone();
        let h = cocone_set(ctx, &s("C"), &s("C")).unwrap();
        assert_eq!(h, s("Heart").union(&s("C")));
        let twin = TwinPair::degenerate(s("C"), s("Cperp"));
        assert_eq!(heart_nonzero(ctx, &twin).unwrap(), s("Heart"));
        assert_eq!(pair_heart_objects(ctx, &s("C"), &s("Cperp")).unwrap(), h);
        let prime = TwinPair::degenerate(s("Cprimeperp"), s("Mprime"));
        assert_eq!(heart_nonzero(ctx, &prime).unwrap(), s("HeartPrime"));
        let hd = cocone_set(ctx, &s("D"), &s("C")).unwrap();
        assert_eq!(hd.intersection(&s("Dperp")), s("Cprime"));
        assert_eq!(hd, cocone_set(ctx, &s("Cprime"), &s("D")).unwrap());
        let hn = cone_set(ctx, &s("Mprime"), &s("N")).unwrap();
        assert_eq!(hn, cone_set(ctx, &s("N"), &s("M")).unwrap());
        assert_eq!(hn.intersection(&ctx.left_perp(&s("N"))), s("M"));
    }

    #[test]
    fn pairs_verify() {
        let prob = ex61();
        let ctx = &prob.ctx;
        let s = |n: &str| prob.subcat(n).unwrap().clone();
        for (u, v) in [("C", "Cperp"), ("D", "Dperp"), ("Dperp", "N"), ("Cprimeperp", "Mprime")] {
            let cert = verify_cotorsion_pair(ctx, &s(u), &s(v)).unwrap();
            assert!(cert.holds(), "{u} {v}: {:?}", cert.failures);
        }
        let pair = cotorsion_pair_from_rigid(ctx, &s("C")).unwrap();
        assert_eq!(pair.v, s("Cperp"));
        let bad = s("C").difference(&ctx.projectives());
        assert!(cotorsion_pair_from_rigid(ctx, &bad).is_err());
    }
}
