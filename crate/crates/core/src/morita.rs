//! Reflection and coreflection conflations of twin cotorsion pairs and the
//! functors `K: H_D/C' -> H'_N/M`, `K': H'_N/M -> H_D/C'` between the two
//! localisation models.

use std::sync::Arc;

use crate::approx::ideal_subspace;
use crate::context::{Context, Subcat};
use crate::cotorsion::{cocone_set, cone_set, left_witness, right_witness, TwinPair};
use crate::error::{Error, Result};
use crate::heart::HeartModel;
use crate::homology::{extend, factor_through_epi, lift, pushout, Conflation};
use crate::mutation::is_iso_modulo;
use crate::quotient::{GabrielQuiver, QuotientCategory};
use crate::rep::{direct_sum, Rep, RepMap};
use crate::report::Clause;

/// `B -> B⁺ -> S` for a twin pair `((S, T), (U, V))`: from `V_B -> U_B -> B`
/// and `U_B -> T -> S`, `B⁺` is the pushout of `T <- U_B -> B`.
#[derive(Clone, Debug)]
pub struct Reflection {
    pub approx: Conflation,
    pub left: Conflation,
    pub conflation: Conflation,
    /// `T -> B⁺`.
    pub to_plus: RepMap,
}

impl Reflection {
    pub fn object(&self) -> &Arc<Rep> {
        self.conflation.middle()
    }
}

pub fn reflection(ctx: &Context, twin: &TwinPair, b: &Arc<Rep>) -> Result<Reflection> {
    let alg = ctx.algebra();
    let approx = right_witness(ctx, &twin.u, &twin.v, b)?
        .ok_or_else(|| Error::verification(format!("{} has no right U-approximation with kernel in V", b.name)))?;
    let left = left_witness(ctx, &twin.s, &twin.t, approx.middle())?
        .ok_or_else(|| Error::verification(format!("U_B of {} has no left T-approximation", b.name)))?;
    let (to_plus, from_b) = pushout(alg, &left.f, &approx.g);
    let sum = direct_sum(alg, &[left.middle().clone(), b.clone()]);
    let onto = to_plus.after(&sum.projections[0]).add(&from_b.after(&sum.projections[1]));
    let g = factor_through_epi(&left.g.after(&sum.projections[0]), &onto)
        .ok_or_else(|| Error::verification("pushout does not map onto S"))?;
    let conflation = Conflation { f: from_b, g };
    conflation.check(alg)?;
    Ok(Reflection { approx, left, conflation, to_plus })
}

/// The map `B0⁺ -> B1⁺` induced by `x: B0 -> B1`: lift to `U_B`, extend to
/// `T`, and pass to the cokernels of `V_B -> T`.
pub fn reflect_map(ctx: &Context, r0: &Reflection, r1: &Reflection, x: &RepMap) -> Result<RepMap> {
    let alg = ctx.algebra();
    let u = lift(alg, &x.after(&r0.approx.g), &r1.approx.g)
        .ok_or_else(|| Error::verification("map does not lift to the U-approximations"))?;
    let t = extend(alg, &r1.left.f.after(&u), &r0.left.f)
        .ok_or_else(|| Error::verification("map does not extend to the T-approximations"))?;
    let k = factor_through_epi(&r1.to_plus.after(&t), &r0.to_plus)
        .ok_or_else(|| Error::verification("map does not descend to B⁺"))?;
    if !k.is_homomorphism(alg) || k.after(&r0.conflation.f) != r1.conflation.f.after(x) {
        return Err(Error::verification("induced map on B⁺ does not commute"));
    }
    Ok(k)
}

/// `V -> B⁻ -> B`, computed as the dual of a reflection over the opposite
/// algebra for the twin pair `((V, U), (T, S))`.
#[derive(Clone, Debug)]
pub struct Coreflection {
    pub dual: Reflection,
    pub conflation: Conflation,
}

impl Coreflection {
    pub fn object(&self) -> &Arc<Rep> {
        self.conflation.middle()
    }
}

fn opposite(twin: &TwinPair) -> TwinPair {
    TwinPair { s: twin.v.clone(), t: twin.u.clone(), u: twin.t.clone(), v: twin.s.clone() }
}

pub fn coreflection(ctx: &Context, twin: &TwinPair, b: &Arc<Rep>) -> Result<Coreflection> {
    let dual = ctx.dual();
    let r = reflection(&dual, &opposite(twin), &Arc::new(b.dual()))?;
    let d = r.conflation.dual();
    let conflation = Conflation { g: d.g.retarget(&d.g.source, b), f: d.f };
    Ok(Coreflection { dual: r, conflation })
}

/// The map `B0⁻ -> B1⁻` induced by `y: B0 -> B1`.
pub fn coreflect_map(ctx: &Context, c0: &Coreflection, c1: &Coreflection, y: &RepMap) -> Result<RepMap> {
    let dual = ctx.dual();
    let dy = y.dual(c1.dual.conflation.left(), c0.dual.conflation.left());
    let m = reflect_map(&dual, &c1.dual, &c0.dual, &dy)?;
    Ok(m.dual(c0.object(), c1.object()))
}

/// The three twin pairs `((C, C^⊥1), (C^⊥1, M))`, `((D, D^⊥1), (D^⊥1, N))`
/// and `((C', C'^⊥1), (C'^⊥1, M'))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwinTriple {
    pub c: Subcat,
    pub d: Subcat,
    pub c_prime: Subcat,
    pub c_perp: Subcat,
    pub d_perp: Subcat,
    pub cp_perp: Subcat,
    pub m: Subcat,
    pub n: Subcat,
    pub m_prime: Subcat,
    /// `CoCone(D, C)`.
    pub h_d: Subcat,
    /// `Cone(M', N)`.
    pub h_n: Subcat,
}

impl TwinTriple {
    pub fn new(ctx: &Context, c: Subcat, d: Subcat, c_prime: Subcat) -> Result<TwinTriple> {
        let (c_perp, d_perp, cp_perp) = (ctx.right_perp(&c), ctx.right_perp(&d), ctx.right_perp(&c_prime));
        let (m, n, m_prime) = (ctx.right_perp(&c_perp), ctx.right_perp(&d_perp), ctx.right_perp(&cp_perp));
        let h_d = cocone_set(ctx, &d, &c)?;
        let h_n = cone_set(ctx, &m_prime, &n)?;
        Ok(TwinTriple { c, d, c_prime, c_perp, d_perp, cp_perp, m, n, m_prime, h_d, h_n })
    }

    pub fn twins(&self) -> [TwinPair; 3] {
        [
            TwinPair { s: self.c.clone(), t: self.c_perp.clone(), u: self.c_perp.clone(), v: self.m.clone() },
            TwinPair { s: self.d.clone(), t: self.d_perp.clone(), u: self.d_perp.clone(), v: self.n.clone() },
            TwinPair { s: self.c_prime.clone(), t: self.cp_perp.clone(), u: self.cp_perp.clone(), v: self.m_prime.clone() },
        ]
    }

    /// `((C^⊥1, M), (D^⊥1, N))`, whose `B⁺` is `H'_N`.
    pub fn plus_twin(&self) -> TwinPair {
        TwinPair { s: self.c_perp.clone(), t: self.m.clone(), u: self.d_perp.clone(), v: self.n.clone() }
    }

    /// `((D, D^⊥1), (C', C'^⊥1))`, whose `B⁻` is `H_D`.
    pub fn minus_twin(&self) -> TwinPair {
        TwinPair { s: self.d.clone(), t: self.d_perp.clone(), u: self.c_prime.clone(), v: self.cp_perp.clone() }
    }

    /// Every hypothesis of the main theorem that fails on this instance.
    pub fn verify(&self, ctx: &Context) -> Result<Vec<String>> {
        let mut out = Vec::new();
        for (name, twin) in ["C", "D", "C'"].iter().zip(self.twins()) {
            out.extend(twin.verify(ctx)?.into_iter().map(|f| format!("twin pair of {name}: {f}")));
            if !twin.s.is_subset(&twin.u) {
                out.push(format!("twin pair of {name}: S is not contained in U"));
            }
        }
        if !self.d.is_subset(&self.c.intersection(&self.c_prime)) {
            out.push("D is not contained in C ∩ C'".into());
        }
        if self.h_d != cocone_set(ctx, &self.c_prime, &self.d)? {
            out.push("CoCone(D, C) differs from CoCone(C', D)".into());
        }
        if self.h_n != cone_set(ctx, &self.n, &self.m)? {
            out.push("Cone(N, M) differs from Cone(M', N)".into());
        }
        Ok(out)
    }
}

#[derive(Clone, Debug)]
pub struct MoritaReport {
    pub clauses: Vec<Clause>,
    /// `K` on nonzero objects: `(X, K(X))` as atlas indices.
    pub bijection: Vec<(usize, usize)>,
}

impl MoritaReport {
    pub fn holds(&self) -> bool {
        self.clauses.iter().all(|c| c.pass)
    }
}

/// `K(X) = B⁺` for `X ∈ H_D`, checked to land in `H'_N`.
pub fn functor_k(ctx: &Context, triple: &TwinTriple, x: &Arc<Rep>) -> Result<Reflection> {
    let r = reflection(ctx, &triple.plus_twin(), x)?;
    if !ctx.in_add(r.object(), &triple.h_n)? {
        return Err(Error::verification(format!("K({}) is not in H'_N", x.name)));
    }
    Ok(r)
}

/// `K'(Y) = B⁻` for `Y ∈ H'_N`, checked to land in `H_D`.
pub fn functor_kprime(ctx: &Context, triple: &TwinTriple, y: &Arc<Rep>) -> Result<Coreflection> {
    let c = coreflection(ctx, &triple.minus_twin(), y)?;
    if !ctx.in_add(c.object(), &triple.h_d)? {
        return Err(Error::verification(format!("K'({}) is not in H_D", y.name)));
    }
    Ok(c)
}

/// Whether `H₀'(f)` is invertible in the heart of `(D^⊥1, N)`, computed as
/// the heart of `(N, N^⊥1)` over the opposite algebra.
fn h0_prime_iso(dual_heart: &HeartModel, f: &RepMap) -> Result<bool> {
    let (ds, dt) = (Arc::new(f.target.dual()), Arc::new(f.source.dual()));
    let df = f.dual(&ds, &dt);
    let (hs, ht) = (dual_heart.cohomological(&ds)?, dual_heart.cohomological(&dt)?);
    let h = dual_heart.cohomological_map(&df, &hs, &ht)?;
    Ok(is_iso_modulo(dual_heart.context(), &h, &dual_heart.c))
}

fn names(ctx: &Context, items: &[usize]) -> String {
    items.iter().map(|&i| ctx.name(i)).collect::<Vec<_>>().join(", ")
}

/// Certifies `H_D/C' ≃ H'_N/M` on the instance: reflections land in `H'_N`
/// with `H₀'(f)` invertible, `K'K ≅ id` and `KK' ≅ id` object-wise with
/// naturality on Hom bases, and `K` is a bijection on nonzero objects that
/// carries one Gabriel quiver onto the other.
pub fn verify_pseudo_morita(ctx: &Context, triple: &TwinTriple) -> Result<MoritaReport> {
    let alg = ctx.algebra();
    let mut clauses = Vec::new();
    let failures = triple.verify(ctx)?;
    clauses.push(Clause::new("hypotheses", failures.is_empty(), failures.join("; ")));

    let dual = ctx.dual();
    let dual_heart = HeartModel::new(&dual, &triple.n)?;
    let left = QuotientCategory::new(ctx, triple.h_d.clone(), triple.c_prime.clone());
    let right = QuotientCategory::new(ctx, triple.h_n.clone(), triple.m.clone());

    // K, then K'K ≅ id with b: X -> K'K(X) solving f' ∘ b = f.
    let mut bad = Vec::new();
    let mut units = Vec::new();
    for x in triple.h_d.iter() {
        let xm = ctx.member(x);
        let r = functor_k(ctx, triple, xm)?;
        if !ctx.in_add(r.conflation.right(), &triple.c_perp)? || !h0_prime_iso(&dual_heart, &r.conflation.f)? {
            bad.push(x);
        }
        let c = functor_kprime(ctx, triple, r.object())?;
        let b = lift(alg, &r.conflation.f, &c.conflation.g).filter(|b| is_iso_modulo(ctx, b, &triple.c_prime));
        units.push((x, r, c, b));
    }
    clauses.push(Clause::new("reflections", bad.is_empty(), names(ctx, &bad)));
    let missing: Vec<usize> = units.iter().filter(|u| u.3.is_none()).map(|u| u.0).collect();
    clauses.push(Clause::new("K'K isomorphic to id on objects", missing.is_empty(), names(ctx, &missing)));
    let mut squares = Vec::new();
    for (x0, r0, c0, b0) in &units {
        for (x1, r1, c1, b1) in &units {
            let (Some(b0), Some(b1)) = (b0, b1) else { continue };
            let ideal = ideal_subspace(ctx, ctx.member(*x0), c1.object(), &triple.c_prime);
            for x in ctx.hom(*x0, *x1).basis() {
                let y = coreflect_map(ctx, c0, c1, &reflect_map(ctx, r0, r1, x)?)?;
                if !ideal.contains(&b1.after(x).sub(&y.after(b0)).flatten()) {
                    squares.push(format!("{} -> {}", ctx.name(*x0), ctx.name(*x1)));
                }
            }
        }
    }
    clauses.push(Clause::new("K'K naturality", squares.is_empty(), squares.join(", ")));

    // K', then KK' ≅ id with b: KK'(Y) -> Y solving b ∘ f = g.
    let mut counits = Vec::new();
    for y in triple.h_n.iter() {
        let c = functor_kprime(ctx, triple, ctx.member(y))?;
        let r = functor_k(ctx, triple, c.object())?;
        let b = extend(alg, &c.conflation.g, &r.conflation.f).filter(|b| is_iso_modulo(ctx, b, &triple.m));
        counits.push((y, c, r, b));
    }
    let missing: Vec<usize> = counits.iter().filter(|u| u.3.is_none()).map(|u| u.0).collect();
    clauses.push(Clause::new("KK' isomorphic to id on objects", missing.is_empty(), names(ctx, &missing)));
    let mut squares = Vec::new();
    for (y0, c0, r0, b0) in &counits {
        for (y1, c1, r1, b1) in &counits {
            let (Some(b0), Some(b1)) = (b0, b1) else { continue };
            let ideal = ideal_subspace(ctx, r0.object(), ctx.member(*y1), &triple.m);
            for y in ctx.hom(*y0, *y1).basis() {
                let k = reflect_map(ctx, r0, r1, &coreflect_map(ctx, c0, c1, y)?)?;
                if !ideal.contains(&y.after(b0).sub(&b1.after(&k)).flatten()) {
                    squares.push(format!("{} -> {}", ctx.name(*y0), ctx.name(*y1)));
                }
            }
        }
    }
    clauses.push(Clause::new("KK' naturality", squares.is_empty(), squares.join(", ")));

    // K on nonzero objects.
    let mut bijection = Vec::new();
    let mut odd = Vec::new();
    for (x, r, _, _) in &units {
        if left.is_zero_object(*x) {
            continue;
        }
        let parts: Vec<usize> =
            ctx.decompose(r.object())?.parts.into_iter().filter(|&i| !right.is_zero_object(i)).collect();
        match parts[..] {
            [k] => bijection.push((*x, k)),
            _ => odd.push(*x),
        }
    }
    let mut images: Vec<usize> = bijection.iter().map(|b| b.1).collect();
    images.sort_unstable();
    images.dedup();
    let onto = odd.is_empty() && images.len() == bijection.len() && images == right.nonzero_objects();
    clauses.push(Clause::new("K is a bijection on nonzero objects", onto, names(ctx, &odd)));

    let mut dims = Vec::new();
    for &(x0, k0) in &bijection {
        for &(x1, k1) in &bijection {
            if left.hom(x0, x1).dim() != right.hom(k0, k1).dim() {
                dims.push(format!("{} -> {}", ctx.name(x0), ctx.name(x1)));
            }
        }
    }
    clauses.push(Clause::new("K preserves Hom dimensions", onto && dims.is_empty(), dims.join(", ")));

    let (gl, gr) = (left.gabriel_quiver()?, right.gabriel_quiver()?);
    let carried = onto && {
        let index = |q: &GabrielQuiver, i: usize| q.vertices.iter().position(|v| v == ctx.name(i)).unwrap();
        let perm: Vec<usize> = gl
            .vertices
            .iter()
            .map(|v| bijection.iter().find(|b| ctx.name(b.0) == v).map(|b| index(&gr, b.1)).unwrap())
            .collect();
        let mut moved: Vec<_> = gl.arrows.iter().map(|&(a, b, k)| (perm[a], perm[b], k)).collect();
        moved.sort_unstable();
        let mut target = gr.arrows.clone();
        target.sort_unstable();
        moved == target
    };
    clauses.push(Clause::new("K carries the Gabriel quiver", carried, format!("{} vs {}", gl.arrows.len(), gr.arrows.len())));
    Ok(MoritaReport { clauses, bijection })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::Config;
    use crate::fixtures;

    #[test]
    fn example_triple_is_pseudo_morita() {
        let prob = fixtures::ex61(Config::default()).unwrap();
        let ctx = &prob.ctx;
        let s = |n: &str| prob.subcat(n).unwrap().clone();
        let triple = TwinTriple::new(ctx, s("C"), s("D"), s("Cprime")).unwrap();
        assert_eq!(triple.m, s("M"));
        assert_eq!(triple.n, s("N"));
        assert_eq!(triple.m_prime, s("Mprime"));
        let report = verify_pseudo_morita(ctx, &triple).unwrap();
        for c in &report.clauses {
            assert!(c.pass, "{}: {}", c.name, c.detail);
        }
        let images: Subcat = Subcat::new(report.bijection.iter().map(|b| b.1));
        assert_eq!(images, s("LocalizedPrime"));
    }
}
