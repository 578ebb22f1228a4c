//! The diagram (◇) of a morphism and the classes `R₀ ⊆ R₁ ⊆ R₂`,
//! `R₁ ⊆ R̃₁` it defines relative to a mutation input.

use std::sync::Arc;

use crate::approx::factors_through;
use crate::context::{Context, Subcat};
use crate::error::{Error, Result};
use crate::homology::{injective_envelope, projective_cover, pullback, pushout};
use crate::mutation::{is_iso_modulo, Mutation};
use crate::rep::{direct_sum, Rep, RepMap};

/// For `f: Y -> X`: `Z₁` is the pullback of `Y -> X <- P_X` and `Z₂` the
/// pushout of `I^Y <- Y -> X`.
#[derive(Clone, Debug)]
pub struct Diamond {
    pub f: RepMap,
    pub cover: RepMap,
    pub envelope: RepMap,
    /// `g: Z₁ -> Y`.
    pub g: RepMap,
    /// `Z₁ -> P_X`.
    pub to_cover: RepMap,
    /// `h: X -> Z₂`.
    pub h: RepMap,
    /// `I^Y -> Z₂`.
    pub from_envelope: RepMap,
}

impl Diamond {
    pub fn z1(&self) -> &Arc<Rep> {
        &self.g.source
    }

    pub fn z2(&self) -> &Arc<Rep> {
        &self.h.target
    }

    /// Both squares commute, `g` is onto and `h` is into.
    pub fn commutes(&self) -> bool {
        self.f.after(&self.g) == self.cover.after(&self.to_cover)
            && self.h.after(&self.f) == self.from_envelope.after(&self.envelope)
            && self.g.is_surjective()
            && self.h.is_injective()
    }
}

/// (◇) with the minimal projective cover and injective envelope.
pub fn diamond_diagram(ctx: &Context, f: &RepMap) -> Diamond {
    diamond_padded(ctx, f, &[], &[])
}

/// (◇) with the cover and envelope padded by extra atlas projectives and
/// injectives (mapped by zero), for testing choice independence.
pub fn diamond_padded(ctx: &Context, f: &RepMap, extra_p: &[usize], extra_i: &[usize]) -> Diamond {
    let alg = ctx.algebra();
    let (_, pi) = projective_cover(alg, &f.target);
    let (_, iota) = injective_envelope(alg, &f.source);
    let cover = pad_source(ctx, &pi, extra_p);
    let envelope = pad_target(ctx, &iota, extra_i);
    let (to_cover, g) = pullback(alg, &cover, f);
    let (from_envelope, h) = pushout(alg, &envelope, f);
    Diamond { f: f.clone(), cover, envelope, g, to_cover, h, from_envelope }
}

fn pad_source(ctx: &Context, m: &RepMap, extra: &[usize]) -> RepMap {
    if extra.is_empty() {
        return m.clone();
    }
    let mut parts = vec![m.source.clone()];
    parts.extend(extra.iter().map(|&i| ctx.member(i).clone()));
    let sum = direct_sum(ctx.algebra(), &parts);
    let mut comps = vec![m.clone()];
    comps.extend(parts[1..].iter().map(|p| RepMap::zero(p, &m.target)));
    sum.map_from(&m.target, &comps)
}

fn pad_target(ctx: &Context, m: &RepMap, extra: &[usize]) -> RepMap {
    if extra.is_empty() {
        return m.clone();
    }
    let mut parts = vec![m.target.clone()];
    parts.extend(extra.iter().map(|&i| ctx.member(i).clone()));
    let sum = direct_sum(ctx.algebra(), &parts);
    let mut comps = vec![m.clone()];
    comps.extend(parts[1..].iter().map(|p| RepMap::zero(&m.source, p)));
    sum.map_into(&m.source, &comps)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RFlags {
    pub r0: bool,
    pub r1: bool,
    pub r1_tilde: bool,
    pub r2: bool,
}

impl RFlags {
    /// `R₀ ⇒ R₁ ⇒ R₂` and `R₁ ⇒ R̃₁`.
    pub fn monotone(&self) -> bool {
        (!self.r0 || self.r1) && (!self.r1 || self.r2) && (!self.r1 || self.r1_tilde)
    }
}

/// The class flags of `f` read off a given diagram (◇).
pub fn classify_diamond(m: &Mutation, d: &Diamond) -> Result<RFlags> {
    let ctx = m.context();
    let (c_perp, d_perp) = (&m.heart.perp, &m.d_perp);
    let z1_c = ctx.in_add(d.z1(), c_perp)?;
    let z1_d = ctx.in_add(d.z1(), d_perp)?;
    let h_c = factors_through(ctx, &d.h, c_perp).is_some();
    let h_d = factors_through(ctx, &d.h, d_perp).is_some();
    let g_d = factors_through(ctx, &d.g, d_perp).is_some();
    Ok(RFlags { r0: z1_c && h_c, r1: z1_d && h_c, r1_tilde: g_d && h_c, r2: z1_d && h_d })
}

/// The class flags of `f` from the minimal (◇).
pub fn classify_r(m: &Mutation, f: &RepMap) -> Result<RFlags> {
    classify_diamond(m, &diamond_diagram(m.context(), f))
}

/// For `f ∈ R̃₁`: `H(f) ∈ S_A`; for `f ∈ R₁` also `R(H(f))` is invertible
/// in `H_D / C'`. Failure of either is an error.
pub fn check_g1_property(m: &Mutation, a: &Subcat, f: &RepMap) -> Result<bool> {
    let flags = classify_r(m, f)?;
    if !flags.r1_tilde {
        return Err(Error::precondition("morphism is not in R̃₁"));
    }
    let (hy, hx) = (m.heart.cohomological(&f.source)?, m.heart.cohomological(&f.target)?);
    let hf = m.heart.cohomological_map(f, &hy, &hx)?;
    if !m.in_s_a(&hf, a)? {
        return Err(Error::verification(format!("H({} -> {}) is not in S_A", f.source.name, f.target.name)));
    }
    if flags.r1 {
        let (ay, ax) = (m.right_hd_approximation(&hy.object)?, m.right_hd_approximation(&hx.object)?);
        if !is_iso_modulo(m.context(), &m.r_map(&hf, &ay, &ax)?, &m.c_prime) {
            return Err(Error::verification(format!(
                "R(H({} -> {})) is not invertible",
                f.source.name, f.target.name
            )));
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::Config;
    use crate::fixtures;
    use crate::mutation::MutationInput;

    fn mutation(prob: &crate::problem::Problem) -> Mutation<'_> {
        let s = |n: &str| prob.subcat(n).unwrap().clone();
        Mutation::new(&prob.ctx, MutationInput::new(&prob.ctx, s("C"), s("D")).unwrap()).unwrap()
    }

    #[test]
    fn flags_are_monotone_and_choice_free() {
        let prob = fixtures::ex61(Config::default()).unwrap();
        let ctx = &prob.ctx;
        let m = mutation(&prob);
        let (p, i) = (ctx.projective_at(0), ctx.injective_at(0));
        for y in 0..ctx.len() {
            for x in 0..ctx.len() {
                for f in ctx.hom(y, x).basis() {
                    let d = diamond_diagram(ctx, f);
                    assert!(d.commutes());
                    let flags = classify_diamond(&m, &d).unwrap();
                    assert!(flags.monotone(), "{} -> {}", ctx.name(y), ctx.name(x));
                    let padded = diamond_padded(ctx, f, &[p], &[i]);
                    assert!(padded.commutes());
                    assert_eq!(classify_diamond(&m, &padded).unwrap(), flags);
                }
            }
            let id = RepMap::identity(ctx.member(y));
            assert_eq!(classify_r(&m, &id).unwrap(), RFlags { r0: true, r1: true, r1_tilde: true, r2: true });
        }
    }

    #[test]
    fn approximations_lie_in_r1() {
        let prob = fixtures::ex61(Config::default()).unwrap();
        let ctx = &prob.ctx;
        let m = mutation(&prob);
        let a = m.a_objects().unwrap();
        for x in 0..ctx.len() {
            let approx = m.right_hd_approximation(ctx.member(x)).unwrap();
            assert!(classify_r(&m, approx.f()).unwrap().r1, "{}", ctx.name(x));
            assert!(check_g1_property(&m, &a, approx.f()).unwrap());
        }
    }
}
