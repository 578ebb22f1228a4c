//! Morphisms factoring through a subcategory, and left/right
//! approximations by subcategories.

use std::sync::Arc;

use crate::context::{Context, Subcat};
use crate::linalg::Subspace;
use crate::rep::{hom_len, DirectSum, HomSpace, Rep, RepMap};

/// `[S](X, Y)`: the span of all `b ∘ a` with `a: X -> S_i`, `b: S_i -> Y`, as
/// a subspace of flattened `Hom(X, Y)`.
pub fn ideal_subspace(ctx: &Context, x: &Arc<Rep>, y: &Arc<Rep>, s: &Subcat) -> Subspace {
    let alg = ctx.algebra();
    let mut out = Subspace::zero(alg.p(), hom_len(x, y));
    for i in s.iter() {
        let si = ctx.member(i);
        let into = HomSpace::compute(alg, x, si);
        if into.dim() == 0 {
            continue;
        }
        let from = HomSpace::compute(alg, si, y);
        for b in from.basis() {
            for a in into.basis() {
                out.insert(b.after(a).flatten());
            }
        }
    }
    out
}

/// An explicit factorisation `f = b ∘ a` through an object of `add S`.
#[derive(Clone, Debug)]
pub struct Factorization {
    pub through: DirectSum,
    pub a: RepMap,
    pub b: RepMap,
}

/// Decides whether `f` factors through `add S`, returning a witness.
pub fn factors_through(ctx: &Context, f: &RepMap, s: &Subcat) -> Option<Factorization> {
    let alg = ctx.algebra();
    let (x, y) = (&f.source, &f.target);
    if f.is_zero() {
        let through = ctx.object(&[]);
        return Some(Factorization {
            a: RepMap::zero(x, &through.rep),
            b: RepMap::zero(&through.rep, y),
            through,
        });
    }
    let mut pairs: Vec<(usize, RepMap, RepMap)> = Vec::new();
    for i in s.iter() {
        let si = ctx.member(i);
        let into = HomSpace::compute(alg, x, si);
        if into.dim() == 0 {
            continue;
        }
        let from = HomSpace::compute(alg, si, y);
        for b in from.basis() {
            for a in into.basis() {
                pairs.push((i, a.clone(), b.clone()));
            }
        }
    }
    let cols: Vec<Vec<u32>> = pairs.iter().map(|(_, a, b)| b.after(a).flatten()).collect();
    let coeffs = crate::homology::solve_combination(alg.p(), &cols, &f.flatten())?;
    let used: Vec<usize> = (0..pairs.len()).filter(|&k| coeffs[k] != 0).collect();
    let through = ctx.object(&used.iter().map(|&k| pairs[k].0).collect::<Vec<_>>());
    let a_comps: Vec<RepMap> = used.iter().map(|&k| pairs[k].1.scale(coeffs[k])).collect();
    let b_comps: Vec<RepMap> = used.iter().map(|&k| pairs[k].2.clone()).collect();
    let a = through.map_into(x, &a_comps);
    let b = through.map_from(y, &b_comps);
    Some(Factorization { through, a, b })
}

/// An approximation by a sum of atlas members. For a right approximation
/// `map: sum -> B`; for a left approximation `map: B -> sum`.
#[derive(Clone, Debug)]
pub struct Approximation {
    pub parts: Vec<usize>,
    pub sum: DirectSum,
    pub map: RepMap,
}

impl Approximation {
    pub fn object(&self) -> &Arc<Rep> {
        &self.sum.rep
    }
}

/// Components `(member, map S_i -> B)` of the evaluation map.
fn right_components(ctx: &Context, s: &Subcat, b: &Arc<Rep>) -> Vec<(usize, RepMap)> {
    let mut out = Vec::new();
    for i in s.iter() {
        let h = HomSpace::compute(ctx.algebra(), ctx.member(i), b);
        out.extend(h.basis().iter().map(|phi| (i, phi.clone())));
    }
    out
}

fn left_components(ctx: &Context, s: &Subcat, b: &Arc<Rep>) -> Vec<(usize, RepMap)> {
    let mut out = Vec::new();
    for i in s.iter() {
        let h = HomSpace::compute(ctx.algebra(), b, ctx.member(i));
        out.extend(h.basis().iter().map(|psi| (i, psi.clone())));
    }
    out
}

/// Whether component `j` of a right approximation is redundant, i.e.
/// `φ_j ∈ Σ_{k ≠ j} φ_k ∘ Hom(S_j, S_k)`.
fn right_redundant(ctx: &Context, comps: &[(usize, RepMap)], alive: &[bool], j: usize) -> bool {
    let (ij, phi) = &comps[j];
    let mut span = Subspace::zero(ctx.p(), phi.flatten().len());
    for (k, (ik, phik)) in comps.iter().enumerate() {
        if k == j || !alive[k] {
            continue;
        }
        for h in ctx.hom(*ij, *ik).basis() {
            span.insert(phik.after(h).flatten());
        }
    }
    span.contains(&phi.flatten())
}

fn left_redundant(ctx: &Context, comps: &[(usize, RepMap)], alive: &[bool], j: usize) -> bool {
    let (ij, psi) = &comps[j];
    let mut span = Subspace::zero(ctx.p(), psi.flatten().len());
    for (k, (ik, psik)) in comps.iter().enumerate() {
        if k == j || !alive[k] {
            continue;
        }
        for h in ctx.hom(*ik, *ij).basis() {
            span.insert(h.after(psik).flatten());
        }
    }
    span.contains(&psi.flatten())
}

fn assemble_right(ctx: &Context, b: &Arc<Rep>, comps: Vec<(usize, RepMap)>) -> Approximation {
    let parts: Vec<usize> = comps.iter().map(|c| c.0).collect();
    let sum = ctx.object(&parts);
    let maps: Vec<RepMap> = comps.into_iter().map(|c| c.1).collect();
    let map = sum.map_from(b, &maps);
    Approximation { parts, sum, map }
}

fn assemble_left(ctx: &Context, b: &Arc<Rep>, comps: Vec<(usize, RepMap)>) -> Approximation {
    let parts: Vec<usize> = comps.iter().map(|c| c.0).collect();
    let sum = ctx.object(&parts);
    let maps: Vec<RepMap> = comps.into_iter().map(|c| c.1).collect();
    let map = sum.map_into(b, &maps);
    Approximation { parts, sum, map }
}

/// Whether component `j` can be dropped given the ones still alive.
type Redundancy = fn(&Context, &[(usize, RepMap)], &[bool], usize) -> bool;

/// Greedy deletion of redundant components; `order` fixes the scan order.
fn prune(
    ctx: &Context,
    comps: &[(usize, RepMap)],
    order: &[usize],
    redundant: Redundancy,
) -> Vec<bool> {
    let mut alive = vec![true; comps.len()];
    for &j in order {
        if redundant(ctx, comps, &alive, j) {
            alive[j] = false;
        }
    }
    alive
}

/// Right `S`-approximation of `B`: the evaluation map, or with `minimal` a
/// right minimal one obtained by deleting redundant components.
pub fn right_approximation(ctx: &Context, s: &Subcat, b: &Arc<Rep>, minimal: bool) -> Approximation {
    let comps = right_components(ctx, s, b);
    let order: Vec<usize> = (0..comps.len()).collect();
    right_approximation_ordered(ctx, comps, b, minimal, &order)
}

fn right_approximation_ordered(
    ctx: &Context,
    comps: Vec<(usize, RepMap)>,
    b: &Arc<Rep>,
    minimal: bool,
    order: &[usize],
) -> Approximation {
    if !minimal {
        return assemble_right(ctx, b, comps);
    }
    let alive = prune(ctx, &comps, order, right_redundant);
    let kept = comps.into_iter().zip(alive).filter(|(_, a)| *a).map(|(c, _)| c).collect();
    assemble_right(ctx, b, kept)
}

/// Same as [`right_approximation`] with a caller-chosen deletion order, used
/// to check that the minimal target does not depend on it.
pub fn right_minimal_with_order(ctx: &Context, s: &Subcat, b: &Arc<Rep>, order: &[usize]) -> Approximation {
    let comps = right_components(ctx, s, b);
    right_approximation_ordered(ctx, comps, b, true, order)
}

pub fn left_approximation(ctx: &Context, s: &Subcat, b: &Arc<Rep>, minimal: bool) -> Approximation {
    let comps = left_components(ctx, s, b);
    let order: Vec<usize> = (0..comps.len()).collect();
    left_approximation_ordered(ctx, comps, b, minimal, &order)
}

fn left_approximation_ordered(
    ctx: &Context,
    comps: Vec<(usize, RepMap)>,
    b: &Arc<Rep>,
    minimal: bool,
    order: &[usize],
) -> Approximation {
    if !minimal {
        return assemble_left(ctx, b, comps);
    }
    let alive = prune(ctx, &comps, order, left_redundant);
    let kept = comps.into_iter().zip(alive).filter(|(_, a)| *a).map(|(c, _)| c).collect();
    assemble_left(ctx, b, kept)
}

pub fn left_minimal_with_order(ctx: &Context, s: &Subcat, b: &Arc<Rep>, order: &[usize]) -> Approximation {
    let comps = left_components(ctx, s, b);
    left_approximation_ordered(ctx, comps, b, true, order)
}

/// Number of components of the evaluation map (for choosing orders).
pub fn component_count(ctx: &Context, s: &Subcat, b: &Arc<Rep>, right: bool) -> usize {
    if right {
        right_components(ctx, s, b).len()
    } else {
        left_components(ctx, s, b).len()
    }
}

/// Whether `g: S0 -> B` is a right `S`-approximation: every map from a
/// member of `S` to `B` factors through `g`.
pub fn is_right_approximation(ctx: &Context, s: &Subcat, g: &RepMap) -> bool {
    let alg = ctx.algebra();
    s.iter().all(|i| {
        let si = ctx.member(i);
        let target = HomSpace::compute(alg, si, &g.target);
        if target.dim() == 0 {
            return true;
        }
        let through = HomSpace::compute(alg, si, &g.source);
        let mut img = Subspace::zero(alg.p(), hom_len(si, &g.target));
        for t in through.basis() {
            img.insert(g.after(t).flatten());
        }
        img.dim() == target.dim()
    })
}

/// Whether `g: B -> S0` is a left `S`-approximation.
pub fn is_left_approximation(ctx: &Context, s: &Subcat, g: &RepMap) -> bool {
    let alg = ctx.algebra();
    s.iter().all(|i| {
        let si = ctx.member(i);
        let target = HomSpace::compute(alg, &g.source, si);
        if target.dim() == 0 {
            return true;
        }
        let through = HomSpace::compute(alg, &g.target, si);
        let mut img = Subspace::zero(alg.p(), hom_len(&g.source, si));
        for t in through.basis() {
            img.insert(t.after(g).flatten());
        }
        img.dim() == target.dim()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::Config;
    use crate::fixtures;

    #[test]
    fn projective_approximation_is_the_cover() {
        let prob = fixtures::ex61(Config::default()).unwrap();
        let ctx = &prob.ctx;
        let p = ctx.projectives();
        for i in 0..ctx.len() {
            let x = ctx.member(i);
            let g = right_approximation(ctx, &p, x, true);
            assert!(g.map.is_surjective(), "{}", x.name);
            let (cover, _) = crate::homology::projective_cover(ctx.algebra(), x);
            assert_eq!(g.object().dims, cover.rep.dims, "{}", x.name);
            assert!(is_right_approximation(ctx, &p, &g.map));
        }
    }

    #[test]
    fn members_approximate_themselves() {
        let prob = fixtures::ex61(Config::default()).unwrap();
        let ctx = &prob.ctx;
        let c = prob.subcat("C").unwrap();
        for i in c.iter() {
            let x = ctx.member(i);
            assert!(right_approximation(ctx, c, x, true).map.is_iso());
            assert!(left_approximation(ctx, c, x, true).map.is_iso());
        }
    }

    #[test]
    fn identity_factors_only_through_containing_subcats() {
        let prob = fixtures::ex61(Config::default()).unwrap();
        let ctx = &prob.ctx;
        let c = prob.subcat("C").unwrap();
        let x = ctx.member(ctx.lookup("3").unwrap());
        let id = RepMap::identity(x);
        assert!(factors_through(ctx, &id, c).is_none());
        assert!(factors_through(ctx, &id, &ctx.all()).is_some());
        let w = factors_through(ctx, &id, &ctx.all()).unwrap();
        assert_eq!(w.b.after(&w.a), id);
    }
}
