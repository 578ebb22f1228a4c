//! The heart of a cotorsion pair `(C, C^⊥1)` for `C` with (RCP): its
//! quotient and module presentations, the cohomological functor, and the
//! constructions behind exact sequences in the heart.

use std::sync::Arc;

use crate::algebra::Algebra;
use crate::approx::{is_right_approximation, left_approximation, right_approximation};
use crate::context::{Context, Subcat};
use crate::cotorsion::{cocone_set, cotorsion_pair_from_rigid, right_witness, CotorsionPair};
use crate::error::{Error, Result};
use crate::homology::{cokernel, cokernel_over, kernel, lift, pullback, syzygy, Conflation, ExtSpace};
use crate::phi::{PhiModel, PhiObject};
use crate::quotient::QuotientCategory;
use crate::linalg::Subspace;
use crate::rep::{direct_sum, hom_len, HomSpace, Rep, RepMap};

/// `H(X) = B⁻` with the deflation `B⁻ -> X` (kernel in `C^⊥1`) and the
/// inflation `B⁻ -> C0`.
#[derive(Clone, Debug)]
pub struct CohomologicalImage {
    pub object: Arc<Rep>,
    pub to_x: RepMap,
    pub into_c: RepMap,
}

/// The diagram of the syzygy approximation of `X`: `X -> T0 -> C0`,
/// `Y0 -> P0 -> T0`, and the pullback `U0` with `f0: U0 -> X` (kernel `g0`).
#[derive(Clone, Debug)]
pub struct SyzygyDiagram {
    pub witness: Conflation,
    pub cover: Conflation,
    pub f0: RepMap,
    pub u0: RepMap,
    pub g0: RepMap,
}

pub struct HeartModel<'a> {
    ctx: &'a Context,
    pub c: Subcat,
    pub perp: Subcat,
    pub pair: CotorsionPair,
    /// Atlas members of `H = CoCone(C, C)`, including `C`.
    pub objects: Subcat,
    pub quotient: QuotientCategory<'a>,
    pub phi: PhiModel<'a>,
    omega_c: Subcat,
}

impl<'a> HeartModel<'a> {
    pub fn new(ctx: &'a Context, c: &Subcat) -> Result<HeartModel<'a>> {
        let pair = cotorsion_pair_from_rigid(ctx, c)?;
        let objects = cocone_set(ctx, c, c)?;
        let quotient = QuotientCategory::new(ctx, objects.clone(), c.clone());
        let phi = PhiModel::new(ctx, c)?;
        let omega_c = cocone_set(ctx, &ctx.projectives(), c)?;
        Ok(HeartModel { ctx, c: c.clone(), perp: pair.v.clone(), pair, objects, quotient, phi, omega_c })
    }

    pub fn context(&self) -> &'a Context {
        self.ctx
    }

    /// Heart members that are nonzero modulo `C`.
    pub fn nonzero(&self) -> Subcat {
        self.objects.difference(&self.c)
    }

    /// Atlas members of `ΩC = CoCone(P, C)`.
    pub fn omega_c(&self) -> &Subcat {
        &self.omega_c
    }

    pub fn phi_object(&self, x: &Arc<Rep>) -> PhiObject {
        self.phi.object(x)
    }

    pub fn phi_map(&self, f: &RepMap) -> RepMap {
        let (x, y) = (self.phi.object(&f.source), self.phi.object(&f.target));
        self.phi.map(f, &x, &y)
    }

    pub fn is_epi(&self, f: &RepMap) -> bool {
        self.phi_map(f).is_surjective()
    }

    pub fn is_mono(&self, f: &RepMap) -> bool {
        self.phi_map(f).is_injective()
    }

    /// Kernel of `f̄` as heart members (with multiplicity).
    pub fn kernel(&self, f: &RepMap) -> Result<Vec<usize>> {
        let k = self.phi.kernel(&self.phi_map(f));
        self.phi.decompose(&k.source, &self.nonzero().iter().collect::<Vec<_>>())
    }

    pub fn cokernel(&self, f: &RepMap) -> Result<Vec<usize>> {
        let c = cokernel_over(self.ctx.p(), self.phi.quiver(), &self.phi_map(f));
        self.phi.decompose(&c.target, &self.nonzero().iter().collect::<Vec<_>>())
    }

    /// `H(X)`: from `X -> V^X -> C^X` and the right `C`-approximation
    /// `C0 -> V^X`, the pullback `B⁻` of `C0 -> V^X <- X`.
    pub fn cohomological(&self, x: &Arc<Rep>) -> Result<CohomologicalImage> {
        let alg = self.ctx.algebra();
        let vx = left_approximation(self.ctx, &self.perp, x, true).map;
        if !vx.is_injective() {
            return Err(Error::verification(format!("left C^⊥1-approximation of {} is not injective", x.name)));
        }
        let c0 = right_approximation(self.ctx, &self.c, &vx.target, true).map;
        let (into_c, to_x) = pullback(alg, &c0, &vx);
        let object = into_c.source.clone();
        Ok(CohomologicalImage { object, to_x, into_c })
    }

    /// `H(f)`: a lift of `f ∘ (B⁻_X -> X)` through `B⁻_Y -> Y`, well defined
    /// modulo `[C]`.
    pub fn cohomological_map(&self, f: &RepMap, hx: &CohomologicalImage, hy: &CohomologicalImage) -> Result<RepMap> {
        lift(self.ctx.algebra(), &f.after(&hx.to_x), &hy.to_x)
            .ok_or_else(|| Error::verification(format!("H({} -> {}) has no lift", f.source.name, f.target.name)))
    }

    /// Heart members making up `H(X)` modulo `C`.
    pub fn cohomological_parts(&self, x: &Arc<Rep>) -> Result<Vec<usize>> {
        let h = self.cohomological(x)?;
        let d = self.ctx.decompose(&h.object)?;
        Ok(d.parts.into_iter().filter(|&i| !self.c.contains(i)).collect())
    }

    /// `K_g -> B ⊕ W_C -> C` for `g: B -> C` with `C` in the heart, where
    /// `V_C -> W_C -> C` is the minimal approximation conflation; also
    /// returns `k_g: K_g -> B`.
    pub fn kernel_conflation(&self, g: &RepMap) -> Result<(Conflation, RepMap)> {
        let alg = self.ctx.algebra();
        let w = right_witness(self.ctx, &self.c, &self.perp, &g.target)?
            .ok_or_else(|| Error::verification(format!("{} has no C-approximation conflation", g.target.name)))?;
        let sum = direct_sum(alg, &[g.source.clone(), w.middle().clone()]);
        let d = sum.map_from(&g.target, &[g.clone(), w.g.clone()]);
        let k = kernel(alg, &d);
        let kg = sum.projections[0].after(&k);
        let conf = Conflation { f: k, g: d };
        conf.check(alg)?;
        Ok((conf, kg))
    }

    /// Realises a short exact sequence `0 -> A -> B -> C -> 0` of the heart
    /// (given by `f`, `g` between heart objects) as a conflation
    /// `K_g -> B ⊕ W_C -> C` whose image is isomorphic to the input.
    pub fn realize_ses(&self, f: &RepMap, g: &RepMap) -> Result<(Conflation, RepMap)> {
        let (pf, pg) = (self.phi_map(f), self.phi_map(g));
        let exact = pf.is_injective()
            && pg.is_surjective()
            && pg.after(&pf).is_zero()
            && pf.source.dim() + pg.target.dim() == pf.target.dim();
        if !exact {
            return Err(Error::NotExact(format!("{} -> {} -> {}", f.source.name, f.target.name, g.target.name)));
        }
        let (conf, kg) = self.kernel_conflation(g)?;
        let pk = self.phi_map(&kg);
        let same = pk.is_injective() && pk.source.dim() == pf.source.dim() && pg.after(&pk).is_zero();
        if !same {
            return Err(Error::verification(format!("K_g for {} does not realise the kernel", g.source.name)));
        }
        Ok((conf, kg))
    }

    /// The syzygy approximation diagram of `X`.
    pub fn syzygy_approximation(&self, x: &Arc<Rep>) -> Result<SyzygyDiagram> {
        let alg = self.ctx.algebra();
        let t = left_approximation(self.ctx, &self.perp, x, true).map;
        if !t.is_injective() {
            return Err(Error::verification(format!("{} has no inflation into C^⊥1", x.name)));
        }
        let witness = Conflation { g: cokernel(alg, &t), f: t };
        let cover = syzygy(alg, witness.middle());
        let (u0, f0) = pullback(alg, &cover.g, &witness.f);
        let g0 = kernel(alg, &f0);
        Ok(SyzygyDiagram { witness, cover, f0, u0, g0 })
    }

    /// Whether `f0` is a right `ΩC`-approximation.
    pub fn check_syzygy_approximation(&self, d: &SyzygyDiagram) -> bool {
        is_right_approximation(self.ctx, &self.omega_c, &d.f0)
    }

    /// For every atlas member `B` with `Ext¹(T0, B) = 0`, whether every map
    /// `Y0 -> B` extends along `g0`.
    pub fn check_factors_through_p(&self, d: &SyzygyDiagram) -> bool {
        let alg = self.ctx.algebra();
        let t0 = d.witness.middle();
        (0..self.ctx.len()).all(|b| {
            let bm = self.ctx.member(b);
            if ExtSpace::compute(alg, t0, bm).dim() != 0 {
                return true;
            }
            surjects_precompose(alg, &d.g0, bm)
        })
    }

    /// For a deflation `g` between heart objects with `ḡ` epi, whether
    /// `Hom(X, g)` is surjective for all `X ∈ ΩC`.
    pub fn check_syzygy_epi(&self, g: &RepMap) -> Result<bool> {
        if !g.is_surjective() || !self.is_epi(g) {
            return Err(Error::precondition("expects a deflation that is epic in the heart"));
        }
        let alg = self.ctx.algebra();
        Ok(self.omega_c.iter().all(|x| surjects_postcompose(alg, self.ctx.member(x), g)))
    }
}

/// Whether `Hom(X, g)` is surjective.
pub fn surjects_postcompose(alg: &Algebra, x: &Arc<Rep>, g: &RepMap) -> bool {
    let target = HomSpace::compute(alg, x, &g.target);
    let source = HomSpace::compute(alg, x, &g.source);
    let rank = Subspace::spanned_by(
        alg.p(),
        hom_len(x, &g.target),
        source.basis().iter().map(|t| g.after(t).flatten()),
    )
    .dim();
    rank == target.dim()
}

/// Whether `Hom(f, B)` is surjective.
pub fn surjects_precompose(alg: &Algebra, f: &RepMap, b: &Arc<Rep>) -> bool {
    let target = HomSpace::compute(alg, &f.source, b);
    let source = HomSpace::compute(alg, &f.target, b);
    let rank = Subspace::spanned_by(
        alg.p(),
        hom_len(&f.source, b),
        source.basis().iter().map(|t| t.after(f).flatten()),
    )
    .dim();
    rank == target.dim()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::Config;
    use crate::cotorsion::star_membership;
    use crate::fixtures;

    #[test]
    fn module_model_matches_quotient() {
        let prob = fixtures::ex61(Config::default()).unwrap();
        let ctx = &prob.ctx;
        let h = HeartModel::new(ctx, prob.subcat("C").unwrap()).unwrap();
        assert_eq!(&h.nonzero(), prob.subcat("Heart").unwrap());
        for i in h.c.iter() {
            assert_eq!(h.phi.member(i).module.dim(), 0);
        }
        for x in h.nonzero().iter() {
            assert!(h.phi.member(x).module.dim() > 0);
            for y in h.nonzero().iter() {
                let (mx, my) = (h.phi.member(x), h.phi.member(y));
                assert_eq!(h.phi.hom(&mx.module, &my.module).dim(), h.quotient.hom(x, y).dim());
            }
        }
    }

    #[test]
    fn cohomological_functor_on_atlas() {
        let prob = fixtures::ex61(Config::default()).unwrap();
        let ctx = &prob.ctx;
        let h = HeartModel::new(ctx, prob.subcat("C").unwrap()).unwrap();
        for i in 0..ctx.len() {
            let x = ctx.member(i);
            let parts = h.cohomological_parts(x).unwrap();
            if h.nonzero().contains(i) {
                assert_eq!(parts, vec![i]);
            }
            let star = star_membership(ctx, x, &h.c, &h.perp).unwrap();
            assert_eq!(parts.is_empty(), star, "{}", x.name);
        }
    }
}
