//! Right mutation of a rigid subcategory `C` along `D ⊆ C`, the
//! localisation of the heart at `S_A`, and its model `H_D / C'`.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::approx::{ideal_subspace, right_approximation};
use crate::context::{Context, Subcat};
use crate::cotorsion::{cocone_membership, cocone_set, satisfies_rcp};
use crate::error::{Error, Result};
use crate::heart::{surjects_postcompose, HeartModel, SyzygyDiagram};
use crate::homology::{ext2_dim, lift, pushout_conflation, solve_combination, Conflation};
use crate::linalg::{Matrix, Subspace};
use crate::quotient::QuotientCategory;
use crate::rep::{hom_len, HomSpace, Rep, RepMap};

/// `D ⊆ C`, both with (RCP).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MutationInput {
    pub c: Subcat,
    pub d: Subcat,
}

impl MutationInput {
    pub fn new(ctx: &Context, c: Subcat, d: Subcat) -> Result<MutationInput> {
        if !d.is_subset(&c) {
            return Err(Error::precondition("D is not contained in C"));
        }
        for (name, s) in [("C", &c), ("D", &d)] {
            if let Some(clause) = satisfies_rcp(ctx, s).failing_clause() {
                return Err(Error::precondition(format!("{name} violates (RCP): {clause}")));
            }
        }
        Ok(MutationInput { c, d })
    }
}

/// `C' = CoCone(D, C) ∩ D^⊥1`. Rigidity is not part of the construction;
/// check it with [`Context::is_rigid`].
pub fn right_mutation(ctx: &Context, input: &MutationInput) -> Result<Subcat> {
    Ok(cocone_set(ctx, &input.d, &input.c)?.intersection(&ctx.right_perp(&input.d)))
}

/// `Z -> Y -> X` with `f: Y -> X` a right `H_D`-approximation and
/// `Z ∈ D^⊥1`, plus the pieces it was assembled from.
#[derive(Clone, Debug)]
pub struct HdApproximation {
    pub conflation: Conflation,
    pub syzygy: SyzygyDiagram,
    /// `f1: V1 -> Y0`, a right `ΩD`-approximation.
    pub f1: RepMap,
    /// `V1 -> P1 -> D1`.
    pub v1: Conflation,
    /// `Y0 -> Z -> D1`.
    pub z: Conflation,
}

impl HdApproximation {
    pub fn y(&self) -> &Arc<Rep> {
        self.conflation.middle()
    }

    /// The deflation `f: Y -> X`.
    #[allow(clippy::misnamed_getters)]
    pub fn f(&self) -> &RepMap {
        &self.conflation.g
    }
}

/// Everything derived from a [`MutationInput`]: the heart of `(C, C^⊥1)`,
/// `H_D`, `ΩD`, `C'` and `A`.
pub struct Mutation<'a> {
    ctx: &'a Context,
    pub input: MutationInput,
    pub heart: HeartModel<'a>,
    pub d_perp: Subcat,
    pub h_d: Subcat,
    pub omega_d: Subcat,
    pub c_prime: Subcat,
}

impl<'a> Mutation<'a> {
    pub fn new(ctx: &'a Context, input: MutationInput) -> Result<Mutation<'a>> {
        let heart = HeartModel::new(ctx, &input.c)?;
        let d_perp = ctx.right_perp(&input.d);
        let h_d = cocone_set(ctx, &input.d, &input.c)?;
        let omega_d = cocone_set(ctx, &ctx.projectives(), &input.d)?;
        let c_prime = h_d.intersection(&d_perp);
        Ok(Mutation { ctx, input, heart, d_perp, h_d, omega_d, c_prime })
    }

    pub fn context(&self) -> &'a Context {
        self.ctx
    }

    /// Builds `Z -> Y -> X` from the syzygy approximation of `X`: a right
    /// `ΩD`-approximation `V1 -> Y0`, the conflation `V1 -> P1 -> D1`, and
    /// two pushouts. Every property is checked; a failure names its clause.
    pub fn right_hd_approximation(&self, x: &Arc<Rep>) -> Result<HdApproximation> {
        let (ctx, alg) = (self.ctx, self.ctx.algebra());
        let syzygy = self.heart.syzygy_approximation(x)?;
        let y0 = syzygy.g0.source.clone();
        let f1 = right_approximation(ctx, &self.omega_d, &y0, true).map;
        if !f1.is_surjective() {
            return Err(Error::verification(format!("ΩD-approximation of Y0 for {} is not a deflation", x.name)));
        }
        let v1 = cocone_membership(ctx, &f1.source, &ctx.projectives(), &self.input.d)?
            .ok_or_else(|| Error::verification("ΩD-approximation has a summand outside CoCone(P, D)"))?;
        let z = pushout_conflation(alg, &v1, &f1);
        let conflation = pushout_conflation(alg, &Conflation { f: syzygy.g0.clone(), g: syzygy.f0.clone() }, &z.f);
        conflation.check(alg)?;
        let out = HdApproximation { conflation, syzygy, f1, v1, z };
        self.check_hd_approximation(&out)?;
        Ok(out)
    }

    fn check_hd_approximation(&self, a: &HdApproximation) -> Result<()> {
        let (ctx, alg) = (self.ctx, self.ctx.algebra());
        let x = a.conflation.right();
        let fail = |clause: &str| Err(Error::verification(format!("H_D-approximation of {}: {clause}", x.name)));
        if !ctx.in_add(a.y(), &self.h_d)? {
            return fail("Y is not in H_D");
        }
        if !ctx.in_add(a.conflation.left(), &self.d_perp)? {
            return fail("Z is not in D^⊥1");
        }
        if !self.h_d.iter().all(|t| surjects_postcompose(alg, ctx.member(t), a.f())) {
            return fail("f is not a right H_D-approximation");
        }
        for x2 in 0..ctx.len() {
            let hom = HomSpace::compute(alg, x, ctx.member(x2));
            let images: Vec<RepMap> = hom.basis().iter().map(|u| u.after(a.f())).collect();
            let ideal = ideal_subspace(ctx, a.y(), ctx.member(x2), &self.heart.perp);
            let target = ideal_subspace(ctx, x, ctx.member(x2), &self.heart.perp);
            if !kernel_modulo(&hom, &images, &ideal).iter().all(|u| target.contains(&u.flatten())) {
                return fail(&format!("x' ∘ f through C^⊥1 does not force x' through C^⊥1 for X' = {}", ctx.name(x2)));
            }
        }
        Ok(())
    }
}

/// Basis of the morphisms `u = Σ c_k basis_k` whose image `Σ c_k images_k`
/// lies in `ideal`.
pub fn kernel_modulo(hom: &HomSpace, images: &[RepMap], ideal: &Subspace) -> Vec<RepMap> {
    if hom.dim() == 0 {
        return Vec::new();
    }
    let reduced: Vec<Vec<u32>> = images
        .iter()
        .map(|m| {
            let mut v = m.flatten();
            ideal.reduce(&mut v);
            v
        })
        .collect();
    let n = ideal.ambient_dim();
    let null = Matrix::from_rows(ideal.p(), n, &reduced).transpose().nullspace();
    (0..null.cols()).map(|j| hom.combine(&null.column(j))).collect()
}

/// Whether `f: Y1 -> Y2` becomes invertible modulo `[S]`: some `s` has
/// `f∘s - 1` and `s∘f - 1` in the ideal.
pub fn is_iso_modulo(ctx: &Context, f: &RepMap, s: &Subcat) -> bool {
    let alg = ctx.algebra();
    let (y1, y2) = (&f.source, &f.target);
    let back = HomSpace::compute(alg, y2, y1);
    let (n2, n1) = (hom_len(y2, y2), hom_len(y1, y1));
    let mut cols: Vec<Vec<u32>> = back
        .basis()
        .iter()
        .map(|t| [f.after(t).flatten(), t.after(f).flatten()].concat())
        .collect();
    for v in ideal_subspace(ctx, y2, y2, s).basis() {
        cols.push([v.clone(), vec![0; n1]].concat());
    }
    for v in ideal_subspace(ctx, y1, y1, s).basis() {
        cols.push([vec![0; n2], v.clone()].concat());
    }
    let rhs = [RepMap::identity(y2).flatten(), RepMap::identity(y1).flatten()].concat();
    solve_combination(ctx.p(), &cols, &rhs).is_some()
}

impl Mutation<'_> {
    /// `A`, computed as the heart parts of `H(X)` over `X ∈ D^⊥1` and as the
    /// nonzero heart members in `D^⊥1`; disagreement is an error.
    pub fn a_objects(&self) -> Result<Subcat> {
        let mut images = BTreeSet::new();
        for x in self.d_perp.iter() {
            images.extend(self.heart.cohomological_parts(self.ctx.member(x))?);
        }
        let images = Subcat(images);
        let direct = self.heart.nonzero().intersection(&self.d_perp);
        if images != direct {
            return Err(Error::verification(format!(
                "H(D^⊥1) = {:?} but (H ∩ D^⊥1)/C = {:?}",
                self.ctx.subcat_names(&images),
                self.ctx.subcat_names(&direct)
            )));
        }
        Ok(direct)
    }

    /// Whether the heart morphism `f̄` is an epimorphism with kernel in `A`.
    pub fn in_s_a(&self, f: &RepMap, a: &Subcat) -> Result<bool> {
        if !self.heart.is_epi(f) {
            return Ok(false);
        }
        Ok(self.heart.kernel(f)?.iter().all(|&k| a.contains(k)))
    }

    /// `R(u): Y1 -> Y2` for `u: X1 -> X2`, lifting `u ∘ f1` through `f2`.
    pub fn r_map(&self, u: &RepMap, a1: &HdApproximation, a2: &HdApproximation) -> Result<RepMap> {
        let t = lift(self.ctx.algebra(), &u.after(a1.f()), a2.f())
            .ok_or_else(|| Error::verification(format!("R({} -> {}) has no lift", u.source.name, u.target.name)))?;
        if a2.f().after(&t) != u.after(a1.f()) {
            return Err(Error::verification("lifted square does not commute"));
        }
        Ok(t)
    }

    /// The model `H_D / C'` of the localisation of the heart at `S_A`,
    /// together with `R: X ↦ Y` on the nonzero heart members.
    pub fn localization_model(&self) -> Result<LocalizationModel<'_>> {
        let ctx = self.ctx;
        let a = self.a_objects()?;
        let model = QuotientCategory::new(ctx, self.h_d.clone(), self.c_prime.clone());
        let mut images = Vec::new();
        for x in self.heart.nonzero().iter() {
            images.push((x, self.right_hd_approximation(ctx.member(x))?));
        }
        let lm = LocalizationModel { model, a, images };
        self.check_density(&lm)?;
        self.check_inverts_s_a(&lm)?;
        self.check_full_faithful(&lm)?;
        Ok(lm)
    }

    fn check_density(&self, lm: &LocalizationModel) -> Result<()> {
        for (x, ax) in &lm.images {
            if !self.in_s_a(ax.f(), &lm.a)? {
                return Err(Error::verification(format!("f for {} is not in S_A", self.ctx.name(*x))));
            }
            if self.h_d.contains(*x) && !is_iso_modulo(self.ctx, ax.f(), &self.c_prime) {
                return Err(Error::verification(format!("R({}) is not isomorphic to it modulo C'", self.ctx.name(*x))));
            }
        }
        Ok(())
    }

    /// `R` sends every basis morphism in `S_A`, and every `f̄` of a right
    /// `H_D`-approximation, to an isomorphism; epimorphisms outside `S_A`
    /// must not become invertible.
    fn check_inverts_s_a(&self, lm: &LocalizationModel) -> Result<()> {
        let ctx = self.ctx;
        for (x1, a1) in &lm.images {
            for (x2, a2) in &lm.images {
                for u in ctx.hom(*x1, *x2).basis() {
                    if !self.heart.is_epi(u) {
                        continue;
                    }
                    let inverted = is_iso_modulo(ctx, &self.r_map(u, a1, a2)?, &self.c_prime);
                    if inverted != self.in_s_a(u, &lm.a)? {
                        return Err(Error::verification(format!(
                            "R inverts {} -> {} is {inverted}, membership in S_A disagrees",
                            ctx.name(*x1),
                            ctx.name(*x2)
                        )));
                    }
                }
            }
            let ay = self.right_hd_approximation(a1.y())?;
            if !is_iso_modulo(ctx, &self.r_map(a1.f(), &ay, a1)?, &self.c_prime) {
                return Err(Error::verification(format!("R(f) is not invertible for {}", ctx.name(*x1))));
            }
        }
        Ok(())
    }

    /// Fullness from `H_D`-objects and faithfulness between them.
    fn check_full_faithful(&self, lm: &LocalizationModel) -> Result<()> {
        let (ctx, alg) = (self.ctx, self.ctx.algebra());
        for (x1, a1) in lm.images.iter().filter(|(x, _)| self.h_d.contains(*x)) {
            for (x2, a2) in &lm.images {
                let hom = ctx.hom(*x1, *x2);
                let rs = hom.basis().iter().map(|u| self.r_map(u, a1, a2)).collect::<Result<Vec<_>>>()?;
                let ideal = ideal_subspace(ctx, a1.y(), a2.y(), &self.c_prime);
                let full = HomSpace::compute(alg, a1.y(), a2.y()).dim();
                let hit = rs.iter().fold(ideal.clone(), |mut s, r| {
                    s.insert(r.flatten());
                    s
                });
                if hit.dim() != full {
                    return Err(Error::verification(format!(
                        "R is not full on {} -> {}",
                        ctx.name(*x1),
                        ctx.name(*x2)
                    )));
                }
                if self.h_d.contains(*x2) {
                    let own = ideal_subspace(ctx, ctx.member(*x1), ctx.member(*x2), &self.c_prime);
                    if !kernel_modulo(&hom, &rs, &ideal).iter().all(|u| own.contains(&u.flatten())) {
                        return Err(Error::verification(format!(
                            "R is not faithful on {} -> {}",
                            ctx.name(*x1),
                            ctx.name(*x2)
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// `H_D / C'` with `R` on the nonzero heart members.
pub struct LocalizationModel<'a> {
    pub model: QuotientCategory<'a>,
    pub a: Subcat,
    pub images: Vec<(usize, HdApproximation)>,
}

impl LocalizationModel<'_> {
    /// The parts of `R(X)` that survive modulo `C'`.
    pub fn image_parts(&self, x: usize) -> Result<Vec<usize>> {
        let (_, ax) = self
            .images
            .iter()
            .find(|(i, _)| *i == x)
            .ok_or_else(|| Error::precondition("not a nonzero heart member"))?;
        let d = self.model.context().decompose(ax.y())?;
        Ok(d.parts.into_iter().filter(|&i| !self.model.is_zero_object(i)).collect())
    }
}

/// `M = Cone(M', N) ∩ ⊥1N`, the left mutation, computed as the right
/// mutation over the opposite algebra.
pub fn left_mutation(ctx: &Context, m_prime: &Subcat, n: &Subcat) -> Result<Subcat> {
    let dual = ctx.dual();
    right_mutation(&dual, &dual_input(&dual, m_prime, n)?)
}

/// The input `(M', N)` read over the opposite algebra, where `M'` and `N`
/// become subcategories with (RCP). Pass `ctx.dual()`.
pub fn dual_input(dual: &Context, m_prime: &Subcat, n: &Subcat) -> Result<MutationInput> {
    MutationInput::new(dual, m_prime.clone(), n.clone())
}

/// Evaluates `CoCone(D, C) = CoCone(C', D)` and
/// `C' = CoCone(D, C) ∩ D^⊥1` independently; they must agree.
pub fn mutation_condition_equivalence(ctx: &Context, c: &Subcat, c_prime: &Subcat, d: &Subcat) -> Result<bool> {
    for (name, s) in [("C", c), ("C'", c_prime), ("D", d)] {
        if let Some(clause) = satisfies_rcp(ctx, s).failing_clause() {
            return Err(Error::precondition(format!("{name} violates (RCP): {clause}")));
        }
    }
    if !d.is_subset(&c.intersection(c_prime)) {
        return Err(Error::precondition("D is not contained in C ∩ C'"));
    }
    let h_d = cocone_set(ctx, d, c)?;
    let cocones = h_d == cocone_set(ctx, c_prime, d)?;
    let mutation = *c_prime == h_d.intersection(&ctx.right_perp(d));
    if cocones != mutation {
        return Err(Error::verification(format!(
            "CoCone equality is {cocones} but the mutation equation is {mutation}"
        )));
    }
    Ok(cocones)
}

/// Whether `Ext²(C, D) = 0`; when it is, `C'` must come out rigid.
pub fn ext2_rigidity_criterion(ctx: &Context, input: &MutationInput) -> Result<bool> {
    let alg = ctx.algebra();
    let vanishes = input
        .c
        .iter()
        .all(|i| input.d.iter().all(|j| ext2_dim(alg, ctx.member(i), ctx.member(j)) == 0));
    if vanishes && !ctx.is_rigid(&right_mutation(ctx, input)?) {
        return Err(Error::verification("Ext²(C, D) = 0 but the mutation is not rigid"));
    }
    Ok(vanishes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::Config;
    use crate::fixtures;

    fn ex61() -> crate::problem::Problem {
        fixtures::ex61(Config::default()).unwrap()
    }

    fn input(prob: &crate::problem::Problem, c: &str, d: &str) -> MutationInput {
        MutationInput::new(&prob.ctx, prob.subcat(c).unwrap().clone(), prob.subcat(d).unwrap().clone()).unwrap()
    }

    #[test]
    fn mutation_matches_panels() {
        let prob = ex61();
        let ctx = &prob.ctx;
        assert_eq!(&right_mutation(ctx, &input(&prob, "C", "D")).unwrap(), prob.subcat("Cprime").unwrap());
        let c = prob.subcat("C").unwrap().clone();
        assert_eq!(right_mutation(ctx, &input(&prob, "C", "C")).unwrap(), c);
        assert!(MutationInput::new(ctx, prob.subcat("D").unwrap().clone(), c).is_err());
    }

    #[test]
    fn hd_approximations_of_every_member() {
        let prob = ex61();
        let ctx = &prob.ctx;
        let m = Mutation::new(ctx, input(&prob, "C", "D")).unwrap();
        for x in 0..ctx.len() {
            let a = m.right_hd_approximation(ctx.member(x)).unwrap();
            if m.heart.objects.contains(x) {
                assert!(m.heart.is_epi(a.f()), "{}", ctx.name(x));
            }
        }
    }

    #[test]
    fn a_and_the_localization_model() {
        let prob = ex61();
        let ctx = &prob.ctx;
        let m = Mutation::new(ctx, input(&prob, "C", "D")).unwrap();
        let a = m.a_objects().unwrap();
        let expected = prob.subcat("Heart").unwrap().intersection(prob.subcat("Dperp").unwrap());
        assert_eq!(a, expected);
        assert!(m.in_s_a(&RepMap::identity(ctx.member(a.iter().next().unwrap())), &a).unwrap());
        let lm = m.localization_model().unwrap();
        assert_eq!(&Subcat::new(lm.model.nonzero_objects()), prob.subcat("Localized").unwrap());
    }

    #[test]
    fn dual_pipeline() {
        let prob = ex61();
        let ctx = &prob.ctx;
        let s = |n: &str| prob.subcat(n).unwrap().clone();
        assert_eq!(left_mutation(ctx, &s("Mprime"), &s("N")).unwrap(), s("M"));
        assert_eq!(left_mutation(ctx, &s("Mprime"), &s("Mprime")).unwrap(), s("Mprime"));
        let dual = ctx.dual();
        let m = Mutation::new(&dual, dual_input(&dual, &s("Mprime"), &s("N")).unwrap()).unwrap();
        let lm = m.localization_model().unwrap();
        assert_eq!(Subcat::new(lm.model.nonzero_objects()), s("LocalizedPrime"));
    }

    #[test]
    fn mutation_conditions_and_rigidity() {
        let prob = ex61();
        let ctx = &prob.ctx;
        let s = |n: &str| prob.subcat(n).unwrap().clone();
        assert!(mutation_condition_equivalence(ctx, &s("C"), &s("Cprime"), &s("D")).unwrap());
        assert!(mutation_condition_equivalence(ctx, &s("C"), &s("C"), &s("C")).unwrap());
        let criterion = ext2_rigidity_criterion(ctx, &input(&prob, "C", "D")).unwrap();
        assert!(!criterion || ctx.is_rigid(&s("Cprime")));

        let prob = fixtures::ex62(Config::default()).unwrap();
        let ctx = &prob.ctx;
        let inp = input(&prob, "C", "D");
        let c_prime = right_mutation(ctx, &inp).unwrap();
        assert_eq!(&c_prime, prob.subcat("Cprime").unwrap());
        assert!(!ctx.is_rigid(&c_prime));
        assert!(!ext2_rigidity_criterion(ctx, &inp).unwrap());
    }
}
