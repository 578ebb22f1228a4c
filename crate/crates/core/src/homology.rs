//! Kernels, cokernels, pushouts and pullbacks, projective covers and
//! injective envelopes, and `Ext¹` with explicit conflations.

use std::sync::Arc;

use crate::algebra::{Algebra, Path, Quiver};
use crate::error::{Error, Result};
use crate::linalg::{vector, Matrix, Quotient, Subspace};
use crate::rep::{direct_sum, injective, projective, DirectSum, HomSpace, Rep, RepMap};

/// Kernel object with its inclusion.
pub fn kernel(alg: &Algebra, f: &RepMap) -> RepMap {
    kernel_over(alg.p(), alg.quiver(), f)
}

pub fn kernel_over(p: u32, quiver: &Quiver, f: &RepMap) -> RepMap {
    let bases: Vec<Matrix> = f.blocks.iter().map(Matrix::nullspace).collect();
    let dims: Vec<usize> = bases.iter().map(Matrix::cols).collect();
    let maps = quiver
        .arrows()
        .iter()
        .enumerate()
        .map(|(ai, a)| {
            let img = f.source.maps[ai].mul(&bases[a.source]);
            bases[a.target].solve(&img).expect("kernel is a subrepresentation")
        })
        .collect();
    let rep = Arc::new(Rep { name: format!("ker({})", f.source.name), p, dims, maps });
    RepMap::from_blocks(rep, f.source.clone(), bases)
}

/// Cokernel object with its projection.
pub fn cokernel(alg: &Algebra, f: &RepMap) -> RepMap {
    cokernel_over(alg.p(), alg.quiver(), f)
}

pub fn cokernel_over(p: u32, quiver: &Quiver, f: &RepMap) -> RepMap {
    let projs: Vec<Matrix> = f.blocks.iter().map(Matrix::left_nullspace).collect();
    let dims: Vec<usize> = projs.iter().map(Matrix::rows).collect();
    let maps = quiver
        .arrows()
        .iter()
        .enumerate()
        .map(|(ai, a)| {
            let img = projs[a.target].mul(&f.target.maps[ai]);
            projs[a.source].solve_left(&img).expect("image is a subrepresentation")
        })
        .collect();
    let rep = Arc::new(Rep { name: format!("coker({})", f.target.name), p, dims, maps });
    RepMap::from_blocks(f.target.clone(), rep, projs)
}

/// Image factorisation `f = i ∘ q` with `q` surjective and `i` injective.
pub fn image(alg: &Algebra, f: &RepMap) -> (RepMap, RepMap) {
    image_over(alg.p(), alg.quiver(), f)
}

pub fn image_over(p: u32, quiver: &Quiver, f: &RepMap) -> (RepMap, RepMap) {
    let bases: Vec<Matrix> = f.blocks.iter().map(Matrix::column_space).collect();
    let dims: Vec<usize> = bases.iter().map(Matrix::cols).collect();
    let maps = quiver
        .arrows()
        .iter()
        .enumerate()
        .map(|(ai, a)| {
            let img = f.target.maps[ai].mul(&bases[a.source]);
            bases[a.target].solve(&img).expect("image is a subrepresentation")
        })
        .collect();
    let rep = Arc::new(Rep { name: format!("im({})", f.source.name), p, dims, maps });
    let q = f
        .blocks
        .iter()
        .zip(&bases)
        .map(|(b, basis)| basis.solve(b).expect("lands in image"))
        .collect();
    let q = RepMap::from_blocks(f.source.clone(), rep.clone(), q);
    let i = RepMap::from_blocks(rep, f.target.clone(), bases);
    (q, i)
}

/// Given `h: X -> Y` and an epimorphism `e: X -> Z` with `h` vanishing on
/// `ker e`, the unique `t: Z -> Y` with `t ∘ e = h`.
pub fn factor_through_epi(h: &RepMap, e: &RepMap) -> Option<RepMap> {
    let blocks = h
        .blocks
        .iter()
        .zip(&e.blocks)
        .map(|(hb, eb)| eb.solve_left(hb))
        .collect::<Option<Vec<_>>>()?;
    Some(RepMap::from_blocks(e.target.clone(), h.target.clone(), blocks))
}

/// Given `h: X -> Y` and a monomorphism `m: Z -> Y` containing the image of
/// `h`, the unique `t: X -> Z` with `m ∘ t = h`.
pub fn factor_through_mono(h: &RepMap, m: &RepMap) -> Option<RepMap> {
    let blocks = h
        .blocks
        .iter()
        .zip(&m.blocks)
        .map(|(hb, mb)| mb.solve(hb))
        .collect::<Option<Vec<_>>>()?;
    Some(RepMap::from_blocks(h.source.clone(), m.source.clone(), blocks))
}

/// Solves `g ∘ t = h` for a morphism `t: X -> E`, given `h: X -> C`, `g: E -> C`.
pub fn lift(alg: &Algebra, h: &RepMap, g: &RepMap) -> Option<RepMap> {
    let hom = HomSpace::compute(alg, &h.source, &g.source);
    let cols: Vec<Vec<u32>> = hom.basis().iter().map(|t| g.after(t).flatten()).collect();
    solve_combination(alg.p(), &cols, &h.flatten()).map(|c| hom.combine(&c))
}

/// Solves `t ∘ f = h` for a morphism `t: B -> Y`, given `h: A -> Y`, `f: A -> B`.
pub fn extend(alg: &Algebra, h: &RepMap, f: &RepMap) -> Option<RepMap> {
    let hom = HomSpace::compute(alg, &f.target, &h.target);
    let cols: Vec<Vec<u32>> = hom.basis().iter().map(|t| t.after(f).flatten()).collect();
    solve_combination(alg.p(), &cols, &h.flatten()).map(|c| hom.combine(&c))
}

/// Coefficients `c` with `sum c_i cols_i = rhs`.
pub fn solve_combination(p: u32, cols: &[Vec<u32>], rhs: &[u32]) -> Option<Vec<u32>> {
    let n = rhs.len();
    if cols.is_empty() {
        return vector::is_zero(rhs).then(Vec::new);
    }
    let a = Matrix::from_rows(p, n, cols).transpose();
    let b = Matrix::from_vec(p, n, 1, rhs.to_vec());
    a.solve(&b).map(|x| x.column(0))
}

/// A short exact sequence `A -f-> B -g-> C`.
#[derive(Clone, Debug)]
pub struct Conflation {
    pub f: RepMap,
    pub g: RepMap,
}

impl Conflation {
    pub fn left(&self) -> &Arc<Rep> {
        &self.f.source
    }
    pub fn middle(&self) -> &Arc<Rep> {
        &self.f.target
    }
    pub fn right(&self) -> &Arc<Rep> {
        &self.g.target
    }

    pub fn is_exact(&self, alg: &Algebra) -> bool {
        self.f.is_homomorphism(alg)
            && self.g.is_homomorphism(alg)
            && self.f.is_injective()
            && self.g.is_surjective()
            && self.g.after(&self.f).is_zero()
            && self.f.source.dim() + self.g.target.dim() == self.f.target.dim()
    }

    pub fn check(&self, alg: &Algebra) -> Result<()> {
        if self.is_exact(alg) {
            Ok(())
        } else {
            Err(Error::NotExact(format!(
                "{} -> {} -> {}",
                self.left().name,
                self.middle().name,
                self.right().name
            )))
        }
    }

    /// The dual sequence `DC -> DB -> DA` over the opposite algebra.
    pub fn dual(&self) -> Conflation {
        let da = Arc::new(self.left().dual());
        let db = Arc::new(self.middle().dual());
        let dc = Arc::new(self.right().dual());
        Conflation { f: self.g.dual(&dc, &db), g: self.f.dual(&db, &da) }
    }

    /// Whether the sequence splits, i.e. `g` has a section.
    pub fn splits(&self, alg: &Algebra) -> bool {
        lift(alg, &RepMap::identity(self.right()), &self.g).is_some()
    }
}

/// Pullback of `f: B -> C` along `y: X -> C`; returns `(E -> B, E -> X)`.
pub fn pullback(alg: &Algebra, f: &RepMap, y: &RepMap) -> (RepMap, RepMap) {
    let sum = direct_sum(alg, &[f.source.clone(), y.source.clone()]);
    let map = sum.map_from(&f.target, &[f.clone(), y.neg()]);
    let k = kernel(alg, &map);
    (sum.projections[0].after(&k), sum.projections[1].after(&k))
}

/// Pushout of `f: A -> B` along `x: A -> D`; returns `(B -> E, D -> E)`.
pub fn pushout(alg: &Algebra, f: &RepMap, x: &RepMap) -> (RepMap, RepMap) {
    let sum = direct_sum(alg, &[f.target.clone(), x.target.clone()]);
    let map = sum.map_into(&f.source, &[f.clone(), x.neg()]);
    let c = cokernel(alg, &map);
    (c.after(&sum.inclusions[0]), c.after(&sum.inclusions[1]))
}

/// Pushout of a conflation `A -> B -> C` along `x: A -> D`: `D -> E -> C`.
pub fn pushout_conflation(alg: &Algebra, c: &Conflation, x: &RepMap) -> Conflation {
    let (b_to_e, d_to_e) = pushout(alg, &c.f, x);
    // E -> C induced by (g, 0) on B ⊕ D
    let sum = direct_sum(alg, &[c.middle().clone(), x.target.clone()]);
    let proj = b_to_e.after(&sum.projections[0]).add(&d_to_e.after(&sum.projections[1]));
    let h = c.g.after(&sum.projections[0]);
    let g = factor_through_epi(&h, &proj).expect("pushout map is induced");
    Conflation { f: d_to_e, g }
}

/// Pullback of a conflation `A -> B -> C` along `y: X -> C`: `A -> E -> X`.
pub fn pullback_conflation(alg: &Algebra, c: &Conflation, y: &RepMap) -> Conflation {
    let (e_to_b, e_to_x) = pullback(alg, &c.g, y);
    // A -> E induced by (f, 0) into B ⊕ X
    let sum = direct_sum(alg, &[c.middle().clone(), y.source.clone()]);
    let incl = sum.inclusions[0].after(&e_to_b).add(&sum.inclusions[1].after(&e_to_x));
    let h = sum.inclusions[0].after(&c.f);
    let f = factor_through_mono(&h, &incl).expect("pullback map is induced");
    Conflation { f, g: e_to_x }
}

/// Spans a complement of `sub` with standard unit vectors.
fn complement_units(sub: &Subspace) -> Vec<usize> {
    (0..sub.ambient_dim()).filter(|c| !sub.pivots().contains(c)).collect()
}

/// The top of `M` at each vertex: unit vectors spanning a complement of the
/// radical `sum im(M_a)` over arrows ending there.
pub fn top_generators(alg: &Algebra, m: &Rep) -> Vec<Vec<usize>> {
    let q = alg.quiver();
    (0..q.num_vertices())
        .map(|v| {
            let mut rad = Subspace::zero(alg.p(), m.dims[v]);
            for (ai, a) in q.arrows().iter().enumerate() {
                if a.target == v {
                    let mat = &m.maps[ai];
                    for c in 0..mat.cols() {
                        rad.insert(mat.column(c));
                    }
                }
            }
            complement_units(&rad)
        })
        .collect()
}

/// The morphism `P(v) -> M` sending the trivial path to `m ∈ M_v`.
pub fn map_from_projective(alg: &Algebra, pv: &Arc<Rep>, v: usize, m: &Arc<Rep>, elem: &[u32]) -> RepMap {
    let p = alg.p();
    let n = alg.num_vertices();
    let col = Matrix::from_vec(p, elem.len(), 1, elem.to_vec());
    let blocks = (0..n)
        .map(|w| {
            let paths = alg.path_basis(v, w);
            let mut b = Matrix::zeros(p, m.dims[w], paths.len());
            for (k, path) in paths.iter().enumerate() {
                let img = m.path_action(path).mul(&col);
                for r in 0..m.dims[w] {
                    b.set(r, k, img.get(r, 0));
                }
            }
            b
        })
        .collect();
    RepMap::from_blocks(pv.clone(), m.clone(), blocks)
}

/// Projective cover `P0 -> M` as a direct sum of indecomposable projectives.
pub fn projective_cover(alg: &Algebra, m: &Arc<Rep>) -> (DirectSum, RepMap) {
    let tops = top_generators(alg, m);
    let mut parts = Vec::new();
    let mut comps = Vec::new();
    for (v, gens) in tops.iter().enumerate() {
        if gens.is_empty() {
            continue;
        }
        let pv = Arc::new(projective(alg, v));
        for &g in gens {
            let elem = vector::unit(m.dims[v], g);
            comps.push(map_from_projective(alg, &pv, v, m, &elem));
            parts.push(pv.clone());
        }
    }
    let sum = direct_sum(alg, &parts);
    let cover = sum.map_from(m, &comps);
    (sum, cover)
}

/// Socle of `M` at each vertex: common kernel of the outgoing arrows.
pub fn socle(alg: &Algebra, m: &Rep) -> Vec<Matrix> {
    let q = alg.quiver();
    (0..q.num_vertices())
        .map(|v| {
            let outgoing: Vec<Matrix> = q
                .arrows()
                .iter()
                .enumerate()
                .filter(|(_, a)| a.source == v)
                .map(|(ai, _)| m.maps[ai].clone())
                .collect();
            if outgoing.is_empty() {
                Matrix::identity(alg.p(), m.dims[v])
            } else {
                let stacked = outgoing.iter().skip(1).fold(outgoing[0].clone(), |acc, b| acc.vstack(b));
                stacked.nullspace()
            }
        })
        .collect()
}

/// Injective envelope `M -> I0`.
pub fn injective_envelope(alg: &Algebra, m: &Arc<Rep>) -> (DirectSum, RepMap) {
    let p = alg.p();
    let n = alg.num_vertices();
    let soc = socle(alg, m);
    let mut parts = Vec::new();
    let mut comps = Vec::new();
    for (v, basis) in soc.iter().enumerate() {
        if basis.cols() == 0 {
            continue;
        }
        let iv = Arc::new(injective(alg, v));
        // functionals dual to the socle basis
        let xi = basis.solve_left(&Matrix::identity(p, basis.cols())).expect("full column rank");
        for s in 0..basis.cols() {
            let functional = Matrix::from_vec(p, 1, m.dims[v], xi.row(s).to_vec());
            let blocks = (0..n)
                .map(|w| {
                    let paths: &[Path] = alg.path_basis(w, v);
                    let rows: Vec<Vec<u32>> = paths
                        .iter()
                        .map(|q| functional.mul(&m.path_action(q)).row(0).to_vec())
                        .collect();
                    Matrix::from_rows(p, m.dims[w], &rows)
                })
                .collect();
            comps.push(RepMap::from_blocks(m.clone(), iv.clone(), blocks));
            parts.push(iv.clone());
        }
    }
    let sum = direct_sum(alg, &parts);
    let env = sum.map_into(m, &comps);
    (sum, env)
}

/// `ΩM -> P0 -> M`.
pub fn syzygy(alg: &Algebra, m: &Arc<Rep>) -> Conflation {
    let (_, cover) = projective_cover(alg, m);
    let incl = kernel(alg, &cover);
    Conflation { f: incl, g: cover }
}

/// `M -> I0 -> Ω⁻¹M`.
pub fn cosyzygy(alg: &Algebra, m: &Arc<Rep>) -> Conflation {
    let (_, env) = injective_envelope(alg, m);
    let proj = cokernel(alg, &env);
    Conflation { f: env, g: proj }
}

/// `Ext¹(C, A) = Hom(ΩC, A) / (maps factoring through P0)`.
#[derive(Clone, Debug)]
pub struct ExtSpace {
    pub syzygy: Conflation,
    hom: HomSpace,
    quotient: Quotient,
}

impl ExtSpace {
    pub fn compute(alg: &Algebra, c: &Arc<Rep>, a: &Arc<Rep>) -> ExtSpace {
        let syz = syzygy(alg, c);
        Self::with_syzygy(alg, syz, a)
    }

    pub fn with_syzygy(alg: &Algebra, syz: Conflation, a: &Arc<Rep>) -> ExtSpace {
        let hom = HomSpace::compute(alg, syz.left(), a);
        let from_p0 = HomSpace::compute(alg, syz.middle(), a);
        let boundary = Subspace::spanned_by(
            alg.p(),
            hom.dim(),
            from_p0
                .basis()
                .iter()
                .map(|psi| hom.coords(&psi.after(&syz.f)).expect("restriction is a morphism")),
        );
        ExtSpace { syzygy: syz, hom, quotient: Quotient::new(boundary) }
    }

    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }

    pub fn left(&self) -> &Arc<Rep> {
        &self.hom.target
    }

    pub fn right(&self) -> &Arc<Rep> {
        self.syzygy.right()
    }

    /// Class of a morphism `ΩC -> A`.
    pub fn class_of_map(&self, psi: &RepMap) -> Vec<u32> {
        self.quotient.coords(&self.hom.coords(psi).expect("morphism from the syzygy"))
    }

    /// A representative `ΩC -> A` for the given class coordinates.
    pub fn representative(&self, coords: &[u32]) -> RepMap {
        self.hom.combine(&self.quotient.lift(coords))
    }

    /// Realises a class as a conflation `A -> E -> C` (pushout of the syzygy
    /// sequence along a representative).
    pub fn realize(&self, alg: &Algebra, coords: &[u32]) -> Conflation {
        pushout_conflation(alg, &self.syzygy, &self.representative(coords))
    }

    /// Class of a conflation `A -> E -> C` with the same end terms.
    pub fn class_of(&self, alg: &Algebra, conf: &Conflation) -> Vec<u32> {
        let t = lift(alg, &self.syzygy.g, &conf.g).expect("projective cover lifts");
        let restricted = t.after(&self.syzygy.f);
        let psi = factor_through_mono(&restricted, &conf.f).expect("lands in the kernel");
        self.class_of_map(&psi)
    }

    /// Morphisms `ΩC -> A` spanning the boundary plus representatives, in
    /// echelon coordinates of `Hom(ΩC, A)`.
    pub fn hom_from_syzygy(&self) -> &HomSpace {
        &self.hom
    }

    pub fn quotient(&self) -> &Quotient {
        &self.quotient
    }
}

pub fn ext1_dim(alg: &Algebra, c: &Arc<Rep>, a: &Arc<Rep>) -> usize {
    ExtSpace::compute(alg, c, a).dim()
}

/// `Ext²(C, A)` as `Ext¹(ΩC, A)`.
pub fn ext2_dim(alg: &Algebra, c: &Arc<Rep>, a: &Arc<Rep>) -> usize {
    let syz = syzygy(alg, c);
    ext1_dim(alg, syz.left(), a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Quiver;
    use crate::rep::simple;

    fn a2() -> Algebra {
        let q = Quiver::new(vec!["1".into(), "2".into()], &[("a".into(), "1".into(), "2".into())]).unwrap();
        Algebra::new(101, q, vec![]).unwrap()
    }

    #[test]
    fn ext_between_simples_of_a2() {
        let alg = a2();
        let s1 = Arc::new(simple(&alg, 0));
        let s2 = Arc::new(simple(&alg, 1));
        let ext = ExtSpace::compute(&alg, &s1, &s2);
        assert_eq!(ext.dim(), 1);
        assert_eq!(ext1_dim(&alg, &s2, &s1), 0);
        let conf = ext.realize(&alg, &[1]);
        conf.check(&alg).unwrap();
        assert_eq!(conf.middle().dims, vec![1, 1]);
        assert!(!conf.splits(&alg));
        assert_eq!(ext.class_of(&alg, &conf), vec![1]);
        let split = ext.realize(&alg, &[0]);
        assert!(split.splits(&alg));
    }

    #[test]
    fn covers_and_envelopes() {
        let alg = a2();
        let s2 = Arc::new(simple(&alg, 1));
        let (p0, cover) = projective_cover(&alg, &s2);
        assert_eq!(p0.rep.dims, vec![0, 1]);
        assert!(cover.is_surjective() && cover.is_homomorphism(&alg));
        let s1 = Arc::new(simple(&alg, 0));
        let (i0, env) = injective_envelope(&alg, &s1);
        assert_eq!(i0.rep.dims, vec![1, 0]);
        assert!(env.is_injective() && env.is_homomorphism(&alg));
        let syz = syzygy(&alg, &s1);
        syz.check(&alg).unwrap();
        assert_eq!(syz.left().dims, vec![0, 1]);
        let cos = cosyzygy(&alg, &s2);
        cos.check(&alg).unwrap();
        assert_eq!(cos.right().dims, vec![1, 0]);
    }
}
