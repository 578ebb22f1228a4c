//! Representations of a bound quiver, their morphisms and Hom spaces.

use std::sync::Arc;

use crate::algebra::{Algebra, Path, Quiver};
use crate::error::{Error, Result};
use crate::linalg::{add, Matrix, Subspace};

/// A finite-dimensional representation: one vector space per vertex and a
/// matrix per arrow (`dim target x dim source`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rep {
    pub name: String,
    pub p: u32,
    pub dims: Vec<usize>,
    pub maps: Vec<Matrix>,
}

impl Rep {
    pub fn new(alg: &Algebra, name: impl Into<String>, dims: Vec<usize>, maps: Vec<Matrix>) -> Result<Rep> {
        let rep = Rep { name: name.into(), p: alg.p(), dims, maps };
        rep.validate(alg)?;
        Ok(rep)
    }

    pub fn zero(alg: &Algebra) -> Rep {
        let q = alg.quiver();
        let maps = q.arrows().iter().map(|_| Matrix::zeros(alg.p(), 0, 0)).collect();
        Rep { name: "0".into(), p: alg.p(), dims: vec![0; q.num_vertices()], maps }
    }

    pub fn validate(&self, alg: &Algebra) -> Result<()> {
        let bad = |reason: String| Error::InvalidRep { name: self.name.clone(), reason };
        let q = alg.quiver();
        if self.p != alg.p() {
            return Err(Error::FieldMismatch(self.p, alg.p()));
        }
        if self.dims.len() != q.num_vertices() {
            return Err(bad(format!("expected {} dimensions", q.num_vertices())));
        }
        if self.maps.len() != q.arrows().len() {
            return Err(bad(format!("expected {} arrow matrices", q.arrows().len())));
        }
        for (a, m) in q.arrows().iter().zip(&self.maps) {
            if m.p() != self.p {
                return Err(Error::FieldMismatch(m.p(), self.p));
            }
            if m.rows() != self.dims[a.target] || m.cols() != self.dims[a.source] {
                return Err(bad(format!(
                    "matrix for `{}` is {}x{}, expected {}x{}",
                    a.name,
                    m.rows(),
                    m.cols(),
                    self.dims[a.target],
                    self.dims[a.source]
                )));
            }
        }
        for r in alg.relations() {
            let mut total: Option<Matrix> = None;
            for (c, word) in &r.terms {
                let path = Path { source: q.arrows()[word[0]].source, arrows: word.clone() };
                let m = self.path_action(&path).scale(*c);
                total = Some(match total {
                    None => m,
                    Some(t) => t.add(&m),
                });
            }
            if total.is_some_and(|t| !t.is_zero()) {
                let names: Vec<String> = r
                    .terms
                    .iter()
                    .map(|(_, w)| {
                        Path { source: q.arrows()[w[0]].source, arrows: w.clone() }.display(q)
                    })
                    .collect();
                return Err(bad(format!("relation {} does not hold", names.join(" + "))));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    /// Offset of each vertex space in the concatenated total space.
    pub fn offsets(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.dims.len());
        let mut acc = 0;
        for &d in &self.dims {
            out.push(acc);
            acc += d;
        }
        out
    }

    pub fn path_action(&self, path: &Path) -> Matrix {
        let mut m = Matrix::identity(self.p, self.dims[path.source]);
        for &a in &path.arrows {
            m = self.maps[a].mul(&m);
        }
        m
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Rep {
        self.name = name.into();
        self
    }

    /// The vector-space dual, a representation of the opposite quiver.
    pub fn dual(&self) -> Rep {
        Rep {
            name: self.name.clone(),
            p: self.p,
            dims: self.dims.clone(),
            maps: self.maps.iter().map(Matrix::transpose).collect(),
        }
    }

    pub fn dim_vector(&self) -> String {
        let parts: Vec<String> = self.dims.iter().map(|d| d.to_string()).collect();
        format!("({})", parts.join(","))
    }
}

/// A morphism of representations, stored as one block per vertex.
#[derive(Clone, Debug)]
pub struct RepMap {
    pub source: Arc<Rep>,
    pub target: Arc<Rep>,
    pub blocks: Vec<Matrix>,
}

impl PartialEq for RepMap {
    fn eq(&self, other: &Self) -> bool {
        self.blocks == other.blocks
    }
}

impl RepMap {
    /// Builds a morphism and checks that it commutes with every arrow.
    pub fn new(alg: &Algebra, source: Arc<Rep>, target: Arc<Rep>, blocks: Vec<Matrix>) -> Result<RepMap> {
        let f = RepMap { source, target, blocks };
        f.check_shapes()?;
        if !f.is_homomorphism(alg) {
            return Err(Error::InvalidMap("does not commute with the arrows".into()));
        }
        Ok(f)
    }

    pub(crate) fn from_blocks(source: Arc<Rep>, target: Arc<Rep>, blocks: Vec<Matrix>) -> RepMap {
        RepMap { source, target, blocks }
    }

    fn check_shapes(&self) -> Result<()> {
        if self.blocks.len() != self.source.dims.len() {
            return Err(Error::InvalidMap("wrong number of vertex blocks".into()));
        }
        for (v, b) in self.blocks.iter().enumerate() {
            if b.rows() != self.target.dims[v] || b.cols() != self.source.dims[v] {
                return Err(Error::InvalidMap(format!("block at vertex {v} has the wrong shape")));
            }
        }
        Ok(())
    }

    pub fn is_homomorphism(&self, alg: &Algebra) -> bool {
        alg.quiver().arrows().iter().enumerate().all(|(ai, a)| {
            let lhs = self.blocks[a.target].mul(&self.source.maps[ai]);
            let rhs = self.target.maps[ai].mul(&self.blocks[a.source]);
            lhs == rhs
        })
    }

    pub fn p(&self) -> u32 {
        self.source.p
    }

    pub fn identity(rep: &Arc<Rep>) -> RepMap {
        let blocks = rep.dims.iter().map(|&d| Matrix::identity(rep.p, d)).collect();
        RepMap { source: rep.clone(), target: rep.clone(), blocks }
    }

    pub fn zero(source: &Arc<Rep>, target: &Arc<Rep>) -> RepMap {
        let blocks = source
            .dims
            .iter()
            .zip(&target.dims)
            .map(|(&s, &t)| Matrix::zeros(source.p, t, s))
            .collect();
        RepMap { source: source.clone(), target: target.clone(), blocks }
    }

    /// The composite `self ∘ f`.
    pub fn after(&self, f: &RepMap) -> RepMap {
        debug_assert_eq!(f.target.dims, self.source.dims);
        let blocks = self.blocks.iter().zip(&f.blocks).map(|(g, f)| g.mul(f)).collect();
        RepMap { source: f.source.clone(), target: self.target.clone(), blocks }
    }

    pub fn add(&self, other: &RepMap) -> RepMap {
        let blocks = self.blocks.iter().zip(&other.blocks).map(|(a, b)| a.add(b)).collect();
        RepMap { source: self.source.clone(), target: self.target.clone(), blocks }
    }

    pub fn sub(&self, other: &RepMap) -> RepMap {
        let blocks = self.blocks.iter().zip(&other.blocks).map(|(a, b)| a.sub(b)).collect();
        RepMap { source: self.source.clone(), target: self.target.clone(), blocks }
    }

    pub fn scale(&self, c: u32) -> RepMap {
        let blocks = self.blocks.iter().map(|a| a.scale(c)).collect();
        RepMap { source: self.source.clone(), target: self.target.clone(), blocks }
    }

    pub fn neg(&self) -> RepMap {
        let blocks = self.blocks.iter().map(Matrix::neg).collect();
        RepMap { source: self.source.clone(), target: self.target.clone(), blocks }
    }

    /// Same blocks, reinterpreted between other (equal-dimensional) objects.
    pub fn retarget(&self, source: &Arc<Rep>, target: &Arc<Rep>) -> RepMap {
        RepMap { source: source.clone(), target: target.clone(), blocks: self.blocks.clone() }
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(Matrix::is_zero)
    }

    pub fn is_iso(&self) -> bool {
        self.blocks.iter().all(Matrix::is_invertible)
    }

    pub fn is_injective(&self) -> bool {
        self.blocks.iter().all(|b| b.rank() == b.cols())
    }

    pub fn is_surjective(&self) -> bool {
        self.blocks.iter().all(|b| b.rank() == b.rows())
    }

    pub fn inverse(&self) -> Option<RepMap> {
        let blocks = self.blocks.iter().map(Matrix::inverse).collect::<Option<Vec<_>>>()?;
        Some(RepMap { source: self.target.clone(), target: self.source.clone(), blocks })
    }

    /// Vertex blocks concatenated in row-major order.
    pub fn flatten(&self) -> Vec<u32> {
        self.blocks.iter().flat_map(|b| b.data().iter().copied()).collect()
    }

    pub fn from_flat(source: &Arc<Rep>, target: &Arc<Rep>, v: &[u32]) -> RepMap {
        let mut blocks = Vec::with_capacity(source.dims.len());
        let mut at = 0;
        for (&s, &t) in source.dims.iter().zip(&target.dims) {
            blocks.push(Matrix::from_vec(source.p, t, s, v[at..at + s * t].to_vec()));
            at += s * t;
        }
        RepMap { source: source.clone(), target: target.clone(), blocks }
    }

    /// The whole map as one block-diagonal matrix on the total spaces.
    pub fn total_matrix(&self) -> Matrix {
        Matrix::block_diag(self.p(), &self.blocks)
    }

    /// The dual morphism `D(target) -> D(source)` over the opposite algebra.
    pub fn dual(&self, dual_source: &Arc<Rep>, dual_target: &Arc<Rep>) -> RepMap {
        debug_assert_eq!(dual_source.dims, self.target.dims);
        let blocks = self.blocks.iter().map(Matrix::transpose).collect();
        RepMap { source: dual_source.clone(), target: dual_target.clone(), blocks }
    }

    pub fn rank(&self) -> usize {
        self.blocks.iter().map(Matrix::rank).sum()
    }
}

pub fn hom_len(source: &Rep, target: &Rep) -> usize {
    source.dims.iter().zip(&target.dims).map(|(s, t)| s * t).sum()
}

/// `Hom(source, target)` with a basis in reduced echelon form on the
/// flattened coordinates, so coordinates are read off directly.
#[derive(Clone, Debug)]
pub struct HomSpace {
    pub source: Arc<Rep>,
    pub target: Arc<Rep>,
    space: Subspace,
    basis: Vec<RepMap>,
}

impl HomSpace {
    pub fn compute(alg: &Algebra, source: &Arc<Rep>, target: &Arc<Rep>) -> HomSpace {
        Self::over(alg.p(), alg.quiver(), source, target)
    }

    /// Hom space of representations of a quiver without relations.
    pub fn over(p: u32, quiver: &Quiver, source: &Arc<Rep>, target: &Arc<Rep>) -> HomSpace {
        let n = hom_len(source, target);
        let mut off = Vec::new();
        let mut acc = 0;
        for (s, t) in source.dims.iter().zip(&target.dims) {
            off.push(acc);
            acc += s * t;
        }
        let mut rows: Vec<Vec<u32>> = Vec::new();
        for (ai, a) in quiver.arrows().iter().enumerate() {
            let (i, j) = (a.source, a.target);
            let m = &source.maps[ai];
            let nn = &target.maps[ai];
            let (si, sj, ti, tj) = (source.dims[i], source.dims[j], target.dims[i], target.dims[j]);
            // (phi_j M - N phi_i)[r, c] = 0
            for r in 0..tj {
                for c in 0..si {
                    let mut row = vec![0u32; n];
                    for k in 0..sj {
                        let idx = off[j] + r * sj + k;
                        row[idx] = add(p, row[idx], m.get(k, c));
                    }
                    for k in 0..ti {
                        let idx = off[i] + k * si + c;
                        row[idx] = crate::linalg::sub(p, row[idx], nn.get(r, k));
                    }
                    if row.iter().any(|&x| x != 0) {
                        rows.push(row);
                    }
                }
            }
        }
        let eq = Matrix::from_rows(p, n, &rows);
        let ns = eq.nullspace();
        let space = Subspace::spanned_by(p, n, (0..ns.cols()).map(|c| ns.column(c)));
        let basis = space.basis().iter().map(|v| RepMap::from_flat(source, target, v)).collect();
        HomSpace { source: source.clone(), target: target.clone(), space, basis }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[RepMap] {
        &self.basis
    }

    pub fn space(&self) -> &Subspace {
        &self.space
    }

    pub fn coords(&self, f: &RepMap) -> Option<Vec<u32>> {
        self.space.coordinates(&f.flatten())
    }

    pub fn combine(&self, coeffs: &[u32]) -> RepMap {
        let p = self.source.p;
        let mut out = RepMap::zero(&self.source, &self.target);
        for (c, b) in coeffs.iter().zip(&self.basis) {
            if *c != 0 {
                out = out.add(&b.scale(*c));
            }
        }
        debug_assert_eq!(out.p(), p);
        out
    }
}

/// Indecomposable projective `P(v) = e_v Λ`, with basis the paths from `v`.
pub fn projective(alg: &Algebra, v: usize) -> Rep {
    let q = alg.quiver();
    let n = q.num_vertices();
    let dims: Vec<usize> = (0..n).map(|w| alg.path_basis(v, w).len()).collect();
    let maps = q
        .arrows()
        .iter()
        .enumerate()
        .map(|(ai, a)| {
            let src = alg.path_basis(v, a.source);
            let mut m = Matrix::zeros(alg.p(), dims[a.target], dims[a.source]);
            for (k, path) in src.iter().enumerate() {
                let ext = Path { source: v, arrows: [path.arrows.as_slice(), &[ai]].concat() };
                let coords = alg.reduce_path(&ext);
                for (r, &x) in coords.iter().enumerate() {
                    m.set(r, k, x);
                }
            }
            m
        })
        .collect();
    Rep { name: format!("P{}", q.vertices()[v]), p: alg.p(), dims, maps }
}

/// Indecomposable injective `I(v) = D(Λ e_v)`, dual to the paths ending at `v`.
pub fn injective(alg: &Algebra, v: usize) -> Rep {
    let q = alg.quiver();
    let n = q.num_vertices();
    let dims: Vec<usize> = (0..n).map(|w| alg.path_basis(w, v).len()).collect();
    let maps = q
        .arrows()
        .iter()
        .enumerate()
        .map(|(ai, a)| {
            // left multiplication by a: e_u Λ e_v -> e_w Λ e_v, then transpose
            let src = alg.path_basis(a.target, v);
            let mut left = Matrix::zeros(alg.p(), dims[a.source], dims[a.target]);
            for (k, path) in src.iter().enumerate() {
                let mut arrows = vec![ai];
                arrows.extend_from_slice(&path.arrows);
                let coords = alg.reduce_path(&Path { source: a.source, arrows });
                for (r, &x) in coords.iter().enumerate() {
                    left.set(r, k, x);
                }
            }
            left.transpose()
        })
        .collect();
    Rep { name: format!("I{}", q.vertices()[v]), p: alg.p(), dims, maps }
}

pub fn simple(alg: &Algebra, v: usize) -> Rep {
    let q = alg.quiver();
    let mut dims = vec![0; q.num_vertices()];
    dims[v] = 1;
    let maps = q
        .arrows()
        .iter()
        .map(|a| Matrix::zeros(alg.p(), dims[a.target], dims[a.source]))
        .collect();
    Rep { name: format!("S{}", q.vertices()[v]), p: alg.p(), dims, maps }
}

/// A direct sum with its structure maps.
#[derive(Clone, Debug)]
pub struct DirectSum {
    pub rep: Arc<Rep>,
    pub inclusions: Vec<RepMap>,
    pub projections: Vec<RepMap>,
}

pub fn direct_sum(alg: &Algebra, parts: &[Arc<Rep>]) -> DirectSum {
    let p = alg.p();
    let q = alg.quiver();
    let n = q.num_vertices();
    let dims: Vec<usize> = (0..n).map(|v| parts.iter().map(|r| r.dims[v]).sum()).collect();
    let maps = (0..q.arrows().len())
        .map(|ai| {
            let blocks: Vec<Matrix> = parts.iter().map(|r| r.maps[ai].clone()).collect();
            let a = &q.arrows()[ai];
            if blocks.is_empty() {
                Matrix::zeros(p, dims[a.target], dims[a.source])
            } else {
                Matrix::block_diag(p, &blocks)
            }
        })
        .collect();
    let name = if parts.is_empty() {
        "0".to_string()
    } else {
        parts.iter().map(|r| r.name.as_str()).collect::<Vec<_>>().join("+")
    };
    let rep = Arc::new(Rep { name, p, dims: dims.clone(), maps });
    let mut inclusions = Vec::new();
    let mut projections = Vec::new();
    let mut offs = vec![0usize; n];
    for part in parts {
        let mut inc = Vec::new();
        let mut pr = Vec::new();
        for v in 0..n {
            let mut m = Matrix::zeros(p, dims[v], part.dims[v]);
            for k in 0..part.dims[v] {
                m.set(offs[v] + k, k, 1);
            }
            pr.push(m.transpose());
            inc.push(m);
            offs[v] += part.dims[v];
        }
        inclusions.push(RepMap::from_blocks(part.clone(), rep.clone(), inc));
        projections.push(RepMap::from_blocks(rep.clone(), part.clone(), pr));
    }
    DirectSum { rep, inclusions, projections }
}

impl DirectSum {
    /// `X -> ⊕ parts` with the given components.
    pub fn map_into(&self, source: &Arc<Rep>, comps: &[RepMap]) -> RepMap {
        let mut out = RepMap::zero(source, &self.rep);
        for (inc, c) in self.inclusions.iter().zip(comps) {
            out = out.add(&inc.after(c));
        }
        out
    }

    /// `⊕ parts -> Y` with the given components.
    pub fn map_from(&self, target: &Arc<Rep>, comps: &[RepMap]) -> RepMap {
        let mut out = RepMap::zero(&self.rep, target);
        for (pr, c) in self.projections.iter().zip(comps) {
            out = out.add(&c.after(pr));
        }
        out
    }
}

/// `⊕ f_i : ⊕ A_i -> ⊕ B_i`.
pub fn diagonal_map(a: &DirectSum, b: &DirectSum, maps: &[RepMap]) -> RepMap {
    let comps: Vec<RepMap> = maps.iter().zip(&a.projections).map(|(f, pr)| f.after(pr)).collect();
    b.map_into(&a.rep, &comps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Quiver, Relation};

    fn a3_with_zero_relation() -> Algebra {
        let q = Quiver::new(
            vec!["1".into(), "2".into(), "3".into()],
            &[("a".into(), "1".into(), "2".into()), ("b".into(), "2".into(), "3".into())],
        )
        .unwrap();
        Algebra::new(101, q, vec![Relation { terms: vec![(1, vec![0, 1])] }]).unwrap()
    }

    #[test]
    fn projectives_and_injectives_of_a3_mod_radical_square() {
        let alg = a3_with_zero_relation();
        assert_eq!(alg.dim(), 5);
        assert_eq!(projective(&alg, 0).dims, vec![1, 1, 0]);
        assert_eq!(projective(&alg, 2).dims, vec![0, 0, 1]);
        assert_eq!(injective(&alg, 2).dims, vec![0, 1, 1]);
        for v in 0..3 {
            projective(&alg, v).validate(&alg).unwrap();
            injective(&alg, v).validate(&alg).unwrap();
        }
    }

    #[test]
    fn hom_dimensions() {
        let alg = a3_with_zero_relation();
        let p1 = Arc::new(projective(&alg, 0));
        let p2 = Arc::new(projective(&alg, 1));
        let s2 = Arc::new(simple(&alg, 1));
        assert_eq!(HomSpace::compute(&alg, &p2, &p1).dim(), 1);
        assert_eq!(HomSpace::compute(&alg, &p1, &p2).dim(), 0);
        assert_eq!(HomSpace::compute(&alg, &p2, &s2).dim(), 1);
        assert_eq!(HomSpace::compute(&alg, &p1, &p1).dim(), 1);
        for f in HomSpace::compute(&alg, &p2, &p1).basis() {
            assert!(f.is_homomorphism(&alg));
        }
    }

    #[test]
    fn relation_violation_is_reported() {
        let alg = a3_with_zero_relation();
        let one = Matrix::identity(101, 1);
        let err = Rep::new(&alg, "bad", vec![1, 1, 1], vec![one.clone(), one]).unwrap_err();
        assert!(matches!(err, Error::InvalidRep { .. }));
    }
}
