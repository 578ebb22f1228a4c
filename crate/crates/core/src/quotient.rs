//! Ideal quotients `objects / [ideal]` of full subcategories, their Gabriel
//! quivers and DOT rendering.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::{Arc, Mutex};

use crate::approx::ideal_subspace;
use crate::context::{Context, Subcat};
use crate::endo::endomorphism_radical;
use crate::error::Result;
use crate::linalg::{Quotient, Subspace};
use crate::rep::{HomSpace, RepMap};

/// `Hom(X, Y) / [ideal](X, Y)` in coordinates of the cached Hom basis.
#[derive(Clone, Debug)]
pub struct QuotientHom {
    pub hom: Arc<HomSpace>,
    pub quotient: Quotient,
}

impl QuotientHom {
    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }

    /// Coset coordinates of a morphism.
    pub fn reduce(&self, f: &RepMap) -> Vec<u32> {
        self.quotient.coords(&self.hom.coords(f).expect("a morphism of the right type"))
    }

    /// A representative of the coset with the given coordinates.
    pub fn lift(&self, coords: &[u32]) -> RepMap {
        self.hom.combine(&self.quotient.lift(coords))
    }

    pub fn in_ideal(&self, f: &RepMap) -> bool {
        self.reduce(f).iter().all(|&c| c == 0)
    }
}

pub struct QuotientCategory<'a> {
    ctx: &'a Context,
    objects: Subcat,
    ideal: Subcat,
    homs: Mutex<HashMap<(usize, usize), Arc<QuotientHom>>>,
}

impl<'a> QuotientCategory<'a> {
    pub fn new(ctx: &'a Context, objects: Subcat, ideal: Subcat) -> QuotientCategory<'a> {
        QuotientCategory { ctx, objects, ideal, homs: Mutex::new(HashMap::new()) }
    }

    pub fn context(&self) -> &'a Context {
        self.ctx
    }

    pub fn objects(&self) -> &Subcat {
        &self.objects
    }

    pub fn ideal(&self) -> &Subcat {
        &self.ideal
    }

    pub fn hom(&self, i: usize, j: usize) -> Arc<QuotientHom> {
        if let Some(h) = self.homs.lock().unwrap().get(&(i, j)) {
            return h.clone();
        }
        let hom = self.ctx.hom(i, j);
        let (x, y) = (self.ctx.member(i), self.ctx.member(j));
        let flat = ideal_subspace(self.ctx, x, y, &self.ideal);
        let sub = Subspace::spanned_by(
            self.ctx.p(),
            hom.dim(),
            flat.basis().iter().map(|v| hom.space().coordinates(v).expect("ideal maps are morphisms")),
        );
        let h = Arc::new(QuotientHom { hom, quotient: Quotient::new(sub) });
        self.homs.lock().unwrap().insert((i, j), h.clone());
        h
    }

    pub fn is_zero_object(&self, i: usize) -> bool {
        self.hom(i, i).dim() == 0
    }

    /// Objects that stay nonzero, in atlas (name) order.
    pub fn nonzero_objects(&self) -> Vec<usize> {
        self.objects.iter().filter(|&i| !self.is_zero_object(i)).collect()
    }

    /// Coset of `g ∘ f` for cosets `f: i -> j`, `g: j -> k`.
    pub fn compose(&self, (i, j, k): (usize, usize, usize), g: &[u32], f: &[u32]) -> Vec<u32> {
        let f = self.hom(i, j).lift(f);
        let g = self.hom(j, k).lift(g);
        self.hom(i, k).reduce(&g.after(&f))
    }

    /// The radical of the quotient category between two nonzero objects:
    /// everything for distinct objects, the image of `rad End` otherwise.
    pub fn radical(&self, i: usize, j: usize) -> Result<Subspace> {
        let h = self.hom(i, j);
        if i != j {
            return Ok(Subspace::full(self.ctx.p(), h.dim()));
        }
        let rad = endomorphism_radical(self.ctx.algebra(), self.ctx.member(i))?;
        let x = self.ctx.member(i);
        Ok(Subspace::spanned_by(
            self.ctx.p(),
            h.dim(),
            rad.basis().iter().map(|v| h.reduce(&RepMap::from_flat(x, x, v))),
        ))
    }

    /// `dim rad(i, j) - dim rad²(i, j)`: the number of arrows `i -> j`.
    pub fn irreducible_dim(&self, i: usize, j: usize) -> Result<usize> {
        let rad = self.radical(i, j)?;
        let mut rad2 = Subspace::zero(self.ctx.p(), rad.ambient_dim());
        for k in self.nonzero_objects() {
            let first = self.radical(i, k)?;
            let second = self.radical(k, j)?;
            for f in first.basis() {
                for g in second.basis() {
                    rad2.insert(self.compose((i, k, j), g, f));
                }
            }
        }
        Ok(rad.dim() - rad2.dim())
    }

    pub fn gabriel_quiver(&self) -> Result<GabrielQuiver> {
        let vs = self.nonzero_objects();
        let mut arrows = Vec::new();
        for (a, &i) in vs.iter().enumerate() {
            for (b, &j) in vs.iter().enumerate() {
                let n = self.irreducible_dim(i, j)?;
                if n > 0 {
                    arrows.push((a, b, n));
                }
            }
        }
        let vertices = vs.iter().map(|&i| self.ctx.name(i).to_string()).collect();
        Ok(GabrielQuiver { vertices, arrows })
    }
}

/// Vertices are the nonzero indecomposables (sorted by name); arrows carry
/// their multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GabrielQuiver {
    pub vertices: Vec<String>,
    pub arrows: Vec<(usize, usize, usize)>,
}

impl GabrielQuiver {
    fn matrix(&self) -> Vec<Vec<usize>> {
        let n = self.vertices.len();
        let mut m = vec![vec![0; n]; n];
        for &(a, b, k) in &self.arrows {
            m[a][b] = k;
        }
        m
    }

    /// A vertex bijection preserving arrow multiplicities, if any.
    pub fn isomorphism(&self, other: &GabrielQuiver) -> Option<Vec<usize>> {
        let n = self.vertices.len();
        if n != other.vertices.len() || self.arrows.len() != other.arrows.len() {
            return None;
        }
        let (a, b) = (self.matrix(), other.matrix());
        fn extend(a: &[Vec<usize>], b: &[Vec<usize>], perm: &mut Vec<usize>, used: &mut [bool]) -> bool {
            let k = perm.len();
            if k == a.len() {
                return true;
            }
            for c in 0..a.len() {
                if used[c] {
                    continue;
                }
                let ok = (0..k).all(|j| a[k][j] == b[c][perm[j]] && a[j][k] == b[perm[j]][c]) && a[k][k] == b[c][c];
                if ok {
                    perm.push(c);
                    used[c] = true;
                    if extend(a, b, perm, used) {
                        return true;
                    }
                    perm.pop();
                    used[c] = false;
                }
            }
            false
        }
        let mut perm = Vec::new();
        extend(&a, &b, &mut perm, &mut vec![false; n]).then_some(perm)
    }

    /// DOT text; deterministic since vertices and arrows are sorted.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = String::new();
        writeln!(out, "digraph \"{name}\" {{").unwrap();
        for v in &self.vertices {
            writeln!(out, "  \"{v}\";").unwrap();
        }
        for &(a, b, k) in &self.arrows {
            writeln!(out, "  \"{}\" -> \"{}\" [label=\"{k}\"];", self.vertices[a], self.vertices[b]).unwrap();
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::Config;
    use crate::fixtures;

    #[test]
    fn heart_of_the_first_pair_is_a_line() {
        let prob = fixtures::ex61(Config::default()).unwrap();
        let ctx = &prob.ctx;
        let c = prob.subcat("C").unwrap().clone();
        let objects = prob.subcat("Heart").unwrap().union(&c);
        let q = QuotientCategory::new(ctx, objects, c);
        let g = q.gabriel_quiver().unwrap();
        assert_eq!(g.vertices.len(), 5);
        // 3/5 -> 3 -> 2/34 -> 2/3 -> 2
        let line = GabrielQuiver {
            vertices: (0..5).map(|i| i.to_string()).collect(),
            arrows: (0..4).map(|i| (i, i + 1, 1)).collect(),
        };
        assert!(g.isomorphism(&line).is_some(), "{}", g.to_dot("h"));
    }

    #[test]
    fn empty_ideal_keeps_hom() {
        let prob = fixtures::ex61(Config::default()).unwrap();
        let ctx = &prob.ctx;
        let q = QuotientCategory::new(ctx, ctx.all(), Subcat::default());
        for i in 0..ctx.len() {
            for j in 0..ctx.len() {
                assert_eq!(q.hom(i, j).dim(), ctx.hom(i, j).dim());
            }
        }
        let empty = GabrielQuiver { vertices: vec![], arrows: vec![] };
        assert_eq!(empty.to_dot("e"), "digraph \"e\" {\n}\n");
    }
}
