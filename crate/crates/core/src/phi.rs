//! The module model of the heart of `(C, C^⊥1)`.
//!
//! `Φ(X) = Ext¹(G, X)` with `G` the sum of the members of `C`. It is stored
//! as a representation of a quiver with one vertex per member and one arrow
//! `a -> b` per basis morphism `γ: C_b -> C_a`, acting by pulling extensions
//! back along `γ`. Maps factoring through projectives act by zero, so this
//! is a module over the stable category `C/P`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::algebra::Quiver;
use crate::context::{Context, Subcat};
use crate::error::{Error, Result};
use crate::homology::{factor_through_mono, kernel_over, lift, syzygy, Conflation, ExtSpace};
use crate::linalg::Matrix;
use crate::rep::{HomSpace, Rep, RepMap};

/// `Φ(X)`: the extension spaces of `X` and the resulting module.
#[derive(Clone, Debug)]
pub struct PhiObject {
    pub object: Arc<Rep>,
    pub exts: Vec<ExtSpace>,
    pub module: Arc<Rep>,
}

pub struct PhiModel<'a> {
    ctx: &'a Context,
    members: Vec<usize>,
    syzygies: Vec<Conflation>,
    quiver: Quiver,
    /// Per arrow `a -> b`: `Ωγ: ΩC_b -> ΩC_a`.
    omega: Vec<RepMap>,
    cache: Mutex<HashMap<usize, Arc<PhiObject>>>,
}

impl<'a> PhiModel<'a> {
    pub fn new(ctx: &'a Context, c: &Subcat) -> Result<PhiModel<'a>> {
        let alg = ctx.algebra();
        let members: Vec<usize> = c.iter().collect();
        let syzygies: Vec<Conflation> = members.iter().map(|&i| syzygy(alg, ctx.member(i))).collect();
        let mut arrows = Vec::new();
        let mut omega = Vec::new();
        for (a, &ia) in members.iter().enumerate() {
            for (b, &ib) in members.iter().enumerate() {
                for gamma in ctx.hom(ib, ia).basis() {
                    let (sa, sb) = (&syzygies[a], &syzygies[b]);
                    let t = lift(alg, &gamma.after(&sb.g), &sa.g)
                        .ok_or_else(|| Error::verification("projective cover does not lift"))?;
                    let w = factor_through_mono(&t.after(&sb.f), &sa.f)
                        .ok_or_else(|| Error::verification("syzygy map does not restrict"))?;
                    arrows.push((format!("g{}", arrows.len()), ctx.name(ia).to_string(), ctx.name(ib).to_string()));
                    omega.push(w);
                }
            }
        }
        let names = members.iter().map(|&i| ctx.name(i).to_string()).collect();
        let quiver = Quiver::new(names, &arrows)?;
        Ok(PhiModel { ctx, members, syzygies, quiver, omega, cache: Mutex::new(HashMap::new()) })
    }

    pub fn context(&self) -> &'a Context {
        self.ctx
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    /// `Φ(X)` for an arbitrary module.
    pub fn object(&self, x: &Arc<Rep>) -> PhiObject {
        let alg = self.ctx.algebra();
        let exts: Vec<ExtSpace> =
            self.syzygies.iter().map(|s| ExtSpace::with_syzygy(alg, s.clone(), x)).collect();
        let maps = self
            .quiver
            .arrows()
            .iter()
            .zip(&self.omega)
            .map(|(arrow, w)| {
                let (ea, eb) = (&exts[arrow.source], &exts[arrow.target]);
                let cols: Vec<Vec<u32>> = (0..ea.dim())
                    .map(|k| eb.class_of_map(&ea.representative(&unit(ea.dim(), k)).after(w)))
                    .collect();
                columns(self.ctx.p(), eb.dim(), &cols)
            })
            .collect();
        let dims = exts.iter().map(ExtSpace::dim).collect();
        let module = Arc::new(Rep { name: format!("Φ({})", x.name), p: self.ctx.p(), dims, maps });
        PhiObject { object: x.clone(), exts, module }
    }

    /// `Φ` of an atlas member, cached.
    pub fn member(&self, i: usize) -> Arc<PhiObject> {
        if let Some(o) = self.cache.lock().unwrap().get(&i) {
            return o.clone();
        }
        let o = Arc::new(self.object(self.ctx.member(i)));
        self.cache.lock().unwrap().insert(i, o.clone());
        o
    }

    /// `Φ(f): Φ(X) -> Φ(Y)`, pushing extensions forward along `f`.
    pub fn map(&self, f: &RepMap, x: &PhiObject, y: &PhiObject) -> RepMap {
        let blocks = x
            .exts
            .iter()
            .zip(&y.exts)
            .map(|(ex, ey)| {
                let cols: Vec<Vec<u32>> = (0..ex.dim())
                    .map(|k| ey.class_of_map(&f.after(&ex.representative(&unit(ex.dim(), k)))))
                    .collect();
                columns(self.ctx.p(), ey.dim(), &cols)
            })
            .collect();
        RepMap::from_blocks(x.module.clone(), y.module.clone(), blocks)
    }

    pub fn hom(&self, m: &Arc<Rep>, n: &Arc<Rep>) -> HomSpace {
        HomSpace::over(self.ctx.p(), &self.quiver, m, n)
    }

    pub fn kernel(&self, f: &RepMap) -> RepMap {
        kernel_over(self.ctx.p(), &self.quiver, f)
    }

    /// Writes a module as a sum of `Φ(Z)` over the given candidates by
    /// splitting off summands one at a time; returns the candidate indices.
    pub fn decompose(&self, m: &Arc<Rep>, candidates: &[usize]) -> Result<Vec<usize>> {
        let mut cur = m.clone();
        let mut parts = Vec::new();
        while cur.dim() > 0 {
            let mut split = None;
            'search: for &z in candidates {
                let pz = self.member(z);
                if pz.module.dim() == 0 || pz.module.dims.iter().zip(&cur.dims).any(|(a, b)| a > b) {
                    continue;
                }
                let into = self.hom(&pz.module, &cur);
                let back = self.hom(&cur, &pz.module);
                for s in into.basis() {
                    for r in back.basis() {
                        if let Some(inv) = r.after(s).inverse() {
                            split = Some((z, inv.after(r)));
                            break 'search;
                        }
                    }
                }
            }
            let Some((z, retraction)) = split else {
                return Err(Error::AtlasIncomplete(format!("a summand of {} is no Φ-image of a candidate", m.name)));
            };
            parts.push(z);
            cur = self.kernel(&retraction).source;
        }
        parts.sort_unstable();
        Ok(parts)
    }
}

fn unit(n: usize, k: usize) -> Vec<u32> {
    crate::linalg::vector::unit(n, k)
}

fn columns(p: u32, rows: usize, cols: &[Vec<u32>]) -> Matrix {
    Matrix::from_rows(p, rows, cols).transpose()
}
