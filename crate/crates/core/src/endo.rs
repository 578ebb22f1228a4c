//! Endomorphism rings: locality (indecomposability), radicals and
//! isomorphism search.

use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Quotient, Subspace};
use crate::poly;
use crate::rep::{HomSpace, Rep, RepMap};
use crate::algebra::Algebra;

/// Search spaces up to this many elements are enumerated exhaustively.
pub const ENUMERATION_LIMIT: u64 = 1 << 16;
const LOCALITY_TRIALS: usize = 20;
const FITTING_TRIALS: usize = 64;

/// Iterates over all coefficient vectors of `F_p^d`.
pub(crate) fn for_each_vector(p: u32, d: usize, mut f: impl FnMut(&[u32]) -> bool) {
    let mut v = vec![0u32; d];
    loop {
        if !f(&v) {
            return;
        }
        let mut i = 0;
        loop {
            if i == d {
                return;
            }
            v[i] += 1;
            if v[i] < p {
                break;
            }
            v[i] = 0;
            i += 1;
        }
    }
}

pub(crate) fn space_size(p: u32, d: usize) -> Option<u64> {
    (p as u64).checked_pow(d as u32)
}

pub(crate) fn random_vector(rng: &mut ChaCha8Rng, p: u32, d: usize) -> Vec<u32> {
    (0..d).map(|_| rng.gen_range(0..p)).collect()
}

fn mat_pow(m: &Matrix, mut e: usize) -> Matrix {
    let mut result = Matrix::identity(m.p(), m.rows());
    let mut b = m.clone();
    while e > 0 {
        if e & 1 == 1 {
            result = result.mul(&b);
        }
        b = b.mul(&b);
        e >>= 1;
    }
    result
}

/// `End(M)` with structure constants in the echelon basis of the Hom space.
struct EndRing {
    hom: HomSpace,
    mats: Vec<Matrix>,
    /// `products[i][j]` = coordinates of `e_i ∘ e_j`.
    products: Vec<Vec<Vec<u32>>>,
    identity: Vec<u32>,
}

impl EndRing {
    fn new(alg: &Algebra, m: &Arc<Rep>) -> EndRing {
        let hom = HomSpace::compute(alg, m, m);
        let mats: Vec<Matrix> = hom.basis().iter().map(RepMap::total_matrix).collect();
        let products = hom
            .basis()
            .iter()
            .map(|a| {
                hom.basis()
                    .iter()
                    .map(|b| hom.coords(&a.after(b)).expect("End is closed under composition"))
                    .collect()
            })
            .collect();
        let identity = hom.coords(&RepMap::identity(m)).expect("identity is an endomorphism");
        EndRing { hom, mats, products, identity }
    }

    fn p(&self) -> u32 {
        self.hom.source.p
    }

    fn dim(&self) -> usize {
        self.mats.len()
    }

    fn mul(&self, u: &[u32], v: &[u32]) -> Vec<u32> {
        let p = self.p();
        let mut out = vec![0; self.dim()];
        for (i, &a) in u.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in v.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                let c = crate::linalg::mul(p, a, b);
                crate::linalg::vector::axpy(p, &mut out, c, &self.products[i][j]);
            }
        }
        out
    }

    fn matrix(&self, coeffs: &[u32]) -> Matrix {
        let n = self.hom.source.dim();
        let mut out = Matrix::zeros(self.p(), n, n);
        for (c, m) in coeffs.iter().zip(&self.mats) {
            if *c != 0 {
                out = out.add(&m.scale(*c));
            }
        }
        out
    }

    /// Radical via the trace form; valid when `p` exceeds `dim M`.
    fn trace_radical(&self) -> Subspace {
        let d = self.dim();
        let p = self.p();
        let mut g = Matrix::zeros(p, d, d);
        for i in 0..d {
            for j in 0..d {
                g.set(i, j, self.mats[i].mul(&self.mats[j]).trace());
            }
        }
        let ker = g.left_nullspace();
        Subspace::spanned_by(p, d, (0..ker.rows()).map(|r| ker.row(r).to_vec()))
    }

    /// Radical for a local ring with residue field `F_p`: every basis element
    /// is a scalar plus a nilpotent.
    fn split_radical(&self) -> Option<Subspace> {
        let p = self.p();
        let n = self.hom.source.dim();
        let d = self.dim();
        let mut rad = Subspace::zero(p, d);
        for i in 0..d {
            let lambda = (0..p).find(|&l| {
                let mut x = self.mats[i].clone();
                for k in 0..n {
                    let v = crate::linalg::sub(p, x.get(k, k), l);
                    x.set(k, k, v);
                }
                mat_pow(&x, n).is_zero()
            })?;
            let mut v = crate::linalg::vector::unit(d, i);
            crate::linalg::vector::axpy(p, &mut v, crate::linalg::neg(p, lambda), &self.identity);
            rad.insert(v);
        }
        (rad.dim() + 1 == d).then_some(rad)
    }

    fn is_local_by_trace(&self, rng: &mut ChaCha8Rng) -> bool {
        let p = self.p();
        let d = self.dim();
        let rad = self.trace_radical();
        let q = Quotient::new(rad.clone());
        let k = q.dim();
        if k == 1 {
            return true;
        }
        // semisimple quotient must be commutative to be a field
        for i in 0..d {
            for j in i + 1..d {
                let mut c = self.products[i][j].clone();
                crate::linalg::vector::axpy(p, &mut c, p - 1, &self.products[j][i]);
                if !rad.contains(&c) {
                    return false;
                }
            }
        }
        for _ in 0..LOCALITY_TRIALS {
            let x = random_vector(rng, p, d);
            let mut powers: Vec<Vec<u32>> = Vec::new();
            let mut cur = self.identity.clone();
            let mut span = Subspace::zero(p, k);
            loop {
                let c = q.coords(&cur);
                if span.contains(&c) {
                    break;
                }
                span.insert(c.clone());
                powers.push(c);
                cur = self.mul(&cur, &x);
            }
            let deg = powers.len();
            if deg != k {
                continue;
            }
            let target = q.coords(&cur);
            let a = Matrix::from_rows(p, k, &powers).transpose();
            let Some(sol) = a.solve(&Matrix::from_vec(p, k, 1, target)) else { continue };
            let lower: Vec<u32> = (0..deg).map(|i| sol.get(i, 0)).collect();
            if poly::is_irreducible(p, &poly::monic_from_dependency(p, &lower)) {
                return true;
            }
        }
        false
    }

    fn is_local_by_enumeration(&self) -> bool {
        let n = self.hom.source.dim();
        let mut local = true;
        for_each_vector(self.p(), self.dim(), |v| {
            let x = self.matrix(v);
            if !(x.is_invertible() || mat_pow(&x, n).is_zero()) {
                local = false;
            }
            local
        });
        local
    }

    fn fitting_test(&self, rng: &mut ChaCha8Rng) -> bool {
        let n = self.hom.source.dim();
        for _ in 0..FITTING_TRIALS {
            let v = random_vector(rng, self.p(), self.dim());
            let xn = mat_pow(&self.matrix(&v), n);
            if !xn.is_zero() && !xn.is_invertible() {
                return false;
            }
        }
        true
    }
}

/// Whether `End(M)` is local. Exact when `p > dim M` (trace form) or when
/// `End(M)` is small enough to enumerate; otherwise a Fitting-lemma search
/// that can only err towards "indecomposable".
pub fn is_indecomposable(alg: &Algebra, m: &Arc<Rep>, rng: &mut ChaCha8Rng) -> bool {
    if m.is_zero() {
        return false;
    }
    let e = EndRing::new(alg, m);
    if e.dim() == 1 {
        return true;
    }
    if alg.p() as usize > m.dim() {
        e.is_local_by_trace(rng)
    } else if space_size(alg.p(), e.dim()).is_some_and(|s| s <= ENUMERATION_LIMIT) {
        e.is_local_by_enumeration()
    } else {
        e.fitting_test(rng)
    }
}

/// `rad End(M)` as a subspace of flattened endomorphisms, for indecomposable `M`.
pub fn endomorphism_radical(alg: &Algebra, m: &Arc<Rep>) -> Result<Subspace> {
    let e = EndRing::new(alg, m);
    let rad = if alg.p() as usize > m.dim() {
        e.trace_radical()
    } else {
        e.split_radical().ok_or_else(|| {
            Error::precondition(format!(
                "cannot determine the radical of End({}) over this field",
                m.name
            ))
        })?
    };
    let n = crate::rep::hom_len(m, m);
    Ok(Subspace::spanned_by(
        alg.p(),
        n,
        rad.basis().iter().map(|c| e.hom.combine(c).flatten()),
    ))
}

/// Searches `Hom(a, b)` for an isomorphism: exhaustively when small, else by
/// random combinations (a nonzero determinant polynomial is rarely hit by
/// chance).
pub fn find_isomorphism(alg: &Algebra, a: &Arc<Rep>, b: &Arc<Rep>, rng: &mut ChaCha8Rng) -> Option<RepMap> {
    if a.dims != b.dims {
        return None;
    }
    let hom = HomSpace::compute(alg, a, b);
    if a.is_zero() {
        return Some(RepMap::zero(a, b));
    }
    if hom.dim() == 0 {
        return None;
    }
    if space_size(alg.p(), hom.dim()).is_some_and(|s| s <= ENUMERATION_LIMIT) {
        let mut found = None;
        for_each_vector(alg.p(), hom.dim(), |v| {
            let f = hom.combine(v);
            if f.is_iso() {
                found = Some(f);
            }
            found.is_none()
        });
        return found;
    }
    for _ in 0..FITTING_TRIALS {
        let f = hom.combine(&random_vector(rng, alg.p(), hom.dim()));
        if f.is_iso() {
            return Some(f);
        }
    }
    None
}
