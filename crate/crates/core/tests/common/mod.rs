//! Oracles shared by the integration tests. Everything here works over F₂
//! by enumeration and avoids the library's homological algebra.

#![allow(dead_code)]

use std::collections::HashSet;
use std::sync::Arc;

use heartloc::algebra::Algebra;
use heartloc::context::{Config, Context, Subcat};
use heartloc::fixtures;
use heartloc::linalg::Matrix;
use heartloc::problem::Problem;
use heartloc::rep::Rep;

/// `A_n` over F₂ with its interval modules.
pub fn linear(n: usize) -> Problem {
    fixtures::linear_path_algebra(2, n).build(None, Config::default()).unwrap()
}

fn bits(m: &Matrix) -> Vec<u8> {
    (0..m.rows()).flat_map(|r| (0..m.cols()).map(move |c| (r, c))).map(|(r, c)| m.get(r, c) as u8).collect()
}

/// `a * b` over F₂ on row-major bit matrices.
fn mul(a: &[u8], b: &[u8], rows: usize, inner: usize, cols: usize) -> Vec<u8> {
    let mut out = vec![0u8; rows * cols];
    for r in 0..rows {
        for k in 0..inner {
            if a[r * inner + k] == 1 {
                for c in 0..cols {
                    out[r * cols + c] ^= b[k * cols + c];
                }
            }
        }
    }
    out
}

/// `dim Ext¹(M, N)` for a path algebra without relations over F₂, as
/// `log₂ |Z| / |B|`: cocycles are all families `δ_a: M_s -> N_t`, and the
/// coboundaries `N_a h_s - h_t M_a` are collected by running through every
/// family `h_v: M_v -> N_v`.
pub fn ext1_by_cocycles(alg: &Algebra, m: &Rep, n: &Rep) -> usize {
    assert_eq!(alg.p(), 2);
    assert!(alg.relations().is_empty(), "cocycle oracle needs a path algebra");
    let arrows = alg.quiver().arrows();
    let cocycle_bits: usize = arrows.iter().map(|a| m.dims[a.source] * n.dims[a.target]).sum();
    let h_sizes: Vec<usize> = (0..m.dims.len()).map(|v| m.dims[v] * n.dims[v]).collect();
    let h_bits: usize = h_sizes.iter().sum();
    assert!(h_bits <= 20, "too many homotopies to enumerate");
    let (ma, na): (Vec<Vec<u8>>, Vec<Vec<u8>>) = (m.maps.iter().map(bits).collect(), n.maps.iter().map(bits).collect());
    let mut boundaries = HashSet::new();
    for word in 0u32..(1 << h_bits) {
        let mut h = Vec::new();
        let mut at = 0;
        for &size in &h_sizes {
            h.push((0..size).map(|i| ((word >> (at + i)) & 1) as u8).collect::<Vec<u8>>());
            at += size;
        }
        let mut delta = Vec::with_capacity(cocycle_bits);
        for (k, a) in arrows.iter().enumerate() {
            let (s, t) = (a.source, a.target);
            let left = mul(&na[k], &h[s], n.dims[t], n.dims[s], m.dims[s]);
            let right = mul(&h[t], &ma[k], n.dims[t], m.dims[t], m.dims[s]);
            delta.extend(left.iter().zip(&right).map(|(x, y)| x ^ y));
        }
        boundaries.insert(delta);
    }
    cocycle_bits - boundaries.len().trailing_zeros() as usize
}

/// Sorted multisets of members of `s` of total dimension at most `max_dim`,
/// including the empty one.
pub fn multisets(ctx: &Context, s: &Subcat, max_dim: usize) -> Vec<Vec<usize>> {
    fn go(ctx: &Context, members: &[usize], start: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(cur.clone());
        for k in start..members.len() {
            let d = ctx.member(members[k]).dim();
            if d > 0 && d <= left {
                cur.push(members[k]);
                go(ctx, members, k, left - d, cur, out);
                cur.pop();
            }
        }
    }
    let members: Vec<usize> = s.iter().collect();
    let mut out = Vec::new();
    go(ctx, &members, 0, max_dim, &mut Vec::new(), &mut out);
    out
}

/// The middle term of the extension of `K` by `X` with cocycle `delta`
/// (one bit matrix `K_s -> X_t` per arrow): `E_a = [[X_a, δ_a], [0, K_a]]`.
fn glue(alg: &Algebra, x: &Rep, k: &Rep, delta: &[Vec<u8>]) -> Rep {
    let dims: Vec<usize> = (0..x.dims.len()).map(|v| x.dims[v] + k.dims[v]).collect();
    let maps = alg
        .quiver()
        .arrows()
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let (s, t) = (a.source, a.target);
            let mut m = vec![0u32; dims[t] * dims[s]];
            for r in 0..x.dims[t] {
                for c in 0..x.dims[s] {
                    m[r * dims[s] + c] = x.maps[i].get(r, c);
                }
                for c in 0..k.dims[s] {
                    m[r * dims[s] + x.dims[s] + c] = u32::from(delta[i][r * k.dims[s] + c]);
                }
            }
            for r in 0..k.dims[t] {
                for c in 0..k.dims[s] {
                    m[(x.dims[t] + r) * dims[s] + x.dims[s] + c] = k.maps[i].get(r, c);
                }
            }
            Matrix::from_vec(2, dims[t], dims[s], m)
        })
        .collect();
    Rep::new(alg, "E", dims, maps).expect("extensions of path algebra modules are modules")
}

/// Whether `X -> E -> K` exists with `E ∈ add B'`, `K ∈ add B''` and
/// `dim E ≤ cap`, by gluing `X` and every such `K` along every cocycle.
pub fn cocone_by_search(ctx: &Context, x: &Arc<Rep>, bp: &Subcat, bpp: &Subcat, cap: usize) -> bool {
    let alg = ctx.algebra();
    assert!(alg.relations().is_empty(), "gluing oracle needs a path algebra");
    let arrows = alg.quiver().arrows();
    for parts in multisets(ctx, bpp, cap.saturating_sub(x.dim())) {
        let k = ctx.object(&parts).rep;
        let sizes: Vec<usize> = arrows.iter().map(|a| x.dims[a.target] * k.dims[a.source]).collect();
        let total: usize = sizes.iter().sum();
        assert!(total <= 20, "too many cocycles to enumerate");
        for word in 0u32..(1 << total) {
            let mut at = 0;
            let delta: Vec<Vec<u8>> = sizes
                .iter()
                .map(|&n| {
                    let d = (0..n).map(|i| ((word >> (at + i)) & 1) as u8).collect();
                    at += n;
                    d
                })
                .collect();
            let e = Arc::new(glue(alg, x, &k, &delta));
            if ctx.in_add(&e, bp).unwrap() {
                return true;
            }
        }
    }
    false
}

/// Distinct nonempty subsets of the atlas that are rigid according to the
/// cocycle oracle.
pub fn random_rigid(ctx: &Context, rng: &mut impl rand::Rng, count: usize) -> Vec<Subcat> {
    let alg = ctx.algebra();
    let rigid = |s: &Subcat| s.iter().all(|i| s.iter().all(|j| ext1_by_cocycles(alg, ctx.member(i), ctx.member(j)) == 0));
    let mut out = Vec::new();
    for _ in 0..1000 {
        if out.len() == count {
            break;
        }
        let s = Subcat::new((0..ctx.len()).filter(|_| rng.gen_bool(0.4)));
        if !s.is_empty() && rigid(&s) && !out.contains(&s) {
            out.push(s);
        }
    }
    out
}
