//! Univariate polynomials over `F_p`, coefficients stored low degree first.

use crate::linalg::{add, inv, mul, neg, sub};

pub type Poly = Vec<u32>;

pub fn trim(mut f: Poly) -> Poly {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

pub fn degree(f: &[u32]) -> Option<usize> {
    f.iter().rposition(|&c| c != 0)
}

pub fn rem(p: u32, f: &[u32], g: &[u32]) -> Poly {
    let dg = degree(g).expect("division by zero polynomial");
    let lead_inv = inv(p, g[dg]).unwrap();
    let mut r = trim(f.to_vec());
    while let Some(dr) = degree(&r) {
        if dr < dg {
            break;
        }
        let c = mul(p, r[dr], lead_inv);
        let shift = dr - dg;
        for (i, &gi) in g.iter().enumerate().take(dg + 1) {
            r[shift + i] = sub(p, r[shift + i], mul(p, c, gi));
        }
        r = trim(r);
    }
    r
}

pub fn mul_poly(p: u32, f: &[u32], g: &[u32]) -> Poly {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; f.len() + g.len() - 1];
    for (i, &a) in f.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in g.iter().enumerate() {
            out[i + j] = add(p, out[i + j], mul(p, a, b));
        }
    }
    trim(out)
}

pub fn sub_poly(p: u32, f: &[u32], g: &[u32]) -> Poly {
    let n = f.len().max(g.len());
    let out = (0..n)
        .map(|i| sub(p, f.get(i).copied().unwrap_or(0), g.get(i).copied().unwrap_or(0)))
        .collect();
    trim(out)
}

pub fn gcd(p: u32, f: &[u32], g: &[u32]) -> Poly {
    let mut a = trim(f.to_vec());
    let mut b = trim(g.to_vec());
    while !b.is_empty() {
        let r = rem(p, &a, &b);
        a = b;
        b = r;
    }
    if let Some(d) = degree(&a) {
        let s = inv(p, a[d]).unwrap();
        a.iter_mut().for_each(|c| *c = mul(p, *c, s));
    }
    a
}

/// `x^(p^k) mod f` by repeated `p`-th powering.
fn frobenius_power(p: u32, f: &[u32], k: usize) -> Poly {
    let mut x = rem(p, &[0, 1], f);
    for _ in 0..k {
        x = pow_mod(p, &x, p as u64, f);
    }
    x
}

pub fn pow_mod(p: u32, base: &[u32], mut e: u64, f: &[u32]) -> Poly {
    let mut result = rem(p, &[1], f);
    let mut b = rem(p, base, f);
    while e > 0 {
        if e & 1 == 1 {
            result = rem(p, &mul_poly(p, &result, &b), f);
        }
        b = rem(p, &mul_poly(p, &b, &b), f);
        e >>= 1;
    }
    result
}

fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's irreducibility test.
pub fn is_irreducible(p: u32, f: &[u32]) -> bool {
    let f = trim(f.to_vec());
    let Some(d) = degree(&f) else { return false };
    if d == 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    let x = vec![0, 1];
    if sub_poly(p, &frobenius_power(p, &f, d), &rem(p, &x, &f)) != Vec::<u32>::new() {
        return false;
    }
    for q in prime_factors(d) {
        let h = sub_poly(p, &frobenius_power(p, &f, d / q), &x);
        if degree(&gcd(p, &h, &f)) != Some(0) {
            return false;
        }
    }
    true
}

/// Monic polynomial from the dependency `x^d = sum c_i x^i`.
pub fn monic_from_dependency(p: u32, lower: &[u32]) -> Poly {
    let mut f: Poly = lower.iter().map(|&c| neg(p, c)).collect();
    f.push(1);
    f
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn irreducibility_small_cases() {
        // x^2 + 1 over F_3 is irreducible, over F_5 it splits.
        assert!(is_irreducible(3, &[1, 0, 1]));
        assert!(!is_irreducible(5, &[1, 0, 1]));
        // x^2 + x + 1 over F_2 is irreducible; x^2 + 1 = (x+1)^2 is not.
        assert!(is_irreducible(2, &[1, 1, 1]));
        assert!(!is_irreducible(2, &[1, 0, 1]));
        assert!(is_irreducible(101, &[7, 1]));
    }

    #[test]
    fn gcd_is_monic() {
        let f = mul_poly(7, &[1, 1], &[2, 1]);
        let g = mul_poly(7, &[1, 1], &[3, 1]);
        assert_eq!(gcd(7, &f, &g), vec![1, 1]);
    }
}
