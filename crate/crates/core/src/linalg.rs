//! Exact dense linear algebra over a prime field `F_p`.
//!
//! Entries are stored reduced in `0..p`. Every matrix carries its modulus so
//! that mixing fields is caught at the operation boundary.

use std::fmt;

use crate::error::{Error, Result};

/// Returns true when `p` is a prime that fits the arithmetic used here.
pub fn is_prime(p: u64) -> bool {
    if p < 2 || p > u32::MAX as u64 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[inline]
pub fn reduce(p: u32, x: i64) -> u32 {
    x.rem_euclid(p as i64) as u32
}

#[inline]
pub fn add(p: u32, a: u32, b: u32) -> u32 {
    ((a as u64 + b as u64) % p as u64) as u32
}

#[inline]
pub fn sub(p: u32, a: u32, b: u32) -> u32 {
    ((a as u64 + p as u64 - b as u64) % p as u64) as u32
}

#[inline]
pub fn mul(p: u32, a: u32, b: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

#[inline]
pub fn neg(p: u32, a: u32) -> u32 {
    if a == 0 {
        0
    } else {
        p - a
    }
}

pub fn pow(p: u32, mut a: u32, mut e: u64) -> u32 {
    let mut r = 1u32 % p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul(p, r, a);
        }
        a = mul(p, a, a);
        e >>= 1;
    }
    r
}

/// Multiplicative inverse; `None` for zero.
pub fn inv(p: u32, a: u32) -> Option<u32> {
    if a.is_multiple_of(p) {
        None
    } else {
        Some(pow(p, a, p as u64 - 2))
    }
}

/// Signed representative in `(-p/2, p/2]`, used for printing.
pub fn signed(p: u32, a: u32) -> i64 {
    if a as u64 * 2 > p as u64 {
        a as i64 - p as i64
    } else {
        a as i64
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    p: u32,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]({}x{} mod {})", self.rows, self.cols, self.p)
    }
}

impl Matrix {
    pub fn zeros(p: u32, rows: usize, cols: usize) -> Self {
        Matrix { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(p: u32, n: usize) -> Self {
        let mut m = Matrix::zeros(p, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1 % p;
        }
        m
    }

    pub fn from_vec(p: u32, rows: usize, cols: usize, data: Vec<u32>) -> Self {
        assert_eq!(rows * cols, data.len(), "matrix data length");
        let data = data.into_iter().map(|x| x % p).collect();
        Matrix { p, rows, cols, data }
    }

    pub fn from_i64(p: u32, rows: usize, cols: usize, data: &[i64]) -> Self {
        assert_eq!(rows * cols, data.len(), "matrix data length");
        Matrix { p, rows, cols, data: data.iter().map(|&x| reduce(p, x)).collect() }
    }

    /// Builds a matrix whose rows are the given vectors (all of length `cols`).
    pub fn from_rows(p: u32, cols: usize, rows: &[Vec<u32>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols);
            data.extend_from_slice(r);
        }
        Matrix { p, rows: rows.len(), cols, data }
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }
    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }
    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }
    #[inline]
    pub fn data(&self) -> &[u32] {
        &self.data
    }
    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }
    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v % self.p;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.p, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.p, other.p, "field mismatch");
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let p = self.p as u64;
        let mut out = Matrix::zeros(self.p, self.rows, other.cols);
        let mut acc = vec![0u64; other.cols];
        for r in 0..self.rows {
            acc.iter_mut().for_each(|a| *a = 0);
            for k in 0..self.cols {
                let a = self.get(r, k) as u64;
                if a == 0 {
                    continue;
                }
                let orow = other.row(k);
                for (c, &b) in orow.iter().enumerate() {
                    acc[c] = (acc[c] + a * b as u64) % p;
                }
            }
            for (slot, &v) in out.data[r * other.cols..(r + 1) * other.cols].iter_mut().zip(&acc) {
                *slot = v as u32;
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        self.zip(other, add)
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.zip(other, sub)
    }

    fn zip(&self, other: &Matrix, op: fn(u32, u32, u32) -> u32) -> Matrix {
        assert_eq!(self.p, other.p, "field mismatch");
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        let p = self.p;
        Matrix {
            p,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| op(p, a, b)).collect(),
        }
    }

    pub fn scale(&self, s: u32) -> Matrix {
        let p = self.p;
        Matrix { p, rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| mul(p, a, s)).collect() }
    }

    pub fn neg(&self) -> Matrix {
        let p = self.p;
        Matrix { p, rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| neg(p, a)).collect() }
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        let mut out = Matrix::zeros(self.p, self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c));
            }
            for c in 0..other.cols {
                out.set(r, self.cols + c, other.get(r, c));
            }
        }
        out
    }

    /// `[self; other]`.
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix { p: self.p, rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn hcat(p: u32, rows: usize, blocks: &[Matrix]) -> Matrix {
        blocks.iter().fold(Matrix::zeros(p, rows, 0), |acc, b| acc.hstack(b))
    }

    pub fn vcat(p: u32, cols: usize, blocks: &[Matrix]) -> Matrix {
        blocks.iter().fold(Matrix::zeros(p, 0, cols), |acc, b| acc.vstack(b))
    }

    pub fn block_diag(p: u32, blocks: &[Matrix]) -> Matrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(p, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for r in 0..b.rows {
                for c in 0..b.cols {
                    out.set(r0 + r, c0 + c, b.get(r, c));
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Matrix {
        let mut out = Matrix::zeros(self.p, rows.len(), cols.len());
        for (i, r) in rows.clone().enumerate() {
            for (j, c) in cols.clone().enumerate() {
                out.set(i, j, self.get(r, c));
            }
        }
        out
    }

    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.p, self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                out.set(r, j, self.get(r, c));
            }
        }
        out
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        (m, pivots)
    }

    fn rref_in_place(&mut self) -> Vec<usize> {
        let p = self.p;
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(piv) = (r..rows).find(|&i| self.get(i, c) != 0) else { continue };
            if piv != r {
                for k in 0..cols {
                    self.data.swap(piv * cols + k, r * cols + k);
                }
            }
            let s = inv(p, self.get(r, c)).expect("nonzero pivot");
            for k in c..cols {
                let v = mul(p, self.get(r, k), s);
                self.data[r * cols + k] = v;
            }
            for i in 0..rows {
                if i == r {
                    continue;
                }
                let f = self.get(i, c);
                if f == 0 {
                    continue;
                }
                for k in c..cols {
                    let v = sub(p, self.get(i, k), mul(p, f, self.get(r, k)));
                    self.data[i * cols + k] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : self * x = 0}` as the columns of the returned matrix.
    pub fn nullspace(&self) -> Matrix {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Matrix::zeros(self.p, self.cols, free.len());
        for (j, &fc) in free.iter().enumerate() {
            out.set(fc, j, 1);
            for (i, &pc) in pivots.iter().enumerate() {
                out.set(pc, j, neg(self.p, r.get(i, fc)));
            }
        }
        out
    }

    /// Basis of `{y : y * self = 0}` as the rows of the returned matrix.
    pub fn left_nullspace(&self) -> Matrix {
        self.transpose().nullspace().transpose()
    }

    /// Basis of the column space as the columns of the returned matrix.
    pub fn column_space(&self) -> Matrix {
        let (_, pivots) = self.rref();
        self.select_columns(&pivots)
    }

    /// Solves `self * X = rhs`; `None` when inconsistent.
    pub fn solve(&self, rhs: &Matrix) -> Option<Matrix> {
        assert_eq!(self.rows, rhs.rows, "solve shape mismatch");
        let aug = self.hstack(rhs);
        let (r, pivots) = aug.rref();
        if pivots.iter().any(|&c| c >= self.cols) {
            return None;
        }
        let mut x = Matrix::zeros(self.p, self.cols, rhs.cols);
        for (i, &pc) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x.set(pc, j, r.get(i, self.cols + j));
            }
        }
        Some(x)
    }

    /// Solves `X * self = rhs`.
    pub fn solve_left(&self, rhs: &Matrix) -> Option<Matrix> {
        self.transpose().solve(&rhs.transpose()).map(|x| x.transpose())
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        if self.rows == 0 {
            return Some(self.clone());
        }
        let aug = self.hstack(&Matrix::identity(self.p, self.rows));
        let (r, pivots) = aug.rref();
        if pivots.len() < self.rows || pivots[self.rows - 1] >= self.cols {
            return None;
        }
        Some(r.submatrix(0..self.rows, self.cols..2 * self.cols))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn trace(&self) -> u32 {
        let mut t = 0;
        for i in 0..self.rows.min(self.cols) {
            t = add(self.p, t, self.get(i, i));
        }
        t
    }
}

/// Row vector helpers over `F_p`.
pub mod vector {
    use super::*;

    pub fn axpy(p: u32, y: &mut [u32], a: u32, x: &[u32]) {
        if a == 0 {
            return;
        }
        for (yi, &xi) in y.iter_mut().zip(x) {
            *yi = add(p, *yi, mul(p, a, xi));
        }
    }

    pub fn is_zero(v: &[u32]) -> bool {
        v.iter().all(|&x| x == 0)
    }

    pub fn unit(n: usize, i: usize) -> Vec<u32> {
        let mut v = vec![0; n];
        v[i] = 1;
        v
    }

    pub fn combine(p: u32, coeffs: &[u32], vectors: &[Vec<u32>], len: usize) -> Vec<u32> {
        let mut out = vec![0; len];
        for (&c, v) in coeffs.iter().zip(vectors) {
            axpy(p, &mut out, c, v);
        }
        out
    }
}

/// A subspace of `F_p^n` held in reduced row echelon form.
///
/// Reduction against the echelon rows gives canonical coset
/// representatives, which is what the quotient constructions rely on.
#[derive(Clone, Debug)]
pub struct Subspace {
    p: u32,
    n: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(p: u32, n: usize) -> Self {
        Subspace { p, n, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(p: u32, n: usize) -> Self {
        Subspace::spanned_by(p, n, (0..n).map(|i| vector::unit(n, i)))
    }

    pub fn spanned_by<I: IntoIterator<Item = Vec<u32>>>(p: u32, n: usize, vectors: I) -> Self {
        let mut s = Subspace::zero(p, n);
        for v in vectors {
            s.insert(v);
        }
        s
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn ambient_dim(&self) -> usize {
        self.n
    }
    pub fn dim(&self) -> usize {
        self.rows.len()
    }
    pub fn basis(&self) -> &[Vec<u32>] {
        &self.rows
    }
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduces `v` against the echelon basis in place; the result is zero
    /// exactly when `v` lies in the subspace.
    pub fn reduce(&self, v: &mut [u32]) {
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let f = v[pc];
            if f != 0 {
                vector::axpy(self.p, v, neg(self.p, f), row);
            }
        }
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        vector::is_zero(&w)
    }

    /// Adds a vector; returns true if the dimension grew.
    pub fn insert(&mut self, mut v: Vec<u32>) -> bool {
        assert_eq!(v.len(), self.n, "subspace ambient mismatch");
        let p = self.p;
        self.reduce(&mut v);
        let Some(pc) = v.iter().position(|&x| x != 0) else { return false };
        let s = inv(p, v[pc]).expect("nonzero");
        v.iter_mut().for_each(|x| *x = mul(p, *x, s));
        for row in self.rows.iter_mut() {
            let f = row[pc];
            if f != 0 {
                vector::axpy(p, row, neg(p, f), &v);
            }
        }
        let at = self.pivots.partition_point(|&q| q < pc);
        self.pivots.insert(at, pc);
        self.rows.insert(at, v);
        true
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut s = self.clone();
        for r in &other.rows {
            s.insert(r.clone());
        }
        s
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.rows.iter().all(|r| other.contains(r))
    }

    pub fn same_as(&self, other: &Subspace) -> bool {
        self.dim() == other.dim() && self.is_subspace_of(other)
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        // x = sum a_i s_i = sum b_j o_j  <=>  [a, b] in left kernel of [S; -O]
        let p = self.p;
        if self.dim() == 0 || other.dim() == 0 {
            return Subspace::zero(p, self.n);
        }
        let s = Matrix::from_rows(p, self.n, &self.rows);
        let o = Matrix::from_rows(p, self.n, &other.rows).neg();
        let ker = s.vstack(&o).left_nullspace();
        let mut out = Subspace::zero(p, self.n);
        for k in 0..ker.rows() {
            let coeffs = &ker.row(k)[..self.dim()];
            out.insert(vector::combine(p, coeffs, &self.rows, self.n));
        }
        out
    }

    /// Coordinates of `v` with respect to [`Subspace::basis`], if `v` lies in
    /// the subspace. The echelon form makes these the pivot entries.
    pub fn coordinates(&self, v: &[u32]) -> Option<Vec<u32>> {
        let coords: Vec<u32> = self.pivots.iter().map(|&pc| v[pc]).collect();
        let rebuilt = vector::combine(self.p, &coords, &self.rows, self.n);
        (rebuilt == v).then_some(coords)
    }
}

/// The quotient `F_p^n / S` with coordinates read off at non-pivot positions.
#[derive(Clone, Debug)]
pub struct Quotient {
    sub: Subspace,
    free: Vec<usize>,
}

impl Quotient {
    pub fn new(sub: Subspace) -> Self {
        let free = (0..sub.ambient_dim()).filter(|c| !sub.pivots().contains(c)).collect();
        Quotient { sub, free }
    }

    pub fn dim(&self) -> usize {
        self.free.len()
    }

    pub fn subspace(&self) -> &Subspace {
        &self.sub
    }

    pub fn coords(&self, v: &[u32]) -> Vec<u32> {
        let mut w = v.to_vec();
        self.sub.reduce(&mut w);
        self.free.iter().map(|&c| w[c]).collect()
    }

    /// A representative in the ambient space for the given quotient coordinates.
    pub fn lift(&self, coords: &[u32]) -> Vec<u32> {
        let mut v = vec![0; self.sub.ambient_dim()];
        for (&c, &x) in self.free.iter().zip(coords) {
            v[c] = x;
        }
        v
    }
}

/// Characteristic-free rank check used by callers that only need a boolean.
pub fn check_same_field(a: &Matrix, b: &Matrix) -> Result<()> {
    if a.p() != b.p() {
        return Err(Error::FieldMismatch(a.p(), b.p()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_round_trip() {
        let m = Matrix::from_i64(101, 3, 3, &[2, 1, 0, 0, 1, 5, 7, 0, 1]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(101, 3));
    }

    #[test]
    fn singular_has_no_inverse() {
        let m = Matrix::from_i64(7, 2, 2, &[1, 2, 2, 4]);
        assert!(m.inverse().is_none());
        assert_eq!(m.rank(), 1);
        let k = m.nullspace();
        assert_eq!(k.cols(), 1);
        assert!(m.mul(&k).is_zero());
    }

    #[test]
    fn solve_reports_inconsistency() {
        let a = Matrix::from_i64(5, 2, 1, &[1, 1]);
        let b = Matrix::from_i64(5, 2, 1, &[1, 2]);
        assert!(a.solve(&b).is_none());
        let b = Matrix::from_i64(5, 2, 1, &[3, 3]);
        assert_eq!(a.solve(&b).unwrap().get(0, 0), 3);
    }

    #[test]
    fn subspace_quotient_coordinates() {
        let s = Subspace::spanned_by(3, 3, vec![vec![1, 1, 0], vec![2, 2, 0]]);
        assert_eq!(s.dim(), 1);
        let q = Quotient::new(s);
        assert_eq!(q.dim(), 2);
        assert_eq!(q.coords(&[1, 1, 0]), vec![0, 0]);
        let v = vec![2, 0, 1];
        let back = q.lift(&q.coords(&v));
        let mut diff: Vec<u32> = v.iter().zip(&back).map(|(&a, &b)| sub(3, a, b)).collect();
        q.subspace().reduce(&mut diff);
        assert!(vector::is_zero(&diff));
    }

    #[test]
    fn intersection_of_planes() {
        let a = Subspace::spanned_by(11, 3, vec![vec![1, 0, 0], vec![0, 1, 0]]);
        let b = Subspace::spanned_by(11, 3, vec![vec![0, 1, 0], vec![0, 0, 1]]);
        let i = a.intersection(&b);
        assert_eq!(i.dim(), 1);
        assert!(i.contains(&[0, 5, 0]));
    }

    #[test]
    fn primes() {
        assert!(is_prime(2));
        assert!(is_prime(101));
        assert!(!is_prime(1));
        assert!(!is_prime(91));
    }
}
