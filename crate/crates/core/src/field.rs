//! Exact linear algebra over a prime field GF(p).
//!
//! Vectors are rows and matrices act on the right: the image of `x` under
//! `M` is `x * M`. Every entry is stored reduced into `0..p`.

use std::fmt;

use crate::error::{Error, Result};

/// A validated prime modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fp(u32);

impl Fp {
    pub fn new(p: u64) -> Result<Self> {
        if p < 2 || p > u32::MAX as u64 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Fp(p as u32))
    }

    #[inline]
    pub fn p(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn reduce(self, v: u64) -> u32 {
        (v % self.0 as u64) as u32
    }

    #[inline]
    pub fn reduce_signed(self, v: i64) -> u32 {
        v.rem_euclid(self.0 as i64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        if s >= self.0 as u64 {
            (s - self.0 as u64) as u32
        } else {
            s as u32
        }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            (a as u64 + self.0 as u64 - b as u64) as u32
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0 as u64) as u32
    }

    /// Inverse by Fermat's little theorem.
    pub fn inv(self, a: u32) -> Result<u32> {
        if a.is_multiple_of(self.0) {
            return Err(Error::NotInvertible);
        }
        Ok(self.pow(a, self.0 as u64 - 2))
    }

    pub fn pow(self, mut base: u32, mut exp: u64) -> u32 {
        let mut acc = 1 % self.0;
        base %= self.0;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// `p^d` as a point count, if it fits.
    pub fn checked_order(self, d: usize) -> Option<u64> {
        (self.0 as u64).checked_pow(u32::try_from(d).ok()?)
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 4 {
        return n >= 2;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut f = 3;
    while f * f <= n {
        if n.is_multiple_of(f) {
            return false;
        }
        f += 2;
    }
    true
}

/// A residue class modulo `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Scalar {
    value: u32,
    p: Fp,
}

impl Scalar {
    pub fn new(p: Fp, value: u64) -> Self {
        Scalar {
            value: p.reduce(value),
            p,
        }
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn modulus(self) -> Fp {
        self.p
    }
}

/// Multiplicative inverse in GF(p).
pub fn field_inverse(a: Scalar) -> Result<Scalar> {
    Ok(Scalar {
        value: a.p.inv(a.value)?,
        p: a.p,
    })
}

/// A row vector over GF(p).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RowVector {
    p: Fp,
    entries: Vec<u32>,
}

impl RowVector {
    pub fn zero(p: Fp, d: usize) -> Self {
        RowVector {
            p,
            entries: vec![0; d],
        }
    }

    /// The `i`-th standard basis vector (0-based).
    pub fn unit(p: Fp, d: usize, i: usize) -> Self {
        let mut v = Self::zero(p, d);
        v.entries[i] = 1;
        v
    }

    pub fn from_entries<I: IntoIterator<Item = i64>>(p: Fp, entries: I) -> Self {
        RowVector {
            p,
            entries: entries.into_iter().map(|e| p.reduce_signed(e)).collect(),
        }
    }

    pub(crate) fn from_reduced(p: Fp, entries: Vec<u32>) -> Self {
        debug_assert!(entries.iter().all(|&e| e < p.p()));
        RowVector { p, entries }
    }

    /// The point of `GF(p)^d` with base-`p` index `index`; coordinate 1 is the
    /// least significant digit.
    pub fn from_index(p: Fp, d: usize, mut index: u64) -> Self {
        let q = p.p() as u64;
        let entries = (0..d)
            .map(|_| {
                let digit = (index % q) as u32;
                index /= q;
                digit
            })
            .collect();
        RowVector { p, entries }
    }

    /// Inverse of [`RowVector::from_index`].
    pub fn index(&self) -> u64 {
        let q = self.p.p() as u64;
        self.entries
            .iter()
            .rev()
            .fold(0, |acc, &e| acc * q + e as u64)
    }

    pub fn modulus(&self) -> Fp {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> Scalar {
        Scalar {
            value: self.entries[i],
            p: self.p,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    pub fn add(&self, other: &RowVector) -> RowVector {
        debug_assert_eq!(self.dim(), other.dim());
        let p = self.p;
        RowVector {
            p,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| p.add(a, b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &RowVector) -> RowVector {
        let p = self.p;
        RowVector {
            p,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| p.sub(a, b))
                .collect(),
        }
    }

    pub fn neg(&self) -> RowVector {
        let p = self.p;
        RowVector {
            p,
            entries: self.entries.iter().map(|&a| p.neg(a)).collect(),
        }
    }

    pub fn scale(&self, c: u32) -> RowVector {
        let p = self.p;
        RowVector {
            p,
            entries: self.entries.iter().map(|&a| p.mul(a, c)).collect(),
        }
    }

    /// `self * m` under the row-vector convention.
    pub fn mul_matrix(&self, m: &Matrix) -> RowVector {
        assert_eq!(self.dim(), m.rows, "vector length must match matrix rows");
        let p = self.p;
        let mut out = vec![0u64; m.cols];
        for (i, &x) in self.entries.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (o, &a) in out.iter_mut().zip(m.row(i)) {
                *o = (*o + x as u64 * a as u64) % p.p() as u64;
            }
        }
        RowVector {
            p,
            entries: out.into_iter().map(|v| v as u32).collect(),
        }
    }
}

impl fmt::Display for RowVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// A dense matrix over GF(p), stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Matrix {
    p: Fp,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl Matrix {
    pub fn zero(p: Fp, rows: usize, cols: usize) -> Self {
        Matrix {
            p,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(p: Fp, d: usize) -> Self {
        let mut m = Self::zero(p, d, d);
        for i in 0..d {
            m.data[i * d + i] = 1;
        }
        m
    }

    /// Builds a matrix from integer rows, reducing every entry.
    pub fn from_rows<R: AsRef<[i64]>>(p: Fp, rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::Incompatible("ragged matrix rows".into()));
            }
            data.extend(r.iter().map(|&e| p.reduce_signed(e)));
        }
        Ok(Matrix {
            p,
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Stacks row vectors into a matrix.
    pub fn from_row_vectors(p: Fp, cols: usize, rows: &[RowVector]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.dim(), cols);
            data.extend_from_slice(&r.entries);
        }
        Matrix {
            p,
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn modulus(&self) -> Fp {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vector(&self, i: usize) -> RowVector {
        RowVector::from_reduced(self.p, self.row(i).to_vec())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows)
                .all(|i| (0..self.cols).all(|j| self.get(i, j) == u32::from(i == j)))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix shapes do not chain");
        let p = self.p.p() as u64;
        let mut out = Matrix::zero(self.p, self.rows, other.cols);
        let mut acc = vec![0u64; other.cols];
        for i in 0..self.rows {
            acc.iter_mut().for_each(|a| *a = 0);
            for k in 0..self.cols {
                let a = self.get(i, k) as u64;
                if a == 0 {
                    continue;
                }
                for (s, &b) in acc.iter_mut().zip(other.row(k)) {
                    *s = (*s + a * b as u64) % p;
                }
            }
            for (j, &s) in acc.iter().enumerate() {
                out.set(i, j, s as u32);
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let p = self.p;
        Matrix {
            p,
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| p.add(a, b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let p = self.p;
        Matrix {
            p,
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| p.sub(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, c: u32) -> Matrix {
        let p = self.p;
        Matrix {
            p,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| p.mul(a, c)).collect(),
        }
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zero(self.p, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    /// Reduced row-echelon form and the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let p = self.p;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(piv) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            m.swap_rows(r, piv);
            let inv = p.inv(m.get(r, c)).expect("pivot is nonzero");
            for j in 0..m.cols {
                let v = p.mul(m.get(r, j), inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                let f = m.get(i, c);
                if i == r || f == 0 {
                    continue;
                }
                for j in 0..m.cols {
                    let v = p.sub(m.get(i, j), p.mul(f, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", self.row_vector(i))?;
        }
        write!(f, "]")
    }
}

/// Inverse of a square matrix by Gauss-Jordan elimination on `[M | I]`.
pub fn mat_inverse(m: &Matrix) -> Result<Matrix> {
    if !m.is_square() {
        return Err(Error::Incompatible(format!(
            "cannot invert a {}x{} matrix",
            m.rows, m.cols
        )));
    }
    let d = m.rows;
    let mut aug = Matrix::zero(m.p, d, 2 * d);
    for i in 0..d {
        for j in 0..d {
            aug.set(i, j, m.get(i, j));
        }
        aug.set(i, d + i, 1);
    }
    let (red, pivots) = aug.rref();
    if pivots.len() < d || pivots[d - 1] >= d {
        return Err(Error::Singular);
    }
    let mut inv = Matrix::zero(m.p, d, d);
    for i in 0..d {
        for j in 0..d {
            inv.set(i, j, red.get(i, d + j));
        }
    }
    Ok(inv)
}

/// Basis of `{x : x * M = 0}`, returned in reduced row-echelon form.
pub fn left_kernel(m: &Matrix) -> Vec<RowVector> {
    // x M = 0  <=>  M^T x^T = 0
    let (red, pivots) = m.transpose().rref();
    let n = m.rows;
    let p = m.p;
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let basis: Vec<RowVector> = free
        .iter()
        .map(|&f| {
            let mut v = vec![0u32; n];
            v[f] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = p.neg(red.get(r, f));
            }
            RowVector::from_reduced(p, v)
        })
        .collect();
    if basis.is_empty() {
        return basis;
    }
    let (rb, piv) = Matrix::from_row_vectors(p, n, &basis).rref();
    (0..piv.len()).map(|i| rb.row_vector(i)).collect()
}
