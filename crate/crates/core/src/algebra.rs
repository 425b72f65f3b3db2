//! Commutative associative algebras on `GF(p)^d` given by structure constants,
//! together with their circle group `(V, o)`, `x o y = x + y + xy`.
//!
//! Only the products `e_i e_j` with `i <= j` are stored; commutativity holds by
//! construction. For a nilpotent algebra the circle operation makes `V` an
//! abelian `p`-group.

use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{left_kernel, Fp, Matrix, RowVector};

/// Largest `p^d` for which [`Algebra::abelian_type`] will enumerate `V`.
pub const ELEMENT_ORDER_BOUND: u64 = 1 << 16;

/// Largest `p^d` for which [`Algebra::is_radical`] also solves for every
/// circle inverse directly.
pub const RADICAL_EXHAUSTION_BOUND: u64 = 1 << 10;

#[inline]
fn pair_index(d: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    // rows 0..i of the upper triangle hold d, d-1, ... entries
    i * (2 * d - i + 1) / 2 + (j - i)
}

/// Number of free products `e_i e_j`, `i <= j`.
pub fn pair_count(d: usize) -> usize {
    d * (d + 1) / 2
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Algebra {
    p: Fp,
    d: usize,
    /// `sc[pair_index(i, j) * d + k]` is the coefficient of `e_k` in `e_i e_j`.
    sc: Vec<u32>,
}

/// Builder that fills structure constants before validation.
#[derive(Debug, Clone)]
pub struct AlgebraBuilder {
    p: Fp,
    d: usize,
    sc: Vec<u32>,
}

impl AlgebraBuilder {
    /// Sets `e_i e_j = e_j e_i` (0-based indices) to `product`.
    pub fn product(mut self, i: usize, j: usize, product: &[i64]) -> Self {
        assert!(i < self.d && j < self.d && product.len() == self.d);
        let base = pair_index(self.d, i, j) * self.d;
        for (k, &c) in product.iter().enumerate() {
            self.sc[base + k] = self.p.reduce_signed(c);
        }
        self
    }

    /// Sets the single coefficient of `e_k` in `e_i e_j`.
    pub fn coefficient(mut self, i: usize, j: usize, k: usize, c: i64) -> Self {
        assert!(i < self.d && j < self.d && k < self.d);
        self.sc[pair_index(self.d, i, j) * self.d + k] = self.p.reduce_signed(c);
        self
    }

    pub fn build(self) -> Result<Algebra> {
        let a = self.build_unchecked();
        a.check_associative()?;
        Ok(a)
    }

    /// Skips the associativity check. Used for tables that are meant to be
    /// diagnosed rather than computed with.
    pub fn build_unchecked(self) -> Algebra {
        Algebra {
            p: self.p,
            d: self.d,
            sc: self.sc,
        }
    }
}

/// The isomorphism type of a finite abelian `p`-group, as cyclic orders
/// sorted in descending order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AbelianType {
    orders: Vec<u64>,
}

impl AbelianType {
    /// Validates that every order is a power `> 1` of `p`.
    pub fn new(p: Fp, mut orders: Vec<u64>) -> Result<Self> {
        for &o in &orders {
            if o < 2 || !is_power_of(o, p.p() as u64) {
                return Err(Error::InvalidParameters(format!(
                    "{o} is not a positive power of {p}"
                )));
            }
        }
        orders.sort_unstable_by(|a, b| b.cmp(a));
        Ok(AbelianType { orders })
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn group_order(&self) -> u128 {
        self.orders.iter().map(|&o| o as u128).product()
    }

    /// Largest cyclic order, i.e. the exponent of the group.
    pub fn exponent(&self) -> u64 {
        self.orders.first().copied().unwrap_or(1)
    }
}

impl fmt::Display for AbelianType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.orders.iter().map(u64::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

fn is_power_of(mut n: u64, p: u64) -> bool {
    while n.is_multiple_of(p) {
        n /= p;
    }
    n == 1
}

/// `C(a, i) mod p` via Lucas' theorem.
pub(crate) fn binomial_mod(p: Fp, mut a: u64, mut i: u64) -> u32 {
    let q = p.p() as u64;
    let mut acc = 1u32;
    while i > 0 || a > 0 {
        let (ad, id) = (a % q, i % q);
        if id > ad {
            return 0;
        }
        // small binomial with ad < p, computed exactly mod p
        let mut num = 1u32;
        let mut den = 1u32;
        for t in 0..id {
            num = p.mul(num, p.reduce(ad - t));
            den = p.mul(den, p.reduce(t + 1));
        }
        acc = p.mul(acc, p.mul(num, p.inv(den).expect("t + 1 < p")));
        a /= q;
        i /= q;
    }
    acc
}

impl Algebra {
    pub fn builder(p: Fp, d: usize) -> Result<AlgebraBuilder> {
        if d == 0 {
            return Err(Error::InvalidParameters("dimension must be positive".into()));
        }
        Ok(AlgebraBuilder {
            p,
            d,
            sc: vec![0; pair_count(d) * d],
        })
    }

    /// The algebra with every product zero; its circle group is `(V, +)`.
    pub fn zero(p: Fp, d: usize) -> Result<Self> {
        Ok(Self::builder(p, d)?.build_unchecked())
    }

    /// Builds from a packed table of `pair_count(d) * d` reduced entries, the
    /// pairs `(i, j)`, `i <= j`, in row order of the upper triangle.
    pub fn from_packed(p: Fp, d: usize, sc: Vec<u32>) -> Result<Self> {
        let a = Self::from_packed_unchecked(p, d, sc)?;
        a.check_associative()?;
        Ok(a)
    }

    pub(crate) fn from_packed_unchecked(p: Fp, d: usize, sc: Vec<u32>) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidParameters("dimension must be positive".into()));
        }
        if sc.len() != pair_count(d) * d || sc.iter().any(|&c| c >= p.p()) {
            return Err(Error::InvalidParameters("malformed structure table".into()));
        }
        Ok(Algebra { p, d, sc })
    }

    pub fn modulus(&self) -> Fp {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn packed(&self) -> &[u32] {
        &self.sc
    }

    /// Coefficient of `e_k` in `e_i e_j` (0-based).
    #[inline]
    pub fn coefficient(&self, i: usize, j: usize, k: usize) -> u32 {
        self.sc[pair_index(self.d, i, j) * self.d + k]
    }

    pub fn basis_product(&self, i: usize, j: usize) -> RowVector {
        let base = pair_index(self.d, i, j) * self.d;
        RowVector::from_reduced(self.p, self.sc[base..base + self.d].to_vec())
    }

    pub fn basis(&self) -> Vec<RowVector> {
        (0..self.d)
            .map(|i| RowVector::unit(self.p, self.d, i))
            .collect()
    }

    /// `p^d`, if it fits in a `u64`.
    pub fn order(&self) -> Option<u64> {
        self.p.checked_order(self.d)
    }

    pub fn is_zero_algebra(&self) -> bool {
        self.sc.iter().all(|&c| c == 0)
    }

    pub fn check_associative(&self) -> Result<()> {
        let d = self.d;
        for i in 0..d {
            for j in 0..d {
                let ij = self.basis_product(i, j);
                for k in 0..d {
                    let left = self.multiply(&ij, &RowVector::unit(self.p, d, k));
                    let jk = self.basis_product(j, k);
                    let right = self.multiply(&RowVector::unit(self.p, d, i), &jk);
                    if left != right {
                        return Err(Error::NotAssociative {
                            i: i + 1,
                            j: j + 1,
                            k: k + 1,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_associative(&self) -> bool {
        self.check_associative().is_ok()
    }

    /// `out = x y` on raw reduced slices.
    pub(crate) fn mul_into(&self, x: &[u32], y: &[u32], out: &mut [u32]) {
        let d = self.d;
        let q = self.p.p() as u64;
        let mut acc = [0u64; 16];
        let mut big;
        let acc: &mut [u64] = if d <= 16 {
            &mut acc[..d]
        } else {
            big = vec![0u64; d];
            &mut big
        };
        for (i, &xi) in x.iter().enumerate().take(d) {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate().take(d) {
                if yj == 0 {
                    continue;
                }
                let f = xi as u64 * yj as u64 % q;
                let base = pair_index(d, i, j) * d;
                for (a, &c) in acc.iter_mut().zip(&self.sc[base..base + d]) {
                    *a = (*a + f * c as u64) % q;
                }
            }
        }
        for (o, &a) in out.iter_mut().zip(acc.iter()) {
            *o = a as u32;
        }
    }

    /// The product `x y`.
    pub fn multiply(&self, x: &RowVector, y: &RowVector) -> RowVector {
        let mut out = vec![0; self.d];
        self.mul_into(x.entries(), y.entries(), &mut out);
        RowVector::from_reduced(self.p, out)
    }

    /// Matrix of right multiplication by `y`: `x delta(y) = x y`.
    pub fn delta_matrix(&self, y: &RowVector) -> Matrix {
        let rows: Vec<RowVector> = (0..self.d)
            .map(|i| self.multiply(&RowVector::unit(self.p, self.d, i), y))
            .collect();
        Matrix::from_row_vectors(self.p, self.d, &rows)
    }

    /// `x o y = x + y + x y`.
    pub fn circle(&self, x: &RowVector, y: &RowVector) -> RowVector {
        x.add(y).add(&self.multiply(x, y))
    }

    /// `x^n` for `n >= 1`.
    pub fn power(&self, x: &RowVector, n: u64) -> RowVector {
        assert!(n >= 1, "powers start at 1 in a non-unital algebra");
        let mut acc = x.clone();
        for _ in 1..n {
            if acc.is_zero() {
                break;
            }
            acc = self.multiply(&acc, x);
        }
        acc
    }

    /// The `y` with `x o y = 0`, as `-x + x^2 - x^3 + ...`.
    pub fn circle_inverse(&self, x: &RowVector) -> Result<RowVector> {
        let mut sum = RowVector::zero(self.p, self.d);
        let mut term = x.clone();
        let mut negative = true;
        for _ in 0..=self.d {
            if term.is_zero() {
                return Ok(sum);
            }
            sum = if negative { sum.sub(&term) } else { sum.add(&term) };
            negative = !negative;
            term = self.multiply(&term, x);
        }
        if term.is_zero() {
            Ok(sum)
        } else {
            Err(Error::NotNilpotent)
        }
    }

    /// `x` circled with itself `a` times (`0` for `a = 0`), by doubling.
    pub fn circle_power(&self, a: u64, x: &RowVector) -> RowVector {
        let mut acc = RowVector::zero(self.p, self.d);
        let mut base = x.clone();
        let mut a = a;
        while a > 0 {
            if a & 1 == 1 {
                acc = self.circle(&acc, &base);
            }
            a >>= 1;
            if a > 0 {
                base = self.circle(&base, &base);
            }
        }
        acc
    }

    /// `sum_{i=1}^{a} C(a, i) x^i`, which equals [`Algebra::circle_power`] in
    /// any commutative associative algebra.
    pub fn circle_power_binomial(&self, a: u64, x: &RowVector) -> RowVector {
        let mut sum = RowVector::zero(self.p, self.d);
        let mut xi = x.clone();
        let mut i = 1;
        while i <= a && !xi.is_zero() {
            let c = binomial_mod(self.p, a, i);
            if c != 0 {
                sum = sum.add(&xi.scale(c));
            }
            xi = self.multiply(&xi, x);
            i += 1;
        }
        sum
    }

    /// The least `n` with `V^n = 0`, or `None` if the power chain stabilises
    /// at a nonzero subspace.
    pub fn nilpotency_class(&self) -> Option<usize> {
        let d = self.d;
        let mut current: Vec<RowVector> = self.basis();
        for n in 1..=d + 1 {
            let mut products = Vec::with_capacity(current.len() * d);
            for u in &current {
                for j in 0..d {
                    let w = self.multiply(u, &RowVector::unit(self.p, d, j));
                    if !w.is_zero() {
                        products.push(w);
                    }
                }
            }
            if products.is_empty() {
                return Some(n + 1);
            }
            let (red, piv) = Matrix::from_row_vectors(self.p, d, &products).rref();
            if piv.len() >= current.len() {
                return None;
            }
            current = (0..piv.len()).map(|r| red.row_vector(r)).collect();
        }
        None
    }

    pub fn is_nilpotent(&self) -> bool {
        self.nilpotency_class().is_some()
    }

    /// Every element has a circle inverse. Nilpotency decides this for a
    /// finite algebra; small instances are also checked element by element by
    /// solving `y (1 + delta(x)) = -x`.
    pub fn is_radical(&self) -> bool {
        match self.order() {
            Some(n) if n <= RADICAL_EXHAUSTION_BOUND => {
                let direct = (0..n).all(|i| {
                    let x = RowVector::from_index(self.p, self.d, i);
                    self.has_circle_inverse(&x)
                });
                debug_assert_eq!(direct, self.is_nilpotent());
                direct
            }
            _ => self.is_nilpotent(),
        }
    }

    fn has_circle_inverse(&self, x: &RowVector) -> bool {
        let gamma = Matrix::identity(self.p, self.d).add(&self.delta_matrix(x));
        let r = gamma.rank();
        let mut rows: Vec<RowVector> = (0..self.d).map(|i| gamma.row_vector(i)).collect();
        rows.push(x.neg());
        Matrix::from_row_vectors(self.p, self.d, &rows).rank() == r
    }

    /// Basis of `U = {x : x y = 0 for all y}`, in reduced row-echelon form.
    pub fn annihilator(&self) -> Vec<RowVector> {
        let d = self.d;
        let mut stacked = Matrix::zero(self.p, d, d * d);
        for j in 0..d {
            let delta = self.delta_matrix(&RowVector::unit(self.p, d, j));
            for i in 0..d {
                for k in 0..d {
                    stacked.set(i, j * d + k, delta.get(i, k));
                }
            }
        }
        left_kernel(&stacked)
    }

    /// Circle order of `x` as an exponent `k` with order `p^k`. `x` must lie in
    /// a nilpotent algebra.
    pub fn circle_order_exponent(&self, x: &RowVector) -> u32 {
        let p = self.p.p() as u64;
        let mut y = x.clone();
        let mut k = 0;
        while !y.is_zero() {
            y = self.circle_power(p, &y);
            k += 1;
            assert!(k as usize <= 64, "element of unbounded circle order");
        }
        k
    }

    /// Isomorphism type of `(V, o)`, found by computing the circle order of
    /// every element and counting elements of order dividing `p^k`.
    pub fn abelian_type(&self) -> Result<AbelianType> {
        let n = self.exhaustible(ELEMENT_ORDER_BOUND, "element-order census")?;
        if !self.is_nilpotent() {
            return Err(Error::NotNilpotent);
        }
        let exps: Vec<u32> = (0..n)
            .into_par_iter()
            .map(|i| self.circle_order_exponent(&RowVector::from_index(self.p, self.d, i)))
            .collect();
        let top = exps.iter().copied().max().unwrap_or(0) as usize;
        let mut hist = vec![0u64; top + 1];
        for e in exps {
            hist[e as usize] += 1;
        }
        let q = self.p.p() as u64;
        // s[k] = log_p #{x : p^k o x = 0}; s[k] - s[k-1] = #{cyclic factors of order >= p^k}
        let mut s = Vec::with_capacity(top + 1);
        let mut count = 0u64;
        for h in &hist {
            count += h;
            s.push(ilog(count, q));
        }
        let at_least: Vec<u32> = (1..=top).map(|k| s[k] - s[k - 1]).collect();
        let mut orders = Vec::new();
        for k in 1..=top {
            let next = at_least.get(k).copied().unwrap_or(0);
            let exactly = at_least[k - 1] - next;
            orders.extend(std::iter::repeat_n(q.pow(k as u32), exactly as usize));
        }
        AbelianType::new(self.p, orders)
    }

    /// Exponent of `(V, o)`. In characteristic `p` the map `x -> x^p` is
    /// additive and fixes scalars, so `p^j o x = x^(p^j)` vanishes on all of
    /// `V` exactly when it vanishes on a basis.
    pub fn exponent(&self) -> Result<u64> {
        let class = self.nilpotency_class().ok_or(Error::NotNilpotent)?;
        let q = self.p.p() as u64;
        let mut pj = 1u64;
        let mut images = self.basis();
        while images.iter().any(|x| !x.is_zero()) {
            images = images
                .iter()
                .map(|x| self.circle_power(q, x))
                .collect();
            pj *= q;
            debug_assert!(pj < (class as u64) * q, "exponent bound violated");
        }
        Ok(pj)
    }

    /// Whether every product `x y z` vanishes.
    pub fn triple_products_vanish(&self) -> bool {
        let d = self.d;
        (0..d).all(|i| {
            (i..d).all(|j| {
                let ij = self.basis_product(i, j);
                ij.is_zero()
                    || (0..d).all(|k| {
                        self.multiply(&ij, &RowVector::unit(self.p, d, k)).is_zero()
                    })
            })
        })
    }

    /// Every point of `V`, by base-`p` index.
    pub fn points(&self) -> impl Iterator<Item = RowVector> + '_ {
        let n = self.order().expect("V too large to enumerate");
        (0..n).map(move |i| RowVector::from_index(self.p, self.d, i))
    }

    fn exhaustible(&self, bound: u64, what: &'static str) -> Result<u64> {
        match self.order() {
            Some(n) if n <= bound => Ok(n),
            other => Err(Error::BoundExceeded {
                what,
                needed: other.map_or(u128::MAX, u128::from),
                bound: bound as u128,
            }),
        }
    }
}

fn ilog(mut n: u64, q: u64) -> u32 {
    let mut k = 0;
    while n > 1 {
        debug_assert_eq!(n % q, 0, "subgroup order must be a power of p");
        n /= q;
        k += 1;
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> Fp {
        Fp::new(p).unwrap()
    }

    /// a^2 = b, ab = b^2 = 0 over GF(2); basis a = e1, b = e2.
    fn ring1() -> Algebra {
        Algebra::builder(f(2), 2)
            .unwrap()
            .product(0, 0, &[0, 1])
            .build()
            .unwrap()
    }

    fn v(p: u64, e: &[i64]) -> RowVector {
        RowVector::from_entries(f(p), e.iter().copied())
    }

    #[test]
    fn pair_index_is_dense_upper_triangle() {
        for d in 1..7 {
            let mut seen = vec![false; pair_count(d)];
            for i in 0..d {
                for j in i..d {
                    let k = pair_index(d, i, j);
                    assert!(!seen[k]);
                    seen[k] = true;
                    assert_eq!(pair_index(d, j, i), k);
                }
            }
            assert!(seen.into_iter().all(|s| s));
        }
    }

    #[test]
    fn multiply_examples() {
        let a = ring1();
        let (ea, eb) = (v(2, &[1, 0]), v(2, &[0, 1]));
        assert_eq!(a.multiply(&ea, &ea), eb);
        assert!(a.multiply(&ea, &RowVector::zero(f(2), 2)).is_zero());
        assert!(a.multiply(&ea, &eb).is_zero());
    }

    #[test]
    fn delta_matrix_examples() {
        let a = ring1();
        assert_eq!(
            a.delta_matrix(&v(2, &[1, 0])),
            Matrix::from_rows(f(2), &[[0, 1], [0, 0]]).unwrap()
        );
        assert!(a.delta_matrix(&RowVector::zero(f(2), 2)).is_zero());
        let z = Algebra::zero(f(3), 3).unwrap();
        assert!(z.delta_matrix(&v(3, &[1, 2, 1])).is_zero());
    }

    #[test]
    fn circle_examples() {
        let a = ring1();
        let (ea, eb, eab) = (v(2, &[1, 0]), v(2, &[0, 1]), v(2, &[1, 1]));
        assert_eq!(a.circle(&ea, &ea), eb);
        assert_eq!(a.circle(&ea, &RowVector::zero(f(2), 2)), ea);
        assert!(a.circle(&ea, &eab).is_zero());
    }

    #[test]
    fn circle_inverse_examples() {
        let a = ring1();
        assert_eq!(a.circle_inverse(&v(2, &[1, 0])).unwrap(), v(2, &[1, 1]));
        assert!(a.circle_inverse(&RowVector::zero(f(2), 2)).unwrap().is_zero());
        let idem = Algebra::builder(f(2), 1)
            .unwrap()
            .product(0, 0, &[1])
            .build()
            .unwrap();
        assert_eq!(idem.circle_inverse(&v(2, &[1])), Err(Error::NotNilpotent));
    }

    #[test]
    fn circle_power_examples() {
        let a = ring1();
        let ea = v(2, &[1, 0]);
        assert_eq!(a.circle_power(2, &ea), v(2, &[0, 1]));
        assert_eq!(a.circle_power(3, &ea), v(2, &[1, 1]));
        assert!(a.circle_power(4, &ea).is_zero());
        assert!(a.circle_power(0, &ea).is_zero());
        for k in 0..10 {
            assert_eq!(a.circle_power(k, &ea), a.circle_power_binomial(k, &ea));
        }
    }

    #[test]
    fn binomial_mod_matches_pascal() {
        for p in [2u64, 3, 5, 7] {
            let fp = f(p);
            let mut row = vec![1u64];
            for a in 0..60u64 {
                for (i, &c) in row.iter().enumerate() {
                    assert_eq!(binomial_mod(fp, a, i as u64) as u64, c, "C({a},{i}) mod {p}");
                }
                assert_eq!(binomial_mod(fp, a, a + 1), 0);
                let mut next = vec![1u64];
                next.extend(row.windows(2).map(|w| (w[0] + w[1]) % p));
                next.push(1);
                row = next;
            }
        }
    }

    #[test]
    fn nilpotency_examples() {
        assert_eq!(ring1().nilpotency_class(), Some(3));
        assert_eq!(Algebra::zero(f(5), 2).unwrap().nilpotency_class(), Some(2));
        let idem = Algebra::builder(f(2), 1)
            .unwrap()
            .product(0, 0, &[1])
            .build()
            .unwrap();
        assert_eq!(idem.nilpotency_class(), None);
        assert!(!idem.is_radical());
        assert!(ring1().is_radical());
        assert!(Algebra::zero(f(3), 2).unwrap().is_radical());
    }

    #[test]
    fn annihilator_examples() {
        assert_eq!(ring1().annihilator(), vec![v(2, &[0, 1])]);
        assert_eq!(Algebra::zero(f(3), 3).unwrap().annihilator().len(), 3);
    }

    #[test]
    fn abelian_type_and_exponent_of_small_rings() {
        let t = ring1().abelian_type().unwrap();
        assert_eq!(t.orders(), &[4]);
        assert_eq!(ring1().exponent().unwrap(), 4);
        let z = Algebra::zero(f(3), 2).unwrap();
        assert_eq!(z.abelian_type().unwrap().orders(), &[3, 3]);
        assert_eq!(z.exponent().unwrap(), 3);
    }

    #[test]
    fn zero_dimension_rejected() {
        assert!(matches!(
            Algebra::zero(f(2), 0),
            Err(Error::InvalidParameters(_))
        ));
    }

    #[test]
    fn non_associative_table_rejected() {
        // e1 e1 = e2, e1 e2 = e1: (e1 e1) e2 = e1 but e1 (e1 e2) = e2
        let r = Algebra::builder(f(2), 2)
            .unwrap()
            .product(0, 0, &[0, 1])
            .product(0, 1, &[1, 0])
            .build();
        assert!(matches!(r, Err(Error::NotAssociative { .. })));
    }

    #[test]
    fn abelian_type_display_and_validation() {
        let t = AbelianType::new(f(3), vec![3, 9]).unwrap();
        assert_eq!(t.to_string(), "9,3");
        assert_eq!(t.exponent(), 9);
        assert!(AbelianType::new(f(3), vec![6]).is_err());
        assert!(AbelianType::new(f(3), vec![1]).is_err());
    }
}
