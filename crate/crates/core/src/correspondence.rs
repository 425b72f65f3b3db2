//! The dictionary between commutative radical algebras on `V` and abelian
//! regular subgroups of `Aff(V)`.
//!
//! An algebra gives `tau(x): z -> z (1 + delta(x)) + x = z o x`, and the
//! set `T = {tau(x)}` is an abelian regular subgroup with `tau(x) tau(y) =
//! tau(x o y)`. Conversely, the element of `T` sending `0` to `x` has linear
//! part `1 + delta(x)`, and `x y = x delta(y)` recovers the product.
//! Conjugating `T` by `phi` in `GL(V)` corresponds to transporting the
//! product along `phi`.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::affine::{is_abelian, is_regular, AffineElement, SubgroupElements};
use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::field::{mat_inverse, Fp, Matrix, RowVector};
use crate::gl::{gl_order, EchelonBasis};

/// `tau(x)` is cached for every `x` when `p^d` is at most this.
pub const CACHE_BOUND: u64 = 1 << 12;

/// Exhaustive fact checking is used up to this many points.
pub const EXHAUSTIVE_FACTS_BOUND: u64 = 1 << 8;

/// Random pairs drawn when `V` is too large to exhaust.
pub const SAMPLED_PAIRS: usize = 10_000;

const SAMPLE_SEED: u64 = 0x7261_6461_6666;

/// Default ceiling on `|GL(d, p)|` for [`find_isomorphism`].
pub const DEFAULT_GL_BOUND: u128 = 10_000_000;

/// The abelian regular subgroup `{tau(x) : x in V}` of an algebra.
#[derive(Debug, Clone)]
pub struct RegularSubgroup {
    algebra: Algebra,
    /// `tau(x)` at position `x.index()`, when `p^d <= CACHE_BOUND`.
    cache: Option<Vec<AffineElement>>,
}

fn tau_of(a: &Algebra, x: &RowVector) -> AffineElement {
    let gamma = Matrix::identity(a.modulus(), a.dim()).add(&a.delta_matrix(x));
    AffineElement::new_unchecked(gamma, x.clone())
}

impl RegularSubgroup {
    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn modulus(&self) -> Fp {
        self.algebra.modulus()
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    /// `tau(x) = gamma(x) tau_x` with `gamma(x) = 1 + delta(x)`.
    pub fn tau(&self, x: &RowVector) -> AffineElement {
        match &self.cache {
            Some(c) => c[x.index() as usize].clone(),
            None => tau_of(&self.algebra, x),
        }
    }

    /// `gamma(x)`, the linear part of `tau(x)`.
    pub fn gamma(&self, x: &RowVector) -> Matrix {
        self.tau(x).linear().clone()
    }

    /// All elements, indexed by their image of `0`.
    pub fn elements(&self) -> Result<Vec<AffineElement>> {
        match &self.cache {
            Some(c) => Ok(c.clone()),
            None => Err(Error::BoundExceeded {
                what: "subgroup listing",
                needed: self.algebra.order().map_or(u128::MAX, u128::from),
                bound: CACHE_BOUND as u128,
            }),
        }
    }

    pub fn to_subgroup(&self) -> Result<SubgroupElements> {
        Ok(SubgroupElements::from_unchecked(
            self.modulus(),
            self.dim(),
            self.elements()?,
        ))
    }

    /// Checks the subgroup axioms directly: `tau(x) tau(y) = tau(x o y)` for
    /// all pairs (closure, and that `x -> tau(x)` is a homomorphism), the
    /// elements commute, and the `0`-images are distinct.
    pub fn verify(&self) -> Result<()> {
        let els = self.elements()?;
        let a = &self.algebra;
        let pts: Vec<RowVector> = a.points().collect();
        for (x, tx) in pts.iter().zip(&els) {
            for (y, ty) in pts.iter().zip(&els) {
                let prod = crate::affine::compose(tx, ty)?;
                if prod != self.tau(&a.circle(x, y)) {
                    return Err(Error::NotSubgroup(format!("tau({x}) tau({y})")));
                }
            }
        }
        let t = self.to_subgroup()?;
        if !is_abelian(&t) {
            return Err(Error::NotAbelian);
        }
        if !is_regular(&t) {
            return Err(Error::NotRegular("0-images collide".into()));
        }
        Ok(())
    }
}

/// Builds `T = {tau(x)}`. Fails with `NotRadical` unless every `1 + delta(x)`
/// is invertible, which for a finite algebra means nilpotent.
pub fn ring_to_subgroup(a: &Algebra) -> Result<RegularSubgroup> {
    if !a.is_nilpotent() {
        return Err(Error::NotRadical);
    }
    let cache = match a.order() {
        Some(n) if n <= CACHE_BOUND => {
            let mut els = Vec::with_capacity(n as usize);
            for x in a.points() {
                let t = tau_of(a, &x);
                if mat_inverse(t.linear()).is_err() {
                    return Err(Error::NotRadical);
                }
                els.push(t);
            }
            Some(els)
        }
        _ => None,
    };
    Ok(RegularSubgroup {
        algebra: a.clone(),
        cache,
    })
}

/// Recovers the algebra from an abelian regular subgroup: `delta(e_j)` is the
/// linear part of the element sending `0` to `e_j`, minus the identity, and
/// `e_i e_j = e_i delta(e_j)`.
pub fn subgroup_to_ring(t: &SubgroupElements) -> Result<Algebra> {
    if t.dim() == 0 {
        return Err(Error::InvalidParameters("dimension must be positive".into()));
    }
    if !is_regular(t) {
        let expected = t.modulus().checked_order(t.dim());
        let why = if expected != Some(t.order() as u64) {
            format!("order {} but |V| = {:?}", t.order(), expected)
        } else {
            "two elements share a 0-image".into()
        };
        return Err(Error::NotRegular(why));
    }
    if !is_abelian(t) {
        return Err(Error::NotAbelian);
    }
    let (p, d) = (t.modulus(), t.dim());
    let zero = RowVector::zero(p, d);
    let id = Matrix::identity(p, d);
    let mut deltas: Vec<Option<Matrix>> = vec![None; d];
    for g in t.elements() {
        if let Some(j) = unit_position(&g.apply(&zero)) {
            deltas[j] = Some(g.linear().sub(&id));
        }
    }
    let deltas: Vec<Matrix> = deltas
        .into_iter()
        .map(|m| m.expect("a regular subgroup reaches every basis vector"))
        .collect();
    let mut b = Algebra::builder(p, d)?;
    for (j, delta) in deltas.iter().enumerate() {
        for (i, other) in deltas.iter().enumerate() {
            if i <= j {
                b = b.product(i, j, &delta.row(i).iter().map(|&c| c as i64).collect::<Vec<_>>());
            } else if delta.row(i) != other.row(j) {
                return Err(Error::NotCommutative { i: j + 1, j: i + 1 });
            }
        }
    }
    let a = b.build()?;
    if !a.is_nilpotent() {
        return Err(Error::NotNilpotent);
    }
    Ok(a)
}

/// Position of the single `1` if `x` is a standard basis vector.
fn unit_position(x: &RowVector) -> Option<usize> {
    let e = x.entries();
    let pos = e.iter().position(|&c| c != 0)?;
    (e[pos] == 1 && e[pos + 1..].iter().all(|&c| c == 0)).then_some(pos)
}

/// Validates an arbitrary element list as a subgroup and then recovers its
/// algebra, reporting the first hypothesis that fails.
pub fn elements_to_ring(p: Fp, d: usize, elements: Vec<AffineElement>) -> Result<Algebra> {
    let t = SubgroupElements::new(p, d, elements)?;
    subgroup_to_ring(&t)
}

/// Outcome of checking one identity over pairs of points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactCheck {
    pub name: &'static str,
    pub statement: &'static str,
    pub pairs_checked: u64,
    pub exhaustive: bool,
    pub counterexample: Option<(RowVector, RowVector)>,
}

impl FactCheck {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactsReport {
    pub checks: Vec<FactCheck>,
}

impl FactsReport {
    pub fn passed(&self) -> usize {
        self.checks.iter().filter(|c| c.passed()).count()
    }

    pub fn all_passed(&self) -> bool {
        self.passed() == self.checks.len()
    }

    pub fn get(&self, name: &str) -> Option<&FactCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for FactsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let mode = if c.exhaustive { "exhaustive" } else { "sampled" };
            match &c.counterexample {
                None => writeln!(
                    f,
                    "fact {}: ok ({} pairs, {mode}) {}",
                    c.name, c.pairs_checked, c.statement
                )?,
                Some((x, y)) => writeln!(
                    f,
                    "fact {}: FAIL at x={x} y={y} {}",
                    c.name, c.statement
                )?,
            }
        }
        Ok(())
    }
}

/// Which pairs of points to test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coverage {
    /// Every pair when `p^d <= EXHAUSTIVE_FACTS_BOUND`, otherwise basis pairs
    /// plus `SAMPLED_PAIRS` seeded random pairs.
    Auto,
    /// Every pair regardless of size.
    Exhaustive,
}

fn pairs(a: &Algebra, coverage: Coverage) -> (Vec<(RowVector, RowVector)>, bool) {
    let (p, d) = (a.modulus(), a.dim());
    let small = matches!(a.order(), Some(n) if n <= EXHAUSTIVE_FACTS_BOUND);
    if small || coverage == Coverage::Exhaustive {
        let pts: Vec<RowVector> = a.points().collect();
        let mut out = Vec::with_capacity(pts.len() * pts.len());
        for x in &pts {
            for y in &pts {
                out.push((x.clone(), y.clone()));
            }
        }
        return (out, true);
    }
    let mut out = Vec::with_capacity(d * d + SAMPLED_PAIRS);
    for i in 0..d {
        for j in 0..d {
            out.push((RowVector::unit(p, d, i), RowVector::unit(p, d, j)));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
    let draw = |rng: &mut ChaCha8Rng| {
        RowVector::from_entries(p, (0..d).map(|_| rng.gen_range(0..p.p()) as i64))
    };
    for _ in 0..SAMPLED_PAIRS {
        let x = draw(&mut rng);
        let y = draw(&mut rng);
        out.push((x, y));
    }
    (out, false)
}

fn check_pairs<F>(
    name: &'static str,
    statement: &'static str,
    pairs: &[(RowVector, RowVector)],
    exhaustive: bool,
    holds: F,
) -> FactCheck
where
    F: Fn(&RowVector, &RowVector) -> bool,
{
    let counterexample = pairs
        .iter()
        .find(|(x, y)| !holds(x, y))
        .cloned();
    FactCheck {
        name,
        statement,
        pairs_checked: pairs.len() as u64,
        exhaustive,
        counterexample,
    }
}

/// The four identities behind the correspondence: `delta` is symmetric in the
/// sense `x delta(y) = y delta(x)`, `delta` is linear, `delta(x delta(y)) =
/// delta(x) delta(y)`, and `tau(x) tau(y) = tau(x + y + x delta(y))`.
pub fn verify_facts(a: &Algebra, coverage: Coverage) -> FactsReport {
    let (pairs, exhaustive) = pairs(a, coverage);
    let p = a.modulus();
    let mut checks = Vec::with_capacity(4);
    checks.push(check_pairs(
        "symmetric",
        "x delta(y) = y delta(x)",
        &pairs,
        exhaustive,
        |x, y| x.mul_matrix(&a.delta_matrix(y)) == y.mul_matrix(&a.delta_matrix(x)),
    ));
    checks.push(check_pairs(
        "linear",
        "delta(x + y) = delta(x) + delta(y), delta(c x) = c delta(x)",
        &pairs,
        exhaustive,
        |x, y| {
            let dx = a.delta_matrix(x);
            a.delta_matrix(&x.add(y)) == dx.add(&a.delta_matrix(y))
                && (0..p.p()).all(|c| a.delta_matrix(&x.scale(c)) == dx.scale(c))
        },
    ));
    checks.push(check_pairs(
        "delta-product",
        "delta(x delta(y)) = delta(x) delta(y)",
        &pairs,
        exhaustive,
        |x, y| {
            let xdy = x.mul_matrix(&a.delta_matrix(y));
            a.delta_matrix(&xdy) == a.delta_matrix(x).mul(&a.delta_matrix(y))
        },
    ));
    checks.push(check_pairs(
        "tau-product",
        "tau(x) tau(y) = tau(x + y + x delta(y))",
        &pairs,
        exhaustive,
        |x, y| {
            let lhs = crate::affine::compose(&tau_of(a, x), &tau_of(a, y)).expect("same space");
            let s = x.add(y).add(&x.mul_matrix(&a.delta_matrix(y)));
            lhs == tau_of(a, &s)
        },
    ));
    FactsReport { checks }
}

/// The isomorphism `(V, o) -> T`: `tau(x) tau(y) = tau(x o y)` with `tau`
/// injective, and the action `z tau(x) = z o x`.
pub fn verify_group_facts(a: &Algebra, coverage: Coverage) -> FactsReport {
    let (pairs, exhaustive) = pairs(a, coverage);
    let mut checks = Vec::with_capacity(2);
    checks.push(check_pairs(
        "circle-hom",
        "tau(x) tau(y) = tau(x o y), tau injective",
        &pairs,
        exhaustive,
        |x, y| {
            let lhs = crate::affine::compose(&tau_of(a, x), &tau_of(a, y)).expect("same space");
            lhs == tau_of(a, &a.circle(x, y)) && (x == y || tau_of(a, x) != tau_of(a, y))
        },
    ));
    checks.push(check_pairs(
        "action",
        "z tau(x) = z o x",
        &pairs,
        exhaustive,
        |z, x| tau_of(a, x).apply(z) == a.circle(z, x),
    ));
    FactsReport { checks }
}

/// The product transported along `phi`: `x * y = ((x phi^-1)(y phi^-1)) phi`.
pub fn transport_algebra(a: &Algebra, phi: &Matrix) -> Result<Algebra> {
    let inv = mat_inverse(phi)?;
    let (p, d) = (a.modulus(), a.dim());
    let mut b = Algebra::builder(p, d)?;
    let pre: Vec<RowVector> = (0..d).map(|i| inv.row_vector(i)).collect();
    for i in 0..d {
        for j in i..d {
            let prod = a.multiply(&pre[i], &pre[j]).mul_matrix(phi);
            for k in 0..d {
                b = b.coefficient(i, j, k, prod.entries()[k] as i64);
            }
        }
    }
    Ok(b.build_unchecked())
}

/// `phi^-1 g phi` for every element of `t`.
pub fn conjugate_elements(t: &SubgroupElements, phi: &Matrix) -> Result<SubgroupElements> {
    let h = AffineElement::new(phi.clone(), RowVector::zero(t.modulus(), t.dim()))?;
    let els = t.elements().iter().map(|g| g.conjugate_by(&h)).collect();
    Ok(SubgroupElements::from_unchecked(t.modulus(), t.dim(), els))
}

/// `{phi^-1 tau(x) phi}`, which is the subgroup of the transported algebra;
/// element by element `phi^-1 tau_1(x) phi = tau_2(x phi)`.
pub fn conjugate_subgroup(t: &RegularSubgroup, phi: &Matrix) -> Result<RegularSubgroup> {
    let moved = transport_algebra(t.algebra(), phi)?;
    let t2 = ring_to_subgroup(&moved)?;
    if let Some(cache) = &t.cache {
        let h = AffineElement::new_unchecked(phi.clone(), RowVector::zero(t.modulus(), t.dim()));
        for (x, g) in t.algebra.points().zip(cache) {
            let conj = g.conjugate_by(&h);
            assert_eq!(
                conj,
                t2.tau(&x.mul_matrix(phi)),
                "conjugation disagrees with the transported algebra"
            );
        }
    }
    Ok(t2)
}

/// Whether `(x y) phi = (x phi) * (y phi)` on basis pairs.
pub fn is_isomorphism(a1: &Algebra, a2: &Algebra, phi: &Matrix) -> Result<bool> {
    if a1.modulus() != a2.modulus() || a1.dim() != a2.dim() {
        return Ok(false);
    }
    mat_inverse(phi)?;
    let d = a1.dim();
    let img: Vec<RowVector> = (0..d).map(|i| phi.row_vector(i)).collect();
    Ok((0..d).all(|i| {
        (i..d).all(|j| a1.basis_product(i, j).mul_matrix(phi) == a2.multiply(&img[i], &img[j]))
    }))
}

/// True iff `phi` is an isomorphism `a1 -> a2`; in that case also checks that
/// conjugating the subgroup of `a1` by `phi` gives the subgroup of `a2`.
pub fn iso_to_conjugacy(a1: &Algebra, a2: &Algebra, phi: &Matrix) -> Result<bool> {
    if !is_isomorphism(a1, a2, phi)? {
        return Ok(false);
    }
    let t1 = ring_to_subgroup(a1)?;
    let t2 = ring_to_subgroup(a2)?;
    let moved = conjugate_subgroup(&t1, phi)?;
    assert_eq!(moved.algebra(), t2.algebra());
    if let (Ok(s1), Ok(s2)) = (t1.to_subgroup(), t2.to_subgroup()) {
        assert_eq!(conjugate_elements(&s1, phi)?, s2);
    }
    Ok(true)
}

/// Searches `GL(d, p)` for an algebra isomorphism `a1 -> a2`, returning the
/// first witness in enumeration order (identity first).
pub fn find_isomorphism(a1: &Algebra, a2: &Algebra) -> Result<Option<Matrix>> {
    find_isomorphism_bounded(a1, a2, DEFAULT_GL_BOUND)
}

pub fn find_isomorphism_bounded(
    a1: &Algebra,
    a2: &Algebra,
    bound: u128,
) -> Result<Option<Matrix>> {
    if a1.modulus() != a2.modulus() || a1.dim() != a2.dim() {
        return Ok(None);
    }
    let (p, d) = (a1.modulus(), a1.dim());
    let order = gl_order(p, d).unwrap_or(u128::MAX);
    if order > bound {
        return Err(Error::BoundExceeded {
            what: "GL(d, p) isomorphism search",
            needed: order,
            bound,
        });
    }
    if a1.nilpotency_class() != a2.nilpotency_class()
        || a1.annihilator().len() != a2.annihilator().len()
        || a1.is_zero_algebra() != a2.is_zero_algebra()
    {
        return Ok(None);
    }
    // pairs (i, j), i <= j, whose product in a1 only involves e_0..=e_r, grouped
    // by the first r at which they can be checked
    let mut ready: Vec<Vec<(usize, usize)>> = vec![Vec::new(); d];
    for i in 0..d {
        for j in i..d {
            let prod = a1.basis_product(i, j);
            let top = prod.entries().iter().rposition(|&c| c != 0).unwrap_or(0);
            ready[top.max(j)].push((i, j));
        }
    }
    let mut search = IsoSearch {
        a1,
        a2,
        ready,
        rows: Vec::with_capacity(d),
        basis: EchelonBasis::new(p),
        points: p.checked_order(d).expect("GL bound implies V fits"),
    };
    Ok(search.run().then(|| Matrix::from_row_vectors(p, d, &search.rows)))
}

struct IsoSearch<'a> {
    a1: &'a Algebra,
    a2: &'a Algebra,
    ready: Vec<Vec<(usize, usize)>>,
    rows: Vec<RowVector>,
    basis: EchelonBasis,
    points: u64,
}

impl IsoSearch<'_> {
    fn image(&self, v: &RowVector) -> RowVector {
        let p = self.a1.modulus();
        let mut acc = RowVector::zero(p, self.a1.dim());
        for (c, row) in v.entries().iter().zip(&self.rows) {
            if *c != 0 {
                acc = acc.add(&row.scale(*c));
            }
        }
        acc
    }

    fn consistent(&self, r: usize) -> bool {
        self.ready[r].iter().all(|&(i, j)| {
            let lhs = self.image(&self.a1.basis_product(i, j));
            lhs == self.a2.multiply(&self.rows[i], &self.rows[j])
        })
    }

    fn run(&mut self) -> bool {
        let d = self.a1.dim();
        let r = self.rows.len();
        if r == d {
            return true;
        }
        let p = self.a1.modulus();
        for idx in 1..self.points {
            let row = RowVector::from_index(p, d, idx);
            if !self.basis.try_push(row.entries()) {
                continue;
            }
            self.rows.push(row);
            if self.consistent(r) && self.run() {
                return true;
            }
            self.rows.pop();
            self.basis.pop();
        }
        false
    }
}

/// Whether `N` normalizes `T`, tested on the basis translations, which
/// generate `N`.
pub fn translations_normalize(t: &SubgroupElements) -> bool {
    let gens: Vec<AffineElement> = (0..t.dim())
        .map(|i| AffineElement::translation(RowVector::unit(t.modulus(), t.dim(), i)))
        .collect();
    t.is_normalized_by(&gens)
}
