//! The affine group `Aff(V) = GL(V) N` acting on the right of `V = GF(p)^d`.
//!
//! An [`AffineElement`] is the map `z -> z * linear + shift`. Products are read
//! left to right: `compose(g, h)` first applies `g`, then `h`.

use std::collections::{HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::field::{mat_inverse, Fp, Matrix, RowVector};

/// Default ceiling on the size of a generated subgroup.
pub const DEFAULT_CLOSURE_BOUND: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AffineElement {
    linear: Matrix,
    shift: RowVector,
}

impl AffineElement {
    /// Checks that `linear` is square, invertible and matches `shift`.
    pub fn new(linear: Matrix, shift: RowVector) -> Result<Self> {
        if !linear.is_square() || linear.rows() != shift.dim() {
            return Err(Error::Incompatible(format!(
                "{}x{} linear part with shift of length {}",
                linear.rows(),
                linear.cols(),
                shift.dim()
            )));
        }
        if linear.modulus() != shift.modulus() {
            return Err(Error::Incompatible("moduli differ".into()));
        }
        mat_inverse(&linear)?;
        Ok(AffineElement { linear, shift })
    }

    pub(crate) fn new_unchecked(linear: Matrix, shift: RowVector) -> Self {
        AffineElement { linear, shift }
    }

    pub fn identity(p: Fp, d: usize) -> Self {
        AffineElement {
            linear: Matrix::identity(p, d),
            shift: RowVector::zero(p, d),
        }
    }

    /// The translation `z -> z + x`.
    pub fn translation(x: RowVector) -> Self {
        AffineElement {
            linear: Matrix::identity(x.modulus(), x.dim()),
            shift: x,
        }
    }

    pub fn linear(&self) -> &Matrix {
        &self.linear
    }

    pub fn shift(&self) -> &RowVector {
        &self.shift
    }

    pub fn modulus(&self) -> Fp {
        self.shift.modulus()
    }

    pub fn dim(&self) -> usize {
        self.shift.dim()
    }

    pub fn is_identity(&self) -> bool {
        self.shift.is_zero() && self.linear.is_identity()
    }

    pub fn is_translation(&self) -> bool {
        self.linear.is_identity()
    }

    /// Image of the point `z`.
    pub fn apply(&self, z: &RowVector) -> RowVector {
        z.mul_matrix(&self.linear).add(&self.shift)
    }

    pub fn inverse(&self) -> AffineElement {
        let inv = mat_inverse(&self.linear).expect("linear part is invertible");
        let shift = self.shift.mul_matrix(&inv).neg();
        AffineElement { linear: inv, shift }
    }

    /// `h^-1 * self * h`.
    pub fn conjugate_by(&self, h: &AffineElement) -> AffineElement {
        compose_unchecked(&compose_unchecked(&h.inverse(), self), h)
    }

    fn compatible(&self, other: &AffineElement) -> Result<()> {
        if self.modulus() != other.modulus() || self.dim() != other.dim() {
            return Err(Error::Incompatible(format!(
                "elements over GF({})^{} and GF({})^{}",
                self.modulus(),
                self.dim(),
                other.modulus(),
                other.dim()
            )));
        }
        Ok(())
    }
}

fn compose_unchecked(g: &AffineElement, h: &AffineElement) -> AffineElement {
    AffineElement {
        linear: g.linear.mul(&h.linear),
        shift: g.shift.mul_matrix(&h.linear).add(&h.shift),
    }
}

/// The map `z -> (z g) h`.
pub fn compose(g: &AffineElement, h: &AffineElement) -> Result<AffineElement> {
    g.compatible(h)?;
    Ok(compose_unchecked(g, h))
}

/// Splits `g` into its `GL(V)` part and its translation part; `g` is the linear
/// map followed by translation by `0 g`.
pub fn decompose(g: &AffineElement) -> (Matrix, RowVector) {
    let b = g.apply(&RowVector::zero(g.modulus(), g.dim()));
    (g.linear.clone(), b)
}

/// `[g, h] = g^-1 g^h` with `g^h = h^-1 g h`.
pub fn commutator(g: &AffineElement, h: &AffineElement) -> Result<AffineElement> {
    g.compatible(h)?;
    Ok(compose_unchecked(&g.inverse(), &g.conjugate_by(h)))
}

/// A finite subgroup of `Aff(V)` stored as a sorted element list.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubgroupElements {
    p: Fp,
    d: usize,
    elements: Vec<AffineElement>,
}

impl SubgroupElements {
    /// Validates that `elements` is a subgroup: nonempty, contains the
    /// identity, closed under composition and inversion.
    pub fn new(p: Fp, d: usize, elements: Vec<AffineElement>) -> Result<Self> {
        for e in &elements {
            if e.modulus() != p || e.dim() != d {
                return Err(Error::Incompatible("element outside Aff(V)".into()));
            }
        }
        let t = Self::from_unchecked(p, d, elements);
        if !t.elements.iter().any(AffineElement::is_identity) {
            return Err(Error::NotSubgroup("identity missing".into()));
        }
        let set: HashSet<&AffineElement> = t.elements.iter().collect();
        for g in &t.elements {
            if !set.contains(&g.inverse()) {
                return Err(Error::NotSubgroup("not closed under inverses".into()));
            }
            for h in &t.elements {
                if !set.contains(&compose_unchecked(g, h)) {
                    return Err(Error::NotSubgroup("not closed under composition".into()));
                }
            }
        }
        Ok(t)
    }

    pub(crate) fn from_unchecked(p: Fp, d: usize, mut elements: Vec<AffineElement>) -> Self {
        elements.sort();
        elements.dedup();
        SubgroupElements { p, d, elements }
    }

    /// The translation subgroup `N`.
    pub fn translations(p: Fp, d: usize) -> Result<Self> {
        let n = p
            .checked_order(d)
            .filter(|&n| n <= DEFAULT_CLOSURE_BOUND as u64)
            .ok_or(Error::SizeBoundExceeded {
                bound: DEFAULT_CLOSURE_BOUND,
            })?;
        let elements = (0..n)
            .map(|i| AffineElement::translation(RowVector::from_index(p, d, i)))
            .collect();
        Ok(Self::from_unchecked(p, d, elements))
    }

    pub fn modulus(&self) -> Fp {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[AffineElement] {
        &self.elements
    }

    pub fn contains(&self, g: &AffineElement) -> bool {
        self.elements.binary_search(g).is_ok()
    }

    /// True when `g^-1 t g` lies in `self` for every `g` in `gens` and every
    /// `t` in `self`.
    pub fn is_normalized_by(&self, gens: &[AffineElement]) -> bool {
        gens.iter()
            .all(|g| self.elements.iter().all(|t| self.contains(&t.conjugate_by(g))))
    }
}

/// Each point of `V` is the image of `0` under exactly one element.
pub fn is_regular(t: &SubgroupElements) -> bool {
    if t.p.checked_order(t.d) != Some(t.order() as u64) {
        return false;
    }
    let zero = RowVector::zero(t.p, t.d);
    let mut seen = HashSet::with_capacity(t.order());
    t.elements.iter().all(|g| seen.insert(g.apply(&zero)))
}

pub fn is_abelian(t: &SubgroupElements) -> bool {
    let els = &t.elements;
    (0..els.len()).all(|i| {
        (i + 1..els.len()).all(|j| {
            compose_unchecked(&els[i], &els[j]) == compose_unchecked(&els[j], &els[i])
        })
    })
}

/// `N ∩ T`: the elements of `t` with trivial linear part.
pub fn intersect_translations(t: &SubgroupElements) -> SubgroupElements {
    let elements = t
        .elements
        .iter()
        .filter(|g| g.is_translation())
        .cloned()
        .collect();
    SubgroupElements::from_unchecked(t.p, t.d, elements)
}

/// `C_N(T)`: translations commuting with every element of `t`.
pub fn translations_centralizing(t: &SubgroupElements) -> Result<SubgroupElements> {
    let n = SubgroupElements::translations(t.p, t.d)?;
    let elements = n
        .elements
        .into_iter()
        .filter(|tau| {
            t.elements
                .iter()
                .all(|g| compose_unchecked(tau, g) == compose_unchecked(g, tau))
        })
        .collect();
    Ok(SubgroupElements::from_unchecked(t.p, t.d, elements))
}

/// `C_T(N)`: elements of `t` commuting with every translation. The basis
/// translations generate `N`, so they suffice.
pub fn centralizer_of_translations(t: &SubgroupElements) -> SubgroupElements {
    let gens: Vec<AffineElement> = (0..t.d)
        .map(|i| AffineElement::translation(RowVector::unit(t.p, t.d, i)))
        .collect();
    let elements = t
        .elements
        .iter()
        .filter(|g| {
            gens.iter()
                .all(|tau| compose_unchecked(tau, g) == compose_unchecked(g, tau))
        })
        .cloned()
        .collect();
    SubgroupElements::from_unchecked(t.p, t.d, elements)
}

/// Subgroup generated by `gens`, capped at [`DEFAULT_CLOSURE_BOUND`] elements.
pub fn generate(p: Fp, d: usize, gens: &[AffineElement]) -> Result<SubgroupElements> {
    generate_bounded(p, d, gens, DEFAULT_CLOSURE_BOUND)
}

pub fn generate_bounded(
    p: Fp,
    d: usize,
    gens: &[AffineElement],
    bound: usize,
) -> Result<SubgroupElements> {
    let id = AffineElement::identity(p, d);
    for g in gens {
        id.compatible(g)?;
    }
    // In a finite group, closing under right multiplication by the generators
    // already yields inverses.
    let mut seen: HashSet<AffineElement> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(g) = queue.pop_front() {
        for s in gens {
            let h = compose_unchecked(&g, s);
            if !seen.contains(&h) {
                if seen.len() >= bound {
                    return Err(Error::SizeBoundExceeded { bound });
                }
                seen.insert(h.clone());
                queue.push_back(h);
            }
        }
    }
    Ok(SubgroupElements::from_unchecked(p, d, seen.into_iter().collect()))
}

/// All of `Aff(GF(p)^d)`, enumerated directly when it has at most `bound`
/// elements.
pub fn full_affine_group(p: Fp, d: usize, bound: usize) -> Result<SubgroupElements> {
    let gl = crate::gl::general_linear_group(p, d, bound)?;
    let points = p.checked_order(d).expect("GL(V) fits, so V does");
    let total = gl.len() as u128 * points as u128;
    if total > bound as u128 {
        return Err(Error::SizeBoundExceeded { bound });
    }
    let mut elements = Vec::with_capacity(total as usize);
    for a in &gl {
        for i in 0..points {
            elements.push(AffineElement::new_unchecked(
                a.clone(),
                RowVector::from_index(p, d, i),
            ));
        }
    }
    Ok(SubgroupElements::from_unchecked(p, d, elements))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Fp {
        Fp::new(2).unwrap()
    }

    fn v2(a: i64, b: i64) -> RowVector {
        RowVector::from_entries(f2(), [a, b])
    }

    /// `tau(a)` for the ring with a^2 = b: linear part 1 + delta(a), shift a.
    fn tau_a() -> AffineElement {
        let m = Matrix::from_rows(f2(), &[[1, 1], [0, 1]]).unwrap();
        AffineElement::new(m, v2(1, 0)).unwrap()
    }

    #[test]
    fn translations_compose_additively() {
        let g = AffineElement::translation(v2(1, 0));
        let h = AffineElement::translation(v2(1, 1));
        assert_eq!(compose(&g, &h).unwrap(), AffineElement::translation(v2(0, 1)));
        assert_eq!(compose(&g, &AffineElement::identity(f2(), 2)).unwrap(), g);
    }

    #[test]
    fn square_of_cyclic_generator() {
        // a o a = a + a + a^2 = b
        let sq = compose(&tau_a(), &tau_a()).unwrap();
        assert_eq!(sq.shift(), &v2(0, 1));
        assert!(sq.is_translation());
    }

    #[test]
    fn incompatible_elements_rejected() {
        let g = AffineElement::identity(f2(), 2);
        let h = AffineElement::identity(f2(), 3);
        assert!(matches!(compose(&g, &h), Err(Error::Incompatible(_))));
        let k = AffineElement::identity(Fp::new(3).unwrap(), 2);
        assert!(matches!(compose(&g, &k), Err(Error::Incompatible(_))));
    }

    #[test]
    fn singular_linear_part_rejected() {
        let m = Matrix::from_rows(f2(), &[[1, 1], [1, 1]]).unwrap();
        assert_eq!(AffineElement::new(m, v2(0, 0)), Err(Error::Singular));
    }

    #[test]
    fn decompose_examples() {
        let t = AffineElement::translation(v2(1, 1));
        assert_eq!(decompose(&t), (Matrix::identity(f2(), 2), v2(1, 1)));
        let m = Matrix::from_rows(f2(), &[[0, 1], [1, 0]]).unwrap();
        let g = AffineElement::new(m.clone(), v2(0, 0)).unwrap();
        assert_eq!(decompose(&g), (m, v2(0, 0)));
        let (lin, b) = decompose(&tau_a());
        assert_eq!(lin, Matrix::from_rows(f2(), &[[1, 1], [0, 1]]).unwrap());
        assert_eq!(b, v2(1, 0));
    }

    #[test]
    fn commutator_examples() {
        let ta = AffineElement::translation(v2(1, 0));
        assert_eq!(
            commutator(&ta, &tau_a()).unwrap(),
            AffineElement::translation(v2(0, 1))
        );
        let tb = AffineElement::translation(v2(0, 1));
        assert!(commutator(&ta, &tb).unwrap().is_identity());
        assert!(commutator(&tau_a(), &tau_a()).unwrap().is_identity());
    }

    #[test]
    fn regularity_examples() {
        let n = SubgroupElements::translations(f2(), 2).unwrap();
        assert!(is_regular(&n));
        assert!(is_abelian(&n));
        let trivial = generate(f2(), 2, &[]).unwrap();
        assert_eq!(trivial.order(), 1);
        assert!(!is_regular(&trivial));
        let swap = AffineElement::new(
            Matrix::from_rows(f2(), &[[0, 1], [1, 0]]).unwrap(),
            v2(0, 0),
        )
        .unwrap();
        let fixed = generate(f2(), 2, &[swap]).unwrap();
        assert!(!is_regular(&fixed));
    }

    #[test]
    fn linear_subgroup_of_full_order_is_not_regular() {
        // unitriangular matrices over GF(2)^3: order 8 = 2^3, all fixing 0
        let p = f2();
        let gens: Vec<AffineElement> = [
            [[1, 1, 0], [0, 1, 0], [0, 0, 1]],
            [[1, 0, 0], [0, 1, 1], [0, 0, 1]],
            [[1, 0, 1], [0, 1, 0], [0, 0, 1]],
        ]
        .iter()
        .map(|m| {
            AffineElement::new(Matrix::from_rows(p, m).unwrap(), RowVector::zero(p, 3)).unwrap()
        })
        .collect();
        let u = generate(p, 3, &gens).unwrap();
        assert_eq!(u.order(), 8);
        assert!(!is_regular(&u));
    }

    #[test]
    fn full_affine_plane_over_f2_is_sym4() {
        let aff = full_affine_group(f2(), 2, 10_000).unwrap();
        assert_eq!(aff.order(), 24);
        assert!(!is_abelian(&aff));
        assert!(SubgroupElements::new(f2(), 2, aff.elements().to_vec()).is_ok());
    }

    #[test]
    fn cyclic_generated_group() {
        let c = generate(f2(), 2, &[tau_a()]).unwrap();
        assert_eq!(c.order(), 4);
        assert!(is_abelian(&c));
        assert!(is_regular(&c));
        let meet = intersect_translations(&c);
        assert_eq!(meet.order(), 2);
        assert!(meet.contains(&AffineElement::translation(v2(0, 1))));
        assert_eq!(translations_centralizing(&c).unwrap(), meet);
        assert_eq!(centralizer_of_translations(&c), meet);
    }

    #[test]
    fn translation_generators_give_n() {
        let p = Fp::new(3).unwrap();
        let gens: Vec<_> = (0..2)
            .map(|i| AffineElement::translation(RowVector::unit(p, 2, i)))
            .collect();
        let n = generate(p, 2, &gens).unwrap();
        assert_eq!(n, SubgroupElements::translations(p, 2).unwrap());
        assert_eq!(intersect_translations(&n), n);
    }

    #[test]
    fn closure_bound_enforced() {
        let p = Fp::new(3).unwrap();
        let gens: Vec<_> = (0..2)
            .map(|i| AffineElement::translation(RowVector::unit(p, 2, i)))
            .collect();
        assert_eq!(
            generate_bounded(p, 2, &gens, 5),
            Err(Error::SizeBoundExceeded { bound: 5 })
        );
    }

    #[test]
    fn subgroup_validation_catches_missing_closure() {
        let els = vec![AffineElement::identity(f2(), 2), tau_a()];
        assert!(matches!(
            SubgroupElements::new(f2(), 2, els),
            Err(Error::NotSubgroup(_))
        ));
        assert!(matches!(
            SubgroupElements::new(f2(), 2, vec![tau_a()]),
            Err(Error::NotSubgroup(_))
        ));
    }
}
