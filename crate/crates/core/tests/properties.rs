use std::sync::OnceLock;

use proptest::prelude::*;

use radaff::affine::{
    centralizer_of_translations, commutator, compose, decompose, intersect_translations,
    translations_centralizing, AffineElement,
};
use radaff::algebra::Algebra;
use radaff::census::{enumerate_algebras, Bounds, Fingerprint};
use radaff::correspondence::{
    find_isomorphism, is_isomorphism, iso_to_conjugacy, ring_to_subgroup, subgroup_to_ring,
    transport_algebra, translations_normalize,
};
use radaff::field::{field_inverse, left_kernel, mat_inverse, Fp, Matrix, RowVector, Scalar};
use radaff::format::{emit_algebra, parse_algebra};
use radaff::gallery;
use radaff::series::{
    torsion_check, ts_circle, ts_circle_inverse, ts_multiply, TruncSeries,
};

const PRIMES: [u64; 4] = [2, 3, 5, 7];

fn fp(p: u64) -> Fp {
    Fp::new(p).unwrap()
}

/// Census algebras for a few small shapes plus the gallery.
fn fixtures() -> &'static [Algebra] {
    static F: OnceLock<Vec<Algebra>> = OnceLock::new();
    F.get_or_init(|| {
        let mut v: Vec<Algebra> = gallery::catalog().into_iter().map(|(_, a)| a).collect();
        for (p, d) in [(2, 2), (3, 2), (2, 3), (5, 2)] {
            v.extend(enumerate_algebras(fp(p), d, &Bounds::default()).unwrap());
        }
        v
    })
}

fn small_fixtures() -> Vec<Algebra> {
    fixtures()
        .iter()
        .filter(|a| a.order().is_some_and(|n| n <= 1 << 8))
        .cloned()
        .collect()
}

fn vector(p: Fp, d: usize) -> impl Strategy<Value = RowVector> {
    prop::collection::vec(0..p.p() as i64, d).prop_map(move |e| RowVector::from_entries(p, e))
}

fn algebra_with(n: usize) -> impl Strategy<Value = (Algebra, Vec<RowVector>)> {
    prop::sample::select(fixtures().to_vec()).prop_flat_map(move |a| {
        let v = prop::collection::vec(vector(a.modulus(), a.dim()), n);
        (Just(a), v)
    })
}

fn square(p: Fp, d: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(prop::collection::vec(0..p.p() as i64, d), d)
        .prop_map(move |rows| Matrix::from_rows(p, &rows).unwrap())
}

fn invertible(p: Fp, d: usize) -> impl Strategy<Value = Matrix> {
    square(p, d).prop_filter("singular", |m| m.rank() == m.rows())
}

fn field_and_dim() -> impl Strategy<Value = (Fp, usize)> {
    (prop::sample::select(PRIMES.to_vec()), 1usize..5).prop_map(|(p, d)| (fp(p), d))
}

/// Rank by counting pivots in a plain Gaussian elimination over u64.
fn rank_oracle(m: &Matrix) -> usize {
    let p = m.modulus().p() as u64;
    let mut rows: Vec<Vec<u64>> = (0..m.rows())
        .map(|i| m.row(i).iter().map(|&c| c as u64).collect())
        .collect();
    let mut rank = 0;
    for col in 0..m.cols() {
        let Some(r) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, r);
        let inv = (1..p).find(|&c| c * rows[rank][col] % p == 1).unwrap();
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[col] != 0 {
                let f = row[col] * inv % p;
                for (c, &pc) in row.iter_mut().zip(&pivot) {
                    *c = (*c + (p - f) * pc) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scalar_inverse_is_involutive(p in prop::sample::select(PRIMES.to_vec()), v in 1u64..1000) {
        let p = fp(p);
        prop_assume!(v % p.p() as u64 != 0);
        let a = Scalar::new(p, v);
        prop_assert_eq!(field_inverse(field_inverse(a).unwrap()).unwrap(), a);
    }

    #[test]
    fn matrix_inverse_laws(m in field_and_dim().prop_flat_map(|(p, d)| invertible(p, d))) {
        let inv = mat_inverse(&m).unwrap();
        prop_assert!(m.mul(&inv).is_identity());
        prop_assert_eq!(mat_inverse(&inv).unwrap(), m);
    }

    #[test]
    fn rank_nullity(m in field_and_dim().prop_flat_map(|(p, d)| square(p, d))) {
        let r = rank_oracle(&m);
        prop_assert_eq!(m.rank(), r);
        let k = left_kernel(&m);
        prop_assert_eq!(k.len() + r, m.rows());
        for v in &k {
            prop_assert!(v.mul_matrix(&m).is_zero());
        }
    }

    #[test]
    fn affine_inverse_and_decompose(
        (a, b) in field_and_dim().prop_flat_map(|(p, d)| (invertible(p, d), vector(p, d)))
    ) {
        let g = AffineElement::new(a.clone(), b.clone()).unwrap();
        prop_assert!(compose(&g, &g.inverse()).unwrap().is_identity());
        let (lin, shift) = decompose(&g);
        let rebuilt = compose(
            &AffineElement::new(lin, RowVector::zero(a.modulus(), a.rows())).unwrap(),
            &AffineElement::translation(shift),
        ).unwrap();
        prop_assert_eq!(rebuilt, g);
    }

    #[test]
    fn tau_is_a_homomorphism((a, v) in algebra_with(2)) {
        let t = ring_to_subgroup(&a).unwrap();
        let (x, y) = (&v[0], &v[1]);
        prop_assert_eq!(compose(&t.tau(x), &t.tau(y)).unwrap(), t.tau(&a.circle(x, y)));
        // z tau(x) = z o x
        prop_assert_eq!(t.tau(x).apply(y), a.circle(y, x));
    }

    #[test]
    fn commutator_is_translation_by_product((a, v) in algebra_with(2)) {
        let t = ring_to_subgroup(&a).unwrap();
        let c = commutator(&AffineElement::translation(v[0].clone()), &t.tau(&v[1])).unwrap();
        prop_assert!(c.is_translation());
        prop_assert_eq!(c.shift(), &a.multiply(&v[0], &v[1]));
    }

    #[test]
    fn circle_group_laws((a, v) in algebra_with(3)) {
        let (x, y, z) = (&v[0], &v[1], &v[2]);
        prop_assert_eq!(a.circle(x, y), a.circle(y, x));
        prop_assert_eq!(a.circle(&a.circle(x, y), z), a.circle(x, &a.circle(y, z)));
        let inv = a.circle_inverse(x).unwrap();
        prop_assert!(a.circle(x, &inv).is_zero());
        prop_assert_eq!(a.multiply(&a.multiply(x, y), z), a.multiply(x, &a.multiply(y, z)));
    }

    #[test]
    fn circle_powers_agree((a, v) in algebra_with(1), k in 0u64..50) {
        let p = a.modulus().p() as u64;
        let k = k % (p * p + 1);
        let x = &v[0];
        prop_assert_eq!(a.circle_power(k, x), a.circle_power_binomial(k, x));
        for j in 1..=3u32 {
            prop_assert_eq!(a.circle_power(p.pow(j), x), a.power(x, p.pow(j)));
        }
    }

    #[test]
    fn exponent_divides_class_bound(a in prop::sample::select(fixtures().to_vec())) {
        let p = a.modulus().p() as u64;
        let n = a.nilpotency_class().unwrap() as u64;
        let mut bound = 1;
        while bound < n {
            bound *= p;
        }
        prop_assert_eq!(bound % a.exponent().unwrap(), 0);
        prop_assert!(!a.annihilator().is_empty());
    }

    #[test]
    fn text_format_round_trip(a in prop::sample::select(fixtures().to_vec())) {
        let text = emit_algebra(&a);
        let back = parse_algebra(&text).unwrap();
        prop_assert_eq!(emit_algebra(&back), text);
        prop_assert_eq!(back, a);
    }

    #[test]
    fn correspondence_round_trip(a in prop::sample::select(small_fixtures())) {
        let t = ring_to_subgroup(&a).unwrap().to_subgroup().unwrap();
        prop_assert_eq!(subgroup_to_ring(&t).unwrap(), a);
    }

    #[test]
    fn translation_meets_agree(a in prop::sample::select(small_fixtures())) {
        let t = ring_to_subgroup(&a).unwrap().to_subgroup().unwrap();
        let meet = intersect_translations(&t);
        prop_assert!(meet.order() > 1);
        prop_assert_eq!(&translations_centralizing(&t).unwrap(), &meet);
        prop_assert_eq!(&centralizer_of_translations(&t), &meet);
        prop_assert_eq!(meet.order() as u64, (a.modulus().p() as u64).pow(a.annihilator().len() as u32));
        prop_assert_eq!(translations_normalize(&t), a.triple_products_vanish());
    }

    #[test]
    fn transport_gives_isomorphic_algebras(
        (a, phi) in prop::sample::select(small_fixtures())
            .prop_filter("dim <= 3", |a| a.dim() <= 3)
            .prop_flat_map(|a| { let (p, d) = (a.modulus(), a.dim()); (Just(a), invertible(p, d)) })
    ) {
        let b = transport_algebra(&a, &phi).unwrap();
        prop_assert!(is_isomorphism(&a, &b, &phi).unwrap());
        prop_assert!(iso_to_conjugacy(&a, &b, &phi).unwrap());
        prop_assert_eq!(Fingerprint::of(&a).unwrap(), Fingerprint::of(&b).unwrap());
        let found = find_isomorphism(&a, &b).unwrap().expect("isomorphic");
        prop_assert!(is_isomorphism(&a, &b, &found).unwrap());
    }
}

fn series(p: Fp, prec: usize) -> impl Strategy<Value = TruncSeries> {
    prop::collection::vec(0..p.p() as i64, 0..=prec)
        .prop_map(move |c| TruncSeries::new(p, prec, c).unwrap())
}

fn series_pair() -> impl Strategy<Value = (TruncSeries, TruncSeries)> {
    (prop::sample::select(vec![2u64, 3, 5]), 1usize..40)
        .prop_flat_map(|(p, prec)| (series(fp(p), prec), series(fp(p), prec)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn valuation_is_additive((x, y) in series_pair()) {
        match (x.valuation(), y.valuation()) {
            (Some(a), Some(b)) if a + b <= x.precision() => {
                prop_assert_eq!(ts_multiply(&x, &y).unwrap().valuation(), Some(a + b));
            }
            (Some(_), Some(_)) => prop_assert!(ts_multiply(&x, &y).is_err()),
            _ => prop_assert!(ts_multiply(&x, &y).unwrap().is_zero()),
        }
    }

    #[test]
    fn circle_inverse_is_two_sided((x, _) in series_pair()) {
        let y = ts_circle_inverse(&x);
        prop_assert!(ts_circle(&x, &y).unwrap().is_zero());
        prop_assert!(ts_circle(&y, &x).unwrap().is_zero());
    }

    #[test]
    fn no_torsion_within_precision((x, _) in series_pair(), j in 1u32..4) {
        let q = (x.modulus().p() as usize).pow(j);
        match x.valuation() {
            None => prop_assert!(torsion_check(&x, j).unwrap().is_zero),
            Some(v) if q * v <= x.precision() => {
                let r = torsion_check(&x, j).unwrap();
                prop_assert!(!r.is_zero);
                prop_assert_eq!(r.valuation, Some(q * v));
            }
            Some(_) => prop_assert!(torsion_check(&x, j).is_err()),
        }
    }
}
