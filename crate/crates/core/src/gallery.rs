//! Named example algebras.
//!
//! | name             | algebra                                             |
//! |------------------|-----------------------------------------------------|
//! | `sym4-1`         | GF(2), basis `a, b`: `a^2 = b`                      |
//! | `sym4-2`         | GF(2), basis `a, b`: `b^2 = a`                      |
//! | `sym4-3`         | GF(2), basis `a, b`: `a^2 = b^2 = ab = a + b`       |
//! | `dimp:<p>`       | GF(p), basis `a, a^2, ..., a^p`, `a^(p+1) = 0`      |
//! | `truncext:<k>`   | GF(2) exterior algebra on `k` generators, length 2  |
//! | `ext3`           | GF(2) exterior algebra on 3 generators, degree >= 1 |
//! | `polyq:<d>:<e>[:<p>]` | `(x0, ..., xe)` modulo `x0^(d-e+1)`, `x0 xi`, `xj xi` (`p` defaults to 2) |

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::field::Fp;

fn f2() -> Fp {
    Fp::new(2).expect("2 is prime")
}

/// The three ring structures on `GF(2)^2` whose circle groups are the cyclic
/// regular subgroups of `Sym(4)`.
pub fn sym4_rings() -> [Algebra; 3] {
    let b = || Algebra::builder(f2(), 2).expect("d > 0");
    [
        b().product(0, 0, &[0, 1]).build(),
        b().product(1, 1, &[1, 0]).build(),
        b().product(0, 0, &[1, 1])
            .product(0, 1, &[1, 1])
            .product(1, 1, &[1, 1])
            .build(),
    ]
    .map(|r| r.expect("associative"))
}

/// Basis `a, a^2, ..., a^p` (index `i` holds `a^(i+1)`) with `a^(p+1) = 0`.
pub fn dim_p_ring(p: Fp) -> Algebra {
    let d = p.p() as usize;
    let mut b = Algebra::builder(p, d).expect("d = p > 0");
    for i in 0..d {
        for j in i..d {
            // a^(i+1) a^(j+1) = a^(i+j+2), basis index i + j + 1
            if i + j + 1 < d {
                b = b.coefficient(i, j, i + j + 1, 1);
            }
        }
    }
    b.build().expect("truncated polynomial ring is associative")
}

/// Index of `e_i ^ e_j` (`i < j`) in the lexicographic wedge basis that follows
/// the `k` generators.
fn wedge_index(k: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < k);
    k + i * (2 * k - i - 1) / 2 + (j - i - 1)
}

/// Exterior algebra over GF(2) on `k >= 2` generators truncated at length 2:
/// basis `e_1, ..., e_k` then `e_i ^ e_j` lexicographically, with `e_i e_j =
/// e_i ^ e_j` for `i != j` and every other product zero.
pub fn truncated_exterior(k: usize) -> Result<Algebra> {
    if k < 2 {
        return Err(Error::InvalidParameters(format!(
            "truncated exterior algebra needs k >= 2, got {k}"
        )));
    }
    let d = k + k * (k - 1) / 2;
    let mut b = Algebra::builder(f2(), d)?;
    for i in 0..k {
        for j in i + 1..k {
            b = b.coefficient(i, j, wedge_index(k, i, j), 1);
        }
    }
    b.build()
}

/// The positive-degree part of the exterior algebra over GF(2) on three
/// generators: basis `e1, e2, e3, e1^e2, e1^e3, e2^e3, e1^e2^e3`.
pub fn exterior_3() -> Algebra {
    let top = 6;
    let b = Algebra::builder(f2(), 7)
        .expect("d > 0")
        .coefficient(0, 1, 3, 1)
        .coefficient(0, 2, 4, 1)
        .coefficient(1, 2, 5, 1)
        .coefficient(0, 5, top, 1)
        .coefficient(1, 4, top, 1)
        .coefficient(2, 3, top, 1);
    b.build().expect("exterior algebra is associative")
}

/// The ideal `(x0, ..., xe)` of `GF(p)[x0, ..., xe]` modulo `x0^(d-e+1)`,
/// `x0 xi` and `xj xi` (`i, j > 0`). Basis `x0, x0^2, ..., x0^(d-e)` then
/// `x1, ..., xe`.
pub fn poly_quotient(p: Fp, d: usize, e: usize) -> Result<Algebra> {
    if e >= d {
        return Err(Error::InvalidParameters(format!(
            "need 0 <= e < d, got d = {d}, e = {e}"
        )));
    }
    let top = d - e;
    let mut b = Algebra::builder(p, d)?;
    for i in 0..top {
        for j in i..top {
            if i + j + 1 < top {
                b = b.coefficient(i, j, i + j + 1, 1);
            }
        }
    }
    b.build()
}

/// Looks up an algebra by its gallery name.
pub fn by_name(name: &str) -> Result<Algebra> {
    let bad = || Error::InvalidParameters(format!("unknown gallery name `{name}`"));
    let num = |s: &str| s.parse::<u64>().map_err(|_| bad());
    let parts: Vec<&str> = name.split(':').collect();
    match parts.as_slice() {
        ["sym4-1"] => Ok(sym4_rings()[0].clone()),
        ["sym4-2"] => Ok(sym4_rings()[1].clone()),
        ["sym4-3"] => Ok(sym4_rings()[2].clone()),
        ["ext3"] => Ok(exterior_3()),
        ["dimp", p] => Ok(dim_p_ring(Fp::new(num(p)?)?)),
        ["truncext", k] => truncated_exterior(num(k)? as usize),
        ["polyq", d, e] => poly_quotient(f2(), num(d)? as usize, num(e)? as usize),
        ["polyq", d, e, p] => poly_quotient(Fp::new(num(p)?)?, num(d)? as usize, num(e)? as usize),
        _ => Err(bad()),
    }
}

/// Gallery names used as the standard fixture set.
pub const CATALOG: &[&str] = &[
    "sym4-1",
    "sym4-2",
    "sym4-3",
    "dimp:2",
    "dimp:3",
    "dimp:5",
    "truncext:2",
    "truncext:3",
    "truncext:4",
    "ext3",
    "polyq:2:1",
    "polyq:3:0",
    "polyq:4:1",
    "polyq:5:2",
    "polyq:6:3",
    "polyq:3:1:3",
    "polyq:4:2:3",
    "polyq:2:0:5",
];

/// Every algebra in [`CATALOG`], with its name.
pub fn catalog() -> Vec<(&'static str, Algebra)> {
    CATALOG
        .iter()
        .map(|&n| (n, by_name(n).expect("catalog names are valid")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::RowVector;

    fn unit(d: usize, i: usize) -> RowVector {
        RowVector::unit(f2(), d, i)
    }

    #[test]
    fn sym4_ring_products() {
        let [r1, r2, r3] = sym4_rings();
        assert_eq!(r1.multiply(&unit(2, 0), &unit(2, 0)), unit(2, 1));
        assert_eq!(r2.multiply(&unit(2, 1), &unit(2, 1)), unit(2, 0));
        assert_eq!(
            r3.multiply(&unit(2, 0), &unit(2, 1)),
            RowVector::from_entries(f2(), [1, 1])
        );
    }

    #[test]
    fn exterior_products() {
        let e = exterior_3();
        let e23 = e.multiply(&unit(7, 1), &unit(7, 2));
        assert_eq!(e23, unit(7, 5));
        assert_eq!(e.multiply(&unit(7, 0), &e23), unit(7, 6));
        let e12 = e.multiply(&unit(7, 0), &unit(7, 1));
        assert_eq!(e.multiply(&e12, &unit(7, 2)), unit(7, 6));
    }

    #[test]
    fn truncated_exterior_shape() {
        for k in 2..6 {
            let a = truncated_exterior(k).unwrap();
            assert_eq!(a.dim(), k + k * (k - 1) / 2);
            assert_eq!(a.nilpotency_class(), Some(3));
        }
        assert!(truncated_exterior(1).is_err());
    }

    #[test]
    fn wedge_indices_are_consecutive() {
        let k = 4;
        let mut expect = k;
        for i in 0..k {
            for j in i + 1..k {
                assert_eq!(wedge_index(k, i, j), expect);
                expect += 1;
            }
        }
    }

    #[test]
    fn poly_quotient_shapes() {
        // d - e = 3: chain x0, x0^2, x0^3 of class 4
        let a = poly_quotient(f2(), 3, 0).unwrap();
        assert_eq!(a.nilpotency_class(), Some(4));
        // d - e = 1 gives the zero algebra
        let z = poly_quotient(f2(), 2, 1).unwrap();
        assert!(z.is_zero_algebra());
        assert_eq!(z.annihilator().len(), 2);
        assert!(poly_quotient(f2(), 3, 3).is_err());
    }

    #[test]
    fn names_resolve() {
        assert_eq!(catalog().len(), CATALOG.len());
        assert_eq!(by_name("dimp:3").unwrap().dim(), 3);
        assert_eq!(by_name("polyq:4:1:3").unwrap().modulus().p(), 3);
        for bad in ["sym4-4", "dimp:4", "truncext:x", "polyq:3", "nope"] {
            assert!(by_name(bad).is_err(), "{bad}");
        }
    }
}
