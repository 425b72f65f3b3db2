//! Enumeration of `GL(d, p)`.
//!
//! Matrices are listed in row order: row 1 varies slowest, and each row runs
//! through the points of `V` by base-`p` index (coordinate 1 least
//! significant). Under this order the identity comes first.

use crate::error::{Error, Result};
use crate::field::{Fp, Matrix, RowVector};

/// `|GL(d, p)| = prod_{i<d} (p^d - p^i)`, or `None` on overflow.
pub fn gl_order(p: Fp, d: usize) -> Option<u128> {
    let q = p.p() as u128;
    let pd = q.checked_pow(d as u32)?;
    (0..d).try_fold(1u128, |acc, i| acc.checked_mul(pd - q.pow(i as u32)))
}

/// Incremental row-echelon basis used to test linear independence of rows as
/// they are chosen.
#[derive(Clone)]
pub(crate) struct EchelonBasis {
    p: Fp,
    rows: Vec<(usize, Vec<u32>)>,
}

impl EchelonBasis {
    pub(crate) fn new(p: Fp) -> Self {
        EchelonBasis {
            p,
            rows: Vec::new(),
        }
    }

    fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let p = self.p;
        let mut v = v.to_vec();
        for (piv, row) in &self.rows {
            let f = v[*piv];
            if f != 0 {
                for (a, &b) in v.iter_mut().zip(row) {
                    *a = p.sub(*a, p.mul(f, b));
                }
            }
        }
        v
    }

    /// Adds `v` if it is independent of the current rows.
    pub(crate) fn try_push(&mut self, v: &[u32]) -> bool {
        let r = self.reduce(v);
        let Some(piv) = r.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = self.p.inv(r[piv]).expect("nonzero pivot");
        let r: Vec<u32> = r.iter().map(|&x| self.p.mul(x, inv)).collect();
        self.rows.push((piv, r));
        true
    }

    pub(crate) fn pop(&mut self) {
        self.rows.pop();
    }
}

/// All of `GL(d, p)` in enumeration order, refusing if there are more than
/// `bound` matrices.
pub fn general_linear_group(p: Fp, d: usize, bound: usize) -> Result<Vec<Matrix>> {
    let order = gl_order(p, d).unwrap_or(u128::MAX);
    if order > bound as u128 {
        return Err(Error::BoundExceeded {
            what: "GL(d, p) enumeration",
            needed: order,
            bound: bound as u128,
        });
    }
    let mut out = Vec::with_capacity(order as usize);
    let mut chosen = Vec::with_capacity(d);
    let mut basis = EchelonBasis::new(p);
    let points = p.checked_order(d).expect("bounded above");
    fill(p, d, points, &mut chosen, &mut basis, &mut out);
    Ok(out)
}

fn fill(
    p: Fp,
    d: usize,
    points: u64,
    chosen: &mut Vec<RowVector>,
    basis: &mut EchelonBasis,
    out: &mut Vec<Matrix>,
) {
    if chosen.len() == d {
        out.push(Matrix::from_row_vectors(p, d, chosen));
        return;
    }
    for idx in 1..points {
        let row = RowVector::from_index(p, d, idx);
        if basis.try_push(row.entries()) {
            chosen.push(row);
            fill(p, d, points, chosen, basis, out);
            chosen.pop();
            basis.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::mat_inverse;

    #[test]
    fn orders() {
        let f2 = Fp::new(2).unwrap();
        let f3 = Fp::new(3).unwrap();
        assert_eq!(gl_order(f2, 2), Some(6));
        assert_eq!(gl_order(f2, 3), Some(168));
        assert_eq!(gl_order(f3, 2), Some(48));
        assert_eq!(general_linear_group(f3, 2, 100).unwrap().len(), 48);
        assert_eq!(general_linear_group(f2, 3, 1000).unwrap().len(), 168);
    }

    #[test]
    fn identity_first_and_all_invertible() {
        let f3 = Fp::new(3).unwrap();
        let gl = general_linear_group(f3, 2, 100).unwrap();
        assert!(gl[0].is_identity());
        assert!(gl.iter().all(|m| mat_inverse(m).is_ok()));
        let mut sorted = gl.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), gl.len());
    }

    #[test]
    fn bound_enforced() {
        let f2 = Fp::new(2).unwrap();
        assert!(matches!(
            general_linear_group(f2, 3, 100),
            Err(Error::BoundExceeded { needed: 168, .. })
        ));
    }
}
