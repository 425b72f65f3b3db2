//! Truncated power series in `t GF(p)[[t]]`.
//!
//! A [`TruncSeries`] of precision `n` is known modulo `t^(n+1)`. A series
//! whose stored coefficients all vanish is zero *to known precision*; it has
//! no valuation. Products whose leading term would fall past the precision
//! are refused with [`Error::PrecisionExhausted`] instead of being reported
//! as zero, which is what keeps the truncated ring from faking torsion.
//!
//! Literal syntax: `p=<p> prec=<n> coeffs=<c1,c2,...>` (`c_i` is the
//! coefficient of `t^i`; trailing zeros omitted).

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::field::Fp;

pub const DEFAULT_PRECISION: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TruncSeries {
    p: Fp,
    /// `coeffs[i - 1]` is the coefficient of `t^i`; length `prec`.
    coeffs: Vec<u32>,
}

impl TruncSeries {
    /// `coeffs` lists `c_1, c_2, ...`; missing ones up to `prec` are zero.
    pub fn new<I: IntoIterator<Item = i64>>(p: Fp, prec: usize, coeffs: I) -> Result<Self> {
        if prec == 0 {
            return Err(Error::InvalidParameters("precision must be positive".into()));
        }
        let mut c: Vec<u32> = coeffs.into_iter().map(|v| p.reduce_signed(v)).collect();
        if c.len() > prec {
            if c[prec..].iter().any(|&v| v != 0) {
                return Err(Error::InvalidParameters(format!(
                    "{} coefficients given for precision {prec}",
                    c.len()
                )));
            }
            c.truncate(prec);
        }
        c.resize(prec, 0);
        Ok(TruncSeries { p, coeffs: c })
    }

    pub fn zero(p: Fp, prec: usize) -> Result<Self> {
        Self::new(p, prec, [])
    }

    /// `t^k`, `1 <= k <= prec`.
    pub fn monomial(p: Fp, prec: usize, k: usize) -> Result<Self> {
        if k == 0 || k > prec {
            return Err(Error::InvalidParameters(format!(
                "t^{k} is not representable at precision {prec}"
            )));
        }
        let mut s = Self::zero(p, prec)?;
        s.coeffs[k - 1] = 1;
        Ok(s)
    }

    pub fn modulus(&self) -> Fp {
        self.p
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficient of `t^i`; zero for `i = 0` and past the precision.
    pub fn coefficient(&self, i: usize) -> u32 {
        if i == 0 {
            0
        } else {
            self.coeffs.get(i - 1).copied().unwrap_or(0)
        }
    }

    pub fn coefficients(&self) -> &[u32] {
        &self.coeffs
    }

    /// Least `i` with `c_i != 0`, or `None` when zero to known precision.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|&c| c != 0).map(|i| i + 1)
    }

    pub fn is_zero(&self) -> bool {
        self.valuation().is_none()
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            return Err(Error::Incompatible(format!(
                "series over GF({}) and GF({})",
                self.p, other.p
            )));
        }
        Ok(())
    }

    /// Same series at a lower precision.
    pub fn truncate(&self, prec: usize) -> Result<Self> {
        Self::new(
            self.p,
            prec,
            self.coeffs[..prec.min(self.precision())].iter().map(|&c| c as i64),
        )
    }

    /// The human form, e.g. `t + 2t^3`.
    pub fn pretty(&self) -> String {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| {
                let coeff = if c == 1 { String::new() } else { c.to_string() };
                match i + 1 {
                    1 => format!("{coeff}t"),
                    e => format!("{coeff}t^{e}"),
                }
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

/// Cauchy product modulo `t^(prec+1)`, `prec` the smaller precision.
fn truncated_product(x: &TruncSeries, y: &TruncSeries) -> TruncSeries {
    let p = x.p;
    let prec = x.precision().min(y.precision());
    let mut out = vec![0u32; prec];
    for (a, &xa) in x.coeffs.iter().enumerate().take(prec) {
        if xa == 0 {
            continue;
        }
        // t^(a+1) t^(b+1) = t^(a+b+2), slot a + b + 1
        for (b, &yb) in y.coeffs.iter().enumerate().take(prec.saturating_sub(a + 1)) {
            let slot = a + b + 1;
            out[slot] = p.add(out[slot], p.mul(xa, yb));
        }
    }
    TruncSeries { p, coeffs: out }
}

fn truncated_sum(x: &TruncSeries, y: &TruncSeries) -> TruncSeries {
    let prec = x.precision().min(y.precision());
    let coeffs = (0..prec)
        .map(|i| x.p.add(x.coeffs[i], y.coeffs[i]))
        .collect();
    TruncSeries { p: x.p, coeffs }
}

/// Product at precision `min(prec_x, prec_y)`. Fails when both factors are
/// nonzero and `v(x) + v(y)` exceeds that precision.
pub fn ts_multiply(x: &TruncSeries, y: &TruncSeries) -> Result<TruncSeries> {
    x.same_field(y)?;
    let prec = x.precision().min(y.precision());
    if let (Some(vx), Some(vy)) = (x.valuation(), y.valuation()) {
        if vx + vy > prec {
            return Err(Error::PrecisionExhausted);
        }
    }
    Ok(truncated_product(x, y))
}

/// `x + y + xy`. The sum is exact modulo `t^(prec+1)` even when the product
/// alone would have left the precision, so this never reports exhaustion.
pub fn ts_circle(x: &TruncSeries, y: &TruncSeries) -> Result<TruncSeries> {
    x.same_field(y)?;
    Ok(truncated_sum(&truncated_sum(x, y), &truncated_product(x, y)))
}

/// `-x + x^2 - x^3 + ...`, which terminates at the precision.
pub fn ts_circle_inverse(x: &TruncSeries) -> TruncSeries {
    let p = x.p;
    let mut acc = TruncSeries {
        p,
        coeffs: vec![0; x.precision()],
    };
    let mut power = x.clone();
    let mut sign_negative = true;
    while !power.is_zero() {
        let term = if sign_negative {
            TruncSeries {
                p,
                coeffs: power.coeffs.iter().map(|&c| p.neg(c)).collect(),
            }
        } else {
            power.clone()
        };
        acc = truncated_sum(&acc, &term);
        power = truncated_product(&power, x);
        sign_negative = !sign_negative;
    }
    acc
}

/// Result of [`torsion_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Torsion {
    /// `p^j v(x)`, or `None` for `x = 0`.
    pub valuation: Option<usize>,
    pub is_zero: bool,
    /// `p^j ∘ x`.
    pub value: TruncSeries,
}

/// `p^j ∘ x` computed by repeated circling and as `x^(p^j)`. Panics if the
/// two disagree.
pub fn torsion_check(x: &TruncSeries, j: u32) -> Result<Torsion> {
    if j == 0 {
        return Err(Error::InvalidParameters("j must be positive".into()));
    }
    let q = (x.p.p() as usize)
        .checked_pow(j)
        .ok_or(Error::PrecisionExhausted)?;
    let Some(v) = x.valuation() else {
        return Ok(Torsion {
            valuation: None,
            is_zero: true,
            value: x.clone(),
        });
    };
    if q.saturating_mul(v) > x.precision() {
        return Err(Error::PrecisionExhausted);
    }
    let mut repeated = x.clone();
    for _ in 1..q {
        repeated = ts_circle(&repeated, x)?;
    }
    let mut direct = x.clone();
    for _ in 1..q {
        direct = ts_multiply(&direct, x)?;
    }
    assert_eq!(repeated, direct, "circle power disagrees with ring power");
    Ok(Torsion {
        valuation: direct.valuation(),
        is_zero: direct.is_zero(),
        value: direct,
    })
}

/// `x t`, a nonzero product showing that `x` is not in the annihilator.
pub fn annihilator_witness(x: &TruncSeries) -> Result<TruncSeries> {
    let v = x
        .valuation()
        .ok_or_else(|| Error::InvalidParameters("zero series has no witness".into()))?;
    if v >= x.precision() {
        return Err(Error::PrecisionExhausted);
    }
    let t = TruncSeries::monomial(x.p, x.precision(), 1)?;
    let w = ts_multiply(x, &t)?;
    debug_assert_eq!(w.valuation(), Some(v + 1));
    Ok(w)
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let last = self.coeffs.iter().rposition(|&c| c != 0).map_or(0, |i| i + 1);
        let cs: Vec<String> = self.coeffs[..last].iter().map(u32::to_string).collect();
        write!(f, "p={} prec={} coeffs={}", self.p, self.precision(), cs.join(","))
    }
}

impl FromStr for TruncSeries {
    type Err = Error;

    /// `prec` may be omitted and defaults to [`DEFAULT_PRECISION`].
    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: String| Error::Parse { line: 1, msg };
        let (mut p, mut prec, mut coeffs) = (None, None, None);
        for tok in s.split_whitespace() {
            let (k, v) = tok
                .split_once('=')
                .ok_or_else(|| bad(format!("expected key=value, found `{tok}`")))?;
            let slot = match k {
                "p" => &mut p,
                "prec" => &mut prec,
                "coeffs" => &mut coeffs,
                _ => return Err(bad(format!("unknown key `{k}`"))),
            };
            if slot.replace(v).is_some() {
                return Err(bad(format!("`{k}` given twice")));
            }
        }
        let p: u64 = p
            .ok_or_else(|| bad("missing `p=`".into()))?
            .parse()
            .map_err(|_| bad("`p` is not an integer".into()))?;
        let p = Fp::new(p)?;
        let prec = match prec {
            Some(v) => v.parse().map_err(|_| bad("`prec` is not an integer".into()))?,
            None => DEFAULT_PRECISION,
        };
        let coeffs: Vec<i64> = match coeffs.ok_or_else(|| bad("missing `coeffs=`".into()))? {
            "" => Vec::new(),
            list => list
                .split(',')
                .map(|c| c.parse().map_err(|_| bad(format!("bad coefficient `{c}`"))))
                .collect::<Result<_>>()?,
        };
        TruncSeries::new(p, prec, coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(p: u64, prec: usize, c: &[i64]) -> TruncSeries {
        TruncSeries::new(Fp::new(p).unwrap(), prec, c.iter().copied()).unwrap()
    }

    #[test]
    fn products() {
        let t = s(2, 8, &[1]);
        let t2 = ts_multiply(&t, &t).unwrap();
        assert_eq!(t2, s(2, 8, &[0, 1]));
        assert_eq!(t2.valuation(), Some(2));
        assert_eq!(ts_multiply(&s(2, 8, &[1, 1]), &t).unwrap(), s(2, 8, &[0, 1, 1]));
        let high = s(2, 8, &[0, 0, 0, 0, 1]);
        assert_eq!(ts_multiply(&high, &high), Err(Error::PrecisionExhausted));
        assert!(ts_multiply(&s(2, 8, &[]), &high).unwrap().is_zero());
    }

    #[test]
    fn circle_and_inverse() {
        let t = s(2, 8, &[1]);
        assert_eq!(ts_circle(&t, &t).unwrap(), s(2, 8, &[0, 1]));
        assert_eq!(ts_circle(&t, &s(2, 8, &[])).unwrap(), t);
        assert_eq!(ts_circle_inverse(&s(2, 4, &[1])), s(2, 4, &[1, 1, 1, 1]));
        assert_eq!(ts_circle_inverse(&s(3, 3, &[1])), s(3, 3, &[2, 1, 2]));
        assert!(ts_circle_inverse(&s(3, 5, &[])).is_zero());
        let x = s(3, 10, &[2, 0, 1, 1]);
        assert!(ts_circle(&x, &ts_circle_inverse(&x)).unwrap().is_zero());
    }

    #[test]
    fn torsion() {
        let t = s(2, 8, &[1]);
        let r = torsion_check(&t, 1).unwrap();
        assert_eq!((r.valuation, r.is_zero), (Some(2), false));
        let r = torsion_check(&t, 2).unwrap();
        assert_eq!(r.value.pretty(), "t^4");
        let z = torsion_check(&s(2, 8, &[]), 3).unwrap();
        assert_eq!((z.valuation, z.is_zero), (None, true));
        assert_eq!(torsion_check(&t, 4), Err(Error::PrecisionExhausted));
    }

    #[test]
    fn witness() {
        let x = s(2, 8, &[0, 0, 1, 0, 1]);
        assert_eq!(annihilator_witness(&x).unwrap(), s(2, 8, &[0, 0, 0, 1, 0, 1]));
        assert!(matches!(
            annihilator_witness(&s(2, 8, &[])),
            Err(Error::InvalidParameters(_))
        ));
        let top = TruncSeries::monomial(Fp::new(2).unwrap(), 8, 8).unwrap();
        assert_eq!(annihilator_witness(&top), Err(Error::PrecisionExhausted));
    }

    #[test]
    fn literal_round_trip() {
        let x: TruncSeries = "p=3 prec=6 coeffs=1,0,2".parse().unwrap();
        assert_eq!(x.to_string(), "p=3 prec=6 coeffs=1,0,2");
        assert_eq!(x.pretty(), "t + 2t^3");
        let z: TruncSeries = "p=2 prec=4 coeffs=".parse().unwrap();
        assert_eq!(z.to_string(), "p=2 prec=4 coeffs=");
        assert_eq!(z.pretty(), "0");
        let d: TruncSeries = "coeffs=1 p=5".parse().unwrap();
        assert_eq!(d.precision(), DEFAULT_PRECISION);
        for bad in ["p=4 coeffs=1", "p=2", "p=2 coeffs=x", "p=2 prec=2 coeffs=1,1,1", "p=2 q=1 coeffs=1"] {
            assert!(bad.parse::<TruncSeries>().is_err(), "{bad}");
        }
    }
}
