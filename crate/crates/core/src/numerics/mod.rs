//! Scalar layer: exact rationals, the quadratic extension `Q(√u)`, complex
//! floats with a single tolerance policy, and p-adic valuations.
//!
//! The base field is modelled by `Q` with the prime `p` playing the role of
//! the uniformizer, and the unramified quadratic extension by `Q(√u)` for a
//! fixed nonsquare unit `u`. Volume and L-factor formulas only ever see the
//! residue cardinality `q`, so they take it as a plain integer.

mod quad;

pub use quad::{qe_valuation, FieldCtx, QuadExt};

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact rational in canonical reduced form.
pub type Rat = BigRational;

/// Double precision complex number used for Satake parameters and L-values.
pub type CNum = Complex64;

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `q^e` for an integer (possibly negative) exponent.
pub fn rat_pow(q: u64, e: i64) -> Rat {
    let base = Rat::from_integer(BigInt::from(q));
    if e >= 0 {
        num_traits::pow(base, e as usize)
    } else {
        num_traits::pow(base.recip(), e.unsigned_abs() as usize)
    }
}

pub fn rat_to_f64(x: &Rat) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// A valuation value in `Z ∪ {+∞}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_at_least(self, bound: i64) -> bool {
        match self {
            Valuation::Finite(v) => v >= bound,
            Valuation::Infinite => true,
        }
    }
}

impl Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "+inf"),
        }
    }
}

fn int_valuation(n: &BigInt, p: &BigInt) -> i64 {
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (quot, rem) = n.div_rem(p);
        if !rem.is_zero() {
            return v;
        }
        n = quot;
        v += 1;
    }
}

/// `v_p(x)`; `+∞` at zero.
pub fn padic_valuation(x: &Rat, p: u64) -> Result<Valuation> {
    if !is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    Ok(padic_valuation_unchecked(x, p))
}

pub(crate) fn padic_valuation_unchecked(x: &Rat, p: u64) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinite;
    }
    let p = BigInt::from(p);
    Valuation::Finite(int_valuation(x.numer(), &p) - int_valuation(x.denom(), &p))
}

/// Tolerance policy: `|x - y| <= abs + rel * max(|x|, |y|)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToleranceCfg {
    pub rel: f64,
    pub abs: f64,
}

impl ToleranceCfg {
    pub fn new(rel: f64, abs: f64) -> Result<Self> {
        if !(rel > 0.0 && abs > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "tolerances must be positive (rel={rel}, abs={abs})"
            )));
        }
        Ok(Self { rel, abs })
    }
}

impl Default for ToleranceCfg {
    fn default() -> Self {
        Self { rel: 1e-10, abs: 1e-12 }
    }
}

pub fn approx_eq(x: CNum, y: CNum, cfg: ToleranceCfg) -> bool {
    (x - y).norm() <= cfg.abs + cfg.rel * x.norm().max(y.norm())
}

/// Relative error `|x - y| / max(|x|, |y|)`, zero when both vanish.
pub fn rel_err(x: CNum, y: CNum) -> f64 {
    let scale = x.norm().max(y.norm());
    if scale == 0.0 {
        0.0
    } else {
        (x - y).norm() / scale
    }
}

pub(crate) fn check_finite(z: CNum, what: &'static str) -> Result<CNum> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(Error::NonFinite(what))
    }
}

/// Total order on complex numbers used to canonicalize multisets
/// (modulus, then argument, then real part).
pub(crate) fn cmp_cnum(a: &CNum, b: &CNum) -> Ordering {
    a.norm()
        .total_cmp(&b.norm())
        .then(a.arg().total_cmp(&b.arg()))
        .then(a.re.total_cmp(&b.re))
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuation_examples() {
        assert_eq!(padic_valuation(&rat(9, 2), 3).unwrap(), Valuation::Finite(2));
        assert_eq!(padic_valuation(&rat(1, 3), 3).unwrap(), Valuation::Finite(-1));
        assert_eq!(padic_valuation(&rat(0, 1), 5).unwrap(), Valuation::Infinite);
        assert_eq!(padic_valuation(&rat(-250, 7), 5).unwrap(), Valuation::Finite(3));
    }

    #[test]
    fn valuation_rejects_composite() {
        assert!(matches!(padic_valuation(&rat(1, 1), 9), Err(Error::InvalidArgument(_))));
        assert!(padic_valuation(&rat(1, 1), 1).is_err());
    }

    #[test]
    fn valuation_order_and_sum() {
        assert!(Valuation::Finite(100) < Valuation::Infinite);
        assert_eq!(Valuation::Finite(2) + Valuation::Finite(-3), Valuation::Finite(-1));
        assert_eq!(Valuation::Finite(2) + Valuation::Infinite, Valuation::Infinite);
    }

    #[test]
    fn approx_eq_examples() {
        let one = CNum::new(1.0, 0.0);
        assert!(approx_eq(one, CNum::new(1.0 + 1e-14, 0.0), ToleranceCfg::new(1e-10, 1e-300).unwrap()));
        assert!(!approx_eq(one, CNum::new(1.1, 0.0), ToleranceCfg::new(1e-10, 1e-12).unwrap()));
        assert!(approx_eq(CNum::new(0.0, 0.0), CNum::new(1e-13, 0.0), ToleranceCfg::new(1e-300, 1e-12).unwrap()));
    }

    #[test]
    fn tolerance_must_be_positive() {
        assert!(ToleranceCfg::new(0.0, 1.0).is_err());
        assert!(ToleranceCfg::new(1.0, -1.0).is_err());
    }

    #[test]
    fn rational_powers() {
        assert_eq!(rat_pow(3, -2), rat(1, 9));
        assert_eq!(rat_pow(3, 0), rat(1, 1));
        assert_eq!(rat_pow(2, 5), rat(32, 1));
    }
}
