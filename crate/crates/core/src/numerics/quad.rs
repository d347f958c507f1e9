use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{is_prime, padic_valuation_unchecked, rat_int, Rat, Valuation};
use crate::error::{Error, Result};

/// `a + b√u` in the quadratic field `Q(√u)`.
///
/// Every element carries its `u`; mixing elements of different fields is a
/// programming error and panics.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadExt {
    pub a: Rat,
    pub b: Rat,
    pub u: i64,
}

impl QuadExt {
    pub fn new(a: Rat, b: Rat, u: i64) -> Self {
        Self { a, b, u }
    }

    pub fn from_rat(a: Rat, u: i64) -> Self {
        Self { a, b: Rat::zero(), u }
    }

    pub fn from_int(a: i64, u: i64) -> Self {
        Self::from_rat(rat_int(a), u)
    }

    pub fn zero(u: i64) -> Self {
        Self::from_rat(Rat::zero(), u)
    }

    pub fn one(u: i64) -> Self {
        Self::from_rat(Rat::one(), u)
    }

    /// The element `√u`, a trace-zero unit.
    pub fn sqrt_u(u: i64) -> Self {
        Self { a: Rat::zero(), b: Rat::one(), u }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self { a: self.a.clone(), b: -self.b.clone(), u: self.u }
    }

    /// `Nm(a + b√u) = a² − u b²`.
    pub fn norm(&self) -> Rat {
        &self.a * &self.a - rat_int(self.u) * &self.b * &self.b
    }

    pub fn trace(&self) -> Rat {
        &self.a + &self.a
    }

    pub fn inv(&self) -> Option<Self> {
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        Some(Self { a: &self.a / &n, b: -(&self.b / &n), u: self.u })
    }

    pub fn scale(&self, r: &Rat) -> Self {
        Self { a: &self.a * r, b: &self.b * r, u: self.u }
    }

    /// `ν(a + b√u) = min(v_p(a), v_p(b))`, valid because `u` is a p-unit
    /// nonsquare mod p (the extension is unramified).
    pub fn valuation(&self, p: u64) -> Valuation {
        padic_valuation_unchecked(&self.a, p).min(padic_valuation_unchecked(&self.b, p))
    }

    fn check_field(&self, other: &Self) {
        assert_eq!(self.u, other.u, "mixing elements of Q(√{}) and Q(√{})", self.u, other.u);
    }
}

/// `ν` on `Q(√u)`; see [`QuadExt::valuation`].
pub fn qe_valuation(x: &QuadExt, p: u64) -> Valuation {
    x.valuation(p)
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero() {
            write!(f, "({})√{}", self.b, self.u)
        } else {
            write!(f, "{} + ({})√{}", self.a, self.b, self.u)
        }
    }
}

impl<'a> Add<&'a QuadExt> for &'a QuadExt {
    type Output = QuadExt;
    fn add(self, rhs: &QuadExt) -> QuadExt {
        self.check_field(rhs);
        QuadExt { a: &self.a + &rhs.a, b: &self.b + &rhs.b, u: self.u }
    }
}

impl<'a> Sub<&'a QuadExt> for &'a QuadExt {
    type Output = QuadExt;
    fn sub(self, rhs: &QuadExt) -> QuadExt {
        self.check_field(rhs);
        QuadExt { a: &self.a - &rhs.a, b: &self.b - &rhs.b, u: self.u }
    }
}

impl<'a> Mul<&'a QuadExt> for &'a QuadExt {
    type Output = QuadExt;
    fn mul(self, rhs: &QuadExt) -> QuadExt {
        self.check_field(rhs);
        let u = rat_int(self.u);
        QuadExt {
            a: &self.a * &rhs.a + u * &self.b * &rhs.b,
            b: &self.a * &rhs.b + &self.b * &rhs.a,
            u: self.u,
        }
    }
}

impl<'a> Div<&'a QuadExt> for &'a QuadExt {
    type Output = QuadExt;
    fn div(self, rhs: &QuadExt) -> QuadExt {
        let inv = rhs.inv().expect("division by zero in Q(√u)");
        self * &inv
    }
}

impl Neg for &QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt { a: -self.a.clone(), b: -self.b.clone(), u: self.u }
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $f:ident),*) => {$(
        impl $tr<QuadExt> for QuadExt {
            type Output = QuadExt;
            fn $f(self, rhs: QuadExt) -> QuadExt {
                (&self).$f(&rhs)
            }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul, Div::div);

impl Neg for QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        -&self
    }
}

/// The arithmetic context `(p, u)`: `F = Q` at the prime `p`, `E = F(√u)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldCtx {
    pub p: u64,
    pub u: i64,
}

impl FieldCtx {
    /// Validates that `p` is an odd prime and `u` a nonsquare unit mod `p`.
    pub fn new(p: u64, u: i64) -> Result<Self> {
        if !is_prime(p) || p == 2 {
            return Err(Error::InvalidArgument(format!("p = {p} must be an odd prime")));
        }
        if !is_nonresidue(u, p) {
            return Err(Error::InvalidArgument(format!(
                "u = {u} must be a quadratic non-residue unit mod {p}"
            )));
        }
        Ok(Self { p, u })
    }

    /// `p` with the default nonsquare: `-1` when `p ≡ 3 mod 4`, otherwise the
    /// smallest positive non-residue.
    pub fn with_default_u(p: u64) -> Result<Self> {
        if !is_prime(p) || p == 2 {
            return Err(Error::InvalidArgument(format!("p = {p} must be an odd prime")));
        }
        let u = if p % 4 == 3 {
            -1
        } else {
            (2..p as i64).find(|&u| is_nonresidue(u, p)).expect("odd prime has a non-residue")
        };
        Self::new(p, u)
    }

    pub fn zero(&self) -> QuadExt {
        QuadExt::zero(self.u)
    }

    pub fn one(&self) -> QuadExt {
        QuadExt::one(self.u)
    }

    pub fn int(&self, n: i64) -> QuadExt {
        QuadExt::from_int(n, self.u)
    }

    pub fn rat(&self, r: Rat) -> QuadExt {
        QuadExt::from_rat(r, self.u)
    }

    pub fn elem(&self, a: Rat, b: Rat) -> QuadExt {
        QuadExt::new(a, b, self.u)
    }

    pub fn sqrt_u(&self) -> QuadExt {
        QuadExt::sqrt_u(self.u)
    }

    /// The uniformizer `ϖ = p`, raised to `k`.
    pub fn uniformizer_pow(&self, k: i64) -> QuadExt {
        self.rat(super::rat_pow(self.p, k))
    }

    pub fn valuation(&self, x: &QuadExt) -> Valuation {
        x.valuation(self.p)
    }

    /// Residue field cardinality of `F`.
    pub fn q_f(&self) -> u64 {
        self.p
    }
}

fn is_nonresidue(u: i64, p: u64) -> bool {
    let p = p as i64;
    let r = u.rem_euclid(p);
    if r == 0 {
        return false;
    }
    // Euler's criterion.
    let mut acc: i64 = 1;
    let mut base = r;
    let mut e = (p - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc == p - 1
}
