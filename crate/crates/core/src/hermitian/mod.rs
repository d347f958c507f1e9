//! Exact matrices over `E = Q(√u)` and the unitary / symmetric-space
//! predicates built on them: membership in the Lie algebras and compact open
//! subgroups, Cayley transforms, transfer factors, regular semisimplicity and
//! matching.

mod forms;
mod invariants;
pub mod random;

pub use forms::{cayley, cayley_inv, membership, norm_one_elements, r_map, unit_cayley_xi, HermForm, Kind};
pub use invariants::{
    det_stack_identity_check, iota_c, is_regular_semisimple, matches, matching_invariants, transfer_factor,
    det_stack_sides, Blocks, MatchingInvariants, TransferKind,
};

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{FieldCtx, QuadExt, Rat, Valuation};

/// A dense `rows × cols` matrix over `Q(√u)`, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EMat {
    rows: usize,
    cols: usize,
    ctx: FieldCtx,
    data: Vec<QuadExt>,
}

impl EMat {
    pub fn zeros(ctx: FieldCtx, rows: usize, cols: usize) -> Self {
        Self { rows, cols, ctx, data: vec![ctx.zero(); rows * cols] }
    }

    pub fn identity(ctx: FieldCtx, n: usize) -> Self {
        Self::scalar(ctx, n, &ctx.one())
    }

    pub fn scalar(ctx: FieldCtx, n: usize, x: &QuadExt) -> Self {
        let mut m = Self::zeros(ctx, n, n);
        for i in 0..n {
            m.set(i, i, x.clone());
        }
        m
    }

    pub fn diag(ctx: FieldCtx, entries: &[QuadExt]) -> Self {
        let mut m = Self::zeros(ctx, entries.len(), entries.len());
        for (i, x) in entries.iter().enumerate() {
            m.set(i, i, x.clone());
        }
        m
    }

    pub fn from_rows(ctx: FieldCtx, rows: Vec<Vec<QuadExt>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        if rows.iter().flatten().any(|x| x.u != ctx.u) {
            return Err(Error::ShapeMismatch(format!("entry outside Q(√{})", ctx.u)));
        }
        Ok(Self { rows: r, cols: c, ctx, data: rows.into_iter().flatten().collect() })
    }

    /// Integer entries `a` read as `a + 0·√u`.
    pub fn from_ints(ctx: FieldCtx, rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(ctx, rows.iter().map(|r| r.iter().map(|&a| ctx.int(a)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn ctx(&self) -> FieldCtx {
        self.ctx
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &QuadExt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: QuadExt) {
        assert_eq!(x.u, self.ctx.u);
        self.data[i * self.cols + j] = x;
    }

    pub fn entries(&self) -> impl Iterator<Item = &QuadExt> {
        self.data.iter()
    }

    pub fn map(&self, f: impl Fn(&QuadExt) -> QuadExt) -> Self {
        Self { rows: self.rows, cols: self.cols, ctx: self.ctx, data: self.data.iter().map(f).collect() }
    }

    /// Entry-wise Galois conjugate `X̄`.
    pub fn conj(&self) -> Self {
        self.map(QuadExt::conj)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.ctx, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    /// `X̄ᵗ`.
    pub fn conj_transpose(&self) -> Self {
        self.transpose().conj()
    }

    pub fn scale(&self, x: &QuadExt) -> Self {
        self.map(|e| e * x)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(QuadExt::is_zero)
    }

    /// True when every entry lies in `Q`.
    pub fn is_rational(&self) -> bool {
        self.data.iter().all(QuadExt::is_rational)
    }

    /// The `rows × cols` submatrix starting at `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols);
        let mut b = Self::zeros(self.ctx, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                b.set(i, j, self.get(r0 + i, c0 + j).clone());
            }
        }
        b
    }

    pub fn row(&self, i: usize) -> Self {
        self.block(i, 0, 1, self.cols)
    }

    pub fn col(&self, j: usize) -> Self {
        self.block(0, j, self.rows, 1)
    }

    /// Stack `parts` (all with the same column count) on top of each other.
    pub fn vstack(parts: &[EMat]) -> Result<Self> {
        let first = parts.first().ok_or_else(|| Error::ShapeMismatch("empty stack".into()))?;
        if parts.iter().any(|m| m.cols != first.cols) {
            return Err(Error::ShapeMismatch("column counts differ".into()));
        }
        let mut data = Vec::new();
        for m in parts {
            data.extend(m.data.iter().cloned());
        }
        Ok(Self { rows: parts.iter().map(|m| m.rows).sum(), cols: first.cols, ctx: first.ctx, data })
    }

    pub fn hstack(parts: &[EMat]) -> Result<Self> {
        let ts: Vec<EMat> = parts.iter().map(EMat::transpose).collect();
        Ok(Self::vstack(&ts)?.transpose())
    }

    /// Minimum of `ν` over all entries (`+∞` for the zero matrix).
    pub fn min_valuation(&self) -> Valuation {
        self.data.iter().map(|x| x.valuation(self.ctx.p)).min().unwrap_or(Valuation::Infinite)
    }

    pub fn is_integral(&self) -> bool {
        self.min_valuation().is_at_least(0)
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    fn check_square(&self) -> Result<()> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch(format!("{}x{} is not square", self.rows, self.cols)));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(Self { data, ..self.clone_shape() })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(Self { data, ..self.clone_shape() })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.ctx, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * out.cols + j;
                    out.data[idx] = &out.data[idx] + &(a * other.get(k, j));
                }
            }
        }
        Ok(out)
    }

    fn clone_shape(&self) -> Self {
        Self { rows: self.rows, cols: self.cols, ctx: self.ctx, data: Vec::new() }
    }

    /// `self + x·I`.
    pub fn add_scalar(&self, x: &QuadExt) -> Result<Self> {
        self.check_square()?;
        let mut m = self.clone();
        for i in 0..self.rows {
            m.set(i, i, self.get(i, i) + x);
        }
        Ok(m)
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        self.check_square()?;
        let mut acc = Self::identity(self.ctx, self.rows);
        for _ in 0..k {
            acc = acc.try_mul(self)?;
        }
        Ok(acc)
    }

    /// Row echelon form by Gaussian elimination; returns the reduced matrix,
    /// the pivot count and the sign of the row permutation.
    fn echelon(&self) -> (Self, usize, bool) {
        let mut m = self.clone();
        let mut rank = 0;
        let mut odd_swaps = false;
        for col in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let Some(piv) = (rank..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            if piv != rank {
                m.swap_rows(piv, rank);
                odd_swaps = !odd_swaps;
            }
            let inv = m.get(rank, col).inv().expect("nonzero pivot");
            for r in rank + 1..m.rows {
                let f = m.get(r, col) * &inv;
                if f.is_zero() {
                    continue;
                }
                for j in col..m.cols {
                    let v = m.get(r, j) - &(&f * m.get(rank, j));
                    m.set(r, j, v);
                }
            }
            rank += 1;
        }
        (m, rank, odd_swaps)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.echelon().1
    }

    pub fn det(&self) -> Result<QuadExt> {
        self.check_square()?;
        let (m, rank, odd) = self.echelon();
        if rank < self.rows {
            return Ok(self.ctx.zero());
        }
        let mut d = self.ctx.one();
        for i in 0..self.rows {
            d = &d * m.get(i, i);
        }
        Ok(if odd { -d } else { d })
    }

    /// Exact inverse by Gauss–Jordan elimination.
    pub fn inverse(&self) -> Result<Self> {
        self.check_square()?;
        let n = self.rows;
        let mut aug = Self::hstack(&[self.clone(), Self::identity(self.ctx, n)])?;
        for col in 0..n {
            let piv = (col..n)
                .find(|&r| !aug.get(r, col).is_zero())
                .ok_or_else(|| Error::Singular(format!("{n}x{n} matrix has no inverse")))?;
            aug.swap_rows(piv, col);
            let inv = aug.get(col, col).inv().expect("nonzero pivot");
            for j in 0..2 * n {
                let v = aug.get(col, j) * &inv;
                aug.set(col, j, v);
            }
            for r in 0..n {
                if r == col || aug.get(r, col).is_zero() {
                    continue;
                }
                let f = aug.get(r, col).clone();
                for j in 0..2 * n {
                    let v = aug.get(r, j) - &(&f * aug.get(col, j));
                    aug.set(r, j, v);
                }
            }
        }
        Ok(aug.block(0, n, n, n))
    }

    /// Coefficients `[c_0, …, c_{n−1}]` of `det(tI − X) = tⁿ + c_{n−1}t^{n−1} + … + c_0`,
    /// by Faddeev–LeVerrier.
    pub fn charpoly(&self) -> Result<Vec<QuadExt>> {
        self.check_square()?;
        let n = self.rows;
        let mut coeffs = vec![self.ctx.zero(); n];
        let mut m = Self::zeros(self.ctx, n, n);
        let mut c_prev = self.ctx.one();
        for k in 1..=n {
            m = self.try_mul(&m)?.add_scalar(&c_prev)?;
            let am = self.try_mul(&m)?;
            let tr = (0..n).fold(self.ctx.zero(), |acc, i| &acc + am.get(i, i));
            let ck = -tr.scale(&Rat::new(1.into(), (k as i64).into()));
            coeffs[n - k] = ck.clone();
            c_prev = ck;
        }
        Ok(coeffs)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&self.to_wire()?)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let wire: EMatWire = serde_json::from_str(s)?;
        Self::from_wire(wire)
    }

    fn to_wire(&self) -> Result<EMatWire> {
        let small = |x: &BigInt| {
            x.to_i64()
                .ok_or_else(|| Error::Unsupported(format!("entry component {x} exceeds 64 bits")))
        };
        let mut entries = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut row = Vec::with_capacity(self.cols);
            for j in 0..self.cols {
                let x = self.get(i, j);
                row.push([small(x.a.numer())?, small(x.a.denom())?, small(x.b.numer())?, small(x.b.denom())?]);
            }
            entries.push(row);
        }
        Ok(EMatWire { p: self.ctx.p, u: self.ctx.u, entries })
    }

    fn from_wire(w: EMatWire) -> Result<Self> {
        let ctx = FieldCtx::new(w.p, w.u)?;
        let mut rows = Vec::with_capacity(w.entries.len());
        for row in w.entries {
            let mut out = Vec::with_capacity(row.len());
            for [an, ad, bn, bd] in row {
                if ad == 0 || bd == 0 {
                    return Err(Error::InvalidArgument("zero denominator in matrix literal".into()));
                }
                out.push(ctx.elem(Rat::new(an.into(), ad.into()), Rat::new(bn.into(), bd.into())));
            }
            rows.push(out);
        }
        Self::from_rows(ctx, rows)
    }
}

#[derive(Serialize, Deserialize)]
struct EMatWire {
    p: u64,
    u: i64,
    entries: Vec<Vec<[i64; 4]>>,
}

impl fmt::Display for EMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

macro_rules! matrix_op {
    ($tr:ident, $f:ident, $try:ident) => {
        impl<'a> $tr<&'a EMat> for &'a EMat {
            type Output = EMat;
            fn $f(self, rhs: &EMat) -> EMat {
                self.$try(rhs).expect("shape mismatch")
            }
        }
        impl $tr<EMat> for EMat {
            type Output = EMat;
            fn $f(self, rhs: EMat) -> EMat {
                (&self).$try(&rhs).expect("shape mismatch")
            }
        }
    };
}
matrix_op!(Add, add, try_add);
matrix_op!(Sub, sub, try_sub);
matrix_op!(Mul, mul, try_mul);

impl Neg for &EMat {
    type Output = EMat;
    fn neg(self) -> EMat {
        self.map(|x| -x)
    }
}

/// Small helper for literals: `a + b√u` from integer coordinates.
pub fn qe(ctx: FieldCtx, a: i64, b: i64) -> QuadExt {
    ctx.elem(crate::numerics::rat_int(a), crate::numerics::rat_int(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rat;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ctx() -> FieldCtx {
        FieldCtx::new(3, -1).unwrap()
    }

    fn random_mat(rng: &mut ChaCha8Rng, n: usize) -> EMat {
        let c = ctx();
        let rows = (0..n)
            .map(|_| (0..n).map(|_| qe(c, rng.random_range(-5..=5), rng.random_range(-5..=5))).collect())
            .collect();
        EMat::from_rows(c, rows).unwrap()
    }

    // Cofactor expansion, independent of the elimination code.
    fn det_laplace(m: &EMat) -> QuadExt {
        let n = m.rows();
        if n == 0 {
            return m.ctx().one();
        }
        let mut acc = m.ctx().zero();
        for j in 0..n {
            let minor_rows: Vec<Vec<QuadExt>> = (1..n)
                .map(|i| (0..n).filter(|&k| k != j).map(|k| m.get(i, k).clone()).collect())
                .collect();
            let minor = if n == 1 { EMat::zeros(m.ctx(), 0, 0) } else { EMat::from_rows(m.ctx(), minor_rows).unwrap() };
            let term = m.get(0, j) * &det_laplace(&minor);
            acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        acc
    }

    #[test]
    fn det_matches_laplace() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 1..=4 {
            for _ in 0..10 {
                let m = random_mat(&mut rng, n);
                assert_eq!(m.det().unwrap(), det_laplace(&m));
            }
        }
    }

    #[test]
    fn det_is_multiplicative_and_inverse_works() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let a = random_mat(&mut rng, 3);
            let b = random_mat(&mut rng, 3);
            assert_eq!((&a * &b).det().unwrap(), &a.det().unwrap() * &b.det().unwrap());
            if !a.det().unwrap().is_zero() {
                let ai = a.inverse().unwrap();
                assert_eq!(&a * &ai, EMat::identity(ctx(), 3));
            }
        }
    }

    #[test]
    fn singular_inverse_errors() {
        let m = EMat::from_ints(ctx(), &[&[1, 2], &[2, 4]]).unwrap();
        assert!(matches!(m.inverse(), Err(Error::Singular(_))));
        assert_eq!(m.rank(), 1);
        assert!(m.det().unwrap().is_zero());
    }

    #[test]
    fn charpoly_cayley_hamilton() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..=4 {
            let x = random_mat(&mut rng, n);
            let cp = x.charpoly().unwrap();
            let mut acc = x.pow(n as u32).unwrap();
            for (k, ck) in cp.iter().enumerate() {
                acc = acc + x.pow(k as u32).unwrap().scale(ck);
            }
            assert!(acc.is_zero());
            let c0 = if n % 2 == 0 { x.det().unwrap() } else { -x.det().unwrap() };
            assert_eq!(cp[0], c0);
        }
    }

    #[test]
    fn json_round_trip() {
        let c = ctx();
        let m = EMat::from_rows(
            c,
            vec![vec![c.elem(rat(1, 2), rat(-3, 1)), c.zero()], vec![c.sqrt_u(), c.int(7)]],
        )
        .unwrap();
        let s = m.to_json().unwrap();
        assert!(s.contains("[1,2,-3,1]"));
        assert_eq!(EMat::from_json(&s).unwrap(), m);
        assert!(EMat::from_json(r#"{"p":3,"u":-1,"entries":[[[1,0,0,1]]]}"#).is_err());
        assert!(EMat::from_json(r#"{"p":3,"u":-1,"entries":[[[1,1,0,1]],[]]}"#).is_err());
    }

    #[test]
    fn shape_errors() {
        let a = EMat::zeros(ctx(), 2, 3);
        let b = EMat::zeros(ctx(), 2, 2);
        assert!(a.try_add(&b).is_err());
        assert!(b.try_mul(&a).is_ok());
        assert!(a.try_mul(&b).is_err());
        assert!(a.det().is_err());
    }
}
