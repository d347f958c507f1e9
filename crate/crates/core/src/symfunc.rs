//! Dominant weights, Laurent–Schur polynomials and the generating-function
//! identities used by the period computations.
//!
//! Two independent evaluators of `s_λ` are provided: the bialternant
//! `det(α_i^{λ_j+m−j}) / det(α_i^{m−j})` and the Jacobi–Trudi determinant in
//! complete homogeneous symmetric polynomials. [`schur`] dispatches to the
//! latter when parameters (nearly) coincide and the bialternant is 0/0.

use nalgebra::DMatrix;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{rat_pow, CNum, Rat};

/// Parameters closer than this (relative to their size) are evaluated by
/// Jacobi–Trudi.
pub const COINCIDENCE_SPREAD: f64 = 1e-6;

/// A weakly decreasing integer tuple `λ_1 ≥ … ≥ λ_m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DomWeight {
    parts: Vec<i64>,
}

impl DomWeight {
    pub fn new(parts: Vec<i64>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidArgument("a dominant weight needs m >= 1 parts".into()));
        }
        if !is_dominant(&parts) {
            return Err(Error::InvalidArgument(format!("{parts:?} is not weakly decreasing")));
        }
        Ok(Self { parts })
    }

    pub fn parts(&self) -> &[i64] {
        &self.parts
    }

    pub fn rank(&self) -> usize {
        self.parts.len()
    }

    pub fn size(&self) -> i64 {
        self.parts.iter().sum()
    }

    /// `λ + k·(1, …, 1)`.
    pub fn shifted(&self, k: i64) -> Self {
        Self { parts: self.parts.iter().map(|x| x + k).collect() }
    }
}

pub fn is_dominant(parts: &[i64]) -> bool {
    parts.windows(2).all(|w| w[0] >= w[1])
}

/// All weakly decreasing tuples of length `len` with entries in `[lo, hi]`,
/// in lexicographic order.
pub fn dominant_weights(len: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    fn rec(len: usize, lo: i64, hi: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        let top = cur.last().copied().unwrap_or(hi);
        for v in lo..=top {
            cur.push(v);
            rec(len, lo, hi, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if lo <= hi || len == 0 {
        rec(len, lo, hi, &mut Vec::with_capacity(len), &mut out);
    }
    out
}

pub(crate) fn complex_det(m: &DMatrix<CNum>) -> CNum {
    match m.nrows() {
        0 => CNum::one(),
        1 => m[(0, 0)],
        2 => m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)],
        _ => m.clone().determinant(),
    }
}

fn min_spread(alpha: &[CNum]) -> f64 {
    let mut spread = f64::INFINITY;
    for i in 0..alpha.len() {
        for j in i + 1..alpha.len() {
            spread = spread.min((alpha[i] - alpha[j]).norm());
        }
    }
    spread
}

fn split_central(lambda: &[i64], alpha: &[CNum]) -> Result<(CNum, Vec<i64>)> {
    if lambda.len() != alpha.len() {
        return Err(Error::ShapeMismatch(format!(
            "weight of length {} against {} parameters",
            lambda.len(),
            alpha.len()
        )));
    }
    if !is_dominant(lambda) {
        return Err(Error::InvalidArgument(format!("{lambda:?} is not weakly decreasing")));
    }
    let shift = lambda.last().copied().unwrap_or(0);
    let central = if shift == 0 {
        CNum::one()
    } else {
        let det: CNum = alpha.iter().product();
        if shift < 0 && det.is_zero() {
            return Err(Error::InvalidArgument(
                "negative weights need nonzero parameters".into(),
            ));
        }
        det.powi(shift as i32)
    };
    Ok((central, lambda.iter().map(|x| x - shift).collect()))
}

/// Bialternant formula; requires pairwise distinct parameters.
pub fn schur_bialternant(lambda: &[i64], alpha: &[CNum]) -> Result<CNum> {
    let (central, mu) = split_central(lambda, alpha)?;
    let m = alpha.len();
    let vandermonde: CNum = (0..m)
        .flat_map(|i| (i + 1..m).map(move |j| (i, j)))
        .map(|(i, j)| alpha[i] - alpha[j])
        .product();
    if vandermonde.is_zero() {
        return Err(Error::InvalidArgument("bialternant denominator vanishes".into()));
    }
    let numer = DMatrix::from_fn(m, m, |i, j| alpha[i].powi((mu[j] + (m - 1 - j) as i64) as i32));
    Ok(central * complex_det(&numer) / vandermonde)
}

/// `h_0, …, h_k` of the given parameters.
pub fn complete_homogeneous(k: usize, alpha: &[CNum]) -> Vec<CNum> {
    let mut h = vec![CNum::zero(); k + 1];
    h[0] = CNum::one();
    for &a in alpha {
        for d in 1..=k {
            let prev = h[d - 1];
            h[d] += a * prev;
        }
    }
    h
}

/// Jacobi–Trudi formula `det(h_{λ_i − i + j})`; valid for any parameters.
pub fn schur_jacobi_trudi(lambda: &[i64], alpha: &[CNum]) -> Result<CNum> {
    let (central, mu) = split_central(lambda, alpha)?;
    let len = mu.iter().take_while(|&&x| x > 0).count();
    if len == 0 {
        return Ok(central);
    }
    let h = complete_homogeneous((mu[0] as usize) + len, alpha);
    let entry = |i: usize, j: usize| {
        let idx = mu[i] - i as i64 + j as i64;
        if idx < 0 {
            CNum::zero()
        } else {
            h[idx as usize]
        }
    };
    Ok(central * complex_det(&DMatrix::from_fn(len, len, entry)))
}

/// Laurent–Schur polynomial `s_λ(α)` for a dominant weight of length `m`.
pub fn schur(lambda: &[i64], alpha: &[CNum]) -> Result<CNum> {
    let scale = alpha.iter().map(|a| a.norm()).fold(1.0f64, f64::max);
    if alpha.len() > 1 && min_spread(alpha) <= COINCIDENCE_SPREAD * scale {
        schur_jacobi_trudi(lambda, alpha)
    } else {
        schur_bialternant(lambda, alpha)
    }
}

/// `s_λ` where `λ` may be shorter than the parameter list; missing parts are 0.
pub(crate) fn schur_padded(lambda: &[i64], alpha: &[CNum]) -> Result<CNum> {
    if lambda.len() > alpha.len() {
        let (head, tail) = lambda.split_at(alpha.len());
        if tail.iter().any(|&x| x != 0) {
            return Ok(CNum::zero());
        }
        return schur(head, alpha);
    }
    let mut padded = lambda.to_vec();
    padded.resize(alpha.len(), 0);
    if !is_dominant(&padded) {
        return Ok(CNum::zero());
    }
    schur(&padded, alpha)
}

/// An exact power `q^{k/2}` with `k = twice_exponent`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QPower {
    pub base: u64,
    pub twice_exponent: i64,
}

impl QPower {
    pub fn to_rat(self) -> Option<Rat> {
        (self.twice_exponent % 2 == 0).then(|| rat_pow(self.base, self.twice_exponent / 2))
    }

    pub fn to_f64(self) -> f64 {
        (self.base as f64).powf(self.twice_exponent as f64 / 2.0)
    }

    pub fn is_one(self) -> bool {
        self.twice_exponent == 0
    }
}

/// Exponent `e` with `δ_m(ϖ^λ) = q^e`, i.e. `e = −Σ_i λ_i (m + 1 − 2i)`.
pub fn delta_exponent(lambda: &[i64]) -> i64 {
    let m = lambda.len() as i64;
    -lambda
        .iter()
        .enumerate()
        .map(|(i, &l)| l * (m + 1 - 2 * (i as i64 + 1)))
        .sum::<i64>()
}

/// Modular character `δ_m(ϖ^λ)` of the upper Borel, or its square root when
/// `half` is set.
pub fn delta_weight(lambda: &[i64], q: u64, half: bool) -> QPower {
    let e = delta_exponent(lambda);
    QPower { base: q, twice_exponent: if half { e } else { 2 * e } }
}

fn check_convergent(x: &[CNum]) -> Result<()> {
    if let Some(bad) = x.iter().find(|z| z.norm() >= 1.0) {
        return Err(Error::Divergence(format!("|x_i| = {} >= 1", bad.norm())));
    }
    Ok(())
}

/// `Σ s_λ(x)` over partitions with at most `len(x)` parts and `λ_1 ≤ depth`.
pub fn macdonald_sum(x: &[CNum], depth: u32) -> Result<CNum> {
    check_convergent(x)?;
    if x.is_empty() {
        return Ok(CNum::one());
    }
    let mut total = CNum::zero();
    for lambda in dominant_weights(x.len(), 0, depth as i64) {
        total += schur(&lambda, x)?;
    }
    Ok(total)
}

/// `Π_i (1 − x_i)^{-1} Π_{i<j} (1 − x_i x_j)^{-1}`.
pub fn macdonald_closed(x: &[CNum]) -> Result<CNum> {
    check_convergent(x)?;
    let mut value = CNum::one();
    for (i, &xi) in x.iter().enumerate() {
        value /= CNum::one() - xi;
        for &xj in &x[i + 1..] {
            value /= CNum::one() - xi * xj;
        }
    }
    Ok(value)
}

/// Truncated Cauchy sum `Σ_{λ_1 ≤ depth} s_λ(x) s_λ(y)` over partitions of
/// length at most `min(len x, len y)`.
pub fn cauchy_sum(x: &[CNum], y: &[CNum], depth: u32) -> Result<CNum> {
    check_convergent(x)?;
    check_convergent(y)?;
    let len = x.len().min(y.len());
    let mut total = CNum::zero();
    for lambda in dominant_weights(len, 0, depth as i64) {
        total += schur_padded(&lambda, x)? * schur_padded(&lambda, y)?;
    }
    Ok(total)
}

/// `Π_{i,j} (1 − x_i y_j)^{-1}`.
pub fn cauchy_closed(x: &[CNum], y: &[CNum]) -> CNum {
    x.iter()
        .flat_map(|&a| y.iter().map(move |&b| CNum::one() - a * b))
        .fold(CNum::one(), |acc, f| acc / f)
}
