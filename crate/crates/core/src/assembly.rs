//! The local factor of `J_π(1_{K^c})`: closed and assembled forms of
//! `I_σ(1_{K'^c})`, the main-theorem expression, and the bridge between them.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::lfactors::{asai_lfactor, asai_sign, pair_dual_lfactor, rs_lfactor};
use crate::numerics::{rat_to_f64, CNum, Rat};
use crate::periods::{beta_truncated, lambda_truncated, TruncationCfg};
use crate::reps::{unramified_part, GenericRep, SatakeSet};
use crate::volumes::{c1, constant_c, l_eta, vol_gl, vol_gl_literal, vol_kprime_c};

/// Arithmetic and spectral data `(n, c, ε, q_F, σ_n, σ_{n+1})`.
#[derive(Clone, Debug, PartialEq)]
pub struct PairData {
    pub n: usize,
    pub c: u32,
    pub eps: u8,
    pub q_f: u64,
    pub sigma_n: SatakeSet,
    pub rep: GenericRep,
}

impl PairData {
    /// Checks `σ_n` has rank `n ≥ 1` over `q_F²`, `rep` has rank `n + 1` and
    /// conductor `c ≥ 1`, `q_F > n`, `ε ∈ {0, 1}`.
    pub fn new(sigma_n: SatakeSet, rep: GenericRep, q_f: u64, eps: u8) -> Result<Self> {
        let n = sigma_n.rank();
        if n == 0 {
            return Err(Error::InvalidArgument("need n >= 1".into()));
        }
        if q_f < 3 || q_f as usize <= n {
            return Err(Error::InvalidArgument(format!("need q_F >= 3 and q_F > n (q_F = {q_f}, n = {n})")));
        }
        if sigma_n.base() != q_f * q_f {
            return Err(Error::InvalidArgument("σ_n must be given over q_E = q_F^2".into()));
        }
        if rep.rank() != n + 1 {
            return Err(Error::ShapeMismatch(format!("rep has rank {}, expected {}", rep.rank(), n + 1)));
        }
        if eps > 1 {
            return Err(Error::InvalidArgument(format!("ε must be 0 or 1, got {eps}")));
        }
        let c = rep.conductor();
        if c == 0 {
            return Err(Error::RejectedInput("σ_{n+1} must be ramified (conductor c >= 1)".into()));
        }
        Ok(Self { n, c, eps, q_f, sigma_n, rep })
    }

    pub fn q_e(&self) -> u64 {
        self.q_f * self.q_f
    }

    pub fn sigma_u(&self) -> SatakeSet {
        unramified_part(&self.rep, self.q_e()).expect("validated base").1
    }

    pub fn parity_ok(&self) -> bool {
        self.c % 2 == u32::from(self.eps)
    }
}

/// The L-values entering the closed forms, all at their evaluation points.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LValues {
    /// `L(1/2, σ_n × σ_{n+1}) = L(1/2, σ_n × σ_u)`.
    pub rs_half: CNum,
    /// `L(1, σ_n, As^{(−1)^{n−1}})`.
    pub asai_n_prev: CNum,
    /// `L(1, σ_n, As^{(−1)^n})`.
    pub asai_n: CNum,
    /// `L(1, σ_u, As^{(−1)^n})`.
    pub asai_u: CNum,
    /// `L(1, σ_u, As^{(−1)^{n+1}})`.
    pub asai_u_next: CNum,
    /// `L(1, σ_n × σ̄_n)`.
    pub pair_n: CNum,
    /// `L(1, σ_u × σ̄_u)`.
    pub pair_u: CNum,
}

pub fn l_values(d: &PairData) -> Result<LValues> {
    let su = d.sigma_u();
    let s = &d.sigma_n;
    let n = d.n;
    Ok(LValues {
        rs_half: rs_lfactor(s, &su)?.eval_real(0.5)?,
        asai_n_prev: asai_lfactor(s, asai_sign(n - 1))?.eval_real(1.0)?,
        asai_n: asai_lfactor(s, asai_sign(n))?.eval_real(1.0)?,
        asai_u: asai_lfactor(&su, asai_sign(n))?.eval_real(1.0)?,
        asai_u_next: asai_lfactor(&su, asai_sign(n + 1))?.eval_real(1.0)?,
        pair_n: pair_dual_lfactor(s)?.eval_real(1.0)?,
        pair_u: pair_dual_lfactor(&su)?.eval_real(1.0)?,
    })
}

/// `vol(K'_n) vol(K'^c_{n+1}) vol(GL_{n−1}(O_F)) vol(GL_n(O_F)) / vol(GL_{n−1}(O_E))`.
pub fn i_volume_prefactor(d: &PairData) -> Result<Rat> {
    let (n, q_f, q_e) = (d.n as u32, d.q_f, d.q_e());
    Ok(vol_gl(n, q_e) * vol_kprime_c(n, d.c, q_e)? * vol_gl_literal(n - 1, q_f) * vol_gl(n, q_f)
        / vol_gl_literal(n - 1, q_e))
}

/// Closed form of `I_σ(1_{K'^c})`.
pub fn i_closed(d: &PairData) -> Result<CNum> {
    let l = l_values(d)?;
    let pre = rat_to_f64(&i_volume_prefactor(d)?);
    Ok(l.rs_half * l.asai_n_prev.conj() * l.asai_u.conj() / (l.pair_n * l.pair_u) * pre)
}

/// Component-wise assembly `vol(K'^c) |c_n|² |c_{n+1}|² λ conj(β°_n β°_{n+1})`
/// with `λ` and `β°_{n+1}` from truncated sums, `β°_n` and `|c_k|^{−2}` from
/// their closed forms.
pub fn i_assembled(d: &PairData, trunc: TruncationCfg) -> Result<CNum> {
    let (n, q_f, q_e) = (d.n as u32, d.q_f, d.q_e());
    let su = d.sigma_u();
    let vol_k = rat_to_f64(&(vol_gl(n, q_e) * vol_kprime_c(n, d.c, q_e)?));
    let cn_inv = pair_dual_lfactor(&d.sigma_n)?.eval_real(1.0)? * rat_to_f64(&vol_gl_literal(n - 1, q_e));
    let cn1_inv = pair_dual_lfactor(&su)?.eval_real(1.0)? * rat_to_f64(&vol_gl(n, q_e));
    let lambda = lambda_truncated(&d.sigma_n, &d.rep, trunc)?.value;
    let beta_n = asai_lfactor(&d.sigma_n, asai_sign(d.n - 1))?.eval_real(1.0)? * rat_to_f64(&vol_gl_literal(n - 1, q_f));
    let beta_n1 = beta_truncated(&d.rep, q_f, trunc)?.value;
    Ok(lambda * (beta_n * beta_n1).conj() * vol_k / (cn_inv * cn1_inv))
}

/// Breakdown of the main-theorem expression.
#[derive(Clone, Debug, PartialEq)]
pub struct JMain {
    pub constant: Rat,
    pub rs_half: CNum,
    pub asai_n: CNum,
    pub asai_u_next: CNum,
    pub value: CNum,
}

/// `C L(1/2, σ_n × σ_{n+1}) / (L(1, σ_n, As^{(−1)^n}) L(1, σ_u, As^{(−1)^{n+1}}))`.
pub fn j_main_breakdown(d: &PairData) -> Result<JMain> {
    if !d.parity_ok() {
        return Err(Error::RejectedInput(format!("c = {} and ε = {} have different parity", d.c, d.eps)));
    }
    let constant = constant_c(d.n as u32, d.c, d.q_f)?;
    let l = l_values(d)?;
    let value = l.rs_half / (l.asai_n * l.asai_u_next) * rat_to_f64(&constant);
    Ok(JMain { constant, rs_half: l.rs_half, asai_n: l.asai_n, asai_u_next: l.asai_u_next, value })
}

pub fn j_main(d: &PairData) -> Result<CNum> {
    Ok(j_main_breakdown(d)?.value)
}

/// `L(1, η) c₁ I_closed`.
pub fn j_via_bridge(d: &PairData) -> Result<CNum> {
    let (c1_value, _) = c1(d.n as u32, d.c, d.q_f)?;
    Ok(i_closed(d)? * rat_to_f64(&(l_eta(d.q_f) * c1_value)))
}

/// `⟨φ, φ⟩ J(1_{K^c})` for a newform of Petersson norm `norm`.
pub fn alpha_newform(norm: CNum, d: &PairData) -> Result<CNum> {
    if !(norm.im.is_zero() && norm.re > 0.0) {
        return Err(Error::InvalidArgument(format!("norm must be real and positive, got {norm}")));
    }
    Ok(j_main(d)? * norm.re)
}
