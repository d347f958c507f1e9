//! Truncated Iwasawa sums for the local periods β, θ and λ and their closed
//! forms.
//!
//! Every integral goes through [`iwasawa_sum`]:
//! `∫_{N\GL_m} φ = vol(GL_m(O)) Σ_f δ_m^{−1}(ϖ^f) φ(ϖ^f)`.

use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lfactors::{asai_lfactor, asai_sign, pair_dual_lfactor, rs_lfactor};
use crate::numerics::{check_finite, rat_to_f64, CNum};
use crate::reps::{unramified_part, GenericRep, SatakeSet};
use crate::symfunc::{delta_weight, dominant_weights};
use crate::volumes::vol_gl;
use crate::whittaker::{essential_value, spherical_value};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TruncationCfg {
    /// Largest `|f_i|` summed.
    pub depth: u32,
    pub tail_tol: f64,
}

impl TruncationCfg {
    pub fn new(depth: u32, tail_tol: f64) -> Result<Self> {
        if depth == 0 {
            return Err(Error::InvalidArgument("truncation depth must be >= 1".into()));
        }
        Ok(Self { depth, tail_tol })
    }
}

impl Default for TruncationCfg {
    fn default() -> Self {
        Self { depth: 40, tail_tol: 1e-10 }
    }
}

/// A truncated sum with an estimate of the neglected tail.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Truncated {
    pub value: CNum,
    pub tail_estimate: f64,
}

/// Which lattice points [`iwasawa_sum`] visits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Enumeration {
    /// Weakly decreasing `f` only; exact for integrands supported there.
    Dominant,
    /// All of `[−D, D]^m`.
    FullBox,
}

fn box_points(m: usize, depth: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..m {
        out = out
            .into_iter()
            .flat_map(|v| {
                (-depth..=depth).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

/// `vol(GL_m(O)) Σ_{|f_i| ≤ D} δ_m^{−1}(ϖ^f) φ(f)` with `δ` in base `q`.
///
/// Shells `max |f_i| = s` are summed independently and accumulated in
/// increasing `s`, so the result does not depend on the thread schedule. The
/// tail estimate is the absolute mass of the outermost shell times
/// `1/(1 − q^{−1/2})`.
pub fn iwasawa_sum<F>(m: usize, q: u64, trunc: TruncationCfg, mode: Enumeration, phi: F) -> Result<Truncated>
where
    F: Fn(&[i64]) -> Result<CNum> + Sync,
{
    let depth = trunc.depth as i64;
    let points = match mode {
        Enumeration::Dominant => dominant_weights(m, -depth, depth),
        Enumeration::FullBox => box_points(m, depth),
    };
    let mut shells: Vec<Vec<Vec<i64>>> = vec![Vec::new(); trunc.depth as usize + 1];
    for f in points {
        let s = f.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0) as usize;
        shells[s].push(f);
    }
    let sums: Vec<(CNum, f64)> = shells
        .par_iter()
        .map(|shell| {
            let mut total = CNum::zero();
            let mut mass = 0.0;
            for f in shell {
                let inv_delta = delta_weight(f, q, false).to_f64().recip();
                let term = phi(f)? * inv_delta;
                total += term;
                mass += term.norm();
            }
            Ok((total, mass))
        })
        .collect::<Result<_>>()?;
    let value = sums.iter().fold(CNum::zero(), |acc, (s, _)| acc + s);
    let vol = rat_to_f64(&vol_gl(m as u32, q));
    let outer = sums.last().map_or(0.0, |s| s.1);
    let tail = vol * outer / (1.0 - (q as f64).powf(-0.5));
    Ok(Truncated { value: check_finite(value * vol, "Iwasawa sum")?, tail_estimate: tail })
}

fn parity_sign(f: &[i64], n: usize) -> f64 {
    if (n as i64 * f.iter().sum::<i64>()) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn require_ramified(rep: &GenericRep) -> Result<usize> {
    if rep.is_unramified() {
        return Err(Error::RejectedInput("unramified representation; use the spherical variant".into()));
    }
    if rep.rank() < 2 {
        return Err(Error::InvalidArgument("need rank n+1 >= 2".into()));
    }
    Ok(rep.rank() - 1)
}

/// β of the essential vector of a ramified rep of `GL_{n+1}(E)`.
pub fn beta_truncated(rep: &GenericRep, q_f: u64, trunc: TruncationCfg) -> Result<Truncated> {
    let n = require_ramified(rep)?;
    let q_e = q_f * q_f;
    iwasawa_sum(n, q_f, trunc, Enumeration::Dominant, |f| {
        Ok(essential_value(rep, f, q_e)? * parity_sign(f, n))
    })
}

/// `vol(GL_n(O_F)) L(1, σ_u, As^{(−1)^n})`.
pub fn beta_closed(rep: &GenericRep, q_f: u64) -> Result<CNum> {
    let n = require_ramified(rep)?;
    let (_, sigma_u) = unramified_part(rep, q_f * q_f)?;
    Ok(asai_lfactor(&sigma_u, asai_sign(n))?.eval_real(1.0)? * vol_gl_f64(n, q_f))
}

fn check_base(sigma: &SatakeSet, q_f: u64) -> Result<()> {
    if sigma.base() != q_f * q_f {
        return Err(Error::InvalidArgument(format!(
            "Satake set over q = {} but q_F^2 = {}",
            sigma.base(),
            q_f * q_f
        )));
    }
    if sigma.is_empty() {
        return Err(Error::InvalidArgument("need n >= 1".into()));
    }
    Ok(())
}

/// β of the spherical vector of an unramified rep of `GL_n(E)`.
pub fn beta_spherical_truncated(sigma: &SatakeSet, q_f: u64, trunc: TruncationCfg) -> Result<Truncated> {
    check_base(sigma, q_f)?;
    let n = sigma.rank();
    iwasawa_sum(n - 1, q_f, trunc, Enumeration::Dominant, |f| {
        let mut full = f.to_vec();
        full.push(0);
        Ok(spherical_value(sigma, &full)? * parity_sign(f, n - 1))
    })
}

/// `vol(GL_{n−1}(O_F)) L(1, σ_n, As^{(−1)^{n−1}})`.
pub fn beta_spherical_closed(sigma: &SatakeSet, q_f: u64) -> Result<CNum> {
    check_base(sigma, q_f)?;
    let n = sigma.rank();
    Ok(asai_lfactor(sigma, asai_sign(n - 1))?.eval_real(1.0)? * vol_gl_f64(n - 1, q_f))
}

/// θ, the Whittaker norm of the spherical vector of `GL_k(E)`.
pub fn theta_truncated(sigma: &SatakeSet, trunc: TruncationCfg) -> Result<Truncated> {
    let k = sigma.rank();
    if k == 0 {
        return Err(Error::InvalidArgument("need k >= 1".into()));
    }
    iwasawa_sum(k - 1, sigma.base(), trunc, Enumeration::Dominant, |f| {
        let mut full = f.to_vec();
        full.push(0);
        Ok(CNum::new(spherical_value(sigma, &full)?.norm_sqr(), 0.0))
    })
}

/// `vol(GL_{k−1}(O_E)) L(1, σ × σ̄)`.
pub fn theta_closed(sigma: &SatakeSet) -> Result<CNum> {
    let k = sigma.rank();
    if k == 0 {
        return Err(Error::InvalidArgument("need k >= 1".into()));
    }
    Ok(pair_dual_lfactor(sigma)?.eval_real(1.0)? * vol_gl_f64(k - 1, sigma.base()))
}

/// The Rankin–Selberg period λ(s) against the spherical vector of `σ_n` and
/// the essential (or spherical, if unramified) vector of `rep`.
pub fn lambda_truncated_at(sigma: &SatakeSet, rep: &GenericRep, s: f64, trunc: TruncationCfg) -> Result<Truncated> {
    let n = sigma.rank();
    let q_e = sigma.base();
    if rep.rank() != n + 1 {
        return Err(Error::ShapeMismatch(format!("σ_n of rank {n} against a rep of rank {}", rep.rank())));
    }
    let det_weight = |f: &[i64]| (q_e as f64).powf(-s * f.iter().sum::<i64>() as f64);
    if rep.is_unramified() {
        let (_, big) = unramified_part(rep, q_e)?;
        iwasawa_sum(n, q_e, trunc, Enumeration::Dominant, |f| {
            let mut full = f.to_vec();
            full.push(0);
            Ok(spherical_value(sigma, f)? * spherical_value(&big, &full)? * det_weight(f))
        })
    } else {
        iwasawa_sum(n, q_e, trunc, Enumeration::Dominant, |f| {
            Ok(spherical_value(sigma, f)? * essential_value(rep, f, q_e)? * det_weight(f))
        })
    }
}

/// λ at `s = 0`.
pub fn lambda_truncated(sigma: &SatakeSet, rep: &GenericRep, trunc: TruncationCfg) -> Result<Truncated> {
    lambda_truncated_at(sigma, rep, 0.0, trunc)
}

/// `vol(GL_n(O_E)) L(1/2, σ_n × σ_u)`.
pub fn lambda_closed(sigma: &SatakeSet, rep: &GenericRep) -> Result<CNum> {
    let (_, sigma_u) = unramified_part(rep, sigma.base())?;
    let l = rs_lfactor(sigma, &sigma_u)?.eval_real(0.5)?;
    Ok(l * vol_gl_f64(sigma.rank(), sigma.base()))
}

pub fn vol_gl_f64(m: usize, q: u64) -> f64 {
    rat_to_f64(&vol_gl(m as u32, q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reps::Segment;
    use num_traits::One;

    fn unit(t: f64) -> CNum {
        CNum::from_polar(1.0, t)
    }

    fn trunc(d: u32) -> TruncationCfg {
        TruncationCfg::new(d, 1e-12).unwrap()
    }

    fn rep(alpha: &[CNum], ram: usize) -> GenericRep {
        let mut segs: Vec<Segment> = alpha.iter().map(|&a| Segment::unram(a, 1).unwrap()).collect();
        segs.extend((0..ram).map(|_| Segment::ram(1, 1, 1).unwrap()));
        GenericRep::new(segs).unwrap()
    }

    fn close(a: CNum, b: CNum, tol: f64) -> bool {
        (a - b).norm() <= tol * b.norm().max(1.0)
    }

    #[test]
    fn beta_examples() {
        let r = rep(&[CNum::one()], 1);
        let t = beta_truncated(&r, 3, trunc(60)).unwrap();
        assert!(close(t.value, CNum::new(0.75, 0.0), 1e-12));
        assert!(close(beta_closed(&r, 3).unwrap(), CNum::new(0.75, 0.0), 1e-14));
        let a = unit(1.3);
        let r = rep(&[a], 1);
        let expect = (CNum::one() + a / 3.0).inv();
        assert!(close(beta_truncated(&r, 3, trunc(60)).unwrap().value, expect, 1e-12));
        let r = rep(&[], 3);
        assert!(close(beta_truncated(&r, 3, trunc(5)).unwrap().value, CNum::new(8.0 / 9.0, 0.0), 1e-14));
        let r = rep(&[CNum::new(0.0, 1.0), CNum::new(0.0, -1.0)], 1);
        assert!(close(beta_closed(&r, 3).unwrap(), CNum::new(0.9, 0.0), 1e-14));
        assert!(beta_truncated(&rep(&[CNum::one(), CNum::one()], 0), 3, trunc(5)).is_err());
    }

    #[test]
    fn beta_spherical_examples() {
        let s = SatakeSet::new(vec![unit(0.4)], 9).unwrap();
        assert_eq!(beta_spherical_truncated(&s, 3, trunc(5)).unwrap().value, CNum::one());
        let a = unit(0.7);
        let s = SatakeSet::new(vec![a, a.conj()], 25).unwrap();
        let expect = ((CNum::one() + a / 5.0) * (CNum::one() + a.conj() / 5.0)).inv();
        assert!(close(beta_spherical_truncated(&s, 5, trunc(60)).unwrap().value, expect, 1e-12));
        let s = SatakeSet::new(vec![CNum::one(), CNum::one()], 9).unwrap();
        assert!(close(beta_spherical_truncated(&s, 3, trunc(60)).unwrap().value, CNum::new(9.0 / 16.0, 0.0), 1e-12));
    }

    #[test]
    fn theta_examples() {
        let s = SatakeSet::new(vec![unit(0.4)], 9).unwrap();
        assert_eq!(theta_truncated(&s, trunc(5)).unwrap().value, CNum::one());
        let s = SatakeSet::new(vec![CNum::one(), CNum::one()], 4).unwrap();
        assert!(close(theta_truncated(&s, trunc(80)).unwrap().value, CNum::new(80.0 / 27.0, 0.0), 1e-12));
        let s = SatakeSet::new(vec![CNum::new(0.0, 1.0), CNum::new(0.0, -1.0)], 9).unwrap();
        let lhs = theta_truncated(&s, trunc(60)).unwrap().value;
        let l = pair_dual_lfactor(&s).unwrap().eval_real(1.0).unwrap();
        assert!(close(lhs, l * (1.0 - 1.0 / 81.0), 1e-12));
    }

    #[test]
    fn lambda_examples() {
        let (a, b) = (unit(0.9), unit(-2.1));
        let s = SatakeSet::new(vec![a], 9).unwrap();
        let r = rep(&[b], 1);
        let expect = (CNum::one() - a * b / 3.0).inv();
        assert!(close(lambda_truncated(&s, &r, trunc(60)).unwrap().value, expect, 1e-12));
        assert!(close(lambda_closed(&s, &r).unwrap(), expect, 1e-12));

        let s = SatakeSet::new(vec![CNum::one()], 4).unwrap();
        let r = rep(&[CNum::one(), CNum::one()], 0);
        assert!(close(lambda_truncated(&s, &r, trunc(80)).unwrap().value, CNum::new(4.0, 0.0), 1e-12));

        let al = [unit(0.3), unit(1.7)];
        let s = SatakeSet::new(al.to_vec(), 9).unwrap();
        let r = rep(&[b], 2);
        let expect = al.iter().fold(CNum::one(), |acc, &x| acc / (CNum::one() - x * b / 3.0));
        let got = lambda_truncated(&s, &r, trunc(60)).unwrap().value / vol_gl_f64(2, 9);
        assert!(close(got, expect, 1e-12));
    }

    #[test]
    fn dominant_and_full_box_agree() {
        let s = SatakeSet::new(vec![unit(0.3), unit(1.7), unit(-0.6)], 9).unwrap();
        let r = rep(&[unit(0.2), unit(2.5)], 2);
        let phi = |f: &[i64]| Ok(spherical_value(&s, f)? * essential_value(&r, f, 9)?);
        let a = iwasawa_sum(3, 9, trunc(4), Enumeration::Dominant, phi).unwrap();
        let b = iwasawa_sum(3, 9, trunc(4), Enumeration::FullBox, phi).unwrap();
        assert!(close(a.value, b.value, 1e-14));
    }

    #[test]
    fn tail_bounds_depth_increase() {
        let s = SatakeSet::new(vec![unit(0.3), unit(1.7)], 9).unwrap();
        let r = rep(&[unit(0.2)], 2);
        for d in [5u32, 10, 15] {
            let a = lambda_truncated(&s, &r, trunc(d)).unwrap();
            let b = lambda_truncated(&s, &r, trunc(d + 10)).unwrap();
            assert!((a.value - b.value).norm() < a.tail_estimate, "depth {d}");
        }
    }

    #[test]
    fn depth_must_be_positive() {
        assert!(TruncationCfg::new(0, 1e-9).is_err());
    }
}
