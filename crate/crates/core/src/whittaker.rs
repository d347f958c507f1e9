//! Torus values of normalized spherical and essential Whittaker functions.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numerics::CNum;
use crate::reps::{unramified_part, GenericRep, SatakeSet};
use crate::symfunc::{delta_weight, is_dominant, schur};

/// A torus element `diag(ϖ^{f_1}, …)`; with `trailing_one` the last entry is
/// the implicit `ϖ^0 = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusPoint {
    pub exps: Vec<i64>,
    pub trailing_one: bool,
}

impl TorusPoint {
    pub fn full(exps: Vec<i64>) -> Self {
        Self { exps, trailing_one: false }
    }

    pub fn mirahoric(exps: Vec<i64>) -> Self {
        Self { exps, trailing_one: true }
    }

    pub fn rank(&self) -> usize {
        self.exps.len() + usize::from(self.trailing_one)
    }

    pub fn to_full(&self) -> Vec<i64> {
        let mut v = self.exps.clone();
        if self.trailing_one {
            v.push(0);
        }
        v
    }
}

/// Casselman–Shalika: `δ_m(ϖ^λ)^{1/2} s_λ(α)` on dominant `λ`, zero otherwise.
pub fn spherical_value(alpha: &SatakeSet, lambda: &[i64]) -> Result<CNum> {
    if lambda.len() != alpha.rank() {
        return Err(Error::ShapeMismatch(format!(
            "torus point of rank {} for {} Satake parameters",
            lambda.len(),
            alpha.rank()
        )));
    }
    if !is_dominant(lambda) {
        return Ok(CNum::zero());
    }
    if lambda.is_empty() {
        return Ok(CNum::one());
    }
    let delta = delta_weight(lambda, alpha.base(), true).to_f64();
    Ok(schur(lambda, alpha.params())? * delta)
}

/// Essential vector at `diag(ϖ^{f_1}, …, ϖ^{f_{m−1}}, 1)` of a ramified rep of
/// rank `m` over residue cardinality `q_e`.
pub fn essential_value(rep: &GenericRep, f: &[i64], q_e: u64) -> Result<CNum> {
    let m = rep.rank();
    if rep.is_unramified() {
        return Err(Error::Unsupported("unramified representation; use spherical_value".into()));
    }
    if m < 2 {
        return Err(Error::Unsupported("essential values need rank >= 2".into()));
    }
    if f.len() != m - 1 {
        return Err(Error::ShapeMismatch(format!("expected {} exponents, got {}", m - 1, f.len())));
    }
    let (r, sigma_u) = unramified_part(rep, q_e)?;
    essential_from_part(&sigma_u, r, m, f)
}

pub(crate) fn essential_from_part(sigma_u: &SatakeSet, r: usize, m: usize, f: &[i64]) -> Result<CNum> {
    let (head, tail) = f.split_at(r.min(f.len()));
    if tail.iter().any(|&x| x != 0) || head.last().is_some_and(|&x| x < 0) || !is_dominant(head) {
        return Ok(CNum::zero());
    }
    let size: i64 = head.iter().sum();
    let twist = (sigma_u.base() as f64).powf(-((m - r) as f64) * size as f64 / 2.0);
    Ok(spherical_value(sigma_u, head)? * twist)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reps::Segment;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn unit(t: f64) -> CNum {
        CNum::from_polar(1.0, t)
    }

    #[test]
    fn spherical_examples() {
        let (a, b) = (unit(0.3), unit(-1.9));
        let s = SatakeSet::new(vec![a, b], 9).unwrap();
        assert_eq!(spherical_value(&s, &[0, 0]).unwrap(), CNum::one());
        assert_eq!(spherical_value(&s, &[0, 1]).unwrap(), CNum::zero());
        let v = spherical_value(&s, &[1, 0]).unwrap();
        assert!((v - (a + b) / 3.0).norm() < 1e-14);
        assert!(spherical_value(&s, &[1]).is_err());
    }

    #[test]
    fn central_covariance() {
        let s = SatakeSet::new(vec![unit(0.3), unit(2.2), unit(-0.4)], 25).unwrap();
        let lam = [3, 1, 0];
        for k in -3..=3 {
            let shifted: Vec<i64> = lam.iter().map(|x| x + k).collect();
            let lhs = spherical_value(&s, &shifted).unwrap();
            let rhs = s.central().powi(k as i32) * spherical_value(&s, &lam).unwrap();
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }

    fn rep_with(alpha: &[CNum], ram: &[(u32, u32)]) -> GenericRep {
        let mut segs: Vec<Segment> = alpha.iter().map(|&a| Segment::unram(a, 1).unwrap()).collect();
        segs.extend(ram.iter().map(|&(d, c)| Segment::ram(d, c, 1).unwrap()));
        GenericRep::new(segs).unwrap()
    }

    #[test]
    fn essential_examples() {
        let a = unit(0.8);
        let rep = rep_with(&[a], &[(1, 1)]);
        assert_eq!(essential_value(&rep, &[0], 9).unwrap(), CNum::one());
        for f in 0..6 {
            let v = essential_value(&rep, &[f], 9).unwrap();
            assert!((v - a.powi(f as i32) * 3f64.powi(-f as i32)).norm() < 1e-14);
        }
        assert_eq!(essential_value(&rep, &[-1], 9).unwrap(), CNum::zero());
        let rep3 = rep_with(&[a], &[(1, 1), (1, 2)]);
        assert_eq!(essential_value(&rep3, &[1, 1], 9).unwrap(), CNum::zero());
        assert!(essential_value(&rep_with(&[a, a], &[]), &[0], 9).is_err());
    }

    #[test]
    fn essential_matches_direct_oracle() {
        // Direct evaluation: s_f(α) by bialternant over distinct parameters,
        // δ_r^{1/2} q^{-(m-r)|f|/2} written out by hand.
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let r = rng.random_range(1..=3usize);
            let extra = rng.random_range(1..=2usize);
            let m = r + extra;
            let alpha: Vec<CNum> = (0..r).map(|_| unit(rng.random_range(-3.0..3.0))).collect();
            let rep = rep_with(&alpha, &vec![(1, 1); extra]);
            let mut f: Vec<i64> = (0..r).map(|_| rng.random_range(0..5)).collect();
            f.sort_unstable_by(|x, y| y.cmp(x));
            f.resize(m - 1, 0);
            let q = 9u64;
            let got = essential_value(&rep, &f, q).unwrap();

            let mut sorted = alpha.clone();
            sorted.sort_by(crate::numerics::cmp_cnum);
            let s = crate::symfunc::schur_bialternant(&f[..r], &sorted).unwrap();
            let e: f64 = (0..r).map(|i| -(f[i] as f64) * (r as f64 + 1.0 - 2.0 * (i as f64 + 1.0))).sum();
            let size: i64 = f.iter().sum();
            let expected = s * (q as f64).powf(e / 2.0) * (q as f64).powf(-((m - r) as f64) * size as f64 / 2.0);
            assert!((got - expected).norm() < 1e-10 * expected.norm().max(1.0));
        }
    }

    #[test]
    fn fully_ramified_support_is_origin() {
        let rep = rep_with(&[], &[(2, 1), (1, 3)]);
        assert_eq!(essential_value(&rep, &[0, 0], 9).unwrap(), CNum::one());
        assert_eq!(essential_value(&rep, &[1, 0], 9).unwrap(), CNum::zero());
    }

    #[test]
    fn torus_point_shapes() {
        let t = TorusPoint::mirahoric(vec![2, 1]);
        assert_eq!(t.rank(), 3);
        assert_eq!(t.to_full(), vec![2, 1, 0]);
        assert_eq!(TorusPoint::full(vec![1]).to_full(), vec![1]);
    }
}
