//! Local L-factors `Π (1 − γ q^{−ds})^{−1}` and their standard constructors.

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{check_finite, CNum, ToleranceCfg};
use crate::params;
use crate::report::VerificationReport;
use crate::reps::{is_conjugate_selfdual, SatakeSet};

/// Distance from a pole below which evaluation is refused.
pub const POLE_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "LFactorWire", into = "LFactorWire")]
pub struct LocalLFactor {
    base: u64,
    factors: Vec<(CNum, u32)>,
}

#[derive(Serialize, Deserialize)]
struct LFactorWire {
    base: u64,
    factors: Vec<(f64, f64, u32)>,
}

impl TryFrom<LFactorWire> for LocalLFactor {
    type Error = Error;
    fn try_from(w: LFactorWire) -> Result<Self> {
        LocalLFactor::new(w.base, w.factors.into_iter().map(|(re, im, d)| (CNum::new(re, im), d)).collect())
    }
}

impl From<LocalLFactor> for LFactorWire {
    fn from(l: LocalLFactor) -> Self {
        LFactorWire { base: l.base, factors: l.factors.into_iter().map(|(g, d)| (g.re, g.im, d)).collect() }
    }
}

impl LocalLFactor {
    /// Factors with `γ = 0` are trivial and dropped.
    pub fn new(base: u64, factors: Vec<(CNum, u32)>) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidArgument(format!("base {base} < 2")));
        }
        if factors.iter().any(|&(g, d)| d == 0 || !g.is_finite()) {
            return Err(Error::InvalidArgument("factor degrees must be >= 1 and roots finite".into()));
        }
        Ok(Self { base, factors: factors.into_iter().filter(|(g, _)| g.norm() != 0.0).collect() })
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn factors(&self) -> &[(CNum, u32)] {
        &self.factors
    }

    pub fn product(&self, other: &Self) -> Result<Self> {
        if self.base != other.base {
            return Err(Error::ShapeMismatch(format!("bases {} and {}", self.base, other.base)));
        }
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&other.factors);
        Ok(Self { base: self.base, factors })
    }

    pub fn eval(&self, s: CNum) -> Result<CNum> {
        let log_q = (self.base as f64).ln();
        let mut value = CNum::one();
        for &(gamma, d) in &self.factors {
            let denom = CNum::one() - gamma * (-(d as f64) * s * log_q).exp();
            if denom.norm() < POLE_TOL {
                return Err(Error::Pole { gamma, degree: d });
            }
            value /= denom;
        }
        check_finite(value, "L-factor evaluation")
    }

    pub fn eval_real(&self, s: f64) -> Result<CNum> {
        self.eval(CNum::new(s, 0.0))
    }

    /// Multiset equality of the inverse roots up to `tol`.
    pub fn same_factors(&self, other: &Self, tol: f64) -> bool {
        if self.base != other.base || self.factors.len() != other.factors.len() {
            return false;
        }
        let mut used = vec![false; other.factors.len()];
        self.factors.iter().all(|&(g, d)| {
            let hit = other
                .factors
                .iter()
                .enumerate()
                .position(|(j, &(h, e))| !used[j] && e == d && (g - h).norm() <= tol);
            hit.map(|j| used[j] = true).is_some()
        })
    }
}

/// `L(s, σ × τ)`: inverse roots `α_i β_j` over `q_E`.
pub fn rs_lfactor(sigma: &SatakeSet, tau: &SatakeSet) -> Result<LocalLFactor> {
    if sigma.base() != tau.base() {
        return Err(Error::ShapeMismatch(format!("bases {} and {}", sigma.base(), tau.base())));
    }
    let factors = sigma
        .params()
        .iter()
        .flat_map(|&a| tau.params().iter().map(move |&b| (a * b, 1)))
        .collect();
    LocalLFactor::new(sigma.base(), factors)
}

pub(crate) fn isqrt_exact(n: u64) -> Option<u64> {
    let r = (n as f64).sqrt().round() as u64;
    (r.checked_mul(r) == Some(n)).then_some(r)
}

/// Asai L-factor `L(s, σ, As^±)` over `q_F = √q_E`.
pub fn asai_lfactor(sigma: &SatakeSet, sign: i32) -> Result<LocalLFactor> {
    if sign != 1 && sign != -1 {
        return Err(Error::InvalidArgument(format!("Asai sign must be ±1, got {sign}")));
    }
    let q_f = isqrt_exact(sigma.base())
        .ok_or_else(|| Error::InvalidArgument(format!("q_E = {} is not a square", sigma.base())))?;
    let a = sigma.params();
    let mut factors: Vec<(CNum, u32)> = a.iter().map(|&x| (x * sign as f64, 1)).collect();
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            factors.push((a[i] * a[j], 2));
        }
    }
    LocalLFactor::new(q_f, factors)
}

/// `L(s, σ × σ̄)`: inverse roots `α_i conj(α_j)` over all ordered pairs.
pub fn pair_dual_lfactor(sigma: &SatakeSet) -> Result<LocalLFactor> {
    rs_lfactor(sigma, &sigma.conj())
}

pub(crate) fn asai_sign(exponent: usize) -> i32 {
    if exponent % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `conj(L(1, As^{(−1)^{n−1}})) / L(1, σ×σ̄)` against `L(1, As^{(−1)^n})^{−1}`.
pub fn asai_cancellation_check(sigma: &SatakeSet, n_parity: usize, cfg: ToleranceCfg) -> VerificationReport {
    let params = params! {
        "m" => sigma.rank(),
        "parity" => n_parity % 2,
        "q_e" => sigma.base(),
        "sigma" => format_params(sigma.params()),
    };
    const SUITE: &str = "asai-cancel";
    const CHECK: &str = "asai_cancellation";
    if !is_conjugate_selfdual(sigma, cfg) || !sigma.is_tempered(1e-9) {
        return VerificationReport::rejected(SUITE, CHECK, params, "needs a conjugate-self-dual unit-circle multiset");
    }
    let eval = || -> Result<(CNum, CNum)> {
        let other = asai_lfactor(sigma, asai_sign(n_parity + 1))?.eval_real(1.0)?;
        let same = asai_lfactor(sigma, asai_sign(n_parity))?.eval_real(1.0)?;
        let pair = pair_dual_lfactor(sigma)?.eval_real(1.0)?;
        Ok((other.conj() / pair, same.inv()))
    };
    match eval() {
        Ok((lhs, rhs)) => VerificationReport::hard(SUITE, CHECK, params, lhs, rhs, cfg),
        Err(e) => VerificationReport::rejected(SUITE, CHECK, params, e.to_string()),
    }
}

pub(crate) fn format_params(a: &[CNum]) -> String {
    let parts: Vec<String> = a.iter().map(|z| format!("{:.6}{:+.6}i", z.re, z.im)).collect();
    format!("[{}]", parts.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Status;

    fn c(re: f64, im: f64) -> CNum {
        CNum::new(re, im)
    }

    fn close(a: CNum, b: CNum) -> bool {
        (a - b).norm() < 1e-12 * b.norm().max(1.0)
    }

    #[test]
    fn eval_examples() {
        let empty = LocalLFactor::new(7, vec![]).unwrap();
        assert_eq!(empty.eval(c(0.3, 2.0)).unwrap(), c(1.0, 0.0));
        let l = LocalLFactor::new(4, vec![(c(1.0, 0.0), 1)]).unwrap();
        assert!(close(l.eval_real(1.0).unwrap(), c(4.0 / 3.0, 0.0)));
        assert!(matches!(l.eval_real(0.0), Err(Error::Pole { degree: 1, .. })));
    }

    #[test]
    fn rs_examples() {
        let (a, b) = (c(0.6, 0.8), c(0.0, -1.0));
        let s = SatakeSet::new(vec![a], 9).unwrap();
        let t = SatakeSet::new(vec![b], 9).unwrap();
        assert_eq!(rs_lfactor(&s, &t).unwrap().factors(), &[(a * b, 1)]);
        let s = SatakeSet::new(vec![c(1.0, 0.0)], 4).unwrap();
        let t = SatakeSet::new(vec![c(1.0, 0.0), c(1.0, 0.0)], 4).unwrap();
        assert!(close(rs_lfactor(&s, &t).unwrap().eval_real(0.5).unwrap(), c(4.0, 0.0)));
        assert!(rs_lfactor(&s, &SatakeSet::new(vec![c(1.0, 0.0)], 9).unwrap()).is_err());
    }

    #[test]
    fn asai_examples() {
        let a = c(0.6, 0.8);
        let s = SatakeSet::new(vec![a], 9).unwrap();
        let l = asai_lfactor(&s, 1).unwrap();
        assert_eq!(l.base(), 3);
        assert_eq!(l.factors(), &[(a, 1)]);
        let s = SatakeSet::new(vec![c(0.0, 1.0), c(0.0, -1.0)], 9).unwrap();
        assert!(close(asai_lfactor(&s, -1).unwrap().eval_real(1.0).unwrap(), c(81.0 / 80.0, 0.0)));
        let plus = SatakeSet::new(vec![c(1.0, 0.0), c(1.0, 0.0)], 9).unwrap();
        let minus = SatakeSet::new(vec![c(-1.0, 0.0), c(-1.0, 0.0)], 9).unwrap();
        assert!(close(
            asai_lfactor(&plus, 1).unwrap().eval_real(1.0).unwrap(),
            asai_lfactor(&minus, -1).unwrap().eval_real(1.0).unwrap()
        ));
        assert!(asai_lfactor(&SatakeSet::new(vec![a], 8).unwrap(), 1).is_err());
        assert!(asai_lfactor(&s, 0).is_err());
    }

    #[test]
    fn pair_dual_examples() {
        let s = SatakeSet::new(vec![c(0.6, 0.8)], 9).unwrap();
        assert!(close(pair_dual_lfactor(&s).unwrap().eval_real(1.0).unwrap(), c(9.0 / 8.0, 0.0)));
        let s = SatakeSet::new(vec![c(1.0, 0.0), c(1.0, 0.0)], 4).unwrap();
        let l = pair_dual_lfactor(&s).unwrap();
        assert_eq!(l.factors().len(), 4);
        assert!(close(l.eval_real(1.0).unwrap(), c((4.0f64 / 3.0).powi(4), 0.0)));
        let s = SatakeSet::new(vec![c(0.3, 2.0), c(-1.0, 0.5)], 9).unwrap();
        assert!(pair_dual_lfactor(&s.conj()).unwrap().same_factors(&pair_dual_lfactor(&s).unwrap(), 1e-14));
    }

    #[test]
    fn asai_product_degree_bookkeeping() {
        let s = SatakeSet::new(vec![c(0.6, 0.8), c(0.0, -1.0), c(-0.28, 0.96)], 25).unwrap();
        let sv = CNum::new(0.8, 0.3);
        let lhs = asai_lfactor(&s, 1).unwrap().eval(sv).unwrap() * asai_lfactor(&s, -1).unwrap().eval(sv).unwrap();
        let t = (-2.0 * sv * 5f64.ln()).exp();
        let a = s.params();
        let mut rhs = CNum::one();
        for i in 0..3 {
            rhs /= CNum::one() - a[i] * a[i] * t;
            for j in i + 1..3 {
                rhs /= (CNum::one() - a[i] * a[j] * t).powi(2);
            }
        }
        assert!(close(lhs, rhs));
    }

    #[test]
    fn cancellation_examples() {
        let cfg = ToleranceCfg::new(1e-12, 1e-12).unwrap();
        let s = SatakeSet::new(vec![c(1.0, 0.0)], 9).unwrap();
        for parity in 0..2 {
            assert_eq!(asai_cancellation_check(&s, parity, cfg).status, Status::Pass);
        }
        let one = asai_cancellation_check(&s, 0, cfg);
        assert!(close(one.rhs, c(2.0 / 3.0, 0.0)));
        let s = SatakeSet::new(vec![CNum::from_polar(1.0, 1.234), CNum::from_polar(1.0, -1.234)], 25).unwrap();
        for parity in 0..2 {
            assert_eq!(asai_cancellation_check(&s, parity, cfg).status, Status::Pass);
        }
        let bad = SatakeSet::new(vec![c(2.0, 0.0)], 9).unwrap();
        assert_eq!(asai_cancellation_check(&bad, 0, cfg).status, Status::RejectedInput);
    }

    #[test]
    fn json_round_trip() {
        let l = LocalLFactor::new(3, vec![(c(0.5, -0.5), 1), (c(1.0, 0.0), 2)]).unwrap();
        let text = serde_json::to_string(&l).unwrap();
        assert_eq!(text, r#"{"base":3,"factors":[[0.5,-0.5,1],[1.0,0.0,2]]}"#);
        assert_eq!(serde_json::from_str::<LocalLFactor>(&text).unwrap(), l);
    }
}
