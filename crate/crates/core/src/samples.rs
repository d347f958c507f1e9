//! Seeded random test data: tempered Satake multisets, ramified generic
//! representations and arithmetic contexts.

use rand::Rng;

use crate::error::{Error, Result};
use crate::numerics::CNum;
use crate::reps::{GenericRep, SatakeSet, Segment};

pub fn unit_circle<R: Rng + ?Sized>(rng: &mut R) -> CNum {
    CNum::from_polar(1.0, rng.random_range(-std::f64::consts::PI..std::f64::consts::PI))
}

/// Unit-circle parameters closed under inversion: conjugate pairs, plus a
/// random sign when `m` is odd.
pub fn selfdual_params<R: Rng + ?Sized>(rng: &mut R, m: usize) -> Vec<CNum> {
    let mut out = Vec::with_capacity(m);
    for _ in 0..m / 2 {
        let z = unit_circle(rng);
        out.push(z);
        out.push(z.conj());
    }
    if m % 2 == 1 {
        out.push(CNum::new(if rng.random_bool(0.5) { 1.0 } else { -1.0 }, 0.0));
    }
    out
}

pub fn selfdual_satake<R: Rng + ?Sized>(rng: &mut R, m: usize, base: u64) -> Result<SatakeSet> {
    SatakeSet::new(selfdual_params(rng, m), base)
}

pub fn tempered_satake<R: Rng + ?Sized>(rng: &mut R, m: usize, base: u64) -> Result<SatakeSet> {
    SatakeSet::new((0..m).map(|_| unit_circle(rng)).collect(), base)
}

/// A rank-`m` rep with `r` unramified characters (parameters `alpha`) and
/// `m − r` ramified characters whose conductors sum to `c`.
pub fn ramified_rep(alpha: &[CNum], m: usize, c: u32) -> Result<GenericRep> {
    let r = alpha.len();
    if r >= m {
        return Err(Error::InvalidArgument(format!("need r < m, got r = {r}, m = {m}")));
    }
    let ram = (m - r) as u32;
    if c < ram {
        return Err(Error::InvalidArgument(format!("conductor {c} too small for {ram} ramified characters")));
    }
    let mut segs: Vec<Segment> = alpha.iter().map(|&a| Segment::unram(a, 1)).collect::<Result<_>>()?;
    for i in 0..ram {
        let cond = if i + 1 == ram { c - (ram - 1) } else { 1 };
        segs.push(Segment::ram(1, cond, 1)?);
    }
    GenericRep::new(segs)
}

/// A random tempered ramified rep of rank `m` and conductor `c` whose
/// unramified part is conjugate-self-dual of the largest admissible rank.
pub fn selfdual_ramified_rep<R: Rng + ?Sized>(rng: &mut R, m: usize, c: u32) -> Result<GenericRep> {
    let min_r = m.saturating_sub(c as usize);
    let r = rng.random_range(min_r..m);
    ramified_rep(&selfdual_params(rng, r), m, c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::ToleranceCfg;
    use crate::reps::{is_conjugate_selfdual, unramified_part};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_data_has_requested_shape() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let tol = ToleranceCfg::new(1e-9, 1e-9).unwrap();
        for m in 1..5 {
            let s = selfdual_satake(&mut rng, m, 9).unwrap();
            assert!(is_conjugate_selfdual(&s, tol) && s.is_tempered(1e-12));
            for c in 1..5 {
                let rep = selfdual_ramified_rep(&mut rng, m + 1, c).unwrap();
                assert_eq!(rep.conductor(), c);
                assert_eq!(rep.rank(), m + 1);
                assert!(is_conjugate_selfdual(&unramified_part(&rep, 9).unwrap().1, tol));
            }
        }
        assert!(ramified_rep(&[], 3, 2).is_err());
        assert!(ramified_rep(&[CNum::new(1.0, 0.0)], 1, 2).is_err());
    }
}
