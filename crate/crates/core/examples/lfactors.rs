//! Asai, Rankin–Selberg and pair L-factors from Satake parameters.

use newform_periods::lfactors::{asai_cancellation_check, asai_lfactor, pair_dual_lfactor, rs_lfactor};
use newform_periods::numerics::{CNum, ToleranceCfg};
use newform_periods::reps::SatakeSet;

fn main() -> newform_periods::Result<()> {
    let q_e = 9;
    let sigma = SatakeSet::new(vec![CNum::from_polar(1.0, 0.7), CNum::from_polar(1.0, -0.7), CNum::new(-1.0, 0.0)], q_e)?;
    let tau = SatakeSet::new(vec![CNum::from_polar(1.0, 1.9), CNum::from_polar(1.0, -1.9)], q_e)?;

    println!("L(1, sigma, As+)      = {:.12}", asai_lfactor(&sigma, 1)?.eval_real(1.0)?);
    println!("L(1, sigma, As-)      = {:.12}", asai_lfactor(&sigma, -1)?.eval_real(1.0)?);
    println!("L(1, sigma x sigma^)  = {:.12}", pair_dual_lfactor(&sigma)?.eval_real(1.0)?);
    println!("L(1/2, sigma x tau)   = {:.12}", rs_lfactor(&sigma, &tau)?.eval_real(0.5)?);

    for parity in 0..2 {
        let r = asai_cancellation_check(&sigma, parity, ToleranceCfg::default());
        println!("asai cancellation, parity {parity}: {} (rel err {:.2e})", r.status, r.rel_err);
    }

    let trivial = SatakeSet::new(vec![CNum::new(1.0, 0.0)], q_e)?;
    match pair_dual_lfactor(&trivial)?.eval_real(0.0) {
        Ok(v) => println!("unexpected value {v}"),
        Err(e) => println!("at s = 0: {e}"),
    }
    Ok(())
}
