//! The closed-form local period for a random tempered pair, computed along
//! both routes and against the component-wise assembly.

use newform_periods::assembly::{i_assembled, i_closed, j_main_breakdown, j_via_bridge, PairData};
use newform_periods::periods::TruncationCfg;
use newform_periods::samples::{selfdual_ramified_rep, selfdual_satake};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> newform_periods::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (n, c, q_f) in [(1, 1, 3), (2, 2, 3), (2, 3, 5), (3, 4, 5)] {
        let sigma = selfdual_satake(&mut rng, n, q_f * q_f)?;
        let rep = selfdual_ramified_rep(&mut rng, n + 1, c)?;
        let d = PairData::new(sigma, rep, q_f, (c % 2) as u8)?;
        let j = j_main_breakdown(&d)?;
        println!("n={n} c={c} q_F={q_f}: C = {}", j.constant);
        println!("  J main    = {:.9e}", j.value);
        println!("  J bridge  = {:.9e}", j_via_bridge(&d)?);
        println!("  I closed  = {:.9e}", i_closed(&d)?);
        if n <= 2 {
            println!("  I summed  = {:.9e}", i_assembled(&d, TruncationCfg::new(60, 1e-12)?)?);
        }
    }
    Ok(())
}
