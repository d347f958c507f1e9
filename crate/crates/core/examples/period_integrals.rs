//! Truncated Iwasawa sums for the beta, theta and lambda integrals against
//! their closed forms.

use newform_periods::periods::{
    beta_closed, beta_truncated, lambda_closed, lambda_truncated, theta_closed, theta_truncated, TruncationCfg,
};
use newform_periods::samples::{ramified_rep, tempered_satake};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> newform_periods::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let q_f = 3;
    let trunc = TruncationCfg::new(40, 1e-10)?;

    for n in 1..=3 {
        let alpha = tempered_satake(&mut rng, n - 1, q_f * q_f)?;
        let rep = ramified_rep(alpha.params(), n + 1, 2)?;
        let t = beta_truncated(&rep, q_f, trunc)?;
        println!("beta   n={n}: truncated {:.12}  closed {:.12}  tail {:.1e}", t.value, beta_closed(&rep, q_f)?, t.tail_estimate);
    }

    for n in 1..=2 {
        let sigma = tempered_satake(&mut rng, n, q_f * q_f)?;
        let alpha = tempered_satake(&mut rng, n, q_f * q_f)?;
        let rep = ramified_rep(alpha.params(), n + 1, 1)?;
        let t = lambda_truncated(&sigma, &rep, trunc)?;
        println!("lambda n={n}: truncated {:.12}  closed {:.12}", t.value, lambda_closed(&sigma, &rep)?);
    }

    for k in 2..=3 {
        let sigma = tempered_satake(&mut rng, k, q_f * q_f)?;
        let t = theta_truncated(&sigma, trunc)?;
        let closed = theta_closed(&sigma)?;
        println!("theta  k={k}: truncated {:.12}  closed {:.12}  ratio {:.12}", t.value.re, closed.re, (t.value / closed).re);
    }
    Ok(())
}
