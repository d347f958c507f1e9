//! Schur polynomials and the truncated Macdonald and Cauchy sums.

use newform_periods::numerics::CNum;
use newform_periods::symfunc::{cauchy_closed, cauchy_sum, macdonald_closed, macdonald_sum, schur};

fn main() -> newform_periods::Result<()> {
    let x = [CNum::new(0.3, 0.1), CNum::new(-0.2, 0.4), CNum::new(0.5, 0.0)];
    println!("s_(2,1,0)(x) = {}", schur(&[2, 1, 0], &x)?);
    println!("s_(1,0,-1)(x) = {}", schur(&[1, 0, -1], &x)?);

    let closed = macdonald_closed(&x)?;
    for depth in [5, 10, 20, 40, 60] {
        let s = macdonald_sum(&x, depth)?;
        println!("depth {depth:>2}: sum = {s:.12}, |error| = {:.3e}", (s - closed).norm());
    }
    println!("closed form  = {closed:.12}");

    let y = [CNum::new(0.4, -0.3), CNum::new(0.1, 0.2)];
    println!("cauchy sum   = {:.12}", cauchy_sum(&x[..2], &y, 40)?);
    println!("cauchy prod  = {:.12}", cauchy_closed(&x[..2], &y));
    Ok(())
}
