//! Torus values of spherical and essential Whittaker functions.

use newform_periods::numerics::CNum;
use newform_periods::reps::{GenericRep, SatakeSet};
use newform_periods::samples::ramified_rep;
use newform_periods::whittaker::{essential_value, spherical_value};

fn main() -> newform_periods::Result<()> {
    let q_e = 25;
    let alpha = vec![CNum::from_polar(1.0, 0.4), CNum::from_polar(1.0, 2.2), CNum::new(1.0, 0.0)];
    let sigma = SatakeSet::new(alpha.clone(), q_e)?;
    for lambda in [[0, 0, 0], [1, 0, 0], [2, 1, 0], [1, 1, 1], [0, -1, -1], [0, 1, 0]] {
        println!("W_sph(diag {lambda:?}) = {:.10}", spherical_value(&sigma, &lambda)?);
    }

    let rep: GenericRep = ramified_rep(&alpha[..2], 4, 3)?;
    println!("rep = {}", rep.to_json());
    for f in [[0, 0, 0], [1, 0, 0], [2, 1, 0], [1, 1, 1], [1, -1, 0]] {
        println!("W_ess(diag {f:?}, 1) = {:.10}", essential_value(&rep, &f, q_e)?);
    }
    Ok(())
}
