//! Rank-one orbital integrals on both sides of the comparison and the
//! exhaustive grid check.

use newform_periods::numerics::{rat, FieldCtx};
use newform_periods::orbital_rank1::{fl_check_rank1, match_rank1, orb_s2, orb_u2, RankOneOrbit};
use newform_periods::report::Status;

fn main() -> newform_periods::Result<()> {
    let ctx = FieldCtx::with_default_u(3)?;
    let y = RankOneOrbit::new(ctx, rat(1, 1), rat(2, 1), rat(9, 1), rat(-2, 1))?.matrix();
    println!("Y =\n{y}");
    for c in 0..4 {
        let (side, x) = match_rank1(&y, c)?;
        print!("c={c}: orb_S = {:>2}, side {side}", orb_s2(&y, c)?);
        if let Some(x) = x {
            print!(", orb_U = {}", orb_u2(&x, c)?);
        }
        println!();
    }

    for p in [3, 7] {
        let ctx = FieldCtx::with_default_u(p)?;
        for c in 0..4 {
            let reports = fl_check_rank1(ctx, c, 4);
            let pass = reports.iter().filter(|r| r.status == Status::Pass).count();
            println!("p={p} c={c}: {pass}/{} grid checks pass", reports.len());
        }
    }
    Ok(())
}
