//! Exact matrices over Q(sqrt u): Cayley transforms, transfer factors,
//! regular semisimplicity and matching invariants.

use newform_periods::hermitian::{
    cayley, cayley_inv, det_stack_sides, iota_c, is_regular_semisimple, matching_invariants, membership, qe,
    random, transfer_factor, EMat, Kind, TransferKind,
};
use newform_periods::numerics::FieldCtx;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> newform_periods::Result<()> {
    let ctx = FieldCtx::with_default_u(3)?;
    let mut rng = ChaCha8Rng::seed_from_u64(3);

    let x = EMat::from_rows(ctx, vec![vec![qe(ctx, 0, 0), qe(ctx, 0, 3)], vec![qe(ctx, 0, 1), qe(ctx, 0, 0)]])?;
    println!("X =\n{x}");
    for c in 0..3 {
        println!("X in u(V) for c={c}: {}, in k~_c: {}", membership(&x, Kind::LieU, c)?, membership(&x, Kind::LieKTilde, c)?);
    }
    let xi = ctx.int(1);
    let g = cayley(&x, &xi)?;
    println!("cay(X) =\n{g}");
    println!("unitary: {}, round trip: {}", membership(&g, Kind::GroupU, 1)?, cayley_inv(&g, &xi)? == x);

    let y = random::lie_s(&mut rng, ctx, 3, 4);
    println!("Y =\n{y}");
    println!("regular semisimple: {}", is_regular_semisimple(&y)?);
    if is_regular_semisimple(&y)? {
        println!("omega(Y) = {}, omega(iota_2 Y) = {}", transfer_factor(&y, TransferKind::Omega)?, transfer_factor(&iota_c(&y, 2)?, TransferKind::Omega)?);
        let inv = matching_invariants(&y)?;
        let show = |v: &[newform_periods::numerics::QuadExt]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
        println!("charpoly(A) coefficients: [{}]", show(&inv.charpoly_a));
        println!("corner: {}, z A^i b: [{}]", inv.corner, show(&inv.z_a_b));
    }
    let (lhs, rhs) = det_stack_sides(&y)?;
    println!("det-stack identity: {lhs} = {rhs}");
    Ok(())
}
