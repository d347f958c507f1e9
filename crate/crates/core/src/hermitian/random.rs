//! Seeded generators of exact test matrices.

use rand::Rng;

use super::{qe, EMat};
use crate::numerics::FieldCtx;

fn coord<R: Rng + ?Sized>(rng: &mut R, bound: i64) -> i64 {
    rng.random_range(-bound..=bound)
}

/// Entries `a + b√u` with integers `|a|, |b| ≤ bound`.
pub fn integral<R: Rng + ?Sized>(rng: &mut R, ctx: FieldCtx, rows: usize, cols: usize, bound: i64) -> EMat {
    let data = (0..rows)
        .map(|_| (0..cols).map(|_| qe(ctx, coord(rng, bound), coord(rng, bound))).collect())
        .collect();
    EMat::from_rows(ctx, data).expect("rectangular by construction")
}

/// Rational-integer entries, i.e. a matrix over `F`.
pub fn rational<R: Rng + ?Sized>(rng: &mut R, ctx: FieldCtx, rows: usize, cols: usize, bound: i64) -> EMat {
    integral(rng, ctx, rows, cols, bound).map(|x| ctx.rat(x.a.clone()))
}

pub fn invertible<R: Rng + ?Sized>(rng: &mut R, ctx: FieldCtx, n: usize, bound: i64) -> EMat {
    loop {
        let m = integral(rng, ctx, n, n, bound);
        if !m.det().expect("square").is_zero() {
            return m;
        }
    }
}

pub fn invertible_rational<R: Rng + ?Sized>(rng: &mut R, ctx: FieldCtx, n: usize, bound: i64) -> EMat {
    loop {
        let m = rational(rng, ctx, n, n, bound);
        if !m.det().expect("square").is_zero() {
            return m;
        }
    }
}

/// An integral element of `u(V)` for `J = diag(I_n, ϖ^c)` (size `n + 1`);
/// such elements lie in `k̃_c` automatically.
pub fn lie_u<R: Rng + ?Sized>(rng: &mut R, ctx: FieldCtx, n: usize, c: u32, bound: i64) -> EMat {
    let mut x = EMat::zeros(ctx, n + 1, n + 1);
    for i in 0..n {
        x.set(i, i, qe(ctx, 0, coord(rng, bound)));
        for j in i + 1..n {
            let a = qe(ctx, coord(rng, bound), coord(rng, bound));
            x.set(j, i, -a.conj());
            x.set(i, j, a);
        }
        let z = qe(ctx, coord(rng, bound), coord(rng, bound));
        x.set(i, n, -z.conj().scale(&crate::numerics::rat_pow(ctx.p, c as i64)));
        x.set(n, i, z);
    }
    x.set(n, n, qe(ctx, 0, coord(rng, bound)));
    x
}

/// An integral element of `s_m` (entries in `√u·Z`).
pub fn lie_s<R: Rng + ?Sized>(rng: &mut R, ctx: FieldCtx, m: usize, bound: i64) -> EMat {
    integral(rng, ctx, m, m, bound).map(|x| qe(ctx, 0, 1).scale(&x.b))
}

/// An integral element of `BmKTilde^c` (top-right block divisible by `ϖ^c`).
pub fn bmk_tilde<R: Rng + ?Sized>(rng: &mut R, ctx: FieldCtx, n: usize, c: u32, bound: i64) -> EMat {
    let mut x = integral(rng, ctx, n + 1, n + 1, bound);
    let pc = crate::numerics::rat_pow(ctx.p, c as i64);
    for i in 0..n {
        let v = x.get(i, n).scale(&pc);
        x.set(i, n, v);
    }
    x
}

/// A block-diagonal `diag(h, 1)` with `h ∈ GL_n` drawn over `F`.
pub fn embedded_gl_f<R: Rng + ?Sized>(rng: &mut R, ctx: FieldCtx, n: usize, bound: i64) -> EMat {
    let h = invertible_rational(rng, ctx, n, bound);
    let mut g = EMat::identity(ctx, n + 1);
    for i in 0..n {
        for j in 0..n {
            g.set(i, j, h.get(i, j).clone());
        }
    }
    g
}

/// A block-diagonal `diag(h, 1)` with `h ∈ GL_n(E)`.
pub fn embedded_gl_e<R: Rng + ?Sized>(rng: &mut R, ctx: FieldCtx, n: usize, bound: i64) -> EMat {
    let h = invertible(rng, ctx, n, bound);
    let mut g = EMat::identity(ctx, n + 1);
    for i in 0..n {
        for j in 0..n {
            g.set(i, j, h.get(i, j).clone());
        }
    }
    g
}

/// An element of `K'^c_{n+1}`: `BmKTilde^c` with corner `≡ 1 mod ϖ^c` and unit determinant.
pub fn kprime<R: Rng + ?Sized>(rng: &mut R, ctx: FieldCtx, n: usize, c: u32, bound: i64) -> EMat {
    let pc = crate::numerics::rat_pow(ctx.p, c as i64);
    loop {
        let mut g = bmk_tilde(rng, ctx, n, c, bound);
        let corner = &ctx.one() + &g.get(n, n).scale(&pc);
        g.set(n, n, corner);
        let det = g.det().expect("square");
        if det.valuation(ctx.p) == crate::numerics::Valuation::Finite(0) {
            return g;
        }
    }
}
