use super::EMat;
use crate::error::{Error, Result};
use crate::numerics::{rat_pow, QuadExt};

/// `X = [[A, b], [z, w]]` with `A` of size `n × n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Blocks {
    pub a: EMat,
    pub b: EMat,
    pub z: EMat,
    pub w: QuadExt,
}

impl Blocks {
    pub fn of(x: &EMat) -> Result<Self> {
        if !x.is_square() || x.rows() < 2 {
            return Err(Error::ShapeMismatch(format!(
                "block decomposition needs a square matrix of size >= 2, got {}x{}",
                x.rows(),
                x.cols()
            )));
        }
        let n = x.rows() - 1;
        Ok(Self { a: x.block(0, 0, n, n), b: x.block(0, n, n, 1), z: x.block(n, 0, 1, n), w: x.get(n, n).clone() })
    }

    pub fn n(&self) -> usize {
        self.a.rows()
    }

    /// Columns `b, Ab, …, A^{n−1}b`.
    pub fn krylov_columns(&self) -> EMat {
        let mut cols = Vec::with_capacity(self.n());
        let mut v = self.b.clone();
        for _ in 0..self.n() {
            cols.push(v.clone());
            v = &self.a * &v;
        }
        EMat::hstack(&cols).expect("equal heights")
    }

    /// Rows `z, zA, …, zA^{n−1}`.
    pub fn krylov_rows(&self) -> EMat {
        let mut rows = Vec::with_capacity(self.n());
        let mut v = self.z.clone();
        for _ in 0..self.n() {
            rows.push(v.clone());
            v = &v * &self.a;
        }
        EMat::vstack(&rows).expect("equal widths")
    }
}

/// Which transfer factor is meant; both use the same row-stack formula,
/// `ω` on `s_{n+1}` and `Ω_S` on `S_{n+1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransferKind {
    Omega,
    OmegaS,
}

/// `η̃(det(e₀*, e₀*Y, …, e₀*Y^n)) = (−1)^{ν(det)}` with `e₀* = (0, …, 0, 1)`.
pub fn transfer_factor(y: &EMat, _kind: TransferKind) -> Result<i8> {
    if !y.is_square() || y.rows() == 0 {
        return Err(Error::ShapeMismatch(format!("{}x{} is not square", y.rows(), y.cols())));
    }
    let m = y.rows();
    let mut row = EMat::zeros(y.ctx(), 1, m);
    row.set(0, m - 1, y.ctx().one());
    let mut rows = Vec::with_capacity(m);
    for _ in 0..m {
        rows.push(row.clone());
        row = &row * y;
    }
    let d = EMat::vstack(&rows)?.det()?;
    match d.valuation(y.ctx().p).finite() {
        None => Err(Error::NonRegular),
        Some(v) => Ok(if v.rem_euclid(2) == 0 { 1 } else { -1 }),
    }
}

/// Cyclic-vector criterion: `{b, Ab, …}` spans `E^n` and `{z, zA, …}` spans `E_n`.
pub fn is_regular_semisimple(x: &EMat) -> Result<bool> {
    let bl = Blocks::of(x)?;
    let n = bl.n();
    Ok(bl.krylov_columns().rank() == n && bl.krylov_rows().rank() == n)
}

/// Invariants of `X` under conjugation by `diag(h, 1)`, `h ∈ GL_n(E)`:
/// the characteristic polynomial of `A`, the corner `w`, and `zA^ib`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchingInvariants {
    pub charpoly_a: Vec<QuadExt>,
    pub corner: QuadExt,
    pub z_a_b: Vec<QuadExt>,
}

pub fn matching_invariants(x: &EMat) -> Result<MatchingInvariants> {
    if !is_regular_semisimple(x)? {
        return Err(Error::NonRegular);
    }
    let bl = Blocks::of(x)?;
    let kc = bl.krylov_columns();
    let zab = (0..bl.n()).map(|i| (&bl.z * &kc.col(i)).get(0, 0).clone()).collect();
    Ok(MatchingInvariants { charpoly_a: bl.a.charpoly()?, corner: bl.w.clone(), z_a_b: zab })
}

/// Two regular semisimple elements match when their invariants agree.
pub fn matches(x: &EMat, y: &EMat) -> Result<bool> {
    if x.rows() != y.rows() || x.ctx() != y.ctx() {
        return Err(Error::ShapeMismatch("matching needs matrices of the same size over the same field".into()));
    }
    Ok(matching_invariants(x)? == matching_invariants(y)?)
}

/// Scale the top-right block `y` by `ϖ^{−c}`.
pub fn iota_c(x: &EMat, c: u32) -> Result<EMat> {
    let bl = Blocks::of(x)?;
    let n = bl.n();
    let s = rat_pow(x.ctx().p, -(c as i64));
    let mut out = x.clone();
    for i in 0..n {
        out.set(i, n, x.get(i, n).scale(&s));
    }
    Ok(out)
}

/// `(det(X^ie₀)_{0≤i≤m}, (−1)^m det(A^ib)_{0≤i<m})` with `e₀` the last basis column.
pub fn det_stack_sides(x: &EMat) -> Result<(QuadExt, QuadExt)> {
    let bl = Blocks::of(x)?;
    let m = bl.n();
    let mut v = EMat::zeros(x.ctx(), m + 1, 1);
    v.set(m, 0, x.ctx().one());
    let mut cols = Vec::with_capacity(m + 1);
    for _ in 0..=m {
        cols.push(v.clone());
        v = x * &v;
    }
    let lhs = EMat::hstack(&cols)?.det()?;
    let k = bl.krylov_columns().det()?;
    Ok((lhs, if m % 2 == 0 { k } else { -k }))
}

pub fn det_stack_identity_check(x: &EMat) -> Result<bool> {
    let (l, r) = det_stack_sides(x)?;
    Ok(l == r)
}

#[cfg(test)]
mod tests {
    use super::super::{cayley, cayley_inv, membership, norm_one_elements, qe, random, Kind};
    use super::*;
    use crate::numerics::{FieldCtx, Valuation};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ctx() -> FieldCtx {
        FieldCtx::new(3, -1).unwrap()
    }

    fn conj_by(h: &EMat, x: &EMat) -> EMat {
        &(&h.inverse().unwrap() * x) * h
    }

    #[test]
    fn rank_one_transfer_factor() {
        let c = ctx();
        for (y21, expect) in [(1, 1), (3, -1), (9, 1), (6, -1), (27, -1)] {
            let y = EMat::from_rows(c, vec![vec![c.zero(), qe(c, 0, 5)], vec![qe(c, 0, y21), qe(c, 0, 2)]]).unwrap();
            assert_eq!(transfer_factor(&y, TransferKind::Omega).unwrap(), expect);
        }
        let y = EMat::from_rows(c, vec![vec![c.one(), c.one()], vec![c.zero(), c.one()]]).unwrap();
        assert!(matches!(transfer_factor(&y, TransferKind::Omega), Err(Error::NonRegular)));
    }

    #[test]
    fn transfer_factor_covariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let c = ctx();
        let mut done = 0;
        while done < 50 {
            let n = 1 + done % 3;
            let y = random::lie_s(&mut rng, c, n + 1, 4);
            let h = random::embedded_gl_f(&mut rng, c, n, 4);
            let (Ok(w0), Ok(w1)) =
                (transfer_factor(&y, TransferKind::Omega), transfer_factor(&conj_by(&h, &y), TransferKind::Omega))
            else {
                continue;
            };
            let eta = match h.det().unwrap().valuation(3) {
                Valuation::Finite(v) if v % 2 == 0 => 1,
                _ => -1,
            };
            assert_eq!(w1, eta * w0);
            done += 1;
        }
    }

    #[test]
    fn transfer_factor_commutes_with_iota() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let c = ctx();
        let mut done = 0;
        while done < 100 {
            let n = 1 + done % 3;
            let y = random::lie_s(&mut rng, c, n + 1, 5);
            let Ok(w) = transfer_factor(&y, TransferKind::Omega) else { continue };
            let cc = rng.random_range(0..4);
            assert_eq!(transfer_factor(&iota_c(&y, cc).unwrap(), TransferKind::Omega).unwrap(), w);
            done += 1;
        }
    }

    // Dimension of {Y ∈ gl_n : [diag(Y, 0), X] = 0}.
    fn stabilizer_dim(x: &EMat) -> usize {
        let c = x.ctx();
        let n = x.rows() - 1;
        let mut cols = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let mut e = EMat::zeros(c, n + 1, n + 1);
                e.set(i, j, c.one());
                let comm = &(&e * x) - &(x * &e);
                let flat: Vec<Vec<_>> = comm.entries().map(|v| vec![v.clone()]).collect();
                cols.push(EMat::from_rows(c, flat).unwrap());
            }
        }
        n * n - EMat::hstack(&cols).unwrap().rank()
    }

    #[test]
    fn regular_semisimple_examples() {
        let c = ctx();
        let x = EMat::from_ints(c, &[&[1, 0, 0], &[2, 3, 0], &[1, 1, 4]]).unwrap();
        assert!(!is_regular_semisimple(&x).unwrap());
        for (b, z, rs) in [(1, 1, true), (0, 1, false), (1, 0, false), (0, 0, false)] {
            let y = EMat::from_ints(c, &[&[5, b], &[z, 2]]).unwrap();
            assert_eq!(is_regular_semisimple(&y).unwrap(), rs);
        }
    }

    #[test]
    fn regular_semisimple_matches_stabilizer_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let c = ctx();
        for _ in 0..20 {
            let x = random::integral(&mut rng, c, 3, 3, 5);
            let rs = is_regular_semisimple(&x).unwrap();
            assert_eq!(rs, stabilizer_dim(&x) == 0);
            assert!(rs);
        }
        // b and z both inside a coordinate line of diagonal A: stabilizer contains diag(0, 1).
        let x = EMat::from_ints(c, &[&[1, 0, 2], &[0, 3, 0], &[5, 0, 1]]).unwrap();
        assert!(!is_regular_semisimple(&x).unwrap());
        assert!(stabilizer_dim(&x) >= 1);
    }

    #[test]
    fn matching_invariants_behave() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let c = ctx();
        for n in 1..=3 {
            let x = random::integral(&mut rng, c, n + 1, n + 1, 4);
            assert!(matches(&x, &x).unwrap());
            let h = random::embedded_gl_e(&mut rng, c, n, 3);
            assert!(matches(&x, &conj_by(&h, &x)).unwrap());
            let mut y = x.clone();
            y.set(n, n, x.get(n, n) + &c.one());
            assert!(!matches(&x, &y).unwrap());
        }
        let bad = EMat::from_ints(c, &[&[1, 0], &[1, 1]]).unwrap();
        assert!(matches!(matching_invariants(&bad), Err(Error::NonRegular)));
    }

    #[test]
    fn rank_one_matching_by_invariants() {
        let c = ctx();
        // X ∈ u(V) for J = diag(1, 3): top-right −3·z̄ with z = 1 + √u.
        let z = qe(c, 1, 1);
        let x = EMat::from_rows(
            c,
            vec![vec![qe(c, 0, 2), -z.conj().scale(&crate::numerics::rat_int(3))], vec![z.clone(), qe(c, 0, -1)]],
        )
        .unwrap();
        assert!(membership(&x, Kind::LieU, 1).unwrap());
        // Y ∈ s₂ with y₁₂y₂₁ = bz = −3·Nm(z) = −6.
        let y = EMat::from_rows(c, vec![vec![qe(c, 0, 2), qe(c, 0, 2)], vec![qe(c, 0, 3), qe(c, 0, -1)]]).unwrap();
        assert!(membership(&y, Kind::LieS, 0).unwrap());
        assert!(matches(&x, &y).unwrap());
        let y2 = EMat::from_rows(c, vec![vec![qe(c, 0, 2), qe(c, 0, 1)], vec![qe(c, 0, 3), qe(c, 0, -1)]]).unwrap();
        assert!(!matches(&x, &y2).unwrap());
    }

    #[test]
    fn iota_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let c = ctx();
        for _ in 0..30 {
            let n = rng.random_range(1..=3);
            let cc = rng.random_range(0..=3);
            let x = random::lie_u(&mut rng, c, n, cc, 4);
            assert_eq!(iota_c(&x, 0).unwrap(), x);
            let shift = rng.random_range(-1..=1);
            let x = x.scale(&c.uniformizer_pow(shift));
            assert_eq!(
                membership(&x, Kind::LieKTilde, cc).unwrap(),
                membership(&iota_c(&x, cc).unwrap(), Kind::LieKTilde, 0).unwrap()
            );
            let h = random::embedded_gl_e(&mut rng, c, n, 3);
            let hx = conj_by(&h, &x);
            assert_eq!(iota_c(&hx, cc).unwrap(), conj_by(&h, &iota_c(&x, cc).unwrap()));
        }
    }

    #[test]
    fn det_stack_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let c = ctx();
        let x = EMat::from_rows(c, vec![vec![qe(c, 4, 1), qe(c, 2, 3)], vec![c.one(), qe(c, 5, 0)]]).unwrap();
        let (l, r) = det_stack_sides(&x).unwrap();
        assert_eq!(l, -qe(c, 2, 3));
        assert_eq!(l, r);
        for k in 0..200 {
            let m = 1 + k % 4;
            let x = random::integral(&mut rng, c, m + 1, m + 1, 4);
            assert!(det_stack_identity_check(&x).unwrap());
        }
        let mut x = random::integral(&mut rng, c, 3, 3, 4);
        x.set(0, 2, c.zero());
        x.set(1, 2, c.zero());
        let (l, r) = det_stack_sides(&x).unwrap();
        assert!(l.is_zero() && r.is_zero());
    }

    #[test]
    fn cayley_preserves_lattice_stabilizer() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let c = ctx();
        let xis = norm_one_elements(c, 2);
        let mut done = 0;
        while done < 100 {
            let n = 1 + done % 3;
            let cc = (done % 4) as u32;
            let g = random::bmk_tilde(&mut rng, c, n, cc, 4);
            let xi = &xis[rng.random_range(0..xis.len())];
            let plus = g.add_scalar(xi).unwrap();
            if plus.det().unwrap().valuation(3) != Valuation::Finite(0) {
                continue;
            }
            let img = cayley_inv(&g, xi).unwrap();
            assert!(membership(&img, Kind::BmKTilde, cc).unwrap());
            done += 1;
        }
    }

    #[test]
    fn corner_fixed_by_embedded_conjugation() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let c = ctx();
        for n in 1..=3 {
            let x = random::integral(&mut rng, c, n + 1, n + 1, 5);
            let h = random::embedded_gl_e(&mut rng, c, n, 3);
            assert_eq!(conj_by(&h, &x).get(n, n), x.get(n, n));
        }
    }

    #[test]
    fn matching_survives_cayley() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        let c = ctx();
        let mut done = 0;
        while done < 20 {
            let n = 1 + done % 2;
            let x = random::integral(&mut rng, c, n + 1, n + 1, 4);
            let y = conj_by(&random::embedded_gl_e(&mut rng, c, n, 3), &x);
            let (Ok(gx), Ok(gy)) = (cayley(&x, &c.one()), cayley(&y, &c.one())) else { continue };
            if !is_regular_semisimple(&gx).unwrap() {
                continue;
            }
            assert!(matches(&x, &y).unwrap());
            assert!(matches(&gx, &gy).unwrap());
            done += 1;
        }
    }
}
