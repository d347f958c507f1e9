use num_traits::One;

use super::EMat;
use crate::error::{Error, Result};
use crate::numerics::{FieldCtx, QuadExt, Valuation};

/// A hermitian matrix `J` defining `⟨x, y⟩ = x̄ᵗ J y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermForm {
    j: EMat,
    standard_c: Option<u32>,
}

impl HermForm {
    pub fn new(j: EMat) -> Result<Self> {
        if !j.is_square() {
            return Err(Error::ShapeMismatch("hermitian form must be square".into()));
        }
        if j.conj_transpose() != j {
            return Err(Error::InvalidArgument("form is not hermitian".into()));
        }
        if j.det()?.is_zero() {
            return Err(Error::Singular("hermitian form is degenerate".into()));
        }
        Ok(Self { j, standard_c: None })
    }

    /// `J = diag(I_n, ϖ^c)` on `E^{n+1}`.
    pub fn standard(ctx: FieldCtx, n: usize, c: u32) -> Self {
        let mut d = vec![ctx.one(); n];
        d.push(ctx.uniformizer_pow(c as i64));
        Self { j: EMat::diag(ctx, &d), standard_c: Some(c) }
    }

    pub fn matrix(&self) -> &EMat {
        &self.j
    }

    pub fn dim(&self) -> usize {
        self.j.rows()
    }

    /// `Some(c)` when the form is `diag(I_n, ϖ^c)`.
    pub fn standard_c(&self) -> Option<u32> {
        self.standard_c
    }

    /// `JX + X̄ᵗJ = 0`.
    pub fn in_lie_algebra(&self, x: &EMat) -> Result<bool> {
        self.check(x)?;
        Ok((&(&self.j * x) + &(&x.conj_transpose() * &self.j)).is_zero())
    }

    /// `ḡᵗJg = J`.
    pub fn in_group(&self, g: &EMat) -> Result<bool> {
        self.check(g)?;
        Ok(&(&g.conj_transpose() * &self.j) * g == self.j)
    }

    fn check(&self, x: &EMat) -> Result<()> {
        if !x.is_square() || x.rows() != self.dim() {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} matrix against a form of dimension {}",
                x.rows(),
                x.cols(),
                self.dim()
            )));
        }
        Ok(())
    }
}

/// The sets a square matrix of size `n + 1` can be tested against.
/// The unitary kinds use `J = diag(I_n, ϖ^c)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    /// `u(V)`.
    LieU,
    /// `U(V)`.
    GroupU,
    /// `s_m = {s + s̄ = 0}`.
    LieS,
    /// `S_m = {s s̄ = 1}`.
    GroupS,
    /// Integral with top-right block `≡ 0 mod ϖ^c`.
    BmKTilde,
    /// `BmKTilde` with corner entry `≡ 1 mod ϖ^c`.
    BmK,
    /// `BmKTilde ∩ GL_{n+1}(O_E)`.
    KTildePrime,
    /// `BmK ∩ GL_{n+1}(O_E)`.
    KPrime,
    /// `BmKTilde ∩ S_{n+1}(O_F)`.
    KTildeS,
    /// `BmK ∩ S_{n+1}(O_F)`.
    KS,
    /// `BmKTilde ∩ U(V)`.
    KTildeU,
    /// `BmK ∩ U(V)`.
    KU,
    /// `k̃_c = BmKTilde ∩ u(V)`.
    LieKTilde,
    /// `k̃'_c = BmKTilde ∩ s_{n+1}`.
    LieKTildeS,
}

fn in_bmk_tilde(x: &EMat, c: u32) -> bool {
    let n = x.rows() - 1;
    x.is_integral() && (0..n).all(|i| x.get(i, n).valuation(x.ctx().p).is_at_least(c as i64))
}

fn corner_congruent_one(x: &EMat, c: u32) -> bool {
    let n = x.rows() - 1;
    let ctx = x.ctx();
    (x.get(n, n) - &ctx.one()).valuation(ctx.p).is_at_least(c as i64)
}

fn unit_det(x: &EMat) -> Result<bool> {
    Ok(x.det()?.valuation(x.ctx().p) == Valuation::Finite(0))
}

fn in_lie_s(x: &EMat) -> bool {
    (x + &x.conj()).is_zero()
}

fn in_group_s(x: &EMat) -> bool {
    x * &x.conj() == EMat::identity(x.ctx(), x.rows())
}

/// Exact membership predicate.
pub fn membership(x: &EMat, kind: Kind, c: u32) -> Result<bool> {
    if !x.is_square() || x.rows() == 0 {
        return Err(Error::ShapeMismatch(format!("{}x{} is not a nonempty square matrix", x.rows(), x.cols())));
    }
    let form = || HermForm::standard(x.ctx(), x.rows() - 1, c);
    Ok(match kind {
        Kind::LieU => form().in_lie_algebra(x)?,
        Kind::GroupU => form().in_group(x)?,
        Kind::LieS => in_lie_s(x),
        Kind::GroupS => in_group_s(x),
        Kind::BmKTilde => in_bmk_tilde(x, c),
        Kind::BmK => in_bmk_tilde(x, c) && corner_congruent_one(x, c),
        Kind::KTildePrime => in_bmk_tilde(x, c) && unit_det(x)?,
        Kind::KPrime => in_bmk_tilde(x, c) && corner_congruent_one(x, c) && unit_det(x)?,
        Kind::KTildeS => in_bmk_tilde(x, c) && in_group_s(x),
        Kind::KS => in_bmk_tilde(x, c) && corner_congruent_one(x, c) && in_group_s(x),
        Kind::KTildeU => in_bmk_tilde(x, c) && form().in_group(x)?,
        Kind::KU => in_bmk_tilde(x, c) && corner_congruent_one(x, c) && form().in_group(x)?,
        Kind::LieKTilde => in_bmk_tilde(x, c) && form().in_lie_algebra(x)?,
        Kind::LieKTildeS => in_bmk_tilde(x, c) && in_lie_s(x),
    })
}

fn check_norm_one(xi: &QuadExt) -> Result<()> {
    if !xi.norm().is_one() {
        return Err(Error::InvalidArgument(format!("ξ = {xi} does not have norm 1")));
    }
    Ok(())
}

/// `cay_ξ(X) = ξ(1 + X)(1 − X)^{−1}`.
pub fn cayley(x: &EMat, xi: &QuadExt) -> Result<EMat> {
    check_norm_one(xi)?;
    let ctx = x.ctx();
    let one_minus = (-x).add_scalar(&ctx.one())?;
    if one_minus.det()?.is_zero() {
        return Err(Error::Singular("det(1 - X) = 0".into()));
    }
    Ok(x.add_scalar(&ctx.one())?.try_mul(&one_minus.inverse()?)?.scale(xi))
}

/// `cay_ξ^{−1}(g) = (g − ξ)(g + ξ)^{−1}`.
pub fn cayley_inv(g: &EMat, xi: &QuadExt) -> Result<EMat> {
    check_norm_one(xi)?;
    let plus = g.add_scalar(xi)?;
    if plus.det()?.is_zero() {
        return Err(Error::Singular("det(g + ξ) = 0".into()));
    }
    g.add_scalar(&-xi)?.try_mul(&plus.inverse()?)
}

/// `r(g) = g ḡ^{−1}`.
pub fn r_map(g: &EMat) -> Result<EMat> {
    g.try_mul(&g.conj().inverse()?)
}

/// Norm-one elements `w / w̄` for `w = a + b√u` with `|a|, |b| ≤ height`,
/// deduplicated, starting with `1` and `−1`.
pub fn norm_one_elements(ctx: FieldCtx, height: i64) -> Vec<QuadExt> {
    let mut out = vec![ctx.one(), -ctx.one()];
    for a in -height..=height {
        for b in 0..=height {
            let w = super::qe(ctx, a, b);
            if w.is_zero() {
                continue;
            }
            let xi = &w / &w.conj();
            if !out.contains(&xi) {
                out.push(xi);
            }
        }
    }
    out
}

/// A norm-one `ξ` with `det(g + ξ)` a unit: `1` when possible, otherwise the
/// first small-height candidate that works.
pub fn unit_cayley_xi(g: &EMat) -> Option<QuadExt> {
    let ctx = g.ctx();
    norm_one_elements(ctx, 4).into_iter().find(|xi| {
        g.add_scalar(xi)
            .and_then(|m| m.det())
            .map(|d| d.valuation(ctx.p) == Valuation::Finite(0))
            .unwrap_or(false)
    })
}
