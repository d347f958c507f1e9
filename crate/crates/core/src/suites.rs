//! Batch verification suites. Every parameter draw comes from one seeded
//! generator; evaluation may run in parallel and the reports are sorted
//! before they are returned.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::assembly::{i_assembled, i_closed, j_main, j_via_bridge, PairData};
use crate::error::{Error, Result};
use crate::hermitian::{
    cayley, cayley_inv, det_stack_identity_check, iota_c, membership, norm_one_elements, r_map, random,
    transfer_factor, HermForm, Kind, TransferKind,
};
use crate::lfactors::{asai_cancellation_check, pair_dual_lfactor, rs_lfactor};
use crate::numerics::{rat_pow, rat_to_f64, CNum, FieldCtx, Rat, ToleranceCfg};
use crate::orbital_rank1::{fl_check_rank1, group_spot_check};
use crate::params;
use crate::periods::{
    beta_closed, beta_spherical_closed, beta_spherical_truncated, beta_truncated, lambda_closed,
    lambda_truncated, theta_truncated, vol_gl_f64, TruncationCfg,
};
use crate::report::{sort_reports, Params, VerificationReport};
use crate::reps::{is_conjugate_selfdual, unramified_part, SatakeSet};
use crate::samples::{ramified_rep, selfdual_params, selfdual_ramified_rep, selfdual_satake, tempered_satake, unit_circle};
use crate::symfunc::{macdonald_closed, macdonald_sum};
use crate::volumes::{c1, dual_lattice_index, vol_gl, vol_lie_uv, vol_unitary_w, volume_table};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    All,
    Macdonald,
    Beta,
    Theta,
    Lambda,
    Volumes,
    C1,
    AsaiCancel,
    MainTheorem,
    FlRank1,
    MatrixIdentities,
}

impl Suite {
    /// Every concrete suite, in the order `all` runs them.
    pub const CONCRETE: [Suite; 10] = [
        Suite::Macdonald,
        Suite::Beta,
        Suite::Theta,
        Suite::Lambda,
        Suite::Volumes,
        Suite::C1,
        Suite::AsaiCancel,
        Suite::MainTheorem,
        Suite::FlRank1,
        Suite::MatrixIdentities,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Macdonald => "macdonald",
            Suite::Beta => "beta",
            Suite::Theta => "theta",
            Suite::Lambda => "lambda",
            Suite::Volumes => "volumes",
            Suite::C1 => "c1",
            Suite::AsaiCancel => "asai-cancel",
            Suite::MainTheorem => "main-theorem",
            Suite::FlRank1 => "fl-rank1",
            Suite::MatrixIdentities => "matrix-identities",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        std::iter::once(Suite::All)
            .chain(Suite::CONCRETE)
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite `{s}`")))
    }
}

/// Optional restrictions of a suite's parameter grid. `None` means the
/// suite's default grid; `tol` overrides each suite's default tolerance.
#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    pub q_f: Option<u64>,
    pub p: Option<u64>,
    pub u: Option<i64>,
    pub n: Option<usize>,
    pub c: Option<u32>,
    pub eps: Option<u8>,
    pub depth: Option<u32>,
    pub tol: Option<ToleranceCfg>,
    pub seed: u64,
    pub vmax: u32,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self { q_f: None, p: None, u: None, n: None, c: None, eps: None, depth: None, tol: None, seed: 0, vmax: 4 }
    }
}

impl SuiteConfig {
    fn tol(&self, rel: f64) -> ToleranceCfg {
        self.tol.unwrap_or(ToleranceCfg { rel, abs: 1e-14 })
    }

    fn trunc(&self, depth: u32) -> Result<TruncationCfg> {
        TruncationCfg::new(self.depth.unwrap_or(depth), 1e-10)
    }

    fn ns(&self, default: &[usize]) -> Vec<usize> {
        self.n.map_or_else(|| default.to_vec(), |n| vec![n])
    }

    fn ctx(&self, p: u64) -> Result<FieldCtx> {
        match self.u {
            Some(u) => FieldCtx::new(p, u),
            None => FieldCtx::with_default_u(p),
        }
    }

    fn primes(&self, default: &[u64]) -> Vec<u64> {
        self.p.or(self.q_f).map_or_else(|| default.to_vec(), |p| vec![p])
    }

    /// Rejects configurations no suite can run on.
    pub fn validate(&self, suite: Suite) -> Result<()> {
        if let Some(q) = self.q_f {
            if q < 3 {
                return Err(Error::InvalidArgument(format!("q_F must be at least 3, got {q}")));
            }
            if let Some(n) = self.n {
                if q as usize <= n {
                    return Err(Error::InvalidArgument(format!("need q_F > n (q_F = {q}, n = {n})")));
                }
            }
        }
        if let Some(e) = self.eps {
            if e > 1 {
                return Err(Error::InvalidArgument(format!("ε must be 0 or 1, got {e}")));
            }
        }
        if matches!(suite, Suite::MainTheorem | Suite::All) {
            if self.c == Some(0) {
                return Err(Error::InvalidArgument("main-theorem needs conductor c >= 1".into()));
            }
            if let (Some(c), Some(e)) = (self.c, self.eps) {
                if c % 2 != u32::from(e) {
                    return Err(Error::InvalidArgument(format!("need c ≡ ε mod 2 (c = {c}, ε = {e})")));
                }
            }
            if self.n == Some(0) {
                return Err(Error::InvalidArgument("need n >= 1".into()));
            }
        }
        if matches!(suite, Suite::FlRank1 | Suite::MatrixIdentities) {
            for p in self.primes(&[3]) {
                self.ctx(p)?;
            }
        }
        Ok(())
    }
}

/// Runs `suite` under `cfg` and returns its sorted reports.
pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    cfg.validate(suite)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = Vec::new();
    let list: Vec<Suite> = if suite == Suite::All { Suite::CONCRETE.to_vec() } else { vec![suite] };
    for s in list {
        out.extend(run_one(s, cfg, &mut rng)?);
    }
    sort_reports(&mut out);
    Ok(out)
}

fn run_one(suite: Suite, cfg: &SuiteConfig, rng: &mut ChaCha8Rng) -> Result<Vec<VerificationReport>> {
    match suite {
        Suite::All => unreachable!("expanded by run_suite"),
        Suite::Macdonald => macdonald(cfg, rng),
        Suite::Beta => beta(cfg, rng),
        Suite::Theta => theta(cfg, rng),
        Suite::Lambda => lambda(cfg, rng),
        Suite::Volumes => volumes(cfg),
        Suite::C1 => c1_suite(cfg),
        Suite::AsaiCancel => asai_cancel(cfg, rng),
        Suite::MainTheorem => main_theorem(cfg, rng),
        Suite::FlRank1 => fl_rank1(cfg, rng),
        Suite::MatrixIdentities => matrix_identities(cfg, rng),
    }
}

fn draw(i: usize) -> String {
    format!("{i:02}")
}

fn fmt_c(a: &[CNum]) -> String {
    crate::lfactors::format_params(a)
}

fn r2c(x: &Rat) -> CNum {
    CNum::new(rat_to_f64(x), 0.0)
}

fn b2c(b: bool) -> CNum {
    CNum::new(if b { 1.0 } else { 0.0 }, 0.0)
}

fn failed(suite: &str, check: &str, params: Params, e: &Error) -> VerificationReport {
    let nan = CNum::new(f64::NAN, f64::NAN);
    VerificationReport::exact(suite, check, params, false, nan, nan).with_note(e.to_string())
}

fn macdonald(cfg: &SuiteConfig, rng: &mut ChaCha8Rng) -> Result<Vec<VerificationReport>> {
    const S: &str = "macdonald";
    let depth = cfg.depth.unwrap_or(60);
    let tol = cfg.tol(1e-9);
    let draws: Vec<Vec<CNum>> = (0..20)
        .map(|i| {
            let r = cfg.n.unwrap_or(1 + i % 3);
            (0..r).map(|_| unit_circle(rng) * rng.random_range(0.0..=0.6)).collect()
        })
        .collect();
    Ok(draws
        .par_iter()
        .enumerate()
        .map(|(i, x)| {
            let p = params! {"draw" => draw(i), "r" => x.len(), "depth" => depth, "x" => fmt_c(x)};
            match macdonald_sum(x, depth).and_then(|s| Ok((s, macdonald_closed(x)?))) {
                Ok((lhs, rhs)) => VerificationReport::hard(S, "schur-sum", p, lhs, rhs, tol),
                Err(e) => failed(S, "schur-sum", p, &e),
            }
        })
        .collect())
}

fn beta(cfg: &SuiteConfig, rng: &mut ChaCha8Rng) -> Result<Vec<VerificationReport>> {
    const S: &str = "beta";
    let q_f = cfg.q_f.unwrap_or(3);
    let trunc = cfg.trunc(40)?;
    let tol = cfg.tol(1e-8);
    let mut jobs = Vec::new();
    for n in cfg.ns(&[1, 2, 3]) {
        for r in 0..=n {
            for i in 0..10 {
                let alpha: Vec<CNum> = (0..r).map(|_| unit_circle(rng)).collect();
                let c = (n + 1 - r) as u32 + rng.random_range(0..2);
                jobs.push((n, r, i, c, alpha));
            }
        }
    }
    let mut out: Vec<VerificationReport> = jobs
        .par_iter()
        .map(|(n, r, i, c, alpha)| {
            let p = params! {"n" => n, "r" => r, "draw" => draw(*i), "c" => c, "q_f" => q_f, "alpha" => fmt_c(alpha)};
            let run = || -> Result<VerificationReport> {
                let rep = ramified_rep(alpha, n + 1, *c)?;
                let t = beta_truncated(&rep, q_f, trunc)?;
                let closed = beta_closed(&rep, q_f)?;
                Ok(VerificationReport::hard(S, "ramified", p.clone(), t.value, closed, tol).with_tail(t.tail_estimate))
            };
            run().unwrap_or_else(|e| failed(S, "ramified", p.clone(), &e))
        })
        .collect();
    let spherical: Vec<(usize, usize, SatakeSet)> = [2usize, 3]
        .iter()
        .flat_map(|&m| (0..3).map(move |i| (m, i)))
        .map(|(m, i)| Ok((m, i, selfdual_satake(rng, m, q_f * q_f)?)))
        .collect::<Result<_>>()?;
    let sph: Vec<VerificationReport> = spherical.par_iter().map(|(m, i, sigma)| {
        let p = params! {"m" => m, "draw" => draw(*i), "q_f" => q_f, "sigma" => fmt_c(sigma.params())};
        let run = || -> Result<VerificationReport> {
            let t = beta_spherical_truncated(sigma, q_f, trunc)?;
            let closed = beta_spherical_closed(sigma, q_f)?;
            Ok(VerificationReport::soft(S, "spherical", p.clone(), t.value, closed, tol).with_tail(t.tail_estimate))
        };
        run().unwrap_or_else(|e| failed(S, "spherical", p.clone(), &e))
    }).collect();
    out.extend(sph);
    Ok(out)
}

/// Per-draw ratio checks against the first draw, plus a soft comparison of
/// the mean ratio with the expected constant.
fn ratio_reports(
    suite: &str,
    base: Params,
    ratios: &[(Params, Result<(CNum, f64)>)],
    expected: CNum,
    spread: ToleranceCfg,
    soft: ToleranceCfg,
) -> Vec<VerificationReport> {
    let mut out = Vec::new();
    let reference = ratios.iter().find_map(|(_, r)| r.as_ref().ok().map(|x| x.0));
    let mut sum = CNum::zero();
    let mut count = 0.0;
    for (p, r) in ratios {
        match (r, reference) {
            (Ok((ratio, tail)), Some(r0)) => {
                sum += ratio;
                count += 1.0;
                out.push(VerificationReport::hard(suite, "ratio-spread", p.clone(), *ratio, r0, spread).with_tail(*tail));
            }
            (Err(e), _) => out.push(failed(suite, "ratio-spread", p.clone(), e)),
            (Ok(_), None) => unreachable!("a successful ratio exists"),
        }
    }
    if count > 0.0 {
        let mean = sum / count;
        let r = VerificationReport::soft(suite, "constant", base, mean, expected, soft);
        let note = format!("measured constant {:.12}, expected {:.12}, factor {:.12}", mean.re, expected.re, (mean / expected).re);
        out.push(r.with_note(note));
    }
    out
}

fn theta(cfg: &SuiteConfig, rng: &mut ChaCha8Rng) -> Result<Vec<VerificationReport>> {
    const S: &str = "theta";
    let q_f = cfg.q_f.unwrap_or(3);
    let q_e = q_f * q_f;
    let trunc = cfg.trunc(40)?;
    let spread = cfg.tol(1e-7);
    let mut out = Vec::new();
    for k in cfg.ns(&[2, 3]) {
        let sigmas: Vec<SatakeSet> = (0..10).map(|_| tempered_satake(rng, k, q_e)).collect::<Result<_>>()?;
        let ratios: Vec<(Params, Result<(CNum, f64)>)> = sigmas
            .par_iter()
            .enumerate()
            .map(|(i, s)| {
                let p = params! {"k" => k, "q_e" => q_e, "draw" => draw(i), "sigma" => fmt_c(s.params())};
                let r = theta_truncated(s, trunc)
                    .and_then(|t| Ok((t.value / pair_dual_lfactor(s)?.eval_real(1.0)?, t.tail_estimate)));
                (p, r)
            })
            .collect();
        let expected = CNum::new(vol_gl_f64(k - 1, q_e), 0.0);
        let base = params! {"k" => k, "q_e" => q_e};
        out.extend(ratio_reports(S, base, &ratios, expected, spread, cfg.tol(1e-8)));
    }
    Ok(out)
}

fn lambda(cfg: &SuiteConfig, rng: &mut ChaCha8Rng) -> Result<Vec<VerificationReport>> {
    const S: &str = "lambda";
    let q_f = cfg.q_f.unwrap_or(3);
    let q_e = q_f * q_f;
    let trunc = cfg.trunc(40)?;
    let tol = cfg.tol(1e-8);
    let mut out = Vec::new();
    for n in cfg.ns(&[1, 2, 3]) {
        let mut jobs = Vec::new();
        for i in 0..10 {
            let sigma = tempered_satake(rng, n, q_e)?;
            let r = rng.random_range(0..=n);
            let alpha: Vec<CNum> = (0..r).map(|_| unit_circle(rng)).collect();
            let rep = ramified_rep(&alpha, n + 1, (n + 1 - r) as u32)?;
            jobs.push((i, sigma, rep));
        }
        let evals: Vec<(Params, Result<(CNum, CNum, f64)>)> = jobs
            .par_iter()
            .map(|(i, sigma, rep)| {
                let p = params! {
                    "n" => n, "q_e" => q_e, "draw" => draw(*i),
                    "sigma" => fmt_c(sigma.params()), "rep" => rep.to_json(),
                };
                let r = lambda_truncated(sigma, rep, trunc)
                    .and_then(|t| Ok((t.value, lambda_closed(sigma, rep)?, t.tail_estimate)));
                (p, r)
            })
            .collect();
        if n <= 2 {
            out.extend(evals.into_iter().map(|(p, r)| match r {
                Ok((lhs, rhs, tail)) => VerificationReport::hard(S, "closed-form", p, lhs, rhs, tol).with_tail(tail),
                Err(e) => failed(S, "closed-form", p, &e),
            }));
        } else {
            let vol = vol_gl_f64(n, q_e);
            let ratios: Vec<(Params, Result<(CNum, f64)>)> = jobs
                .iter()
                .zip(evals)
                .map(|((_, sigma, rep), (p, r))| {
                    let ratio = r.and_then(|(t, _, tail)| {
                        let (_, sigma_u) = unramified_part(rep, q_e)?;
                        let l = rs_lfactor(sigma, &sigma_u)?.eval_real(0.5)?;
                        Ok((t / l, tail))
                    });
                    (p, ratio)
                })
                .collect();
            let base = params! {"n" => n, "q_e" => q_e};
            out.extend(ratio_reports(S, base, &ratios, CNum::new(vol, 0.0), cfg.tol(1e-7), tol));
        }
    }
    Ok(out)
}

fn asai_cancel(cfg: &SuiteConfig, rng: &mut ChaCha8Rng) -> Result<Vec<VerificationReport>> {
    const S: &str = "asai-cancel";
    let q_e = cfg.q_f.unwrap_or(3).pow(2);
    let tol = cfg.tol(1e-10);
    let sym_tol = ToleranceCfg::new(1e-9, 1e-9)?;
    let mut out = Vec::new();
    for i in 0..20 {
        let m = cfg.n.unwrap_or(1 + i % 4);
        let params = selfdual_params(rng, m);
        let sigma = SatakeSet::new(params.clone(), q_e)?;
        for parity in 0..2 {
            let mut r = asai_cancellation_check(&sigma, parity, tol);
            r.params.insert("draw".into(), draw(i));
            out.push(r);
        }
        let p = params! {"draw" => draw(i), "m" => m, "sigma" => fmt_c(&params)};
        let accepted = is_conjugate_selfdual(&sigma, sym_tol);
        out.push(VerificationReport::exact(S, "satake-symmetry", p.clone(), accepted, b2c(accepted), b2c(true)));
        let j = rng.random_range(0..m);
        let mut moved = params.clone();
        moved[j] += CNum::new(1e-3, 0.0);
        let perturbed = SatakeSet::new(moved, q_e)?;
        let rejected = !is_conjugate_selfdual(&perturbed, sym_tol);
        let mut pp = p;
        pp.insert("perturbed".into(), j.to_string());
        out.push(VerificationReport::exact(S, "perturbation-detected", pp, rejected, b2c(rejected), b2c(true)));
    }
    Ok(out)
}

fn c1_suite(cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    const S: &str = "c1";
    let ns: Vec<u32> = cfg.n.map_or_else(|| (1..=4).collect(), |n| vec![n as u32]);
    let cs: Vec<u32> = cfg.c.map_or_else(|| (1..=5).collect(), |c| vec![c]);
    let qs: Vec<u64> = cfg.q_f.map_or_else(|| vec![3, 5, 7, 9, 27], |q| vec![q]);
    let mut out = Vec::new();
    for &n in &ns {
        for &c in &cs {
            for &q in &qs {
                let p = params! {"n" => n, "c" => c, "q_f" => q};
                out.push(match c1(n, c, q) {
                    Ok((a, b)) => VerificationReport::exact(S, "two-expressions", p, a == b, r2c(&a), r2c(&b))
                        .with_note(format!("c1 = {a}")),
                    Err(e) => failed(S, "two-expressions", p, &e),
                });
            }
        }
    }
    Ok(out)
}

fn volumes(cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    const S: &str = "volumes";
    let ns: Vec<u32> = cfg.n.map_or_else(|| (1..=4).collect(), |n| vec![n as u32]);
    let cs: Vec<u32> = cfg.c.map_or_else(|| (1..=5).collect(), |c| vec![c]);
    let qs: Vec<u64> = cfg.q_f.map_or_else(|| vec![3, 5, 7, 9, 27], |q| vec![q]);
    let one = Rat::one();
    let mut out = Vec::new();
    for &q in &qs {
        let p = params! {"q_f" => q};
        let g = vol_gl(1, q);
        out.push(VerificationReport::exact(S, "vol-gl1", p.clone(), g == one, r2c(&g), r2c(&one)));
        let u = vol_unitary_w(1, q);
        out.push(VerificationReport::exact(S, "vol-u1", p, u == one, r2c(&u), r2c(&one)));
        for &n in &ns {
            for &c in &cs {
                let p = params! {"q_f" => q, "n" => n, "c" => c};
                match volume_table(n, c, q) {
                    Ok(table) => {
                        for (name, v) in table {
                            let mut pp = p.clone();
                            pp.insert("quantity".into(), name);
                            let pos = v > Rat::zero();
                            out.push(VerificationReport::exact(S, "positive", pp, pos, r2c(&v), CNum::zero()));
                        }
                    }
                    Err(e) => out.push(failed(S, "positive", p.clone(), &e)),
                }
                let want = rat_pow(q, -i64::from(c * n));
                out.push(match vol_lie_uv(n, c, q) {
                    Ok(v) => {
                        let ok = v == want && dual_lattice_index(n, c, q) > Rat::zero();
                        VerificationReport::exact(S, "dual-lattice", p, ok, r2c(&v), r2c(&want))
                    }
                    Err(e) => failed(S, "dual-lattice", p, &e),
                });
            }
        }
    }
    Ok(out)
}

fn main_theorem(cfg: &SuiteConfig, rng: &mut ChaCha8Rng) -> Result<Vec<VerificationReport>> {
    const S: &str = "main-theorem";
    let trunc = cfg.trunc(60)?;
    let tol = cfg.tol(1e-9);
    let mut jobs = Vec::new();
    for i in 0..20 {
        let n = cfg.n.unwrap_or(1 + i % 3);
        let q_f = match cfg.q_f {
            Some(q) => q,
            None => {
                let choices: Vec<u64> = [3, 5, 7].into_iter().filter(|&q| q as usize > n).collect();
                choices[rng.random_range(0..choices.len())]
            }
        };
        let c = cfg.c.unwrap_or_else(|| rng.random_range(1..=4));
        let eps = cfg.eps.unwrap_or((c % 2) as u8);
        let sigma = selfdual_satake(rng, n, q_f * q_f)?;
        let rep = selfdual_ramified_rep(rng, n + 1, c)?;
        jobs.push((i, PairData::new(sigma, rep, q_f, eps)?));
    }
    let out: Vec<Vec<VerificationReport>> = jobs
        .par_iter()
        .map(|(i, d)| {
            let p = params! {
                "draw" => draw(*i), "n" => d.n, "c" => d.c, "eps" => d.eps, "q_f" => d.q_f,
                "sigma" => fmt_c(d.sigma_n.params()), "rep" => d.rep.to_json(),
            };
            let mut v = Vec::new();
            v.push(match j_main(d).and_then(|j| Ok((j, j_via_bridge(d)?))) {
                Ok((lhs, rhs)) => VerificationReport::hard(S, "j-main", p.clone(), lhs, rhs, tol),
                Err(e) => failed(S, "j-main", p.clone(), &e),
            });
            if d.n <= 2 {
                v.push(match i_assembled(d, trunc).and_then(|a| Ok((a, i_closed(d)?))) {
                    Ok((lhs, rhs)) => VerificationReport::hard(S, "i-assembled", p.clone(), lhs, rhs, tol),
                    Err(e) => failed(S, "i-assembled", p, &e),
                });
            }
            v
        })
        .collect();
    Ok(out.into_iter().flatten().collect())
}

fn fl_rank1(cfg: &SuiteConfig, rng: &mut ChaCha8Rng) -> Result<Vec<VerificationReport>> {
    let cs: Vec<u32> = cfg.c.map_or_else(|| (0..=3).collect(), |c| vec![c]);
    let mut out = Vec::new();
    for p in cfg.primes(&[3, 7]) {
        let ctx = cfg.ctx(p)?;
        for &c in &cs {
            out.extend(fl_check_rank1(ctx, c, cfg.vmax));
            out.extend(group_spot_check(rng, ctx, c, 50));
        }
    }
    Ok(out)
}

fn matrix_identities(cfg: &SuiteConfig, rng: &mut ChaCha8Rng) -> Result<Vec<VerificationReport>> {
    const S: &str = "matrix-identities";
    let p = cfg.p.or(cfg.q_f).unwrap_or(3);
    let ctx = cfg.ctx(p)?;
    let mut out = Vec::new();
    let exact = |check: &str, params: Params, r: Result<bool>| match r {
        Ok(ok) => VerificationReport::exact(S, check, params, ok, b2c(ok), b2c(true)),
        Err(e) => failed(S, check, params, &e),
    };

    for i in 0..200 {
        let m = 1 + i % 4;
        let x = random::integral(rng, ctx, m + 1, m + 1, 5);
        let pr = params! {"p" => p, "sample" => format!("{i:03}"), "m" => m};
        out.push(exact("det-stack", pr, det_stack_identity_check(&x)));
    }

    let xis = norm_one_elements(ctx, 3);
    for i in 0..100 {
        let n = 1 + i % 3;
        let c = (i % 4) as u32;
        let xi = xis[rng.random_range(0..xis.len())].clone();
        let (x, g) = loop {
            let x = random::lie_u(rng, ctx, n, c, 4);
            match cayley(&x, &xi) {
                Ok(g) => break (x, g),
                Err(Error::Singular(_)) => continue,
                Err(e) => return Err(e),
            }
        };
        let h = random::embedded_gl_e(rng, ctx, n, 3);
        let pr = params! {"p" => p, "sample" => format!("{i:03}"), "n" => n, "c" => c};
        let run = || -> Result<bool> {
            let form = HermForm::standard(ctx, n, c);
            let unitary = form.in_group(&g)?;
            let round = cayley_inv(&g, &xi)? == x;
            let hi = h.inverse()?;
            let conj_x = &(&h * &x) * &hi;
            let equi = cayley(&conj_x, &xi)? == &(&h * &g) * &hi;
            Ok(unitary && round && equi)
        };
        out.push(exact("cayley-unitary-equivariant", pr, run()));
    }

    let mut done = 0;
    let mut k = 0;
    while done < 100 {
        k += 1;
        let n = 1 + k % 3;
        let c = (k % 4) as u32;
        let xi = xis[rng.random_range(0..xis.len())].clone();
        let g = if k % 2 == 0 {
            random::bmk_tilde(rng, ctx, n, c, 4)
        } else {
            match cayley(&random::lie_u(rng, ctx, n, c, 4), &xi) {
                Ok(g) => g,
                Err(_) => continue,
            }
        };
        let sum = g.add_scalar(&xi);
        let unit = sum?.det()?.valuation(ctx.p) == crate::numerics::Valuation::Finite(0);
        if !(unit && membership(&g, Kind::BmKTilde, c)?) {
            continue;
        }
        let pr = params! {"p" => p, "sample" => format!("{done:03}"), "n" => n, "c" => c};
        let r = cayley_inv(&g, &xi).and_then(|x| {
            let lattice = membership(&x, Kind::BmKTilde, c)?;
            Ok(lattice && (!membership(&g, Kind::GroupU, c)? || membership(&x, Kind::LieKTilde, c)?))
        });
        out.push(exact("cayley-lattice", pr, r));
        done += 1;
    }

    let mut done = 0;
    while done < 100 {
        let n = 1 + done % 3;
        let c = rng.random_range(0..=3u32);
        let y = random::lie_s(rng, ctx, n + 1, 4);
        let pr = params! {"p" => p, "sample" => format!("{done:03}"), "n" => n, "c" => c};
        let lhs = match transfer_factor(&y, TransferKind::Omega) {
            Ok(w) => w,
            Err(Error::NonRegular) => continue,
            Err(e) => return Err(e),
        };
        let r = iota_c(&y, c).and_then(|yc| transfer_factor(&yc, TransferKind::Omega));
        out.push(match r {
            Ok(rhs) => VerificationReport::exact(
                S,
                "omega-iota",
                pr,
                lhs == rhs,
                CNum::new(f64::from(lhs), 0.0),
                CNum::new(f64::from(rhs), 0.0),
            ),
            Err(e) => failed(S, "omega-iota", pr, &e),
        });
        done += 1;
    }

    for i in 0..100 {
        let n = 1 + i % 3;
        let c = (i % 4) as u32;
        let g = random::kprime(rng, ctx, n, c, 4);
        let pr = params! {"p" => p, "sample" => format!("{i:03}"), "n" => n, "c" => c};
        out.push(exact("r-map", pr, r_map(&g).and_then(|s| membership(&s, Kind::KS, c))));
    }
    Ok(out)
}

/// Exact rational volumes and constants at one `(n, c, q_F)`, for display.
pub fn volume_summary(n: u32, c: u32, q_f: u64) -> Result<Vec<(String, Rat)>> {
    let mut rows = volume_table(n, c, q_f)?;
    rows.push(("c1".into(), c1(n, c, q_f)?.0));
    if !rows.iter().any(|(k, _)| k == "C") {
        rows.push(("C".into(), crate::volumes::constant_c(n, c, q_f)?));
    }
    Ok(rows)
}
