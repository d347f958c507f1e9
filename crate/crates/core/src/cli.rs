//! Command-line front end: `verify`, `compute` and `volumes`.
//!
//! Exit codes: 0 on success, 1 on a hard verification failure or an
//! evaluation error, 2 on an invalid configuration.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::assembly::{i_closed, j_main_breakdown, PairData};
use crate::error::{Error, Result};
use crate::lfactors::{asai_lfactor, pair_dual_lfactor};
use crate::numerics::{CNum, ToleranceCfg};
use crate::report::{any_hard_failure, Status, VerificationReport};
use crate::reps::{GenericRep, SatakeSet};
use crate::samples::selfdual_ramified_rep;
use crate::suites::{run_suite, volume_summary, Suite, SuiteConfig};
use crate::whittaker::{essential_value, spherical_value};

#[derive(Debug, Parser)]
#[command(name = "newform-periods", version, about = "Local period formulas and their verification suites")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a verification suite and write its reports as JSON.
    Verify {
        /// all, macdonald, beta, theta, lambda, volumes, c1, asai-cancel,
        /// main-theorem, fl-rank1 or matrix-identities
        suite: String,
    },
    /// Evaluate a single quantity.
    Compute {
        target: Target,
        /// Asai sign (`+` or `-`) for `lfactor`; without it the pair factor
        /// L(s, σ × σ̄) is evaluated.
        #[arg(long, allow_hyphen_values = true)]
        asai: Option<String>,
        /// Torus exponents for `whittaker`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        lambda: Option<Vec<i64>>,
        /// Evaluation point for `lfactor`.
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        s: f64,
    },
    /// Print the exact volume table, c₁ and C.
    Volumes,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Lfactor,
    Whittaker,
    JMain,
    IClosed,
}

/// Flags shared by every subcommand; each may also come from `--config`.
#[derive(Debug, Default, Args)]
pub struct RunArgs {
    #[arg(long, global = true)]
    pub qf: Option<u64>,
    #[arg(long, global = true)]
    pub p: Option<u64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub u: Option<i64>,
    #[arg(long, global = true)]
    pub n: Option<usize>,
    #[arg(long, global = true)]
    pub c: Option<u32>,
    #[arg(long, global = true)]
    pub eps: Option<u8>,
    /// Comma-separated Satake parameters: `0.5`, `1+2i`, `-i` or `@theta` (e^{iθ}).
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub satake: Option<String>,
    /// JSON file holding a representation as `{"segments": [...]}`.
    #[arg(long, global = true)]
    pub segments_file: Option<PathBuf>,
    #[arg(long, global = true)]
    pub depth: Option<u32>,
    #[arg(long, global = true)]
    pub tol_rel: Option<f64>,
    #[arg(long, global = true)]
    pub tol_abs: Option<f64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output path for the JSON report array (stdout when absent).
    #[arg(long, global = true)]
    pub json: Option<PathBuf>,
    /// Largest valuation in the rank-one grid.
    #[arg(long, global = true)]
    pub vmax: Option<u32>,
    /// Flat TOML file with the same keys as the flags; flags win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct FileConfig {
    qf: Option<u64>,
    p: Option<u64>,
    u: Option<i64>,
    n: Option<usize>,
    c: Option<u32>,
    eps: Option<u8>,
    satake: Option<String>,
    segments_file: Option<PathBuf>,
    depth: Option<u32>,
    tol_rel: Option<f64>,
    tol_abs: Option<f64>,
    seed: Option<u64>,
    json: Option<PathBuf>,
    vmax: Option<u32>,
}

/// Fully merged run configuration.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunConfig {
    pub q_f: Option<u64>,
    pub p: Option<u64>,
    pub u: Option<i64>,
    pub n: Option<usize>,
    pub c: Option<u32>,
    pub eps: Option<u8>,
    pub satake: Option<Vec<CNum>>,
    pub segments_file: Option<PathBuf>,
    pub depth: Option<u32>,
    pub tol: Option<ToleranceCfg>,
    pub seed: u64,
    pub json: Option<PathBuf>,
    pub vmax: u32,
}

impl RunConfig {
    pub fn from_args(args: &RunArgs) -> Result<Self> {
        let file = match &args.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)?;
                toml::from_str::<FileConfig>(&text)
                    .map_err(|e| Error::InvalidArgument(format!("config {}: {e}", path.display())))?
            }
            None => FileConfig::default(),
        };
        let tol = match (args.tol_rel.or(file.tol_rel), args.tol_abs.or(file.tol_abs)) {
            (None, None) => None,
            (rel, abs) => {
                let d = ToleranceCfg::default();
                Some(ToleranceCfg::new(rel.unwrap_or(d.rel), abs.unwrap_or(d.abs))?)
            }
        };
        let satake = args.satake.clone().or(file.satake).map(|s| parse_satake(&s)).transpose()?;
        let seed = args.seed.or(file.seed).unwrap_or(0);
        let vmax = args.vmax.or(file.vmax).unwrap_or(4);
        Ok(Self {
            q_f: args.qf.or(file.qf),
            p: args.p.or(file.p),
            u: args.u.or(file.u),
            n: args.n.or(file.n),
            c: args.c.or(file.c),
            eps: args.eps.or(file.eps),
            satake,
            segments_file: args.segments_file.clone().or(file.segments_file),
            depth: args.depth.or(file.depth),
            tol,
            seed,
            json: args.json.clone().or(file.json),
            vmax,
        })
    }

    pub fn suite_config(&self) -> SuiteConfig {
        SuiteConfig {
            q_f: self.q_f,
            p: self.p,
            u: self.u,
            n: self.n,
            c: self.c,
            eps: self.eps,
            depth: self.depth,
            tol: self.tol,
            seed: self.seed,
            vmax: self.vmax,
        }
    }

    fn q_f(&self) -> u64 {
        self.q_f.or(self.p).unwrap_or(3)
    }

    fn sigma(&self) -> Result<SatakeSet> {
        let params = self.satake.clone().ok_or_else(|| Error::InvalidArgument("--satake is required".into()))?;
        let q = self.q_f();
        SatakeSet::new(params, q * q)
    }

    fn rep(&self, n: usize) -> Result<GenericRep> {
        match &self.segments_file {
            Some(path) => GenericRep::from_json(&std::fs::read_to_string(path)?),
            None => {
                let c = self.c.ok_or_else(|| Error::InvalidArgument("need --segments-file or --c".into()))?;
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                selfdual_ramified_rep(&mut rng, n + 1, c)
            }
        }
    }

    fn pair(&self) -> Result<PairData> {
        let sigma = self.sigma()?;
        let rep = self.rep(sigma.rank())?;
        let eps = self.eps.unwrap_or((rep.conductor() % 2) as u8);
        PairData::new(sigma, rep, self.q_f(), eps)
    }
}

/// Parses `a,b,…` where each entry is a real, `x+yi`, `yi` or `@θ`.
pub fn parse_satake(s: &str) -> Result<Vec<CNum>> {
    s.split(',').map(|t| parse_complex(t.trim())).collect()
}

fn parse_complex(t: &str) -> Result<CNum> {
    let bad = || Error::InvalidArgument(format!("cannot parse Satake parameter `{t}`"));
    if let Some(theta) = t.strip_prefix('@') {
        return Ok(CNum::from_polar(1.0, theta.parse::<f64>().map_err(|_| bad())?));
    }
    let Some(body) = t.strip_suffix('i') else {
        return Ok(CNum::new(t.parse::<f64>().map_err(|_| bad())?, 0.0));
    };
    let split = body
        .char_indices()
        .skip(1)
        .filter(|&(k, ch)| (ch == '+' || ch == '-') && !matches!(body.as_bytes()[k - 1], b'e' | b'E'))
        .map(|(k, _)| k)
        .last();
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        x => x.parse::<f64>().map_err(|_| bad())?,
    };
    Ok(CNum::new(re.parse::<f64>().map_err(|_| bad())?, im))
}

fn fmt_c(z: CNum) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else {
        format!("{}{:+}i", z.re, z.im)
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = write!(err, "{}", e.render());
            return code;
        }
    };
    let cfg = match RunConfig::from_args(&cli.run) {
        Ok(cfg) => cfg,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 2;
        }
    };
    let result = match &cli.command {
        Command::Verify { suite } => verify(suite, &cfg, out, err),
        Command::Compute { target, asai, lambda, s } => compute(*target, asai.as_deref(), lambda.as_deref(), *s, &cfg, out),
        Command::Volumes => volumes(&cfg, out).map(|()| 0),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::InvalidArgument(_) | Error::ShapeMismatch(_) => 2,
                _ => 1,
            }
        }
    }
}

fn verify(suite: &str, cfg: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let suite: Suite = suite.parse()?;
    let reports = run_suite(suite, &cfg.suite_config())?;
    let json = serde_json::to_string_pretty(&reports)?;
    match &cfg.json {
        Some(path) => write_file(path, &json)?,
        None => writeln!(out, "{json}")?,
    }
    if suite == Suite::Volumes {
        if let (Some(q), Some(n), Some(c)) = (cfg.q_f, cfg.n, cfg.c) {
            for (name, v) in volume_summary(n as u32, c, q)? {
                if name == "c1" || name == "C" {
                    writeln!(err, "{name} = {v}")?;
                }
            }
        }
    }
    summarize(suite, &reports, err)?;
    Ok(if any_hard_failure(&reports) { 1 } else { 0 })
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    let mut f = std::fs::File::create(path)?;
    f.write_all(text.as_bytes())?;
    f.write_all(b"\n")?;
    Ok(())
}

fn summarize(suite: Suite, reports: &[VerificationReport], err: &mut dyn Write) -> Result<()> {
    let count = |s: Status| reports.iter().filter(|r| r.status == s).count();
    writeln!(
        err,
        "{suite}: {} checks, {} pass, {} fail, {} soft-discrepancy, {} rejected",
        reports.len(),
        count(Status::Pass),
        count(Status::Fail),
        count(Status::SoftDiscrepancy),
        count(Status::RejectedInput)
    )?;
    for r in reports.iter().filter(|r| r.status == Status::Fail) {
        writeln!(err, "FAIL {} {} {:?} rel_err={:e}", r.suite, r.check, r.params, r.rel_err)?;
    }
    Ok(())
}

fn compute(
    target: Target,
    asai: Option<&str>,
    lambda: Option<&[i64]>,
    s: f64,
    cfg: &RunConfig,
    out: &mut dyn Write,
) -> Result<i32> {
    match target {
        Target::Lfactor => {
            let sigma = cfg.sigma()?;
            let factor = match asai {
                Some("+") => asai_lfactor(&sigma, 1)?,
                Some("-") => asai_lfactor(&sigma, -1)?,
                Some(x) => return Err(Error::InvalidArgument(format!("--asai takes + or -, got `{x}`"))),
                None => pair_dual_lfactor(&sigma)?,
            };
            writeln!(out, "{}", fmt_c(factor.eval_real(s)?))?;
        }
        Target::Whittaker => {
            let lambda = lambda.ok_or_else(|| Error::InvalidArgument("--lambda is required".into()))?;
            let q = cfg.q_f();
            let value = match &cfg.segments_file {
                Some(path) => essential_value(&GenericRep::from_json(&std::fs::read_to_string(path)?)?, lambda, q * q)?,
                None => spherical_value(&cfg.sigma()?, lambda)?,
            };
            writeln!(out, "{}", fmt_c(value))?;
        }
        Target::JMain => {
            let d = cfg.pair()?;
            let j = j_main_breakdown(&d)?;
            writeln!(out, "C = {}", j.constant)?;
            writeln!(out, "L(1/2, sigma_n x sigma_(n+1)) = {}", fmt_c(j.rs_half))?;
            writeln!(out, "L(1, sigma_n, As) = {}", fmt_c(j.asai_n))?;
            writeln!(out, "L(1, sigma_u, As) = {}", fmt_c(j.asai_u_next))?;
            writeln!(out, "J = {}", fmt_c(j.value))?;
        }
        Target::IClosed => {
            let d = cfg.pair()?;
            writeln!(out, "{}", fmt_c(i_closed(&d)?))?;
        }
    }
    Ok(0)
}

fn volumes(cfg: &RunConfig, out: &mut dyn Write) -> Result<()> {
    let (q, n, c) = (cfg.q_f(), cfg.n.unwrap_or(1) as u32, cfg.c.unwrap_or(1));
    writeln!(out, "q_F = {q}, n = {n}, c = {c}")?;
    for (name, v) in volume_summary(n, c, q)? {
        writeln!(out, "{name} = {v}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("newform-periods").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn satake_parsing() {
        let v = parse_satake("1, -0.5, 1+2i, 3-i, -2.5e-1i, @0").unwrap();
        assert_eq!(v[0], CNum::new(1.0, 0.0));
        assert_eq!(v[1], CNum::new(-0.5, 0.0));
        assert_eq!(v[2], CNum::new(1.0, 2.0));
        assert_eq!(v[3], CNum::new(3.0, -1.0));
        assert_eq!(v[4], CNum::new(0.0, -0.25));
        assert_eq!(v[5], CNum::new(1.0, 0.0));
        let z = parse_satake("@1.5707963267948966").unwrap()[0];
        assert!((z - CNum::new(0.0, 1.0)).norm() < 1e-15);
        assert!(parse_satake("x").is_err());
        assert!(parse_satake("1+").is_err());
    }

    #[test]
    fn asai_lfactor_example() {
        let (code, out, _) = run_str(&["compute", "lfactor", "--asai", "+", "--satake", "1", "--qf", "3"]);
        assert_eq!(code, 0);
        let v: f64 = out.trim().parse().unwrap();
        assert!((v - 1.5).abs() < 1e-14);
    }

    #[test]
    fn whittaker_example() {
        let (code, out, _) = run_str(&["compute", "whittaker", "--lambda", "1,0", "--satake", "0.3,0.7", "--qf", "3"]);
        assert_eq!(code, 0);
        let v: f64 = out.trim().parse().unwrap();
        assert!((v - (0.3 + 0.7) / 3.0).abs() < 1e-14);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_str(&["verify", "main-theorem", "--qf", "3", "--n", "1", "--c", "0"]).0, 2);
        assert_eq!(run_str(&["verify", "no-such-suite"]).0, 2);
        assert_eq!(run_str(&["compute", "lfactor", "--asai", "x", "--satake", "1"]).0, 2);
        assert_eq!(run_str(&["bogus"]).0, 2);
        let (code, _, err) = run_str(&["verify", "volumes", "--qf", "3", "--n", "1", "--c", "1"]);
        assert_eq!(code, 0);
        assert!(err.contains("c1 = 9") && err.contains("C = 1/9"), "{err}");
    }

    #[test]
    fn flags_override_config_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        std::fs::write(&path, "qf = 5\nseed = 11\ntol-rel = 1e-6\n").unwrap();
        let cli = Cli::try_parse_from(["x", "volumes", "--config", path.to_str().unwrap(), "--qf", "7"]).unwrap();
        let cfg = RunConfig::from_args(&cli.run).unwrap();
        assert_eq!(cfg.q_f, Some(7));
        assert_eq!(cfg.seed, 11);
        assert_eq!(cfg.tol.unwrap().rel, 1e-6);
        std::fs::write(&path, "bogus = 1\n").unwrap();
        let cli = Cli::try_parse_from(["x", "volumes", "--config", path.to_str().unwrap()]).unwrap();
        assert!(RunConfig::from_args(&cli.run).is_err());
    }

    #[test]
    fn j_main_echoes_constant_and_l_values() {
        let (code, out, err) =
            run_str(&["compute", "j-main", "--qf", "3", "--satake", "1", "--c", "1", "--seed", "4"]);
        assert_eq!(code, 0, "{err}");
        assert!(out.contains("C = ") && out.matches(" = ").count() == 5, "{out}");
    }
}
