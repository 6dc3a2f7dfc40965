//! Command-line front end: argument parsing, dispatch and report rendering.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::motive::{tpoly_from_json, MotiveSpec};
use crate::pairings::{self, logalg_verify, logalg_verify_exact, mellin_verify, mzv_verify, residue_checks, verify_pairings};
use crate::report::VerificationReport;
use crate::sample::Sampler;
use crate::scalar::parse::parse_ratfunc;
use crate::scalar::{Fq, LaurentSeries, RatFunc};
use crate::special::{gamma_factorial, mzv_naive, point_to_laurent, zeta_naive};
use crate::tate::{RationalVector, TPoly};
use crate::tmodule::{smat_to_json, TModule};

pub const SCHEMA_VERSION: u32 = 1;
pub const PRECISION_ENV: &str = "MOTIVIC_PRECISION";
pub const T_DEGREE_ENV: &str = "MOTIVIC_T_DEGREE";

#[derive(Parser, Debug, Clone, Serialize)]
#[command(name = "motivic", version, about = "Exact arithmetic for motivic pairings of Anderson t-modules over F_q[t]")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Common {
    /// Field size (a prime power at most 256).
    #[arg(long, global = true)]
    pub q: Option<u32>,
    /// Characteristic; combine with --r instead of --q.
    #[arg(long, global = true)]
    pub p: Option<u32>,
    #[arg(long, global = true)]
    pub r: Option<u32>,
    /// Target u-adic precision N.
    #[arg(long = "prec", global = true, env = PRECISION_ENV, default_value_t = 40)]
    pub prec: i64,
    /// Truncation t-degree T for Tate-algebra elements.
    #[arg(long = "t-degree", global = true, env = T_DEGREE_ENV, default_value_t = 64)]
    pub t_degree: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Seed for randomized inputs.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Include wall-clock timing (output is then not byte-reproducible).
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Text,
}

/// Which t-module to build.
#[derive(Args, Debug, Clone, Serialize)]
pub struct ModuleArgs {
    /// Carlitz tensor power C^{⊗n}.
    #[arg(long, conflicts_with_all = ["s", "motive_file"])]
    pub n: Option<usize>,
    /// MZV module for the comma-separated tuple s.
    #[arg(long, value_delimiter = ',', conflicts_with = "motive_file")]
    pub s: Option<Vec<usize>>,
    /// Motive given as JSON.
    #[arg(long = "motive-file")]
    pub motive_file: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// ζ_A(n) by brute force.
    Zeta {
        #[arg(long)]
        n: u64,
    },
    /// ζ_A(s_1, ..., s_r) by brute force.
    Mzv {
        #[arg(long, value_delimiter = ',', required = true)]
        s: Vec<u64>,
    },
    /// Carlitz factorial Γ_n.
    Gamma {
        #[arg(long)]
        n: u64,
    },
    /// Exponential coefficients Q_0..Q_i.
    ExpCoeffs {
        #[command(flatten)]
        module: ModuleArgs,
        #[arg(long, default_value_t = 4)]
        i: usize,
    },
    /// Logarithm coefficients P_0..P_i.
    LogCoeffs {
        #[command(flatten)]
        module: ModuleArgs,
        #[arg(long, default_value_t = 4)]
        i: usize,
    },
    /// Exp(z) for a comma-separated vector of elements of F_q(θ).
    Exp {
        #[command(flatten)]
        module: ModuleArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        z: Vec<String>,
    },
    /// Log(z), reporting divergence outside the convergence domain.
    Log {
        #[command(flatten)]
        module: ModuleArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        z: Vec<String>,
    },
    /// Run a verification and exit 1 if it fails.
    Verify {
        #[command(subcommand)]
        what: Verify,
    },
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verify {
    /// δ^M_{1,z}(π̃^n/((t-θ)ω^n)) = Γ_n ζ_A(n) at the special point.
    Mellin {
        #[arg(long, default_value_t = 1)]
        n: u32,
        /// JSON polynomial in t (list of θ-coefficient lists) used as H_n.
        #[arg(long = "hn-file")]
        hn_file: Option<PathBuf>,
    },
    /// p_4(G(1,1;z)) = (θ^2+θ) ζ_A(1,3) for q = 2.
    #[command(name = "mzv-13")]
    #[serde(rename = "mzv-13")]
    Mzv13,
    /// Functional-equation recurrences for the coefficients.
    FuncEq {
        #[command(flatten)]
        module: ModuleArgs,
        #[arg(long, default_value_t = 6)]
        i: usize,
    },
    /// det Q_i ≠ 0 and det P_i ≠ 0.
    Invertibility {
        #[command(flatten)]
        module: ModuleArgs,
        #[arg(long, default_value_t = 5)]
        i: usize,
    },
    /// H_ℓ(1,1) and I_ℓ(1,1,g_k,h_m) for ℓ up to --l.
    Pairings {
        #[command(flatten)]
        module: ModuleArgs,
        #[arg(long, default_value_t = 3)]
        l: usize,
    },
    /// Log-algebraicity on C^{⊗n}.
    Logalg {
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Instance::Polynomial)]
        instance: Instance,
        /// AGF parameter z (an element of F_q(θ) of norm below 1).
        #[arg(long)]
        z: Option<String>,
        /// AGF truncation level.
        #[arg(long, default_value_t = 6)]
        levels: usize,
        /// Tolerance exponent: agreement to q^-tol.
        #[arg(long, default_value_t = 20)]
        tol: i64,
    },
    /// Residue identities for h = num / (t - θ^(q^i))^m on C^{⊗n}.
    Residues {
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long = "pole-level", default_value_t = 1)]
        pole_level: u32,
        #[arg(long, default_value_t = 1)]
        order: u32,
        /// Comma-separated θ-coefficients of the numerator, ascending in t.
        #[arg(long, value_delimiter = ',')]
        numerator: Option<Vec<String>>,
    },
    /// Σ Q_a P_b^(a) = [i=0] I, plus Log(Exp(z)) = z at seeded random z.
    Compose {
        #[command(flatten)]
        module: ModuleArgs,
        #[arg(long, default_value_t = 4)]
        i: usize,
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Instance {
    Polynomial,
    Agf,
}

/// Outcome of one CLI invocation.
#[derive(Debug, Clone)]
pub struct Report {
    pub json: Value,
    pub reports: Vec<VerificationReport>,
    pub text: Vec<String>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.reports.iter().all(|r| r.passed)
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(&self.json).expect("report serializes"),
            Format::Text => {
                let mut out = self.text.clone();
                for r in &self.reports {
                    out.push(format!("{} {}", if r.passed { "PASS" } else { "FAIL" }, r.identity));
                    for c in &r.checks {
                        let agree = match (c.agreement, c.required) {
                            (Some(a), Some(req)) => format!(" (agreement {a}, required {req})"),
                            _ => " (exact)".to_string(),
                        };
                        out.push(format!("  {} {}{}", if c.passed { "ok  " } else { "FAIL" }, c.name, agree));
                    }
                    for n in &r.notes {
                        out.push(format!("  note: {n}"));
                    }
                }
                out.join("\n")
            }
        }
    }
}

/// Machine-readable error object for a failed invocation.
pub fn error_json(e: &Error) -> Value {
    let kind = format!("{e:?}");
    let kind = kind.split('(').next().unwrap_or("Error").to_string();
    json!({ "schema_version": SCHEMA_VERSION, "error": { "kind": kind, "message": e.to_string() }, "exit_code": e.exit_code() })
}

pub fn field(c: &Common) -> Result<Fq> {
    let q = match (c.q, c.p, c.r) {
        (Some(q), None, None) => q,
        (None, Some(p), r) => {
            let r = r.unwrap_or(1);
            p.checked_pow(r).ok_or_else(|| Error::Usage("--p/--r: p^r overflows".into()))?
        }
        (None, None, None) => 2,
        (None, None, Some(_)) => return Err(Error::Usage("--r needs --p".into())),
        (Some(_), _, _) => return Err(Error::Usage("--q cannot be combined with --p/--r".into())),
    };
    let fq = Fq::new(q).map_err(|e| Error::Usage(format!("--q: {e}")))?;
    if let Some(p) = c.p {
        if fq.p() != p {
            return Err(Error::Usage(format!("--p: {p} is not prime")));
        }
    }
    Ok(fq)
}

fn read_json(path: &PathBuf, flag: &str) -> Result<Value> {
    let s = std::fs::read_to_string(path).map_err(|e| Error::Usage(format!("{flag}: cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&s).map_err(|e| Error::Parse(format!("{flag}: {e}")))
}

fn module(fq: &Fq, m: &ModuleArgs) -> Result<TModule> {
    let spec = if let Some(path) = &m.motive_file {
        MotiveSpec::from_json(&read_json(path, "--motive-file")?)?
    } else if let Some(s) = &m.s {
        if s.is_empty() || s.contains(&0) {
            return Err(Error::Usage("--s: entries must be positive".into()));
        }
        if s == &[1, 3] && fq.q() == 2 {
            MotiveSpec::mzv_13()?
        } else {
            MotiveSpec::mzv_star(fq, s, None)?
        }
    } else {
        let n = m.n.unwrap_or(1);
        if n == 0 {
            return Err(Error::Usage("--n must be at least 1".into()));
        }
        MotiveSpec::carlitz_tensor(fq, n)?
    };
    TModule::from_motive(&spec)
}

fn carlitz(fq: &Fq, n: usize) -> Result<TModule> {
    if n == 0 {
        return Err(Error::Usage("--n must be at least 1".into()));
    }
    TModule::from_motive(&MotiveSpec::carlitz_tensor(fq, n)?)
}

fn parse_point(fq: &Fq, t: &TModule, z: &[String]) -> Result<Vec<RatFunc>> {
    if z.len() != t.dim() {
        return Err(Error::Usage(format!("--z: expected {} coordinates, got {}", t.dim(), z.len())));
    }
    z.iter().map(|s| parse_ratfunc(fq, s.trim()).map_err(|e| Error::Usage(format!("--z: {e}")))).collect()
}

fn series_json(v: &[LaurentSeries]) -> Value {
    json!(v.iter().map(|x| json!({ "value": x.to_json(), "precision": x.precision() })).collect::<Vec<_>>())
}

fn matrix_text(label: &str, m: &[Vec<RatFunc>]) -> Vec<String> {
    let mut out = vec![format!("{label} =")];
    for row in m {
        out.push(format!("  [{}]", row.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")));
    }
    out
}

/// Parse `argv` and run; usage errors come back as `Error::Usage`.
pub fn run_args<I, T>(argv: I) -> Result<(Cli, Report)>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| Error::Usage(e.to_string()))?;
    let rep = run(&cli)?;
    Ok((cli, rep))
}

pub fn run(cli: &Cli) -> Result<Report> {
    let c = &cli.common;
    if c.prec < 1 {
        return Err(Error::Usage("--prec must be positive".into()));
    }
    if c.t_degree == 0 {
        return Err(Error::Usage("--t-degree must be positive".into()));
    }
    let fq = field(c)?;
    let start = Instant::now();
    let mut reports = vec![];
    let mut text = vec![];
    let results: Value = match &cli.command {
        Command::Zeta { n } => {
            if *n == 0 {
                return Err(Error::Usage("--n must be at least 1".into()));
            }
            let v = zeta_naive(&fq, *n, c.prec)?;
            text.push(format!("zeta_A({n}) = {}", v.value));
            v.to_json()
        }
        Command::Mzv { s } => {
            if s.contains(&0) {
                return Err(Error::Usage("--s: entries must be positive".into()));
            }
            let v = mzv_naive(&fq, s, c.prec)?;
            text.push(format!("zeta_A({s:?}) = {}", v.value));
            v.to_json()
        }
        Command::Gamma { n } => {
            let g = gamma_factorial(&fq, *n)?;
            text.push(format!("Gamma_{n} = {g}"));
            json!({ "n": n, "value": g.to_json(), "text": g.to_string(), "exact": true })
        }
        Command::ExpCoeffs { module: m, i } | Command::LogCoeffs { module: m, i } => {
            let exp = matches!(cli.command, Command::ExpCoeffs { .. });
            let t = module(&fq, m)?;
            let mut out = vec![];
            for k in 0..=*i {
                let mat = if exp { t.exp_coeff(k)? } else { t.log_coeff(k)? };
                let name = format!("{}_{k}", if exp { "Q" } else { "P" });
                text.extend(matrix_text(&name, &mat));
                let txt: Vec<Vec<String>> = mat.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
                out.push(json!({ "i": k, "matrix": smat_to_json(&mat), "text": txt, "exact": true }));
            }
            json!({ "module": t.spec().label(), "coefficients": out })
        }
        Command::Exp { module: m, z } | Command::Log { module: m, z } => {
            let exp = matches!(cli.command, Command::Exp { .. });
            let t = module(&fq, m)?;
            let zr = parse_point(&fq, &t, z)?;
            let zl = point_to_laurent(&zr, c.prec + 8);
            let v = if exp { t.exp_eval(&zl, c.prec)? } else { t.log_eval(&zl, c.prec)? };
            for (k, x) in v.value.iter().enumerate() {
                text.push(format!("{}[{k}] = {x}", if exp { "Exp" } else { "Log" }));
            }
            json!({ "module": t.spec().label(), "z": zr.iter().map(|x| x.to_json()).collect::<Vec<_>>(), "value": series_json(&v.value), "terms": v.terms })
        }
        Command::Verify { what } => {
            let r = verify(&fq, c, what)?;
            let j = serde_json::to_value(&r).expect("report serializes");
            reports.push(r);
            j
        }
    };
    let mut json = json!({
        "schema_version": SCHEMA_VERSION,
        "version": env!("CARGO_PKG_VERSION"),
        "command": cli,
        "context": { "q": fq.q(), "p": fq.p(), "r": fq.r(), "modulus": fq.modulus() },
        "results": results,
    });
    if !reports.is_empty() {
        json["passed"] = json!(reports.iter().all(|r| r.passed));
    }
    if c.timing {
        json["timing_ms"] = json!(start.elapsed().as_millis() as u64);
        text.push(format!("time: {} ms", start.elapsed().as_millis()));
    }
    Ok(Report { json, reports, text })
}

fn verify(fq: &Fq, c: &Common, what: &Verify) -> Result<VerificationReport> {
    match what {
        Verify::Mellin { n, hn_file } => {
            if *n == 0 {
                return Err(Error::Usage("--n must be at least 1".into()));
            }
            let h = match hn_file {
                Some(p) => Some(tpoly_from_json(fq, &read_json(p, "--hn-file")?)?),
                None => None,
            };
            mellin_verify(fq, *n, c.prec, c.t_degree, h.as_ref())
        }
        Verify::Mzv13 => {
            if fq.q() != 2 {
                return Err(Error::Usage("mzv-13 is defined for q = 2".into()));
            }
            mzv_verify(c.prec, 1)
        }
        Verify::FuncEq { module: m, i } => module(fq, m)?.verify_func_eq(*i),
        Verify::Invertibility { module: m, i } => module(fq, m)?.verify_invertible(*i),
        Verify::Pairings { module: m, l } => verify_pairings(&module(fq, m)?, *l),
        Verify::Compose { module: m, i, samples } => compose(&module(fq, m)?, *i, *samples, c.seed),
        Verify::Logalg { n, instance, z, levels, tol } => {
            let t = carlitz(fq, *n)?;
            match instance {
                Instance::Polynomial => {
                    // h = (t - θ)^n v with v drawn from the seed
                    let mut smp = Sampler::new(fq, c.seed);
                    let v = smp.tpoly(2, 2).map(|x| RatFunc::from_poly(x.clone()));
                    let lin = TPoly::linear(&RatFunc::theta(fq));
                    let h = RationalVector::from_polys(fq, vec![lin.pow(*n as u32).mul(&v)]);
                    let mut r = logalg_verify_exact(&t, &h, *tol)?;
                    r.note(format!("v = {}", v.coeffs().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")));
                    Ok(r)
                }
                Instance::Agf => {
                    if *n != 1 {
                        return Err(Error::Usage("--instance agf needs --n 1".into()));
                    }
                    let zs = z.as_deref().unwrap_or("1/theta");
                    let zr = parse_ratfunc(fq, zs).map_err(|e| Error::Usage(format!("--z: {e}")))?;
                    if !zr.valuation().is_some_and(|v| v >= 1) {
                        return Err(Error::Usage("--z must have norm below 1".into()));
                    }
                    let work = c.prec.max(3 * tol);
                    let spread: i64 = (0..=*levels as u32).map(|j| (fq.q() as i64).pow(j)).sum();
                    let zl = LaurentSeries::from_ratfunc(&zr, work + spread);
                    let h = pairings::agf_instance(fq, &zl, *levels, work)?;
                    logalg_verify(&t, &h, *tol)
                }
            }
        }
        Verify::Residues { n, pole_level, order, numerator } => {
            let t = carlitz(fq, *n)?;
            let num = match numerator {
                Some(cs) => TPoly::new(fq, cs.iter().map(|s| parse_ratfunc(fq, s.trim())).collect::<Result<Vec<_>>>()?),
                None => TPoly::one(fq),
            };
            let h = RationalVector::from_polys(fq, vec![num]).divide(&RatFunc::one(fq), *pole_level, *order);
            residue_checks(&t, &h)
        }
    }
}

/// Coefficient-level and numeric Exp∘Log checks; random points come from `seed`.
pub fn compose(t: &TModule, i_max: usize, samples: usize, seed: u64) -> Result<VerificationReport> {
    let fq = t.field().clone();
    let mut rep = t.verify_composition(i_max)?;
    let tol = 30;
    let mut smp = Sampler::new(&fq, seed);
    let mut worst = i64::MAX;
    for _ in 0..samples {
        let z = smp.small_point(t.dim(), tol + 16);
        let e = t.exp_eval(&z, tol + 8)?;
        let l = t.log_eval(&e.value, tol + 4)?;
        let a = l.value.iter().zip(&z).map(|(x, y)| x.agreement(y)).min().unwrap_or(i64::MAX);
        worst = worst.min(a);
    }
    if samples > 0 {
        rep.push(crate::report::Check::numeric(
            format!("Log(Exp(z)) = z at {samples} random points, seed {seed}"),
            json!(samples),
            json!(seed),
            worst,
            tol,
        ));
    }
    Ok(rep)
}
