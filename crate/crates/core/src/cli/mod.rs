//! The `confluence` command line: parameter files in, one JSON report out.
//!
//! Exit status is 0 on success, 1 on usage errors (bad flags, unreadable or
//! malformed parameter files, unknown keys) and 2 when a verification fails.

pub mod files;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use thiserror::Error;

use crate::agt::{block_series_agt, crosscheck_block, verma_block, BlockParams};
use crate::painleve::{
    irregular_block_series, residual_budget, sigma_ode_residual, tau_series, three_point_irregular_block, PainleveError, Source, TauKind, TauParams, TauSeries, TauSpec, Variable,
};
use crate::scalars::bigcomplex::{digits, set_digits};
use crate::scalars::{parse_rational, rat, rational_to_string, BigComplex, Field, PrefactoredSeries, Q};
use crate::vertexops::{degeneration_report, irregular_vo_coeffs, rank0_to_1_spec, rank_up_spec, regular_vo_coeffs, Scheme, VOData};
use files::{DegenerationFile, IrregularBlockFile, RegularBlockFile, TauFile, VoFile};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
}

#[derive(Debug, Parser)]
#[command(name = "confluence", version, about = "Exact Virasoro vertex operators, confluence checks and Painlevé τ series")]
pub struct Cli {
    /// Worker threads for the parallel stages (0: one per core). The report does not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    /// Working precision in decimal digits for floating evaluations (at least 50).
    #[arg(long, global = true, default_value_t = 50)]
    pub digits: usize,
    /// Seed for randomly drawn sample points.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Also write the coefficient table as CSV.
    #[arg(long, global = true)]
    pub csv: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BlockMethod {
    /// Level-by-level solves in Verma modules.
    Verma,
    /// Sum over pairs of Young diagrams.
    Agt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    #[value(name = "VI_at_0")]
    VIAt0,
    #[value(name = "VI_at_infty")]
    VIAtInfty,
    #[value(name = "V_at_infty")]
    VAtInfty,
    #[value(name = "IV_at_infty")]
    IVAtInfty,
}

impl From<KindArg> for TauKind {
    fn from(k: KindArg) -> TauKind {
        match k {
            KindArg::VIAt0 => TauKind::VIAt0,
            KindArg::VIAtInfty => TauKind::VIAtInfty,
            KindArg::VAtInfty => TauKind::VAtInfty,
            KindArg::IVAtInfty => TauKind::IVAtInfty,
        }
    }
}

#[derive(Debug, Clone, clap::Args)]
pub struct TauArgs {
    /// τ function to expand; without --params the shipped sample of this kind is used.
    #[arg(long, value_enum)]
    pub kind: Option<KindArg>,
    #[arg(long)]
    pub params: Option<PathBuf>,
    /// Largest Fourier index |n|.
    #[arg(long)]
    pub nmax: Option<usize>,
    /// Block order N.
    #[arg(long)]
    pub order: Option<usize>,
    /// Fourier phase, overriding the file.
    #[arg(long)]
    pub rho: Option<String>,
    /// Evaluation point, e.g. `t=1/20`, `s=20`, `s=20i`, `s=14.14+14.14i`. Repeatable.
    #[arg(long)]
    pub eval: Vec<String>,
    /// Evaluate asymptotic series past their smallest term.
    #[arg(long)]
    pub force: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Four-point block with regular insertions, as a series in t.
    BlocksRegular {
        #[arg(long)]
        params: Option<PathBuf>,
        #[arg(long, default_value_t = 4)]
        order: usize,
        #[arg(long, value_enum, default_value_t = BlockMethod::Verma)]
        method: BlockMethod,
    },
    /// Irregular blocks: the V / IV blocks at infinity for one Fourier index, or the three-point limit block.
    BlocksIrregular {
        #[arg(long)]
        params: Option<PathBuf>,
        /// Fourier index of the V / IV block.
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        mode: i64,
        #[arg(long, default_value_t = 4)]
        order: usize,
    },
    /// Solve a regular or irregular vertex operator to a given order and re-check its relations.
    VoSolve {
        #[arg(long)]
        params: PathBuf,
        #[arg(long, default_value_t = 3)]
        order: usize,
    },
    /// Confluence check of two operators merging into one of higher rank.
    Degenerate {
        /// `rank0to1`, or `rank{r}to{r+1}` for r >= 1.
        #[arg(long)]
        scheme: String,
        /// Highest order K compared.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        params: Option<PathBuf>,
    },
    /// Compare the Young-diagram block with the Verma-module block order by order.
    AgtCrosscheck {
        /// Single point; otherwise `--points` points are drawn from `--seed`.
        #[arg(long)]
        params: Option<PathBuf>,
        #[arg(long, default_value_t = 4)]
        order: usize,
        #[arg(long, default_value_t = 3)]
        points: usize,
    },
    /// Assemble a τ series and evaluate it, with the σ-form residual at each point.
    Tau(TauArgs),
    /// σ-form residual against the truncation budget: pass when |E| <= factor * bound.
    Residual {
        #[command(flatten)]
        tau: TauArgs,
        #[arg(long, default_value_t = 10.0)]
        factor: f64,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::BlocksRegular { .. } => "blocks-regular",
            Command::BlocksIrregular { .. } => "blocks-irregular",
            Command::VoSolve { .. } => "vo-solve",
            Command::Degenerate { .. } => "degenerate",
            Command::AgtCrosscheck { .. } => "agt-crosscheck",
            Command::Tau(_) => "tau",
            Command::Residual { .. } => "residual",
        }
    }
}

/// A finished run: the report body, its verdict, and an optional table.
pub struct Outcome {
    pub config: Value,
    pub result: Value,
    pub verdict: String,
    pub passed: bool,
    pub table: Option<Vec<Vec<String>>>,
}

/// Parse `args`, run, write the outputs, and return the exit status.
pub fn main_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(out) => {
            if let Err(e) = emit(&cli, &out) {
                eprintln!("error: {e}");
                return 1;
            }
            if out.passed {
                0
            } else {
                2
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

/// Run on a pool of `--threads` workers.
pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build().map_err(|e| CliError::Io(e.to_string()))?;
    pool.install(|| {
        set_digits(cli.digits);
        run(cli)
    })
}

pub fn report(cli: &Cli, out: &Outcome) -> Value {
    json!({
        "tool": "confluence",
        "version": env!("CARGO_PKG_VERSION"),
        "report_schema": REPORT_SCHEMA_VERSION,
        "command": cli.command.name(),
        "config": out.config,
        "verdict": out.verdict,
        "result": out.result,
    })
}

fn emit(cli: &Cli, out: &Outcome) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(&report(cli, out)).map_err(|e| CliError::Io(e.to_string()))? + "\n";
    match &cli.out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?,
        None => print!("{text}"),
    }
    if let (Some(path), Some(rows)) = (&cli.csv, &out.table) {
        let mut w = csv::Writer::from_path(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        for r in rows {
            w.write_record(r).map_err(|e| CliError::Io(e.to_string()))?;
        }
        w.flush().map_err(|e| CliError::Io(e.to_string()))?;
    }
    Ok(())
}

fn base_config(cli: &Cli) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("digits".into(), json!(digits()));
    m.insert("seed".into(), json!(cli.seed));
    m.insert("out".into(), json!(cli.out.as_ref().map(|p| p.display().to_string())));
    m.insert("csv".into(), json!(cli.csv.as_ref().map(|p| p.display().to_string())));
    m
}

fn q(x: &Q) -> Value {
    json!(rational_to_string(x))
}

fn qs(xs: &[Q]) -> Value {
    json!(xs.iter().map(rational_to_string).collect::<Vec<_>>())
}

fn sci(x: f64) -> Value {
    json!(format!("{x:.6e}"))
}

const SHOWN_DIGITS: usize = 30;

fn complex(z: &BigComplex) -> Value {
    json!({
        "re": BigComplex::component_string(&z.re, SHOWN_DIGITS),
        "im": BigComplex::component_string(&z.im, SHOWN_DIGITS),
    })
}

fn series_json(s: &PrefactoredSeries<Q>) -> Value {
    json!({ "exponent": q(&s.alpha), "charges": qs(&s.betas), "coefficients": qs(&s.coeffs) })
}

fn series_table(s: &PrefactoredSeries<Q>) -> Vec<Vec<String>> {
    let mut rows = vec![vec!["k".to_string(), "coefficient".to_string()]];
    rows.extend(s.coeffs.iter().enumerate().map(|(k, c)| vec![k.to_string(), rational_to_string(c)]));
    rows
}

fn failed(config: serde_json::Map<String, Value>, err: impl std::fmt::Display) -> Outcome {
    Outcome { config: Value::Object(config), result: json!({ "error": err.to_string() }), verdict: "error".into(), passed: false, table: None }
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let mut config = base_config(cli);
    match &cli.command {
        Command::BlocksRegular { params, order, method } => {
            let file: RegularBlockFile = match params {
                Some(p) => files::read(p)?,
                None => files::parse_str(files::BLOCK_REGULAR, "samples/block_regular.json")?,
            };
            config.insert("params".into(), json!(file));
            config.insert("order".into(), json!(order));
            config.insert("method".into(), json!(format!("{method:?}").to_lowercase()));
            let p = file.params();
            let s = match method {
                BlockMethod::Verma => verma_block(&p, &p.sigma.square(), *order),
                BlockMethod::Agt => block_series_agt(&p, *order),
            };
            Ok(match s {
                Ok(s) => Outcome { config: Value::Object(config), result: series_json(&s), verdict: "ok".into(), passed: true, table: Some(series_table(&s)) },
                Err(e) => failed(config, e),
            })
        }
        Command::BlocksIrregular { params, mode, order } => {
            let file: IrregularBlockFile = match params {
                Some(p) => files::read(p)?,
                None => files::parse_str(files::IRREGULAR_THREE_POINT, "samples/irregular_three_point.json")?,
            };
            config.insert("params".into(), json!(file));
            config.insert("order".into(), json!(order));
            let s = match file {
                IrregularBlockFile::ThreePoint { c0, c1, beta, delta, rho } => three_point_irregular_block(&c0, &c1, &beta, &delta, &rho, *order),
                IrregularBlockFile::V { theta, thetat, theta0, eta, beta } => {
                    config.insert("mode".into(), json!(mode));
                    irregular_block_series(&TauParams::VAtInfty { theta, thetat, theta0, eta, beta }, *mode, *order)
                }
                IrregularBlockFile::IV { theta_star, thetat, beta } => {
                    config.insert("mode".into(), json!(mode));
                    irregular_block_series(&TauParams::IVAtInfty { theta_star, thetat, beta }, *mode, *order)
                }
            };
            Ok(match s {
                Ok(s) => Outcome { config: Value::Object(config), result: series_json(&s), verdict: "ok".into(), passed: true, table: Some(series_table(&s)) },
                Err(e) => failed(config, e),
            })
        }
        Command::VoSolve { params, order } => {
            let file: VoFile = files::read(params)?;
            config.insert("params".into(), json!(file));
            config.insert("order".into(), json!(order));
            let solved = match &file {
                VoFile::Regular { delta1, delta2, delta3, c } => regular_vo_coeffs(delta1, delta2, delta3, c, *order),
                VoFile::Irregular { rank, weights, beta_r, delta, c } => {
                    if weights.len() != rank + 1 {
                        return Err(CliError::Usage(format!("a rank-{rank} operator needs {} weights, got {}", rank + 1, weights.len())));
                    }
                    irregular_vo_coeffs(*rank, weights, beta_r, delta, c, *order)
                }
            };
            Ok(match solved {
                Ok(vo) => vo_outcome(config, &vo),
                Err(e) => failed(config, e),
            })
        }
        Command::Degenerate { scheme, k, params } => degenerate(config, scheme, *k, params.as_ref()),
        Command::AgtCrosscheck { params, order, points } => {
            let pts: Vec<BlockParams<Q>> = match params {
                Some(p) => vec![files::read::<RegularBlockFile>(p)?.params()],
                None => random_block_points(cli.seed, *points),
            };
            config.insert("points".into(), json!(pts.iter().map(RegularBlockFile::from_params).collect::<Vec<_>>()));
            config.insert("order".into(), json!(order));
            let mut rows = vec![vec!["point".to_string(), "verdict".to_string(), "orders_matched".to_string()]];
            let mut all = true;
            let mut checks = Vec::new();
            for (i, p) in pts.iter().enumerate() {
                let r = crosscheck_block(p, *order);
                all &= r.is_ok();
                let (verdict, matched, err) = match &r {
                    Ok(n) => ("match", Some(*n), None),
                    Err(e) => ("mismatch", None, Some(e.to_string())),
                };
                rows.push(vec![i.to_string(), verdict.to_string(), matched.map(|n| n.to_string()).unwrap_or_default()]);
                checks.push(json!({ "point": i, "verdict": verdict, "orders_matched": matched, "error": err }));
            }
            Ok(Outcome {
                config: Value::Object(config),
                result: json!({ "checks": checks }),
                verdict: if all { "match" } else { "mismatch" }.into(),
                passed: all,
                table: Some(rows),
            })
        }
        Command::Tau(args) => {
            let (spec, points) = resolve_tau(args)?;
            config.insert("spec".into(), json!(spec));
            config.insert("eval".into(), json!(points.iter().map(|(n, z)| json!({ "var": n, "value": complex(z) })).collect::<Vec<_>>()));
            config.insert("force".into(), json!(args.force));
            Ok(tau_outcome(config, &spec, &points, args.force))
        }
        Command::Residual { tau, factor } => {
            let (spec, points) = resolve_tau(tau)?;
            if !factor.is_finite() || *factor <= 0.0 {
                return Err(CliError::Usage("--factor must be a positive number".into()));
            }
            config.insert("spec".into(), json!(spec));
            config.insert("eval".into(), json!(points.iter().map(|(n, z)| json!({ "var": n, "value": complex(z) })).collect::<Vec<_>>()));
            config.insert("force".into(), json!(tau.force));
            config.insert("factor".into(), json!(factor));
            Ok(residual_outcome(config, &spec, &points, tau.force, *factor))
        }
    }
}

fn vo_outcome(config: serde_json::Map<String, Value>, vo: &VOData<Q>) -> Outcome {
    let r = vo.rank() as i64;
    let n_max = (2 * r + vo.order() as i64).max(1);
    let check = vo.check_recursion(n_max);
    let mut rows = vec![vec!["m".to_string(), "word".to_string(), "coefficient".to_string()]];
    for (m, v) in vo.coeffs.iter().enumerate() {
        for (w, c) in v.terms() {
            let word = w.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
            rows.push(vec![m.to_string(), word, rational_to_string(c)]);
        }
    }
    let result = json!({
        "exponent": q(&vo.alpha),
        "charges": qs(&vo.betas),
        "coefficients": vo.coeffs.iter().map(|v| v.to_json()).collect::<Vec<_>>(),
        "recursion": match &check {
            Ok(n) => json!({ "relations_checked": n, "highest_mode": n_max, "residual": "0" }),
            Err(e) => json!({ "error": e.to_string() }),
        },
    });
    Outcome { config: Value::Object(config), result, verdict: if check.is_ok() { "ok" } else { "fail" }.into(), passed: check.is_ok(), table: Some(rows) }
}

fn parse_scheme(s: &str) -> Result<Scheme, CliError> {
    let bad = || CliError::Usage(format!("unknown scheme {s:?}; expected rank0to1 or rank<r>to<r+1>"));
    let body = s.strip_prefix("rank").ok_or_else(bad)?;
    let (a, b) = body.split_once("to").ok_or_else(bad)?;
    let (a, b): (usize, usize) = (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?);
    match (a, b) {
        (0, 1) => Ok(Scheme::Rank0To1),
        (r, r1) if r >= 1 && r1 == r + 1 => Ok(Scheme::RankUp { r }),
        _ => Err(bad()),
    }
}

fn degenerate(mut config: serde_json::Map<String, Value>, scheme: &str, k: Option<usize>, params: Option<&PathBuf>) -> Result<Outcome, CliError> {
    let scheme = parse_scheme(scheme)?;
    let file: DegenerationFile = match (params, scheme) {
        (Some(p), _) => files::read(p)?,
        (None, Scheme::Rank0To1) => files::parse_str(files::DEGENERATE_RANK0TO1, "samples/degenerate_rank0to1.json")?,
        (None, Scheme::RankUp { r: 1 }) => files::parse_str(files::DEGENERATE_RANK1TO2, "samples/degenerate_rank1to2.json")?,
        (None, _) => return Err(CliError::Usage("this scheme has no shipped sample; pass --params".into())),
    };
    let want = match scheme {
        Scheme::Rank0To1 => 2,
        Scheme::RankUp { r } => r + 2,
    };
    if file.charges.len() != want {
        return Err(CliError::Usage(format!("scheme {} needs {want} charges, got {}", scheme.name(), file.charges.len())));
    }
    let k = k.unwrap_or(match scheme {
        Scheme::Rank0To1 => 3,
        Scheme::RankUp { .. } => 2,
    });
    let mut spec = match scheme {
        Scheme::Rank0To1 => rank0_to_1_spec(file.charges[0].clone(), file.charges[1].clone(), file.beta.clone(), file.delta.clone(), file.rho.clone(), k),
        Scheme::RankUp { .. } => rank_up_spec(file.charges.clone(), file.beta.clone(), file.delta.clone(), file.rho.clone(), k),
    };
    spec.a_shift = file.a_shift.clone();
    if let Some(l) = file.max_level {
        spec.max_level = l;
    }
    config.insert("scheme".into(), json!(scheme.name()));
    config.insert("k".into(), json!(k));
    config.insert("max_level".into(), json!(spec.max_level));
    config.insert("params".into(), json!(file));
    Ok(match degeneration_report(&spec) {
        Ok(rep) => {
            let mut rows = vec![vec!["k".to_string(), "min_valuation".to_string(), "match".to_string()]];
            rows.extend(rep.orders.iter().map(|o| vec![o.order.to_string(), o.min_valuation.map(|v| v.to_string()).unwrap_or_default(), o.matches.to_string()]));
            Outcome { config: Value::Object(config), result: rep.to_json(), verdict: rep.verdict().into(), passed: rep.passed(), table: Some(rows) }
        }
        Err(e) => failed(config, e),
    })
}

fn random_block_points(seed: u64, n: usize) -> Vec<BlockParams<Q>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || rat(rng.gen_range(-40..=40), rng.gen_range(41..=97));
    (0..n).map(|_| BlockParams { theta0: draw(), thetat: draw(), theta1: draw(), thetainf: draw(), sigma: draw() }).collect()
}

/// Rational or complex literal: `a`, `bi`, `a+bi`, `a-bi`.
pub fn parse_complex(s: &str) -> Option<(Q, Q)> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let Some(body) = t.strip_suffix('i') else {
        return parse_rational(&t).ok().map(|r| (r, rat(0, 1)));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len()).rev().find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => rat(1, 1),
        "-" => rat(-1, 1),
        x => parse_rational(x).ok()?,
    };
    Some((parse_rational(re).ok()?, im))
}

fn variable_name(kind: TauKind) -> &'static str {
    match kind {
        TauKind::VIAt0 | TauKind::VIAtInfty => "t",
        TauKind::VAtInfty | TauKind::IVAtInfty => "s",
    }
}

fn default_point(kind: TauKind) -> (Q, Q) {
    match kind {
        TauKind::VIAt0 => (rat(1, 20), rat(0, 1)),
        TauKind::VIAtInfty => (rat(20, 1), rat(0, 1)),
        TauKind::VAtInfty => (rat(0, 1), rat(20, 1)),
        TauKind::IVAtInfty => (rat(14142, 1000), rat(14142, 1000)),
    }
}

fn resolve_tau(args: &TauArgs) -> Result<(TauSpec, Vec<(String, BigComplex)>), CliError> {
    let file: TauFile = match (&args.params, args.kind) {
        (Some(p), _) => files::read(p)?,
        (None, Some(k)) => files::parse_str(files::tau_sample(k.into()), "sample")?,
        (None, None) => return Err(CliError::Usage("give --kind or --params".into())),
    };
    let kind = file.params.kind();
    if let Some(k) = args.kind {
        if TauKind::from(k) != kind {
            return Err(CliError::Usage(format!("--kind {} disagrees with the parameter file ({})", TauKind::from(k).name(), kind.name())));
        }
    }
    let mut spec = file.into_spec(args.nmax, args.order);
    if let Some(r) = &args.rho {
        spec.rho = parse_rational(r).map_err(|e| CliError::Usage(format!("--rho: {e}")))?;
    }
    spec.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    let var = variable_name(kind);
    let mut points = Vec::new();
    for e in &args.eval {
        let (name, value) = e.split_once('=').ok_or_else(|| CliError::Usage(format!("--eval expects {var}=<value>, got {e:?}")))?;
        if name.trim() != var {
            return Err(CliError::Usage(format!("{} is expanded in {var}, not {name:?}", kind.name())));
        }
        let (re, im) = parse_complex(value).ok_or_else(|| CliError::Usage(format!("cannot parse evaluation point {value:?}")))?;
        if re == rat(0, 1) && im == rat(0, 1) {
            return Err(CliError::Usage("the evaluation point must be nonzero".into()));
        }
        points.push((var.to_string(), BigComplex::from_rationals(&re, &im)));
    }
    if points.is_empty() {
        let (re, im) = default_point(kind);
        points.push((var.to_string(), BigComplex::from_rationals(&re, &im)));
    }
    Ok((spec, points))
}

fn modes_json(series: &TauSeries) -> Value {
    series.to_json()["modes"].clone()
}

fn tau_table(series: &TauSeries) -> Vec<Vec<String>> {
    let mut rows = vec![vec!["n".to_string(), "k".to_string(), "coefficient".to_string()]];
    for m in &series.modes {
        rows.extend(m.block.coeffs.iter().enumerate().map(|(k, c)| vec![m.n.to_string(), k.to_string(), rational_to_string(c)]));
    }
    rows
}

fn truncation_json(series: &TauSeries, at: &BigComplex) -> Value {
    let order = series.order();
    let smallest = series.smallest_terms(at);
    json!({
        "order": order,
        "asymptotic": series.variable == Variable::Inverse,
        "smallest_term_index": smallest.iter().map(|(n, k)| json!({ "n": n, "index": k })).collect::<Vec<_>>(),
        "past_optimal": series.variable == Variable::Inverse && series.past_optimal(at).is_some(),
    })
}

fn evaluate_point(series: &TauSeries, var: &str, at: &BigComplex, force: bool) -> Value {
    let form = series.spec.params.sigma_form();
    let mut out = json!({ "var": var, "at": complex(at), "truncation": truncation_json(series, at) });
    match series.jet(at, force) {
        Ok(j) => {
            out["tau"] = complex(&j.d[0]);
            let logd = j.d[0].inv().map(|inv| j.d[1].clone() * &inv);
            out["log_derivative"] = logd.as_ref().map(complex).unwrap_or(Value::Null);
            out["residual"] = match sigma_ode_residual(&form, Source::Tau { series, force }, at) {
                Ok(r) => json!({ "form": form_name(&form), "value": complex(&r.value), "abs": sci(r.abs()), "scale": sci(r.scale), "lost_digits": format!("{:.1}", r.lost_digits.max(0.0)) }),
                Err(e) => json!({ "form": form_name(&form), "error": e.to_string() }),
            };
            out["status"] = json!("ok");
        }
        Err(e) => {
            out["tau"] = Value::Null;
            out["residual"] = Value::Null;
            out["status"] = json!(if matches!(e, PainleveError::PastOptimalTruncation { .. }) { "refused" } else { "error" });
            out["error"] = json!(e.to_string());
        }
    }
    out
}

fn form_name(form: &crate::painleve::SigmaForm) -> Value {
    serde_json::to_value(form).ok().and_then(|v| v.get("form").cloned()).unwrap_or(Value::Null)
}

fn tau_outcome(config: serde_json::Map<String, Value>, spec: &TauSpec, points: &[(String, BigComplex)], force: bool) -> Outcome {
    let series = match tau_series(spec) {
        Ok(s) => s,
        Err(e) => return failed(config, e),
    };
    let evals: Vec<Value> = points.iter().map(|(v, z)| evaluate_point(&series, v, z, force)).collect();
    let ok = evals.iter().all(|e| e["status"] == "ok");
    Outcome {
        config: Value::Object(config),
        result: json!({ "kind": spec.params.kind().name(), "variable": series.to_json()["variable"], "modes": modes_json(&series), "evaluations": evals }),
        verdict: if ok { "ok" } else { "not_evaluated" }.into(),
        passed: true,
        table: Some(tau_table(&series)),
    }
}

fn residual_outcome(config: serde_json::Map<String, Value>, spec: &TauSpec, points: &[(String, BigComplex)], force: bool, factor: f64) -> Outcome {
    let extended = TauSpec { order: spec.order + 1, ..spec.clone() };
    let series = match tau_series(&extended) {
        Ok(s) => s,
        Err(e) => return failed(config, e),
    };
    let form = spec.params.sigma_form();
    let mut all = true;
    let mut checks = Vec::new();
    for (var, at) in points {
        let mut c = json!({ "var": var, "at": complex(at), "form": form_name(&form), "truncation": truncation_json(&series.truncate(spec.order), at) });
        match residual_budget(&series, spec.order, at, force) {
            Ok(b) => {
                let (bound_name, bound) = match series.variable {
                    Variable::Direct => ("first_dropped", b.first_dropped),
                    Variable::Inverse => ("last_kept", b.last_kept),
                };
                let pass = b.residual.abs() <= factor * bound;
                all &= pass;
                c["residual"] = json!({ "value": complex(&b.residual.value), "abs": sci(b.residual.abs()), "lost_digits": format!("{:.1}", b.residual.lost_digits.max(0.0)) });
                c["first_dropped"] = sci(b.first_dropped);
                c["last_kept"] = sci(b.last_kept);
                c["bound"] = json!(bound_name);
                c["verdict"] = json!(if pass { "pass" } else { "fail" });
            }
            Err(e) => {
                all = false;
                c["residual"] = Value::Null;
                c["verdict"] = json!("error");
                c["error"] = json!(e.to_string());
            }
        }
        checks.push(c);
    }
    Outcome {
        config: Value::Object(config),
        result: json!({ "kind": spec.params.kind().name(), "modes": modes_json(&series.truncate(spec.order)), "checks": checks }),
        verdict: if all { "pass" } else { "fail" }.into(),
        passed: all,
        table: Some(tau_table(&series.truncate(spec.order))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex("20"), Some((rat(20, 1), rat(0, 1))));
        assert_eq!(parse_complex("20i"), Some((rat(0, 1), rat(20, 1))));
        assert_eq!(parse_complex("1/2-3i"), Some((rat(1, 2), rat(-3, 1))));
        assert_eq!(parse_complex("1e-1+i"), Some((rat(1, 10), rat(1, 1))));
        assert_eq!(parse_complex("x"), None);
    }

    #[test]
    fn schemes() {
        assert_eq!(parse_scheme("rank0to1").unwrap(), Scheme::Rank0To1);
        assert_eq!(parse_scheme("rank2to3").unwrap(), Scheme::RankUp { r: 2 });
        assert!(parse_scheme("rank1to3").is_err());
    }

    #[test]
    fn samples_parse() {
        for k in [TauKind::VIAt0, TauKind::VIAtInfty, TauKind::VAtInfty, TauKind::IVAtInfty] {
            let f: TauFile = files::parse_str(files::tau_sample(k), "sample").unwrap();
            assert_eq!(f.params.kind(), k);
        }
    }
}
