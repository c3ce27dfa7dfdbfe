//! Command-line front end: argument parsing, job-file loading, subcommand
//! dispatch, and deterministic report emission.
//!
//! Exit codes follow the checking contract everywhere: 0 = every check
//! passed, 1 = a check conclusively failed (or a search / I/O error),
//! 2 = inconclusive — the horizon or budget ran out, or the request itself
//! was malformed so nothing was decided.
//!
//! Reports are JSON with sorted keys carrying `schema_version` and the seed
//! actually used; the same argv with the same seed reproduces the output
//! byte for byte. Reports go to stdout unless `--out` is given; orbit scans
//! can additionally emit a CSV of hit rows via `--csv`. Relative output
//! paths resolve under `$SHIFTLAB_OUT_DIR` when that variable is set (the
//! only environment configuration the tool reads).

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::algebra::{power, Poly, ProductKind};
use crate::convolution::{
    build_convolution_witness, search_condition_e, wellbehaved_search, CondECert, CondEGrid,
    ConvWitness,
};
use crate::densitysets::{
    build_family_far, compute_mk, enforce_pairwise_gap, verify_family, DensityFamily,
    FamilyCheckReport,
};
use crate::jobs::{
    complex_from_json, direction_from_tag, seq_from_json, ComplexJson, FamilyJson, JobConfig,
    PhiJson, PolyJson,
};
use crate::scaled::Wide;
use crate::shifts::{apply_shift, Direction, WeightKind, WeightSeq};
use crate::spaces::{Seq, SpaceSpec};
use crate::suite::{run_suite, SuiteConfig};
use crate::verify::{
    check_instance, orbit_hit_density, Ball, CriterionInstance, OperatorSpec, WitnessReport,
};
use crate::witnesses::{
    build_c0_fhc, build_cauchy_witness, build_coordwise_witness, build_omega_fhc,
    build_omega_hc_mixed, build_ufhc_cauchy, build_ufhc_coordwise, find_jk_candidates, frac_pow,
    l_alpha, lex_max, predicted_mixed_orbit, prepare_cauchy_witness, select_kappa_beta, C0Report,
    CoordWitnessSpec,
};
use crate::{Error, Result, DEFAULT_SEED, SCHEMA_VERSION};

const EXIT_PASS: i32 = 0;
const EXIT_FAIL: i32 = 1;
const EXIT_INCONCLUSIVE: i32 = 2;

#[derive(Parser)]
#[command(
    name = "shiftlab",
    version,
    about = "Numerical laboratory for weighted shifts, sequence algebras, and orbit witnesses"
)]
struct Cli {
    /// Report output path (stdout when omitted). Relative paths resolve
    /// under $SHIFTLAB_OUT_DIR when that variable is set.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// CSV output path for orbit scans (requires --out).
    #[arg(long, global = true)]
    csv: Option<PathBuf>,
    /// Worker-pool size (default: available parallelism). Results do not
    /// depend on this value.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build or re-check families of separated positive-density integer sets.
    Sets {
        #[command(subcommand)]
        cmd: SetsCmd,
    },
    /// Build a witness vector and verify its defining checks.
    Witness {
        #[command(subcommand)]
        cmd: WitnessCmd,
    },
    /// Convolution-symbol certificate searches and witnesses.
    Conv {
        #[command(subcommand)]
        cmd: ConvCmd,
    },
    /// Check one explicit criterion instance described by a job file.
    Check(JobArg),
    /// Scan an orbit and measure hitting densities per target ball.
    Orbit(JobArg),
    /// Run the acceptance battery and print one line per criterion.
    Suite(SuiteArgs),
}

#[derive(Subcommand)]
enum SetsCmd {
    /// Build a family with its gap and density certificates.
    Build(SetsBuildArgs),
    /// Re-verify every recorded property of a previously built family.
    Check(SetsCheckArgs),
}

#[derive(Args)]
struct SetsBuildArgs {
    #[arg(long, default_value_t = 3)]
    count: usize,
    #[arg(long, default_value_t = 100_000)]
    horizon: i64,
    /// Comma-separated separation parameters; default 1,2,…,count.
    #[arg(long)]
    gaps: Option<String>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Args)]
struct SetsCheckArgs {
    /// Family JSON produced by `sets build`.
    #[arg(long)]
    family: PathBuf,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Subcommand)]
enum WitnessCmd {
    /// Coordinatewise multi-exponent witness hitting a target orbit value.
    Coordwise(JobArg),
    /// Convolution-product witness with exact annihilation below the top
    /// exponent.
    Cauchy(JobArg),
    /// Block-train witness whose orbit hits a ball with positive density.
    #[command(name = "ufhc-coord")]
    UfhcCoord(JobArg),
    /// Convolution train hitting on an explicit arithmetic-like time set.
    #[command(name = "ufhc-cauchy")]
    UfhcCauchy(JobArg),
    /// Witnesses on the space of all sequences (coordinatewise topology).
    Omega(JobArg),
    /// Weighted sup-norm multi-target pipeline with tail certificates.
    #[command(name = "c0-fhc")]
    C0Fhc(JobArg),
}

#[derive(Subcommand)]
enum ConvCmd {
    /// Grid search for the eigenvalue-geometry inequality certificate.
    #[command(name = "search-e")]
    SearchE(JobArg),
    /// Ray-scan certificate for symbols decaying along a direction.
    Wellbehaved(JobArg),
    /// Exponential-combination witness with its exact power split.
    Witness(JobArg),
}

#[derive(Args)]
struct JobArg {
    /// Job file: shared space/weight/product plus task parameters.
    #[arg(long)]
    job: PathBuf,
}

#[derive(Args)]
struct SuiteArgs {
    /// Shrink the heavy windows to a smoke pass; wall-clock budgets are not
    /// enforced in this mode.
    #[arg(long)]
    quick: bool,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

/// Entry point behind the binary: argv without the program name.
pub fn run(argv: Vec<String>) -> i32 {
    let cli = match Cli::try_parse_from(std::iter::once("shiftlab".to_string()).chain(argv)) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // --help/--version are successful exits; anything else is a
            // usage problem, so nothing was decided.
            return if e.use_stderr() { EXIT_INCONCLUSIVE } else { EXIT_PASS };
        }
    };
    if let Some(n) = cli.jobs {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("shiftlab: {e}");
            match e {
                Error::SearchFailed(_) | Error::Io(_) => EXIT_FAIL,
                _ => EXIT_INCONCLUSIVE,
            }
        }
    }
}

fn dispatch(cli: &Cli) -> Result<i32> {
    let sink = Sink { out: cli.out.clone(), csv: cli.csv.clone() };
    match &cli.cmd {
        Cmd::Sets { cmd: SetsCmd::Build(args) } => sets_build(args, &sink),
        Cmd::Sets { cmd: SetsCmd::Check(args) } => sets_check(args, &sink),
        Cmd::Witness { cmd } => {
            let (path, f) = match cmd {
                WitnessCmd::Coordwise(a) => (&a.job, witness_coordwise as JobHandler),
                WitnessCmd::Cauchy(a) => (&a.job, witness_cauchy as JobHandler),
                WitnessCmd::UfhcCoord(a) => (&a.job, witness_ufhc_coord as JobHandler),
                WitnessCmd::UfhcCauchy(a) => (&a.job, witness_ufhc_cauchy as JobHandler),
                WitnessCmd::Omega(a) => (&a.job, witness_omega as JobHandler),
                WitnessCmd::C0Fhc(a) => (&a.job, witness_c0_fhc as JobHandler),
            };
            let (out, code) = f(&JobConfig::from_path(path)?)?;
            sink.emit_job(&out)?;
            Ok(code)
        }
        Cmd::Conv { cmd } => {
            let (path, f) = match cmd {
                ConvCmd::SearchE(a) => (&a.job, conv_search_e as JobHandler),
                ConvCmd::Wellbehaved(a) => (&a.job, conv_wellbehaved as JobHandler),
                ConvCmd::Witness(a) => (&a.job, conv_witness as JobHandler),
            };
            let (out, code) = f(&JobConfig::from_path(path)?)?;
            sink.emit_job(&out)?;
            Ok(code)
        }
        Cmd::Check(a) => {
            let (out, code) = check_cmd(&JobConfig::from_path(&a.job)?)?;
            sink.emit_job(&out)?;
            Ok(code)
        }
        Cmd::Orbit(a) => {
            let (out, code) = orbit_cmd(&JobConfig::from_path(&a.job)?)?;
            sink.emit_job(&out)?;
            Ok(code)
        }
        Cmd::Suite(args) => suite_cmd(args, &sink),
    }
}

type JobHandler = fn(&JobConfig) -> Result<(JobOutput, i32)>;

/// A finished job: either a plain JSON report or a typed witness report
/// that still knows its orbit scan (so the CSV side channel can use it).
enum JobOutput {
    Plain(Value),
    Report(WitnessReport),
}

impl JobOutput {
    fn to_value(&self) -> Result<Value> {
        match self {
            JobOutput::Plain(v) => Ok(v.clone()),
            JobOutput::Report(r) => Ok(serde_json::to_value(r)?),
        }
    }
}

/// Job-driven entry shared by the CLI and the C ABI: run the named task
/// against a parsed job, returning the JSON report and the exit code the
/// checking contract assigns to it (0 pass, 1 fail; errors map to 1 or 2
/// at the boundary).
pub fn run_job(kind: &str, job: &JobConfig) -> Result<(Value, i32)> {
    let f: JobHandler = match kind {
        "witness-coordwise" => witness_coordwise,
        "witness-cauchy" => witness_cauchy,
        "witness-ufhc-coord" => witness_ufhc_coord,
        "witness-ufhc-cauchy" => witness_ufhc_cauchy,
        "witness-omega" => witness_omega,
        "witness-c0-fhc" => witness_c0_fhc,
        "conv-search-e" => conv_search_e,
        "conv-wellbehaved" => conv_wellbehaved,
        "conv-witness" => conv_witness,
        "check" => check_cmd,
        "orbit" => orbit_cmd,
        other => {
            return Err(Error::InvalidParameter(format!("unknown job kind '{other}'")));
        }
    };
    let (out, code) = f(job)?;
    Ok((out.to_value()?, code))
}

// ---------------------------------------------------------------------------
// Report emission
// ---------------------------------------------------------------------------

struct Sink {
    out: Option<PathBuf>,
    csv: Option<PathBuf>,
}

fn resolve_out(p: &Path) -> PathBuf {
    if p.is_absolute() {
        return p.to_path_buf();
    }
    match std::env::var_os("SHIFTLAB_OUT_DIR") {
        Some(dir) => PathBuf::from(dir).join(p),
        None => p.to_path_buf(),
    }
}

impl Sink {
    /// Pretty sorted-key JSON, newline-terminated, to --out or stdout.
    fn emit(&self, value: &Value) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        match &self.out {
            Some(p) => std::fs::write(resolve_out(p), text)?,
            None => print!("{text}"),
        }
        Ok(())
    }

    fn emit_job(&self, out: &JobOutput) -> Result<()> {
        match out {
            JobOutput::Plain(v) => {
                if self.csv.is_some() {
                    return Err(Error::InvalidParameter(
                        "--csv applies to witness and orbit reports only".into(),
                    ));
                }
                self.emit(v)
            }
            JobOutput::Report(r) => self.emit_report(r),
        }
    }

    /// Witness reports additionally support the orbit CSV side channel.
    fn emit_report(&self, report: &WitnessReport) -> Result<()> {
        if self.csv.is_some() && self.out.is_none() {
            return Err(Error::InvalidParameter("--csv needs --out".into()));
        }
        if let (Some(out), csv) = (&self.out, &self.csv) {
            let csv_resolved = csv.as_ref().map(|p| resolve_out(p));
            crate::verify::emit_report(report, &resolve_out(out), csv_resolved.as_deref())
        } else {
            self.emit(&serde_json::to_value(report)?)
        }
    }
}

fn cj(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn pass_code(passed: bool) -> i32 {
    if passed {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

// ---------------------------------------------------------------------------
// sets
// ---------------------------------------------------------------------------

fn parse_gaps(raw: &Option<String>, count: usize) -> Result<Vec<f64>> {
    match raw {
        None => Ok((1..=count).map(|k| k as f64).collect()),
        Some(text) => text
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::InvalidParameter(format!("bad gap value '{t}'")))
            })
            .collect(),
    }
}

fn family_check_value(rep: &FamilyCheckReport) -> Result<Value> {
    Ok(json!({
        "disjoint": rep.disjoint,
        "min_ok": rep.min_ok,
        "self_gap_ok": rep.self_gap_ok,
        "cross_gap_ok": rep.cross_gap_ok,
        "worst_cross": serde_json::to_value(rep.worst_cross)?,
        "kappa_checks": serde_json::to_value(&rep.kappa_checks)?,
        "densities": rep.densities,
        "pass": rep.pass,
    }))
}

fn sets_build(args: &SetsBuildArgs, sink: &Sink) -> Result<i32> {
    let gaps = parse_gaps(&args.gaps, args.count)?;
    if gaps.len() != args.count {
        return Err(Error::InvalidParameter(format!(
            "{} gap values for {} sets",
            gaps.len(),
            args.count
        )));
    }
    let base = build_family_far(args.count, args.horizon)?;
    let fam = enforce_pairwise_gap(&base, &gaps)?;
    let rep = verify_family(&fam);
    let value = json!({
        "schema_version": SCHEMA_VERSION,
        "seed": args.seed,
        "params": {"count": args.count, "horizon": args.horizon, "gaps": gaps},
        "family": serde_json::to_value(FamilyJson::from_family(&fam))?,
        "check": family_check_value(&rep)?,
        "passed": rep.pass,
    });
    sink.emit(&value)?;
    Ok(pass_code(rep.pass))
}

fn sets_check(args: &SetsCheckArgs, sink: &Sink) -> Result<i32> {
    let text = std::fs::read_to_string(&args.family)?;
    let parsed: Value = serde_json::from_str(&text)?;
    // Accept both a bare family and the envelope `sets build` emits.
    let fam_value = parsed.get("family").cloned().unwrap_or(parsed);
    let fam_json: FamilyJson = serde_json::from_value(fam_value)?;
    let fam = fam_json.to_family()?;
    let rep = verify_family(&fam);
    let value = json!({
        "schema_version": SCHEMA_VERSION,
        "seed": args.seed,
        "params": {"family": args.family.display().to_string()},
        "check": family_check_value(&rep)?,
        "passed": rep.pass,
    });
    sink.emit(&value)?;
    Ok(pass_code(rep.pass))
}

// ---------------------------------------------------------------------------
// witness helpers
// ---------------------------------------------------------------------------

fn seqs_from_task(
    rows: &[Vec<ComplexJson>],
    d: usize,
    horizon: i64,
    what: &str,
) -> Result<Vec<Seq>> {
    if rows.is_empty() {
        return Ok(vec![Seq::zero(horizon, false); d]);
    }
    if rows.len() != d {
        return Err(Error::InvalidParameter(format!(
            "{what} needs {d} vectors, found {}",
            rows.len()
        )));
    }
    Ok(rows.iter().map(|r| seq_from_json(r, horizon)).collect())
}

fn insert_num(params: &mut BTreeMap<String, Value>, key: &str, v: f64) {
    params.insert(key.into(), json!(v));
}

// ---------------------------------------------------------------------------
// witness coordwise
// ---------------------------------------------------------------------------

#[derive(Deserialize)]
struct CoordwiseTask {
    a: Vec<Vec<u32>>,
    #[serde(default)]
    x: Vec<Vec<ComplexJson>>,
    y: Vec<ComplexJson>,
    #[serde(default)]
    n_k: Option<i64>,
    #[serde(default = "d_1e6")]
    v_radius: f64,
    #[serde(default = "d_1e6")]
    w_radius: f64,
    #[serde(default = "d_q1")]
    q: u32,
}

fn d_1e6() -> f64 {
    1e-6
}
fn d_1e3() -> f64 {
    1e-3
}
fn d_1e9() -> f64 {
    1e-9
}
fn d_q1() -> u32 {
    1
}

/// First orbit time with every non-distinguished predicted image inside the
/// smallness radius (the distinguished exponent reproduces the target
/// exactly, so only the others constrain the search).
fn coordwise_first_nk(
    a: &[Vec<u32>],
    kappa: &[f64],
    beta: &[u32],
    x: &[Seq],
    y: &Seq,
    w: &WeightSeq,
    space: &SpaceSpec,
    q: u32,
    w_radius: f64,
) -> Result<i64> {
    let p = y.support_max().unwrap_or(0);
    let floor = x.iter().map(|s| s.support_max().unwrap_or(-1)).fold(0, i64::max) + p + 1;
    let mut buf = Seq::zero(w.horizon, false);
    'next: for n in floor..=(w.horizon - p) {
        for alpha in a.iter().filter(|al| al.as_slice() != beta) {
            let la = l_alpha(alpha, kappa);
            for (l, yl) in y.support() {
                let coef =
                    frac_pow(yl, la) * Wide::from_ln_polar((1.0 - la) * w.log_prod(l, n + l), 0.0);
                buf.set(l, coef);
            }
            let norm = space.seminorm(&buf, q)?;
            for l in 0..=p {
                buf.set(l, Wide::ZERO);
            }
            if norm >= w_radius {
                continue 'next;
            }
        }
        return Ok(n);
    }
    Err(Error::HorizonExhausted(format!(
        "no orbit time ≤ {} brings every other exponent inside {w_radius}",
        w.horizon - p
    )))
}

fn witness_coordwise(job: &JobConfig) -> Result<(JobOutput, i32)> {
    let space = job.space()?;
    let w = job.weight()?;
    let task: CoordwiseTask = job.task()?;
    let seed = job.seed();
    let d = task
        .a
        .first()
        .ok_or_else(|| Error::InvalidParameter("empty exponent set".into()))?
        .len();
    let y = seq_from_json(&task.y, w.horizon);
    let x = seqs_from_task(&task.x, d, w.horizon, "x")?;
    let (kappa, beta) = select_kappa_beta(&task.a, seed)?;
    let searched = task.n_k.is_none();
    let n_k = match task.n_k {
        Some(n) => n,
        None => coordwise_first_nk(
            &task.a,
            &kappa,
            &beta,
            &x,
            &y,
            &w,
            &space,
            task.q,
            task.w_radius,
        )?,
    };
    let spec = CoordWitnessSpec {
        a: task.a.clone(),
        x,
        y: y.clone(),
        n_k,
        kappa: kappa.clone(),
        beta: beta.clone(),
    };
    let us = build_coordwise_witness(&spec, &w, &space)?;
    let inst = CriterionInstance {
        space: space.clone(),
        a: task.a.clone(),
        beta,
        u: us,
        n_steps: n_k,
        v_ball: Ball { center: y, radius: task.v_radius, q: task.q },
        w_radius: task.w_radius,
        w_q: task.q,
        product: ProductKind::Coordinatewise,
        operator: OperatorSpec::Shift(w, Direction::Backward),
    };
    let mut report = check_instance(&inst, seed)?;
    report.params.insert("kappa".into(), json!(kappa));
    report.params.insert("n_k".into(), json!(n_k));
    report.params.insert("n_k_searched".into(), json!(searched));
    insert_num(&mut report.params, "v_radius", task.v_radius);
    insert_num(&mut report.params, "w_radius", task.w_radius);
    report.params.insert("q".into(), json!(task.q));
    let code = pass_code(report.passed);
    Ok((JobOutput::Report(report), code))
}

// ---------------------------------------------------------------------------
// witness cauchy
// ---------------------------------------------------------------------------

#[derive(Deserialize)]
struct CauchyTask {
    a: Vec<Vec<u32>>,
    #[serde(default)]
    x: Vec<Vec<ComplexJson>>,
    y: Vec<ComplexJson>,
    #[serde(default)]
    j_k: Option<i64>,
    #[serde(default = "d_1e4")]
    delta: f64,
    #[serde(default = "d_q1")]
    r: u32,
    #[serde(default = "d_1e3")]
    v_radius: f64,
    #[serde(default = "d_1e9")]
    w_radius: f64,
    #[serde(default = "d_q1")]
    q: u32,
}

fn d_1e4() -> f64 {
    1e-4
}

fn witness_cauchy(job: &JobConfig) -> Result<(JobOutput, i32)> {
    let space = job.space()?;
    let w = job.weight()?;
    let task: CauchyTask = job.task()?;
    let seed = job.seed();
    let d = task
        .a
        .first()
        .ok_or_else(|| Error::InvalidParameter("empty exponent set".into()))?
        .len();
    let y = seq_from_json(&task.y, w.horizon);
    let x = seqs_from_task(&task.x, d, w.horizon, "x")?;
    let searched = task.j_k.is_none();
    let j_k = match task.j_k {
        Some(j) => j,
        None => {
            // The geometric ladder bounds the admissible range; walk the
            // first rung forward until the measured residual clears the
            // target radius.
            let rungs = find_jk_candidates(&task.a, &x, &y, &w, &space, task.r, task.delta, 2)?;
            let (mut j, hi) = (rungs[0], *rungs.last().unwrap());
            loop {
                let spec =
                    prepare_cauchy_witness(&task.a, &x, &y, &w, &space, task.r, task.delta, j)?;
                let wit = build_cauchy_witness(&spec, &w, &space)?;
                if space.seminorm(&wit.residual, task.q)? < task.v_radius {
                    break j;
                }
                j += 1;
                if j > hi {
                    return Err(Error::HorizonExhausted(format!(
                        "no orbit time ≤ {hi} brings the residual inside {}",
                        task.v_radius
                    )));
                }
            }
        }
    };
    let spec = prepare_cauchy_witness(&task.a, &x, &y, &w, &space, task.r, task.delta, j_k)?;
    let wit = build_cauchy_witness(&spec, &w, &space)?;
    let residual_norm = space.seminorm(&wit.residual, task.q)?;
    let beta = lex_max(&task.a);
    let inst = CriterionInstance {
        space: space.clone(),
        a: task.a.clone(),
        beta,
        u: wit.u.clone(),
        n_steps: wit.n,
        v_ball: Ball { center: y, radius: task.v_radius, q: task.q },
        w_radius: task.w_radius,
        w_q: task.q,
        product: ProductKind::Cauchy,
        operator: OperatorSpec::Shift(w, Direction::Backward),
    };
    let mut report = check_instance(&inst, seed)?;
    report.params.insert("j_k".into(), json!(j_k));
    report.params.insert("j_k_searched".into(), json!(searched));
    report.params.insert("n_steps_built".into(), json!(wit.n));
    insert_num(&mut report.params, "delta", task.delta);
    report.params.insert("r".into(), json!(task.r));
    insert_num(&mut report.params, "eps_ln", wit.eps_ln);
    report.params.insert("rho".into(), json!(wit.rho));
    insert_num(&mut report.params, "residual_norm", residual_norm);
    insert_num(&mut report.params, "v_radius", task.v_radius);
    insert_num(&mut report.params, "w_radius", task.w_radius);
    let code = pass_code(report.passed);
    Ok((JobOutput::Report(report), code))
}

// ---------------------------------------------------------------------------
// witness ufhc-coord
// ---------------------------------------------------------------------------

#[derive(Deserialize)]
struct UfhcCoordTask {
    #[serde(default = "d_m0")]
    m0: u32,
    #[serde(default = "d_m1")]
    m1: u32,
    v: Vec<ComplexJson>,
    #[serde(default)]
    x: Vec<ComplexJson>,
    #[serde(default = "d_eps")]
    eps: f64,
    #[serde(default = "d_nbig")]
    n_big: i64,
    #[serde(default = "d_n1")]
    n1: i64,
    #[serde(default = "d_window")]
    window: i64,
    #[serde(default = "d_q1")]
    q: u32,
}

fn d_m0() -> u32 {
    1
}
fn d_m1() -> u32 {
    3
}
fn d_eps() -> f64 {
    0.1
}
fn d_nbig() -> i64 {
    5
}
fn d_n1() -> i64 {
    2
}
fn d_window() -> i64 {
    10_000
}

fn witness_ufhc_coord(job: &JobConfig) -> Result<(JobOutput, i32)> {
    let space = job.space()?;
    let w = job.weight()?;
    let task: UfhcCoordTask = job.task()?;
    let seed = job.seed();
    if task.n_big < 1 || task.n1 < 0 || task.window < 0 {
        return Err(Error::InvalidParameter("need n_big ≥ 1 and nonnegative n1/window".into()));
    }
    let v = seq_from_json(&task.v, w.horizon);
    let x = seq_from_json(&task.x, w.horizon);
    let j_max = task.window / task.n_big;
    let terms = (j_max - task.n1 + 1).max(1) as usize;
    let wit =
        build_ufhc_coordwise(task.m0, task.m1, &v, &x, &w, &space, task.n_big, task.n1, terms)?;
    let ball = Ball { center: v, radius: 2.0 * task.eps, q: task.q };
    let op = OperatorSpec::Shift(w, Direction::Backward);
    let scan = orbit_hit_density(
        &op,
        &space,
        &wit.u,
        &Poly::monomial(task.m0),
        ProductKind::Coordinatewise,
        std::slice::from_ref(&ball),
        task.window,
        task.n_big,
    )?;
    let td = &scan.targets[0];
    let scheduled_all = scan.samples.iter().enumerate().all(|(idx, &p)| {
        let j = p / task.n_big;
        j < task.n1 || j > j_max || td.hit_flags[idx]
    });
    let density_floor = 1.0 / (2.0 * task.n_big as f64);
    let passed = scheduled_all && td.density_min >= density_floor;
    let mut report = WitnessReport::skeleton(seed);
    report.instance = format!(
        "block train m0={} m1={}, stride {}, window {}",
        task.m0, task.m1, task.n_big, task.window
    );
    report.passed = passed;
    report.params.insert("m0".into(), json!(task.m0));
    report.params.insert("m1".into(), json!(task.m1));
    insert_num(&mut report.params, "eps", task.eps);
    report.params.insert("n_big".into(), json!(task.n_big));
    report.params.insert("n1".into(), json!(task.n1));
    report.params.insert("window".into(), json!(task.window));
    report.params.insert("terms".into(), json!(terms));
    report.params.insert("q".into(), json!(task.q));
    insert_num(&mut report.params, "tail_bound", wit.tail_bound);
    insert_num(&mut report.params, "density_min", td.density_min);
    insert_num(&mut report.params, "density_floor", density_floor);
    report.params.insert("scheduled_all_hit".into(), json!(scheduled_all));
    report.orbit = Some(scan);
    Ok((JobOutput::Report(report), pass_code(passed)))
}

// ---------------------------------------------------------------------------
// witness ufhc-cauchy
// ---------------------------------------------------------------------------

#[derive(Deserialize)]
struct UfhcCauchyTask {
    #[serde(default = "d_m2")]
    m: u32,
    y: Vec<ComplexJson>,
    #[serde(default)]
    x: Vec<ComplexJson>,
    #[serde(default = "d_half")]
    c: f64,
    #[serde(default = "d_07")]
    d: f64,
    #[serde(default = "d_2")]
    q_steps: i64,
    #[serde(default = "d_sigma")]
    sigma: i64,
    /// Optional ball requirement on the top-power orbit at the hit times.
    #[serde(default)]
    v_radius: Option<f64>,
    #[serde(default = "d_q1")]
    q: u32,
}

fn d_m2() -> u32 {
    2
}
fn d_half() -> f64 {
    0.5
}
fn d_07() -> f64 {
    0.7
}
fn d_2() -> i64 {
    2
}
fn d_sigma() -> i64 {
    1_000
}

fn witness_ufhc_cauchy(job: &JobConfig) -> Result<(JobOutput, i32)> {
    let space = job.space()?;
    let w = job.weight()?;
    let task: UfhcCauchyTask = job.task()?;
    let seed = job.seed();
    let y = seq_from_json(&task.y, w.horizon);
    let x = seq_from_json(&task.x, w.horizon);
    let wit =
        build_ufhc_cauchy(task.m, &y, &x, &w, &space, task.c, task.d, task.q_steps, task.sigma)?;
    // Exact annihilation below the top power, on every hit time.
    let mut zeros_ok = !wit.e_sigma.is_empty();
    for n_pow in 1..task.m {
        let pw = power(&wit.u, n_pow, ProductKind::Cauchy)?;
        for &s in &wit.e_sigma {
            let orb = apply_shift(&w, &pw, s, Direction::Backward)?;
            if !(orb.is_zero() && orb.tail_bound == 0.0 && pw.tail_bound == 0.0) {
                zeros_ok = false;
            }
        }
    }
    // Top-power residual at the first, middle, and last hit times.
    let um = power(&wit.u, task.m, ProductKind::Cauchy)?;
    let picks = [
        wit.e_sigma[0],
        wit.e_sigma[wit.e_sigma.len() / 2],
        *wit.e_sigma.last().unwrap(),
    ];
    let mut worst_resid = 0.0f64;
    for &s in &picks {
        let orb = apply_shift(&w, &um, s, Direction::Backward)?;
        worst_resid = worst_resid.max(space.seminorm(&orb.sub(&y), task.q)? + orb.tail_bound);
    }
    let ratio_gap = (wit.card_ratio - wit.formula_ratio).abs();
    let ratio_ok = ratio_gap <= 0.10 * wit.formula_ratio;
    let ball_ok = task.v_radius.map(|r| worst_resid < r).unwrap_or(true);
    let passed = zeros_ok && ratio_ok && ball_ok;
    let mut report = WitnessReport::skeleton(seed);
    report.instance = format!(
        "convolution train m={} q={} sigma={} window [{}, {})",
        task.m, task.q_steps, task.sigma, task.c, task.d
    );
    report.passed = passed;
    report.params.insert("m".into(), json!(task.m));
    insert_num(&mut report.params, "c", task.c);
    insert_num(&mut report.params, "d", task.d);
    report.params.insert("q_steps".into(), json!(task.q_steps));
    report.params.insert("sigma".into(), json!(task.sigma));
    report.params.insert("hit_count".into(), json!(wit.e_sigma.len()));
    report.params.insert("first_hit".into(), json!(wit.e_sigma[0]));
    report.params.insert("last_hit".into(), json!(*wit.e_sigma.last().unwrap()));
    insert_num(&mut report.params, "eps_ln", wit.eps_ln);
    insert_num(&mut report.params, "card_ratio", wit.card_ratio);
    insert_num(&mut report.params, "formula_ratio", wit.formula_ratio);
    report.params.insert("ratio_within_10pct".into(), json!(ratio_ok));
    report.params.insert("exact_zeros_below_top_power".into(), json!(zeros_ok));
    insert_num(&mut report.params, "top_power_worst_residual", worst_resid);
    report
        .params
        .insert("v_radius".into(), task.v_radius.map(|r| json!(r)).unwrap_or(Value::Null));
    Ok((JobOutput::Report(report), pass_code(passed)))
}

// ---------------------------------------------------------------------------
// witness omega
// ---------------------------------------------------------------------------

#[derive(Deserialize)]
struct OmegaTargetJson {
    v: Vec<ComplexJson>,
    m: u32,
}

#[derive(Deserialize)]
struct OmegaTask {
    mode: String,
    #[serde(default)]
    targets: Vec<OmegaTargetJson>,
    #[serde(default)]
    family: Option<FamilyJson>,
    #[serde(default)]
    u_target: Vec<ComplexJson>,
    #[serde(default)]
    v_target: Vec<ComplexJson>,
    #[serde(default = "d_one")]
    c0: ComplexJson,
    #[serde(default = "d_one")]
    c1: ComplexJson,
}

fn d_one() -> ComplexJson {
    [1.0, 0.0]
}

fn default_family(count: usize, horizon: i64) -> Result<DensityFamily> {
    let gaps: Vec<f64> = (1..=count).map(|k| k as f64).collect();
    enforce_pairwise_gap(&build_family_far(count, horizon)?, &gaps)
}

fn witness_omega(job: &JobConfig, sink: &Sink) -> Result<i32> {
    let w = job.weight()?;
    let task: OmegaTask = job.task()?;
    let seed = job.seed();
    let horizon = w.horizon;
    let mut report = WitnessReport::skeleton(seed);
    let passed = match task.mode.as_str() {
        "fhc" => {
            if task.targets.is_empty() {
                return Err(Error::InvalidParameter("fhc mode needs targets".into()));
            }
            let targets: Vec<(Seq, u32)> = task
                .targets
                .iter()
                .map(|t| (seq_from_json(&t.v, horizon), t.m))
                .collect();
            let fam = match &task.family {
                Some(fj) => fj.to_family()?,
                None => default_family(targets.len(), horizon)?,
            };
            let wit = build_omega_fhc(&targets, &fam, &w, horizon)?;
            // Coordinatewise topology: exactness checked on the window of
            // each target at its first placed orbit time.
            let mut exact = true;
            let mut worst = 0.0f64;
            for (p_idx, (v, m)) in targets.iter().enumerate() {
                let pw = power(&wit.u, *m, ProductKind::Coordinatewise)?;
                let n = wit.placed[p_idx][0];
                let orb = apply_shift(&w, &pw, n, Direction::Backward)?;
                for (l, c) in v.support() {
                    let gap = Wide::rel_diff(orb.get(l), c);
                    worst = worst.max(gap);
                    if gap >= 1e-9 {
                        exact = false;
                    }
                }
            }
            report.instance = format!("omega frequent witness, {} targets", targets.len());
            report
                .params
                .insert("placed_counts".into(), json!(wit.placed.iter().map(Vec::len).collect::<Vec<_>>()));
            insert_num(&mut report.params, "first_block_worst_rel_err", worst);
            report.params.insert("mode".into(), json!("fhc"));
            exact
        }
        "mixed" => {
            let u_target = seq_from_json(&task.u_target, horizon);
            let v_target = seq_from_json(&task.v_target, horizon);
            let wit = build_omega_hc_mixed(&u_target, &v_target, &w, horizon, seed)?;
            let c0 = complex_from_json(&task.c0);
            let c1 = complex_from_json(&task.c1);
            // Base-point agreement below the block window.
            let mut base_ok = true;
            for (i, c) in u_target.support() {
                if Wide::rel_diff(wit.x.get(i), c) >= 1e-12 {
                    base_ok = false;
                }
            }
            // Closed-form orbit of c0 x^{m0} + c1 x^{m1} vs the direct path
            // at the first and last scheduled times.
            let poly = Poly::new(
                1,
                vec![(vec![wit.m0], c0), (vec![wit.m1], c1)],
            )?;
            let deg = v_target.support_max().unwrap_or(0);
            let mut worst = 0.0f64;
            for k in [0, wit.n_ks.len() - 1] {
                let pred = predicted_mixed_orbit(&wit, &w, c0, c1, k);
                let px = crate::algebra::eval_poly(
                    &poly,
                    std::slice::from_ref(&wit.x),
                    ProductKind::Coordinatewise,
                )?;
                let orb = apply_shift(&w, &px, wit.n_ks[k], Direction::Backward)?;
                for l in 0..=deg {
                    worst = worst.max(Wide::rel_diff(orb.get(l), pred.get(l)));
                }
            }
            report.instance = format!(
                "omega mixed witness, {} orbit times, regimes {:?}",
                wit.n_ks.len(),
                wit.regimes
            );
            report.params.insert("mode".into(), json!("mixed"));
            report.params.insert("orbit_times".into(), json!(wit.n_ks.len()));
            report.params.insert("m0".into(), json!(wit.m0));
            report.params.insert("m1".into(), json!(wit.m1));
            report
                .params
                .insert("regimes".into(), json!(wit.regimes.iter().map(|r| format!("{r:?}")).collect::<Vec<_>>()));
            insert_num(&mut report.params, "window_worst_rel_err", worst);
            report.params.insert("base_point_ok".into(), json!(base_ok));
            base_ok && worst < 1e-9
        }
        other => {
            return Err(Error::InvalidParameter(format!(
                "unknown omega mode '{other}' (expected fhc or mixed)"
            )));
        }
    };
    report.passed = passed;
    sink.emit_report(&report)?;
    Ok(pass_code(passed))
}

// ---------------------------------------------------------------------------
// witness c0-fhc
// ---------------------------------------------------------------------------

#[derive(Deserialize)]
struct C0FhcTask {
    targets: Vec<OmegaTargetJson>,
    #[serde(default)]
    family: Option<FamilyJson>,
}

fn c0_report_value(rep: &C0Report) -> Value {
    json!({
        "p": rep.p,
        "conclusive": rep.conclusive,
        "reason": rep.reason,
        "n_threshold": rep.n_threshold,
        "block_count": rep.block_count,
        "sup_u": rep.sup_u,
        "ineq1_worst": rep.ineq1_worst,
        "ineq2_worst": rep.ineq2_worst,
        "ineq3_worst": rep.ineq3_worst,
        "monotone_cert": rep.monotone_cert,
        "oracle_rel_err": rep.oracle_rel_err,
        "passed": rep.passed,
    })
}

/// Longest blockwise-recursive weight prefix the family horizon supports.
fn derive_mk_weight(fam: &DensityFamily) -> Result<(WeightSeq, i64)> {
    let ms = (2..=8)
        .rev()
        .find_map(|k| compute_mk(fam, k).ok())
        .ok_or_else(|| Error::HorizonExhausted("no block prefix fits the family horizon".into()))?;
    let h = *ms.last().unwrap();
    Ok((WeightSeq::new(WeightKind::MkWeight(ms), h)?, h))
}

fn witness_c0_fhc(job: &JobConfig, sink: &Sink) -> Result<i32> {
    let task: C0FhcTask = job.task()?;
    let seed = job.seed();
    if task.targets.is_empty() {
        return Err(Error::InvalidParameter("need at least one target".into()));
    }
    let fam = match &task.family {
        Some(fj) => fj.to_family()?,
        None => default_family(task.targets.len().max(3), job.horizon().unwrap_or(600))?,
    };
    let (w, horizon) = match &job.weight {
        Some(_) => {
            let w = job.weight()?;
            let h = w.horizon;
            (w, h)
        }
        None => derive_mk_weight(&fam)?,
    };
    let targets: Vec<(Seq, u32)> = task
        .targets
        .iter()
        .map(|t| (seq_from_json(&t.v, horizon), t.m))
        .collect();
    let (u, reports) = build_c0_fhc(&targets, &fam, &w, horizon)?;
    let any_fail = reports.iter().any(|r| r.conclusive && !r.passed);
    let all_pass = reports.iter().all(|r| r.conclusive && r.passed);
    let value = json!({
        "schema_version": SCHEMA_VERSION,
        "seed": seed,
        "params": {
            "targets": task.targets.len(),
            "horizon": horizon,
            "family_given": task.family.is_some(),
            "weight_given": job.weight.is_some(),
        },
        "witness_nonzero": !u.is_zero(),
        "reports": reports.iter().map(c0_report_value).collect::<Vec<_>>(),
        "passed": all_pass,
        "conclusive": reports.iter().all(|r| r.conclusive),
    });
    sink.emit(&value)?;
    Ok(if any_fail {
        EXIT_FAIL
    } else if all_pass {
        EXIT_PASS
    } else {
        EXIT_INCONCLUSIVE
    })
}

// ---------------------------------------------------------------------------
// conv
// ---------------------------------------------------------------------------

#[derive(Deserialize)]
struct SearchETask {
    phi: PhiJson,
    i_set: Vec<u32>,
    #[serde(default = "d_3")]
    k_max: u32,
    #[serde(default = "d_margin")]
    margin_ln: f64,
}

fn d_3() -> u32 {
    3
}
fn d_margin() -> f64 {
    1e-6
}

fn cert_value(cert: &CondECert) -> Value {
    json!({
        "m": cert.m,
        "a": cj(cert.a),
        "b": cj(cert.b),
        "margin_ln": cert.margin_ln,
        "rows": cert
            .rows
            .iter()
            .map(|r| json!({
                "n": r.n,
                "d": r.d,
                "point": cj(r.point),
                "lhs_ln": r.lhs_ln,
                "rhs_ln": r.rhs_ln,
            }))
            .collect::<Vec<_>>(),
    })
}

fn conv_search_e(job: &JobConfig, sink: &Sink) -> Result<i32> {
    let task: SearchETask = job.task()?;
    let seed = job.seed();
    let phi = task.phi.to_phi()?;
    let grid = CondEGrid::lattice_2pi(task.k_max, task.margin_ln);
    let cert = search_condition_e(&phi, &task.i_set, &grid)?;
    let value = json!({
        "schema_version": SCHEMA_VERSION,
        "seed": seed,
        "params": {"i_set": task.i_set, "k_max": task.k_max, "margin_ln": task.margin_ln},
        "certificate": cert_value(&cert),
        "passed": true,
    });
    sink.emit(&value)?;
    Ok(EXIT_PASS)
}

#[derive(Deserialize)]
struct WellbehavedTask {
    phi: PhiJson,
    v: ComplexJson,
    i_set: Vec<u32>,
}

fn conv_wellbehaved(job: &JobConfig, sink: &Sink) -> Result<i32> {
    let task: WellbehavedTask = job.task()?;
    let seed = job.seed();
    let phi = task.phi.to_phi()?;
    let out = wellbehaved_search(&phi, complex_from_json(&task.v), &task.i_set)?;
    let value = json!({
        "schema_version": SCHEMA_VERSION,
        "seed": seed,
        "params": {"v": task.v, "i_set": task.i_set},
        "t0": out.t0,
        "t1": out.t1,
        "certificate": cert_value(&out.cert),
        "passed": true,
    });
    sink.emit(&value)?;
    Ok(EXIT_PASS)
}

#[derive(Deserialize)]
struct ConvWitnessTask {
    phi: PhiJson,
    i_set: Vec<u32>,
    m: u32,
    a: ComplexJson,
    b: ComplexJson,
    u_combo: Vec<[ComplexJson; 2]>,
    v_combo: Vec<[ComplexJson; 2]>,
    #[serde(default = "d_10")]
    n_big: u32,
    #[serde(default = "d_60")]
    l_horizon: i64,
    #[serde(default = "d_1e9")]
    tol: f64,
    #[serde(default = "d_q1")]
    q: u32,
}

fn d_10() -> u32 {
    10
}
fn d_60() -> i64 {
    60
}

fn combo(parts: &[[ComplexJson; 2]]) -> Vec<(Complex64, Complex64)> {
    parts
        .iter()
        .map(|p| (complex_from_json(&p[0]), complex_from_json(&p[1])))
        .collect()
}

fn conv_witness_checks(
    wit: &ConvWitness,
    m: u32,
    l_horizon: i64,
    q: u32,
) -> Result<(f64, f64, f64, f64, f64)> {
    let space = SpaceSpec::entire(q.max(1));
    let um = power(&wit.u, m, ProductKind::Cauchy)?;
    let mut split_worst = 0.0f64;
    for n in 0..=l_horizon {
        let split = wit.v1.get(n) + wit.v2.get(n) + wit.v3.get(n);
        split_worst = split_worst.max(Wide::rel_diff(um.get(n), split));
    }
    let n1 = space.seminorm(&wit.tn_v1, q)?;
    let n2 = space.seminorm(&wit.tn_v2, q)?;
    let dist = space.seminorm(&wit.tn_v3.sub(&wit.target), q)?;
    Ok((split_worst, n1, n2, dist, space.seminorm(&wit.target, q)?))
}

fn conv_witness(job: &JobConfig, sink: &Sink) -> Result<i32> {
    let task: ConvWitnessTask = job.task()?;
    let seed = job.seed();
    let phi = task.phi.to_phi()?;
    let wit = build_convolution_witness(
        &phi,
        &task.i_set,
        task.m,
        complex_from_json(&task.a),
        complex_from_json(&task.b),
        &combo(&task.u_combo),
        &combo(&task.v_combo),
        task.n_big,
        task.l_horizon,
    )?;
    let (split_worst, n1, n2, dist, target_norm) =
        conv_witness_checks(&wit, task.m, task.l_horizon, task.q)?;
    let passed = split_worst < 1e-9 && dist < task.tol;
    let value = json!({
        "schema_version": SCHEMA_VERSION,
        "seed": seed,
        "params": {
            "i_set": task.i_set, "m": task.m, "n_big": task.n_big,
            "l_horizon": task.l_horizon, "tol": task.tol, "q": task.q,
            "combo_radius": wit.delta,
        },
        "power_split_worst_rel_err": split_worst,
        "low_noise_norm": n1,
        "cross_noise_norm": n2,
        "diagonal_target_distance": dist,
        "target_norm": target_norm,
        "passed": passed,
    });
    sink.emit(&value)?;
    Ok(pass_code(passed))
}

// ---------------------------------------------------------------------------
// check / orbit
// ---------------------------------------------------------------------------

#[derive(Deserialize)]
struct OperatorJson {
    #[serde(rename = "type")]
    kind: String,
    #[serde(default)]
    direction: Option<String>,
    #[serde(default)]
    phi: Option<PhiJson>,
}

impl OperatorJson {
    fn to_operator(&self, job: &JobConfig) -> Result<OperatorSpec> {
        match self.kind.as_str() {
            "shift" => {
                let dir = direction_from_tag(self.direction.as_deref().unwrap_or("backward"))?;
                Ok(OperatorSpec::Shift(job.weight()?, dir))
            }
            "convolution" => {
                let phi = self
                    .phi
                    .as_ref()
                    .ok_or_else(|| {
                        Error::InvalidParameter("convolution operator needs its symbol".into())
                    })?
                    .to_phi()?;
                Ok(OperatorSpec::Convolution(phi))
            }
            other => Err(Error::InvalidParameter(format!("unknown operator '{other}'"))),
        }
    }
}

fn default_operator() -> OperatorJson {
    OperatorJson { kind: "shift".into(), direction: None, phi: None }
}

#[derive(Deserialize)]
struct CheckTask {
    a: Vec<Vec<u32>>,
    beta: Vec<u32>,
    u: Vec<Vec<ComplexJson>>,
    n_steps: i64,
    v_center: Vec<ComplexJson>,
    v_radius: f64,
    #[serde(default = "d_q1")]
    v_q: u32,
    w_radius: f64,
    #[serde(default = "d_q1")]
    w_q: u32,
    #[serde(default = "default_operator")]
    operator: OperatorJson,
}

fn check_cmd(job: &JobConfig, sink: &Sink) -> Result<i32> {
    let space = job.space()?;
    if space.is_bilateral() {
        return Err(Error::InvalidParameter(
            "job vectors are dense from index 0; bilateral instances are not expressible here"
                .into(),
        ));
    }
    let task: CheckTask = job.task()?;
    let seed = job.seed();
    let operator = task.operator.to_operator(job)?;
    let horizon = match &operator {
        OperatorSpec::Shift(w, _) => w.horizon,
        OperatorSpec::Convolution(_) => job.horizon()?,
    };
    let u: Vec<Seq> = task.u.iter().map(|r| seq_from_json(r, horizon)).collect();
    let inst = CriterionInstance {
        space,
        a: task.a,
        beta: task.beta,
        u,
        n_steps: task.n_steps,
        v_ball: Ball {
            center: seq_from_json(&task.v_center, horizon),
            radius: task.v_radius,
            q: task.v_q,
        },
        w_radius: task.w_radius,
        w_q: task.w_q,
        product: job.product()?,
        operator,
    };
    let mut report = check_instance(&inst, seed)?;
    report.params.insert("horizon".into(), json!(horizon));
    sink.emit_report(&report)?;
    Ok(pass_code(report.passed))
}

#[derive(Deserialize)]
struct BallJson {
    center: Vec<ComplexJson>,
    radius: f64,
    #[serde(default = "d_q1")]
    q: u32,
}

#[derive(Deserialize)]
struct OrbitTask {
    x: Vec<ComplexJson>,
    poly: PolyJson,
    targets: Vec<BallJson>,
    window: i64,
    #[serde(default = "d_stride")]
    stride: i64,
    #[serde(default = "default_operator")]
    operator: OperatorJson,
    /// Optional per-target lower-density requirement.
    #[serde(default)]
    min_density: Option<f64>,
}

fn d_stride() -> i64 {
    1
}

fn orbit_cmd(job: &JobConfig, sink: &Sink) -> Result<i32> {
    let space = job.space()?;
    if space.is_bilateral() {
        return Err(Error::InvalidParameter(
            "job vectors are dense from index 0; bilateral scans are not expressible here".into(),
        ));
    }
    let task: OrbitTask = job.task()?;
    let seed = job.seed();
    let operator = task.operator.to_operator(job)?;
    let horizon = match &operator {
        OperatorSpec::Shift(w, _) => w.horizon,
        OperatorSpec::Convolution(_) => job.horizon()?,
    };
    let x = seq_from_json(&task.x, horizon);
    let poly = task.poly.to_poly()?;
    let targets: Vec<Ball> = task
        .targets
        .iter()
        .map(|b| Ball { center: seq_from_json(&b.center, horizon), radius: b.radius, q: b.q })
        .collect();
    let scan = orbit_hit_density(
        &operator,
        &space,
        &x,
        &poly,
        job.product()?,
        &targets,
        task.window,
        task.stride,
    )?;
    let passed = match task.min_density {
        Some(t) => scan.targets.iter().all(|td| td.density_min >= t),
        None => true,
    };
    let mut report = WitnessReport::skeleton(seed);
    report.instance = format!(
        "orbit scan, window {} stride {}, {} targets",
        task.window,
        task.stride,
        targets.len()
    );
    report.passed = passed;
    report.params.insert("window".into(), json!(task.window));
    report.params.insert("stride".into(), json!(task.stride));
    report.params.insert("horizon".into(), json!(horizon));
    report
        .params
        .insert("min_density".into(), task.min_density.map(|v| json!(v)).unwrap_or(Value::Null));
    report.params.insert(
        "densities_min".into(),
        json!(scan.targets.iter().map(|t| t.density_min).collect::<Vec<_>>()),
    );
    report.orbit = Some(scan);
    sink.emit_report(&report)?;
    Ok(pass_code(passed))
}

// ---------------------------------------------------------------------------
// suite
// ---------------------------------------------------------------------------

fn suite_cmd(args: &SuiteArgs, sink: &Sink) -> Result<i32> {
    let cfg = SuiteConfig { quick: args.quick, seed: args.seed };
    let report = run_suite(&cfg);
    for o in &report.outcomes {
        let tag = if o.passed {
            "PASS"
        } else if o.conclusive {
            "FAIL"
        } else {
            "INCONCLUSIVE"
        };
        println!("[{tag}] criterion {:>2} {:<34} — {}", o.id, o.name, o.detail);
    }
    if sink.out.is_some() {
        sink.emit(&serde_json::to_value(&report)?)?;
    }
    let any_fail = report.outcomes.iter().any(|o| o.conclusive && !o.passed);
    let all_pass = report.outcomes.iter().all(|o| o.passed);
    Ok(if any_fail {
        EXIT_FAIL
    } else if all_pass {
        EXIT_PASS
    } else {
        EXIT_INCONCLUSIVE
    })
}
