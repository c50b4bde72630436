//! Configuration-driven front end: parses a run document, executes it, and
//! emits figure-ready CSV with 12 significant digits. One scenario per
//! file; identical inputs produce byte-identical outputs.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use num_complex::Complex64;

use crate::analytic;
use crate::error::{Error, Result};
use crate::fock::cfi;
use crate::interferometer::{build, n_phi, Family, ScenarioConfig};
use crate::optimize::{
    linspace, optimize_scenario, sweep, OptimizeOptions, SweepAxis, DEFAULT_R2_CAP,
};
use crate::qfi::{
    qfi_eigendecomp, qfi_pure, qfi_two_mode, qfi_vectorized, state_derivative, FisherResult,
};
use crate::verify::run_verification;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Qfi,
    Cfi,
    Optimize,
    Sweep,
    Verify,
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub axis: SweepAxis,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub n_phi: f64,
    pub r2_cap: f64,
    pub equal_squeezing: bool,
}

#[derive(Debug, Clone)]
pub struct CfiSpec {
    pub cutoff: usize,
    pub phi_start: f64,
    pub phi_stop: f64,
    pub points: usize,
    pub step: f64,
}

#[derive(Debug, Clone)]
pub struct VerifySpec {
    pub seed: u64,
    pub points: usize,
}

/// Everything one run needs; the parsed form of a config document plus
/// command-line overrides.
#[derive(Debug, Clone)]
pub struct RunSpec {
    pub command: Command,
    pub scenario: ScenarioConfig,
    pub sweep: Option<SweepSpec>,
    pub cfi: Option<CfiSpec>,
    pub optimize_n_phi: Option<f64>,
    pub verify: VerifySpec,
    pub out: Option<PathBuf>,
}

fn cfg_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

fn get_f64(t: &toml::Table, key: &str, default: f64) -> Result<f64> {
    match t.get(key) {
        None => Ok(default),
        Some(v) => v
            .as_float()
            .or_else(|| v.as_integer().map(|i| i as f64))
            .ok_or_else(|| cfg_err(format!("field '{key}' must be a number"))),
    }
}

fn get_usize(t: &toml::Table, key: &str, default: usize) -> Result<usize> {
    match t.get(key) {
        None => Ok(default),
        Some(v) => v
            .as_integer()
            .filter(|&i| i >= 0)
            .map(|i| i as usize)
            .ok_or_else(|| cfg_err(format!("field '{key}' must be a non-negative integer"))),
    }
}

fn get_bool(t: &toml::Table, key: &str, default: bool) -> Result<bool> {
    match t.get(key) {
        None => Ok(default),
        Some(v) => v
            .as_bool()
            .ok_or_else(|| cfg_err(format!("field '{key}' must be a boolean"))),
    }
}

fn get_complex(t: &toml::Table, key: &str) -> Result<Complex64> {
    match t.get(key) {
        None => Ok(Complex64::new(0.0, 0.0)),
        Some(toml::Value::Array(a)) if a.len() == 2 => {
            let part = |v: &toml::Value| {
                v.as_float()
                    .or_else(|| v.as_integer().map(|i| i as f64))
                    .ok_or_else(|| cfg_err(format!("field '{key}' must hold two numbers")))
            };
            Ok(Complex64::new(part(&a[0])?, part(&a[1])?))
        }
        Some(v) => v
            .as_float()
            .or_else(|| v.as_integer().map(|i| i as f64))
            .map(|re| Complex64::new(re, 0.0))
            .ok_or_else(|| cfg_err(format!("field '{key}' must be [re, im] or a number"))),
    }
}

fn parse_scenario(doc: &toml::Table) -> Result<ScenarioConfig> {
    let empty = toml::Table::new();
    let t = match doc.get("scenario") {
        None => &empty,
        Some(v) => v
            .as_table()
            .ok_or_else(|| cfg_err("'scenario' must be a table"))?,
    };
    let family: Family = t
        .get("family")
        .and_then(|v| v.as_str())
        .unwrap_or("yurke")
        .parse()?;
    let mut cfg = ScenarioConfig::bare(family);
    cfg.alpha = get_complex(t, "alpha")?;
    cfg.beta = get_complex(t, "beta")?;
    cfg.gamma = get_complex(t, "gamma")?;
    cfg.r1 = get_f64(t, "r1", 0.0)?;
    cfg.r2 = get_f64(t, "r2", 0.0)?;
    cfg.theta = get_f64(t, "theta", 0.0)?;
    cfg.t = get_f64(t, "t", 1.0)?;
    cfg.eta = get_f64(t, "eta", 1.0)?;
    cfg.discard_a = get_bool(t, "discard_a", false)?;
    cfg.phi = get_f64(t, "phi", 0.0)?;
    Ok(cfg)
}

/// Parses a run document. `cutoff` and `r2_cap` given on the command line
/// override the corresponding document fields.
pub fn parse_spec(
    text: &str,
    cutoff_override: Option<usize>,
    r2_cap_override: Option<f64>,
) -> Result<RunSpec> {
    let doc: toml::Table = text
        .parse()
        .map_err(|e: toml::de::Error| cfg_err(format!("config parse error: {e}")))?;
    let command = match doc
        .get("command")
        .and_then(|v| v.as_str())
        .ok_or_else(|| cfg_err("missing 'command' (qfi | cfi | optimize | sweep | verify)"))?
    {
        "qfi" => Command::Qfi,
        "cfi" => Command::Cfi,
        "optimize" => Command::Optimize,
        "sweep" => Command::Sweep,
        "verify" => Command::Verify,
        other => return Err(cfg_err(format!("unknown command '{other}'"))),
    };
    let scenario = parse_scenario(&doc)?;

    let sweep = match doc.get("sweep") {
        None => None,
        Some(v) => {
            let t = v.as_table().ok_or_else(|| cfg_err("'sweep' must be a table"))?;
            let axis = match t.get("axis").and_then(|v| v.as_str()) {
                Some("T") => SweepAxis::Internal,
                Some("eta") => SweepAxis::External,
                _ => return Err(cfg_err("sweep field 'axis' must be \"T\" or \"eta\"")),
            };
            let start = get_f64(t, "start", 0.0)?;
            let stop = get_f64(t, "stop", 1.0)?;
            let points = get_usize(t, "points", 51)?;
            if !(stop > start) || points == 0 {
                return Err(cfg_err("sweep range must be non-empty and increasing"));
            }
            Some(SweepSpec {
                axis,
                start,
                stop,
                points,
                n_phi: get_f64(t, "n_phi", 0.1)?,
                r2_cap: r2_cap_override
                    .map(Ok)
                    .unwrap_or_else(|| get_f64(t, "r2_cap", DEFAULT_R2_CAP))?,
                equal_squeezing: get_bool(t, "equal_squeezing", false)?,
            })
        }
    };

    let cfi = match doc.get("cfi") {
        None => None,
        Some(v) => {
            let t = v.as_table().ok_or_else(|| cfg_err("'cfi' must be a table"))?;
            Some(CfiSpec {
                cutoff: cutoff_override.map(Ok).unwrap_or_else(|| get_usize(t, "cutoff", 12))?,
                phi_start: get_f64(t, "phi_start", 0.0)?,
                phi_stop: get_f64(t, "phi_stop", 2.0 * std::f64::consts::PI)?,
                points: get_usize(t, "points", 81)?,
                step: get_f64(t, "step", 1e-4)?,
            })
        }
    };

    let optimize_n_phi = match doc.get("optimize") {
        None => None,
        Some(v) => {
            let t = v.as_table().ok_or_else(|| cfg_err("'optimize' must be a table"))?;
            Some(get_f64(t, "n_phi", 0.1)?)
        }
    };

    let verify = {
        let empty = toml::Table::new();
        let t = match doc.get("verify") {
            None => &empty,
            Some(v) => v.as_table().ok_or_else(|| cfg_err("'verify' must be a table"))?,
        };
        VerifySpec {
            seed: get_usize(t, "seed", 1)? as u64,
            points: get_usize(t, "points", 200)?,
        }
    };

    let out = doc
        .get("out")
        .map(|v| {
            v.as_str()
                .map(PathBuf::from)
                .ok_or_else(|| cfg_err("field 'out' must be a path string"))
        })
        .transpose()?;

    Ok(RunSpec { command, scenario, sweep, cfi, optimize_n_phi, verify, out })
}

/// 12 significant digits, locale-free; the CSV stability contract.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0.00000000000e0".into();
    }
    format!("{:.11e}", x)
}

/// The closed-form reference applicable to a scenario, if any.
fn reference_formula(cfg: &ScenarioConfig, phi: f64) -> Option<(&'static str, f64)> {
    let n = n_phi(cfg);
    if cfg.family == Family::Mzi {
        return Some(("linear 4 T eta N", 4.0 * cfg.t * cfg.eta * n));
    }
    match (cfg.t < 1.0, cfg.eta < 1.0) {
        (false, false) => Some(("lossless", analytic::qfi_lossless(n, cfg.r1))),
        (true, false) => Some(("internal loss", analytic::qfi_internal(n, cfg.r1, cfg.t))),
        (false, true) => match cfg.family {
            Family::Yurke => Some((
                "external loss",
                analytic::qfi_yurke_external(n, cfg.r1, cfg.r2, phi + cfg.theta, cfg.eta),
            )),
            Family::Mandel if cfg.discard_a => Some((
                "discarded-mode",
                analytic::qfi_mandel_no_a(n, cfg.r1, cfg.r2, cfg.eta),
            )),
            Family::Mandel => {
                Some(("all-modes", analytic::qfi_mandel_all(n, cfg.r1, cfg.r2, cfg.eta)))
            }
            Family::Mzi => unreachable!(),
        },
        (true, true) => None,
    }
}

fn push_row(out: &mut String, cells: &[String]) {
    out.push_str(&cells.join(","));
    out.push('\n');
}

fn run_qfi(spec: &RunSpec, log: &mut String) -> Result<String> {
    let cfg = &spec.scenario;
    let circuit = build(cfg)?;
    let pair = state_derivative(&circuit, cfg.phi)?;
    let mut rows: Vec<(&'static str, FisherResult)> = Vec::new();
    match qfi_pure(&pair) {
        Ok(r) => rows.push(("pure", r)),
        Err(Error::NotPure(_)) => {}
        Err(e) => return Err(e),
    }
    match qfi_two_mode(&pair) {
        Ok(r) => rows.push(("two_mode", r)),
        Err(Error::WrongModeCount { .. }) | Err(Error::TwoModePure(_)) => {}
        Err(e) => return Err(e),
    }
    rows.push(("eigendecomp", qfi_eigendecomp(&pair)?));
    rows.push(("vectorized", qfi_vectorized(&pair)?));

    let reference = reference_formula(cfg, cfg.phi);
    let mut csv = String::from("route,qfi,reference,abs_delta,rel_delta\n");
    for (name, r) in &rows {
        let (ref_name, ref_val, d_abs, d_rel) = match &reference {
            Some((rn, rv)) => {
                let d = r.value - rv;
                (*rn, fmt_sig(*rv), fmt_sig(d), fmt_sig(d / rv.abs().max(1.0)))
            }
            None => ("none", String::new(), String::new(), String::new()),
        };
        writeln!(
            log,
            "{name:<12} {:>18}   vs {ref_name}: {ref_val} (abs {d_abs}, rel {d_rel})",
            fmt_sig(r.value)
        )
        .unwrap();
        push_row(
            &mut csv,
            &[name.to_string(), fmt_sig(r.value), ref_val, d_abs, d_rel],
        );
    }
    Ok(csv)
}

fn run_cfi(spec: &RunSpec) -> Result<String> {
    let c = spec
        .cfi
        .as_ref()
        .ok_or_else(|| cfg_err("cfi command needs a [cfi] section"))?;
    let cfg = &spec.scenario;
    let circuit = build(cfg)?;
    let n = n_phi(cfg);
    let snl = 4.0 * n;
    let mzi = 4.0 * cfg.t * cfg.eta * n;
    let ideal = {
        let mut lossless = cfg.clone();
        lossless.t = 1.0;
        lossless.eta = 1.0;
        crate::qfi::qfi_of_circuit(&build(&lossless)?, 0.3)?.value
    };
    let mut csv =
        String::from("phi,cfi,qfi,qfi_ideal,mzi,snl,captured_mass,dropped_outcomes\n");
    for phi in linspace(c.phi_start, c.phi_stop, c.points) {
        let r = cfi(&circuit, phi, c.cutoff, c.step)?;
        let q = crate::qfi::qfi_of_circuit(&circuit, phi)?.value;
        push_row(
            &mut csv,
            &[
                fmt_sig(phi),
                fmt_sig(r.value),
                fmt_sig(q),
                fmt_sig(ideal),
                fmt_sig(mzi),
                fmt_sig(snl),
                fmt_sig(r.captured_mass),
                r.dropped_outcomes.to_string(),
            ],
        );
    }
    Ok(csv)
}

fn run_optimize(spec: &RunSpec, r2_cap: Option<f64>) -> Result<String> {
    let n = spec
        .optimize_n_phi
        .ok_or_else(|| cfg_err("optimize command needs an [optimize] section with n_phi"))?;
    let cfg = &spec.scenario;
    let opts = OptimizeOptions {
        r2_cap: r2_cap.unwrap_or(DEFAULT_R2_CAP),
        ..Default::default()
    };
    let opt = optimize_scenario(cfg.family, n, cfg.t, cfg.eta, cfg.discard_a, &opts)?;
    let mut csv = String::from("family,n_phi,t,eta,qfi,r1,r2,phi,alpha,degenerate_phase\n");
    push_row(
        &mut csv,
        &[
            cfg.family.as_str().into(),
            fmt_sig(n),
            fmt_sig(cfg.t),
            fmt_sig(cfg.eta),
            fmt_sig(opt.qfi),
            fmt_sig(opt.r1),
            fmt_sig(opt.r2),
            fmt_sig(opt.phi),
            fmt_sig(opt.alpha),
            opt.degenerate_phase.to_string(),
        ],
    );
    Ok(csv)
}

fn run_sweep(spec: &RunSpec) -> Result<String> {
    let s = spec
        .sweep
        .as_ref()
        .ok_or_else(|| cfg_err("sweep command needs a [sweep] section"))?;
    let xs = linspace(s.start, s.stop, s.points);
    let opts = OptimizeOptions {
        r2_cap: s.r2_cap,
        equal_squeezing: s.equal_squeezing,
        ..Default::default()
    };
    let result = sweep(
        spec.scenario.family,
        s.axis,
        s.n_phi,
        &xs,
        spec.scenario.discard_a,
        &opts,
    )?;
    let mut csv = format!("{},r1,r2,phi,alpha,qfi,snl,mzi\n", result.axis.as_str());
    for p in &result.points {
        push_row(
            &mut csv,
            &[
                fmt_sig(p.x),
                fmt_sig(p.r1),
                fmt_sig(p.r2),
                fmt_sig(p.phi),
                fmt_sig(p.alpha),
                fmt_sig(p.qfi),
                fmt_sig(p.snl),
                fmt_sig(p.mzi),
            ],
        );
    }
    Ok(csv)
}

fn run_verify(spec: &RunSpec, log: &mut String) -> Result<(String, bool)> {
    let report = run_verification(spec.verify.seed, spec.verify.points)?;
    let mut csv = String::from("check,points,failures,max_abs_err,max_rel_err,tolerance\n");
    for c in &report.checks {
        writeln!(
            log,
            "{:<30} {:>4} points  {} failures  max rel {}",
            c.name,
            c.points,
            c.failures,
            fmt_sig(c.max_rel_err)
        )
        .unwrap();
        push_row(
            &mut csv,
            &[
                c.name.to_string(),
                c.points.to_string(),
                c.failures.to_string(),
                fmt_sig(c.max_abs_err),
                fmt_sig(c.max_rel_err),
                fmt_sig(c.tolerance),
            ],
        );
    }
    Ok((csv, report.passed()))
}

/// CSV payload plus the human-readable log a run produced.
pub struct RunOutput {
    pub csv: String,
    pub log: String,
    pub verification_passed: bool,
}

/// Executes a parsed spec; pure apart from the computation itself (the
/// caller decides where the CSV goes).
pub fn execute(spec: &RunSpec, cutoff: Option<usize>, r2_cap: Option<f64>) -> Result<RunOutput> {
    let mut spec = spec.clone();
    if let (Some(c), Some(s)) = (cutoff, spec.cfi.as_mut()) {
        s.cutoff = c;
    }
    if let (Some(cap), Some(s)) = (r2_cap, spec.sweep.as_mut()) {
        s.r2_cap = cap;
    }
    let mut log = String::new();
    let (csv, ok) = match spec.command {
        Command::Qfi => (run_qfi(&spec, &mut log)?, true),
        Command::Cfi => (run_cfi(&spec)?, true),
        Command::Optimize => (run_optimize(&spec, r2_cap)?, true),
        Command::Sweep => (run_sweep(&spec)?, true),
        Command::Verify => run_verify(&spec, &mut log)?,
    };
    Ok(RunOutput { csv, log, verification_passed: ok })
}

/// The figure specs shipped with the crate, addressable by stem via
/// `--seed-figures`.
pub const FIGURE_SPECS: &[(&str, &str)] = &[
    (
        "internal-loss-sweep",
        include_str!("../examples/figures/internal-loss-sweep.toml"),
    ),
    (
        "internal-loss-sweep-n1",
        include_str!("../examples/figures/internal-loss-sweep-n1.toml"),
    ),
    (
        "internal-loss-sweep-n10",
        include_str!("../examples/figures/internal-loss-sweep-n10.toml"),
    ),
    (
        "yurke-external-sweep",
        include_str!("../examples/figures/yurke-external-sweep.toml"),
    ),
    (
        "yurke-external-sweep-n1",
        include_str!("../examples/figures/yurke-external-sweep-n1.toml"),
    ),
    (
        "yurke-external-sweep-n10",
        include_str!("../examples/figures/yurke-external-sweep-n10.toml"),
    ),
    (
        "mandel-discarded-sweep",
        include_str!("../examples/figures/mandel-discarded-sweep.toml"),
    ),
    (
        "mandel-all-sweep",
        include_str!("../examples/figures/mandel-all-sweep.toml"),
    ),
    (
        "mandel-all-sweep-n1",
        include_str!("../examples/figures/mandel-all-sweep-n1.toml"),
    ),
    (
        "mandel-all-sweep-n10",
        include_str!("../examples/figures/mandel-all-sweep-n10.toml"),
    ),
    (
        "scheme-comparison-yurke",
        include_str!("../examples/figures/scheme-comparison-yurke.toml"),
    ),
    (
        "scheme-comparison-mandel",
        include_str!("../examples/figures/scheme-comparison-mandel.toml"),
    ),
    (
        "scheme-comparison-mandel-discarded",
        include_str!("../examples/figures/scheme-comparison-mandel-discarded.toml"),
    ),
    (
        "equal-squeezing-yurke",
        include_str!("../examples/figures/equal-squeezing-yurke.toml"),
    ),
    (
        "equal-squeezing-mandel",
        include_str!("../examples/figures/equal-squeezing-mandel.toml"),
    ),
    (
        "equal-squeezing-mandel-discarded",
        include_str!("../examples/figures/equal-squeezing-mandel-discarded.toml"),
    ),
    (
        "pnrd-low-eta-discarded",
        include_str!("../examples/figures/pnrd-low-eta-discarded.toml"),
    ),
    (
        "pnrd-low-eta-all",
        include_str!("../examples/figures/pnrd-low-eta-all.toml"),
    ),
    (
        "pnrd-high-eta-discarded",
        include_str!("../examples/figures/pnrd-high-eta-discarded.toml"),
    ),
    (
        "pnrd-high-eta-all",
        include_str!("../examples/figures/pnrd-high-eta-all.toml"),
    ),
];

pub fn figure_spec(id: &str) -> Option<&'static str> {
    FIGURE_SPECS.iter().find(|(k, _)| *k == id).map(|(_, v)| *v)
}

/// Command-line surface of the thin binary.
#[derive(Debug, Clone, Default)]
pub struct CliOptions {
    pub config: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub cutoff: Option<usize>,
    pub r2_cap: Option<f64>,
    pub jobs: Option<usize>,
    pub seed_figures: Option<String>,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_VERIFY: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::Io(_) | Error::ParameterRange { .. } => EXIT_CONFIG,
        Error::InfeasibleSeeding { .. } | Error::GammaSeedUnsupported => EXIT_CONFIG,
        _ => EXIT_NUMERIC,
    }
}

fn run_inner(opts: &CliOptions, stdout: &mut dyn std::io::Write) -> Result<bool> {
    let (text, default_stem): (String, String) = match (&opts.seed_figures, &opts.config) {
        (Some(id), _) => {
            let spec = figure_spec(id).ok_or_else(|| {
                let known: Vec<&str> = FIGURE_SPECS.iter().map(|(k, _)| *k).collect();
                cfg_err(format!("unknown figure id '{id}'; known: {}", known.join(", ")))
            })?;
            (spec.to_string(), id.clone())
        }
        (None, Some(path)) => {
            let stem = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "run".into());
            (std::fs::read_to_string(path)?, stem)
        }
        (None, None) => return Err(cfg_err("either --config or --seed-figures is required")),
    };

    if let Some(jobs) = opts.jobs {
        // ignore the error if a pool already exists (repeat invocation in-process)
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }

    let spec = parse_spec(&text, opts.cutoff, opts.r2_cap)?;
    let output = execute(&spec, opts.cutoff, opts.r2_cap)?;
    if !output.log.is_empty() {
        let _ = stdout.write_all(output.log.as_bytes());
    }
    let out_path: PathBuf = opts
        .out
        .clone()
        .or_else(|| spec.out.clone())
        .unwrap_or_else(|| Path::new(&format!("{default_stem}.csv")).to_path_buf());
    std::fs::write(&out_path, output.csv.as_bytes())?;
    let _ = writeln!(stdout, "wrote {}", out_path.display());
    Ok(output.verification_passed)
}

/// Full run with exit-code mapping: 0 success, 1 usage/config error,
/// 2 verification failure, 3 numerical failure.
pub fn run(opts: &CliOptions) -> i32 {
    let mut stdout = std::io::stdout();
    match run_inner(opts, &mut stdout) {
        Ok(true) => EXIT_OK,
        Ok(false) => {
            eprintln!("verification failed");
            EXIT_VERIFY
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}
