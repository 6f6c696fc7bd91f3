//! Command-line front end: every library operation is reachable from
//! exactly one subcommand (see `OP_OWNERSHIP`), reports are deterministic
//! for a fixed argv + config + seed, and numeric flags accept the
//! `e^<expr>` literal sugar.
//!
//! Exit codes: 0 success/pass, 1 fail/counterexample, 2 usage error,
//! 3 inconclusive.

mod config;

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use logtauber::funcspec::{builtin_corpus, corpus::find_named, Codomain, FunctionSpec};
use logtauber::harness::{run_suite, SuiteConfig, SuiteReport, TheoremId};
use logtauber::lemmas::{
    check_liminf_s_over_x, construct_bn, j_decomposition, verify_lemma1, verify_lemma2,
    verify_lemma3, verify_lemma4, LemmaBoundReport,
};
use logtauber::logmean::mean_curve;
use logtauber::statlimit::{
    detect_ordinary_limit, detect_statistical_limit, LimitVerdict, VerdictKind,
};
use logtauber::tauber::{
    check_hardy, check_landau, find_window, primitive, slow_decrease_modulus,
    slow_increase_modulus, slow_oscillation_modulus, validate_window, HardyForm, SlowWindow,
    TauberConstant, WindowMode, XHorizon,
};
use logtauber::Scalar;

use config::{parse_ext, parse_log_ext, RunConfig};

/// Canonical owner subcommand per library operation; the uniqueness of this
/// table is enforced by a test.
pub const OP_OWNERSHIP: &[(&str, &str)] = &[
    ("funcspec::parse", "mean"),
    ("funcspec::evaluate", "mean"),
    ("funcspec::builtin_corpus", "corpus"),
    ("logmean::integrate_weighted", "mean"),
    ("logmean::log_mean", "mean"),
    ("logmean::mean_curve", "mean"),
    ("statlimit::exceptional_measure", "stat-limit"),
    ("statlimit::density_profile", "stat-limit"),
    ("statlimit::detect_statistical_limit", "stat-limit"),
    ("statlimit::detect_ordinary_limit", "stat-limit"),
    ("tauber::slow_decrease_modulus", "modulus"),
    ("tauber::slow_increase_modulus", "modulus"),
    ("tauber::slow_oscillation_modulus", "modulus"),
    ("tauber::find_window", "modulus"),
    ("tauber::check_landau", "check-condition"),
    ("tauber::check_hardy", "check-condition"),
    ("tauber::primitive", "check-condition"),
    ("lemmas::build_chain", "verify-lemma"),
    ("lemmas::verify_lemma1", "verify-lemma"),
    ("lemmas::verify_lemma2", "verify-lemma"),
    ("lemmas::verify_lemma3", "verify-lemma"),
    ("lemmas::verify_lemma4", "verify-lemma"),
    ("lemmas::construct_bn", "witness-theorem1"),
    ("lemmas::check_liminf_s_over_x", "witness-theorem1"),
    ("lemmas::j_decomposition", "j-decomp"),
    ("harness::run_theorem", "suite"),
    ("harness::run_suite", "suite"),
];

#[derive(Parser)]
#[command(
    name = "logtauber",
    about = "Logarithmic (L,1) summability toolkit: means, statistical limits, \
             slow-oscillation moduli and Tauberian condition checks",
    version
)]
struct Cli {
    /// JSON run configuration; command-line flags take precedence
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Worker pool size for parallelizable operations (default: all cores)
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Directory to write CSV/JSON artifacts into
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Also write gnuplot-ready two-column data files (requires --out)
    #[arg(long, global = true)]
    plot_data: bool,

    /// Seed for sampled verifications
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args)]
struct FnArg {
    /// Built-in corpus function name (see `corpus list`)
    #[arg(long = "fn")]
    name: Option<String>,

    /// DSL file (or serialized JSON spec with a .json extension)
    #[arg(long = "fn-file")]
    file: Option<PathBuf>,
}

impl FnArg {
    fn load(&self) -> Result<FunctionSpec> {
        match (&self.name, &self.file) {
            (Some(name), None) => {
                find_named(name).ok_or_else(|| anyhow!("unknown corpus function '{name}'"))
            }
            (None, Some(path)) => load_spec_file(path),
            _ => bail!("specify exactly one of --fn or --fn-file"),
        }
    }
}

fn load_spec_file(path: &Path) -> Result<FunctionSpec> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let name = path.file_stem().map(|s| s.to_string_lossy().to_string()).unwrap_or_default();
    if path.extension().is_some_and(|e| e == "json") {
        Ok(FunctionSpec::from_json(&text)?)
    } else {
        Ok(FunctionSpec::parse(&name, &text)?)
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Corpus utilities
    Corpus {
        #[command(subcommand)]
        action: CorpusCmd,
    },

    /// Sample the logarithmic mean curve tau(t) (CSV to stdout)
    Mean {
        #[command(flatten)]
        func: FnArg,
        #[arg(long, value_parser = parse_ext, default_value = "e")]
        t_min: f64,
        #[arg(long, value_parser = parse_ext, default_value = "e^32")]
        t_max: f64,
        #[arg(long, default_value_t = 129)]
        points: usize,
        #[arg(long, value_parser = parse_ext)]
        abs_tol: Option<f64>,
        /// Also evaluate s at this point (printed as a comment line)
        #[arg(long, value_parser = parse_ext)]
        eval_at: Option<f64>,
    },

    /// Detect statistical and ordinary limits of s (JSON verdict)
    StatLimit {
        #[command(flatten)]
        func: FnArg,
        #[arg(long, value_parser = parse_ext)]
        horizon: Option<f64>,
        /// Comma-separated decreasing epsilon ladder
        #[arg(long, value_parser = parse_ext, value_delimiter = ',')]
        epsilons: Option<Vec<f64>>,
        #[arg(long, value_parser = parse_ext)]
        decay_threshold: Option<f64>,
        #[arg(long, value_parser = parse_ext)]
        tol: Option<f64>,
    },

    /// Slow-decrease/oscillation modulus curves and epsilon-window search
    Modulus {
        #[command(flatten)]
        func: FnArg,
        /// decrease | increase | oscillation
        #[arg(long, default_value = "decrease")]
        mode: String,
        #[arg(long, value_parser = parse_ext, value_delimiter = ',')]
        lambdas: Option<Vec<f64>>,
        /// Finite liminf stand-in X (scan covers [X, X^bracket])
        #[arg(long, value_parser = parse_ext, default_value = "e^32")]
        x: f64,
        #[arg(long, value_parser = parse_ext, default_value = "4")]
        bracket: f64,
        #[arg(long, value_parser = parse_ext)]
        density: Option<f64>,
        /// Search for an epsilon-window instead of sampling the curve
        #[arg(long, value_parser = parse_ext)]
        find_window_eps: Option<f64>,
    },

    /// Landau / Hardy integrand conditions (and primitive sufficiency)
    CheckCondition {
        /// landau | hardy
        which: String,
        #[command(flatten)]
        func: FnArg,
        #[arg(long, value_parser = parse_ext, default_value = "1")]
        c: f64,
        #[arg(long, value_parser = parse_ext, default_value = "1")]
        x0: f64,
        #[arg(long, value_parser = parse_ext, default_value = "e^10")]
        horizon: f64,
        /// Check the u-weighted variant u(log u)|f(u)| of the two-sided form
        #[arg(long)]
        u_weighted: bool,
        /// Also search an epsilon-window for the primitive s = ∫f
        #[arg(long, value_parser = parse_ext)]
        window_eps: Option<f64>,
    },

    /// Verify one of the growth lemmas (1-4) with its explicit constants
    VerifyLemma {
        /// 1 | 2 | 3 | 4
        id: u8,
        #[command(flatten)]
        func: FnArg,
        #[arg(long, value_parser = parse_ext)]
        lambda: f64,
        #[arg(long, value_parser = parse_ext)]
        x0: f64,
        #[arg(long, value_parser = parse_ext, default_value = "1")]
        eps: f64,
        /// Sample pair count (lemmas 1 and 2)
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, value_parser = parse_ext, default_value = "e^e^3")]
        t_max: f64,
        /// Explicit t samples for lemmas 3 and 4 (default: log-spaced)
        #[arg(long, value_parser = parse_ext, value_delimiter = ',')]
        t_samples: Option<Vec<f64>>,
    },

    /// Materialize the b_n sequence and the liminf s(x)/x probes
    WitnessTheorem1 {
        #[command(flatten)]
        func: FnArg,
        #[arg(long, value_parser = parse_ext, default_value = "0.1")]
        eps: f64,
        /// Window lambda; searched when omitted
        #[arg(long, value_parser = parse_ext)]
        lambda: Option<f64>,
        /// Window x0; searched when omitted
        #[arg(long, value_parser = parse_ext)]
        x0: Option<f64>,
        /// Candidate limit; detected when omitted
        #[arg(long, value_parser = parse_ext)]
        ell: Option<f64>,
        #[arg(long, default_value_t = 24)]
        max_n: usize,
        /// Sequence horizon (log-space literals like e^20000 stay finite)
        #[arg(long, value_parser = parse_log_ext, default_value = "e^20000")]
        horizon_log: f64,
        /// Probe exponents p for the liminf check
        #[arg(long, value_parser = parse_ext, value_delimiter = ',', default_value = "1,2,3,4,6,8")]
        probe_ps: Vec<f64>,
    },

    /// Four-term decomposition of tau(t) - tau(x)
    JDecomp {
        #[command(flatten)]
        func: FnArg,
        #[arg(long, value_parser = parse_ext)]
        x: f64,
        #[arg(long, value_parser = parse_ext)]
        t: f64,
        #[arg(long, value_parser = parse_ext, default_value = "e^2")]
        x0: f64,
        #[arg(long, value_parser = parse_ext)]
        abs_tol: Option<f64>,
    },

    /// Run the theorem suite over the corpus
    Suite {
        #[arg(long, value_parser = parse_ext)]
        horizon: Option<f64>,
        /// Additional user functions to include
        #[arg(long = "fn-file")]
        extra: Vec<PathBuf>,
        /// Restrict to one theorem (A|B|1|2|3|4); repeatable
        #[arg(long = "theorem")]
        theorems: Vec<String>,
    },
}

#[derive(Subcommand)]
enum CorpusCmd {
    /// List the built-in corpus with expected classifications
    List,
}

fn main() -> ExitCode {
    // die quietly when a downstream pipe closes (e.g. `logtauber mean | head`)
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

struct Sink {
    out: Option<PathBuf>,
    plot: bool,
}

impl Sink {
    fn write(&self, name: &str, content: &str) -> Result<()> {
        if let Some(dir) = &self.out {
            std::fs::create_dir_all(dir)?;
            std::fs::write(dir.join(name), content)
                .with_context(|| format!("writing {name}"))?;
        }
        Ok(())
    }

    fn plot(&self, name: &str, pairs: &[(f64, f64)]) -> Result<()> {
        if !self.plot {
            return Ok(());
        }
        let Some(dir) = &self.out else {
            bail!("--plot-data requires --out");
        };
        std::fs::create_dir_all(dir)?;
        let mut buf = String::new();
        for (a, b) in pairs {
            buf.push_str(&format!("{a} {b}\n"));
        }
        std::fs::write(dir.join(name), buf)?;
        Ok(())
    }
}

fn provenance(cfg: &RunConfig, command: &str) -> serde_json::Value {
    json!({ "command": command, "config": cfg })
}

fn run(cli: Cli) -> Result<u8> {
    let mut cfg = RunConfig::load(cli.config.as_deref())?;
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(jobs) = cli.jobs.or(cfg.jobs) {
        cfg.jobs = Some(jobs);
        // a best-effort global pool; later calls are no-ops
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
    let sink = Sink { out: cli.out.clone(), plot: cli.plot_data };

    match cli.command {
        Cmd::Corpus { action: CorpusCmd::List } => corpus_list(&sink),
        Cmd::Mean { func, t_min, t_max, points, abs_tol, eval_at } => {
            let spec = func.load()?;
            let abs_tol = abs_tol.unwrap_or(cfg.abs_tol);
            mean_cmd(&spec, t_min, t_max, points, abs_tol, eval_at, &cfg, &sink)
        }
        Cmd::StatLimit { func, horizon, epsilons, decay_threshold, tol } => {
            let spec = func.load()?;
            let horizon = horizon.unwrap_or(cfg.horizon);
            let epsilons = epsilons.unwrap_or_else(|| cfg.epsilons.clone());
            let thr = decay_threshold.unwrap_or(cfg.decay_threshold);
            let tol = tol.unwrap_or(cfg.ordinary_tol);
            stat_limit_cmd(&spec, horizon, &epsilons, thr, tol, &cfg, &sink)
        }
        Cmd::Modulus { func, mode, lambdas, x, bracket, density, find_window_eps } => {
            let spec = func.load()?;
            let density = density.unwrap_or(cfg.grid_density);
            let lambdas =
                lambdas.unwrap_or_else(|| logtauber::defaults::LAMBDA_SCHEDULE.to_vec());
            modulus_cmd(
                &spec,
                &mode,
                &lambdas,
                XHorizon { x, bracket },
                density,
                find_window_eps,
                &cfg,
                &sink,
            )
        }
        Cmd::CheckCondition { which, func, c, x0, horizon, u_weighted, window_eps } => {
            let spec = func.load()?;
            check_condition_cmd(&spec, &which, c, x0, horizon, u_weighted, window_eps, &cfg, &sink)
        }
        Cmd::VerifyLemma { id, func, lambda, x0, eps, samples, t_max, t_samples } => {
            let spec = func.load()?;
            verify_lemma_cmd(&spec, id, lambda, x0, eps, samples, t_max, t_samples, &cfg, &sink)
        }
        Cmd::WitnessTheorem1 { func, eps, lambda, x0, ell, max_n, horizon_log, probe_ps } => {
            let spec = func.load()?;
            witness_cmd(&spec, eps, lambda, x0, ell, max_n, horizon_log, &probe_ps, &cfg, &sink)
        }
        Cmd::JDecomp { func, x, t, x0, abs_tol } => {
            let spec = func.load()?;
            j_decomp_cmd(&spec, x, t, x0, abs_tol.unwrap_or(cfg.abs_tol), &cfg, &sink)
        }
        Cmd::Suite { horizon, extra, theorems } => {
            suite_cmd(horizon, &extra, &theorems, &cfg, &sink)
        }
    }
}

fn corpus_list(sink: &Sink) -> Result<u8> {
    let corpus = builtin_corpus();
    println!(
        "{:<5} {:<8} {:>7} {:>9} {:>9} {:>10} {:>10} {:>9}",
        "name", "codomain", "pieces", "slow-dec", "slow-osc", "(L,1)-sum", "stat-lim", "ord-lim"
    );
    let fmt_lim = |l: Option<(f64, f64)>| match l {
        Some((re, 0.0)) => format!("{re}"),
        Some((re, im)) => format!("{re}{im:+}i"),
        None => "-".into(),
    };
    for e in &corpus {
        let c = &e.classification;
        println!(
            "{:<5} {:<8} {:>7} {:>9} {:>9} {:>10} {:>10} {:>9}",
            e.spec.name(),
            match e.spec.codomain() {
                Codomain::Real => "real",
                Codomain::Complex => "complex",
            },
            e.spec.piece_count().map_or("lazy".to_string(), |n| n.to_string()),
            c.slowly_decreasing.map_or("n/a".into(), |b| b.to_string()),
            c.slowly_oscillating,
            fmt_lim(c.l1_limit),
            fmt_lim(c.statistical_limit),
            fmt_lim(c.ordinary_limit),
        );
    }
    let doc: Vec<serde_json::Value> = corpus
        .iter()
        .map(|e| {
            json!({
                "name": e.spec.name(),
                "codomain": e.spec.codomain(),
                "classification": e.classification,
            })
        })
        .collect();
    sink.write("corpus.json", &serde_json::to_string_pretty(&doc)?)?;
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn mean_cmd(
    spec: &FunctionSpec,
    t_min: f64,
    t_max: f64,
    points: usize,
    abs_tol: f64,
    eval_at: Option<f64>,
    cfg: &RunConfig,
    sink: &Sink,
) -> Result<u8> {
    if let Some(x) = eval_at {
        let v = spec.evaluate(x)?;
        println!("# s({x}) = {} + {}i", v.re(), v.im());
    }
    let mut csv = Vec::new();
    let plot: Vec<(f64, f64)> = match spec.codomain() {
        Codomain::Real => {
            let mc = mean_curve(&spec.real_view()?, t_min, t_max, points, abs_tol)?;
            mc.write_csv(&mut csv)?;
            mc.log_grid.iter().zip(&mc.tau).map(|(&u, &v)| (u, v)).collect()
        }
        Codomain::Complex => {
            let mc = mean_curve(&spec.complex_view(), t_min, t_max, points, abs_tol)?;
            mc.write_csv(&mut csv)?;
            mc.log_grid.iter().zip(&mc.tau).map(|(&u, v)| (u, v.re)).collect()
        }
    };
    let csv = String::from_utf8(csv).unwrap();
    print!("{csv}");
    sink.write("mean.csv", &csv)?;
    sink.write(
        "mean.json",
        &serde_json::to_string_pretty(&provenance(cfg, "mean"))?,
    )?;
    sink.plot("mean.dat", &plot)?;
    Ok(0)
}

fn verdict_json<S: Scalar>(v: &LimitVerdict<S>) -> serde_json::Value {
    json!({
        "kind": v.kind,
        "ell": v.ell.map(|l| json!({ "re": l.re(), "im": l.im() })),
        "evidence": {
            "horizons": v.evidence.horizons,
            "epsilons": v.evidence.epsilons,
            "per_eps_tail_densities": v.evidence.densities,
            "oscillation": v.evidence.oscillation,
            "policy": v.evidence.policy,
        },
    })
}

fn stat_limit_cmd(
    spec: &FunctionSpec,
    horizon: f64,
    epsilons: &[f64],
    thr: f64,
    tol: f64,
    cfg: &RunConfig,
    sink: &Sink,
) -> Result<u8> {
    let horizons = logtauber::statlimit::default_horizons(horizon);
    let (stat, ord, profile) = match spec.codomain() {
        Codomain::Real => {
            let view = spec.real_view()?;
            let stat = detect_statistical_limit(&view, &horizons, epsilons, thr)?;
            let ord = detect_ordinary_limit(&view, &horizons, tol)?;
            let profile = stat.ell.or(ord.ell).map(|ell| {
                logtauber::statlimit::density_profile(&view, ell, epsilons, &horizons)
            });
            (verdict_json(&stat), verdict_json(&ord), profile.transpose()?)
        }
        Codomain::Complex => {
            let view = spec.complex_view();
            let stat = detect_statistical_limit(&view, &horizons, epsilons, thr)?;
            let ord = detect_ordinary_limit(&view, &horizons, tol)?;
            let profile = stat.ell.or(ord.ell).map(|ell| {
                logtauber::statlimit::density_profile(&view, ell, epsilons, &horizons)
            });
            (verdict_json(&stat), verdict_json(&ord), profile.transpose()?)
        }
    };
    let kind = stat["kind"].clone();
    let doc = json!({
        "provenance": provenance(cfg, "stat-limit"),
        "function": spec.name(),
        "statistical": stat,
        "ordinary": ord,
    });
    println!("{}", serde_json::to_string_pretty(&doc)?);
    sink.write("stat-limit.json", &serde_json::to_string_pretty(&doc)?)?;
    if let Some(p) = &profile {
        let mut csv = Vec::new();
        p.write_csv(&mut csv)?;
        sink.write("density.csv", &String::from_utf8(csv).unwrap())?;
        for (i, &eps) in p.epsilons.iter().enumerate() {
            let pairs: Vec<(f64, f64)> =
                p.horizons.iter().zip(&p.density[i]).map(|(&b, &d)| (b, d)).collect();
            sink.plot(&format!("density_eps{}.dat", i), &pairs)?;
            let _ = eps;
        }
    }
    Ok(if kind == json!("inconclusive") { 3 } else { 0 })
}

#[allow(clippy::too_many_arguments)]
fn modulus_cmd(
    spec: &FunctionSpec,
    mode: &str,
    lambdas: &[f64],
    xh: XHorizon,
    density: f64,
    find_eps: Option<f64>,
    cfg: &RunConfig,
    sink: &Sink,
) -> Result<u8> {
    if let Some(eps) = find_eps {
        let wmode = match mode {
            "decrease" => WindowMode::Decrease,
            "oscillation" => WindowMode::Oscillation,
            other => bail!("--find-window-eps needs mode decrease|oscillation, got '{other}'"),
        };
        let search = logtauber::tauber::find_window_spec(
            spec,
            eps,
            wmode,
            cfg.window_budget,
            density,
        )?;
        let doc = json!({
            "provenance": provenance(cfg, "modulus --find-window-eps"),
            "function": spec.name(),
            "search": search,
        });
        println!("{}", serde_json::to_string_pretty(&doc)?);
        sink.write("window.json", &serde_json::to_string_pretty(&doc)?)?;
        return Ok(if search.window.is_some() { 0 } else { 1 });
    }

    let curve = match mode {
        "decrease" => slow_decrease_modulus(&spec.real_view()?, lambdas, &xh, density)?,
        "increase" => slow_increase_modulus(&spec.real_view()?, lambdas, &xh, density)?,
        "oscillation" => match spec.codomain() {
            Codomain::Real => {
                slow_oscillation_modulus(&spec.real_view()?, lambdas, &xh, density)?
            }
            Codomain::Complex => {
                slow_oscillation_modulus(&spec.complex_view(), lambdas, &xh, density)?
            }
        },
        other => bail!("unknown mode '{other}' (expected decrease|increase|oscillation)"),
    };
    let mut csv = Vec::new();
    curve.write_csv(&mut csv)?;
    let csv = String::from_utf8(csv).unwrap();
    print!("{csv}");
    sink.write("modulus.csv", &csv)?;
    sink.plot(
        "modulus.dat",
        &curve.lambdas.iter().zip(&curve.values).map(|(&l, &v)| (l, v)).collect::<Vec<_>>(),
    )?;
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn check_condition_cmd(
    spec: &FunctionSpec,
    which: &str,
    c: f64,
    x0: f64,
    horizon: f64,
    u_weighted: bool,
    window_eps: Option<f64>,
    cfg: &RunConfig,
    sink: &Sink,
) -> Result<u8> {
    let constant = TauberConstant::new(c, x0)?;
    let (report, wmode) = match which {
        "landau" => {
            if u_weighted {
                bail!("--u-weighted applies to the hardy form only");
            }
            (check_landau(&spec.real_view()?, &constant, horizon)?, WindowMode::Decrease)
        }
        "hardy" => {
            let form = if u_weighted { HardyForm::UWeighted } else { HardyForm::Printed };
            let r = match spec.codomain() {
                Codomain::Real => check_hardy(&spec.real_view()?, &constant, horizon, form)?,
                Codomain::Complex => check_hardy(&spec.complex_view(), &constant, horizon, form)?,
            };
            (r, WindowMode::Oscillation)
        }
        other => bail!("unknown condition '{other}' (expected landau|hardy)"),
    };

    // sufficiency probe: the primitive of a passing integrand admits windows
    let window = match window_eps {
        Some(eps) => {
            let prim_horizon = 300f64.exp();
            let search = match spec.codomain() {
                Codomain::Real => {
                    let view = spec.real_view()?;
                    let p = primitive(&view, prim_horizon, cfg.abs_tol)?;
                    find_window(&p, eps, wmode, cfg.window_budget, 50.0)?
                }
                Codomain::Complex => {
                    let view = spec.complex_view();
                    let p = primitive(&view, prim_horizon, cfg.abs_tol)?;
                    find_window(&p, eps, wmode, cfg.window_budget, 50.0)?
                }
            };
            Some(search)
        }
        None => None,
    };

    let mut code = if report.passed { 0 } else { 1 };
    if let Some(w) = &window {
        if report.passed && w.window.is_none() {
            code = 1; // sufficiency violated: would indicate a bug
        }
    }
    let doc = json!({
        "provenance": provenance(cfg, "check-condition"),
        "function": spec.name(),
        "report": report,
        "primitive_window": window,
    });
    println!("{}", serde_json::to_string_pretty(&doc)?);
    sink.write("condition.json", &serde_json::to_string_pretty(&doc)?)?;
    Ok(code)
}

#[allow(clippy::too_many_arguments)]
fn verify_lemma_cmd(
    spec: &FunctionSpec,
    id: u8,
    lambda: f64,
    x0: f64,
    eps: f64,
    samples: usize,
    t_max: f64,
    t_samples: Option<Vec<f64>>,
    cfg: &RunConfig,
    sink: &Sink,
) -> Result<u8> {
    let window = SlowWindow { eps, x0, lambda, bracket: logtauber::defaults::MODULUS_BRACKET, worst: 0.0 };
    let default_t_samples = || -> Vec<f64> {
        let lo = lambda * x0.ln() * 1.1;
        let hi = t_max.ln();
        (0..16).map(|k| (lo + (hi - lo) * k as f64 / 15.0).exp()).collect()
    };
    let report: LemmaBoundReport = match id {
        1 => verify_lemma1(&spec.real_view()?, &window, samples, t_max, cfg.seed)?,
        2 => match spec.codomain() {
            Codomain::Real => {
                verify_lemma2(&spec.real_view()?, &window, samples, t_max, cfg.seed)?
            }
            Codomain::Complex => {
                verify_lemma2(&spec.complex_view(), &window, samples, t_max, cfg.seed)?
            }
        },
        3 => verify_lemma3(&spec.real_view()?, &window, &t_samples.unwrap_or_else(default_t_samples))?,
        4 => {
            let ts = t_samples.unwrap_or_else(default_t_samples);
            match spec.codomain() {
                Codomain::Real => verify_lemma4(&spec.real_view()?, &window, &ts)?,
                Codomain::Complex => verify_lemma4(&spec.complex_view(), &window, &ts)?,
            }
        }
        other => bail!("lemma id must be 1..4, got {other}"),
    };
    let doc = json!({
        "provenance": provenance(cfg, "verify-lemma"),
        "function": spec.name(),
        "report": report,
    });
    println!("{}", serde_json::to_string_pretty(&doc)?);
    sink.write(&format!("lemma{id}.json"), &serde_json::to_string_pretty(&doc)?)?;
    Ok(if report.passed { 0 } else { 1 })
}

#[allow(clippy::too_many_arguments)]
fn witness_cmd(
    spec: &FunctionSpec,
    eps: f64,
    lambda: Option<f64>,
    x0: Option<f64>,
    ell: Option<f64>,
    max_n: usize,
    horizon_log: f64,
    probe_ps: &[f64],
    cfg: &RunConfig,
    sink: &Sink,
) -> Result<u8> {
    let view = spec.real_view()?;

    // statistical-limit evidence for the candidate ell
    let horizons = logtauber::statlimit::default_horizons(cfg.horizon);
    let stat = detect_statistical_limit(&view, &horizons, &cfg.epsilons, cfg.decay_threshold)?;
    let ell = match ell {
        Some(l) => l,
        None => match (stat.kind, stat.ell) {
            (VerdictKind::Statistical | VerdictKind::Ordinary, Some(l)) => l,
            _ => {
                let doc = json!({
                    "provenance": provenance(cfg, "witness-theorem1"),
                    "function": spec.name(),
                    "statistical": verdict_json(&stat),
                    "error": "no statistical-limit evidence; pass --ell to override",
                });
                println!("{}", serde_json::to_string_pretty(&doc)?);
                return Ok(3);
            }
        },
    };

    // window (x0, lambda) from the search when not given
    let (x0, lambda) = match (x0, lambda) {
        (Some(x0), Some(l)) => (x0, l),
        _ => {
            let search =
                find_window(&view, eps, WindowMode::Decrease, cfg.window_budget, cfg.grid_density)?;
            match search.window {
                Some(w) => (x0.unwrap_or(w.x0), lambda.unwrap_or(w.lambda)),
                None => {
                    let doc = json!({
                        "provenance": provenance(cfg, "witness-theorem1"),
                        "function": spec.name(),
                        "search": search,
                        "error": "no slow-decrease window found at this eps",
                    });
                    println!("{}", serde_json::to_string_pretty(&doc)?);
                    return Ok(1);
                }
            }
        }
    };

    let seq = construct_bn(&view, ell, eps, lambda, x0, max_n, horizon_log)?;
    let invariants = seq.check_invariants(&view);

    // liminf probes need the eps = 1 window; skipped when it does not hold
    let ps: Vec<u32> = probe_ps.iter().map(|&p| p as u32).collect();
    let liminf = match validate_window(
        &view,
        WindowMode::Decrease,
        x0,
        lambda,
        1.0,
        cfg.grid_density,
    ) {
        Ok(w1) => Some(check_liminf_s_over_x(&view, &w1, &ps)?),
        Err(_) => None,
    };

    let b_repr: Vec<Option<f64>> = seq
        .log_b
        .iter()
        .map(|&l| if l <= 709.0 { Some(l.exp()) } else { None })
        .collect();
    let doc = json!({
        "provenance": provenance(cfg, "witness-theorem1"),
        "function": spec.name(),
        "statistical": verdict_json(&stat),
        "sequence": seq,
        "b": b_repr,
        "invariants_ok": invariants.is_ok(),
        "invariants_error": invariants.as_ref().err().map(|e| e.to_string()),
        "liminf": liminf,
    });
    println!("{}", serde_json::to_string_pretty(&doc)?);
    sink.write("witness.json", &serde_json::to_string_pretty(&doc)?)?;
    Ok(if invariants.is_ok() { 0 } else { 1 })
}

fn j_decomp_cmd(
    spec: &FunctionSpec,
    x: f64,
    t: f64,
    x0: f64,
    abs_tol: f64,
    cfg: &RunConfig,
    sink: &Sink,
) -> Result<u8> {
    let part = |re: f64, im: f64| json!({ "re": re, "im": im });
    let doc = match spec.codomain() {
        Codomain::Real => {
            let j = j_decomposition(&spec.real_view()?, x, t, x0, abs_tol)?;
            json!({
                "provenance": provenance(cfg, "j-decomp"),
                "function": spec.name(),
                "x": x, "t": t, "x0": x0,
                "j1": part(j.j1, 0.0), "j2": part(j.j2, 0.0),
                "j3": part(j.j3, 0.0), "j4": part(j.j4, 0.0),
                "total": part(j.total, 0.0),
                "defect": j.defect,
                "tolerance": 5.0 * abs_tol,
            })
        }
        Codomain::Complex => {
            let j = j_decomposition(&spec.complex_view(), x, t, x0, abs_tol)?;
            json!({
                "provenance": provenance(cfg, "j-decomp"),
                "function": spec.name(),
                "x": x, "t": t, "x0": x0,
                "j1": part(j.j1.re, j.j1.im), "j2": part(j.j2.re, j.j2.im),
                "j3": part(j.j3.re, j.j3.im), "j4": part(j.j4.re, j.j4.im),
                "total": part(j.total.re, j.total.im),
                "defect": j.defect,
                "tolerance": 5.0 * abs_tol,
            })
        }
    };
    println!("{}", serde_json::to_string_pretty(&doc)?);
    sink.write("jdecomp.json", &serde_json::to_string_pretty(&doc)?)?;
    let ok = doc["defect"].as_f64().unwrap() <= 5.0 * abs_tol;
    Ok(if ok { 0 } else { 1 })
}

fn suite_cmd(
    horizon: Option<f64>,
    extra: &[PathBuf],
    theorems: &[String],
    cfg: &RunConfig,
    sink: &Sink,
) -> Result<u8> {
    let mut specs: Vec<FunctionSpec> = builtin_corpus()
        .into_iter()
        .map(|e| e.spec)
        .filter(|s| match &cfg.corpus {
            Some(sel) => sel.iter().any(|n| n == s.name()),
            None => true,
        })
        .collect();
    for path in extra {
        specs.push(load_spec_file(path)?);
    }
    let theorem_filter: Option<Vec<TheoremId>> = if theorems.is_empty() {
        None
    } else {
        Some(
            theorems
                .iter()
                .map(|t| TheoremId::parse(t).ok_or_else(|| anyhow!("unknown theorem '{t}'")))
                .collect::<Result<_>>()?,
        )
    };

    let mut suite_cfg = SuiteConfig::at_horizon(horizon.unwrap_or(cfg.horizon));
    suite_cfg.abs_tol = cfg.abs_tol;
    suite_cfg.epsilons = cfg.epsilons.clone();
    suite_cfg.window_epsilons = cfg.window_epsilons.clone();
    suite_cfg.decay_threshold = cfg.decay_threshold;
    suite_cfg.ordinary_tol = cfg.ordinary_tol;
    suite_cfg.grid_density = cfg.grid_density;
    suite_cfg.window_budget = cfg.window_budget;
    suite_cfg.curve_points = cfg.curve_points;

    let mut report: SuiteReport = run_suite(&specs, &suite_cfg)?;
    if let Some(filter) = &theorem_filter {
        report.cases.retain(|c| filter.contains(&c.theorem));
    }

    println!(
        "{:<4} {:<6} {:<18} {:<14} {:<14} {:>10}",
        "thm", "fn", "outcome", "hypothesis", "conclusion", "|Δell|"
    );
    for c in &report.cases {
        println!(
            "{:<4} {:<6} {:<18} {:<14} {:<14} {:>10}",
            c.theorem.label(),
            c.spec_name,
            format!("{:?}", c.outcome),
            format!("{:?}", c.hypothesis_limit.kind),
            format!("{:?}", c.conclusion.kind),
            c.ell_distance.map_or("-".to_string(), |d| format!("{d:.5}")),
        );
    }
    println!(
        "summary: {} pass, {} consistent-control, {} inconclusive, {} counterexample",
        report.summary.pass,
        report.summary.consistent_control,
        report.summary.inconclusive,
        report.summary.counterexample
    );
    let doc = json!({
        "provenance": provenance(cfg, "suite"),
        "report": report,
    });
    println!("{}", serde_json::to_string_pretty(&doc)?);
    sink.write("suite.json", &serde_json::to_string_pretty(&doc)?)?;

    // per-case evidence bundles
    if sink.out.is_some() {
        for c in &report.cases {
            let mut buf = Vec::new();
            writeln!(buf, "key,value")?;
            writeln!(buf, "theorem,{}", c.theorem.label())?;
            writeln!(buf, "function,{}", c.spec_name)?;
            writeln!(buf, "outcome,{:?}", c.outcome)?;
            writeln!(buf, "hypothesis_kind,{:?}", c.hypothesis_limit.kind)?;
            writeln!(buf, "conclusion_kind,{:?}", c.conclusion.kind)?;
            for w in &c.windows {
                writeln!(
                    buf,
                    "window_eps_{},{}",
                    w.eps,
                    w.window.map_or("not-found".to_string(), |sw| {
                        format!("x0={} lambda={}", sw.x0, sw.lambda)
                    })
                )?;
            }
            sink.write(
                &format!("case_{}_{}.csv", c.theorem.label(), c.spec_name),
                &String::from_utf8(buf).unwrap(),
            )?;
        }
    }
    Ok(if report.has_counterexample() { 1 } else { 0 })
}
