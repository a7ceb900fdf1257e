//! `occsim`: run, verify and tabulate occupation-time scenarios.
//!
//! Exit codes: 0 success (all comparisons passed), 1 comparisons failed,
//! 2 configuration or schema error, 3 inadmissible parameters, 4 numerical failure.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use occupation::limits::{counterexample_subsequence, extract_constant_k};
use occupation::occupation::{truncation_radius, Centering};
use occupation::oracle::{mean_decay, total_occupation, variance_exact};
use occupation::regime::RegimeId;
use occupation::scenario::{limit_law, PreparedScenario, ScenarioConfig};
use occupation::{par, Error, StableLaw};
use serde_json::json;

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Read { .. } | CliError::Core(Error::Config(_)) => 2,
            CliError::Core(Error::Inadmissible(_)) => 3,
            CliError::Write { .. } | CliError::Core(_) => 4,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "occsim", version, about = "Occupation-time fluctuations of Poisson systems of stable particles")]
struct Cli {
    /// worker threads for replica simulation (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct ScenarioArgs {
    #[arg(long)]
    config: PathBuf,
    /// overrides the configured master seed
    #[arg(long)]
    seed: Option<u64>,
    /// output directory; falls back to the config's `output`, then `occsim-out`
    #[arg(long, env = "OCCSIM_OUT")]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify the regime and print the norming F_T.
    Regime(ScenarioArgs),
    /// Run the replica ensemble and write summary, path and correlation CSVs.
    Simulate(ScenarioArgs),
    /// Quadrature oracles: centering, truncation, exact increment variances.
    Oracle(ScenarioArgs),
    /// Limit covariance on the scenario grid and the constant K.
    Limits(ScenarioArgs),
    /// Full pipeline: simulate, compare against oracles and limits, report.
    Verify(ScenarioArgs),
    /// Annulus subsequence of the non-converging second moment.
    Counterexample {
        #[arg(long, default_value_t = 1.5)]
        alpha: f64,
        #[arg(long, default_value_t = 0.5)]
        gamma: f64,
        #[arg(long, default_value_t = 8)]
        max_n: u32,
        #[arg(long, env = "OCCSIM_OUT")]
        out: Option<PathBuf>,
    },
    /// Decay ladder of the mean E⟨N_t, φ⟩ (and the total occupation in regime B).
    Decay {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(long, default_value_t = 1e2)]
        from: f64,
        #[arg(long, default_value_t = 1e4)]
        to: f64,
        #[arg(long, default_value_t = 9)]
        points: usize,
    },
}

fn load(args: &ScenarioArgs) -> CliResult<ScenarioConfig> {
    let text = fs::read_to_string(&args.config).map_err(|source| CliError::Read { path: args.config.clone(), source })?;
    let mut config = ScenarioConfig::from_json(&text)?;
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    Ok(config)
}

fn out_dir(flag: &Option<PathBuf>, config: Option<&ScenarioConfig>) -> PathBuf {
    flag.clone()
        .or_else(|| config.and_then(|c| c.output.clone()).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("occsim-out"))
}

fn write(dir: &Path, name: &str, contents: &str) -> CliResult<()> {
    let path = dir.join(name);
    fs::create_dir_all(dir).and_then(|()| fs::write(&path, contents)).map_err(|source| CliError::Write { path: path.clone(), source })?;
    eprintln!("wrote {}", path.display());
    Ok(())
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize") + "\n"
}

fn regime(args: &ScenarioArgs) -> CliResult<bool> {
    let config = load(args)?;
    let spec = config.classify()?;
    let norming = spec.norming(config.horizon).ok();
    println!("{}", pretty(&json!({ "scenario": config.id, "horizon": config.horizon, "regime": spec, "norming": norming })).trim_end());
    Ok(true)
}

fn simulate(args: &ScenarioArgs) -> CliResult<bool> {
    let config = load(args)?;
    let dir = out_dir(&args.out, Some(&config));
    let prepared = PreparedScenario::new(config)?;
    if prepared.regime.id == RegimeId::B {
        return Err(Error::NoNorming("B").into());
    }
    let e = prepared.simulate()?;
    write(&dir, "summary.csv", &prepared.summary_csv(&e))?;
    write(&dir, "paths.csv", &prepared.paths_csv(&e))?;
    write(&dir, "correlation.csv", &prepared.correlation_csv(&e)?)?;
    Ok(true)
}

fn verify(args: &ScenarioArgs) -> CliResult<bool> {
    let config = load(args)?;
    let dir = out_dir(&args.out, Some(&config));
    let prepared = PreparedScenario::new(config)?;
    let (ensemble, report) = prepared.run()?;
    if let Some(e) = &ensemble {
        write(&dir, "summary.csv", &prepared.summary_csv(e))?;
        write(&dir, "paths.csv", &prepared.paths_csv(e))?;
        write(&dir, "correlation.csv", &prepared.correlation_csv(e)?)?;
    }
    write(&dir, "report.json", &(report.to_json() + "\n"))?;
    print!("{}", report.to_text());
    Ok(report.passed)
}

fn oracle(args: &ScenarioArgs) -> CliResult<bool> {
    let config = load(args)?;
    let dir = out_dir(&args.out, Some(&config));
    let spec = config.classify()?;
    let d = config.d as usize;
    let (mu, law, phi) = (config.intensity.measure(d)?, StableLaw::new(config.alpha.to_f64(), d)?, config.test_function()?);
    let value = if spec.id == RegimeId::B {
        json!({ "scenario": config.id, "regime": spec.id, "total_occupation": total_occupation(&mu, &law, &phi)? })
    } else {
        let norming = spec.norming(config.horizon)?;
        let centering = Centering::compute(&mu, &law, config.horizon, &phi, &config.grid)?;
        let radius = if mu.mass(f64::INFINITY)?.is_finite() {
            None
        } else {
            Some(truncation_radius(&mu, &law, config.horizon, &phi, config.truncation * norming)?)
        };
        let mut variances = Vec::new();
        if d == 1 && !spec.id.is_finite_mass() {
            for w in &config.tolerance.variance_windows {
                let v = variance_exact(&mu, &law, config.horizon, &phi, *w, norming)?;
                variances.push(json!({ "t1": w.t1(), "t2": w.t2(), "value": v.value, "error": v.error }));
            }
        }
        json!({
            "scenario": config.id,
            "regime": spec.id,
            "norming": norming,
            "centering": centering,
            "truncation_radius": radius,
            "increment_variance": variances,
        })
    };
    let text = pretty(&value);
    write(&dir, "oracle.json", &text)?;
    print!("{text}");
    Ok(true)
}

fn limits(args: &ScenarioArgs) -> CliResult<bool> {
    let config = load(args)?;
    let dir = out_dir(&args.out, Some(&config));
    let spec = config.classify()?;
    let d = config.d as usize;
    let (mu, law, phi) = (config.intensity.measure(d)?, StableLaw::new(config.alpha.to_f64(), d)?, config.test_function()?);
    let Some(limit) = limit_law(&spec, &mu, &law, &phi)? else {
        println!("regime {} has a finite total occupation and no limit law", spec.id);
        return Ok(true);
    };
    let k = extract_constant_k(&spec, &mu, &law)?;
    if limit.is_gaussian() {
        let cov = limit.cov_grid(&config.grid)?;
        cov.check_psd()?;
        let corr = cov.correlation();
        let mut csv = String::from("t,s,covariance,correlation\n");
        for (i, t) in config.grid.iter().enumerate() {
            for (j, s) in config.grid.iter().enumerate() {
                csv += &format!("{t},{s},{},{}\n", cov.matrix[(i, j)], corr[(i, j)]);
            }
        }
        write(&dir, "limits.csv", &csv)?;
        println!("min eigenvalue {:.3e}, trace {:.3e}", cov.min_eigenvalue(), cov.trace());
    }
    println!("{}", pretty(&json!({ "regime": spec.id, "limit": limit, "constant": k })).trim_end());
    Ok(true)
}

fn counterexample(alpha: f64, gamma: f64, max_n: u32, out: &Option<PathBuf>) -> CliResult<bool> {
    let law = StableLaw::new(alpha, 1)?;
    let mut csv = String::from("n,log10_horizon,value,ratio\n");
    let mut prev: Option<f64> = None;
    for n in 2..=max_n {
        let v = counterexample_subsequence(&law, gamma, n)?;
        let nf = n as f64;
        let log_t = (nf * alpha + alpha / 2.0) * nf.log10();
        let ratio = prev.map(|p| (p.max(v) / p.min(v)).to_string()).unwrap_or_default();
        csv += &format!("{n},{log_t},{v},{ratio}\n");
        prev = Some(v);
    }
    print!("{csv}");
    write(&out_dir(out, None), "counterexample.csv", &csv)?;
    Ok(true)
}

fn decay(args: &ScenarioArgs, from: f64, to: f64, points: usize) -> CliResult<bool> {
    let config = load(args)?;
    let dir = out_dir(&args.out, Some(&config));
    if !(from > 0.0 && to > from && points >= 2) {
        return Err(Error::Config(format!("decay ladder [{from}, {to}] with {points} points")).into());
    }
    let spec = config.classify()?;
    let d = config.d as usize;
    let (mu, law, phi) = (config.intensity.measure(d)?, StableLaw::new(config.alpha.to_f64(), d)?, config.test_function()?);
    let ratio = (to / from).powf(1.0 / (points - 1) as f64);
    let times: Vec<f64> = (0..points).map(|i| from * ratio.powi(i as i32)).collect();
    let table = mean_decay(&mu, &law, &phi, &times)?;
    let mut csv = String::from("t,mean\n");
    for (t, v) in table.times.iter().zip(&table.values) {
        csv += &format!("{t},{v}\n");
    }
    write(&dir, "decay.csv", &csv)?;
    println!("log-log slope {:.4} (−d/α = {:.4})", table.slope, -(d as f64) / law.alpha());
    if spec.id == RegimeId::B {
        println!("total occupation {:.6e}", total_occupation(&mu, &law, &phi)?);
    }
    Ok(true)
}

fn dispatch(command: &Command) -> CliResult<bool> {
    match command {
        Command::Regime(a) => regime(a),
        Command::Simulate(a) => simulate(a),
        Command::Oracle(a) => oracle(a),
        Command::Limits(a) => limits(a),
        Command::Verify(a) => verify(a),
        Command::Counterexample { alpha, gamma, max_n, out } => counterexample(*alpha, *gamma, *max_n, out),
        Command::Decay { scenario, from, to, points } => decay(scenario, *from, *to, *points),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.threads {
        Some(n) => par::with_threads(n, || dispatch(&cli.command)).unwrap_or_else(|e| Err(e.into())),
        None => dispatch(&cli.command),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("occsim: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
