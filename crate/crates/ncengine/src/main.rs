use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ncengine::cycles::EvalMode;
use ncengine::runner::{
    parse_config_file, run_figures, run_single, run_sweep, run_verify, write_verify_report, Axis,
    Engine, OutputFormat, RunConfig, SweepGrid,
};
use ncengine::spectra::SpaceConfig;
use ncengine::EngineError;

/// Coupled-oscillator quantum heat-engine cycles in commutative and
/// non-commutative phase space.
#[derive(Parser)]
#[command(name = "ncengine", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a single Otto cycle.
    Otto(CommonOpts),
    /// Evaluate a single Stirling cycle.
    Stirling(CommonOpts),
    /// Sweep one or two parameters over a linear grid.
    Sweep {
        #[command(flatten)]
        opts: CommonOpts,
        /// Engine to sweep.
        #[arg(long, value_parser = parse_engine, default_value = "otto")]
        engine: Engine,
        /// Axis spec `name=start:stop:count`; repeat for a 2-D grid.
        #[arg(long, required = true)]
        axis: Vec<String>,
    },
    /// Emit the six published efficiency sweeps as CSV files.
    Figures {
        /// Output directory.
        #[arg(long, default_value = "figures")]
        out: PathBuf,
    },
    /// Run the verification battery and write a discrepancy report.
    Verify {
        #[command(flatten)]
        opts: CommonOpts,
        /// Central finite-difference step for the derivative checks,
        /// relative to each beta on the verification grid.
        #[arg(long, default_value_t = 1e-5)]
        fd_step: f64,
    },
}

#[derive(Args, Clone)]
struct CommonOpts {
    /// Phase-space structure: comm, nc, or gnc.
    #[arg(long)]
    space: Option<String>,
    /// Evaluation mode: paper (printed closed forms) or exact (spectral).
    #[arg(long)]
    mode: Option<String>,
    /// NC deformation parameter.
    #[arg(long)]
    theta: Option<f64>,
    /// GNC position-position deformation.
    #[arg(long)]
    gamma: Option<f64>,
    /// GNC momentum-momentum deformation.
    #[arg(long)]
    xi: Option<f64>,
    /// Coupling strength.
    #[arg(long)]
    zeta: Option<f64>,
    /// Stiffness K.
    #[arg(long)]
    kconst: Option<f64>,
    /// Effective mass m.
    #[arg(long)]
    mass: Option<f64>,
    /// omega_1 (hot contact / state A).
    #[arg(long)]
    omega_hot: Option<f64>,
    /// omega_2 (cold contact / state B).
    #[arg(long)]
    omega_cold: Option<f64>,
    /// Hot bath temperature.
    #[arg(long)]
    t_hot: Option<f64>,
    /// Cold bath temperature.
    #[arg(long)]
    t_cold: Option<f64>,
    /// Flat key = value config file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format: csv or json.
    #[arg(long)]
    format: Option<String>,
}

fn parse_engine(s: &str) -> Result<Engine, String> {
    match s {
        "otto" => Ok(Engine::Otto),
        "stirling" => Ok(Engine::Stirling),
        other => Err(format!("unknown engine '{other}' (expected otto or stirling)")),
    }
}

fn parse_mode(s: &str) -> Result<EvalMode, EngineError> {
    match s {
        "paper" => Ok(EvalMode::Paper),
        "exact" => Ok(EvalMode::Exact),
        other => Err(EngineError::InvalidInput(format!(
            "unknown mode '{other}' (expected paper or exact)"
        ))),
    }
}

fn parse_format(s: &str) -> Result<OutputFormat, EngineError> {
    match s {
        "csv" => Ok(OutputFormat::Csv),
        "json" => Ok(OutputFormat::Json),
        other => Err(EngineError::InvalidInput(format!(
            "unknown format '{other}' (expected csv or json)"
        ))),
    }
}

/// Resolves precedence: command-line flags > config-file keys > defaults.
fn resolve(opts: &CommonOpts, engine: Engine) -> Result<(RunConfig, OutputFormat), EngineError> {
    let file: BTreeMap<String, String> = match &opts.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                EngineError::InvalidInput(format!("cannot read config {}: {e}", path.display()))
            })?;
            parse_config_file(&text)?
        }
        None => BTreeMap::new(),
    };
    let file_f64 = |key: &str| -> Result<Option<f64>, EngineError> {
        file.get(key)
            .map(|v| {
                v.parse::<f64>().map_err(|_| {
                    EngineError::InvalidInput(format!("config key {key}: bad number '{v}'"))
                })
            })
            .transpose()
    };
    let pick = |flag: Option<f64>, key: &str, default: f64| -> Result<f64, EngineError> {
        Ok(flag.or(file_f64(key)?).unwrap_or(default))
    };

    let defaults = RunConfig::defaults(engine);
    let space_name = opts
        .space
        .clone()
        .or_else(|| file.get("space").cloned())
        .unwrap_or_else(|| "comm".to_string());
    let theta = pick(opts.theta, "theta", 0.0)?;
    let gamma = pick(opts.gamma, "gamma", 0.0)?;
    let xi = pick(opts.xi, "xi", 0.0)?;
    let space = match space_name.as_str() {
        "comm" => SpaceConfig::Commutative,
        "nc" => SpaceConfig::Nc { theta },
        "gnc" => SpaceConfig::Gnc { gamma, xi },
        other => {
            return Err(EngineError::InvalidInput(format!(
                "unknown space '{other}' (expected comm, nc, or gnc)"
            )))
        }
    };
    let mode = match opts.mode.clone().or_else(|| file.get("mode").cloned()) {
        Some(m) => parse_mode(&m)?,
        None => defaults.mode,
    };
    let format = match opts.format.clone().or_else(|| file.get("format").cloned()) {
        Some(f) => parse_format(&f)?,
        None => OutputFormat::Csv,
    };

    let config = RunConfig {
        engine,
        space,
        mode,
        omega_hot: pick(opts.omega_hot, "omega_hot", defaults.omega_hot)?,
        omega_cold: pick(opts.omega_cold, "omega_cold", defaults.omega_cold)?,
        t_hot: pick(opts.t_hot, "t_hot", defaults.t_hot)?,
        t_cold: pick(opts.t_cold, "t_cold", defaults.t_cold)?,
        zeta: pick(opts.zeta, "zeta", defaults.zeta)?,
        kconst: pick(opts.kconst, "kconst", defaults.kconst)?,
        mass: pick(opts.mass, "mass", defaults.mass)?,
    };
    Ok((config, format))
}

fn open_output(path: &Option<PathBuf>) -> Result<Box<dyn Write>, EngineError> {
    match path {
        Some(p) => {
            let file = std::fs::File::create(p).map_err(|e| {
                EngineError::InvalidInput(format!("cannot create {}: {e}", p.display()))
            })?;
            Ok(Box::new(std::io::BufWriter::new(file)))
        }
        None => Ok(Box::new(std::io::stdout().lock())),
    }
}

fn exit_code_for(err: &EngineError) -> u8 {
    match err {
        EngineError::InvalidInput(_) | EngineError::DegenerateCoupling { .. } => 2,
        _ => 3,
    }
}

fn run() -> Result<u8, EngineError> {
    match Cli::parse().command {
        Command::Otto(opts) => {
            let (config, format) = resolve(&opts, Engine::Otto)?;
            let mut out = open_output(&opts.out)?;
            run_single(&mut out, &config, format)?;
            Ok(0)
        }
        Command::Stirling(opts) => {
            let (config, format) = resolve(&opts, Engine::Stirling)?;
            let mut out = open_output(&opts.out)?;
            run_single(&mut out, &config, format)?;
            Ok(0)
        }
        Command::Sweep { opts, engine, axis } => {
            let (config, format) = resolve(&opts, engine)?;
            let axes = axis
                .iter()
                .map(|a| Axis::parse(a))
                .collect::<Result<Vec<_>, _>>()?;
            let grid = SweepGrid::new(axes)?;
            let mut out = open_output(&opts.out)?;
            run_sweep(&mut out, &grid, &config, format)?;
            Ok(0)
        }
        Command::Figures { out } => {
            let written = run_figures(&out)?;
            for path in written {
                println!("{}", path.display());
            }
            Ok(0)
        }
        Command::Verify { opts, fd_step } => {
            let (config, format) = resolve(&opts, Engine::Stirling)?;
            let outcome = run_verify(&config, fd_step)?;
            let mut out = open_output(&opts.out)?;
            write_verify_report(&mut out, &config, &outcome, format)?;
            drop(out);
            if let Some(context) = outcome.first_failure {
                eprintln!("verification failure: {context}");
                Ok(1)
            } else {
                Ok(0)
            }
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
