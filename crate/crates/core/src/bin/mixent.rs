use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use mixed_entanglement::cli::dump::write_density;
use mixed_entanglement::cli::sweep::{build_state, plot_svg, write_csv};
use mixed_entanglement::cli::{
    analyze, read_density, run_checkpoints, run_sweep, CheckpointOptions, Execution, SweepConfig,
};
use mixed_entanglement::{Error, Result};

const EXIT_CHECKPOINT: u8 = 2;

/// Entanglement diagnostics for qubit-oscillator steady states.
#[derive(Parser)]
#[command(name = "mixent", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the coupling and write one CSV row per grid point.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// CSV destination; standard output when neither this nor `out` is set.
        #[arg(long)]
        out: Option<PathBuf>,
        /// SVG line plot of sqrt(S) and N.
        #[arg(long)]
        plot: Option<PathBuf>,
        /// Override a configuration key, e.g. `--set n_max=30`.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
        /// Evaluate grid points one after another.
        #[arg(long)]
        serial: bool,
    },
    /// Report S, N and sector populations of a dumped density operator.
    Analyze {
        file: PathBuf,
        /// Number of violating pairs to list.
        #[arg(long, default_value_t = 10)]
        top: usize,
        /// Configuration whose Hamiltonian gives the eigenbasis populations.
        #[arg(long, requires = "lambda")]
        config: Option<PathBuf>,
        #[arg(long, requires = "config")]
        lambda: Option<f64>,
    },
    /// Check the published reference values; exits 2 on any failure.
    Checkpoints {
        #[arg(long)]
        n_max: Option<usize>,
        /// Detuning of the parameterized JCM checks.
        #[arg(long)]
        delta: Option<f64>,
    },
    /// Write the state at one coupling in the text dump format.
    Dump {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
}

fn load_config(path: &Path, overrides: &[String]) -> Result<SweepConfig> {
    let mut cfg = SweepConfig::from_file(path)?;
    for o in overrides {
        let (key, value) = o
            .split_once('=')
            .ok_or_else(|| Error::Parameter(format!("override '{o}' is not KEY=VALUE")))?;
        cfg.set(key.trim(), value.trim())?;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn sweep(
    config: PathBuf,
    out: Option<PathBuf>,
    plot: Option<PathBuf>,
    overrides: Vec<String>,
    serial: bool,
) -> Result<u8> {
    let mut cfg = load_config(&config, &overrides)?;
    if out.is_some() {
        cfg.out = out;
    }
    if plot.is_some() {
        cfg.plot = plot;
    }
    let execution = if serial {
        Execution::Serial
    } else {
        Execution::Parallel
    };
    let rows = run_sweep(&cfg, execution);
    match &cfg.out {
        Some(path) => {
            let mut w = BufWriter::new(fs::File::create(path)?);
            write_csv(&rows, &mut w)?;
            w.flush()?;
        }
        None => write_csv(&rows, io::stdout().lock())?,
    }
    if let Some(path) = &cfg.plot {
        let title = format!("{} {} delta={}", cfg.model, cfg.state_kind, cfg.delta);
        plot_svg(&rows, &title, path)?;
    }
    let mut status = 0;
    for row in &rows {
        if let Err(e) = &row.outcome {
            eprintln!("lambda = {}: {e}", row.lambda);
            status = status.max(e.exit_code() as u8);
        }
    }
    Ok(status)
}

fn analyze_cmd(
    file: PathBuf,
    top: usize,
    config: Option<PathBuf>,
    lambda: Option<f64>,
) -> Result<u8> {
    let rho = read_density(&fs::read_to_string(&file)?)?;
    let cfg = config.map(|p| SweepConfig::from_file(&p)).transpose()?;
    let hamiltonian = cfg.as_ref().zip(lambda);
    print!("{}", analyze(&rho, top, hamiltonian)?);
    Ok(0)
}

fn checkpoints(n_max: Option<usize>, delta: Option<f64>) -> Result<u8> {
    let mut opts = CheckpointOptions::default();
    if let Some(n) = n_max {
        opts.n_max = n;
    }
    if let Some(d) = delta {
        opts.delta = d;
    }
    let results = run_checkpoints(&opts)?;
    let failed = results.iter().filter(|c| !c.passed).count();
    for c in &results {
        println!("{c}");
    }
    println!("{} checkpoints, {failed} failed", results.len());
    Ok(if failed > 0 { EXIT_CHECKPOINT } else { 0 })
}

fn dump(config: PathBuf, lambda: f64, out: PathBuf, overrides: Vec<String>) -> Result<u8> {
    let cfg = load_config(&config, &overrides)?;
    let rho = build_state(&cfg, lambda)?;
    let mut w = BufWriter::new(fs::File::create(out)?);
    write_density(&rho, &mut w)?;
    w.flush()?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let result = match cli.command {
        Command::Sweep {
            config,
            out,
            plot,
            overrides,
            serial,
        } => sweep(config, out, plot, overrides, serial),
        Command::Analyze {
            file,
            top,
            config,
            lambda,
        } => analyze_cmd(file, top, config, lambda),
        Command::Checkpoints { n_max, delta } => checkpoints(n_max, delta),
        Command::Dump {
            config,
            lambda,
            out,
            overrides,
        } => dump(config, lambda, out, overrides),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
