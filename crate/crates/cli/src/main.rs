//! fflsim: batch front end for the oscillator-motif toolchain. Subcommands
//! run one seeded trajectory, ensemble parameter sweeps, or pooled
//! inter-spike-interval densities, all driven by a strict TOML experiment
//! file and emitted with a reproducibility manifest.

mod config;
mod error;
mod manifest;
mod output;

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use ffl_core::sde::simulate;
use ffl_core::sweep::{isi_density, sweep_1d, sweep_2d, sweep_lambda, SweepParameter};

use config::{parse_experiment, ExperimentFile};
use error::{CliError, Result};
use manifest::RunManifest;
use output::{OutputFormat, SweepOutcome};

#[derive(Parser)]
#[command(
    name = "fflsim",
    version,
    about = "Monte-Carlo toolchain for noise-driven three-node oscillator motifs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate one seeded trial and write the trajectory.
    Simulate(RunArgs),
    /// Ensemble-average coherence metrics over one or two parameter axes.
    Sweep(RunArgs),
    /// Pooled inter-spike-interval densities at listed noise intensities.
    IsiDensity(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Experiment file (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Output directory, created if missing.
    #[arg(long, env = "FFLSIM_OUT_DIR", default_value = ".")]
    out: PathBuf,
    /// Override both the trial seed and the ensemble base seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the ensemble trial count.
    #[arg(long)]
    trials: Option<usize>,
    /// Cap the worker-thread count; affects scheduling only, never results.
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
}

fn main() {
    let cli = Cli::parse();
    if let Err(err) = run(cli) {
        eprintln!("error: {err}");
        std::process::exit(err.exit_code());
    }
}

fn run(cli: Cli) -> Result<()> {
    let (name, args) = match &cli.command {
        Command::Simulate(a) => ("simulate", a),
        Command::Sweep(a) => ("sweep", a),
        Command::IsiDensity(a) => ("isi-density", a),
    };
    if let Some(n) = args.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::validation(format!("cannot size thread pool: {e}")))?;
    }
    let text = fs::read_to_string(&args.config)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", args.config.display())))?;
    let mut file = parse_experiment(&text)?;
    if let Some(seed) = args.seed {
        file.sim.seed = seed;
        file.ensemble.base_seed = seed;
    }
    if let Some(trials) = args.trials {
        file.ensemble.n_trials = trials;
    }
    fs::create_dir_all(&args.out)?;
    // The manifest embeds the document with overrides applied, so a run is
    // reproducible from the manifest alone.
    let resolved = toml::to_string_pretty(&file).map_err(CliError::parse)?;

    let written = match name {
        "simulate" => cmd_simulate(&file, args)?,
        "sweep" => cmd_sweep(&file, args)?,
        _ => cmd_isi_density(&file, args)?,
    };

    let base_seed = if name == "simulate" {
        file.sim.seed
    } else {
        file.ensemble.base_seed
    };
    let n_trials = (name != "simulate").then_some(file.ensemble.n_trials);
    let mut manifest = RunManifest::new(name, base_seed, n_trials, resolved);
    for path in &written {
        manifest.record(path)?;
        println!("wrote {}", path.display());
    }
    let manifest_path = manifest.write(&args.out)?;
    println!("wrote {}", manifest_path.display());
    Ok(())
}

fn cmd_simulate(file: &ExperimentFile, args: &RunArgs) -> Result<Vec<PathBuf>> {
    let (network, _) = file.network.resolve()?;
    let traj = simulate(&network, &file.sim.params())?;
    Ok(vec![output::write_trajectory(&args.out, args.format, &traj)?])
}

fn cmd_sweep(file: &ExperimentFile, args: &RunArgs) -> Result<Vec<PathBuf>> {
    let section = file
        .sweep
        .as_ref()
        .ok_or_else(|| CliError::validation("config has no [sweep] section"))?;
    let targets = file.motif_runs(&section.motifs)?;
    let mut runs = Vec::with_capacity(targets.len());
    for target in &targets {
        let spec = file.sweep_spec(target)?;
        let outcome = if spec.axes.len() == 2
            && spec.axes[0].parameter == SweepParameter::Lambda0
        {
            SweepOutcome::Lambda(sweep_lambda(&spec)?)
        } else if spec.axes.len() == 1 {
            SweepOutcome::Grid(sweep_1d(&spec)?)
        } else {
            SweepOutcome::Grid(sweep_2d(&spec)?)
        };
        runs.push((target.label(), outcome));
    }
    output::write_sweep(&args.out, args.format, &runs)
}

fn cmd_isi_density(file: &ExperimentFile, args: &RunArgs) -> Result<Vec<PathBuf>> {
    let section = file
        .isi_density
        .as_ref()
        .ok_or_else(|| CliError::validation("config has no [isi_density] section"))?;
    let targets = file.motif_runs(&section.motifs)?;
    let bins = section.bin_spec();
    let sim = file.sim.params();
    let mut written = Vec::new();
    for target in &targets {
        for &delta1 in &section.delta1_points {
            let mut network = target.network.clone();
            network.noise_intensities[0] = delta1;
            network.validate()?;
            let density = isi_density(
                &network,
                &sim,
                file.ensemble.n_trials,
                file.ensemble.base_seed,
                &file.metrics,
                &bins,
            )?;
            written.push(output::write_density(
                &args.out,
                args.format,
                &target.label(),
                delta1,
                &density,
            )?);
        }
    }
    Ok(written)
}
