//! Command-line surface. Flags map one-to-one onto [`RunConfig`] fields and
//! win over values read from `--config`.

use std::path::PathBuf;

use anyhow::{anyhow, Result};
use clap::{Args, Parser, Subcommand};

use crate::commands::{self, Report};
use crate::config::{
    angle_arg, angle_list_arg, FormatArg, LayoutArg, ModeArg, ProfileArg, RunConfig, StateKind,
};
use crate::output::Destination;

#[derive(Debug, Parser)]
#[command(name = "cohsim", version, about = "Simulate coherence counting on small qubit registers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Prepare a state and write it as JSON.
    Prepare(Opts),
    /// Collective spin moments and the coherence measure C2.
    Observe(Opts),
    /// Full counting statistics of S_theta over a grid of angles.
    Fcs(Opts),
    /// Smoothed Wigner function on the (S_x, S_y) plane.
    Wigner(Opts),
    /// Counting protocol swept over the number of coupled qubits.
    Sweep(Opts),
    /// Compile the counting circuit to native gates and print Quil.
    Compile(Opts),
    /// Sample a counting readout histogram.
    Sample(Opts),
    /// Fit a confusion model from simulated calibration runs.
    Calibrate(Opts),
    /// Undo readout errors in a histogram.
    Mitigate(Opts),
}

#[derive(Debug, Default, Args)]
pub struct Opts {
    /// TOML or JSON file with default settings.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub state: Option<StateKind>,
    /// System qubits.
    #[arg(long)]
    pub n: Option<usize>,
    /// Preparation angles: one for all qubits or one per qubit.
    #[arg(long, allow_hyphen_values = true)]
    pub thetas: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub sz: Option<f64>,
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Ancilla qubits.
    #[arg(long)]
    pub na: Option<usize>,
    /// Ancilla phases, one per ancilla.
    #[arg(long = "phi", allow_hyphen_values = true)]
    pub phis: Option<String>,
    #[arg(long, value_enum)]
    pub layout: Option<LayoutArg>,
    #[arg(long, conflicts_with = "keep_all")]
    pub postselect: bool,
    #[arg(long)]
    pub keep_all: bool,
    #[arg(long)]
    pub coupled: Option<usize>,
    #[arg(long, value_enum)]
    pub profile: Option<ProfileArg>,
    /// Readout angle.
    #[arg(long, value_parser = angle_arg, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    #[arg(long, conflicts_with = "exact")]
    pub shots: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Exact probabilities instead of shots.
    #[arg(long)]
    pub exact: bool,
    /// Confusion model file.
    #[arg(long)]
    pub noise: Option<PathBuf>,
    #[arg(long)]
    pub mitigate: bool,
    /// Slots excluded from mitigation.
    #[arg(long, value_delimiter = ',')]
    pub skip_slots: Option<Vec<usize>>,
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long)]
    pub step: Option<f64>,
    /// Output file, or `-` for standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
}

impl Opts {
    fn flags(&self) -> Result<RunConfig> {
        let list = |flag: &str, text: &Option<String>| {
            text.as_deref()
                .map(angle_list_arg)
                .transpose()
                .map_err(|e| anyhow!("--{flag}: {e}"))
        };
        Ok(RunConfig {
            state: self.state,
            n: self.n,
            thetas: list("thetas", &self.thetas)?,
            sz: self.sz,
            input: self.input.clone(),
            na: self.na,
            phis: list("phi", &self.phis)?,
            layout: self.layout,
            mode: if self.keep_all {
                Some(ModeArg::KeepAll)
            } else if self.postselect {
                Some(ModeArg::Postselect)
            } else {
                None
            },
            coupled: self.coupled,
            profile: self.profile,
            theta: self.theta,
            shots: self.shots,
            seed: self.seed,
            exact: self.exact.then_some(true),
            noise: self.noise.clone(),
            mitigate: self.mitigate.then_some(true),
            skip_slots: self.skip_slots.clone(),
            points: self.points,
            sigma: self.sigma,
            step: self.step,
            out: self.out.clone(),
            format: self.format,
        })
    }

    /// Config file overlaid with the command-line flags.
    pub fn resolve(&self) -> Result<RunConfig> {
        let base = match &self.config {
            Some(p) => RunConfig::from_file(p)?,
            None => RunConfig::default(),
        };
        Ok(base.overridden_by(self.flags()?))
    }
}

impl Command {
    pub fn opts(&self) -> &Opts {
        match self {
            Command::Prepare(o)
            | Command::Observe(o)
            | Command::Fcs(o)
            | Command::Wigner(o)
            | Command::Sweep(o)
            | Command::Compile(o)
            | Command::Sample(o)
            | Command::Calibrate(o)
            | Command::Mitigate(o) => o,
        }
    }

    pub fn execute(&self, cfg: &RunConfig) -> Result<Report> {
        match self {
            Command::Prepare(_) => commands::prepare(cfg),
            Command::Observe(_) => commands::observe(cfg),
            Command::Fcs(_) => commands::fcs(cfg),
            Command::Wigner(_) => commands::wigner(cfg),
            Command::Sweep(_) => commands::sweep(cfg),
            Command::Compile(_) => commands::compile(cfg),
            Command::Sample(_) => commands::sample(cfg),
            Command::Calibrate(_) => commands::calibrate_cmd(cfg),
            Command::Mitigate(_) => commands::mitigate_cmd(cfg),
        }
    }
}

/// Runs one command. Data goes to `--out`; the summary goes to standard
/// output, or to standard error when the data itself is on standard output.
pub fn run(cli: Cli) -> Result<()> {
    let cfg = cli.command.opts().resolve()?;
    let report = cli.command.execute(&cfg)?;
    let dest = cfg.out.as_deref().map_or(Destination::Stdout, Destination::from_path);
    match (&report.artifact, &dest) {
        (Some(a), Destination::Stdout) => {
            dest.write(a)?;
            eprintln!("{}", report.summary);
        }
        (Some(a), Destination::File(p)) => {
            dest.write(a)?;
            println!("{}", report.summary);
            println!("wrote {}", p.display());
        }
        (None, _) => println!("{}", report.summary),
    }
    Ok(())
}
