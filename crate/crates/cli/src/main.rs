use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod config;

use config::{ConfigError, RunConfig, Settings, WORKERS_ENV};

#[derive(Parser, Debug)]
#[command(name = "lbesync", version, about = "Lower bound error and generalized synchronization of coupled oscillators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Integrate one coupled pair and write master and slave orbits.
    Simulate(RunArgs),
    /// LBE between the two slave formulations at one K.
    Lbe(RunArgs),
    /// Auxiliary-system synchronization check at one K, with phase-portrait data.
    Sync(RunArgs),
    /// LBE and synchronization over a K grid.
    Sweep(RunArgs),
    /// Print the built-in case studies.
    ListCases,
}

#[derive(Args, Debug, Default)]
struct RunArgs {
    /// Flat `key = value` file; flags override it.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Built-in case study (see `list-cases`) or `custom`.
    #[arg(long)]
    case: Option<String>,
    /// Coupling constant(s), comma separated. One value except for `sweep`.
    #[arg(long, value_name = "K[,K...]", allow_hyphen_values = true)]
    k: Option<String>,
    /// Step size.
    #[arg(long, allow_hyphen_values = true)]
    h: Option<String>,
    /// Number of steps.
    #[arg(long, allow_hyphen_values = true)]
    steps: Option<String>,
    /// Record every n-th step.
    #[arg(long, allow_hyphen_values = true)]
    stride: Option<String>,
    /// Slave component compared by the LBE (0-based).
    #[arg(long, allow_hyphen_values = true)]
    component: Option<String>,
    /// Crossing threshold on log10(2 delta).
    #[arg(long, allow_hyphen_values = true)]
    threshold: Option<String>,
    /// Sync tolerance relative to the slave attractor diameter.
    #[arg(long, allow_hyphen_values = true)]
    epsilon: Option<String>,
    /// Fraction of the run discarded before the sync window.
    #[arg(long, allow_hyphen_values = true)]
    transient: Option<String>,
    /// Slave formulation for `simulate` and `sync` (A or B).
    #[arg(long)]
    variant: Option<String>,
    /// Worker threads for `sweep`; 0 uses every core.
    #[arg(long, env = WORKERS_ENV, allow_hyphen_values = true)]
    workers: Option<String>,
    /// Output directory [default: runs/<case>-<timestamp>].
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    delta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    omega: Option<String>,
    /// Custom pair: master system (duffing, lorenz, rossler).
    #[arg(long)]
    master: Option<String>,
    /// Custom pair: slave system (duffing, lorenz).
    #[arg(long)]
    slave: Option<String>,
    /// Custom pair: master component feeding the drive.
    #[arg(long, allow_hyphen_values = true)]
    source: Option<String>,
    /// Custom pair: slave equation receiving the drive.
    #[arg(long, allow_hyphen_values = true)]
    target: Option<String>,
    #[arg(long, value_name = "X[,X...]", allow_hyphen_values = true)]
    master_ic: Option<String>,
    #[arg(long, value_name = "Y[,Y...]", allow_hyphen_values = true)]
    slave_ic: Option<String>,
    #[arg(long, value_name = "Y[,Y...]", allow_hyphen_values = true)]
    aux_ic: Option<String>,
}

impl RunArgs {
    fn settings(&self) -> Result<Settings, ConfigError> {
        let mut s = match &self.config {
            Some(path) => Settings::parse_file(path)?,
            None => Settings::default(),
        };
        let mut flags = Settings::default();
        let pairs = [
            ("case", &self.case),
            ("k", &self.k),
            ("h", &self.h),
            ("steps", &self.steps),
            ("stride", &self.stride),
            ("component", &self.component),
            ("threshold", &self.threshold),
            ("epsilon", &self.epsilon),
            ("transient", &self.transient),
            ("variant", &self.variant),
            ("workers", &self.workers),
            ("delta", &self.delta),
            ("gamma", &self.gamma),
            ("omega", &self.omega),
            ("master", &self.master),
            ("slave", &self.slave),
            ("source", &self.source),
            ("target", &self.target),
            ("master_ic", &self.master_ic),
            ("slave_ic", &self.slave_ic),
            ("aux_ic", &self.aux_ic),
        ];
        for (key, value) in pairs {
            if let Some(v) = value {
                flags.set(key, v.as_str());
            }
        }
        if let Some(out) = &self.out {
            flags.set("out", out.display().to_string());
        }
        s.merge(flags);
        Ok(s)
    }

    fn resolve(&self, timestamp: &str) -> Result<RunConfig, ConfigError> {
        RunConfig::resolve(&self.settings()?, |case| PathBuf::from("runs").join(format!("{case}-{timestamp}")))
    }
}

type Runner = fn(&RunConfig) -> anyhow::Result<()>;

/// Exit status per failure class.
mod exit {
    pub const RUNTIME: u8 = 1;
    pub const CONFIG: u8 = 3;
    pub const OUTPUT_DIR: u8 = 4;
}

fn main() -> ExitCode {
    // clap exits with status 2 on unknown flags or malformed arguments.
    let cli = Cli::parse();
    let now = chrono::Utc::now();
    let stamp = now.format("%Y%m%dT%H%M%SZ").to_string();
    let created = now.to_rfc3339_opts(chrono::SecondsFormat::Secs, true);

    let (name, args, run): (&str, &RunArgs, Runner) = match &cli.command {
        Command::ListCases => {
            commands::list_cases();
            return ExitCode::SUCCESS;
        }
        Command::Simulate(a) => ("simulate", a, commands::simulate),
        Command::Lbe(a) => ("lbe", a, commands::lbe),
        Command::Sync(a) => ("sync", a, commands::sync),
        Command::Sweep(a) => ("sweep", a, commands::sweep),
    };

    let rc = match args.resolve(&stamp).and_then(|rc| {
        if name != "sweep" {
            rc.single_k()?;
        }
        Ok(rc)
    }) {
        Ok(rc) => rc,
        Err(e) => {
            eprintln!("error: invalid configuration: {e}");
            return ExitCode::from(exit::CONFIG);
        }
    };
    if let Err(e) = commands::prepare_output(&rc, name, &created) {
        eprintln!("error: output directory {} is not writable: {e:#}", rc.out.display());
        return ExitCode::from(exit::OUTPUT_DIR);
    }
    match run(&rc) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit::RUNTIME)
        }
    }
}
