use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use hyperdyn::cli::{self, BatteryConfig, CheckId, CliError, Format, Mode, Overrides};

#[derive(Parser)]
#[command(name = "hyperdyn", version, about = "Chaos-property and hyperspace equivalence checks with certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check selected properties of one system from the config.
    Check {
        #[command(flatten)]
        common: Common,
        /// System id (defaults to the first system).
        #[arg(long)]
        system: Option<String>,
        /// Property or check id, repeatable (defaults to classify).
        #[arg(long = "property")]
        properties: Vec<String>,
    },
    /// Run the configured checks on every system of the battery.
    VerifyTheorems {
        #[command(flatten)]
        common: Common,
    },
    /// Emit only the proved objects built by the equivalence checks.
    Witness {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Human,
    Machine,
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    #[arg(long, value_enum, default_value = "human")]
    format: FormatArg,
    #[arg(long)]
    level: Option<usize>,
    #[arg(long)]
    horizon: Option<u64>,
    #[arg(long)]
    kmax: Option<u64>,
    #[arg(long)]
    cap: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    depth: Option<u32>,
}

impl Common {
    fn overrides(&self) -> Overrides {
        Overrides {
            seed: self.seed,
            level: self.level,
            horizon: self.horizon,
            k_max: self.kmax,
            cap: self.cap,
            depth: self.depth,
        }
    }

    fn format(&self) -> Format {
        match self.format {
            FormatArg::Human => Format::Human,
            FormatArg::Machine => Format::Machine,
        }
    }
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let (common, mode, select) = match &cli.command {
        Command::Check { common, system, properties } => (common, Mode::Checks, Some((system, properties))),
        Command::VerifyTheorems { common } => (common, Mode::Checks, None),
        Command::Witness { common } => (common, Mode::Witnesses, None),
    };
    let config = BatteryConfig::load(&common.config)?;
    let mut battery = config.validate(&common.overrides())?;
    if let Some((system, properties)) = select {
        let keep = match system {
            Some(id) => battery
                .systems
                .iter()
                .position(|(s, _)| s == id)
                .ok_or_else(|| CliError::Config(format!("no system {id:?} in the config")))?,
            None => 0,
        };
        battery.systems = vec![battery.systems.swap_remove(keep)];
        battery.checks = if properties.is_empty() {
            vec![CheckId::Classify]
        } else {
            properties.iter().map(|p| p.parse()).collect::<Result<_, _>>()?
        };
    }
    let report = cli::run_battery(&battery, mode);
    if let Some(text) = cli::write_report(&report, common.format(), &battery)? {
        print!("{text}");
    }
    Ok(report.exit_code())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { cli::EXIT_USAGE as u8 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(cli::EXIT_USAGE as u8)
        }
    }
}
