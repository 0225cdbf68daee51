use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use tumor_hele_shaw::cli::{self, error_json};
use tumor_hele_shaw::config::parse_config;
use tumor_hele_shaw::Result;

/// Finite-volume simulator for tumor growth with active motion and its
/// Hele-Shaw limit.
#[derive(Parser)]
#[command(name = "tumor-hs", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// TOML configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Override a config value, e.g. `--set model.k=50` (repeatable).
    #[arg(long = "set", value_name = "SECTION.KEY=VALUE")]
    overrides: Vec<String>,
    /// Output directory [default: $TUMOR_HS_OUT/<config stem>, or out/<config stem>].
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate one configuration and write snapshots, series and metadata.
    Run(Common),
    /// Run once per k and write a sweep summary.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',', required = true)]
        ks: Vec<f64>,
    },
    /// Measure the front speed and compare it with the traveling-wave relations.
    Wave(Common),
    /// Run once per nu and tabulate fronts and speeds.
    Compare {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',', required = true)]
        nus: Vec<f64>,
    },
    /// Check initial admissibility and the a-priori bounds; exit 2 on failure.
    Check(Common),
}

fn out_dir(common: &Common, config: &tumor_hele_shaw::config::ConfigFile) -> PathBuf {
    cli::resolve_out_dir(common.out.as_deref(), config, Path::new(&common.config))
}

fn execute(command: Command) -> Result<ExitCode> {
    match command {
        Command::Run(c) => {
            let config = parse_config(&c.config, &c.overrides)?;
            let out = out_dir(&c, &config);
            let report = cli::cmd_run(&config, &out)?;
            println!("{}", out.display());
            Ok(if report.bounds_pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            })
        }
        Command::Sweep { common, ks } => {
            let config = parse_config(&common.config, &common.overrides)?;
            let out = out_dir(&common, &config);
            cli::cmd_sweep(&config, &ks, &out)?;
            println!("{}", out.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Wave(c) => {
            let config = parse_config(&c.config, &c.overrides)?;
            let out = out_dir(&c, &config);
            let study = cli::cmd_wave(&config, &out)?;
            println!(
                "sigma {:.6} ± {:.2e}  sigma0 {:.6}  interface relation {:.6}",
                study.sigma.speed, study.sigma.stderr, study.sigma0, study.formula_rhs
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Compare { common, nus } => {
            let config = parse_config(&common.config, &common.overrides)?;
            let out = out_dir(&common, &config);
            cli::cmd_compare(&config, &nus, &out)?;
            println!("{}", out.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Check(c) => {
            let config = parse_config(&c.config, &c.overrides)?;
            let out = out_dir(&c, &config);
            let report = cli::cmd_check(&config, &out)?;
            println!(
                "{}",
                serde_json::json!({
                    "monotone_admissible": report.monotone_admissible,
                    "bounds_pass": report.bounds_pass,
                })
            );
            Ok(if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{}", error_json(&e));
            ExitCode::FAILURE
        }
    }
}
