use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use dynwave::harness::Reference;
use dynwave_cli::{cmd_converge, cmd_run, output, presets_listing, CliError};

/// Energy-conserving solvers for nonlinear waves with dynamic boundary conditions.
#[derive(Parser)]
#[command(name = "dynwave", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and write snapshots.csv, energy.csv and diagnostics.csv.
    Run {
        config: PathBuf,
        /// Override a configuration value, e.g. `--set grid.K=200`.
        #[arg(long = "set", value_name = "SECTION.KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// Run a self-convergence study and write convergence.csv.
    Converge {
        config: PathBuf,
        #[arg(long, default_value_t = 4)]
        levels: usize,
        #[arg(long, value_enum, default_value_t = ReferenceArg::Richardson)]
        reference: ReferenceArg,
        #[arg(long = "set", value_name = "SECTION.KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// List the initial data presets.
    Presets,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReferenceArg {
    Richardson,
    Finest,
}

fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run { config, overrides } => {
            let (outdir, t) = cmd_run(&config, &overrides)?;
            println!(
                "wrote {} levels to {}; energy drift {:.3e}, max iterations {}",
                t.grid.steps() + 1,
                outdir.display(),
                t.energy_drift(),
                t.max_iterations()
            );
        }
        Command::Converge {
            config,
            levels,
            reference,
            overrides,
        } => {
            let reference = match reference {
                ReferenceArg::Richardson => Reference::Richardson,
                ReferenceArg::Finest => Reference::Finest,
            };
            let (outdir, rows) = cmd_converge(&config, &overrides, levels, reference)?;
            for r in &rows {
                let order = r.observed_order.map_or("-".to_string(), |o| format!("{o:.3}"));
                println!("K={:<6} N={:<7} err={:.3e} order={order}", r.intervals, r.steps, r.err_composite);
            }
            println!("wrote {}", outdir.join("convergence.csv").display());
        }
        Command::Presets => output::print(std::io::stdout().lock(), &presets_listing())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
