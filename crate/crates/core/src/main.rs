//! persona-lab command line: batch experiment runs, analysis, and
//! comparison. Machine-readable summaries go to stdout, diagnostics to
//! stderr; exit codes are 2 (config), 3 (backend), 4 (data quality).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use persona_lab::cli::{self, CliError, ReplayVerdict};
use persona_lab::experiment::{BackendMode, ExperimentKind};

#[derive(Parser)]
#[command(
    name = "persona-lab",
    version,
    about = "Persona-conditioned language-agent experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExperimentArg {
    /// Non-interactive condition: questionnaire, individual writing task,
    /// questionnaire.
    Exp1,
    /// Interactive condition: cross-group pairs, both speaking orders.
    Exp2,
}

impl From<ExperimentArg> for ExperimentKind {
    fn from(arg: ExperimentArg) -> Self {
        match arg {
            ExperimentArg::Exp1 => ExperimentKind::NonInteractive,
            ExperimentArg::Exp2 => ExperimentKind::Interactive,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Live,
    Record,
    Replay,
    Mock,
}

impl From<BackendArg> for BackendMode {
    fn from(arg: BackendArg) -> Self {
        match arg {
            BackendArg::Live => BackendMode::Live,
            BackendArg::Record => BackendMode::Record,
            BackendArg::Replay => BackendMode::Replay,
            BackendArg::Mock => BackendMode::ScriptedMock,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Write a commented default config (and a demo dictionary) into a
    /// directory.
    Init {
        /// Target directory.
        #[arg(long, default_value = ".")]
        dir: PathBuf,
        /// Overwrite an existing config.
        #[arg(long)]
        force: bool,
    },
    /// Execute an experiment and persist the run artifact.
    Run {
        /// Which experiment to run.
        #[arg(value_enum)]
        experiment: ExperimentArg,
        /// Path to the config file.
        #[arg(long)]
        config: PathBuf,
        /// Directory the run artifact is written to.
        #[arg(long)]
        run_dir: PathBuf,
        /// Override the config's backend mode.
        #[arg(long, value_enum)]
        backend: Option<BackendArg>,
        /// Override the config's rng seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Compute tables and figures for a run.
    Analyze {
        #[arg(long)]
        run_dir: PathBuf,
        /// LIWC-2007-format dictionary file.
        #[arg(long)]
        dic: PathBuf,
    },
    /// Compare after-writing scores of a non-interactive and an
    /// interactive run; the table goes to stdout.
    Compare {
        /// Non-interactive (control) run directory.
        #[arg(long)]
        run_a: PathBuf,
        /// Interactive (experimental) run directory.
        #[arg(long)]
        run_b: PathBuf,
    },
    /// Re-execute a recorded run from its replay store and verify the
    /// artifact is byte-identical.
    ReplayVerify {
        #[arg(long)]
        run_dir: PathBuf,
    },
}

fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Init { dir, force } => {
            let path = cli::cmd_init(&dir, force)?;
            println!("config={}", path.display());
            Ok(())
        }
        Command::Run {
            experiment,
            config,
            run_dir,
            backend,
            seed,
        } => {
            let summary = cli::cmd_run(
                experiment.into(),
                &config,
                &run_dir,
                backend.map(BackendMode::from),
                seed,
            )?;
            println!(
                "run_id={} run_dir={} agents={} stories={} failures={}",
                summary.run_id,
                run_dir.display(),
                summary.agents,
                summary.stories,
                summary.failures
            );
            Ok(())
        }
        Command::Analyze { run_dir, dic } => {
            let run_id = cli::cmd_analyze(&run_dir, &dic)?;
            println!("run_id={run_id} outputs={}/stats", run_dir.display());
            Ok(())
        }
        Command::Compare { run_a, run_b } => {
            let table = cli::cmd_compare(&run_a, &run_b)?;
            print!("{table}");
            Ok(())
        }
        Command::ReplayVerify { run_dir } => {
            let (artifact, verdict) = cli::cmd_replay_verify(&run_dir)?;
            match verdict {
                ReplayVerdict::Identical => {
                    println!("replay_verify=pass run_id={}", artifact.run_id);
                    Ok(())
                }
                ReplayVerdict::Diverged { reason } => {
                    println!("replay_verify=fail run_id={}", artifact.run_id);
                    Err(CliError {
                        code: cli::EXIT_DATA,
                        message: reason,
                    })
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(error) => {
            eprintln!("persona-lab: {error}");
            ExitCode::from(error.code as u8)
        }
    }
}
