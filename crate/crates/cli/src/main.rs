use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qutrit_cli::output::{to_json, write_atomic};
use qutrit_cli::presets::{preset, PRESETS};
use qutrit_cli::{run_batch, verify, CliError, EngineChoice, Format, OutputKind, RunOptions, ScenarioConfig};

#[derive(Parser)]
#[command(name = "qutrit", version, about = "Linear and nonlinear qutrit evolution on the Bloch vector")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ScenarioArgs {
    /// Scenario JSON; repeat to run several in parallel.
    #[arg(long, value_name = "PATH")]
    config: Vec<PathBuf>,
    /// Bundled figure scenario (see `presets list`).
    #[arg(long, conflicts_with = "config")]
    preset: Option<String>,
    #[arg(long, value_enum)]
    engine: Option<EngineChoice>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve and write the outputs listed in the scenario.
    Simulate(ScenarioArgs),
    /// Equilibria with stability reports.
    Equilibria(ScenarioArgs),
    /// Poincaré section crossings.
    Poincare(ScenarioArgs),
    /// Entropy time series.
    Entropy(ScenarioArgs),
    /// Trajectory classification.
    Classify(ScenarioArgs),
    /// Algebraic identity suite on seeded random draws.
    Verify {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        /// Also write identities.json here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bundled presets.
    Presets {
        #[command(subcommand)]
        action: PresetAction,
    },
}

#[derive(Subcommand)]
enum PresetAction {
    List,
}

fn load(args: &ScenarioArgs) -> Result<Vec<(String, ScenarioConfig)>, CliError> {
    if let Some(name) = &args.preset {
        let c = preset(name).ok_or_else(|| CliError::Config(format!("unknown preset {name:?}")))?;
        return Ok(vec![(String::new(), c)]);
    }
    if args.config.is_empty() {
        return Err(CliError::Config("one of --config or --preset is required".into()));
    }
    let single = args.config.len() == 1;
    args.config
        .iter()
        .map(|path| {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            Ok((if single { String::new() } else { stem }, ScenarioConfig::from_json(&text)?))
        })
        .collect()
}

fn scenarios(args: &ScenarioArgs, outputs: Option<Vec<OutputKind>>) -> Result<(), CliError> {
    let jobs = load(args)?;
    let opts = RunOptions {
        out_dir: args.out.clone(),
        format: args.format,
        seed: args.seed,
        engine: args.engine,
        outputs,
    };
    let mut first_err = None;
    for ((dir, _), result) in jobs.iter().zip(run_batch(&jobs, &opts)) {
        let target = args.out.join(dir);
        match result {
            Ok(o) => {
                let c = o.metadata.cross_check.max_discrepancy;
                println!("{}: {:?}, engine {:?}, cross-check {c:e}", target.display(), o.metadata.case, o.metadata.engine);
                if let Some(cls) = &o.classification {
                    println!("  classification {:?}", cls.label);
                }
            }
            Err(e) => {
                eprintln!("{}: {e}", target.display());
                let worse = first_err.as_ref().is_none_or(|f: &CliError| e.exit_code() > f.exit_code());
                if worse {
                    first_err = Some(e);
                }
            }
        }
    }
    first_err.map_or(Ok(()), Err)
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    use OutputKind::*;
    match cli.command {
        Command::Simulate(a) => scenarios(&a, None),
        Command::Equilibria(a) => scenarios(&a, Some(vec![Equilibria])),
        Command::Poincare(a) => scenarios(&a, Some(vec![Poincare])),
        Command::Entropy(a) => scenarios(&a, Some(vec![Entropy])),
        Command::Classify(a) => scenarios(&a, Some(vec![Classification])),
        Command::Verify { seed, count, out } => {
            let result = verify(seed, count);
            let report = match &result {
                Ok(r) => Some(r.clone()),
                Err(CliError::IdentityFailure(_)) => qutrit::identities::verify_identities(seed, count).ok(),
                Err(_) => None,
            };
            if let Some(r) = &report {
                print!("{r}");
                if let Some(dir) = out {
                    write_atomic(&dir, "identities.json", &to_json(r))?;
                }
            }
            result.map(|_| ())
        }
        Command::Presets { action: PresetAction::List } => {
            for (name, about) in PRESETS {
                println!("{name:<12} {about}");
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
