//! Scenario execution: engine selection, cross-check, analysis and output.

use std::path::{Path, PathBuf};

use serde::Serialize;

use qutrit::analysis::{classify_with_section, entropy_series, poincare, Crossing, SectionSpec, TrajectoryClass};
use qutrit::evolution::{
    evolve_pointwise, integrate, propagate_exact, uniform_grid, CaseTag, Engine, IntegrateOptions, Trajectory,
    TrajectoryMeta,
};
use qutrit::stationary::{catalog, numeric_equilibria, stability_report, Equilibrium, SearchOptions, StabilityReport};

use crate::config::{EngineChoice, OutputKind, Scenario, ScenarioConfig};
use crate::error::CliError;
use crate::output::{crossings_csv, entropy_csv, to_json, trajectory_csv, write_atomic};

pub const CROSS_CHECK_POINTS: usize = 8;
pub const CROSS_CHECK_TOL: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    pub out_dir: PathBuf,
    pub format: Format,
    pub seed: u64,
    pub engine: Option<EngineChoice>,
    /// Replaces the scenario's own output list.
    pub outputs: Option<Vec<OutputKind>>,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            out_dir: PathBuf::from("out"),
            format: Format::Csv,
            seed: 1,
            engine: None,
            outputs: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossCheck {
    pub points: usize,
    /// Largest `‖ξ(t_k) − propagate_exact(ξ₀, t_k)‖`.
    pub max_discrepancy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquilibriumRecord {
    #[serde(flatten)]
    pub equilibrium: Equilibrium,
    pub report: Option<StabilityReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunMetadata {
    pub name: String,
    pub case: CaseTag,
    pub engine: Engine,
    pub t_end: f64,
    pub samples: usize,
    pub cross_check: CrossCheck,
    pub trajectory: TrajectoryMeta,
    pub files: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub metadata: RunMetadata,
    pub trajectory: Trajectory,
    pub entropy: Option<Vec<f64>>,
    pub crossings: Option<Vec<Crossing>>,
    pub classification: Option<TrajectoryClass>,
    pub equilibria: Option<Vec<EquilibriumRecord>>,
}

fn resolve_engine(choice: EngineChoice, case: CaseTag) -> Result<Engine, CliError> {
    Ok(match choice {
        EngineChoice::Auto if case != CaseTag::General => Engine::ClosedForm,
        EngineChoice::Auto | EngineChoice::Ode => Engine::Ode,
        EngineChoice::Closed if case == CaseTag::General => {
            return Err(CliError::Config("closed-form engine requested for the general case".into()))
        }
        EngineChoice::Closed => Engine::ClosedForm,
        EngineChoice::Exact => Engine::Exact,
    })
}

fn evolve(s: &Scenario, engine: Engine) -> Result<Trajectory, CliError> {
    Ok(match engine {
        Engine::Ode => integrate(
            &s.xi0,
            &s.params,
            s.t_end,
            &IntegrateOptions {
                samples: s.samples,
                ..Default::default()
            },
        )?,
        pointwise => evolve_pointwise(&s.xi0, &s.params, &uniform_grid(s.t_end, s.samples), pointwise)?,
    })
}

fn cross_check(s: &Scenario, traj: &Trajectory) -> Result<CrossCheck, CliError> {
    let n = traj.len();
    let count = CROSS_CHECK_POINTS.min(n);
    let mut worst: f64 = 0.0;
    for j in 0..count {
        let k = if count == 1 { 0 } else { j * (n - 1) / (count - 1) };
        let oracle = propagate_exact(&s.xi0, &s.params, traj.times[k])?;
        worst = worst.max(oracle.dist(&traj.states[k]));
    }
    Ok(CrossCheck {
        points: count,
        max_discrepancy: worst,
    })
}

fn equilibria(s: &Scenario, seed: u64) -> Result<Vec<EquilibriumRecord>, CliError> {
    let list = if s.params.case_tag() == CaseTag::General {
        numeric_equilibria(
            &s.params,
            &SearchOptions {
                seed,
                ..Default::default()
            },
        )
    } else {
        catalog(&s.params)?
    };
    Ok(list
        .into_iter()
        .map(|e| EquilibriumRecord {
            report: stability_report(&e.xi, &s.params).ok(),
            equilibrium: e,
        })
        .collect())
}

/// Evolves and analyses a validated scenario without touching the disk.
pub fn compute(s: &Scenario, opts: &RunOptions) -> Result<RunOutcome, CliError> {
    let outputs = opts.outputs.clone().unwrap_or_else(|| s.outputs.clone());
    let engine = resolve_engine(opts.engine.unwrap_or(s.engine), s.params.case_tag())?;
    let trajectory = evolve(s, engine)?;
    let check = cross_check(s, &trajectory)?;
    let wants = |k| outputs.contains(&k);

    let entropy = wants(OutputKind::Entropy).then(|| entropy_series(&trajectory));
    let crossings = if wants(OutputKind::Poincare) {
        let last = trajectory.last().copied().unwrap_or(s.xi0);
        match s.section.or_else(|| SectionSpec::transversal(&last, &s.params)) {
            Some(spec) => Some(poincare(&trajectory, &s.params, &spec)?),
            None => Some(Vec::new()),
        }
    } else {
        None
    };
    let classification = if wants(OutputKind::Classification) {
        Some(classify_with_section(&trajectory, &s.params, s.section.as_ref())?)
    } else {
        None
    };
    let equilibria = if wants(OutputKind::Equilibria) {
        Some(equilibria(s, opts.seed)?)
    } else {
        None
    };

    let ext = match opts.format {
        Format::Csv => "csv",
        Format::Json => "json",
    };
    let mut files = Vec::new();
    if wants(OutputKind::Trajectory) {
        files.push(format!("trajectory.{ext}"));
    }
    if entropy.is_some() {
        files.push(format!("entropy.{ext}"));
    }
    if crossings.is_some() {
        files.push(format!("poincare.{ext}"));
    }
    if classification.is_some() {
        files.push("classification.json".into());
    }
    if equilibria.is_some() {
        files.push("equilibria.json".into());
    }
    files.push("metadata.json".into());

    Ok(RunOutcome {
        metadata: RunMetadata {
            name: s.name.clone(),
            case: s.params.case_tag(),
            engine,
            t_end: s.t_end,
            samples: s.samples,
            cross_check: check,
            trajectory: trajectory.meta,
            files,
        },
        trajectory,
        entropy,
        crossings,
        classification,
        equilibria,
    })
}

#[derive(Serialize)]
struct TrajectoryJson<'a> {
    times: &'a [f64],
    states: &'a [qutrit::Vec8],
    #[serde(skip_serializing_if = "Option::is_none")]
    entropy: Option<&'a [f64]>,
}

#[derive(Serialize)]
struct EntropyJson<'a> {
    times: &'a [f64],
    entropy: &'a [f64],
}

pub fn write_outcome(o: &RunOutcome, dir: &Path, format: Format) -> Result<(), CliError> {
    let tr = &o.trajectory;
    for file in &o.metadata.files {
        let body = match file.split_once('.').map(|(stem, _)| stem) {
            Some("trajectory") => match format {
                Format::Csv => trajectory_csv(tr, o.entropy.as_deref()),
                Format::Json => to_json(&TrajectoryJson {
                    times: &tr.times,
                    states: &tr.states,
                    entropy: o.entropy.as_deref(),
                }),
            },
            Some("entropy") => {
                let s = o.entropy.as_deref().unwrap_or_default();
                match format {
                    Format::Csv => entropy_csv(&tr.times, s),
                    Format::Json => to_json(&EntropyJson {
                        times: &tr.times,
                        entropy: s,
                    }),
                }
            }
            Some("poincare") => {
                let c = o.crossings.as_deref().unwrap_or_default();
                match format {
                    Format::Csv => crossings_csv(c),
                    Format::Json => to_json(&c),
                }
            }
            Some("classification") => to_json(&o.classification),
            Some("equilibria") => to_json(&o.equilibria),
            _ => to_json(&o.metadata),
        };
        write_atomic(dir, file, &body)?;
    }
    Ok(())
}

/// Validates, runs, writes every output, then reports a failed cross-check.
pub fn run_scenario(config: &ScenarioConfig, opts: &RunOptions) -> Result<RunOutcome, CliError> {
    let s = config.validate()?;
    let outcome = compute(&s, opts)?;
    write_outcome(&outcome, &opts.out_dir, opts.format)?;
    let d = outcome.metadata.cross_check.max_discrepancy;
    if !(d <= CROSS_CHECK_TOL) {
        return Err(CliError::CrossCheck {
            discrepancy: d,
            tolerance: CROSS_CHECK_TOL,
        });
    }
    Ok(outcome)
}

/// Runs `(subdirectory, config)` jobs on worker threads, each into
/// `out_dir/<subdirectory>`.
pub fn run_batch(jobs: &[(String, ScenarioConfig)], opts: &RunOptions) -> Vec<Result<RunOutcome, CliError>> {
    std::thread::scope(|scope| {
        let handles: Vec<_> = jobs
            .iter()
            .map(|(dir, c)| {
                let sub = RunOptions {
                    out_dir: opts.out_dir.join(dir),
                    ..opts.clone()
                };
                scope.spawn(move || run_scenario(c, &sub))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("scenario thread panicked")).collect()
    })
}
