//! Scenario documents and their validation.

use serde::{Deserialize, Serialize};

use qutrit::analysis::{CrossingSense, SectionSpec};
use qutrit::evolution::EvolutionParams;
use qutrit::state_space::{classify, pure_from_angles};
use qutrit::Vec8;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum EngineChoice {
    #[default]
    Auto,
    #[serde(alias = "closed_form")]
    #[value(alias = "closed_form")]
    Closed,
    Exact,
    Ode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputKind {
    Trajectory,
    Entropy,
    Poincare,
    Classification,
    Equilibria,
}

/// Either a Bloch vector or the pure-state angles `(α, β, γ, δ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InitialState {
    Vector([f64; 8]),
    Angles { angles: [f64; 4] },
}

impl InitialState {
    pub fn to_vec8(&self) -> Vec8 {
        match *self {
            InitialState::Vector(x) => Vec8::new(x),
            InitialState::Angles { angles: [a, b, g, d] } => pure_from_angles(a, b, g, d),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SectionConfig {
    pub normal: [f64; 8],
    #[serde(default)]
    pub point: [f64; 8],
    #[serde(default = "both")]
    pub direction: Direction,
}

fn both() -> Direction {
    Direction::Both
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Positive,
    Negative,
    Both,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default)]
    pub name: Option<String>,
    pub a: [f64; 8],
    #[serde(default)]
    pub b: [f64; 8],
    pub xi0: InitialState,
    pub t_end: f64,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub engine: EngineChoice,
    #[serde(default)]
    pub section: Option<SectionConfig>,
    #[serde(default = "default_outputs")]
    pub outputs: Vec<OutputKind>,
}

fn default_samples() -> usize {
    1001
}

fn default_outputs() -> Vec<OutputKind> {
    vec![OutputKind::Trajectory]
}

/// A validated scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub params: EvolutionParams,
    pub xi0: Vec8,
    pub t_end: f64,
    pub samples: usize,
    pub engine: EngineChoice,
    pub section: Option<SectionSpec>,
    /// Sorted, deduplicated.
    pub outputs: Vec<OutputKind>,
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("cannot parse scenario: {e}")))
    }

    pub fn validate(&self) -> Result<Scenario, CliError> {
        let bad = |m: String| Err(CliError::Config(m));
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return bad(format!("t_end must be positive and finite, got {}", self.t_end));
        }
        if self.samples < 2 {
            return bad(format!("samples must be at least 2, got {}", self.samples));
        }
        let params = EvolutionParams::new(Vec8::new(self.a), Vec8::new(self.b))
            .map_err(|e| CliError::Config(format!("generators: {e}")))?;
        let xi0 = self.xi0.to_vec8();
        if !xi0.is_finite() || !classify(&xi0).is_valid() {
            return bad(format!("xi0 {:?} is not a state", xi0.as_array()));
        }
        let section = match self.section {
            None => None,
            Some(s) => {
                let sense = match s.direction {
                    Direction::Positive => CrossingSense::Positive,
                    Direction::Negative => CrossingSense::Negative,
                    Direction::Both => CrossingSense::Both,
                };
                Some(
                    SectionSpec::new(Vec8::new(s.normal), Vec8::new(s.point), sense)
                        .map_err(|e| CliError::Config(format!("section: {e}")))?,
                )
            }
        };
        let mut outputs = self.outputs.clone();
        outputs.sort();
        outputs.dedup();
        if outputs.is_empty() {
            return bad("no outputs requested".into());
        }
        Ok(Scenario {
            name: self.name.clone().unwrap_or_else(|| "scenario".into()),
            params,
            xi0,
            t_end: self.t_end,
            samples: self.samples,
            engine: self.engine,
            section,
            outputs,
        })
    }
}
