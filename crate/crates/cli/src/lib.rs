//! Scenario files, figure presets and output writers around the `qutrit` engines.

pub mod config;
pub mod error;
pub mod output;
pub mod presets;
pub mod run;

pub use config::{EngineChoice, OutputKind, Scenario, ScenarioConfig};
pub use error::CliError;
pub use run::{compute, run_batch, run_scenario, Format, RunOptions, RunOutcome};

use qutrit::identities::{verify_identities, IdentityReport};

/// Identity suite on `count` seeded draws; failures map to a nonzero exit.
pub fn verify(seed: u64, count: usize) -> Result<IdentityReport, CliError> {
    if count == 0 {
        return Err(CliError::Config("count must be at least 1".into()));
    }
    let report = verify_identities(seed, count)?;
    if report.all_passed() {
        Ok(report)
    } else {
        Err(CliError::IdentityFailure(report.worst()))
    }
}
