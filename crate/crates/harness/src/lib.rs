//! Experiment harness: configuration files, runners, result files and the
//! bundled acceptance suite.

pub mod config;
pub mod output;
pub mod run;
pub mod suite;
pub mod verdict;

pub use config::{ExperimentConfig, ExperimentKind};
pub use output::{write_record, Summary, SCHEMA_VERSION};
pub use run::{run_config, pet_trace_config, ResultRecord, RunOptions};
pub use suite::{bundled_configs, known_tags, run_suite, BundledConfig, SuiteReport};
pub use verdict::{evaluate, Verdict};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("parse error{}: {message}", at_line(.line))]
    Parse { line: Option<usize>, message: String },
    #[error("validation error{}: {message}", at_line(.line))]
    Validation { line: Option<usize>, message: String },
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("runtime error: {0}")]
    Runtime(String),
    #[error("suite error: {0}")]
    Suite(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

fn at_line(line: &Option<usize>) -> String {
    line.map(|l| format!(" at line {l}")).unwrap_or_default()
}

/// Process exit codes.
pub mod exit {
    pub const PASS: i32 = 0;
    pub const FAIL: i32 = 1;
    pub const INVALID: i32 = 2;
    pub const BUDGET: i32 = 3;
    pub const RUNTIME: i32 = 4;
}

impl HarnessError {
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Parse { .. } | HarnessError::Validation { .. } => exit::INVALID,
            HarnessError::Budget(_) => exit::BUDGET,
            HarnessError::Runtime(_) | HarnessError::Suite(_) | HarnessError::Io(_) => exit::RUNTIME,
        }
    }
}

macro_rules! budget_aware {
    ($($ty:path => [$($budget:pat),*]),* $(,)?) => {
        $(impl From<$ty> for HarnessError {
            fn from(e: $ty) -> Self {
                #[allow(unreachable_patterns)]
                match &e {
                    $($budget => HarnessError::Budget(e.to_string()),)*
                    _ => HarnessError::Runtime(e.to_string()),
                }
            }
        })*
    };
}

use ergoring_core::algebra::AlgebraError;
use ergoring_core::averages::AverageError;
use ergoring_core::equidist::EquidistError;
use ergoring_core::pet::PetError;
use ergoring_core::polynomials::PolyError;
use ergoring_core::seminorms::SeminormError;
use ergoring_core::systems::SystemError;

budget_aware! {
    AlgebraError => [AlgebraError::Budget(_)],
    SystemError => [SystemError::Budget(_), SystemError::Algebra(AlgebraError::Budget(_))],
    PolyError => [PolyError::Algebra(AlgebraError::Budget(_))],
    AverageError => [
        AverageError::Budget(_),
        AverageError::System(SystemError::Budget(_)),
        AverageError::Algebra(AlgebraError::Budget(_))
    ],
    SeminormError => [
        SeminormError::Budget(_),
        SeminormError::System(SystemError::Budget(_)),
        SeminormError::Algebra(AlgebraError::Budget(_))
    ],
    EquidistError => [EquidistError::Algebra(AlgebraError::Budget(_))],
    PetError => [PetError::Budget { .. }],
}
