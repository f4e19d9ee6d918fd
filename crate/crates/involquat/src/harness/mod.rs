//! Deterministic instance generation, the exhaustive GF(2) oracle, fixture
//! suites for the worked counterexamples, and the fuzz driver behind the CLI.

pub mod fixtures;
pub mod fuzz;
pub mod generate;
pub mod oracle;

pub use fixtures::{verify_examples, ExampleReport};
pub use fuzz::{run_fuzz, FuzzKind, FuzzReport};
pub use generate::{random_square_central, InstanceGenerator, InstanceKind};
pub use oracle::brute_force_quat_oracle;
