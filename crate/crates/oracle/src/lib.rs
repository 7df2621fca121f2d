//! Independent checks for `condcompat`: a brute-force compatibility decider,
//! seeded instance generators and the worked examples with their reference
//! values.

mod brute;
mod error;
pub mod fixtures;
mod generate;

pub use brute::{brute_force_compatible, brute_force_joint_optimum, BruteForceResult, MAX_DIM, MAX_JOINT_CELLS};
pub use error::OracleError;
pub use generate::{
    perturb_to_incompatible, random_compatible_pair, random_independent_pair, random_joint, random_zero_pattern,
    InstanceSpec, ZeroPattern,
};
