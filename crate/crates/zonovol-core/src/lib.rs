//! Exact mixed volumes and intrinsic volumes of zonotopes and V-polytopes,
//! brute-force oracles, and numeric certificates for reverse
//! Alexandrov-Fenchel inequalities and their stability bounds.

pub mod bodies;
pub mod cli;
pub mod error;
pub mod inequality;
pub mod kahan;
pub mod oracle;
pub mod linalg;
pub mod rng;
pub mod stability;
pub mod zonoid;

pub use error::{Error, Result};
