//! Running time of (approximate) gradient descent on sparse Erdős–Rényi
//! graphs with i.i.d. uniform vertex costs, and the record-process and
//! Poisson formulas that predict it.

pub mod analytics;
pub mod error;
pub mod exec;
pub mod graph;
pub mod harness;
pub mod model;
pub mod poisson;
pub mod record;
pub mod search;
pub mod stats;

pub use error::{Error, Result};
pub use model::{derive_params, CostStream, ModelParams, SeedPlan};
