//! Replication scheduling.
//!
//! Replication `i` always receives the seed derived from `(master, i)` and
//! results come back in index order, so reports do not depend on the
//! number of workers.

use serde::{Deserialize, Serialize};

use crate::model::SeedPlan;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Execution {
    Sequential,
    /// Rayon work-stealing; falls back to sequential without the `parallel` feature.
    #[default]
    Parallel,
}

/// Runs `f(index, seed)` for every replication index.
pub fn replicate<T, F>(replications: u64, master_seed: u64, exec: Execution, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64, u64) -> T + Sync + Send,
{
    let seed_of = |i: u64| SeedPlan::new(master_seed, i).seed();
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..replications).into_par_iter().map(|i| f(i, seed_of(i))).collect()
        }
        _ => (0..replications).map(|i| f(i, seed_of(i))).collect(),
    }
}
