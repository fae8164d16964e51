//! Baseline solvers: a round-robin nearest-neighbor construction and a
//! first-improvement local search over 2-opt, relocate and swap moves.

mod local_search;
mod nearest_neighbor;

use std::fmt;
use std::str::FromStr;
use std::time::Duration;

pub use local_search::{local_search_improve, MoveKind, SearchOutcome, TraceEntry};
pub use nearest_neighbor::nearest_neighbor_construct;

use crate::error::SolverError;
use crate::evaluate::{Evaluator, Objective};
use crate::instance::Instance;

/// Neighbor list length for relocate and swap candidates.
pub const DEFAULT_NEIGHBORS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Algorithm {
    NearestNeighbor,
    #[default]
    LocalSearch,
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "nearest_neighbor" | "nn" => Ok(Algorithm::NearestNeighbor),
            "local_search" | "ls" => Ok(Algorithm::LocalSearch),
            _ => Err(format!(
                "unknown algorithm '{s}' (expected nearest_neighbor or local_search)"
            )),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::NearestNeighbor => "nearest_neighbor",
            Algorithm::LocalSearch => "local_search",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub algorithm: Algorithm,
    /// Recorded for provenance; neither algorithm currently draws random
    /// numbers, so runs are deterministic regardless of the seed.
    pub seed: u64,
    /// Maximum number of accepted improving moves.
    pub max_iterations: usize,
    pub time_budget: Option<Duration>,
    pub objective: Objective,
    pub neighbors: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            algorithm: Algorithm::default(),
            seed: 0,
            max_iterations: 1_000_000,
            time_budget: None,
            objective: Objective::TotalLength,
            neighbors: DEFAULT_NEIGHBORS,
        }
    }
}

impl SolverConfig {
    fn validate(&self) -> Result<(), SolverError> {
        if self.max_iterations == 0 {
            Err(SolverError::NoIterations)
        } else {
            Ok(())
        }
    }
}

/// Runs the configured algorithm: construction, then local search when
/// requested. `observer` sees the starting point and every accepted
/// improvement.
pub fn solve<F>(instance: &Instance, config: &SolverConfig, mut observer: F) -> Result<SearchOutcome, SolverError>
where
    F: FnMut(&TraceEntry),
{
    config.validate()?;
    let start = nearest_neighbor_construct(instance, config)?;
    match config.algorithm {
        Algorithm::NearestNeighbor => {
            let report = Evaluator::new(instance).evaluate(&start, config.objective)?;
            let entry = TraceEntry {
                iteration: 0,
                kind: MoveKind::Start,
                cost: report.cost,
            };
            observer(&entry);
            Ok(SearchOutcome {
                cost: report.cost,
                trace: vec![entry],
                solution: start,
            })
        }
        Algorithm::LocalSearch => local_search_improve(instance, &start, config, observer),
    }
}
