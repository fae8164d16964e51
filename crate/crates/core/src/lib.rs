//! Benchmark instances for the mail-delivery vehicle routing problem on
//! real street networks.
//!
//! The pipeline runs from street polylines to a routable graph
//! ([`extract`]), through density-weighted delivery sampling
//! ([`generator`]), to instance files ([`format`]). Solutions are checked
//! and scored by [`evaluate`], and [`heuristics`] provides reference
//! solvers.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod batch;
pub mod density;
pub mod distance;
pub mod error;
pub mod evaluate;
pub mod extract;
pub mod fixtures;
pub mod format;
pub mod generator;
pub mod geometry;
pub mod grid;
pub mod heuristics;
pub mod instance;
pub mod network;
pub mod render;
pub mod rng;
pub mod solution;

pub use batch::{batch_generate, BatchConfig, Preset};
pub use density::{density, PenaltyTable, Region, StreetAttributes, StreetType, Zone};
pub use distance::DistanceOracle;
pub use error::{
    BatchError, DensityError, DistanceError, EvalError, ExtractError, GenerateError, NetworkError,
    ParseError, SolutionError, SolverError,
};
pub use evaluate::{evaluate, Cost, Evaluator, Objective, RouteReport};
pub use extract::{extract_network, StreetPolyline};
pub use generator::{generate, GenerationSpec};
pub use geometry::Point;
pub use grid::{generate_grid_network, GridStyle};
pub use heuristics::{solve, Algorithm, SolverConfig};
pub use instance::{Customer, Instance, TimeWindow};
pub use network::{StreetNetwork, VertexId, VertexKind};
pub use render::{render_svg, RenderStyle};
pub use solution::{Solution, Token};
