use std::path::PathBuf;

use thiserror::Error;

use crate::network::{EdgeId, VertexId};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExtractError {
    #[error("no segments")]
    NoSegments,
    #[error("snapping tolerance must be positive, got {0}")]
    InvalidEpsilon(f64),
    #[error("street {street}: {reason}")]
    InvalidStreet { street: u32, reason: String },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NetworkError {
    #[error("vertex {0} does not exist")]
    UnknownVertex(VertexId),
    #[error("edge {0} does not exist")]
    UnknownEdge(EdgeId),
    #[error("street {0} does not exist")]
    UnknownStreet(u32),
    #[error("edge weight must be positive and finite, got {0}")]
    InvalidWeight(f64),
    #[error("offset {offset} outside the open interval (0, {weight})")]
    OffsetOutOfRange { offset: f64, weight: f64 },
    #[error("more than one depot vertex")]
    MultipleDepots,
    #[error("vertex {0} is the depot")]
    IsDepot(usize),
    #[error("duplicate street id {0}")]
    DuplicateStreet(u32),
    #[error("self-loop at vertex {0}")]
    SelfLoop(VertexId),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DistanceError {
    #[error("vertex {0} does not exist")]
    UnknownVertex(VertexId),
    #[error("disconnected pair: no path from {from} to {to}")]
    DisconnectedPair { from: VertexId, to: VertexId },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DensityError {
    #[error("unknown {axis} level '{level}'")]
    UnknownLevel { axis: &'static str, level: String },
    #[error("multiplier {value} for {axis} level '{level}' outside [0, 1]")]
    MultiplierOutOfRange {
        axis: &'static str,
        level: String,
        value: f64,
    },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GenerateError {
    #[error("no sampleable street: all weights are zero")]
    NoSampleableStreet,
    #[error("street weights must be finite and non-negative, got {0}")]
    InvalidWeight(f64),
    #[error("network has no depot")]
    MissingDepot,
    #[error("invalid generation spec: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Density(#[from] DensityError),
    #[error(transparent)]
    Network(#[from] NetworkError),
}

/// Structural invalidity of a solution sequence, as opposed to infeasibility.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolutionError {
    #[error("expected {expected} depot separators, found {found}")]
    SeparatorCount { expected: usize, found: usize },
    #[error("expected {expected} routes, found {found}")]
    RouteCount { expected: usize, found: usize },
    #[error("customers visited more than once: {0:?}")]
    Duplicated(Vec<VertexId>),
    #[error("customers never visited: {0:?}")]
    Missing(Vec<VertexId>),
    #[error("ids that are not customers of the instance: {0:?}")]
    Unknown(Vec<VertexId>),
    #[error("vehicle count must be at least 1")]
    NoVehicles,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("structurally invalid solution: {0}")]
    Structural(#[from] SolutionError),
    #[error(transparent)]
    Distance(#[from] DistanceError),
    #[error("route is empty")]
    EmptyRoute,
    #[error("brute force limited to n + k - 1 <= {limit}, got {actual}")]
    TooLarge { limit: usize, actual: usize },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("more vehicles than customers ({vehicles} > {customers})")]
    MoreVehiclesThanCustomers { vehicles: usize, customers: usize },
    #[error("local search requires a feasible start solution")]
    InfeasibleStart,
    #[error("max_iterations must be at least 1")]
    NoIterations,
    #[error(transparent)]
    Eval(#[from] EvalError),
}

#[derive(Debug, Error, Clone, PartialEq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            message: message.into(),
        }
    }
}

#[derive(Debug, Error)]
pub enum BatchError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Generate(#[from] GenerateError),
    #[error("invalid batch configuration: {0}")]
    Config(String),
}
