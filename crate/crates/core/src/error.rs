//! Error types shared across the crate.

use crate::model::{Time, VertexId};
use thiserror::Error;

/// Problems detected while constructing graphs and instances.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: VertexId, n: usize },
    #[error("self-loop on vertex {0}")]
    SelfLoop(VertexId),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(VertexId, VertexId),
    #[error("demand ({u}, {v}, {t}) does not lie on an edge of the graph")]
    DemandNotEdge { u: VertexId, v: VertexId, t: Time },
    #[error("demand ({u}, {v}, {t}) has time step 0; time steps start at 1")]
    DemandTimeZero { u: VertexId, v: VertexId, t: Time },
    #[error("duplicate demand ({u}, {v}, {t})")]
    DuplicateDemand { u: VertexId, v: VertexId, t: Time },
    #[error("the {0} variant requires a bound h")]
    MissingBound(&'static str),
    #[error("the unconstrained variant takes no bound h")]
    UnexpectedBound,
}

/// A walk that violates the unit-step expanded form.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WalkError {
    #[error("a walk needs at least one time-vertex")]
    Empty,
    #[error("time steps must increase by exactly one between entries {index} and {next}", next = index + 1)]
    NonUnitStep { index: usize },
    #[error("move times must be strictly increasing and not before the walk start")]
    NonStrictTimes,
    #[error("move at time {time} departs from {from} but the walk is at {at}")]
    BrokenChain { time: Time, from: VertexId, at: VertexId },
    #[error("walk end time precedes its last move")]
    EndBeforeLastMove,
    #[error("walk stays on vertex {0} while recorded as a move")]
    DegenerateMove(VertexId),
}

/// A schedule that references the graph in an impossible way.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructuralError {
    #[error("walk {walk} visits vertex {vertex}, which is not in the graph")]
    VertexOutOfRange { walk: usize, vertex: VertexId },
    #[error("walk {walk} moves along ({from}, {to}) at time {time}, which is not an edge")]
    NonEdgeMove { walk: usize, from: VertexId, to: VertexId, time: Time },
}

/// Failures of the network builders.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExpansionError {
    #[error("uncompressed expansion needs {layers} layers, above the cap of {cap}")]
    TooManyLayers { layers: u64, cap: u64 },
    #[error("gap threshold must be at least 1")]
    ZeroGamma,
}

/// Failures of the constructive gap routing.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RoutingError {
    #[error("no route from {0} to {1}")]
    NoRoute(VertexId, VertexId),
    #[error("gap of {available} steps is shorter than the {needed} steps this strategy needs")]
    GapTooShort { available: u64, needed: u64 },
}

/// Errors raised by the solvers. None of these describe an infeasible
/// instance; infeasibility is a regular `Decision::No`.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("solver does not handle the {0} variant")]
    UnsupportedVariant(&'static str),
    #[error("graph is not a bidirected star")]
    NotAStar,
    #[error("expected a schedule satisfying the input contract: {0}")]
    BadInput(String),
    #[error(transparent)]
    Expansion(#[from] ExpansionError),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

/// Errors raised by instance generators.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("clause {0} has more than three literals")]
    ClauseTooLong(usize),
    #[error("literal {0} is invalid")]
    BadLiteral(i64),
    #[error("input graph contains a cycle")]
    Cyclic,
    #[error("terminal pair {0} has identical endpoints")]
    DegeneratePair(usize),
    #[error("item sizes sum to {sum}, above bins * capacity = {total}")]
    Oversized { sum: u64, total: u64 },
    #[error("item sizes must be positive")]
    ZeroSize,
    #[error("requested {k} copies but the graph has only {edges} edges")]
    TooManyPairs { k: usize, edges: usize },
    #[error("invalid parameters: {0}")]
    BadParameters(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Failures of the star schedule normalization.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormalizeError {
    #[error("graph is not a bidirected star")]
    NotAStar,
    #[error("normalization needs a lifespan-bounded instance")]
    NotLifespan,
    #[error("input schedule is invalid: {0}")]
    InvalidInput(String),
    #[error("normalization failed: {0}")]
    Internal(String),
}
