//! Temporally edge disjoint schedule completion.
//!
//! Given a directed graph, a set of demanded temporal edges `(u, v, t)` and
//! an integer `k`, decide whether at most `k` strict temporal walks cover
//! every demand without two walks sharing a temporal edge. The constrained
//! variants additionally bound the number of moves (length) or the elapsed
//! time (lifespan) of every walk.
//!
//! ```
//! use tedsc::constrained::solve_fpt_kh;
//! use tedsc::{is_valid_schedule, Decision, Demand, DirectedGraph, Instance, Variant};
//!
//! # fn main() -> Result<(), Box<dyn std::error::Error>> {
//! let g = DirectedGraph::bidirected(3, [(0, 1), (1, 2)])?;
//! let demands = [Demand::new(0, 1, 1), Demand::new(1, 2, 3)];
//! let inst = Instance::new(g, demands, 1, Some(2), Variant::Length)?;
//! let Decision::Yes(schedule) = solve_fpt_kh(&inst)? else { panic!("one walk suffices") };
//! assert!(is_valid_schedule(&inst, &schedule));
//! # Ok(())
//! # }
//! ```

pub mod approx;
pub mod constrained;
pub mod corpus;
pub mod edp;
pub mod error;
pub mod expansion;
pub mod flow;
pub mod generators;
pub mod model;
pub mod oracle;
pub mod unconstrained;
pub mod validate;

pub use error::*;
pub use model::{
    one_walk_per_demand, Decision, Demand, DirectedGraph, DistanceMatrix, Instance, Move, Schedule, TemporalWalk,
    Time, Variant, VertexId, WalkBuilder,
};
pub use validate::{is_valid_schedule, preprocess, validate_schedule, PreDecision, ValidationReport, Violation};
