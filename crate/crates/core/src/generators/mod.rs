//! Instance generators with known answers, built from the classical hard
//! problems the scheduling problem encodes, plus seeded random instances.

mod binpack;
mod edp;
mod random;
mod sat;

pub use binpack::{exhaustive_partition, gen_from_bin_packing, BinPackingInstance, P3_U, P3_V, P3_W};
pub use edp::{
    exhaustive_edp, exhaustive_vdp, gen_from_edp_dag, topological_order, vdp_edp_transform, DisjointnessTransform,
};
pub use random::{gen_random, RandomParams};
pub use sat::{gen_from_3sat, Cnf};

use std::fmt;

/// Known answer of a generated instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroundTruth {
    Feasible,
    Infeasible,
    Unknown,
}

impl GroundTruth {
    pub fn name(self) -> &'static str {
        match self {
            GroundTruth::Feasible => "feasible",
            GroundTruth::Infeasible => "infeasible",
            GroundTruth::Unknown => "unknown",
        }
    }

    /// `Some(true)` for feasible, `Some(false)` for infeasible.
    pub fn verdict(self) -> Option<bool> {
        match self {
            GroundTruth::Feasible => Some(true),
            GroundTruth::Infeasible => Some(false),
            GroundTruth::Unknown => None,
        }
    }
}

impl From<bool> for GroundTruth {
    fn from(feasible: bool) -> Self {
        if feasible {
            GroundTruth::Feasible
        } else {
            GroundTruth::Infeasible
        }
    }
}

impl fmt::Display for GroundTruth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for GroundTruth {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "feasible" => Ok(GroundTruth::Feasible),
            "infeasible" => Ok(GroundTruth::Infeasible),
            "unknown" => Ok(GroundTruth::Unknown),
            other => Err(format!("unknown ground truth `{other}`")),
        }
    }
}
