//! Lifespan solver for bidirected stars.

use super::xp::{solve_xp_k_with, XpOptions};
use crate::error::SolveError;
use crate::model::{Decision, Instance, Variant};

/// Decides a lifespan instance on a bidirected star with the state-graph
/// search restricted to states holding at most `4(n − 1)` walks on
/// leaves. Some optimal schedule never waits more than one step on a leaf
/// (see [`super::normalize_star_schedule`]), so at most four walks sit on
/// each leaf at any time.
pub fn solve_star_fpt(inst: &Instance) -> Result<Decision, SolveError> {
    if inst.graph().star_center().is_none() {
        return Err(SolveError::NotAStar);
    }
    if inst.variant() != Variant::Lifespan {
        return Err(SolveError::UnsupportedVariant(inst.variant().name()));
    }
    let opts = XpOptions { leaf_cap: Some(4 * (inst.n() - 1)), ..XpOptions::default() };
    solve_xp_k_with(inst, &opts)
}
