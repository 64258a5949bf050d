//! Exact solvers for the length- and lifespan-bounded variants, and the
//! schedule normalization used on stars.

mod fpt;
mod normalize;
mod star;
mod xp;

pub use fpt::{solve_fpt_kh, solve_fpt_kh_with, FptOptions};
pub use normalize::{allocate_incoming, normalize_star_schedule, Reassignment};
pub use star::solve_star_fpt;
pub use xp::{solve_xp_k, solve_xp_k_with, XpOptions};

use crate::model::{DirectedGraph, Time, VertexId, WalkBuilder};

/// Moves `w` from its position at time `a` to `to` at time `b` through an
/// idle interval, along a shortest path that departs at `a + slot·(n − 1)`.
/// Walks with distinct slots below `k` never share a temporal edge when
/// `b − a ≥ k·(n − 1)`.
pub(crate) fn cross_gap(w: &mut WalkBuilder, graph: &DirectedGraph, to: VertexId, (a, b): (Time, Time), slot: usize) {
    debug_assert_eq!(w.now(), a);
    let from = w.position();
    if from != to {
        let path = graph.shortest_path(from, to).expect("gap edges join reachable pairs only");
        w.wait_until(a + (slot * graph.n().saturating_sub(1)) as u64).follow(&path);
    }
    w.wait_until(b);
}
