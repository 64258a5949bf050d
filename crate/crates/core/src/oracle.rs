//! Exhaustive ground truth for tiny instances.
//!
//! The search walks forward through time. At each step every live walk
//! waits or takes one move, no temporal edge is used twice, and each demand
//! of the step is covered either by a live walk or by a new walk that
//! starts on it. Searching only walks that start and end with a demand
//! loses nothing: trimming a walk to its first and last demand keeps every
//! demand covered, keeps the schedule disjoint and shrinks both measures.
//! Walk identities are irrelevant, so states are multisets of
//! `(position, budget)` and failing states are memoized.

use crate::model::{one_walk_per_demand, Decision, Instance, Move, Schedule, TemporalWalk, Time, Variant, VertexId};
use crate::validate::validate_schedule;
use std::collections::HashSet;

/// Hard limits on the instances the oracle accepts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleCaps {
    pub max_vertices: usize,
    /// Largest `Λ − t_min + 1`, the number of time steps carrying moves.
    pub max_span: u64,
    pub max_demands: usize,
    pub max_walks: usize,
}

impl Default for OracleCaps {
    fn default() -> Self {
        Self { max_vertices: 4, max_span: 10, max_demands: 5, max_walks: 4 }
    }
}

impl OracleCaps {
    /// Reason why `inst` lies beyond the caps, if it does. The walk cap
    /// only applies when `k < |D|`, since otherwise the answer is trivial.
    pub fn refusal(&self, inst: &Instance) -> Option<String> {
        let span = inst.first_time().map_or(0, |t| inst.lambda() - t + 1);
        if inst.n() > self.max_vertices {
            Some(format!("{} vertices exceed the oracle cap of {}", inst.n(), self.max_vertices))
        } else if span > self.max_span {
            Some(format!("time span {span} exceeds the oracle cap of {}", self.max_span))
        } else if inst.demands().len() > self.max_demands {
            Some(format!("{} demands exceed the oracle cap of {}", inst.demands().len(), self.max_demands))
        } else if inst.k() > self.max_walks && inst.k() < inst.demands().len() {
            Some(format!("k = {} exceeds the oracle cap of {}", inst.k(), self.max_walks))
        } else {
            None
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Live {
    pos: VertexId,
    /// Start time for the lifespan variant, moves made for the length
    /// variant, zero otherwise.
    meta: u64,
    id: usize,
}

/// Time, sorted (position, meta) pairs of the live walks and the number of
/// walks started so far.
type SearchState = (Time, Vec<(VertexId, u64)>, usize);

struct Search<'a> {
    inst: &'a Instance,
    h: u64,
    variant: Variant,
    trail: Vec<Vec<Move>>,
    failed: HashSet<SearchState>,
}

impl Search<'_> {
    fn can_move(&self, w: &Live, t: Time) -> bool {
        match self.variant {
            Variant::Unconstrained => true,
            Variant::Lifespan => t + 1 - w.meta <= self.h,
            Variant::Length => w.meta < self.h,
        }
    }

    fn after_move(&self, w: &Live) -> u64 {
        match self.variant {
            Variant::Length => w.meta + 1,
            _ => w.meta,
        }
    }

    fn fresh_meta(&self, t: Time) -> Option<u64> {
        match self.variant {
            Variant::Unconstrained => Some(0),
            Variant::Lifespan => (self.h >= 1).then_some(t),
            Variant::Length => (self.h >= 1).then_some(1),
        }
    }

    fn run(&mut self, mut t: Time, live: Vec<Live>) -> bool {
        let live: Vec<Live> = live.into_iter().filter(|w| self.can_move(w, t)).collect();
        if live.is_empty() {
            match self.inst.demands().iter().find(|d| d.t >= t) {
                Some(d) => t = d.t,
                None => return true,
            }
        }
        if t > self.inst.lambda() {
            return true;
        }
        let spawned = self.trail.len();
        let mut shape: Vec<(VertexId, u64)> = live.iter().map(|w| (w.pos, w.meta)).collect();
        shape.sort_unstable();
        let key = (t, shape, spawned);
        if self.failed.contains(&key) {
            return false;
        }
        let mut used = Vec::with_capacity(live.len());
        let mut next = Vec::with_capacity(live.len());
        if self.choose(t, &live, 0, &mut used, &mut next) {
            return true;
        }
        self.failed.insert(key);
        false
    }

    /// Picks a wait or a move for `live[i..]`, then spawns walks for the
    /// demands of step `t` that remain uncovered.
    fn choose(
        &mut self,
        t: Time,
        live: &[Live],
        i: usize,
        used: &mut Vec<(VertexId, VertexId)>,
        next: &mut Vec<Live>,
    ) -> bool {
        if i == live.len() {
            return self.spawn_and_continue(t, used, next);
        }
        let w = live[i];
        for &to in self.inst.graph().out_neighbors(w.pos) {
            if used.contains(&(w.pos, to)) {
                continue;
            }
            used.push((w.pos, to));
            next.push(Live { pos: to, meta: self.after_move(&w), id: w.id });
            self.trail[w.id].push(Move { time: t, from: w.pos, to });
            if self.choose(t, live, i + 1, used, next) {
                return true;
            }
            self.trail[w.id].pop();
            next.pop();
            used.pop();
        }
        next.push(w);
        if self.choose(t, live, i + 1, used, next) {
            return true;
        }
        next.pop();
        false
    }

    fn spawn_and_continue(&mut self, t: Time, used: &[(VertexId, VertexId)], next: &[Live]) -> bool {
        let uncovered: Vec<_> =
            self.inst.demands_at(t).iter().filter(|d| !used.contains(&(d.u, d.v))).copied().collect();
        if self.trail.len() + uncovered.len() > self.inst.k() {
            return false;
        }
        let mut live = next.to_vec();
        if !uncovered.is_empty() {
            let Some(meta) = self.fresh_meta(t) else { return false };
            for d in &uncovered {
                live.push(Live { pos: d.v, meta, id: self.trail.len() });
                self.trail.push(vec![Move { time: t, from: d.u, to: d.v }]);
            }
        }
        if self.run(t + 1, live) {
            return true;
        }
        self.trail.truncate(self.trail.len() - uncovered.len());
        false
    }
}

/// Decides `inst` by exhaustive search, or answers UNKNOWN beyond the
/// default caps.
pub fn oracle_decide(inst: &Instance) -> Decision {
    oracle_decide_with(inst, &OracleCaps::default())
}

/// [`oracle_decide`] with explicit caps.
pub fn oracle_decide_with(inst: &Instance, caps: &OracleCaps) -> Decision {
    if inst.demands().len() <= inst.k() {
        return Decision::Yes(one_walk_per_demand(inst));
    }
    if let Some(reason) = caps.refusal(inst) {
        return Decision::Unknown(reason);
    }
    let mut search = Search {
        inst,
        h: inst.h().unwrap_or(0),
        variant: inst.variant(),
        trail: Vec::new(),
        failed: HashSet::new(),
    };
    let start = inst.first_time().expect("k < |D| implies a demand");
    if !search.run(start, Vec::new()) {
        return Decision::No;
    }
    let walks = search.trail.into_iter().map(|moves| {
        let (first, last) = (moves[0], *moves.last().unwrap());
        TemporalWalk::new(first.from, first.time, moves, last.time + 1).expect("search emits chained moves")
    });
    let sched = Schedule::new(walks);
    let report = validate_schedule(inst, &sched).expect("search stays on graph edges");
    assert!(report.is_valid(), "oracle witness fails validation: {:?}", report.first_violation());
    Decision::Yes(sched)
}

/// Fewest walks of any schedule for `inst`, ignoring its `k`; `None` when
/// some probe lies beyond the caps.
pub fn oracle_min_walks(inst: &Instance) -> Option<usize> {
    oracle_min_walks_with(inst, &OracleCaps::default())
}

/// [`oracle_min_walks`] with explicit caps.
pub fn oracle_min_walks_with(inst: &Instance, caps: &OracleCaps) -> Option<usize> {
    for k in 0..=inst.demands().len() {
        match oracle_decide_with(&inst.with_k(k), caps) {
            Decision::Yes(_) => return Some(k),
            Decision::No => {}
            Decision::Unknown(_) => return None,
        }
    }
    unreachable!("|D| walks always suffice")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Demand, DirectedGraph};

    fn inst(g: DirectedGraph, d: &[(usize, usize, u64)], k: usize, h: Option<u64>, v: Variant) -> Instance {
        Instance::new(g, d.iter().map(|&(u, v, t)| Demand::new(u, v, t)), k, h, v).unwrap()
    }

    #[test]
    fn one_way_edge_needs_two_walks() {
        let g = DirectedGraph::new(2, [(0, 1)]).unwrap();
        let i = inst(g, &[(0, 1, 1), (0, 1, 3)], 1, None, Variant::Unconstrained);
        assert!(oracle_decide(&i).is_no());
        assert!(oracle_decide(&i.with_k(2)).is_yes());
        assert_eq!(oracle_min_walks(&i), Some(2));
    }

    #[test]
    fn back_and_forth_fits_one_walk() {
        let g = DirectedGraph::bidirected(2, [(0, 1)]).unwrap();
        let tau = inst(g.clone(), &[(0, 1, 1), (1, 0, 2)], 1, Some(2), Variant::Lifespan);
        assert!(oracle_decide(&tau).is_yes());
        let ell = inst(g, &[(0, 1, 1), (1, 0, 2)], 1, Some(1), Variant::Length);
        assert!(oracle_decide(&ell).is_no());
    }

    #[test]
    fn star_walk_through_the_centre() {
        // centre 0, leaves 1 and 2
        let g = DirectedGraph::bidirected(3, [(0, 1), (0, 2)]).unwrap();
        let i = inst(g, &[(0, 1, 1), (1, 0, 2), (0, 2, 3)], 1, Some(3), Variant::Lifespan);
        let d = oracle_decide(&i);
        assert_eq!(d.schedule().unwrap().walks()[0].to_string(), "(0,1) (1,2) (0,3) (2,4)");
    }

    #[test]
    fn waiting_counts_towards_lifespan_only() {
        let g = DirectedGraph::bidirected(2, [(0, 1)]).unwrap();
        let d = [(0, 1, 1), (1, 0, 4)];
        assert!(oracle_decide(&inst(g.clone(), &d, 1, Some(2), Variant::Length)).is_yes());
        assert!(oracle_decide(&inst(g.clone(), &d, 1, Some(3), Variant::Lifespan)).is_no());
        assert!(oracle_decide(&inst(g, &d, 1, Some(4), Variant::Lifespan)).is_yes());
    }

    #[test]
    fn caps_and_trivial_cases() {
        let g = DirectedGraph::new(2, [(0, 1)]).unwrap();
        assert!(oracle_decide(&inst(g.clone(), &[], 0, None, Variant::Unconstrained)).is_yes());
        let far = inst(g, &[(0, 1, 1), (0, 1, 40)], 1, None, Variant::Unconstrained);
        assert!(matches!(oracle_decide(&far), Decision::Unknown(_)));
    }
}
