//! Rewrites a lifespan schedule on a bidirected star so that no walk waits
//! more than one consecutive step on a leaf.
//!
//! Leaves are processed one at a time and each pass fixes the earliest
//! conflict, a walk that enters leaf `v` with `(c, v, t)` and leaves only
//! at `t' ≥ t + 3`. The walk instead returns with `(v, c, t + 1)`, waits on
//! the centre and re-enters at some `t* ∈ [t + 2, t' − 1]`. Departures that
//! block `(v, c, t + 1)` are moved one step earlier in a chain that ends
//! at a walk whose first edge it is, and that edge is dropped. Arrivals
//! that block every re-entry slot are delayed by [`allocate_incoming`].
//! Start and end of every walk stay put or move inwards, so no lifespan
//! grows, and every temporal edge keeps an owner, so coverage is kept.

use crate::error::NormalizeError;
use crate::model::{Instance, Schedule, TemporalWalk, Time, Variant, VertexId, WalkBuilder};
use crate::validate::validate_schedule;

/// New arrival time for one blocking pair, or the end of its walk when the
/// walk never leaves the leaf again.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Reassignment {
    pub pair: usize,
    pub to: Option<Time>,
}

/// Finds a free arrival slot in `[t0, dead − 1]` on an edge into a leaf.
///
/// `pairs[i] = (x, y)` says some walk arrives with the edge at `x` and
/// next leaves the leaf at `y`, or never when `y` is `None`. Slots held by
/// walks that never leave count as free, since those walks can simply end.
/// Otherwise one blocking walk with `y ≥ dead` hands over its slot and is
/// itself delayed recursively within `[x + 1, y − 1]`. Returns the slot
/// and the reassignments, or `None` when the input breaks the contract
/// (distinct `x`, distinct `y`, `x < y`, no `y` equal to `dead`).
pub fn allocate_incoming(t0: Time, dead: Time, pairs: &[(Time, Option<Time>)]) -> Option<(Time, Vec<Reassignment>)> {
    let indexed: Vec<(usize, Time, Option<Time>)> =
        pairs.iter().enumerate().filter(|p| p.1 .0 >= t0).map(|(i, &(x, y))| (i, x, y)).collect();
    allocate(t0, dead, &indexed)
}

fn allocate(t0: Time, dead: Time, pairs: &[(usize, Time, Option<Time>)]) -> Option<(Time, Vec<Reassignment>)> {
    for s in t0..dead {
        match pairs.iter().find(|p| p.1 == s) {
            None => return Some((s, Vec::new())),
            Some(&(i, _, None)) => return Some((s, vec![Reassignment { pair: i, to: None }])),
            Some(_) => {}
        }
    }
    let &(j, xj, yj) = pairs
        .iter()
        .filter(|p| p.1 < dead && p.2.is_some_and(|y| y > dead))
        .min_by_key(|p| p.1)?;
    let rest: Vec<_> = pairs.iter().filter(|p| p.1 > xj).copied().collect();
    let (slot, mut changes) = allocate(xj + 1, yj.unwrap(), &rest)?;
    changes.push(Reassignment { pair: j, to: Some(slot) });
    Some((xj, changes))
}

/// A walk as one position per time step from `start`.
#[derive(Clone, Debug)]
struct Timeline {
    start: Time,
    pos: Vec<VertexId>,
}

impl Timeline {
    fn from_walk(w: &TemporalWalk) -> Self {
        Self { start: w.start_time(), pos: w.steps().map(|(v, _)| v).collect() }
    }

    fn end(&self) -> Time {
        self.start + self.pos.len() as u64 - 1
    }

    fn at(&self, t: Time) -> Option<VertexId> {
        (t >= self.start && t <= self.end()).then(|| self.pos[(t - self.start) as usize])
    }

    fn set(&mut self, t: Time, v: VertexId) {
        let i = (t - self.start) as usize;
        self.pos[i] = v;
    }

    fn moves_along(&self, from: VertexId, to: VertexId, t: Time) -> bool {
        self.at(t) == Some(from) && self.at(t + 1) == Some(to)
    }

    /// Drops leading and trailing waits; `false` when no move remains.
    fn trim(&mut self) -> bool {
        let Some(first) = self.pos.windows(2).position(|w| w[0] != w[1]) else { return false };
        let last = self.pos.windows(2).rposition(|w| w[0] != w[1]).unwrap();
        self.pos.truncate(last + 2);
        self.pos.drain(..first);
        self.start += first as u64;
        true
    }

    fn to_walk(&self) -> TemporalWalk {
        let mut b = WalkBuilder::new(self.pos[0], self.start);
        for &v in &self.pos[1..] {
            b.step(v);
        }
        b.finish()
    }
}

struct Star {
    c: VertexId,
    v: VertexId,
    walks: Vec<Option<Timeline>>,
}

impl Star {
    fn owner(&self, from: VertexId, to: VertexId, t: Time) -> Option<usize> {
        self.walks.iter().position(|w| w.as_ref().is_some_and(|w| w.moves_along(from, to, t)))
    }

    fn walk(&mut self, j: usize) -> &mut Timeline {
        self.walks[j].as_mut().expect("live walk")
    }

    /// First departure from the leaf at or after `from` by walk `j`, if it
    /// leaves before ending.
    fn departure(&self, j: usize, from: Time) -> Option<Time> {
        let w = self.walks[j].as_ref()?;
        (from..w.end()).take_while(|&t| w.at(t) == Some(self.v)).find(|&t| w.moves_along(self.v, self.c, t))
    }

    /// Earliest arrival `x` on the leaf followed by a departure at `y ≥ x + 3`.
    fn earliest_conflict(&self) -> Option<(usize, Time, Time)> {
        let mut best: Option<(usize, Time, Time)> = None;
        for (j, w) in self.walks.iter().enumerate() {
            let Some(w) = w else { continue };
            for x in w.start..w.end() {
                if !w.moves_along(self.c, self.v, x) || best.is_some_and(|b| b.1 <= x) {
                    continue;
                }
                if let Some(y) = self.departure(j, x + 1) {
                    if y >= x + 3 {
                        best = Some((j, x, y));
                    }
                }
            }
        }
        best
    }

    /// Frees `(v, c, s)` by moving its user's departure one step earlier,
    /// recursively, or by dropping the edge from the start of its walk.
    fn clear_departure(&mut self, s: Time) -> Result<(), NormalizeError> {
        let (c, v) = (self.c, self.v);
        let Some(j) = self.owner(v, c, s) else { return Ok(()) };
        let w = self.walk(j);
        if w.start == s {
            w.pos.remove(0);
            w.start += 1;
            return Ok(());
        }
        if !(w.at(s - 1) == Some(v) && w.at(s.wrapping_sub(2)) == Some(c)) {
            return Err(NormalizeError::Internal(format!("departure ({v}, {c}, {s}) follows a long wait")));
        }
        self.clear_departure(s - 1)?;
        self.walk(j).set(s, c);
        Ok(())
    }

    fn resolve(&mut self, i: usize, t: Time, dead: Time) -> Result<(), NormalizeError> {
        let (c, v) = (self.c, self.v);
        self.clear_departure(t + 1)?;
        let mut owners = Vec::new();
        let mut pairs = Vec::new();
        for j in 0..self.walks.len() {
            let Some(w) = &self.walks[j] else { continue };
            for x in (t + 2).max(w.start)..w.end() {
                if w.moves_along(c, v, x) {
                    owners.push(j);
                    pairs.push((x, self.departure(j, x + 1)));
                }
            }
        }
        let (slot, changes) = allocate_incoming(t + 2, dead, &pairs)
            .ok_or_else(|| NormalizeError::Internal(format!("no arrival slot on ({c}, {v}) before {dead}")))?;
        for ch in changes {
            let (j, x) = (owners[ch.pair], pairs[ch.pair].0);
            let w = self.walk(j);
            match ch.to {
                Some(to) => {
                    for s in x + 1..=to {
                        w.set(s, c);
                    }
                }
                None => w.pos.truncate((x - w.start) as usize + 1),
            }
        }
        let w = self.walk(i);
        for s in t + 2..=slot {
            w.set(s, c);
        }
        for w in &mut self.walks {
            if w.as_mut().is_some_and(|w| !w.trim()) {
                *w = None;
            }
        }
        Ok(())
    }
}

/// Rewrites a valid lifespan schedule on a bidirected star so that no walk
/// waits more than one consecutive step on a leaf. No walk gets a longer
/// lifespan and the schedule stays valid; walks may lose leading moves and
/// disappear when nothing is left of them.
pub fn normalize_star_schedule(inst: &Instance, sched: &Schedule) -> Result<Schedule, NormalizeError> {
    let c = inst.graph().star_center().ok_or(NormalizeError::NotAStar)?;
    if inst.variant() != Variant::Lifespan {
        return Err(NormalizeError::NotLifespan);
    }
    let report = validate_schedule(inst, sched).map_err(|e| NormalizeError::InvalidInput(e.to_string()))?;
    if let Some(v) = report.first_violation() {
        return Err(NormalizeError::InvalidInput(v.to_string()));
    }
    let original: Vec<TemporalWalk> = sched.walks().iter().filter_map(TemporalWalk::trimmed).collect();
    let mut walks: Vec<Option<Timeline>> = original.iter().map(|w| Some(Timeline::from_walk(w))).collect();
    for v in (0..inst.n()).filter(|&v| v != c) {
        let mut star = Star { c, v, walks };
        let limit = 4 * star.walks.iter().flatten().map(|w| w.pos.len()).sum::<usize>() + 16;
        let mut rounds = 0;
        while let Some((i, t, dead)) = star.earliest_conflict() {
            rounds += 1;
            if rounds > limit {
                return Err(NormalizeError::Internal(format!("no progress on leaf {v}")));
            }
            star.resolve(i, t, dead)?;
        }
        walks = star.walks;
    }
    for (w, old) in walks.iter().zip(&original) {
        if let Some(w) = w {
            if w.to_walk().lifespan() > old.lifespan() {
                return Err(NormalizeError::Internal("a lifespan grew".into()));
            }
        }
    }
    let out = Schedule::new(walks.iter().flatten().map(Timeline::to_walk));
    let report = validate_schedule(inst, &out).map_err(|e| NormalizeError::Internal(e.to_string()))?;
    if let Some(v) = report.first_violation() {
        return Err(NormalizeError::Internal(format!("result is invalid: {v}")));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Demand, DirectedGraph};

    fn leaf_wait(s: &Schedule, c: VertexId) -> u64 {
        s.walks().iter().map(|w| w.max_wait_where(|v| v != c)).max().unwrap_or(0)
    }

    #[test]
    fn allocate_free_slot_first() {
        assert_eq!(allocate_incoming(3, 6, &[(3, Some(4)), (5, Some(9))]), Some((4, vec![])));
    }

    #[test]
    fn allocate_delays_a_blocker() {
        // slots 3 and 4 blocked; the walk arriving at 4 stays until 8
        let (slot, changes) = allocate_incoming(3, 5, &[(3, Some(4)), (4, Some(8)), (6, Some(7))]).unwrap();
        assert_eq!(slot, 4);
        assert_eq!(changes, vec![Reassignment { pair: 1, to: Some(5) }]);
    }

    #[test]
    fn allocate_ends_a_walk_that_stays() {
        let (slot, changes) = allocate_incoming(2, 4, &[(2, Some(3)), (3, None)]).unwrap();
        assert_eq!((slot, changes), (3, vec![Reassignment { pair: 1, to: None }]));
    }

    #[test]
    fn long_leaf_wait_is_split() {
        // centre 0, leaf 1; the walk waits on the leaf from 2 to 6
        let g = DirectedGraph::bidirected(2, [(0, 1)]).unwrap();
        let inst = Instance::new(g, [Demand::new(0, 1, 1), Demand::new(1, 0, 6)], 1, Some(6), Variant::Lifespan).unwrap();
        let w = TemporalWalk::from_steps(&[(0, 1), (1, 2), (1, 3), (1, 4), (1, 5), (1, 6), (0, 7)]).unwrap();
        let sched = Schedule::new([w]);
        assert_eq!(leaf_wait(&sched, 0), 4);
        let out = normalize_star_schedule(&inst, &sched).unwrap();
        assert!(leaf_wait(&out, 0) <= 1);
        assert_eq!(out.walks()[0].lifespan(), 6);
    }

    #[test]
    fn conflict_free_schedule_is_unchanged() {
        let g = DirectedGraph::bidirected(3, [(0, 1), (0, 2)]).unwrap();
        let d = [Demand::new(0, 1, 1), Demand::new(1, 0, 2), Demand::new(0, 2, 3)];
        let inst = Instance::new(g, d, 1, Some(3), Variant::Lifespan).unwrap();
        let w = TemporalWalk::from_steps(&[(0, 1), (1, 2), (0, 3), (2, 4)]).unwrap();
        let sched = Schedule::new([w]);
        assert_eq!(normalize_star_schedule(&inst, &sched).unwrap(), sched);
    }
}
