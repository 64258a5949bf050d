//! Feasibility checks for schedules and the preprocessing observations.

use crate::error::{SolveError, StructuralError};
use crate::model::{one_walk_per_demand, Decision, Demand, DirectedGraph, Instance, Move, Schedule, TemporalWalk, Time, Variant, VertexId};
use std::collections::HashMap;
use std::fmt;

/// A reason why a well-formed schedule does not solve an instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// Two walks traverse the same edge at the same time.
    TedConflict { edge: (VertexId, VertexId), time: Time, walks: (usize, usize) },
    /// A demand is not traversed by any walk.
    Uncovered(Demand),
    /// More walks than the budget allows.
    TooManyWalks { walks: usize, k: usize },
    /// A walk exceeds the per-walk bound.
    BoundExceeded { walk: usize, measure: u64, bound: u64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::TedConflict { edge, time, walks } => write!(
                f,
                "temporal edge disjointness: walks {} and {} both use ({}, {}) at time {}",
                walks.0, walks.1, edge.0, edge.1, time
            ),
            Violation::Uncovered(d) => write!(f, "demand coverage: {d} is not on any walk"),
            Violation::TooManyWalks { walks, k } => write!(f, "walk count: {walks} walks but k = {k}"),
            Violation::BoundExceeded { walk, measure, bound } => {
                write!(f, "walk bound: walk {walk} has measure {measure} > h = {bound}")
            }
        }
    }
}

/// Per-check outcome of [`validate_schedule`]; `None` means the check passed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub ted: Option<Violation>,
    pub coverage: Option<Violation>,
    pub walk_count: Option<Violation>,
    pub bound: Option<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.first_violation().is_none()
    }

    /// The first failing check in the order TED, coverage, count, bound.
    pub fn first_violation(&self) -> Option<&Violation> {
        [&self.ted, &self.coverage, &self.walk_count, &self.bound].into_iter().flatten().next()
    }
}

/// Checks that every walk of `sched` only visits vertices of `graph` and
/// only moves along its edges.
pub fn check_structure(graph: &DirectedGraph, sched: &Schedule) -> Result<(), StructuralError> {
    for (i, w) in sched.walks().iter().enumerate() {
        if w.start_vertex() >= graph.n() {
            return Err(StructuralError::VertexOutOfRange { walk: i, vertex: w.start_vertex() });
        }
        for m in w.moves() {
            if m.to >= graph.n() {
                return Err(StructuralError::VertexOutOfRange { walk: i, vertex: m.to });
            }
            if !graph.has_edge(m.from, m.to) {
                return Err(StructuralError::NonEdgeMove { walk: i, from: m.from, to: m.to, time: m.time });
            }
        }
    }
    Ok(())
}

/// Validates `sched` against `inst`: structure first, then temporal edge
/// disjointness, demand coverage, walk count and the variant's bound.
pub fn validate_schedule(inst: &Instance, sched: &Schedule) -> Result<ValidationReport, StructuralError> {
    check_structure(inst.graph(), sched)?;
    let mut report = ValidationReport::default();

    let mut owner: HashMap<Move, usize> = HashMap::new();
    let mut edges: Vec<(usize, Move)> = sched.temporal_edges().collect();
    edges.sort_by_key(|&(i, m)| (m.time, m.from, m.to, i));
    for (i, m) in edges {
        if let Some(&j) = owner.get(&m) {
            report.ted = Some(Violation::TedConflict { edge: (m.from, m.to), time: m.time, walks: (j, i) });
            break;
        }
        owner.insert(m, i);
    }

    let covered = sched.covered();
    if let Some(d) = inst.demands().iter().find(|d| !covered.contains(d)) {
        report.coverage = Some(Violation::Uncovered(*d));
    }

    if sched.len() > inst.k() {
        report.walk_count = Some(Violation::TooManyWalks { walks: sched.len(), k: inst.k() });
    }

    if let Some(h) = inst.h() {
        for (i, w) in sched.walks().iter().enumerate() {
            let measure = w.measure(inst.variant()).expect("constrained variant");
            if measure > h {
                report.bound = Some(Violation::BoundExceeded { walk: i, measure, bound: h });
                break;
            }
        }
    }
    Ok(report)
}

/// Convenience wrapper: `true` when the schedule is well formed and valid.
pub fn is_valid_schedule(inst: &Instance, sched: &Schedule) -> bool {
    matches!(validate_schedule(inst, sched), Ok(r) if r.is_valid())
}

/// `(length, lifespan)` of a walk.
pub fn walk_measures(p: &TemporalWalk) -> (u64, u64) {
    (p.length(), p.lifespan())
}

/// An instance after stripping isolated vertices and shifting time so the
/// earliest demand is at time 1, with the data needed to map results back.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Normalized {
    pub instance: Instance,
    /// For each vertex of `instance`, its id in the original instance.
    pub vertex_map: Vec<VertexId>,
    /// Original time = normalized time + `time_offset`.
    pub time_offset: Time,
}

impl Normalized {
    /// Maps a schedule of the normalized instance back to the original ids
    /// and times.
    pub fn restore(&self, sched: &Schedule) -> Schedule {
        let map = |v: VertexId| self.vertex_map[v];
        Schedule::new(sched.walks().iter().map(|w| {
            let moves = w
                .moves()
                .iter()
                .map(|m| Move { time: m.time + self.time_offset, from: map(m.from), to: map(m.to) })
                .collect();
            TemporalWalk::new(map(w.start_vertex()), w.start_time() + self.time_offset, moves, w.end_time() + self.time_offset)
                .expect("relabelling preserves walk invariants")
        }))
    }

    /// Maps a decision on the normalized instance back to the original.
    pub fn restore_decision(&self, d: Decision) -> Decision {
        match d {
            Decision::Yes(s) => Decision::Yes(self.restore(&s)),
            other => other,
        }
    }
}

/// Strips isolated vertices and shifts demand times so the minimum is 1.
pub fn normalize(inst: &Instance) -> Normalized {
    let (graph, vertex_map) = inst.graph().strip_isolated();
    let mut new_id = vec![usize::MAX; inst.n()];
    for (i, &v) in vertex_map.iter().enumerate() {
        new_id[v] = i;
    }
    let time_offset = inst.first_time().map_or(0, |t| t - 1);
    let demands = inst.demands().iter().map(|d| Demand::new(new_id[d.u], new_id[d.v], d.t - time_offset));
    let instance =
        Instance::new(graph, demands, inst.k(), inst.h(), inst.variant()).expect("normalization preserves validity");
    Normalized { instance, vertex_map, time_offset }
}

/// Outcome of [`preprocess`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PreDecision {
    /// `|D| ≤ k`: one walk per demand suffices.
    Feasible,
    /// Constrained variant with `k·h < |D|`: each walk covers at most `h` demands.
    Infeasible,
    /// Nothing decided; the normalized instance satisfies `k < |D|` and,
    /// for constrained variants, `|D| ≤ k·h`.
    Undecided(Normalized),
}

/// Applies the trivial decisions and normalizes the rest.
///
/// A length-bounded instance with `h ≥ n·|D|` is rewritten to the
/// unconstrained variant, since a minimal schedule never needs longer walks.
pub fn preprocess(inst: &Instance) -> PreDecision {
    preprocess_with(inst, true)
}

/// [`preprocess`] with the length-to-unconstrained rewrite optional.
pub fn preprocess_with(inst: &Instance, length_rewrite: bool) -> PreDecision {
    let m = inst.demands().len() as u64;
    if m <= inst.k() as u64 {
        return PreDecision::Feasible;
    }
    if let Some(h) = inst.h() {
        if (inst.k() as u64).saturating_mul(h) < m {
            return PreDecision::Infeasible;
        }
    }
    let mut norm = normalize(inst);
    if length_rewrite && norm.instance.variant() == Variant::Length {
        let h = norm.instance.h().expect("length variant has a bound");
        if h >= norm.instance.n() as u64 * m {
            norm.instance =
                norm.instance.with_bound(Variant::Unconstrained, None).expect("dropping the bound stays valid");
        }
    }
    PreDecision::Undecided(norm)
}

/// Runs `solve` on the preprocessed instance and maps its answer back.
/// Trivially decided instances never reach `solve`.
pub fn solve_preprocessed(
    inst: &Instance,
    solve: impl FnOnce(&Instance) -> Result<Decision, SolveError>,
) -> Result<Decision, SolveError> {
    match preprocess(inst) {
        PreDecision::Feasible => Ok(Decision::Yes(one_walk_per_demand(inst))),
        PreDecision::Infeasible => Ok(Decision::No),
        PreDecision::Undecided(norm) => Ok(norm.restore_decision(solve(&norm.instance)?)),
    }
}

/// Checks a YES answer against the instance, turning an invalid witness
/// into an internal error.
pub(crate) fn checked(inst: &Instance, d: Decision, solver: &str) -> Result<Decision, SolveError> {
    if let Decision::Yes(s) = &d {
        let report = validate_schedule(inst, s).map_err(|e| SolveError::Internal(format!("{solver}: {e}")))?;
        if let Some(v) = report.first_violation() {
            return Err(SolveError::Internal(format!("{solver} produced an invalid schedule: {v}")));
        }
    }
    Ok(d)
}
