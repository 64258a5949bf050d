//! Graphs, demands, instances, temporal walks and schedules.

use crate::error::{ModelError, WalkError};
use std::collections::{HashSet, VecDeque};
use std::fmt;

/// Vertex identifier, 0-based.
pub type VertexId = usize;
/// Discrete time step. Time steps of demands start at 1.
pub type Time = u64;

/// A simple directed graph without self-loops or parallel edges.
///
/// Undirected inputs are represented by two opposite directed edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectedGraph {
    n: usize,
    edges: Vec<(VertexId, VertexId)>,
    out_adj: Vec<Vec<VertexId>>,
    in_adj: Vec<Vec<VertexId>>,
}

impl DirectedGraph {
    /// Builds a graph on `n` vertices. Edges are stored sorted.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (VertexId, VertexId)>) -> Result<Self, ModelError> {
        let mut list: Vec<(VertexId, VertexId)> = Vec::new();
        for (u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(ModelError::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(ModelError::SelfLoop(u));
            }
            list.push((u, v));
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(ModelError::DuplicateEdge(w[0].0, w[0].1));
        }
        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        for &(u, v) in &list {
            out_adj[u].push(v);
            in_adj[v].push(u);
        }
        for a in &mut in_adj {
            a.sort_unstable();
        }
        Ok(Self { n, edges: list, out_adj, in_adj })
    }

    /// Builds the bidirected graph with both orientations of every listed pair.
    pub fn bidirected(n: usize, pairs: impl IntoIterator<Item = (VertexId, VertexId)>) -> Result<Self, ModelError> {
        let mut all = Vec::new();
        for (u, v) in pairs {
            all.push((u, v));
            all.push((v, u));
        }
        Self::new(n, all)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Edges in lexicographic order; the position is the edge index.
    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        u < self.n && self.out_adj[u].binary_search(&v).is_ok()
    }

    pub fn edge_index(&self, u: VertexId, v: VertexId) -> Option<usize> {
        self.edges.binary_search(&(u, v)).ok()
    }

    /// Out-neighbours in increasing id order.
    pub fn out_neighbors(&self, u: VertexId) -> &[VertexId] {
        &self.out_adj[u]
    }

    /// In-neighbours in increasing id order.
    pub fn in_neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.in_adj[v]
    }

    pub fn isolated_vertices(&self) -> Vec<VertexId> {
        (0..self.n).filter(|&v| self.out_adj[v].is_empty() && self.in_adj[v].is_empty()).collect()
    }

    /// Removes isolated vertices. Returns the compacted graph and, for each
    /// new vertex id, its id in `self`.
    pub fn strip_isolated(&self) -> (DirectedGraph, Vec<VertexId>) {
        let keep: Vec<VertexId> =
            (0..self.n).filter(|&v| !self.out_adj[v].is_empty() || !self.in_adj[v].is_empty()).collect();
        let mut new_id = vec![usize::MAX; self.n];
        for (i, &v) in keep.iter().enumerate() {
            new_id[v] = i;
        }
        let edges = self.edges.iter().map(|&(u, v)| (new_id[u], new_id[v]));
        let g = DirectedGraph::new(keep.len(), edges).expect("relabelling preserves validity");
        (g, keep)
    }

    /// BFS distances from `source`; `None` marks unreachable vertices.
    pub fn distances_from(&self, source: VertexId) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        let mut queue = VecDeque::new();
        dist[source] = Some(0);
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].unwrap();
            for &v in &self.out_adj[u] {
                if dist[v].is_none() {
                    dist[v] = Some(d + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// BFS distances to `target` along edge directions.
    pub fn distances_to(&self, target: VertexId) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        let mut queue = VecDeque::new();
        dist[target] = Some(0);
        queue.push_back(target);
        while let Some(v) = queue.pop_front() {
            let d = dist[v].unwrap();
            for &u in &self.in_adj[v] {
                if dist[u].is_none() {
                    dist[u] = Some(d + 1);
                    queue.push_back(u);
                }
            }
        }
        dist
    }

    /// All-pairs shortest path distances by repeated BFS.
    pub fn all_pairs_distances(&self) -> DistanceMatrix {
        DistanceMatrix { rows: (0..self.n).map(|s| self.distances_from(s)).collect() }
    }

    /// A shortest path from `s` to `z` as a vertex list, choosing the
    /// lowest-id predecessor on ties so the result is deterministic.
    pub fn shortest_path(&self, s: VertexId, z: VertexId) -> Option<Vec<VertexId>> {
        let to_z = self.distances_to(z);
        let mut d = to_z[s]?;
        let mut path = vec![s];
        let mut cur = s;
        while d > 0 {
            let next = *self.out_adj[cur].iter().find(|&&w| to_z[w] == Some(d - 1))?;
            path.push(next);
            cur = next;
            d -= 1;
        }
        Some(path)
    }

    /// True when every edge has its reverse.
    pub fn is_bidirected(&self) -> bool {
        self.edges.iter().all(|&(u, v)| self.has_edge(v, u))
    }

    /// The center of a bidirected star, or `None` when the graph is not one.
    /// On two vertices the lower id is the center.
    pub fn star_center(&self) -> Option<VertexId> {
        if self.n < 2 || !self.is_bidirected() || self.edges.len() != 2 * (self.n - 1) {
            return None;
        }
        let center = (0..self.n).find(|&c| self.out_adj[c].len() == self.n - 1)?;
        let ok = (0..self.n).filter(|&v| v != center).all(|v| self.out_adj[v] == [center]);
        ok.then_some(center)
    }
}

/// Shortest-path distances between all vertex pairs.
#[derive(Clone, Debug)]
pub struct DistanceMatrix {
    rows: Vec<Vec<Option<usize>>>,
}

impl DistanceMatrix {
    pub fn get(&self, u: VertexId, v: VertexId) -> Option<usize> {
        self.rows[u][v]
    }
}

/// A demanded temporal edge: some walk must traverse `(u, v)` at time `t`.
///
/// Ordered by time first, then by edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Demand {
    pub u: VertexId,
    pub v: VertexId,
    pub t: Time,
}

impl Demand {
    pub fn new(u: VertexId, v: VertexId, t: Time) -> Self {
        Self { u, v, t }
    }
}

impl Ord for Demand {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.t, self.u, self.v).cmp(&(other.t, other.u, other.v))
    }
}

impl PartialOrd for Demand {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Demand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.u, self.v, self.t)
    }
}

/// Which per-walk bound applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    /// No bound on individual walks.
    Unconstrained,
    /// Every walk makes at most `h` moves.
    Length,
    /// Every walk lives for at most `h` time steps.
    Lifespan,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Unconstrained => "unconstrained",
            Variant::Length => "length",
            Variant::Lifespan => "lifespan",
        }
    }

    pub fn is_constrained(self) -> bool {
        self != Variant::Unconstrained
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Variant {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "unconstrained" => Ok(Variant::Unconstrained),
            "length" => Ok(Variant::Length),
            "lifespan" => Ok(Variant::Lifespan),
            other => Err(format!("unknown variant `{other}`")),
        }
    }
}

/// A schedule completion instance: graph, draft schedule, walk budget `k`
/// and, for the constrained variants, the per-walk bound `h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    graph: DirectedGraph,
    demands: Vec<Demand>,
    k: usize,
    h: Option<u64>,
    variant: Variant,
}

impl Instance {
    /// Validates and builds an instance. Demands are stored sorted by time.
    pub fn new(
        graph: DirectedGraph,
        demands: impl IntoIterator<Item = Demand>,
        k: usize,
        h: Option<u64>,
        variant: Variant,
    ) -> Result<Self, ModelError> {
        match (variant, h) {
            (Variant::Unconstrained, Some(_)) => return Err(ModelError::UnexpectedBound),
            (Variant::Length | Variant::Lifespan, None) => return Err(ModelError::MissingBound(variant.name())),
            _ => {}
        }
        let mut list: Vec<Demand> = demands.into_iter().collect();
        for d in &list {
            if d.t == 0 {
                return Err(ModelError::DemandTimeZero { u: d.u, v: d.v, t: d.t });
            }
            if !graph.has_edge(d.u, d.v) {
                return Err(ModelError::DemandNotEdge { u: d.u, v: d.v, t: d.t });
            }
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            let d = w[0];
            return Err(ModelError::DuplicateDemand { u: d.u, v: d.v, t: d.t });
        }
        Ok(Self { graph, demands: list, k, h, variant })
    }

    pub fn graph(&self) -> &DirectedGraph {
        &self.graph
    }

    /// Demands sorted by time, then edge.
    pub fn demands(&self) -> &[Demand] {
        &self.demands
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn h(&self) -> Option<u64> {
        self.h
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    /// Latest demanded time step; 0 for an empty draft schedule.
    pub fn lambda(&self) -> Time {
        self.demands.last().map_or(0, |d| d.t)
    }

    /// Earliest demanded time step, if any.
    pub fn first_time(&self) -> Option<Time> {
        self.demands.first().map(|d| d.t)
    }

    /// Distinct demanded time steps in increasing order.
    pub fn relevant_times(&self) -> Vec<Time> {
        let mut ts: Vec<Time> = self.demands.iter().map(|d| d.t).collect();
        ts.dedup();
        ts
    }

    /// Demands at time `t`, as a contiguous slice.
    pub fn demands_at(&self, t: Time) -> &[Demand] {
        let lo = self.demands.partition_point(|d| d.t < t);
        let hi = self.demands.partition_point(|d| d.t <= t);
        &self.demands[lo..hi]
    }

    pub fn is_demand(&self, u: VertexId, v: VertexId, t: Time) -> bool {
        self.demands.binary_search(&Demand::new(u, v, t)).is_ok()
    }

    /// Same graph and demands with a different walk budget.
    pub fn with_k(&self, k: usize) -> Instance {
        Instance { k, ..self.clone() }
    }

    /// Same graph and demands under another variant and bound.
    pub fn with_bound(&self, variant: Variant, h: Option<u64>) -> Result<Instance, ModelError> {
        Instance::new(self.graph.clone(), self.demands.iter().copied(), self.k, h, variant)
    }
}

/// A single move of a walk: it is at `from` at time `time` and at `to` at
/// time `time + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Move {
    pub time: Time,
    pub from: VertexId,
    pub to: VertexId,
}

/// A strict temporal walk with unit travel times.
///
/// The walk occupies one vertex per time step from `start_time` to
/// `end_time`; between two moves it waits. Waits are stored implicitly so
/// long idle stretches cost no memory, and [`TemporalWalk::steps`] yields
/// the unit-step expanded form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TemporalWalk {
    start_vertex: VertexId,
    start_time: Time,
    moves: Vec<Move>,
    end_time: Time,
}

impl TemporalWalk {
    /// Builds a walk from its start, its moves and its final time step.
    pub fn new(start_vertex: VertexId, start_time: Time, moves: Vec<Move>, end_time: Time) -> Result<Self, WalkError> {
        let mut at = start_vertex;
        let mut earliest = start_time;
        for m in &moves {
            if m.time < earliest {
                return Err(WalkError::NonStrictTimes);
            }
            if m.from != at {
                return Err(WalkError::BrokenChain { time: m.time, from: m.from, at });
            }
            if m.from == m.to {
                return Err(WalkError::DegenerateMove(m.from));
            }
            at = m.to;
            earliest = m.time + 1;
        }
        if end_time < earliest {
            return Err(WalkError::EndBeforeLastMove);
        }
        Ok(Self { start_vertex, start_time, moves, end_time })
    }

    /// Builds a walk from its unit-step expanded form: consecutive entries
    /// are one time step apart and either stay on a vertex or move.
    pub fn from_steps(steps: &[(VertexId, Time)]) -> Result<Self, WalkError> {
        let (&(v0, t0), rest) = steps.split_first().ok_or(WalkError::Empty)?;
        let mut moves = Vec::new();
        let (mut pv, mut pt) = (v0, t0);
        for (i, &(v, t)) in rest.iter().enumerate() {
            if t != pt + 1 {
                return Err(WalkError::NonUnitStep { index: i });
            }
            if v != pv {
                moves.push(Move { time: pt, from: pv, to: v });
            }
            pv = v;
            pt = t;
        }
        Self::new(v0, t0, moves, pt)
    }

    pub fn start_vertex(&self) -> VertexId {
        self.start_vertex
    }

    pub fn start_time(&self) -> Time {
        self.start_time
    }

    pub fn end_time(&self) -> Time {
        self.end_time
    }

    pub fn end_vertex(&self) -> VertexId {
        self.moves.last().map_or(self.start_vertex, |m| m.to)
    }

    pub fn moves(&self) -> &[Move] {
        &self.moves
    }

    /// Number of moves, ℓ(p).
    pub fn length(&self) -> u64 {
        self.moves.len() as u64
    }

    /// Last time step minus first time step, τ(p).
    pub fn lifespan(&self) -> u64 {
        self.end_time - self.start_time
    }

    /// The measure bounded by `h` under `variant`; `None` when unconstrained.
    pub fn measure(&self, variant: Variant) -> Option<u64> {
        match variant {
            Variant::Unconstrained => None,
            Variant::Length => Some(self.length()),
            Variant::Lifespan => Some(self.lifespan()),
        }
    }

    /// Vertex occupied at time `t`, if the walk exists then.
    pub fn position_at(&self, t: Time) -> Option<VertexId> {
        if t < self.start_time || t > self.end_time {
            return None;
        }
        let idx = self.moves.partition_point(|m| m.time < t);
        Some(if idx == 0 { self.start_vertex } else { self.moves[idx - 1].to })
    }

    /// Unit-step expanded form, one `(vertex, time)` per time step.
    pub fn steps(&self) -> impl Iterator<Item = (VertexId, Time)> + '_ {
        (self.start_time..=self.end_time).scan((self.start_vertex, 0usize), move |(at, next), t| {
            let here = *at;
            if *next < self.moves.len() && self.moves[*next].time == t {
                *at = self.moves[*next].to;
                *next += 1;
            }
            Some((here, t))
        })
    }

    /// The walk with leading and trailing waits removed, or `None` if it
    /// never moves.
    pub fn trimmed(&self) -> Option<TemporalWalk> {
        let first = self.moves.first()?;
        let last = self.moves.last()?;
        Some(TemporalWalk {
            start_vertex: first.from,
            start_time: first.time,
            moves: self.moves.clone(),
            end_time: last.time + 1,
        })
    }

    /// Longest consecutive wait on any vertex satisfying `pred`, counting
    /// waits strictly between arrival and departure.
    pub fn max_wait_where(&self, pred: impl Fn(VertexId) -> bool) -> u64 {
        let mut best = 0;
        let mut at = self.start_vertex;
        let mut since = self.start_time;
        for m in &self.moves {
            if pred(at) {
                best = best.max(m.time - since);
            }
            at = m.to;
            since = m.time + 1;
        }
        if pred(at) {
            best = best.max(self.end_time - since);
        }
        best
    }
}

impl fmt::Display for TemporalWalk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, t) in self.steps() {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "({v},{t})")?;
        }
        Ok(())
    }
}

/// Incrementally assembles a walk from waits and moves.
#[derive(Clone, Debug)]
pub struct WalkBuilder {
    start_vertex: VertexId,
    start_time: Time,
    at: VertexId,
    now: Time,
    moves: Vec<Move>,
}

impl WalkBuilder {
    pub fn new(vertex: VertexId, time: Time) -> Self {
        Self { start_vertex: vertex, start_time: time, at: vertex, now: time, moves: Vec::new() }
    }

    pub fn position(&self) -> VertexId {
        self.at
    }

    pub fn now(&self) -> Time {
        self.now
    }

    /// Waits in place until time `t`. Panics if `t` lies in the past.
    pub fn wait_until(&mut self, t: Time) -> &mut Self {
        assert!(t >= self.now, "cannot wait backwards from {} to {t}", self.now);
        self.now = t;
        self
    }

    /// Moves to `to` at the current time, arriving one step later.
    pub fn step(&mut self, to: VertexId) -> &mut Self {
        if to != self.at {
            self.moves.push(Move { time: self.now, from: self.at, to });
        }
        self.at = to;
        self.now += 1;
        self
    }

    /// Follows a vertex path starting at the current position, one move
    /// per time step.
    pub fn follow(&mut self, path: &[VertexId]) -> &mut Self {
        debug_assert_eq!(path.first(), Some(&self.at));
        for &v in &path[1..] {
            self.step(v);
        }
        self
    }

    pub fn finish(self) -> TemporalWalk {
        TemporalWalk::new(self.start_vertex, self.start_time, self.moves, self.now)
            .expect("builder maintains walk invariants")
    }
}

/// A set of temporal walks. Walks without moves are dropped on construction.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Schedule {
    walks: Vec<TemporalWalk>,
}

impl Schedule {
    pub fn new(walks: impl IntoIterator<Item = TemporalWalk>) -> Self {
        Self { walks: walks.into_iter().filter(|w| !w.moves.is_empty()).collect() }
    }

    /// The schedule with every walk trimmed to its first and last move.
    pub fn trimmed(&self) -> Schedule {
        Schedule { walks: self.walks.iter().filter_map(TemporalWalk::trimmed).collect() }
    }

    pub fn walks(&self) -> &[TemporalWalk] {
        &self.walks
    }

    pub fn len(&self) -> usize {
        self.walks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.walks.is_empty()
    }

    /// Every temporal edge used, with the index of the walk using it.
    pub fn temporal_edges(&self) -> impl Iterator<Item = (usize, Move)> + '_ {
        self.walks.iter().enumerate().flat_map(|(i, w)| w.moves.iter().map(move |&m| (i, m)))
    }

    /// Set of `(u, v, t)` triples traversed by some walk.
    pub fn covered(&self) -> HashSet<Demand> {
        self.temporal_edges().map(|(_, m)| Demand::new(m.from, m.to, m.time)).collect()
    }
}

/// Outcome of a decision procedure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decision {
    /// Feasible, with a witnessing schedule.
    Yes(Schedule),
    /// Infeasible.
    No,
    /// The procedure ran out of its resource budget.
    Unknown(String),
}

impl Decision {
    pub fn is_yes(&self) -> bool {
        matches!(self, Decision::Yes(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self, Decision::No)
    }

    /// `Some(true)` for YES, `Some(false)` for NO, `None` for UNKNOWN.
    pub fn verdict(&self) -> Option<bool> {
        match self {
            Decision::Yes(_) => Some(true),
            Decision::No => Some(false),
            Decision::Unknown(_) => None,
        }
    }

    pub fn schedule(&self) -> Option<&Schedule> {
        match self {
            Decision::Yes(s) => Some(s),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Decision::Yes(_) => "YES",
            Decision::No => "NO",
            Decision::Unknown(_) => "UNKNOWN",
        }
    }
}

/// Schedule covering each demand with its own single-move walk.
pub fn one_walk_per_demand(inst: &Instance) -> Schedule {
    Schedule::new(inst.demands().iter().map(|d| {
        TemporalWalk::new(d.u, d.t, vec![Move { time: d.t, from: d.u, to: d.v }], d.t + 1).expect("single move")
    }))
}
