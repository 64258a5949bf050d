//! Polynomial-time solver for the unconstrained problem: one feasible-flow
//! computation on the gap-compressed schedule completion network.

use crate::error::SolveError;
use crate::expansion::{
    build_expansion, route_through_gap, CostKind, ExpansionMode, ExpansionOptions, GapStrategy, Terminals,
};
use crate::flow::{decompose_paths, feasible_flow_with_lower_bounds, FlowArc, FlowNetwork};
use crate::model::{Decision, DirectedGraph, Instance, Schedule, Time, TemporalWalk, Variant, VertexId, WalkBuilder};
use crate::validate::{checked, solve_preprocessed};

/// Decides an unconstrained instance and returns a witness schedule.
///
/// The network keeps every irrelevant stretch shorter than `n + 2k` and
/// collapses longer ones into biclique transitions. Walks crossing a
/// collapsed stretch are routed explicitly when the schedule is built.
pub fn solve_tedsc(inst: &Instance) -> Result<Decision, SolveError> {
    if inst.variant() != Variant::Unconstrained {
        return Err(SolveError::UnsupportedVariant(inst.variant().name()));
    }
    let d = solve_preprocessed(inst, decide)?;
    checked(inst, d, "flow solver")
}

/// Gap threshold used by [`solve_tedsc`] for `k` walks on `n` vertices.
pub fn flow_gamma(n: usize, k: usize) -> u64 {
    (n + 2 * k) as u64
}

fn decide(inst: &Instance) -> Result<Decision, SolveError> {
    let k = inst.k().min(inst.demands().len());
    let opts = ExpansionOptions::new(ExpansionMode::SeHat(Terminals::Boundary), Some(flow_gamma(inst.n(), k)));
    let net = build_expansion(inst, opts)?;
    let fnet = net.to_flow_network(CostKind::None, k as u64);
    let Some(flow) = feasible_flow_with_lower_bounds(&fnet, k as u64) else {
        return Ok(Decision::No);
    };
    let traces: Vec<Vec<VertexId>> = decompose_paths(&fnet, &flow)
        .iter()
        .map(|p| net.trace(p).into_iter().map(|(_, v)| v).collect())
        .collect();
    let layers = net.layers();
    debug_assert!(traces.iter().all(|t| t.len() == layers.len()));
    let mut walks: Vec<WalkBuilder> = traces.iter().map(|t| WalkBuilder::new(t[0], layers[0])).collect();
    // carried[j] is the trace whose remainder walk j follows
    let mut carried: Vec<usize> = (0..traces.len()).collect();
    for i in 0..layers.len() - 1 {
        let (a, b) = (layers[i], layers[i + 1]);
        if b == a + 1 {
            for (w, &p) in walks.iter_mut().zip(&carried) {
                w.step(traces[p][i + 1]);
            }
            continue;
        }
        let pairs: Vec<_> = carried.iter().map(|&p| (traces[p][i], traces[p][i + 1])).collect();
        let before = carried.clone();
        for (j, (piece, target)) in route_any(inst.graph(), &pairs, (a, b))?.into_iter().enumerate() {
            append(&mut walks[j], &piece);
            carried[j] = before[target];
        }
    }
    Ok(Decision::Yes(Schedule::new(walks.into_iter().map(WalkBuilder::finish)).trimmed()))
}

/// Extends `w` by the moves of `piece`, which starts where `w` stands.
pub(crate) fn append(w: &mut WalkBuilder, piece: &TemporalWalk) {
    debug_assert_eq!((w.position(), w.now()), (piece.start_vertex(), piece.start_time()));
    for m in piece.moves() {
        w.wait_until(m.time);
        w.step(m.to);
    }
    w.wait_until(piece.end_time());
}

/// Routes `pairs` through the gap, allowing walks to swap destinations.
/// Entry `j` of the result starts at `pairs[j].0` and ends at
/// `pairs[target].1`, where `target` is the second component; the targets
/// form a permutation.
fn route_any(
    graph: &DirectedGraph,
    pairs: &[(VertexId, VertexId)],
    gap: (Time, Time),
) -> Result<Vec<(TemporalWalk, usize)>, SolveError> {
    for strategy in [GapStrategy::TwoPhase, GapStrategy::Sequential] {
        if let Ok(walks) = route_through_gap(graph, pairs, gap, strategy) {
            return Ok(walks.into_iter().enumerate().map(|(j, w)| (w, j)).collect());
        }
    }
    window_flow(graph, pairs, gap)
}

/// Routes the multiset of entry vertices to the multiset of exit vertices
/// with a flow through the explicit time expansion of the gap.
fn window_flow(
    graph: &DirectedGraph,
    pairs: &[(VertexId, VertexId)],
    (a, b): (Time, Time),
) -> Result<Vec<(TemporalWalk, usize)>, SolveError> {
    let n = graph.n();
    let m = pairs.len() as u64;
    let span = usize::try_from(b - a).map_err(|_| SolveError::Internal("gap too long to expand".into()))?;
    let node = |i: usize, v: VertexId| i * n + v;
    let (source, sink) = ((span + 1) * n, (span + 1) * n + 1);
    let mut arcs = Vec::new();
    for i in 0..span {
        for v in 0..n {
            arcs.push(FlowArc { from: node(i, v), to: node(i + 1, v), lower: 0, upper: m, cost: 0 });
        }
        for &(u, v) in graph.edges() {
            arcs.push(FlowArc { from: node(i, u), to: node(i + 1, v), lower: 0, upper: 1, cost: 0 });
        }
    }
    for v in 0..n {
        let out = pairs.iter().filter(|p| p.0 == v).count() as u64;
        let inn = pairs.iter().filter(|p| p.1 == v).count() as u64;
        arcs.push(FlowArc { from: source, to: node(0, v), lower: out, upper: out, cost: 0 });
        arcs.push(FlowArc { from: node(span, v), to: sink, lower: inn, upper: inn, cost: 0 });
    }
    let net = FlowNetwork { node_count: (span + 1) * n + 2, source, sink, arcs };
    let flow = feasible_flow_with_lower_bounds(&net, m)
        .ok_or_else(|| SolveError::Internal(format!("no routing through the gap ({a}, {b})")))?;
    let mut starts_left: Vec<bool> = vec![true; pairs.len()];
    let mut ends_left: Vec<bool> = vec![true; pairs.len()];
    let mut routed: Vec<Option<(TemporalWalk, usize)>> = vec![None; pairs.len()];
    for path in decompose_paths(&net, &flow) {
        let verts: Vec<VertexId> = path
            .iter()
            .map(|&e| net.arcs[e].to)
            .filter(|&x| x < source)
            .map(|x| x % n)
            .collect();
        let (u, w) = (verts[0], *verts.last().unwrap());
        let j = (0..pairs.len()).find(|&j| starts_left[j] && pairs[j].0 == u).expect("flow starts at an entry");
        let t = (0..pairs.len()).find(|&t| ends_left[t] && pairs[t].1 == w).expect("flow ends at an exit");
        starts_left[j] = false;
        ends_left[t] = false;
        let mut walk = WalkBuilder::new(u, a);
        for &v in &verts[1..] {
            walk.step(v);
        }
        routed[j] = Some((walk.finish(), t));
    }
    Ok(routed.into_iter().map(|r| r.expect("every entry is routed")).collect())
}
