//! Approximation for the fewest walks under a length or lifespan bound.
//!
//! For `k = 0, 1, …` a cheapest flow of value `k` is computed in the
//! gap-compressed schedule completion network whose terminals attach to
//! every layer, with edge costs equal to elapsed time (lifespan) or moves
//! (length). A schedule with `k` walks of measure at most `h` yields such a
//! flow of cost at most `k·h`, so the first `k` passing that test is at
//! most the optimum. The flow paths become walks, and each walk is cut
//! greedily into pieces of measure at most `h`. With total cost at most
//! `k·h`, at most `2k − ⌈k/h⌉` pieces arise.

use crate::constrained::cross_gap;
use crate::error::SolveError;
use crate::expansion::{build_expansion, CostKind, ExpansionMode, ExpansionOptions, LayeredNetwork, Terminals};
use crate::flow::{decompose_paths, min_cost_flow_fixed_value, Flow, FlowNetwork};
use crate::model::{Instance, Schedule, TemporalWalk, Variant, WalkBuilder};
use crate::validate::{normalize, validate_schedule};

/// Outcome of one probe of [`approx_min_walks`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ApproxStep {
    pub k: usize,
    /// Cost of the cheapest flow of value `k`, or `None` without any.
    pub cost: Option<u64>,
    /// Whether the probe passed the `cost ≤ k·h` test.
    pub accepted: bool,
}

/// Result of [`approx_min_walks`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SegmentedSchedule {
    /// Pieces of each flow path, in path order.
    pub segments: Vec<Vec<TemporalWalk>>,
    /// All pieces as one schedule.
    pub schedule: Schedule,
    /// Smallest `k` whose flow passed the cost test.
    pub k_star: usize,
    /// Cost of that flow.
    pub total_cost: u64,
    /// Pieces with measure exactly `h`.
    pub big: usize,
    /// Pieces with measure below `h`.
    pub little: usize,
    /// Every probe in order.
    pub trace: Vec<ApproxStep>,
}

/// Splits `q` greedily into maximal prefixes of measure at most `h` and
/// trims each piece. A walk of measure 0 yields no pieces.
pub fn segment_path(q: &TemporalWalk, h: u64, variant: Variant) -> Vec<TemporalWalk> {
    assert!(h >= 1, "segments need h ≥ 1");
    let steps: Vec<_> = q.steps().collect();
    let mut pieces = Vec::new();
    let mut b = WalkBuilder::new(steps[0].0, steps[0].1);
    let mut spent = 0;
    for w in steps.windows(2) {
        let ((u, _), (v, _)) = (w[0], w[1]);
        let cost = match variant {
            Variant::Length => u64::from(u != v),
            _ => 1,
        };
        if spent + cost > h {
            pieces.push(std::mem::replace(&mut b, WalkBuilder::new(w[0].0, w[0].1)).finish());
            spent = 0;
        }
        b.step(v);
        spent += cost;
    }
    pieces.push(b.finish());
    pieces.into_iter().filter_map(|p| p.trimmed()).collect()
}

fn cost_of(inst: &Instance) -> Result<(CostKind, u64), SolveError> {
    match (inst.variant(), inst.h()) {
        (Variant::Lifespan, Some(h)) => Ok((CostKind::Tau, h)),
        (Variant::Length, Some(h)) => Ok((CostKind::Ell, h)),
        _ => Err(SolveError::UnsupportedVariant(inst.variant().name())),
    }
}

fn probe(inst: &Instance, k: usize, cost: CostKind) -> Result<(LayeredNetwork, FlowNetwork, Option<Flow>), SolveError> {
    let gamma = ((inst.n() - 1) * k).max(1) as u64;
    let opts = ExpansionOptions::new(ExpansionMode::SeHat(Terminals::Open), Some(gamma));
    let net = build_expansion(inst, opts)?;
    let fnet = net.to_flow_network(cost, k as u64);
    let flow = min_cost_flow_fixed_value(&fnet, k as u64);
    Ok((net, fnet, flow))
}

/// Cost of the cheapest flow of value `k` that [`approx_min_walks`] tests
/// against `k·h`, or `None` when no flow of that value exists.
pub fn cheapest_flow_cost(inst: &Instance, k: usize) -> Result<Option<u64>, SolveError> {
    let (cost, _) = cost_of(inst)?;
    if k == 0 {
        return Ok(inst.demands().is_empty().then_some(0));
    }
    Ok(probe(&normalize(inst).instance, k, cost)?.2.map(|f| f.cost))
}

/// Finds a schedule with at most `(2 − 1/h)` times the fewest walks
/// possible under the instance's bound. The walk budget `k` of `inst` is
/// ignored.
pub fn approx_min_walks(inst: &Instance) -> Result<SegmentedSchedule, SolveError> {
    let (cost_kind, h) = cost_of(inst)?;
    if h == 0 && !inst.demands().is_empty() {
        return Err(SolveError::BadInput("h = 0 admits no walk".into()));
    }
    let norm = normalize(inst);
    let inst_n = &norm.instance;
    let graph = inst_n.graph();
    let mut trace = Vec::new();
    for k in 0..=inst_n.demands().len() {
        if k == 0 {
            let accepted = inst_n.demands().is_empty();
            trace.push(ApproxStep { k, cost: accepted.then_some(0), accepted });
            if accepted {
                let schedule = Schedule::new([]);
                return Ok(SegmentedSchedule {
                    segments: Vec::new(),
                    schedule,
                    k_star: 0,
                    total_cost: 0,
                    big: 0,
                    little: 0,
                    trace,
                });
            }
            continue;
        }
        let (net, fnet, flow) = probe(inst_n, k, cost_kind)?;
        let cost = flow.as_ref().map(|f| f.cost);
        let accepted = cost.is_some_and(|c| c <= k as u64 * h);
        trace.push(ApproxStep { k, cost, accepted });
        let (Some(flow), true) = (flow, accepted) else { continue };
        let layers = net.layers();
        let mut segments = Vec::new();
        for (slot, path) in decompose_paths(&fnet, &flow).iter().enumerate() {
            let trace = net.trace(path);
            let Some(&(l0, v0)) = trace.first() else { continue };
            let mut b = WalkBuilder::new(v0, layers[l0]);
            for w in trace.windows(2) {
                let ((la, _), (lb, v)) = (w[0], w[1]);
                if layers[lb] == layers[la] + 1 {
                    b.step(v);
                } else {
                    cross_gap(&mut b, graph, v, (layers[la], layers[lb]), slot);
                }
            }
            let pieces = Schedule::new(segment_path(&b.finish(), h, inst_n.variant()));
            segments.push(norm.restore(&pieces).walks().to_vec());
        }
        let schedule = Schedule::new(segments.iter().flatten().cloned().collect::<Vec<TemporalWalk>>());
        let measure = |w: &TemporalWalk| w.measure(inst.variant()).unwrap();
        let big = schedule.walks().iter().filter(|w| measure(w) == h).count();
        let report = validate_schedule(&inst.with_k(schedule.len()), &schedule)
            .map_err(|e| SolveError::Internal(format!("approx: {e}")))?;
        if let Some(v) = report.first_violation() {
            return Err(SolveError::Internal(format!("approx produced an invalid schedule: {v}")));
        }
        return Ok(SegmentedSchedule {
            little: schedule.len() - big,
            big,
            schedule,
            segments,
            k_star: k,
            total_cost: flow.cost,
            trace,
        });
    }
    Err(SolveError::Internal("no probe up to |D| walks passed".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Demand, DirectedGraph};

    fn walk(steps: &[(usize, u64)]) -> TemporalWalk {
        TemporalWalk::from_steps(steps).unwrap()
    }

    #[test]
    fn waiting_only_has_no_length_segments() {
        let q = walk(&[(0, 1), (0, 2), (0, 3)]);
        assert!(segment_path(&q, 2, Variant::Length).is_empty());
    }

    #[test]
    fn greedy_cut_sizes() {
        let q = walk(&[(0, 1), (1, 2), (0, 3), (1, 4), (0, 5), (1, 6)]);
        let parts = segment_path(&q, 2, Variant::Length);
        let sizes: Vec<u64> = parts.iter().map(TemporalWalk::length).collect();
        assert_eq!(sizes, vec![2, 2, 1]);
        assert_eq!(segment_path(&q, 5, Variant::Lifespan).len(), 1);
    }

    #[test]
    fn unreachable_demands_need_one_walk_each() {
        let g = DirectedGraph::new(4, [(0, 1), (2, 3)]).unwrap();
        let d = [Demand::new(0, 1, 1), Demand::new(2, 3, 1), Demand::new(0, 1, 2)];
        let i = Instance::new(g, d, 1, Some(3), Variant::Length).unwrap();
        let r = approx_min_walks(&i).unwrap();
        assert_eq!((r.k_star, r.schedule.len()), (3, 3));
    }

    #[test]
    fn long_walk_is_split() {
        let g = DirectedGraph::bidirected(2, [(0, 1)]).unwrap();
        let d: Vec<Demand> = (1..=5).map(|t| if t % 2 == 1 { Demand::new(0, 1, t) } else { Demand::new(1, 0, t) }).collect();
        let i = Instance::new(g, d, 1, Some(2), Variant::Lifespan).unwrap();
        let r = approx_min_walks(&i).unwrap();
        assert_eq!(r.k_star, 3);
        assert!(r.schedule.len() <= 2 * 3 - 1);
        assert!(r.trace.iter().take(3).all(|s| !s.accepted));
    }
}
