use crate::error::RoutingError;
use crate::model::{DirectedGraph, Time, TemporalWalk, VertexId, WalkBuilder};
use std::collections::VecDeque;

/// How [`route_through_gap`] schedules walks through an idle interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GapStrategy {
    /// Walk `i` departs at `a + i·(n − 1)` and follows a shortest path.
    /// Needs `k·(n − 1)` steps for `k` pairs.
    Sequential,
    /// Walks gather at a common vertex along a BFS in-tree with distinct
    /// arrival times, then leave it one per step along a BFS out-tree.
    /// Needs roughly `k` plus twice the tree depth steps.
    TwoPhase,
}

/// Routes walk `i` from `(pairs[i].0, a)` to `(pairs[i].1, b)` so that no
/// two walks use the same temporal edge. Pairs with equal endpoints wait.
pub fn route_through_gap(
    graph: &DirectedGraph,
    pairs: &[(VertexId, VertexId)],
    (a, b): (Time, Time),
    strategy: GapStrategy,
) -> Result<Vec<TemporalWalk>, RoutingError> {
    debug_assert!(a <= b);
    let mut paths = Vec::with_capacity(pairs.len());
    for &(s, z) in pairs {
        paths.push(graph.shortest_path(s, z).ok_or(RoutingError::NoRoute(s, z))?);
    }
    match strategy {
        GapStrategy::Sequential => sequential(graph.n(), &paths, a, b),
        GapStrategy::TwoPhase => two_phase(graph, pairs, a, b),
    }
}

fn sequential(n: usize, paths: &[Vec<VertexId>], a: Time, b: Time) -> Result<Vec<TemporalWalk>, RoutingError> {
    let slot = n.saturating_sub(1) as u64;
    let movers = paths.iter().filter(|p| p.len() > 1).count() as u64;
    let needed = movers * slot;
    if b - a < needed {
        return Err(RoutingError::GapTooShort { available: b - a, needed });
    }
    let mut index = 0;
    Ok(paths
        .iter()
        .map(|p| {
            let mut w = WalkBuilder::new(p[0], a);
            if p.len() > 1 {
                w.wait_until(a + index * slot).follow(p);
                index += 1;
            }
            w.wait_until(b);
            w.finish()
        })
        .collect())
}

/// BFS tree rooted at `root`, following edges forwards (`out`) or
/// backwards. Returns depth and parent; parents are the lowest-id option.
fn bfs_tree(graph: &DirectedGraph, root: VertexId, forward: bool) -> (Vec<Option<u64>>, Vec<VertexId>) {
    let n = graph.n();
    let mut depth = vec![None; n];
    let mut parent = vec![usize::MAX; n];
    depth[root] = Some(0);
    let mut queue = VecDeque::from([root]);
    while let Some(x) = queue.pop_front() {
        let next = if forward { graph.out_neighbors(x) } else { graph.in_neighbors(x) };
        for &y in next {
            if depth[y].is_none() {
                depth[y] = Some(depth[x].unwrap() + 1);
                parent[y] = x;
                queue.push_back(y);
            }
        }
    }
    (depth, parent)
}

struct Plan {
    root: VertexId,
    finish: Time,
    arrive: Vec<Time>,
    depart: Vec<Time>,
    into: (Vec<Option<u64>>, Vec<VertexId>),
    out_of: (Vec<Option<u64>>, Vec<VertexId>),
}

fn plan_at(graph: &DirectedGraph, pairs: &[(VertexId, VertexId)], root: VertexId, a: Time) -> Option<Plan> {
    let into = bfs_tree(graph, root, false);
    let out_of = bfs_tree(graph, root, true);
    let movers: Vec<usize> = (0..pairs.len()).filter(|&i| pairs[i].0 != pairs[i].1).collect();
    let mut arrive = vec![a; pairs.len()];
    let mut depart = vec![a; pairs.len()];
    let mut by_in = movers.clone();
    for &i in &movers {
        into.0[pairs[i].0]?;
        out_of.0[pairs[i].1]?;
    }
    by_in.sort_by_key(|&i| (into.0[pairs[i].0], i));
    let mut last: Option<Time> = None;
    for &i in &by_in {
        let earliest = a + into.0[pairs[i].0].unwrap();
        let t = last.map_or(earliest, |l| earliest.max(l + 1));
        arrive[i] = t;
        last = Some(t);
    }
    let gathered = last.unwrap_or(a);
    let mut by_out = movers;
    by_out.sort_by_key(|&i| (std::cmp::Reverse(out_of.0[pairs[i].1]), i));
    let mut finish = gathered;
    for (rank, &i) in by_out.iter().enumerate() {
        depart[i] = gathered + rank as u64;
        finish = finish.max(depart[i] + out_of.0[pairs[i].1].unwrap());
    }
    Some(Plan { root, finish, arrive, depart, into, out_of })
}

fn two_phase(
    graph: &DirectedGraph,
    pairs: &[(VertexId, VertexId)],
    a: Time,
    b: Time,
) -> Result<Vec<TemporalWalk>, RoutingError> {
    if pairs.iter().all(|&(s, z)| s == z) {
        return Ok(pairs.iter().map(|&(s, _)| WalkBuilder::new(s, a).wait_until(b).clone().finish()).collect());
    }
    let best = (0..graph.n())
        .filter_map(|r| plan_at(graph, pairs, r, a))
        .min_by_key(|p| (p.finish, p.root))
        .ok_or_else(|| {
            let (s, z) = pairs.iter().copied().find(|&(s, z)| s != z).unwrap_or_default();
            RoutingError::NoRoute(s, z)
        })?;
    if best.finish > b {
        return Err(RoutingError::GapTooShort { available: b - a, needed: best.finish - a });
    }
    let walks = pairs
        .iter()
        .enumerate()
        .map(|(i, &(s, z))| {
            let mut w = WalkBuilder::new(s, a);
            if s != z {
                let d_in = best.into.0[s].unwrap();
                w.wait_until(best.arrive[i] - d_in);
                let mut x = s;
                while x != best.root {
                    x = best.into.1[x];
                    w.step(x);
                }
                w.wait_until(best.depart[i]);
                let mut down = vec![z];
                let mut y = z;
                while y != best.root {
                    y = best.out_of.1[y];
                    down.push(y);
                }
                down.reverse();
                w.follow(&down);
            }
            w.wait_until(b);
            w.finish()
        })
        .collect();
    Ok(walks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Schedule;
    use std::collections::HashSet;

    fn disjoint(walks: &[TemporalWalk]) -> bool {
        let sched = Schedule::new(walks.iter().cloned());
        let mut seen = HashSet::new();
        let ok = sched.temporal_edges().all(|(_, m)| seen.insert(m));
        ok
    }

    fn check(graph: &DirectedGraph, pairs: &[(usize, usize)], gap: (Time, Time), strategy: GapStrategy) {
        let walks = route_through_gap(graph, pairs, gap, strategy).unwrap();
        assert!(disjoint(&walks));
        for (w, &(s, z)) in walks.iter().zip(pairs) {
            assert_eq!((w.start_vertex(), w.start_time()), (s, gap.0));
            assert_eq!((w.end_vertex(), w.end_time()), (z, gap.1));
            for m in w.moves() {
                assert!(graph.has_edge(m.from, m.to));
            }
        }
    }

    #[test]
    fn both_strategies_on_a_bidirected_path() {
        let g = DirectedGraph::bidirected(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let pairs = [(0, 3), (3, 0), (1, 2), (2, 2), (0, 3)];
        check(&g, &pairs, (5, 5 + 4 * 3), GapStrategy::Sequential);
        check(&g, &pairs, (5, 5 + 4 * 3), GapStrategy::TwoPhase);
    }

    #[test]
    fn two_phase_on_a_directed_cycle() {
        let g = DirectedGraph::new(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let pairs = [(0, 2), (1, 3), (2, 0), (3, 1), (0, 2)];
        check(&g, &pairs, (1, 40), GapStrategy::TwoPhase);
    }

    #[test]
    fn unreachable_and_short_gaps() {
        let g = DirectedGraph::new(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(route_through_gap(&g, &[(2, 0)], (1, 50), GapStrategy::TwoPhase), Err(RoutingError::NoRoute(2, 0)));
        assert!(matches!(
            route_through_gap(&g, &[(0, 2), (0, 2)], (1, 3), GapStrategy::Sequential),
            Err(RoutingError::GapTooShort { .. })
        ));
    }
}
