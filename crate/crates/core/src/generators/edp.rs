use super::GroundTruth;
use crate::error::GenError;
use crate::model::{Demand, DirectedGraph, Instance, Time, Variant, VertexId};
use std::cmp::Reverse;
use std::collections::BinaryHeap;

/// Largest edge count for which ground truth is computed exhaustively.
const EXHAUSTIVE_EDGE_LIMIT: usize = 14;

/// Topological order of a DAG, taking the lowest ready vertex first.
pub fn topological_order(g: &DirectedGraph) -> Result<Vec<VertexId>, GenError> {
    let mut indeg: Vec<usize> = (0..g.n()).map(|v| g.in_neighbors(v).len()).collect();
    let mut ready: BinaryHeap<Reverse<VertexId>> = (0..g.n()).filter(|&v| indeg[v] == 0).map(Reverse).collect();
    let mut order = Vec::with_capacity(g.n());
    while let Some(Reverse(u)) = ready.pop() {
        order.push(u);
        for &v in g.out_neighbors(u) {
            indeg[v] -= 1;
            if indeg[v] == 0 {
                ready.push(Reverse(v));
            }
        }
    }
    if order.len() < g.n() {
        return Err(GenError::Cyclic);
    }
    Ok(order)
}

/// Builds the walk scheduling instance for edge-disjoint paths on a DAG.
///
/// With `φ(v)` the 1-based topological position, every edge `(u, v)` is
/// subdivided into `φ(v) − φ(u)` edges, so a walk that keeps moving sits
/// on each vertex exactly at time `φ` (up to a global shift). Pair `i`
/// gets an entry path of `h − (φ(z) − φ(s)) − 1` edges ending in `s`, whose
/// first edge is demanded, and an exit edge `z → z'`, demanded at time
/// `φ(z)`. The bound is `h = n + 1` and `k` is the number of pairs. Times
/// are shifted so the earliest demand is at time 1.
pub fn gen_from_edp_dag(
    dag: &DirectedGraph,
    pairs: &[(VertexId, VertexId)],
    variant: Variant,
) -> Result<(Instance, GroundTruth), GenError> {
    if variant == Variant::Unconstrained {
        return Err(GenError::BadParameters("the reduction needs a constrained variant".into()));
    }
    if let Some(i) = pairs.iter().position(|&(s, z)| s == z) {
        return Err(GenError::DegeneratePair(i));
    }
    for &(s, z) in pairs {
        for v in [s, z] {
            if v >= dag.n() {
                return Err(GenError::BadParameters(format!("terminal {v} is not a vertex")));
            }
        }
    }
    let order = topological_order(dag)?;
    let n = dag.n();
    let mut phi = vec![0i64; n];
    for (i, &v) in order.iter().enumerate() {
        phi[v] = i as i64 + 1;
    }
    let h = n as i64 + 1;
    let mut count = n;
    let mut edges = Vec::new();
    let fresh = |count: &mut usize| {
        *count += 1;
        *count - 1
    };
    for &(u, v) in dag.edges() {
        let mut prev = u;
        for _ in 1..phi[v] - phi[u] {
            let x = fresh(&mut count);
            edges.push((prev, x));
            prev = x;
        }
        edges.push((prev, v));
    }
    let mut raw: Vec<(VertexId, VertexId, i64)> = Vec::new();
    for &(s, z) in pairs {
        let entry = h - (phi[z] - phi[s]) - 1;
        let a = fresh(&mut count);
        let mut prev = a;
        let mut b = s;
        for step in 1..=entry {
            let x = if step == entry { s } else { fresh(&mut count) };
            edges.push((prev, x));
            if step == 1 {
                b = x;
            }
            prev = x;
        }
        let zp = fresh(&mut count);
        edges.push((z, zp));
        raw.push((a, b, phi[z] - h + 1));
        raw.push((z, zp, phi[z]));
    }
    let shift = 1 - raw.iter().map(|d| d.2).min().unwrap_or(1);
    let demands: Vec<Demand> = raw.iter().map(|&(u, v, t)| Demand::new(u, v, (t + shift) as Time)).collect();
    let (graph, map) = DirectedGraph::new(count, edges)?.strip_isolated();
    let mut new_id = vec![usize::MAX; count];
    for (i, &v) in map.iter().enumerate() {
        new_id[v] = i;
    }
    let demands = demands.into_iter().map(|d| Demand::new(new_id[d.u], new_id[d.v], d.t));
    let inst = Instance::new(graph, demands, pairs.len(), Some(h as u64), variant)?;
    let truth = if dag.edge_count() <= EXHAUSTIVE_EDGE_LIMIT {
        GroundTruth::from(exhaustive_edp(dag, pairs))
    } else {
        GroundTruth::Unknown
    };
    Ok((inst, truth))
}

/// Whether the pairs admit pairwise edge-disjoint paths, by backtracking
/// over all simple paths.
pub fn exhaustive_edp(g: &DirectedGraph, pairs: &[(VertexId, VertexId)]) -> bool {
    let mut used_edges = vec![false; g.edge_count()];
    edp_rec(g, pairs, &mut used_edges)
}

fn edp_rec(g: &DirectedGraph, pairs: &[(VertexId, VertexId)], used: &mut Vec<bool>) -> bool {
    let Some((&(s, z), rest)) = pairs.split_first() else { return true };
    let mut on_path = vec![false; g.n()];
    on_path[s] = true;
    edp_paths(g, s, z, used, &mut on_path, &mut |used| edp_rec(g, rest, used))
}

fn edp_paths(
    g: &DirectedGraph,
    at: VertexId,
    z: VertexId,
    used: &mut Vec<bool>,
    on_path: &mut Vec<bool>,
    done: &mut dyn FnMut(&mut Vec<bool>) -> bool,
) -> bool {
    if at == z {
        return done(used);
    }
    for &v in g.out_neighbors(at) {
        let e = g.edge_index(at, v).expect("adjacent");
        if used[e] || on_path[v] {
            continue;
        }
        used[e] = true;
        on_path[v] = true;
        if edp_paths(g, v, z, used, on_path, done) {
            return true;
        }
        on_path[v] = false;
        used[e] = false;
    }
    false
}

/// Whether the pairs admit pairwise vertex-disjoint paths.
pub fn exhaustive_vdp(g: &DirectedGraph, pairs: &[(VertexId, VertexId)]) -> bool {
    let mut used = vec![false; g.n()];
    vdp_rec(g, pairs, &mut used)
}

fn vdp_rec(g: &DirectedGraph, pairs: &[(VertexId, VertexId)], used: &mut Vec<bool>) -> bool {
    let Some((&(s, z), rest)) = pairs.split_first() else { return true };
    if used[s] {
        return false;
    }
    used[s] = true;
    let ok = vdp_paths(g, s, z, used, &mut |used| vdp_rec(g, rest, used));
    used[s] = false;
    ok
}

fn vdp_paths(
    g: &DirectedGraph,
    at: VertexId,
    z: VertexId,
    used: &mut Vec<bool>,
    done: &mut dyn FnMut(&mut Vec<bool>) -> bool,
) -> bool {
    if at == z {
        return done(used);
    }
    for &v in g.out_neighbors(at) {
        if used[v] {
            continue;
        }
        used[v] = true;
        if vdp_paths(g, v, z, used, done) {
            return true;
        }
        used[v] = false;
    }
    false
}

/// Direction of [`vdp_edp_transform`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DisjointnessTransform {
    /// Vertex-disjoint instance to an equivalent edge-disjoint one.
    VertexToEdge,
    /// Edge-disjoint instance to an equivalent vertex-disjoint one.
    EdgeToVertex,
}

/// Transforms between vertex- and edge-disjoint path instances.
///
/// Vertex to edge: `v` becomes `v_in = 2v` and `v_out = 2v + 1` joined by
/// one edge, `(u, v)` becomes `(u_out, v_in)` and pair `(s, z)` becomes
/// `(s_in, z_out)`. Edge to vertex: each vertex gets `k` copies `v^i =
/// i·n + v`, each edge `(u, v)` a vertex `e` with edges `u^i → e → v^i` for
/// all copies, and pair `i` becomes `(s_i^i, z_i^i)`.
pub fn vdp_edp_transform(
    g: &DirectedGraph,
    pairs: &[(VertexId, VertexId)],
    direction: DisjointnessTransform,
) -> Result<(DirectedGraph, Vec<(VertexId, VertexId)>), GenError> {
    let n = g.n();
    match direction {
        DisjointnessTransform::VertexToEdge => {
            let edges = (0..n).map(|v| (2 * v, 2 * v + 1)).chain(g.edges().iter().map(|&(u, v)| (2 * u + 1, 2 * v)));
            let h = DirectedGraph::new(2 * n, edges)?;
            Ok((h, pairs.iter().map(|&(s, z)| (2 * s, 2 * z + 1)).collect()))
        }
        DisjointnessTransform::EdgeToVertex => {
            let k = pairs.len();
            if k > g.edge_count() {
                return Err(GenError::TooManyPairs { k, edges: g.edge_count() });
            }
            let mut edges = Vec::with_capacity(2 * k * g.edge_count());
            for (j, &(u, v)) in g.edges().iter().enumerate() {
                let e = k * n + j;
                for i in 0..k {
                    edges.push((i * n + u, e));
                    edges.push((e, i * n + v));
                }
            }
            let h = DirectedGraph::new(k * n + g.edge_count(), edges)?;
            Ok((h, pairs.iter().enumerate().map(|(i, &(s, z))| (i * n + s, i * n + z)).collect()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Vertices a..e as 0..4 with the solution {ade, ac, bce}.
    fn three_pairs() -> (DirectedGraph, Vec<(usize, usize)>) {
        let g = DirectedGraph::new(5, [(0, 3), (3, 4), (0, 2), (1, 2), (2, 4)]).unwrap();
        (g, vec![(0, 4), (0, 2), (1, 4)])
    }

    #[test]
    fn five_vertices_give_bound_six() {
        let (g, pairs) = three_pairs();
        let (inst, truth) = gen_from_edp_dag(&g, &pairs, Variant::Length).unwrap();
        assert_eq!(inst.h(), Some(6));
        assert_eq!(inst.k(), 3);
        assert_eq!(inst.demands().len(), 6);
        assert_eq!(inst.first_time(), Some(1));
        assert_eq!(truth, GroundTruth::Feasible);
    }

    #[test]
    fn shared_bridge_is_infeasible() {
        let g = DirectedGraph::new(4, [(0, 2), (1, 2), (2, 3)]).unwrap();
        assert!(!exhaustive_edp(&g, &[(0, 3), (1, 3)]));
        let (_, truth) = gen_from_edp_dag(&g, &[(0, 3), (1, 3)], Variant::Lifespan).unwrap();
        assert_eq!(truth, GroundTruth::Infeasible);
    }

    #[test]
    fn rejects_cycles_and_degenerate_pairs() {
        let c = DirectedGraph::new(2, [(0, 1), (1, 0)]).unwrap();
        assert_eq!(gen_from_edp_dag(&c, &[(0, 1)], Variant::Length).unwrap_err(), GenError::Cyclic);
        let (g, _) = three_pairs();
        assert_eq!(gen_from_edp_dag(&g, &[(1, 1)], Variant::Length).unwrap_err(), GenError::DegeneratePair(0));
    }

    #[test]
    fn transforms_preserve_answers() {
        let (g, pairs) = three_pairs();
        let (h, p) = vdp_edp_transform(&g, &pairs, DisjointnessTransform::EdgeToVertex).unwrap();
        assert_eq!(h.n(), 3 * 5 + 5);
        assert_eq!(exhaustive_vdp(&h, &p), exhaustive_edp(&g, &pairs));
        let (h, p) = vdp_edp_transform(&g, &pairs, DisjointnessTransform::VertexToEdge).unwrap();
        assert_eq!(h.n(), 10);
        assert_eq!(exhaustive_edp(&h, &p), exhaustive_vdp(&g, &pairs));
    }

    #[test]
    fn single_edge_single_pair() {
        let g = DirectedGraph::new(2, [(0, 1)]).unwrap();
        for dir in [DisjointnessTransform::VertexToEdge, DisjointnessTransform::EdgeToVertex] {
            let (h, p) = vdp_edp_transform(&g, &[(0, 1)], dir).unwrap();
            assert!(exhaustive_edp(&h, &p) && exhaustive_vdp(&h, &p));
        }
        assert!(vdp_edp_transform(&g, &[(0, 1), (0, 1)], DisjointnessTransform::EdgeToVertex).is_err());
    }
}
