use super::{Capacity, LayeredNetwork, NodeId};

/// A directed multigraph with stable edge ids and adjacency lists sorted by
/// `(neighbour, edge id)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StaticGraph {
    edges: Vec<(usize, usize)>,
    out: Vec<Vec<(usize, usize)>>,
    inc: Vec<Vec<(usize, usize)>>,
}

impl StaticGraph {
    pub fn new(n: usize) -> Self {
        Self { edges: Vec::new(), out: vec![Vec::new(); n], inc: vec![Vec::new(); n] }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut g = Self::new(n);
        for (u, v) in edges {
            g.add_edge(u, v);
        }
        g.sort_adjacency();
        g
    }

    pub fn vertex_count(&self) -> usize {
        self.out.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn add_vertex(&mut self) -> usize {
        self.out.push(Vec::new());
        self.inc.push(Vec::new());
        self.out.len() - 1
    }

    /// Appends edge `u → v` and returns its id. Adjacency stays sorted only
    /// if edges are added in `(u, v)` order; call
    /// [`StaticGraph::sort_adjacency`] otherwise.
    pub fn add_edge(&mut self, u: usize, v: usize) -> usize {
        let id = self.edges.len();
        self.edges.push((u, v));
        self.out[u].push((v, id));
        self.inc[v].push((u, id));
        id
    }

    pub fn sort_adjacency(&mut self) {
        for list in self.out.iter_mut().chain(self.inc.iter_mut()) {
            list.sort_unstable();
        }
    }

    /// Outgoing `(head, edge id)` pairs of `u`.
    pub fn out_edges(&self, u: usize) -> &[(usize, usize)] {
        &self.out[u]
    }

    /// Incoming `(tail, edge id)` pairs of `v`.
    pub fn in_edges(&self, v: usize) -> &[(usize, usize)] {
        &self.inc[v]
    }

    /// True when there are no loops and no parallel edges.
    pub fn is_simple(&self) -> bool {
        self.out.iter().enumerate().all(|(u, list)| {
            list.iter().all(|&(v, _)| v != u) && list.windows(2).all(|w| w[0].0 != w[1].0)
        })
    }
}

/// Result of [`parallelize_subdivide`].
#[derive(Clone, Debug)]
pub struct PsGraph {
    pub graph: StaticGraph,
    /// Network node of each vertex; `None` for subdivision vertices.
    pub net_node: Vec<Option<NodeId>>,
    /// Network edge subdivided by each vertex; `None` for node vertices.
    pub net_edge: Vec<Option<usize>>,
}

impl PsGraph {
    /// Maps a vertex path of the simple graph back to network nodes,
    /// skipping subdivision vertices.
    pub fn to_net_path(&self, path: &[usize]) -> Vec<NodeId> {
        path.iter().filter_map(|&x| self.net_node[x]).collect()
    }

    /// Network edges traversed by a vertex path of the simple graph.
    pub fn net_edges_of(&self, path: &[usize]) -> Vec<usize> {
        path.iter().filter_map(|&x| self.net_edge[x]).collect()
    }
}

/// Replaces every edge of unbounded capacity by `copies` parallel copies,
/// then subdivides every edge once. The result is a simple digraph whose
/// edge-disjoint paths correspond to integral flows in the network in
/// which each original unit edge carries at most one unit and each
/// unbounded edge at most `copies`.
pub fn parallelize_subdivide(net: &LayeredNetwork, copies: usize) -> PsGraph {
    let base = net.node_count();
    let mut graph = StaticGraph::new(base);
    let mut net_node: Vec<Option<NodeId>> = (0..base).map(Some).collect();
    let mut net_edge = vec![None; base];
    for (id, e) in net.edges().iter().enumerate() {
        let count = match e.upper {
            Capacity::Unit => 1,
            Capacity::Infinite => copies.max(1),
        };
        for _ in 0..count {
            let mid = graph.add_vertex();
            net_node.push(None);
            net_edge.push(Some(id));
            graph.add_edge(e.from, mid);
            graph.add_edge(mid, e.to);
        }
    }
    graph.sort_adjacency();
    PsGraph { graph, net_node, net_edge }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expansion::{build_expansion, EdgeKind, ExpansionMode, ExpansionOptions};
    use crate::model::{Demand, DirectedGraph, Instance, Variant};

    #[test]
    fn ps_is_simple_and_counts_copies() {
        let g = DirectedGraph::bidirected(2, [(0, 1)]).unwrap();
        let inst = Instance::new(g, [Demand::new(0, 1, 1)], 3, None, Variant::Unconstrained).unwrap();
        let net = build_expansion(&inst, ExpansionOptions::new(ExpansionMode::Se, None)).unwrap();
        let net = net.without_kind(EdgeKind::Demand);
        let ps = parallelize_subdivide(&net, 3);
        assert!(ps.graph.is_simple());
        // two waits with three copies each, one non-demand move
        assert_eq!(ps.graph.edge_count(), 2 * (2 * 3 + 1));
        let path = [0, 4, 2];
        assert_eq!(ps.to_net_path(&path), vec![0, 2]);
    }

    #[test]
    fn static_graph_detects_parallel_edges() {
        assert!(StaticGraph::from_edges(2, [(0, 1), (1, 0)]).is_simple());
        assert!(!StaticGraph::from_edges(2, [(0, 1), (0, 1)]).is_simple());
        assert!(!StaticGraph::from_edges(1, [(0, 0)]).is_simple());
    }
}
