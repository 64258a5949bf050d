//! Time-expanded networks: the static expansion, its gap-compressed form,
//! the in-out expansion, the parallelize-and-subdivide transform, and
//! constructive routing through compressed gaps.

mod ps;
mod routing;

pub use ps::{parallelize_subdivide, PsGraph, StaticGraph};
pub use routing::{route_through_gap, GapStrategy};

use crate::error::ExpansionError;
use crate::flow::{FlowArc, FlowNetwork};
use crate::model::{DistanceMatrix, Instance, Time, VertexId};
use std::fmt::Write as _;

/// Index of a node in a [`LayeredNetwork`].
pub type NodeId = usize;

/// Role of an edge in a layered network.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeKind {
    Wait,
    Move,
    Demand,
    Biclique,
    Source,
    Sink,
    InOut,
}

impl EdgeKind {
    pub fn name(self) -> &'static str {
        match self {
            EdgeKind::Wait => "wait",
            EdgeKind::Move => "move",
            EdgeKind::Demand => "demand",
            EdgeKind::Biclique => "biclique",
            EdgeKind::Source => "source",
            EdgeKind::Sink => "sink",
            EdgeKind::InOut => "in-out",
        }
    }
}

/// Upper end of a flow range.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Capacity {
    Unit,
    Infinite,
}

/// What a node of a layered network stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NodeKind {
    /// Vertex `vertex` at layer `layer` of a static expansion.
    Layer { layer: usize, vertex: VertexId },
    /// In-copy of `vertex` at `layer` of an in-out expansion.
    In { layer: usize, vertex: VertexId },
    /// Out-copy of `vertex` at `layer` of an in-out expansion.
    Out { layer: usize, vertex: VertexId },
    /// Interior node of a chain that bridges a compressed gap of an in-out
    /// expansion along a shortest `from`-`to` path.
    Chain { gap: usize, from: VertexId, to: VertexId },
    Source,
    Sink,
}

/// An edge of a layered network with its flow range and both cost functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NetEdge {
    pub kind: EdgeKind,
    pub from: NodeId,
    pub to: NodeId,
    pub lower: u64,
    pub upper: Capacity,
    /// Elapsed time along the edge.
    pub cost_tau: u64,
    /// Moves made along the edge.
    pub cost_ell: u64,
}

/// Which cost function a flow computation minimizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CostKind {
    None,
    Tau,
    Ell,
}

/// Compressed intervals of a network. Each entry `(a, b)` records that
/// layer time `a` is joined to layer time `b` by a biclique, skipping the
/// irrelevant time steps in between.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GapMap {
    pub gamma: Option<u64>,
    pub gaps: Vec<(Time, Time)>,
}

/// How s and z attach to a flow network.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Terminals {
    /// s feeds the first layer and the last layer drains into z.
    Boundary,
    /// s feeds, and z drains, every layer. Walks then pay τ-cost only
    /// between their first and last node.
    Open,
}

/// Which network [`build_expansion`] produces.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpansionMode {
    /// Plain static expansion without terminals.
    Se,
    /// Schedule completion flow network with terminals and flow ranges.
    SeHat(Terminals),
}

/// Parameters for [`build_expansion`].
#[derive(Clone, Copy, Debug)]
pub struct ExpansionOptions {
    pub mode: ExpansionMode,
    /// Gap threshold; `None` builds the uncompressed expansion.
    pub gamma: Option<u64>,
    /// Largest layer count allowed for uncompressed builds.
    pub debug_layer_cap: u64,
}

impl ExpansionOptions {
    pub fn new(mode: ExpansionMode, gamma: Option<u64>) -> Self {
        Self { mode, gamma, debug_layer_cap: 200_000 }
    }
}

/// A layered static network over retained time steps.
#[derive(Clone, Debug)]
pub struct LayeredNetwork {
    n: usize,
    layers: Vec<Time>,
    nodes: Vec<NodeKind>,
    edges: Vec<NetEdge>,
    source: Option<NodeId>,
    sink: Option<NodeId>,
    gaps: GapMap,
    inout: bool,
}

impl LayeredNetwork {
    /// Number of vertices per layer.
    pub fn vertices_per_layer(&self) -> usize {
        self.n
    }

    /// Timestamps of the retained layers, strictly increasing.
    pub fn layers(&self) -> &[Time] {
        &self.layers
    }

    pub fn nodes(&self) -> &[NodeKind] {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edges(&self) -> &[NetEdge] {
        &self.edges
    }

    pub fn source(&self) -> Option<NodeId> {
        self.source
    }

    pub fn sink(&self) -> Option<NodeId> {
        self.sink
    }

    pub fn gaps(&self) -> &GapMap {
        &self.gaps
    }

    /// Layer index of time `t`, if retained.
    pub fn layer_of(&self, t: Time) -> Option<usize> {
        self.layers.binary_search(&t).ok()
    }

    /// Node of vertex `v` at layer `layer` of a static expansion.
    pub fn node(&self, layer: usize, v: VertexId) -> NodeId {
        debug_assert!(!self.inout);
        layer * self.n + v
    }

    /// In-copy of `v` at `layer` of an in-out expansion.
    pub fn in_node(&self, layer: usize, v: VertexId) -> NodeId {
        debug_assert!(self.inout);
        2 * (layer * self.n + v)
    }

    /// Out-copy of `v` at `layer` of an in-out expansion.
    pub fn out_node(&self, layer: usize, v: VertexId) -> NodeId {
        debug_assert!(self.inout);
        2 * (layer * self.n + v) + 1
    }

    /// Time step and vertex of a layer node, in- or out-copy.
    pub fn time_vertex(&self, node: NodeId) -> Option<(Time, VertexId)> {
        match self.nodes[node] {
            NodeKind::Layer { layer, vertex } | NodeKind::In { layer, vertex } | NodeKind::Out { layer, vertex } => {
                Some((self.layers[layer], vertex))
            }
            _ => None,
        }
    }

    /// Layer nodes visited by a path given as edge indices, as
    /// `(layer, vertex)` pairs; terminals are skipped.
    pub fn trace(&self, path: &[usize]) -> Vec<(usize, VertexId)> {
        let mut out = Vec::with_capacity(path.len() + 1);
        let mut push = |node: NodeId| {
            if let NodeKind::Layer { layer, vertex } = self.nodes[node] {
                if out.last() != Some(&(layer, vertex)) {
                    out.push((layer, vertex));
                }
            }
        };
        for &e in path {
            push(self.edges[e].from);
            push(self.edges[e].to);
        }
        out
    }

    /// Copy of the network without edges of `kind`.
    pub fn without_kind(&self, kind: EdgeKind) -> LayeredNetwork {
        let mut net = self.clone();
        net.edges.retain(|e| e.kind != kind);
        net
    }

    /// Flow network view: edge `i` of the result is edge `i` of `self`.
    /// Infinite capacities become `inf`.
    pub fn to_flow_network(&self, cost: CostKind, inf: u64) -> FlowNetwork {
        let arcs = self
            .edges
            .iter()
            .map(|e| FlowArc {
                from: e.from,
                to: e.to,
                lower: e.lower,
                upper: match e.upper {
                    Capacity::Unit => 1,
                    Capacity::Infinite => inf,
                },
                cost: match cost {
                    CostKind::None => 0,
                    CostKind::Tau => e.cost_tau,
                    CostKind::Ell => e.cost_ell,
                },
            })
            .collect();
        FlowNetwork {
            node_count: self.nodes.len(),
            source: self.source.expect("flow networks have a source"),
            sink: self.sink.expect("flow networks have a sink"),
            arcs,
        }
    }

    /// Text dump, one edge per line: `kind from to lower upper cost_tau cost_ell`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let label = |id: NodeId| match self.nodes[id] {
            NodeKind::Layer { layer, vertex } => format!("v{vertex}@{}", self.layers[layer]),
            NodeKind::In { layer, vertex } => format!("v{vertex}@{}in", self.layers[layer]),
            NodeKind::Out { layer, vertex } => format!("v{vertex}@{}out", self.layers[layer]),
            NodeKind::Chain { gap, from, to } => format!("chain{gap}:{from}-{to}#{id}"),
            NodeKind::Source => "s".to_string(),
            NodeKind::Sink => "z".to_string(),
        };
        for e in &self.edges {
            let upper = match e.upper {
                Capacity::Unit => "1".to_string(),
                Capacity::Infinite => "inf".to_string(),
            };
            let _ = writeln!(
                out,
                "{} {} {} {} {} {} {}",
                e.kind.name(),
                label(e.from),
                label(e.to),
                e.lower,
                upper,
                e.cost_tau,
                e.cost_ell
            );
        }
        out
    }

    fn push_node(&mut self, kind: NodeKind) -> NodeId {
        self.nodes.push(kind);
        self.nodes.len() - 1
    }

    fn push_edge(&mut self, kind: EdgeKind, from: NodeId, to: NodeId, upper: Capacity, cost_tau: u64, cost_ell: u64) {
        let lower = u64::from(kind == EdgeKind::Demand);
        self.edges.push(NetEdge { kind, from, to, lower, upper, cost_tau, cost_ell });
    }
}

/// Retained layer times for the relevant times `relevant` and the gaps
/// bridged by bicliques. Every relevant time and its successor are kept,
/// as is `Λ + 1`. An irrelevant stretch strictly between relevant times
/// `t1 < t2` of at least `gamma` steps keeps only `t1 + 1` and is bridged
/// to `t2`; shorter stretches are kept entirely. A single idle step is
/// never a gap since bridging it would skip nothing.
pub(crate) fn retained_layers(relevant: &[Time], gamma: Option<u64>) -> (Vec<Time>, Vec<(Time, Time)>) {
    let mut layers = Vec::new();
    let mut gaps = Vec::new();
    for (i, &t1) in relevant.iter().enumerate() {
        layers.push(t1);
        let Some(&t2) = relevant.get(i + 1) else {
            layers.push(t1 + 1);
            break;
        };
        let idle = t2 - t1 - 1;
        match gamma {
            Some(g) if idle >= g.max(2) => {
                layers.push(t1 + 1);
                gaps.push((t1 + 1, t2));
            }
            _ => layers.extend(t1 + 1..t2),
        }
    }
    (layers, gaps)
}

fn layers_for(inst: &Instance, gamma: Option<u64>, cap: u64) -> Result<(Vec<Time>, GapMap), ExpansionError> {
    if gamma == Some(0) {
        return Err(ExpansionError::ZeroGamma);
    }
    let relevant = inst.relevant_times();
    if relevant.is_empty() {
        return Ok((vec![1], GapMap { gamma, gaps: vec![] }));
    }
    if gamma.is_none() {
        let count = inst.lambda() + 2 - relevant[0];
        if count > cap {
            return Err(ExpansionError::TooManyLayers { layers: count, cap });
        }
    }
    let (layers, gaps) = retained_layers(&relevant, gamma);
    Ok((layers, GapMap { gamma, gaps }))
}

/// Builds the static expansion or the schedule completion flow network,
/// optionally compressing every irrelevant stretch of at least `gamma`
/// time steps into a single biclique transition.
///
/// Biclique edges join `u` to `w` only when `w` is reachable from `u`; a
/// walk can cross a gap between unreachable vertices in no schedule.
pub fn build_expansion(inst: &Instance, opts: ExpansionOptions) -> Result<LayeredNetwork, ExpansionError> {
    let (layers, gaps) = layers_for(inst, opts.gamma, opts.debug_layer_cap)?;
    let n = inst.n();
    let g = inst.graph();
    let dist = if gaps.gaps.is_empty() { None } else { Some(g.all_pairs_distances()) };
    let mut net = LayeredNetwork {
        n,
        layers: layers.clone(),
        nodes: Vec::with_capacity(layers.len() * n + 2),
        edges: Vec::new(),
        source: None,
        sink: None,
        gaps,
        inout: false,
    };
    for layer in 0..layers.len() {
        for vertex in 0..n {
            net.push_node(NodeKind::Layer { layer, vertex });
        }
    }
    for i in 0..layers.len().saturating_sub(1) {
        let (a, b) = (layers[i], layers[i + 1]);
        if b == a + 1 {
            for v in 0..n {
                net.push_edge(EdgeKind::Wait, i * n + v, (i + 1) * n + v, Capacity::Infinite, 1, 0);
            }
            for &(u, v) in g.edges() {
                let (kind, upper) =
                    if inst.is_demand(u, v, a) { (EdgeKind::Demand, Capacity::Unit) } else { (EdgeKind::Move, Capacity::Unit) };
                net.push_edge(kind, i * n + u, (i + 1) * n + v, upper, 1, 1);
            }
        } else {
            push_biclique(&mut net, dist.as_ref().expect("gaps imply distances"), i, b - a);
        }
    }
    if let ExpansionMode::SeHat(terminals) = opts.mode {
        let s = net.push_node(NodeKind::Source);
        let z = net.push_node(NodeKind::Sink);
        net.source = Some(s);
        net.sink = Some(z);
        let last = layers.len() - 1;
        let (first_fed, last_fed) = match terminals {
            Terminals::Boundary => (0..=0, last..=last),
            Terminals::Open => (0..=last, 0..=last),
        };
        for layer in first_fed {
            for v in 0..n {
                net.push_edge(EdgeKind::Source, s, layer * n + v, Capacity::Infinite, 0, 0);
            }
        }
        for layer in last_fed {
            for v in 0..n {
                net.push_edge(EdgeKind::Sink, layer * n + v, z, Capacity::Infinite, 0, 0);
            }
        }
    }
    Ok(net)
}

fn push_biclique(net: &mut LayeredNetwork, dist: &DistanceMatrix, layer: usize, span: u64) {
    let n = net.n;
    for u in 0..n {
        for w in 0..n {
            if let Some(d) = dist.get(u, w) {
                net.push_edge(EdgeKind::Biclique, layer * n + u, (layer + 1) * n + w, Capacity::Infinite, span, d as u64);
            }
        }
    }
}

/// Builds the compressed in-out expansion.
///
/// Every retained time step has an in- and an out-copy of each vertex.
/// `v_t^in → v_t'^out` joins all retained `t ≤ t'`, so waiting of any
/// duration costs one edge, and a temporal edge `(u, v, t)` becomes
/// `u_t^out → v_{t+1}^in`. A static path for a walk with `m` moves from an
/// in-copy to an out-copy therefore has length `1 + 2m`. A compressed gap
/// from layer time `a` to `b` is bridged, for every pair `u ≠ w` with `w`
/// reachable from `u`, by a chain from `u_a^out` to `w_b^in` of length
/// `2·d(u, w) − 1`, which preserves that accounting for walks crossing it
/// along a shortest path.
pub fn build_inout(inst: &Instance, gamma: u64) -> Result<LayeredNetwork, ExpansionError> {
    let (layers, gaps) = layers_for(inst, Some(gamma), u64::MAX)?;
    let n = inst.n();
    let g = inst.graph();
    let dist = if gaps.gaps.is_empty() { None } else { Some(g.all_pairs_distances()) };
    let mut net = LayeredNetwork {
        n,
        layers: layers.clone(),
        nodes: Vec::with_capacity(2 * layers.len() * n),
        edges: Vec::new(),
        source: None,
        sink: None,
        gaps,
        inout: true,
    };
    for layer in 0..layers.len() {
        for vertex in 0..n {
            net.push_node(NodeKind::In { layer, vertex });
            net.push_node(NodeKind::Out { layer, vertex });
        }
    }
    for v in 0..n {
        for i in 0..layers.len() {
            for j in i..layers.len() {
                let span = layers[j] - layers[i];
                net.push_edge(EdgeKind::InOut, net.in_node(i, v), net.out_node(j, v), Capacity::Infinite, span, 0);
            }
        }
    }
    let mut gap_index = 0;
    for i in 0..layers.len().saturating_sub(1) {
        let (a, b) = (layers[i], layers[i + 1]);
        if b == a + 1 {
            for &(u, v) in g.edges() {
                let kind = if inst.is_demand(u, v, a) { EdgeKind::Demand } else { EdgeKind::Move };
                net.push_edge(kind, net.out_node(i, u), net.in_node(i + 1, v), Capacity::Unit, 1, 1);
            }
            continue;
        }
        let dist = dist.as_ref().expect("gaps imply distances");
        for u in 0..n {
            for w in 0..n {
                let Some(d) = dist.get(u, w).filter(|&d| d > 0) else { continue };
                let mut prev = net.out_node(i, u);
                for _ in 0..2 * d - 2 {
                    let mid = net.push_node(NodeKind::Chain { gap: gap_index, from: u, to: w });
                    net.push_edge(EdgeKind::Biclique, prev, mid, Capacity::Infinite, 0, 0);
                    prev = mid;
                }
                let end = net.in_node(i + 1, w);
                net.push_edge(EdgeKind::Biclique, prev, end, Capacity::Infinite, b - a, d as u64);
            }
        }
        gap_index += 1;
    }
    Ok(net)
}
