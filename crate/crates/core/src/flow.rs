//! Integral flows with lower bounds: feasibility by max-flow and
//! minimum-cost flow of fixed value by successive shortest paths.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

/// An arc with flow range `[lower, upper]` and a non-negative unit cost.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FlowArc {
    pub from: usize,
    pub to: usize,
    pub lower: u64,
    pub upper: u64,
    pub cost: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowNetwork {
    pub node_count: usize,
    pub source: usize,
    pub sink: usize,
    pub arcs: Vec<FlowArc>,
}

/// An integral s-z flow: one value per arc, its total value and cost.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flow {
    pub values: Vec<u64>,
    pub value: u64,
    pub cost: u64,
}

/// Residual graph shared by both algorithms.
struct Residual {
    head: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<u64>,
    cost: Vec<i64>,
}

impl Residual {
    fn new(n: usize) -> Self {
        Self { head: vec![Vec::new(); n], to: Vec::new(), cap: Vec::new(), cost: Vec::new() }
    }

    fn add(&mut self, u: usize, v: usize, cap: u64, cost: i64) -> usize {
        let id = self.to.len();
        self.head[u].push(id);
        self.to.push(v);
        self.cap.push(cap);
        self.cost.push(cost);
        self.head[v].push(id + 1);
        self.to.push(u);
        self.cap.push(0);
        self.cost.push(-cost);
        id
    }

    fn max_flow(&mut self, s: usize, t: usize) -> u64 {
        let n = self.head.len();
        let mut total = 0;
        loop {
            let mut level = vec![u32::MAX; n];
            level[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &e in &self.head[u] {
                    let v = self.to[e];
                    if self.cap[e] > 0 && level[v] == u32::MAX {
                        level[v] = level[u] + 1;
                        queue.push_back(v);
                    }
                }
            }
            if level[t] == u32::MAX {
                return total;
            }
            let mut it = vec![0usize; n];
            loop {
                let pushed = self.blocking(s, t, u64::MAX, &level, &mut it);
                if pushed == 0 {
                    break;
                }
                total += pushed;
            }
        }
    }

    fn blocking(&mut self, s: usize, t: usize, limit: u64, level: &[u32], it: &mut [usize]) -> u64 {
        // iterative DFS along level-increasing arcs
        let mut stack: Vec<usize> = Vec::new();
        let mut u = s;
        loop {
            if u == t {
                let pushed = stack.iter().map(|&e| self.cap[e]).min().unwrap_or(limit).min(limit);
                for &e in &stack {
                    self.cap[e] -= pushed;
                    self.cap[e ^ 1] += pushed;
                }
                return pushed;
            }
            let mut advanced = false;
            while it[u] < self.head[u].len() {
                let e = self.head[u][it[u]];
                let v = self.to[e];
                if self.cap[e] > 0 && level[v] == level[u] + 1 {
                    stack.push(e);
                    u = v;
                    advanced = true;
                    break;
                }
                it[u] += 1;
            }
            if !advanced {
                match stack.pop() {
                    Some(e) => {
                        u = self.to[e ^ 1];
                        it[u] += 1;
                    }
                    None => return 0,
                }
            }
        }
    }

    /// Sends up to `want` units from `s` to `t` along successive cheapest
    /// paths. Requires that the residual graph has no negative cycle and
    /// that all forward costs are non-negative initially.
    fn min_cost_flow(&mut self, s: usize, t: usize, want: u64) -> (u64, i64) {
        let n = self.head.len();
        let mut potential = vec![0i64; n];
        let (mut sent, mut spent) = (0u64, 0i64);
        while sent < want {
            let mut dist = vec![i64::MAX; n];
            let mut via = vec![usize::MAX; n];
            dist[s] = 0;
            let mut heap = BinaryHeap::from([Reverse((0i64, s))]);
            while let Some(Reverse((d, u))) = heap.pop() {
                if d > dist[u] {
                    continue;
                }
                for &e in &self.head[u] {
                    if self.cap[e] == 0 {
                        continue;
                    }
                    let v = self.to[e];
                    let nd = d + self.cost[e] + potential[u] - potential[v];
                    if nd < dist[v] {
                        dist[v] = nd;
                        via[v] = e;
                        heap.push(Reverse((nd, v)));
                    }
                }
            }
            if dist[t] == i64::MAX {
                break;
            }
            for v in 0..n {
                if dist[v] != i64::MAX {
                    potential[v] += dist[v];
                }
            }
            let mut push = want - sent;
            let mut v = t;
            while v != s {
                let e = via[v];
                push = push.min(self.cap[e]);
                v = self.to[e ^ 1];
            }
            let mut v = t;
            while v != s {
                let e = via[v];
                self.cap[e] -= push;
                self.cap[e ^ 1] += push;
                spent += self.cost[e] * push as i64;
                v = self.to[e ^ 1];
            }
            sent += push;
        }
        (sent, spent)
    }
}

/// Lower-bound reduction: arcs of `net` plus a return arc `sink → source`
/// with range `[ret_lower, ret_upper]`, with excess and deficit attached to
/// two fresh super terminals. Returns the residual graph, the residual arc
/// ids of the network arcs and of the return arc, the super terminals and
/// the total excess that must be routed.
struct Reduction {
    residual: Residual,
    arc_ids: Vec<usize>,
    back: usize,
    super_s: usize,
    super_t: usize,
    required: u64,
    lower_cost: u64,
}

fn reduce(net: &FlowNetwork, ret_lower: u64, ret_upper: u64) -> Option<Reduction> {
    let n = net.node_count;
    let (super_s, super_t) = (n, n + 1);
    let mut residual = Residual::new(n + 2);
    let mut excess = vec![0i128; n];
    let mut lower_cost = 0u64;
    let mut arc_ids = Vec::with_capacity(net.arcs.len());
    for a in &net.arcs {
        if a.lower > a.upper {
            return None;
        }
        arc_ids.push(residual.add(a.from, a.to, a.upper - a.lower, a.cost as i64));
        excess[a.to] += a.lower as i128;
        excess[a.from] -= a.lower as i128;
        lower_cost += a.lower * a.cost;
    }
    if ret_lower > ret_upper {
        return None;
    }
    let back = residual.add(net.sink, net.source, ret_upper - ret_lower, 0);
    excess[net.source] += ret_lower as i128;
    excess[net.sink] -= ret_lower as i128;
    let mut required = 0u64;
    for (v, &x) in excess.iter().enumerate() {
        if x > 0 {
            residual.add(super_s, v, x as u64, 0);
            required += x as u64;
        } else if x < 0 {
            residual.add(v, super_t, (-x) as u64, 0);
        }
    }
    Some(Reduction { residual, arc_ids, back, super_s, super_t, required, lower_cost })
}

fn extract(net: &FlowNetwork, red: &Reduction, ret_lower: u64) -> Flow {
    let values: Vec<u64> =
        net.arcs.iter().zip(&red.arc_ids).map(|(a, &id)| a.lower + red.residual.cap[id ^ 1]).collect();
    let value = ret_lower + red.residual.cap[red.back ^ 1];
    let cost = net.arcs.iter().zip(&values).map(|(a, &f)| a.cost * f).sum();
    Flow { values, value, cost }
}

/// Some integral flow respecting all ranges whose value is at most
/// `value_cap`, or `None` if there is none.
pub fn feasible_flow_with_lower_bounds(net: &FlowNetwork, value_cap: u64) -> Option<Flow> {
    let mut red = reduce(net, 0, value_cap)?;
    let got = red.residual.max_flow(red.super_s, red.super_t);
    (got == red.required).then(|| extract(net, &red, 0))
}

/// A cheapest integral flow of exactly `value` respecting all ranges, or
/// `None` if no flow of that value exists. Costs must be non-negative.
pub fn min_cost_flow_fixed_value(net: &FlowNetwork, value: u64) -> Option<Flow> {
    let mut red = reduce(net, value, value)?;
    let (sent, _) = red.residual.min_cost_flow(red.super_s, red.super_t, red.required);
    if sent != red.required {
        return None;
    }
    let flow = extract(net, &red, value);
    debug_assert!(flow.cost >= red.lower_cost);
    Some(flow)
}

/// True when `flow` respects every range, conserves flow away from the
/// terminals and has the stated value and cost.
pub fn check_flow(net: &FlowNetwork, flow: &Flow) -> bool {
    if flow.values.len() != net.arcs.len() {
        return false;
    }
    let mut balance = vec![0i128; net.node_count];
    let mut cost = 0u64;
    for (a, &f) in net.arcs.iter().zip(&flow.values) {
        if f < a.lower || f > a.upper {
            return false;
        }
        balance[a.from] -= f as i128;
        balance[a.to] += f as i128;
        cost += f * a.cost;
    }
    let v = flow.value as i128;
    balance.iter().enumerate().all(|(x, &b)| {
        if x == net.source {
            b == -v
        } else if x == net.sink {
            b == v
        } else {
            b == 0
        }
    }) && cost == flow.cost
}

/// Splits an acyclic flow into `value` unit paths from source to sink,
/// each a sequence of arc indices. At every node the lowest-index arc with
/// remaining flow is taken.
pub fn decompose_paths(net: &FlowNetwork, flow: &Flow) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); net.node_count];
    for (i, a) in net.arcs.iter().enumerate() {
        out[a.from].push(i);
    }
    let mut left = flow.values.clone();
    let mut next = vec![0usize; net.node_count];
    let mut paths = Vec::with_capacity(flow.value as usize);
    for _ in 0..flow.value {
        let mut path = Vec::new();
        let mut u = net.source;
        while u != net.sink {
            while left[out[u][next[u]]] == 0 {
                next[u] += 1;
            }
            let e = out[u][next[u]];
            left[e] -= 1;
            path.push(e);
            u = net.arcs[e].to;
            assert!(path.len() <= net.arcs.len(), "flow contains a cycle");
        }
        paths.push(path);
    }
    paths
}
