//! State-graph search, polynomial for every fixed `k`.
//!
//! A state at time step `t` is the number of walks not yet started plus
//! the multiset of active walks as `(position, capacity)`, where capacity
//! is the number of further steps (lifespan) or moves (length) a walk may
//! still take. A transition advances one step: every active walk finishes,
//! waits or moves, no two walks share an edge, fresh walks may start, and
//! every demand of the step is covered. Walk identities play no role, so
//! states are deduplicated per time step.
//!
//! Only relevant steps and the `n·k` steps after each are explored one by
//! one; beyond that window every walk just waits for the next relevant
//! step, since any routing through an idle stretch can be done by shortest
//! paths inside the window without more moves or a longer lifespan.

use crate::error::SolveError;
use crate::model::{Decision, Instance, Schedule, Time, Variant, VertexId, WalkBuilder};
use crate::validate::{checked, solve_preprocessed};
use std::collections::HashSet;

/// Limits and switches for [`solve_xp_k_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct XpOptions {
    /// Number of distinct states allowed before answering UNKNOWN.
    pub state_budget: u64,
    /// Skip idle time steps beyond `n·k` after each relevant step.
    pub compress_time: bool,
    /// Start walks only on uncovered demands, as opposed to on any free
    /// edge.
    pub restrict_activation: bool,
    /// Discard states with more active walks than this off the centre of a
    /// star graph.
    pub leaf_cap: Option<usize>,
}

impl Default for XpOptions {
    fn default() -> Self {
        Self { state_budget: 20_000_000, compress_time: true, restrict_activation: true, leaf_cap: None }
    }
}

/// Decides `inst` by forward search over the state graph. Returns UNKNOWN
/// when the state budget runs out.
pub fn solve_xp_k(inst: &Instance) -> Result<Decision, SolveError> {
    solve_xp_k_with(inst, &XpOptions::default())
}

/// [`solve_xp_k`] with explicit options.
pub fn solve_xp_k_with(inst: &Instance, opts: &XpOptions) -> Result<Decision, SolveError> {
    let center = match opts.leaf_cap {
        Some(_) => Some(inst.graph().star_center().ok_or(SolveError::NotAStar)?),
        None => None,
    };
    let d = solve_preprocessed(inst, |norm| {
        // normalization strips no vertex of a star, so the centre keeps its id
        Ok(Search::new(norm, opts, center).run())
    })?;
    checked(inst, d, "xp solver")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Active {
    pos: VertexId,
    cap: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Action {
    Finish,
    Wait,
    Move(usize),
}

#[derive(Clone, Debug)]
struct Node {
    unused: usize,
    walks: Vec<Active>,
    parent: usize,
    /// For each entry of `walks`: the parent entry it continues, or `None`
    /// with the vertex where it started.
    links: Vec<(Option<usize>, VertexId)>,
}

struct Search<'a> {
    inst: &'a Instance,
    opts: XpOptions,
    center: Option<VertexId>,
    h: u64,
    steps: Vec<Time>,
    states: u64,
}

impl<'a> Search<'a> {
    fn new(inst: &'a Instance, opts: &XpOptions, center: Option<VertexId>) -> Self {
        let lambda = inst.lambda();
        let window = (inst.n() * inst.k()) as u64;
        let steps: Vec<Time> = if opts.compress_time {
            let mut s: Vec<Time> = inst
                .relevant_times()
                .into_iter()
                .flat_map(|t| t..=(t + window).min(lambda + 1))
                .collect();
            s.push(lambda + 1);
            s.sort_unstable();
            s.dedup();
            s
        } else {
            (inst.first_time().unwrap_or(1)..=lambda + 1).collect()
        };
        Self { inst, opts: *opts, center, h: inst.h().unwrap_or(0), steps, states: 0 }
    }

    fn constrained(&self) -> bool {
        self.inst.variant().is_constrained()
    }

    fn run(&mut self) -> Decision {
        let root = Node { unused: self.inst.k(), walks: Vec::new(), parent: usize::MAX, links: Vec::new() };
        let mut layers: Vec<Vec<Node>> = vec![vec![root]];
        for i in 0..self.steps.len() - 1 {
            let (t, next) = (self.steps[i], self.steps[i + 1]);
            let mut seen: HashSet<(usize, Vec<Active>)> = HashSet::new();
            let mut out = Vec::new();
            for (pi, node) in layers[i].iter().enumerate() {
                let children =
                    if next == t + 1 { self.step(node, t) } else { vec![self.jump(node, next - t)] };
                for mut child in children {
                    if let (Some(cap), Some(c)) = (self.opts.leaf_cap, self.center) {
                        if child.walks.iter().filter(|w| w.pos != c).count() > cap {
                            continue;
                        }
                    }
                    if seen.insert((child.unused, child.walks.clone())) {
                        child.parent = pi;
                        out.push(child);
                        self.states += 1;
                        if self.states > self.opts.state_budget {
                            return Decision::Unknown("xp state budget exhausted".into());
                        }
                    }
                }
            }
            if out.is_empty() {
                return Decision::No;
            }
            layers.push(out);
        }
        Decision::Yes(self.rebuild(&layers))
    }

    /// All pure-waiting continuations across an idle stretch of `span` steps.
    fn jump(&self, node: &Node, span: u64) -> Node {
        let mut pairs: Vec<(Active, (Option<usize>, VertexId))> = Vec::new();
        for (i, w) in node.walks.iter().enumerate() {
            let cap = match self.inst.variant() {
                Variant::Lifespan if w.cap < span => continue,
                Variant::Lifespan => w.cap - span,
                _ => w.cap,
            };
            pairs.push((Active { pos: w.pos, cap }, (Some(i), w.pos)));
        }
        Self::assemble(node.unused, pairs)
    }

    fn step(&self, node: &Node, t: Time) -> Vec<Node> {
        let mut out = Vec::new();
        let mut actions = Vec::with_capacity(node.walks.len());
        let mut used = Vec::new();
        self.choose(node, t, &mut actions, &mut used, &mut out);
        out
    }

    fn choose(&self, node: &Node, t: Time, actions: &mut Vec<Action>, used: &mut Vec<usize>, out: &mut Vec<Node>) {
        let i = actions.len();
        if i == node.walks.len() {
            self.activate(node, t, actions, used, out);
            return;
        }
        let w = node.walks[i];
        let floor = if i > 0 && node.walks[i - 1] == w { actions[i - 1] } else { Action::Finish };
        let graph = self.inst.graph();
        let can_act = !self.constrained() || w.cap >= 1;
        let mut options = vec![Action::Finish];
        if can_act {
            options.push(Action::Wait);
            for &to in graph.out_neighbors(w.pos) {
                let e = graph.edge_index(w.pos, to).unwrap();
                if !used.contains(&e) {
                    options.push(Action::Move(e));
                }
            }
        }
        for a in options.into_iter().filter(|&a| a >= floor) {
            if let Action::Move(e) = a {
                used.push(e);
            }
            actions.push(a);
            self.choose(node, t, actions, used, out);
            actions.pop();
            if let Action::Move(_) = a {
                used.pop();
            }
        }
    }

    fn activate(&self, node: &Node, t: Time, actions: &[Action], used: &[usize], out: &mut Vec<Node>) {
        let graph = self.inst.graph();
        let uncovered: Vec<usize> = self
            .inst
            .demands_at(t)
            .iter()
            .map(|d| graph.edge_index(d.u, d.v).unwrap())
            .filter(|e| !used.contains(e))
            .collect();
        if uncovered.len() > node.unused {
            return;
        }
        if self.constrained() && self.h == 0 && !uncovered.is_empty() {
            return;
        }
        if self.opts.restrict_activation {
            out.push(self.child(node, actions, &uncovered));
            return;
        }
        let free: Vec<usize> =
            (0..graph.edge_count()).filter(|e| !used.contains(e) && !uncovered.contains(e)).collect();
        let extra = node.unused - uncovered.len();
        let mut chosen = uncovered.clone();
        self.subsets(node, actions, &free, 0, extra, &mut chosen, out);
    }

    #[allow(clippy::too_many_arguments)]
    fn subsets(
        &self,
        node: &Node,
        actions: &[Action],
        free: &[usize],
        from: usize,
        extra: usize,
        chosen: &mut Vec<usize>,
        out: &mut Vec<Node>,
    ) {
        out.push(self.child(node, actions, chosen));
        if extra == 0 || self.constrained() && self.h == 0 {
            return;
        }
        for j in from..free.len() {
            chosen.push(free[j]);
            self.subsets(node, actions, free, j + 1, extra - 1, chosen, out);
            chosen.pop();
        }
    }

    fn child(&self, node: &Node, actions: &[Action], fresh: &[usize]) -> Node {
        let graph = self.inst.graph();
        let constrained = self.constrained();
        let lifespan = self.inst.variant() == Variant::Lifespan;
        let mut pairs = Vec::with_capacity(actions.len() + fresh.len());
        for (i, (&a, w)) in actions.iter().zip(&node.walks).enumerate() {
            let (pos, cost) = match a {
                Action::Finish => continue,
                Action::Wait => (w.pos, u64::from(lifespan)),
                Action::Move(e) => (graph.edges()[e].1, 1),
            };
            let cap = if constrained { w.cap - cost } else { 0 };
            pairs.push((Active { pos, cap }, (Some(i), w.pos)));
        }
        for &e in fresh {
            let (u, v) = graph.edges()[e];
            let cap = if constrained { self.h - 1 } else { 0 };
            pairs.push((Active { pos: v, cap }, (None, u)));
        }
        Self::assemble(node.unused - fresh.len(), pairs)
    }

    fn assemble(unused: usize, mut pairs: Vec<(Active, (Option<usize>, VertexId))>) -> Node {
        pairs.sort_by_key(|p| p.0);
        let (walks, links) = pairs.into_iter().unzip();
        Node { unused, walks, parent: 0, links }
    }

    /// Follows parent links from the final layer and replays the walks.
    fn rebuild(&self, layers: &[Vec<Node>]) -> Schedule {
        let mut path = Vec::with_capacity(layers.len());
        let mut idx = 0;
        for layer in layers.iter().rev() {
            path.push(&layer[idx]);
            idx = layer[idx].parent;
        }
        path.reverse();
        let mut done = Vec::new();
        let mut live: Vec<Option<WalkBuilder>> = Vec::new();
        for (i, node) in path.iter().enumerate().skip(1) {
            let (t, next) = (self.steps[i - 1], self.steps[i]);
            let mut now: Vec<Option<WalkBuilder>> = Vec::with_capacity(node.walks.len());
            for (w, &(from, origin)) in node.walks.iter().zip(&node.links) {
                let b = match from {
                    Some(p) => {
                        let mut b = live[p].take().expect("each entry continues at most once");
                        if next == t + 1 {
                            b.step(w.pos);
                        } else {
                            b.wait_until(next);
                        }
                        b
                    }
                    None => {
                        let mut b = WalkBuilder::new(origin, t);
                        b.step(w.pos);
                        b
                    }
                };
                now.push(Some(b));
            }
            done.extend(live.into_iter().flatten());
            live = now;
        }
        done.extend(live.into_iter().flatten());
        Schedule::new(done.into_iter().map(WalkBuilder::finish)).trimmed()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Demand, DirectedGraph};
    use crate::validate::is_valid_schedule;

    fn inst(g: DirectedGraph, d: &[(usize, usize, u64)], k: usize, h: Option<u64>, v: Variant) -> Instance {
        Instance::new(g, d.iter().map(|&(u, v, t)| Demand::new(u, v, t)), k, h, v).unwrap()
    }

    #[test]
    fn star_walk_through_the_centre() {
        let g = DirectedGraph::bidirected(3, [(0, 1), (0, 2)]).unwrap();
        let i = inst(g, &[(0, 1, 1), (1, 0, 2), (0, 2, 3)], 1, Some(3), Variant::Lifespan);
        let d = solve_xp_k(&i).unwrap();
        assert!(is_valid_schedule(&i, d.schedule().unwrap()));
        assert!(solve_xp_k(&i.with_bound(Variant::Lifespan, Some(2)).unwrap()).unwrap().is_no());
    }

    #[test]
    fn jumps_charge_lifespan_only() {
        let g = DirectedGraph::bidirected(2, [(0, 1)]).unwrap();
        let d = [(0, 1, 1), (1, 0, 40)];
        assert!(solve_xp_k(&inst(g.clone(), &d, 1, Some(2), Variant::Length)).unwrap().is_yes());
        assert!(solve_xp_k(&inst(g.clone(), &d, 1, Some(39), Variant::Lifespan)).unwrap().is_no());
        let i = inst(g, &d, 1, Some(40), Variant::Lifespan);
        assert!(is_valid_schedule(&i, solve_xp_k(&i).unwrap().schedule().unwrap()));
    }

    #[test]
    fn options_agree() {
        let g = DirectedGraph::new(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        let i = inst(g, &[(0, 1, 1), (2, 0, 9), (1, 2, 3), (0, 1, 10)], 2, Some(4), Variant::Length);
        let plain = XpOptions { compress_time: false, restrict_activation: false, ..XpOptions::default() };
        let a = solve_xp_k(&i).unwrap();
        let b = solve_xp_k_with(&i, &plain).unwrap();
        assert_eq!(a.verdict(), b.verdict());
    }

    #[test]
    fn budget_gives_unknown() {
        let g = DirectedGraph::bidirected(3, [(0, 1), (1, 2)]).unwrap();
        let i = inst(g, &[(0, 1, 1), (1, 2, 2), (2, 1, 5), (1, 0, 6)], 2, Some(3), Variant::Lifespan);
        let tiny = XpOptions { state_budget: 1, ..XpOptions::default() };
        assert!(matches!(solve_xp_k_with(&i, &tiny).unwrap(), Decision::Unknown(_)));
    }
}
