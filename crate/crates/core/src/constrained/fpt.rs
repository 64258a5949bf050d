//! Exact solver parameterized by `k` and `h`.
//!
//! Demands are assigned to at most `k` walks by a search in time order.
//! Within a walk, consecutive demands must be joined by a route through
//! the gap-compressed expansion with demand edges removed, and the routes
//! of all walks must be edge-disjoint. After parallelizing and subdividing
//! that expansion this is a bounded-length edge-disjoint paths instance,
//! one terminal pair per consecutive demand pair. For the lifespan variant
//! the static expansion is used and the assignment alone enforces the
//! bound. For the length variant the in-out expansion is used, where a
//! route with `g` moves has exactly `4g + 2` edges after subdivision, and
//! every way to spread the spare moves of a walk over its routes is tried.

use super::cross_gap;
use crate::edp::{solve_het_len_edp, solve_len_edp, EdpOutcome, TerminalPair, DEFAULT_EDP_BUDGET};
use crate::error::SolveError;
use crate::expansion::{
    build_expansion, build_inout, parallelize_subdivide, EdgeKind, ExpansionMode, ExpansionOptions, LayeredNetwork,
    NodeKind, PsGraph,
};
use crate::model::{one_walk_per_demand, Decision, Demand, DistanceMatrix, Instance, Schedule, Variant, WalkBuilder};
use crate::unconstrained::solve_tedsc;
use crate::validate::{checked, preprocess_with, PreDecision};

/// Limits and switches for [`solve_fpt_kh_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FptOptions {
    /// Search nodes allowed for each edge-disjoint paths instance.
    pub edp_budget: u64,
    /// Search nodes allowed for the assignment search.
    pub assignment_budget: u64,
    /// Hand length-bounded instances with `h ≥ n·|D|` to the unconstrained
    /// solver instead of searching.
    pub length_rewrite: bool,
}

impl Default for FptOptions {
    fn default() -> Self {
        Self { edp_budget: DEFAULT_EDP_BUDGET, assignment_budget: 50_000_000, length_rewrite: true }
    }
}

/// Decides a length- or lifespan-bounded instance exactly. Returns
/// UNKNOWN when a search budget runs out.
pub fn solve_fpt_kh(inst: &Instance) -> Result<Decision, SolveError> {
    solve_fpt_kh_with(inst, &FptOptions::default())
}

/// [`solve_fpt_kh`] with explicit options.
pub fn solve_fpt_kh_with(inst: &Instance, opts: &FptOptions) -> Result<Decision, SolveError> {
    if !inst.variant().is_constrained() {
        return Err(SolveError::UnsupportedVariant(inst.variant().name()));
    }
    let d = match preprocess_with(inst, opts.length_rewrite) {
        PreDecision::Feasible => Decision::Yes(one_walk_per_demand(inst)),
        PreDecision::Infeasible => Decision::No,
        PreDecision::Undecided(norm) => {
            let d = if norm.instance.variant() == Variant::Unconstrained {
                solve_tedsc(&norm.instance)?
            } else {
                decide(&norm.instance, opts)?
            };
            norm.restore_decision(d)
        }
    };
    checked(inst, d, "fpt solver")
}

#[derive(Clone, Debug)]
struct OpenWalk {
    demands: Vec<usize>,
    first: u64,
    /// Fewest moves the walk needs for its demands so far.
    moves: u64,
}

struct Search<'a> {
    inst: &'a Instance,
    variant: Variant,
    h: u64,
    demands: &'a [Demand],
    dist: DistanceMatrix,
    /// `follows[a][b]`: demand `b` can come right after `a` in one walk.
    follows: Vec<Vec<bool>>,
    walks: Vec<OpenWalk>,
    net: LayeredNetwork,
    ps: PsGraph,
    opts: FptOptions,
    nodes: u64,
    incomplete: bool,
}

fn decide(inst: &Instance, opts: &FptOptions) -> Result<Decision, SolveError> {
    let k = inst.k();
    let h = inst.h().expect("constrained variant has a bound");
    let gamma = ((inst.n() - 1) * k).max(1) as u64;
    let net = match inst.variant() {
        Variant::Lifespan => build_expansion(inst, ExpansionOptions::new(ExpansionMode::Se, Some(gamma)))?,
        _ => build_inout(inst, gamma)?,
    }
    .without_kind(EdgeKind::Demand);
    let ps = parallelize_subdivide(&net, k);
    let demands = inst.demands();
    let dist = inst.graph().all_pairs_distances();
    let mut search = Search {
        inst,
        variant: inst.variant(),
        h,
        demands,
        dist,
        follows: Vec::new(),
        walks: Vec::new(),
        net,
        ps,
        opts: *opts,
        nodes: 0,
        incomplete: false,
    };
    search.follows = (0..demands.len())
        .map(|a| {
            let w = search.single(a);
            (0..demands.len()).map(|b| search.joinable(&w, b).is_some()).collect()
        })
        .collect();
    if let Some(sched) = search.assign(0) {
        return Ok(Decision::Yes(sched));
    }
    Ok(if search.incomplete {
        Decision::Unknown("fpt search budget exhausted".into())
    } else {
        Decision::No
    })
}

impl Search<'_> {
    fn single(&self, a: usize) -> OpenWalk {
        OpenWalk { demands: vec![a], first: self.demands[a].t, moves: 1 }
    }

    /// Moves needed to reach demand `b` after the last demand of `w`, if
    /// `w` can take `b` at all.
    fn joinable(&self, w: &OpenWalk, b: usize) -> Option<u64> {
        let last = self.demands[*w.demands.last().unwrap()];
        let next = self.demands[b];
        if next.t <= last.t {
            return None;
        }
        let x = self.dist.get(last.v, next.u)? as u64;
        if x > next.t - last.t - 1 {
            return None;
        }
        let fits = match self.variant {
            Variant::Lifespan => next.t + 1 - w.first <= self.h,
            _ => w.moves + x < self.h,
        };
        fits.then_some(x)
    }

    /// Upper bound on the moves all walks can still make, each remaining
    /// demand taking one.
    fn spare_moves(&self) -> u64 {
        let open: u64 = self
            .walks
            .iter()
            .map(|w| match self.variant {
                Variant::Lifespan => {
                    let end = self.demands[*w.demands.last().unwrap()].t + 1;
                    (w.first + self.h).saturating_sub(end)
                }
                _ => self.h - w.moves,
            })
            .sum();
        open + (self.inst.k() - self.walks.len()) as u64 * self.h
    }

    /// Lower bound on the walks still to open for demands `from..`.
    fn walks_needed(&self, from: usize) -> usize {
        let rest = self.demands.len() - from;
        let mut owner: Vec<Option<usize>> = vec![None; rest];
        let left = self.walks.len() + rest;
        let succ = |l: usize| -> Vec<usize> {
            (from..self.demands.len())
                .filter(|&b| {
                    if l < self.walks.len() {
                        self.joinable(&self.walks[l], b).is_some()
                    } else {
                        self.follows[from + l - self.walks.len()][b]
                    }
                })
                .map(|b| b - from)
                .collect()
        };
        let adj: Vec<Vec<usize>> = (0..left).map(succ).collect();
        let mut matched = 0;
        for l in 0..left {
            let mut seen = vec![false; rest];
            if augment(l, &adj, &mut owner, &mut seen) {
                matched += 1;
            }
        }
        rest - matched
    }

    fn assign(&mut self, next: usize) -> Option<Schedule> {
        self.nodes += 1;
        if self.nodes > self.opts.assignment_budget {
            self.incomplete = true;
            return None;
        }
        if next == self.demands.len() {
            return self.route();
        }
        if self.spare_moves() < (self.demands.len() - next) as u64
            || self.walks.len() + self.walks_needed(next) > self.inst.k()
        {
            return None;
        }
        for i in 0..self.walks.len() {
            let Some(x) = self.joinable(&self.walks[i], next) else { continue };
            let saved = self.walks[i].moves;
            self.walks[i].demands.push(next);
            self.walks[i].moves += x + 1;
            if let Some(s) = self.assign(next + 1) {
                return Some(s);
            }
            self.walks[i].demands.pop();
            self.walks[i].moves = saved;
            if self.incomplete {
                return None;
            }
        }
        if self.walks.len() < self.inst.k() {
            self.walks.push(self.single(next));
            if let Some(s) = self.assign(next + 1) {
                return Some(s);
            }
            self.walks.pop();
        }
        None
    }

    /// Terminal nodes of the route from demand `a` to demand `b`.
    fn terminals(&self, a: usize, b: usize) -> (usize, usize) {
        let (da, db) = (self.demands[a], self.demands[b]);
        let la = self.net.layer_of(da.t + 1).expect("step after a demand is retained");
        let lb = self.net.layer_of(db.t).expect("demand steps are retained");
        match self.variant {
            Variant::Lifespan => (self.net.node(la, da.v), self.net.node(lb, db.u)),
            _ => (self.net.in_node(la, da.v), self.net.out_node(lb, db.u)),
        }
    }

    fn route(&mut self) -> Option<Schedule> {
        match self.variant {
            Variant::Lifespan => {
                let pairs: Vec<(usize, usize)> = self
                    .walks
                    .iter()
                    .flat_map(|w| w.demands.windows(2).map(|p| self.terminals(p[0], p[1])))
                    .collect();
                let outcome = solve_len_edp(&self.ps.graph, &pairs, 2 * self.h, self.opts.edp_budget);
                self.finish(outcome)
            }
            _ => {
                let mut extra = Vec::new();
                self.spread(0, 0, None, &mut extra)
            }
        }
    }

    /// Enumerates maximal ways to hand out the spare moves of each walk to
    /// its routes, then solves the paths instance for each.
    fn spread(&mut self, wi: usize, ri: usize, left: Option<u64>, extra: &mut Vec<u64>) -> Option<Schedule> {
        if wi == self.walks.len() {
            return self.route_length(extra);
        }
        let w = &self.walks[wi];
        let routes = w.demands.len() - 1;
        if ri == routes {
            return self.spread(wi + 1, 0, None, extra);
        }
        let room = |j: usize| -> u64 {
            let (a, b) = (self.demands[w.demands[j]], self.demands[w.demands[j + 1]]);
            b.t - a.t - 1 - self.dist.get(a.v, b.u).unwrap() as u64
        };
        let left = left.unwrap_or_else(|| (self.h - w.moves).min((0..routes).map(room).sum()));
        let cap = room(ri);
        let range = if ri + 1 == routes {
            if left > cap {
                return None;
            }
            left..=left
        } else {
            0..=cap.min(left)
        };
        for e in range.rev() {
            extra.push(e);
            if let Some(s) = self.spread(wi, ri + 1, Some(left - e), extra) {
                return Some(s);
            }
            extra.pop();
            if self.incomplete {
                return None;
            }
        }
        None
    }

    fn route_length(&mut self, extra: &[u64]) -> Option<Schedule> {
        let mut pairs = Vec::new();
        let mut it = extra.iter();
        for w in &self.walks {
            for p in w.demands.windows(2) {
                let (s, z) = self.terminals(p[0], p[1]);
                let x = self.dist.get(self.demands[p[0]].v, self.demands[p[1]].u).unwrap() as u64;
                let g = x + it.next().unwrap();
                pairs.push(TerminalPair { s, z, bound: 4 * g + 2 });
            }
        }
        let top = pairs.iter().map(|p| p.bound).max().unwrap_or(0);
        let outcome = solve_het_len_edp(&self.ps.graph, &pairs, top, self.opts.edp_budget);
        self.finish(outcome)
    }

    fn finish(&mut self, outcome: EdpOutcome) -> Option<Schedule> {
        match outcome {
            EdpOutcome::Yes(paths) => Some(self.build(&paths)),
            EdpOutcome::No => None,
            EdpOutcome::Timeout => {
                self.incomplete = true;
                None
            }
        }
    }

    /// Turns the walk assignment and its routes into walks. Walk `i` uses
    /// slot `i` in every compressed gap it crosses.
    fn build(&self, paths: &[Vec<usize>]) -> Schedule {
        let graph = self.inst.graph();
        let layers = self.net.layers();
        let mut paths = paths.iter();
        let walks = self.walks.iter().enumerate().map(|(slot, w)| {
            let first = self.demands[w.demands[0]];
            let mut b = WalkBuilder::new(first.u, first.t);
            b.step(first.v);
            for &j in &w.demands[1..] {
                let nodes = self.ps.to_net_path(paths.next().expect("one path per route"));
                let mut last_out = None;
                for (i, &node) in nodes.iter().enumerate() {
                    match self.net.nodes()[node] {
                        NodeKind::Layer { layer, vertex } if i > 0 => {
                            let (ta, tb) = (b.now(), layers[layer]);
                            if tb == ta + 1 {
                                b.step(vertex);
                            } else {
                                cross_gap(&mut b, graph, vertex, (ta, tb), slot);
                            }
                        }
                        NodeKind::Out { layer, vertex } => {
                            b.wait_until(layers[layer]);
                            last_out = Some((layer, vertex));
                        }
                        NodeKind::In { layer, vertex } => {
                            if let Some((lo, _)) = last_out.take() {
                                let (ta, tb) = (layers[lo], layers[layer]);
                                if tb == ta + 1 {
                                    b.step(vertex);
                                } else {
                                    cross_gap(&mut b, graph, vertex, (ta, tb), slot);
                                }
                            }
                        }
                        _ => {}
                    }
                }
                let d = self.demands[j];
                debug_assert_eq!((b.position(), b.now()), (d.u, d.t));
                b.step(d.v);
            }
            b.finish()
        });
        Schedule::new(walks.collect::<Vec<_>>())
    }
}

/// Kuhn's augmenting path step for left vertex `l`.
fn augment(l: usize, adj: &[Vec<usize>], owner: &mut [Option<usize>], seen: &mut [bool]) -> bool {
    for &r in &adj[l] {
        if seen[r] {
            continue;
        }
        seen[r] = true;
        if owner[r].is_none_or(|o| augment(o, adj, owner, seen)) {
            owner[r] = Some(l);
            return true;
        }
    }
    false
}
