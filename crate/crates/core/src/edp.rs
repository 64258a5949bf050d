//! Exact bounded-length edge-disjoint paths.
//!
//! Pairs are routed one after another by backtracking over simple paths in
//! the residual graph. Each pair tries path lengths in increasing order and
//! enumerates paths of that exact length lexicographically, pruning with
//! residual distances to the target. After a path is placed, every later
//! pair must still have a short enough path in the residual graph; a cached
//! witness path per pair avoids most of these checks. Subdivision vertices
//! of parallel edges are interchangeable, so only one unused copy per
//! parallel class is tried at each step.

use crate::expansion::StaticGraph;
use std::collections::VecDeque;

/// A terminal pair with its own length bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TerminalPair {
    pub s: usize,
    pub z: usize,
    pub bound: u64,
}

/// Result of a bounded edge-disjoint paths search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EdpOutcome {
    /// Vertex sequences, one per pair in input order.
    Yes(Vec<Vec<usize>>),
    No,
    /// The node budget ran out before the search finished.
    Timeout,
}

impl EdpOutcome {
    pub fn is_yes(&self) -> bool {
        matches!(self, EdpOutcome::Yes(_))
    }
}

/// Default number of search nodes before giving up.
pub const DEFAULT_EDP_BUDGET: u64 = 20_000_000;

/// Edge-disjoint paths of length at most `h` for every pair.
pub fn solve_len_edp(graph: &StaticGraph, pairs: &[(usize, usize)], h: u64, budget: u64) -> EdpOutcome {
    let pairs: Vec<TerminalPair> = pairs.iter().map(|&(s, z)| TerminalPair { s, z, bound: h }).collect();
    Search::new(graph, &pairs, budget).run()
}

/// Edge-disjoint paths where pair `i` has length at most `pairs[i].bound`.
///
/// Each target gets a fresh tail path of `h − bound` edges and all pairs
/// are then solved with the common bound `h`; the tails are removed from
/// the returned paths.
pub fn solve_het_len_edp(graph: &StaticGraph, pairs: &[TerminalPair], h: u64, budget: u64) -> EdpOutcome {
    assert!(pairs.iter().all(|p| p.bound <= h), "pair bounds must not exceed h");
    let mut padded = graph.clone();
    let mut targets = Vec::with_capacity(pairs.len());
    for p in pairs {
        let mut end = p.z;
        for _ in 0..h - p.bound {
            let x = padded.add_vertex();
            padded.add_edge(end, x);
            end = x;
        }
        targets.push(end);
    }
    padded.sort_adjacency();
    let uniform: Vec<(usize, usize)> = pairs.iter().zip(&targets).map(|(p, &z)| (p.s, z)).collect();
    match solve_len_edp(&padded, &uniform, h, budget) {
        EdpOutcome::Yes(paths) => EdpOutcome::Yes(
            paths
                .into_iter()
                .zip(pairs)
                .map(|(mut path, p)| {
                    path.truncate(path.len() - (h - p.bound) as usize);
                    path
                })
                .collect(),
        ),
        other => other,
    }
}

/// Checks that `paths` connect their pairs within bounds along existing,
/// pairwise unshared edges.
pub fn check_edp_paths(graph: &StaticGraph, pairs: &[TerminalPair], paths: &[Vec<usize>]) -> bool {
    if pairs.len() != paths.len() {
        return false;
    }
    let mut used = vec![false; graph.edge_count()];
    for (p, path) in pairs.iter().zip(paths) {
        if path.first() != Some(&p.s) || path.last() != Some(&p.z) || path.len() as u64 > p.bound + 1 {
            return false;
        }
        for w in path.windows(2) {
            // take any unused parallel copy
            let Some(&(_, e)) = graph.out_edges(w[0]).iter().find(|&&(v, e)| v == w[1] && !used[e]) else {
                return false;
            };
            used[e] = true;
        }
    }
    true
}

struct Timeout;

struct Search<'a> {
    g: &'a StaticGraph,
    pairs: Vec<TerminalPair>,
    order: Vec<usize>,
    used: Vec<bool>,
    on_path: Vec<bool>,
    /// `(pred, succ)` for interior vertices of in- and out-degree one.
    twin: Vec<Option<(usize, usize)>>,
    budget: u64,
    found: Vec<Vec<usize>>,
}

impl<'a> Search<'a> {
    fn new(g: &'a StaticGraph, pairs: &[TerminalPair], budget: u64) -> Self {
        let n = g.vertex_count();
        let mut terminal = vec![false; n];
        for p in pairs {
            terminal[p.s] = true;
            terminal[p.z] = true;
        }
        let twin = (0..n)
            .map(|v| match (g.in_edges(v), g.out_edges(v)) {
                ([(p, _)], [(q, _)]) if !terminal[v] => Some((*p, *q)),
                _ => None,
            })
            .collect();
        Self {
            g,
            pairs: pairs.to_vec(),
            order: Vec::new(),
            used: vec![false; g.edge_count()],
            on_path: vec![false; n],
            twin,
            budget,
            found: vec![Vec::new(); pairs.len()],
        }
    }

    fn run(mut self) -> EdpOutcome {
        let mut witnesses = Vec::with_capacity(self.pairs.len());
        let mut slack = Vec::with_capacity(self.pairs.len());
        for p in &self.pairs {
            match self.witness(p) {
                Some(w) => {
                    slack.push(p.bound - w.len() as u64);
                    witnesses.push(w);
                }
                None => return EdpOutcome::No,
            }
        }
        let mut order: Vec<usize> = (0..self.pairs.len()).collect();
        order.sort_by_key(|&i| (slack[i], i));
        let witnesses: Vec<Vec<usize>> = order.iter().map(|&i| witnesses[i].clone()).collect();
        self.order = order;
        match self.place(0, witnesses) {
            Ok(true) => EdpOutcome::Yes(self.found),
            Ok(false) => EdpOutcome::No,
            Err(Timeout) => EdpOutcome::Timeout,
        }
    }

    /// Edge ids of a shortest residual path within the bound.
    fn witness(&self, p: &TerminalPair) -> Option<Vec<usize>> {
        let n = self.g.vertex_count();
        let mut via = vec![usize::MAX; n];
        let mut seen = vec![false; n];
        seen[p.s] = true;
        let mut queue = VecDeque::from([(p.s, 0u64)]);
        while let Some((u, d)) = queue.pop_front() {
            if u == p.z {
                let mut edges = Vec::new();
                let mut x = u;
                while x != p.s {
                    let e = via[x];
                    edges.push(e);
                    x = self.g.edges()[e].0;
                }
                edges.reverse();
                return Some(edges);
            }
            if d == p.bound {
                continue;
            }
            for &(v, e) in self.g.out_edges(u) {
                if !self.used[e] && !seen[v] {
                    seen[v] = true;
                    via[v] = e;
                    queue.push_back((v, d + 1));
                }
            }
        }
        None
    }

    fn distances_to(&self, z: usize) -> Vec<u64> {
        let mut dist = vec![u64::MAX; self.g.vertex_count()];
        dist[z] = 0;
        let mut queue = VecDeque::from([z]);
        while let Some(v) = queue.pop_front() {
            for &(u, e) in self.g.in_edges(v) {
                if !self.used[e] && dist[u] == u64::MAX {
                    dist[u] = dist[v] + 1;
                    queue.push_back(u);
                }
            }
        }
        dist
    }

    /// Routes the pairs `order[idx..]`; `witnesses[j]` is a residual path
    /// for `order[idx + j]`.
    fn place(&mut self, idx: usize, witnesses: Vec<Vec<usize>>) -> Result<bool, Timeout> {
        if idx == self.order.len() {
            return Ok(true);
        }
        let p = self.pairs[self.order[idx]];
        let dist = self.distances_to(p.z);
        if dist[p.s] > p.bound {
            return Ok(false);
        }
        for len in dist[p.s]..=p.bound {
            self.on_path[p.s] = true;
            let mut path = vec![p.s];
            let done = self.extend(idx, p.s, len, &dist, &mut path, &witnesses[1..]);
            self.on_path[p.s] = false;
            if done? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn extend(
        &mut self,
        idx: usize,
        at: usize,
        rem: u64,
        dist: &[u64],
        path: &mut Vec<usize>,
        later: &[Vec<usize>],
    ) -> Result<bool, Timeout> {
        if self.budget == 0 {
            return Err(Timeout);
        }
        self.budget -= 1;
        let z = self.pairs[self.order[idx]].z;
        if at == z {
            return if rem == 0 { self.complete(idx, path, later) } else { Ok(false) };
        }
        if rem == 0 {
            return Ok(false);
        }
        let mut tried: Vec<(usize, usize)> = Vec::new();
        for &(v, e) in self.g.out_edges(at) {
            if self.used[e] || self.on_path[v] || dist[v] > rem - 1 {
                continue;
            }
            if let Some(class) = self.twin[v] {
                if tried.contains(&class) {
                    continue;
                }
                tried.push(class);
            }
            self.used[e] = true;
            self.on_path[v] = true;
            path.push(v);
            let done = self.extend(idx, v, rem - 1, dist, path, later);
            path.pop();
            self.on_path[v] = false;
            self.used[e] = false;
            if done? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn complete(&mut self, idx: usize, path: &[usize], later: &[Vec<usize>]) -> Result<bool, Timeout> {
        let mut next = Vec::with_capacity(later.len());
        for (j, w) in later.iter().enumerate() {
            if w.iter().all(|&e| !self.used[e]) {
                next.push(w.clone());
                continue;
            }
            match self.witness(&self.pairs[self.order[idx + 1 + j]]) {
                Some(w) => next.push(w),
                None => return Ok(false),
            }
        }
        // the on-path marks of this pair must not block later pairs
        for &v in path {
            self.on_path[v] = false;
        }
        let done = self.place(idx + 1, next);
        for &v in path {
            self.on_path[v] = true;
        }
        if done? {
            self.found[self.order[idx]] = path.to_vec();
            return Ok(true);
        }
        Ok(false)
    }
}
