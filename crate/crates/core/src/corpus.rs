//! Exhaustive instance corpora and the cross-solver sweep shared by the
//! acceptance tests and the benchmark command.

use crate::approx::{approx_min_walks, cheapest_flow_cost};
use crate::constrained::{solve_fpt_kh, solve_fpt_kh_with, solve_xp_k, FptOptions};
use crate::error::SolveError;
use crate::model::{Decision, Demand, DirectedGraph, Instance, Time, Variant};
use crate::oracle::{oracle_decide, oracle_min_walks};
use crate::unconstrained::solve_tedsc;
use crate::validate::is_valid_schedule;
use rayon::prelude::*;
use std::time::{Duration, Instant};

/// Every labelled digraph on `2..=max_n` vertices without isolated
/// vertices.
pub fn small_graphs(max_n: usize) -> Vec<DirectedGraph> {
    let mut out = Vec::new();
    for n in 2..=max_n {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v))).collect();
        for mask in 1u32..(1 << pairs.len()) {
            let edges: Vec<_> = (0..pairs.len()).filter(|i| mask >> i & 1 == 1).map(|i| pairs[i]).collect();
            let g = DirectedGraph::new(n, edges).expect("distinct non-loop pairs");
            if g.isolated_vertices().is_empty() {
                out.push(g);
            }
        }
    }
    out
}

/// Every set of at most `max_demands` demands on edges of `graph` at times
/// `1..=max_lambda`, the empty set included.
pub fn demand_sets(graph: &DirectedGraph, max_demands: usize, max_lambda: Time) -> Vec<Vec<Demand>> {
    let slots: Vec<Demand> =
        (1..=max_lambda).flat_map(|t| graph.edges().iter().map(move |&(u, v)| Demand::new(u, v, t))).collect();
    let mut out = vec![Vec::new()];
    let mut frontier = vec![(Vec::new(), 0usize)];
    for _ in 0..max_demands {
        let mut next = Vec::new();
        for (set, from) in frontier {
            for (i, &slot) in slots.iter().enumerate().skip(from) {
                let mut s: Vec<Demand> = set.clone();
                s.push(slot);
                out.push(s.clone());
                next.push((s, i + 1));
            }
        }
        frontier = next;
    }
    out
}

/// Ranges of the exhaustive sweep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepConfig {
    pub max_n: usize,
    pub max_demands: usize,
    pub max_lambda: Time,
    pub max_k: usize,
    /// Bounds `h` tried for both constrained variants.
    pub bounds: Vec<u64>,
    /// Also run the approximation against the exact optimum.
    pub check_approx: bool,
}

impl SweepConfig {
    /// All graphs with `n ≤ 3`, `|D| ≤ 3`, `Λ ≤ 4`, `k ≤ 2`, `h ≤ 3`.
    pub fn exhaustive() -> Self {
        Self { max_n: 3, max_demands: 3, max_lambda: 4, max_k: 2, bounds: vec![1, 2, 3], check_approx: true }
    }

    /// A quick subset of [`SweepConfig::exhaustive`].
    pub fn small() -> Self {
        Self { max_n: 3, max_demands: 2, max_lambda: 3, max_k: 2, bounds: vec![1, 2], check_approx: true }
    }
}

/// Agreement of one solver with the oracle.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SolverTally {
    pub name: &'static str,
    pub compared: u64,
    pub agreed: u64,
    /// Answers of UNKNOWN, counted as disagreement.
    pub unknown: u64,
    /// Solver errors, counted as disagreement.
    pub errors: u64,
    pub time: Duration,
}

impl SolverTally {
    pub fn agreement(&self) -> f64 {
        if self.compared == 0 {
            1.0
        } else {
            self.agreed as f64 / self.compared as f64
        }
    }
}

/// Result of [`sweep`].
#[derive(Clone, Debug, Default)]
pub struct SweepReport {
    pub instances: u64,
    /// Instances the oracle refused; none are expected within its caps.
    pub oracle_unknown: u64,
    pub tallies: Vec<SolverTally>,
    /// Constrained `(G, D, h)` triples checked against the approximation.
    pub approx_checked: u64,
    pub approx_failures: u64,
    /// Descriptions of the first few failures.
    pub failures: Vec<String>,
    pub elapsed: Duration,
}

impl SweepReport {
    /// True when every solver agreed on every instance and every
    /// approximation check passed.
    pub fn all_agree(&self) -> bool {
        self.oracle_unknown == 0
            && self.approx_failures == 0
            && self.tallies.iter().all(|t| t.agreed == t.compared)
    }

    fn merge(mut self, other: SweepReport) -> SweepReport {
        self.instances += other.instances;
        self.oracle_unknown += other.oracle_unknown;
        self.approx_checked += other.approx_checked;
        self.approx_failures += other.approx_failures;
        for t in other.tallies {
            match self.tallies.iter_mut().find(|s| s.name == t.name) {
                Some(s) => {
                    s.compared += t.compared;
                    s.agreed += t.agreed;
                    s.unknown += t.unknown;
                    s.errors += t.errors;
                    s.time += t.time;
                }
                None => self.tallies.push(t),
            }
        }
        self.failures.extend(other.failures);
        self.failures.truncate(MAX_FAILURES);
        self
    }

    fn fail(&mut self, msg: String) {
        if self.failures.len() < MAX_FAILURES {
            self.failures.push(msg);
        }
    }

    fn record(&mut self, name: &'static str, inst: &Instance, expected: Option<bool>, run: impl FnOnce() -> Result<Decision, SolveError>) {
        let start = Instant::now();
        let got = run();
        let time = start.elapsed();
        let idx = match self.tallies.iter().position(|t| t.name == name) {
            Some(i) => i,
            None => {
                self.tallies.push(SolverTally { name, ..SolverTally::default() });
                self.tallies.len() - 1
            }
        };
        let t = &mut self.tallies[idx];
        t.compared += 1;
        t.time += time;
        let msg = match &got {
            Ok(Decision::Unknown(_)) => {
                t.unknown += 1;
                Some("UNKNOWN".to_string())
            }
            Err(e) => {
                t.errors += 1;
                Some(format!("error: {e}"))
            }
            Ok(d) if d.verdict() == expected && d.schedule().is_none_or(|s| is_valid_schedule(inst, s)) => {
                t.agreed += 1;
                None
            }
            Ok(d) => Some(d.label().to_string()),
        };
        if let Some(m) = msg {
            self.fail(format!("{name}: {m} on {}", describe(inst)));
        }
    }
}

const MAX_FAILURES: usize = 20;

/// One-line description of an instance for failure reports.
pub fn describe(inst: &Instance) -> String {
    let demands: Vec<String> = inst.demands().iter().map(|d| d.to_string()).collect();
    format!(
        "n={} edges={:?} demands=[{}] k={} h={:?} {}",
        inst.n(),
        inst.graph().edges(),
        demands.join(" "),
        inst.k(),
        inst.h(),
        inst.variant().name()
    )
}

/// Runs every exact solver against the oracle on every instance of the
/// configured ranges, for all three variants, and optionally checks the
/// approximation ratio against the exact optimum. Runs in parallel.
pub fn sweep(cfg: &SweepConfig) -> SweepReport {
    let start = Instant::now();
    let cases: Vec<(DirectedGraph, Vec<Demand>)> = small_graphs(cfg.max_n)
        .into_iter()
        .flat_map(|g| demand_sets(&g, cfg.max_demands, cfg.max_lambda).into_iter().map(move |d| (g.clone(), d)))
        .collect();
    let mut report = cases
        .par_iter()
        .map(|(g, d)| check_case(cfg, g, d))
        .reduce(SweepReport::default, SweepReport::merge);
    report.elapsed = start.elapsed();
    report
}

fn check_case(cfg: &SweepConfig, graph: &DirectedGraph, demands: &[Demand]) -> SweepReport {
    let mut report = SweepReport::default();
    let mut variants = vec![(Variant::Unconstrained, None)];
    for &h in &cfg.bounds {
        variants.push((Variant::Length, Some(h)));
        variants.push((Variant::Lifespan, Some(h)));
    }
    for (variant, h) in variants {
        let base = Instance::new(graph.clone(), demands.iter().copied(), 0, h, variant).expect("corpus instances are valid");
        for k in 0..=cfg.max_k {
            let inst = base.with_k(k);
            report.instances += 1;
            let expected = match oracle_decide(&inst) {
                Decision::Unknown(_) => {
                    report.oracle_unknown += 1;
                    report.fail(format!("oracle refused {}", describe(&inst)));
                    continue;
                }
                d => d.verdict(),
            };
            if variant.is_constrained() {
                report.record("fpt-kh", &inst, expected, || solve_fpt_kh(&inst));
            } else {
                report.record("flow", &inst, expected, || solve_tedsc(&inst));
                let bound = (inst.n() * demands.len()).max(1) as u64;
                let long = inst.with_bound(Variant::Length, Some(bound)).expect("adding a bound stays valid");
                let opts = FptOptions { length_rewrite: false, ..FptOptions::default() };
                report.record("fpt-kh", &inst, expected, || solve_fpt_kh_with(&long, &opts));
            }
            report.record("xp-k", &inst, expected, || solve_xp_k(&inst));
        }
        if cfg.check_approx && variant.is_constrained() && !demands.is_empty() {
            check_approx(&base, &mut report);
        }
    }
    report
}

/// Checks `|S| ≤ (2 − 1/h)·OPT` for the approximation and that the cost
/// test passes for every `k` from the optimum up to `|D|`.
fn check_approx(inst: &Instance, report: &mut SweepReport) {
    let Some(opt) = oracle_min_walks(inst) else { return };
    report.approx_checked += 1;
    let h = inst.h().expect("constrained");
    let problem = match approx_min_walks(inst) {
        Err(e) => Some(format!("error: {e}")),
        Ok(r) if h * r.schedule.len() as u64 > (2 * h - 1) * opt as u64 => {
            Some(format!("{} walks against an optimum of {opt}", r.schedule.len()))
        }
        Ok(r) if r.k_star > opt => Some(format!("k* = {} exceeds the optimum {opt}", r.k_star)),
        Ok(r) if !is_valid_schedule(&inst.with_k(r.schedule.len()), &r.schedule) => Some("invalid schedule".into()),
        Ok(_) => (opt..=inst.demands().len()).find_map(|k| match cheapest_flow_cost(inst, k) {
            Ok(Some(c)) if c <= k as u64 * h => None,
            other => Some(format!("cost test fails at k = {k} ≥ OPT = {opt}: {other:?}")),
        }),
    };
    if let Some(p) = problem {
        report.approx_failures += 1;
        report.fail(format!("approx: {p} on {}", describe(inst)));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_counts() {
        // 3 digraphs on two vertices, 54 on three without isolated vertices
        assert_eq!(small_graphs(2).len(), 3);
        assert_eq!(small_graphs(3).len(), 57);
    }

    #[test]
    fn demand_set_counts() {
        let g = DirectedGraph::new(2, [(0, 1)]).unwrap();
        // subsets of size ≤ 2 out of 3 slots
        assert_eq!(demand_sets(&g, 2, 3).len(), 1 + 3 + 3);
    }

    #[test]
    fn tiny_sweep_agrees() {
        let cfg = SweepConfig { max_n: 2, max_demands: 2, max_lambda: 2, max_k: 1, bounds: vec![1], check_approx: true };
        let r = sweep(&cfg);
        assert!(r.all_agree(), "{:?}", r.failures);
        assert!(r.instances > 0 && r.approx_checked > 0);
    }
}
