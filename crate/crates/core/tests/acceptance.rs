//! Acceptance suite. Prints one PASS or FAIL line per criterion and exits
//! with a failure status if any criterion fails. It runs without the test
//! harness so the lines are never captured. Expected answers come from brute-force checks
//! written here, independent of the library.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, HashSet};
use std::time::{Duration, Instant};
use tedsc::approx::{approx_min_walks, cheapest_flow_cost};
use tedsc::constrained::{
    normalize_star_schedule, solve_fpt_kh, solve_star_fpt, solve_xp_k, solve_xp_k_with, XpOptions,
};
use tedsc::corpus::{describe, sweep, SweepConfig, SweepReport};
use tedsc::expansion::{build_expansion, build_inout, CostKind, ExpansionMode, ExpansionOptions, Terminals};
use tedsc::flow::{check_flow, feasible_flow_with_lower_bounds, min_cost_flow_fixed_value, FlowArc, FlowNetwork};
use tedsc::generators::{gen_from_3sat, gen_from_bin_packing, gen_from_edp_dag, gen_random, Cnf, RandomParams};
use tedsc::oracle::{oracle_decide, oracle_min_walks};
use tedsc::unconstrained::{flow_gamma, solve_tedsc};
use tedsc::{is_valid_schedule, Demand, DirectedGraph, Instance, Schedule, Time, Variant, WalkBuilder};

type Outcome = Result<String, String>;

/// Approximation checks gathered from the gap instances for criterion 6.
#[derive(Default)]
struct ApproxTally {
    checked: usize,
    failures: Vec<String>,
}

fn main() {
    let mut results: Vec<(usize, &str, Outcome, Duration)> = Vec::new();
    let mut run = |n: usize, name: &'static str, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let out = f();
        results.push((n, name, out, start.elapsed()));
        let (n, name, out, time) = results.last().unwrap();
        match out {
            Ok(detail) => println!("PASS criterion {n} ({name}): {detail} [{time:.1?}]"),
            Err(detail) => println!("FAIL criterion {n} ({name}): {detail} [{time:.1?}]"),
        }
    };

    let mut report = SweepReport::default();
    let mut gap_approx = ApproxTally::default();
    run(1, "exhaustive small-corpus agreement", &mut || {
        report = sweep(&SweepConfig::exhaustive());
        exhaustive_agreement(&report)
    });
    run(2, "gap-compression invariance", &mut || gap_invariance(&mut gap_approx));
    run(3, "SAT reduction fidelity", &mut sat_fidelity);
    run(4, "bin packing reduction fidelity", &mut bin_packing_fidelity);
    run(5, "EDP reduction fidelity", &mut edp_fidelity);
    run(6, "approximation guarantee", &mut || approx_guarantee(&report, &gap_approx));
    run(7, "star solver and normalizer", &mut star_solver);
    run(8, "flow engine", &mut flow_engine);
    run(9, "structural counts", &mut structural_counts);

    let failed: Vec<usize> = results.iter().filter(|r| r.2.is_err()).map(|r| r.0).collect();
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}

fn first_failures(failures: &[String]) -> String {
    failures.iter().take(3).cloned().collect::<Vec<_>>().join("; ")
}

// ---------------------------------------------------------------- 1

fn exhaustive_agreement(r: &SweepReport) -> Outcome {
    let tallies: Vec<String> =
        r.tallies.iter().map(|t| format!("{} {}/{}", t.name, t.agreed, t.compared)).collect();
    let detail = format!("{} instances, {}", r.instances, tallies.join(", "));
    let solver_ok = r.oracle_unknown == 0 && r.tallies.iter().all(|t| t.agreed == t.compared);
    if !solver_ok {
        return Err(format!("{detail}; {}", first_failures(&r.failures)));
    }
    if r.elapsed > Duration::from_secs(30 * 60) {
        return Err(format!("{detail}; took {:?}, over the 30 min budget", r.elapsed));
    }
    Ok(detail)
}

// ---------------------------------------------------------------- 2

/// Spreads the relevant times of `inst` apart by random amounts so that
/// `Λ` reaches up to `10⁶`.
fn inject_gaps(inst: &Instance, rng: &mut ChaCha8Rng) -> Instance {
    let times = inst.relevant_times();
    let mut map = BTreeMap::new();
    let mut at: Time = rng.gen_range(1..=1000);
    let mut prev = times[0];
    for &t in &times {
        if t > prev && rng.gen_bool(0.75) {
            at += rng.gen_range(1..=300_000);
        }
        at += t - prev;
        map.insert(t, at);
        prev = t;
    }
    retime(inst, &map)
}

/// Shortens every stretch of idle steps to at most `idle`, and the time
/// before the first demand likewise.
fn shrink_gaps(inst: &Instance, idle: Time) -> Instance {
    let mut map = BTreeMap::new();
    let mut at = 0;
    let mut prev = 0;
    for t in inst.relevant_times() {
        at += (t - prev).min(idle + 1);
        map.insert(t, at);
        prev = t;
    }
    retime(inst, &map)
}

fn retime(inst: &Instance, map: &BTreeMap<Time, Time>) -> Instance {
    let demands = inst.demands().iter().map(|d| Demand::new(d.u, d.v, map[&d.t]));
    Instance::new(inst.graph().clone(), demands, inst.k(), inst.h(), inst.variant()).unwrap()
}

/// Decision of the flow formulation on the plain, uncompressed expansion.
fn explicit_flow(inst: &Instance) -> bool {
    let k = inst.k().min(inst.demands().len());
    let opts = ExpansionOptions::new(ExpansionMode::SeHat(Terminals::Boundary), None);
    let net = build_expansion(inst, opts).unwrap();
    let fnet = net.to_flow_network(CostKind::None, k as u64);
    feasible_flow_with_lower_bounds(&fnet, k as u64).is_some()
}

fn gap_invariance(approx: &mut ApproxTally) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6a9);
    let mut failures = Vec::new();
    let (mut made, mut yes, mut oracle_checked, mut max_lambda) = (0, 0, 0, 0);
    let plain = XpOptions { compress_time: false, ..XpOptions::default() };
    while made < 200 {
        let n = rng.gen_range(2..=4);
        let variant = if made % 2 == 0 { Variant::Unconstrained } else { Variant::Length };
        let p = RandomParams {
            n,
            m: rng.gen_range(1..=n * (n - 1)),
            demands: rng.gen_range(1..=4),
            lambda: 5,
            k: rng.gen_range(1..=3),
            h: (variant == Variant::Length).then(|| rng.gen_range(1..=6)),
            variant,
            seed: rng.gen(),
        };
        let Ok(base) = gen_random(&p) else { continue };
        made += 1;
        let inst = inject_gaps(&base, &mut rng);
        max_lambda = max_lambda.max(inst.lambda());
        let (n, k, d) = (inst.n(), inst.k(), inst.demands().len());
        let idle = flow_gamma(n, k).max((n * k) as u64);
        let short = shrink_gaps(&inst, idle);

        let bound = 4 * n * d * (n + k);
        let keep = flow_gamma(n, k.min(d));
        let se = build_expansion(&inst, ExpansionOptions::new(ExpansionMode::SeHat(Terminals::Boundary), Some(keep)))
            .unwrap()
            .node_count();
        let io = build_inout(&inst, ((n - 1) * k).max(1) as u64).unwrap().node_count();
        if se.max(io) > bound {
            failures.push(format!("network of {} nodes over the bound {bound} on {}", se.max(io), describe(&inst)));
        }

        let mut answers: Vec<(&str, Option<bool>)> = Vec::new();
        if variant == Variant::Unconstrained {
            answers.push(("flow", solve_tedsc(&inst).unwrap().verdict()));
            answers.push(("explicit flow on shrunk", Some(explicit_flow(&short))));
        } else {
            answers.push(("fpt-kh", solve_fpt_kh(&inst).unwrap().verdict()));
            answers.push(("fpt-kh on shrunk", solve_fpt_kh(&short).unwrap().verdict()));
        }
        answers.push(("xp-k", solve_xp_k(&inst).unwrap().verdict()));
        answers.push(("uncompressed xp-k on shrunk", solve_xp_k_with(&short, &plain).unwrap().verdict()));
        if let v @ Some(_) = oracle_decide(&short).verdict() {
            oracle_checked += 1;
            answers.push(("oracle on shrunk", v));
        }
        let first = answers[0].1;
        if first.is_none() || answers.iter().any(|a| a.1 != first) {
            failures.push(format!("{answers:?} on {}", describe(&inst)));
        }
        yes += usize::from(first == Some(true));

        if variant == Variant::Length {
            if let Some(opt) = oracle_min_walks(&short) {
                approx.checked += 1;
                if let Err(e) = check_approx(&inst, opt) {
                    approx.failures.push(e);
                }
            }
        }
    }
    let detail = format!(
        "200 instances with Λ up to {max_lambda}, {yes} feasible, {oracle_checked} also checked by the oracle, all networks within 4·n·|D|·(n+k)"
    );
    if failures.is_empty() {
        Ok(detail)
    } else {
        Err(format!("{} failures: {}", failures.len(), first_failures(&failures)))
    }
}

// ---------------------------------------------------------------- 3

fn brute_force_sat(f: &Cnf) -> bool {
    (0u32..1 << f.vars).any(|a| {
        f.clauses.iter().all(|c| c.iter().any(|&l| (a >> (l.unsigned_abs() - 1) & 1 == 1) == (l > 0)))
    })
}

/// A random formula over at most 4 variables with at most 6 clauses of
/// `1..=max_len` literals each.
fn random_cnf(rng: &mut ChaCha8Rng, max_len: usize) -> Cnf {
    let vars = rng.gen_range(1..=4usize);
    let clauses: Vec<Vec<i64>> = (0..rng.gen_range(1..=6))
        .map(|_| {
            (0..rng.gen_range(1..=max_len))
                .map(|_| {
                    let v = rng.gen_range(1..=vars as i64);
                    if rng.gen_bool(0.5) {
                        v
                    } else {
                        -v
                    }
                })
                .collect()
        })
        .collect();
    Cnf::new(vars, clauses).unwrap()
}

/// A random balanced 3-CNF formula, by rejection sampling.
fn random_balanced_cnf(rng: &mut ChaCha8Rng) -> Cnf {
    loop {
        let mut f = random_cnf(rng, 3);
        for c in &mut f.clauses {
            c.resize(3, c[0]);
        }
        if f.is_balanced() {
            return f;
        }
    }
}

fn sat_fidelity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5a7);
    let mut failures = Vec::new();
    let mut sat = 0;
    for _ in 0..100 {
        let f = random_balanced_cnf(&mut rng);
        let truth = brute_force_sat(&f);
        sat += usize::from(truth);
        if f.is_satisfiable() != truth {
            failures.push(format!("DPLL disagrees with truth tables on {:?}", f.clauses));
        }
        for variant in [Variant::Length, Variant::Lifespan] {
            let (inst, _) = gen_from_3sat(&f, variant).unwrap();
            let got = solve_fpt_kh(&inst).unwrap();
            if got.verdict() != Some(truth) {
                failures.push(format!("{} {} on {:?}, satisfiable = {truth}", variant.name(), got.label(), f.clauses));
            }
        }
    }
    if failures.is_empty() {
        Ok(format!("100 balanced formulas ({sat} satisfiable), both variants agree"))
    } else {
        Err(format!("{} failures: {}", failures.len(), first_failures(&failures)))
    }
}

// ---------------------------------------------------------------- 4

/// Multisets of positive integers summing to `total`, in non-increasing
/// order.
fn partitions(total: u64, max: u64) -> Vec<Vec<u64>> {
    if total == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in (1..=max.min(total)).rev() {
        for mut rest in partitions(total - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn brute_force_bins(items: &[u64], bins: usize, cap: u64) -> bool {
    let total = (bins as u64).pow(items.len() as u32);
    (0..total).any(|mut code| {
        let mut load = vec![0; bins];
        for &s in items {
            load[(code % bins as u64) as usize] += s;
            code /= bins as u64;
        }
        load.iter().all(|&l| l <= cap)
    })
}

fn bin_packing_fidelity() -> Outcome {
    let mut failures = Vec::new();
    let (mut count, mut yes) = (0, 0);
    for bins in 1..=3usize {
        for cap in 1..=4u64 {
            for items in partitions(bins as u64 * cap, bins as u64 * cap) {
                count += 1;
                let truth = brute_force_bins(&items, bins, cap);
                yes += usize::from(truth);
                let gen = gen_from_bin_packing(&items, bins, cap).unwrap();
                let got = solve_fpt_kh(&gen.instance).unwrap();
                if got.verdict() != Some(truth) || gen.truth.verdict() != Some(truth) {
                    failures.push(format!("{items:?} into {bins} bins of {cap}: {} vs {truth}", got.label()));
                }
            }
        }
    }
    if failures.is_empty() {
        Ok(format!("{count} multisets ({yes} packable), all agree"))
    } else {
        Err(format!("{} failures: {}", failures.len(), first_failures(&failures)))
    }
}

// ---------------------------------------------------------------- 5

fn edge_paths(g: &DirectedGraph, s: usize, z: usize) -> Vec<Vec<usize>> {
    fn go(g: &DirectedGraph, at: usize, z: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if at == z {
            out.push(path.clone());
            return;
        }
        for &v in g.out_neighbors(at) {
            path.push(g.edge_index(at, v).unwrap());
            go(g, v, z, path, out);
            path.pop();
        }
    }
    let mut out = Vec::new();
    go(g, s, z, &mut Vec::new(), &mut out);
    out
}

fn brute_force_edp(g: &DirectedGraph, pairs: &[(usize, usize)]) -> bool {
    let options: Vec<Vec<Vec<usize>>> = pairs.iter().map(|&(s, z)| edge_paths(g, s, z)).collect();
    fn pick(options: &[Vec<Vec<usize>>], used: &mut HashSet<usize>) -> bool {
        let Some((first, rest)) = options.split_first() else { return true };
        first.iter().any(|p| {
            if p.iter().any(|e| used.contains(e)) {
                return false;
            }
            used.extend(p.iter().copied());
            let ok = pick(rest, used);
            for e in p {
                used.remove(e);
            }
            ok
        })
    }
    pick(&options, &mut HashSet::new())
}

fn random_dag(rng: &mut ChaCha8Rng, n: usize, m: usize) -> DirectedGraph {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut forward: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| (order[i], order[j])).collect();
    forward.shuffle(rng);
    forward.truncate(m);
    DirectedGraph::new(n, forward).unwrap()
}

fn edp_fidelity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xed9);
    let mut failures = Vec::new();
    let mut yes = 0;
    for _ in 0..50 {
        let n = rng.gen_range(2..=6);
        let m = rng.gen_range(1..=9.min(n * (n - 1) / 2));
        let dag = random_dag(&mut rng, n, m);
        // half of the pairs follow an edge, so most are reachable
        let pairs: Vec<(usize, usize)> = (0..rng.gen_range(1..=3))
            .map(|_| match rng.gen_bool(0.5) {
                true => *dag.edges().choose(&mut rng).unwrap(),
                false => {
                    let s = rng.gen_range(0..n);
                    (s, (s + rng.gen_range(1..n)) % n)
                }
            })
            .collect();
        let truth = brute_force_edp(&dag, &pairs);
        yes += usize::from(truth);
        for variant in [Variant::Length, Variant::Lifespan] {
            let (inst, gt) = gen_from_edp_dag(&dag, &pairs, variant).unwrap();
            let got = solve_fpt_kh(&inst).unwrap();
            if got.verdict() != Some(truth) || gt.verdict() != Some(truth) {
                failures.push(format!(
                    "{} {} (generator says {gt}) vs {truth} on {:?} with {pairs:?}",
                    variant.name(),
                    got.label(),
                    dag.edges()
                ));
            }
        }
    }
    if failures.is_empty() {
        Ok(format!("50 DAGs ({yes} routable), both variants agree"))
    } else {
        Err(format!("{} failures: {}", failures.len(), first_failures(&failures)))
    }
}

// ---------------------------------------------------------------- 6

/// Checks the approximation on `inst` against the optimum `opt`.
fn check_approx(inst: &Instance, opt: usize) -> Result<(), String> {
    let h = inst.h().unwrap();
    let r = approx_min_walks(inst).map_err(|e| format!("{e} on {}", describe(inst)))?;
    let s = r.schedule.len();
    if !is_valid_schedule(&inst.with_k(s), &r.schedule) {
        return Err(format!("invalid schedule on {}", describe(inst)));
    }
    if h * s as u64 > (2 * h - 1) * opt as u64 || r.k_star > opt {
        return Err(format!("{s} walks, k* = {}, optimum {opt} on {}", r.k_star, describe(inst)));
    }
    for k in opt..=inst.demands().len() {
        match cheapest_flow_cost(inst, k) {
            Ok(Some(c)) if c <= k as u64 * h => {}
            other => return Err(format!("cost test fails at k = {k} ({other:?}) on {}", describe(inst))),
        }
    }
    Ok(())
}

fn approx_guarantee(sweep: &SweepReport, gaps: &ApproxTally) -> Outcome {
    let detail = format!(
        "{} exhaustive and {} gap instances within (2 − 1/h)·OPT, cost test never fires at k ≥ OPT",
        sweep.approx_checked, gaps.checked
    );
    let mut failures: Vec<String> = sweep.failures.iter().filter(|f| f.starts_with("approx")).cloned().collect();
    failures.extend(gaps.failures.iter().cloned());
    if sweep.approx_checked == 0 || gaps.checked == 0 {
        return Err("no instance was checked".into());
    }
    if sweep.approx_failures == 0 && gaps.failures.is_empty() {
        Ok(detail)
    } else {
        Err(format!("{} failures: {}", sweep.approx_failures as usize + gaps.failures.len(), first_failures(&failures)))
    }
}

// ---------------------------------------------------------------- 7

/// A random lifespan instance on a bidirected star whose demands are a
/// subset of the moves of a random schedule with waits.
fn random_star_instance(rng: &mut ChaCha8Rng) -> Option<(Instance, Schedule)> {
    let n = rng.gen_range(2..=4usize);
    let g = DirectedGraph::bidirected(n, (1..n).map(|l| (0, l))).unwrap();
    let mut used = HashSet::new();
    let mut walks = Vec::new();
    for _ in 0..rng.gen_range(1..=4) {
        let mut t: Time = rng.gen_range(1..=4);
        let mut at = rng.gen_range(0..n);
        let mut b = WalkBuilder::new(at, t);
        let mut moved = false;
        for _ in 0..rng.gen_range(1..=5) {
            let to = if at == 0 { rng.gen_range(1..n) } else { 0 };
            t += rng.gen_range(0..=3);
            if t > 8 || !used.insert((at, to, t)) {
                break;
            }
            b.wait_until(t);
            b.step(to);
            moved = true;
            at = to;
            t += 1;
        }
        if moved {
            walks.push(b.finish());
        }
    }
    let sched = Schedule::new(walks);
    let demands: Vec<Demand> =
        sched.temporal_edges().filter(|_| rng.gen_bool(0.6)).map(|(_, m)| Demand::new(m.from, m.to, m.time)).collect();
    if demands.is_empty() {
        return None;
    }
    let h = sched.walks().iter().map(|w| w.lifespan()).max().unwrap();
    let inst = Instance::new(g, demands, sched.len(), Some(h), Variant::Lifespan).unwrap();
    Some((inst, sched))
}

fn star_solver() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x57a);
    let mut failures = Vec::new();
    let (mut made, mut compared, mut max_wait) = (0, 0, 0);
    while made < 100 {
        let Some((inst, sched)) = random_star_instance(&mut rng) else { continue };
        made += 1;
        match normalize_star_schedule(&inst, &sched) {
            Ok(out) => {
                let wait = out.walks().iter().map(|w| w.max_wait_where(|v| v != 0)).max().unwrap_or(0);
                max_wait = max_wait.max(wait);
                if wait > 1 || !is_valid_schedule(&inst, &out) {
                    failures.push(format!("normalized wait {wait} on {}", describe(&inst)));
                }
            }
            Err(e) => failures.push(format!("normalize: {e} on {}", describe(&inst))),
        }
        for k in 1..=inst.k() {
            let i = inst.with_k(k);
            let (a, b) = (solve_star_fpt(&i).unwrap(), solve_xp_k(&i).unwrap());
            compared += 1;
            if a.verdict().is_none() || a.verdict() != b.verdict() {
                failures.push(format!("star {} vs xp {} on {}", a.label(), b.label(), describe(&i)));
            }
        }
    }
    if failures.is_empty() {
        Ok(format!("100 instances, {compared} decisions agree, normalized leaf waits at most {max_wait}"))
    } else {
        Err(format!("{} failures: {}", failures.len(), first_failures(&failures)))
    }
}

// ---------------------------------------------------------------- 8

/// Cheapest 0/1 flow of the given value over all arc subsets, with a
/// conservation check written here. `None` when no subset works.
fn brute_force_flow(net: &FlowNetwork, value: u64) -> Option<u64> {
    let m = net.arcs.len();
    let mut best = None;
    for mask in 0u32..1 << m {
        let mut balance = vec![0i64; net.node_count];
        let mut cost = 0;
        let mut ok = true;
        for (i, a) in net.arcs.iter().enumerate() {
            let f = u64::from(mask >> i & 1 == 1);
            if f < a.lower || f > a.upper {
                ok = false;
                break;
            }
            balance[a.from] -= f as i64;
            balance[a.to] += f as i64;
            cost += f * a.cost;
        }
        let v = value as i64;
        let conserved = (0..net.node_count).all(|x| match x {
            _ if x == net.source => balance[x] == -v,
            _ if x == net.sink => balance[x] == v,
            _ => balance[x] == 0,
        });
        if ok && conserved && best.is_none_or(|b| cost < b) {
            best = Some(cost);
        }
    }
    best
}

fn random_network(rng: &mut ChaCha8Rng) -> FlowNetwork {
    let nodes = rng.gen_range(2..=6);
    let arcs = (0..rng.gen_range(1..=12))
        .map(|_| {
            let from = rng.gen_range(0..nodes);
            let to = (from + rng.gen_range(1..nodes)) % nodes;
            FlowArc { from, to, lower: u64::from(rng.gen_bool(0.15)), upper: 1, cost: rng.gen_range(0..=5) }
        })
        .collect();
    FlowNetwork { node_count: nodes, source: 0, sink: nodes - 1, arcs }
}

fn flow_engine() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xf10);
    let mut failures = Vec::new();
    let (mut flows, mut checked) = (0, 0);
    for _ in 0..2000 {
        let net = random_network(&mut rng);
        for value in 0..=3 {
            let expected = brute_force_flow(&net, value);
            let got = min_cost_flow_fixed_value(&net, value);
            checked += 1;
            if let Some(f) = &got {
                flows += 1;
                if !check_flow(&net, f) || f.value != value {
                    failures.push(format!("checker rejects min-cost flow {f:?} on {net:?}"));
                }
            }
            if got.as_ref().map(|f| f.cost) != expected {
                failures.push(format!("value {value}: got {:?}, expected {expected:?} on {net:?}", got.map(|f| f.cost)));
            }
        }
        let cap = 3;
        let feasible = (0..=cap).any(|v| brute_force_flow(&net, v).is_some());
        match feasible_flow_with_lower_bounds(&net, cap) {
            Some(f) => {
                flows += 1;
                if !feasible || !check_flow(&net, &f) || f.value > cap {
                    failures.push(format!("bad feasible flow {f:?} on {net:?}"));
                }
            }
            None if feasible => failures.push(format!("missed a feasible flow on {net:?}")),
            None => {}
        }
    }
    // every flow the unconstrained solver builds on the exhaustive graphs
    for g in tedsc::corpus::small_graphs(3) {
        for k in 1..=2u64 {
            let demands = g.edges().iter().take(3).enumerate().map(|(i, &(u, v))| Demand::new(u, v, 1 + i as Time));
            let inst = Instance::new(g.clone(), demands, k as usize, None, Variant::Unconstrained).unwrap();
            let opts = ExpansionOptions::new(ExpansionMode::SeHat(Terminals::Boundary), Some(flow_gamma(3, 2)));
            let fnet = build_expansion(&inst, opts).unwrap().to_flow_network(CostKind::Tau, k);
            for f in [feasible_flow_with_lower_bounds(&fnet, k), min_cost_flow_fixed_value(&fnet, k)].into_iter().flatten() {
                flows += 1;
                if !check_flow(&fnet, &f) {
                    failures.push(format!("checker rejects a flow on {}", describe(&inst)));
                }
            }
        }
    }
    if failures.is_empty() {
        Ok(format!("{checked} min-cost values match enumeration, {flows} flows pass the checker"))
    } else {
        Err(format!("{} failures: {}", failures.len(), first_failures(&failures)))
    }
}

// ---------------------------------------------------------------- 9

fn structural_counts() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x9c7);
    let mut failures = Vec::new();
    for i in 0..100 {
        let f = if i % 2 == 0 { random_balanced_cnf(&mut rng) } else { random_cnf(&mut rng, 3) };
        let m = f.balanced().clauses.len();
        for variant in [Variant::Length, Variant::Lifespan] {
            let (inst, _) = gen_from_3sat(&f, variant).unwrap();
            let got = (inst.k(), inst.demands().len(), inst.h());
            if got != (4 * m, 8 * m, Some(5)) {
                failures.push(format!("SAT with m = {m}: (k, |D|, h) = {got:?}"));
            }
        }
    }
    for bins in 1..=3usize {
        for cap in 1..=4u64 {
            for items in partitions(bins as u64 * cap, cap) {
                let d = gen_from_bin_packing(&items, bins, cap).unwrap().instance.demands().len();
                if d as u64 != bins as u64 * (2 * cap + 1) {
                    failures.push(format!("bin packing {items:?}, {bins} bins of {cap}: |D| = {d}"));
                }
            }
        }
    }
    for _ in 0..20 {
        let m = rng.gen_range(4..=9);
        let dag = random_dag(&mut rng, 5, m);
        let &(s, z) = dag.edges().choose(&mut rng).unwrap();
        let (inst, _) = gen_from_edp_dag(&dag, &[(s, z)], Variant::Length).unwrap();
        if inst.h() != Some(6) {
            failures.push(format!("EDP on 5 vertices: h = {:?}", inst.h()));
        }
    }
    if failures.is_empty() {
        Ok("SAT k = 4m, |D| = 8m, h = 5; bin packing |D| = k(2B+1); EDP on 5 vertices h = 6".into())
    } else {
        Err(format!("{} failures: {}", failures.len(), first_failures(&failures)))
    }
}
