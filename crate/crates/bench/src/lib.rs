//! Benchmark fixtures: deterministic instances for each solver family.

use tedsc::generators::{gen_from_3sat, gen_from_bin_packing, gen_from_edp_dag, gen_random, Cnf, RandomParams};
use tedsc::{Demand, DirectedGraph, Instance, Variant};

/// A named instance and its expected answer, when known.
#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: String,
    pub instance: Instance,
    pub feasible: Option<bool>,
}

fn fixture(name: impl Into<String>, instance: Instance, feasible: Option<bool>) -> Fixture {
    Fixture { name: name.into(), instance, feasible }
}

/// Bin packing encodings with feasible and infeasible answers.
pub fn bin_packing() -> Vec<Fixture> {
    [(&[1, 2, 3][..], 2, 3), (&[2, 2, 2, 1, 1][..], 2, 4), (&[3, 3, 2][..], 2, 4)]
        .into_iter()
        .map(|(sizes, bins, cap)| {
            let bp = gen_from_bin_packing(sizes, bins, cap).expect("valid bin packing");
            let name = format!("binpack-{}x{}-cap{}", sizes.len(), bins, cap);
            fixture(name, bp.instance, bp.truth.verdict())
        })
        .collect()
}

/// 3-SAT encodings for both constrained variants.
pub fn sat() -> Vec<Fixture> {
    let formulas = [
        ("sat", Cnf::new(3, vec![vec![1, 2, -3], vec![-1, 3, 2], vec![-2, 1, 3], vec![-1, -2, -3]])),
        ("unsat", Cnf::new(1, vec![vec![1], vec![-1]])),
    ];
    let mut out = Vec::new();
    for (name, cnf) in formulas {
        let cnf = cnf.expect("valid formula");
        for variant in [Variant::Length, Variant::Lifespan] {
            let (inst, truth) = gen_from_3sat(&cnf, variant).expect("encodable formula");
            out.push(fixture(format!("{name}-{}", variant.name()), inst, truth.verdict()));
        }
    }
    out
}

/// The five-vertex edge-disjoint paths encoding with three pairs.
pub fn edge_disjoint_paths() -> Fixture {
    let dag = DirectedGraph::new(5, [(0, 3), (3, 4), (0, 2), (1, 2), (2, 4)]).expect("valid DAG");
    let (inst, truth) = gen_from_edp_dag(&dag, &[(0, 4), (0, 2), (1, 4)], Variant::Length).expect("valid pairs");
    fixture("edp-5", inst, truth.verdict())
}

/// Seeded random unconstrained instances with a long time horizon, so
/// that gap compression matters.
pub fn sparse_random() -> Vec<Fixture> {
    [(6, 12, 20, 10_000, 4), (8, 20, 40, 1_000_000, 6)]
        .into_iter()
        .map(|(n, m, demands, lambda, k)| {
            let p = RandomParams { n, m, demands, lambda, k, h: None, variant: Variant::Unconstrained, seed: 7 };
            fixture(format!("random-n{n}-d{demands}"), gen_random(&p).expect("valid parameters"), None)
        })
        .collect()
}

/// Small dense random instances within the exhaustive oracle's caps.
pub fn small_random() -> Vec<Fixture> {
    [(Variant::Unconstrained, None), (Variant::Length, Some(3)), (Variant::Lifespan, Some(4))]
        .into_iter()
        .map(|(variant, h)| {
            let p = RandomParams { n: 3, m: 4, demands: 4, lambda: 5, k: 2, h, variant, seed: 11 };
            fixture(format!("small-{}", variant.name()), gen_random(&p).expect("valid parameters"), None)
        })
        .collect()
}

/// A lifespan-bounded instance on a bidirected star with three leaves.
pub fn star() -> Fixture {
    let g = DirectedGraph::bidirected(4, (1..4).map(|l| (0, l))).expect("valid star");
    let demands = [(1, 0, 1), (0, 2, 2), (2, 0, 3), (0, 3, 5), (3, 0, 2), (0, 1, 4), (1, 0, 6), (0, 2, 8)]
        .map(|(u, v, t)| Demand::new(u, v, t));
    let inst = Instance::new(g, demands, 3, Some(4), Variant::Lifespan).expect("valid instance");
    fixture("star-3", inst, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use tedsc::constrained::{solve_fpt_kh, solve_star_fpt};
    use tedsc::oracle::oracle_decide;
    use tedsc::Decision;

    fn answer(d: Decision) -> Option<bool> {
        match d {
            Decision::Yes(_) => Some(true),
            Decision::No => Some(false),
            Decision::Unknown(_) => None,
        }
    }

    #[test]
    fn constrained_fixtures_match_their_truth() {
        let all = bin_packing().into_iter().chain(sat()).chain([edge_disjoint_paths()]);
        for f in all {
            assert_eq!(answer(solve_fpt_kh(&f.instance).unwrap()), f.feasible, "{}", f.name);
        }
    }

    #[test]
    fn small_fixtures_are_decided_by_the_oracle() {
        for f in small_random() {
            assert!(answer(oracle_decide(&f.instance)).is_some(), "{}", f.name);
        }
    }

    #[test]
    fn star_solver_agrees_with_fpt() {
        let f = star();
        let star = answer(solve_star_fpt(&f.instance).unwrap());
        assert!(star.is_some());
        assert_eq!(star, answer(solve_fpt_kh(&f.instance).unwrap()));
    }
}
