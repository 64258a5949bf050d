use proptest::prelude::*;
use tedsc::approx::segment_path;
use tedsc::flow::{check_flow, decompose_paths, min_cost_flow_fixed_value, FlowArc, FlowNetwork};
use tedsc::generators::{gen_random, Cnf, RandomParams};
use tedsc::unconstrained::solve_tedsc;
use tedsc::{Demand, Instance, Move, TemporalWalk, Variant};

fn brute_force_sat(f: &Cnf) -> bool {
    (0u32..1 << f.vars).any(|a| {
        f.clauses.iter().all(|c| c.iter().any(|&l| (a >> (l.unsigned_abs() - 1) & 1 == 1) == (l > 0)))
    })
}

fn cnf() -> impl Strategy<Value = Cnf> {
    (1usize..=4).prop_flat_map(|vars| {
        let lit = (1..=vars as i64, any::<bool>()).prop_map(|(v, pos)| if pos { v } else { -v });
        prop::collection::vec(prop::collection::vec(lit, 1..=3), 1..=5)
            .prop_map(move |clauses| Cnf::new(vars, clauses).unwrap())
    })
}

/// A walk on two vertices that moves or waits at every step.
fn walk() -> impl Strategy<Value = TemporalWalk> {
    (1u64..5, prop::collection::vec(any::<bool>(), 1..12)).prop_map(|(start, moves)| {
        let mut at = 0;
        let mut steps = vec![(at, start)];
        for (i, m) in moves.into_iter().enumerate() {
            if m {
                at = 1 - at;
            }
            steps.push((at, start + 1 + i as u64));
        }
        TemporalWalk::from_steps(&steps).unwrap()
    })
}

fn flow_network() -> impl Strategy<Value = FlowNetwork> {
    (3usize..7).prop_flat_map(|nodes| {
        // arcs only go forward, so every flow decomposes into paths
        let arc = (0..nodes - 1, 1..nodes, 1u64..3, 0u64..5).prop_filter_map("forward", |(a, b, upper, cost)| {
            (a < b).then_some(FlowArc { from: a, to: b, lower: 0, upper, cost })
        });
        prop::collection::vec(arc, 1..14).prop_map(move |arcs| FlowNetwork {
            node_count: nodes,
            source: 0,
            sink: nodes - 1,
            arcs,
        })
    })
}

fn moves_of(walks: &[TemporalWalk]) -> Vec<Move> {
    let mut out: Vec<Move> = walks.iter().flat_map(|w| w.moves().iter().copied()).collect();
    out.sort_by_key(|m| m.time);
    out
}

proptest! {
    #[test]
    fn balancing_keeps_satisfiability(f in cnf()) {
        let b = f.balanced();
        prop_assert!(b.is_balanced());
        prop_assert!(b.clauses.iter().all(|c| c.len() == 3));
        prop_assert_eq!(brute_force_sat(&f), b.is_satisfiable());
        prop_assert_eq!(f.is_satisfiable(), brute_force_sat(&f));
    }

    #[test]
    fn segments_respect_the_bound(q in walk(), h in 1u64..5) {
        for variant in [Variant::Length, Variant::Lifespan] {
            let parts = segment_path(&q, h, variant);
            prop_assert!(parts.iter().all(|p| p.measure(variant).unwrap() <= h));
            prop_assert!(parts.iter().all(|p| !p.moves().is_empty()));
            prop_assert_eq!(moves_of(&parts), moves_of(std::slice::from_ref(&q)));
        }
        let cuts = segment_path(&q, h, Variant::Length).len() as u64;
        prop_assert!(cuts <= q.length().div_ceil(h));
    }

    #[test]
    fn min_cost_flows_decompose(net in flow_network(), value in 1u64..4) {
        if let Some(f) = min_cost_flow_fixed_value(&net, value) {
            prop_assert!(check_flow(&net, &f));
            let paths = decompose_paths(&net, &f);
            prop_assert_eq!(paths.len() as u64, value);
            let mut used = vec![0u64; net.arcs.len()];
            for p in &paths {
                prop_assert_eq!(net.arcs[p[0]].from, net.source);
                prop_assert_eq!(net.arcs[*p.last().unwrap()].to, net.sink);
                for w in p.windows(2) {
                    prop_assert_eq!(net.arcs[w[0]].to, net.arcs[w[1]].from);
                }
                for &a in p {
                    used[a] += 1;
                }
            }
            prop_assert_eq!(used, f.values);
        }
    }

    #[test]
    fn shifting_time_keeps_the_answer(seed in any::<u64>(), shift in 1u64..1_000_000) {
        let p = RandomParams { n: 3, m: 4, demands: 4, lambda: 6, k: 2, h: None, variant: Variant::Unconstrained, seed };
        let inst = gen_random(&p).unwrap();
        let moved = Instance::new(
            inst.graph().clone(),
            inst.demands().iter().map(|d| Demand::new(d.u, d.v, d.t + shift)),
            inst.k(),
            None,
            Variant::Unconstrained,
        )
        .unwrap();
        prop_assert_eq!(solve_tedsc(&inst).unwrap().verdict(), solve_tedsc(&moved).unwrap().verdict());
    }
}
