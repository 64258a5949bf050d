use crate::error::GenError;
use crate::model::{Demand, DirectedGraph, Instance, Variant};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Parameters of [`gen_random`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandomParams {
    pub n: usize,
    pub m: usize,
    pub demands: usize,
    pub lambda: u64,
    pub k: usize,
    pub h: Option<u64>,
    pub variant: Variant,
    pub seed: u64,
}

/// A seeded instance with `m` distinct uniform edges and `demands`
/// distinct uniform demands over those edges and times `1..=lambda`.
/// Vertices left without edges are removed.
pub fn gen_random(p: &RandomParams) -> Result<Instance, GenError> {
    let bad = |msg: &str| Err(GenError::BadParameters(msg.to_string()));
    if p.n < 2 || p.m == 0 || p.lambda == 0 {
        return bad("n must be at least 2 and m, lambda positive");
    }
    if p.demands == 0 {
        return bad("at least one demand is required");
    }
    let pairs = p.n * (p.n - 1);
    if p.m > pairs {
        return bad("more edges than ordered vertex pairs");
    }
    let slots = (p.m as u64).checked_mul(p.lambda).filter(|&s| s <= usize::MAX as u64);
    if slots.is_none_or(|s| (p.demands as u64) > s) {
        return bad("more demands than (edge, time) slots");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let edges: Vec<(usize, usize)> = sample(&mut rng, pairs, p.m)
        .into_iter()
        .map(|i| {
            let (u, r) = (i / (p.n - 1), i % (p.n - 1));
            (u, if r >= u { r + 1 } else { r })
        })
        .collect();
    let demands: Vec<Demand> = sample(&mut rng, slots.unwrap() as usize, p.demands)
        .into_iter()
        .map(|i| {
            let (u, v) = edges[i % p.m];
            Demand::new(u, v, (i / p.m) as u64 + 1)
        })
        .collect();
    let (graph, map) = DirectedGraph::new(p.n, edges)?.strip_isolated();
    let mut new_id = vec![usize::MAX; p.n];
    for (i, &v) in map.iter().enumerate() {
        new_id[v] = i;
    }
    let demands = demands.into_iter().map(|d| Demand::new(new_id[d.u], new_id[d.v], d.t));
    Ok(Instance::new(graph, demands, p.k, p.h, p.variant)?)
}
