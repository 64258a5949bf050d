use super::GroundTruth;
use crate::error::GenError;
use crate::model::{Demand, DirectedGraph, Instance, Time, Variant};

/// Vertices of the bidirected path `u − v − w` used by the reduction.
pub const P3_U: usize = 0;
pub const P3_V: usize = 1;
pub const P3_W: usize = 2;

/// Largest item count for which ground truth is computed exhaustively.
const EXHAUSTIVE_ITEM_LIMIT: usize = 24;

/// Output of [`gen_from_bin_packing`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinPackingInstance {
    pub instance: Instance,
    pub truth: GroundTruth,
    /// Unit items appended so that the sizes sum to `bins · capacity`.
    pub padding: usize,
}

/// Builds a length-bounded instance on the bidirected path `u − v − w`
/// that is feasible with `bins` walks iff the items fit into `bins` bins
/// of size `capacity`.
///
/// Times `1..=bins` demand `(v, u)`, placing one walk per bin on `u`. Item
/// `i` of size `s` then owns the `2s` steps starting at
/// `b(i) = bins + 1 + Σ_{j<i} 2s(x_j)`: `(u, v)` at `b(i)`, alternating
/// `(v, w)` and `(w, v)` in between and `(v, u)` at `b(i) + 2s − 1`. Every
/// time step carries exactly one demand and `h = 2·capacity + 1`.
pub fn gen_from_bin_packing(sizes: &[u64], bins: usize, capacity: u64) -> Result<BinPackingInstance, GenError> {
    if bins == 0 || capacity == 0 {
        return Err(GenError::BadParameters("bins and capacity must be positive".into()));
    }
    if sizes.contains(&0) {
        return Err(GenError::ZeroSize);
    }
    let total = bins as u64 * capacity;
    let sum: u64 = sizes.iter().sum();
    if sum > total {
        return Err(GenError::Oversized { sum, total });
    }
    let padding = (total - sum) as usize;
    let items: Vec<u64> = sizes.iter().copied().chain(std::iter::repeat_n(1, padding)).collect();
    let graph = DirectedGraph::bidirected(3, [(P3_U, P3_V), (P3_V, P3_W)])?;
    let mut demands: Vec<Demand> = (1..=bins as Time).map(|t| Demand::new(P3_V, P3_U, t)).collect();
    let mut b = bins as Time + 1;
    for &s in &items {
        demands.push(Demand::new(P3_U, P3_V, b));
        for j in 0..s - 1 {
            demands.push(Demand::new(P3_V, P3_W, b + 1 + 2 * j));
            demands.push(Demand::new(P3_W, P3_V, b + 2 + 2 * j));
        }
        demands.push(Demand::new(P3_V, P3_U, b + 2 * s - 1));
        b += 2 * s;
    }
    let instance = Instance::new(graph, demands, bins, Some(2 * capacity + 1), Variant::Length)?;
    let truth = if items.len() <= EXHAUSTIVE_ITEM_LIMIT {
        GroundTruth::from(exhaustive_partition(&items, bins, capacity))
    } else {
        GroundTruth::Unknown
    };
    Ok(BinPackingInstance { instance, truth, padding })
}

/// Whether `items` can be split into `bins` groups of total at most
/// `capacity` each, by exhaustive assignment.
pub fn exhaustive_partition(items: &[u64], bins: usize, capacity: u64) -> bool {
    let mut sorted = items.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let mut load = vec![0u64; bins];
    assign(&sorted, &mut load, capacity)
}

fn assign(items: &[u64], load: &mut [u64], capacity: u64) -> bool {
    let Some((&x, rest)) = items.split_first() else { return true };
    for i in 0..load.len() {
        // bins with equal load are interchangeable
        if load[..i].contains(&load[i]) || load[i] + x > capacity {
            continue;
        }
        load[i] += x;
        if assign(rest, load, capacity) {
            return true;
        }
        load[i] -= x;
    }
    false
}
