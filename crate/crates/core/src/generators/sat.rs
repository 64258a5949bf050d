use super::GroundTruth;
use crate::error::GenError;
use crate::model::{Demand, DirectedGraph, Instance, Variant};
use std::collections::BTreeSet;

/// A CNF formula over variables `1..=vars`; literal `-i` negates `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cnf {
    pub vars: usize,
    pub clauses: Vec<Vec<i64>>,
}

impl Cnf {
    pub fn new(vars: usize, clauses: Vec<Vec<i64>>) -> Result<Self, GenError> {
        for (j, c) in clauses.iter().enumerate() {
            if c.len() > 3 {
                return Err(GenError::ClauseTooLong(j));
            }
            for &l in c {
                if l == 0 || l.unsigned_abs() as usize > vars {
                    return Err(GenError::BadLiteral(l));
                }
            }
        }
        Ok(Self { vars, clauses })
    }

    /// Parses DIMACS CNF: an optional `p cnf <vars> <clauses>` header,
    /// `c` comment lines and zero-terminated clauses.
    pub fn parse_dimacs(text: &str) -> Result<Self, GenError> {
        let mut vars = 0usize;
        let mut clauses = Vec::new();
        let mut current = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
                continue;
            }
            if let Some(rest) = line.strip_prefix('p') {
                let fields: Vec<&str> = rest.split_whitespace().collect();
                vars = fields
                    .get(1)
                    .and_then(|v| v.parse().ok())
                    .ok_or_else(|| GenError::BadParameters(format!("bad header: {line}")))?;
                continue;
            }
            for tok in line.split_whitespace() {
                let l: i64 = tok.parse().map_err(|_| GenError::BadParameters(format!("bad literal: {tok}")))?;
                if l == 0 {
                    clauses.push(std::mem::take(&mut current));
                } else {
                    vars = vars.max(l.unsigned_abs() as usize);
                    current.push(l);
                }
            }
        }
        if !current.is_empty() {
            clauses.push(current);
        }
        Self::new(vars, clauses)
    }

    /// Occurrences of `x_i` and of `¬x_i`, indexed by `i − 1`.
    pub fn occurrence_counts(&self) -> Vec<(usize, usize)> {
        let mut counts = vec![(0, 0); self.vars];
        for &l in self.clauses.iter().flatten() {
            let slot = &mut counts[l.unsigned_abs() as usize - 1];
            if l > 0 {
                slot.0 += 1;
            } else {
                slot.1 += 1;
            }
        }
        counts
    }

    pub fn is_balanced(&self) -> bool {
        self.occurrence_counts().iter().all(|&(p, q)| p == q)
    }

    /// An equisatisfiable formula with exactly three literals per clause
    /// in which every variable occurs as often positively as negatively.
    /// Shorter clauses repeat their literals, which keeps them equivalent.
    /// Each missing occurrence of a literal `l` is then added through
    /// `(l ∨ y ∨ z)`, `(¬y ∨ w ∨ u)` and `(¬z ∨ ¬w ∨ ¬u)` over fresh
    /// variables, which `y = w = true, z = false` satisfies whatever `l` is.
    /// Fresh variables occur once with either sign. Empty clauses are kept.
    pub fn balanced(&self) -> Cnf {
        let mut out = self.clone();
        for c in out.clauses.iter_mut().filter(|c| !c.is_empty()) {
            for i in c.len()..3 {
                c.push(c[i % c.len()]);
            }
        }
        for (i, (pos, neg)) in out.occurrence_counts().into_iter().enumerate() {
            let x = i as i64 + 1;
            let (lit, missing) = if pos > neg { (-x, pos - neg) } else { (x, neg - pos) };
            for _ in 0..missing {
                let [y, z, w, u] = std::array::from_fn(|j| (out.vars + 1 + j) as i64);
                out.vars += 4;
                out.clauses.extend([vec![lit, y, z], vec![-y, w, u], vec![-z, -w, -u]]);
            }
        }
        out
    }

    /// Satisfiability by DPLL with unit propagation.
    pub fn is_satisfiable(&self) -> bool {
        let mut assignment = vec![0i8; self.vars + 1];
        dpll(&self.clauses, &mut assignment)
    }
}

fn value(l: i64, a: &[i8]) -> i8 {
    let v = a[l.unsigned_abs() as usize];
    if l > 0 {
        v
    } else {
        -v
    }
}

fn dpll(clauses: &[Vec<i64>], a: &mut Vec<i8>) -> bool {
    let mut forced = Vec::new();
    loop {
        let mut unit = None;
        for c in clauses {
            if c.iter().any(|&l| value(l, a) == 1) {
                continue;
            }
            let open: Vec<i64> = c.iter().copied().filter(|&l| value(l, a) == 0).collect();
            match open.len() {
                0 => {
                    for v in forced {
                        a[v] = 0;
                    }
                    return false;
                }
                1 => {
                    unit = Some(open[0]);
                    break;
                }
                _ => {}
            }
        }
        let Some(l) = unit else { break };
        let v = l.unsigned_abs() as usize;
        a[v] = if l > 0 { 1 } else { -1 };
        forced.push(v);
    }
    let branch = clauses
        .iter()
        .filter(|c| !c.iter().any(|&l| value(l, a) == 1))
        .flat_map(|c| c.iter())
        .find(|&&l| value(l, a) == 0)
        .copied();
    let Some(l) = branch else {
        return true;
    };
    let v = l.unsigned_abs() as usize;
    for choice in [1i8, -1] {
        a[v] = choice;
        if dpll(clauses, a) {
            return true;
        }
    }
    a[v] = 0;
    for v in forced {
        a[v] = 0;
    }
    false
}

/// Largest variable count for which the generator runs DPLL.
const DPLL_VAR_LIMIT: usize = 60;

/// Builds the walk scheduling instance encoding `formula` after balancing
/// it with [`Cnf::balanced`].
///
/// Vertex `0` is the shared start `s*` and vertex `1` the shared end `z*`.
/// Each occurrence of a variable, counted over both polarities in clause
/// order, contributes `s, x, x̄, z, z'`, and each clause contributes `s^c`
/// and `c`. Edges point from `s*` towards `z*`. The bound is `h = 5` and
/// `k = 4m` for `m` clauses of the balanced formula.
pub fn gen_from_3sat(formula: &Cnf, variant: Variant) -> Result<(Instance, GroundTruth), GenError> {
    if variant == Variant::Unconstrained {
        return Err(GenError::BadParameters("the reduction needs a constrained variant".into()));
    }
    if let Some(j) = formula.clauses.iter().position(Vec::is_empty) {
        return Err(GenError::BadParameters(format!("clause {j} is empty")));
    }
    let phi = formula.balanced();
    // occurrence slots per variable, in clause order
    let mut slots: Vec<Vec<(usize, bool)>> = vec![Vec::new(); phi.vars];
    for (j, c) in phi.clauses.iter().enumerate() {
        for &l in c {
            slots[l.unsigned_abs() as usize - 1].push((j, l > 0));
        }
    }
    let (s_star, z_star) = (0usize, 1usize);
    let mut next = 2usize;
    // per variable and occurrence: [s, x, x̄, z, z']
    let mut occ: Vec<Vec<[usize; 5]>> = Vec::with_capacity(phi.vars);
    for s in &slots {
        let mut ids = Vec::with_capacity(s.len());
        for _ in s {
            ids.push([next, next + 1, next + 2, next + 3, next + 4]);
            next += 5;
        }
        occ.push(ids);
    }
    let clause_ids: Vec<(usize, usize)> = (0..phi.clauses.len()).map(|j| (next + 2 * j, next + 2 * j + 1)).collect();
    let n = next + 2 * phi.clauses.len();
    let mut edges = BTreeSet::new();
    let mut demands = Vec::new();
    for ids in &occ {
        let ni = ids.len();
        for k in 0..ni {
            let [s, x, xb, z, zp] = ids[k];
            let s_next = ids[(k + 1) % ni][0];
            edges.extend([(s_star, s), (s, x), (x, z), (z, zp), (zp, z_star), (s_next, xb), (xb, z)]);
            demands.push(Demand::new(s_star, s, 2));
            demands.push(Demand::new(zp, z_star, 6));
        }
    }
    let mut seen = vec![0usize; phi.vars];
    for (j, c) in phi.clauses.iter().enumerate() {
        let (sc, cj) = clause_ids[j];
        edges.extend([(s_star, sc), (cj, z_star)]);
        demands.push(Demand::new(s_star, sc, 1));
        demands.push(Demand::new(cj, z_star, 5));
        for &l in c {
            let i = l.unsigned_abs() as usize - 1;
            let k = seen[i];
            seen[i] += 1;
            let ids = &occ[i];
            if l > 0 {
                edges.extend([(sc, ids[k][0]), (ids[k][1], cj)]);
            } else {
                edges.extend([(sc, ids[(k + 1) % ids.len()][0]), (ids[k][2], cj)]);
            }
        }
    }
    let m = phi.clauses.len();
    let graph = DirectedGraph::new(n, edges)?;
    let inst = Instance::new(graph, demands, 4 * m, Some(5), variant)?;
    let truth = if phi.vars <= DPLL_VAR_LIMIT {
        GroundTruth::from(phi.is_satisfiable())
    } else {
        GroundTruth::Unknown
    };
    Ok((inst, truth))
}
