//! Brute-force reference fronts.
//!
//! Deliberately independent of the solvers: its own enumeration, dominance
//! test and comparison, sharing no code with `search` or the solvers.

use thiserror::Error;

use crate::graph::{Graph, NodeId};

/// Largest graph enumerated without an explicit override.
pub const DEFAULT_NODE_LIMIT: usize = 14;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("graph has {nodes} nodes; brute force is limited to {limit}")]
    TooLarge { nodes: usize, limit: usize },
    #[error("front dimensions differ: {0} vs {1}")]
    DimensionMismatch(usize, usize),
}

/// Set difference between two fronts.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FrontDiff {
    pub only_in_a: Vec<Vec<f64>>,
    pub only_in_b: Vec<Vec<f64>>,
    pub equal: bool,
}

fn better_somewhere(a: &[f64], b: &[f64]) -> bool {
    let mut strict = false;
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        strict |= x < y;
    }
    strict
}

/// Cost-unique Pareto front over all node-simple paths from source to goal
/// with at most `max_hops` edges, sorted lexicographically.
pub fn brute_force_pareto(g: &Graph, max_hops: usize) -> Result<Vec<Vec<f64>>, OracleError> {
    brute_force_pareto_limited(g, max_hops, DEFAULT_NODE_LIMIT)
}

/// As [`brute_force_pareto`] with a caller-chosen node limit.
pub fn brute_force_pareto_limited(g: &Graph, max_hops: usize, node_limit: usize) -> Result<Vec<Vec<f64>>, OracleError> {
    if g.num_nodes() > node_limit {
        return Err(OracleError::TooLarge { nodes: g.num_nodes(), limit: node_limit });
    }
    let mut costs = Vec::new();
    let mut on_path = vec![false; g.num_nodes()];
    let mut acc = vec![0.0; g.num_objectives()];
    enumerate(g, g.source(), max_hops, &mut on_path, &mut acc, &mut costs);
    Ok(pareto_filter(costs))
}

fn enumerate(g: &Graph, u: NodeId, hops_left: usize, on_path: &mut [bool], acc: &mut [f64], out: &mut Vec<Vec<f64>>) {
    if u == g.goal() {
        out.push(acc.to_vec());
        return;
    }
    if hops_left == 0 {
        return;
    }
    on_path[u as usize] = true;
    for (v, c) in g.neighbors(u) {
        if on_path[v as usize] {
            continue;
        }
        for (a, x) in acc.iter_mut().zip(c) {
            *a += x;
        }
        enumerate(g, v, hops_left - 1, on_path, acc, out);
        for (a, x) in acc.iter_mut().zip(c) {
            *a -= x;
        }
    }
    on_path[u as usize] = false;
}

/// Removes dominated vectors and exact repeats; sorts the survivors.
pub fn pareto_filter(mut costs: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    costs.sort_by(|a, b| {
        a.iter().zip(b).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal)
    });
    costs.dedup();
    let keep: Vec<bool> = costs.iter().map(|c| !costs.iter().any(|o| better_somewhere(o, c))).collect();
    costs.into_iter().zip(keep).filter_map(|(c, k)| k.then_some(c)).collect()
}

/// Exact, order-insensitive comparison of two cost-vector sets.
pub fn compare_fronts(a: &[Vec<f64>], b: &[Vec<f64>]) -> Result<FrontDiff, OracleError> {
    let dim_a = a.first().map(Vec::len);
    let dim_b = b.first().map(Vec::len);
    if let (Some(x), Some(y)) = (dim_a, dim_b) {
        if x != y {
            return Err(OracleError::DimensionMismatch(x, y));
        }
    }
    let only_in_a: Vec<Vec<f64>> = a.iter().filter(|c| !b.contains(c)).cloned().collect();
    let only_in_b: Vec<Vec<f64>> = b.iter().filter(|c| !a.contains(c)).cloned().collect();
    let equal = only_in_a.is_empty() && only_in_b.is_empty();
    Ok(FrontDiff { only_in_a, only_in_b, equal })
}
