use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Graph, GraphError, NodeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Topology {
    /// 4-neighbour lattice, both directions. Ignores `avg_out_degree`.
    Grid,
    /// Random source-to-goal backbone plus uniformly drawn extra edges.
    RandomDigraph,
}

/// Parameters for [`generate_synthetic`]. Identical parameters always produce
/// identical graphs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenParams {
    pub topology: Topology,
    pub num_nodes: usize,
    pub avg_out_degree: usize,
    pub num_objectives: usize,
    /// -1 gives anti-correlated objective pairs, +1 identical objectives.
    pub correlation: f64,
    pub seed: u64,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            topology: Topology::RandomDigraph,
            num_nodes: 100,
            avg_out_degree: 4,
            num_objectives: 2,
            correlation: 0.0,
            seed: 0,
        }
    }
}

const MAX_COST: f64 = 100.0;

/// Integer-valued costs in `[1, MAX_COST]`: sums stay exact in `f64`.
fn draw_costs(rng: &mut ChaCha8Rng, d: usize, rho: f64, out: &mut Vec<f64>) {
    let base: f64 = rng.gen();
    let weight = rho.abs();
    for k in 0..d {
        let noise: f64 = rng.gen();
        let shared = if rho < 0.0 && k % 2 == 1 { 1.0 - base } else { base };
        let x = weight * shared + (1.0 - weight) * noise;
        out.push(1.0 + (x * (MAX_COST - 1.0)).round());
    }
}

pub fn generate_synthetic(p: &GenParams) -> Result<Graph, GraphError> {
    let n = p.num_nodes;
    if n < 2 {
        return Err(GraphError::InfeasibleParams("need at least 2 nodes".into()));
    }
    if n > NodeId::MAX as usize {
        return Err(GraphError::InfeasibleParams("too many nodes".into()));
    }
    if p.num_objectives == 0 {
        return Err(GraphError::InfeasibleParams("need at least 1 objective".into()));
    }
    if !(-1.0..=1.0).contains(&p.correlation) {
        return Err(GraphError::InfeasibleParams("correlation must lie in [-1, 1]".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut pairs: Vec<(NodeId, NodeId)> = match p.topology {
        Topology::Grid => grid_pairs(n),
        Topology::RandomDigraph => {
            if p.avg_out_degree == 0 || p.avg_out_degree >= n {
                return Err(GraphError::InfeasibleParams(format!(
                    "out-degree {} must lie in [1, {})",
                    p.avg_out_degree, n
                )));
            }
            random_pairs(n, p.avg_out_degree, &mut rng)
        }
    };
    pairs.sort_unstable();

    let d = p.num_objectives;
    let mut src = Vec::with_capacity(pairs.len());
    let mut dst = Vec::with_capacity(pairs.len());
    let mut costs = Vec::with_capacity(pairs.len() * d);
    for (u, v) in pairs {
        src.push(u);
        dst.push(v);
        draw_costs(&mut rng, d, p.correlation, &mut costs);
    }
    Graph::from_parts(n, d, src, dst, costs, 0, (n - 1) as NodeId, None)
}

fn grid_pairs(n: usize) -> Vec<(NodeId, NodeId)> {
    let width = (n as f64).sqrt().ceil() as usize;
    let mut pairs = Vec::with_capacity(4 * n);
    for i in 0..n {
        let (r, c) = (i / width, i % width);
        let mut link = |j: usize| pairs.push((i as NodeId, j as NodeId));
        if c + 1 < width && i + 1 < n {
            link(i + 1);
        }
        if c > 0 {
            link(i - 1);
        }
        if i + width < n {
            link(i + width);
        }
        if r > 0 {
            link(i - width);
        }
    }
    pairs
}

fn random_pairs(n: usize, degree: usize, rng: &mut ChaCha8Rng) -> Vec<(NodeId, NodeId)> {
    let mut order: Vec<NodeId> = (1..(n - 1) as NodeId).collect();
    order.shuffle(rng);
    let mut chain = Vec::with_capacity(n);
    chain.push(0);
    chain.extend(order);
    chain.push((n - 1) as NodeId);

    let mut seen = HashSet::with_capacity(n * degree);
    let mut pairs = Vec::with_capacity(n * degree);
    for w in chain.windows(2) {
        seen.insert((w[0], w[1]));
        pairs.push((w[0], w[1]));
    }
    let target = n * degree;
    while pairs.len() < target {
        let u = rng.gen_range(0..n) as NodeId;
        let v = rng.gen_range(0..n) as NodeId;
        if u != v && seen.insert((u, v)) {
            pairs.push((u, v));
        }
    }
    pairs
}
