//! Deterministic instance corpora shared by the acceptance run.

use opmos_core::graph::{generate_synthetic, GenParams, Topology};
use opmos_core::Graph;

/// A named corpus member.
#[derive(Debug, Clone)]
pub struct Instance {
    pub name: String,
    pub graph: Graph,
}

const CORRELATIONS: [f64; 5] = [-0.9, -0.4, 0.0, 0.4, 0.8];
const GRID_SIZES: [usize; 4] = [4, 6, 9, 12];

/// Oracle-eligible instances: at most 12 nodes, one to four objectives,
/// correlation and topology cycling independently of the objective count.
pub fn exactness_corpus(count: usize) -> Vec<Instance> {
    (0..count)
        .map(|i| {
            let d = 1 + i % 4;
            let correlation = CORRELATIONS[(i / 4) % CORRELATIONS.len()];
            let seed = 10_000 + i as u64;
            let params = if i % 5 == 4 {
                GenParams {
                    topology: Topology::Grid,
                    num_nodes: GRID_SIZES[(i / 5) % GRID_SIZES.len()],
                    avg_out_degree: 4,
                    num_objectives: d,
                    correlation,
                    seed,
                }
            } else {
                let num_nodes = 4 + (i * 7) % 9;
                GenParams {
                    topology: Topology::RandomDigraph,
                    num_nodes,
                    avg_out_degree: (1 + i % 4).min(num_nodes - 1),
                    num_objectives: d,
                    correlation,
                    seed,
                }
            };
            let graph = generate_synthetic(&params).expect("exactness corpus parameters are feasible");
            let name = format!(
                "exact-{i:03} {} n={} d={d} rho={correlation}",
                if params.topology == Topology::Grid { "grid" } else { "random" },
                params.num_nodes
            );
            Instance { name, graph }
        })
        .collect()
}

/// Mid-size grid instances for the work-efficiency trends.
pub fn trend_corpus(num_objectives: usize, count: usize) -> Vec<Instance> {
    (0..count as u64)
        .map(|seed| {
            let graph = generate_synthetic(&GenParams {
                topology: Topology::Grid,
                num_nodes: 500,
                avg_out_degree: 4,
                num_objectives,
                correlation: 0.7,
                seed,
            })
            .expect("trend corpus parameters are feasible");
            Instance { name: format!("trend d={num_objectives} seed={seed}"), graph }
        })
        .collect()
}

/// Instances beyond oracle reach for repeated-run comparisons.
pub fn mid_corpus(count: usize) -> Vec<Instance> {
    (0..count as u64)
        .map(|seed| {
            let graph = generate_synthetic(&GenParams {
                topology: Topology::Grid,
                num_nodes: 150,
                avg_out_degree: 4,
                num_objectives: 2 + seed as usize % 2,
                correlation: -0.3,
                seed: 500 + seed,
            })
            .expect("mid corpus parameters are feasible");
            Instance { name: format!("mid grid n=150 d={} seed={}", 2 + seed % 2, 500 + seed), graph }
        })
        .collect()
}

/// A square `side` × `side` six-objective grid. Solve time grows steeply but
/// not monotonically with `side`; 27 takes on the order of 10–15 s
/// sequentially with an optimised build.
pub fn speedup_instance(side: usize) -> Instance {
    let graph = generate_synthetic(&GenParams {
        topology: Topology::Grid,
        num_nodes: side * side,
        avg_out_degree: 4,
        num_objectives: 6,
        correlation: 0.6,
        seed: 1,
    })
    .expect("speedup instance parameters are feasible");
    Instance { name: format!("speedup grid {side}x{side} d=6"), graph }
}
