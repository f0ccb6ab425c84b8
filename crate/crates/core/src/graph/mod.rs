//! Immutable multi-objective directed graph.
//!
//! Edges keep the order in which they were supplied. Out-edges are indexed
//! through a compressed adjacency so that expansion walks a contiguous slice.

mod generate;
mod heuristic;
mod io;

pub use generate::{generate_synthetic, GenParams, Topology};
pub use heuristic::compute_heuristic;
pub use io::{load_graph, parse_graph, write_graph, write_graph_to};

use thiserror::Error;

pub type NodeId = u32;
pub type EdgeId = u32;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("validation error: {0}")]
    Validation(String),
    #[error("infeasible generator parameters: {0}")]
    InfeasibleParams(String),
}

impl GraphError {
    fn invalid(msg: impl Into<String>) -> Self {
        GraphError::Validation(msg.into())
    }
}

/// A directed graph whose edges carry `num_objectives` non-negative costs.
///
/// Heuristic vectors are optional; `compute_heuristic` returns a copy with
/// them filled in. Nodes that cannot reach the goal carry `+inf` in every
/// component.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    num_nodes: usize,
    num_objectives: usize,
    edge_src: Vec<NodeId>,
    edge_dst: Vec<NodeId>,
    costs: Vec<f64>,
    adj_offsets: Vec<usize>,
    adj_edges: Vec<EdgeId>,
    source: NodeId,
    goal: NodeId,
    heuristics: Option<Vec<f64>>,
}

impl Graph {
    /// Builds and validates a graph. `edges` holds `(from, to, costs)` triples.
    pub fn new(
        num_nodes: usize,
        num_objectives: usize,
        edges: Vec<(NodeId, NodeId, Vec<f64>)>,
        source: NodeId,
        goal: NodeId,
    ) -> Result<Self, GraphError> {
        let mut edge_src = Vec::with_capacity(edges.len());
        let mut edge_dst = Vec::with_capacity(edges.len());
        let mut costs = Vec::with_capacity(edges.len() * num_objectives);
        for (i, (u, v, c)) in edges.into_iter().enumerate() {
            if c.len() != num_objectives {
                return Err(GraphError::invalid(format!(
                    "objective-count mismatch on edge {i}: expected {num_objectives}, found {}",
                    c.len()
                )));
            }
            edge_src.push(u);
            edge_dst.push(v);
            costs.extend(c);
        }
        Self::from_parts(num_nodes, num_objectives, edge_src, edge_dst, costs, source, goal, None)
    }

    #[allow(clippy::too_many_arguments)]
    pub(crate) fn from_parts(
        num_nodes: usize,
        num_objectives: usize,
        edge_src: Vec<NodeId>,
        edge_dst: Vec<NodeId>,
        costs: Vec<f64>,
        source: NodeId,
        goal: NodeId,
        heuristics: Option<Vec<f64>>,
    ) -> Result<Self, GraphError> {
        if num_objectives == 0 {
            return Err(GraphError::invalid("at least one objective is required"));
        }
        if num_nodes == 0 {
            return Err(GraphError::invalid("graph has no nodes"));
        }
        if num_nodes > NodeId::MAX as usize {
            return Err(GraphError::invalid("too many nodes"));
        }
        for (name, id) in [("source", source), ("goal", goal)] {
            if id as usize >= num_nodes {
                return Err(GraphError::invalid(format!(
                    "dangling node id: {name} {id} not in [0, {num_nodes})"
                )));
            }
        }
        debug_assert_eq!(edge_src.len(), edge_dst.len());
        debug_assert_eq!(costs.len(), edge_src.len() * num_objectives);
        for e in 0..edge_src.len() {
            let (u, v) = (edge_src[e], edge_dst[e]);
            if u as usize >= num_nodes || v as usize >= num_nodes {
                return Err(GraphError::invalid(format!(
                    "dangling node id on edge {e}: {u} -> {v} with {num_nodes} nodes"
                )));
            }
            let c = &costs[e * num_objectives..(e + 1) * num_objectives];
            for &x in c {
                if x.is_nan() || x.is_infinite() {
                    return Err(GraphError::invalid(format!("non-finite cost on edge {e}")));
                }
                if x < 0.0 {
                    return Err(GraphError::invalid(format!("negative cost on edge {e}")));
                }
            }
            if u == v && c.iter().all(|&x| x == 0.0) {
                return Err(GraphError::invalid(format!("zero-cost self-loop on edge {e}")));
            }
        }

        let mut adj_offsets = vec![0usize; num_nodes + 1];
        for &u in &edge_src {
            adj_offsets[u as usize + 1] += 1;
        }
        for i in 0..num_nodes {
            adj_offsets[i + 1] += adj_offsets[i];
        }
        let mut fill = adj_offsets.clone();
        let mut adj_edges = vec![0 as EdgeId; edge_src.len()];
        for (e, &u) in edge_src.iter().enumerate() {
            adj_edges[fill[u as usize]] = e as EdgeId;
            fill[u as usize] += 1;
        }

        let graph = Graph {
            num_nodes,
            num_objectives,
            edge_src,
            edge_dst,
            costs,
            adj_offsets,
            adj_edges,
            source,
            goal,
            heuristics: None,
        };
        match heuristics {
            Some(h) => graph.with_heuristics(h),
            None => Ok(graph),
        }
    }

    /// Attaches heuristic vectors (`num_nodes * num_objectives`, row per node)
    /// after checking that they vanish at the goal and are consistent.
    pub fn with_heuristics(mut self, h: Vec<f64>) -> Result<Self, GraphError> {
        let d = self.num_objectives;
        if h.len() != self.num_nodes * d {
            return Err(GraphError::invalid(format!(
                "heuristic table has {} values, expected {}",
                h.len(),
                self.num_nodes * d
            )));
        }
        if h.iter().any(|&x| x.is_nan() || x < 0.0) {
            return Err(GraphError::invalid("heuristic values must be non-negative"));
        }
        let goal = self.goal as usize;
        if h[goal * d..(goal + 1) * d].iter().any(|&x| x != 0.0) {
            return Err(GraphError::invalid("heuristic at goal must be the zero vector"));
        }
        for e in 0..self.num_edges() {
            let (u, v) = (self.edge_src[e] as usize, self.edge_dst[e] as usize);
            let c = self.edge_cost(e as EdgeId);
            for i in 0..d {
                if h[u * d + i] > c[i] + h[v * d + i] {
                    return Err(GraphError::invalid(format!(
                        "inconsistent heuristic on edge {e} ({u} -> {v}), objective {i}"
                    )));
                }
            }
        }
        self.heuristics = Some(h);
        Ok(self)
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn num_edges(&self) -> usize {
        self.edge_src.len()
    }

    pub fn num_objectives(&self) -> usize {
        self.num_objectives
    }

    pub fn source(&self) -> NodeId {
        self.source
    }

    pub fn goal(&self) -> NodeId {
        self.goal
    }

    pub fn edge_endpoints(&self, e: EdgeId) -> (NodeId, NodeId) {
        (self.edge_src[e as usize], self.edge_dst[e as usize])
    }

    pub fn edge_cost(&self, e: EdgeId) -> &[f64] {
        let d = self.num_objectives;
        &self.costs[e as usize * d..(e as usize + 1) * d]
    }

    /// Out-edge ids of `u` in input order.
    pub fn out_edges(&self, u: NodeId) -> &[EdgeId] {
        let u = u as usize;
        &self.adj_edges[self.adj_offsets[u]..self.adj_offsets[u + 1]]
    }

    pub fn out_degree(&self, u: NodeId) -> usize {
        let u = u as usize;
        self.adj_offsets[u + 1] - self.adj_offsets[u]
    }

    /// Iterates `(target, cost)` over the out-edges of `u`.
    pub fn neighbors(&self, u: NodeId) -> impl Iterator<Item = (NodeId, &[f64])> + '_ {
        self.out_edges(u)
            .iter()
            .map(move |&e| (self.edge_dst[e as usize], self.edge_cost(e)))
    }

    /// Iterates `(from, to, cost)` in input order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId, &[f64])> + '_ {
        (0..self.num_edges()).map(move |e| {
            (self.edge_src[e], self.edge_dst[e], self.edge_cost(e as EdgeId))
        })
    }

    pub fn has_heuristics(&self) -> bool {
        self.heuristics.is_some()
    }

    /// Heuristic vector of `v`, or `None` when heuristics were never computed.
    pub fn heuristic(&self, v: NodeId) -> Option<&[f64]> {
        let d = self.num_objectives;
        self.heuristics
            .as_deref()
            .map(|h| &h[v as usize * d..(v as usize + 1) * d])
    }

    /// False when heuristics are present and mark `v` as unable to reach the goal.
    pub fn reaches_goal(&self, v: NodeId) -> bool {
        self.heuristic(v).is_none_or(|h| h[0].is_finite())
    }

    /// True when some cycle uses only all-zero cost edges.
    pub fn has_zero_cost_cycle(&self) -> bool {
        let zero: Vec<bool> = (0..self.num_edges())
            .map(|e| self.edge_cost(e as EdgeId).iter().all(|&x| x == 0.0))
            .collect();
        // iterative DFS colouring restricted to zero-cost edges
        let mut colour = vec![0u8; self.num_nodes];
        for start in 0..self.num_nodes {
            if colour[start] != 0 {
                continue;
            }
            let mut stack = vec![(start as NodeId, 0usize)];
            colour[start] = 1;
            while let Some(&mut (u, ref mut next)) = stack.last_mut() {
                let out = self.out_edges(u);
                if *next == out.len() {
                    colour[u as usize] = 2;
                    stack.pop();
                    continue;
                }
                let e = out[*next];
                *next += 1;
                if !zero[e as usize] {
                    continue;
                }
                let v = self.edge_dst[e as usize];
                match colour[v as usize] {
                    0 => {
                        colour[v as usize] = 1;
                        stack.push((v, 0));
                    }
                    1 => return true,
                    _ => {}
                }
            }
        }
        false
    }
}
