use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{Graph, NodeId};

#[derive(PartialEq)]
struct HeapItem {
    dist: f64,
    node: NodeId,
}

impl Eq for HeapItem {}

impl Ord for HeapItem {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on distance
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Distances to the goal using only objective `objective` of each edge,
/// computed by Dijkstra over the reversed graph. Unreachable nodes get `+inf`.
pub(crate) fn distances_to_goal(g: &Graph, objective: usize, rev: &ReverseAdjacency) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; g.num_nodes()];
    let mut heap = BinaryHeap::new();
    dist[g.goal() as usize] = 0.0;
    heap.push(HeapItem { dist: 0.0, node: g.goal() });
    while let Some(HeapItem { dist: du, node: u }) = heap.pop() {
        if du > dist[u as usize] {
            continue;
        }
        for &(pred, e) in rev.incoming(u) {
            let nd = du + g.edge_cost(e)[objective];
            if nd < dist[pred as usize] {
                dist[pred as usize] = nd;
                heap.push(HeapItem { dist: nd, node: pred });
            }
        }
    }
    dist
}

pub(crate) struct ReverseAdjacency {
    offsets: Vec<usize>,
    entries: Vec<(NodeId, u32)>,
}

impl ReverseAdjacency {
    pub(crate) fn new(g: &Graph) -> Self {
        let mut offsets = vec![0usize; g.num_nodes() + 1];
        for (_, v, _) in g.edges() {
            offsets[v as usize + 1] += 1;
        }
        for i in 0..g.num_nodes() {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut entries = vec![(0, 0); g.num_edges()];
        for (e, (u, v, _)) in g.edges().enumerate() {
            entries[fill[v as usize]] = (u, e as u32);
            fill[v as usize] += 1;
        }
        ReverseAdjacency { offsets, entries }
    }

    fn incoming(&self, v: NodeId) -> &[(NodeId, u32)] {
        &self.entries[self.offsets[v as usize]..self.offsets[v as usize + 1]]
    }
}

/// Returns a copy of `g` whose heuristic vectors hold, per objective, the
/// exact single-objective distance to the goal. Any existing heuristics are
/// replaced, so the operation is idempotent.
pub fn compute_heuristic(g: &Graph) -> Graph {
    let d = g.num_objectives();
    let n = g.num_nodes();
    let rev = ReverseAdjacency::new(g);
    let mut table = vec![0.0; n * d];
    for i in 0..d {
        let dist = distances_to_goal(g, i, &rev);
        for (v, x) in dist.into_iter().enumerate() {
            table[v * d + i] = x;
        }
    }
    // a node either reaches the goal in every objective or in none
    let mut out = g.clone();
    out.heuristics = Some(table);
    debug_assert!(out.clone().with_heuristics(out.heuristics.clone().unwrap()).is_ok());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_heuristic() {
        let g = Graph::new(3, 2, vec![(0, 1, vec![3.0, 1.0]), (1, 2, vec![2.0, 5.0])], 0, 2).unwrap();
        let h = compute_heuristic(&g);
        assert_eq!(h.heuristic(0).unwrap(), &[5.0, 6.0]);
        assert_eq!(h.heuristic(1).unwrap(), &[2.0, 5.0]);
        assert_eq!(h.heuristic(2).unwrap(), &[0.0, 0.0]);
    }

    #[test]
    fn objectives_are_independent() {
        // 0->2 directly is cheap in objective 0, via 1 is cheap in objective 1
        let g = Graph::new(
            3,
            2,
            vec![(0, 2, vec![1.0, 10.0]), (0, 1, vec![5.0, 1.0]), (1, 2, vec![5.0, 1.0])],
            0,
            2,
        )
        .unwrap();
        let h = compute_heuristic(&g);
        assert_eq!(h.heuristic(0).unwrap(), &[1.0, 2.0]);
    }

    #[test]
    fn unreachable_nodes_are_infinite_and_idempotent() {
        let g = Graph::new(4, 1, vec![(0, 1, vec![1.0]), (2, 3, vec![1.0])], 0, 1).unwrap();
        let h = compute_heuristic(&g);
        assert!(h.reaches_goal(0));
        assert!(!h.reaches_goal(2));
        assert!(!h.reaches_goal(3));
        assert_eq!(compute_heuristic(&h), h);
    }
}
