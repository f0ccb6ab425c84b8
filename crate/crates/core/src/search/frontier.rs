use super::cost::dominates;
use super::label::LabelId;
use crate::graph::NodeId;

/// A set of labels with their cost vectors stored inline for linear scans.
#[derive(Debug, Clone)]
pub struct LabelSet {
    dim: usize,
    ids: Vec<LabelId>,
    costs: Vec<f64>,
}

impl LabelSet {
    pub fn new(dim: usize) -> Self {
        LabelSet { dim, ids: Vec::new(), costs: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn insert(&mut self, id: LabelId, cost: &[f64]) {
        debug_assert_eq!(cost.len(), self.dim);
        self.ids.push(id);
        self.costs.extend_from_slice(cost);
    }

    fn cost_at(&self, i: usize) -> &[f64] {
        &self.costs[i * self.dim..(i + 1) * self.dim]
    }

    fn swap_remove_at(&mut self, i: usize) {
        let last = self.ids.len() - 1;
        self.ids.swap_remove(i);
        if i != last {
            let d = self.dim;
            let (head, tail) = self.costs.split_at_mut(last * d);
            head[i * d..(i + 1) * d].copy_from_slice(&tail[..d]);
        }
        self.costs.truncate(last * self.dim);
    }

    pub fn remove(&mut self, id: LabelId) -> bool {
        match self.ids.iter().position(|&x| x == id) {
            Some(i) => {
                self.swap_remove_at(i);
                true
            }
            None => false,
        }
    }

    pub fn contains(&self, id: LabelId) -> bool {
        self.ids.contains(&id)
    }

    pub fn iter(&self) -> impl Iterator<Item = (LabelId, &[f64])> + '_ {
        self.ids.iter().copied().zip(self.costs.chunks_exact(self.dim))
    }

    /// False iff some member dominates `c`.
    pub fn not_dominated(&self, c: &[f64], comparisons: &mut u64) -> bool {
        for stored in self.costs.chunks_exact(self.dim) {
            *comparisons += 1;
            if dominates(stored, c) {
                return false;
            }
        }
        true
    }

    /// Removes and returns every member dominated by `c`.
    pub fn prune(&mut self, c: &[f64], comparisons: &mut u64) -> Vec<LabelId> {
        let mut removed = Vec::new();
        let mut i = 0;
        while i < self.ids.len() {
            *comparisons += 1;
            if dominates(c, self.cost_at(i)) {
                removed.push(self.ids[i]);
                self.swap_remove_at(i);
            } else {
                i += 1;
            }
        }
        removed
    }

    pub fn contains_cost(&self, c: &[f64]) -> bool {
        self.costs.chunks_exact(self.dim).any(|stored| stored == c)
    }
}

/// Per-node open and closed frontier sets plus the goal front.
#[derive(Debug, Clone)]
pub struct FrontierStore {
    open: Vec<LabelSet>,
    closed: Vec<LabelSet>,
    visited: Vec<bool>,
    pub goal_front: LabelSet,
}

impl FrontierStore {
    pub fn new(num_nodes: usize, dim: usize) -> Self {
        FrontierStore {
            open: vec![LabelSet::new(dim); num_nodes],
            closed: vec![LabelSet::new(dim); num_nodes],
            visited: vec![false; num_nodes],
            goal_front: LabelSet::new(dim),
        }
    }

    pub fn open(&self, v: NodeId) -> &LabelSet {
        &self.open[v as usize]
    }

    pub fn open_mut(&mut self, v: NodeId) -> &mut LabelSet {
        &mut self.open[v as usize]
    }

    pub fn closed(&self, v: NodeId) -> &LabelSet {
        &self.closed[v as usize]
    }

    pub fn closed_mut(&mut self, v: NodeId) -> &mut LabelSet {
        &mut self.closed[v as usize]
    }

    pub fn visited(&self, v: NodeId) -> bool {
        self.visited[v as usize]
    }

    pub fn mark_visited(&mut self, v: NodeId) {
        self.visited[v as usize] = true;
    }

    /// Moves `id` from the open to the closed set of `v`.
    pub fn close(&mut self, v: NodeId, id: LabelId, g: &[f64]) {
        let was_open = self.open[v as usize].remove(id);
        debug_assert!(was_open, "closing a label that is not open");
        self.closed[v as usize].insert(id, g);
    }

    /// True iff a label at `v` (open or closed) has exactly cost `c`.
    pub fn is_duplicate(&self, c: &[f64], v: NodeId) -> bool {
        self.open[v as usize].contains_cost(c) || self.closed[v as usize].contains_cost(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(costs: &[&[f64]]) -> LabelSet {
        let mut s = LabelSet::new(costs[0].len());
        for (i, c) in costs.iter().enumerate() {
            s.insert(i as LabelId, c);
        }
        s
    }

    #[test]
    fn not_dominated_examples() {
        let mut n = 0;
        assert!(LabelSet::new(2).not_dominated(&[1.0, 1.0], &mut n));
        assert!(set(&[&[5.0, 4.0], &[4.0, 5.0]]).not_dominated(&[4.0, 4.0], &mut n));
        assert!(!set(&[&[5.0, 4.0]]).not_dominated(&[6.0, 6.0], &mut n));
        assert!(set(&[&[5.0, 4.0]]).not_dominated(&[5.0, 4.0], &mut n));
        assert_eq!(n, 4);
    }

    #[test]
    fn prune_examples() {
        let mut n = 0;
        let mut s = set(&[&[5.0, 4.0], &[4.0, 5.0]]);
        let mut removed = s.prune(&[4.0, 4.0], &mut n);
        removed.sort();
        assert_eq!(removed, vec![0, 1]);
        assert!(s.is_empty());

        let mut s = set(&[&[5.0, 4.0]]);
        assert!(s.prune(&[5.0, 4.0], &mut n).is_empty());
        assert_eq!(s.len(), 1);
        assert!(LabelSet::new(2).prune(&[0.0, 0.0], &mut n).is_empty());
    }

    #[test]
    fn prune_keeps_exactly_the_non_dominated() {
        let mut n = 0;
        let mut s = set(&[&[1.0, 9.0], &[3.0, 3.0], &[9.0, 1.0], &[2.0, 2.0], &[2.0, 5.0]]);
        s.prune(&[2.0, 2.0], &mut n);
        let left: Vec<_> = s.iter().map(|(id, c)| (id, c.to_vec())).collect();
        assert_eq!(left.len(), 3);
        for (_, c) in &left {
            assert!(!dominates(&[2.0, 2.0], c));
        }
        assert!(s.contains(3));
        assert!(s.contains(0) && s.contains(2));
    }

    #[test]
    fn remove_keeps_costs_aligned() {
        let mut s = set(&[&[1.0], &[2.0], &[3.0]]);
        assert!(s.remove(0));
        assert!(!s.remove(0));
        let mut pairs: Vec<_> = s.iter().map(|(id, c)| (id, c[0])).collect();
        pairs.sort_by_key(|p| p.0);
        assert_eq!(pairs, vec![(1, 2.0), (2, 3.0)]);
    }

    #[test]
    fn duplicate_detection() {
        let mut fs = FrontierStore::new(2, 2);
        fs.open_mut(1).insert(0, &[3.0, 3.0]);
        assert!(fs.is_duplicate(&[3.0, 3.0], 1));
        assert!(!fs.is_duplicate(&[3.0, 3.0], 0));
        fs.closed_mut(0).insert(1, &[3.0, 4.0]);
        assert!(!fs.is_duplicate(&[3.0, 3.0], 0));
        fs.close(1, 0, &[3.0, 3.0]);
        assert!(fs.is_duplicate(&[3.0, 3.0], 1));
        assert!(fs.open(1).is_empty());
    }
}
