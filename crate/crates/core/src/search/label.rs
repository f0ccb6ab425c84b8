use std::sync::atomic::{AtomicU8, Ordering};

use crate::graph::{EdgeId, NodeId};

pub type LabelId = u32;

const NONE: u32 = u32::MAX;

/// Lifecycle bits of a frontier entry.
///
/// `READY` is published last (release) once the entry is fully written and
/// cleared to retire it; readers ignore entries without it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LabelFlags(u8);

impl LabelFlags {
    pub const READY: LabelFlags = LabelFlags(1);
    pub const IN_OPEN: LabelFlags = LabelFlags(1 << 1);
    pub const CLOSED: LabelFlags = LabelFlags(1 << 2);
    pub const PRUNED: LabelFlags = LabelFlags(1 << 3);

    pub const fn bits(self) -> u8 {
        self.0
    }

    pub const fn union(self, other: LabelFlags) -> LabelFlags {
        LabelFlags(self.0 | other.0)
    }

    pub const fn contains(self, other: LabelFlags) -> bool {
        self.0 & other.0 == other.0
    }
}

/// Atomic holder for [`LabelFlags`].
#[derive(Debug, Default)]
pub struct AtomicFlags(AtomicU8);

impl AtomicFlags {
    pub fn new(flags: LabelFlags) -> Self {
        AtomicFlags(AtomicU8::new(flags.0))
    }

    pub fn load(&self) -> LabelFlags {
        LabelFlags(self.0.load(Ordering::Acquire))
    }

    pub fn store(&self, flags: LabelFlags) {
        self.0.store(flags.0, Ordering::Release)
    }
}

/// Borrowed view of one label.
#[derive(Debug, Clone, Copy)]
pub struct Label<'a> {
    pub id: LabelId,
    pub node: NodeId,
    pub g: &'a [f64],
    pub f: &'a [f64],
    pub parent: Option<LabelId>,
    /// Edge taken from the parent; `None` for the start label.
    pub via: Option<EdgeId>,
}

/// Append-only label storage. Ids are creation order; pruned labels stay in
/// place so parent chains remain walkable for the whole solve.
#[derive(Debug, Clone)]
pub struct LabelArena {
    dim: usize,
    nodes: Vec<NodeId>,
    g: Vec<f64>,
    f: Vec<f64>,
    parents: Vec<u32>,
    via: Vec<u32>,
}

impl LabelArena {
    pub fn new(dim: usize) -> Self {
        LabelArena { dim, nodes: Vec::new(), g: Vec::new(), f: Vec::new(), parents: Vec::new(), via: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn push(
        &mut self,
        node: NodeId,
        g: &[f64],
        f: &[f64],
        parent: Option<LabelId>,
        via: Option<EdgeId>,
    ) -> LabelId {
        debug_assert_eq!(g.len(), self.dim);
        debug_assert_eq!(f.len(), self.dim);
        let id = self.nodes.len();
        assert!(id < NONE as usize, "label id space exhausted");
        self.nodes.push(node);
        self.g.extend_from_slice(g);
        self.f.extend_from_slice(f);
        self.parents.push(parent.unwrap_or(NONE));
        self.via.push(via.unwrap_or(NONE));
        id as LabelId
    }

    pub fn get(&self, id: LabelId) -> Label<'_> {
        let i = id as usize;
        let d = self.dim;
        Label {
            id,
            node: self.nodes[i],
            g: &self.g[i * d..(i + 1) * d],
            f: &self.f[i * d..(i + 1) * d],
            parent: Some(self.parents[i]).filter(|&p| p != NONE),
            via: Some(self.via[i]).filter(|&e| e != NONE),
        }
    }

    pub fn node(&self, id: LabelId) -> NodeId {
        self.nodes[id as usize]
    }

    pub fn g(&self, id: LabelId) -> &[f64] {
        let d = self.dim;
        &self.g[id as usize * d..(id as usize + 1) * d]
    }

    pub fn f(&self, id: LabelId) -> &[f64] {
        let d = self.dim;
        &self.f[id as usize * d..(id as usize + 1) * d]
    }

    /// Edges from the start label to `id`, in travel order.
    pub fn reconstruct_edges(&self, id: LabelId) -> Vec<EdgeId> {
        let mut edges = Vec::new();
        let mut cur = id;
        while let Some(e) = self.get(cur).via {
            edges.push(e);
            cur = self.get(cur).parent.expect("label with an edge but no parent");
            assert!(edges.len() <= self.len(), "cyclic parent chain");
        }
        edges.reverse();
        edges
    }

    /// Node sequence from the start node to the node of `id`.
    pub fn reconstruct_path(&self, id: LabelId) -> Vec<NodeId> {
        let mut path = vec![self.node(id)];
        let mut cur = id;
        while let Some(p) = self.get(cur).parent {
            path.push(self.node(p));
            cur = p;
            assert!(path.len() <= self.len() + 1, "cyclic parent chain");
        }
        path.reverse();
        path
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn start_label_path_is_single_node() {
        let mut arena = LabelArena::new(2);
        let s = arena.push(4, &[0.0, 0.0], &[1.0, 1.0], None, None);
        assert_eq!(arena.reconstruct_path(s), vec![4]);
        assert!(arena.reconstruct_edges(s).is_empty());
    }

    #[test]
    fn chain_walk() {
        let mut arena = LabelArena::new(1);
        let a = arena.push(0, &[0.0], &[5.0], None, None);
        let b = arena.push(1, &[3.0], &[5.0], Some(a), Some(0));
        let c = arena.push(2, &[5.0], &[5.0], Some(b), Some(1));
        assert_eq!(arena.reconstruct_path(c), vec![0, 1, 2]);
        assert_eq!(arena.reconstruct_edges(c), vec![0, 1]);
        let l = arena.get(c);
        assert_eq!((l.node, l.g, l.parent), (2, &[5.0][..], Some(b)));
    }

    #[test]
    fn flags() {
        let f = LabelFlags::READY.union(LabelFlags::IN_OPEN);
        assert!(f.contains(LabelFlags::READY));
        assert!(!f.contains(LabelFlags::PRUNED));
        let a = AtomicFlags::new(f);
        a.store(f.union(LabelFlags::PRUNED));
        assert!(a.load().contains(LabelFlags::PRUNED));
    }
}
