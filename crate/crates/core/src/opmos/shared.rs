//! Frontier sets shared between the coordinator and the workers.
//!
//! Only the coordinator changes structure (push, remove) and flips flags.
//! Workers take read locks and see an entry only once `READY` is published.

use std::sync::atomic::{AtomicBool, Ordering};

use parking_lot::RwLock;

use crate::graph::NodeId;
use crate::search::{AtomicFlags, LabelFlags, LabelId};

const OPEN: LabelFlags = LabelFlags::READY.union(LabelFlags::IN_OPEN);
const CLOSED: LabelFlags = LabelFlags::READY.union(LabelFlags::CLOSED);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum EntryState {
    Open,
    Closed,
}

/// Labels currently in G_OP or G_CL of one node.
#[derive(Debug, Default)]
pub(crate) struct NodeEntries {
    dim: usize,
    ids: Vec<LabelId>,
    flags: Vec<AtomicFlags>,
    costs: Vec<f64>,
}

impl NodeEntries {
    fn position(&self, id: LabelId) -> Option<usize> {
        self.ids.iter().position(|&x| x == id)
    }

    fn swap_remove_at(&mut self, i: usize) {
        let d = self.dim;
        let last = self.ids.len() - 1;
        self.ids.swap_remove(i);
        self.flags.swap_remove(i);
        if i != last {
            let (head, tail) = self.costs.split_at_mut(last * d);
            head[i * d..(i + 1) * d].copy_from_slice(&tail[..d]);
        }
        self.costs.truncate(last * d);
    }

    /// Published entries that are neither retired nor marked pruned.
    pub(crate) fn live(&self) -> impl Iterator<Item = (LabelId, EntryState, &[f64])> + '_ {
        self.ids
            .iter()
            .zip(&self.flags)
            .zip(self.costs.chunks_exact(self.dim.max(1)))
            .filter_map(|((&id, flags), cost)| {
                let f = flags.load();
                if !f.contains(LabelFlags::READY) || f.contains(LabelFlags::PRUNED) {
                    return None;
                }
                let state = if f.contains(LabelFlags::CLOSED) { EntryState::Closed } else { EntryState::Open };
                Some((id, state, cost))
            })
    }

    #[cfg(test)]
    pub(crate) fn len(&self) -> usize {
        self.ids.len()
    }
}

pub(crate) struct SharedFrontier {
    nodes: Vec<RwLock<NodeEntries>>,
    visited: Vec<AtomicBool>,
}

/// Outcome of popping a label from OPEN.
#[derive(Debug, PartialEq, Eq)]
pub(crate) enum CloseOutcome {
    Closed,
    /// Lazily deleted (or already retired): discard without processing.
    Skipped,
}

impl SharedFrontier {
    pub(crate) fn new(num_nodes: usize, dim: usize) -> Self {
        SharedFrontier {
            nodes: (0..num_nodes)
                .map(|_| RwLock::new(NodeEntries { dim, ..Default::default() }))
                .collect(),
            visited: (0..num_nodes).map(|_| AtomicBool::new(false)).collect(),
        }
    }

    pub(crate) fn read(&self, v: NodeId) -> parking_lot::RwLockReadGuard<'_, NodeEntries> {
        self.nodes[v as usize].read()
    }

    pub(crate) fn visited(&self, v: NodeId) -> bool {
        self.visited[v as usize].load(Ordering::Acquire)
    }

    /// Admits a label into G_OP(v). The cost is written before `READY`.
    pub(crate) fn insert_open(&self, v: NodeId, id: LabelId, g: &[f64]) {
        let mut node = self.nodes[v as usize].write();
        node.ids.push(id);
        node.costs.extend_from_slice(g);
        node.flags.push(AtomicFlags::new(LabelFlags::IN_OPEN));
        node.flags.last().unwrap().store(OPEN);
        drop(node);
        self.visited[v as usize].store(true, Ordering::Release);
    }

    /// True iff a live entry at `v` has exactly cost `g`.
    pub(crate) fn has_live_cost(&self, v: NodeId, g: &[f64]) -> bool {
        self.nodes[v as usize].read().live().any(|(_, _, c)| c == g)
    }

    /// G_OP -> G_CL for a popped label, or discard it when it was marked pruned.
    pub(crate) fn close(&self, v: NodeId, id: LabelId) -> CloseOutcome {
        {
            let node = self.nodes[v as usize].read();
            if let Some(i) = node.position(id) {
                let f = node.flags[i].load();
                if !f.contains(LabelFlags::PRUNED) {
                    debug_assert!(f.contains(LabelFlags::IN_OPEN));
                    node.flags[i].store(CLOSED);
                    return CloseOutcome::Closed;
                }
            } else {
                return CloseOutcome::Skipped;
            }
        }
        self.remove(v, id);
        CloseOutcome::Skipped
    }

    /// Lazy OPEN delete: flags the G_OP entry. A label that has already been
    /// extracted is removed from G_CL instead. Returns the state found.
    pub(crate) fn mark_pruned(&self, v: NodeId, id: LabelId) -> Option<EntryState> {
        {
            let node = self.nodes[v as usize].read();
            let i = node.position(id)?;
            let f = node.flags[i].load();
            if f.contains(LabelFlags::PRUNED) {
                return None;
            }
            if !f.contains(LabelFlags::CLOSED) {
                node.flags[i].store(f.union(LabelFlags::PRUNED));
                return Some(EntryState::Open);
            }
        }
        self.remove(v, id);
        Some(EntryState::Closed)
    }

    /// Physically removes the entry; returns the state it had.
    pub(crate) fn remove(&self, v: NodeId, id: LabelId) -> Option<EntryState> {
        let mut node = self.nodes[v as usize].write();
        let i = node.position(id)?;
        let f = node.flags[i].load();
        node.flags[i].store(LabelFlags::default());
        node.swap_remove_at(i);
        if f.contains(LabelFlags::PRUNED) {
            None
        } else if f.contains(LabelFlags::CLOSED) {
            Some(EntryState::Closed)
        } else {
            Some(EntryState::Open)
        }
    }

    #[cfg(test)]
    pub(crate) fn entry_count(&self, v: NodeId) -> usize {
        self.nodes[v as usize].read().len()
    }
}
