use std::cmp::Ordering;
use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::cost::lex_cmp;
use super::label::LabelId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QueueKind {
    /// Lexicographic F, ties broken by ascending label id.
    #[default]
    #[serde(rename = "pq")]
    Priority,
    #[serde(rename = "fifo")]
    Fifo,
}

impl QueueKind {
    pub fn as_str(self) -> &'static str {
        match self {
            QueueKind::Priority => "pq",
            QueueKind::Fifo => "fifo",
        }
    }
}

#[derive(Debug, Clone)]
struct Key {
    f: Box<[f64]>,
    id: LabelId,
}

impl PartialEq for Key {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Key {}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        lex_cmp(&self.f, &other.f).then(self.id.cmp(&other.id))
    }
}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone)]
enum Entries {
    Priority(BTreeSet<Key>),
    // ids are pushed in ascending order, which keeps the deque sorted by id
    Fifo(VecDeque<Key>),
}

/// The OPEN list. Supports keyed in-place removal for the variants that need
/// it; lazy deletion is handled by callers skipping stale pops.
#[derive(Debug, Clone)]
pub struct OpenQueue {
    entries: Entries,
}

impl OpenQueue {
    pub fn new(kind: QueueKind) -> Self {
        let entries = match kind {
            QueueKind::Priority => Entries::Priority(BTreeSet::new()),
            QueueKind::Fifo => Entries::Fifo(VecDeque::new()),
        };
        OpenQueue { entries }
    }

    pub fn kind(&self) -> QueueKind {
        match self.entries {
            Entries::Priority(_) => QueueKind::Priority,
            Entries::Fifo(_) => QueueKind::Fifo,
        }
    }

    pub fn len(&self) -> usize {
        match &self.entries {
            Entries::Priority(s) => s.len(),
            Entries::Fifo(q) => q.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn push(&mut self, id: LabelId, f: &[f64]) {
        let key = Key { f: f.into(), id };
        match &mut self.entries {
            Entries::Priority(s) => {
                s.insert(key);
            }
            Entries::Fifo(q) => {
                debug_assert!(q.back().is_none_or(|k| k.id < id), "fifo ids must be ascending");
                q.push_back(key);
            }
        }
    }

    pub fn pop(&mut self) -> Option<LabelId> {
        match &mut self.entries {
            Entries::Priority(s) => s.pop_first(),
            Entries::Fifo(q) => q.pop_front(),
        }
        .map(|k| k.id)
    }

    /// Removes the entry `(f, id)`; returns whether it was present.
    pub fn remove(&mut self, id: LabelId, f: &[f64]) -> bool {
        match &mut self.entries {
            Entries::Priority(s) => s.remove(&Key { f: f.into(), id }),
            Entries::Fifo(q) => match q.binary_search_by(|k| k.id.cmp(&id)) {
                Ok(i) => q.remove(i).is_some(),
                Err(_) => false,
            },
        }
    }

    /// Entries in pop order.
    pub fn iter(&self) -> Box<dyn Iterator<Item = (LabelId, &[f64])> + '_> {
        match &self.entries {
            Entries::Priority(s) => Box::new(s.iter().map(|k| (k.id, &*k.f))),
            Entries::Fifo(q) => Box::new(q.iter().map(|k| (k.id, &*k.f))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn priority_order_and_ties() {
        let mut q = OpenQueue::new(QueueKind::Priority);
        q.push(3, &[1.0, 5.0]);
        q.push(1, &[2.0, 0.0]);
        q.push(2, &[1.0, 5.0]);
        q.push(0, &[1.0, 6.0]);
        let order: Vec<_> = std::iter::from_fn(|| q.pop()).collect();
        assert_eq!(order, vec![2, 3, 0, 1]);
    }

    #[test]
    fn fifo_order_and_removal() {
        let mut q = OpenQueue::new(QueueKind::Fifo);
        for (id, f) in [(0, 9.0), (1, 1.0), (2, 5.0), (4, 0.0)] {
            q.push(id, &[f]);
        }
        assert!(q.remove(2, &[5.0]));
        assert!(!q.remove(3, &[0.0]));
        let order: Vec<_> = std::iter::from_fn(|| q.pop()).collect();
        assert_eq!(order, vec![0, 1, 4]);
    }

    #[test]
    fn keyed_removal() {
        let mut q = OpenQueue::new(QueueKind::Priority);
        q.push(0, &[1.0]);
        q.push(1, &[2.0]);
        assert!(q.remove(0, &[1.0]));
        assert!(!q.remove(0, &[1.0]));
        assert_eq!(q.len(), 1);
        assert_eq!(q.iter().map(|(id, _)| id).collect::<Vec<_>>(), vec![1]);
    }

    proptest! {
        #[test]
        fn priority_pops_are_sorted(costs in prop::collection::vec(prop::collection::vec(0u8..4, 2), 0..40)) {
            let mut q = OpenQueue::new(QueueKind::Priority);
            let fs: Vec<Vec<f64>> = costs.iter().map(|c| c.iter().map(|&x| f64::from(x)).collect()).collect();
            for (id, f) in fs.iter().enumerate() {
                q.push(id as LabelId, f);
            }
            let mut prev: Option<LabelId> = None;
            while let Some(id) = q.pop() {
                if let Some(p) = prev {
                    let ord = lex_cmp(&fs[p as usize], &fs[id as usize]).then(p.cmp(&id));
                    prop_assert_eq!(ord, Ordering::Less);
                }
                prev = Some(id);
            }
        }
    }
}
