use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::graph::NodeId;
use crate::search::{dominates, lex_cmp, LabelArena, LabelId};

/// Durations serialize as integer nanoseconds.
mod nanos {
    use std::time::Duration;

    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u64(d.as_nanos().min(u64::MAX as u128) as u64)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        u64::deserialize(d).map(Duration::from_nanos)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Stats {
    pub labels_extracted: u64,
    /// Lazily deleted labels popped from OPEN and discarded.
    pub labels_skipped: u64,
    pub candidates_generated: u64,
    pub dominance_comparisons: u64,
    pub front_size: u64,
    pub iterations: u64,
    #[serde(with = "nanos")]
    pub time_total: Duration,
    #[serde(with = "nanos")]
    pub time_open_extract: Duration,
    #[serde(with = "nanos")]
    pub time_updates: Duration,
    #[serde(with = "nanos")]
    pub time_label_processing: Duration,
    #[serde(with = "nanos")]
    pub time_communication: Duration,
}

impl Stats {
    pub fn breakdown_sum(&self) -> Duration {
        self.time_open_extract + self.time_updates + self.time_label_processing + self.time_communication
    }
}

/// One coordinator iteration of the parallel solver.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct IterationTrace {
    pub iteration: u64,
    /// Bag processed by the workers during this iteration.
    pub regular_bag: usize,
    pub goal_bag: usize,
    /// Labels kept by this iteration's extraction.
    pub extracted: usize,
    pub skipped: usize,
    #[serde(with = "nanos")]
    pub worst_worker: Duration,
    #[serde(with = "nanos")]
    pub extract: Duration,
    #[serde(with = "nanos")]
    pub updates: Duration,
    #[serde(with = "nanos")]
    pub wall: Duration,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrontEntry {
    pub cost: Vec<f64>,
    pub path: Vec<NodeId>,
    pub label: LabelId,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    /// Sorted lexicographically by cost.
    pub front: Vec<FrontEntry>,
    pub stats: Stats,
    pub trace: Vec<IterationTrace>,
}

impl SolveResult {
    pub fn front_costs(&self) -> Vec<Vec<f64>> {
        self.front.iter().map(|e| e.cost.clone()).collect()
    }
}

/// Builds the reported front from goal labels: drops members dominated by
/// another member, keeps the lowest id among equal costs, sorts by cost and
/// reconstructs paths.
pub fn build_front(arena: &LabelArena, goal_labels: &[LabelId]) -> Vec<FrontEntry> {
    let mut ids = goal_labels.to_vec();
    ids.sort_unstable();
    ids.dedup();
    let mut keep: Vec<LabelId> = Vec::with_capacity(ids.len());
    for &id in &ids {
        let c = arena.g(id);
        let dominated = ids.iter().any(|&o| o != id && dominates(arena.g(o), c));
        let repeated = keep.iter().any(|&k| arena.g(k) == c);
        if !dominated && !repeated {
            keep.push(id);
        }
    }
    keep.sort_by(|&a, &b| lex_cmp(arena.g(a), arena.g(b)).then(a.cmp(&b)));
    keep.into_iter()
        .map(|id| FrontEntry { cost: arena.g(id).to_vec(), path: arena.reconstruct_path(id), label: id })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn durations_serialize_as_nanos() {
        let s = Stats { time_total: Duration::from_micros(3), labels_extracted: 7, ..Default::default() };
        let json = serde_json::to_string(&s).unwrap();
        assert!(json.contains("\"time_total\":3000"), "{json}");
        assert!(json.contains("\"labels_extracted\":7"));
        let back: Stats = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn front_filter_drops_dominated_and_repeated() {
        let mut arena = LabelArena::new(2);
        let s = arena.push(0, &[0.0, 0.0], &[0.0, 0.0], None, None);
        let a = arena.push(1, &[2.0, 4.0], &[2.0, 4.0], Some(s), Some(0));
        let b = arena.push(1, &[4.0, 2.0], &[4.0, 2.0], Some(s), Some(1));
        let c = arena.push(1, &[4.0, 4.0], &[4.0, 4.0], Some(s), Some(2));
        let a2 = arena.push(1, &[2.0, 4.0], &[2.0, 4.0], Some(s), Some(3));
        let front = build_front(&arena, &[b, c, a2, a]);
        let got: Vec<_> = front.iter().map(|e| (e.label, e.cost.clone())).collect();
        assert_eq!(got, vec![(a, vec![2.0, 4.0]), (b, vec![4.0, 2.0])]);
        assert_eq!(front[0].path, vec![0, 1]);
        // an already clean front is unchanged
        assert_eq!(build_front(&arena, &[a, b]), front);
    }
}
