//! Sequential NAMOA*.
//!
//! Single-threaded baseline: one label popped per iteration, OPEN deletions
//! are in-place keyed removals and goal labels trigger a full scan of OPEN.

use std::borrow::Cow;
use std::time::{Duration, Instant};

use crate::graph::{compute_heuristic, EdgeId, Graph, NodeId};
use crate::search::{dominates, FrontierStore, LabelArena, LabelId, OpenQueue, QueueKind};
use crate::stats::{build_front, SolveResult, Stats};

/// A label produced by extending a closed label along one edge, not yet
/// admitted anywhere.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub node: NodeId,
    pub g: Vec<f64>,
    pub f: Vec<f64>,
    pub parent: LabelId,
    pub via: EdgeId,
}

pub(crate) fn with_heuristic(g: &Graph) -> Cow<'_, Graph> {
    if g.has_heuristics() {
        Cow::Borrowed(g)
    } else {
        Cow::Owned(compute_heuristic(g))
    }
}

/// Extends along a single edge; `None` when the target cannot reach the goal.
pub(crate) fn extend(graph: &Graph, parent: LabelId, parent_g: &[f64], e: EdgeId) -> Option<Candidate> {
    let (_, v) = graph.edge_endpoints(e);
    let h = graph.heuristic(v).expect("heuristics required");
    if !h[0].is_finite() {
        return None;
    }
    let g: Vec<f64> = parent_g.iter().zip(graph.edge_cost(e)).map(|(a, b)| a + b).collect();
    let f = g.iter().zip(h).map(|(a, b)| a + b).collect();
    Some(Candidate { node: v, g, f, parent, via: e })
}

/// One candidate per out-edge of the label's node, skipping targets that
/// cannot reach the goal.
pub fn expand_label(graph: &Graph, arena: &LabelArena, id: LabelId) -> Vec<Candidate> {
    let l = arena.get(id);
    graph
        .out_edges(l.node)
        .iter()
        .filter_map(|&e| extend(graph, id, l.g, e))
        .collect()
}

pub fn solve_sequential(g: &Graph) -> SolveResult {
    solve_sequential_with(g, QueueKind::Priority)
}

/// Sequential search with a chosen OPEN ordering. FIFO only changes the
/// extraction order; dominance and pruning are unchanged.
pub fn solve_sequential_with(g: &Graph, queue: QueueKind) -> SolveResult {
    let graph = with_heuristic(g);
    let mut search = Sequential::new(&graph, queue);
    let start = Instant::now();
    search.run();
    let total = start.elapsed();
    search.finish(total)
}

#[derive(Default)]
struct Timers {
    extract: Duration,
    updates: Duration,
    processing: Duration,
}

struct Sequential<'g> {
    graph: &'g Graph,
    arena: LabelArena,
    fs: FrontierStore,
    open: OpenQueue,
    stats: Stats,
    timers: Timers,
}

impl<'g> Sequential<'g> {
    fn new(graph: &'g Graph, queue: QueueKind) -> Self {
        let d = graph.num_objectives();
        Sequential {
            graph,
            arena: LabelArena::new(d),
            fs: FrontierStore::new(graph.num_nodes(), d),
            open: OpenQueue::new(queue),
            stats: Stats::default(),
            timers: Timers::default(),
        }
    }

    fn run(&mut self) {
        let s = self.graph.source();
        if !self.graph.reaches_goal(s) {
            return;
        }
        let zero = vec![0.0; self.graph.num_objectives()];
        let h = self.graph.heuristic(s).unwrap().to_vec();
        self.admit(s, &zero, &h, None, None);

        loop {
            let t = Instant::now();
            let Some(id) = self.open.pop() else { break };
            let l = self.arena.get(id);
            let (node, g) = (l.node, l.g.to_vec());
            self.fs.close(node, id, &g);
            self.stats.labels_extracted += 1;
            self.stats.iterations += 1;
            self.timers.extract += t.elapsed();

            if node == self.graph.goal() {
                self.process_goal_label(id);
            } else {
                let t = Instant::now();
                let candidates = expand_label(self.graph, &self.arena, id);
                self.timers.processing += t.elapsed();
                self.stats.candidates_generated += candidates.len() as u64;
                for c in candidates {
                    self.process_regular_candidate(c);
                }
            }
        }
    }

    fn admit(&mut self, node: NodeId, g: &[f64], f: &[f64], parent: Option<LabelId>, via: Option<EdgeId>) {
        let t = Instant::now();
        let id = self.arena.push(node, g, f, parent, via);
        self.open.push(id, f);
        self.fs.open_mut(node).insert(id, g);
        self.fs.mark_visited(node);
        self.timers.updates += t.elapsed();
    }

    fn process_goal_label(&mut self, id: LabelId) {
        let t = Instant::now();
        let l = self.arena.get(id);
        let (f, g) = (l.f.to_vec(), l.g.to_vec());
        let cmp = &mut self.stats.dominance_comparisons;
        // full index scan over OPEN for heuristic dominance
        let victims: Vec<(LabelId, Vec<f64>)> = self
            .open
            .iter()
            .filter(|(_, vf)| {
                *cmp += 1;
                dominates(&f, vf)
            })
            .map(|(vid, vf)| (vid, vf.to_vec()))
            .collect();
        self.timers.processing += t.elapsed();

        let t = Instant::now();
        for (vid, vf) in &victims {
            self.open.remove(*vid, vf);
            let removed = self.fs.open_mut(self.arena.node(*vid)).remove(*vid);
            debug_assert!(removed);
        }
        self.timers.updates += t.elapsed();

        let t = Instant::now();
        let cmp = &mut self.stats.dominance_comparisons;
        self.fs.goal_front.prune(&g, cmp);
        let insert = self.fs.goal_front.not_dominated(&g, cmp) && !self.fs.goal_front.contains_cost(&g);
        self.timers.processing += t.elapsed();
        if insert {
            let t = Instant::now();
            self.fs.goal_front.insert(id, &g);
            self.timers.updates += t.elapsed();
        }
    }

    fn process_regular_candidate(&mut self, c: Candidate) {
        let t = Instant::now();
        let v = c.node;
        let cmp = &mut self.stats.dominance_comparisons;
        if !self.fs.visited(v) {
            let ok = self.fs.goal_front.not_dominated(&c.f, cmp);
            self.timers.processing += t.elapsed();
            if ok {
                self.admit(v, &c.g, &c.f, Some(c.parent), Some(c.via));
            }
            return;
        }
        if self.fs.is_duplicate(&c.g, v) {
            self.timers.processing += t.elapsed();
            return;
        }
        if !(self.fs.open(v).not_dominated(&c.g, cmp) && self.fs.closed(v).not_dominated(&c.g, cmp)) {
            self.timers.processing += t.elapsed();
            return;
        }
        self.fs.closed_mut(v).prune(&c.g, cmp);
        let pruned = self.fs.open_mut(v).prune(&c.g, cmp);
        let ok = self.fs.goal_front.not_dominated(&c.f, cmp);
        self.timers.processing += t.elapsed();

        let t = Instant::now();
        for p in pruned {
            let removed = self.open.remove(p, self.arena.f(p));
            debug_assert!(removed);
        }
        self.timers.updates += t.elapsed();
        if ok {
            self.admit(v, &c.g, &c.f, Some(c.parent), Some(c.via));
        }
    }

    fn finish(mut self, total: Duration) -> SolveResult {
        let goal_labels: Vec<LabelId> = self.fs.goal_front.iter().map(|(id, _)| id).collect();
        let front = build_front(&self.arena, &goal_labels);
        debug_assert_eq!(front.len(), goal_labels.len(), "sequential front must already be clean");
        self.stats.front_size = front.len() as u64;
        self.stats.time_total = total;
        self.stats.time_open_extract = self.timers.extract;
        self.stats.time_updates = self.timers.updates;
        self.stats.time_label_processing = self.timers.processing;
        self.stats.time_communication = total.saturating_sub(self.timers.extract + self.timers.updates + self.timers.processing);
        SolveResult { front, stats: self.stats, trace: Vec::new() }
    }
}
