//! Coordinator side of the parallel solver: owns OPEN and the label arena,
//! extracts bags and applies worker updates.

use std::sync::atomic::Ordering;
use std::sync::Arc;
use std::thread;
use std::time::{Duration, Instant};

use super::shared::{CloseOutcome, EntryState};
use super::worker::{run_worker, Bag, BagLabel, RunState, UpdateBuffer};
use super::{ExecModel, RunConfig};
use crate::graph::Graph;
use crate::search::{LabelArena, LabelId, OpenQueue};
use crate::stats::{build_front, IterationTrace, SolveResult, Stats};

/// Sweeps of the ready flags that only yield before the coordinator parks.
const SPIN_SWEEPS: u32 = 16;
const PARK_TIMEOUT: Duration = Duration::from_micros(200);

pub(crate) fn run(graph: &Graph, cfg: &RunConfig) -> SolveResult {
    let workers = cfg.num_workers();
    let state = RunState::new(graph.num_nodes(), graph.num_objectives(), workers, thread::current());
    let start = Instant::now();
    let mut coord = Coordinator::new(graph, cfg, &state);
    thread::scope(|s| {
        for tid in 0..workers {
            let state = &state;
            s.spawn(move || run_worker(graph, state, cfg, tid));
        }
        coord.run();
        state.done.store(true, Ordering::Release);
        state.start.wait();
    });
    coord.finish(start.elapsed())
}

#[derive(Debug, Default)]
struct Extraction {
    bag: Bag,
    kept: usize,
    skipped: usize,
    time: Duration,
}

pub(crate) struct Coordinator<'a> {
    graph: &'a Graph,
    cfg: &'a RunConfig,
    state: &'a RunState,
    arena: LabelArena,
    open: OpenQueue,
    stats: Stats,
    trace: Vec<IterationTrace>,
    extract_time: Duration,
    update_time: Duration,
    processing_time: Duration,
}

impl<'a> Coordinator<'a> {
    pub(crate) fn new(graph: &'a Graph, cfg: &'a RunConfig, state: &'a RunState) -> Self {
        Coordinator {
            graph,
            cfg,
            state,
            arena: LabelArena::new(graph.num_objectives()),
            open: OpenQueue::new(cfg.queue),
            stats: Stats::default(),
            trace: Vec::new(),
            extract_time: Duration::ZERO,
            update_time: Duration::ZERO,
            processing_time: Duration::ZERO,
        }
    }

    fn seed_start_label(&mut self) -> bool {
        let s = self.graph.source();
        if !self.graph.reaches_goal(s) {
            return false;
        }
        let zero = vec![0.0; self.graph.num_objectives()];
        let h = self.graph.heuristic(s).unwrap().to_vec();
        let id = self.arena.push(s, &zero, &h, None, None);
        self.state.fs.insert_open(s, id, &zero);
        self.open.push(id, &h);
        true
    }

    fn run(&mut self) {
        if !self.seed_start_label() {
            return;
        }
        if self.cfg.exec.pipelined() {
            self.run_pipelined();
        } else {
            self.run_synchronous();
        }
    }

    /// Extract, process, apply; nothing overlaps.
    fn run_synchronous(&mut self) {
        loop {
            let t = Instant::now();
            let mut ex = self.extract_bags();
            if ex.bag.is_empty() {
                self.extract_time += ex.time;
                break;
            }
            let bag = Arc::new(std::mem::take(&mut ex.bag));
            self.dispatch(&bag);
            let (updates, worst) = self.collect_updates(false);
            self.account(&bag, &ex, updates, worst, t.elapsed(), Hiding::None);
        }
    }

    /// Workers process the current bags while the next bags are extracted.
    fn run_pipelined(&mut self) {
        let mut current = self.extract_bags();
        self.extract_time += current.time;
        loop {
            if current.bag.is_empty() {
                // OPEN may have been refilled by the last round of updates
                current = self.extract_bags();
                self.extract_time += current.time;
                if current.bag.is_empty() {
                    break;
                }
            }
            let t = Instant::now();
            let bag = Arc::new(std::mem::take(&mut current.bag));
            self.dispatch(&bag);
            let next = self.extract_bags();
            let as_ready = self.cfg.exec.applies_as_ready();
            let (updates, worst) = self.collect_updates(as_ready);
            let hiding = if as_ready { Hiding::ExtractThenUpdates } else { Hiding::ExtractOnly };
            self.account(&bag, &next, updates, worst, t.elapsed(), hiding);
            current = next;
        }
    }

    fn dispatch(&mut self, bag: &Arc<Bag>) {
        *self.state.current.lock() = Arc::clone(bag);
        self.state.start.wait();
    }

    /// Waits for every worker and applies its buffer. With `as_ready` a
    /// buffer is applied as soon as its worker signals; otherwise all
    /// buffers are applied in worker order once everyone has finished.
    /// Returns the time spent applying and the slowest worker's busy time.
    fn collect_updates(&mut self, as_ready: bool) -> (Duration, Duration) {
        let workers = self.state.ready.len();
        let mut done = vec![false; workers];
        let mut remaining = workers;
        let mut buffers: Vec<Option<UpdateBuffer>> = (0..workers).map(|_| None).collect();
        let mut applying = Duration::ZERO;
        let mut worst = Duration::ZERO;
        let mut idle_sweeps = 0;
        while remaining > 0 {
            let mut progressed = false;
            for tid in 0..workers {
                if done[tid] || !self.state.ready[tid].load(Ordering::Acquire) {
                    continue;
                }
                let buf = std::mem::take(&mut *self.state.mailbox[tid].lock());
                self.state.ready[tid].store(false, Ordering::Release);
                done[tid] = true;
                remaining -= 1;
                progressed = true;
                worst = worst.max(buf.busy);
                if as_ready {
                    let t = Instant::now();
                    self.apply(buf);
                    applying += t.elapsed();
                } else {
                    buffers[tid] = Some(buf);
                }
            }
            if progressed {
                idle_sweeps = 0;
            } else if remaining > 0 {
                idle_sweeps += 1;
                if idle_sweeps < SPIN_SWEEPS {
                    thread::yield_now();
                } else {
                    thread::park_timeout(PARK_TIMEOUT);
                }
            }
        }
        let t = Instant::now();
        for buf in buffers.into_iter().flatten() {
            self.apply(buf);
        }
        (applying + t.elapsed(), worst)
    }

    /// Pops until `num_pop` live labels are kept or OPEN is empty. Lazily
    /// deleted labels are discarded without counting.
    fn extract_bags(&mut self) -> Extraction {
        let t = Instant::now();
        let mut ex = Extraction::default();
        while ex.kept < self.cfg.num_pop {
            let Some(id) = self.open.pop() else { break };
            let node = self.arena.node(id);
            match self.state.fs.close(node, id) {
                CloseOutcome::Skipped => ex.skipped += 1,
                CloseOutcome::Closed => {
                    let l = BagLabel { id, node, g: self.arena.g(id).to_vec(), seq: ex.kept };
                    if node == self.graph.goal() {
                        ex.bag.goal.push(l);
                    } else {
                        ex.bag.regular.push(l);
                    }
                    ex.kept += 1;
                }
            }
        }
        self.stats.labels_extracted += ex.kept as u64;
        self.stats.labels_skipped += ex.skipped as u64;
        ex.time = t.elapsed();
        ex
    }

    /// Applies one worker's buffer: P deletes, P inserts, G_CL deletes,
    /// OPEN deletes, OPEN inserts.
    fn apply(&mut self, buf: UpdateBuffer) {
        self.stats.candidates_generated += buf.candidates;
        self.stats.dominance_comparisons += buf.comparisons;
        if !buf.p_del.is_empty() || !buf.p_ins.is_empty() {
            let mut p = self.state.goal_front.write();
            for id in buf.p_del {
                p.remove(id);
            }
            for id in buf.p_ins {
                p.insert(id, self.arena.g(id));
            }
        }
        for (id, v) in buf.gcl_del {
            self.state.fs.remove(v, id);
        }
        for (id, v) in buf.open_del {
            if self.cfg.exec == ExecModel::InPlaceDeletes {
                if self.state.fs.remove(v, id) == Some(EntryState::Open) {
                    self.open.remove(id, self.arena.f(id));
                }
            } else {
                self.state.fs.mark_pruned(v, id);
            }
        }
        for ins in buf.open_ins {
            let c = ins.cand;
            // every admitted candidate takes an id, so id order matches the
            // order in which workers admitted them
            let id = self.arena.push(c.node, &c.g, &c.f, Some(c.parent), Some(c.via));
            if !ins.alive || self.state.fs.has_live_cost(c.node, &c.g) {
                continue;
            }
            self.state.fs.insert_open(c.node, id, &c.g);
            self.open.push(id, &c.f);
        }
    }

    /// Splits one iteration's wall time. The slowest worker's busy time
    /// hides overlapped coordinator work: extraction first, then updates.
    fn account(&mut self, bag: &Bag, ex: &Extraction, updates: Duration, worst: Duration, wall: Duration, hiding: Hiding) {
        let (extract, updates_shown) = match hiding {
            Hiding::None => (ex.time, updates),
            Hiding::ExtractOnly => (ex.time.saturating_sub(worst), updates),
            Hiding::ExtractThenUpdates => {
                let left = worst.saturating_sub(ex.time);
                (ex.time.saturating_sub(worst), updates.saturating_sub(left))
            }
        };
        self.extract_time += extract;
        self.update_time += updates_shown;
        self.processing_time += worst;
        self.stats.iterations += 1;
        self.trace.push(IterationTrace {
            iteration: self.stats.iterations,
            regular_bag: bag.regular.len(),
            goal_bag: bag.goal.len(),
            extracted: ex.kept,
            skipped: ex.skipped,
            worst_worker: worst,
            extract: ex.time,
            updates,
            wall,
        });
    }

    fn finish(mut self, total: Duration) -> SolveResult {
        let goal_labels: Vec<LabelId> = self.state.goal_front.read().iter().map(|(id, _)| id).collect();
        let front = build_front(&self.arena, &goal_labels);
        self.stats.front_size = front.len() as u64;
        self.stats.time_total = total;
        self.stats.time_open_extract = self.extract_time;
        self.stats.time_updates = self.update_time;
        self.stats.time_label_processing = self.processing_time;
        let shown = self.extract_time + self.update_time + self.processing_time;
        if shown > total {
            // clock granularity only; keep the breakdown summing to the total
            self.stats.time_label_processing = total.saturating_sub(self.extract_time + self.update_time);
        }
        self.stats.time_communication = total.saturating_sub(
            self.stats.time_open_extract + self.stats.time_updates + self.stats.time_label_processing,
        );
        SolveResult { front, stats: self.stats, trace: self.trace }
    }
}

#[derive(Debug, Clone, Copy)]
enum Hiding {
    None,
    ExtractOnly,
    ExtractThenUpdates,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::namoa::Candidate;
    use crate::opmos::worker::Insert;
    use crate::search::{lex_cmp, QueueKind};

    fn graph() -> Graph {
        crate::graph::compute_heuristic(
            &Graph::new(
                4,
                2,
                vec![(0, 1, vec![1.0, 3.0]), (0, 2, vec![3.0, 1.0]), (1, 3, vec![1.0, 1.0]), (2, 3, vec![1.0, 1.0])],
                0,
                3,
            )
            .unwrap(),
        )
    }

    fn insert(node: u32, g: [f64; 2], f: [f64; 2]) -> Insert {
        Insert { cand: Candidate { node, g: g.to_vec(), f: f.to_vec(), parent: 0, via: 0 }, alive: true }
    }

    #[test]
    fn lazily_deleted_label_is_skipped_on_pop() {
        let g = graph();
        let cfg = RunConfig { num_pop: 4, ..Default::default() };
        let state = RunState::new(4, 2, 1, thread::current());
        let mut c = Coordinator::new(&g, &cfg, &state);
        assert!(c.seed_start_label());
        let ex = c.extract_bags();
        assert_eq!(ex.bag.regular.len(), 1);
        c.apply(UpdateBuffer {
            open_ins: vec![insert(1, [1.0, 3.0], [2.0, 4.0]), insert(2, [3.0, 1.0], [4.0, 2.0])],
            ..Default::default()
        });
        // the label at node 1 (id 1) is pruned before it is popped
        c.apply(UpdateBuffer { open_del: vec![(1, 1)], ..Default::default() });
        assert_eq!(c.open.len(), 2);
        let ex = c.extract_bags();
        assert_eq!((ex.kept, ex.skipped), (1, 1));
        assert_eq!(ex.bag.regular[0].id, 2);
        assert_eq!(c.stats.labels_skipped, 1);
    }

    #[test]
    fn in_place_delete_removes_from_open() {
        let g = graph();
        let cfg = RunConfig { exec: ExecModel::InPlaceDeletes, ..Default::default() };
        let state = RunState::new(4, 2, 1, thread::current());
        let mut c = Coordinator::new(&g, &cfg, &state);
        c.seed_start_label();
        c.extract_bags();
        c.apply(UpdateBuffer { open_ins: vec![insert(1, [1.0, 3.0], [2.0, 4.0])], ..Default::default() });
        c.apply(UpdateBuffer { open_del: vec![(1, 1)], ..Default::default() });
        assert!(c.open.is_empty());
    }

    #[test]
    fn only_pruned_labels_give_empty_bags() {
        let g = graph();
        let cfg = RunConfig { num_pop: 3, ..Default::default() };
        let state = RunState::new(4, 2, 1, thread::current());
        let mut c = Coordinator::new(&g, &cfg, &state);
        c.seed_start_label();
        c.extract_bags();
        c.apply(UpdateBuffer { open_ins: vec![insert(1, [1.0, 3.0], [2.0, 4.0])], ..Default::default() });
        c.apply(UpdateBuffer { open_del: vec![(1, 1)], ..Default::default() });
        let ex = c.extract_bags();
        assert!(ex.bag.is_empty());
        assert!(c.open.is_empty());
    }

    #[test]
    fn equal_cost_inserts_are_suppressed_and_dead_ones_skipped() {
        let g = graph();
        let cfg = RunConfig::default();
        let state = RunState::new(4, 2, 2, thread::current());
        let mut c = Coordinator::new(&g, &cfg, &state);
        c.seed_start_label();
        c.extract_bags();
        let mut dead = insert(2, [3.0, 1.0], [4.0, 2.0]);
        dead.alive = false;
        c.apply(UpdateBuffer { open_ins: vec![insert(1, [1.0, 3.0], [2.0, 4.0]), dead], ..Default::default() });
        c.apply(UpdateBuffer { open_ins: vec![insert(1, [1.0, 3.0], [2.0, 4.0])], ..Default::default() });
        assert_eq!(c.open.len(), 1);
        assert_eq!(c.arena.len(), 4);
    }

    #[test]
    fn kept_labels_come_out_in_priority_order() {
        let g = Graph::new(6, 2, (1..6).map(|v| (0, v, vec![1.0, 1.0])).collect(), 0, 5).unwrap();
        let g = crate::graph::compute_heuristic(&g);
        let cfg = RunConfig { num_pop: 16, queue: QueueKind::Priority, ..Default::default() };
        let state = RunState::new(6, 2, 1, thread::current());
        let mut c = Coordinator::new(&g, &cfg, &state);
        c.seed_start_label();
        c.extract_bags();
        let fs = [[3.0, 1.0], [1.0, 5.0], [1.0, 2.0], [2.0, 2.0], [1.0, 2.0]];
        let ins = (1..6).map(|v| insert(v, fs[v as usize - 1], fs[v as usize - 1])).collect();
        c.apply(UpdateBuffer { open_ins: ins, ..Default::default() });
        let ex = c.extract_bags();
        let mut popped: Vec<(LabelId, Vec<f64>)> = ex
            .bag
            .regular
            .iter()
            .chain(&ex.bag.goal)
            .map(|l| (l.id, c.arena.f(l.id).to_vec()))
            .collect();
        popped.sort_by_key(|p| ex.bag.regular.iter().chain(&ex.bag.goal).find(|l| l.id == p.0).unwrap().seq);
        let mut reference = popped.clone();
        reference.sort_by(|a, b| lex_cmp(&a.1, &b.1).then(a.0.cmp(&b.0)));
        assert_eq!(popped, reference);
        assert_eq!(ex.bag.goal.len(), 1);
    }
}
