//! Worker side of the parallel solver.
//!
//! A worker never mutates shared state. It reads the published frontier and
//! goal front, and records its effects in an [`UpdateBuffer`]. A per-iteration
//! overlay holds the worker's own pending effects so that later candidates in
//! the same iteration see them, as they would in the sequential search.

use std::collections::{HashMap, HashSet};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::{Arc, Barrier};
use std::thread::Thread;
use std::time::{Duration, Instant};

use parking_lot::{Mutex, RwLock};

use super::shared::{EntryState, SharedFrontier};
use super::split::nbr_splitting;
use super::{ExecModel, LbPolicy, RunConfig};
use crate::graph::{Graph, NodeId};
use crate::namoa::{extend, Candidate};
use crate::search::{dominates, LabelId, LabelSet};

/// A label extracted into a bag, with the data workers need copied in.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct BagLabel {
    pub id: LabelId,
    pub node: NodeId,
    pub g: Vec<f64>,
    /// Position in extraction order across both bags.
    pub seq: usize,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub(crate) struct Bag {
    pub regular: Vec<BagLabel>,
    pub goal: Vec<BagLabel>,
}

impl Bag {
    pub fn len(&self) -> usize {
        self.regular.len() + self.goal.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// A candidate the worker admitted. `alive` is cleared when a later
/// candidate of the same worker prunes it before the coordinator sees it.
#[derive(Debug, Clone)]
pub(crate) struct Insert {
    pub cand: Candidate,
    pub alive: bool,
}

/// Everything one worker hands to the coordinator for one iteration.
#[derive(Debug, Default)]
pub(crate) struct UpdateBuffer {
    pub p_ins: Vec<LabelId>,
    pub p_del: Vec<LabelId>,
    pub open_ins: Vec<Insert>,
    pub open_del: Vec<(LabelId, NodeId)>,
    pub gcl_del: Vec<(LabelId, NodeId)>,
    pub candidates: u64,
    pub comparisons: u64,
    pub busy: Duration,
}

/// Goal-phase effects shared among workers before regular processing.
#[derive(Debug, Default)]
struct GoalOutput {
    p_ins: Vec<(LabelId, Vec<f64>)>,
    p_del: Vec<LabelId>,
    open_del: Vec<LabelId>,
}

/// State shared by the coordinator and all workers for one solve.
pub(crate) struct RunState {
    pub fs: SharedFrontier,
    pub goal_front: RwLock<LabelSet>,
    pub current: Mutex<Arc<Bag>>,
    pub done: AtomicBool,
    /// Iteration boundary: coordinator plus every worker.
    pub start: Barrier,
    /// Worker-only barrier for phases inside an iteration.
    phase: Barrier,
    pub ready: Vec<AtomicBool>,
    pub mailbox: Vec<Mutex<UpdateBuffer>>,
    goal_slots: Vec<Mutex<GoalOutput>>,
    insert_slots: Vec<Mutex<Vec<(NodeId, Vec<f64>)>>>,
    pub coordinator: Thread,
}

impl RunState {
    pub fn new(num_nodes: usize, dim: usize, workers: usize, coordinator: Thread) -> Self {
        RunState {
            fs: SharedFrontier::new(num_nodes, dim),
            goal_front: RwLock::new(LabelSet::new(dim)),
            current: Mutex::new(Arc::new(Bag::default())),
            done: AtomicBool::new(false),
            start: Barrier::new(workers + 1),
            phase: Barrier::new(workers),
            ready: (0..workers).map(|_| AtomicBool::new(false)).collect(),
            mailbox: (0..workers).map(|_| Mutex::new(UpdateBuffer::default())).collect(),
            goal_slots: (0..workers).map(|_| Mutex::new(GoalOutput::default())).collect(),
            insert_slots: (0..workers).map(|_| Mutex::new(Vec::new())).collect(),
            coordinator,
        }
    }
}

/// Nodes whose G_OP a worker scans for one goal label: every `step`-th node
/// starting at `start`.
pub(crate) fn goal_nodes(start: usize, step: usize, num_nodes: usize) -> impl Iterator<Item = NodeId> {
    (start..num_nodes).step_by(step.max(1)).map(|i| i as NodeId)
}

pub(crate) fn run_worker(graph: &Graph, state: &RunState, cfg: &RunConfig, tid: usize) {
    loop {
        state.start.wait();
        if state.done.load(Ordering::Acquire) {
            return;
        }
        let bag = Arc::clone(&state.current.lock());
        let t = Instant::now();
        let mut w = Worker::new(graph, state, cfg, tid);
        w.process(&bag);
        let mut buf = w.buf;
        buf.busy = t.elapsed();
        *state.mailbox[tid].lock() = buf;
        state.ready[tid].store(true, Ordering::Release);
        state.coordinator.unpark();
    }
}

pub(crate) struct Worker<'a> {
    graph: &'a Graph,
    state: &'a RunState,
    cfg: &'a RunConfig,
    tid: usize,
    pub(crate) buf: UpdateBuffer,
    /// Indices into `buf.open_ins` per node.
    pending: HashMap<NodeId, Vec<usize>>,
    visited: HashSet<NodeId>,
    /// Frontier entries this worker (or, after the goal exchange, any
    /// worker) has already pruned this iteration.
    deleted: HashSet<LabelId>,
    p_ins_view: Vec<(LabelId, Vec<f64>)>,
    p_del_view: HashSet<LabelId>,
    scratch: Vec<f64>,
}

impl<'a> Worker<'a> {
    pub(crate) fn new(graph: &'a Graph, state: &'a RunState, cfg: &'a RunConfig, tid: usize) -> Self {
        Worker {
            graph,
            state,
            cfg,
            tid,
            buf: UpdateBuffer::default(),
            pending: HashMap::new(),
            visited: HashSet::new(),
            deleted: HashSet::new(),
            p_ins_view: Vec::new(),
            p_del_view: HashSet::new(),
            scratch: Vec::with_capacity(graph.num_objectives()),
        }
    }

    pub(crate) fn process(&mut self, bag: &Bag) {
        let wt = self.cfg.num_workers();
        let tid = self.tid;
        let n = self.graph.num_nodes();
        match self.cfg.lb {
            LbPolicy::Opmos => {
                for (bid, gl) in bag.goal.iter().enumerate() {
                    self.prune_open_by_goal(gl, goal_nodes((tid + bid) % wt, wt, n));
                    if bid % wt == tid {
                        self.update_goal_front(gl);
                    }
                }
                if !bag.goal.is_empty() {
                    self.exchange_goal_outputs();
                }
                self.expand_slice(&bag.regular);
            }
            LbPolicy::GoalPriority => {
                for gl in &bag.goal {
                    if wt == 1 {
                        self.prune_open_by_goal(gl, goal_nodes(0, 1, n));
                        self.update_goal_front(gl);
                    } else if tid == 0 {
                        self.update_goal_front(gl);
                    } else {
                        self.prune_open_by_goal(gl, goal_nodes(tid - 1, wt - 1, n));
                    }
                }
                if !bag.goal.is_empty() {
                    self.exchange_goal_outputs();
                }
                self.expand_slice(&bag.regular);
            }
            LbPolicy::NeighborCentric => {
                for (bid, gl) in bag.goal.iter().enumerate() {
                    if bid % wt == tid {
                        self.prune_open_by_goal(gl, goal_nodes(0, 1, n));
                        self.update_goal_front(gl);
                    }
                }
                self.expand_slice(&bag.regular);
            }
            LbPolicy::LabelCentric => {
                for gl in bag.goal.iter().filter(|l| l.seq % wt == tid) {
                    self.prune_open_by_goal(gl, goal_nodes(0, 1, n));
                    self.update_goal_front(gl);
                }
                for rl in bag.regular.iter().filter(|l| l.seq % wt == tid) {
                    for i in 0..self.graph.out_degree(rl.node) {
                        self.expand_one(rl, i);
                    }
                }
            }
        }
        if self.cfg.exec == ExecModel::DupDom {
            self.reduce_inserts();
        }
    }

    /// Flags live G_OP entries at `nodes` whose F̂ the goal label's cost
    /// dominates.
    fn prune_open_by_goal(&mut self, gl: &BagLabel, nodes: impl Iterator<Item = NodeId>) {
        for v in nodes {
            let Some(h) = self.graph.heuristic(v) else { continue };
            if !h[0].is_finite() {
                continue;
            }
            let mut victims = Vec::new();
            {
                let entries = self.state.fs.read(v);
                for (id, st, g) in entries.live() {
                    if st != EntryState::Open || self.deleted.contains(&id) {
                        continue;
                    }
                    self.scratch.clear();
                    self.scratch.extend(g.iter().zip(h).map(|(a, b)| a + b));
                    self.buf.comparisons += 1;
                    if dominates(&gl.g, &self.scratch) {
                        victims.push(id);
                    }
                }
            }
            for id in victims {
                self.buf.open_del.push((id, v));
                self.deleted.insert(id);
            }
        }
    }

    /// Prunes the goal front by the label's cost and inserts it unless it is
    /// dominated by or cost-equal to a member.
    fn update_goal_front(&mut self, gl: &BagLabel) {
        let g = &gl.g;
        let cmp = &mut self.buf.comparisons;
        let mut keep = true;
        let mut victims = Vec::new();
        {
            let p = self.state.goal_front.read();
            for (id, c) in p.iter() {
                if self.p_del_view.contains(&id) {
                    continue;
                }
                *cmp += 1;
                if dominates(g, c) {
                    victims.push(id);
                } else if dominates(c, g) || c == &g[..] {
                    keep = false;
                }
            }
        }
        for id in victims {
            self.buf.p_del.push(id);
            self.p_del_view.insert(id);
        }
        let mut dropped = Vec::new();
        self.p_ins_view.retain(|(id, c)| {
            *cmp += 1;
            if dominates(g, c) {
                dropped.push(*id);
                false
            } else {
                if dominates(c, g) || c == g {
                    keep = false;
                }
                true
            }
        });
        self.buf.p_ins.retain(|id| !dropped.contains(id));
        if keep {
            self.buf.p_ins.push(gl.id);
            self.p_ins_view.push((gl.id, g.clone()));
        }
    }

    /// Publishes this worker's goal-phase effects and folds in everyone
    /// else's, so regular processing sees all goal-driven prunes.
    fn exchange_goal_outputs(&mut self) {
        *self.state.goal_slots[self.tid].lock() = GoalOutput {
            p_ins: self.p_ins_view.clone(),
            p_del: self.buf.p_del.clone(),
            open_del: self.buf.open_del.iter().map(|&(id, _)| id).collect(),
        };
        self.state.phase.wait();
        for (o, slot) in self.state.goal_slots.iter().enumerate() {
            if o == self.tid {
                continue;
            }
            let out = slot.lock();
            self.deleted.extend(&out.open_del);
            self.p_del_view.extend(&out.p_del);
            self.p_ins_view.extend(out.p_ins.iter().cloned());
        }
    }

    fn expand_slice(&mut self, regular: &[BagLabel]) {
        let degrees: Vec<usize> = regular.iter().map(|l| self.graph.out_degree(l.node)).collect();
        let slice = nbr_splitting(&degrees, self.tid, self.cfg.num_workers());
        for (l, nbr) in slice.pairs(&degrees) {
            self.expand_one(&regular[l], nbr);
        }
    }

    fn expand_one(&mut self, l: &BagLabel, nbr: usize) {
        let e = self.graph.out_edges(l.node)[nbr];
        if let Some(c) = extend(self.graph, l.id, &l.g, e) {
            self.buf.candidates += 1;
            self.process_candidate(c);
        }
    }

    fn goal_front_admits(&mut self, f: &[f64]) -> bool {
        let cmp = &mut self.buf.comparisons;
        let p = self.state.goal_front.read();
        for (id, c) in p.iter().chain(self.p_ins_view.iter().map(|(id, c)| (*id, &c[..]))) {
            if self.p_del_view.contains(&id) {
                continue;
            }
            *cmp += 1;
            if dominates(c, f) {
                return false;
            }
        }
        true
    }

    fn process_candidate(&mut self, c: Candidate) {
        let v = c.node;
        if !self.state.fs.visited(v) && !self.visited.contains(&v) {
            if self.goal_front_admits(&c.f) {
                self.admit(c);
            }
            return;
        }
        let pending: Vec<usize> = self
            .pending
            .get(&v)
            .map(|ix| ix.iter().copied().filter(|&i| self.buf.open_ins[i].alive).collect())
            .unwrap_or_default();
        let mut victims = Vec::new();
        let mut cmp = 0u64;
        let rejected = 'check: {
            let entries = self.state.fs.read(v);
            let live: Vec<_> = entries.live().filter(|(id, _, _)| !self.deleted.contains(id)).collect();
            let own = || pending.iter().map(|&i| &self.buf.open_ins[i].cand.g[..]);
            if live.iter().any(|e| e.2 == &c.g[..]) || own().any(|g| g == &c.g[..]) {
                break 'check true;
            }
            for g in live.iter().map(|e| e.2).chain(own()) {
                cmp += 1;
                if dominates(g, &c.g) {
                    break 'check true;
                }
            }
            for &(id, st, g) in &live {
                cmp += 1;
                if dominates(&c.g, g) {
                    victims.push((id, st));
                }
            }
            false
        };
        self.buf.comparisons += cmp;
        if rejected {
            return;
        }
        for (id, st) in victims {
            match st {
                EntryState::Open => self.buf.open_del.push((id, v)),
                EntryState::Closed => self.buf.gcl_del.push((id, v)),
            }
            self.deleted.insert(id);
        }
        for i in pending {
            self.buf.comparisons += 1;
            if dominates(&c.g, &self.buf.open_ins[i].cand.g) {
                self.buf.open_ins[i].alive = false;
            }
        }
        if self.goal_front_admits(&c.f) {
            self.admit(c);
        }
    }

    fn admit(&mut self, c: Candidate) {
        let v = c.node;
        self.pending.entry(v).or_default().push(self.buf.open_ins.len());
        self.visited.insert(v);
        self.buf.open_ins.push(Insert { cand: c, alive: true });
    }

    /// Inter-worker duplicate and dominance reduction: an insert is dropped
    /// when another worker's insert at the same node dominates it, or equals
    /// it and comes from a lower worker id.
    fn reduce_inserts(&mut self) {
        let mine: Vec<(NodeId, Vec<f64>)> = self
            .buf
            .open_ins
            .iter()
            .filter(|ins| ins.alive)
            .map(|ins| (ins.cand.node, ins.cand.g.clone()))
            .collect();
        *self.state.insert_slots[self.tid].lock() = mine;
        self.state.phase.wait();
        for (o, slot) in self.state.insert_slots.iter().enumerate() {
            if o == self.tid {
                continue;
            }
            let theirs = slot.lock();
            for ins in self.buf.open_ins.iter_mut().filter(|ins| ins.alive) {
                for (v, g) in theirs.iter() {
                    if *v != ins.cand.node {
                        continue;
                    }
                    self.buf.comparisons += 1;
                    if dominates(g, &ins.cand.g) || (o < self.tid && *g == ins.cand.g) {
                        ins.alive = false;
                        break;
                    }
                }
            }
        }
    }
}
