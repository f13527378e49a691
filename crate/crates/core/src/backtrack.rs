//! Partition backtrack search.
//!
//! The leftmost branch is refined and branched first and recorded as an
//! R-base: for every level, the sequence of refiner steps with their output
//! shapes and whatever each refiner needed (orbit partitions, stabilizer
//! chains, orbital graphs). Every other branch carries only its own ordered
//! partition and replays those steps, transporting recorded structures with a
//! witness element where needed. A branch dies as soon as its shape differs
//! from the recorded one.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;

use crate::chain::StabilizerChain;
use crate::error::ProblemError;
use crate::group::GeneratedGroup;
use crate::orbital::OrbitalGraph;
use crate::partition::OrderedPartition;
use crate::perm::Permutation;
use crate::refine::{
    equitable, equitable_relabeled, equitable_traced, FixedEntry, RefinerContext, RefinerMode,
    SplitEvent,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Property {
    InGroup(GeneratedGroup),
    StabilizesSet(Vec<usize>),
    StabilizesPartition(OrderedPartition),
}

impl Property {
    fn degree(&self) -> Option<usize> {
        match self {
            Property::InGroup(g) => Some(g.degree()),
            Property::StabilizesPartition(p) => Some(p.degree()),
            Property::StabilizesSet(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Problem {
    degree: usize,
    properties: Vec<Property>,
    mode: RefinerMode,
}

impl Problem {
    pub fn new(
        degree: usize,
        properties: Vec<Property>,
        mode: RefinerMode,
    ) -> Result<Self, ProblemError> {
        if properties.is_empty() {
            return Err(ProblemError::Empty);
        }
        for p in &properties {
            if let Some(d) = p.degree() {
                if d != degree {
                    return Err(ProblemError::DegreeMismatch {
                        expected: degree,
                        found: d,
                    });
                }
            }
            if let Property::StabilizesSet(s) = p {
                if let Some(&x) = s.iter().find(|&&x| x >= degree) {
                    return Err(ProblemError::PointOutOfRange { point: x + 1, degree });
                }
            }
        }
        Ok(Problem {
            degree,
            properties,
            mode,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn properties(&self) -> &[Property] {
        &self.properties
    }

    pub fn mode(&self) -> RefinerMode {
        self.mode
    }

    pub fn with_mode(&self, mode: RefinerMode) -> Problem {
        Problem {
            mode,
            ..self.clone()
        }
    }

    /// Whether `g` satisfies every property.
    pub fn verify(&self, g: &Permutation) -> bool {
        let chains: Vec<StabilizerChain> = self
            .properties
            .iter()
            .filter_map(|p| match p {
                Property::InGroup(h) => Some(h.stabilizer_chain()),
                _ => None,
            })
            .collect();
        verify_with(self, &chains, g)
    }
}

fn verify_with(problem: &Problem, chains: &[StabilizerChain], g: &Permutation) -> bool {
    if g.degree() != problem.degree {
        return false;
    }
    let mut k = 0;
    for p in &problem.properties {
        let ok = match p {
            Property::InGroup(_) => {
                k += 1;
                chains[k - 1].contains(g)
            }
            Property::StabilizesSet(s) => maps_onto(g, s, problem.degree),
            Property::StabilizesPartition(part) => {
                part.cells().iter().all(|c| maps_onto(g, c, problem.degree))
            }
        };
        if !ok {
            return false;
        }
    }
    true
}

fn maps_onto(g: &Permutation, set: &[usize], n: usize) -> bool {
    let mut inside = vec![false; n];
    for &x in set {
        inside[x] = true;
    }
    set.iter().all(|&x| inside[g.image(x)])
}

/// `g` satisfies every property of `problem`.
pub fn verify(problem: &Problem, g: &Permutation) -> bool {
    problem.verify(g)
}

#[derive(Clone, Debug, Default)]
pub struct SearchOptions {
    /// Stop after this many nodes; the result is then marked incomplete.
    pub node_limit: Option<u64>,
    /// Orbital graphs with more arcs are not built.
    pub size_limit: Option<usize>,
    /// Collect a human-readable trace of the leftmost branch.
    pub trace: bool,
    /// Keep every node pruned by shape or witness.
    pub record_prunes: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SearchStats {
    pub nodes_visited: u64,
    pub solutions_found: u64,
    pub prunes_by_shape: u64,
    pub prunes_by_witness: u64,
    pub prunes_by_orbit: u64,
    pub graphs_built: u64,
    pub max_depth: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PruneReason {
    Shape,
    Witness,
}

/// A search node that was cut off. Every solution `g` in its coset would map
/// `left` onto `right` cell by cell.
#[derive(Clone, Debug)]
pub struct PrunedNode {
    pub level: usize,
    pub left: OrderedPartition,
    pub right: OrderedPartition,
    pub reason: PruneReason,
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub generators: Vec<Permutation>,
    pub order: BigUint,
    pub stats: SearchStats,
    /// False when the node limit stopped the search early.
    pub complete: bool,
    pub trace: Vec<String>,
    pub pruned: Vec<PrunedNode>,
    chain: StabilizerChain,
}

impl SearchResult {
    /// Chain of the group generated by the solutions.
    pub fn chain(&self) -> &StabilizerChain {
        &self.chain
    }

    pub fn group(&self) -> GeneratedGroup {
        GeneratedGroup::new(self.chain.degree(), self.generators.clone()).unwrap()
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        self.chain.contains(g)
    }
}

#[derive(Clone, Debug)]
enum StepKind {
    Meet(usize),
    Fixed(Arc<FixedEntry>),
    Orb(Arc<Vec<OrbitalGraph>>),
    DeepOrb(Arc<FixedEntry>, Arc<Vec<OrbitalGraph>>),
    Freeze(usize, Arc<FixedEntry>, Arc<Vec<OrbitalGraph>>),
    Frozen(usize, Arc<Vec<OrbitalGraph>>),
}

impl StepKind {
    fn label(&self) -> &'static str {
        match self {
            StepKind::Meet(_) => "meet",
            StepKind::Fixed(_) => "fixed",
            StepKind::Orb(_) => "orb",
            StepKind::DeepOrb(..) => "deeporb",
            StepKind::Freeze(..) => "firstorb (freeze)",
            StepKind::Frozen(..) => "firstorb",
        }
    }
}

#[derive(Clone, Debug)]
struct Step {
    kind: StepKind,
    shape: Vec<usize>,
}

/// One level of the leftmost branch.
#[derive(Clone, Debug)]
pub struct RBaseLevel {
    /// Partition on entering the level, before refinement.
    pub input: OrderedPartition,
    /// Partition after refinement reached its fixpoint.
    pub refined: OrderedPartition,
    /// Cell index and point branched on; `None` at the discrete leaf.
    pub branch: Option<(usize, usize)>,
    steps: Vec<Step>,
}

impl RBaseLevel {
    pub fn num_steps(&self) -> usize {
        self.steps.len()
    }
}

/// The recorded leftmost branch.
#[derive(Clone, Debug)]
pub struct RBase {
    pub levels: Vec<RBaseLevel>,
}

impl RBase {
    /// Number of branching levels.
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn branch_points(&self) -> Vec<usize> {
        self.levels.iter().filter_map(|l| l.branch.map(|b| b.1)).collect()
    }

    pub fn final_partition(&self) -> &OrderedPartition {
        &self.levels.last().unwrap().refined
    }
}

struct Builder<'a> {
    problem: &'a Problem,
    meets: Vec<Option<OrderedPartition>>,
    group_index: Vec<Option<usize>>,
    contexts: Vec<RefinerContext>,
    trace: Option<Vec<String>>,
}

impl<'a> Builder<'a> {
    fn new(problem: &'a Problem, options: &SearchOptions) -> Self {
        let n = problem.degree;
        let mut meets = Vec::new();
        let mut group_index = Vec::new();
        let mut contexts = Vec::new();
        for p in &problem.properties {
            match p {
                Property::InGroup(g) => {
                    meets.push(None);
                    group_index.push(Some(contexts.len()));
                    contexts.push(RefinerContext::new(g, problem.mode, options.size_limit));
                }
                Property::StabilizesSet(s) => {
                    meets.push(Some(OrderedPartition::from_set(n, s)));
                    group_index.push(None);
                }
                Property::StabilizesPartition(part) => {
                    meets.push(Some(part.clone()));
                    group_index.push(None);
                }
            }
        }
        Builder {
            problem,
            meets,
            group_index,
            contexts,
            trace: options.trace.then(Vec::new),
        }
    }

    fn equitable_left(&mut self, graphs: &[OrbitalGraph], p: &OrderedPartition) -> OrderedPartition {
        match &mut self.trace {
            Some(t) => {
                let (r, events) = equitable_traced(graphs, p);
                t.extend(events.iter().map(SplitEvent::to_string).map(|s| format!("  {s}")));
                r
            }
            None => equitable(graphs, p),
        }
    }

    fn refine_pass(&mut self, p: &mut OrderedPartition, steps: &mut Vec<Step>) {
        let mode = self.problem.mode;
        for i in 0..self.problem.properties.len() {
            let mut push = |kind: StepKind, p: &OrderedPartition, trace: &mut Option<Vec<String>>| {
                if let Some(t) = trace {
                    t.push(format!("  {} -> {}", kind.label(), p));
                }
                steps.push(Step {
                    kind,
                    shape: p.shape(),
                });
            };
            if let Some(m) = &self.meets[i] {
                *p = p.meet(m);
                push(StepKind::Meet(i), p, &mut self.trace);
                continue;
            }
            let k = self.group_index[i].unwrap();
            let entry = self.contexts[k].entry(&p.singletons());
            *p = p.meet(entry.orbit_partition());
            push(StepKind::Fixed(entry), p, &mut self.trace);
            match mode {
                RefinerMode::Fixed => {}
                RefinerMode::PreOrbital => {
                    let graphs = self.contexts[k].static_graphs();
                    if !graphs.is_empty() {
                        *p = self.equitable_left(&graphs, p);
                        push(StepKind::Orb(graphs), p, &mut self.trace);
                    }
                }
                RefinerMode::DeepOrbital => {
                    let entry = self.contexts[k].entry(&p.singletons());
                    let graphs = self.contexts[k].entry_graphs(&entry);
                    if !graphs.is_empty() {
                        *p = self.equitable_left(&graphs, p);
                        push(StepKind::DeepOrb(entry, graphs), p, &mut self.trace);
                    }
                }
                RefinerMode::FirstOrbital => {
                    if let Some(f) = self.contexts[k].frozen().cloned() {
                        let graphs = self.contexts[k].entry_graphs(&f);
                        *p = self.equitable_left(&graphs, p);
                        push(StepKind::Frozen(k, graphs), p, &mut self.trace);
                    } else {
                        let entry = self.contexts[k].entry(&p.singletons());
                        let graphs = self.contexts[k].entry_graphs(&entry);
                        if !graphs.is_empty() {
                            self.contexts[k].freeze(entry.clone());
                            *p = self.equitable_left(&graphs, p);
                            push(StepKind::Freeze(k, entry, graphs), p, &mut self.trace);
                        }
                    }
                }
            }
        }
    }

    fn build(&mut self) -> RBase {
        let n = self.problem.degree;
        let mut p = OrderedPartition::trivial(n);
        let mut levels = Vec::new();
        loop {
            let input = p.clone();
            let mut steps = Vec::new();
            if let Some(t) = &mut self.trace {
                t.push(format!("level {}: {}", levels.len(), p));
            }
            loop {
                let before = p.num_cells();
                self.refine_pass(&mut p, &mut steps);
                if p.num_cells() == before {
                    break;
                }
            }
            if p.is_discrete() {
                levels.push(RBaseLevel {
                    input,
                    refined: p,
                    branch: None,
                    steps,
                });
                break;
            }
            let l = choose_cell(&p);
            let a = p.cell(l)[0];
            if let Some(t) = &mut self.trace {
                t.push(format!("  branch on cell {} at point {}", l + 1, a + 1));
            }
            let next = p.split_cell(l, a).expect("cell has at least two points");
            levels.push(RBaseLevel {
                input,
                refined: p,
                branch: Some((l, a)),
                steps,
            });
            p = next;
        }
        RBase { levels }
    }
}

/// Smallest cell with at least two points, lowest index on ties.
fn choose_cell(p: &OrderedPartition) -> usize {
    (0..p.num_cells())
        .filter(|&k| p.cell(k).len() >= 2)
        .min_by_key(|&k| (p.cell(k).len(), k))
        .expect("partition is not discrete")
}

/// Records the leftmost branch of the search for `problem`.
pub fn build_rbase(problem: &Problem) -> RBase {
    Builder::new(problem, &SearchOptions::default()).build()
}

#[derive(Clone, Debug)]
struct PathState {
    frozen: Vec<Option<Permutation>>,
}

enum Outcome {
    Done(bool),
    Abort,
}

struct Searcher<'a> {
    problem: &'a Problem,
    rbase: RBase,
    meets: Vec<Option<OrderedPartition>>,
    chains: Vec<StabilizerChain>,
    result: StabilizerChain,
    generators: Vec<Permutation>,
    stats: SearchStats,
    node_limit: Option<u64>,
    record_prunes: bool,
    pruned: Vec<PrunedNode>,
}

impl Searcher<'_> {
    fn prune(&mut self, level: usize, q: &OrderedPartition, reason: PruneReason) {
        match reason {
            PruneReason::Shape => self.stats.prunes_by_shape += 1,
            PruneReason::Witness => self.stats.prunes_by_witness += 1,
        }
        if self.record_prunes {
            self.pruned.push(PrunedNode {
                level,
                left: self.rbase.levels[level].input.clone(),
                right: q.clone(),
                reason,
            });
        }
    }

    fn replay(
        &self,
        level: usize,
        q: &OrderedPartition,
        state: &mut PathState,
    ) -> Result<OrderedPartition, PruneReason> {
        let mut q = q.clone();
        for step in &self.rbase.levels[level].steps {
            q = match &step.kind {
                StepKind::Meet(i) => q.meet(self.meets[*i].as_ref().unwrap()),
                StepKind::Fixed(e) => {
                    let w = e.witness(&q).ok_or(PruneReason::Witness)?;
                    q.meet(&e.orbit_partition().apply(&w))
                }
                StepKind::Orb(graphs) => equitable(graphs, &q),
                StepKind::DeepOrb(e, graphs) => {
                    let w = e.witness(&q).ok_or(PruneReason::Witness)?;
                    equitable_relabeled(graphs, &w, &q)
                }
                StepKind::Freeze(k, e, graphs) => {
                    let w = e.witness(&q).ok_or(PruneReason::Witness)?;
                    let r = equitable_relabeled(graphs, &w, &q);
                    state.frozen[*k] = Some(w);
                    r
                }
                StepKind::Frozen(k, graphs) => {
                    let w = state.frozen[*k].as_ref().expect("freeze step replayed first");
                    equitable_relabeled(graphs, w, &q)
                }
            };
            if q.shape() != step.shape {
                return Err(PruneReason::Shape);
            }
        }
        Ok(q)
    }

    fn node(
        &mut self,
        level: usize,
        q: OrderedPartition,
        mut state: PathState,
        identity_path: bool,
    ) -> Outcome {
        self.stats.nodes_visited += 1;
        self.stats.max_depth = self.stats.max_depth.max(level);
        if let Some(limit) = self.node_limit {
            if self.stats.nodes_visited > limit {
                return Outcome::Abort;
            }
        }
        let q = if identity_path {
            for step in &self.rbase.levels[level].steps {
                if let StepKind::Freeze(k, ..) = step.kind {
                    state.frozen[k] = Some(Permutation::identity(self.problem.degree));
                }
            }
            self.rbase.levels[level].refined.clone()
        } else {
            match self.replay(level, &q, &mut state) {
                Ok(r) => r,
                Err(reason) => {
                    self.prune(level, &q, reason);
                    return Outcome::Done(false);
                }
            }
        };
        let Some((l, a)) = self.rbase.levels[level].branch else {
            return Outcome::Done(self.leaf(&q));
        };
        let mut values = q.cell(l).to_vec();
        if let Some(pos) = values.iter().position(|&b| b == a) {
            values.remove(pos);
            values.insert(0, a);
        }
        let prefix_len = level;
        let mut explored: Vec<usize> = Vec::new();
        for b in values {
            if identity_path && !explored.is_empty() {
                let gens = self.result.level_generators(prefix_len);
                if !gens.is_empty() && in_orbit_of_any(self.problem.degree, gens, &explored, b) {
                    self.stats.prunes_by_orbit += 1;
                    continue;
                }
            }
            let child = q.split_cell(l, b).expect("branch cell has at least two points");
            match self.node(level + 1, child, state.clone(), identity_path && b == a) {
                Outcome::Abort => return Outcome::Abort,
                Outcome::Done(found) => {
                    if found && !identity_path {
                        return Outcome::Done(true);
                    }
                }
            }
            explored.push(b);
        }
        Outcome::Done(false)
    }

    fn leaf(&mut self, q: &OrderedPartition) -> bool {
        let p = self.rbase.final_partition();
        let mut images = vec![0; self.problem.degree];
        for (pc, qc) in p.cells().iter().zip(q.cells()) {
            images[pc[0]] = qc[0];
        }
        let g = Permutation::from_images(images).expect("discrete partitions give a bijection");
        if !verify_with(self.problem, &self.chains, &g) {
            return false;
        }
        self.stats.solutions_found += 1;
        if self.result.extend(&g) {
            self.generators.push(g);
        }
        true
    }
}

fn in_orbit_of_any(n: usize, gens: &[Permutation], starts: &[usize], x: usize) -> bool {
    let mut seen = vec![false; n];
    let mut queue: Vec<usize> = Vec::new();
    for &s in starts {
        if !seen[s] {
            seen[s] = true;
            queue.push(s);
        }
    }
    let mut i = 0;
    while i < queue.len() {
        let y = queue[i];
        if y == x {
            return true;
        }
        for g in gens {
            let z = g.image(y);
            if !seen[z] {
                seen[z] = true;
                queue.push(z);
            }
        }
        i += 1;
    }
    false
}

pub fn solve(problem: &Problem) -> SearchResult {
    solve_with(problem, &SearchOptions::default())
}

pub fn solve_with(problem: &Problem, options: &SearchOptions) -> SearchResult {
    let n = problem.degree;
    let mut builder = Builder::new(problem, options);
    let rbase = builder.build();
    let trace = builder.trace.take().unwrap_or_default();
    let chains: Vec<StabilizerChain> = builder.contexts.iter().map(|c| c.chain().clone()).collect();
    let branch_points = rbase.branch_points();
    let mut searcher = Searcher {
        problem,
        rbase,
        meets: builder.meets.clone(),
        chains,
        result: StabilizerChain::with_base(n, &branch_points),
        generators: Vec::new(),
        stats: SearchStats::default(),
        node_limit: options.node_limit,
        record_prunes: options.record_prunes,
        pruned: Vec::new(),
    };
    let state = PathState {
        frozen: vec![None; builder.contexts.len()],
    };
    let root = searcher.rbase.levels[0].input.clone();
    let complete = !matches!(searcher.node(0, root, state, true), Outcome::Abort);
    // graphs built lazily on the right side are counted too
    searcher.stats.graphs_built = builder.contexts.iter().map(|c| c.graphs_built() as u64).sum();
    SearchResult {
        order: searcher.result.order(),
        generators: searcher.generators,
        stats: searcher.stats,
        complete,
        trace,
        pruned: searcher.pruned,
        chain: searcher.result,
    }
}

pub fn set_stabilizer(group: &GeneratedGroup, set: &[usize], mode: RefinerMode) -> SearchResult {
    let problem = Problem::new(
        group.degree(),
        vec![Property::InGroup(group.clone()), Property::StabilizesSet(set.to_vec())],
        mode,
    )
    .expect("set within the group's domain");
    solve(&problem)
}

pub fn partition_stabilizer(
    group: &GeneratedGroup,
    partition: &OrderedPartition,
    mode: RefinerMode,
) -> SearchResult {
    let problem = Problem::new(
        group.degree(),
        vec![
            Property::InGroup(group.clone()),
            Property::StabilizesPartition(partition.clone()),
        ],
        mode,
    )
    .expect("partition of the group's domain");
    solve(&problem)
}

pub fn intersection(a: &GeneratedGroup, b: &GeneratedGroup, mode: RefinerMode) -> SearchResult {
    let problem = Problem::new(
        a.degree(),
        vec![Property::InGroup(a.clone()), Property::InGroup(b.clone())],
        mode,
    )
    .expect("groups of equal degree");
    solve(&problem)
}

impl fmt::Display for SearchStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "nodes_visited={} solutions_found={} graphs_built={} prunes_by_shape={} prunes_by_witness={} prunes_by_orbit={} max_depth={}",
            self.nodes_visited,
            self.solutions_found,
            self.graphs_built,
            self.prunes_by_shape,
            self.prunes_by_witness,
            self.prunes_by_orbit,
            self.max_depth
        )
    }
}
