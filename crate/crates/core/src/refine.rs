//! Equitable refinement against orbital graphs, and the refiners built on it.
//!
//! A cell `D` is split against a cell `E` when its points have different
//! numbers of neighbours in `E`, counting arcs in both directions. Fragments
//! replace the split cell in place, ordered by ascending count, and every
//! fragment is queued as a new splitting cell.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::chain::StabilizerChain;
use crate::group::GeneratedGroup;
use crate::orbital::{orbital_base_from_chain, OrbitalGraph};
use crate::partition::OrderedPartition;
use crate::perm::Permutation;

/// One split performed during equitable refinement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitEvent {
    /// 1-based position of the graph in the input list.
    pub graph: usize,
    pub cell: Vec<usize>,
    pub fragments: Vec<Vec<usize>>,
}

impl fmt::Display for SplitEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |c: &[usize]| {
            c.iter()
                .map(|x| (x + 1).to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        let frags: Vec<String> = self.fragments.iter().map(|c| format!("[{}]", show(c))).collect();
        write!(f, "cell [{}] -> {} by graph #{}", show(&self.cell), frags.join("|"), self.graph)
    }
}

/// Coarsest partition finer than `p` that is equitable for every graph.
pub fn equitable(graphs: &[OrbitalGraph], p: &OrderedPartition) -> OrderedPartition {
    equitable_inner(graphs, None, p, None)
}

/// [`equitable`] that also reports every split.
pub fn equitable_traced(
    graphs: &[OrbitalGraph],
    p: &OrderedPartition,
) -> (OrderedPartition, Vec<SplitEvent>) {
    let mut trace = Vec::new();
    let out = equitable_inner(graphs, None, p, Some(&mut trace));
    (out, trace)
}

/// [`equitable`] against the images of `graphs` under `relabel`.
pub fn equitable_relabeled(
    graphs: &[OrbitalGraph],
    relabel: &Permutation,
    p: &OrderedPartition,
) -> OrderedPartition {
    if relabel.is_identity() {
        return equitable(graphs, p);
    }
    let inv = relabel.inverse();
    equitable_inner(graphs, Some((relabel, &inv)), p, None)
}

fn equitable_inner(
    graphs: &[OrbitalGraph],
    relabel: Option<(&Permutation, &Permutation)>,
    p: &OrderedPartition,
    mut trace: Option<&mut Vec<SplitEvent>>,
) -> OrderedPartition {
    if graphs.is_empty() || p.is_discrete() {
        return p.clone();
    }
    let mut current = p.clone();
    loop {
        let mut next: Option<OrderedPartition> = None;
        for (k, g) in graphs.iter().enumerate() {
            let e = equalize(g.neighbour_lists(), relabel, &current, k + 1, trace.as_deref_mut());
            next = Some(match next {
                None => e,
                Some(acc) => acc.meet(&e),
            });
        }
        let next = next.unwrap();
        if next.num_cells() == current.num_cells() || graphs.len() == 1 {
            return next;
        }
        current = next;
    }
}

fn equalize(
    nbrs: &[Vec<usize>],
    relabel: Option<(&Permutation, &Permutation)>,
    p: &OrderedPartition,
    graph_no: usize,
    mut trace: Option<&mut Vec<SplitEvent>>,
) -> OrderedPartition {
    let n = p.degree();
    let mut cells: Vec<Vec<usize>> = p.cells().to_vec();
    let mut cell_of: Vec<usize> = (0..n).map(|x| p.cell_of(x)).collect();
    let mut queue: VecDeque<Vec<usize>> = cells.iter().cloned().collect();
    let mut count = vec![0usize; n];
    let mut touched: Vec<usize> = Vec::new();
    while let Some(delta) = queue.pop_front() {
        if cells.len() == n {
            break;
        }
        for &y in &delta {
            let y0 = relabel.map_or(y, |(_, inv)| inv.image(y));
            for &x0 in &nbrs[y0] {
                let x = relabel.map_or(x0, |(w, _)| w.image(x0));
                if count[x] == 0 {
                    touched.push(x);
                }
                count[x] += 1;
            }
        }
        let mut affected: Vec<usize> = touched.iter().map(|&x| cell_of[x]).collect();
        affected.sort_unstable();
        affected.dedup();
        let mut splits: Vec<(usize, Vec<Vec<usize>>)> = Vec::new();
        for &c in &affected {
            let cell = &cells[c];
            let first = count[cell[0]];
            if cell.len() == 1 || cell.iter().all(|&x| count[x] == first) {
                continue;
            }
            let mut keyed: Vec<(usize, usize)> = cell.iter().map(|&x| (count[x], x)).collect();
            keyed.sort_unstable();
            let mut frags: Vec<Vec<usize>> = vec![vec![keyed[0].1]];
            for w in keyed.windows(2) {
                if w[1].0 != w[0].0 {
                    frags.push(Vec::new());
                }
                frags.last_mut().unwrap().push(w[1].1);
            }
            splits.push((c, frags));
        }
        for &x in &touched {
            count[x] = 0;
        }
        touched.clear();
        if splits.is_empty() {
            continue;
        }
        for (c, frags) in splits.iter().rev() {
            cells.splice(*c..*c + 1, frags.iter().cloned());
        }
        for (k, c) in cells.iter().enumerate() {
            for &x in c {
                cell_of[x] = k;
            }
        }
        for (c, frags) in splits {
            if let Some(t) = trace.as_deref_mut() {
                t.push(SplitEvent {
                    graph: graph_no,
                    cell: p_cell_before(&frags),
                    fragments: frags.clone(),
                });
            }
            let _ = c;
            queue.extend(frags);
        }
    }
    OrderedPartition::from_sorted_cells(n, cells)
}

fn p_cell_before(frags: &[Vec<usize>]) -> Vec<usize> {
    let mut v: Vec<usize> = frags.iter().flatten().copied().collect();
    v.sort_unstable();
    v
}

/// Which refiners run for an `InGroup` property.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RefinerMode {
    /// Orbits of the pointwise stabilizer of the fixed points only.
    Fixed,
    /// Also the orbital graphs of the whole group, built once.
    PreOrbital,
    /// Also the orbital graphs of the pointwise stabilizer at every node.
    DeepOrbital,
    /// Stabilizer graphs until the first node where some exist, then those.
    FirstOrbital,
}

impl RefinerMode {
    pub const ALL: [RefinerMode; 4] = [
        RefinerMode::Fixed,
        RefinerMode::PreOrbital,
        RefinerMode::DeepOrbital,
        RefinerMode::FirstOrbital,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RefinerMode::Fixed => "fixed",
            RefinerMode::PreOrbital => "preorbital",
            RefinerMode::DeepOrbital => "deeporbital",
            RefinerMode::FirstOrbital => "firstorbital",
        }
    }
}

impl fmt::Display for RefinerMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for RefinerMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let key: String = s
            .chars()
            .filter(|c| !matches!(c, '-' | '_'))
            .collect::<String>()
            .to_ascii_lowercase();
        match key.as_str() {
            "fixed" => Ok(RefinerMode::Fixed),
            "preorbital" | "orb" => Ok(RefinerMode::PreOrbital),
            "deeporbital" | "deeporb" => Ok(RefinerMode::DeepOrbital),
            "firstorbital" => Ok(RefinerMode::FirstOrbital),
            _ => Err(format!("unknown mode `{s}`")),
        }
    }
}

/// Data recorded for one fixed-point sequence on the leftmost branch.
#[derive(Debug)]
pub struct FixedEntry {
    points: Vec<usize>,
    chain: StabilizerChain,
    stabilizer: StabilizerChain,
    orbits: OrderedPartition,
    graphs: OnceLock<Arc<Vec<OrbitalGraph>>>,
}

impl FixedEntry {
    fn new(group_chain: &StabilizerChain, points: &[usize]) -> Self {
        let chain = match group_chain.prefix_level(points) {
            Some(_) => group_chain.clone(),
            None => group_chain.rebase(points),
        };
        let level = chain.prefix_level(points).expect("chain based at the fixed points");
        let stabilizer = chain.tail(level);
        let n = chain.degree();
        let orbits = OrderedPartition::from_sorted_cells(
            n,
            crate::group::orbits_of(n, stabilizer.strong_generators()),
        );
        FixedEntry {
            points: points.to_vec(),
            chain,
            stabilizer,
            orbits,
            graphs: OnceLock::new(),
        }
    }

    pub fn points(&self) -> &[usize] {
        &self.points
    }

    /// Chain of the whole group whose base starts with the fixed points.
    pub fn chain(&self) -> &StabilizerChain {
        &self.chain
    }

    /// Chain of the pointwise stabilizer of the fixed points.
    pub fn stabilizer(&self) -> &StabilizerChain {
        &self.stabilizer
    }

    /// Orbits of the pointwise stabilizer, ordered by minimum point.
    pub fn orbit_partition(&self) -> &OrderedPartition {
        &self.orbits
    }

    /// Orbital base of the pointwise stabilizer, built on first use.
    /// The flag reports whether this call built it.
    pub fn graphs(&self, size_limit: Option<usize>) -> (Arc<Vec<OrbitalGraph>>, bool) {
        let mut built = false;
        let g = self.graphs.get_or_init(|| {
            built = true;
            Arc::new(orbital_base_from_chain(&self.stabilizer, size_limit))
        });
        (g.clone(), built)
    }

    /// An element of the group mapping the recorded fixed points onto the
    /// singletons of `q`, in cell order.
    pub fn witness(&self, q: &OrderedPartition) -> Option<Permutation> {
        let target = q.singletons();
        if target.len() != self.points.len() {
            return None;
        }
        self.chain.element_mapping_tuple(&self.points, &target)
    }
}

/// Which side of the search a refiner call belongs to.
#[derive(Clone, Copy, Debug)]
pub enum Side<'a> {
    /// Leftmost branch: records structures keyed by the fixed points.
    Left,
    /// Any other branch: reuses what was recorded for `recorded`, transported
    /// by `witness`. With FirstOrbital after the freeze point, `witness` must
    /// map the freeze points instead.
    Right {
        recorded: &'a [usize],
        witness: Option<&'a Permutation>,
    },
}

/// Per-group refiner state for one search.
#[derive(Debug)]
pub struct RefinerContext {
    mode: RefinerMode,
    chain: StabilizerChain,
    size_limit: Option<usize>,
    static_graphs: Option<Arc<Vec<OrbitalGraph>>>,
    cache: HashMap<Vec<usize>, Arc<FixedEntry>>,
    frozen: Option<Arc<FixedEntry>>,
    graphs_built: usize,
}

impl RefinerContext {
    pub fn new(group: &GeneratedGroup, mode: RefinerMode, size_limit: Option<usize>) -> Self {
        RefinerContext::from_chain(group.stabilizer_chain(), mode, size_limit)
    }

    pub fn from_chain(chain: StabilizerChain, mode: RefinerMode, size_limit: Option<usize>) -> Self {
        RefinerContext {
            mode,
            chain,
            size_limit,
            static_graphs: None,
            cache: HashMap::new(),
            frozen: None,
            graphs_built: 0,
        }
    }

    pub fn mode(&self) -> RefinerMode {
        self.mode
    }

    pub fn chain(&self) -> &StabilizerChain {
        &self.chain
    }

    pub fn size_limit(&self) -> Option<usize> {
        self.size_limit
    }

    pub fn graphs_built(&self) -> usize {
        self.graphs_built
    }

    /// Orbital base of the whole group, built on first use.
    pub fn static_graphs(&mut self) -> Arc<Vec<OrbitalGraph>> {
        if self.static_graphs.is_none() {
            let g = Arc::new(orbital_base_from_chain(&self.chain, self.size_limit));
            self.graphs_built += g.len();
            self.static_graphs = Some(g);
        }
        self.static_graphs.clone().unwrap()
    }

    /// Entry for `points`, created if missing.
    pub fn entry(&mut self, points: &[usize]) -> Arc<FixedEntry> {
        if let Some(e) = self.cache.get(points) {
            return e.clone();
        }
        let e = Arc::new(FixedEntry::new(&self.chain, points));
        self.cache.insert(points.to_vec(), e.clone());
        e
    }

    pub fn lookup(&self, points: &[usize]) -> Option<Arc<FixedEntry>> {
        self.cache.get(points).cloned()
    }

    /// Stabilizer graphs of `entry`, counting them as built the first time.
    pub fn entry_graphs(&mut self, entry: &FixedEntry) -> Arc<Vec<OrbitalGraph>> {
        let (g, built) = entry.graphs(self.size_limit);
        if built {
            self.graphs_built += g.len();
        }
        g
    }

    pub fn frozen(&self) -> Option<&Arc<FixedEntry>> {
        self.frozen.as_ref()
    }

    pub(crate) fn freeze(&mut self, entry: Arc<FixedEntry>) {
        self.frozen = Some(entry);
    }
}

/// Meet with the ordered orbit partition of the pointwise stabilizer of the
/// singletons of `p`. `None` prunes: no group element maps the recorded
/// fixed points onto those of `p`.
pub fn refine_fixed(
    ctx: &mut RefinerContext,
    p: &OrderedPartition,
    side: Side<'_>,
) -> Option<OrderedPartition> {
    match side {
        Side::Left => {
            let e = ctx.entry(&p.singletons());
            Some(p.meet(e.orbit_partition()))
        }
        Side::Right { recorded, witness } => {
            let e = ctx.lookup(recorded).expect("no entry recorded for these points");
            let w = witness?;
            Some(p.meet(&e.orbit_partition().apply(w)))
        }
    }
}

/// Equitable refinement against the orbital base of the whole group.
pub fn refine_orb(ctx: &mut RefinerContext, p: &OrderedPartition) -> OrderedPartition {
    let graphs = ctx.static_graphs();
    equitable(&graphs, p)
}

/// Equitable refinement against the orbital base of the pointwise
/// stabilizer of the singletons of `p`.
pub fn refine_deeporb(
    ctx: &mut RefinerContext,
    p: &OrderedPartition,
    side: Side<'_>,
) -> Option<OrderedPartition> {
    match side {
        Side::Left => {
            let e = ctx.entry(&p.singletons());
            let graphs = ctx.entry_graphs(&e);
            Some(equitable(&graphs, p))
        }
        Side::Right { recorded, witness } => {
            let e = ctx.lookup(recorded).expect("no entry recorded for these points");
            let w = witness?;
            let graphs = ctx.entry_graphs(&e);
            Some(equitable_relabeled(&graphs, w, p))
        }
    }
}

/// DeepOrb until the first call that finds a non-empty orbital base, then
/// that graph set for good.
pub fn refine_firstorbital(
    ctx: &mut RefinerContext,
    p: &OrderedPartition,
    side: Side<'_>,
) -> Option<OrderedPartition> {
    if let Some(f) = ctx.frozen().cloned() {
        let graphs = ctx.entry_graphs(&f);
        return match side {
            Side::Left => Some(equitable(&graphs, p)),
            Side::Right { witness, .. } => Some(equitable_relabeled(&graphs, witness?, p)),
        };
    }
    match side {
        Side::Left => {
            let e = ctx.entry(&p.singletons());
            let graphs = ctx.entry_graphs(&e);
            if !graphs.is_empty() {
                ctx.freeze(e);
            }
            Some(equitable(&graphs, p))
        }
        Side::Right { .. } => refine_deeporb(ctx, p, side),
    }
}
