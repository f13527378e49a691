//! Orbital graphs: the orbit of a base pair `(a, b)` under a group, viewed as
//! a digraph on the whole domain.
//!
//! Most orbital graphs carry no information beyond the orbits of the group
//! (they are "futile": the symmetric group on every orbit acts on them by
//! automorphisms). Those are recognised from orbit lengths alone and never
//! built; [`orbital_base`] returns one graph per remaining pair class.

use std::fmt::Write as _;

use crate::chain::StabilizerChain;
use crate::error::GroupError;
use crate::group::{orbit_labels, orbits_of, GeneratedGroup};
use crate::perm::Permutation;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitalGraph {
    degree: usize,
    base_pair: (usize, usize),
    arcs: Vec<(usize, usize)>,
    out_adj: Vec<Vec<usize>>,
    in_adj: Vec<Vec<usize>>,
    neighbours: Vec<Vec<usize>>,
}

impl OrbitalGraph {
    /// Orbit of `(alpha, beta)` under the group generated by `generators`.
    pub fn from_generators(
        degree: usize,
        generators: &[Permutation],
        alpha: usize,
        beta: usize,
    ) -> Result<Self, GroupError> {
        if alpha == beta {
            return Err(GroupError::LoopPair(alpha + 1));
        }
        let mut seen = vec![false; degree * degree];
        seen[alpha * degree + beta] = true;
        let mut arcs = vec![(alpha, beta)];
        let mut i = 0;
        while i < arcs.len() {
            let (x, y) = arcs[i];
            for g in generators {
                let (u, v) = (g.image(x), g.image(y));
                if !seen[u * degree + v] {
                    seen[u * degree + v] = true;
                    arcs.push((u, v));
                }
            }
            i += 1;
        }
        arcs.sort_unstable();
        Ok(OrbitalGraph::from_arcs(degree, (alpha, beta), arcs))
    }

    fn from_arcs(degree: usize, base_pair: (usize, usize), arcs: Vec<(usize, usize)>) -> Self {
        let mut out_adj = vec![Vec::new(); degree];
        let mut in_adj = vec![Vec::new(); degree];
        for &(x, y) in &arcs {
            out_adj[x].push(y);
            in_adj[y].push(x);
        }
        let neighbours = (0..degree)
            .map(|x| {
                let mut v: Vec<usize> = out_adj[x].iter().chain(&in_adj[x]).copied().collect();
                v.sort_unstable();
                v.dedup();
                v
            })
            .collect();
        for v in in_adj.iter_mut() {
            v.sort_unstable();
        }
        OrbitalGraph {
            degree,
            base_pair,
            arcs,
            out_adj,
            in_adj,
            neighbours,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base_pair(&self) -> (usize, usize) {
        self.base_pair
    }

    /// Arcs in lexicographic order.
    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    pub fn num_arcs(&self) -> usize {
        self.arcs.len()
    }

    pub fn has_arc(&self, x: usize, y: usize) -> bool {
        self.arcs.binary_search(&(x, y)).is_ok()
    }

    pub fn out_neighbours(&self, x: usize) -> &[usize] {
        &self.out_adj[x]
    }

    pub fn in_neighbours(&self, x: usize) -> &[usize] {
        &self.in_adj[x]
    }

    /// Points joined to `x` by an arc in either direction.
    pub fn neighbours(&self, x: usize) -> &[usize] {
        &self.neighbours[x]
    }

    pub(crate) fn neighbour_lists(&self) -> &[Vec<usize>] {
        &self.neighbours
    }

    /// Image of the graph under `g`.
    pub fn relabel(&self, g: &Permutation) -> OrbitalGraph {
        let mut arcs: Vec<(usize, usize)> = self
            .arcs
            .iter()
            .map(|&(x, y)| (g.image(x), g.image(y)))
            .collect();
        arcs.sort_unstable();
        let (a, b) = self.base_pair;
        OrbitalGraph::from_arcs(self.degree, (g.image(a), g.image(b)), arcs)
    }

    pub fn is_automorphism(&self, g: &Permutation) -> bool {
        self.arcs
            .iter()
            .all(|&(x, y)| self.has_arc(g.image(x), g.image(y)))
    }

    pub fn is_self_paired(&self) -> bool {
        self.arcs.iter().all(|&(x, y)| self.has_arc(y, x))
    }

    /// Vertex sets of the weakly connected components, isolated vertices included.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut parent: Vec<usize> = (0..self.degree).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for &(x, y) in &self.arcs {
            let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
            if rx != ry {
                parent[rx.max(ry)] = rx.min(ry);
            }
        }
        let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for x in 0..self.degree {
            let r = find(&mut parent, x);
            groups.entry(r).or_default().push(x);
        }
        groups.into_values().collect()
    }

    /// Structural futility test: a unique component on two or more vertices,
    /// which is a complete digraph or a complete bipartite digraph with
    /// disjoint source and target sets.
    pub fn has_futile_shape(&self) -> bool {
        let big: Vec<Vec<usize>> = self.components().into_iter().filter(|c| c.len() >= 2).collect();
        if big.len() != 1 {
            return false;
        }
        let comp = &big[0];
        let k = comp.len();
        if self.arcs.len() == k * (k - 1) {
            // all arcs lie inside the component, no loops and no duplicates
            return true;
        }
        let mut is_source = vec![false; self.degree];
        let mut is_target = vec![false; self.degree];
        for &(x, y) in &self.arcs {
            is_source[x] = true;
            is_target[y] = true;
        }
        let s = comp.iter().filter(|&&x| is_source[x]).count();
        let e = comp.iter().filter(|&&x| is_target[x]).count();
        let disjoint = comp.iter().all(|&x| !(is_source[x] && is_target[x]));
        disjoint && self.arcs.len() == s * e
    }

    /// One arc `u -> v` per line, 1-based, sorted.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for &(x, y) in &self.arcs {
            let _ = writeln!(s, "{} -> {}", x + 1, y + 1);
        }
        s
    }
}

/// The orbital graph of the chain's group with base pair `(alpha, beta)`.
pub fn orbital_graph(
    chain: &StabilizerChain,
    alpha: usize,
    beta: usize,
) -> Result<OrbitalGraph, GroupError> {
    OrbitalGraph::from_generators(chain.degree(), chain.strong_generators(), alpha, beta)
}

/// Futility from orbit lengths: with `H` the group, the graph is futile iff
/// `b` lies in the orbit of `a` and `|b^(H_a)| = |a^H| - 1`, or `b` lies in a
/// different orbit and `|b^(H_a)| = |b^H|`.
pub fn is_futile_by_counts(chain: &StabilizerChain, alpha: usize, beta: usize) -> bool {
    assert_ne!(alpha, beta, "base pair points must be distinct");
    let n = chain.degree();
    let gens = chain.strong_generators();
    let alpha_orbit = crate::group::orbit_of(n, gens, alpha);
    let beta_orbit = crate::group::orbit_of(n, gens, beta);
    let stab = chain.point_stabilizer(&[alpha]);
    let inner = stab.orbit(beta).len();
    if alpha_orbit.binary_search(&beta).is_ok() {
        inner + 1 == alpha_orbit.len()
    } else {
        inner == beta_orbit.len()
    }
}

/// Futility straight from the definition: every transposition of two points
/// in a common orbit of `group` is an automorphism of `graph`.
pub fn is_futile_by_definition(group: &GeneratedGroup, graph: &OrbitalGraph) -> bool {
    let n = group.degree();
    for orbit in group.orbits() {
        for (i, &x) in orbit.iter().enumerate() {
            for &y in &orbit[i + 1..] {
                let t = Permutation::from_cycles(n, &[vec![x, y]]).unwrap();
                if !graph.is_automorphism(&t) {
                    return false;
                }
            }
        }
    }
    true
}

/// Representative base pairs `(min of orbit, min of inner orbit)`, one per
/// orbital graph class, together with whether each class is futile and its
/// arc count.
pub fn pair_classes(chain: &StabilizerChain) -> Vec<PairClass> {
    let n = chain.degree();
    let gens = chain.strong_generators();
    let labels = orbit_labels(n, gens);
    let orbits = orbits_of(n, gens);
    let mut out = Vec::new();
    for orb in &orbits {
        let alpha = orb[0];
        let stab = chain.point_stabilizer(&[alpha]);
        for inner in stab.orbits() {
            let beta = inner[0];
            if beta == alpha {
                continue;
            }
            let beta_orbit_len = orbits[labels[beta]].len();
            let futile = if labels[beta] == labels[alpha] {
                inner.len() + 1 == orb.len()
            } else {
                inner.len() == beta_orbit_len
            };
            out.push(PairClass {
                base_pair: (alpha, beta),
                arcs: orb.len() * inner.len(),
                futile,
            });
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairClass {
    pub base_pair: (usize, usize),
    pub arcs: usize,
    pub futile: bool,
}

/// Non-futile orbital graphs of `group` with at most `size_limit` arcs.
pub fn orbital_base(group: &GeneratedGroup, size_limit: Option<usize>) -> Vec<OrbitalGraph> {
    orbital_base_from_chain(&group.stabilizer_chain(), size_limit)
}

pub fn orbital_base_from_chain(
    chain: &StabilizerChain,
    size_limit: Option<usize>,
) -> Vec<OrbitalGraph> {
    let n = chain.degree();
    let gens = chain.strong_generators();
    if n < 2 || gens.is_empty() {
        return Vec::new();
    }
    if crate::group::orbit_of(n, gens, 0).len() == n {
        let stab = chain.point_stabilizer(&[0]);
        if n == 1 || stab.orbit(1.min(n - 1)).len() == n - 1 {
            return Vec::new();
        }
    }
    let limit = size_limit.unwrap_or(usize::MAX);
    let pairs: Vec<(usize, usize)> = pair_classes(chain)
        .into_iter()
        .filter(|c| !c.futile && c.arcs <= limit)
        .map(|c| c.base_pair)
        .collect();
    build_graphs(n, gens, &pairs)
}

#[cfg(feature = "parallel")]
fn build_graphs(n: usize, gens: &[Permutation], pairs: &[(usize, usize)]) -> Vec<OrbitalGraph> {
    use rayon::prelude::*;
    pairs
        .par_iter()
        .map(|&(a, b)| OrbitalGraph::from_generators(n, gens, a, b).unwrap())
        .collect()
}

#[cfg(not(feature = "parallel"))]
fn build_graphs(n: usize, gens: &[Permutation], pairs: &[(usize, usize)]) -> Vec<OrbitalGraph> {
    pairs
        .iter()
        .map(|&(a, b)| OrbitalGraph::from_generators(n, gens, a, b).unwrap())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex43() -> GeneratedGroup {
        GeneratedGroup::from_cycle_strings(6, &["(1,2,3)", "(4,5)", "(4,6)"]).unwrap()
    }

    fn graph(g: &GeneratedGroup, a: usize, b: usize) -> OrbitalGraph {
        orbital_graph(&g.stabilizer_chain(), a - 1, b - 1).unwrap()
    }

    #[test]
    fn example_graphs() {
        let h = ex43();
        let g12 = graph(&h, 1, 2);
        assert_eq!(g12.dump(), "1 -> 2\n2 -> 3\n3 -> 1\n");
        let g56 = graph(&h, 5, 6);
        assert_eq!(g56.num_arcs(), 6);
        assert_eq!(
            g56.dump(),
            "4 -> 5\n4 -> 6\n5 -> 4\n5 -> 6\n6 -> 4\n6 -> 5\n"
        );
        let g24 = graph(&h, 2, 4);
        assert_eq!(g24.num_arcs(), 9);
        for x in 0..3 {
            for y in 3..6 {
                assert!(g24.has_arc(x, y));
            }
        }
    }

    #[test]
    fn loop_pair_rejected() {
        let c = ex43().stabilizer_chain();
        assert!(matches!(orbital_graph(&c, 2, 2), Err(GroupError::LoopPair(3))));
    }

    #[test]
    fn futility_examples() {
        let s3 = GeneratedGroup::symmetric(3).stabilizer_chain();
        for a in 0..3 {
            for b in 0..3 {
                if a != b {
                    assert!(is_futile_by_counts(&s3, a, b));
                }
            }
        }
        let h = ex43();
        let c = h.stabilizer_chain();
        assert!(!is_futile_by_counts(&c, 0, 1));
        assert!(is_futile_by_counts(&c, 4, 5));
        assert!(is_futile_by_counts(&c, 1, 3));
        assert!(!is_futile_by_definition(&h, &graph(&h, 1, 2)));
        assert!(is_futile_by_definition(&h, &graph(&h, 5, 6)));
        assert!(is_futile_by_definition(&h, &graph(&h, 2, 4)));

        let h49 = GeneratedGroup::from_cycle_strings(
            9,
            &["(1,2)", "(1,3)", "(4,5)", "(4,6)", "(1,4)(2,5)(3,6)", "(7,8,9)"],
        )
        .unwrap();
        let c49 = h49.stabilizer_chain();
        assert!(!is_futile_by_counts(&c49, 0, 1));
        let g = graph(&h49, 1, 2);
        assert!(!is_futile_by_definition(&h49, &g));
        assert!(!g.has_futile_shape());
        let t24 = Permutation::parse_cycles("(2,4)", 9).unwrap();
        assert!(!g.is_automorphism(&t24));
    }

    #[test]
    fn orbital_base_examples() {
        assert!(orbital_base(&GeneratedGroup::symmetric(3), None).is_empty());
        let base = orbital_base(&ex43(), None);
        // the 3-cycle and its reverse
        let pairs: Vec<(usize, usize)> = base.iter().map(|g| g.base_pair()).collect();
        assert_eq!(pairs, vec![(0, 1), (0, 2)]);
        assert!(base.iter().all(|g| g.num_arcs() == 3));
        assert!(orbital_base(&ex43(), Some(2)).is_empty());
    }

    #[test]
    fn grid_pair_classes() {
        // same row, same column, and neither: three classes, none futile
        let g = GeneratedGroup::grid(3);
        let base = orbital_base(&g, None);
        let mut sizes: Vec<usize> = base.iter().map(|g| g.num_arcs()).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![18, 18, 36]);
        for gr in &base {
            assert!(!is_futile_by_definition(&g, gr));
        }
    }
}
