//! Stabilizer chains (bases and strong generating sets).
//!
//! Level `i` holds a base point `b_i`, generators of the pointwise stabilizer
//! of `b_0..b_{i-1}`, and an explicit transversal of the orbit of `b_i`: for
//! every orbit point `x`, a group element mapping `b_i` to `x` and its inverse.
//!
//! Chains are built deterministically by Schreier–Sims. Re-basing an existing
//! chain uses uniform random elements drawn from it and stops once the product
//! of orbit lengths reaches the known group order, so it is exact and, with a
//! fixed seed, reproducible.

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::group::{orbit_of, GeneratedGroup};
use crate::perm::Permutation;

#[derive(Clone, Debug)]
struct Level {
    point: usize,
    generators: Vec<Permutation>,
    orbit: Vec<usize>,
    transversal: Vec<Option<Permutation>>,
    inverse: Vec<Option<Permutation>>,
}

impl Level {
    fn new(point: usize, degree: usize) -> Self {
        let mut transversal = vec![None; degree];
        let mut inverse = vec![None; degree];
        transversal[point] = Some(Permutation::identity(degree));
        inverse[point] = Some(Permutation::identity(degree));
        Level {
            point,
            generators: Vec::new(),
            orbit: vec![point],
            transversal,
            inverse,
        }
    }

    fn contains_point(&self, x: usize) -> bool {
        self.transversal[x].is_some()
    }

    fn add_orbit_point(&mut self, x: usize, witness: Permutation) {
        self.inverse[x] = Some(witness.inverse());
        self.transversal[x] = Some(witness);
        self.orbit.push(x);
    }

    /// Recomputes orbit and transversal from scratch with the current generators.
    fn rebuild_orbit(&mut self) {
        let degree = self.transversal.len();
        let point = self.point;
        let gens = std::mem::take(&mut self.generators);
        *self = Level::new(point, degree);
        self.generators = gens;
        let mut i = 0;
        while i < self.orbit.len() {
            let x = self.orbit[i];
            for k in 0..self.generators.len() {
                let y = self.generators[k].image(x);
                if !self.contains_point(y) {
                    let w = self.transversal[x]
                        .as_ref()
                        .unwrap()
                        .then(&self.generators[k]);
                    self.add_orbit_point(y, w);
                }
            }
            i += 1;
        }
    }
}

/// Base and strong generating set for a permutation group.
#[derive(Clone, Debug)]
pub struct StabilizerChain {
    degree: usize,
    levels: Vec<Level>,
}

impl StabilizerChain {
    /// Deterministic Schreier–Sims. The base starts with the points of
    /// `base_hint` that are moved by the stabilizer of the earlier hint points,
    /// then continues with smallest moved points.
    pub fn new(group: &GeneratedGroup, base_hint: &[usize]) -> Self {
        let mut chain = StabilizerChain::seeded(group.degree(), base_hint);
        for g in group.generators() {
            if !g.is_identity() {
                chain.insert(0, g.clone());
            }
        }
        chain.strip_trivial_levels();
        chain
    }

    /// Monte Carlo Schreier–Sims driven by a seeded random walk on the group.
    /// Stops after `confidence` consecutive random elements sift to the
    /// identity, so the chain may describe a proper subgroup with probability
    /// at most `2^-confidence`.
    pub fn randomized(
        group: &GeneratedGroup,
        base_hint: &[usize],
        seed: u64,
        confidence: usize,
    ) -> Self {
        let degree = group.degree();
        let mut chain = StabilizerChain::seeded(degree, base_hint);
        let gens: Vec<&Permutation> = group
            .generators()
            .iter()
            .filter(|g| !g.is_identity())
            .collect();
        if gens.is_empty() {
            chain.strip_trivial_levels();
            return chain;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // product replacement state
        let mut state: Vec<Permutation> = gens.iter().map(|g| (*g).clone()).collect();
        while state.len() < 10 {
            state.push(gens[state.len() % gens.len()].clone());
        }
        let mut acc = Permutation::identity(degree);
        let step = |rng: &mut ChaCha8Rng, state: &mut Vec<Permutation>, acc: &mut Permutation| {
            let i = rng.gen_range(0..state.len());
            let mut j = rng.gen_range(0..state.len());
            while j == i {
                j = rng.gen_range(0..state.len());
            }
            state[i] = if rng.gen_bool(0.5) {
                state[i].then(&state[j])
            } else {
                state[j].then(&state[i])
            };
            *acc = acc.then(&state[i]);
            acc.clone()
        };
        for _ in 0..50 {
            step(&mut rng, &mut state, &mut acc);
        }
        for g in &gens {
            chain.add_residue((*g).clone());
        }
        let mut quiet = 0;
        while quiet < confidence {
            let r = step(&mut rng, &mut state, &mut acc);
            if chain.add_residue(r) {
                quiet = 0;
            } else {
                quiet += 1;
            }
        }
        chain.strip_trivial_levels();
        chain
    }

    /// A chain for the same group with base starting at `base_hint`, built from
    /// uniform random elements of `self` until the group order is reached.
    pub fn rebase(&self, base_hint: &[usize]) -> StabilizerChain {
        let seed = base_hint
            .iter()
            .fold(0xcbf2_9ce4_8422_2325u64, |h, &x| {
                (h ^ x as u64).wrapping_mul(0x0000_0100_0000_01b3)
            });
        self.rebase_seeded(base_hint, seed)
    }

    pub fn rebase_seeded(&self, base_hint: &[usize], seed: u64) -> StabilizerChain {
        let mut chain = StabilizerChain::seeded(self.degree, base_hint);
        let target = self.order();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for g in self.strong_generators() {
            chain.add_residue(g.clone());
        }
        while chain.order() != target {
            let g = self.random_element(&mut rng);
            chain.add_residue(g);
        }
        chain.strip_trivial_levels();
        chain
    }

    /// Chain of the trivial group whose base starts with `base_hint`. Levels
    /// for the hint points are kept even while their orbits are trivial.
    pub fn with_base(degree: usize, base_hint: &[usize]) -> Self {
        StabilizerChain::seeded(degree, base_hint)
    }

    /// Adds `g` to the group. Returns `false` if it was already a member.
    pub fn extend(&mut self, g: &Permutation) -> bool {
        assert_eq!(g.degree(), self.degree, "degree mismatch");
        if self.contains(g) {
            return false;
        }
        self.insert(0, g.clone());
        true
    }

    fn seeded(degree: usize, base_hint: &[usize]) -> Self {
        let mut levels: Vec<Level> = Vec::new();
        for &b in base_hint {
            if !levels.iter().any(|l| l.point == b) {
                levels.push(Level::new(b, degree));
            }
        }
        StabilizerChain { degree, levels }
    }

    /// Sifts `g` from level `from` downward, returning the residue and the
    /// level at which sifting stopped (`levels.len()` if it passed them all).
    fn sift_from(&self, from: usize, g: &Permutation) -> (Permutation, usize) {
        let mut h = g.clone();
        for (i, level) in self.levels.iter().enumerate().skip(from) {
            let x = h.image(level.point);
            match &level.inverse[x] {
                Some(inv) => {
                    if x != level.point {
                        h = h.then(inv);
                    }
                }
                None => return (h, i),
            }
        }
        (h, self.levels.len())
    }

    /// Deterministic Schreier–Sims insertion of `g` (which fixes the base
    /// points above `level`) into the group at `level`.
    fn insert(&mut self, level: usize, g: Permutation) {
        let (residue, _) = self.sift_from(level, &g);
        if residue.is_identity() {
            return;
        }
        if level == self.levels.len() {
            let p = g.smallest_moved_point().expect("non-identity");
            self.levels.push(Level::new(p, self.degree));
        }
        let schreier = {
            let lvl = &mut self.levels[level];
            lvl.generators.push(g.clone());
            let new_gen = lvl.generators.len() - 1;
            let mut schreier = Vec::new();
            let old_len = lvl.orbit.len();
            // existing orbit points against the new generator
            for idx in 0..old_len {
                let x = lvl.orbit[idx];
                process_pair(lvl, x, new_gen, &mut schreier);
            }
            // new orbit points against every generator
            let mut idx = old_len;
            while idx < lvl.orbit.len() {
                let x = lvl.orbit[idx];
                for k in 0..lvl.generators.len() {
                    process_pair(lvl, x, k, &mut schreier);
                }
                idx += 1;
            }
            schreier
        };
        for s in schreier {
            self.insert(level + 1, s);
        }
    }

    /// Sifts `g` and, if it is not yet a member, adds the residue as a new
    /// strong generator. Returns whether the chain changed.
    fn add_residue(&mut self, g: Permutation) -> bool {
        let (residue, at) = self.sift_from(0, &g);
        if residue.is_identity() {
            return false;
        }
        if at == self.levels.len() {
            let p = residue.smallest_moved_point().expect("non-identity");
            self.levels.push(Level::new(p, self.degree));
        }
        for level in &mut self.levels[..=at] {
            level.generators.push(residue.clone());
            level.rebuild_orbit();
        }
        true
    }

    fn strip_trivial_levels(&mut self) {
        self.levels.retain(|l| l.orbit.len() > 1);
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.point).collect()
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn order(&self) -> BigUint {
        self.levels
            .iter()
            .fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    pub fn orbit_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    /// Generators of the whole group (the first level's generators).
    pub fn strong_generators(&self) -> &[Permutation] {
        self.levels
            .first()
            .map(|l| l.generators.as_slice())
            .unwrap_or(&[])
    }

    /// Generators of the stabilizer of the first `level` base points.
    pub fn level_generators(&self, level: usize) -> &[Permutation] {
        self.levels
            .get(level)
            .map(|l| l.generators.as_slice())
            .unwrap_or(&[])
    }

    /// Orbit of the base point at `level` under that level's group.
    pub fn basic_orbit(&self, level: usize) -> &[usize] {
        &self.levels[level].orbit
    }

    pub fn group(&self) -> GeneratedGroup {
        GeneratedGroup::new(self.degree, self.strong_generators().to_vec()).unwrap()
    }

    /// The chain of the stabilizer of the first `level` base points.
    pub fn tail(&self, level: usize) -> StabilizerChain {
        StabilizerChain {
            degree: self.degree,
            levels: self.levels[level.min(self.levels.len())..].to_vec(),
        }
    }

    /// Returns `(residue, is_member)`; the residue is the identity exactly for members.
    pub fn sift(&self, p: &Permutation) -> (Permutation, bool) {
        if p.degree() != self.degree {
            return (p.clone(), false);
        }
        let (residue, _) = self.sift_from(0, p);
        let member = residue.is_identity();
        (residue, member)
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.sift(p).1
    }

    /// Uniformly random group element: one random transversal element per level.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Permutation {
        let mut g = Permutation::identity(self.degree);
        for level in self.levels.iter().rev() {
            let x = level.orbit[rng.gen_range(0..level.orbit.len())];
            g = g.then(level.transversal[x].as_ref().unwrap());
        }
        g
    }

    /// Number of levels consumed when `points` are treated as a base prefix,
    /// or `None` if the chain's base does not start with them (hint points
    /// fixed by the relevant stabilizer are allowed to be skipped).
    pub fn prefix_level(&self, points: &[usize]) -> Option<usize> {
        let mut idx = 0;
        for &p in points {
            if idx < self.levels.len() && self.levels[idx].point == p {
                idx += 1;
            } else if idx < self.levels.len()
                && self.levels[idx].generators.iter().any(|g| g.image(p) != p)
            {
                return None;
            }
        }
        Some(idx)
    }

    /// Chain of the pointwise stabilizer of `points`, re-basing if needed.
    pub fn stabilizer_chain(&self, points: &[usize]) -> StabilizerChain {
        match self.prefix_level(points) {
            Some(k) => self.tail(k),
            None => {
                let rebased = self.rebase(points);
                let k = rebased.prefix_level(points).expect("rebased chain starts with hint");
                rebased.tail(k)
            }
        }
    }

    /// Generators of the pointwise stabilizer of `points`.
    pub fn point_stabilizer(&self, points: &[usize]) -> GeneratedGroup {
        let tail = self.stabilizer_chain(points);
        GeneratedGroup::new(self.degree, tail.strong_generators().to_vec()).unwrap()
    }

    /// Some group element mapping `from[i]` to `to[i]` for every `i`, or `None`
    /// if there is none.
    pub fn element_mapping_tuple(&self, from: &[usize], to: &[usize]) -> Option<Permutation> {
        assert_eq!(from.len(), to.len(), "tuple lengths differ");
        if self.prefix_level(from).is_none() {
            return self.rebase(from).element_mapping_tuple(from, to);
        }
        // acc maps from[..i] onto to[..i]; candidates are x * acc with x in the level group
        let mut acc = Permutation::identity(self.degree);
        let mut acc_inv = Permutation::identity(self.degree);
        let mut idx = 0;
        for (&p, &t) in from.iter().zip(to) {
            let target = acc_inv.image(t);
            if idx < self.levels.len() && self.levels[idx].point == p {
                let level = &self.levels[idx];
                let (u, u_inv) = match (&level.transversal[target], &level.inverse[target]) {
                    (Some(u), Some(ui)) => (u, ui),
                    _ => return None,
                };
                acc = u.then(&acc);
                acc_inv = acc_inv.then(u_inv);
                idx += 1;
            } else if target != p {
                return None;
            }
        }
        Some(acc)
    }
}

fn process_pair(lvl: &mut Level, x: usize, gen: usize, schreier: &mut Vec<Permutation>) {
    let y = lvl.generators[gen].image(x);
    let ux_s = lvl.transversal[x].as_ref().unwrap().then(&lvl.generators[gen]);
    if lvl.contains_point(y) {
        let sg = ux_s.then(lvl.inverse[y].as_ref().unwrap());
        if !sg.is_identity() {
            schreier.push(sg);
        }
    } else {
        lvl.add_orbit_point(y, ux_s);
    }
}

/// Orbit of `point` under the group at `level` of `chain`.
pub fn level_orbit(chain: &StabilizerChain, level: usize, point: usize) -> Vec<usize> {
    orbit_of(chain.degree(), chain.level_generators(level), point)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use rand::seq::SliceRandom;

    fn h1() -> GeneratedGroup {
        GeneratedGroup::from_cycle_strings(10, &["(1,2,3,4,5,6,7,8,9,10)", "(2,10)(3,9)(4,8)(5,7)"])
            .unwrap()
    }

    fn p(s: &str, n: usize) -> Permutation {
        Permutation::parse_cycles(s, n).unwrap()
    }

    #[test]
    fn orders() {
        assert_eq!(h1().stabilizer_chain().order(), BigUint::from(20u32));
        assert_eq!(GeneratedGroup::trivial(4).stabilizer_chain().order(), BigUint::one());
        assert_eq!(GeneratedGroup::symmetric(6).order(), BigUint::from(720u32));
    }

    #[test]
    fn base_hint_respected() {
        let g = GeneratedGroup::symmetric(5);
        let c = StabilizerChain::new(&g, &[3, 1]);
        assert_eq!(&c.base()[..2], &[3, 1]);
        assert_eq!(c.order(), BigUint::from(120u32));
        // hint points fixed by the stabilizer are skipped
        let h = GeneratedGroup::from_cycle_strings(5, &["(1,2)"]).unwrap();
        let c = StabilizerChain::new(&h, &[4, 0]);
        assert_eq!(c.base(), vec![0]);
    }

    #[test]
    fn point_stabilizer_examples() {
        let s3 = GeneratedGroup::symmetric(3);
        let st = s3.stabilizer_chain().point_stabilizer(&[0]);
        assert_eq!(st.order(), BigUint::from(2u32));
        assert!(st.generators().iter().all(|g| g.image(0) == 0));

        let h = GeneratedGroup::from_cycle_strings(6, &["(1,2,3)", "(4,5)", "(4,6)"]).unwrap();
        let st = h.stabilizer_chain().point_stabilizer(&[0]);
        assert_eq!(st.order(), BigUint::from(6u32));
        for g in st.generators() {
            assert_eq!((g.image(0), g.image(1), g.image(2)), (0, 1, 2));
        }
        let same = h.stabilizer_chain().point_stabilizer(&[]);
        assert_eq!(same.order(), BigUint::from(18u32));
    }

    #[test]
    fn sift_examples() {
        let c = h1().stabilizer_chain();
        for g in h1().generators() {
            assert!(c.sift(g).1);
        }
        assert!(c.contains(&p("(1,5)(2,4)(6,10)(7,9)", 10)));
        assert!(!c.contains(&p("(1,2)", 10)));
        let (res, member) = c.sift(&p("(1,2)", 10));
        assert!(!member && !res.is_identity());

        let s3 = GeneratedGroup::from_cycle_strings(4, &["(1,2)", "(1,2,3)"]).unwrap();
        assert!(!s3.stabilizer_chain().contains(&p("(3,4)", 4)));
    }

    #[test]
    fn element_mapping_examples() {
        let c = h1().stabilizer_chain();
        let g = c.element_mapping_tuple(&[0], &[1]).unwrap();
        assert_eq!(g.image(0), 1);
        assert!(c.contains(&g));
        let t = [3, 7];
        let g = c.element_mapping_tuple(&t, &t).unwrap();
        assert_eq!((g.image(3), g.image(7)), (3, 7));

        let h = GeneratedGroup::from_cycle_strings(7, &["(1,2,3)", "(5,7)"]).unwrap();
        assert!(h.stabilizer_chain().element_mapping_tuple(&[0], &[4]).is_none());
    }

    #[test]
    fn rebase_preserves_group() {
        let g = GeneratedGroup::grid(4);
        let c = g.stabilizer_chain();
        let r = c.rebase(&[5, 10, 15]);
        assert_eq!(r.order(), c.order());
        assert_eq!(&r.base()[..3], &[5, 10, 15]);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let x = c.random_element(&mut rng);
            assert!(r.contains(&x));
        }
    }

    #[test]
    fn randomized_mode_finds_full_group() {
        let g = GeneratedGroup::grid(4);
        let c = StabilizerChain::randomized(&g, &[], 11, 40);
        assert_eq!(c.order(), BigUint::from(24u32 * 24));
    }

    #[test]
    fn small_groups_match_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for _ in 0..150 {
            let n = rng.gen_range(2..=7);
            let k = rng.gen_range(1..=3);
            let gens: Vec<Permutation> = (0..k)
                .map(|_| {
                    let mut v: Vec<usize> = (0..n).collect();
                    v.shuffle(&mut rng);
                    Permutation::from_images(v).unwrap()
                })
                .collect();
            let g = GeneratedGroup::new(n, gens).unwrap();
            let elems = oracle::enumerate(&g, 10_000).unwrap();
            let chain = g.stabilizer_chain();
            assert_eq!(chain.order(), BigUint::from(elems.len()));
            // orbit-stabilizer for a random point
            let a = rng.gen_range(0..n);
            let stab = chain.point_stabilizer(&[a]);
            assert_eq!(
                chain.order(),
                BigUint::from(g.orbit(a).len()) * stab.order()
            );
            // membership against brute force
            for _ in 0..100 {
                let mut v: Vec<usize> = (0..n).collect();
                v.shuffle(&mut rng);
                let q = Permutation::from_images(v).unwrap();
                assert_eq!(chain.contains(&q), elems.contains(&q));
            }
            // tuple mapping against brute force
            let from: Vec<usize> = (0..n).collect::<Vec<_>>().choose_multiple(&mut rng, 2).cloned().collect();
            let to: Vec<usize> = (0..n).collect::<Vec<_>>().choose_multiple(&mut rng, 2).cloned().collect();
            let exists = elems
                .iter()
                .any(|e| from.iter().zip(&to).all(|(&f, &t)| e.image(f) == t));
            match chain.element_mapping_tuple(&from, &to) {
                Some(w) => {
                    assert!(chain.contains(&w));
                    assert!(from.iter().zip(&to).all(|(&f, &t)| w.image(f) == t));
                }
                None => assert!(!exists),
            }
            // 2-transitivity against pair-orbit count
            let pair_classes = oracle::brute_pair_orbits(&g, 10_000).unwrap();
            assert_eq!(g.is_2_transitive(), pair_classes.len() == 1);
        }
    }
}
