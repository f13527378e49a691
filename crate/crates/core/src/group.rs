//! Permutation groups given by generators, and the families used in the
//! benchmark experiments (grid groups and imprimitive wreath products).

use std::collections::VecDeque;

use num_bigint::BigUint;

use crate::chain::StabilizerChain;
use crate::error::GroupError;
use crate::perm::Permutation;

/// A subgroup of `Sym(n)` given by a generator list. No generators means the
/// trivial group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratedGroup {
    degree: usize,
    generators: Vec<Permutation>,
}

impl GeneratedGroup {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self, GroupError> {
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(GroupError::DegreeMismatch {
                expected: degree,
                found: g.degree(),
            });
        }
        Ok(GeneratedGroup { degree, generators })
    }

    pub fn trivial(degree: usize) -> Self {
        GeneratedGroup {
            degree,
            generators: Vec::new(),
        }
    }

    /// `Sym(n)` generated by a transposition and an `n`-cycle.
    pub fn symmetric(degree: usize) -> Self {
        let mut gens = Vec::new();
        if degree >= 2 {
            gens.push(Permutation::from_cycles(degree, &[vec![0, 1]]).unwrap());
        }
        if degree >= 3 {
            gens.push(Permutation::from_cycles(degree, &[(0..degree).collect()]).unwrap());
        }
        GeneratedGroup {
            degree,
            generators: gens,
        }
    }

    /// Parses generators in cycle notation, one string per generator.
    pub fn from_cycle_strings(degree: usize, gens: &[&str]) -> Result<Self, crate::PermError> {
        let generators = gens
            .iter()
            .map(|s| Permutation::parse_cycles(s, degree))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(GeneratedGroup { degree, generators })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    /// Orbit of `point`, sorted ascending.
    pub fn orbit(&self, point: usize) -> Vec<usize> {
        orbit_of(self.degree, &self.generators, point)
    }

    /// All orbits, each sorted, listed by minimum element.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        orbits_of(self.degree, &self.generators)
    }

    pub fn is_transitive(&self) -> bool {
        self.degree <= 1 || self.orbit(0).len() == self.degree
    }

    pub fn stabilizer_chain(&self) -> StabilizerChain {
        StabilizerChain::new(self, &[])
    }

    pub fn order(&self) -> BigUint {
        self.stabilizer_chain().order()
    }

    /// Transitive, and the stabilizer of one point is transitive on the rest.
    pub fn is_2_transitive(&self) -> bool {
        if self.degree < 2 || !self.is_transitive() {
            return false;
        }
        let chain = StabilizerChain::new(self, &[0]);
        let stab = chain.point_stabilizer(&[0]);
        stab.orbit(1).len() == self.degree - 1
    }

    /// Generators `p^-1 g p` for every generator `g`.
    pub fn conjugate(&self, p: &Permutation) -> Result<Self, GroupError> {
        if p.degree() != self.degree {
            return Err(GroupError::DegreeMismatch {
                expected: self.degree,
                found: p.degree(),
            });
        }
        let pinv = p.inverse();
        Ok(GeneratedGroup {
            degree: self.degree,
            generators: self
                .generators
                .iter()
                .map(|g| pinv.then(g).then(p))
                .collect(),
        })
    }

    /// The `m x m` grid group: `S_m x S_m` acting on rows and columns of an
    /// `m x m` array of points. Point `(i, j)` (0-based) is `i * m + j`.
    pub fn grid(m: usize) -> Self {
        assert!(m >= 1, "grid size must be positive");
        let n = m * m;
        let mut gens = Vec::new();
        let row_perm = |sigma: &dyn Fn(usize) -> usize| {
            let images = (0..n).map(|x| sigma(x / m) * m + x % m).collect();
            Permutation::from_images_unchecked(images)
        };
        let col_perm = |tau: &dyn Fn(usize) -> usize| {
            let images = (0..n).map(|x| (x / m) * m + tau(x % m)).collect();
            Permutation::from_images_unchecked(images)
        };
        let swap01 = |i: usize| match i {
            0 => 1,
            1 => 0,
            _ => i,
        };
        let cycle = |i: usize| (i + 1) % m;
        if m >= 2 {
            gens.push(row_perm(&swap01));
            gens.push(col_perm(&swap01));
        }
        if m >= 3 {
            gens.push(row_perm(&cycle));
            gens.push(col_perm(&cycle));
        }
        GeneratedGroup {
            degree: n,
            generators: gens,
        }
    }

    /// `S_a wr S_b` in its imprimitive action on `a * b` points: `b` blocks of
    /// `a` consecutive points, `S_a` acting on the first block and `S_b`
    /// permuting blocks rigidly.
    pub fn wreath_product(a: usize, b: usize) -> Self {
        assert!(a >= 1 && b >= 1, "wreath product parameters must be positive");
        let n = a * b;
        let mut gens: Vec<Permutation> = Vec::new();
        let inner = GeneratedGroup::symmetric(a);
        for g in inner.generators() {
            let images = (0..n)
                .map(|x| if x < a { g.image(x) } else { x })
                .collect();
            gens.push(Permutation::from_images_unchecked(images));
        }
        for g in GeneratedGroup::symmetric(b).generators() {
            let images = (0..n).map(|x| g.image(x / a) * a + x % a).collect();
            gens.push(Permutation::from_images_unchecked(images));
        }
        GeneratedGroup {
            degree: n,
            generators: gens,
        }
    }
}

pub(crate) fn orbit_of(degree: usize, gens: &[Permutation], point: usize) -> Vec<usize> {
    let mut seen = vec![false; degree];
    let mut orbit = vec![point];
    seen[point] = true;
    let mut i = 0;
    while i < orbit.len() {
        let x = orbit[i];
        for g in gens {
            let y = g.image(x);
            if !seen[y] {
                seen[y] = true;
                orbit.push(y);
            }
        }
        i += 1;
    }
    orbit.sort_unstable();
    orbit
}

pub(crate) fn orbits_of(degree: usize, gens: &[Permutation]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; degree];
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..degree {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        queue.push_back(start);
        let mut orbit = Vec::new();
        while let Some(x) = queue.pop_front() {
            orbit.push(x);
            for g in gens {
                let y = g.image(x);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        orbit.sort_unstable();
        out.push(orbit);
    }
    out
}

/// Orbit index of every point (orbits numbered by minimum element).
pub(crate) fn orbit_labels(degree: usize, gens: &[Permutation]) -> Vec<usize> {
    let mut label = vec![usize::MAX; degree];
    for (k, orb) in orbits_of(degree, gens).iter().enumerate() {
        for &x in orb {
            label[x] = k;
        }
    }
    label
}
