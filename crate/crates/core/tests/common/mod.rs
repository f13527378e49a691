#![allow(dead_code)]

use permsearch::{GeneratedGroup, OrderedPartition, Permutation};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn random_perm<R: Rng>(rng: &mut R, n: usize) -> Permutation {
    let mut images: Vec<usize> = (0..n).collect();
    images.shuffle(rng);
    Permutation::from_images(images).unwrap()
}

/// A permutation moving only a random subset of 2..=4 points.
pub fn random_local_perm<R: Rng>(rng: &mut R, n: usize) -> Permutation {
    let k = rng.gen_range(2..=4.min(n));
    let mut pts: Vec<usize> = (0..n).collect();
    pts.shuffle(rng);
    let support = &pts[..k];
    let mut shuffled = support.to_vec();
    shuffled.shuffle(rng);
    let mut images: Vec<usize> = (0..n).collect();
    for (&a, &b) in support.iter().zip(&shuffled) {
        images[a] = b;
    }
    Permutation::from_images(images).unwrap()
}

/// Mixes full random permutations with local ones so that both large and
/// small, transitive and intransitive groups show up.
pub fn random_group<R: Rng>(rng: &mut R, n: usize, gens: usize) -> GeneratedGroup {
    let style = rng.gen_range(0..3);
    let g = (0..gens)
        .map(|_| match style {
            0 => random_perm(rng, n),
            1 => random_local_perm(rng, n),
            _ => {
                if rng.gen_bool(0.5) {
                    random_perm(rng, n)
                } else {
                    random_local_perm(rng, n)
                }
            }
        })
        .collect();
    GeneratedGroup::new(n, g).unwrap()
}

pub fn random_subset<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut s: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
    s.sort_unstable();
    s
}

pub fn random_partition<R: Rng>(rng: &mut R, n: usize) -> OrderedPartition {
    let k = rng.gen_range(1..=n.max(1));
    let mut cells: Vec<Vec<usize>> = vec![Vec::new(); k];
    let mut pts: Vec<usize> = (0..n).collect();
    pts.shuffle(rng);
    for (i, &x) in pts.iter().enumerate() {
        let c = if i < k { i } else { rng.gen_range(0..k) };
        cells[c].push(x);
    }
    OrderedPartition::from_cells(n, cells).unwrap()
}

/// A uniformly random element of `group`.
pub fn random_element<R: Rng>(rng: &mut R, group: &GeneratedGroup) -> Permutation {
    group.stabilizer_chain().random_element(rng)
}
