//! Benchmark instance families and batch solving.
//!
//! With the `parallel` feature, batches are spread over the rayon thread
//! pool. Without it, the same code runs sequentially. Results always come back
//! in input order, and every instance is seeded on its own, so output does not
//! depend on scheduling.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::seq::{index, SliceRandom};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::backtrack::{solve_with, Problem, Property, SearchOptions, SearchResult};
use crate::group::GeneratedGroup;
use crate::perm::Permutation;
use crate::refine::RefinerMode;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GridVariant {
    /// `floor(m^2 / 2)` points chosen uniformly.
    Random,
    /// `floor(m / 2)` points chosen uniformly in every row.
    RowBalanced,
}

impl fmt::Display for GridVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GridVariant::Random => "random",
            GridVariant::RowBalanced => "row-balanced",
        })
    }
}

impl FromStr for GridVariant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "random" => Ok(GridVariant::Random),
            "row-balanced" | "rowbalanced" | "balanced" => Ok(GridVariant::RowBalanced),
            _ => Err(format!("unknown grid variant `{s}`")),
        }
    }
}

/// The point set of a grid set-stabilizer instance, sorted.
pub fn grid_set(m: usize, variant: GridVariant, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut set: Vec<usize> = match variant {
        GridVariant::Random => index::sample(&mut rng, m * m, m * m / 2).into_vec(),
        GridVariant::RowBalanced => (0..m)
            .flat_map(|row| {
                index::sample(&mut rng, m, m / 2)
                    .into_iter()
                    .map(move |col| row * m + col)
                    .collect::<Vec<_>>()
            })
            .collect(),
    };
    set.sort_unstable();
    set
}

/// Stabilizer in the `m x m` grid group of a seeded random point set.
pub fn grid_problem(m: usize, variant: GridVariant, seed: u64, mode: RefinerMode) -> Problem {
    let set = grid_set(m, variant, seed);
    Problem::new(
        m * m,
        vec![
            Property::InGroup(GeneratedGroup::grid(m)),
            Property::StabilizesSet(set),
        ],
        mode,
    )
    .expect("grid instance is well formed")
}

/// A uniformly random permutation of `degree` points.
pub fn random_permutation(degree: usize, seed: u64) -> Permutation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut images: Vec<usize> = (0..degree).collect();
    images.shuffle(&mut rng);
    Permutation::from_images(images).expect("a shuffle is a bijection")
}

/// Intersection of `group` with a random conjugate of `S_a wr S_b`.
pub fn wreath_problem(
    group: &GeneratedGroup,
    a: usize,
    b: usize,
    seed: u64,
    mode: RefinerMode,
) -> Result<Problem, crate::ProblemError> {
    let w = GeneratedGroup::wreath_product(a, b);
    if w.degree() != group.degree() {
        return Err(crate::ProblemError::DegreeMismatch {
            expected: group.degree(),
            found: w.degree(),
        });
    }
    let p = random_permutation(w.degree(), seed);
    let conj = w.conjugate(&p).expect("same degree");
    Problem::new(
        group.degree(),
        vec![Property::InGroup(group.clone()), Property::InGroup(conj)],
        mode,
    )
}

/// A solved instance with its wall time.
#[derive(Clone, Debug)]
pub struct Timed {
    pub result: SearchResult,
    pub elapsed: Duration,
}

fn run_one(problem: &Problem, options: &SearchOptions) -> Timed {
    let start = Instant::now();
    let result = solve_with(problem, options);
    Timed {
        result,
        elapsed: start.elapsed(),
    }
}

/// Solves every problem; parallel when the `parallel` feature is on.
pub fn solve_batch(problems: &[Problem], options: &SearchOptions) -> Vec<Timed> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        problems.par_iter().map(|p| run_one(p, options)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        solve_batch_sequential(problems, options)
    }
}

/// Solves every problem on the calling thread.
pub fn solve_batch_sequential(problems: &[Problem], options: &SearchOptions) -> Vec<Timed> {
    problems.iter().map(|p| run_one(p, options)).collect()
}

/// Whether batches run on the thread pool.
pub const fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_sets() {
        let s = grid_set(6, GridVariant::Random, 3);
        assert_eq!(s.len(), 18);
        assert_eq!(s, grid_set(6, GridVariant::Random, 3));
        let r = grid_set(5, GridVariant::RowBalanced, 9);
        assert_eq!(r.len(), 10);
        for row in 0..5 {
            assert_eq!(r.iter().filter(|&&x| x / 5 == row).count(), 2);
        }
    }

    #[test]
    fn batch_matches_sequential() {
        let problems: Vec<Problem> = (0..6)
            .map(|s| grid_problem(4, GridVariant::Random, s, RefinerMode::PreOrbital))
            .collect();
        let opts = SearchOptions::default();
        let a = solve_batch(&problems, &opts);
        let b = solve_batch_sequential(&problems, &opts);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.result.stats, y.result.stats);
            assert_eq!(x.result.order, y.result.order);
        }
    }

    #[test]
    fn wreath_degree_checked() {
        let g = GeneratedGroup::symmetric(6);
        assert!(wreath_problem(&g, 2, 3, 1, RefinerMode::Fixed).is_ok());
        assert!(wreath_problem(&g, 2, 2, 1, RefinerMode::Fixed).is_err());
        let r = crate::solve(&wreath_problem(&g, 2, 3, 1, RefinerMode::Fixed).unwrap());
        assert_eq!(r.order, 48u32.into());
    }
}
