//! Partition backtrack search for permutation groups, with refiners built
//! from orbital graphs.
//!
//! Points are 0-based internally. Text input and output use 1-based cycle
//! notation. Permutations act on the right: `p.then(q)` applies `p` first.

pub mod backtrack;
pub mod batch;
pub mod chain;
pub mod error;
pub mod group;
pub mod oracle;
pub mod orbital;
pub mod partition;
pub mod perm;
pub mod refine;

pub use backtrack::{
    build_rbase, intersection, partition_stabilizer, set_stabilizer, solve, solve_with, verify,
    Problem, Property, SearchOptions, SearchResult, SearchStats,
};
pub use chain::StabilizerChain;
pub use error::{GroupError, PartitionError, PermError, ProblemError};
pub use group::GeneratedGroup;
pub use orbital::{orbital_base, orbital_graph, OrbitalGraph};
pub use partition::OrderedPartition;
pub use perm::Permutation;
pub use refine::{equitable, RefinerContext, RefinerMode};
