//! Depth-first search for APN permutations with a prescribed linear
//! self-equivalence.

mod checkpoint;
mod engine;
mod parallel;
mod partial;

pub use checkpoint::{run_digest, Checkpoint, JobState, JobStatus, CHECKPOINT_VERSION};
pub use engine::{
    dfs_search, is_smallest, random_search, search_context, seed_fixed_points, SearchConfig,
    SearchContext, SearchMode, SearchReport, StopReason,
};
pub use parallel::{parallel_search, split_work, RunOptions};
pub use partial::{DdtAccumulator, PartialLut};
