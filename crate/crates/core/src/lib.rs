//! Step-down-runs disorder, exact descent statistics for random permutations,
//! random-swap preprocessing of high-disorder parts, and natural merge sort,
//! plus the experiment harness that ties them together.

pub mod bench;
pub mod claims;
pub mod combinatorics;
pub mod datagen;
pub mod disorder;
pub mod error;
pub mod rng;
pub mod shuffle;
pub mod sorting;

pub use combinatorics::{BigCount, DescentDistribution, Probability};
pub use disorder::{DisorderReport, KeySequence, PartitionView};
pub use error::{Error, Result};
pub use rng::RngStream;
pub use shuffle::{Policy, ShuffleConfig, ShuffleReport};
pub use sorting::{RunList, SortStats};
