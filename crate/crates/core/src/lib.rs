pub mod bench;
pub mod bundled;
pub mod cli;
pub mod condense;
pub mod dataio;
pub mod dataset;
pub mod error;
pub mod generators;
mod kdtree;
pub mod neighbors;

pub use condense::{condense, Algorithm, CondenseResult};
pub use dataset::{distance, IndexSubset, RawTrainingSet, TrainingSet};
pub use error::{Error, Result};
