//! Condensation algorithms: every one returns a consistent subset of the
//! training set.
//!
//! | algorithm | strategy |
//! |-----------|----------|
//! | [`fcnn`]  | centroid seeding, then one representative per selected point per round |
//! | [`sfcnn`] | same loop, but a single representative joins per round |
//! | [`cnn`]   | Hart's incremental passes in input order |
//! | [`mss`]   | greedy coverage of nearest-enemy balls |
//! | [`rss`]   | nearest-enemy-ordered packing |
//! | [`vss`]   | nearest-enemy-ordered covering with boundary witnesses |
//! | [`net`]   | a γ-net for the margin γ |
//!
//! Ties everywhere break toward the lowest point index, so every algorithm is
//! a deterministic function of its input.

mod checks;
mod cnn;
mod coverage;
mod fcnn;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dataset::{sq_distance, IndexSubset, TrainingSet};
use crate::error::{Error, Result};
use crate::neighbors::nearest_in_subset;

pub use checks::{
    bucket_index, bucket_separation_violations, min_pairwise_distance, sfcnn_bound_check,
    uncovered_points, verify_consistent, BoundReport, Consistency,
};
pub use cnn::cnn;
pub use coverage::{mss, net, rss, vss};
pub use fcnn::{fcnn, sfcnn};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Cnn,
    Fcnn,
    Sfcnn,
    Mss,
    Rss,
    Vss,
    Net,
}

impl Algorithm {
    pub const ALL: [Algorithm; 7] = [
        Algorithm::Fcnn,
        Algorithm::Sfcnn,
        Algorithm::Rss,
        Algorithm::Vss,
        Algorithm::Mss,
        Algorithm::Cnn,
        Algorithm::Net,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Cnn => "cnn",
            Algorithm::Fcnn => "fcnn",
            Algorithm::Sfcnn => "sfcnn",
            Algorithm::Mss => "mss",
            Algorithm::Rss => "rss",
            Algorithm::Vss => "vss",
            Algorithm::Net => "net",
        }
    }

    /// Whether the algorithm needs the nearest-enemy table.
    pub fn uses_enemy_table(self) -> bool {
        matches!(self, Algorithm::Mss | Algorithm::Rss | Algorithm::Vss | Algorithm::Net)
    }

    pub fn run(self, ts: &TrainingSet) -> Result<CondenseResult> {
        match self {
            Algorithm::Cnn => cnn(ts),
            Algorithm::Fcnn => fcnn(ts),
            Algorithm::Sfcnn => sfcnn(ts),
            Algorithm::Mss => mss(ts),
            Algorithm::Rss => rss(ts),
            Algorithm::Vss => vss(ts),
            Algorithm::Net => net(ts),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| {
                Error::invalid(format!(
                    "unknown algorithm '{s}' (expected one of fcnn, sfcnn, rss, vss, mss, cnn, net)"
                ))
            })
    }
}

/// Output of a condensation run.
#[derive(Debug, Clone, PartialEq)]
pub struct CondenseResult {
    pub algorithm: Algorithm,
    pub subset: IndexSubset,
    /// Outer-loop passes performed.
    pub iterations: usize,
    pub selection_order: Vec<usize>,
}

impl CondenseResult {
    pub(crate) fn new(algorithm: Algorithm, selection_order: Vec<usize>, iterations: usize) -> Self {
        let subset = IndexSubset::from_unsorted(selection_order.clone());
        debug_assert_eq!(subset.len(), selection_order.len(), "duplicate selection");
        CondenseResult {
            algorithm,
            subset,
            iterations,
            selection_order,
        }
    }

    pub fn len(&self) -> usize {
        self.subset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subset.is_empty()
    }
}

/// Runs `algorithm` on `ts`.
pub fn condense(ts: &TrainingSet, algorithm: Algorithm) -> Result<CondenseResult> {
    algorithm.run(ts)
}

/// One point per class, ordered by class id: the member closest to the
/// arithmetic mean of its class.
pub fn centroids(ts: &TrainingSet) -> Vec<usize> {
    ts.members_by_class()
        .into_iter()
        .map(|members| {
            let mut mean = vec![0.0; ts.dim()];
            for &i in &members {
                for (m, x) in mean.iter_mut().zip(ts.point(i)) {
                    *m += x;
                }
            }
            let count = members.len() as f64;
            mean.iter_mut().for_each(|m| *m /= count);

            let mut best = (f64::INFINITY, usize::MAX);
            for &i in &members {
                let sq = sq_distance(ts.point(i), &mean);
                if sq < best.0 {
                    best = (sq, i);
                }
            }
            best.1
        })
        .collect()
}

/// Non-selected points whose nearest selected point is `p` and whose label
/// differs from `p`'s.
pub fn voren(p: usize, ts: &TrainingSet, selected: &IndexSubset) -> Result<Vec<usize>> {
    if !selected.contains(p) {
        return Err(Error::invalid(format!("point {p} is not in the selected subset")));
    }
    let mut out = Vec::new();
    for q in 0..ts.len() {
        if selected.contains(q) || ts.label(q) == ts.label(p) {
            continue;
        }
        if nearest_in_subset(q, ts, selected)?.0 == p {
            out.push(q);
        }
    }
    Ok(out)
}
