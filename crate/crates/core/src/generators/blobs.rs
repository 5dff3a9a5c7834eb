//! Isotropic Gaussian clusters, one per class.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::dataset::TrainingSet;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlobParams {
    pub n: usize,
    pub d: usize,
    pub c: usize,
    /// Standard deviation of every cluster; centers lie in `[0,1]^d`.
    pub std_dev: f64,
    pub seed: u64,
}

/// `n` points, class of point k is `k mod c`, drawn around a uniformly
/// placed center per class. Coincident enemy pairs (probability zero in
/// exact arithmetic) trigger a redraw from `seed + 1`.
pub fn gen_blobs(p: &BlobParams) -> Result<TrainingSet> {
    if p.c < 2 || p.n < p.c || p.d == 0 {
        return Err(Error::invalid(format!(
            "need n >= c >= 2 and d >= 1, got n = {}, d = {}, c = {}",
            p.n, p.d, p.c
        )));
    }
    if !(p.std_dev.is_finite() && p.std_dev > 0.0) {
        return Err(Error::invalid(format!("standard deviation must be positive, got {}", p.std_dev)));
    }
    let normal = Normal::new(0.0, p.std_dev).expect("positive finite standard deviation");
    let mut seed = p.seed;
    loop {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let centers: Vec<Vec<f64>> = (0..p.c)
            .map(|_| (0..p.d).map(|_| rng.gen::<f64>()).collect())
            .collect();
        let labels: Vec<usize> = (0..p.n).map(|k| k % p.c).collect();
        let points = labels
            .iter()
            .map(|&l| centers[l].iter().map(|m| m + normal.sample(&mut rng)).collect())
            .collect();
        let names = (0..p.c).map(|k| k.to_string()).collect();
        if let Ok(ts) = TrainingSet::new(points, labels, names) {
            return Ok(ts);
        }
        seed = seed.wrapping_add(1);
    }
}
