//! Uniform points labeled by the class of their nearest random site.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::{sq_distance, TrainingSet};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VoronoiParams {
    pub n: usize,
    pub d: usize,
    pub c: usize,
    pub sites: usize,
    pub seed: u64,
}

impl VoronoiParams {
    fn check(&self) -> Result<()> {
        if self.c < 2 || self.n < self.c {
            return Err(Error::invalid(format!(
                "need n >= c >= 2, got n = {}, c = {}",
                self.n, self.c
            )));
        }
        if self.sites < self.c {
            return Err(Error::invalid(format!(
                "need sites >= c, got sites = {}, c = {}",
                self.sites, self.c
            )));
        }
        if self.d == 0 {
            return Err(Error::invalid("dimension must be >= 1"));
        }
        Ok(())
    }

    /// Conventional dataset name, `v-n-d-c-sites`.
    pub fn name(&self) -> String {
        format!("v-{}-{}-{}-{}", self.n, self.d, self.c, self.sites)
    }
}

/// `sites` uniform sites in `[0,1]^d`, site k of class `k mod c`; `n`
/// uniform points, each labeled by its nearest site (lowest site on ties).
///
/// A draw that leaves a class empty is discarded and redrawn from `seed + 1`,
/// and so on, so the output is still a function of the parameters.
pub fn gen_voronoi(p: &VoronoiParams) -> Result<TrainingSet> {
    p.check()?;
    let mut seed = p.seed;
    loop {
        if let Some(ts) = draw(p, seed) {
            return Ok(ts);
        }
        seed = seed.wrapping_add(1);
    }
}

fn draw(p: &VoronoiParams, seed: u64) -> Option<TrainingSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut uniform = |k: usize| -> Vec<Vec<f64>> {
        (0..k).map(|_| (0..p.d).map(|_| rng.gen::<f64>()).collect()).collect()
    };
    let sites = uniform(p.sites);
    let points = uniform(p.n);
    let labels: Vec<usize> = points
        .iter()
        .map(|x| {
            let mut best = (f64::INFINITY, 0);
            for (k, s) in sites.iter().enumerate() {
                let sq = sq_distance(x, s);
                if sq < best.0 {
                    best = (sq, k);
                }
            }
            best.1 % p.c
        })
        .collect();
    let names = (0..p.c).map(|k| k.to_string()).collect();
    TrainingSet::new(points, labels, names).ok()
}
