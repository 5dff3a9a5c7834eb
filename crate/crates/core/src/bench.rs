//! Benchmark protocol: seeded repeats, median wall time, normalized metrics,
//! and a hard failure on any inconsistent or nondeterministic output.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::condense::{condense, verify_consistent, Algorithm};
use crate::dataio::{read_dataset, ReadOptions, ResultsRow};
use crate::dataset::TrainingSet;
use crate::error::{Error, Result};
use crate::generators::{gen_adversarial, AdvParams};
use crate::neighbors::stats;

/// One results row per (dataset, algorithm).
pub type BenchRecord = ResultsRow;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchPlan {
    pub datasets: Vec<PathBuf>,
    pub algorithms: Vec<Algorithm>,
    pub repeats: usize,
    pub warmup: usize,
    pub seed: u64,
    pub parallel_datasets: bool,
}

impl Default for BenchPlan {
    fn default() -> Self {
        BenchPlan {
            datasets: Vec::new(),
            algorithms: Algorithm::ALL.to_vec(),
            repeats: 5,
            warmup: 1,
            seed: 0,
            parallel_datasets: false,
        }
    }
}

impl BenchPlan {
    fn check(&self) -> Result<()> {
        if self.repeats < 1 {
            return Err(Error::invalid("repeats must be >= 1"));
        }
        if self.algorithms.is_empty() {
            return Err(Error::invalid("no algorithms selected"));
        }
        Ok(())
    }
}

/// Dataset name used in results: the file stem.
pub fn dataset_name(path: &Path) -> String {
    path.file_stem()
        .map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned())
}

/// Reads every dataset of the plan and benchmarks it.
pub fn run_bench(plan: &BenchPlan) -> Result<Vec<BenchRecord>> {
    plan.check()?;
    let sets = plan
        .datasets
        .iter()
        .map(|p| Ok((dataset_name(p), read_dataset(p, &ReadOptions::default())?)))
        .collect::<Result<Vec<_>>>()?;
    run_bench_on(plan, &sets)
}

/// Benchmarks already loaded sets; `plan.datasets` is ignored.
///
/// Records come back in dataset order and, within a dataset, in the order of
/// `plan.algorithms`. Execution order within a dataset is shuffled with the
/// plan's seed so no algorithm always runs on a cold cache.
pub fn run_bench_on(plan: &BenchPlan, sets: &[(String, TrainingSet)]) -> Result<Vec<BenchRecord>> {
    plan.check()?;
    let per_set = |(k, (name, ts)): (usize, &(String, TrainingSet))| bench_dataset(plan, k, name, ts);
    let nested: Vec<Vec<BenchRecord>> = if plan.parallel_datasets {
        sets.par_iter().enumerate().map(per_set).collect::<Result<_>>()?
    } else {
        sets.iter().enumerate().map(per_set).collect::<Result<_>>()?
    };
    Ok(nested.into_iter().flatten().collect())
}

fn bench_dataset(plan: &BenchPlan, k: usize, name: &str, ts: &TrainingSet) -> Result<Vec<BenchRecord>> {
    let summary = stats(ts)?;
    let mut order: Vec<usize> = (0..plan.algorithms.len()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(plan.seed.wrapping_add(k as u64)));

    let mut rows: Vec<Option<BenchRecord>> = vec![None; plan.algorithms.len()];
    for a in order {
        let algo = plan.algorithms[a];
        for _ in 0..plan.warmup {
            condense(ts, algo)?;
        }
        let mut times = Vec::with_capacity(plan.repeats);
        let mut subset = None;
        for _ in 0..plan.repeats {
            let start = Instant::now();
            let result = condense(ts, algo)?;
            times.push(start.elapsed().as_nanos() as u64);
            match &subset {
                None => subset = Some(result.subset),
                Some(s) if *s != result.subset => {
                    return Err(Error::Nondeterministic {
                        dataset: name.to_string(),
                        algorithm: algo.to_string(),
                    })
                }
                Some(_) => {}
            }
        }
        let subset = subset.expect("repeats >= 1");
        let check = verify_consistent(ts, &subset)?;
        if let Some(counterexample) = check.counterexample {
            return Err(Error::Inconsistent {
                dataset: name.to_string(),
                algorithm: algo.to_string(),
                counterexample,
            });
        }
        rows[a] = Some(ResultsRow::new(
            name,
            algo.name(),
            (summary.n, summary.d, summary.c),
            summary.kappa,
            summary.gamma_norm,
            subset.len(),
            median(&mut times),
            true,
            plan.repeats,
            plan.seed,
        ));
    }
    Ok(rows.into_iter().map(|r| r.expect("every algorithm ran")).collect())
}

/// Upper median, so the value is always one of the measurements.
fn median(times: &mut [u64]) -> u64 {
    times.sort_unstable();
    times[times.len() / 2]
}

/// Fixed-width table of the records, one line per row.
pub fn format_summary(records: &[BenchRecord]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<16} {:<6} {:>7} {:>6} {:>8} {:>10} {:>14}",
        "dataset", "algo", "n", "kappa", "size", "size/kappa", "ns/point"
    );
    for r in records {
        let _ = writeln!(
            out,
            "{:<16} {:<6} {:>7} {:>6} {:>8} {:>10.3} {:>14.1}",
            r.dataset, r.algorithm, r.n, r.kappa, r.subset_size, r.size_over_kappa, r.runtime_ns_per_point
        );
    }
    out
}

/// Subset sizes of fcnn, sfcnn and rss on the layered set for one `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub t: u32,
    pub n: usize,
    pub kappa: usize,
    pub fcnn_size: usize,
    pub sfcnn_size: usize,
    pub rss_size: usize,
    pub fcnn_ratio: f64,
    pub sfcnn_ratio: f64,
    pub rss_ratio: f64,
}

/// Generates the layered set for every `t` and records each algorithm's
/// subset size over κ. Every subset is verified.
pub fn ratio_sweep(t_values: &[u32]) -> Result<Vec<SweepRow>> {
    if let Some(t) = t_values.iter().find(|t| !(4..=8).contains(*t)) {
        return Err(Error::invalid(format!("sweep values must lie in [4, 8], got {t}")));
    }
    t_values
        .iter()
        .map(|&t| {
            let (ts, _) = gen_adversarial(&AdvParams::new(t)?)?;
            let kappa = stats(&ts)?.kappa;
            let name = format!("adversarial-t{t}");
            let size = |algo: Algorithm| -> Result<usize> {
                let r = condense(&ts, algo)?;
                if let Some(counterexample) = verify_consistent(&ts, &r.subset)?.counterexample {
                    return Err(Error::Inconsistent {
                        dataset: name.clone(),
                        algorithm: algo.to_string(),
                        counterexample,
                    });
                }
                Ok(r.len())
            };
            let (fcnn_size, sfcnn_size, rss_size) =
                (size(Algorithm::Fcnn)?, size(Algorithm::Sfcnn)?, size(Algorithm::Rss)?);
            let ratio = |s: usize| s as f64 / kappa as f64;
            Ok(SweepRow {
                t,
                n: ts.len(),
                kappa,
                fcnn_size,
                sfcnn_size,
                rss_size,
                fcnn_ratio: ratio(fcnn_size),
                sfcnn_ratio: ratio(sfcnn_size),
                rss_ratio: ratio(rss_size),
            })
        })
        .collect()
}

pub fn write_sweep(rows: &[SweepRow], path: impl AsRef<Path>) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_sweep(path: impl AsRef<Path>) -> Result<Vec<SweepRow>> {
    let mut r = csv::Reader::from_path(path)?;
    r.deserialize().map(|row| Ok(row?)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundled;

    fn iris() -> Vec<(String, TrainingSet)> {
        vec![("iris".to_string(), bundled::load("iris").unwrap())]
    }

    #[test]
    fn iris_rows_report_kappa() {
        let plan = BenchPlan {
            algorithms: vec![Algorithm::Fcnn, Algorithm::Sfcnn],
            repeats: 3,
            ..Default::default()
        };
        let rows = run_bench_on(&plan, &iris()).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].algorithm, "fcnn");
        assert_eq!(rows[1].algorithm, "sfcnn");
        for r in &rows {
            assert_eq!(r.kappa, 20);
            assert!(r.consistent);
            assert_eq!(r.repeats, 3);
        }
    }

    #[test]
    fn sizes_do_not_depend_on_parallelism_or_seed() {
        let mut sets = iris();
        sets.push(("wine".to_string(), bundled::load("wine").unwrap()));
        let base = BenchPlan {
            repeats: 1,
            warmup: 0,
            ..Default::default()
        };
        let sizes = |plan: &BenchPlan| -> Vec<(String, String, usize)> {
            run_bench_on(plan, &sets)
                .unwrap()
                .into_iter()
                .map(|r| (r.dataset, r.algorithm, r.subset_size))
                .collect()
        };
        let a = sizes(&base);
        assert_eq!(a, sizes(&BenchPlan { parallel_datasets: true, ..base.clone() }));
        assert_eq!(a, sizes(&BenchPlan { seed: 99, ..base }));
    }

    #[test]
    fn rejects_zero_repeats() {
        let plan = BenchPlan {
            repeats: 0,
            ..Default::default()
        };
        assert!(run_bench_on(&plan, &iris()).is_err());
    }

    #[test]
    fn median_picks_a_measurement() {
        assert_eq!(median(&mut [5, 1, 3]), 3);
        assert_eq!(median(&mut [4, 1]), 4);
    }

    #[test]
    fn sweep_rejects_out_of_range() {
        assert!(ratio_sweep(&[3]).is_err());
        assert!(ratio_sweep(&[9]).is_err());
    }

    #[test]
    fn sweep_round_trip() {
        let rows = ratio_sweep(&[4]).unwrap();
        assert!(rows[0].fcnn_ratio > rows[0].sfcnn_ratio);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sweep.csv");
        write_sweep(&rows, &path).unwrap();
        assert_eq!(read_sweep(&path).unwrap(), rows);
    }
}
