//! Post-hoc checks on condensed subsets: consistency, packing, coverage, and
//! the SFCNN size bound.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::dataset::{IndexSubset, TrainingSet};
use crate::error::{Error, Result};
use crate::kdtree::KdTree;
use crate::neighbors::{stats, NeighborTable};

use super::{Algorithm, CondenseResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Consistency {
    pub consistent: bool,
    /// First point (by index) whose nearest subset member has another label.
    pub counterexample: Option<usize>,
}

/// Checks that every point has a nearest subset member of its own class.
///
/// Under exact distance ties the check is weak: it passes when at least one
/// of the equally near members shares the point's label.
pub fn verify_consistent(ts: &TrainingSet, subset: &IndexSubset) -> Result<Consistency> {
    if subset.is_empty() {
        return Err(Error::invalid("cannot verify an empty subset"));
    }
    if let Some(&last) = subset.as_slice().last() {
        if last >= ts.len() {
            return Err(Error::invalid(format!(
                "subset index {last} out of range for n = {}",
                ts.len()
            )));
        }
    }
    let mut members = vec![Vec::new(); ts.num_classes()];
    for r in subset.iter() {
        members[ts.label(r)].push(r);
    }
    let trees: Vec<KdTree> = members.into_iter().map(|m| KdTree::build(ts, m)).collect();

    let counterexample = (0..ts.len()).into_par_iter().find_first(|&p| {
        let own = ts.label(p);
        let q = ts.point(p);
        let same = trees[own].nearest(q).map_or(f64::INFINITY, |b| b.0);
        trees
            .iter()
            .enumerate()
            .filter(|&(c, t)| c != own && !t.is_empty())
            .any(|(_, t)| t.nearest(q).is_some_and(|(sq, _)| sq < same))
    });
    Ok(Consistency {
        consistent: counterexample.is_none(),
        counterexample,
    })
}

/// Smallest distance between two distinct members (infinite for fewer than two).
pub fn min_pairwise_distance(ts: &TrainingSet, subset: &IndexSubset) -> f64 {
    let s = subset.as_slice();
    let mut best = f64::INFINITY;
    for (k, &a) in s.iter().enumerate() {
        for &b in &s[k + 1..] {
            best = best.min(ts.sq_dist(a, b));
        }
    }
    best.sqrt()
}

/// Points with no subset member strictly inside their nearest-enemy ball.
pub fn uncovered_points(ts: &TrainingSet, subset: &IndexSubset, table: &NeighborTable) -> Vec<usize> {
    (0..ts.len())
        .filter(|&p| !subset.iter().any(|s| ts.sq_dist(p, s) < table.ne_sq(p)))
        .collect()
}

/// Largest integer `i` with `margin · 2^i <= dist`. Scaling by a power of two
/// is exact, so the bucket boundary is compared without rounding error.
pub fn bucket_index(dist: f64, margin: f64) -> i32 {
    let mut i = (dist / margin).log2().floor() as i32;
    while margin * 2f64.powi(i + 1) <= dist {
        i += 1;
    }
    while margin * 2f64.powi(i) > dist {
        i -= 1;
    }
    i
}

/// Pairs of subset members that share a nearest enemy `e` and a distance
/// bucket `i` (see [`bucket_index`]) yet lie closer than `margin · 2^i`.
/// For an SFCNN subset this list is empty.
pub fn bucket_separation_violations(
    ts: &TrainingSet,
    subset: &IndexSubset,
    table: &NeighborTable,
) -> Vec<(usize, usize)> {
    let margin = table.margin();
    let mut groups: HashMap<(usize, i32), Vec<usize>> = HashMap::new();
    for r in subset.iter() {
        let e = table.ne_index(r);
        groups.entry((e, bucket_index(ts.dist(r, e), margin))).or_default().push(r);
    }
    let mut out = Vec::new();
    for ((_, i), members) in groups {
        let sigma = margin * 2f64.powi(i);
        for (k, &a) in members.iter().enumerate() {
            for &b in &members[k + 1..] {
                if ts.dist(a, b) < sigma {
                    out.push((a.min(b), a.max(b)));
                }
            }
        }
    }
    out.sort_unstable();
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    /// |R|
    pub lhs: u64,
    /// κ · max(1, ⌈log2(1/γ)⌉) · 4^(ddim+1), saturating at `u64::MAX`.
    pub rhs: u64,
    pub kappa: usize,
    pub gamma_norm: f64,
    pub log_factor: u32,
    pub assumed_ddim: u32,
    pub holds: bool,
}

/// Smallest `k >= 1` with `gamma · 2^k >= 1`, i.e. `max(1, ⌈log2(1/gamma)⌉)`.
fn log_factor(gamma_norm: f64) -> u32 {
    let mut k = 1u32;
    while gamma_norm * 2f64.powi(k as i32) < 1.0 {
        k += 1;
    }
    k
}

/// Compares an SFCNN subset against its size bound, with the margin taken on
/// the diameter-normalized set.
pub fn sfcnn_bound_check(
    ts: &TrainingSet,
    result: &CondenseResult,
    assumed_ddim: u32,
) -> Result<BoundReport> {
    if result.algorithm != Algorithm::Sfcnn {
        return Err(Error::invalid(format!(
            "bound check applies to sfcnn output, got {}",
            result.algorithm
        )));
    }
    if assumed_ddim < 1 {
        return Err(Error::invalid("assumed doubling dimension must be >= 1"));
    }
    let stats = stats(ts)?;
    let log_factor = log_factor(stats.gamma_norm);
    let packing = 4u64.checked_pow(assumed_ddim + 1);
    let rhs = packing
        .and_then(|p| p.checked_mul(log_factor as u64))
        .and_then(|p| p.checked_mul(stats.kappa as u64))
        .unwrap_or(u64::MAX);
    let lhs = result.len() as u64;
    Ok(BoundReport {
        lhs,
        rhs,
        kappa: stats.kappa,
        gamma_norm: stats.gamma_norm,
        log_factor,
        assumed_ddim,
        holds: lhs <= rhs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::condense::tests::{line_set, two_points};
    use crate::condense::{sfcnn, Algorithm};
    use crate::neighbors::nearest_in_subset;
    use proptest::prelude::*;

    fn brute_consistency(ts: &TrainingSet, r: &IndexSubset) -> Option<usize> {
        (0..ts.len()).find(|&p| {
            let (_, d) = nearest_in_subset(p, ts, r).unwrap();
            !r.iter().any(|s| ts.dist(p, s) == d && ts.label(s) == ts.label(p))
        })
    }

    #[test]
    fn verify_examples() {
        let ts = line_set();
        assert!(verify_consistent(&ts, &IndexSubset::all(4)).unwrap().consistent);
        let c = verify_consistent(&ts, &IndexSubset::from_unsorted(vec![0])).unwrap();
        assert_eq!(c.counterexample, Some(2));
        assert!(verify_consistent(&ts, &IndexSubset::from_unsorted(vec![1, 2])).unwrap().consistent);
        assert!(verify_consistent(&ts, &IndexSubset::default()).is_err());
    }

    #[test]
    fn weak_consistency_under_ties() {
        // point 1 is equidistant from 0 (its class) and 2 (enemy)
        let ts = TrainingSet::from_named(vec![vec![0.0], vec![1.0], vec![2.0]], &["a", "a", "b"]).unwrap();
        let r = IndexSubset::from_unsorted(vec![0, 2]);
        assert!(verify_consistent(&ts, &r).unwrap().consistent);
        assert_eq!(brute_consistency(&ts, &r), None);
    }

    #[test]
    fn bucket_index_is_exact_at_powers_of_two() {
        assert_eq!(bucket_index(1.0, 1.0), 0);
        assert_eq!(bucket_index(1.999, 1.0), 0);
        assert_eq!(bucket_index(2.0, 1.0), 1);
        assert_eq!(bucket_index(0.75, 0.25), 1);
        assert_eq!(bucket_index(3.0 * 0.1, 0.1), 1);
        // 0.1 * 4 rounds to exactly 0.4
        assert_eq!(bucket_index(0.4, 0.1), 2);
    }

    #[test]
    fn degenerate_log_factor() {
        let ts = two_points();
        let r = sfcnn(&ts).unwrap();
        let b = sfcnn_bound_check(&ts, &r, 1).unwrap();
        assert_eq!((b.lhs, b.rhs, b.log_factor, b.holds), (2, 32, 1, true));
        assert!(sfcnn_bound_check(&ts, &r, 0).is_err());
        let mut other = r.clone();
        other.algorithm = Algorithm::Fcnn;
        assert!(sfcnn_bound_check(&ts, &other, 1).is_err());
    }

    #[test]
    fn bound_saturates() {
        let ts = two_points();
        let r = sfcnn(&ts).unwrap();
        assert_eq!(sfcnn_bound_check(&ts, &r, 64).unwrap().rhs, u64::MAX);
    }

    #[test]
    fn log_factor_values() {
        assert_eq!(log_factor(1.0), 1);
        assert_eq!(log_factor(0.5), 1);
        assert_eq!(log_factor(0.49), 2);
        assert_eq!(log_factor(0.25), 2);
        assert_eq!(log_factor(0.1), 4);
    }

    proptest! {
        #[test]
        fn kd_verification_equals_brute(
            pts in prop::collection::vec((0i32..5, 0i32..5), 3..60),
            labels in prop::collection::vec(0usize..3, 60),
            mask in prop::collection::vec(any::<bool>(), 60),
        ) {
            let points: Vec<Vec<f64>> = pts.iter().map(|&(x, y)| vec![x as f64, y as f64]).collect();
            let names: Vec<String> = labels[..points.len()].iter().map(|l| l.to_string()).collect();
            let Ok(ts) = TrainingSet::from_named(points, &names) else { return Ok(()) };
            let r = IndexSubset::from_unsorted((0..ts.len()).filter(|&i| mask[i]).collect());
            prop_assume!(!r.is_empty());
            let got = verify_consistent(&ts, &r).unwrap();
            prop_assert_eq!(got.counterexample, brute_consistency(&ts, &r));
        }
    }
}
