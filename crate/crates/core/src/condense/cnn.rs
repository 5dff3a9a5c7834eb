use crate::dataset::TrainingSet;
use crate::error::Result;

use super::{Algorithm, CondenseResult};

/// Hart's Condensed Nearest Neighbor.
///
/// Seeds with the first point of each class, then sweeps the input in order,
/// adding every point misclassified by the current subset, until a sweep adds
/// nothing. Each point caches its nearest selected point and how much of the
/// selection it has already seen, so a revisit only scans newer additions.
pub fn cnn(ts: &TrainingSet) -> Result<CondenseResult> {
    let n = ts.len();
    let mut order: Vec<usize> = ts.members_by_class().iter().map(|m| m[0]).collect();
    order.sort_unstable();

    let mut selected = vec![false; n];
    for &s in &order {
        selected[s] = true;
    }
    let mut nearest = vec![(f64::INFINITY, usize::MAX); n];
    let mut seen = vec![0usize; n];

    let mut passes = 0;
    loop {
        passes += 1;
        let mut added = false;
        for q in 0..n {
            if selected[q] {
                continue;
            }
            let best = &mut nearest[q];
            for &s in &order[seen[q]..] {
                let sq = ts.sq_dist(q, s);
                if sq < best.0 || (sq == best.0 && s < best.1) {
                    *best = (sq, s);
                }
            }
            seen[q] = order.len();
            if ts.label(best.1) != ts.label(q) {
                selected[q] = true;
                order.push(q);
                added = true;
            }
        }
        if !added {
            break;
        }
    }
    Ok(CondenseResult::new(Algorithm::Cnn, order, passes))
}
