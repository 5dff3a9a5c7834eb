//! Algorithms driven by the nearest-enemy table: each point p owns the open
//! ball of radius ne_dist(p) around it, and any selected point inside that
//! ball necessarily shares p's label.
//!
//! Distances are compared squared; `sqrt` is monotone, so the packing and
//! covering guarantees carry over to true distances.

use crate::dataset::TrainingSet;
use crate::error::Result;
use crate::neighbors::{nearest_enemy_table, NeighborTable};

use super::{Algorithm, CondenseResult};

fn covered(ts: &TrainingSet, table: &NeighborTable, selected: &[usize], p: usize) -> bool {
    let r = table.ne_sq(p);
    selected.iter().any(|&s| ts.sq_dist(p, s) < r)
}

/// Relaxed Selective Subset: scanning by increasing nearest-enemy distance,
/// keep p unless some kept point already lies inside p's nearest-enemy ball.
pub fn rss(ts: &TrainingSet) -> Result<CondenseResult> {
    let table = nearest_enemy_table(ts)?;
    let mut selected = Vec::new();
    for p in table.order_by_ne_dist() {
        if !covered(ts, &table, &selected, p) {
            selected.push(p);
        }
    }
    Ok(CondenseResult::new(Algorithm::Rss, selected, 1))
}

/// Voronoi Selective Subset, reconstructed: an uncovered point is covered by
/// the same-class point inside its nearest-enemy ball that lies closest to
/// the nearest enemy itself (p is always a candidate).
pub fn vss(ts: &TrainingSet) -> Result<CondenseResult> {
    let table = nearest_enemy_table(ts)?;
    let classes = ts.members_by_class();
    let mut selected = Vec::new();
    for p in table.order_by_ne_dist() {
        if covered(ts, &table, &selected, p) {
            continue;
        }
        let radius = table.ne_sq(p);
        let enemy = table.ne_index(p);
        let mut best = (f64::INFINITY, usize::MAX);
        for &q in &classes[ts.label(p)] {
            if ts.sq_dist(p, q) < radius {
                let to_enemy = ts.sq_dist(q, enemy);
                if to_enemy < best.0 {
                    best = (to_enemy, q);
                }
            }
        }
        selected.push(best.1);
    }
    Ok(CondenseResult::new(Algorithm::Vss, selected, 1))
}

/// Modified Selective Subset, reconstructed: scanning by increasing
/// nearest-enemy distance, keep p iff it lies inside the nearest-enemy ball
/// of at least one point that is not yet covered.
pub fn mss(ts: &TrainingSet) -> Result<CondenseResult> {
    let table = nearest_enemy_table(ts)?;
    // only same-class points can fall inside a nearest-enemy ball
    let mut pending = ts.members_by_class();
    let mut selected = Vec::new();
    for p in table.order_by_ne_dist() {
        let list = &mut pending[ts.label(p)];
        let before = list.len();
        list.retain(|&q| ts.sq_dist(p, q) >= table.ne_sq(q));
        if list.len() < before {
            selected.push(p);
        }
    }
    Ok(CondenseResult::new(Algorithm::Mss, selected, 1))
}

/// NET: a γ-net of the training set for the margin γ, built greedily in
/// input order.
pub fn net(ts: &TrainingSet) -> Result<CondenseResult> {
    let table = nearest_enemy_table(ts)?;
    let margin_sq = (0..ts.len()).map(|i| table.ne_sq(i)).fold(f64::INFINITY, f64::min);
    let mut selected: Vec<usize> = Vec::new();
    for p in 0..ts.len() {
        if selected.iter().all(|&s| ts.sq_dist(p, s) >= margin_sq) {
            selected.push(p);
        }
    }
    Ok(CondenseResult::new(Algorithm::Net, selected, 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::condense::tests::{line_set, two_points};
    use crate::condense::{min_pairwise_distance, uncovered_points};

    #[test]
    fn line_set_traces() {
        let ts = line_set();
        assert_eq!(rss(&ts).unwrap().selection_order, vec![1, 2]);
        assert_eq!(vss(&ts).unwrap().selection_order, vec![1, 2]);
        assert_eq!(mss(&ts).unwrap().selection_order, vec![1, 2]);
        assert_eq!(net(&ts).unwrap().selection_order, vec![0, 2]);
    }

    #[test]
    fn two_points_keep_both() {
        let ts = two_points();
        for f in [rss, vss, mss, net] {
            assert_eq!(f(&ts).unwrap().subset.as_slice(), &[0, 1]);
        }
    }

    #[test]
    fn single_class_is_rejected() {
        let ts = TrainingSet::from_named(vec![vec![0.0], vec![1.0]], &["a", "a"]).unwrap();
        for f in [rss, vss, mss, net] {
            assert!(f(&ts).is_err());
        }
    }

    #[test]
    fn vss_picks_boundary_witness() {
        // class a at 0, 1, 2; class b at 3. Point 2 is uncovered first; its
        // ball (radius 1) holds only itself; then point 1 (radius 2) is
        // already covered by 2; point 0 (radius 3) too.
        let ts = TrainingSet::from_named(
            vec![vec![0.0], vec![1.0], vec![2.0], vec![3.0]],
            &["a", "a", "a", "b"],
        )
        .unwrap();
        assert_eq!(vss(&ts).unwrap().selection_order, vec![2, 3]);
    }

    #[test]
    fn packing_and_coverage_on_random_sets() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..40 {
            let n = rng.gen_range(4..150);
            let pts: Vec<Vec<f64>> = (0..n)
                .map(|_| (0..2).map(|_| rng.gen::<f64>()).collect())
                .collect();
            let labels: Vec<String> = (0..n).map(|_| rng.gen_range(0..3).to_string()).collect();
            let Ok(ts) = TrainingSet::from_named(pts, &labels) else { continue };
            if ts.num_classes() < 2 {
                continue;
            }
            let table = nearest_enemy_table(&ts).unwrap();
            let gamma = table.margin();
            for f in [rss, net] {
                let r = f(&ts).unwrap();
                assert!(min_pairwise_distance(&ts, &r.subset) >= gamma);
            }
            for f in [rss, vss, mss] {
                let r = f(&ts).unwrap();
                assert!(uncovered_points(&ts, &r.subset, &table).is_empty());
            }
        }
    }
}
