//! Nearest enemies and the complexity measures built on them.
//!
//! All searches break ties toward the lowest point index. The brute-force
//! scans here are the reference; the kd-tree paths must agree with them
//! exactly.

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::{coord_key, sq_distance, IndexSubset, TrainingSet};
use crate::error::{Error, Result};
use crate::kdtree::KdTree;

/// Nearest enemy of every point.
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborTable {
    ne_index: Vec<usize>,
    ne_sq: Vec<f64>,
}

impl NeighborTable {
    pub fn len(&self) -> usize {
        self.ne_index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ne_index.is_empty()
    }

    /// Index of the nearest enemy of point `i`.
    pub fn ne_index(&self, i: usize) -> usize {
        self.ne_index[i]
    }

    pub fn ne_dist(&self, i: usize) -> f64 {
        self.ne_sq[i].sqrt()
    }

    pub(crate) fn ne_sq(&self, i: usize) -> f64 {
        self.ne_sq[i]
    }

    /// Number of distinct nearest-enemy points.
    pub fn kappa(&self) -> usize {
        self.ne_index.iter().collect::<HashSet<_>>().len()
    }

    /// The distinct nearest-enemy points, sorted.
    pub fn enemy_points(&self) -> IndexSubset {
        IndexSubset::from_unsorted(self.ne_index.clone())
    }

    /// Smallest nearest-enemy distance (the margin, unnormalized).
    pub fn margin(&self) -> f64 {
        self.ne_sq.iter().copied().fold(f64::INFINITY, f64::min).sqrt()
    }

    /// Point indices sorted by increasing nearest-enemy distance, ties by index.
    pub(crate) fn order_by_ne_dist(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&a, &b| self.ne_sq[a].total_cmp(&self.ne_sq[b]).then(a.cmp(&b)));
        order
    }
}

/// Exact nearest-enemy table using per-class kd-trees.
pub fn nearest_enemy_table(ts: &TrainingSet) -> Result<NeighborTable> {
    ts.require_enemies()?;
    let trees: Vec<KdTree> = ts
        .members_by_class()
        .into_iter()
        .map(|members| KdTree::build(ts, members))
        .collect();
    // coincident points share a label, so one query per distinct location
    let mut rep: HashMap<_, usize> = HashMap::with_capacity(ts.len());
    let owner: Vec<usize> = (0..ts.len())
        .map(|i| *rep.entry(coord_key(ts.point(i))).or_insert(i))
        .collect();
    let answers: Vec<(usize, f64)> = (0..ts.len())
        .into_par_iter()
        .map(|i| {
            if owner[i] != i {
                return (usize::MAX, f64::NAN);
            }
            let own = ts.label(i);
            let q = ts.point(i);
            let mut best = (f64::INFINITY, usize::MAX);
            for (class, tree) in trees.iter().enumerate() {
                if class == own {
                    continue;
                }
                if let Some((sq, j)) = tree.nearest(q) {
                    if sq < best.0 || (sq == best.0 && j < best.1) {
                        best = (sq, j);
                    }
                }
            }
            (best.1, best.0)
        })
        .collect();
    let (ne_index, ne_sq) = owner.iter().map(|&o| answers[o]).unzip();
    Ok(NeighborTable { ne_index, ne_sq })
}

/// Reference O(n²) nearest-enemy table.
pub fn nearest_enemy_table_brute(ts: &TrainingSet) -> Result<NeighborTable> {
    ts.require_enemies()?;
    let n = ts.len();
    let mut ne_index = vec![usize::MAX; n];
    let mut ne_sq = vec![f64::INFINITY; n];
    for i in 0..n {
        for j in 0..n {
            if ts.label(j) == ts.label(i) {
                continue;
            }
            let sq = ts.sq_dist(i, j);
            if sq < ne_sq[i] {
                ne_sq[i] = sq;
                ne_index[i] = j;
            }
        }
    }
    Ok(NeighborTable { ne_index, ne_sq })
}

/// Nearest member of `subset` to point `q`, as `(index, distance)`.
pub fn nearest_in_subset(q: usize, ts: &TrainingSet, subset: &IndexSubset) -> Result<(usize, f64)> {
    if subset.is_empty() {
        return Err(Error::invalid("nearest neighbor in an empty subset"));
    }
    let p = ts.point(q);
    let mut best = (usize::MAX, f64::INFINITY);
    for r in subset.iter() {
        let sq = sq_distance(p, ts.point(r));
        if sq < best.1 {
            best = (r, sq);
        }
    }
    Ok((best.0, best.1.sqrt()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsSummary {
    pub n: usize,
    pub d: usize,
    pub c: usize,
    pub kappa: usize,
    pub kappa_pct: f64,
    pub gamma_raw: f64,
    pub diameter: f64,
    pub gamma_norm: f64,
    pub spread: f64,
}

pub fn stats(ts: &TrainingSet) -> Result<StatsSummary> {
    let table = nearest_enemy_table(ts)?;
    Ok(stats_with_table(ts, &table))
}

pub fn stats_with_table(ts: &TrainingSet, table: &NeighborTable) -> StatsSummary {
    let kappa = table.kappa();
    let gamma_raw = table.margin();
    let diameter = diameter(ts);
    StatsSummary {
        n: ts.len(),
        d: ts.dim(),
        c: ts.num_classes(),
        kappa,
        kappa_pct: 100.0 * kappa as f64 / ts.len() as f64,
        gamma_raw,
        diameter,
        gamma_norm: gamma_raw / diameter,
        spread: diameter / min_nonzero_distance(ts),
    }
}

fn unique_points(ts: &TrainingSet) -> Vec<usize> {
    let mut seen = HashMap::with_capacity(ts.len());
    (0..ts.len())
        .filter(|&i| seen.insert(coord_key(ts.point(i)), ()).is_none())
        .collect()
}

/// Largest pairwise distance.
///
/// Each distinct point runs a farthest-point query against a kd-tree, with
/// the best value so far as the pruning floor. The result equals the full
/// O(n²) maximum.
pub fn diameter(ts: &TrainingSet) -> f64 {
    let pts = unique_points(ts);
    if pts.len() < 2 {
        return 0.0;
    }
    let tree = KdTree::build(ts, pts.iter().copied());
    // a farthest-point hop from an arbitrary start seeds a tight floor
    let start = tree.farthest_sq(ts.point(pts[0]), 0.0);
    pts.iter()
        .fold(start, |best, &i| tree.farthest_sq(ts.point(i), best))
        .sqrt()
}

/// Smallest distance between two points with different coordinates.
pub fn min_nonzero_distance(ts: &TrainingSet) -> f64 {
    let pts = unique_points(ts);
    let tree = KdTree::build(ts, pts.iter().copied());
    pts.par_iter()
        .filter_map(|&i| tree.nearest_filtered(ts.point(i), |j, sq| j != i && sq > 0.0))
        .map(|(sq, _)| sq)
        .reduce(|| f64::INFINITY, f64::min)
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    pub(crate) fn line_set() -> TrainingSet {
        TrainingSet::from_named(
            vec![vec![0.0], vec![1.0], vec![3.0], vec![4.0]],
            &["A", "A", "B", "B"],
        )
        .unwrap()
    }

    #[test]
    fn line_set_nearest_enemies() {
        let ts = line_set();
        for table in [nearest_enemy_table(&ts).unwrap(), nearest_enemy_table_brute(&ts).unwrap()] {
            let got: Vec<(usize, f64)> = (0..4).map(|i| (table.ne_index(i), table.ne_dist(i))).collect();
            assert_eq!(got, vec![(2, 3.0), (2, 2.0), (1, 2.0), (1, 3.0)]);
        }
    }

    #[test]
    fn two_points_are_mutual_enemies() {
        let ts = TrainingSet::from_named(vec![vec![0.0, 0.0], vec![0.0, 1.0]], &["a", "b"]).unwrap();
        let t = nearest_enemy_table(&ts).unwrap();
        assert_eq!((t.ne_index(0), t.ne_index(1)), (1, 0));
        let s = stats(&ts).unwrap();
        assert_eq!((s.kappa, s.gamma_raw, s.diameter, s.gamma_norm), (2, 1.0, 1.0, 1.0));
    }

    #[test]
    fn equidistant_enemies_resolve_to_lowest_index() {
        // point 0 has enemies at indices 4 and 7, both at distance 1
        let mut pts = vec![vec![0.0, 0.0]];
        let mut labels = vec!["a"];
        for k in 1..8 {
            match k {
                4 => pts.push(vec![1.0, 0.0]),
                7 => pts.push(vec![0.0, -1.0]),
                _ => pts.push(vec![5.0 + k as f64, 5.0]),
            }
            labels.push(if k == 4 || k == 7 { "b" } else { "a" });
        }
        let ts = TrainingSet::from_named(pts, &labels).unwrap();
        assert_eq!(nearest_enemy_table(&ts).unwrap().ne_index(0), 4);
        assert_eq!(nearest_enemy_table_brute(&ts).unwrap().ne_index(0), 4);
    }

    #[test]
    fn single_class_has_no_enemies() {
        let ts = TrainingSet::from_named(vec![vec![0.0], vec![1.0]], &["a", "a"]).unwrap();
        assert!(matches!(nearest_enemy_table(&ts), Err(Error::NoEnemies)));
        assert!(matches!(stats(&ts), Err(Error::NoEnemies)));
    }

    #[test]
    fn nearest_in_subset_examples() {
        let ts = line_set();
        let r = IndexSubset::from_unsorted(vec![0, 2]);
        assert_eq!(nearest_in_subset(1, &ts, &r).unwrap(), (0, 1.0));
        assert_eq!(nearest_in_subset(2, &ts, &r).unwrap(), (2, 0.0));
        // x1 = 1.0 is equidistant from 0.0 and 2.0
        let ts2 = TrainingSet::from_named(vec![vec![0.0], vec![1.0], vec![2.0]], &["a", "b", "a"]).unwrap();
        let r2 = IndexSubset::from_unsorted(vec![0, 2]);
        assert_eq!(nearest_in_subset(1, &ts2, &r2).unwrap(), (0, 1.0));
        assert!(nearest_in_subset(0, &ts, &IndexSubset::default()).is_err());
    }

    #[test]
    fn line_set_stats() {
        let s = stats(&line_set()).unwrap();
        assert_eq!(s.kappa, 2);
        assert_eq!(s.gamma_raw, 2.0);
        assert_eq!(s.diameter, 4.0);
        assert_eq!(s.gamma_norm, 0.5);
        assert_eq!(s.spread, 4.0);
        assert_eq!(s.kappa_pct, 50.0);
    }

    #[test]
    fn spread_ignores_same_label_duplicates() {
        let ts = TrainingSet::from_named(
            vec![vec![0.0], vec![0.0], vec![2.0], vec![8.0]],
            &["a", "a", "a", "b"],
        )
        .unwrap();
        assert_eq!(min_nonzero_distance(&ts), 2.0);
        assert_eq!(stats(&ts).unwrap().spread, 4.0);
    }

    fn labeled_cloud() -> impl Strategy<Value = TrainingSet> {
        (1usize..5, 2usize..5, 2usize..120).prop_flat_map(|(d, c, n)| {
            // a coarse grid makes exact distance ties common
            (
                prop::collection::vec(prop::collection::vec(0i32..7, d), n),
                prop::collection::vec(0..c, n),
                Just(c),
            )
                .prop_filter_map("needs a valid set with >= 2 classes", |(pts, labels, _c)| {
                    // duplicates get one shared label so no enemy pair coincides
                    let mut first = std::collections::HashMap::new();
                    let names: Vec<String> = pts
                        .iter()
                        .zip(&labels)
                        .map(|(p, l)| first.entry(p.clone()).or_insert(*l).to_string())
                        .collect();
                    let pts: Vec<Vec<f64>> = pts
                        .into_iter()
                        .map(|p| p.into_iter().map(|x| x as f64 * 0.25).collect())
                        .collect();
                    TrainingSet::from_named(pts, &names)
                        .ok()
                        .filter(|ts| ts.num_classes() >= 2)
                })
        })
    }

    fn brute_diameter(ts: &TrainingSet) -> f64 {
        let mut best: f64 = 0.0;
        for i in 0..ts.len() {
            for j in 0..ts.len() {
                best = best.max(ts.sq_dist(i, j));
            }
        }
        best.sqrt()
    }

    proptest! {
        #[test]
        fn kd_table_equals_brute_force(ts in labeled_cloud()) {
            prop_assert_eq!(nearest_enemy_table(&ts).unwrap(), nearest_enemy_table_brute(&ts).unwrap());
        }

        #[test]
        fn stats_invariants(ts in labeled_cloud()) {
            let s = stats(&ts).unwrap();
            prop_assert!(s.kappa >= 2 && s.kappa <= s.n);
            prop_assert!(s.gamma_norm > 0.0 && s.gamma_norm <= 1.0);
            prop_assert_eq!(s.diameter, brute_diameter(&ts));
            // 1/gamma <= spread, up to the rounding of two divisions
            prop_assert!(s.gamma_raw >= min_nonzero_distance(&ts));
            prop_assert!(1.0 / s.gamma_norm <= s.spread * (1.0 + 4.0 * f64::EPSILON));
        }

        #[test]
        fn table_is_deterministic(ts in labeled_cloud()) {
            prop_assert_eq!(nearest_enemy_table(&ts).unwrap(), nearest_enemy_table(&ts.clone()).unwrap());
        }
    }
}
