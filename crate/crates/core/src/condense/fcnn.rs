//! FCNN and its single-representative variant.
//!
//! Both keep, for every unselected point, its nearest selected point and the
//! squared distance to it. Each round compares points only against the newly
//! selected ones, which gives O(n·m) total work for a subset of size m.

use crate::dataset::TrainingSet;
use crate::error::Result;

use super::{centroids, Algorithm, CondenseResult};

const NONE: usize = usize::MAX;

/// Nearest selected point of every unselected point.
struct Frontier<'a> {
    ts: &'a TrainingSet,
    selected: Vec<bool>,
    nearest: Vec<(f64, usize)>,
    order: Vec<usize>,
}

impl<'a> Frontier<'a> {
    fn new(ts: &'a TrainingSet) -> Self {
        let n = ts.len();
        Frontier {
            ts,
            selected: vec![false; n],
            nearest: vec![(f64::INFINITY, NONE); n],
            order: Vec::new(),
        }
    }

    fn select(&mut self, batch: &[usize]) {
        for &s in batch {
            debug_assert!(!self.selected[s]);
            self.selected[s] = true;
            self.order.push(s);
        }
        let ts = self.ts;
        for q in 0..ts.len() {
            if self.selected[q] {
                continue;
            }
            let p = ts.point(q);
            let best = &mut self.nearest[q];
            for &s in batch {
                let sq = crate::dataset::sq_distance(p, ts.point(s));
                if sq < best.0 || (sq == best.0 && s < best.1) {
                    *best = (sq, s);
                }
            }
        }
    }

    /// Misclassified unselected point `q` with its generating selected point.
    fn misclassified(&self) -> impl Iterator<Item = (usize, f64, usize)> + '_ {
        (0..self.ts.len()).filter_map(move |q| {
            let (sq, p) = self.nearest[q];
            (!self.selected[q] && self.ts.label(q) != self.ts.label(p)).then_some((q, sq, p))
        })
    }

    /// rep(p, voren(p)) for every selected p with a non-empty voren set, sorted
    /// by index. The voren sets partition the misclassified points, so the
    /// representatives are distinct.
    fn representatives(&self) -> Vec<usize> {
        let mut best: Vec<(f64, usize)> = vec![(f64::INFINITY, NONE); self.ts.len()];
        for (q, sq, p) in self.misclassified() {
            // q ascends, so a strict comparison keeps the lowest index on ties
            if sq < best[p].0 {
                best[p] = (sq, q);
            }
        }
        let mut reps: Vec<usize> = best.into_iter().map(|(_, q)| q).filter(|&q| q != NONE).collect();
        reps.sort_unstable();
        reps
    }

    /// The representative closest to its generating point, ties by index.
    fn closest_representative(&self) -> Option<usize> {
        self.misclassified()
            .fold(None, |acc: Option<(f64, usize)>, (q, sq, _)| match acc {
                Some((b, _)) if b <= sq => acc,
                _ => Some((sq, q)),
            })
            .map(|(_, q)| q)
    }
}

/// Fast Condensed Nearest Neighbor.
///
/// Starts from the class centroids; every round adds, for each selected point
/// p, the enemy in p's Voronoi cell closest to p. Stops when no selected
/// point has an enemy in its cell.
pub fn fcnn(ts: &TrainingSet) -> Result<CondenseResult> {
    let mut frontier = Frontier::new(ts);
    let mut batch = centroids(ts);
    let mut iterations = 0;
    while !batch.is_empty() {
        iterations += 1;
        frontier.select(&batch);
        batch = frontier.representatives();
    }
    Ok(CondenseResult::new(Algorithm::Fcnn, frontier.order, iterations))
}

/// Single FCNN: like [`fcnn`], but exactly one candidate joins per round.
///
/// The first round takes the centroid of class 0. Later rounds take the
/// representative closest to the selected point that generated it. Any two
/// selected points end up at least the margin apart.
pub fn sfcnn(ts: &TrainingSet) -> Result<CondenseResult> {
    let mut frontier = Frontier::new(ts);
    let mut next = centroids(ts).first().copied();
    let mut iterations = 0;
    while let Some(s) = next {
        iterations += 1;
        frontier.select(&[s]);
        next = frontier.closest_representative();
    }
    Ok(CondenseResult::new(Algorithm::Sfcnn, frontier.order, iterations))
}
