//! Exact kd-tree for nearest-neighbor queries with lowest-index tie-breaking.
//!
//! Answers are bit-identical to a brute-force scan with [`sq_distance`]: a
//! subtree is skipped only when the squared gap to its splitting plane is
//! strictly larger than the best squared distance so far, and that gap never
//! exceeds the floating-point distance to any point behind the plane.
//! Points with identical coordinates are stored once, under their lowest index.
//! Farthest-point queries prune with per-node bounding boxes; the far-corner
//! distance of a box, summed in the same axis order, is never smaller than the
//! floating-point distance to any point inside it.

use std::collections::HashSet;

use crate::dataset::{coord_key, sq_distance, TrainingSet};

const LEAF_SIZE: usize = 8;

#[derive(Debug)]
enum Node {
    Leaf { start: usize, end: usize },
    Split { axis: usize, value: f64, left: usize, right: usize },
}

#[derive(Debug)]
pub(crate) struct KdTree {
    dim: usize,
    coords: Vec<f64>,
    ids: Vec<usize>,
    nodes: Vec<Node>,
    /// `lo` then `hi` per node, `2 * dim` values each.
    boxes: Vec<f64>,
}

impl KdTree {
    /// Builds over the given point indices of `ts`.
    pub(crate) fn build(ts: &TrainingSet, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut ids: Vec<usize> = indices.into_iter().collect();
        ids.sort_unstable();
        ids.dedup();
        let mut seen = HashSet::with_capacity(ids.len());
        ids.retain(|&i| seen.insert(coord_key(ts.point(i))));

        let dim = ts.dim();
        let mut tree = KdTree {
            dim,
            coords: Vec::new(),
            ids: Vec::new(),
            nodes: Vec::new(),
            boxes: Vec::new(),
        };
        if !ids.is_empty() {
            let len = ids.len();
            tree.build_node(ts, &mut ids, 0, len);
        }
        tree.coords = ids.iter().flat_map(|&i| ts.point(i).iter().copied()).collect();
        tree.ids = ids;
        tree
    }

    fn build_node(&mut self, ts: &TrainingSet, ids: &mut [usize], start: usize, end: usize) -> usize {
        let slot = self.nodes.len();
        self.nodes.push(Node::Leaf { start, end });
        let mut bbox = vec![f64::INFINITY; self.dim];
        bbox.extend(std::iter::repeat(f64::NEG_INFINITY).take(self.dim));
        for &i in &ids[start..end] {
            for (axis, &x) in ts.point(i).iter().enumerate() {
                bbox[axis] = bbox[axis].min(x);
                bbox[self.dim + axis] = bbox[self.dim + axis].max(x);
            }
        }
        self.boxes.extend_from_slice(&bbox);
        if end - start <= LEAF_SIZE {
            return slot;
        }

        let mut best_axis = 0;
        let mut best_spread = 0.0;
        for axis in 0..self.dim {
            let (lo, hi) = (bbox[axis], bbox[self.dim + axis]);
            if hi - lo > best_spread {
                best_spread = hi - lo;
                best_axis = axis;
            }
        }
        if best_spread <= 0.0 {
            return slot;
        }

        let mid = start + (end - start) / 2;
        ids[start..end].select_nth_unstable_by(mid - start, |&a, &b| {
            ts.point(a)[best_axis].total_cmp(&ts.point(b)[best_axis])
        });
        let value = ts.point(ids[mid])[best_axis];
        let left = self.build_node(ts, ids, start, mid);
        let right = self.build_node(ts, ids, mid, end);
        self.nodes[slot] = Node::Split {
            axis: best_axis,
            value,
            left,
            right,
        };
        slot
    }

    pub(crate) fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    /// Nearest stored point to `q` as `(squared distance, index)`.
    pub(crate) fn nearest(&self, q: &[f64]) -> Option<(f64, usize)> {
        self.nearest_filtered(q, |_, _| true)
    }

    /// Nearest stored point accepted by `accept(index, squared distance)`.
    pub(crate) fn nearest_filtered(
        &self,
        q: &[f64],
        accept: impl Fn(usize, f64) -> bool,
    ) -> Option<(f64, usize)> {
        if self.ids.is_empty() {
            return None;
        }
        let mut best = (f64::INFINITY, usize::MAX);
        self.search(0, q, &accept, &mut best);
        (best.1 != usize::MAX).then_some(best)
    }

    /// Largest squared distance from `q` to a stored point, or `floor` if no
    /// stored point is farther than that.
    pub(crate) fn farthest_sq(&self, q: &[f64], floor: f64) -> f64 {
        let mut best = floor;
        if !self.ids.is_empty() {
            self.search_far(0, q, &mut best);
        }
        best
    }

    fn far_corner_sq(&self, node: usize, q: &[f64]) -> f64 {
        let b = &self.boxes[node * 2 * self.dim..(node + 1) * 2 * self.dim];
        let mut sum = 0.0;
        for (axis, &x) in q.iter().enumerate() {
            let gap = (x - b[axis]).abs().max((x - b[self.dim + axis]).abs());
            sum += gap * gap;
        }
        sum
    }

    fn search_far(&self, node: usize, q: &[f64], best: &mut f64) {
        if self.far_corner_sq(node, q) <= *best {
            return;
        }
        match self.nodes[node] {
            Node::Leaf { start, end } => {
                for pos in start..end {
                    let p = &self.coords[pos * self.dim..(pos + 1) * self.dim];
                    *best = best.max(sq_distance(q, p));
                }
            }
            Node::Split { left, right, .. } => {
                let (l, r) = (self.far_corner_sq(left, q), self.far_corner_sq(right, q));
                let (first, second) = if l >= r { (left, right) } else { (right, left) };
                self.search_far(first, q, best);
                self.search_far(second, q, best);
            }
        }
    }

    fn search(
        &self,
        node: usize,
        q: &[f64],
        accept: &impl Fn(usize, f64) -> bool,
        best: &mut (f64, usize),
    ) {
        match self.nodes[node] {
            Node::Leaf { start, end } => {
                for pos in start..end {
                    let p = &self.coords[pos * self.dim..(pos + 1) * self.dim];
                    let sq = sq_distance(q, p);
                    let id = self.ids[pos];
                    if (sq < best.0 || (sq == best.0 && id < best.1)) && accept(id, sq) {
                        *best = (sq, id);
                    }
                }
            }
            Node::Split {
                axis,
                value,
                left,
                right,
            } => {
                let gap = q[axis] - value;
                let (near, far) = if gap <= 0.0 { (left, right) } else { (right, left) };
                self.search(near, q, accept, best);
                if gap * gap <= best.0 {
                    self.search(far, q, accept, best);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn brute(ts: &TrainingSet, ids: &[usize], q: &[f64]) -> Option<(f64, usize)> {
        let mut best: Option<(f64, usize)> = None;
        for &i in ids {
            let sq = sq_distance(q, ts.point(i));
            if best.map_or(true, |(b, bi)| sq < b || (sq == b && i < bi)) {
                best = Some((sq, i));
            }
        }
        best
    }

    #[test]
    fn matches_brute_force_on_lattice_with_ties() {
        // integer lattice with duplicates: plenty of exact ties
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let points: Vec<Vec<f64>> = (0..400)
            .map(|_| (0..3).map(|_| rng.gen_range(0..6) as f64).collect())
            .collect();
        let labels = vec!["a"; points.len()];
        let ts = TrainingSet::from_named(points, &labels).unwrap();
        let ids: Vec<usize> = (0..ts.len()).filter(|i| i % 3 != 0).collect();
        let tree = KdTree::build(&ts, ids.iter().copied());
        for _ in 0..300 {
            let q: Vec<f64> = (0..3).map(|_| rng.gen_range(-1..7) as f64 * 0.5).collect();
            assert_eq!(tree.nearest(&q), brute(&ts, &ids, &q));
        }
    }

    #[test]
    fn farthest_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let points: Vec<Vec<f64>> = (0..300)
            .map(|_| (0..3).map(|_| rng.gen_range(-5.0..5.0)).collect())
            .collect();
        let labels = vec!["a"; points.len()];
        let ts = TrainingSet::from_named(points, &labels).unwrap();
        let tree = KdTree::build(&ts, 0..ts.len());
        for _ in 0..100 {
            let q: Vec<f64> = (0..3).map(|_| rng.gen_range(-8.0..8.0)).collect();
            let brute = (0..ts.len()).map(|i| sq_distance(&q, ts.point(i))).fold(0.0, f64::max);
            assert_eq!(tree.farthest_sq(&q, 0.0), brute);
            assert_eq!(tree.farthest_sq(&q, brute + 1.0), brute + 1.0);
        }
    }

    #[test]
    fn filtered_query_skips_rejected() {
        let ts = TrainingSet::from_named(
            vec![vec![0.0], vec![1.0], vec![3.0]],
            &["a", "a", "a"],
        )
        .unwrap();
        let tree = KdTree::build(&ts, 0..3);
        assert_eq!(tree.nearest(&[0.0]), Some((0.0, 0)));
        assert_eq!(tree.nearest_filtered(&[0.0], |i, _| i != 0), Some((1.0, 1)));
        assert!(KdTree::build(&ts, []).nearest(&[0.0]).is_none());
    }
}
