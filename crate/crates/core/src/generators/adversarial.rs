//! The layered training set in R³ on which FCNN selects Θ(κ·2^t) points
//! while SFCNN stays within a constant factor of κ.
//!
//! Layers are stacked along the z axis around backbone points
//! `c_i = (0, 0, 2i)`. Every layer is a center plus points on the unit circle
//! around it:
//!
//! * `B`: red `c_0` and eight singleton classes `y_1..y_8` around it;
//! * `M_i`, `i = 1..t-3`: each multiplies the number of points FCNN selects
//!   per round by two;
//! * `R_i`, `i = t-2..2^t`: each keeps FCNN selecting `2^t` points per round
//!   while adding only a constant number of nearest-enemy points;
//! * `F`: far-away mass that pins the class centroids of blue, white and red.

use std::f64::consts::PI;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::dataset::TrainingSet;
use crate::error::{Error, Result};

pub const RED: &str = "red";
pub const BLUE: &str = "blue";
pub const WHITE: &str = "white";

#[derive(Debug, Clone, PartialEq)]
pub struct AdvParams {
    pub t: u32,
    /// x-coordinate of the far-blue anchor; `None` means
    /// 100 × (max backbone z + 1).
    pub far_scale: Option<f64>,
    /// Each far anchor carries `mass_factor · N + 1` copies, where N is the
    /// class's main-structure count.
    pub mass_factor: usize,
}

impl AdvParams {
    pub fn new(t: u32) -> Result<Self> {
        let p = AdvParams {
            t,
            far_scale: None,
            mass_factor: 2,
        };
        p.check()?;
        Ok(p)
    }

    fn check(&self) -> Result<()> {
        if !(4..=12).contains(&self.t) {
            return Err(Error::invalid(format!("t must lie in [4, 12], got {}", self.t)));
        }
        if self.mass_factor < 1 {
            return Err(Error::invalid("mass factor must be >= 1"));
        }
        if let Some(d) = self.far_scale {
            if !(d.is_finite() && d > 0.0) {
                return Err(Error::invalid(format!("far-field scale must be positive, got {d}")));
            }
        }
        Ok(())
    }

    /// ξ = 2^-t, exact.
    pub fn xi(&self) -> f64 {
        2f64.powi(-(self.t as i32))
    }

    /// Index of the last `R_i` layer pair, `1/ξ`.
    fn last_layer(&self) -> usize {
        1 << self.t
    }

    /// Largest backbone z coordinate, that of `c_{2^(t+1)+1}`.
    pub fn max_backbone_z(&self) -> f64 {
        2.0 * (2 * self.last_layer() + 1) as f64
    }

    pub fn resolved_far_scale(&self) -> f64 {
        self.far_scale.unwrap_or(100.0 * (self.max_backbone_z() + 1.0))
    }

    /// Point count of `B ∪ M ∪ R`, before the far field.
    pub fn main_count(&self) -> usize {
        let t = self.t as usize;
        let m: usize = (1..=t - 3).map(|i| 3 * (1 + (1 << (2 + i)))).sum();
        let layers = (1 << t) - t + 3;
        9 + m + layers * 2 * (1 + (1 << t))
    }
}

/// Parameters of the far field actually emitted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FarField {
    pub far_scale: f64,
    pub mass_factor: usize,
    pub far_blue_anchor: [f64; 3],
    pub far_blue_copies: usize,
    pub far_white_anchor: [f64; 3],
    pub far_white_copies: usize,
    pub red_counterweight: [f64; 3],
    pub red_counterweight_copies: usize,
}

impl FarField {
    pub fn len(&self) -> usize {
        self.far_blue_copies + self.far_white_copies + self.red_counterweight_copies
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// What was emitted, in emission order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdvManifest {
    pub t: u32,
    pub xi: f64,
    pub n: usize,
    /// Arrangement name (`B`, `M_1`, …, `R_2`, …, `F`) to point count.
    pub arrangements: IndexMap<String, usize>,
    pub far_field: FarField,
    /// Index of the first far-blue copy, which is the blue centroid.
    pub far_blue_anchor_index: usize,
    /// Index of the first far-white copy, which is the white centroid.
    pub far_white_anchor_index: usize,
    /// Indices of `c_0, y_1..y_8`.
    pub base_indices: Vec<usize>,
}

struct Emitter {
    points: Vec<Vec<f64>>,
    labels: Vec<String>,
}

impl Emitter {
    fn push(&mut self, p: [f64; 3], label: &str) {
        self.points.push(p.to_vec());
        self.labels.push(label.to_string());
    }

    fn center(&mut self, i: usize, label: &str) {
        self.push(backbone(i), label);
    }

    /// Point on the unit circle around `c_i` at angle `theta`.
    fn around(&mut self, i: usize, theta: f64, label: &str) {
        let c = backbone(i);
        let (x, y) = unit_offset(theta);
        self.push([c[0] + x, c[1] + y, c[2]], label);
    }
}

/// `(cos θ, sin θ)` scaled up by a few ulps if needed so that its squared
/// norm is at least 1 in floating point. Every layer relies on unit-distance
/// ties (a center is exactly as far from the midpoint above it as from its
/// own ring), and those must resolve by the lowest-index rule rather than by
/// rounding in `cos² + sin²`.
fn unit_offset(theta: f64) -> (f64, f64) {
    let (mut x, mut y) = (theta.cos(), theta.sin());
    while x * x + y * y < 1.0 {
        x *= 1.0 + f64::EPSILON;
        y *= 1.0 + f64::EPSILON;
    }
    (x, y)
}

fn backbone(i: usize) -> [f64; 3] {
    [0.0, 0.0, 2.0 * i as f64]
}

/// Builds the layered set for `p`, with a manifest of what was emitted.
pub fn gen_adversarial(p: &AdvParams) -> Result<(TrainingSet, AdvManifest)> {
    p.check()?;
    let t = p.t as usize;
    let xi = p.xi();
    let mut e = Emitter {
        points: Vec::new(),
        labels: Vec::new(),
    };
    let mut arrangements = IndexMap::new();

    e.center(0, RED);
    for j in 1..=8 {
        e.around(0, j as f64 * PI / 4.0, &j.to_string());
    }
    arrangements.insert("B".to_string(), e.points.len());

    for i in 1..=t - 3 {
        let start = e.points.len();
        let step = PI / (1u64 << (1 + i)) as f64;
        let count = 1usize << (2 + i);
        e.center(2 * i, BLUE);
        for j in 1..=count {
            e.around(2 * i, j as f64 * step, RED);
        }
        let (lo, hi) = (backbone(2 * i), backbone(2 * i + 1));
        e.push([0.0, 0.0, (lo[2] + hi[2]) / 2.0], WHITE);
        e.center(2 * i + 1, RED);
        for j in 1..=count {
            e.around(2 * i + 1, j as f64 * step, BLUE);
        }
        for j in 1..=count {
            e.around(2 * i + 1, (j as f64 + 0.5) * step - xi * xi, WHITE);
        }
        arrangements.insert(format!("M_{i}"), e.points.len() - start);
    }

    let per_ring = p.last_layer();
    for i in t - 2..=p.last_layer() {
        let start = e.points.len();
        e.center(2 * i, BLUE);
        for j in 1..=per_ring {
            e.around(2 * i, 2.0 * j as f64 * PI * xi, RED);
        }
        e.center(2 * i + 1, RED);
        for j in 1..=per_ring {
            e.around(2 * i + 1, 2.0 * j as f64 * PI * xi, BLUE);
        }
        arrangements.insert(format!("R_{i}"), e.points.len() - start);
    }
    debug_assert_eq!(e.points.len(), p.main_count());

    let far_field = far_field(p, &e);
    let start = e.points.len();
    let far_blue_anchor_index = e.points.len();
    for _ in 0..far_field.far_blue_copies {
        e.push(far_field.far_blue_anchor, BLUE);
    }
    let far_white_anchor_index = e.points.len();
    for _ in 0..far_field.far_white_copies {
        e.push(far_field.far_white_anchor, WHITE);
    }
    for _ in 0..far_field.red_counterweight_copies {
        e.push(far_field.red_counterweight, RED);
    }
    arrangements.insert("F".to_string(), e.points.len() - start);

    let manifest = AdvManifest {
        t: p.t,
        xi,
        n: e.points.len(),
        arrangements,
        far_field,
        far_blue_anchor_index,
        far_white_anchor_index,
        base_indices: (0..9).collect(),
    };
    let ts = TrainingSet::from_named(e.points, &e.labels)?;
    Ok((ts, manifest))
}

/// Far anchors are exact duplicates rather than a ring: a ring of radius ξ²/8
/// sits below float resolution at distance D, and duplicates of one label
/// create no enemy pairs. The red counterweight is split into enough copies
/// that their common depth stays within ten times the structure height.
fn far_field(p: &AdvParams, e: &Emitter) -> FarField {
    let count = |label: &str| e.labels.iter().filter(|l| *l == label).count();
    let d = p.resolved_far_scale();
    let red_z: f64 = e
        .points
        .iter()
        .zip(&e.labels)
        .filter(|(_, l)| *l == RED)
        .map(|(pt, _)| pt[2])
        .sum();
    let red_copies = (red_z / (10.0 * p.max_backbone_z())).ceil().max(1.0) as usize;
    FarField {
        far_scale: d,
        mass_factor: p.mass_factor,
        far_blue_anchor: [d, 0.0, 0.0],
        far_blue_copies: p.mass_factor * count(BLUE) + 1,
        far_white_anchor: [1.1 * d, 0.0, 0.0],
        far_white_copies: p.mass_factor * count(WHITE) + 1,
        red_counterweight: [0.0, 0.0, -red_z / red_copies as f64],
        red_counterweight_copies: red_copies,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::condense::centroids;
    use crate::dataset::IndexSubset;
    use crate::neighbors::{nearest_enemy_table, nearest_in_subset};

    fn closed_form(t: usize) -> usize {
        let m: usize = (1..=t - 3).map(|i| 3 * (1 + (1 << (2 + i)))).sum();
        9 + m + ((1 << t) - t + 3) * 2 * (1 + (1 << t))
    }

    #[test]
    fn arrangement_sizes_at_t4() {
        let (ts, m) = gen_adversarial(&AdvParams::new(4).unwrap()).unwrap();
        assert_eq!(m.arrangements["B"], 9);
        assert_eq!(m.arrangements["M_1"], 27);
        let r: Vec<_> = m.arrangements.iter().filter(|(k, _)| k.starts_with("R_")).collect();
        assert_eq!(r.len(), 15);
        assert!(r.iter().all(|(_, &c)| c == 34));
        assert_eq!(r[0].0, "R_2");
        assert_eq!(ts.len(), m.n);
        assert_eq!(ts.num_classes(), 11);
    }

    #[test]
    fn counts_match_closed_form() {
        for t in 4..=8u32 {
            let p = AdvParams::new(t).unwrap();
            let (ts, m) = gen_adversarial(&p).unwrap();
            let f = m.arrangements["F"];
            assert_eq!(f, m.far_field.len());
            assert_eq!(ts.len(), closed_form(t as usize) + f);
            assert_eq!(m.arrangements.values().sum::<usize>(), ts.len());
        }
    }

    #[test]
    fn centroids_are_base_plus_far_anchors() {
        for t in 4..=6 {
            let (ts, m) = gen_adversarial(&AdvParams::new(t).unwrap()).unwrap();
            let mut got = centroids(&ts);
            got.sort_unstable();
            let mut want = m.base_indices.clone();
            want.extend([m.far_blue_anchor_index, m.far_white_anchor_index]);
            assert_eq!(got, want, "t = {t}");
        }
    }

    #[test]
    fn far_field_is_inert() {
        let (ts, m) = gen_adversarial(&AdvParams::new(5).unwrap()).unwrap();
        let seeds = IndexSubset::from_unsorted(centroids(&ts));
        let far = ts.len() - m.arrangements["F"]..ts.len();
        for q in far.clone() {
            let (nn, _) = nearest_in_subset(q, &ts, &seeds).unwrap();
            assert_eq!(ts.label(nn), ts.label(q));
        }

        // the far field adds at most 8 nearest-enemy points
        let table = nearest_enemy_table(&ts).unwrap();
        let main = ts.len() - m.arrangements["F"];
        let mut without_far: Vec<usize> = (0..main).map(|i| table.ne_index(i)).collect();
        without_far.sort_unstable();
        without_far.dedup();
        assert!(table.kappa() - without_far.len() <= 8);
    }

    #[test]
    fn ring_offsets_never_fall_inside_the_unit_circle() {
        for k in 0..4096 {
            let (x, y) = unit_offset(k as f64 * PI / 2048.0);
            let sq = x * x + y * y;
            assert!((1.0..1.0 + 8.0 * f64::EPSILON).contains(&sq));
        }
    }

    #[test]
    fn rejects_small_t() {
        assert!(AdvParams::new(3).is_err());
        assert!(AdvParams::new(13).is_err());
    }

    #[test]
    fn kappa_roughly_doubles() {
        let kappa: Vec<usize> = (4..=8)
            .map(|t| {
                let (ts, _) = gen_adversarial(&AdvParams::new(t).unwrap()).unwrap();
                nearest_enemy_table(&ts).unwrap().kappa()
            })
            .collect();
        for w in kappa.windows(2) {
            let r = w[1] as f64 / w[0] as f64;
            assert!((1.5..=3.0).contains(&r), "kappa sequence {kappa:?}");
        }
    }
}
