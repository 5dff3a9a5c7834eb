//! Labeled point sets in Euclidean space.
//!
//! A [`TrainingSet`] can only be obtained through validation, so every
//! algorithm downstream may assume finite coordinates, non-empty classes and
//! no coincident points with different labels. Use [`RawTrainingSet`] to
//! inspect a [`ValidationReport`] without failing.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Squared Euclidean distance. Every nearest-neighbor comparison in the crate
/// goes through this one function, so ties are resolved identically
/// everywhere.
#[inline]
pub fn sq_distance(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = 0.0;
    for (x, y) in a.iter().zip(b) {
        let d = x - y;
        acc += d * d;
    }
    acc
}

/// Euclidean distance between two points of equal dimension.
pub fn distance(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::invalid(format!(
            "dimension mismatch: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    Ok(sq_distance(a, b).sqrt())
}

/// Hashable identity of a coordinate vector. `-0.0` and `0.0` map to the same key.
pub(crate) fn coord_key(p: &[f64]) -> Vec<u64> {
    p.iter().map(|x| (x + 0.0).to_bits()).collect()
}

/// A single invariant violation found by [`RawTrainingSet::validate`].
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    Empty,
    ZeroDimension,
    LengthMismatch { points: usize, labels: usize },
    DimensionMismatch { index: usize, len: usize, expected: usize },
    NonFinite { index: usize, coord: usize },
    LabelOutOfRange { index: usize, class_id: usize },
    EmptyClass { class_id: usize },
    CoincidentEnemies { first: usize, second: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Empty => write!(f, "training set is empty"),
            Violation::ZeroDimension => write!(f, "dimension must be positive"),
            Violation::LengthMismatch { points, labels } => {
                write!(f, "{points} points but {labels} labels")
            }
            Violation::DimensionMismatch {
                index,
                len,
                expected,
            } => write!(f, "point {index} has {len} coordinates, expected {expected}"),
            Violation::NonFinite { index, coord } => {
                write!(f, "non-finite coordinate at point {index}, column {coord}")
            }
            Violation::LabelOutOfRange { index, class_id } => {
                write!(f, "point {index} has class id {class_id} outside the class table")
            }
            Violation::EmptyClass { class_id } => write!(f, "class {class_id} has no points"),
            Violation::CoincidentEnemies { first, second } => {
                write!(f, "coincident enemy pair ({first},{second})")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Unvalidated training data, as produced by a parser or generator.
#[derive(Debug, Clone, PartialEq)]
pub struct RawTrainingSet {
    pub dim: usize,
    pub points: Vec<Vec<f64>>,
    pub labels: Vec<usize>,
    pub class_names: Vec<String>,
}

impl RawTrainingSet {
    /// Builds a raw set from string labels, assigning class ids by first appearance.
    pub fn from_named(points: Vec<Vec<f64>>, labels: &[impl AsRef<str>]) -> Self {
        let mut class_names: Vec<String> = Vec::new();
        let mut ids: HashMap<String, usize> = HashMap::new();
        let labels = labels
            .iter()
            .map(|l| {
                let l = l.as_ref();
                *ids.entry(l.to_string()).or_insert_with(|| {
                    class_names.push(l.to_string());
                    class_names.len() - 1
                })
            })
            .collect();
        let dim = points.first().map_or(0, Vec::len);
        RawTrainingSet {
            dim,
            points,
            labels,
            class_names,
        }
    }

    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        if self.points.is_empty() {
            violations.push(Violation::Empty);
        }
        if self.dim == 0 {
            violations.push(Violation::ZeroDimension);
        }
        if self.points.len() != self.labels.len() {
            violations.push(Violation::LengthMismatch {
                points: self.points.len(),
                labels: self.labels.len(),
            });
        }

        let mut shape_ok = true;
        for (index, p) in self.points.iter().enumerate() {
            if p.len() != self.dim {
                shape_ok = false;
                violations.push(Violation::DimensionMismatch {
                    index,
                    len: p.len(),
                    expected: self.dim,
                });
            }
            for (coord, x) in p.iter().enumerate() {
                if !x.is_finite() {
                    shape_ok = false;
                    violations.push(Violation::NonFinite { index, coord });
                }
            }
        }

        let c = self.class_names.len();
        let mut counts = vec![0usize; c];
        for (index, &class_id) in self.labels.iter().enumerate() {
            if class_id < c {
                counts[class_id] += 1;
            } else {
                shape_ok = false;
                violations.push(Violation::LabelOutOfRange { index, class_id });
            }
        }
        for (class_id, &count) in counts.iter().enumerate() {
            if count == 0 {
                violations.push(Violation::EmptyClass { class_id });
            }
        }

        if shape_ok && self.points.len() == self.labels.len() {
            let mut seen: HashMap<Vec<u64>, usize> = HashMap::with_capacity(self.points.len());
            for (i, p) in self.points.iter().enumerate() {
                match seen.get(&coord_key(p)) {
                    Some(&first) if self.labels[first] != self.labels[i] => {
                        violations.push(Violation::CoincidentEnemies { first, second: i });
                    }
                    Some(_) => {}
                    None => {
                        seen.insert(coord_key(p), i);
                    }
                }
            }
        }

        ValidationReport { violations }
    }
}

/// A validated set of `n` labeled points in `R^d`.
///
/// Coordinates are stored row-major in one flat buffer; [`TrainingSet::point`]
/// hands out slices.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingSet {
    dim: usize,
    coords: Vec<f64>,
    labels: Vec<usize>,
    class_names: Vec<String>,
}

impl TryFrom<RawTrainingSet> for TrainingSet {
    type Error = Error;

    fn try_from(raw: RawTrainingSet) -> Result<Self> {
        let report = raw.validate();
        if !report.is_ok() {
            return Err(Error::Validation(report));
        }
        let coords = raw.points.into_iter().flatten().collect();
        Ok(TrainingSet {
            dim: raw.dim,
            coords,
            labels: raw.labels,
            class_names: raw.class_names,
        })
    }
}

impl TrainingSet {
    pub fn new(
        points: Vec<Vec<f64>>,
        labels: Vec<usize>,
        class_names: Vec<String>,
    ) -> Result<Self> {
        let dim = points.first().map_or(0, Vec::len);
        RawTrainingSet {
            dim,
            points,
            labels,
            class_names,
        }
        .try_into()
    }

    /// Builds from string labels; class ids follow first appearance.
    pub fn from_named(points: Vec<Vec<f64>>, labels: &[impl AsRef<str>]) -> Result<Self> {
        RawTrainingSet::from_named(points, labels).try_into()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_classes(&self) -> usize {
        self.class_names.len()
    }

    #[inline]
    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    #[inline]
    pub fn label(&self, i: usize) -> usize {
        self.labels[i]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    pub fn class_name(&self, class_id: usize) -> &str {
        &self.class_names[class_id]
    }

    #[inline]
    pub(crate) fn sq_dist(&self, i: usize, j: usize) -> f64 {
        sq_distance(self.point(i), self.point(j))
    }

    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.sq_dist(i, j).sqrt()
    }

    /// Point indices grouped by class id, each group in increasing order.
    pub fn members_by_class(&self) -> Vec<Vec<usize>> {
        let mut groups = vec![Vec::new(); self.num_classes()];
        for (i, &l) in self.labels.iter().enumerate() {
            groups[l].push(i);
        }
        groups
    }

    /// Re-validates; always ok for a constructed set.
    pub fn validate(&self) -> ValidationReport {
        self.to_raw().validate()
    }

    pub fn to_raw(&self) -> RawTrainingSet {
        RawTrainingSet {
            dim: self.dim,
            points: self.coords.chunks(self.dim).map(<[f64]>::to_vec).collect(),
            labels: self.labels.clone(),
            class_names: self.class_names.clone(),
        }
    }

    pub(crate) fn require_enemies(&self) -> Result<()> {
        if self.num_classes() < 2 {
            Err(Error::NoEnemies)
        } else {
            Ok(())
        }
    }
}

/// A strictly increasing set of point indices: the output of every condensation
/// algorithm.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct IndexSubset(Vec<usize>);

impl IndexSubset {
    /// Accepts indices in any order; duplicates are collapsed.
    pub fn from_unsorted(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        IndexSubset(indices)
    }

    /// Accepts an already strictly increasing sequence, checking it against `n`.
    pub fn from_sorted(indices: Vec<usize>, n: usize) -> Result<Self> {
        for w in indices.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::invalid(format!(
                    "indices not strictly increasing: {} then {}",
                    w[0], w[1]
                )));
            }
        }
        if let Some(&last) = indices.last() {
            if last >= n {
                return Err(Error::invalid(format!("index {last} out of range for n = {n}")));
            }
        }
        Ok(IndexSubset(indices))
    }

    /// The full index range `0..n`.
    pub fn all(n: usize) -> Self {
        IndexSubset((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn distance_examples() {
        assert_eq!(distance(&[0.0, 0.0], &[3.0, 4.0]).unwrap(), 5.0);
        assert_eq!(distance(&[1.5, -2.0], &[1.5, -2.0]).unwrap(), 0.0);
        assert_eq!(distance(&[0.0], &[4.0]).unwrap(), 4.0);
        assert!(matches!(
            distance(&[0.0], &[1.0, 2.0]),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn same_label_duplicates_are_fine() {
        let raw = RawTrainingSet::from_named(vec![vec![1.0, 1.0], vec![1.0, 1.0]], &["a", "a"]);
        assert!(raw.validate().is_ok());
    }

    #[test]
    fn coincident_enemies_rejected() {
        let raw = RawTrainingSet::from_named(
            vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![1.0, 1.0]],
            &["a", "a", "b"],
        );
        let report = raw.validate();
        assert_eq!(
            report.violations,
            vec![Violation::CoincidentEnemies {
                first: 1,
                second: 2
            }]
        );
        assert_eq!(report.to_string(), "coincident enemy pair (1,2)");
        assert!(matches!(TrainingSet::try_from(raw), Err(Error::Validation(_))));
    }

    #[test]
    fn negative_zero_counts_as_coincident() {
        let raw = RawTrainingSet::from_named(vec![vec![0.0], vec![-0.0]], &["a", "b"]);
        assert!(!raw.validate().is_ok());
    }

    #[test]
    fn non_finite_rejected() {
        let raw =
            RawTrainingSet::from_named(vec![vec![0.0, f64::NAN], vec![1.0, 1.0]], &["a", "b"]);
        let report = raw.validate();
        assert_eq!(
            report.violations,
            vec![Violation::NonFinite { index: 0, coord: 1 }]
        );
        assert!(report.to_string().contains("non-finite coordinate"));
    }

    #[test]
    fn structural_violations() {
        let raw = RawTrainingSet {
            dim: 2,
            points: vec![vec![0.0, 0.0], vec![1.0]],
            labels: vec![0, 3],
            class_names: vec!["a".into(), "b".into()],
        };
        let v = raw.validate().violations;
        assert!(v.contains(&Violation::DimensionMismatch {
            index: 1,
            len: 1,
            expected: 2
        }));
        assert!(v.contains(&Violation::LabelOutOfRange {
            index: 1,
            class_id: 3
        }));
        assert!(v.contains(&Violation::EmptyClass { class_id: 1 }));

        let empty = RawTrainingSet {
            dim: 1,
            points: vec![],
            labels: vec![],
            class_names: vec![],
        };
        assert_eq!(empty.validate().violations, vec![Violation::Empty]);
    }

    #[test]
    fn class_ids_follow_first_appearance() {
        let ts = TrainingSet::from_named(
            vec![vec![0.0], vec![1.0], vec![2.0], vec![3.0]],
            &["z", "a", "z", "m"],
        )
        .unwrap();
        assert_eq!(ts.labels(), &[0, 1, 0, 2]);
        assert_eq!(ts.class_names(), &["z", "a", "m"]);
        assert_eq!(ts.members_by_class(), vec![vec![0, 2], vec![1], vec![3]]);
        assert_eq!(ts.to_raw().validate(), ValidationReport::default());
    }

    #[test]
    fn subset_constructors() {
        assert_eq!(IndexSubset::from_unsorted(vec![3, 1, 3]).as_slice(), &[1, 3]);
        assert!(IndexSubset::from_sorted(vec![1, 1], 5).is_err());
        assert!(IndexSubset::from_sorted(vec![1, 5], 5).is_err());
        let s = IndexSubset::from_sorted(vec![0, 4], 5).unwrap();
        assert!(s.contains(4) && !s.contains(2));
    }

    fn triple() -> impl Strategy<Value = (Vec<f64>, Vec<f64>, Vec<f64>)> {
        (1usize..6).prop_flat_map(|d| {
            let v = || prop::collection::vec(-1e3f64..1e3, d);
            (v(), v(), v())
        })
    }

    proptest! {
        #[test]
        fn metric_axioms((a, b, c) in triple()) {
            let ab = distance(&a, &b).unwrap();
            let ba = distance(&b, &a).unwrap();
            let bc = distance(&b, &c).unwrap();
            let ac = distance(&a, &c).unwrap();
            prop_assert_eq!(ab, ba);
            prop_assert!(ab >= 0.0);
            prop_assert_eq!(distance(&a, &a).unwrap(), 0.0);
            prop_assert_eq!(ab == 0.0, a == b);
            // rounding slack for the triangle inequality
            prop_assert!(ac <= (ab + bc) * (1.0 + 1e-12));
        }
    }
}
