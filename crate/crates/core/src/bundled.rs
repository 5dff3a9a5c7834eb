//! Benchmark suite compiled into the library.
//!
//! Each file is a public classification dataset with every feature min-max
//! scaled to `[0, 1]` (constant features become 0), header row first and the
//! class label in the last column.

use crate::dataio::{parse_dataset, ReadOptions};
use crate::dataset::TrainingSet;
use crate::error::{Error, Result};

const FILES: [(&str, &str); 4] = [
    ("iris", include_str!("../data/iris.csv")),
    ("wine", include_str!("../data/wine.csv")),
    ("wdbc", include_str!("../data/wdbc.csv")),
    ("digits", include_str!("../data/digits.csv")),
];

/// Names of the bundled datasets, smallest first.
pub const NAMES: [&str; 4] = ["iris", "wine", "wdbc", "digits"];

/// Raw CSV text of a bundled dataset.
pub fn csv_text(name: &str) -> Result<&'static str> {
    FILES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| *text)
        .ok_or_else(|| Error::invalid(format!("no bundled dataset '{name}' (have {})", NAMES.join(", "))))
}

pub fn load(name: &str) -> Result<TrainingSet> {
    parse_dataset(csv_text(name)?.as_bytes(), format!("{name}.csv"), &ReadOptions::default())
}

/// Every bundled dataset with its name.
pub fn load_all() -> Result<Vec<(&'static str, TrainingSet)>> {
    NAMES.iter().map(|&n| Ok((n, load(n)?))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::neighbors::nearest_enemy_table;

    #[test]
    fn shapes_and_kappa() {
        let want = [("iris", 150, 4, 3), ("wine", 178, 13, 3), ("wdbc", 569, 30, 2), ("digits", 1797, 64, 10)];
        for (name, n, d, c) in want {
            let ts = load(name).unwrap();
            assert_eq!((ts.len(), ts.dim(), ts.num_classes()), (n, d, c), "{name}");
        }
        assert_eq!(nearest_enemy_table(&load("iris").unwrap()).unwrap().kappa(), 20);
        assert!(load("mnist").is_err());
    }
}
