//! All seven algorithms on one dataset, each result verified.
//!
//! ```bash
//! cargo run --release --example condense            # iris
//! cargo run --release --example condense -- wine
//! cargo run --release --example condense -- my.csv  # any dataset file
//! ```

use std::path::Path;

use nnc::condense::{verify_consistent, Algorithm};
use nnc::dataio::{read_dataset, ReadOptions};
use nnc::{bundled, neighbors};

fn main() -> nnc::Result<()> {
    let arg = std::env::args().nth(1).unwrap_or_else(|| "iris".to_string());
    let ts = if Path::new(&arg).exists() {
        read_dataset(&arg, &ReadOptions::default())?
    } else {
        bundled::load(&arg)?
    };
    let kappa = neighbors::stats(&ts)?.kappa;
    println!("{arg}: n={} d={} c={} kappa={kappa}\n", ts.len(), ts.dim(), ts.num_classes());
    println!("{:<6} {:>6} {:>10} {:>10} {:>11}", "algo", "size", "size/kappa", "iterations", "consistent");
    for algo in Algorithm::ALL {
        let r = algo.run(&ts)?;
        let ok = verify_consistent(&ts, &r.subset)?.consistent;
        println!(
            "{:<6} {:>6} {:>10.3} {:>10} {:>11}",
            algo,
            r.len(),
            r.len() as f64 / kappa as f64,
            r.iterations,
            ok
        );
    }
    Ok(())
}
