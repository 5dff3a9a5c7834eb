//! Overlapping Gaussian clusters: net keeps almost everything, the
//! nearest-enemy orderings and fcnn/sfcnn keep far less.
//!
//! ```bash
//! cargo run --release --example blobs -- 0.1
//! ```

use nnc::condense::Algorithm;
use nnc::generators::{gen_blobs, BlobParams};

fn main() -> nnc::Result<()> {
    let std_dev: f64 = std::env::args().nth(1).map_or(Ok(0.1), |s| s.parse()).expect("standard deviation must be a number");
    for seed in 0..3 {
        let ts = gen_blobs(&BlobParams {
            n: 10_000,
            d: 2,
            c: 3,
            std_dev,
            seed,
        })?;
        let sizes: Vec<String> = Algorithm::ALL
            .iter()
            .map(|a| a.run(&ts).map(|r| format!("{a}={}", r.len())))
            .collect::<nnc::Result<_>>()?;
        println!("seed {seed}: {}", sizes.join(" "));
    }
    Ok(())
}
