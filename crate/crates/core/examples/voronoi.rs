//! Voronoi-labeled synthetic sets: more sites give more boundary, hence a
//! larger kappa and larger condensed subsets.
//!
//! ```bash
//! cargo run --release --example voronoi
//! ```

use std::time::Instant;

use nnc::condense::{fcnn, sfcnn};
use nnc::generators::{gen_voronoi, VoronoiParams};
use nnc::neighbors::stats;

fn main() -> nnc::Result<()> {
    for sites in [5, 15] {
        let p = VoronoiParams {
            n: 20_000,
            d: 2,
            c: 3,
            sites,
            seed: 1,
        };
        let ts = gen_voronoi(&p)?;
        let kappa = stats(&ts)?.kappa;
        let start = Instant::now();
        let f = fcnn(&ts)?;
        let tf = start.elapsed();
        let start = Instant::now();
        let s = sfcnn(&ts)?;
        let ts_ = start.elapsed();
        println!(
            "{}: kappa={kappa} fcnn={} ({tf:.2?}) sfcnn={} ({ts_:.2?})",
            p.name(),
            f.len(),
            s.len()
        );
    }
    Ok(())
}
