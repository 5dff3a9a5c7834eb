//! Subset size over kappa on layered sets of growing t: fcnn's ratio grows
//! with 2^t while sfcnn's and rss's stay flat.
//!
//! ```bash
//! cargo run --release --example ratio_sweep
//! ```

use nnc::bench::ratio_sweep;

fn main() -> nnc::Result<()> {
    println!("{:>2} {:>7} {:>6} {:>9} {:>9} {:>9}", "t", "n", "kappa", "fcnn/k", "sfcnn/k", "rss/k");
    for r in ratio_sweep(&[4, 5, 6, 7])? {
        println!(
            "{:>2} {:>7} {:>6} {:>9.3} {:>9.3} {:>9.3}",
            r.t, r.n, r.kappa, r.fcnn_ratio, r.sfcnn_ratio, r.rss_ratio
        );
    }
    Ok(())
}
