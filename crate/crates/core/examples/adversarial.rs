//! Builds the layered set, shows its arrangement counts and centroids, and
//! compares what fcnn and sfcnn select on it.
//!
//! ```bash
//! cargo run --release --example adversarial -- 5
//! ```

use nnc::condense::{centroids, fcnn, sfcnn};
use nnc::generators::{gen_adversarial, AdvParams};
use nnc::neighbors::stats;

fn main() -> nnc::Result<()> {
    let t: u32 = std::env::args().nth(1).map_or(Ok(4), |s| s.parse()).expect("t must be an integer");
    let (ts, manifest) = gen_adversarial(&AdvParams::new(t)?)?;
    println!("t={t} xi={} n={}", manifest.xi, manifest.n);
    for (name, count) in &manifest.arrangements {
        print!("{name}:{count} ");
    }
    println!("\nfar field: {:?}", manifest.far_field);

    let mut c = centroids(&ts);
    c.sort_unstable();
    println!("centroids {c:?} (far anchors at {} and {})", manifest.far_blue_anchor_index, manifest.far_white_anchor_index);

    let kappa = stats(&ts)?.kappa;
    let f = fcnn(&ts)?;
    let s = sfcnn(&ts)?;
    println!("kappa={kappa}");
    println!("fcnn  {:>6} points ({:.2} x kappa) in {} rounds", f.len(), f.len() as f64 / kappa as f64, f.iterations);
    println!("sfcnn {:>6} points ({:.2} x kappa)", s.len(), s.len() as f64 / kappa as f64);
    Ok(())
}
