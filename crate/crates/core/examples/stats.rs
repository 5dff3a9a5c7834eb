//! Nearest-enemy statistics of every bundled dataset.
//!
//! ```bash
//! cargo run --release --example stats
//! ```

use nnc::bundled;
use nnc::neighbors::{nearest_enemy_table, stats};

fn main() -> nnc::Result<()> {
    println!("{:<8} {:>5} {:>3} {:>3} {:>14} {:>10} {:>10}", "dataset", "n", "d", "c", "kappa", "gamma", "spread");
    for (name, ts) in bundled::load_all()? {
        let s = stats(&ts)?;
        println!(
            "{:<8} {:>5} {:>3} {:>3} {:>5} ({:>5.2}%) {:>10.4} {:>10.1}",
            name, s.n, s.d, s.c, s.kappa, s.kappa_pct, s.gamma_norm, s.spread
        );
    }

    // the table behind kappa: which point is each point's nearest enemy
    let iris = bundled::load("iris")?;
    let table = nearest_enemy_table(&iris)?;
    println!("\niris nearest-enemy points:");
    for e in table.enemy_points().iter() {
        println!("  #{e:<4} {:<16} {:?}", iris.class_name(iris.label(e)), iris.point(e));
    }
    Ok(())
}
