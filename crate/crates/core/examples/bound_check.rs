//! Structural guarantees of sfcnn: margin packing, bucket separation and the
//! size bound, checked on every bundled dataset.
//!
//! ```bash
//! cargo run --release --example bound_check
//! ```

use nnc::bundled;
use nnc::condense::{bucket_separation_violations, min_pairwise_distance, sfcnn, sfcnn_bound_check};
use nnc::neighbors::nearest_enemy_table;

fn main() -> nnc::Result<()> {
    for (name, ts) in bundled::load_all()? {
        let table = nearest_enemy_table(&ts)?;
        let r = sfcnn(&ts)?;
        let packing = min_pairwise_distance(&ts, &r.subset) >= table.margin();
        let separated = bucket_separation_violations(&ts, &r.subset, &table).is_empty();
        let b = sfcnn_bound_check(&ts, &r, ts.dim() as u32)?;
        println!(
            "{name:<8} |R|={:<5} packing={packing} separated={separated} bound={} holds={}",
            b.lhs, b.rhs, b.holds
        );
    }
    Ok(())
}
