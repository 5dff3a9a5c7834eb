//! The benchmark protocol over the bundled suite, printed as a table and
//! appended to `results.csv` in the working directory.
//!
//! ```bash
//! cargo run --release --example bench
//! ```

use nnc::bench::{format_summary, run_bench_on, BenchPlan};
use nnc::bundled;
use nnc::dataio::append_result;

fn main() -> nnc::Result<()> {
    let sets: Vec<(String, _)> = bundled::load_all()?
        .into_iter()
        .map(|(n, ts)| (n.to_string(), ts))
        .collect();
    let plan = BenchPlan {
        repeats: 3,
        seed: 42,
        ..Default::default()
    };
    let rows = run_bench_on(&plan, &sets)?;
    print!("{}", format_summary(&rows));
    for r in &rows {
        append_result(r, "results.csv")?;
    }
    Ok(())
}
