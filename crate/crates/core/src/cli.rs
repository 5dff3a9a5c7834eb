//! The `nnc` command line. [`run`] parses arguments, prints the resolved
//! configuration, dispatches, and maps the outcome to an exit code:
//! 0 on success, 1 when data fails validation or verification, 2 on a usage
//! error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::bench::{format_summary, ratio_sweep, run_bench, write_sweep, BenchPlan};
use crate::condense::{condense, sfcnn, sfcnn_bound_check, verify_consistent, Algorithm};
use crate::dataio::{append_result, read_dataset, read_subset, write_dataset, write_subset, HeaderMode, LabelColumn, ReadOptions};
use crate::error::{Error, Result};
use crate::generators::{gen_adversarial, gen_voronoi, AdvParams, VoronoiParams};
use crate::neighbors::stats;

#[derive(Debug, Parser, Serialize)]
#[command(name = "nnc", version, about = "Nearest-neighbor condensation toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Print n, d, c, kappa, margin and spread of a dataset.
    Stats {
        file: PathBuf,
        #[command(flatten)]
        read: ReadArgs,
    },
    /// Condense a dataset and write the selected indices.
    Condense {
        #[arg(long)]
        algo: Algorithm,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        read: ReadArgs,
    },
    /// Check that a subset classifies its dataset correctly.
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        subset: PathBuf,
        #[command(flatten)]
        read: ReadArgs,
    },
    /// Time algorithms over datasets and append results rows.
    Bench(BenchArgs),
    /// Generate a synthetic dataset.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Run sfcnn and compare its size with the bound for an assumed doubling dimension.
    BoundCheck {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        ddim: u32,
        #[command(flatten)]
        read: ReadArgs,
    },
    /// Run fcnn, sfcnn and rss on layered sets for a range of t.
    RatioSweep {
        #[arg(long, default_value_t = 4)]
        t_min: u32,
        #[arg(long, default_value_t = 6)]
        t_max: u32,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Args, Serialize)]
pub struct ReadArgs {
    /// Treat the first row as data.
    #[arg(long)]
    no_header: bool,
    /// Label column: a 0-based index or `last`.
    #[arg(long, default_value = "last", value_parser = parse_label_col)]
    label_col: LabelColumn,
}

impl ReadArgs {
    fn options(&self) -> ReadOptions {
        ReadOptions {
            header: if self.no_header { HeaderMode::Absent } else { HeaderMode::Auto },
            label_column: self.label_col,
        }
    }
}

fn parse_label_col(s: &str) -> std::result::Result<LabelColumn, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Args, Serialize)]
pub struct BenchArgs {
    /// Dataset files, or directories whose `.csv` files are all used.
    #[arg(long, num_args = 1.., value_delimiter = ',', required = true)]
    inputs: Vec<PathBuf>,
    /// Comma-separated algorithm names, or `all`.
    #[arg(long, default_value = "all")]
    algos: String,
    #[arg(long, default_value_t = 5)]
    repeats: usize,
    #[arg(long, default_value_t = 1)]
    warmup: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Results CSV; rows are appended.
    #[arg(long)]
    out: PathBuf,
    /// Benchmark datasets concurrently.
    #[arg(long)]
    parallel: bool,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GenCommand {
    /// Layered set on which fcnn grows with 2^t times kappa; a manifest
    /// is written next to the output.
    Adversarial {
        #[arg(long)]
        t: u32,
        #[arg(long)]
        out: PathBuf,
    },
    /// Uniform points labeled by the class of their nearest random site.
    Voronoi {
        #[arg(long, default_value_t = 100_000)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 3)]
        classes: usize,
        #[arg(long, default_value_t = 15)]
        sites: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

/// Runs the tool on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
                return 0;
            }
            let _ = write!(err, "{text}");
            return 2;
        }
    };
    let _ = writeln!(
        out,
        "config: {}",
        serde_json::to_string(&cli.command).expect("config serializes")
    );
    match dispatch(&cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidInput(_) => 2,
        _ => 1,
    }
}

fn dispatch(command: &Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Stats { file, read } => {
            let ts = read_dataset(file, &read.options())?;
            let s = stats(&ts)?;
            writeln!(
                out,
                "n={} d={} c={} kappa={} ({:.2}%) gamma={} gamma_norm={} diameter={} spread={}",
                s.n, s.d, s.c, s.kappa, s.kappa_pct, s.gamma_raw, s.gamma_norm, s.diameter, s.spread
            )?;
        }
        Command::Condense { algo, input, out: path, read } => {
            let ts = read_dataset(input, &read.options())?;
            let r = condense(&ts, *algo)?;
            write_subset(&r.subset, path)?;
            writeln!(
                out,
                "{}: selected {} of {} points in {} iterations -> {}",
                algo,
                r.len(),
                ts.len(),
                r.iterations,
                path.display()
            )?;
        }
        Command::Verify { input, subset, read } => {
            let ts = read_dataset(input, &read.options())?;
            let r = read_subset(subset, ts.len())?;
            let c = verify_consistent(&ts, &r)?;
            match c.counterexample {
                None => writeln!(out, "consistent ({} of {} points)", r.len(), ts.len())?,
                Some(p) => {
                    writeln!(out, "inconsistent: point {p} is nearest to a subset member of another class")?;
                    return Ok(1);
                }
            }
        }
        Command::Bench(args) => {
            let plan = BenchPlan {
                datasets: expand_inputs(&args.inputs)?,
                algorithms: parse_algos(&args.algos)?,
                repeats: args.repeats,
                warmup: args.warmup,
                seed: args.seed,
                parallel_datasets: args.parallel,
            };
            let rows = run_bench(&plan)?;
            for r in &rows {
                append_result(r, &args.out)?;
            }
            write!(out, "{}", format_summary(&rows))?;
            writeln!(out, "{} rows appended to {}", rows.len(), args.out.display())?;
        }
        Command::Gen(GenCommand::Adversarial { t, out: path }) => {
            let (ts, manifest) = gen_adversarial(&AdvParams::new(*t)?)?;
            write_dataset(&ts, path)?;
            let side = manifest_path(path);
            fs::write(&side, serde_json::to_string_pretty(&manifest)?)?;
            writeln!(
                out,
                "wrote {} points ({} classes) to {}, manifest {}",
                ts.len(),
                ts.num_classes(),
                path.display(),
                side.display()
            )?;
        }
        Command::Gen(GenCommand::Voronoi { n, d, classes, sites, seed, out: path }) => {
            let p = VoronoiParams {
                n: *n,
                d: *d,
                c: *classes,
                sites: *sites,
                seed: *seed,
            };
            let ts = gen_voronoi(&p)?;
            write_dataset(&ts, path)?;
            writeln!(out, "wrote {} ({} points) to {}", p.name(), ts.len(), path.display())?;
        }
        Command::BoundCheck { input, ddim, read } => {
            let ts = read_dataset(input, &read.options())?;
            let r = sfcnn(&ts)?;
            let b = sfcnn_bound_check(&ts, &r, *ddim)?;
            writeln!(
                out,
                "|R|={} bound={} (kappa={} gamma_norm={} log_factor={} ddim={}) {}",
                b.lhs,
                b.rhs,
                b.kappa,
                b.gamma_norm,
                b.log_factor,
                b.assumed_ddim,
                if b.holds { "holds" } else { "VIOLATED" }
            )?;
            if !b.holds {
                return Ok(1);
            }
        }
        Command::RatioSweep { t_min, t_max, out: path } => {
            if t_min > t_max {
                return Err(Error::invalid(format!("t-min {t_min} exceeds t-max {t_max}")));
            }
            let ts: Vec<u32> = (*t_min..=*t_max).collect();
            let rows = ratio_sweep(&ts)?;
            write_sweep(&rows, path)?;
            writeln!(out, "{:>3} {:>8} {:>6} {:>6} {:>6} {:>6} {:>8} {:>8} {:>8}", "t", "n", "kappa", "fcnn", "sfcnn", "rss", "fcnn/k", "sfcnn/k", "rss/k")?;
            for r in &rows {
                writeln!(
                    out,
                    "{:>3} {:>8} {:>6} {:>6} {:>6} {:>6} {:>8.3} {:>8.3} {:>8.3}",
                    r.t, r.n, r.kappa, r.fcnn_size, r.sfcnn_size, r.rss_size, r.fcnn_ratio, r.sfcnn_ratio, r.rss_ratio
                )?;
            }
        }
    }
    Ok(0)
}

/// `adv.csv` gets `adv.manifest.json` next to it.
fn manifest_path(data: &Path) -> PathBuf {
    data.with_extension("manifest.json")
}

fn parse_algos(spec: &str) -> Result<Vec<Algorithm>> {
    if spec.trim().eq_ignore_ascii_case("all") {
        return Ok(Algorithm::ALL.to_vec());
    }
    let mut algos = Vec::new();
    for name in spec.split(',').filter(|s| !s.trim().is_empty()) {
        let a: Algorithm = name.parse()?;
        if !algos.contains(&a) {
            algos.push(a);
        }
    }
    if algos.is_empty() {
        return Err(Error::invalid("no algorithms given"));
    }
    Ok(algos)
}

/// Files are kept in the given order; a directory contributes its `.csv`
/// files sorted by name.
fn expand_inputs(inputs: &[PathBuf]) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for p in inputs {
        if p.is_dir() {
            let mut files: Vec<PathBuf> = fs::read_dir(p)?
                .map(|e| e.map(|e| e.path()))
                .collect::<std::io::Result<_>>()?;
            files.retain(|f| f.extension().is_some_and(|e| e == "csv"));
            files.sort();
            if files.is_empty() {
                return Err(Error::invalid(format!("no .csv files in {}", p.display())));
            }
            out.extend(files);
        } else {
            out.push(p.clone());
        }
    }
    Ok(out)
}
