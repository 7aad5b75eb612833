use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;

use blowup_core::bounds::{scan_t, write_scan_csv, ScanParams};
use blowup_core::counting::DEFAULT_TUPLE_BUDGET;
use clap::Args;
use serde::Serialize;
use serde_json::json;

use crate::failure::{CmdResult, Failure, FlagContext};
use crate::{emit, load_graph, Outcome};

#[derive(Debug, Args, Serialize)]
pub struct ScanArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, default_value_t = 0.5)]
    pub delta: f64,
    #[arg(long, default_value_t = 4)]
    pub t_max: usize,
    /// Largest exact cost estimate; costlier rows are sampled.
    #[arg(long, default_value_t = DEFAULT_TUPLE_BUDGET)]
    pub budget: u128,
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// CSV output path.
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run(args: &ScanArgs) -> CmdResult<Outcome> {
    if !(args.delta > 0.0 && args.delta < 1.0) {
        return Err(Failure::flag("--delta", format!("must lie in (0, 1), got {}", args.delta)));
    }
    if args.t_max < 2 {
        return Err(Failure::flag("--t-max", "must be at least 2"));
    }
    let g = load_graph(&args.input)?;
    let params = ScanParams {
        delta: args.delta,
        t_max: args.t_max,
        budget: args.budget,
        samples: args.samples,
        seed: args.seed,
    };
    let report = scan_t(&g, &params).flag("--samples")?;
    let file = File::create(&args.out).map_err(|e| Failure::flag("--out", format!("{}: {e}", args.out.display())))?;
    write_scan_csv(&report.rows, BufWriter::new(file)).flag("--out")?;
    let rows: Vec<_> = report
        .rows
        .iter()
        .map(|r| {
            json!({
                "t": r.t,
                "mode": r.mode,
                "density_log2": r.density_log2,
                "half_width": r.half_width,
                "tested_log2": r.tested_log2,
                "threshold_log2": r.threshold_log2,
                "satisfied": r.satisfied,
            })
        })
        .collect();
    emit(&json!({
        "status": report.status,
        "first_satisfying_t": report.first_satisfying_t,
        "n": report.n,
        "gamma_num": report.gamma_num,
        "gamma_den": report.gamma_den,
        "gamma_log2": report.gamma_log2,
        "delta": report.delta,
        "t_max": report.t_max,
        "rows": rows,
        "csv": args.out,
    }));
    Ok(Outcome { seed: Some(args.seed), inputs: vec![args.input.clone()], outputs: vec![args.out.clone()] })
}
