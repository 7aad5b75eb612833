use std::path::PathBuf;

use blowup_core::counting::{blowup_hom_count_raw, exact_cost, sample_hom_density, DEFAULT_TUPLE_BUDGET};
use blowup_core::BlowupShape;
use clap::{Args, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::failure::{CmdResult, Failure, FlagContext};
use crate::{emit, load_graph, Outcome};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CountMode {
    /// Exact when the cost estimate fits the budget, sampled otherwise.
    Auto,
    Exact,
    Sample,
}

#[derive(Debug, Args, Serialize)]
pub struct CountArgs {
    /// Blowup shape `a,b,c` (any number of parts).
    #[arg(long)]
    pub shape: String,
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = CountMode::Auto)]
    pub mode: CountMode,
    /// Largest exact cost estimate accepted.
    #[arg(long, default_value_t = DEFAULT_TUPLE_BUDGET)]
    pub budget: u128,
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

pub fn run(args: &CountArgs) -> CmdResult<Outcome> {
    let shape: BlowupShape = args.shape.parse().flag("--shape")?;
    let g = load_graph(&args.input)?;
    let mut outcome = Outcome { inputs: vec![args.input.clone()], ..Outcome::default() };
    let cost = exact_cost(&shape, g.n());
    let fits = cost.is_some_and(|c| c <= args.budget);
    let exact = match args.mode {
        CountMode::Exact if !fits => {
            let cost = cost.map_or_else(|| "more than 2^128".to_string(), |c| c.to_string());
            return Err(Failure::Resource(format!(
                "exact K_{{{shape}}} count on {} vertices needs about {cost} steps, over the budget of {}; \
                 try: blowup-lab count --shape {shape} --in {} --mode sample --samples {} --seed {}",
                g.n(),
                args.budget,
                args.input.display(),
                args.samples,
                args.seed,
            )));
        }
        CountMode::Exact => true,
        CountMode::Sample => false,
        CountMode::Auto => fits,
    };
    if exact {
        let count = blowup_hom_count_raw(&shape, &g);
        let mut report = serde_json::to_value(count.to_json()).expect("count serializes");
        report["mode"] = json!("exact");
        emit(&report);
    } else {
        if args.samples == 0 {
            return Err(Failure::flag("--samples", "must be positive"));
        }
        let est = sample_hom_density(&shape, &g, args.samples, args.seed).flag("--shape")?;
        let mut report = serde_json::to_value(&est).expect("estimate serializes");
        report["mode"] = json!("sample");
        report["point_log2"] = finite(est.point.log2());
        report["lower"] = json!(est.lower());
        report["upper"] = json!(est.upper());
        outcome.seed = Some(args.seed);
        emit(&report);
    }
    Ok(outcome)
}

fn finite(x: f64) -> serde_json::Value {
    if x.is_finite() {
        json!(x)
    } else {
        serde_json::Value::Null
    }
}
