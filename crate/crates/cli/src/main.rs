//! `blowup-lab`: generate graphs, count triangle-blowup homomorphisms, check
//! invariants and scan `K_{t,t,t}` densities. Every run writes a JSON
//! manifest that `blowup-lab replay` can re-execute.
//!
//! Exit codes: 0 success, 2 usage, 3 resource limit, 4 falsified invariant.

mod count;
mod failure;
mod gen;
mod manifest;
mod scan;
mod verify;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use failure::{CmdResult, Failure};
use manifest::{Manifest, MANIFEST_VERSION};

#[derive(Debug, Parser, Serialize)]
#[command(name = "blowup-lab", version, about = "Triangle-blowup densities, Behrend sets and Ruzsa-Szemeredi graphs")]
struct Cli {
    /// Worker threads for counting and sampling (results do not depend on it).
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Where to write the run manifest.
    #[arg(long, global = true)]
    #[serde(skip)]
    manifest: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Generate a graph or 3AP-free set file.
    Gen(gen::GenArgs),
    /// Count or sample homomorphisms of K_{a,b,c}.
    Count(count::CountArgs),
    /// Check an invariant; exit 4 with a counterexample if it fails.
    Verify(verify::VerifyArgs),
    /// Compare K_{t,t,t} densities with gamma^{(1+delta)t^2}.
    Scan(scan::ScanArgs),
    /// Re-run the invocation recorded in a manifest.
    Replay(ReplayArgs),
}

#[derive(Debug, Args, Serialize)]
struct ReplayArgs {
    /// Manifest written by an earlier run.
    path: PathBuf,
}

/// What a command read, wrote and seeded, for the manifest.
#[derive(Debug, Default)]
pub struct Outcome {
    pub seed: Option<u64>,
    pub inputs: Vec<PathBuf>,
    pub outputs: Vec<PathBuf>,
}

impl Command {
    fn name(&self) -> String {
        match self {
            Command::Gen(g) => format!("gen {}", g.kind.name()),
            Command::Count(_) => "count".into(),
            Command::Verify(v) => format!("verify {}", v.check.name()),
            Command::Scan(_) => "scan".into(),
            Command::Replay(_) => "replay".into(),
        }
    }

    /// Default manifest path when `--manifest` is absent.
    fn default_manifest(&self) -> PathBuf {
        match self {
            Command::Gen(g) => manifest::beside(g.kind.out()),
            Command::Scan(s) => manifest::beside(&s.out),
            Command::Count(_) => PathBuf::from("blowup-lab-count.manifest.json"),
            Command::Verify(_) => PathBuf::from("blowup-lab-verify.manifest.json"),
            Command::Replay(_) => PathBuf::new(),
        }
    }

    fn run(&self) -> CmdResult<Outcome> {
        match self {
            Command::Gen(args) => gen::run(args),
            Command::Count(args) => count::run(args),
            Command::Verify(args) => verify::run(args),
            Command::Scan(args) => scan::run(args),
            Command::Replay(_) => unreachable!("replay is dispatched before run"),
        }
    }
}

/// Pretty JSON on standard output; a closed pipe is ignored.
pub fn emit(value: &impl Serialize) {
    let text = serde_json::to_string_pretty(value).expect("report serializes");
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

pub fn load_graph(path: &Path) -> CmdResult<blowup_core::Graph> {
    blowup_core::io::load_graph(path).map_err(|e| Failure::flag("--in", format!("{}: {e}", path.display())))
}

pub fn load_set(path: &Path) -> CmdResult<blowup_core::constructions::ApFreeSet> {
    blowup_core::io::load_set(path).map_err(|e| Failure::flag("--set", format!("{}: {e}", path.display())))
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    match execute(argv) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("blowup-lab: {f}");
            f.exit_code()
        }
    }
}

fn execute(argv: Vec<String>) -> CmdResult<()> {
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Command::Replay(r) = &cli.command {
        return replay(&r.path);
    }
    let pool = {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(w) = cli.workers {
            if w == 0 {
                return Err(Failure::flag("--workers", "must be at least 1"));
            }
            b = b.num_threads(w);
        }
        b.build().map_err(|e| Failure::flag("--workers", e))?
    };
    let start = Instant::now();
    let result = pool.install(|| cli.command.run());
    let duration_secs = start.elapsed().as_secs_f64();
    let outcome = match &result {
        Ok(o) => o,
        Err(_) => &Outcome::default(),
    };
    let manifest = Manifest {
        format: MANIFEST_VERSION.into(),
        tool: env!("CARGO_PKG_NAME").into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command: cli.command.name(),
        params: serde_json::to_value(&cli).expect("arguments serialize"),
        argv,
        cwd: std::env::current_dir().unwrap_or_default(),
        seed: outcome.seed,
        rng: outcome.seed.map(|_| blowup_core::rng::RNG_ID.to_string()),
        inputs: outcome.inputs.clone(),
        outputs: outcome.outputs.clone(),
        duration_secs,
        exit_code: result.as_ref().err().map_or(0, Failure::code),
    };
    let path = cli.manifest.clone().unwrap_or_else(|| cli.command.default_manifest());
    manifest.save(&path)?;
    result.map(|_| ())
}

fn replay(path: &Path) -> CmdResult<()> {
    let m = Manifest::load(path)?;
    if m.argv.get(1).is_some_and(|a| a == "replay") {
        return Err(Failure::flag("manifest", "refusing to replay a replay"));
    }
    std::env::set_current_dir(&m.cwd)
        .map_err(|e| Failure::flag("manifest", format!("working directory {}: {e}", m.cwd.display())))?;
    execute(m.argv)
}
