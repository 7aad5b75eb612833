use std::path::{Path, PathBuf};

use blowup_core::constructions::{
    behrend_benchmark, behrend_set, k112_extremal_graph, rs_graph, ApFreeSet, RsCertificate,
};
use blowup_core::graph::{
    blowup, complete_multipartite, random_graph, tensor_power_with_budget, uniform_blowup, DEFAULT_TENSOR_VERTEX_BUDGET,
};
use blowup_core::io::{save_certificate, save_graph, save_set};
use blowup_core::Graph;
use clap::{Args, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::failure::{CmdResult, Failure, FlagContext};
use crate::{emit, load_graph, load_set, Outcome};

#[derive(Debug, Args, Serialize)]
pub struct GenArgs {
    #[command(subcommand)]
    pub kind: GenKind,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GenKind {
    /// G(n, p) from a seeded ChaCha8 stream.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Blowup of a graph file: `--q` for uniform classes or `--sizes` per vertex.
    Blowup {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, conflicts_with = "sizes", required_unless_present = "sizes")]
        q: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        sizes: Option<Vec<usize>>,
        #[arg(long)]
        out: PathBuf,
    },
    /// k-th tensor power of a graph file.
    Tensor {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = DEFAULT_TENSOR_VERTEX_BUDGET)]
        max_vertices: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Complete multipartite graph, e.g. `--sizes 2,2,2`.
    Multipartite {
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Behrend 3AP-free subset of [1, n], written as a set file.
    Behrend {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Ruzsa-Szemeredi graph with its set file and triangle certificate.
    Rs {
        #[arg(long)]
        m: usize,
        /// 3AP-free set file; defaults to the Behrend set for `m`.
        #[arg(long)]
        set: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Uniform q-blowup of the Behrend RS graph on m, with the base certificate.
    K112Extremal {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        q: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

impl GenKind {
    pub fn name(&self) -> &'static str {
        match self {
            GenKind::Random { .. } => "random",
            GenKind::Blowup { .. } => "blowup",
            GenKind::Tensor { .. } => "tensor",
            GenKind::Multipartite { .. } => "multipartite",
            GenKind::Behrend { .. } => "behrend",
            GenKind::Rs { .. } => "rs",
            GenKind::K112Extremal { .. } => "k112-extremal",
        }
    }

    pub fn out(&self) -> &Path {
        match self {
            GenKind::Random { out, .. }
            | GenKind::Blowup { out, .. }
            | GenKind::Tensor { out, .. }
            | GenKind::Multipartite { out, .. }
            | GenKind::Behrend { out, .. }
            | GenKind::Rs { out, .. }
            | GenKind::K112Extremal { out, .. } => out,
        }
    }
}

/// `dir/name.txt` becomes `dir/name.<suffix>`.
fn sibling(out: &Path, suffix: &str) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    out.with_file_name(format!("{stem}.{suffix}"))
}

fn write_graph(g: &Graph, out: &Path) -> CmdResult<()> {
    save_graph(g, out).map_err(|e| Failure::flag("--out", format!("{}: {e}", out.display())))
}

fn graph_summary(kind: &str, g: &Graph, out: &Path) -> serde_json::Value {
    json!({
        "kind": kind,
        "out": out,
        "n": g.n(),
        "m": g.edge_count(),
        "label": g.label(),
    })
}

/// Writes the set file and certificate beside `out`; returns their paths.
fn write_rs_files(set: &ApFreeSet, cert: &RsCertificate, out: &Path) -> CmdResult<[PathBuf; 2]> {
    let set_path = sibling(out, "set.txt");
    let cert_path = sibling(out, "cert.json");
    save_set(set, &set_path).map_err(|e| Failure::flag("--out", format!("{}: {e}", set_path.display())))?;
    let set_name = set_path.file_name().expect("file name").to_string_lossy();
    save_certificate(cert, &set_name, &cert_path)
        .map_err(|e| Failure::flag("--out", format!("{}: {e}", cert_path.display())))?;
    Ok([set_path, cert_path])
}

pub fn run(args: &GenArgs) -> CmdResult<Outcome> {
    let kind = args.kind.name();
    let mut outcome = Outcome::default();
    match &args.kind {
        GenKind::Random { n, p, seed, out } => {
            if !(0.0..=1.0).contains(p) {
                return Err(Failure::flag("--p", format!("must lie in [0, 1], got {p}")));
            }
            let g = random_graph(*n, *p, *seed).flag("--n")?;
            write_graph(&g, out)?;
            outcome.seed = Some(*seed);
            outcome.outputs.push(out.clone());
            emit(&graph_summary(kind, &g, out));
        }
        GenKind::Blowup { input, q, sizes, out } => {
            let g = load_graph(input)?;
            let (b, _) = match (q, sizes) {
                (Some(q), _) => uniform_blowup(&g, *q).flag("--q")?,
                (None, Some(sizes)) => blowup(&g, sizes).flag("--sizes")?,
                (None, None) => return Err(Failure::flag("--q", "give --q or --sizes")),
            };
            write_graph(&b, out)?;
            outcome.inputs.push(input.clone());
            outcome.outputs.push(out.clone());
            emit(&graph_summary(kind, &b, out));
        }
        GenKind::Tensor { input, k, max_vertices, out } => {
            let g = load_graph(input)?;
            let t = tensor_power_with_budget(&g, *k, *max_vertices).flag("--k")?;
            write_graph(&t, out)?;
            outcome.inputs.push(input.clone());
            outcome.outputs.push(out.clone());
            emit(&graph_summary(kind, &t, out));
        }
        GenKind::Multipartite { sizes, out } => {
            let g = complete_multipartite(sizes).flag("--sizes")?;
            write_graph(&g, out)?;
            outcome.outputs.push(out.clone());
            emit(&graph_summary(kind, &g, out));
        }
        GenKind::Behrend { n, out } => {
            let set = behrend_set(*n).flag("--n")?;
            save_set(&set, out).map_err(|e| Failure::flag("--out", format!("{}: {e}", out.display())))?;
            outcome.outputs.push(out.clone());
            let bench = behrend_benchmark(*n);
            emit(&json!({
                "kind": kind,
                "out": out,
                "n": n,
                "size": set.len(),
                "size_log2": (set.len() as f64).log2(),
                "benchmark": bench,
                "benchmark_log2": bench.log2(),
            }));
        }
        GenKind::Rs { m, set, out } => {
            let set = match set {
                Some(path) => {
                    outcome.inputs.push(path.clone());
                    load_set(path)?
                }
                None => behrend_set(*m as u64).flag("--m")?,
            };
            let (g, cert) = rs_graph(*m, &set).flag("--m")?;
            write_graph(&g, out)?;
            outcome.outputs.push(out.clone());
            outcome.outputs.extend(write_rs_files(&set, &cert, out)?);
            let mut summary = graph_summary(kind, &g, out);
            summary["set_size"] = json!(set.len());
            summary["triangles"] = json!(cert.triangles.len());
            emit(&summary);
        }
        GenKind::K112Extremal { m, q, out } => {
            let (g, _, cert) = k112_extremal_graph(*m, *q).flag("--m")?;
            write_graph(&g, out)?;
            outcome.outputs.push(out.clone());
            outcome.outputs.extend(write_rs_files(&cert.set, &cert, out)?);
            let s = cert.set.len();
            let base = 6 * *m as u128 * s as u128;
            let mut summary = graph_summary(kind, &g, out);
            summary["set_size"] = json!(s);
            summary["hom_k3"] = json!((base * (*q as u128).pow(3)).to_string());
            summary["hom_k112"] = json!((base * (*q as u128).pow(4)).to_string());
            emit(&summary);
        }
    }
    Ok(outcome)
}
