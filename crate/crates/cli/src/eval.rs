use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use hkc::data::{ari, nmi};
use hkc::dendro::{dendrogram_purity, tsc_local, DendrogramDocument};
use hkc::ikernel::{IsolationSpace, PartitioningModel};

use crate::error::{usage, CliResult};
use crate::io::load_dataset;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Metric {
    Purity,
    Nmi,
    Ari,
    Tsc,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Dendrogram JSON written by `hkc cluster`.
    #[arg(long)]
    tree: PathBuf,
    /// Dataset CSV holding the ground-truth labels (and the points, for tsc).
    #[arg(long)]
    labels: PathBuf,
    #[arg(long)]
    label_column: Option<String>,
    /// Isolation model JSON, needed for `tsc`.
    #[arg(long)]
    model: Option<PathBuf>,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "purity,nmi,ari")]
    metrics: Vec<Metric>,
    /// Also write the report as JSON.
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn run(args: EvalArgs) -> CliResult<()> {
    let tree = DendrogramDocument::load_json(&args.tree)?.to_tree()?;
    if !tree.is_finalized() {
        return usage(format!("{} holds no point assignment", args.tree.display()));
    }
    let ds = load_dataset(&args.labels, args.label_column.as_deref())?;
    if ds.len() != tree.num_points() {
        return usage(format!("tree covers {} points but {} has {}", tree.num_points(), args.labels.display(), ds.len()));
    }
    let needs_labels = args.metrics.iter().any(|m| *m != Metric::Tsc);
    let labels = match (&ds.labels, needs_labels) {
        (Some(l), _) => l.clone(),
        (None, true) => return usage(format!("{} has no label column", args.labels.display())),
        (None, false) => Vec::new(),
    };

    let flat = tree.leaf_assignment()?;
    let mut report = BTreeMap::new();
    for m in &args.metrics {
        let (name, value) = match m {
            Metric::Purity => ("purity", dendrogram_purity(&tree, &labels)?),
            Metric::Nmi => ("nmi", nmi(&flat, &labels)?),
            Metric::Ari => ("ari", ari(&flat, &labels)?),
            Metric::Tsc => {
                let Some(path) = &args.model else {
                    return usage("the tsc metric needs --model");
                };
                let space = IsolationSpace::new(PartitioningModel::load_json(path)?, &ds.points)?;
                ("tsc_local", tsc_local(&tree, &space)?)
            }
        };
        report.insert(name, value);
    }

    println!("{:<10} value", "metric");
    for (k, v) in &report {
        println!("{k:<10} {v:.6}");
    }
    if let Some(out) = &args.out {
        std::fs::write(out, serde_json::to_string_pretty(&report)? + "\n")?;
    }
    Ok(())
}
