use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use clap::Args;
use hkc::data::{generate_mixture, paper_analog_spec, save_csv, MixtureSpec, PAPER_ANALOG_SEED, PAPER_ANALOG_VERSION};

use crate::error::{usage, CliResult};
use crate::io::ensure_dir;
use crate::manifest::RunManifest;
use crate::OutDir;

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Built-in mixture: `paper-analog`.
    #[arg(long, conflicts_with = "spec", required_unless_present = "spec")]
    preset: Option<String>,
    /// JSON mixture description.
    #[arg(long)]
    spec: Option<PathBuf>,
    #[arg(long, default_value_t = PAPER_ANALOG_SEED)]
    seed: u64,
    /// Multiply every component size.
    #[arg(long, default_value_t = 1)]
    scale: usize,
    /// Dataset path (default: `<out-dir>/<name>.csv`).
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    dir: OutDir,
}

pub fn preset(name: &str) -> CliResult<MixtureSpec> {
    match name {
        "paper-analog" => Ok(paper_analog_spec()),
        other => usage(format!("unknown preset '{other}' (available: paper-analog)")),
    }
}

pub fn run(args: GenerateArgs) -> CliResult<()> {
    let spec = match (&args.preset, &args.spec) {
        (Some(name), _) => preset(name)?,
        (None, Some(path)) => {
            let text = fs::read_to_string(path).map_err(hkc::Error::from)?;
            serde_json::from_str::<MixtureSpec>(&text)
                .map_err(|e| crate::error::CliError::Usage(format!("bad mixture spec {}: {e}", path.display())))?
        }
        (None, None) => return usage("either --preset or --spec is required"),
    };
    if args.scale == 0 {
        return usage("--scale must be at least 1");
    }
    let spec = if args.scale == 1 { spec } else { spec.scaled(args.scale) };
    let start = Instant::now();
    let ds = generate_mixture(&spec, args.seed)?;
    let out = args.out.unwrap_or_else(|| args.dir.out_dir.join(format!("{}.csv", spec.name)));
    if let Some(parent) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
        ensure_dir(parent)?;
    }
    save_csv(&out, &ds)?;

    let mut manifest = RunManifest::new(
        "generate",
        serde_json::json!({ "spec": spec, "scale": args.scale, "preset_version": PAPER_ANALOG_VERSION }),
        args.seed,
    );
    manifest.timings.insert("generate".into(), start.elapsed().as_secs_f64());
    manifest.outputs.insert("dataset".into(), out.clone());
    manifest.metrics.insert("n".into(), ds.len() as f64);
    manifest.metrics.insert("d".into(), ds.dim() as f64);
    let manifest_path = out.with_extension("manifest.json");
    manifest.outputs.insert("manifest".into(), manifest_path.clone());
    manifest.save(&manifest_path)?;
    println!("wrote {} ({} points, {} dims, {} classes)", out.display(), ds.len(), ds.dim(), spec.components.len());
    Ok(())
}
