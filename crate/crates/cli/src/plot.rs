use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::Args;
use hkc::data::load_assignments;

use crate::error::{usage, CliResult};
use crate::io::load_dataset;

pub const NOISE_COLOR: &str = "#9e9e9e";
const SIZE: f64 = 600.0;
const MARGIN: f64 = 20.0;

#[derive(Debug, Args)]
pub struct PlotArgs {
    /// 2-D dataset CSV.
    #[arg(long = "in")]
    input: PathBuf,
    /// Assignment CSV (`index,cluster`; -1 marks noise).
    #[arg(long)]
    assignments: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 2.0)]
    radius: f64,
}

/// Evenly spaced hues, one per cluster.
pub fn palette(k: usize) -> Vec<String> {
    (0..k).map(|i| format!("hsl({:.1},70%,45%)", 360.0 * i as f64 / k.max(1) as f64)).collect()
}

pub fn run(args: PlotArgs) -> CliResult<()> {
    let ds = load_dataset(&args.input, None)?;
    if ds.dim() != 2 {
        return usage(format!("plot needs 2-D data, {} has {} columns", args.input.display(), ds.dim()));
    }
    let assignments = load_assignments(&args.assignments)?;
    if assignments.len() != ds.len() {
        return usage(format!("{} assignments for {} points", assignments.len(), ds.len()));
    }
    let clusters: Vec<usize> = assignments.iter().flatten().copied().collect::<BTreeSet<_>>().into_iter().collect();
    let colors = palette(clusters.len());

    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for row in ds.points.rows_iter() {
        for c in 0..2 {
            lo[c] = lo[c].min(row[c]);
            hi[c] = hi[c].max(row[c]);
        }
    }
    let span = (0..2).map(|c| (hi[c] - lo[c]).max(f64::EPSILON)).fold(0.0, f64::max);
    let scale = (SIZE - 2.0 * MARGIN) / span;

    let mut svg = String::new();
    writeln!(svg, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#).unwrap();
    writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    for (row, a) in ds.points.rows_iter().zip(&assignments) {
        let x = MARGIN + (row[0] - lo[0]) * scale;
        let y = SIZE - MARGIN - (row[1] - lo[1]) * scale;
        let fill = match a {
            Some(c) => colors[clusters.binary_search(c).unwrap()].as_str(),
            None => NOISE_COLOR,
        };
        writeln!(svg, r#"<circle cx="{x:.2}" cy="{y:.2}" r="{}" fill="{fill}"/>"#, args.radius).unwrap();
    }
    svg.push_str("</svg>\n");
    std::fs::write(&args.out, svg)?;
    println!("wrote {} ({} points, {} clusters)", args.out.display(), ds.len(), clusters.len());
    Ok(())
}
