use std::collections::HashMap;
use std::fmt::Write as _;
use std::time::Instant;

use clap::Args;
use hkc::data::generate_mixture;
use hkc::{bisect_kmeans, run_hkc, BisectConfig, HkcConfig};

use crate::error::{usage, CliResult};
use crate::generate::preset;
use crate::io::ensure_dir;
use crate::manifest::RunManifest;
use crate::OutDir;

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Size multipliers of the base mixture, e.g. `1x,2x,4x,8x`.
    #[arg(long, value_delimiter = ',', value_parser = parse_factor, default_value = "1x,2x,4x,8x")]
    sizes: Vec<usize>,
    /// Also time H-KC at the base size for each of these subset sizes.
    #[arg(long, value_delimiter = ',')]
    subset_sweep: Vec<usize>,
    #[arg(long, default_value_t = 3)]
    repeats: usize,
    #[arg(long, default_value = "paper-analog")]
    preset: String,
    #[arg(long, default_value_t = 1000)]
    subset_size: usize,
    #[arg(long, default_value_t = 6)]
    k: usize,
    #[arg(long, default_value_t = 24)]
    psi: usize,
    #[arg(long, default_value_t = 200)]
    t: usize,
    #[arg(long, default_value_t = 0.05)]
    tau: f64,
    #[arg(long, default_value_t = 10)]
    restarts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    dir: OutDir,
}

fn parse_factor(s: &str) -> Result<usize, String> {
    let digits = s.trim().trim_end_matches(['x', 'X']);
    match digits.parse::<usize>() {
        Ok(f) if f >= 1 => Ok(f),
        _ => Err(format!("'{s}' is not a size multiplier like 2x")),
    }
}

fn median(v: &mut [f64]) -> f64 {
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

struct Row {
    axis: &'static str,
    algo: &'static str,
    n: usize,
    s: usize,
    times: Vec<f64>,
}

pub fn run(args: BenchArgs) -> CliResult<()> {
    if args.sizes.is_empty() {
        return usage("--sizes needs at least one multiplier");
    }
    if args.repeats == 0 {
        return usage("--repeats must be at least 1");
    }
    let base = preset(&args.preset)?;
    let mut rows = Vec::new();
    let time = |f: &mut dyn FnMut() -> CliResult<()>| -> CliResult<Vec<f64>> {
        (0..args.repeats)
            .map(|_| {
                let start = Instant::now();
                f()?;
                Ok(start.elapsed().as_secs_f64())
            })
            .collect()
    };
    let hkc_config = |s: usize| {
        let mut c = HkcConfig::new(s, args.k, args.psi);
        c.t = args.t;
        c.tau = args.tau;
        c.seed = args.seed;
        c
    };

    for &factor in &args.sizes {
        let ds = generate_mixture(&base.scaled(factor), args.seed)?;
        let n = ds.len();
        if args.subset_size > n {
            return usage(format!("--subset-size {} exceeds n = {n}", args.subset_size));
        }
        let config = hkc_config(args.subset_size);
        let times = time(&mut || run_hkc(&ds.points, &config).map(|_| ()).map_err(Into::into))?;
        rows.push(Row { axis: "n", algo: "h-kc", n, s: args.subset_size, times });
        let bisect = BisectConfig { k: args.k, restarts: args.restarts, seed: args.seed };
        let times = time(&mut || bisect_kmeans(&ds.points, &bisect).map(|_| ()).map_err(Into::into))?;
        rows.push(Row { axis: "n", algo: "bisect-kmeans", n, s: 0, times });
    }
    if !args.subset_sweep.is_empty() {
        let ds = generate_mixture(&base, args.seed)?;
        for &s in &args.subset_sweep {
            if s == 0 || s > ds.len() {
                return usage(format!("subset size {s} outside 1..={}", ds.len()));
            }
            let config = hkc_config(s);
            let times = time(&mut || run_hkc(&ds.points, &config).map(|_| ()).map_err(Into::into))?;
            rows.push(Row { axis: "s", algo: "h-kc", n: ds.len(), s, times });
        }
    }

    let mut csv = String::from("axis,algo,n,s,repeat,seconds\n");
    for r in &rows {
        for (i, t) in r.times.iter().enumerate() {
            writeln!(csv, "{},{},{},{},{},{}", r.axis, r.algo, r.n, r.s, i, t).unwrap();
        }
    }
    ensure_dir(&args.dir.out_dir)?;
    let csv_path = args.dir.out_dir.join("bench.csv");
    std::fs::write(&csv_path, csv)?;

    let mut manifest = RunManifest::new(
        "bench",
        serde_json::json!({
            "preset": args.preset, "sizes": args.sizes, "subset_sweep": args.subset_sweep,
            "repeats": args.repeats, "subset_size": args.subset_size, "k": args.k,
            "psi": args.psi, "t": args.t, "tau": args.tau, "restarts": args.restarts,
        }),
        args.seed,
    );
    println!("{:<5} {:<14} {:>7} {:>6} {:>10} {:>7}", "axis", "algo", "n", "s", "median_s", "ratio");
    let mut prev: HashMap<(&str, &str), f64> = HashMap::new();
    for r in &rows {
        let m = median(&mut r.times.clone());
        let ratio = match prev.insert((r.axis, r.algo), m) {
            Some(p) if p > 0.0 => format!("{:.2}", m / p),
            _ => "-".into(),
        };
        println!("{:<5} {:<14} {:>7} {:>6} {:>10.4} {:>7}", r.axis, r.algo, r.n, r.s, m, ratio);
        manifest.timings.insert(format!("{}/{}/n={}/s={}", r.axis, r.algo, r.n, r.s), m);
    }
    manifest.outputs.insert("csv".into(), csv_path);
    let manifest_path = args.dir.out_dir.join("bench.manifest.json");
    manifest.outputs.insert("manifest".into(), manifest_path.clone());
    manifest.save(&manifest_path)?;
    Ok(())
}
