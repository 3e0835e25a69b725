use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, ValueEnum};
use hkc::data::{ari, nmi, save_assignments};
use hkc::dendro::{ahc_build, contraction_trace, dendrogram_purity, tsc_local, DendrogramDocument};
use hkc::hkc::{Clusterer, KernelChoice};
use hkc::ikernel::{fit_isolation_model, DistributionalKernel, GaussianSpace, IsolationSpace};
use hkc::{bisect_kmeans, run_hkc, BisectConfig, Dendrogram, HkcConfig, Matrix};

use crate::error::{usage, CliResult};
use crate::io::{ensure_dir, load_dataset};
use crate::manifest::RunManifest;
use crate::{Algo, OutDir};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KernelFlag {
    Idk,
    Gdk,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ClustererFlag {
    Kpskc,
    Kmeans,
    IkDbscan,
}

#[derive(Debug, Args)]
pub struct ClusterArgs {
    /// Input CSV with a header row.
    #[arg(long = "in")]
    input: PathBuf,
    /// Ground-truth label column (default: `label` when present).
    #[arg(long)]
    label_column: Option<String>,
    #[arg(long, value_enum, default_value_t = Algo::Hkc)]
    algo: Algo,
    /// Number of leaves.
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 16)]
    psi: usize,
    #[arg(long, default_value_t = 200)]
    t: usize,
    #[arg(long, default_value_t = 0.01)]
    tau: f64,
    #[arg(long, default_value_t = 0.1)]
    rho: f64,
    /// Core-cluster subset size (default: all points).
    #[arg(long)]
    subset_size: Option<usize>,
    #[arg(long, value_enum, default_value_t = KernelFlag::Idk)]
    kernel: KernelFlag,
    /// Gaussian bandwidth (default: median heuristic).
    #[arg(long)]
    bandwidth: Option<f64>,
    #[arg(long, value_enum, default_value_t = ClustererFlag::Kpskc)]
    clusterer: ClustererFlag,
    /// k-means restarts, for `--clusterer kmeans` and `--algo bisect-kmeans`.
    #[arg(long, default_value_t = 10)]
    restarts: usize,
    #[arg(long, default_value_t = 0.3)]
    eps_sim: f64,
    #[arg(long, default_value_t = 5)]
    min_pts: usize,
    #[arg(long)]
    no_refine: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    dir: OutDir,
}

impl ClusterArgs {
    fn hkc_config(&self, n: usize) -> HkcConfig {
        let mut c = HkcConfig::new(self.subset_size.unwrap_or(n), self.k, self.psi);
        c.t = self.t;
        c.tau = self.tau;
        c.rho = self.rho;
        c.seed = self.seed;
        c.refine = !self.no_refine;
        c.kernel = match self.kernel {
            KernelFlag::Idk => KernelChoice::Idk,
            KernelFlag::Gdk => KernelChoice::Gdk {
                bandwidth: self.bandwidth,
            },
        };
        c.clusterer = match self.clusterer {
            ClustererFlag::Kpskc => Clusterer::Kpskc,
            ClustererFlag::Kmeans => Clusterer::Kmeans { restarts: self.restarts },
            ClustererFlag::IkDbscan => Clusterer::IkDbscan {
                eps_sim: self.eps_sim,
                min_pts: self.min_pts,
            },
        };
        c
    }
}

struct Outcome {
    tree: Dendrogram,
    /// Final cluster per point; `None` for points with zero similarity to
    /// every cluster.
    assignments: Vec<Option<usize>>,
    space: IsolationSpace,
    tsc_local: Option<f64>,
    metrics: Vec<(&'static str, f64)>,
    timings: Vec<(&'static str, f64)>,
    warnings: Vec<String>,
    config: serde_json::Value,
}

fn cluster_sets(tree: &Dendrogram) -> CliResult<Vec<Vec<usize>>> {
    Ok((0..tree.num_clusters()).map(|c| tree.cluster_points(c).map(<[usize]>::to_vec)).collect::<Result<_, _>>()?)
}

fn mark_orphans<K: DistributionalKernel>(kernel: &K, tree: &Dendrogram) -> CliResult<Vec<Option<usize>>> {
    let sets = cluster_sets(tree)?;
    let mut out = vec![None; tree.num_points()];
    for (c, members) in sets.iter().enumerate() {
        if members.is_empty() {
            continue;
        }
        let emb = kernel.embed(members)?;
        for &x in members {
            out[x] = (kernel.point_similarity(x, &emb) > 0.0).then_some(c);
        }
    }
    Ok(out)
}

fn run_tree_algo(args: &ClusterArgs, data: &Matrix) -> CliResult<Outcome> {
    let config = args.hkc_config(data.nrows());
    let result = run_hkc(data, &config)?;
    let space = IsolationSpace::new(result.model.clone(), data)?;
    let mut timings = vec![
        ("fit", result.timings.fit),
        ("cores", result.timings.cores),
        ("tree", result.timings.tree),
        ("assign", result.timings.assign),
        ("refine", result.timings.refine),
    ];
    let mut metrics = vec![
        ("k", result.k() as f64),
        ("core_points", result.cores.clusters.iter().map(Vec::len).sum::<usize>() as f64),
        ("refine_iterations", result.iterations as f64),
        ("tsc_local_before_refine", result.tsc_before_refine),
    ];
    let mut tree = result.tree.clone();
    if args.algo == Algo::Ahc && result.k() >= 2 {
        let start = Instant::now();
        let mut ahc = match result.bandwidth {
            Some(bw) => ahc_build(&result.cores, &GaussianSpace::new(data.clone(), bw)?)?,
            None => ahc_build(&result.cores, &space)?,
        };
        ahc.finalize(cluster_sets(&result.tree)?, data.nrows())?;
        timings.push(("ahc", start.elapsed().as_secs_f64()));
        metrics.push(("same_topology_as_divisive", f64::from(u8::from(ahc.same_topology(&result.tree)))));
        tree = ahc;
    }
    let (assignments, tsc) = match result.bandwidth {
        Some(bw) => {
            metrics.push(("bandwidth", bw));
            let gauss = GaussianSpace::new(data.clone(), bw)?;
            (mark_orphans(&gauss, &tree)?, tsc_local(&tree, &gauss)?)
        }
        None => (mark_orphans(&space, &tree)?, tsc_local(&tree, &space)?),
    };
    Ok(Outcome {
        tree,
        assignments,
        space,
        tsc_local: Some(tsc),
        metrics,
        timings,
        warnings: result.warnings,
        config: serde_json::to_value(&config)?,
    })
}

fn run_bisect(args: &ClusterArgs, data: &Matrix) -> CliResult<Outcome> {
    let config = BisectConfig {
        k: args.k,
        restarts: args.restarts,
        seed: args.seed,
    };
    let start = Instant::now();
    let result = bisect_kmeans(data, &config)?;
    let elapsed = start.elapsed().as_secs_f64();
    // The isolation model only serves the exported split distances.
    let space = IsolationSpace::new(fit_isolation_model(data, args.psi, args.t, args.seed)?, data)?;
    Ok(Outcome {
        assignments: result.assignments.iter().map(|&c| Some(c)).collect(),
        tree: result.tree,
        space,
        tsc_local: None,
        metrics: vec![("k", args.k as f64)],
        timings: vec![("bisect", elapsed)],
        warnings: result.warnings,
        config: serde_json::json!({ "bisect": config, "psi": args.psi, "t": args.t }),
    })
}

pub fn run(args: ClusterArgs) -> CliResult<()> {
    if args.k < 1 {
        return usage("--k must be at least 1");
    }
    let ds = load_dataset(&args.input, args.label_column.as_deref())?;
    if let Some(s) = args.subset_size {
        if s > ds.len() {
            return usage(format!("--subset-size {s} exceeds the {} points in {}", ds.len(), args.input.display()));
        }
    }
    let outcome = match args.algo {
        Algo::Hkc | Algo::Ahc => run_tree_algo(&args, &ds.points)?,
        Algo::BisectKmeans => run_bisect(&args, &ds.points)?,
    };

    let algo_name = match args.algo {
        Algo::Hkc => "h-kc",
        Algo::BisectKmeans => "bisect-kmeans",
        Algo::Ahc => "ahc",
    };
    let mut manifest = RunManifest::new("cluster", outcome.config.clone(), args.seed);
    manifest.config["algo"] = algo_name.into();
    manifest.set_input(&args.input)?;
    for (k, v) in &outcome.timings {
        manifest.timings.insert((*k).into(), *v);
    }
    for (k, v) in &outcome.metrics {
        manifest.metrics.insert((*k).into(), *v);
    }
    if let Some(t) = outcome.tsc_local {
        manifest.metrics.insert("tsc_local".into(), t);
    }
    let orphans = outcome.assignments.iter().filter(|a| a.is_none()).count();
    manifest.metrics.insert("orphans".into(), orphans as f64);
    if let Some(labels) = &ds.labels {
        let flat = outcome.tree.leaf_assignment()?;
        manifest.metrics.insert("purity".into(), dendrogram_purity(&outcome.tree, labels)?);
        manifest.metrics.insert("nmi".into(), nmi(&flat, labels)?);
        manifest.metrics.insert("ari".into(), ari(&flat, labels)?);
    }
    manifest.warnings = outcome.warnings.clone();

    let dir = &args.dir.out_dir;
    ensure_dir(dir)?;
    let trace = contraction_trace(&outcome.tree, &outcome.space)?;
    let doc = DendrogramDocument::from_tree(&outcome.tree, algo_name, Some(&trace.alphas()))?;
    let paths = [
        ("newick", dir.join("tree.nwk")),
        ("tree", dir.join("tree.json")),
        ("assignments", dir.join("assignments.csv")),
        ("model", dir.join("model.json")),
        ("manifest", dir.join("manifest.json")),
    ];
    std::fs::write(&paths[0].1, outcome.tree.to_newick() + "\n")?;
    doc.save_json(&paths[1].1)?;
    save_assignments(&paths[2].1, &outcome.assignments)?;
    outcome.space.model().save_json(&paths[3].1)?;
    for (name, path) in &paths {
        manifest.outputs.insert((*name).into(), path.clone());
    }
    manifest.save(&paths[4].1)?;

    for w in &outcome.warnings {
        eprintln!("warning: {w}");
    }
    println!("{algo_name}: {} leaves over {} points", outcome.tree.num_leaves(), ds.len());
    for (k, v) in &manifest.metrics {
        println!("  {k:<28} {v:.6}");
    }
    println!("outputs in {}", dir.display());
    Ok(())
}
