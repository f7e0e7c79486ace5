use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use emptyspot::clustering::{kmedoid, KMedoidParams};
use emptyspot::config::{render_manifest, ReportEntry, Settings};
use emptyspot::cooccurrence::{closeness_matrix, frequency};
use emptyspot::dataset::{auto_radius, build_hidden_set, hide_nodes, HidingSpec};
use emptyspot::error::{Error, Result};
use emptyspot::evaluation::{
    precision_curve, run_experiment, CenterLabel, DEFAULT_MIN_COVERAGE,
};
use emptyspot::graph::select_targets;
use emptyspot::predictor::{rank_baskets, ScoreVariant};
use emptyspot::{io, plot};

#[derive(Parser)]
#[command(
    name = "emptyspot",
    version,
    about = "Simulate social networks, hide nodes from basket records, and rank the baskets concealing them"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Master seed; all randomness derives from it
    #[arg(long, global = false)]
    seed: Option<u64>,
    /// Configuration file (flat `key = value`); flags override its values
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Output directory
    #[arg(long, value_name = "DIR", default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct GraphArgs {
    /// Network model to generate
    #[arg(long, value_parser = ["ba", "homogeneous", "ws"])]
    model: Option<String>,
    /// Node count
    #[arg(long)]
    n: Option<usize>,
    /// Links per new node (ba)
    #[arg(long)]
    m: Option<usize>,
    /// Minimum degree (homogeneous)
    #[arg(long)]
    d_min: Option<usize>,
    /// Maximum degree (homogeneous)
    #[arg(long)]
    d_max: Option<usize>,
    /// Degree distribution decay rate (homogeneous)
    #[arg(long)]
    lambda: Option<f64>,
    /// Ring lattice degree (ws)
    #[arg(long)]
    ring_degree: Option<usize>,
    /// Edge rewiring probability (ws)
    #[arg(long)]
    rewire_prob: Option<f64>,
}

impl GraphArgs {
    fn overlay(&self, s: &mut Settings) {
        overlay(s, "model", self.model.as_ref());
        overlay(s, "n", self.n);
        overlay(s, "m_links", self.m);
        overlay(s, "d_min", self.d_min);
        overlay(s, "d_max", self.d_max);
        overlay(s, "lambda", self.lambda);
        overlay(s, "ring_degree", self.ring_degree);
        overlay(s, "rewire_prob", self.rewire_prob);
    }
}

#[derive(Args)]
struct ExperimentArgs {
    /// Basket radius in hops, or `auto`
    #[arg(long)]
    radius: Option<String>,
    /// Number of nodes to hide around the trial center
    #[arg(long)]
    k_hidden: Option<usize>,
    /// Number of k-medoid clusters
    #[arg(long)]
    num_clusters: Option<usize>,
    /// Iteration budget of one clustering run
    #[arg(long)]
    max_iter: Option<usize>,
    /// Clustering restarts; the best objective wins
    #[arg(long)]
    restarts: Option<usize>,
    /// Trial centers, comma separated subset of a,b,c
    #[arg(long)]
    centers: Option<String>,
    /// Repetitions with distinct clustering seeds
    #[arg(long)]
    repetitions: Option<usize>,
    /// Explicit graph seed (default derives from the master seed)
    #[arg(long)]
    graph_seed: Option<u64>,
}

impl ExperimentArgs {
    fn overlay(&self, s: &mut Settings) {
        overlay(s, "radius", self.radius.as_ref());
        overlay(s, "k_hidden", self.k_hidden);
        overlay(s, "num_clusters", self.num_clusters);
        overlay(s, "max_iter", self.max_iter);
        overlay(s, "restarts", self.restarts);
        overlay(s, "centers", self.centers.as_ref());
        overlay(s, "repetitions", self.repetitions);
        overlay(s, "graph_seed", self.graph_seed);
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate a network model and write it as a graph file
    Generate {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        graph: GraphArgs,
    },
    /// Simulate basket records over a graph
    Simulate {
        #[command(flatten)]
        common: CommonArgs,
        /// Graph file to simulate over
        #[arg(long, value_name = "FILE")]
        graph: PathBuf,
        /// Basket radius in hops, or `auto`
        #[arg(long)]
        radius: Option<String>,
    },
    /// Hide a node set and write the observed dataset plus the ground truth
    Hide {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_name = "FILE")]
        graph: PathBuf,
        #[arg(long, value_name = "FILE")]
        dataset: PathBuf,
        /// Center of the hidden set: a, b, c or a node id
        #[arg(long, default_value = "a")]
        center: String,
        #[arg(long)]
        k_hidden: Option<usize>,
    },
    /// Cluster the observed nodes by Jaccard closeness
    Cluster {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_name = "FILE")]
        dataset: PathBuf,
        #[arg(long)]
        num_clusters: Option<usize>,
        #[arg(long)]
        max_iter: Option<usize>,
        #[arg(long)]
        restarts: Option<usize>,
        /// Also dump the closeness matrix as CSV
        #[arg(long)]
        dump_matrix: bool,
    },
    /// Score and rank baskets with the predictor function
    Rank {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_name = "FILE")]
        dataset: PathBuf,
        #[arg(long, value_name = "FILE")]
        clustering: PathBuf,
        /// Scoring rule
        #[arg(long, default_value = "inverse-frequency",
              value_parser = ["inverse-frequency", "eq11-literal"])]
        score_variant: String,
    },
    /// Compute the precision curve of a ranking against the hiding truth
    Evaluate {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_name = "FILE")]
        ranking: PathBuf,
        #[arg(long, value_name = "FILE")]
        truth: PathBuf,
    },
    /// Run the full pipeline for every trial center and write a manifest
    Experiment {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        experiment: ExperimentArgs,
    },
    /// Emit plot data (CSV) and a simple SVG rendering
    Plot {
        #[command(flatten)]
        common: CommonArgs,
        /// What to plot
        #[arg(long, value_parser = ["degree", "precision"])]
        kind: String,
        /// Graph file (degree plots)
        #[arg(long, value_name = "FILE")]
        graph: Option<PathBuf>,
        /// Precision CSV, repeatable (precision plots)
        #[arg(long = "curve", value_name = "FILE")]
        curves: Vec<PathBuf>,
    },
}

fn overlay(s: &mut Settings, key: &str, v: Option<impl ToString>) {
    if let Some(v) = v {
        s.set_flag(key, v.to_string());
    }
}

fn build_settings(common: &CommonArgs) -> Result<Settings> {
    let mut s = Settings::default();
    if let Some(path) = &common.config {
        let text = io::read_to_string(path)?;
        s.apply_file_str(&text, &path.display().to_string())?;
    }
    if let Some(seed) = common.seed {
        s.set_flag("seed", seed);
    }
    Ok(s)
}

fn prepare_out(common: &CommonArgs) -> Result<()> {
    std::fs::create_dir_all(&common.out)
        .map_err(|e| Error::io(&common.out.display().to_string(), e))
}

fn wrote(path: &Path) {
    println!("wrote {}", path.display());
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            if matches!(err.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{err}");
                return ExitCode::SUCCESS;
            }
            let first_line = err.to_string().lines().next().unwrap_or("usage error").to_string();
            eprintln!("{first_line}");
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::Parameter(_) => 1,
                Error::Parse { .. } | Error::Io { .. } => 2,
                Error::Generation(_) | Error::Structural(_) => 3,
            };
            ExitCode::from(code)
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Generate { common, graph } => cmd_generate(common, graph),
        Command::Simulate {
            common,
            graph,
            radius,
        } => cmd_simulate(common, graph, radius),
        Command::Hide {
            common,
            graph,
            dataset,
            center,
            k_hidden,
        } => cmd_hide(common, graph, dataset, center, k_hidden),
        Command::Cluster {
            common,
            dataset,
            num_clusters,
            max_iter,
            restarts,
            dump_matrix,
        } => cmd_cluster(common, dataset, num_clusters, max_iter, restarts, dump_matrix),
        Command::Rank {
            common,
            dataset,
            clustering,
            score_variant,
        } => cmd_rank(common, dataset, clustering, score_variant),
        Command::Evaluate {
            common,
            ranking,
            truth,
        } => cmd_evaluate(common, ranking, truth),
        Command::Experiment {
            common,
            graph,
            experiment,
        } => cmd_experiment(common, graph, experiment),
        Command::Plot {
            common,
            kind,
            graph,
            curves,
        } => cmd_plot(common, kind, graph, curves),
    }
}

fn cmd_generate(common: CommonArgs, graph: GraphArgs) -> Result<()> {
    let mut settings = build_settings(&common)?;
    graph.overlay(&mut settings);
    let spec = settings.graph_spec()?;
    let seed = settings.u64("seed")?;
    let g = spec.generate(seed)?;
    prepare_out(&common)?;
    let path = common.out.join("graph.txt");
    io::save_graph(&path, &g)?;
    wrote(&path);
    println!(
        "graph: {} nodes, {} edges, seed {seed}",
        g.node_count(),
        g.edge_count()
    );
    Ok(())
}

fn resolve_radius(
    settings: &Settings,
    flag: Option<String>,
    g: &emptyspot::graph::Graph,
) -> Result<u32> {
    let mut settings = settings.clone();
    if let Some(r) = flag {
        settings.set_flag("radius", r);
    }
    match settings.radius()? {
        Some(r) => Ok(r),
        None => auto_radius(g, DEFAULT_MIN_COVERAGE),
    }
}

fn cmd_simulate(common: CommonArgs, graph: PathBuf, radius: Option<String>) -> Result<()> {
    let settings = build_settings(&common)?;
    let g = io::load_graph(&graph)?;
    let radius = resolve_radius(&settings, radius, &g)?;
    let dataset = emptyspot::dataset::simulate_baskets(&g, radius)?;
    let coverage = emptyspot::dataset::coverage_fraction(&g, radius)?;
    prepare_out(&common)?;
    let path = common.out.join("dataset.txt");
    io::save_dataset(&path, &dataset)?;
    wrote(&path);
    println!(
        "dataset: {} baskets, radius {radius}, coverage {coverage:.3}",
        dataset.len()
    );
    Ok(())
}

fn cmd_hide(
    common: CommonArgs,
    graph: PathBuf,
    dataset: PathBuf,
    center: String,
    k_hidden: Option<usize>,
) -> Result<()> {
    let mut settings = build_settings(&common)?;
    overlay(&mut settings, "k_hidden", k_hidden);
    let g = io::load_graph(&graph)?;
    let d = io::load_dataset(&dataset)?;
    let center_node = match center.parse::<CenterLabel>() {
        Ok(label) => label.resolve(&select_targets(&g)?),
        Err(_) => center
            .parse::<u32>()
            .map_err(|_| Error::parameter(format!("center must be a, b, c or a node id, got '{center}'")))?,
    };
    let hidden = build_hidden_set(
        &g,
        &HidingSpec {
            center: center_node,
            k_hidden: settings.usize("k_hidden")?,
        },
    )?;
    let (observed, truth) = hide_nodes(&d, &hidden, &g)?;
    prepare_out(&common)?;
    let observed_path = common.out.join("observed.txt");
    let truth_path = common.out.join("truth.txt");
    io::save_dataset(&observed_path, &observed)?;
    io::save_truth(&truth_path, &truth)?;
    wrote(&observed_path);
    wrote(&truth_path);
    println!(
        "hidden {} nodes around {center_node}; {} of {} baskets modified",
        truth.hidden_nodes.len(),
        truth.modified_baskets.len(),
        observed.len()
    );
    Ok(())
}

fn cmd_cluster(
    common: CommonArgs,
    dataset: PathBuf,
    num_clusters: Option<usize>,
    max_iter: Option<usize>,
    restarts: Option<usize>,
    dump_matrix: bool,
) -> Result<()> {
    let mut settings = build_settings(&common)?;
    overlay(&mut settings, "num_clusters", num_clusters);
    overlay(&mut settings, "max_iter", max_iter);
    overlay(&mut settings, "restarts", restarts);
    let d = io::load_dataset(&dataset)?;
    let matrix = closeness_matrix(&d)?;
    let cl = kmedoid(
        &matrix,
        &KMedoidParams {
            num_clusters: settings.usize("num_clusters")?,
            seed: settings.u64("seed")?,
            max_iter: settings.usize("max_iter")?,
            restarts: settings.usize("restarts")?,
        },
    )?;
    prepare_out(&common)?;
    let path = common.out.join("clustering.txt");
    io::save_clustering(&path, &cl)?;
    wrote(&path);
    if dump_matrix {
        let matrix_path = common.out.join("closeness.csv");
        io::write_string(&matrix_path, &io::closeness_to_csv(&matrix))?;
        wrote(&matrix_path);
    }
    println!(
        "clustering: {} clusters over {} nodes, {} iterations{}",
        cl.num_clusters,
        matrix.dimension(),
        cl.iterations_run,
        if cl.zero_closeness_nodes > 0 {
            format!(", {} nodes with zero closeness to every medoid", cl.zero_closeness_nodes)
        } else {
            String::new()
        }
    );
    Ok(())
}

fn cmd_rank(
    common: CommonArgs,
    dataset: PathBuf,
    clustering: PathBuf,
    score_variant: String,
) -> Result<()> {
    let d = io::load_dataset(&dataset)?;
    let cl = io::load_clustering(&clustering)?;
    let variant = if score_variant == ScoreVariant::MinFrequency.name() {
        ScoreVariant::MinFrequency
    } else {
        ScoreVariant::InverseFrequency
    };
    let freq = frequency(&d);
    let ranked = rank_baskets(&d, &freq, &cl, variant)?;
    prepare_out(&common)?;
    let path = common.out.join("ranking.csv");
    io::save_ranking(&path, &ranked)?;
    wrote(&path);
    Ok(())
}

fn cmd_evaluate(common: CommonArgs, ranking: PathBuf, truth: PathBuf) -> Result<()> {
    let ranked = io::load_ranking(&ranking)?;
    let truth = io::load_truth(&truth)?;
    let curve = precision_curve(&ranked, &truth, ranked.order.len())?;
    prepare_out(&common)?;
    let path = common.out.join("precision.csv");
    io::write_string(&path, &io::precision_to_string(&curve))?;
    wrote(&path);
    println!(
        "precision: p(1) = {}, p(|b|) = {:.4}, {} modified baskets",
        curve.at(1),
        curve.at(curve.values.len()),
        curve.num_modified
    );
    Ok(())
}

fn cmd_experiment(common: CommonArgs, graph: GraphArgs, experiment: ExperimentArgs) -> Result<()> {
    let mut settings = build_settings(&common)?;
    graph.overlay(&mut settings);
    experiment.overlay(&mut settings);
    let config = settings.experiment_config()?;
    let result = run_experiment(&config)?;

    prepare_out(&common)?;
    let mut artifacts = Vec::new();
    let mut save = |name: String, content: String| -> Result<()> {
        let path = common.out.join(&name);
        io::write_string(&path, &content)?;
        wrote(&path);
        artifacts.push(name);
        Ok(())
    };
    save("graph.txt".into(), io::graph_to_string(&result.graph))?;
    save("dataset.txt".into(), io::dataset_to_string(&result.dataset))?;
    for trial in &result.trials {
        let label = trial.center.as_str();
        let (observed, truth) = hide_nodes(&result.dataset, &trial.truth.hidden_nodes, &result.graph)?;
        debug_assert_eq!(truth, trial.truth);
        save(format!("observed_{label}.txt"), io::dataset_to_string(&observed))?;
        save(format!("truth_{label}.txt"), io::truth_to_string(&trial.truth))?;
        save(
            format!("precision_{label}.csv"),
            io::precision_bands_to_string(&trial.mean, &trial.min, &trial.max),
        )?;
    }

    // Pin the resolved values so the manifest reproduces the run verbatim.
    settings.pin("radius", result.radius);
    settings.pin("graph_seed", config.graph_seed);
    let mut reports: Vec<ReportEntry> = vec![
        ("coverage".into(), io::fmt_sig12(result.coverage)),
        ("target_node_a".into(), result.targets.a.to_string()),
        ("target_node_b".into(), result.targets.b.to_string()),
        ("target_node_c".into(), result.targets.c.to_string()),
    ];
    for trial in &result.trials {
        let label = trial.center.as_str();
        reports.push((format!("center_node_{label}"), trial.center_node.to_string()));
        reports.push((format!("num_modified_{label}"), trial.num_modified.to_string()));
        reports.push((format!("baseline_{label}"), io::fmt_sig12(trial.baseline)));
        reports.push((
            format!("mean_head_precision_{label}"),
            io::fmt_sig12(trial.mean_precision_up_to(trial.num_modified.max(1))),
        ));
        reports.push((
            format!("spearman_eq11_literal_{label}"),
            io::fmt_sig12(trial.mean_spearman_variant()),
        ));
    }
    let manifest = render_manifest(
        &settings,
        &artifacts,
        &reports,
        env!("CARGO_PKG_VERSION"),
    )?;
    let manifest_path = common.out.join("manifest.cfg");
    io::write_string(&manifest_path, &manifest)?;
    wrote(&manifest_path);

    for trial in &result.trials {
        println!(
            "case {}: center {}, {}/{} baskets modified, baseline {:.3}, mean precision over top {} = {:.3}",
            trial.center,
            trial.center_node,
            trial.num_modified,
            result.dataset.len(),
            trial.baseline,
            trial.num_modified.max(1),
            trial.mean_precision_up_to(trial.num_modified.max(1)),
        );
    }
    Ok(())
}

fn cmd_plot(
    common: CommonArgs,
    kind: String,
    graph: Option<PathBuf>,
    curves: Vec<PathBuf>,
) -> Result<()> {
    prepare_out(&common)?;
    match kind.as_str() {
        "degree" => {
            let graph = graph
                .ok_or_else(|| Error::parameter("degree plots need --graph <file>"))?;
            let g = io::load_graph(&graph)?;
            let csv_path = common.out.join("degree_hist.csv");
            let svg_path = common.out.join("degree_hist.svg");
            io::write_string(&csv_path, &plot::degree_csv(&g)?)?;
            io::write_string(&svg_path, &plot::degree_svg(&g)?)?;
            wrote(&csv_path);
            wrote(&svg_path);
        }
        "precision" => {
            if curves.is_empty() {
                return Err(Error::parameter("precision plots need at least one --curve <file>"));
            }
            let mut series = Vec::new();
            for path in &curves {
                let label = path
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_else(|| path.display().to_string());
                series.push((label, io::load_precision_series(path)?));
            }
            let csv_path = common.out.join("precision_plot.csv");
            let svg_path = common.out.join("precision_plot.svg");
            io::write_string(&csv_path, &plot::precision_plot_csv(&series))?;
            io::write_string(&svg_path, &plot::precision_svg(&series))?;
            wrote(&csv_path);
            wrote(&svg_path);
        }
        other => return Err(Error::parameter(format!("unknown plot kind '{other}'"))),
    }
    Ok(())
}
