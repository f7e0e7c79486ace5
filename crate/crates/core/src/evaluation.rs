//! Precision evaluation of the basket ranking and the three-trial-case
//! experiment: hide a node set around each target node, rank the observed
//! baskets, and measure how many of the top retrievals were really modified.

use crate::clustering::{kmedoid, KMedoidParams};
use crate::cooccurrence::{closeness_matrix, frequency};
use crate::dataset::{build_hidden_set, hide_nodes, simulate_baskets, HiddenTruth, HidingSpec};
use crate::dataset::{auto_radius, Dataset};
use crate::error::{Error, Result};
use crate::generators::{generate_ba, generate_homogeneous, generate_ws};
use crate::graph::{select_targets, Graph, TargetNodes};
use crate::predictor::{rank_baskets, spearman, RankedBaskets, ScoreVariant};
use crate::rng::derive_seed;

/// Precision of the ranking at every retrieval depth `m = 1..=|b|`.
#[derive(Debug, Clone, PartialEq)]
pub struct PrecisionCurve {
    /// `values[m - 1]` is the fraction of the top `m` baskets that were
    /// modified by the hiding step.
    pub values: Vec<f64>,
    pub num_modified: usize,
}

impl PrecisionCurve {
    /// p(m) for 1-based retrieval depth `m`.
    pub fn at(&self, m: usize) -> f64 {
        self.values[m - 1]
    }
}

/// Computes the precision curve of a ranking against the hiding truth.
pub fn precision_curve(
    ranked: &RankedBaskets,
    truth: &HiddenTruth,
    total_baskets: usize,
) -> Result<PrecisionCurve> {
    if ranked.order.len() != total_baskets {
        return Err(Error::structural(format!(
            "ranking covers {} of {total_baskets} baskets",
            ranked.order.len()
        )));
    }
    let mut seen = vec![false; total_baskets];
    for &b in &ranked.order {
        if b >= total_baskets || seen[b] {
            return Err(Error::structural(
                "ranking is not a permutation of the basket indices",
            ));
        }
        seen[b] = true;
    }
    if let Some(&bad) = truth.modified_baskets.iter().find(|&&i| i >= total_baskets) {
        return Err(Error::structural(format!(
            "modified basket index {bad} out of range"
        )));
    }
    let mut values = Vec::with_capacity(total_baskets);
    let mut hits = 0usize;
    for (pos, &basket) in ranked.order.iter().enumerate() {
        if truth.modified_baskets.contains(&basket) {
            hits += 1;
        }
        values.push(hits as f64 / (pos + 1) as f64);
    }
    Ok(PrecisionCurve {
        values,
        num_modified: truth.modified_baskets.len(),
    })
}

/// The three hiding centers evaluated by the experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CenterLabel {
    /// Largest nodal degree.
    A,
    /// Smallest standard deviation of the distance to all other nodes.
    B,
    /// Smallest mean distance to all other nodes.
    C,
}

impl CenterLabel {
    pub fn all() -> [CenterLabel; 3] {
        [CenterLabel::A, CenterLabel::B, CenterLabel::C]
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            CenterLabel::A => "a",
            CenterLabel::B => "b",
            CenterLabel::C => "c",
        }
    }

    pub fn resolve(&self, targets: &TargetNodes) -> u32 {
        match self {
            CenterLabel::A => targets.a,
            CenterLabel::B => targets.b,
            CenterLabel::C => targets.c,
        }
    }
}

impl std::fmt::Display for CenterLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for CenterLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "a" => Ok(CenterLabel::A),
            "b" => Ok(CenterLabel::B),
            "c" => Ok(CenterLabel::C),
            other => Err(Error::parameter(format!(
                "unknown center label '{other}' (expected a, b or c)"
            ))),
        }
    }
}

/// Which generator builds the experiment graph, with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum GraphSpec {
    Ba {
        n: usize,
        m_links: usize,
    },
    Homogeneous {
        n: usize,
        d_min: usize,
        d_max: usize,
        lambda: f64,
    },
    Ws {
        n: usize,
        ring_degree: usize,
        rewire_prob: f64,
    },
}

impl GraphSpec {
    pub fn generate(&self, seed: u64) -> Result<Graph> {
        match *self {
            GraphSpec::Ba { n, m_links } => generate_ba(n, m_links, seed),
            GraphSpec::Homogeneous {
                n,
                d_min,
                d_max,
                lambda,
            } => generate_homogeneous(n, d_min, d_max, lambda, seed),
            GraphSpec::Ws {
                n,
                ring_degree,
                rewire_prob,
            } => generate_ws(n, ring_degree, rewire_prob, seed),
        }
    }
}

/// Coverage threshold used when the basket radius is chosen automatically:
/// the smallest radius whose mean basket reaches this fraction of the nodes.
pub const DEFAULT_MIN_COVERAGE: f64 = 0.15;

/// Fully resolved experiment parameters. An experiment is a pure function of
/// this configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub graph: GraphSpec,
    pub graph_seed: u64,
    /// Basket radius in hops; `None` selects the smallest radius reaching
    /// [`DEFAULT_MIN_COVERAGE`].
    pub radius: Option<u32>,
    pub k_hidden: usize,
    pub num_clusters: usize,
    pub max_iter: usize,
    pub restarts: usize,
    pub centers: Vec<CenterLabel>,
    pub repetitions: usize,
    pub master_seed: u64,
}

/// Seed stream tag for the clustering seed of repetition `rep`.
fn repetition_seed(master: u64, rep: usize) -> u64 {
    derive_seed(master, 1000 + rep as u64)
}

/// Result of one trial case: the per-repetition precision curves and their
/// pointwise aggregates.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialResult {
    pub center: CenterLabel,
    pub center_node: u32,
    pub targets: TargetNodes,
    pub truth: HiddenTruth,
    pub num_modified: usize,
    /// Expected precision of a uniformly random ranking: constant
    /// `num_modified / |b|` at every depth.
    pub baseline: f64,
    pub per_seed: Vec<PrecisionCurve>,
    pub mean: Vec<f64>,
    pub min: Vec<f64>,
    pub max: Vec<f64>,
    /// Spearman correlation between the default ranking and the
    /// min-frequency variant ranking, one value per repetition.
    pub spearman_variant: Vec<f64>,
}

impl TrialResult {
    /// Mean of the mean curve over depths `1..=limit`.
    pub fn mean_precision_up_to(&self, limit: usize) -> f64 {
        let limit = limit.clamp(1, self.mean.len());
        self.mean[..limit].iter().sum::<f64>() / limit as f64
    }

    pub fn mean_spearman_variant(&self) -> f64 {
        self.spearman_variant.iter().sum::<f64>() / self.spearman_variant.len() as f64
    }
}

/// Everything a full experiment produces.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub graph: Graph,
    pub dataset: Dataset,
    pub targets: TargetNodes,
    pub radius: u32,
    pub coverage: f64,
    pub trials: Vec<TrialResult>,
}

fn resolve_radius(g: &Graph, config: &ExperimentConfig) -> Result<u32> {
    match config.radius {
        Some(r) => Ok(r),
        None => auto_radius(g, DEFAULT_MIN_COVERAGE),
    }
}

/// Runs one trial case: simulate baskets, hide a set around the chosen
/// center, then cluster, rank and score precision once per repetition seed.
pub fn run_trial(
    g: &Graph,
    config: &ExperimentConfig,
    center: CenterLabel,
) -> Result<TrialResult> {
    if config.repetitions < 1 {
        return Err(Error::parameter("at least one repetition required"));
    }
    let radius = resolve_radius(g, config).map_err(|e| e.with_stage("radius"))?;
    let original = simulate_baskets(g, radius).map_err(|e| e.with_stage("simulate"))?;
    let targets = select_targets(g).map_err(|e| e.with_stage("targets"))?;
    let center_node = center.resolve(&targets);
    let hidden = build_hidden_set(
        g,
        &HidingSpec {
            center: center_node,
            k_hidden: config.k_hidden,
        },
    )
    .map_err(|e| e.with_stage("hidden-set"))?;
    let (observed, truth) = hide_nodes(&original, &hidden, g).map_err(|e| e.with_stage("hide"))?;
    let freq = frequency(&observed);
    let matrix = closeness_matrix(&observed).map_err(|e| e.with_stage("closeness"))?;

    let total = observed.len();
    let mut per_seed = Vec::with_capacity(config.repetitions);
    let mut spearman_variant = Vec::with_capacity(config.repetitions);
    for rep in 0..config.repetitions {
        let params = KMedoidParams {
            num_clusters: config.num_clusters,
            seed: repetition_seed(config.master_seed, rep),
            max_iter: config.max_iter,
            restarts: config.restarts,
        };
        let cl = kmedoid(&matrix, &params).map_err(|e| e.with_stage("kmedoid"))?;
        let ranked = rank_baskets(&observed, &freq, &cl, ScoreVariant::InverseFrequency)
            .map_err(|e| e.with_stage("rank"))?;
        let ranked_variant = rank_baskets(&observed, &freq, &cl, ScoreVariant::MinFrequency)
            .map_err(|e| e.with_stage("rank-variant"))?;
        spearman_variant
            .push(spearman(&ranked, &ranked_variant).map_err(|e| e.with_stage("spearman"))?);
        per_seed
            .push(precision_curve(&ranked, &truth, total).map_err(|e| e.with_stage("precision"))?);
    }

    let reps = per_seed.len() as f64;
    let mut mean = vec![0.0f64; total];
    let mut min = vec![f64::INFINITY; total];
    let mut max = vec![f64::NEG_INFINITY; total];
    for curve in &per_seed {
        for (i, &v) in curve.values.iter().enumerate() {
            mean[i] += v;
            min[i] = min[i].min(v);
            max[i] = max[i].max(v);
        }
    }
    for v in &mut mean {
        *v /= reps;
    }
    let num_modified = truth.modified_baskets.len();
    Ok(TrialResult {
        center,
        center_node,
        targets,
        truth,
        num_modified,
        baseline: num_modified as f64 / total as f64,
        per_seed,
        mean,
        min,
        max,
        spearman_variant,
    })
}

/// Runs every requested trial case over the same graph and dataset.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentResult> {
    if config.centers.is_empty() {
        return Err(Error::parameter("at least one trial center required"));
    }
    let graph = config
        .graph
        .generate(config.graph_seed)
        .map_err(|e| e.with_stage("generate"))?;
    let radius = resolve_radius(&graph, config)?;
    let coverage = crate::dataset::coverage_fraction(&graph, radius)?;
    let dataset = simulate_baskets(&graph, radius)?;
    let targets = select_targets(&graph)?;
    let mut trials = Vec::with_capacity(config.centers.len());
    for &center in &config.centers {
        trials.push(run_trial(&graph, config, center)?);
    }
    Ok(ExperimentResult {
        graph,
        dataset,
        targets,
        radius,
        coverage,
        trials,
    })
}
