//! End-to-end tests of the command-line surface: exit codes, diagnostics,
//! file round trips and cross-invocation determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use emptyspot::io;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_emptyspot")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("spawn emptyspot")
}

fn run_ok(args: &[&str]) -> Output {
    let out = run(args);
    assert!(
        out.status.success(),
        "emptyspot {args:?} exited {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stderr_line(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).trim_end().to_string()
}

struct Pipeline {
    #[allow(dead_code)]
    dir: tempfile::TempDir,
    out: PathBuf,
}

/// One shared small end-to-end run: generate, simulate, hide, cluster, rank,
/// evaluate.
fn pipeline() -> Pipeline {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_path_buf();
    let o = out.to_str().unwrap().to_string();
    let graph = out.join("graph.txt");
    let dataset = out.join("dataset.txt");
    run_ok(&[
        "generate", "--model", "homogeneous", "--n", "120", "--seed", "4", "--out", &o,
    ]);
    run_ok(&[
        "simulate", "--graph", graph.to_str().unwrap(), "--radius", "2", "--out", &o,
    ]);
    run_ok(&[
        "hide", "--graph", graph.to_str().unwrap(), "--dataset", dataset.to_str().unwrap(),
        "--center", "b", "--k-hidden", "5", "--out", &o,
    ]);
    run_ok(&[
        "cluster", "--dataset", out.join("observed.txt").to_str().unwrap(),
        "--num-clusters", "6", "--seed", "1", "--out", &o,
    ]);
    run_ok(&[
        "rank", "--dataset", out.join("observed.txt").to_str().unwrap(),
        "--clustering", out.join("clustering.txt").to_str().unwrap(), "--out", &o,
    ]);
    run_ok(&[
        "evaluate", "--ranking", out.join("ranking.csv").to_str().unwrap(),
        "--truth", out.join("truth.txt").to_str().unwrap(), "--out", &o,
    ]);
    Pipeline { dir, out }
}

#[test]
fn full_pipeline_produces_consistent_artifacts() {
    let p = pipeline();
    let graph = io::load_graph(&p.out.join("graph.txt")).unwrap();
    let dataset = io::load_dataset(&p.out.join("dataset.txt")).unwrap();
    let observed = io::load_dataset(&p.out.join("observed.txt")).unwrap();
    let truth = io::load_truth(&p.out.join("truth.txt")).unwrap();
    let ranking = io::load_ranking(&p.out.join("ranking.csv")).unwrap();
    let precision = io::load_precision_series(&p.out.join("precision.csv")).unwrap();

    assert_eq!(graph.node_count(), 120);
    assert_eq!(dataset.len(), 120);
    assert_eq!(observed.len(), 120);
    assert_eq!(truth.hidden_nodes.len(), 5);
    assert_eq!(ranking.order.len(), 120);
    assert_eq!(precision.len(), 120);
    // scores are a non-increasing permutation ranking
    let mut sorted = ranking.order.clone();
    sorted.sort_unstable();
    assert_eq!(sorted, (0..120).collect::<Vec<_>>());
    assert!(ranking.scores.windows(2).all(|w| w[0] >= w[1]));
    // the curve tail equals the modified fraction (up to the 12-digit
    // serialization of the CSV)
    let exact = truth.modified_baskets.len() as f64 / 120.0;
    assert!((precision[119] - exact).abs() < 1e-11);
}

#[test]
fn simulate_output_reloads_to_identical_bytes() {
    let p = pipeline();
    let path = p.out.join("dataset.txt");
    let text = std::fs::read_to_string(&path).unwrap();
    let reloaded = io::load_dataset(&path).unwrap();
    assert_eq!(io::dataset_to_string(&reloaded), text);

    let graph_path = p.out.join("graph.txt");
    let graph_text = std::fs::read_to_string(&graph_path).unwrap();
    let graph = io::load_graph(&graph_path).unwrap();
    assert_eq!(io::graph_to_string(&graph), graph_text);
}

#[test]
fn identical_invocations_are_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    for sub in ["x", "y"] {
        run_ok(&[
            "generate", "--model", "ws", "--n", "60", "--ring-degree", "4",
            "--rewire-prob", "0.2", "--seed", "9",
            "--out", dir.path().join(sub).to_str().unwrap(),
        ]);
    }
    let a = std::fs::read(dir.path().join("x/graph.txt")).unwrap();
    let b = std::fs::read(dir.path().join("y/graph.txt")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn unknown_flag_is_a_usage_error_with_one_line() {
    let out = run(&["generate", "--bogus"]);
    assert_eq!(code(&out), 1);
    let err = stderr_line(&out);
    assert_eq!(err.lines().count(), 1, "diagnostic not single-line: {err:?}");
    assert!(err.contains("--bogus"), "diagnostic does not name the input: {err}");
}

#[test]
fn bad_parameter_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "generate", "--model", "ba", "--n", "2", "--m", "2",
        "--out", dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 1);
    assert!(stderr_line(&out).contains("m_links"));
}

#[test]
fn malformed_config_is_an_input_error_naming_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "model = homogeneous\nwidgets = 7\n").unwrap();
    let out = run(&[
        "generate", "--config", cfg.to_str().unwrap(),
        "--out", dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);
    let err = stderr_line(&out);
    assert!(err.contains("bad.cfg:2"), "diagnostic lacks file/line: {err}");
    assert!(err.contains("widgets"), "diagnostic lacks the offending key: {err}");
}

#[test]
fn missing_input_file_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "simulate", "--graph", dir.path().join("nope.txt").to_str().unwrap(),
        "--out", dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn malformed_graph_file_cites_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("graph.txt");
    std::fs::write(&graph, "#nodes 5\n0\t1\n1\t1\n").unwrap();
    let out = run(&[
        "simulate", "--graph", graph.to_str().unwrap(),
        "--out", dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);
    assert!(stderr_line(&out).contains(":3:"), "no line cited: {}", stderr_line(&out));
}

#[test]
fn infeasible_generation_is_a_pipeline_error() {
    let dir = tempfile::tempdir().unwrap();
    // 3-regular graph on an odd node count cannot exist
    let out = run(&[
        "generate", "--model", "homogeneous", "--n", "5", "--d-min", "3", "--d-max", "3",
        "--out", dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 3);
}

#[test]
fn flags_override_config_file_values() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("gen.cfg");
    std::fs::write(&cfg, "model = ba\nn = 30\nm_links = 2\nseed = 5\n").unwrap();
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    run_ok(&["generate", "--config", cfg.to_str().unwrap(), "--out", out_a.to_str().unwrap()]);
    run_ok(&[
        "generate", "--config", cfg.to_str().unwrap(), "--n", "40",
        "--out", out_b.to_str().unwrap(),
    ]);
    assert_eq!(io::load_graph(&out_a.join("graph.txt")).unwrap().node_count(), 30);
    assert_eq!(io::load_graph(&out_b.join("graph.txt")).unwrap().node_count(), 40);
}

#[test]
fn hide_accepts_an_explicit_node_id() {
    let p = pipeline();
    let o = p.out.to_str().unwrap().to_string();
    run_ok(&[
        "hide", "--graph", p.out.join("graph.txt").to_str().unwrap(),
        "--dataset", p.out.join("dataset.txt").to_str().unwrap(),
        "--center", "17", "--k-hidden", "3", "--out", &o,
    ]);
    let truth = io::load_truth(&p.out.join("truth.txt")).unwrap();
    assert!(truth.hidden_nodes.contains(&17));
    assert_eq!(truth.hidden_nodes.len(), 3);
}

#[test]
fn rank_supports_the_min_frequency_variant() {
    let p = pipeline();
    let o = p.out.to_str().unwrap().to_string();
    let default_bytes = std::fs::read(p.out.join("ranking.csv")).unwrap();
    run_ok(&[
        "rank", "--dataset", p.out.join("observed.txt").to_str().unwrap(),
        "--clustering", p.out.join("clustering.txt").to_str().unwrap(),
        "--score-variant", "eq11-literal", "--out", &o,
    ]);
    let variant_bytes = std::fs::read(p.out.join("ranking.csv")).unwrap();
    assert_ne!(default_bytes, variant_bytes, "variant produced the same ranking");
    io::load_ranking(&p.out.join("ranking.csv")).unwrap();
}

#[test]
fn cluster_can_dump_the_closeness_matrix() {
    let p = pipeline();
    let o = p.out.to_str().unwrap().to_string();
    run_ok(&[
        "cluster", "--dataset", p.out.join("observed.txt").to_str().unwrap(),
        "--num-clusters", "4", "--seed", "2", "--dump-matrix", "--out", &o,
    ]);
    let csv = std::fs::read_to_string(p.out.join("closeness.csv")).unwrap();
    let header = csv.lines().next().unwrap();
    assert!(header.starts_with("node,"));
    let cols = header.split(',').count();
    assert_eq!(csv.lines().count(), cols, "matrix dump is not square");
}

#[test]
fn plot_emits_csv_and_svg() {
    let p = pipeline();
    let o = p.out.to_str().unwrap().to_string();
    run_ok(&[
        "plot", "--kind", "degree", "--graph", p.out.join("graph.txt").to_str().unwrap(),
        "--out", &o,
    ]);
    assert!(p.out.join("degree_hist.csv").exists());
    let svg = std::fs::read_to_string(p.out.join("degree_hist.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));

    run_ok(&[
        "plot", "--kind", "precision", "--curve", p.out.join("precision.csv").to_str().unwrap(),
        "--out", &o,
    ]);
    assert!(p.out.join("precision_plot.csv").exists());
    let svg = std::fs::read_to_string(p.out.join("precision_plot.svg")).unwrap();
    assert!(svg.contains("<path"), "no step line rendered");
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(code(&run(&["--help"])), 0);
    assert_eq!(code(&run(&["--version"])), 0);
    for sub in ["generate", "simulate", "hide", "cluster", "rank", "evaluate", "experiment", "plot"] {
        let out = run(&[sub, "--help"]);
        assert_eq!(code(&out), 0, "{sub} --help failed");
    }
}

/// The reference configuration ships with the repository.
#[test]
fn bundled_config_parses() {
    let cfg = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/paper_homogeneous.cfg");
    let mut settings = emptyspot::config::Settings::default();
    settings
        .apply_file_str(&std::fs::read_to_string(&cfg).unwrap(), "paper_homogeneous.cfg")
        .unwrap();
    let config = settings.experiment_config().unwrap();
    assert_eq!(config.repetitions, 20);
    assert_eq!(config.k_hidden, 10);
    assert_eq!(config.centers.len(), 3);
}
