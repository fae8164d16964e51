use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use vrpbench::fixtures::{figure_three, grid_2x2_instance};
use vrpbench::format::{serialize_instance, serialize_network, serialize_solution};
use vrpbench::grid::{generate_grid_network, GridStyle};
use vrpbench::Solution;

fn vrpbench(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vrpbench"))
        .args(args)
        .env_remove("VRPBENCH_SEED")
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn figure_files(dir: &Path, routes: Option<&[Vec<usize>]>) -> (PathBuf, PathBuf) {
    let (instance, solution) = figure_three();
    let solution = routes.map(Solution::from_routes).unwrap_or(solution);
    let i = write(dir, "fig.vrpb", &serialize_instance(&instance));
    let s = write(dir, "fig.sol", &serialize_solution(&solution, instance.vehicles).unwrap());
    (i, s)
}

#[test]
fn figure_three_solution_validates() {
    let dir = tempfile::tempdir().unwrap();
    let (inst, sol) = figure_files(dir.path(), None);
    let out = vrpbench(&["validate", s(&inst), s(&sol)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).starts_with("feasible"));
}

#[test]
fn empty_route_is_infeasible_with_infinite_cost() {
    let dir = tempfile::tempdir().unwrap();
    let routes = vec![(1..=13).collect::<Vec<_>>(), vec![], vec![]];
    let (inst, sol) = figure_files(dir.path(), Some(&routes));
    let out = vrpbench(&["eval", s(&inst), s(&sol)]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("cost=inf\n"), "{text}");
    assert!(text.contains("feasible=false\n"));
    assert!(text.contains("flags=empty"));

    let out = vrpbench(&["validate", s(&inst), s(&sol)]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn structural_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let routes = vec![vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9]];
    let (inst, sol) = figure_files(dir.path(), Some(&routes));
    assert_eq!(vrpbench(&["validate", s(&inst), s(&sol)]).status.code(), Some(2));

    let garbage = write(dir.path(), "bad.vrpb", "NAME: x\nTYPE: VRPBENCH\n");
    assert_eq!(vrpbench(&["validate", s(&garbage), s(&sol)]).status.code(), Some(2));
    let missing = dir.path().join("missing.vrpb");
    assert_eq!(vrpbench(&["eval", s(&missing), s(&sol)]).status.code(), Some(2));
}

#[test]
fn usage_errors_exit_three() {
    assert_eq!(vrpbench(&["gen", "--no-such-flag"]).status.code(), Some(3));
    assert_eq!(vrpbench(&["frobnicate"]).status.code(), Some(3));
    assert_eq!(vrpbench(&["--help"]).status.code(), Some(0));
    assert_eq!(vrpbench(&["--version"]).status.code(), Some(0));
}

#[test]
fn generation_is_reproducible_from_the_command_line() {
    let dir = tempfile::tempdir().unwrap();
    let net = generate_grid_network(6, 6, 80.0, GridStyle::default()).unwrap();
    let net = write(dir.path(), "grid.net", &serialize_network("grid", &net));
    let run = || vrpbench(&["gen", s(&net), "--deliveries", "1000", "--seed", "7", "--k", "10"]);
    let (a, b) = (run(), run());
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains("SEED: 7\n"));
    let other = vrpbench(&["gen", s(&net), "--deliveries", "1000", "--seed", "8", "--k", "10"]);
    assert_ne!(a.stdout, other.stdout);

    let via_env = Command::new(env!("CARGO_BIN_EXE_vrpbench"))
        .args(["gen", s(&net), "--deliveries", "1000", "--k", "10"])
        .env("VRPBENCH_SEED", "7")
        .output()
        .unwrap();
    assert_eq!(via_env.stdout, a.stdout);
}

#[test]
fn grid_output_feeds_generation() {
    let dir = tempfile::tempdir().unwrap();
    let net = dir.path().join("g.net");
    let out = vrpbench(&["grid", "--rows", "3", "--cols", "4", "--block", "50", "--out", s(&net)]);
    assert_eq!(out.status.code(), Some(0));
    let inst = dir.path().join("g.vrpb");
    let out = vrpbench(&["gen", s(&net), "--deliveries", "25", "--seed", "3", "--out", s(&inst)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(std::fs::read_to_string(&inst).unwrap().ends_with("EOF\n"));
}

#[test]
fn solve_reports_the_cost_eval_computes() {
    let dir = tempfile::tempdir().unwrap();
    let (inst, _) = figure_files(dir.path(), None);
    let sol = dir.path().join("out.sol");
    let out = vrpbench(&["solve", s(&inst), "--objective", "total_length", "--out", s(&sol)]);
    assert_eq!(out.status.code(), Some(0));
    let log = String::from_utf8(out.stderr).unwrap();
    assert!(log.lines().any(|l| l.starts_with("iteration=0 ")), "{log}");
    let solved = log
        .lines()
        .last()
        .and_then(|l| l.split("cost=").nth(1))
        .unwrap()
        .to_string();

    let out = vrpbench(&["eval", s(&inst), s(&sol), "--objective", "total_length"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains(&format!("cost={solved}\n")));
}

#[test]
fn render_writes_svg() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(dir.path(), "g.vrpb", &serialize_instance(&grid_2x2_instance()));
    let out = vrpbench(&["render", s(&inst)]);
    assert_eq!(out.status.code(), Some(0));
    let svg = stdout(&out);
    assert!(svg.starts_with("<svg") || svg.starts_with("<?xml"));
    assert!(!svg.contains("data-route"));
}

#[test]
fn batch_writes_named_files() {
    let dir = tempfile::tempdir().unwrap();
    let net = generate_grid_network(4, 4, 60.0, GridStyle::default()).unwrap();
    let net = write(dir.path(), "grid.net", &serialize_network("grid", &net));
    let out_dir = dir.path().join("set");
    let out = vrpbench(&[
        "batch", s(&net), "--preset", "custom", "--sizes", "10,20", "--per-size", "2", "--seed", "5",
        "--out", s(&out_dir),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let mut names: Vec<String> = std::fs::read_dir(&out_dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(names, ["an-10-01.vrpb", "an-10-02.vrpb", "an-20-01.vrpb", "an-20-02.vrpb"]);
    assert_eq!(vrpbench(&["batch", s(&net), "--preset", "custom", "--out", s(&out_dir)]).status.code(), Some(3));
}

#[test]
fn city_streets_extract_to_one_component() {
    let dir = tempfile::tempdir().unwrap();
    let streets = dir.path().join("city.tsv");
    assert_eq!(vrpbench(&["city", "--seed", "3", "--out", s(&streets)]).status.code(), Some(0));
    let out = vrpbench(&["extract", s(&streets), "--name", "city"]);
    assert_eq!(out.status.code(), Some(0));
    let log = String::from_utf8(out.stderr.clone()).unwrap();
    assert!(log.contains("streets=422 components=1 "), "{log}");
    assert!(stdout(&out).contains("TYPE: VRPBENCH_NETWORK\n"));
}
