use std::path::PathBuf;

use vrpbench::fixtures::grid_2x2_instance;
use vrpbench::render::route_path;
use vrpbench::{render_svg, DistanceOracle, RenderStyle, Solution};

fn grid_solution() -> Solution {
    let instance = grid_2x2_instance();
    let mut customers = instance.customer_vertices();
    customers.sort_unstable();
    Solution::from_routes(&[customers])
}

#[test]
fn grid_svg_matches_golden_file() {
    let svg = render_svg(&grid_2x2_instance(), Some(&grid_solution()), &RenderStyle::default()).unwrap();
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/grid-2x2.svg");
    if std::env::var_os("VRPBENCH_BLESS").is_some() {
        std::fs::write(&path, &svg).unwrap();
    }
    assert!(std::fs::read_to_string(&path).unwrap() == svg, "golden SVG differs");
}

#[test]
fn route_polyline_follows_shortest_paths() {
    let instance = grid_2x2_instance();
    let solution = grid_solution();
    let svg = render_svg(&instance, Some(&solution), &RenderStyle::default()).unwrap();
    let polyline = svg
        .lines()
        .find(|l| l.starts_with("<polyline"))
        .expect("one route");
    let points = polyline.split("points=\"").nth(1).unwrap().trim_end_matches("\"/>");
    let drawn = points.split(' ').count();

    let oracle = DistanceOracle::new(&instance.network);
    let route = &solution.partition(1).unwrap().routes[0];
    let mut expected = 1;
    let mut at = instance.depot;
    for &next in route.iter().chain(std::iter::once(&instance.depot)) {
        expected += oracle.shortest_path(at, next).unwrap().len() - 1;
        at = next;
    }
    assert_eq!(drawn, expected);
    assert_eq!(route_path(&oracle, instance.depot, route).unwrap().len(), expected);
}

#[test]
fn instance_only_has_no_routes() {
    let svg = render_svg(&grid_2x2_instance(), None, &RenderStyle::default()).unwrap();
    assert!(!svg.contains("<polyline"));
    assert_eq!(svg.matches("<circle").count(), 3);
    assert_eq!(svg.matches("<rect").count(), 1);
}

#[test]
fn invalid_solution_is_rejected() {
    let instance = grid_2x2_instance();
    let bad = Solution::from_routes(&[vec![instance.customers[0].vertex]]);
    assert!(render_svg(&instance, Some(&bad), &RenderStyle::default()).is_err());
}

#[test]
fn rendering_is_deterministic() {
    let instance = grid_2x2_instance();
    let a = render_svg(&instance, Some(&grid_solution()), &RenderStyle::default()).unwrap();
    let b = render_svg(&instance, Some(&grid_solution()), &RenderStyle::default()).unwrap();
    assert_eq!(a, b);
}
