mod common;

use proptest::prelude::*;
use vrpbench::extract::{extract_network, DEFAULT_EPSILON};
use vrpbench::fixtures::synthetic_city;
use vrpbench::generator::{assign_counts, assign_counts_linear, place_deliveries, street_weights};
use vrpbench::network::{StreetInfo, StreetNetwork, VertexKind};
use vrpbench::rng::BenchRng;
use vrpbench::{
    density, generate, GenerationSpec, PenaltyTable, Point, Region, StreetAttributes, StreetType,
    Zone,
};

#[test]
fn heavy_street_share_tracks_weights() {
    for seed in 1..=5 {
        let counts = assign_counts(&[3.0, 1.0], 40_000, &mut BenchRng::new(seed)).unwrap();
        let share = counts[0] as f64 / 40_000.0;
        assert!((share - 0.75).abs() < 0.01, "seed {seed}: {share}");
    }
}

#[test]
fn city_highway_gets_no_deliveries() {
    let streets = synthetic_city(1);
    let highway: Vec<u32> = streets
        .iter()
        .filter(|s| s.attributes.stype == StreetType::Highway)
        .map(|s| s.id)
        .collect();
    let (build, _) = extract_network(&streets, DEFAULT_EPSILON).unwrap();
    let inst = generate(
        &build.network,
        &PenaltyTable::DEFAULT,
        &GenerationSpec::new(5000, 3, 50),
    )
    .unwrap();
    for c in &inst.customers {
        let on_highway = inst
            .network
            .edges()
            .iter()
            .any(|e| (e.u == c.vertex || e.v == c.vertex) && highway.contains(&e.street));
        assert!(!on_highway, "delivery {} on the highway", c.vertex);
    }
}

fn single_street(length: f64, pieces: usize) -> StreetNetwork {
    let mut net = StreetNetwork::new();
    net.add_street(StreetInfo {
        id: 1,
        name: "line".into(),
        attributes: StreetAttributes::new(Region::Central, StreetType::Avenue, Zone::Mixed),
    })
    .unwrap();
    let step = length / pieces as f64;
    for i in 0..=pieces {
        let kind = if i == 0 { VertexKind::Depot } else { VertexKind::Corner };
        net.add_vertex(Point::new(i as f64 * step, 0.0), kind).unwrap();
    }
    for i in 0..pieces {
        net.add_edge(i, i + 1, step, 1).unwrap();
    }
    net.set_depot(0).unwrap();
    net
}

#[test]
fn placement_across_several_edges_is_uniform() {
    let mut net = single_street(1000.0, 7);
    let placed = place_deliveries(&mut net, &[10_000], &mut BenchRng::new(17)).unwrap();
    let mut bins = [0usize; 100];
    for v in placed {
        let x = net.vertices()[v].pos.x;
        bins[((x / 10.0) as usize).min(99)] += 1;
    }
    let expected = 100.0;
    let chi2: f64 = bins
        .iter()
        .map(|&o| (o as f64 - expected).powi(2) / expected)
        .sum();
    assert!(chi2 < common::chi_square_critical(99.0, common::Z_1E4), "{chi2}");
}

#[test]
fn split_edges_partition_the_street() {
    let mut net = single_street(500.0, 3);
    place_deliveries(&mut net, &[200], &mut BenchRng::new(1)).unwrap();
    assert!(common::rel_close(net.total_edge_weight(), 500.0, 1e-12));
    assert_eq!(net.edge_count(), 203);
    assert_eq!(net.component_count(), 1);
}

proptest! {
    #[test]
    fn counts_sum_to_m(weights in prop::collection::vec(0.0f64..10.0, 1..12), m in 0usize..500, seed: u64) {
        prop_assume!(weights.iter().any(|&w| w > 0.0));
        let counts = assign_counts(&weights, m, &mut BenchRng::new(seed)).unwrap();
        prop_assert_eq!(counts.iter().sum::<usize>(), m);
        for (c, w) in counts.iter().zip(&weights) {
            if *w == 0.0 {
                prop_assert_eq!(*c, 0);
            }
        }
        let linear = assign_counts_linear(&weights, m, &mut BenchRng::new(seed)).unwrap();
        prop_assert_eq!(counts, linear);
    }

    #[test]
    fn density_is_monotone_in_each_axis(
        r in 0usize..4, t in 0usize..4, z in 0usize..3,
        r2 in 0usize..4, t2 in 0usize..4, z2 in 0usize..3,
    ) {
        let table = PenaltyTable::DEFAULT;
        let at = |r: usize, t: usize, z: usize| density(&table, StreetAttributes::new(
            Region::ALL[r], StreetType::ALL[t], Zone::ALL[z]));
        let d = at(r, t, z);
        prop_assert!((0.0..=1.0).contains(&d));
        prop_assert!(at(r.min(r2), t, z) >= at(r.max(r2), t, z));
        prop_assert!(at(r, t.min(t2), z) >= at(r, t.max(t2), z));
        prop_assert!(at(r, t, z.min(z2)) >= at(r, t, z.max(z2)));
    }

    #[test]
    fn generation_is_deterministic(seed: u64, m in 1usize..300) {
        let streets = vrpbench::grid::generate_grid_network(3, 4, 80.0, Default::default()).unwrap();
        let spec = GenerationSpec::new(m, seed, 2);
        let a = generate(&streets, &PenaltyTable::DEFAULT, &spec).unwrap();
        let b = generate(&streets, &PenaltyTable::DEFAULT, &spec).unwrap();
        prop_assert_eq!(
            vrpbench::format::serialize_instance(&a),
            vrpbench::format::serialize_instance(&b)
        );
        prop_assert_eq!(a.customers.len(), m);
        prop_assert_eq!(street_weights(&streets, &PenaltyTable::DEFAULT).len(), 7);
    }
}
