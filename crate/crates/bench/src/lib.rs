//! Shared inputs for the benchmark harness.

use vrpbench::extract::{extract_network, SegmentSoup, DEFAULT_EPSILON};
use vrpbench::fixtures::synthetic_city;
use vrpbench::{generate, GenerationSpec, Instance, PenaltyTable, StreetNetwork, StreetPolyline};

pub const CITY_SEED: u64 = 2016;

pub fn city_streets() -> Vec<StreetPolyline> {
    synthetic_city(CITY_SEED)
}

pub fn city_soup() -> SegmentSoup {
    SegmentSoup::from_streets(&city_streets())
}

pub fn city_network() -> StreetNetwork {
    extract_network(&city_streets(), DEFAULT_EPSILON).unwrap().0.network
}

/// An instance with `deliveries` customers on the synthetic city.
pub fn city_instance(deliveries: usize, vehicles: usize) -> Instance {
    let spec = GenerationSpec::new(deliveries, 1, vehicles);
    generate(&city_network(), &PenaltyTable::DEFAULT, &spec).unwrap()
}
