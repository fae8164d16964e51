//! Delivery-point generation.
//!
//! Each street gets a roulette-wheel mass `density * length`. Every one of
//! the `m` deliveries draws `R` uniformly on `(0, W]`, where `W` is the
//! total mass, and lands on the street `x` with
//! `sum(w[..x]) < R <= sum(w[..=x])`. Inside its street a delivery is
//! placed at a uniform offset along the street's edges.

use std::collections::BTreeMap;

use crate::density::{density, PenaltyTable};
use crate::error::GenerateError;
use crate::instance::{Customer, Instance, GENERATOR_VERSION};
use crate::network::{EdgeId, StreetId, StreetNetwork, VertexId};
use crate::rng::BenchRng;

/// Demand attached to each generated customer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DemandModel {
    /// One unit per customer.
    #[default]
    Unit,
    /// Zero demand.
    None,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenerationSpec {
    pub name: String,
    pub deliveries: usize,
    pub seed: u64,
    pub vehicles: usize,
    pub max_route_length: Option<f64>,
    pub demand: DemandModel,
}

impl GenerationSpec {
    pub fn new(deliveries: usize, seed: u64, vehicles: usize) -> Self {
        GenerationSpec {
            name: format!("an-{deliveries}"),
            deliveries,
            seed,
            vehicles,
            max_route_length: None,
            demand: DemandModel::Unit,
        }
    }

    fn validate(&self) -> Result<(), GenerateError> {
        if self.deliveries == 0 {
            return Err(GenerateError::InvalidSpec("delivery count must be at least 1".into()));
        }
        if self.vehicles == 0 {
            return Err(GenerateError::InvalidSpec("fleet size must be at least 1".into()));
        }
        if let Some(l) = self.max_route_length {
            if !(l > 0.0 && l.is_finite()) {
                return Err(GenerateError::InvalidSpec(format!(
                    "max route length must be positive, got {l}"
                )));
            }
        }
        Ok(())
    }
}

/// Cumulative street masses for roulette-wheel selection.
#[derive(Debug, Clone, PartialEq)]
pub struct RouletteWheel {
    prefix: Vec<f64>,
}

impl RouletteWheel {
    pub fn new(weights: &[f64]) -> Result<Self, GenerateError> {
        let mut prefix = Vec::with_capacity(weights.len());
        let mut acc = 0.0;
        for &w in weights {
            if !(w >= 0.0 && w.is_finite()) {
                return Err(GenerateError::InvalidWeight(w));
            }
            acc += w;
            prefix.push(acc);
        }
        if !(acc > 0.0) {
            return Err(GenerateError::NoSampleableStreet);
        }
        Ok(RouletteWheel { prefix })
    }

    /// Total mass `W`.
    pub fn total(&self) -> f64 {
        *self.prefix.last().expect("non-empty")
    }

    /// Draws `R` uniformly on `(0, W]`.
    pub fn draw(&self, rng: &mut BenchRng) -> f64 {
        rng.unit_half_open() * self.total()
    }

    /// Street index for a drawn value, by binary search over the prefix
    /// sums: the first `x` with `prefix[x] >= r`.
    pub fn select(&self, r: f64) -> usize {
        self.prefix.partition_point(|&p| p < r).min(self.prefix.len() - 1)
    }

    /// Street index for a drawn value by the literal linear scan.
    pub fn select_linear(&self, r: f64) -> usize {
        let mut lower = 0.0;
        for (x, &upper) in self.prefix.iter().enumerate() {
            if lower < r && r <= upper {
                return x;
            }
            lower = upper;
        }
        self.prefix.len() - 1
    }
}

/// Distributes `m` deliveries over streets with probability proportional to
/// their weights.
pub fn assign_counts(
    weights: &[f64],
    m: usize,
    rng: &mut BenchRng,
) -> Result<Vec<usize>, GenerateError> {
    let wheel = RouletteWheel::new(weights)?;
    let mut counts = vec![0; weights.len()];
    for _ in 0..m {
        counts[wheel.select(wheel.draw(rng))] += 1;
    }
    Ok(counts)
}

/// Same draws as [`assign_counts`], selected by the linear scan.
pub fn assign_counts_linear(
    weights: &[f64],
    m: usize,
    rng: &mut BenchRng,
) -> Result<Vec<usize>, GenerateError> {
    let wheel = RouletteWheel::new(weights)?;
    let mut counts = vec![0; weights.len()];
    for _ in 0..m {
        counts[wheel.select_linear(wheel.draw(rng))] += 1;
    }
    Ok(counts)
}

/// Splits already placed on one original edge, sorted by offset from the
/// edge's `u` end.
#[derive(Debug, Default)]
struct EdgeSplits {
    offsets: Vec<f64>,
    /// `pieces[i]` runs from split `i - 1` (or `u`) to split `i` (or `v`).
    pieces: Vec<EdgeId>,
}

/// Uniform placement of deliveries along streets.
struct Placer {
    /// Original edges of each street in edge-id order, with the cumulative
    /// length at the end of each.
    streets: BTreeMap<StreetId, (Vec<EdgeId>, Vec<f64>)>,
    splits: BTreeMap<EdgeId, EdgeSplits>,
}

impl Placer {
    fn new(network: &StreetNetwork) -> Self {
        let streets = network
            .edges_by_street()
            .into_iter()
            .map(|(s, ids)| {
                let mut acc = 0.0;
                let cum = ids
                    .iter()
                    .map(|&e| {
                        acc += network.edges()[e].weight;
                        acc
                    })
                    .collect();
                (s, (ids, cum))
            })
            .collect();
        Placer {
            streets,
            splits: BTreeMap::new(),
        }
    }

    fn street_length(&self, street: StreetId) -> f64 {
        self.streets
            .get(&street)
            .and_then(|(_, cum)| cum.last().copied())
            .unwrap_or(0.0)
    }

    /// Inserts a delivery at `offset` meters along the street. Returns
    /// `None` when the offset coincides with an existing vertex.
    fn place(
        &mut self,
        network: &mut StreetNetwork,
        street: StreetId,
        offset: f64,
    ) -> Result<Option<VertexId>, GenerateError> {
        let (ids, cum) = &self.streets[&street];
        let k = cum.partition_point(|&c| c <= offset);
        if k >= ids.len() {
            return Ok(None);
        }
        let original = ids[k];
        let local = offset - if k == 0 { 0.0 } else { cum[k - 1] };
        let splits = self.splits.entry(original).or_insert_with(|| EdgeSplits {
            offsets: Vec::new(),
            pieces: vec![original],
        });
        let idx = splits.offsets.partition_point(|&o| o < local);
        if splits.offsets.get(idx) == Some(&local) {
            return Ok(None);
        }
        let piece = splits.pieces[idx];
        let start = if idx == 0 { 0.0 } else { splits.offsets[idx - 1] };
        let within = local - start;
        let weight = network.edges()[piece].weight;
        if !(within > 0.0 && within < weight) || weight - within <= 0.0 {
            return Ok(None);
        }
        let vertex = network.insert_point_on_edge(piece, within)?;
        let tail = network.edge_count() - 1;
        splits.offsets.insert(idx, local);
        splits.pieces.insert(idx + 1, tail);
        Ok(Some(vertex))
    }
}

/// Places `counts[i]` deliveries on the `i`-th street of
/// `network.streets()`, each at an independent uniform offset. Streets are
/// processed in id order and deliveries in draw order, so vertex ids follow
/// (street id, draw index).
pub fn place_deliveries(
    network: &mut StreetNetwork,
    counts: &[usize],
    rng: &mut BenchRng,
) -> Result<Vec<VertexId>, GenerateError> {
    let street_ids: Vec<StreetId> = network.streets().iter().map(|s| s.id).collect();
    if counts.len() != street_ids.len() {
        return Err(GenerateError::InvalidSpec(format!(
            "{} counts for {} streets",
            counts.len(),
            street_ids.len()
        )));
    }
    let mut placer = Placer::new(network);
    let mut placed = Vec::with_capacity(counts.iter().sum());
    for (&street, &count) in street_ids.iter().zip(counts) {
        if count == 0 {
            continue;
        }
        let length = placer.street_length(street);
        if !(length > 0.0) {
            return Err(GenerateError::InvalidSpec(format!(
                "street {street} has no length but received deliveries"
            )));
        }
        for _ in 0..count {
            // Offsets hitting an existing vertex exactly are redrawn.
            let vertex = loop {
                let offset = rng.unit_open() * length;
                if let Some(v) = placer.place(network, street, offset)? {
                    break v;
                }
            };
            placed.push(vertex);
        }
    }
    Ok(placed)
}

/// Roulette-wheel mass of every street of the network, in street-id order.
pub fn street_weights(network: &StreetNetwork, table: &PenaltyTable) -> Vec<f64> {
    let lengths = network.street_lengths();
    network
        .streets()
        .iter()
        .map(|s| {
            let length = lengths.get(&s.id).copied().unwrap_or(0.0);
            crate::density::street_weight(length, density(table, s.attributes))
        })
        .collect()
}

/// Builds a complete instance. Equal inputs give bit-identical instances.
pub fn generate(
    network: &StreetNetwork,
    table: &PenaltyTable,
    spec: &GenerationSpec,
) -> Result<Instance, GenerateError> {
    spec.validate()?;
    let depot = network.depot().ok_or(GenerateError::MissingDepot)?;
    let weights = street_weights(network, table);
    let mut rng = BenchRng::new(spec.seed);
    let counts = assign_counts(&weights, spec.deliveries, &mut rng)?;
    let mut net = network.clone();
    let vertices = place_deliveries(&mut net, &counts, &mut rng)?;
    let demand = match spec.demand {
        DemandModel::Unit => 1,
        DemandModel::None => 0,
    };
    let mut instance = Instance {
        name: spec.name.clone(),
        network: net,
        depot,
        customers: vertices
            .into_iter()
            .map(|vertex| Customer { vertex, demand })
            .collect(),
        vehicles: spec.vehicles,
        capacities: None,
        max_route_lengths: spec.max_route_length.map(|l| vec![l; spec.vehicles]),
        time_windows: BTreeMap::new(),
        forbid_empty_routes: true,
        seed: Some(spec.seed),
        generator_version: Some(GENERATOR_VERSION.to_string()),
    };
    instance.canonicalize();
    Ok(instance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::{Region, StreetAttributes, StreetType, Zone};
    use crate::geometry::Point;
    use crate::network::{StreetInfo, VertexKind};

    #[test]
    fn boundary_draw_selects_lower_street() {
        let wheel = RouletteWheel::new(&[2.0, 1.0, 1.0]).unwrap();
        assert_eq!(wheel.select(2.0), 0);
        assert_eq!(wheel.select_linear(2.0), 0);
        assert_eq!(wheel.select(2.0000001), 1);
        assert_eq!(wheel.select(4.0), 2);
        assert_eq!(wheel.select_linear(4.0), 2);
    }

    #[test]
    fn zero_weight_streets_get_nothing() {
        let mut rng = BenchRng::new(9);
        assert_eq!(assign_counts(&[1.0, 0.0], 100, &mut rng).unwrap(), vec![100, 0]);
        let mut rng = BenchRng::new(9);
        let counts = assign_counts(&[0.0, 2.0, 0.0, 1.0, 0.0], 1000, &mut rng).unwrap();
        assert_eq!(counts[0] + counts[2] + counts[4], 0);
        assert_eq!(counts.iter().sum::<usize>(), 1000);
    }

    #[test]
    fn all_zero_weights_are_an_error() {
        let mut rng = BenchRng::new(0);
        assert_eq!(
            assign_counts(&[0.0, 0.0], 5, &mut rng),
            Err(GenerateError::NoSampleableStreet)
        );
        assert_eq!(assign_counts(&[], 5, &mut rng), Err(GenerateError::NoSampleableStreet));
        assert!(matches!(
            assign_counts(&[1.0, -1.0], 5, &mut rng),
            Err(GenerateError::InvalidWeight(_))
        ));
    }

    #[test]
    fn fast_and_linear_selection_agree() {
        let weights = [0.5, 0.0, 3.25, 1.0, 0.0, 0.125, 7.0];
        let wheel = RouletteWheel::new(&weights).unwrap();
        let mut rng = BenchRng::new(11);
        for _ in 0..10_000 {
            let r = wheel.draw(&mut rng);
            assert_eq!(wheel.select(r), wheel.select_linear(r));
        }
        let mut a = BenchRng::new(5);
        let mut b = BenchRng::new(5);
        assert_eq!(
            assign_counts(&weights, 5000, &mut a).unwrap(),
            assign_counts_linear(&weights, 5000, &mut b).unwrap()
        );
    }

    fn single_street(length: f64) -> StreetNetwork {
        let mut net = StreetNetwork::new();
        net.add_street(StreetInfo {
            id: 1,
            name: "Rua".into(),
            attributes: StreetAttributes::new(Region::Central, StreetType::Avenue, Zone::Mixed),
        })
        .unwrap();
        let a = net.add_vertex(Point::new(0.0, 0.0), VertexKind::Depot).unwrap();
        let b = net.add_vertex(Point::new(length, 0.0), VertexKind::Corner).unwrap();
        net.add_edge(a, b, length, 1).unwrap();
        net
    }

    #[test]
    fn no_counts_leave_network_unchanged() {
        let mut net = single_street(100.0);
        let before = net.clone();
        let placed = place_deliveries(&mut net, &[0], &mut BenchRng::new(1)).unwrap();
        assert!(placed.is_empty());
        assert_eq!(net, before);
    }

    #[test]
    fn placed_points_split_the_street_in_order() {
        let mut net = single_street(100.0);
        let placed = place_deliveries(&mut net, &[50], &mut BenchRng::new(2)).unwrap();
        assert_eq!(placed.len(), 50);
        assert_eq!(net.vertex_count(), 52);
        assert_eq!(net.edge_count(), 51);
        assert!((net.total_edge_weight() - 100.0).abs() < 1e-9);
        // Walking from vertex 0 along the chain visits x coordinates in order.
        let mut xs: Vec<f64> = placed.iter().map(|&v| net.vertices()[v].pos.x).collect();
        xs.sort_by(f64::total_cmp);
        for w in xs.windows(2) {
            assert!(w[0] < w[1]);
        }
        assert_eq!(net.component_count(), 1);
    }

    #[test]
    fn generate_requires_depot_and_valid_spec() {
        let mut net = single_street(100.0);
        let spec = GenerationSpec::new(3, 1, 1);
        assert!(generate(&net, &PenaltyTable::DEFAULT, &spec).is_ok());
        assert!(matches!(
            generate(&net, &PenaltyTable::DEFAULT, &GenerationSpec::new(0, 1, 1)),
            Err(GenerateError::InvalidSpec(_))
        ));
        net = {
            let mut n = StreetNetwork::new();
            n.add_street(net.streets()[0].clone()).unwrap();
            let a = n.add_vertex(Point::new(0.0, 0.0), VertexKind::Corner).unwrap();
            let b = n.add_vertex(Point::new(1.0, 0.0), VertexKind::Corner).unwrap();
            n.add_edge(a, b, 1.0, 1).unwrap();
            n
        };
        assert_eq!(
            generate(&net, &PenaltyTable::DEFAULT, &spec),
            Err(GenerateError::MissingDepot)
        );
    }

    #[test]
    fn single_delivery_on_single_street() {
        let net = single_street(100.0);
        let inst = generate(&net, &PenaltyTable::DEFAULT, &GenerationSpec::new(1, 4, 1)).unwrap();
        assert_eq!(inst.customers.len(), 1);
        let v = inst.customers[0].vertex;
        assert_eq!(inst.network.vertices()[v].kind, VertexKind::Delivery);
        assert_ne!(v, inst.depot);
        inst.validate().unwrap();
    }
}
