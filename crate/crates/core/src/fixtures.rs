//! Reproducible networks and instances for tests, examples and benchmarks.

use std::collections::VecDeque;

use crate::density::{PenaltyTable, Region, StreetAttributes, StreetType, Zone};
use crate::extract::StreetPolyline;
use crate::format::round_sig;
use crate::generator::{generate, GenerationSpec};
use crate::geometry::Point;
use crate::grid::{generate_grid_network, GridStyle};
use crate::instance::{Customer, Instance};
use crate::network::{StreetInfo, StreetNetwork, VertexKind};
use crate::rng::BenchRng;
use crate::solution::Solution;

/// Street count of the synthetic city, equal to the Artur Nogueira map.
pub const CITY_STREETS: usize = 422;

const CITY_SIDE: usize = 40;
const CITY_BLOCK: f64 = 75.0;
const CITY_DIAGONALS: usize = 4;

fn uniform_below(rng: &mut BenchRng, n: usize) -> usize {
    ((rng.unit_open() * n as f64) as usize).min(n - 1)
}

fn quantized_jitter(rng: &mut BenchRng, amplitude: f64) -> f64 {
    let steps = (amplitude * 10.0) as i64;
    let k = uniform_below(rng, (2 * steps + 1) as usize) as i64 - steps;
    k as f64 / 10.0
}

/// Lattice edge: horizontal `(i, j)-(i, j+1)` or vertical `(i, j)-(i+1, j)`.
#[derive(Clone, Copy)]
struct LatticeEdge {
    horizontal: bool,
    i: usize,
    j: usize,
}

impl LatticeEdge {
    fn ends(self) -> (usize, usize) {
        let a = self.i * CITY_SIDE + self.j;
        let b = if self.horizontal { a + 1 } else { a + CITY_SIDE };
        (a, b)
    }

    fn slot(self) -> usize {
        let base = if self.horizontal { 0 } else { CITY_SIDE * CITY_SIDE };
        base + self.i * CITY_SIDE + self.j
    }
}

struct Lattice {
    nodes: Vec<Point>,
    present: Vec<bool>,
}

impl Lattice {
    fn has(&self, e: LatticeEdge) -> bool {
        self.present[e.slot()]
    }

    fn all_edges() -> Vec<LatticeEdge> {
        let mut out = Vec::new();
        for i in 0..CITY_SIDE {
            for j in 0..CITY_SIDE - 1 {
                out.push(LatticeEdge { horizontal: true, i, j });
            }
        }
        for j in 0..CITY_SIDE {
            for i in 0..CITY_SIDE - 1 {
                out.push(LatticeEdge { horizontal: false, i, j });
            }
        }
        out
    }

    fn connected(&self) -> bool {
        let n = self.nodes.len();
        let mut adj = vec![Vec::new(); n];
        for e in Self::all_edges() {
            if self.has(e) {
                let (a, b) = e.ends();
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == n
    }

    fn degree(&self, node: usize) -> usize {
        let (i, j) = (node / CITY_SIDE, node % CITY_SIDE);
        let mut d = 0;
        if j + 1 < CITY_SIDE && self.has(LatticeEdge { horizontal: true, i, j }) {
            d += 1;
        }
        if j > 0 && self.has(LatticeEdge { horizontal: true, i, j: j - 1 }) {
            d += 1;
        }
        if i + 1 < CITY_SIDE && self.has(LatticeEdge { horizontal: false, i, j }) {
            d += 1;
        }
        if i > 0 && self.has(LatticeEdge { horizontal: false, i: i - 1, j }) {
            d += 1;
        }
        d
    }

    /// Maximal runs of present edges along every row, then every column,
    /// as node sequences.
    fn runs(&self) -> Vec<(bool, Vec<usize>)> {
        let mut out = Vec::new();
        for horizontal in [true, false] {
            for line in 0..CITY_SIDE {
                let mut current: Vec<usize> = Vec::new();
                for step in 0..CITY_SIDE - 1 {
                    let e = if horizontal {
                        LatticeEdge { horizontal, i: line, j: step }
                    } else {
                        LatticeEdge { horizontal, i: step, j: line }
                    };
                    let (a, b) = e.ends();
                    if self.has(e) {
                        if current.is_empty() {
                            current.push(a);
                        }
                        current.push(b);
                    } else if !current.is_empty() {
                        out.push((horizontal, std::mem::take(&mut current)));
                    }
                }
                if !current.is_empty() {
                    out.push((horizontal, current));
                }
            }
        }
        out
    }
}

fn segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let (t, d) = crate::geometry::project(p, a, b);
    if t < 0.0 {
        p.distance(a)
    } else if t > 1.0 {
        p.distance(b)
    } else {
        d
    }
}

/// A synthetic street map with exactly [`CITY_STREETS`] streets.
///
/// A jittered square lattice with some blocks merged, cut by three
/// diagonal avenues and one highway. Coordinates are multiples of 0.1 m
/// on the lattice; the diagonals stay clear of every lattice vertex so
/// extraction never meets a near-degenerate crossing.
pub fn synthetic_city(seed: u64) -> Vec<StreetPolyline> {
    let mut rng = BenchRng::new(seed);
    let mut nodes = Vec::with_capacity(CITY_SIDE * CITY_SIDE);
    for i in 0..CITY_SIDE {
        for j in 0..CITY_SIDE {
            let x = round_sig(j as f64 * CITY_BLOCK + quantized_jitter(&mut rng, 10.0));
            let y = round_sig(i as f64 * CITY_BLOCK + quantized_jitter(&mut rng, 10.0));
            nodes.push(Point::new(x, y));
        }
    }
    let all = Lattice::all_edges();
    let mut lattice = Lattice {
        nodes,
        present: vec![true; 2 * CITY_SIDE * CITY_SIDE],
    };

    let lattice_target = CITY_STREETS - CITY_DIAGONALS;
    let mut order: Vec<usize> = (0..all.len()).collect();
    for i in (1..order.len()).rev() {
        order.swap(i, uniform_below(&mut rng, i + 1));
    }
    let mut runs = lattice.runs().len();
    for &k in &order {
        if runs + 60 >= lattice_target {
            break;
        }
        let e = all[k];
        let (a, b) = e.ends();
        if lattice.degree(a) < 3 || lattice.degree(b) < 3 {
            continue;
        }
        lattice.present[e.slot()] = false;
        if lattice.connected() {
            runs = lattice.runs().len();
        } else {
            lattice.present[e.slot()] = true;
        }
    }

    let mut pieces: Vec<(bool, Vec<usize>)> = lattice.runs();
    while pieces.len() < lattice_target {
        let (idx, _) = pieces
            .iter()
            .enumerate()
            .max_by(|(ia, a), (ib, b)| a.1.len().cmp(&b.1.len()).then(ib.cmp(ia)))
            .expect("runs exist");
        let (horizontal, run) = pieces[idx].clone();
        assert!(run.len() >= 3, "runs too short to split");
        let mid = run.len() / 2;
        pieces[idx] = (horizontal, run[..=mid].to_vec());
        pieces.insert(idx + 1, (horizontal, run[mid..].to_vec()));
    }

    let side = (CITY_SIDE - 1) as f64 * CITY_BLOCK;
    let centre = Point::new(side / 2.0, side / 2.0);
    let radius = centre.distance(Point::new(0.0, 0.0));
    let region_of = |p: Point| {
        let r = p.distance(centre) / radius;
        if r < 0.3 {
            Region::Central
        } else if r < 0.55 {
            Region::Peripheral
        } else if r < 0.8 {
            Region::Distant
        } else {
            Region::Isolated
        }
    };

    let mut streets = Vec::with_capacity(CITY_STREETS);
    for (horizontal, run) in &pieces {
        let points: Vec<Point> = run.iter().map(|&n| lattice.nodes[n]).collect();
        let first = run[0];
        let line = if *horizontal { first / CITY_SIDE } else { first % CITY_SIDE };
        let stype = if !horizontal && line % 6 == 0 {
            StreetType::Avenue
        } else if *horizontal && line % 8 == 4 {
            StreetType::Alameda
        } else {
            StreetType::Street
        };
        let mid = points[points.len() / 2];
        let region = region_of(mid);
        let u = rng.unit_open();
        let zone = match region {
            Region::Central if u < 0.6 => Zone::CommercialIndustrial,
            Region::Central => Zone::Mixed,
            Region::Peripheral if u < 0.5 => Zone::Mixed,
            _ if u < 0.1 => Zone::CommercialIndustrial,
            _ => Zone::Residential,
        };
        let id = streets.len() as u32 + 1;
        let name = match stype {
            StreetType::Avenue => format!("Avenida {id}"),
            StreetType::Alameda => format!("Alameda {id}"),
            _ => format!("Rua {id}"),
        };
        streets.push(
            StreetPolyline::new(id, name, StreetAttributes::new(region, stype, zone), points)
                .expect("lattice runs are valid polylines"),
        );
    }

    let diagonals = [
        (Point::new(120.3, 95.7), Point::new(2810.9, 2790.1), StreetType::Avenue),
        (Point::new(150.2, 2770.4), Point::new(2760.8, 180.6), StreetType::Avenue),
        (Point::new(40.7, 1500.3), Point::new(2880.2, 1950.9), StreetType::Avenue),
        (Point::new(-300.0, 600.5), Point::new(3200.0, 820.7), StreetType::Highway),
    ];
    let lattice_segments: Vec<(Point, Point)> = all
        .iter()
        .filter(|e| lattice.has(**e))
        .map(|e| {
            let (a, b) = e.ends();
            (lattice.nodes[a], lattice.nodes[b])
        })
        .collect();
    let clearance = 1.5;
    let mut placed: Vec<(Point, Point)> = Vec::new();
    for (n, &(a0, b0, stype)) in diagonals.iter().enumerate() {
        let mut attempt = 0u32;
        let (a, b) = loop {
            let shift = f64::from(attempt) * 0.7;
            let a = Point::new(a0.x, round_sig(a0.y + shift));
            let b = Point::new(b0.x, round_sig(b0.y + shift));
            let near_node = lattice
                .nodes
                .iter()
                .any(|&p| segment_distance(p, a, b) < clearance);
            let near_end = [a, b].iter().any(|&q| {
                lattice_segments
                    .iter()
                    .any(|&(s, t)| segment_distance(q, s, t) < clearance)
            });
            let near_crossing = placed.iter().any(|&(c, d)| {
                match crate::geometry::crossing(a, b, c, d) {
                    Some((t, _)) => {
                        let x = a.lerp(b, t);
                        lattice_segments
                            .iter()
                            .any(|&(s, u)| segment_distance(x, s, u) < clearance)
                    }
                    None => false,
                }
            });
            if !near_node && !near_end && !near_crossing {
                break (a, b);
            }
            attempt += 1;
            assert!(attempt < 300, "no clear placement for diagonal {n}");
        };
        placed.push((a, b));
        let mid = a.lerp(b, 0.5);
        let id = (lattice_target + n + 1) as u32;
        let (name, zone) = match stype {
            StreetType::Highway => (format!("Rodovia {id}"), Zone::CommercialIndustrial),
            _ => (format!("Avenida {id}"), Zone::Mixed),
        };
        streets.push(
            StreetPolyline::new(
                id,
                name,
                StreetAttributes::new(region_of(mid), stype, zone),
                vec![a, b],
            )
            .expect("diagonals are valid polylines"),
        );
    }
    streets
}

/// The 2x2 grid with 100 m blocks and three generated deliveries.
pub fn grid_2x2_instance() -> Instance {
    let net = generate_grid_network(2, 2, 100.0, GridStyle::default()).expect("valid grid");
    let mut spec = GenerationSpec::new(3, 42, 1);
    spec.name = "grid-2x2".into();
    generate(&net, &PenaltyTable::DEFAULT, &spec).expect("grid has sampleable streets")
}

/// Thirteen customers `c1..c13` on vertices `1..=13` around a depot at
/// vertex 0, with the three-route example solution
/// `c3 c5 c4 c1 c2 | c6 c10 c11 c12 | c7 c8 c9 c13`.
pub fn figure_three() -> (Instance, Solution) {
    let mut net = StreetNetwork::new();
    let attrs = StreetAttributes::new(Region::Central, StreetType::Street, Zone::Mixed);
    net.add_street(StreetInfo {
        id: 1,
        name: "Ring".into(),
        attributes: attrs,
    })
    .expect("fresh id");
    net.add_street(StreetInfo {
        id: 2,
        name: "Spoke".into(),
        attributes: attrs,
    })
    .expect("fresh id");
    net.add_vertex(Point::new(0.0, 0.0), VertexKind::Depot)
        .expect("single depot");
    let mut ring = Vec::new();
    for i in 0..13 {
        let angle = std::f64::consts::TAU * i as f64 / 13.0;
        let p = Point::new((100.0 * angle.cos()).round(), (100.0 * angle.sin()).round());
        ring.push(net.add_vertex(p, VertexKind::Delivery).expect("delivery vertex"));
    }
    for i in 0..13 {
        let (a, b) = (ring[i], ring[(i + 1) % 13]);
        let w = net.vertices()[a].pos.distance(net.vertices()[b].pos);
        net.add_edge(a, b, w, 1).expect("ring edge");
    }
    for &c in &[ring[0], ring[4], ring[8]] {
        let w = net.vertices()[c].pos.distance(Point::new(0.0, 0.0));
        net.add_edge(0, c, w, 2).expect("spoke edge");
    }
    net.set_depot(0).expect("vertex 0 exists");
    net.canonicalize();
    let customers = (1..=13).map(|vertex| Customer { vertex, demand: 1 }).collect();
    let instance = Instance::new("figure-3", net, customers, 3).expect("valid fixture");
    let solution = Solution::from_routes(&[vec![3, 5, 4, 1, 2], vec![6, 10, 11, 12], vec![7, 8, 9, 13]]);
    (instance, solution)
}

/// A random connected network with integer edge weights in `1..=20`.
///
/// Vertex 0 is the depot, vertices `1..=deliveries` are delivery vertices,
/// the rest are corners. A random spanning tree is topped up with
/// `extra_edges` random chords, which may repeat existing pairs.
pub fn random_network(
    seed: u64,
    vertices: usize,
    deliveries: usize,
    extra_edges: usize,
) -> StreetNetwork {
    assert!(vertices >= 2 && deliveries < vertices);
    let mut rng = BenchRng::new(seed);
    let mut net = StreetNetwork::new();
    net.add_street(StreetInfo {
        id: 1,
        name: "Random".into(),
        attributes: StreetAttributes::new(Region::Central, StreetType::Street, Zone::Mixed),
    })
    .expect("fresh id");
    for v in 0..vertices {
        let kind = match v {
            0 => VertexKind::Depot,
            v if v <= deliveries => VertexKind::Delivery,
            _ => VertexKind::Corner,
        };
        let p = Point::new(
            uniform_below(&mut rng, 1000) as f64,
            uniform_below(&mut rng, 1000) as f64,
        );
        net.add_vertex(p, kind).expect("one depot");
    }
    let weight = |rng: &mut BenchRng| (uniform_below(rng, 20) + 1) as f64;
    for v in 1..vertices {
        let u = uniform_below(&mut rng, v);
        let w = weight(&mut rng);
        net.add_edge(u, v, w, 1).expect("tree edge");
    }
    for _ in 0..extra_edges {
        let u = uniform_below(&mut rng, vertices);
        let v = uniform_below(&mut rng, vertices);
        let w = weight(&mut rng);
        if u != v {
            net.add_edge(u, v, w, 1).expect("chord");
        }
    }
    net.set_depot(0).expect("vertex 0 exists");
    net
}

/// A small random instance over [`random_network`] with unit demands.
pub fn random_instance(seed: u64, customers: usize, vehicles: usize) -> Instance {
    let mut rng = BenchRng::new(seed ^ 0x9e37_79b9_7f4a_7c15);
    let corners = uniform_below(&mut rng, 4);
    let vertices = customers + 1 + corners;
    let extra = uniform_below(&mut rng, vertices + 1);
    let net = random_network(seed, vertices, customers, extra);
    let customers = (1..=customers)
        .map(|vertex| Customer { vertex, demand: 1 })
        .collect();
    let mut instance =
        Instance::new(format!("random-{seed}"), net, customers, vehicles).expect("valid instance");
    instance.seed = Some(seed);
    instance
}
