//! Independent reference computations shared by the integration tests.
//! Nothing here calls into the code under test beyond reading plain data.
#![allow(dead_code, clippy::needless_range_loop)]

use vrpbench::evaluate::Cost;
use vrpbench::geometry::Point;
use vrpbench::instance::Instance;
use vrpbench::network::{StreetInfo, StreetNetwork, VertexKind};
use vrpbench::rng::BenchRng;
use vrpbench::solution::Token;
use vrpbench::{Objective, Region, StreetAttributes, StreetType, Zone};

/// All-pairs shortest distances by Floyd-Warshall over the edge list.
pub fn floyd_warshall(net: &StreetNetwork) -> Vec<Vec<f64>> {
    let n = net.vertex_count();
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    for e in net.edges() {
        if e.weight < d[e.u][e.v] {
            d[e.u][e.v] = e.weight;
            d[e.v][e.u] = e.weight;
        }
    }
    for k in 0..n {
        for i in 0..n {
            let dik = d[i][k];
            if dik.is_infinite() {
                continue;
            }
            for j in 0..n {
                let via = dik + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    if a == b {
        return true;
    }
    (a - b).abs() <= tol * a.abs().max(b.abs())
}

/// Scores a token sequence from a precomputed distance matrix.
/// `None` marks infeasible or malformed sequences.
pub fn matrix_cost(
    instance: &Instance,
    dist: &[Vec<f64>],
    tokens: &[Token],
    objective: Objective,
) -> Option<Cost> {
    let mut routes: Vec<Vec<usize>> = vec![Vec::new()];
    for t in tokens {
        match t {
            Token::Depot => routes.push(Vec::new()),
            Token::Customer(c) => routes.last_mut().unwrap().push(*c),
        }
    }
    if routes.len() != instance.vehicles {
        return None;
    }
    let mut visited: Vec<usize> = routes.iter().flatten().copied().collect();
    visited.sort_unstable();
    let mut expected: Vec<usize> = instance.customers.iter().map(|c| c.vertex).collect();
    expected.sort_unstable();
    if visited != expected {
        return None;
    }
    let mut lengths = Vec::new();
    for (v, route) in routes.iter().enumerate() {
        if route.is_empty() {
            if instance.forbid_empty_routes {
                return Some(Cost::Infinite);
            }
            lengths.push(0.0);
            continue;
        }
        let mut stops = vec![instance.depot];
        stops.extend(route);
        stops.push(instance.depot);
        let mut length = 0.0;
        let mut load = 0u64;
        for (i, w) in stops.windows(2).enumerate() {
            length += dist[w[0]][w[1]];
            if i + 1 < stops.len() - 1 {
                let c = w[1];
                if let Some(tw) = instance.time_windows.get(&c) {
                    if length < tw.earliest || length > tw.latest {
                        return Some(Cost::Infinite);
                    }
                }
                load += instance
                    .customers
                    .iter()
                    .find(|x| x.vertex == c)
                    .map_or(0, |x| u64::from(x.demand));
            }
        }
        if let Some(caps) = &instance.capacities {
            if load > u64::from(caps[v]) {
                return Some(Cost::Infinite);
            }
        }
        if let Some(limits) = &instance.max_route_lengths {
            if length > limits[v] {
                return Some(Cost::Infinite);
            }
        }
        lengths.push(length);
    }
    let total: f64 = lengths.iter().sum();
    let variance = exact_variance(&lengths);
    Some(match objective {
        Objective::TotalLength => Cost::Finite {
            primary: total,
            secondary: None,
        },
        Objective::FairnessVariance => Cost::Finite {
            primary: variance,
            secondary: None,
        },
        Objective::Lexicographic => Cost::Finite {
            primary: total,
            secondary: Some(variance),
        },
    })
}

/// Population variance of integer-valued lengths through exact integer
/// arithmetic, `(k * sum(l^2) - sum(l)^2) / k^2`.
pub fn exact_variance(lengths: &[f64]) -> f64 {
    assert!(lengths.iter().all(|l| l.fract() == 0.0));
    let k = lengths.len() as i128;
    let s: i128 = lengths.iter().map(|&l| l as i128).sum();
    let s2: i128 = lengths.iter().map(|&l| (l as i128) * (l as i128)).sum();
    (k * s2 - s * s) as f64 / (k * k) as f64
}

/// Every distinct token sequence with the instance's customers and
/// `k - 1` depot tokens, by recursion over remaining counts. Sequences
/// come out in lexicographic order (customers before the depot token).
pub fn all_sequences(customers: &[usize], k: usize) -> Vec<Vec<Token>> {
    let mut pool: Vec<(Token, usize)> = {
        let mut c: Vec<usize> = customers.to_vec();
        c.sort_unstable();
        c.into_iter().map(|v| (Token::Customer(v), 1)).collect()
    };
    if k > 1 {
        pool.push((Token::Depot, k - 1));
    }
    let len = customers.len() + k - 1;
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(len);
    fn rec(pool: &mut [(Token, usize)], len: usize, current: &mut Vec<Token>, out: &mut Vec<Vec<Token>>) {
        if current.len() == len {
            out.push(current.clone());
            return;
        }
        for i in 0..pool.len() {
            if pool[i].1 == 0 {
                continue;
            }
            pool[i].1 -= 1;
            current.push(pool[i].0);
            rec(pool, len, current, out);
            current.pop();
            pool[i].1 += 1;
        }
    }
    rec(&mut pool, len, &mut current, &mut out);
    out
}

/// Minimum cost over all sequences, and the first sequence reaching it.
pub fn enumerate_optimum(
    instance: &Instance,
    dist: &[Vec<f64>],
    objective: Objective,
) -> (Vec<Token>, Cost) {
    let customers: Vec<usize> = instance.customers.iter().map(|c| c.vertex).collect();
    let mut best: Option<(Vec<Token>, Cost)> = None;
    for seq in all_sequences(&customers, instance.vehicles) {
        let cost = matrix_cost(instance, dist, &seq, objective).expect("well-formed sequence");
        if best.as_ref().is_none_or(|(_, b)| cost < *b) {
            best = Some((seq, cost));
        }
    }
    best.expect("at least one sequence")
}

/// Random connected graph with real weights in `[1, 100)`.
pub fn random_real_network(seed: u64, vertices: usize, chords: usize) -> StreetNetwork {
    let mut rng = BenchRng::new(seed);
    let mut net = StreetNetwork::new();
    net.add_street(StreetInfo {
        id: 1,
        name: "s".into(),
        attributes: StreetAttributes::new(Region::Central, StreetType::Street, Zone::Mixed),
    })
    .unwrap();
    for v in 0..vertices {
        let kind = if v == 0 { VertexKind::Depot } else { VertexKind::Corner };
        net.add_vertex(Point::new(rng.unit_open() * 100.0, rng.unit_open() * 100.0), kind)
            .unwrap();
    }
    let below = |rng: &mut BenchRng, n: usize| ((rng.unit_open() * n as f64) as usize).min(n - 1);
    for v in 1..vertices {
        let u = below(&mut rng, v);
        let w = 1.0 + 99.0 * rng.unit_open();
        net.add_edge(u, v, w, 1).unwrap();
    }
    for _ in 0..chords {
        let u = below(&mut rng, vertices);
        let v = below(&mut rng, vertices);
        let w = 1.0 + 99.0 * rng.unit_open();
        if u != v {
            net.add_edge(u, v, w, 1).unwrap();
        }
    }
    net.set_depot(0).unwrap();
    net
}

/// Upper critical value of the chi-square distribution by the
/// Wilson-Hilferty cube approximation.
pub fn chi_square_critical(dof: f64, z: f64) -> f64 {
    let a = 2.0 / (9.0 * dof);
    dof * (1.0 - a + z * a.sqrt()).powi(3)
}

/// Standard normal quantile `z` with upper tail 1e-4.
pub const Z_1E4: f64 = 3.719_016_485;

/// `P(|X/n - p| > delta)` for `X ~ Binomial(n, p)`, summed exactly in log
/// space.
pub fn binomial_two_sided_tail(n: u64, p: f64, delta: f64) -> f64 {
    let mut ln_fact = vec![0.0f64; n as usize + 1];
    for i in 1..=n as usize {
        ln_fact[i] = ln_fact[i - 1] + (i as f64).ln();
    }
    (0..=n)
        .filter(|&k| (k as f64 / n as f64 - p).abs() > delta)
        .map(|k| {
            let (k_, n_) = (k as usize, n as usize);
            (ln_fact[n_] - ln_fact[k_] - ln_fact[n_ - k_]
                + k as f64 * p.ln()
                + (n - k) as f64 * (1.0 - p).ln())
            .exp()
        })
        .sum()
}
