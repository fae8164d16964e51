//! Scoring and feasibility of solutions.
//!
//! Route length is the travel distance depot, first customer, ..., last
//! customer, depot, accumulated in travel order. A solution violating any
//! configured constraint costs [`Cost::Infinite`], a distinguished value
//! rather than a floating-point overflow.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::distance::DistanceOracle;
use crate::error::{DistanceError, EvalError};
use crate::instance::Instance;
use crate::network::VertexId;
use crate::solution::{next_permutation, RoutePartition, Solution, Token};

/// Largest `n + k - 1` accepted by [`best_permutation_bruteforce`].
pub const BRUTE_FORCE_LIMIT: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Objective {
    /// Sum of route lengths.
    #[default]
    TotalLength,
    /// Population variance of route lengths.
    FairnessVariance,
    /// Total length, then fairness variance.
    Lexicographic,
}

impl Objective {
    pub fn as_str(self) -> &'static str {
        match self {
            Objective::TotalLength => "total_length",
            Objective::FairnessVariance => "fairness_variance",
            Objective::Lexicographic => "lexicographic",
        }
    }

    /// Cost of a feasible solution with the given route lengths.
    pub fn score(self, lengths: &[f64]) -> Cost {
        let (total, variance) = aggregate(lengths);
        match self {
            Objective::TotalLength => Cost::finite(total),
            Objective::FairnessVariance => Cost::finite(variance),
            Objective::Lexicographic => Cost::Finite {
                primary: total,
                secondary: Some(variance),
            },
        }
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Objective {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "total_length" => Ok(Objective::TotalLength),
            "fairness_variance" | "fairness" => Ok(Objective::FairnessVariance),
            "lexicographic" => Ok(Objective::Lexicographic),
            _ => Err(format!(
                "unknown objective '{s}' (expected total_length, fairness_variance or lexicographic)"
            )),
        }
    }
}

/// Total length and population variance of route lengths.
pub fn aggregate(lengths: &[f64]) -> (f64, f64) {
    let total: f64 = lengths.iter().sum();
    if lengths.is_empty() {
        return (0.0, 0.0);
    }
    let k = lengths.len() as f64;
    let mean = total / k;
    let variance = lengths.iter().map(|l| (l - mean) * (l - mean)).sum::<f64>() / k;
    (total, variance)
}

/// Objective value of a solution; every feasible cost is below
/// [`Cost::Infinite`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cost {
    Finite {
        primary: f64,
        secondary: Option<f64>,
    },
    Infinite,
}

impl Cost {
    pub fn finite(value: f64) -> Self {
        Cost::Finite {
            primary: value,
            secondary: None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Cost::Infinite)
    }

    pub fn primary(&self) -> Option<f64> {
        match self {
            Cost::Finite { primary, .. } => Some(*primary),
            Cost::Infinite => None,
        }
    }
}

impl Eq for Cost {}

impl PartialOrd for Cost {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Cost {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Cost::Infinite, Cost::Infinite) => Ordering::Equal,
            (Cost::Infinite, _) => Ordering::Greater,
            (_, Cost::Infinite) => Ordering::Less,
            (
                Cost::Finite {
                    primary: a,
                    secondary: sa,
                },
                Cost::Finite {
                    primary: b,
                    secondary: sb,
                },
            ) => a.total_cmp(b).then_with(|| match (sa, sb) {
                (Some(x), Some(y)) => x.total_cmp(y),
                _ => sa.is_some().cmp(&sb.is_some()),
            }),
        }
    }
}

impl fmt::Display for Cost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cost::Infinite => f.write_str("inf"),
            Cost::Finite {
                primary,
                secondary: None,
            } => write!(f, "{primary}"),
            Cost::Finite {
                primary,
                secondary: Some(s),
            } => write!(f, "{primary};{s}"),
        }
    }
}

/// Constraint violations of one route.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RouteFlags {
    pub empty: bool,
    pub capacity: bool,
    pub max_length: bool,
    pub time_window: bool,
}

impl RouteFlags {
    pub fn any(&self) -> bool {
        self.empty || self.capacity || self.max_length || self.time_window
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RouteMetrics {
    pub length: f64,
    pub load: u64,
    pub stops: usize,
    pub flags: RouteFlags,
    /// Customers reached outside their time window.
    pub window_misses: Vec<VertexId>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RouteReport {
    pub objective: Objective,
    pub routes: Vec<RouteMetrics>,
    pub total_length: f64,
    /// Total length divided by the fleet size.
    pub average_length: f64,
    pub fairness_variance: f64,
    /// Equal to the fleet size, which the instance fixes.
    pub vehicles: usize,
    pub cost: Cost,
}

impl RouteReport {
    pub fn feasible(&self) -> bool {
        !self.cost.is_infinite()
    }

    pub fn f1(&self) -> f64 {
        self.total_length
    }

    pub fn f2(&self) -> usize {
        self.vehicles
    }

    pub fn flag_totals(&self) -> RouteFlags {
        self.routes.iter().fold(RouteFlags::default(), |acc, r| RouteFlags {
            empty: acc.empty || r.flags.empty,
            capacity: acc.capacity || r.flags.capacity,
            max_length: acc.max_length || r.flags.max_length,
            time_window: acc.time_window || r.flags.time_window,
        })
    }
}

/// Route metrics with the constraints of `instance` for vehicle `vehicle`.
pub(crate) fn measure_route<F>(
    instance: &Instance,
    demands: &HashMap<VertexId, u32>,
    vehicle: usize,
    route: &[VertexId],
    mut dist: F,
) -> Result<RouteMetrics, EvalError>
where
    F: FnMut(VertexId, VertexId) -> Result<f64, DistanceError>,
{
    let mut flags = RouteFlags::default();
    let mut window_misses = Vec::new();
    let mut load: u64 = 0;
    let mut length = 0.0;
    if route.is_empty() {
        flags.empty = instance.forbid_empty_routes;
    } else {
        let mut at = instance.depot;
        for &c in route {
            length += dist(at, c)?;
            if let Some(tw) = instance.time_windows.get(&c) {
                if !tw.contains(length) {
                    flags.time_window = true;
                    window_misses.push(c);
                }
            }
            load += u64::from(demands.get(&c).copied().unwrap_or(0));
            at = c;
        }
        length += dist(at, instance.depot)?;
    }
    if let Some(cap) = instance.capacity(vehicle) {
        flags.capacity = load > u64::from(cap);
    }
    if let Some(limit) = instance.max_route_length(vehicle) {
        flags.max_length = length > limit;
    }
    Ok(RouteMetrics {
        length,
        load,
        stops: route.len(),
        flags,
        window_misses,
    })
}

pub(crate) fn report(objective: Objective, routes: Vec<RouteMetrics>) -> RouteReport {
    let lengths: Vec<f64> = routes.iter().map(|r| r.length).collect();
    let (total, variance) = aggregate(&lengths);
    let feasible = routes.iter().all(|r| !r.flags.any());
    let cost = if feasible {
        objective.score(&lengths)
    } else {
        Cost::Infinite
    };
    RouteReport {
        objective,
        total_length: total,
        average_length: total / routes.len().max(1) as f64,
        fairness_variance: variance,
        vehicles: routes.len(),
        routes,
        cost,
    }
}

/// Length of a non-empty route, depot to depot.
pub fn route_length(
    route: &[VertexId],
    depot: VertexId,
    oracle: &DistanceOracle<'_>,
) -> Result<f64, EvalError> {
    if route.is_empty() {
        return Err(EvalError::EmptyRoute);
    }
    let mut length = 0.0;
    let mut at = depot;
    for &c in route {
        length += oracle.shortest_distance(at, c)?;
        at = c;
    }
    Ok(length + oracle.shortest_distance(at, depot)?)
}

/// Scores solutions of one instance, sharing a distance oracle.
pub struct Evaluator<'a> {
    instance: &'a Instance,
    oracle: DistanceOracle<'a>,
    customers: Vec<VertexId>,
    demands: HashMap<VertexId, u32>,
}

impl<'a> Evaluator<'a> {
    pub fn new(instance: &'a Instance) -> Self {
        Evaluator {
            instance,
            oracle: DistanceOracle::new(&instance.network),
            customers: instance.customer_vertices(),
            demands: instance.demand_map(),
        }
    }

    pub fn instance(&self) -> &'a Instance {
        self.instance
    }

    pub fn oracle(&self) -> &DistanceOracle<'a> {
        &self.oracle
    }

    pub fn distance(&self, u: VertexId, v: VertexId) -> Result<f64, DistanceError> {
        self.oracle.shortest_distance(u, v)
    }

    pub fn measure(&self, vehicle: usize, route: &[VertexId]) -> Result<RouteMetrics, EvalError> {
        measure_route(self.instance, &self.demands, vehicle, route, |u, v| {
            self.oracle.shortest_distance(u, v)
        })
    }

    /// Structural check, then metrics for every route.
    pub fn evaluate(&self, solution: &Solution, objective: Objective) -> Result<RouteReport, EvalError> {
        let partition = solution.validate(&self.customers, self.instance.vehicles)?;
        self.evaluate_partition(&partition, objective)
    }

    pub fn evaluate_partition(
        &self,
        partition: &RoutePartition,
        objective: Objective,
    ) -> Result<RouteReport, EvalError> {
        partition.validate(&self.customers, self.instance.vehicles)?;
        let routes = partition
            .routes
            .iter()
            .enumerate()
            .map(|(v, r)| self.measure(v, r))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(report(objective, routes))
    }
}

/// One-shot evaluation.
pub fn evaluate(
    instance: &Instance,
    solution: &Solution,
    objective: Objective,
) -> Result<RouteReport, EvalError> {
    Evaluator::new(instance).evaluate(solution, objective)
}

/// Exhaustive search over the distinct permutations of the solution
/// multiset. Ties go to the lexicographically smallest token sequence.
pub fn best_permutation_bruteforce(
    instance: &Instance,
    objective: Objective,
) -> Result<(Solution, Cost), EvalError> {
    let n = instance.customers.len();
    let k = instance.vehicles;
    if k == 0 {
        return Err(crate::error::SolutionError::NoVehicles.into());
    }
    let size = n + k - 1;
    if size > BRUTE_FORCE_LIMIT {
        return Err(EvalError::TooLarge {
            limit: BRUTE_FORCE_LIMIT,
            actual: size,
        });
    }
    let oracle = DistanceOracle::new(&instance.network);
    let mut terminals = vec![instance.depot];
    terminals.extend(instance.customers.iter().map(|c| c.vertex));
    let matrix = oracle.matrix(&terminals)?;
    let index: HashMap<VertexId, usize> =
        terminals.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let demands = instance.demand_map();
    let lookup = |u: VertexId, v: VertexId| Ok(matrix[index[&u]][index[&v]]);

    let mut tokens: Vec<Token> = instance
        .customers
        .iter()
        .map(|c| Token::Customer(c.vertex))
        .chain(std::iter::repeat_n(Token::Depot, k - 1))
        .collect();
    tokens.sort();
    let mut best: Option<(Vec<Token>, Cost)> = None;
    let mut routes: Vec<Vec<VertexId>> = Vec::with_capacity(k);
    loop {
        routes.clear();
        routes.push(Vec::new());
        for t in &tokens {
            match *t {
                Token::Depot => routes.push(Vec::new()),
                Token::Customer(c) => routes.last_mut().expect("route").push(c),
            }
        }
        let metrics = routes
            .iter()
            .enumerate()
            .map(|(v, r)| measure_route(instance, &demands, v, r, lookup))
            .collect::<Result<Vec<_>, _>>()?;
        let cost = report(objective, metrics).cost;
        if best.as_ref().is_none_or(|(_, c)| cost < *c) {
            best = Some((tokens.clone(), cost));
        }
        if !next_permutation(&mut tokens) {
            break;
        }
    }
    let (tokens, cost) = best.expect("at least one permutation");
    Ok((Solution::new(tokens), cost))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equal_routes_have_zero_variance() {
        assert_eq!(aggregate(&[10.0, 10.0]), (20.0, 0.0));
        assert_eq!(aggregate(&[2.0, 4.0]), (6.0, 1.0));
    }

    #[test]
    fn infinite_cost_dominates() {
        let worst_finite = Cost::finite(f64::MAX);
        assert!(worst_finite < Cost::Infinite);
        assert!(Cost::finite(1.0) < Cost::finite(2.0));
        let a = Cost::Finite {
            primary: 5.0,
            secondary: Some(3.0),
        };
        let b = Cost::Finite {
            primary: 5.0,
            secondary: Some(1.0),
        };
        assert!(b < a);
        assert_eq!(Cost::Infinite.to_string(), "inf");
        assert_eq!(a.to_string(), "5;3");
    }

    #[test]
    fn objective_names_round_trip() {
        for o in [
            Objective::TotalLength,
            Objective::FairnessVariance,
            Objective::Lexicographic,
        ] {
            assert_eq!(o.as_str().parse::<Objective>().unwrap(), o);
        }
        assert!("speed".parse::<Objective>().is_err());
    }
}
