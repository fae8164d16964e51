use crate::distance::DistanceOracle;
use crate::error::SolverError;
use crate::heuristics::SolverConfig;
use crate::instance::Instance;
use crate::network::VertexId;
use crate::solution::Solution;

/// Builds `k` routes round-robin: each vehicle in turn appends the
/// unvisited customer nearest to its last stop (ties to the smallest id).
pub fn nearest_neighbor_construct(
    instance: &Instance,
    config: &SolverConfig,
) -> Result<Solution, SolverError> {
    config.validate()?;
    let n = instance.customers.len();
    let k = instance.vehicles;
    if k > n {
        return Err(SolverError::MoreVehiclesThanCustomers {
            vehicles: k,
            customers: n,
        });
    }
    let oracle = DistanceOracle::new(&instance.network);
    let mut unvisited: Vec<VertexId> = instance.customer_vertices();
    unvisited.sort_unstable();
    let mut routes: Vec<Vec<VertexId>> = vec![Vec::new(); k];
    let mut position = vec![instance.depot; k];
    'outer: loop {
        for v in 0..k {
            if unvisited.is_empty() {
                break 'outer;
            }
            let row = oracle.distances_from(position[v]).map_err(crate::error::EvalError::from)?;
            let mut best = 0;
            for i in 1..unvisited.len() {
                // Strict comparison keeps the smallest id among ties.
                if row[unvisited[i]] < row[unvisited[best]] {
                    best = i;
                }
            }
            let next = unvisited.remove(best);
            if !row[next].is_finite() {
                return Err(crate::error::EvalError::from(
                    crate::error::DistanceError::DisconnectedPair {
                        from: position[v],
                        to: next,
                    },
                )
                .into());
            }
            routes[v].push(next);
            position[v] = next;
        }
    }
    Ok(Solution::from_routes(&routes))
}
