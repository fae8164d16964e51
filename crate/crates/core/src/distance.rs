//! Shortest-path distances over a [`StreetNetwork`].
//!
//! Distances are computed on demand, one Dijkstra solve per source vertex,
//! and memoized. Only depot and customer vertices are ever used as sources,
//! so a full all-pairs table is never built.

use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, HashMap};
use std::sync::{Arc, RwLock};

use crate::error::DistanceError;
use crate::network::{StreetNetwork, VertexId};

#[derive(Debug, Clone, Copy, PartialEq)]
struct Dist(f64);

impl Eq for Dist {}

impl PartialOrd for Dist {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dist {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Memoizing single-source shortest-path service.
///
/// Safe to query from several threads; the memo is behind a lock.
pub struct DistanceOracle<'a> {
    network: &'a StreetNetwork,
    offsets: Vec<usize>,
    adjacency: Vec<(VertexId, f64)>,
    memo: RwLock<HashMap<VertexId, Arc<[f64]>>>,
}

impl<'a> DistanceOracle<'a> {
    pub fn new(network: &'a StreetNetwork) -> Self {
        let n = network.vertex_count();
        let mut offsets = vec![0usize; n + 1];
        for e in network.edges() {
            offsets[e.u + 1] += 1;
            offsets[e.v + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut adjacency = vec![(0, 0.0); offsets[n]];
        for e in network.edges() {
            adjacency[fill[e.u]] = (e.v, e.weight);
            fill[e.u] += 1;
            adjacency[fill[e.v]] = (e.u, e.weight);
            fill[e.v] += 1;
        }
        DistanceOracle {
            network,
            offsets,
            adjacency,
            memo: RwLock::new(HashMap::new()),
        }
    }

    pub fn network(&self) -> &'a StreetNetwork {
        self.network
    }

    fn check(&self, v: VertexId) -> Result<(), DistanceError> {
        if v < self.network.vertex_count() {
            Ok(())
        } else {
            Err(DistanceError::UnknownVertex(v))
        }
    }

    fn neighbors(&self, v: VertexId) -> &[(VertexId, f64)] {
        &self.adjacency[self.offsets[v]..self.offsets[v + 1]]
    }

    /// Distances from `source` to every vertex; unreachable vertices hold
    /// `f64::INFINITY`.
    pub fn distances_from(&self, source: VertexId) -> Result<Arc<[f64]>, DistanceError> {
        self.check(source)?;
        if let Some(row) = self.memo.read().unwrap().get(&source) {
            return Ok(Arc::clone(row));
        }
        let (dist, _) = self.dijkstra(source, false);
        let row: Arc<[f64]> = dist.into();
        let mut memo = self.memo.write().unwrap();
        Ok(Arc::clone(memo.entry(source).or_insert(row)))
    }

    /// Length of a shortest path from `u` to `v`.
    pub fn shortest_distance(&self, u: VertexId, v: VertexId) -> Result<f64, DistanceError> {
        self.check(v)?;
        let d = self.distances_from(u)?[v];
        if d.is_finite() {
            Ok(d)
        } else {
            Err(DistanceError::DisconnectedPair { from: u, to: v })
        }
    }

    /// The vertex sequence of a shortest path from `u` to `v`, both ends
    /// included. Not memoized.
    pub fn shortest_path(&self, u: VertexId, v: VertexId) -> Result<Vec<VertexId>, DistanceError> {
        self.check(u)?;
        self.check(v)?;
        let (dist, pred) = self.dijkstra(u, true);
        if !dist[v].is_finite() {
            return Err(DistanceError::DisconnectedPair { from: u, to: v });
        }
        let mut path = vec![v];
        let mut cur = v;
        while cur != u {
            cur = pred[cur];
            path.push(cur);
        }
        path.reverse();
        Ok(path)
    }

    /// Square matrix of distances between the given vertices.
    pub fn matrix(&self, vertices: &[VertexId]) -> Result<Vec<Vec<f64>>, DistanceError> {
        vertices
            .iter()
            .map(|&a| {
                let row = self.distances_from(a)?;
                vertices
                    .iter()
                    .map(|&b| {
                        let d = row.get(b).copied().ok_or(DistanceError::UnknownVertex(b))?;
                        if d.is_finite() {
                            Ok(d)
                        } else {
                            Err(DistanceError::DisconnectedPair { from: a, to: b })
                        }
                    })
                    .collect()
            })
            .collect()
    }

    fn dijkstra(&self, source: VertexId, track: bool) -> (Vec<f64>, Vec<VertexId>) {
        let n = self.network.vertex_count();
        let mut dist = vec![f64::INFINITY; n];
        let mut pred = if track { vec![usize::MAX; n] } else { Vec::new() };
        let mut heap = BinaryHeap::new();
        dist[source] = 0.0;
        heap.push(Reverse((Dist(0.0), source)));
        while let Some(Reverse((Dist(d), v))) = heap.pop() {
            if d > dist[v] {
                continue;
            }
            for &(w, weight) in self.neighbors(v) {
                let nd = d + weight;
                if nd < dist[w] {
                    dist[w] = nd;
                    if track {
                        pred[w] = v;
                    }
                    heap.push(Reverse((Dist(nd), w)));
                }
            }
        }
        (dist, pred)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::{Region, StreetAttributes, StreetType, Zone};
    use crate::geometry::Point;
    use crate::network::{StreetInfo, VertexKind};

    fn path_graph(weights: &[f64]) -> StreetNetwork {
        let mut net = StreetNetwork::new();
        net.add_street(StreetInfo {
            id: 0,
            name: "s".into(),
            attributes: StreetAttributes::new(Region::Central, StreetType::Street, Zone::Mixed),
        })
        .unwrap();
        let mut x = 0.0;
        net.add_vertex(Point::new(x, 0.0), VertexKind::Corner).unwrap();
        for (i, &w) in weights.iter().enumerate() {
            x += w;
            net.add_vertex(Point::new(x, 0.0), VertexKind::Corner).unwrap();
            net.add_edge(i, i + 1, w, 0).unwrap();
        }
        net
    }

    #[test]
    fn path_graph_distance_is_sum() {
        let net = path_graph(&[1.0, 2.0]);
        let oracle = DistanceOracle::new(&net);
        assert_eq!(oracle.shortest_distance(0, 2).unwrap(), 3.0);
        assert_eq!(oracle.shortest_distance(2, 0).unwrap(), 3.0);
        assert_eq!(oracle.shortest_distance(0, 0).unwrap(), 0.0);
        assert_eq!(oracle.shortest_path(0, 2).unwrap(), vec![0, 1, 2]);
    }

    #[test]
    fn unreachable_pair_is_an_error() {
        let mut net = path_graph(&[1.0]);
        net.add_vertex(Point::new(5.0, 5.0), VertexKind::Corner).unwrap();
        let oracle = DistanceOracle::new(&net);
        assert_eq!(
            oracle.shortest_distance(0, 2),
            Err(DistanceError::DisconnectedPair { from: 0, to: 2 })
        );
        assert!(oracle.shortest_path(2, 0).is_err());
        assert_eq!(
            oracle.shortest_distance(0, 9),
            Err(DistanceError::UnknownVertex(9))
        );
    }

    #[test]
    fn warm_cache_matches_cold_cache() {
        let net = path_graph(&[0.1, 0.2, 0.3, 0.4]);
        let warm = DistanceOracle::new(&net);
        let first: Vec<f64> = (0..5).map(|v| warm.shortest_distance(0, v).unwrap()).collect();
        let again: Vec<f64> = (0..5).map(|v| warm.shortest_distance(0, v).unwrap()).collect();
        let cold: Vec<f64> = (0..5)
            .map(|v| DistanceOracle::new(&net).shortest_distance(0, v).unwrap())
            .collect();
        assert_eq!(first, again);
        assert_eq!(first, cold);
    }

    #[test]
    fn split_edge_distance_is_offset() {
        let mut net = path_graph(&[10.0]);
        let p = net.insert_point_on_edge(0, 4.0).unwrap();
        let oracle = DistanceOracle::new(&net);
        assert_eq!(oracle.shortest_distance(0, p).unwrap(), 4.0);
        assert_eq!(oracle.shortest_distance(p, 1).unwrap(), 6.0);
        assert_eq!(oracle.shortest_distance(0, 1).unwrap(), 10.0);
    }
}
