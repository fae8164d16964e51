//! The weighted, undirected street graph.

use std::collections::BTreeMap;

use crate::density::StreetAttributes;
use crate::error::NetworkError;
use crate::geometry::{BoundingBox, Point};

pub type VertexId = usize;
pub type EdgeId = usize;
pub type StreetId = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VertexKind {
    Corner,
    Delivery,
    Depot,
}

impl VertexKind {
    pub fn as_str(self) -> &'static str {
        match self {
            VertexKind::Corner => "corner",
            VertexKind::Delivery => "delivery",
            VertexKind::Depot => "depot",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "corner" => Some(VertexKind::Corner),
            "delivery" => Some(VertexKind::Delivery),
            "depot" => Some(VertexKind::Depot),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vertex {
    pub pos: Point,
    pub kind: VertexKind,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    /// Length in meters.
    pub weight: f64,
    pub street: StreetId,
}

impl Edge {
    pub fn other(&self, end: VertexId) -> VertexId {
        if end == self.u {
            self.v
        } else {
            self.u
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StreetInfo {
    pub id: StreetId,
    pub name: String,
    pub attributes: StreetAttributes,
}

/// Attributed streets plus the routing graph built from them.
///
/// Vertex and edge ids are dense indices. At most one vertex is the depot.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct StreetNetwork {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    /// Sorted by id.
    streets: Vec<StreetInfo>,
    depot: Option<VertexId>,
}

impl StreetNetwork {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn streets(&self) -> &[StreetInfo] {
        &self.streets
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn depot(&self) -> Option<VertexId> {
        self.depot
    }

    pub fn vertex(&self, id: VertexId) -> Result<&Vertex, NetworkError> {
        self.vertices.get(id).ok_or(NetworkError::UnknownVertex(id))
    }

    pub fn edge(&self, id: EdgeId) -> Result<&Edge, NetworkError> {
        self.edges.get(id).ok_or(NetworkError::UnknownEdge(id))
    }

    pub fn street(&self, id: StreetId) -> Option<&StreetInfo> {
        self.streets
            .binary_search_by_key(&id, |s| s.id)
            .ok()
            .map(|i| &self.streets[i])
    }

    pub fn add_street(&mut self, info: StreetInfo) -> Result<(), NetworkError> {
        match self.streets.binary_search_by_key(&info.id, |s| s.id) {
            Ok(_) => Err(NetworkError::DuplicateStreet(info.id)),
            Err(pos) => {
                self.streets.insert(pos, info);
                Ok(())
            }
        }
    }

    pub fn add_vertex(&mut self, pos: Point, kind: VertexKind) -> Result<VertexId, NetworkError> {
        let id = self.vertices.len();
        if kind == VertexKind::Depot {
            if self.depot.is_some() {
                return Err(NetworkError::MultipleDepots);
            }
            self.depot = Some(id);
        }
        self.vertices.push(Vertex { pos, kind });
        Ok(id)
    }

    pub fn add_edge(
        &mut self,
        u: VertexId,
        v: VertexId,
        weight: f64,
        street: StreetId,
    ) -> Result<EdgeId, NetworkError> {
        self.vertex(u)?;
        self.vertex(v)?;
        if u == v {
            return Err(NetworkError::SelfLoop(u));
        }
        if !(weight > 0.0 && weight.is_finite()) {
            return Err(NetworkError::InvalidWeight(weight));
        }
        if self.street(street).is_none() {
            return Err(NetworkError::UnknownStreet(street));
        }
        self.edges.push(Edge {
            u,
            v,
            weight,
            street,
        });
        Ok(self.edges.len() - 1)
    }

    /// Makes `id` the depot; a previous depot reverts to a corner.
    pub fn set_depot(&mut self, id: VertexId) -> Result<(), NetworkError> {
        self.vertex(id)?;
        if let Some(old) = self.depot {
            self.vertices[old].kind = VertexKind::Corner;
        }
        self.vertices[id].kind = VertexKind::Depot;
        self.depot = Some(id);
        Ok(())
    }

    /// Turns an existing corner into a delivery vertex.
    pub fn mark_delivery(&mut self, id: VertexId) -> Result<(), NetworkError> {
        self.vertex(id)?;
        if self.depot == Some(id) {
            return Err(NetworkError::IsDepot(id));
        }
        self.vertices[id].kind = VertexKind::Delivery;
        Ok(())
    }

    /// Splits `edge` at `offset` meters from its `u` end.
    ///
    /// The edge keeps its id and becomes `(u, p, offset)`; a new edge
    /// `(p, v, weight - offset)` is appended. The new vertex `p` is a
    /// delivery vertex at the interpolated position.
    pub fn insert_point_on_edge(
        &mut self,
        edge: EdgeId,
        offset: f64,
    ) -> Result<VertexId, NetworkError> {
        let e = *self.edge(edge)?;
        if !(offset > 0.0 && offset < e.weight) {
            return Err(NetworkError::OffsetOutOfRange {
                offset,
                weight: e.weight,
            });
        }
        let rest = e.weight - offset;
        if rest <= 0.0 {
            return Err(NetworkError::OffsetOutOfRange {
                offset,
                weight: e.weight,
            });
        }
        let pu = self.vertices[e.u].pos;
        let pv = self.vertices[e.v].pos;
        let pos = pu.lerp(pv, offset / e.weight);
        let p = self.vertices.len();
        self.vertices.push(Vertex {
            pos,
            kind: VertexKind::Delivery,
        });
        self.edges[edge] = Edge {
            u: e.u,
            v: p,
            weight: offset,
            street: e.street,
        };
        self.edges.push(Edge {
            u: p,
            v: e.v,
            weight: rest,
            street: e.street,
        });
        Ok(p)
    }

    /// Number of incident edges per vertex.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertices.len()];
        for e in &self.edges {
            deg[e.u] += 1;
            deg[e.v] += 1;
        }
        deg
    }

    /// Number of connected components, isolated vertices included.
    pub fn component_count(&self) -> usize {
        let mut uf = UnionFind::new(self.vertices.len());
        for e in &self.edges {
            uf.union(e.u, e.v);
        }
        (0..self.vertices.len()).filter(|&v| uf.find(v) == v).count()
    }

    pub fn total_edge_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.weight).sum()
    }

    /// Edge ids per street, in edge-id order.
    pub fn edges_by_street(&self) -> BTreeMap<StreetId, Vec<EdgeId>> {
        let mut map: BTreeMap<StreetId, Vec<EdgeId>> =
            self.streets.iter().map(|s| (s.id, Vec::new())).collect();
        for (id, e) in self.edges.iter().enumerate() {
            map.entry(e.street).or_default().push(id);
        }
        map
    }

    /// Network length of each street: the sum of its edge weights.
    pub fn street_lengths(&self) -> BTreeMap<StreetId, f64> {
        self.edges_by_street()
            .into_iter()
            .map(|(s, ids)| (s, ids.iter().map(|&e| self.edges[e].weight).sum()))
            .collect()
    }

    pub fn bounding_box(&self) -> Option<BoundingBox> {
        BoundingBox::of(self.vertices.iter().map(|v| v.pos))
    }

    /// The vertex closest to the centroid of all vertex positions; ties go
    /// to the smallest id.
    pub fn vertex_nearest_centroid(&self) -> Option<VertexId> {
        if self.vertices.is_empty() {
            return None;
        }
        let n = self.vertices.len() as f64;
        let (sx, sy) = self
            .vertices
            .iter()
            .fold((0.0, 0.0), |(sx, sy), v| (sx + v.pos.x, sy + v.pos.y));
        let centroid = Point::new(sx / n, sy / n);
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (id, v) in self.vertices.iter().enumerate() {
            let d = v.pos.distance(centroid);
            if d < best_d {
                best = id;
                best_d = d;
            }
        }
        Some(best)
    }

    /// Rounds every coordinate and weight to the precision used by the
    /// file formats, so a serialized network parses back bit-exactly.
    pub fn canonicalize(&mut self) {
        for v in &mut self.vertices {
            v.pos.x = crate::format::round_sig(v.pos.x);
            v.pos.y = crate::format::round_sig(v.pos.y);
        }
        for e in &mut self.edges {
            e.weight = crate::format::round_sig(e.weight);
        }
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Links the larger root under the smaller one, so every root is the
    /// minimum of its set.
    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra < rb {
            self.parent[rb] = ra;
        } else if rb < ra {
            self.parent[ra] = rb;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::{Region, StreetType, Zone};

    fn one_edge(weight: f64) -> StreetNetwork {
        let mut net = StreetNetwork::new();
        net.add_street(StreetInfo {
            id: 7,
            name: "Main".into(),
            attributes: StreetAttributes::new(Region::Central, StreetType::Street, Zone::Mixed),
        })
        .unwrap();
        let a = net.add_vertex(Point::new(0.0, 0.0), VertexKind::Corner).unwrap();
        let b = net.add_vertex(Point::new(weight, 0.0), VertexKind::Corner).unwrap();
        net.add_edge(a, b, weight, 7).unwrap();
        net
    }

    #[test]
    fn split_replaces_edge_with_two_parts() {
        let mut net = one_edge(10.0);
        let p = net.insert_point_on_edge(0, 4.0).unwrap();
        assert_eq!(p, 2);
        assert_eq!(net.edge(0).unwrap().weight, 4.0);
        assert_eq!(net.edge(1).unwrap().weight, 6.0);
        assert_eq!((net.edge(0).unwrap().u, net.edge(0).unwrap().v), (0, 2));
        assert_eq!((net.edge(1).unwrap().u, net.edge(1).unwrap().v), (2, 1));
        assert_eq!(net.vertex(p).unwrap().kind, VertexKind::Delivery);
        assert_eq!(net.vertex(p).unwrap().pos, Point::new(4.0, 0.0));
        assert_eq!(net.edge(1).unwrap().street, 7);
    }

    #[test]
    fn split_rejects_offsets_outside_open_interval() {
        let mut net = one_edge(10.0);
        for bad in [0.0, 10.0, -1.0, 12.0, f64::NAN] {
            assert!(matches!(
                net.insert_point_on_edge(0, bad),
                Err(NetworkError::OffsetOutOfRange { .. })
            ));
        }
        assert_eq!(net.edge_count(), 1);
    }

    #[test]
    fn second_depot_is_rejected() {
        let mut net = StreetNetwork::new();
        net.add_vertex(Point::new(0.0, 0.0), VertexKind::Depot).unwrap();
        assert_eq!(
            net.add_vertex(Point::new(1.0, 0.0), VertexKind::Depot),
            Err(NetworkError::MultipleDepots)
        );
    }

    #[test]
    fn set_depot_moves_the_marker() {
        let mut net = one_edge(3.0);
        net.set_depot(0).unwrap();
        net.set_depot(1).unwrap();
        assert_eq!(net.depot(), Some(1));
        assert_eq!(net.vertex(0).unwrap().kind, VertexKind::Corner);
        assert_eq!(net.vertex(1).unwrap().kind, VertexKind::Depot);
    }

    #[test]
    fn edges_need_positive_weight_and_known_street() {
        let mut net = one_edge(3.0);
        assert_eq!(net.add_edge(0, 1, 0.0, 7), Err(NetworkError::InvalidWeight(0.0)));
        assert_eq!(net.add_edge(0, 1, 1.0, 99), Err(NetworkError::UnknownStreet(99)));
        assert_eq!(net.add_edge(0, 0, 1.0, 7), Err(NetworkError::SelfLoop(0)));
    }

    #[test]
    fn components_are_counted() {
        let mut net = one_edge(3.0);
        assert_eq!(net.component_count(), 1);
        net.add_vertex(Point::new(9.0, 9.0), VertexKind::Corner).unwrap();
        assert_eq!(net.component_count(), 2);
    }
}
