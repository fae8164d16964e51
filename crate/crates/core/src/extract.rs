//! Street polylines to a routing graph.
//!
//! Streets are broken into straight segments, the segments are split at
//! every crossing and T-junction, nearby endpoints are snapped together,
//! and the resulting intersection-free soup becomes a graph with one
//! vertex per distinct endpoint and one edge per segment.

use std::collections::HashMap;

use crate::density::StreetAttributes;
use crate::error::ExtractError;
use crate::geometry::{crossing, polyline_length, project, Point};
use crate::network::{StreetId, StreetInfo, StreetNetwork, UnionFind, VertexKind};

/// Snapping tolerance used when none is given, in meters.
pub const DEFAULT_EPSILON: f64 = 0.5;

const MAX_PASSES: usize = 32;

/// A named, attributed street drawn as a polyline.
#[derive(Debug, Clone, PartialEq)]
pub struct StreetPolyline {
    pub id: StreetId,
    pub name: String,
    pub attributes: StreetAttributes,
    points: Vec<Point>,
}

impl StreetPolyline {
    pub fn new(
        id: StreetId,
        name: impl Into<String>,
        attributes: StreetAttributes,
        points: Vec<Point>,
    ) -> Result<Self, ExtractError> {
        let invalid = |reason: &str| ExtractError::InvalidStreet {
            street: id,
            reason: reason.to_string(),
        };
        if points.len() < 2 {
            return Err(invalid("needs at least two points"));
        }
        if points.iter().any(|p| !p.x.is_finite() || !p.y.is_finite()) {
            return Err(invalid("non-finite coordinate"));
        }
        if points.windows(2).any(|w| w[0] == w[1]) {
            return Err(invalid("consecutive points coincide"));
        }
        Ok(StreetPolyline {
            id,
            name: name.into(),
            attributes,
            points,
        })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn length(&self) -> f64 {
        polyline_length(&self.points)
    }

    pub fn info(&self) -> StreetInfo {
        StreetInfo {
            id: self.id,
            name: self.name.clone(),
            attributes: self.attributes,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub street: StreetId,
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub fn length(&self) -> f64 {
        self.a.distance(self.b)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SegmentSoup {
    pub segments: Vec<Segment>,
}

impl SegmentSoup {
    pub fn from_streets(streets: &[StreetPolyline]) -> Self {
        let segments = streets
            .iter()
            .flat_map(|s| {
                s.points.windows(2).map(move |w| Segment {
                    street: s.id,
                    a: w[0],
                    b: w[1],
                })
            })
            .collect();
        SegmentSoup { segments }
    }

    pub fn total_length(&self) -> f64 {
        self.segments.iter().map(Segment::length).sum()
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }
}

/// How candidate segment pairs are enumerated.
///
/// Both strategies produce identical output: the bucketed one only skips
/// pairs whose bounding boxes are further apart than the tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PairStrategy {
    /// Every pair, quadratic.
    AllPairs,
    /// Pairs sharing a cell of a uniform grid over segment bounding boxes.
    #[default]
    Bucketed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SplitOutcome {
    pub soup: SegmentSoup,
    /// Segments that collapsed to zero length after snapping.
    pub dropped: Vec<Segment>,
    /// Pieces removed because another piece already covered the same
    /// endpoints (collinear overlaps).
    pub duplicates_removed: usize,
    pub passes: usize,
}

pub fn split_at_intersections(
    soup: &SegmentSoup,
    epsilon: f64,
) -> Result<SplitOutcome, ExtractError> {
    split_at_intersections_with(soup, epsilon, PairStrategy::default())
}

/// Splits segments at every mutual crossing and T-junction, merging
/// endpoints closer than `epsilon`, until the soup no longer changes.
pub fn split_at_intersections_with(
    soup: &SegmentSoup,
    epsilon: f64,
    strategy: PairStrategy,
) -> Result<SplitOutcome, ExtractError> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(ExtractError::InvalidEpsilon(epsilon));
    }
    let mut current = soup.clone();
    let mut dropped = Vec::new();
    let mut duplicates_removed = 0;
    let mut passes = 0;
    while passes < MAX_PASSES {
        passes += 1;
        let pass = split_pass(&current, epsilon, strategy);
        dropped.extend(pass.dropped);
        duplicates_removed += pass.duplicates_removed;
        if same_geometry(&pass.soup, &current) {
            break;
        }
        current = pass.soup;
    }
    Ok(SplitOutcome {
        soup: current,
        dropped,
        duplicates_removed,
        passes,
    })
}

struct Pass {
    soup: SegmentSoup,
    dropped: Vec<Segment>,
    duplicates_removed: usize,
}

fn split_pass(soup: &SegmentSoup, eps: f64, strategy: PairStrategy) -> Pass {
    let mut dropped = Vec::new();

    // Snap endpoints: every cluster of endpoints linked by distance <= eps
    // collapses onto its first member.
    let endpoints: Vec<Point> = soup.segments.iter().flat_map(|s| [s.a, s.b]).collect();
    let index = PointIndex::new(&endpoints, eps);
    let mut uf = UnionFind::new(endpoints.len());
    for (i, &p) in endpoints.iter().enumerate() {
        for j in index.near(p) {
            if j > i && endpoints[j].distance(p) <= eps {
                uf.union(i, j);
            }
        }
    }
    let mut segments = Vec::with_capacity(soup.segments.len());
    for (k, s) in soup.segments.iter().enumerate() {
        let a = endpoints[uf.find(2 * k)];
        let b = endpoints[uf.find(2 * k + 1)];
        if a == b {
            dropped.push(*s);
        } else {
            segments.push(Segment {
                street: s.street,
                a,
                b,
            });
        }
    }

    // Collect split points per segment.
    let mut splits: Vec<Vec<Point>> = vec![Vec::new(); segments.len()];
    let mut crossings: Vec<(usize, usize, Point)> = Vec::new();
    for (i, j) in candidate_pairs(&segments, eps, strategy) {
        let (si, sj) = (segments[i], segments[j]);
        let mut touched = false;
        for (host, guest, target) in [(si, sj, i), (sj, si, j)] {
            for p in [guest.a, guest.b] {
                if p == host.a || p == host.b {
                    continue;
                }
                if touches_interior(p, host, eps) {
                    splits[target].push(p);
                    touched = true;
                }
            }
        }
        let shares_end = si.a == sj.a || si.a == sj.b || si.b == sj.a || si.b == sj.b;
        if touched || shares_end {
            continue;
        }
        if let Some((t, _)) = crossing(si.a, si.b, sj.a, sj.b) {
            let q = si.a.lerp(si.b, t);
            let clear = [si.a, si.b, sj.a, sj.b]
                .iter()
                .all(|&e| e.distance(q) > eps);
            if clear {
                crossings.push((i, j, q));
            }
        }
    }

    // Snap crossing points onto existing vertices, or onto earlier crossing
    // points, within eps.
    let vertices: Vec<Point> = segments.iter().flat_map(|s| [s.a, s.b]).collect();
    let vertex_index = PointIndex::new(&vertices, eps);
    let mut placed: Vec<Point> = Vec::new();
    let mut placed_index = PointIndex::empty(eps);
    for &(i, j, q) in &crossings {
        let snapped = vertex_index
            .nearest_within(&vertices, q, eps)
            .or_else(|| placed_index.nearest_within(&placed, q, eps))
            .unwrap_or_else(|| {
                placed_index.insert(q, placed.len());
                placed.push(q);
                q
            });
        splits[i].push(snapped);
        splits[j].push(snapped);
    }

    // Cut segments at their split points, ordered along the segment.
    let mut out: Vec<Segment> = Vec::with_capacity(segments.len());
    let mut seen: HashMap<(PointKey, PointKey), ()> = HashMap::new();
    let mut duplicates_removed = 0;
    for (k, s) in segments.iter().enumerate() {
        let mut cuts: Vec<(f64, Point)> = splits[k]
            .iter()
            .map(|&p| (project(p, s.a, s.b).0, p))
            .collect();
        cuts.sort_by(|x, y| x.0.total_cmp(&y.0).then_with(|| x.1.total_cmp(&y.1)));
        cuts.dedup_by(|x, y| x.1 == y.1);
        let mut prev = s.a;
        for p in cuts.into_iter().map(|c| c.1).chain(std::iter::once(s.b)) {
            let piece = Segment {
                street: s.street,
                a: prev,
                b: p,
            };
            prev = p;
            if piece.a == piece.b {
                continue;
            }
            let ka = PointKey::of(piece.a);
            let kb = PointKey::of(piece.b);
            let key = if ka <= kb { (ka, kb) } else { (kb, ka) };
            if seen.insert(key, ()).is_some() {
                duplicates_removed += 1;
                continue;
            }
            out.push(piece);
        }
    }
    Pass {
        soup: SegmentSoup { segments: out },
        dropped,
        duplicates_removed,
    }
}

/// Equal as sets of undirected pieces. Near-degenerate triangles can make a
/// pass reassign pieces between streets without moving any of them.
fn same_geometry(x: &SegmentSoup, y: &SegmentSoup) -> bool {
    let keys = |soup: &SegmentSoup| {
        let mut keys: Vec<(PointKey, PointKey)> = soup
            .segments
            .iter()
            .map(|s| {
                let (ka, kb) = (PointKey::of(s.a), PointKey::of(s.b));
                if ka <= kb { (ka, kb) } else { (kb, ka) }
            })
            .collect();
        keys.sort_unstable();
        keys
    };
    x.segments.len() == y.segments.len() && keys(x) == keys(y)
}

/// Whether `p` lies within `eps` of the interior of `host`, away from both
/// of its endpoints.
fn touches_interior(p: Point, host: Segment, eps: f64) -> bool {
    if p.distance(host.a) <= eps || p.distance(host.b) <= eps {
        return false;
    }
    let (t, d) = project(p, host.a, host.b);
    d <= eps && t > 0.0 && t < 1.0
}

fn candidate_pairs(segments: &[Segment], eps: f64, strategy: PairStrategy) -> Vec<(usize, usize)> {
    let n = segments.len();
    match strategy {
        PairStrategy::AllPairs => (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .collect(),
        PairStrategy::Bucketed => {
            if n == 0 {
                return Vec::new();
            }
            let mean = segments.iter().map(Segment::length).sum::<f64>() / n as f64;
            let cell = mean.max(4.0 * eps);
            let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
            for (k, s) in segments.iter().enumerate() {
                let (x0, x1) = (s.a.x.min(s.b.x) - eps, s.a.x.max(s.b.x) + eps);
                let (y0, y1) = (s.a.y.min(s.b.y) - eps, s.a.y.max(s.b.y) + eps);
                for cx in cell_of(x0, cell)..=cell_of(x1, cell) {
                    for cy in cell_of(y0, cell)..=cell_of(y1, cell) {
                        grid.entry((cx, cy)).or_default().push(k);
                    }
                }
            }
            let mut pairs: Vec<(usize, usize)> = grid
                .values()
                .flat_map(|members| {
                    members.iter().enumerate().flat_map(move |(x, &i)| {
                        members[x + 1..].iter().map(move |&j| (i.min(j), i.max(j)))
                    })
                })
                .collect();
            pairs.sort_unstable();
            pairs.dedup();
            pairs
        }
    }
}

fn cell_of(v: f64, cell: f64) -> i64 {
    (v / cell).floor() as i64
}

/// Bit pattern of a coordinate pair with signed zeros unified, for hashing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct PointKey(u64, u64);

impl PointKey {
    fn of(p: Point) -> Self {
        PointKey((p.x + 0.0).to_bits(), (p.y + 0.0).to_bits())
    }
}

/// Uniform-grid point index with cells of size `eps`.
struct PointIndex {
    cell: f64,
    cells: HashMap<(i64, i64), Vec<usize>>,
}

impl PointIndex {
    fn empty(cell: f64) -> Self {
        PointIndex {
            cell,
            cells: HashMap::new(),
        }
    }

    fn new(points: &[Point], cell: f64) -> Self {
        let mut index = PointIndex::empty(cell);
        for (i, &p) in points.iter().enumerate() {
            index.insert(p, i);
        }
        index
    }

    fn insert(&mut self, p: Point, id: usize) {
        let key = (cell_of(p.x, self.cell), cell_of(p.y, self.cell));
        self.cells.entry(key).or_default().push(id);
    }

    /// Ids in the 3x3 block of cells around `p`, ascending.
    fn near(&self, p: Point) -> Vec<usize> {
        let (cx, cy) = (cell_of(p.x, self.cell), cell_of(p.y, self.cell));
        let mut ids = Vec::new();
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(v) = self.cells.get(&(cx + dx, cy + dy)) {
                    ids.extend_from_slice(v);
                }
            }
        }
        ids.sort_unstable();
        ids
    }

    /// Closest indexed point within `eps` of `p`; ties go to the lowest id.
    fn nearest_within(&self, points: &[Point], p: Point, eps: f64) -> Option<Point> {
        let mut best: Option<(f64, usize)> = None;
        for id in self.near(p) {
            let d = points[id].distance(p);
            if d <= eps && best.is_none_or(|(bd, _)| d < bd) {
                best = Some((d, id));
            }
        }
        best.map(|(_, id)| points[id])
    }
}

/// The graph built from an intersection-free soup.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphBuild {
    pub network: StreetNetwork,
    pub components: usize,
}

/// One vertex per distinct endpoint (in order of first appearance), one
/// undirected edge per segment weighted by its Euclidean length.
pub fn build_graph(soup: &SegmentSoup, streets: &[StreetInfo]) -> Result<GraphBuild, ExtractError> {
    if soup.is_empty() {
        return Err(ExtractError::NoSegments);
    }
    let mut network = StreetNetwork::new();
    for info in streets {
        if network.street(info.id).is_none() {
            network
                .add_street(info.clone())
                .expect("duplicate ruled out above");
        }
    }
    let mut ids: HashMap<PointKey, usize> = HashMap::new();
    let mut vertex = |network: &mut StreetNetwork, p: Point| -> usize {
        *ids.entry(PointKey::of(p)).or_insert_with(|| {
            network
                .add_vertex(p, VertexKind::Corner)
                .expect("corner vertices never conflict")
        })
    };
    for s in &soup.segments {
        let u = vertex(&mut network, s.a);
        let v = vertex(&mut network, s.b);
        network
            .add_edge(u, v, s.length(), s.street)
            .map_err(|e| ExtractError::InvalidStreet {
                street: s.street,
                reason: e.to_string(),
            })?;
    }
    let components = network.component_count();
    Ok(GraphBuild {
        network,
        components,
    })
}

/// Full pipeline: polylines to split soup to graph, with the depot placed
/// at the vertex nearest the centroid.
pub fn extract_network(streets: &[StreetPolyline], epsilon: f64) -> Result<(GraphBuild, SplitOutcome), ExtractError> {
    let soup = SegmentSoup::from_streets(streets);
    let outcome = split_at_intersections(&soup, epsilon)?;
    let infos: Vec<StreetInfo> = streets.iter().map(StreetPolyline::info).collect();
    let mut build = build_graph(&outcome.soup, &infos)?;
    if let Some(depot) = build.network.vertex_nearest_centroid() {
        build
            .network
            .set_depot(depot)
            .expect("centroid vertex exists");
    }
    Ok((build, outcome))
}
