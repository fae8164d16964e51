//! Deterministic SVG drawings of instances and solutions.
//!
//! Streets are drawn edge by edge, one path per street; deliveries are
//! dots and the depot a square. Each route follows the actual shortest
//! street paths between consecutive stops.

use std::fmt::Write as _;

use crate::distance::DistanceOracle;
use crate::error::{DistanceError, EvalError};
use crate::geometry::Point;
use crate::instance::Instance;
use crate::network::VertexId;
use crate::solution::Solution;

#[derive(Debug, Clone, PartialEq)]
pub struct RenderStyle {
    /// Canvas width in pixels; the height follows the network's aspect.
    pub width: f64,
    pub padding: f64,
    pub street_width: f64,
    pub route_width: f64,
    pub delivery_radius: f64,
    pub depot_size: f64,
    pub street_color: String,
    pub delivery_color: String,
    pub depot_color: String,
    /// Route colors, reused cyclically in route order.
    pub palette: Vec<String>,
}

impl Default for RenderStyle {
    fn default() -> Self {
        RenderStyle {
            width: 800.0,
            padding: 20.0,
            street_width: 2.0,
            route_width: 3.0,
            delivery_radius: 2.5,
            depot_size: 10.0,
            street_color: "#b0b0b0".into(),
            delivery_color: "#303030".into(),
            depot_color: "#d00000".into(),
            palette: [
                "#1f77b4", "#ff7f0e", "#2ca02c", "#9467bd", "#8c564b", "#e377c2", "#17becf",
                "#bcbd22", "#7f7f7f", "#393b79",
            ]
            .iter()
            .map(|s| s.to_string())
            .collect(),
        }
    }
}

/// Vertex sequence a vehicle drives: depot, shortest paths through every
/// stop, back to the depot. Empty routes have no path.
pub fn route_path(
    oracle: &DistanceOracle<'_>,
    depot: VertexId,
    route: &[VertexId],
) -> Result<Vec<VertexId>, DistanceError> {
    if route.is_empty() {
        return Ok(Vec::new());
    }
    let mut path = vec![depot];
    let stops = route.iter().copied().chain(std::iter::once(depot));
    let mut at = depot;
    for next in stops {
        let leg = oracle.shortest_path(at, next)?;
        path.extend_from_slice(&leg[1..]);
        at = next;
    }
    Ok(path)
}

struct Frame {
    min: Point,
    max_y: f64,
    scale: f64,
    padding: f64,
}

impl Frame {
    fn map(&self, p: Point) -> (f64, f64) {
        (
            self.padding + (p.x - self.min.x) * self.scale,
            self.padding + (self.max_y - p.y) * self.scale,
        )
    }
}

fn px(v: f64) -> String {
    let s = format!("{v:.2}");
    if s == "-0.00" {
        "0.00".into()
    } else {
        s
    }
}

pub fn render_svg(
    instance: &Instance,
    solution: Option<&Solution>,
    style: &RenderStyle,
) -> Result<String, EvalError> {
    let network = &instance.network;
    let oracle = DistanceOracle::new(network);
    let mut paths = Vec::new();
    if let Some(solution) = solution {
        let partition = solution.validate(&instance.customer_vertices(), instance.vehicles)?;
        for route in &partition.routes {
            paths.push(route_path(&oracle, instance.depot, route)?);
        }
    }

    let bbox = network.bounding_box().unwrap_or(crate::geometry::BoundingBox {
        min: Point::default(),
        max: Point::default(),
    });
    let extent = bbox.width().max(bbox.height()).max(1e-9);
    let inner = (style.width - 2.0 * style.padding).max(1.0);
    let scale = inner / bbox.width().max(extent * 1e-3);
    let height = (bbox.height() * scale + 2.0 * style.padding).ceil();
    let frame = Frame {
        min: bbox.min,
        max_y: bbox.max.y,
        scale,
        padding: style.padding,
    };
    let pos = |v: VertexId| frame.map(network.vertices()[v].pos);

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">",
        w = px(style.width),
        h = px(height)
    );
    let _ = writeln!(out, "<title>{}</title>", escape(&instance.name));
    let _ = writeln!(
        out,
        "<g id=\"streets\" fill=\"none\" stroke=\"{}\" stroke-width=\"{}\" stroke-linecap=\"round\">",
        style.street_color,
        px(style.street_width)
    );
    for (street, edges) in network.edges_by_street() {
        if edges.is_empty() {
            continue;
        }
        let mut d = String::new();
        for e in edges {
            let edge = network.edges()[e];
            let (x1, y1) = pos(edge.u);
            let (x2, y2) = pos(edge.v);
            if !d.is_empty() {
                d.push(' ');
            }
            let _ = write!(d, "M{} {} L{} {}", px(x1), px(y1), px(x2), px(y2));
        }
        let _ = writeln!(out, "<path data-street=\"{street}\" d=\"{d}\"/>");
    }
    out.push_str("</g>\n");

    let _ = writeln!(
        out,
        "<g id=\"routes\" fill=\"none\" stroke-width=\"{}\" stroke-linejoin=\"round\">",
        px(style.route_width)
    );
    for (i, path) in paths.iter().enumerate() {
        if path.is_empty() {
            continue;
        }
        let color = if style.palette.is_empty() {
            "#000000"
        } else {
            &style.palette[i % style.palette.len()]
        };
        let points: Vec<String> = path
            .iter()
            .map(|&v| {
                let (x, y) = pos(v);
                format!("{},{}", px(x), px(y))
            })
            .collect();
        let _ = writeln!(
            out,
            "<polyline data-route=\"{}\" stroke=\"{color}\" points=\"{}\"/>",
            i + 1,
            points.join(" ")
        );
    }
    out.push_str("</g>\n");

    let _ = writeln!(out, "<g id=\"deliveries\" fill=\"{}\">", style.delivery_color);
    for c in &instance.customers {
        let (x, y) = pos(c.vertex);
        let _ = writeln!(
            out,
            "<circle data-vertex=\"{}\" cx=\"{}\" cy=\"{}\" r=\"{}\"/>",
            c.vertex,
            px(x),
            px(y),
            px(style.delivery_radius)
        );
    }
    out.push_str("</g>\n");

    let (x, y) = pos(instance.depot);
    let half = style.depot_size / 2.0;
    let _ = writeln!(
        out,
        "<rect id=\"depot\" data-vertex=\"{}\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\"/>",
        instance.depot,
        px(x - half),
        px(y - half),
        px(style.depot_size),
        px(style.depot_size),
        style.depot_color
    );
    out.push_str("</svg>\n");
    Ok(out)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
