//! Sectioned text format for networks and instances.
//!
//! ```text
//! NAME: an-1000-01
//! TYPE: VRPBENCH
//! UNIT: meters
//! VEHICLES: 10
//! DEPOT: 57
//! SEED: 7
//! GENERATOR_VERSION: vrpbench-0.1.0
//! VERTICES 3
//! 0 0 0 corner
//! ...
//! EDGES 2
//! 0 1 100 4
//! ...
//! STREETS 1
//! 4 central avenue mixed Rua XV de Novembro
//! DELIVERIES 1
//! 2 1
//! EOF
//! ```
//!
//! Networks use `TYPE: VRPBENCH_NETWORK` and carry no fleet or deliveries.
//! Every section header states its line count and the file ends with
//! `EOF`, so truncated files are always rejected.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;

use crate::density::StreetAttributes;
use crate::error::ParseError;
use crate::format::fmt_num;
use crate::geometry::Point;
use crate::instance::{Customer, Instance, TimeWindow};
use crate::network::{StreetInfo, StreetNetwork, VertexKind};

const TYPE_INSTANCE: &str = "VRPBENCH";
const TYPE_NETWORK: &str = "VRPBENCH_NETWORK";
const UNIT: &str = "meters";
const NO_WAIT: &str = "no_wait";

fn write_network_sections(out: &mut String, network: &StreetNetwork) {
    let _ = writeln!(out, "VERTICES {}", network.vertex_count());
    for (id, v) in network.vertices().iter().enumerate() {
        let _ = writeln!(out, "{id} {} {} {}", fmt_num(v.pos.x), fmt_num(v.pos.y), v.kind.as_str());
    }
    let _ = writeln!(out, "EDGES {}", network.edge_count());
    for e in network.edges() {
        let _ = writeln!(out, "{} {} {} {}", e.u, e.v, fmt_num(e.weight), e.street);
    }
    let _ = writeln!(out, "STREETS {}", network.streets().len());
    for s in network.streets() {
        let _ = writeln!(
            out,
            "{} {} {} {} {}",
            s.id, s.attributes.region, s.attributes.stype, s.attributes.zone, s.name
        );
    }
}

pub fn serialize_network(name: &str, network: &StreetNetwork) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "NAME: {name}");
    let _ = writeln!(out, "TYPE: {TYPE_NETWORK}");
    let _ = writeln!(out, "UNIT: {UNIT}");
    if let Some(depot) = network.depot() {
        let _ = writeln!(out, "DEPOT: {depot}");
    }
    write_network_sections(&mut out, network);
    out.push_str("EOF\n");
    out
}

pub fn serialize_instance(instance: &Instance) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "NAME: {}", instance.name);
    let _ = writeln!(out, "TYPE: {TYPE_INSTANCE}");
    let _ = writeln!(out, "UNIT: {UNIT}");
    let _ = writeln!(out, "VEHICLES: {}", instance.vehicles);
    let _ = writeln!(out, "DEPOT: {}", instance.depot);
    let uniform_limit = instance.max_route_lengths.as_ref().and_then(|l| {
        l.iter().all(|x| x.to_bits() == l[0].to_bits()).then_some(l[0])
    });
    let per_vehicle = instance.capacities.is_some()
        || (instance.max_route_lengths.is_some() && uniform_limit.is_none());
    if let (Some(limit), false) = (uniform_limit, per_vehicle) {
        let _ = writeln!(out, "MAX_ROUTE_LENGTH: {}", fmt_num(limit));
    }
    let _ = writeln!(
        out,
        "EMPTY_ROUTES: {}",
        if instance.forbid_empty_routes { "forbidden" } else { "allowed" }
    );
    if !instance.time_windows.is_empty() {
        let _ = writeln!(out, "TIME_WINDOW_POLICY: {NO_WAIT}");
    }
    if let Some(seed) = instance.seed {
        let _ = writeln!(out, "SEED: {seed}");
    }
    if let Some(version) = &instance.generator_version {
        let _ = writeln!(out, "GENERATOR_VERSION: {version}");
    }
    write_network_sections(&mut out, &instance.network);
    let _ = writeln!(out, "DELIVERIES {}", instance.customers.len());
    for c in &instance.customers {
        let _ = writeln!(out, "{} {}", c.vertex, c.demand);
    }
    if per_vehicle {
        let _ = writeln!(out, "VEHICLE_LIMITS {}", instance.vehicles);
        for v in 0..instance.vehicles {
            let cap = instance
                .capacity(v)
                .map_or_else(|| "-".to_string(), |c| c.to_string());
            let len = instance
                .max_route_length(v)
                .map_or_else(|| "-".to_string(), fmt_num);
            let _ = writeln!(out, "{v} {cap} {len}");
        }
    }
    if !instance.time_windows.is_empty() {
        let _ = writeln!(out, "TIME_WINDOWS {}", instance.time_windows.len());
        for (v, tw) in &instance.time_windows {
            let _ = writeln!(out, "{v} {} {}", fmt_num(tw.earliest), fmt_num(tw.latest));
        }
    }
    out.push_str("EOF\n");
    out
}

/// Everything a file can hold, before deciding what kind of file it is.
#[derive(Default)]
struct Raw {
    name: Option<String>,
    kind: Option<String>,
    vehicles: Option<usize>,
    depot: Option<(usize, usize)>,
    max_route_length: Option<f64>,
    empty_routes: Option<bool>,
    seed: Option<u64>,
    generator_version: Option<String>,
    network: StreetNetwork,
    /// Edge records, added once the streets are known.
    edges: Vec<(usize, usize, usize, f64, u32)>,
    deliveries: Option<Vec<(usize, Customer)>>,
    delivery_set: HashSet<usize>,
    limits: Option<Vec<(Option<u32>, Option<f64>)>>,
    windows: Option<Vec<(usize, usize, TimeWindow)>>,
    sections: Vec<&'static str>,
}

const SECTION_ORDER: [&str; 6] = [
    "VERTICES",
    "EDGES",
    "STREETS",
    "DELIVERIES",
    "VEHICLE_LIMITS",
    "TIME_WINDOWS",
];

fn num<T: std::str::FromStr>(line: usize, field: &str, what: &str) -> Result<T, ParseError> {
    field
        .parse()
        .map_err(|_| ParseError::new(line, format!("invalid {what} '{field}'")))
}

fn real(line: usize, field: &str, what: &str) -> Result<f64, ParseError> {
    let x: f64 = num(line, field, what)?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(ParseError::new(line, format!("non-finite {what} '{field}'")))
    }
}

fn fields<const N: usize>(line: usize, text: &str) -> Result<[&str; N], ParseError> {
    let parts: Vec<&str> = text.split(' ').collect();
    parts
        .try_into()
        .map_err(|_| ParseError::new(line, format!("expected {N} fields, got '{text}'")))
}

fn parse_raw(text: &str) -> Result<Raw, ParseError> {
    let mut raw = Raw::default();
    let lines: Vec<&str> = text.split('\n').collect();
    let mut i = 0;
    let mut saw_eof = false;
    while i < lines.len() {
        let line_no = i + 1;
        let line = lines[i];
        i += 1;
        if line == "EOF" {
            saw_eof = true;
            let rest = &lines[i..];
            if rest != [""] {
                let msg = if rest.is_empty() { "EOF must end with a newline" } else { "content after EOF" };
                return Err(ParseError::new(line_no, msg));
            }
            break;
        }
        if let Some((key, value)) = line.split_once(": ") {
            if !raw.sections.is_empty() {
                return Err(ParseError::new(line_no, format!("header '{key}' after sections")));
            }
            header(&mut raw, line_no, key, value)?;
            continue;
        }
        let (section, count) = line
            .split_once(' ')
            .ok_or_else(|| ParseError::new(line_no, format!("unexpected line '{line}'")))?;
        let Some(&section) = SECTION_ORDER.iter().find(|s| **s == section) else {
            return Err(ParseError::new(line_no, format!("unknown section '{section}'")));
        };
        let position = SECTION_ORDER.iter().position(|s| *s == section).expect("known");
        if let Some(last) = raw.sections.last() {
            let last_pos = SECTION_ORDER.iter().position(|s| s == last).expect("known");
            if position <= last_pos {
                return Err(ParseError::new(line_no, format!("section {section} out of order")));
            }
        }
        raw.sections.push(section);
        match section {
            "DELIVERIES" => drop(raw.deliveries.get_or_insert_with(Vec::new)),
            "VEHICLE_LIMITS" => drop(raw.limits.get_or_insert_with(Vec::new)),
            "TIME_WINDOWS" => drop(raw.windows.get_or_insert_with(Vec::new)),
            _ => {}
        }
        let count: usize = num(line_no, count, "section length")?;
        if i + count > lines.len() {
            return Err(ParseError::new(line_no, format!("section {section} is truncated")));
        }
        for k in 0..count {
            let body_no = i + k + 1;
            section_line(&mut raw, section, body_no, k, lines[i + k])?;
        }
        i += count;
    }
    if !saw_eof {
        return Err(ParseError::new(lines.len(), "missing EOF"));
    }
    for &(line, u, v, w, s) in &std::mem::take(&mut raw.edges) {
        raw.network
            .add_edge(u, v, w, s)
            .map_err(|e| ParseError::new(line, e.to_string()))?;
    }
    Ok(raw)
}

fn header(raw: &mut Raw, line: usize, key: &str, value: &str) -> Result<(), ParseError> {
    let dup = |set: bool| {
        if set {
            Err(ParseError::new(line, format!("duplicate header {key}")))
        } else {
            Ok(())
        }
    };
    match key {
        "NAME" => {
            dup(raw.name.is_some())?;
            raw.name = Some(value.to_string());
        }
        "TYPE" => {
            dup(raw.kind.is_some())?;
            if value != TYPE_INSTANCE && value != TYPE_NETWORK {
                return Err(ParseError::new(line, format!("unknown TYPE '{value}'")));
            }
            raw.kind = Some(value.to_string());
        }
        "UNIT" => {
            if value != UNIT {
                return Err(ParseError::new(line, format!("unsupported UNIT '{value}'")));
            }
        }
        "VEHICLES" => {
            dup(raw.vehicles.is_some())?;
            raw.vehicles = Some(num(line, value, "vehicle count")?);
        }
        "DEPOT" => {
            dup(raw.depot.is_some())?;
            raw.depot = Some((line, num(line, value, "depot id")?));
        }
        "MAX_ROUTE_LENGTH" => {
            dup(raw.max_route_length.is_some())?;
            raw.max_route_length = Some(real(line, value, "route length")?);
        }
        "EMPTY_ROUTES" => {
            dup(raw.empty_routes.is_some())?;
            raw.empty_routes = Some(match value {
                "forbidden" => true,
                "allowed" => false,
                _ => return Err(ParseError::new(line, format!("invalid EMPTY_ROUTES '{value}'"))),
            });
        }
        "TIME_WINDOW_POLICY" => {
            if value != NO_WAIT {
                return Err(ParseError::new(line, format!("unsupported time window policy '{value}'")));
            }
        }
        "SEED" => {
            dup(raw.seed.is_some())?;
            raw.seed = Some(num(line, value, "seed")?);
        }
        "GENERATOR_VERSION" => {
            dup(raw.generator_version.is_some())?;
            raw.generator_version = Some(value.to_string());
        }
        _ => return Err(ParseError::new(line, format!("unknown header '{key}'"))),
    }
    Ok(())
}

fn section_line(raw: &mut Raw, section: &str, line: usize, index: usize, text: &str) -> Result<(), ParseError> {
    match section {
        "VERTICES" => {
            let [id, x, y, kind] = fields(line, text)?;
            let id: usize = num(line, id, "vertex id")?;
            if id < raw.network.vertex_count() {
                return Err(ParseError::new(line, format!("duplicate vertex {id}")));
            }
            if id != index {
                return Err(ParseError::new(line, format!("vertex {id} out of sequence")));
            }
            let kind = VertexKind::parse(kind)
                .ok_or_else(|| ParseError::new(line, format!("unknown vertex kind '{kind}'")))?;
            let pos = Point::new(real(line, x, "coordinate")?, real(line, y, "coordinate")?);
            raw.network
                .add_vertex(pos, kind)
                .map_err(|e| ParseError::new(line, e.to_string()))?;
        }
        "EDGES" => {
            let [u, v, w, s] = fields(line, text)?;
            let u: usize = num(line, u, "vertex id")?;
            let v: usize = num(line, v, "vertex id")?;
            for end in [u, v] {
                if end >= raw.network.vertex_count() {
                    return Err(ParseError::new(line, format!("edge refers to unknown vertex {end}")));
                }
            }
            let w = real(line, w, "edge weight")?;
            let s: u32 = num(line, s, "street id")?;
            raw.edges.push((line, u, v, w, s));
        }
        "STREETS" => {
            let mut parts = text.splitn(5, ' ');
            let mut next = || {
                parts
                    .next()
                    .ok_or_else(|| ParseError::new(line, format!("expected 5 fields, got '{text}'")))
            };
            let id: u32 = num(line, next()?, "street id")?;
            let region = next()?.parse().map_err(|e: crate::error::DensityError| ParseError::new(line, e.to_string()))?;
            let stype = next()?.parse().map_err(|e: crate::error::DensityError| ParseError::new(line, e.to_string()))?;
            let zone = next()?.parse().map_err(|e: crate::error::DensityError| ParseError::new(line, e.to_string()))?;
            let name = next()?.to_string();
            raw.network
                .add_street(StreetInfo {
                    id,
                    name,
                    attributes: StreetAttributes::new(region, stype, zone),
                })
                .map_err(|e| ParseError::new(line, e.to_string()))?;
        }
        "DELIVERIES" => {
            let [v, d] = fields(line, text)?;
            let vertex: usize = num(line, v, "vertex id")?;
            let demand: u32 = num(line, d, "demand")?;
            match raw.network.vertices().get(vertex) {
                None => return Err(ParseError::new(line, format!("delivery at unknown vertex {vertex}"))),
                Some(v) if v.kind != VertexKind::Delivery => {
                    return Err(ParseError::new(line, format!("vertex {vertex} is not a delivery vertex")))
                }
                Some(_) => {}
            }
            if !raw.delivery_set.insert(vertex) {
                return Err(ParseError::new(line, format!("duplicate delivery {vertex}")));
            }
            raw.deliveries.get_or_insert_with(Vec::new).push((line, Customer { vertex, demand }));
        }
        "VEHICLE_LIMITS" => {
            let [v, cap, len] = fields(line, text)?;
            let v: usize = num(line, v, "vehicle index")?;
            if v != index {
                return Err(ParseError::new(line, format!("vehicle {v} out of sequence")));
            }
            let cap = if cap == "-" { None } else { Some(num(line, cap, "capacity")?) };
            let len = if len == "-" { None } else { Some(real(line, len, "route length")?) };
            raw.limits.get_or_insert_with(Vec::new).push((cap, len));
        }
        "TIME_WINDOWS" => {
            let [v, a, b] = fields(line, text)?;
            let v: usize = num(line, v, "vertex id")?;
            let tw = TimeWindow {
                earliest: real(line, a, "time")?,
                latest: real(line, b, "time")?,
            };
            raw.windows.get_or_insert_with(Vec::new).push((line, v, tw));
        }
        _ => unreachable!("section names are checked by the caller"),
    }
    Ok(())
}

fn check_depot(raw: &Raw) -> Result<(), ParseError> {
    match (raw.depot, raw.network.depot()) {
        (Some((_, d)), Some(v)) if d == v => Ok(()),
        (Some((line, d)), _) => Err(ParseError::new(
            line,
            format!("DEPOT {d} does not name the vertex of kind depot"),
        )),
        (None, Some(v)) => Err(ParseError::new(1, format!("vertex {v} is a depot but DEPOT is missing"))),
        (None, None) => Ok(()),
    }
}

/// Parses a network file; returns its name and the network.
pub fn parse_network(text: &str) -> Result<(String, StreetNetwork), ParseError> {
    let raw = parse_raw(text)?;
    if raw.kind.as_deref() != Some(TYPE_NETWORK) {
        return Err(ParseError::new(1, format!("expected TYPE: {TYPE_NETWORK}")));
    }
    if raw.vehicles.is_some() || raw.deliveries.is_some() || raw.limits.is_some() || raw.windows.is_some() {
        return Err(ParseError::new(1, "network files carry no fleet or deliveries"));
    }
    check_depot(&raw)?;
    Ok((raw.name.unwrap_or_default(), raw.network))
}

pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let raw = parse_raw(text)?;
    if raw.kind.as_deref() != Some(TYPE_INSTANCE) {
        return Err(ParseError::new(1, format!("expected TYPE: {TYPE_INSTANCE}")));
    }
    check_depot(&raw)?;
    let depot = raw
        .depot
        .map(|(_, d)| d)
        .ok_or_else(|| ParseError::new(1, "missing DEPOT"))?;
    let vehicles = raw.vehicles.ok_or_else(|| ParseError::new(1, "missing VEHICLES"))?;
    if vehicles == 0 {
        return Err(ParseError::new(1, "VEHICLES must be at least 1"));
    }
    let deliveries = raw
        .deliveries
        .ok_or_else(|| ParseError::new(1, "missing DELIVERIES section"))?;
    let mut capacities = None;
    let mut max_route_lengths = raw.max_route_length.map(|l| vec![l; vehicles]);
    if let Some(limits) = raw.limits {
        if limits.len() != vehicles {
            return Err(ParseError::new(1, format!("{} vehicle limits for {vehicles} vehicles", limits.len())));
        }
        if raw.max_route_length.is_some() {
            return Err(ParseError::new(1, "MAX_ROUTE_LENGTH conflicts with VEHICLE_LIMITS"));
        }
        let caps: Option<Vec<u32>> = limits.iter().map(|l| l.0).collect();
        let lens: Option<Vec<f64>> = limits.iter().map(|l| l.1).collect();
        if limits.iter().any(|l| l.0.is_some()) && caps.is_none() {
            return Err(ParseError::new(1, "capacities must be given for all vehicles or none"));
        }
        if limits.iter().any(|l| l.1.is_some()) && lens.is_none() {
            return Err(ParseError::new(1, "route lengths must be given for all vehicles or none"));
        }
        capacities = caps;
        max_route_lengths = lens;
    }
    let customers: Vec<Customer> = deliveries.iter().map(|(_, c)| *c).collect();
    let mut time_windows = BTreeMap::new();
    for (line, v, tw) in raw.windows.unwrap_or_default() {
        if !raw.delivery_set.contains(&v) {
            return Err(ParseError::new(line, format!("time window for non-customer {v}")));
        }
        if time_windows.insert(v, tw).is_some() {
            return Err(ParseError::new(line, format!("duplicate time window for {v}")));
        }
    }
    let instance = Instance {
        name: raw.name.unwrap_or_default(),
        network: raw.network,
        depot,
        customers,
        vehicles,
        capacities,
        max_route_lengths,
        time_windows,
        forbid_empty_routes: raw.empty_routes.unwrap_or(true),
        seed: raw.seed,
        generator_version: raw.generator_version,
    };
    instance
        .validate()
        .map_err(|e| ParseError::new(1, e.to_string()))?;
    Ok(instance)
}
