//! Solution files.
//!
//! ```text
//! K: 3
//! ROUTE 1: 3 5 4 1 2
//! ROUTE 2:
//! ROUTE 3: 7 8 9 13
//! ```

use std::fmt::Write as _;

use crate::error::{ParseError, SolutionError};
use crate::network::VertexId;
use crate::solution::Solution;

/// Writes `solution` as `vehicles` route lines.
pub fn serialize_solution(solution: &Solution, vehicles: usize) -> Result<String, SolutionError> {
    let partition = solution.partition(vehicles)?;
    let mut out = String::new();
    let _ = writeln!(out, "K: {vehicles}");
    for (i, route) in partition.routes.iter().enumerate() {
        let _ = write!(out, "ROUTE {}:", i + 1);
        for c in route {
            let _ = write!(out, " {c}");
        }
        out.push('\n');
    }
    Ok(out)
}

/// Parses a solution file; returns the solution and its vehicle count.
pub fn parse_solution(text: &str) -> Result<(Solution, usize), ParseError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, first) = lines
        .next()
        .ok_or_else(|| ParseError::new(1, "empty solution file"))?;
    let k: usize = first
        .strip_prefix("K: ")
        .and_then(|v| v.trim().parse().ok())
        .ok_or_else(|| ParseError::new(1, format!("expected 'K: <vehicles>', got '{first}'")))?;
    if k == 0 {
        return Err(ParseError::new(1, "K must be at least 1"));
    }
    let mut routes: Vec<Vec<VertexId>> = Vec::with_capacity(k);
    for (line_no, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let expected = routes.len() + 1;
        let rest = line
            .strip_prefix("ROUTE ")
            .ok_or_else(|| ParseError::new(line_no, format!("expected 'ROUTE {expected}:', got '{line}'")))?;
        let (index, ids) = rest
            .split_once(':')
            .ok_or_else(|| ParseError::new(line_no, "missing ':' after route number"))?;
        if index.trim().parse::<usize>().ok() != Some(expected) {
            return Err(ParseError::new(line_no, format!("expected route {expected}, got '{index}'")));
        }
        if expected > k {
            return Err(ParseError::new(line_no, format!("more than K = {k} routes")));
        }
        let route = ids
            .split_whitespace()
            .map(|t| {
                t.parse::<VertexId>()
                    .map_err(|_| ParseError::new(line_no, format!("invalid customer id '{t}'")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        routes.push(route);
    }
    if routes.len() != k {
        return Err(ParseError::new(
            text.lines().count().max(1),
            format!("expected {k} routes, found {}", routes.len()),
        ));
    }
    Ok((Solution::from_routes(&routes), k))
}
