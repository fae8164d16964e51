//! Solutions as customer permutations with depot separators.
//!
//! A solution for `n` customers and `k` vehicles is a sequence of `n + k - 1`
//! tokens: every customer once and the depot separator `k - 1` times.
//! Splitting at the separators yields the `k` routes, each of which
//! implicitly starts and ends at the depot.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use crate::error::SolutionError;
use crate::network::VertexId;

/// One position of a solution sequence.
///
/// Customers order before the separator; brute-force tie-breaking relies on
/// this ordering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Token {
    Customer(VertexId),
    Depot,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Customer(v) => write!(f, "{v}"),
            Token::Depot => f.write_str("π"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Solution {
    tokens: Vec<Token>,
}

/// The routes of a solution, in sequence order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RoutePartition {
    pub routes: Vec<Vec<VertexId>>,
}

impl Solution {
    pub fn new(tokens: Vec<Token>) -> Self {
        Solution { tokens }
    }

    /// Joins routes with depot separators.
    pub fn from_routes<R: AsRef<[VertexId]>>(routes: &[R]) -> Self {
        let mut tokens = Vec::new();
        for (i, route) in routes.iter().enumerate() {
            if i > 0 {
                tokens.push(Token::Depot);
            }
            tokens.extend(route.as_ref().iter().map(|&c| Token::Customer(c)));
        }
        Solution { tokens }
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn separator_count(&self) -> usize {
        self.tokens.iter().filter(|t| **t == Token::Depot).count()
    }

    /// Splits at every separator into exactly `vehicles` routes.
    ///
    /// Fails on a wrong separator count or a repeated customer.
    pub fn partition(&self, vehicles: usize) -> Result<RoutePartition, SolutionError> {
        if vehicles == 0 {
            return Err(SolutionError::NoVehicles);
        }
        let found = self.separator_count();
        if found != vehicles - 1 {
            return Err(SolutionError::SeparatorCount {
                expected: vehicles - 1,
                found,
            });
        }
        let mut seen = HashSet::new();
        let mut duplicated = BTreeSet::new();
        let mut routes = vec![Vec::new()];
        for t in &self.tokens {
            match *t {
                Token::Depot => routes.push(Vec::new()),
                Token::Customer(c) => {
                    if !seen.insert(c) {
                        duplicated.insert(c);
                    }
                    routes.last_mut().expect("at least one route").push(c);
                }
            }
        }
        if !duplicated.is_empty() {
            return Err(SolutionError::Duplicated(duplicated.into_iter().collect()));
        }
        Ok(RoutePartition { routes })
    }

    /// Full structural check against the customer set of an instance.
    pub fn validate(&self, customers: &[VertexId], vehicles: usize) -> Result<RoutePartition, SolutionError> {
        let partition = self.partition(vehicles)?;
        partition.validate(customers, vehicles)?;
        Ok(partition)
    }
}

impl fmt::Display for Solution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, t) in self.tokens.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{t}")?;
        }
        f.write_str(")")
    }
}

impl RoutePartition {
    pub fn concatenate(&self) -> Solution {
        Solution::from_routes(&self.routes)
    }

    pub fn vehicle_count(&self) -> usize {
        self.routes.len()
    }

    /// Every customer exactly once, nothing else, `vehicles` routes.
    pub fn validate(&self, customers: &[VertexId], vehicles: usize) -> Result<(), SolutionError> {
        if self.routes.len() != vehicles {
            return Err(SolutionError::RouteCount {
                expected: vehicles,
                found: self.routes.len(),
            });
        }
        let expected: HashSet<VertexId> = customers.iter().copied().collect();
        let mut seen = HashSet::new();
        let mut duplicated = BTreeSet::new();
        let mut unknown = BTreeSet::new();
        for &c in self.routes.iter().flatten() {
            if !expected.contains(&c) {
                unknown.insert(c);
            } else if !seen.insert(c) {
                duplicated.insert(c);
            }
        }
        if !unknown.is_empty() {
            return Err(SolutionError::Unknown(unknown.into_iter().collect()));
        }
        if !duplicated.is_empty() {
            return Err(SolutionError::Duplicated(duplicated.into_iter().collect()));
        }
        let missing: Vec<VertexId> = customers
            .iter()
            .copied()
            .filter(|c| !seen.contains(c))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        if !missing.is_empty() {
            return Err(SolutionError::Missing(missing));
        }
        Ok(())
    }
}

/// Rearranges `tokens` into the next lexicographic permutation; returns
/// `false` (and leaves the slice sorted ascending) after the last one.
pub fn next_permutation<T: Ord>(tokens: &mut [T]) -> bool {
    let n = tokens.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && tokens[i - 1] >= tokens[i] {
        i -= 1;
    }
    if i == 0 {
        tokens.reverse();
        return false;
    }
    let mut j = n - 1;
    while tokens[j] <= tokens[i - 1] {
        j -= 1;
    }
    tokens.swap(i - 1, j);
    tokens[i..].reverse();
    true
}
