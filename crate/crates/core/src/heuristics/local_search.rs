use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;
use std::time::Instant;

use crate::error::{EvalError, SolverError};
use crate::evaluate::{Cost, Evaluator, Objective, RouteMetrics};
use crate::heuristics::SolverConfig;
use crate::instance::Instance;
use crate::network::VertexId;
use crate::solution::Solution;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MoveKind {
    Start,
    TwoOpt,
    Relocate,
    Swap,
}

impl fmt::Display for MoveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MoveKind::Start => "start",
            MoveKind::TwoOpt => "2opt",
            MoveKind::Relocate => "relocate",
            MoveKind::Swap => "swap",
        })
    }
}

/// One accepted improvement (or the starting point, at iteration 0).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceEntry {
    pub iteration: usize,
    pub kind: MoveKind,
    pub cost: Cost,
}

impl fmt::Display for TraceEntry {
    /// `key=value` progress line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "iteration={} move={} ", self.iteration, self.kind)?;
        match self.cost {
            Cost::Infinite => write!(f, "objective=inf"),
            Cost::Finite {
                primary,
                secondary: None,
            } => write!(f, "objective={primary}"),
            Cost::Finite {
                primary,
                secondary: Some(s),
            } => write!(f, "objective={primary} secondary={s}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    pub solution: Solution,
    pub cost: Cost,
    /// Costs of the start and of every accepted move, strictly decreasing.
    pub trace: Vec<TraceEntry>,
}

/// First-improvement descent over intra-route 2-opt, inter-route relocate
/// and inter-route swap, scanned in that order, until a full pass finds
/// nothing or the budget runs out.
pub fn local_search_improve<F>(
    instance: &Instance,
    start: &Solution,
    config: &SolverConfig,
    mut observer: F,
) -> Result<SearchOutcome, SolverError>
where
    F: FnMut(&TraceEntry),
{
    config.validate()?;
    let evaluator = Evaluator::new(instance);
    let report = evaluator.evaluate(start, config.objective)?;
    if !report.feasible() {
        return Err(SolverError::InfeasibleStart);
    }
    let partition = start
        .partition(instance.vehicles)
        .map_err(EvalError::from)?;
    let mut search = Search::new(&evaluator, config, partition.routes, report.routes, report.cost)?;
    let first = TraceEntry {
        iteration: 0,
        kind: MoveKind::Start,
        cost: search.cost,
    };
    observer(&first);
    search.trace.push(first);
    search.run(&mut observer)?;

    let solution = Solution::from_routes(&search.routes);
    let final_report = evaluator.evaluate(&solution, config.objective)?;
    debug_assert_eq!(final_report.cost, search.cost);
    Ok(SearchOutcome {
        solution,
        cost: final_report.cost,
        trace: search.trace,
    })
}

struct Search<'e, 'a> {
    evaluator: &'e Evaluator<'a>,
    objective: Objective,
    depot: VertexId,
    forbid_empty: bool,
    routes: Vec<Vec<VertexId>>,
    lengths: Vec<f64>,
    cost: Cost,
    rows: HashMap<VertexId, Arc<[f64]>>,
    /// Customer to (route, position).
    location: HashMap<VertexId, (usize, usize)>,
    neighbors: Vec<(VertexId, Vec<VertexId>)>,
    trace: Vec<TraceEntry>,
    max_iterations: usize,
    deadline: Option<Instant>,
    checks: usize,
}

impl<'e, 'a> Search<'e, 'a> {
    fn new(
        evaluator: &'e Evaluator<'a>,
        config: &SolverConfig,
        routes: Vec<Vec<VertexId>>,
        metrics: Vec<RouteMetrics>,
        cost: Cost,
    ) -> Result<Self, SolverError> {
        let instance = evaluator.instance();
        let mut rows = HashMap::new();
        let mut terminals = vec![instance.depot];
        terminals.extend(instance.customers.iter().map(|c| c.vertex));
        for &t in &terminals {
            rows.insert(t, evaluator.oracle().distances_from(t).map_err(EvalError::from)?);
        }
        let mut customers = instance.customer_vertices();
        customers.sort_unstable();
        let neighbors = customers
            .iter()
            .map(|&c| {
                let row = &rows[&c];
                let mut others: Vec<VertexId> = customers.iter().copied().filter(|&o| o != c).collect();
                let key = |o: &VertexId| (row[*o], *o);
                let keep = config.neighbors.min(others.len());
                if keep < others.len() {
                    others.select_nth_unstable_by(keep, |a, b| {
                        key(a).0.total_cmp(&key(b).0).then(a.cmp(b))
                    });
                    others.truncate(keep);
                }
                others.sort_by(|a, b| key(a).0.total_cmp(&key(b).0).then(a.cmp(b)));
                (c, others)
            })
            .collect();
        let mut search = Search {
            evaluator,
            objective: config.objective,
            depot: instance.depot,
            forbid_empty: instance.forbid_empty_routes,
            lengths: metrics.iter().map(|m| m.length).collect(),
            routes,
            cost,
            rows,
            location: HashMap::new(),
            neighbors,
            trace: Vec::new(),
            max_iterations: config.max_iterations,
            deadline: config.time_budget.map(|b| Instant::now() + b),
            checks: 0,
        };
        for r in 0..search.routes.len() {
            search.relocate_index(r);
        }
        Ok(search)
    }

    fn d(&self, a: VertexId, b: VertexId) -> f64 {
        self.rows[&a][b]
    }

    fn relocate_index(&mut self, r: usize) {
        for (i, &c) in self.routes[r].iter().enumerate() {
            self.location.insert(c, (r, i));
        }
    }

    fn iterations(&self) -> usize {
        self.trace.len().saturating_sub(1)
    }

    fn exhausted(&mut self) -> bool {
        if self.iterations() >= self.max_iterations {
            return true;
        }
        self.checks += 1;
        if self.checks.is_multiple_of(256) {
            if let Some(deadline) = self.deadline {
                return Instant::now() >= deadline;
            }
        }
        false
    }

    fn run<F: FnMut(&TraceEntry)>(&mut self, observer: &mut F) -> Result<(), SolverError> {
        loop {
            let mut improved = false;
            improved |= self.two_opt_pass(observer)?;
            improved |= self.relocate_pass(observer)?;
            improved |= self.swap_pass(observer)?;
            if !improved || self.exhausted() {
                return Ok(());
            }
        }
    }

    /// Cheap screen from estimated lengths of the changed routes.
    fn promising(&self, changes: &[(usize, f64)]) -> bool {
        let mut lengths = self.lengths.clone();
        for &(r, l) in changes {
            lengths[r] = l;
        }
        self.objective.score(&lengths) < self.cost
    }

    /// Exact check of a candidate; applies it when strictly better.
    fn try_apply<F: FnMut(&TraceEntry)>(
        &mut self,
        kind: MoveKind,
        changes: Vec<(usize, Vec<VertexId>)>,
        observer: &mut F,
    ) -> Result<bool, SolverError> {
        let mut lengths = self.lengths.clone();
        for (r, route) in &changes {
            let m = self.evaluator.measure(*r, route)?;
            if m.flags.any() {
                return Ok(false);
            }
            lengths[*r] = m.length;
        }
        let cost = self.objective.score(&lengths);
        if cost >= self.cost {
            return Ok(false);
        }
        for (r, route) in changes {
            self.routes[r] = route;
            self.relocate_index(r);
        }
        self.lengths = lengths;
        self.cost = cost;
        let entry = TraceEntry {
            iteration: self.iterations() + 1,
            kind,
            cost,
        };
        observer(&entry);
        self.trace.push(entry);
        Ok(true)
    }

    fn before(&self, r: usize, i: usize) -> VertexId {
        if i == 0 {
            self.depot
        } else {
            self.routes[r][i - 1]
        }
    }

    fn after(&self, r: usize, i: usize) -> VertexId {
        self.routes[r].get(i + 1).copied().unwrap_or(self.depot)
    }

    fn two_opt_pass<F: FnMut(&TraceEntry)>(&mut self, observer: &mut F) -> Result<bool, SolverError> {
        let mut improved = false;
        for r in 0..self.routes.len() {
            let m = self.routes[r].len();
            if m < 2 {
                continue;
            }
            // Stops are indexed 0..=m+1 with the depot at both ends; the
            // move reverses stops i+1..=j.
            let stop = |s: &Self, x: usize| {
                if x == 0 || x == m + 1 {
                    s.depot
                } else {
                    s.routes[r][x - 1]
                }
            };
            for i in 0..m - 1 {
                for j in (i + 2)..=m {
                    if self.exhausted() {
                        return Ok(improved);
                    }
                    let (a, b) = (stop(self, i), stop(self, i + 1));
                    let (c, e) = (stop(self, j), stop(self, j + 1));
                    let delta = self.d(a, c) + self.d(b, e) - self.d(a, b) - self.d(c, e);
                    if self.objective != Objective::FairnessVariance && delta >= 0.0 {
                        continue;
                    }
                    if !self.promising(&[(r, self.lengths[r] + delta)]) {
                        continue;
                    }
                    let mut route = self.routes[r].clone();
                    route[i..j].reverse();
                    if self.try_apply(MoveKind::TwoOpt, vec![(r, route)], observer)? {
                        improved = true;
                    }
                }
            }
        }
        Ok(improved)
    }

    fn relocate_pass<F: FnMut(&TraceEntry)>(&mut self, observer: &mut F) -> Result<bool, SolverError> {
        let mut improved = false;
        for idx in 0..self.neighbors.len() {
            let c = self.neighbors[idx].0;
            let mut targets: Vec<(usize, usize)> = Vec::new();
            for &nb in &self.neighbors[idx].1 {
                let (rb, ib) = self.location[&nb];
                targets.push((rb, ib));
                targets.push((rb, ib + 1));
            }
            for (rb, route) in self.routes.iter().enumerate() {
                if route.is_empty() {
                    targets.push((rb, 0));
                }
            }
            for (rb, q) in targets {
                if self.exhausted() {
                    return Ok(improved);
                }
                let (ra, ia) = self.location[&c];
                if ra == rb || q > self.routes[rb].len() {
                    continue;
                }
                if self.forbid_empty && self.routes[ra].len() == 1 {
                    continue;
                }
                let (p, n) = (self.before(ra, ia), self.after(ra, ia));
                let da = self.d(p, n) - self.d(p, c) - self.d(c, n);
                let x = self.before(rb, q);
                let y = self.routes[rb].get(q).copied().unwrap_or(self.depot);
                let db = self.d(x, c) + self.d(c, y) - self.d(x, y);
                if !self.promising(&[(ra, self.lengths[ra] + da), (rb, self.lengths[rb] + db)]) {
                    continue;
                }
                let mut from = self.routes[ra].clone();
                from.remove(ia);
                let mut to = self.routes[rb].clone();
                to.insert(q, c);
                if self.try_apply(MoveKind::Relocate, vec![(ra, from), (rb, to)], observer)? {
                    improved = true;
                }
            }
        }
        Ok(improved)
    }

    fn swap_pass<F: FnMut(&TraceEntry)>(&mut self, observer: &mut F) -> Result<bool, SolverError> {
        let mut improved = false;
        for idx in 0..self.neighbors.len() {
            let c = self.neighbors[idx].0;
            for k in 0..self.neighbors[idx].1.len() {
                if self.exhausted() {
                    return Ok(improved);
                }
                let nb = self.neighbors[idx].1[k];
                let (ra, ia) = self.location[&c];
                let (rb, ib) = self.location[&nb];
                if ra == rb {
                    continue;
                }
                let (pa, na) = (self.before(ra, ia), self.after(ra, ia));
                let (pb, nbb) = (self.before(rb, ib), self.after(rb, ib));
                let da = self.d(pa, nb) + self.d(nb, na) - self.d(pa, c) - self.d(c, na);
                let db = self.d(pb, c) + self.d(c, nbb) - self.d(pb, nb) - self.d(nb, nbb);
                if !self.promising(&[(ra, self.lengths[ra] + da), (rb, self.lengths[rb] + db)]) {
                    continue;
                }
                let mut first = self.routes[ra].clone();
                first[ia] = nb;
                let mut second = self.routes[rb].clone();
                second[ib] = c;
                if self.try_apply(MoveKind::Swap, vec![(ra, first), (rb, second)], observer)? {
                    improved = true;
                }
            }
        }
        Ok(improved)
    }
}
