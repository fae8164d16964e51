//! A benchmark instance: street network, depot, customers, fleet and the
//! optional constraint parameters.

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::network::{StreetNetwork, VertexId, VertexKind};

/// Version string recorded in generated files.
pub const GENERATOR_VERSION: &str = concat!("vrpbench-", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Customer {
    pub vertex: VertexId,
    pub demand: u32,
}

/// Arrival interval at a customer, in the instance unit (travel at one
/// meter per time unit, departure at time zero, no waiting, no service
/// time).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeWindow {
    pub earliest: f64,
    pub latest: f64,
}

impl TimeWindow {
    pub fn contains(&self, arrival: f64) -> bool {
        arrival >= self.earliest && arrival <= self.latest
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub name: String,
    pub network: StreetNetwork,
    pub depot: VertexId,
    pub customers: Vec<Customer>,
    pub vehicles: usize,
    /// Per-vehicle capacity `c(v)`; `None` means uncapacitated.
    pub capacities: Option<Vec<u32>>,
    /// Per-vehicle route length cap; `None` means unlimited.
    pub max_route_lengths: Option<Vec<f64>>,
    pub time_windows: BTreeMap<VertexId, TimeWindow>,
    pub forbid_empty_routes: bool,
    pub seed: Option<u64>,
    pub generator_version: Option<String>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("invalid instance: {0}")]
pub struct InstanceError(pub String);

impl Instance {
    /// A plain instance: unit settings, no optional constraints except the
    /// ban on empty routes.
    pub fn new(
        name: impl Into<String>,
        network: StreetNetwork,
        customers: Vec<Customer>,
        vehicles: usize,
    ) -> Result<Self, InstanceError> {
        let depot = network
            .depot()
            .ok_or_else(|| InstanceError("network has no depot".into()))?;
        let instance = Instance {
            name: name.into(),
            network,
            depot,
            customers,
            vehicles,
            capacities: None,
            max_route_lengths: None,
            time_windows: BTreeMap::new(),
            forbid_empty_routes: true,
            seed: None,
            generator_version: None,
        };
        instance.validate()?;
        Ok(instance)
    }

    pub fn customer_count(&self) -> usize {
        self.customers.len()
    }

    pub fn customer_vertices(&self) -> Vec<VertexId> {
        self.customers.iter().map(|c| c.vertex).collect()
    }

    pub fn demand_map(&self) -> HashMap<VertexId, u32> {
        self.customers.iter().map(|c| (c.vertex, c.demand)).collect()
    }

    pub fn capacity(&self, vehicle: usize) -> Option<u32> {
        self.capacities.as_ref().map(|c| c[vehicle])
    }

    pub fn max_route_length(&self, vehicle: usize) -> Option<f64> {
        self.max_route_lengths.as_ref().map(|l| l[vehicle])
    }

    /// Checks every cross-reference and parameter range.
    pub fn validate(&self) -> Result<(), InstanceError> {
        let err = |msg: String| Err(InstanceError(msg));
        if self.vehicles == 0 {
            return err("vehicle count must be at least 1".into());
        }
        if self.network.depot() != Some(self.depot) {
            return err(format!("depot {} is not the network's depot vertex", self.depot));
        }
        let mut seen = HashSet::new();
        for c in &self.customers {
            match self.network.vertex(c.vertex) {
                Err(_) => return err(format!("customer {} is not a vertex", c.vertex)),
                Ok(v) if v.kind != VertexKind::Delivery => {
                    return err(format!("customer {} is not a delivery vertex", c.vertex))
                }
                Ok(_) => {}
            }
            if !seen.insert(c.vertex) {
                return err(format!("customer {} listed twice", c.vertex));
            }
        }
        if let Some(caps) = &self.capacities {
            if caps.len() != self.vehicles {
                return err(format!("{} capacities for {} vehicles", caps.len(), self.vehicles));
            }
        }
        if let Some(limits) = &self.max_route_lengths {
            if limits.len() != self.vehicles {
                return err(format!(
                    "{} route length limits for {} vehicles",
                    limits.len(),
                    self.vehicles
                ));
            }
            if let Some(bad) = limits.iter().find(|&&l| !(l > 0.0)) {
                return err(format!("route length limit {bad} must be positive"));
            }
        }
        for (&v, tw) in &self.time_windows {
            if !seen.contains(&v) {
                return err(format!("time window for non-customer {v}"));
            }
            if !(tw.earliest <= tw.latest) {
                return err(format!("time window of {v} has earliest after latest"));
            }
        }
        Ok(())
    }

    /// Rounds every stored real number to file precision.
    pub fn canonicalize(&mut self) {
        use crate::format::round_sig;
        self.network.canonicalize();
        if let Some(limits) = &mut self.max_route_lengths {
            for l in limits {
                *l = round_sig(*l);
            }
        }
        for tw in self.time_windows.values_mut() {
            tw.earliest = round_sig(tw.earliest);
            tw.latest = round_sig(tw.latest);
        }
    }
}
