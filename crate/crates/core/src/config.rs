//! Size bounds guarding the exponential enumerations.

use serde::Deserialize;

/// Bounds for the enumerations; every field may be overridden.
#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Bounds {
    /// Largest poset whose closed sets are enumerated.
    pub closed_sets: usize,
    /// Largest poset searched for automorphisms.
    pub automorphisms: usize,
    /// Most nodes allowed in one period of a diagram tail when enumerating ideals.
    pub ideal_period_nodes: usize,
    /// Most chains allowed in an order complex.
    pub homology_chains: usize,
    /// Default truncation depth for diagrams without a tail.
    pub truncation_depth: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            closed_sets: 20,
            automorphisms: 12,
            ideal_period_nodes: 16,
            homology_chains: 100_000,
            truncation_depth: 8,
        }
    }
}

impl Bounds {
    /// Checks that every bound is positive.
    pub fn validate(&self) -> Result<(), String> {
        let fields = [
            ("closed_sets", self.closed_sets),
            ("automorphisms", self.automorphisms),
            ("ideal_period_nodes", self.ideal_period_nodes),
            ("homology_chains", self.homology_chains),
            ("truncation_depth", self.truncation_depth),
        ];
        match fields.iter().find(|(_, v)| *v == 0) {
            Some((name, _)) => Err(format!("bound `{name}` must be positive")),
            None => Ok(()),
        }
    }
}
