//! Synthetic power network: topology, wind-induced damage, connectivity loss.

mod build;
mod connectivity;
mod damage;
mod fragility;

pub use build::{build_synthetic_grid, GridConfig};
pub use connectivity::{propagate_connectivity, propagate_with, EnergizationState, Topology};
pub use damage::{sample_damage, sample_damage_from, DamageMode, DamageState, Failure, FailureKind};
pub use fragility::{
    conductor_fragility, line_fragility, lognormal_fragility, transmission_element_fragility,
    FragilityParams, LognormalParams,
};

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BackboneNode {
    Generator(usize),
    Substation(usize),
}

/// Upstream end of a conductor: the tract's substation or the previous pole
/// in the chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DistributionNode {
    Substation(usize),
    Pole(usize),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Generator {
    pub x_km: f64,
    pub y_km: f64,
    pub tract: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Substation {
    pub x_km: f64,
    pub y_km: f64,
    pub tract: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TransmissionElement {
    pub from: BackboneNode,
    pub to: BackboneNode,
    pub length_km: f64,
    pub n_towers: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Pole {
    pub tract: usize,
    /// Position in the tract's chain, 0 = adjacent to the substation.
    pub chain_pos: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Conductor {
    pub tract: usize,
    pub upstream: DistributionNode,
    pub pole: usize,
}

/// One damageable component, addressed by class and per-class index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ComponentId {
    Generator(usize),
    Substation(usize),
    Transmission(usize),
    Pole(usize),
    Conductor(usize),
}

impl std::fmt::Display for ComponentId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ComponentId::Generator(i) => write!(f, "G{i}"),
            ComponentId::Substation(i) => write!(f, "S{i}"),
            ComponentId::Transmission(i) => write!(f, "T{i}"),
            ComponentId::Pole(i) => write!(f, "P{i}"),
            ComponentId::Conductor(i) => write!(f, "C{i}"),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Grid {
    pub generators: Vec<Generator>,
    pub substations: Vec<Substation>,
    pub transmission: Vec<TransmissionElement>,
    pub poles: Vec<Pole>,
    pub conductors: Vec<Conductor>,
    pub customer_per_pole: u32,
    /// Number of tracts the grid was built over.
    pub n_tracts: usize,
    /// Substation feeding each tract's distribution chain.
    pub tract_substation: Vec<usize>,
}

impl Grid {
    /// Total damageable components (generators included for indexing, though
    /// they never fail).
    pub fn component_count(&self) -> usize {
        self.generators.len()
            + self.substations.len()
            + self.transmission.len()
            + self.poles.len()
            + self.conductors.len()
    }

    /// Dense index of a component, stable across runs.
    pub fn index(&self, id: ComponentId) -> usize {
        let g = self.generators.len();
        let s = self.substations.len();
        let t = self.transmission.len();
        let p = self.poles.len();
        match id {
            ComponentId::Generator(i) => i,
            ComponentId::Substation(i) => g + i,
            ComponentId::Transmission(i) => g + s + i,
            ComponentId::Pole(i) => g + s + t + i,
            ComponentId::Conductor(i) => g + s + t + p + i,
        }
    }

    pub fn component(&self, dense: usize) -> ComponentId {
        let g = self.generators.len();
        let s = self.substations.len();
        let t = self.transmission.len();
        let p = self.poles.len();
        if dense < g {
            ComponentId::Generator(dense)
        } else if dense < g + s {
            ComponentId::Substation(dense - g)
        } else if dense < g + s + t {
            ComponentId::Transmission(dense - g - s)
        } else if dense < g + s + t + p {
            ComponentId::Pole(dense - g - s - t)
        } else {
            ComponentId::Conductor(dense - g - s - t - p)
        }
    }

    /// Headline distribution-element count (poles, one per ~customer block).
    pub fn distribution_element_count(&self) -> usize {
        self.poles.len()
    }

    /// Poles belonging to one tract, in chain order.
    pub fn tract_poles(&self, tract: usize) -> Vec<usize> {
        let mut poles: Vec<usize> = (0..self.poles.len())
            .filter(|&i| self.poles[i].tract == tract)
            .collect();
        poles.sort_by_key(|&i| self.poles[i].chain_pos);
        poles
    }

    /// Conductor whose downstream end is `pole`.
    pub fn conductor_into_pole(&self, pole: usize) -> Option<usize> {
        self.conductors.iter().position(|c| c.pole == pole)
    }

    /// Tract indices a transmission element is exposed to (both endpoints).
    pub fn transmission_tracts(&self, idx: usize) -> (usize, usize) {
        let end_tract = |n: BackboneNode| match n {
            BackboneNode::Generator(i) => self.generators[i].tract,
            BackboneNode::Substation(i) => self.substations[i].tract,
        };
        let e = &self.transmission[idx];
        (end_tract(e.from), end_tract(e.to))
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path)?;
        serde_json::to_writer_pretty(std::io::BufWriter::new(file), self)?;
        Ok(())
    }

    pub fn load_json(path: &Path) -> Result<Grid> {
        let file = std::fs::File::open(path)?;
        Ok(serde_json::from_reader(std::io::BufReader::new(file))?)
    }
}
