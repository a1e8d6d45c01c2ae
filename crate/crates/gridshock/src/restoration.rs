//! Resource-constrained repair scheduling after the storm.

use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{ComponentId, DamageState, FailureKind, Grid};
use crate::hazard::Tract;

/// Repair-team pool growing linearly for a fixed horizon.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default)]
pub struct ResourceProfile {
    pub initial_teams: u32,
    pub growth_per_hour: u32,
    pub growth_horizon_h: u32,
}

impl Default for ResourceProfile {
    fn default() -> Self {
        ResourceProfile {
            initial_teams: 800,
            growth_per_hour: 15,
            growth_horizon_h: 168,
        }
    }
}

/// Teams available at `t_h` hours after restoration start.
pub fn resource_level(t_h: u32, profile: &ResourceProfile) -> u32 {
    profile.initial_teams + profile.growth_per_hour * t_h.min(profile.growth_horizon_h)
}

/// Repair duration distribution and crew requirement for one failure class.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RepairClass {
    pub mean_h: f64,
    pub sd_h: f64,
    pub teams: u32,
}

/// Duration/crew parameters per failure class.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct RepairTable {
    pub substation_moderate: RepairClass,
    pub substation_severe: RepairClass,
    pub substation_complete: RepairClass,
    pub transmission_towers: RepairClass,
    pub transmission_line: RepairClass,
    pub pole: RepairClass,
    pub conductor: RepairClass,
}

impl Default for RepairTable {
    fn default() -> Self {
        let c = |mean_h, sd_h, teams| RepairClass { mean_h, sd_h, teams };
        RepairTable {
            substation_moderate: c(72.0, 36.0, 6),
            substation_severe: c(168.0, 84.0, 14),
            substation_complete: c(720.0, 360.0, 60),
            transmission_towers: c(72.0, 36.0, 6),
            transmission_line: c(48.0, 24.0, 4),
            pole: c(10.0, 5.0, 1),
            conductor: c(8.0, 4.0, 1),
        }
    }
}

impl RepairTable {
    pub fn class(&self, kind: FailureKind) -> RepairClass {
        match kind {
            FailureKind::SubstationModerate => self.substation_moderate,
            FailureKind::SubstationSevere => self.substation_severe,
            FailureKind::SubstationComplete => self.substation_complete,
            FailureKind::TransmissionTowers => self.transmission_towers,
            FailureKind::TransmissionLine => self.transmission_line,
            FailureKind::Pole => self.pole,
            FailureKind::Conductor => self.conductor,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    Component,
    Population,
    Svi,
}

impl std::str::FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Strategy> {
        match s {
            "component" => Ok(Strategy::Component),
            "population" => Ok(Strategy::Population),
            "svi" => Ok(Strategy::Svi),
            other => Err(Error::UnknownStrategy(other.to_string())),
        }
    }
}

impl Strategy {
    pub fn label(&self) -> &'static str {
        match self {
            Strategy::Component => "component",
            Strategy::Population => "population",
            Strategy::Svi => "svi",
        }
    }
}

fn tier_rank(kind: FailureKind) -> u8 {
    match kind {
        FailureKind::SubstationComplete => 0,
        FailureKind::SubstationSevere => 1,
        FailureKind::SubstationModerate => 2,
        _ => 3,
    }
}

/// Ordered list of dense component indices to repair.
///
/// Component strategy repairs substations by tier severity, then transmission,
/// then the distribution network in uniformly random order. Population and SVI
/// strategies repair the backbone the same way, then tracts in descending
/// population or SVI (ties by tract id), distribution within a tract in chain
/// order with each feeding conductor ahead of its pole.
pub fn plan_priorities(
    strategy: Strategy,
    grid: &Grid,
    damage: &DamageState,
    tracts: &[Tract],
    rng: &mut impl Rng,
) -> Vec<usize> {
    let mut substations = Vec::new();
    let mut transmission = Vec::new();
    let mut distribution = Vec::new();
    for (dense, failure) in damage.damaged() {
        match grid.component(dense) {
            ComponentId::Substation(_) => substations.push((dense, failure.kind)),
            ComponentId::Transmission(_) => transmission.push(dense),
            ComponentId::Pole(_) | ComponentId::Conductor(_) => distribution.push(dense),
            ComponentId::Generator(_) => {}
        }
    }
    substations.sort_by_key(|&(dense, kind)| (tier_rank(kind), dense));

    let mut order: Vec<usize> = substations.into_iter().map(|(d, _)| d).collect();
    order.extend(&transmission);

    match strategy {
        Strategy::Component => {
            distribution.shuffle(rng);
            order.extend(&distribution);
        }
        Strategy::Population | Strategy::Svi => {
            // tract sort key: descending weight, ties by tract id
            let weight = |t: usize| match strategy {
                Strategy::Population => tracts[t].population as f64,
                _ => tracts[t].svi,
            };
            let key = |dense: usize| {
                let (tract, chain, conductor_first) = match grid.component(dense) {
                    ComponentId::Pole(i) => (grid.poles[i].tract, grid.poles[i].chain_pos, 1),
                    ComponentId::Conductor(i) => {
                        let c = &grid.conductors[i];
                        (c.tract, grid.poles[c.pole].chain_pos, 0)
                    }
                    _ => unreachable!("distribution list holds poles and conductors"),
                };
                (tract, chain, conductor_first)
            };
            distribution.sort_by(|&a, &b| {
                let (ta, ca, fa) = key(a);
                let (tb, cb, fb) = key(b);
                weight(tb)
                    .partial_cmp(&weight(ta))
                    .unwrap()
                    .then(tracts[ta].id.cmp(&tracts[tb].id))
                    .then(ca.cmp(&cb))
                    .then(fa.cmp(&fb))
            });
            order.extend(&distribution);
        }
    }
    order
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RepairTask {
    pub component: ComponentId,
    pub kind: FailureKind,
    /// Hours after restoration start.
    pub start_h: u32,
    pub end_h: f64,
    pub teams: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RepairSchedule {
    pub tasks: Vec<RepairTask>,
}

impl RepairSchedule {
    /// Hours from restoration start until the last repair completes.
    pub fn makespan_h(&self) -> f64 {
        self.tasks.iter().fold(0.0, |m, t| m.max(t.end_h))
    }

    /// Repair end (hours after restoration start) per dense component index.
    pub fn completion_by_dense(&self, grid: &Grid) -> Vec<Option<f64>> {
        let mut out = vec![None; grid.component_count()];
        for t in &self.tasks {
            out[grid.index(t.component)] = Some(t.end_h);
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["component_id", "class", "start_h", "end_h", "teams"])?;
        for t in &self.tasks {
            w.write_record([
                t.component.to_string(),
                t.kind.label().to_string(),
                t.start_h.to_string(),
                format!("{:.3}", t.end_h),
                t.teams.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Greedy priority-list scheduling with hourly granularity. Each hour the
/// priority list is scanned in order and a task starts when enough teams are
/// free; teams stay occupied until the task's sampled duration elapses.
/// Durations are N(mean, sd) truncated at 0.5 h.
pub fn schedule_repairs(
    grid: &Grid,
    damage: &DamageState,
    priorities: &[usize],
    table: &RepairTable,
    profile: &ResourceProfile,
    rng: &mut impl Rng,
) -> Result<RepairSchedule> {
    let pool_cap = resource_level(profile.growth_horizon_h, profile);
    // sample durations up front in priority order so the draw sequence is
    // independent of scheduling dynamics
    let mut pending: Vec<(usize, FailureKind, u32, f64)> = Vec::with_capacity(priorities.len());
    for &dense in priorities {
        let failure = damage
            .failure(dense)
            .expect("priorities cover damaged components only");
        let class = table.class(failure.kind);
        if class.teams > pool_cap {
            return Err(Error::InfeasibleTask {
                component: grid.component(dense).to_string(),
                needed: class.teams as u64,
                cap: pool_cap as u64,
            });
        }
        let duration = Normal::new(class.mean_h, class.sd_h)
            .expect("positive sd")
            .sample(rng)
            .max(0.5);
        pending.push((dense, failure.kind, class.teams, duration));
    }

    let mut tasks = Vec::with_capacity(pending.len());
    let mut running: Vec<(f64, u32)> = Vec::new();
    let mut next = 0usize;
    let mut hour = 0u32;
    while next < pending.len() {
        running.retain(|&(end, _)| end > hour as f64);
        let in_use: u32 = running.iter().map(|&(_, t)| t).sum();
        let mut free = resource_level(hour, profile).saturating_sub(in_use);
        while next < pending.len() {
            let (dense, kind, teams, duration) = pending[next];
            if teams > free {
                break;
            }
            free -= teams;
            let end = hour as f64 + duration;
            running.push((end, teams));
            tasks.push(RepairTask {
                component: grid.component(dense),
                kind,
                start_h: hour,
                end_h: end,
                teams,
            });
            next += 1;
        }
        hour += 1;
    }
    Ok(RepairSchedule { tasks })
}
