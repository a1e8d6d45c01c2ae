//! Wind damage sampling against the fragility curves.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::fragility::{
    conductor_fragility_with, line_fragility, lognormal_fragility, transmission_element_fragility,
    FragilityParams,
};
use super::{ComponentId, Grid};
use crate::error::{Error, Result};
use crate::hazard::WindField;

/// Failure class, which also selects the repair table row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FailureKind {
    SubstationModerate,
    SubstationSevere,
    SubstationComplete,
    TransmissionTowers,
    TransmissionLine,
    Pole,
    Conductor,
}

impl FailureKind {
    pub fn label(&self) -> &'static str {
        match self {
            FailureKind::SubstationModerate => "substation_moderate",
            FailureKind::SubstationSevere => "substation_severe",
            FailureKind::SubstationComplete => "substation_complete",
            FailureKind::TransmissionTowers => "transmission_towers",
            FailureKind::TransmissionLine => "transmission_line",
            FailureKind::Pole => "pole",
            FailureKind::Conductor => "conductor",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub kind: FailureKind,
    pub fail_time_h: usize,
}

/// Sampled failure status of every component for one replication.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DamageState {
    failures: Vec<Option<Failure>>,
}

impl DamageState {
    pub fn intact(n_components: usize) -> Self {
        DamageState {
            failures: vec![None; n_components],
        }
    }

    pub fn fail(&mut self, dense: usize, kind: FailureKind, fail_time_h: usize) {
        // a component fails at most once per replication
        if self.failures[dense].is_none() {
            self.failures[dense] = Some(Failure { kind, fail_time_h });
        }
    }

    pub fn is_failed(&self, dense: usize) -> bool {
        self.failures[dense].is_some()
    }

    pub fn failure(&self, dense: usize) -> Option<&Failure> {
        self.failures[dense].as_ref()
    }

    pub fn n_failed(&self) -> usize {
        self.failures.iter().filter(|f| f.is_some()).count()
    }

    pub fn damaged(&self) -> impl Iterator<Item = (usize, &Failure)> {
        self.failures
            .iter()
            .enumerate()
            .filter_map(|(i, f)| f.as_ref().map(|f| (i, f)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DamageMode {
    /// One draw per component against fragility at its peak wind (default).
    PeakWind,
    /// Hourly loop applying the fragility of each hour's wind to survivors.
    PerHour,
}

impl Default for DamageMode {
    fn default() -> Self {
        DamageMode::PeakWind
    }
}

fn substation_tier(
    w: f64,
    params: &FragilityParams,
    r: f64,
) -> Result<Option<FailureKind>> {
    let p_mod = lognormal_fragility(w, params.substation_moderate.mu, params.substation_moderate.sigma)?;
    let p_sev = lognormal_fragility(w, params.substation_severe.mu, params.substation_severe.sigma)?;
    let p_com = lognormal_fragility(w, params.substation_complete.mu, params.substation_complete.sigma)?;
    // nested tiers from a single draw: deepest tier whose probability exceeds r
    Ok(if r < p_com {
        Some(FailureKind::SubstationComplete)
    } else if r < p_sev {
        Some(FailureKind::SubstationSevere)
    } else if r < p_mod {
        Some(FailureKind::SubstationModerate)
    } else {
        None
    })
}

/// Damage sampling with an explicit uniform source, used by tests to force
/// draws. `draw` must return values in [0, 1).
pub fn sample_damage_from(
    grid: &Grid,
    field: &WindField,
    params: &FragilityParams,
    mode: DamageMode,
    draw: &mut dyn FnMut() -> f64,
) -> Result<DamageState> {
    if field.n_tracts() != grid.n_tracts {
        return Err(Error::TractMismatch {
            field: field.n_tracts(),
            grid: grid.n_tracts,
        });
    }
    params.validate()?;
    let mut state = DamageState::intact(grid.component_count());

    let tract_wind = |tract: usize, hour: usize| field.speeds[tract][hour];
    let transmission_wind = |idx: usize, hour: usize| {
        let (a, b) = grid.transmission_tracts(idx);
        tract_wind(a, hour).max(tract_wind(b, hour))
    };

    match mode {
        DamageMode::PeakWind => {
            for (i, s) in grid.substations.iter().enumerate() {
                let (w, hour) = field.peak_wind_idx(s.tract);
                let r = draw();
                if let Some(kind) = substation_tier(w, params, r)? {
                    state.fail(grid.index(ComponentId::Substation(i)), kind, hour);
                }
            }
            for (i, e) in grid.transmission.iter().enumerate() {
                let mut peak = (0.0_f64, 0_usize);
                for hour in 0..field.duration_h {
                    let w = transmission_wind(i, hour);
                    if w > peak.0 {
                        peak = (w, hour);
                    }
                }
                let p_towers = transmission_element_fragility(peak.0, e.n_towers, params.tower)?;
                let p_line =
                    line_fragility(peak.0, params.line_critical_ms, params.line_collapse_ms)?;
                let towers_failed = draw() < p_towers;
                let line_failed = draw() < p_line;
                if towers_failed {
                    state.fail(
                        grid.index(ComponentId::Transmission(i)),
                        FailureKind::TransmissionTowers,
                        peak.1,
                    );
                } else if line_failed {
                    state.fail(
                        grid.index(ComponentId::Transmission(i)),
                        FailureKind::TransmissionLine,
                        peak.1,
                    );
                }
            }
            for (i, p) in grid.poles.iter().enumerate() {
                let (w, hour) = field.peak_wind_idx(p.tract);
                let pf = lognormal_fragility(w, params.pole.mu, params.pole.sigma)?;
                if draw() < pf {
                    state.fail(grid.index(ComponentId::Pole(i)), FailureKind::Pole, hour);
                }
            }
            for (i, c) in grid.conductors.iter().enumerate() {
                let (w, hour) = field.peak_wind_idx(c.tract);
                let pf = conductor_fragility_with(w, params.conductor_a, params.conductor_b);
                if draw() < pf {
                    state.fail(
                        grid.index(ComponentId::Conductor(i)),
                        FailureKind::Conductor,
                        hour,
                    );
                }
            }
        }
        DamageMode::PerHour => {
            for hour in 0..field.duration_h {
                for (i, s) in grid.substations.iter().enumerate() {
                    let dense = grid.index(ComponentId::Substation(i));
                    if state.is_failed(dense) {
                        continue;
                    }
                    let r = draw();
                    if let Some(kind) = substation_tier(tract_wind(s.tract, hour), params, r)? {
                        state.fail(dense, kind, hour);
                    }
                }
                for (i, e) in grid.transmission.iter().enumerate() {
                    let dense = grid.index(ComponentId::Transmission(i));
                    if state.is_failed(dense) {
                        continue;
                    }
                    let w = transmission_wind(i, hour);
                    let p_towers = transmission_element_fragility(w, e.n_towers, params.tower)?;
                    let p_line =
                        line_fragility(w, params.line_critical_ms, params.line_collapse_ms)?;
                    let towers_failed = draw() < p_towers;
                    let line_failed = draw() < p_line;
                    if towers_failed {
                        state.fail(dense, FailureKind::TransmissionTowers, hour);
                    } else if line_failed {
                        state.fail(dense, FailureKind::TransmissionLine, hour);
                    }
                }
                for (i, p) in grid.poles.iter().enumerate() {
                    let dense = grid.index(ComponentId::Pole(i));
                    if state.is_failed(dense) {
                        continue;
                    }
                    let pf =
                        lognormal_fragility(tract_wind(p.tract, hour), params.pole.mu, params.pole.sigma)?;
                    if draw() < pf {
                        state.fail(dense, FailureKind::Pole, hour);
                    }
                }
                for (i, c) in grid.conductors.iter().enumerate() {
                    let dense = grid.index(ComponentId::Conductor(i));
                    if state.is_failed(dense) {
                        continue;
                    }
                    let pf = conductor_fragility_with(
                        tract_wind(c.tract, hour),
                        params.conductor_a,
                        params.conductor_b,
                    );
                    if draw() < pf {
                        state.fail(dense, FailureKind::Conductor, hour);
                    }
                }
            }
        }
    }
    Ok(state)
}

/// Sample component damage for one replication.
pub fn sample_damage(
    grid: &Grid,
    field: &WindField,
    params: &FragilityParams,
    mode: DamageMode,
    rng: &mut impl Rng,
) -> Result<DamageState> {
    sample_damage_from(grid, field, params, mode, &mut || rng.gen::<f64>())
}
