//! Replication pipeline: forewarning, impact, restoration, hardship.

mod monte_carlo;
mod outputs;

pub use monte_carlo::{
    ci_half_width, run_monte_carlo, stopping_n, Aggregate, DailyStats, GroupTally,
    ReplicationSummary, Reps, StoppingRule,
};
pub use outputs::write_outputs;

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::diffusion::{
    build_social_network, step_adoption, step_information, AdoptionParams, InfoParams,
    NetworkParams,
};
use crate::error::{Error, Result};
use crate::grid::{
    build_synthetic_grid, propagate_with, sample_damage, DamageMode, FragilityParams, GridConfig,
    Topology,
};
use crate::hazard::{
    load_tracts, load_wind_field, parametric_wind_series, HurricaneSpec, Tract, WindField,
};
use crate::population::{
    init_behavior, synthesize_households, CoefficientSet, Household, Marginals, GROUP_ATTRIBUTES,
};
use crate::restoration::{
    plan_priorities, schedule_repairs, RepairTable, ResourceProfile, Strategy,
};
use crate::seed::{replication_seed, stream_rng, Stream};

/// Full configuration of one simulated scenario. All fields have defaults so
/// a scenario JSON only needs to state what it varies.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct Scenario {
    pub name: String,
    /// Hurricane category 1..=4 for the built-in parametric wind model.
    pub category: u8,
    pub storm_duration_h: usize,
    pub decay_length_km: f64,
    /// Override of the category's default peak wind, m/s.
    pub v_max_ms: Option<f64>,
    pub sigma_noise: f64,
    /// Optional precomputed wind field CSV; replaces the parametric model.
    pub wind_file: Option<PathBuf>,
    /// Optional tract CSV; the built-in study area is used otherwise.
    pub tracts_file: Option<PathBuf>,
    /// Optional marginals CSV; built-in marginals otherwise.
    pub marginals_file: Option<PathBuf>,
    pub forewarning_days: u32,
    pub n_households: usize,
    pub strategy: Strategy,
    pub resources: ResourceProfile,
    pub repair_table: RepairTable,
    pub network: NetworkParams,
    pub info: InfoParams,
    pub adoption: AdoptionParams,
    pub coefficients: CoefficientSet,
    pub fragility: FragilityParams,
    pub damage_mode: DamageMode,
    pub grid: GridConfig,
    pub seed: u64,
}

impl Default for Scenario {
    fn default() -> Self {
        Scenario {
            name: "baseline".into(),
            category: 4,
            storm_duration_h: 24,
            decay_length_km: 50.0,
            v_max_ms: None,
            sigma_noise: 0.0,
            wind_file: None,
            tracts_file: None,
            marginals_file: None,
            forewarning_days: 9,
            n_households: 2500,
            strategy: Strategy::Component,
            resources: ResourceProfile::default(),
            repair_table: RepairTable::default(),
            network: NetworkParams::default(),
            info: InfoParams::default(),
            adoption: AdoptionParams::default(),
            coefficients: CoefficientSet::default(),
            fragility: FragilityParams::default(),
            damage_mode: DamageMode::default(),
            grid: GridConfig::default(),
            seed: 42,
        }
    }
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        if !(1..=4).contains(&self.category) {
            return Err(Error::CategoryOutOfRange(self.category));
        }
        if self.storm_duration_h == 0 || self.n_households == 0 {
            return Err(Error::InvalidScenario(
                "storm duration and household count must be positive".into(),
            ));
        }
        self.info.validate()?;
        self.fragility.validate()?;
        self.coefficients.validate()?;
        Ok(())
    }

    pub fn load_json(path: &Path) -> Result<Scenario> {
        let file = std::fs::File::open(path)?;
        let scenario: Scenario = serde_json::from_reader(std::io::BufReader::new(file))?;
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path)?;
        serde_json::to_writer_pretty(std::io::BufWriter::new(file), self)?;
        Ok(())
    }

    /// Resolve file-backed inputs once; replications share them read-only.
    pub fn load_inputs(&self) -> Result<ScenarioInputs> {
        self.validate()?;
        let tracts = match &self.tracts_file {
            Some(path) => load_tracts(path)?,
            None => crate::presets::harris_like_tracts(),
        };
        let marginals = match &self.marginals_file {
            Some(path) => Marginals::load_csv(path, &tracts)?,
            None => crate::presets::harris_like_marginals(&tracts),
        };
        let wind = match &self.wind_file {
            Some(path) => Some(load_wind_field(path)?),
            None => None,
        };
        Ok(ScenarioInputs {
            tracts,
            marginals,
            wind,
        })
    }

    fn hurricane_spec(&self, tracts: &[Tract]) -> Result<HurricaneSpec> {
        let mut spec = HurricaneSpec::straight_track(self.category, tracts, self.storm_duration_h)?;
        spec.decay_length_km = self.decay_length_km;
        if let Some(v) = self.v_max_ms {
            spec.v_max_ms = v;
        }
        spec.sigma_noise = self.sigma_noise;
        spec.validate()?;
        Ok(spec)
    }
}

/// File-backed inputs resolved from a scenario.
#[derive(Debug, Clone)]
pub struct ScenarioInputs {
    pub tracts: Vec<Tract>,
    pub marginals: Marginals,
    pub wind: Option<WindField>,
}

/// One household's outcome with its attribute snapshot.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HouseholdOutcome {
    pub household: Household,
    pub informed: bool,
    pub prepared: bool,
    pub substitute: bool,
    pub tolerance_days: f64,
    /// Absolute hours from day 0; None when power never went out.
    pub outage_start_h: Option<f64>,
    pub outage_end_h: Option<f64>,
    pub hardship: bool,
}

impl HouseholdOutcome {
    pub fn outage_duration_h(&self) -> f64 {
        match (self.outage_start_h, self.outage_end_h) {
            (Some(s), Some(e)) => e - s,
            _ => 0.0,
        }
    }

    /// In hardship at the end of day `day`: power still out and the elapsed
    /// outage exceeds tolerance.
    pub fn in_hardship_on(&self, day: usize) -> bool {
        let t = (day + 1) as f64 * 24.0;
        match self.outage_start_h {
            Some(start) => {
                let out = self.outage_end_h.map_or(true, |end| end > t);
                out && t - start > self.tolerance_days * 24.0
            }
            None => false,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunResult {
    pub daily_hardship: Vec<f64>,
    pub households: Vec<HouseholdOutcome>,
    pub damage_counts: BTreeMap<String, usize>,
    pub n_failed: usize,
    pub full_restoration_day: u32,
}

impl RunResult {
    pub fn peak_hardship(&self) -> f64 {
        self.daily_hardship.iter().fold(0.0, |m, &v| m.max(v))
    }
}

/// Per-day fraction of households in hardship, from day 0 through the full
/// restoration day.
pub fn hardship_series(households: &[HouseholdOutcome], n_days: usize) -> Result<Vec<f64>> {
    if households.is_empty() {
        return Err(Error::EmptyPopulation);
    }
    Ok((0..n_days)
        .map(|d| {
            households.iter().filter(|h| h.in_hardship_on(d)).count() as f64
                / households.len() as f64
        })
        .collect())
}

/// Run one replication of a scenario. `rep` indexes the replication under the
/// master seed; every subsystem draws from its own stream so runs are
/// reproducible for any worker count.
pub fn run_replication(
    scenario: &Scenario,
    inputs: &ScenarioInputs,
    master_seed: u64,
    rep: u64,
) -> Result<RunResult> {
    let rep_seed = replication_seed(master_seed, rep);
    let b = |f: bool| if f { 1.0 } else { 0.0 };

    let mut grid_rng = stream_rng(rep_seed, Stream::Grid);
    let grid = build_synthetic_grid(&inputs.tracts, &scenario.grid, &mut grid_rng)?;

    let mut pop_rng = stream_rng(rep_seed, Stream::Population);
    let population = synthesize_households(
        &inputs.tracts,
        &inputs.marginals,
        &grid,
        scenario.n_households,
        &mut pop_rng,
    )?;

    let mut net_rng = stream_rng(rep_seed, Stream::Network);
    let network = build_social_network(&scenario.network, &population, &mut net_rng)?;

    // forewarning phase: day 0 through f - 1
    let f_days = scenario.forewarning_days;
    let mut diff_rng = stream_rng(rep_seed, Stream::Diffusion);
    let mut states = init_behavior(
        &population,
        &scenario.coefficients,
        f_days as f64,
        &mut diff_rng,
    )?;
    for day in 0..f_days {
        step_information(
            day,
            &population,
            &mut states,
            &network,
            &scenario.info,
            &mut diff_rng,
        )?;
        step_adoption(
            day,
            &population,
            &mut states,
            &network,
            &scenario.coefficients,
            &scenario.adoption,
            f_days,
            &mut diff_rng,
        )?;
    }
    for s in states.iter_mut() {
        // x_s marks the *absence* of a backup generator: the negative
        // substitute coefficient then shortens tolerance for households
        // without one, so owning a generator is protective - the only
        // reading consistent with preparedness raising tolerance and with
        // substitutes reducing observed hardship in the survey data the
        // model was fitted on.
        s.tolerance_days = scenario.coefficients.tolerance.tolerance_days(
            1.0 - b(s.substitute),
            s.need as f64,
            b(s.prepared),
        );
    }

    // impact phase: landfall at the end of forewarning
    let mut wind_rng = stream_rng(rep_seed, Stream::Wind);
    let field = match &inputs.wind {
        Some(w) => w.clone(),
        None => {
            let spec = scenario.hurricane_spec(&inputs.tracts)?;
            parametric_wind_series(&spec, &inputs.tracts, &mut wind_rng)?
        }
    };
    let mut damage_rng = stream_rng(rep_seed, Stream::Damage);
    let damage = sample_damage(
        &grid,
        &field,
        &scenario.fragility,
        scenario.damage_mode,
        &mut damage_rng,
    )?;

    // restoration phase: repairs begin when the storm ends
    let mut repair_rng = stream_rng(rep_seed, Stream::Repair);
    let priorities = plan_priorities(
        scenario.strategy,
        &grid,
        &damage,
        &inputs.tracts,
        &mut repair_rng,
    );
    let schedule = schedule_repairs(
        &grid,
        &damage,
        &priorities,
        &scenario.repair_table,
        &scenario.resources,
        &mut repair_rng,
    )?;

    let t_land = f_days as f64 * 24.0;
    let t_rest = t_land + field.duration_h as f64;
    let topology = Topology::new(&grid);
    let n_poles = grid.poles.len();

    // outage starts: replay connectivity at each distinct failure hour
    let mut outage_start: Vec<Option<f64>> = vec![None; n_poles];
    let fail_hours: BTreeSet<usize> = damage.damaged().map(|(_, f)| f.fail_time_h).collect();
    for h in fail_hours {
        let state = propagate_with(&topology, &|d| {
            matches!(damage.failure(d), Some(fl) if fl.fail_time_h <= h)
        });
        for (p, start) in outage_start.iter_mut().enumerate() {
            if start.is_none() && !state.pole_energized(&grid, p) {
                *start = Some(t_land + h as f64);
            }
        }
    }

    // outage ends: replay connectivity at each distinct repair completion
    let completion = schedule.completion_by_dense(&grid);
    let mut outage_end: Vec<Option<f64>> = vec![None; n_poles];
    let mut end_times: Vec<f64> = schedule.tasks.iter().map(|t| t.end_h).collect();
    end_times.sort_by(|a, b| a.partial_cmp(b).unwrap());
    end_times.dedup();
    for e in end_times {
        let state = propagate_with(&topology, &|d| {
            damage.is_failed(d) && completion[d].map_or(true, |c| c > e)
        });
        for p in 0..n_poles {
            if outage_start[p].is_some()
                && outage_end[p].is_none()
                && state.pole_energized(&grid, p)
            {
                outage_end[p] = Some(t_rest + e);
            }
        }
    }

    let households: Vec<HouseholdOutcome> = population
        .households
        .iter()
        .zip(&states)
        .map(|(h, s)| {
            let start = outage_start[h.pole];
            let end = outage_end[h.pole];
            let hardship = match (start, end) {
                (Some(st), Some(en)) => en - st > s.tolerance_days * 24.0,
                (Some(_), None) => true,
                _ => false,
            };
            HouseholdOutcome {
                household: h.clone(),
                informed: s.informed,
                prepared: s.prepared,
                substitute: s.substitute,
                tolerance_days: s.tolerance_days,
                outage_start_h: start,
                outage_end_h: end,
                hardship,
            }
        })
        .collect();

    let full_restoration_day = if damage.n_failed() == 0 {
        0
    } else {
        ((t_rest + schedule.makespan_h()) / 24.0).ceil() as u32
    };
    let daily_hardship = hardship_series(&households, full_restoration_day as usize + 1)?;

    let mut damage_counts = BTreeMap::new();
    for (_, failure) in damage.damaged() {
        *damage_counts.entry(failure.kind.label().to_string()).or_insert(0) += 1;
    }

    Ok(RunResult {
        daily_hardship,
        households,
        damage_counts,
        n_failed: damage.n_failed(),
        full_restoration_day,
    })
}

/// Tally ever-in-hardship counts for each reported subgroup and its
/// complement ("non_" prefix).
pub fn group_tallies(households: &[HouseholdOutcome]) -> BTreeMap<String, GroupTally> {
    let mut groups = BTreeMap::new();
    for &attr in GROUP_ATTRIBUTES {
        let mut in_group = GroupTally::default();
        let mut out_group = GroupTally::default();
        for h in households {
            let member = h.household.attribute(attr).expect("known attribute");
            let tally = if member { &mut in_group } else { &mut out_group };
            tally.size += 1;
            if h.hardship {
                tally.hardship += 1;
            }
        }
        groups.insert(attr.to_string(), in_group);
        groups.insert(format!("non_{attr}"), out_group);
    }
    groups
}
