//! Synthetic household population and behavioral state.

mod coeffs;

pub use coeffs::{
    logistic_response, ordinal_sample, sigmoid, CoefficientSet, ExpectationCoeffs,
    ExperienceCoeffs, OrdinalModel, PreparednessCoeffs, SubstituteCoeffs, ToleranceCoeffs,
};

use std::path::Path;

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::hazard::Tract;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Household {
    pub id: u32,
    pub tract: usize,
    pub pole: usize,
    pub x_km: f64,
    pub y_km: f64,
    /// Income bracket 1..=7.
    pub income_bracket: u8,
    pub racial_minority: bool,
    pub elderly: bool,
    pub child_under_10: bool,
    pub mobility_issue: bool,
    pub medical_condition: bool,
    pub chronic_disease: bool,
    pub owner: bool,
    pub vehicle_missing: bool,
    pub social_capital: bool,
    pub flood_zone: bool,
    pub state_duration_years: f64,
    pub supermarket_distance_mi: f64,
}

impl Household {
    /// Renter flag as the substitute/preparedness models code it.
    pub fn renter(&self) -> f64 {
        if self.owner {
            0.0
        } else {
            1.0
        }
    }

    pub fn attribute(&self, name: &str) -> Option<bool> {
        match name {
            "racial_minority" => Some(self.racial_minority),
            "elderly" => Some(self.elderly),
            "child_under_10" => Some(self.child_under_10),
            "mobility_issue" => Some(self.mobility_issue),
            "medical_condition" => Some(self.medical_condition),
            "chronic_disease" => Some(self.chronic_disease),
            "owner" => Some(self.owner),
            "vehicle_missing" => Some(self.vehicle_missing),
            "social_capital" => Some(self.social_capital),
            "flood_zone" => Some(self.flood_zone),
            _ => None,
        }
    }
}

/// Binary attributes reported per group in aggregates.
pub const GROUP_ATTRIBUTES: &[&str] = &[
    "racial_minority",
    "elderly",
    "mobility_issue",
    "medical_condition",
    "owner",
    "flood_zone",
];

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Population {
    pub households: Vec<Household>,
}

impl Population {
    pub fn len(&self) -> usize {
        self.households.len()
    }

    pub fn is_empty(&self) -> bool {
        self.households.is_empty()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TractMarginals {
    /// Proportions of income brackets 1..=7; must sum to 1.
    pub income: [f64; 7],
    pub racial_minority: f64,
    pub elderly: f64,
    pub child_under_10: f64,
    pub mobility_issue: f64,
    pub medical_condition: f64,
    pub chronic_disease: f64,
    pub owner: f64,
    pub vehicle_missing: f64,
    pub social_capital: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Marginals {
    pub per_tract: Vec<TractMarginals>,
}

impl Marginals {
    pub fn validate(&self) -> Result<()> {
        for (i, m) in self.per_tract.iter().enumerate() {
            let named = [
                ("racial_minority", m.racial_minority),
                ("elderly", m.elderly),
                ("child_under_10", m.child_under_10),
                ("mobility_issue", m.mobility_issue),
                ("medical_condition", m.medical_condition),
                ("chronic_disease", m.chronic_disease),
                ("owner", m.owner),
                ("vehicle_missing", m.vehicle_missing),
                ("social_capital", m.social_capital),
            ];
            for (name, v) in named {
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::MarginalOutOfRange {
                        name: format!("{name}[{i}]"),
                        value: v,
                    });
                }
            }
            for (j, &v) in m.income.iter().enumerate() {
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::MarginalOutOfRange {
                        name: format!("income_{}[{i}]", j + 1),
                        value: v,
                    });
                }
            }
            let income_sum: f64 = m.income.iter().sum();
            if (income_sum - 1.0).abs() > 1e-6 {
                return Err(Error::MarginalOutOfRange {
                    name: format!("income sum[{i}]"),
                    value: income_sum,
                });
            }
        }
        Ok(())
    }

    /// Load per-tract marginals from CSV keyed by tract id, aligned with
    /// `tracts` order. Columns: `tract_id,income_1..income_7,<attributes>`.
    pub fn load_csv(path: &Path, tracts: &[Tract]) -> Result<Marginals> {
        let mut reader = csv::Reader::from_path(path)?;
        let headers = reader.headers()?.clone();
        let col = |name: &str| -> Result<usize> {
            headers
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| Error::MalformedRow {
                    line: 1,
                    reason: format!("missing column {name}"),
                })
        };
        let id_col = col("tract_id")?;
        let income_cols: Vec<usize> = (1..=7)
            .map(|i| col(&format!("income_{i}")))
            .collect::<Result<_>>()?;
        let attr_cols = [
            col("racial_minority")?,
            col("elderly")?,
            col("child_under_10")?,
            col("mobility_issue")?,
            col("medical_condition")?,
            col("chronic_disease")?,
            col("owner")?,
            col("vehicle_missing")?,
            col("social_capital")?,
        ];
        let mut by_id = std::collections::HashMap::new();
        for (i, record) in reader.records().enumerate() {
            let line = i + 2;
            let record = record?;
            let parse = |j: usize| -> Result<f64> {
                record[j].parse().map_err(|_| Error::MalformedRow {
                    line,
                    reason: format!("bad number {:?}", &record[j]),
                })
            };
            let mut income = [0.0; 7];
            for (k, &j) in income_cols.iter().enumerate() {
                income[k] = parse(j)?;
            }
            by_id.insert(
                record[id_col].to_string(),
                TractMarginals {
                    income,
                    racial_minority: parse(attr_cols[0])?,
                    elderly: parse(attr_cols[1])?,
                    child_under_10: parse(attr_cols[2])?,
                    mobility_issue: parse(attr_cols[3])?,
                    medical_condition: parse(attr_cols[4])?,
                    chronic_disease: parse(attr_cols[5])?,
                    owner: parse(attr_cols[6])?,
                    vehicle_missing: parse(attr_cols[7])?,
                    social_capital: parse(attr_cols[8])?,
                },
            );
        }
        let per_tract = tracts
            .iter()
            .map(|t| {
                by_id.get(&t.id).cloned().ok_or_else(|| Error::MalformedRow {
                    line: 0,
                    reason: format!("no marginals row for tract {}", t.id),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let marginals = Marginals { per_tract };
        marginals.validate()?;
        Ok(marginals)
    }
}

fn largest_remainder(weights: &[f64], total: usize) -> Vec<usize> {
    let sum: f64 = weights.iter().sum();
    if sum == 0.0 {
        let mut out = vec![0; weights.len()];
        for i in 0..total {
            out[i % weights.len()] += 1;
        }
        return out;
    }
    let quotas: Vec<f64> = weights.iter().map(|w| total as f64 * w / sum).collect();
    let mut counts: Vec<usize> = quotas.iter().map(|q| q.floor() as usize).collect();
    let assigned: usize = counts.iter().sum();
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&a, &b| {
        let ra = quotas[a] - quotas[a].floor();
        let rb = quotas[b] - quotas[b].floor();
        rb.partial_cmp(&ra).unwrap().then(a.cmp(&b))
    });
    for &i in order.iter().take(total - assigned) {
        counts[i] += 1;
    }
    counts
}

fn bernoulli(rng: &mut impl Rng, p: f64) -> bool {
    rng.gen::<f64>() < p
}

fn truncated_normal(mean: f64, sd: f64, min: f64, rng: &mut impl Rng) -> f64 {
    let dist = Normal::new(mean, sd).expect("sd positive");
    loop {
        let v = dist.sample(rng);
        if v >= min {
            return v;
        }
    }
}

/// Sample `n_total` households, allocated to tracts proportionally to
/// population, each attribute drawn independently from its tract marginal.
pub fn synthesize_households(
    tracts: &[Tract],
    marginals: &Marginals,
    grid: &Grid,
    n_total: usize,
    rng: &mut impl Rng,
) -> Result<Population> {
    if tracts.is_empty() {
        return Err(Error::EmptyTracts);
    }
    marginals.validate()?;
    let weights: Vec<f64> = tracts.iter().map(|t| t.population as f64).collect();
    let counts = largest_remainder(&weights, n_total);
    let mut households = Vec::with_capacity(n_total);
    for (tract_idx, (&count, tract)) in counts.iter().zip(tracts).enumerate() {
        let m = &marginals.per_tract[tract_idx];
        let tract_poles = grid.tract_poles(tract_idx);
        for k in 0..count {
            let id = households.len() as u32;
            let income_u: f64 = rng.gen();
            let mut income_bracket = 7u8;
            let mut acc = 0.0;
            for (j, &p) in m.income.iter().enumerate() {
                acc += p;
                if income_u < acc {
                    income_bracket = j as u8 + 1;
                    break;
                }
            }
            let pole = if tract_poles.is_empty() {
                grid.tract_poles(0)
                    .first()
                    .copied()
                    .ok_or(Error::EmptyPopulation)?
            } else {
                tract_poles[k % tract_poles.len()]
            };
            households.push(Household {
                id,
                tract: tract_idx,
                pole,
                x_km: tract.x_km + rng.gen_range(-4.0..4.0),
                y_km: tract.y_km + rng.gen_range(-4.0..4.0),
                income_bracket,
                racial_minority: bernoulli(rng, m.racial_minority),
                elderly: bernoulli(rng, m.elderly),
                child_under_10: bernoulli(rng, m.child_under_10),
                mobility_issue: bernoulli(rng, m.mobility_issue),
                medical_condition: bernoulli(rng, m.medical_condition),
                chronic_disease: bernoulli(rng, m.chronic_disease),
                owner: bernoulli(rng, m.owner),
                vehicle_missing: bernoulli(rng, m.vehicle_missing),
                social_capital: bernoulli(rng, m.social_capital),
                flood_zone: bernoulli(rng, tract.flood_zone_fraction),
                state_duration_years: truncated_normal(25.0, 15.0, 0.0, rng),
                // mean 5, variance 30
                supermarket_distance_mi: truncated_normal(5.0, 30.0_f64.sqrt(), 0.0, rng),
            });
        }
    }
    Ok(Population { households })
}

/// Dynamic per-household state over one replication.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BehavioralState {
    pub informed: bool,
    pub inform_day: Option<u32>,
    /// Self-efficacy level 1..=5.
    pub self_efficacy: u8,
    /// Need level 1..=5.
    pub need: u8,
    pub experience: bool,
    pub expectation_days: f64,
    pub substitute: bool,
    pub prepared: bool,
    pub tolerance_days: f64,
}

/// Sample the static behavioral covariates (need, self-efficacy, experience)
/// and the uninformed baseline outage expectation.
pub fn init_behavior(
    population: &Population,
    coeffs: &CoefficientSet,
    forewarning_days: f64,
    rng: &mut impl Rng,
) -> Result<Vec<BehavioralState>> {
    coeffs.validate()?;
    let mut states = Vec::with_capacity(population.len());
    for h in &population.households {
        let b = |f: bool| if f { 1.0 } else { 0.0 };
        let need = coeffs.need.sample(
            &[
                b(h.racial_minority),
                b(h.mobility_issue),
                b(h.child_under_10),
                b(h.medical_condition),
            ],
            rng.gen(),
        )?;
        let self_efficacy = coeffs.self_efficacy.sample(
            &[
                b(h.owner),
                b(h.medical_condition),
                b(h.chronic_disease),
                b(h.social_capital),
            ],
            rng.gen(),
        )?;
        let experience = rng.gen::<f64>()
            < coeffs.experience.probability(
                h.state_duration_years,
                b(h.racial_minority),
                b(h.elderly),
                b(h.child_under_10),
            );
        let expectation_days = coeffs.expectation.expected_outage(
            forewarning_days,
            0.0,
            b(h.owner),
            b(h.elderly),
            b(h.mobility_issue),
            b(h.flood_zone),
        );
        states.push(BehavioralState {
            informed: false,
            inform_day: None,
            self_efficacy,
            need,
            experience,
            expectation_days,
            substitute: false,
            prepared: false,
            tolerance_days: f64::INFINITY,
        });
    }
    Ok(states)
}
