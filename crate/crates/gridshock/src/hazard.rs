//! Hurricane wind exposure per census tract.
//!
//! Winds come either from a parametric model (radial exponential decay around
//! a moving track center, triangular time ramp) or from an ingested CSV of
//! per-tract, per-hour speeds.

use std::collections::BTreeMap;
use std::path::Path;

use rand::Rng;
use rand_distr::{Distribution, LogNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Census tract in a local planar frame (km).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Tract {
    pub id: String,
    pub x_km: f64,
    pub y_km: f64,
    pub population: u32,
    /// Social vulnerability index in [0, 1].
    pub svi: f64,
    pub flood_zone_fraction: f64,
}

impl Tract {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.svi) {
            return Err(Error::MarginalOutOfRange {
                name: format!("svi({})", self.id),
                value: self.svi,
            });
        }
        if !(0.0..=1.0).contains(&self.flood_zone_fraction) {
            return Err(Error::MarginalOutOfRange {
                name: format!("flood_zone_fraction({})", self.id),
                value: self.flood_zone_fraction,
            });
        }
        Ok(())
    }
}

/// Saffir-Simpson midpoint peak winds, m/s, for categories 1..=4.
///
/// Calibration defaults; the model is driven entirely by whatever values sit
/// in `HurricaneSpec::v_max_ms`.
pub const DEFAULT_V_MAX: [f64; 4] = [38.0, 46.0, 54.0, 65.0];

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrackPoint {
    pub x_km: f64,
    pub y_km: f64,
    pub t_h: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HurricaneSpec {
    /// Category 1..=4.
    pub category: u8,
    pub track: Vec<TrackPoint>,
    pub duration_h: usize,
    pub decay_length_km: f64,
    /// Peak sustained wind, m/s. Defaults to `DEFAULT_V_MAX[category - 1]`.
    pub v_max_ms: f64,
    /// Sigma of multiplicative lognormal noise; 0 means deterministic.
    pub sigma_noise: f64,
}

impl HurricaneSpec {
    /// Straight west-to-east track across the bounding box of `tracts`.
    pub fn straight_track(category: u8, tracts: &[Tract], duration_h: usize) -> Result<Self> {
        if tracts.is_empty() {
            return Err(Error::EmptyTracts);
        }
        if !(1..=4).contains(&category) {
            return Err(Error::CategoryOutOfRange(category));
        }
        let min_x = tracts.iter().map(|t| t.x_km).fold(f64::INFINITY, f64::min);
        let max_x = tracts.iter().map(|t| t.x_km).fold(f64::NEG_INFINITY, f64::max);
        let mean_y = tracts.iter().map(|t| t.y_km).sum::<f64>() / tracts.len() as f64;
        Ok(HurricaneSpec {
            category,
            track: vec![
                TrackPoint {
                    x_km: min_x - 10.0,
                    y_km: mean_y,
                    t_h: 0.0,
                },
                TrackPoint {
                    x_km: max_x + 10.0,
                    y_km: mean_y,
                    t_h: duration_h as f64,
                },
            ],
            duration_h,
            decay_length_km: 50.0,
            v_max_ms: DEFAULT_V_MAX[(category - 1) as usize],
            sigma_noise: 0.0,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=4).contains(&self.category) {
            return Err(Error::CategoryOutOfRange(self.category));
        }
        if self.duration_h == 0 || self.decay_length_km <= 0.0 || self.track.is_empty() {
            return Err(Error::InvalidScenario(
                "hurricane spec needs duration > 0, decay length > 0 and a track".into(),
            ));
        }
        if self.track.windows(2).any(|w| w[1].t_h <= w[0].t_h) {
            return Err(Error::InvalidScenario(
                "track timestamps must be strictly increasing".into(),
            ));
        }
        Ok(())
    }

    /// Hurricane center at time `t_h`, linearly interpolated, clamped to ends.
    pub fn center_at(&self, t_h: f64) -> (f64, f64) {
        let first = self.track.first().unwrap();
        let last = self.track.last().unwrap();
        if t_h <= first.t_h {
            return (first.x_km, first.y_km);
        }
        if t_h >= last.t_h {
            return (last.x_km, last.y_km);
        }
        for w in self.track.windows(2) {
            if t_h <= w[1].t_h {
                let f = (t_h - w[0].t_h) / (w[1].t_h - w[0].t_h);
                return (
                    w[0].x_km + f * (w[1].x_km - w[0].x_km),
                    w[0].y_km + f * (w[1].y_km - w[0].y_km),
                );
            }
        }
        (last.x_km, last.y_km)
    }
}

/// Per-tract, per-hour wind speeds for one hurricane realization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindField {
    pub tract_ids: Vec<String>,
    /// speeds[tract][hour], m/s.
    pub speeds: Vec<Vec<f64>>,
    pub duration_h: usize,
}

impl WindField {
    /// Max over hours for one tract, by id.
    pub fn peak_wind(&self, tract: &str) -> Result<f64> {
        let idx = self
            .tract_ids
            .iter()
            .position(|t| t == tract)
            .ok_or_else(|| Error::UnknownTract(tract.to_string()))?;
        Ok(self.peak_wind_idx(idx).0)
    }

    /// (peak speed, hour of peak) for a tract index. Earliest hour wins ties.
    pub fn peak_wind_idx(&self, idx: usize) -> (f64, usize) {
        let mut best = (0.0_f64, 0_usize);
        for (h, &w) in self.speeds[idx].iter().enumerate() {
            if w > best.0 {
                best = (w, h);
            }
        }
        best
    }

    pub fn n_tracts(&self) -> usize {
        self.tract_ids.len()
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["tract_id", "hour", "wind_ms"])?;
        for (i, id) in self.tract_ids.iter().enumerate() {
            for (h, &s) in self.speeds[i].iter().enumerate() {
                w.write_record([id.as_str(), &h.to_string(), &format!("{s:.17e}")])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

/// Symmetric triangular ramp: 0 at hour 0, 1 at mid-passage, back to 0.
fn time_ramp(hour: usize, duration_h: usize) -> f64 {
    let mid = duration_h as f64 / 2.0;
    if mid == 0.0 {
        return 1.0;
    }
    (1.0 - ((hour as f64) - mid).abs() / mid).max(0.0)
}

/// Parametric wind field: v_max * ramp(t) * exp(-distance / decay_length).
pub fn parametric_wind_series(
    spec: &HurricaneSpec,
    tracts: &[Tract],
    rng: &mut impl Rng,
) -> Result<WindField> {
    spec.validate()?;
    if tracts.is_empty() {
        return Err(Error::EmptyTracts);
    }
    let noise = if spec.sigma_noise > 0.0 {
        Some(LogNormal::new(0.0, spec.sigma_noise).expect("sigma checked positive"))
    } else {
        None
    };
    let mut speeds = Vec::with_capacity(tracts.len());
    for tract in tracts {
        let mut row = Vec::with_capacity(spec.duration_h);
        for hour in 0..spec.duration_h {
            let (cx, cy) = spec.center_at(hour as f64);
            let d = ((tract.x_km - cx).powi(2) + (tract.y_km - cy).powi(2)).sqrt();
            let mut w = spec.v_max_ms
                * time_ramp(hour, spec.duration_h)
                * (-d / spec.decay_length_km).exp();
            if let Some(dist) = &noise {
                w *= dist.sample(rng);
            }
            row.push(w);
        }
        speeds.push(row);
    }
    Ok(WindField {
        tract_ids: tracts.iter().map(|t| t.id.clone()).collect(),
        speeds,
        duration_h: spec.duration_h,
    })
}

/// Load a wind field from CSV `tract_id,hour,wind_ms`.
///
/// Every (tract, hour) cell in the rectangle must be present exactly once.
pub fn load_wind_field(path: &Path) -> Result<WindField> {
    let mut reader = csv::Reader::from_path(path)?;
    let mut cells: BTreeMap<String, BTreeMap<usize, f64>> = BTreeMap::new();
    let mut order: Vec<String> = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let line = i + 2; // header is line 1
        let record = record?;
        if record.len() != 3 {
            return Err(Error::MalformedRow {
                line,
                reason: format!("expected 3 fields, got {}", record.len()),
            });
        }
        let id = record[0].to_string();
        let hour: usize = record[1].parse().map_err(|_| Error::MalformedRow {
            line,
            reason: format!("bad hour {:?}", &record[1]),
        })?;
        let speed: f64 = record[2].parse().map_err(|_| Error::MalformedRow {
            line,
            reason: format!("bad speed {:?}", &record[2]),
        })?;
        if speed < 0.0 {
            return Err(Error::NegativeSpeed {
                tract: id,
                hour,
                speed,
            });
        }
        if !cells.contains_key(&id) {
            order.push(id.clone());
        }
        cells.entry(id).or_default().insert(hour, speed);
    }
    if cells.is_empty() {
        return Err(Error::EmptyTracts);
    }
    let duration_h = 1 + cells
        .values()
        .flat_map(|m| m.keys().copied())
        .max()
        .unwrap_or(0);
    let mut speeds = Vec::with_capacity(order.len());
    for id in &order {
        let tract_cells = &cells[id];
        let mut row = Vec::with_capacity(duration_h);
        for h in 0..duration_h {
            match tract_cells.get(&h) {
                Some(&s) => row.push(s),
                None => {
                    return Err(Error::IncompleteGrid {
                        tract: id.clone(),
                        hour: h,
                    })
                }
            }
        }
        speeds.push(row);
    }
    Ok(WindField {
        tract_ids: order,
        speeds,
        duration_h,
    })
}

/// Load tracts from CSV `tract_id,x_km,y_km,population,svi,flood_zone_fraction`.
pub fn load_tracts(path: &Path) -> Result<Vec<Tract>> {
    let mut reader = csv::Reader::from_path(path)?;
    let mut tracts = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let line = i + 2;
        let record = record?;
        if record.len() != 6 {
            return Err(Error::MalformedRow {
                line,
                reason: format!("expected 6 fields, got {}", record.len()),
            });
        }
        let parse_f = |j: usize| -> Result<f64> {
            record[j].parse().map_err(|_| Error::MalformedRow {
                line,
                reason: format!("bad number {:?}", &record[j]),
            })
        };
        let tract = Tract {
            id: record[0].to_string(),
            x_km: parse_f(1)?,
            y_km: parse_f(2)?,
            population: record[3].parse().map_err(|_| Error::MalformedRow {
                line,
                reason: format!("bad population {:?}", &record[3]),
            })?,
            svi: parse_f(4)?,
            flood_zone_fraction: parse_f(5)?,
        };
        tract.validate()?;
        tracts.push(tract);
    }
    if tracts.is_empty() {
        return Err(Error::EmptyTracts);
    }
    Ok(tracts)
}

pub fn write_tracts(tracts: &[Tract], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record([
        "tract_id",
        "x_km",
        "y_km",
        "population",
        "svi",
        "flood_zone_fraction",
    ])?;
    for t in tracts {
        w.write_record([
            t.id.as_str(),
            &format!("{}", t.x_km),
            &format!("{}", t.y_km),
            &t.population.to_string(),
            &format!("{}", t.svi),
            &format!("{}", t.flood_zone_fraction),
        ])?;
    }
    w.flush()?;
    Ok(())
}
