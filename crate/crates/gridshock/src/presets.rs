//! Built-in Harris-County-like study area.
//!
//! 25 tracts on a 5x5 planar lattice, with populations chosen so the default
//! grid config synthesizes 97 substations, 242 transmission elements and 1433
//! distribution elements. Social vulnerability varies across tracts and the
//! default marginals correlate minority share with it.

use crate::hazard::Tract;
use crate::population::Marginals;

/// Poles per tract under the default 40-customer pole; sums to 1433.
const POLE_COUNTS: [u32; 25] = [
    72, 68, 65, 80, 58, 55, 61, 49, 77, 44, 52, 63, 59, 47, 66, 41, 70, 54, 45, 60, 48, 73, 42,
    51, 33,
];

const SVI: [f64; 25] = [
    0.82, 0.31, 0.55, 0.91, 0.18, 0.44, 0.73, 0.26, 0.88, 0.12, 0.38, 0.64, 0.50, 0.22, 0.77,
    0.08, 0.69, 0.41, 0.15, 0.58, 0.29, 0.85, 0.11, 0.47, 0.35,
];

pub fn harris_like_tracts() -> Vec<Tract> {
    (0..25)
        .map(|i| {
            let row = i / 5;
            let col = i % 5;
            Tract {
                id: format!("T{i:02}"),
                x_km: col as f64 * 12.0,
                y_km: row as f64 * 10.0,
                population: POLE_COUNTS[i] * 40,
                svi: SVI[i],
                flood_zone_fraction: (SVI[i] * 0.4).min(1.0),
            }
        })
        .collect()
}

/// Default attribute marginals: minority share tracks tract SVI, the rest are
/// flat plausible shares. Stand-ins for census inputs.
pub fn harris_like_marginals(tracts: &[Tract]) -> Marginals {
    Marginals {
        per_tract: tracts
            .iter()
            .map(|t| crate::population::TractMarginals {
                income: [0.15, 0.18, 0.17, 0.15, 0.13, 0.10, 0.12],
                racial_minority: 0.15 + 0.6 * t.svi,
                elderly: 0.12 + 0.1 * t.svi,
                child_under_10: 0.30,
                mobility_issue: 0.05 + 0.08 * t.svi,
                medical_condition: 0.10 + 0.08 * t.svi,
                chronic_disease: 0.12 + 0.08 * t.svi,
                owner: 0.75 - 0.35 * t.svi,
                vehicle_missing: 0.03 + 0.12 * t.svi,
                social_capital: 0.55 - 0.2 * t.svi,
            })
            .collect(),
    }
}
