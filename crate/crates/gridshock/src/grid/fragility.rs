//! Wind fragility functions for power-network components.

use serde::{Deserialize, Serialize};
use statrs::function::erf::erf;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct LognormalParams {
    /// Median wind speed in ln(m/s).
    pub mu: f64,
    pub sigma: f64,
}

/// Fragility parameter block for every component class.
///
/// The defaults are calibration placeholders: the source curves are published
/// as figures only, without numeric parameters. Override them from scenario
/// config when better data is available. The conductor power law and the
/// 30/60 m/s line thresholds are the published values.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct FragilityParams {
    pub substation_moderate: LognormalParams,
    pub substation_severe: LognormalParams,
    pub substation_complete: LognormalParams,
    pub tower: LognormalParams,
    pub pole: LognormalParams,
    pub line_critical_ms: f64,
    pub line_collapse_ms: f64,
    pub conductor_a: f64,
    pub conductor_b: f64,
}

impl Default for FragilityParams {
    fn default() -> Self {
        FragilityParams {
            substation_moderate: LognormalParams {
                mu: 26.0_f64.ln(),
                sigma: 0.35,
            },
            substation_severe: LognormalParams {
                mu: 28.0_f64.ln(),
                sigma: 0.35,
            },
            substation_complete: LognormalParams {
                mu: 140.0_f64.ln(),
                sigma: 0.30,
            },
            tower: LognormalParams {
                mu: 36.0_f64.ln(),
                sigma: 0.25,
            },
            pole: LognormalParams {
                mu: 36.0_f64.ln(),
                sigma: 0.30,
            },
            line_critical_ms: 30.0,
            line_collapse_ms: 60.0,
            conductor_a: 8e-12,
            conductor_b: 5.1731,
        }
    }
}

impl FragilityParams {
    pub fn validate(&self) -> Result<()> {
        for p in [
            self.substation_moderate,
            self.substation_severe,
            self.substation_complete,
            self.tower,
            self.pole,
        ] {
            if p.sigma <= 0.0 {
                return Err(Error::NonPositiveSigma(p.sigma));
            }
        }
        if self.line_critical_ms >= self.line_collapse_ms {
            return Err(Error::ThresholdsOutOfOrder {
                critical: self.line_critical_ms,
                collapse: self.line_collapse_ms,
            });
        }
        if self.conductor_a <= 0.0 || self.conductor_b <= 0.0 {
            return Err(Error::InvalidScenario(
                "conductor fragility coefficients must be positive".into(),
            ));
        }
        Ok(())
    }
}

fn std_normal_cdf(z: f64) -> f64 {
    0.5 * (1.0 + erf(z / std::f64::consts::SQRT_2))
}

/// Lognormal fragility: Phi((ln w - mu) / sigma), 0 at w = 0.
pub fn lognormal_fragility(w: f64, mu: f64, sigma: f64) -> Result<f64> {
    if sigma <= 0.0 {
        return Err(Error::NonPositiveSigma(sigma));
    }
    if w <= 0.0 {
        return Ok(0.0);
    }
    Ok(std_normal_cdf((w.ln() - mu) / sigma))
}

/// Failure probability of a tower chain: 1 - (1 - P_tower)^N, towers
/// failing independently with identical per-tower probability.
pub fn transmission_element_fragility(
    w: f64,
    n_towers: usize,
    tower: LognormalParams,
) -> Result<f64> {
    if n_towers == 0 {
        return Err(Error::ZeroTowers);
    }
    let p = lognormal_fragility(w, tower.mu, tower.sigma)?;
    Ok(1.0 - (1.0 - p).powi(n_towers as i32))
}

/// Piecewise line fragility: 0.01 floor below `w_critical` (only for w > 0),
/// 1 at or above `w_collapse`, endpoint-continuous linear interpolation
/// in between.
pub fn line_fragility(w: f64, w_critical: f64, w_collapse: f64) -> Result<f64> {
    if w_critical >= w_collapse {
        return Err(Error::ThresholdsOutOfOrder {
            critical: w_critical,
            collapse: w_collapse,
        });
    }
    Ok(if w <= 0.0 {
        0.0
    } else if w < w_critical {
        0.01
    } else if w >= w_collapse {
        1.0
    } else {
        0.01 + (w - w_critical) / (w_collapse - w_critical) * 0.99
    })
}

/// Conductor power-law fragility: min(1, a * w^b).
pub fn conductor_fragility_with(w: f64, a: f64, b: f64) -> f64 {
    if w <= 0.0 {
        return 0.0;
    }
    (a * w.powf(b)).min(1.0)
}

/// Conductor fragility with the published coefficients.
pub fn conductor_fragility(w: f64) -> f64 {
    conductor_fragility_with(w, 8e-12, 5.1731)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn lognormal_median_is_half() {
        let mu = 60.0_f64.ln();
        assert_relative_eq!(
            lognormal_fragility(60.0, mu, 0.4).unwrap(),
            0.5,
            epsilon = 1e-12
        );
    }

    #[test]
    fn lognormal_zero_wind() {
        assert_eq!(lognormal_fragility(0.0, 3.0, 0.4).unwrap(), 0.0);
    }

    #[test]
    fn lognormal_example() {
        assert_relative_eq!(
            lognormal_fragility(80.0, 60.0_f64.ln(), 0.4).unwrap(),
            0.7639927462288465,
            epsilon = 1e-9
        );
    }

    #[test]
    fn lognormal_rejects_bad_sigma() {
        assert!(lognormal_fragility(10.0, 3.0, 0.0).is_err());
        assert!(lognormal_fragility(10.0, 3.0, -1.0).is_err());
    }

    #[test]
    fn tower_chain_examples() {
        let p_half = LognormalParams {
            mu: 50.0_f64.ln(),
            sigma: 0.3,
        };
        // single tower equals the per-tower probability
        assert_relative_eq!(
            transmission_element_fragility(50.0, 1, p_half).unwrap(),
            0.5,
            epsilon = 1e-12
        );
        assert_relative_eq!(
            transmission_element_fragility(50.0, 2, p_half).unwrap(),
            0.75,
            epsilon = 1e-12
        );
        assert!(transmission_element_fragility(50.0, 0, p_half).is_err());
    }

    #[test]
    fn line_piecewise() {
        assert_eq!(line_fragility(0.0, 30.0, 60.0).unwrap(), 0.0);
        assert_eq!(line_fragility(20.0, 30.0, 60.0).unwrap(), 0.01);
        assert_eq!(line_fragility(30.0, 30.0, 60.0).unwrap(), 0.01);
        assert_relative_eq!(line_fragility(45.0, 30.0, 60.0).unwrap(), 0.505);
        assert_eq!(line_fragility(60.0, 30.0, 60.0).unwrap(), 1.0);
        assert_eq!(line_fragility(80.0, 30.0, 60.0).unwrap(), 1.0);
        assert!(line_fragility(45.0, 60.0, 30.0).is_err());
    }

    #[test]
    fn conductor_examples() {
        assert_eq!(conductor_fragility(0.0), 0.0);
        assert_relative_eq!(conductor_fragility(50.0), 0.004920754705237211, epsilon = 1e-9);
        assert_relative_eq!(conductor_fragility(100.0), 0.1775374537801015, epsilon = 1e-9);
    }

    proptest! {
        #[test]
        fn all_fragilities_monotone_and_bounded(w1 in 0.0..200.0f64, w2 in 0.0..200.0f64) {
            let (lo, hi) = if w1 <= w2 { (w1, w2) } else { (w2, w1) };
            let tower = LognormalParams { mu: 55.0_f64.ln(), sigma: 0.25 };
            let fns: Vec<(f64, f64)> = vec![
                (
                    lognormal_fragility(lo, 70.0_f64.ln(), 0.35).unwrap(),
                    lognormal_fragility(hi, 70.0_f64.ln(), 0.35).unwrap(),
                ),
                (
                    transmission_element_fragility(lo, 7, tower).unwrap(),
                    transmission_element_fragility(hi, 7, tower).unwrap(),
                ),
                (
                    line_fragility(lo, 30.0, 60.0).unwrap(),
                    line_fragility(hi, 30.0, 60.0).unwrap(),
                ),
                (conductor_fragility(lo), conductor_fragility(hi)),
            ];
            for (a, b) in fns {
                prop_assert!(a <= b + 1e-15);
                prop_assert!((0.0..=1.0).contains(&a));
                prop_assert!((0.0..=1.0).contains(&b));
            }
        }
    }
}
