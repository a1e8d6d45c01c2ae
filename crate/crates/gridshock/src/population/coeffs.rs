//! Published regression coefficients and the generic model carriers.
//!
//! The registry defaults hold the survey-estimated values verbatim and can be
//! overridden from a JSON config.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Sigmoid of a linear predictor `intercept + coeffs . covariates`.
pub fn logistic_response(intercept: f64, coeffs: &[f64], covariates: &[f64]) -> Result<f64> {
    if coeffs.len() != covariates.len() {
        return Err(Error::ArityMismatch {
            coeffs: coeffs.len(),
            covariates: covariates.len(),
        });
    }
    let predictor: f64 = intercept
        + coeffs
            .iter()
            .zip(covariates)
            .map(|(c, x)| c * x)
            .sum::<f64>();
    Ok(sigmoid(predictor))
}

/// Cumulative-logit ordinal model over 5 levels: P(Y <= j) = sigmoid(a_j + bx).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OrdinalModel {
    pub intercepts: [f64; 4],
    pub coeffs: Vec<f64>,
}

impl OrdinalModel {
    pub fn validate(&self) -> Result<()> {
        if self.intercepts.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::NonIncreasingIntercepts);
        }
        Ok(())
    }

    /// P(Y <= j) for j = 1..=4.
    pub fn cumulative(&self, covariates: &[f64]) -> Result<[f64; 4]> {
        if self.coeffs.len() != covariates.len() {
            return Err(Error::ArityMismatch {
                coeffs: self.coeffs.len(),
                covariates: covariates.len(),
            });
        }
        self.validate()?;
        let shift: f64 = self
            .coeffs
            .iter()
            .zip(covariates)
            .map(|(c, x)| c * x)
            .sum();
        let mut cum = [0.0; 4];
        for (j, &a) in self.intercepts.iter().enumerate() {
            cum[j] = sigmoid(a + shift);
        }
        Ok(cum)
    }

    /// Per-level probabilities from differences of the cumulative curve.
    pub fn pmf(&self, covariates: &[f64]) -> Result<[f64; 5]> {
        let cum = self.cumulative(covariates)?;
        Ok([
            cum[0],
            cum[1] - cum[0],
            cum[2] - cum[1],
            cum[3] - cum[2],
            1.0 - cum[3],
        ])
    }

    /// Smallest level j with u < P(Y <= j), else 5.
    pub fn sample(&self, covariates: &[f64], u: f64) -> Result<u8> {
        let cum = self.cumulative(covariates)?;
        for (j, &c) in cum.iter().enumerate() {
            if u < c {
                return Ok(j as u8 + 1);
            }
        }
        Ok(5)
    }
}

/// Standalone ordinal sampler matching the operation contract.
pub fn ordinal_sample(
    intercepts: [f64; 4],
    coeffs: &[f64],
    covariates: &[f64],
    u: f64,
) -> Result<u8> {
    OrdinalModel {
        intercepts,
        coeffs: coeffs.to_vec(),
    }
    .sample(covariates, u)
}

/// Poisson-regression mean of the expected outage duration, days.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExpectationCoeffs {
    pub intercept: f64,
    pub log_forewarning: f64,
    pub informed: f64,
    pub owner: f64,
    pub elderly: f64,
    pub mobility: f64,
    pub flood_zone: f64,
}

impl Default for ExpectationCoeffs {
    fn default() -> Self {
        ExpectationCoeffs {
            intercept: 1.74700,
            log_forewarning: 0.30471,
            informed: 0.12369,
            owner: -0.27720,
            elderly: -0.21065,
            mobility: -0.51210,
            flood_zone: -0.28153,
        }
    }
}

impl ExpectationCoeffs {
    /// mu = exp[b0 + b1 ln(x_f + 1) + ...], evaluated exactly.
    pub fn expected_outage(
        &self,
        forewarning_days: f64,
        informed: f64,
        owner: f64,
        elderly: f64,
        mobility: f64,
        flood_zone: f64,
    ) -> f64 {
        (self.intercept
            + self.log_forewarning * (forewarning_days + 1.0).ln()
            + self.informed * informed
            + self.owner * owner
            + self.elderly * elderly
            + self.mobility * mobility
            + self.flood_zone * flood_zone)
            .exp()
    }
}

/// Generator-purchase logistic model (renter coded 1).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SubstituteCoeffs {
    pub intercept: f64,
    pub income: f64,
    pub renter: f64,
    pub log_expectation: f64,
    pub self_efficacy: f64,
}

impl Default for SubstituteCoeffs {
    fn default() -> Self {
        SubstituteCoeffs {
            intercept: -2.53950,
            income: 0.07416,
            renter: -0.93270,
            log_expectation: 0.48647,
            self_efficacy: 0.26128,
        }
    }
}

impl SubstituteCoeffs {
    pub fn probability(
        &self,
        income: f64,
        renter: f64,
        expectation_days: f64,
        self_efficacy: f64,
    ) -> f64 {
        logistic_response(
            self.intercept,
            &[self.income, self.renter, self.log_expectation, self.self_efficacy],
            &[income, renter, (expectation_days + 1.0).ln(), self_efficacy],
        )
        .expect("fixed arity")
    }
}

/// Preparedness logistic model; its linear predictor also carries the
/// peer-effect term during adoption.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PreparednessCoeffs {
    pub intercept: f64,
    pub vehicle_missing: f64,
    pub experience: f64,
    pub elderly: f64,
    pub renter: f64,
    pub forewarning: f64,
    pub supermarket_distance: f64,
    pub self_efficacy: f64,
}

impl Default for PreparednessCoeffs {
    fn default() -> Self {
        PreparednessCoeffs {
            intercept: 1.89292,
            vehicle_missing: -0.58174,
            experience: -1.11299,
            elderly: 0.44445,
            renter: -0.60578,
            forewarning: 0.08802,
            supermarket_distance: -0.02362,
            self_efficacy: 0.50834,
        }
    }
}

impl PreparednessCoeffs {
    #[allow(clippy::too_many_arguments)]
    pub fn predictor(
        &self,
        vehicle_missing: f64,
        experience: f64,
        elderly: f64,
        renter: f64,
        forewarning_days: f64,
        supermarket_distance: f64,
        self_efficacy: f64,
    ) -> f64 {
        self.intercept
            + self.vehicle_missing * vehicle_missing
            + self.experience * experience
            + self.elderly * elderly
            + self.renter * renter
            + self.forewarning * forewarning_days
            + self.supermarket_distance * supermarket_distance
            + self.self_efficacy * self_efficacy
    }
}

/// Prior-disaster-experience logistic model.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperienceCoeffs {
    pub intercept: f64,
    pub state_duration: f64,
    pub minority: f64,
    pub elderly: f64,
    pub child: f64,
}

impl Default for ExperienceCoeffs {
    fn default() -> Self {
        ExperienceCoeffs {
            intercept: 1.371844,
            state_duration: 0.020162,
            minority: -0.656271,
            elderly: -0.366558,
            child: 0.272127,
        }
    }
}

impl ExperienceCoeffs {
    pub fn probability(
        &self,
        state_duration_years: f64,
        minority: f64,
        elderly: f64,
        child: f64,
    ) -> f64 {
        logistic_response(
            self.intercept,
            &[self.state_duration, self.minority, self.elderly, self.child],
            &[state_duration_years, minority, elderly, child],
        )
        .expect("fixed arity")
    }
}

/// Accelerated-failure-time tolerance model, days.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ToleranceCoeffs {
    pub intercept: f64,
    pub substitute: f64,
    pub need: f64,
    pub preparedness: f64,
}

impl Default for ToleranceCoeffs {
    fn default() -> Self {
        ToleranceCoeffs {
            intercept: 1.7762,
            substitute: -0.5130,
            need: 0.1827,
            preparedness: 0.2664,
        }
    }
}

impl ToleranceCoeffs {
    /// Deterministic mean tolerance (AFT error term set to 0).
    pub fn tolerance_days(&self, substitute: f64, need: f64, preparedness: f64) -> f64 {
        (self.intercept
            + self.substitute * substitute
            + self.need * need
            + self.preparedness * preparedness)
            .exp()
    }
}

fn default_need_model() -> OrdinalModel {
    OrdinalModel {
        intercepts: [0.44441, 1.79242, 3.344, 4.992],
        // minority, mobility, child under 10, medical
        coeffs: vec![0.89646, -0.51914, 0.21971, -0.30319],
    }
}

fn default_self_efficacy_model() -> OrdinalModel {
    OrdinalModel {
        intercepts: [-3.191, -1.792, -0.551, 1.458],
        // owner, medical, chronic disease, social capital
        coeffs: vec![0.339, -0.245, -0.237, 0.217],
    }
}

/// Registry of every behavioral model's coefficients.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct CoefficientSet {
    pub expectation: ExpectationCoeffs,
    pub need: OrdinalModel,
    pub self_efficacy: OrdinalModel,
    pub substitute: SubstituteCoeffs,
    pub preparedness: PreparednessCoeffs,
    pub experience: ExperienceCoeffs,
    pub tolerance: ToleranceCoeffs,
}

impl Default for CoefficientSet {
    fn default() -> Self {
        CoefficientSet {
            expectation: ExpectationCoeffs::default(),
            need: default_need_model(),
            self_efficacy: default_self_efficacy_model(),
            substitute: SubstituteCoeffs::default(),
            preparedness: PreparednessCoeffs::default(),
            experience: ExperienceCoeffs::default(),
            tolerance: ToleranceCoeffs::default(),
        }
    }
}

impl CoefficientSet {
    pub fn validate(&self) -> Result<()> {
        self.need.validate()?;
        self.self_efficacy.validate()
    }

    pub fn load_json(path: &Path) -> Result<CoefficientSet> {
        let file = std::fs::File::open(path)?;
        let set: CoefficientSet = serde_json::from_reader(std::io::BufReader::new(file))?;
        set.validate()?;
        Ok(set)
    }
}
