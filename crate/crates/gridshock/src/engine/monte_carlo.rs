//! Replication batches with a confidence-interval stopping rule.

use std::collections::BTreeMap;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};

use super::{group_tallies, run_replication, RunResult, Scenario, ScenarioInputs};

/// Stop once the t-based CI half-width of mean peak hardship is within
/// `rel_err` of the mean.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default)]
pub struct StoppingRule {
    pub confidence: f64,
    pub rel_err: f64,
    pub min_rep: usize,
    pub max_rep: usize,
}

impl Default for StoppingRule {
    fn default() -> Self {
        StoppingRule {
            confidence: 0.95,
            rel_err: 0.05,
            min_rep: 10,
            max_rep: 1000,
        }
    }
}

impl StoppingRule {
    pub fn validate(&self) -> Result<()> {
        let ok = self.rel_err > 0.0
            && (0.0..1.0).contains(&self.confidence)
            && self.min_rep >= 2
            && self.max_rep >= self.min_rep;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidScenario(
                "stopping rule needs rel_err > 0, confidence in (0,1), min_rep >= 2".into(),
            ))
        }
    }
}

/// Two-sided t confidence-interval half-width of the sample mean; 0 when
/// fewer than two values or zero variance.
pub fn ci_half_width(values: &[f64], confidence: f64) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    if var <= 0.0 {
        return 0.0;
    }
    let t = StudentsT::new(0.0, 1.0, (n - 1) as f64)
        .expect("dof >= 1")
        .inverse_cdf(0.5 + confidence / 2.0);
    t * (var / n as f64).sqrt()
}

/// First prefix length n >= min_rep at which the rule is satisfied. The scan
/// is sequential in replication order, so the answer does not depend on how
/// replications were batched across workers.
pub fn stopping_n(peaks: &[f64], rule: &StoppingRule) -> Option<usize> {
    for n in rule.min_rep..=peaks.len() {
        let prefix = &peaks[..n];
        let mean = prefix.iter().sum::<f64>() / n as f64;
        if mean == 0.0 {
            return Some(n);
        }
        if ci_half_width(prefix, rule.confidence) <= rule.rel_err * mean {
            return Some(n);
        }
    }
    None
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupTally {
    pub hardship: usize,
    pub size: usize,
}

/// Per-replication summary kept in the aggregate.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReplicationSummary {
    pub rep: u64,
    pub peak_hardship: f64,
    pub full_restoration_day: u32,
    pub n_households: usize,
    pub n_ever_hardship: usize,
    pub informed_fraction: f64,
    pub prepared_fraction: f64,
    pub substitute_fraction: f64,
    pub daily_hardship: Vec<f64>,
    pub damage_counts: BTreeMap<String, usize>,
    pub groups: BTreeMap<String, GroupTally>,
}

impl ReplicationSummary {
    pub fn from_result(rep: u64, result: &RunResult) -> ReplicationSummary {
        let n = result.households.len();
        let frac = |count: usize| count as f64 / n as f64;
        ReplicationSummary {
            rep,
            peak_hardship: result.peak_hardship(),
            full_restoration_day: result.full_restoration_day,
            n_households: n,
            n_ever_hardship: result.households.iter().filter(|h| h.hardship).count(),
            informed_fraction: frac(result.households.iter().filter(|h| h.informed).count()),
            prepared_fraction: frac(result.households.iter().filter(|h| h.prepared).count()),
            substitute_fraction: frac(result.households.iter().filter(|h| h.substitute).count()),
            daily_hardship: result.daily_hardship.clone(),
            damage_counts: result.damage_counts.clone(),
            groups: group_tallies(&result.households),
        }
    }
}

/// Per-day statistics over replications.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DailyStats {
    pub day: usize,
    pub mean: f64,
    pub ci_half: f64,
    pub q25: f64,
    pub q75: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Aggregate {
    pub scenario_name: String,
    pub master_seed: u64,
    pub n_households: usize,
    pub n_replications: usize,
    pub converged: bool,
    /// Set when max_rep was reached before convergence.
    pub warning: Option<String>,
    pub confidence: f64,
    pub rel_err: f64,
    pub peak_hardship_mean: f64,
    pub peak_hardship_ci_half: f64,
    pub full_restoration_day_mean: f64,
    pub daily: Vec<DailyStats>,
    pub replications: Vec<ReplicationSummary>,
}

fn percentile(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return 0.0;
    }
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    if lo == hi {
        sorted[lo]
    } else {
        sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
    }
}

impl Aggregate {
    pub fn from_replications(
        scenario: &Scenario,
        rule: &StoppingRule,
        replications: Vec<ReplicationSummary>,
        converged: bool,
    ) -> Aggregate {
        let n = replications.len();
        let peaks: Vec<f64> = replications.iter().map(|r| r.peak_hardship).collect();
        let peak_mean = peaks.iter().sum::<f64>() / n.max(1) as f64;
        let restoration_mean = replications
            .iter()
            .map(|r| r.full_restoration_day as f64)
            .sum::<f64>()
            / n.max(1) as f64;
        // daily series padded with zeros past each replication's horizon
        let n_days = replications
            .iter()
            .map(|r| r.daily_hardship.len())
            .max()
            .unwrap_or(0);
        let daily = (0..n_days)
            .map(|day| {
                let values: Vec<f64> = replications
                    .iter()
                    .map(|r| r.daily_hardship.get(day).copied().unwrap_or(0.0))
                    .collect();
                let mean = values.iter().sum::<f64>() / n as f64;
                let ci_half = ci_half_width(&values, rule.confidence);
                let mut sorted = values;
                sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
                DailyStats {
                    day,
                    mean,
                    ci_half,
                    q25: percentile(&sorted, 0.25),
                    q75: percentile(&sorted, 0.75),
                }
            })
            .collect();
        Aggregate {
            scenario_name: scenario.name.clone(),
            master_seed: scenario.seed,
            n_households: scenario.n_households,
            n_replications: n,
            converged,
            warning: (!converged).then(|| {
                format!("stopping rule not met after {n} replications")
            }),
            confidence: rule.confidence,
            rel_err: rule.rel_err,
            peak_hardship_mean: peak_mean,
            peak_hardship_ci_half: ci_half_width(&peaks, rule.confidence),
            full_restoration_day_mean: restoration_mean,
            daily,
            replications,
        }
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path)?;
        serde_json::to_writer_pretty(std::io::BufWriter::new(file), self)?;
        Ok(())
    }

    pub fn load_json(path: &Path) -> Result<Aggregate> {
        let file = std::fs::File::open(path)?;
        Ok(serde_json::from_reader(std::io::BufReader::new(file))?)
    }
}

/// Replication count policy for one run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reps {
    /// Replicate until the stopping rule is met (or max_rep).
    Auto,
    Fixed(usize),
}

impl std::str::FromStr for Reps {
    type Err = Error;

    fn from_str(s: &str) -> Result<Reps> {
        if s == "auto" {
            return Ok(Reps::Auto);
        }
        s.parse::<usize>()
            .map(Reps::Fixed)
            .map_err(|_| Error::InvalidScenario(format!("reps must be 'auto' or a count, got {s:?}")))
    }
}

/// Run replications in parallel until the stopping rule (auto) or a fixed
/// count is reached. The aggregate is identical for any worker count: per
/// replication seeds derive from the master seed, and the stopping scan walks
/// replication indices in order regardless of batching.
pub fn run_monte_carlo(
    scenario: &Scenario,
    inputs: &ScenarioInputs,
    rule: &StoppingRule,
    reps: Reps,
    workers: usize,
) -> Result<Aggregate> {
    rule.validate()?;
    scenario.validate()?;
    let workers = workers.max(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidScenario(format!("thread pool: {e}")))?;

    let run_batch = |range: std::ops::Range<u64>| -> Result<Vec<ReplicationSummary>> {
        pool.install(|| {
            range
                .into_par_iter()
                .map(|rep| {
                    run_replication(scenario, inputs, scenario.seed, rep)
                        .map(|r| ReplicationSummary::from_result(rep, &r))
                })
                .collect()
        })
    };

    match reps {
        Reps::Fixed(k) => {
            let summaries = run_batch(0..k as u64)?;
            let peaks: Vec<f64> = summaries.iter().map(|r| r.peak_hardship).collect();
            let converged = stopping_n(&peaks, rule).is_some();
            Ok(Aggregate::from_replications(
                scenario, rule, summaries, converged,
            ))
        }
        Reps::Auto => {
            let mut summaries: Vec<ReplicationSummary> = Vec::new();
            loop {
                let start = summaries.len() as u64;
                let batch = workers.max(4).min(rule.max_rep - summaries.len());
                summaries.extend(run_batch(start..start + batch as u64)?);
                let peaks: Vec<f64> = summaries.iter().map(|r| r.peak_hardship).collect();
                if let Some(n) = stopping_n(&peaks, rule) {
                    summaries.truncate(n);
                    return Ok(Aggregate::from_replications(scenario, rule, summaries, true));
                }
                if summaries.len() >= rule.max_rep {
                    summaries.truncate(rule.max_rep);
                    return Ok(Aggregate::from_replications(
                        scenario, rule, summaries, false,
                    ));
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, Normal};

    #[test]
    fn half_width_matches_hand_computation() {
        // n = 4, sd = 1, t_{0.975,3} = 3.182446...
        let values = [1.0, 2.0, 3.0, 4.0];
        let half = ci_half_width(&values, 0.95);
        let sd = (5.0f64 / 3.0).sqrt();
        let t = 3.182446305284263;
        assert!((half - t * sd / 2.0).abs() < 1e-9, "half {half}");
    }

    #[test]
    fn degenerate_stream_stops_at_min_rep() {
        let peaks = vec![0.5; 100];
        let rule = StoppingRule::default();
        assert_eq!(stopping_n(&peaks, &rule), Some(rule.min_rep));
    }

    #[test]
    fn zero_mean_stops_at_min_rep() {
        let peaks = vec![0.0; 100];
        assert_eq!(stopping_n(&peaks, &StoppingRule::default()), Some(10));
    }

    #[test]
    fn synthetic_stream_matches_offline_rule() {
        // independent re-implementation of the scan on the same draws
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let normal = Normal::new(0.5, 0.05).unwrap();
        let peaks: Vec<f64> = (0..500).map(|_| normal.sample(&mut rng)).collect();
        let rule = StoppingRule::default();
        let offline = (rule.min_rep..=peaks.len()).find(|&n| {
            let v = &peaks[..n];
            let mean = v.iter().sum::<f64>() / n as f64;
            let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
            let t = StudentsT::new(0.0, 1.0, (n - 1) as f64)
                .unwrap()
                .inverse_cdf(0.975);
            t * (var / n as f64).sqrt() <= 0.05 * mean
        });
        assert!(offline.is_some());
        assert_eq!(stopping_n(&peaks, &rule), offline);
    }

    #[test]
    fn high_variance_stream_never_stops_early() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let peaks: Vec<f64> = (0..20)
            .map(|_| if rng.gen::<f64>() < 0.5 { 0.0 } else { 1.0 })
            .collect();
        // relative half-width of a fair Bernoulli at n = 20 is far above 5%
        assert_eq!(stopping_n(&peaks, &StoppingRule::default()), None);
    }

    fn tiny_scenario() -> Scenario {
        Scenario {
            n_households: 150,
            forewarning_days: 2,
            ..Scenario::default()
        }
    }

    #[test]
    fn worker_count_does_not_change_aggregate() {
        let scenario = tiny_scenario();
        let inputs = scenario.load_inputs().unwrap();
        let rule = StoppingRule {
            min_rep: 3,
            max_rep: 6,
            ..StoppingRule::default()
        };
        let a = run_monte_carlo(&scenario, &inputs, &rule, Reps::Auto, 1).unwrap();
        let b = run_monte_carlo(&scenario, &inputs, &rule, Reps::Auto, 8).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    #[test]
    fn fixed_reps_runs_exactly_k() {
        let scenario = tiny_scenario();
        let inputs = scenario.load_inputs().unwrap();
        let agg =
            run_monte_carlo(&scenario, &inputs, &StoppingRule::default(), Reps::Fixed(4), 2)
                .unwrap();
        assert_eq!(agg.n_replications, 4);
        for (i, r) in agg.replications.iter().enumerate() {
            assert_eq!(r.rep, i as u64);
        }
    }

    #[test]
    fn non_convergence_sets_warning_not_error() {
        let scenario = tiny_scenario();
        let inputs = scenario.load_inputs().unwrap();
        let rule = StoppingRule {
            rel_err: 1e-9,
            min_rep: 2,
            max_rep: 4,
            ..StoppingRule::default()
        };
        let agg = run_monte_carlo(&scenario, &inputs, &rule, Reps::Auto, 2).unwrap();
        assert!(!agg.converged);
        assert!(agg.warning.is_some());
        assert_eq!(agg.n_replications, 4);
    }

    #[test]
    fn group_sizes_partition_population() {
        let scenario = tiny_scenario();
        let inputs = scenario.load_inputs().unwrap();
        let agg =
            run_monte_carlo(&scenario, &inputs, &StoppingRule::default(), Reps::Fixed(2), 2)
                .unwrap();
        for r in &agg.replications {
            let g = &r.groups["racial_minority"];
            let ng = &r.groups["non_racial_minority"];
            assert_eq!(g.size + ng.size, r.n_households);
            assert_eq!(g.hardship + ng.hardship, r.n_ever_hardship);
        }
    }

    #[test]
    fn reps_parse() {
        assert_eq!("auto".parse::<Reps>().unwrap(), Reps::Auto);
        assert_eq!("25".parse::<Reps>().unwrap(), Reps::Fixed(25));
        assert!("sometimes".parse::<Reps>().is_err());
    }
}
