//! Equity metrics, scenario comparison, sweeps, and artifact export.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::diffusion::NetworkKind;
use crate::engine::{ci_half_width, run_monte_carlo, Aggregate, Reps, Scenario, StoppingRule};
use crate::error::{Error, Result};
use crate::population::GROUP_ATTRIBUTES;
use crate::restoration::Strategy;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Csv,
    Json,
}

impl FromStr for ExportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<ExportFormat> {
        match s {
            "csv" => Ok(ExportFormat::Csv),
            "json" => Ok(ExportFormat::Json),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}

/// Hardship probability of one side of a binary split, summarized over
/// replications.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupSide {
    pub probability_mean: f64,
    pub probability_ci_half: f64,
    pub mean_size: f64,
    /// True when the group was empty in every replication; the probability
    /// is then undefined and reported as 0.
    pub undefined: bool,
}

/// Hardship probabilities for a binary attribute and its complement.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupStats {
    pub attribute: String,
    pub group: GroupSide,
    pub complement: GroupSide,
    /// group mean minus complement mean.
    pub absolute_gap: f64,
    /// absolute gap over the complement mean (0 when that mean is 0).
    pub relative_gap: f64,
}

fn side_stats(agg: &Aggregate, key: &str, confidence: f64) -> Result<GroupSide> {
    let mut probs = Vec::with_capacity(agg.replications.len());
    let mut sizes = 0usize;
    for rep in &agg.replications {
        let tally = rep
            .groups
            .get(key)
            .ok_or_else(|| Error::UnknownGroup(key.to_string()))?;
        sizes += tally.size;
        if tally.size > 0 {
            probs.push(tally.hardship as f64 / tally.size as f64);
        }
    }
    let undefined = probs.is_empty();
    let mean = if undefined {
        0.0
    } else {
        probs.iter().sum::<f64>() / probs.len() as f64
    };
    Ok(GroupSide {
        probability_mean: mean,
        probability_ci_half: ci_half_width(&probs, confidence),
        mean_size: sizes as f64 / agg.replications.len().max(1) as f64,
        undefined,
    })
}

/// Probability of ever experiencing hardship for one attribute split:
/// per replication the in-group fraction, summarized over replications.
pub fn group_hardship_probability(agg: &Aggregate, attribute: &str) -> Result<GroupStats> {
    if agg.replications.is_empty() {
        return Err(Error::InvalidScenario(
            "aggregate holds no replications".into(),
        ));
    }
    let group = side_stats(agg, attribute, agg.confidence)?;
    let complement = side_stats(agg, &format!("non_{attribute}"), agg.confidence)?;
    let absolute_gap = group.probability_mean - complement.probability_mean;
    let relative_gap = if complement.probability_mean == 0.0 {
        0.0
    } else {
        absolute_gap / complement.probability_mean
    };
    Ok(GroupStats {
        attribute: attribute.to_string(),
        group,
        complement,
        absolute_gap,
        relative_gap,
    })
}

/// One scenario's row of summary metrics.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepRow {
    pub scenario: String,
    pub values: Vec<f64>,
}

/// Scenario-grid table: one row per scenario, fixed metric columns.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepTable {
    pub columns: Vec<String>,
    pub rows: Vec<SweepRow>,
}

/// Per-scenario metrics and deltas against a named baseline scenario.
pub fn compare_scenarios(aggregates: &[Aggregate], baseline: &str) -> Result<SweepTable> {
    let base = aggregates
        .iter()
        .find(|a| a.scenario_name == baseline)
        .ok_or_else(|| Error::UnknownBaseline(baseline.to_string()))?;
    for agg in aggregates {
        if agg.n_households != base.n_households {
            return Err(Error::MismatchedPopulations(
                base.n_households,
                agg.n_households,
            ));
        }
    }
    let mut columns = vec![
        "peak_hardship".to_string(),
        "delta_peak_hardship".to_string(),
        "full_restoration_day".to_string(),
        "delta_full_restoration_day".to_string(),
    ];
    for attr in GROUP_ATTRIBUTES {
        columns.push(format!("p_{attr}"));
        columns.push(format!("delta_p_{attr}"));
    }
    let base_groups: Vec<f64> = GROUP_ATTRIBUTES
        .iter()
        .map(|attr| group_hardship_probability(base, attr).map(|g| g.group.probability_mean))
        .collect::<Result<_>>()?;
    let rows = aggregates
        .iter()
        .map(|agg| {
            let mut values = vec![
                agg.peak_hardship_mean,
                agg.peak_hardship_mean - base.peak_hardship_mean,
                agg.full_restoration_day_mean,
                agg.full_restoration_day_mean - base.full_restoration_day_mean,
            ];
            for (attr, base_p) in GROUP_ATTRIBUTES.iter().zip(&base_groups) {
                let p = group_hardship_probability(agg, attr)?.group.probability_mean;
                values.push(p);
                values.push(p - base_p);
            }
            Ok(SweepRow {
                scenario: agg.scenario_name.clone(),
                values,
            })
        })
        .collect::<Result<_>>()?;
    Ok(SweepTable { columns, rows })
}

fn table_csv(table: &SweepTable) -> String {
    let mut out = String::from("scenario");
    for c in &table.columns {
        let _ = write!(out, ",{c}");
    }
    out.push('\n');
    for row in &table.rows {
        out.push_str(&row.scenario);
        for v in &row.values {
            // Display gives the shortest representation that round-trips
            // exactly, so re-export of the same table is byte-identical.
            let _ = write!(out, ",{v}");
        }
        out.push('\n');
    }
    out
}

/// Write a sweep table as CSV or pretty JSON.
pub fn export_table(table: &SweepTable, format: ExportFormat, path: &Path) -> Result<()> {
    match format {
        ExportFormat::Csv => fs::write(path, table_csv(table))?,
        ExportFormat::Json => fs::write(path, serde_json::to_string_pretty(table)? + "\n")?,
    }
    Ok(())
}

/// Write an aggregate as full JSON or a plot-ready daily-series CSV.
pub fn export_aggregate(agg: &Aggregate, format: ExportFormat, path: &Path) -> Result<()> {
    match format {
        ExportFormat::Json => agg.write_json(path)?,
        ExportFormat::Csv => {
            let mut out = String::from("day,mean,ci_half,q25,q75\n");
            for d in &agg.daily {
                let _ = writeln!(out, "{},{},{},{},{}", d.day, d.mean, d.ci_half, d.q25, d.q75);
            }
            fs::write(path, out)?;
        }
    }
    Ok(())
}

/// Cross-product scenario grid; empty axes fall back to the base scenario's
/// value.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct SweepSpec {
    pub base: Scenario,
    pub categories: Vec<u8>,
    pub forewarning_days: Vec<u32>,
    pub strategies: Vec<Strategy>,
    pub networks: Vec<NetworkKind>,
    pub initial_teams: Vec<u32>,
    pub p_official: Vec<f64>,
    pub replications: usize,
}

impl Default for SweepSpec {
    fn default() -> Self {
        SweepSpec {
            base: Scenario::default(),
            categories: Vec::new(),
            forewarning_days: Vec::new(),
            strategies: Vec::new(),
            networks: Vec::new(),
            initial_teams: Vec::new(),
            p_official: Vec::new(),
            replications: 10,
        }
    }
}

impl SweepSpec {
    pub fn load_json(path: &Path) -> Result<SweepSpec> {
        Ok(serde_json::from_reader(fs::File::open(path)?)?)
    }

    /// Expand the grid into named scenarios. The first expansion is the
    /// sweep's baseline.
    pub fn expand(&self) -> Vec<Scenario> {
        fn axis<T: Clone>(given: &[T], base: T) -> Vec<T> {
            if given.is_empty() {
                vec![base]
            } else {
                given.to_vec()
            }
        }
        let categories = axis(&self.categories, self.base.category);
        let forewarnings = axis(&self.forewarning_days, self.base.forewarning_days);
        let strategies = axis(&self.strategies, self.base.strategy);
        let networks = axis(&self.networks, self.base.network.kind);
        let teams = axis(&self.initial_teams, self.base.resources.initial_teams);
        let p_official = axis(&self.p_official, self.base.info.p_official);
        let mut scenarios = Vec::new();
        for &cat in &categories {
            for &f in &forewarnings {
                for &strategy in &strategies {
                    for &kind in &networks {
                        for &t in &teams {
                            for &po in &p_official {
                                let mut s = self.base.clone();
                                s.category = cat;
                                s.forewarning_days = f;
                                s.strategy = strategy;
                                s.network.kind = kind;
                                s.resources.initial_teams = t;
                                s.info.p_official = po;
                                s.name = format!(
                                    "cat{cat}_f{f}_{}_{}_r{t}_po{po}",
                                    strategy.label(),
                                    kind.label()
                                );
                                scenarios.push(s);
                            }
                        }
                    }
                }
            }
        }
        scenarios
    }
}

/// Run every cell of the grid and tabulate deltas against the first cell.
pub fn run_sweep(spec: &SweepSpec, workers: usize) -> Result<(Vec<Aggregate>, SweepTable)> {
    let scenarios = spec.expand();
    let rule = StoppingRule::default();
    let mut aggregates = Vec::with_capacity(scenarios.len());
    for scenario in &scenarios {
        let inputs = scenario.load_inputs()?;
        aggregates.push(run_monte_carlo(
            scenario,
            &inputs,
            &rule,
            Reps::Fixed(spec.replications),
            workers,
        )?);
    }
    let baseline = aggregates[0].scenario_name.clone();
    let table = compare_scenarios(&aggregates, &baseline)?;
    Ok((aggregates, table))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{GroupTally, ReplicationSummary};
    use std::collections::BTreeMap;

    fn synthetic_aggregate(name: &str, n_households: usize, reps: Vec<ReplicationSummary>) -> Aggregate {
        let scenario = Scenario {
            name: name.to_string(),
            n_households,
            ..Scenario::default()
        };
        Aggregate::from_replications(&scenario, &StoppingRule::default(), reps, true)
    }

    fn rep_with_groups(rep: u64, peak: f64, groups: &[(&str, usize, usize)]) -> ReplicationSummary {
        let mut map = BTreeMap::new();
        let mut n = 0;
        let mut hard = 0;
        for &(key, hardship, size) in groups {
            map.insert(
                key.to_string(),
                GroupTally { hardship, size },
            );
            // group/complement pairs partition the population; derive the
            // totals from the minority split
            if key == "racial_minority" || key == "non_racial_minority" {
                n += size;
                hard += hardship;
            }
        }
        ReplicationSummary {
            rep,
            peak_hardship: peak,
            full_restoration_day: 20,
            n_households: n,
            n_ever_hardship: hard,
            informed_fraction: 1.0,
            prepared_fraction: 0.5,
            substitute_fraction: 0.2,
            daily_hardship: vec![0.0, peak],
            damage_counts: BTreeMap::new(),
            groups: map,
        }
    }

    fn minority_split(hard_in: usize, size_in: usize, hard_out: usize, size_out: usize) -> Vec<(&'static str, usize, usize)> {
        vec![
            ("racial_minority", hard_in, size_in),
            ("non_racial_minority", hard_out, size_out),
        ]
    }

    #[test]
    fn all_minorities_in_hardship_gap_is_one() {
        let agg = synthetic_aggregate(
            "s",
            4,
            vec![rep_with_groups(0, 0.5, &minority_split(2, 2, 0, 2))],
        );
        let stats = group_hardship_probability(&agg, "racial_minority").unwrap();
        assert_eq!(stats.group.probability_mean, 1.0);
        assert_eq!(stats.complement.probability_mean, 0.0);
        assert_eq!(stats.absolute_gap, 1.0);
    }

    #[test]
    fn symmetric_split_zero_gap() {
        let agg = synthetic_aggregate(
            "s",
            4,
            vec![rep_with_groups(0, 0.5, &minority_split(1, 2, 1, 2))],
        );
        let stats = group_hardship_probability(&agg, "racial_minority").unwrap();
        assert_eq!(stats.group.probability_mean, 0.5);
        assert_eq!(stats.complement.probability_mean, 0.5);
        assert_eq!(stats.absolute_gap, 0.0);
        assert_eq!(stats.relative_gap, 0.0);
    }

    #[test]
    fn empty_group_flagged_undefined() {
        let agg = synthetic_aggregate(
            "s",
            2,
            vec![rep_with_groups(0, 0.5, &minority_split(0, 0, 1, 2))],
        );
        let stats = group_hardship_probability(&agg, "racial_minority").unwrap();
        assert!(stats.group.undefined);
        assert!(!stats.complement.undefined);
        assert_eq!(stats.group.probability_mean, 0.0);
    }

    #[test]
    fn unknown_attribute_errors() {
        let agg = synthetic_aggregate(
            "s",
            2,
            vec![rep_with_groups(0, 0.5, &minority_split(1, 1, 0, 1))],
        );
        assert!(matches!(
            group_hardship_probability(&agg, "shoe_size"),
            Err(Error::UnknownGroup(_))
        ));
    }

    #[test]
    fn weighted_group_means_recover_overall_probability() {
        // per replication: p_in * size_in + p_out * size_out = total hardship
        let agg = synthetic_aggregate(
            "s",
            10,
            vec![
                rep_with_groups(0, 0.5, &minority_split(3, 4, 2, 6)),
                rep_with_groups(1, 0.4, &minority_split(1, 4, 4, 6)),
            ],
        );
        for rep in &agg.replications {
            let g = &rep.groups["racial_minority"];
            let c = &rep.groups["non_racial_minority"];
            let weighted = g.hardship as f64 + c.hardship as f64;
            assert_eq!(weighted as usize, rep.n_ever_hardship);
            let p_overall = rep.n_ever_hardship as f64 / rep.n_households as f64;
            let recombined = (g.hardship as f64 / g.size as f64) * g.size as f64
                + (c.hardship as f64 / c.size as f64) * c.size as f64;
            assert!((recombined / rep.n_households as f64 - p_overall).abs() < 1e-15);
        }
    }

    fn full_group_rep(rep: u64, peak: f64) -> ReplicationSummary {
        let mut r = rep_with_groups(rep, peak, &minority_split(1, 2, 1, 2));
        for attr in GROUP_ATTRIBUTES {
            r.groups.insert(attr.to_string(), GroupTally { hardship: 1, size: 2 });
            r.groups
                .insert(format!("non_{attr}"), GroupTally { hardship: 1, size: 2 });
        }
        r
    }

    #[test]
    fn compare_scenario_with_itself_zero_deltas() {
        let a = synthetic_aggregate("base", 4, vec![full_group_rep(0, 0.54)]);
        let table = compare_scenarios(std::slice::from_ref(&a), "base").unwrap();
        assert_eq!(table.rows.len(), 1);
        for (col, v) in table.columns.iter().zip(&table.rows[0].values) {
            if col.starts_with("delta_") {
                assert_eq!(*v, 0.0, "{col}");
            }
        }
    }

    #[test]
    fn compare_reports_peak_delta() {
        let a = synthetic_aggregate("base", 4, vec![full_group_rep(0, 0.54)]);
        let b = synthetic_aggregate("faster", 4, vec![full_group_rep(0, 0.47)]);
        let table = compare_scenarios(&[a, b], "base").unwrap();
        let idx = table
            .columns
            .iter()
            .position(|c| c == "delta_peak_hardship")
            .unwrap();
        assert!((table.rows[1].values[idx] - (-0.07)).abs() < 1e-12);
    }

    #[test]
    fn compare_unknown_baseline_errors() {
        let a = synthetic_aggregate("base", 4, vec![full_group_rep(0, 0.5)]);
        assert!(matches!(
            compare_scenarios(&[a], "missing"),
            Err(Error::UnknownBaseline(_))
        ));
    }

    #[test]
    fn compare_mismatched_populations_errors() {
        let a = synthetic_aggregate("base", 4, vec![full_group_rep(0, 0.5)]);
        let b = synthetic_aggregate("other", 8, vec![full_group_rep(0, 0.5)]);
        assert!(matches!(
            compare_scenarios(&[a, b], "base"),
            Err(Error::MismatchedPopulations(4, 8))
        ));
    }

    #[test]
    fn export_round_trip_and_byte_stability() {
        let a = synthetic_aggregate("base", 4, vec![full_group_rep(0, 0.54)]);
        let b = synthetic_aggregate("faster", 4, vec![full_group_rep(0, 0.47)]);
        let table = compare_scenarios(&[a, b], "base").unwrap();
        let dir = tempfile::tempdir().unwrap();
        let json = dir.path().join("table.json");
        let csv1 = dir.path().join("table1.csv");
        let csv2 = dir.path().join("table2.csv");
        export_table(&table, ExportFormat::Json, &json).unwrap();
        export_table(&table, ExportFormat::Csv, &csv1).unwrap();
        let parsed: SweepTable =
            serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
        assert_eq!(parsed.columns, table.columns);
        assert_eq!(parsed.rows.len(), table.rows.len());
        for (x, y) in parsed.rows.iter().zip(&table.rows) {
            assert_eq!(x.scenario, y.scenario);
            assert_eq!(x.values, y.values);
        }
        export_table(&parsed, ExportFormat::Csv, &csv2).unwrap();
        assert_eq!(fs::read(&csv1).unwrap(), fs::read(&csv2).unwrap());
    }

    #[test]
    fn export_empty_table_header_only() {
        let table = SweepTable {
            columns: vec!["peak_hardship".into()],
            rows: Vec::new(),
        };
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("empty.csv");
        export_table(&table, ExportFormat::Csv, &path).unwrap();
        assert_eq!(
            fs::read_to_string(&path).unwrap(),
            "scenario,peak_hardship\n"
        );
    }

    #[test]
    fn unknown_format_errors() {
        assert!(matches!(
            "yaml".parse::<ExportFormat>(),
            Err(Error::UnknownFormat(_))
        ));
        assert_eq!("csv".parse::<ExportFormat>().unwrap(), ExportFormat::Csv);
    }

    #[test]
    fn sweep_expansion_covers_cross_product() {
        let spec = SweepSpec {
            categories: vec![2, 4],
            forewarning_days: vec![7, 14],
            strategies: vec![Strategy::Component, Strategy::Svi],
            ..SweepSpec::default()
        };
        let scenarios = spec.expand();
        assert_eq!(scenarios.len(), 8);
        let names: std::collections::BTreeSet<_> =
            scenarios.iter().map(|s| s.name.clone()).collect();
        assert_eq!(names.len(), 8, "cell names must be unique");
        assert!(names
            .iter()
            .any(|n| n == "cat2_f7_component_scale_free_r800_po0.5"));
    }
}
