//! Run artifacts: aggregate JSON plus plot-ready CSVs.

use std::path::Path;

use crate::error::Result;

use super::{Aggregate, RunResult};

/// Write `aggregate.json`, `daily_hardship.csv`, `households.csv` and
/// `damage.csv` into `dir`. Household rows come from replication 0, the
/// others summarize all replications. Output is byte-stable for equal inputs.
pub fn write_outputs(dir: &Path, aggregate: &Aggregate, first_rep: &RunResult) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    aggregate.write_json(&dir.join("aggregate.json"))?;

    let mut daily = csv::Writer::from_path(dir.join("daily_hardship.csv"))?;
    daily.write_record(["day", "mean", "ci_low", "ci_high", "q25", "q75"])?;
    for d in &aggregate.daily {
        daily.write_record([
            d.day.to_string(),
            format!("{:.6}", d.mean),
            format!("{:.6}", (d.mean - d.ci_half).max(0.0)),
            format!("{:.6}", (d.mean + d.ci_half).min(1.0)),
            format!("{:.6}", d.q25),
            format!("{:.6}", d.q75),
        ])?;
    }
    daily.flush()?;

    let mut hh = csv::Writer::from_path(dir.join("households.csv"))?;
    hh.write_record([
        "household_id",
        "tract",
        "pole",
        "income_bracket",
        "racial_minority",
        "elderly",
        "child_under_10",
        "mobility_issue",
        "medical_condition",
        "chronic_disease",
        "owner",
        "vehicle_missing",
        "social_capital",
        "flood_zone",
        "informed",
        "prepared",
        "substitute",
        "tolerance_days",
        "outage_start_h",
        "outage_end_h",
        "hardship",
    ])?;
    let flag = |b: bool| if b { "1" } else { "0" }.to_string();
    let opt = |v: Option<f64>| v.map_or(String::new(), |x| format!("{x:.3}"));
    for o in &first_rep.households {
        let h = &o.household;
        hh.write_record([
            h.id.to_string(),
            h.tract.to_string(),
            h.pole.to_string(),
            h.income_bracket.to_string(),
            flag(h.racial_minority),
            flag(h.elderly),
            flag(h.child_under_10),
            flag(h.mobility_issue),
            flag(h.medical_condition),
            flag(h.chronic_disease),
            flag(h.owner),
            flag(h.vehicle_missing),
            flag(h.social_capital),
            flag(h.flood_zone),
            flag(o.informed),
            flag(o.prepared),
            flag(o.substitute),
            format!("{:.4}", o.tolerance_days),
            opt(o.outage_start_h),
            opt(o.outage_end_h),
            flag(o.hardship),
        ])?;
    }
    hh.flush()?;

    let mut dmg = csv::Writer::from_path(dir.join("damage.csv"))?;
    dmg.write_record(["replication", "class", "count"])?;
    for r in &aggregate.replications {
        for (class, count) in &r.damage_counts {
            dmg.write_record([r.rep.to_string(), class.clone(), count.to_string()])?;
        }
    }
    dmg.flush()?;
    Ok(())
}
