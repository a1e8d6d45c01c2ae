//! Sweep a small scenario grid and tabulate deltas against the first cell.

use gridshock::engine::Scenario;
use gridshock::report::{run_sweep, SweepSpec};
use gridshock::restoration::Strategy;

fn main() -> gridshock::Result<()> {
    let spec = SweepSpec {
        base: Scenario {
            n_households: 800,
            ..Scenario::default()
        },
        forewarning_days: vec![7, 14],
        strategies: vec![Strategy::Component, Strategy::Svi],
        replications: 5,
        ..SweepSpec::default()
    };
    let (_aggregates, table) = run_sweep(&spec, 8)?;

    let col = |name: &str| table.columns.iter().position(|c| c == name).unwrap();
    let peak = col("peak_hardship");
    let d_peak = col("delta_peak_hardship");
    let d_min = col("delta_p_racial_minority");
    println!(
        "{:<42} {:>6} {:>8} {:>16}",
        "scenario", "peak", "d(peak)", "d(p minority)"
    );
    for row in &table.rows {
        println!(
            "{:<42} {:>6.3} {:>8.3} {:>16.3}",
            row.scenario, row.values[peak], row.values[d_peak], row.values[d_min]
        );
    }
    Ok(())
}
