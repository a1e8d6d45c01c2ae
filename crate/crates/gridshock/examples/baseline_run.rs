//! Run the Harvey-like baseline scenario and print headline metrics.

use gridshock::engine::{run_monte_carlo, Reps, Scenario, StoppingRule};

fn main() -> gridshock::Result<()> {
    let scenario = Scenario::default();
    let inputs = scenario.load_inputs()?;
    let rule = StoppingRule::default();
    let agg = run_monte_carlo(&scenario, &inputs, &rule, Reps::Fixed(10), 8)?;

    println!("scenario            : {}", agg.scenario_name);
    println!("replications        : {}", agg.n_replications);
    println!(
        "peak hardship       : {:.3} +/- {:.3}",
        agg.peak_hardship_mean, agg.peak_hardship_ci_half
    );
    println!(
        "full restoration    : day {:.1}",
        agg.full_restoration_day_mean
    );
    let r0 = &agg.replications[0];
    println!(
        "rep 0: informed {:.2}, prepared {:.2}, substitute {:.2}, ever-hardship {}/{}",
        r0.informed_fraction,
        r0.prepared_fraction,
        r0.substitute_fraction,
        r0.n_ever_hardship,
        r0.n_households
    );
    println!("rep 0 damage counts : {:?}", r0.damage_counts);
    Ok(())
}
