//! Hardship probability by demographic subgroup for one scenario.

use gridshock::engine::{run_monte_carlo, Reps, Scenario, StoppingRule};
use gridshock::population::GROUP_ATTRIBUTES;
use gridshock::report::group_hardship_probability;

fn main() -> gridshock::Result<()> {
    let scenario = Scenario {
        n_households: 1500,
        ..Scenario::default()
    };
    let inputs = scenario.load_inputs()?;
    let agg = run_monte_carlo(
        &scenario,
        &inputs,
        &StoppingRule::default(),
        Reps::Fixed(10),
        8,
    )?;

    println!(
        "probability of ever experiencing hardship ({} reps):\n",
        agg.n_replications
    );
    println!(
        "{:<18} {:>8} {:>10} {:>8} {:>8}",
        "attribute", "group", "complement", "abs gap", "rel gap"
    );
    for attr in GROUP_ATTRIBUTES {
        let s = group_hardship_probability(&agg, attr)?;
        println!(
            "{:<18} {:>8.3} {:>10.3} {:>8.3} {:>7.1}%",
            s.attribute,
            s.group.probability_mean,
            s.complement.probability_mean,
            s.absolute_gap,
            s.relative_gap * 100.0
        );
    }
    Ok(())
}
