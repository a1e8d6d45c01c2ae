//! Monte Carlo batches with the confidence-interval stopping rule.

use gridshock::engine::{run_monte_carlo, Reps, Scenario, StoppingRule};

fn main() -> gridshock::Result<()> {
    let scenario = Scenario {
        n_households: 800,
        ..Scenario::default()
    };
    let inputs = scenario.load_inputs()?;

    // Auto mode: replicate until the t-based CI half-width of mean peak
    // hardship falls within rel_err of the mean.
    let rule = StoppingRule::default();
    let agg = run_monte_carlo(&scenario, &inputs, &rule, Reps::Auto, 8)?;
    println!(
        "auto: stopped after {} replications (converged: {})",
        agg.n_replications, agg.converged
    );
    println!(
        "  peak hardship {:.4} +/- {:.4} ({}% CI, target half-width {:.4})",
        agg.peak_hardship_mean,
        agg.peak_hardship_ci_half,
        (rule.confidence * 100.0) as u32,
        rule.rel_err * agg.peak_hardship_mean
    );

    // A fixed budget that is too small reports non-convergence but still
    // returns the aggregate (and the CLI still exits 0, with a warning).
    let small = StoppingRule {
        rel_err: 0.01,
        ..StoppingRule::default()
    };
    let agg = run_monte_carlo(&scenario, &inputs, &small, Reps::Fixed(5), 8)?;
    println!(
        "\nfixed 5 reps at rel_err 0.01: converged = {}, warning = {:?}",
        agg.converged, agg.warning
    );
    Ok(())
}
