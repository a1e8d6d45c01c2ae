//! Synthetic households and the fitted behavioral models: need,
//! self-efficacy, experience, expected outage, substitutes, preparedness,
//! and outage tolerance.

use gridshock::grid::{build_synthetic_grid, GridConfig};
use gridshock::population::{init_behavior, synthesize_households, CoefficientSet};
use gridshock::presets;
use gridshock::seed::{replication_seed, stream_rng, Stream};

fn main() -> gridshock::Result<()> {
    let tracts = presets::harris_like_tracts();
    let marginals = presets::harris_like_marginals(&tracts);
    let seed = replication_seed(3, 0);
    let mut grid_rng = stream_rng(seed, Stream::Grid);
    let grid = build_synthetic_grid(&tracts, &GridConfig::default(), &mut grid_rng)?;
    let mut rng = stream_rng(seed, Stream::Population);
    let population = synthesize_households(&tracts, &marginals, &grid, 5000, &mut rng)?;

    let n = population.len() as f64;
    let frac = |f: &dyn Fn(&gridshock::population::Household) -> bool| {
        population.households.iter().filter(|h| f(h)).count() as f64 / n
    };
    println!("population of {} households:", population.len());
    println!("  racial minority  {:.3}", frac(&|h| h.racial_minority));
    println!("  elderly          {:.3}", frac(&|h| h.elderly));
    println!("  owner            {:.3}", frac(&|h| h.owner));
    println!("  mobility issue   {:.3}", frac(&|h| h.mobility_issue));
    println!("  flood zone       {:.3}", frac(&|h| h.flood_zone));

    let coeffs = CoefficientSet::default();
    let states = init_behavior(&population, &coeffs, 9.0, &mut rng)?;

    let mut need_counts = [0usize; 5];
    for s in &states {
        need_counts[(s.need - 1) as usize] += 1;
    }
    println!("\nneed levels 1..5: {need_counts:?}");

    let sf = |f: &dyn Fn(&gridshock::population::BehavioralState) -> bool| {
        states.iter().filter(|s| f(s)).count() as f64 / n
    };
    println!("experienced an outage before : {:.3}", sf(&|s| s.experience));
    println!("owns a backup substitute     : {:.3}", sf(&|s| s.substitute));
    let exp_mean = states.iter().map(|s| s.expectation_days).sum::<f64>() / n;
    println!("expected outage (mean)       : {exp_mean:.2} days");

    let b = |f: bool| if f { 1.0 } else { 0.0 };
    let tol: Vec<f64> = states
        .iter()
        .map(|s| {
            coeffs
                .tolerance
                .tolerance_days(b(s.substitute), s.need as f64, b(s.prepared))
        })
        .collect();
    let mut sorted = tol.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    println!(
        "tolerance days               : min {:.1}, median {:.1}, max {:.1}",
        sorted[0],
        sorted[sorted.len() / 2],
        sorted[sorted.len() - 1]
    );
    println!(
        "  (substitute owners tolerate exp(-0.513) = {:.2}x as long)",
        (-0.513f64).exp()
    );
    Ok(())
}
