//! Compare restoration strategies on the same damage draw: who gets power
//! back first under component-, population-, and vulnerability-ordered
//! repair priorities.

use gridshock::grid::{
    build_synthetic_grid, sample_damage, DamageMode, FragilityParams, GridConfig,
};
use gridshock::hazard::{parametric_wind_series, HurricaneSpec};
use gridshock::presets;
use gridshock::restoration::{
    plan_priorities, schedule_repairs, RepairTable, ResourceProfile, Strategy,
};
use gridshock::seed::{replication_seed, stream_rng, Stream};

fn main() -> gridshock::Result<()> {
    let tracts = presets::harris_like_tracts();
    let seed = replication_seed(7, 0);

    let mut grid_rng = stream_rng(seed, Stream::Grid);
    let grid = build_synthetic_grid(&tracts, &GridConfig::default(), &mut grid_rng)?;
    let spec = HurricaneSpec::straight_track(4, &tracts, 24)?;
    let mut wind_rng = stream_rng(seed, Stream::Wind);
    let field = parametric_wind_series(&spec, &tracts, &mut wind_rng)?;
    let mut damage_rng = stream_rng(seed, Stream::Damage);
    let damage = sample_damage(
        &grid,
        &field,
        &FragilityParams::default(),
        DamageMode::PeakWind,
        &mut damage_rng,
    )?;
    println!("damaged components: {}\n", damage.n_failed());

    let table = RepairTable::default();
    let profile = ResourceProfile::default();
    for strategy in [Strategy::Component, Strategy::Population, Strategy::Svi] {
        // identical repair-duration draws per strategy: same stream, fresh rng
        let mut rng = stream_rng(seed, Stream::Repair);
        let priorities = plan_priorities(strategy, &grid, &damage, &tracts, &mut rng);
        let mut rng = stream_rng(seed, Stream::Repair);
        let schedule = schedule_repairs(&grid, &damage, &priorities, &table, &profile, &mut rng)?;
        // hour at which the first and last substation repair completes
        let sub_ends: Vec<f64> = schedule
            .tasks
            .iter()
            .filter(|t| t.kind.label().starts_with("substation"))
            .map(|t| t.end_h)
            .collect();
        let first_sub = sub_ends.iter().cloned().fold(f64::INFINITY, f64::min);
        let last_sub = sub_ends.iter().cloned().fold(0.0, f64::max);
        println!(
            "{:<10}  makespan {:>6.1} h ({:>4.1} d) | substations done {:>5.1}..{:>6.1} h | {} tasks",
            strategy.label(),
            schedule.makespan_h(),
            schedule.makespan_h() / 24.0,
            first_sub,
            last_sub,
            schedule.tasks.len()
        );
    }
    println!("\nAll strategies repair every damaged component; they differ only in order.");
    Ok(())
}
