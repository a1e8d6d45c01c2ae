//! Wind damage sampling and the connectivity cascade it triggers.

use std::collections::BTreeMap;

use gridshock::grid::{
    build_synthetic_grid, propagate_connectivity, sample_damage, DamageMode, FragilityParams,
    GridConfig,
};
use gridshock::hazard::{parametric_wind_series, HurricaneSpec};
use gridshock::presets;
use gridshock::seed::{replication_seed, stream_rng, Stream};

fn main() -> gridshock::Result<()> {
    let tracts = presets::harris_like_tracts();
    let seed = replication_seed(42, 0);

    let mut grid_rng = stream_rng(seed, Stream::Grid);
    let grid = build_synthetic_grid(&tracts, &GridConfig::default(), &mut grid_rng)?;
    println!(
        "grid: {} generators, {} substations, {} transmission elements, {} poles, {} conductors",
        grid.generators.len(),
        grid.substations.len(),
        grid.transmission.len(),
        grid.poles.len(),
        grid.conductors.len()
    );

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

    let mut by_class: BTreeMap<&str, usize> = BTreeMap::new();
    for (_, failure) in damage.damaged() {
        *by_class.entry(failure.kind.label()).or_default() += 1;
    }
    println!("\ndirect wind damage ({} components):", damage.n_failed());
    for (class, count) in &by_class {
        println!("  {class:<20} {count}");
    }

    // The cascade: components that survived the wind but lost their path to
    // a generator are de-energized too.
    let energized = propagate_connectivity(&grid, &damage);
    let out_poles = (0..grid.poles.len())
        .filter(|&p| !energized.pole_energized(&grid, p))
        .count();
    let failed_poles = by_class.get("pole").copied().unwrap_or(0);
    println!("\npoles directly failed      : {failed_poles}");
    println!("poles without power        : {out_poles}");
    println!(
        "poles dark via the cascade : {}",
        out_poles.saturating_sub(failed_poles)
    );
    println!(
        "energized components       : {}/{}",
        energized.n_energized(),
        grid.component_count()
    );
    Ok(())
}
