//! Social-network topologies and how warnings spread over them.

use gridshock::diffusion::{
    build_social_network, step_adoption, step_information, AdoptionParams, InfoParams,
    NetworkKind, NetworkParams,
};
use gridshock::grid::{build_synthetic_grid, GridConfig};
use gridshock::population::{init_behavior, synthesize_households, CoefficientSet};
use gridshock::presets;
use gridshock::seed::{replication_seed, stream_rng, Stream};

fn main() -> gridshock::Result<()> {
    let tracts = presets::harris_like_tracts();
    let marginals = presets::harris_like_marginals(&tracts);
    let seed = replication_seed(11, 0);
    let mut grid_rng = stream_rng(seed, Stream::Grid);
    let grid = build_synthetic_grid(&tracts, &GridConfig::default(), &mut grid_rng)?;
    let mut pop_rng = stream_rng(seed, Stream::Population);
    let population = synthesize_households(&tracts, &marginals, &grid, 2000, &mut pop_rng)?;

    println!("degree statistics over {} households:\n", population.len());
    for kind in [
        NetworkKind::Random,
        NetworkKind::SmallWorld,
        NetworkKind::ScaleFree,
        NetworkKind::Distance,
    ] {
        let params = NetworkParams {
            kind,
            ..NetworkParams::default()
        };
        let mut rng = stream_rng(seed, Stream::Network);
        let net = build_social_network(&params, &population, &mut rng)?;
        let mean = 2.0 * net.n_edges() as f64 / net.n_nodes() as f64;
        println!(
            "  {:<12} {:>6} edges | mean degree {:>5.2} | max degree {:>4}",
            kind.label(),
            net.n_edges(),
            mean,
            net.max_degree()
        );
    }

    // Information and adoption over the forewarning window on the default
    // scale-free network.
    let coeffs = CoefficientSet::default();
    let forewarning = 9u32;
    let mut rng = stream_rng(seed, Stream::Network);
    let net = build_social_network(&NetworkParams::default(), &population, &mut rng)?;
    let mut states = {
        let mut rng = stream_rng(seed, Stream::Population);
        // separate rng so the network draw does not disturb behavior draws
        init_behavior(&population, &coeffs, forewarning as f64, &mut rng)?
    };
    let info = InfoParams::default();
    let adoption = AdoptionParams::default();
    let mut rng = stream_rng(seed, Stream::Diffusion);
    println!("\nday  informed  prepared  (forewarning {forewarning} days, scale-free)");
    for day in 0..forewarning {
        step_information(day, &population, &mut states, &net, &info, &mut rng)?;
        step_adoption(
            day,
            &population,
            &mut states,
            &net,
            &coeffs,
            &adoption,
            forewarning,
            &mut rng,
        )?;
        let informed = states.iter().filter(|s| s.informed).count();
        let prepared = states.iter().filter(|s| s.prepared).count();
        println!(
            "{day:>3}  {:>8.3}  {:>8.3}",
            informed as f64 / states.len() as f64,
            prepared as f64 / states.len() as f64
        );
    }
    Ok(())
}
