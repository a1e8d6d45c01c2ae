//! Synthetic grid construction from tract geometry and population.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{
    BackboneNode, Conductor, DistributionNode, Generator, Grid, Pole, Substation,
    TransmissionElement,
};
use crate::error::{Error, Result};
use crate::hazard::Tract;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct GridConfig {
    pub n_generators: usize,
    pub n_substations: usize,
    pub n_transmission: usize,
    pub customer_per_pole: u32,
    pub tower_spacing_km: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            n_generators: 8,
            n_substations: 97,
            n_transmission: 242,
            customer_per_pole: 40,
            tower_spacing_km: 0.23,
        }
    }
}

/// Largest-remainder apportionment of `total` items over tract populations.
fn apportion(tracts: &[Tract], total: usize) -> Vec<usize> {
    let pop_sum: f64 = tracts.iter().map(|t| t.population as f64).sum();
    if pop_sum == 0.0 {
        let mut out = vec![0; tracts.len()];
        for i in 0..total {
            out[i % tracts.len()] += 1;
        }
        return out;
    }
    let quotas: Vec<f64> = tracts
        .iter()
        .map(|t| total as f64 * t.population as f64 / pop_sum)
        .collect();
    let mut counts: Vec<usize> = quotas.iter().map(|q| q.floor() as usize).collect();
    let assigned: usize = counts.iter().sum();
    let mut order: Vec<usize> = (0..tracts.len()).collect();
    order.sort_by(|&a, &b| {
        let ra = quotas[a] - quotas[a].floor();
        let rb = quotas[b] - quotas[b].floor();
        rb.partial_cmp(&ra).unwrap().then(a.cmp(&b))
    });
    for &i in order.iter().take(total - assigned) {
        counts[i] += 1;
    }
    counts
}

fn dist(a: (f64, f64), b: (f64, f64)) -> f64 {
    ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt()
}

/// Build the synthetic network: substations apportioned to tract population,
/// generators in the most populated tracts, a connected transmission backbone
/// (minimum spanning tree plus shortest extra edges), and per-tract pole
/// chains fed from the nearest substation.
pub fn build_synthetic_grid(
    tracts: &[Tract],
    config: &GridConfig,
    rng: &mut impl Rng,
) -> Result<Grid> {
    if tracts.is_empty() {
        return Err(Error::EmptyTracts);
    }
    if config.n_substations == 0
        || config.n_generators == 0
        || config.customer_per_pole == 0
        || config.tower_spacing_km <= 0.0
    {
        return Err(Error::InvalidScenario(
            "grid counts and spacing must be positive".into(),
        ));
    }
    let n_nodes = config.n_generators + config.n_substations;
    if config.n_transmission < n_nodes - 1 {
        return Err(Error::CannotConnect {
            needed: config.n_transmission,
            nodes: n_nodes,
        });
    }

    // Substations: apportioned to population, jittered around the centroid.
    let sub_counts = apportion(tracts, config.n_substations);
    let mut substations = Vec::with_capacity(config.n_substations);
    for (tract_idx, &count) in sub_counts.iter().enumerate() {
        let t = &tracts[tract_idx];
        for _ in 0..count {
            substations.push(Substation {
                x_km: t.x_km + rng.gen_range(-2.0..2.0),
                y_km: t.y_km + rng.gen_range(-2.0..2.0),
                tract: tract_idx,
            });
        }
    }

    // Generators: one each in the most populated tracts.
    let mut by_pop: Vec<usize> = (0..tracts.len()).collect();
    by_pop.sort_by(|&a, &b| {
        tracts[b]
            .population
            .cmp(&tracts[a].population)
            .then(a.cmp(&b))
    });
    let mut generators = Vec::with_capacity(config.n_generators);
    for k in 0..config.n_generators {
        let tract_idx = by_pop[k % tracts.len()];
        let t = &tracts[tract_idx];
        generators.push(Generator {
            x_km: t.x_km + rng.gen_range(-2.0..2.0),
            y_km: t.y_km + rng.gen_range(-2.0..2.0),
            tract: tract_idx,
        });
    }

    // Backbone node positions: generators first, then substations.
    let pos: Vec<(f64, f64)> = generators
        .iter()
        .map(|g| (g.x_km, g.y_km))
        .chain(substations.iter().map(|s| (s.x_km, s.y_km)))
        .collect();
    let node = |i: usize| -> BackboneNode {
        if i < generators.len() {
            BackboneNode::Generator(i)
        } else {
            BackboneNode::Substation(i - generators.len())
        }
    };

    // Prim's MST, deterministic tie-break on node index.
    let n = pos.len();
    let mut in_tree = vec![false; n];
    let mut best = vec![(f64::INFINITY, usize::MAX); n]; // (dist, tree node)
    in_tree[0] = true;
    for j in 1..n {
        best[j] = (dist(pos[0], pos[j]), 0);
    }
    let mut edges: Vec<(usize, usize)> = Vec::with_capacity(config.n_transmission);
    for _ in 1..n {
        let mut pick = usize::MAX;
        for j in 0..n {
            if !in_tree[j]
                && (pick == usize::MAX
                    || best[j].0 < best[pick].0
                    || (best[j].0 == best[pick].0 && j < pick))
            {
                pick = j;
            }
        }
        edges.push((best[pick].1.min(pick), best[pick].1.max(pick)));
        in_tree[pick] = true;
        for j in 0..n {
            if !in_tree[j] {
                let d = dist(pos[pick], pos[j]);
                if d < best[j].0 {
                    best[j] = (d, pick);
                }
            }
        }
    }

    // Extra edges: shortest absent pairs until the target count.
    let extra_needed = config.n_transmission - edges.len();
    if extra_needed > 0 {
        let present: std::collections::HashSet<(usize, usize)> = edges.iter().copied().collect();
        let mut candidates: Vec<(f64, usize, usize)> = Vec::new();
        for a in 0..n {
            for b in (a + 1)..n {
                if !present.contains(&(a, b)) {
                    candidates.push((dist(pos[a], pos[b]), a, b));
                }
            }
        }
        if candidates.len() < extra_needed {
            return Err(Error::InvalidScenario(format!(
                "cannot place {} transmission edges over {} backbone nodes",
                config.n_transmission, n
            )));
        }
        candidates.sort_by(|x, y| {
            x.0.partial_cmp(&y.0)
                .unwrap()
                .then(x.1.cmp(&y.1))
                .then(x.2.cmp(&y.2))
        });
        for &(_, a, b) in candidates.iter().take(extra_needed) {
            edges.push((a, b));
        }
    }

    let transmission: Vec<TransmissionElement> = edges
        .into_iter()
        .map(|(a, b)| {
            let length_km = dist(pos[a], pos[b]);
            TransmissionElement {
                from: node(a),
                to: node(b),
                length_km,
                n_towers: ((length_km / config.tower_spacing_km).ceil() as usize).max(1),
            }
        })
        .collect();

    // Distribution: ceil(households / customer_per_pole) poles per tract,
    // chained from the nearest substation. Ties on distance break to the
    // lowest substation index.
    let mut poles = Vec::new();
    let mut conductors = Vec::new();
    let mut tract_substation = Vec::with_capacity(tracts.len());
    for (tract_idx, t) in tracts.iter().enumerate() {
        let mut nearest = 0usize;
        let mut nearest_d = f64::INFINITY;
        for (si, s) in substations.iter().enumerate() {
            let d = dist((t.x_km, t.y_km), (s.x_km, s.y_km));
            if d < nearest_d {
                nearest = si;
                nearest_d = d;
            }
        }
        tract_substation.push(nearest);
        let households = t.population;
        let k = if households == 0 {
            0
        } else {
            households.div_ceil(config.customer_per_pole) as usize
        };
        for chain_pos in 0..k {
            let pole_idx = poles.len();
            poles.push(Pole {
                tract: tract_idx,
                chain_pos,
            });
            let upstream = if chain_pos == 0 {
                DistributionNode::Substation(nearest)
            } else {
                DistributionNode::Pole(pole_idx - 1)
            };
            conductors.push(Conductor {
                tract: tract_idx,
                upstream,
                pole: pole_idx,
            });
        }
    }

    Ok(Grid {
        generators,
        substations,
        transmission,
        poles,
        conductors,
        customer_per_pole: config.customer_per_pole,
        n_tracts: tracts.len(),
        tract_substation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn harris_like_counts() {
        let tracts = presets::harris_like_tracts();
        let config = GridConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let grid = build_synthetic_grid(&tracts, &config, &mut rng).unwrap();
        assert_eq!(grid.substations.len(), 97);
        assert_eq!(grid.transmission.len(), 242);
        assert_eq!(grid.distribution_element_count(), 1433);
    }

    #[test]
    fn ceiling_pole_rule() {
        let tracts = vec![Tract {
            id: "T0".into(),
            x_km: 0.0,
            y_km: 0.0,
            population: 40,
            svi: 0.5,
            flood_zone_fraction: 0.0,
        }];
        let config = GridConfig {
            n_generators: 1,
            n_substations: 1,
            n_transmission: 1,
            ..GridConfig::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let grid = build_synthetic_grid(&tracts, &config, &mut rng).unwrap();
        assert_eq!(grid.poles.len(), 1);
        assert_eq!(grid.conductors.len(), 1);
    }

    #[test]
    fn tower_count_from_spacing() {
        assert_eq!((2.3_f64 / 0.23).ceil() as usize, 10);
        let tracts = presets::harris_like_tracts();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let grid = build_synthetic_grid(&tracts, &GridConfig::default(), &mut rng).unwrap();
        for e in &grid.transmission {
            assert_eq!(
                e.n_towers,
                ((e.length_km / 0.23).ceil() as usize).max(1)
            );
        }
    }

    #[test]
    fn too_few_transmission_edges_is_error() {
        let tracts = presets::harris_like_tracts();
        let config = GridConfig {
            n_transmission: 50,
            ..GridConfig::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(matches!(
            build_synthetic_grid(&tracts, &config, &mut rng),
            Err(Error::CannotConnect { .. })
        ));
    }

    #[test]
    fn json_round_trip() {
        let tracts = presets::harris_like_tracts();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let grid = build_synthetic_grid(&tracts, &GridConfig::default(), &mut rng).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("grid.json");
        grid.write_json(&path).unwrap();
        let loaded = Grid::load_json(&path).unwrap();
        assert_eq!(loaded.component_count(), grid.component_count());
        assert_eq!(loaded.tract_substation, grid.tract_substation);
    }
}
