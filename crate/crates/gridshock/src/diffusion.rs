//! Household social networks and the daily forewarning-phase processes:
//! official/peer information spread and protective-action adoption.

use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::population::{sigmoid, BehavioralState, CoefficientSet, Population};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NetworkKind {
    Random,
    SmallWorld,
    ScaleFree,
    Distance,
}

impl NetworkKind {
    pub fn label(&self) -> &'static str {
        match self {
            NetworkKind::Random => "random",
            NetworkKind::SmallWorld => "small_world",
            NetworkKind::ScaleFree => "scale_free",
            NetworkKind::Distance => "distance",
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct NetworkParams {
    pub kind: NetworkKind,
    /// Mean degree (random) or lattice degree (small world).
    pub mean_degree: usize,
    pub rewire_probability: f64,
    /// Edges per arriving node (scale free).
    pub attachment: usize,
    pub radius_km: f64,
}

impl Default for NetworkParams {
    fn default() -> Self {
        NetworkParams {
            kind: NetworkKind::ScaleFree,
            mean_degree: 6,
            rewire_probability: 0.1,
            attachment: 3,
            radius_km: 3.0,
        }
    }
}

/// Undirected household network, no self-loops.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SocialNetwork {
    pub kind: NetworkKind,
    adjacency: Vec<Vec<u32>>,
}

impl SocialNetwork {
    pub fn n_nodes(&self) -> usize {
        self.adjacency.len()
    }

    pub fn degree(&self, node: usize) -> usize {
        self.adjacency[node].len()
    }

    pub fn neighbors(&self, node: usize) -> &[u32] {
        &self.adjacency[node]
    }

    pub fn n_edges(&self) -> usize {
        self.adjacency.iter().map(|a| a.len()).sum::<usize>() / 2
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(|a| a.len()).max().unwrap_or(0)
    }

    fn from_edges(kind: NetworkKind, n: usize, edges: &[(usize, usize)]) -> SocialNetwork {
        let mut adjacency = vec![Vec::new(); n];
        for &(a, b) in edges {
            adjacency[a].push(b as u32);
            adjacency[b].push(a as u32);
        }
        for a in &mut adjacency {
            a.sort_unstable();
        }
        SocialNetwork { kind, adjacency }
    }

    pub fn write_edge_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["from", "to"])?;
        for (a, nbrs) in self.adjacency.iter().enumerate() {
            for &b in nbrs {
                if (a as u32) < b {
                    w.write_record([&a.to_string(), &b.to_string()])?;
                }
            }
        }
        w.flush()?;
        Ok(())
    }
}

/// Build the household social network of the requested kind.
pub fn build_social_network(
    params: &NetworkParams,
    population: &Population,
    rng: &mut impl Rng,
) -> Result<SocialNetwork> {
    let n = population.len();
    if n == 0 {
        return Err(Error::EmptyPopulation);
    }
    match params.kind {
        NetworkKind::Random => {
            if params.mean_degree >= n {
                return Err(Error::InvalidNetwork(format!(
                    "mean degree {} >= {} nodes",
                    params.mean_degree, n
                )));
            }
            let p = params.mean_degree as f64 / (n - 1) as f64;
            let mut edges = Vec::new();
            for a in 0..n {
                for b in (a + 1)..n {
                    if rng.gen::<f64>() < p {
                        edges.push((a, b));
                    }
                }
            }
            Ok(SocialNetwork::from_edges(params.kind, n, &edges))
        }
        NetworkKind::SmallWorld => {
            let k = params.mean_degree;
            if k >= n || k < 2 {
                return Err(Error::InvalidNetwork(format!(
                    "lattice degree {k} invalid for {n} nodes"
                )));
            }
            let half = k / 2;
            let mut edge_set = std::collections::BTreeSet::new();
            for a in 0..n {
                for j in 1..=half {
                    let b = (a + j) % n;
                    edge_set.insert((a.min(b), a.max(b)));
                }
            }
            let mut edges: Vec<(usize, usize)> = edge_set.iter().copied().collect();
            if params.rewire_probability > 0.0 {
                for i in 0..edges.len() {
                    if rng.gen::<f64>() < params.rewire_probability {
                        let (a, _) = edges[i];
                        // retry until the rewired edge is simple
                        for _ in 0..32 {
                            let c = rng.gen_range(0..n);
                            let cand = (a.min(c), a.max(c));
                            if c != a && !edge_set.contains(&cand) {
                                edge_set.remove(&edges[i]);
                                edge_set.insert(cand);
                                edges[i] = cand;
                                break;
                            }
                        }
                    }
                }
                edges = edge_set.into_iter().collect();
            }
            Ok(SocialNetwork::from_edges(params.kind, n, &edges))
        }
        NetworkKind::ScaleFree => {
            let m = params.attachment;
            if m >= n || m == 0 {
                return Err(Error::InvalidNetwork(format!(
                    "attachment {m} invalid for {n} nodes"
                )));
            }
            // seed clique of m nodes, then preferential attachment
            let mut edges = Vec::new();
            let mut endpoints: Vec<usize> = Vec::new();
            for a in 0..m {
                for b in (a + 1)..m {
                    edges.push((a, b));
                    endpoints.push(a);
                    endpoints.push(b);
                }
            }
            for v in m..n {
                let mut targets = std::collections::BTreeSet::new();
                while targets.len() < m {
                    let t = if endpoints.is_empty() {
                        rng.gen_range(0..v)
                    } else {
                        *endpoints.choose(rng).expect("non-empty")
                    };
                    if t != v {
                        targets.insert(t);
                    }
                }
                for t in targets {
                    edges.push((v, t));
                    endpoints.push(v);
                    endpoints.push(t);
                }
            }
            Ok(SocialNetwork::from_edges(params.kind, n, &edges))
        }
        NetworkKind::Distance => {
            let mut edges = Vec::new();
            let r2 = params.radius_km * params.radius_km;
            for a in 0..n {
                let ha = &population.households[a];
                for b in (a + 1)..n {
                    let hb = &population.households[b];
                    let d2 = (ha.x_km - hb.x_km).powi(2) + (ha.y_km - hb.y_km).powi(2);
                    if d2 > 0.0 && d2 <= r2 {
                        edges.push((a, b));
                    }
                }
            }
            Ok(SocialNetwork::from_edges(params.kind, n, &edges))
        }
    }
}

/// Daily information-sharing probabilities: official reach, sharing by
/// protectively-acting households, sharing by the rest.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default)]
pub struct InfoParams {
    pub p_official: f64,
    pub p_share_prepared: f64,
    pub p_share_other: f64,
}

impl Default for InfoParams {
    fn default() -> Self {
        // calibration knobs (unpublished); ordering P_o >= P_i >= P_n
        InfoParams {
            p_official: 0.5,
            p_share_prepared: 0.3,
            p_share_other: 0.1,
        }
    }
}

impl InfoParams {
    pub fn validate(&self) -> Result<()> {
        let ok = (0.0..=1.0).contains(&self.p_official)
            && self.p_official >= self.p_share_prepared
            && self.p_share_prepared >= self.p_share_other
            && self.p_share_other >= 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInfoParams)
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default)]
pub struct AdoptionParams {
    /// Peer-effect log-odds shift per unit prepared-neighbor fraction.
    pub lambda: f64,
}

impl Default for AdoptionParams {
    fn default() -> Self {
        AdoptionParams { lambda: 1.0 }
    }
}

/// One synchronous day of information spread. Uninformed households hear the
/// official broadcast w.p. P_o; households informed at the start of the day
/// share to each uninformed neighbor w.p. P_i (if prepared) or P_n.
pub fn step_information(
    day: u32,
    population: &Population,
    states: &mut [BehavioralState],
    network: &SocialNetwork,
    info: &InfoParams,
    rng: &mut impl Rng,
) -> Result<()> {
    info.validate()?;
    let informed_at_start: Vec<bool> = states.iter().map(|s| s.informed).collect();
    let mut newly_informed = vec![false; states.len()];
    for (i, s) in states.iter().enumerate() {
        if !s.informed && rng.gen::<f64>() < info.p_official {
            newly_informed[i] = true;
        }
    }
    for i in 0..population.len() {
        if !informed_at_start[i] {
            continue;
        }
        let share_p = if states[i].prepared {
            info.p_share_prepared
        } else {
            info.p_share_other
        };
        for &nbr in network.neighbors(i) {
            let nbr = nbr as usize;
            if !informed_at_start[nbr] && !newly_informed[nbr] && rng.gen::<f64>() < share_p {
                newly_informed[nbr] = true;
            }
        }
    }
    for (i, s) in states.iter_mut().enumerate() {
        if newly_informed[i] {
            s.informed = true;
            s.inform_day = Some(day);
        }
    }
    Ok(())
}

/// One synchronous day of protective-action adoption.
///
/// Informed, unprepared households compute the prepared fraction of their
/// neighbors at the start of the day, shift the preparedness log-odds by
/// lambda times that fraction, and adopt with the per-day hazard
/// `1 - (1 - P_p)^(1/f)` so the f-day cumulative equals P_p at lambda = 0.
/// Generator purchase is evaluated once, on the day a household is informed.
#[allow(clippy::too_many_arguments)]
pub fn step_adoption(
    day: u32,
    population: &Population,
    states: &mut [BehavioralState],
    network: &SocialNetwork,
    coeffs: &CoefficientSet,
    adoption: &AdoptionParams,
    forewarning_days: u32,
    rng: &mut impl Rng,
) -> Result<()> {
    if forewarning_days == 0 {
        return Ok(());
    }
    let prepared_at_start: Vec<bool> = states.iter().map(|s| s.prepared).collect();
    for i in 0..population.len() {
        let h = &population.households[i];
        let b = |f: bool| if f { 1.0 } else { 0.0 };
        if states[i].inform_day == Some(day) {
            // expectation re-evaluated with the informed flag on, then the
            // one-shot generator decision
            states[i].expectation_days = coeffs.expectation.expected_outage(
                forewarning_days as f64,
                1.0,
                b(h.owner),
                b(h.elderly),
                b(h.mobility_issue),
                b(h.flood_zone),
            );
            let p_sub = coeffs.substitute.probability(
                h.income_bracket as f64,
                h.renter(),
                states[i].expectation_days,
                states[i].self_efficacy as f64,
            );
            states[i].substitute = rng.gen::<f64>() < p_sub;
        }
        if !states[i].informed || states[i].prepared {
            continue;
        }
        let degree = network.degree(i);
        let peer_fraction = if degree == 0 {
            0.0
        } else {
            network
                .neighbors(i)
                .iter()
                .filter(|&&n| prepared_at_start[n as usize])
                .count() as f64
                / degree as f64
        };
        let predictor = coeffs.preparedness.predictor(
            b(h.vehicle_missing),
            b(states[i].experience),
            b(h.elderly),
            h.renter(),
            forewarning_days as f64,
            h.supermarket_distance_mi,
            states[i].self_efficacy as f64,
        ) + adoption.lambda * peer_fraction;
        let p_p = sigmoid(predictor);
        let daily_hazard = 1.0 - (1.0 - p_p).powf(1.0 / forewarning_days as f64);
        if rng.gen::<f64>() < daily_hazard {
            states[i].prepared = true;
        }
    }
    Ok(())
}
