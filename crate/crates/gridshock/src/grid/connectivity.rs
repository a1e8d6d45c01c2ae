//! Energization by reachability from generators over intact components.

use std::collections::VecDeque;

use super::{BackboneNode, ComponentId, DamageState, DistributionNode, Grid};

/// Precomputed node/edge structure for repeated connectivity queries.
pub struct Topology {
    /// adjacency[node_dense] = (edge_dense, neighbor_node_dense)
    adjacency: Vec<Vec<(usize, usize)>>,
    /// (edge_dense, node_a_dense, node_b_dense) for every edge component
    edges: Vec<(usize, usize, usize)>,
    generators: Vec<usize>,
    n_components: usize,
}

impl Topology {
    pub fn new(grid: &Grid) -> Topology {
        let n = grid.component_count();
        let mut adjacency = vec![Vec::new(); n];
        let mut edges = Vec::with_capacity(grid.transmission.len() + grid.conductors.len());

        let backbone_dense = |b: BackboneNode| match b {
            BackboneNode::Generator(i) => grid.index(ComponentId::Generator(i)),
            BackboneNode::Substation(i) => grid.index(ComponentId::Substation(i)),
        };
        for (i, e) in grid.transmission.iter().enumerate() {
            let edge = grid.index(ComponentId::Transmission(i));
            let a = backbone_dense(e.from);
            let b = backbone_dense(e.to);
            adjacency[a].push((edge, b));
            adjacency[b].push((edge, a));
            edges.push((edge, a, b));
        }
        for (i, c) in grid.conductors.iter().enumerate() {
            let edge = grid.index(ComponentId::Conductor(i));
            let a = match c.upstream {
                DistributionNode::Substation(s) => grid.index(ComponentId::Substation(s)),
                DistributionNode::Pole(p) => grid.index(ComponentId::Pole(p)),
            };
            let b = grid.index(ComponentId::Pole(c.pole));
            adjacency[a].push((edge, b));
            adjacency[b].push((edge, a));
            edges.push((edge, a, b));
        }
        Topology {
            adjacency,
            edges,
            generators: (0..grid.generators.len())
                .map(|i| grid.index(ComponentId::Generator(i)))
                .collect(),
            n_components: n,
        }
    }
}

/// Per-component energization after connectivity propagation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnergizationState {
    energized: Vec<bool>,
}

impl EnergizationState {
    pub fn is_energized(&self, dense: usize) -> bool {
        self.energized[dense]
    }

    pub fn pole_energized(&self, grid: &Grid, pole: usize) -> bool {
        self.energized[grid.index(ComponentId::Pole(pole))]
    }

    pub fn n_energized(&self) -> usize {
        self.energized.iter().filter(|&&e| e).count()
    }
}

/// Breadth-first energization from intact generators. A node is energized iff
/// it is intact and reaches a generator through intact nodes and edges; an
/// edge is energized iff it is intact and both endpoints are energized (so a
/// failed substation de-energizes its incident transmission).
pub fn propagate_with(
    topology: &Topology,
    is_failed: &dyn Fn(usize) -> bool,
) -> EnergizationState {
    let mut energized = vec![false; topology.n_components];
    let mut queue = VecDeque::new();
    for &g in &topology.generators {
        if !is_failed(g) {
            energized[g] = true;
            queue.push_back(g);
        }
    }
    while let Some(node) = queue.pop_front() {
        for &(edge, neighbor) in &topology.adjacency[node] {
            if !is_failed(edge) && !is_failed(neighbor) && !energized[neighbor] {
                energized[neighbor] = true;
                queue.push_back(neighbor);
            }
        }
    }
    for &(edge, a, b) in &topology.edges {
        if !is_failed(edge) && energized[a] && energized[b] {
            energized[edge] = true;
        }
    }
    EnergizationState { energized }
}

/// Energization under a damage state.
pub fn propagate_connectivity(grid: &Grid, damage: &DamageState) -> EnergizationState {
    let topology = Topology::new(grid);
    propagate_with(&topology, &|dense| damage.is_failed(dense))
}
