//! Selective graph coloring: pick one vertex per cluster so the chosen
//! vertices can be properly colored with as few colors as possible.
//!
//! The encoding keeps the original variable set: `x_{ik}` (vertex `i` is
//! selected and colored `k`) at flat index `i·c + k` for a color budget `c`,
//! then the color-use bits `y_k` at `n·c + k`. The two inequality families
//! of the natural model enter as quadratic penalties — `x_{ik}·x_{jk}` per
//! edge and color, and `(x_{ik} − y_k)·x_{ik}` per vertex and color — so no
//! slack variables are needed; the one-vertex-per-cluster equalities are
//! dualized like any other equality system. For λ greater than the cluster
//! count the encoding is exact.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::{Decoded, ProblemError};
use crate::qubo::{BinaryState, EqualitySystem, QuboModel};

/// Penalty coefficient used for the selective-coloring benchmark runs:
/// five times the color budget.
pub fn selcol_bench_lambda(inst: &SelColInstance) -> f64 {
    5.0 * inst.color_budget() as f64
}

#[derive(Clone, Debug, PartialEq)]
pub struct SelColInstance {
    n_vertices: usize,
    /// Undirected edges, normalized to (lo, hi).
    edges: BTreeSet<(usize, usize)>,
    clusters: Vec<Vec<usize>>,
    color_budget: usize,
    /// cluster index of each vertex
    cluster_of: Vec<usize>,
}

impl SelColInstance {
    /// Validates that the clusters partition the vertex set exactly, edges
    /// are in range without self-loops, and the color budget is at least 1.
    pub fn new(
        n_vertices: usize,
        edges: Vec<(usize, usize)>,
        clusters: Vec<Vec<usize>>,
        color_budget: usize,
    ) -> Result<Self, ProblemError> {
        if color_budget == 0 {
            return Err(ProblemError::new("color budget must be at least 1"));
        }
        let mut cluster_of = vec![usize::MAX; n_vertices];
        for (p, cluster) in clusters.iter().enumerate() {
            if cluster.is_empty() {
                return Err(ProblemError::new(format!("cluster {p} is empty")));
            }
            for &v in cluster {
                if v >= n_vertices {
                    return Err(ProblemError::new(format!(
                        "cluster {p} lists vertex {v}, out of range for {n_vertices} vertices"
                    )));
                }
                if cluster_of[v] != usize::MAX {
                    return Err(ProblemError::new(format!(
                        "vertex {v} appears in clusters {} and {p}",
                        cluster_of[v]
                    )));
                }
                cluster_of[v] = p;
            }
        }
        if let Some(v) = cluster_of.iter().position(|&c| c == usize::MAX) {
            return Err(ProblemError::new(format!("vertex {v} belongs to no cluster")));
        }
        let mut edge_set = BTreeSet::new();
        for (a, b) in edges {
            if a >= n_vertices || b >= n_vertices {
                return Err(ProblemError::new(format!(
                    "edge ({a}, {b}) out of range for {n_vertices} vertices"
                )));
            }
            if a == b {
                return Err(ProblemError::new(format!("self-loop at vertex {a}")));
            }
            edge_set.insert((a.min(b), a.max(b)));
        }
        Ok(SelColInstance {
            n_vertices,
            edges: edge_set,
            clusters,
            color_budget,
            cluster_of,
        })
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn clusters(&self) -> &[Vec<usize>] {
        &self.clusters
    }

    pub fn color_budget(&self) -> usize {
        self.color_budget
    }

    pub fn cluster_of(&self, v: usize) -> usize {
        self.cluster_of[v]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    /// Same instance with a different color budget.
    pub fn with_budget(&self, color_budget: usize) -> Self {
        assert!(color_budget >= 1, "color budget must be at least 1");
        let mut out = self.clone();
        out.color_budget = color_budget;
        out
    }

    /// Flat model index of `x_{ik}`.
    pub fn x_var(&self, vertex: usize, color: usize) -> usize {
        vertex * self.color_budget + color
    }

    /// Flat model index of `y_k`.
    pub fn y_var(&self, color: usize) -> usize {
        self.n_vertices * self.color_budget + color
    }

    /// Encoded model size `n·c + c`.
    pub fn var_count(&self) -> usize {
        self.n_vertices * self.color_budget + self.color_budget
    }
}

/// A feasible selective coloring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelColSolution {
    /// Selected vertex per cluster, in cluster order.
    pub selection: Vec<usize>,
    /// Color of each selected vertex.
    pub coloring: BTreeMap<usize, usize>,
    /// Distinct colors among the selected vertices (the semantic objective).
    pub colors_used: usize,
    /// Set `y` bits in the decoded state (the model objective Σy_k); can
    /// exceed `colors_used` when spurious `y` bits are on.
    pub y_active: usize,
}

impl SelColSolution {
    /// The state encoding this solution with minimal consistent `y` bits.
    pub fn to_state(&self, inst: &SelColInstance) -> BinaryState {
        let mut bits = vec![0u8; inst.var_count()];
        for (&v, &k) in &self.coloring {
            bits[inst.x_var(v, k)] = 1;
            bits[inst.y_var(k)] = 1;
        }
        BinaryState::from_bits(bits)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SelColViolation {
    /// Cluster has `count` selected (vertex, color) pairs instead of one.
    ClusterSelection { cluster: usize, count: usize },
    /// Two adjacent vertices carry the same color.
    SameColorEdge { u: usize, v: usize, color: usize },
}

impl fmt::Display for SelColViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SelColViolation::ClusterSelection { cluster, count } => {
                write!(f, "cluster {cluster} has {count} selected vertex-color pairs, expected 1")
            }
            SelColViolation::SameColorEdge { u, v, color } => {
                write!(f, "adjacent vertices {u} and {v} both use color {color}")
            }
        }
    }
}

/// Full encoding per the quadratic transform:
/// `Σ_k y_k + λ[Σ_p (1 − Σ_{i∈V_p}Σ_k x_{ik})² + Σ_{{i,j}∈E}Σ_k x_{ik}x_{jk}
/// + Σ_iΣ_k (x_{ik} − y_k)x_{ik}]`.
pub fn encode_selcol(inst: &SelColInstance, lambda: f64) -> QuboModel {
    assert!(lambda > 0.0 && lambda.is_finite(), "penalty coefficient must be positive");
    let c = inst.color_budget;
    let mut m = QuboModel::new(inst.var_count());
    for k in 0..c {
        m.add_linear(inst.y_var(k), 1.0);
    }
    // conflict penalty x_ik·x_jk per edge and color
    for &(u, v) in &inst.edges {
        for k in 0..c {
            m.add_quad(inst.x_var(u, k), inst.x_var(v, k), lambda);
        }
    }
    // link penalty (x_ik − y_k)·x_ik = x_ik − x_ik·y_k on binaries
    for i in 0..inst.n_vertices {
        for k in 0..c {
            m.add_linear(inst.x_var(i, k), lambda);
            m.add_quad(inst.x_var(i, k), inst.y_var(k), -lambda);
        }
    }
    // one selected-and-colored vertex per cluster
    let mut rows = EqualitySystem::new();
    for cluster in &inst.clusters {
        let coeffs = cluster
            .iter()
            .flat_map(|&i| (0..c).map(move |k| (i, k)))
            .map(|(i, k)| (inst.x_var(i, k), 1.0))
            .collect();
        rows.push_row(coeffs, 1.0);
    }
    m.dualize(&rows, lambda)
}

/// Reads a selective coloring back out of a state. Feasible iff every
/// cluster has exactly one set (vertex, color) pair and no edge joins two
/// same-colored vertices; spurious `y` bits are tolerated and only counted.
pub fn decode_selcol(
    inst: &SelColInstance,
    x: &BinaryState,
) -> Decoded<SelColSolution, SelColViolation> {
    assert_eq!(x.len(), inst.var_count(), "state length must be n*c + c");
    let c = inst.color_budget;
    let mut per_cluster: Vec<Vec<(usize, usize)>> = vec![Vec::new(); inst.clusters.len()];
    for i in 0..inst.n_vertices {
        for k in 0..c {
            if x.get(inst.x_var(i, k)) {
                per_cluster[inst.cluster_of[i]].push((i, k));
            }
        }
    }
    let mut violations = Vec::new();
    for (p, picks) in per_cluster.iter().enumerate() {
        if picks.len() != 1 {
            violations.push(SelColViolation::ClusterSelection { cluster: p, count: picks.len() });
        }
    }
    for &(u, v) in &inst.edges {
        for k in 0..c {
            if x.get(inst.x_var(u, k)) && x.get(inst.x_var(v, k)) {
                violations.push(SelColViolation::SameColorEdge { u, v, color: k });
            }
        }
    }
    if !violations.is_empty() {
        return Decoded::Infeasible(violations);
    }
    let mut selection = Vec::with_capacity(inst.clusters.len());
    let mut coloring = BTreeMap::new();
    let mut used = BTreeSet::new();
    for picks in &per_cluster {
        let (v, k) = picks[0];
        selection.push(v);
        coloring.insert(v, k);
        used.insert(k);
    }
    let y_active = (0..c).filter(|&k| x.get(inst.y_var(k))).count();
    Decoded::Feasible(SelColSolution {
        selection,
        coloring,
        colors_used: used.len(),
        y_active,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::testfix::fig1;

    fn fig1_with_budget(c: usize) -> SelColInstance {
        fig1().with_budget(c)
    }

    /// State selecting the given (vertex, color) pairs with the given y bits.
    fn state(inst: &SelColInstance, picks: &[(usize, usize)], y: &[u8]) -> BinaryState {
        let mut bits = vec![0u8; inst.var_count()];
        for &(v, k) in picks {
            bits[inst.x_var(v, k)] = 1;
        }
        for (k, &b) in y.iter().enumerate() {
            bits[inst.y_var(k)] = b;
        }
        BinaryState::from_bits(bits)
    }

    #[test]
    fn independent_selection_has_energy_one() {
        // budget 2, λ = P + 1 = 5: the color-1 optimum costs exactly Σy = 1
        let inst = fig1_with_budget(2);
        let model = encode_selcol(&inst, 5.0);
        let x = state(&inst, &[(0, 0), (5, 0), (2, 0), (7, 0)], &[1, 0]);
        assert_eq!(model.energy(&x), 1.0);
        let sol = match decode_selcol(&inst, &x) {
            Decoded::Feasible(s) => s,
            Decoded::Infeasible(v) => panic!("optimum must decode, got {v:?}"),
        };
        assert_eq!(sol.selection, vec![0, 5, 2, 7]);
        assert_eq!(sol.colors_used, 1);
        assert_eq!(sol.y_active, 1);
    }

    #[test]
    fn all_zero_state_pays_lambda_per_cluster() {
        let inst = fig1_with_budget(2);
        let lambda = 5.0;
        let model = encode_selcol(&inst, lambda);
        assert_eq!(model.energy(&BinaryState::zeros(inst.var_count())), lambda * 4.0);
    }

    #[test]
    fn four_cycle_selection_needs_two_colors() {
        // selection {1,2,3,4} forms a 4-cycle; alternate colors are proper
        let inst = fig1_with_budget(2);
        let x = state(&inst, &[(0, 0), (1, 1), (2, 0), (3, 1)], &[1, 1]);
        let sol = decode_selcol(&inst, &x);
        let sol = sol.feasible().expect("alternating coloring is proper");
        assert_eq!(sol.selection, vec![0, 1, 2, 3]);
        assert_eq!(sol.colors_used, 2);
        // same coloring on both ends of an edge is rejected
        let bad = state(&inst, &[(0, 0), (1, 0), (2, 0), (3, 1)], &[1, 1]);
        let decoded = decode_selcol(&inst, &bad);
        assert!(decoded
            .violations()
            .contains(&SelColViolation::SameColorEdge { u: 0, v: 1, color: 0 }));
    }

    #[test]
    fn double_selection_names_the_cluster() {
        let inst = fig1_with_budget(2);
        let x = state(&inst, &[(0, 0), (4, 1), (5, 0), (2, 0), (7, 0)], &[1, 1]);
        let decoded = decode_selcol(&inst, &x);
        assert!(decoded
            .violations()
            .contains(&SelColViolation::ClusterSelection { cluster: 0, count: 2 }));
    }

    #[test]
    fn spurious_y_bits_decode_but_are_counted() {
        let inst = fig1_with_budget(2);
        let x = state(&inst, &[(0, 0), (5, 0), (2, 0), (7, 0)], &[1, 1]);
        let sol = decode_selcol(&inst, &x);
        let sol = sol.feasible().expect("y bits do not affect feasibility");
        assert_eq!(sol.colors_used, 1);
        assert_eq!(sol.y_active, 2);
        // the spurious bit costs one extra energy unit and nothing else
        let model = encode_selcol(&inst, 5.0);
        assert_eq!(model.energy(&x), 2.0);
    }

    #[test]
    fn validation_rejects_broken_partitions() {
        assert!(SelColInstance::new(2, vec![], vec![vec![0]], 1).is_err());
        assert!(SelColInstance::new(2, vec![], vec![vec![0, 1], vec![1]], 1).is_err());
        assert!(SelColInstance::new(2, vec![], vec![vec![0, 1], vec![]], 1).is_err());
        assert!(SelColInstance::new(2, vec![(0, 0)], vec![vec![0, 1]], 1).is_err());
        assert!(SelColInstance::new(2, vec![], vec![vec![0, 1]], 0).is_err());
    }

    #[test]
    fn solution_round_trips_through_its_state() {
        let inst = fig1_with_budget(2);
        let x = state(&inst, &[(0, 0), (5, 0), (2, 0), (7, 0)], &[1, 0]);
        let sol = decode_selcol(&inst, &x).feasible().unwrap().clone();
        assert_eq!(sol.to_state(&inst), x);
    }
}
