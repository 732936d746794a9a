//! Quadratic cycle partition: pick a set of arcs forming vertex-disjoint
//! directed cycles that cover every vertex, minimizing the interaction cost
//! between consecutive selected arcs. One binary variable per arc, in
//! arc-list order.

use alloc::collections::BTreeMap;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::{Decoded, ProblemError};
use crate::qubo::{BinaryState, EqualitySystem, QuboModel};

/// Penalty coefficient used for the QCPP benchmark runs.
pub const QCPP_BENCH_LAMBDA: f64 = 1000.0;

#[derive(Clone, Debug, PartialEq)]
pub struct QcppInstance {
    n_vertices: usize,
    /// (tail, head) pairs; index order is the variable order.
    arcs: Vec<(usize, usize)>,
    /// Interaction cost keyed by (arc index, arc index); a key exists only
    /// when the first arc's head is the second arc's tail. Both orders of a
    /// pair may carry independent costs.
    cost: BTreeMap<(usize, usize), f64>,
}

impl QcppInstance {
    /// Validates arcs (in range, no self-loops, no duplicates) and costs
    /// (consecutive pairs only, finite, non-negative). Vertices without an
    /// incoming or outgoing arc are accepted; such instances simply have no
    /// cycle partition and solvers report them infeasible.
    pub fn new(
        n_vertices: usize,
        arcs: Vec<(usize, usize)>,
        cost: BTreeMap<(usize, usize), f64>,
    ) -> Result<Self, ProblemError> {
        let mut seen = BTreeSet::new();
        for &(t, h) in &arcs {
            if t >= n_vertices || h >= n_vertices {
                return Err(ProblemError::new(format!(
                    "arc ({t}, {h}) out of range for {n_vertices} vertices"
                )));
            }
            if t == h {
                return Err(ProblemError::new(format!("self-loop at vertex {t}")));
            }
            if !seen.insert((t, h)) {
                return Err(ProblemError::new(format!("duplicate arc ({t}, {h})")));
            }
        }
        for (&(a1, a2), &v) in &cost {
            if a1 >= arcs.len() || a2 >= arcs.len() {
                return Err(ProblemError::new(format!(
                    "cost key ({a1}, {a2}) out of range for {} arcs",
                    arcs.len()
                )));
            }
            if a1 == a2 {
                return Err(ProblemError::new(format!("cost key pairs arc {a1} with itself")));
            }
            if arcs[a1].1 != arcs[a2].0 {
                return Err(ProblemError::new(format!(
                    "cost key ({a1}, {a2}) joins non-consecutive arcs"
                )));
            }
            if !v.is_finite() || v < 0.0 {
                return Err(ProblemError::new(format!(
                    "cost for ({a1}, {a2}) must be finite and non-negative"
                )));
            }
        }
        Ok(QcppInstance {
            n_vertices,
            arcs,
            cost,
        })
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    pub fn cost(&self) -> &BTreeMap<(usize, usize), f64> {
        &self.cost
    }

    /// Arc indices leaving each vertex, in arc order.
    pub fn out_arcs(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.n_vertices];
        for (idx, &(t, _)) in self.arcs.iter().enumerate() {
            out[t].push(idx);
        }
        out
    }

    /// Arc indices entering each vertex, in arc order.
    pub fn in_arcs(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.n_vertices];
        for (idx, &(_, h)) in self.arcs.iter().enumerate() {
            inc[h].push(idx);
        }
        inc
    }

    /// True when every vertex has at least one outgoing and one incoming
    /// arc, the structural minimum for a cycle partition to exist.
    pub fn has_full_degree(&self) -> bool {
        let out = self.out_arcs();
        let inc = self.in_arcs();
        (0..self.n_vertices).all(|v| !out[v].is_empty() && !inc[v].is_empty())
    }
}

/// A cycle partition: the selected arcs and the cycles they form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QcppSolution {
    /// Selected arc indices, ascending.
    pub selected: Vec<usize>,
    /// Vertex cycles, each starting at its smallest vertex; cycles ordered
    /// by that start vertex.
    pub cycles: Vec<Vec<usize>>,
}

impl QcppSolution {
    /// The 0/1 state whose decode is this solution.
    pub fn to_state(&self, inst: &QcppInstance) -> BinaryState {
        let mut bits = vec![0u8; inst.arcs.len()];
        for &a in &self.selected {
            bits[a] = 1;
        }
        BinaryState::from_bits(bits)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QcppViolation {
    OutDegree { vertex: usize, count: usize },
    InDegree { vertex: usize, count: usize },
}

impl fmt::Display for QcppViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QcppViolation::OutDegree { vertex, count } => {
                write!(f, "vertex {vertex} has {count} selected outgoing arcs, expected 1")
            }
            QcppViolation::InDegree { vertex, count } => {
                write!(f, "vertex {vertex} has {count} selected incoming arcs, expected 1")
            }
        }
    }
}

/// Sum of `cost(a1, a2)` over ordered pairs of selected arcs.
pub fn qcpp_objective(inst: &QcppInstance, s: &QcppSolution) -> f64 {
    let mut selected = vec![false; inst.arcs.len()];
    for &a in &s.selected {
        assert!(a < inst.arcs.len(), "selected arc {a} not in instance");
        selected[a] = true;
    }
    inst.cost
        .iter()
        .filter(|(&(a1, a2), _)| selected[a1] && selected[a2])
        .map(|(_, &v)| v)
        .sum()
}

/// The interaction objective as a QUBO over the arc bits, no penalties.
pub fn qcpp_objective_model(inst: &QcppInstance) -> QuboModel {
    let mut m = QuboModel::new(inst.arcs.len());
    for (&(a1, a2), &v) in &inst.cost {
        if v != 0.0 {
            m.add_quad(a1, a2, v);
        }
    }
    m
}

/// Objective plus `λ` times the squared out-degree and in-degree violations
/// `(Σ_{δ⁺(i)} x_a − 1)²` and `(Σ_{δ⁻(i)} x_a − 1)²` for every vertex.
pub fn encode_qcpp(inst: &QcppInstance, lambda: f64) -> QuboModel {
    let mut rows = EqualitySystem::new();
    for arcs_of in [inst.out_arcs(), inst.in_arcs()] {
        for arc_list in arcs_of {
            rows.push_row(arc_list.into_iter().map(|a| (a, 1.0)).collect(), 1.0);
        }
    }
    qcpp_objective_model(inst).dualize(&rows, lambda)
}

/// Reads the selected arc set back out of a state. Feasible iff every
/// vertex has exactly one selected outgoing and one selected incoming arc;
/// the cycle decomposition is materialized for reporting.
pub fn decode_qcpp(inst: &QcppInstance, x: &BinaryState) -> Decoded<QcppSolution, QcppViolation> {
    assert_eq!(x.len(), inst.arcs.len(), "state length must equal arc count");
    let n = inst.n_vertices;
    let mut out_count = vec![0usize; n];
    let mut in_count = vec![0usize; n];
    let mut successor = vec![usize::MAX; n];
    let mut selected = Vec::new();
    for (idx, &(t, h)) in inst.arcs.iter().enumerate() {
        if x.get(idx) {
            selected.push(idx);
            out_count[t] += 1;
            in_count[h] += 1;
            successor[t] = h;
        }
    }
    let mut violations = Vec::new();
    for v in 0..n {
        if out_count[v] != 1 {
            violations.push(QcppViolation::OutDegree { vertex: v, count: out_count[v] });
        }
        if in_count[v] != 1 {
            violations.push(QcppViolation::InDegree { vertex: v, count: in_count[v] });
        }
    }
    if !violations.is_empty() {
        return Decoded::Infeasible(violations);
    }
    // in/out degrees are all exactly one: successor is a permutation, so
    // walking it decomposes the selection into vertex-disjoint cycles
    let mut visited = vec![false; n];
    let mut cycles = Vec::new();
    for start in 0..n {
        if visited[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut v = start;
        while !visited[v] {
            visited[v] = true;
            cycle.push(v);
            v = successor[v];
        }
        cycles.push(cycle);
    }
    Decoded::Feasible(QcppSolution { selected, cycles })
}
