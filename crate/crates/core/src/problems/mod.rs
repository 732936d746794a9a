//! Constrained problem instances, their QUBO encodings, and solution
//! decoders.
//!
//! Each problem follows the same pattern: an instance type validated at
//! construction, an encoder producing one flat [`QuboModel`] with penalty
//! coefficient λ, an objective evaluator over the problem's native solution
//! type, and a decoder mapping a binary state back to either a solution or a
//! structured infeasibility report. Infeasibility is a value, never an
//! error — the benchmark harness counts it.
//!
//! Variable layouts are fixed so states port across tools:
//! QAP puts `x_{ik}` at flat index `i·n + k`; QCPP uses one variable per arc
//! in arc-list order; selective coloring puts `x_{ik}` at `i·c + k` followed
//! by the color-use bits `y_k` at `n·c + k`.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::qubo::{BinaryState, QuboModel};

pub mod qap;
pub mod qcpp;
pub mod selcol;

pub use qap::{
    decode_qap, encode_qap, qap_objective, qap_objective_model, QapAssignment, QapInstance,
    QapViolation, QAP_BENCH_LAMBDA,
};
pub use qcpp::{
    decode_qcpp, encode_qcpp, qcpp_objective, qcpp_objective_model, QcppInstance, QcppSolution,
    QcppViolation, QCPP_BENCH_LAMBDA,
};
pub use selcol::{
    decode_selcol, encode_selcol, selcol_bench_lambda, SelColInstance, SelColSolution,
    SelColViolation,
};

/// Instance construction failure (bad dimensions, indices, or structure).
#[derive(Clone, Debug, PartialEq)]
pub struct ProblemError {
    msg: String,
}

impl ProblemError {
    pub(crate) fn new(msg: impl Into<String>) -> Self {
        ProblemError { msg: msg.into() }
    }
}

impl fmt::Display for ProblemError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.msg)
    }
}

impl core::error::Error for ProblemError {}

/// A decoded solution, or the list of original-model constraints the state
/// violates.
#[derive(Clone, Debug, PartialEq)]
pub enum Decoded<T, V> {
    Feasible(T),
    Infeasible(Vec<V>),
}

impl<T, V> Decoded<T, V> {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Decoded::Feasible(_))
    }

    pub fn feasible(&self) -> Option<&T> {
        match self {
            Decoded::Feasible(t) => Some(t),
            Decoded::Infeasible(_) => None,
        }
    }

    pub fn violations(&self) -> &[V] {
        match self {
            Decoded::Feasible(_) => &[],
            Decoded::Infeasible(v) => v,
        }
    }
}

/// Feasibility verdict plus the violation list, for harness counting.
pub fn check_feasible<T, V>(decoded: &Decoded<T, V>) -> (bool, &[V]) {
    (decoded.is_feasible(), decoded.violations())
}

/// Any of the three constrained problems, for code that is generic over the
/// family (the penalty sweep, the benchmark harness, file IO).
#[derive(Clone, Debug, PartialEq)]
pub enum ProblemInstance {
    Qap(QapInstance),
    Qcpp(QcppInstance),
    SelCol(SelColInstance),
}

impl ProblemInstance {
    pub fn family_name(&self) -> &'static str {
        match self {
            ProblemInstance::Qap(_) => "qap",
            ProblemInstance::Qcpp(_) => "qcpp",
            ProblemInstance::SelCol(_) => "selcol",
        }
    }

    /// Number of binary variables in the encoded model.
    pub fn var_count(&self) -> usize {
        match self {
            ProblemInstance::Qap(i) => i.n() * i.n(),
            ProblemInstance::Qcpp(i) => i.arcs().len(),
            ProblemInstance::SelCol(i) => i.var_count(),
        }
    }

    pub fn encode(&self, lambda: f64) -> QuboModel {
        match self {
            ProblemInstance::Qap(i) => encode_qap(i, lambda),
            ProblemInstance::Qcpp(i) => encode_qcpp(i, lambda),
            ProblemInstance::SelCol(i) => encode_selcol(i, lambda),
        }
    }

    /// Penalty coefficient used in the benchmark runs: 16000 for QAP, 1000
    /// for QCPP, five times the color budget for selective coloring.
    pub fn bench_lambda(&self) -> f64 {
        match self {
            ProblemInstance::Qap(_) => QAP_BENCH_LAMBDA,
            ProblemInstance::Qcpp(_) => QCPP_BENCH_LAMBDA,
            ProblemInstance::SelCol(i) => selcol_bench_lambda(i),
        }
    }

    /// A penalty coefficient guaranteeing the encoding is exact: one more
    /// than the sum of absolute objective coefficients (QAP, QCPP), or one
    /// more than the cluster count (selective coloring).
    pub fn exact_lambda(&self) -> f64 {
        match self {
            ProblemInstance::Qap(i) => 1.0 + qap_objective_model(i).coeff_abs_sum(),
            ProblemInstance::Qcpp(i) => 1.0 + qcpp_objective_model(i).coeff_abs_sum(),
            ProblemInstance::SelCol(i) => (i.clusters().len() + 1) as f64,
        }
    }

    /// Decodes a state and returns the original objective when feasible:
    /// assignment cost, cycle interaction cost, or colors used.
    pub fn decode_objective(&self, x: &BinaryState) -> Option<f64> {
        match self {
            ProblemInstance::Qap(i) => decode_qap(i, x)
                .feasible()
                .map(|a| qap_objective(i, a)),
            ProblemInstance::Qcpp(i) => decode_qcpp(i, x)
                .feasible()
                .map(|s| qcpp_objective(i, s)),
            ProblemInstance::SelCol(i) => decode_selcol(i, x)
                .feasible()
                .map(|s| s.colors_used as f64),
        }
    }
}


/// Shared test fixtures.
#[cfg(test)]
pub(crate) mod testfix {
    use super::*;
    use alloc::vec;

    /// 2x2 assignment fixture: F = [[0,1],[1,0]], D = [[0,3],[3,0]].
    pub fn qap2() -> QapInstance {
        QapInstance::new(
            vec![vec![0.0, 1.0], vec![1.0, 0.0]],
            vec![vec![0.0, 3.0], vec![3.0, 0.0]],
        )
        .unwrap()
    }

    /// Complete digraph on 3 vertices, every consecutive arc pair costing 1.
    pub fn qcpp3() -> QcppInstance {
        let arcs = vec![(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)];
        let mut cost = alloc::collections::BTreeMap::new();
        for (a1, &(_, h)) in arcs.iter().enumerate() {
            for (a2, &(t, _)) in arcs.iter().enumerate() {
                if a1 != a2 && h == t {
                    cost.insert((a1, a2), 1.0);
                }
            }
        }
        QcppInstance::new(3, arcs, cost).unwrap()
    }

    /// The 8-vertex, 4-cluster, 12-edge selective coloring fixture with a
    /// color-1 optimum at selection {0, 5, 2, 7}.
    pub fn fig1() -> SelColInstance {
        let edges = vec![
            (0, 1),
            (1, 2),
            (2, 3),
            (0, 3),
            (0, 4),
            (4, 5),
            (1, 5),
            (5, 6),
            (2, 6),
            (6, 7),
            (3, 7),
            (4, 7),
        ];
        let clusters = vec![vec![0, 4], vec![1, 5], vec![2, 6], vec![3, 7]];
        SelColInstance::new(8, edges, clusters, 4).unwrap()
    }
}
