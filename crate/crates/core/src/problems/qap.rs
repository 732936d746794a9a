//! Quadratic assignment: place `n` facilities on `n` locations minimizing
//! `Σ_{ij,kl} f_ij·d_kl·x_ik·x_jl` under one-facility-per-location and
//! one-location-per-facility equalities. Variable `x_{ik}` sits at flat
//! index `i·n + k`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::{Decoded, ProblemError};
use crate::qubo::{BinaryState, EqualitySystem, QuboModel};

/// Penalty coefficient used for the QAP benchmark runs.
pub const QAP_BENCH_LAMBDA: f64 = 16000.0;

#[derive(Clone, Debug, PartialEq)]
pub struct QapInstance {
    n: usize,
    flow: Vec<Vec<f64>>,
    dist: Vec<Vec<f64>>,
}

impl QapInstance {
    pub fn new(flow: Vec<Vec<f64>>, dist: Vec<Vec<f64>>) -> Result<Self, ProblemError> {
        let n = flow.len();
        if dist.len() != n {
            return Err(ProblemError::new(format!(
                "flow is {}x{} but distance is {}x{}",
                n,
                n,
                dist.len(),
                dist.len()
            )));
        }
        for (name, m) in [("flow", &flow), ("distance", &dist)] {
            for row in m.iter() {
                if row.len() != n {
                    return Err(ProblemError::new(format!(
                        "{name} matrix is not square: row of length {} in an {n}x{n} matrix",
                        row.len()
                    )));
                }
                if row.iter().any(|v| !v.is_finite()) {
                    return Err(ProblemError::new(format!("{name} matrix has a non-finite entry")));
                }
            }
        }
        Ok(QapInstance { n, flow, dist })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn flow(&self) -> &[Vec<f64>] {
        &self.flow
    }

    pub fn dist(&self) -> &[Vec<f64>] {
        &self.dist
    }

    /// Flat model index of `x_{ik}`.
    pub fn var(&self, facility: usize, location: usize) -> usize {
        facility * self.n + location
    }
}

/// A feasible assignment: `perm[i]` is the location of facility `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QapAssignment {
    perm: Vec<usize>,
}

impl QapAssignment {
    pub fn new(perm: Vec<usize>) -> Self {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &p in &perm {
            assert!(p < n && !seen[p], "assignment must be a permutation");
            seen[p] = true;
        }
        QapAssignment { perm }
    }

    pub fn location_of(&self, facility: usize) -> usize {
        self.perm[facility]
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    /// The 0/1 state whose decode is this assignment.
    pub fn to_state(&self, inst: &QapInstance) -> BinaryState {
        let mut bits = vec![0u8; inst.n * inst.n];
        for (i, &k) in self.perm.iter().enumerate() {
            bits[inst.var(i, k)] = 1;
        }
        BinaryState::from_bits(bits)
    }
}

/// Total cost `Σ_{i,j} f_ij·d_{a(i)a(j)}`.
pub fn qap_objective(inst: &QapInstance, a: &QapAssignment) -> f64 {
    assert_eq!(a.perm.len(), inst.n, "assignment size must match instance");
    let mut total = 0.0;
    for i in 0..inst.n {
        for j in 0..inst.n {
            total += inst.flow[i][j] * inst.dist[a.perm[i]][a.perm[j]];
        }
    }
    total
}

/// The objective as a QUBO over the `n²` assignment bits, without penalties.
pub fn qap_objective_model(inst: &QapInstance) -> QuboModel {
    let n = inst.n;
    let mut m = QuboModel::new(n * n);
    for i in 0..n {
        for j in 0..n {
            let f = inst.flow[i][j];
            if f == 0.0 {
                continue;
            }
            for k in 0..n {
                for l in 0..n {
                    let c = f * inst.dist[k][l];
                    if c == 0.0 {
                        continue;
                    }
                    let a = inst.var(i, k);
                    let b = inst.var(j, l);
                    if a == b {
                        m.add_linear(a, c);
                    } else {
                        m.add_quad(a, b, c);
                    }
                }
            }
        }
    }
    m
}

/// Objective plus `λ` times the squared row and column assignment
/// violations, dualized into one flat model.
pub fn encode_qap(inst: &QapInstance, lambda: f64) -> QuboModel {
    let n = inst.n;
    let mut rows = EqualitySystem::new();
    for k in 0..n {
        rows.push_row((0..n).map(|i| (inst.var(i, k), 1.0)).collect(), 1.0);
    }
    for i in 0..n {
        rows.push_row((0..n).map(|k| (inst.var(i, k), 1.0)).collect(), 1.0);
    }
    qap_objective_model(inst).dualize(&rows, lambda)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QapViolation {
    /// Location `location` is assigned `count` facilities instead of one.
    Location { location: usize, count: usize },
    /// Facility `facility` is placed on `count` locations instead of one.
    Facility { facility: usize, count: usize },
}

impl fmt::Display for QapViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QapViolation::Location { location, count } => {
                write!(f, "location {location} assigned {count} facilities, expected 1")
            }
            QapViolation::Facility { facility, count } => {
                write!(f, "facility {facility} placed on {count} locations, expected 1")
            }
        }
    }
}

/// Reads a permutation back out of a state, or reports every row/column
/// constraint the state breaks.
pub fn decode_qap(inst: &QapInstance, x: &BinaryState) -> Decoded<QapAssignment, QapViolation> {
    let n = inst.n;
    assert_eq!(x.len(), n * n, "state length must be n^2");
    let mut row_counts = vec![0usize; n];
    let mut col_counts = vec![0usize; n];
    let mut perm = vec![0usize; n];
    for (i, row) in row_counts.iter_mut().enumerate() {
        for (k, col) in col_counts.iter_mut().enumerate() {
            if x.get(inst.var(i, k)) {
                *row += 1;
                *col += 1;
                perm[i] = k;
            }
        }
    }
    let mut violations = Vec::new();
    for (k, &c) in col_counts.iter().enumerate() {
        if c != 1 {
            violations.push(QapViolation::Location { location: k, count: c });
        }
    }
    for (i, &c) in row_counts.iter().enumerate() {
        if c != 1 {
            violations.push(QapViolation::Facility { facility: i, count: c });
        }
    }
    if violations.is_empty() {
        Decoded::Feasible(QapAssignment::new(perm))
    } else {
        Decoded::Infeasible(violations)
    }
}
