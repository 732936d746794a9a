//! Sparse QUBO models and the algebra the rest of the crate is built on.
//!
//! A [`QuboModel`] is a quadratic pseudo-Boolean objective
//! `constant + Σ_j linear_j·x_j + Σ_{i<j} quad_ij·x_i·x_j` over `n` binary
//! variables. Quadratic terms are stored upper-triangular: adding a
//! coefficient for `(j, i)` with `j > i` folds it onto the `(i, j)` key, so
//! a symmetric input `xᵀQx` lands as `q_ij + q_ji` on the single stored key.
//! Coefficients are `f64` throughout; integer-valued inputs stay exact.
//!
//! Constrained binary programs enter through [`EqualitySystem`] and
//! [`QuboModel::dualize`], which folds `λ·Σ_rows (Σ_j a_j·x_j − b)²` into the
//! model eagerly (using `x_j² = x_j`), producing one flat QUBO with no new
//! variables.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::rng::{unit_f64, RngCore};

/// Soft variable cap mirroring the target hardware generation.
///
/// Exceeding it never fails; callers that care (the CLI) warn instead.
pub const DEFAULT_VAR_CAP: usize = 8192;

/// Sparse quadratic pseudo-Boolean objective over binary variables.
#[derive(Clone, Debug, PartialEq)]
pub struct QuboModel {
    n: usize,
    constant: f64,
    linear: BTreeMap<usize, f64>,
    quad: BTreeMap<(usize, usize), f64>,
}

impl QuboModel {
    /// Zero objective over `n` variables.
    pub fn new(n: usize) -> Self {
        QuboModel {
            n,
            constant: 0.0,
            linear: BTreeMap::new(),
            quad: BTreeMap::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn constant(&self) -> f64 {
        self.constant
    }

    pub fn linear_coeff(&self, j: usize) -> f64 {
        self.linear.get(&j).copied().unwrap_or(0.0)
    }

    /// Stored coefficient of `x_i·x_j` (order-insensitive).
    pub fn quad_coeff(&self, i: usize, j: usize) -> f64 {
        let key = if i < j { (i, j) } else { (j, i) };
        self.quad.get(&key).copied().unwrap_or(0.0)
    }

    pub fn linear_terms(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.linear.iter().map(|(&j, &v)| (j, v))
    }

    pub fn quad_terms(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.quad.iter().map(|(&(i, j), &v)| (i, j, v))
    }

    pub fn nnz(&self) -> usize {
        self.linear.len() + self.quad.len()
    }

    pub fn exceeds_var_cap(&self) -> bool {
        self.exceeds_cap(DEFAULT_VAR_CAP)
    }

    /// Soft size check against a configurable cap; callers warn, never fail.
    pub fn exceeds_cap(&self, cap: usize) -> bool {
        self.n > cap
    }

    pub fn add_constant(&mut self, v: f64) {
        assert!(v.is_finite(), "constant term must be finite");
        self.constant += v;
    }

    /// Adds `v` to the linear coefficient of `x_j`.
    pub fn add_linear(&mut self, j: usize, v: f64) {
        assert!(j < self.n, "variable index {j} out of range (n = {})", self.n);
        assert!(v.is_finite(), "linear coefficient must be finite");
        let slot = self.linear.entry(j).or_insert(0.0);
        *slot += v;
        if *slot == 0.0 {
            self.linear.remove(&j);
        }
    }

    /// Adds `v` to the coefficient of `x_i·x_j`, folding onto the `i < j` key.
    pub fn add_quad(&mut self, i: usize, j: usize, v: f64) {
        assert!(i != j, "quadratic terms need two distinct variables");
        assert!(
            i < self.n && j < self.n,
            "variable pair ({i}, {j}) out of range (n = {})",
            self.n
        );
        assert!(v.is_finite(), "quadratic coefficient must be finite");
        let key = if i < j { (i, j) } else { (j, i) };
        let slot = self.quad.entry(key).or_insert(0.0);
        *slot += v;
        if *slot == 0.0 {
            self.quad.remove(&key);
        }
    }

    /// Exact energy `constant + Σ linear_j·x_j + Σ quad_ij·x_i·x_j`.
    pub fn energy(&self, x: &BinaryState) -> f64 {
        assert_eq!(x.len(), self.n, "state length must equal variable count");
        let mut e = self.constant;
        for (&j, &v) in &self.linear {
            if x.get(j) {
                e += v;
            }
        }
        for (&(i, j), &v) in &self.quad {
            if x.get(i) && x.get(j) {
                e += v;
            }
        }
        e
    }

    /// Energy change from flipping bit `j`:
    /// `(1 − 2x_j)·(linear_j + Σ_{i≠j} quad_ij·x_i)`.
    pub fn delta_energy(&self, x: &BinaryState, j: usize) -> f64 {
        assert_eq!(x.len(), self.n, "state length must equal variable count");
        assert!(j < self.n, "variable index {j} out of range (n = {})", self.n);
        let mut inner = self.linear_coeff(j);
        for (&(a, b), &v) in &self.quad {
            if (a == j && x.get(b)) || (b == j && x.get(a)) {
                inner += v;
            }
        }
        if x.get(j) {
            -inner
        } else {
            inner
        }
    }

    /// All `n` flip deltas in one pass over the nonzeros.
    ///
    /// Element `j` equals `delta_energy(x, j)` exactly; the computation is
    /// sequential so results do not depend on evaluation order.
    pub fn delta_energy_all(&self, x: &BinaryState) -> Vec<f64> {
        assert_eq!(x.len(), self.n, "state length must equal variable count");
        let mut inner = vec![0.0f64; self.n];
        for (&j, &v) in &self.linear {
            inner[j] += v;
        }
        for (&(i, j), &v) in &self.quad {
            if x.get(j) {
                inner[i] += v;
            }
            if x.get(i) {
                inner[j] += v;
            }
        }
        for (j, d) in inner.iter_mut().enumerate() {
            if x.get(j) {
                *d = -*d;
            }
        }
        inner
    }

    /// Folds `lambda·Σ_rows (Σ_j a_j·x_j − b)²` into a copy of the model.
    ///
    /// Expansion uses `x_j² = x_j`, so each row contributes
    /// `λ·b²` to the constant, `λ·(a_j² − 2b·a_j)` to each linear term, and
    /// `2λ·a_j·a_k` to each pair — no new variables.
    pub fn dualize(&self, constraints: &EqualitySystem, lambda: f64) -> QuboModel {
        assert!(
            lambda > 0.0 && lambda.is_finite(),
            "penalty coefficient must be positive"
        );
        let mut out = self.clone();
        for row in constraints.rows() {
            // collapse duplicate indices so the squared expansion is exact
            let mut coeffs: BTreeMap<usize, f64> = BTreeMap::new();
            for &(j, a) in &row.coeffs {
                assert!(j < self.n, "constraint index {j} out of range (n = {})", self.n);
                *coeffs.entry(j).or_insert(0.0) += a;
            }
            out.add_constant(lambda * row.rhs * row.rhs);
            let flat: Vec<(usize, f64)> = coeffs.into_iter().collect();
            for (pos, &(j, a)) in flat.iter().enumerate() {
                out.add_linear(j, lambda * (a * a - 2.0 * row.rhs * a));
                for &(k, c) in &flat[pos + 1..] {
                    out.add_quad(j, k, 2.0 * lambda * a * c);
                }
            }
        }
        out
    }

    /// Relabels variables: the term on `j` moves to `pi[j]`.
    ///
    /// For every state, `permuted.energy(x ∘ pi⁻¹) == self.energy(x)`, i.e.
    /// placing bit `j` of `x` at position `pi[j]` leaves the energy unchanged.
    pub fn permute(&self, pi: &[usize]) -> QuboModel {
        assert_eq!(pi.len(), self.n, "permutation length must equal n");
        let mut seen = vec![false; self.n];
        for &p in pi {
            assert!(p < self.n && !seen[p], "not a permutation of 0..n");
            seen[p] = true;
        }
        let mut out = QuboModel::new(self.n);
        out.constant = self.constant;
        for (&j, &v) in &self.linear {
            out.add_linear(pi[j], v);
        }
        for (&(i, j), &v) in &self.quad {
            out.add_quad(pi[i], pi[j], v);
        }
        out
    }

    /// Divides every coefficient (constant, linear, quadratic) by `divisor`.
    /// The argmin set over binary states is unchanged.
    pub fn scale(&self, divisor: f64) -> QuboModel {
        assert!(
            divisor > 0.0 && divisor.is_finite(),
            "scale divisor must be positive"
        );
        let mut out = QuboModel::new(self.n);
        out.constant = self.constant / divisor;
        for (&j, &v) in &self.linear {
            out.add_linear(j, v / divisor);
        }
        for (&(i, j), &v) in &self.quad {
            out.add_quad(i, j, v / divisor);
        }
        out
    }

    /// Sum of absolute linear and quadratic coefficients (constant excluded).
    pub fn coeff_abs_sum(&self) -> f64 {
        let lin: f64 = self.linear.values().map(|v| libm::fabs(*v)).sum();
        let quad: f64 = self.quad.values().map(|v| libm::fabs(*v)).sum();
        lin + quad
    }

    /// Mean absolute nonzero coefficient, or 1.0 for an all-zero model.
    /// Used to scale annealing defaults to the instance magnitude.
    pub fn mean_abs_coeff(&self) -> f64 {
        let count = self.nnz();
        if count == 0 {
            1.0
        } else {
            self.coeff_abs_sum() / count as f64
        }
    }
}

/// Vector of `n` binary values.
///
/// Ordering is lexicographic on the bit vector, which is the tie-break rule
/// the brute-force solvers use.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BinaryState {
    bits: Vec<u8>,
}

impl BinaryState {
    pub fn zeros(n: usize) -> Self {
        BinaryState { bits: vec![0; n] }
    }

    /// Builds a state from raw 0/1 entries.
    pub fn from_bits(bits: Vec<u8>) -> Self {
        assert!(bits.iter().all(|&b| b <= 1), "state entries must be 0 or 1");
        BinaryState { bits }
    }

    /// Each bit set independently with probability 1/2 (one draw per bit,
    /// consumed in index order).
    pub fn random(n: usize, rng: &mut impl RngCore) -> Self {
        let bits = (0..n)
            .map(|_| if unit_f64(rng) < 0.5 { 1 } else { 0 })
            .collect();
        BinaryState { bits }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, j: usize) -> bool {
        self.bits[j] == 1
    }

    pub fn bit(&self, j: usize) -> u8 {
        self.bits[j]
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    /// Complements bit `j` in place.
    pub fn flip(&mut self, j: usize) {
        self.bits[j] ^= 1;
    }

    /// Copy with bit `j` complemented; flipping twice returns the original.
    pub fn flipped(&self, j: usize) -> Self {
        assert!(j < self.bits.len(), "flip index {j} out of range");
        let mut out = self.clone();
        out.flip(j);
        out
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b == 1).count()
    }
}

impl fmt::Display for BinaryState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            write!(f, "{}", b)?;
        }
        Ok(())
    }
}

/// One linear equality `Σ_j coeffs_j·x_j = rhs`.
#[derive(Clone, Debug, PartialEq)]
pub struct EqualityRow {
    pub coeffs: Vec<(usize, f64)>,
    pub rhs: f64,
}

/// A system of linear equalities `Ax = b` awaiting dualization.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct EqualitySystem {
    rows: Vec<EqualityRow>,
}

impl EqualitySystem {
    pub fn new() -> Self {
        EqualitySystem { rows: Vec::new() }
    }

    pub fn push_row(&mut self, coeffs: Vec<(usize, f64)>, rhs: f64) {
        assert!(
            coeffs.iter().all(|(_, a)| a.is_finite()) && rhs.is_finite(),
            "equality coefficients must be finite"
        );
        self.rows.push(EqualityRow { coeffs, rhs });
    }

    pub fn rows(&self) -> &[EqualityRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Σ_rows (Σ_j a_j·x_j − b)², the quantity dualization charges λ for.
    pub fn violation_sq(&self, x: &BinaryState) -> f64 {
        self.rows
            .iter()
            .map(|row| {
                let s: f64 = row
                    .coeffs
                    .iter()
                    .filter(|&&(j, _)| x.get(j))
                    .map(|&(_, a)| a)
                    .sum();
                let d = s - row.rhs;
                d * d
            })
            .sum()
    }

    /// True when every row is satisfied exactly.
    pub fn satisfied(&self, x: &BinaryState) -> bool {
        self.violation_sq(x) == 0.0
    }
}

/// Incremental single-flip evaluation over a fixed model.
///
/// Keeps the current energy and all `n` flip deltas up to date in
/// O(deg(j)) per flip. The annealer and the Gray-code brute-force solver
/// both run on this. `refresh` recomputes both exactly from the model to
/// bound floating-point drift; on integer-valued models maintained and
/// exact values always coincide.
pub(crate) struct FlipEval<'a> {
    model: &'a QuboModel,
    /// per-variable neighbor list with folded coefficients
    adj: Vec<Vec<(usize, f64)>>,
    pub state: BinaryState,
    pub deltas: Vec<f64>,
    pub energy: f64,
}

impl<'a> FlipEval<'a> {
    pub fn new(model: &'a QuboModel, state: BinaryState) -> Self {
        let mut adj = vec![Vec::new(); model.n()];
        for (i, j, v) in model.quad_terms() {
            adj[i].push((j, v));
            adj[j].push((i, v));
        }
        let energy = model.energy(&state);
        let deltas = model.delta_energy_all(&state);
        FlipEval {
            model,
            adj,
            state,
            deltas,
            energy,
        }
    }

    /// Flips bit `j`, updating energy and deltas incrementally.
    pub fn flip(&mut self, j: usize) {
        self.energy += self.deltas[j];
        let dir = if self.state.get(j) { -1.0 } else { 1.0 };
        self.state.flip(j);
        for &(i, q) in &self.adj[j] {
            let sign = if self.state.get(i) { -1.0 } else { 1.0 };
            self.deltas[i] += sign * q * dir;
        }
        self.deltas[j] = -self.deltas[j];
    }

    /// Recomputes energy and deltas exactly from the model.
    ///
    /// Debug builds assert the maintained energy agreed to 1e-9 relative
    /// before being replaced.
    pub fn refresh(&mut self) {
        let exact = self.model.energy(&self.state);
        debug_assert!(
            libm::fabs(self.energy - exact) <= 1e-9 * libm::fabs(exact).max(1.0),
            "incremental energy drifted: maintained {} vs exact {}",
            self.energy,
            exact
        );
        self.energy = exact;
        self.deltas = self.model.delta_energy_all(&self.state);
    }

    /// Swaps state, energy, and deltas with another evaluator on the same
    /// model, leaving both consistent without any recomputation.
    pub fn swap_contents(&mut self, other: &mut FlipEval<'a>) {
        core::mem::swap(&mut self.state, &mut other.state);
        core::mem::swap(&mut self.deltas, &mut other.deltas);
        core::mem::swap(&mut self.energy, &mut other.energy);
    }
}
