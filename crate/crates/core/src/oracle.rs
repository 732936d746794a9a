//! Exhaustive exact solvers for desk-scale verification.
//!
//! Deliberately naive and trustworthy: no bounding, no relaxation, just
//! complete enumeration behind hard size guards. Exceeding a guard is an
//! error, never a silent truncation.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::problems::{
    decode_qcpp, qap_objective, qcpp_objective, QapAssignment, QapInstance, QcppInstance,
    QcppSolution, SelColInstance, SelColSolution,
};
use crate::qubo::{BinaryState, FlipEval, QuboModel};

pub const MAX_QUBO_VARS: usize = 26;
pub const MAX_QAP_SIZE: usize = 8;
pub const MAX_QCPP_ARCS: usize = 22;
pub const MAX_SELCOL_SELECTIONS: u128 = 10_000;
pub const MAX_SELCOL_CLUSTERS: usize = 12;

/// An input too large for complete enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GuardError {
    pub what: &'static str,
    pub size: u128,
    pub max: u128,
}

impl GuardError {
    fn new(what: &'static str, size: u128, max: u128) -> Self {
        GuardError { what, size, max }
    }
}

impl fmt::Display for GuardError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} is {}, beyond the brute-force guard of {}",
            self.what, self.size, self.max
        )
    }
}

impl core::error::Error for GuardError {}

/// Exact minimum over all 2^n states, by Gray-code walk with incremental
/// flip deltas (one O(deg) update per visited state). Ties go to the
/// lexicographically smallest state vector.
pub fn brute_qubo(model: &QuboModel) -> Result<(f64, BinaryState), GuardError> {
    let n = model.n();
    if n > MAX_QUBO_VARS {
        return Err(GuardError::new("variable count", n as u128, MAX_QUBO_VARS as u128));
    }
    let mut ev = FlipEval::new(model, BinaryState::zeros(n));
    let mut best_energy = ev.energy;
    let mut best_state = ev.state.clone();
    for k in 1u64..(1u64 << n) {
        let j = k.trailing_zeros() as usize;
        ev.flip(j);
        if ev.energy < best_energy || (ev.energy == best_energy && ev.state < best_state) {
            best_energy = ev.energy;
            best_state = ev.state.clone();
        }
    }
    // report the direct evaluation, exact for integer data
    Ok((model.energy(&best_state), best_state))
}

/// Exact assignment minimum over all n! permutations, enumerated in
/// lexicographic order; the first minimum found wins ties.
pub fn brute_qap(inst: &QapInstance) -> Result<(f64, QapAssignment), GuardError> {
    let n = inst.n();
    if n > MAX_QAP_SIZE {
        return Err(GuardError::new("facility count", n as u128, MAX_QAP_SIZE as u128));
    }
    let mut best: Option<(f64, Vec<usize>)> = None;
    let mut current = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn descend(
        inst: &QapInstance,
        current: &mut Vec<usize>,
        used: &mut [bool],
        best: &mut Option<(f64, Vec<usize>)>,
    ) {
        let n = inst.n();
        if current.len() == n {
            let a = QapAssignment::new(current.clone());
            let cost = qap_objective(inst, &a);
            if best.as_ref().is_none_or(|(b, _)| cost < *b) {
                *best = Some((cost, current.clone()));
            }
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                current.push(v);
                descend(inst, current, used, best);
                current.pop();
                used[v] = false;
            }
        }
    }
    descend(inst, &mut current, &mut used, &mut best);
    let (cost, perm) = best.expect("n = 0 still yields the empty permutation");
    Ok((cost, QapAssignment::new(perm)))
}

/// Exact cycle-partition minimum, or `None` when no cycle partition exists.
///
/// Enumerates one outgoing arc per vertex (in vertex order, arcs ascending)
/// pruning on repeated heads; full coverage with distinct heads is exactly
/// the degree-feasibility of the model. The first minimum in enumeration
/// order wins ties.
pub fn brute_qcpp(inst: &QcppInstance) -> Result<Option<(f64, QcppSolution)>, GuardError> {
    let arcs = inst.arcs().len();
    if arcs > MAX_QCPP_ARCS {
        return Err(GuardError::new("arc count", arcs as u128, MAX_QCPP_ARCS as u128));
    }
    let n = inst.n_vertices();
    let out = inst.out_arcs();
    if out.iter().any(|a| a.is_empty()) {
        return Ok(None);
    }
    struct Search<'a> {
        inst: &'a QcppInstance,
        out: &'a [Vec<usize>],
        chosen: Vec<usize>,
        head_used: Vec<bool>,
        best: Option<(f64, Vec<usize>)>,
    }
    impl Search<'_> {
        fn descend(&mut self, vertex: usize) {
            if vertex == self.inst.n_vertices() {
                let mut selected = vec![false; self.inst.arcs().len()];
                for &a in &self.chosen {
                    selected[a] = true;
                }
                let cost: f64 = self
                    .inst
                    .cost()
                    .iter()
                    .filter(|(&(a1, a2), _)| selected[a1] && selected[a2])
                    .map(|(_, &v)| v)
                    .sum();
                if self.best.as_ref().is_none_or(|(b, _)| cost < *b) {
                    self.best = Some((cost, self.chosen.clone()));
                }
                return;
            }
            for i in 0..self.out[vertex].len() {
                let arc = self.out[vertex][i];
                let head = self.inst.arcs()[arc].1;
                if !self.head_used[head] {
                    self.head_used[head] = true;
                    self.chosen.push(arc);
                    self.descend(vertex + 1);
                    self.chosen.pop();
                    self.head_used[head] = false;
                }
            }
        }
    }
    let mut search = Search {
        inst,
        out: &out,
        chosen: Vec::with_capacity(n),
        head_used: vec![false; n],
        best: None,
    };
    search.descend(0);
    Ok(search.best.map(|(cost, chosen)| {
        let mut bits = vec![0u8; inst.arcs().len()];
        for &a in &chosen {
            bits[a] = 1;
        }
        let sol = decode_qcpp(inst, &BinaryState::from_bits(bits));
        let sol = sol.feasible().expect("search leaves are degree-feasible").clone();
        debug_assert_eq!(qcpp_objective(inst, &sol), cost);
        (cost, sol)
    }))
}

/// Exact selective-coloring minimum: enumerates every selection (cartesian
/// product over clusters, lexicographic), computes the exact chromatic
/// number of each induced subgraph by backtracking over colorings, and
/// returns the global minimum. `None` when no selection is colorable within
/// the instance's color budget. The first minimum in enumeration order wins
/// ties.
pub fn brute_selcol(inst: &SelColInstance) -> Result<Option<(usize, SelColSolution)>, GuardError> {
    let p = inst.clusters().len();
    if p > MAX_SELCOL_CLUSTERS {
        return Err(GuardError::new("cluster count", p as u128, MAX_SELCOL_CLUSTERS as u128));
    }
    let selections: u128 = inst
        .clusters()
        .iter()
        .map(|c| c.len() as u128)
        .product();
    if selections > MAX_SELCOL_SELECTIONS {
        return Err(GuardError::new("selection count", selections, MAX_SELCOL_SELECTIONS));
    }

    fn advance(pick: &mut [usize], dims: &[usize]) -> bool {
        for c in (0..pick.len()).rev() {
            pick[c] += 1;
            if pick[c] < dims[c] {
                return true;
            }
            pick[c] = 0;
        }
        false
    }

    let dims: Vec<usize> = inst.clusters().iter().map(|c| c.len()).collect();
    let cap_all = p.min(inst.color_budget());
    let mut best: Option<(usize, Vec<usize>, Vec<usize>)> = None;
    let mut pick = vec![0usize; p];
    loop {
        let selection: Vec<usize> = pick
            .iter()
            .enumerate()
            .map(|(c, &i)| inst.clusters()[c][i])
            .collect();
        let cap = match &best {
            // only strictly better colorings matter once a minimum is known
            Some((b, _, _)) => cap_all.min(b.saturating_sub(1)),
            None => cap_all,
        };
        if cap > 0 {
            if let Some((k, colors)) = chromatic(inst, &selection, cap) {
                if best.as_ref().is_none_or(|(b, _, _)| k < *b) {
                    best = Some((k, selection, colors));
                }
            }
        }
        if !advance(&mut pick, &dims) {
            break;
        }
    }

    Ok(best.map(|(k, selection, colors)| {
        let coloring = selection.iter().copied().zip(colors).collect();
        (
            k,
            SelColSolution {
                selection,
                coloring,
                colors_used: k,
                y_active: k,
            },
        )
    }))
}

/// Smallest k ≤ cap admitting a proper coloring of the selection's induced
/// subgraph, with the first coloring found. Vertex `d` may only open color
/// `max_used + 1`, which kills color-permutation symmetry.
fn chromatic(inst: &SelColInstance, selection: &[usize], cap: usize) -> Option<(usize, Vec<usize>)> {
    let m = selection.len();
    let mut adj = vec![Vec::new(); m];
    for a in 0..m {
        for b in (a + 1)..m {
            if inst.has_edge(selection[a], selection[b]) {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
    }
    let mut colors = vec![usize::MAX; m];
    fn descend(adj: &[Vec<usize>], colors: &mut [usize], d: usize, k: usize) -> bool {
        if d == colors.len() {
            return true;
        }
        let max_used = colors[..d].iter().copied().max().map_or(0, |m| m + 1);
        for c in 0..k.min(max_used + 1) {
            if adj[d].iter().all(|&nb| colors[nb] != c) {
                colors[d] = c;
                if descend(adj, colors, d + 1, k) {
                    return true;
                }
                colors[d] = usize::MAX;
            }
        }
        false
    }
    for k in 1..=cap {
        colors.fill(usize::MAX);
        if descend(&adj, &mut colors, 0, k) {
            return Some((k, colors));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::testfix::{fig1, qap2, qcpp3};
    use crate::problems::{decode_qap, encode_qap, encode_qcpp, encode_selcol, Decoded};
    use crate::qubo::EqualitySystem;
    use alloc::collections::BTreeMap;

    fn m1() -> QuboModel {
        let mut m = QuboModel::new(2);
        m.add_linear(0, -1.0);
        m.add_linear(1, -1.0);
        m.add_quad(0, 1, 2.0);
        m
    }

    #[test]
    fn qubo_minimum_with_lexicographic_ties() {
        let (e, x) = brute_qubo(&m1()).unwrap();
        assert_eq!(e, -1.0);
        // (0,1) and (1,0) tie at -1; the lexicographically smaller one wins
        assert_eq!(x.bits(), &[0, 1]);
    }

    #[test]
    fn qubo_zero_model_and_guard() {
        let (e, x) = brute_qubo(&QuboModel::new(5)).unwrap();
        assert_eq!(e, 0.0);
        assert_eq!(x, BinaryState::zeros(5));
        assert!(brute_qubo(&QuboModel::new(27)).is_err());
    }

    #[test]
    fn qubo_on_a_dualized_constraint() {
        let mut sys = EqualitySystem::new();
        sys.push_row(alloc::vec![(0, 1.0), (1, 1.0)], 1.0);
        let model = QuboModel::new(2).dualize(&sys, 10.0);
        let (e, x) = brute_qubo(&model).unwrap();
        assert_eq!(e, 0.0);
        assert_eq!(x.bits(), &[0, 1]);
    }

    #[test]
    fn qubo_agrees_with_direct_enumeration() {
        // independent route: evaluate all states via energy()
        let mut m = QuboModel::new(6);
        m.add_linear(0, 3.0);
        m.add_linear(3, -2.0);
        m.add_quad(0, 3, -4.0);
        m.add_quad(1, 2, 5.0);
        m.add_quad(4, 5, -1.0);
        let mut best = f64::INFINITY;
        for mask in 0..(1u32 << 6) {
            let bits = (0..6).map(|j| ((mask >> j) & 1) as u8).collect();
            best = best.min(m.energy(&BinaryState::from_bits(bits)));
        }
        assert_eq!(brute_qubo(&m).unwrap().0, best);
    }

    #[test]
    fn dualize_exactness_on_random_equality_systems() {
        // for λ above the objective's total coefficient weight, the argmin
        // of the dualized model satisfies the constraints and matches the
        // constrained minimum computed by direct filtered enumeration
        for seed in 0..30u64 {
            let spec = crate::gen::PureQuboSpec {
                density: 0.5,
                coeff_low: -9,
                coeff_high: 9,
                ..crate::gen::PureQuboSpec::new(8, seed)
            };
            let model = crate::gen::gen_pure_qubo(&spec).unwrap();
            let mut rng = crate::rng::substream(seed, 13);
            let mut sys = EqualitySystem::new();
            for _ in 0..2 {
                let coeffs: alloc::vec::Vec<(usize, f64)> = (0..8)
                    .filter(|_| crate::rng::unit_f64(&mut rng) < 0.5)
                    .map(|j| (j, 1.0))
                    .collect();
                if !coeffs.is_empty() {
                    sys.push_row(coeffs, 1.0);
                }
            }
            // integer data: any violation adds at least λ, so this λ beats
            // the whole objective range
            let lambda = 1.0 + model.coeff_abs_sum();
            let dualized = model.dualize(&sys, lambda);

            let mut constrained_min = f64::INFINITY;
            for mask in 0u32..(1 << 8) {
                let bits = (0..8).map(|j| ((mask >> j) & 1) as u8).collect();
                let x = BinaryState::from_bits(bits);
                if sys.satisfied(&x) {
                    constrained_min = constrained_min.min(model.energy(&x));
                }
            }
            let (energy, state) = brute_qubo(&dualized).unwrap();
            if constrained_min.is_finite() {
                assert!(sys.satisfied(&state), "seed {seed}: argmin violates the system");
                assert_eq!(energy, constrained_min, "seed {seed}");
                assert_eq!(model.energy(&state), constrained_min, "seed {seed}");
            } else {
                // no feasible state at all: the argmin must still pay λ
                assert!(energy >= model.energy(&state) + lambda, "seed {seed}");
            }
        }
    }

    #[test]
    fn qap_fixture_and_guard() {
        let inst = qap2();
        let (cost, a) = brute_qap(&inst).unwrap();
        assert_eq!(cost, 6.0);
        assert_eq!(a.perm(), &[0, 1]);

        let zero = QapInstance::new(
            alloc::vec![alloc::vec![0.0; 3]; 3],
            alloc::vec![alloc::vec![1.0; 3]; 3],
        )
        .unwrap();
        let (cost, a) = brute_qap(&zero).unwrap();
        assert_eq!(cost, 0.0);
        assert_eq!(a.perm(), &[0, 1, 2]);

        let nine = QapInstance::new(
            alloc::vec![alloc::vec![0.0; 9]; 9],
            alloc::vec![alloc::vec![0.0; 9]; 9],
        )
        .unwrap();
        assert!(brute_qap(&nine).is_err());
    }

    #[test]
    fn qap_agrees_with_encoded_qubo_minimum() {
        // 3x3 integer instance; λ above the total objective weight
        let inst = QapInstance::new(
            alloc::vec![
                alloc::vec![0.0, 2.0, 1.0],
                alloc::vec![2.0, 0.0, 3.0],
                alloc::vec![1.0, 3.0, 0.0],
            ],
            alloc::vec![
                alloc::vec![0.0, 4.0, 2.0],
                alloc::vec![4.0, 0.0, 1.0],
                alloc::vec![2.0, 1.0, 0.0],
            ],
        )
        .unwrap();
        let (cost, _) = brute_qap(&inst).unwrap();
        let model = encode_qap(&inst, 1000.0);
        let (energy, state) = brute_qubo(&model).unwrap();
        assert_eq!(energy, cost);
        match decode_qap(&inst, &state) {
            Decoded::Feasible(a) => assert_eq!(qap_objective(&inst, &a), cost),
            Decoded::Infeasible(v) => panic!("argmin must be feasible, got {v:?}"),
        }
    }

    #[test]
    fn qcpp_fixture_cost_three() {
        let inst = qcpp3();
        let (cost, sol) = brute_qcpp(&inst).unwrap().expect("fixture has cycle covers");
        assert_eq!(cost, 3.0);
        assert_eq!(sol.cycles.len(), 1);
        assert_eq!(sol.cycles[0].len(), 3);
    }

    #[test]
    fn qcpp_single_cycle_graph_is_forced() {
        let arcs = alloc::vec![(0, 1), (1, 2), (2, 3), (3, 0)];
        let mut cost = BTreeMap::new();
        cost.insert((0, 1), 5.0);
        cost.insert((1, 2), 7.0);
        let inst = QcppInstance::new(4, arcs, cost).unwrap();
        let (c, sol) = brute_qcpp(&inst).unwrap().expect("the cycle itself");
        assert_eq!(c, 12.0);
        assert_eq!(sol.selected, alloc::vec![0, 1, 2, 3]);
    }

    #[test]
    fn qcpp_infeasible_and_guard() {
        let inst = QcppInstance::new(2, alloc::vec![(0, 1)], BTreeMap::new()).unwrap();
        assert_eq!(brute_qcpp(&inst).unwrap(), None);

        // complete digraph on 6 vertices has 30 arcs, beyond the cap of 22
        let mut arcs = alloc::vec::Vec::new();
        for t in 0..6 {
            for h in 0..6 {
                if t != h {
                    arcs.push((t, h));
                }
            }
        }
        let inst = QcppInstance::new(6, arcs, BTreeMap::new()).unwrap();
        assert!(brute_qcpp(&inst).is_err());
        // 20 arcs on 5 vertices are within the guard
        let mut arcs = alloc::vec::Vec::new();
        for t in 0..5 {
            for h in 0..5 {
                if t != h {
                    arcs.push((t, h));
                }
            }
        }
        let inst = QcppInstance::new(5, arcs, BTreeMap::new()).unwrap();
        assert!(brute_qcpp(&inst).unwrap().is_some());
    }

    #[test]
    fn qcpp_agrees_with_encoded_qubo_minimum() {
        let inst = qcpp3();
        let model = encode_qcpp(&inst, 1000.0);
        let (energy, state) = brute_qubo(&model).unwrap();
        assert_eq!(energy, 3.0);
        assert!(decode_qcpp(&inst, &state).is_feasible());
    }

    #[test]
    fn selcol_fixture_has_a_one_color_selection() {
        let inst = fig1();
        let (k, sol) = brute_selcol(&inst).unwrap().expect("fixture is colorable");
        assert_eq!(k, 1);
        assert_eq!(sol.selection, alloc::vec![0, 5, 2, 7]);
        assert_eq!(sol.colors_used, 1);
    }

    #[test]
    fn selcol_edgeless_needs_one_color() {
        let inst = SelColInstance::new(4, alloc::vec![], alloc::vec![alloc::vec![0, 1], alloc::vec![2, 3]], 2).unwrap();
        let (k, _) = brute_selcol(&inst).unwrap().unwrap();
        assert_eq!(k, 1);
    }

    #[test]
    fn selcol_forced_clique_needs_all_colors() {
        let inst = SelColInstance::new(
            3,
            alloc::vec![(0, 1), (1, 2), (0, 2)],
            alloc::vec![alloc::vec![0], alloc::vec![1], alloc::vec![2]],
            3,
        )
        .unwrap();
        let (k, sol) = brute_selcol(&inst).unwrap().unwrap();
        assert_eq!(k, 3);
        assert_eq!(sol.selection, alloc::vec![0, 1, 2]);
    }

    #[test]
    fn selcol_budget_can_make_instances_uncolorable() {
        let inst = SelColInstance::new(
            3,
            alloc::vec![(0, 1), (1, 2), (0, 2)],
            alloc::vec![alloc::vec![0], alloc::vec![1], alloc::vec![2]],
            2,
        )
        .unwrap();
        assert_eq!(brute_selcol(&inst).unwrap(), None);
    }

    #[test]
    fn selcol_guards() {
        let many: alloc::vec::Vec<alloc::vec::Vec<usize>> = (0..13).map(|v| alloc::vec![v]).collect();
        let inst = SelColInstance::new(13, alloc::vec![], many, 13).unwrap();
        assert!(brute_selcol(&inst).is_err());
    }

    #[test]
    fn selcol_agrees_with_encoded_qubo_minimum() {
        let inst = fig1().with_budget(2);
        let model = encode_selcol(&inst, 5.0);
        let (energy, state) = brute_qubo(&model).unwrap();
        assert_eq!(energy, 1.0);
        let sol = crate::problems::decode_selcol(&inst, &state);
        assert_eq!(sol.feasible().unwrap().colors_used, 1);
    }
}
