//! Two-phase size reduction for selective coloring.
//!
//! Phase one picks, from every cluster, the vertex with the fewest edges to
//! other clusters. Phase two colors that selection greedily, always taking
//! the uncolored vertex with the most already-colored neighbors (a
//! DSatur-like rule, counting colored neighbors rather than distinct
//! neighbor colors). The number of colors used, `c`, upper-bounds the
//! optimal selective chromatic number, so the model never needs color
//! indices at or above `c`: the instance shrinks from `n·P + P` variables
//! to `n·c + c` while keeping the same optimum.
//!
//! Ties are fixed for determinism: phase one prefers the lowest vertex
//! index; phase two prefers higher induced degree, then the lowest index.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::problems::SelColInstance;

/// What the reduction did: the warm solution and the size accounting.
#[derive(Clone, Debug, PartialEq)]
pub struct ReductionReport {
    /// Phase-one selection, one vertex per cluster in cluster order.
    pub selection: Vec<usize>,
    /// Phase-two proper coloring of the selection; with `greedy_colors`
    /// colors it is a feasible warm solution of that objective value.
    pub coloring: BTreeMap<usize, usize>,
    /// The color budget `c` of the reduced instance.
    pub greedy_colors: usize,
    pub vars_before: usize,
    pub vars_after: usize,
    pub pct_reduction: f64,
}

/// One vertex per cluster minimizing the count of incident edges whose
/// other endpoint lies outside the vertex's own cluster; ties break to the
/// lowest vertex index.
pub fn select_min_external(inst: &SelColInstance) -> Vec<usize> {
    let mut external = vec![0usize; inst.n_vertices()];
    for &(u, v) in inst.edges() {
        if inst.cluster_of(u) != inst.cluster_of(v) {
            external[u] += 1;
            external[v] += 1;
        }
    }
    inst.clusters()
        .iter()
        .map(|cluster| {
            let mut best = cluster[0];
            for &v in cluster {
                if external[v] < external[best] || (external[v] == external[best] && v < best) {
                    best = v;
                }
            }
            best
        })
        .collect()
}

/// Greedy proper coloring of the induced subgraph on `selection`.
///
/// Each step colors the uncolored vertex with the most already-colored
/// neighbors (ties: highest induced degree, then lowest vertex index) using
/// the smallest feasible color. Returns the coloring and the color count.
pub fn greedy_color(
    inst: &SelColInstance,
    selection: &[usize],
) -> (BTreeMap<usize, usize>, usize) {
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
    let mut color = vec![usize::MAX; m];
    let mut used = 0usize;
    for _ in 0..m {
        let mut pick = usize::MAX;
        let mut pick_key = (0usize, 0usize, usize::MAX);
        for v in 0..m {
            if color[v] != usize::MAX {
                continue;
            }
            let colored_neighbors = adj[v].iter().filter(|&&u| color[u] != usize::MAX).count();
            // maximize colored neighbors, then degree; minimize vertex index
            let key = (colored_neighbors, adj[v].len(), selection[v]);
            let better = pick == usize::MAX
                || key.0 > pick_key.0
                || (key.0 == pick_key.0 && key.1 > pick_key.1)
                || (key.0 == pick_key.0 && key.1 == pick_key.1 && key.2 < pick_key.2);
            if better {
                pick = v;
                pick_key = key;
            }
        }
        let mut c = 0;
        while adj[pick].iter().any(|&u| color[u] == c) {
            c += 1;
        }
        color[pick] = c;
        used = used.max(c + 1);
    }
    let coloring = selection
        .iter()
        .copied()
        .zip(color.iter().copied())
        .collect();
    (coloring, used)
}

/// Runs both phases and truncates the color budget to the greedy bound.
pub fn reduce(inst: &SelColInstance) -> (SelColInstance, ReductionReport) {
    let selection = select_min_external(inst);
    let (coloring, greedy_colors) = greedy_color(inst, &selection);
    let vars_before = inst.var_count();
    let reduced = inst.with_budget(greedy_colors);
    let vars_after = reduced.var_count();
    let report = ReductionReport {
        selection,
        coloring,
        greedy_colors,
        vars_before,
        vars_after,
        pct_reduction: 100.0 * (1.0 - vars_after as f64 / vars_before as f64),
    };
    (reduced, report)
}
