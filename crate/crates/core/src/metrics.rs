//! Comparison measures and experiment harnesses.
//!
//! The three measures follow the usual bound-comparison conventions for
//! minimization: `% solver gap` and `% gap` relate an upper bound to the
//! producer's own or the best available lower bound, and the normalized
//! difference relates two upper bounds. Quadratic solvers occasionally
//! report invalid lower bounds, so the harness computes gap measures only
//! when a certified bound (from the brute-force oracle) exists; missing
//! bounds are surfaced as missing, never as zero.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::anneal::{anneal, AnnealConfig, Mode};
use crate::problems::ProblemInstance;
use crate::qubo::{BinaryState, QuboModel};
use crate::rng::{shuffle, substream};

/// Stream id base for variable-ordering permutations, clear of the ids the
/// annealer uses for replicas and swaps.
const PERM_STREAM: u64 = 1 << 32;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MetricError {
    /// Normalized difference against a zero reference bound is undefined.
    ZeroReference,
    /// Gap of a zero upper bound is undefined.
    ZeroUpperBound,
    EmptyRecords,
}

impl fmt::Display for MetricError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricError::ZeroReference => write!(f, "reference upper bound is zero"),
            MetricError::ZeroUpperBound => write!(f, "upper bound is zero"),
            MetricError::EmptyRecords => write!(f, "no run records to summarize"),
        }
    }
}

impl core::error::Error for MetricError {}

/// `100·(ub − ub_ref)/|ub_ref|`.
pub fn norm_diff(ub: f64, ub_ref: f64) -> Result<f64, MetricError> {
    if ub_ref == 0.0 {
        return Err(MetricError::ZeroReference);
    }
    Ok(100.0 * (ub - ub_ref) / libm::fabs(ub_ref))
}

/// `100·(ub − lb_best)/|ub|` against the best available lower bound.
pub fn pct_gap(ub: f64, lb_best: f64) -> Result<f64, MetricError> {
    if ub == 0.0 {
        return Err(MetricError::ZeroUpperBound);
    }
    Ok(100.0 * (ub - lb_best) / libm::fabs(ub))
}

/// Same formula as [`pct_gap`] with the producer's own lower bound.
pub fn pct_solver_gap(ub: f64, lb_own: f64) -> Result<f64, MetricError> {
    pct_gap(ub, lb_own)
}

/// One (instance, solver, seed) observation.
#[derive(Clone, Debug, PartialEq)]
pub struct RunRecord {
    pub instance_id: String,
    pub solver_id: String,
    /// Objective of the best checked-feasible solution, when one was found.
    pub ub: Option<f64>,
    /// Certified lower bound, when the producer supplies one.
    pub lb: Option<f64>,
    pub feasible: bool,
    pub time: f64,
    pub seed: u64,
}

/// Per-solver averages over a record set.
#[derive(Clone, Debug, PartialEq)]
pub struct SolverSummary {
    pub solver_id: String,
    pub records: usize,
    pub avg_ub: Option<f64>,
    /// Mean per-record normalized difference against the reference solver's
    /// best upper bound on the same instance.
    pub avg_norm_diff: Option<f64>,
    pub avg_time: f64,
    pub pct_feasible: f64,
    /// Records whose normalized difference was undefined (no own ub, no
    /// reference ub for the instance, or a zero reference).
    pub excluded_norm_diff: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Summary {
    pub ref_solver: String,
    /// One row per solver, ordered by solver id.
    pub rows: Vec<SolverSummary>,
}

/// Sums in value order so the result does not depend on record order.
fn stable_mean(mut values: Vec<f64>) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    values.sort_by(|a, b| a.total_cmp(b));
    let n = values.len() as f64;
    Some(values.into_iter().sum::<f64>() / n)
}

/// Per-solver averages of ub, normalized difference against `ref_solver`,
/// time, and feasibility percentage. Records without a usable normalized
/// difference are excluded pairwise and counted in the summary row.
pub fn summarize(records: &[RunRecord], ref_solver: &str) -> Result<Summary, MetricError> {
    if records.is_empty() {
        return Err(MetricError::EmptyRecords);
    }
    // best (minimum) reference ub per instance
    let mut ref_ub: Vec<(&str, f64)> = Vec::new();
    for r in records {
        if r.solver_id == ref_solver {
            if let Some(ub) = r.ub {
                match ref_ub.iter_mut().find(|(id, _)| *id == r.instance_id) {
                    Some((_, best)) => *best = best.min(ub),
                    None => ref_ub.push((&r.instance_id, ub)),
                }
            }
        }
    }
    let mut solver_ids: Vec<&str> = records.iter().map(|r| r.solver_id.as_str()).collect();
    solver_ids.sort_unstable();
    solver_ids.dedup();

    let mut rows = Vec::new();
    for solver in solver_ids {
        let of_solver: Vec<&RunRecord> = records.iter().filter(|r| r.solver_id == solver).collect();
        let mut ubs = Vec::new();
        let mut diffs = Vec::new();
        let mut times = Vec::new();
        let mut excluded = 0usize;
        let mut feasible = 0usize;
        for r in &of_solver {
            debug_assert!(r.time >= 0.0);
            times.push(r.time);
            if r.feasible {
                feasible += 1;
            }
            if let Some(ub) = r.ub {
                ubs.push(ub);
                let reference = ref_ub
                    .iter()
                    .find(|(id, _)| *id == r.instance_id)
                    .map(|&(_, v)| v);
                match reference.map(|rv| norm_diff(ub, rv)) {
                    Some(Ok(d)) => diffs.push(d),
                    _ => excluded += 1,
                }
            } else {
                excluded += 1;
            }
        }
        rows.push(SolverSummary {
            solver_id: solver.to_string(),
            records: of_solver.len(),
            avg_ub: stable_mean(ubs),
            avg_norm_diff: stable_mean(diffs),
            avg_time: stable_mean(times).unwrap_or(0.0),
            pct_feasible: 100.0 * feasible as f64 / of_solver.len() as f64,
            excluded_norm_diff: excluded,
        });
    }
    Ok(Summary {
        ref_solver: ref_solver.to_string(),
        rows,
    })
}

/// Variable-ordering study over one model.
#[derive(Clone, Debug, PartialEq)]
pub struct OrderingOutcome {
    /// Annealer best energy per permutation, in permutation order.
    pub best_energies: Vec<f64>,
    /// Wall seconds per run (zeros without the `std` feature).
    pub wall_times: Vec<f64>,
    /// `100·(E_worst − E_best)/|E_worst|`; zero when all energies agree,
    /// `None` when the worst energy is zero and they differ.
    pub pct_spread: Option<f64>,
}

/// Anneals `permutations` relabeled copies of the model, one per seeded
/// random permutation (permutation `k` comes from substream
/// `PERM_STREAM + k` of the config seed; the annealer itself runs with the
/// unchanged config, so only the variable ordering varies). Relabeling
/// never moves the true optimum, so any spread is solver behavior.
pub fn ordering_experiment(
    model: &QuboModel,
    permutations: usize,
    config: &AnnealConfig,
) -> OrderingOutcome {
    assert!(permutations >= 2, "an ordering comparison needs at least 2 permutations");
    let mut best_energies = Vec::with_capacity(permutations);
    let mut wall_times = Vec::with_capacity(permutations);
    for k in 0..permutations {
        let mut rng = substream(config.seed, PERM_STREAM + k as u64);
        let mut pi: Vec<usize> = (0..model.n()).collect();
        shuffle(&mut rng, &mut pi);
        let permuted = model.permute(&pi);
        let result = anneal(&permuted, config);
        best_energies.push(result.best_energy);
        wall_times.push(result.wall_time);
    }
    let best = best_energies.iter().copied().fold(f64::INFINITY, f64::min);
    let worst = best_energies.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let pct_spread = if best == worst {
        Some(0.0)
    } else if worst == 0.0 {
        None
    } else {
        Some(100.0 * (worst - best) / libm::fabs(worst))
    };
    OrderingOutcome {
        best_energies,
        wall_times,
        pct_spread,
    }
}

/// One penalty-sweep table cell: a solver's feasibility counts and its
/// average feasible-decoded objective at one λ.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepCell {
    pub lambda: f64,
    pub solver_id: String,
    pub feasible_runs: usize,
    pub infeasible_runs: usize,
    /// Mean decoded objective over feasible runs, `None` when all runs
    /// decoded infeasible.
    pub avg_objective: Option<f64>,
}

/// Encodes every instance at every λ and scores states produced by `solve`.
/// Decoded-infeasible runs are counted separately, never averaged in.
pub fn penalty_sweep_with<F>(
    instances: &[ProblemInstance],
    lambdas: &[f64],
    solver_id: &str,
    mut solve: F,
) -> Vec<SweepCell>
where
    F: FnMut(&QuboModel) -> BinaryState,
{
    assert!(!lambdas.is_empty(), "penalty sweep needs at least one coefficient");
    assert!(
        lambdas.iter().all(|&l| l > 0.0),
        "penalty coefficients must be positive"
    );
    lambdas
        .iter()
        .map(|&lambda| {
            let mut objectives = Vec::new();
            let mut infeasible = 0usize;
            for inst in instances {
                let model = inst.encode(lambda);
                let state = solve(&model);
                match inst.decode_objective(&state) {
                    Some(obj) => objectives.push(obj),
                    None => infeasible += 1,
                }
            }
            SweepCell {
                lambda,
                solver_id: solver_id.to_string(),
                feasible_runs: objectives.len(),
                infeasible_runs: infeasible,
                avg_objective: stable_mean(objectives),
            }
        })
        .collect()
}

/// The sweep the benchmark actually runs: both annealer modes per λ, each
/// run with the given config (same seed across cells, so the comparison is
/// paired). Cells are λ-major, normal before parallel.
pub fn penalty_sweep(
    instances: &[ProblemInstance],
    lambdas: &[f64],
    config: &AnnealConfig,
) -> Vec<SweepCell> {
    let run = |mode: Mode| {
        let mut cfg = config.clone();
        cfg.mode = mode;
        let label = match mode {
            Mode::Normal => "da-normal",
            Mode::Parallel => "da-parallel",
        };
        penalty_sweep_with(instances, lambdas, label, move |model| {
            anneal(model, &cfg).best_state
        })
    };
    let normal = run(Mode::Normal);
    let parallel = run(Mode::Parallel);
    let mut cells = Vec::with_capacity(normal.len() * 2);
    for (n, p) in normal.into_iter().zip(parallel) {
        cells.push(n);
        cells.push(p);
    }
    cells
}
