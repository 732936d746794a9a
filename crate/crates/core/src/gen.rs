//! Seeded random instance generators.
//!
//! Each generator is a deterministic function of its spec: the same spec
//! produces the bit-identical instance on every platform. Draw orders are
//! fixed and documented per generator so instances regenerate exactly.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::problems::{QcppInstance, SelColInstance};
use crate::qubo::QuboModel;
use crate::rng::{index, int_in, shuffle, substream, unit_f64};

/// A spec that cannot produce an instance.
#[derive(Clone, Debug, PartialEq)]
pub struct GenError {
    msg: String,
}

impl fmt::Display for GenError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.msg)
    }
}

impl core::error::Error for GenError {}

fn check_density(density: f64) -> Result<(), GenError> {
    if !(0.0..=1.0).contains(&density) {
        return Err(GenError {
            msg: format!("density {density} outside [0, 1]"),
        });
    }
    Ok(())
}

/// Beasley-style sparse random QUBO.
#[derive(Clone, Debug, PartialEq)]
pub struct PureQuboSpec {
    pub n: usize,
    /// Inclusion probability for each term.
    pub density: f64,
    pub coeff_low: i64,
    pub coeff_high: i64,
    pub seed: u64,
}

impl PureQuboSpec {
    /// The documented convention: coefficients in [-100, 100], density 0.1.
    pub fn new(n: usize, seed: u64) -> Self {
        PureQuboSpec {
            n,
            density: 0.1,
            coeff_low: -100,
            coeff_high: 100,
            seed,
        }
    }
}

/// Each pair `(i, j)` with `i < j` (lexicographic order), then each linear
/// term `j = 0..n`, is included with probability `density` and drawn an
/// integer coefficient uniform in `[coeff_low, coeff_high]`. One inclusion
/// draw per term, one value draw when included; stream 0 of the seed.
pub fn gen_pure_qubo(spec: &PureQuboSpec) -> Result<QuboModel, GenError> {
    check_density(spec.density)?;
    if spec.coeff_low > spec.coeff_high {
        return Err(GenError {
            msg: format!("coefficient bounds [{}, {}] are inverted", spec.coeff_low, spec.coeff_high),
        });
    }
    let mut rng = substream(spec.seed, 0);
    let mut m = QuboModel::new(spec.n);
    for i in 0..spec.n {
        for j in (i + 1)..spec.n {
            if unit_f64(&mut rng) < spec.density {
                let v = int_in(&mut rng, spec.coeff_low, spec.coeff_high);
                if v != 0 {
                    m.add_quad(i, j, v as f64);
                }
            }
        }
    }
    for j in 0..spec.n {
        if unit_f64(&mut rng) < spec.density {
            let v = int_in(&mut rng, spec.coeff_low, spec.coeff_high);
            if v != 0 {
                m.add_linear(j, v as f64);
            }
        }
    }
    Ok(m)
}

/// Erdős–Rényi digraph spec for cycle-partition instances.
#[derive(Clone, Debug, PartialEq)]
pub struct QcppSpec {
    pub n_vertices: usize,
    /// Arc probability for each ordered vertex pair.
    pub density: f64,
    pub seed: u64,
}

/// Each ordered pair `(i, j)`, `i ≠ j`, in lexicographic order becomes an
/// arc with probability `density` (one draw per pair). A repair pass then
/// gives every vertex lacking an outgoing (then incoming) arc one uniformly
/// random candidate arc, in ascending vertex order. Finally every
/// consecutive ordered arc pair, in arc-index order, receives an integer
/// cost uniform in {0..100}. Stream 0 of the seed.
pub fn gen_qcpp(spec: &QcppSpec) -> Result<QcppInstance, GenError> {
    check_density(spec.density)?;
    let n = spec.n_vertices;
    if n < 2 {
        return Err(GenError {
            msg: format!("cycle-partition generation needs at least 2 vertices, got {n}"),
        });
    }
    let mut rng = substream(spec.seed, 0);
    let mut arcs: Vec<(usize, usize)> = Vec::new();
    let mut present = alloc::collections::BTreeSet::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && unit_f64(&mut rng) < spec.density {
                arcs.push((i, j));
                present.insert((i, j));
            }
        }
    }
    // repair: every vertex must have at least one outgoing and incoming arc
    for v in 0..n {
        if !arcs.iter().any(|&(t, _)| t == v) {
            let candidates: Vec<usize> = (0..n).filter(|&w| w != v && !present.contains(&(v, w))).collect();
            let w = candidates[index(&mut rng, candidates.len())];
            arcs.push((v, w));
            present.insert((v, w));
        }
    }
    for v in 0..n {
        if !arcs.iter().any(|&(_, h)| h == v) {
            let candidates: Vec<usize> = (0..n).filter(|&w| w != v && !present.contains(&(w, v))).collect();
            let w = candidates[index(&mut rng, candidates.len())];
            arcs.push((w, v));
            present.insert((w, v));
        }
    }
    let mut cost = BTreeMap::new();
    for (a1, &(_, h)) in arcs.iter().enumerate() {
        for (a2, &(t, _)) in arcs.iter().enumerate() {
            if a1 != a2 && h == t {
                cost.insert((a1, a2), int_in(&mut rng, 0, 100) as f64);
            }
        }
    }
    QcppInstance::new(n, arcs, cost).map_err(|e| GenError { msg: format!("{e}") })
}

/// Erdős–Rényi graph plus random clustering for selective coloring.
#[derive(Clone, Debug, PartialEq)]
pub struct SelColSpec {
    pub n_vertices: usize,
    /// Edge probability for each unordered vertex pair.
    pub density: f64,
    pub cluster_size_low: usize,
    pub cluster_size_high: usize,
    pub seed: u64,
}

/// Each unordered pair `(i, j)`, `i < j`, in lexicographic order becomes an
/// edge with probability `density`. Vertices are then shuffled and grouped
/// greedily into clusters of size uniform in
/// `[cluster_size_low, cluster_size_high]` (one size draw per cluster); a
/// final fragment smaller than the lower bound merges into its predecessor.
/// The color budget starts at the cluster count. Stream 0 of the seed.
pub fn gen_selcol(spec: &SelColSpec) -> Result<SelColInstance, GenError> {
    check_density(spec.density)?;
    if spec.cluster_size_low < 1 {
        return Err(GenError {
            msg: String::from("cluster size lower bound must be at least 1"),
        });
    }
    if spec.cluster_size_low > spec.cluster_size_high {
        return Err(GenError {
            msg: format!(
                "cluster size bounds [{}, {}] are inverted",
                spec.cluster_size_low, spec.cluster_size_high
            ),
        });
    }
    let n = spec.n_vertices;
    if n == 0 {
        return Err(GenError {
            msg: String::from("selective-coloring generation needs at least 1 vertex"),
        });
    }
    let mut rng = substream(spec.seed, 0);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if unit_f64(&mut rng) < spec.density {
                edges.push((i, j));
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    shuffle(&mut rng, &mut order);
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    let mut at = 0;
    while at < n {
        let want = int_in(
            &mut rng,
            spec.cluster_size_low as i64,
            spec.cluster_size_high as i64,
        ) as usize;
        let take = want.min(n - at);
        let chunk: Vec<usize> = order[at..at + take].to_vec();
        at += take;
        if take < spec.cluster_size_low && !clusters.is_empty() {
            clusters.last_mut().unwrap().extend(chunk);
        } else {
            clusters.push(chunk);
        }
    }
    let budget = clusters.len();
    SelColInstance::new(n, edges, clusters, budget).map_err(|e| GenError { msg: format!("{e}") })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pure_qubo_density_zero_is_empty() {
        let spec = PureQuboSpec {
            density: 0.0,
            ..PureQuboSpec::new(10, 1)
        };
        let m = gen_pure_qubo(&spec).unwrap();
        assert_eq!(m.nnz(), 0);
    }

    #[test]
    fn pure_qubo_same_seed_same_model() {
        let spec = PureQuboSpec::new(40, 99);
        assert_eq!(gen_pure_qubo(&spec).unwrap(), gen_pure_qubo(&spec).unwrap());
        let other = PureQuboSpec::new(40, 100);
        assert_ne!(gen_pure_qubo(&spec).unwrap(), gen_pure_qubo(&other).unwrap());
    }

    #[test]
    fn pure_qubo_coefficients_in_bounds() {
        let spec = PureQuboSpec {
            density: 0.8,
            ..PureQuboSpec::new(30, 5)
        };
        let m = gen_pure_qubo(&spec).unwrap();
        for (_, v) in m.linear_terms() {
            assert!((-100.0..=100.0).contains(&v) && v.fract() == 0.0);
        }
        for (_, _, v) in m.quad_terms() {
            assert!((-100.0..=100.0).contains(&v) && v.fract() == 0.0);
        }
    }

    #[test]
    fn qcpp_full_density_is_complete() {
        let spec = QcppSpec {
            n_vertices: 3,
            density: 1.0,
            seed: 0,
        };
        let inst = gen_qcpp(&spec).unwrap();
        assert_eq!(inst.arcs().len(), 6);
        for &v in inst.cost().values() {
            assert!((0.0..=100.0).contains(&v) && v.fract() == 0.0);
        }
    }

    #[test]
    fn qcpp_repair_guarantees_degrees() {
        for seed in 0..40 {
            let spec = QcppSpec {
                n_vertices: 9,
                density: 0.1,
                seed,
            };
            let inst = gen_qcpp(&spec).unwrap();
            assert!(inst.has_full_degree(), "seed {seed} left a deficient vertex");
        }
    }

    #[test]
    fn qcpp_rejects_tiny_graphs() {
        assert!(gen_qcpp(&QcppSpec { n_vertices: 1, density: 0.5, seed: 0 }).is_err());
    }

    #[test]
    fn selcol_exact_cluster_sizes() {
        let spec = SelColSpec {
            n_vertices: 8,
            density: 0.3,
            cluster_size_low: 2,
            cluster_size_high: 2,
            seed: 7,
        };
        let inst = gen_selcol(&spec).unwrap();
        assert_eq!(inst.clusters().len(), 4);
        assert!(inst.clusters().iter().all(|c| c.len() == 2));
        assert_eq!(inst.color_budget(), 4);
    }

    #[test]
    fn selcol_clusters_partition_vertices() {
        for seed in 0..30 {
            let spec = SelColSpec {
                n_vertices: 23,
                density: 0.4,
                cluster_size_low: 2,
                cluster_size_high: 5,
                seed,
            };
            let inst = gen_selcol(&spec).unwrap();
            let mut all: Vec<usize> = inst.clusters().iter().flatten().copied().collect();
            all.sort_unstable();
            assert_eq!(all, (0..23).collect::<Vec<_>>());
            assert!(inst
                .clusters()
                .iter()
                .all(|c| c.len() >= 2 || inst.clusters().len() == 1));
        }
    }

    #[test]
    fn selcol_density_zero_is_edgeless() {
        let spec = SelColSpec {
            n_vertices: 6,
            density: 0.0,
            cluster_size_low: 3,
            cluster_size_high: 3,
            seed: 1,
        };
        let inst = gen_selcol(&spec).unwrap();
        assert!(inst.edges().is_empty());
    }

    #[test]
    fn selcol_determinism() {
        let spec = SelColSpec {
            n_vertices: 30,
            density: 0.5,
            cluster_size_low: 4,
            cluster_size_high: 7,
            seed: 1234,
        };
        assert_eq!(gen_selcol(&spec).unwrap(), gen_selcol(&spec).unwrap());
    }

    #[test]
    fn pure_qubo_handles_thousands_of_variables() {
        let spec = PureQuboSpec {
            density: 0.001,
            ..PureQuboSpec::new(3000, 2)
        };
        let m = gen_pure_qubo(&spec).unwrap();
        assert_eq!(m.n(), 3000);
        assert!(m.nnz() > 3000); // ~0.1% of 4.5M pairs
    }

    #[test]
    fn realized_density_tracks_the_spec() {
        // binomial check: observed arc count within 3 standard deviations
        let n = 60;
        let density = 0.5;
        let pairs = (n * (n - 1)) as f64;
        let spec = QcppSpec { n_vertices: n, density, seed: 3 };
        let inst = gen_qcpp(&spec).unwrap();
        let mean = pairs * density;
        let sd = (pairs * density * (1.0 - density)).sqrt();
        let observed = inst.arcs().len() as f64;
        assert!((observed - mean).abs() < 3.0 * sd + 2.0, "observed {observed}, expected {mean}±{sd}");
    }
}
