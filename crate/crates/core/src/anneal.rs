//! Digital-annealer-style stochastic search.
//!
//! Both modes walk single-flip neighborhoods. Every iteration evaluates all
//! `n` flip deltas, draws one acceptance flag per variable with the
//! Metropolis probability `min(1, exp(-β·(ΔE_j − E_off)))`, and flips one
//! flagged variable chosen uniformly. When no variable is flagged the
//! dynamic offset `E_off` grows by a constant, boosting the escape
//! probability at local minima; any accepted flip resets it to zero.
//!
//! *Normal mode* runs one trajectory under a geometric β schedule from
//! `beta_start` to `beta_end`. *Parallel mode* runs `replicas` trajectories
//! at fixed temperatures forming a geometric β ladder and lets adjacent
//! ladder neighbors exchange states every `exchange_interval` iterations
//! (alternating even/odd pairings), the usual replica-exchange scheme.
//!
//! Determinism: replica `r` draws from substream `r` of the run seed, the
//! swap chain from substream `replicas`, and normal mode from substream 0.
//! Per step, the flag draws are consumed in variable-index order followed by
//! one selection draw (only when at least one flag is set); each swap
//! attempt consumes exactly one draw. Results are therefore identical for
//! any thread count.

use alloc::vec::Vec;

use crate::qubo::{BinaryState, FlipEval, QuboModel};
use crate::rng::{index, substream, unit_f64, ChaCha8Rng, RngCore};

/// Re-derive energy and deltas from the model after this many accepted
/// flips, bounding float drift on non-integer inputs.
const REFRESH_EVERY: u64 = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Single trajectory, annealed temperature, dynamic offset.
    Normal,
    /// Replica exchange over a fixed temperature ladder.
    Parallel,
}

/// Run parameters. `iterations` counts steps per trajectory, so a parallel
/// run spends `replicas × iterations` flip attempts in total.
#[derive(Clone, Debug, PartialEq)]
pub struct AnnealConfig {
    pub mode: Mode,
    pub iterations: u64,
    pub beta_start: f64,
    pub beta_end: f64,
    pub offset_increment: f64,
    pub replicas: usize,
    pub exchange_interval: u64,
    pub seed: u64,
}

impl AnnealConfig {
    /// Defaults scaled to the model's mean absolute coefficient `m`:
    /// β runs from `0.01/m` to `10/m` and the offset grows by `0.1·m`,
    /// so behavior is invariant under coefficient scaling.
    pub fn for_model(model: &QuboModel, mode: Mode, iterations: u64, seed: u64) -> Self {
        let m = model.mean_abs_coeff();
        AnnealConfig {
            mode,
            iterations,
            beta_start: 0.01 / m,
            beta_end: 10.0 / m,
            offset_increment: 0.1 * m,
            replicas: 4,
            exchange_interval: 100,
            seed,
        }
    }

    fn validate(&self) {
        assert!(self.iterations >= 1, "iterations must be at least 1");
        assert!(
            self.beta_start > 0.0 && self.beta_end > 0.0 && self.beta_start <= self.beta_end,
            "need 0 < beta_start <= beta_end"
        );
        assert!(self.offset_increment >= 0.0, "offset increment must be non-negative");
        if self.mode == Mode::Parallel {
            assert!(self.replicas >= 2, "parallel mode needs at least 2 replicas");
            assert!(self.exchange_interval >= 1, "exchange interval must be at least 1");
        }
    }
}

/// Outcome of a run. `best_energy` always equals `model.energy(&best_state)`
/// recomputed exactly at the end.
#[derive(Clone, Debug)]
pub struct AnnealResult {
    pub best_state: BinaryState,
    pub best_energy: f64,
    /// Total step calls across all trajectories.
    pub iterations_run: u64,
    pub flips_accepted: u64,
    /// Seconds; 0.0 when built without the `std` feature.
    pub wall_time: f64,
}

/// Metropolis flip probability `min(1, exp(-beta·(delta − offset)))`.
pub fn accept_probability(delta: f64, beta: f64, offset: f64) -> f64 {
    debug_assert!(beta > 0.0 && offset >= 0.0);
    let p = libm::exp(-beta * (delta - offset));
    if p > 1.0 {
        1.0
    } else {
        p
    }
}

/// Geometric interpolation `β(t) = beta_start·(beta_end/beta_start)^(t/(T−1))`,
/// non-decreasing in `t` with `β(0) = beta_start` and `β(T−1) = beta_end`.
pub fn beta_schedule(config: &AnnealConfig, t: u64) -> f64 {
    debug_assert!(t < config.iterations);
    if config.iterations <= 1 || config.beta_start == config.beta_end {
        return config.beta_start;
    }
    let frac = t as f64 / (config.iterations - 1) as f64;
    config.beta_start * libm::pow(config.beta_end / config.beta_start, frac)
}

/// Fixed β ladder for parallel mode, geometric from `beta_start` to
/// `beta_end` over `replicas` rungs.
pub fn replica_betas(config: &AnnealConfig) -> Vec<f64> {
    let r = config.replicas;
    debug_assert!(r >= 2);
    (0..r)
        .map(|k| {
            let frac = k as f64 / (r - 1) as f64;
            config.beta_start * libm::pow(config.beta_end / config.beta_start, frac)
        })
        .collect()
}

/// Probability that two replicas exchange states:
/// `min(1, exp((β_a − β_b)·(E_a − E_b)))`.
pub fn swap_probability(beta_a: f64, energy_a: f64, beta_b: f64, energy_b: f64) -> f64 {
    let p = libm::exp((beta_a - beta_b) * (energy_a - energy_b));
    if p > 1.0 {
        1.0
    } else {
        p
    }
}

/// One annealing trajectory: state, maintained energy and flip deltas,
/// dynamic offset, and best-seen tracking.
pub struct Trajectory<'a> {
    eval: FlipEval<'a>,
    offset: f64,
    best_energy: f64,
    best_state: BinaryState,
    flips_accepted: u64,
    flagged: Vec<usize>,
}

impl<'a> Trajectory<'a> {
    pub fn new(model: &'a QuboModel, initial: BinaryState) -> Self {
        let eval = FlipEval::new(model, initial);
        let best_energy = eval.energy;
        let best_state = eval.state.clone();
        Trajectory {
            eval,
            offset: 0.0,
            best_energy,
            best_state,
            flips_accepted: 0,
            flagged: Vec::new(),
        }
    }

    pub fn state(&self) -> &BinaryState {
        &self.eval.state
    }

    pub fn energy(&self) -> f64 {
        self.eval.energy
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn best_energy(&self) -> f64 {
        self.best_energy
    }

    pub fn best_state(&self) -> &BinaryState {
        &self.best_state
    }

    pub fn flips_accepted(&self) -> u64 {
        self.flips_accepted
    }

    /// One DA step. Draws a flag per variable with
    /// `accept_probability(ΔE_j, beta, offset)` in index order; if any flag
    /// is set, flips one flagged variable picked uniformly by one more draw
    /// and resets the offset; otherwise grows the offset by
    /// `offset_increment`. Returns whether a flip happened.
    pub fn step(&mut self, beta: f64, offset_increment: f64, rng: &mut impl RngCore) -> bool {
        let n = self.eval.deltas.len();
        self.flagged.clear();
        for j in 0..n {
            let u = unit_f64(rng);
            if u < accept_probability(self.eval.deltas[j], beta, self.offset) {
                self.flagged.push(j);
            }
        }
        if self.flagged.is_empty() {
            self.offset += offset_increment;
            return false;
        }
        let pick = self.flagged[index(rng, self.flagged.len())];
        self.eval.flip(pick);
        self.offset = 0.0;
        self.flips_accepted += 1;
        if self.flips_accepted.is_multiple_of(REFRESH_EVERY) {
            self.eval.refresh();
        }
        if self.eval.energy < self.best_energy {
            self.best_energy = self.eval.energy;
            self.best_state.clone_from(&self.eval.state);
        }
        true
    }
}

/// Attempts a state exchange between two replicas at fixed temperatures.
/// States (with their energies) swap; the temperatures stay put. Consumes
/// exactly one uniform draw so swap-chain usage is the same on every path.
pub fn attempt_swap<'a>(
    a: &mut Trajectory<'a>,
    beta_a: f64,
    b: &mut Trajectory<'a>,
    beta_b: f64,
    rng: &mut impl RngCore,
) -> bool {
    let p = swap_probability(beta_a, a.energy(), beta_b, b.energy());
    let u = unit_f64(rng);
    if u < p {
        a.eval.swap_contents(&mut b.eval);
        true
    } else {
        false
    }
}

/// Runs the mode selected by `config`. Deterministic in `(model, config)`.
pub fn anneal(model: &QuboModel, config: &AnnealConfig) -> AnnealResult {
    match config.mode {
        Mode::Normal => anneal_normal(model, config),
        Mode::Parallel => anneal_parallel(model, config),
    }
}

/// Like [`anneal`], running parallel-mode replicas on up to `threads` OS
/// threads. The result is bit-identical to the single-threaded run.
#[cfg(feature = "std")]
pub fn anneal_threads(model: &QuboModel, config: &AnnealConfig, threads: usize) -> AnnealResult {
    match config.mode {
        Mode::Normal => anneal_normal(model, config),
        Mode::Parallel => run_parallel(model, config, threads.max(1)),
    }
}

/// Single-trajectory run under the geometric β schedule. The initial state
/// is drawn uniformly from substream 0 of the seed.
pub fn anneal_normal(model: &QuboModel, config: &AnnealConfig) -> AnnealResult {
    config.validate();
    let clock = Clock::start();
    let mut rng = substream(config.seed, 0);
    let initial = BinaryState::random(model.n(), &mut rng);
    let mut traj = Trajectory::new(model, initial);
    for t in 0..config.iterations {
        let beta = beta_schedule(config, t);
        traj.step(beta, config.offset_increment, &mut rng);
    }
    let best_state = traj.best_state.clone();
    let best_energy = model.energy(&best_state);
    AnnealResult {
        best_state,
        best_energy,
        iterations_run: config.iterations,
        flips_accepted: traj.flips_accepted,
        wall_time: clock.seconds(),
    }
}

/// Replica-exchange run; see the module docs for the ladder, pairing, and
/// stream conventions.
pub fn anneal_parallel(model: &QuboModel, config: &AnnealConfig) -> AnnealResult {
    run_parallel(model, config, 1)
}

struct ReplicaRun<'a> {
    traj: Trajectory<'a>,
    rng: ChaCha8Rng,
    beta: f64,
}

fn run_parallel(model: &QuboModel, config: &AnnealConfig, threads: usize) -> AnnealResult {
    config.validate();
    assert_eq!(config.mode, Mode::Parallel, "parallel runner needs parallel mode");
    let clock = Clock::start();
    let betas = replica_betas(config);
    let mut replicas: Vec<ReplicaRun<'_>> = betas
        .iter()
        .enumerate()
        .map(|(r, &beta)| {
            let mut rng = substream(config.seed, r as u64);
            let initial = BinaryState::random(model.n(), &mut rng);
            ReplicaRun {
                traj: Trajectory::new(model, initial),
                rng,
                beta,
            }
        })
        .collect();
    let mut swap_rng = substream(config.seed, config.replicas as u64);

    let mut done: u64 = 0;
    while done < config.iterations {
        let until_exchange = config.exchange_interval - (done % config.exchange_interval);
        let segment = until_exchange.min(config.iterations - done);
        advance(&mut replicas, segment, config.offset_increment, threads);
        done += segment;
        if done.is_multiple_of(config.exchange_interval) {
            let event = done / config.exchange_interval - 1;
            let first = (event % 2) as usize;
            let mut a = first;
            while a + 1 < replicas.len() {
                let (lo, hi) = replicas.split_at_mut(a + 1);
                let ra = &mut lo[a];
                let rb = &mut hi[0];
                attempt_swap(&mut ra.traj, ra.beta, &mut rb.traj, rb.beta, &mut swap_rng);
                a += 2;
            }
        }
    }

    let mut best_state = replicas[0].traj.best_state().clone();
    let mut best_energy = replicas[0].traj.best_energy();
    for rep in &replicas[1..] {
        if rep.traj.best_energy() < best_energy {
            best_energy = rep.traj.best_energy();
            best_state = rep.traj.best_state().clone();
        }
    }
    let best_energy = model.energy(&best_state);
    let flips = replicas.iter().map(|r| r.traj.flips_accepted()).sum();
    AnnealResult {
        best_state,
        best_energy,
        iterations_run: config.iterations * config.replicas as u64,
        flips_accepted: flips,
        wall_time: clock.seconds(),
    }
}

/// Advances every replica by `steps` flip attempts. Replicas are fully
/// independent between exchange barriers, so splitting them across threads
/// cannot change any result.
fn advance(replicas: &mut [ReplicaRun<'_>], steps: u64, offset_increment: f64, threads: usize) {
    #[cfg(feature = "std")]
    if threads > 1 && replicas.len() > 1 {
        let per = replicas.len().div_ceil(threads);
        std::thread::scope(|scope| {
            for chunk in replicas.chunks_mut(per) {
                scope.spawn(move || {
                    for rep in chunk {
                        for _ in 0..steps {
                            rep.traj.step(rep.beta, offset_increment, &mut rep.rng);
                        }
                    }
                });
            }
        });
        return;
    }
    let _ = threads;
    for rep in replicas {
        for _ in 0..steps {
            rep.traj.step(rep.beta, offset_increment, &mut rep.rng);
        }
    }
}

struct Clock {
    #[cfg(feature = "std")]
    start: std::time::Instant,
}

impl Clock {
    fn start() -> Self {
        Clock {
            #[cfg(feature = "std")]
            start: std::time::Instant::now(),
        }
    }

    #[cfg(feature = "std")]
    fn seconds(&self) -> f64 {
        self.start.elapsed().as_secs_f64()
    }

    #[cfg(not(feature = "std"))]
    fn seconds(&self) -> f64 {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn m1() -> QuboModel {
        let mut m = QuboModel::new(2);
        m.add_linear(0, -1.0);
        m.add_linear(1, -1.0);
        m.add_quad(0, 1, 2.0);
        m
    }

    fn cfg(mode: Mode, iterations: u64, seed: u64) -> AnnealConfig {
        AnnealConfig {
            mode,
            iterations,
            beta_start: 0.05,
            beta_end: 20.0,
            offset_increment: 0.1,
            replicas: 4,
            exchange_interval: 25,
            seed,
        }
    }

    #[test]
    fn accept_probability_saturates_and_halves() {
        assert_eq!(accept_probability(-5.0, 1.0, 0.0), 1.0);
        assert_eq!(accept_probability(0.0, 2.0, 0.0), 1.0);
        let half = accept_probability(core::f64::consts::LN_2, 1.0, 0.0);
        assert!((half - 0.5).abs() < 1e-15);
        // offset makes a worsening move free
        assert_eq!(accept_probability(3.0, 1.0, 3.0), 1.0);
        // huge delta underflows to zero
        assert_eq!(accept_probability(1e9, 1.0, 0.0), 0.0);
    }

    #[test]
    fn beta_schedule_endpoints_and_midpoint() {
        let mut c = cfg(Mode::Normal, 3, 0);
        c.beta_start = 1.0;
        c.beta_end = 100.0;
        assert_eq!(beta_schedule(&c, 0), 1.0);
        assert!((beta_schedule(&c, 1) - 10.0).abs() < 1e-12);
        assert_eq!(beta_schedule(&c, 2), 100.0);
        c.beta_end = 1.0;
        for t in 0..3 {
            assert_eq!(beta_schedule(&c, t), 1.0);
        }
    }

    #[test]
    fn beta_schedule_is_nondecreasing() {
        let mut c = cfg(Mode::Normal, 1000, 0);
        c.beta_start = 0.01;
        c.beta_end = 50.0;
        let mut prev = 0.0;
        for t in 0..1000 {
            let b = beta_schedule(&c, t);
            assert!(b >= prev);
            prev = b;
        }
        assert_eq!(prev, 50.0);
    }

    #[test]
    fn step_on_zero_model_always_flips() {
        let zero = QuboModel::new(5);
        let mut traj = Trajectory::new(&zero, BinaryState::zeros(5));
        let mut rng = substream(1, 0);
        let accepted = traj.step(1.0, 0.5, &mut rng);
        assert!(accepted);
        assert_eq!(traj.offset(), 0.0);
        assert_eq!(traj.state().count_ones(), 1);
    }

    #[test]
    fn step_grows_offset_when_nothing_is_flagged() {
        let mut m = QuboModel::new(3);
        for j in 0..3 {
            m.add_linear(j, 1e6);
        }
        let mut traj = Trajectory::new(&m, BinaryState::zeros(3));
        let mut rng = substream(2, 0);
        let accepted = traj.step(10.0, 1.0, &mut rng);
        assert!(!accepted);
        assert_eq!(traj.offset(), 1.0);
        let accepted = traj.step(10.0, 1.0, &mut rng);
        assert!(!accepted);
        assert_eq!(traj.offset(), 2.0);
    }

    #[test]
    fn cold_step_from_origin_takes_an_improving_flip() {
        let m = m1();
        let mut traj = Trajectory::new(&m, BinaryState::zeros(2));
        let mut rng = substream(3, 0);
        // at beta = 500 a worsening flip has probability exp(-500·ΔE) ≈ 0;
        // both flips from (0,0) improve, so one must be taken
        let accepted = traj.step(500.0, 0.0, &mut rng);
        assert!(accepted);
        assert_eq!(traj.energy(), -1.0);
    }

    #[test]
    fn improving_flips_always_flagged() {
        for delta in [-10.0, -0.5, 0.0] {
            for off in [0.0, 0.25] {
                assert_eq!(accept_probability(delta, 3.0, off), 1.0);
            }
        }
        assert_eq!(accept_probability(0.2, 3.0, 0.2), 1.0);
    }

    #[test]
    fn normal_mode_finds_m1_optimum_and_is_deterministic() {
        let m = m1();
        let c = cfg(Mode::Normal, 10_000, 7);
        let a = anneal_normal(&m, &c);
        assert_eq!(a.best_energy, -1.0);
        let b = anneal_normal(&m, &c);
        assert_eq!(a.best_state, b.best_state);
        assert_eq!(a.best_energy, b.best_energy);
        assert_eq!(a.flips_accepted, b.flips_accepted);
        assert_eq!(a.iterations_run, c.iterations);
    }

    #[test]
    fn normal_mode_on_zero_model() {
        let zero = QuboModel::new(6);
        let r = anneal_normal(&zero, &cfg(Mode::Normal, 100, 42));
        assert_eq!(r.best_energy, 0.0);
    }

    #[test]
    fn best_energy_is_monotone_over_steps() {
        let mut m = QuboModel::new(8);
        for j in 0..8 {
            m.add_linear(j, if j % 2 == 0 { -3.0 } else { 2.0 });
        }
        m.add_quad(0, 1, 4.0);
        m.add_quad(2, 5, -1.0);
        let mut rng = substream(11, 0);
        let mut traj = Trajectory::new(&m, BinaryState::random(8, &mut rng));
        let mut prev = traj.best_energy();
        for _ in 0..500 {
            traj.step(0.8, 0.05, &mut rng);
            assert!(traj.best_energy() <= prev);
            assert!(traj.best_energy() <= traj.energy());
            prev = traj.best_energy();
        }
    }

    #[test]
    fn swap_probability_cases() {
        assert_eq!(swap_probability(2.0, 5.0, 1.0, 5.0), 1.0);
        // colder replica (larger beta) holding the worse state swaps surely
        assert_eq!(swap_probability(2.0, 9.0, 1.0, 1.0), 1.0);
        let p = swap_probability(2.0, 0.0, 1.0, 1.0);
        assert!((p - (-1.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn attempt_swap_exchanges_states_not_betas() {
        let m = m1();
        // the colder replica (beta 2) holds the worse state: certain swap
        let mut a = Trajectory::new(&m, BinaryState::from_bits(vec![1, 1]));
        let mut b = Trajectory::new(&m, BinaryState::from_bits(vec![1, 0]));
        let mut rng = substream(4, 0);
        let swapped = attempt_swap(&mut a, 2.0, &mut b, 1.0, &mut rng);
        assert!(swapped);
        assert_eq!(a.state().bits(), &[1, 0]);
        assert_eq!(b.state().bits(), &[1, 1]);
        assert_eq!(a.energy(), -1.0);
        assert_eq!(b.energy(), 0.0);
    }

    #[test]
    fn parallel_mode_finds_m1_optimum_and_is_deterministic() {
        let m = m1();
        let c = cfg(Mode::Parallel, 2_500, 9);
        let a = anneal_parallel(&m, &c);
        assert_eq!(a.best_energy, -1.0);
        let b = anneal_parallel(&m, &c);
        assert_eq!(a.best_state, b.best_state);
        assert_eq!(a.flips_accepted, b.flips_accepted);
        assert_eq!(a.iterations_run, c.iterations * 4);
    }

    #[test]
    fn parallel_on_zero_model_two_replicas() {
        let zero = QuboModel::new(4);
        let mut c = cfg(Mode::Parallel, 50, 3);
        c.replicas = 2;
        let r = anneal_parallel(&zero, &c);
        assert_eq!(r.best_energy, 0.0);
    }

    #[cfg(feature = "std")]
    #[test]
    fn thread_count_does_not_change_results() {
        let mut m = QuboModel::new(10);
        for j in 0..10 {
            m.add_linear(j, (j as f64) - 4.5);
        }
        m.add_quad(0, 9, 3.0);
        m.add_quad(2, 3, -2.0);
        let c = cfg(Mode::Parallel, 1_000, 17);
        let seq = anneal_parallel(&m, &c);
        for threads in [2, 4, 7] {
            let par = anneal_threads(&m, &c, threads);
            assert_eq!(seq.best_state, par.best_state);
            assert_eq!(seq.best_energy, par.best_energy);
            assert_eq!(seq.flips_accepted, par.flips_accepted);
        }
    }

    #[test]
    fn for_model_defaults_scale_with_coefficients() {
        let m = m1();
        let c = AnnealConfig::for_model(&m, Mode::Normal, 100, 0);
        let scaled = m.scale(10.0);
        let cs = AnnealConfig::for_model(&scaled, Mode::Normal, 100, 0);
        assert!((c.beta_start * 10.0 - cs.beta_start).abs() < 1e-12);
        assert!((c.beta_end * 10.0 - cs.beta_end).abs() < 1e-12);
        assert!((c.offset_increment / 10.0 - cs.offset_increment).abs() < 1e-12);
    }
}
