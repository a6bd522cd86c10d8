//! Seed-reproducible randomness.
//!
//! Every draw comes from a counter-based substream keyed by
//! `(master_seed, stream_role, path index, lane index)`: the tuple is written
//! into a ChaCha key, so streams are mutually independent and a path's draws
//! are bit-identical regardless of how work is scheduled across threads.
//! Exogenous burst times invert the trapezoid cumulative hazard of the
//! configured intensity against a standard exponential draw; times past the
//! horizon are reported as the `+inf` sentinel, which compares larger than
//! every grid time.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Exp1, StandardNormal};
use rayon::prelude::*;

use crate::scenario::ScenarioConfig;

/// Independent randomness roles. Distinct roles never share a substream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StreamRole {
    CommonNoise,
    Idiosyncratic,
    ExoBurst,
    InitWealth,
    InitThreshold,
}

impl StreamRole {
    fn id(self) -> u32 {
        match self {
            StreamRole::CommonNoise => 0,
            StreamRole::Idiosyncratic => 1,
            StreamRole::ExoBurst => 2,
            StreamRole::InitWealth => 3,
            StreamRole::InitThreshold => 4,
        }
    }
}

/// Keyed substream for `(master_seed, role, path, lane)`.
pub fn substream(master_seed: u64, role: StreamRole, path: u64, lane: u64) -> ChaCha12Rng {
    let mut key = [0u8; 32];
    key[0..8].copy_from_slice(&master_seed.to_le_bytes());
    key[8..12].copy_from_slice(&role.id().to_le_bytes());
    key[12..20].copy_from_slice(&path.to_le_bytes());
    key[20..28].copy_from_slice(&lane.to_le_bytes());
    ChaCha12Rng::from_seed(key)
}

/// Monte Carlo noise for the representative-agent ensemble: one common-noise
/// path, one idiosyncratic path, one exogenous burst time and one initial
/// datum (wealth, threshold) per path.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseBundle {
    pub time_grid: Vec<f64>,
    /// Common Brownian increments, `db[path][step]`.
    pub db: Vec<Vec<f64>>,
    /// Idiosyncratic Brownian increments, `dw[path][step]`.
    pub dw: Vec<Vec<f64>>,
    /// Exogenous burst times, `+inf` when past the horizon.
    pub tau: Vec<f64>,
    pub init_wealth: Vec<f64>,
    pub init_threshold: Vec<f64>,
}

fn brownian_increments(rng: &mut ChaCha12Rng, n_steps: usize, dt: f64) -> Vec<f64> {
    let scale = dt.sqrt();
    (0..n_steps)
        .map(|_| {
            let z: f64 = rng.sample(StandardNormal);
            scale * z
        })
        .collect()
}

fn sample_wealth(config: &ScenarioConfig, rng: &mut ChaCha12Rng) -> f64 {
    match &config.dist_wealth_nu_k {
        crate::scenario::WealthDist::Normal { mean, std } => {
            let z: f64 = rng.sample(StandardNormal);
            mean + std * z
        }
        crate::scenario::WealthDist::LognormalShifted { mu, sigma, shift } => {
            let z: f64 = rng.sample(StandardNormal);
            shift + (mu + sigma * z).exp()
        }
    }
}

/// Invert the trapezoid cumulative hazard against a standard exponential
/// draw. Returns `+inf` when the draw exceeds the total hazard over [0, T].
pub fn sample_exogenous_burst(config: &ScenarioConfig, rng: &mut ChaCha12Rng) -> f64 {
    let cum = config.cumulative_hazard();
    invert_hazard(&cum, config.dt(), rng.sample(Exp1))
}

fn invert_hazard(cum: &[f64], dt: f64, e: f64) -> f64 {
    let n = cum.len() - 1;
    if e > cum[n] {
        return f64::INFINITY;
    }
    let i = cum.partition_point(|&c| c < e);
    if i == 0 {
        return 0.0;
    }
    let seg = cum[i] - cum[i - 1];
    let frac = if seg > 0.0 { (e - cum[i - 1]) / seg } else { 1.0 };
    ((i - 1) as f64 + frac) * dt
}

/// Draw the whole representative-agent noise bundle for a config. Path
/// substreams are independent, so generation is a deterministic parallel map.
pub fn sample_noise(config: &ScenarioConfig) -> NoiseBundle {
    let n_paths = config.n_paths;
    let n_steps = config.n_steps;
    let dt = config.dt();
    let seed = config.master_seed;

    let per_path: Vec<(Vec<f64>, Vec<f64>, f64, f64, f64)> = (0..n_paths as u64)
        .into_par_iter()
        .map(|j| {
            let mut rng_b = substream(seed, StreamRole::CommonNoise, j, 0);
            let mut rng_w = substream(seed, StreamRole::Idiosyncratic, j, 0);
            let mut rng_tau = substream(seed, StreamRole::ExoBurst, j, 0);
            let mut rng_k = substream(seed, StreamRole::InitWealth, j, 0);
            let mut rng_p = substream(seed, StreamRole::InitThreshold, j, 0);
            let db = brownian_increments(&mut rng_b, n_steps, dt);
            let dw = brownian_increments(&mut rng_w, n_steps, dt);
            let tau = sample_exogenous_burst(config, &mut rng_tau);
            let k0 = sample_wealth(config, &mut rng_k);
            let u: f64 = rng_p.random();
            let p_star = config.dist_thresholds_nu_p.quantile(config.price_init_p0, u);
            (db, dw, tau, k0, p_star)
        })
        .collect();

    let mut bundle = NoiseBundle {
        time_grid: config.time_grid(),
        db: Vec::with_capacity(n_paths),
        dw: Vec::with_capacity(n_paths),
        tau: Vec::with_capacity(n_paths),
        init_wealth: Vec::with_capacity(n_paths),
        init_threshold: Vec::with_capacity(n_paths),
    };
    for (db, dw, tau, k0, p_star) in per_path {
        bundle.db.push(db);
        bundle.dw.push(dw);
        bundle.tau.push(tau);
        bundle.init_wealth.push(k0);
        bundle.init_threshold.push(p_star);
    }
    bundle
}

/// Noise for one finite-player game: a shared common-noise path plus
/// per-player idiosyncratic noise and initial data. `game` indexes the Monte
/// Carlo repetition and doubles as the common-noise path index.
#[derive(Debug, Clone, PartialEq)]
pub struct PopulationNoise {
    pub db: Vec<f64>,
    /// `dw[player][step]`.
    pub dw: Vec<Vec<f64>>,
    pub tau: f64,
    pub wealth: Vec<f64>,
    pub thresholds: Vec<f64>,
}

pub fn sample_population_noise(config: &ScenarioConfig, game: u64) -> PopulationNoise {
    let n_steps = config.n_steps;
    let dt = config.dt();
    let seed = config.master_seed;
    let mut rng_b = substream(seed, StreamRole::CommonNoise, game, 0);
    let mut rng_tau = substream(seed, StreamRole::ExoBurst, game, 0);
    let db = brownian_increments(&mut rng_b, n_steps, dt);
    let tau = sample_exogenous_burst(config, &mut rng_tau);

    let players: Vec<(Vec<f64>, f64, f64)> = (0..config.n_players as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng_w = substream(seed, StreamRole::Idiosyncratic, game, i + 1);
            let mut rng_k = substream(seed, StreamRole::InitWealth, game, i + 1);
            let mut rng_p = substream(seed, StreamRole::InitThreshold, game, i + 1);
            let dw = brownian_increments(&mut rng_w, n_steps, dt);
            let k0 = sample_wealth(config, &mut rng_k);
            let u: f64 = rng_p.random();
            let p_star = config.dist_thresholds_nu_p.quantile(config.price_init_p0, u);
            (dw, k0, p_star)
        })
        .collect();

    let mut out = PopulationNoise {
        db,
        dw: Vec::with_capacity(config.n_players),
        tau,
        wealth: Vec::with_capacity(config.n_players),
        thresholds: Vec::with_capacity(config.n_players),
    };
    for (dw, k0, p_star) in players {
        out.dw.push(dw);
        out.wealth.push(k0);
        out.thresholds.push(p_star);
    }
    out
}
