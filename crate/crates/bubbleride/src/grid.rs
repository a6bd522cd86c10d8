//! Discretization of the common noise into a finite cell partition.
//!
//! Time is cut to the dyadic mesh `t_i = i T / 2^N`; the Brownian common
//! noise is replaced by the finite process `V^N` whose knot increments are
//! the projections `Pi^(N)(B_{t_i} - B_{t_{i-1}})` onto a spatial grid of
//! spacing `base^-N` capped at `base^N` (base 4 by default). The exogenous
//! burst indicator is cut to the same mesh: `D^N = 1{tau <= t_{i-1}}` on
//! `[t_{i-1}, t_i)`, so a jump inside the last knot interval is right-censored.
//! A cell is an atom of the sigma-algebra generated by `(V^N, D^N)`; only
//! atoms realized by at least one simulated path are materialized.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::scenario::ScenarioConfig;

/// Spatial projection onto the dyadic grid: `base^-N floor(base^N x)` for
/// `|x| <= base^N`, saturating at `+-base^N` outside.
pub fn project_dyadic(x: f64, level: u32, base: u32) -> f64 {
    let scale = (base as f64).powi(level as i32);
    if x.abs() <= scale {
        (scale * x).floor() / scale
    } else {
        scale * x.signum()
    }
}

/// Integer code of the projection, used for exact cell identity.
fn project_code(x: f64, level: u32, base: u32) -> i64 {
    let scale = (base as f64).powi(level as i32);
    if x.abs() <= scale {
        (scale * x).floor() as i64
    } else if x > 0.0 {
        (scale * scale) as i64
    } else {
        -((scale * scale) as i64)
    }
}

/// Exact identity of a common-noise cell: the projected knot increments of
/// `V^N` plus the first dyadic interval on which the discretized jump process
/// is on (0 when the jump is unseen). Portable across ensembles.
#[derive(Debug, Clone, PartialEq, Eq, Hash, serde::Serialize)]
pub struct CellKey {
    pub v_codes: Vec<i64>,
    pub d_jump: u32,
}

/// Knot values of `V^N` for one path, from the fine-grid common increments.
/// The fine grid must refine the dyadic mesh.
pub fn build_v_n(db: &[f64], level: u32, base: u32, horizon: f64) -> Result<(Vec<f64>, Vec<i64>)> {
    let knots = 1usize << level;
    if db.len() % knots != 0 {
        return Err(Error::Config(format!(
            "fine grid of {} steps does not refine the dyadic mesh with {} knots",
            db.len(),
            knots
        )));
    }
    let _ = horizon;
    let per = db.len() / knots;
    let mut values = Vec::with_capacity(knots + 1);
    let mut codes = Vec::with_capacity(knots);
    values.push(0.0);
    let mut v = 0.0;
    for i in 0..knots {
        let incr: f64 = db[i * per..(i + 1) * per].iter().sum();
        let proj = project_dyadic(incr, level, base);
        codes.push(project_code(incr, level, base));
        v += proj;
        values.push(v);
    }
    Ok((values, codes))
}

/// Discretized burst indicator: per dyadic interval `[t_{i-1}, t_i)` the value
/// `1{tau <= t_{i-1}}`, summarized by the first on-interval (1-based), 0 when
/// the jump is never seen on the mesh.
pub fn build_d_n(tau: f64, level: u32, horizon: f64) -> (Vec<u8>, u32) {
    let knots = 1usize << level;
    let mut indicator = vec![0u8; knots];
    let mut first_on = 0u32;
    for i in 1..=knots {
        let left_knot = (i - 1) as f64 * horizon / knots as f64;
        if tau <= left_knot {
            indicator[i - 1] = 1;
            if first_on == 0 {
                first_on = i as u32;
            }
        }
    }
    (indicator, first_on)
}

/// Realized atoms of the sigma-algebra generated by `(V^N, D^N)` over an
/// ensemble of paths, enumerated in first-seen order.
#[derive(Debug, Clone)]
pub struct CellPartition {
    pub level: u32,
    pub keys: Vec<CellKey>,
    pub cell_of_path: Vec<usize>,
    pub paths_in_cell: Vec<Vec<usize>>,
    /// Empirical probabilities, summing to one.
    pub prob: Vec<f64>,
}

impl CellPartition {
    pub fn cell_count(&self) -> usize {
        self.keys.len()
    }
}

/// Group paths by cell key. Deterministic given path order.
pub fn partition_paths(level: u32, keys_per_path: Vec<CellKey>) -> CellPartition {
    let n_paths = keys_per_path.len();
    let mut index: HashMap<CellKey, usize> = HashMap::new();
    let mut keys = Vec::new();
    let mut cell_of_path = Vec::with_capacity(n_paths);
    let mut paths_in_cell: Vec<Vec<usize>> = Vec::new();
    for (j, key) in keys_per_path.into_iter().enumerate() {
        let cell = *index.entry(key.clone()).or_insert_with(|| {
            keys.push(key);
            paths_in_cell.push(Vec::new());
            keys.len() - 1
        });
        cell_of_path.push(cell);
        paths_in_cell[cell].push(j);
    }
    let prob = paths_in_cell
        .iter()
        .map(|p| p.len() as f64 / n_paths as f64)
        .collect();
    CellPartition {
        level,
        keys,
        cell_of_path,
        paths_in_cell,
        prob,
    }
}

/// Build the partition for a whole ensemble of common increments and burst
/// times.
pub fn partition_ensemble(config: &ScenarioConfig, db: &[Vec<f64>], tau: &[f64]) -> Result<CellPartition> {
    let level = config.dyadic_level;
    let base = config.space_grid_exponent;
    let mut keys = Vec::with_capacity(db.len());
    for (path_db, &path_tau) in db.iter().zip(tau.iter()) {
        let (_, v_codes) = build_v_n(path_db, level, base, config.horizon_t)?;
        let (_, d_jump) = build_d_n(path_tau, level, config.horizon_t);
        keys.push(CellKey { v_codes, d_jump });
    }
    Ok(partition_paths(level, keys))
}

/// Self-normalized weighted empirical measure of per-path samples restricted
/// to one cell.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedEmpirical {
    pub values: Vec<f64>,
    /// Normalized weights, summing to one.
    pub weights: Vec<f64>,
}

impl WeightedEmpirical {
    pub fn mean(&self) -> f64 {
        self.values.iter().zip(&self.weights).map(|(v, w)| v * w).sum()
    }
}

/// Conditional law of `samples` given the cell, under the reweighting
/// `weights` (nonnegative, at least one positive inside the cell).
pub fn conditional_law(
    cell: usize,
    cell_paths: &[usize],
    samples: &[f64],
    weights: &[f64],
) -> Result<WeightedEmpirical> {
    let mut values = Vec::with_capacity(cell_paths.len());
    let mut w = Vec::with_capacity(cell_paths.len());
    let mut total = 0.0;
    for &j in cell_paths {
        values.push(samples[j]);
        w.push(weights[j]);
        total += weights[j];
    }
    if !(total > 0.0) {
        return Err(Error::DegenerateCell {
            cell,
            message: "all Girsanov weights vanish in the cell".to_string(),
        });
    }
    for wi in &mut w {
        *wi /= total;
    }
    Ok(WeightedEmpirical { values, weights: w })
}
