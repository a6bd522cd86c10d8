//! Bubble price dynamics.
//!
//! Pre-burst the price follows a path-dependent Euler scheme
//!
//! ```text
//! p_{k+1} = p_k + b(t_k, m_k, p_k) dt + sigma0 dB_k,    m_k = max_{j<=k} p_j,
//! ```
//!
//! where the trend `b` is fed by the fraction of entered players through the
//! threshold CDF evaluated at the running maximum. The bubble component
//! `gamma` accumulates the drift with the same left-point rule, so the value
//! removed at the burst is measurable from pre-burst data alone. At the burst
//! the price drops by `beta * gamma` and the drift switches to the permanent
//! impact of the aggregate trading rate.
//!
//! Uniqueness of the continuous-time dynamics rests on the drift being
//! nondecreasing in both the running maximum and the price; the same
//! monotonicity makes the Euler map order-preserving, which the tests assert
//! path by path.

use crate::error::{Error, Result};
use crate::scenario::{BetaFn, ScenarioConfig, ThresholdCdf, TrendSpec};

/// One simulated price trajectory on the uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PricePath {
    /// Price at each grid knot (n_steps + 1 values).
    pub p: Vec<f64>,
    /// Running maximum, frozen after the burst for entry purposes.
    pub m: Vec<f64>,
    /// Bubble component: accumulated pre-burst drift, frozen after the burst.
    pub gamma: Vec<f64>,
    /// Pre-burst drift value b(t_k, m_k, p_k) at each left knot (n_steps values).
    pub drift: Vec<f64>,
    /// Grid index where the burst jump was applied, if any.
    pub burst_step: Option<usize>,
    /// Jump applied at the burst step: -beta * gamma (non-positive).
    pub jump_size: f64,
    /// Whether the post-burst price ever exceeded the frozen running maximum.
    pub post_burst_exceeded_max: bool,
}

impl PricePath {
    pub fn n_steps(&self) -> usize {
        self.p.len() - 1
    }
}

/// Evaluate the bubble trend drift b(t, m, p).
///
/// Exponential: `ell * F_p(m) * p`. LPPL: `h_t * p` with
/// `h_t = A (t_c - t)^(l_t - 1) + C (t_c - t)^(l_t - 1) cos(omega ln(t_c - t) - phi)`,
/// `l_t = ell * F_p(m)` and critical time `t_c = T`; the LPPL value is clamped
/// below at zero so the drift stays nonnegative and the burst jump stays
/// non-positive.
pub fn trend_eval(
    trend: &TrendSpec,
    t: f64,
    m: f64,
    p: f64,
    fp: &ThresholdCdf,
    horizon_t: f64,
) -> Result<f64> {
    match trend {
        TrendSpec::Exponential { ell } => Ok(ell * fp.eval(m) * p),
        TrendSpec::Lppl {
            a_lppl,
            c_lppl,
            omega,
            phi_lppl,
            ell,
        } => {
            let u = horizon_t - t;
            if u <= 0.0 {
                return Err(Error::LpplSingular);
            }
            let l_t = ell * fp.eval(m);
            let pow = u.powf(l_t - 1.0);
            let h = a_lppl * pow + c_lppl * pow * (omega * u.ln() - phi_lppl).cos();
            Ok((h * p).max(0.0))
        }
    }
}

/// Simulate the pre-burst price path from the common-noise increments. No
/// burst is applied; `burst_step` is left unset.
pub fn simulate_pre_burst(config: &ScenarioConfig, db: &[f64], fp: &ThresholdCdf) -> Result<PricePath> {
    let n = config.n_steps;
    assert_eq!(db.len(), n, "increment count must match n_steps");
    let dt = config.dt();
    let mut p = vec![0.0; n + 1];
    let mut m = vec![0.0; n + 1];
    let mut gamma = vec![0.0; n + 1];
    let mut drift = vec![0.0; n];
    p[0] = config.price_init_p0;
    m[0] = config.price_init_p0;
    for k in 0..n {
        let t = k as f64 * dt;
        let b = trend_eval(&config.bubble_trend, t, m[k], p[k], fp, config.horizon_t)?;
        drift[k] = b;
        p[k + 1] = p[k] + b * dt + config.sigma0 * db[k];
        if !p[k + 1].is_finite() {
            return Err(Error::Simulation {
                step: k + 1,
                message: format!("non-finite price from drift {b}"),
            });
        }
        m[k + 1] = m[k].max(p[k + 1]);
        gamma[k + 1] = gamma[k] + b * dt;
    }
    Ok(PricePath {
        p,
        m,
        gamma,
        drift,
        burst_step: None,
        jump_size: 0.0,
        post_burst_exceeded_max: false,
    })
}

/// Apply the burst jump at `burst_step` and continue the path under the
/// impact-driven post-burst dynamics. `impact` holds the per-step aggregate
/// permanent impact values; only entries at and after the burst step are used.
/// The running maximum and the bubble component are frozen from the burst on.
/// A burst step beyond the grid end is a no-op.
pub fn apply_burst_and_continue(
    path: &PricePath,
    burst_step: Option<usize>,
    beta: &BetaFn,
    impact: &[f64],
    db: &[f64],
    config: &ScenarioConfig,
) -> PricePath {
    let n = path.n_steps();
    let mut out = path.clone();
    let b_step = match burst_step {
        Some(b) if b <= n => b,
        _ => return out,
    };
    let dt = config.dt();
    let t_burst = b_step as f64 * dt;
    let jump = -beta.eval(t_burst) * path.gamma[b_step];
    out.burst_step = Some(b_step);
    out.jump_size = jump;
    out.p[b_step] = path.p[b_step] + jump;
    let frozen_max = path.m[b_step];
    let frozen_gamma = path.gamma[b_step];
    for k in b_step..n {
        out.p[k + 1] = out.p[k] + impact[k] * dt + config.sigma0 * db[k];
        out.m[k + 1] = frozen_max;
        out.gamma[k + 1] = frozen_gamma;
        if out.p[k + 1] > frozen_max {
            out.post_burst_exceeded_max = true;
        }
    }
    if b_step < n {
        out.drift[b_step..n].fill(0.0);
    }
    out
}
