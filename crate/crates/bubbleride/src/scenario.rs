//! Scenario configuration: every model and numerical parameter, plus the
//! validation of the standing model assumptions (compact action interval
//! containing zero, positive bounded burst size, positive atom of the
//! threshold distribution at the initial price, threshold curve starting
//! strictly between zero and the mean initial inventory, nonnegative bounded
//! burst intensity, concave permanent impact).
//!
//! A scenario file is TOML with schema tag `bubbleride-scenario/1`. Unknown
//! keys are rejected. `horizon_t` and `price_init_p0` are required; every
//! other field has a documented default.

use serde::{Deserialize, Serialize};
use std::path::Path;

use crate::error::{Error, Result};

pub const SCHEMA_VERSION: &str = "bubbleride-scenario/1";

fn default_schema() -> String {
    SCHEMA_VERSION.to_string()
}
fn default_n_steps() -> usize {
    200
}
fn default_n_paths() -> usize {
    1000
}
fn default_n_players() -> usize {
    100
}
fn default_master_seed() -> u64 {
    1
}
fn default_sigma0() -> f64 {
    0.05
}
fn default_sigma() -> f64 {
    0.2
}
fn default_action_interval() -> [f64; 2] {
    [-2.0, 2.0]
}
fn default_lambda() -> f64 {
    0.5
}
fn default_phi() -> f64 {
    0.1
}
fn default_c() -> f64 {
    1.0
}
fn default_perm_impact() -> PermImpact {
    PermImpact::Linear { rho0: 0.1 }
}
fn default_beta() -> BetaFn {
    BetaFn::Constant { value: 0.3 }
}
fn default_zeta() -> ZetaFn {
    ZetaFn {
        zeta0: 0.2,
        slope: 0.05,
    }
}
fn default_intensity() -> IntensityFn {
    IntensityFn::Constant { value: 0.25 }
}
fn default_thresholds() -> ThresholdDist {
    ThresholdDist {
        w0: 1.0,
        continuous: None,
    }
}
fn default_wealth() -> WealthDist {
    WealthDist::Normal {
        mean: 1.0,
        std: 0.1,
    }
}
fn default_trend() -> TrendSpec {
    TrendSpec::Exponential { ell: 0.5 }
}
fn default_trend_growth_c() -> f64 {
    10.0
}
fn default_dyadic_level() -> u32 {
    1
}
fn default_space_grid_exponent() -> u32 {
    4
}
fn default_regression_degree() -> usize {
    2
}
fn default_regression_min_cell() -> usize {
    64
}
fn default_damping() -> f64 {
    0.5
}
fn default_fp_tolerance() -> f64 {
    1e-3
}
fn default_fp_max_iter() -> usize {
    25
}
fn default_impact_normalization() -> ImpactNormalization {
    ImpactNormalization::InGame
}
fn default_per_threshold_atoms() -> usize {
    5
}

/// Bubble trend family. `Exponential` is the entry-fed exponential growth
/// model; `Lppl` is the log-periodic power law with entry-dependent exponent
/// and critical time pinned to the horizon.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TrendSpec {
    Exponential {
        ell: f64,
    },
    Lppl {
        a_lppl: f64,
        c_lppl: f64,
        omega: f64,
        phi_lppl: f64,
        ell: f64,
    },
}

/// Permanent impact function rho on the action interval. Linear is the
/// default (concave and continuous across zero); a tabulated rho is accepted
/// subject to a discrete concavity check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PermImpact {
    Linear {
        rho0: f64,
    },
    Table {
        actions: Vec<f64>,
        values: Vec<f64>,
    },
}

impl PermImpact {
    /// Evaluate rho(a). Tables interpolate linearly and clamp outside the
    /// sampled range.
    pub fn eval(&self, a: f64) -> f64 {
        match self {
            PermImpact::Linear { rho0 } => rho0 * a,
            PermImpact::Table { actions, values } => {
                if actions.is_empty() {
                    return 0.0;
                }
                if a <= actions[0] {
                    return values[0];
                }
                if a >= actions[actions.len() - 1] {
                    return values[values.len() - 1];
                }
                let idx = actions.partition_point(|&x| x <= a) - 1;
                let (a0, a1) = (actions[idx], actions[idx + 1]);
                let (v0, v1) = (values[idx], values[idx + 1]);
                v0 + (v1 - v0) * (a - a0) / (a1 - a0)
            }
        }
    }
}

/// Deterministic burst size function beta(t).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BetaFn {
    Constant { value: f64 },
    Linear { intercept: f64, slope: f64 },
}

impl BetaFn {
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            BetaFn::Constant { value } => *value,
            BetaFn::Linear { intercept, slope } => intercept + slope * t,
        }
    }
}

/// Inventory threshold curve zeta(t) = zeta0 + slope * t.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZetaFn {
    pub zeta0: f64,
    pub slope: f64,
}

impl ZetaFn {
    pub fn eval(&self, t: f64) -> f64 {
        self.zeta0 + self.slope * t
    }
}

/// Deterministic exogenous burst intensity k(t) on [0, T].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum IntensityFn {
    Constant { value: f64 },
    Linear { intercept: f64, slope: f64 },
}

impl IntensityFn {
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            IntensityFn::Constant { value } => *value,
            IntensityFn::Linear { intercept, slope } => intercept + slope * t,
        }
    }
}

/// Continuous component of the threshold distribution, supported on
/// (P0, infinity).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ThresholdContinuous {
    /// Uniform on (P0, hi].
    Uniform { hi: f64 },
    /// P0 + Exp(rate).
    ShiftedExponential { rate: f64 },
}

/// Threshold distribution nu_p: an atom of weight `w0` at P0 plus an optional
/// continuous component of weight 1 - w0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThresholdDist {
    pub w0: f64,
    #[serde(default)]
    pub continuous: Option<ThresholdContinuous>,
}

impl ThresholdDist {
    /// CDF F_p(m) given the initial price. Right-continuous; the atom at P0
    /// is included as soon as m >= P0.
    pub fn cdf(&self, p0: f64, m: f64) -> f64 {
        if m < p0 {
            return 0.0;
        }
        let cont = match &self.continuous {
            None => 0.0,
            Some(ThresholdContinuous::Uniform { hi }) => {
                ((m - p0) / (hi - p0)).clamp(0.0, 1.0)
            }
            Some(ThresholdContinuous::ShiftedExponential { rate }) => {
                1.0 - (-rate * (m - p0)).exp()
            }
        };
        self.w0 + (1.0 - self.w0) * cont
    }

    /// Quantile transform for sampling: u in [0, 1) -> threshold value.
    pub fn quantile(&self, p0: f64, u: f64) -> f64 {
        if u < self.w0 || self.continuous.is_none() {
            return p0;
        }
        let q = ((u - self.w0) / (1.0 - self.w0)).clamp(0.0, 1.0);
        match self.continuous.as_ref().unwrap() {
            ThresholdContinuous::Uniform { hi } => p0 + q * (hi - p0),
            ThresholdContinuous::ShiftedExponential { rate } => {
                p0 - (1.0 - q).max(f64::MIN_POSITIVE).ln() / rate
            }
        }
    }
}

/// Initial wealth distribution nu_K.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum WealthDist {
    Normal { mean: f64, std: f64 },
    LognormalShifted { mu: f64, sigma: f64, shift: f64 },
}

impl WealthDist {
    /// Exact mean E[K0].
    pub fn mean(&self) -> f64 {
        match self {
            WealthDist::Normal { mean, .. } => *mean,
            WealthDist::LognormalShifted { mu, sigma, shift } => {
                shift + (mu + 0.5 * sigma * sigma).exp()
            }
        }
    }
}

/// Which population the permanent impact average is taken over: the in-game
/// players (divide by F_p of the running max) or the whole population.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ImpactNormalization {
    InGame,
    Population,
}

/// A CDF of entry thresholds usable by the price drift: either the exact
/// parametric law or the empirical CDF of a drawn finite population.
#[derive(Debug, Clone)]
pub enum ThresholdCdf {
    Parametric { p0: f64, dist: ThresholdDist },
    Empirical { sorted: Vec<f64> },
}

impl ThresholdCdf {
    pub fn eval(&self, m: f64) -> f64 {
        match self {
            ThresholdCdf::Parametric { p0, dist } => dist.cdf(*p0, m),
            ThresholdCdf::Empirical { sorted } => {
                if sorted.is_empty() {
                    return 0.0;
                }
                sorted.partition_point(|&p| p <= m) as f64 / sorted.len() as f64
            }
        }
    }
}

/// All model parameters, distributions, and numerical knobs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default = "default_schema")]
    pub schema: String,

    pub horizon_t: f64,
    pub price_init_p0: f64,

    #[serde(default = "default_n_steps")]
    pub n_steps: usize,
    #[serde(default = "default_n_paths")]
    pub n_paths: usize,
    #[serde(default = "default_n_players")]
    pub n_players: usize,
    #[serde(default = "default_master_seed")]
    pub master_seed: u64,

    #[serde(default = "default_sigma0")]
    pub sigma0: f64,
    #[serde(default = "default_sigma")]
    pub sigma: f64,

    #[serde(default = "default_action_interval")]
    pub action_interval_a: [f64; 2],
    #[serde(default = "default_lambda")]
    pub temp_impact_lambda: f64,
    #[serde(default = "default_perm_impact")]
    pub perm_impact: PermImpact,
    #[serde(default = "default_phi")]
    pub running_penalty_phi: f64,
    #[serde(default = "default_c")]
    pub terminal_penalty_c: f64,

    #[serde(default = "default_beta")]
    pub burst_size_beta: BetaFn,
    #[serde(default = "default_zeta")]
    pub inventory_threshold_zeta: ZetaFn,
    #[serde(default = "default_intensity")]
    pub exo_intensity_k: IntensityFn,

    #[serde(default = "default_thresholds")]
    pub dist_thresholds_nu_p: ThresholdDist,
    #[serde(default = "default_wealth")]
    pub dist_wealth_nu_k: WealthDist,

    #[serde(default = "default_trend")]
    pub bubble_trend: TrendSpec,
    /// Constant C in the sampled linear-growth bound |b| <= C (1 + m).
    #[serde(default = "default_trend_growth_c")]
    pub trend_growth_c: f64,

    #[serde(default = "default_dyadic_level")]
    pub dyadic_level: u32,
    #[serde(default = "default_space_grid_exponent")]
    pub space_grid_exponent: u32,
    #[serde(default = "default_regression_degree")]
    pub regression_degree: usize,
    /// Cells with fewer paths than this pool into a global regression group.
    #[serde(default = "default_regression_min_cell")]
    pub regression_min_cell: usize,
    #[serde(default = "default_damping")]
    pub damping_delta: f64,
    #[serde(default = "default_fp_tolerance")]
    pub fp_tolerance: f64,
    #[serde(default = "default_fp_max_iter")]
    pub fp_max_iter: usize,
    #[serde(default = "default_impact_normalization")]
    pub impact_normalization: ImpactNormalization,
    #[serde(default = "default_per_threshold_atoms")]
    pub per_threshold_atoms: usize,
}

impl ScenarioConfig {
    /// A baseline config used by tests and as the seed of shipped scenarios.
    pub fn baseline(horizon_t: f64, price_init_p0: f64) -> Self {
        let text = format!("horizon_t = {horizon_t}\nprice_init_p0 = {price_init_p0}\n");
        toml::from_str(&text).expect("baseline config parses")
    }

    pub fn dt(&self) -> f64 {
        self.horizon_t / self.n_steps as f64
    }

    /// Uniform time grid with n_steps + 1 knots.
    pub fn time_grid(&self) -> Vec<f64> {
        let dt = self.dt();
        (0..=self.n_steps).map(|k| k as f64 * dt).collect()
    }

    pub fn a_lo(&self) -> f64 {
        self.action_interval_a[0]
    }

    pub fn a_hi(&self) -> f64 {
        self.action_interval_a[1]
    }

    pub fn clamp_action(&self, a: f64) -> f64 {
        a.clamp(self.a_lo(), self.a_hi())
    }

    pub fn threshold_cdf(&self) -> ThresholdCdf {
        ThresholdCdf::Parametric {
            p0: self.price_init_p0,
            dist: self.dist_thresholds_nu_p.clone(),
        }
    }

    /// Cumulative hazard of the exogenous burst on the simulation grid,
    /// trapezoid rule; entry i holds Lambda(t_i).
    pub fn cumulative_hazard(&self) -> Vec<f64> {
        let dt = self.dt();
        let mut cum = vec![0.0; self.n_steps + 1];
        for i in 0..self.n_steps {
            let t0 = i as f64 * dt;
            let t1 = t0 + dt;
            let k0 = self.exo_intensity_k.eval(t0);
            let k1 = self.exo_intensity_k.eval(t1);
            cum[i + 1] = cum[i] + 0.5 * (k0 + k1) * dt;
        }
        cum
    }

    /// Validate every model invariant. Returns the (possibly empty) list of
    /// violations; never mutates the config.
    pub fn validate(&self) -> ValidationReport {
        let mut v = Vec::new();
        let mut push = |code: &str, message: String| {
            v.push(Violation {
                code: code.to_string(),
                message,
            })
        };

        if !(self.horizon_t > 0.0) {
            push("horizon-not-positive", format!("horizon_t must be > 0, got {}", self.horizon_t));
        }
        if !(self.price_init_p0 > 0.0) {
            push(
                "price-init-not-positive",
                format!("price_init_p0 must be > 0, got {}", self.price_init_p0),
            );
        }
        if self.n_steps == 0 {
            push("n-steps-zero", "n_steps must be >= 1".to_string());
        }
        if self.n_paths == 0 {
            push("n-paths-zero", "n_paths must be >= 1".to_string());
        }
        if self.n_players == 0 {
            push("n-players-zero", "n_players must be >= 1".to_string());
        }
        if !(self.sigma > 0.0) {
            push("sigma-not-positive", format!("sigma must be > 0, got {}", self.sigma));
        }
        if self.sigma0 < 0.0 {
            push("sigma0-negative", format!("sigma0 must be >= 0, got {}", self.sigma0));
        }
        if !(self.temp_impact_lambda > 0.0) {
            push(
                "temp-impact-lambda-not-positive",
                format!("temp_impact_lambda must be > 0, got {}", self.temp_impact_lambda),
            );
        }
        if !(self.running_penalty_phi > 0.0) {
            push(
                "running-phi-not-positive",
                format!("running_penalty_phi must be > 0, got {}", self.running_penalty_phi),
            );
        }
        if !(self.terminal_penalty_c > 0.0) {
            push(
                "terminal-c-not-positive",
                format!("terminal_penalty_c must be > 0, got {}", self.terminal_penalty_c),
            );
        }

        let [lo, hi] = self.action_interval_a;
        if !(lo.is_finite() && hi.is_finite() && lo <= 0.0 && 0.0 <= hi && lo < hi) {
            push(
                "action-interval-invalid",
                format!("action interval must be compact with a_min <= 0 <= a_max, got [{lo}, {hi}]"),
            );
        }

        // zeta0 in the open interval (0, E[K0]/P0); the curve must not decrease.
        let mean_inv = self.dist_wealth_nu_k.mean() / self.price_init_p0;
        let z0 = self.inventory_threshold_zeta.zeta0;
        if !(z0 > 0.0 && z0 < mean_inv) {
            push("zeta0-out-of-range", "zeta0 not in (0, E[K0]/P0)".to_string());
        }
        if self.inventory_threshold_zeta.slope < 0.0 {
            push(
                "zeta-slope-negative",
                format!("zeta slope must be >= 0, got {}", self.inventory_threshold_zeta.slope),
            );
        }

        if !(self.dist_thresholds_nu_p.w0 > 0.0) {
            push("nu-p-atom-zero", "nu_p atom at P0 must be positive".to_string());
        }
        if self.dist_thresholds_nu_p.w0 > 1.0 {
            push(
                "nu-p-continuous-invalid",
                format!("nu_p atom weight must be <= 1, got {}", self.dist_thresholds_nu_p.w0),
            );
        } else {
            match &self.dist_thresholds_nu_p.continuous {
                Some(ThresholdContinuous::Uniform { hi }) => {
                    if !(*hi > self.price_init_p0) {
                        push(
                            "nu-p-continuous-invalid",
                            format!("uniform threshold upper bound must exceed P0, got {hi}"),
                        );
                    }
                }
                Some(ThresholdContinuous::ShiftedExponential { rate }) => {
                    if !(*rate > 0.0) {
                        push(
                            "nu-p-continuous-invalid",
                            format!("threshold exponential rate must be > 0, got {rate}"),
                        );
                    }
                }
                None => {
                    if self.dist_thresholds_nu_p.w0 < 1.0 {
                        push(
                            "nu-p-continuous-invalid",
                            "w0 < 1 requires a continuous threshold component".to_string(),
                        );
                    }
                }
            }
        }

        match &self.dist_wealth_nu_k {
            WealthDist::Normal { std, .. } => {
                if !(*std > 0.0) {
                    push("nu-k-invalid", format!("wealth std must be > 0, got {std}"));
                }
            }
            WealthDist::LognormalShifted { sigma, .. } => {
                if !(*sigma > 0.0) {
                    push("nu-k-invalid", format!("wealth sigma must be > 0, got {sigma}"));
                }
            }
        }

        // k(t) >= 0 sampled on the grid; boundedness holds by construction for
        // the parametric families, nonnegativity can fail for the linear one.
        let n_chk = 32.max(self.n_steps.min(512));
        let kneg = (0..=n_chk)
            .map(|i| self.exo_intensity_k.eval(self.horizon_t * i as f64 / n_chk as f64))
            .fold(f64::INFINITY, f64::min);
        if kneg < 0.0 {
            push(
                "exo-intensity-negative",
                format!("exogenous intensity must be >= 0 on [0, T], min sampled {kneg}"),
            );
        }

        let beta_min = (0..=n_chk)
            .map(|i| self.burst_size_beta.eval(self.horizon_t * i as f64 / n_chk as f64))
            .fold(f64::INFINITY, f64::min);
        if !(beta_min > 0.0) {
            push(
                "beta-not-positive",
                format!("burst size beta must be strictly positive on [0, T], min sampled {beta_min}"),
            );
        }

        if let PermImpact::Table { actions, values } = &self.perm_impact {
            if actions.len() != values.len()
                || actions.len() < 2
                || actions.windows(2).any(|w| w[1] <= w[0])
                || actions[0] > lo
                || actions[actions.len() - 1] < hi
            {
                push(
                    "perm-impact-table-invalid",
                    "impact table must be strictly increasing in actions and cover A".to_string(),
                );
            } else {
                let slopes: Vec<f64> = actions
                    .windows(2)
                    .zip(values.windows(2))
                    .map(|(a, v)| (v[1] - v[0]) / (a[1] - a[0]))
                    .collect();
                if slopes.windows(2).any(|s| s[1] > s[0] + 1e-12) {
                    push(
                        "perm-impact-not-concave",
                        "impact table fails the discrete concavity check (second differences must be <= 0)"
                            .to_string(),
                    );
                }
            }
        }

        match &self.bubble_trend {
            TrendSpec::Exponential { ell } => {
                if !(*ell >= 0.0) {
                    push("trend-params-invalid", format!("exponential trend rate must be >= 0, got {ell}"));
                }
            }
            TrendSpec::Lppl { ell, .. } => {
                if !(*ell > 0.0 && *ell < 1.0) {
                    push("trend-params-invalid", format!("LPPL ell must lie in (0, 1), got {ell}"));
                }
            }
        }
        self.validate_trend_samples(&mut v);

        if self.n_steps > 0 && self.n_steps % (1usize << self.dyadic_level) != 0 {
            push(
                "dyadic-grid-mismatch",
                format!(
                    "n_steps = {} must be divisible by 2^dyadic_level = {}",
                    self.n_steps,
                    1usize << self.dyadic_level
                ),
            );
        }
        if !(self.damping_delta > 0.0 && self.damping_delta <= 1.0) {
            push(
                "damping-out-of-range",
                format!("damping_delta must lie in (0, 1], got {}", self.damping_delta),
            );
        }
        if !(self.fp_tolerance > 0.0) {
            push("fp-tolerance-not-positive", format!("fp_tolerance must be > 0, got {}", self.fp_tolerance));
        }
        if !(1..=4).contains(&self.regression_degree) {
            push(
                "regression-degree-invalid",
                format!("regression_degree must be in 1..=4, got {}", self.regression_degree),
            );
        }

        ValidationReport { violations: v }
    }

    /// Sampled checks of the trend function: nonnegative, nondecreasing in the
    /// running max and in the price, and linear growth |b| <= C (1 + m).
    /// The LPPL critical time sits at T, so sampling stops just short of it.
    fn validate_trend_samples(&self, v: &mut Vec<Violation>) {
        if !(self.horizon_t > 0.0 && self.price_init_p0 > 0.0) {
            return;
        }
        let fp = self.threshold_cdf();
        let p0 = self.price_init_p0;
        let t_pts: Vec<f64> = (0..=8).map(|i| self.horizon_t * (i as f64 / 8.0) * 0.999).collect();
        let m_pts: Vec<f64> = (0..=8).map(|i| p0 * (1.0 + 3.0 * i as f64 / 8.0)).collect();

        let mut nonneg = true;
        let mut mono_m = true;
        let mut mono_p = true;
        let mut growth = true;
        for &t in &t_pts {
            for (mi, &m) in m_pts.iter().enumerate() {
                let p_pts: Vec<f64> = (0..=4).map(|j| m * j as f64 / 4.0).collect();
                for (pi, &p) in p_pts.iter().enumerate() {
                    let b = match crate::price::trend_eval(&self.bubble_trend, t, m, p, &fp, self.horizon_t) {
                        Ok(b) => b,
                        Err(_) => {
                            nonneg = false;
                            continue;
                        }
                    };
                    if b < 0.0 {
                        nonneg = false;
                    }
                    if b.abs() > self.trend_growth_c * (1.0 + m.abs()) {
                        growth = false;
                    }
                    if pi > 0 {
                        let prev =
                            crate::price::trend_eval(&self.bubble_trend, t, m, p_pts[pi - 1], &fp, self.horizon_t)
                                .unwrap_or(f64::NAN);
                        if b < prev - 1e-12 {
                            mono_p = false;
                        }
                    }
                    if mi > 0 {
                        let prev =
                            crate::price::trend_eval(&self.bubble_trend, t, m_pts[mi - 1], p, &fp, self.horizon_t)
                                .unwrap_or(f64::NAN);
                        if b < prev - 1e-12 {
                            mono_m = false;
                        }
                    }
                }
            }
        }
        if !nonneg {
            v.push(Violation {
                code: "trend-negative".to_string(),
                message: "trend function must be nonnegative on the sampled domain".to_string(),
            });
        }
        if !(mono_m && mono_p) {
            v.push(Violation {
                code: "trend-not-monotone".to_string(),
                message: "trend function must be nondecreasing in the running max and the price (sampled check)"
                    .to_string(),
            });
        }
        if !growth {
            v.push(Violation {
                code: "trend-growth-bound".to_string(),
                message: format!("trend exceeds the growth bound C(1+m) with C = {}", self.trend_growth_c),
            });
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub code: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn codes(&self) -> Vec<&str> {
        self.violations.iter().map(|v| v.code.as_str()).collect()
    }
}

/// Load a scenario from a TOML file; fills documented defaults and checks the
/// schema tag.
pub fn load_scenario(path: impl AsRef<Path>) -> Result<ScenarioConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    parse_scenario(&text)
}

/// Parse scenario TOML text.
pub fn parse_scenario(text: &str) -> Result<ScenarioConfig> {
    let config: ScenarioConfig = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if config.schema != SCHEMA_VERSION {
        return Err(Error::SchemaVersion {
            expected: SCHEMA_VERSION.to_string(),
            found: config.schema.clone(),
        });
    }
    Ok(config)
}

/// Serialize a scenario back to TOML. Round-trips exactly through
/// `parse_scenario`.
pub fn scenario_to_toml(config: &ScenarioConfig) -> Result<String> {
    toml::to_string(config).map_err(|e| Error::Config(format!("serialize scenario: {e}")))
}

pub fn save_scenario(config: &ScenarioConfig, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, scenario_to_toml(config)?).map_err(|e| Error::io(path.display().to_string(), e))
}
