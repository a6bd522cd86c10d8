//! The finite-player game: entry times, inventory dynamics under a strategy
//! profile, empirical measure flows, burst detection, and per-player costs.
//!
//! The feedback loop between price, entries and the burst is resolved forward
//! one step at a time: drifts use start-of-step values, entry and burst
//! triggers are evaluated on end-of-step values, and the burst jump is applied
//! at the grid point where the trigger first holds. The endogenous burst caps
//! at the horizon, so every game carries a burst step (possibly the final
//! knot).

use crate::costs::{running_cost_f, temp_impact_kappa, terminal_cost_g, CostParams};
use crate::error::{Error, Result};
use crate::price::{trend_eval, PricePath};
use crate::rng::PopulationNoise;
use crate::scenario::{ImpactNormalization, ScenarioConfig, ThresholdCdf};

/// Entry data for one player.
#[derive(Debug, Clone, PartialEq)]
pub struct EntryRecord {
    pub player_id: usize,
    pub threshold: f64,
    /// First grid index whose running maximum reaches the threshold; `None`
    /// is the never-entered sentinel (time T + 1).
    pub entry_step: Option<usize>,
    /// Inventory acquired at entry, K0 / p*; zero for the sentinel.
    pub entry_inventory: f64,
}

/// Per-step empirical interaction terms of one game.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalFlow {
    /// Inventory of every player at every knot (inactive players carry 0).
    pub inventories: Vec<Vec<f64>>,
    /// Average inventory of in-game players, 1/F_p^N-normalized.
    pub mean_in_game: Vec<f64>,
    /// Permanent impact of the aggregate trading rate at each left knot.
    pub impact: Vec<f64>,
    /// Fraction of entered players F_p^N(m_t) at each knot.
    pub in_game_fraction: Vec<f64>,
}

/// Burst bookkeeping: endogenous trigger (capped at the horizon), exogenous
/// grid step, and their minimum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BurstOutcome {
    pub endo_step: usize,
    pub exo_step: Option<usize>,
    pub true_step: usize,
}

/// Feedback strategy for the simulation.
pub enum Strategy<'a> {
    /// Hold after entry (all actions zero).
    Zero,
    /// Constant trading rate after entry, clipped to A.
    Constant(f64),
    /// Regression control field from the solver.
    Field(&'a crate::bsde::ControlField),
}

/// Full output of one simulated game.
#[derive(Debug, Clone)]
pub struct PopulationOutcome {
    pub entries: Vec<EntryRecord>,
    pub flow: EmpiricalFlow,
    pub burst: BurstOutcome,
    pub price: PricePath,
    pub costs: Vec<f64>,
}

/// Entry steps from a simulated price path: the first-crossing rule on the
/// (post-burst frozen) running maximum.
pub fn compute_entries(price: &PricePath, thresholds: &[f64], wealth: &[f64]) -> Vec<EntryRecord> {
    thresholds
        .iter()
        .zip(wealth.iter())
        .enumerate()
        .map(|(i, (&p_star, &k0))| {
            let entry_step = price.m.iter().position(|&m| m >= p_star);
            EntryRecord {
                player_id: i,
                threshold: p_star,
                entry_step,
                entry_inventory: if entry_step.is_some() { k0 / p_star } else { 0.0 },
            }
        })
        .collect()
}

fn aggregate_impact(
    config: &ScenarioConfig,
    actions: &[f64],
    in_game_fraction: f64,
) -> f64 {
    let n = actions.len() as f64;
    let raw: f64 = actions.iter().map(|&a| config.perm_impact.eval(a)).sum::<f64>() / n;
    match config.impact_normalization {
        ImpactNormalization::InGame => {
            if in_game_fraction > 0.0 {
                raw / in_game_fraction
            } else {
                0.0
            }
        }
        ImpactNormalization::Population => raw,
    }
}

/// Simulate one finite-player game under a strategy profile. Actions are
/// forced to zero before entry and clipped to A.
pub fn simulate_population(
    config: &ScenarioConfig,
    noise: &PopulationNoise,
    strategy: &Strategy,
) -> Result<PopulationOutcome> {
    let n = config.n_steps;
    let n_players = config.n_players;
    assert_eq!(noise.dw.len(), n_players);
    let dt = config.dt();
    let p0 = config.price_init_p0;

    let mut sorted_thresholds = noise.thresholds.clone();
    sorted_thresholds.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let fp = ThresholdCdf::Empirical {
        sorted: sorted_thresholds,
    };

    // Exogenous burst lands on the first grid point at or after tau.
    let exo_step = if noise.tau <= config.horizon_t {
        Some(((noise.tau / dt).ceil() as usize).max(1))
    } else {
        None
    };

    let mut price = vec![0.0; n + 1];
    let mut running_max = vec![0.0; n + 1];
    let mut gamma = vec![0.0; n + 1];
    let mut drift = vec![0.0; n];
    price[0] = p0;
    running_max[0] = p0;

    let mut inventories = vec![vec![0.0; n_players]; n + 1];
    let mut entry_step: Vec<Option<usize>> = vec![None; n_players];
    let mut actions = vec![vec![0.0; n_players]; n];
    let mut impact = vec![0.0; n];
    let mut in_game_fraction = vec![0.0; n + 1];
    let mut mean_in_game = vec![0.0; n + 1];

    // Initial players: thresholds already reached at the starting price.
    for i in 0..n_players {
        if noise.thresholds[i] <= p0 {
            entry_step[i] = Some(0);
            inventories[0][i] = noise.wealth[i] / noise.thresholds[i];
        }
    }
    let bar_mu_at = |inv: &[f64], frac: f64| -> Result<f64> {
        if !(frac > 0.0) {
            return Err(Error::Config("empty in-game set with positive atom at P0".to_string()));
        }
        Ok(inv.iter().sum::<f64>() / (n_players as f64 * frac))
    };
    in_game_fraction[0] = fp.eval(running_max[0]);
    mean_in_game[0] = bar_mu_at(&inventories[0], in_game_fraction[0])?;

    let mut burst_step: Option<usize> = None;
    let mut burst_jump = 0.0;
    let mut first_entry_step: Option<usize> = entry_step.iter().flatten().copied().min();
    let mut run_min_mu = mean_in_game[0];

    for k in 0..n {
        let t = k as f64 * dt;
        // Actions for entered players, from start-of-step information.
        for i in 0..n_players {
            let entered = entry_step[i].map_or(false, |e| e <= k);
            if !entered {
                continue;
            }
            let a = match strategy {
                Strategy::Zero => 0.0,
                Strategy::Constant(a) => *a,
                Strategy::Field(field) => field.evaluate_population(
                    config,
                    k,
                    inventories[k][i],
                    price[k],
                    running_max[k],
                    gamma[k],
                    noise,
                ),
            };
            actions[k][i] = config.clamp_action(a);
        }
        impact[k] = aggregate_impact(config, &actions[k], in_game_fraction[k]);

        // Price step: bubble trend before the burst, aggregate impact after.
        let step_drift = if burst_step.is_none() {
            let b = trend_eval(&config.bubble_trend, t, running_max[k], price[k], &fp, config.horizon_t)?;
            drift[k] = b;
            b
        } else {
            impact[k]
        };
        price[k + 1] = price[k] + step_drift * dt + config.sigma0 * noise.db[k];
        if !price[k + 1].is_finite() {
            return Err(Error::Simulation {
                step: k + 1,
                message: "non-finite price in population game".to_string(),
            });
        }
        if burst_step.is_none() {
            gamma[k + 1] = gamma[k] + drift[k] * dt;
            running_max[k + 1] = running_max[k].max(price[k + 1]);
        } else {
            gamma[k + 1] = gamma[k];
            running_max[k + 1] = running_max[k];
        }

        // Inventory step.
        for i in 0..n_players {
            let entered = entry_step[i].map_or(false, |e| e <= k);
            inventories[k + 1][i] = if entered {
                inventories[k][i] + actions[k][i] * dt + config.sigma * noise.dw[i][k]
            } else {
                0.0
            };
        }

        // End-of-step entries against the (possibly frozen) running max.
        if burst_step.is_none() {
            for i in 0..n_players {
                if entry_step[i].is_none() && noise.thresholds[i] <= running_max[k + 1] {
                    entry_step[i] = Some(k + 1);
                    inventories[k + 1][i] = noise.wealth[i] / noise.thresholds[i];
                    first_entry_step = Some(first_entry_step.map_or(k + 1, |f| f.min(k + 1)));
                }
            }
        }

        in_game_fraction[k + 1] = fp.eval(running_max[k + 1]);
        mean_in_game[k + 1] = bar_mu_at(&inventories[k + 1], in_game_fraction[k + 1])?;
        run_min_mu = run_min_mu.min(mean_in_game[k + 1]);

        // Burst triggers on end-of-step values.
        if burst_step.is_none() {
            let endo = first_entry_step.map_or(false, |f| k + 1 > f)
                && run_min_mu <= config.inventory_threshold_zeta.eval((k + 1) as f64 * dt);
            let exo = exo_step == Some(k + 1);
            let cap = k + 1 == n;
            if endo || exo || cap {
                burst_step = Some(k + 1);
                burst_jump = -config.burst_size_beta.eval((k + 1) as f64 * dt) * gamma[k + 1];
                price[k + 1] += burst_jump;
            }
        }
    }

    let true_step = burst_step.expect("burst caps at the horizon");
    let endo_step = if exo_step == Some(true_step) && noise.tau <= config.horizon_t {
        // Exogenous burst fired first; the endogenous trigger is reported at
        // its cap.
        n
    } else {
        true_step
    };
    let burst = BurstOutcome {
        endo_step,
        exo_step,
        true_step,
    };

    let price_path = PricePath {
        p: price,
        m: running_max,
        gamma,
        drift,
        burst_step: Some(true_step),
        jump_size: burst_jump,
        post_burst_exceeded_max: false,
    };

    let entries: Vec<EntryRecord> = (0..n_players)
        .map(|i| EntryRecord {
            player_id: i,
            threshold: noise.thresholds[i],
            entry_step: entry_step[i],
            entry_inventory: if entry_step[i].is_some() {
                noise.wealth[i] / noise.thresholds[i]
            } else {
                0.0
            },
        })
        .collect();

    let flow = EmpiricalFlow {
        inventories,
        mean_in_game,
        impact,
        in_game_fraction,
    };

    let params = CostParams::from_config(config);
    let costs: Vec<f64> = (0..n_players)
        .map(|i| {
            evaluate_player_cost(
                config,
                &params,
                &entries[i],
                &flow,
                &price_path,
                &burst,
                &actions,
                i,
            )
        })
        .collect::<Result<Vec<f64>>>()?;

    Ok(PopulationOutcome {
        entries,
        flow,
        burst,
        price: price_path,
        costs,
    })
}

/// Additive decomposition of one player's realized cost.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostParts {
    pub terminal: f64,
    pub burst_charge: f64,
    pub running: f64,
}

impl CostParts {
    pub fn total(&self) -> f64 {
        self.terminal + self.burst_charge + self.running
    }
}

/// Realized cost of one player given the simulated game. Sentinel entries
/// cost exactly zero.
#[allow(clippy::too_many_arguments)]
pub fn evaluate_player_cost(
    config: &ScenarioConfig,
    params: &CostParams,
    entry: &EntryRecord,
    flow: &EmpiricalFlow,
    price: &PricePath,
    burst: &BurstOutcome,
    actions: &[Vec<f64>],
    player: usize,
) -> Result<f64> {
    Ok(player_cost_parts(config, params, entry, flow, price, burst, actions, player)?.total())
}

#[allow(clippy::too_many_arguments)]
pub fn player_cost_parts(
    config: &ScenarioConfig,
    params: &CostParams,
    entry: &EntryRecord,
    flow: &EmpiricalFlow,
    price: &PricePath,
    burst: &BurstOutcome,
    actions: &[Vec<f64>],
    player: usize,
) -> Result<CostParts> {
    let n = config.n_steps;
    let entry_step = match entry.entry_step {
        Some(e) if e <= n => e,
        _ => {
            return Ok(CostParts {
                terminal: 0.0,
                burst_charge: 0.0,
                running: 0.0,
            })
        }
    };
    let dt = config.dt();
    let b_step = burst.true_step;
    let eta = b_step as f64 * dt;
    let x_terminal = flow.inventories[n][player];
    let x_burst = flow.inventories[b_step][player];
    let beta_eta = config.burst_size_beta.eval(eta);
    let gamma_eta = price.gamma[b_step];
    let g = terminal_cost_g(params.c, x_terminal, x_burst, beta_eta, gamma_eta);
    let terminal = params.c * x_terminal * x_terminal;
    let burst_charge = g - terminal;

    let mut running = 0.0;
    for k in entry_step..n {
        let t = k as f64 * dt;
        let x = flow.inventories[k][player];
        let a = actions[k][player];
        let f = running_cost_f(params, t, x, price.drift[k], eta, flow.impact[k], a)?;
        running += f * dt;
    }
    let _ = temp_impact_kappa;
    Ok(CostParts {
        terminal,
        burst_charge,
        running,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::sample_population_noise;
    use crate::scenario::{
        BetaFn, IntensityFn, ScenarioConfig, ThresholdContinuous, ThresholdDist, TrendSpec, WealthDist, ZetaFn,
    };

    fn quiet_config() -> ScenarioConfig {
        let mut c = ScenarioConfig::baseline(1.0, 1.0);
        c.n_steps = 40;
        c.n_players = 8;
        c.sigma = 0.0;
        c.sigma0 = 0.0;
        c.bubble_trend = TrendSpec::Exponential { ell: 0.0 };
        c.exo_intensity_k = IntensityFn::Constant { value: 0.0 };
        c.burst_size_beta = BetaFn::Constant { value: 0.0 };
        c.perm_impact = crate::scenario::PermImpact::Linear { rho0: 0.0 };
        c.inventory_threshold_zeta = ZetaFn {
            zeta0: 1e-9,
            slope: 0.0,
        };
        c.dist_wealth_nu_k = WealthDist::Normal { mean: 1.0, std: 0.0 };
        c
    }

    fn unit_noise(config: &ScenarioConfig) -> PopulationNoise {
        PopulationNoise {
            db: vec![0.0; config.n_steps],
            dw: vec![vec![0.0; config.n_steps]; config.n_players],
            tau: f64::INFINITY,
            wealth: vec![1.0; config.n_players],
            thresholds: vec![config.price_init_p0; config.n_players],
        }
    }

    #[test]
    fn initial_threshold_enters_at_zero() {
        let config = quiet_config();
        let noise = unit_noise(&config);
        let out = simulate_population(&config, &noise, &Strategy::Zero).unwrap();
        assert!(out.entries.iter().all(|e| e.entry_step == Some(0)));
        assert!(out.entries.iter().all(|e| (e.entry_inventory - 1.0).abs() < 1e-15));
    }

    #[test]
    fn deterministic_crossing_entry() {
        // Unit-slope price path p_t = P0 + t: a threshold of P0 + 0.5 is hit
        // at the first grid time >= 0.5.
        let mut config = quiet_config();
        config.n_players = 2;
        let mut noise = unit_noise(&config);
        let dt = config.dt();
        noise.db = vec![dt; config.n_steps];
        noise.dw = vec![vec![0.0; config.n_steps]; 2];
        noise.wealth = vec![1.0; 2];
        noise.thresholds = vec![1.0, 1.5];
        let mut cfg = config.clone();
        cfg.sigma0 = 1.0;
        let out = simulate_population(&cfg, &noise, &Strategy::Zero).unwrap();
        assert_eq!(out.entries[0].entry_step, Some(0));
        let expected = (0.5f64 / dt).ceil() as usize;
        assert_eq!(out.entries[1].entry_step, Some(expected));
    }

    #[test]
    fn unreachable_threshold_never_enters_and_costs_zero() {
        let mut config = quiet_config();
        config.n_players = 3;
        let mut noise = unit_noise(&config);
        noise.thresholds = vec![1.0, 1.0, 50.0];
        let out = simulate_population(&config, &noise, &Strategy::Zero).unwrap();
        assert_eq!(out.entries[2].entry_step, None);
        assert_eq!(out.entries[2].entry_inventory, 0.0);
        assert_eq!(out.costs[2], 0.0);
        assert!(out.flow.inventories.iter().all(|row| row[2] == 0.0));
    }

    #[test]
    fn entry_steps_are_monotone_in_threshold() {
        let mut config = ScenarioConfig::baseline(1.0, 1.0);
        config.n_steps = 60;
        config.n_players = 20;
        config.n_paths = 30;
        config.sigma0 = 0.15;
        config.bubble_trend = TrendSpec::Exponential { ell: 0.8 };
        config.dist_thresholds_nu_p = ThresholdDist {
            w0: 0.3,
            continuous: Some(ThresholdContinuous::Uniform { hi: 2.5 }),
        };
        for game in 0..config.n_paths as u64 {
            let noise = sample_population_noise(&config, game);
            let out = simulate_population(&config, &noise, &Strategy::Zero).unwrap();
            let mut entries: Vec<(f64, Option<usize>)> = out
                .entries
                .iter()
                .map(|e| (e.threshold, e.entry_step))
                .collect();
            entries.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
            for w in entries.windows(2) {
                let (p1, e1) = w[0];
                let (p2, e2) = w[1];
                let s1 = e1.unwrap_or(usize::MAX);
                let s2 = e2.unwrap_or(usize::MAX);
                assert!(s1 <= s2, "entry order violated: {p1} -> {s1:?}, {p2} -> {s2:?}");
            }
        }
    }

    #[test]
    fn static_inventories_hold_mean_constant() {
        // All thresholds at P0, zero controls, zero inventory noise: the mean
        // in-game inventory stays E_N[K0] / P0 until the burst.
        let mut config = quiet_config();
        config.n_players = 5;
        let mut noise = unit_noise(&config);
        noise.wealth = vec![0.8, 0.9, 1.0, 1.1, 1.2];
        let out = simulate_population(&config, &noise, &Strategy::Zero).unwrap();
        let expect = noise.wealth.iter().sum::<f64>() / 5.0;
        for k in 0..=config.n_steps {
            assert!((out.flow.mean_in_game[k] - expect).abs() < 1e-12);
            assert_eq!(out.flow.in_game_fraction[k], 1.0);
        }
    }

    #[test]
    fn deterministic_zeta_crossing_sets_endo_step() {
        // bar_mu == 1 and zeta_t = 0.5 + t: the trigger holds from t = 0.5 on.
        let mut config = quiet_config();
        config.inventory_threshold_zeta = ZetaFn {
            zeta0: 0.5,
            slope: 1.0,
        };
        let noise = unit_noise(&config);
        let out = simulate_population(&config, &noise, &Strategy::Zero).unwrap();
        let dt = config.dt();
        let expected = (0.5f64 / dt).ceil() as usize;
        assert_eq!(out.burst.endo_step, expected);
        assert_eq!(out.burst.true_step, expected);
        assert_eq!(out.burst.exo_step, None);
    }

    #[test]
    fn no_trigger_caps_at_horizon() {
        let config = quiet_config();
        let noise = unit_noise(&config);
        let out = simulate_population(&config, &noise, &Strategy::Zero).unwrap();
        assert_eq!(out.burst.true_step, config.n_steps);
    }

    #[test]
    fn closed_form_cost_for_static_player() {
        // sigma = 0, alpha = 0, entry at 0 with inventory x0, interactions
        // off: J = c x0^2 + phi x0^2 T.
        let mut config = quiet_config();
        config.n_players = 1;
        config.running_penalty_phi = 0.3;
        config.terminal_penalty_c = 2.0;
        let mut noise = unit_noise(&config);
        noise.wealth = vec![1.4];
        let out = simulate_population(&config, &noise, &Strategy::Zero).unwrap();
        let x0 = 1.4;
        let expect = 2.0 * x0 * x0 + 0.3 * x0 * x0 * config.horizon_t;
        assert!((out.costs[0] - expect).abs() < 1e-10, "{} vs {expect}", out.costs[0]);
    }

    #[test]
    fn pure_trading_cost_is_quadratic_in_rate() {
        // phi = c = 0 and no interactions: J = sum kappa(alpha) dt >= 0 with
        // equality iff alpha == 0.
        let mut config = quiet_config();
        config.n_players = 1;
        config.running_penalty_phi = 0.0;
        config.terminal_penalty_c = 0.0;
        config.temp_impact_lambda = 0.7;
        let noise = unit_noise(&config);
        let hold = simulate_population(&config, &noise, &Strategy::Zero).unwrap();
        assert_eq!(hold.costs[0], 0.0);
        let trade = simulate_population(&config, &noise, &Strategy::Constant(0.5)).unwrap();
        let expect = 0.7 * 0.25 * config.horizon_t;
        assert!((trade.costs[0] - expect).abs() < 1e-10);
    }

    #[test]
    fn cost_decomposes_additively() {
        let mut config = ScenarioConfig::baseline(1.0, 1.0);
        config.n_steps = 32;
        config.n_players = 6;
        config.bubble_trend = TrendSpec::Exponential { ell: 0.6 };
        let noise = sample_population_noise(&config, 11);
        let out = simulate_population(&config, &noise, &Strategy::Constant(-0.2)).unwrap();
        let params = CostParams::from_config(&config);
        // Rebuild actions the way the simulator applied them.
        let mut actions = vec![vec![0.0; config.n_players]; config.n_steps];
        for (i, entry) in out.entries.iter().enumerate() {
            if let Some(e) = entry.entry_step {
                for k in e..config.n_steps {
                    actions[k][i] = config.clamp_action(-0.2);
                }
            }
        }
        for i in 0..config.n_players {
            let parts = player_cost_parts(
                &config,
                &params,
                &out.entries[i],
                &out.flow,
                &out.price,
                &out.burst,
                &actions,
                i,
            )
            .unwrap();
            assert!(parts.terminal.is_finite() && parts.burst_charge.is_finite() && parts.running.is_finite());
            assert!((parts.total() - out.costs[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn identical_thresholds_keep_everyone_in_game() {
        let mut config = ScenarioConfig::baseline(1.0, 1.0);
        config.n_steps = 24;
        config.n_players = 12;
        config.dist_thresholds_nu_p = ThresholdDist {
            w0: 1.0,
            continuous: None,
        };
        let noise = sample_population_noise(&config, 2);
        let out = simulate_population(&config, &noise, &Strategy::Zero).unwrap();
        assert!(out.flow.in_game_fraction.iter().all(|&f| f == 1.0));
        assert!(out.entries.iter().all(|e| e.entry_step == Some(0)));
    }

    #[test]
    fn independent_costs_concentrate_at_root_n_rate() {
        // Interactions off: per-player costs are i.i.d., so the spread of the
        // per-game mean cost scales like N^{-1/2}.
        let mut base = quiet_config();
        base.sigma = 0.3;
        base.n_steps = 20;
        base.running_penalty_phi = 0.2;
        base.terminal_penalty_c = 1.0;
        base.dist_wealth_nu_k = WealthDist::Normal { mean: 1.0, std: 0.3 };
        let games = 160;
        let mut spreads = Vec::new();
        for &n_players in &[50usize, 100, 200, 400] {
            let mut config = base.clone();
            config.n_players = n_players;
            let mut means = Vec::with_capacity(games);
            for g in 0..games {
                let noise = sample_population_noise(&config, g as u64);
                let out = simulate_population(&config, &noise, &Strategy::Zero).unwrap();
                means.push(out.costs.iter().sum::<f64>() / n_players as f64);
            }
            let m = means.iter().sum::<f64>() / games as f64;
            let var = means.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (games as f64 - 1.0);
            spreads.push((n_players as f64, var.sqrt()));
        }
        // Log-log regression slope should sit near -1/2.
        let n = spreads.len() as f64;
        let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
        for &(x, y) in &spreads {
            let (lx, ly) = (x.ln(), y.ln());
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
        }
        let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        assert!(
            (-0.75..=-0.25).contains(&slope),
            "standard error slope {slope} not near -1/2: {spreads:?}"
        );
    }
}
