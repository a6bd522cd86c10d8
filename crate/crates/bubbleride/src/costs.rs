//! Running and terminal costs, the Hamiltonian and its closed-form minimizer.
//!
//! Running cost (temporary impact is quadratic, `kappa(a) = lambda a^2`):
//!
//! ```text
//! f(t, x, m_b, eta, rho_bar, a) = lambda a^2 + phi x^2
//!                                 - x (m_b 1{t < eta} + rho_bar 1{t >= eta})
//! ```
//!
//! Terminal cost: `g = c x_T^2 + beta_eta gamma_eta x_eta`. The Hamiltonian
//! adds the weak-formulation coupling `a z / sigma`; with quadratic temporary
//! impact its minimizer over the compact action interval is the clipped
//! stationary point `a_hat(z) = clip(-z / (2 lambda sigma))`, a function of z
//! alone.

use crate::error::{Error, Result};
use crate::scenario::ScenarioConfig;

/// Cost and action parameters shared by the solver components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostParams {
    pub lambda: f64,
    pub phi: f64,
    pub c: f64,
    pub a_lo: f64,
    pub a_hi: f64,
    pub sigma: f64,
}

impl CostParams {
    pub fn from_config(config: &ScenarioConfig) -> Self {
        CostParams {
            lambda: config.temp_impact_lambda,
            phi: config.running_penalty_phi,
            c: config.terminal_penalty_c,
            a_lo: config.a_lo(),
            a_hi: config.a_hi(),
            sigma: config.sigma,
        }
    }

    pub fn clamp_action(&self, a: f64) -> f64 {
        a.clamp(self.a_lo, self.a_hi)
    }

    fn check_action(&self, a: f64) -> Result<()> {
        if a < self.a_lo || a > self.a_hi || !a.is_finite() {
            return Err(Error::ActionDomain {
                action: a,
                lo: self.a_lo,
                hi: self.a_hi,
            });
        }
        Ok(())
    }
}

/// Temporary impact kappa(a) = lambda a^2.
pub fn temp_impact_kappa(params: &CostParams, a: f64) -> f64 {
    params.lambda * a * a
}

/// Decomposition of the running cost: `f = f_a + f_b 1{t < eta} + f_c 1{t >= eta}`
/// with `f_a = kappa(a) + phi x^2`, `f_b = -x m_b`, `f_c = -x rho_bar`.
pub fn running_cost_parts(params: &CostParams, x: f64, m_b: f64, rho_bar: f64, a: f64) -> (f64, f64, f64) {
    (
        temp_impact_kappa(params, a) + params.phi * x * x,
        -x * m_b,
        -x * rho_bar,
    )
}

/// Running cost f. Errors when the action falls outside the interval A.
pub fn running_cost_f(
    params: &CostParams,
    t: f64,
    x: f64,
    m_b: f64,
    eta: f64,
    rho_bar: f64,
    a: f64,
) -> Result<f64> {
    params.check_action(a)?;
    let (fa, fb, fc) = running_cost_parts(params, x, m_b, rho_bar, a);
    Ok(fa + if t < eta { fb } else { fc })
}

/// Terminal cost g = c x_T^2 + beta_eta gamma_eta x_eta.
pub fn terminal_cost_g(c: f64, x_t: f64, x_eta: f64, beta_eta: f64, gamma_eta: f64) -> f64 {
    c * x_t * x_t + beta_eta * gamma_eta * x_eta
}

/// Full Hamiltonian H = f + a z / sigma.
pub fn hamiltonian(
    params: &CostParams,
    t: f64,
    x: f64,
    m_b: f64,
    eta: f64,
    rho_bar: f64,
    z: f64,
    a: f64,
) -> Result<f64> {
    Ok(running_cost_f(params, t, x, m_b, eta, rho_bar, a)? + a * z / params.sigma)
}

/// Exact minimizer of `a -> lambda a^2 + a z / sigma` over A.
pub fn hamiltonian_argmin(params: &CostParams, z: f64) -> f64 {
    params.clamp_action(-z / (2.0 * params.lambda * params.sigma))
}

/// Minimized Hamiltonian h = f(..., a_hat(z)) + a_hat(z) z / sigma. Lipschitz
/// in z with constant at most `max(|a_lo|, |a_hi|) / sigma`.
pub fn minimized_hamiltonian_h(
    params: &CostParams,
    t: f64,
    x: f64,
    m_b: f64,
    eta: f64,
    rho_bar: f64,
    z: f64,
) -> f64 {
    let a_hat = hamiltonian_argmin(params, z);
    let (fa, fb, fc) = running_cost_parts(params, x, m_b, rho_bar, a_hat);
    fa + if t < eta { fb } else { fc } + a_hat * z / params.sigma
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn params() -> CostParams {
        CostParams {
            lambda: 1.0,
            phi: 0.1,
            c: 1.0,
            a_lo: -1.0,
            a_hi: 1.0,
            sigma: 1.0,
        }
    }

    #[test]
    fn zero_state_zero_action_costs_nothing() {
        let p = params();
        for (m_b, eta, rho) in [(3.0, 0.5, -2.0), (-1.0, 0.0, 0.7), (0.0, 1.0, 0.0)] {
            assert_eq!(running_cost_f(&p, 0.3, 0.0, m_b, eta, rho, 0.0).unwrap(), 0.0);
        }
        assert_eq!(terminal_cost_g(1.0, 0.0, 0.0, 0.5, 2.0), 0.0);
    }

    #[test]
    fn running_cost_switches_at_eta() {
        let p = params();
        let pre = running_cost_f(&p, 0.2, 1.0, 2.0, 0.5, 0.3, 0.0).unwrap();
        assert!((pre - (0.1 - 2.0)).abs() < 1e-15, "pre-burst {pre}");
        let post = running_cost_f(&p, 0.7, 1.0, 2.0, 0.5, 0.3, 0.0).unwrap();
        assert!((post - (0.1 - 0.3)).abs() < 1e-15, "post-burst {post}");
    }

    #[test]
    fn out_of_interval_action_is_a_domain_error() {
        let p = params();
        assert!(matches!(
            running_cost_f(&p, 0.0, 0.0, 0.0, 1.0, 0.0, 1.5),
            Err(Error::ActionDomain { .. })
        ));
    }

    #[test]
    fn terminal_cost_examples() {
        assert_eq!(terminal_cost_g(1.0, 2.0, 1.0, 0.0, 5.0), 4.0);
        let g = terminal_cost_g(1.0, 2.0, 1.0, 0.3, 2.0);
        assert!((g - 4.6).abs() < 1e-15);
    }

    #[test]
    fn argmin_examples() {
        let p = params();
        assert_eq!(hamiltonian_argmin(&p, 0.0), 0.0);
        assert!((hamiltonian_argmin(&p, 1.0) + 0.5).abs() < 1e-15);
        assert_eq!(hamiltonian_argmin(&p, 10.0), -1.0);
    }

    #[test]
    fn argmin_matches_grid_search() {
        let p = params();
        let mut rng = rand::rngs::StdRng::seed_from_u64(5);
        let step = 1e-4;
        let n_grid = ((p.a_hi - p.a_lo) / step).round() as usize;
        for _ in 0..100 {
            let z = 6.0 * (rng.random::<f64>() - 0.5);
            let mut best_a = p.a_lo;
            let mut best_v = f64::INFINITY;
            for i in 0..=n_grid {
                let a = p.a_lo + i as f64 * step;
                let v = p.lambda * a * a + a * z / p.sigma;
                if v < best_v {
                    best_v = v;
                    best_a = a;
                }
            }
            assert!(
                (hamiltonian_argmin(&p, z) - best_a).abs() <= step,
                "z = {z}"
            );
        }
    }

    #[test]
    fn minimized_hamiltonian_values() {
        let p = params();
        assert_eq!(minimized_hamiltonian_h(&p, 0.2, 0.0, 1.0, 0.5, 0.3, 0.0), 0.0);
        // Interior regime: h = -z^2 / (4 lambda sigma^2) + phi x^2 - x m_b.
        let (x, z, m_b) = (0.7, 0.8, 1.3);
        let h = minimized_hamiltonian_h(&p, 0.1, x, m_b, 0.5, 0.0, z);
        let expect = -z * z / (4.0 * p.lambda * p.sigma * p.sigma) + p.phi * x * x - x * m_b;
        assert!((h - expect).abs() < 1e-15);
    }

    #[test]
    fn minimized_hamiltonian_is_lipschitz_in_z() {
        let p = params();
        let bound = p.a_lo.abs().max(p.a_hi.abs()) / p.sigma;
        let mut rng = rand::rngs::StdRng::seed_from_u64(8);
        for _ in 0..500 {
            let z1 = 8.0 * (rng.random::<f64>() - 0.5);
            let z2 = 8.0 * (rng.random::<f64>() - 0.5);
            let x = 2.0 * (rng.random::<f64>() - 0.5);
            let h1 = minimized_hamiltonian_h(&p, 0.2, x, 1.0, 0.5, 0.2, z1);
            let h2 = minimized_hamiltonian_h(&p, 0.2, x, 1.0, 0.5, 0.2, z2);
            assert!((h1 - h2).abs() <= bound * (z1 - z2).abs() + 1e-12);
        }
    }

    #[test]
    fn argmin_is_continuous_and_nonincreasing() {
        let p = params();
        let mut prev = f64::INFINITY;
        for i in 0..=2000 {
            let z = -5.0 + i as f64 * 0.005;
            let a = hamiltonian_argmin(&p, z);
            assert!(a <= prev + 1e-12);
            if i > 0 {
                let before = hamiltonian_argmin(&p, z - 0.005);
                assert!((a - before).abs() <= 0.005 / (2.0 * p.lambda * p.sigma) + 1e-12);
            }
            prev = a;
        }
    }

    #[test]
    fn full_hamiltonian_argmin_ignores_z_free_terms() {
        let p = params();
        let mut rng = rand::rngs::StdRng::seed_from_u64(13);
        let step = 1e-4;
        let n_grid = ((p.a_hi - p.a_lo) / step).round() as usize;
        for _ in 0..50 {
            let t = rng.random::<f64>();
            let x = 2.0 * (rng.random::<f64>() - 0.5);
            let m_b = 2.0 * (rng.random::<f64>() - 0.5);
            let eta = rng.random::<f64>();
            let rho = rng.random::<f64>() - 0.5;
            let z = 6.0 * (rng.random::<f64>() - 0.5);
            let mut best_a = p.a_lo;
            let mut best_v = f64::INFINITY;
            for i in 0..=n_grid {
                let a = p.a_lo + i as f64 * step;
                let v = hamiltonian(&p, t, x, m_b, eta, rho, z, a).unwrap();
                if v < best_v {
                    best_v = v;
                    best_a = a;
                }
            }
            assert!((hamiltonian_argmin(&p, z) - best_a).abs() <= step);
        }
    }

    #[test]
    fn strict_convexity_dominates_mixtures() {
        let p = params();
        let mut rng = rand::rngs::StdRng::seed_from_u64(21);
        for _ in 0..200 {
            let a1 = p.a_lo + (p.a_hi - p.a_lo) * rng.random::<f64>();
            let a2 = p.a_lo + (p.a_hi - p.a_lo) * rng.random::<f64>();
            let w = rng.random::<f64>();
            let x = rng.random::<f64>();
            let mix = running_cost_f(&p, 0.1, x, 1.0, 0.5, 0.2, w * a1 + (1.0 - w) * a2).unwrap();
            let avg = w * running_cost_f(&p, 0.1, x, 1.0, 0.5, 0.2, a1).unwrap()
                + (1.0 - w) * running_cost_f(&p, 0.1, x, 1.0, 0.5, 0.2, a2).unwrap();
            assert!(mix <= avg + 1e-12);
            if (a1 - a2).abs() > 1e-6 && w > 0.01 && w < 0.99 {
                assert!(mix < avg, "strict convexity: a1={a1} a2={a2} w={w}");
            }
        }
    }

    #[test]
    fn decomposition_matches_and_grows_quadratically() {
        let p = params();
        let mut rng = rand::rngs::StdRng::seed_from_u64(34);
        let rho_max = 1.0;
        let ell_f = p.lambda * p.a_hi.max(-p.a_lo).powi(2) + p.phi + 1.0 + rho_max;
        for _ in 0..500 {
            let t = rng.random::<f64>();
            let x = 4.0 * (rng.random::<f64>() - 0.5);
            let m_b = 4.0 * (rng.random::<f64>() - 0.5);
            let eta = rng.random::<f64>();
            let rho = rho_max * (rng.random::<f64>() - 0.5);
            let a = p.a_lo + (p.a_hi - p.a_lo) * rng.random::<f64>();
            let (fa, fb, fc) = running_cost_parts(&p, x, m_b, rho, a);
            let f = running_cost_f(&p, t, x, m_b, eta, rho, a).unwrap();
            let recomposed = fa + if t < eta { fb } else { fc };
            assert_eq!(f, recomposed);
            assert!(fa.abs() + fb.abs() + fc.abs() <= ell_f * (1.0 + x * x + m_b * m_b));
        }
    }
}
