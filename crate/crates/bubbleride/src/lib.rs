//! Simulation library for an optimal bubble-riding game with price-dependent
//! entry and common noise.
//!
//! The model: a bubble asset grows through a self-exciting, path-dependent
//! drift fed by trader entry (the bubble trend), and bursts at the first of an
//! exogenous random time or an endogenous trigger hit when the average
//! inventory of active traders falls to a threshold curve. Traders enter when
//! the price first crosses their personal threshold, go all-in, and then trade
//! off temporary/permanent impact costs against riding the trend and the crash
//! charge.
//!
//! The crate provides three layers:
//!
//! - forward simulation of the finite-player game ([`population`]) on top of
//!   seeded, counter-based randomness ([`rng`]) and the bubble price dynamics
//!   ([`price`]);
//! - a regression Monte Carlo solver for the representative agent's control
//!   problem in weak formulation ([`bsde`]), conditioned on a finite
//!   discretization of the common noise ([`grid`]);
//! - a damped fixed-point iteration on conditional measure flows
//!   ([`fixed_point`]) producing approximate equilibria, with exploitability
//!   verification.
//!
//! All parameters live in a [`scenario::ScenarioConfig`], loadable from a TOML
//! scenario file. The `bubbleride` binary wires the pieces together.

pub mod bsde;
pub mod costs;
pub mod error;
pub mod fixed_point;
pub mod grid;
pub mod metrics;
pub mod population;
pub mod price;
pub mod report;
pub mod rng;
pub mod scenario;

pub use error::{Error, Result};
