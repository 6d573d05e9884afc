//! Two-barrier ruin probabilities of a renewal compound process with
//! heavy-tailed claims.
//!
//! * [`heavy_tails`]: claim and inter-arrival laws.
//! * [`risk_model`]: the two-company model and barrier geometry.
//! * [`asymptotics`]: segment integrals, `H`, `J` and the ruin asymptotes.
//! * [`identities`]: exact identities and inequalities between them.
//! * [`simulator`]: Monte Carlo over the embedded random walks.
//! * [`harness`]: experiment configs, sweeps and CSV output.

pub mod asymptotics;
pub mod heavy_tails;
pub mod identities;
pub mod quadrature;
pub mod rng;
pub mod risk_model;
pub mod simulator;
pub mod harness;

pub use asymptotics::{psi_asymptotes, AsymptoteReport};
pub use heavy_tails::{DistributionError, HeavyTailDistribution, Moment};
pub use risk_model::{BarrierInstance, Company, ModelError, Regime, RiskModel};
pub use rng::RngStream;
