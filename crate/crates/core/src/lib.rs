//! Computational ergodic theory at desk scale: subshifts of finite type,
//! Markov measures, Katok-style approximation, suspension flows, avoidance
//! certificates, and a hyperbolic-plane / Schottky testbed.

pub mod error;
pub mod exceptional;
pub mod exec;
pub mod hyperbolic;
pub mod karp;
pub mod katok;
pub mod linalg;
pub mod measures;
pub mod schottky;
pub mod shift;
pub mod suspension;

pub use error::{Error, Result};
pub use exec::Exec;

/// Every entropy in this crate is measured in nats (natural logarithm).
pub const ENTROPY_LOG_BASE: f64 = std::f64::consts::E;
