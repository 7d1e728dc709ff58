//! Suspension flows over SFTs under locally constant roofs.

mod flow;
mod pressure;
mod space;

pub use flow::{flow_trace_csv, Carrier, FiberTime, FlowPoint, RationalRoof, Roof};
pub use pressure::{equilibrium, pressure_root, PressureRoot, TransitionRoof, ROOT_TOL};
pub use space::{abramov_entropy, star_entropy_of_subsft, Equilibrium, FlowEntropy, FlowEntropySummary, SuspensionSpace};

use crate::error::Result;

pub fn flow_entropy(s: &SuspensionSpace) -> Result<f64> {
    s.flow_entropy()
}
