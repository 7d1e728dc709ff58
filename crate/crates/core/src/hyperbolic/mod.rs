//! The upper half-plane at curvature −1: geodesic flow, Busemann cocycle,
//! Hopf coordinates relative to `o = i`, the Gaussian-weighted distance on
//! `T¹ℍ²`, Hamenstädt leaf distances, the local product bracket, the
//! shadowing bound for close geodesics and greedy separated sets.
//!
//! Unit tangent vectors are handled through their frames in `PSL(2, ℝ)`, so
//! the flow is exact matrix multiplication rather than ODE integration.

mod distance;
mod point;
mod product;
pub mod suite;
mod tangent;

pub use distance::{
    calibrate_leaf_constant, dynamical_distance, gaussian_distance, hamenstadt_ss, hamenstadt_uu, leaf_bounds_hold,
    phase_distance, GaussianDistance, LeafConstant, Quadrature, CAUCHY_TOL, LEAF_TOL,
};
pub use point::{busemann, gromov_product, hyp_dist, BoundaryPoint, HPoint, MobiusMap};
pub use product::{
    bracket, calibrate_bracket, distance_to_line, greedy_separated_set, sample, shadowing_gap, Bracket,
    BracketCalibration, Shadowing,
};
pub use tangent::{
    flip_hopf, flow_trace_csv, from_hopf, geodesic_flow, on_stable_leaf, on_unstable_leaf, stable_leaf_vector,
    to_hopf, unstable_coordinate, unstable_leaf_vector, Geodesic, HopfCoords, UnitTangent,
};
