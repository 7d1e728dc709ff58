//! Schottky groups acting on the upper half-plane: ping-pong data, orbit
//! counting, Poincaré partial sums, the critical exponent, and the coding
//! of the quotient geodesic flow as a suspension of the reduced-word shift.

mod coding;
mod group;
mod orbit;

pub use coding::{cancellation_sft, coded_system, ROOF_FLOOR};
pub use group::{displacement, inverse_symbol, parse_group, Arc, SchottkyGroup};
pub use orbit::{
    critical_exponent, critical_exponent_with, orbit_count, orbit_count_brute_force, orbit_displacements,
    poincare_partial, ExponentEstimate, PoincarePartial, DEFAULT_ORBIT_BUDGET, RADIUS_STEP,
};
