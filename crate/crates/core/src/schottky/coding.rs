use super::group::{displacement, inverse_symbol, SchottkyGroup};
use crate::error::{Error, Result};
use crate::measures::LocallyConstantFn;
use crate::shift::Sft;
use crate::suspension::SuspensionSpace;

/// Smallest roof value accepted by [`coded_system`].
pub const ROOF_FLOOR: f64 = 1e-6;

/// Reduced-word shift: `2k` symbols, every transition except `s → s⁻¹`.
pub fn cancellation_sft(g: &SchottkyGroup) -> Sft {
    let n = g.symbol_count();
    let rows: Vec<Vec<u8>> =
        (0..n).map(|a| (0..n).map(|b| u8::from(b as u32 != inverse_symbol(a as u32))).collect()).collect();
    Sft::from_matrix(&rows).expect("square 0/1 matrix")
}

/// Suspension of the reduced-word shift under the displacement increment
/// `τ(ab) = d(o, ab·o) − d(o, a·o)`. This approximates the geodesic flow on
/// the quotient: its entropy tends to the critical exponent as the ping-pong
/// arcs shrink.
pub fn coded_system(g: &SchottkyGroup) -> Result<SuspensionSpace> {
    let base = cancellation_sft(g);
    let roof = LocallyConstantFn::from_fn(&base, 2, |w| {
        let a = displacement(g.symbol(w[0]));
        let ab = displacement(&g.symbol(w[0]).compose(g.symbol(w[1])));
        ab - a
    })?;
    let floor = roof.min_value();
    if floor < ROOF_FLOOR {
        return Err(Error::Input(format!(
            "displacement roof has minimum {floor:.3e} < {ROOF_FLOOR:e}; use longer translations or smaller ping-pong arcs"
        )));
    }
    SuspensionSpace::new(base, roof)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::suspension::flow_entropy;

    #[test]
    fn cyclic_coding_has_zero_entropy() {
        let g = SchottkyGroup::symmetric(1, 2.5).unwrap();
        let s = coded_system(&g).unwrap();
        assert_eq!(s.base().size(), 2);
        assert!(s.base().transition(0, 0) && !s.base().transition(0, 1));
        assert!(s.base().entropy().abs() < 1e-12);
        assert!((s.roof().value(&[0, 0]) - 2.5).abs() < 1e-10);
    }

    #[test]
    fn two_generator_base_entropy() {
        let g = SchottkyGroup::symmetric(2, 2.5).unwrap();
        let s = coded_system(&g).unwrap();
        assert!((s.base().entropy() - 3f64.ln()).abs() < 1e-12);
        assert!(s.roof().min_value() > 0.0);
        let h = flow_entropy(&s).unwrap();
        assert!(h > 0.0 && h < 3f64.ln() / s.roof().min_value());
    }
}
