use serde::Serialize;

use super::pressure::{equilibrium, pressure_root, TransitionRoof};
use crate::error::{Error, Result};
use crate::measures::{LocallyConstantFn, MarkovMeasure};
use crate::shift::{Sft, EMPTY_ENTROPY};

/// Suspension of the shift on `base` under a positive locally constant roof.
#[derive(Debug, Clone)]
pub struct SuspensionSpace {
    base: Sft,
    roof: LocallyConstantFn,
}

impl SuspensionSpace {
    pub fn new(base: Sft, roof: LocallyConstantFn) -> Result<Self> {
        roof.check_covers(&base)?;
        if !roof.is_positive() {
            return Err(Error::Input("roof must be strictly positive".into()));
        }
        Ok(Self { base, roof })
    }

    pub fn base(&self) -> &Sft {
        &self.base
    }

    pub fn roof(&self) -> &LocallyConstantFn {
        &self.roof
    }

    /// Same roof values on a subsystem of the base.
    pub fn restrict(&self, a: &Sft) -> Result<Self> {
        if !a.is_subsystem_of(&self.base) {
            return Err(Error::Input("target is not a subsystem of the base".into()));
        }
        let roof = LocallyConstantFn::from_fn(a, self.roof.depth(), |w| self.roof.value(w))?;
        Ok(Self { base: a.clone(), roof })
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(self.base.clone(), self.roof.scaled(c))
    }

    /// Flow entropy and, on an irreducible base, the equilibrium data.
    pub fn flow_entropy_report(&self) -> Result<FlowEntropy> {
        if self.base.is_empty() {
            return Ok(FlowEntropy { entropy: EMPTY_ENTROPY, components: 0, equilibrium: None });
        }
        let comps = self.base.components();
        if comps.len() == 1 {
            let tr = TransitionRoof::new(&self.base, &self.roof)?;
            let root = pressure_root(&tr)?;
            let eq = equilibrium(&tr, root.s_star)?;
            let abramov = abramov_entropy(&eq, &tr.roof)?;
            let tau_int = eq.integrate(&tr.roof)?;
            return Ok(FlowEntropy {
                entropy: root.s_star,
                components: 1,
                equilibrium: Some(Equilibrium { root, abramov, tau_int, measure: eq, recoding: tr }),
            });
        }
        let mut best = EMPTY_ENTROPY;
        for c in &comps {
            let sub = self.restrict(c)?;
            best = best.max(sub.flow_entropy()?);
        }
        Ok(FlowEntropy { entropy: best, components: comps.len(), equilibrium: None })
    }

    pub fn flow_entropy(&self) -> Result<f64> {
        Ok(self.flow_entropy_report()?.entropy)
    }
}

#[derive(Debug, Clone)]
pub struct Equilibrium {
    pub root: super::pressure::PressureRoot,
    /// Abramov entropy of the equilibrium measure (should equal `s*`).
    pub abramov: f64,
    /// Mean roof under the equilibrium measure.
    pub tau_int: f64,
    pub measure: MarkovMeasure,
    pub recoding: TransitionRoof,
}

#[derive(Debug, Clone)]
pub struct FlowEntropy {
    pub entropy: f64,
    pub components: usize,
    pub equilibrium: Option<Equilibrium>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FlowEntropySummary {
    pub flow_entropy: f64,
    pub pressure_residual: Option<f64>,
    pub equilibrium_abramov: Option<f64>,
    pub equilibrium_tau_int: Option<f64>,
    pub components: usize,
}

impl FlowEntropy {
    pub fn summary(&self) -> FlowEntropySummary {
        FlowEntropySummary {
            flow_entropy: self.entropy,
            pressure_residual: self.equilibrium.as_ref().map(|e| e.root.residual),
            equilibrium_abramov: self.equilibrium.as_ref().map(|e| e.abramov),
            equilibrium_tau_int: self.equilibrium.as_ref().map(|e| e.tau_int),
            components: self.components,
        }
    }
}

/// `h_ν(σ) / ∫τ dν`.
pub fn abramov_entropy(nu: &MarkovMeasure, roof: &LocallyConstantFn) -> Result<f64> {
    Ok(nu.entropy() / nu.integrate(roof)?)
}

/// Flow entropy of the suspension restricted to a sub-SFT of the base.
pub fn star_entropy_of_subsft(s: &SuspensionSpace, a: &Sft) -> Result<f64> {
    s.restrict(a)?.flow_entropy()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn phi() -> f64 {
        (1.0 + 5f64.sqrt()) / 2.0
    }

    #[test]
    fn closed_forms() {
        for n in 2..5 {
            let base = Sft::full(n).unwrap();
            let roof = LocallyConstantFn::constant(&base, 1.7).unwrap();
            let s = SuspensionSpace::new(base, roof).unwrap();
            assert!((s.flow_entropy().unwrap() - (n as f64).ln() / 1.7).abs() < 1e-12);
        }
        let base = Sft::full(2).unwrap();
        let roof = LocallyConstantFn::by_symbol(&base, &[1.0, 2.0]).unwrap();
        let s = SuspensionSpace::new(base, roof).unwrap();
        let r = s.flow_entropy_report().unwrap();
        assert!((r.entropy - phi().ln()).abs() < 1e-12);
        let eq = r.equilibrium.unwrap();
        assert!((eq.abramov - r.entropy).abs() < 1e-9);
    }

    #[test]
    fn deep_roof_recoding() {
        let base = Sft::full(2).unwrap();
        let roof = LocallyConstantFn::from_fn(&base, 3, |w| 1.0 + w[0] as f64).unwrap();
        let s = SuspensionSpace::new(base, roof).unwrap();
        assert!((s.flow_entropy().unwrap() - phi().ln()).abs() < 1e-11);
    }

    #[test]
    fn subsystems() {
        let full = Sft::full(2).unwrap();
        let s = SuspensionSpace::new(full.clone(), LocallyConstantFn::constant(&full, 1.0).unwrap()).unwrap();
        let fixed = Sft::from_matrix(&[vec![1, 0], vec![0, 0]]).unwrap();
        assert!(star_entropy_of_subsft(&s, &fixed).unwrap().abs() < 1e-15);
        assert!((star_entropy_of_subsft(&s, &Sft::golden_mean()).unwrap() - phi().ln()).abs() < 1e-12);
        let split = Sft::from_matrix(&[vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(star_entropy_of_subsft(&s, &split).unwrap(), 0.0);
        let not_sub = Sft::full(3).unwrap();
        assert!(star_entropy_of_subsft(&s, &not_sub).is_err());
    }
}
