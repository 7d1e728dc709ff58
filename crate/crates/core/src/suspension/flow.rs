use std::collections::HashMap;
use std::fmt::Write;
use std::ops::{Add, Sub};

use num::{BigRational, FromPrimitive, Zero};

use crate::error::{Error, Result};
use crate::measures::LocallyConstantFn;
use crate::shift::Symbol;

/// Fiber-time arithmetic: `f64` for throughput, `BigRational` for exact runs.
pub trait FiberTime: Clone + PartialOrd + Zero + Add<Output = Self> + Sub<Output = Self> {
    fn to_f64(&self) -> f64;
}

impl FiberTime for f64 {
    fn to_f64(&self) -> f64 {
        *self
    }
}

impl FiberTime for BigRational {
    fn to_f64(&self) -> f64 {
        num::ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

/// Roof evaluation in a given time type.
pub trait Roof<T> {
    fn depth(&self) -> usize;
    fn at(&self, w: &[Symbol]) -> Option<T>;
    fn min_f64(&self) -> f64;
}

impl Roof<f64> for LocallyConstantFn {
    fn depth(&self) -> usize {
        LocallyConstantFn::depth(self)
    }
    fn at(&self, w: &[Symbol]) -> Option<f64> {
        self.get(w)
    }
    fn min_f64(&self) -> f64 {
        self.min_value()
    }
}

/// Roof with exact rational values.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalRoof {
    depth: usize,
    table: HashMap<Vec<Symbol>, BigRational>,
}

impl RationalRoof {
    /// Exact binary value of every float entry.
    pub fn exact(f: &LocallyConstantFn) -> Result<Self> {
        let mut table = HashMap::new();
        for (w, v) in f.entries() {
            let q = BigRational::from_f64(v).ok_or_else(|| Error::Input(format!("roof value {v} is not finite")))?;
            table.insert(w.to_vec(), q);
        }
        Ok(Self { depth: f.depth(), table })
    }

    pub fn from_table(depth: usize, table: HashMap<Vec<Symbol>, BigRational>) -> Self {
        Self { depth, table }
    }
}

impl Roof<BigRational> for RationalRoof {
    fn depth(&self) -> usize {
        self.depth
    }
    fn at(&self, w: &[Symbol]) -> Option<BigRational> {
        w.get(..self.depth).and_then(|k| self.table.get(k).cloned())
    }
    fn min_f64(&self) -> f64 {
        self.table.values().map(|v| v.to_f64()).fold(f64::INFINITY, f64::min)
    }
}

/// Finite presentation of a bi-infinite sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Carrier {
    /// `x_i = period[i mod p]`.
    Periodic(Vec<Symbol>),
    /// `x_i = window[origin + i]`, defined only inside the window.
    Buffered { window: Vec<Symbol>, origin: usize },
}

impl Carrier {
    fn get(&self, i: i64) -> Option<Symbol> {
        match self {
            Carrier::Periodic(p) => Some(p[i.rem_euclid(p.len() as i64) as usize]),
            Carrier::Buffered { window, origin } => {
                let k = *origin as i64 + i;
                (k >= 0).then(|| window.get(k as usize).copied()).flatten()
            }
        }
    }
}

/// A point `(x, s)` of the suspension: the sequence read from `offset`, with
/// fiber coordinate `0 ≤ s < τ(σ^{offset} x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowPoint<T> {
    pub carrier: Carrier,
    pub offset: i64,
    pub s: T,
}

impl<T: FiberTime> FlowPoint<T> {
    pub fn new<R: Roof<T>>(carrier: Carrier, offset: i64, s: T, roof: &R) -> Result<Self> {
        if let Carrier::Periodic(p) = &carrier {
            if p.is_empty() {
                return Err(Error::Input("periodic carrier needs a nonempty period".into()));
            }
        }
        let p = Self { carrier, offset, s };
        let tau = p.roof_here(roof, 0)?;
        if p.s < T::zero() || p.s >= tau {
            return Err(Error::Input("fiber coordinate must lie in [0, roof)".into()));
        }
        Ok(p)
    }

    /// Symbols `x_{offset+shift} … x_{offset+shift+n−1}`.
    pub fn window(&self, shift: i64, n: usize) -> Option<Vec<Symbol>> {
        (0..n as i64).map(|k| self.carrier.get(self.offset + shift + k)).collect()
    }

    fn roof_here<R: Roof<T>>(&self, roof: &R, shift: i64) -> Result<T> {
        let w = self.window(shift, roof.depth()).ok_or_else(|| self.buffer_error(shift, roof.depth()))?;
        roof.at(&w).ok_or_else(|| Error::Input(format!("roof undefined on {w:?}")))
    }

    fn buffer_error(&self, shift: i64, depth: usize) -> Error {
        match &self.carrier {
            Carrier::Buffered { window, origin } => {
                let pos = *origin as i64 + self.offset + shift;
                if pos < 0 {
                    Error::Buffer { needed: (-pos) as usize, direction: "backward" }
                } else {
                    Error::Buffer { needed: pos as usize + depth - window.len(), direction: "forward" }
                }
            }
            Carrier::Periodic(_) => Error::Numerical("periodic carrier cannot run out".into()),
        }
    }

    /// `f^t(x, s)`, for any real `t`; the result is the canonical
    /// representative with fiber in `[0, τ)`.
    pub fn flow<R: Roof<T>>(&self, t: T, roof: &R) -> Result<Self> {
        let mut total = self.s.clone() + t;
        let mut shift = 0i64;
        if total >= T::zero() {
            loop {
                let tau = self.roof_here(roof, shift)?;
                if total < tau {
                    break;
                }
                total = total - tau;
                shift += 1;
            }
        } else {
            while total < T::zero() {
                shift -= 1;
                total = total + self.roof_here(roof, shift)?;
            }
        }
        Ok(Self { carrier: self.carrier.clone(), offset: self.offset + shift, s: total })
    }

    /// Shifts needed to flow for time `|t|`, as a buffer estimate.
    pub fn required_buffer<R: Roof<T>>(t: f64, roof: &R) -> usize {
        (t.abs() / roof.min_f64()).ceil() as usize + 1
    }
}

/// CSV rows `step,window,fiber` of the orbit sampled every `dt`.
pub fn flow_trace_csv(p: &FlowPoint<f64>, roof: &LocallyConstantFn, dt: f64, steps: usize, width: usize) -> Result<String> {
    let mut out = String::from("step,window,fiber\n");
    let mut q = p.clone();
    for step in 0..=steps {
        let w: String = q
            .window(0, width)
            .map(|w| w.iter().map(|s| std::char::from_digit(*s % 36, 36).unwrap_or('?')).collect())
            .unwrap_or_default();
        writeln!(out, "{step},{w},{}", q.s).expect("string write");
        if step < steps {
            q = q.flow(dt, roof)?;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shift::Sft;

    #[test]
    fn constant_roof() {
        let full = Sft::full(2).unwrap();
        let roof = LocallyConstantFn::constant(&full, 1.0).unwrap();
        let p = FlowPoint::new(Carrier::Periodic(vec![0]), 0, 0.0, &roof).unwrap();
        assert_eq!(p.flow(0.0, &roof).unwrap(), p);
        let q = p.flow(2.5, &roof).unwrap();
        assert_eq!((q.offset, q.s), (2, 0.5));
    }

    #[test]
    fn hand_iterated_golden_mean() {
        let g = Sft::golden_mean();
        let roof = LocallyConstantFn::by_symbol(&g, &[1.0, 2.0]).unwrap();
        let p = FlowPoint::new(Carrier::Periodic(vec![0, 1]), 0, 0.0, &roof).unwrap();
        let q = p.flow(3.0, &roof).unwrap();
        assert_eq!((q.offset, q.s), (2, 0.0));
        let back = q.flow(-3.0, &roof).unwrap();
        assert_eq!((back.offset, back.s), (0, 0.0));
    }

    #[test]
    fn buffer_errors_name_the_direction() {
        let full = Sft::full(2).unwrap();
        let roof = LocallyConstantFn::constant(&full, 1.0).unwrap();
        let p = FlowPoint::new(Carrier::Buffered { window: vec![0, 1, 0], origin: 1 }, 0, 0.0, &roof).unwrap();
        assert!(matches!(p.flow(5.0, &roof), Err(Error::Buffer { direction: "forward", .. })));
        assert!(matches!(p.flow(-3.0, &roof), Err(Error::Buffer { direction: "backward", .. })));
        assert!(p.flow(1.5, &roof).is_ok());
    }

    #[test]
    fn exact_mode_composes() {
        let full = Sft::full(2).unwrap();
        let f = LocallyConstantFn::by_symbol(&full, &[0.75, 1.25]).unwrap();
        let roof = RationalRoof::exact(&f).unwrap();
        let q = |a: i64, b: i64| BigRational::new(a.into(), b.into());
        let p = FlowPoint::new(Carrier::Periodic(vec![0, 1, 1]), 0, q(1, 3), &roof).unwrap();
        let a = p.flow(q(7, 3), &roof).unwrap().flow(q(-5, 2), &roof).unwrap();
        let b = p.flow(q(7, 3) + q(-5, 2), &roof).unwrap();
        assert_eq!(a, b);
    }
}
