//! Smooth even cutoff functions.

use num_complex::Complex64;

use super::jet::Jet;
use crate::error::{Error, Result};

/// `φ ≡ 1` on `|x| ≤ inner`, `φ ≡ 0` on `|x| ≥ outer`, joined by
/// `s(outer−|x|) / (s(outer−|x|) + s(|x|−inner))` with `s(t) = e^{−1/t}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BumpSpec {
    pub inner: f64,
    pub outer: f64,
}

impl Default for BumpSpec {
    fn default() -> Self {
        Self { inner: 1.0, outer: 2.0 }
    }
}

fn s(t: f64) -> f64 {
    if t > 0.0 {
        (-1.0 / t).exp()
    } else {
        0.0
    }
}

impl BumpSpec {
    pub fn new(inner: f64, outer: f64) -> Result<Self> {
        if !(inner > 0.0 && outer > inner && outer.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "bump needs 0 < inner < outer, got {inner} and {outer}"
            )));
        }
        Ok(Self { inner, outer })
    }

    /// Width of the transition region, used to rescale it onto `(0, 1)`.
    fn width(&self) -> f64 {
        self.outer - self.inner
    }

    pub fn eval(&self, x: f64) -> f64 {
        let ax = x.abs();
        if ax <= self.inner {
            return 1.0;
        }
        if ax >= self.outer {
            return 0.0;
        }
        let a = s((self.outer - ax) / self.width());
        let b = s((ax - self.inner) / self.width());
        a / (a + b)
    }

    /// `∫ φ = inner + outer`, since the transition is antisymmetric about its
    /// midpoint.
    pub fn integral(&self) -> f64 {
        self.inner + self.outer
    }

    /// The jet of `φ` at `x0`.
    pub fn jet(&self, x0: f64, order: usize) -> Jet {
        let ax = x0.abs();
        if ax <= self.inner {
            return Jet::constant(Complex64::new(1.0, 0.0), order);
        }
        if ax >= self.outer {
            return Jet::constant(Complex64::new(0.0, 0.0), order);
        }
        let x = Jet::variable(x0, order);
        let x = if x0 < 0.0 { -&x } else { x };
        let w = Complex64::new(1.0 / self.width(), 0.0);
        let one = Jet::constant(Complex64::new(self.outer, 0.0), order);
        let t1 = (&one - &x).scale(w);
        let t2 = (&x - &Jet::constant(Complex64::new(self.inner, 0.0), order)).scale(w);
        let s1 = (-&t1.recip()).exp();
        let s2 = (-&t2.recip()).exp();
        &s1 * &(&s1 + &s2).recip()
    }
}
