//! Adaptive Gauss–Kronrod quadrature of complex-valued functions and the
//! asymptotic tail of oscillatory integrals.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use num_complex::Complex64;

use super::jet::Jet;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureParams {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Point past which an oscillatory integral is replaced by its
    /// asymptotic expansion.
    pub radius: f64,
    pub max_subdivisions: usize,
    /// Highest derivative used in the asymptotic tail.
    pub tail_terms: usize,
}

impl Default for QuadratureParams {
    fn default() -> Self {
        Self {
            abs_tol: 1e-13,
            rel_tol: 1e-11,
            radius: 20.0,
            max_subdivisions: 20_000,
            tail_terms: 24,
        }
    }
}

impl QuadratureParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol >= 0.0 && self.rel_tol >= 0.0 && self.abs_tol + self.rel_tol > 0.0) {
            return Err(Error::InvalidParameter(
                "tolerances must be nonnegative and not both zero".into(),
            ));
        }
        if !(self.radius >= 2.0 && self.radius.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "radius must be at least 2, got {}",
                self.radius
            )));
        }
        if self.max_subdivisions == 0 || self.tail_terms == 0 {
            return Err(Error::InvalidParameter(
                "subdivision and tail limits must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// A value with an error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: Complex64,
    pub error: f64,
    pub evaluations: usize,
    /// False when a subdivision limit stopped refinement early.
    pub converged: bool,
}

impl Estimate {
    pub fn exact(value: Complex64) -> Self {
        Self {
            value,
            error: 0.0,
            evaluations: 0,
            converged: true,
        }
    }

    pub fn add(self, o: Estimate) -> Estimate {
        Estimate {
            value: self.value + o.value,
            error: self.error + o.error,
            evaluations: self.evaluations + o.evaluations,
            converged: self.converged && o.converged,
        }
    }

    pub fn scale(self, s: Complex64) -> Estimate {
        Estimate {
            value: self.value * s,
            error: self.error * s.norm(),
            ..self
        }
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// One 15-point Kronrod rule with the embedded 7-point Gauss rule as error
/// estimate. Also returns the Kronrod estimate of `∫|f|`.
pub fn gk15(f: &impl Fn(f64) -> Complex64, a: f64, b: f64) -> (Complex64, f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    let mut abs = fc.norm() * WGK[7];
    for i in 0..7 {
        let x = h * XGK[i];
        let (lo, hi) = (f(c - x), f(c + x));
        let s = lo + hi;
        k += s * WGK[i];
        abs += (lo.norm() + hi.norm()) * WGK[i];
        if i % 2 == 1 {
            g += s * WG[i / 2];
        }
    }
    let h = h.abs();
    (k * h, ((k - g) * h).norm(), abs * h)
}

/// Below this multiple of `∫|f|` an error estimate is rounding noise.
const ROUNDOFF: f64 = 50.0 * f64::EPSILON;

struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    /// Error estimate, floored at zero once it reaches rounding level.
    error: f64,
    abs: f64,
}

impl Panel {
    fn new(a: f64, b: f64, (value, error, abs): (Complex64, f64, f64)) -> Self {
        let error = if error <= ROUNDOFF * abs { 0.0 } else { error };
        Self {
            a,
            b,
            value,
            error,
            abs,
        }
    }
}

impl PartialEq for Panel {
    fn eq(&self, o: &Self) -> bool {
        self.error == o.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Panel {
    fn cmp(&self, o: &Self) -> Ordering {
        self.error.total_cmp(&o.error)
    }
}

/// Globally adaptive integration over consecutive panels `breaks[i]..breaks[i+1]`,
/// bisecting the panel with the largest error until the total error meets
/// the tolerance. Panels resolved to rounding level are not split further,
/// and the reported error then includes that rounding floor.
pub fn integrate(
    f: &impl Fn(f64) -> Complex64,
    breaks: &[f64],
    abs_tol: f64,
    rel_tol: f64,
    max_subdivisions: usize,
) -> Estimate {
    let mut heap = BinaryHeap::new();
    let mut value = Complex64::new(0.0, 0.0);
    let mut error = 0.0;
    let mut evaluations = 0;
    for win in breaks.windows(2) {
        let p = Panel::new(win[0], win[1], gk15(f, win[0], win[1]));
        evaluations += 15;
        value += p.value;
        error += p.error;
        heap.push(p);
    }
    let mut splits = 0;
    while error > abs_tol.max(rel_tol * value.norm()) && splits < max_subdivisions {
        let Some(p) = heap.pop() else { break };
        let m = 0.5 * (p.a + p.b);
        if p.error == 0.0 || m <= p.a || m >= p.b {
            heap.push(p);
            break;
        }
        let p1 = Panel::new(p.a, m, gk15(f, p.a, m));
        let p2 = Panel::new(m, p.b, gk15(f, m, p.b));
        evaluations += 30;
        splits += 1;
        value += p1.value + p2.value - p.value;
        error += p1.error + p2.error - p.error;
        heap.push(p1);
        heap.push(p2);
    }
    // recompute the running sums to shed accumulated cancellation
    let value = heap.iter().map(|p| p.value).sum();
    let floor = ROUNDOFF * heap.iter().map(|p| p.abs).sum::<f64>();
    let error: f64 = heap.iter().map(|p| p.error).sum();
    Estimate {
        value,
        error: error + floor,
        evaluations,
        converged: error <= abs_tol.max(rel_tol * Complex64::norm(value)),
    }
}

/// `a, a+1, …, b` with the last panel shortened to end at `b`.
pub fn unit_breaks(a: f64, b: f64) -> Vec<f64> {
    let mut out = vec![a];
    let mut x = a.floor() + 1.0;
    while x < b {
        out.push(x);
        x += 1.0;
    }
    out.push(b);
    out
}

/// `∫_T^∞ e^{2πi s t} F(t) dt` from the jet of `F` at `T`, `s = ±1`, by
/// repeated integration by parts:
/// `−e^{iωT} Σ_m (−1)^m F^{(m)}(T)/(iω)^{m+1}` with `ω = 2πs`.
///
/// Summation stops once the terms fall below `tol` or start to grow; the
/// error estimate is the size of the first omitted term.
pub fn oscillatory_tail(f: &Jet, t: f64, s: f64, tol: f64) -> Estimate {
    let iw = Complex64::new(0.0, 2.0 * PI * s);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut prev = f64::INFINITY;
    let mut error = f64::INFINITY;
    let mut pw = iw;
    for m in 0..=f.order() {
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        let term = f.derivative(m) * sign / pw;
        let size = term.norm();
        if size > prev {
            error = prev;
            break;
        }
        sum += term;
        prev = size;
        error = size;
        if size <= tol * 1e-3 {
            break;
        }
        pw *= iw;
    }
    let phase = (iw * t).exp();
    Estimate {
        value: -phase * sum,
        error,
        evaluations: 1,
        converged: error <= tol,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_and_smooth_functions() {
        let est = integrate(&|x| Complex64::new(x.powi(5), 0.0), &[0.0, 2.0], 1e-14, 1e-14, 100);
        assert!((est.value.re - 64.0 / 6.0).abs() < 1e-12);
        let est = integrate(
            &|x| Complex64::new(0.0, x).exp(),
            &unit_breaks(0.0, 10.0),
            1e-13,
            1e-13,
            1000,
        );
        let want = (Complex64::new(0.0, 10.0).exp() - 1.0) / Complex64::new(0.0, 1.0);
        assert!((est.value - want).norm() < 1e-12);
        assert!(est.converged);
    }

    #[test]
    fn endpoint_singularity_converges() {
        let est = integrate(
            &|x| Complex64::new(x.sqrt().recip(), 0.0),
            &[0.0, 1.0],
            1e-10,
            1e-10,
            2000,
        );
        assert!((est.value.re - 2.0).abs() < 1e-8, "{:?}", est);
    }

    #[test]
    fn tail_of_algebraic_decay() {
        // ∫_T^∞ e(t) t^{-2} dt, checked against direct quadrature out to a far
        // point plus the same expansion there
        let t0 = 5.0;
        let jet = |t: f64| Jet::variable(t, 20).powi(2).recip();
        let tail = oscillatory_tail(&jet(t0), t0, 1.0, 1e-14);
        let far = 60.0;
        let mid = integrate(
            &|t| Complex64::new(0.0, 2.0 * PI * t).exp() / (t * t),
            &unit_breaks(t0, far),
            1e-15,
            1e-14,
            10_000,
        );
        let rest = oscillatory_tail(&jet(far), far, 1.0, 1e-16);
        assert!((tail.value - mid.value - rest.value).norm() < 1e-12);
        assert!(tail.error < 1e-12);
    }
}
