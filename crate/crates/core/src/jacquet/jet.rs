//! Truncated Taylor series ("jets") with complex coefficients.
//!
//! A jet of order `n` at `x0` stores `f^{(m)}(x0)/m!` for `m = 0..=n`, and
//! arithmetic on jets propagates derivatives exactly up to rounding.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    pub c: Vec<Complex64>,
}

impl Jet {
    pub fn constant(v: Complex64, order: usize) -> Self {
        let mut c = vec![Complex64::new(0.0, 0.0); order + 1];
        c[0] = v;
        Self { c }
    }

    /// The identity function at `x0`.
    pub fn variable(x0: f64, order: usize) -> Self {
        let mut j = Self::constant(Complex64::new(x0, 0.0), order);
        if order >= 1 {
            j.c[1] = Complex64::new(1.0, 0.0);
        }
        j
    }

    pub fn order(&self) -> usize {
        self.c.len() - 1
    }

    pub fn value(&self) -> Complex64 {
        self.c[0]
    }

    /// `f^{(m)}(x0)`.
    pub fn derivative(&self, m: usize) -> Complex64 {
        self.c[m] * factorial(m)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            c: self.c.iter().map(|x| x * s).collect(),
        }
    }

    pub fn recip(&self) -> Self {
        let n = self.c.len();
        let a0 = self.c[0];
        let mut b = vec![Complex64::new(0.0, 0.0); n];
        b[0] = 1.0 / a0;
        for k in 1..n {
            let s: Complex64 = (1..=k).map(|i| self.c[i] * b[k - i]).sum();
            b[k] = -s / a0;
        }
        Self { c: b }
    }

    pub fn exp(&self) -> Self {
        let n = self.c.len();
        let mut e = vec![Complex64::new(0.0, 0.0); n];
        e[0] = self.c[0].exp();
        for k in 1..n {
            let s: Complex64 = (1..=k).map(|i| self.c[i] * e[k - i] * i as f64).sum();
            e[k] = s / k as f64;
        }
        Self { c: e }
    }

    /// Principal logarithm.
    pub fn ln(&self) -> Self {
        let n = self.c.len();
        let a0 = self.c[0];
        let mut l = vec![Complex64::new(0.0, 0.0); n];
        l[0] = a0.ln();
        for k in 1..n {
            let s: Complex64 = (1..k).map(|i| l[i] * self.c[k - i] * i as f64).sum();
            l[k] = (self.c[k] - s / k as f64) / a0;
        }
        Self { c: l }
    }

    /// `self^p` on the principal branch.
    pub fn powc(&self, p: Complex64) -> Self {
        self.ln().scale(p).exp()
    }

    /// `self^j` for a nonnegative integer `j`.
    pub fn powi(&self, j: usize) -> Self {
        (0..j).fold(Self::constant(Complex64::new(1.0, 0.0), self.order()), |acc, _| {
            &acc * self
        })
    }

    /// `f ∘ g`, where `self` is the jet of `f` at `g(x0)`.
    pub fn compose(&self, inner: &Jet) -> Jet {
        let order = inner.order();
        let mut shift = inner.clone();
        shift.c[0] = Complex64::new(0.0, 0.0);
        let top = self.order().min(order);
        let mut acc = Jet::constant(self.c[top], order);
        for m in (0..top).rev() {
            acc = &acc * &shift;
            acc.c[0] += self.c[m];
        }
        acc
    }

    /// The jet of the `j`-th derivative, of order `order − j`.
    pub fn differentiate(&self, j: usize) -> Jet {
        let c = (j..self.c.len()).map(|m| self.c[m] * falling(m, j)).collect();
        Jet { c }
    }
}

pub fn factorial(m: usize) -> f64 {
    (1..=m).map(|i| i as f64).product()
}

/// `m (m−1) ⋯ (m−j+1)`.
fn falling(m: usize, j: usize) -> f64 {
    (0..j).map(|i| (m - i) as f64).product()
}

impl Add for &Jet {
    type Output = Jet;
    fn add(self, o: &Jet) -> Jet {
        Jet {
            c: self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, o: &Jet) -> Jet {
        Jet {
            c: self.c.iter().zip(&o.c).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet {
            c: self.c.iter().map(|a| -a).collect(),
        }
    }
}

impl Mul for &Jet {
    type Output = Jet;
    fn mul(self, o: &Jet) -> Jet {
        let n = self.c.len().min(o.c.len());
        let c = (0..n).map(|k| (0..=k).map(|i| self.c[i] * o.c[k - i]).sum()).collect();
        Jet { c }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: f64, tol: f64) -> bool {
        (a - b).norm() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn elementary_derivatives() {
        let x = Jet::variable(0.7, 6);
        let e = x.exp();
        for m in 0..=6 {
            assert!(close(e.derivative(m), 0.7f64.exp(), 1e-14));
        }
        let r = x.recip();
        // d^3/dx^3 1/x = -6/x^4
        assert!(close(r.derivative(3), -6.0 / 0.7f64.powi(4), 1e-13));
        let l = x.ln();
        assert!(close(l.derivative(2), -1.0 / 0.49, 1e-13));
        let p = x.powc(Complex64::new(2.5, 0.0));
        // d^2/dx^2 x^2.5 = 3.75 x^0.5
        assert!(close(p.derivative(2), 3.75 * 0.7f64.sqrt(), 1e-13));
        assert!(close(x.powi(3).derivative(3), 6.0, 1e-14));
    }

    #[test]
    fn composition_and_differentiation() {
        // f(y) = y^2 at y0 = 1/t0, composed with y = 1/t: f = t^-2
        let t0 = 1.6;
        let t = Jet::variable(t0, 5);
        let y = t.recip();
        let f = Jet::variable(1.0 / t0, 5).powi(2);
        let g = f.compose(&y);
        let want = t.powi(2).recip();
        for m in 0..=5 {
            assert!((g.derivative(m) - want.derivative(m)).norm() < 1e-12);
        }
        let d = Jet::variable(2.0, 4).powi(4).differentiate(2);
        // (x^4)'' = 12 x^2
        assert!(close(d.value(), 48.0, 1e-14));
        assert_eq!(d.order(), 2);
    }
}
