//! The GL(2) Jacquet integral `∫ e(x) (1+x²)^{−μ} dx`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::bump::BumpSpec;
use super::ibp::IBPScheme;
use super::jet::Jet;
use super::quad::{integrate, oscillatory_tail, unit_breaks, Estimate, QuadratureParams};
use super::special::{bessel_k, rgamma};
use crate::error::{Error, Result};

/// `e(x) = e^{2πix}`.
fn e(x: f64) -> Complex64 {
    Complex64::new(0.0, 2.0 * PI * x).exp()
}

fn one(order: usize) -> Jet {
    Jet::constant(Complex64::new(1.0, 0.0), order)
}

/// `(1+x²)^{−μ}`.
fn g(mu: Complex64, x: f64) -> Complex64 {
    Complex64::new(1.0 + x * x, 0.0).powc(-mu)
}

fn g_jet(mu: Complex64, x: &Jet) -> Jet {
    (&one(x.order()) + &(x * x)).powc(-mu)
}

/// `2π^μ Γ(μ)^{−1} K_{μ−1/2}(2π)`, the closed form of the integral.
///
/// `1/Γ` is entire, so the value is finite for every `μ` and vanishes at the
/// nonpositive integers.
pub fn gl2_reference(mu: Complex64) -> Complex64 {
    let pi_mu = (mu * PI.ln()).exp();
    2.0 * pi_mu * rgamma(mu) * bessel_k(mu - 0.5, 2.0 * PI)
}

fn tail_tol(q: &QuadratureParams) -> f64 {
    q.abs_tol.max(1e-300)
}

/// `2∫_0^R cos(2πx) g(x) dx` by adaptive quadrature, plus the asymptotic
/// expansion of the two tails past `R`.
pub fn gl2_direct(mu: Complex64, q: &QuadratureParams) -> Result<Estimate> {
    q.validate()?;
    if mu.re <= 0.5 {
        return Err(Error::DivergentRegion(mu.to_string()));
    }
    let r = q.radius;
    let body = integrate(
        &|x| 2.0 * (2.0 * PI * x).cos() * g(mu, x),
        &unit_breaks(0.0, r),
        q.abs_tol,
        q.rel_tol,
        q.max_subdivisions,
    );
    let f = g_jet(mu, &Jet::variable(r, q.tail_terms));
    let tail = oscillatory_tail(&f, r, 1.0, tail_tol(q)).add(oscillatory_tail(&f, r, -1.0, tail_tol(q)));
    Ok(body.add(tail))
}

/// The regularized integrand in `y = 1/t`: with `Q(y) = y^{k+2μ−2} h_w(y)`
/// and `D_j = (d/dy)^j (y^j Q)`, this is `S(y) = Σ_j (−1)^j q_j D_j(y)`.
struct Regularized {
    mu: Complex64,
    k: usize,
    q: Vec<Complex64>,
    bump: BumpSpec,
}

impl Regularized {
    /// `h_w(y) = (1+y²)^{−μ} (1 − φ(1/y))` for `y > 0`.
    fn h_w_jet(&self, y: &Jet) -> Jet {
        let order = y.order();
        let y0 = y.value().re;
        let cut = if 1.0 / y0 >= self.bump.outer {
            one(order)
        } else {
            &one(order) - &self.bump.jet(1.0 / y0, order).compose(&y.recip())
        };
        &g_jet(self.mu, y) * &cut
    }

    /// The jet of `S` at `y0`, of order `order`.
    fn s_jet(&self, y0: f64, order: usize) -> Jet {
        let full = self.k + order;
        let y = Jet::variable(y0, full);
        let qj = &y.powc(Complex64::new((self.k as f64) - 2.0, 0.0) + 2.0 * self.mu) * &self.h_w_jet(&y);
        let mut s = Jet::constant(Complex64::new(0.0, 0.0), order);
        for (j, coeff) in self.q.iter().enumerate() {
            if *coeff == Complex64::new(0.0, 0.0) {
                continue;
            }
            let d = (&y.powi(j) * &qj).differentiate(j);
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            for m in 0..=order {
                s.c[m] += d.c[m] * coeff * sign;
            }
        }
        s
    }

    fn sign_k(&self) -> f64 {
        if self.k.is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }

    /// `2 Σ_j |q_j D_j(1/t)| / t²`, which bounds the integrand and sets the
    /// scale of the rounding error in evaluating it.
    fn magnitude(&self, t: f64) -> f64 {
        let y = Jet::variable(1.0 / t, self.k);
        let qj = &y.powc(Complex64::new((self.k as f64) - 2.0, 0.0) + 2.0 * self.mu) * &self.h_w_jet(&y);
        let sum: f64 = self
            .q
            .iter()
            .enumerate()
            .map(|(j, coeff)| (coeff * (&y.powi(j) * &qj).derivative(j)).norm())
            .sum();
        2.0 * sum / (t * t)
    }

    /// The integrand in `t = 1/y`: `[e(t) + (−1)^k e(−t)] S(1/t)/t²`.
    fn in_t(&self, t: f64) -> Complex64 {
        (e(t) + e(-t) * self.sign_k()) * self.s_jet(1.0 / t, 0).value() / (t * t)
    }

    /// The jet in `t` of `S(1/t)/t²`.
    fn t_jet(&self, t0: f64, order: usize) -> Jet {
        let t = Jet::variable(t0, order);
        let inv = t.recip();
        &self.s_jet(1.0 / t0, order).compose(&inv) * &(&inv * &inv)
    }
}

/// The integral continued to `Re μ > (1−k)/2`.
///
/// With `f₁ = fφ` and `f_w = f(1−φ)`, the compact piece is `∫ e(x) f₁(x) dx`;
/// after `x ↦ 1/x` the other piece is `∫ e(1/x) h_w(x) |x|^{2μ−2} dx`, into
/// which the depth-`k` expansion of `e(1/x)` is substituted and integrated
/// by parts `k` times. The result is evaluated in `t = 1/|x|`.
///
/// The absolute tolerance of the regularized piece is raised to the rounding
/// level of its integrand, whose terms cancel increasingly as `k` grows.
pub fn gl2_continued(mu: Complex64, scheme: &IBPScheme, bump: &BumpSpec, q: &QuadratureParams) -> Result<Estimate> {
    q.validate()?;
    let k = scheme.k;
    if mu.re <= (1.0 - k as f64) / 2.0 {
        return Err(Error::InsufficientRegularization { k, mu: mu.to_string() });
    }
    let mut breaks = unit_breaks(0.0, bump.outer);
    breaks.push(bump.inner);
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let compact = integrate(
        &|x| 2.0 * (2.0 * PI * x).cos() * g(mu, x) * bump.eval(x),
        &breaks,
        q.abs_tol,
        q.rel_tol,
        q.max_subdivisions,
    );

    let reg = Regularized {
        mu,
        k,
        q: scheme.q(),
        bump: *bump,
    };
    let top = q.radius.max(bump.outer);
    let mut breaks = unit_breaks(bump.inner, top);
    breaks.push(bump.outer);
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    // the terms of S cancel, so its relative accuracy is limited by their size
    let scale = integrate(
        &|t| Complex64::new(reg.magnitude(t), 0.0),
        &breaks,
        0.0,
        1e-2,
        q.max_subdivisions,
    );
    let noise = 64.0 * f64::EPSILON * scale.value.re;
    let body = integrate(
        &|t| reg.in_t(t),
        &breaks,
        q.abs_tol.max(noise),
        q.rel_tol,
        q.max_subdivisions,
    );
    let f = reg.t_jet(top, q.tail_terms);
    let tail = oscillatory_tail(&f, top, 1.0, tail_tol(q))
        .add(oscillatory_tail(&f, top, -1.0, tail_tol(q)).scale(Complex64::new(reg.sign_k(), 0.0)));
    Ok(compact.add(body).add(tail))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn reference_values() {
        let want = PI * (-2.0 * PI).exp();
        assert!(rel(gl2_reference(c(1.0)), c(want)) < 1e-13);
        // K_{3/2}(z) = √(π/2z) e^{−z} (1 + 1/z), Γ(2) = 1
        let z = 2.0 * PI;
        let want2 = 2.0 * PI * PI * (PI / (2.0 * z)).sqrt() * (-z).exp() * (1.0 + 1.0 / z);
        assert!(rel(gl2_reference(c(2.0)), c(want2)) < 1e-13);
        assert_eq!(gl2_reference(c(0.0)), c(0.0));
        assert!(gl2_reference(c(0.25)).norm().is_finite());
    }

    #[test]
    fn direct_matches_reference() {
        let q = QuadratureParams::default();
        for mu in [c(1.0), c(2.0), c(0.75), Complex64::new(1.0, 0.5)] {
            let est = gl2_direct(mu, &q).unwrap();
            assert!(rel(est.value, gl2_reference(mu)) < 1e-8, "{mu}: {est:?}");
            assert!(est.converged);
        }
        assert!(matches!(gl2_direct(c(0.4), &q), Err(Error::DivergentRegion(_))));
    }

    #[test]
    fn unregularized_split_is_exact() {
        let q = QuadratureParams::default();
        let s = IBPScheme::new(0).unwrap();
        let a = gl2_continued(c(1.0), &s, &BumpSpec::default(), &q).unwrap();
        let b = gl2_direct(c(1.0), &q).unwrap();
        assert!(rel(a.value, b.value) < 1e-8, "{a:?} {b:?}");
    }

    #[test]
    fn continuation_matches_reference() {
        let q = QuadratureParams::default();
        let b = BumpSpec::default();
        let est = gl2_continued(c(0.25), &IBPScheme::new(4).unwrap(), &b, &q).unwrap();
        assert!(rel(est.value, gl2_reference(c(0.25))) < 1e-5, "{est:?}");
        let est = gl2_continued(c(-0.5), &IBPScheme::new(8).unwrap(), &b, &q).unwrap();
        assert!(rel(est.value, gl2_reference(c(-0.5))) < 1e-4, "{est:?}");
        assert!(matches!(
            gl2_continued(c(0.25), &IBPScheme::new(0).unwrap(), &b, &q),
            Err(Error::InsufficientRegularization { k: 0, .. })
        ));
    }

    #[test]
    fn depths_agree() {
        let q = QuadratureParams::default();
        let b = BumpSpec::new(0.75, 1.5).unwrap();
        let mu = Complex64::new(0.6, 0.3);
        let vals: Vec<Complex64> = (1..=4)
            .map(|k| gl2_continued(mu, &IBPScheme::new(k).unwrap(), &b, &q).unwrap().value)
            .collect();
        for v in &vals {
            assert!(rel(*v, gl2_reference(mu)) < 1e-8, "{vals:?}");
        }
    }
}
