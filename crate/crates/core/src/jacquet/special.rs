//! Gamma and modified Bessel `K` functions of complex order.

use std::f64::consts::PI;

use num_complex::Complex64;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

fn is_nonpositive_integer(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0
}

fn gamma_right(z: Complex64) -> Complex64 {
    let z = z - 1.0;
    let x = LANCZOS[1..]
        .iter()
        .enumerate()
        .fold(Complex64::new(LANCZOS[0], 0.0), |acc, (i, &p)| {
            acc + p / (z + (i + 1) as f64)
        });
    let t = z + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powc(z + 0.5) * (-t).exp() * x
}

/// `Γ(z)`; infinite at the nonpositive integers.
pub fn gamma(z: Complex64) -> Complex64 {
    if is_nonpositive_integer(z) {
        return Complex64::new(f64::INFINITY, 0.0);
    }
    if z.re < 0.5 {
        PI / ((PI * z).sin() * gamma_right(1.0 - z))
    } else {
        gamma_right(z)
    }
}

/// `1/Γ(z)`, an entire function.
pub fn rgamma(z: Complex64) -> Complex64 {
    if is_nonpositive_integer(z) {
        return Complex64::new(0.0, 0.0);
    }
    if z.re < 0.5 {
        (PI * z).sin() * gamma_right(1.0 - z) / PI
    } else {
        1.0 / gamma_right(z)
    }
}

/// `K_μ(x)` and `K_{μ+1}(x)` for `|Re μ| ≤ 1/2`, `x ≥ 2`, by Steed's method
/// on the second continued fraction with Temme's normalization.
fn bessel_k_pair_cf2(mu: Complex64, x: f64) -> (Complex64, Complex64) {
    const EPS: f64 = 1e-16;
    const MAXIT: usize = 10_000;
    let one = Complex64::new(1.0, 0.0);
    let mut b = Complex64::new(2.0 * (1.0 + x), 0.0);
    let mut d = one / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = Complex64::new(0.0, 0.0);
    let mut q2 = one;
    let a1 = 0.25 - mu * mu;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = one + q * delh;
    for i in 1..MAXIT {
        let fi = i as f64;
        a -= 2.0 * fi;
        c = -a * c / (fi + 1.0);
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = one / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        let dels = q * delh;
        s += dels;
        if dels.norm() < EPS * s.norm() {
            break;
        }
    }
    let h = a1 * h;
    let k_mu = (PI / (2.0 * x)).sqrt() * (-x).exp() / s;
    let k_mu1 = k_mu * (mu + x + 0.5 - h) / x;
    (k_mu, k_mu1)
}

/// `K_ν(x) = ∫_0^∞ e^{−x cosh t} cosh(νt) dt` by the trapezoidal rule, which
/// converges geometrically for this analytic, rapidly decaying integrand.
pub fn bessel_k_integral(nu: Complex64, x: f64) -> Complex64 {
    let step: f64 = 0.01;
    let mut sum = 0.5 * (-x).exp() * Complex64::new(1.0, 0.0);
    let mut t = step;
    loop {
        let decay = -x * t.cosh();
        let term = (decay + nu * t).exp() * 0.5 + (decay - nu * t).exp() * 0.5;
        sum += term;
        if decay + nu.re.abs() * t < -745.0 {
            break;
        }
        t += step;
    }
    sum * step
}

/// Modified Bessel function of the second kind for complex order and
/// positive real argument.
pub fn bessel_k(nu: Complex64, x: f64) -> Complex64 {
    assert!(x > 0.0, "K_nu needs a positive argument");
    let nu = if nu.re < 0.0 { -nu } else { nu };
    if x < 2.0 {
        return bessel_k_integral(nu, x);
    }
    let n = nu.re.round();
    let mu = nu - n;
    let (mut k0, mut k1) = bessel_k_pair_cf2(mu, x);
    for i in 1..=n as usize {
        let next = (mu + i as f64) * (2.0 / x) * k1 + k0;
        k0 = k1;
        k1 = next;
    }
    k0
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
    fn gamma_values() {
        assert!(rel(gamma(c(5.0)), c(24.0)) < 1e-14);
        assert!(rel(gamma(c(0.5)), c(PI.sqrt())) < 1e-14);
        assert!(rel(gamma(c(-0.5)), c(-2.0 * PI.sqrt())) < 1e-14);
        assert!(rel(gamma(c(0.25)), c(3.625_609_908_221_908)) < 1e-14);
        assert_eq!(rgamma(c(-2.0)), c(0.0));
        let z = Complex64::new(0.3, 1.7);
        assert!(rel(gamma(z + 1.0), z * gamma(z)) < 1e-13);
        assert!(rel(rgamma(z) * gamma(z), c(1.0)) < 1e-14);
    }

    #[test]
    fn half_integer_order_closed_form() {
        for x in [0.5, 2.0, 2.0 * PI, 15.0] {
            let want = (PI / (2.0 * x)).sqrt() * (-x).exp();
            assert!(rel(bessel_k(c(0.5), x), c(want)) < 1e-13, "{x}");
            assert!(rel(bessel_k(c(-0.5), x), c(want)) < 1e-13, "{x}");
            let want32 = want * (1.0 + 1.0 / x);
            assert!(rel(bessel_k(c(1.5), x), c(want32)) < 1e-13, "{x}");
        }
    }

    #[test]
    fn continued_fraction_matches_integral() {
        let x = 2.0 * PI;
        for nu in [c(0.0), c(0.25), c(-0.75), c(1.0), c(3.3), Complex64::new(0.4, 1.2)] {
            let a = bessel_k(nu, x);
            let b = bessel_k_integral(nu, x);
            assert!(rel(a, b) < 1e-12, "{nu}: {a} vs {b}");
        }
        assert!(rel(bessel_k(c(0.0), 1.0), c(0.421_024_438_240_708_3)) < 1e-12);
    }
}
