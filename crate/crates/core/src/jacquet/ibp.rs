//! The identity `e(1/x) = (−x²/(2πi) d/dx)^k e(1/x) = Σ_j q_j x^{j+k} (d/dx)^j e(1/x)`
//! used to regularize integrals near `x = 0`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Regularizations beyond this order gain nothing in double precision.
pub const MAX_IBP_ORDER: usize = 16;

/// `q_j = a_j (i/2π)^k` for `j = 0..=k`, where `(x² d/dx)^k = Σ_j a_j x^{j+k} (d/dx)^j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IBPScheme {
    pub k: usize,
    /// The integers `a_j`; `a_0 = 0` unless `k = 0`.
    pub a: Vec<BigInt>,
}

impl IBPScheme {
    pub fn new(k: usize) -> Result<Self> {
        if k > MAX_IBP_ORDER {
            return Err(Error::InvalidParameter(format!(
                "regularization order {k} exceeds {MAX_IBP_ORDER}"
            )));
        }
        // x²∂ · x^{j+k}∂^j = (j+k) x^{j+k+1}∂^j + x^{j+k+2}∂^{j+1}
        let mut a = vec![BigInt::one()];
        for step in 0..k {
            let mut next = vec![BigInt::zero(); a.len() + 1];
            for (j, c) in a.iter().enumerate() {
                next[j] += c * BigInt::from(j + step);
                next[j + 1] += c;
            }
            a = next;
        }
        Ok(Self { k, a })
    }

    /// `q_j` as complex numbers.
    pub fn q(&self) -> Vec<Complex64> {
        let pref = Complex64::new(0.0, 1.0 / (2.0 * PI)).powu(self.k as u32);
        self.a
            .iter()
            .map(|c| pref * c.to_f64().expect("small coefficient"))
            .collect()
    }

    /// Checks `Σ_j a_j x^{j+k} (d/dx)^j e(1/x) = (−2πi)^k e(1/x)` exactly.
    ///
    /// Writing `(d/dx)^j e(1/x) = e(1/x) p_j(y, c)` with `y = 1/x` and
    /// `c = 2πi`, the polynomials obey `p_{j+1} = −y²(c p_j + ∂_y p_j)`, and
    /// the sum becomes a polynomial identity in `y` and `c` over `ℤ`.
    pub fn verify(&self) -> bool {
        type P = BTreeMap<(i64, u32), BigInt>;
        let mut p: P = BTreeMap::from([((0, 0), BigInt::one())]);
        let mut total: P = BTreeMap::new();
        for (j, a) in self.a.iter().enumerate() {
            if !a.is_zero() {
                for ((ey, ec), v) in &p {
                    // x^{j+k} = y^{−(j+k)}
                    *total.entry((ey - (j + self.k) as i64, *ec)).or_default() += a * v;
                }
            }
            let mut next: P = BTreeMap::new();
            for ((ey, ec), v) in &p {
                *next.entry((ey + 2, ec + 1)).or_default() -= v;
                if *ey != 0 {
                    *next.entry((ey + 1, *ec)).or_default() -= v * BigInt::from(*ey);
                }
            }
            p = next;
        }
        total.retain(|_, v| !v.is_zero());
        let sign = if self.k.is_multiple_of(2) {
            BigInt::one()
        } else {
            -BigInt::one()
        };
        total == BTreeMap::from([((0, self.k as u32), sign)])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coefficients_are_lah_numbers() {
        let s = IBPScheme::new(4).unwrap();
        let want: Vec<BigInt> = [0, 24, 36, 12, 1].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(s.a, want);
        assert_eq!(IBPScheme::new(0).unwrap().a, vec![BigInt::one()]);
        assert!(IBPScheme::new(MAX_IBP_ORDER + 1).is_err());
    }

    #[test]
    fn identity_holds_symbolically() {
        for k in 0..=8 {
            assert!(IBPScheme::new(k).unwrap().verify(), "k = {k}");
        }
        let mut bad = IBPScheme::new(3).unwrap();
        bad.a[2] += 1;
        assert!(!bad.verify());
    }

    #[test]
    fn identity_holds_numerically() {
        // e(1/x) against the expansion with derivatives of e(1/x) from jets
        use crate::jacquet::jet::Jet;
        let x0 = 0.37;
        let k = 5;
        let s = IBPScheme::new(k).unwrap();
        let c = Complex64::new(0.0, 2.0 * PI);
        let e = Jet::variable(x0, k).recip().scale(c).exp();
        let sum: Complex64 = s
            .q()
            .iter()
            .enumerate()
            .map(|(j, q)| q * x0.powi((j + k) as i32) * e.derivative(j))
            .sum();
        assert!((sum - e.value()).norm() < 1e-10, "{sum} vs {}", e.value());
    }
}
