//! Exponent bookkeeping for `τ(wu)` after the change of variables.
//!
//! `τ(wu)` is `e(Σ x_{i,i+1}) ∏ |b_{i,i}|^{ρ_i−λ_i} sgn(b_{i,i})^{δ_i}` with
//! `ρ_i = (r+1)/2 − i`. Since `n_{a,b}` enters `b_{b,b}` to the power `+1`
//! and `b_{a,a}` to the power `−1`, it collects the character exponent
//! `(λ_a−ρ_a) − (λ_b−ρ_b)` and the parity `δ_a + δ_b`; the measure adds
//! `b−a−1`. The signs `(−1)^{i+π⁻¹(i)}` and `−n_{a,i}` of the diagonal
//! entries leave a global sign depending only on `w` and `δ`.

use std::fmt;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::weyl::{Permutation, VarIndex};

/// `Σ c_i λ_i + c_0` with rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearForm {
    pub coeffs: Vec<BigRational>,
    pub constant: BigRational,
}

impl LinearForm {
    pub fn zero(r: usize) -> Self {
        Self {
            coeffs: vec![BigRational::zero(); r],
            constant: BigRational::zero(),
        }
    }

    pub fn eval(&self, lambda: &[Complex64]) -> Result<Complex64> {
        if lambda.len() != self.coeffs.len() {
            return Err(Error::LengthMismatch {
                expected: self.coeffs.len(),
                got: lambda.len(),
            });
        }
        let f = |q: &BigRational| q.to_f64().expect("finite rational");
        Ok(self
            .coeffs
            .iter()
            .zip(lambda)
            .fold(Complex64::new(f(&self.constant), 0.0), |acc, (c, l)| acc + l * f(c)))
    }

    fn add(&self, o: &Self) -> Self {
        Self {
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect(),
            constant: &self.constant + &o.constant,
        }
    }
}

fn signed_term(out: &mut String, c: &BigRational, sym: &str) {
    let neg = c.is_negative();
    if out.is_empty() {
        if neg {
            out.push('-');
        }
    } else {
        out.push(if neg { '-' } else { '+' });
    }
    let mag = c.abs();
    if sym.is_empty() {
        out.push_str(&mag.to_string());
    } else if mag.is_one() {
        out.push_str(sym);
    } else if mag.is_integer() {
        out.push_str(&format!("{mag}{sym}"));
    } else {
        out.push_str(&format!("({mag}){sym}"));
    }
}

impl fmt::Display for LinearForm {
    /// Renders like `λ1-λ2-1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                signed_term(&mut out, c, &format!("λ{}", i + 1));
            }
        }
        if !self.constant.is_zero() {
            signed_term(&mut out, &self.constant, "");
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

/// `Σ c_i δ_i` over `ℤ/2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityForm {
    pub coeffs: Vec<bool>,
}

impl ParityForm {
    pub fn eval(&self, delta: &[u8]) -> Result<u8> {
        if delta.len() != self.coeffs.len() {
            return Err(Error::LengthMismatch {
                expected: self.coeffs.len(),
                got: delta.len(),
            });
        }
        Ok(self
            .coeffs
            .iter()
            .zip(delta)
            .fold(0, |acc, (&c, &d)| acc ^ (u8::from(c) & (d & 1))))
    }
}

impl fmt::Display for ParityForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c)
            .map(|(i, _)| format!("δ{}", i + 1))
            .collect();
        if terms.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&terms.join("+"))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaExponent {
    pub alpha: VarIndex,
    /// `b − a − 1`, from the measure.
    pub measure: i64,
    /// `(λ_a−ρ_a) − (λ_b−ρ_b)`.
    pub character: LinearForm,
    /// `character + measure`: the exponent of `|n_α|`.
    pub total: LinearForm,
    /// Exponent of `sgn(n_α)`.
    pub sign: ParityForm,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentData {
    pub perm: Permutation,
    /// In canonical `(b, a)` order.
    pub entries: Vec<AlphaExponent>,
    /// Exponent of `|b_{i,i}|` in `τ(wu)`: `ρ_i − λ_i`.
    pub diag: Vec<LinearForm>,
    /// Parity of the overall sign.
    pub global_sign: ParityForm,
}

/// Numeric exponents for a fixed `(λ, δ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct InstantiatedExponents {
    pub entries: Vec<(VarIndex, Complex64, u8)>,
    pub global_sign: i32,
}

impl ExponentData {
    pub fn get(&self, alpha: VarIndex) -> Option<&AlphaExponent> {
        self.entries.iter().find(|e| e.alpha == alpha)
    }

    pub fn instantiate(&self, lambda: &[Complex64], delta: &[u8]) -> Result<InstantiatedExponents> {
        let r = self.perm.rank();
        if lambda.len() != r {
            return Err(Error::LengthMismatch {
                expected: r,
                got: lambda.len(),
            });
        }
        let entries = self
            .entries
            .iter()
            .map(|e| Ok((e.alpha, e.total.eval(lambda)?, e.sign.eval(delta)?)))
            .collect::<Result<Vec<_>>>()?;
        let global_sign = if self.global_sign.eval(delta)? == 0 { 1 } else { -1 };
        Ok(InstantiatedExponents { entries, global_sign })
    }
}

fn rho(r: usize, i: usize) -> BigRational {
    BigRational::new((r as i64 + 1).into(), 2.into()) - BigRational::from_integer((i as i64).into())
}

pub fn exponents(w: &Permutation) -> ExponentData {
    let r = w.rank();
    let free = w.free_indices();
    let diag: Vec<LinearForm> = (1..=r)
        .map(|i| {
            let mut f = LinearForm::zero(r);
            f.coeffs[i - 1] = -BigRational::one();
            f.constant = rho(r, i);
            f
        })
        .collect();
    let entries = free
        .iter()
        .map(|&alpha| {
            let (a, b) = (alpha.a(), alpha.b());
            let mut character = LinearForm::zero(r);
            character.coeffs[a - 1] = BigRational::one();
            character.coeffs[b - 1] = -BigRational::one();
            character.constant = rho(r, b) - rho(r, a);
            let measure = (b - a - 1) as i64;
            let mut m = LinearForm::zero(r);
            m.constant = BigRational::from_integer(measure.into());
            let mut sign = vec![false; r];
            sign[a - 1] = true;
            sign[b - 1] = true;
            AlphaExponent {
                alpha,
                measure,
                total: character.add(&m),
                character,
                sign: ParityForm { coeffs: sign },
            }
        })
        .collect();
    let global_sign = ParityForm {
        coeffs: (1..=r)
            .map(|i| {
                let above = free.iter().filter(|v| v.b() == i).count();
                (i + w.preimage(i) + above) % 2 == 1
            })
            .collect(),
    };
    ExponentData {
        perm: w.clone(),
        entries,
        diag,
        global_sign,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn longest_three() {
        let w = Permutation::parse("3,2,1").unwrap();
        let e = exponents(&w);
        let order: Vec<String> = e.entries.iter().map(|x| x.alpha.to_string()).collect();
        assert_eq!(order, ["1,2", "1,3", "2,3"]);
        let inst = e.instantiate(&[c(1.0), c(0.0), c(-1.0)], &[0, 0, 0]).unwrap();
        let t: Vec<f64> = inst.entries.iter().map(|x| x.1.re).collect();
        assert_eq!(t, vec![0.0, 1.0, 0.0]);
        assert_eq!(e.entries[0].total.to_string(), "λ1-λ2-1");
        assert_eq!(e.entries[1].total.to_string(), "λ1-λ3-1");
        assert_eq!(e.entries[0].character.to_string(), "λ1-λ2-1");
        assert_eq!(e.entries[1].character.to_string(), "λ1-λ3-2");
        assert_eq!(e.entries[0].sign.to_string(), "δ1+δ2");
    }

    #[test]
    fn rank_two_convention() {
        let w = Permutation::parse("2,1").unwrap();
        let e = exponents(&w);
        let mu = Complex64::new(0.3, 0.7);
        let inst = e.instantiate(&[mu, -mu], &[0, 0]).unwrap();
        assert!((inst.entries[0].1 - (2.0 * mu - 1.0)).norm() < 1e-15);
    }

    #[test]
    fn identity_is_empty() {
        let e = exponents(&Permutation::identity(3));
        assert!(e.entries.is_empty());
        assert!(e.instantiate(&[c(0.0); 2], &[0; 3]).is_err());
    }
}
