//! Integrands after the change of variables `u = R_w(n)`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::biratmap::{exponents, forward_map, LinearForm};
use crate::error::{Error, Result};
use crate::ratfunc::{RatFunc, Var};
use crate::weyl::{Permutation, VarIndex};

/// How the phase `z` enters the integrand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseKind {
    /// `e(z) = e^{2πiz}`.
    Additive,
    /// `e^{iyz}` for a frequency `y > 0` supplied at evaluation.
    Frequency,
}

/// One variable's contribution `e(c/n_α) |n_α|^t sgn(n_α)^η`.
#[derive(Debug, Clone, PartialEq)]
pub struct Factor {
    pub alpha: VarIndex,
    /// Coefficient `c` of `1/n_α` in the phase.
    pub phase: Complex64,
    pub exponent: Complex64,
    /// The exponent as a form in `λ`, when it came from one.
    pub exponent_form: Option<LinearForm>,
    pub parity: u8,
}

/// A polynomial phase term `c·f(n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyPhase {
    pub coefficient: Complex64,
    pub f: RatFunc,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntegrandDescriptor {
    pub perm: Permutation,
    pub kind: PhaseKind,
    /// In canonical order.
    pub factors: Vec<Factor>,
    pub poly_phase: Option<PolyPhase>,
    pub global_sign: i32,
}

impl IntegrandDescriptor {
    pub fn variables(&self) -> Vec<VarIndex> {
        self.factors.iter().map(|f| f.alpha).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// The integrand at `n`; `y` scales the phase of a [`PhaseKind::Frequency`]
    /// integrand and is ignored otherwise.
    pub fn eval(&self, n: &BTreeMap<VarIndex, f64>, y: f64) -> Result<Complex64> {
        let get = |a: VarIndex| {
            n.get(&a)
                .copied()
                .ok_or_else(|| Error::UnassignedVariable(Var::N(a).to_string()))
        };
        let mut phase = Complex64::new(0.0, 0.0);
        let mut amp = Complex64::new(f64::from(self.global_sign), 0.0);
        for f in &self.factors {
            let x = get(f.alpha)?;
            if x == 0.0 {
                return Err(Error::Pole);
            }
            phase += f.phase / x;
            amp *= Complex64::new(x.abs(), 0.0).powc(f.exponent);
            if f.parity == 1 && x < 0.0 {
                amp = -amp;
            }
        }
        if let Some(p) = &self.poly_phase {
            for v in p.f.variables() {
                get(v.index())?;
            }
            let val = p.f.eval_f64(&|v| n.get(&v.index()).copied().unwrap_or(f64::NAN));
            if !val.is_finite() {
                return Err(Error::Pole);
            }
            phase += p.coefficient * val;
        }
        let scale = match self.kind {
            PhaseKind::Additive => 2.0 * PI,
            PhaseKind::Frequency => y,
        };
        Ok(amp * (Complex64::new(0.0, scale) * phase).exp())
    }
}

fn fmt_c(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.re == 0.0 {
        format!("{}i", z.im)
    } else {
        format!("{}{:+}i", z.re, z.im)
    }
}

impl fmt::Display for IntegrandDescriptor {
    /// One `key: value` line per item.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "perm: {}", self.perm)?;
        let kind = match self.kind {
            PhaseKind::Additive => "e(z)",
            PhaseKind::Frequency => "exp(i y z)",
        };
        writeln!(f, "phase-kind: {kind}")?;
        writeln!(f, "global-sign: {}", self.global_sign)?;
        if let Some(p) = &self.poly_phase {
            writeln!(f, "poly-phase: ({}) * ({})", fmt_c(p.coefficient), p.f)?;
        }
        for x in &self.factors {
            let form = x.exponent_form.as_ref().map(|l| format!(" = {l}")).unwrap_or_default();
            writeln!(
                f,
                "n[{}]: phase {}/n, exponent {}{form}, parity {}",
                x.alpha,
                fmt_c(x.phase),
                fmt_c(x.exponent),
                x.parity
            )?;
        }
        Ok(())
    }
}

/// `τ(wu)` in the coordinates `n`: phase `Σ 1/n_α` and the exponents and
/// parities of the character and measure.
pub fn transformed_integrand(w: &Permutation, lambda: &[Complex64], delta: &[u8]) -> Result<IntegrandDescriptor> {
    let r = w.rank();
    if delta.len() != r {
        return Err(Error::LengthMismatch {
            expected: r,
            got: delta.len(),
        });
    }
    let data = exponents(w);
    let inst = data.instantiate(lambda, delta)?;
    let factors = data
        .entries
        .iter()
        .zip(&inst.entries)
        .map(|(e, (alpha, t, eta))| Factor {
            alpha: *alpha,
            phase: Complex64::new(1.0, 0.0),
            exponent: *t,
            exponent_form: Some(e.total.clone()),
            parity: *eta,
        })
        .collect();
    Ok(IntegrandDescriptor {
        perm: w.clone(),
        kind: PhaseKind::Additive,
        factors,
        poly_phase: None,
        global_sign: inst.global_sign,
    })
}

/// `f = Σ_l u_{l,l+1}`, the superdiagonal of the forward map; entries that
/// are not free contribute zero.
pub fn superdiagonal_phase(w: &Permutation) -> RatFunc {
    let fm = forward_map(w);
    (1..w.rank())
        .filter_map(|l| fm.image(VarIndex::new(l, l + 1)).cloned())
        .fold(RatFunc::zero(), |acc, u| &acc + &u)
}

/// The kernel `∏ |n_l|^{ν_l−1} e^{iy(ζ_{d+1} f(n) + Σ ζ_l/n_l)}` with the
/// variables in canonical order.
pub fn bessel_kernel(w: &Permutation, nu: &[Complex64], zeta: &[Complex64]) -> Result<IntegrandDescriptor> {
    let vars = w.free_indices();
    let d = vars.len();
    if nu.len() != d {
        return Err(Error::LengthMismatch {
            expected: d,
            got: nu.len(),
        });
    }
    if zeta.len() != d + 1 {
        return Err(Error::LengthMismatch {
            expected: d + 1,
            got: zeta.len(),
        });
    }
    let factors = vars
        .iter()
        .zip(nu.iter().zip(zeta))
        .map(|(alpha, (n, z))| Factor {
            alpha: *alpha,
            phase: *z,
            exponent: n - 1.0,
            exponent_form: None,
            parity: 0,
        })
        .collect();
    Ok(IntegrandDescriptor {
        perm: w.clone(),
        kind: PhaseKind::Frequency,
        factors,
        poly_phase: Some(PolyPhase {
            coefficient: zeta[d],
            f: superdiagonal_phase(w),
        }),
        global_sign: 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    use crate::ratfunc::parse;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn longest_three_integrand() {
        let w = Permutation::longest(3);
        let d = transformed_integrand(&w, &[c(1.0), c(0.0), c(-1.0)], &[0, 0, 0]).unwrap();
        let t: Vec<f64> = d.factors.iter().map(|f| f.exponent.re).collect();
        assert_eq!(t, vec![0.0, 1.0, 0.0]);
        assert_eq!(d.variables(), w.free_indices());
        assert!(d.factors.iter().all(|f| f.phase == c(1.0)));
        assert!(transformed_integrand(&Permutation::identity(3), &[c(0.0); 3], &[0; 3])
            .unwrap()
            .is_empty());
        assert!(transformed_integrand(&w, &[c(0.0); 3], &[0; 2]).is_err());
    }

    #[test]
    fn kernel_phases() {
        let f = |s: &str| superdiagonal_phase(&Permutation::parse(s).unwrap());
        assert_eq!(f("2,3,1"), parse("-n[1,2]*n[1,3]").unwrap());
        assert_eq!(f("3,2,1"), parse("n[1,3]*(n[1,2]+n[2,3])/n[2,3] + n[2,3]").unwrap());
        assert_eq!(f("2,1"), parse("n[1,2]").unwrap());
        let k = bessel_kernel(
            &Permutation::longest(3),
            &[c(0.5); 3],
            &[c(1.0), c(-1.0), c(1.0), c(-1.0)],
        )
        .unwrap();
        assert_eq!(k.factors[1].phase, c(-1.0));
        assert_eq!(k.poly_phase.unwrap().coefficient, c(-1.0));
        assert!(bessel_kernel(&Permutation::longest(3), &[c(0.5); 2], &[c(1.0); 4]).is_err());
    }

    #[test]
    fn voronoi_elements_have_monomial_phase() {
        for r in [3, 4] {
            let images: Vec<usize> = (2..=r).chain([1]).collect();
            let w = Permutation::new(images).unwrap();
            for w in [w.clone(), w.inverse()] {
                let f = superdiagonal_phase(&w);
                let (coeff, num, den) = f.as_signed_monomial().unwrap_or_else(|| panic!("{w}: {f}"));
                assert_eq!(coeff.abs(), crate::ratfunc::rat(1, 1));
                assert!(den.is_one());
                assert_eq!(num.degree() as usize, r - 1, "{w}: {f}");
            }
        }
    }

    #[test]
    fn evaluation() {
        let w = Permutation::parse("2,1").unwrap();
        let mu = c(0.75);
        let d = transformed_integrand(&w, &[mu, -mu], &[1, 0]).unwrap();
        let n = BTreeMap::from([(VarIndex::new(1, 2), -0.5)]);
        // sgn(n)^1 |n|^{2μ−1} e(1/n) at n = −1/2
        let want = -f64::from(d.global_sign) * Complex64::new(0.0, 2.0 * PI * -2.0).exp() * 0.5f64.sqrt();
        assert!((d.eval(&n, 0.0).unwrap() - want).norm() < 1e-14);
        assert!(d.eval(&BTreeMap::new(), 0.0).is_err());
    }
}
