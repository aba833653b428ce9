//! End-to-end checks of the change of variables: the factorization of `τ(wu)`
//! at exact points, and `∫ G(u) du = ∫ G(R(n)) ∏|n_α|^{b−a−1} dn` by
//! nested quadrature.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::bump::BumpSpec;
use super::integrand::transformed_integrand;
use super::quad::{integrate, Estimate, QuadratureParams};
use crate::biratmap::{domain_bounds, exponents, forward_map, udl_decompose, LinearForm};
use crate::error::{Error, Result};
use crate::ratfunc::{RatFunc, Var};
use crate::weyl::{Permutation, VarIndex};

/// Outcome of comparing the two factorizations of `τ(wu)` at sample points.
#[derive(Debug, Clone, PartialEq)]
pub struct TauReport {
    pub points: usize,
    pub failures: Vec<String>,
    /// Largest relative gap between the two numeric evaluations at `λ`.
    pub max_numeric_error: f64,
}

impl TauReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn random_point(vars: &[VarIndex], rng: &mut ChaCha8Rng) -> BTreeMap<VarIndex, BigRational> {
    vars.iter()
        .map(|&v| {
            let mut p: i64 = 0;
            while p == 0 {
                p = rng.gen_range(-60..=60);
            }
            (v, BigRational::new(p.into(), rng.gen_range(1..=20i64).into()))
        })
        .collect()
}

fn pow(x: &BigRational, e: &BigInt) -> BigRational {
    let k = e.to_i32().expect("small exponent");
    if k >= 0 {
        num_traits::pow(x.clone(), k as usize)
    } else {
        num_traits::pow(x.recip(), (-k) as usize)
    }
}

/// The coefficient vectors of a family of linear forms, one per component:
/// `λ_1, …, λ_r` and the constant.
fn component(f: &LinearForm, j: usize) -> BigRational {
    if j < f.coeffs.len() {
        f.coeffs[j].clone()
    } else {
        f.constant.clone()
    }
}

/// Checks, at one exact point, that
/// `e(Σ x_{i,i+1}) ∏ |b_{i,i}|^{ρ_i−λ_i} sgn(b_{i,i})^{δ_i}` equals
/// `± e(Σ 1/n_α) ∏ |n_α|^{char_α} sgn(n_α)^{η_α}` identically in `λ` and `δ`.
///
/// Both sides are products of powers, so the identity splits into one exact
/// rational equation per coordinate of `λ`, one for the constant exponents
/// (raised to a common denominator), and one sign equation per `δ_i`.
fn exact_factorization(
    w: &Permutation,
    superdiag: &[BigRational],
    diag: &[BigRational],
    n: &BTreeMap<VarIndex, BigRational>,
) -> Vec<String> {
    let r = w.rank();
    let data = exponents(w);
    let mut out = Vec::new();
    let lhs_phase: BigRational = superdiag.iter().sum();
    let rhs_phase: BigRational = n.values().map(|x| x.recip()).sum();
    if lhs_phase != rhs_phase {
        out.push(format!("phase {lhs_phase} != {rhs_phase}"));
    }
    for j in 0..=r {
        let lcm = data
            .diag
            .iter()
            .map(|f| component(f, j))
            .chain(data.entries.iter().map(|e| component(&e.character, j)))
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let scaled = |c: BigRational| (c * BigRational::from_integer(lcm.clone())).to_integer();
        let lhs = data.diag.iter().zip(diag).fold(BigRational::one(), |acc, (f, b)| {
            acc * pow(&b.abs(), &scaled(component(f, j)))
        });
        let rhs = data.entries.iter().fold(BigRational::one(), |acc, e| {
            acc * pow(&n[&e.alpha].abs(), &scaled(component(&e.character, j)))
        });
        if lhs != rhs {
            let what = if j < r {
                format!("λ{}", j + 1)
            } else {
                "constant".into()
            };
            out.push(format!("{what} part: {lhs} != {rhs}"));
        }
    }
    for i in 0..r {
        let lhs = diag[i].is_negative();
        let rhs = data
            .entries
            .iter()
            .filter(|e| e.sign.coeffs[i])
            .fold(data.global_sign.coeffs[i], |acc, e| acc ^ n[&e.alpha].is_negative());
        if lhs != rhs {
            out.push(format!("sign of b[{0},{0}]", i + 1));
        }
    }
    out
}

/// Compares the two factorizations of `τ(wu)` exactly at `points` seeded
/// random rational points, and numerically at the given `λ` and `δ`.
pub fn tau_factorization_check(
    w: &Permutation,
    lambda: &[Complex64],
    delta: &[u8],
    points: usize,
    seed: u64,
) -> Result<TauReport> {
    let r = w.rank();
    let fm = forward_map(w);
    let udl = udl_decompose(&fm)?;
    let integrand = transformed_integrand(w, lambda, delta)?;
    let data = exponents(w);
    let vars = w.free_indices();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    let mut max_numeric_error: f64 = 0.0;
    let mut done = 0;
    let mut attempts = 0;
    while done < points {
        attempts += 1;
        if attempts > 100 * points.max(1) {
            return Err(Error::InvalidParameter("no regular sample points found".into()));
        }
        let n = random_point(&vars, &mut rng);
        let lookup = |v: Var| n.get(&v.index()).cloned();
        let eval = |f: &RatFunc| f.eval_with(&lookup);
        let (Ok(x), Ok(b)) = (
            udl.superdiag.iter().map(eval).collect::<Result<Vec<_>>>(),
            udl.diag.iter().map(eval).collect::<Result<Vec<_>>>(),
        ) else {
            continue;
        };
        if b.iter().any(Zero::is_zero) {
            continue;
        }
        done += 1;
        let bad = exact_factorization(w, &x, &b, &n);
        if !bad.is_empty() && failures.len() < 3 {
            failures.push(format!("at {n:?}: {}", bad.join(", ")));
        }

        // τ(wu) directly, against the descriptor with the measure removed
        let f = |q: &BigRational| q.to_f64().expect("finite");
        let phase: f64 = x.iter().map(f).sum();
        let mut lhs = Complex64::new(0.0, 2.0 * PI * phase).exp();
        for i in 0..r {
            let t = data.diag[i].eval(lambda)?;
            lhs *= Complex64::new(f(&b[i]).abs(), 0.0).powc(t);
            if delta[i] & 1 == 1 && b[i].is_negative() {
                lhs = -lhs;
            }
        }
        let nf: BTreeMap<VarIndex, f64> = n.iter().map(|(k, v)| (*k, f(v))).collect();
        let measure: f64 = data
            .entries
            .iter()
            .map(|e| nf[&e.alpha].abs().powi(e.measure as i32))
            .product();
        let rhs = integrand.eval(&nf, 0.0)? / measure;
        max_numeric_error = max_numeric_error.max((lhs - rhs).norm() / lhs.norm());
    }
    Ok(TauReport {
        points: done,
        failures,
        max_numeric_error,
    })
}

/// A rational function compiled for fast floating-point evaluation.
struct Compiled {
    num: Vec<(f64, Vec<(usize, i32)>)>,
    den: Vec<(f64, Vec<(usize, i32)>)>,
}

impl Compiled {
    fn new(f: &RatFunc, slots: &[VarIndex]) -> Self {
        let part = |p: &crate::ratfunc::Poly| {
            p.terms()
                .map(|(m, c)| {
                    let factors = m
                        .factors()
                        .iter()
                        .map(|(v, e)| {
                            (
                                slots.iter().position(|s| *s == v.index()).expect("known variable"),
                                *e as i32,
                            )
                        })
                        .collect();
                    (c.to_f64().expect("finite"), factors)
                })
                .collect()
        };
        Self {
            num: part(f.num()),
            den: part(f.den()),
        }
    }

    fn eval(&self, x: &[f64]) -> f64 {
        let part = |p: &[(f64, Vec<(usize, i32)>)]| {
            p.iter()
                .map(|(c, fs)| fs.iter().fold(*c, |acc, (i, e)| acc * x[*i].powi(*e)))
                .sum::<f64>()
        };
        part(&self.num) / part(&self.den)
    }
}

/// `∫ f` over nested intervals: the outermost variable is the last slot, and
/// the interval of slot `j` may depend on slots `j+1..`. Each interval is
/// split at zero.
fn nested(
    f: &dyn Fn(&[f64]) -> f64,
    bound: &dyn Fn(usize, &[f64]) -> f64,
    x: &[f64],
    level: usize,
    q: &QuadratureParams,
) -> Estimate {
    if level == 0 {
        return Estimate::exact(Complex64::new(f(x), 0.0));
    }
    let j = level - 1;
    let h = bound(j, x);
    let breaks = [-h, -0.5 * h, 0.0, 0.5 * h, h];
    let inner = |t: f64| {
        let mut y = x.to_vec();
        y[j] = t;
        nested(f, bound, &y, j, q).value
    };
    integrate(&inner, &breaks, q.abs_tol, q.rel_tol, q.max_subdivisions)
}

/// `(∫_{[−M,M]^d} G(u) du, ∫ G(R(n)) ∏|n_α|^{b−a−1} dn)`, the second over the
/// preimage of the box truncated by the domain bounds. `G` receives the
/// coordinates `u_α` in canonical order.
pub fn change_of_variables(
    w: &Permutation,
    g: &(dyn Fn(&[f64]) -> f64 + Sync),
    m: &BigRational,
    q: &QuadratureParams,
) -> Result<(Estimate, Estimate)> {
    q.validate()?;
    let fm = forward_map(w);
    let bounds = domain_bounds(&fm, m)?;
    let canonical = w.free_indices();
    let d = canonical.len();
    let mf = m.to_f64().expect("finite");

    let x = vec![0.0; d];
    let lh = nested(g, &|_, _| mf, &x, d, q);

    // slot j holds β_{j+1}
    let order = bounds.order();
    let images: Vec<Compiled> = canonical
        .iter()
        .map(|a| Compiled::new(fm.image(*a).expect("free variable"), &order))
        .collect();
    let h: Vec<Compiled> = bounds.entries.iter().map(|e| Compiled::new(&e.h, &order)).collect();
    let measure: Vec<i32> = order.iter().map(|a| (a.b() - a.a() - 1) as i32).collect();
    let transformed = |n: &[f64]| {
        let u: Vec<f64> = images.iter().map(|c| c.eval(n)).collect();
        let jac: f64 = n.iter().zip(&measure).map(|(v, e)| v.abs().powi(*e)).product();
        g(&u) * jac
    };
    let bound = |j: usize, n: &[f64]| {
        let abs: Vec<f64> = n.iter().map(|v| v.abs()).collect();
        h[j].eval(&abs)
    };
    let x = vec![0.0; d];
    let rh = nested(&transformed, &bound, &x, d, q);
    Ok((lh, rh))
}

/// `∏ φ(2u_α/M)` for the default bump, supported in `[−M, M]^d` with
/// integral `(3M/2)^d`.
pub fn bump_product(m: f64) -> impl Fn(&[f64]) -> f64 + Sync {
    let b = BumpSpec::default();
    move |u: &[f64]| u.iter().map(|x| b.eval(2.0 * x / m)).product()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gl3Report {
    pub lh: Estimate,
    pub rh: Estimate,
    pub relative_error: f64,
    pub tau: TauReport,
}

impl Gl3Report {
    pub fn passed(&self, tol: f64) -> bool {
        self.tau.passed() && self.relative_error <= tol
    }
}

/// Both checks for the longest element of GL(3) with `M = 1`, a product of
/// bumps as `G`, `δ = 0` and 100 sample points.
pub fn gl3_change_of_variables_check(lambda: &[Complex64], q: &QuadratureParams, seed: u64) -> Result<Gl3Report> {
    let w = Permutation::longest(3);
    let tau = tau_factorization_check(&w, lambda, &[0; 3], 100, seed)?;
    let (lh, rh) = change_of_variables(&w, &bump_product(1.0), &BigRational::one(), q)?;
    let relative_error = if lh.value.norm() == 0.0 {
        rh.value.norm()
    } else {
        (lh.value - rh.value).norm() / lh.value.norm()
    };
    Ok(Gl3Report {
        lh,
        rh,
        relative_error,
        tau,
    })
}

/// Tolerances suited to three nested levels of adaptive quadrature.
pub fn gl3_default_params() -> QuadratureParams {
    QuadratureParams {
        abs_tol: 1e-10,
        rel_tol: 1e-7,
        max_subdivisions: 200,
        ..QuadratureParams::default()
    }
}


#[cfg(test)]
mod longest {
    use super::*;

    #[test]
    fn longest_element_end_to_end() {
        let lambda = [
            Complex64::new(0.4, 0.0),
            Complex64::new(0.0, 0.5),
            Complex64::new(-0.4, 0.0),
        ];
        let t = std::time::Instant::now();
        let rep = gl3_change_of_variables_check(&lambda, &gl3_default_params(), 7).unwrap();
        println!("{rep:?} {:?}", t.elapsed());
        assert_eq!(rep.tau.points, 100);
        assert!(rep.passed(1e-3), "{rep:?}");
        assert!((rep.lh.value.re - 3.375).abs() < 1e-6);
    }
}
