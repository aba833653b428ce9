//! The inverse of `R_w` as ratios of determinants of blocks of `wu`.
//!
//! Columns are processed from right to left and each column from top to
//! bottom. A variable with no free variable above it in its column is
//! `det κ · det K / ∏ (K_det ∖ {n})`; otherwise the lowest free variable
//! above it supplies a second block whose determinant cancels the common
//! part of `K_det`.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::forward::ForwardMap;
use super::ksystem::KShape;
use crate::error::{Error, Result};
use crate::ratfunc::{RatFunc, Var};
use crate::weyl::{CellEntry, MatrixPattern, Permutation, VarIndex};

#[derive(Debug, Clone)]
struct Step {
    alpha: VarIndex,
    shape: KShape,
    pivot: Option<KShape>,
    divisors: Vec<VarIndex>,
}

fn plan(w: &Permutation) -> Vec<Step> {
    let mut free = w.free_indices();
    free.sort_by_key(|v| (std::cmp::Reverse(v.b()), w.preimage(v.a())));
    free.iter()
        .map(|&alpha| {
            let shape = KShape::new(w, alpha).expect("free variable");
            let row = w.preimage(alpha.a());
            let above = free
                .iter()
                .copied()
                .filter(|v| v.b() == alpha.b() && w.preimage(v.a()) < row)
                .max_by_key(|v| w.preimage(v.a()));
            let (pivot, divisors) = match above {
                None => {
                    let d = shape.k_det_set.iter().copied().filter(|&v| v != alpha).collect();
                    (None, d)
                }
                Some(x1) => {
                    let p = KShape::new(w, x1).expect("free variable");
                    let d = shape
                        .k_det_set
                        .iter()
                        .copied()
                        .filter(|&v| v != alpha && !p.k_det_set.contains(&v))
                        .collect();
                    (Some(p), d)
                }
            };
            Step {
                alpha,
                shape,
                pivot,
                divisors,
            }
        })
        .collect()
}

trait Scalar: Clone {
    fn integer(k: i32) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn over(&self, o: &Self) -> Result<Self>;
}

impl Scalar for RatFunc {
    fn integer(k: i32) -> Self {
        RatFunc::integer(k.into())
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn over(&self, o: &Self) -> Result<Self> {
        self.checked_div(o)
    }
}

impl Scalar for BigRational {
    fn integer(k: i32) -> Self {
        BigRational::from_integer(k.into())
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn over(&self, o: &Self) -> Result<Self> {
        if o.is_zero() {
            Err(Error::Pole)
        } else {
            Ok(self / o)
        }
    }
}

impl Scalar for f64 {
    fn integer(k: i32) -> Self {
        k.into()
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn over(&self, o: &Self) -> Result<Self> {
        if *o == 0.0 {
            Err(Error::Pole)
        } else {
            Ok(self / o)
        }
    }
}

fn run<T: Scalar>(steps: &[Step], det: impl Fn(&KShape) -> Result<T>) -> Result<BTreeMap<VarIndex, T>> {
    let mut out: BTreeMap<VarIndex, T> = BTreeMap::new();
    for s in steps {
        let mut value = match &s.pivot {
            None => det(&s.shape)?.times(&T::integer(s.shape.kappa_det)),
            Some(p) => det(&s.shape)?
                .over(&det(p)?)?
                .times(&T::integer(s.shape.kappa_det * p.kappa_det)),
        };
        for d in &s.divisors {
            value = value.over(&out[d])?;
        }
        out.insert(s.alpha, value);
    }
    Ok(out)
}

/// Each `n_α` as a rational function of the `u[a,b]`.
#[derive(Debug, Clone)]
pub struct InverseMap {
    perm: Permutation,
    exprs: BTreeMap<VarIndex, RatFunc>,
}

impl InverseMap {
    pub fn permutation(&self) -> &Permutation {
        &self.perm
    }

    pub fn get(&self, alpha: VarIndex) -> Option<&RatFunc> {
        self.exprs.get(&alpha)
    }

    pub fn iter(&self) -> impl Iterator<Item = (VarIndex, &RatFunc)> + '_ {
        self.exprs.iter().map(|(k, v)| (*k, v))
    }

    pub fn len(&self) -> usize {
        self.exprs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exprs.is_empty()
    }

    /// Substitutes the forward images and returns every `α` whose composite
    /// is not `n_α`, with the composite.
    pub fn round_trip_failures(&self, fm: &ForwardMap) -> Result<Vec<(VarIndex, RatFunc)>> {
        let sub = fm.u_substitution();
        let mut bad = Vec::new();
        for (&alpha, e) in &self.exprs {
            let back = e.substitute(&sub)?;
            if back != RatFunc::var(Var::N(alpha)) {
                bad.push((alpha, back));
            }
        }
        Ok(bad)
    }
}

pub fn inverse_map(w: &Permutation) -> Result<InverseMap> {
    let wu = super::forward::wu_symbolic(w);
    let exprs = run(&plan(w), |s| s.block(&wu).determinant())?;
    Ok(InverseMap { perm: w.clone(), exprs })
}

fn numeric_block<T: Clone>(
    pattern: &MatrixPattern,
    shape: &KShape,
    zero: &T,
    one: &T,
    u: &impl Fn(VarIndex) -> Result<T>,
) -> Result<Vec<Vec<T>>> {
    shape
        .rows
        .iter()
        .map(|&i| {
            shape
                .k_col
                .iter()
                .map(|&j| match pattern.get(i, j) {
                    CellEntry::Zero => Ok(zero.clone()),
                    CellEntry::One(_) => Ok(one.clone()),
                    CellEntry::Var(v) => u(v),
                })
                .collect()
        })
        .collect()
}

fn det_rational(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut det = BigRational::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
            return BigRational::zero();
        };
        if p != k {
            m.swap(p, k);
            det = -det;
        }
        let pivot = m[k][k].clone();
        det *= &pivot;
        for i in k + 1..n {
            if m[i][k].is_zero() {
                continue;
            }
            let factor = &m[i][k] / &pivot;
            for j in k..n {
                let t = &factor * &m[k][j];
                m[i][j] -= t;
            }
        }
    }
    det
}

fn det_f64(mut m: Vec<Vec<f64>>) -> f64 {
    let n = m.len();
    let mut det = 1.0;
    for k in 0..n {
        let p = (k..n)
            .max_by(|&a, &b| m[a][k].abs().total_cmp(&m[b][k].abs()))
            .expect("nonempty range");
        if m[p][k] == 0.0 {
            return 0.0;
        }
        if p != k {
            m.swap(p, k);
            det = -det;
        }
        det *= m[k][k];
        for i in k + 1..n {
            let factor = m[i][k] / m[k][k];
            for j in k..n {
                m[i][j] -= factor * m[k][j];
            }
        }
    }
    det
}

/// Recovers the exact point `n` from exact image coordinates `u`.
pub fn invert_point(w: &Permutation, u: &BTreeMap<VarIndex, BigRational>) -> Result<BTreeMap<VarIndex, BigRational>> {
    let pattern = w.pattern();
    let lookup = |v: VarIndex| {
        u.get(&v)
            .cloned()
            .ok_or_else(|| Error::UnassignedVariable(Var::U(v).to_string()))
    };
    let (zero, one) = (BigRational::zero(), BigRational::one());
    run(&plan(w), |s| {
        Ok(det_rational(numeric_block(&pattern, s, &zero, &one, &lookup)?))
    })
}

/// Floating-point variant of [`invert_point`].
pub fn invert_point_f64(w: &Permutation, u: &BTreeMap<VarIndex, f64>) -> Result<BTreeMap<VarIndex, f64>> {
    let pattern = w.pattern();
    let lookup = |v: VarIndex| {
        u.get(&v)
            .copied()
            .ok_or_else(|| Error::UnassignedVariable(Var::U(v).to_string()))
    };
    run(&plan(w), |s| {
        Ok(det_f64(numeric_block(&pattern, s, &0.0, &1.0, &lookup)?))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::biratmap::forward_map;
    use crate::ratfunc::{parse, rat};

    fn v(a: usize, b: usize) -> VarIndex {
        VarIndex::new(a, b)
    }

    #[test]
    fn longest_three() {
        let w = Permutation::parse("3,2,1").unwrap();
        let inv = inverse_map(&w).unwrap();
        assert_eq!(inv.get(v(2, 3)).unwrap(), &parse("u[2,3]").unwrap());
        assert_eq!(inv.get(v(1, 3)).unwrap(), &parse("u[1,3]/u[2,3]").unwrap());
        assert_eq!(
            inv.get(v(1, 2)).unwrap(),
            &parse("u[1,2]*u[2,3]^2/u[1,3] - u[2,3]").unwrap()
        );
        assert!(inv.round_trip_failures(&forward_map(&w)).unwrap().is_empty());

        let u: BTreeMap<_, _> = [(v(1, 2), rat(21, 5)), (v(1, 3), rat(15, 1)), (v(2, 3), rat(5, 1))].into();
        let n = invert_point(&w, &u).unwrap();
        assert_eq!(n[&v(1, 2)], rat(2, 1));
        assert_eq!(n[&v(1, 3)], rat(3, 1));
        assert_eq!(n[&v(2, 3)], rat(5, 1));
        let uf: BTreeMap<_, _> = [(v(1, 2), 4.2), (v(1, 3), 15.0), (v(2, 3), 5.0)].into();
        let nf = invert_point_f64(&w, &uf).unwrap();
        assert!((nf[&v(1, 2)] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn rank_two() {
        let w = Permutation::parse("2,1").unwrap();
        let inv = inverse_map(&w).unwrap();
        assert_eq!(inv.get(v(1, 2)).unwrap(), &RatFunc::u(1, 2));
    }

    #[test]
    fn symbolic_round_trip_rank_four() {
        for w in Permutation::all(4) {
            let inv = inverse_map(&w).unwrap();
            assert!(inv.round_trip_failures(&forward_map(&w)).unwrap().is_empty(), "{w}");
        }
    }

    #[test]
    fn poles_and_missing_values() {
        let w = Permutation::parse("3,2,1").unwrap();
        let u: BTreeMap<_, _> = [(v(1, 2), rat(1, 1)), (v(1, 3), rat(1, 1)), (v(2, 3), rat(0, 1))].into();
        assert_eq!(invert_point(&w, &u), Err(Error::Pole));
        let u: BTreeMap<_, _> = [(v(1, 2), rat(1, 1))].into();
        assert!(matches!(invert_point(&w, &u), Err(Error::UnassignedVariable(_))));
    }
}
