//! Bounds on the preimage of the box `[−M, M]^d`.
//!
//! In `⊐` order each `u_{β_j}` depends only on `n_{β_j}, …, n_{β_d}` and is
//! affine in `n_{β_j}`; solving `|u_{β_j}| ≤ M` for `n_{β_j}` with the other
//! coordinates replaced by their absolute values gives `h_j`.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Signed;

use super::forward::ForwardMap;
use crate::error::{Error, Result};
use crate::ratfunc::{RatFunc, Var};
use crate::weyl::VarIndex;

#[derive(Debug, Clone)]
pub struct BoundEntry {
    pub beta: VarIndex,
    /// `|D(β_j)| − 1`.
    pub t: usize,
    /// `∂u_{β_j}/∂n_{β_j}`.
    pub derivative: RatFunc,
    pub f: RatFunc,
    pub h: RatFunc,
}

#[derive(Debug, Clone)]
pub struct DomainBounds {
    pub m: BigRational,
    /// One entry per variable, in `⊐` order.
    pub entries: Vec<BoundEntry>,
}

impl DomainBounds {
    pub fn order(&self) -> Vec<VarIndex> {
        self.entries.iter().map(|e| e.beta).collect()
    }

    /// Every violated structural property, described in one line each.
    pub fn structural_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let d = self.entries.len();
        if let Some(last) = self.entries.last() {
            if last.h != RatFunc::rational(&self.m) {
                out.push(format!("h_{d} = {} is not M", last.h));
            }
        }
        for (j, e) in self.entries.iter().enumerate() {
            let later: Vec<Var> = self.entries[j + 1..].iter().map(|x| Var::N(x.beta)).collect();
            for v in e.h.variables() {
                if !later.contains(&v) {
                    out.push(format!("h_{} = {} involves {v}", j + 1, e.h));
                }
            }
            for x in &self.entries[..=j] {
                if !e.h.derivative(Var::N(x.beta)).is_zero() {
                    out.push(format!("h_{} depends on n[{}]", j + 1, x.beta));
                }
            }
            if e.h.num().terms().any(|(m, _)| !m.is_multilinear()) {
                out.push(format!("numerator of h_{} = {} is not multilinear", j + 1, e.h));
            }
            match e.h.den().as_term() {
                Some((m, _)) if m.is_multilinear() => {}
                _ => out.push(format!(
                    "denominator of h_{} = {} is not a multilinear monomial",
                    j + 1,
                    e.h
                )),
            }
        }
        out
    }

    /// The first `j` (1-based) with `|n_{β_j}| > h_j(|n_{β_{j+1}}|, …)`,
    /// allowing a relative slack `tol`.
    pub fn first_violation(&self, n: &BTreeMap<VarIndex, f64>, tol: f64) -> Option<usize> {
        let abs = |v: Var| n.get(&v.index()).map_or(f64::NAN, |x| x.abs());
        self.entries.iter().enumerate().find_map(|(j, e)| {
            let bound = e.h.eval_f64(&abs);
            let x = n[&e.beta].abs();
            (x > bound * (1.0 + tol)).then_some(j + 1)
        })
    }
}

pub fn domain_bounds(fm: &ForwardMap, m: &BigRational) -> Result<DomainBounds> {
    if !m.is_positive() {
        return Err(Error::InvalidParameter(format!("M must be positive, got {m}")));
    }
    let w = fm.permutation();
    let mm = RatFunc::rational(m);
    let entries = w
        .free_variables()
        .square
        .into_iter()
        .map(|beta| {
            let img = fm.entry(beta).expect("free variable");
            let u = &img.value;
            let n = RatFunc::var(Var::N(beta));
            let derivative = u.derivative(Var::N(beta));
            let sign = RatFunc::integer(if img.t.is_multiple_of(2) { 1 } else { -1 });
            let f = &sign * &(u - &(&derivative * &n));
            let h = (&sign * &(&mm + &f)).checked_div(&derivative)?;
            Ok(BoundEntry {
                beta,
                t: img.t,
                derivative,
                f,
                h,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DomainBounds { m: m.clone(), entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::biratmap::forward_map;
    use crate::ratfunc::{parse, rat};
    use crate::weyl::Permutation;

    fn perm(s: &str) -> Permutation {
        Permutation::parse(s).unwrap()
    }

    #[test]
    fn longest_three() {
        let b = domain_bounds(&forward_map(&perm("3,2,1")), &rat(1, 1)).unwrap();
        let order: Vec<String> = b.order().iter().map(ToString::to_string).collect();
        assert_eq!(order, ["1,2", "1,3", "2,3"]);
        assert_eq!(b.entries[0].f, parse("n[1,3]").unwrap());
        assert_eq!(b.entries[0].h, parse("n[2,3]*(1+n[1,3])/n[1,3]").unwrap());
        assert_eq!(b.entries[1].h, parse("1/n[2,3]").unwrap());
        assert_eq!(b.entries[2].h, RatFunc::one());
        assert!(b.structural_violations().is_empty());
    }

    #[test]
    fn cycle_and_rank_two() {
        let b = domain_bounds(&forward_map(&perm("2,3,1")), &rat(3, 2)).unwrap();
        assert_eq!(b.entries[0].h, parse("3/(2*n[1,3])").unwrap());
        assert!(b.structural_violations().is_empty());
        let b = domain_bounds(&forward_map(&perm("2,1")), &rat(7, 3)).unwrap();
        assert_eq!(b.entries[0].h, RatFunc::rational(&rat(7, 3)));
        assert!(domain_bounds(&forward_map(&perm("2,1")), &rat(0, 1)).is_err());
    }

    #[test]
    fn structure_rank_four() {
        for w in Permutation::all(4) {
            let b = domain_bounds(&forward_map(&w), &rat(1, 1)).unwrap();
            assert!(
                b.structural_violations().is_empty(),
                "{w}: {:?}",
                b.structural_violations()
            );
        }
    }
}
