//! Quotients of polynomials.

use std::collections::BTreeMap;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::forward_owned;
use super::{Assignment, Monomial, Poly, Var};
use crate::error::{Error, Result};

/// `num / den` with `den` nonzero. Equality is decided by cross-multiplication.
#[derive(Clone)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    /// Builds and normalizes `num / den`.
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDivisor);
        }
        Ok(Self::normalized(num, den))
    }

    pub fn zero() -> Self {
        Self::from_poly(Poly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(Poly::one())
    }

    pub fn from_poly(p: Poly) -> Self {
        Self {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn integer(c: i64) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn rational(q: &BigRational) -> Self {
        Self::normalized(Poly::constant(q.numer().clone()), Poly::constant(q.denom().clone()))
    }

    pub fn var(v: Var) -> Self {
        Self::from_poly(Poly::var(v))
    }

    pub fn n(a: usize, b: usize) -> Self {
        Self::var(Var::n(a, b))
    }

    pub fn u(a: usize, b: usize) -> Self {
        Self::var(Var::u(a, b))
    }

    /// `c · m` for a monomial `m`.
    pub fn monomial(m: Monomial, c: impl Into<BigInt>) -> Self {
        Self::from_poly(Poly::term(m, c))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn into_parts(self) -> (Poly, Poly) {
        (self.num, self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.as_constant().is_some()
    }

    /// Whether the denominator is a single term.
    pub fn is_laurent(&self) -> bool {
        self.den.as_term().is_some()
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        let n = self.num.as_constant()?;
        let d = self.den.as_constant()?;
        Some(BigRational::new(n, d))
    }

    /// The signed single term `c · m / (c' · m')`, if both parts are single terms.
    pub fn as_signed_monomial(&self) -> Option<(BigRational, Monomial, Monomial)> {
        let (nm, nc) = self.num.as_term()?;
        let (dm, dc) = self.den.as_term()?;
        Some((BigRational::new(nc.clone(), dc.clone()), nm.clone(), dm.clone()))
    }

    fn normalized(mut num: Poly, mut den: Poly) -> Self {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return Self::zero();
        }
        // common monomial factor
        let g = num.monomial_content().gcd(&den.monomial_content());
        if !g.is_one() {
            num = num.div_monomial(&g);
            den = den.div_monomial(&g);
        }
        // exact polynomial quotient in either direction
        if den.as_term().is_none() {
            if num.len() >= den.len() {
                if let Some(q) = num.div_exact(&den) {
                    num = q;
                    den = Poly::one();
                }
            }
            if den.len() > 1 && den.len() >= num.len() && num.as_term().is_none() {
                if let Some(q) = den.div_exact(&num) {
                    num = Poly::one();
                    den = q;
                }
            }
        }
        let c = num.content().gcd(&den.content());
        if !c.is_one() {
            num = num.div_integer(&c);
            den = den.div_integer(&c);
        }
        if den.leading_negative() {
            num = -num;
            den = -den;
        }
        Self { num, den }
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroDivisor);
        }
        Ok(Self::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, rhs: &RatFunc) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::ZeroDivisor);
        }
        Ok(Self::normalized(&self.num * &rhs.den, &self.den * &rhs.num))
    }

    pub fn pow(&self, k: i32) -> Result<Self> {
        let base = if k < 0 { self.recip()? } else { self.clone() };
        let e = k.unsigned_abs();
        Ok(Self {
            num: base.num.pow(e),
            den: base.den.pow(e),
        })
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::normalized(self.num.scale(c.numer()), self.den.scale(c.denom()))
    }

    pub fn derivative(&self, v: Var) -> Self {
        let dn = self.num.derivative(v);
        if self.den.as_constant().is_some() {
            return Self::normalized(dn, self.den.clone());
        }
        let dd = self.den.derivative(v);
        if dd.is_zero() {
            return Self::normalized(dn, self.den.clone());
        }
        if let Some((m, c)) = self.den.as_term() {
            // (p/(c m))' = (p' m − p ∂m) / (c m²); divide through by the variable
            let e = m.exponent(v);
            let x = Monomial::var(v);
            let num = &dn.mul_term(&x, &BigInt::one()) - &self.num.scale(&BigInt::from(e));
            let den = Poly::term(m.mul(&x), c.clone());
            return Self::normalized(num, den);
        }
        let num = &(&dn * &self.den) - &(&self.num * &dd);
        Self::normalized(num, &self.den * &self.den)
    }

    pub fn eval(&self, point: &Assignment) -> Result<BigRational> {
        self.eval_with(&point.lookup())
    }

    pub fn eval_with(&self, value: &impl Fn(Var) -> Option<BigRational>) -> Result<BigRational> {
        let d = self.den.eval_rational(value)?;
        if d.is_zero() {
            return Err(Error::Pole);
        }
        Ok(self.num.eval_rational(value)? / d)
    }

    pub fn eval_f64(&self, value: &impl Fn(Var) -> f64) -> f64 {
        self.num.eval_f64(value) / self.den.eval_f64(value)
    }

    pub fn eval_complex(&self, value: &impl Fn(Var) -> Complex64) -> Complex64 {
        self.num.eval_complex(value) / self.den.eval_complex(value)
    }

    pub fn variables(&self) -> std::collections::BTreeSet<Var> {
        let mut v = self.num.variables();
        v.extend(self.den.variables());
        v
    }

    pub fn rename(&self, f: &impl Fn(Var) -> Var) -> Self {
        Self::normalized(self.num.rename(f), self.den.rename(f))
    }

    /// Replaces each variable `v` by `sub(v)` (or leaves it when `None`).
    pub fn substitute(&self, sub: &impl Fn(Var) -> Option<RatFunc>) -> Result<Self> {
        let mut cache: BTreeMap<Var, RatFunc> = BTreeMap::new();
        let n = substitute_poly(&self.num, sub, &mut cache);
        let d = substitute_poly(&self.den, sub, &mut cache);
        n.checked_div(&d)
    }
}

fn substitute_poly(p: &Poly, sub: &impl Fn(Var) -> Option<RatFunc>, cache: &mut BTreeMap<Var, RatFunc>) -> RatFunc {
    // group terms over a common denominator built from monomial powers
    let mut num = Poly::zero();
    let mut den = Poly::one();
    for (m, c) in p.terms() {
        let mut tn = Poly::constant(c.clone());
        let mut td = Poly::one();
        for &(v, e) in m.factors() {
            let r = cache
                .entry(v)
                .or_insert_with(|| sub(v).unwrap_or_else(|| RatFunc::var(v)))
                .clone();
            tn = &tn * &r.num.pow(e);
            td = &td * &r.den.pow(e);
        }
        if td == den {
            num += &tn;
        } else if let Some(q) = den.div_exact(&td) {
            num += &(&tn * &q);
        } else if let Some(q) = td.div_exact(&den) {
            num = &(&num * &q) + &tn;
            den = td;
        } else {
            num = &(&num * &td) + &(&tn * &den);
            den = &den * &td;
        }
    }
    RatFunc::normalized(num, den)
}

fn add_impl(x: &RatFunc, y: &RatFunc, negate: bool) -> RatFunc {
    let yn = if negate { -&y.num } else { y.num.clone() };
    if x.den == y.den {
        return RatFunc::normalized(&x.num + &yn, x.den.clone());
    }
    if let (Some((xm, xc)), Some((ym, yc))) = (x.den.as_term(), y.den.as_term()) {
        let lm = xm.lcm(ym);
        let lc = xc.lcm(yc);
        let fx = (lm.div(xm).unwrap(), &lc / xc);
        let fy = (lm.div(ym).unwrap(), &lc / yc);
        let num = &x.num.mul_term(&fx.0, &fx.1) + &yn.mul_term(&fy.0, &fy.1);
        return RatFunc::normalized(num, Poly::term(lm, lc));
    }
    let num = &(&x.num * &y.den) + &(&yn * &x.den);
    RatFunc::normalized(num, &x.den * &y.den)
}

impl Add<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        add_impl(self, rhs, false)
    }
}

impl Sub<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        add_impl(self, rhs, true)
    }
}

impl Mul<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        RatFunc::normalized(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

forward_owned!(Add, add, RatFunc);
forward_owned!(Sub, sub, RatFunc);
forward_owned!(Mul, mul, RatFunc);

impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        if self.den == other.den {
            return self.num == other.num;
        }
        &self.num * &other.den == &other.num * &self.den
    }
}

impl Eq for RatFunc {}

impl From<Poly> for RatFunc {
    fn from(p: Poly) -> Self {
        RatFunc::from_poly(p)
    }
}

impl From<Var> for RatFunc {
    fn from(v: Var) -> Self {
        RatFunc::var(v)
    }
}

impl From<i64> for RatFunc {
    fn from(c: i64) -> Self {
        RatFunc::integer(c)
    }
}

impl std::fmt::Display for RatFunc {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&super::text::render(self))
    }
}

impl std::fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "RatFunc({self})")
    }
}

impl std::str::FromStr for RatFunc {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        super::text::parse(s)
    }
}

/// A rational number from small integers.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(a: usize, b: usize) -> RatFunc {
        RatFunc::n(a, b)
    }

    #[test]
    fn spec_examples() {
        let x = (&n(1, 2) / &n(2, 3)) * n(2, 3);
        assert_eq!(x, n(1, 2));
        let lhs = (&n(1, 3) * &(&n(1, 2) + &n(2, 3))).checked_div(&n(2, 3)).unwrap();
        let rhs = (&(&n(1, 2) * &n(1, 3)) + &(&n(1, 3) * &n(2, 3)))
            .checked_div(&n(2, 3))
            .unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(RatFunc::one().checked_div(&RatFunc::zero()), Err(Error::ZeroDivisor));
    }

    #[test]
    fn derivative_examples() {
        let f = (&n(1, 3) * &(&n(1, 2) + &n(2, 3))).checked_div(&n(2, 3)).unwrap();
        assert_eq!(f.derivative(Var::n(1, 2)), n(1, 3).checked_div(&n(2, 3)).unwrap());
        assert_eq!((&n(1, 3) * &n(2, 3)).derivative(Var::n(2, 3)), n(1, 3));
        assert!(RatFunc::integer(7).derivative(Var::n(1, 2)).is_zero());
        // d/dx (1/x²) = −2/x³
        let g = n(1, 2).pow(-2).unwrap();
        assert_eq!(
            g.derivative(Var::n(1, 2)),
            RatFunc::integer(-2) * n(1, 2).pow(-3).unwrap()
        );
        // general quotient rule
        let h = RatFunc::one().checked_div(&(&n(1, 2) + &n(1, 3))).unwrap();
        let expected = -(h.pow(2).unwrap());
        assert_eq!(h.derivative(Var::n(1, 2)), expected);
    }

    #[test]
    fn evaluation_examples() {
        let f = (&n(1, 3) * &(&n(1, 2) + &n(2, 3))).checked_div(&n(2, 3)).unwrap();
        let one = rat(1, 1);
        let pt: Assignment = [Var::n(1, 2), Var::n(1, 3), Var::n(2, 3)]
            .into_iter()
            .map(|v| (v, one.clone()))
            .collect();
        assert_eq!(f.eval(&pt).unwrap(), rat(2, 1));
        let zero: Assignment = [Var::n(1, 2), Var::n(1, 3), Var::n(2, 3)]
            .into_iter()
            .map(|v| (v, rat(0, 1)))
            .collect();
        assert_eq!(f.eval(&zero), Err(Error::Pole));
        assert_eq!(RatFunc::rational(&rat(7, 3)).eval(&zero).unwrap(), rat(7, 3));
        assert!(matches!(f.eval(&Assignment::new()), Err(Error::UnassignedVariable(_))));
    }

    #[test]
    fn normalization_cancels_common_factors() {
        let a = &n(1, 2) + &n(2, 3);
        let f = (&a * &n(1, 3)).checked_div(&a).unwrap();
        assert_eq!(f.num(), n(1, 3).num());
        assert!(f.den().is_one());
        let g = RatFunc::integer(-4).checked_div(&RatFunc::integer(-6)).unwrap();
        assert_eq!(g.as_constant(), Some(rat(2, 3)));
        assert!(!g.den().leading_negative());
    }

    #[test]
    fn substitution() {
        // x/y with x -> a+b, y -> a
        let f = n(1, 2).checked_div(&n(1, 3)).unwrap();
        let g = f
            .substitute(&|v| match v {
                Var::N(i) if i.a() == 1 && i.b() == 2 => Some(&n(2, 3) + &n(2, 4)),
                Var::N(i) if i.a() == 1 && i.b() == 3 => Some(n(2, 3)),
                _ => None,
            })
            .unwrap();
        let expected = (&n(2, 3) + &n(2, 4)).checked_div(&n(2, 3)).unwrap();
        assert_eq!(g, expected);
    }
}

impl Div<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    /// Panics on division by zero; use [`RatFunc::checked_div`] to handle it.
    fn div(self, rhs: &RatFunc) -> RatFunc {
        self.checked_div(rhs).expect("division by the zero rational function")
    }
}

forward_owned!(Div, div, RatFunc);
