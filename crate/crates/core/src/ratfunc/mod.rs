//! Exact arithmetic on multivariate polynomials and rational functions in the
//! cell coordinates `n[a,b]` and their images `u[a,b]`.

mod matrix;
mod poly;
mod rational;
mod text;

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::weyl::VarIndex;

pub use matrix::{DetMethod, RatMatrix};
pub use poly::{Monomial, Poly};
pub use rational::{rat, RatFunc};
pub use text::{parse, render_poly, render_poly_tex, render_tex};

/// A variable: a coordinate `n[a,b]` of the cell or an image coordinate `u[a,b]`.
/// Orders all `n` before all `u`, each family by `(b, a)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Var {
    N(VarIndex),
    U(VarIndex),
}

impl Var {
    pub fn n(a: usize, b: usize) -> Self {
        Var::N(VarIndex::new(a, b))
    }

    pub fn u(a: usize, b: usize) -> Self {
        Var::U(VarIndex::new(a, b))
    }

    pub fn index(self) -> VarIndex {
        match self {
            Var::N(i) | Var::U(i) => i,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::N(i) => write!(f, "n[{i}]"),
            Var::U(i) => write!(f, "u[{i}]"),
        }
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// An exact evaluation point.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Assignment(pub BTreeMap<Var, BigRational>);

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, v: Var, x: BigRational) -> &mut Self {
        self.0.insert(v, x);
        self
    }

    pub fn get(&self, v: Var) -> Option<&BigRational> {
        self.0.get(&v)
    }

    pub fn lookup(&self) -> impl Fn(Var) -> Option<BigRational> + '_ {
        move |v| self.0.get(&v).cloned()
    }
}

impl FromIterator<(Var, BigRational)> for Assignment {
    fn from_iter<T: IntoIterator<Item = (Var, BigRational)>>(iter: T) -> Self {
        Self(iter.into_iter().collect())
    }
}
