//! Square matrices of rational functions and their determinants.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use super::{Poly, RatFunc};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DetMethod {
    /// Cofactor expansion, sparsest rows first, memoized by column subset.
    #[default]
    Laplace,
    /// Fraction-free (Bareiss) elimination with exact polynomial division.
    Bareiss,
}

#[derive(Clone, PartialEq, Eq)]
pub struct RatMatrix {
    nrows: usize,
    ncols: usize,
    data: Vec<RatFunc>,
}

impl RatMatrix {
    pub fn from_rows(rows: Vec<Vec<RatFunc>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        for r in &rows {
            if r.len() != ncols {
                return Err(Error::LengthMismatch {
                    expected: ncols,
                    got: r.len(),
                });
            }
        }
        Ok(Self {
            nrows,
            ncols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn(nrows: usize, ncols: usize, mut f: impl FnMut(usize, usize) -> RatFunc) -> Self {
        let mut data = Vec::with_capacity(nrows * ncols);
        for i in 0..nrows {
            for j in 0..ncols {
                data.push(f(i, j));
            }
        }
        Self { nrows, ncols, data }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { RatFunc::one() } else { RatFunc::zero() })
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn is_square(&self) -> bool {
        self.nrows == self.ncols
    }

    /// Entry at 0-based `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> &RatFunc {
        &self.data[i * self.ncols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: RatFunc) {
        self.data[i * self.ncols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[RatFunc] {
        &self.data[i * self.ncols..(i + 1) * self.ncols]
    }

    /// The submatrix on the given 0-based rows and columns, in the given order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> RatMatrix {
        Self::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    pub fn map(&self, f: impl Fn(&RatFunc) -> RatFunc) -> RatMatrix {
        Self {
            nrows: self.nrows,
            ncols: self.ncols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Whether every entry strictly below the diagonal vanishes.
    pub fn is_upper_triangular(&self) -> bool {
        (0..self.nrows).all(|i| (0..i.min(self.ncols)).all(|j| self.get(i, j).is_zero()))
    }

    pub fn diagonal_product(&self) -> RatFunc {
        (0..self.nrows.min(self.ncols)).fold(RatFunc::one(), |acc, i| &acc * self.get(i, i))
    }

    pub fn determinant(&self) -> Result<RatFunc> {
        self.determinant_with(DetMethod::Laplace)
    }

    pub fn determinant_with(&self, method: DetMethod) -> Result<RatFunc> {
        if !self.is_square() {
            return Err(Error::LengthMismatch {
                expected: self.nrows,
                got: self.ncols,
            });
        }
        if self.nrows == 0 {
            return Ok(RatFunc::one());
        }
        let (polys, scale) = self.clear_denominators();
        let det = match method {
            DetMethod::Laplace => laplace(&polys),
            DetMethod::Bareiss => bareiss(polys),
        };
        RatFunc::new(det, scale)
    }

    /// Multiplies each row by a common denominator of its entries; returns the
    /// polynomial matrix and the product of those multipliers.
    fn clear_denominators(&self) -> (Vec<Vec<Poly>>, Poly) {
        let mut scale = Poly::one();
        let mut out = Vec::with_capacity(self.nrows);
        for i in 0..self.nrows {
            let row = self.row(i);
            let all_terms = row.iter().all(|x| x.den().as_term().is_some());
            let common = if all_terms {
                let mut m = super::Monomial::one();
                let mut c = BigInt::one();
                for x in row {
                    let (dm, dc) = x.den().as_term().expect("single-term denominator");
                    m = m.lcm(dm);
                    c = c.lcm(dc);
                }
                Poly::term(m, c)
            } else {
                let mut common = Poly::one();
                for x in row {
                    if common.div_exact(x.den()).is_none() {
                        common = &common * x.den();
                    }
                }
                common
            };
            let prow = row
                .iter()
                .map(|x| {
                    let f = common.div_exact(x.den()).expect("common denominator");
                    x.num() * &f
                })
                .collect();
            scale = &scale * &common;
            out.push(prow);
        }
        (out, scale)
    }
}

fn laplace(m: &[Vec<Poly>]) -> Poly {
    let n = m.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| m[i].iter().filter(|p| !p.is_zero()).count());
    let sign = permutation_parity(&order);
    let rows: Vec<&Vec<Poly>> = order.iter().map(|&i| &m[i]).collect();
    let mut memo: HashMap<u32, Poly> = HashMap::new();
    let d = laplace_rec(&rows, 0, 0, &mut memo);
    if sign {
        -d
    } else {
        d
    }
}

fn laplace_rec(rows: &[&Vec<Poly>], k: usize, used: u32, memo: &mut HashMap<u32, Poly>) -> Poly {
    let n = rows.len();
    if k == n {
        return Poly::one();
    }
    if let Some(p) = memo.get(&used) {
        return p.clone();
    }
    let mut acc = Poly::zero();
    let mut pos = 0usize;
    for c in 0..n {
        if used & (1 << c) != 0 {
            continue;
        }
        let e = &rows[k][c];
        if !e.is_zero() {
            let minor = laplace_rec(rows, k + 1, used | (1 << c), memo);
            if !minor.is_zero() {
                let t = e * &minor;
                if pos.is_multiple_of(2) {
                    acc += &t;
                } else {
                    acc -= &t;
                }
            }
        }
        pos += 1;
    }
    memo.insert(used, acc.clone());
    acc
}

/// Whether the permutation is odd.
fn permutation_parity(p: &[usize]) -> bool {
    let mut inv = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    inv % 2 == 1
}

fn bareiss(mut a: Vec<Vec<Poly>>) -> Poly {
    let n = a.len();
    let mut negate = false;
    let mut prev = Poly::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    negate = !negate;
                }
                None => return Poly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = t.div_exact(&prev).expect("Bareiss quotient is exact");
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.nrows {
            let cells: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatMatrix {}x{}\n{self}", self.nrows, self.ncols)
    }
}
