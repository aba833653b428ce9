//! Permutations of `{1..r}` viewed as Weyl group elements of GL(r).
//!
//! A permutation `π` in one-line notation corresponds to the permutation
//! matrix `w` with `w[i][π(i)] = 1`. The free coordinates of the cell
//! `w N^{w⁻¹}` are indexed by the inversion set of `π⁻¹`; those indices are
//! [`VarIndex`] values and are the only variable identity used anywhere in
//! the crate. Matrix positions are always derived from them.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported matrix size.
pub const MAX_RANK: usize = 12;

/// A permutation of `{1..r}` with its inverse cached.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
    inverse: Vec<usize>,
}

impl Permutation {
    /// Builds a permutation from its one-line images `π(1), …, π(r)`.
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let r = images.len();
        let text = || images.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        if r == 0 {
            return Err(Error::MalformedPermutation {
                input: String::new(),
                reason: "empty".into(),
            });
        }
        if r > MAX_RANK {
            return Err(Error::RankOutOfRange(r));
        }
        let mut inverse = vec![0; r];
        for (i, &p) in images.iter().enumerate() {
            if p == 0 || p > r {
                return Err(Error::MalformedPermutation {
                    input: text(),
                    reason: format!("entry {p} is outside 1..={r}"),
                });
            }
            if inverse[p - 1] != 0 {
                return Err(Error::MalformedPermutation {
                    input: text(),
                    reason: format!("entry {p} is repeated"),
                });
            }
            inverse[p - 1] = i + 1;
        }
        Ok(Self { images, inverse })
    }

    /// Parses comma-separated one-line notation such as `"2,5,4,1,3"`.
    pub fn parse(text: &str) -> Result<Self> {
        let trimmed = text.trim();
        let mut images = Vec::new();
        for tok in trimmed.split(',') {
            let tok = tok.trim();
            let v: usize = tok.parse().map_err(|_| Error::MalformedPermutation {
                input: trimmed.to_string(),
                reason: format!("`{tok}` is not a positive integer"),
            })?;
            images.push(v);
        }
        Self::new(images).map_err(|e| match e {
            Error::MalformedPermutation { reason, .. } => Error::MalformedPermutation {
                input: trimmed.to_string(),
                reason,
            },
            other => other,
        })
    }

    pub fn identity(r: usize) -> Self {
        Self::new((1..=r).collect()).expect("identity is a permutation")
    }

    /// The longest element `π(i) = r + 1 - i`.
    pub fn longest(r: usize) -> Self {
        Self::new((1..=r).rev().collect()).expect("reversal is a permutation")
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    /// `π(i)` for `1 <= i <= r`.
    #[inline]
    pub fn image(&self, i: usize) -> usize {
        self.images[i - 1]
    }

    /// `π⁻¹(j)` for `1 <= j <= r`: the row of `w` holding the one in column `j`.
    #[inline]
    pub fn preimage(&self, j: usize) -> usize {
        self.inverse[j - 1]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn inverse_images(&self) -> &[usize] {
        &self.inverse
    }

    pub fn inverse(&self) -> Permutation {
        Self {
            images: self.inverse.clone(),
            inverse: self.images.clone(),
        }
    }

    /// Whether `(a, b)` lies in `Inv(π⁻¹)`.
    #[inline]
    pub fn is_free(&self, a: usize, b: usize) -> bool {
        a < b && b <= self.rank() && self.preimage(a) > self.preimage(b)
    }

    pub fn inversion_count(&self) -> usize {
        let r = self.rank();
        let mut count = 0;
        for i in 1..=r {
            for j in i + 1..=r {
                if self.images[i - 1] > self.images[j - 1] {
                    count += 1;
                }
            }
        }
        count
    }

    /// Determinant of the permutation matrix.
    pub fn sign(&self) -> i32 {
        if self.inversion_count().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// `Inv(π⁻¹)` in canonical `(b, a)` order.
    pub fn free_indices(&self) -> Vec<VarIndex> {
        let r = self.rank();
        let mut out = Vec::new();
        for b in 1..=r {
            for a in 1..b {
                if self.is_free(a, b) {
                    out.push(VarIndex::new(a, b));
                }
            }
        }
        out
    }

    pub fn free_variables(&self) -> FreeVariables {
        let set = self.free_indices();
        let mut succ = set.clone();
        succ.sort_by(|x, y| self.compare(OrderKind::Succ, *x, *y));
        let mut square = set.clone();
        square.sort_by(|x, y| self.compare(OrderKind::Square, *x, *y));
        FreeVariables { set, succ, square }
    }

    /// Compares two indices so that the greater element (in the chosen
    /// ordering) sorts first.
    pub fn compare(&self, kind: OrderKind, x: VarIndex, y: VarIndex) -> Ordering {
        let (px, py) = (self.preimage(x.a()), self.preimage(y.a()));
        match kind {
            OrderKind::Succ => (x.b(), px).cmp(&(y.b(), py)),
            OrderKind::Square => (x.b(), std::cmp::Reverse(px)).cmp(&(y.b(), std::cmp::Reverse(py))),
        }
    }

    /// `x ≻ y` (or `x ⊐ y`).
    pub fn precedes(&self, kind: OrderKind, x: VarIndex, y: VarIndex) -> bool {
        self.compare(kind, x, y) == Ordering::Less
    }

    pub fn pattern(&self) -> MatrixPattern {
        MatrixPattern::new(self)
    }

    /// Number of ones of `w` strictly below row `row` and strictly right of
    /// column `col`.
    pub fn ones_below_right(&self, row: usize, col: usize) -> usize {
        (col + 1..=self.rank()).filter(|&j| self.preimage(j) > row).count()
    }

    /// The level `π⁻¹(a) + b + h(π⁻¹(a), b) − r` of a free variable.
    pub fn level(&self, v: VarIndex) -> usize {
        let row = self.preimage(v.a());
        row + v.b() + self.ones_below_right(row, v.b()) - self.rank()
    }

    pub fn level_partition(&self) -> LevelPartition {
        let mut levels: BTreeMap<usize, Vec<VarIndex>> = BTreeMap::new();
        for i in 2..=self.rank() {
            levels.insert(i, Vec::new());
        }
        for v in self.free_indices() {
            levels.entry(self.level(v)).or_default().push(v);
        }
        LevelPartition { levels }
    }

    /// Removes the bottom row and the `π(r)`-th column.
    pub fn reduce_hat(&self) -> Result<Reduction> {
        let r = self.rank();
        if r < 2 {
            return Err(Error::NoReduction);
        }
        let pivot = self.image(r);
        let phi = |x: usize| if x < pivot { x } else { x - 1 };
        let child = Permutation::new((1..r).map(|i| phi(self.image(i))).collect())?;
        let label_map = (1..=r).map(|x| if x == pivot { None } else { Some(phi(x)) }).collect();
        let index_map = self
            .free_indices()
            .into_iter()
            .filter(|v| self.preimage(v.a()) < r)
            .map(|v| (v, VarIndex::new(phi(v.a()), phi(v.b()))))
            .collect();
        Ok(Reduction {
            mode: ReductionMode::Hat,
            child,
            label_map,
            index_map,
        })
    }

    /// Removes the rightmost column and the `π⁻¹(r)`-th row.
    pub fn reduce_tilde(&self) -> Result<Reduction> {
        let r = self.rank();
        if r < 2 {
            return Err(Error::NoReduction);
        }
        let pivot = self.preimage(r);
        let child = Permutation::new(
            (1..r)
                .map(|i| if i < pivot { self.image(i) } else { self.image(i + 1) })
                .collect(),
        )?;
        let label_map = (1..=r)
            .map(|x| match x.cmp(&pivot) {
                Ordering::Less => Some(x),
                Ordering::Equal => None,
                Ordering::Greater => Some(x - 1),
            })
            .collect();
        let index_map = self
            .free_indices()
            .into_iter()
            .filter(|v| v.b() < r)
            .map(|v| (v, v))
            .collect();
        Ok(Reduction {
            mode: ReductionMode::Tilde,
            child,
            label_map,
            index_map,
        })
    }

    /// All permutations of `{1..r}` in lexicographic order.
    pub fn all(r: usize) -> AllPermutations {
        AllPermutations {
            next: Some((1..=r).collect()),
        }
    }

    /// `count` distinct permutations drawn uniformly with a seeded generator,
    /// returned in lexicographic order.
    pub fn sample(r: usize, count: usize, seed: u64) -> Vec<Permutation> {
        let total: usize = (1..=r).product();
        let target = count.min(total);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut seen = BTreeSet::new();
        let mut base: Vec<usize> = (1..=r).collect();
        while seen.len() < target {
            base.shuffle(&mut rng);
            seen.insert(base.clone());
        }
        seen.into_iter()
            .map(|v| Permutation::new(v).expect("shuffle of identity"))
            .collect()
    }

    /// One-line notation, comma separated.
    pub fn one_line(&self) -> String {
        self.images.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.one_line())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({})", self.one_line())
    }
}

impl PartialOrd for Permutation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Permutation {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.rank(), &self.images).cmp(&(other.rank(), &other.images))
    }
}

impl std::str::FromStr for Permutation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

pub struct AllPermutations {
    next: Option<Vec<usize>>,
}

impl Iterator for AllPermutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        // standard next-permutation step
        let n = succ.len();
        if n >= 2 {
            let mut i = n - 1;
            while i > 0 && succ[i - 1] >= succ[i] {
                i -= 1;
            }
            if i > 0 {
                let mut j = n - 1;
                while succ[j] <= succ[i - 1] {
                    j -= 1;
                }
                succ.swap(i - 1, j);
                succ[i..].reverse();
                self.next = Some(succ);
            }
        }
        Permutation::new(current).ok()
    }
}

/// Index `(a, b)` of a free variable `n_{a,b}`. Orders by `(b, a)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VarIndex {
    a: u8,
    b: u8,
}

impl VarIndex {
    pub fn new(a: usize, b: usize) -> Self {
        debug_assert!(a <= MAX_RANK && b <= MAX_RANK);
        Self { a: a as u8, b: b as u8 }
    }

    #[inline]
    pub fn a(self) -> usize {
        self.a as usize
    }

    #[inline]
    pub fn b(self) -> usize {
        self.b as usize
    }
}

impl Ord for VarIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.b, self.a).cmp(&(other.b, other.a))
    }
}

impl PartialOrd for VarIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for VarIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

impl fmt::Display for VarIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.a, self.b)
    }
}

impl std::str::FromStr for VarIndex {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse {
            pos: 0,
            msg: format!("expected `a,b`, got `{s}`"),
        };
        let (a, b) = s.trim().split_once(',').ok_or_else(bad)?;
        let a: usize = a.trim().parse().map_err(|_| bad())?;
        let b: usize = b.trim().parse().map_err(|_| bad())?;
        if a == 0 || b == 0 || a > MAX_RANK || b > MAX_RANK {
            return Err(bad());
        }
        Ok(VarIndex::new(a, b))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OrderKind {
    /// Lexicographic on `(−b, −π⁻¹(a))`.
    Succ,
    /// Lexicographic on `(−b, π⁻¹(a))`.
    Square,
}

/// `V_w` together with both total orders, greatest element first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeVariables {
    pub set: Vec<VarIndex>,
    pub succ: Vec<VarIndex>,
    pub square: Vec<VarIndex>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CellEntry {
    Zero,
    One(usize),
    Var(VarIndex),
}

impl CellEntry {
    pub fn is_nonzero(self) -> bool {
        !matches!(self, CellEntry::Zero)
    }
}

/// The matrix `wn` as a grid of zeros, labelled ones and free variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixPattern {
    perm: Permutation,
    cells: Vec<CellEntry>,
}

impl MatrixPattern {
    pub fn new(perm: &Permutation) -> Self {
        let r = perm.rank();
        let mut cells = vec![CellEntry::Zero; r * r];
        for row in 1..=r {
            let a = perm.image(row);
            cells[(row - 1) * r + a - 1] = CellEntry::One(a);
            for b in a + 1..=r {
                if perm.is_free(a, b) {
                    cells[(row - 1) * r + b - 1] = CellEntry::Var(VarIndex::new(a, b));
                }
            }
        }
        Self {
            perm: perm.clone(),
            cells,
        }
    }

    pub fn rank(&self) -> usize {
        self.perm.rank()
    }

    pub fn permutation(&self) -> &Permutation {
        &self.perm
    }

    /// Entry at 1-based `(row, col)`.
    #[inline]
    pub fn get(&self, row: usize, col: usize) -> CellEntry {
        self.cells[(row - 1) * self.rank() + col - 1]
    }

    /// Position of a free variable.
    pub fn position(&self, v: VarIndex) -> (usize, usize) {
        (self.perm.preimage(v.a()), v.b())
    }

    /// Position of `1_j`.
    pub fn one_position(&self, j: usize) -> (usize, usize) {
        (self.perm.preimage(j), j)
    }

    pub fn rows(&self) -> impl Iterator<Item = &[CellEntry]> {
        self.cells.chunks(self.rank())
    }
}

impl fmt::Display for MatrixPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.rows() {
            let cells: Vec<String> = row
                .iter()
                .map(|c| match c {
                    CellEntry::Zero => "0".to_string(),
                    CellEntry::One(j) => format!("1_{j}"),
                    CellEntry::Var(v) => format!("n[{v}]"),
                })
                .collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// The sets `B_w(i)`, `2 <= i <= r`, keyed by level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelPartition {
    pub levels: BTreeMap<usize, Vec<VarIndex>>,
}

impl LevelPartition {
    pub fn level_set(&self, i: usize) -> &[VarIndex] {
        self.levels.get(&i).map(Vec::as_slice).unwrap_or(&[])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReductionMode {
    Hat,
    Tilde,
}

/// A size-`(r−1)` child permutation with the index bookkeeping that relates
/// its free variables to those of the parent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    pub mode: ReductionMode,
    pub child: Permutation,
    /// Hat mode: the column-label bijection `φ̂`. Tilde mode: the row bijection `φ̃`.
    pub label_map: Vec<Option<usize>>,
    /// Parent free variable → child free variable, on the domain where the map is defined.
    pub index_map: BTreeMap<VarIndex, VarIndex>,
}

impl Reduction {
    pub fn map_label(&self, x: usize) -> Option<usize> {
        self.label_map.get(x.checked_sub(1)?).copied().flatten()
    }

    pub fn map_var(&self, v: VarIndex) -> Option<VarIndex> {
        self.index_map.get(&v).copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(a: usize, b: usize) -> VarIndex {
        VarIndex::new(a, b)
    }

    #[test]
    fn parses_five_by_five_example() {
        let p = Permutation::parse("2,5,4,1,3").unwrap();
        assert_eq!(p.inverse_images(), &[4, 1, 5, 3, 2]);
        assert_eq!(Permutation::parse("1,2,3").unwrap(), Permutation::identity(3));
        assert_eq!(Permutation::parse("2,1").unwrap().inverse_images(), &[2, 1]);
    }

    #[test]
    fn rejects_malformed() {
        for bad in ["1,1", "0,1", "1,3", "", "a,b", "1,,2"] {
            assert!(
                matches!(Permutation::parse(bad), Err(Error::MalformedPermutation { .. })),
                "{bad}"
            );
        }
        let big = (1..=13).map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        assert_eq!(Permutation::parse(&big), Err(Error::RankOutOfRange(13)));
    }

    #[test]
    fn free_variables_and_orders() {
        let p = Permutation::parse("2,5,4,1,3").unwrap();
        let fv = p.free_variables();
        assert_eq!(fv.set.len(), 6);
        let mut set = fv.set.clone();
        set.sort_by_key(|x| (x.a(), x.b()));
        assert_eq!(set, vec![v(1, 2), v(1, 4), v(1, 5), v(3, 4), v(3, 5), v(4, 5)]);
        assert_eq!(fv.succ, vec![v(1, 2), v(1, 4), v(3, 4), v(4, 5), v(1, 5), v(3, 5)]);
        assert!(Permutation::identity(4).free_indices().is_empty());

        let l3 = Permutation::longest(3).free_variables();
        assert_eq!(l3.square, vec![v(1, 2), v(1, 3), v(2, 3)]);
    }

    #[test]
    fn free_count_matches_inversions() {
        for r in 1..=5 {
            for p in Permutation::all(r) {
                assert_eq!(p.free_indices().len(), p.inverse().inversion_count());
            }
        }
    }

    #[test]
    fn enumerates_every_permutation_once() {
        let all: Vec<_> = Permutation::all(5).collect();
        assert_eq!(all.len(), 120);
        let set: BTreeSet<_> = all.iter().cloned().collect();
        assert_eq!(set.len(), 120);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(Permutation::all(1).count(), 1);
    }

    #[test]
    fn pattern_placement() {
        let p = Permutation::longest(3).pattern();
        use CellEntry::*;
        let rows: Vec<Vec<CellEntry>> = p.rows().map(|r| r.to_vec()).collect();
        assert_eq!(rows[0], vec![Zero, Zero, One(3)]);
        assert_eq!(rows[1], vec![Zero, One(2), Var(v(2, 3))]);
        assert_eq!(rows[2], vec![One(1), Var(v(1, 2)), Var(v(1, 3))]);

        let g2 = Permutation::parse("2,1").unwrap().pattern();
        assert_eq!(g2.get(1, 2), One(2));
        assert_eq!(g2.get(2, 1), One(1));
        assert_eq!(g2.get(2, 2), Var(v(1, 2)));

        let w5 = Permutation::parse("2,5,4,1,3").unwrap().pattern();
        assert_eq!(w5.get(3, 5), Var(v(4, 5)));
        assert_eq!(w5.get(4, 2), Var(v(1, 2)));
        assert_eq!(w5.get(4, 3), Zero);
        assert_eq!(w5.get(5, 3), One(3));
        assert_eq!(w5.get(5, 5), Var(v(3, 5)));
    }

    #[test]
    fn levels() {
        let g2 = Permutation::parse("2,1").unwrap().level_partition();
        assert_eq!(g2.level_set(2), &[v(1, 2)]);

        let l3 = Permutation::longest(3).level_partition();
        assert_eq!(l3.level_set(2), &[v(1, 2), v(2, 3)]);
        assert_eq!(l3.level_set(3), &[v(1, 3)]);

        let w5 = Permutation::parse("2,5,4,1,3").unwrap().level_partition();
        assert_eq!(w5.level_set(2), &[v(1, 2)]);
        assert_eq!(w5.level_set(3), &[v(1, 4), v(4, 5)]);
        assert_eq!(w5.level_set(4), &[v(3, 4), v(1, 5)]);
        assert_eq!(w5.level_set(5), &[v(3, 5)]);
    }

    #[test]
    fn level_bounds_hold() {
        for r in 2..=6 {
            for p in Permutation::all(r) {
                for x in p.free_indices() {
                    let l = p.level(x);
                    assert!(2 <= l && l <= p.preimage(x.a()).min(x.b()), "{p} {x:?}");
                }
            }
        }
    }

    #[test]
    fn hat_reduction() {
        let p = Permutation::parse("2,5,4,1,3").unwrap();
        let red = p.reduce_hat().unwrap();
        assert_eq!(red.child.images(), &[2, 4, 3, 1]);
        assert_eq!(red.map_var(v(1, 2)), Some(v(1, 2)));
        assert_eq!(red.map_var(v(1, 4)), Some(v(1, 3)));
        assert_eq!(red.map_var(v(1, 5)), Some(v(1, 4)));
        assert_eq!(red.map_var(v(4, 5)), Some(v(3, 4)));
        assert_eq!(red.map_var(v(3, 5)), None);
        assert_eq!(red.index_map.len(), 4);

        let g2 = Permutation::parse("2,1").unwrap().reduce_hat().unwrap();
        assert_eq!(g2.child.rank(), 1);
        assert!(g2.index_map.is_empty());

        let l3 = Permutation::longest(3).reduce_hat().unwrap();
        assert_eq!(l3.child.images(), &[2, 1]);
        assert_eq!(l3.map_var(v(2, 3)), Some(v(1, 2)));
        assert_eq!(l3.index_map.len(), 1);

        assert_eq!(Permutation::identity(1).reduce_hat(), Err(Error::NoReduction));
    }

    #[test]
    fn tilde_reduction() {
        let p = Permutation::parse("2,5,4,1,3").unwrap();
        let red = p.reduce_tilde().unwrap();
        assert_eq!(red.child.images(), &[2, 4, 1, 3]);
        let dom: Vec<_> = red.index_map.keys().copied().collect();
        assert_eq!(dom, vec![v(1, 2), v(1, 4), v(3, 4)]);
        let mut child_vars = red.child.free_indices();
        child_vars.sort();
        assert_eq!(child_vars, dom);

        let l3 = Permutation::longest(3).reduce_tilde().unwrap();
        assert_eq!(l3.child.images(), &[2, 1]);
        assert_eq!(l3.index_map.keys().copied().collect::<Vec<_>>(), vec![v(1, 2)]);
        assert_eq!(Permutation::identity(1).reduce_tilde(), Err(Error::NoReduction));
    }

    #[test]
    fn reductions_preserve_levels() {
        for r in 2..=6 {
            for p in Permutation::all(r) {
                let hat = p.reduce_hat().unwrap();
                let tilde = p.reduce_tilde().unwrap();
                for x in p.free_indices() {
                    match hat.map_var(x) {
                        Some(y) => assert_eq!(p.level(x), hat.child.level(y)),
                        None => assert_eq!(p.level(x), x.b()),
                    }
                    if x.b() < r {
                        assert_eq!(p.level(x), tilde.child.level(x));
                    } else {
                        assert_eq!(p.level(x), p.preimage(x.a()));
                    }
                }
                // hat index map lands exactly on the child's free variables
                let mut image: Vec<_> = hat.index_map.values().copied().collect();
                image.sort();
                assert_eq!(image, hat.child.free_indices());
            }
        }
    }

    #[test]
    fn sampling_is_seeded_and_distinct() {
        let a = Permutation::sample(7, 200, 1);
        let b = Permutation::sample(7, 200, 1);
        assert_eq!(a, b);
        assert_eq!(a.len(), 200);
        assert_eq!(a.iter().collect::<BTreeSet<_>>().len(), 200);
        assert_eq!(Permutation::sample(3, 100, 5).len(), 6);
    }
}
