//! Up/left lattice paths through the nonzero entries of `w·n`.
//!
//! Two nonzero entries are neighbors when they share a row or a column with
//! no nonzero entry between them. Paths move only up or left, so an entry
//! `1_j` (nothing nonzero above it or to its left) always ends a path.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::ratfunc::{Monomial, Poly, Var};
use crate::weyl::{CellEntry, MatrixPattern, Permutation, VarIndex};

/// A nonzero entry of `w·n` at 1-based `(row, col)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub row: usize,
    pub col: usize,
    pub entry: CellEntry,
}

impl Cell {
    pub fn var(self) -> Option<VarIndex> {
        match self.entry {
            CellEntry::Var(v) => Some(v),
            _ => None,
        }
    }
}

impl PartialOrd for CellEntry {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CellEntry {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let key = |e: &CellEntry| match *e {
            CellEntry::Zero => (0, 0, 0),
            CellEntry::One(j) => (1, j, 0),
            CellEntry::Var(v) => (2, v.b(), v.a()),
        };
        key(self).cmp(&key(other))
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.entry {
            CellEntry::Zero => write!(f, "0@({},{})", self.row, self.col),
            CellEntry::One(j) => write!(f, "1_{j}@({},{})", self.row, self.col),
            CellEntry::Var(v) => write!(f, "n[{v}]@({},{})", self.row, self.col),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Step {
    Up,
    Left,
}

/// A path, origin first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Path {
    cells: Vec<Cell>,
}

impl Path {
    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn origin(&self) -> Cell {
        self.cells[0]
    }

    pub fn end(&self) -> Cell {
        *self.cells.last().expect("paths are nonempty")
    }

    /// Number of cells minus one.
    pub fn len(&self) -> usize {
        self.cells.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn first_step(&self) -> Option<Step> {
        let (a, b) = (self.cells.first()?, self.cells.get(1)?);
        Some(if b.row < a.row { Step::Up } else { Step::Left })
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.cells.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(" -> "))
    }
}

/// Pairwise disjoint paths with the product of the free variables they traverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathSet {
    paths: Vec<Path>,
    u: Monomial,
}

impl PathSet {
    fn new(paths: Vec<Path>) -> Self {
        let u = Monomial::from_pairs(
            paths
                .iter()
                .flat_map(|p| p.cells.iter().filter_map(|c| c.var()))
                .map(|v| (Var::N(v), 1)),
        );
        Self { paths, u }
    }

    pub fn paths(&self) -> &[Path] {
        &self.paths
    }

    /// `u(p)`: the product of all free variables traversed.
    pub fn u_monomial(&self) -> &Monomial {
        &self.u
    }

    pub fn u_product(&self) -> Poly {
        Poly::term(self.u.clone(), 1)
    }

    pub fn path_from(&self, origin: Cell) -> Option<&Path> {
        self.paths.iter().find(|p| p.origin() == origin)
    }

    pub fn contains(&self, cell: (usize, usize)) -> bool {
        self.paths
            .iter()
            .any(|p| p.cells.iter().any(|c| (c.row, c.col) == cell))
    }

    /// One line per path, listing cells with their coordinates.
    pub fn describe(&self) -> String {
        self.paths
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// Endpoint data attached to a free variable `n[a,b]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OriginDestination {
    pub alpha: VarIndex,
    /// Ones inside `M_w(α)`, top to bottom; the first is `1_b`.
    pub destinations: Vec<Cell>,
    /// Bottom origin first, then the other origins top to bottom.
    pub origins: Vec<Cell>,
    pub bottom_origin: Cell,
    pub o1: Vec<Cell>,
    pub d1: Vec<Cell>,
    /// `|D| − 1`.
    pub t: usize,
}

impl OriginDestination {
    /// Origins in or above row `k`.
    pub fn origins_up(&self, k: usize) -> Vec<Cell> {
        self.origins.iter().copied().filter(|c| c.row <= k).collect()
    }

    /// Origins in or below row `k`.
    pub fn origins_down(&self, k: usize) -> Vec<Cell> {
        self.origins.iter().copied().filter(|c| c.row >= k).collect()
    }

    pub fn destinations_up(&self, k: usize) -> Vec<Cell> {
        self.destinations.iter().copied().filter(|c| c.row <= k).collect()
    }

    pub fn destinations_down(&self, k: usize) -> Vec<Cell> {
        self.destinations.iter().copied().filter(|c| c.row >= k).collect()
    }

    /// Column labels `j` of the destinations `1_j`.
    pub fn destination_labels(&self) -> Vec<usize> {
        self.destinations
            .iter()
            .map(|c| match c.entry {
                CellEntry::One(j) => j,
                _ => unreachable!("destinations are ones"),
            })
            .collect()
    }
}

/// Which subcollection of `𝒫(α)` to sum over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// Every path set.
    Full,
    /// Every path of positive length starting in the rightmost column goes left first.
    Left,
    /// Not in `Left`; the bottom origin's path goes left first.
    First,
    /// Not in `Left`; the bottom origin's path goes up first.
    Second,
}

/// All four path sums of one free variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathSums {
    pub full: Poly,
    pub left: Poly,
    pub first: Poly,
    pub second: Poly,
}

impl PathSums {
    pub fn get(&self, v: Variant) -> &Poly {
        match v {
            Variant::Full => &self.full,
            Variant::Left => &self.left,
            Variant::First => &self.first,
            Variant::Second => &self.second,
        }
    }
}

/// The directed graph on the nonzero entries of a pattern.
#[derive(Debug, Clone)]
pub struct PathGraph {
    pattern: MatrixPattern,
    up: Vec<Option<usize>>,
    left: Vec<Option<usize>>,
    down: Vec<Option<usize>>,
    right: Vec<Option<usize>>,
}

impl PathGraph {
    pub fn new(pattern: MatrixPattern) -> Self {
        let r = pattern.rank();
        let idx = |row: usize, col: usize| (row - 1) * r + col - 1;
        let mut up = vec![None; r * r];
        let mut left = vec![None; r * r];
        let mut down = vec![None; r * r];
        let mut right = vec![None; r * r];
        for row in 1..=r {
            let mut last = None;
            for col in 1..=r {
                if pattern.get(row, col).is_nonzero() {
                    left[idx(row, col)] = last;
                    if let Some(l) = last {
                        right[l] = Some(idx(row, col));
                    }
                    last = Some(idx(row, col));
                }
            }
        }
        for col in 1..=r {
            let mut last = None;
            for row in 1..=r {
                if pattern.get(row, col).is_nonzero() {
                    up[idx(row, col)] = last;
                    if let Some(l) = last {
                        down[l] = Some(idx(row, col));
                    }
                    last = Some(idx(row, col));
                }
            }
        }
        Self {
            pattern,
            up,
            left,
            down,
            right,
        }
    }

    pub fn for_permutation(w: &Permutation) -> Self {
        Self::new(w.pattern())
    }

    pub fn pattern(&self) -> &MatrixPattern {
        &self.pattern
    }

    pub fn permutation(&self) -> &Permutation {
        self.pattern.permutation()
    }

    fn rank(&self) -> usize {
        self.pattern.rank()
    }

    fn cell_at(&self, i: usize) -> Cell {
        let r = self.rank();
        self.cell(i / r + 1, i % r + 1)
    }

    fn index(&self, c: Cell) -> usize {
        (c.row - 1) * self.rank() + c.col - 1
    }

    pub fn cell(&self, row: usize, col: usize) -> Cell {
        Cell {
            row,
            col,
            entry: self.pattern.get(row, col),
        }
    }

    /// Neighbors in the four directions `(up, left, down, right)`.
    pub fn neighbors(&self, c: Cell) -> [Option<Cell>; 4] {
        let i = self.index(c);
        [self.up[i], self.left[i], self.down[i], self.right[i]].map(|x| x.map(|j| self.cell_at(j)))
    }

    pub fn var_cell(&self, v: VarIndex) -> Result<Cell> {
        if !self.permutation().is_free(v.a(), v.b()) {
            return Err(Error::NotFree { a: v.a(), b: v.b() });
        }
        let (row, col) = self.pattern.position(v);
        Ok(self.cell(row, col))
    }

    pub fn one_cell(&self, j: usize) -> Cell {
        let (row, col) = self.pattern.one_position(j);
        self.cell(row, col)
    }

    /// `γ(1_j)` and `ρ(1_j)`.
    pub fn row_data(&self, j: usize) -> Result<(Cell, Monomial)> {
        let r = self.rank();
        if j == 0 || j > r {
            return Err(Error::IndexOutOfRange { index: j, max: r });
        }
        let row = self.permutation().preimage(j);
        let mut gamma = self.one_cell(j);
        let mut pairs = Vec::new();
        for col in 1..=r {
            let c = self.cell(row, col);
            if c.entry.is_nonzero() {
                gamma = c;
                if let Some(v) = c.var() {
                    pairs.push((Var::N(v), 1));
                }
            }
        }
        Ok((gamma, Monomial::from_pairs(pairs)))
    }

    fn rightmost_nonzero(&self, row: usize) -> Cell {
        (1..=self.rank())
            .rev()
            .map(|col| self.cell(row, col))
            .find(|c| c.entry.is_nonzero())
            .expect("every row holds a one")
    }

    pub fn origins_destinations(&self, alpha: VarIndex) -> Result<OriginDestination> {
        self.var_cell(alpha)?;
        let w = self.permutation();
        let r = self.rank();
        let (top, bottom) = (w.preimage(alpha.b()), w.preimage(alpha.a()));
        let mut destinations: Vec<Cell> = (alpha.b()..=r)
            .filter(|&j| (top..=bottom).contains(&w.preimage(j)))
            .map(|j| self.one_cell(j))
            .collect();
        destinations.sort_by_key(|c| c.row);
        let bottom_origin = self.rightmost_nonzero(bottom);
        let mut origins = vec![bottom_origin];
        for d in destinations.iter().skip(1) {
            origins.push(self.rightmost_nonzero(d.row));
        }
        let origin_set: BTreeSet<(usize, usize)> = origins.iter().map(|c| (c.row, c.col)).collect();
        let o1: Vec<Cell> = origins
            .iter()
            .copied()
            .filter(|c| {
                c.col == r
                    && c.row < bottom
                    && c.row > 1
                    && matches!(self.pattern.get(c.row - 1, r), CellEntry::Var(_))
                    && !origin_set.contains(&(c.row - 1, r))
            })
            .collect();
        let d1: Vec<Cell> = o1
            .iter()
            .map(|c| self.one_cell(w.image(c.row)))
            .filter(|d| destinations.contains(d))
            .collect();
        let t = destinations.len() - 1;
        Ok(OriginDestination {
            alpha,
            destinations,
            origins,
            bottom_origin,
            o1,
            d1,
            t,
        })
    }

    /// All sets of disjoint paths joining `from` bijectively to `to`.
    pub fn enumerate_path_sets(&self, from: &[Cell], to: &[Cell]) -> Result<Vec<PathSet>> {
        if from.len() != to.len() || from.is_empty() {
            return Err(Error::InvalidEndpoint(format!(
                "{} origins and {} destinations",
                from.len(),
                to.len()
            )));
        }
        for c in from.iter().chain(to) {
            if !c.entry.is_nonzero() || self.pattern.get(c.row, c.col) != c.entry {
                return Err(Error::InvalidEndpoint(format!("{c} is not a nonzero entry")));
            }
        }
        let mut order: Vec<Cell> = from.to_vec();
        order.sort_by(|x, y| y.row.cmp(&x.row).then(y.col.cmp(&x.col)));
        let targets: Vec<usize> = to.iter().map(|&c| self.index(c)).collect();
        let mut used = vec![false; self.rank() * self.rank()];
        let mut current = Vec::new();
        let mut out = Vec::new();
        self.extend_paths(&order, &targets, &mut used, &mut current, &mut out);
        Ok(out)
    }

    fn extend_paths(
        &self,
        origins: &[Cell],
        targets: &[usize],
        used: &mut [bool],
        current: &mut Vec<Path>,
        out: &mut Vec<PathSet>,
    ) {
        let k = current.len();
        if k == origins.len() {
            let ends: BTreeSet<usize> = current.iter().map(|p| self.index(p.end())).collect();
            debug_assert_eq!(ends.len(), targets.len());
            let set = PathSet::new(current.clone());
            debug_assert!(self.is_valid(&set));
            out.push(set);
            return;
        }
        let start = self.index(origins[k]);
        if used[start] {
            return;
        }
        let mut trail = vec![start];
        used[start] = true;
        self.walk(origins, targets, used, current, out, &mut trail);
        used[start] = false;
    }

    fn walk(
        &self,
        origins: &[Cell],
        targets: &[usize],
        used: &mut [bool],
        current: &mut Vec<Path>,
        out: &mut Vec<PathSet>,
        trail: &mut Vec<usize>,
    ) {
        let here = *trail.last().expect("trail starts at the origin");
        if targets.contains(&here) {
            current.push(Path {
                cells: trail.iter().map(|&i| self.cell_at(i)).collect(),
            });
            self.extend_paths(origins, targets, used, current, out);
            current.pop();
            return;
        }
        for next in [self.up[here], self.left[here]].into_iter().flatten() {
            if used[next] {
                continue;
            }
            used[next] = true;
            trail.push(next);
            self.walk(origins, targets, used, current, out, trail);
            trail.pop();
            used[next] = false;
        }
    }

    fn is_valid(&self, set: &PathSet) -> bool {
        let mut seen = BTreeSet::new();
        for p in &set.paths {
            for pair in p.cells.windows(2) {
                let i = self.index(pair[0]);
                let j = self.index(pair[1]);
                if self.up[i] != Some(j) && self.left[i] != Some(j) {
                    return false;
                }
            }
            for c in &p.cells {
                if !seen.insert((c.row, c.col)) {
                    return false;
                }
            }
        }
        true
    }

    /// `𝒫(α)`.
    pub fn path_sets(&self, alpha: VarIndex) -> Result<(OriginDestination, Vec<PathSet>)> {
        let od = self.origins_destinations(alpha)?;
        let sets = self.enumerate_path_sets(&od.origins, &od.destinations)?;
        Ok((od, sets))
    }

    /// Which of the `Left`, `First`, `Second` subcollections a path set lies in.
    pub fn classify(&self, od: &OriginDestination, set: &PathSet) -> Variant {
        let r = self.rank();
        let left = set
            .paths
            .iter()
            .filter(|p| p.origin().col == r && !p.is_empty())
            .all(|p| p.first_step() == Some(Step::Left));
        if left {
            return Variant::Left;
        }
        match set.path_from(od.bottom_origin).and_then(Path::first_step) {
            Some(Step::Left) => Variant::First,
            _ => Variant::Second,
        }
    }

    pub fn path_sum(&self, alpha: VarIndex, variant: Variant) -> Result<Poly> {
        Ok(self.path_sums(alpha)?.get(variant).clone())
    }

    pub fn path_sums(&self, alpha: VarIndex) -> Result<PathSums> {
        let (od, sets) = self.path_sets(alpha)?;
        let mut sums = PathSums {
            full: Poly::zero(),
            left: Poly::zero(),
            first: Poly::zero(),
            second: Poly::zero(),
        };
        for s in &sets {
            let term = s.u_product();
            sums.full += &term;
            match self.classify(&od, s) {
                Variant::Left => sums.left += &term,
                Variant::First => sums.first += &term,
                Variant::Second => sums.second += &term,
                Variant::Full => unreachable!(),
            }
        }
        Ok(sums)
    }

    /// `∏_{1_μ ∈ D(α)} ρ(1_μ)`.
    pub fn destination_weight(&self, od: &OriginDestination) -> Monomial {
        od.destination_labels()
            .into_iter()
            .map(|j| self.row_data(j).expect("label in range").1)
            .fold(Monomial::one(), |acc, m| acc.mul(&m))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(p: &str) -> PathGraph {
        PathGraph::for_permutation(&Permutation::parse(p).unwrap())
    }

    fn v(a: usize, b: usize) -> VarIndex {
        VarIndex::new(a, b)
    }

    fn nv(a: usize, b: usize) -> Poly {
        Poly::var(Var::n(a, b))
    }

    #[test]
    fn row_data_examples() {
        let g = graph("3,2,1");
        let (gamma, rho) = g.row_data(2).unwrap();
        assert_eq!(gamma.entry, CellEntry::Var(v(2, 3)));
        assert_eq!(rho, Monomial::var(Var::n(2, 3)));

        let g5 = graph("2,5,4,1,3");
        let (gamma, rho) = g5.row_data(2).unwrap();
        assert_eq!(gamma.entry, CellEntry::One(2));
        assert!(rho.is_one());
        let (gamma, rho) = g5.row_data(1).unwrap();
        assert_eq!(gamma.entry, CellEntry::Var(v(1, 5)));
        assert_eq!(
            rho,
            Monomial::from_pairs([(Var::n(1, 2), 1), (Var::n(1, 4), 1), (Var::n(1, 5), 1)])
        );
        assert!(g5.row_data(6).is_err());
    }

    fn entries(cells: &[Cell]) -> BTreeSet<CellEntry> {
        cells.iter().map(|c| c.entry).collect()
    }

    #[test]
    fn origins_and_destinations() {
        use CellEntry::*;
        let od = graph("3,2,1").origins_destinations(v(1, 2)).unwrap();
        assert_eq!(entries(&od.destinations), [One(2)].into());
        assert_eq!(entries(&od.origins), [Var(v(1, 3))].into());
        assert_eq!(od.t, 0);

        let od = graph("2,3,1").origins_destinations(v(1, 2)).unwrap();
        assert_eq!(entries(&od.destinations), [One(2), One(3)].into());
        assert_eq!(entries(&od.origins), [Var(v(1, 3)), One(3)].into());
        assert_eq!(od.t, 1);

        let od = graph("2,5,4,1,3").origins_destinations(v(1, 2)).unwrap();
        assert_eq!(entries(&od.destinations), [One(2), One(4), One(5)].into());
        assert_eq!(entries(&od.origins), [Var(v(1, 5)), One(5), Var(v(4, 5))].into());
        assert_eq!(od.t, 2);
        assert_eq!(od.destinations[0].entry, One(2));
        assert_eq!(od.bottom_origin.entry, Var(v(1, 5)));

        assert!(matches!(
            graph("2,5,4,1,3").origins_destinations(v(2, 3)),
            Err(Error::NotFree { a: 2, b: 3 })
        ));
    }

    #[test]
    fn enumeration_examples() {
        let g = graph("3,2,1");
        let (_, sets) = g.path_sets(v(1, 2)).unwrap();
        assert_eq!(sets.len(), 2);
        let us: BTreeSet<String> = sets.iter().map(|s| format!("{:?}", s.u_monomial())).collect();
        assert_eq!(us, ["n[1,2]*n[1,3]".to_string(), "n[1,3]*n[2,3]".to_string()].into());

        let (_, sets) = graph("2,3,1").path_sets(v(1, 2)).unwrap();
        assert_eq!(sets.len(), 1);

        let one = g.one_cell(3);
        let sets = g.enumerate_path_sets(&[one], &[one]).unwrap();
        assert_eq!(sets.len(), 1);
        assert_eq!(sets[0].paths()[0].len(), 0);
        assert!(sets[0].u_monomial().is_one());

        assert!(matches!(
            g.enumerate_path_sets(&[one], &[]),
            Err(Error::InvalidEndpoint(_))
        ));
    }

    #[test]
    fn path_sum_examples() {
        let g = graph("3,2,1");
        let s = g.path_sums(v(1, 2)).unwrap();
        assert_eq!(s.full, &(&nv(1, 2) * &nv(1, 3)) + &(&nv(1, 3) * &nv(2, 3)));
        assert_eq!(s.left, &nv(1, 2) * &nv(1, 3));
        assert!(s.first.is_zero());
        assert_eq!(s.second, &nv(1, 3) * &nv(2, 3));

        let s = g.path_sums(v(1, 3)).unwrap();
        assert!(s.left.is_zero() && s.first.is_zero());
        assert_eq!(s.second, s.full);

        let g2 = graph("2,1");
        let s = g2.path_sums(v(1, 2)).unwrap();
        assert_eq!(s.full, nv(1, 2));
        // the only path leaves the rightmost column upward
        assert!(s.left.is_zero());
        assert_eq!(s.second, s.full);
    }

    #[test]
    fn neighbors_skip_zeros() {
        let g = graph("2,5,4,1,3");
        let c = g.var_cell(v(1, 4)).unwrap();
        let [up, left, down, right] = g.neighbors(c);
        assert_eq!(up.unwrap().entry, CellEntry::One(4));
        assert_eq!(left.unwrap().entry, CellEntry::Var(v(1, 2)));
        assert_eq!(down.unwrap().entry, CellEntry::Var(v(3, 4)));
        assert_eq!(right.unwrap().entry, CellEntry::Var(v(1, 5)));
    }

    #[test]
    fn partition_and_uniqueness_small_ranks() {
        for r in 2..=5 {
            for w in Permutation::all(r) {
                let g = PathGraph::for_permutation(&w);
                for a in w.free_indices() {
                    let s = g.path_sums(a).unwrap();
                    assert_eq!(s.full, &(&s.left + &s.first) + &s.second, "{w} {a:?}");
                    let (od, sets) = g.path_sets(a).unwrap();
                    assert!(!sets.is_empty());
                    let own = g.pattern().position(a);
                    assert_eq!(sets.iter().filter(|s| s.contains(own)).count(), 1, "{w} {a:?}");
                    if od.origins.iter().all(|c| c.col < r) {
                        assert_eq!(s.left, s.full);
                    }
                    assert_eq!(od.origins.len(), od.destinations.len());
                    assert!(od.o1.iter().all(|c| c.var().is_some()));
                }
            }
        }
    }
}
