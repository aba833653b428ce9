use super::forward::{wu_symbolic, ForwardMap};
use crate::error::{Error, Result};
use crate::ratfunc::{Monomial, Poly, RatFunc, RatMatrix, Var};
use crate::weyl::{Permutation, VarIndex};

/// The index data of the largest invertible block of `wu` whose bottom left
/// entry is `u_{x,y}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KShape {
    pub alpha: VarIndex,
    /// Columns `j` with `y ≤ j ≤ r` and `1_j` at or above the row of `n_{x,y}`.
    pub k_col: Vec<usize>,
    /// The `t` consecutive rows of `wu` ending at the row of `n_{x,y}`.
    pub rows: Vec<usize>,
    /// The submatrix of `w` on the rows and columns holding `1_j`, `j ∈ k_col`.
    pub kappa: Vec<Vec<u8>>,
    pub kappa_det: i32,
    /// Free `n_{a,b}` with `a < y ≤ b` and `1_a` at or above the row of `n_{x,y}`.
    pub k_det_set: Vec<VarIndex>,
}

impl KShape {
    pub fn new(w: &Permutation, alpha: VarIndex) -> Result<Self> {
        let (x, y) = (alpha.a(), alpha.b());
        if !w.is_free(x, y) {
            return Err(Error::NotFree { a: x, b: y });
        }
        let r = w.rank();
        let row = w.preimage(x);
        let k_col: Vec<usize> = (y..=r).filter(|&j| w.preimage(j) <= row).collect();
        let t = k_col.len();
        let rows: Vec<usize> = (row + 1 - t..=row).collect();
        let mut one_rows: Vec<usize> = k_col.iter().map(|&j| w.preimage(j)).collect();
        one_rows.sort_unstable();
        let kappa: Vec<Vec<u8>> = one_rows
            .iter()
            .map(|&i| k_col.iter().map(|&j| u8::from(w.image(i) == j)).collect())
            .collect();
        let images: Vec<usize> = one_rows
            .iter()
            .map(|&i| {
                k_col
                    .iter()
                    .position(|&j| j == w.image(i))
                    .expect("one in a kept column")
                    + 1
            })
            .collect();
        let kappa_det = Permutation::new(images).expect("kappa is a permutation").sign();
        let k_det_set = w
            .free_indices()
            .into_iter()
            .filter(|v| v.a() < y && y <= v.b() && w.preimage(v.a()) <= row)
            .collect();
        Ok(Self {
            alpha,
            k_col,
            rows,
            kappa,
            kappa_det,
            k_det_set,
        })
    }

    pub fn size(&self) -> usize {
        self.k_col.len()
    }

    /// The block cut out of an `r × r` matrix laid out like `wu`.
    pub fn block(&self, m: &RatMatrix) -> RatMatrix {
        let rows: Vec<usize> = self.rows.iter().map(|i| i - 1).collect();
        let cols: Vec<usize> = self.k_col.iter().map(|j| j - 1).collect();
        m.submatrix(&rows, &cols)
    }

    /// `det κ · ∏ K_det`.
    pub fn predicted_det(&self) -> RatFunc {
        let m = Monomial::from_pairs(self.k_det_set.iter().map(|&v| (Var::N(v), 1)));
        RatFunc::from_poly(Poly::term(m, self.kappa_det))
    }
}

#[derive(Debug, Clone)]
pub struct KSystem {
    pub shape: KShape,
    /// The block of `wu` with the forward images substituted.
    pub k: RatMatrix,
    /// The same block with `u[a,b]` left symbolic.
    pub k_symbolic: RatMatrix,
    pub det_k: RatFunc,
}

pub fn k_system(fm: &ForwardMap, alpha: VarIndex) -> Result<KSystem> {
    let w = fm.permutation();
    let shape = KShape::new(w, alpha)?;
    let k = shape.block(fm.wu());
    let k_symbolic = shape.block(&wu_symbolic(w));
    let det_k = k.determinant()?;
    Ok(KSystem {
        shape,
        k,
        k_symbolic,
        det_k,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::biratmap::forward_map;
    use crate::ratfunc::parse;

    fn v(a: usize, b: usize) -> VarIndex {
        VarIndex::new(a, b)
    }

    #[test]
    fn five_by_five_example() {
        let w = Permutation::parse("2,5,4,1,3").unwrap();
        let s = KShape::new(&w, v(1, 2)).unwrap();
        assert_eq!(s.k_col, vec![2, 4, 5]);
        assert_eq!(s.rows, vec![2, 3, 4]);
        assert_eq!(s.k_det_set, vec![v(1, 2), v(1, 4), v(1, 5)]);
        assert_eq!(s.kappa, vec![vec![1, 0, 0], vec![0, 0, 1], vec![0, 1, 0]]);
        assert_eq!(s.kappa_det, -1);
        let k = k_system(&forward_map(&w), v(1, 2)).unwrap();
        assert_eq!(k.k_symbolic.get(2, 0), &RatFunc::u(1, 2));
        assert_eq!(k.k_symbolic.get(0, 2), &RatFunc::one());
        assert_eq!(k.det_k, s.predicted_det());
    }

    #[test]
    fn small_cases() {
        let w = Permutation::parse("2,1").unwrap();
        let k = k_system(&forward_map(&w), v(1, 2)).unwrap();
        assert_eq!(
            k.k_symbolic,
            RatMatrix::from_rows(vec![vec![RatFunc::u(1, 2)]]).unwrap()
        );
        assert_eq!(k.shape.kappa, vec![vec![1]]);
        assert_eq!(k.shape.k_det_set, vec![v(1, 2)]);

        let w = Permutation::parse("3,2,1").unwrap();
        let k = k_system(&forward_map(&w), v(1, 2)).unwrap();
        assert_eq!(k.shape.k_col, vec![2, 3]);
        assert_eq!(k.det_k, parse("-n[1,2]*n[1,3]").unwrap());
        assert_eq!(k.det_k, k.shape.predicted_det());
    }

    #[test]
    fn determinant_identity_rank_four() {
        for w in Permutation::all(4) {
            let fm = forward_map(&w);
            for alpha in w.free_indices() {
                let k = k_system(&fm, alpha).unwrap();
                assert_eq!(k.det_k, k.shape.predicted_det(), "{w} {alpha}");
            }
        }
    }
}
