use num_bigint::BigInt;

use super::forward::{wn_matrix, ForwardMap};
use crate::error::{Error, Result};
use crate::ratfunc::{Monomial, Poly, RatFunc, RatMatrix, Var};
use crate::weyl::{Permutation, VarIndex};

/// The lower right blocks of `wn` and `wu` that feed the UDL formulas.
#[derive(Debug, Clone)]
pub struct UdlBlocks {
    pub index: usize,
    /// Rows and columns `r−i+1..r` of `wn`.
    pub s: RatMatrix,
    /// Rows `r−i` and `r−i+2..r`, columns `r−i+1..r` of `wn`.
    pub e: RatMatrix,
    /// `s` read off `wu`.
    pub t: RatMatrix,
    /// `e` read off `wu`.
    pub f: RatMatrix,
    /// `Δ_i`.
    pub delta: Poly,
    /// `det L_{r−i}(w)`.
    pub l_det: i32,
}

#[derive(Debug, Clone)]
pub struct UdlDecomposition {
    /// `x_{i,i+1}` for `i = 1..r−1`.
    pub superdiag: Vec<RatFunc>,
    /// `b_{i,i}` for `i = 1..r`.
    pub diag: Vec<RatFunc>,
    /// `det T_i` for `i = 0..r`, with `det T_0 = 1` and `det T_r = det w`.
    pub t_dets: Vec<RatFunc>,
    /// `det F_i` at index `i` for `i = 1..r−1`; index 0 holds one.
    pub f_dets: Vec<RatFunc>,
}

fn block_indices(r: usize, i: usize) -> (Vec<usize>, Vec<usize>) {
    let cols: Vec<usize> = (r - i..r).collect();
    let mut e_rows = vec![r - i - 1];
    e_rows.extend(r - i + 1..r);
    (cols, e_rows)
}

pub fn udl_blocks(fm: &ForwardMap, i: usize) -> Result<UdlBlocks> {
    let w = fm.permutation();
    let r = w.rank();
    if i == 0 || i >= r {
        return Err(Error::IndexOutOfRange {
            index: i,
            max: r.saturating_sub(1),
        });
    }
    let (cols, e_rows) = block_indices(r, i);
    let wn = wn_matrix(w);
    Ok(UdlBlocks {
        index: i,
        s: wn.submatrix(&cols, &cols),
        e: wn.submatrix(&e_rows, &cols),
        t: fm.wu().submatrix(&cols, &cols),
        f: fm.wu().submatrix(&e_rows, &cols),
        delta: delta(w, i),
        l_det: l_matrix_det(w, r - i),
    })
}

pub fn udl_decompose(fm: &ForwardMap) -> Result<UdlDecomposition> {
    let w = fm.permutation();
    let r = w.rank();
    let wu = fm.wu();
    let mut t_dets = vec![RatFunc::one()];
    let mut f_dets = vec![RatFunc::one()];
    for i in 1..r {
        let (cols, e_rows) = block_indices(r, i);
        t_dets.push(wu.submatrix(&cols, &cols).determinant()?);
        f_dets.push(wu.submatrix(&e_rows, &cols).determinant()?);
    }
    // wu is w times a unipotent upper triangular matrix
    t_dets.push(RatFunc::integer(w.sign().into()));
    for (i, d) in t_dets.iter().enumerate() {
        if d.is_zero() {
            return Err(Error::DegenerateDecomposition(format!("det T_{i} vanishes for {w}")));
        }
    }
    let diag = (1..=r)
        .map(|i| t_dets[r - i + 1].checked_div(&t_dets[r - i]))
        .collect::<Result<Vec<_>>>()?;
    let superdiag = (1..r)
        .map(|i| f_dets[r - i].checked_div(&t_dets[r - i]))
        .collect::<Result<Vec<_>>>()?;
    Ok(UdlDecomposition {
        superdiag,
        diag,
        t_dets,
        f_dets,
    })
}

/// `Δ_i(w) = ∏ n_{a,b}` over free `(a,b)` with `a < r−i+1 ≤ b`.
pub fn delta(w: &Permutation, i: usize) -> Poly {
    let r = w.rank();
    let m = Monomial::from_pairs(
        w.free_indices()
            .into_iter()
            .filter(|v| v.a() + i < r + 1 && r < v.b() + i)
            .map(|v| (Var::N(v), 1)),
    );
    Poly::term(m, 1)
}

/// `det L_i(w)`: the sign of `w` with the rows and columns of `1_1..1_i` removed.
pub fn l_matrix_det(w: &Permutation, i: usize) -> i32 {
    let images: Vec<usize> = w.images().iter().copied().filter(|&x| x > i).map(|x| x - i).collect();
    if images.is_empty() {
        return 1;
    }
    Permutation::new(images).expect("induced permutation").sign()
}

/// `b_{i,i} = (−1)^{i+π⁻¹(i)} ∏_{(a,i)} (−n_{a,i}) / ∏_{(i,b)} n_{i,b}`.
pub fn diag_closed_form(w: &Permutation, i: usize) -> RatFunc {
    let free = w.free_indices();
    let above: Vec<VarIndex> = free.iter().copied().filter(|v| v.b() == i).collect();
    let right: Vec<VarIndex> = free.iter().copied().filter(|v| v.a() == i).collect();
    let parity = i + w.preimage(i) + above.len();
    let sign = if parity.is_multiple_of(2) { 1 } else { -1 };
    let num = Monomial::from_pairs(above.into_iter().map(|v| (Var::N(v), 1)));
    let den = Monomial::from_pairs(right.into_iter().map(|v| (Var::N(v), 1)));
    RatFunc::new(Poly::term(num, BigInt::from(sign)), Poly::term(den, 1)).expect("monomial denominator")
}

/// `Σ 1/n_α` over the free variables of level `i+1`.
pub fn superdiag_closed_form(w: &Permutation, i: usize) -> RatFunc {
    w.level_partition()
        .level_set(i + 1)
        .iter()
        .fold(RatFunc::zero(), |acc, &v| {
            &acc + &RatFunc::var(Var::N(v)).recip().expect("variable is nonzero")
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::biratmap::forward_map;
    use crate::ratfunc::parse;

    fn perm(s: &str) -> Permutation {
        Permutation::parse(s).unwrap()
    }

    fn f(s: &str) -> RatFunc {
        parse(s).unwrap()
    }

    #[test]
    fn rank_two_blocks() {
        let fm = forward_map(&perm("2,1"));
        let b = udl_blocks(&fm, 1).unwrap();
        assert_eq!(b.t, RatMatrix::from_rows(vec![vec![RatFunc::n(1, 2)]]).unwrap());
        assert_eq!(b.f, RatMatrix::from_rows(vec![vec![RatFunc::one()]]).unwrap());
        assert_eq!(b.l_det, 1);
        assert!(matches!(udl_blocks(&fm, 2), Err(Error::IndexOutOfRange { .. })));
        let d = udl_decompose(&fm).unwrap();
        assert_eq!(d.superdiag, vec![f("1/n[1,2]")]);
        assert_eq!(d.diag, vec![f("-1/n[1,2]"), f("n[1,2]")]);
    }

    #[test]
    fn longest_three() {
        let w = perm("3,2,1");
        let fm = forward_map(&w);
        let b = udl_blocks(&fm, 2).unwrap();
        assert_eq!(b.t.determinant().unwrap(), f("-n[1,2]*n[1,3]"));
        assert_eq!(&b.delta, f("n[1,2]*n[1,3]").num());
        assert_eq!(b.l_det, -1);
        let d = udl_decompose(&fm).unwrap();
        assert_eq!(d.superdiag, vec![f("1/n[1,2] + 1/n[2,3]"), f("1/n[1,3]")]);
        assert_eq!(
            d.diag,
            vec![f("1/(n[1,2]*n[1,3])"), f("-n[1,2]/n[2,3]"), f("n[1,3]*n[2,3]")]
        );
        for i in 1..=3 {
            assert_eq!(d.diag[i - 1], diag_closed_form(&w, i));
        }
        for i in 1..3 {
            assert_eq!(d.superdiag[i - 1], superdiag_closed_form(&w, i));
        }
    }

    #[test]
    fn cycle_superdiagonal() {
        let fm = forward_map(&perm("2,3,1"));
        let d = udl_decompose(&fm).unwrap();
        assert_eq!(d.superdiag, vec![f("1/n[1,2]"), f("1/n[1,3]")]);
    }

    #[test]
    fn five_by_five_first_block() {
        let w = perm("2,5,4,1,3");
        let fm = forward_map(&w);
        let b = udl_blocks(&fm, 1).unwrap();
        assert_eq!(b.t.get(0, 0), &f("n[4,5]*n[1,5]*n[3,5]"));
        assert_eq!(b.delta, f("n[1,5]*n[3,5]*n[4,5]").num().clone());
        assert_eq!(b.l_det, 1);
    }

    #[test]
    fn determinant_form_rank_four() {
        for w in Permutation::all(4) {
            let fm = forward_map(&w);
            for i in 1..4 {
                let b = udl_blocks(&fm, i).unwrap();
                let expected = RatFunc::from_poly(b.delta.scale(&BigInt::from(b.l_det)));
                assert_eq!(b.t.determinant().unwrap(), expected, "{w} i={i}");
            }
            let d = udl_decompose(&fm).unwrap();
            let prod = d.diag.iter().fold(RatFunc::one(), |acc, x| &acc * x);
            assert_eq!(prod, RatFunc::integer(w.sign().into()));
        }
    }
}
