use num_bigint::BigInt;

use super::forward::ForwardMap;
use crate::error::Result;
use crate::ratfunc::{Monomial, Poly, RatFunc, RatMatrix, Var};
use crate::weyl::{Permutation, VarIndex};

#[derive(Debug, Clone)]
pub struct Jacobian {
    /// `V_w` in `⊐` order, greatest first.
    pub order: Vec<VarIndex>,
    /// Entry `(i, j)` is `∂u_{α_i}/∂n_{α_j}`.
    pub matrix: RatMatrix,
    pub diagonal_product: RatFunc,
    pub det: RatFunc,
    /// `(−1)^{t_w} ∏ n_{a,b}^{b−a−1}`.
    pub predicted: RatFunc,
    /// `Σ (|D(α)| − 1)`.
    pub t_w: usize,
}

impl Jacobian {
    pub fn is_upper_triangular(&self) -> bool {
        self.matrix.is_upper_triangular()
    }
}

pub fn jacobian(fm: &ForwardMap) -> Result<Jacobian> {
    let w = fm.permutation();
    let order = w.free_variables().square;
    let d = order.len();
    let matrix = RatMatrix::from_fn(d, d, |i, j| {
        fm.image(order[i])
            .expect("image of a free variable")
            .derivative(Var::N(order[j]))
    });
    let diagonal_product = matrix.diagonal_product();
    let det = matrix.determinant()?;
    let t_w = order.iter().map(|&a| fm.entry(a).expect("free variable").t).sum();
    let m = Monomial::from_pairs(order.iter().map(|&v| (Var::N(v), (v.b() - v.a() - 1) as u32)));
    let sign = if t_w % 2 == 0 { 1 } else { -1 };
    let predicted = RatFunc::monomial(m, sign);
    Ok(Jacobian {
        order,
        matrix,
        diagonal_product,
        det,
        predicted,
        t_w,
    })
}

/// `∂u_{x,y}/∂n_{x,y}` from the single path set through `n_{x,y}`: the
/// horizontal and vertical arms of the L-shaped path over `ρ(1_y)`.
pub fn diagonal_derivative_closed_form(w: &Permutation, alpha: VarIndex) -> RatFunc {
    let (x, y) = (alpha.a(), alpha.b());
    let r = w.rank();
    let (top, bottom) = (w.preimage(y), w.preimage(x));
    let ones = (y..=r).filter(|&j| (top..=bottom).contains(&w.preimage(j))).count();
    let free = w.free_indices();
    let num = free
        .iter()
        .filter(|v| (v.a() == x && v.b() > y) || (v.b() == y && top < w.preimage(v.a()) && w.preimage(v.a()) < bottom));
    let den = free.iter().filter(|v| v.a() == y);
    let sign = if (ones - 1) % 2 == 0 { 1 } else { -1 };
    RatFunc::new(
        Poly::term(Monomial::from_pairs(num.map(|&v| (Var::N(v), 1))), BigInt::from(sign)),
        Poly::term(Monomial::from_pairs(den.map(|&v| (Var::N(v), 1))), 1),
    )
    .expect("monomial denominator")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::biratmap::forward_map;

    fn perm(s: &str) -> Permutation {
        Permutation::parse(s).unwrap()
    }

    #[test]
    fn small_determinants() {
        let j = jacobian(&forward_map(&perm("3,2,1"))).unwrap();
        assert_eq!(j.det, RatFunc::n(1, 3));
        assert_eq!(j.t_w, 0);
        assert!(j.is_upper_triangular());
        assert_eq!(j.det, j.predicted);

        let j = jacobian(&forward_map(&perm("2,1"))).unwrap();
        assert_eq!(j.det, RatFunc::one());

        let j = jacobian(&forward_map(&perm("2,3,1"))).unwrap();
        assert_eq!(j.det, -RatFunc::n(1, 3));
        assert_eq!(j.t_w, 1);
        assert_eq!(j.diagonal_product, j.predicted);
    }

    #[test]
    fn rank_four_triangular_with_closed_diagonal() {
        for w in Permutation::all(4) {
            let j = jacobian(&forward_map(&w)).unwrap();
            assert!(j.is_upper_triangular(), "{w}");
            assert_eq!(j.det, j.predicted, "{w}");
            assert_eq!(j.diagonal_product, j.det, "{w}");
            for (i, &a) in j.order.iter().enumerate() {
                assert_eq!(j.matrix.get(i, i), &diagonal_derivative_closed_form(&w, a), "{w} {a}");
            }
        }
    }
}
