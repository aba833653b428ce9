//! Identities relating `R_w` to the maps of the two size `r−1` reductions,
//! and the closed form of the rightmost column. Each check returns the list
//! of failures, described with both sides in canonical form.

use super::forward::{forward_map, ForwardMap};
use crate::error::Result;
use crate::ratfunc::{Monomial, Poly, RatFunc, Var};
use crate::weyl::{Permutation, VarIndex};

/// `φ̂ ∘ R^{(w)} = R^{(ŵ)} ∘ φ̂` on the free variables above the bottom row.
pub fn hat_compatibility(fm: &ForwardMap) -> Result<Vec<String>> {
    let w = fm.permutation();
    let red = w.reduce_hat()?;
    let child = forward_map(&red.child);
    let mut bad = Vec::new();
    for (alpha, u) in fm.images() {
        let Some(target) = red.map_var(alpha) else {
            continue;
        };
        let unmapped = u
            .variables()
            .into_iter()
            .find(|v| matches!(v, Var::N(i) if red.map_var(*i).is_none()));
        let renamed = u.rename(&|v| match v {
            Var::N(i) => red.map_var(i).map_or(v, Var::N),
            Var::U(_) => v,
        });
        let expected = child.image(target).expect("hat image is free in the child");
        if let Some(i) = unmapped {
            bad.push(format!("R(n[{alpha}]) = {u} involves bottom-row {i}"));
        } else if &renamed != expected {
            bad.push(format!(
                "hat: phi(R(n[{alpha}])) = {renamed} but R'(n[{target}]) = {expected}"
            ));
        }
    }
    Ok(bad)
}

/// `R_L^{(w)}(n_{a,b})` against `R^{(w̃)}(n_{a,b})` for `b < r`: equal, times
/// `−n_{a,r}`, or times `n_{a,r}/n_{b,r}` according to where the row of
/// `1_r` falls relative to the rows of `1_b` and `1_a`.
pub fn tilde_scaling(fm: &ForwardMap) -> Result<Vec<String>> {
    let w = fm.permutation();
    let r = w.rank();
    let red = w.reduce_tilde()?;
    let child = forward_map(&red.child);
    let mut bad = Vec::new();
    for (alpha, _) in fm.images() {
        let (a, b) = (alpha.a(), alpha.b());
        if b == r {
            continue;
        }
        let (pa, pb, pr) = (w.preimage(a), w.preimage(b), w.preimage(r));
        let n = |x: usize, y: usize| RatFunc::var(Var::n(x, y));
        let factor = if pa < pr {
            RatFunc::one()
        } else if pb < pr {
            -n(a, r)
        } else {
            n(a, r).checked_div(&n(b, r))?
        };
        let (left, _, _) = fm.split(alpha)?;
        let rt = child.image(alpha).expect("tilde keeps free variables left of column r");
        let expected = &factor * rt;
        if left != expected {
            bad.push(format!("tilde: R_L(n[{alpha}]) = {left} but expected {expected}"));
        }
    }
    Ok(bad)
}

/// Levels under both reductions: bottom-row variables have level `b`,
/// rightmost-column variables level `π⁻¹(a)`, and all others keep their
/// level in the corresponding child.
pub fn level_compatibility(w: &Permutation) -> Result<Vec<String>> {
    let r = w.rank();
    let hat = w.reduce_hat()?;
    let tilde = w.reduce_tilde()?;
    let mut bad = Vec::new();
    for alpha in w.free_indices() {
        let level = w.level(alpha);
        let row = w.preimage(alpha.a());
        if row == r {
            if level != alpha.b() {
                bad.push(format!("level of bottom-row n[{alpha}] is {level}, not {}", alpha.b()));
            }
        } else {
            let c = hat.map_var(alpha).expect("above the bottom row");
            let lc = hat.child.level(c);
            if lc != level {
                bad.push(format!("hat: level of n[{alpha}] is {level}, of n[{c}] in child {lc}"));
            }
        }
        if alpha.b() == r {
            if level != row {
                bad.push(format!("level of rightmost-column n[{alpha}] is {level}, not {row}"));
            }
        } else {
            let c = tilde.map_var(alpha).expect("left of the rightmost column");
            let lc = tilde.child.level(c);
            if lc != level {
                bad.push(format!("tilde: level of n[{alpha}] is {level}, in child {lc}"));
            }
        }
    }
    Ok(bad)
}

/// `u_{π(a),r} = ∏_{π⁻¹(r) < j ≤ a} n_{π(j),r}`.
pub fn rightmost_column_closed_form(fm: &ForwardMap) -> Vec<String> {
    let w = fm.permutation();
    let r = w.rank();
    let mut bad = Vec::new();
    for (alpha, u) in fm.images() {
        if alpha.b() != r {
            continue;
        }
        let a = w.preimage(alpha.a());
        let m = Monomial::from_pairs((w.preimage(r) + 1..=a).map(|j| (Var::N(VarIndex::new(w.image(j), r)), 1)));
        let expected = RatFunc::from_poly(Poly::term(m, 1));
        if u != &expected {
            bad.push(format!("R(n[{alpha}]) = {u} but the column product is {expected}"));
        }
    }
    bad
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn five_by_five_example() {
        let w = Permutation::parse("2,5,4,1,3").unwrap();
        let red = w.reduce_hat().unwrap();
        let v = |a, b| VarIndex::new(a, b);
        let pairs = [
            (v(1, 2), v(1, 2)),
            (v(1, 4), v(1, 3)),
            (v(1, 5), v(1, 4)),
            (v(4, 5), v(3, 4)),
        ];
        for (from, to) in pairs {
            assert_eq!(red.map_var(from), Some(to));
        }
        let fm = forward_map(&w);
        assert!(hat_compatibility(&fm).unwrap().is_empty());
        assert!(tilde_scaling(&fm).unwrap().is_empty());
        assert!(level_compatibility(&w).unwrap().is_empty());
        assert!(rightmost_column_closed_form(&fm).is_empty());
    }

    #[test]
    fn all_rank_four() {
        for w in Permutation::all(4) {
            let fm = forward_map(&w);
            assert!(hat_compatibility(&fm).unwrap().is_empty(), "{w}");
            assert_eq!(tilde_scaling(&fm).unwrap(), Vec::<String>::new(), "{w}");
            assert!(level_compatibility(&w).unwrap().is_empty(), "{w}");
            assert!(rightmost_column_closed_form(&fm).is_empty(), "{w}");
        }
    }
}
