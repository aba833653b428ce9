use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::paths::{PathGraph, PathSums, Variant};
use crate::ratfunc::{Monomial, Poly, RatFunc, RatMatrix, Var};
use crate::weyl::{CellEntry, Permutation, VarIndex};

/// The image `u_α` of one free variable with the data it was assembled from.
#[derive(Debug, Clone)]
pub struct Image {
    pub alpha: VarIndex,
    /// `|D(α)| − 1`.
    pub t: usize,
    pub sums: PathSums,
    /// `∏ ρ(1_μ)` over the destinations.
    pub weight: Monomial,
    pub value: RatFunc,
}

impl Image {
    fn signed(&self, p: &Poly) -> RatFunc {
        let sign = if self.t.is_multiple_of(2) { 1 } else { -1 };
        RatFunc::new(p.scale(&BigInt::from(sign)), Poly::term(self.weight.clone(), 1))
            .expect("monomial weight is nonzero")
    }

    /// `(R_L, R_1, R_2)`.
    pub fn split(&self) -> (RatFunc, RatFunc, RatFunc) {
        (
            self.signed(&self.sums.left),
            self.signed(&self.sums.first),
            self.signed(&self.sums.second),
        )
    }
}

/// Adds `delta` to the coefficient of the `term`-th monomial of `P(α)`, in
/// graded-lex order from the leading one.
///
/// The monomial is changed in the full sum and in whichever of the three
/// partial sums holds it, so the partition identity keeps holding and only
/// the remaining checks can notice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mutation {
    pub alpha: VarIndex,
    pub term: usize,
    pub delta: i64,
}

#[derive(Debug, Clone)]
pub struct ForwardMap {
    perm: Permutation,
    images: BTreeMap<VarIndex, Image>,
    wu: RatMatrix,
}

impl ForwardMap {
    pub fn new(w: &Permutation) -> Self {
        let graph = PathGraph::for_permutation(w);
        let images = w
            .free_indices()
            .into_iter()
            .map(|alpha| {
                let (od, _) = graph.path_sets(alpha).expect("free variable");
                let sums = graph.path_sums(alpha).expect("free variable");
                let weight = graph.destination_weight(&od);
                let mut img = Image {
                    alpha,
                    t: od.t,
                    sums,
                    weight,
                    value: RatFunc::zero(),
                };
                img.value = img.signed(&img.sums.full);
                (alpha, img)
            })
            .collect();
        Self::assemble(w, images)
    }

    pub fn with_mutation(w: &Permutation, m: Mutation) -> Result<Self> {
        let base = Self::new(w);
        let mut images = base.images;
        let img = images.get_mut(&m.alpha).ok_or(Error::NotFree {
            a: m.alpha.a(),
            b: m.alpha.b(),
        })?;
        let len = img.sums.full.len();
        let lead = img
            .sums
            .full
            .terms()
            .nth(m.term)
            .map(|(mono, _)| mono.clone())
            .ok_or(Error::IndexOutOfRange {
                index: m.term,
                max: len.saturating_sub(1),
            })?;
        let delta = BigInt::from(m.delta);
        img.sums.full.add_term(lead.clone(), delta.clone());
        for v in [Variant::Left, Variant::First, Variant::Second] {
            let part = match v {
                Variant::Left => &mut img.sums.left,
                Variant::First => &mut img.sums.first,
                _ => &mut img.sums.second,
            };
            if !part.coefficient(&lead).is_zero() {
                part.add_term(lead, delta);
                break;
            }
        }
        img.value = img.signed(&img.sums.full);
        Ok(Self::assemble(w, images))
    }

    fn assemble(w: &Permutation, images: BTreeMap<VarIndex, Image>) -> Self {
        let pattern = w.pattern();
        let r = w.rank();
        let wu = RatMatrix::from_fn(r, r, |i, j| match pattern.get(i + 1, j + 1) {
            CellEntry::Zero => RatFunc::zero(),
            CellEntry::One(_) => RatFunc::one(),
            CellEntry::Var(v) => images[&v].value.clone(),
        });
        Self {
            perm: w.clone(),
            images,
            wu,
        }
    }

    pub fn permutation(&self) -> &Permutation {
        &self.perm
    }

    pub fn rank(&self) -> usize {
        self.perm.rank()
    }

    /// `u_α = R(n_α)`.
    pub fn image(&self, alpha: VarIndex) -> Option<&RatFunc> {
        self.images.get(&alpha).map(|i| &i.value)
    }

    pub fn entry(&self, alpha: VarIndex) -> Option<&Image> {
        self.images.get(&alpha)
    }

    /// Images in canonical `(b, a)` order.
    pub fn images(&self) -> impl Iterator<Item = (VarIndex, &RatFunc)> + '_ {
        self.images.iter().map(|(k, v)| (*k, &v.value))
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    /// The matrix `wu` with every `u_α` replaced by its image.
    pub fn wu(&self) -> &RatMatrix {
        &self.wu
    }

    pub fn split(&self, alpha: VarIndex) -> Result<(RatFunc, RatFunc, RatFunc)> {
        self.images.get(&alpha).map(Image::split).ok_or(Error::NotFree {
            a: alpha.a(),
            b: alpha.b(),
        })
    }

    /// Substitution rule `u[γ] ↦ R(n_γ)`, for composing with expressions in `u`.
    pub fn u_substitution(&self) -> impl Fn(Var) -> Option<RatFunc> + '_ {
        move |v| match v {
            Var::U(i) => self.image(i).cloned(),
            Var::N(_) => None,
        }
    }
}

pub fn forward_map(w: &Permutation) -> ForwardMap {
    ForwardMap::new(w)
}

pub fn forward_split(w: &Permutation, alpha: VarIndex) -> Result<(RatFunc, RatFunc, RatFunc)> {
    if !w.is_free(alpha.a(), alpha.b()) {
        return Err(Error::NotFree {
            a: alpha.a(),
            b: alpha.b(),
        });
    }
    let graph = PathGraph::for_permutation(w);
    let (od, _) = graph.path_sets(alpha)?;
    let sums = graph.path_sums(alpha)?;
    let img = Image {
        alpha,
        t: od.t,
        weight: graph.destination_weight(&od),
        sums,
        value: RatFunc::zero(),
    };
    Ok(img.split())
}

fn pattern_matrix(w: &Permutation, var: impl Fn(VarIndex) -> RatFunc) -> RatMatrix {
    let pattern = w.pattern();
    let r = w.rank();
    RatMatrix::from_fn(r, r, |i, j| match pattern.get(i + 1, j + 1) {
        CellEntry::Zero => RatFunc::zero(),
        CellEntry::One(_) => RatFunc::one(),
        CellEntry::Var(v) => var(v),
    })
}

/// `wn` with the coordinates `n[a,b]` as entries.
pub fn wn_matrix(w: &Permutation) -> RatMatrix {
    pattern_matrix(w, |v| RatFunc::var(Var::N(v)))
}

/// `wu` with the image coordinates `u[a,b]` left as symbols.
pub fn wu_symbolic(w: &Permutation) -> RatMatrix {
    pattern_matrix(w, |v| RatFunc::var(Var::U(v)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfunc::parse;

    fn perm(s: &str) -> Permutation {
        Permutation::parse(s).unwrap()
    }

    fn v(a: usize, b: usize) -> VarIndex {
        VarIndex::new(a, b)
    }

    fn f(s: &str) -> RatFunc {
        parse(s).unwrap()
    }

    #[test]
    fn small_images() {
        let m = forward_map(&perm("2,1"));
        assert_eq!(m.image(v(1, 2)).unwrap(), &RatFunc::n(1, 2));

        let m = forward_map(&perm("3,2,1"));
        assert_eq!(m.image(v(1, 2)).unwrap(), &f("n[1,3]*(n[1,2]+n[2,3])/n[2,3]"));
        assert_eq!(m.image(v(1, 3)).unwrap(), &f("n[1,3]*n[2,3]"));
        assert_eq!(m.image(v(2, 3)).unwrap(), &f("n[2,3]"));
        assert_eq!(
            m.image(v(1, 2)).unwrap().to_string(),
            "(n[1,2]*n[1,3] + n[1,3]*n[2,3])/n[2,3]"
        );

        let m = forward_map(&perm("2,3,1"));
        assert_eq!(m.image(v(1, 2)).unwrap(), &f("-n[1,2]*n[1,3]"));
        assert_eq!(m.image(v(1, 3)).unwrap(), &f("n[1,3]"));
        assert_eq!(m.len(), 2);
    }

    #[test]
    fn split_examples() {
        let w = perm("3,2,1");
        let (l, a, b) = forward_split(&w, v(1, 2)).unwrap();
        assert_eq!(l, f("n[1,2]*n[1,3]/n[2,3]"));
        assert!(a.is_zero());
        assert_eq!(b, f("n[1,3]"));
        let (l, a, b) = forward_split(&w, v(1, 3)).unwrap();
        assert!(l.is_zero() && a.is_zero());
        assert_eq!(b, f("n[1,3]*n[2,3]"));
        assert!(matches!(forward_split(&w, v(1, 1)), Err(Error::NotFree { .. })));
    }

    #[test]
    fn wu_agrees_with_wn_off_the_free_cells() {
        for w in Permutation::all(4) {
            let m = forward_map(&w);
            let wn = wn_matrix(&w);
            let pattern = w.pattern();
            for i in 0..4 {
                for j in 0..4 {
                    if !matches!(pattern.get(i + 1, j + 1), CellEntry::Var(_)) {
                        assert_eq!(m.wu().get(i, j), wn.get(i, j));
                    }
                }
            }
        }
    }

    #[test]
    fn mutation_changes_one_image() {
        let w = perm("3,2,1");
        let m = ForwardMap::with_mutation(
            &w,
            Mutation {
                alpha: v(1, 2),
                term: 0,
                delta: 1,
            },
        )
        .unwrap();
        let base = forward_map(&w);
        assert_ne!(m.image(v(1, 2)), base.image(v(1, 2)));
        assert_eq!(m.image(v(1, 3)), base.image(v(1, 3)));
        let (l, a, b) = m.split(v(1, 2)).unwrap();
        assert_eq!(&(&(&l + &a) + &b), m.image(v(1, 2)).unwrap());
        let bad = Mutation {
            alpha: v(1, 2),
            term: 2,
            delta: 1,
        };
        assert!(ForwardMap::with_mutation(&w, bad).is_err());
    }
}
