use std::cell::OnceCell;
use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::report::{CheckRecord, CheckReport, Part};
use crate::biratmap::{
    diag_closed_form, diagonal_derivative_closed_form, domain_bounds, hat_compatibility, inverse_map, invert_point,
    invert_point_f64, jacobian, k_system, l_matrix_det, level_compatibility, rightmost_column_closed_form,
    superdiag_closed_form, tilde_scaling, udl_decompose, ForwardMap, Jacobian, UdlDecomposition,
};
use crate::error::{Error, Result};
use crate::ratfunc::{rat, RatFunc, Var};
use crate::weyl::{Permutation, VarIndex};

/// Knobs for the numeric parts of the batteries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOptions {
    /// Random rational points per element for the numeric round trip.
    pub points: usize,
    pub seed: u64,
    /// Samples per element for the domain-containment check.
    pub containment_samples: usize,
    /// Half-width of the box for the bounds battery.
    pub m: BigRational,
    /// Largest rank at which the inverse is composed with the forward map symbolically.
    pub symbolic_inverse_max_rank: usize,
    /// Largest rank at which domain containment is sampled.
    pub containment_max_rank: usize,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self {
            points: 50,
            seed: 0,
            containment_samples: 10_000,
            m: rat(1, 1),
            symbolic_inverse_max_rank: 5,
            containment_max_rank: 4,
        }
    }
}

/// Relative slack allowed when comparing floating-point preimages with `h_j`.
const CONTAINMENT_TOL: f64 = 1e-9;

/// Failures listed in a witness before the rest are summarized.
const WITNESS_LIMIT: usize = 3;

fn element_seed(seed: u64, w: &Permutation) -> u64 {
    w.images().iter().fold(seed ^ 0xcbf2_9ce4_8422_2325, |h, &x| {
        (h ^ x as u64).wrapping_mul(0x0100_0000_01b3)
    })
}

fn truncate(mut v: Vec<String>) -> Vec<String> {
    if v.len() > WITNESS_LIMIT {
        let more = v.len() - WITNESS_LIMIT;
        v.truncate(WITNESS_LIMIT);
        v.push(format!("and {more} more"));
    }
    v
}

fn fmt_point(p: &BTreeMap<VarIndex, BigRational>, var: fn(VarIndex) -> Var) -> String {
    let parts: Vec<String> = p.iter().map(|(k, v)| format!("{}={v}", var(*k))).collect();
    format!("({})", parts.join(", "))
}

struct Element<'a> {
    fm: &'a ForwardMap,
    w: &'a Permutation,
    opts: &'a CheckOptions,
    udl: OnceCell<Result<UdlDecomposition>>,
    jac: OnceCell<Result<Jacobian>>,
}

impl<'a> Element<'a> {
    fn udl(&self) -> Result<&UdlDecomposition> {
        self.udl
            .get_or_init(|| udl_decompose(self.fm))
            .as_ref()
            .map_err(Clone::clone)
    }

    fn jac(&self) -> Result<&Jacobian> {
        self.jac
            .get_or_init(|| jacobian(self.fm))
            .as_ref()
            .map_err(Clone::clone)
    }

    fn symbolic_round_trip(&self) -> CheckRecord {
        const NAME: &str = "i.symbolic-round-trip";
        if self.w.rank() > self.opts.symbolic_inverse_max_rank {
            return CheckRecord::skipped(NAME, Part::I, "rank above the symbolic limit");
        }
        let failures = inverse_map(self.w)
            .and_then(|inv| inv.round_trip_failures(self.fm))
            .map(|bad| {
                bad.into_iter()
                    .map(|(a, back)| format!("inverse of n[{a}] composed with the forward map is {back}"))
                    .collect()
            });
        CheckRecord::from_failures(NAME, Part::I, failures.map(truncate))
    }

    fn numeric_round_trip(&self) -> CheckRecord {
        let mut rng = ChaCha8Rng::seed_from_u64(element_seed(self.opts.seed, self.w));
        let free = self.w.free_indices();
        let mut bad = Vec::new();
        for _ in 0..self.opts.points {
            let n: BTreeMap<VarIndex, BigRational> = free
                .iter()
                .map(|&a| {
                    let p: i64 = rng.gen_range(1..=1000) * if rng.gen() { 1 } else { -1 };
                    let q: i64 = rng.gen_range(1..=1000);
                    (a, BigRational::new(BigInt::from(p), BigInt::from(q)))
                })
                .collect();
            let lookup = |v: Var| match v {
                Var::N(i) => n.get(&i).cloned(),
                Var::U(_) => None,
            };
            let result = self
                .fm
                .images()
                .map(|(a, f)| Ok((a, f.eval_with(&lookup)?)))
                .collect::<Result<BTreeMap<_, _>>>()
                .and_then(|u| invert_point(self.w, &u));
            match result {
                Ok(back) if back == n => {}
                Ok(back) => bad.push(format!(
                    "{} maps back to {}",
                    fmt_point(&n, Var::N),
                    fmt_point(&back, Var::N)
                )),
                Err(e) => bad.push(format!("{}: {e}", fmt_point(&n, Var::N))),
            }
        }
        CheckRecord::from_failures("i.numeric-round-trip", Part::I, Ok(truncate(bad)))
    }

    fn superdiagonal(&self) -> CheckRecord {
        let r = self.w.rank();
        let failures = self.udl().map(|udl| {
            (1..r)
                .filter_map(|i| {
                    let want = superdiag_closed_form(self.w, i);
                    let got = &udl.superdiag[i - 1];
                    (got != &want).then(|| format!("x[{i},{}] = {got} but the level sum is {want}", i + 1))
                })
                .collect()
        });
        CheckRecord::from_failures("ii.superdiagonal", Part::II, failures)
    }

    fn diagonal(&self) -> Vec<CheckRecord> {
        let r = self.w.rank();
        let udl = match self.udl() {
            Ok(u) => u,
            Err(e) => {
                return ["iii.diagonal", "iii.diagonal-product", "iii.block-determinants"]
                    .into_iter()
                    .map(|n| CheckRecord::fail(n, Part::III, e.to_string()))
                    .collect()
            }
        };
        let diag = (1..=r)
            .filter_map(|i| {
                let want = diag_closed_form(self.w, i);
                let got = &udl.diag[i - 1];
                (got != &want).then(|| format!("b[{i},{i}] = {got} but the closed form is {want}"))
            })
            .collect();
        let product = udl.diag.iter().fold(RatFunc::one(), |acc, b| &acc * b);
        let sign = RatFunc::integer(self.w.sign().into());
        let product_failures = if product == sign {
            vec![]
        } else {
            vec![format!("product of the diagonal is {product}, det w is {sign}")]
        };
        let blocks = (1..r)
            .filter_map(|i| {
                let want = RatFunc::from_poly(crate::biratmap::delta(self.w, i))
                    .scale(&rat(l_matrix_det(self.w, r - i).into(), 1));
                let got = &udl.t_dets[i];
                (got != &want).then(|| format!("det T_{i} = {got} but det L_{} * Delta_{i} = {want}", r - i))
            })
            .collect();
        vec![
            CheckRecord::from_failures("iii.diagonal", Part::III, Ok(diag)),
            CheckRecord::from_failures("iii.diagonal-product", Part::III, Ok(product_failures)),
            CheckRecord::from_failures("iii.block-determinants", Part::III, Ok(blocks)),
        ]
    }

    fn triangular(&self, name: &str, part: Part) -> CheckRecord {
        let failures = self.jac().map(|j| {
            let d = j.order.len();
            let mut bad = Vec::new();
            for row in 0..d {
                for col in 0..row {
                    let e = j.matrix.get(row, col);
                    if !e.is_zero() {
                        bad.push(format!("d u[{}] / d n[{}] = {e}", j.order[row], j.order[col]));
                    }
                }
            }
            truncate(bad)
        });
        CheckRecord::from_failures(name, part, failures)
    }

    fn jacobian_determinant(&self) -> Vec<CheckRecord> {
        let j = match self.jac() {
            Ok(j) => j,
            Err(e) => {
                return ["iv.determinant", "iv.diagonal-product"]
                    .into_iter()
                    .map(|n| CheckRecord::fail(n, Part::IV, e.to_string()))
                    .collect()
            }
        };
        let det = if j.det == j.predicted {
            vec![]
        } else {
            vec![format!(
                "det = {} but (-1)^t_w * prod n^(b-a-1) = {}",
                j.det, j.predicted
            )]
        };
        let diag = if j.diagonal_product == j.det {
            vec![]
        } else {
            vec![format!(
                "diagonal product {} differs from det {}",
                j.diagonal_product, j.det
            )]
        };
        vec![
            CheckRecord::from_failures("iv.determinant", Part::IV, Ok(det)),
            CheckRecord::from_failures("iv.diagonal-product", Part::IV, Ok(diag)),
        ]
    }

    fn diagonal_derivative(&self, name: &str, part: Part) -> CheckRecord {
        let failures = self.jac().map(|j| {
            j.order
                .iter()
                .enumerate()
                .filter_map(|(i, &a)| {
                    let want = diagonal_derivative_closed_form(self.w, a);
                    let got = j.matrix.get(i, i);
                    (got != &want).then(|| format!("d u[{a}] / d n[{a}] = {got} but the closed form is {want}"))
                })
                .collect()
        });
        CheckRecord::from_failures(name, part, failures.map(truncate))
    }

    fn partition(&self, name: &str, part: Part) -> CheckRecord {
        let failures = self
            .fm
            .images()
            .map(|(a, u)| {
                let (l, p1, p2) = self.fm.split(a)?;
                let sum = &(&l + &p1) + &p2;
                Ok((&sum != u).then(|| format!("R_L + R_1 + R_2 at n[{a}] is {sum} but R is {u}")))
            })
            .collect::<Result<Vec<Option<String>>>>()
            .map(|v| truncate(v.into_iter().flatten().collect()));
        CheckRecord::from_failures(name, part, failures)
    }

    fn k_determinant(&self) -> CheckRecord {
        let failures = self
            .w
            .free_indices()
            .into_iter()
            .map(|a| {
                let k = k_system(self.fm, a)?;
                let want = k.shape.predicted_det();
                Ok((k.det_k != want)
                    .then(|| format!("det K(n[{a}]) = {} but det kappa * prod K_det = {want}", k.det_k)))
            })
            .collect::<Result<Vec<Option<String>>>>()
            .map(|v| truncate(v.into_iter().flatten().collect()));
        CheckRecord::from_failures("id.k-determinant", Part::Identities, failures)
    }

    fn reductions(&self) -> Vec<CheckRecord> {
        const NAMES: [&str; 3] = ["id.hat", "id.tilde", "id.levels"];
        if self.w.rank() < 2 {
            return NAMES
                .into_iter()
                .map(|n| CheckRecord::skipped(n, Part::Identities, "rank 1 has no reduction"))
                .collect();
        }
        vec![
            CheckRecord::from_failures(NAMES[0], Part::Identities, hat_compatibility(self.fm).map(truncate)),
            CheckRecord::from_failures(NAMES[1], Part::Identities, tilde_scaling(self.fm).map(truncate)),
            CheckRecord::from_failures(NAMES[2], Part::Identities, level_compatibility(self.w).map(truncate)),
        ]
    }

    fn identities(&self) -> Vec<CheckRecord> {
        let mut out = vec![
            self.diagonal_derivative("id.diagonal-derivative", Part::Identities),
            CheckRecord::from_failures(
                "id.rightmost-column",
                Part::Identities,
                Ok(truncate(rightmost_column_closed_form(self.fm))),
            ),
            self.k_determinant(),
            self.partition("id.partition", Part::Identities),
        ];
        out.extend(self.reductions());
        out
    }

    fn bounds_structure(&self) -> CheckRecord {
        let failures = domain_bounds(self.fm, &self.opts.m).map(|b| truncate(b.structural_violations()));
        CheckRecord::from_failures("bounds.structure", Part::Bounds, failures)
    }

    fn containment(&self) -> CheckRecord {
        const NAME: &str = "bounds.containment";
        if self.w.rank() > self.opts.containment_max_rank {
            return CheckRecord::skipped(NAME, Part::Bounds, "rank above the sampling limit");
        }
        let bounds = match domain_bounds(self.fm, &self.opts.m) {
            Ok(b) => b,
            Err(e) => return CheckRecord::fail(NAME, Part::Bounds, e.to_string()),
        };
        let m = self.opts.m.to_f64().expect("finite bound");
        let free = self.w.free_indices();
        let mut rng = ChaCha8Rng::seed_from_u64(element_seed(self.opts.seed.wrapping_add(1), self.w));
        let mut bad = Vec::new();
        for _ in 0..self.opts.containment_samples {
            let u: BTreeMap<VarIndex, f64> = free.iter().map(|&a| (a, rng.gen_range(-m..m))).collect();
            let Ok(n) = invert_point_f64(self.w, &u) else {
                continue;
            };
            if n.values().any(|x| *x == 0.0 || !x.is_finite()) {
                continue;
            }
            if let Some(j) = bounds.first_violation(&n, CONTAINMENT_TOL) {
                let pt: Vec<String> = u.iter().map(|(k, v)| format!("u[{k}]={v:e}")).collect();
                bad.push(format!(
                    "|n[{}]| exceeds h_{j} at ({})",
                    bounds.entries[j - 1].beta,
                    pt.join(", ")
                ));
            }
        }
        CheckRecord::from_failures(NAME, Part::Bounds, Ok(truncate(bad)))
    }
}

/// Runs the selected batteries against a given forward map, which may be
/// mutated; every other object is rebuilt from the permutation.
pub fn verify_forward(fm: &ForwardMap, parts: &[Part], opts: &CheckOptions) -> CheckReport {
    let start = Instant::now();
    let el = Element {
        fm,
        w: fm.permutation(),
        opts,
        udl: OnceCell::new(),
        jac: OnceCell::new(),
    };
    let mut parts = parts.to_vec();
    parts.sort();
    parts.dedup();
    let mut records = Vec::new();
    for p in parts {
        match p {
            Part::I => {
                records.push(el.symbolic_round_trip());
                records.push(el.numeric_round_trip());
            }
            Part::II => records.push(el.superdiagonal()),
            Part::III => records.extend(el.diagonal()),
            Part::IV => {
                records.push(el.triangular("iv.triangular", Part::IV));
                records.extend(el.jacobian_determinant());
            }
            Part::VConsequences => {
                records.push(el.triangular("v.triangular", Part::VConsequences));
                records.push(el.diagonal_derivative("v.diagonal-derivative", Part::VConsequences));
                records.push(el.partition("v.partition", Part::VConsequences));
            }
            Part::Identities => records.extend(el.identities()),
            Part::Bounds => {
                records.push(el.bounds_structure());
                records.push(el.containment());
            }
        }
    }
    CheckReport {
        perm: el.w.one_line(),
        records,
        elapsed: start.elapsed(),
    }
}

pub fn verify_element_with(w: &Permutation, parts: &[Part], opts: &CheckOptions) -> CheckReport {
    verify_forward(&ForwardMap::new(w), parts, opts)
}

pub fn verify_element(w: &Permutation, parts: &[Part]) -> CheckReport {
    verify_element_with(w, parts, &CheckOptions::default())
}

/// Reduction compatibility, level compatibility and domain containment.
pub fn cross_checks(w: &Permutation, opts: &CheckOptions) -> Result<CheckReport> {
    if w.rank() < 2 {
        return Err(Error::NoReduction);
    }
    let start = Instant::now();
    let fm = ForwardMap::new(w);
    let el = Element {
        fm: &fm,
        w,
        opts,
        udl: OnceCell::new(),
        jac: OnceCell::new(),
    };
    let mut records = el.reductions();
    records.push(el.containment());
    Ok(CheckReport {
        perm: w.one_line(),
        records,
        elapsed: start.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::CheckStatus;

    fn perm(s: &str) -> Permutation {
        Permutation::parse(s).unwrap()
    }

    #[test]
    fn longest_three_selected_parts() {
        let rep = verify_element(&perm("3,2,1"), &[Part::II, Part::III, Part::IV]);
        assert!(rep.passed(), "{rep:?}");
        let names: Vec<&str> = rep.records.iter().map(|r| r.name.as_str()).collect();
        assert_eq!(
            names,
            [
                "ii.superdiagonal",
                "iii.diagonal",
                "iii.diagonal-product",
                "iii.block-determinants",
                "iv.triangular",
                "iv.determinant",
                "iv.diagonal-product"
            ]
        );
    }

    #[test]
    fn rank_two_all_parts() {
        let opts = CheckOptions {
            containment_samples: 200,
            ..CheckOptions::default()
        };
        let rep = verify_element_with(&perm("2,1"), &Part::ALL, &opts);
        assert!(rep.passed(), "{rep:?}");
        assert!(rep.records.iter().all(|r| r.status == CheckStatus::Pass));
    }

    #[test]
    fn five_by_five_identities() {
        let rep = verify_element(&perm("2,5,4,1,3"), &[Part::Identities]);
        assert!(rep.passed(), "{rep:?}");
        for name in [
            "id.k-determinant",
            "id.rightmost-column",
            "id.hat",
            "id.tilde",
            "id.partition",
        ] {
            assert_eq!(rep.get(name).unwrap().status, CheckStatus::Pass, "{name}");
        }
    }

    #[test]
    fn cross_checks_small() {
        let rep = cross_checks(&perm("3,2,1"), &CheckOptions::default()).unwrap();
        assert!(rep.passed(), "{rep:?}");
        assert_eq!(rep.get("bounds.containment").unwrap().status, CheckStatus::Pass);
        assert!(cross_checks(&perm("1"), &CheckOptions::default()).is_err());
    }

    #[test]
    fn rank_one_skips_reductions() {
        let rep = verify_element(&perm("1"), &Part::ALL);
        assert!(rep.passed());
        assert_eq!(rep.get("id.hat").unwrap().status, CheckStatus::Skipped);
    }
}
