//! Shared inputs for the benchmarks.

use birational_core::Permutation;

/// A fixed spread of elements of rank `r`: the longest element, a Coxeter
/// element and a few seeded samples.
pub fn elements(r: usize) -> Vec<Permutation> {
    let mut out = vec![Permutation::longest(r)];
    let cycle: Vec<usize> = (2..=r).chain([1]).collect();
    out.push(Permutation::new(cycle).expect("valid cycle"));
    out.extend(Permutation::sample(r, 3, 11));
    out
}
