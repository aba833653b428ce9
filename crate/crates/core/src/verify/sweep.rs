use std::fmt;
use std::time::Instant;

use rayon::prelude::*;

use super::checks::{verify_element_with, verify_forward, CheckOptions};
use super::report::{Part, SweepReport};
use crate::biratmap::{ForwardMap, Mutation};
use crate::error::{Error, Result};
use crate::weyl::{Permutation, MAX_RANK};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepMode {
    Exhaustive,
    Sample { count: usize, seed: u64 },
}

impl fmt::Display for SweepMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SweepMode::Exhaustive => f.write_str("exhaustive"),
            SweepMode::Sample { count, seed } => write!(f, "sample(count={count}, seed={seed})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepConfig {
    pub r: usize,
    pub mode: SweepMode,
    pub parts: Vec<Part>,
    pub options: CheckOptions,
}

impl SweepConfig {
    pub fn exhaustive(r: usize, parts: &[Part]) -> Self {
        Self {
            r,
            mode: SweepMode::Exhaustive,
            parts: parts.to_vec(),
            options: CheckOptions::default(),
        }
    }

    pub fn sample(r: usize, count: usize, seed: u64, parts: &[Part]) -> Self {
        Self {
            mode: SweepMode::Sample { count, seed },
            ..Self::exhaustive(r, parts)
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.r == 0 || self.r > MAX_RANK {
            return Err(Error::RankOutOfRange(self.r));
        }
        if let SweepMode::Sample { count: 0, .. } = self.mode {
            return Err(Error::InvalidParameter("sample count must be at least 1".into()));
        }
        if self.parts.is_empty() {
            return Err(Error::InvalidParameter("no parts selected".into()));
        }
        Ok(())
    }

    /// The Weyl elements the sweep visits, in lexicographic order.
    pub fn elements(&self) -> Vec<Permutation> {
        match self.mode {
            SweepMode::Exhaustive => Permutation::all(self.r).collect(),
            SweepMode::Sample { count, seed } => Permutation::sample(self.r, count, seed),
        }
    }
}

pub fn verify_sweep(config: &SweepConfig) -> Result<SweepReport> {
    config.validate()?;
    let start = Instant::now();
    let mut parts = config.parts.clone();
    parts.sort();
    parts.dedup();
    let mut reports: Vec<_> = config
        .elements()
        .par_iter()
        .map(|w| verify_element_with(w, &parts, &config.options))
        .collect();
    reports.sort_by(|a, b| a.perm.cmp(&b.perm));
    Ok(SweepReport::aggregate(
        config.r,
        config.mode.to_string(),
        parts,
        reports,
        start.elapsed(),
    ))
}

/// Outcome of perturbing every path-sum coefficient of every element of a rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MutationReport {
    pub mutations: usize,
    pub caught: usize,
    /// Mutations under which every check still passed.
    pub survivors: Vec<(Permutation, Mutation)>,
    /// Elements with at least one free variable.
    pub elements: usize,
}

impl MutationReport {
    pub fn all_caught(&self) -> bool {
        self.survivors.is_empty()
    }
}

/// Adds `delta` to each coefficient of each `P(α)` in turn and reruns the
/// selected batteries on the perturbed map.
pub fn mutation_sweep(r: usize, delta: i64, parts: &[Part], opts: &CheckOptions) -> Result<MutationReport> {
    if r == 0 || r > MAX_RANK {
        return Err(Error::RankOutOfRange(r));
    }
    let elements: Vec<Permutation> = Permutation::all(r).filter(|w| !w.free_indices().is_empty()).collect();
    let jobs: Vec<(Permutation, Mutation)> = elements
        .iter()
        .flat_map(|w| {
            let fm = ForwardMap::new(w);
            w.free_indices()
                .into_iter()
                .flat_map(|alpha| {
                    let terms = fm.entry(alpha).expect("free variable").sums.full.len();
                    (0..terms).map(move |term| Mutation { alpha, term, delta })
                })
                .map(|m| (w.clone(), m))
                .collect::<Vec<_>>()
        })
        .collect();
    let outcomes: Vec<Result<bool>> = jobs
        .par_iter()
        .map(|(w, m)| Ok(verify_forward(&ForwardMap::with_mutation(w, *m)?, parts, opts).passed()))
        .collect();
    let mut survivors = Vec::new();
    for (job, survived) in jobs.iter().zip(outcomes) {
        if survived? {
            survivors.push(job.clone());
        }
    }
    Ok(MutationReport {
        mutations: jobs.len(),
        caught: jobs.len() - survivors.len(),
        survivors,
        elements: elements.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_four_sweep() {
        let mut cfg = SweepConfig::exhaustive(4, &Part::ALL);
        cfg.options.containment_samples = 500;
        let rep = verify_sweep(&cfg).unwrap();
        assert_eq!(rep.elements, 24);
        assert!(rep.all_passed(), "{}", rep.summary());
        assert!(rep.summary().ends_with("24/24 pass\n"));
        let perms: Vec<&str> = rep.reports.iter().map(|r| r.perm.as_str()).collect();
        let mut sorted = perms.clone();
        sorted.sort();
        assert_eq!(perms, sorted);
    }

    #[test]
    fn config_validation() {
        assert!(SweepConfig::sample(4, 0, 1, &[Part::II]).validate().is_err());
        assert!(SweepConfig::exhaustive(0, &[Part::II]).validate().is_err());
        assert!(SweepConfig::exhaustive(3, &[]).validate().is_err());
        let rep = verify_sweep(&SweepConfig::sample(5, 7, 3, &[Part::II])).unwrap();
        assert_eq!(rep.elements, 7);
        assert_eq!(rep.mode, "sample(count=7, seed=3)");
    }

    #[test]
    fn mutations_rank_three_are_caught() {
        let opts = CheckOptions {
            containment_samples: 100,
            points: 5,
            ..CheckOptions::default()
        };
        let rep = mutation_sweep(3, 1, &Part::ALL, &opts).unwrap();
        assert_eq!(rep.elements, 5);
        assert!(rep.all_caught(), "{:?}", rep.survivors);
    }
}
