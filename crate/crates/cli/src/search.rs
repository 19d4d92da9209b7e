//! The triple search: sieve, congruence filtering, staged evaluation in a
//! worker pool, deterministic emission.

use anyhow::{bail, Context, Result};
use rayon::prelude::*;

use quadclass::arith;

use crate::record::{evaluate_triple, PredictionDepth, TripleRecord};

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub max_prime: u64,
    /// 1, 2, or both.
    pub etas: Vec<u64>,
    pub depth: PredictionDepth,
    pub digit_cap: u64,
    /// 0 = library default.
    pub workers: usize,
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_prime < 13 {
            bail!("--max-prime must be at least 13");
        }
        if self.digit_cap < 1000 {
            bail!("--digit-cap must be at least 1000");
        }
        if self.etas.is_empty() || self.etas.iter().any(|&e| e != 1 && e != 2) {
            bail!("eta must be 1, 2 or both");
        }
        Ok(())
    }
}

/// Enumerate candidates in lexicographic (eta, q, r, s) order and evaluate
/// them in parallel. The output order does not depend on the worker count.
pub fn run_search(config: &SearchConfig) -> Result<Vec<TripleRecord>> {
    config.validate()?;
    let primes = arith::primes_below(config.max_prime);
    let qs: Vec<u64> = primes.iter().copied().filter(|p| p % 4 == 3).collect();
    let rs: Vec<u64> = primes.iter().copied().filter(|p| p % 8 == 5).collect();

    let mut etas = config.etas.clone();
    etas.sort_unstable();
    etas.dedup();

    let mut candidates = Vec::new();
    for &eta in &etas {
        for &q in &qs {
            for (i, &r) in rs.iter().enumerate() {
                for &s in &rs[i + 1..] {
                    candidates.push((eta, q, r, s));
                }
            }
        }
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .context("building worker pool")?;
    let depth = config.depth;
    let cap = config.digit_cap;
    let records: Result<Vec<TripleRecord>> = pool.install(|| {
        candidates
            .par_iter()
            .map(|&(eta, q, r, s)| {
                evaluate_triple(q, r, s, eta, cap, depth)
                    .with_context(|| format!("evaluating ({q}, {r}, {s}, eta = {eta})"))
            })
            .collect()
    });
    records
}
