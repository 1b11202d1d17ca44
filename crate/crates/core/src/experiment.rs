//! Seeded random search over extension moduli.
//!
//! Sample `i` draws from `ChaCha8Rng::seed_from_u64(seed)` switched to stream
//! `i`, so every record depends only on `(seed, i)` and not on how samples
//! are spread over workers.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::l_value;
use crate::codes::{check_family, construct_with_rng, default_q, ConstructOptions};
use crate::error::{Error, Result};
use crate::mdp::{is_mdp, nontrivial_count, ColumnIndexSet, MdpOptions};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExperimentConfig {
    pub n: usize,
    pub k: usize,
    /// Extension degree; defaults to `n - k`.
    pub d: Option<usize>,
    pub samples: usize,
    pub seed: u64,
    pub q_override: Option<u64>,
    /// Worker threads; 0 uses the current pool.
    pub parallelism: usize,
}

impl ExperimentConfig {
    pub fn new(n: usize, k: usize, samples: usize, seed: u64) -> Self {
        Self {
            n,
            k,
            d: None,
            samples,
            seed,
            q_override: None,
            parallelism: 0,
        }
    }

    pub fn degree(&self) -> usize {
        self.d.unwrap_or(self.n.saturating_sub(self.k))
    }

    pub fn q(&self) -> u64 {
        self.q_override.unwrap_or_else(|| default_q(self.n, self.k))
    }

    /// Determinants needed in the worst case (every sample MDP).
    pub fn estimated_cost(&self) -> u128 {
        let window = l_value(self.n, self.k, self.n - self.k);
        nontrivial_count(self.n, self.k, window) * self.samples as u128
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SampleRecord {
    pub index: usize,
    /// Modulus of `F_{q^d}`, one `F_q` digit vector per coefficient; empty when `d = 1`.
    pub f: Vec<Vec<u16>>,
    pub is_mdp: bool,
    pub witness: Option<ColumnIndexSet>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Proportion {
    pub numerator: u64,
    pub denominator: u64,
}

impl Proportion {
    /// Rounded half up to three places.
    pub fn decimal(&self) -> String {
        let thousandths = (2000 * self.numerator as u128 + self.denominator as u128) / (2 * self.denominator as u128);
        format!("{}.{:03}", thousandths / 1000, thousandths % 1000)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub q: u64,
    pub d: usize,
    pub minors_per_sample: u128,
    pub records: Vec<SampleRecord>,
    pub proportion: Proportion,
    pub proportion_decimal: String,
    pub wall_time_secs: f64,
}

fn run_sample(cfg: &ExperimentConfig, index: usize) -> Result<SampleRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(index as u64);
    let opts = ConstructOptions {
        q: cfg.q_override,
        d: Some(cfg.degree()),
        ..Default::default()
    };
    let code = construct_with_rng(cfg.n, cfg.k, &opts, &mut rng)?;
    let t = code.tower();
    let f = t
        .f()
        .map(|f| f.coeffs().iter().map(|&c| t.base().digits(c)).collect())
        .unwrap_or_default();
    let verdict = is_mdp(&code, &MdpOptions::default());
    Ok(SampleRecord {
        index,
        f,
        is_mdp: verdict.is_mdp,
        witness: verdict.witness,
    })
}

/// Runs the search, refusing when the worst-case determinant count exceeds `budget`.
pub fn run_search(cfg: &ExperimentConfig, budget: u128) -> Result<ExperimentReport> {
    if cfg.samples == 0 {
        return Err(Error::Usage("samples must be at least 1".into()));
    }
    check_family(cfg.n, cfg.k)?;
    if cfg.degree() == 0 {
        return Err(Error::Parameter("extension degree must be at least 1".into()));
    }
    let cost = cfg.estimated_cost();
    if cost > budget {
        return Err(Error::Capacity(format!(
            "search needs up to {cost} determinants, budget is {budget}"
        )));
    }
    let start = Instant::now();
    let run = || {
        (0..cfg.samples)
            .into_par_iter()
            .map(|i| run_sample(cfg, i))
            .collect::<Result<Vec<_>>>()
    };
    let records = if cfg.parallelism == 0 {
        run()?
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.parallelism)
            .build()
            .map_err(|e| Error::Usage(format!("thread pool: {e}")))?
            .install(run)?
    };
    let proportion = Proportion {
        numerator: records.iter().filter(|r| r.is_mdp).count() as u64,
        denominator: cfg.samples as u64,
    };
    Ok(ExperimentReport {
        q: cfg.q(),
        d: cfg.degree(),
        minors_per_sample: cost / cfg.samples as u128,
        records,
        proportion_decimal: proportion.decimal(),
        proportion,
        wall_time_secs: start.elapsed().as_secs_f64(),
        config: cfg.clone(),
    })
}
