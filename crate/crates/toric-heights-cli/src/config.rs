use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{Result, anyhow, bail};
use serde::{Deserialize, Serialize};
use toric_heights::cyclotomic::{ExponentRule, SequenceKind, SequenceTerm, quasi_strict_sequence};
use toric_heights::heights::ArchOptions;

/// Orders accepted by experiments.
pub const ORDER_RANGE: (u64, u64) = (5, 2500);

/// Inclusive range `a..b` of torsion orders.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeRange {
    pub start: u64,
    pub end: u64,
}

impl FromStr for PrimeRange {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s.split_once("..").ok_or_else(|| anyhow!("expected a..b, got {s:?}"))?;
        let b = b.strip_prefix('=').unwrap_or(b);
        Ok(PrimeRange { start: a.trim().parse()?, end: b.trim().parse()? })
    }
}

/// The only model shipped: `P¹ × P¹` with the canonical `O(1,1)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    #[default]
    P1xP1Canonical,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub problem: Option<PathBuf>,
    pub primes: PrimeRange,
    pub seed: u64,
    /// Ronkin evaluations per Archimedean dual.
    pub budget: u64,
    pub resolution: u32,
    pub out: Option<PathBuf>,
    pub model: Model,
}

impl ExperimentConfig {
    pub fn new(primes: PrimeRange, seed: u64) -> Self {
        let arch = ArchOptions::default();
        ExperimentConfig {
            problem: None,
            primes,
            seed,
            budget: arch.budget,
            resolution: arch.resolution,
            out: None,
            model: Model::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let PrimeRange { start, end } = self.primes;
        if start < ORDER_RANGE.0 || end > ORDER_RANGE.1 || start > end {
            bail!("prime range {start}..{end} must lie within {}..{}", ORDER_RANGE.0, ORDER_RANGE.1);
        }
        if self.budget == 0 || self.resolution == 0 {
            bail!("budgets must be positive");
        }
        Ok(())
    }

    pub fn arch(&self) -> ArchOptions {
        ArchOptions { resolution: self.resolution, budget: self.budget }
    }

    /// `ω = (1, (ζ_N, ζ_N^s))` for every prime `N` in range, `s` seeded.
    pub fn sequence(&self) -> Result<Vec<SequenceTerm>> {
        self.validate()?;
        let kind = SequenceKind::Primes {
            start: self.primes.start,
            end: Some(self.primes.end),
            rule: ExponentRule::Seeded(self.seed),
        };
        Ok(quasi_strict_sequence(&kind, usize::MAX)?)
    }

    /// Prime orders in range.
    pub fn orders(&self) -> Result<Vec<u64>> {
        self.validate()?;
        Ok((self.primes.start..=self.primes.end).filter(|&n| toric_heights::num::is_prime_u64(n)).collect())
    }
}
