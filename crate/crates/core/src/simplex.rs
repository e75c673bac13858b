//! Validated points on the probability simplex.
//!
//! [`Distribution`] is the input to everything else in the crate. It is
//! immutable once built, so validation happens exactly once, at
//! construction.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance on `|sum(p) - 1|`.
pub const SUM_TOLERANCE: f64 = 1e-9;

/// Slack allowed on each partial-sum comparison in [`majorizes`].
pub const MAJORIZATION_SLACK: f64 = 1e-12;

/// A probability distribution over `n >= 2` outcomes.
///
/// Outcomes are identified by index only. Entries may be exactly zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Distribution {
    probs: Vec<f64>,
}

impl Distribution {
    /// Validates `values` as a distribution without touching them.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        validate(&values)?;
        Ok(Self { probs: values })
    }

    /// Builds a distribution, optionally dividing by the sum first.
    ///
    /// Renormalization only applies when every entry is finite and
    /// non-negative and the sum is positive; otherwise the values are
    /// validated as given so the diagnostic names the bad entry.
    pub fn from_values(values: &[f64], renormalize: bool) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::TooFewOutcomes(values.len()));
        }
        if renormalize && values.iter().all(|v| v.is_finite() && *v >= 0.0) {
            let total: f64 = values.iter().sum();
            if total > 0.0 && total.is_finite() {
                return Self::new(values.iter().map(|v| v / total).collect());
            }
        }
        Self::new(values.to_vec())
    }

    /// The uniform distribution `1/n` on `n` outcomes.
    pub fn uniform(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooFewOutcomes(n));
        }
        Ok(Self {
            probs: vec![1.0 / n as f64; n],
        })
    }

    /// Constructor for values already known to lie on the simplex.
    pub(crate) fn from_trusted(probs: Vec<f64>) -> Self {
        debug_assert!(validate(&probs).is_ok(), "{probs:?}");
        Self { probs }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Number of outcomes.
    pub fn n(&self) -> usize {
        self.probs.len()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.probs
    }

    /// Re-runs the construction checks.
    pub fn validate(&self) -> Result<()> {
        validate(&self.probs)
    }

    /// `max_i |p_i - 1/n|`.
    pub fn sup_distance_to_uniform(&self) -> f64 {
        let u = 1.0 / self.n() as f64;
        self.probs.iter().fold(0.0, |acc, p| acc.max((p - u).abs()))
    }

    /// Largest absolute entrywise difference. Both sides must have the same length.
    pub fn sup_distance(&self, other: &Distribution) -> Result<f64> {
        check_dims(self, other)?;
        Ok(self
            .probs
            .iter()
            .zip(&other.probs)
            .fold(0.0, |acc, (a, b)| acc.max((a - b).abs())))
    }
}

fn validate(values: &[f64]) -> Result<()> {
    if values.len() < 2 {
        return Err(Error::TooFewOutcomes(values.len()));
    }
    for (i, &v) in values.iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::NotADistribution(format!(
                "entry {} ({v}) is not finite",
                i + 1
            )));
        }
        if v < 0.0 {
            return Err(Error::NotADistribution(format!(
                "entry {} ({v}) is negative",
                i + 1
            )));
        }
        if v > 1.0 {
            return Err(Error::NotADistribution(format!(
                "entry {} ({v}) exceeds 1",
                i + 1
            )));
        }
    }
    let total: f64 = values.iter().sum();
    if (total - 1.0).abs() > SUM_TOLERANCE {
        return Err(Error::NotADistribution(format!(
            "sum = {total}, which differs from 1 by more than {SUM_TOLERANCE:e}"
        )));
    }
    Ok(())
}

fn check_dims(p: &Distribution, q: &Distribution) -> Result<()> {
    if p.n() != q.n() {
        return Err(Error::DimensionMismatch {
            left: p.n(),
            right: q.n(),
        });
    }
    Ok(())
}

impl TryFrom<Vec<f64>> for Distribution {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Self::new(values)
    }
}

impl From<Distribution> for Vec<f64> {
    fn from(d: Distribution) -> Self {
        d.probs
    }
}

impl AsRef<[f64]> for Distribution {
    fn as_ref(&self) -> &[f64] {
        &self.probs
    }
}

/// Parses a comma-separated list such as `0.4,0.3,0.2,0.1` or a JSON array.
impl FromStr for Distribution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::new(parse_values(s)?)
    }
}

/// Splits a comma list (optionally wrapped in `[...]`) into numbers.
pub fn parse_values(s: &str) -> Result<Vec<f64>> {
    let trimmed = s.trim();
    let inner = trimmed
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .unwrap_or(trimmed);
    inner
        .split(',')
        .enumerate()
        .map(|(i, tok)| {
            let tok = tok.trim();
            tok.parse::<f64>().map_err(|_| {
                Error::NotADistribution(format!("entry {} (`{tok}`) is not a number", i + 1))
            })
        })
        .collect()
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, p) in self.probs.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("]")
    }
}

/// Returns true when `p` majorizes `q`: for every `k`, the `k` largest
/// entries of `p` sum to at least the `k` largest entries of `q`.
///
/// Each comparison allows [`MAJORIZATION_SLACK`] of rounding.
pub fn majorizes(p: &Distribution, q: &Distribution) -> Result<bool> {
    majorizes_within(p, q, MAJORIZATION_SLACK)
}

pub fn majorizes_within(p: &Distribution, q: &Distribution, slack: f64) -> Result<bool> {
    check_dims(p, q)?;
    let mut ps = p.probs.clone();
    let mut qs = q.probs.clone();
    ps.sort_by(|a, b| b.total_cmp(a));
    qs.sort_by(|a, b| b.total_cmp(a));
    let (mut sp, mut sq) = (0.0, 0.0);
    for (a, b) in ps.iter().zip(&qs) {
        sp += a;
        sq += b;
        if sp < sq - slack {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Seeded search space for randomized claim checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplexSamplerConfig {
    pub seed: u64,
    pub n: usize,
    pub trials: u64,
}

impl SimplexSamplerConfig {
    pub fn new(seed: u64, n: usize, trials: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooFewOutcomes(n));
        }
        if trials == 0 {
            return Err(Error::InvalidArgument("trials must be positive".into()));
        }
        Ok(Self { seed, n, trials })
    }

    /// RNG for one trial. The key mixes `(seed, n)` and the ChaCha stream
    /// id is the trial index, so a trial never depends on its neighbours.
    pub fn rng_for(&self, trial_index: u64) -> ChaCha8Rng {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&self.seed.to_le_bytes());
        key[8..16].copy_from_slice(&(self.n as u64).to_le_bytes());
        let mut rng = ChaCha8Rng::from_seed(key);
        rng.set_stream(trial_index);
        rng
    }
}

/// Draws trial `trial_index` from the flat Dirichlet on the `(n-1)`-simplex.
///
/// Uses normalized unit-exponential draws, which is the same law as the
/// gaps between sorted uniforms.
pub fn sample_uniform_simplex(config: &SimplexSamplerConfig, trial_index: u64) -> Result<Distribution> {
    if trial_index >= config.trials {
        return Err(Error::TrialOutOfRange {
            index: trial_index,
            trials: config.trials,
        });
    }
    if config.n < 2 {
        return Err(Error::TooFewOutcomes(config.n));
    }
    let mut rng = config.rng_for(trial_index);
    let draws: Vec<f64> = (0..config.n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = draws.iter().sum();
    Distribution::new(draws.into_iter().map(|x| x / total).collect())
}
