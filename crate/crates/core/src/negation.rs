//! Negation `p_i -> (1 - p_i) / (n - 1)` and its iterates.
//!
//! Negation is an affine map on the simplex with the uniform distribution
//! `u` as its only fixed point. In deviation coordinates it is a scaling:
//! `negate(p) - u = -(p - u) / (n - 1)`. For `n = 2` that scale is `-1`,
//! so negation swaps the two entries and never converges; for `n >= 3`
//! iterates approach `u` geometrically.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::{measure_all, MeasureSet};
use crate::simplex::Distribution;

pub const DEFAULT_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_MAX_STEPS: usize = 100;

/// Negated distribution. Every entry lies in `[0, 1/(n-1)]`.
pub fn negate(d: &Distribution) -> Distribution {
    let m = (d.n() - 1) as f64;
    Distribution::from_trusted(d.probs().iter().map(|p| (1.0 - p) / m).collect())
}

/// The `k`-th iterate of [`negate`], via the closed form
/// `1/n + (-1/(n-1))^k (p_i - 1/n)`. `k = 0` returns a copy of `d`.
pub fn negate_k(d: &Distribution, k: u32) -> Distribution {
    if k == 0 {
        return d.clone();
    }
    if k == 1 || (d.n() == 2 && k % 2 == 1) {
        return negate(d);
    }
    if d.n() == 2 {
        return d.clone();
    }
    let n = d.n() as f64;
    let u = 1.0 / n;
    let factor = contraction(d.n(), k);
    let probs = d
        .probs()
        .iter()
        .map(|p| (u + factor * (p - u)).clamp(0.0, 1.0))
        .collect();
    Distribution::from_trusted(probs)
}

/// `(-1/(n-1))^k`, the factor applied to the deviation from uniform after `k` negations.
pub fn contraction(n: usize, k: u32) -> f64 {
    let r = -1.0 / (n - 1) as f64;
    // powi takes i32; for |r| <= 1/2 anything past ~1100 is already 0
    r.powi(k.min(i32::MAX as u32) as i32)
}

/// Entrywise deviation `p_i - 1/n`.
pub fn deviation_from_uniform(d: &Distribution) -> Vec<f64> {
    let u = 1.0 / d.n() as f64;
    d.probs().iter().map(|p| p - u).collect()
}

/// Sup-norm deviation from uniform after `k` negations, computed in
/// deviation coordinates so it stays resolvable below the `1/n` ulp.
pub fn sup_deviation_after(d: &Distribution, k: u32) -> f64 {
    contraction(d.n(), k).abs() * d.sup_distance_to_uniform()
}

/// One recorded iterate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    pub k: usize,
    #[serde(rename = "p")]
    pub dist: Distribution,
    #[serde(flatten)]
    pub measures: MeasureSet,
}

/// Repeated negation of a distribution, with measures at every iterate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NegationTrace {
    pub steps: Vec<TraceStep>,
    pub converged_at: Option<usize>,
    pub tolerance: f64,
}

#[derive(Serialize)]
struct TraceSummary {
    converged_at: Option<usize>,
    tolerance: f64,
}

impl NegationTrace {
    pub fn last(&self) -> &TraceStep {
        self.steps.last().expect("trace always holds the input")
    }

    /// Writes one JSON object per step followed by a summary object.
    pub fn write_jsonl<W: Write>(&self, mut out: W) -> io::Result<()> {
        for step in &self.steps {
            serde_json::to_writer(&mut out, step)?;
            out.write_all(b"\n")?;
        }
        serde_json::to_writer(
            &mut out,
            &TraceSummary {
                converged_at: self.converged_at,
                tolerance: self.tolerance,
            },
        )?;
        out.write_all(b"\n")
    }

    pub fn to_jsonl(&self) -> String {
        let mut buf = Vec::new();
        self.write_jsonl(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("serde_json emits UTF-8")
    }
}

/// Negates `d` repeatedly, recording each iterate, until the sup-norm
/// distance to uniform is at most `tolerance` or `max_steps` negations
/// have been applied.
pub fn trace_negation(d: &Distribution, max_steps: usize, tolerance: f64) -> Result<NegationTrace> {
    if max_steps == 0 {
        return Err(Error::InvalidArgument("max_steps must be at least 1".into()));
    }
    if tolerance <= 0.0 || !tolerance.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive and finite, got {tolerance}"
        )));
    }
    let mut steps = Vec::new();
    let mut current = d.clone();
    let mut converged_at = None;
    for k in 0..=max_steps {
        let measures = measure_all(&current);
        let dist_to_uniform = current.sup_distance_to_uniform();
        let next = negate(&current);
        steps.push(TraceStep {
            k,
            dist: current,
            measures,
        });
        if dist_to_uniform <= tolerance {
            converged_at = Some(k);
            break;
        }
        current = next;
    }
    Ok(NegationTrace {
        steps,
        converged_at,
        tolerance,
    })
}
