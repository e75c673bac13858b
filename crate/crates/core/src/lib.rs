//! Negation of discrete probability distributions and the uncertainty
//! measures that respond to it.
//!
//! The negation of `P = (p_1, …, p_n)` is `(1 - p_i) / (n - 1)`. This crate
//! provides:
//!
//! - [`Distribution`], a validated point on the probability simplex;
//! - Shannon entropy, Gini entropy, extropy, varentropy and varextropy
//!   ([`measures`]);
//! - negation, its closed-form iterates and convergence traces ([`negation`]);
//! - a registry of claims about how those measures react to negation, and a
//!   seeded randomized engine that confirms or refutes them ([`claims`]);
//! - figure-data sweeps and CSV/JSON renderings ([`report`]).
//!
//! ```
//! use simplex_negation::{measure_all, negate, Distribution};
//!
//! let p: Distribution = "0.4,0.3,0.2,0.1".parse()?;
//! let q = negate(&p);
//! assert!((q.probs()[0] - 0.2).abs() < 1e-15);
//!
//! let (mp, mq) = (measure_all(&p), measure_all(&q));
//! assert!(mq.h > mp.h);      // entropy goes up
//! assert!(mq.vh < mp.vh);    // varentropy goes down
//! # Ok::<(), simplex_negation::Error>(())
//! ```
//!
//! The guide in `book/` walks through the same material with runnable
//! snippets; those snippets are compiled as doc-tests of this crate.

pub mod claims;
mod error;
pub mod measures;
pub mod negation;
pub mod report;
pub mod simplex;

pub use claims::{check_all, check_claim, CheckConfig, ClaimId, ClaimReport, Verdict};
pub use error::{Error, Result};
pub use measures::{
    entropy, extropy, gini_entropy, measure_all, uniform_varextropy, varentropy, varextropy,
    MeasureSet,
};
pub use negation::{negate, negate_k, trace_negation, NegationTrace};
pub use report::{Format, Sweep, SweepRow};
pub use simplex::{majorizes, sample_uniform_simplex, Distribution, SimplexSamplerConfig};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    struct Introduction;
    #[doc = include_str!("../../../book/src/distributions.md")]
    struct Distributions;
    #[doc = include_str!("../../../book/src/measures.md")]
    struct Measures;
    #[doc = include_str!("../../../book/src/negation.md")]
    struct Negation;
    #[doc = include_str!("../../../book/src/claims.md")]
    struct Claims;
    #[doc = include_str!("../../../book/src/cli.md")]
    struct Cli;
}
