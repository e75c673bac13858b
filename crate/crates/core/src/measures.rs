//! Entropy-family uncertainty measures on a [`Distribution`].
//!
//! All logarithms are natural (nats). Boundary terms follow `0 * ln 0 = 0`
//! and `0 * (ln 0)^2 = 0`, for `p_i = 0` in the entropy side and for
//! `p_i = 1` in the extropy side. Sums accumulate left to right in index
//! order with Neumaier compensation, so results are bit-stable for a
//! given input and stay within a few ulps of the exact sum at large `n`.

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::simplex::Distribution;

/// Noise floor below zero that [`varentropy`] clamps away.
pub const VARENTROPY_CLAMP: f64 = 1e-12;

/// The five measures evaluated on one distribution.
///
/// Serializes as `{"H":…,"H1":…,"J":…,"VH":…,"VJ":…}` in that key order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureSet {
    /// Shannon entropy.
    #[serde(rename = "H")]
    pub h: f64,
    /// Gini (quadratic) entropy `1 - sum p_i^2`.
    #[serde(rename = "H1")]
    pub h1: f64,
    /// Extropy.
    #[serde(rename = "J")]
    pub j: f64,
    /// Varentropy, the variance of `-ln p_i` under `p`.
    #[serde(rename = "VH")]
    pub vh: f64,
    /// Varextropy. The weights `1 - p_i` sum to `n - 1`, so this can be negative.
    #[serde(rename = "VJ")]
    pub vj: f64,
}

impl MeasureSet {
    /// Converts logarithmic measures to bits. Display only.
    pub fn in_bits(&self) -> Self {
        Self {
            h: self.h / LN_2,
            h1: self.h1,
            j: self.j / LN_2,
            vh: self.vh / (LN_2 * LN_2),
            vj: self.vj / (LN_2 * LN_2),
        }
    }

    /// Values in serialization order.
    pub fn to_array(&self) -> [f64; 5] {
        [self.h, self.h1, self.j, self.vh, self.vj]
    }

    pub const NAMES: [&'static str; 5] = ["H", "H1", "J", "VH", "VJ"];

    /// Largest absolute difference over the five fields.
    pub fn max_abs_diff(&self, other: &MeasureSet) -> f64 {
        self.to_array()
            .iter()
            .zip(other.to_array())
            .fold(0.0, |acc, (a, b)| acc.max((a - b).abs()))
    }
}

/// Compensated running sum (Neumaier's variant of Kahan summation).
#[derive(Debug, Clone, Copy, Default)]
struct Sum {
    total: f64,
    carry: f64,
}

impl Sum {
    #[inline]
    fn add(&mut self, x: f64) {
        let t = self.total + x;
        if self.total.abs() >= x.abs() {
            self.carry += (self.total - t) + x;
        } else {
            self.carry += (x - t) + self.total;
        }
        self.total = t;
    }

    #[inline]
    fn value(self) -> f64 {
        self.total + self.carry
    }
}

fn sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut s = Sum::default();
    values.for_each(|x| s.add(x));
    s.value()
}

// x ln x with 0 ln 0 = 0
#[inline]
fn xlnx(x: f64) -> f64 {
    if x > 0.0 {
        x * x.ln()
    } else {
        0.0
    }
}

// (1-p) ln(1-p), accurate for small p; zero when p = 1
#[inline]
fn comp_ln(p: f64) -> (f64, f64) {
    let q = 1.0 - p;
    if q > 0.0 {
        let l = (-p).ln_1p();
        (q, l)
    } else {
        (0.0, 0.0)
    }
}

/// Shannon entropy `-sum p_i ln p_i`.
pub fn entropy(d: &Distribution) -> f64 {
    let s = sum(d.probs().iter().map(|&p| xlnx(p)));
    // -0.0 for degenerate inputs
    (-s).max(0.0)
}

/// Gini entropy `1 - sum p_i^2`.
pub fn gini_entropy(d: &Distribution) -> f64 {
    let sq = sum(d.probs().iter().map(|p| p * p));
    (1.0 - sq).max(0.0)
}

/// Extropy `-sum (1 - p_i) ln(1 - p_i)`.
pub fn extropy(d: &Distribution) -> f64 {
    let s = sum(d.probs().iter().map(|&p| {
        let (q, l) = comp_ln(p);
        q * l
    }));
    (-s).max(0.0)
}

/// Varentropy `sum p_i (ln p_i)^2 - (sum p_i ln p_i)^2`.
///
/// Evaluated in the centered form `sum p_i (ln p_i + H)^2`, which equals
/// the raw form on the simplex and cannot go negative through cancellation.
pub fn varentropy(d: &Distribution) -> f64 {
    varentropy_centered(d, entropy(d))
}

fn varentropy_centered(d: &Distribution, h: f64) -> f64 {
    let v = sum(d.probs().iter().map(|&p| {
        if p > 0.0 {
            let c = p.ln() + h;
            p * c * c
        } else {
            0.0
        }
    }));
    if v < 0.0 && v > -VARENTROPY_CLAMP {
        0.0
    } else {
        v
    }
}

/// Varextropy `sum (1-p_i)(ln(1-p_i))^2 - (sum (1-p_i) ln(1-p_i))^2`, unclamped.
pub fn varextropy(d: &Distribution) -> f64 {
    let (mut first, mut second) = (Sum::default(), Sum::default());
    for &p in d.probs() {
        let (q, l) = comp_ln(p);
        second.add(q * l * l);
        first.add(q * l);
    }
    let first = first.value();
    second.value() - first * first
}

/// All five measures.
pub fn measure_all(d: &Distribution) -> MeasureSet {
    let (mut plnp, mut sq, mut qlq, mut qlq2) = (Sum::default(), Sum::default(), Sum::default(), Sum::default());
    for &p in d.probs() {
        plnp.add(xlnx(p));
        sq.add(p * p);
        let (q, l) = comp_ln(p);
        qlq.add(q * l);
        qlq2.add(q * l * l);
    }
    let (plnp, sq, qlq, qlq2) = (plnp.value(), sq.value(), qlq.value(), qlq2.value());
    let h = (-plnp).max(0.0);
    MeasureSet {
        h,
        h1: (1.0 - sq).max(0.0),
        j: (-qlq).max(0.0),
        vh: varentropy_centered(d, h),
        vj: qlq2 - qlq * qlq,
    }
}

/// Varextropy of `uniform(n)` in closed form:
/// `n(1-1/n) ln(1-1/n)^2 - (n(1-1/n) ln(1-1/n))^2`.
pub fn uniform_varextropy(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::TooFewOutcomes(n));
    }
    let nf = n as f64;
    let w = nf * (1.0 - 1.0 / nf);
    let l = (-1.0 / nf).ln_1p();
    Ok(w * l * l - (w * l).powi(2))
}

#[cfg(test)]
#[allow(clippy::approx_constant)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    use crate::simplex::{sample_uniform_simplex, SimplexSamplerConfig};

    fn d(v: &[f64]) -> Distribution {
        Distribution::new(v.to_vec()).unwrap()
    }

    // Independent reference straight from the raw definitions.
    fn raw(p: &[f64]) -> [f64; 5] {
        let mut h = 0.0;
        let mut vh2 = 0.0;
        let mut j = 0.0;
        let mut vj2 = 0.0;
        let mut sq = 0.0;
        for &x in p {
            if x > 0.0 {
                h -= x * x.ln();
                vh2 += x * x.ln().powi(2);
            }
            if x < 1.0 {
                let q = 1.0 - x;
                j -= q * q.ln();
                vj2 += q * q.ln().powi(2);
            }
            sq += x * x;
        }
        [h, 1.0 - sq, j, vh2 - h * h, vj2 - j * j]
    }

    #[test]
    fn example_3a_values() {
        let p = d(&[0.4, 0.3, 0.2, 0.1]);
        assert_abs_diff_eq!(entropy(&p), 1.2799, epsilon = 1e-4);
        assert_abs_diff_eq!(extropy(&p), 0.8295, epsilon = 1e-4);
        assert_abs_diff_eq!(varentropy(&p), 0.1809, epsilon = 1e-4);
        assert_abs_diff_eq!(varextropy(&p), -0.3926, epsilon = 1e-3);
        assert_abs_diff_eq!(gini_entropy(&p), 0.70, epsilon = 1e-12);
        let m = measure_all(&p);
        assert_abs_diff_eq!(m.h, 1.2799, epsilon = 1e-4);
        assert_abs_diff_eq!(m.j, 0.8295, epsilon = 1e-4);
        assert_abs_diff_eq!(m.vh, 0.1809, epsilon = 1e-4);
        assert_abs_diff_eq!(m.vj, -0.3926, epsilon = 1e-4);
        assert_abs_diff_eq!(m.h1, 0.70, epsilon = 1e-12);
    }

    #[test]
    fn example_3b_values() {
        let p = d(&[0.6, 0.3, 0.1]);
        assert_abs_diff_eq!(varentropy(&p), 0.3153, epsilon = 1e-4);
        assert_abs_diff_eq!(varextropy(&p), -0.0707, epsilon = 1e-4);
        assert_abs_diff_eq!(entropy(&p), 0.8979, epsilon = 1e-4);
    }

    #[test]
    fn two_point_values() {
        let half = d(&[0.5, 0.5]);
        assert_abs_diff_eq!(entropy(&half), std::f64::consts::LN_2, epsilon = 1e-15);
        assert_abs_diff_eq!(extropy(&half), std::f64::consts::LN_2, epsilon = 1e-15);
        assert_eq!(varentropy(&half), 0.0);
        assert_eq!(varextropy(&half), 0.0);
    }

    #[test]
    fn degenerate_distribution() {
        for p in [d(&[1.0, 0.0]), d(&[0.0, 1.0]), d(&[0.0, 0.0, 1.0])] {
            let m = measure_all(&p);
            assert_eq!(m.to_array(), [0.0; 5], "{p}");
        }
    }

    #[test]
    fn uniform_fixtures() {
        for n in 2..=100 {
            let u = Distribution::uniform(n).unwrap();
            let m = measure_all(&u);
            assert_abs_diff_eq!(m.h, (n as f64).ln(), epsilon = 1e-12);
            assert_abs_diff_eq!(m.h1, 1.0 - 1.0 / n as f64, epsilon = 1e-12);
            assert!(m.vh.abs() <= 1e-12, "n={n} vh={}", m.vh);
        }
        let m3 = measure_all(&Distribution::uniform(3).unwrap());
        assert_abs_diff_eq!(m3.h, 3f64.ln(), epsilon = 1e-15);
        // The defining formula gives 2 ln(2/3)^2 - 4 ln(2/3)^2 = -2 ln(2/3)^2 here.
        let l = (2.0f64 / 3.0).ln();
        assert_abs_diff_eq!(m3.vj, -2.0 * l * l, epsilon = 1e-14);
        assert_abs_diff_eq!(m3.vj, -0.3288, epsilon = 1e-4);
    }

    #[test]
    fn closed_form_uniform_varextropy() {
        assert_eq!(uniform_varextropy(2).unwrap(), 0.0);
        assert_abs_diff_eq!(uniform_varextropy(3).unwrap(), -0.328_803_907_786_330_9, epsilon = 1e-15);
        assert_eq!(uniform_varextropy(1), Err(Error::TooFewOutcomes(1)));
        for n in (2..=10_000).step_by(7).chain([10_000]) {
            let direct = varextropy(&Distribution::uniform(n).unwrap());
            let closed = uniform_varextropy(n).unwrap();
            let scale = direct.abs().max(closed.abs());
            assert!((direct - closed).abs() <= 1e-12 * scale, "n={n}: {direct} vs {closed}");
        }
    }

    #[test]
    fn closed_form_large_n_limit() {
        // n(1-1/n) ln(1-1/n)^2 ~ 1/n while (n(1-1/n) ln(1-1/n))^2 -> 1, so the value tends to -1.
        let v = uniform_varextropy(1_000_000).unwrap();
        let nf = 1e6f64;
        let w = nf - 1.0;
        let l = (-1.0 / nf).ln_1p();
        assert_abs_diff_eq!(v, w * l * l - w * w * l * l, epsilon = 1e-15);
        assert_abs_diff_eq!(v, -1.0, epsilon = 1e-5);
    }

    #[test]
    fn serializes_in_key_order() {
        let m = MeasureSet { h: 1.0, h1: 0.5, j: 0.25, vh: 0.0, vj: -1.5 };
        assert_eq!(
            serde_json::to_string(&m).unwrap(),
            r#"{"H":1.0,"H1":0.5,"J":0.25,"VH":0.0,"VJ":-1.5}"#
        );
    }

    #[test]
    fn bits_conversion() {
        let m = measure_all(&Distribution::uniform(8).unwrap()).in_bits();
        assert_abs_diff_eq!(m.h, 3.0, epsilon = 1e-12);
    }

    proptest! {
        #[test]
        fn matches_raw_definitions(seed in any::<u64>(), n in 2usize..30) {
            let cfg = SimplexSamplerConfig::new(seed, n, 1).unwrap();
            let p = sample_uniform_simplex(&cfg, 0).unwrap();
            let m = measure_all(&p);
            let r = raw(p.probs());
            for (a, b) in m.to_array().iter().zip(r) {
                prop_assert!((a - b).abs() < 1e-12, "{a} vs {b}");
            }
            prop_assert_eq!(m.h, entropy(&p));
            prop_assert_eq!(m.h1, gini_entropy(&p));
            prop_assert_eq!(m.j, extropy(&p));
            prop_assert_eq!(m.vh, varentropy(&p));
            prop_assert_eq!(m.vj, varextropy(&p));
        }

        #[test]
        fn bounds_hold(seed in any::<u64>(), n in 2usize..30) {
            let cfg = SimplexSamplerConfig::new(seed, n, 1).unwrap();
            let p = sample_uniform_simplex(&cfg, 0).unwrap();
            let m = measure_all(&p);
            let nf = n as f64;
            prop_assert!(m.h >= 0.0 && m.h <= nf.ln() + 1e-12);
            prop_assert!(m.h1 >= 0.0 && m.h1 <= 1.0 - 1.0 / nf + 1e-12);
            prop_assert!(m.j >= 0.0);
            prop_assert!(m.vh >= 0.0);
        }

        #[test]
        fn permutation_invariant(seed in any::<u64>(), n in 2usize..12, rot in 0usize..12) {
            let cfg = SimplexSamplerConfig::new(seed, n, 1).unwrap();
            let p = sample_uniform_simplex(&cfg, 0).unwrap();
            let mut v = p.probs().to_vec();
            v.rotate_left(rot % n);
            v.reverse();
            let q = Distribution::new(v).unwrap();
            prop_assert!(measure_all(&p).max_abs_diff(&measure_all(&q)) < 1e-12);
        }

        #[test]
        fn two_point_identities(p1 in 0.0f64..=1.0) {
            let p = Distribution::new(vec![p1, 1.0 - p1]).unwrap();
            let m = measure_all(&p);
            prop_assert!((m.j - m.h).abs() < 1e-12);
            prop_assert!((m.vj - m.vh).abs() < 1e-12);
        }
    }
}
