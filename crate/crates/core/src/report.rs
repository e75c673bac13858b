//! Tabular output: figure-data sweeps and CSV/JSON renderings of the
//! library's result types.
//!
//! Numbers are written with Rust's shortest round-trip formatting, so
//! parsing a CSV field back yields the identical `f64`.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

use crate::claims::ClaimReport;
use crate::error::{Error, Result};
use crate::measures::{measure_all, uniform_varextropy, MeasureSet};
use crate::negation::{negate, NegationTrace};
use crate::simplex::Distribution;

pub const DEFAULT_N2_STEPS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    Csv,
    #[default]
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::InvalidArgument(format!("unknown format `{other}` (csv|json)"))),
        }
    }
}

/// One sweep record: the parameter value and one value per column.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub x: f64,
    pub values: Vec<f64>,
}

/// A sweep with a fixed column set. `x` strictly increases down the rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub x_name: String,
    pub columns: Vec<String>,
    pub rows: Vec<SweepRow>,
}

impl Sweep {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r.values[idx]).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.x_name.clone();
        for c in &self.columns {
            out.push(',');
            out.push_str(c);
        }
        out.push('\n');
        for row in &self.rows {
            push_row(&mut out, std::iter::once(row.x).chain(row.values.iter().copied()));
        }
        out
    }

    /// A JSON array of objects, `x_name` first, then columns in order.
    pub fn to_json(&self) -> String {
        let rows: Vec<RowView<'_>> = self.rows.iter().map(|row| RowView { sweep: self, row }).collect();
        serde_json::to_string(&rows).expect("sweep serializes")
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => {
                let mut s = self.to_json();
                s.push('\n');
                s
            }
        }
    }
}

struct RowView<'a> {
    sweep: &'a Sweep,
    row: &'a SweepRow,
}

impl Serialize for RowView<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.sweep.columns.len() + 1))?;
        map.serialize_entry(&self.sweep.x_name, &self.row.x)?;
        for (name, v) in self.sweep.columns.iter().zip(&self.row.values) {
            map.serialize_entry(name, v)?;
        }
        map.end()
    }
}

fn push_row(out: &mut String, values: impl Iterator<Item = f64>) {
    for (i, v) in values.enumerate() {
        if i > 0 {
            out.push(',');
        }
        write_number(out, v);
    }
    out.push('\n');
}

/// Shortest round-trip rendering; integers print without a fraction and
/// very large or small magnitudes use exponent notation.
pub fn write_number(out: &mut String, v: f64) {
    let res = if v.fract() == 0.0 && v.abs() < 1e15 {
        write!(out, "{v}")
    } else {
        write!(out, "{v:?}")
    };
    res.expect("writing to a String cannot fail");
}

/// Two-outcome sweep over `p1 = i/steps`, `i = 0..=steps`, with measures
/// of `P = (p1, 1-p1)` and of its negation.
pub fn sweep_n2(steps: usize) -> Result<Sweep> {
    if steps < 2 {
        return Err(Error::InvalidArgument(format!("steps must be at least 2, got {steps}")));
    }
    let rows = (0..=steps)
        .map(|i| {
            let p1 = i as f64 / steps as f64;
            let p = Distribution::new(vec![p1, 1.0 - p1])?;
            let a = measure_all(&p);
            let b = measure_all(&negate(&p));
            Ok(SweepRow {
                x: p1,
                values: vec![a.h, b.h, a.vh, b.vh, a.vj, b.vj],
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Sweep {
        x_name: "p1".into(),
        columns: ["H_P", "H_neg", "VH_P", "VH_neg", "VJ_P", "VJ_neg"].map(String::from).to_vec(),
        rows,
    })
}

/// Uniform distribution measures for every `n` in `n_min..=n_max`.
pub fn sweep_n(n_min: usize, n_max: usize) -> Result<Sweep> {
    if n_min < 2 || n_min > n_max {
        return Err(Error::InvalidRange(format!(
            "need 2 <= n_min <= n_max, got [{n_min}, {n_max}]"
        )));
    }
    let rows = (n_min..=n_max)
        .map(|n| {
            let m = measure_all(&Distribution::uniform(n)?);
            Ok(SweepRow {
                x: n as f64,
                values: vec![m.h, m.vh, uniform_varextropy(n)?],
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Sweep {
        x_name: "n".into(),
        columns: ["H_uniform", "VH_uniform", "VJ_uniform"].map(String::from).to_vec(),
        rows,
    })
}

pub fn measures_to_csv(m: &MeasureSet) -> String {
    let mut out = MeasureSet::NAMES.join(",");
    out.push('\n');
    push_row(&mut out, m.to_array().into_iter());
    out
}

pub fn render_measures(m: &MeasureSet, format: Format) -> String {
    match format {
        Format::Csv => measures_to_csv(m),
        Format::Json => serde_json::to_string(m).expect("measures serialize") + "\n",
    }
}

pub fn distribution_to_csv(d: &Distribution) -> String {
    let mut out = (1..=d.n()).map(|i| format!("p_{i}")).collect::<Vec<_>>().join(",");
    out.push('\n');
    push_row(&mut out, d.probs().iter().copied());
    out
}

pub fn render_distribution(d: &Distribution, format: Format) -> String {
    match format {
        Format::Csv => distribution_to_csv(d),
        Format::Json => format!("{d}\n"),
    }
}

/// Columns `k,H,H1,J,VH,VJ,p_1..p_n`, one row per iterate.
pub fn trace_to_csv(trace: &NegationTrace) -> String {
    let n = trace.steps[0].dist.n();
    let mut out = String::from("k,H,H1,J,VH,VJ");
    for i in 1..=n {
        write!(out, ",p_{i}").expect("infallible");
    }
    out.push('\n');
    for s in &trace.steps {
        let vals = std::iter::once(s.k as f64)
            .chain(s.measures.to_array())
            .chain(s.dist.probs().iter().copied());
        push_row(&mut out, vals);
    }
    out
}

pub fn render_trace(trace: &NegationTrace, format: Format) -> String {
    match format {
        Format::Csv => trace_to_csv(trace),
        Format::Json => trace.to_jsonl(),
    }
}

/// Columns `claim,verdict,trials,seed,tolerance,lhs,rhs,margin`; the
/// counterexample fields are empty when there is none.
pub fn reports_to_csv(reports: &[ClaimReport]) -> String {
    let mut out = String::from("claim,verdict,trials,seed,tolerance,lhs,rhs,margin\n");
    for r in reports {
        let verdict = serde_json::to_value(r.verdict).expect("verdict serializes");
        write!(
            out,
            "{},{},{},{},",
            r.claim,
            verdict.as_str().unwrap_or_default(),
            r.trials,
            r.seed
        )
        .expect("infallible");
        write_number(&mut out, r.tolerance);
        match &r.counterexample {
            Some(c) => {
                for v in [c.lhs, c.rhs, c.margin] {
                    out.push(',');
                    write_number(&mut out, v);
                }
            }
            None => out.push_str(",,,"),
        }
        out.push('\n');
    }
    out
}

pub fn render_reports(reports: &[ClaimReport], format: Format) -> String {
    match format {
        Format::Csv => reports_to_csv(reports),
        Format::Json => crate::claims::reports_to_jsonl(reports),
    }
}
