use std::io::{self, Write};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use simplex_negation::claims::{check_claims, ClaimId};
use simplex_negation::negation::{DEFAULT_MAX_STEPS, DEFAULT_TOLERANCE};
use simplex_negation::report::{self, Sweep, DEFAULT_N2_STEPS};
use simplex_negation::simplex::parse_values;
use simplex_negation::{
    measure_all, negate_k, trace_negation, CheckConfig, Distribution, Format, MeasureSet,
    NegationTrace,
};

#[derive(Parser, Debug)]
#[command(name = "negation", version, about = "Negation of discrete distributions and its effect on entropy-family measures")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = OutFormat::Json)]
    format: OutFormat,

    /// Logarithm base for displayed measures. Computation is always in nats.
    #[arg(long, value_enum, global = true, default_value_t = LogBase::E)]
    log_base: LogBase,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum OutFormat {
    Csv,
    Json,
}

impl From<OutFormat> for Format {
    fn from(f: OutFormat) -> Self {
        match f {
            OutFormat::Csv => Format::Csv,
            OutFormat::Json => Format::Json,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, ValueEnum)]
enum LogBase {
    E,
    #[value(name = "2")]
    Two,
}

#[derive(Args, Debug)]
struct DistArgs {
    /// Probabilities as a comma-separated list, e.g. 0.4,0.3,0.2,0.1
    #[arg(short = 'p', long = "probs", allow_hyphen_values = true)]
    probs: String,

    /// Divide the entries by their sum before validating.
    #[arg(long)]
    renormalize: bool,
}

impl DistArgs {
    fn parse(&self) -> Result<Distribution> {
        let values = parse_values(&self.probs).context("invalid --probs")?;
        Distribution::from_values(&values, self.renormalize).context("invalid --probs")
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print H, H1, J, VH and VJ of a distribution.
    Measure(DistArgs),
    /// Print the k-th negation of a distribution.
    Negate {
        #[command(flatten)]
        dist: DistArgs,
        #[arg(short = 'k', long = "steps", default_value_t = 1)]
        steps: u32,
    },
    /// Negate repeatedly and print measures at every iterate.
    Iterate {
        #[command(flatten)]
        dist: DistArgs,
        /// Maximum number of negations.
        #[arg(short = 'k', long = "steps", default_value_t = DEFAULT_MAX_STEPS)]
        steps: usize,
        /// Stop once the sup-norm distance to uniform is at most this.
        #[arg(long = "tol", default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
    },
    /// Two-outcome sweep of p1 over [0, 1].
    #[command(name = "sweep-n2")]
    SweepN2 {
        #[arg(short = 'k', long = "steps", default_value_t = DEFAULT_N2_STEPS)]
        steps: usize,
    },
    /// Uniform-distribution measures for a range of outcome counts.
    #[command(name = "sweep-n")]
    SweepN {
        #[arg(long, default_value_t = 2)]
        n_min: usize,
        #[arg(long, default_value_t = 100)]
        n_max: usize,
    },
    /// Run the claim registry. Exits 0 whatever the verdicts.
    Check {
        #[arg(long, default_value_t = CheckConfig::default().seed)]
        seed: u64,
        #[arg(long, default_value_t = CheckConfig::default().trials)]
        trials: u64,
        #[arg(long, default_value_t = CheckConfig::default().n_min)]
        n_min: usize,
        #[arg(long, default_value_t = CheckConfig::default().n_max)]
        n_max: usize,
        #[arg(long = "tol", default_value_t = CheckConfig::default().tolerance)]
        tol: f64,
        /// Comma-separated claim ids (default: all).
        #[arg(long, value_delimiter = ',')]
        claims: Vec<String>,
        /// Worker threads (default: one per core). Output does not depend on it.
        #[arg(long)]
        workers: Option<usize>,
    },
}

fn measures_for_display(m: MeasureSet, base: LogBase) -> MeasureSet {
    match base {
        LogBase::E => m,
        LogBase::Two => m.in_bits(),
    }
}

fn sweep_for_display(mut s: Sweep, base: LogBase) -> Sweep {
    if base == LogBase::Two {
        let ln2 = std::f64::consts::LN_2;
        let scales: Vec<f64> = s
            .columns
            .iter()
            .map(|c| {
                if c.starts_with("VH") || c.starts_with("VJ") {
                    1.0 / (ln2 * ln2)
                } else {
                    1.0 / ln2
                }
            })
            .collect();
        for row in &mut s.rows {
            for (v, k) in row.values.iter_mut().zip(&scales) {
                *v *= k;
            }
        }
    }
    s
}

fn run(cli: Cli) -> Result<String> {
    let format: Format = cli.format.into();
    let out = match cli.command {
        Command::Measure(dist) => {
            let m = measures_for_display(measure_all(&dist.parse()?), cli.log_base);
            report::render_measures(&m, format)
        }
        Command::Negate { dist, steps } => report::render_distribution(&negate_k(&dist.parse()?, steps), format),
        Command::Iterate { dist, steps, tol } => {
            let mut trace: NegationTrace = trace_negation(&dist.parse()?, steps, tol)?;
            for s in &mut trace.steps {
                s.measures = measures_for_display(s.measures, cli.log_base);
            }
            report::render_trace(&trace, format)
        }
        Command::SweepN2 { steps } => sweep_for_display(report::sweep_n2(steps)?, cli.log_base).render(format),
        Command::SweepN { n_min, n_max } => {
            sweep_for_display(report::sweep_n(n_min, n_max)?, cli.log_base).render(format)
        }
        Command::Check {
            seed,
            trials,
            n_min,
            n_max,
            tol,
            claims,
            workers,
        } => {
            let ids: Vec<ClaimId> = if claims.is_empty() {
                ClaimId::ALL.to_vec()
            } else {
                claims.iter().map(|c| c.parse()).collect::<Result<_, _>>()?
            };
            if ids.is_empty() {
                bail!("no claims selected");
            }
            let config = CheckConfig {
                seed,
                trials,
                n_min,
                n_max,
                tolerance: tol,
                workers,
            };
            report::render_reports(&check_claims(&ids, &config)?, format)
        }
    };
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(text) => {
            let mut stdout = io::stdout().lock();
            if stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::FAILURE;
            }
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
