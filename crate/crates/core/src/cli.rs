//! Command-line interface: price, identify, robust, distance, simulate.
//!
//! Every run is deterministic: the same inputs and seed produce
//! byte-identical output. Input problems (bad files, bad flags, bad
//! JSON) exit with code 2, numerical failures (divergent integrals,
//! non-convergent fits) with code 3.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::basis::BasisKind;
use crate::distortion::Distortion;
use crate::distribution::Distribution;
use crate::empirical::EmpiricalDistribution;
use crate::error::{Error, Result};
use crate::identify::identify;
use crate::io::{read_losses, write_grid_csv, LossTable};
use crate::premium::distortion_premium;
use crate::ambiguity::{robust_premium_r1, robust_premium_rp, RobustStatus};
use crate::simulate::{
    default_bases, run_simulation, SimulationConfig, DEFAULT_SEED,
};
use crate::wasserstein::{wasserstein, wasserstein_dp};

#[derive(Parser, Debug)]
#[command(
    name = "premia",
    version,
    about = "Distortion pricing: premia, density identification, robust bounds"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Price losses under a distortion density
    Price(PriceArgs),
    /// Recover a distortion density from observed prices
    Identify(IdentifyArgs),
    /// Worst-case premium over a transport ball around the input
    Robust(RobustArgs),
    /// Transport distance between two loss files
    Distance(DistanceArgs),
    /// Synthetic pricing book plus identification study
    Simulate(SimulateArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BasisArg {
    Step,
    Spline,
}

impl From<BasisArg> for BasisKind {
    fn from(b: BasisArg) -> BasisKind {
        match b {
            BasisArg::Step => BasisKind::Step,
            BasisArg::Spline => BasisKind::Spline,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MetricArg {
    D1,
    Dp,
}

#[derive(Args, Debug)]
struct PriceArgs {
    /// Loss file: one loss per line, or contract_id,loss rows
    #[arg(long)]
    input: PathBuf,
    /// Distortion as inline JSON or a path to a JSON file
    #[arg(long)]
    distortion: String,
    /// Write JSON lines here instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct IdentifyArgs {
    /// Loss file with contract_id,loss rows (or one anonymous contract)
    #[arg(long)]
    input: PathBuf,
    /// Observed prices: contract_id,price rows or one price per line
    #[arg(long)]
    prices: PathBuf,
    /// Basis family to fit
    #[arg(long, value_enum)]
    basis: BasisArg,
    /// Number of subintervals
    #[arg(long)]
    size: usize,
    /// Report path; the density grid lands next to it as <stem>.grid.csv
    #[arg(long)]
    output: PathBuf,
}

#[derive(Args, Debug)]
struct RobustArgs {
    /// Loss file for the baseline (single contract)
    #[arg(long)]
    input: PathBuf,
    /// Distortion as inline JSON or a path to a JSON file
    #[arg(long)]
    distortion: String,
    /// Ball radius
    #[arg(long)]
    epsilon: f64,
    /// Transport order of the ball
    #[arg(long, default_value_t = 1.0)]
    order: f64,
    /// Write the JSON report here instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct DistanceArgs {
    /// First loss file
    #[arg(long)]
    input: PathBuf,
    /// Second loss file
    #[arg(long)]
    against: PathBuf,
    /// Transport order
    #[arg(long, default_value_t = 1.0)]
    order: f64,
    /// Ground metric: plain losses or their p-th powers
    #[arg(long, value_enum, default_value_t = MetricArg::D1)]
    metric: MetricArg,
    /// Power of the dp ground metric
    #[arg(long, default_value_t = 2.0)]
    power: f64,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    /// Distortion used to price the synthetic book
    #[arg(long)]
    distortion: String,
    /// Number of contracts
    #[arg(long, default_value_t = 50)]
    contracts: usize,
    /// Losses per contract
    #[arg(long, default_value_t = 1000)]
    sample_size: usize,
    /// RNG seed
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Fit a single basis instead of the default panel
    #[arg(long, value_enum, requires = "size")]
    basis: Option<BasisArg>,
    /// Subintervals for --basis
    #[arg(long, requires = "basis")]
    size: Option<usize>,
    /// Report path; density grids land next to it as <stem>_<fit>.csv
    #[arg(long)]
    output: PathBuf,
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Price(args) => cmd_price(args),
        Command::Identify(args) => cmd_identify(args),
        Command::Robust(args) => cmd_robust(args),
        Command::Distance(args) => cmd_distance(args),
        Command::Simulate(args) => cmd_simulate(args),
    }
}

/// Inline JSON (leading brace) or a path to a JSON file.
fn parse_distortion_arg(arg: &str) -> Result<Distortion> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        fs::read_to_string(arg)
            .map_err(|e| Error::config(format!("cannot read distortion file {arg}: {e}")))?
    };
    serde_json::from_str(&text)
        .map_err(|e| Error::InvalidDistortion(e.to_string()))
}

fn emit(path: Option<&Path>, content: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

fn single_contract(table: LossTable, what: &str) -> Result<Vec<f64>> {
    match table {
        LossTable::Single(v) => Ok(v),
        LossTable::Multi(m) if m.len() == 1 => Ok(m.into_values().next().unwrap()),
        LossTable::Multi(m) => Err(Error::config(format!(
            "{what} expects a single contract, found {}",
            m.len()
        ))),
    }
}

fn cmd_price(args: PriceArgs) -> Result<()> {
    let h = parse_distortion_arg(&args.distortion)?;
    let table = read_losses(&args.input)?;
    let mut out = String::new();
    match table {
        LossTable::Single(losses) => {
            let emp = EmpiricalDistribution::new(losses)?;
            let quote = distortion_premium(&emp, &h);
            out.push_str(&json!({ "premium": quote.value }).to_string());
            out.push('\n');
        }
        LossTable::Multi(contracts) => {
            for (id, losses) in contracts {
                let emp = EmpiricalDistribution::new(losses).map_err(|e| {
                    Error::config(format!("contract {id}: {e}"))
                })?;
                let quote = distortion_premium(&emp, &h);
                out.push_str(
                    &json!({ "contract_id": id, "premium": quote.value }).to_string(),
                );
                out.push('\n');
            }
        }
    }
    emit(args.output.as_deref(), &out)
}

fn cmd_identify(args: IdentifyArgs) -> Result<()> {
    let losses = read_losses(&args.input)?;
    let prices = read_losses(&args.prices)?;

    let (samples, observed) = match (losses, prices) {
        (LossTable::Multi(book), LossTable::Multi(quoted)) => {
            let book_ids: Vec<&String> = book.keys().collect();
            let price_ids: Vec<&String> = quoted.keys().collect();
            if book_ids != price_ids {
                return Err(Error::config(
                    "loss and price files must list the same contract ids",
                ));
            }
            let mut observed = Vec::with_capacity(quoted.len());
            for (id, values) in &quoted {
                if values.len() != 1 {
                    return Err(Error::config(format!(
                        "contract {id} has {} price rows, expected one",
                        values.len()
                    )));
                }
                observed.push(values[0]);
            }
            (book.into_values().collect::<Vec<_>>(), observed)
        }
        (LossTable::Multi(book), LossTable::Single(observed)) => {
            if observed.len() != book.len() {
                return Err(Error::config(format!(
                    "{} prices for {} contracts; name them by contract_id or match the count",
                    observed.len(),
                    book.len()
                )));
            }
            (book.into_values().collect::<Vec<_>>(), observed)
        }
        (LossTable::Single(sample), LossTable::Single(observed)) => {
            if observed.len() != 1 {
                return Err(Error::config(format!(
                    "one contract but {} prices",
                    observed.len()
                )));
            }
            (vec![sample], observed)
        }
        (LossTable::Single(_), LossTable::Multi(_)) => {
            return Err(Error::config(
                "named prices need a contract_id,loss input file",
            ))
        }
    };

    let kind: BasisKind = args.basis.into();
    let fit = identify(&samples, &observed, kind, args.size)?;

    let basis_name = match kind {
        BasisKind::Step => "step",
        BasisKind::Spline => "spline",
    };
    let report = json!({
        "basis": basis_name,
        "size": args.size,
        "lambda": fit.coefficients,
        "objective": fit.objective,
    });
    emit(Some(&args.output), &format!("{report}\n"))?;

    let grid: Vec<(f64, f64)> = (0..=1000)
        .map(|i| {
            let v = i as f64 / 1000.0;
            (v, fit.fitted_density.density(v))
        })
        .collect();
    write_grid_csv(&args.output.with_extension("grid.csv"), ("v", "h"), &grid)
}

fn cmd_robust(args: RobustArgs) -> Result<()> {
    let h = parse_distortion_arg(&args.distortion)?;
    let losses = single_contract(read_losses(&args.input)?, "robust pricing")?;
    let dist: Distribution = EmpiricalDistribution::new(losses)?.into();

    if !args.order.is_finite() || args.order < 1.0 {
        return Err(Error::domain(format!(
            "--order must be at least 1, got {}",
            args.order
        )));
    }
    let result = if args.order == 1.0 {
        robust_premium_r1(&dist, &h, args.epsilon)?
    } else {
        robust_premium_rp(&dist, &h, args.epsilon, args.order)?
    };

    let mut report = Map::new();
    report.insert(
        "status".into(),
        serde_json::to_value(result.status).expect("status serializes"),
    );
    if result.value.is_finite() {
        report.insert("value".into(), json!(result.value));
        report.insert("ambiguity_premium".into(), json!(result.ambiguity_premium));
        if args.order > 1.0 && result.status == RobustStatus::Attained && args.epsilon > 0.0 {
            // companion figure: same worst case, loading raised to the
            // conjugate power (printed alongside for comparison)
            let q = args.order / (args.order - 1.0);
            let norm = result.ambiguity_premium / args.epsilon;
            let base = result.value - result.ambiguity_premium;
            report.insert(
                "value_statement_variant".into(),
                json!(base + args.epsilon * norm.powf(q)),
            );
        }
    }
    if let Some(worst) = &result.worst_case {
        let shift: Vec<Value> = (0..=100)
            .map(|i| {
                let v = i as f64 / 100.0;
                json!([v, worst.shift_at(v)])
            })
            .collect();
        report.insert("worst_case_shift".into(), Value::Array(shift));
    }
    emit(
        args.output.as_deref(),
        &format!("{}\n", Value::Object(report)),
    )
}

fn cmd_distance(args: DistanceArgs) -> Result<()> {
    let a = single_contract(read_losses(&args.input)?, "distance")?;
    let b = single_contract(read_losses(&args.against)?, "distance")?;
    let fa: Distribution = EmpiricalDistribution::new(a)?.into();
    let fb: Distribution = EmpiricalDistribution::new(b)?.into();
    let report = match args.metric {
        MetricArg::D1 => {
            let d = wasserstein(&fa, &fb, args.order)?;
            json!({ "distance": d, "metric": "d1", "order": args.order })
        }
        MetricArg::Dp => {
            if args.order != 1.0 {
                return Err(Error::config(
                    "the power ground metric supports order 1 only",
                ));
            }
            let d = wasserstein_dp(&fa, &fb, args.power)?;
            json!({ "distance": d, "metric": "dp", "order": 1.0, "power": args.power })
        }
    };
    emit(None, &format!("{report}\n"))
}

fn cmd_simulate(args: SimulateArgs) -> Result<()> {
    let h = parse_distortion_arg(&args.distortion)?;
    let config = SimulationConfig {
        contracts: args.contracts,
        sample_size: args.sample_size,
        seed: args.seed,
        ..SimulationConfig::default()
    };
    let bases = match (args.basis, args.size) {
        (Some(kind), Some(size)) => vec![(BasisKind::from(kind), size)],
        _ => default_bases(),
    };
    let report = run_simulation(&config, &h, &bases)?;

    let fits: Vec<Value> = report
        .fits
        .iter()
        .map(|labeled| {
            json!({
                "basis": match labeled.kind {
                    BasisKind::Step => "step",
                    BasisKind::Spline => "spline",
                },
                "size": labeled.size,
                "lambda": labeled.fit.coefficients,
                "objective": labeled.fit.objective,
            })
        })
        .collect();
    let summary = json!({
        "contracts": config.contracts,
        "sample_size": config.sample_size,
        "seed": config.seed,
        "distortion": report.distortion,
        "shapes": report.shapes,
        "observed_prices": report.observed_prices,
        "fits": fits,
    });
    emit(Some(&args.output), &format!("{summary}\n"))?;

    let stem = args
        .output
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("simulation")
        .to_string();
    let dir = args.output.parent().unwrap_or_else(|| Path::new("."));
    for labeled in &report.fits {
        let grid: Vec<(f64, f64)> = (0..=1000)
            .map(|i| {
                let v = i as f64 / 1000.0;
                (v, labeled.fit.fitted_density.density(v))
            })
            .collect();
        let path = dir.join(format!("{stem}_{}.csv", labeled.label()));
        write_grid_csv(&path, ("v", "h"), &grid)?;
    }
    Ok(())
}
