//! `fleck` — exact verification of residue-class alternating binomial sum
//! congruences.
//!
//! Exit codes: 0 on success, 1 when a verification fails (a bound violation
//! or a failed selftest), 2 for usage and precondition errors.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};

use fleck_core::arith::vp_rat;
use fleck_core::congruence::{
    alt_sum, bernoulli_bound, fleck_bound, gcd_poly_bound, general_bound, power_bound,
    power_floor_bound, verify, wan_bound, weisman_bound,
};
use fleck_core::selftest::{all_passed, run_selftest};
use fleck_core::sweep::{poly_from_config, run_sweep, Basis, SweepConfig};
use fleck_core::{BoundKind, Prime, SumSpec, Weight};

#[derive(Parser)]
#[command(
    name = "fleck",
    about = "Exact residue-class alternating binomial sums and their p-adic valuation bounds",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SpecArgs {
    /// Prime modulus base
    #[arg(long)]
    p: u64,
    /// Floor-divisor exponent: weights see floor((k-r)/p^alpha)
    #[arg(long)]
    alpha: u32,
    /// Residue-class exponent: k runs over k = r (mod p^beta)
    #[arg(long)]
    beta: u32,
    /// Upper summation limit
    #[arg(long)]
    n: i64,
    /// Residue-class representative (any integer; floored modulus)
    #[arg(long)]
    r: i64,
    /// Weight: const | poly:c0,c1,.. | mono:c0,.. | choose:l |
    /// bernoulli:l,m | power_floor:a | gcd:c0,.. | gcd_mono:c0,.. | power:b
    #[arg(long)]
    weight: String,
}

#[derive(Subcommand)]
enum Command {
    /// Print the exact sum and its p-adic valuation for one spec
    Sum(SpecArgs),
    /// Print the selected valuation lower bound
    Bound {
        /// general | fleck | weisman | wan | bernoulli | gcd | power-floor | power
        #[arg(long)]
        kind: String,
        #[arg(long)]
        n: i64,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        alpha: Option<u32>,
        #[arg(long)]
        beta: Option<u32>,
        /// Weight degree parameter, where the bound uses one
        #[arg(long)]
        l: Option<u32>,
    },
    /// Check one spec against a bound; prints a JSON report
    Verify {
        #[command(flatten)]
        spec: SpecArgs,
        /// Bound kind to check against
        #[arg(long)]
        bound: String,
    },
    /// Run a verification grid from a JSON config
    Sweep {
        /// Path to the JSON sweep config
        #[arg(long)]
        config: PathBuf,
        /// Write the JSON report here (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write a per-cell CSV projection
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Worker count: 0 = all cores (FLECK_THREADS caps it)
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
    /// Run the built-in identity battery
    Selftest,
}

fn parse_weight(text: &str) -> anyhow::Result<Weight> {
    let (kind, rest) = match text.split_once(':') {
        Some((k, r)) => (k, r),
        None => (text, ""),
    };
    let parse_coeffs = |basis: Basis| -> anyhow::Result<_> {
        let coeffs: Vec<String> = rest.split(',').map(|s| s.trim().to_string()).collect();
        Ok(poly_from_config(basis, &coeffs)?)
    };
    let parse_int = |what: &str| -> anyhow::Result<i64> {
        rest.trim()
            .parse::<i64>()
            .map_err(|_| anyhow!("bad {what} in weight {text:?}"))
    };
    match kind {
        "const" => Ok(Weight::Constant),
        "poly" => Ok(Weight::PolyFloor(parse_coeffs(Basis::Binomial)?)),
        "mono" => Ok(Weight::PolyFloor(parse_coeffs(Basis::Monomial)?)),
        "gcd" => Ok(Weight::GcdPoly(parse_coeffs(Basis::Binomial)?)),
        "gcd_mono" => Ok(Weight::GcdPoly(parse_coeffs(Basis::Monomial)?)),
        "choose" => Ok(Weight::ChooseFloor(
            rest.trim()
                .parse::<u32>()
                .map_err(|_| anyhow!("bad degree in weight {text:?}"))?,
        )),
        "bernoulli" => {
            let (l, m) = rest
                .split_once(',')
                .ok_or_else(|| anyhow!("bernoulli weight needs l,m"))?;
            Ok(Weight::BernoulliArg {
                degree: l.trim().parse().map_err(|_| anyhow!("bad degree in {text:?}"))?,
                modulus: m.trim().parse().map_err(|_| anyhow!("bad modulus in {text:?}"))?,
            })
        }
        "power_floor" => Ok(Weight::PowerFloor(parse_int("base")?)),
        "power" => Ok(Weight::PowerK(parse_int("base")?)),
        other => bail!("unknown weight kind {other:?}"),
    }
}

fn build_spec(args: &SpecArgs) -> anyhow::Result<SumSpec> {
    let p = Prime::new(args.p)?;
    let weight = parse_weight(&args.weight)?;
    Ok(SumSpec::new(p, args.alpha, args.beta, args.n, args.r, weight)?)
}

fn require<T: Copy>(value: Option<T>, flag: &str, kind: &str) -> anyhow::Result<T> {
    value.ok_or_else(|| anyhow!("--{flag} is required for the {kind} bound"))
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Sum(args) => {
            let spec = build_spec(&args)?;
            let sum = alt_sum(&spec)?;
            println!("sum = {sum}");
            println!("ord_{} = {}", args.p, vp_rat(&sum, spec.p));
            Ok(ExitCode::SUCCESS)
        }
        Command::Bound {
            kind,
            n,
            p,
            alpha,
            beta,
            l,
        } => {
            let kind: BoundKind = kind.parse()?;
            let p = Prime::new(p)?;
            let value = match kind {
                BoundKind::General => general_bound(
                    n,
                    p,
                    require(alpha, "alpha", "general")?,
                    require(beta, "beta", "general")?,
                    require(l, "l", "general")?,
                )?,
                BoundKind::Fleck => fleck_bound(n, p)?,
                BoundKind::Weisman => weisman_bound(n, p, require(alpha, "alpha", "weisman")?)?,
                BoundKind::Wan => wan_bound(n, p, require(l, "l", "wan")?)?,
                BoundKind::Bernoulli => bernoulli_bound(
                    n,
                    p,
                    require(alpha, "alpha", "bernoulli")?,
                    require(l, "l", "bernoulli")?,
                )?,
                BoundKind::Gcd => gcd_poly_bound(
                    n,
                    p,
                    require(alpha, "alpha", "gcd")?,
                    require(l, "l", "gcd")?,
                )?,
                BoundKind::PowerFloor => power_floor_bound(
                    n,
                    p,
                    require(alpha, "alpha", "power-floor")?,
                    require(beta, "beta", "power-floor")?,
                )?,
                BoundKind::Power => power_bound(n, p, require(alpha, "alpha", "power")?)?,
            };
            println!("{value}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { spec, bound } => {
            let kind: BoundKind = bound.parse()?;
            let spec = build_spec(&spec)?;
            let report = verify(&spec, kind)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            if report.holds {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(1))
            }
        }
        Command::Sweep {
            config,
            out,
            csv,
            threads,
        } => {
            let text = fs::read_to_string(&config)
                .with_context(|| format!("reading {}", config.display()))?;
            let config = SweepConfig::from_json(&text)?;
            let report = run_sweep(&config, threads)?;
            let json = report.to_json();
            match &out {
                Some(path) => {
                    fs::write(path, &json).with_context(|| format!("writing {}", path.display()))?;
                    println!(
                        "total = {}, holds = {}, violations = {}, skipped = {}, min_slack = {} -> {}",
                        report.total,
                        report.holds,
                        report.violations.len(),
                        report.skipped,
                        report.min_slack,
                        path.display()
                    );
                }
                None => print!("{json}"),
            }
            if let Some(path) = &csv {
                fs::write(path, report.to_csv())
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            if report.violations.is_empty() {
                Ok(ExitCode::SUCCESS)
            } else {
                eprintln!("{} bound violations found", report.violations.len());
                Ok(ExitCode::from(1))
            }
        }
        Command::Selftest => {
            let results = run_selftest();
            for r in &results {
                if r.passed {
                    println!("ok     {} — {}", r.name, r.detail);
                } else {
                    println!("FAILED {} — {}", r.name, r.detail);
                }
            }
            if all_passed(&results) {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(1))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}
