//! `qsa`: build, verify and measure Fourier-space arithmetic circuits, and
//! factor small integers with the semiclassical period-finding driver.
//!
//! Exit codes: 0 success, 1 verification or factoring failure, 2 usage
//! error, 3 resource limit.

mod params;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use params::{Block, Params};
use qsa_core::blocks::modmul::Version;
use qsa_core::classical::gcd;
use qsa_core::resources::{format_table, report_tables, CcPhaseMode, Convention, ToffoliMode};
use qsa_core::sim::dense::DEFAULT_DENSE_CAP;
use qsa_core::sim::shor::{factor, FactorRoute};
use qsa_core::verify::{verify, Engine, Strategy};
use qsa_core::Error;

#[derive(Parser, Debug)]
#[command(
    name = "qsa",
    version,
    about = "Fourier-space quantum arithmetic toolkit"
)]
struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Worker threads for sweeps (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a block's circuit in the text format.
    Build {
        #[arg(value_enum)]
        block: Block,
        #[command(flatten)]
        params: Params,
        /// Output file (default: standard output).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a block against its classical oracle.
    Verify {
        #[arg(value_enum)]
        block: Block,
        #[command(flatten)]
        params: Params,
        #[arg(long, conflicts_with = "random")]
        exhaustive: bool,
        /// Number of random inputs.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, value_enum, default_value_t = EngineArg::Structured)]
        engine: EngineArg,
    },
    /// Depth, cost and width of every multiplier unit against the closed-form targets.
    Resources {
        #[arg(long, default_value_t = 2)]
        version: u32,
        /// Word sizes: `8` or an inclusive range `4..16`.
        #[arg(long, default_value = "4..16")]
        n: String,
        #[arg(long, value_enum, default_value_t = CcArg::Depth1)]
        ccphase: CcArg,
        #[arg(long, value_enum, default_value_t = ToffoliArg::As5)]
        toffoli: ToffoliArg,
        /// Also write one JSON object per row to this file.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print JSON lines instead of the table.
        #[arg(long)]
        json: bool,
    },
    /// Factor `N` with semiclassical period finding.
    Shor {
        #[arg(long = "N")]
        modulus: u128,
        /// Base for the first attempt (default: random).
        #[arg(long)]
        a: Option<u128>,
        #[arg(long, default_value_t = 20)]
        attempts: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum EngineArg {
    Dense,
    Structured,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CcArg {
    Depth1,
    Decomposed,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ToffoliArg {
    As5,
    Native,
}

enum Failure {
    Check(String),
    Usage(String),
    Limit(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::TooWide { .. } => Failure::Limit(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        Failure::Usage(e.to_string())
    }
}

fn dense_cap() -> Result<usize, Failure> {
    match std::env::var("QSA_DENSE_CAP") {
        Ok(v) => v
            .parse()
            .map_err(|_| Failure::Usage(format!("QSA_DENSE_CAP must be an integer, got `{v}`"))),
        Err(_) => Ok(DEFAULT_DENSE_CAP),
    }
}

fn parse_range(s: &str) -> Result<Vec<usize>, Failure> {
    let bad = || Failure::Usage(format!("--n expects `8` or `4..16`, got `{s}`"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (
            a.trim().parse().map_err(|_| bad())?,
            b.trim().parse().map_err(|_| bad())?,
        ),
        None => {
            let v = s.trim().parse().map_err(|_| bad())?;
            (v, v)
        }
    };
    if lo == 0 || lo > hi || hi > 32 {
        return Err(Failure::Usage(format!(
            "--n range must satisfy 1 <= lo <= hi <= 32, got `{s}`"
        )));
    }
    Ok((lo..=hi).collect())
}

fn run(cli: Cli) -> Result<(), Failure> {
    if let Some(j) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build_global()
            .map_err(|e| Failure::Usage(e.to_string()))?;
    }
    match cli.command {
        Command::Build { block, params, out } => {
            let c = params.circuit(block)?;
            let text = c.to_string();
            match out {
                Some(p) => fs::write(&p, &text)?,
                None => std::io::stdout().write_all(text.as_bytes())?,
            }
            eprintln!("{block:?}: width {}, {} gates", c.width(), c.len());
            Ok(())
        }
        Command::Verify {
            block,
            params,
            exhaustive,
            random,
            engine,
        } => {
            let strategy = match (exhaustive, random) {
                (_, Some(count)) => Strategy::Random {
                    count,
                    seed: cli.seed,
                },
                (true, None) => Strategy::Exhaustive,
                (false, None) => {
                    return Err(Failure::Usage(
                        "verify needs --exhaustive or --random K".into(),
                    ))
                }
            };
            let engine = match engine {
                EngineArg::Dense => Engine::Dense { cap: dense_cap()? },
                EngineArg::Structured => Engine::Structured,
            };
            let bench = params.bench(block)?;
            let report = verify(&bench, strategy, engine)?;
            if report.passed() {
                println!("PASS {}: {} cases", report.name, report.cases);
                return Ok(());
            }
            println!(
                "FAIL {}: {} of {} cases",
                report.name, report.failures, report.cases
            );
            for ce in &report.counterexamples {
                let fields: Vec<String> = bench
                    .fields
                    .iter()
                    .zip(&ce.values)
                    .map(|(f, v)| format!("{}={v}", f.name))
                    .collect();
                let got = match &ce.got {
                    Ok(b) => b.to_string(),
                    Err(why) => why.clone(),
                };
                println!(
                    "  {}: expected {} got {}",
                    fields.join(" "),
                    ce.expected,
                    got
                );
            }
            Err(Failure::Check(format!("{} failed", report.name)))
        }
        Command::Resources {
            version,
            n,
            ccphase,
            toffoli,
            out,
            json,
        } => {
            let version = Version::from_number(version)?;
            let conv = Convention {
                ccphase: match ccphase {
                    CcArg::Depth1 => CcPhaseMode::CcphaseDepth1,
                    CcArg::Decomposed => CcPhaseMode::CcphaseDecomposed,
                },
                toffoli: match toffoli {
                    ToffoliArg::As5 => ToffoliMode::ToffoliAs5,
                    ToffoliArg::Native => ToffoliMode::ToffoliNative,
                },
            };
            let rows = report_tables(&parse_range(&n)?, version, conv)?;
            let lines: Vec<String> = rows
                .iter()
                .map(|r| serde_json::to_string(r).expect("rows serialize"))
                .collect();
            if json {
                lines.iter().for_each(|l| println!("{l}"));
            } else {
                println!("version {version:?}, convention: {conv}");
                print!("{}", format_table(&rows));
            }
            if let Some(p) = out {
                fs::write(p, lines.join("\n") + "\n")?;
            }
            Ok(())
        }
        Command::Shor {
            modulus,
            a,
            attempts,
        } => {
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
            let f = factor(modulus, a, attempts, &mut rng).map_err(|e| match e {
                Error::InvalidParameter(m) if m.starts_with("no factor") => Failure::Check(m),
                e => e.into(),
            })?;
            for o in &f.attempts {
                if gcd(o.a, modulus) > 1 {
                    println!("a={} shares a factor with N", o.a);
                    continue;
                }
                let period = o.period_candidate.map_or("none".into(), |r| r.to_string());
                println!("a={} measured={} period={period}", o.a, o.measured_bits);
            }
            let how = match f.route {
                FactorRoute::Even => "even modulus",
                FactorRoute::PerfectPower => "perfect power",
                FactorRoute::LuckyGcd => "gcd with the drawn base",
                FactorRoute::PeriodFinding => "period finding",
            };
            println!("factors {} {} ({how})", f.factors.0, f.factors.1);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(m)) => {
            eprintln!("qsa: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("qsa: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Limit(m)) => {
            eprintln!("qsa: {m}");
            ExitCode::from(3)
        }
    }
}
