use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use bornctl::error::ScenarioError;
use bornctl::ring::RingSpec;
use bornctl::verify::par::Execution;
use bornctl::verify::report::{Counterexample, Report};
use bornctl::verify::scenario::Scenario;
use bornctl::verify::suites::{replay, run_single, run_suites, Outcome, SuiteOptions};
use clap::{Parser, Subcommand, ValueEnum};

/// Seed used when neither a flag, a scenario nor `BORNCTL_SEED` gives one.
const DEFAULT_SEED: u64 = 0;

#[derive(Parser)]
#[command(name = "bornctl", version, about = "Law checker for equivariant controlled objects")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Validate the declarations of a scenario file.
    Check {
        scenario: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        report: Format,
    },
    /// Run named law suites (`all` for every suite).
    Suite {
        #[arg(required = true)]
        names: Vec<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        instances: Option<u64>,
        /// Coefficient ring: Z, Q or Z/n.
        #[arg(long)]
        ring: Option<String>,
        #[arg(long, value_enum, default_value = "text")]
        report: Format,
        /// Take seed, counts, shapes and instances from a scenario file.
        #[arg(long)]
        scenario: Option<PathBuf>,
        /// Write the first counterexample found to this file.
        #[arg(long)]
        cex_out: Option<PathBuf>,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Zero the wall-clock fields of the report.
        #[arg(long)]
        no_timing: bool,
        /// Run cases on one thread.
        #[arg(long)]
        sequential: bool,
    },
    /// Re-run a serialized counterexample.
    Replay { cex: PathBuf },
    /// Compare the matrix engine with the subset-functor oracle:
    /// composition, pushforward, tensor, placement or all.
    Oracle {
        case: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 100)]
        instances: u64,
        #[arg(long, value_enum, default_value = "text")]
        report: Format,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn seed_choice(flag: Option<u64>, scenario: Option<u64>) -> Result<(u64, &'static str)> {
    if let Some(s) = flag {
        return Ok((s, "flag"));
    }
    if let Some(s) = scenario {
        return Ok((s, "scenario"));
    }
    match std::env::var("BORNCTL_SEED") {
        Ok(v) => Ok((v.trim().parse().with_context(|| format!("BORNCTL_SEED={v:?} is not an integer"))?, "env")),
        Err(_) => Ok((DEFAULT_SEED, "default")),
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json(),
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Check { scenario, report } => {
            let s = Scenario::load(&scenario).with_context(|| format!("reading {}", scenario.display()))?;
            let r = s.check()?;
            emit(
                &match report {
                    Format::Text => r.to_text(),
                    Format::Json => r.to_json(),
                },
                None,
            )?;
            Ok(r.exit_code() as u8)
        }
        Command::Suite {
            names,
            seed,
            instances,
            ring,
            report,
            scenario,
            cex_out,
            out,
            no_timing,
            sequential,
        } => {
            let scenario = scenario
                .map(|p| Scenario::load(&p).with_context(|| format!("reading {}", p.display())))
                .transpose()?;
            let (seed, source) = seed_choice(seed, scenario.as_ref().and_then(|s| s.seed))?;
            let mut opts = SuiteOptions::defaults(seed);
            if let Some(r) = ring {
                let Some(r) = RingSpec::parse_short(&r) else {
                    bail!("unknown ring {r:?}; use Z, Q or Z/n");
                };
                opts = opts.with_ring(r);
            }
            if let Some(s) = &scenario {
                opts = s.suite_options(opts)?;
            }
            opts.seed = seed;
            opts.seed_source = source.into();
            if let Some(k) = instances {
                opts.instances = k;
            }
            if sequential {
                opts.execution = Execution::Sequential;
            }
            let names = if names == ["scenario"] {
                match &scenario {
                    Some(s) if !s.suites.is_empty() => s.suites.clone(),
                    _ => bail!("`suite scenario` needs --scenario with a suites list"),
                }
            } else {
                names
            };
            let mut r = run_suites(&names, &opts)?;
            if no_timing {
                r = r.without_timing();
            }
            if let Some(p) = cex_out {
                let first = r.suites.iter().flat_map(|s| &s.laws).find_map(|l| l.first_counterexample.as_ref());
                if let Some(c) = first {
                    std::fs::write(&p, c.to_json()).with_context(|| format!("writing {}", p.display()))?;
                }
            }
            emit(&render(&r, report), out.as_ref())?;
            Ok(r.exit_code() as u8)
        }
        Command::Replay { cex } => {
            let text = std::fs::read_to_string(&cex).with_context(|| format!("reading {}", cex.display()))?;
            let c: Counterexample = serde_json::from_str(&text).map_err(ScenarioError::from)?;
            if c.format_version != bornctl::verify::report::FORMAT_VERSION {
                return Err(ScenarioError::Version(c.format_version).into());
            }
            let (same, outcome) = replay(&c).map_err(|e| anyhow::anyhow!(e))?;
            match (same, outcome) {
                (true, Outcome::Fail(e)) => {
                    println!("reproduced {}/{} case {}: {}: {}", c.suite, c.law, c.case, e.class, e.message);
                    Ok(1)
                }
                (true, Outcome::Unknown(m)) => {
                    println!("reproduced unknown verdict: {m}");
                    Ok(2)
                }
                (_, Outcome::Pass) => {
                    println!("{}/{} case {} now passes", c.suite, c.law, c.case);
                    Ok(0)
                }
                (_, Outcome::Fail(e)) => {
                    println!("different failure {}: {} (recorded {})", e.class, e.message, c.error.class);
                    Ok(1)
                }
                (_, Outcome::Unknown(m)) => {
                    println!("unknown verdict: {m} (recorded {})", c.error.class);
                    Ok(2)
                }
            }
        }
        Command::Oracle { case, seed, instances, report } => {
            let (seed, source) = seed_choice(seed, None)?;
            let mut opts = SuiteOptions::defaults(seed);
            opts.seed_source = source.into();
            opts.instances = instances;
            let laws: Vec<&str> = match case.as_str() {
                "composition" => vec!["oracle_composition"],
                "pushforward" => vec!["oracle_pushforward"],
                "tensor" => vec!["oracle_tensor"],
                "placement" => vec!["equivariance_placement"],
                "all" => vec!["oracle_composition", "oracle_pushforward", "oracle_tensor", "equivariance_placement"],
                other => bail!("unknown oracle case {other:?}; use composition, pushforward, tensor, placement or all"),
            };
            let mut suites = Vec::new();
            for l in laws {
                suites.push(run_single("oracle", l, &opts)?);
            }
            let mut merged = suites.remove(0);
            for s in suites {
                merged.laws.extend(s.laws);
            }
            let merged = bornctl::verify::report::SuiteReport::new("oracle", merged.laws);
            let r = Report::new(seed, source, instances, vec![merged]);
            emit(&render(&r, report), None)?;
            Ok(r.exit_code() as u8)
        }
    }
}
