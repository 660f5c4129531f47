//! Command-line front end: exposes the solvers, generators and the witness
//! verifier with machine-readable output.
//!
//! Exit codes: 0 = Yes/success, 1 = No, 2 = budget refusal (with a resource
//! report), 3 and up = usage or input errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use qsg::arena::{mealy_from_json, mealy_to_json, Arena};
use qsg::asv;
use qsg::ds::{self, GapAnswer, GapMode};
use qsg::error::{Budget, Error};
use qsg::rational::{fmt_q, parse_q, Q};
use qsg::reductions;
use qsg::zerosum;
use qsg::Player;

#[derive(Parser)]
#[command(name = "qsg", about = "Exact Stackelberg-value solvers for games on bi-weighted graphs")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Fix the (already sequential) enumeration order; accepted for
    /// compatibility with scripted runs.
    #[arg(long, global = true)]
    deterministic: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Csv,
    Asv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Payoff {
    Mp,
    Ds,
}

#[derive(Args)]
struct ArenaArg {
    /// Arena file (line-based format, see the repository README).
    #[arg(long)]
    arena: PathBuf,
    /// Vertex id; defaults to the arena's init vertex.
    #[arg(long)]
    vertex: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether the adversarial mean-payoff Stackelberg value of a
    /// vertex strictly exceeds a rational threshold; prints a witness
    /// certificate on Yes.
    AsvMpThreshold {
        #[command(flatten)]
        arena: ArenaArg,
        /// Threshold (exact rational, e.g. 1/2).
        #[arg(long)]
        c: String,
    },
    /// Compute the adversarial mean-payoff Stackelberg value exactly.
    AsvMpValue {
        #[command(flatten)]
        arena: ArenaArg,
    },
    /// Print the region of threshold pairs (c,d) that Player 1 can force
    /// against the leader from a vertex.
    LambdaRegion {
        #[command(flatten)]
        arena: ArenaArg,
    },
    /// Re-verify a witness certificate produced by asv-mp-threshold.
    VerifyWitness {
        #[command(flatten)]
        arena: ArenaArg,
        /// Certificate JSON file.
        #[arg(long)]
        certificate: PathBuf,
    },
    /// Best response of the follower against a finite-memory leader
    /// strategy under the mean-payoff objective.
    BrMp {
        #[command(flatten)]
        arena: ArenaArg,
        /// Leader strategy (transducer JSON).
        #[arg(long)]
        strategy: PathBuf,
    },
    /// Exact CSV or ASV of a finite-memory leader strategy under the
    /// discounted-sum objective.
    DsEvaluate {
        #[command(flatten)]
        arena: ArenaArg,
        #[arg(long)]
        strategy: PathBuf,
        #[arg(long)]
        lambda: String,
        #[arg(long, value_enum)]
        mode: Mode,
    },
    /// Gap decider for the discounted-sum CSV/ASV threshold problem.
    DsGap {
        #[command(flatten)]
        arena: ArenaArg,
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        c: String,
        #[arg(long)]
        epsilon: String,
        #[arg(long, value_enum)]
        mode: Mode,
    },
    /// Generate a target-discounted-sum game and its sidecar metadata.
    GenTds {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        t: String,
        #[arg(long)]
        lambda: String,
        /// Output arena file; metadata goes to <out>.meta.json.
        #[arg(long)]
        out: PathBuf,
    },
    /// Generate a partition-reduction game with valid (lambda, epsilon, c).
    GenPartition {
        /// Comma-separated positive integer weights with an even sum.
        #[arg(long)]
        weights: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Zero-sum game value (mean payoff or discounted sum) with memoryless
    /// optimal strategies for both sides.
    Zerosum {
        #[command(flatten)]
        arena: ArenaArg,
        #[arg(long, value_enum)]
        payoff: Payoff,
        /// Weight dimension, 0 or 1.
        #[arg(long)]
        dim: usize,
        /// Maximizing player, 0 or 1.
        #[arg(long)]
        maximizer: usize,
        #[arg(long)]
        lambda: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Let clap print help/version normally; everything else is a
            // usage error.
            use clap::error::ErrorKind;
            let kind = e.kind();
            let _ = e.print();
            return if matches!(kind, ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            };
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Resource { .. } => ExitCode::from(2),
                _ => ExitCode::from(3),
            }
        }
    }
}

fn read_arena(arg: &ArenaArg) -> Result<(Arena, usize), Error> {
    let text = std::fs::read_to_string(&arg.arena)
        .map_err(|e| Error::invalid(format!("cannot read {}: {e}", arg.arena.display())))?;
    let arena = Arena::parse(&text)?;
    let vertex = match &arg.vertex {
        Some(name) => arena.vertex(name)?,
        None => arena
            .init()
            .ok_or_else(|| Error::invalid("arena has no init vertex; pass --vertex"))?,
    };
    Ok((arena, vertex))
}

fn read_json(path: &PathBuf) -> Result<serde_json::Value, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::invalid(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::invalid(format!("bad JSON: {e}")))
}

fn parse_lambda(s: &str) -> Result<Q, Error> {
    let lambda = parse_q(s)?;
    ds::DsConfig::new(lambda.clone())?;
    Ok(lambda)
}

fn emit(format: Format, value: &serde_json::Value, text: impl FnOnce() -> String) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(value).expect("valid JSON")),
        Format::Text => println!("{}", text()),
    }
}

fn run(cli: &Cli) -> Result<u8, Error> {
    let budget = Budget::from_env();
    match &cli.command {
        Command::AsvMpThreshold { arena, c } => {
            let (a, v) = read_arena(arena)?;
            let c = parse_q(c)?;
            let (yes, cert) = asv::asv_threshold(&a, v, &c, &budget)?;
            let payload = match &cert {
                Some(cert) => json!({
                    "answer": "Yes",
                    "certificate": asv::witness_to_json(&a, cert),
                }),
                None => json!({ "answer": "No" }),
            };
            emit(cli.format, &payload, || match &cert {
                Some(cert) => format!(
                    "Yes: ASV({}) > {} with witness payoff ({}, {})",
                    a.name(v),
                    fmt_q(&c),
                    fmt_q(&cert.c_prime),
                    fmt_q(&cert.d)
                ),
                None => format!("No: ASV({}) <= {}", a.name(v), fmt_q(&c)),
            });
            Ok(if yes { 0 } else { 1 })
        }
        Command::AsvMpValue { arena } => {
            let (a, v) = read_arena(arena)?;
            let res = asv::asv_value(&a, v, &budget)?;
            let payload = json!({
                "vertex": a.name(v),
                "value": fmt_q(&res.value),
                "attained": res.attained,
            });
            emit(cli.format, &payload, || {
                format!("{} (attained={})", fmt_q(&res.value), res.attained)
            });
            Ok(0)
        }
        Command::LambdaRegion { arena } => {
            let (a, v) = read_arena(arena)?;
            let region = asv::lambda_region(&a, v, &budget)?;
            let payload = json!({
                "vertex": a.name(v),
                "region": region.region.to_json(),
            });
            emit(cli.format, &payload, || {
                serde_json::to_string_pretty(&region.region.to_json()).expect("valid JSON")
            });
            Ok(0)
        }
        Command::VerifyWitness { arena, certificate } => {
            let (a, _) = read_arena(arena)?;
            let cert = asv::witness_from_json(&a, &read_json(certificate)?)?;
            let report = asv::verify_witness(&a, &cert, &budget)?;
            let payload = json!({
                "ok": report.ok,
                "work_units": report.work_units,
                "certificate_size": cert.size(),
                "failures": report.failures,
            });
            emit(cli.format, &payload, || {
                if report.ok {
                    format!("certificate verified ({} work units)", report.work_units)
                } else {
                    format!("certificate REJECTED: {}", report.failures.join("; "))
                }
            });
            Ok(if report.ok { 0 } else { 1 })
        }
        Command::BrMp { arena, strategy } => {
            let (a, v) = read_arena(arena)?;
            let s = mealy_from_json(&a, &read_json(strategy)?)?;
            let (value, lasso) = asv::best_response_mp(&a, &s, v)?;
            let names = |vs: &[usize]| -> Vec<String> {
                vs.iter().map(|&u| a.name(u).to_string()).collect()
            };
            let payload = json!({
                "value": fmt_q(&value),
                "response": { "prefix": names(&lasso.prefix), "cycle": names(&lasso.cycle) },
            });
            emit(cli.format, &payload, || {
                format!(
                    "best-response value {} via lasso {:?} . {:?}^w",
                    fmt_q(&value),
                    names(&lasso.prefix),
                    names(&lasso.cycle)
                )
            });
            Ok(0)
        }
        Command::DsEvaluate { arena, strategy, lambda, mode } => {
            let (a, v) = read_arena(arena)?;
            let lambda = parse_lambda(lambda)?;
            let s = mealy_from_json(&a, &read_json(strategy)?)?;
            let mode = match mode {
                Mode::Csv => GapMode::Csv,
                Mode::Asv => GapMode::Asv,
            };
            let value = ds::evaluate_strategy(&a, &lambda, &s, v, mode)?;
            let payload = json!({ "value": fmt_q(&value) });
            emit(cli.format, &payload, || fmt_q(&value));
            Ok(0)
        }
        Command::DsGap { arena, lambda, c, epsilon, mode } => {
            let (a, v) = read_arena(arena)?;
            let lambda = parse_lambda(lambda)?;
            let c = parse_q(c)?;
            let epsilon = parse_q(epsilon)?;
            let mode = match mode {
                Mode::Csv => GapMode::Csv,
                Mode::Asv => GapMode::Asv,
            };
            let verdict = ds::gap_decide(&a, &lambda, v, &c, &epsilon, mode, &budget)?;
            let payload = json!({
                "answer": match verdict.answer { GapAnswer::Yes => "Yes", GapAnswer::No => "No" },
                "witness_value": verdict.witness_value.as_ref().map(fmt_q),
                "candidates_evaluated": verdict.candidates_evaluated.to_string(),
                "witness": verdict.witness.as_ref().map(|s| mealy_to_json(&a, s)),
            });
            emit(cli.format, &payload, || match verdict.answer {
                GapAnswer::Yes => format!(
                    "Yes (witness value {}, {} candidates evaluated)",
                    fmt_q(verdict.witness_value.as_ref().expect("witness on Yes")),
                    verdict.candidates_evaluated
                ),
                GapAnswer::No => {
                    format!("No ({} candidates evaluated)", verdict.candidates_evaluated)
                }
            });
            Ok(match verdict.answer {
                GapAnswer::Yes => 0,
                GapAnswer::No => 1,
            })
        }
        Command::GenTds { a, b, t, lambda, out } => {
            let instance = reductions::TdsInstance {
                a: parse_q(a)?,
                b: parse_q(b)?,
                t: parse_q(t)?,
                lambda: parse_lambda(lambda)?,
            };
            let (arena, _) = reductions::build_tds_reduction(&instance)?;
            write_generated(out, &arena, &reductions::tds_metadata(&instance))?;
            emit(cli.format, &json!({ "arena": out.display().to_string() }), || {
                format!("wrote {} and {}.meta.json", out.display(), out.display())
            });
            Ok(0)
        }
        Command::GenPartition { weights, out } => {
            let weights: Result<Vec<u64>, _> =
                weights.split(',').map(|w| w.trim().parse::<u64>()).collect();
            let weights =
                weights.map_err(|_| Error::invalid("weights must be positive integers"))?;
            let instance = reductions::PartitionInstance::new(weights)?;
            let red = reductions::build_partition_reduction(&instance)?;
            write_generated(out, &red.arena, &reductions::partition_metadata(&instance, &red))?;
            emit(
                cli.format,
                &json!({
                    "arena": out.display().to_string(),
                    "lambda": fmt_q(&red.lambda),
                    "epsilon": fmt_q(&red.epsilon),
                    "threshold": fmt_q(&red.threshold),
                }),
                || {
                    format!(
                        "wrote {} (lambda={}, epsilon={}, c={})",
                        out.display(),
                        fmt_q(&red.lambda),
                        fmt_q(&red.epsilon),
                        fmt_q(&red.threshold)
                    )
                },
            );
            Ok(0)
        }
        Command::Zerosum { arena, payoff, dim, maximizer, lambda } => {
            let (a, v) = read_arena(arena)?;
            if *dim > 1 {
                return Err(Error::invalid("dimension must be 0 or 1"));
            }
            let maximizer = match maximizer {
                0 => Player::P0,
                1 => Player::P1,
                _ => return Err(Error::invalid("maximizer must be 0 or 1")),
            };
            let result = match payoff {
                Payoff::Mp => zerosum::mp_game_value(&a, *dim, maximizer, v, &budget)?,
                Payoff::Ds => {
                    let lambda = parse_lambda(
                        lambda.as_deref().ok_or_else(|| Error::invalid("ds needs --lambda"))?,
                    )?;
                    zerosum::ds_game_value(&a, &lambda, *dim, maximizer, v)
                }
            };
            let payload = json!({
                "value": fmt_q(&result.value),
                "strategy_max": mealy_to_json(&a, &result.optimal_strategy_max),
                "strategy_min": mealy_to_json(&a, &result.optimal_strategy_min),
            });
            emit(cli.format, &payload, || fmt_q(&result.value));
            Ok(0)
        }
    }
}

fn write_generated(
    out: &PathBuf,
    arena: &Arena,
    metadata: &serde_json::Value,
) -> Result<(), Error> {
    std::fs::write(out, arena.serialize())
        .map_err(|e| Error::invalid(format!("cannot write {}: {e}", out.display())))?;
    let meta_path = format!("{}.meta.json", out.display());
    std::fs::write(&meta_path, serde_json::to_string_pretty(metadata).expect("valid JSON"))
        .map_err(|e| Error::invalid(format!("cannot write {meta_path}: {e}")))?;
    Ok(())
}
