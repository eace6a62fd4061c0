use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use permposet::disconnect::{self, AugmentMode};
use permposet::mobius;
use permposet::pattern;
use permposet::perm::Permutation;
use permposet::scan::{self, ScanRecord};
use permposet::subword::{self, CertifyOutcome, Forest, Word};
use permposet::topology::{self, Field, DEFAULT_MAX_FACES};

/// Intervals of the permutation pattern poset and of generalized subword
/// order: construction, Möbius functions, disconnectivity, shellability
/// certificates, and order-complex homology.
#[derive(Parser)]
#[command(name = "permposet", version, max_term_width = 100)]
struct Cli {
    /// Worker threads for scans and subinterval checks (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a closed interval [SIGMA, TAU] and print it as JSON.
    Interval {
        sigma: String,
        tau: String,
        /// Also report rank sizes, unimodality, and the Sperner verdict.
        #[arg(long)]
        stats: bool,
        /// Use the open interval for the antichain statistics.
        #[arg(long)]
        open: bool,
    },
    /// Möbius function of [SIGMA, TAU] by one or all applicable methods.
    Mobius {
        sigma: String,
        tau: String,
        /// brute | decomposable | skew | head-ones | head-repeated | all
        #[arg(long, default_value = "brute")]
        method: String,
    },
    /// Disconnectivity tools.
    Disc {
        #[command(subcommand)]
        command: DiscCommand,
    },
    /// Generalized subword order over a rooted forest.
    Subword {
        #[command(subcommand)]
        command: SubwordCommand,
    },
    /// Order-complex topology of open intervals.
    Topo {
        #[command(subcommand)]
        command: TopoCommand,
    },
    /// Exhaustive scans; exit code 1 when a violation is found.
    Scan {
        #[command(subcommand)]
        command: ScanCommand,
    },
    /// Rebuild all pinned posets and worked chains and diff them.
    Fixtures,
}

#[derive(Subcommand)]
enum DiscCommand {
    /// Decide whether (SIGMA, TAU) is disconnected.
    Check { sigma: String, tau: String },
    /// Stream all disconnected rank->=3 intervals with |tau| <= max-n.
    Scan {
        #[arg(long = "max-n")]
        max_n: usize,
        #[command(flatten)]
        output: ScanOutput,
    },
    /// Monte Carlo frequency of containing SIGMA+SIGMA, against the
    /// analytic lower bound.
    Mc {
        #[arg(long)]
        sigma: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Augment a disconnected interval by a permutation.
    Augment {
        sigma: String,
        tau: String,
        alpha: String,
        /// sum-left | skew-left | sum-right | skew-right
        #[arg(long, default_value = "sum-left")]
        mode: String,
    },
}

#[derive(Subcommand)]
enum SubwordCommand {
    /// Certify [U, W] dual CL-shellable or refute it.
    Certify {
        u: String,
        w: String,
        /// Forest alphabet as JSON {"nodes":[{"id":..,"parent":..},..]};
        /// defaults to the chain of positive integers.
        #[arg(long)]
        forest: Option<std::path::PathBuf>,
    },
    /// Build the word interval [U, W] and print it as JSON.
    Interval {
        u: String,
        w: String,
        #[arg(long)]
        forest: Option<std::path::PathBuf>,
    },
}

#[derive(Subcommand)]
enum TopoCommand {
    /// f-vector, reduced Betti numbers, Euler characteristic, Möbius value.
    Betti {
        sigma: String,
        tau: String,
        #[command(flatten)]
        field: FieldArg,
        #[arg(long = "max-faces", default_value_t = DEFAULT_MAX_FACES)]
        max_faces: usize,
    },
    /// Cohen-Macaulayness over a field, with the first failing subinterval.
    Cm {
        sigma: String,
        tau: String,
        #[command(flatten)]
        field: FieldArg,
        #[arg(long = "max-faces", default_value_t = DEFAULT_MAX_FACES)]
        max_faces: usize,
    },
}

#[derive(Subcommand)]
enum ScanCommand {
    /// All disconnected rank->=3 intervals up to the bound.
    Disconnected {
        #[arg(long = "max-n")]
        max_n: usize,
        #[command(flatten)]
        output: ScanOutput,
    },
    /// Rank-unimodality violations up to the bound (expected: none).
    Unimodal {
        #[arg(long = "max-n")]
        max_n: usize,
        #[command(flatten)]
        output: ScanOutput,
    },
    /// Möbius method disagreements up to the bound (expected: none).
    Mobius {
        #[arg(long = "max-n")]
        max_n: usize,
        #[command(flatten)]
        output: ScanOutput,
    },
}

#[derive(Args)]
struct ScanOutput {
    /// Append an aggregate summary line.
    #[arg(long)]
    summary: bool,
    /// Record wall-clock times (breaks byte-for-byte determinism).
    #[arg(long)]
    timings: bool,
}

#[derive(Args)]
struct FieldArg {
    /// q for the rationals, or a prime (2, 3, ...).
    #[arg(long, default_value = "q")]
    field: String,
}

impl FieldArg {
    fn parse(&self) -> Result<Field, String> {
        if self.field.eq_ignore_ascii_case("q") {
            return Ok(Field::Rational);
        }
        let p: u64 = self
            .field
            .parse()
            .map_err(|_| format!("field must be q or a prime, got {:?}", self.field))?;
        if p < 2 || (2..p).take(1000).any(|d| d * d <= p && p.is_multiple_of(d)) {
            return Err(format!("{p} is not a prime"));
        }
        Ok(Field::Prime(p))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .is_err()
        {
            eprintln!("warning: thread pool already initialized");
        }
    }
    match run(cli.command) {
        Ok(violations_found) => {
            if violations_found {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn parse_perm(s: &str) -> Result<Permutation, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn parse_word(s: &str) -> Result<Word, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn load_forest(path: &Option<std::path::PathBuf>, words: &[&Word]) -> Result<Forest, String> {
    match path {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| format!("{e}"))?;
            Forest::from_json(&text).map_err(|e| format!("{e}"))
        }
        None => Ok(subword::chain_for(words)),
    }
}

/// Writes one output line; exits quietly if the reader hung up.
fn print_line(line: impl std::fmt::Display) {
    use std::io::Write;
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    if let Err(e) = writeln!(lock, "{line}") {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: cannot write to stdout: {e}");
        std::process::exit(1);
    }
}

fn emit(value: serde_json::Value) {
    print_line(value);
}

fn emit_records(records: &[ScanRecord], output: &ScanOutput, kind: &str) -> bool {
    for record in records {
        print_line(serde_json::to_string(record).expect("serializable"));
    }
    if output.summary {
        emit(json!({
            "kind": "summary",
            "scan": kind,
            "records": records.len(),
        }));
    }
    !records.is_empty()
}

fn run(command: Command) -> Result<bool, String> {
    match command {
        Command::Interval {
            sigma,
            tau,
            stats,
            open,
        } => {
            let sigma = parse_perm(&sigma)?;
            let tau = parse_perm(&tau)?;
            let interval = pattern::build_interval(&sigma, &tau).map_err(|e| format!("{e}"))?;
            let mut value = interval.to_json();
            if stats {
                value["rank_sizes"] = json!(interval.rank_sizes());
                value["rank_unimodal"] = json!(interval.is_rank_unimodal());
                value["max_antichain"] = json!(interval.max_antichain_size(open));
                value["sperner"] = json!(interval.is_sperner(open));
                value["antichain_scope"] = json!(if open { "open" } else { "closed" });
                value["is_chain"] =
                    json!(pattern::is_chain(&sigma, &tau).map_err(|e| format!("{e}"))?);
                let components: Vec<usize> =
                    interval.open_components().iter().map(|c| c.len()).collect();
                value["open_component_sizes"] = json!(components);
            }
            emit(value);
            Ok(false)
        }
        Command::Mobius { sigma, tau, method } => {
            let sigma = parse_perm(&sigma)?;
            let tau = parse_perm(&tau)?;
            let run_method = |name: &str| -> Result<Option<permposet::BigInt>, String> {
                Ok(match name {
                    "brute" => {
                        Some(mobius::mobius_brute(&sigma, &tau).map_err(|e| format!("{e}"))?)
                    }
                    "decomposable" => Some(
                        mobius::mobius_decomposable(&sigma, &tau).map_err(|e| format!("{e}"))?,
                    ),
                    "skew" => Some(
                        mobius::mobius_skew_variant(&sigma, &tau).map_err(|e| format!("{e}"))?,
                    ),
                    "head-ones" => mobius::mobius_head_ones(&sigma, &tau).ok(),
                    "head-repeated" => mobius::mobius_head_repeated(&sigma, &tau).ok(),
                    other => return Err(format!("unknown method {other:?}")),
                })
            };
            let mu_json = |value: &permposet::BigInt| match i64::try_from(value.clone()) {
                Ok(small) => json!(small),
                Err(_) => json!(value.to_string()),
            };
            if method == "all" {
                for name in [
                    "brute",
                    "decomposable",
                    "skew",
                    "head-ones",
                    "head-repeated",
                ] {
                    if let Ok(Some(value)) = run_method(name) {
                        emit(json!({
                            "sigma": sigma.to_string(),
                            "tau": tau.to_string(),
                            "mu": mu_json(&value),
                            "method": name,
                        }));
                    }
                }
            } else {
                match run_method(&method)? {
                    Some(value) => emit(json!({
                        "sigma": sigma.to_string(),
                        "tau": tau.to_string(),
                        "mu": mu_json(&value),
                        "method": method,
                    })),
                    None => return Err(format!("method {method:?} is not applicable here")),
                }
            }
            Ok(false)
        }
        Command::Disc { command } => run_disc(command),
        Command::Subword { command } => run_subword(command),
        Command::Topo { command } => run_topo(command),
        Command::Scan { command } => match command {
            ScanCommand::Disconnected { max_n, output } => {
                let records =
                    scan::scan_disconnected(max_n, output.timings).map_err(|e| format!("{e}"))?;
                // Disconnected intervals are findings, not violations.
                emit_records(&records, &output, "disconnected");
                Ok(false)
            }
            ScanCommand::Unimodal { max_n, output } => {
                let records =
                    scan::scan_unimodal(max_n, output.timings).map_err(|e| format!("{e}"))?;
                Ok(emit_records(&records, &output, "unimodal"))
            }
            ScanCommand::Mobius { max_n, output } => {
                let records = scan::scan_mobius_agreement(max_n, output.timings)
                    .map_err(|e| format!("{e}"))?;
                Ok(emit_records(&records, &output, "mobius"))
            }
        },
        Command::Fixtures => {
            let report = scan::run_fixtures();
            for result in &report.results {
                print_line(serde_json::to_string(result).expect("serializable"));
            }
            Ok(!report.all_passed())
        }
    }
}

fn run_disc(command: DiscCommand) -> Result<bool, String> {
    match command {
        DiscCommand::Check { sigma, tau } => {
            let sigma = parse_perm(&sigma)?;
            let tau = parse_perm(&tau)?;
            let (disconnected, partition) =
                disconnect::is_disconnected(&sigma, &tau).map_err(|e| format!("{e}"))?;
            let rank = tau.len() - sigma.len();
            let mut value = json!({
                "sigma": sigma.to_string(),
                "tau": tau.to_string(),
                "rank": rank,
                "disconnected": disconnected,
            });
            if disconnected && rank == 2 {
                value["note"] = json!(
                    "disconnected but trivially shellable: the order complex is 0-dimensional"
                );
            }
            if let Some(p) = partition {
                value["partition"] = json!({
                    "side_one": p.side_one.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
                    "side_two": p.side_two.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
                });
            }
            emit(value);
            Ok(false)
        }
        DiscCommand::Scan { max_n, output } => {
            let records =
                scan::scan_disconnected(max_n, output.timings).map_err(|e| format!("{e}"))?;
            emit_records(&records, &output, "disconnected");
            Ok(false)
        }
        DiscCommand::Mc {
            sigma,
            n,
            trials,
            seed,
        } => {
            let sigma = parse_perm(&sigma)?;
            let report = disconnect::monte_carlo_prevalence(&sigma, n, trials, seed)
                .map_err(|e| format!("{e}"))?;
            emit(serde_json::to_value(&report).expect("serializable"));
            Ok(false)
        }
        DiscCommand::Augment {
            sigma,
            tau,
            alpha,
            mode,
        } => {
            let sigma = parse_perm(&sigma)?;
            let tau = parse_perm(&tau)?;
            let alpha = parse_perm(&alpha)?;
            let mode = match mode.as_str() {
                "sum-left" => AugmentMode::SumLeft,
                "skew-left" => AugmentMode::SkewLeft,
                "sum-right" => AugmentMode::SumRight,
                "skew-right" => AugmentMode::SkewRight,
                other => return Err(format!("unknown mode {other:?}")),
            };
            let (s, t) = disconnect::augment(&sigma, &tau, &alpha, mode);
            emit(json!({
                "sigma": s.to_string(),
                "tau": t.to_string(),
            }));
            Ok(false)
        }
    }
}

fn run_subword(command: SubwordCommand) -> Result<bool, String> {
    match command {
        SubwordCommand::Certify { u, w, forest } => {
            let u = parse_word(&u)?;
            let w = parse_word(&w)?;
            let forest = load_forest(&forest, &[&u, &w])?;
            let outcome = subword::certify_dual_cl(&forest, &u, &w).map_err(|e| format!("{e}"))?;
            let value = match &outcome {
                CertifyOutcome::Certified => json!({
                    "u": u.to_string(),
                    "w": w.to_string(),
                    "verdict": "certified",
                }),
                CertifyOutcome::Refuted { witness } => json!({
                    "u": u.to_string(),
                    "w": w.to_string(),
                    "verdict": "refuted",
                    "witness": {
                        "lower": witness.lower.to_string(),
                        "upper": witness.upper.to_string(),
                        "embedding": witness.embedding.to_string(),
                        "letter": witness.letter,
                        "i": witness.i,
                        "j": witness.j,
                    },
                }),
                CertifyOutcome::LabelCheckFailed { lower, upper } => json!({
                    "u": u.to_string(),
                    "w": w.to_string(),
                    "verdict": "label-check-failed",
                    "witness": { "lower": lower.to_string(), "upper": upper.to_string() },
                }),
            };
            emit(value);
            Ok(matches!(outcome, CertifyOutcome::LabelCheckFailed { .. }))
        }
        SubwordCommand::Interval { u, w, forest } => {
            let u = parse_word(&u)?;
            let w = parse_word(&w)?;
            let forest = load_forest(&forest, &[&u, &w])?;
            let interval =
                subword::build_word_interval(&forest, &u, &w).map_err(|e| format!("{e}"))?;
            emit(interval.to_json());
            Ok(false)
        }
    }
}

fn run_topo(command: TopoCommand) -> Result<bool, String> {
    match command {
        TopoCommand::Betti {
            sigma,
            tau,
            field,
            max_faces,
        } => {
            let sigma = parse_perm(&sigma)?;
            let tau = parse_perm(&tau)?;
            let field = field.parse()?;
            let interval = pattern::build_interval(&sigma, &tau).map_err(|e| format!("{e}"))?;
            let complex =
                topology::order_complex(&interval, max_faces).map_err(|e| format!("{e}"))?;
            let betti = topology::betti_numbers(&complex, field);
            let chi = topology::reduced_euler_characteristic(&complex);
            let mu = mobius::mobius_brute(&sigma, &tau).map_err(|e| format!("{e}"))?;
            emit(json!({
                "sigma": sigma.to_string(),
                "tau": tau.to_string(),
                "field": field.to_string(),
                "dim": complex.dim,
                "f_vector": complex.f_vector(),
                "betti_from_dim_minus_one": betti.as_slice(),
                "euler_reduced": chi.to_string(),
                "mu": mu.to_string(),
                "euler_matches_mu": chi == mu,
                "wedge_of_spheres": topology::wedge_of_spheres_check(&interval, field, max_faces)
                    .map_err(|e| format!("{e}"))?,
            }));
            Ok(false)
        }
        TopoCommand::Cm {
            sigma,
            tau,
            field,
            max_faces,
        } => {
            let sigma = parse_perm(&sigma)?;
            let tau = parse_perm(&tau)?;
            let field = field.parse()?;
            let interval = pattern::build_interval(&sigma, &tau).map_err(|e| format!("{e}"))?;
            let (is_cm, failing) = topology::is_cohen_macaulay(&interval, field, max_faces)
                .map_err(|e| format!("{e}"))?;
            let mut value = json!({
                "sigma": sigma.to_string(),
                "tau": tau.to_string(),
                "field": field.to_string(),
                "cohen_macaulay": is_cm,
            });
            if let Some((x, y)) = failing {
                value["failing_subinterval"] = json!([x.to_string(), y.to_string()]);
            }
            emit(value);
            Ok(false)
        }
    }
}
