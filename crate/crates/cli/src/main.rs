//! `ulam`: build, exercise and audit permutation codes in the Ulam metric.
//!
//! Exit status is 0 on success, 1 on a domain failure (decode failure,
//! failed audit, unreadable input) and 2 on a usage or configuration error.
//! Every failure prints exactly one line `error: <kind>: <message>` to stderr.

mod config;

use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use serde_json::json;
use ulam_core::channel::relocate;
use ulam_core::perm::read_permutations;
use ulam_core::ulam::{stage_trace, ShufflerTuple, StageLayout};
use ulam_core::verify::{audit_pairwise, decoder_sweep, rate_report, AuditMode, InstanceSummary};
use ulam_core::{ulam_distance, Permutation, UlamCode};

use config::{parse_ground, InstanceConfig};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Config(String),
    Domain { kind: &'static str, message: String },
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    pub fn domain(kind: &'static str, msg: impl Into<String>) -> Self {
        CliError::Domain { kind, message: msg.into() }
    }

    pub fn io(path: &Path, e: io::Error) -> Self {
        CliError::domain("io", format!("{}: {e}", path.display()))
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Config(_) => 2,
            CliError::Domain { .. } => 1,
        }
    }

    fn line(&self) -> String {
        let (kind, msg) = match self {
            CliError::Usage(m) => ("usage", m.as_str()),
            CliError::Config(m) => ("config", m.as_str()),
            CliError::Domain { kind, message } => (*kind, message.as_str()),
        };
        format!("error: {kind}: {}", msg.replace('\n', " "))
    }
}

#[derive(Parser)]
#[command(name = "ulam", version, about = "Explicit permutation codes in the Ulam metric")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Instance selection; flags override `--config`.
#[derive(Args, Debug, Clone)]
struct InstanceArgs {
    /// `key = value` file with q, levels, ground, code, seed
    #[arg(long)]
    config: Option<PathBuf>,
    /// Ground-set size q (n = q^levels)
    #[arg(long)]
    q: Option<usize>,
    /// Number of stages
    #[arg(long)]
    levels: Option<usize>,
    /// Ground-set source: xor:all | xor:gv:D | xor:words:W,.. | bruteforce:L[:P[:BUDGET]] | file:PATH
    #[arg(long)]
    ground: Option<String>,
    /// Shuffler-code source: rs:F,N,K | gv:D | gv:Q,N,D | rep | identity | concat:A+B | file:PATH
    #[arg(long)]
    code: Option<String>,
}

impl InstanceArgs {
    fn resolve(&self, seed: Option<u64>) -> Result<InstanceConfig, CliError> {
        let base = match &self.config {
            Some(path) => InstanceConfig::from_file(path)?,
            None => InstanceConfig::default(),
        };
        Ok(base.overridden_by(InstanceConfig {
            q: self.q,
            levels: self.levels,
            ground: self.ground.clone(),
            code: self.code.clone(),
            seed,
        }))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build a ground set and print it in the ground-set text format
    GenGroundSet {
        #[arg(long)]
        q: usize,
        /// Same syntax as --ground
        #[arg(long)]
        source: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Validate an instance and print its parameters, bounds and rate
    Build {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Print the report as JSON
        #[arg(long)]
        json: bool,
    },
    /// Encode a decimal message, or raw shufflers with --shufflers
    Encode {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Decimal message index
        #[arg(long, conflicts_with = "shufflers", required_unless_present = "shufflers")]
        msg: Option<String>,
        /// Raw shufflers `w1;w2;..`, digits separated by commas; bypasses the shuffler code
        #[arg(long)]
        shufflers: Option<String>,
        /// Also print every intermediate stage
        #[arg(long)]
        trace: bool,
    },
    /// Decode the permutation in FILE and print the message
    Decode {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Permutation file
        #[arg(long)]
        perm: PathBuf,
        /// Also print the codeword and its distance
        #[arg(long)]
        verbose: bool,
    },
    /// Ulam distance between the permutations in two files
    Distance { a: PathBuf, b: PathBuf },
    /// Apply T random relocations to the permutation in FILE
    Corrupt {
        /// Permutation file
        #[arg(long)]
        perm: PathBuf,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        seed: u64,
        /// Write the relocation trace here
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Pairwise distance audit against the certified bound
    Audit {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Check every pair of codewords
        #[arg(long, conflicts_with = "sample")]
        exhaustive: bool,
        /// Number of sampled pairs
        #[arg(long, requires = "seed")]
        sample: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        json: bool,
        /// Include elapsed time in the report
        #[arg(long)]
        timings: bool,
    },
    /// Decoder success rates under random relocations
    Sweep {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Relocation counts, comma separated
        #[arg(long, value_delimiter = ',', required = true)]
        t_list: Vec<usize>,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
}

fn read_one_perm(path: &Path) -> Result<Permutation, CliError> {
    let f = File::open(path).map_err(|e| CliError::io(path, e))?;
    let mut perms = read_permutations(BufReader::new(f))
        .map_err(|e| CliError::domain("parse", format!("{}: {e}", path.display())))?;
    match perms.len() {
        1 => Ok(perms.remove(0)),
        k => Err(CliError::domain("parse", format!("{}: expected one permutation, found {k}", path.display()))),
    }
}

fn emit(out: &mut impl Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes()).map_err(|e| CliError::domain("io", e.to_string()))
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize") + "\n"
}

fn describe_instance(code: &UlamCode) -> String {
    let s = InstanceSummary::of(code);
    let b = code.code_bounds();
    let r = rate_report(code);
    let radius = code.max_correctable().map_or("none".to_string(), |d| d.to_string());
    format!(
        "q: {}\nlevels: {}\nn: {}\np: {}\ncertified_max_lcs: {}\nshuffler_code: {}\n\
         shuffler_params: [{}, {}, {}] radius {}\nmessages: {}\n\
         delta_c: {:.6}\nepsilon_d: {:.6}\ndelta_d: {:.6}\nlcs_upper: {}\ndistance_bound: {}\n\
         max_correctable: {}\nrate: {:.9}\nrate_lower: {:.9}\n",
        s.q,
        s.levels,
        s.n,
        s.p,
        s.certified_max_lcs,
        s.shuffler_code,
        s.shuffler_length,
        s.shuffler_dimension,
        s.shuffler_distance,
        s.shuffler_radius,
        s.message_count,
        b.delta_c,
        b.epsilon_d,
        b.delta_d,
        b.lcs_upper,
        b.dist_lower,
        radius,
        r.rate,
        r.rate_lower,
    )
}

fn run(cli: Cli, out: &mut impl Write) -> Result<(), CliError> {
    match cli.command {
        Command::GenGroundSet { q, source, seed, out: path } => {
            let g = parse_ground(q, &source, seed)?;
            let mut buf = Vec::new();
            g.write_to(&mut buf).map_err(|e| CliError::domain("io", e.to_string()))?;
            match path {
                Some(p) => std::fs::write(&p, buf).map_err(|e| CliError::io(&p, e)),
                None => emit(out, std::str::from_utf8(&buf).expect("ascii")),
            }
        }
        Command::Build { instance, json } => {
            let code = instance.resolve(None)?.build()?;
            if json {
                let doc = json!({
                    "instance": InstanceSummary::of(&code),
                    "bounds": code.code_bounds(),
                    "max_correctable": code.max_correctable(),
                    "rate": rate_report(&code),
                });
                emit(out, &to_json(&doc))
            } else {
                emit(out, &describe_instance(&code))
            }
        }
        Command::Encode { instance, msg, shufflers, trace } => {
            let cfg = instance.resolve(None)?;
            let stages = match (&msg, &shufflers) {
                (_, Some(raw)) => {
                    let tuple = ShufflerTuple::parse(raw).map_err(|e| CliError::usage(e.to_string()))?;
                    let layout =
                        StageLayout::new(cfg.q()?, cfg.levels()?).map_err(|e| CliError::config(e.to_string()))?;
                    stage_trace(&layout, &cfg.ground_set()?, &tuple)
                        .map_err(|e| CliError::domain("invalid-shufflers", e.to_string()))?
                }
                (Some(m), None) => {
                    let x = BigUint::from_str(m.trim())
                        .map_err(|_| CliError::usage(format!("--msg {m:?} is not a decimal integer")))?;
                    let code = cfg.build()?;
                    let tuple = code
                        .message_to_shufflers(&x)
                        .map_err(|e| CliError::domain("message-out-of-range", e.to_string()))?;
                    stage_trace(code.layout(), code.ground(), &tuple)
                        .map_err(|e| CliError::domain("encode", e.to_string()))?
                }
                (None, None) => return Err(CliError::usage("encode needs --msg or --shufflers")),
            };
            if trace {
                for (i, s) in stages.iter().enumerate() {
                    emit(out, &format!("# stage {i}\n"))?;
                    emit(out, &format!("{s}\n"))?;
                }
                Ok(())
            } else {
                emit(out, &format!("{}\n", stages.last().expect("identity stage")))
            }
        }
        Command::Decode { instance, perm, verbose } => {
            let code = instance.resolve(None)?.build()?;
            let received = read_one_perm(&perm)?;
            let decoded = code.decode(&received).map_err(|e| match e {
                ulam_core::UlamError::DecodeFailure(f) => CliError::domain("decode-failure", f.to_string()),
                other => CliError::domain("decode", other.to_string()),
            })?;
            emit(out, &format!("{}\n", decoded.message))?;
            if verbose {
                emit(out, &format!("# codeword {}\n# distance {}\n", decoded.codeword, decoded.distance))?;
            }
            Ok(())
        }
        Command::Distance { a, b } => {
            let (pa, pb) = (read_one_perm(&a)?, read_one_perm(&b)?);
            let d = ulam_distance(&pa, &pb).map_err(|e| CliError::domain("distance", e.to_string()))?;
            emit(out, &format!("{d}\n"))
        }
        Command::Corrupt { perm, t, seed, trace } => {
            let p = read_one_perm(&perm)?;
            let (q, tr) = relocate(&p, t, seed).map_err(|e| CliError::usage(format!("--t: {e}")))?;
            if let Some(path) = trace {
                let mut buf = Vec::new();
                tr.write_to(&mut buf).map_err(|e| CliError::domain("io", e.to_string()))?;
                std::fs::write(&path, buf).map_err(|e| CliError::io(&path, e))?;
            }
            emit(out, &format!("{q}\n"))
        }
        Command::Audit { instance, exhaustive, sample, seed, json, timings } => {
            let code = instance.resolve(seed)?.build()?;
            let mode = match (exhaustive, sample, seed) {
                (_, Some(pairs), Some(seed)) => AuditMode::Sample { pairs, seed },
                (_, Some(_), None) => return Err(CliError::usage("--sample needs --seed")),
                _ => AuditMode::Exhaustive,
            };
            let mut r = audit_pairwise(&code, mode).map_err(|e| CliError::domain("audit", e.to_string()))?;
            if !timings {
                r.elapsed_ms = None;
            }
            if json {
                emit(out, &to_json(&r))?;
            } else {
                let worst = r.worst_pair.as_ref().map_or("none".into(), |(a, b)| format!("{a} {b}"));
                let min = r.min_distance.map_or("none".into(), |d| d.to_string());
                let mut text = format!(
                    "mode: {}\npairs: {}\nmin_distance: {min}\nworst_pair: {worst}\ndist_lower: {}\n\
                     violations: {}\ninjective: {}\npass: {}\n",
                    r.mode, r.pairs_checked, r.dist_lower, r.violations, r.injective, r.pass
                );
                if let Some(seed) = r.seed {
                    text.push_str(&format!("seed: {seed}\n"));
                }
                if let Some(ms) = r.elapsed_ms {
                    text.push_str(&format!("elapsed_ms: {ms}\n"));
                }
                emit(out, &text)?;
            }
            if r.pass {
                Ok(())
            } else {
                Err(CliError::domain("audit-failed", format!("{} violations, injective {}", r.violations, r.injective)))
            }
        }
        Command::Sweep { instance, t_list, trials, seed, json } => {
            let code = instance.resolve(Some(seed))?.build()?;
            let r = decoder_sweep(&code, &t_list, trials, seed).map_err(|e| CliError::usage(e.to_string()))?;
            if json {
                emit(out, &to_json(&r))?;
            } else {
                let radius = r.max_correctable.map_or("none".into(), |d| d.to_string());
                let mut text = format!("distance_bound: {}\nmax_correctable: {radius}\nseed: {seed}\n", r.distance_bound);
                text.push_str("t trials success failures wrong in_radius in_radius_violations success_rate\n");
                for row in &r.rows {
                    text.push_str(&format!(
                        "{} {} {} {} {} {} {} {:.4}\n",
                        row.t,
                        row.trials,
                        row.success,
                        row.decode_failures,
                        row.wrong_decodes,
                        row.within_radius,
                        row.within_radius_violations,
                        row.success_rate()
                    ));
                }
                emit(out, &text)?;
            }
            if r.pass {
                Ok(())
            } else {
                Err(CliError::domain("sweep-failed", "decoding failed inside the guaranteed radius"))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("bad arguments").trim_start_matches("error: ");
            eprintln!("{}", CliError::usage(first).line());
            return ExitCode::from(2);
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match run(cli, &mut out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let _ = out.flush();
            eprintln!("{}", e.line());
            ExitCode::from(e.exit_code())
        }
    }
}
