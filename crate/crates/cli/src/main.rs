//! `consim`: JSON front end to the consimilarity toolkit.
//!
//! Every command prints one JSON document on standard output carrying a
//! `schema_version` field. Failures print `{"code", "message"}` on standard
//! error and exit with status 1 (domain error) or 2 (usage or input error).

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use consim_core::commutant::{commutant_dim, oracle_commutant, parameter_basis};
use consim_core::nilstruct::{build_j, to_weyr, weyr_permutation, Partition};
use consim_core::reductions::{
    decode, encode_biquiver, encode_commuting_pair, encode_tuple, extract_witness, verify_witness, BiquiverInstance,
    BiquiverOptions, Encoding, PairInstance, PartitionOverride, TupleInstance,
};
use consim_core::semilinear::{consim_invariants, MatrixPair, DEFAULT_WORD_DEPTH};
use consim_core::{selfcheck, CMatrix};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "consim", version, about = "Exact consimilarity toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum EncodeKind {
    Pair,
    Tuple,
    Biquiver,
}

#[derive(Subcommand)]
enum Command {
    /// Encode a pair, tuple or biquiver instance as a pair (J, M).
    Encode {
        kind: EncodeKind,
        instance: PathBuf,
        /// Block orders for biquiver encodings: `p1,p2,...` or `p1:q1,...`.
        #[arg(long)]
        partition: Option<String>,
    },
    /// Recover the instance behind an encoding.
    Decode { encoding: PathBuf },
    /// Check that S carries the first encoding to the second.
    VerifyWitness {
        encoding: PathBuf,
        encoding2: PathBuf,
        s: PathBuf,
    },
    /// Read the instance-level witness off S and check every relation.
    ExtractWitness {
        encoding: PathBuf,
        encoding2: PathBuf,
        s: PathBuf,
    },
    /// Dimension and parameter basis of the solutions of conj(S)J = JS.
    CommutantBasis {
        #[arg(long)]
        partition: String,
        /// Also report every basis element and J in permuted (Weyr) order.
        #[arg(long)]
        weyr: bool,
        /// Also solve the realified system directly and report its dimension.
        #[arg(long)]
        oracle: bool,
    },
    /// Consimilarity invariants of a matrix pair.
    Invariants {
        pair: PathBuf,
        #[arg(long, default_value_t = DEFAULT_WORD_DEPTH)]
        depth: usize,
    },
    /// Run the randomized property suite.
    Selfcheck {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        trials: usize,
    },
}

#[derive(Debug)]
struct Failure {
    code: &'static str,
    message: String,
    status: u8,
}

impl From<consim_core::Error> for Failure {
    fn from(e: consim_core::Error) -> Self {
        let status = if matches!(e, consim_core::Error::Parse(_)) { 2 } else { 1 };
        Failure {
            code: e.code(),
            message: e.to_string(),
            status,
        }
    }
}

fn usage(code: &'static str, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
        status: 2,
    }
}

#[derive(Serialize)]
struct Output<T: Serialize> {
    schema_version: u32,
    #[serde(flatten)]
    body: T,
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage("io", format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| usage("parse", format!("{}: {e}", path.display())))
}

/// Pairs are accepted as `{"X", "Y"}` or `{"first", "second"}`.
#[derive(Deserialize)]
#[serde(untagged)]
enum PairInput {
    Named(PairInstance),
    Plain(MatrixPair),
}

#[derive(Serialize)]
struct CommutantReport {
    partition: Partition,
    complex_dim: usize,
    real_dim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_real_dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    weyr: Option<WeyrReport>,
    basis: Vec<BasisEntry>,
}

#[derive(Serialize)]
struct WeyrReport {
    order: Vec<String>,
    #[serde(rename = "J")]
    j: CMatrix,
}

#[derive(Serialize)]
struct BasisEntry {
    block: (usize, usize),
    k: usize,
    entry: (usize, usize),
    unit: &'static str,
    matrix: CMatrix,
    #[serde(skip_serializing_if = "Option::is_none")]
    weyr_matrix: Option<CMatrix>,
}

#[derive(Serialize)]
struct ExtractionReport {
    witnesses: Vec<CMatrix>,
    relations: Vec<consim_core::reductions::SlotCheck>,
    all_hold: bool,
}

fn emit<T: Serialize>(body: T) -> Result<String, Failure> {
    serde_json::to_string(&Output {
        schema_version: SCHEMA_VERSION,
        body,
    })
    .map_err(|e| usage("internal", e.to_string()))
}

/// Returns the JSON document and whether the command succeeded.
fn run(command: Command) -> Result<(String, bool), Failure> {
    match command {
        Command::Encode {
            kind,
            instance,
            partition,
        } => {
            let enc = match kind {
                EncodeKind::Pair | EncodeKind::Tuple if partition.is_some() => {
                    return Err(usage("usage", "--partition applies only to biquiver encodings"));
                }
                EncodeKind::Pair => {
                    let inst: PairInstance = read_json(&instance)?;
                    encode_commuting_pair(&inst.x, &inst.y)?
                }
                EncodeKind::Tuple => encode_tuple(&read_json::<TupleInstance>(&instance)?),
                EncodeKind::Biquiver => {
                    let inst: BiquiverInstance = read_json(&instance)?;
                    let opts = BiquiverOptions {
                        partition: partition.as_deref().map(str::parse::<PartitionOverride>).transpose()?,
                    };
                    encode_biquiver(&inst.biquiver, &inst.representation, &opts)?
                }
            };
            Ok((emit(enc)?, true))
        }
        Command::Decode { encoding } => {
            let enc: Encoding = read_json(&encoding)?;
            Ok((emit(decode(&enc)?)?, true))
        }
        Command::VerifyWitness { encoding, encoding2, s } => {
            let (a, b, s): (Encoding, Encoding, CMatrix) = (read_json(&encoding)?, read_json(&encoding2)?, read_json(&s)?);
            Ok((emit(verify_witness(&a, &b, &s)?)?, true))
        }
        Command::ExtractWitness { encoding, encoding2, s } => {
            let (a, b, s): (Encoding, Encoding, CMatrix) = (read_json(&encoding)?, read_json(&encoding2)?, read_json(&s)?);
            let ex = extract_witness(&a, &b, &s)?;
            let all_hold = ex.all_hold();
            Ok((
                emit(ExtractionReport {
                    witnesses: ex.witnesses,
                    relations: ex.relations,
                    all_hold,
                })?,
                true,
            ))
        }
        Command::CommutantBasis {
            partition,
            weyr,
            oracle,
        } => {
            let part: Partition = partition.parse()?;
            let dim = commutant_dim(&part);
            let oracle_real_dim = if oracle {
                Some(oracle_commutant(&part)?.real_dim())
            } else {
                None
            };
            let basis = parameter_basis(&part)?
                .into_iter()
                .map(|b| {
                    let weyr_matrix = if weyr { Some(to_weyr(&b.matrix, &part)?) } else { None };
                    Ok(BasisEntry {
                        block: b.block,
                        k: b.k,
                        entry: b.entry,
                        unit: b.unit,
                        matrix: b.matrix,
                        weyr_matrix,
                    })
                })
                .collect::<Result<Vec<_>, consim_core::Error>>()?;
            let weyr = if weyr {
                Some(WeyrReport {
                    order: weyr_permutation(&part).order.iter().map(ToString::to_string).collect(),
                    j: to_weyr(&build_j(&part), &part)?,
                })
            } else {
                None
            };
            Ok((
                emit(CommutantReport {
                    partition: part,
                    complex_dim: dim.complex_dim,
                    real_dim: dim.real_dim,
                    oracle_real_dim,
                    weyr,
                    basis,
                })?,
                true,
            ))
        }
        Command::Invariants { pair, depth } => {
            let pair = match read_json::<PairInput>(&pair)? {
                PairInput::Named(p) => MatrixPair::new(p.x, p.y)?,
                PairInput::Plain(p) => p,
            };
            Ok((emit(consim_invariants(&pair, depth)?)?, true))
        }
        Command::Selfcheck { seed, trials } => {
            let report = selfcheck::run(seed, trials);
            let ok = report.ok;
            Ok((emit(report)?, ok))
        }
    }
}

fn report_failure(f: &Failure) -> ExitCode {
    let body = serde_json::json!({ "code": f.code, "message": f.message });
    eprintln!("{body}");
    ExitCode::from(f.status)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => return report_failure(&usage("usage", e.to_string().trim_end())),
    };
    match run(cli.command) {
        Ok((text, ok)) => {
            // A closed pipe (e.g. `| head`) is not an error worth reporting.
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            if ok {
                ExitCode::SUCCESS
            } else {
                report_failure(&Failure {
                    code: "check-failed",
                    message: "one or more checks failed".into(),
                    status: 1,
                })
            }
        }
        Err(f) => report_failure(&f),
    }
}
