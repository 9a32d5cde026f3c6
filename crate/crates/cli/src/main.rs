//! `weakmix`: classify row-finite operators on `ω`, compute degree bounds,
//! build orbit witnesses, and re-verify the certificates they produce.
//!
//! Exit status: 0 definitive result, 1 input error, 2 unknown within caps,
//! 3 certificate rejected by `verify`.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use weakmix_core::bounds::{m_of_l, m_of_l_with_basis};
use weakmix_core::certificate::Certificate;
use weakmix_core::relations::{self, ClassifyVerdict};
use weakmix_core::structure::{check_independent, represent};
use weakmix_core::witness::{self, AffineCylinder, ScheduleOutcome, WitnessOutcome};
use weakmix_core::{Error, FinSuppVec, Operator, Poly};

const EXIT_OK: u8 = 0;
const EXIT_INPUT: u8 = 1;
const EXIT_UNKNOWN: u8 = 2;
const EXIT_REJECTED: u8 = 3;

#[derive(Parser)]
#[command(name = "weakmix", version)]
#[command(about = "Exact mixing / non-transitivity certificates for row-finite operators on the sequence space")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Caps {
    /// Largest coordinate functional e_s* searched
    #[arg(long, default_value_t = 8)]
    support_cap: usize,
    #[command(flatten)]
    degree: DegreeCap,
}

#[derive(Args, Clone, Copy)]
struct DegreeCap {
    /// Largest polynomial degree searched
    #[arg(long, default_value_t = 12)]
    degree_cap: usize,
}

#[derive(Args)]
struct Output {
    /// Write the result document here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Search e_1*, …, e_s* for torsion functionals of T′
    ///
    /// The support s grows from 1 to --support-cap with the degree cap held
    /// fixed; the first s that yields torsion decides NOT_TRANSITIVE.
    Classify {
        operator: PathBuf,
        #[command(flatten)]
        caps: Caps,
        #[command(flatten)]
        output: Output,
    },
    /// Find a polynomial relation among functionals, or certify there is none
    Relation {
        operator: PathBuf,
        /// JSON array of functionals
        functionals: PathBuf,
        #[command(flatten)]
        caps: DegreeCap,
        #[command(flatten)]
        output: Output,
    },
    /// Greedy T′-independent subfamily with representations of the rest
    Independence {
        operator: PathBuf,
        functionals: PathBuf,
        #[command(flatten)]
        caps: DegreeCap,
        #[command(flatten)]
        output: Output,
    },
    /// Represent a functional over an independent family and report its J-image
    Represent {
        operator: PathBuf,
        /// JSON array of independent functionals
        basis: PathBuf,
        /// JSON functional to represent
        x: PathBuf,
        #[command(flatten)]
        caps: DegreeCap,
        #[command(flatten)]
        output: Output,
    },
    /// Degree bound m(L) for the span L of the given functionals
    Bound {
        operator: PathBuf,
        functionals: PathBuf,
        /// Use this independent family B instead of a greedy choice
        #[arg(long)]
        basis: Option<PathBuf>,
        #[command(flatten)]
        caps: DegreeCap,
        #[command(flatten)]
        output: Output,
    },
    /// Solve for u in the source cylinder with p(T)u in the target cylinder
    Witness {
        operator: PathBuf,
        #[arg(long)]
        source: PathBuf,
        #[arg(long)]
        target: PathBuf,
        /// Polynomial in t, e.g. "t^3 - 2*t + 1"
        #[arg(long, default_value = "t^3")]
        poly: String,
        #[command(flatten)]
        output: Output,
    },
    /// One u whose orbit visits each target cylinder in turn
    Schedule {
        operator: PathBuf,
        #[arg(long)]
        source: PathBuf,
        /// JSON array of cylinders
        #[arg(long)]
        targets: PathBuf,
        #[command(flatten)]
        caps: DegreeCap,
        #[command(flatten)]
        output: Output,
    },
    /// Re-check certificates by exact arithmetic only
    Verify {
        #[arg(required = true)]
        certificates: Vec<PathBuf>,
    },
}

/// Result of one command before it is written out.
struct Outcome {
    verdict: String,
    exit: u8,
    caps: Value,
    certificate: Option<Certificate>,
    message: Option<String>,
}

impl Outcome {
    fn new(verdict: &str, exit: u8, caps: Value, certificate: Option<Certificate>) -> Outcome {
        Outcome { verdict: verdict.to_owned(), exit, caps, certificate, message: None }
    }

    fn with_message(mut self, message: impl Into<String>) -> Outcome {
        self.message = Some(message.into());
        self
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> anyhow::Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn read_operator(path: &Path) -> anyhow::Result<Operator> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Operator::parse(&text).with_context(|| format!("operator document {}", path.display()))
}

fn read_functionals(path: &Path, op: &Operator) -> anyhow::Result<Vec<FinSuppVec>> {
    let fs: Vec<FinSuppVec> = read_json(path)?;
    Ok(fs.into_iter().map(|f| f.promote(op.field())).collect())
}

fn degree_caps(caps: &DegreeCap) -> Value {
    json!({ "degree_cap": caps.degree_cap })
}

fn all_caps(caps: &Caps) -> Value {
    json!({ "support_cap": caps.support_cap, "degree_cap": caps.degree.degree_cap })
}

fn run(command: Command) -> anyhow::Result<(Outcome, Option<PathBuf>)> {
    Ok(match command {
        Command::Classify { operator, caps, output } => {
            let op = read_operator(&operator)?;
            let verdict = relations::classify(&op, caps.support_cap, caps.degree.degree_cap);
            let exit = if matches!(verdict, ClassifyVerdict::Unknown { .. }) { EXIT_UNKNOWN } else { EXIT_OK };
            let name = verdict.name();
            let cert = Certificate::Classify { operator: op.doc().clone(), verdict };
            (Outcome::new(name, exit, all_caps(&caps), Some(cert)), output.out)
        }
        Command::Relation { operator, functionals, caps, output } => {
            let op = read_operator(&operator)?;
            let xs = read_functionals(&functionals, &op)?;
            if xs.is_empty() {
                return Err(anyhow!("at least one functional is required"));
            }
            let doc = op.doc().clone();
            let outcome = match relations::independence(&op, &xs, caps.degree_cap) {
                Ok(report) => Outcome::new(
                    "INDEPENDENT",
                    EXIT_OK,
                    degree_caps(&caps),
                    Some(Certificate::Independence { operator: doc, report }),
                ),
                Err(syzygy) => {
                    Outcome::new("RELATION", EXIT_OK, degree_caps(&caps), Some(Certificate::Syzygy { operator: doc, syzygy }))
                }
            };
            (outcome, output.out)
        }
        Command::Independence { operator, functionals, caps, output } => {
            let op = read_operator(&operator)?;
            let xs = read_functionals(&functionals, &op)?;
            let result = relations::greedy_independent_subset(&op, &xs, caps.degree_cap)?;
            let cert = Certificate::Greedy { operator: op.doc().clone(), result };
            (Outcome::new("GREEDY_BASIS", EXIT_OK, degree_caps(&caps), Some(cert)), output.out)
        }
        Command::Represent { operator, basis, x, caps, output } => {
            let op = read_operator(&operator)?;
            let b = read_functionals(&basis, &op)?;
            let x: FinSuppVec = read_json::<FinSuppVec>(&x)?.promote(op.field());
            let independence = check_independent(&op, &b, caps.degree_cap)?;
            let outcome = match represent(&op, &b, &x, caps.degree_cap)? {
                Some(representation) => {
                    let j_image = representation.j_image();
                    let cert = Certificate::Representation {
                        operator: op.doc().clone(),
                        representation,
                        j_image,
                        independence,
                    };
                    Outcome::new("REPRESENTED", EXIT_OK, degree_caps(&caps), Some(cert))
                }
                None => Outcome::new("UNKNOWN", EXIT_UNKNOWN, degree_caps(&caps), None)
                    .with_message(format!("no representation within degree {}", caps.degree_cap)),
            };
            (outcome, output.out)
        }
        Command::Bound { operator, functionals, basis, caps, output } => {
            let op = read_operator(&operator)?;
            let l = read_functionals(&functionals, &op)?;
            if l.iter().any(FinSuppVec::is_zero) {
                return Err(anyhow!("functionals must be nonzero"));
            }
            let report = match &basis {
                Some(path) => m_of_l_with_basis(&op, &l, &read_functionals(path, &op)?, caps.degree_cap),
                None => m_of_l(&op, &l, caps.degree_cap),
            };
            let outcome = match report {
                Ok(report) => Outcome::new(
                    "BOUND",
                    EXIT_OK,
                    degree_caps(&caps),
                    Some(Certificate::Bound { operator: op.doc().clone(), report }),
                ),
                Err(Error::Torsion(cert)) => Outcome::new(
                    "TORSION",
                    EXIT_INPUT,
                    degree_caps(&caps),
                    Some(Certificate::Torsion { operator: op.doc().clone(), certificate: *cert }),
                )
                .with_message("the span of the functionals contains torsion"),
                Err(e) => return Err(e.into()),
            };
            (outcome, output.out)
        }
        Command::Witness { operator, source, target, poly, output } => {
            let op = read_operator(&operator)?;
            let source: AffineCylinder = read_json(&source)?;
            let target: AffineCylinder = read_json(&target)?;
            let p: Poly = poly.parse().map_err(|e| anyhow!("--poly {poly:?}: {e}"))?;
            let p = p.promote(op.field());
            let doc = op.doc().clone();
            let outcome = match witness::witness(&op, &source, &target, &p) {
                WitnessOutcome::Found(w) => {
                    Outcome::new("WITNESS", EXIT_OK, json!({}), Some(Certificate::Witness { operator: doc, witness: w }))
                }
                WitnessOutcome::Infeasible(c) => Outcome::new(
                    "INFEASIBLE",
                    EXIT_OK,
                    json!({}),
                    Some(Certificate::Infeasible { operator: doc, certificate: c }),
                ),
            };
            (outcome, output.out)
        }
        Command::Schedule { operator, source, targets, caps, output } => {
            let op = read_operator(&operator)?;
            let source: AffineCylinder = read_json(&source)?;
            let targets: Vec<AffineCylinder> = read_json(&targets)?;
            let outcome = match witness::schedule_orbit(&op, &source, &targets, caps.degree_cap)? {
                ScheduleOutcome::Scheduled(schedule) => Outcome::new(
                    "SCHEDULE",
                    EXIT_OK,
                    degree_caps(&caps),
                    Some(Certificate::Schedule { operator: op.doc().clone(), schedule }),
                ),
                ScheduleOutcome::Unknown(reason) => {
                    Outcome::new("UNKNOWN", EXIT_UNKNOWN, degree_caps(&caps), None).with_message(reason)
                }
            };
            (outcome, output.out)
        }
        Command::Verify { certificates } => (verify_all(&certificates)?, None),
    })
}

/// Accepts a bare certificate or a result document wrapping one.
fn load_certificate(path: &Path) -> anyhow::Result<Certificate> {
    let value: Value = read_json(path)?;
    let inner = match value.get("certificate") {
        Some(c) if value.get("kind").is_none() => c.clone(),
        _ => value,
    };
    serde_json::from_value(inner).with_context(|| format!("certificate in {}", path.display()))
}

fn verify_all(paths: &[PathBuf]) -> anyhow::Result<Outcome> {
    let mut failures = Vec::new();
    for path in paths {
        let cert = load_certificate(path)?;
        match cert.verify() {
            Ok(()) => eprintln!("{}: {} certificate verified", path.display(), cert.kind()),
            Err(e) => {
                eprintln!("{}: {e}", path.display());
                failures.push(format!("{}: {e}", path.display()));
            }
        }
    }
    Ok(if failures.is_empty() {
        Outcome::new("VERIFIED", EXIT_OK, json!({}), None)
    } else {
        Outcome::new("REJECTED", EXIT_REJECTED, json!({}), None).with_message(failures.join("; "))
    })
}

#[derive(serde::Serialize)]
struct ResultDocument<'a> {
    verdict: &'a str,
    caps: &'a Value,
    elapsed_ms: u128,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<&'a Certificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    message: Option<&'a str>,
}

fn emit(outcome: &Outcome, elapsed_ms: u128, out: Option<&Path>) -> anyhow::Result<()> {
    let doc = ResultDocument {
        verdict: &outcome.verdict,
        caps: &outcome.caps,
        elapsed_ms,
        certificate: outcome.certificate.as_ref(),
        message: outcome.message.as_deref(),
    };
    let text = serde_json::to_string_pretty(&doc)? + "\n";
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let result = run(cli.command).and_then(|(outcome, out)| {
        emit(&outcome, start.elapsed().as_millis(), out.as_deref())?;
        if let Some(message) = &outcome.message {
            eprintln!("{}: {message}", outcome.verdict);
        }
        Ok(outcome.exit)
    });
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            match e.downcast_ref::<Error>() {
                Some(Error::Unknown(_)) => ExitCode::from(EXIT_UNKNOWN),
                _ => ExitCode::from(EXIT_INPUT),
            }
        }
    }
}
