//! Command-line front end: reads a task descriptor (JSON) from a file or
//! standard input, runs the requested decision procedure, and prints one JSON
//! document on standard output.
//!
//! Exit codes: 0 when the task was decided (including theorem-backed negative
//! answers), 2 on malformed input or violated preconditions, 1 on internal
//! assertion failures (a constructed object failing its own certification, or
//! a fixture claim breaking).

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::Value;

use involquat::error::Error;
use involquat::harness::{brute_force_quat_oracle, run_fuzz, verify_examples, FuzzKind};
use involquat::idempotent::classify_idempotent;
use involquat::involution::InvolutionClass;
use involquat::json::{
    descriptor_from_json, example_report_to_json, fuzz_report_to_json, idempotent_report_to_json,
    involution_class_to_json, outcome_to_json, precondition_failure_to_json, subalgebra_to_json,
    InstanceDescriptor, SCHEMA,
};
use involquat::quaternion::{
    invariant_quat_for_metabolic, invariant_quat_for_skew_element,
    invariant_quat_for_symmetric_char2, resolve_lambda,
};

#[derive(Parser)]
#[command(name = "involquat", version, about = "Exact decisions and constructions of involution-invariant split quaternion subalgebras of matrix algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the involution of the input algebra (kind and type)
    ClassifyInvolution {
        /// Descriptor file; standard input when omitted
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Classify an idempotent as plain, metabolic or hyperbolic
    ClassifyIdempotent {
        #[arg(long)]
        input: Option<PathBuf>,
        /// Name of the element in the descriptor
        #[arg(long, default_value = "e")]
        element: String,
    },
    /// Decide and construct an invariant split quaternion subalgebra
    FindQuat {
        /// What the subalgebra must contain: a named idempotent or element
        #[arg(long = "for", value_parser = ["idempotent", "element"])]
        target: String,
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        element: Option<String>,
    },
    /// Re-verify every claim of the built-in counterexample fixtures
    VerifyExamples {
        /// Skip the exhaustive GF(2) cross-checks
        #[arg(long)]
        no_oracle: bool,
    },
    /// Randomized certification of one decision procedure
    Fuzz {
        /// square-central | metabolic | hyperbolic | skew | symmetric
        #[arg(long)]
        kind: String,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        input: Option<PathBuf>,
        /// Cross-check negative verdicts against the GF(2) oracle
        #[arg(long)]
        oracle: bool,
    },
    /// Exhaustive GF(2) search for an invariant subalgebra containing an element
    Oracle {
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        element: Option<String>,
        /// Worker threads (also capped by INVOLQUAT_THREADS)
        #[arg(long)]
        threads: Option<usize>,
    },
}

fn read_descriptor(input: &Option<PathBuf>) -> Result<InstanceDescriptor, Error> {
    let text = match input {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| Error::BadDescriptor(format!("cannot read {}: {e}", path.display())))?,
        None => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| Error::BadDescriptor(format!("cannot read standard input: {e}")))?;
            buf
        }
    };
    let value: Value =
        serde_json::from_str(&text).map_err(|e| Error::BadDescriptor(format!("malformed JSON: {e}")))?;
    descriptor_from_json(&value)
}

fn find_quat_for_idempotent(d: &InstanceDescriptor, element: &Option<String>) -> Result<Value, Error> {
    let name = element.as_deref().unwrap_or("e");
    let e = if element.is_some() { d.element(name)? } else { d.element_among(&["e", "idempotent"])? };
    let report = classify_idempotent(&d.algebra, e);
    if !report.is_idempotent {
        return Err(Error::NotIdempotent);
    }
    let outcome = invariant_quat_for_metabolic(&d.algebra, e)?;
    Ok(outcome_to_json(&outcome))
}

fn find_quat_for_element(d: &InstanceDescriptor, element: &Option<String>) -> Result<Value, Error> {
    let name = element.as_deref().unwrap_or("u");
    let u = if element.is_some() { d.element(name)? } else { d.element_among(&["u", "element"])? };
    let lambda = match &d.lambda {
        Some(l) => {
            resolve_lambda(u, Some(l))?;
            l.clone()
        }
        None => resolve_lambda(u, None)?,
    };
    let alg = &d.algebra;
    let outcome = if alg.char2() && alg.classify() == InvolutionClass::Orthogonal {
        invariant_quat_for_symmetric_char2(alg, u, &lambda)?
    } else {
        invariant_quat_for_skew_element(alg, u, &lambda)?
    };
    Ok(outcome_to_json(&outcome))
}

/// Runs the command; Ok carries the JSON document and the exit code.
fn run(cli: Cli) -> Result<(Value, u8), (Value, u8)> {
    let classify_exit = |v: Value| Ok((v, 0));
    let precondition = |e: Error| {
        let code = if matches!(e, Error::InvariantViolated(_)) { 1 } else { 2 };
        Err((precondition_failure_to_json(&e), code))
    };
    match cli.command {
        Command::ClassifyInvolution { input } => {
            let d = read_descriptor(&input).map_err(|e| (precondition_failure_to_json(&e), 2u8))?;
            classify_exit(involution_class_to_json(d.algebra.classify()))
        }
        Command::ClassifyIdempotent { input, element } => {
            let d = read_descriptor(&input).map_err(|e| (precondition_failure_to_json(&e), 2u8))?;
            match d.element(&element) {
                Ok(e) => classify_exit(idempotent_report_to_json(&classify_idempotent(&d.algebra, e))),
                Err(e) => precondition(e),
            }
        }
        Command::FindQuat { target, input, element } => {
            let d = read_descriptor(&input).map_err(|e| (precondition_failure_to_json(&e), 2u8))?;
            let result = match target.as_str() {
                "idempotent" => find_quat_for_idempotent(&d, &element),
                _ => find_quat_for_element(&d, &element),
            };
            match result {
                Ok(v) => Ok((v, 0)),
                Err(e) => precondition(e),
            }
        }
        Command::VerifyExamples { no_oracle } => {
            let report = verify_examples(!no_oracle);
            let code = if report.all_pass() { 0 } else { 1 };
            Ok((example_report_to_json(&report), code))
        }
        Command::Fuzz { kind, trials, seed, input, oracle } => {
            let d = read_descriptor(&input).map_err(|e| (precondition_failure_to_json(&e), 2u8))?;
            let Some(kind) = FuzzKind::parse(&kind) else {
                return precondition(Error::BadDescriptor(format!("unknown fuzz kind {kind}")));
            };
            let trials = trials.unwrap_or(d.trials);
            let seed = seed.unwrap_or(d.seed);
            let report = run_fuzz(&d.algebra, kind, trials, seed, oracle);
            let code = if report.passed() { 0 } else { 1 };
            Ok((fuzz_report_to_json(&report), code))
        }
        Command::Oracle { input, element, threads } => {
            let d = read_descriptor(&input).map_err(|e| (precondition_failure_to_json(&e), 2u8))?;
            let required = match &element {
                Some(name) => d.element(name),
                None => d.element_among(&["required", "e", "u"]),
            };
            let required = match required {
                Ok(m) => m,
                Err(e) => return precondition(e),
            };
            match brute_force_quat_oracle(&d.algebra, required, threads) {
                Ok(Some(q)) => classify_exit(serde_json::json!({
                    "schema": SCHEMA,
                    "found": true,
                    "subalgebra": subalgebra_to_json(&q),
                })),
                Ok(None) => classify_exit(serde_json::json!({
                    "schema": SCHEMA,
                    "found": false,
                })),
                Err(e) => precondition(e),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (value, code) = match run(cli) {
        Ok(pair) => pair,
        Err(pair) => pair,
    };
    println!("{value}");
    ExitCode::from(code)
}
