//! Command-line front end for the finite-ring toolkit.
//!
//! Exit codes: 0 success / property holds; 1 property fails (witness in the
//! report); 2 parse or usage error; 3 precondition violation or cap
//! exceeded. With `--json` every run prints one JSON object on stdout and
//! errors also emit a one-line JSON object on stderr.

pub mod parse;
pub mod report;

use std::fmt;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use ringlab_core::analysis::{self, Verdict};
use ringlab_core::oracle::{self, ExpressionKind};
use ringlab_core::ring::{Elem, Ring, RingError, DEFAULT_CAP};
use ringlab_core::sylvester::{self, LRMode, LRProblem};
use ringlab_core::usc::{self, CleanExpression, UscError};
use serde_json::{json, Value};

use parse::{parse_element, parse_ring_expr, render_element, ParseError};
use report::{verdict_json, version, witness_json, witness_text, RunReport};

#[derive(Parser, Debug)]
#[command(
    name = "ringlab",
    version,
    about = "Exact computations in small finite rings: classification, clean decompositions, operator equations"
)]
pub struct Cli {
    /// Seed for randomized checks; the built-in commands are deterministic
    /// and accept it for reproducible scripting.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Print one JSON object on stdout; errors also emit JSON on stderr.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide every ring-class predicate and report witnesses.
    Analyze {
        /// Ring expression, e.g. "T2(Z2)", "Z2 x Z2", "F2[x]/(x^2)".
        ring: String,
    },
    /// Compute a clean decomposition of one element of a triangular ring.
    Decompose {
        ring: String,
        /// Element literal, e.g. "[1,1;0]" over T2(Z2).
        #[arg(long)]
        element: String,
        #[arg(long, value_enum, default_value_t = DecomposeMethod::Inductive)]
        method: DecomposeMethod,
        /// Also count the matching expressions by exhaustive scan.
        #[arg(long)]
        verify: bool,
    },
    /// Certify one property; exits 0 when it holds, 1 with a witness when not.
    Certify {
        ring: String,
        #[arg(long, value_enum)]
        property: Property,
        /// Include the witness in the report when the property fails.
        #[arg(long)]
        witnesses: bool,
    },
    /// Solve a*x - x*b = v for x.
    Solve {
        ring: String,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        v: String,
        #[arg(long, value_enum, default_value_t = SolveMethod::Series)]
        method: SolveMethod,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DecomposeMethod {
    /// Strongly clean decomposition by block recursion.
    #[value(name = "theorem1")]
    Inductive,
    /// Clean decomposition with the idempotent in the double commutant.
    #[value(name = "comm2")]
    Bicommutant,
    /// Idempotent commuting with the element, both sum and difference units.
    #[value(name = "signed")]
    Signed,
}

impl DecomposeMethod {
    fn label(self) -> &'static str {
        match self {
            DecomposeMethod::Inductive => "theorem1",
            DecomposeMethod::Bicommutant => "comm2",
            DecomposeMethod::Signed => "signed",
        }
    }

    fn oracle_kind(self) -> ExpressionKind {
        match self {
            DecomposeMethod::Inductive => ExpressionKind::StronglyClean,
            DecomposeMethod::Bicommutant => ExpressionKind::Bicommutant,
            DecomposeMethod::Signed => ExpressionKind::Signed,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SolveMethod {
    #[value(name = "series")]
    Series,
    #[value(name = "brute")]
    Brute,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Property {
    #[value(name = "clean")]
    Clean,
    #[value(name = "uniquely_clean", alias = "uc", alias = "uniquely-clean")]
    UniquelyClean,
    #[value(name = "strongly_clean", alias = "strongly-clean")]
    StronglyClean,
    #[value(name = "usc", alias = "uniquely_strongly_clean")]
    UniquelyStronglyClean,
    #[value(name = "abelian")]
    Abelian,
    #[value(name = "boolean")]
    Boolean,
    #[value(name = "local")]
    Local,
    #[value(name = "uniquely_bleached", alias = "bleached")]
    UniquelyBleached,
    #[value(name = "residue_z2", alias = "residue_is_z2")]
    ResidueZ2,
}

impl Property {
    fn label(self) -> &'static str {
        match self {
            Property::Clean => "clean",
            Property::UniquelyClean => "uniquely_clean",
            Property::StronglyClean => "strongly_clean",
            Property::UniquelyStronglyClean => "uniquely_strongly_clean",
            Property::Abelian => "abelian",
            Property::Boolean => "boolean",
            Property::Local => "local",
            Property::UniquelyBleached => "uniquely_bleached",
            Property::ResidueZ2 => "residue_is_Z2",
        }
    }
}

/// Failure with the exit code it maps to.
#[derive(Debug)]
pub struct CliFailure {
    pub exit: i32,
    pub message: String,
}

impl fmt::Display for CliFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.message)
    }
}

fn usage(message: String) -> CliFailure {
    CliFailure { exit: 2, message }
}

fn precondition(message: String) -> CliFailure {
    CliFailure { exit: 3, message }
}

impl From<ParseError> for CliFailure {
    fn from(e: ParseError) -> CliFailure {
        usage(e.to_string())
    }
}

impl From<RingError> for CliFailure {
    fn from(e: RingError) -> CliFailure {
        match e {
            RingError::CapExceeded { .. } => precondition(e.to_string()),
            _ => usage(e.to_string()),
        }
    }
}

impl From<analysis::AnalysisError> for CliFailure {
    fn from(e: analysis::AnalysisError) -> CliFailure {
        precondition(e.to_string())
    }
}

impl From<UscError> for CliFailure {
    fn from(e: UscError) -> CliFailure {
        precondition(e.to_string())
    }
}

impl From<sylvester::SylvesterError> for CliFailure {
    fn from(e: sylvester::SylvesterError) -> CliFailure {
        precondition(e.to_string())
    }
}

impl From<oracle::OracleError> for CliFailure {
    fn from(e: oracle::OracleError) -> CliFailure {
        precondition(e.to_string())
    }
}

struct Outcome {
    exit: i32,
    result: Value,
    witness: Option<Value>,
    text: String,
}

/// Executes a parsed command line; prints the report and returns the exit
/// code.
pub fn run(cli: Cli) -> i32 {
    let start = Instant::now();
    match execute(&cli.command) {
        Ok((ring, outcome)) => {
            if cli.json {
                let report = RunReport {
                    ring: ring.expr().to_string(),
                    cardinality: ring.card(),
                    command: command_name(&cli.command).to_string(),
                    result: outcome.result,
                    witness: outcome.witness,
                    elapsed_ms: start.elapsed().as_millis() as u64,
                    version: version(),
                };
                println!("{}", serde_json::to_string(&report).expect("serializable"));
            } else {
                print!("{}", outcome.text);
            }
            outcome.exit
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            if cli.json {
                eprintln!(
                    "{}",
                    json!({"error": failure.message, "exit": failure.exit})
                );
            }
            failure.exit
        }
    }
}

fn command_name(command: &Command) -> &'static str {
    match command {
        Command::Analyze { .. } => "analyze",
        Command::Decompose { .. } => "decompose",
        Command::Certify { .. } => "certify",
        Command::Solve { .. } => "solve",
    }
}

/// Cardinality cap, overridable through `RINGLAB_CAP` (decimal).
fn construction_cap() -> Result<u64, CliFailure> {
    match std::env::var("RINGLAB_CAP") {
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_CAP),
        Err(e) => Err(usage(format!("RINGLAB_CAP: {e}"))),
        Ok(text) => text
            .trim()
            .parse::<u64>()
            .map_err(|_| usage(format!("RINGLAB_CAP must be a decimal integer, got {text:?}"))),
    }
}

fn build_ring(text: &str) -> Result<Ring, CliFailure> {
    let expr = parse_ring_expr(text)?;
    Ok(Ring::with_cap(expr, construction_cap()?)?)
}

fn execute(command: &Command) -> Result<(Ring, Outcome), CliFailure> {
    match command {
        Command::Analyze { ring } => {
            let r = build_ring(ring)?;
            Ok((r.clone(), analyze(&r)))
        }
        Command::Decompose {
            ring,
            element,
            method,
            verify,
        } => {
            let r = build_ring(ring)?;
            let outcome = decompose(&r, element, *method, *verify)?;
            Ok((r, outcome))
        }
        Command::Certify {
            ring,
            property,
            witnesses,
        } => {
            let r = build_ring(ring)?;
            let outcome = certify(&r, *property, *witnesses)?;
            Ok((r, outcome))
        }
        Command::Solve {
            ring,
            a,
            b,
            v,
            method,
        } => {
            let r = build_ring(ring)?;
            let outcome = solve(&r, a, b, v, *method)?;
            Ok((r, outcome))
        }
    }
}

fn analyze(r: &Ring) -> Outcome {
    let report = analysis::classify(r);
    let mut text = format!("ring: {}\ncardinality: {}\n", report.ring_text, r.card());
    let mut predicates = serde_json::Map::new();
    for (name, verdict) in report.entries() {
        predicates.insert(name.to_string(), verdict_json(r, verdict));
        text.push_str(&format!("{name}: {verdict}"));
        if let Some(w) = verdict.witness() {
            text.push_str(&format!("  [{}]", witness_text(r, w)));
        }
        text.push('\n');
    }
    Outcome {
        exit: 0,
        result: json!({"predicates": Value::Object(predicates)}),
        witness: None,
        text,
    }
}

fn certify(r: &Ring, property: Property, witnesses: bool) -> Result<Outcome, CliFailure> {
    let verdict = evaluate_property(r, property)?;
    let (exit, holds) = match &verdict {
        Verdict::Holds => (0, true),
        Verdict::Fails(_) => (1, false),
        Verdict::Declined => {
            return Err(precondition(format!(
                "{}: predicate scan declined, ring too large",
                property.label()
            )))
        }
    };
    let witness = verdict
        .witness()
        .filter(|_| witnesses)
        .map(|w| witness_json(r, w));
    let mut text = format!("{}: {} = {}\n", r.expr(), property.label(), holds);
    if witnesses {
        if let Some(w) = verdict.witness() {
            text.push_str(&format!("witness: {}\n", witness_text(r, w)));
        }
    }
    Ok(Outcome {
        exit,
        result: json!({"property": property.label(), "holds": holds}),
        witness,
        text,
    })
}

fn evaluate_property(r: &Ring, property: Property) -> Result<Verdict, CliFailure> {
    Ok(match property {
        Property::Clean => analysis::clean_family(r)?.clean,
        Property::UniquelyClean => analysis::clean_family(r)?.uniquely_clean,
        Property::StronglyClean => analysis::clean_family(r)?.strongly_clean,
        Property::UniquelyStronglyClean => analysis::clean_family(r)?.uniquely_strongly_clean,
        Property::Abelian => analysis::check_abelian(r),
        Property::Boolean => analysis::check_boolean(r),
        Property::Local => analysis::check_local(r),
        Property::UniquelyBleached => analysis::check_bleached(r),
        Property::ResidueZ2 => analysis::check_residue_z2(r),
    })
}

fn decompose(
    r: &Ring,
    element: &str,
    method: DecomposeMethod,
    verify: bool,
) -> Result<Outcome, CliFailure> {
    let a = parse_element(r, element)?;
    let expr: CleanExpression = match method {
        DecomposeMethod::Inductive => usc::strongly_clean_decompose(r, a)?,
        DecomposeMethod::Bicommutant => usc::bicommutant_decompose(r, a)?,
        DecomposeMethod::Signed => usc::signed_decompose(r, a)?,
    };
    let oracle_count = if verify {
        Some(oracle::expressions(r, a, method.oracle_kind())?.expressions.len())
    } else {
        None
    };
    let mut result = json!({
        "method": method.label(),
        "element": render_element(r, a),
        "idempotent": render_element(r, expr.idempotent),
        "unit": render_element(r, expr.unit),
        "commuting": expr.commuting,
        "double_commutant": expr.double_commutant,
        "signed": expr.signed,
    });
    let mut text = format!(
        "ring: {}\nelement: {}\nE = {}\nU = {}\nflags: commuting={} double_commutant={} signed={}\n",
        r.expr(),
        render_element(r, a),
        render_element(r, expr.idempotent),
        render_element(r, expr.unit),
        expr.commuting,
        expr.double_commutant,
        expr.signed,
    );
    if let Some(count) = oracle_count {
        result["oracle_count"] = json!(count);
        text.push_str(&format!(
            "oracle expressions ({}): {count}\n",
            method.oracle_kind().name()
        ));
    }
    Ok(Outcome {
        exit: 0,
        result,
        witness: None,
        text,
    })
}

fn mode_label(mode: LRMode) -> &'static str {
    match mode {
        LRMode::AUnitBRadical => "a_unit_b_radical",
        LRMode::ARadicalBUnit => "a_radical_b_unit",
        LRMode::Generic => "generic",
    }
}

fn solve(
    r: &Ring,
    a: &str,
    b: &str,
    v: &str,
    method: SolveMethod,
) -> Result<Outcome, CliFailure> {
    let a = parse_element(r, a)?;
    let b = parse_element(r, b)?;
    let v = parse_element(r, v)?;
    let mode = LRProblem::infer_mode(r, a, b);
    let problem = LRProblem::new(r.clone(), a, b, v, mode)?;
    let x: Elem = sylvester::solve_lr(
        &problem,
        match method {
            SolveMethod::Series => sylvester::Method::Series,
            SolveMethod::Brute => sylvester::Method::Brute,
        },
    )?;
    let method_name = match method {
        SolveMethod::Series => "series",
        SolveMethod::Brute => "brute",
    };
    Ok(Outcome {
        exit: 0,
        result: json!({
            "method": method_name,
            "mode": mode_label(mode),
            "x": render_element(r, x),
        }),
        witness: None,
        text: format!(
            "ring: {}\nmode: {}\nx = {}\n",
            r.expr(),
            mode_label(mode),
            render_element(r, x)
        ),
    })
}
