//! Command dispatch. Exit codes: 0 success, 1 verification or consistency
//! failure, 2 expression/operator parse error, 3 invalid input (bad prime,
//! zero polynomial, singular curve, bad flags).

use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use serde_json::Value;

use frobdiff_core::diffop::{construct_operator, DiffopError};
use frobdiff_core::ec::{
    classify, coefficient_grid, scan_field, summarize_rows, EcError, ScanForm,
    WeierstrassCoefficients,
};
use frobdiff_core::ff::{Prime, PrimeError};
use frobdiff_core::froots::ideal_of_roots;
use frobdiff_core::level::{level_of, LevelError};
use frobdiff_core::poly::PolyRing;

use crate::expr::parse_polynomial;
use crate::opfile::parse_operator;
use crate::output;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_INVALID: i32 = 3;

/// Outcome of one invocation: a JSON document (rendered as text unless
/// `--json` was given) or an error message, plus the exit code.
#[derive(Debug)]
pub struct CommandResult {
    pub document: Option<Value>,
    pub json_mode: bool,
    pub error: Option<String>,
    pub exit_code: i32,
}

impl CommandResult {
    fn ok(document: Value, json_mode: bool) -> Self {
        CommandResult {
            document: Some(document),
            json_mode,
            error: None,
            exit_code: EXIT_OK,
        }
    }

    fn fail(message: String, exit_code: i32) -> Self {
        CommandResult {
            document: None,
            json_mode: false,
            error: Some(message),
            exit_code,
        }
    }

    /// Rendering of the document for the standard stream.
    pub fn rendered(&self) -> Option<String> {
        self.document.as_ref().map(|doc| {
            if self.json_mode {
                doc.to_string()
            } else {
                output::flatten_top(doc)
            }
        })
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "frobdiff",
    version,
    about = "Levels, Frobenius root ideals and differential operators over F_p",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct RingArgs {
    /// Prime characteristic p
    #[arg(short = 'p', long = "prime", visible_alias = "p")]
    prime: u64,
    /// Comma-separated ordered variable names, e.g. x,y,z
    #[arg(long, value_delimiter = ',', required = true)]
    vars: Vec<String>,
}

#[derive(Args, Debug, Clone)]
struct ModeArgs {
    /// Emit the result as a single JSON document
    #[arg(long, conflicts_with = "text")]
    json: bool,
    /// Emit the result as key = value lines (default)
    #[arg(long)]
    text: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Level of f and the stabilized root ideal
    Level {
        expr: String,
        #[command(flatten)]
        ring: RingArgs,
        #[command(flatten)]
        mode: ModeArgs,
    },
    /// Generators of the ideal of p^e-th roots I_e(f)
    Roots {
        expr: String,
        /// Root exponent e >= 1
        #[arg(short = 'e', long = "exponent")]
        e: u32,
        #[command(flatten)]
        ring: RingArgs,
        #[command(flatten)]
        mode: ModeArgs,
    },
    /// Differential operator with δ(1/f) = 1/f^p, serialized and verified
    Diffop {
        expr: String,
        #[command(flatten)]
        ring: RingArgs,
        #[command(flatten)]
        mode: ModeArgs,
    },
    /// Apply an operator file (JSON or canonical text) to a polynomial
    Apply {
        opfile: PathBuf,
        expr: String,
        #[command(flatten)]
        ring: RingArgs,
        #[command(flatten)]
        mode: ModeArgs,
    },
    /// Exit 0 iff the constructed operator satisfies δ(f^{p^e-1}) = f^{p^e-p}
    Verify {
        expr: String,
        #[command(flatten)]
        ring: RingArgs,
        #[command(flatten)]
        mode: ModeArgs,
    },
    /// Elliptic curve classification
    Ec {
        #[command(subcommand)]
        sub: EcCommand,
    },
}

#[derive(Subcommand, Debug)]
enum EcCommand {
    /// Classify one curve as ordinary or supersingular
    Classify {
        /// Prime characteristic p
        #[arg(short = 'p', long = "prime")]
        prime: u64,
        /// Short form coefficients a,b of y^2 z - x^3 + a x z^2 + b z^3
        #[arg(long, conflicts_with = "general")]
        short: Option<String>,
        /// General form coefficients a1,a3,a2,a4,a6
        #[arg(long)]
        general: Option<String>,
        /// Also run the point-counting oracle
        #[arg(long)]
        trace: bool,
        #[command(flatten)]
        mode: ModeArgs,
    },
    /// Classify every curve of the chosen form over F_p
    Scan {
        /// Prime characteristic p
        #[arg(short = 'p', long = "prime")]
        prime: u64,
        /// Scan the short form (default for p >= 5)
        #[arg(long, conflicts_with = "general")]
        short: bool,
        /// Scan the general five-coefficient form
        #[arg(long)]
        general: bool,
        #[command(flatten)]
        mode: ModeArgs,
    },
}

pub fn run<I, T>(argv: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => CommandResult {
                    document: None,
                    json_mode: false,
                    error: Some(e.to_string()),
                    exit_code: EXIT_OK,
                },
                _ => CommandResult::fail(e.to_string(), EXIT_INVALID),
            };
        }
    };
    match cli.command {
        Command::Level { expr, ring, mode } => with_poly(&ring, &expr, mode.json, |f| {
            let result = level_of(&f).map_err(level_fail)?;
            Ok(output::level_doc(&result))
        }),
        Command::Roots {
            expr,
            e,
            ring,
            mode,
        } => with_poly(&ring, &expr, mode.json, |f| {
            if e == 0 {
                return Err(CommandResult::fail(
                    "the root exponent must be at least 1".to_string(),
                    EXIT_INVALID,
                ));
            }
            let root = ideal_of_roots(&f, e)
                .map_err(|err| CommandResult::fail(err.to_string(), EXIT_INVALID))?;
            Ok(output::roots_doc(&root))
        }),
        Command::Diffop { expr, ring, mode } => with_poly(&ring, &expr, mode.json, |f| {
            let assoc = construct_operator(&f).map_err(diffop_fail)?;
            Ok(output::operator_doc(
                assoc.op(),
                assoc.verified(),
                assoc.e(),
            ))
        }),
        Command::Apply {
            opfile,
            expr,
            ring,
            mode,
        } => {
            let ring_built = match build_ring(&ring) {
                Ok(r) => r,
                Err(fail) => return fail,
            };
            let src = match std::fs::read_to_string(&opfile) {
                Ok(s) => s,
                Err(e) => {
                    return CommandResult::fail(
                        format!("cannot read {}: {e}", opfile.display()),
                        EXIT_INVALID,
                    )
                }
            };
            let op = match parse_operator(&src, &ring_built) {
                Ok(op) => op,
                Err(e) => return CommandResult::fail(e, EXIT_PARSE),
            };
            let f = match parse_polynomial(&expr, &ring_built) {
                Ok(f) => f,
                Err(e) => return CommandResult::fail(e.to_string(), EXIT_PARSE),
            };
            CommandResult::ok(output::apply_doc(&op.apply(&f)), mode.json)
        }
        Command::Verify { expr, ring, mode } => with_poly(&ring, &expr, mode.json, |f| {
            let assoc = construct_operator(&f).map_err(diffop_fail)?;
            let doc = serde_json::json!({
                "level": assoc.e(),
                "verified": assoc.verified(),
            });
            Ok(doc)
        }),
        Command::Ec { sub } => run_ec(sub),
    }
}

fn run_ec(sub: EcCommand) -> CommandResult {
    match sub {
        EcCommand::Classify {
            prime,
            short,
            general,
            trace,
            mode,
        } => {
            let p = match build_prime(prime) {
                Ok(p) => p,
                Err(fail) => return fail,
            };
            let w = match parse_curve(p, short.as_deref(), general.as_deref()) {
                Ok(w) => w,
                Err(fail) => return fail,
            };
            match classify(&w, trace) {
                Ok(class) => CommandResult::ok(output::classification_doc(&w, &class), mode.json),
                Err(e) => ec_fail(e),
            }
        }
        EcCommand::Scan {
            prime,
            short,
            general,
            mode,
        } => {
            let p = match build_prime(prime) {
                Ok(p) => p,
                Err(fail) => return fail,
            };
            let form = if general {
                ScanForm::General
            } else if short || p.get() >= 5 {
                ScanForm::Short
            } else {
                ScanForm::General
            };
            let threads = match scan_threads() {
                Ok(t) => t,
                Err(fail) => return fail,
            };
            let summary = if threads > 1 {
                parallel_scan(p, form, threads)
            } else {
                scan_field(p, form)
            };
            match summary {
                Ok(s) => CommandResult::ok(output::scan_doc(&s), mode.json),
                Err(e) => ec_fail(e),
            }
        }
    }
}

/// `FROBDIFF_THREADS` caps the fan-out of `ec scan`; unset or 1 means
/// sequential. Anything that does not parse as a positive integer is
/// invalid input.
fn scan_threads() -> Result<usize, CommandResult> {
    match std::env::var("FROBDIFF_THREADS") {
        Err(_) => Ok(1),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(n),
            _ => Err(CommandResult::fail(
                format!("FROBDIFF_THREADS must be a positive integer, got {s:?}"),
                EXIT_INVALID,
            )),
        },
    }
}

/// Fans classification out over scoped threads; the summary is assembled in
/// coefficient enumeration order regardless of scheduling.
fn parallel_scan(
    p: Prime,
    form: ScanForm,
    threads: usize,
) -> Result<frobdiff_core::ec::ScanSummary, EcError> {
    let grid = coefficient_grid(p, form)?;
    let n = grid.len();
    let chunk = n.div_ceil(threads.max(1));
    let mut slots: Vec<Option<(WeierstrassCoefficients, Result<_, EcError>)>> = Vec::new();
    slots.resize_with(n, || None);
    std::thread::scope(|scope| {
        for (chunk_index, (grid_chunk, slot_chunk)) in grid
            .chunks(chunk.max(1))
            .zip(slots.chunks_mut(chunk.max(1)))
            .enumerate()
        {
            let _ = chunk_index;
            scope.spawn(move || {
                for (w, slot) in grid_chunk.iter().zip(slot_chunk.iter_mut()) {
                    let r = classify(w, true);
                    *slot = Some((w.clone(), r));
                }
            });
        }
    });
    let results = slots
        .into_iter()
        .map(|s| s.expect("every slot is filled"))
        .collect();
    summarize_rows(p, form, results)
}

fn build_prime(p: u64) -> Result<Prime, CommandResult> {
    Prime::new(p).map_err(|e: PrimeError| CommandResult::fail(e.to_string(), EXIT_INVALID))
}

fn build_ring(args: &RingArgs) -> Result<PolyRing, CommandResult> {
    let p = build_prime(args.prime)?;
    if args.vars.is_empty() {
        return Err(CommandResult::fail(
            "at least one variable is required".to_string(),
            EXIT_INVALID,
        ));
    }
    for (i, v) in args.vars.iter().enumerate() {
        let valid = !v.is_empty()
            && v.chars().next().unwrap().is_ascii_alphabetic()
            && v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
            && v != "D";
        if !valid {
            return Err(CommandResult::fail(
                format!("invalid variable name {v:?}"),
                EXIT_INVALID,
            ));
        }
        if args.vars[..i].contains(v) {
            return Err(CommandResult::fail(
                format!("duplicate variable name {v:?}"),
                EXIT_INVALID,
            ));
        }
    }
    let names: Vec<&str> = args.vars.iter().map(|s| s.as_str()).collect();
    Ok(PolyRing::new(p, &names))
}

fn with_poly<F>(ring: &RingArgs, expr: &str, json_mode: bool, run: F) -> CommandResult
where
    F: FnOnce(frobdiff_core::poly::MultiPoly) -> Result<Value, CommandResult>,
{
    let ring_built = match build_ring(ring) {
        Ok(r) => r,
        Err(fail) => return fail,
    };
    let f = match parse_polynomial(expr, &ring_built) {
        Ok(f) => f,
        Err(e) => return CommandResult::fail(e.to_string(), EXIT_PARSE),
    };
    if f.is_zero() {
        return CommandResult::fail(
            "the zero polynomial is not a valid input".to_string(),
            EXIT_INVALID,
        );
    }
    match run(f) {
        Ok(doc) => CommandResult::ok(doc, json_mode),
        Err(fail) => fail,
    }
}

fn level_fail(e: LevelError) -> CommandResult {
    match e {
        LevelError::IterationGuard => CommandResult::fail(e.to_string(), EXIT_VERIFICATION),
        _ => CommandResult::fail(e.to_string(), EXIT_INVALID),
    }
}

fn diffop_fail(e: DiffopError) -> CommandResult {
    match e {
        DiffopError::VerificationFailed => CommandResult::fail(e.to_string(), EXIT_VERIFICATION),
        DiffopError::Level(inner) => level_fail(inner),
        _ => CommandResult::fail(e.to_string(), EXIT_INVALID),
    }
}

fn ec_fail(e: EcError) -> CommandResult {
    match e {
        EcError::ConsistencyAlarm(_) => CommandResult::fail(e.to_string(), EXIT_VERIFICATION),
        _ => CommandResult::fail(e.to_string(), EXIT_INVALID),
    }
}

fn parse_curve(
    p: Prime,
    short: Option<&str>,
    general: Option<&str>,
) -> Result<WeierstrassCoefficients, CommandResult> {
    let parse_list = |src: &str, n: usize| -> Result<Vec<u64>, CommandResult> {
        let parts: Vec<&str> = src.split(',').collect();
        if parts.len() != n {
            return Err(CommandResult::fail(
                format!("expected {n} comma-separated coefficients, got {src:?}"),
                EXIT_INVALID,
            ));
        }
        parts
            .iter()
            .map(|s| {
                s.trim().parse::<u64>().map_err(|_| {
                    CommandResult::fail(
                        format!("invalid coefficient {s:?}"),
                        EXIT_INVALID,
                    )
                })
            })
            .collect()
    };
    match (short, general) {
        (Some(src), None) => {
            let v = parse_list(src, 2)?;
            WeierstrassCoefficients::short(p, v[0], v[1])
                .map_err(|e| CommandResult::fail(e.to_string(), EXIT_INVALID))
        }
        (None, Some(src)) => {
            let v = parse_list(src, 5)?;
            Ok(WeierstrassCoefficients::general(
                p, v[0], v[1], v[2], v[3], v[4],
            ))
        }
        _ => Err(CommandResult::fail(
            "exactly one of --short or --general is required".to_string(),
            EXIT_INVALID,
        )),
    }
}
