//! Command-line dispatcher: `invariants`/`classify`, `certify`, `probe`,
//! `gen`. All data goes to stdout as JSON (schema-tagged, deterministic
//! float formatting); logs go to stderr.
//!
//! Exit codes: 0 success / no violation, 10 probe found a violation,
//! 2 malformed input, 3 precondition failure.

use crate::error::Error;
use crate::jorgensen::{self, InequalityId};
use crate::jsonio;
use crate::probe::{self, Element, ProbeMode};
use crate::registry;
use crate::sp;
use crate::Result;
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use std::io::Read;
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "hypdisc", version, about = "Isometry invariants and non-discreteness certificates for real, complex and quaternionic hyperbolic spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify an element and print its conjugacy invariants.
    #[command(alias = "classify")]
    Invariants(InputArg),
    /// Evaluate one inequality on a pair (f, g) and print the certificate.
    Certify(CertifyArgs),
    /// Search a word ball for certificate violations against a test map.
    Probe(ProbeArgs),
    /// Emit a bundled example (group, test map, or sequence).
    Gen(GenArgs),
}

#[derive(Args)]
struct InputArg {
    /// Element file (JSON); "-" reads stdin.
    #[arg(long, default_value = "-")]
    input: String,
}

#[derive(Args)]
struct CertifyArgs {
    /// Inequality id: lox_cw | elliptic_cw | nonelliptic_cw | sp_elliptic |
    /// sp_shimizu | sp_cao_parker.
    #[arg(long)]
    ineq: String,
    /// First element (the test map / distinguished element).
    #[arg(long)]
    f: PathBuf,
    /// Second element.
    #[arg(long)]
    g: PathBuf,
}

#[derive(Args)]
struct ProbeArgs {
    /// Group presentation file.
    #[arg(long)]
    group: PathBuf,
    /// Test map element file.
    #[arg(long = "test-map")]
    test_map: PathBuf,
    /// Probe mode: thm1_lox | thm1_nonelliptic | thm1_elliptic |
    /// thm2_conjugate | thmq_lox | thmq_heisenberg | thmq_elliptic.
    #[arg(long)]
    mode: String,
    /// Word-ball depth.
    #[arg(long)]
    depth: usize,
    /// Seed for the randomized evidence checks.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads (0 = all cores); falls back to HYPDISC_THREADS, then 1.
    #[arg(long)]
    threads: Option<usize>,
    /// Optional CSV dump of certificate values (word, ineq, lhs, rhs, …).
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    /// Bundled name; see `gen list`.
    name: String,
    /// Algebra size override for parameterized test maps.
    #[arg(long)]
    n: Option<u32>,
    /// Write to a file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn read_input(path: &str) -> Result<Value> {
    let text = if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Error::InvalidInput(format!("stdin: {e}")))?;
        buf
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("{path}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Error::InvalidInput(format!("{path}: {e}")))
}

fn read_file(path: &PathBuf) -> Result<Value> {
    read_input(path.to_str().unwrap_or("-"))
}

fn parse_ineq(s: &str) -> Result<InequalityId> {
    Ok(match s {
        "lox_cw" => InequalityId::LoxCw,
        "elliptic_cw" => InequalityId::EllipticCw,
        "nonelliptic_cw" => InequalityId::NonellipticCw,
        "sp_elliptic" => InequalityId::SpElliptic,
        "sp_shimizu" => InequalityId::SpShimizu,
        "sp_cao_parker" => InequalityId::SpCaoParker,
        other => return Err(Error::InvalidInput(format!("unknown inequality id: {other}"))),
    })
}

fn cmd_invariants(args: &InputArg) -> Result<(i32, String)> {
    let elem = jsonio::parse_element(&read_input(&args.input)?)?;
    let out = match &elem {
        Element::Clifford(m) => {
            if !m.validate(1e-7) {
                return Err(Error::NotMember("matrix fails the SL(2,C_n) conditions".into()));
            }
            let inv = crate::lorentz::classify(m)?;
            let mut v = serde_json::to_value(&inv).expect("serializable");
            v["schema"] = json!(crate::SCHEMA);
            v
        }
        Element::Sp(m) => {
            let inv = sp::sp_classify(m)?;
            let mut v = serde_json::to_value(&inv).expect("serializable");
            v["schema"] = json!(crate::SCHEMA);
            v
        }
    };
    Ok((0, jsonio::write_json(&out)))
}

fn cmd_certify(args: &CertifyArgs) -> Result<(i32, String)> {
    let ineq = parse_ineq(&args.ineq)?;
    let f = jsonio::parse_element(&read_file(&args.f)?)?;
    let g = jsonio::parse_element(&read_file(&args.g)?)?;
    let pair = ("f".to_string(), "g".to_string());
    let cert = match ineq {
        InequalityId::LoxCw | InequalityId::EllipticCw | InequalityId::NonellipticCw => {
            let fm = f.as_clifford()?;
            let gm = g.as_clifford()?;
            if !fm.validate(1e-7) || !gm.validate(1e-7) {
                return Err(Error::NotMember("input fails the SL(2,C_n) conditions".into()));
            }
            let gd = jorgensen::analyze(gm)?;
            match ineq {
                InequalityId::LoxCw => {
                    let fd = jorgensen::analyze(fm)?;
                    jorgensen::check_lox(fm, &fd, gm, &gd, pair)?
                }
                InequalityId::EllipticCw => {
                    let fd = jorgensen::analyze(fm)?;
                    jorgensen::check_elliptic(fm, &fd, gm, &gd, pair)?
                }
                InequalityId::NonellipticCw => {
                    // conjugate f to fix ∞ and carry g along
                    let (h, f_inf) = jorgensen::conjugate_to_infinity(fm)?;
                    let fd_inf = jorgensen::analyze(&f_inf)?;
                    let g_conj = gm.conjugate_by(&h);
                    let gd_conj = jorgensen::analyze(&g_conj)?;
                    jorgensen::check_nonelliptic(&f_inf, &fd_inf, &g_conj, &gd_conj, pair)?
                }
                _ => unreachable!(),
            }
        }
        InequalityId::SpElliptic => sp::check_sp_elliptic(f.as_sp()?, g.as_sp()?, pair)?,
        InequalityId::SpShimizu => sp::check_sp_shimizu(f.as_sp()?, g.as_sp()?, pair)?,
        InequalityId::SpCaoParker => sp::check_cao_parker(f.as_sp()?, g.as_sp()?, pair)?,
    };
    let mut v = serde_json::to_value(&cert).expect("serializable");
    v["schema"] = json!(crate::SCHEMA);
    Ok((0, jsonio::write_json(&v)))
}

fn thread_count(cli_value: Option<usize>) -> usize {
    cli_value
        .or_else(|| std::env::var("HYPDISC_THREADS").ok().and_then(|s| s.parse().ok()))
        .unwrap_or(1)
}

fn cmd_probe(args: &ProbeArgs) -> Result<(i32, String)> {
    let group = jsonio::parse_group(&read_file(&args.group)?)?;
    let test_map = jsonio::parse_element(&read_file(&args.test_map)?)?;
    let mode = ProbeMode::parse(&args.mode)?;
    let threads = thread_count(args.threads);
    let report = probe::run_probe(&group, &test_map, mode, args.depth, args.seed, threads)?;
    if let Some(csv_path) = &args.csv {
        let mut csv = String::from("word,inequality,lhs,rhs,satisfied,verdict\n");
        for c in &report.certificates {
            let ineq = serde_json::to_value(c.inequality_id).expect("tag");
            let verdict = serde_json::to_value(c.verdict).expect("tag");
            csv.push_str(&format!(
                "\"{}\",{},{:.17e},{:.17e},{},{}\n",
                c.pair.1,
                ineq.as_str().unwrap_or("?"),
                c.lhs,
                c.rhs,
                c.satisfied,
                verdict.as_str().unwrap_or("?"),
            ));
        }
        std::fs::write(csv_path, csv)
            .map_err(|e| Error::InvalidInput(format!("csv: {e}")))?;
    }
    let code = if report.violation_found { 10 } else { 0 };
    Ok((code, jsonio::to_output(&report)?))
}

fn cmd_gen(args: &GenArgs) -> Result<(i32, String)> {
    if args.name == "list" {
        let v = json!({"schema": crate::SCHEMA, "names": registry::names()});
        return Ok((0, jsonio::write_json(&v)));
    }
    let value = if let Ok(group) = registry::group(&args.name) {
        jsonio::group_to_value(&group)
    } else if args.name == "cp_sequence" {
        let elements: Vec<Value> = registry::cp_sequence()
            .into_iter()
            .map(|m| jsonio::element_to_value(&Element::Sp(m)))
            .collect();
        json!({"schema": crate::SCHEMA, "name": "cp_sequence", "elements": elements})
    } else {
        jsonio::element_to_value(&registry::test_map(&args.name, args.n)?)
    };
    let text = jsonio::write_json(&value);
    if let Some(out) = &args.out {
        std::fs::write(out, text.clone() + "\n")
            .map_err(|e| Error::InvalidInput(format!("writing {}: {e}", out.display())))?;
        return Ok((0, format!("{{\"written\":\"{}\"}}", out.display())));
    }
    Ok((0, text))
}

/// Parses argv, runs the command, prints data to stdout (or a machine
/// readable error object), and returns the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Invariants(a) => cmd_invariants(a),
        Command::Certify(a) => cmd_certify(a),
        Command::Probe(a) => cmd_probe(a),
        Command::Gen(a) => cmd_gen(a),
    };
    match outcome {
        Ok((code, text)) => {
            println!("{text}");
            code
        }
        Err(e) => {
            let code = e.exit_code();
            let obj = json!({
                "schema": crate::SCHEMA,
                "error": e.to_string(),
                "exit_code": code,
            });
            println!("{}", jsonio::write_json(&obj));
            eprintln!("error: {e}");
            code
        }
    }
}
