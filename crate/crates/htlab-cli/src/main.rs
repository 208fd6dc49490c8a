//! Batch frontend for the htlab library.
//!
//! Exit codes: 0 when every requested check passes, 1 when a mathematical
//! check fails, 2 on usage or input errors. Reports are deterministic:
//! the same invocation produces byte-identical output.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use htlab::cantor::{CantorPoint, Order, VElement};
use htlab::freecert::{
    attracting_census, centralizer_probe, free_certificate, stabilizer_probe, FreeCertReport,
    FreecertError, SampleStructure, WordCensusEntry,
};
use htlab::numerics::{CirclePoint, NRational};
use htlab::pingpong::{build_system, verify_pingpong, PingPongCertificate};

#[derive(Parser)]
#[command(
    name = "htlab",
    version,
    about = "Exact certificates and probes for piecewise-linear circle dynamics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Build the two-generator system at arity n and verify the ping-pong table
    VerifyPingpong {
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
        n: u32,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Write the report here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check that no reduced word of length <= max-len acts as the identity
    FreeCert {
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
        n: u32,
        #[arg(long = "max-len", value_parser = clap::value_parser!(u64).range(1..))]
        max_len: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fixed-point inventory of every reduced word of length <= max-len
    Census {
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
        n: u32,
        #[arg(long = "max-len", value_parser = clap::value_parser!(u64).range(1..))]
        max_len: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample the centralizer of the element stored in --alpha
    Centralizer {
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
        n: u32,
        /// JSON file holding the element to centralize
        #[arg(long)]
        alpha: PathBuf,
        #[arg(long = "max-len", value_parser = clap::value_parser!(u64).range(1..))]
        max_len: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample the stabilizer of a rational point on the circle
    Stabilizer {
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
        n: u32,
        /// The point as a fraction p/q, taken mod 1
        #[arg(long)]
        point: String,
        #[arg(long = "max-len", value_parser = clap::value_parser!(u64).range(1..))]
        max_len: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Operate on single elements stored as JSON files
    Element {
        #[command(subcommand)]
        op: ElementOp,
    },
}

#[derive(Subcommand)]
enum ElementOp {
    /// Compose two elements; the second --in file acts first
    Compose {
        #[arg(long = "in", required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Invert an element
    Invert {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the membership class: F, T\F, or V\T
    Classify {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Print the smallest k >= 1 with g^k = 1, or "exceeded" past --bound
    Order {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 1000)]
        bound: u64,
    },
    /// Print the circle positions where the element is discontinuous
    Discontinuities {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Apply the element to the n-ary expansion of a rational point
    Apply {
        #[arg(long = "in")]
        input: PathBuf,
        /// The point as a fraction p/q, taken mod 1
        #[arg(long)]
        point: String,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

/// `Ok(pass)` decides between exit 0 and exit 1; `Err` is a usage or
/// input problem and exits 2.
fn run(cli: Cli) -> Result<bool, String> {
    match cli.command {
        Command::VerifyPingpong { n, format, out } => {
            let sys = build_system(n).map_err(|e| e.to_string())?;
            let cert = verify_pingpong(&sys);
            let rendered = match format {
                Format::Json => pretty_json(&cert)?,
                Format::Text => certificate_text(&cert),
            };
            emit(&rendered, &out)?;
            Ok(cert.holds())
        }
        Command::FreeCert { n, max_len, format, out } => {
            let sys = build_system(n).map_err(|e| e.to_string())?;
            match free_certificate(&sys, max_len as usize) {
                Ok(report) => {
                    let rendered = match format {
                        Format::Json => pretty_json(&report)?,
                        Format::Text => free_cert_text(&report),
                    };
                    emit(&rendered, &out)?;
                    Ok(report.all_free())
                }
                Err(FreecertError::PingPongNotVerified) => {
                    eprintln!("{}", FreecertError::PingPongNotVerified);
                    Ok(false)
                }
                Err(e) => Err(e.to_string()),
            }
        }
        Command::Census { n, max_len, format, out } => {
            let sys = build_system(n).map_err(|e| e.to_string())?;
            match attracting_census(&sys, max_len as usize) {
                Ok(entries) => {
                    let rendered = match format {
                        Format::Json => pretty_json(&entries)?,
                        Format::Text => census_text(&entries),
                    };
                    emit(&rendered, &out)?;
                    Ok(entries.iter().all(|e| e.structure_ok() && e.localization_ok))
                }
                Err(FreecertError::PingPongNotVerified) => {
                    eprintln!("{}", FreecertError::PingPongNotVerified);
                    Ok(false)
                }
                Err(e) => Err(e.to_string()),
            }
        }
        Command::Centralizer { n, alpha, max_len, format, out } => {
            let sys = build_system(n).map_err(|e| e.to_string())?;
            let alpha = read_element(&alpha)?;
            let probe = centralizer_probe(&sys, &alpha, max_len as usize)
                .map_err(|e| e.to_string())?;
            let rendered = match format {
                Format::Json => pretty_json(&probe)?,
                Format::Text => {
                    let words: Vec<String> =
                        probe.commuting_words.iter().map(|w| w.to_string()).collect();
                    format!(
                        "centralizer sample, n = {}, max length {}: {} commuting words, {:?}\n{}",
                        n,
                        probe.max_length,
                        words.len(),
                        probe.structure,
                        word_list(&words),
                    )
                }
            };
            emit(&rendered, &out)?;
            Ok(probe.structure != SampleStructure::NotCyclic)
        }
        Command::Stabilizer { n, point, max_len, format, out } => {
            let sys = build_system(n).map_err(|e| e.to_string())?;
            let p = parse_point(&point)?;
            let probe = stabilizer_probe(&sys, &p, max_len as usize);
            let rendered = match format {
                Format::Json => pretty_json(&probe)?,
                Format::Text => {
                    let words: Vec<String> =
                        probe.fixing_words.iter().map(|w| w.to_string()).collect();
                    format!(
                        "stabilizer of {}, n = {}, max length {}: {} fixing words, {:?}\n{}",
                        probe.point,
                        n,
                        probe.max_length,
                        words.len(),
                        probe.structure,
                        word_list(&words),
                    )
                }
            };
            emit(&rendered, &out)?;
            Ok(probe.structure != SampleStructure::NotCyclic)
        }
        Command::Element { op } => run_element(op),
    }
}

fn run_element(op: ElementOp) -> Result<bool, String> {
    match op {
        ElementOp::Compose { inputs, out } => {
            if inputs.len() != 2 {
                return Err(format!(
                    "compose expects exactly two --in files, got {}",
                    inputs.len()
                ));
            }
            let f = read_element(&inputs[0])?;
            let g = read_element(&inputs[1])?;
            let result = f.compose(&g).map_err(|e| e.to_string())?;
            emit(&pretty_json(&result)?, &out)?;
            Ok(true)
        }
        ElementOp::Invert { input, out } => {
            let element = read_element(&input)?;
            emit(&pretty_json(&element.invert())?, &out)?;
            Ok(true)
        }
        ElementOp::Classify { input } => {
            println!("{}", read_element(&input)?.classify());
            Ok(true)
        }
        ElementOp::Order { input, bound } => {
            match read_element(&input)?.order_of(bound) {
                Order::Finite(k) => println!("{k}"),
                Order::Exceeded => println!("exceeded"),
            }
            Ok(true)
        }
        ElementOp::Discontinuities { input } => {
            let points: Vec<String> = read_element(&input)?
                .discontinuity_points()
                .iter()
                .map(|p| p.value().to_string())
                .collect();
            println!("{}", serde_json::to_string(&points).map_err(|e| e.to_string())?);
            Ok(true)
        }
        ElementOp::Apply { input, point } => {
            let element = read_element(&input)?;
            let p = parse_point(&point)?;
            let kappa =
                CantorPoint::from_circle(&p, element.arity()).map_err(|e| e.to_string())?;
            let image = element.apply_point(&kappa).map_err(|e| e.to_string())?;
            println!("{}", serde_json::to_string(&image).map_err(|e| e.to_string())?);
            Ok(true)
        }
    }
}

fn read_element(path: &PathBuf) -> Result<VElement, String> {
    let data = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    serde_json::from_str(&data).map_err(|e| format!("{}: {e}", path.display()))
}

fn parse_point(s: &str) -> Result<CirclePoint, String> {
    s.parse::<NRational>()
        .map(CirclePoint::new)
        .map_err(|e| format!("invalid point {s:?}: {e}"))
}

fn pretty_json<T: serde::Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string_pretty(value)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| e.to_string())
}

fn emit(rendered: &str, out: &Option<PathBuf>) -> Result<(), String> {
    match out {
        None => {
            print!("{rendered}");
            Ok(())
        }
        Some(path) => std::fs::write(path, rendered)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
    }
}

fn mark(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAILED"
    }
}

fn word_list(words: &[String]) -> String {
    if words.is_empty() {
        String::new()
    } else {
        format!("  {}\n", words.join(" "))
    }
}

fn certificate_text(cert: &PingPongCertificate) -> String {
    let mut s = String::new();
    let verdict = if cert.verdict { "PASS" } else { "FAIL" };
    writeln!(s, "ping-pong certificate, n = {}: {verdict}", cert.n).unwrap();
    for check in &cert.attractor_checks {
        let location = match &check.attracting_point {
            Some(p) => p.to_string(),
            None => "none".to_string(),
        };
        writeln!(
            s,
            "  attractor {} at {location} inside {:?}: {}",
            check.letter,
            check.arc,
            mark(check.holds)
        )
        .unwrap();
    }
    for check in &cert.disjointness {
        writeln!(
            s,
            "  arcs P({}) and P({}) disjoint: {}",
            check.first,
            check.second,
            mark(check.disjoint)
        )
        .unwrap();
    }
    for ineq in &cert.inequalities {
        writeln!(
            s,
            "  {}: {} < {}: {}",
            ineq.name,
            ineq.lhs,
            ineq.rhs,
            mark(ineq.holds)
        )
        .unwrap();
    }
    for check in &cert.containments {
        writeln!(
            s,
            "  {}({:?}) = {:?} strictly inside {:?}: {}",
            check.letter,
            check.source,
            check.image,
            check.target,
            mark(check.strictly_inside)
        )
        .unwrap();
    }
    for check in &cert.contractions {
        let c = &check.certificate;
        writeln!(
            s,
            "  contraction for {} on {:?}: max slope {}, length {}: {}",
            check.letter,
            c.arc,
            c.max_slope,
            c.arc_length,
            mark(c.is_certified())
        )
        .unwrap();
    }
    s
}

fn free_cert_text(report: &FreeCertReport) -> String {
    let mut s = String::new();
    let verdict = if report.all_free() { "PASS" } else { "FAIL" };
    writeln!(
        s,
        "freeness scan, n = {}, max length {}: {} words checked, {} violations: {verdict}",
        report.n,
        report.max_length,
        report.words_checked,
        report.violations.len()
    )
    .unwrap();
    for violation in &report.violations {
        writeln!(s, "  {}: {:?}", violation.word, violation.failure).unwrap();
    }
    s
}

fn census_text(entries: &[WordCensusEntry]) -> String {
    let mut s = String::new();
    let bad: Vec<&WordCensusEntry> = entries
        .iter()
        .filter(|e| !(e.structure_ok() && e.localization_ok))
        .collect();
    let verdict = if bad.is_empty() { "PASS" } else { "FAIL" };
    writeln!(
        s,
        "attracting census: {} words, {} with unexpected fixed-point structure: {verdict}",
        entries.len(),
        bad.len()
    )
    .unwrap();
    for entry in bad {
        writeln!(
            s,
            "  {}: {} points, localization {}",
            entry.word,
            entry.report.points.len(),
            mark(entry.localization_ok)
        )
        .unwrap();
    }
    s
}
