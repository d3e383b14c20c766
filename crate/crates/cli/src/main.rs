use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use daha_core::{emit, run_suite, EmitTarget, Emission, Suite};

#[derive(Parser, Debug)]
#[command(name = "daha", version, about = "Exact DAHA representation at q = exp(i*pi/p): verification and export")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run verification suites and print one line per check.
    Verify {
        /// A single p or an inclusive range `a..b`.
        #[arg(long, default_value = "3..8", value_parser = parse_p_list)]
        p: PList,
        /// daha, ybasis, modular, symmetric, oracle, identities or all.
        #[arg(long, default_value = "all", value_parser = parse_suites)]
        suite: SuiteSel,
        /// Print only failing checks.
        #[arg(long)]
        quiet: bool,
    },
    /// Write an operator, basis, fusion tensor or the Gaussian element.
    Emit {
        #[arg(long, value_parser = parse_p)]
        p: u32,
        /// xmatrix, ymatrix, tmatrix, smatrix, cbasis, hbasis, fusion or ribbon.
        #[arg(long, value_parser = parse_target)]
        what: EmitTarget,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Add complex-embedded values with this many fractional digits.
        #[arg(long)]
        float_digits: Option<u32>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Debug)]
struct PList(Vec<u32>);

#[derive(Clone, Debug)]
struct SuiteSel(Vec<Suite>);

fn parse_p(s: &str) -> Result<u32, String> {
    let p: u32 = s.trim().parse().map_err(|_| format!("not an integer: {s:?}"))?;
    if p < 3 {
        return Err(format!("p must be at least 3, got {p}"));
    }
    Ok(p)
}

fn parse_p_list(s: &str) -> Result<PList, String> {
    match s.split_once("..") {
        None => Ok(PList(vec![parse_p(s)?])),
        Some((a, b)) => {
            let (lo, hi) = (parse_p(a)?, parse_p(b)?);
            if lo > hi {
                return Err(format!("empty range {s:?}"));
            }
            Ok(PList((lo..=hi).collect()))
        }
    }
}

fn parse_suites(s: &str) -> Result<SuiteSel, String> {
    if s == "all" {
        return Ok(SuiteSel(Suite::ALL.to_vec()));
    }
    s.parse().map(|suite| SuiteSel(vec![suite])).map_err(|e: daha_core::Error| e.to_string())
}

fn parse_target(s: &str) -> Result<EmitTarget, String> {
    s.parse().map_err(|e: daha_core::Error| e.to_string())
}

fn verify(ps: &[u32], suites: &[Suite], quiet: bool) -> ExitCode {
    let mut all_ok = true;
    for &p in ps {
        for &suite in suites {
            let report = match run_suite(p, suite) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("error: {suite} p={p}: {e}");
                    all_ok = false;
                    continue;
                }
            };
            let passed = report.checks.iter().filter(|c| c.passed()).count();
            for (line, check) in report.summary_lines().iter().zip(&report.checks) {
                if !quiet || !check.passed() {
                    println!("{line}");
                }
            }
            let tag = if report.passed() { "PASS" } else { "FAIL" };
            println!("{tag} {suite} p={p}: {passed}/{} checks", report.checks.len());
            all_ok &= report.passed();
        }
    }
    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn write_emission(e: &Emission, format: Format, out: &mut dyn Write) -> io::Result<()> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, &e.json)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(&e.csv_header)?;
            for row in &e.csv_rows {
                w.write_record(row)?;
            }
            w.flush()?;
        }
    }
    out.flush()
}

fn emit_cmd(p: u32, what: EmitTarget, format: Format, out: Option<PathBuf>, float_digits: Option<u32>) -> ExitCode {
    let emission = match emit(p, what, float_digits) {
        Ok(e) => e,
        Err(e) => {
            eprintln!("error: {what} p={p}: {e}");
            return ExitCode::FAILURE;
        }
    };
    let written = match &out {
        Some(path) => File::create(path).and_then(|f| write_emission(&emission, format, &mut BufWriter::new(f))),
        None => write_emission(&emission, format, &mut io::stdout().lock()),
    };
    match written {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let target = out.map_or("stdout".into(), |p| p.display().to_string());
            eprintln!("error: writing {target}: {e}");
            ExitCode::FAILURE
        }
    }
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Verify { p, suite, quiet } => verify(&p.0, &suite.0, quiet),
        Command::Emit { p, what, format, out, float_digits } => emit_cmd(p, what, format, out, float_digits),
    }
}
