//! The `dhm` command-line front end.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error, 3 I/O error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::adic::{complexity, scan, with_threads, ScanOptions, TheoremVerdict};
use crate::context::PrimeContext;
use crate::error::Error;
use crate::sequence::{condition_match, Triple};
use crate::suite::{run_identity_suite_with, SuiteReport};

pub const SCHEMA_VERSION: &str = "1";

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "dhm",
    version,
    about = "DHM binary sequences and their 2-adic complexity"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print one period of a sequence
    Gen(SequenceArgs),
    /// Full periodic autocorrelation spectrum
    Autocorr(SequenceArgs),
    /// Exact 2-adic complexity
    C2(SequenceArgs),
    /// Check every algebraic identity for all admissible q up to --qmax
    Verify {
        #[arg(long)]
        qmax: u64,
        /// Perturb one cyclotomic number per prime before checking
        #[arg(long, hide = true)]
        corrupt_table: bool,
    },
    /// Compare predicted and observed complexity for every matched sequence
    Scan {
        #[arg(long)]
        qmax: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Args)]
struct SequenceArgs {
    #[arg(long)]
    q: u64,
    /// Class indices as i,j,l
    #[arg(long)]
    ijl: Triple,
    #[arg(long)]
    tilde: bool,
    /// Primitive root used to label the classes
    #[arg(long)]
    theta: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Top-level JSON document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub schema_version: String,
    pub records: Vec<Payload>,
}

impl OutputRecord {
    pub fn new(records: Vec<Payload>) -> Self {
        OutputRecord {
            schema_version: SCHEMA_VERSION.to_string(),
            records,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Payload {
    Sequence(SequenceDump),
    Spectrum(SpectrumRecord),
    Complexity(ComplexityRecord),
    Verdict(ScanRow),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceDump {
    pub q: u64,
    pub theta: u64,
    pub s: i64,
    pub t: i64,
    pub k: usize,
    pub triple: Triple,
    pub tilde: bool,
    pub period: usize,
    pub bits: String,
    pub weight: usize,
    pub condition: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumRecord {
    pub q: u64,
    pub triple: Triple,
    pub tilde: bool,
    pub condition: String,
    pub values: Vec<i64>,
    pub max_offpeak: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexityRecord {
    pub q: u64,
    pub triple: Triple,
    pub tilde: bool,
    pub condition: String,
    pub period: u64,
    pub s2: String,
    pub modulus: String,
    pub divisor: String,
    pub d1: String,
    pub d2: String,
    pub value: String,
    pub approx_bits: f64,
}

/// One scan row; the same struct backs both the JSON and CSV forms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRow {
    pub q: u64,
    pub triple: Triple,
    pub tilde: bool,
    pub tag: String,
    #[serde(rename = "D")]
    pub d_candidate: String,
    #[serde(rename = "D_prime")]
    pub d_prime: bool,
    pub pow_ok: bool,
    #[serde(rename = "divides_S2")]
    pub divides_s2: bool,
    pub d: String,
    pub c2_exact: String,
    pub agree: bool,
}

impl From<&TheoremVerdict> for ScanRow {
    fn from(v: &TheoremVerdict) -> Self {
        ScanRow {
            q: v.q,
            triple: v.triple,
            tilde: v.tilde,
            tag: v.tag.clone(),
            d_candidate: v.l_candidate.to_string(),
            d_prime: v.l_prime,
            pow_ok: v.power_residue_ok,
            divides_s2: v.divides_s2,
            d: v.observed_d.to_string(),
            c2_exact: v.report.exact_label(),
            agree: v.agree,
        }
    }
}

/// Renders scan rows in the requested format.
pub fn render_scan(rows: &[ScanRow], format: Format) -> Result<Vec<u8>, Error> {
    match format {
        Format::Json => {
            let doc = OutputRecord::new(rows.iter().cloned().map(Payload::Verdict).collect());
            to_json(&doc)
        }
        Format::Csv => {
            let mut w = csv::WriterBuilder::new()
                .has_headers(false)
                .from_writer(Vec::new());
            w.write_record(SCAN_COLUMNS).map_err(csv_err)?;
            for r in rows {
                w.serialize(r).map_err(csv_err)?;
            }
            w.into_inner()
                .map_err(|e| Error::Io(std::io::Error::other(e.to_string())))
        }
    }
}

pub const SCAN_COLUMNS: [&str; 11] = [
    "q",
    "triple",
    "tilde",
    "tag",
    "D",
    "D_prime",
    "pow_ok",
    "divides_S2",
    "d",
    "c2_exact",
    "agree",
];

/// Parses CSV produced by [`render_scan`].
pub fn parse_scan_csv(data: &[u8]) -> Result<Vec<ScanRow>, Error> {
    csv::Reader::from_reader(data)
        .deserialize()
        .collect::<Result<_, _>>()
        .map_err(csv_err)
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e.to_string()))
}

fn to_json<T: Serialize>(v: &T) -> Result<Vec<u8>, Error> {
    let mut buf = serde_json::to_vec_pretty(v).map_err(|e| Error::Io(e.into()))?;
    buf.push(b'\n');
    Ok(buf)
}

/// Writes via a sibling temp file and a rename, so readers never see a
/// partial file.
fn write_atomic(path: &Path, data: &[u8]) -> std::io::Result<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let name = path
        .file_name()
        .ok_or_else(|| std::io::Error::other(format!("{} is not a file path", path.display())))?;
    let tmp = dir.join(format!(
        ".{}.tmp{}",
        name.to_string_lossy(),
        std::process::id()
    ));
    fs::write(&tmp, data)?;
    fs::rename(&tmp, path).inspect_err(|_| {
        let _ = fs::remove_file(&tmp);
    })
}

fn emit(out: Option<&Path>, data: &[u8]) -> Result<(), Error> {
    match out {
        Some(p) => write_atomic(p, data)?,
        None => std::io::stdout().lock().write_all(data)?,
    }
    Ok(())
}

fn threads_from_env() -> Result<Option<usize>, Error> {
    match std::env::var("DHM_THREADS") {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .map(Some)
            .ok_or_else(|| {
                Error::Domain(format!("DHM_THREADS must be a positive integer, got {v:?}"))
            }),
        Err(_) => Ok(None),
    }
}

fn sequence_payload(cmd: &Command, a: &SequenceArgs) -> Result<Payload, Error> {
    let ctx = PrimeContext::new(a.q, a.theta)?;
    let seq = ctx.sequence(a.ijl, a.tilde);
    let condition = condition_match(&ctx.params, a.ijl, a.tilde)
        .label()
        .to_string();
    Ok(match cmd {
        Command::Gen(_) => Payload::Sequence(SequenceDump {
            q: a.q,
            theta: ctx.params.theta,
            s: ctx.params.s,
            t: ctx.params.t,
            k: ctx.params.k,
            triple: a.ijl,
            tilde: a.tilde,
            period: seq.period(),
            bits: seq.bit_string(),
            weight: seq.weight(),
            condition,
        }),
        Command::Autocorr(_) => Payload::Spectrum(SpectrumRecord {
            q: a.q,
            triple: a.ijl,
            tilde: a.tilde,
            condition,
            max_offpeak: seq.max_offpeak(),
            values: seq.autocorr_spectrum(),
        }),
        _ => {
            let rep = complexity(&seq)?;
            Payload::Complexity(ComplexityRecord {
                q: a.q,
                triple: a.ijl,
                tilde: a.tilde,
                condition,
                period: rep.n,
                s2: rep.s2.to_string(),
                modulus: rep.modulus.to_string(),
                divisor: rep.d.to_string(),
                d1: rep.d1.to_string(),
                d2: rep.d2.to_string(),
                value: rep.exact_label(),
                approx_bits: rep.approx_bits,
            })
        }
    })
}

fn render_suite(report: &SuiteReport) -> String {
    let mut s = String::new();
    for f in &report.failures {
        s.push_str(&format!("FAIL q={} {} {}\n", f.q, f.identity, f.detail));
    }
    s.push_str(&format!(
        "{} checks over {} primes: {}\n",
        report.checks,
        report.primes.len(),
        if report.passed() {
            "all identities hold".to_string()
        } else {
            format!("{} failures", report.failures.len())
        }
    ));
    s
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Domain(_) => EXIT_USAGE,
        Error::Consistency(_) => EXIT_VERIFY,
        Error::Io(_) => EXIT_IO,
    }
}

fn execute(cli: Cli) -> Result<i32, Error> {
    match &cli.command {
        cmd @ (Command::Gen(a) | Command::Autocorr(a) | Command::C2(a)) => {
            let payload = sequence_payload(cmd, a)?;
            emit(
                a.out.as_deref(),
                &to_json(&OutputRecord::new(vec![payload]))?,
            )?;
            Ok(EXIT_OK)
        }
        Command::Verify {
            qmax,
            corrupt_table,
        } => {
            let report = with_threads(threads_from_env()?, || {
                run_identity_suite_with(*qmax, |ctx| {
                    if *corrupt_table {
                        ctx.table.numbers[0][2] += 1;
                    }
                })
            })?;
            if report.primes.is_empty() {
                eprintln!("warning: no prime q ≡ 5 (mod 8) with q <= {qmax}; nothing checked");
            }
            emit(None, render_suite(&report).as_bytes())?;
            Ok(if report.passed() {
                EXIT_OK
            } else {
                EXIT_VERIFY
            })
        }
        Command::Scan { qmax, format, out } => {
            let options = ScanOptions {
                threads: threads_from_env()?,
            };
            let verdicts = scan(*qmax, &options)?;
            let rows: Vec<ScanRow> = verdicts.iter().map(ScanRow::from).collect();
            emit(out.as_deref(), &render_scan(&rows, *format)?)?;
            Ok(if rows.iter().all(|r| r.agree) {
                EXIT_OK
            } else {
                EXIT_VERIFY
            })
        }
    }
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("dhm: {e}");
            exit_code_for(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_and_json_agree() {
        let rows: Vec<ScanRow> = scan(37, &ScanOptions::default())
            .unwrap()
            .iter()
            .map(ScanRow::from)
            .collect();
        let csv_rows = parse_scan_csv(&render_scan(&rows, Format::Csv).unwrap()).unwrap();
        let doc: OutputRecord =
            serde_json::from_slice(&render_scan(&rows, Format::Json).unwrap()).unwrap();
        let json_rows: Vec<ScanRow> = doc
            .records
            .into_iter()
            .map(|p| match p {
                Payload::Verdict(r) => r,
                other => panic!("unexpected payload {other:?}"),
            })
            .collect();
        assert_eq!(csv_rows, rows);
        assert_eq!(json_rows, rows);
    }

    #[test]
    fn csv_header_and_quoting() {
        let rows: Vec<ScanRow> = scan(5, &ScanOptions::default())
            .unwrap()
            .iter()
            .map(ScanRow::from)
            .collect();
        let text = String::from_utf8(render_scan(&rows, Format::Csv).unwrap()).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), SCAN_COLUMNS.join(","));
        // triples contain commas and must be quoted
        assert!(lines
            .next()
            .unwrap()
            .starts_with("5,\"0,1,2\",false,s1,11,"));
    }

    #[test]
    fn output_record_round_trip() {
        let a = SequenceArgs {
            q: 5,
            ijl: "1,0,3".parse().unwrap(),
            tilde: true,
            theta: Some(3),
            out: None,
        };
        for cmd in [
            Command::Gen(a.clone()),
            Command::Autocorr(a.clone()),
            Command::C2(a.clone()),
        ] {
            let doc = OutputRecord::new(vec![sequence_payload(&cmd, &a).unwrap()]);
            let text = serde_json::to_string(&doc).unwrap();
            assert_eq!(serde_json::from_str::<OutputRecord>(&text).unwrap(), doc);
        }
    }
}
