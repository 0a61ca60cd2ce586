//! Command-line front end. Every subcommand emits flat records as JSON lines
//! or TSV.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::brauer::{
    brauer_decomposition, find_rational_point, obstruction_decision, family_invariant_profile,
    Decision, ProjectivePoint,
};
use crate::census::{count_nbr_characters, count_nbr_direct, count_nbr_rearranged, count_nloc};
use crate::constants::{constant_d, constant_e, euler_c, euler_c_f, DEFAULT_TRUNCATION};
use crate::error::Error;
use crate::local::{solvable_at_prime, solvable_everywhere, FamilyInstance, QuadricInstance};
use crate::verify::{run_suite, Suite};

pub const THREADS_ENV: &str = "QUADRIC_BM_THREADS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_INCONSISTENT: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "quadric-bm", version, about = "Local solvability, Brauer-Manin obstructions and counts for diagonal ternary quadrics")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::JsonLines, global = true)]
    pub format: Format,
    /// Write records to FILE instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    JsonLines,
    Tsv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CountMode {
    NbrDirect,
    NbrRearranged,
    NbrCharacters,
    Nloc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConstantName {
    #[value(name = "C")]
    C,
    #[value(name = "Cf")]
    Cf,
    #[value(name = "D")]
    D,
    #[value(name = "E")]
    E,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Identities,
    Oracles,
    All,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solvability of a x^2 + b y^2 + c z^2 = n over R and every Q_p, or at one prime.
    #[command(allow_negative_numbers = true)]
    Local {
        #[arg(long)]
        a: i64,
        #[arg(long)]
        b: i64,
        #[arg(long)]
        c: i64,
        #[arg(long)]
        n: i64,
        #[arg(long)]
        p: Option<u64>,
    },
    /// Brauer-Manin obstruction for a family member.
    #[command(allow_negative_numbers = true)]
    Obstruct {
        #[arg(long, default_value_t = 17)]
        q: u64,
        #[arg(long)]
        a: i64,
        #[arg(long)]
        c: i64,
        #[arg(long)]
        d: i64,
        #[arg(long)]
        e: i64,
    },
    /// Quaternion decomposition of the quadric at a rational point.
    #[command(allow_negative_numbers = true)]
    Brauer {
        #[arg(long)]
        a: i64,
        #[arg(long)]
        b: i64,
        #[arg(long)]
        c: i64,
        #[arg(long)]
        n: i64,
        /// Rational point as x,y,z,t; searched for when absent.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        point: Option<Vec<i64>>,
        /// Height bound for the point search.
        #[arg(long, default_value_t = 1000)]
        bound: u64,
    },
    /// Census counts.
    #[command(allow_negative_numbers = true)]
    Count {
        #[arg(long, value_enum)]
        mode: CountMode,
        #[arg(long = "B", value_name = "B")]
        big_b: u64,
        #[arg(long, default_value_t = 17)]
        q: u64,
        #[arg(long, default_value_t = 1)]
        n: i64,
        #[arg(long, env = THREADS_ENV, default_value_t = 1)]
        threads: usize,
    },
    /// Euler products and analytic constants.
    Constants {
        #[arg(long, value_enum)]
        name: ConstantName,
        #[arg(long, default_value_t = 17)]
        q: u64,
        #[arg(long = "P", value_name = "P", default_value_t = DEFAULT_TRUNCATION)]
        big_p: u64,
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        a: i64,
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        b: i64,
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        c: i64,
        #[arg(long, default_value_t = 1)]
        f: u64,
    },
    /// Identity and oracle self-checks.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Failure of a subcommand, already mapped to an exit status.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NumericalInconsistency(_) | Error::ChartFailure => EXIT_INCONSISTENT,
            _ => EXIT_INVALID,
        };
        Failure { code, message: e.to_string() }
    }
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("records serialize")
}

fn merge(mut base: Value, extra: Value) -> Value {
    if let (Value::Object(b), Value::Object(e)) = (&mut base, extra) {
        b.extend(e);
    }
    base
}

/// Runs a parsed command, returning its records and exit status.
pub fn execute(cmd: &Command) -> Result<(Vec<Value>, i32), Failure> {
    let one = |v: Value| Ok((vec![v], EXIT_OK));
    match *cmd {
        Command::Local { a, b, c, n, p } => {
            let q = QuadricInstance::new(a, b, c, n)?;
            let head = json!({"a": a, "b": b, "c": c, "n": n});
            match p {
                Some(p) => one(merge(head, to_value(&solvable_at_prime(&q, p)?))),
                None => {
                    let (ok, failing) = solvable_everywhere(&q)?;
                    one(merge(head, json!({"solvable_everywhere": ok, "failing_places": failing})))
                }
            }
        }
        Command::Obstruct { q, a, c, d, e } => {
            let f = FamilyInstance::new(q, a, c, d, e)?;
            let (local, _) = solvable_everywhere(&f.quadric()?)?;
            let head = json!({"q": q, "a": a, "c": c, "d": d, "e": e, "locally_solvable": local});
            if !local {
                return one(merge(head, json!({"obstructed": Value::Null, "invariant_profile": Value::Null})));
            }
            let decision = obstruction_decision(&f)?;
            let profile = family_invariant_profile(&f)?;
            let obstructed = decision == Decision::Obstructed;
            if obstructed == profile.nonzero().is_empty() {
                return Err(Failure {
                    code: EXIT_INCONSISTENT,
                    message: format!("decision {decision:?} disagrees with the invariant profile"),
                });
            }
            one(merge(head, json!({"obstructed": obstructed, "invariant_profile": profile.nonzero()})))
        }
        Command::Brauer { a, b, c, n, ref point, bound } => {
            let q = QuadricInstance::new(a, b, c, n)?;
            let m = match point {
                Some(v) => {
                    if v.len() != 4 {
                        return Err(Error::OutOfRange(format!("--point needs 4 coordinates, got {}", v.len())).into());
                    }
                    let m = ProjectivePoint::from_ints([v[0], v[1], v[2], v[3]])?;
                    if !m.lies_on(&q) {
                        return Err(Error::PointNotOnQuadric.into());
                    }
                    m
                }
                None => find_rational_point(&q, bound).ok_or_else(|| {
                    Failure::from(Error::Precondition(format!("no rational point of height <= {bound}")))
                })?,
            };
            let dec = brauer_decomposition(&q, &m)?;
            if !dec.matches(&q) {
                return Err(Failure {
                    code: EXIT_INCONSISTENT,
                    message: "decomposition does not expand to the quadric".into(),
                });
            }
            let coords: Vec<String> = m.coords.iter().map(ToString::to_string).collect();
            one(json!({
                "a": a, "b": b, "c": c, "n": n,
                "point": coords,
                "l1": dec.l1, "l2": dec.l2, "l3": dec.l3, "l4": dec.l4,
                "c0": dec.c0.to_string(),
                "d": dec.d,
            }))
        }
        Command::Count { mode, big_b, q, n, threads } => {
            let report = match mode {
                CountMode::NbrDirect => count_nbr_direct(big_b, q, threads)?,
                CountMode::NbrRearranged => count_nbr_rearranged(big_b, q, threads)?,
                CountMode::NbrCharacters => count_nbr_characters(big_b, q, threads)?,
                CountMode::Nloc => count_nloc(big_b, n, threads)?,
            };
            one(to_value(&report))
        }
        Command::Constants { name, q, big_p, a, b, c, f } => {
            let report = match name {
                ConstantName::C => euler_c(a, b, c, big_p)?,
                ConstantName::Cf => euler_c_f(f, q, big_p)?,
                ConstantName::D => constant_d(q, big_p)?,
                ConstantName::E => constant_e(q, big_p)?,
            };
            one(to_value(&report))
        }
        Command::Verify { suite, seed } => {
            let suite = match suite {
                SuiteArg::Identities => Suite::Identities,
                SuiteArg::Oracles => Suite::Oracles,
                SuiteArg::All => Suite::All,
            };
            let checks = run_suite(suite, seed)?;
            let code = if checks.iter().all(|c| c.passed) { EXIT_OK } else { EXIT_INCONSISTENT };
            Ok((checks.iter().map(to_value).collect(), code))
        }
    }
}

fn tsv_cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// Writes records in the requested format. TSV repeats the header whenever
/// the key set changes.
pub fn write_records(records: &[Value], format: Format, w: &mut dyn Write) -> io::Result<()> {
    let mut header: Option<Vec<String>> = None;
    for r in records {
        match format {
            Format::JsonLines => writeln!(w, "{r}")?,
            Format::Tsv => {
                let empty = Map::new();
                let obj = r.as_object().unwrap_or(&empty);
                let keys: Vec<String> = obj.keys().cloned().collect();
                if header.as_ref() != Some(&keys) {
                    writeln!(w, "{}", keys.join("\t"))?;
                    header = Some(keys);
                }
                let row: Vec<String> = obj.values().map(tsv_cell).collect();
                writeln!(w, "{}", row.join("\t"))?;
            }
        }
    }
    w.flush()
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    let (records, code) = match execute(&cli.command) {
        Ok(r) => r,
        Err(f) => {
            eprintln!("error: {}", f.message);
            return f.code;
        }
    };
    let written = match &cli.out {
        Some(path) => File::create(path).and_then(|mut f| write_records(&records, cli.format, &mut f)),
        None => write_records(&records, cli.format, &mut io::stdout().lock()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return EXIT_INVALID;
    }
    code
}

#[cfg(test)]
mod tests {
    use super::*;

    fn records(args: &[&str]) -> Result<Vec<Value>, i32> {
        let cli = Cli::try_parse_from(std::iter::once("quadric-bm").chain(args.iter().copied()))
            .map_err(|_| EXIT_INVALID)?;
        execute(&cli.command).map(|(r, _)| r).map_err(|f| f.code)
    }

    #[test]
    fn obstruct_example() {
        let r = records(&["obstruct", "--q", "17", "--a", "2", "--c", "1", "--d", "1", "--e", "1"]).unwrap();
        assert_eq!(r[0]["locally_solvable"], json!(true));
        assert_eq!(r[0]["obstructed"], json!(true));
        assert_eq!(r[0]["invariant_profile"], json!({"17": "1/2"}));
    }

    #[test]
    fn obstruct_unobstructed_member() {
        let r = records(&["obstruct", "--a", "1", "--c", "1", "--d", "1", "--e", "1"]).unwrap();
        assert_eq!(r[0]["obstructed"], json!(false));
        assert_eq!(r[0]["invariant_profile"], json!({}));
    }

    #[test]
    fn count_below_threshold_is_zero() {
        let r = records(&["count", "--mode", "nbr-direct", "--B", "289", "--q", "17"]).unwrap();
        assert_eq!(r[0]["count"], json!(0));
        assert_eq!(r[0]["route"], json!("direct"));
    }

    #[test]
    fn unknown_flag_rejected() {
        assert_eq!(records(&["count", "--mode", "nloc", "--B", "5", "--bogus", "1"]), Err(EXIT_INVALID));
    }

    #[test]
    fn invalid_family_is_exit_two() {
        assert_eq!(records(&["obstruct", "--q", "13", "--a", "2", "--c", "1", "--d", "1", "--e", "1"]), Err(EXIT_INVALID));
    }

    #[test]
    fn negative_coefficients_parse() {
        let r = records(&["local", "--a", "1", "--b", "1", "--c", "-1", "--n", "1"]).unwrap();
        assert_eq!(r[0]["solvable_everywhere"], json!(true));
        let r = records(&["brauer", "--a", "1", "--b", "1", "--c", "1", "--n", "3", "--point", "1,1,1,1"]).unwrap();
        assert_eq!(r[0]["d"], json!(-3));
        assert_eq!(records(&["brauer", "--a", "1", "--b", "1", "--c", "1", "--n", "3", "--point", "1,1,1"]), Err(EXIT_INVALID));
        assert_eq!(records(&["brauer", "--a", "1", "--b", "1", "--c", "1", "--n", "3", "--point", "1,1,1,2"]), Err(EXIT_INVALID));
    }

    #[test]
    fn error_exit_codes() {
        assert_eq!(Failure::from(Error::NumericalInconsistency(0.5)).code, EXIT_INCONSISTENT);
        assert_eq!(Failure::from(Error::ChartFailure).code, EXIT_INCONSISTENT);
        assert_eq!(Failure::from(Error::NotPrime(15)).code, EXIT_INVALID);
        assert_eq!(Failure::from(Error::PointNotOnQuadric).code, EXIT_INVALID);
    }

    #[test]
    fn tsv_header_once() {
        let rows = vec![json!({"x": 1, "y": "a"}), json!({"x": 2, "y": "b"})];
        let mut buf = Vec::new();
        write_records(&rows, Format::Tsv, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "x\ty\n1\ta\n2\tb\n");
    }
}
