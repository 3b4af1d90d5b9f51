//! Command-line front end. The binary is a thin wrapper around [`run`].
//!
//! Exit codes: 0 success or PASS, 1 verification FAIL, 2 usage or parse
//! error, 3 resource or budget error.

use std::collections::BTreeMap;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;

use crate::chebyshev::{lemma31_check, verify_theorem};
use crate::decomposition::{decompose_with_limit, minimality_oracle, Ball};
use crate::dynamics::{classify, cycles_at_level_with_limit, PolyMap, DEFAULT_ENUMERATION_LIMIT};
use crate::error::Error;
use crate::padic::{v2, Residue, MAX_LEVEL};
use crate::parse::{parse_poly, ParseError};
use crate::poly::{chebyshev_recurrence, IntPolynomial};
use crate::report::{
    ClassificationReport, ClassifiedCycle, CoefficientReport, DecompositionReport, ErrorReport, MinimalityReport,
    Payload, ReportDocument,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "z2dyn", version, about = "Polynomial dynamics on the 2-adic integers")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    /// Hard cap on any level argument.
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_LIMIT, global = true)]
    pub level_cap: u32,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Chebyshev polynomial utilities.
    Cheb {
        #[command(subcommand)]
        command: ChebCommand,
    },
    /// Minimal decomposition of a polynomial up to a level.
    Decompose(DecomposeArgs),
    /// Compare the engine against the explicit Chebyshev decomposition.
    Verify {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        max_level: u32,
    },
    /// Classify every cycle of the induced map at one level.
    Classify {
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        #[arg(long)]
        level: u32,
    },
    /// Brute-force oracles.
    Oracle {
        #[command(subcommand)]
        command: OracleCommand,
    },
}

#[derive(Debug, Subcommand)]
pub enum ChebCommand {
    /// Exact coefficients of T_m and their 2-adic valuations.
    Coeffs {
        #[arg(long)]
        m: u64,
        /// Also check the odd-m coefficient valuation lemma.
        #[arg(long)]
        check_lemma: bool,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false, id = "source")]
pub struct PolySource {
    /// Use the Chebyshev polynomial T_m.
    #[arg(long)]
    pub m: Option<u64>,
    /// Polynomial expression in x, e.g. "4*x^3 - 3*x".
    #[arg(long, allow_hyphen_values = true)]
    pub poly: Option<String>,
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    #[command(flatten)]
    pub source: PolySource,
    #[arg(long)]
    pub max_level: u32,
}

#[derive(Debug, Subcommand)]
pub enum OracleCommand {
    /// Check minimality of f on a union of balls at every level up to --check-level.
    Minimal {
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        /// Comma-separated balls "c+2^k", e.g. "2+2^3,6+2^3".
        #[arg(long, allow_hyphen_values = true)]
        balls: String,
        #[arg(long)]
        check_level: u32,
    },
}

/// Result of one CLI invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
struct Failure {
    code: i32,
    kind: &'static str,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let (code, kind) = match e {
            Error::BudgetExceeded { .. } | Error::LevelOutOfRange { .. } | Error::BudgetTooSmall { .. } => {
                (EXIT_RESOURCE, "budget")
            }
            Error::Inconsistent(_) => (EXIT_FAIL, "internal"),
            _ => (EXIT_USAGE, "invalid_input"),
        };
        Failure { code, kind, message: e.to_string() }
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Failure {
        Failure { code: EXIT_USAGE, kind: "parse_error", message: e.to_string() }
    }
}

fn usage(message: String) -> Failure {
    Failure { code: EXIT_USAGE, kind: "usage", message }
}

fn check_cap(level: u32, cap: u32) -> Result<(), Failure> {
    if level > cap {
        return Err(Error::BudgetExceeded { level, limit: cap }.into());
    }
    Ok(())
}

/// Parses a ball list such as `"2+2^3, -1+2^5"`.
pub fn parse_balls(spec: &str) -> Result<Vec<Ball>, String> {
    spec.split(',')
        .map(|term| {
            let term: String = term.chars().filter(|c| !c.is_whitespace()).collect();
            let (center, level) = term
                .rsplit_once("+2^")
                .ok_or_else(|| format!("ball {term:?} is not of the form c+2^k"))?;
            let level: u32 = level.parse().map_err(|_| format!("bad level in {term:?}"))?;
            let center: BigInt = center.parse().map_err(|_| format!("bad center in {term:?}"))?;
            if level == 0 {
                return Ok(Ball::whole());
            }
            if level > MAX_LEVEL {
                return Err(format!("level {level} exceeds {MAX_LEVEL}"));
            }
            let r = Residue::reduce(&center, level).map_err(|e| e.to_string())?;
            Ok(Ball::from_residue(r))
        })
        .collect()
}

fn json_requested(args: &[String]) -> bool {
    args.windows(2).any(|w| w[0] == "--format" && w[1] == "json") || args.iter().any(|a| a == "--format=json")
}

/// Runs the CLI on `args` (including the program name).
pub fn run<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let args: Vec<String> = args.into_iter().map(Into::into).collect();
    let json = json_requested(&args);
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Outcome { code: EXIT_OK, stdout: e.to_string(), stderr: String::new() };
            }
            return render_failure(usage(e.to_string()), json, "usage", BTreeMap::new());
        }
    };
    let (name, echo) = echo(&cli.command);
    match execute(&cli) {
        Ok((code, payload)) => {
            let doc = ReportDocument::new(&name, echo, payload);
            let stdout = match cli.format {
                Format::Json => doc.to_json() + "\n",
                Format::Text => doc.to_text(),
            };
            Outcome { code, stdout, stderr: String::new() }
        }
        Err(f) => render_failure(f, cli.format == Format::Json, &name, echo),
    }
}

fn render_failure(f: Failure, json: bool, name: &str, echo: BTreeMap<String, String>) -> Outcome {
    if json {
        let doc = ReportDocument::new(
            name,
            echo,
            Payload::Error(ErrorReport { code: f.kind.to_string(), message: f.message }),
        );
        Outcome { code: f.code, stdout: doc.to_json() + "\n", stderr: String::new() }
    } else {
        Outcome { code: f.code, stdout: String::new(), stderr: format!("error [{}]: {}\n", f.kind, f.message) }
    }
}

fn echo(command: &Command) -> (String, BTreeMap<String, String>) {
    let mut args = BTreeMap::new();
    let name = match command {
        Command::Cheb { command: ChebCommand::Coeffs { m, check_lemma } } => {
            args.insert("m".into(), m.to_string());
            args.insert("check_lemma".into(), check_lemma.to_string());
            "cheb coeffs"
        }
        Command::Decompose(d) => {
            if let Some(m) = d.source.m {
                args.insert("m".into(), m.to_string());
            }
            if let Some(p) = &d.source.poly {
                args.insert("poly".into(), p.clone());
            }
            args.insert("max_level".into(), d.max_level.to_string());
            "decompose"
        }
        Command::Verify { m, max_level } => {
            args.insert("m".into(), m.to_string());
            args.insert("max_level".into(), max_level.to_string());
            "verify"
        }
        Command::Classify { poly, level } => {
            args.insert("poly".into(), poly.clone());
            args.insert("level".into(), level.to_string());
            "classify"
        }
        Command::Oracle { command: OracleCommand::Minimal { poly, balls, check_level } } => {
            args.insert("poly".into(), poly.clone());
            args.insert("balls".into(), balls.clone());
            args.insert("check_level".into(), check_level.to_string());
            "oracle minimal"
        }
    };
    (name.to_string(), args)
}

fn execute(cli: &Cli) -> Result<(i32, Payload), Failure> {
    let cap = cli.level_cap.min(DEFAULT_ENUMERATION_LIMIT);
    match &cli.command {
        Command::Cheb { command: ChebCommand::Coeffs { m, check_lemma } } => {
            let t = chebyshev_recurrence(*m);
            let coefficients = (0..=*m as usize).map(|i| t.coeff(i).to_string()).collect();
            let valuations = if m % 2 == 1 {
                (0..=*m as usize).step_by(2).map(|i| v2(&t.coeff(i + 1))).collect()
            } else {
                t.coeffs().iter().map(v2).collect()
            };
            let lemma = if *check_lemma { Some(lemma31_check(*m)?) } else { None };
            let code = if lemma.as_ref().is_some_and(|l| !l.pass) { EXIT_FAIL } else { EXIT_OK };
            Ok((code, Payload::Coefficients(CoefficientReport { m: *m, coefficients, valuations, lemma })))
        }
        Command::Decompose(args) => {
            check_cap(args.max_level, cap)?;
            let f = match (&args.source.m, &args.source.poly) {
                (Some(m), _) => chebyshev_recurrence(*m),
                (None, Some(p)) => parse_poly(p)?,
                (None, None) => return Err(usage("one of --m or --poly is required".into())),
            };
            let decomposition = decompose_with_limit(&f, args.max_level, cap)?;
            Ok((
                EXIT_OK,
                Payload::Decomposition(DecompositionReport { polynomial: f.to_string(), decomposition }),
            ))
        }
        Command::Verify { m, max_level } => {
            check_cap(*max_level, cap)?;
            let verdict = verify_theorem(*m, *max_level)?;
            let code = if verdict.pass { EXIT_OK } else { EXIT_FAIL };
            Ok((code, Payload::Verdict(verdict)))
        }
        Command::Classify { poly, level } => {
            check_cap(*level, cap)?;
            let f: IntPolynomial = parse_poly(poly)?;
            let map = PolyMap::new(f.clone());
            let cycles = cycles_at_level_with_limit(&map, *level, cap)?
                .iter()
                .map(|c| {
                    Ok(ClassifiedCycle {
                        points: c.values().iter().map(u64::to_string).collect(),
                        length: c.len(),
                        class: classify(&map, c)?,
                    })
                })
                .collect::<Result<Vec<_>, Error>>()?;
            Ok((
                EXIT_OK,
                Payload::Classification(ClassificationReport { polynomial: f.to_string(), level: *level, cycles }),
            ))
        }
        Command::Oracle { command: OracleCommand::Minimal { poly, balls, check_level } } => {
            check_cap(*check_level, cap)?;
            let f = parse_poly(poly)?;
            let balls = parse_balls(balls).map_err(usage)?;
            let minimal = minimality_oracle(&f, &balls, *check_level)?;
            Ok((
                EXIT_OK,
                Payload::Minimality(MinimalityReport {
                    polynomial: f.to_string(),
                    balls,
                    check_level: *check_level,
                    minimal,
                }),
            ))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ball_spec_parsing() {
        let balls = parse_balls("2+2^3, 6+2^3,-1+2^5").unwrap();
        assert_eq!(
            balls,
            vec![Ball::around(2, 3).unwrap(), Ball::around(6, 3).unwrap(), Ball::around(31, 5).unwrap()]
        );
        assert_eq!(parse_balls("0+2^0").unwrap(), vec![Ball::whole()]);
        assert!(parse_balls("2*2^3").is_err());
        assert!(parse_balls("a+2^3").is_err());
        assert!(parse_balls("1+2^99").is_err());
    }

    #[test]
    fn json_flag_detection() {
        let args: Vec<String> = ["z2dyn", "verify", "--format", "json"].iter().map(|s| s.to_string()).collect();
        assert!(json_requested(&args));
        assert!(json_requested(&["--format=json".to_string()]));
        assert!(!json_requested(&["--format".to_string(), "text".to_string()]));
    }
}
