//! Text front end for the solver: whitespace-separated exact rationals in,
//! exact rationals out.
//!
//! A matrix file holds one row per nonempty line; short rows are padded with
//! zeros up to the longest row. A vector file is any whitespace-separated
//! sequence of rationals. Tokens are `p`, `-p`, `p/q` or `-p/q` in decimal
//! with `q > 0`.

use std::fmt::Write as _;
use std::str::FromStr;

use lpdual::constraints::SystemPart;
use lpdual::games::{game_to_lp, security_level, solve_game_with, PayoffMatrix};
use lpdual::linalg::{dot, Matrix, Rational, Vector};
use lpdual::optimize::{is_optimal_check, maximize_with, primal_feasible, OptimizeResult};
use lpdual::oracle::{fm_satisfiable, vertex_optimum, VertexOutcome};
use lpdual::simplex::SolveOptions;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

pub const EXIT_OPTIMAL: i32 = 0;
pub const EXIT_UNSAT: i32 = 1;
pub const EXIT_DIM_MISMATCH: i32 = 2;
pub const EXIT_INPUT_ERROR: i32 = 3;
/// Pivot limit hit, internal error, or a failed `--verify`.
pub const EXIT_SOLVER_ERROR: i32 = 4;

/// Environment variable capping simplex pivots.
pub const MAX_PIVOTS_ENV: &str = "LP_MAX_PIVOTS";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }
}

fn parse_digits(s: &str) -> Option<BigInt> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    BigInt::from_str(s).ok()
}

fn parse_token(token: &str, line: usize, column: usize) -> Result<Rational, ParseError> {
    let bad = || ParseError::new(line, column, format!("malformed rational `{token}`"));
    let (negative, body) = match token.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, token),
    };
    let (p, q) = match body.split_once('/') {
        Some((p, q)) => (
            parse_digits(p).ok_or_else(bad)?,
            parse_digits(q).ok_or_else(bad)?,
        ),
        None => (parse_digits(body).ok_or_else(bad)?, BigInt::one()),
    };
    if q.is_zero() {
        return Err(ParseError::new(
            line,
            column,
            format!("zero denominator in `{token}`"),
        ));
    }
    let r = Rational::new(p, q);
    Ok(if negative { -r } else { r })
}

/// Parses a single rational token.
pub fn parse_rational(token: &str) -> Result<Rational, ParseError> {
    parse_token(token, 1, 1)
}

/// Whitespace-separated tokens of one line with 1-based columns.
fn tokens(line: &str) -> impl Iterator<Item = (usize, &str)> {
    line.split_whitespace().map(move |tok| {
        let offset = tok.as_ptr() as usize - line.as_ptr() as usize;
        (line[..offset].chars().count() + 1, tok)
    })
}

fn parse_line(line: &str, lineno: usize) -> Result<Vec<Rational>, ParseError> {
    tokens(line)
        .map(|(col, tok)| parse_token(tok, lineno, col))
        .collect()
}

pub fn parse_matrix(text: &str) -> Result<Matrix, ParseError> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let row = parse_line(line, i + 1)?;
        if !row.is_empty() {
            rows.push(row);
        }
    }
    if rows.is_empty() {
        return Err(ParseError::new(1, 1, "empty matrix"));
    }
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    for row in &mut rows {
        row.resize(cols, Rational::zero());
    }
    Ok(Matrix::from_rows(cols, rows).expect("rows padded to a common width"))
}

pub fn parse_vector(text: &str) -> Result<Vector, ParseError> {
    let mut entries = Vec::new();
    for (i, line) in text.lines().enumerate() {
        entries.extend(parse_line(line, i + 1)?);
    }
    Ok(Vector::new(entries))
}

/// Named input text; the name prefixes parse errors.
#[derive(Debug, Clone, Copy)]
pub struct Source<'a> {
    pub name: &'a str,
    pub text: &'a str,
}

impl<'a> Source<'a> {
    pub fn new(name: &'a str, text: &'a str) -> Self {
        Source { name, text }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct LpFlags {
    pub verify: bool,
    pub diagnose: bool,
    pub explain: bool,
}

/// What the binary prints and returns.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn input_error(src: &str, err: impl std::fmt::Display) -> Self {
        Outcome {
            code: EXIT_INPUT_ERROR,
            stdout: String::new(),
            stderr: format!("error: {src}: {err}\n"),
        }
    }

    fn solver_error(stdout: String, err: impl std::fmt::Display) -> Self {
        Outcome {
            code: EXIT_SOLVER_ERROR,
            stdout,
            stderr: format!("error: {err}\n"),
        }
    }
}

fn with_source<T>(
    src: Source<'_>,
    f: impl FnOnce(&str) -> Result<T, ParseError>,
) -> Result<T, Outcome> {
    f(src.text).map_err(|e| Outcome::input_error(src.name, e))
}

/// Reads the pivot cap from [`MAX_PIVOTS_ENV`]; unset means unlimited.
pub fn solve_options_from_env() -> Result<SolveOptions, String> {
    match std::env::var(MAX_PIVOTS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<u64>()
            .map(|n| SolveOptions {
                max_pivots: Some(n),
            })
            .map_err(|_| format!("{MAX_PIVOTS_ENV} must be a nonnegative integer, got `{v}`")),
        Err(std::env::VarError::NotPresent) => Ok(SolveOptions::default()),
        Err(e) => Err(format!("{MAX_PIVOTS_ENV}: {e}")),
    }
}

enum Verdict {
    Verified,
    Skipped(String),
    Failed(String),
}

fn verify_lp(a: &Matrix, b: &Vector, c: &Vector, result: &OptimizeResult) -> Verdict {
    let oracle = match vertex_optimum(a, b, c) {
        Ok(o) => o,
        Err(e) => return Verdict::Skipped(e.to_string()),
    };
    match (result, oracle) {
        (OptimizeResult::Sat { x, y }, VertexOutcome::Optimal { value, .. }) => {
            if !is_optimal_check(a, b, c, x, y).unwrap_or(false) {
                return Verdict::Failed("certificate check rejected (x, y)".into());
            }
            match dot(c, x) {
                Ok(v) if v == value => Verdict::Verified,
                Ok(v) => Verdict::Failed(format!("value {v}, oracle optimum {value}")),
                Err(e) => Verdict::Failed(e.to_string()),
            }
        }
        (OptimizeResult::Sat { .. }, other) => {
            Verdict::Failed(format!("solver found an optimum, oracle says {other:?}"))
        }
        (OptimizeResult::Unsat(core), VertexOutcome::Infeasible | VertexOutcome::Unbounded) => {
            let cs = match lpdual::constraints::build_system(a, b, c) {
                Ok(cs) => cs,
                Err(e) => return Verdict::Failed(e.to_string()),
            };
            let sub: Vec<_> = core.iter().map(|&i| cs[i].normalize()).collect();
            match fm_satisfiable(&sub) {
                Ok(v) if !v.satisfiable => Verdict::Verified,
                Ok(_) => Verdict::Failed("unsat core is satisfiable".into()),
                Err(e) => Verdict::Skipped(e.to_string()),
            }
        }
        (OptimizeResult::Unsat(_), VertexOutcome::Optimal { value, .. }) => {
            Verdict::Failed(format!("solver reported UNSAT, oracle optimum {value}"))
        }
        (OptimizeResult::DimMismatch, _) => Verdict::Skipped("dimension mismatch".into()),
    }
}

fn push_verdict(out: &mut Outcome, verdict: Verdict) {
    match verdict {
        Verdict::Verified => out.stdout.push_str("verified\n"),
        Verdict::Skipped(why) => {
            let _ = writeln!(out.stdout, "verify: skipped ({why})");
        }
        Verdict::Failed(why) => {
            let _ = writeln!(out.stdout, "verify: FAILED ({why})");
            out.code = EXIT_SOLVER_ERROR;
        }
    }
}

/// `lp solve`: maximize `c·x` subject to `A·x ≤ b`.
pub fn run_lp(
    matrix: Source<'_>,
    rhs: Source<'_>,
    objective: Source<'_>,
    flags: LpFlags,
    opts: &SolveOptions,
) -> Outcome {
    let parsed = with_source(matrix, parse_matrix).and_then(|a| {
        let b = with_source(rhs, parse_vector)?;
        let c = with_source(objective, parse_vector)?;
        Ok((a, b, c))
    });
    let (a, b, c) = match parsed {
        Ok(t) => t,
        Err(o) => return o,
    };

    let result = match maximize_with(&a, &b, &c, opts) {
        Ok(r) => r.result,
        Err(e) => return Outcome::solver_error(String::new(), e),
    };

    let mut out = Outcome::default();
    match &result {
        OptimizeResult::DimMismatch => {
            out.code = EXIT_DIM_MISMATCH;
            out.stdout.push_str("DIM_MISMATCH\n");
            return out;
        }
        OptimizeResult::Sat { x, y } => {
            let value = dot(&c, x).expect("dimensions match after maximize");
            out.code = EXIT_OPTIMAL;
            let _ = write!(out.stdout, "OPTIMAL\nx = {x}\ny = {y}\nvalue = {value}\n");
        }
        OptimizeResult::Unsat(core) => {
            out.code = EXIT_UNSAT;
            let joined: Vec<String> = core.iter().map(usize::to_string).collect();
            let _ = writeln!(out.stdout, "UNSAT\ncore = {}", joined.join(" "));
            if flags.explain {
                let cs = lpdual::constraints::build_system(&a, &b, &c).expect("dimensions checked");
                for &i in core {
                    let part =
                        SystemPart::locate(i, a.rows(), a.cols()).expect("core index in range");
                    let _ = writeln!(out.stdout, "  [{i}] {}    ({part})", cs[i]);
                }
            }
            if flags.diagnose {
                match primal_feasible(&a, &b, opts) {
                    Ok(true) => out
                        .stdout
                        .push_str("primal: feasible (problem unbounded or dual infeasible)\n"),
                    Ok(false) => out.stdout.push_str("primal: infeasible\n"),
                    Err(e) => return Outcome::solver_error(out.stdout, e),
                }
            }
        }
    }
    if flags.verify {
        push_verdict(&mut out, verify_lp(&a, &b, &c, &result));
    }
    out
}

fn verify_game(game: &PayoffMatrix, value: &Rational, strategy: &Vector) -> Verdict {
    if !strategy.is_nonnegative() || strategy.iter().sum::<Rational>() != Rational::one() {
        return Verdict::Failed("strategy is not a probability distribution".into());
    }
    match security_level(game, strategy) {
        Ok(level) if level >= *value => {}
        Ok(level) => return Verdict::Failed(format!("strategy only guarantees {level}")),
        Err(e) => return Verdict::Failed(e.to_string()),
    }
    let lp = game_to_lp(game);
    match vertex_optimum(&lp.a, &lp.b, &lp.c) {
        Ok(VertexOutcome::Optimal { value: v, .. }) if v == *value => Verdict::Verified,
        Ok(other) => Verdict::Failed(format!("oracle says {other:?}")),
        Err(e) => Verdict::Skipped(e.to_string()),
    }
}

/// `lp game`: optimal mixed strategy of the row player.
pub fn run_game(payoff: Source<'_>, verify: bool, opts: &SolveOptions) -> Outcome {
    let m = match with_source(payoff, parse_matrix) {
        Ok(m) => m,
        Err(o) => return o,
    };
    let game = match PayoffMatrix::new(m) {
        Ok(g) => g,
        Err(e) => return Outcome::input_error(payoff.name, e),
    };
    let sol = match solve_game_with(&game, opts) {
        Ok(s) => s,
        Err(e) => return Outcome::solver_error(String::new(), e),
    };
    let mut out = Outcome {
        code: EXIT_OPTIMAL,
        stdout: format!("VALUE = {}\nSTRATEGY = {}\n", sol.value, sol.strategy),
        stderr: String::new(),
    };
    if verify {
        push_verdict(&mut out, verify_game(&game, &sol.value, &sol.strategy));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn rational_tokens() {
        assert_eq!(parse_rational("1/2").unwrap(), r(1, 2));
        assert_eq!(parse_rational("-1").unwrap(), r(-1, 1));
        assert_eq!(parse_rational("-6/4").unwrap(), r(-3, 2));
        assert_eq!(parse_rational("007").unwrap(), r(7, 1));
        let err = parse_rational("1/0").unwrap_err();
        assert!(err.message.contains("zero denominator"));
        for bad in [
            "", "-", "+1", "1/", "/2", "1/-2", "0.5", "1e3", "--1", "a", "1/2/3", "٣",
        ] {
            assert!(parse_rational(bad).is_err(), "accepted {bad:?}");
        }
    }

    #[test]
    fn matrix_parsing() {
        let m = parse_matrix("2 1\n-1 2\n1/2 -1/2\n-1 -1").unwrap();
        assert_eq!((m.rows(), m.cols()), (4, 2));
        assert_eq!(m[(2, 1)], r(-1, 2));
        assert_eq!(
            parse_matrix("1\n1 2").unwrap(),
            Matrix::from_int_rows(&[&[1, 0], &[1, 2]])
        );
        assert_eq!(parse_matrix("\n  1 2 \n\n3 4\n").unwrap().rows(), 2);
        assert!(parse_matrix("").is_err());
        assert!(parse_matrix(" \n\t\n").is_err());
    }

    #[test]
    fn error_positions() {
        let err = parse_matrix("1 2\n3  x4").unwrap_err();
        assert_eq!((err.line, err.column), (2, 4));
        let err = parse_vector("1\n\n 2 1/0").unwrap_err();
        assert_eq!((err.line, err.column), (3, 4));
        assert_eq!(
            err.to_string(),
            "line 3, column 4: zero denominator in `1/0`"
        );
    }

    #[test]
    fn vector_parsing() {
        assert_eq!(parse_vector("5 2\n1/2 -1").unwrap().dim(), 4);
        assert_eq!(parse_vector("").unwrap().dim(), 0);
    }

    fn lp(a: &str, b: &str, c: &str, flags: LpFlags) -> Outcome {
        run_lp(
            Source::new("A", a),
            Source::new("b", b),
            Source::new("c", c),
            flags,
            &SolveOptions::default(),
        )
    }

    #[test]
    fn lp_outcomes() {
        let out = lp(
            "2 1\n-1 2\n1/2 -1/2\n-1 -1\n",
            "5 2 1/2 -1\n",
            "7 1\n",
            LpFlags::default(),
        );
        assert_eq!(out.code, EXIT_OPTIMAL);
        assert!(out.stdout.starts_with("OPTIMAL\nx = 2 1\ny = "));
        assert!(out.stdout.ends_with("value = 15\n"));

        let out = lp("0", "-1", "0", LpFlags::default());
        assert_eq!(out.code, EXIT_UNSAT);
        assert!(out.stdout.starts_with("UNSAT\ncore = "));

        let out = lp("1 0\n0 1", "1 1 1", "1 1", LpFlags::default());
        assert_eq!(
            (out.code, out.stdout.as_str()),
            (EXIT_DIM_MISMATCH, "DIM_MISMATCH\n")
        );

        let out = lp("1 x", "1", "1 1", LpFlags::default());
        assert_eq!(out.code, EXIT_INPUT_ERROR);
        assert_eq!(
            out.stderr,
            "error: A: line 1, column 3: malformed rational `x`\n"
        );
    }

    #[test]
    fn diagnose_and_explain() {
        let all = LpFlags {
            verify: true,
            diagnose: true,
            explain: true,
        };
        let out = lp("-1", "0", "1", all);
        assert_eq!(out.code, EXIT_UNSAT);
        assert!(out
            .stdout
            .contains("primal: feasible (problem unbounded or dual infeasible)\n"));
        assert!(out.stdout.contains("    ("));
        assert!(out.stdout.ends_with("verified\n"));

        let out = lp("1\n-1", "0 -1", "1", all);
        assert!(out.stdout.contains("primal: infeasible\n"));
        assert!(out.stdout.ends_with("verified\n"));
    }

    #[test]
    fn pivot_cap_reports_solver_error() {
        let out = run_lp(
            Source::new("A", "2 1\n-1 2\n1/2 -1/2\n-1 -1"),
            Source::new("b", "5 2 1/2 -1"),
            Source::new("c", "7 1"),
            LpFlags::default(),
            &SolveOptions {
                max_pivots: Some(0),
            },
        );
        assert_eq!(out.code, EXIT_SOLVER_ERROR);
        assert_eq!(out.stderr, "error: pivot limit of 0 exceeded\n");
    }

    #[test]
    fn game_outcomes() {
        let opts = SolveOptions::default();
        let out = run_game(Source::new("M", "0 -1 1\n1 0 -1\n-1 1 0\n"), true, &opts);
        assert_eq!(out.stdout, "VALUE = 0\nSTRATEGY = 1/3 1/3 1/3\nverified\n");
        let out = run_game(Source::new("M", "5"), false, &opts);
        assert_eq!(out.stdout, "VALUE = 5\nSTRATEGY = 1\n");
        let out = run_game(Source::new("M", ""), false, &opts);
        assert_eq!(out.code, EXIT_INPUT_ERROR);
    }
}
