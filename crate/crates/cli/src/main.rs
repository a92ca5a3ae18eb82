use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use lpdual_cli::{
    run_game, run_lp, solve_options_from_env, LpFlags, Outcome, Source, EXIT_INPUT_ERROR,
};

/// Exact-rational LP solver with duality certificates.
#[derive(Parser)]
#[command(name = "lp", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Maximize c·x subject to A·x ≤ b.
    Solve {
        /// Constraint matrix A, one row per line.
        #[arg(long)]
        matrix: PathBuf,
        /// Right-hand side b.
        #[arg(long)]
        rhs: PathBuf,
        /// Objective c.
        #[arg(long)]
        objective: PathBuf,
        /// Cross-check against the brute-force oracle (small instances only).
        #[arg(long)]
        verify: bool,
        /// On UNSAT, tell an infeasible primal from an unbounded one.
        #[arg(long)]
        diagnose: bool,
        /// On UNSAT, print the constraints in the core.
        #[arg(long)]
        explain: bool,
    },
    /// Optimal mixed strategy for the row player of a zero-sum game.
    Game {
        /// Payoff matrix, payoffs to the row player.
        #[arg(long)]
        payoff: PathBuf,
        #[arg(long)]
        verify: bool,
    },
}

fn read(path: &Path) -> Result<String, Outcome> {
    std::fs::read_to_string(path).map_err(|e| Outcome {
        code: EXIT_INPUT_ERROR,
        stdout: String::new(),
        stderr: format!("error: {}: {e}\n", path.display()),
    })
}

fn run(cli: Cli) -> Outcome {
    let opts = match solve_options_from_env() {
        Ok(o) => o,
        Err(msg) => {
            return Outcome {
                code: EXIT_INPUT_ERROR,
                stdout: String::new(),
                stderr: format!("error: {msg}\n"),
            }
        }
    };
    match cli.command {
        Command::Solve {
            matrix,
            rhs,
            objective,
            verify,
            diagnose,
            explain,
        } => {
            let texts = read(&matrix).and_then(|a| Ok((a, read(&rhs)?, read(&objective)?)));
            let (a, b, c) = match texts {
                Ok(t) => t,
                Err(o) => return o,
            };
            let (an, bn, cn) = (
                matrix.display().to_string(),
                rhs.display().to_string(),
                objective.display().to_string(),
            );
            run_lp(
                Source::new(&an, &a),
                Source::new(&bn, &b),
                Source::new(&cn, &c),
                LpFlags {
                    verify,
                    diagnose,
                    explain,
                },
                &opts,
            )
        }
        Command::Game { payoff, verify } => {
            let text = match read(&payoff) {
                Ok(t) => t,
                Err(o) => return o,
            };
            let name = payoff.display().to_string();
            run_game(Source::new(&name, &text), verify, &opts)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        // bad arguments are input errors; help and version still exit 0
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(EXIT_INPUT_ERROR as u8);
        }
        Err(e) => e.exit(),
    };
    let out = run(cli);
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    ExitCode::from(out.code as u8)
}
