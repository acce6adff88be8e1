use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use filtra::coeff::parse_rational;
use filtra::format::parse_window;
use filtra::runner::{self, Command, Outcome, Request};
use filtra::{Rational, Window};

/// Homology and spectral invariants of based filtered chain complexes.
///
/// Exit status: 0 on success, 1 on a property violation, 2 on bad input.
#[derive(Parser)]
#[command(name = "filtra", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse and validate complexes.
    Validate(Inputs),
    /// Homology in each degree, printed as a class file.
    Homology(Inputs),
    /// Action values of the generators.
    Spectrum(Inputs),
    /// Spectral invariant of each class, one per line.
    Spectral(Inputs),
    /// The dual complex.
    Dualize(Inputs),
    /// Tensor product of two complexes.
    Tensor(Inputs),
    /// Novikov lift of a complex.
    Lift(Inputs),
    /// Spectral invariants by exhaustive enumeration over a prime field.
    Oracle(Inputs),
    /// Run a manifest of jobs.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct Inputs {
    /// Complex file; repeat for commands taking several.
    #[arg(long = "complex", value_name = "PATH")]
    complexes: Vec<PathBuf>,
    /// Class file; repeatable.
    #[arg(long = "class", value_name = "PATH")]
    classes: Vec<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    degree: Option<i64>,
    /// Base ring (Z, Q, F<p>) to move every complex to.
    #[arg(long, value_name = "RING")]
    ring_override: Option<String>,
    /// Novikov window `min:max`.
    #[arg(long, value_parser = window_arg, allow_hyphen_values = true)]
    window: Option<Window>,
    #[arg(long, allow_hyphen_values = true)]
    period_degree: Option<i64>,
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
    period_action: Option<Rational>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_name = "PATH")]
    manifest: PathBuf,
    /// Seed for randomized jobs that do not set their own.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn window_arg(s: &str) -> Result<Window, String> {
    parse_window(s).ok_or_else(|| format!("expected `min:max` with min <= max, found `{s}`"))
}

fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).ok_or_else(|| format!("expected an integer or `p/q`, found `{s}`"))
}

impl From<Inputs> for Request {
    fn from(i: Inputs) -> Self {
        Request {
            complexes: i.complexes,
            classes: i.classes,
            degree: i.degree,
            ring_override: i.ring_override,
            window: i.window,
            period_degree: i.period_degree,
            period_action: i.period_action,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let run = |command: Command, inputs: Inputs| runner::run_command(command, &inputs.into());
    let outcome: Outcome = match cli.command {
        Cmd::Validate(i) => run(Command::Validate, i),
        Cmd::Homology(i) => run(Command::Homology, i),
        Cmd::Spectrum(i) => run(Command::Spectrum, i),
        Cmd::Spectral(i) => run(Command::Spectral, i),
        Cmd::Dualize(i) => run(Command::Dualize, i),
        Cmd::Tensor(i) => run(Command::Tensor, i),
        Cmd::Lift(i) => run(Command::Lift, i),
        Cmd::Oracle(i) => run(Command::Oracle, i),
        Cmd::Verify(v) => runner::verify(&v.manifest, v.seed),
    };
    let _ = std::io::stdout().write_all(outcome.stdout.as_bytes());
    if !outcome.stderr.is_empty() {
        let mut err = std::io::stderr();
        let _ = write!(err, "error: {}", outcome.stderr);
        if !outcome.stderr.ends_with('\n') {
            let _ = writeln!(err);
        }
    }
    ExitCode::from(outcome.status.code() as u8)
}
