use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use pauli_duality::config::LMAX_VAR;
use pauli_duality::{run, Command, Options, RunConfig};

#[derive(Parser)]
#[command(name = "pauli-duality", version, about = "Duality and generalized stabilizer checks for spin chains")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Conjugate a model by the duality circuit and compare with its stated dual.
    VerifyDuality(Flags),
    /// Verify the exact solution of the periodic ZXZ chain on a parameter grid.
    SolveZxz(Flags),
    /// Single-site entropy of the exact ZXZ ground state against B/J.
    EntropySweep(Flags),
    /// Finite-size check of E(J) = J E(1/J) for the open Ising chain.
    EnergyScan(Flags),
    /// Unique joint +1 eigenvector of a generator set read from a file.
    FixedState {
        /// Generator file, one operator string per line.
        generators: Option<String>,
        #[command(flatten)]
        flags: Flags,
    },
}

/// Shared flags; lists are comma-separated. Flags override `--config` file keys.
#[derive(Args, Default)]
struct Flags {
    #[arg(long)]
    family: Option<String>,
    #[arg(long = "L", value_name = "LIST")]
    l: Option<String>,
    #[arg(long = "N", value_name = "LIST")]
    n: Option<String>,
    #[arg(long = "J", value_name = "LIST", allow_hyphen_values = true)]
    j: Option<String>,
    #[arg(long = "B", value_name = "LIST", allow_hyphen_values = true)]
    b: Option<String>,
    #[arg(long = "J1", value_name = "LIST", allow_hyphen_values = true)]
    j1: Option<String>,
    #[arg(long = "J2", value_name = "LIST", allow_hyphen_values = true)]
    j2: Option<String>,
    /// open or periodic
    #[arg(long)]
    boundary: Option<String>,
    #[arg(long)]
    tol: Option<String>,
    /// Output file (default stdout).
    #[arg(long)]
    out: Option<String>,
    /// csv, json or text
    #[arg(long)]
    format: Option<String>,
    /// Worker threads.
    #[arg(long)]
    jobs: Option<String>,
    /// Flat key = value file.
    #[arg(long)]
    config: Option<String>,
    /// Circuit file replacing the default duality circuit.
    #[arg(long)]
    circuit: Option<String>,
}

impl Flags {
    fn options(self, generators: Option<String>) -> Result<Options> {
        let base = match &self.config {
            Some(p) => {
                let text = std::fs::read_to_string(p).with_context(|| format!("reading config {p}"))?;
                Options::parse_file(&text)?
            }
            None => Options::default(),
        };
        let mut o = Options::default();
        for (k, v) in [
            ("family", self.family),
            ("L", self.l),
            ("N", self.n),
            ("J", self.j),
            ("B", self.b),
            ("J1", self.j1),
            ("J2", self.j2),
            ("boundary", self.boundary),
            ("tol", self.tol),
            ("out", self.out),
            ("format", self.format),
            ("jobs", self.jobs),
            ("circuit", self.circuit),
            ("generators", generators),
        ] {
            o.set(k, v);
        }
        Ok(base.overridden_by(o))
    }
}

fn execute(cli: Cli) -> Result<bool> {
    let (cmd, options) = match cli.command {
        Cmd::VerifyDuality(f) => (Command::VerifyDuality, f.options(None)?),
        Cmd::SolveZxz(f) => (Command::SolveZxz, f.options(None)?),
        Cmd::EntropySweep(f) => (Command::EntropySweep, f.options(None)?),
        Cmd::EnergyScan(f) => (Command::EnergyScan, f.options(None)?),
        Cmd::FixedState { generators, flags } => (Command::FixedState, flags.options(generators)?),
    };
    let lmax = std::env::var(LMAX_VAR).ok();
    let cfg = RunConfig::from_options(&options, lmax.as_deref())?;
    let report = run(cmd, &cfg)?;
    let mut out: Box<dyn Write> = match &cfg.out {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    report.write(cfg.format, &mut out)?;
    out.flush()?;
    for f in &report.failures {
        eprintln!("{}: FAIL {f}", cmd.name());
    }
    Ok(report.passed())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
