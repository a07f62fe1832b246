//! `tunnelcheck`: exact tunneling solutions and their Madelung and
//! action-branch decompositions from the command line.
//!
//! Exit codes: 0 on success, 1 on a physics-domain error or a failed
//! validation, 2 on a usage error.

// `!(x > 0.0)` rejects NaN along with nonpositive values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use commands::*;
use output::Report;
use tunnelcheck::units::{UnitSystem, Units};

/// Relative `--output` paths are resolved against this directory.
const OUT_DIR_ENV: &str = "TUNNELCHECK_OUT_DIR";

#[derive(Debug)]
pub enum CliError {
    Physics(tunnelcheck::Error),
    Usage(String),
    Io(String),
}

impl From<tunnelcheck::Error> for CliError {
    fn from(e: tunnelcheck::Error) -> Self {
        CliError::Physics(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Physics(e) => write!(f, "{e}"),
            CliError::Usage(s) => write!(f, "usage: {s}"),
            CliError::Io(s) => write!(f, "i/o: {s}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum UnitsArg {
    Natural,
    #[value(name = "mev_fm")]
    MevFm,
    Si,
}

#[derive(Parser, Debug)]
#[command(name = "tunnelcheck", version, about = "Exact tunneling solutions and their classical-action decompositions")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, global = true, value_enum, default_value_t = UnitsArg::Natural)]
    units: UnitsArg,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Potential step: reflection and evanescent amplitudes.
    Step(StepArgs),
    /// Rectangular barrier: amplitudes and transmission by three methods.
    Barrier(BarrierArgs),
    /// Madelung fields and residuals of a step or barrier eigenstate.
    Madelung(FieldArgs),
    /// Per-branch diagnostics of the action-branch decomposition.
    Branches(FieldArgs),
    /// Outgoing Coulomb wave of a decaying state.
    CoulombDecay(CoulombArgs),
    /// Coulomb wave with an absorbing interior.
    CoulombFusion(FusionArgs),
    /// Hydrogen ground state from the 4D oscillator propagator.
    KsHydrogen(KsHydrogenArgs),
    /// Branch interference for the inverted oscillator (E > 0).
    KsInverted(KsInvertedArgs),
    /// Discrete Berry phase of a spin-1/2 loop.
    Berry(BerryArgs),
    /// Josephson current across a phase sweep.
    Josephson(JosephsonArgs),
    /// Two-junction interferometer critical current against flux.
    Squid(SquidArgs),
    /// Run every validation criterion; exits 1 if any fails.
    Validate(ValidateArgs),
    /// Check or regenerate the golden corpus.
    Goldens(GoldensArgs),
}

fn run(cli: &Cli) -> Result<(Report, bool), CliError> {
    let (system, name) = match cli.units {
        UnitsArg::Natural => (UnitSystem::Natural, "natural"),
        UnitsArg::MevFm => (UnitSystem::MevFm, "mev_fm"),
        UnitsArg::Si => (UnitSystem::Si, "si"),
    };
    let ctx = Ctx { units: Units::new(system), units_name: name.into() };
    let ok = |r| Ok((r, true));
    match &cli.command {
        Command::Step(a) => ok(step(&ctx, a)?),
        Command::Barrier(a) => ok(barrier(&ctx, a)?),
        Command::Madelung(a) => ok(madelung_cmd(&ctx, a)?),
        Command::Branches(a) => ok(branches_cmd(&ctx, a)?),
        Command::CoulombDecay(a) => ok(coulomb_decay(&ctx, a)?),
        Command::CoulombFusion(a) => ok(coulomb_fusion(&ctx, a)?),
        Command::KsHydrogen(a) => ok(ks_hydrogen(&ctx, a)?),
        Command::KsInverted(a) => ok(ks_inverted(&ctx, a)?),
        Command::Berry(a) => ok(berry(&ctx, a)?),
        Command::Josephson(a) => ok(josephson(&ctx, a)?),
        Command::Squid(a) => ok(squid(&ctx, a)?),
        Command::Validate(a) => validate_cmd(&ctx, a),
        Command::Goldens(a) => goldens_cmd(&ctx, a),
    }
}

fn emit(cli: &Cli, report: &Report) -> Result<(), CliError> {
    let text = match cli.format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
    };
    match &cli.output {
        Some(p) => {
            let path = match std::env::var_os(OUT_DIR_ENV) {
                Some(dir) if p.is_relative() => PathBuf::from(dir).join(p),
                _ => p.clone(),
            };
            std::fs::write(&path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
        }
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string())),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let result = run(&cli).and_then(|(r, ok)| emit(&cli, &r).map(|_| ok));
    if matches!(cli.command, Command::Validate(_)) {
        eprintln!("elapsed {:.2}s", start.elapsed().as_secs_f64());
    }
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
