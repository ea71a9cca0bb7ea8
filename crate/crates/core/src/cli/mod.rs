//! Argument parsing and dispatch for the `funcqaoa` binary.

mod commands;
mod output;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use funcqaoa::{Error, Result};

pub use output::Format;

#[derive(Debug, Parser)]
#[command(name = "funcqaoa", version, about = "Func-QAOA factoring circuits and VQF search-space reduction")]
#[command(args_override_self = true)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Seed for every random choice of the run.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Report format; commands pick their own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// `key=value` file mirroring the long flags of the chosen command.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Optimize a factoring ansatz and report the recovered factors.
    Factor(FactorArgs),
    /// Column clauses of `p·q = m`.
    Clauses(ClausesArgs),
    /// Reduction plan and the initial-state circuit it compiles to.
    Reduce(ReduceArgs),
    /// Per-clause search-space compression.
    Compression(CompressionArgs),
    /// Gate, depth and CNOT counts over a range of operand widths.
    Resources(ResourcesArgs),
    /// Sample measurement outcomes of a circuit file.
    Simulate(SimulateArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CertificateArg {
    Multiplication,
    Modulo,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MixerArg {
    X,
    Grover,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum InitArg {
    Uniform,
    Reduced,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Grid,
    NelderMead,
    Hybrid,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    /// Gate-level for narrow circuits, compiled diagonal otherwise.
    Auto,
    Circuit,
    Compiled,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PhaseModeArg {
    Hamming,
    Abs,
    Squared,
}

#[derive(Debug, Args)]
pub struct FactorArgs {
    #[arg(long)]
    pub m: u64,
    #[arg(long, value_enum, default_value_t = CertificateArg::Modulo)]
    pub certificate: CertificateArg,
    #[arg(long, default_value_t = 3)]
    pub layers: usize,
    #[arg(long, value_enum, default_value_t = MixerArg::Grover)]
    pub mixer: MixerArg,
    #[arg(long, value_enum, default_value_t = InitArg::Uniform)]
    pub init: InitArg,
    #[arg(long, value_enum, default_value_t = StrategyArg::Hybrid)]
    pub strategy: StrategyArg,
    /// Grid points per parameter; defaults by layer count.
    #[arg(long)]
    pub resolution: Option<usize>,
    #[arg(long, default_value_t = 5)]
    pub restarts: usize,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long, default_value_t = 4000)]
    pub max_evals: usize,
    #[arg(long, value_enum, default_value_t = BackendArg::Auto)]
    pub backend: BackendArg,
    #[arg(long, value_enum, default_value_t = PhaseModeArg::Hamming)]
    pub phase_mode: PhaseModeArg,
    /// Estimate energies from this many shots instead of exactly.
    #[arg(long)]
    pub shots: Option<u64>,
    /// Largest clause (in factor bits) the reduced init may brute-force.
    #[arg(long, default_value_t = 16)]
    pub max_vars: usize,
    /// Skip optimization and evaluate at these angles.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub params: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct WidthArgs {
    #[arg(long)]
    pub m: u64,
    /// Bits of `p`; defaults to half the bit length of `m`.
    #[arg(long)]
    pub n_p: Option<usize>,
    /// Bits of `q`; defaults to one less than the bit length of `m`.
    #[arg(long)]
    pub n_q: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ClausesArgs {
    #[command(flatten)]
    pub widths: WidthArgs,
    /// Emit the clauses left after classical preprocessing.
    #[arg(long)]
    pub preprocessed: bool,
    /// Keep only clauses with at most this many factor bits.
    #[arg(long)]
    pub max_vars: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ReduceArgs {
    #[command(flatten)]
    pub widths: WidthArgs,
    #[arg(long, default_value_t = 16)]
    pub max_vars: usize,
}

#[derive(Debug, Args)]
pub struct CompressionArgs {
    /// One or more moduli, comma separated or repeated.
    #[arg(long, required = true, value_delimiter = ',')]
    pub m: Vec<u64>,
    #[arg(long, default_value_t = 16)]
    pub max_vars: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CircuitKind {
    Adder,
    Multiplier,
}

#[derive(Debug, Args)]
pub struct ResourcesArgs {
    #[arg(long, value_enum)]
    pub circuit: CircuitKind,
    /// Inclusive operand-width range `a..b`.
    #[arg(long, value_parser = parse_range)]
    pub bits: (usize, usize),
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Circuit in the text format.
    #[arg(long)]
    pub circuit: PathBuf,
    #[arg(long, default_value_t = 1024)]
    pub shots: u64,
}

fn parse_range(s: &str) -> std::result::Result<(usize, usize), String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("`{s}` is not of the form a..b"))?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let a: usize = a.trim().parse().map_err(|e| format!("`{a}`: {e}"))?;
    let b: usize = b.trim().parse().map_err(|e| format!("`{b}`: {e}"))?;
    if a == 0 || a > b {
        return Err(format!("range {a}..{b} must satisfy 1 ≤ a ≤ b"));
    }
    Ok((a, b))
}

const SUBCOMMANDS: [&str; 6] = ["factor", "clauses", "reduce", "compression", "resources", "simulate"];

/// Splices `--key=value` pairs from the `--config` file in right after the
/// subcommand name, so flags given on the command line come later and win.
pub fn expand_config(args: Vec<String>) -> Result<Vec<String>> {
    let mut path = None;
    for (i, a) in args.iter().enumerate() {
        if a == "--config" {
            path = args.get(i + 1).cloned();
        } else if let Some(p) = a.strip_prefix("--config=") {
            path = Some(p.to_string());
        }
    }
    let Some(path) = path else {
        return Ok(args);
    };
    let text =
        std::fs::read_to_string(&path).map_err(|e| Error::precondition(format!("cannot read config `{path}`: {e}")))?;
    let mut extra = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse { line: n + 1, msg: format!("expected key=value, got `{line}`") })?;
        let key = key.trim().replace('_', "-");
        if key == "config" {
            return Err(Error::Parse { line: n + 1, msg: "config files cannot nest".into() });
        }
        match value.trim() {
            "true" => extra.push(format!("--{key}")),
            "false" => {}
            v => extra.push(format!("--{key}={v}")),
        }
    }
    let at = args.iter().position(|a| SUBCOMMANDS.contains(&a.as_str())).map_or(args.len(), |i| i + 1);
    let mut out = args[..at].to_vec();
    out.extend(extra);
    out.extend_from_slice(&args[at..]);
    Ok(out)
}

pub fn run(cli: &Cli) -> Result<()> {
    let report = match &cli.command {
        Command::Factor(a) => commands::factor(a, cli.global.seed)?.json(cli.global.format)?,
        Command::Clauses(a) => commands::clauses(a)?.json(cli.global.format)?,
        Command::Reduce(a) => commands::reduce(a)?.json(cli.global.format)?,
        Command::Compression(a) => commands::compression(a)?.render(cli.global.format),
        Command::Resources(a) => commands::resources(a)?.render(cli.global.format),
        Command::Simulate(a) => commands::simulate(a, cli.global.seed)?.json(cli.global.format)?,
    };
    output::emit(&report, cli.global.output.as_deref())
}
