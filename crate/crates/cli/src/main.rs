//! `cohom`: group cohomology, the degree-3 criterion and Φ(G, L) from the
//! command line.

mod cache;
mod commands;
mod error;
mod input;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cohom_core::criterion::Which;

use crate::cache::ResolutionCache;
use crate::commands::CriterionArgs;
use crate::error::Result;
use crate::input::{load_group, LatticeSpec};
use crate::report::{emit, Envelope, Format, Payload};

#[derive(Parser)]
#[command(name = "cohom", version, about = "Mod-2 cohomology of 2-groups and G-lattice invariants")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Report format; JSON is the stable contract.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    output: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Directory for cached resolutions.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Hⁱ(G, ℤ/2ᵐ) for i below the maximal degree.
    Cohomology(CohomologyCmd),
    /// Whether Im Sq¹ (b) or Im π₂ (a) escapes V_G in degree 3.
    Criterion(CriterionCmd),
    /// Φ(G, L) from a coflasque resolution of L.
    Phi(LatticeCmd),
    /// Ranks, Λ² decomposition counts and torsion-freeness.
    LatticeInfo(LatticeCmd),
}

#[derive(Args)]
struct CohomologyCmd {
    /// Group file or builtin:<name>.
    #[arg(long)]
    group: String,
    #[arg(long, default_value_t = 1)]
    modulus_exp: u32,
    #[arg(long, default_value_t = 4)]
    max_degree: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum WhichArg {
    A,
    B,
    Both,
}

impl From<WhichArg> for Which {
    fn from(w: WhichArg) -> Which {
        match w {
            WhichArg::A => Which::A,
            WhichArg::B => Which::B,
            WhichArg::Both => Which::Both,
        }
    }
}

#[derive(Args)]
struct CriterionCmd {
    #[arg(long)]
    group: String,
    #[arg(long, value_enum, default_value_t = WhichArg::Both)]
    which: WhichArg,
    /// Resolution modulus exponent K; defaults to v₂|G| + 1.
    #[arg(long)]
    modulus_exp: Option<u32>,
    #[arg(long, default_value_t = 5)]
    max_degree: usize,
    /// Cap on the number of subgroup conjugacy classes.
    #[arg(long, default_value_t = 10_000)]
    class_cap: usize,
    /// Worker threads for the per-subgroup transfers.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct LatticeCmd {
    #[arg(long)]
    group: String,
    /// Lattice file or builtin:M, builtin:regular, builtin:sign.
    #[arg(long)]
    lattice: String,
}

fn run(cli: &Cli) -> Result<()> {
    let cache = cli.cache_dir.as_deref().map(ResolutionCache::new).transpose()?;
    let envelope = match &cli.command {
        Command::Cohomology(c) => {
            let g = load_group(&c.group)?;
            let r = commands::cmd_cohomology(&g, c.modulus_exp, c.max_degree, cache.as_ref())?;
            let config = serde_json::json!({
                "modulus_exp": c.modulus_exp,
                "max_degree": c.max_degree,
            });
            Envelope::new("cohomology", &g, config, Payload::Cohomology(r))
        }
        Command::Criterion(c) => {
            let g = load_group(&c.group)?;
            let args = CriterionArgs {
                which: c.which.into(),
                modulus_exp: c.modulus_exp,
                max_degree: c.max_degree,
                class_cap: c.class_cap,
                threads: c.threads,
            };
            let r = commands::cmd_criterion(&g, &args, cache.as_ref())?;
            let which = match c.which {
                WhichArg::A => "a",
                WhichArg::B => "b",
                WhichArg::Both => "both",
            };
            let config = serde_json::json!({
                "which": which,
                "modulus_exp": c.modulus_exp,
                "max_degree": c.max_degree,
                "class_cap": c.class_cap,
            });
            Envelope::new("criterion", &g, config, Payload::Criterion(Box::new(r)))
        }
        Command::Phi(c) => {
            let g = load_group(&c.group)?;
            let spec = LatticeSpec::parse(&c.lattice)?;
            let r = commands::cmd_phi(&g, &spec)?;
            let config = serde_json::json!({ "lattice": c.lattice });
            Envelope::new("phi", &g, config, Payload::Phi(r))
        }
        Command::LatticeInfo(c) => {
            let g = load_group(&c.group)?;
            let spec = LatticeSpec::parse(&c.lattice)?;
            let r = commands::cmd_lattice_info(&g, &spec)?;
            let config = serde_json::json!({ "lattice": c.lattice });
            Envelope::new("lattice-info", &g, config, Payload::LatticeInfo(r))
        }
    };
    emit(&envelope, cli.output, cli.out.as_deref())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
