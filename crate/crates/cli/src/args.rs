use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lrn_core::{ModelKind, TolerancePolicy};
use serde::Serialize;

use crate::error::{input, CliError};

#[derive(Debug, Parser, Serialize)]
#[command(name = "lrn", version, about = "Long-range non-stabilizerness diagnostics for topological ground states")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Serialize)]
pub struct GlobalOpts {
    /// Random seed; used by every sampling step.
    #[arg(long, global = true, env = "LRN_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Output format; sweeps default to csv, everything else to json.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long, short = 'o', global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true)]
    pub tol_norm: Option<f64>,
    #[arg(long, global = true)]
    pub tol_unitary: Option<f64>,
    #[arg(long, global = true)]
    pub tol_entropy_closed: Option<f64>,
    #[arg(long, global = true)]
    pub tol_entropy_lattice: Option<f64>,
    #[arg(long, global = true)]
    pub tol_integer: Option<f64>,
}

impl GlobalOpts {
    pub fn tolerances(&self) -> Result<TolerancePolicy, CliError> {
        let d = TolerancePolicy::default();
        let t = TolerancePolicy {
            tol_norm: self.tol_norm.unwrap_or(d.tol_norm),
            tol_unitary: self.tol_unitary.unwrap_or(d.tol_unitary),
            tol_entropy_closed: self.tol_entropy_closed.unwrap_or(d.tol_entropy_closed),
            tol_entropy_lattice: self.tol_entropy_lattice.unwrap_or(d.tol_entropy_lattice),
            tol_integer: self.tol_integer.unwrap_or(d.tol_integer),
        };
        t.validate().map_err(|e| input(e.to_string()))?;
        Ok(t)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// `(|a⟩ + e^{iφ}|b⟩)/√2` with `φ` swept.
    TPhase,
    /// `cos θ |a⟩ + sin θ |b⟩` with `θ` swept.
    TwoAmplitude,
}

fn parse_model(s: &str) -> Result<ModelKind, String> {
    s.parse().map_err(|e: lrn_core::anyon::AnyonError| e.to_string())
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// LRN diagnosis of one ground state.
    Classify(ClassifyArgs),
    /// Per-loop entropies along a one-parameter family of states.
    Sweep(SweepArgs),
    /// Projective image of the modular group.
    Group(GroupArgs),
    /// Orbit of a state under the full projective group.
    Orbit(OrbitArgs),
    /// Exact toric-code lattice checks.
    Lattice {
        #[command(subcommand)]
        #[serde(rename = "lattice_command")]
        command: LatticeCommand,
    },
    /// The 60 two-qubit stabilizer states with their loop entropies.
    EnumerateStabilizers(EnumerateArgs),
    /// Modular data of an anyon model.
    Model(ModelArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct ClassifyArgs {
    #[arg(long, value_parser = parse_model)]
    pub model: ModelKind,
    /// Toric-code logical amplitudes for |00⟩, |10⟩, |01⟩, |11⟩.
    #[arg(long, conflicts_with = "mes_coeffs")]
    pub alphas: Option<String>,
    /// Coefficients in the MES basis named by `--basis`.
    #[arg(long)]
    pub mes_coeffs: Option<String>,
    /// Basis of `--mes-coeffs` as a modular word relative to γ_y (e.g. `S`).
    #[arg(long, default_value = "")]
    pub basis: String,
    /// Examine words up to this length instead of the closed group.
    #[arg(long)]
    pub max_word_len: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    #[arg(long, value_parser = parse_model, default_value = "tc")]
    pub model: ModelKind,
    #[arg(long, default_value_t = 9)]
    pub steps: usize,
    /// Sweep start; defaults to 0.
    #[arg(long)]
    pub start: Option<f64>,
    /// Sweep end, inclusive; defaults to 2π for t-phase and π/2 for two-amplitude.
    #[arg(long)]
    pub stop: Option<f64>,
    /// Index of `|a⟩` (logical index for tc, MES label index for dfib).
    #[arg(long, default_value_t = 0)]
    pub first: usize,
    /// Index of `|b⟩`.
    #[arg(long, default_value_t = 1)]
    pub second: usize,
    /// Comma-separated loops (`x`, `y`, `xy`) or modular words (`S`, `ST`).
    #[arg(long, default_value = "x,y,xy")]
    pub loops: String,
}

#[derive(Debug, Args, Serialize)]
pub struct GroupArgs {
    #[arg(long, value_parser = parse_model)]
    pub model: ModelKind,
    /// Use the 3×3 doubled-Fibonacci restriction to the complement of the invariant state.
    #[arg(long)]
    pub restricted: bool,
    /// Include each element's shortest word.
    #[arg(long)]
    pub words: bool,
    #[arg(long)]
    pub dump_matrices: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct OrbitArgs {
    #[arg(long, value_parser = parse_model, default_value = "dfib")]
    pub model: ModelKind,
    /// `w` for the doubled-Fibonacci w state, or γ_y amplitudes.
    #[arg(long)]
    pub state: String,
    /// For `--state w`: `primitive`, `all`, a root index k (ω = e^{2πik/6}) or `re,im`.
    #[arg(long, default_value = "primitive")]
    pub omega: String,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum LatticeCommand {
    /// Compare lattice mutual information with the ground-space formula.
    Verify(LatticeArgs),
    /// Mutual information under random shallow circuits.
    Invariance(InvarianceArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct LatticeArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub lattice: LatticeRegionArgs,
    /// Also check the block factorization of ρ_AB.
    #[arg(long)]
    pub factorization: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct InvarianceArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub lattice: LatticeRegionArgs,
    #[arg(long, default_value_t = 1)]
    pub depth: usize,
    #[arg(long, default_value_t = 50)]
    pub trials: usize,
    /// Allow gates across region boundaries (needs annuli ≥ 2·depth columns wide).
    #[arg(long)]
    pub straddling: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct LatticeRegionArgs {
    #[arg(long, default_value_t = 4)]
    pub lx: usize,
    #[arg(long, default_value_t = 2)]
    pub ly: usize,
    /// Logical amplitudes, or `t` / `random`.
    #[arg(long, default_value = "t")]
    pub coeffs: String,
    /// Columns of the A annulus, comma-separated.
    #[arg(long, default_value = "0")]
    pub region_a: String,
    #[arg(long, default_value = "2")]
    pub region_b: String,
}

#[derive(Debug, Args, Serialize)]
pub struct EnumerateArgs {
    /// Write the table as CSV to this path.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct ModelArgs {
    #[arg(long, alias = "model", value_parser = parse_model)]
    pub name: ModelKind,
    /// Include S and T as row-major [re, im] pairs.
    #[arg(long)]
    pub dump: bool,
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn command_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn tolerance_overrides() {
        let cli = Cli::try_parse_from(["lrn", "--tol-integer", "1e-4", "model", "--name", "tc"]).unwrap();
        let t = cli.global.tolerances().unwrap();
        assert_eq!(t.tol_integer, 1e-4);
        assert_eq!(t.tol_norm, 1e-12);
        let bad = Cli::try_parse_from(["lrn", "--tol-norm=-1", "model", "--name", "tc"]).unwrap();
        assert_eq!(bad.global.tolerances().unwrap_err().exit_code(), 2);
    }

    #[test]
    fn unknown_model_rejected() {
        assert!(Cli::try_parse_from(["lrn", "group", "--model", "ising"]).is_err());
    }
}
