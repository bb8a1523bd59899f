// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! `equifactor` command-line tool.
//!
//! Exit status: 0 success, 1 infeasible or false, 2 invalid input,
//! 3 undecided within the search budget.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "equifactor",
    version,
    about = "Equitable and parity factorizations of multigraphs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Edge, odd-edge and tree connectivity with witness cuts.
    Analyze(AnalyzeArgs),
    /// Eulerian, balanced or residue-prescribed orientations.
    Orient(OrientArgs),
    /// Factorizations: equitable, parity, regular, anstee, three-factor.
    Factor(FactorArgs),
    /// A parity factor with degrees near ε d(v).
    ParityFactor(ParityFactorArgs),
    /// Even factors and even factorizations.
    EvenFactor(EvenFactorArgs),
    /// Audit a factorization report against named claims.
    Verify(VerifyArgs),
    /// Generate a graph from a family.
    Gen(GenArgs),
    /// Exhaustive ground-truth answers on small graphs.
    Oracle(OracleArgs),
}

#[derive(Args, Debug)]
pub struct InputArgs {
    /// Graph file (`n <count>` then `e <u> <v>` lines).
    pub input: Option<PathBuf>,
    /// Generate the input instead, e.g. `complete:7` or `multiplied:2:cycle:4`.
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Equitable,
    Parity,
    Regular,
    Anstee,
    ThreeFactor,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ZSideArg {
    AtLeast,
    AtMost,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Question {
    Equitable,
    Parity,
    Orientation,
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Args, Debug)]
pub struct OrientArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Modulus; without it an Eulerian orientation is returned.
    #[arg(long)]
    pub k: Option<usize>,
    /// Out-degree residues, one per vertex (default all zero).
    #[arg(long, value_delimiter = ',')]
    pub p: Option<Vec<usize>>,
    /// Balanced orientation: d+ = d- (mod k); for even k `--f` lists Q.
    #[arg(long)]
    pub balanced: bool,
    /// Vertices with |d+ - d-| = k (balanced, even k).
    #[arg(long, value_delimiter = ',')]
    pub f: Option<Vec<usize>>,
    #[arg(long)]
    pub budget: Option<u64>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Args, Debug)]
pub struct FactorArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, value_enum, default_value = "equitable")]
    pub mode: Mode,
    /// Single steering vertex (equitable mode).
    #[arg(long)]
    pub z: Option<usize>,
    /// Steering vertex set (equitable mode); empty for Z = ∅.
    #[arg(long = "Z", value_delimiter = ',', num_args = 0..)]
    pub z_set: Option<Vec<usize>>,
    /// Odd-parity vertices (parity mode, even k).
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    pub f: Option<Vec<usize>>,
    /// Regular targets r_1,...,r_m (regular mode).
    #[arg(long = "r-list", value_delimiter = ',')]
    pub r_list: Option<Vec<usize>>,
    /// With `--r-list`: accept max degree <= r instead of r-regular.
    #[arg(long)]
    pub bounded: bool,
    #[arg(long)]
    pub budget: Option<u64>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Args, Debug)]
pub struct ParityFactorArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Odd-parity vertices.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    pub f: Option<Vec<usize>>,
    /// ε as `1/3` or `0.5` (default 1/2).
    #[arg(long)]
    pub epsilon: Option<String>,
    #[arg(long)]
    pub z: Option<usize>,
    #[arg(long = "z-side", value_enum)]
    pub z_side: Option<ZSideArg>,
    /// Experimental: vertices held to |d_F - ε d| <= 1.
    #[arg(long, value_delimiter = ',')]
    pub tight: Option<Vec<usize>>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Args, Debug)]
pub struct EvenFactorArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// One even factor with |d_F - ε d| < 2.
    #[arg(long, conflicts_with_all = ["k", "epsilons"])]
    pub epsilon: Option<String>,
    /// k even factors with deviation below 2.
    #[arg(long, conflicts_with = "epsilons")]
    pub k: Option<usize>,
    /// Weighted even factorization; weights sum to 1.
    #[arg(long, value_delimiter = ',')]
    pub epsilons: Option<Vec<String>>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// JSON factorization report.
    #[arg(long)]
    pub factorization: PathBuf,
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    pub claims: Vec<String>,
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    pub f: Option<Vec<usize>>,
    #[arg(long)]
    pub epsilon: Option<String>,
    #[arg(long, value_delimiter = ',')]
    pub epsilons: Option<Vec<String>>,
    #[arg(long = "r-list", value_delimiter = ',')]
    pub r_list: Option<Vec<usize>>,
    #[arg(long)]
    pub z: Option<usize>,
    #[arg(long = "z-side", value_enum)]
    pub z_side: Option<ZSideArg>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(long)]
    pub family: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_enum)]
    pub question: Question,
    #[arg(long)]
    pub k: Option<usize>,
    /// Residues for the orientation question.
    #[arg(long, value_delimiter = ',')]
    pub p: Option<Vec<usize>>,
    /// Odd-parity vertices for the parity question.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    pub f: Option<Vec<usize>>,
    /// Lower bounds for the parity question, one per vertex.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub g0: Option<Vec<i64>>,
    /// Upper bounds for the parity question, one per vertex.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub f0: Option<Vec<i64>>,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match commands::run(&cli.command) {
        Ok(outcome) => {
            print!("{}", outcome.stdout);
            ExitCode::from(outcome.status)
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(commands::exit_code(&err))
        }
    }
}
