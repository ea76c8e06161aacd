use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use anyon1d::Species;

#[derive(Parser, Debug)]
#[command(
    name = "anyon1d",
    version,
    about = "Exact checks of spinon and holon statistics in the 1/r^2 t-J chain"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalArgs {
    /// Relative tolerance for residual checks
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,

    /// Largest sector diagonalised densely
    #[arg(long, global = true, default_value_t = 6000)]
    pub dense_limit: usize,

    /// Worker threads (defaults to all cores)
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Report file, written atomically
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Seed for random-vector checks
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpeciesArg {
    Spinon,
    Holon,
}

impl From<SpeciesArg> for Species {
    fn from(s: SpeciesArg) -> Self {
        match s {
            SpeciesArg::Spinon => Species::Spinon,
            SpeciesArg::Holon => Species::Holon,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Dense,
    Iterative,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sector spectrum with crystal momenta
    Spectrum {
        #[arg(long)]
        n: usize,
        /// Use the two-anyon sector of this species
        #[arg(long, conflicts_with_all = ["holes", "n_up"])]
        species: Option<SpeciesArg>,
        /// Number of holes (default 0)
        #[arg(long)]
        holes: Option<usize>,
        /// Number of up spins (default: half the electrons, rounded down)
        #[arg(long)]
        n_up: Option<usize>,
        #[arg(long, value_enum, default_value_t = Mode::Dense)]
        mode: Mode,
        /// Levels computed in iterative mode
        #[arg(long, default_value_t = 10)]
        k: usize,
    },
    /// Eigen-equation checks of the explicit states
    Verify {
        #[command(subcommand)]
        target: VerifyTarget,
    },
    /// Fit the statistical shift to the exact two-anyon spectrum
    FitShift {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum)]
        species: SpeciesArg,
    },
    /// Momentum spacing rule and translation phases
    Spacing {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum)]
        species: SpeciesArg,
        /// Skip the translation-phase check on explicit states
        #[arg(long)]
        no_translation: bool,
    },
    /// Many-spinon state counting
    Count {
        #[arg(long)]
        n: u64,
    },
    /// Gram structure of localised spinons and holons (odd N)
    Gram {
        #[arg(long)]
        n: usize,
    },
    /// Allowed values for a statistical angle
    Quantize {
        /// Statistical angle in radians
        #[arg(long, allow_hyphen_values = true, conflicts_with = "theta_over_pi")]
        theta: Option<f64>,
        /// Statistical angle as an exact fraction of pi, e.g. 1/2
        #[arg(long, allow_hyphen_values = true)]
        theta_over_pi: Option<String>,
        /// Line length for the momentum-spacing rule
        #[arg(long)]
        length: Option<f64>,
        /// Relative angular momentum in the plane instead
        #[arg(long, conflicts_with = "length")]
        plane: bool,
        #[arg(long, default_value_t = 3)]
        k: usize,
    },
    /// Every check group at sizes up to --max-n
    Suite {
        #[arg(long, default_value_t = 10)]
        max_n: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum VerifyTarget {
    /// Ground state energy and eigen residual
    Ground {
        #[arg(long)]
        n: usize,
    },
    /// Two-spinon scattering identity for every valid label
    Spinon {
        #[arg(long)]
        n: usize,
        /// Also check that out-of-range labels vanish
        #[arg(long)]
        vanishing: bool,
        /// Also match predicted energies against the exact spectrum
        #[arg(long)]
        spectrum: bool,
    },
    /// Two-holon scattering identity for every valid label
    Holon {
        #[arg(long)]
        n: usize,
        /// Also match predicted energies against the exact spectrum
        #[arg(long)]
        spectrum: bool,
    },
}

/// Echo of the parsed command line as recorded in reports.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub species: Option<SpeciesArg>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub holes: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_up: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta_over_pi: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub length: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub plane: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vanishing: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub translation: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_n: Option<usize>,
    pub tol: f64,
    pub dense_limit: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    pub seed: u64,
    pub format: Option<Format>,
}

impl Cli {
    /// Command name as written on the command line.
    pub fn command_name(&self) -> String {
        match &self.command {
            Command::Spectrum { .. } => "spectrum".into(),
            Command::Verify { target } => match target {
                VerifyTarget::Ground { .. } => "verify ground".into(),
                VerifyTarget::Spinon { .. } => "verify spinon".into(),
                VerifyTarget::Holon { .. } => "verify holon".into(),
            },
            Command::FitShift { .. } => "fit-shift".into(),
            Command::Spacing { .. } => "spacing".into(),
            Command::Count { .. } => "count".into(),
            Command::Gram { .. } => "gram".into(),
            Command::Quantize { .. } => "quantize".into(),
            Command::Suite { .. } => "suite".into(),
        }
    }

    pub fn run_config(&self) -> RunConfig {
        let g = &self.global;
        let mut c = RunConfig {
            tol: g.tol,
            dense_limit: g.dense_limit,
            threads: g.threads,
            seed: g.seed,
            format: Some(g.format),
            ..RunConfig::default()
        };
        match &self.command {
            Command::Spectrum {
                n,
                species,
                holes,
                n_up,
                mode,
                k,
            } => {
                c.n = Some(*n as u64);
                c.species = *species;
                c.holes = *holes;
                c.n_up = *n_up;
                c.mode = Some(*mode);
                c.k = (*mode == Mode::Iterative).then_some(*k);
            }
            Command::Verify { target } => match target {
                VerifyTarget::Ground { n } => c.n = Some(*n as u64),
                VerifyTarget::Spinon { n, vanishing, spectrum } => {
                    c.n = Some(*n as u64);
                    c.species = Some(SpeciesArg::Spinon);
                    c.vanishing = Some(*vanishing);
                    c.spectrum = Some(*spectrum);
                }
                VerifyTarget::Holon { n, spectrum } => {
                    c.n = Some(*n as u64);
                    c.species = Some(SpeciesArg::Holon);
                    c.spectrum = Some(*spectrum);
                }
            },
            Command::FitShift { n, species } => {
                c.n = Some(*n as u64);
                c.species = Some(*species);
            }
            Command::Spacing {
                n,
                species,
                no_translation,
            } => {
                c.n = Some(*n as u64);
                c.species = Some(*species);
                c.translation = Some(!no_translation);
            }
            Command::Count { n } => c.n = Some(*n),
            Command::Gram { n } => c.n = Some(*n as u64),
            Command::Quantize {
                theta,
                theta_over_pi,
                length,
                plane,
                k,
            } => {
                c.theta = *theta;
                c.theta_over_pi = theta_over_pi.clone();
                c.length = *length;
                c.plane = Some(*plane);
                c.k = Some(*k);
            }
            Command::Suite { max_n } => c.max_n = Some(*max_n),
        }
        c
    }
}
