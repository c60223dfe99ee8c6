use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "selfoc", version, about = "Mode-coupling spectra between harmonic waveguides")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Probabilities over final modes for one planar channel.
    #[command(args_override_self = true)]
    Spectrum1d {
        #[command(flatten)]
        channel: Channel1d,
        #[command(flatten)]
        common: Common,
    },
    /// Product spectrum for axis-aligned elliptic guides.
    #[command(args_override_self = true)]
    Spectrum2d {
        #[command(flatten)]
        guides: Guides2d,
        #[command(flatten)]
        common: Common,
    },
    /// Spectrum over target normal modes for cross-coupled guides.
    #[command(args_override_self = true)]
    Coupled2d {
        #[command(flatten)]
        guides: Guides2d,
        #[command(flatten)]
        common: Common,
    },
    /// Amplitude matrix ⟨n|n'⟩ with its orthogonality defect.
    #[command(args_override_self = true)]
    Matrix {
        #[command(flatten)]
        channel: Channel1d,
        /// Largest source mode.
        #[arg(long, default_value_t = 20)]
        n_max: usize,
        /// Largest target mode.
        #[arg(long, default_value_t = 400)]
        n_prime_max: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Vertical-transition estimate of the most probable final mode.
    #[command(name = "fc-estimate", args_override_self = true)]
    FcEstimate {
        #[command(flatten)]
        channel: Channel1d,
        #[command(flatten)]
        common: Common,
    },
    /// Schmidt singular values and entropy of a 2D amplitude tensor.
    #[command(args_override_self = true)]
    Entropy {
        #[command(flatten)]
        guides: Guides2d,
        #[command(flatten)]
        common: Common,
    },
}

impl Command {
    pub fn common(&self) -> &Common {
        match self {
            Command::Spectrum1d { common, .. }
            | Command::Spectrum2d { common, .. }
            | Command::Coupled2d { common, .. }
            | Command::Matrix { common, .. }
            | Command::FcEstimate { common, .. }
            | Command::Entropy { common, .. } => common,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Plot,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Stop once the captured probability reaches 1 − eps.
    #[arg(long, default_value_t = 1e-8)]
    pub eps: f64,
    /// Largest final mode index computed.
    #[arg(long, default_value_t = selfoc::MAX_MODE_INDEX)]
    pub cap: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// File of `key = value` lines mirroring the flags.
    #[arg(long)]
    pub scenario: Option<PathBuf>,
}

/// One channel, either raw (`ω`, `ω'`, `d`) or dimensionless (`ω'/ω`, `ωd²`).
#[derive(Debug, Args)]
pub struct Channel1d {
    #[arg(long)]
    pub omega: Option<f64>,
    #[arg(long)]
    pub omega_prime: Option<f64>,
    /// Target centre relative to the source centre.
    #[arg(long, allow_negative_numbers = true)]
    pub d: Option<f64>,
    /// ω'/ω, with ω = 1.
    #[arg(long)]
    pub ratio: Option<f64>,
    /// ωd², with ω = 1.
    #[arg(long = "D")]
    pub big_d: Option<f64>,
    /// Initial mode.
    #[arg(long, default_value_t = 0)]
    pub n: usize,
}

#[derive(Debug, Args)]
pub struct Guides2d {
    #[arg(long)]
    pub omega_x: Option<f64>,
    #[arg(long)]
    pub omega_prime_x: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub d_x: Option<f64>,
    #[arg(long)]
    pub ratio_x: Option<f64>,
    #[arg(long = "D-x")]
    pub big_d_x: Option<f64>,
    #[arg(long)]
    pub omega_y: Option<f64>,
    #[arg(long)]
    pub omega_prime_y: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub d_y: Option<f64>,
    #[arg(long)]
    pub ratio_y: Option<f64>,
    #[arg(long = "D-y")]
    pub big_d_y: Option<f64>,
    /// Cross-coupling of the source guide.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub gamma: f64,
    /// Cross-coupling of the target guide.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub gamma_prime: f64,
    #[arg(long, default_value_t = 0)]
    pub nx: usize,
    #[arg(long, default_value_t = 0)]
    pub ny: usize,
}
