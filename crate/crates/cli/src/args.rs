use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "fermidim", version, about = "Dimers as free-fermion six-vertex model: counting, spectra, q-series")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Working precision (bits) for the counting formula; defaults to
    /// FERMIDIM_PRECISION_BITS, then the config file, then an automatic choice.
    #[arg(long, global = true)]
    pub precision_bits: Option<usize>,

    /// Config file with `key = value` lines.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact dimer counts on the M×N torus.
    Count {
        #[arg(value_enum)]
        lattice: CountKind,
        m: usize,
        n: usize,
    },
    /// Candidate eigenvalues of T(u) matched against the dense spectrum.
    Spectrum {
        n: usize,
        u: f64,
        /// Matching tolerance.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Functional identities at finite size.
    Verify {
        #[arg(value_enum)]
        what: VerifyKind,
        /// Chain length; omitted means every N from 2 to 8.
        n: Option<usize>,
        /// Spectral parameter; omitted means random points.
        u: Option<f64>,
        /// Random spectral points per N.
        #[arg(long)]
        points: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Exact q-series.
    Qseries {
        #[command(subcommand)]
        kind: QseriesKind,
    },
    /// Jordan structure of the open XX Hamiltonian.
    Jordan {
        n: usize,
        /// Rank computations in Q(i, √2) instead of singular values.
        #[arg(long)]
        exact: bool,
        /// Relative singular-value threshold (numeric mode).
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Catalan's constant, residual entropy and molecular freedom.
    Entropy,
    /// Per-dimer growth of Z towards the molecular freedom.
    Growth { max: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CountKind {
    /// Diagonal (rotated) lattice, via the Pfaffian-free formula.
    Rotated,
    /// Standard orientation, via Kasteleyn's product.
    Standard,
    /// Formula, integer transfer-matrix trace and (when small) enumeration.
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VerifyKind {
    Ybe,
    Algebra,
    InversionCylinder,
    InversionStrip,
    AppendixA,
    SelectionRules,
    Braid,
    All,
}

#[derive(Debug, Subcommand)]
pub enum QseriesKind {
    /// Gaussian binomial [n, m]_q.
    Binomial { n: usize, m: usize },
    /// Finitized partition function of sector ℓ, checked against its string content.
    Sector { n: usize, ell: usize },
    /// Finitized modular invariant partition function in both forms.
    Mipf { n: usize },
    /// Finitized MIPF against the continuum theta/eta assembly.
    Continuum {
        n: usize,
        /// Largest q and q̄ level compared.
        #[arg(default_value_t = 3)]
        cutoff: u32,
    },
}
