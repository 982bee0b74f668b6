use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "tenbound",
    version,
    about = "Spectral-radius bounds and eigenvalue inclusion sets for tensors"
)]
pub struct Cli {
    /// Largest number of entries (or summed terms) a materialized product may involve.
    #[arg(long, global = true, env = "TENBOUND_ENTRY_CAP", default_value_t = tenbound::DEFAULT_ENTRY_CAP)]
    pub entry_cap: usize,

    /// Largest number of circuits enumerated for a circuit-type region set.
    #[arg(long, global = true, env = "TENBOUND_CIRCUIT_CAP", default_value_t = tenbound::inclusion::DEFAULT_CIRCUIT_CAP)]
    pub circuit_cap: usize,

    /// Indent the JSON report.
    #[arg(long, global = true)]
    pub pretty: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Shape, storage, row sums, diagonal and irreducibility of a tensor.
    Info { tensor: PathBuf },
    /// Row sums r_i(A) with their minimum and maximum.
    Rowsum { tensor: PathBuf },
    /// General product AB, or the power A^K with --power.
    Product(ProductArgs),
    /// Spectral-radius enclosures.
    #[command(subcommand)]
    Bounds(BoundsCommand),
    /// Eigenvalue inclusion sets for a product AB.
    #[command(subcommand)]
    Regions(RegionsCommand),
    /// Spectral radius of a nonnegative tensor by shifted power iteration.
    Rho(RhoArgs),
    /// Quotient certificate built from the Perron vector.
    CwCert(CwCertArgs),
    /// Recompute the worked example and check every identity.
    VerifyPaper(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct ProductArgs {
    pub a: PathBuf,
    #[arg(required_unless_present = "power", conflicts_with = "power")]
    pub b: Option<PathBuf>,
    /// Compute A^K instead of AB.
    #[arg(long, value_name = "K")]
    pub power: Option<usize>,
    /// Also write the product tensor to this file.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum BoundsCommand {
    /// [r(A), R(A)].
    Rowsum { a: PathBuf },
    /// Quotient bounds r_i(AB) / r_i(B)^(m-1); --self uses B = A.
    Minc {
        a: PathBuf,
        #[arg(required_unless_present = "self_", conflicts_with = "self_")]
        b: Option<PathBuf>,
        #[arg(long = "self")]
        self_: bool,
    },
    /// Quotient bounds with B = A^K.
    MincPower {
        a: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Enclosure of rho(AB).
    Product { a: PathBuf, b: PathBuf },
    /// Enclosure of rho(A^K).
    Power {
        a: PathBuf,
        #[arg(long)]
        k: usize,
    },
}

#[derive(Debug, Args)]
pub struct RegionArgs {
    pub a: PathBuf,
    pub b: PathBuf,
    /// Write an SVG rendering to this file.
    #[arg(long, value_name = "FILE")]
    pub svg: Option<PathBuf>,
    /// Points per axis for grid sampling and rasterized regions.
    #[arg(long, default_value_t = 200)]
    pub grid: usize,
    /// Add the eigenvalues of AB when an exact oracle applies.
    #[arg(long)]
    pub overlay_eigs: bool,
}

#[derive(Debug, Subcommand)]
pub enum RegionsCommand {
    /// One disk per row.
    Gershgorin(RegionArgs),
    /// One region per circuit of the digraph of AB.
    Brualdi(RegionArgs),
}

#[derive(Debug, Args)]
pub struct RhoArgs {
    pub a: PathBuf,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long, default_value_t = 10_000)]
    pub max_iter: usize,
}

#[derive(Debug, Args)]
pub struct CwCertArgs {
    pub a: PathBuf,
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Emit the check list as a JSON report.
    #[arg(long)]
    pub json: bool,
    /// Use this tensor instead of the built-in example.
    #[arg(long, value_name = "FILE")]
    pub fixture: Option<PathBuf>,
}
