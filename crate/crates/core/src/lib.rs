//! Numerical laboratory for operator dynamics on sequence spaces.
//!
//! Everything here works at a finite truncation horizon: sequences are
//! finitely supported, weight products are tracked in log domain, and
//! every "for all n" claim is reported as a finite certificate (checked
//! range + tail bound) rather than silently extrapolated.
//!
//! Module map:
//! - [`scaled`]: wide-range complex scalar (mantissa + binary exponent) so
//!   coefficients spanning thousands of orders of magnitude stay exact-ish.
//! - [`spaces`]: sequence-space descriptions and their seminorm families.
//! - [`algebra`]: coordinatewise and convolution (Cauchy) products, powers,
//!   polynomial evaluation, free-generator candidates.
//! - [`shifts`]: weight sequences, cumulative log-products, shift operators,
//!   and the structural checks on named weight families.
//! - [`densitysets`]: families of pairwise-far integer sets with positive
//!   lower density, and the scans that certify their properties.
//! - [`witnesses`]: the explicit approximate-orbit vectors ("witnesses")
//!   behind each transitivity / frequent-orbit argument.
//! - [`convolution`]: entire-function coefficient vectors, the operator
//!   phi(D), and the parameter searches for its eigenvalue geometry.
//! - [`verify`]: instance checkers, orbit statistics, report plumbing.
//! - [`suite`]: the acceptance battery — one pass/fail check per headline
//!   claim, shared by the CLI and the integration harness.
//! - [`jobs`]: JSON job formats shared by the CLI and the FFI surface.

pub mod algebra;
pub mod cli;
pub mod convolution;
pub mod densitysets;
pub mod jobs;
pub mod scaled;
pub mod shifts;
pub mod spaces;
pub mod suite;
pub mod verify;
pub mod witnesses;

/// Schema version stamped into every JSON report.
pub const SCHEMA_VERSION: &str = "1";

/// Default seed used by tests and by CLI jobs that do not specify one.
/// Every output embeds the seed actually used.
pub const DEFAULT_SEED: u64 = 42;

/// Errors shared across modules.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("horizon exhausted: {0}")]
    HorizonExhausted(String),
    #[error("unsupported operation: {0}")]
    Unsupported(String),
    #[error("search failed: {0}")]
    SearchFailed(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Entry point used by the `shiftlab` binary.
pub fn cli_main() -> i32 {
    cli::run(std::env::args().skip(1).collect())
}
