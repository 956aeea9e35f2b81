//! Exact residue calculus for intersection pairings on quasi-Hamiltonian
//! reduced spaces.
//!
//! The crate is organized around the computational chain
//!
//! ```text
//! numkernel  -- big rationals, rational linear algebra, lattices, Smith normal form
//! laurent    -- nested truncated Laurent series with exact coefficients
//! residue    -- iterated residues Res^tau (exact) plus a numeric contour oracle
//! arrangement-- hyperplane arrangements, circuits, no-broken-circuit / diagonal bases
//! rootsystem -- type-A root data: roots, lattices, Weyl groups, dimension formula
//! szenes     -- both sides of Szenes' lattice-sum / residue identity
//! pairing    -- weight-lattice and residue evaluators for fixed-point data
//! expr       -- text grammar for the meromorphic term class
//! manifest   -- JSON manifests and byte-stable reports
//! ```
//!
//! All symbolic computation is exact over arbitrary-precision rationals; every
//! exact path is paired with an independent floating-point oracle.

pub mod arrangement;
pub mod expr;
pub mod laurent;
pub mod manifest;
pub mod numkernel;
pub mod pairing;
pub mod residue;
pub mod rootsystem;
pub mod szenes;

pub use numkernel::{rat, rat_int, ExactScalar, LinearForm, MatQ};

/// Error type shared by all modules. The variants mirror the CLI exit codes:
/// parse (2), precondition (3), computation (4), verification (5).
#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("computation failed: {0}")]
    Computation(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl Error {
    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
    pub fn computation(msg: impl Into<String>) -> Self {
        Error::Computation(msg.into())
    }
    /// Exit code class for the CLI.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } => 2,
            Error::Precondition(_) => 3,
            Error::Computation(_) => 4,
            Error::Verification(_) => 5,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
