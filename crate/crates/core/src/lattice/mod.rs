//! Exact toric-code checks on small tori: statevector ground states, region
//! entropies, stabilizer tableaus and shallow random circuits.
//!
//! Conventions: `A_v = ⊗Z` on the star of `v`, `B_p = ⊗X` on the boundary of
//! `p`. Logical `X̄` strings run along primal loops, `Z̄` strings cross dual
//! loops.

pub mod circuit;
pub mod factorization;
pub mod geometry;
pub mod pauli;
pub mod statevector;
pub mod tableau;

use thiserror::Error;

pub use circuit::{shallow_circuit_invariance_test, CircuitMode, InvarianceReport};
pub use factorization::{verify_block_factorization, BlockFactorization};
pub use geometry::{EdgeRegion, TorusLattice};
pub use pauli::PauliString;
pub use statevector::{
    build_logical_basis, encode, entropy, mutual_information_lattice, LatticeState,
};
pub use tableau::{build_logical_tableaus, build_mes_tableaus, tableau_entropy, StabilizerTableau};

#[derive(Debug, Error)]
pub enum LatticeError {
    #[error("lattice has {qubits} qubits; at most {max} supported here")]
    LatticeTooLarge { qubits: usize, max: usize },
    #[error("torus dimensions must be at least 2x2, got {lx}x{ly}")]
    InvalidDimensions { lx: usize, ly: usize },
    #[error("invalid region: {0}")]
    InvalidRegion(String),
    #[error("regions overlap")]
    OverlappingRegions,
    #[error("regions must be separated by a full column on both sides (gaps {left}, {right})")]
    RegionsNotSeparated { left: usize, right: usize },
    #[error("regions are {width} column(s) wide; depth needs at least {required}")]
    RegionsTooNarrow { width: usize, required: usize },
    #[error("state is not normalized (squared norm {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },
    #[error("expected {expected} entries, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("invalid stabilizer tableau: {0}")]
    InvalidTableau(String),
    #[error("projection produced the zero vector")]
    DegenerateProjection,
}
