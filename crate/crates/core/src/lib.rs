//! Exact finite-size checks of fractional statistics for spinons and holons
//! in the supersymmetric `1/r²` t-J chain.
//!
//! The crate enumerates symmetry sectors of a periodic chain, applies the
//! Kuramoto-Yokoyama Hamiltonian matrix-free, diagonalises it, builds the
//! explicit polynomial wave functions of the ground state and of two-anyon
//! momentum basis states, and compares everything with closed-form
//! dispersions, shifted momenta and state counts.
//!
//! Numerical code is generic over [`Real`] (`f32` or `f64`); the aliases at
//! the crate root fix it to `f64`.

pub mod chain;
pub mod eigen;
pub mod error;
pub mod operator;
pub mod report;
pub mod scalar;
pub mod states;
pub mod theory;
pub mod verify;

pub use chain::{apply_translation, ChainGeometry, Configuration, Occupation, SectorBasis, SectorKey, StateVector};
pub use error::{Error, Result};
pub use operator::{operator_self_checks, KymOperator, PairConvention};
pub use report::{CheckRecord, ModelDescriptor, ReportBuilder, VerificationReport};
pub use scalar::Real;
pub use states::{gram_matrix, ground_state, localized_state, two_holon_state, two_spinon_state, ExplicitState};
pub use theory::{PairLabel, Species};

pub type Geometry = ChainGeometry<f64>;
pub type State = StateVector<f64>;
pub type Operator = KymOperator<f64>;
pub type Explicit = ExplicitState<f64>;
