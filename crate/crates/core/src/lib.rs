//! Long-range non-stabilizerness diagnostics for two-dimensional topological
//! codes on the torus.
//!
//! The core objects are four-dimensional ground spaces written in
//! minimum-entropy bases, the projective image of the modular group acting on
//! them, and small toric-code lattices used to check the closed-form results.

pub mod anyon;
pub mod classifier;
pub mod ground_space;
pub mod lattice;
pub mod modular_group;
pub mod numerics;

pub use anyon::{get_model, AnyonModel, Letter, Loop, LoopLabel, ModelKind, ModularWord};
pub use ground_space::{diagnose_lrn, GroundState, LrnReport, Verdict};
pub use modular_group::{modular_group, ProjectiveGroup};
pub use numerics::{ComplexVec4, RngSeed, TolerancePolicy, UnitaryMat, C64};
