//! Quantum invariants of surgeries along torus knots.
//!
//! The library evaluates the WRT invariant of p-surgery on `T(a, b)` at `exp(4*pi*i/n)`
//! exactly (as a finite sum), and the leading terms of its large-`n` expansion built from
//! Chern-Simons invariants and Reidemeister torsions.

pub mod asymptotics;
pub mod error;
pub mod indexsets;
pub mod jones;
pub mod numtheory;
pub mod phase;
pub mod reps;
pub mod scalar;
pub mod wrt;

pub use error::{Error, Result};
pub use numtheory::SurgerySpec;
pub use phase::{ComplexValue, PhaseUnit};
pub use scalar::{MpFloat, Real};

/// 150-bit working precision, the default for oracles and sign decisions.
pub type F150 = MpFloat<150>;
pub type F256 = MpFloat<256>;
pub type Complex64 = ComplexValue<f64>;
pub type Complex150 = ComplexValue<F150>;
