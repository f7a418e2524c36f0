//! Exact-diagonalization simulator for disordered, interacting arrays of
//! spin-1/2 qubits, optionally coupled to a single truncated bosonic mode.
//!
//! The crate is organised bottom-up:
//!
//! * [`operators`] builds Pauli, ladder and polarization operators on the
//!   qubit ⊗ Fock tensor-product space with a fixed basis ordering.
//! * [`hamiltonians`] assembles the qubit, Ising, exchange and cavity terms
//!   from a declarative [`ModelSpec`](hamiltonians::ModelSpec).
//! * [`disorder`] samples reproducible qubit parameters with an exactly
//!   realized frequency spread.
//! * [`eigensolve`] wraps dense Hermitian diagonalization with explicit
//!   residual and orthonormality checks.
//! * [`response`] turns spectra into correlation functions, spectral lines,
//!   dominant resonances, Stark tracks and transmission proxies.
//! * [`sweeps`] runs parameter scans over coupling, disorder, size and
//!   cavity coupling.
//!
//! Units: ħ = 1 and the mean qubit frequency ω̄ = 1 unless stated otherwise.

pub mod disorder;
pub mod eigensolve;
pub mod error;
pub mod hamiltonians;
pub mod operators;
pub mod response;
pub mod sweeps;

pub use error::{Result, SqaError};

/// Complex scalar used for every matrix element and amplitude.
pub type C64 = nalgebra::Complex<f64>;
/// Dense complex matrix.
pub type CMatrix = nalgebra::DMatrix<C64>;
/// Dense complex vector.
pub type CVector = nalgebra::DVector<C64>;
