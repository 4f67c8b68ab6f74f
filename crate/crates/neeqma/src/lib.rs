//! Reconstruction of the convergence law of iterative quantum-gate
//! approximations: sweep the convergence parameter on a simulated
//! processor, fit the matching equations-to-fit, extract the
//! problem-dependent constants and predict the smallest parameter meeting
//! a target gate-error budget.
//!
//! Two routines are covered end to end: Hamiltonian simulation by the
//! Lie-Trotter product formula (convergence parameter: the Trotter number
//! `n`) and eigenvalue filtering by quantum signal processing (convergence
//! parameter: the polynomial degree `d`). A dense-matrix oracle provides
//! ground truth for everything the circuits estimate.

pub mod cli;
pub mod error;
pub mod fitting;
pub mod oracle;
pub mod pauli;
pub mod qsp;
pub mod sim;
pub mod trotter;

pub use error::{Error, Result};
pub use fitting::{FitResult, SweepRow, SweepSeries};
pub use pauli::{parse_hamiltonian, PauliString, PauliSum, PauliTerm};
pub use sim::{Circuit, Shots, StateVector};
pub use trotter::{ObservableKind, TrotterErrorModel};
