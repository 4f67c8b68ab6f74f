//! Dense statevector engine with exact-expectation and finite-shot
//! estimation for every observable the sweeps need.

pub mod circuit;
pub mod measure;
pub mod state;

pub use circuit::{apply_circuit, apply_gate, Circuit, Gate, GateKind};
pub use measure::{
    bra_u_ket, hadamard_test_estimate, pauli_sum_expectation, return_probability_estimate,
    substream_seed, Part, Shots,
};
pub use state::StateVector;
