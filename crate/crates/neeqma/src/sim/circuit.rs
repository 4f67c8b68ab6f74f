//! Gate and circuit types.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::{PauliString, PauliSum};
use crate::sim::state::StateVector;

/// Primitive operations understood by the statevector engine.
///
/// `HamiltonianExp` applies `exp(i t H)` by truncated Taylor action; it is
/// how exact signal operators enter a circuit without gate synthesis.
#[derive(Debug, Clone)]
pub enum GateKind {
    PauliRotation { string: PauliString, angle: f64 },
    Hadamard(usize),
    SPhase(usize),
    SPhaseDagger(usize),
    RX(usize, f64),
    RZ(usize, f64),
    PauliX(usize),
    HamiltonianExp { h: Arc<PauliSum>, t: f64 },
}

/// A primitive gate with an optional control qubit.
#[derive(Debug, Clone)]
pub struct Gate {
    pub kind: GateKind,
    pub control: Option<usize>,
}

impl Gate {
    pub fn new(kind: GateKind) -> Self {
        Gate { kind, control: None }
    }

    fn inverse(&self) -> Gate {
        let kind = match &self.kind {
            GateKind::PauliRotation { string, angle } => GateKind::PauliRotation {
                string: *string,
                angle: -angle,
            },
            GateKind::Hadamard(q) => GateKind::Hadamard(*q),
            GateKind::SPhase(q) => GateKind::SPhaseDagger(*q),
            GateKind::SPhaseDagger(q) => GateKind::SPhase(*q),
            GateKind::RX(q, a) => GateKind::RX(*q, -a),
            GateKind::RZ(q, a) => GateKind::RZ(*q, -a),
            GateKind::PauliX(q) => GateKind::PauliX(*q),
            GateKind::HamiltonianExp { h, t } => GateKind::HamiltonianExp {
                h: Arc::clone(h),
                t: -t,
            },
        };
        Gate {
            kind,
            control: self.control,
        }
    }

    /// Largest qubit index the gate touches (target side only).
    fn max_target(&self) -> usize {
        match &self.kind {
            GateKind::PauliRotation { string, .. } => string.num_qubits() - 1,
            GateKind::Hadamard(q)
            | GateKind::SPhase(q)
            | GateKind::SPhaseDagger(q)
            | GateKind::RX(q, _)
            | GateKind::RZ(q, _)
            | GateKind::PauliX(q) => *q,
            GateKind::HamiltonianExp { h, .. } => h.num_qubits() - 1,
        }
    }
}

/// Ordered list of gates over a fixed qubit count.
#[derive(Debug, Clone, Default)]
pub struct Circuit {
    nqubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(nqubits: usize) -> Self {
        Circuit {
            nqubits,
            gates: Vec::new(),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.nqubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        if gate.max_target() >= self.nqubits {
            return Err(Error::QubitOutOfRange {
                index: gate.max_target(),
                nqubits: self.nqubits,
            });
        }
        if let Some(c) = gate.control {
            if c >= self.nqubits {
                return Err(Error::QubitOutOfRange {
                    index: c,
                    nqubits: self.nqubits,
                });
            }
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn push_kind(&mut self, kind: GateKind) -> Result<()> {
        self.push(Gate::new(kind))
    }

    /// Adjoint circuit: reversed gate order, each gate inverted.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            nqubits: self.nqubits,
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
        }
    }

    /// The same circuit with every gate controlled on `control`, widened to
    /// `nqubits` (the control must be a fresh qubit outside this circuit).
    pub fn controlled_on(&self, control: usize, nqubits: usize) -> Result<Circuit> {
        if control < self.nqubits || control >= nqubits {
            return Err(Error::InvalidArgument(
                "control must be a fresh ancilla outside the circuit register".into(),
            ));
        }
        let mut out = Circuit::new(nqubits);
        for g in &self.gates {
            if g.control.is_some() {
                return Err(Error::InvalidArgument(
                    "cannot re-control an already controlled gate".into(),
                ));
            }
            out.push(Gate {
                kind: g.kind.clone(),
                control: Some(control),
            })?;
        }
        Ok(out)
    }

    /// Append all gates of `other` (same register width required).
    pub fn extend(&mut self, other: &Circuit) -> Result<()> {
        if other.nqubits != self.nqubits {
            return Err(Error::LengthMismatch {
                left: self.nqubits,
                right: other.nqubits,
            });
        }
        for g in &other.gates {
            self.push(g.clone())?;
        }
        Ok(())
    }
}

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

fn cplx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Apply one gate to a state (the state may be wider than the gate's
/// circuit; extra ancillas sit after the circuit qubits).
pub fn apply_gate(state: &mut StateVector, gate: &Gate) -> Result<()> {
    let ctl = gate.control;
    match &gate.kind {
        GateKind::PauliRotation { string, angle } => {
            state.apply_pauli_rotation(string, *angle, ctl)
        }
        GateKind::Hadamard(q) => state.apply_one_qubit(
            *q,
            [
                [cplx(FRAC_1_SQRT_2, 0.0), cplx(FRAC_1_SQRT_2, 0.0)],
                [cplx(FRAC_1_SQRT_2, 0.0), cplx(-FRAC_1_SQRT_2, 0.0)],
            ],
            ctl,
        ),
        GateKind::SPhase(q) => state.apply_one_qubit(
            *q,
            [
                [cplx(1.0, 0.0), cplx(0.0, 0.0)],
                [cplx(0.0, 0.0), cplx(0.0, 1.0)],
            ],
            ctl,
        ),
        GateKind::SPhaseDagger(q) => state.apply_one_qubit(
            *q,
            [
                [cplx(1.0, 0.0), cplx(0.0, 0.0)],
                [cplx(0.0, 0.0), cplx(0.0, -1.0)],
            ],
            ctl,
        ),
        GateKind::RX(q, a) => {
            let (c, s) = ((a / 2.0).cos(), (a / 2.0).sin());
            state.apply_one_qubit(
                *q,
                [[cplx(c, 0.0), cplx(0.0, -s)], [cplx(0.0, -s), cplx(c, 0.0)]],
                ctl,
            )
        }
        GateKind::RZ(q, a) => {
            let (c, s) = ((a / 2.0).cos(), (a / 2.0).sin());
            state.apply_one_qubit(
                *q,
                [
                    [cplx(c, -s), cplx(0.0, 0.0)],
                    [cplx(0.0, 0.0), cplx(c, s)],
                ],
                ctl,
            )
        }
        GateKind::PauliX(q) => state.apply_one_qubit(
            *q,
            [
                [cplx(0.0, 0.0), cplx(1.0, 0.0)],
                [cplx(1.0, 0.0), cplx(0.0, 0.0)],
            ],
            ctl,
        ),
        GateKind::HamiltonianExp { h, t } => state.apply_exp_h_controlled(h, *t, ctl),
    }
}

/// Run a whole circuit on a state.
pub fn apply_circuit(state: &mut StateVector, circuit: &Circuit) -> Result<()> {
    if circuit.num_qubits() > state.num_qubits() {
        return Err(Error::LengthMismatch {
            left: circuit.num_qubits(),
            right: state.num_qubits(),
        });
    }
    for g in circuit.gates() {
        apply_gate(state, g)?;
    }
    Ok(())
}
