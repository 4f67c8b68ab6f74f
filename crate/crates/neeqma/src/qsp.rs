//! Shifted signal operators, QSP circuit synthesis from phase-angle lists,
//! the one-qubit classical evaluator, the spectral equation-to-fit and the
//! polynomial-vs-sign error model.
//!
//! Phase angles are consumed as input data; generating them is someone
//! else's job. Model eigenvalues are normalized so that one unit of
//! eigenvalue advances the signal phase by pi/2, matching the default
//! simulation time `t = pi / (2 |lambda_max|)`.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fitting::{fit_nonlinear, Bounds, Params, SweepRow, SweepSeries};
use crate::pauli::{PauliString, PauliSum, PauliTerm};
use crate::sim::{
    hadamard_test_estimate, substream_seed, Circuit, GateKind, Part, Shots, StateVector,
};
use crate::trotter::build_lie_trotter;

/// Ordered phase-angle lists keyed by polynomial degree; degree `d` carries
/// exactly `d + 1` angles.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseAngleSet {
    lists: BTreeMap<usize, Vec<f64>>,
}

impl PhaseAngleSet {
    pub fn degrees(&self) -> Vec<usize> {
        self.lists.keys().copied().collect()
    }

    pub fn angles(&self, degree: usize) -> Result<&[f64]> {
        self.lists
            .get(&degree)
            .map(|v| v.as_slice())
            .ok_or(Error::MissingDegree(degree))
    }

    pub fn is_empty(&self) -> bool {
        self.lists.is_empty()
    }
}

/// Parse a phase-angle document: each data line is
/// `<degree> <phi_0> ... <phi_degree>`, `#` starts a comment.
pub fn parse_phase_angles(text: &str) -> Result<PhaseAngleSet> {
    let mut lists: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let d_tok = tokens.next().expect("non-empty line");
        let degree: usize = d_tok.parse().map_err(|_| Error::Parse {
            line: line_no,
            msg: format!("invalid degree '{d_tok}'"),
        })?;
        let angles: Vec<f64> = tokens
            .map(|t| {
                t.parse().map_err(|_| Error::Parse {
                    line: line_no,
                    msg: format!("invalid angle '{t}'"),
                })
            })
            .collect::<Result<_>>()?;
        if angles.len() != degree + 1 {
            return Err(Error::Parse {
                line: line_no,
                msg: format!(
                    "expected {} angles for degree {degree}, found {}",
                    degree + 1,
                    angles.len()
                ),
            });
        }
        if lists.insert(degree, angles).is_some() {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("duplicate degree {degree}"),
            });
        }
    }
    if lists.is_empty() {
        return Err(Error::EmptyInput("phase-angle document"));
    }
    Ok(PhaseAngleSet { lists })
}

/// Ancilla shift rotation angle from the normalized eigenvalue shift.
pub fn delta_from_shift(shift: f64) -> f64 {
    FRAC_PI_2 * shift
}

/// How the signal operator realizes `exp(i t H (x) Z)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignalBackend {
    Exact,
    Trotter(u32),
}

/// `H (x) Z`: every term picks up a Z on the signal ancilla (the qubit
/// after the system register).
fn tensor_z(h: &PauliSum) -> PauliSum {
    let nq = h.num_qubits() + 1;
    let terms = h
        .terms()
        .iter()
        .map(|t| {
            let mut s = PauliString::identity(nq);
            for q in 0..h.num_qubits() {
                s.set_axis(q, t.string.axis(q));
            }
            s.set_axis(nq - 1, crate::pauli::Axis::Z);
            PauliTerm::new(t.coeff, s)
        })
        .collect();
    PauliSum::from_terms(nq, terms)
}

/// Append the shifted signal operator `W_Z = exp(i t H (x) Z) e^{i delta Z}`
/// to a circuit over `Q + 1` qubits.
fn push_signal_operator(
    circuit: &mut Circuit,
    h: &Arc<PauliSum>,
    hz: &Arc<PauliSum>,
    t: f64,
    delta: f64,
    backend: SignalBackend,
) -> Result<()> {
    let anc = h.num_qubits();
    match backend {
        SignalBackend::Exact => {
            circuit.push_kind(GateKind::HamiltonianExp {
                h: Arc::clone(hz),
                t,
            })?;
        }
        SignalBackend::Trotter(0) => {
            return Err(Error::InvalidArgument(
                "Trotter backend needs n >= 1".into(),
            ));
        }
        SignalBackend::Trotter(n) => {
            circuit.extend(&build_lie_trotter(hz, t, n)?)?;
        }
    }
    // e^{i delta Z} on the ancilla
    circuit.push_kind(GateKind::RZ(anc, -2.0 * delta))?;
    Ok(())
}

/// Apply the shifted signal operator to a state whose last qubit is the
/// signal ancilla.
pub fn apply_signal_operator(
    state: &mut StateVector,
    h: &PauliSum,
    t: f64,
    delta: f64,
    backend: SignalBackend,
) -> Result<()> {
    if state.num_qubits() != h.num_qubits() + 1 {
        return Err(Error::LengthMismatch {
            left: state.num_qubits(),
            right: h.num_qubits() + 1,
        });
    }
    let h = Arc::new(h.clone());
    let hz = Arc::new(tensor_z(&h));
    let mut c = Circuit::new(h.num_qubits() + 1);
    push_signal_operator(&mut c, &h, &hz, t, delta, backend)?;
    crate::sim::apply_circuit(state, &c)
}

/// Assemble the QSP circuit for one phase-angle list over `Q + 1` qubits:
/// `S_X(phi_0)` on the signal ancilla, then `d` repetitions of
/// `{W_Z, S_X(phi_m)}`, with `S_X(theta) = R_X(-2 theta)`.
pub fn build_qsp_circuit(
    angles: &[f64],
    h: &PauliSum,
    t: f64,
    delta: f64,
    backend: SignalBackend,
) -> Result<Circuit> {
    if angles.is_empty() {
        return Err(Error::EmptyInput("phase-angle list"));
    }
    let anc = h.num_qubits();
    let hs = Arc::new(h.clone());
    let hz = Arc::new(tensor_z(h));
    let mut c = Circuit::new(anc + 1);
    c.push_kind(GateKind::RX(anc, -2.0 * angles[0]))?;
    for phi in &angles[1..] {
        push_signal_operator(&mut c, &hs, &hz, t, delta, backend)?;
        c.push_kind(GateKind::RX(anc, -2.0 * phi))?;
    }
    Ok(c)
}

/// Sweep the QSP real-part observable over every degree in the angle set.
///
/// The initial state is `psi (x) |0>`; the signal ancilla and the
/// Hadamard-test ancilla are added internally.
pub fn sweep_qsp(
    h: &PauliSum,
    t: f64,
    delta: f64,
    psi: &StateVector,
    angleset: &PhaseAngleSet,
    shots: Shots,
    seed: u64,
) -> Result<SweepSeries> {
    if angleset.is_empty() {
        return Err(Error::EmptyInput("phase-angle set"));
    }
    if psi.num_qubits() != h.num_qubits() {
        return Err(Error::LengthMismatch {
            left: psi.num_qubits(),
            right: h.num_qubits(),
        });
    }
    let extended = psi.extended(1);
    let degrees = angleset.degrees();
    let rows: Result<Vec<SweepRow>> = degrees
        .par_iter()
        .enumerate()
        .map(|(i, &d)| {
            let angles = angleset.angles(d)?;
            let circuit = build_qsp_circuit(angles, h, t, delta, SignalBackend::Exact)?;
            let point_seed = substream_seed(seed, i as u64);
            let (value, stderr) =
                hadamard_test_estimate(&extended, &circuit, Part::Re, shots, point_seed)?;
            Ok(SweepRow {
                param: d as u32,
                value,
                stderr,
                shots,
            })
        })
        .collect();
    SweepSeries::new("qsp", rows?)
}

fn mat2_mul(a: [[Complex64; 2]; 2], b: [[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

fn sx(phi: f64) -> [[Complex64; 2]; 2] {
    // e^{i phi X}
    let (c, s) = (phi.cos(), phi.sin());
    [
        [Complex64::new(c, 0.0), Complex64::new(0.0, s)],
        [Complex64::new(0.0, s), Complex64::new(c, 0.0)],
    ]
}

fn wz(theta: f64) -> [[Complex64; 2]; 2] {
    // e^{i theta Z}
    [
        [Complex64::new(0.0, theta).exp(), Complex64::new(0.0, 0.0)],
        [Complex64::new(0.0, 0.0), Complex64::new(0.0, -theta).exp()],
    ]
}

/// One-qubit QSP evaluation: the real part of the `<0|...|0>` element of the
/// angle product with scalar signal phase `t x + delta`. This is the
/// implemented polynomial evaluated at `cos(t x + delta)`.
pub fn one_qubit_qsp_eval(angles: &[f64], x: f64, t: f64, delta: f64) -> Result<f64> {
    if angles.is_empty() {
        return Err(Error::EmptyInput("phase-angle list"));
    }
    let theta = t * x + delta;
    let mut u = sx(angles[0]);
    for phi in &angles[1..] {
        u = mat2_mul(sx(*phi), mat2_mul(wz(theta), u));
    }
    Ok(u[0][0].re)
}

/// Extracted QSP convergence model: up to `m` (normalized eigenvalue,
/// overlap weight) pairs plus the shift and the sweep's simulation time.
#[derive(Debug, Clone, PartialEq)]
pub struct QspErrorModel {
    pub pairs: Vec<(f64, f64)>,
    pub shift: f64,
    pub t: f64,
}

impl QspErrorModel {
    pub fn new(pairs: Vec<(f64, f64)>, shift: f64, t: f64) -> Result<Self> {
        let total: f64 = pairs.iter().map(|(_, a)| a).sum();
        if total > 1.0 + 1e-9 {
            return Err(Error::InvalidArgument(
                "overlap weights must sum to at most 1".into(),
            ));
        }
        for (l, a) in &pairs {
            if *a < 0.0 {
                return Err(Error::InvalidArgument("negative overlap weight".into()));
            }
            if !(-1.0..=1.0).contains(l) {
                return Err(Error::InvalidArgument(
                    "normalized eigenvalue out of [-1, 1]".into(),
                ));
            }
        }
        Ok(QspErrorModel { pairs, shift, t })
    }

    fn delta(&self) -> f64 {
        delta_from_shift(self.shift)
    }
}

/// The spectral equation-to-fit: the overlap-weighted sum of one-qubit QSP
/// evaluations at the model's normalized eigenvalues.
pub fn qsp_fit_eq(d: usize, model: &QspErrorModel, angleset: &PhaseAngleSet) -> Result<f64> {
    let angles = angleset.angles(d)?;
    let delta = model.delta();
    let mut acc = 0.0;
    for (lambda, alpha) in &model.pairs {
        acc += alpha * one_qubit_qsp_eval(angles, *lambda, FRAC_PI_2, delta)?;
    }
    Ok(acc)
}

fn sign(x: f64) -> f64 {
    if x >= 0.0 {
        1.0
    } else {
        -1.0
    }
}

/// Predicted polynomial-vs-target distance at degree `d`:
/// `|sum_x alpha_x (sign(cos(arg(x))) - poly(d, cos(arg(x))))|` with the
/// shared argument `arg(x) = (pi/2) x + delta`.
pub fn qsp_err_model(model: &QspErrorModel, d: usize, angleset: &PhaseAngleSet) -> Result<f64> {
    let angles = angleset.angles(d)?;
    let delta = model.delta();
    let mut acc = 0.0;
    for (lambda, alpha) in &model.pairs {
        let arg = FRAC_PI_2 * lambda + delta;
        let target = sign(arg.cos());
        let poly = one_qubit_qsp_eval(angles, *lambda, FRAC_PI_2, delta)?;
        acc += alpha * (target - poly);
    }
    Ok(acc.abs())
}

/// Stick-breaking map from unconstrained weights in [0, 1] to overlap
/// weights with `alpha >= 0` and `sum alpha <= 1`.
fn weights_from_sticks(sticks: &[f64]) -> Vec<f64> {
    let mut remaining = 1.0;
    sticks
        .iter()
        .map(|u| {
            let a = u * remaining;
            remaining -= a;
            a
        })
        .collect()
}

fn sticks_from_weights(weights: &[f64]) -> Vec<f64> {
    let mut remaining = 1.0f64;
    weights
        .iter()
        .map(|a| {
            let u = if remaining > 1e-12 { (a / remaining).clamp(0.0, 1.0) } else { 0.0 };
            remaining -= a;
            u
        })
        .collect()
}

/// Fit the spectral model to a swept QSP series by constrained
/// derivative-free minimization of the L1 cost, multi-started from seeded
/// perturbations. Returns the best model and its cost.
#[allow(clippy::too_many_arguments)]
pub fn fit_qsp(
    series: &SweepSeries,
    angleset: &PhaseAngleSet,
    m: usize,
    t: f64,
    delta: f64,
    seed: u64,
    restarts: usize,
    init: Option<&QspErrorModel>,
) -> Result<(QspErrorModel, f64)> {
    if m == 0 {
        return Err(Error::InvalidArgument(
            "model size m must be >= 1".into(),
        ));
    }
    if series.rows().len() < 2 * m {
        return Err(Error::Underdetermined {
            needed: 2 * m,
            got: series.rows().len(),
        });
    }
    let shift = delta / FRAC_PI_2;

    let mut init_params = Params::new();
    match init {
        Some(model) => {
            if model.pairs.len() != m {
                return Err(Error::InvalidArgument(
                    "initial model size does not match m".into(),
                ));
            }
            let weights: Vec<f64> = model.pairs.iter().map(|(_, a)| *a).collect();
            let sticks = sticks_from_weights(&weights);
            for (i, ((lambda, _), u)) in model.pairs.iter().zip(&sticks).enumerate() {
                init_params.insert(format!("lam{i}"), *lambda);
                init_params.insert(format!("w{i}"), *u);
            }
        }
        None => {
            // spread eigenvalue guesses over the normalized interval
            for i in 0..m {
                let frac = (i as f64 + 0.5) / m as f64;
                init_params.insert(format!("lam{i}"), -1.0 + 2.0 * frac);
                init_params.insert(format!("w{i}"), 0.5);
            }
        }
    }
    let mut bounds = Bounds::new();
    for i in 0..m {
        bounds.insert(format!("lam{i}"), (-1.0, 1.0));
        bounds.insert(format!("w{i}"), (0.0, 1.0));
    }

    let model_of = |values: &Params| -> Result<QspErrorModel> {
        let mut lambdas = Vec::with_capacity(m);
        let mut sticks = Vec::with_capacity(m);
        for i in 0..m {
            lambdas.push(
                *values
                    .get(&format!("lam{i}"))
                    .ok_or_else(|| Error::MissingParam(format!("lam{i}")))?,
            );
            sticks.push(
                *values
                    .get(&format!("w{i}"))
                    .ok_or_else(|| Error::MissingParam(format!("w{i}")))?,
            );
        }
        let weights = weights_from_sticks(&sticks);
        QspErrorModel::new(lambdas.into_iter().zip(weights).collect(), shift, t)
    };

    let eq = |d: u32, values: &Params| -> Result<f64> {
        qsp_fit_eq(d as usize, &model_of(values)?, angleset)
    };
    let fit = fit_nonlinear(series, eq, &init_params, &bounds, seed, restarts)?;
    let mut model = model_of(&fit.params)?;
    model
        .pairs
        .sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());
    Ok((model, fit.cost))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::eigen_overlaps;
    use crate::pauli::parse_hamiltonian;

    #[test]
    fn parse_examples() {
        let set = parse_phase_angles("3 0.1 0.2 0.3 0.4").unwrap();
        assert_eq!(set.degrees(), vec![3]);
        assert_eq!(set.angles(3).unwrap(), &[0.1, 0.2, 0.3, 0.4]);

        assert!(matches!(
            parse_phase_angles("3 0.1 0.2"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_phase_angles("1 0.1 0.2\n1 0.3 0.4"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(parse_phase_angles("# nothing\n").is_err());
        assert!(set.angles(5).is_err());
    }

    #[test]
    fn shift_to_rotation_angle() {
        assert!((delta_from_shift(-0.5) - (-std::f64::consts::FRAC_PI_4)).abs() < 1e-15);
    }

    #[test]
    fn signal_operator_on_eigenstate() {
        // h = Z on one qubit; |0> has eigenvalue +1
        let h = parse_hamiltonian("1.0 Z").unwrap();
        let t = 0.6;
        let delta = delta_from_shift(-0.5);
        let mut state = StateVector::from_bits("00").unwrap(); // system + ancilla
        apply_signal_operator(&mut state, &h, t, delta, SignalBackend::Exact).unwrap();
        let expected = Complex64::new(0.0, t + delta).exp();
        assert!((state.amplitudes()[0] - expected).norm() < 1e-12);
    }

    #[test]
    fn signal_operator_on_empty_hamiltonian_is_ancilla_rotation() {
        let h = PauliSum::from_terms(1, vec![]);
        let delta = 0.37;
        let mut state = StateVector::from_bits("01").unwrap(); // ancilla |1>
        apply_signal_operator(&mut state, &h, 1.0, delta, SignalBackend::Exact).unwrap();
        let expected = Complex64::new(0.0, -delta).exp();
        assert!((state.amplitudes()[1] - expected).norm() < 1e-12);
    }

    #[test]
    fn all_zero_angles_give_chebyshev_phase() {
        let h = parse_hamiltonian("1.0 Z").unwrap();
        let t = 0.45;
        let delta = delta_from_shift(-0.5);
        let d = 5;
        let angles = vec![0.0; d + 1];
        let c = build_qsp_circuit(&angles, &h, t, delta, SignalBackend::Exact).unwrap();
        let psi = StateVector::from_bits("00").unwrap();
        let amp = {
            let mut s = psi.clone();
            crate::sim::apply_circuit(&mut s, &c).unwrap();
            psi.inner(&s)
        };
        let theta = d as f64 * (t + delta);
        assert!((amp.re - theta.cos()).abs() < 1e-10);

        // and the classical evaluator agrees
        let v = one_qubit_qsp_eval(&angles, 1.0, t, delta).unwrap();
        assert!((v - theta.cos()).abs() < 1e-12);
    }

    #[test]
    fn degree_zero_is_a_bare_rotation() {
        let angles = [0.8];
        let v = one_qubit_qsp_eval(&angles, 0.3, 1.0, 0.0).unwrap();
        assert!((v - 0.8f64.cos()).abs() < 1e-12);
    }

    #[test]
    fn evaluator_is_bounded() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let d = rng.gen_range(0..8);
            let angles: Vec<f64> = (0..=d).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let x = rng.gen_range(-1.0..1.0);
            let v = one_qubit_qsp_eval(&angles, x, FRAC_PI_2, -0.3).unwrap();
            assert!(v.abs() <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn sweep_matches_eigen_weighted_sum() {
        let h = parse_hamiltonian("0.4 XZ\n-0.3 ZX\n0.25 YI").unwrap();
        let psi = StateVector::from_bits("01").unwrap();
        let overlaps = eigen_overlaps(&h, &psi).unwrap();
        let t = 0.7;
        let delta = delta_from_shift(-0.5);
        let set = parse_phase_angles("2 0.2 -0.4 0.1\n3 0.3 0.1 -0.2 0.05").unwrap();
        let series = sweep_qsp(&h, t, delta, &psi, &set, Shots::Exact, 0).unwrap();
        assert_eq!(series.rows().len(), 2);
        for row in series.rows() {
            let angles = set.angles(row.param as usize).unwrap();
            let mut expected = 0.0;
            for (lambda, alpha) in &overlaps {
                expected += alpha * one_qubit_qsp_eval(angles, *lambda, t, delta).unwrap();
            }
            assert!(
                (row.value - expected).abs() <= 1e-8,
                "degree {} diff {}",
                row.param,
                (row.value - expected).abs()
            );
        }
    }

    #[test]
    fn trotter_backend_converges_to_exact() {
        let h = parse_hamiltonian("0.5 XZ\n-0.35 ZX").unwrap();
        let t = 1.2;
        let delta = delta_from_shift(-0.5);
        let angles = [0.3, -0.2, 0.15, 0.4];
        let psi = StateVector::from_bits("00").unwrap().extended(1);
        let run = |backend| {
            let c = build_qsp_circuit(&angles, &h, t, delta, backend).unwrap();
            let mut s = psi.clone();
            crate::sim::apply_circuit(&mut s, &c).unwrap();
            s
        };
        let exact = run(SignalBackend::Exact);
        let mut prev = f64::INFINITY;
        for n in [16, 64, 256] {
            let approx = run(SignalBackend::Trotter(n));
            let diff: f64 = exact
                .amplitudes()
                .iter()
                .zip(approx.amplitudes())
                .map(|(a, b)| (a - b).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(diff <= prev + 1e-12);
            prev = diff;
        }
        assert!(prev <= 1e-6, "n = 256 residual {prev}");
        assert!(build_qsp_circuit(&angles, &h, t, delta, SignalBackend::Trotter(0)).is_err());
    }

    #[test]
    fn fit_eq_is_linear_in_weights() {
        let set = parse_phase_angles("3 0.3 0.1 -0.2 0.05").unwrap();
        let m1 = QspErrorModel::new(vec![(0.4, 0.3)], -0.5, 1.0).unwrap();
        let m2 = QspErrorModel::new(vec![(0.4, 0.6)], -0.5, 1.0).unwrap();
        let v1 = qsp_fit_eq(3, &m1, &set).unwrap();
        let v2 = qsp_fit_eq(3, &m2, &set).unwrap();
        assert!((v2 - 2.0 * v1).abs() < 1e-12);

        // single full-weight pair reduces to the plain evaluator
        let m = QspErrorModel::new(vec![(-0.3, 1.0)], -0.5, 1.0).unwrap();
        let direct =
            one_qubit_qsp_eval(set.angles(3).unwrap(), -0.3, FRAC_PI_2, delta_from_shift(-0.5))
                .unwrap();
        assert!((qsp_fit_eq(3, &m, &set).unwrap() - direct).abs() < 1e-12);
    }

    #[test]
    fn err_model_single_pair() {
        let set = parse_phase_angles("1 0.0 0.0").unwrap();
        let model = QspErrorModel::new(vec![(0.5, 0.8)], -0.5, 1.0).unwrap();
        let delta = delta_from_shift(-0.5);
        let arg = FRAC_PI_2 * 0.5 + delta;
        let poly = one_qubit_qsp_eval(&[0.0, 0.0], 0.5, FRAC_PI_2, delta).unwrap();
        let expected = (0.8 * (1.0 - poly)).abs();
        assert!((qsp_err_model(&model, 1, &set).unwrap() - expected).abs() < 1e-12);
        assert!(arg.cos() > 0.0);
    }

    #[test]
    fn model_validation() {
        assert!(QspErrorModel::new(vec![(0.2, 0.7), (0.1, 0.6)], -0.5, 1.0).is_err());
        assert!(QspErrorModel::new(vec![(0.2, -0.1)], -0.5, 1.0).is_err());
        assert!(QspErrorModel::new(vec![(1.4, 0.1)], -0.5, 1.0).is_err());
    }

    #[test]
    fn stick_breaking_roundtrip() {
        let weights = [0.5, 0.3, 0.1];
        let sticks = sticks_from_weights(&weights);
        let back = weights_from_sticks(&sticks);
        for (a, b) in weights.iter().zip(&back) {
            assert!((a - b).abs() < 1e-12);
        }
        let total: f64 = weights_from_sticks(&[1.0, 1.0, 1.0]).iter().sum();
        assert!(total <= 1.0 + 1e-12);
    }
}
