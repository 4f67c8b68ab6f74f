//! Finite-shot and exact estimation of circuit observables.
//!
//! Only the final measurement distribution is sampled (the experiments this
//! models are sampling-noise-only). All randomness flows through a named,
//! seedable generator so identical seeds give identical estimates.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use crate::error::{Error, Result};
use crate::pauli::{Axis, PauliSum};
use crate::sim::circuit::{apply_circuit, apply_gate, Circuit, Gate, GateKind};
use crate::sim::state::StateVector;

/// Shot budget for an estimator: exact expectation or a finite count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shots {
    Exact,
    Count(u64),
}

impl Shots {
    pub fn is_exact(&self) -> bool {
        matches!(self, Shots::Exact)
    }
}

impl std::fmt::Display for Shots {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Shots::Exact => write!(f, "exact"),
            Shots::Count(n) => write!(f, "{n}"),
        }
    }
}

impl std::str::FromStr for Shots {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("exact") {
            return Ok(Shots::Exact);
        }
        let n: u64 = s
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("invalid shot count '{s}'")))?;
        if n == 0 {
            return Err(Error::InvalidShots);
        }
        Ok(Shots::Count(n))
    }
}

/// Which component of `<psi|U|psi>` a Hadamard test extracts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Part {
    Re,
    Im,
}

/// SplitMix64-style mix of a base seed and a substream index, so parallel
/// sweep points draw from independent, reproducible streams.
pub fn substream_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn draw_binomial(rng: &mut ChaCha8Rng, shots: u64, p: f64) -> f64 {
    let p = p.clamp(0.0, 1.0);
    let bin = Binomial::new(shots, p).expect("probability in [0,1]");
    bin.sample(rng) as f64 / shots as f64
}

/// Ancilla-0 probability of the Hadamard test for `U` on `psi`.
fn hadamard_test_p0(psi: &StateVector, u: &Circuit, part: Part) -> Result<f64> {
    if u.num_qubits() != psi.num_qubits() {
        return Err(Error::LengthMismatch {
            left: u.num_qubits(),
            right: psi.num_qubits(),
        });
    }
    let anc = psi.num_qubits();
    let mut state = psi.extended(1);
    apply_gate(&mut state, &Gate::new(GateKind::Hadamard(anc)))?;
    let controlled = u.controlled_on(anc, anc + 1)?;
    apply_circuit(&mut state, &controlled)?;
    if part == Part::Im {
        apply_gate(&mut state, &Gate::new(GateKind::SPhaseDagger(anc)))?;
    }
    apply_gate(&mut state, &Gate::new(GateKind::Hadamard(anc)))?;
    // ancilla is the last qubit, i.e. the least significant index bit
    let p0 = state
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(i, _)| i & 1 == 0)
        .map(|(_, a)| a.norm_sqr())
        .sum::<f64>();
    Ok(p0)
}

/// Hadamard-test estimate of `Re` or `Im` of `<psi|U|psi>`.
///
/// Every gate of `u` is controlled on a fresh ancilla; the `Im` variant
/// inserts an S-dagger on the ancilla before the closing Hadamard. Returns
/// `(estimate, stderr)`; at `Shots::Exact` the estimate is the exact
/// component and stderr is 0.
pub fn hadamard_test_estimate(
    psi: &StateVector,
    u: &Circuit,
    part: Part,
    shots: Shots,
    seed: u64,
) -> Result<(f64, f64)> {
    let p0 = hadamard_test_p0(psi, u, part)?;
    match shots {
        Shots::Exact => Ok((2.0 * p0 - 1.0, 0.0)),
        Shots::Count(0) => Err(Error::InvalidShots),
        Shots::Count(n) => {
            let mut rng = rng_for(seed);
            let p_hat = draw_binomial(&mut rng, n, p0);
            let est = 2.0 * p_hat - 1.0;
            let stderr = 2.0 * (p_hat * (1.0 - p_hat) / n as f64).sqrt();
            Ok((est, stderr))
        }
    }
}

/// Probability of returning to the initial computational basis state after
/// running `circuit`; finite shots give a binomial estimate.
pub fn return_probability_estimate(
    psi0: &StateVector,
    circuit: &Circuit,
    shots: Shots,
    seed: u64,
) -> Result<f64> {
    let nonzero: Vec<usize> = psi0
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(_, a)| a.norm_sqr() > 1e-12)
        .map(|(i, _)| i)
        .collect();
    if nonzero.len() != 1 {
        return Err(Error::NotBasisState);
    }
    let index = nonzero[0];
    let mut state = psi0.clone();
    apply_circuit(&mut state, circuit)?;
    let p = state.amplitudes()[index].norm_sqr();
    match shots {
        Shots::Exact => Ok(p),
        Shots::Count(0) => Err(Error::InvalidShots),
        Shots::Count(n) => {
            let mut rng = rng_for(seed);
            Ok(draw_binomial(&mut rng, n, p))
        }
    }
}

/// Rotate one Pauli-string factor into the computational basis for
/// measurement: X needs H, Y needs S-dagger then H.
fn basis_rotation(state: &mut StateVector, term: &crate::pauli::PauliTerm) -> Result<usize> {
    let mut support_mask = 0usize;
    let nq = state.num_qubits();
    for q in 0..term.string.num_qubits() {
        let axis = term.string.axis(q);
        if axis == Axis::I {
            continue;
        }
        support_mask |= 1usize << (nq - 1 - q);
        match axis {
            Axis::X => apply_gate(state, &Gate::new(GateKind::Hadamard(q)))?,
            Axis::Y => {
                apply_gate(state, &Gate::new(GateKind::SPhaseDagger(q)))?;
                apply_gate(state, &Gate::new(GateKind::Hadamard(q)))?;
            }
            _ => {}
        }
    }
    Ok(support_mask)
}

/// `<state| H |state>` for a Hermitian Pauli sum, with finite shots split
/// evenly across terms and each term estimated by basis-rotated bitstring
/// parity sampling. Returns `(estimate, stderr)`.
pub fn pauli_sum_expectation(
    state: &StateVector,
    h: &PauliSum,
    shots: Shots,
    seed: u64,
) -> Result<(f64, f64)> {
    if !h.is_hermitian() {
        return Err(Error::NotHermitian);
    }
    match shots {
        Shots::Exact => Ok((state.expectation(h)?, 0.0)),
        Shots::Count(0) => Err(Error::InvalidShots),
        Shots::Count(n) => {
            let nterms = h.terms().len().max(1) as u64;
            let per_term = (n / nterms).max(1);
            let mut rng = rng_for(seed);
            let mut total = 0.0;
            let mut var = 0.0;
            for term in h.terms() {
                let coeff = term.coeff.re;
                if term.string.is_identity() {
                    total += coeff;
                    continue;
                }
                let mut rotated = state.clone();
                let support = basis_rotation(&mut rotated, term)?;
                let p_even: f64 = rotated
                    .amplitudes()
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| (i & support).count_ones() % 2 == 0)
                    .map(|(_, a)| a.norm_sqr())
                    .sum();
                let p_hat = draw_binomial(&mut rng, per_term, p_even);
                let est = 2.0 * p_hat - 1.0;
                let se = 2.0 * (p_hat * (1.0 - p_hat) / per_term as f64).sqrt();
                total += coeff * est;
                var += (coeff * se).powi(2);
            }
            Ok((total, var.sqrt()))
        }
    }
}

/// Exact `Re`/`Im` of `<psi|U|psi>` computed densely from the final state,
/// without the ancilla construction (used as an independent cross-check).
pub fn bra_u_ket(psi: &StateVector, u: &Circuit) -> Result<Complex64> {
    let mut evolved = psi.clone();
    apply_circuit(&mut evolved, u)?;
    Ok(psi.inner(&evolved))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::{parse_hamiltonian, PauliString};

    #[test]
    fn identity_circuit_real_part_is_one() {
        let psi = StateVector::from_bits("00").unwrap();
        let u = Circuit::new(2);
        let (est, se) = hadamard_test_estimate(&psi, &u, Part::Re, Shots::Exact, 0).unwrap();
        assert!((est - 1.0).abs() < 1e-12);
        assert_eq!(se, 0.0);
    }

    #[test]
    fn z_rotation_components() {
        let theta = 0.7;
        let psi = StateVector::from_bits("0").unwrap();
        let mut u = Circuit::new(1);
        u.push_kind(GateKind::PauliRotation {
            string: PauliString::parse("Z").unwrap(),
            angle: theta,
        })
        .unwrap();
        let (re, _) = hadamard_test_estimate(&psi, &u, Part::Re, Shots::Exact, 0).unwrap();
        let (im, _) = hadamard_test_estimate(&psi, &u, Part::Im, Shots::Exact, 0).unwrap();
        assert!((re - theta.cos()).abs() < 1e-12);
        assert!((im - theta.sin()).abs() < 1e-12);
    }

    #[test]
    fn finite_shots_are_deterministic_per_seed() {
        let psi = StateVector::from_bits("0").unwrap();
        let mut u = Circuit::new(1);
        u.push_kind(GateKind::PauliRotation {
            string: PauliString::parse("Z").unwrap(),
            angle: 0.7,
        })
        .unwrap();
        let a = hadamard_test_estimate(&psi, &u, Part::Re, Shots::Count(10_000), 7).unwrap();
        let b = hadamard_test_estimate(&psi, &u, Part::Re, Shots::Count(10_000), 7).unwrap();
        let c = hadamard_test_estimate(&psi, &u, Part::Re, Shots::Count(10_000), 8).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!(hadamard_test_estimate(&psi, &u, Part::Re, Shots::Count(0), 7).is_err());
    }

    #[test]
    fn return_probability_edges() {
        let psi = StateVector::from_bits("01").unwrap();
        let empty = Circuit::new(2);
        assert!(
            (return_probability_estimate(&psi, &empty, Shots::Exact, 0).unwrap() - 1.0).abs()
                < 1e-12
        );
        let mut flip = Circuit::new(2);
        flip.push_kind(GateKind::PauliX(0)).unwrap();
        assert!(return_probability_estimate(&psi, &flip, Shots::Exact, 0).unwrap() < 1e-12);

        let mut plus = StateVector::from_bits("0").unwrap();
        apply_gate(&mut plus, &Gate::new(GateKind::Hadamard(0))).unwrap();
        assert!(matches!(
            return_probability_estimate(&plus, &Circuit::new(1), Shots::Exact, 0),
            Err(Error::NotBasisState)
        ));
    }

    #[test]
    fn expectation_exact_matches_dense_quadratic_form() {
        let h = parse_hamiltonian("0.4 XY\n-0.2 ZZ\n0.9 YI").unwrap();
        let mut psi = StateVector::from_bits("01").unwrap();
        psi.apply_exp_h(&parse_hamiltonian("0.3 XX\n0.5 ZI").unwrap(), 0.9)
            .unwrap();
        let (est, se) = pauli_sum_expectation(&psi, &h, Shots::Exact, 0).unwrap();
        assert_eq!(se, 0.0);
        assert!((est - psi.expectation(&h).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn expectation_rejects_non_hermitian() {
        use crate::pauli::{PauliSum, PauliTerm};
        let h = PauliSum::from_terms(
            1,
            vec![PauliTerm::new(
                Complex64::new(0.0, 1.0),
                PauliString::parse("X").unwrap(),
            )],
        );
        let psi = StateVector::from_bits("0").unwrap();
        assert!(matches!(
            pauli_sum_expectation(&psi, &h, Shots::Exact, 0),
            Err(Error::NotHermitian)
        ));
    }
}
