//! Dense statevector storage and gate actions.
//!
//! Qubit 0 is the leftmost character of a basis-state label, i.e. the most
//! significant bit of the amplitude index. Ancillas are appended after the
//! system qubits and therefore occupy the least significant index bits.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::{PauliString, PauliSum};

/// Normalized complex amplitude array over `2^Q` basis states.
#[derive(Debug, Clone)]
pub struct StateVector {
    nqubits: usize,
    amps: Vec<Complex64>,
}

/// Target exp-action truncation: the Taylor tail bound per time slice.
const EXP_TAIL_TOL: f64 = 1e-13;

/// Largest `|t| * ||alpha||_1` per Taylor slice; larger evolutions are split
/// into slices to avoid cancellation between huge intermediate terms.
const EXP_SLICE_NORM: f64 = 0.5;

impl StateVector {
    /// `|0...0>` over `n` qubits.
    pub fn zero(n: usize) -> Self {
        assert!(n >= 1 && n <= 24, "dense statevector supports 1..=24 qubits");
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[0] = Complex64::new(1.0, 0.0);
        StateVector { nqubits: n, amps }
    }

    /// Computational basis state from a binary word; leftmost bit is qubit 0.
    pub fn from_bits(bits: &str) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::EmptyInput("basis-state bitstring"));
        }
        let mut index: usize = 0;
        for c in bits.chars() {
            index <<= 1;
            match c {
                '0' => {}
                '1' => index |= 1,
                other => {
                    return Err(Error::InvalidArgument(format!(
                        "invalid bit character '{other}' in basis-state label"
                    )))
                }
            }
        }
        let mut s = StateVector::zero(bits.len());
        s.amps[0] = Complex64::new(0.0, 0.0);
        s.amps[index] = Complex64::new(1.0, 0.0);
        Ok(s)
    }

    pub fn num_qubits(&self) -> usize {
        self.nqubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    /// Tensor `extra` fresh `|0>` ancillas after the existing qubits.
    pub fn extended(&self, extra: usize) -> StateVector {
        let n = self.nqubits + extra;
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        for (i, a) in self.amps.iter().enumerate() {
            amps[i << extra] = *a;
        }
        StateVector { nqubits: n, amps }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn renormalize(&mut self) {
        let n = self.norm_sqr().sqrt();
        assert!(n > 0.0, "cannot renormalize a zero vector");
        for a in &mut self.amps {
            *a /= n;
        }
    }

    pub fn inner(&self, other: &StateVector) -> Complex64 {
        assert_eq!(self.nqubits, other.nqubits);
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Index bit position of a qubit (qubit 0 is the most significant bit).
    fn bit(&self, qubit: usize) -> usize {
        self.nqubits - 1 - qubit
    }

    fn control_mask(&self, control: Option<usize>) -> Result<usize> {
        match control {
            None => Ok(0),
            Some(c) => {
                if c >= self.nqubits {
                    return Err(Error::QubitOutOfRange {
                        index: c,
                        nqubits: self.nqubits,
                    });
                }
                Ok(1usize << self.bit(c))
            }
        }
    }

    /// Index-space X/Z masks of a Pauli string living on the first qubits of
    /// this register, plus the i^|Y| exponent.
    fn pauli_masks(&self, p: &PauliString) -> Result<(usize, usize, u8)> {
        if p.num_qubits() > self.nqubits {
            return Err(Error::LengthMismatch {
                left: p.num_qubits(),
                right: self.nqubits,
            });
        }
        let mut mx: usize = 0;
        let mut mz: usize = 0;
        for q in 0..p.num_qubits() {
            let bit = 1usize << self.bit(q);
            if (p.x_mask() >> q) & 1 == 1 {
                mx |= bit;
            }
            if (p.z_mask() >> q) & 1 == 1 {
                mz |= bit;
            }
        }
        let ycount = ((p.x_mask() & p.z_mask()).count_ones() % 4) as u8;
        Ok((mx, mz, ycount))
    }

    /// `exp(i * theta * P)` for a Pauli string `P`, optionally controlled.
    ///
    /// Uses `P^2 = I`: `state <- cos(theta) state + i sin(theta) P state`.
    pub fn apply_pauli_rotation(
        &mut self,
        p: &PauliString,
        theta: f64,
        control: Option<usize>,
    ) -> Result<()> {
        let (mx, mz, yc) = self.pauli_masks(p)?;
        let cmask = self.control_mask(control)?;
        if cmask & mx != 0 || cmask & mz != 0 {
            return Err(Error::InvalidArgument(
                "control qubit overlaps rotation support".into(),
            ));
        }
        let c = Complex64::new(theta.cos(), 0.0);
        let is = Complex64::new(0.0, theta.sin());
        let yphase = crate::pauli::phase_unit(yc);
        if mx == 0 {
            for (i, a) in self.amps.iter_mut().enumerate() {
                if i & cmask != cmask {
                    continue;
                }
                let sign = if ((i & mz).count_ones()) % 2 == 0 { 1.0 } else { -1.0 };
                *a *= c + is * yphase * sign;
            }
        } else {
            for i in 0..self.amps.len() {
                let j = i ^ mx;
                if i >= j || i & cmask != cmask {
                    continue;
                }
                let sign_j = if ((j & mz).count_ones()) % 2 == 0 { 1.0 } else { -1.0 };
                let sign_i = if ((i & mz).count_ones()) % 2 == 0 { 1.0 } else { -1.0 };
                let (ai, aj) = (self.amps[i], self.amps[j]);
                self.amps[i] = c * ai + is * yphase * sign_j * aj;
                self.amps[j] = c * aj + is * yphase * sign_i * ai;
            }
        }
        Ok(())
    }

    /// Apply a single-qubit 2x2 unitary, optionally controlled.
    pub fn apply_one_qubit(
        &mut self,
        qubit: usize,
        u: [[Complex64; 2]; 2],
        control: Option<usize>,
    ) -> Result<()> {
        if qubit >= self.nqubits {
            return Err(Error::QubitOutOfRange {
                index: qubit,
                nqubits: self.nqubits,
            });
        }
        if control == Some(qubit) {
            return Err(Error::InvalidArgument("control equals target".into()));
        }
        let cmask = self.control_mask(control)?;
        let tmask = 1usize << self.bit(qubit);
        for i in 0..self.amps.len() {
            if i & tmask != 0 || i & cmask != cmask {
                continue;
            }
            let j = i | tmask;
            if j & cmask != cmask {
                continue;
            }
            let (a0, a1) = (self.amps[i], self.amps[j]);
            self.amps[i] = u[0][0] * a0 + u[0][1] * a1;
            self.amps[j] = u[1][0] * a0 + u[1][1] * a1;
        }
        Ok(())
    }

    /// Accumulate `dst += coeff * P * self` over the (optionally controlled)
    /// subspace.
    fn accumulate_pauli_times(
        &self,
        dst: &mut [Complex64],
        p: &PauliString,
        coeff: Complex64,
        cmask: usize,
    ) -> Result<()> {
        let (mx, mz, yc) = self.pauli_masks(p)?;
        debug_assert_eq!(cmask & mx, 0);
        let base = coeff * crate::pauli::phase_unit(yc);
        for (j, a) in self.amps.iter().enumerate() {
            if j & cmask != cmask {
                continue;
            }
            let sign = if ((j & mz).count_ones()) % 2 == 0 { 1.0 } else { -1.0 };
            dst[j ^ mx] += base * sign * a;
        }
        Ok(())
    }

    /// `exp(i t H)` for a Hermitian Pauli sum, by truncated Taylor action.
    ///
    /// The evolution is split into slices with `|t| ||alpha||_1 <= 0.5` each;
    /// within a slice the series is truncated once the remaining tail bound
    /// `(|t| ||alpha||_1)^(k+1) / (k+1)! * exp(|t| ||alpha||_1)` drops below
    /// 1e-13. The norm drift is checked and removed afterwards.
    pub fn apply_exp_h(&mut self, h: &PauliSum, t: f64) -> Result<()> {
        self.apply_exp_h_controlled(h, t, None)
    }

    /// Controlled variant of [`apply_exp_h`](Self::apply_exp_h): the action
    /// is restricted to the control-set subspace.
    pub fn apply_exp_h_controlled(
        &mut self,
        h: &PauliSum,
        t: f64,
        control: Option<usize>,
    ) -> Result<()> {
        if !h.is_hermitian() {
            return Err(Error::NotHermitian);
        }
        let cmask = self.control_mask(control)?;
        let one_norm = h.coefficient_one_norm();
        if h.is_empty() || t == 0.0 {
            return Ok(());
        }
        let total = t.abs() * one_norm;
        let slices = (total / EXP_SLICE_NORM).ceil().max(1.0) as usize;
        let dt = t / slices as f64;
        let slice_norm = dt.abs() * one_norm;
        let tail_scale = slice_norm.exp();

        let dim = self.amps.len();
        let mut term = vec![Complex64::new(0.0, 0.0); dim];
        let mut next = vec![Complex64::new(0.0, 0.0); dim];
        for _ in 0..slices {
            // term_0 = v restricted to the controlled subspace
            for (i, a) in self.amps.iter().enumerate() {
                term[i] = if i & cmask == cmask { *a } else { Complex64::new(0.0, 0.0) };
            }
            let mut acc: Vec<Complex64> = term.clone();
            let mut bound = 1.0;
            let mut k = 0usize;
            loop {
                k += 1;
                bound *= slice_norm / k as f64;
                if bound * tail_scale < EXP_TAIL_TOL {
                    break;
                }
                // next = (i dt / k) H term
                next.iter_mut().for_each(|a| *a = Complex64::new(0.0, 0.0));
                let scale = Complex64::new(0.0, dt / k as f64);
                let src = StateVector {
                    nqubits: self.nqubits,
                    amps: std::mem::take(&mut term),
                };
                for pt in h.terms() {
                    src.accumulate_pauli_times(&mut next, &pt.string, scale * pt.coeff, cmask)?;
                }
                term = src.amps;
                std::mem::swap(&mut term, &mut next);
                for (a, t) in acc.iter_mut().zip(&term) {
                    *a += t;
                }
                assert!(k < 10_000, "exp action failed to converge");
            }
            for (i, a) in self.amps.iter_mut().enumerate() {
                if i & cmask == cmask {
                    *a = acc[i];
                }
            }
        }
        let drift = (self.norm_sqr().sqrt() - 1.0).abs();
        assert!(drift <= 1e-8, "exp action norm drift {drift} too large");
        self.renormalize();
        Ok(())
    }

    /// Exact `<state| H |state>` for a Hermitian Pauli sum.
    pub fn expectation(&self, h: &PauliSum) -> Result<f64> {
        if !h.is_hermitian() {
            return Err(Error::NotHermitian);
        }
        let dim = self.amps.len();
        let mut hv = vec![Complex64::new(0.0, 0.0); dim];
        for pt in h.terms() {
            self.accumulate_pauli_times(&mut hv, &pt.string, pt.coeff, 0)?;
        }
        let val: Complex64 = self
            .amps
            .iter()
            .zip(&hv)
            .map(|(a, b)| a.conj() * b)
            .sum();
        Ok(val.re)
    }
}
