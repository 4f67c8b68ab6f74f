//! Lie-Trotter circuit synthesis, observable sweeps over the Trotter
//! number, the matching equations-to-fit and the extracted error model
//! with its time rescaling.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fitting::{
    cost, fit_linear_basis, fit_nonlinear, Bounds, FitResult, Params, SweepRow, SweepSeries,
};
use crate::pauli::PauliSum;
use crate::sim::{
    apply_circuit, hadamard_test_estimate, pauli_sum_expectation, return_probability_estimate,
    substream_seed, Circuit, GateKind, Part, Shots, StateVector,
};

/// Default Trotter-number grid: log-spaced for good 1/n vs 1/n^2 leverage.
pub const DEFAULT_GRID: [u32; 9] = [2, 3, 4, 6, 8, 12, 16, 24, 32];

/// Default shot budget for the interferometric real/imaginary observables.
pub const DEFAULT_SHOTS_PARTS: u64 = 100_000_000;

/// Default shot budget for every other observable.
pub const DEFAULT_SHOTS: u64 = 100_000;

/// Which convergence observable a Trotter sweep measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObservableKind {
    RealPart,
    ImagPart,
    PhaseSquared,
    /// Return probability against the circuit at Trotter number `n + j`.
    Fidelity(u32),
    Energy,
}

impl ObservableKind {
    pub fn tag(&self) -> String {
        match self {
            ObservableKind::RealPart => "real".into(),
            ObservableKind::ImagPart => "imag".into(),
            ObservableKind::PhaseSquared => "phase2".into(),
            ObservableKind::Fidelity(j) => format!("fidelity:{j}"),
            ObservableKind::Energy => "energy".into(),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let kind = match s {
            "real" => ObservableKind::RealPart,
            "imag" => ObservableKind::ImagPart,
            "phase2" => ObservableKind::PhaseSquared,
            "energy" => ObservableKind::Energy,
            "fidelity" => ObservableKind::Fidelity(1),
            other => match other.strip_prefix("fidelity:") {
                Some(j) => {
                    let j: u32 = j.parse().map_err(|_| {
                        Error::InvalidArgument(format!("invalid fidelity offset '{j}'"))
                    })?;
                    if j == 0 {
                        return Err(Error::InvalidArgument(
                            "fidelity offset must be >= 1".into(),
                        ));
                    }
                    ObservableKind::Fidelity(j)
                }
                None => {
                    return Err(Error::InvalidArgument(format!(
                        "unknown observable '{other}'"
                    )))
                }
            },
        };
        Ok(kind)
    }

    /// Protocol default shot budget for this observable.
    pub fn default_shots(&self) -> Shots {
        match self {
            ObservableKind::RealPart | ObservableKind::ImagPart => {
                Shots::Count(DEFAULT_SHOTS_PARTS)
            }
            _ => Shots::Count(DEFAULT_SHOTS),
        }
    }

    fn free_params(&self) -> usize {
        match self {
            ObservableKind::RealPart | ObservableKind::ImagPart => 3,
            ObservableKind::PhaseSquared => 6,
            ObservableKind::Fidelity(_) => 8,
            ObservableKind::Energy => 5,
        }
    }
}

/// `S(t, n)`: n repetitions of the ordered product of term exponentials,
/// each a Pauli rotation by `(t/n) * alpha_j`.
///
/// The first term of `h` is the leftmost factor of the operator product,
/// i.e. the last gate applied per repetition. This keeps the commutator
/// sums of the error expansion (`Xi_1 = (1/2) sum_{j<k} [H_j, H_k]`) valid
/// for the synthesized circuit.
pub fn build_lie_trotter(h: &PauliSum, t: f64, n: u32) -> Result<Circuit> {
    if n == 0 {
        return Err(Error::InvalidArgument("Trotter number must be >= 1".into()));
    }
    if !h.is_hermitian() {
        return Err(Error::NotHermitian);
    }
    let mut c = Circuit::new(h.num_qubits());
    let dt = t / n as f64;
    for _ in 0..n {
        for term in h.terms().iter().rev() {
            c.push_kind(GateKind::PauliRotation {
                string: term.string,
                angle: dt * term.coeff.re,
            })?;
        }
    }
    Ok(c)
}

/// Sweep one observable over a strictly increasing Trotter-number grid.
///
/// Grid points run in parallel; each draws from its own substream of the
/// base seed, so results are reproducible regardless of scheduling.
pub fn sweep_trotter(
    h: &PauliSum,
    t: f64,
    psi: &StateVector,
    kind: ObservableKind,
    n_grid: &[u32],
    shots: Shots,
    seed: u64,
) -> Result<SweepSeries> {
    if n_grid.is_empty() {
        return Err(Error::EmptyInput("Trotter-number grid"));
    }
    if n_grid[0] == 0 {
        return Err(Error::InvalidArgument("Trotter number must be >= 1".into()));
    }
    let rows: Result<Vec<SweepRow>> = n_grid
        .par_iter()
        .enumerate()
        .map(|(i, &n)| {
            let point_seed = substream_seed(seed, i as u64);
            let (value, stderr) = measure_point(h, t, psi, kind, n, shots, point_seed)?;
            Ok(SweepRow {
                param: n,
                value,
                stderr,
                shots,
            })
        })
        .collect();
    SweepSeries::new(kind.tag(), rows?)
}

fn measure_point(
    h: &PauliSum,
    t: f64,
    psi: &StateVector,
    kind: ObservableKind,
    n: u32,
    shots: Shots,
    seed: u64,
) -> Result<(f64, f64)> {
    match kind {
        ObservableKind::RealPart => {
            let u = build_lie_trotter(h, t, n)?;
            hadamard_test_estimate(psi, &u, Part::Re, shots, seed)
        }
        ObservableKind::ImagPart => {
            let u = build_lie_trotter(h, t, n)?;
            hadamard_test_estimate(psi, &u, Part::Im, shots, seed)
        }
        ObservableKind::PhaseSquared => {
            let u = build_lie_trotter(h, t, n)?;
            // each part gets the full shot budget
            let (re, se_re) =
                hadamard_test_estimate(psi, &u, Part::Re, shots, substream_seed(seed, 0))?;
            let (im, se_im) =
                hadamard_test_estimate(psi, &u, Part::Im, shots, substream_seed(seed, 1))?;
            let value = re * re + im * im;
            let stderr = ((2.0 * re * se_re).powi(2) + (2.0 * im * se_im).powi(2)).sqrt();
            Ok((value, stderr))
        }
        ObservableKind::Fidelity(j) => {
            let mut c = build_lie_trotter(h, t, n)?;
            c.extend(&build_lie_trotter(h, t, n + j)?.inverse())?;
            let p = return_probability_estimate(psi, &c, shots, seed)?;
            let stderr = match shots {
                Shots::Exact => 0.0,
                Shots::Count(m) => (p * (1.0 - p) / m as f64).sqrt(),
            };
            Ok((p, stderr))
        }
        ObservableKind::Energy => {
            let mut evolved = psi.clone();
            apply_circuit(&mut evolved, &build_lie_trotter(h, t, n)?)?;
            pauli_sum_expectation(&evolved, h, shots, seed)
        }
    }
}

fn get(values: &Params, name: &str) -> Result<f64> {
    values
        .get(name)
        .copied()
        .ok_or_else(|| Error::MissingParam(name.to_string()))
}

/// The closed-form equation-to-fit of an observable at Trotter number `n`.
pub fn trotter_fit_eq(kind: ObservableKind, n: u32, values: &Params) -> Result<f64> {
    let nf = n as f64;
    match kind {
        ObservableKind::RealPart | ObservableKind::ImagPart => {
            Ok(get(values, "c")? + get(values, "e1")? / nf + get(values, "e2")? / (nf * nf))
        }
        ObservableKind::PhaseSquared => {
            let k1 = Complex64::new(get(values, "k1_re")?, get(values, "k1_im")?);
            let k2 = Complex64::new(get(values, "k2_re")?, get(values, "k2_im")?);
            let k3 = Complex64::new(get(values, "k3_re")?, get(values, "k3_im")?);
            Ok((k1 + k2 / nf + k3 / (nf * nf)).norm_sqr())
        }
        ObservableKind::Energy => {
            let mut acc = 0.0;
            for k in 0..=4 {
                acc += get(values, &format!("a{k}"))? / nf.powi(k);
            }
            Ok(acc)
        }
        ObservableKind::Fidelity(j) => {
            let cst1 = Complex64::new(get(values, "cst1_re")?, get(values, "cst1_im")?);
            let cst2 = Complex64::new(get(values, "cst2_re")?, get(values, "cst2_im")?);
            let cst3 = get(values, "cst3")?;
            let cst4 = Complex64::new(get(values, "cst4_re")?, get(values, "cst4_im")?);
            let cst5 = get(values, "cst5")?;
            let m = nf + j as f64; // n + j
            let z = Complex64::new(1.0, 0.0)
                + cst1 / nf
                + cst2 / (nf * nf)
                + cst1.conj() / m
                + cst3 / (nf * m)
                + cst4 / (nf * nf * m)
                + cst2.conj() / (m * m)
                + cst4.conj() / (nf * m * m)
                + cst5 / (nf * nf * m * m);
            Ok(z.norm_sqr())
        }
    }
}

/// Fit one observable's equation-to-fit. Real/imaginary parts and the
/// energy are linear in their constants; the phase and fidelity forms go
/// through the bounded derivative-free fitter.
pub fn fit_trotter(series: &SweepSeries, kind: ObservableKind) -> Result<FitResult> {
    let needed = kind.free_params();
    if series.rows().len() < needed {
        return Err(Error::Underdetermined {
            needed,
            got: series.rows().len(),
        });
    }
    match kind {
        ObservableKind::RealPart | ObservableKind::ImagPart => {
            let one = |_: f64| 1.0;
            let inv = |n: f64| 1.0 / n;
            let inv2 = |n: f64| 1.0 / (n * n);
            let basis: Vec<(&str, &dyn Fn(f64) -> f64)> =
                vec![("c", &one), ("e1", &inv), ("e2", &inv2)];
            fit_linear_basis(series, &basis)
        }
        ObservableKind::Energy => {
            let b0 = |_: f64| 1.0;
            let b1 = |n: f64| 1.0 / n;
            let b2 = |n: f64| 1.0 / n.powi(2);
            let b3 = |n: f64| 1.0 / n.powi(3);
            let b4 = |n: f64| 1.0 / n.powi(4);
            let basis: Vec<(&str, &dyn Fn(f64) -> f64)> = vec![
                ("a0", &b0),
                ("a1", &b1),
                ("a2", &b2),
                ("a3", &b3),
                ("a4", &b4),
            ];
            fit_linear_basis(series, &basis)
        }
        ObservableKind::PhaseSquared => {
            let mut init = Params::new();
            // |<psi|S_n|psi>|^2 -> |k1|^2 as n grows; seed the modulus there
            let k1_guess = series.rows().last().map_or(0.5, |r| r.value.max(0.0).sqrt());
            for name in ["k1_re", "k1_im", "k2_re", "k2_im", "k3_re", "k3_im"] {
                init.insert(name.into(), 0.0);
            }
            init.insert("k1_re".into(), k1_guess);
            let mut bounds = Bounds::new();
            for name in init.keys() {
                bounds.insert(name.clone(), (-10.0, 10.0));
            }
            let eq = |n: u32, v: &Params| trotter_fit_eq(kind, n, v);
            fit_nonlinear(series, eq, &init, &bounds, 0x6e65_6571, 8)
        }
        ObservableKind::Fidelity(_) => {
            let mut init = Params::new();
            for name in [
                "cst1_re", "cst1_im", "cst2_re", "cst2_im", "cst3", "cst4_re", "cst4_im", "cst5",
            ] {
                init.insert(name.into(), 0.0);
            }
            let mut bounds = Bounds::new();
            for name in init.keys() {
                bounds.insert(name.clone(), (-10.0, 10.0));
            }
            let eq = |n: u32, v: &Params| trotter_fit_eq(kind, n, v);
            fit_nonlinear(series, eq, &init, &bounds, 0x6e65_6571, 8)
        }
    }
}

/// Extracted convergence-law constants of the real/imaginary observables at
/// a reference simulation time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrotterErrorModel {
    pub cr: f64,
    pub ci: f64,
    pub er1: f64,
    pub ei1: f64,
    pub er2: f64,
    pub ei2: f64,
    pub t_ref: f64,
}

impl TrotterErrorModel {
    /// Combine the real-part and imaginary-part fits.
    pub fn from_fits(real: &FitResult, imag: &FitResult, t_ref: f64) -> Result<Self> {
        Ok(TrotterErrorModel {
            cr: get(&real.params, "c")?,
            ci: get(&imag.params, "c")?,
            er1: get(&real.params, "e1")?,
            ei1: get(&imag.params, "e1")?,
            er2: get(&real.params, "e2")?,
            ei2: get(&imag.params, "e2")?,
            t_ref,
        })
    }

    pub fn e1(&self) -> Complex64 {
        Complex64::new(self.er1, self.ei1)
    }

    pub fn e2(&self) -> Complex64 {
        Complex64::new(self.er2, self.ei2)
    }

    /// Predicted gate error `|e1/n + e2/n^2|`.
    pub fn predict_err(&self, n: u32) -> f64 {
        let nf = n as f64;
        (self.e1() / nf + self.e2() / (nf * nf)).norm()
    }

    /// Move the error constants to a new simulation time: `e_j` scales as
    /// `(t_new/t_ref)^{j+1}`. The converged observable values belong to the
    /// reference time and are left untouched; the rescaled model predicts
    /// only the error term.
    pub fn rescale_constants(&self, t_new: f64) -> Result<TrotterErrorModel> {
        if t_new <= 0.0 {
            return Err(Error::InvalidArgument(
                "rescaled time must be positive".into(),
            ));
        }
        assert!(self.t_ref > 0.0, "reference time must be positive");
        let r = t_new / self.t_ref;
        Ok(TrotterErrorModel {
            cr: self.cr,
            ci: self.ci,
            er1: self.er1 * r.powi(2),
            ei1: self.ei1 * r.powi(2),
            er2: self.er2 * r.powi(3),
            ei2: self.ei2 * r.powi(3),
            t_ref: t_new,
        })
    }
}

/// L1 cost of a candidate constant map against a swept observable.
pub fn trotter_cost(series: &SweepSeries, kind: ObservableKind, values: &Params) -> Result<f64> {
    cost(series, |n, v| trotter_fit_eq(kind, n, v), values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::{parse_hamiltonian, PauliString};
    use crate::sim::bra_u_ket;

    #[test]
    fn lie_trotter_shape() {
        let h = parse_hamiltonian("0.7 X\n-0.2 Z").unwrap();
        let c = build_lie_trotter(&h, 1.5, 1).unwrap();
        assert_eq!(c.len(), 2);
        // last gate applied = leftmost factor = first file term
        match &c.gates()[1].kind {
            GateKind::PauliRotation { string, angle } => {
                assert_eq!(string.to_string(), "X");
                assert!((angle - 1.5 * 0.7).abs() < 1e-15);
            }
            other => panic!("unexpected gate {other:?}"),
        }
        match &c.gates()[0].kind {
            GateKind::PauliRotation { string, angle } => {
                assert_eq!(string.to_string(), "Z");
                assert!((angle - 1.5 * -0.2).abs() < 1e-15);
            }
            other => panic!("unexpected gate {other:?}"),
        }
        let c2 = build_lie_trotter(&h, 1.5, 2).unwrap();
        assert_eq!(c2.len(), 4);
        match &c2.gates()[1].kind {
            GateKind::PauliRotation { angle, .. } => {
                assert!((angle - 0.75 * 0.7).abs() < 1e-15)
            }
            other => panic!("unexpected gate {other:?}"),
        }
        assert!(build_lie_trotter(&h, 1.5, 0).is_err());
    }

    #[test]
    fn circuit_ordering_matches_commutator_expansion() {
        // one Trotter step of h = a X + b Z must equal e^{i t a X} e^{i t b Z}
        // as an operator (first term leftmost), the ordering the error
        // expansion's commutator sums assume
        let h = parse_hamiltonian("0.6 X\n0.8 Z").unwrap();
        let t = 0.9;
        let c = build_lie_trotter(&h, t, 1).unwrap();
        let x = PauliString::parse("X").unwrap();
        let z = PauliString::parse("Z").unwrap();
        let mut via_circuit = StateVector::from_bits("0").unwrap();
        apply_circuit(&mut via_circuit, &c).unwrap();
        let mut direct = StateVector::from_bits("0").unwrap();
        direct.apply_pauli_rotation(&z, t * 0.8, None).unwrap(); // rightmost first
        direct.apply_pauli_rotation(&x, t * 0.6, None).unwrap();
        for (a, b) in via_circuit.amplitudes().iter().zip(direct.amplitudes()) {
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn commuting_hamiltonian_is_exact_at_any_n() {
        let h = parse_hamiltonian("0.7 ZI\n-0.2 IZ\n0.4 ZZ").unwrap();
        let psi = {
            let mut s = StateVector::from_bits("00").unwrap();
            s.apply_exp_h(&parse_hamiltonian("0.3 XI\n0.2 IX").unwrap(), 1.0)
                .unwrap();
            s
        };
        let mut exact = psi.clone();
        exact.apply_exp_h(&h, 1.3).unwrap();
        for n in [1, 2, 5] {
            let mut s = psi.clone();
            apply_circuit(&mut s, &build_lie_trotter(&h, 1.3, n).unwrap()).unwrap();
            for (a, b) in s.amplitudes().iter().zip(exact.amplitudes()) {
                assert!((a - b).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn sweep_shapes_and_exact_rows() {
        let h = parse_hamiltonian("0.7 ZI\n-0.2 IZ").unwrap();
        let psi = StateVector::from_bits("00").unwrap();
        let grid = [2, 3, 4, 6, 8, 10, 12, 14, 16];
        let s = sweep_trotter(
            &h,
            1.0,
            &psi,
            ObservableKind::RealPart,
            &grid,
            Shots::Exact,
            0,
        )
        .unwrap();
        assert_eq!(s.rows().len(), 9);
        // commuting h: all rows identical
        for r in s.rows() {
            assert!((r.value - s.rows()[0].value).abs() < 1e-12);
            assert_eq!(r.stderr, 0.0);
        }
        assert!(sweep_trotter(
            &h,
            1.0,
            &psi,
            ObservableKind::RealPart,
            &[],
            Shots::Exact,
            0
        )
        .is_err());
    }

    #[test]
    fn fit_eq_arithmetic() {
        let mut v = Params::new();
        v.insert("c".into(), 0.3);
        v.insert("e1".into(), 0.01);
        v.insert("e2".into(), 0.002);
        let y = trotter_fit_eq(ObservableKind::RealPart, 10, &v).unwrap();
        assert!((y - 0.30102).abs() < 1e-12);
        v.remove("e2");
        assert!(matches!(
            trotter_fit_eq(ObservableKind::RealPart, 10, &v),
            Err(Error::MissingParam(_))
        ));
    }

    #[test]
    fn fidelity_eq_is_one_when_constants_vanish() {
        let mut v = Params::new();
        for name in [
            "cst1_re", "cst1_im", "cst2_re", "cst2_im", "cst3", "cst4_re", "cst4_im", "cst5",
        ] {
            v.insert(name.into(), 0.0);
        }
        for n in [2, 7, 31] {
            let y = trotter_fit_eq(ObservableKind::Fidelity(1), n, &v).unwrap();
            assert!((y - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn linear_fit_recovers_synthetic_constants() {
        let mut v = Params::new();
        v.insert("c".into(), 0.42);
        v.insert("e1".into(), -0.03);
        v.insert("e2".into(), 0.007);
        let rows: Vec<SweepRow> = [2u32, 3, 4, 6, 8, 12]
            .iter()
            .map(|&n| SweepRow {
                param: n,
                value: trotter_fit_eq(ObservableKind::RealPart, n, &v).unwrap(),
                stderr: 0.0,
                shots: Shots::Exact,
            })
            .collect();
        let series = SweepSeries::new("real", rows).unwrap();
        let fit = fit_trotter(&series, ObservableKind::RealPart).unwrap();
        for name in ["c", "e1", "e2"] {
            assert!((fit.params[name] - v[name]).abs() < 1e-9);
        }

        let short = SweepSeries::new(
            "real",
            vec![SweepRow {
                param: 2,
                value: 0.0,
                stderr: 0.0,
                shots: Shots::Exact,
            }],
        )
        .unwrap();
        assert!(matches!(
            fit_trotter(&short, ObservableKind::RealPart),
            Err(Error::Underdetermined { needed: 3, got: 1 })
        ));
    }

    #[test]
    fn rescaling_constants() {
        let m = TrotterErrorModel {
            cr: 0.2,
            ci: 0.1,
            er1: 0.01,
            ei1: 0.02,
            er2: 0.005,
            ei2: -0.004,
            t_ref: 1.0,
        };
        let m2 = m.rescale_constants(2.0).unwrap();
        assert!((m2.er1 - 0.04).abs() < 1e-15);
        assert!((m2.er2 - 0.04).abs() < 1e-15);
        assert_eq!(m2.cr, m.cr);
        assert_eq!(m2.t_ref, 2.0);
        let same = m.rescale_constants(1.0).unwrap();
        assert_eq!(same, m);
        assert!(m.rescale_constants(0.0).is_err());
    }

    #[test]
    fn predicted_error_examples() {
        let m = TrotterErrorModel {
            cr: 0.0,
            ci: 0.0,
            er1: 0.01,
            ei1: 0.0,
            er2: 0.0,
            ei2: 0.0,
            t_ref: 1.0,
        };
        assert!((m.predict_err(10) - 1e-3).abs() < 1e-15);
        assert!(m.predict_err(1_000_000) < 1e-7);
    }

    #[test]
    fn default_shot_protocol() {
        assert_eq!(
            ObservableKind::RealPart.default_shots(),
            Shots::Count(100_000_000)
        );
        assert_eq!(
            ObservableKind::ImagPart.default_shots(),
            Shots::Count(100_000_000)
        );
        for kind in [
            ObservableKind::PhaseSquared,
            ObservableKind::Fidelity(1),
            ObservableKind::Energy,
        ] {
            assert_eq!(kind.default_shots(), Shots::Count(100_000));
        }
    }

    #[test]
    fn observable_tags_roundtrip() {
        for kind in [
            ObservableKind::RealPart,
            ObservableKind::ImagPart,
            ObservableKind::PhaseSquared,
            ObservableKind::Fidelity(3),
            ObservableKind::Energy,
        ] {
            assert_eq!(ObservableKind::parse(&kind.tag()).unwrap(), kind);
        }
        assert_eq!(
            ObservableKind::parse("fidelity").unwrap(),
            ObservableKind::Fidelity(1)
        );
        assert!(ObservableKind::parse("fidelity:0").is_err());
        assert!(ObservableKind::parse("nope").is_err());
    }

    #[test]
    fn hadamard_test_agrees_with_dense_overlap() {
        let h = parse_hamiltonian("0.4 XZ\n-0.3 ZX\n0.25 YI").unwrap();
        let psi = StateVector::from_bits("01").unwrap();
        let u = build_lie_trotter(&h, 0.9, 3).unwrap();
        let direct = bra_u_ket(&psi, &u).unwrap();
        let (re, _) = hadamard_test_estimate(&psi, &u, Part::Re, Shots::Exact, 0).unwrap();
        let (im, _) = hadamard_test_estimate(&psi, &u, Part::Im, Shots::Exact, 0).unwrap();
        assert!((re - direct.re).abs() < 1e-10);
        assert!((im - direct.im).abs() < 1e-10);
    }
}
