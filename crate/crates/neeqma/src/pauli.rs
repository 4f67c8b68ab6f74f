//! Pauli-string algebra: products, commutators and the nested-commutator
//! sums that govern product-formula errors, plus Hamiltonian file parsing.
//!
//! Strings are stored symplectically as an X bit mask and a Z bit mask
//! (qubit k = bit k, qubit 0 = leftmost character of a word). A string is
//! the operator `i^|Y| · X^x Z^z`, which keeps every product phase in the
//! group {1, i, -1, -i} and lets products run in O(1) word operations.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Coefficients below this magnitude are dropped when terms are collected.
pub const COEFF_CUTOFF: f64 = 1e-14;

/// A sum is flagged Hermitian when every collected coefficient has an
/// imaginary part below this.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Single-qubit Pauli axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    I,
    X,
    Y,
    Z,
}

/// A tensor product of single-qubit Paulis over a fixed number of qubits.
///
/// Bit k of `x`/`z` records the X/Z component on qubit k; Y sets both.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x: u64,
    z: u64,
}

impl PauliString {
    /// The all-identity string (multiplicative identity).
    pub fn identity(n: usize) -> Self {
        assert!(n >= 1 && n <= 64, "qubit count must be in 1..=64");
        PauliString { n, x: 0, z: 0 }
    }

    pub fn from_axes(axes: &[Axis]) -> Self {
        let mut s = PauliString::identity(axes.len());
        for (q, a) in axes.iter().enumerate() {
            s.set_axis(q, *a);
        }
        s
    }

    /// Parse a word over {I, X, Y, Z}; leftmost character is qubit 0.
    pub fn parse(word: &str) -> Result<Self> {
        if word.is_empty() {
            return Err(Error::EmptyInput("Pauli word"));
        }
        let mut axes = Vec::with_capacity(word.len());
        for c in word.chars() {
            axes.push(match c {
                'I' => Axis::I,
                'X' => Axis::X,
                'Y' => Axis::Y,
                'Z' => Axis::Z,
                other => {
                    return Err(Error::Parse {
                        line: 0,
                        msg: format!("invalid Pauli character '{other}'"),
                    })
                }
            });
        }
        Ok(PauliString::from_axes(&axes))
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn axis(&self, qubit: usize) -> Axis {
        let x = (self.x >> qubit) & 1 == 1;
        let z = (self.z >> qubit) & 1 == 1;
        match (x, z) {
            (false, false) => Axis::I,
            (true, false) => Axis::X,
            (true, true) => Axis::Y,
            (false, true) => Axis::Z,
        }
    }

    pub fn set_axis(&mut self, qubit: usize, a: Axis) {
        assert!(qubit < self.n);
        let bit = 1u64 << qubit;
        let (x, z) = match a {
            Axis::I => (false, false),
            Axis::X => (true, false),
            Axis::Y => (true, true),
            Axis::Z => (false, true),
        };
        if x {
            self.x |= bit;
        } else {
            self.x &= !bit;
        }
        if z {
            self.z |= bit;
        } else {
            self.z &= !bit;
        }
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// X-component mask (bit k = qubit k; Y qubits appear in both masks).
    pub fn x_mask(&self) -> u64 {
        self.x
    }

    /// Z-component mask.
    pub fn z_mask(&self) -> u64 {
        self.z
    }

    /// True when the two strings commute (symplectic form is even).
    pub fn commutes_with(&self, other: &PauliString) -> bool {
        assert_eq!(self.n, other.n);
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()) % 2 == 0
    }

    /// Product `self * other` as an exponent of i (mod 4) and the result
    /// string. Pure integer arithmetic.
    pub fn product_parts(&self, other: &PauliString) -> Result<(u8, PauliString)> {
        if self.n != other.n {
            return Err(Error::LengthMismatch {
                left: self.n,
                right: other.n,
            });
        }
        let xc = self.x ^ other.x;
        let zc = self.z ^ other.z;
        // i^|Ya| * i^|Yb| * (-1)^|za & xb| = i^k * i^|Yc| with the result in
        // canonical i^|Y| X^x Z^z form.
        let k = 2 * (self.z & other.x).count_ones() as i32
            + (self.x & self.z).count_ones() as i32
            + (other.x & other.z).count_ones() as i32
            - (xc & zc).count_ones() as i32;
        Ok((k.rem_euclid(4) as u8, PauliString { n: self.n, x: xc, z: zc }))
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in 0..self.n {
            let c = match self.axis(q) {
                Axis::I => 'I',
                Axis::X => 'X',
                Axis::Y => 'Y',
                Axis::Z => 'Z',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Map an exponent of i (mod 4) to the exact complex unit.
pub fn phase_unit(k: u8) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Product of two strings: phase in {1, i, -1, -i} and the result string.
pub fn pauli_product(a: &PauliString, b: &PauliString) -> Result<(Complex64, PauliString)> {
    let (k, s) = a.product_parts(b)?;
    Ok((phase_unit(k), s))
}

/// A weighted Pauli string.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauliTerm {
    pub coeff: Complex64,
    pub string: PauliString,
}

impl PauliTerm {
    pub fn new(coeff: Complex64, string: PauliString) -> Self {
        PauliTerm { coeff, string }
    }

    pub fn real(coeff: f64, string: PauliString) -> Self {
        PauliTerm::new(Complex64::new(coeff, 0.0), string)
    }
}

/// Commutator `ab - ba` of two weighted terms: empty when the strings
/// commute, otherwise the single term `2 * phase * coeff_a * coeff_b * (ab)`.
pub fn pauli_commutator(a: &PauliTerm, b: &PauliTerm) -> Result<PauliSum> {
    let n = a.string.num_qubits();
    match commutator_term(a, b)? {
        Some(t) => Ok(PauliSum::from_terms(n, vec![t])),
        None => Ok(PauliSum::from_terms(n, Vec::new())),
    }
}

fn commutator_term(a: &PauliTerm, b: &PauliTerm) -> Result<Option<PauliTerm>> {
    if a.string.num_qubits() != b.string.num_qubits() {
        return Err(Error::LengthMismatch {
            left: a.string.num_qubits(),
            right: b.string.num_qubits(),
        });
    }
    if a.string.commutes_with(&b.string) {
        return Ok(None);
    }
    let (k, s) = a.string.product_parts(&b.string)?;
    Ok(Some(PauliTerm::new(
        2.0 * phase_unit(k) * a.coeff * b.coeff,
        s,
    )))
}

/// A collected sum of weighted Pauli strings of equal length.
///
/// Term order is insertion order (for parsed Hamiltonians, file order);
/// duplicate strings merge into the first occurrence and near-zero
/// coefficients are dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliSum {
    nqubits: usize,
    terms: Vec<PauliTerm>,
    hermitian: bool,
}

impl PauliSum {
    /// Collect terms: merge duplicate strings (keeping first-seen order),
    /// drop coefficients below `COEFF_CUTOFF`, set the Hermitian flag.
    pub fn from_terms(nqubits: usize, terms: Vec<PauliTerm>) -> Self {
        let mut order: Vec<PauliString> = Vec::new();
        let mut index: std::collections::HashMap<PauliString, usize> =
            std::collections::HashMap::new();
        let mut coeffs: Vec<Complex64> = Vec::new();
        for t in &terms {
            debug_assert_eq!(t.string.num_qubits(), nqubits);
            match index.get(&t.string) {
                Some(&i) => coeffs[i] += t.coeff,
                None => {
                    index.insert(t.string, order.len());
                    order.push(t.string);
                    coeffs.push(t.coeff);
                }
            }
        }
        let collected: Vec<PauliTerm> = order
            .into_iter()
            .zip(coeffs)
            .filter(|(_, c)| c.norm() >= COEFF_CUTOFF)
            .map(|(s, c)| PauliTerm::new(c, s))
            .collect();
        let hermitian = collected.iter().all(|t| t.coeff.im.abs() < HERMITIAN_TOL);
        PauliSum {
            nqubits,
            terms: collected,
            hermitian,
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.nqubits
    }

    pub fn terms(&self) -> &[PauliTerm] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    /// Sum of coefficient magnitudes; upper-bounds the spectral norm.
    pub fn coefficient_one_norm(&self) -> f64 {
        self.terms.iter().map(|t| t.coeff.norm()).sum()
    }

    pub fn scaled(&self, factor: Complex64) -> PauliSum {
        PauliSum::from_terms(
            self.nqubits,
            self.terms
                .iter()
                .map(|t| PauliTerm::new(t.coeff * factor, t.string))
                .collect(),
        )
    }

    /// First- or second-order nested-commutator sum of the product-formula
    /// error expansion, in the sum's own term order:
    ///
    /// order 1:  (1/2)  Σ_{j<k} [H_j, H_k]
    /// order 2:  (1/12) ( Σ_{j,k} [H_j, [H_j, H_k]]
    ///                    + 2 Σ_{j<k<l} ([H_j, [H_k, H_l]] + [H_l, [H_k, H_j]]) )
    pub fn compute_xi(&self, order: u8) -> PauliSum {
        assert!(order == 1 || order == 2, "order must be 1 or 2");
        let k_terms = self.terms.len();
        let mut out: Vec<PauliTerm> = Vec::new();
        if order == 1 {
            for j in 0..k_terms {
                for k in (j + 1)..k_terms {
                    if let Some(mut t) =
                        commutator_term(&self.terms[j], &self.terms[k]).expect("equal lengths")
                    {
                        t.coeff *= 0.5;
                        out.push(t);
                    }
                }
            }
        } else {
            let inv12 = 1.0 / 12.0;
            for j in 0..k_terms {
                for k in 0..k_terms {
                    if j == k {
                        continue; // [H_j, [H_j, H_j]] = 0
                    }
                    if let Some(inner) =
                        commutator_term(&self.terms[j], &self.terms[k]).expect("equal lengths")
                    {
                        if let Some(mut t) =
                            commutator_term(&self.terms[j], &inner).expect("equal lengths")
                        {
                            t.coeff *= inv12;
                            out.push(t);
                        }
                    }
                }
            }
            for j in 0..k_terms {
                for k in (j + 1)..k_terms {
                    for l in (k + 1)..k_terms {
                        for (a, b, c) in [(j, k, l), (l, k, j)] {
                            if let Some(inner) =
                                commutator_term(&self.terms[b], &self.terms[c])
                                    .expect("equal lengths")
                            {
                                if let Some(mut t) = commutator_term(&self.terms[a], &inner)
                                    .expect("equal lengths")
                                {
                                    t.coeff *= 2.0 * inv12;
                                    out.push(t);
                                }
                            }
                        }
                    }
                }
            }
        }
        PauliSum::from_terms(self.nqubits, out)
    }
}

/// Parse a Hamiltonian document: one `<coefficient> <pauli word>` pair per
/// line, `#` starts a comment. Term order is preserved and later defines the
/// product-formula ordering.
pub fn parse_hamiltonian(text: &str) -> Result<PauliSum> {
    let mut terms: Vec<PauliTerm> = Vec::new();
    let mut width: Option<usize> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let coeff_tok = tokens.next().ok_or(Error::Parse {
            line: line_no,
            msg: "missing coefficient".into(),
        })?;
        let word_tok = tokens.next().ok_or_else(|| Error::Parse {
            line: line_no,
            msg: "missing Pauli word".into(),
        })?;
        if tokens.next().is_some() {
            return Err(Error::Parse {
                line: line_no,
                msg: "expected `<coefficient> <pauli word>`".into(),
            });
        }
        let coeff: f64 = coeff_tok.parse().map_err(|_| Error::Parse {
            line: line_no,
            msg: format!("invalid coefficient '{coeff_tok}'"),
        })?;
        let string = PauliString::parse(word_tok).map_err(|e| match e {
            Error::Parse { msg, .. } => Error::Parse { line: line_no, msg },
            other => other,
        })?;
        match width {
            None => {
                if word_tok.len() > 64 {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: "Pauli words longer than 64 qubits are not supported".into(),
                    });
                }
                width = Some(string.num_qubits());
            }
            Some(w) if w != string.num_qubits() => {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!(
                        "inconsistent word length {} (expected {w})",
                        string.num_qubits()
                    ),
                });
            }
            _ => {}
        }
        terms.push(PauliTerm::real(coeff, string));
    }
    let width = width.ok_or(Error::EmptyInput("Hamiltonian document"))?;
    Ok(PauliSum::from_terms(width, terms))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(word: &str) -> PauliString {
        PauliString::parse(word).unwrap()
    }

    #[test]
    fn single_qubit_product_table() {
        let (ph, s) = pauli_product(&p("X"), &p("Y")).unwrap();
        assert_eq!(ph, Complex64::new(0.0, 1.0));
        assert_eq!(s, p("Z"));

        let (ph, s) = pauli_product(&p("Y"), &p("Z")).unwrap();
        assert_eq!(ph, Complex64::new(0.0, 1.0));
        assert_eq!(s, p("X"));

        let (ph, s) = pauli_product(&p("Z"), &p("X")).unwrap();
        assert_eq!(ph, Complex64::new(0.0, 1.0));
        assert_eq!(s, p("Y"));

        let (ph, s) = pauli_product(&p("Y"), &p("X")).unwrap();
        assert_eq!(ph, Complex64::new(0.0, -1.0));
        assert_eq!(s, p("Z"));
    }

    #[test]
    fn two_qubit_product_phases_multiply() {
        let (ph, s) = pauli_product(&p("XZ"), &p("ZX")).unwrap();
        assert_eq!(ph, Complex64::new(1.0, 0.0));
        assert_eq!(s, p("YY"));
    }

    #[test]
    fn involution() {
        for w in ["X", "Y", "Z", "XYZI", "YYZX"] {
            let (ph, s) = pauli_product(&p(w), &p(w)).unwrap();
            assert_eq!(ph, Complex64::new(1.0, 0.0));
            assert!(s.is_identity());
        }
    }

    #[test]
    fn product_length_mismatch() {
        assert!(pauli_product(&p("X"), &p("XX")).is_err());
    }

    #[test]
    fn commutator_basics() {
        let x = PauliTerm::real(1.0, p("X"));
        let y = PauliTerm::real(1.0, p("Y"));
        let c = pauli_commutator(&x, &y).unwrap();
        assert_eq!(c.terms().len(), 1);
        assert_eq!(c.terms()[0].string, p("Z"));
        assert_eq!(c.terms()[0].coeff, Complex64::new(0.0, 2.0));

        assert!(pauli_commutator(&x, &x).unwrap().is_empty());

        let a = PauliTerm::real(1.0, p("XZ"));
        let b = PauliTerm::real(1.0, p("ZX"));
        assert!(pauli_commutator(&a, &b).unwrap().is_empty());
    }

    #[test]
    fn xi1_single_pair() {
        let h = PauliSum::from_terms(
            1,
            vec![PauliTerm::real(1.0, p("X")), PauliTerm::real(1.0, p("Z"))],
        );
        let xi1 = h.compute_xi(1);
        assert_eq!(xi1.terms().len(), 1);
        assert_eq!(xi1.terms()[0].string, p("Y"));
        let c = xi1.terms()[0].coeff;
        assert!((c - Complex64::new(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn xi_vanishes_for_commuting_terms() {
        let h = PauliSum::from_terms(
            2,
            vec![
                PauliTerm::real(0.7, p("ZI")),
                PauliTerm::real(-0.3, p("IZ")),
                PauliTerm::real(0.2, p("ZZ")),
            ],
        );
        assert!(h.compute_xi(1).is_empty());
        assert!(h.compute_xi(2).is_empty());
    }

    #[test]
    fn xi2_two_terms_is_standard_third_order() {
        let h0 = PauliTerm::real(0.8, p("XI"));
        let h1 = PauliTerm::real(-0.6, p("ZY"));
        let h = PauliSum::from_terms(2, vec![h0, h1]);
        let xi2 = h.compute_xi(2);

        let inner01 = commutator_term(&h0, &h1).unwrap().unwrap();
        let c0 = commutator_term(&h0, &inner01).unwrap().unwrap();
        let inner10 = commutator_term(&h1, &h0).unwrap().unwrap();
        let c1 = commutator_term(&h1, &inner10).unwrap().unwrap();
        let expect = PauliSum::from_terms(
            2,
            vec![
                PauliTerm::new(c0.coeff / 12.0, c0.string),
                PauliTerm::new(c1.coeff / 12.0, c1.string),
            ],
        );
        assert_eq!(xi2.terms().len(), expect.terms().len());
        for (a, b) in xi2.terms().iter().zip(expect.terms()) {
            assert_eq!(a.string, b.string);
            assert!((a.coeff - b.coeff).norm() < 1e-15);
        }
    }

    #[test]
    fn one_norm() {
        let h = PauliSum::from_terms(
            1,
            vec![PauliTerm::real(1.0, p("X")), PauliTerm::real(1.0, p("Z"))],
        );
        assert_eq!(h.coefficient_one_norm(), 2.0);
        let g = PauliSum::from_terms(
            1,
            vec![PauliTerm::real(0.5, p("X")), PauliTerm::real(-0.5, p("Y"))],
        );
        assert_eq!(g.coefficient_one_norm(), 1.0);
        let z = PauliSum::from_terms(
            1,
            vec![PauliTerm::real(0.5, p("X")), PauliTerm::real(-0.5, p("X"))],
        );
        assert_eq!(z.coefficient_one_norm(), 0.0);
        assert!(z.is_empty());
    }

    #[test]
    fn parse_small_document() {
        let h = parse_hamiltonian("1.0 XX\n0.5 ZI\n").unwrap();
        assert_eq!(h.terms().len(), 2);
        assert_eq!(h.num_qubits(), 2);
        assert!(h.is_hermitian());
        assert_eq!(h.terms()[0].string, p("XX"));
    }

    #[test]
    fn parse_rejects_bad_character() {
        let err = parse_hamiltonian("0.25 XQ").unwrap_err();
        match err {
            Error::Parse { line, msg } => {
                assert_eq!(line, 1);
                assert!(msg.contains('Q'), "message should name the character: {msg}");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn parse_rejects_bad_float_and_width() {
        assert!(matches!(
            parse_hamiltonian("abc XX"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_hamiltonian("1.0 XX\n1.0 XXX"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_hamiltonian("# only a comment\n\n"),
            Err(Error::EmptyInput(_))
        ));
    }

    #[test]
    fn parse_merges_duplicates_preserving_order() {
        let h = parse_hamiltonian("1.0 XX\n0.5 ZI\n0.25 XX").unwrap();
        assert_eq!(h.terms().len(), 2);
        assert_eq!(h.terms()[0].coeff.re, 1.25);
        assert_eq!(h.terms()[1].string, p("ZI"));
    }
}
