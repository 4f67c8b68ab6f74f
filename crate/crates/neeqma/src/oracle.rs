//! Dense-matrix ground truth: eigendecomposition, exact evolution,
//! eigen-overlap extraction and brute-force extraction of product-formula
//! error constants. Everything here is deliberately independent of the
//! statevector engine so the two routes can check each other.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::{phase_unit, PauliString, PauliSum};
use crate::sim::StateVector;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    dim: usize,
    data: Vec<Complex64>,
}

impl DenseOperator {
    pub fn zeros(dim: usize) -> Self {
        DenseOperator {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = DenseOperator::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, v: Complex64) {
        self.data[row * self.dim + col] = v;
    }

    pub fn add_assign(&mut self, other: &DenseOperator) {
        assert_eq!(self.dim, other.dim);
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b;
        }
    }

    pub fn sub(&self, other: &DenseOperator) -> DenseOperator {
        assert_eq!(self.dim, other.dim);
        DenseOperator {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scaled(&self, factor: Complex64) -> DenseOperator {
        DenseOperator {
            dim: self.dim,
            data: self.data.iter().map(|a| a * factor).collect(),
        }
    }

    pub fn matmul(&self, other: &DenseOperator) -> DenseOperator {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut out = DenseOperator::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self.data[i * n + k];
                if aik == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += aik * other.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.dim, v.len());
        let n = self.dim;
        let mut out = vec![ZERO; n];
        for i in 0..n {
            let mut acc = ZERO;
            for j in 0..n {
                acc += self.data[i * n + j] * v[j];
            }
            out[i] = acc;
        }
        out
    }

    pub fn dagger(&self) -> DenseOperator {
        let n = self.dim;
        let mut out = DenseOperator::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.data[i * self.dim + i]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn hermiticity_residual(&self) -> f64 {
        self.sub(&self.dagger()).frobenius_norm()
    }

    /// Spectral norm via the Hermitian eigenproblem of `M^dagger M`.
    pub fn spectral_norm(&self) -> f64 {
        let mtm = self.dagger().matmul(self);
        let eig = eigen_hermitian(&mtm).expect("M^dagger M is Hermitian");
        eig.values.iter().cloned().fold(0.0, f64::max).max(0.0).sqrt()
    }

    /// Matrix exponential by scaling-and-squaring with a Taylor core.
    pub fn expm(&self) -> DenseOperator {
        let norm = self.frobenius_norm();
        let squarings = if norm > 0.5 {
            (norm / 0.5).log2().ceil().max(0.0) as u32
        } else {
            0
        };
        let scaled = self.scaled(Complex64::new(1.0 / f64::powi(2.0, squarings as i32), 0.0));
        let mut sum = DenseOperator::identity(self.dim);
        let mut term = DenseOperator::identity(self.dim);
        for k in 1..200 {
            term = term.matmul(&scaled).scaled(Complex64::new(1.0 / k as f64, 0.0));
            sum.add_assign(&term);
            if term.frobenius_norm() < 1e-16 * sum.frobenius_norm().max(1.0) {
                break;
            }
        }
        let mut out = sum;
        for _ in 0..squarings {
            out = out.matmul(&out);
        }
        out
    }
}

/// Index-space masks of a Pauli string for a `2^nq` register (qubit 0 is the
/// most significant index bit).
fn index_masks(p: &PauliString, nq: usize) -> (usize, usize, u8) {
    let mut mx = 0usize;
    let mut mz = 0usize;
    for q in 0..p.num_qubits() {
        let bit = 1usize << (nq - 1 - q);
        if (p.x_mask() >> q) & 1 == 1 {
            mx |= bit;
        }
        if (p.z_mask() >> q) & 1 == 1 {
            mz |= bit;
        }
    }
    let yc = ((p.x_mask() & p.z_mask()).count_ones() % 4) as u8;
    (mx, mz, yc)
}

/// Dense matrix of a single Pauli string.
pub fn dense_pauli(p: &PauliString) -> DenseOperator {
    let nq = p.num_qubits();
    let dim = 1usize << nq;
    let (mx, mz, yc) = index_masks(p, nq);
    let base = phase_unit(yc);
    let mut m = DenseOperator::zeros(dim);
    for col in 0..dim {
        let sign = if (col & mz).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
        m.set(col ^ mx, col, base * sign);
    }
    m
}

/// Dense matrix of a Pauli sum (desk scale, 12 qubits max).
pub fn dense_operator(h: &PauliSum) -> DenseOperator {
    assert!(h.num_qubits() <= 12, "dense operators support up to 12 qubits");
    let dim = 1usize << h.num_qubits();
    let mut m = DenseOperator::zeros(dim);
    for t in h.terms() {
        let (mx, mz, yc) = index_masks(&t.string, h.num_qubits());
        let base = t.coeff * phase_unit(yc);
        for col in 0..dim {
            let sign = if (col & mz).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            let row = col ^ mx;
            let v = m.get(row, col);
            m.set(row, col, v + base * sign);
        }
    }
    m
}

/// Eigen-decomposition of a Hermitian matrix (values real, vectors are the
/// columns of `vectors`).
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: DenseOperator,
}

fn off_diagonal_norm(a: &DenseOperator) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a.get(i, j).norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Cyclic-Jacobi eigensolver for complex Hermitian matrices.
///
/// Sweeps until the off-diagonal Frobenius mass is below 1e-12 (scaled by
/// the matrix norm for large inputs); errors out after 100 sweeps.
pub fn eigen_hermitian(m: &DenseOperator) -> Result<EigenDecomposition> {
    let n = m.dim();
    let mut a = m.clone();
    let mut v = DenseOperator::identity(n);
    let tol = 1e-12f64.max(1e-14 * a.frobenius_norm());
    let max_sweeps = 100;
    for _ in 0..max_sweeps {
        if off_diagonal_norm(&a) < tol {
            let values: Vec<f64> = (0..n).map(|i| a.get(i, i).re).collect();
            return Ok(EigenDecomposition { values, vectors: v });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let gamma = a.get(p, q);
                let g = gamma.norm();
                if g < tol / (n as f64 * 10.0) {
                    continue;
                }
                let alpha = a.get(p, p).re;
                let beta = a.get(q, q).re;
                let tau = (alpha - beta) / (2.0 * g);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let eip = gamma / g; // e^{i phi}
                let sp = Complex64::new(s, 0.0) * eip; // s e^{+i phi}
                let sm = Complex64::new(s, 0.0) * eip.conj(); // s e^{-i phi}
                let cc = Complex64::new(c, 0.0);
                // A <- R^dagger A R with R[p][p]=c, R[p][q]=-s e^{i phi},
                //                       R[q][p]=s e^{-i phi}, R[q][q]=c
                for k in 0..n {
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, cc * akp + sm * akq);
                    a.set(k, q, -sp * akp + cc * akq);
                }
                for k in 0..n {
                    let apk = a.get(p, k);
                    let aqk = a.get(q, k);
                    a.set(p, k, cc * apk + sp * aqk);
                    a.set(q, k, -sm * apk + cc * aqk);
                }
                for k in 0..n {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, cc * vkp + sm * vkq);
                    v.set(k, q, -sp * vkp + cc * vkq);
                }
            }
        }
    }
    Err(Error::NonConvergence(max_sweeps))
}

/// Eigenvalues of `h` with the squared overlap of each eigenstate on `psi`,
/// sorted by descending overlap.
pub fn eigen_overlaps(h: &PauliSum, psi: &StateVector) -> Result<Vec<(f64, f64)>> {
    if !h.is_hermitian() {
        return Err(Error::NotHermitian);
    }
    let m = dense_operator(h);
    let eig = eigen_hermitian(&m)?;
    let n = m.dim();
    assert_eq!(psi.amplitudes().len(), n);
    let mut out: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let overlap: Complex64 = (0..n)
                .map(|k| eig.vectors.get(k, i).conj() * psi.amplitudes()[k])
                .sum();
            (eig.values[i], overlap.norm_sqr())
        })
        .collect();
    out.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());
    Ok(out)
}

/// `exp(i t H) |psi>` assembled from the eigendecomposition (the reference
/// route for the Taylor-action evolution in the simulator).
pub fn exact_unitary_action(h: &PauliSum, t: f64, psi: &StateVector) -> Result<StateVector> {
    if !h.is_hermitian() {
        return Err(Error::NotHermitian);
    }
    let m = dense_operator(h);
    let eig = eigen_hermitian(&m)?;
    let n = m.dim();
    let mut out = vec![ZERO; n];
    for i in 0..n {
        let overlap: Complex64 = (0..n)
            .map(|k| eig.vectors.get(k, i).conj() * psi.amplitudes()[k])
            .sum();
        let phase = Complex64::new(0.0, t * eig.values[i]).exp();
        for k in 0..n {
            out[k] += phase * overlap * eig.vectors.get(k, i);
        }
    }
    let mut s = psi.clone();
    s.amplitudes_mut().copy_from_slice(&out);
    Ok(s)
}

/// Dense one-step Lie-Trotter matrix `prod_j exp(i (t/n) a_j P_j)` raised to
/// the n-th power, applied to a vector.
fn trotter_state_dense(h: &PauliSum, t: f64, n: u32, psi: &StateVector) -> Vec<Complex64> {
    let dim = psi.amplitudes().len();
    let mut step = DenseOperator::identity(dim);
    // first term of h is the leftmost factor of the product
    for term in h.terms() {
        let theta = (t / n as f64) * term.coeff.re;
        let p = dense_pauli(&term.string);
        let factor = DenseOperator::identity(dim)
            .scaled(Complex64::new(theta.cos(), 0.0));
        let mut f = factor;
        f.add_assign(&p.scaled(Complex64::new(0.0, theta.sin())));
        step = step.matmul(&f);
    }
    let mut v: Vec<Complex64> = psi.amplitudes().to_vec();
    for _ in 0..n {
        v = step.matvec(&v);
    }
    v
}

/// Exact `<psi| S(t, n) |psi>` for the Lie-Trotter product, densely.
pub fn trotter_overlap_dense(h: &PauliSum, t: f64, n: u32, psi: &StateVector) -> Result<Complex64> {
    if !h.is_hermitian() {
        return Err(Error::NotHermitian);
    }
    let v = trotter_state_dense(h, t, n, psi);
    Ok(psi
        .amplitudes()
        .iter()
        .zip(&v)
        .map(|(a, b)| a.conj() * b)
        .sum())
}

/// Exact gate error on the state, `|<psi| (e^{itH} - S(t,n)) |psi>|`.
pub fn trotter_exact_err(h: &PauliSum, t: f64, n: u32, psi: &StateVector) -> Result<f64> {
    let exact = exact_unitary_action(h, t, psi)?;
    let u = psi.inner(&exact);
    let s = trotter_overlap_dense(h, t, n, psi)?;
    Ok((u - s).norm())
}

/// Two-point extraction of the error-law constants.
///
/// Computes `Delta(n) = <psi|e^{itH}|psi> - <psi|S(t,n)|psi>` exactly at the
/// two Trotter numbers and solves `Delta(n) = -e1/n - e2/n^2`, so that the
/// measured observable behaves as `c + e1/n + e2/n^2`. Returns `(c, e1, e2)`.
pub fn oracle_trotter_constants(
    h: &PauliSum,
    t: f64,
    psi: &StateVector,
    n_pair: (u32, u32),
) -> Result<(Complex64, Complex64, Complex64)> {
    let (n1, n2) = n_pair;
    if n1 == n2 {
        return Err(Error::InvalidArgument(
            "degenerate Trotter-number pair".into(),
        ));
    }
    if n1 < 8 || n2 < 8 || n1 > n2 {
        return Err(Error::InvalidArgument(
            "Trotter-number pair must satisfy 8 <= n1 < n2".into(),
        ));
    }
    let exact = exact_unitary_action(h, t, psi)?;
    let c = psi.inner(&exact);
    let d1 = c - trotter_overlap_dense(h, t, n1, psi)?;
    let d2 = c - trotter_overlap_dense(h, t, n2, psi)?;
    let (x1, x2) = (n1 as f64, n2 as f64);
    // [-1/n1, -1/n1^2; -1/n2, -1/n2^2] [e1; e2] = [d1; d2]
    let det = 1.0 / (x1 * x2 * x2) - 1.0 / (x1 * x1 * x2);
    let e1 = (d1 * (-1.0 / (x2 * x2)) - d2 * (-1.0 / (x1 * x1))) / det;
    let e2 = (d2 * (-1.0 / x1) - d1 * (-1.0 / x2)) / det;
    Ok((c, e1, e2))
}

/// Truncated first-order error series
/// `sum_k (it)^{k+1}/k! sum_l H^l Xi_1 H^{k-l-1}` up to `k_max`, densely.
///
/// The `(it)` argument keeps the series consistent with the `+i` evolution
/// convention used by the circuits, so its expectation matches the `e1`
/// returned by [`oracle_trotter_constants`].
pub fn oracle_er1_series(h: &PauliSum, t: f64, k_max: usize) -> Result<DenseOperator> {
    if !h.is_hermitian() {
        return Err(Error::NotHermitian);
    }
    assert!(h.num_qubits() <= 6, "dense power series supports up to 6 qubits");
    let dim = 1usize << h.num_qubits();
    let hd = dense_operator(h);
    let xi1 = dense_operator(&h.compute_xi(1));
    let z = Complex64::new(0.0, t);

    let mut acc = DenseOperator::zeros(dim);
    let mut tk = xi1.clone(); // T_k = sum_l H^l Xi1 H^{k-1-l}
    let mut hk = hd.clone(); // H^k
    let mut coef = z * z; // z^{k+1}/k! at k = 1
    for k in 1..=k_max {
        acc.add_assign(&tk.scaled(coef));
        if k == k_max {
            break;
        }
        // T_{k+1} = H T_k + Xi1 H^k
        let mut next = hd.matmul(&tk);
        next.add_assign(&xi1.matmul(&hk));
        tk = next;
        hk = hd.matmul(&hk);
        coef *= z / (k as f64 + 1.0);
    }
    Ok(acc)
}

/// Upper bound on the tail of the truncated series of
/// [`oracle_er1_series`], in the style of the norm bound
/// `||Er_1|| <= t^2 ||Xi_1|| e^{t ||H||}`.
pub fn er1_series_tail_bound(h_norm: f64, xi_norm: f64, t: f64, k_max: usize) -> f64 {
    let t = t.abs();
    let mut coef = t * t; // t^{k+1}/(k-1)! at k = 1
    let mut tail = 0.0;
    for k in 1..(k_max + 200) {
        if k > k_max {
            tail += coef * xi_norm * h_norm.powi(k as i32 - 1);
        }
        coef *= t / k as f64;
        if k > k_max && coef * xi_norm * h_norm.powi(k as i32) < 1e-300 {
            break;
        }
    }
    tail
}
