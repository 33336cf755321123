//! Dense complex matrices, density matrices and a cyclic Jacobi eigensolver.

use std::cmp::Ordering;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::PauliString;

pub const MAX_DIM: usize = 1024;
const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_vec(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch(data.len(), dim * dim));
        }
        if dim == 0 || !dim.is_power_of_two() || dim > MAX_DIM {
            return Err(Error::BadDimension(dim));
        }
        let m = Self { dim, data };
        if !m.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(m)
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(dim);
        for r in 0..dim {
            for c in 0..dim {
                m[(r, c)] = f(r, c);
            }
        }
        m
    }

    pub fn from_diag(d: &[Complex64]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, &v) in d.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    pub fn from_real_diag(d: &[f64]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, &v) in d.iter().enumerate() {
            m[(i, i)] = Complex64::new(v, 0.0);
        }
        m
    }

    /// `|v><v|`
    pub fn outer(v: &[Complex64]) -> Self {
        let dim = v.len();
        let mut m = Self::zeros(dim);
        for r in 0..dim {
            if v[r] == ZERO {
                continue;
            }
            for c in 0..dim {
                m[(r, c)] = v[r] * v[c].conj();
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn row(&self, r: usize) -> &[Complex64] {
        &self.data[r * self.dim..(r + 1) * self.dim]
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |r, c| self[(c, r)].conj())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.dim).map(|i| self[(i, i)]).collect()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|&z| z * s).collect() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(Self { dim: self.dim, data })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(Self { dim: self.dim, data })
    }

    /// `self += s * other`
    pub fn add_scaled(&mut self, other: &Self, s: f64) -> Result<()> {
        self.check(other)?;
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b * s;
        }
        Ok(())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check(other)?;
        Ok(self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `max |m_ij - conj(m_ji)|`
    pub fn hermiticity_error(&self) -> f64 {
        let mut e: f64 = 0.0;
        for r in 0..self.dim {
            for c in r..self.dim {
                e = e.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        e
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch(self.dim, v.len()));
        }
        Ok((0..self.dim).map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum()).collect())
    }

    /// `<u| M |v>`
    pub fn sandwich(&self, u: &[Complex64], v: &[Complex64]) -> Result<Complex64> {
        let mv = self.mul_vec(v)?;
        Ok(u.iter().zip(&mv).map(|(a, b)| a.conj() * b).sum())
    }

    /// Conjugation by a diagonal unitary: `D M D^dagger`.
    pub fn conjugate_diag(&self, d: &[Complex64]) -> Result<Self> {
        if d.len() != self.dim {
            return Err(Error::DimensionMismatch(self.dim, d.len()));
        }
        let mut out = self.clone();
        for r in 0..self.dim {
            for c in 0..self.dim {
                out[(r, c)] = d[r] * self[(r, c)] * d[c].conj();
            }
        }
        Ok(out)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.dim + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.dim + c]
    }
}

pub fn matmul(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.check(b)?;
    let n = a.dim;
    let mut out = ComplexMatrix::zeros(n);
    for i in 0..n {
        let orow = &mut out.data[i * n..(i + 1) * n];
        for k in 0..n {
            let aik = a.data[i * n + k];
            if aik == ZERO {
                continue;
            }
            let brow = &b.data[k * n..(k + 1) * n];
            for (o, bkj) in orow.iter_mut().zip(brow) {
                *o += aik * bkj;
            }
        }
    }
    Ok(out)
}

/// Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix(ComplexMatrix);

pub const HERMITIAN_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;
pub const PSD_TOL: f64 = 1e-9;

impl DensityMatrix {
    /// Validates Hermiticity and trace. Positivity is checked by [`DensityMatrix::validate_psd`].
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::NonFinite);
        }
        let h = m.hermiticity_error();
        if h > HERMITIAN_TOL {
            return Err(Error::NotHermitian(h));
        }
        let tr = m.trace();
        if (tr - ONE).norm() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr}")));
        }
        Ok(Self(m))
    }

    pub fn pure(v: &[Complex64]) -> Result<Self> {
        let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("state norm^2 {norm}")));
        }
        Ok(Self(ComplexMatrix::outer(v)))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self(ComplexMatrix::identity(dim).scale(Complex64::new(1.0 / dim as f64, 0.0)))
    }

    /// Wraps a matrix produced by a trace-preserving map without re-checking.
    pub(crate) fn from_channel_output(m: ComplexMatrix) -> Self {
        debug_assert!(m.hermiticity_error() < 1e-8);
        Self(m)
    }

    pub fn validate_psd(&self) -> Result<()> {
        let eig = hermitian_eig(&self.0)?;
        let min = eig.eigenvalues.last().copied().unwrap_or(0.0);
        if min < -PSD_TOL {
            return Err(Error::InvalidState(format!("minimum eigenvalue {min}")));
        }
        Ok(())
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim
    }

    /// `Tr[rho^2]`
    pub fn purity(&self) -> f64 {
        let d = self.0.dim;
        let mut s = 0.0;
        for r in 0..d {
            for c in 0..d {
                s += (self.0[(r, c)] * self.0[(c, r)]).re;
            }
        }
        s
    }
}

#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    /// Descending.
    pub eigenvalues: Vec<f64>,
    /// Column `k` is the eigenvector of `eigenvalues[k]`.
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        let d = self.eigenvectors.dim;
        (0..d).map(|r| self.eigenvectors[(r, k)]).collect()
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        let d = self.eigenvectors.dim;
        let v = &self.eigenvectors;
        ComplexMatrix::from_fn(d, |r, c| {
            (0..d).map(|k| v[(r, k)] * self.eigenvalues[k] * v[(c, k)].conj()).sum()
        })
    }
}

pub const EIG_TOL: f64 = 1e-12;
pub const EIG_MAX_SWEEPS: usize = 100;
const EIG_HERMITIAN_TOL: f64 = 1e-8;
const PHASE_EPS: f64 = 1e-12;

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim;
    let mut s = 0.0;
    for r in 0..n {
        for c in 0..n {
            if r != c {
                s += a.data[r * n + c].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Cyclic Jacobi diagonalisation of a Hermitian matrix.
///
/// Eigenvalues come out descending; each eigenvector has its first non-negligible
/// component real and positive. Degenerate eigenvalues are ordered by a
/// lexicographic comparison of their (normalised) eigenvectors.
pub fn hermitian_eig(h: &ComplexMatrix) -> Result<EigenDecomposition> {
    if !h.is_finite() {
        return Err(Error::NonFinite);
    }
    let herr = h.hermiticity_error();
    if herr > EIG_HERMITIAN_TOL {
        return Err(Error::NotHermitian(herr));
    }
    let n = h.dim;
    // Symmetrise so that the iteration works on an exactly Hermitian matrix.
    let mut a = ComplexMatrix::from_fn(n, |r, c| {
        if r == c {
            Complex64::new(h[(r, r)].re, 0.0)
        } else {
            0.5 * (h[(r, c)] + h[(c, r)].conj())
        }
    });
    let mut v = ComplexMatrix::identity(n);
    let mut sweeps = 0;
    let mut off = off_diagonal_norm(&a);
    while off >= EIG_TOL {
        if sweeps == EIG_MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps, residual: off });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        off = off_diagonal_norm(&a);
    }

    let mut pairs: Vec<(f64, Vec<Complex64>)> = (0..n)
        .map(|k| {
            let mut col: Vec<Complex64> = (0..n).map(|r| v[(r, k)]).collect();
            normalize_phase(&mut col);
            (a[(k, k)].re, col)
        })
        .collect();
    pairs.sort_by(compare_pairs);
    let mut vecs = ComplexMatrix::zeros(n);
    let mut vals = Vec::with_capacity(n);
    for (k, (val, col)) in pairs.into_iter().enumerate() {
        vals.push(val);
        for (r, z) in col.into_iter().enumerate() {
            vecs[(r, k)] = z;
        }
    }
    Ok(EigenDecomposition { eigenvalues: vals, eigenvectors: vecs })
}

fn compare_pairs(x: &(f64, Vec<Complex64>), y: &(f64, Vec<Complex64>)) -> Ordering {
    let tol = EIG_TOL * x.0.abs().max(y.0.abs()).max(1.0);
    if (x.0 - y.0).abs() > tol {
        return y.0.partial_cmp(&x.0).unwrap_or(Ordering::Equal);
    }
    for (a, b) in x.1.iter().zip(&y.1) {
        for (s, t) in [(a.re, b.re), (a.im, b.im)] {
            if (s - t).abs() > PHASE_EPS {
                return t.partial_cmp(&s).unwrap_or(Ordering::Equal);
            }
        }
    }
    Ordering::Equal
}

/// Makes the first component with modulus above 1e-12 real and positive.
pub fn normalize_phase(v: &mut [Complex64]) {
    if let Some(z) = v.iter().find(|z| z.norm() > PHASE_EPS).copied() {
        let ph = z.conj() / z.norm();
        for c in v.iter_mut() {
            *c *= ph;
        }
    }
}

/// One complex Jacobi rotation zeroing `a[p][q]`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let n = a.dim;
    let apq = a.data[p * n + q];
    let r = apq.norm();
    if r < 1e-300 {
        return;
    }
    let app = a.data[p * n + p].re;
    let aqq = a.data[q * n + q].re;
    if r < 1e-18 * (app.abs() + aqq.abs()).max(1e-30) {
        a.data[p * n + q] = ZERO;
        a.data[q * n + p] = ZERO;
        return;
    }
    // W = diag(1, e^{-i alpha}) * R, R the real rotation zeroing the phase-stripped entry.
    let e = apq / r;
    let theta = (aqq - app) / (2.0 * r);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let ec = e.conj();
    let wpp = Complex64::new(c, 0.0);
    let wpq = Complex64::new(s, 0.0);
    let wqp = -ec * s;
    let wqq = ec * c;
    // A <- A W (columns p, q)
    for k in 0..n {
        let akp = a.data[k * n + p];
        let akq = a.data[k * n + q];
        a.data[k * n + p] = akp * wpp + akq * wqp;
        a.data[k * n + q] = akp * wpq + akq * wqq;
    }
    // A <- W^dagger A (rows p, q)
    for k in 0..n {
        let apk = a.data[p * n + k];
        let aqk = a.data[q * n + k];
        a.data[p * n + k] = wpp.conj() * apk + wqp.conj() * aqk;
        a.data[q * n + k] = wpq.conj() * apk + wqq.conj() * aqk;
    }
    a.data[p * n + q] = ZERO;
    a.data[q * n + p] = ZERO;
    a.data[p * n + p].im = 0.0;
    a.data[q * n + q].im = 0.0;
    for k in 0..n {
        let vkp = v.data[k * n + p];
        let vkq = v.data[k * n + q];
        v.data[k * n + p] = vkp * wpp + vkq * wqp;
        v.data[k * n + q] = vkp * wpq + vkq * wqq;
    }
}

/// `rho^n` by repeated multiplication, `n` in 1..=4.
pub fn matrix_power(rho: &DensityMatrix, n: usize) -> Result<ComplexMatrix> {
    if !(1..=4).contains(&n) {
        return Err(Error::InvalidArgument(format!("matrix power {n} outside 1..=4")));
    }
    let mut out = rho.0.clone();
    for _ in 1..n {
        out = matmul(&out, &rho.0)?;
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
    Conjugate,
}

fn pauli_dim_check(p: &PauliString, m: &ComplexMatrix) -> Result<()> {
    let d = 1usize << p.n_qubits();
    if d != m.dim {
        return Err(Error::DimensionMismatch(d, m.dim));
    }
    Ok(())
}

/// `P M`, `M P` or `P M P^dagger` as a signed permutation of entries.
pub fn apply_pauli(p: &PauliString, m: &ComplexMatrix, side: Side) -> Result<ComplexMatrix> {
    pauli_dim_check(p, m)?;
    let n = m.dim;
    let mut out = ComplexMatrix::zeros(n);
    let maps: Vec<(usize, Complex64)> = (0..n).map(|b| p.apply_to_basis(b)).collect();
    match side {
        Side::Left => {
            for (b, &(t, f)) in maps.iter().enumerate() {
                for c in 0..n {
                    out.data[t * n + c] = f * m.data[b * n + c];
                }
            }
        }
        Side::Right => {
            // (M P)[r][b] = M[r][t(b)] f(b)
            for r in 0..n {
                for (b, &(t, f)) in maps.iter().enumerate() {
                    out.data[r * n + b] = m.data[r * n + t] * f;
                }
            }
        }
        Side::Conjugate => {
            for (r, &(tr, fr)) in maps.iter().enumerate() {
                for (c, &(tc, fc)) in maps.iter().enumerate() {
                    out.data[tr * n + tc] = fr * m.data[r * n + c] * fc.conj();
                }
            }
        }
    }
    Ok(out)
}

/// `m += w * P m0 P^dagger`, accumulating without an intermediate matrix.
pub fn accumulate_conjugated(
    acc: &mut ComplexMatrix,
    p: &PauliString,
    m0: &ComplexMatrix,
    w: f64,
) -> Result<()> {
    pauli_dim_check(p, m0)?;
    acc.check(m0)?;
    let n = m0.dim;
    let maps: Vec<(usize, Complex64)> = (0..n).map(|b| p.apply_to_basis(b)).collect();
    for (r, &(tr, fr)) in maps.iter().enumerate() {
        let fr = fr * w;
        for (c, &(tc, fc)) in maps.iter().enumerate() {
            acc.data[tr * n + tc] += fr * m0.data[r * n + c] * fc.conj();
        }
    }
    Ok(())
}

/// `Tr[P M]` for a Pauli string `P`.
pub fn pauli_trace(p: &PauliString, m: &ComplexMatrix) -> Result<Complex64> {
    pauli_dim_check(p, m)?;
    let n = m.dim;
    // Tr[P M] = sum_b <t(b)|... = sum_b f(b) M[b][t(b)]
    Ok((0..n)
        .map(|b| {
            let (t, f) = p.apply_to_basis(b);
            f * m.data[b * n + t]
        })
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_product() {
        let m = ComplexMatrix::from_fn(4, |r, k| c(r as f64, k as f64 - 1.0));
        assert_eq!(matmul(&ComplexMatrix::identity(4), &m).unwrap(), m);
        let z = ComplexMatrix::from_real_diag(&[1.0, -1.0]);
        assert_eq!(matmul(&z, &z).unwrap(), ComplexMatrix::identity(2));
        assert!(matmul(&z, &m).is_err());
    }

    #[test]
    fn diagonal_and_pauli_x_spectra() {
        let e = hermitian_eig(&ComplexMatrix::from_real_diag(&[0.3, 0.7])).unwrap();
        assert_eq!(e.eigenvalues, vec![0.7, 0.3]);
        let x = ComplexMatrix::from_fn(2, |r, k| if r != k { c(1.0, 0.0) } else { c(0.0, 0.0) });
        let e = hermitian_eig(&x).unwrap();
        assert!((e.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!((e.eigenvalues[1] + 1.0).abs() < 1e-14);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let v0 = e.vector(0);
        let v1 = e.vector(1);
        assert!((v0[0] - c(s, 0.0)).norm() < 1e-14 && (v0[1] - c(s, 0.0)).norm() < 1e-14);
        assert!((v1[0] - c(s, 0.0)).norm() < 1e-14 && (v1[1] + c(s, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_fn(2, |r, k| if r < k { c(1.0, 0.0) } else { c(0.0, 0.0) });
        assert!(matches!(hermitian_eig(&m), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn degenerate_identity_ordering() {
        let e = hermitian_eig(&ComplexMatrix::identity(4)).unwrap();
        assert_eq!(e.eigenvectors, ComplexMatrix::identity(4));
    }

    #[test]
    fn matrix_power_examples() {
        let rho = DensityMatrix::new(ComplexMatrix::from_real_diag(&[0.7, 0.2, 0.1, 0.0])).unwrap();
        let r2 = matrix_power(&rho, 2).unwrap();
        assert!((r2.trace().re - 0.54).abs() < 1e-15);
        let mm = DensityMatrix::maximally_mixed(4);
        let r2 = matrix_power(&mm, 2).unwrap();
        assert!((r2.trace().re - 0.25).abs() < 1e-15);
        assert!(r2.max_abs_diff(&ComplexMatrix::identity(4).scale(c(1.0 / 16.0, 0.0))).unwrap() < 1e-16);
        assert!(matrix_power(&mm, 5).is_err());
    }

    #[test]
    fn pauli_conjugation_examples() {
        let x: PauliString = "X".parse().unwrap();
        let ket0 = ComplexMatrix::from_real_diag(&[1.0, 0.0]);
        let out = apply_pauli(&x, &ket0, Side::Conjugate).unwrap();
        assert_eq!(out, ComplexMatrix::from_real_diag(&[0.0, 1.0]));

        let h = 0.5;
        let plus_plus = ComplexMatrix::from_fn(4, |_, _| c(0.25, 0.0));
        let zi: PauliString = "ZI".parse().unwrap();
        let out = apply_pauli(&zi, &plus_plus, Side::Conjugate).unwrap();
        // |-+> = (|00> + |01> - |10> - |11>)/2
        let minus_plus = [h, h, -h, -h].map(|a| c(a, 0.0));
        assert!(out.max_abs_diff(&ComplexMatrix::outer(&minus_plus)).unwrap() < 1e-15);
    }
}
