//! Ancilla-encoded probes, syndrome recovery and the decoding isometry.
//!
//! The joint register holds the data qubits first (most significant bits)
//! followed by the ancilla qubits.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, pauli_trace, ComplexMatrix, DensityMatrix};
use crate::noise::{apply_channel_on, signal_phases, signal_vector, NoiseSpec, PauliProbs};
use crate::pauli::PauliString;
use crate::stabilizer::{h_eigenvalue, Probe, StabilizerGroup};

/// Code defined by Z-type generators, with a computational code basis.
#[derive(Clone, Debug)]
pub struct StabilizerCode {
    pub generators: StabilizerGroup,
    pub n_data: usize,
    /// Basis indices ordered by descending `H` eigenvalue, then index.
    pub code_basis: Vec<usize>,
}

impl StabilizerCode {
    pub fn new(generators: StabilizerGroup) -> Result<Self> {
        let n = generators.n_qubits();
        if let Some(g) = generators.generators().iter().find(|g| g.x_bits() != 0) {
            return Err(Error::Qec(format!("generator {g} does not commute with every Z")));
        }
        let mut code = Self { generators, n_data: n, code_basis: Vec::new() };
        let mut basis: Vec<usize> = (0..1usize << n).filter(|&b| code.syndrome_of_index(b) == 0).collect();
        basis.sort_by(|&a, &b| {
            h_eigenvalue(n, b)
                .partial_cmp(&h_eigenvalue(n, a))
                .expect("finite")
                .then(a.cmp(&b))
        });
        if basis.is_empty() {
            return Err(Error::Qec("empty code space".into()));
        }
        code.code_basis = basis;
        Ok(code)
    }

    pub fn code_dim(&self) -> usize {
        self.code_basis.len()
    }

    /// Outcome pattern of the generators on a data basis state: bit `g` is set
    /// when generator `g` reads −1.
    #[inline]
    pub fn syndrome_of_index(&self, b: usize) -> u32 {
        let mut s = 0u32;
        for (g, gen) in self.generators.generators().iter().enumerate() {
            let parity = (gen.z_bits() & b as u64).count_ones() & 1;
            let negative = (parity == 1) != (gen.sign() < 0.0);
            if negative {
                s |= 1 << g;
            }
        }
        s
    }

    /// Bit `g` set iff `p` anticommutes with generator `g`.
    pub fn syndrome(&self, p: &PauliString) -> Result<u32> {
        let mut s = 0u32;
        for (g, gen) in self.generators.generators().iter().enumerate() {
            if !p.commutes(gen)? {
                s |= 1 << g;
            }
        }
        Ok(s)
    }

    /// Diagonal projector onto the code space.
    pub fn projector_diag(&self) -> Vec<f64> {
        let mut d = vec![0.0; 1 << self.n_data];
        for &b in &self.code_basis {
            d[b] = 1.0;
        }
        d
    }

    /// True when every single-qubit X error has its own nonzero syndrome.
    pub fn corrects_single_x(&self) -> Result<bool> {
        let mut seen = Vec::new();
        for q in 0..self.n_data {
            let s = self.syndrome(&PauliString::single(self.n_data, q, 'X')?)?;
            if s == 0 || seen.contains(&s) {
                return Ok(false);
            }
            seen.push(s);
        }
        Ok(true)
    }
}

pub fn build_code(probe: &Probe) -> Result<StabilizerCode> {
    let cfg = probe
        .qec
        .as_ref()
        .ok_or_else(|| Error::Qec(format!("probe {} has no Z-type stabilizers", probe.name)))?;
    StabilizerCode::new(cfg.code_generators.clone())
}

/// `sum_i s_i |c_i>_D |i>_A` together with the decoding permutation.
#[derive(Clone, Debug)]
pub struct LogicalProbe {
    pub code: StabilizerCode,
    pub amplitudes: Vec<Complex64>,
    pub n_ancilla: usize,
    state: Vec<Complex64>,
    /// `V|a> = |perm[a]>`; `V` maps `|c_i>|0>` to `|c_i>|i>`.
    decode_perm: Vec<usize>,
    observable: PauliString,
}

const ENCODE_CHECK_POINTS: usize = 11;
const ENCODE_CHECK_TOL: f64 = 1e-9;

pub fn encode_logical(probe: &Probe) -> Result<LogicalProbe> {
    let code = build_code(probe)?;
    let cd = code.code_dim();
    let na = (usize::BITS - (cd - 1).leading_zeros()) as usize;
    let na = if cd == 1 { 0 } else { na };
    let n_total = code.n_data + na;
    if n_total > 10 {
        return Err(Error::BadDimension(1 << n_total));
    }
    let psi0 = probe.state();
    let amplitudes: Vec<Complex64> = code.code_basis.iter().map(|&b| psi0[b]).collect();
    let weight: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
    if (weight - 1.0).abs() > 1e-10 {
        return Err(Error::Qec(format!("probe state has weight {weight} in the code space")));
    }
    let dim = 1usize << n_total;
    let mut state = vec![Complex64::new(0.0, 0.0); dim];
    for (i, (&c, &s)) in code.code_basis.iter().zip(&amplitudes).enumerate() {
        state[(c << na) | i] = s;
    }
    let decode_perm = decoding_permutation(&code.code_basis, na, dim);
    let lp = LogicalProbe {
        code,
        amplitudes,
        n_ancilla: na,
        state,
        decode_perm,
        observable: probe.observable,
    };
    let (lo, hi) = probe.domain;
    for k in 0..ENCODE_CHECK_POINTS {
        let phi = lo + (hi - lo) * k as f64 / (ENCODE_CHECK_POINTS - 1) as f64;
        let bare = bare_expectation(probe, phi)?;
        let enc = lp.expectation(phi, &PauliProbs::new(1.0, 0.0, 0.0, 0.0)?)?;
        if (bare - enc).abs() > ENCODE_CHECK_TOL {
            return Err(Error::Qec(format!(
                "noiseless decode reproduces {enc} instead of {bare} at phi = {phi}"
            )));
        }
    }
    Ok(lp)
}

fn bare_expectation(probe: &Probe, phi: f64) -> Result<f64> {
    let v = signal_vector(probe, phi);
    let av = probe.observable.apply_to_vector(&v)?;
    Ok(v.iter().zip(&av).map(|(a, b)| a.conj() * b).sum::<Complex64>().re)
}

/// Permutation completion of `|c_i>|0> -> |c_i>|i>`: leftover inputs map to
/// leftover outputs, both in index order.
fn decoding_permutation(basis: &[usize], na: usize, dim: usize) -> Vec<usize> {
    let mut perm = vec![usize::MAX; dim];
    let mut used_out = vec![false; dim];
    for (i, &c) in basis.iter().enumerate() {
        let out = (c << na) | i;
        perm[c << na] = out;
        used_out[out] = true;
    }
    let mut free_out = (0..dim).filter(|&o| !used_out[o]);
    for p in perm.iter_mut() {
        if *p == usize::MAX {
            *p = free_out.next().expect("permutation sizes agree");
        }
    }
    perm
}

impl LogicalProbe {
    pub fn n_total(&self) -> usize {
        self.code.n_data + self.n_ancilla
    }

    pub fn dim(&self) -> usize {
        1 << self.n_total()
    }

    pub fn state(&self) -> &[Complex64] {
        &self.state
    }

    /// `(U(phi) ⊗ I)|psi_L0>`
    pub fn signal_state(&self, phi: f64) -> Vec<Complex64> {
        let u = signal_phases(self.code.n_data, phi);
        self.state
            .iter()
            .enumerate()
            .map(|(a, s)| s * u[a >> self.n_ancilla])
            .collect()
    }

    /// Recovery output `R o E o U_phi (|psi_L0><psi_L0|)`, before decoding.
    pub fn corrected_state(&self, phi: f64, probs: &PauliProbs) -> Result<DensityMatrix> {
        let rho = ComplexMatrix::outer(&self.signal_state(phi));
        let noisy = apply_channel_on(&rho, probs, self.code.n_data, self.n_total())?;
        let decoder = build_decoder(&self.code, probs)?;
        Ok(DensityMatrix::from_channel_output(recover(&noisy, &self.code, &decoder, self.n_ancilla)?))
    }

    /// `V^dagger rho V`, then trace out the ancilla.
    pub fn decode(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        if rho.dim() != self.dim() {
            return Err(Error::DimensionMismatch(rho.dim(), self.dim()));
        }
        let na = self.n_ancilla;
        let da = 1usize << na;
        let dd = 1usize << self.code.n_data;
        let p = &self.decode_perm;
        Ok(ComplexMatrix::from_fn(dd, |b, b2| {
            (0..da).map(|k| rho[(p[(b << na) | k], p[(b2 << na) | k])]).sum()
        }))
    }

    /// Expectation of the probe observable after encode, signal, noise, recovery and decoding.
    pub fn expectation(&self, phi: f64, probs: &PauliProbs) -> Result<f64> {
        let rho = self.corrected_state(phi, probs)?;
        let data = self.decode(rho.matrix())?;
        Ok(pauli_trace(&self.observable, &data)?.re)
    }
}

/// Syndrome → correction on the data qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct DecoderTable {
    pub n_data: usize,
    pub table: BTreeMap<u32, PauliString>,
}

impl DecoderTable {
    pub fn correction(&self, syndrome: u32) -> PauliString {
        match self.table.get(&syndrome) {
            Some(p) => *p,
            None => {
                log::debug!("syndrome {syndrome:b} unreachable at first order; no correction");
                PauliString::identity(self.n_data)
            }
        }
    }
}

/// Weight-one maximum-likelihood decoder: the X syndrome of qubit `i` is
/// corrected by `X_i` when `p_x >= p_y`, else by `Y_i`.
pub fn build_decoder(code: &StabilizerCode, probs: &PauliProbs) -> Result<DecoderTable> {
    probs.validate()?;
    let n = code.n_data;
    let mut table = BTreeMap::new();
    table.insert(0u32, PauliString::identity(n));
    if probs.p_x + probs.p_y > 0.0 {
        let kind = if probs.p_x >= probs.p_y { 'X' } else { 'Y' };
        for q in 0..n {
            let s = code.syndrome(&PauliString::single(n, q, 'X')?)?;
            table.entry(s).or_insert(PauliString::single(n, q, kind)?);
        }
    }
    Ok(DecoderTable { n_data: n, table })
}

/// `sum_s C_s Pi_s rho Pi_s C_s^dagger` with syndromes read off the data qubits.
pub fn recover(
    rho: &ComplexMatrix,
    code: &StabilizerCode,
    decoder: &DecoderTable,
    n_ancilla: usize,
) -> Result<ComplexMatrix> {
    let n_total = code.n_data + n_ancilla;
    let dim = 1usize << n_total;
    if rho.dim() != dim {
        return Err(Error::DimensionMismatch(rho.dim(), dim));
    }
    let syn: Vec<u32> = (0..dim).map(|a| code.syndrome_of_index(a >> n_ancilla)).collect();
    let mut corrections = BTreeMap::new();
    for &s in &syn {
        if let std::collections::btree_map::Entry::Vacant(e) = corrections.entry(s) {
            e.insert(decoder.correction(s).extend(n_ancilla)?);
        }
    }
    let maps: Vec<(usize, Complex64)> = (0..dim).map(|a| corrections[&syn[a]].apply_to_basis(a)).collect();
    let mut out = ComplexMatrix::zeros(dim);
    for r in 0..dim {
        let (tr, fr) = maps[r];
        for c in 0..dim {
            if syn[r] != syn[c] {
                continue;
            }
            let (tc, fc) = maps[c];
            out[(tr, tc)] += fr * rho[(r, c)] * fc.conj();
        }
    }
    Ok(out)
}

/// Expectation of the probe observable through the QEC pipeline.
pub fn qec_expectation(logical: &LogicalProbe, phi: f64, noise: &NoiseSpec) -> Result<f64> {
    logical.expectation(phi, &noise.probs())
}

/// First-order corrected state
/// `(1 - N p_z - N m)|psi_L><psi_L| + (p_z + m) sum_i Z_i|psi_L><psi_L|Z_i`, `m = min(p_x, p_y)`.
///
/// Valid only when every single-qubit X error is correctable, or when the
/// noise has no X/Y component.
pub fn first_order_qec_state(logical: &LogicalProbe, phi: f64, noise: &NoiseSpec) -> Result<DensityMatrix> {
    let p = noise.probs();
    if p.p_x + p.p_y > 0.0 && !logical.code.corrects_single_x()? {
        return Err(Error::Qec("code does not correct every single-qubit X error".into()));
    }
    let n = logical.code.n_data;
    let m = p.p_x.min(p.p_y);
    let w1 = p.p_z + m;
    let w0 = 1.0 - n as f64 * w1;
    if w0 < 0.0 {
        return Err(Error::Qec(format!("leading weight {w0} is negative")));
    }
    let psi = logical.signal_state(phi);
    let mut rho = ComplexMatrix::outer(&psi).scale(Complex64::new(w0, 0.0));
    for q in 0..n {
        let z = PauliString::single(logical.n_total(), q, 'Z')?;
        rho.add_scaled(&ComplexMatrix::outer(&z.apply_to_vector(&psi)?), w1)?;
    }
    let tr = rho.trace().re;
    DensityMatrix::new(rho.scale(Complex64::new(1.0 / tr, 0.0)))
}

#[derive(Clone, Debug, PartialEq)]
pub struct TradeoffReport {
    /// 0-based qubits `j` with `Pi Z_j Pi ∝ Pi`.
    pub z_correctable: Vec<usize>,
    /// Largest minus smallest eigenvalue of `Pi H Pi` on the code space.
    pub h_spread: f64,
    /// Largest `<H^2> - <H>^2` over code states, `(spread / 2)^2`.
    pub max_h_variance: f64,
    /// Holds unless every Z is correctable while the spread is nonzero.
    pub no_go_holds: bool,
}

const KL_TOL: f64 = 1e-10;

/// Knill–Laflamme diagonal test for each single-qubit Z and the spread of
/// `H = sum Z_i` on the code space spanned by the orthonormal `basis` vectors.
pub fn check_c2_c3_tradeoff(n: usize, basis: &[Vec<Complex64>]) -> Result<TradeoffReport> {
    let dim = 1usize << n;
    if basis.is_empty() || basis.iter().any(|v| v.len() != dim) {
        return Err(Error::Qec("code basis must be nonempty vectors on n qubits".into()));
    }
    let k = basis.len();
    let gram = |op: &dyn Fn(&[Complex64]) -> Vec<Complex64>| -> ComplexMatrix {
        let images: Vec<Vec<Complex64>> = basis.iter().map(|v| op(v)).collect();
        ComplexMatrix::from_fn(k, |a, b| basis[a].iter().zip(&images[b]).map(|(x, y)| x.conj() * y).sum())
    };
    let ident = gram(&|v| v.to_vec());
    if ident.max_abs_diff(&ComplexMatrix::identity(k))? > 1e-10 {
        return Err(Error::Qec("code basis is not orthonormal".into()));
    }
    let mut z_correctable = Vec::new();
    for q in 0..n {
        let z = PauliString::single(n, q, 'Z')?;
        let g = gram(&|v| z.apply_to_vector(v).expect("sizes checked"));
        let c = g.trace() / k as f64;
        if g.max_abs_diff(&ComplexMatrix::identity(k).scale(c))? < KL_TOL {
            z_correctable.push(q);
        }
    }
    let h = gram(&|v| v.iter().enumerate().map(|(b, a)| a * h_eigenvalue(n, b)).collect());
    let eig = hermitian_eig(&h)?;
    let h_spread = eig.eigenvalues[0] - eig.eigenvalues[k - 1];
    let no_go_holds = z_correctable.len() < n || h_spread.abs() < 1e-9;
    Ok(TradeoffReport { z_correctable, h_spread, max_h_variance: 0.25 * h_spread * h_spread, no_go_holds })
}

/// Code basis vectors of a stabilizer code, as dense states.
pub fn code_basis_vectors(code: &StabilizerCode) -> Vec<Vec<Complex64>> {
    let dim = 1usize << code.n_data;
    code.code_basis
        .iter()
        .map(|&b| {
            let mut v = vec![Complex64::new(0.0, 0.0); dim];
            v[b] = Complex64::new(1.0, 0.0);
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stabilizer::builtin_probe;

    #[test]
    fn ghz_code_basis_and_ancilla() {
        let p = builtin_probe("ghz5").unwrap();
        let lp = encode_logical(&p).unwrap();
        assert_eq!(lp.code.code_basis, vec![0, 31]);
        assert_eq!(lp.n_ancilla, 1);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let st = lp.state();
        assert!((st[0] - Complex64::new(s, 0.0)).norm() < 1e-15);
        assert!((st[(31 << 1) | 1] - Complex64::new(s, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn code_dimensions() {
        for (name, d, na) in [("twin5", 8, 3), ("steane7", 8, 3)] {
            let lp = encode_logical(&builtin_probe(name).unwrap()).unwrap();
            assert_eq!(lp.code.code_dim(), d);
            assert_eq!(lp.n_ancilla, na);
            let norm: f64 = lp.state().iter().map(|a| a.norm_sqr()).sum();
            assert!((norm - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn decode_permutation_is_bijective() {
        let lp = encode_logical(&builtin_probe("steane7").unwrap()).unwrap();
        let mut seen = vec![false; lp.dim()];
        for &p in &lp.decode_perm {
            assert!(!seen[p]);
            seen[p] = true;
        }
    }
}
