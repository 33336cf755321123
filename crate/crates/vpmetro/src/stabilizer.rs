//! Stabilizer groups, stabilizer states and the built-in probes.

use std::f64::consts::PI;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{normalize_phase, ComplexMatrix, DensityMatrix};
use crate::pauli::PauliString;

/// Independent, commuting, Hermitian generators.
#[derive(Clone, Debug, PartialEq)]
pub struct StabilizerGroup {
    n: usize,
    generators: Vec<PauliString>,
}

const MAX_ENUMERATED: usize = 20;

/// GF(2) rank of symplectic vectors.
fn symplectic_rank(gens: &[PauliString]) -> usize {
    let mut rows: Vec<u128> = gens
        .iter()
        .map(|g| ((g.x_bits() as u128) << 64) | g.z_bits() as u128)
        .collect();
    let mut rank = 0;
    for bit in (0..128).rev() {
        let m = 1u128 << bit;
        if let Some(i) = (rank..rows.len()).find(|&i| rows[i] & m != 0) {
            rows.swap(rank, i);
            let pivot = rows[rank];
            for (j, r) in rows.iter_mut().enumerate() {
                if j != rank && *r & m != 0 {
                    *r ^= pivot;
                }
            }
            rank += 1;
        }
    }
    rank
}

impl StabilizerGroup {
    pub fn new(n: usize, generators: Vec<PauliString>) -> Result<Self> {
        for g in &generators {
            if g.n_qubits() != n {
                return Err(Error::InvalidGroup(format!("{g} is not on {n} qubits")));
            }
            if !g.is_hermitian() {
                return Err(Error::InvalidGroup(format!("{g} has a non-real phase")));
            }
        }
        for (i, a) in generators.iter().enumerate() {
            for b in &generators[i + 1..] {
                if !a.commutes(b)? {
                    return Err(Error::InvalidGroup(format!("{a} and {b} anticommute")));
                }
            }
        }
        if symplectic_rank(&generators) != generators.len() {
            return Err(Error::InvalidGroup("generators are not independent".into()));
        }
        let group = Self { n, generators };
        if group.generators.len() <= 7 {
            for e in group.elements()? {
                if e.is_identity_up_to_phase() && e.phase() != 0 {
                    return Err(Error::InvalidGroup("group contains -I".into()));
                }
            }
        }
        Ok(group)
    }

    pub fn parse(gens: &[&str]) -> Result<Self> {
        let gens: Vec<PauliString> = gens.iter().map(|s| s.parse()).collect::<Result<_>>()?;
        let n = gens.first().map(|g| g.n_qubits()).ok_or_else(|| Error::InvalidGroup("empty".into()))?;
        Self::new(n, gens)
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[PauliString] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// All `2^k` group elements; element `m` is the ordered product of generators
    /// selected by the bits of `m`.
    pub fn elements(&self) -> Result<Vec<PauliString>> {
        let k = self.generators.len();
        if k > MAX_ENUMERATED {
            return Err(Error::InvalidGroup(format!("{k} generators is too many to enumerate")));
        }
        let mut out = Vec::with_capacity(1 << k);
        for m in 0usize..1 << k {
            let mut p = PauliString::identity(self.n);
            for (j, g) in self.generators.iter().enumerate() {
                if m >> j & 1 == 1 {
                    p = p.multiply(g)?;
                }
            }
            out.push(p);
        }
        Ok(out)
    }

    pub fn contains(&self, p: &PauliString) -> Result<bool> {
        Ok(self.elements()?.contains(p))
    }

    /// Same set of elements, irrespective of the generating set.
    pub fn same_group(&self, other: &Self) -> Result<bool> {
        if self.n != other.n || self.len() != other.len() {
            return Ok(false);
        }
        for g in &other.generators {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Subgroup of elements commuting with every single-qubit Z, i.e. those with
    /// empty X support. Found by eliminating X bits; the surviving rows keep the
    /// order of the original generators.
    pub fn commuting_subgroup(&self) -> Result<Self> {
        let mut rows = self.generators.clone();
        let mut pivot = vec![false; rows.len()];
        for q in 0..self.n {
            let bit = 1u64 << (self.n - 1 - q);
            let Some(p) = (0..rows.len()).find(|&i| !pivot[i] && rows[i].x_bits() & bit != 0) else {
                continue;
            };
            pivot[p] = true;
            let pr = rows[p];
            for (i, r) in rows.iter_mut().enumerate() {
                if i != p && r.x_bits() & bit != 0 {
                    *r = r.multiply(&pr)?;
                }
            }
        }
        let gens: Vec<PauliString> = rows
            .into_iter()
            .zip(pivot)
            .filter(|(_, is_pivot)| !is_pivot)
            .map(|(r, _)| r)
            .collect();
        debug_assert!(gens.iter().all(|g| g.x_bits() == 0));
        Self::new(self.n, gens)
    }
}

/// State vector stabilized by a full set of `n` generators.
///
/// The projector product is applied to `|0...0>`, then to later basis states in
/// index order until the result is nonzero; the first nonzero amplitude is made
/// real and positive.
pub fn stabilizer_vector(g: &StabilizerGroup) -> Result<Vec<Complex64>> {
    let n = g.n_qubits();
    if g.len() != n {
        return Err(Error::InvalidGroup(format!("{} generators for {n} qubits", g.len())));
    }
    if n > 10 {
        return Err(Error::BadDimension(1 << n.min(63)));
    }
    let dim = 1usize << n;
    for b in 0..dim {
        let mut v = vec![Complex64::new(0.0, 0.0); dim];
        v[b] = Complex64::new(1.0, 0.0);
        for s in g.generators() {
            let sv = s.apply_to_vector(&v)?;
            for (a, t) in v.iter_mut().zip(sv) {
                *a = 0.5 * (*a + t);
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-9 {
            for a in v.iter_mut() {
                *a /= norm;
            }
            normalize_phase(&mut v);
            return Ok(v);
        }
    }
    Err(Error::InvalidGroup("projector annihilates every basis state".into()))
}

pub fn stabilizer_state(g: &StabilizerGroup) -> Result<DensityMatrix> {
    DensityMatrix::pure(&stabilizer_vector(g)?)
}

/// Eigenvalue of `H = sum_i Z_i` on basis state `b`.
#[inline]
pub fn h_eigenvalue(n: usize, b: usize) -> f64 {
    n as f64 - 2.0 * b.count_ones() as f64
}

/// `<H^2> - <H>^2` for a state vector.
pub fn variance_of_h(n: usize, v: &[Complex64]) -> f64 {
    let (mut m1, mut m2) = (0.0, 0.0);
    for (b, a) in v.iter().enumerate() {
        let w = a.norm_sqr();
        let h = h_eigenvalue(n, b);
        m1 += w * h;
        m2 += w * h * h;
    }
    m2 - m1 * m1
}

#[derive(Clone, Debug)]
pub struct QecConfig {
    pub code_generators: StabilizerGroup,
    pub n_ancilla: usize,
}

#[derive(Clone, Debug)]
pub struct Probe {
    pub name: String,
    pub n_qubits: usize,
    pub generators: StabilizerGroup,
    pub observable: PauliString,
    pub domain: (f64, f64),
    pub qec: Option<QecConfig>,
    state: Vec<Complex64>,
}

impl Probe {
    pub fn new(
        name: &str,
        generators: StabilizerGroup,
        observable: PauliString,
        domain: (f64, f64),
    ) -> Result<Self> {
        let n = generators.n_qubits();
        let bad = |m: String| Err(Error::InvalidProbe(format!("{name}: {m}")));
        if generators.len() != n {
            return bad(format!("needs {n} generators, got {}", generators.len()));
        }
        if observable.n_qubits() != n || !observable.is_hermitian() {
            return bad(format!("observable {observable} must be Hermitian on {n} qubits"));
        }
        if observable.x_bits() == 0 {
            return bad("observable commutes with every Z, so it carries no signal".into());
        }
        if !domain.0.is_finite() || !domain.1.is_finite() || domain.0 >= domain.1 {
            return bad(format!("empty inversion domain {domain:?}"));
        }
        if let Some(e) = generators.elements()?.into_iter().find(|e| e.weight() == 1) {
            return bad(format!("group contains the single-qubit Pauli {e}"));
        }
        let state = stabilizer_vector(&generators)?;
        for g in generators.generators() {
            let gv = g.apply_to_vector(&state)?;
            let dev = gv.iter().zip(&state).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            if dev > 1e-10 {
                return bad(format!("state not stabilized by {g}"));
            }
        }
        let sub = generators.commuting_subgroup()?;
        let qec = if sub.is_empty() {
            None
        } else {
            let n_ancilla = n - sub.len();
            Some(QecConfig { code_generators: sub, n_ancilla })
        };
        Ok(Self { name: name.to_string(), n_qubits: n, generators, observable, domain, qec, state })
    }

    /// `|psi_0>`
    pub fn state(&self) -> &[Complex64] {
        &self.state
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn variance_of_hamiltonian(&self) -> f64 {
        variance_of_h(self.n_qubits, &self.state)
    }

    pub fn observable_matrix(&self) -> ComplexMatrix {
        self.observable.to_matrix()
    }
}

pub const BUILTIN_PROBES: [&str; 3] = ["ghz5", "twin5", "steane7"];

pub fn builtin_probe(name: &str) -> Result<Probe> {
    let (gens, obs, domain): (&[&str], &str, (f64, f64)) = match name {
        "ghz5" => (
            &["+ZZIII", "+IZZII", "+IIZZI", "+IIIZZ", "+XXXXX"],
            "+YYYYY",
            (-PI / 10.0, PI / 10.0),
        ),
        "twin5" => (
            &["+IZIIZ", "+IIZZI", "+IXXYX", "+XYIIY", "+YYYYX"],
            "+YYYYX",
            (0.0, PI / 10.0),
        ),
        "steane7" => (
            &["+IZZZZII", "+IIIZZZZ", "+ZIZIZIZ", "+ZZZZZZZ", "+IXXXXII", "+IIIXXXX", "+XIXIXIX"],
            "+IIIXXXX",
            (0.0, PI / 10.0),
        ),
        _ => return Err(Error::UnknownProbe(name.to_string())),
    };
    Probe::new(name, StabilizerGroup::parse(gens)?, obs.parse()?, domain)
}

/// JSON form of a user-defined probe.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProbeDef {
    pub name: String,
    pub generators: Vec<String>,
    pub observable: String,
    pub domain: [f64; 2],
}

impl ProbeDef {
    pub fn build(&self) -> Result<Probe> {
        for g in &self.generators {
            if !(g.starts_with('+') || g.starts_with('-')) || g.starts_with("+i") || g.starts_with("-i") {
                return Err(Error::PauliParse(format!("{g} (generators need a leading + or -)")));
            }
        }
        let refs: Vec<&str> = self.generators.iter().map(String::as_str).collect();
        let group = StabilizerGroup::parse(&refs)?;
        Probe::new(&self.name, group, self.observable.parse()?, (self.domain[0], self.domain[1]))
    }

    pub fn from_probe(p: &Probe) -> Self {
        Self {
            name: p.name.clone(),
            generators: p.generators.generators().iter().map(|g| g.to_string()).collect(),
            observable: p.observable.to_string(),
            domain: [p.domain.0, p.domain.1],
        }
    }
}

/// Reads either a single probe object or an array of them.
pub fn load_probes(path: &Path) -> Result<Vec<Probe>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read probe file {}: {e}", path.display())))?;
    parse_probes(&text)
}

/// Probe definitions from JSON text: one object or an array of them.
pub fn parse_probes(text: &str) -> Result<Vec<Probe>> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let defs: Vec<ProbeDef> = if value.is_array() {
        serde_json::from_value(value)?
    } else {
        vec![serde_json::from_value(value)?]
    };
    defs.iter().map(ProbeDef::build).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bell_state() {
        let g = StabilizerGroup::parse(&["+ZZ", "+XX"]).unwrap();
        let v = stabilizer_vector(&g).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let want = [s, 0.0, 0.0, s];
        for (a, w) in v.iter().zip(want) {
            assert!((a - Complex64::new(w, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn rejects_bad_groups() {
        assert!(StabilizerGroup::parse(&["+ZI", "+XI"]).is_err());
        assert!(StabilizerGroup::parse(&["+ZZ", "+ZZ"]).is_err());
        assert!(StabilizerGroup::parse(&["+ZZ", "-ZZ"]).is_err());
        assert!(StabilizerGroup::parse(&["+iZZ"]).is_err());
    }

    #[test]
    fn unknown_probe() {
        assert!(matches!(builtin_probe("w3"), Err(Error::UnknownProbe(_))));
    }

    #[test]
    fn product_state_has_zero_h_variance() {
        let mut v = vec![Complex64::new(0.0, 0.0); 8];
        v[0] = Complex64::new(1.0, 0.0);
        assert_eq!(variance_of_h(3, &v), 0.0);
    }

    #[test]
    fn probe_json_requires_signs() {
        let def = ProbeDef {
            name: "bell".into(),
            generators: vec!["ZZ".into(), "+XX".into()],
            observable: "+YX".into(),
            domain: [-0.3, 0.3],
        };
        assert!(def.build().is_err());
    }
}
