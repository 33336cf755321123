//! Signal unitary, IIDP Pauli channels and noise-strength calibration.

use std::collections::HashMap;
use std::sync::RwLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{accumulate_conjugated, ComplexMatrix, DensityMatrix};
use crate::pauli::PauliString;
use crate::stabilizer::{h_eigenvalue, Probe};

const PROB_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NoiseKind {
    Depolarizing,
    Dephasing,
    Custom,
}

impl std::fmt::Display for NoiseKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            NoiseKind::Depolarizing => "depolarizing",
            NoiseKind::Dephasing => "dephasing",
            NoiseKind::Custom => "custom",
        })
    }
}

impl std::str::FromStr for NoiseKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "depolarizing" => Ok(Self::Depolarizing),
            "dephasing" => Ok(Self::Dephasing),
            "custom" => Ok(Self::Custom),
            _ => Err(Error::InvalidNoise(format!("unknown noise kind {s:?}"))),
        }
    }
}

/// Per-qubit probabilities `(p_I, p_x, p_y, p_z)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PauliProbs {
    pub p_i: f64,
    pub p_x: f64,
    pub p_y: f64,
    pub p_z: f64,
}

impl PauliProbs {
    pub fn new(p_i: f64, p_x: f64, p_y: f64, p_z: f64) -> Result<Self> {
        let p = Self { p_i, p_x, p_y, p_z };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.p_i, self.p_x, self.p_y, self.p_z];
        if all.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::InvalidNoise(format!("negative or non-finite probability in {all:?}")));
        }
        let s: f64 = all.iter().sum();
        if (s - 1.0).abs() > PROB_TOL {
            return Err(Error::InvalidNoise(format!("probabilities sum to {s}")));
        }
        Ok(())
    }

    pub fn is_identity(&self) -> bool {
        self.p_x == 0.0 && self.p_y == 0.0 && self.p_z == 0.0
    }
}

/// Noise family with strength `delta`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseSpec {
    pub kind: NoiseKind,
    pub delta: f64,
    /// Fixed probabilities for `NoiseKind::Custom`.
    custom: Option<PauliProbs>,
}

impl NoiseSpec {
    pub fn depolarizing(delta: f64) -> Result<Self> {
        Self::preset(NoiseKind::Depolarizing, delta)
    }

    pub fn dephasing(delta: f64) -> Result<Self> {
        Self::preset(NoiseKind::Dephasing, delta)
    }

    pub fn preset(kind: NoiseKind, delta: f64) -> Result<Self> {
        if kind == NoiseKind::Custom {
            return Err(Error::InvalidNoise("custom noise needs explicit probabilities".into()));
        }
        if !(0.0..1.0).contains(&delta) {
            return Err(Error::InvalidNoise(format!("delta {delta} outside [0, 1)")));
        }
        Ok(Self { kind, delta, custom: None })
    }

    /// Custom probabilities. `delta` is reported as `1 - p_I`.
    pub fn custom(p: PauliProbs) -> Result<Self> {
        p.validate()?;
        if !mild(&p) {
            log::warn!("custom noise {p:?} is outside the mild-noise classes; asymptotic formulas may not apply");
        }
        Ok(Self { kind: NoiseKind::Custom, delta: 1.0 - p.p_i, custom: Some(p) })
    }

    pub fn with_delta(&self, delta: f64) -> Result<Self> {
        match self.kind {
            NoiseKind::Custom => Err(Error::InvalidNoise("custom noise has no strength parameter".into())),
            k => Self::preset(k, delta),
        }
    }

    pub fn probs(&self) -> PauliProbs {
        let d = self.delta;
        match self.kind {
            NoiseKind::Depolarizing => PauliProbs { p_i: 1.0 - 0.75 * d, p_x: d / 4.0, p_y: d / 4.0, p_z: d / 4.0 },
            NoiseKind::Dephasing => PauliProbs { p_i: 1.0 - d / 2.0, p_x: 0.0, p_y: 0.0, p_z: d / 2.0 },
            NoiseKind::Custom => self.custom.expect("custom noise carries probabilities"),
        }
    }
}

/// Fixed probabilities cannot be checked asymptotically; require a dominant identity term.
fn mild(p: &PauliProbs) -> bool {
    p.p_i >= 0.5
}

/// JSON form: `{"kind":"depolarizing","delta":0.05}` or
/// `{"kind":"custom","pI":..,"px":..,"py":..,"pz":..}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum NoiseJson {
    Depolarizing {
        delta: f64,
    },
    Dephasing {
        delta: f64,
    },
    Custom {
        #[serde(rename = "pI")]
        p_i: f64,
        px: f64,
        py: f64,
        pz: f64,
    },
}

impl NoiseJson {
    pub fn to_spec(&self) -> Result<NoiseSpec> {
        match *self {
            NoiseJson::Depolarizing { delta } => NoiseSpec::depolarizing(delta),
            NoiseJson::Dephasing { delta } => NoiseSpec::dephasing(delta),
            NoiseJson::Custom { p_i, px, py, pz } => NoiseSpec::custom(PauliProbs::new(p_i, px, py, pz)?),
        }
    }

    pub fn from_spec(s: &NoiseSpec) -> Self {
        match s.kind {
            NoiseKind::Depolarizing => NoiseJson::Depolarizing { delta: s.delta },
            NoiseKind::Dephasing => NoiseJson::Dephasing { delta: s.delta },
            NoiseKind::Custom => {
                let p = s.probs();
                NoiseJson::Custom { p_i: p.p_i, px: p.p_x, py: p.p_y, pz: p.p_z }
            }
        }
    }
}

/// Diagonal of `U(phi) = exp(-i phi/2 sum Z)`.
pub fn signal_phases(n: usize, phi: f64) -> Vec<Complex64> {
    (0..1usize << n)
        .map(|b| Complex64::from_polar(1.0, -0.5 * phi * h_eigenvalue(n, b)))
        .collect()
}

pub fn signal_unitary(n: usize, phi: f64) -> ComplexMatrix {
    ComplexMatrix::from_diag(&signal_phases(n, phi))
}

/// Single-qubit Pauli channel on each of the first `n_noisy` qubits of a register
/// of `n_total` qubits.
pub fn apply_channel_on(m: &ComplexMatrix, p: &PauliProbs, n_noisy: usize, n_total: usize) -> Result<ComplexMatrix> {
    p.validate()?;
    if m.dim() != 1 << n_total || n_noisy > n_total {
        return Err(Error::DimensionMismatch(m.dim(), 1 << n_total));
    }
    if p.is_identity() {
        return Ok(m.clone());
    }
    let mut cur = m.clone();
    for q in 0..n_noisy {
        let mut next = cur.scale(Complex64::new(p.p_i, 0.0));
        for (kind, w) in [('X', p.p_x), ('Y', p.p_y), ('Z', p.p_z)] {
            if w > 0.0 {
                accumulate_conjugated(&mut next, &PauliString::single(n_total, q, kind)?, &cur, w)?;
            }
        }
        cur = next;
    }
    Ok(cur)
}

/// `E_Delta` acting on every qubit.
pub fn apply_channel(rho: &DensityMatrix, noise: &NoiseSpec) -> Result<DensityMatrix> {
    let d = rho.dim();
    let n = d.trailing_zeros() as usize;
    let out = apply_channel_on(rho.matrix(), &noise.probs(), n, n)?;
    Ok(DensityMatrix::from_channel_output(out))
}

/// `E o U_phi o E (|psi0><psi0|)`.
pub fn noisy_state(probe: &Probe, phi: f64, noise: &NoiseSpec) -> Result<DensityMatrix> {
    let n = probe.n_qubits;
    let p = noise.probs();
    let rho0 = ComplexMatrix::outer(probe.state());
    let a = apply_channel_on(&rho0, &p, n, n)?;
    let b = a.conjugate_diag(&signal_phases(n, phi))?;
    let c = apply_channel_on(&b, &p, n, n)?;
    Ok(DensityMatrix::from_channel_output(c))
}

/// Noiseless signal state `U(phi)|psi0>`.
pub fn signal_vector(probe: &Probe, phi: f64) -> Vec<Complex64> {
    signal_phases(probe.n_qubits, phi)
        .iter()
        .zip(probe.state())
        .map(|(u, a)| u * a)
        .collect()
}

pub const CALIBRATION_PHI: f64 = 0.01;
pub const CALIBRATION_TOL: f64 = 1e-8;
const CALIBRATION_ITERS: usize = 60;
const CALIBRATION_BRACKET: (f64, f64) = (0.0, 0.5);

/// Largest eigenvalue of the noisy state.
pub fn dominant_eigenvalue(probe: &Probe, phi: f64, noise: &NoiseSpec) -> Result<f64> {
    let rho = noisy_state(probe, phi, noise)?;
    Ok(crate::linalg::hermitian_eig(rho.matrix())?.eigenvalues[0])
}

/// Bisection for the strength `Delta` at which the dominant eigenvalue of the
/// noisy state at `phi_ref` equals `target`.
pub fn calibrate_strength(probe: &Probe, kind: NoiseKind, phi_ref: f64, target: f64) -> Result<f64> {
    if kind == NoiseKind::Custom {
        return Err(Error::InvalidNoise("custom noise cannot be calibrated".into()));
    }
    if !(target > 0.5 && target <= 1.0) {
        return Err(Error::CalibrationUnreachable { target });
    }
    let lam = |d: f64| dominant_eigenvalue(probe, phi_ref, &NoiseSpec::preset(kind, d)?);
    let (mut lo, mut hi) = CALIBRATION_BRACKET;
    let l_lo = lam(lo)?;
    if (l_lo - target).abs() < CALIBRATION_TOL {
        return Ok(lo);
    }
    let l_hi = lam(hi)?;
    if !(l_lo > target && l_hi < target) {
        return Err(Error::CalibrationUnreachable { target });
    }
    for _ in 0..CALIBRATION_ITERS {
        let mid = 0.5 * (lo + hi);
        let l = lam(mid)?;
        if (l - target).abs() < CALIBRATION_TOL {
            return Ok(mid);
        }
        if l > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mid = 0.5 * (lo + hi);
    let l = lam(mid)?;
    if (l - target).abs() < CALIBRATION_TOL {
        Ok(mid)
    } else {
        Err(Error::CalibrationUnreachable { target })
    }
}

type CalKey = (String, NoiseKind, u64, u64);

/// Memoised calibrations keyed by (probe, kind, phi_ref, target).
#[derive(Default)]
pub struct CalibrationCache {
    table: RwLock<HashMap<CalKey, f64>>,
}

impl CalibrationCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get_or_calibrate(&self, probe: &Probe, kind: NoiseKind, phi_ref: f64, target: f64) -> Result<f64> {
        let key = (probe.name.clone(), kind, phi_ref.to_bits(), target.to_bits());
        if let Some(d) = self.table.read().expect("calibration cache poisoned").get(&key) {
            return Ok(*d);
        }
        let d = calibrate_strength(probe, kind, phi_ref, target)?;
        self.table.write().expect("calibration cache poisoned").entry(key).or_insert(d);
        Ok(d)
    }

    pub fn len(&self) -> usize {
        self.table.read().expect("calibration cache poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
