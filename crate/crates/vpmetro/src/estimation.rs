//! Response curves, MLE inversion, biases, statistical errors and scaling fits.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, matrix_power, pauli_trace, DensityMatrix};
use crate::noise::{noisy_state, NoiseSpec};
use crate::pauli::PauliString;
use crate::qec::{encode_logical, LogicalProbe};
use crate::stabilizer::{h_eigenvalue, Probe};

pub const DEFAULT_GRID: usize = 1001;
const IMAG_TOL: f64 = 1e-10;
const DERIV_FLOOR: f64 = 1e-12;
const CLAMP_SIGMAS: f64 = 8.0;

/// `Tr[A rho]` for a Hermitian Pauli observable.
pub fn expectation(rho: &DensityMatrix, a: &PauliString) -> Result<f64> {
    if !a.is_hermitian() {
        return Err(Error::InvalidArgument(format!("observable {a} is not Hermitian")));
    }
    let t = pauli_trace(a, rho.matrix())?;
    if t.im.abs() > IMAG_TOL {
        return Err(Error::InvalidState(format!("Tr[A rho] has imaginary part {}", t.im)));
    }
    Ok(t.re)
}

/// `(Tr[A rho^n], Tr[rho^n])`
pub fn purified_traces(rho: &DensityMatrix, a: &PauliString, n: usize) -> Result<(f64, f64)> {
    let rn = matrix_power(rho, n)?;
    let tau = rn.trace().re;
    let nu = pauli_trace(a, &rn)?.re;
    Ok((nu, tau))
}

/// `Tr[A rho^n] / Tr[rho^n]`, `n` in 1..=3.
pub fn mitigated_expectation(rho: &DensityMatrix, a: &PauliString, n: usize) -> Result<f64> {
    if !(1..=3).contains(&n) {
        return Err(Error::InvalidArgument(format!("mitigation order {n} outside 1..=3")));
    }
    if n == 1 {
        return expectation(rho, a);
    }
    let (nu, tau) = purified_traces(rho, a, n)?;
    if tau < 1e-15 {
        return Err(Error::TraceTooSmall(tau));
    }
    Ok(nu / tau)
}

/// Largest eigenvalue and its eigenvector.
pub fn dominant_eigpair(rho: &DensityMatrix) -> Result<(f64, Vec<Complex64>)> {
    let eig = hermitian_eig(rho.matrix())?;
    if eig.eigenvalues.len() > 1 {
        let gap = eig.eigenvalues[0] - eig.eigenvalues[1];
        if gap < 1e-12 {
            return Err(Error::DegenerateDominant(gap));
        }
    }
    Ok((eig.eigenvalues[0], eig.vector(0)))
}

/// `mu(phi) = sum_k Re[c_k e^{i k phi}]` with integer frequencies `k`.
#[derive(Clone, Debug)]
pub struct TrigPoly {
    terms: Vec<(f64, Complex64)>,
}

impl TrigPoly {
    pub fn for_probe(probe: &Probe) -> Self {
        let n = probe.n_qubits;
        let psi = probe.state();
        let mut coef = vec![Complex64::new(0.0, 0.0); 2 * n + 1];
        for (b, &amp) in psi.iter().enumerate() {
            if amp.norm() == 0.0 {
                continue;
            }
            let (t, f) = probe.observable.apply_to_basis(b);
            let k = ((h_eigenvalue(n, t) - h_eigenvalue(n, b)) / 2.0).round() as i64;
            coef[(k + n as i64) as usize] += psi[t].conj() * f * amp;
        }
        let terms = coef
            .into_iter()
            .enumerate()
            .filter(|(_, c)| c.norm() > 1e-15)
            .map(|(i, c)| (i as f64 - n as f64, c))
            .collect();
        Self { terms }
    }

    pub fn value(&self, phi: f64) -> f64 {
        self.terms.iter().map(|(k, c)| c.re * (k * phi).cos() - c.im * (k * phi).sin()).sum()
    }

    pub fn derivative(&self, phi: f64) -> f64 {
        self.terms.iter().map(|(k, c)| -k * (c.re * (k * phi).sin() + c.im * (k * phi).cos())).sum()
    }
}

/// Ideal response on the inversion branch.
#[derive(Clone, Debug)]
pub struct ResponseCurve {
    pub probe: String,
    pub domain: (f64, f64),
    pub phis: Vec<f64>,
    pub mus: Vec<f64>,
    /// Centered finite differences with step equal to the grid spacing.
    pub derivs: Vec<f64>,
    pub increasing: bool,
    exact: TrigPoly,
    /// Inverse nodes: `mu` ascending, with matching `phi` and PCHIP slopes `dphi/dmu`.
    inv_x: Vec<f64>,
    inv_y: Vec<f64>,
    inv_d: Vec<f64>,
}

pub fn build_response_curve(probe: &Probe, grid_size: usize) -> Result<ResponseCurve> {
    if grid_size < 101 {
        return Err(Error::InvalidArgument(format!("grid size {grid_size} below 101")));
    }
    let exact = TrigPoly::for_probe(probe);
    let (lo, hi) = probe.domain;
    let h = (hi - lo) / (grid_size - 1) as f64;
    let phis: Vec<f64> = (0..grid_size).map(|i| if i + 1 == grid_size { hi } else { lo + h * i as f64 }).collect();
    let mus: Vec<f64> = phis.iter().map(|&p| exact.value(p)).collect();
    let derivs: Vec<f64> = phis.iter().map(|&p| (exact.value(p + h) - exact.value(p - h)) / (2.0 * h)).collect();
    let increasing = mus[grid_size - 1] > mus[0];
    for i in 1..grid_size {
        let d = mus[i] - mus[i - 1];
        if (increasing && d <= 0.0) || (!increasing && d >= 0.0) {
            return Err(Error::NonMonotone(phis[i]));
        }
    }
    let (inv_x, inv_y): (Vec<f64>, Vec<f64>) = if increasing {
        (mus.clone(), phis.clone())
    } else {
        (mus.iter().rev().copied().collect(), phis.iter().rev().copied().collect())
    };
    let inv_d = pchip_slopes(&inv_x, &inv_y);
    Ok(ResponseCurve {
        probe: probe.name.clone(),
        domain: probe.domain,
        phis,
        mus,
        derivs,
        increasing,
        exact,
        inv_x,
        inv_y,
        inv_d,
    })
}

/// Fritsch–Butland slopes with the usual shape-preserving end conditions.
fn pchip_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let h: Vec<f64> = (0..n - 1).map(|i| x[i + 1] - x[i]).collect();
    let del: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / h[i]).collect();
    let mut d = vec![0.0; n];
    for i in 1..n - 1 {
        if del[i - 1] * del[i] > 0.0 {
            let w1 = 2.0 * h[i] + h[i - 1];
            let w2 = h[i] + 2.0 * h[i - 1];
            d[i] = (w1 + w2) / (w1 / del[i - 1] + w2 / del[i]);
        }
    }
    let edge = |h0: f64, h1: f64, m0: f64, m1: f64| {
        let d = ((2.0 * h0 + h1) * m0 - h0 * m1) / (h0 + h1);
        if d.signum() != m0.signum() {
            0.0
        } else if m0.signum() != m1.signum() && d.abs() > 3.0 * m0.abs() {
            3.0 * m0
        } else {
            d
        }
    };
    d[0] = edge(h[0], h[1], del[0], del[1]);
    d[n - 1] = edge(h[n - 2], h[n - 3], del[n - 2], del[n - 3]);
    d
}

impl ResponseCurve {
    /// Exact `mu(phi)`.
    pub fn mu(&self, phi: f64) -> f64 {
        self.exact.value(phi)
    }

    /// Exact `d mu / d phi`.
    pub fn dmu(&self, phi: f64) -> f64 {
        self.exact.derivative(phi)
    }

    pub fn mu_range(&self) -> (f64, f64) {
        (self.inv_x[0], self.inv_x[self.inv_x.len() - 1])
    }

    /// Monotone cubic interpolation of the inverse, without refinement.
    pub fn interpolate_inverse(&self, abar: f64) -> f64 {
        let x = &self.inv_x;
        let n = x.len();
        let a = abar.clamp(x[0], x[n - 1]);
        let i = match x.binary_search_by(|v| v.partial_cmp(&a).expect("finite")) {
            Ok(i) => return self.inv_y[i],
            Err(i) => i.clamp(1, n - 1) - 1,
        };
        let h = x[i + 1] - x[i];
        let t = (a - x[i]) / h;
        let (t2, t3) = (t * t, t * t * t);
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * self.inv_y[i] + h10 * h * self.inv_d[i] + h01 * self.inv_y[i + 1] + h11 * h * self.inv_d[i + 1]
    }

    /// `mu^{-1}(abar)` on the branch: clamp, monotone cubic guess, then a
    /// bracketed Newton polish against the exact response.
    pub fn invert_mu(&self, abar: f64) -> f64 {
        let x = &self.inv_x;
        let n = x.len();
        if abar.is_nan() {
            return f64::NAN;
        }
        if abar <= x[0] {
            return self.inv_y[0];
        }
        if abar >= x[n - 1] {
            return self.inv_y[n - 1];
        }
        let i = match x.binary_search_by(|v| v.partial_cmp(&abar).expect("finite")) {
            Ok(i) => return self.refine_node(i, abar),
            Err(i) => i - 1,
        };
        let (mut a, mut b) = (self.inv_y[i], self.inv_y[i + 1]);
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        let guess = self.interpolate_inverse(abar).clamp(a, b);
        self.polish(abar, guess, a, b)
    }

    fn refine_node(&self, i: usize, abar: f64) -> f64 {
        let phi = self.inv_y[i];
        let n = self.inv_y.len();
        let lo = self.inv_y[i.saturating_sub(1)].min(self.inv_y[(i + 1).min(n - 1)]);
        let hi = self.inv_y[i.saturating_sub(1)].max(self.inv_y[(i + 1).min(n - 1)]);
        self.polish(abar, phi, lo, hi)
    }

    fn polish(&self, target: f64, guess: f64, mut a: f64, mut b: f64) -> f64 {
        let f = |p: f64| self.exact.value(p) - target;
        let mut fa = f(a);
        let mut x = guess;
        for _ in 0..200 {
            let fx = f(x);
            if fx == 0.0 {
                return x;
            }
            if (fx > 0.0) == (fa > 0.0) {
                a = x;
                fa = fx;
            } else {
                b = x;
            }
            let d = self.exact.derivative(x);
            let newton = x - fx / d;
            let next = if d != 0.0 && newton > a.min(b) && newton < a.max(b) { newton } else { 0.5 * (a + b) };
            if (next - x).abs() <= 4.0 * f64::EPSILON * x.abs().max(1e-300) || (a - b).abs() <= 4.0 * f64::EPSILON * a.abs().max(b.abs()) {
                return next;
            }
            x = next;
        }
        x
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    Noisy,
    Qec,
    Vp(usize),
}

impl Scheme {
    pub fn order(&self) -> usize {
        match self {
            Scheme::Vp(n) => *n,
            _ => 1,
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scheme::Noisy => f.write_str("noisy"),
            Scheme::Qec => f.write_str("qec"),
            Scheme::Vp(n) => write!(f, "vp{n}"),
        }
    }
}

impl FromStr for Scheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "noisy" | "error" => Ok(Scheme::Noisy),
            "qec" => Ok(Scheme::Qec),
            _ => match s.strip_prefix("vp").map(str::parse::<usize>) {
                Some(Ok(n)) if (1..=3).contains(&n) => Ok(Scheme::Vp(n)),
                _ => Err(Error::Config(format!("unknown scheme {s:?}"))),
            },
        }
    }
}

impl Serialize for Scheme {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Scheme {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// How the budget `M` is split for the VP estimators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Accounting {
    /// `M` counts state copies; each VP shot consumes `2n` of them.
    #[default]
    Copies,
    /// `M` counts shots of each estimator.
    Shots,
}

impl fmt::Display for Accounting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Accounting::Copies => "copies",
            Accounting::Shots => "shots",
        })
    }
}

impl FromStr for Accounting {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "copies" => Ok(Self::Copies),
            "shots" => Ok(Self::Shots),
            _ => Err(Error::Config(format!("unknown accounting {s:?}"))),
        }
    }
}

/// Probe plus the objects every evaluation needs.
#[derive(Clone, Debug)]
pub struct ProbeContext {
    pub probe: Probe,
    pub curve: ResponseCurve,
    pub logical: Option<LogicalProbe>,
}

impl ProbeContext {
    pub fn new(probe: Probe) -> Result<Self> {
        let curve = build_response_curve(&probe, DEFAULT_GRID)?;
        let logical = match probe.qec {
            Some(_) => Some(encode_logical(&probe)?),
            None => None,
        };
        Ok(Self { probe, curve, logical })
    }

    pub fn logical(&self) -> Result<&LogicalProbe> {
        self.logical
            .as_ref()
            .ok_or_else(|| Error::Qec(format!("probe {} cannot be encoded", self.probe.name)))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BiasReport {
    pub phi: f64,
    pub delta: f64,
    pub scheme: Scheme,
    pub mu_ideal: f64,
    pub mu_scheme: f64,
    /// `mu^{-1}(mu_scheme) - phi`
    pub bias: f64,
    /// Estimator mean `mu^{-1}(mu_scheme)`.
    pub phi_scheme: f64,
    /// Dominant eigenvalue of the noisy state.
    pub lambda: f64,
    /// `Tr[A rho^n]` and `Tr[rho^n]` for VP schemes.
    pub traces: Option<(f64, f64)>,
}

/// All requested schemes at one `(phi, noise)` point, sharing the noisy state.
pub fn evaluate_point(ctx: &ProbeContext, phi: f64, noise: &NoiseSpec, schemes: &[Scheme]) -> Result<Vec<BiasReport>> {
    let rho = noisy_state(&ctx.probe, phi, noise)?;
    let lambda = hermitian_eig(rho.matrix())?.eigenvalues[0];
    let a = &ctx.probe.observable;
    let mu_ideal = ctx.curve.mu(phi);
    schemes
        .iter()
        .map(|&scheme| {
            let (mu_scheme, traces) = match scheme {
                Scheme::Noisy => (expectation(&rho, a)?, None),
                Scheme::Qec => (ctx.logical()?.expectation(phi, &noise.probs())?, None),
                Scheme::Vp(1) => (expectation(&rho, a)?, Some((expectation(&rho, a)?, 1.0))),
                Scheme::Vp(n) => {
                    let (nu, tau) = purified_traces(&rho, a, n)?;
                    if tau < 1e-15 {
                        return Err(Error::TraceTooSmall(tau));
                    }
                    (nu / tau, Some((nu, tau)))
                }
            };
            let phi_scheme = ctx.curve.invert_mu(mu_scheme);
            Ok(BiasReport {
                phi,
                delta: noise.delta,
                scheme,
                mu_ideal,
                mu_scheme,
                bias: phi_scheme - phi,
                phi_scheme,
                lambda,
                traces,
            })
        })
        .collect()
}

pub fn theoretical_bias(ctx: &ProbeContext, phi: f64, noise: &NoiseSpec, scheme: Scheme) -> Result<BiasReport> {
    Ok(evaluate_point(ctx, phi, noise, &[scheme])?.remove(0))
}

/// Shots per estimator for a budget `m`.
pub fn shots_for(scheme: Scheme, m: u64, accounting: Accounting) -> u64 {
    match (scheme, accounting) {
        (Scheme::Vp(n), Accounting::Copies) => m / (2 * n as u64),
        _ => m,
    }
}

/// Asymptotic variance of the estimator (radians²) for budget `m`.
pub fn theoretical_stat_error(ctx: &ProbeContext, report: &BiasReport, m: u64, accounting: Accounting) -> Result<f64> {
    if m == 0 {
        return Err(Error::InvalidArgument("M must be at least 1".into()));
    }
    let d = ctx.curve.dmu(report.phi_scheme);
    if d.abs() < DERIV_FLOOR {
        return Err(Error::NonIdentifiable(d));
    }
    let numer = match (report.scheme, report.traces) {
        (Scheme::Vp(n), Some((nu, tau))) if n > 1 => {
            let k = match accounting {
                Accounting::Copies => m as f64 / (2 * n) as f64,
                Accounting::Shots => m as f64,
            };
            ((1.0 - nu * nu) / (tau * tau) + nu * nu * (1.0 - tau * tau) / tau.powi(4)) / k
        }
        _ => (1.0 - report.mu_scheme * report.mu_scheme) / m as f64,
    };
    // Far outside the response range every estimate clamps to the same endpoint.
    let (lo, hi) = ctx.curve.mu_range();
    let outside = (lo - report.mu_scheme).max(report.mu_scheme - hi);
    if outside > CLAMP_SIGMAS * numer.sqrt() {
        return Ok(0.0);
    }
    Ok(numer / (d * d))
}

/// `sum_k (1 - (-1)^{sigma_k})` for the X, Y and Z indicator of the observable.
pub fn sign_flip_counts(a: &PauliString) -> (f64, f64, f64) {
    let n = a.n_qubits();
    let (mut sx, mut sy, mut sz) = (0.0, 0.0, 0.0);
    for q in 0..n {
        let bit = 1u64 << (n - 1 - q);
        let x = (a.x_bits() & bit != 0) as u32;
        let z = (a.z_bits() & bit != 0) as u32;
        sx += 2.0 * (x & 1) as f64;
        sz += 2.0 * (z & 1) as f64;
        sy += 2.0 * ((x + z) & 1) as f64;
    }
    (sx, sy, sz)
}

/// First-order noisy bias for `p_x = p_y`:
/// `-[2 p_x S_z + 2 p_y S_y + 2 p_z S_x] mu / mu'`.
pub fn first_order_noisy_bias(ctx: &ProbeContext, phi: f64, noise: &NoiseSpec) -> f64 {
    let p = noise.probs();
    let (sx, sy, sz) = sign_flip_counts(&ctx.probe.observable);
    -(2.0 * p.p_x * sz + 2.0 * p.p_y * sy + 2.0 * p.p_z * sx) * ctx.curve.mu(phi) / ctx.curve.dmu(phi)
}

/// First-order QEC bias `-(min(p_x, p_y) + p_z) S_x mu / mu'`.
pub fn first_order_qec_bias(ctx: &ProbeContext, phi: f64, noise: &NoiseSpec) -> f64 {
    let p = noise.probs();
    let (sx, _, _) = sign_flip_counts(&ctx.probe.observable);
    -(p.p_x.min(p.p_y) + p.p_z) * sx * ctx.curve.mu(phi) / ctx.curve.dmu(phi)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalingFit {
    pub deltas: Vec<f64>,
    pub values: Vec<f64>,
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

pub const FIT_R2_MIN: f64 = 0.99;
const FIT_FLOOR: f64 = 1e-13;

/// Least squares on `(ln Delta, ln |bias|)`. Points with `|bias| < 1e-13` are dropped.
pub fn scaling_exponent(points: &[(f64, f64)]) -> Result<ScalingFit> {
    if points.len() < 6 {
        return Err(Error::TooFewPoints(points.len()));
    }
    let used: Vec<(f64, f64)> = points
        .iter()
        .filter(|(d, b)| b.abs() >= FIT_FLOOR && *d > 0.0 && b.is_finite())
        .map(|&(d, b)| (d, b.abs()))
        .collect();
    if used.len() < 5 {
        return Err(Error::TooFewPoints(used.len()));
    }
    let xs: Vec<f64> = used.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = used.iter().map(|p| p.1.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    let r2 = if syy == 0.0 { 1.0 } else { 1.0 - ss_res / syy };
    Ok(ScalingFit {
        deltas: used.iter().map(|p| p.0).collect(),
        values: used.iter().map(|p| p.1).collect(),
        slope,
        intercept,
        r2,
    })
}

/// `n` log-spaced points from `lo` to `hi` inclusive.
pub fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
}

/// `n` evenly spaced points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n).map(|i| if i + 1 == n { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stabilizer::builtin_probe;

    #[test]
    fn scheme_names() {
        assert_eq!("error".parse::<Scheme>().unwrap(), Scheme::Noisy);
        assert_eq!("vp3".parse::<Scheme>().unwrap(), Scheme::Vp(3));
        assert!("vp4".parse::<Scheme>().is_err());
        assert_eq!(Scheme::Vp(2).to_string(), "vp2");
    }

    #[test]
    fn exact_power_law_fit() {
        let pts: Vec<(f64, f64)> = logspace(1e-4, 1e-2, 8).into_iter().map(|d| (d, 3.0 * d * d)).collect();
        let f = scaling_exponent(&pts).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-6);
        assert!((f.r2 - 1.0).abs() < 1e-12);
        assert!(scaling_exponent(&pts[..5]).is_err());
        let mut zeroed = pts.clone();
        for p in zeroed.iter_mut().take(3) {
            p.1 = 0.0;
        }
        assert_eq!(scaling_exponent(&zeroed).unwrap().deltas.len(), 5);
        zeroed[3].1 = 0.0;
        assert!(matches!(scaling_exponent(&zeroed), Err(Error::TooFewPoints(4))));
    }

    #[test]
    fn ghz_inversion_examples() {
        let p = builtin_probe("ghz5").unwrap();
        let c = build_response_curve(&p, DEFAULT_GRID).unwrap();
        assert!((c.invert_mu(c.mu(0.05)) - 0.05).abs() < 1e-6);
        assert_eq!(c.invert_mu(1.2), std::f64::consts::PI / 10.0);
        assert!(c.invert_mu(0.0).abs() < 1e-15);
        assert!(build_response_curve(&p, 100).is_err());
    }
}
