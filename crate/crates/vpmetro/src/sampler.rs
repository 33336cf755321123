//! Monte Carlo shot sampling and experiment records.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution, StandardNormal};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::estimation::{
    evaluate_point, purified_traces, shots_for, theoretical_stat_error, Accounting, BiasReport, ProbeContext, Scheme,
};
use crate::linalg::DensityMatrix;
use crate::noise::NoiseSpec;
use crate::pauli::PauliString;

/// Shot count at and above which `SamplingMode::Auto` uses the Gaussian limit.
pub const GAUSSIAN_THRESHOLD: u64 = 10_000_000;
const DENOMINATOR_FLOOR: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SamplingMode {
    /// Exact sum of Bernoulli outcomes (drawn as one binomial variate).
    Exact,
    /// Normal approximation of the outcome mean.
    Gaussian,
    /// Gaussian for at least `GAUSSIAN_THRESHOLD` shots, exact below.
    #[default]
    Auto,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShotPlan {
    pub m: u64,
    pub scheme: Scheme,
    pub accounting: Accounting,
    pub seed: u64,
    pub mode: SamplingMode,
}

impl ShotPlan {
    pub fn new(m: u64, scheme: Scheme, accounting: Accounting, seed: u64) -> Self {
        Self { m, scheme, accounting, seed, mode: SamplingMode::Auto }
    }

    pub fn shots(&self) -> u64 {
        shots_for(self.scheme, self.m, self.accounting)
    }
}

/// Generator for substream `stream` of `seed`.
pub fn substream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Mean of `shots` ±1 outcomes with `P(+1) = (1 + mu)/2`.
pub fn sample_mean<R: rand::Rng + ?Sized>(mu: f64, shots: u64, rng: &mut R, mode: SamplingMode) -> Result<f64> {
    if !(-1.0..=1.0).contains(&mu) {
        return Err(Error::InvalidArgument(format!("|mu| = {} exceeds 1", mu.abs())));
    }
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be at least 1".into()));
    }
    let gaussian = match mode {
        SamplingMode::Exact => false,
        SamplingMode::Gaussian => true,
        SamplingMode::Auto => shots >= GAUSSIAN_THRESHOLD,
    };
    if gaussian {
        let z: f64 = StandardNormal.sample(rng);
        let sd = ((1.0 - mu * mu) / shots as f64).sqrt();
        return Ok((mu + sd * z).clamp(-1.0, 1.0));
    }
    let p = (0.5 * (1.0 + mu)).clamp(0.0, 1.0);
    let k = Binomial::new(shots, p).map_err(|e| Error::InvalidArgument(e.to_string()))?.sample(rng);
    Ok((2.0 * k as f64 - shots as f64) / shots as f64)
}

/// Ratio of two independent outcome means estimating `nu / tau`.
pub fn vp_sample_traces<R: rand::Rng + ?Sized>(
    nu: f64,
    tau: f64,
    shots: u64,
    num_rng: &mut R,
    den_rng: &mut R,
    mode: SamplingMode,
) -> Result<f64> {
    if tau <= 1e-12 {
        return Err(Error::TraceTooSmall(tau));
    }
    if nu.abs() > tau + 1e-12 {
        return Err(Error::InvalidArgument(format!("|Tr[A rho^n]| = {} exceeds Tr[rho^n] = {tau}", nu.abs())));
    }
    let num = sample_mean(nu.clamp(-1.0, 1.0), shots, num_rng, mode)?;
    let den = sample_mean(tau.clamp(-1.0, 1.0), shots, den_rng, mode)?;
    Ok(num / den.max(DENOMINATOR_FLOOR))
}

/// VP estimate of `Tr[A rho^n] / Tr[rho^n]` under `plan`.
pub fn vp_sample<R: rand::Rng + ?Sized>(
    rho: &DensityMatrix,
    a: &PauliString,
    n: usize,
    plan: &ShotPlan,
    num_rng: &mut R,
    den_rng: &mut R,
) -> Result<f64> {
    let (nu, tau) = purified_traces(rho, a, n)?;
    let shots = shots_for(Scheme::Vp(n), plan.m, plan.accounting);
    if shots == 0 {
        return Err(Error::InvalidArgument(format!("budget {} too small for order {n}", plan.m)));
    }
    vp_sample_traces(nu, tau, shots, num_rng, den_rng, plan.mode)
}

/// Compensated summation.
#[derive(Clone, Copy, Debug, Default)]
pub struct KahanSum {
    sum: f64,
    c: f64,
}

impl KahanSum {
    pub fn add(&mut self, x: f64) {
        let y = x - self.c;
        let t = self.sum + y;
        self.c = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentRecord {
    pub probe: String,
    pub scheme: Scheme,
    /// Mitigation order (1 for noisy and QEC).
    pub n: usize,
    pub phi: f64,
    pub delta: f64,
    pub lambda: f64,
    pub m: u64,
    pub accounting: Accounting,
    pub seed: u64,
    pub repeats: usize,
    pub mu_ideal: f64,
    pub mu_scheme: f64,
    /// Mean sampled outcome average.
    pub abar: f64,
    /// Mean estimate over repeats.
    pub phi_est: f64,
    pub bias_theory: f64,
    pub bias_emp: f64,
    /// Theoretical estimator variance (radians²); infinite where `mu' = 0`.
    pub stat_theory: f64,
    /// Empirical estimator variance over repeats (radians²).
    pub stat_emp: f64,
    /// Mean of `(phi_est - phi)^2`.
    pub mse: f64,
    /// Standard error of `mse`.
    pub mse_se: f64,
}

/// Samples `repeats` estimates for a precomputed theoretical point.
///
/// Record `record_index` owns RNG substreams `2 * record_index` (outcomes or VP
/// numerator) and `2 * record_index + 1` (VP denominator).
pub fn run_with_report(
    ctx: &ProbeContext,
    report: &BiasReport,
    plan: &ShotPlan,
    repeats: usize,
    record_index: u64,
) -> Result<ExperimentRecord> {
    if repeats == 0 {
        return Err(Error::InvalidArgument("repeats must be at least 1".into()));
    }
    let shots = plan.shots();
    if shots == 0 {
        return Err(Error::InvalidArgument(format!("budget {} too small for {}", plan.m, plan.scheme)));
    }
    let mut rng_a = substream(plan.seed, 2 * record_index);
    let mut rng_b = substream(plan.seed, 2 * record_index + 1);
    let mut ests = Vec::with_capacity(repeats);
    let mut abar_sum = KahanSum::default();
    for _ in 0..repeats {
        let abar = match (report.scheme, report.traces) {
            (Scheme::Vp(n), Some((nu, tau))) if n > 1 => {
                vp_sample_traces(nu, tau, shots, &mut rng_a, &mut rng_b, plan.mode)?
            }
            _ => sample_mean(report.mu_scheme.clamp(-1.0, 1.0), shots, &mut rng_a, plan.mode)?,
        };
        abar_sum.add(abar);
        ests.push(ctx.curve.invert_mu(abar));
    }
    let r = repeats as f64;
    let mut s = KahanSum::default();
    ests.iter().for_each(|&e| s.add(e));
    let mean = s.value() / r;
    let (mut var, mut sq) = (KahanSum::default(), KahanSum::default());
    for &e in &ests {
        var.add((e - mean) * (e - mean));
        sq.add((e - report.phi) * (e - report.phi));
    }
    let mse = sq.value() / r;
    let mut sq_var = KahanSum::default();
    for &e in &ests {
        let d = (e - report.phi) * (e - report.phi) - mse;
        sq_var.add(d * d);
    }
    let mse_se = if repeats > 1 { (sq_var.value() / (r - 1.0) / r).sqrt() } else { f64::INFINITY };
    let stat_theory = match theoretical_stat_error(ctx, report, plan.m, plan.accounting) {
        Ok(v) => v,
        Err(Error::NonIdentifiable(_)) => f64::INFINITY,
        Err(e) => return Err(e),
    };
    Ok(ExperimentRecord {
        probe: ctx.probe.name.clone(),
        scheme: report.scheme,
        n: report.scheme.order(),
        phi: report.phi,
        delta: report.delta,
        lambda: report.lambda,
        m: plan.m,
        accounting: plan.accounting,
        seed: plan.seed,
        repeats,
        mu_ideal: report.mu_ideal,
        mu_scheme: report.mu_scheme,
        abar: abar_sum.value() / r,
        phi_est: mean,
        bias_theory: report.bias,
        bias_emp: mean - report.phi,
        stat_theory,
        stat_emp: var.value() / r,
        mse,
        mse_se,
    })
}

/// Theory plus `repeats` sampled estimates for one cell.
pub fn run_experiment(
    ctx: &ProbeContext,
    phi: f64,
    noise: &NoiseSpec,
    plan: &ShotPlan,
    repeats: usize,
    record_index: u64,
) -> Result<ExperimentRecord> {
    let report = evaluate_point(ctx, phi, noise, &[plan.scheme])?.remove(0);
    run_with_report(ctx, &report, plan, repeats, record_index)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn certain_outcome() {
        let mut rng = substream(1, 0);
        assert_eq!(sample_mean(1.0, 1000, &mut rng, SamplingMode::Exact).unwrap(), 1.0);
        assert_eq!(sample_mean(-1.0, 1000, &mut rng, SamplingMode::Exact).unwrap(), -1.0);
        assert!(sample_mean(1.5, 10, &mut rng, SamplingMode::Exact).is_err());
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let a = sample_mean(0.5, 100_000, &mut substream(7, 3), SamplingMode::Exact).unwrap();
        let b = sample_mean(0.5, 100_000, &mut substream(7, 3), SamplingMode::Exact).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
        let c = sample_mean(0.5, 100_000, &mut substream(7, 4), SamplingMode::Exact).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn kahan_recovers_small_terms() {
        let mut k = KahanSum::default();
        k.add(1.0);
        for _ in 0..10_000 {
            k.add(1e-16);
        }
        assert!((k.value() - (1.0 + 1e-12)).abs() < 1e-15);
    }
}
