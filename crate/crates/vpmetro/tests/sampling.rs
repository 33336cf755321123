use vpmetro::estimation::{evaluate_point, shots_for, theoretical_stat_error, Accounting, ProbeContext, Scheme};
use vpmetro::linalg::DensityMatrix;
use vpmetro::noise::{calibrate_strength, signal_vector, NoiseKind, NoiseSpec, CALIBRATION_PHI};
use vpmetro::sampler::{
    run_with_report, sample_mean, substream, vp_sample, vp_sample_traces, SamplingMode, ShotPlan,
};
use vpmetro::stabilizer::builtin_probe;

fn ctx(name: &str) -> ProbeContext {
    ProbeContext::new(builtin_probe(name).unwrap()).unwrap()
}

fn mean_var(xs: &[f64]) -> (f64, f64) {
    let m = xs.iter().sum::<f64>() / xs.len() as f64;
    (m, xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64)
}

#[test]
fn certain_outcomes() {
    for mode in [SamplingMode::Exact, SamplingMode::Gaussian, SamplingMode::Auto] {
        assert_eq!(sample_mean(1.0, 1000, &mut substream(1, 0), mode).unwrap(), 1.0);
        assert_eq!(sample_mean(-1.0, 1000, &mut substream(1, 0), mode).unwrap(), -1.0);
    }
    assert!(sample_mean(1.5, 10, &mut substream(1, 0), SamplingMode::Exact).is_err());
    assert!(sample_mean(0.0, 0, &mut substream(1, 0), SamplingMode::Exact).is_err());
}

#[test]
fn zero_mean_stays_in_clt_band() {
    for seed in 0..100 {
        let a = sample_mean(0.0, 1_000_000, &mut substream(seed, 0), SamplingMode::Exact).unwrap();
        assert!(a.abs() < 5.0 / 1000.0, "seed {seed}: {a}");
    }
}

#[test]
fn fixed_seed_is_bit_identical() {
    let a = sample_mean(0.5, 100_000, &mut substream(42, 3), SamplingMode::Exact).unwrap();
    let b = sample_mean(0.5, 100_000, &mut substream(42, 3), SamplingMode::Exact).unwrap();
    assert_eq!(a.to_bits(), b.to_bits());
    let c = sample_mean(0.5, 100_000, &mut substream(42, 4), SamplingMode::Exact).unwrap();
    assert_ne!(a.to_bits(), c.to_bits());
}

#[test]
fn exact_and_gaussian_modes_agree() {
    let (mu, shots, reps) = (0.3, 100_000u64, 2000u64);
    let draw = |mode| -> Vec<f64> {
        (0..reps).map(|i| sample_mean(mu, shots, &mut substream(9, i), mode).unwrap()).collect()
    };
    let (me, ve) = mean_var(&draw(SamplingMode::Exact));
    let (mg, vg) = mean_var(&draw(SamplingMode::Gaussian));
    let v = (1.0 - mu * mu) / shots as f64;
    let se = (v / reps as f64).sqrt();
    assert!((me - mu).abs() < 4.0 * se && (mg - mu).abs() < 4.0 * se);
    assert!((me - mg).abs() < 4.0 * 2f64.sqrt() * se);
    // Sample variance of a normal sample has relative sd sqrt(2/(reps-1)) ~ 3.2%.
    assert!((ve / v - 1.0).abs() < 0.13 && (vg / v - 1.0).abs() < 0.13, "{ve} {vg} {v}");
}

#[test]
fn vp_on_pure_state_converges() {
    let p = builtin_probe("ghz5").unwrap();
    let rho = DensityMatrix::pure(&signal_vector(&p, 0.05)).unwrap();
    let want = (0.25f64).sin();
    let plan = ShotPlan::new(40_000_000, Scheme::Vp(2), Accounting::Copies, 5);
    let (mut a, mut b) = (substream(5, 0), substream(5, 1));
    let est = vp_sample(&rho, &p.observable, 2, &plan, &mut a, &mut b).unwrap();
    let shots = plan.shots() as f64;
    let sigma = ((1.0 - want * want) / shots).sqrt();
    assert!((est - want).abs() < 3.0 * sigma, "{est} vs {want}");
}

#[test]
fn vp_without_noise_matches_direct_sampling() {
    let mu = (0.25f64).sin();
    let shots = 100_000u64;
    let reps = 200u64;
    let vp: Vec<f64> = (0..reps)
        .map(|i| {
            let (mut a, mut b) = (substream(11, 2 * i), substream(11, 2 * i + 1));
            vp_sample_traces(mu, 1.0, shots, &mut a, &mut b, SamplingMode::Exact).unwrap()
        })
        .collect();
    let direct: Vec<f64> =
        (0..reps).map(|i| sample_mean(mu, shots, &mut substream(12, i), SamplingMode::Exact).unwrap()).collect();
    let (mv, _) = mean_var(&vp);
    let (md, _) = mean_var(&direct);
    let sigma = ((1.0 - mu * mu) / shots as f64 / reps as f64).sqrt();
    assert!((mv - md).abs() < 3.0 * 2f64.sqrt() * sigma, "{mv} {md}");
}

#[test]
fn vp_rejects_bad_traces() {
    let (mut a, mut b) = (substream(0, 0), substream(0, 1));
    assert!(vp_sample_traces(0.1, 0.0, 10, &mut a, &mut b, SamplingMode::Exact).is_err());
    assert!(vp_sample_traces(0.6, 0.5, 10, &mut a, &mut b, SamplingMode::Exact).is_err());
}

#[test]
fn noiseless_estimator_is_unbiased() {
    let g = ctx("ghz5");
    let rep = evaluate_point(&g, 0.05, &NoiseSpec::depolarizing(0.0).unwrap(), &[Scheme::Noisy]).unwrap().remove(0);
    let plan = ShotPlan::new(1_000_000, Scheme::Noisy, Accounting::Copies, 21);
    let r = run_with_report(&g, &rep, &plan, 100, 0).unwrap();
    let sigma = r.stat_theory.sqrt();
    assert!(r.bias_emp.abs() < 3.0 * sigma / 10.0, "{} vs {}", r.bias_emp, sigma);
    assert_eq!(r.bias_theory, 0.0);
}

#[test]
fn vp_ratio_variance_matches_delta_method() {
    let g = ctx("ghz5");
    let d = calibrate_strength(&g.probe, NoiseKind::Depolarizing, CALIBRATION_PHI, 0.7).unwrap();
    let rep = evaluate_point(&g, 0.05, &NoiseSpec::depolarizing(d).unwrap(), &[Scheme::Vp(2)]).unwrap().remove(0);
    let (nu, tau) = rep.traces.unwrap();
    let m = 1_000_000u64;
    let k = shots_for(Scheme::Vp(2), m, Accounting::Copies) as f64;
    let want = ((1.0 - nu * nu) / (tau * tau) + nu * nu * (1.0 - tau * tau) / tau.powi(4)) / k;
    let xs: Vec<f64> = (0..500u64)
        .map(|i| {
            let (mut a, mut b) = (substream(33, 2 * i), substream(33, 2 * i + 1));
            vp_sample_traces(nu, tau, k as u64, &mut a, &mut b, SamplingMode::Exact).unwrap()
        })
        .collect();
    let (_, v) = mean_var(&xs);
    assert!((v / want - 1.0).abs() < 0.15, "{v} vs {want}");
}

#[test]
fn estimator_variance_matches_theory_on_twenty_cells() {
    let cells: Vec<(&str, NoiseKind, Scheme, f64)> = vec![
        ("ghz5", NoiseKind::Depolarizing, Scheme::Noisy, 0.05),
        ("ghz5", NoiseKind::Depolarizing, Scheme::Qec, 0.05),
        ("ghz5", NoiseKind::Depolarizing, Scheme::Vp(2), 0.05),
        ("ghz5", NoiseKind::Depolarizing, Scheme::Vp(3), 0.05),
        ("ghz5", NoiseKind::Dephasing, Scheme::Noisy, 0.1),
        ("ghz5", NoiseKind::Dephasing, Scheme::Qec, 0.1),
        ("ghz5", NoiseKind::Dephasing, Scheme::Vp(2), 0.1),
        ("ghz5", NoiseKind::Dephasing, Scheme::Vp(3), 0.1),
        ("twin5", NoiseKind::Depolarizing, Scheme::Noisy, 0.15),
        ("twin5", NoiseKind::Depolarizing, Scheme::Vp(2), 0.15),
        ("twin5", NoiseKind::Depolarizing, Scheme::Vp(3), 0.15),
        ("twin5", NoiseKind::Dephasing, Scheme::Noisy, 0.15),
        ("twin5", NoiseKind::Dephasing, Scheme::Qec, 0.15),
        ("twin5", NoiseKind::Dephasing, Scheme::Vp(2), 0.15),
        ("twin5", NoiseKind::Dephasing, Scheme::Vp(3), 0.15),
        ("steane7", NoiseKind::Depolarizing, Scheme::Qec, 0.15),
        ("steane7", NoiseKind::Depolarizing, Scheme::Vp(2), 0.15),
        ("steane7", NoiseKind::Depolarizing, Scheme::Vp(3), 0.15),
        ("steane7", NoiseKind::Dephasing, Scheme::Vp(2), 0.15),
        ("steane7", NoiseKind::Dephasing, Scheme::Vp(3), 0.15),
    ];
    let mut worst = (0.0, String::new());
    for (i, (name, kind, scheme, phi)) in cells.into_iter().enumerate() {
        let c = ctx(name);
        let d = calibrate_strength(&c.probe, kind, CALIBRATION_PHI, 0.9).unwrap();
        let rep = evaluate_point(&c, phi, &NoiseSpec::preset(kind, d).unwrap(), &[scheme]).unwrap().remove(0);
        let mut plan = ShotPlan::new(10_000_000, scheme, Accounting::Copies, 77);
        plan.mode = SamplingMode::Exact;
        let r = run_with_report(&c, &rep, &plan, 500, i as u64).unwrap();
        let theory = theoretical_stat_error(&c, &rep, plan.m, plan.accounting).unwrap();
        let dev = (r.stat_emp / theory - 1.0).abs();
        if dev > worst.0 {
            worst = (dev, format!("{name} {kind} {scheme} phi={phi}: {} vs {theory}", r.stat_emp));
        }
    }
    assert!(worst.0 < 0.15, "{:.3} at {}", worst.0, worst.1);
}

#[test]
fn bias_dominates_at_large_budgets() {
    let g = ctx("ghz5");
    let d = calibrate_strength(&g.probe, NoiseKind::Depolarizing, CALIBRATION_PHI, 0.7).unwrap();
    let rep = evaluate_point(&g, 0.1, &NoiseSpec::depolarizing(d).unwrap(), &[Scheme::Noisy]).unwrap().remove(0);
    let mut ratios = Vec::new();
    for m in [100_000u64, 10_000_000, 1_000_000_000] {
        let plan = ShotPlan::new(m, Scheme::Noisy, Accounting::Copies, 3);
        let r = run_with_report(&g, &rep, &plan, 50, 0).unwrap();
        ratios.push(r.mse / (rep.bias * rep.bias));
    }
    assert!(ratios.windows(2).all(|w| (w[1] - 1.0).abs() <= (w[0] - 1.0).abs()), "{ratios:?}");
    assert!((ratios[2] - 1.0).abs() < 0.01, "{ratios:?}");
}
