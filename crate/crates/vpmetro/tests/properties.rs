use std::sync::OnceLock;

use num_complex::Complex64;
use proptest::prelude::*;
use vpmetro::estimation::{
    evaluate_point, mitigated_expectation, scaling_exponent, shots_for, Accounting, ProbeContext, Scheme,
};
use vpmetro::linalg::{hermitian_eig, matmul, ComplexMatrix, DensityMatrix};
use vpmetro::noise::{apply_channel, noisy_state, NoiseSpec, PauliProbs};
use vpmetro::pauli::PauliString;
use vpmetro::sampler::{run_with_report, sample_mean, substream, SamplingMode, ShotPlan};
use vpmetro::stabilizer::{builtin_probe, BUILTIN_PROBES};

fn contexts() -> &'static Vec<ProbeContext> {
    static CTX: OnceLock<Vec<ProbeContext>> = OnceLock::new();
    CTX.get_or_init(|| BUILTIN_PROBES.iter().map(|n| ProbeContext::new(builtin_probe(n).unwrap()).unwrap()).collect())
}

fn pauli(n: usize) -> impl Strategy<Value = PauliString> {
    let mask = (1u64 << n) - 1;
    (any::<u64>(), any::<u64>(), 0u8..4).prop_map(move |(x, z, k)| PauliString::new(n, x & mask, z & mask, k).unwrap())
}

fn hermitian(n: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n * n).prop_map(move |v| {
        let g = ComplexMatrix::from_fn(n, |r, c| Complex64::new(v[r * n + c].0, v[r * n + c].1));
        g.add(&g.adjoint()).unwrap()
    })
}

fn density(n: usize) -> impl Strategy<Value = DensityMatrix> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n * n).prop_map(move |v| {
        let g = ComplexMatrix::from_fn(n, |r, c| Complex64::new(v[r * n + c].0, v[r * n + c].1));
        let m = matmul(&g, &g.adjoint()).unwrap();
        let tr = m.trace().re;
        DensityMatrix::new(m.scale(Complex64::new(1.0 / tr, 0.0))).unwrap()
    })
}

fn probs() -> impl Strategy<Value = PauliProbs> {
    (0.0f64..1.0, 0.0f64..1.0, 0.0f64..1.0, 0.0f64..0.5).prop_map(|(a, b, c, scale)| {
        let s = a + b + c + 1e-9;
        let (x, y, z) = (scale * a / s, scale * b / s, scale * c / s);
        PauliProbs::new(1.0 - x - y - z, x, y, z).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn multiply_is_matrix_product(a in pauli(3), b in pauli(3)) {
        let lhs = a.multiply(&b).unwrap().to_matrix();
        let rhs = matmul(&a.to_matrix(), &b.to_matrix()).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-14);
    }

    #[test]
    fn multiply_is_associative(a in pauli(4), b in pauli(4), c in pauli(4)) {
        let l = a.multiply(&b).unwrap().multiply(&c).unwrap();
        let r = a.multiply(&b.multiply(&c).unwrap()).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn display_parse_round_trip(p in pauli(6)) {
        let q: PauliString = p.to_string().parse().unwrap();
        prop_assert_eq!(p, q);
    }

    #[test]
    fn commutation_is_symmetric_and_matches_product(a in pauli(4), b in pauli(4)) {
        let ab = a.multiply(&b).unwrap();
        let ba = b.multiply(&a).unwrap();
        prop_assert_eq!(a.commutes(&b).unwrap(), b.commutes(&a).unwrap());
        prop_assert_eq!(a.commutes(&b).unwrap(), ab == ba);
    }

    #[test]
    fn eigendecomposition_is_exact(h in hermitian(6)) {
        let eig = hermitian_eig(&h).unwrap();
        prop_assert!(eig.reconstruct().max_abs_diff(&h).unwrap() < 1e-10);
        prop_assert!(eig.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
        for k in 0..6 {
            let v = eig.vector(k);
            let norm: f64 = v.iter().map(|a| a.norm_sqr()).sum();
            prop_assert!((norm - 1.0).abs() < 1e-12);
            let lead = v.iter().find(|a| a.norm() > 1e-12).unwrap();
            prop_assert!(lead.im.abs() < 1e-12 && lead.re > 0.0);
        }
    }

    #[test]
    fn channel_preserves_trace_and_positivity(rho in density(8), p in probs()) {
        let out = apply_channel(&rho, &NoiseSpec::custom(p).unwrap()).unwrap();
        prop_assert!((out.matrix().trace().re - 1.0).abs() < 1e-12);
        prop_assert!(out.matrix().hermiticity_error() < 1e-14);
        prop_assert!(out.validate_psd().is_ok());
        prop_assert!(out.purity() <= rho.purity() + 1e-12);
    }

    #[test]
    fn vp_of_pure_state_is_plain_expectation(a in pauli(3).prop_filter("hermitian", |p| p.is_hermitian()),
                                             v in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 8)) {
        let mut psi: Vec<Complex64> = v.iter().map(|&(r, i)| Complex64::new(r, i)).collect();
        let norm = psi.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        prop_assume!(norm > 1e-3);
        psi.iter_mut().for_each(|x| *x /= norm);
        let rho = DensityMatrix::pure(&psi).unwrap();
        let plain = mitigated_expectation(&rho, &a, 1).unwrap();
        for n in [2, 3] {
            prop_assert!((mitigated_expectation(&rho, &a, n).unwrap() - plain).abs() < 1e-12);
        }
    }

    #[test]
    fn inversion_recovers_phase(idx in 0usize..3, t in 0.02f64..0.98) {
        let ctx = &contexts()[idx];
        let (lo, hi) = ctx.probe.domain;
        let phi = lo + t * (hi - lo);
        let back = ctx.curve.invert_mu(ctx.curve.mu(phi));
        prop_assert!((back - phi).abs() < 1e-9, "{} {phi} -> {back}", ctx.probe.name);
    }

    #[test]
    fn invert_mu_is_monotone(idx in 0usize..3, a in -1.0f64..1.0, b in -1.0f64..1.0) {
        let c = &contexts()[idx].curve;
        let (x, y) = if a <= b { (a, b) } else { (b, a) };
        let (ex, ey) = (c.invert_mu(x), c.invert_mu(y));
        let (lo, hi) = contexts()[idx].probe.domain;
        prop_assert!(ex >= lo - 1e-12 && ex <= hi + 1e-12);
        if c.mu(hi) > c.mu(lo) { prop_assert!(ex <= ey + 1e-12) } else { prop_assert!(ex >= ey - 1e-12) }
    }

    #[test]
    fn noisy_state_is_a_state(idx in 0usize..2, phi in -0.3f64..0.3, d in 0.0f64..0.4) {
        let p = &contexts()[idx].probe;
        let rho = noisy_state(p, phi, &NoiseSpec::depolarizing(d).unwrap()).unwrap();
        prop_assert!((rho.matrix().trace().re - 1.0).abs() < 1e-12);
        prop_assert!(rho.validate_psd().is_ok());
    }

    #[test]
    fn exact_power_laws_fit_exactly(k in 1.0f64..4.0, c in 0.1f64..10.0) {
        let pts: Vec<(f64, f64)> = vpmetro::estimation::logspace(1e-4, 1e-2, 8).into_iter().map(|d| (d, c * d.powf(k))).collect();
        let fit = scaling_exponent(&pts).unwrap();
        prop_assert!((fit.slope - k).abs() < 1e-9);
        prop_assert!(fit.r2 > 1.0 - 1e-12);
    }

    #[test]
    fn sampling_is_deterministic(mu in -1.0f64..1.0, shots in 1u64..1_000_000, seed: u64, stream in 0u64..1000) {
        for mode in [SamplingMode::Exact, SamplingMode::Gaussian] {
            let a = sample_mean(mu, shots, &mut substream(seed, stream), mode).unwrap();
            let b = sample_mean(mu, shots, &mut substream(seed, stream), mode).unwrap();
            prop_assert_eq!(a.to_bits(), b.to_bits());
            prop_assert!((-1.0..=1.0).contains(&a));
        }
    }

    #[test]
    fn copies_accounting_divides_budget(n in 2usize..4, m in 1u64..1_000_000_000) {
        prop_assert_eq!(shots_for(Scheme::Vp(n), m, Accounting::Copies), m / (2 * n as u64));
        prop_assert_eq!(shots_for(Scheme::Vp(n), m, Accounting::Shots), m);
        prop_assert_eq!(shots_for(Scheme::Noisy, m, Accounting::Copies), m);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn records_are_seed_deterministic(seed: u64, idx in 0u64..1000, phi in 0.01f64..0.12) {
        let ctx = &contexts()[0];
        let rep = evaluate_point(ctx, phi, &NoiseSpec::depolarizing(0.05).unwrap(), &[Scheme::Vp(2)]).unwrap().remove(0);
        let plan = ShotPlan::new(100_000, Scheme::Vp(2), Accounting::Copies, seed);
        let a = run_with_report(ctx, &rep, &plan, 5, idx).unwrap();
        let b = run_with_report(ctx, &rep, &plan, 5, idx).unwrap();
        prop_assert_eq!(&a, &b);
        // mse = bias^2 + variance over the same repeats.
        prop_assert!((a.mse - (a.bias_emp * a.bias_emp + a.stat_emp)).abs() < 1e-12 * a.mse.max(1e-300) + 1e-18);
    }
}
