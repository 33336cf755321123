use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use vpmetro_ffi::*;

fn probe(name: &str) -> *mut VpmProbe {
    let name = CString::new(name).unwrap();
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { vpm_probe_new(name.as_ptr(), &mut p) }, VpmStatus::Ok);
    assert!(!p.is_null());
    p
}

fn last_error() -> String {
    let e = vpm_last_error();
    assert!(!e.is_null());
    unsafe { CStr::from_ptr(e) }.to_string_lossy().into_owned()
}

fn dep(delta: f64) -> VpmNoise {
    VpmNoise { kind: VpmNoiseKind::Depolarizing, delta, p_x: 0.0, p_y: 0.0, p_z: 0.0 }
}

#[test]
fn builtin_probe_round_trip() {
    let p = probe("ghz5");
    unsafe {
        assert_eq!(vpm_probe_num_qubits(p), 5);
        let (mut lo, mut hi) = (0.0, 0.0);
        assert_eq!(vpm_probe_domain(p, &mut lo, &mut hi), VpmStatus::Ok);
        assert!((hi - std::f64::consts::PI / 10.0).abs() < 1e-15 && lo == -hi);
        let mut mu = 0.0;
        assert_eq!(vpm_mu(p, 0.05, &mut mu), VpmStatus::Ok);
        assert!((mu - (0.25f64).sin()).abs() < 1e-12);
        let mut phi = 0.0;
        assert_eq!(vpm_invert_mu(p, mu, &mut phi), VpmStatus::Ok);
        assert!((phi - 0.05).abs() < 1e-9);
        vpm_probe_free(p);
        vpm_probe_free(ptr::null_mut());
    }
}

#[test]
fn bias_stat_error_and_calibration() {
    let p = probe("ghz5");
    unsafe {
        let mut delta = 0.0;
        assert_eq!(vpm_calibrate(p, VpmNoiseKind::Depolarizing, 0.01, 0.7, &mut delta), VpmStatus::Ok);
        assert!((delta - 0.04782288).abs() < 1e-7);
        let mut lambda = 0.0;
        assert_eq!(vpm_dominant_eigenvalue(p, 0.01, &dep(delta), &mut lambda), VpmStatus::Ok);
        assert!((lambda - 0.7).abs() < 1e-7);

        let mut b = 1.0;
        assert_eq!(vpm_bias(p, 0.0, &dep(delta), VpmScheme::Vp2, &mut b), VpmStatus::Ok);
        assert!(b.abs() < 1e-9);
        let (mut b_noisy, mut b_vp) = (0.0, 0.0);
        assert_eq!(vpm_bias(p, 0.05, &dep(0.01), VpmScheme::Noisy, &mut b_noisy), VpmStatus::Ok);
        assert_eq!(vpm_bias(p, 0.05, &dep(0.01), VpmScheme::Vp2, &mut b_vp), VpmStatus::Ok);
        assert!(b_vp.abs() < b_noisy.abs());

        // Noiseless ideal variance (1 - mu^2) / (M mu'^2), and 4x that for vp2 under copies accounting.
        let m = 1_000_000;
        let ideal = (1.0 - (0.25f64).sin().powi(2)) / (25.0 * (0.25f64).cos().powi(2)) / m as f64;
        let mut v = 0.0;
        assert_eq!(
            vpm_stat_error(p, 0.05, &dep(0.0), VpmScheme::Noisy, m, VpmAccounting::Copies, &mut v),
            VpmStatus::Ok
        );
        assert!((v / ideal - 1.0).abs() < 1e-6);
        assert_eq!(
            vpm_stat_error(p, 0.05, &dep(0.0), VpmScheme::Vp2, m, VpmAccounting::Copies, &mut v),
            VpmStatus::Ok
        );
        assert!((v / (4.0 * ideal) - 1.0).abs() < 1e-6);
        assert_eq!(
            vpm_stat_error(p, 0.05, &dep(0.0), VpmScheme::Vp2, m, VpmAccounting::Shots, &mut v),
            VpmStatus::Ok
        );
        assert!((v / ideal - 1.0).abs() < 1e-6);
        vpm_probe_free(p);
    }
}

#[test]
fn custom_noise_and_json_probe() {
    let json = CString::new(
        r#"{"name":"ghz3","generators":["+ZZI","+IZZ","+XXX"],"observable":"+YYY","domain":[-0.5,0.5]}"#,
    )
    .unwrap();
    let mut p = ptr::null_mut();
    unsafe {
        assert_eq!(vpm_probe_from_json(json.as_ptr(), &mut p), VpmStatus::Ok);
        assert_eq!(vpm_probe_num_qubits(p), 3);
        let zonly = VpmNoise { kind: VpmNoiseKind::Custom, delta: 0.0, p_x: 0.0, p_y: 0.0, p_z: 0.02 };
        let deph = VpmNoise { kind: VpmNoiseKind::Dephasing, delta: 0.04, p_x: 0.0, p_y: 0.0, p_z: 0.0 };
        let (mut a, mut b) = (0.0, 0.0);
        assert_eq!(vpm_bias(p, 0.1, &zonly, VpmScheme::Noisy, &mut a), VpmStatus::Ok);
        assert_eq!(vpm_bias(p, 0.1, &deph, VpmScheme::Noisy, &mut b), VpmStatus::Ok);
        assert!((a - b).abs() < 1e-14);
        vpm_probe_free(p);
    }
}

#[test]
fn errors_carry_codes_and_messages() {
    unsafe {
        let mut p = ptr::null_mut();
        let bad = CString::new("nope").unwrap();
        assert_eq!(vpm_probe_new(bad.as_ptr(), &mut p), VpmStatus::Config);
        assert!(p.is_null());
        assert!(last_error().contains("nope"));

        assert_eq!(vpm_probe_new(ptr::null(), &mut p), VpmStatus::NullPointer);
        let mut x = 0.0;
        assert_eq!(vpm_mu(ptr::null(), 0.0, &mut x), VpmStatus::NullPointer);

        let g = probe("ghz5");
        assert_eq!(vpm_mu(g, 0.0, ptr::null_mut()), VpmStatus::NullPointer);
        assert_eq!(vpm_mu(g, f64::NAN, &mut x), VpmStatus::Config);
        assert_eq!(vpm_calibrate(g, VpmNoiseKind::Depolarizing, 0.01, 0.4, &mut x), VpmStatus::Numeric);
        assert_eq!(vpm_calibrate(g, VpmNoiseKind::Custom, 0.01, 0.7, &mut x), VpmStatus::Config);
        assert_eq!(vpm_bias(g, 0.0, &dep(1.5), VpmScheme::Noisy, &mut x), VpmStatus::Config);
        let bad_json = CString::new("{").unwrap();
        assert_eq!(vpm_probe_from_json(bad_json.as_ptr(), &mut p), VpmStatus::Config);

        // The noiseless steane response has zero slope at phi = 0.
        let s = probe("steane7");
        assert_eq!(
            vpm_stat_error(s, 0.0, &dep(0.0), VpmScheme::Noisy, 1000, VpmAccounting::Copies, &mut x),
            VpmStatus::Numeric
        );
        vpm_probe_free(g);
        vpm_probe_free(s);
    }
}

#[test]
fn header_declares_every_export() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header = std::fs::read_to_string(dir.join("include/vpmetro.h")).unwrap();
    let src = std::fs::read_to_string(dir.join("src/lib.rs")).unwrap();
    let exports: Vec<&str> = src
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|l| l.split('(').next().unwrap())
        .collect();
    assert!(exports.len() >= 12, "{exports:?}");
    for f in exports {
        assert!(header.contains(&format!(" {f}(")) || header.contains(&format!("*{f}(")), "{f} missing from header");
    }
}

#[test]
fn header_compiles_as_c() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let tmp = std::env::temp_dir().join(format!("vpmetro_h_{}", std::process::id()));
    std::fs::create_dir_all(&tmp).unwrap();
    let c = tmp.join("t.c");
    std::fs::write(
        &c,
        "#include \"vpmetro.h\"\nint main(void) { VpmProbe *p = 0; VpmStatus s = vpm_probe_new(\"ghz5\", &p); \
         vpm_probe_free(p); return s == VPM_STATUS_OK ? 0 : 1; }\n",
    )
    .unwrap();
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let out = Command::new(cc)
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(dir.join("include"))
        .arg(&c)
        .output()
        .expect("C compiler");
    std::fs::remove_dir_all(&tmp).ok();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
