//! C interface to the vpmetro estimation core.
//!
//! Every fallible call returns a `VpmStatus`; on failure the message is available
//! from `vpm_last_error()` on the same thread until the next failing call.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use vpmetro::estimation::{evaluate_point, theoretical_stat_error, Accounting, ProbeContext, Scheme};
use vpmetro::noise::{calibrate_strength, dominant_eigenvalue, NoiseKind, NoiseSpec, PauliProbs};
use vpmetro::stabilizer::{builtin_probe, parse_probes};
use vpmetro::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VpmStatus {
    Ok = 0,
    NullPointer = 1,
    Config = 2,
    Numeric = 3,
    Panic = 4,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VpmNoiseKind {
    Depolarizing = 0,
    Dephasing = 1,
    /// Uses `p_x`, `p_y`, `p_z`; `delta` is ignored.
    Custom = 2,
}

/// Single-qubit Pauli noise applied to every qubit.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct VpmNoise {
    pub kind: VpmNoiseKind,
    pub delta: f64,
    pub p_x: f64,
    pub p_y: f64,
    pub p_z: f64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VpmScheme {
    Noisy = 0,
    Qec = 1,
    Vp2 = 2,
    Vp3 = 3,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VpmAccounting {
    Copies = 0,
    Shots = 1,
}

/// Opaque probe handle with its precomputed response curve.
pub struct VpmProbe {
    ctx: ProbeContext,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> VpmStatus {
    match e.exit_code() {
        2 => VpmStatus::Config,
        _ => VpmStatus::Numeric,
    }
}

fn guard<F: FnOnce() -> Result<(), (VpmStatus, String)>>(f: F) -> VpmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => VpmStatus::Ok,
        Ok(Err((s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal panic".into());
            VpmStatus::Panic
        }
    }
}

fn lift<T>(r: vpmetro::Result<T>) -> Result<T, (VpmStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (VpmStatus, String) {
    (VpmStatus::NullPointer, format!("{what} is null"))
}

unsafe fn probe_ref<'a>(p: *const VpmProbe) -> Result<&'a VpmProbe, (VpmStatus, String)> {
    p.as_ref().ok_or_else(|| null("probe"))
}

unsafe fn c_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, (VpmStatus, String)> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s).to_str().map_err(|_| (VpmStatus::Config, format!("{what} is not UTF-8")))
}

fn noise_spec(n: &VpmNoise) -> vpmetro::Result<NoiseSpec> {
    match n.kind {
        VpmNoiseKind::Depolarizing => NoiseSpec::preset(NoiseKind::Depolarizing, n.delta),
        VpmNoiseKind::Dephasing => NoiseSpec::preset(NoiseKind::Dephasing, n.delta),
        VpmNoiseKind::Custom => {
            NoiseSpec::custom(PauliProbs::new(1.0 - n.p_x - n.p_y - n.p_z, n.p_x, n.p_y, n.p_z)?)
        }
    }
}

fn scheme(s: VpmScheme) -> Scheme {
    match s {
        VpmScheme::Noisy => Scheme::Noisy,
        VpmScheme::Qec => Scheme::Qec,
        VpmScheme::Vp2 => Scheme::Vp(2),
        VpmScheme::Vp3 => Scheme::Vp(3),
    }
}

fn write_out<T>(out: *mut T, v: T) -> Result<(), (VpmStatus, String)> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    unsafe { out.write(v) };
    Ok(())
}

fn boxed(ctx: vpmetro::Result<ProbeContext>, out: *mut *mut VpmProbe) -> Result<(), (VpmStatus, String)> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    let ctx = lift(ctx)?;
    unsafe { out.write(Box::into_raw(Box::new(VpmProbe { ctx }))) };
    Ok(())
}

/// Message for the last failure on this thread, or null. Owned by the library.
#[no_mangle]
pub extern "C" fn vpm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Creates a handle for a built-in probe ("ghz5", "twin5", "steane7").
///
/// # Safety
/// `name` must be a valid C string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn vpm_probe_new(name: *const c_char, out: *mut *mut VpmProbe) -> VpmStatus {
    guard(|| {
        let name = c_str(name, "name")?;
        boxed(builtin_probe(name).and_then(ProbeContext::new), out)
    })
}

/// Creates a handle from a JSON probe definition (a single object).
///
/// # Safety
/// `json` must be a valid C string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn vpm_probe_from_json(json: *const c_char, out: *mut *mut VpmProbe) -> VpmStatus {
    guard(|| {
        let text = c_str(json, "json")?;
        let mut probes = lift(parse_probes(text))?;
        if probes.len() != 1 {
            return Err((VpmStatus::Config, format!("expected one probe, got {}", probes.len())));
        }
        boxed(ProbeContext::new(probes.remove(0)), out)
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `probe` must come from a constructor above and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn vpm_probe_free(probe: *mut VpmProbe) {
    if !probe.is_null() {
        drop(Box::from_raw(probe));
    }
}

/// # Safety
/// `probe` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn vpm_probe_num_qubits(probe: *const VpmProbe) -> usize {
    probe.as_ref().map_or(0, |p| p.ctx.probe.generators.n_qubits())
}

/// Lower and upper end of the phase domain.
///
/// # Safety
/// `probe` must be a live handle; `lo` and `hi` writable.
#[no_mangle]
pub unsafe extern "C" fn vpm_probe_domain(probe: *const VpmProbe, lo: *mut f64, hi: *mut f64) -> VpmStatus {
    guard(|| {
        let p = probe_ref(probe)?;
        write_out(lo, p.ctx.probe.domain.0)?;
        write_out(hi, p.ctx.probe.domain.1)
    })
}

/// Ideal response `<A>` at phase `phi`.
///
/// # Safety
/// `probe` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn vpm_mu(probe: *const VpmProbe, phi: f64, out: *mut f64) -> VpmStatus {
    guard(|| {
        let p = probe_ref(probe)?;
        if !phi.is_finite() {
            return Err((VpmStatus::Config, "phi is not finite".into()));
        }
        write_out(out, p.ctx.curve.mu(phi))
    })
}

/// Phase estimate for a measured mean `abar`, clamped to the domain.
///
/// # Safety
/// `probe` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn vpm_invert_mu(probe: *const VpmProbe, abar: f64, out: *mut f64) -> VpmStatus {
    guard(|| {
        let p = probe_ref(probe)?;
        if !abar.is_finite() {
            return Err((VpmStatus::Config, "abar is not finite".into()));
        }
        write_out(out, p.ctx.curve.invert_mu(abar))
    })
}

/// Asymptotic estimator bias in radians.
///
/// # Safety
/// `probe` must be a live handle, `noise` readable and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn vpm_bias(
    probe: *const VpmProbe,
    phi: f64,
    noise: *const VpmNoise,
    scheme_id: VpmScheme,
    out: *mut f64,
) -> VpmStatus {
    guard(|| {
        let p = probe_ref(probe)?;
        let noise = lift(noise_spec(noise.as_ref().ok_or_else(|| null("noise"))?))?;
        let rep = lift(evaluate_point(&p.ctx, phi, &noise, &[scheme(scheme_id)]))?;
        write_out(out, rep[0].bias)
    })
}

/// Theoretical estimator variance for a budget of `m` copies.
///
/// # Safety
/// `probe` must be a live handle, `noise` readable and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn vpm_stat_error(
    probe: *const VpmProbe,
    phi: f64,
    noise: *const VpmNoise,
    scheme_id: VpmScheme,
    m: u64,
    accounting: VpmAccounting,
    out: *mut f64,
) -> VpmStatus {
    guard(|| {
        let p = probe_ref(probe)?;
        let noise = lift(noise_spec(noise.as_ref().ok_or_else(|| null("noise"))?))?;
        let rep = lift(evaluate_point(&p.ctx, phi, &noise, &[scheme(scheme_id)]))?;
        let acc = match accounting {
            VpmAccounting::Copies => Accounting::Copies,
            VpmAccounting::Shots => Accounting::Shots,
        };
        write_out(out, lift(theoretical_stat_error(&p.ctx, &rep[0], m, acc))?)
    })
}

/// Largest eigenvalue of the noisy state.
///
/// # Safety
/// `probe` must be a live handle, `noise` readable and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn vpm_dominant_eigenvalue(
    probe: *const VpmProbe,
    phi: f64,
    noise: *const VpmNoise,
    out: *mut f64,
) -> VpmStatus {
    guard(|| {
        let p = probe_ref(probe)?;
        let noise = lift(noise_spec(noise.as_ref().ok_or_else(|| null("noise"))?))?;
        write_out(out, lift(dominant_eigenvalue(&p.ctx.probe, phi, &noise))?)
    })
}

/// Noise strength whose dominant eigenvalue at `phi_ref` equals `target`.
///
/// # Safety
/// `probe` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn vpm_calibrate(
    probe: *const VpmProbe,
    kind: VpmNoiseKind,
    phi_ref: f64,
    target: f64,
    out: *mut f64,
) -> VpmStatus {
    guard(|| {
        let p = probe_ref(probe)?;
        let kind = match kind {
            VpmNoiseKind::Depolarizing => NoiseKind::Depolarizing,
            VpmNoiseKind::Dephasing => NoiseKind::Dephasing,
            VpmNoiseKind::Custom => {
                return Err((VpmStatus::Config, "calibration needs a preset noise kind".into()))
            }
        };
        write_out(out, lift(calibrate_strength(&p.ctx.probe, kind, phi_ref, target))?)
    })
}
