//! C interface to the `watt-hopf` library.
//!
//! Every fallible call returns a [`WhStatus`]; on failure a message is kept
//! per thread and can be fetched with [`wh_last_error`]. Certificates are
//! opaque handles owned by the caller and released with
//! [`wh_certificate_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use watt_hopf::{atlas, certify_watt, watt, Error, FormSource, HopfCertificate};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WhStatus {
    Ok = 0,
    NullPointer = 1,
    Domain = 2,
    Convergence = 3,
    Numerical = 4,
    InvalidArgument = 5,
    Panic = 6,
}

/// Opaque Hopf certificate.
pub struct WhCertificate {
    inner: HopfCertificate,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(err: &Error) -> WhStatus {
    match err {
        Error::Domain(_) | Error::DegreeOutOfRange { .. } | Error::DimensionMismatch { .. } | Error::ArityMismatch { .. } => {
            WhStatus::Domain
        }
        Error::NoConvergence { .. } | Error::Eigen { .. } => WhStatus::Convergence,
        Error::Parse(_) | Error::Io(_) => WhStatus::InvalidArgument,
        _ => WhStatus::Numerical,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (WhStatus, String)>) -> WhStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => WhStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            WhStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (WhStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (WhStatus, String) {
    (WhStatus::NullPointer, format!("{what} is NULL"))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn wh_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or NULL. Free the result
/// with [`wh_string_free`].
#[no_mangle]
pub extern "C" fn wh_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null_mut(), |s| s.clone().into_raw()))
}

/// # Safety
/// `s` must be NULL or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn wh_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

fn closed(beta: f64, alpha: f64, out: *mut f64, f: fn(f64, f64) -> f64) -> WhStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        watt::Params::critical(beta, alpha).map_err(lib_err)?;
        // SAFETY: checked non-null; the caller provides a writable double.
        unsafe { *out = f(beta, alpha) };
        Ok(())
    })
}

/// Critical damping `2 alpha beta^{3/2}`.
///
/// # Safety
/// `out` must point to a writable `double`.
#[no_mangle]
pub unsafe extern "C" fn wh_critical_epsilon(beta: f64, alpha: f64, out: *mut f64) -> WhStatus {
    closed(beta, alpha, out, watt::critical_epsilon)
}

/// Closed-form first Lyapunov coefficient on the critical surface.
///
/// # Safety
/// `out` must point to a writable `double`.
#[no_mangle]
pub unsafe extern "C" fn wh_l1_closed(beta: f64, alpha: f64, out: *mut f64) -> WhStatus {
    closed(beta, alpha, out, atlas::l1_closed)
}

/// Closed-form second Lyapunov coefficient (meaningful where `l1 = 0`).
///
/// # Safety
/// `out` must point to a writable `double`.
#[no_mangle]
pub unsafe extern "C" fn wh_l2_closed(beta: f64, alpha: f64, out: *mut f64) -> WhStatus {
    closed(beta, alpha, out, atlas::l2_closed)
}

/// Newton search for the point where `l1 = l2 = 0`, from a seed.
///
/// # Safety
/// `beta`, `alpha` and `epsilon` must point to writable doubles.
#[no_mangle]
pub unsafe extern "C" fn wh_locate_q(
    beta_seed: f64,
    alpha_seed: f64,
    beta: *mut f64,
    alpha: *mut f64,
    epsilon: *mut f64,
) -> WhStatus {
    guard(|| {
        if beta.is_null() || alpha.is_null() || epsilon.is_null() {
            return Err(null("output pointer"));
        }
        let q = atlas::locate_q((beta_seed, alpha_seed)).map_err(lib_err)?;
        *beta = q.beta;
        *alpha = q.alpha;
        *epsilon = q.epsilon_c;
        Ok(())
    })
}

/// Certificate at the Hopf point above `(beta, alpha)`. `exact_forms`
/// selects closed-form derivatives instead of jets.
///
/// # Safety
/// `out` must point to a writable handle pointer.
#[no_mangle]
pub unsafe extern "C" fn wh_certificate_new(beta: f64, alpha: f64, exact_forms: bool, out: *mut *mut WhCertificate) -> WhStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let source = if exact_forms { FormSource::Exact } else { FormSource::Jet };
        let inner = certify_watt(beta, alpha, source).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(WhCertificate { inner }));
        Ok(())
    })
}

/// # Safety
/// `cert` must be NULL or a handle from [`wh_certificate_new`], freed once.
#[no_mangle]
pub unsafe extern "C" fn wh_certificate_free(cert: *mut WhCertificate) {
    if !cert.is_null() {
        drop(Box::from_raw(cert));
    }
}

unsafe fn cert_ref<'a>(cert: *const WhCertificate) -> Result<&'a HopfCertificate, (WhStatus, String)> {
    cert.as_ref().map(|c| &c.inner).ok_or_else(|| null("certificate"))
}

/// `l1`, `l2`, `l3` and `omega0` into `out[0..4]`.
///
/// # Safety
/// `cert` must be a live handle; `out` must hold 4 doubles.
#[no_mangle]
pub unsafe extern "C" fn wh_certificate_coefficients(cert: *const WhCertificate, out: *mut f64) -> WhStatus {
    guard(|| {
        let c = cert_ref(cert)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let v = [c.l1(), c.l2(), c.l3(), c.omega0];
        ptr::copy_nonoverlapping(v.as_ptr(), out, v.len());
        Ok(())
    })
}

/// `G21`, `G32` or `G43` (`which` = 21, 32, 43) as `re`, `im`.
///
/// # Safety
/// `cert` must be a live handle; `re`, `im` must be writable doubles.
#[no_mangle]
pub unsafe extern "C" fn wh_certificate_g(cert: *const WhCertificate, which: u32, re: *mut f64, im: *mut f64) -> WhStatus {
    guard(|| {
        let c = cert_ref(cert)?;
        if re.is_null() || im.is_null() {
            return Err(null("output pointer"));
        }
        let z = match which {
            21 => c.first.g21,
            32 => c.second.g32,
            43 => c.third.g43,
            _ => return Err((WhStatus::InvalidArgument, format!("which = {which}; expected 21, 32 or 43"))),
        };
        *re = z.re;
        *im = z.im;
        Ok(())
    })
}

/// A named vector (`"q"`, `"p"`, `"h11"` .. `"h33"`) as interleaved
/// `re, im` pairs; `len` must be at least `2 * dimension` (6 for the
/// governor).
///
/// # Safety
/// `cert` must be a live handle, `name` a NUL-terminated string and `out`
/// must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn wh_certificate_vector(
    cert: *const WhCertificate,
    name: *const c_char,
    out: *mut f64,
    len: usize,
) -> WhStatus {
    guard(|| {
        let c = cert_ref(cert)?;
        if name.is_null() || out.is_null() {
            return Err(null("name or out"));
        }
        let name = CStr::from_ptr(name).to_str().map_err(|_| (WhStatus::InvalidArgument, "name is not UTF-8".into()))?;
        let v = match name {
            "q" => &c.q,
            "p" => &c.p,
            _ => c
                .h_vectors()
                .into_iter()
                .find(|(n, _)| *n == name)
                .map(|(_, v)| v)
                .ok_or_else(|| (WhStatus::InvalidArgument, format!("no vector named {name}")))?,
        };
        if len < 2 * v.len() {
            return Err((WhStatus::InvalidArgument, format!("buffer holds {len} doubles, need {}", 2 * v.len())));
        }
        for (k, z) in v.iter().enumerate() {
            *out.add(2 * k) = z.re;
            *out.add(2 * k + 1) = z.im;
        }
        Ok(())
    })
}

/// Whether `l2` (`which` = 2) or `l3` (`which` = 3) was computed under the
/// vanishing of the lower coefficients, within tolerance.
///
/// # Safety
/// `cert` must be a live handle; `out` a writable bool.
#[no_mangle]
pub unsafe extern "C" fn wh_certificate_strict(cert: *const WhCertificate, which: u32, out: *mut bool) -> WhStatus {
    guard(|| {
        let c = cert_ref(cert)?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = match which {
            2 => c.validity.l2_strict,
            3 => c.validity.l3_strict,
            _ => return Err((WhStatus::InvalidArgument, format!("which = {which}; expected 2 or 3"))),
        };
        Ok(())
    })
}
