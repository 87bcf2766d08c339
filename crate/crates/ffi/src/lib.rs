//! C ABI for the `s3_sga` library.
//!
//! Every function returns an [`S3Status`]; on failure a message is available
//! from [`s3_last_error`] until the next call on the same thread. Handles are
//! opaque and must be released with their `_free` function. Strings returned
//! through out-parameters are owned by the caller and released with
//! [`s3_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use s3_sga::classical::{self, PhaseState, Trajectory};
use s3_sga::operators::{self, Representation};
use s3_sga::verify::{self, SuiteOptions};
use s3_sga::Error;

/// Result code of every call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum S3Status {
    Ok = 0,
    /// The computation ran but at least one check failed.
    CheckFailed = 1,
    InvalidArgument = 2,
    NullPointer = 3,
    OffConstraintSurface = 4,
    UnderResolvedStep = 5,
    Numerical = 6,
    Internal = 7,
}

/// Truncated quantum representation.
pub struct S3Representation {
    inner: Representation,
}

/// Sampled classical trajectory.
pub struct S3Trajectory {
    inner: Trajectory,
}

/// Number of doubles per trajectory sample: t, x1..x4, p1..p4, H, J12..J34.
pub const S3_SAMPLE_WIDTH: usize = 16;

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn fail(status: S3Status, msg: impl Into<String>) -> S3Status {
    set_error(msg);
    status
}

fn from_error(e: Error) -> S3Status {
    let status = match e {
        Error::OffConstraintSurface { .. } => S3Status::OffConstraintSurface,
        Error::UnderResolvedStep { .. } => S3Status::UnderResolvedStep,
        Error::InvalidParameter(_) | Error::IndexOutOfRange(_) | Error::ZeroAmbientRadius => S3Status::InvalidArgument,
        Error::Io(_) | Error::Json(_) => S3Status::Internal,
        _ => S3Status::Numerical,
    };
    fail(status, e.to_string())
}

fn guard(f: impl FnOnce() -> S3Status) -> S3Status {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(S3Status::Internal, "panic inside s3_sga"))
}

unsafe fn read4(p: *const f64) -> Option<[f64; 4]> {
    if p.is_null() {
        None
    } else {
        Some(std::array::from_fn(|i| *p.add(i)))
    }
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> S3Status {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            S3Status::Ok
        }
        Err(_) => fail(S3Status::Internal, "string contains a NUL byte"),
    }
}

/// Message of the last failed call on this thread, or NULL. Owned by the library.
#[no_mangle]
pub extern "C" fn s3_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn s3_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// `f(h) = 2 Γ(h/2 + 3/4) / Γ(h/2 + 1/4)`.
#[no_mangle]
pub extern "C" fn s3_f_gamma(h: f64) -> f64 {
    operators::f_gamma(h)
}

/// Builds the representation on harmonic polynomials of degree ≤ `max_level`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn s3_representation_new(max_level: usize, out: *mut *mut S3Representation) -> S3Status {
    guard(|| {
        if out.is_null() {
            return fail(S3Status::NullPointer, "out is NULL");
        }
        match Representation::build(max_level) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(S3Representation { inner }));
                S3Status::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `rep` must come from `s3_representation_new` and not have been freed. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn s3_representation_free(rep: *mut S3Representation) {
    if !rep.is_null() {
        drop(Box::from_raw(rep));
    }
}

/// Dimension of the truncated space, or 0 for NULL.
///
/// # Safety
/// `rep` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn s3_representation_dim(rep: *const S3Representation) -> usize {
    rep.as_ref().map_or(0, |r| r.inner.dim())
}

/// Measured Hamiltonian eigenvalue of each level `0..=N`, written to `out[0..=N]`.
/// Returns `CheckFailed` if a level is not `n(n+2)` with multiplicity `(n+1)²`.
///
/// # Safety
/// `rep` must be a live handle and `out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn s3_spectrum(rep: *const S3Representation, out: *mut f64, len: usize) -> S3Status {
    guard(|| {
        let Some(rep) = rep.as_ref() else {
            return fail(S3Status::NullPointer, "rep is NULL");
        };
        if out.is_null() {
            return fail(S3Status::NullPointer, "out is NULL");
        }
        let rows = match verify::spectrum_table(&rep.inner) {
            Ok(rows) => rows,
            Err(e) => return from_error(e),
        };
        if len < rows.len() {
            return fail(
                S3Status::InvalidArgument,
                format!("buffer holds {len} values, need {}", rows.len()),
            );
        }
        for (k, r) in rows.iter().enumerate() {
            *out.add(k) = r.measured;
        }
        if rows.iter().all(|r| r.multiplicity == r.degeneracy && r.residual <= verify::TOL_ALGEBRA) {
            S3Status::Ok
        } else {
            fail(S3Status::CheckFailed, "spectrum deviates from n(n+2)")
        }
    })
}

/// Runs the verification suite with shift `c` and returns the JSON report in
/// `*out_json`. The report is produced whether or not the checks pass.
///
/// # Safety
/// `rep` must be a live handle and `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn s3_verify_json(rep: *const S3Representation, c: f64, out_json: *mut *mut c_char) -> S3Status {
    guard(|| {
        let Some(rep) = rep.as_ref() else {
            return fail(S3Status::NullPointer, "rep is NULL");
        };
        if out_json.is_null() {
            return fail(S3Status::NullPointer, "out_json is NULL");
        }
        if rep.inner.max_level() < 2 {
            return fail(S3Status::InvalidArgument, "verification needs N >= 2");
        }
        let opts = SuiteOptions {
            c,
            ..SuiteOptions::default()
        };
        let report = match verify::run_suite(&rep.inner, opts) {
            Ok(r) => r,
            Err(e) => return from_error(e),
        };
        let json = match report.to_json() {
            Ok(j) => j,
            Err(e) => return from_error(e),
        };
        match put_string(out_json, json) {
            S3Status::Ok if report.pass => S3Status::Ok,
            S3Status::Ok => fail(S3Status::CheckFailed, "verification failed"),
            other => other,
        }
    })
}

/// Closed-form state at time `t` from `(x0, p0)`, written to `x_out`, `p_out`.
///
/// # Safety
/// All pointers must reference 4 doubles.
#[no_mangle]
pub unsafe extern "C" fn s3_analytic_solution(
    x0: *const f64,
    p0: *const f64,
    t: f64,
    x_out: *mut f64,
    p_out: *mut f64,
) -> S3Status {
    guard(|| {
        let (Some(x), Some(p)) = (read4(x0), read4(p0)) else {
            return fail(S3Status::NullPointer, "x0 or p0 is NULL");
        };
        if x_out.is_null() || p_out.is_null() {
            return fail(S3Status::NullPointer, "x_out or p_out is NULL");
        }
        let state = match PhaseState::new(x, p) {
            Ok(s) => s,
            Err(e) => return from_error(e),
        };
        let s = classical::analytic_solution(&state, t);
        for i in 0..4 {
            *x_out.add(i) = s.x[i];
            *p_out.add(i) = s.p[i];
        }
        S3Status::Ok
    })
}

/// Integrates from `(x0, p0)` to `t_end` with RK4 step `dt`, or samples the
/// closed form when `analytic` is nonzero. The state must lie on the
/// constraint surface.
///
/// # Safety
/// `x0`, `p0` must reference 4 doubles and `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn s3_trajectory_new(
    x0: *const f64,
    p0: *const f64,
    t_end: f64,
    dt: f64,
    analytic: i32,
    out: *mut *mut S3Trajectory,
) -> S3Status {
    guard(|| {
        let (Some(x), Some(p)) = (read4(x0), read4(p0)) else {
            return fail(S3Status::NullPointer, "x0 or p0 is NULL");
        };
        if out.is_null() {
            return fail(S3Status::NullPointer, "out is NULL");
        }
        let built = PhaseState::new(x, p).and_then(|s| {
            if analytic != 0 {
                classical::analytic_trajectory(&s, t_end, dt)
            } else {
                classical::integrate(&s, t_end, dt)
            }
        });
        match built {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(S3Trajectory { inner }));
                S3Status::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `traj` must come from `s3_trajectory_new` and not have been freed. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn s3_trajectory_free(traj: *mut S3Trajectory) {
    if !traj.is_null() {
        drop(Box::from_raw(traj));
    }
}

/// Number of samples, or 0 for NULL.
///
/// # Safety
/// `traj` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn s3_trajectory_len(traj: *const S3Trajectory) -> usize {
    traj.as_ref().map_or(0, |t| t.inner.len())
}

/// Writes sample `k` as `S3_SAMPLE_WIDTH` doubles in CSV column order.
///
/// # Safety
/// `traj` must be a live handle and `out` must hold `S3_SAMPLE_WIDTH` doubles.
#[no_mangle]
pub unsafe extern "C" fn s3_trajectory_sample(traj: *const S3Trajectory, k: usize, out: *mut f64) -> S3Status {
    guard(|| {
        let Some(traj) = traj.as_ref() else {
            return fail(S3Status::NullPointer, "traj is NULL");
        };
        if out.is_null() {
            return fail(S3Status::NullPointer, "out is NULL");
        }
        let Some(s) = traj.inner.samples().nth(k) else {
            return fail(S3Status::InvalidArgument, format!("sample {k} out of range"));
        };
        let values = [
            s.t, s.x1, s.x2, s.x3, s.x4, s.p1, s.p2, s.p3, s.p4, s.H, s.J12, s.J13, s.J14, s.J23, s.J24, s.J34,
        ];
        ptr::copy_nonoverlapping(values.as_ptr(), out, S3_SAMPLE_WIDTH);
        S3Status::Ok
    })
}

/// Checks the constants of motion and returns the JSON report. A degenerate
/// (`H = 0`) trajectory reports status `degenerate` and returns `Ok`.
///
/// # Safety
/// `traj` must be a live handle and `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn s3_trajectory_check_json(traj: *const S3Trajectory, out_json: *mut *mut c_char) -> S3Status {
    guard(|| {
        let Some(traj) = traj.as_ref() else {
            return fail(S3Status::NullPointer, "traj is NULL");
        };
        if out_json.is_null() {
            return fail(S3Status::NullPointer, "out_json is NULL");
        }
        let report = classical::check_motion_constants(&traj.inner);
        let json = match report.to_json() {
            Ok(j) => j,
            Err(e) => return from_error(e),
        };
        match put_string(out_json, json) {
            S3Status::Ok if report.pass() => S3Status::Ok,
            S3Status::Ok => fail(S3Status::CheckFailed, "constants of motion violated"),
            other => other,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CStr;

    fn last_error() -> String {
        let p = s3_last_error();
        assert!(!p.is_null());
        unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
    }

    #[test]
    fn f_gamma_recursion() {
        for h in 1..=5 {
            let h = h as f64;
            assert!((s3_f_gamma(h) * s3_f_gamma(h + 1.0) - (2.0 * h + 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn spectrum_through_handle() {
        unsafe {
            let mut rep = ptr::null_mut();
            assert_eq!(s3_representation_new(3, &mut rep), S3Status::Ok);
            assert_eq!(s3_representation_dim(rep), 30);
            let mut buf = [0.0; 4];
            assert_eq!(s3_spectrum(rep, buf.as_mut_ptr(), 4), S3Status::Ok);
            for (n, e) in buf.iter().enumerate() {
                assert!((e - (n * (n + 2)) as f64).abs() < 1e-10);
            }
            assert_eq!(s3_spectrum(rep, buf.as_mut_ptr(), 2), S3Status::InvalidArgument);
            assert!(last_error().contains("need 4"));
            s3_representation_free(rep);
        }
    }

    #[test]
    fn verify_reports_json_and_failure() {
        unsafe {
            let mut rep = ptr::null_mut();
            assert_eq!(s3_representation_new(3, &mut rep), S3Status::Ok);
            let mut json = ptr::null_mut();
            assert_eq!(s3_verify_json(rep, 2.0, &mut json), S3Status::Ok);
            let text = CStr::from_ptr(json).to_str().unwrap().to_owned();
            s3_string_free(json);
            let v: serde_json::Value = serde_json::from_str(&text).unwrap();
            assert_eq!(v["pass"], true);
            let mut json = ptr::null_mut();
            assert_eq!(s3_verify_json(rep, 0.0, &mut json), S3Status::CheckFailed);
            assert!(!json.is_null());
            s3_string_free(json);
            s3_representation_free(rep);

            let mut small = ptr::null_mut();
            assert_eq!(s3_representation_new(1, &mut small), S3Status::Ok);
            let mut json = ptr::null_mut();
            assert_eq!(s3_verify_json(small, 2.0, &mut json), S3Status::InvalidArgument);
            assert!(json.is_null());
            s3_representation_free(small);
        }
    }

    #[test]
    fn null_pointers_are_reported() {
        unsafe {
            assert_eq!(s3_representation_new(2, ptr::null_mut()), S3Status::NullPointer);
            assert!(last_error().contains("NULL"));
            assert_eq!(s3_spectrum(ptr::null(), ptr::null_mut(), 0), S3Status::NullPointer);
            assert_eq!(s3_representation_dim(ptr::null()), 0);
            assert_eq!(s3_trajectory_len(ptr::null()), 0);
            s3_representation_free(ptr::null_mut());
            s3_trajectory_free(ptr::null_mut());
            s3_string_free(ptr::null_mut());
        }
    }

    #[test]
    fn trajectory_round_trip() {
        let x0 = [1.0, 0.0, 0.0, 0.0];
        let p0 = [0.0, 1.0, 0.0, 0.0];
        let period = std::f64::consts::PI;
        unsafe {
            let mut traj = ptr::null_mut();
            let status = s3_trajectory_new(x0.as_ptr(), p0.as_ptr(), 10.0 * period, period / 1000.0, 0, &mut traj);
            assert_eq!(status, S3Status::Ok);
            assert_eq!(s3_trajectory_len(traj), 10_001);
            let mut row = [0.0; S3_SAMPLE_WIDTH];
            assert_eq!(s3_trajectory_sample(traj, 10_000, row.as_mut_ptr()), S3Status::Ok);
            assert!((row[0] - 10.0 * period).abs() < 1e-12);
            assert!((row[1] - 1.0).abs() < 1e-6);
            assert_eq!(s3_trajectory_sample(traj, 10_001, row.as_mut_ptr()), S3Status::InvalidArgument);
            let mut json = ptr::null_mut();
            assert_eq!(s3_trajectory_check_json(traj, &mut json), S3Status::Ok);
            let v: serde_json::Value = serde_json::from_str(CStr::from_ptr(json).to_str().unwrap()).unwrap();
            assert_eq!(v["status"], "checked");
            s3_string_free(json);
            s3_trajectory_free(traj);

            let mut bad = ptr::null_mut();
            let status = s3_trajectory_new(x0.as_ptr(), p0.as_ptr(), 1.0, 1.0, 0, &mut bad);
            assert_eq!(status, S3Status::UnderResolvedStep);
            let off = [1.0, 0.5, 0.0, 0.0];
            let status = s3_trajectory_new(off.as_ptr(), p0.as_ptr(), 1.0, 0.01, 0, &mut bad);
            assert_eq!(status, S3Status::OffConstraintSurface);
            assert!(bad.is_null());
        }
    }

    #[test]
    fn analytic_half_period() {
        let x0 = [1.0, 0.0, 0.0, 0.0];
        let p0 = [0.0, 1.0, 0.0, 0.0];
        let (mut x, mut p) = ([0.0; 4], [0.0; 4]);
        let status = unsafe {
            s3_analytic_solution(x0.as_ptr(), p0.as_ptr(), std::f64::consts::FRAC_PI_2, x.as_mut_ptr(), p.as_mut_ptr())
        };
        assert_eq!(status, S3Status::Ok);
        assert!((x[0] + 1.0).abs() < 1e-15 && (p[1] + 1.0).abs() < 1e-15);
    }
}
