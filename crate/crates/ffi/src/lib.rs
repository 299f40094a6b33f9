//! C ABI over the numspec library.
//!
//! Objects cross the boundary as opaque handles created by `ns_*_new` or
//! `ns_*_build` and released by the matching `ns_*_free`. Every fallible call
//! returns an [`NsStatus`]; on failure [`ns_last_error_message`] describes
//! the error for the calling thread. Exponents are passed as `double`, with
//! `INFINITY` selecting the max norm. Complex arrays are interleaved
//! `re, im` pairs.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use numspec::{
    certify_halfplane, eigenvalues, lognorm_closed, lognorm_quotient, region_for, CMatrix, Error, GridSpec, NormSpec,
    Region, SweepOptions, C64,
};

/// Result codes. Input errors use 2 and numerical failures 4, matching the
/// command-line exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NsStatus {
    Ok = 0,
    InvalidInput = 2,
    Numerical = 4,
    NullPointer = 5,
    /// The output buffer is too small; the required length was written.
    BufferTooSmall = 6,
    Panic = 7,
}

/// Opaque square complex matrix.
pub struct NsMatrix(CMatrix);

/// Opaque numerical-spectrum region together with its norm.
pub struct NsRegion {
    region: Region,
    norm: NormSpec,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: NsStatus, msg: &str) -> NsStatus {
    set_error(msg);
    status
}

fn from_error(e: Error) -> NsStatus {
    let status = if e.exit_code() == 2 {
        NsStatus::InvalidInput
    } else {
        NsStatus::Numerical
    };
    fail(status, &e.to_string())
}

/// Runs `f`, converting panics into [`NsStatus::Panic`].
fn guard(f: impl FnOnce() -> NsStatus) -> NsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".to_string());
            fail(NsStatus::Panic, &format!("panic: {msg}"))
        }
    }
}

macro_rules! try_ns {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(e) => return from_error(e),
        }
    };
}

macro_rules! deref {
    ($p:expr, $name:literal) => {
        match unsafe { $p.as_ref() } {
            Some(v) => v,
            None => return fail(NsStatus::NullPointer, concat!($name, " is null")),
        }
    };
}

/// Copies `values` into `out` as interleaved pairs. `count` always receives
/// the number of complex values.
unsafe fn write_complex(values: &[C64], out: *mut f64, capacity: usize, count: *mut usize) -> NsStatus {
    if count.is_null() {
        return fail(NsStatus::NullPointer, "count is null");
    }
    *count = values.len();
    if values.len() > capacity {
        return fail(
            NsStatus::BufferTooSmall,
            &format!("buffer holds {capacity} values, need {}", values.len()),
        );
    }
    if values.is_empty() {
        return NsStatus::Ok;
    }
    if out.is_null() {
        return fail(NsStatus::NullPointer, "output buffer is null");
    }
    for (k, z) in values.iter().enumerate() {
        *out.add(2 * k) = z.re;
        *out.add(2 * k + 1) = z.im;
    }
    NsStatus::Ok
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ns_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Creates an `n x n` matrix from row-major real and imaginary parts.
/// `im` may be null for a real matrix.
///
/// # Safety
/// `re` (and `im` when non-null) must point to `n * n` doubles; `out` must
/// be writable.
#[no_mangle]
pub unsafe extern "C" fn ns_matrix_new(n: usize, re: *const f64, im: *const f64, out: *mut *mut NsMatrix) -> NsStatus {
    guard(|| {
        if re.is_null() || out.is_null() {
            return fail(NsStatus::NullPointer, "re and out must be non-null");
        }
        let Some(len) = n.checked_mul(n) else {
            return fail(NsStatus::InvalidInput, "dimension overflows");
        };
        let re = std::slice::from_raw_parts(re, len);
        let entries: Vec<C64> = if im.is_null() {
            re.iter().map(|&x| C64::new(x, 0.0)).collect()
        } else {
            let im = std::slice::from_raw_parts(im, len);
            re.iter().zip(im).map(|(&a, &b)| C64::new(a, b)).collect()
        };
        let m = try_ns!(CMatrix::from_row_major(n, &entries));
        *out = Box::into_raw(Box::new(NsMatrix(m)));
        NsStatus::Ok
    })
}

/// # Safety
/// `m` must come from [`ns_matrix_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ns_matrix_free(m: *mut NsMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Sweeps the support function on `angles` uniform directions and builds
/// the region.
///
/// # Safety
/// `m` must be a live matrix handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ns_region_build(
    m: *const NsMatrix,
    p: f64,
    angles: usize,
    seed: u64,
    out: *mut *mut NsRegion,
) -> NsStatus {
    guard(|| {
        let m = deref!(m, "matrix");
        if out.is_null() {
            return fail(NsStatus::NullPointer, "out is null");
        }
        let norm = try_ns!(NormSpec::p(p));
        let opts = SweepOptions {
            angles,
            seed,
            ..SweepOptions::default()
        };
        let region = try_ns!(region_for(&m.0, &norm, &opts));
        *out = Box::into_raw(Box::new(NsRegion { region, norm }));
        NsStatus::Ok
    })
}

/// # Safety
/// `r` must come from [`ns_region_build`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ns_region_free(r: *mut NsRegion) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// # Safety
/// `r` must be a live region handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ns_region_radius(r: *const NsRegion, out: *mut f64) -> NsStatus {
    guard(|| {
        let r = deref!(r, "region");
        if out.is_null() {
            return fail(NsStatus::NullPointer, "out is null");
        }
        *out = r.region.radius;
        NsStatus::Ok
    })
}

/// Counter-clockwise vertices of the outer polygon. Call with `capacity` 0
/// to query the count.
///
/// # Safety
/// `out` must hold `2 * capacity` doubles; `count` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ns_region_outer(
    r: *const NsRegion,
    out: *mut f64,
    capacity: usize,
    count: *mut usize,
) -> NsStatus {
    guard(|| {
        let r = deref!(r, "region");
        write_complex(&r.region.outer, out, capacity, count)
    })
}

/// Region as a JSON document. Release the string with [`ns_string_free`].
///
/// # Safety
/// `r` must be a live region handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ns_region_to_json(r: *const NsRegion, out: *mut *mut c_char) -> NsStatus {
    guard(|| {
        let r = deref!(r, "region");
        if out.is_null() {
            return fail(NsStatus::NullPointer, "out is null");
        }
        let text = numspec::cli::to_json_string(&r.region.to_json(&r.norm.label()));
        match CString::new(text) {
            Ok(c) => {
                *out = c.into_raw();
                NsStatus::Ok
            }
            Err(_) => fail(NsStatus::Numerical, "JSON contained a NUL byte"),
        }
    })
}

/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ns_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Logarithmic norm: closed form for `p` in {1, 2, inf}, the difference
/// quotient otherwise.
///
/// # Safety
/// `m` must be a live matrix handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ns_lognorm(m: *const NsMatrix, p: f64, out: *mut f64) -> NsStatus {
    guard(|| {
        let m = deref!(m, "matrix");
        if out.is_null() {
            return fail(NsStatus::NullPointer, "out is null");
        }
        let norm = try_ns!(NormSpec::p(p));
        let e = norm.exponent().expect("lp norm");
        let value = if e.is_classical() {
            try_ns!(lognorm_closed(&m.0, e)).value
        } else {
            try_ns!(lognorm_quotient(&m.0, &norm)).value
        };
        *out = value;
        NsStatus::Ok
    })
}

/// Checks the resolvent bound on the half plane `Re(e^{-iθ}λ) > ω` over a
/// `distances x tangential` grid. A failed check is not an error: `pass`
/// receives 0 and the call returns [`NsStatus::Ok`].
///
/// # Safety
/// `m` must be a live matrix handle; `worst_ratio` and `pass` writable.
#[no_mangle]
pub unsafe extern "C" fn ns_certify(
    m: *const NsMatrix,
    p: f64,
    theta: f64,
    omega: f64,
    distances: usize,
    tangential: usize,
    worst_ratio: *mut f64,
    pass: *mut i32,
) -> NsStatus {
    guard(|| {
        let m = deref!(m, "matrix");
        if worst_ratio.is_null() || pass.is_null() {
            return fail(NsStatus::NullPointer, "worst_ratio and pass must be non-null");
        }
        if distances == 0 || tangential == 0 {
            return fail(NsStatus::InvalidInput, "grid counts must be at least 1");
        }
        let norm = try_ns!(NormSpec::p(p));
        let grid = GridSpec {
            distances,
            tangential,
            ..GridSpec::default()
        };
        let c = try_ns!(certify_halfplane(&m.0, &norm, theta, omega, &grid));
        *worst_ratio = c.worst_ratio;
        *pass = i32::from(c.pass);
        NsStatus::Ok
    })
}

/// Eigenvalues in the order the solver returns them.
///
/// # Safety
/// `out` must hold `2 * capacity` doubles; `count` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ns_eigenvalues(
    m: *const NsMatrix,
    out: *mut f64,
    capacity: usize,
    count: *mut usize,
) -> NsStatus {
    guard(|| {
        let m = deref!(m, "matrix");
        let eigs = try_ns!(eigenvalues(&m.0));
        write_complex(&eigs, out, capacity, count)
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ns_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
