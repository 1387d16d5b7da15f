//! C ABI for the sector-indicator library.
//!
//! Conventions: opaque handles created by `*_new` and released by the
//! matching `*_free`; every fallible call returns an [`SiStatus`] and writes
//! results through out-pointers; the message for the most recent error on
//! the calling thread is available from [`si_last_error_message`] (free it
//! with [`si_string_free`]). Complex numbers travel as `re`/`im` pairs of
//! doubles.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};

use num_complex::Complex64;

use sector_indicator::functions::{catalog_lookup, AnalyticFunctionModel, GrowthEnvelope};
use sector_indicator::geometry::SectorPair;
use sector_indicator::indicator::{
    convexity_bound, estimate_indicator_1d, membership_test, trig_convex_bound_1d, GrowthGrid,
};
use sector_indicator::inversion::{invert_2d, InversionPlan};
use sector_indicator::polya::{borel_eval, polya_reconstruct, PowerSeriesET};
use sector_indicator::transform::ConcatenatedLaplace;
use sector_indicator::{Error, QuadratureConfig};

/// Status code of a fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SiStatus {
    Ok = 0,
    /// Malformed argument: bad identifier, angle outside range, null pointer.
    InvalidArgument = 1,
    /// Structurally valid input outside the mathematical domain.
    DomainError = 2,
    /// The computation could not be certified within budget.
    NumericError = 3,
    /// Result exceeds floating-point range; use the log-magnitude channel.
    Overflow = 4,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<Vec<u8>>) {
    let c = CString::new(message).unwrap_or_else(|_| CString::new("invalid error text").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn status_for(e: &Error) -> SiStatus {
    match e {
        Error::InvalidInput(_)
        | Error::InvalidSectorAngle(_)
        | Error::DegenerateAngle(_)
        | Error::EmptySamples => SiStatus::InvalidArgument,
        Error::RayOutsideSector { .. }
        | Error::OutOfSector(_)
        | Error::OutsideDomain { .. }
        | Error::AngleMismatch { .. }
        | Error::ZeroModulus
        | Error::ConvergenceRadius { .. }
        | Error::ZTooSmall { .. }
        | Error::PreconditionViolated { .. }
        | Error::NoIntersection { .. } => SiStatus::DomainError,
        Error::NonNegativeDecay(_) | Error::BudgetExceeded { .. } | Error::UnsupportedSource => {
            SiStatus::NumericError
        }
        Error::Overflow(_) => SiStatus::Overflow,
    }
}

fn fail(e: Error) -> SiStatus {
    let code = status_for(&e);
    set_error(e.to_string());
    code
}

fn fail_null(what: &str) -> SiStatus {
    set_error(format!("null pointer: {what}"));
    SiStatus::InvalidArgument
}

macro_rules! require {
    ($ptr:expr, $name:literal) => {
        if $ptr.is_null() {
            return fail_null($name);
        }
    };
}

/// Version string of the underlying library; static storage, do not free.
#[no_mangle]
pub extern "C" fn si_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message of the most recent error on this thread, or null when none.
/// The caller owns the returned string; release it with [`si_string_free`].
#[no_mangle]
pub extern "C" fn si_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|slot| match slot.borrow().as_ref() {
        Some(c) => c.clone().into_raw(),
        None => std::ptr::null_mut(),
    })
}

/// Release a string returned by this library.
///
/// # Safety
/// `s` must be a pointer previously returned by [`si_last_error_message`]
/// (or null) that has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn si_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// A catalog function together with its growth envelope.
pub struct SiFunction {
    model: AnalyticFunctionModel,
    envelope: GrowthEnvelope,
}

/// Build a catalog function: `exp:a_re,a_im,b_re,b_im` or `cossqrt` on the
/// sector pair (`alpha1`, `alpha2`). Returns null on failure (see
/// [`si_last_error_message`]).
///
/// # Safety
/// `id` must point to a valid NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn si_function_new(
    id: *const c_char,
    alpha1: f64,
    alpha2: f64,
) -> *mut SiFunction {
    if id.is_null() {
        fail_null("id");
        return std::ptr::null_mut();
    }
    let id = match CStr::from_ptr(id).to_str() {
        Ok(s) => s,
        Err(_) => {
            set_error("function id is not valid UTF-8");
            return std::ptr::null_mut();
        }
    };
    let sectors = match SectorPair::new(alpha1, alpha2) {
        Ok(s) => s,
        Err(e) => {
            fail(e);
            return std::ptr::null_mut();
        }
    };
    match catalog_lookup(id, sectors) {
        Ok((model, envelope)) => Box::into_raw(Box::new(SiFunction { model, envelope })),
        Err(e) => {
            fail(e);
            std::ptr::null_mut()
        }
    }
}

/// Release a function handle.
///
/// # Safety
/// `f` must come from [`si_function_new`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn si_function_free(f: *mut SiFunction) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Evaluate the function at a point of the closed sector product.
///
/// # Safety
/// `f` must be a live handle; `out_re` and `out_im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn si_function_eval(
    f: *const SiFunction,
    z1_re: f64,
    z1_im: f64,
    z2_re: f64,
    z2_im: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> SiStatus {
    require!(f, "function");
    require!(out_re, "out_re");
    require!(out_im, "out_im");
    match (*f).model.evaluate(Complex64::new(z1_re, z1_im), Complex64::new(z2_re, z2_im)) {
        Ok(v) => {
            *out_re = v.re;
            *out_im = v.im;
            SiStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Exact `ln |f|` in polar coordinates; overflow-safe for large radii.
///
/// # Safety
/// `f` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn si_function_log_magnitude(
    f: *const SiFunction,
    r1: f64,
    theta1: f64,
    r2: f64,
    theta2: f64,
    out: *mut f64,
) -> SiStatus {
    require!(f, "function");
    require!(out, "out");
    match (*f).model.log_magnitude(r1, theta1, r2, theta2) {
        Ok(v) => {
            *out = v;
            SiStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Componentwise convexity bound for `n` coordinates; writes `n` values.
///
/// # Safety
/// The four input arrays and `out_c` must each hold `n` doubles.
#[no_mangle]
pub unsafe extern "C" fn si_convexity_bound(
    n: usize,
    alphas: *const f64,
    thetas: *const f64,
    a_plus: *const f64,
    a_minus: *const f64,
    out_c: *mut f64,
) -> SiStatus {
    require!(alphas, "alphas");
    require!(thetas, "thetas");
    require!(a_plus, "a_plus");
    require!(a_minus, "a_minus");
    require!(out_c, "out_c");
    let alphas = std::slice::from_raw_parts(alphas, n);
    let thetas = std::slice::from_raw_parts(thetas, n);
    let a_plus = std::slice::from_raw_parts(a_plus, n);
    let a_minus = std::slice::from_raw_parts(a_minus, n);
    match convexity_bound(alphas, thetas, a_plus, a_minus) {
        Ok(c) => {
            std::ptr::copy_nonoverlapping(c.as_ptr(), out_c, n);
            SiStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// One-variable trigonometric-convexity value.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn si_trig_convex_bound_1d(
    alpha1: f64,
    alpha2: f64,
    alpha: f64,
    h1: f64,
    h2: f64,
    out: *mut f64,
) -> SiStatus {
    require!(out, "out");
    match trig_convex_bound_1d(alpha1, alpha2, alpha, h1, h2) {
        Ok(v) => {
            *out = v;
            SiStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Corner of the complement wedge for one coordinate.
///
/// # Safety
/// `out_re` and `out_im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn si_corner_point(
    alpha: f64,
    a_plus: f64,
    a_minus: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> SiStatus {
    require!(out_re, "out_re");
    require!(out_im, "out_im");
    match sector_indicator::geometry::corner_point(alpha, a_plus, a_minus) {
        Ok(q) => {
            *out_re = q.re;
            *out_im = q.im;
            SiStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Support value `-Re(q e^{i theta})`.
#[no_mangle]
pub extern "C" fn si_support_value(q_re: f64, q_im: f64, theta: f64) -> f64 {
    sector_indicator::geometry::support_value(Complex64::new(q_re, q_im), theta)
}

/// Concatenated Laplace transform handle.
pub struct SiTransform {
    inner: ConcatenatedLaplace,
}

/// Build a transform for a catalog function with default quadrature settings.
///
/// # Safety
/// `f` must be a live function handle.
#[no_mangle]
pub unsafe extern "C" fn si_transform_new(f: *const SiFunction) -> *mut SiTransform {
    if f.is_null() {
        fail_null("function");
        return std::ptr::null_mut();
    }
    let h = &*f;
    match ConcatenatedLaplace::new(h.model.clone(), h.envelope, QuadratureConfig::default()) {
        Ok(t) => Box::into_raw(Box::new(SiTransform { inner: t })),
        Err(e) => {
            fail(e);
            std::ptr::null_mut()
        }
    }
}

/// Release a transform handle.
///
/// # Safety
/// `t` must come from [`si_transform_new`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn si_transform_free(t: *mut SiTransform) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Evaluate the transform at `(omega1, omega2)` with automatic branch
/// selection; writes the value and its certified error estimate.
///
/// # Safety
/// `t` must be a live handle; the out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn si_transform_eval(
    t: *const SiTransform,
    w1_re: f64,
    w1_im: f64,
    w2_re: f64,
    w2_im: f64,
    out_re: *mut f64,
    out_im: *mut f64,
    out_err: *mut f64,
) -> SiStatus {
    require!(t, "transform");
    require!(out_re, "out_re");
    require!(out_im, "out_im");
    require!(out_err, "out_err");
    match (*t).inner.eval(Complex64::new(w1_re, w1_im), Complex64::new(w2_re, w2_im)) {
        Ok(r) => {
            *out_re = r.value.re;
            *out_im = r.value.im;
            *out_err = r.err_est;
            SiStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Maximum pairwise deviation of the admissible branch definitions.
///
/// # Safety
/// `t` must be a live handle; `out_dev` must be writable.
#[no_mangle]
pub unsafe extern "C" fn si_transform_branch_consistency(
    t: *const SiTransform,
    w1_re: f64,
    w1_im: f64,
    w2_re: f64,
    w2_im: f64,
    out_dev: *mut f64,
) -> SiStatus {
    require!(t, "transform");
    require!(out_dev, "out_dev");
    match (*t)
        .inner
        .branch_consistency(Complex64::new(w1_re, w1_im), Complex64::new(w2_re, w2_im))
    {
        Ok(d) => {
            *out_dev = d;
            SiStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Reconstruct the source by contour inversion at `(z1, z2)` using the
/// default contour plan for the source's type constants.
///
/// # Safety
/// `t` must be a live handle; the out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn si_invert(
    t: *const SiTransform,
    z1_re: f64,
    z1_im: f64,
    z2_re: f64,
    z2_im: f64,
    out_re: *mut f64,
    out_im: *mut f64,
    out_err: *mut f64,
) -> SiStatus {
    require!(t, "transform");
    require!(out_re, "out_re");
    require!(out_im, "out_im");
    require!(out_err, "out_err");
    let inner = &(*t).inner;
    let plan = match InversionPlan::for_source(inner) {
        Ok(p) => p,
        Err(e) => return fail(e),
    };
    match invert_2d(inner, &plan, Complex64::new(z1_re, z1_im), Complex64::new(z2_re, z2_im)) {
        Ok(r) => {
            *out_re = r.value.re;
            *out_im = r.value.im;
            *out_err = r.err_est;
            SiStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Growth-set membership of the slope vector `(nu1, nu2)` along the ray pair
/// `(theta1, theta2)`, on the default radius grid.
///
/// # Safety
/// `f` must be a live handle; the out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn si_membership_test(
    f: *const SiFunction,
    theta1: f64,
    theta2: f64,
    nu1: f64,
    nu2: f64,
    out_accepted: *mut bool,
    out_slope: *mut f64,
    out_offset: *mut f64,
) -> SiStatus {
    require!(f, "function");
    require!(out_accepted, "out_accepted");
    require!(out_slope, "out_slope");
    require!(out_offset, "out_offset");
    let grid = GrowthGrid::default();
    match membership_test(&(*f).model, (theta1, theta2), (nu1, nu2), &grid) {
        Ok(v) => {
            *out_accepted = v.accepted;
            *out_slope = v.residual_slope;
            *out_offset = v.residual_offset;
            SiStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Directional growth rate of the function's first-variable section at
/// `z2 = 0`, estimated on the default grid.
///
/// # Safety
/// `f` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn si_indicator_section(
    f: *const SiFunction,
    theta: f64,
    out: *mut f64,
) -> SiStatus {
    require!(f, "function");
    require!(out, "out");
    let model = (*f).model.clone();
    let section = sector_indicator::functions::OneVarModel {
        label: String::new(),
        eval: {
            let m = model.clone();
            std::sync::Arc::new(move |z| m.eval_unchecked(z, Complex64::default()))
        },
        log_magnitude: std::sync::Arc::new(move |r, th| {
            model.log_magnitude_unchecked(r, th, 0.0, 0.0)
        }),
    };
    match estimate_indicator_1d(&section, theta, &GrowthGrid::default()) {
        Ok(v) => {
            *out = v;
            SiStatus::Ok
        }
        Err(e) => fail(e),
    }
}

unsafe fn series_from_parts(
    coeff_re: *const f64,
    coeff_im: *const f64,
    n: usize,
    type_radius: f64,
) -> Result<PowerSeriesET, Error> {
    let re = std::slice::from_raw_parts(coeff_re, n);
    let im = std::slice::from_raw_parts(coeff_im, n);
    let coefficients: Vec<Complex64> =
        re.iter().zip(im).map(|(&r, &i)| Complex64::new(r, i)).collect();
    PowerSeriesET::new(coefficients, type_radius)
}

/// Borel transform of a truncated series at `omega`; also reports the
/// truncation-tail estimate.
///
/// # Safety
/// `coeff_re` and `coeff_im` must hold `n` doubles; out-pointers writable.
#[no_mangle]
pub unsafe extern "C" fn si_borel_eval(
    coeff_re: *const f64,
    coeff_im: *const f64,
    n: usize,
    type_radius: f64,
    omega_re: f64,
    omega_im: f64,
    out_re: *mut f64,
    out_im: *mut f64,
    out_tail: *mut f64,
) -> SiStatus {
    require!(coeff_re, "coeff_re");
    require!(coeff_im, "coeff_im");
    require!(out_re, "out_re");
    require!(out_im, "out_im");
    require!(out_tail, "out_tail");
    let series = match series_from_parts(coeff_re, coeff_im, n, type_radius) {
        Ok(s) => s,
        Err(e) => return fail(e),
    };
    match borel_eval(&series, Complex64::new(omega_re, omega_im)) {
        Ok(b) => {
            *out_re = b.value.re;
            *out_im = b.value.im;
            *out_tail = b.tail_estimate;
            SiStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Circle reconstruction of the series' function at `z` from its Borel
/// transform.
///
/// # Safety
/// `coeff_re` and `coeff_im` must hold `n` doubles; out-pointers writable.
#[no_mangle]
pub unsafe extern "C" fn si_polya_reconstruct(
    coeff_re: *const f64,
    coeff_im: *const f64,
    n: usize,
    type_radius: f64,
    center_re: f64,
    center_im: f64,
    radius: f64,
    z_re: f64,
    z_im: f64,
    out_re: *mut f64,
    out_im: *mut f64,
    out_err: *mut f64,
) -> SiStatus {
    require!(coeff_re, "coeff_re");
    require!(coeff_im, "coeff_im");
    require!(out_re, "out_re");
    require!(out_im, "out_im");
    require!(out_err, "out_err");
    let series = match series_from_parts(coeff_re, coeff_im, n, type_radius) {
        Ok(s) => s,
        Err(e) => return fail(e),
    };
    let g = |w: Complex64| borel_eval(&series, w).map(|b| b.value).unwrap_or_default();
    match polya_reconstruct(
        g,
        Complex64::new(center_re, center_im),
        radius,
        Complex64::new(z_re, z_im),
        &QuadratureConfig::default(),
    ) {
        Ok(r) => {
            *out_re = r.value.re;
            *out_im = r.value.im;
            *out_err = r.err_est;
            SiStatus::Ok
        }
        Err(e) => fail(e),
    }
}
