//! C ABI for `qutrit-dsd`.
//!
//! Heap objects cross the boundary as opaque handles created by a
//! `qd_*` constructor and released with the matching `*_free`. Every
//! fallible call returns a [`QdStatus`]; on failure the message is available
//! from [`qd_last_error`] on the same thread. Panics never unwind into C.
//!
//! The header `include/qutrit_dsd.h` is regenerated by `build.rs`.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use qutrit_dsd::channel::{apply_two_sided, kraus_set, ChannelParams, ChannelVariant};
use qutrit_dsd::dynamics::{
    detect_events, evolve_at, p_of_t, scan, EventKind, EventWindow, ScanConfig, TimeSeries,
};
use qutrit_dsd::linalg::{ComplexMatrix, DensityMatrix, C64};
use qutrit_dsd::states::{horodecki_state, HorodeckiParam};
use qutrit_dsd::witnesses::{witness_report, WitnessReport};
use qutrit_dsd::Error;

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QdStatus {
    Ok = 0,
    NullPointer = 1,
    /// Malformed call: wrong shape, bad grid, index out of range.
    InvalidArgument = 2,
    /// A physical parameter outside the model's domain.
    Domain = 3,
    /// A matrix failed a state invariant or the eigensolver failed.
    Numerical = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QdVariant {
    AsWritten = 0,
    Factorized = 1,
}

impl From<QdVariant> for ChannelVariant {
    fn from(v: QdVariant) -> Self {
        match v {
            QdVariant::AsWritten => ChannelVariant::AsWritten,
            QdVariant::Factorized => ChannelVariant::Factorized,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QdChannelParams {
    pub r: f64,
    pub p1: f64,
    pub p2: f64,
    pub variant: QdVariant,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct QdWitnessReport {
    pub negativity: f64,
    pub ccnr: f64,
    pub lambda_min: f64,
}

impl From<WitnessReport> for QdWitnessReport {
    fn from(w: WitnessReport) -> Self {
        Self {
            negativity: w.negativity,
            ccnr: w.ccnr,
            lambda_min: w.lambda_min,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QdScanConfig {
    pub alpha: f64,
    pub r: f64,
    pub variant: QdVariant,
    pub t_start: f64,
    pub t_end: f64,
    pub steps: usize,
    /// Bisection width for event times; 0 selects the library default.
    pub refine_tol: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct QdTimePoint {
    pub t: f64,
    pub p: f64,
    pub report: QdWitnessReport,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QdEventKind {
    Dsd = 0,
    Dsb = 1,
    CcnrPositive = 2,
    Undetected = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QdEventWindow {
    pub kind: QdEventKind,
    pub t_start: f64,
    pub t_end: f64,
}

impl From<&EventWindow> for QdEventWindow {
    fn from(e: &EventWindow) -> Self {
        let kind = match e.kind {
            EventKind::Dsd => QdEventKind::Dsd,
            EventKind::Dsb => QdEventKind::Dsb,
            EventKind::CcnrPositiveWindow => QdEventKind::CcnrPositive,
            EventKind::UndetectedWindow => QdEventKind::Undetected,
        };
        Self {
            kind,
            t_start: e.t_start,
            t_end: e.t_end,
        }
    }
}

/// Opaque density matrix handle.
pub struct QdDensityMatrix {
    inner: DensityMatrix,
}

/// Opaque scan result; remembers its configuration for event detection.
pub struct QdTimeSeries {
    series: TimeSeries,
    config: ScanConfig,
}

/// Opaque list of event windows.
pub struct QdEventList {
    events: Vec<EventWindow>,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> QdStatus {
    match e {
        _ if e.is_domain() => QdStatus::Domain,
        Error::NotHermitian { .. }
        | Error::NotUnitTrace { .. }
        | Error::NotPositive { .. }
        | Error::NoConvergence => QdStatus::Numerical,
        _ => QdStatus::InvalidArgument,
    }
}

fn fail(status: QdStatus, msg: impl Into<String>) -> QdStatus {
    set_last_error(msg.into());
    status
}

/// Runs `body`, converting library errors and panics into status codes.
fn guard(body: impl FnOnce() -> Result<(), QdStatus>) -> QdStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_last_error(String::new());
            QdStatus::Ok
        }
        Ok(Err(status)) => status,
        Err(_) => fail(QdStatus::Panic, "internal panic"),
    }
}

fn lib<T>(r: qutrit_dsd::Result<T>) -> Result<T, QdStatus> {
    r.map_err(|e| fail(status_of(&e), e.to_string()))
}

fn non_null<T>(p: *const T, what: &str) -> Result<(), QdStatus> {
    if p.is_null() {
        Err(fail(QdStatus::NullPointer, format!("{what} is null")))
    } else {
        Ok(())
    }
}

unsafe fn emit<T>(out: *mut *mut T, value: T) -> Result<(), QdStatus> {
    non_null(out, "output handle pointer")?;
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn handle<'a, T>(h: *const T, what: &str) -> Result<&'a T, QdStatus> {
    non_null(h, what)?;
    Ok(&*h)
}

fn channel_params(p: &QdChannelParams) -> qutrit_dsd::Result<ChannelParams> {
    ChannelParams::new(p.r, p.p1, p.p2, p.variant.into())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn qd_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn qd_status_string(status: QdStatus) -> *const c_char {
    let s: &'static str = match status {
        QdStatus::Ok => "ok\0",
        QdStatus::NullPointer => "null pointer\0",
        QdStatus::InvalidArgument => "invalid argument\0",
        QdStatus::Domain => "parameter outside model domain\0",
        QdStatus::Numerical => "numerical invariant violated\0",
        QdStatus::Panic => "internal panic\0",
    };
    s.as_ptr().cast()
}

/// Message of the last failed call on this thread, or "" after a success.
/// Valid until the next `qd_*` call on the same thread.
#[no_mangle]
pub extern "C" fn qd_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn qd_p_of_t(t: f64, out: *mut f64) -> QdStatus {
    guard(|| {
        non_null(out, "out")?;
        *out = lib(p_of_t(t))?;
        Ok(())
    })
}

/// Initial state `rho_alpha(0)`.
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn qd_density_matrix_horodecki(alpha: f64, out: *mut *mut QdDensityMatrix) -> QdStatus {
    guard(|| {
        let param = lib(HorodeckiParam::new(alpha))?;
        emit(out, QdDensityMatrix {
            inner: horodecki_state(param),
        })
    })
}

/// Builds a validated density matrix from interleaved `(re, im)` pairs in
/// row-major order; `len` counts doubles and must be `2 * d * d` with
/// `d = dim_a * dim_b`.
///
/// # Safety
/// `re_im` must point to `len` readable doubles; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn qd_density_matrix_from_entries(
    re_im: *const f64,
    len: usize,
    dim_a: usize,
    dim_b: usize,
    out: *mut *mut QdDensityMatrix,
) -> QdStatus {
    guard(|| {
        non_null(re_im, "re_im")?;
        let d = dim_a * dim_b;
        if len != 2 * d * d {
            return Err(fail(
                QdStatus::InvalidArgument,
                format!("expected {} doubles for a {d}x{d} matrix, got {len}", 2 * d * d),
            ));
        }
        let raw = std::slice::from_raw_parts(re_im, len);
        let entries = raw.chunks_exact(2).map(|c| C64::new(c[0], c[1])).collect();
        let mat = lib(ComplexMatrix::new(d, d, entries))?;
        let inner = lib(DensityMatrix::new(mat, dim_a, dim_b))?;
        emit(out, QdDensityMatrix { inner })
    })
}

/// Matrix dimension (3 or 9), or 0 for a null handle.
///
/// # Safety
/// `rho` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qd_density_matrix_dim(rho: *const QdDensityMatrix) -> usize {
    rho.as_ref().map_or(0, |h| h.inner.dim())
}

/// Copies the entries as interleaved `(re, im)` pairs, row-major.
///
/// # Safety
/// `rho` must be a live handle; `out` must have room for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn qd_density_matrix_entries(
    rho: *const QdDensityMatrix,
    out: *mut f64,
    len: usize,
) -> QdStatus {
    guard(|| {
        let h = handle(rho, "rho")?;
        non_null(out, "out")?;
        let entries = h.inner.matrix().as_slice();
        if len < 2 * entries.len() {
            return Err(fail(
                QdStatus::InvalidArgument,
                format!("buffer holds {len} doubles, need {}", 2 * entries.len()),
            ));
        }
        let dst = std::slice::from_raw_parts_mut(out, 2 * entries.len());
        for (pair, z) in dst.chunks_exact_mut(2).zip(entries) {
            pair[0] = z.re;
            pair[1] = z.im;
        }
        Ok(())
    })
}

/// # Safety
/// `rho` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qd_density_matrix_free(rho: *mut QdDensityMatrix) {
    if !rho.is_null() {
        drop(Box::from_raw(rho));
    }
}

/// Largest deviation of `sum E^dagger E` from the identity.
///
/// # Safety
/// `params` must be readable and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qd_kraus_completeness_deviation(params: *const QdChannelParams, out: *mut f64) -> QdStatus {
    guard(|| {
        let p = lib(channel_params(handle(params, "params")?))?;
        non_null(out, "out")?;
        *out = kraus_set(&p).completeness_deviation();
        Ok(())
    })
}

/// Local channels on both qutrits of a two-qutrit state.
///
/// # Safety
/// Pointers must be valid; `out` receives a new handle.
#[no_mangle]
pub unsafe extern "C" fn qd_apply_two_sided(
    rho: *const QdDensityMatrix,
    params_a: *const QdChannelParams,
    params_b: *const QdChannelParams,
    out: *mut *mut QdDensityMatrix,
) -> QdStatus {
    guard(|| {
        let h = handle(rho, "rho")?;
        let a = lib(channel_params(handle(params_a, "params_a")?))?;
        let b = lib(channel_params(handle(params_b, "params_b")?))?;
        let inner = lib(apply_two_sided(&h.inner, &a, &b))?;
        emit(out, QdDensityMatrix { inner })
    })
}

/// `rho_alpha(t)` with `p1 = p2 = 1 - exp(-2t)` on both qutrits.
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn qd_evolve(
    alpha: f64,
    r: f64,
    variant: QdVariant,
    t: f64,
    out: *mut *mut QdDensityMatrix,
) -> QdStatus {
    guard(|| {
        let inner = lib(evolve_at(alpha, r, variant.into(), t))?;
        emit(out, QdDensityMatrix { inner })
    })
}

/// # Safety
/// `rho` must be a live two-qutrit handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qd_witnesses(rho: *const QdDensityMatrix, out: *mut QdWitnessReport) -> QdStatus {
    guard(|| {
        let h = handle(rho, "rho")?;
        non_null(out, "out")?;
        *out = lib(witness_report(&h.inner))?.into();
        Ok(())
    })
}

/// # Safety
/// `config` must be readable; `out` receives a new handle.
#[no_mangle]
pub unsafe extern "C" fn qd_scan(config: *const QdScanConfig, out: *mut *mut QdTimeSeries) -> QdStatus {
    guard(|| {
        let c = handle(config, "config")?;
        let mut cfg = ScanConfig::new(c.alpha, c.r, c.variant.into(), c.t_start, c.t_end, c.steps);
        if c.refine_tol != 0.0 {
            cfg = cfg.with_refine_tol(c.refine_tol);
        }
        let series = lib(scan(&cfg))?;
        emit(out, QdTimeSeries { series, config: cfg })
    })
}

/// Number of points, or 0 for a null handle.
///
/// # Safety
/// `series` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qd_time_series_len(series: *const QdTimeSeries) -> usize {
    series.as_ref().map_or(0, |s| s.series.len())
}

/// # Safety
/// `series` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qd_time_series_get(
    series: *const QdTimeSeries,
    index: usize,
    out: *mut QdTimePoint,
) -> QdStatus {
    guard(|| {
        let s = handle(series, "series")?;
        non_null(out, "out")?;
        let pt = s.series.points.get(index).ok_or_else(|| {
            fail(
                QdStatus::InvalidArgument,
                format!("index {index} out of range for {} points", s.series.len()),
            )
        })?;
        *out = QdTimePoint {
            t: pt.t,
            p: pt.p,
            report: pt.report.into(),
        };
        Ok(())
    })
}

/// # Safety
/// `series` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qd_time_series_free(series: *mut QdTimeSeries) {
    if !series.is_null() {
        drop(Box::from_raw(series));
    }
}

/// DSD/DSB transitions and realignment windows of a scan.
///
/// # Safety
/// `series` must be a live handle; `out` receives a new handle.
#[no_mangle]
pub unsafe extern "C" fn qd_detect_events(series: *const QdTimeSeries, out: *mut *mut QdEventList) -> QdStatus {
    guard(|| {
        let s = handle(series, "series")?;
        let events = lib(detect_events(&s.series, &s.config))?;
        emit(out, QdEventList { events })
    })
}

/// # Safety
/// `events` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qd_event_list_len(events: *const QdEventList) -> usize {
    events.as_ref().map_or(0, |e| e.events.len())
}

/// # Safety
/// `events` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qd_event_list_get(
    events: *const QdEventList,
    index: usize,
    out: *mut QdEventWindow,
) -> QdStatus {
    guard(|| {
        let e = handle(events, "events")?;
        non_null(out, "out")?;
        let ev = e.events.get(index).ok_or_else(|| {
            fail(
                QdStatus::InvalidArgument,
                format!("index {index} out of range for {} events", e.events.len()),
            )
        })?;
        *out = ev.into();
        Ok(())
    })
}

/// # Safety
/// `events` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qd_event_list_free(events: *mut QdEventList) {
    if !events.is_null() {
        drop(Box::from_raw(events));
    }
}
