//! C ABI for `lindblad-lab`.
//!
//! Models and trajectories are opaque handles created by `lindblad_*_new` /
//! `lindblad_*_from_json` style constructors and released with the matching
//! `*_free`. Every fallible function returns a [`LindbladStatus`]; on failure
//! `lindblad_last_error_message` describes the error for the calling thread.
//!
//! Complex matrices cross the boundary as row-major arrays of interleaved
//! `(re, im)` doubles, `2 * dim * dim` values per matrix.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use lindblad_lab::bounds::{cooling_rate, hilbert_rate, liouville_rate};
use lindblad_lab::config::{parse_config, ConfigError};
use lindblad_lab::dynamics::{integrate, TimeGrid, Trajectory};
use lindblad_lab::model::{classify_channel, validate_density, ChannelKind};
use lindblad_lab::{Error, LindbladModel, Matrix, C64};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LindbladStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    SchemaError = 4,
    ValidationError = 5,
    StepRejected = 6,
    OutOfRange = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LindbladChannelKind {
    Unitary = 0,
    Dephasing = 1,
    General = 2,
}

/// Observables recorded at one sample time.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LindbladObservables {
    pub t: f64,
    pub purity: f64,
    pub purity_deviation: f64,
    pub renyi2: f64,
    pub vn_entropy: f64,
}

/// Opaque model handle.
pub struct LindbladModelHandle(LindbladModel);

/// Opaque trajectory handle.
pub struct LindbladTrajectoryHandle(Trajectory);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: LindbladStatus, msg: impl Into<String>) -> LindbladStatus {
    set_error(msg.into());
    status
}

fn status_of(e: &Error) -> LindbladStatus {
    match e {
        Error::StepRejected { .. } => LindbladStatus::StepRejected,
        Error::TimeOutOfRange { .. } => LindbladStatus::OutOfRange,
        _ => LindbladStatus::ValidationError,
    }
}

fn from_error(e: Error) -> LindbladStatus {
    fail(status_of(&e), e.to_string())
}

/// Runs `f`, turning panics into `LindbladStatus::Panic`.
fn guarded(f: impl FnOnce() -> LindbladStatus) -> LindbladStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => fail(LindbladStatus::Panic, "internal panic"),
    }
}

/// Message for the last failed call on this thread, or NULL. The pointer stays
/// valid until the next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn lindblad_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `data` must point to `count * 2 * dim * dim` readable doubles.
unsafe fn read_matrices(
    data: *const f64,
    count: usize,
    dim: usize,
) -> Result<Vec<Matrix>, LindbladStatus> {
    if count == 0 {
        return Ok(Vec::new());
    }
    if data.is_null() {
        return Err(fail(LindbladStatus::NullPointer, "matrix data is NULL"));
    }
    let per = 2 * dim * dim;
    let raw = std::slice::from_raw_parts(data, count * per);
    raw.chunks_exact(per)
        .map(|chunk| {
            let entries = chunk
                .chunks_exact(2)
                .map(|p| C64::new(p[0], p[1]))
                .collect();
            Matrix::from_vec(dim, dim, entries).map_err(from_error)
        })
        .collect()
}

/// Builds a model from a JSON configuration (the `lindblad-lab` config
/// format); only the model part is kept.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lindblad_model_from_json(
    json: *const c_char,
    out: *mut *mut LindbladModelHandle,
) -> LindbladStatus {
    guarded(|| {
        if json.is_null() || out.is_null() {
            return fail(LindbladStatus::NullPointer, "json or out is NULL");
        }
        let Ok(text) = CStr::from_ptr(json).to_str() else {
            return fail(
                LindbladStatus::InvalidUtf8,
                "configuration is not valid UTF-8",
            );
        };
        match parse_config(text) {
            Ok(cfg) => {
                *out = Box::into_raw(Box::new(LindbladModelHandle(cfg.model)));
                LindbladStatus::Ok
            }
            Err(e) => {
                let status = match &e {
                    ConfigError::Parse { .. } => LindbladStatus::ParseError,
                    ConfigError::Schema { .. } => LindbladStatus::SchemaError,
                    ConfigError::Validation(inner) => status_of(inner),
                };
                fail(status, e.to_string())
            }
        }
    })
}

/// Builds a time-independent model from `n_hamiltonians` Hermitian matrices
/// (summed) and `n_lindblad` Lindblad operators.
///
/// # Safety
/// `hamiltonians` and `lindblad_ops` must hold the stated number of matrices
/// (each may be NULL when its count is zero); `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn lindblad_model_new(
    dim: usize,
    hamiltonians: *const f64,
    n_hamiltonians: usize,
    lindblad_ops: *const f64,
    n_lindblad: usize,
    out: *mut *mut LindbladModelHandle,
) -> LindbladStatus {
    guarded(|| {
        if out.is_null() {
            return fail(LindbladStatus::NullPointer, "out is NULL");
        }
        if dim == 0 {
            return fail(LindbladStatus::ValidationError, "dim must be at least 1");
        }
        let hs = match read_matrices(hamiltonians, n_hamiltonians, dim) {
            Ok(m) => m,
            Err(s) => return s,
        };
        let ops = match read_matrices(lindblad_ops, n_lindblad, dim) {
            Ok(m) => m,
            Err(s) => return s,
        };
        match LindbladModel::time_independent(dim, hs, ops) {
            Ok(model) => {
                *out = Box::into_raw(Box::new(LindbladModelHandle(model)));
                LindbladStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `model` must be NULL or a handle from this library that was not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lindblad_model_free(model: *mut LindbladModelHandle) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// # Safety
/// `model` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lindblad_model_dim(
    model: *const LindbladModelHandle,
    out: *mut usize,
) -> LindbladStatus {
    guarded(|| {
        if model.is_null() || out.is_null() {
            return fail(LindbladStatus::NullPointer, "model or out is NULL");
        }
        *out = (*model).0.dim();
        LindbladStatus::Ok
    })
}

/// # Safety
/// `model` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lindblad_model_classify(
    model: *const LindbladModelHandle,
    out: *mut LindbladChannelKind,
) -> LindbladStatus {
    guarded(|| {
        if model.is_null() || out.is_null() {
            return fail(LindbladStatus::NullPointer, "model or out is NULL");
        }
        *out = match classify_channel(&(*model).0).kind {
            ChannelKind::Unitary => LindbladChannelKind::Unitary,
            ChannelKind::Dephasing => LindbladChannelKind::Dephasing,
            ChannelKind::General => LindbladChannelKind::General,
        };
        LindbladStatus::Ok
    })
}

unsafe fn rate_with(
    model: *const LindbladModelHandle,
    t: f64,
    out: *mut f64,
    f: fn(&LindbladModel, f64) -> lindblad_lab::Result<f64>,
) -> LindbladStatus {
    guarded(|| {
        if model.is_null() || out.is_null() {
            return fail(LindbladStatus::NullPointer, "model or out is NULL");
        }
        match f(&(*model).0, t) {
            Ok(r) => {
                *out = r;
                LindbladStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// `4 sum_k ||A_k||_F^2` at time `t`.
///
/// # Safety
/// `model` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lindblad_hilbert_rate(
    model: *const LindbladModelHandle,
    t: f64,
    out: *mut f64,
) -> LindbladStatus {
    rate_with(model, t, out, hilbert_rate)
}

/// Spectral norm of the skew-Hermitian part of the generator at time `t`.
///
/// # Safety
/// `model` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lindblad_liouville_rate(
    model: *const LindbladModelHandle,
    t: f64,
    out: *mut f64,
) -> LindbladStatus {
    rate_with(model, t, out, liouville_rate)
}

/// Largest signed eigenvalue of `-i(H_r - H_r^dagger)` at time `t`.
///
/// # Safety
/// `model` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lindblad_cooling_rate(
    model: *const LindbladModelHandle,
    t: f64,
    out: *mut f64,
) -> LindbladStatus {
    rate_with(model, t, out, cooling_rate)
}

/// Integrates from `rho0` (one `dim x dim` matrix) with fixed-step RK4.
///
/// # Safety
/// `model` must be a live handle, `rho0` must hold `2 * dim * dim` doubles and
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn lindblad_integrate(
    model: *const LindbladModelHandle,
    rho0: *const f64,
    t_start: f64,
    t_end: f64,
    dt: f64,
    sample_stride: usize,
    out: *mut *mut LindbladTrajectoryHandle,
) -> LindbladStatus {
    guarded(|| {
        if model.is_null() || rho0.is_null() || out.is_null() {
            return fail(LindbladStatus::NullPointer, "model, rho0 or out is NULL");
        }
        let model = &(*model).0;
        let rho = match read_matrices(rho0, 1, model.dim()) {
            Ok(mut m) => m.remove(0),
            Err(s) => return s,
        };
        let result = validate_density(&rho)
            .and_then(|rho| Ok((rho, TimeGrid::new(t_start, t_end, dt, sample_stride)?)))
            .and_then(|(rho, grid)| integrate(model, &rho, &grid));
        match result {
            Ok(tr) => {
                *out = Box::into_raw(Box::new(LindbladTrajectoryHandle(tr)));
                LindbladStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `trajectory` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lindblad_trajectory_len(
    trajectory: *const LindbladTrajectoryHandle,
    out: *mut usize,
) -> LindbladStatus {
    guarded(|| {
        if trajectory.is_null() || out.is_null() {
            return fail(LindbladStatus::NullPointer, "trajectory or out is NULL");
        }
        *out = (*trajectory).0.times.len();
        LindbladStatus::Ok
    })
}

/// # Safety
/// `trajectory` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lindblad_trajectory_observables(
    trajectory: *const LindbladTrajectoryHandle,
    index: usize,
    out: *mut LindbladObservables,
) -> LindbladStatus {
    guarded(|| {
        if trajectory.is_null() || out.is_null() {
            return fail(LindbladStatus::NullPointer, "trajectory or out is NULL");
        }
        let tr = &(*trajectory).0;
        let Some(o) = tr.observables.get(index) else {
            return fail(
                LindbladStatus::OutOfRange,
                format!("sample {index} out of range (len {})", tr.times.len()),
            );
        };
        *out = LindbladObservables {
            t: tr.times[index],
            purity: o.purity,
            purity_deviation: o.purity_deviation,
            renyi2: o.renyi2,
            vn_entropy: o.vn_entropy,
        };
        LindbladStatus::Ok
    })
}

/// Copies sample `index`'s density matrix into `out` (`2 * dim * dim` doubles).
///
/// # Safety
/// `trajectory` must be a live handle and `out` must have room for the matrix.
#[no_mangle]
pub unsafe extern "C" fn lindblad_trajectory_state(
    trajectory: *const LindbladTrajectoryHandle,
    index: usize,
    out: *mut f64,
) -> LindbladStatus {
    guarded(|| {
        if trajectory.is_null() || out.is_null() {
            return fail(LindbladStatus::NullPointer, "trajectory or out is NULL");
        }
        let tr = &(*trajectory).0;
        let Some(state) = tr.states.get(index) else {
            return fail(
                LindbladStatus::OutOfRange,
                format!("sample {index} out of range (len {})", tr.times.len()),
            );
        };
        let entries = state.matrix().as_slice();
        let dst = std::slice::from_raw_parts_mut(out, 2 * entries.len());
        for (pair, z) in dst.chunks_exact_mut(2).zip(entries) {
            pair[0] = z.re;
            pair[1] = z.im;
        }
        LindbladStatus::Ok
    })
}

/// # Safety
/// `trajectory` must be NULL or a handle from this library that was not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lindblad_trajectory_free(trajectory: *mut LindbladTrajectoryHandle) {
    if !trajectory.is_null() {
        drop(Box::from_raw(trajectory));
    }
}
