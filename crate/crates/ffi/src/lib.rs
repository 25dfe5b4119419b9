//! C ABI over `linkgrasp`.
//!
//! Handles (`LgMechanism`, `LgTrajectory`) are opaque and owned by the
//! caller once returned; release them with the matching `_free` function.
//! Every function returns an [`LgStatus`]; on failure
//! [`lg_last_error_message`] describes the error for the calling thread.
//! Results are written through out-pointers only on success.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use linkgrasp::analysis::{orientation_drift, straightness};
use linkgrasp::contact::{
    contact_forces_closed, contact_forces_matrix, Closure, SegmentedFingerParams,
};
use linkgrasp::grasp::{
    max_grasp_mass, max_mass_oracle, max_offset_d, stable_pinch, GraspScenario,
};
use linkgrasp::linkage::{mobility_check, sweep, Mechanism, Trajectory};
use linkgrasp::mechanisms::{
    build_double_parallelogram, build_peaucellier, build_semi_peaucellier, build_sp_diff_finger,
    component_count, inversion_product, ParallelogramParams, PeaucellierParams,
    SemiPeaucellierParams,
};
use linkgrasp::{AnalysisError, ContactError, GraspError, LinkageError};

/// Result code of every entry point.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// Malformed mechanism (unknown id, bad length, ...).
    Definition = 3,
    NoConvergence = 4,
    SingularJacobian = 5,
    DegenerateFit = 6,
    Infeasible = 7,
    Unbounded = 8,
    /// Parameter outside the model's domain.
    Domain = 9,
    /// Mechanism JSON could not be parsed.
    Parse = 10,
    /// A Rust panic was caught at the boundary.
    Panic = 99,
}

/// Opaque mechanism handle.
pub struct LgMechanism(Mechanism);

/// Opaque swept trajectory.
pub struct LgTrajectory(Trajectory);

/// Total-least-squares line through a node path.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct LgLineFit {
    pub centroid_x: f64,
    pub centroid_y: f64,
    pub direction_x: f64,
    pub direction_y: f64,
    pub max_deviation: f64,
    pub rms_deviation: f64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LgClosure {
    ForceClosed = 0,
    Marginal = 1,
    NotClosed = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct LgFingerParams {
    pub k1: f64,
    pub k2: f64,
    pub l1: f64,
    pub h: f64,
    pub theta2: f64,
    pub mu: f64,
    pub ta: f64,
    pub t2: f64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LgContactForces {
    pub f1: f64,
    pub f2: f64,
    pub closure: LgClosure,
}

struct Failure(LgStatus, String);

type Outcome = Result<(), Failure>;

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guard(f: impl FnOnce() -> Outcome) -> LgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            LgStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_last_error(&message);
            status
        }
        Err(payload) => {
            let what = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(&format!("panic: {what}"));
            LgStatus::Panic
        }
    }
}

impl From<LinkageError> for Failure {
    fn from(e: LinkageError) -> Self {
        let status = match e {
            LinkageError::Definition(_) => LgStatus::Definition,
            LinkageError::NoConvergence { .. } => LgStatus::NoConvergence,
            LinkageError::SingularJacobian { .. } => LgStatus::SingularJacobian,
            LinkageError::Parse(_) => LgStatus::Parse,
        };
        Failure(status, e.to_string())
    }
}

impl From<AnalysisError> for Failure {
    fn from(e: AnalysisError) -> Self {
        let status = match e {
            AnalysisError::DegenerateFit(_) => LgStatus::DegenerateFit,
            _ => LgStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

impl From<GraspError> for Failure {
    fn from(e: GraspError) -> Self {
        let status = match e {
            GraspError::Infeasible => LgStatus::Infeasible,
            GraspError::Unbounded => LgStatus::Unbounded,
            GraspError::Domain(_) => LgStatus::Domain,
            GraspError::Usage(_) => LgStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

impl From<ContactError> for Failure {
    fn from(e: ContactError) -> Self {
        Failure(LgStatus::Domain, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(LgStatus::NullPointer, format!("{what} is null"))
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure(LgStatus::InvalidArgument, message.into())
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Outcome {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn c_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| invalid(format!("{what} is not valid UTF-8")))
}

unsafe fn emit_mechanism(m: Mechanism, out: *mut *mut LgMechanism) -> Outcome {
    if out.is_null() {
        return Err(null("out"));
    }
    out.write(Box::into_raw(Box::new(LgMechanism(m))));
    Ok(())
}

/// Library version, a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn lg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, empty after a success.
/// Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn lg_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses a mechanism JSON document.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lg_mechanism_from_json(
    json: *const c_char,
    out: *mut *mut LgMechanism,
) -> LgStatus {
    guard(|| {
        let text = c_str(json, "json")?;
        emit_mechanism(Mechanism::from_json(text)?, out)
    })
}

/// Classical Peaucellier inversor.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lg_mechanism_peaucellier(
    long_link: f64,
    rhombus_side: f64,
    crank_radius: f64,
    out: *mut *mut LgMechanism,
) -> LgStatus {
    guard(|| {
        let p = PeaucellierParams {
            long_link,
            rhombus_side,
            crank_radius,
        };
        emit_mechanism(build_peaucellier(&p)?, out)
    })
}

/// Semi-Peaucellier linkage.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lg_mechanism_semi_peaucellier(
    long_link: f64,
    rhombus_side: f64,
    crank_radius: f64,
    bar_overhang: f64,
    out: *mut *mut LgMechanism,
) -> LgStatus {
    guard(|| {
        let p = SemiPeaucellierParams {
            long_link,
            rhombus_side,
            crank_radius,
            bar_overhang,
        };
        emit_mechanism(build_semi_peaucellier(&p)?, out)
    })
}

/// One (`stages = 1`) or two chained parallelograms.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lg_mechanism_double_parallelogram(
    link_length: f64,
    base_span: f64,
    stages: u8,
    out: *mut *mut LgMechanism,
) -> LgStatus {
    guard(|| {
        let p = ParallelogramParams {
            link_length,
            base_span,
            stages,
        };
        emit_mechanism(build_double_parallelogram(&p)?, out)
    })
}

/// Semi-Peaucellier linkage composed with a two-stage parallelogram. The
/// fingertip node is `fingertip`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lg_mechanism_finger(
    long_link: f64,
    rhombus_side: f64,
    crank_radius: f64,
    bar_overhang: f64,
    link_length: f64,
    base_span: f64,
    out: *mut *mut LgMechanism,
) -> LgStatus {
    guard(|| {
        let sp = SemiPeaucellierParams {
            long_link,
            rhombus_side,
            crank_radius,
            bar_overhang,
        };
        let dpm = ParallelogramParams {
            link_length,
            base_span,
            stages: 2,
        };
        emit_mechanism(build_sp_diff_finger(&sp, &dpm)?.mechanism, out)
    })
}

/// Serializes to JSON. Free the string with [`lg_string_free`].
///
/// # Safety
/// `mechanism` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lg_mechanism_to_json(
    mechanism: *const LgMechanism,
    out: *mut *mut c_char,
) -> LgStatus {
    guard(|| {
        let m = deref(mechanism, "mechanism")?;
        let text = CString::new(m.0.to_json()).map_err(|_| invalid("document holds a NUL byte"))?;
        write(out, text.into_raw(), "out")
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn lg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Releases a mechanism. Null is ignored.
///
/// # Safety
/// `mechanism` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn lg_mechanism_free(mechanism: *mut LgMechanism) {
    if !mechanism.is_null() {
        drop(Box::from_raw(mechanism));
    }
}

/// `2 × free nodes − equations`; zero for a well-constrained mechanism.
///
/// # Safety
/// `mechanism` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lg_mechanism_mobility(
    mechanism: *const LgMechanism,
    out: *mut i64,
) -> LgStatus {
    guard(|| {
        write(
            out,
            mobility_check(&deref(mechanism, "mechanism")?.0),
            "out",
        )
    })
}

/// Moving rigid bodies, counting declared bodies once.
///
/// # Safety
/// `mechanism` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lg_mechanism_component_count(
    mechanism: *const LgMechanism,
    out: *mut usize,
) -> LgStatus {
    guard(|| {
        write(
            out,
            component_count(&deref(mechanism, "mechanism")?.0),
            "out",
        )
    })
}

/// Sweeps the driver over `steps + 1` samples from `from` to `to`.
///
/// # Safety
/// `mechanism` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lg_sweep(
    mechanism: *const LgMechanism,
    from: f64,
    to: f64,
    steps: usize,
    out: *mut *mut LgTrajectory,
) -> LgStatus {
    guard(|| {
        let m = deref(mechanism, "mechanism")?;
        let t = sweep(&m.0, from, to, steps)?;
        write(out, Box::into_raw(Box::new(LgTrajectory(t))), "out")
    })
}

/// Releases a trajectory. Null is ignored.
///
/// # Safety
/// `trajectory` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn lg_trajectory_free(trajectory: *mut LgTrajectory) {
    if !trajectory.is_null() {
        drop(Box::from_raw(trajectory));
    }
}

/// # Safety
/// `trajectory` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lg_trajectory_len(
    trajectory: *const LgTrajectory,
    out: *mut usize,
) -> LgStatus {
    guard(|| write(out, deref(trajectory, "trajectory")?.0.len(), "out"))
}

fn sample(t: &LgTrajectory, index: usize) -> Result<&linkgrasp::linkage::Configuration, Failure> {
    t.0.samples.get(index).ok_or_else(|| {
        invalid(format!(
            "sample {index} out of range ({} samples)",
            t.0.len()
        ))
    })
}

/// Driver input of sample `index`.
///
/// # Safety
/// `trajectory` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lg_trajectory_input(
    trajectory: *const LgTrajectory,
    index: usize,
    out: *mut f64,
) -> LgStatus {
    guard(|| {
        write(
            out,
            sample(deref(trajectory, "trajectory")?, index)?.input,
            "out",
        )
    })
}

/// Position of `node` at sample `index`.
///
/// # Safety
/// `trajectory` must be a live handle, `node` NUL-terminated, and both out
/// pointers writable.
#[no_mangle]
pub unsafe extern "C" fn lg_trajectory_position(
    trajectory: *const LgTrajectory,
    index: usize,
    node: *const c_char,
    out_x: *mut f64,
    out_y: *mut f64,
) -> LgStatus {
    guard(|| {
        let id = c_str(node, "node")?;
        let s = sample(deref(trajectory, "trajectory")?, index)?;
        let p = s
            .position(id)
            .ok_or_else(|| invalid(format!("no node `{id}`")))?;
        if out_x.is_null() || out_y.is_null() {
            return Err(null("out"));
        }
        write(out_x, p.x, "out_x")?;
        write(out_y, p.y, "out_y")
    })
}

/// Line fit of `node`'s path.
///
/// # Safety
/// `trajectory` must be a live handle, `node` NUL-terminated, `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn lg_trajectory_straightness(
    trajectory: *const LgTrajectory,
    node: *const c_char,
    out: *mut LgLineFit,
) -> LgStatus {
    guard(|| {
        let id = c_str(node, "node")?;
        let fit = straightness(&deref(trajectory, "trajectory")?.0, id)?;
        let value = LgLineFit {
            centroid_x: fit.centroid.x,
            centroid_y: fit.centroid.y,
            direction_x: fit.direction.x,
            direction_y: fit.direction.y,
            max_deviation: fit.max_deviation,
            rms_deviation: fit.rms_deviation,
        };
        write(out, value, "out")
    })
}

/// Largest rotation of segment `a → b` from its first-sample angle.
///
/// # Safety
/// `trajectory` must be a live handle, `a` and `b` NUL-terminated, `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn lg_trajectory_orientation_drift(
    trajectory: *const LgTrajectory,
    a: *const c_char,
    b: *const c_char,
    out: *mut f64,
) -> LgStatus {
    guard(|| {
        let (a, b) = (c_str(a, "a")?, c_str(b, "b")?);
        let drift = orientation_drift(&deref(trajectory, "trajectory")?.0, (a, b))?;
        write(out, drift, "out")
    })
}

/// `|EB|·|ED|` at sample `index`; needs nodes `E`, `B` and `D`.
///
/// # Safety
/// `trajectory` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lg_trajectory_inversion_product(
    trajectory: *const LgTrajectory,
    index: usize,
    out: *mut f64,
) -> LgStatus {
    guard(|| {
        let s = sample(deref(trajectory, "trajectory")?, index)?;
        write(out, inversion_product(s)?, "out")
    })
}

fn grasp_inputs(mu: f64, fn_: f64, d: f64, alpha: f64, max_t: f64, g: f64) -> Outcome {
    let all = [mu, fn_, d, alpha, max_t, g];
    if all.iter().any(|v| !v.is_finite()) {
        return Err(Failure(
            LgStatus::Domain,
            "non-finite grasp parameter".into(),
        ));
    }
    if mu < 0.0 || fn_ < 0.0 || d < 0.0 || max_t < 0.0 || !(g > 0.0) {
        return Err(Failure(
            LgStatus::Domain,
            "need mu, Fn, d, maxT >= 0 and g > 0".into(),
        ));
    }
    Ok(())
}

/// Maximum mass (kg) held by friction in a parallel pinch.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lg_max_grasp_mass(
    mu: f64,
    fn_: f64,
    d: f64,
    alpha: f64,
    max_t: f64,
    g: f64,
    out: *mut f64,
) -> LgStatus {
    guard(|| {
        grasp_inputs(mu, fn_, d, alpha, max_t, g)?;
        write(out, max_grasp_mass(mu, fn_, d, alpha, max_t, g), "out")
    })
}

/// Bisection reference for [`lg_max_grasp_mass`].
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lg_max_mass_oracle(
    mu: f64,
    fn_: f64,
    d: f64,
    alpha: f64,
    max_t: f64,
    g: f64,
    out: *mut f64,
) -> LgStatus {
    guard(|| {
        grasp_inputs(mu, fn_, d, alpha, max_t, g)?;
        write(out, max_mass_oracle(mu, fn_, d, alpha, max_t, g), "out")
    })
}

/// Largest contact offset that still holds `weight` newtons. Returns
/// `Infeasible` when friction cannot hold the weight at all and `Unbounded`
/// when the moment arm vanishes.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lg_max_offset_d(
    mu: f64,
    fn_: f64,
    alpha: f64,
    max_t: f64,
    g: f64,
    weight: f64,
    out: *mut f64,
) -> LgStatus {
    guard(|| {
        let s = GraspScenario {
            mu,
            fn_,
            d: 0.0,
            alpha,
            max_t,
            g,
            weight,
        };
        write(out, max_offset_d(&s)?, "out")
    })
}

/// Whether the pinch holds `weight` newtons at offset `d`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lg_stable_pinch(
    mu: f64,
    fn_: f64,
    d: f64,
    alpha: f64,
    max_t: f64,
    g: f64,
    weight: f64,
    out: *mut bool,
) -> LgStatus {
    guard(|| {
        let s = GraspScenario {
            mu,
            fn_,
            d,
            alpha,
            max_t,
            g,
            weight,
        };
        write(out, stable_pinch(&s)?, "out")
    })
}

/// Phalanx contact forces; `use_matrix` selects the explicit matrix route
/// over the closed form.
///
/// # Safety
/// `params` must point to a valid struct; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lg_contact_forces(
    params: *const LgFingerParams,
    use_matrix: bool,
    out: *mut LgContactForces,
) -> LgStatus {
    guard(|| {
        let p = deref(params, "params")?;
        let p = SegmentedFingerParams {
            k1: p.k1,
            k2: p.k2,
            l1: p.l1,
            h: p.h,
            theta2: p.theta2,
            mu: p.mu,
            ta: p.ta,
            t2: p.t2,
        };
        let f = if use_matrix {
            contact_forces_matrix(&p)?
        } else {
            contact_forces_closed(&p)?
        };
        let closure = match f.closure {
            Closure::ForceClosed => LgClosure::ForceClosed,
            Closure::Marginal => LgClosure::Marginal,
            Closure::NotClosed => LgClosure::NotClosed,
        };
        write(
            out,
            LgContactForces {
                f1: f.f1,
                f2: f.f2,
                closure,
            },
            "out",
        )
    })
}
