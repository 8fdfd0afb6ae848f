//! C ABI over `qmed-core`.
//!
//! States are opaque [`QmedState`] handles owned by the caller and released
//! with [`qmed_state_free`]. Every fallible call returns a [`QmedStatus`];
//! on failure [`qmed_last_error_message`] describes the most recent error
//! on the calling thread. Strings returned by the library are released with
//! [`qmed_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use qmed::dynamics::{evolve, initial_state, EvolutionParams};
use qmed::measures::{discord_on_qubit, measure_state, mutual_information, negativity, DiscordOptions, MeasureOptions};
use qmed::state_engine::{marginal, state_from_json, state_to_json, Bipartition, DensityMatrix};
use qmed::Error;

/// Opaque density-matrix handle.
pub struct QmedState(DensityMatrix);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QmedStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ParseError = 3,
    NumericalError = 4,
    Panic = 5,
}

/// Correlations of a three-qubit state; entropic entries in bits.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct QmedReport {
    pub time: f64,
    pub neg_a_b: f64,
    pub neg_a_mb: f64,
    pub neg_am_b: f64,
    pub discord_ab_given_m: f64,
    pub mutual_info_ab_m: f64,
    pub ree_a_b: f64,
    pub s_m: f64,
    pub s_ab: f64,
    pub s_abm: f64,
    /// 1 if the REE optimizer met its stopping rule.
    pub ree_converged: i32,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> QmedStatus {
    match e {
        Error::Json(_) | Error::Format(_) => QmedStatus::ParseError,
        Error::UnknownLabel(_)
        | Error::UnknownName(_)
        | Error::InvalidBipartition(_)
        | Error::InvalidParameter(_)
        | Error::InvalidSequence(_)
        | Error::DimensionMismatch { .. } => QmedStatus::InvalidArgument,
        _ => QmedStatus::NumericalError,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (QmedStatus, String)>) -> QmedStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QmedStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            QmedStatus::Panic
        }
    }
}

trait IntoFfi<T> {
    fn ffi(self) -> Result<T, (QmedStatus, String)>;
}

impl<T> IntoFfi<T> for qmed::Result<T> {
    fn ffi(self) -> Result<T, (QmedStatus, String)> {
        self.map_err(|e| (status_of(&e), e.to_string()))
    }
}

fn null(what: &str) -> (QmedStatus, String) {
    (QmedStatus::NullPointer, format!("{what} is null"))
}

unsafe fn state_ref<'a>(p: *const QmedState) -> Result<&'a DensityMatrix, (QmedStatus, String)> {
    p.as_ref().map(|s| &s.0).ok_or_else(|| null("state"))
}

unsafe fn c_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (QmedStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (QmedStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), (QmedStatus, String)> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

/// Restricts `rho` to the qubits named in `cut` and parses the cut there.
fn restrict(rho: &DensityMatrix, cut: &str) -> Result<(DensityMatrix, Bipartition), (QmedStatus, String)> {
    let named: Vec<String> = cut.chars().filter(|&c| c != ':').map(String::from).collect();
    let keep: Vec<&str> = rho
        .labels()
        .iter()
        .filter(|l| named.contains(l))
        .map(String::as_str)
        .collect();
    let sub = if keep.len() == rho.num_qubits() { rho.clone() } else { marginal(rho, &keep).ffi()? };
    let part = Bipartition::parse(sub.labels(), cut).ffi()?;
    Ok((sub, part))
}

fn boxed(rho: DensityMatrix) -> *mut QmedState {
    Box::into_raw(Box::new(QmedState(rho)))
}

/// Message of the last failed call on this thread. Valid until the next
/// failing call on the same thread; never null.
#[no_mangle]
pub extern "C" fn qmed_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// The initial probe–mediator state on `A, B, M`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage.
#[no_mangle]
pub unsafe extern "C" fn qmed_state_initial(out: *mut *mut QmedState) -> QmedStatus {
    guard(|| write_out(out, boxed(initial_state())))
}

/// Parses the JSON state format (`labels`, `dim`, `re`, `im`).
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qmed_state_from_json(json: *const c_char, out: *mut *mut QmedState) -> QmedStatus {
    guard(|| {
        let text = c_str(json, "json")?;
        let rho = state_from_json(text).ffi()?;
        write_out(out, boxed(rho))
    })
}

/// Serializes a state; release the string with [`qmed_string_free`].
///
/// # Safety
/// `state` must come from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qmed_state_to_json(state: *const QmedState, out: *mut *mut c_char) -> QmedStatus {
    guard(|| {
        let rho = state_ref(state)?;
        let c = CString::new(state_to_json(rho)).map_err(|e| (QmedStatus::NumericalError, e.to_string()))?;
        write_out(out, c.into_raw())
    })
}

/// Number of qubits of a state.
///
/// # Safety
/// `state` must come from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qmed_state_num_qubits(state: *const QmedState, out: *mut usize) -> QmedStatus {
    guard(|| write_out(out, state_ref(state)?.num_qubits()))
}

/// # Safety
/// `s` must be null or a string returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn qmed_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `state` must be null or a handle from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn qmed_state_free(state: *mut QmedState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// Negativity across a cut written as `"A:MB"`; qubits left out of the
/// cut are traced out first.
///
/// # Safety
/// Pointers must be valid; `cut` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn qmed_negativity(state: *const QmedState, cut: *const c_char, out: *mut f64) -> QmedStatus {
    guard(|| {
        let (rho, part) = restrict(state_ref(state)?, c_str(cut, "cut")?)?;
        write_out(out, negativity(&rho, &part).ffi()?)
    })
}

/// Mutual information in bits across a cut written as `"AB:M"`; qubits
/// left out of the cut are traced out first.
///
/// # Safety
/// Pointers must be valid; `cut` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn qmed_mutual_information(
    state: *const QmedState,
    cut: *const c_char,
    out: *mut f64,
) -> QmedStatus {
    guard(|| {
        let (rho, part) = restrict(state_ref(state)?, c_str(cut, "cut")?)?;
        write_out(out, mutual_information(&rho, &part).ffi()?)
    })
}

/// Discord in bits with projective measurements on qubit `measured`.
///
/// # Safety
/// Pointers must be valid; `measured` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn qmed_discord(state: *const QmedState, measured: *const c_char, out: *mut f64) -> QmedStatus {
    guard(|| {
        let rho = state_ref(state)?;
        let r = discord_on_qubit(rho, c_str(measured, "measured")?, &DiscordOptions::default()).ffi()?;
        write_out(out, r.bits)
    })
}

/// Evolves a state on `A, B, M` for time `t` under coupling `omega`; the
/// input handle is left untouched.
///
/// # Safety
/// `state` must come from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qmed_evolve(
    state: *const QmedState,
    omega: f64,
    t: f64,
    out: *mut *mut QmedState,
) -> QmedStatus {
    guard(|| {
        let rho = state_ref(state)?;
        let p = EvolutionParams::new(omega, t).ffi()?;
        let abm = rho.permuted(&["A", "B", "M"]).ffi()?;
        write_out(out, boxed(evolve(&abm, &p).ffi()?))
    })
}

/// Full correlation report of a state on `A, B, M`. `seed` drives the REE
/// multi-start.
///
/// # Safety
/// `state` must come from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qmed_measure(state: *const QmedState, time: f64, seed: u64, out: *mut QmedReport) -> QmedStatus {
    guard(|| {
        let rho = state_ref(state)?;
        let mut opts = MeasureOptions::default();
        opts.ree.seed = seed;
        let m = measure_state(rho, time, &opts).ffi()?;
        let r = m.report;
        write_out(
            out,
            QmedReport {
                time: r.time,
                neg_a_b: r.neg_A_B,
                neg_a_mb: r.neg_A_MB,
                neg_am_b: r.neg_AM_B,
                discord_ab_given_m: r.discord_AB_given_M,
                mutual_info_ab_m: r.mutual_info_AB_M,
                ree_a_b: r.ree_A_B,
                s_m: r.S_M,
                s_ab: r.S_AB,
                s_abm: r.S_ABM,
                ree_converged: m.ree_converged as i32,
            },
        )
    })
}
