//! C ABI over the `funcqaoa` core.
//!
//! Every fallible function returns an [`FqStatus`]; on failure the message is
//! kept per thread and read back with [`fq_last_error_message`]. Circuits and
//! states are opaque heap handles released with their `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use funcqaoa::ansatz::{AnsatzConfig, Init, Mixer};
use funcqaoa::certificates::{Candidate, Certificate, PhaseMode};
use funcqaoa::circuits::{emit_circuit, parse_circuit, Circuit};
use funcqaoa::optimizer::{optimize_with, Backend, EvalMode, Evaluator, Strategy};
use funcqaoa::statevec::State;
use funcqaoa::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FqStatus {
    Ok = 0,
    InvalidArgument = 1,
    Precondition = 2,
    Resource = 3,
    Internal = 4,
    NullPointer = 5,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FqCertificate {
    Multiplication = 0,
    Modulo = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FqMixer {
    X = 0,
    Grover = 1,
}

/// Opaque gate list.
pub struct FqCircuit(Circuit);

/// Opaque statevector.
pub struct FqState(State);

/// Outcome of [`fq_factor`].
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct FqFactorResult {
    pub p: u64,
    pub q: u64,
    /// Probability of the most likely correct search state.
    pub probability: f64,
    pub energy: f64,
    pub evaluations: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> FqStatus {
    match e {
        Error::Resource(_) => FqStatus::Resource,
        Error::Invariant(_) => FqStatus::Internal,
        _ => FqStatus::Precondition,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (FqStatus, String)>) -> FqStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            FqStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("panic inside funcqaoa");
            FqStatus::Internal
        }
    }
}

fn core<T>(r: funcqaoa::Result<T>) -> Result<T, (FqStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (FqStatus, String) {
    (FqStatus::NullPointer, format!("`{what}` is null"))
}

unsafe fn text<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, (FqStatus, String)> {
    if ptr.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| (FqStatus::InvalidArgument, format!("`{what}` is not UTF-8")))
}

unsafe fn out<'a, T>(ptr: *mut T, what: &str) -> Result<&'a mut T, (FqStatus, String)> {
    ptr.as_mut().ok_or_else(|| null(what))
}

/// Message of the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn fq_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn fq_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from a function of this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn fq_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a circuit in the text format into `*out_circuit`.
///
/// # Safety
/// `source` must be a NUL-terminated string; `out_circuit` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fq_circuit_parse(source: *const c_char, out_circuit: *mut *mut FqCircuit) -> FqStatus {
    guard(|| {
        let slot = out(out_circuit, "out_circuit")?;
        let c = core(parse_circuit(text(source, "source")?))?;
        *slot = Box::into_raw(Box::new(FqCircuit(c)));
        Ok(())
    })
}

/// # Safety
/// `circuit` must be NULL or a live handle from [`fq_circuit_parse`].
#[no_mangle]
pub unsafe extern "C" fn fq_circuit_free(circuit: *mut FqCircuit) {
    if !circuit.is_null() {
        drop(Box::from_raw(circuit));
    }
}

/// # Safety
/// `circuit` must be a live handle; the out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn fq_circuit_shape(
    circuit: *const FqCircuit,
    out_width: *mut usize,
    out_gates: *mut usize,
) -> FqStatus {
    guard(|| {
        let c = &circuit.as_ref().ok_or_else(|| null("circuit"))?.0;
        *out(out_width, "out_width")? = c.width();
        *out(out_gates, "out_gates")? = c.len();
        Ok(())
    })
}

/// Renders the circuit in the text format; free the result with [`fq_string_free`].
///
/// # Safety
/// `circuit` must be a live handle; `out_text` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fq_circuit_emit(circuit: *const FqCircuit, out_text: *mut *mut c_char) -> FqStatus {
    guard(|| {
        let c = &circuit.as_ref().ok_or_else(|| null("circuit"))?.0;
        let slot = out(out_text, "out_text")?;
        let s = CString::new(emit_circuit(c)).map_err(|e| (FqStatus::Internal, e.to_string()))?;
        *slot = s.into_raw();
        Ok(())
    })
}

/// `|0…0⟩` on `n_qubits` qubits, subject to the qubit cap.
///
/// # Safety
/// `out_state` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fq_state_new(n_qubits: usize, out_state: *mut *mut FqState) -> FqStatus {
    guard(|| {
        let slot = out(out_state, "out_state")?;
        *slot = Box::into_raw(Box::new(FqState(core(State::new(n_qubits))?)));
        Ok(())
    })
}

/// # Safety
/// `state` must be NULL or a live handle from [`fq_state_new`].
#[no_mangle]
pub unsafe extern "C" fn fq_state_free(state: *mut FqState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// Applies `circuit` in place; the state is unchanged on failure.
///
/// # Safety
/// Both handles must be live.
#[no_mangle]
pub unsafe extern "C" fn fq_state_apply(state: *mut FqState, circuit: *const FqCircuit) -> FqStatus {
    guard(|| {
        let s = &mut state.as_mut().ok_or_else(|| null("state"))?.0;
        let c = &circuit.as_ref().ok_or_else(|| null("circuit"))?.0;
        let mut next = s.clone();
        core(next.apply_circuit(c))?;
        *s = next;
        Ok(())
    })
}

/// # Safety
/// `state` must be live; the out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn fq_state_amplitude(
    state: *const FqState,
    index: usize,
    out_re: *mut f64,
    out_im: *mut f64,
) -> FqStatus {
    guard(|| {
        let s = &state.as_ref().ok_or_else(|| null("state"))?.0;
        if index >= s.dim() {
            return Err((FqStatus::InvalidArgument, format!("index {index} ≥ dimension {}", s.dim())));
        }
        let a = s.amplitude(index);
        *out(out_re, "out_re")? = a.re;
        *out(out_im, "out_im")? = a.im;
        Ok(())
    })
}

/// Writes the `2^n` basis probabilities into `buffer`, which must hold `len ≥ 2^n` doubles.
///
/// # Safety
/// `state` must be live; `buffer` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn fq_state_probabilities(state: *const FqState, buffer: *mut f64, len: usize) -> FqStatus {
    guard(|| {
        let s = &state.as_ref().ok_or_else(|| null("state"))?.0;
        if buffer.is_null() {
            return Err(null("buffer"));
        }
        if len < s.dim() {
            return Err((FqStatus::InvalidArgument, format!("buffer holds {len}, needs {}", s.dim())));
        }
        let dst = std::slice::from_raw_parts_mut(buffer, s.dim());
        dst.copy_from_slice(&s.probabilities());
        Ok(())
    })
}

/// Seeded measurement histogram: `counts[k]` shots landed on basis state `k`.
///
/// # Safety
/// `state` must be live; `counts` must point to `len ≥ 2^n` writable integers.
#[no_mangle]
pub unsafe extern "C" fn fq_state_sample(
    state: *const FqState,
    shots: u64,
    seed: u64,
    counts: *mut u64,
    len: usize,
) -> FqStatus {
    guard(|| {
        let s = &state.as_ref().ok_or_else(|| null("state"))?.0;
        if counts.is_null() {
            return Err(null("counts"));
        }
        if len < s.dim() {
            return Err((FqStatus::InvalidArgument, format!("buffer holds {len}, needs {}", s.dim())));
        }
        let hist = core(s.sample(shots, seed))?;
        let dst = std::slice::from_raw_parts_mut(counts, s.dim());
        dst.fill(0);
        for (k, n) in hist.counts {
            dst[k] = n;
        }
        Ok(())
    })
}

/// Optimizes a uniform-init factoring ansatz (hybrid search on the compiled
/// backend) and recovers the factors of `m`.
///
/// # Safety
/// `out_result` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fq_factor(
    m: u64,
    certificate: FqCertificate,
    layers: usize,
    mixer: FqMixer,
    seed: u64,
    out_result: *mut FqFactorResult,
) -> FqStatus {
    guard(|| {
        let slot = out(out_result, "out_result")?;
        if m.is_multiple_of(2) || m < 9 {
            return Err((FqStatus::Precondition, format!("m = {m} must be odd and at least 9")));
        }
        let cert = core(match certificate {
            FqCertificate::Multiplication => Certificate::multiplication(m, PhaseMode::HammingDistance),
            FqCertificate::Modulo => Certificate::modulo(m, PhaseMode::HammingDistance),
        })?;
        let mixer = match mixer {
            FqMixer::X => Mixer::X,
            FqMixer::Grover => Mixer::Grover,
        };
        let config = core(AnsatzConfig::new(cert.clone(), layers, mixer, Init::UniformHadamard))?;
        let eval = core(Evaluator::new(&config, Backend::Compiled, EvalMode::Exact))?;
        let r = core(optimize_with(&eval, Strategy::hybrid(), seed))?;
        let (s, probability) = core(eval.most_likely_solution(&r.best_params))?
            .ok_or_else(|| (FqStatus::Internal, "no factoring state in the search space".to_string()))?;
        let Candidate::Factors { p, q } = cert.decode(s) else {
            return Err((FqStatus::Internal, "non-factor candidate".into()));
        };
        if p <= 1 || q <= 1 || p.checked_mul(q) != Some(m) {
            return Err((FqStatus::Internal, format!("recovered {p}·{q} ≠ {m}")));
        }
        *slot = FqFactorResult {
            p: p.min(q),
            q: p.max(q),
            probability,
            energy: r.best_energy,
            evaluations: r.evaluations as u64,
        };
        Ok(())
    })
}
