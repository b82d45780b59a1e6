//! C ABI for `valence-core`.
//!
//! Devices and monoids cross the boundary as opaque handles created from JSON
//! and released with the matching `*_free` function. Results come back as
//! JSON strings owned by the caller (release with [`vlc_string_free`]).
//! Every call returns a [`VlcStatus`]; on anything but `Ok` a description is
//! available from [`vlc_last_error`] until the next call on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use serde_json::Value;
use valence_core::analysis::{classify, units_finite_gate_genmap, GateAnswer, GateOptions};
use valence_core::grammars::{CfgOptions, ValenceGrammar};
use valence_core::machines::{Acceptance, SearchBudget, ValenceAutomaton};
use valence_core::monoid::{GenMap, Monoid};

/// Status codes; the first four match the exit codes of the `valence` CLI.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VlcStatus {
    Ok = 0,
    Error = 1,
    /// A decided negative verdict: infinite case or refused conversion.
    Refused = 2,
    /// Unknown gate verdict or a budget-limited answer.
    Unknown = 3,
    NullPointer = 4,
    InvalidUtf8 = 5,
    Panic = 6,
}

pub struct VlcMonoid {
    inner: Monoid,
}

pub struct VlcAutomaton {
    inner: ValenceAutomaton,
}

pub struct VlcGrammar {
    inner: ValenceGrammar,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).expect("nul bytes removed"));
}

struct Fail(VlcStatus, String);

impl<E: std::fmt::Display> From<E> for Fail {
    fn from(e: E) -> Self {
        Fail(VlcStatus::Error, e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<VlcStatus, Fail>) -> VlcStatus {
    set_error("");
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => s,
        Ok(Err(Fail(s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            VlcStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(VlcStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail(VlcStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn json_arg(p: *const c_char, what: &str) -> Result<Value, Fail> {
    let s = str_arg(p, what)?;
    serde_json::from_str(s).map_err(|e| Fail(VlcStatus::Error, format!("{what}: {e}")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| Fail(VlcStatus::NullPointer, format!("{what} is null")))
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail(VlcStatus::NullPointer, "output pointer is null".into()));
    }
    out.write(value);
    Ok(())
}

unsafe fn put_json(out: *mut *mut c_char, v: &Value) -> Result<(), Fail> {
    let s = CString::new(v.to_string()).expect("JSON has no nul bytes");
    put(out, s.into_raw())
}

fn budget(norm_cap: u64) -> SearchBudget {
    SearchBudget::new(norm_cap, None)
}

/// The message for the last failed call on this thread; empty after a
/// successful call. Owned by the library.
#[no_mangle]
pub extern "C" fn vlc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// The library version as a static string.
#[no_mangle]
pub extern "C" fn vlc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be null or a string returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn vlc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a monoid description.
///
/// # Safety
/// `json` must be a valid C string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vlc_monoid_from_json(json: *const c_char, out: *mut *mut VlcMonoid) -> VlcStatus {
    guard(|| {
        let v = json_arg(json, "json")?;
        let inner = Monoid::from_json(&v)?;
        put(out, Box::into_raw(Box::new(VlcMonoid { inner })))?;
        Ok(VlcStatus::Ok)
    })
}

/// # Safety
/// `m` must be null or a handle from [`vlc_monoid_from_json`], freed once.
#[no_mangle]
pub unsafe extern "C" fn vlc_monoid_free(m: *mut VlcMonoid) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Multiplies two element literals and writes the product literal.
///
/// # Safety
/// Pointers must be valid; `out` receives a string for [`vlc_string_free`].
#[no_mangle]
pub unsafe extern "C" fn vlc_monoid_mul(
    m: *const VlcMonoid,
    a: *const c_char,
    b: *const c_char,
    out: *mut *mut c_char,
) -> VlcStatus {
    guard(|| {
        let m = &handle(m, "monoid")?.inner;
        let x = m.parse_literal(&json_arg(a, "a")?)?;
        let y = m.parse_literal(&json_arg(b, "b")?)?;
        put_json(out, &m.render(&m.mul(&x, &y)?))?;
        Ok(VlcStatus::Ok)
    })
}

/// Dichotomy verdict; `Refused` signals the infinite-chain case.
///
/// # Safety
/// Pointers must be valid; `out` receives a string for [`vlc_string_free`].
#[no_mangle]
pub unsafe extern "C" fn vlc_monoid_classify(m: *const VlcMonoid, out: *mut *mut c_char) -> VlcStatus {
    guard(|| {
        let m = &handle(m, "monoid")?.inner;
        let v = classify(m)?;
        put_json(out, &v.to_json(m))?;
        Ok(if v.is_finite_group() { VlcStatus::Ok } else { VlcStatus::Refused })
    })
}

/// Finiteness gate for the submonoid generated by a generator map such as
/// `{"x1": [1], "x2": [-1]}`. `Ok` for finite, `Refused` for infinite,
/// `Unknown` otherwise; the verdict JSON is written in every case.
///
/// # Safety
/// Pointers must be valid; `out` receives a string for [`vlc_string_free`].
#[no_mangle]
pub unsafe extern "C" fn vlc_gate(
    m: *const VlcMonoid,
    generators: *const c_char,
    norm_cap: u64,
    out: *mut *mut c_char,
) -> VlcStatus {
    guard(|| {
        let m = &handle(m, "monoid")?.inner;
        let gm = GenMap::from_json(m, &json_arg(generators, "generators")?)?;
        let v = units_finite_gate_genmap(m, &gm, &GateOptions::with_norm_cap(norm_cap))?;
        put_json(out, &v.to_json(m))?;
        Ok(match v.answer {
            GateAnswer::Finite => VlcStatus::Ok,
            GateAnswer::Infinite => VlcStatus::Refused,
            GateAnswer::Unknown => VlcStatus::Unknown,
        })
    })
}

/// Parses a valence automaton; the monoid must be given inline.
///
/// # Safety
/// `json` must be a valid C string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vlc_automaton_from_json(json: *const c_char, out: *mut *mut VlcAutomaton) -> VlcStatus {
    guard(|| {
        let inner = ValenceAutomaton::from_json(&json_arg(json, "json")?, None)?;
        put(out, Box::into_raw(Box::new(VlcAutomaton { inner })))?;
        Ok(VlcStatus::Ok)
    })
}

/// # Safety
/// `a` must be null or an automaton handle, freed once.
#[no_mangle]
pub unsafe extern "C" fn vlc_automaton_free(a: *mut VlcAutomaton) {
    if !a.is_null() {
        drop(Box::from_raw(a));
    }
}

/// # Safety
/// Pointers must be valid; `out` receives a string for [`vlc_string_free`].
#[no_mangle]
pub unsafe extern "C" fn vlc_automaton_to_json(a: *const VlcAutomaton, out: *mut *mut c_char) -> VlcStatus {
    guard(|| {
        put_json(out, &handle(a, "automaton")?.inner.to_json())?;
        Ok(VlcStatus::Ok)
    })
}

/// Membership of `word`. Returns `Unknown` (with `accepted` false) when the
/// norm cap cut the search short.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn vlc_automaton_accepts(
    a: *const VlcAutomaton,
    word: *const c_char,
    norm_cap: u64,
    accepted: *mut bool,
) -> VlcStatus {
    guard(|| {
        let a = &handle(a, "automaton")?.inner;
        let w = a.alphabet().parse_word(str_arg(word, "word")?)?;
        let r = a.accepts(&w, &budget(norm_cap))?;
        put(accepted, r.is_yes())?;
        Ok(if r == Acceptance::NoWithinBudget { VlcStatus::Unknown } else { VlcStatus::Ok })
    })
}

/// Accepted words up to `maxlen` as a JSON language sample.
///
/// # Safety
/// Pointers must be valid; `out` receives a string for [`vlc_string_free`].
#[no_mangle]
pub unsafe extern "C" fn vlc_automaton_enumerate(
    a: *const VlcAutomaton,
    maxlen: usize,
    norm_cap: u64,
    out: *mut *mut c_char,
) -> VlcStatus {
    guard(|| {
        let a = &handle(a, "automaton")?.inner;
        put_json(out, &a.enumerate_language(maxlen, &budget(norm_cap))?.to_json(a.alphabet()))?;
        Ok(VlcStatus::Ok)
    })
}

/// Converts to an NFA. On refusal `out` is left untouched, the status is
/// `Refused` or `Unknown`, and [`vlc_last_error`] holds the gate verdict
/// as JSON.
///
/// # Safety
/// Pointers must be valid; `out` receives a handle for
/// [`vlc_automaton_free`].
#[no_mangle]
pub unsafe extern "C" fn vlc_automaton_to_nfa(
    a: *const VlcAutomaton,
    norm_cap: u64,
    out: *mut *mut VlcAutomaton,
) -> VlcStatus {
    guard(|| {
        let a = &handle(a, "automaton")?.inner;
        match a.to_nfa(&GateOptions::with_norm_cap(norm_cap)) {
            Ok(nfa) => {
                put(out, Box::into_raw(Box::new(VlcAutomaton { inner: nfa })))?;
                Ok(VlcStatus::Ok)
            }
            Err(e) => match e.refusal() {
                Some(v) => {
                    let status =
                        if v.answer == GateAnswer::Unknown { VlcStatus::Unknown } else { VlcStatus::Refused };
                    Err(Fail(status, v.to_json(a.monoid()).to_string()))
                }
                None => Err(e.into()),
            },
        }
    })
}

/// Parses a valence grammar; the monoid must be given inline.
///
/// # Safety
/// `json` must be a valid C string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vlc_grammar_from_json(json: *const c_char, out: *mut *mut VlcGrammar) -> VlcStatus {
    guard(|| {
        let inner = ValenceGrammar::from_json(&json_arg(json, "json")?, None)?;
        put(out, Box::into_raw(Box::new(VlcGrammar { inner })))?;
        Ok(VlcStatus::Ok)
    })
}

/// # Safety
/// `g` must be null or a grammar handle, freed once.
#[no_mangle]
pub unsafe extern "C" fn vlc_grammar_free(g: *mut VlcGrammar) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// Pointers must be valid; `out` receives a string for [`vlc_string_free`].
#[no_mangle]
pub unsafe extern "C" fn vlc_grammar_to_json(g: *const VlcGrammar, out: *mut *mut c_char) -> VlcStatus {
    guard(|| {
        put_json(out, &handle(g, "grammar")?.inner.to_json())?;
        Ok(VlcStatus::Ok)
    })
}

/// Generated words up to `maxlen` as a JSON language sample.
///
/// # Safety
/// Pointers must be valid; `out` receives a string for [`vlc_string_free`].
#[no_mangle]
pub unsafe extern "C" fn vlc_grammar_enumerate(
    g: *const VlcGrammar,
    maxlen: usize,
    norm_cap: u64,
    out: *mut *mut c_char,
) -> VlcStatus {
    guard(|| {
        let g = &handle(g, "grammar")?.inner;
        put_json(out, &g.bounded_language(maxlen, &budget(norm_cap))?.to_json(g.terminals()))?;
        Ok(VlcStatus::Ok)
    })
}

/// Normalizes and converts to a context-free grammar, with refusals
/// reported as in [`vlc_automaton_to_nfa`].
///
/// # Safety
/// Pointers must be valid; `out` receives a handle for [`vlc_grammar_free`].
#[no_mangle]
pub unsafe extern "C" fn vlc_grammar_to_cfg(g: *const VlcGrammar, norm_cap: u64, out: *mut *mut VlcGrammar) -> VlcStatus {
    guard(|| {
        let g = &handle(g, "grammar")?.inner;
        let opts = CfgOptions { gate: GateOptions::with_norm_cap(norm_cap), ..CfgOptions::default() };
        match g.normalize().to_cfg(&opts) {
            Ok(cfg) => {
                put(out, Box::into_raw(Box::new(VlcGrammar { inner: cfg })))?;
                Ok(VlcStatus::Ok)
            }
            Err(e) => match e.refusal() {
                Some(v) => {
                    let status =
                        if v.answer == GateAnswer::Unknown { VlcStatus::Unknown } else { VlcStatus::Refused };
                    Err(Fail(status, v.to_json(g.monoid()).to_string()))
                }
                None => Err(e.into()),
            },
        }
    })
}
