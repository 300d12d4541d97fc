//! C ABI for mvkit.
//!
//! Objects cross the boundary as opaque handles (`MvkitSpec`,
//! `MvkitAlgebra`) and elements as their text form. Every entry point
//! returns an `MvkitStatus`; on failure `mvkit_last_error` describes the
//! problem. Strings returned through out-parameters belong to the caller and
//! are released with `mvkit_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use mvkit::cli::syntax::{parse_algebra, parse_lit, parse_spec};
use mvkit::cli::{self, CliError, Env, Invocation};
use mvkit::mvcore::{check_axioms, Strategy};
use mvkit::{Algebra, Config, MvError};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MvkitStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    SyntaxError = 3,
    UnknownName = 4,
    UsageError = 5,
    /// A mathematical precondition failed (invalid unit, element outside
    /// the algebra, unsupported shape, ...).
    DomainError = 6,
    VerificationFailed = 7,
    Panic = 8,
}

/// Knobs for sampled and size-bounded computations.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MvkitConfig {
    pub samples: u64,
    pub seed: u64,
    pub cap: u64,
    pub surrogate_depth: u64,
}

impl From<&MvkitConfig> for Config {
    fn from(c: &MvkitConfig) -> Config {
        Config { samples: c.samples as usize, seed: c.seed, cap: c.cap as usize, surrogate_depth: c.surrogate_depth as usize }
    }
}

/// A parsed and resolved specification file.
pub struct MvkitSpec {
    text: String,
    env: Env,
}

/// An MV-algebra.
pub struct MvkitAlgebra {
    algebra: Algebra,
    env: Env,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(err: &CliError) -> MvkitStatus {
    match err {
        CliError::Syntax { .. } | CliError::Arity { .. } => MvkitStatus::SyntaxError,
        CliError::UnknownName { .. } | CliError::DuplicateName { .. } => MvkitStatus::UnknownName,
        CliError::Usage(_) => MvkitStatus::UsageError,
        CliError::Mv(MvError::VerificationFailed { .. }) => MvkitStatus::VerificationFailed,
        CliError::Mv(_) => MvkitStatus::DomainError,
    }
}

struct Failure(MvkitStatus, String);

impl From<CliError> for Failure {
    fn from(e: CliError) -> Failure {
        Failure(status_of(&e), e.to_string())
    }
}

impl From<MvError> for Failure {
    fn from(e: MvError) -> Failure {
        CliError::Mv(e).into()
    }
}

/// Runs `f`, turning errors and panics into a status and the thread's last
/// error message.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> MvkitStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            MvkitStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            MvkitStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(MvkitStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure(MvkitStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn out_ptr<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| Failure(MvkitStatus::NullArgument, format!("{what} is null")))
}

fn owned(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("nul bytes removed").into_raw()
}

/// Default configuration: 1000 samples, seed 1, cap 64, surrogate depth 2.
#[no_mangle]
pub extern "C" fn mvkit_config_default() -> MvkitConfig {
    let c = Config::default();
    MvkitConfig { samples: c.samples as u64, seed: c.seed, cap: c.cap as u64, surrogate_depth: c.surrogate_depth as u64 }
}

/// Message of the last failed call on this thread, or an empty string. The
/// pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn mvkit_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn mvkit_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses and resolves a specification file.
///
/// # Safety
/// `text` must be a nul-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn mvkit_spec_parse(text: *const c_char, cfg: *const MvkitConfig, out: *mut *mut MvkitSpec) -> MvkitStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let text = self::text(text, "text")?.to_string();
        let cfg = config(cfg);
        let env = Env::load(&parse_spec(&text)?, &cfg)?;
        *out = Box::into_raw(Box::new(MvkitSpec { text, env }));
        Ok(())
    })
}

/// # Safety
/// `spec` must be null or a handle from `mvkit_spec_parse`, freed once.
#[no_mangle]
pub unsafe extern "C" fn mvkit_spec_free(spec: *mut MvkitSpec) {
    if !spec.is_null() {
        drop(Box::from_raw(spec));
    }
}

unsafe fn config(cfg: *const MvkitConfig) -> Config {
    cfg.as_ref().map(Config::from).unwrap_or_default()
}

/// Runs a CLI command and returns its JSON report and exit code (0 ok, 1
/// verification failed, 2 error). The status is `Ok` whenever a report was
/// produced; the report itself carries command errors.
///
/// # Safety
/// `spec` may be null; `args` must point to `nargs` nul-terminated strings;
/// `cfg` may be null for the defaults; `report` and `exit_code` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn mvkit_run(
    spec: *const MvkitSpec,
    command: *const c_char,
    args: *const *const c_char,
    nargs: usize,
    cfg: *const MvkitConfig,
    report: *mut *mut c_char,
    exit_code: *mut c_int,
) -> MvkitStatus {
    guard(|| {
        let report = out_ptr(report, "report")?;
        let exit_code = out_ptr(exit_code, "exit_code")?;
        *report = ptr::null_mut();
        let command = text(command, "command")?.to_string();
        if nargs > 0 && args.is_null() {
            return Err(Failure(MvkitStatus::NullArgument, "args is null".into()));
        }
        let args = (0..nargs).map(|i| text(*args.add(i), "argument").map(str::to_string)).collect::<Result<Vec<_>, _>>()?;
        let inv = Invocation { command, args, spec: spec.as_ref().map(|s| s.text.clone()), config: config(cfg) };
        let r = cli::run(&inv);
        *exit_code = r.exit_code();
        *report = owned(r.to_json());
        Ok(())
    })
}

/// Builds an algebra from an expression such as `product(chain(2), chain(3))`
/// or a name declared in `spec` (which may be null).
///
/// # Safety
/// `expr` must be a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mvkit_algebra_new(
    spec: *const MvkitSpec,
    expr: *const c_char,
    cfg: *const MvkitConfig,
    out: *mut *mut MvkitAlgebra,
) -> MvkitStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let env = spec.as_ref().map(|s| s.env.clone()).unwrap_or_default();
        let algebra = env.algebra(&parse_algebra(text(expr, "expr")?)?, &config(cfg))?;
        *out = Box::into_raw(Box::new(MvkitAlgebra { algebra, env }));
        Ok(())
    })
}

/// # Safety
/// `a` must be null or a handle from `mvkit_algebra_new`, freed once.
#[no_mangle]
pub unsafe extern "C" fn mvkit_algebra_free(a: *mut MvkitAlgebra) {
    if !a.is_null() {
        drop(Box::from_raw(a));
    }
}

unsafe fn algebra<'a>(a: *const MvkitAlgebra) -> Result<&'a MvkitAlgebra, Failure> {
    a.as_ref().ok_or_else(|| Failure(MvkitStatus::NullArgument, "algebra is null".into()))
}

/// Canonical text of the algebra.
///
/// # Safety
/// `a` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mvkit_algebra_describe(a: *const MvkitAlgebra, out: *mut *mut c_char) -> MvkitStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = owned(algebra(a)?.algebra.to_string());
        Ok(())
    })
}

/// Number of elements, or 0 when the carrier is infinite or above the cap.
///
/// # Safety
/// `a` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mvkit_algebra_size(a: *const MvkitAlgebra, cap: u64, out: *mut u64) -> MvkitStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = match algebra(a)?.algebra.elements(cap as usize) {
            Ok(Some(xs)) => xs.len() as u64,
            Ok(None) | Err(MvError::CarrierTooLarge { .. }) => 0,
            Err(e) => return Err(e.into()),
        };
        Ok(())
    })
}

/// Binary operations on elements given as text.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MvkitOp {
    /// `x ⊕ y`
    Plus = 0,
    /// `x ⊙ y`
    Times = 1,
    Join = 2,
    Meet = 3,
    /// `x ⊙ ¬y`
    Minus = 4,
    /// `d(x, y)`
    Distance = 5,
}

/// Applies `op` to two elements written as literals, e.g. `(1, 1/2)`.
///
/// # Safety
/// `a` must be a live handle, `x` and `y` nul-terminated strings and `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn mvkit_algebra_op(
    a: *const MvkitAlgebra,
    op: MvkitOp,
    x: *const c_char,
    y: *const c_char,
    out: *mut *mut c_char,
) -> MvkitStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let h = algebra(a)?;
        let x = h.env.elem(&h.algebra, &parse_lit(text(x, "x")?)?)?;
        let y = h.env.elem(&h.algebra, &parse_lit(text(y, "y")?)?)?;
        let z = match op {
            MvkitOp::Plus => h.algebra.plus(&x, &y),
            MvkitOp::Times => h.algebra.times(&x, &y),
            MvkitOp::Join => h.algebra.join(&x, &y),
            MvkitOp::Meet => h.algebra.meet(&x, &y),
            MvkitOp::Minus => h.algebra.minus(&x, &y),
            MvkitOp::Distance => h.algebra.dist(&x, &y),
        }?;
        *out = owned(z.to_string());
        Ok(())
    })
}

/// `¬x`.
///
/// # Safety
/// `a` must be a live handle, `x` a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mvkit_algebra_neg(a: *const MvkitAlgebra, x: *const c_char, out: *mut *mut c_char) -> MvkitStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let h = algebra(a)?;
        let x = h.env.elem(&h.algebra, &parse_lit(text(x, "x")?)?)?;
        *out = owned(h.algebra.neg(&x)?.to_string());
        Ok(())
    })
}

/// Checks the six axioms, exhaustively on carriers within the cap and on
/// seeded samples otherwise. `passed` receives 1 or 0.
///
/// # Safety
/// `a` must be a live handle, `cfg` null or valid, `passed` writable.
#[no_mangle]
pub unsafe extern "C" fn mvkit_algebra_check_axioms(a: *const MvkitAlgebra, cfg: *const MvkitConfig, passed: *mut c_int) -> MvkitStatus {
    guard(|| {
        let passed = out_ptr(passed, "passed")?;
        let cfg = config(cfg);
        let a = &algebra(a)?.algebra;
        let strategy = if a.elements(cfg.cap).ok().flatten().is_some() {
            Strategy::Exhaustive
        } else {
            Strategy::Sampled { count: cfg.samples, seed: cfg.seed }
        };
        *passed = check_axioms(a, strategy, cfg.cap)?.all_passed() as c_int;
        Ok(())
    })
}
