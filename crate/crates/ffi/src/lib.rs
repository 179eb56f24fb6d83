//! C interface to the cogsheaf toolkit.
//!
//! Bundles and certificates are opaque handles owned by the caller and
//! released with their `_free` function. Strings returned through `char **`
//! out-parameters are released with [`cogsheaf_string_free`]. When a call
//! fails, [`cogsheaf_last_error_message`] describes why.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, UnwindSafe};
use std::path::Path;
use std::ptr;

use cogsheaf::cog::{validate_cog, validate_morphism_to_group};
use cogsheaf::develop::{develop, DevCertificate, DevelopError};
use cogsheaf::exactlin::Field;
use cogsheaf::format::{certificate_file, dev_report_file, sheaf_file_inline, to_json, Bundle, Document, FormatError, Loader};
use cogsheaf::report::ValidationReport;
use cogsheaf::sheaf::{check_dev_properties, sheaf_from_morphism, validate_sheaf, SheafError};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CogsheafStatus {
    Ok = 0,
    /// Well-formed input that fails a check; out-parameters are still set.
    ValidationFailed = 1,
    InvalidInput = 2,
    NullPointer = 3,
    Utf8 = 4,
    Io = 5,
    Panic = 6,
}

/// A loaded instance bundle.
pub struct CogsheafBundle {
    inner: Bundle,
}

/// A developability certificate.
pub struct CogsheafCertificate {
    inner: DevCertificate,
    field: Field,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let text = CString::new(msg.into().replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(text));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Fail(CogsheafStatus, String);

type Outcome = Result<CogsheafStatus, Fail>;

impl From<FormatError> for Fail {
    fn from(e: FormatError) -> Self {
        let status = match e {
            FormatError::Io { .. } => CogsheafStatus::Io,
            FormatError::Semantic { .. } => CogsheafStatus::ValidationFailed,
            _ => CogsheafStatus::InvalidInput,
        };
        Fail(status, e.to_string())
    }
}

impl From<DevelopError> for Fail {
    fn from(e: DevelopError) -> Self {
        let status = match e {
            DevelopError::InvalidInput(_) => CogsheafStatus::ValidationFailed,
            _ => CogsheafStatus::InvalidInput,
        };
        Fail(status, e.to_string())
    }
}

impl From<SheafError> for Fail {
    fn from(e: SheafError) -> Self {
        let status = match e {
            SheafError::InvalidMorphism(_) | SheafError::InvalidSheaf(_) => CogsheafStatus::ValidationFailed,
            _ => CogsheafStatus::InvalidInput,
        };
        Fail(status, e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Outcome + UnwindSafe) -> CogsheafStatus {
    clear_error();
    match catch_unwind(f) {
        Ok(Ok(status)) => status,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            CogsheafStatus::Panic
        }
    }
}

fn null() -> Fail {
    Fail(CogsheafStatus::NullPointer, "null pointer argument".into())
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p).to_str().map_err(|e| Fail(CogsheafStatus::Utf8, e.to_string()))
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(null)
}

fn to_c(s: String) -> *mut c_char {
    CString::new(s).expect("json has no nul").into_raw()
}

unsafe fn put_string(out: *mut *mut c_char, s: String) {
    if !out.is_null() {
        *out = to_c(s);
    }
}

fn settle(ok: bool, what: &str) -> CogsheafStatus {
    if ok {
        CogsheafStatus::Ok
    } else {
        set_error(what);
        CogsheafStatus::ValidationFailed
    }
}

fn into_bundle(doc: Document) -> Result<Bundle, Fail> {
    match doc {
        Document::Bundle(b) => Ok(b),
        d => Err(Fail(CogsheafStatus::InvalidInput, format!("expected a bundle, found {}", d.kind()))),
    }
}

unsafe fn store_bundle(out: *mut *mut CogsheafBundle, b: Bundle) {
    *out = Box::into_raw(Box::new(CogsheafBundle { inner: b }));
}

/// Loads a bundle file; references resolve relative to its directory.
///
/// # Safety
/// `path` is a nul-terminated string and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn cogsheaf_bundle_from_path(path: *const c_char, out: *mut *mut CogsheafBundle) -> CogsheafStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let path = text(path)?;
        let b = into_bundle(Loader::new().load_path(Path::new(path))?)?;
        store_bundle(out, b);
        Ok(CogsheafStatus::Ok)
    })
}

/// Parses a bundle from JSON text; relative references resolve against
/// `base_dir`, or the working directory when it is null.
///
/// # Safety
/// `json` and a non-null `base_dir` are nul-terminated strings; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn cogsheaf_bundle_from_json(
    json: *const c_char,
    base_dir: *const c_char,
    out: *mut *mut CogsheafBundle,
) -> CogsheafStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let json = text(json)?;
        let dir = if base_dir.is_null() { "." } else { text(base_dir)? };
        let b = into_bundle(Loader::new().load_str(json, Path::new(dir))?)?;
        store_bundle(out, b);
        Ok(CogsheafStatus::Ok)
    })
}

/// # Safety
/// `bundle` is null or came from a `cogsheaf_bundle_from_*` call and is not used again.
#[no_mangle]
pub unsafe extern "C" fn cogsheaf_bundle_free(bundle: *mut CogsheafBundle) {
    if !bundle.is_null() {
        drop(Box::from_raw(bundle));
    }
}

/// Runs every validator on the bundle's complex, sheaf and morphism. A JSON
/// array of reports goes to `report_json` when it is non-null.
///
/// # Safety
/// `bundle` is a live handle; `report_json` is null or writable.
#[no_mangle]
pub unsafe extern "C" fn cogsheaf_bundle_validate(
    bundle: *const CogsheafBundle,
    report_json: *mut *mut c_char,
) -> CogsheafStatus {
    guard(|| {
        let b = &handle(bundle)?.inner;
        let mut reports = vec![validate_cog(&b.complex)];
        reports.extend(b.sheaf.iter().map(validate_sheaf));
        reports.extend(b.morphism.iter().map(|m| validate_morphism_to_group(m, false)));
        let ok = reports.iter().all(ValidationReport::passed);
        put_string(report_json, to_json(&reports));
        let first = reports.iter().find(|r| !r.passed()).map(ToString::to_string).unwrap_or_default();
        Ok(settle(ok, &first))
    })
}

/// The dev properties of the bundle's sheaf. Sets `verdict` and, when
/// non-null, `report_json`.
///
/// # Safety
/// `bundle` is a live handle; `verdict` and `report_json` are null or writable.
#[no_mangle]
pub unsafe extern "C" fn cogsheaf_bundle_dev_check(
    bundle: *const CogsheafBundle,
    verdict: *mut bool,
    report_json: *mut *mut c_char,
) -> CogsheafStatus {
    guard(|| {
        let b = &handle(bundle)?.inner;
        let f = b.sheaf.as_ref().ok_or_else(|| Fail(CogsheafStatus::InvalidInput, "bundle has no sheaf".into()))?;
        let report = check_dev_properties(f)?;
        if !verdict.is_null() {
            *verdict = report.verdict();
        }
        put_string(report_json, to_json(&dev_report_file(&report)));
        Ok(settle(report.verdict(), &report.to_string()))
    })
}

/// Builds the certificate for the bundle's sheaf. `out` is set whenever
/// the status is `Ok` or `ValidationFailed`.
///
/// # Safety
/// `bundle` is a live handle and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn cogsheaf_develop(bundle: *const CogsheafBundle, out: *mut *mut CogsheafCertificate) -> CogsheafStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let b = &handle(bundle)?.inner;
        let f = b.sheaf.as_ref().ok_or_else(|| Fail(CogsheafStatus::InvalidInput, "bundle has no sheaf".into()))?;
        let cert = develop(&b.complex, f)?;
        let ok = cert.verdict;
        let reason = cert.reason.clone().unwrap_or_default();
        *out = Box::into_raw(Box::new(CogsheafCertificate { inner: cert, field: f.field() }));
        Ok(settle(ok, &reason))
    })
}

/// False for a null handle.
///
/// # Safety
/// `cert` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cogsheaf_certificate_verdict(cert: *const CogsheafCertificate) -> bool {
    cert.as_ref().is_some_and(|c| c.inner.verdict)
}

/// # Safety
/// `cert` is a live handle and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn cogsheaf_certificate_to_json(cert: *const CogsheafCertificate, out: *mut *mut c_char) -> CogsheafStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let c = handle(cert)?;
        *out = to_c(to_json(&certificate_file(&c.inner, c.field)));
        Ok(CogsheafStatus::Ok)
    })
}

/// # Safety
/// `cert` is null or came from [`cogsheaf_develop`] and is not used again.
#[no_mangle]
pub unsafe extern "C" fn cogsheaf_certificate_free(cert: *mut CogsheafCertificate) {
    if !cert.is_null() {
        drop(Box::from_raw(cert));
    }
}

/// The regular-representation sheaf of the bundle's morphism over `field`
/// (`"Q"` or `"Fp:p"`; null means `Q`), as a self-contained sheaf file.
/// Returns `ValidationFailed`, with `sheaf_json` still set, when the
/// morphism is not injective on some local group.
///
/// # Safety
/// `bundle` is a live handle, `field` is null or a nul-terminated string and
/// `sheaf_json` is writable.
#[no_mangle]
pub unsafe extern "C" fn cogsheaf_sheaf_from_morphism(
    bundle: *const CogsheafBundle,
    field: *const c_char,
    sheaf_json: *mut *mut c_char,
) -> CogsheafStatus {
    guard(|| {
        if sheaf_json.is_null() {
            return Err(null());
        }
        let b = &handle(bundle)?.inner;
        let field = if field.is_null() {
            Field::Rational
        } else {
            text(field)?.parse::<Field>().map_err(|e| Fail(CogsheafStatus::InvalidInput, e.to_string()))?
        };
        let m = b.morphism.as_ref().ok_or_else(|| Fail(CogsheafStatus::InvalidInput, "bundle has no morphism".into()))?;
        let (f, warnings) = sheaf_from_morphism(m, field)?;
        *sheaf_json = to_c(to_json(&sheaf_file_inline(&f)));
        Ok(settle(warnings.passed(), &warnings.to_string()))
    })
}

/// # Safety
/// `s` is null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cogsheaf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// The message for the last failed call on this thread, or null. Valid
/// until the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn cogsheaf_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// The library version as a static string.
#[no_mangle]
pub extern "C" fn cogsheaf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
