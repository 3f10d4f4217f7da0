//! C ABI over the `bggfe` verifier. Every entry point returns a
//! [`BggfeStatus`]; on failure the message is available from
//! [`bggfe_last_error`] on the calling thread until the next call.
//!
//! Handles are opaque and owned by the caller once returned; release them
//! with the matching `_free` function. Strings returned by accessors borrow
//! from their handle.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use bggfe::cli::{execute, CliError, Command, Diagram, Format, Output, RunConfig};
use bggfe::mesh::{load_mesh, MacroMesh};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BggfeStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    Mesh = 4,
    Element = 5,
    Diagram = 6,
    Curvature = 7,
    Io = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BggfeFormat {
    Json = 0,
    Csv = 1,
    Md = 2,
}

/// Which diagram `bggfe_verify` builds; `Auto` follows the mesh's macro kind.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BggfeDiagram {
    Auto = 0,
    Stress = 1,
    Strain = 2,
}

/// A loaded macro mesh.
pub struct BggfeMesh {
    mesh: MacroMesh,
}

/// A rendered report with its pass/fail verdict.
pub struct BggfeReport {
    text: CString,
    passed: bool,
    failures: Vec<CString>,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

struct Failure(BggfeStatus, String);

impl From<CliError> for Failure {
    fn from(e: CliError) -> Self {
        let status = match &e {
            CliError::Mesh(_) => BggfeStatus::Mesh,
            CliError::Fe(_) => BggfeStatus::Element,
            CliError::Bgg(_) => BggfeStatus::Diagram,
            CliError::Curvature(_) => BggfeStatus::Curvature,
            CliError::Io { .. } => BggfeStatus::Io,
            CliError::Usage(_) => BggfeStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

/// Runs `body`, converting errors and panics into a status code.
fn guarded(body: impl FnOnce() -> Result<(), Failure>) -> BggfeStatus {
    set_error("");
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => BggfeStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("internal panic: {msg}"));
            BggfeStatus::Panic
        }
    }
}

/// # Safety
/// `s` is null or a NUL-terminated string.
unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(Failure(BggfeStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(s).to_str().map_err(|_| Failure(BggfeStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

/// # Safety
/// `s` is null or a NUL-terminated string.
unsafe fn read_opt_str<'a>(s: *const c_char, what: &str) -> Result<Option<&'a str>, Failure> {
    if s.is_null() {
        Ok(None)
    } else {
        read_str(s, what).map(Some)
    }
}

fn out_ptr<T>(out: *mut *mut T) -> Result<&'static mut *mut T, Failure> {
    // SAFETY: callers pass a valid out-pointer or null, which is rejected here.
    unsafe { out.as_mut() }.ok_or_else(|| Failure(BggfeStatus::NullArgument, "output pointer is null".into()))
}

fn into_report(output: Output) -> Box<BggfeReport> {
    let c = |s: String| CString::new(s.replace('\0', " ")).expect("NULs removed");
    Box::new(BggfeReport { text: c(output.text), passed: output.passed, failures: output.failures.into_iter().map(c).collect() })
}

fn format_of(f: BggfeFormat) -> Format {
    match f {
        BggfeFormat::Json => Format::Json,
        BggfeFormat::Csv => Format::Csv,
        BggfeFormat::Md => Format::Md,
    }
}

fn run(command: Command, format: BggfeFormat, out: *mut *mut BggfeReport) -> Result<(), Failure> {
    let out = out_ptr(out)?;
    *out = ptr::null_mut();
    let output = execute(&RunConfig { command, out: None, format: format_of(format) })?;
    *out = Box::into_raw(into_report(output));
    Ok(())
}

/// Message of the last failed call on this thread; empty after a success.
#[no_mangle]
pub extern "C" fn bggfe_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Loads a built-in mesh by name or a mesh JSON file by path.
///
/// # Safety
/// `name` is a NUL-terminated string; `out` is a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bggfe_mesh_load(name: *const c_char, out: *mut *mut BggfeMesh) -> BggfeStatus {
    guarded(|| {
        let out = out_ptr(out)?;
        *out = ptr::null_mut();
        let name = read_str(name, "mesh name")?;
        let mesh = load_mesh(name).map_err(|e| Failure(BggfeStatus::Mesh, e.to_string()))?;
        *out = Box::into_raw(Box::new(BggfeMesh { mesh }));
        Ok(())
    })
}

/// # Safety
/// `mesh` is null or a handle from `bggfe_mesh_load` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bggfe_mesh_free(mesh: *mut BggfeMesh) {
    if !mesh.is_null() {
        drop(Box::from_raw(mesh));
    }
}

/// Vertex count including split points; 0 for a null handle.
///
/// # Safety
/// `mesh` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bggfe_mesh_vertex_count(mesh: *const BggfeMesh) -> usize {
    mesh.as_ref().map_or(0, |m| m.mesh.vertices.len())
}

/// Edge count including interior split edges; 0 for a null handle.
///
/// # Safety
/// `mesh` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bggfe_mesh_edge_count(mesh: *const BggfeMesh) -> usize {
    mesh.as_ref().map_or(0, |m| m.mesh.edges.len())
}

/// Sub-triangle count; 0 for a null handle.
///
/// # Safety
/// `mesh` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bggfe_mesh_triangle_count(mesh: *const BggfeMesh) -> usize {
    mesh.as_ref().map_or(0, |m| m.mesh.triangles.len())
}

/// # Safety
/// `mesh` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bggfe_mesh_macro_count(mesh: *const BggfeMesh) -> usize {
    mesh.as_ref().map_or(0, |m| m.mesh.macros.len())
}

/// Dimension table. `mesh` and `element` may be null for the defaults.
///
/// # Safety
/// String arguments are null or NUL-terminated; `out` is a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bggfe_dims(
    mesh: *const c_char,
    element: *const c_char,
    format: BggfeFormat,
    out: *mut *mut BggfeReport,
) -> BggfeStatus {
    guarded(|| {
        let mesh = read_opt_str(mesh, "mesh name")?.map(str::to_owned);
        let element = read_opt_str(element, "element name")?.map(str::to_owned);
        run(Command::Dims { mesh, element }, format, out)
    })
}

/// Builds and checks a diagram. A report whose checks fail is still `Ok`;
/// inspect it with `bggfe_report_passed`.
///
/// # Safety
/// `mesh` is null or NUL-terminated; `out` is a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bggfe_verify(
    mesh: *const c_char,
    diagram: BggfeDiagram,
    format: BggfeFormat,
    out: *mut *mut BggfeReport,
) -> BggfeStatus {
    guarded(|| {
        let mesh = read_opt_str(mesh, "mesh name")?.map(str::to_owned);
        let diagram = match diagram {
            BggfeDiagram::Auto => None,
            BggfeDiagram::Stress => Some(Diagram::Stress),
            BggfeDiagram::Strain => Some(Diagram::Strain),
        };
        run(Command::Verify { mesh, diagram }, format, out)
    })
}

/// Runs curvature identities on the seeded random corpus. `check` may be
/// null for all identities.
///
/// # Safety
/// `check` is null or NUL-terminated; `out` is a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bggfe_curvature(
    check: *const c_char,
    seed: u64,
    cases: usize,
    format: BggfeFormat,
    out: *mut *mut BggfeReport,
) -> BggfeStatus {
    guarded(|| {
        let check = read_opt_str(check, "check name")?.unwrap_or("all").to_owned();
        run(Command::Curvature { check, seed, cases, input: None }, format, out)
    })
}

/// # Safety
/// `report` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bggfe_report_passed(report: *const BggfeReport) -> bool {
    report.as_ref().is_some_and(|r| r.passed)
}

/// Rendered report text, valid until the report is freed; null for a null handle.
///
/// # Safety
/// `report` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bggfe_report_text(report: *const BggfeReport) -> *const c_char {
    report.as_ref().map_or(ptr::null(), |r| r.text.as_ptr())
}

/// # Safety
/// `report` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bggfe_report_failure_count(report: *const BggfeReport) -> usize {
    report.as_ref().map_or(0, |r| r.failures.len())
}

/// Description of failed check `index`, or null when out of range.
///
/// # Safety
/// `report` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bggfe_report_failure(report: *const BggfeReport, index: usize) -> *const c_char {
    report.as_ref().and_then(|r| r.failures.get(index)).map_or(ptr::null(), |f| f.as_ptr())
}

/// # Safety
/// `report` is null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bggfe_report_free(report: *mut BggfeReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}
