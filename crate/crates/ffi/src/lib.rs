//! C ABI over `mlie`.
//!
//! Objects are opaque handles created by `mlie_*_new`-style constructors and
//! released with the matching `*_free`. Every fallible function returns an
//! [`MlieStatus`]; on failure a message is available from
//! [`mlie_last_error`] on the same thread. Output pointers are written only on
//! success. Matrices are row-major `double` arrays.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use mlie::catalog::{make_algebra_by_name, make_metric, CatalogKey, CatalogName, MetricVariant};
use mlie::curvature::{einstein_classify, ricci_general, ricci_operator};
use mlie::io::{parse_algebra, write_algebra};
use mlie::liealg::{center, derived_ideal, is_nilpotent};
use mlie::pseudolin::{classify_subspace, Matrix, Subspace, SubspaceTag};
use mlie::{tol, Error, Gram, LieAlgebra, MetricLieAlgebra, Verdict};

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MlieStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    NotApplicable = 3,
    ParseError = 4,
    DegenerateGram = 5,
    UnknownName = 6,
    BadParams = 7,
    /// A Rust panic was caught at the boundary; this is a bug.
    Internal = 99,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MlieVerdict {
    Einstein = 0,
    RicciFlat = 1,
    Flat = 2,
    NotEinstein = 3,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MlieSubspaceTag {
    EuclideanNondegenerate = 0,
    LorentzianNondegenerate = 1,
    IndefiniteNondegenerate = 2,
    Degenerate = 3,
}

#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct MlieReport {
    pub verdict: MlieVerdict,
    /// Einstein constant; zero unless `verdict` is Einstein, RicciFlat or Flat.
    pub lambda: f64,
    pub scalar: f64,
    pub einstein_residual: f64,
    pub curvature_max: f64,
    pub scale: f64,
    pub flat: bool,
}

#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct MlieSubspaceInfo {
    pub dim: usize,
    pub tag: MlieSubspaceTag,
    /// Dimension of `F ∩ F⊥`.
    pub null_dim: usize,
}

/// Opaque Lie algebra.
pub struct MlieAlgebra(LieAlgebra);

/// Opaque Lie algebra with a nondegenerate metric.
pub struct MlieMetric(MetricLieAlgebra);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> MlieStatus {
    match e {
        Error::Parse(_) => MlieStatus::ParseError,
        Error::NotApplicable(_) | Error::NotNilpotent => MlieStatus::NotApplicable,
        Error::DegenerateGram => MlieStatus::DegenerateGram,
        Error::UnknownName(_) => MlieStatus::UnknownName,
        Error::BadParams(_) | Error::ConstraintViolation { .. } => MlieStatus::BadParams,
        _ => MlieStatus::InvalidInput,
    }
}

struct Fail(MlieStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(MlieStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, turning errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> MlieStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => MlieStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            MlieStatus::Internal
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(MlieStatus::InvalidInput, format!("{what} is not UTF-8")))
}

unsafe fn put<T>(out: *mut *mut T, value: T) {
    *out = Box::into_raw(Box::new(value));
}

fn tag_code(t: SubspaceTag) -> MlieSubspaceTag {
    match t {
        SubspaceTag::EuclideanNondegenerate => MlieSubspaceTag::EuclideanNondegenerate,
        SubspaceTag::LorentzianNondegenerate => MlieSubspaceTag::LorentzianNondegenerate,
        SubspaceTag::IndefiniteNondegenerate => MlieSubspaceTag::IndefiniteNondegenerate,
        SubspaceTag::Degenerate => MlieSubspaceTag::Degenerate,
    }
}

fn check_tol(tol: f64) -> Result<(), Fail> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Fail(
            MlieStatus::InvalidInput,
            "tolerance must be positive and finite".into(),
        ))
    }
}

/// Message of the last failed call on this thread, or NULL. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn mlie_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn mlie_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Algebra from structure constants `c[(i*n + j)*n + k]` = coefficient of
/// `e_k` in `[e_i, e_j]`. The tensor must be antisymmetric in `(i, j)` and
/// satisfy the Jacobi identity.
///
/// # Safety
/// `c` points to `n*n*n` doubles; `out` is a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mlie_algebra_new(n: usize, c: *const f64, out: *mut *mut MlieAlgebra) -> MlieStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if n == 0 {
            return Err(Fail(MlieStatus::InvalidInput, "dimension must be positive".into()));
        }
        if c.is_null() {
            return Err(null("c"));
        }
        let c = std::slice::from_raw_parts(c, n * n * n);
        let at = |i: usize, j: usize, k: usize| c[(i * n + j) * n + k];
        let scale = c.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if (at(i, j, k) + at(j, i, k)).abs() > tol::LINALG * scale {
                        return Err(Fail(
                            MlieStatus::InvalidInput,
                            format!("c[{i}][{j}][{k}] and c[{j}][{i}][{k}] are not opposite"),
                        ));
                    }
                }
            }
        }
        let a = LieAlgebra::from_tensor(n, at)?.checked(tol::LINALG)?;
        put(out, MlieAlgebra(a));
        Ok(())
    })
}

/// Catalog algebra by name, e.g. `"L5_6"` or `"EX8"`.
///
/// # Safety
/// `name` is a NUL-terminated string; `out` is a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mlie_catalog_algebra(name: *const c_char, out: *mut *mut MlieAlgebra) -> MlieStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let a = make_algebra_by_name(str_arg(name, "name")?)?;
        put(out, MlieAlgebra(a));
        Ok(())
    })
}

/// # Safety
/// `a` is a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn mlie_algebra_dim(a: *const MlieAlgebra) -> usize {
    a.as_ref().map_or(0, |a| a.0.dim())
}

/// # Safety
/// `a` is a live handle; `out` is a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mlie_algebra_is_nilpotent(a: *const MlieAlgebra, tol: f64, out: *mut bool) -> MlieStatus {
    guard(|| {
        let a = a.as_ref().ok_or_else(|| null("algebra"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        check_tol(tol)?;
        *out = is_nilpotent(&a.0, tol);
        Ok(())
    })
}

/// # Safety
/// `a` is a handle from this library or NULL; it must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn mlie_algebra_free(a: *mut MlieAlgebra) {
    if !a.is_null() {
        drop(Box::from_raw(a));
    }
}

/// Equips `a` with the symmetric nondegenerate `gram` (`n*n`, row-major).
/// The algebra handle is copied and stays owned by the caller.
///
/// # Safety
/// `a` is a live handle; `gram` points to `n*n` doubles; `out` is valid.
#[no_mangle]
pub unsafe extern "C" fn mlie_metric_new(
    a: *const MlieAlgebra,
    gram: *const f64,
    out: *mut *mut MlieMetric,
) -> MlieStatus {
    guard(|| {
        let a = a.as_ref().ok_or_else(|| null("algebra"))?;
        if gram.is_null() {
            return Err(null("gram"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let n = a.0.dim();
        let g = Gram::new(Matrix::from_row_slice(n, n, std::slice::from_raw_parts(gram, n * n)))?;
        put(out, MlieMetric(MetricLieAlgebra::new(a.0.clone(), g)?));
        Ok(())
    })
}

/// Catalog metric. `variant` is NULL for the fixed examples `EX6`, `EX7`,
/// `EX8`; otherwise a variant such as `"m56"` with `count` named parameters.
/// Missing parameters take their documented defaults.
///
/// # Safety
/// Strings are NUL-terminated; `keys` and `values` point to `count` entries
/// (either may be NULL when `count` is 0); `out` is valid.
#[no_mangle]
pub unsafe extern "C" fn mlie_catalog_metric(
    name: *const c_char,
    variant: *const c_char,
    keys: *const *const c_char,
    values: *const f64,
    count: usize,
    out: *mut *mut MlieMetric,
) -> MlieStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let name: CatalogName = str_arg(name, "name")?.parse()?;
        let metric_variant = if variant.is_null() {
            None
        } else {
            Some(str_arg(variant, "variant")?.parse::<MetricVariant>()?)
        };
        let mut key = CatalogKey {
            name,
            metric_variant,
            params: Default::default(),
        };
        if count > 0 {
            if keys.is_null() || values.is_null() {
                return Err(null("keys or values"));
            }
            let ks = std::slice::from_raw_parts(keys, count);
            let vs = std::slice::from_raw_parts(values, count);
            for (k, v) in ks.iter().zip(vs) {
                key.params.insert(str_arg(*k, "parameter name")?.to_string(), *v);
            }
        }
        put(out, MlieMetric(make_metric(&key)?));
        Ok(())
    })
}

/// Parses an algebra file (JSON text) that carries a metric.
///
/// # Safety
/// `json` is NUL-terminated; `out` is valid.
#[no_mangle]
pub unsafe extern "C" fn mlie_metric_from_json(json: *const c_char, out: *mut *mut MlieMetric) -> MlieStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let doc = parse_algebra(str_arg(json, "json")?)?;
        put(out, MlieMetric(doc.metric_algebra()?));
        Ok(())
    })
}

/// Serializes to an algebra file. Release the string with [`mlie_string_free`].
///
/// # Safety
/// `m` is a live handle; `out` is valid.
#[no_mangle]
pub unsafe extern "C" fn mlie_metric_to_json(m: *const MlieMetric, out: *mut *mut c_char) -> MlieStatus {
    guard(|| {
        let m = m.as_ref().ok_or_else(|| null("metric"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let text = write_algebra(m.0.algebra(), Some(m.0.gram()), None);
        *out = CString::new(text).expect("JSON has no NUL").into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` comes from this library or is NULL.
#[no_mangle]
pub unsafe extern "C" fn mlie_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `m` is a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn mlie_metric_dim(m: *const MlieMetric) -> usize {
    m.as_ref().map_or(0, |m| m.0.dim())
}

/// Ricci operator, `n*n` row-major, computed by the route valid for any algebra.
///
/// # Safety
/// `m` is a live handle; `out` has room for `n*n` doubles.
#[no_mangle]
pub unsafe extern "C" fn mlie_metric_ricci(m: *const MlieMetric, out: *mut f64) -> MlieStatus {
    guard(|| {
        let m = m.as_ref().ok_or_else(|| null("metric"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let n = m.0.dim();
        let ric = ricci_operator(&m.0, &ricci_general(&m.0));
        let dst = std::slice::from_raw_parts_mut(out, n * n);
        for i in 0..n {
            for j in 0..n {
                dst[i * n + j] = ric[(i, j)];
            }
        }
        Ok(())
    })
}

/// Einstein, Ricci-flat and flatness verdicts at relative tolerance `tol`.
///
/// # Safety
/// `m` is a live handle; `out` is valid.
#[no_mangle]
pub unsafe extern "C" fn mlie_metric_classify(m: *const MlieMetric, tol: f64, out: *mut MlieReport) -> MlieStatus {
    guard(|| {
        let m = m.as_ref().ok_or_else(|| null("metric"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        check_tol(tol)?;
        let r = einstein_classify(&m.0, tol);
        let verdict = match r.verdict {
            Verdict::Einstein { .. } => MlieVerdict::Einstein,
            Verdict::RicciFlat => MlieVerdict::RicciFlat,
            Verdict::Flat => MlieVerdict::Flat,
            Verdict::NotEinstein => MlieVerdict::NotEinstein,
        };
        *out = MlieReport {
            verdict,
            lambda: r.einstein_lambda.unwrap_or(0.0),
            scalar: r.scalar,
            einstein_residual: r.einstein_residual,
            curvature_max: r.curvature_max,
            scale: r.scale,
            flat: r.flat,
        };
        Ok(())
    })
}

unsafe fn subspace_info(
    m: *const MlieMetric,
    tol: f64,
    out: *mut MlieSubspaceInfo,
    pick: fn(&LieAlgebra, f64) -> Subspace,
) -> MlieStatus {
    guard(|| {
        let m = m.as_ref().ok_or_else(|| null("metric"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        check_tol(tol)?;
        let f = pick(m.0.algebra(), tol);
        let c = classify_subspace(m.0.gram(), &f, tol)?;
        *out = MlieSubspaceInfo {
            dim: f.dim(),
            tag: tag_code(c.tag),
            null_dim: c.null_dim,
        };
        Ok(())
    })
}

/// Dimension and metric type of the center.
///
/// # Safety
/// `m` is a live handle; `out` is valid.
#[no_mangle]
pub unsafe extern "C" fn mlie_metric_center(m: *const MlieMetric, tol: f64, out: *mut MlieSubspaceInfo) -> MlieStatus {
    subspace_info(m, tol, out, center)
}

/// Dimension and metric type of the derived ideal.
///
/// # Safety
/// `m` is a live handle; `out` is valid.
#[no_mangle]
pub unsafe extern "C" fn mlie_metric_derived_ideal(
    m: *const MlieMetric,
    tol: f64,
    out: *mut MlieSubspaceInfo,
) -> MlieStatus {
    subspace_info(m, tol, out, derived_ideal)
}

/// # Safety
/// `m` is a handle from this library or NULL; it must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn mlie_metric_free(m: *mut MlieMetric) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}
