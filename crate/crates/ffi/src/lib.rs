//! C interface to the `metaplectic` library.
//!
//! Every object crosses the boundary as an opaque handle owned by the caller
//! and released with the matching `*_free` function. Every fallible call
//! returns an integer status (`MP_OK` on success); the message of the most
//! recent failure on the calling thread is available through
//! [`mp_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use metaplectic::distributions::{stft, wigner_general, wigner_normal_form_of, TfGrid};
use metaplectic::grid::{DiscreteSignal, GridSpec};
use metaplectic::norms::{mixed_norm, MixedNormParams, Weight};
use metaplectic::shift_invertible::{alpha, factorize, is_shift_invertible, CgTriple};
use metaplectic::symplectic::{is_symplectic, make_named, Named};
use metaplectic::{DynMatrix, Error, FloatMatrix, Rational, Scalar};
use num_complex::Complex64;

pub const MP_OK: c_int = 0;
pub const MP_ERR_NULL_POINTER: c_int = 1;
pub const MP_ERR_DIMENSION: c_int = 2;
pub const MP_ERR_SINGULAR: c_int = 3;
pub const MP_ERR_NOT_SYMMETRIC: c_int = 4;
pub const MP_ERR_NOT_SYMPLECTIC: c_int = 5;
pub const MP_ERR_NOT_SHIFT_INVERTIBLE: c_int = 6;
pub const MP_ERR_OFF_GRID: c_int = 7;
pub const MP_ERR_INVALID_GRID: c_int = 8;
pub const MP_ERR_ZERO_WINDOW: c_int = 9;
pub const MP_ERR_UNSUPPORTED_TAU: c_int = 10;
pub const MP_ERR_DECOMPOSITION: c_int = 11;
pub const MP_ERR_RESOURCE_CAP: c_int = 12;
pub const MP_ERR_INVALID_ARGUMENT: c_int = 13;
pub const MP_ERR_HYPOTHESIS: c_int = 14;
pub const MP_ERR_PARSE: c_int = 15;
pub const MP_ERR_IO: c_int = 16;
pub const MP_ERR_PANIC: c_int = 17;

pub const MP_NAMED_J: c_int = 0;
pub const MP_NAMED_L: c_int = 1;
pub const MP_NAMED_K: c_int = 2;
pub const MP_NAMED_STFT: c_int = 3;
pub const MP_NAMED_TAU_WIGNER: c_int = 4;
pub const MP_NAMED_PARTIAL_FOURIER2: c_int = 5;

/// A real matrix, exact rational or floating point.
pub struct MpMatrix(DynMatrix);

/// Complex samples on a centred grid.
pub struct MpSignal(DiscreteSignal);

/// A time-frequency distribution on the phase-space grid.
pub struct MpTfGrid(TfGrid);

thread_local! {
    static LAST_ERROR: RefCell<Vec<u8>> = const { RefCell::new(Vec::new()) };
}

fn set_last_error(msg: &str) {
    LAST_ERROR.with(|e| {
        let mut buf = msg.as_bytes().to_vec();
        buf.retain(|&b| b != 0);
        *e.borrow_mut() = buf;
    });
}

fn status_of(e: &Error) -> c_int {
    match e {
        Error::Dimension(_) => MP_ERR_DIMENSION,
        Error::Singular => MP_ERR_SINGULAR,
        Error::NotSymmetric => MP_ERR_NOT_SYMMETRIC,
        Error::NotSymplectic => MP_ERR_NOT_SYMPLECTIC,
        Error::NotShiftInvertible => MP_ERR_NOT_SHIFT_INVERTIBLE,
        Error::OffGrid(_) => MP_ERR_OFF_GRID,
        Error::InvalidGrid(_) => MP_ERR_INVALID_GRID,
        Error::ZeroWindow => MP_ERR_ZERO_WINDOW,
        Error::UnsupportedTau(_) => MP_ERR_UNSUPPORTED_TAU,
        Error::Decomposition(_) => MP_ERR_DECOMPOSITION,
        Error::ResourceCap(_) => MP_ERR_RESOURCE_CAP,
        Error::InvalidExponent(_) | Error::InvalidWeight(_) | Error::InvalidArgument(_) => MP_ERR_INVALID_ARGUMENT,
        Error::Hypothesis(_) => MP_ERR_HYPOTHESIS,
        Error::Parse(_) | Error::Json(_) => MP_ERR_PARSE,
        Error::Io(_) => MP_ERR_IO,
    }
}

enum Failure {
    Lib(Error),
    Null(&'static str),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type FfiResult = std::result::Result<(), Failure>;

/// Runs `body`, converting errors and panics into a status code.
fn guard(body: impl FnOnce() -> FfiResult) -> c_int {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => MP_OK,
        Ok(Err(Failure::Lib(e))) => {
            set_last_error(&e.to_string());
            status_of(&e)
        }
        Ok(Err(Failure::Null(what))) => {
            set_last_error(&format!("null pointer passed for {what}"));
            MP_ERR_NULL_POINTER
        }
        Err(_) => {
            set_last_error("internal panic");
            MP_ERR_PANIC
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Null(what))
}

unsafe fn out_ptr<'a, T>(p: *mut T, what: &'static str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or(Failure::Null(what))
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &'static str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn slice_mut<'a, T>(p: *mut T, len: usize, what: &'static str) -> Result<&'a mut [T], Failure> {
    if len == 0 {
        return Ok(&mut []);
    }
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    Ok(std::slice::from_raw_parts_mut(p, len))
}

unsafe fn path<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::Null("path"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure::Lib(Error::InvalidArgument("path is not valid UTF-8".into())))
}

fn check_len(got: usize, want: usize) -> FfiResult {
    if got != want {
        return Err(Error::Dimension(format!("buffer holds {got} values, expected {want}")).into());
    }
    Ok(())
}

/// Copies the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `len` bytes) and returns the full message length in bytes.
///
/// # Safety
/// `buf` must point to `len` writable bytes or be null when `len` is 0.
#[no_mangle]
pub unsafe extern "C" fn mp_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            ptr::copy_nonoverlapping(msg.as_ptr() as *const c_char, buf, n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

// ---------------------------------------------------------------- matrices

/// Builds a floating-point matrix from `rows * cols` row-major values.
///
/// # Safety
/// `data` must point to `rows * cols` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mp_matrix_from_f64(rows: usize, cols: usize, data: *const f64, out: *mut *mut MpMatrix) -> c_int {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let values = slice(data, rows * cols, "data")?;
        let m = FloatMatrix::from_vec(rows, cols, values.to_vec())?;
        *out = Box::into_raw(Box::new(MpMatrix(DynMatrix::Float(m))));
        Ok(())
    })
}

/// Builds an exact rational matrix from `rows * cols` row-major fractions
/// `num[i] / den[i]`.
///
/// # Safety
/// `num` and `den` must point to `rows * cols` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mp_matrix_from_rationals(
    rows: usize,
    cols: usize,
    num: *const i64,
    den: *const i64,
    out: *mut *mut MpMatrix,
) -> c_int {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let num = slice(num, rows * cols, "num")?;
        let den = slice(den, rows * cols, "den")?;
        if den.contains(&0) {
            return Err(Error::InvalidArgument("zero denominator".into()).into());
        }
        let data = num.iter().zip(den).map(|(&n, &d)| Rational::from_ratio(n, d)).collect();
        let m = metaplectic::RatMatrix::from_vec(rows, cols, data)?;
        *out = Box::into_raw(Box::new(MpMatrix(DynMatrix::Rational(m))));
        Ok(())
    })
}

/// Builds one of the standard rational matrices (`MP_NAMED_*`) at
/// half-dimension `d`; `tau_num / tau_den` is used by `MP_NAMED_TAU_WIGNER`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mp_matrix_named(kind: c_int, d: usize, tau_num: i64, tau_den: i64, out: *mut *mut MpMatrix) -> c_int {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let named = match kind {
            MP_NAMED_J => Named::J,
            MP_NAMED_L => Named::L,
            MP_NAMED_K => Named::K,
            MP_NAMED_STFT => Named::Stft,
            MP_NAMED_TAU_WIGNER => {
                if tau_den == 0 {
                    return Err(Error::InvalidArgument("zero denominator".into()).into());
                }
                Named::TauWigner(Rational::from_ratio(tau_num, tau_den))
            }
            MP_NAMED_PARTIAL_FOURIER2 => Named::PartialFourier2,
            other => return Err(Error::InvalidArgument(format!("unknown matrix kind {other}")).into()),
        };
        if d == 0 {
            return Err(Error::InvalidArgument("dimension must be positive".into()).into());
        }
        *out = Box::into_raw(Box::new(MpMatrix(DynMatrix::Rational(make_named(&named, d)?))));
        Ok(())
    })
}

/// Reads a matrix from a JSON file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mp_matrix_read_json(path_: *const c_char, out: *mut *mut MpMatrix) -> c_int {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = Box::into_raw(Box::new(MpMatrix(DynMatrix::read(path(path_)?)?)));
        Ok(())
    })
}

/// # Safety
/// `m` must be a live handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn mp_matrix_write_json(m: *const MpMatrix, path_: *const c_char) -> c_int {
    guard(|| {
        deref(m, "matrix")?.0.write(path(path_)?)?;
        Ok(())
    })
}

/// Writes the shape of `m` into `rows` and `cols`.
///
/// # Safety
/// `m` must be a live handle; `rows` and `cols` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mp_matrix_shape(m: *const MpMatrix, rows: *mut usize, cols: *mut usize) -> c_int {
    guard(|| {
        let (r, c) = deref(m, "matrix")?.0.shape();
        *out_ptr(rows, "rows")? = r;
        *out_ptr(cols, "cols")? = c;
        Ok(())
    })
}

/// Nonzero when the matrix holds exact rationals.
///
/// # Safety
/// `m` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn mp_matrix_is_rational(m: *const MpMatrix) -> c_int {
    m.as_ref().map_or(0, |m| matches!(m.0, DynMatrix::Rational(_)) as c_int)
}

/// Copies the entries (row-major, rounded to double) into `data`.
///
/// # Safety
/// `m` must be a live handle; `data` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn mp_matrix_to_f64(m: *const MpMatrix, data: *mut f64, len: usize) -> c_int {
    guard(|| {
        let f = deref(m, "matrix")?.0.to_f64();
        check_len(len, f.entries().len())?;
        slice_mut(data, len, "data")?.copy_from_slice(f.entries());
        Ok(())
    })
}

/// # Safety
/// `m` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mp_matrix_free(m: *mut MpMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Writes 1 to `result` when `m` is symplectic (exactly for rational
/// matrices, within `tol` for floating-point ones), else 0.
///
/// # Safety
/// `m` must be a live handle; `result` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mp_is_symplectic(m: *const MpMatrix, tol: f64, result: *mut c_int) -> c_int {
    guard(|| {
        let m = &deref(m, "matrix")?.0;
        let (r, c) = m.shape();
        if r != c || r % 2 != 0 || r == 0 {
            return Err(Error::Dimension(format!("{r}x{c} is not square of even size")).into());
        }
        let ok = match m {
            DynMatrix::Rational(m) => is_symplectic(m, r / 2, 0.0)?,
            DynMatrix::Float(m) => is_symplectic(m, r / 2, tol)?,
        };
        *out_ptr(result, "result")? = ok as c_int;
        Ok(())
    })
}

/// # Safety
/// `m` must be a live handle; `result` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mp_is_shift_invertible(m: *const MpMatrix, result: *mut c_int) -> c_int {
    guard(|| {
        let ok = match &deref(m, "matrix")?.0 {
            DynMatrix::Rational(m) => is_shift_invertible(m)?,
            DynMatrix::Float(m) => is_shift_invertible(m)?,
        };
        *out_ptr(result, "result")? = ok as c_int;
        Ok(())
    })
}

/// Factors a shift-invertible `A` as `alpha(E, C, S)`; the three new handles
/// are written to `e`, `c` and `s`.
///
/// # Safety
/// `a` must be a live handle; `e`, `c`, `s` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mp_factorize(
    a: *const MpMatrix,
    e: *mut *mut MpMatrix,
    c: *mut *mut MpMatrix,
    s: *mut *mut MpMatrix,
) -> c_int {
    guard(|| {
        let a = &deref(a, "matrix")?.0;
        let (e, c, s) = (out_ptr(e, "e")?, out_ptr(c, "c")?, out_ptr(s, "s")?);
        let parts: [DynMatrix; 3] = match a {
            DynMatrix::Rational(m) => {
                let t = factorize(m)?;
                [t.e.into(), t.c.into(), t.s.into()]
            }
            DynMatrix::Float(m) => {
                let t = factorize(m)?;
                [t.e.into(), t.c.into(), t.s.into()]
            }
        };
        let [pe, pc, ps] = parts;
        *e = Box::into_raw(Box::new(MpMatrix(pe)));
        *c = Box::into_raw(Box::new(MpMatrix(pc)));
        *s = Box::into_raw(Box::new(MpMatrix(ps)));
        Ok(())
    })
}

/// `alpha(E, C, S)`; exact when all three inputs are rational.
///
/// # Safety
/// `e`, `c`, `s` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mp_alpha(
    e: *const MpMatrix,
    c: *const MpMatrix,
    s: *const MpMatrix,
    out: *mut *mut MpMatrix,
) -> c_int {
    guard(|| {
        let (e, c, s) = (&deref(e, "e")?.0, &deref(c, "c")?.0, &deref(s, "s")?.0);
        let out = out_ptr(out, "out")?;
        let a: DynMatrix = match (e, c, s) {
            (DynMatrix::Rational(e), DynMatrix::Rational(c), DynMatrix::Rational(s)) => {
                alpha(&CgTriple::new(e.clone(), c.clone(), s.clone())?)?.into()
            }
            _ => alpha(&CgTriple::new(e.to_f64(), c.to_f64(), s.to_f64())?)?.into(),
        };
        *out = Box::into_raw(Box::new(MpMatrix(a)));
        Ok(())
    })
}

// ----------------------------------------------------------------- signals

/// Unit-norm Gaussian `(2a)^{d/4} e^{-pi a |x - x0|^2} e^{2 pi i xi0 x}` on the
/// self-dual grid with `n` points per axis.
///
/// # Safety
/// `x0` and `xi0` must hold `d` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mp_signal_gaussian(
    d: usize,
    n: usize,
    x0: *const f64,
    xi0: *const f64,
    width: f64,
    out: *mut *mut MpSignal,
) -> c_int {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let spec = GridSpec::self_dual(d, n)?;
        let sig = DiscreteSignal::gaussian_scaled(spec, slice(x0, d, "x0")?, slice(xi0, d, "xi0")?, width)?;
        *out = Box::into_raw(Box::new(MpSignal(sig)));
        Ok(())
    })
}

/// Signal from `n^d` samples given as separate real and imaginary parts, on
/// the grid with `n` points per axis over `[-t/2, t/2)`.
///
/// # Safety
/// `re` and `im` must hold `len` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mp_signal_from_samples(
    d: usize,
    n: usize,
    t: f64,
    re: *const f64,
    im: *const f64,
    len: usize,
    out: *mut *mut MpSignal,
) -> c_int {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let spec = GridSpec::new(d, n, t)?;
        check_len(len, spec.len())?;
        let (re, im) = (slice(re, len, "re")?, slice(im, len, "im")?);
        let samples = re.iter().zip(im).map(|(&a, &b)| Complex64::new(a, b)).collect();
        *out = Box::into_raw(Box::new(MpSignal(DiscreteSignal::new(spec, samples)?)));
        Ok(())
    })
}

/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mp_signal_read_csv(path_: *const c_char, out: *mut *mut MpSignal) -> c_int {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = Box::into_raw(Box::new(MpSignal(DiscreteSignal::read_csv(path(path_)?)?)));
        Ok(())
    })
}

/// # Safety
/// `f` must be a live handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn mp_signal_write_csv(f: *const MpSignal, path_: *const c_char) -> c_int {
    guard(|| {
        deref(f, "signal")?.0.write_csv(path(path_)?)?;
        Ok(())
    })
}

/// Number of samples of `f` (0 for a null handle).
///
/// # Safety
/// `f` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mp_signal_len(f: *const MpSignal) -> usize {
    f.as_ref().map_or(0, |f| f.0.samples().len())
}

/// Copies the samples into `re` and `im`.
///
/// # Safety
/// `f` must be a live handle; `re` and `im` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn mp_signal_samples(f: *const MpSignal, re: *mut f64, im: *mut f64, len: usize) -> c_int {
    guard(|| copy_samples(deref(f, "signal")?.0.samples(), re, im, len))
}

unsafe fn copy_samples(src: &[Complex64], re: *mut f64, im: *mut f64, len: usize) -> FfiResult {
    check_len(len, src.len())?;
    let (re, im) = (slice_mut(re, len, "re")?, slice_mut(im, len, "im")?);
    for (i, z) in src.iter().enumerate() {
        re[i] = z.re;
        im[i] = z.im;
    }
    Ok(())
}

/// # Safety
/// `f` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mp_signal_free(f: *mut MpSignal) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

// ------------------------------------------------------------ distributions

/// Short-time Fourier transform `V_g f` by direct summation.
///
/// # Safety
/// `f` and `g` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mp_stft(f: *const MpSignal, g: *const MpSignal, out: *mut *mut MpTfGrid) -> c_int {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let w = stft(&deref(f, "f")?.0, &deref(g, "g")?.0)?;
        *out = Box::into_raw(Box::new(MpTfGrid(w)));
        Ok(())
    })
}

/// `W_A(f, g)`, through the generator pipeline or, when `normal_form` is
/// nonzero, through the shift-invertible normal form. Defined up to a unit
/// phase.
///
/// # Safety
/// `a`, `f`, `g` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mp_wigner(
    a: *const MpMatrix,
    f: *const MpSignal,
    g: *const MpSignal,
    normal_form: c_int,
    out: *mut *mut MpTfGrid,
) -> c_int {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let (a, f, g) = (&deref(a, "matrix")?.0, &deref(f, "f")?.0, &deref(g, "g")?.0);
        let w = match (a, normal_form != 0) {
            (DynMatrix::Rational(m), false) => wigner_general(m, f, g)?,
            (DynMatrix::Float(m), false) => wigner_general(m, f, g)?,
            (DynMatrix::Rational(m), true) => wigner_normal_form_of(m, f, g)?,
            (DynMatrix::Float(m), true) => wigner_normal_form_of(m, f, g)?,
        };
        *out = Box::into_raw(Box::new(MpTfGrid(w)));
        Ok(())
    })
}

/// Number of phase-space samples (0 for a null handle).
///
/// # Safety
/// `w` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mp_tf_grid_len(w: *const MpTfGrid) -> usize {
    w.as_ref().map_or(0, |w| w.0.spec().len())
}

/// Copies the values (row-major over `(x, xi)`) into `re` and `im`.
///
/// # Safety
/// `w` must be a live handle; `re` and `im` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn mp_tf_grid_values(w: *const MpTfGrid, re: *mut f64, im: *mut f64, len: usize) -> c_int {
    guard(|| copy_samples(deref(w, "grid")?.0.values().samples(), re, im, len))
}

/// Writes the raw little-endian binary file plus its JSON sidecar.
///
/// # Safety
/// `w` must be a live handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn mp_tf_grid_write_bin(w: *const MpTfGrid, path_: *const c_char) -> c_int {
    guard(|| {
        deref(w, "grid")?.0.write_bin(path(path_)?)?;
        Ok(())
    })
}

/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mp_tf_grid_read_bin(path_: *const c_char, out: *mut *mut MpTfGrid) -> c_int {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = Box::into_raw(Box::new(MpTfGrid(TfGrid::read_bin(path(path_)?)?)));
        Ok(())
    })
}

/// Weighted mixed norm with the polynomial weight `(1 + |z|)^s` (`s = 0`
/// for no weight); pass `INFINITY` for a supremum exponent.
///
/// # Safety
/// `w` must be a live handle; `result` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mp_mixed_norm(w: *const MpTfGrid, p: f64, q: f64, s: f64, result: *mut f64) -> c_int {
    guard(|| {
        let params = MixedNormParams::new(p, q, Weight::polynomial(s)?)?;
        *out_ptr(result, "result")? = mixed_norm(&deref(w, "grid")?.0, &params)?;
        Ok(())
    })
}

/// # Safety
/// `w` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mp_tf_grid_free(w: *mut MpTfGrid) {
    if !w.is_null() {
        drop(Box::from_raw(w));
    }
}
