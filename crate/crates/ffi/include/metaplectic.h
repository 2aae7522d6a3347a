#ifndef METAPLECTIC_H
#define METAPLECTIC_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stddef.h>
#include <stdint.h>

#define MP_OK 0

#define MP_ERR_NULL_POINTER 1

#define MP_ERR_DIMENSION 2

#define MP_ERR_SINGULAR 3

#define MP_ERR_NOT_SYMMETRIC 4

#define MP_ERR_NOT_SYMPLECTIC 5

#define MP_ERR_NOT_SHIFT_INVERTIBLE 6

#define MP_ERR_OFF_GRID 7

#define MP_ERR_INVALID_GRID 8

#define MP_ERR_ZERO_WINDOW 9

#define MP_ERR_UNSUPPORTED_TAU 10

#define MP_ERR_DECOMPOSITION 11

#define MP_ERR_RESOURCE_CAP 12

#define MP_ERR_INVALID_ARGUMENT 13

#define MP_ERR_HYPOTHESIS 14

#define MP_ERR_PARSE 15

#define MP_ERR_IO 16

#define MP_ERR_PANIC 17

#define MP_NAMED_J 0

#define MP_NAMED_L 1

#define MP_NAMED_K 2

#define MP_NAMED_STFT 3

#define MP_NAMED_TAU_WIGNER 4

#define MP_NAMED_PARTIAL_FOURIER2 5

/*
 A real matrix, exact rational or floating point.
 */
typedef struct MpMatrix MpMatrix;

/*
 Complex samples on a centred grid.
 */
typedef struct MpSignal MpSignal;

/*
 A time-frequency distribution on the phase-space grid.
 */
typedef struct MpTfGrid MpTfGrid;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Copies the last error message of this thread into `buf` (NUL-terminated,
 truncated to `len` bytes) and returns the full message length in bytes.

 # Safety
 `buf` must point to `len` writable bytes or be null when `len` is 0.
 */
uintptr_t mp_last_error_message(char *buf, uintptr_t len);

/*
 Builds a floating-point matrix from `rows * cols` row-major values.

 # Safety
 `data` must point to `rows * cols` doubles; `out` must be writable.
 */
int mp_matrix_from_f64(uintptr_t rows, uintptr_t cols, const double *data, struct MpMatrix **out);

/*
 Builds an exact rational matrix from `rows * cols` row-major fractions
 `num[i] / den[i]`.

 # Safety
 `num` and `den` must point to `rows * cols` values; `out` must be writable.
 */
int mp_matrix_from_rationals(uintptr_t rows,
                             uintptr_t cols,
                             const int64_t *num,
                             const int64_t *den,
                             struct MpMatrix **out);

/*
 Builds one of the standard rational matrices (`MP_NAMED_*`) at
 half-dimension `d`; `tau_num / tau_den` is used by `MP_NAMED_TAU_WIGNER`.

 # Safety
 `out` must be writable.
 */
int mp_matrix_named(int kind, uintptr_t d, int64_t tau_num, int64_t tau_den, struct MpMatrix **out);

/*
 Reads a matrix from a JSON file.

 # Safety
 `path` must be a NUL-terminated string; `out` must be writable.
 */
int mp_matrix_read_json(const char *path_, struct MpMatrix **out);

/*
 # Safety
 `m` must be a live handle and `path` a NUL-terminated string.
 */
int mp_matrix_write_json(const struct MpMatrix *m, const char *path_);

/*
 Writes the shape of `m` into `rows` and `cols`.

 # Safety
 `m` must be a live handle; `rows` and `cols` must be writable.
 */
int mp_matrix_shape(const struct MpMatrix *m, uintptr_t *rows, uintptr_t *cols);

/*
 Nonzero when the matrix holds exact rationals.

 # Safety
 `m` must be a live handle.
 */
int mp_matrix_is_rational(const struct MpMatrix *m);

/*
 Copies the entries (row-major, rounded to double) into `data`.

 # Safety
 `m` must be a live handle; `data` must hold `len` doubles.
 */
int mp_matrix_to_f64(const struct MpMatrix *m, double *data, uintptr_t len);

/*
 # Safety
 `m` must be null or a handle not yet freed.
 */
void mp_matrix_free(struct MpMatrix *m);

/*
 Writes 1 to `result` when `m` is symplectic (exactly for rational
 matrices, within `tol` for floating-point ones), else 0.

 # Safety
 `m` must be a live handle; `result` must be writable.
 */
int mp_is_symplectic(const struct MpMatrix *m, double tol, int *result);

/*
 # Safety
 `m` must be a live handle; `result` must be writable.
 */
int mp_is_shift_invertible(const struct MpMatrix *m, int *result);

/*
 Factors a shift-invertible `A` as `alpha(E, C, S)`; the three new handles
 are written to `e`, `c` and `s`.

 # Safety
 `a` must be a live handle; `e`, `c`, `s` must be writable.
 */
int mp_factorize(const struct MpMatrix *a,
                 struct MpMatrix **e,
                 struct MpMatrix **c,
                 struct MpMatrix **s);

/*
 `alpha(E, C, S)`; exact when all three inputs are rational.

 # Safety
 `e`, `c`, `s` must be live handles; `out` must be writable.
 */
int mp_alpha(const struct MpMatrix *e,
             const struct MpMatrix *c,
             const struct MpMatrix *s,
             struct MpMatrix **out);

/*
 Unit-norm Gaussian `(2a)^{d/4} e^{-pi a |x - x0|^2} e^{2 pi i xi0 x}` on the
 self-dual grid with `n` points per axis.

 # Safety
 `x0` and `xi0` must hold `d` doubles; `out` must be writable.
 */
int mp_signal_gaussian(uintptr_t d,
                       uintptr_t n,
                       const double *x0,
                       const double *xi0,
                       double width,
                       struct MpSignal **out);

/*
 Signal from `n^d` samples given as separate real and imaginary parts, on
 the grid with `n` points per axis over `[-t/2, t/2)`.

 # Safety
 `re` and `im` must hold `len` doubles; `out` must be writable.
 */
int mp_signal_from_samples(uintptr_t d,
                           uintptr_t n,
                           double t,
                           const double *re,
                           const double *im,
                           uintptr_t len,
                           struct MpSignal **out);

/*
 # Safety
 `path` must be a NUL-terminated string; `out` must be writable.
 */
int mp_signal_read_csv(const char *path_, struct MpSignal **out);

/*
 # Safety
 `f` must be a live handle and `path` a NUL-terminated string.
 */
int mp_signal_write_csv(const struct MpSignal *f, const char *path_);

/*
 Number of samples of `f` (0 for a null handle).

 # Safety
 `f` must be null or a live handle.
 */
uintptr_t mp_signal_len(const struct MpSignal *f);

/*
 Copies the samples into `re` and `im`.

 # Safety
 `f` must be a live handle; `re` and `im` must hold `len` doubles.
 */
int mp_signal_samples(const struct MpSignal *f, double *re, double *im, uintptr_t len);

/*
 # Safety
 `f` must be null or a handle not yet freed.
 */
void mp_signal_free(struct MpSignal *f);

/*
 Short-time Fourier transform `V_g f` by direct summation.

 # Safety
 `f` and `g` must be live handles; `out` must be writable.
 */
int mp_stft(const struct MpSignal *f, const struct MpSignal *g, struct MpTfGrid **out);

/*
 `W_A(f, g)`, through the generator pipeline or, when `normal_form` is
 nonzero, through the shift-invertible normal form. Defined up to a unit
 phase.

 # Safety
 `a`, `f`, `g` must be live handles; `out` must be writable.
 */
int mp_wigner(const struct MpMatrix *a,
              const struct MpSignal *f,
              const struct MpSignal *g,
              int normal_form,
              struct MpTfGrid **out);

/*
 Number of phase-space samples (0 for a null handle).

 # Safety
 `w` must be null or a live handle.
 */
uintptr_t mp_tf_grid_len(const struct MpTfGrid *w);

/*
 Copies the values (row-major over `(x, xi)`) into `re` and `im`.

 # Safety
 `w` must be a live handle; `re` and `im` must hold `len` doubles.
 */
int mp_tf_grid_values(const struct MpTfGrid *w, double *re, double *im, uintptr_t len);

/*
 Writes the raw little-endian binary file plus its JSON sidecar.

 # Safety
 `w` must be a live handle and `path` a NUL-terminated string.
 */
int mp_tf_grid_write_bin(const struct MpTfGrid *w, const char *path_);

/*
 # Safety
 `path` must be a NUL-terminated string; `out` must be writable.
 */
int mp_tf_grid_read_bin(const char *path_, struct MpTfGrid **out);

/*
 Weighted mixed norm with the polynomial weight `(1 + |z|)^s` (`s = 0`
 for no weight); pass `INFINITY` for a supremum exponent.

 # Safety
 `w` must be a live handle; `result` must be writable.
 */
int mp_mixed_norm(const struct MpTfGrid *w, double p, double q, double s, double *result);

/*
 # Safety
 `w` must be null or a handle not yet freed.
 */
void mp_tf_grid_free(struct MpTfGrid *w);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* METAPLECTIC_H */
