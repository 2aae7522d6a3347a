//! Shift-invertible `4d x 4d` symplectic matrices: the data `(E_A, M_A, G_A)`,
//! the factorization `A = D_{E^-1} V_M V_L^T Lift(G)` and its inverse `alpha`.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{Scalar, ScalarMode};
use crate::symplectic::{
    chirp, chirp_transpose, conj_antidiagonal, dilation, is_symplectic, lift, standard_j, submatrices, swap_l,
    Submatrices,
};

/// Relative cutoff below which a float `det E` counts as zero.
pub const SINGULAR_REL_TOL: f64 = 1e-10;

/// `(E, C, S)` with `E` invertible, `C` symmetric (both `2d x 2d`) and `S`
/// a `2d x 2d` symplectic matrix acting on the window variable via `Lift`.
#[derive(Debug, Clone, PartialEq)]
pub struct CgTriple<T> {
    pub e: Matrix<T>,
    pub c: Matrix<T>,
    pub s: Matrix<T>,
}

impl<T: Scalar> CgTriple<T> {
    pub fn new(e: Matrix<T>, c: Matrix<T>, s: Matrix<T>) -> Result<Self> {
        let t = CgTriple { e, c, s };
        t.validate()?;
        Ok(t)
    }

    /// Half-dimension `d` of the underlying `Sp(d)`.
    pub fn half_dim(&self) -> usize {
        self.e.rows() / 2
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.e.rows();
        if n == 0 || !n.is_multiple_of(2) {
            return Err(Error::Dimension("E must be 2d x 2d".into()));
        }
        for (m, name) in [(&self.e, "E"), (&self.c, "C"), (&self.s, "S")] {
            if m.shape() != (n, n) {
                return Err(Error::Dimension(format!("{name} must be {n}x{n}")));
            }
        }
        if !is_invertible(&self.e) {
            return Err(Error::Singular);
        }
        if !self.c.is_symmetric(float_tol(&self.c)) {
            return Err(Error::NotSymmetric);
        }
        if !is_symplectic(&self.s, n / 2, float_tol(&self.s))? {
            return Err(Error::NotSymplectic);
        }
        Ok(())
    }
}

/// Everything the normal form of a shift-invertible matrix needs.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftInvertibleData<T> {
    pub e: Matrix<T>,
    /// Symmetric matrix `M_A = E^T F - [[0, I], [0, 0]]`.
    pub m: Matrix<T>,
    /// Symplectic matrix `G_A = L E^-1 Ɛ`.
    pub g: Matrix<T>,
    /// Projection `J conj(G_A)` of the window deformation.
    pub deformation: Matrix<T>,
}

impl<T: Scalar> ShiftInvertibleData<T> {
    pub fn from_matrix(a: &Matrix<T>) -> Result<Self> {
        let g = compute_ga(a)?;
        Ok(ShiftInvertibleData {
            e: submatrices(a)?.e,
            m: compute_ma(a)?,
            deformation: deformation_of(&g)?,
            g,
        })
    }
}

fn float_tol<T: Scalar>(m: &Matrix<T>) -> f64 {
    match T::MODE {
        ScalarMode::Rational => 0.0,
        ScalarMode::Float => 1e-10 * m.max_norm().max(1.0).powi(2),
    }
}

/// Exact in rational mode; scale-aware `|det| > 1e-10 ||E||_max^n` in float mode.
pub fn is_invertible<T: Scalar>(e: &Matrix<T>) -> bool {
    if !e.is_square() {
        return false;
    }
    match T::MODE {
        ScalarMode::Rational => e.rank() == e.rows(),
        ScalarMode::Float => {
            let det = match e.determinant() {
                Ok(d) => d.magnitude(),
                Err(_) => return false,
            };
            det > SINGULAR_REL_TOL * e.max_norm().powi(e.rows() as i32)
        }
    }
}

fn require_symplectic_4d<T: Scalar>(a: &Matrix<T>) -> Result<usize> {
    if !a.is_square() || !a.rows().is_multiple_of(4) || a.rows() == 0 {
        return Err(Error::Dimension(format!(
            "expected a 4d x 4d matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let d = a.rows() / 4;
    if !is_symplectic(a, 2 * d, float_tol(a))? {
        return Err(Error::NotSymplectic);
    }
    Ok(d)
}

pub fn is_shift_invertible<T: Scalar>(a: &Matrix<T>) -> Result<bool> {
    require_symplectic_4d(a)?;
    Ok(is_invertible(&submatrices(a)?.e))
}

fn upper_corner<T: Scalar>(d: usize) -> Matrix<T> {
    let mut u = Matrix::zeros(2 * d, 2 * d);
    for k in 0..d {
        u[(k, d + k)] = T::one();
    }
    u
}

/// `M_A = E^T F - [[0, I], [0, 0]]`; symmetric whenever `A` is symplectic.
pub fn compute_ma<T: Scalar>(a: &Matrix<T>) -> Result<Matrix<T>> {
    let s = submatrices(a)?;
    let d = s.half_dim();
    s.e.transpose().mul(&s.f)?.sub(&upper_corner(d))
}

/// `G_A = L E^-1 Ɛ`.
pub fn compute_ga<T: Scalar>(a: &Matrix<T>) -> Result<Matrix<T>> {
    require_symplectic_4d(a)?;
    let s = submatrices(a)?;
    if !is_invertible(&s.e) {
        return Err(Error::NotShiftInvertible);
    }
    let d = s.half_dim();
    swap_l::<T>(d).mul(&s.e.inverse()?)?.mul(&s.e_cal)
}

/// `D_{E^-1} V_C V_L^T Lift(S)`.
pub fn alpha<T: Scalar>(t: &CgTriple<T>) -> Result<Matrix<T>> {
    t.validate()?;
    alpha_unchecked(&t.e, &t.c, &t.s)
}

fn alpha_unchecked<T: Scalar>(e: &Matrix<T>, c: &Matrix<T>, s: &Matrix<T>) -> Result<Matrix<T>> {
    let d = e.rows() / 2;
    let factors = [
        dilation(&e.inverse()?)?,
        chirp(c)?,
        chirp_transpose(&swap_l::<T>(d))?,
        lift(s)?,
    ];
    Matrix::product(factors.iter())
}

/// Returns `(E_A, C, G_A)` with `alpha(E_A, C, G_A) = A`. The chirp `C` is
/// whichever of `M_A` and `M_A + L` reproduces `A`.
pub fn factorize<T: Scalar>(a: &Matrix<T>) -> Result<CgTriple<T>> {
    let g = compute_ga(a)?;
    let e = submatrices(a)?.e;
    let m = compute_ma(a)?;
    let d = e.rows() / 2;
    let tol = float_tol(a);
    // M_A is the right slot for every matrix we have met; M_A + L is kept as
    // a fallback so a wrong guess shows up as an error rather than silently.
    for c in [m.clone(), m.add(&swap_l(d))?] {
        if !c.is_symmetric(tol) {
            continue;
        }
        if alpha_unchecked(&e, &c, &g)?.approx_eq(a, tol) {
            return Ok(CgTriple { e, c, s: g });
        }
    }
    Err(Error::Decomposition(
        "no chirp candidate reproduces the matrix".into(),
    ))
}

/// The four submatrices of `alpha(E, M, G)`, computed directly.
pub fn reconstruct_blocks<T: Scalar>(e: &Matrix<T>, m: &Matrix<T>, g: &Matrix<T>) -> Result<Submatrices<T>> {
    if !e.is_square() || !e.rows().is_multiple_of(2) || m.shape() != e.shape() || g.shape() != e.shape() {
        return Err(Error::Dimension("E, M, G must all be 2d x 2d".into()));
    }
    let d = e.rows() / 2;
    let l = swap_l::<T>(d);
    let e_inv_t = e.inverse()?.transpose();
    let mut lower = Matrix::zeros(2 * d, 2 * d);
    for k in 0..d {
        lower[(d + k, k)] = T::one();
    }
    let lg = l.mul(g)?;
    Ok(Submatrices {
        e: e.clone(),
        f: e_inv_t.mul(&m.add(&upper_corner(d))?)?,
        e_cal: e.mul(&lg)?,
        f_cal: e_inv_t.mul(&m.add(&lower)?)?.mul(&lg)?,
    })
}

fn deformation_of<T: Scalar>(g: &Matrix<T>) -> Result<Matrix<T>> {
    standard_j::<T>(g.rows() / 2).mul(&conj_antidiagonal(g)?)
}

/// Symplectic projection `J conj(G_A)` of the window deformation.
pub fn deformation<T: Scalar>(a: &Matrix<T>) -> Result<Matrix<T>> {
    deformation_of(&compute_ga(a)?)
}

/// The matrix whose normal form has parameters `(E, C, deformation)`, i.e.
/// `alpha(E, C - L, S)` with `J conj(S) = deformation`.
pub fn normal_form_matrix<T: Scalar>(e: &Matrix<T>, c: &Matrix<T>, deform: &Matrix<T>) -> Result<Matrix<T>> {
    let d = e.rows() / 2;
    // J conj(J conj(S)) = J (-J) S = S
    let s = standard_j::<T>(deform.rows() / 2).mul(&conj_antidiagonal(deform)?)?;
    alpha(&CgTriple::new(e.clone(), c.sub(&swap_l(d))?, s)?)
}
