//! Named symplectic matrices, the symplectic test, and the block structure of
//! `4d x 4d` matrices used by metaplectic Wigner distributions.
//!
//! Conventions, with `d x d` blocks:
//!
//! ```text
//! J   = [[0, I], [-I, 0]]        D_E = [[E^-1, 0], [0, E^T]]
//! V_C = [[I, 0], [C, I]]         L   = [[0, I], [I, 0]]
//! ```

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// The matrices that can be built by [`make_named`].
#[derive(Debug, Clone)]
pub enum Named<T> {
    /// Standard symplectic form, `2d x 2d`.
    J,
    /// `D_E` for an invertible `d x d` matrix `E`.
    Dilation(Matrix<T>),
    /// `V_C` for a symmetric `d x d` matrix `C`.
    Chirp(Matrix<T>),
    /// `V_C^T` for a symmetric `d x d` matrix `C`.
    ChirpTranspose(Matrix<T>),
    /// The swap `L`, `2d x 2d`. Not symplectic.
    L,
    /// The permutation `K` relating the four submatrices to `A`. Not symplectic.
    K,
    /// Matrix of the short-time Fourier transform, `4d x 4d`.
    Stft,
    /// Matrix of the tau-Wigner distribution, `4d x 4d`.
    TauWigner(T),
    /// Partial Fourier transform in the second variable, `4d x 4d`.
    PartialFourier2,
    /// Lift of a `2d x 2d` symplectic matrix to `4d x 4d`.
    Lift(Matrix<T>),
}

pub fn standard_j<T: Scalar>(d: usize) -> Matrix<T> {
    let i = Matrix::identity(d);
    let z = Matrix::zeros(d, d);
    Matrix::block2(&z, &i, &i.neg(), &z).expect("square blocks")
}

pub fn swap_l<T: Scalar>(d: usize) -> Matrix<T> {
    let i = Matrix::identity(d);
    let z = Matrix::zeros(d, d);
    Matrix::block2(&z, &i, &i, &z).expect("square blocks")
}

pub fn dilation<T: Scalar>(e: &Matrix<T>) -> Result<Matrix<T>> {
    if !e.is_square() {
        return Err(Error::Dimension("D_E needs a square E".into()));
    }
    let z = Matrix::zeros(e.rows(), e.rows());
    Matrix::block2(&e.inverse()?, &z, &z, &e.transpose())
}

fn check_symmetric<T: Scalar>(c: &Matrix<T>) -> Result<()> {
    if !c.is_square() {
        return Err(Error::Dimension("chirp matrix must be square".into()));
    }
    if !c.is_symmetric(1e-12) {
        return Err(Error::NotSymmetric);
    }
    Ok(())
}

pub fn chirp<T: Scalar>(c: &Matrix<T>) -> Result<Matrix<T>> {
    check_symmetric(c)?;
    let i = Matrix::identity(c.rows());
    let z = Matrix::zeros(c.rows(), c.rows());
    Matrix::block2(&i, &z, c, &i)
}

pub fn chirp_transpose<T: Scalar>(c: &Matrix<T>) -> Result<Matrix<T>> {
    Ok(chirp(c)?.transpose())
}

/// Builds a `4d x 4d` matrix from a 4x4 pattern of scalar multiples of `I_d`.
fn scalar_blocks<T: Scalar>(d: usize, pattern: [[T; 4]; 4]) -> Matrix<T> {
    let mut m = Matrix::zeros(4 * d, 4 * d);
    for (bi, row) in pattern.iter().enumerate() {
        for (bj, c) in row.iter().enumerate() {
            for k in 0..d {
                m[(bi * d + k, bj * d + k)] = c.clone();
            }
        }
    }
    m
}

pub fn stft_matrix<T: Scalar>(d: usize) -> Matrix<T> {
    let (o, z, m) = (T::one(), T::zero(), -T::one());
    scalar_blocks(
        d,
        [
            [o.clone(), m.clone(), z.clone(), z.clone()],
            [z.clone(), z.clone(), o.clone(), o.clone()],
            [z.clone(), z.clone(), z.clone(), m.clone()],
            [m, z.clone(), z.clone(), z],
        ],
    )
}

pub fn tau_matrix<T: Scalar>(d: usize, tau: &T) -> Matrix<T> {
    let (o, z) = (T::one(), T::zero());
    let t = tau.clone();
    let s = o.clone() - t.clone();
    scalar_blocks(
        d,
        [
            [s.clone(), t.clone(), z.clone(), z.clone()],
            [z.clone(), z.clone(), t, -s],
            [z.clone(), z.clone(), o.clone(), o.clone()],
            [-o.clone(), o, z.clone(), z],
        ],
    )
}

pub fn partial_fourier2_matrix<T: Scalar>(d: usize) -> Matrix<T> {
    let (o, z, m) = (T::one(), T::zero(), -T::one());
    scalar_blocks(
        d,
        [
            [o.clone(), z.clone(), z.clone(), z.clone()],
            [z.clone(), z.clone(), z.clone(), o.clone()],
            [z.clone(), z.clone(), o, z.clone()],
            [z.clone(), m, z.clone(), z],
        ],
    )
}

pub fn k_matrix<T: Scalar>(d: usize) -> Matrix<T> {
    let (o, z) = (T::one(), T::zero());
    scalar_blocks(
        d,
        [
            [o.clone(), z.clone(), z.clone(), z.clone()],
            [z.clone(), z.clone(), o.clone(), z.clone()],
            [z.clone(), o.clone(), z.clone(), z.clone()],
            [z.clone(), z.clone(), z, o],
        ],
    )
}

/// `Lift(G)`: acts as the identity on the first variable and as `G` on the
/// second one. `G` must be `2d x 2d`; symplecticity is checked by
/// [`make_named`], not here.
pub fn lift<T: Scalar>(g: &Matrix<T>) -> Result<Matrix<T>> {
    if !g.is_square() || !g.rows().is_multiple_of(2) {
        return Err(Error::Dimension("Lift needs a 2d x 2d matrix".into()));
    }
    let d = g.rows() / 2;
    let mut m = Matrix::identity(4 * d);
    for i in 0..d {
        for j in 0..d {
            m[(d + i, d + j)] = g[(i, j)].clone();
            m[(d + i, 3 * d + j)] = g[(i, d + j)].clone();
            m[(3 * d + i, d + j)] = g[(d + i, j)].clone();
            m[(3 * d + i, 3 * d + j)] = g[(d + i, d + j)].clone();
        }
    }
    Ok(m)
}

/// `G` with its off-diagonal blocks negated, i.e. `Z G Z` with `Z = diag(I, -I)`.
pub fn conj_antidiagonal<T: Scalar>(g: &Matrix<T>) -> Result<Matrix<T>> {
    if !g.is_square() || !g.rows().is_multiple_of(2) {
        return Err(Error::Dimension("conjugation needs a 2d x 2d matrix".into()));
    }
    let d = g.rows() / 2;
    let mut out = g.clone();
    for i in 0..d {
        for j in 0..d {
            out[(i, d + j)] = -g[(i, d + j)].clone();
            out[(d + i, j)] = -g[(d + i, j)].clone();
        }
    }
    Ok(out)
}

fn expect_square(m: &Matrix<impl Scalar>, n: usize, what: &str) -> Result<()> {
    if m.shape() != (n, n) {
        return Err(Error::Dimension(format!(
            "{what} must be {n}x{n}, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(())
}

/// Builds one of the named matrices at half-dimension `d`.
pub fn make_named<T: Scalar>(kind: &Named<T>, d: usize) -> Result<Matrix<T>> {
    if d == 0 {
        return Err(Error::Dimension("d must be positive".into()));
    }
    match kind {
        Named::J => Ok(standard_j(d)),
        Named::Dilation(e) => {
            expect_square(e, d, "E")?;
            dilation(e)
        }
        Named::Chirp(c) => {
            expect_square(c, d, "C")?;
            chirp(c)
        }
        Named::ChirpTranspose(c) => {
            expect_square(c, d, "C")?;
            chirp_transpose(c)
        }
        Named::L => Ok(swap_l(d)),
        Named::K => Ok(k_matrix(d)),
        Named::Stft => Ok(stft_matrix(d)),
        Named::TauWigner(tau) => Ok(tau_matrix(d, tau)),
        Named::PartialFourier2 => Ok(partial_fourier2_matrix(d)),
        Named::Lift(g) => {
            expect_square(g, 2 * d, "G")?;
            if !is_symplectic(g, d, 1e-12)? {
                return Err(Error::NotSymplectic);
            }
            lift(g)
        }
    }
}

/// `m^T J m == J`, exactly in rational mode and within `tol` (max-norm) in
/// float mode.
pub fn is_symplectic<T: Scalar>(m: &Matrix<T>, d: usize, tol: f64) -> Result<bool> {
    expect_square(m, 2 * d, "matrix")?;
    Ok(symplectic_defect(m)?.is_zero_matrix(tol))
}

/// `m^T J m - J` for a square matrix of even size.
pub fn symplectic_defect<T: Scalar>(m: &Matrix<T>) -> Result<Matrix<T>> {
    if !m.is_square() || !m.rows().is_multiple_of(2) {
        return Err(Error::Dimension("symplectic test needs a 2d x 2d matrix".into()));
    }
    let j = standard_j::<T>(m.rows() / 2);
    m.transpose().mul(&j)?.mul(m)?.sub(&j)
}

/// Inverse of a symplectic matrix, `J^-1 m^T J`. Only valid for symplectic `m`.
pub fn symplectic_inverse<T: Scalar>(m: &Matrix<T>) -> Result<Matrix<T>> {
    if !m.is_square() || !m.rows().is_multiple_of(2) {
        return Err(Error::Dimension("needs a 2d x 2d matrix".into()));
    }
    let j = standard_j::<T>(m.rows() / 2);
    j.neg().mul(&m.transpose())?.mul(&j)
}

/// A validated `2d x 2d` symplectic matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticMatrix<T> {
    d: usize,
    m: Matrix<T>,
}

impl<T: Scalar> SymplecticMatrix<T> {
    /// Checks `m^T J m = J` with `tol` (ignored in rational mode).
    pub fn new(m: Matrix<T>, tol: f64) -> Result<Self> {
        if !m.is_square() || !m.rows().is_multiple_of(2) || m.rows() == 0 {
            return Err(Error::Dimension("symplectic matrices are 2d x 2d".into()));
        }
        let d = m.rows() / 2;
        if !is_symplectic(&m, d, tol)? {
            return Err(Error::NotSymplectic);
        }
        Ok(SymplecticMatrix { d, m })
    }

    pub fn half_dim(&self) -> usize {
        self.d
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.m
    }

    pub fn into_matrix(self) -> Matrix<T> {
        self.m
    }

    pub fn inverse(&self) -> Self {
        SymplecticMatrix {
            d: self.d,
            m: symplectic_inverse(&self.m).expect("shape checked at construction"),
        }
    }

    pub fn compose(&self, rhs: &Self) -> Result<Self> {
        if self.d != rhs.d {
            return Err(Error::Dimension("half-dimensions differ".into()));
        }
        Ok(SymplecticMatrix {
            d: self.d,
            m: self.m.mul(&rhs.m)?,
        })
    }
}

/// The sixteen `d x d` blocks `A_11 .. A_44` of a `4d x 4d` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockView<T> {
    d: usize,
    blocks: Vec<Matrix<T>>,
}

impl<T: Scalar> BlockView<T> {
    /// Block `A_ij` with 1-based indices as in the usual notation.
    pub fn get(&self, i: usize, j: usize) -> &Matrix<T> {
        assert!((1..=4).contains(&i) && (1..=4).contains(&j), "block index out of range");
        &self.blocks[(i - 1) * 4 + (j - 1)]
    }

    pub fn half_dim(&self) -> usize {
        self.d
    }

    pub fn reassemble(&self) -> Matrix<T> {
        let rows: Vec<Vec<Matrix<T>>> = (0..4).map(|i| self.blocks[i * 4..i * 4 + 4].to_vec()).collect();
        Matrix::from_blocks(&rows).expect("blocks share a size")
    }
}

/// Splits a `4d x 4d` matrix into its sixteen `d x d` blocks (row-major).
pub fn blocks<T: Scalar>(m: &Matrix<T>) -> Result<BlockView<T>> {
    if !m.is_square() || !m.rows().is_multiple_of(4) || m.rows() == 0 {
        return Err(Error::Dimension(format!(
            "block view needs a 4d x 4d matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let d = m.rows() / 4;
    let mut bl = Vec::with_capacity(16);
    for i in 0..4 {
        for j in 0..4 {
            bl.push(m.block(i * d, j * d, d, d)?);
        }
    }
    Ok(BlockView { d, blocks: bl })
}

/// The four `2d x 2d` submatrices of a `4d x 4d` matrix:
///
/// ```text
/// E = [[A11, A13], [A21, A23]]    F = [[A31, A33], [A41, A43]]
/// Ɛ = [[A12, A14], [A22, A24]]    𝓕 = [[A32, A34], [A42, A44]]
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct Submatrices<T> {
    pub e: Matrix<T>,
    pub f: Matrix<T>,
    /// Ɛ: columns belonging to the second variable, upper half.
    pub e_cal: Matrix<T>,
    /// 𝓕: columns belonging to the second variable, lower half.
    pub f_cal: Matrix<T>,
}

impl<T: Scalar> Submatrices<T> {
    pub fn half_dim(&self) -> usize {
        self.e.rows() / 2
    }

    /// Residuals of `E^T F - F^T E - J`, `Ɛ^T 𝓕 - 𝓕^T Ɛ - J` and `E^T 𝓕 - F^T Ɛ`.
    pub fn relation_residuals(&self) -> Result<[Matrix<T>; 3]> {
        let j = standard_j::<T>(self.half_dim());
        let et = self.e.transpose();
        let ft = self.f.transpose();
        let r1 = et.mul(&self.f)?.sub(&ft.mul(&self.e)?)?.sub(&j)?;
        let r2 = self
            .e_cal
            .transpose()
            .mul(&self.f_cal)?
            .sub(&self.f_cal.transpose().mul(&self.e_cal)?)?
            .sub(&j)?;
        let r3 = et.mul(&self.f_cal)?.sub(&ft.mul(&self.e_cal)?)?;
        Ok([r1, r2, r3])
    }

    pub fn relations_hold(&self, tol: f64) -> Result<bool> {
        Ok(self.relation_residuals()?.iter().all(|r| r.is_zero_matrix(tol)))
    }

    /// Reassembles the `4d x 4d` matrix: `[[E, Ɛ], [F, 𝓕]] K`.
    pub fn assemble(&self) -> Result<Matrix<T>> {
        let d = self.half_dim();
        Matrix::block2(&self.e, &self.e_cal, &self.f, &self.f_cal)?.mul(&k_matrix(d))
    }
}

pub fn submatrices<T: Scalar>(m: &Matrix<T>) -> Result<Submatrices<T>> {
    let b = blocks(m)?;
    let pair = |r1: usize, c1: usize, c2: usize, r2: usize| -> Result<Matrix<T>> {
        Matrix::block2(b.get(r1, c1), b.get(r1, c2), b.get(r2, c1), b.get(r2, c2))
    };
    Ok(Submatrices {
        e: pair(1, 1, 3, 2)?,
        f: pair(3, 1, 3, 4)?,
        e_cal: pair(1, 2, 4, 2)?,
        f_cal: pair(3, 2, 4, 4)?,
    })
}
