//! Dense row-major matrices over a [`Scalar`] together with the JSON matrix
//! file format used by the command line tool.

use std::fmt;
use std::ops::{Index, IndexMut};
use std::path::Path;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::scalar::{format_rational, parse_rational, rational_from_f64, Rational, Scalar, ScalarMode};

/// Default comparison tolerance for float-mode matrix algebra.
pub const DEFAULT_TOL: f64 = 1e-12;

#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type RatMatrix = Matrix<Rational>;
pub type FloatMatrix = Matrix<f64>;

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn scalar_identity(n: usize, c: T) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = c.clone();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Self::from_vec(r, c, rows.into_iter().flatten().collect())
    }

    /// Convenience for tests and constructors: integer entries.
    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let v = rows
            .iter()
            .map(|r| r.iter().map(|&x| T::from_i64(x)).collect())
            .collect();
        Self::from_rows(v).expect("rectangular literal")
    }

    pub fn diag(entries: &[T]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn to_f64(&self) -> FloatMatrix {
        self.map(Scalar::to_float)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let prod = a.clone() * b.clone();
                    let slot = &mut out[(i, j)];
                    *slot = slot.clone() + prod;
                }
            }
        }
        Ok(out)
    }

    /// Product of a non-empty chain, left to right.
    pub fn product<'a>(factors: impl IntoIterator<Item = &'a Self>) -> Result<Self>
    where
        T: 'a,
    {
        let mut it = factors.into_iter();
        let first = it
            .next()
            .ok_or_else(|| Error::InvalidArgument("empty product".into()))?
            .clone();
        it.try_fold(first, |acc, m| acc.mul(m))
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(&T, &T) -> T) -> Result<Self> {
        if self.shape() != rhs.shape() {
            return Err(Error::Dimension(format!(
                "shapes {:?} and {:?} differ",
                self.shape(),
                rhs.shape()
            )));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, |a, b| a.clone() + b.clone())
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, |a, b| a.clone() - b.clone())
    }

    pub fn neg(&self) -> Self {
        self.map(|a| -a.clone())
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|a| a.clone() * c.clone())
    }

    pub fn mul_vec(&self, v: &[T]) -> Result<Vec<T>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "vector of length {} for {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect())
    }

    /// Largest entry magnitude.
    pub fn max_norm(&self) -> f64 {
        self.data.iter().map(Scalar::magnitude).fold(0.0, f64::max)
    }

    /// Max-norm of the difference; `Err` on shape mismatch.
    pub fn max_abs_diff(&self, rhs: &Self) -> Result<f64> {
        Ok(self.sub(rhs)?.max_norm())
    }

    /// Exact equality in rational mode, max-norm within `tol` in float mode.
    pub fn approx_eq(&self, rhs: &Self, tol: f64) -> bool {
        match self.sub(rhs) {
            Ok(d) => d.data.iter().all(|x| x.is_negligible(tol)),
            Err(_) => false,
        }
    }

    pub fn is_zero_matrix(&self, tol: f64) -> bool {
        self.data.iter().all(|x| x.is_negligible(tol))
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (i + 1..self.cols)
                    .all(|j| (self[(i, j)].clone() - self[(j, i)].clone()).is_negligible(tol))
            })
    }

    pub fn is_integer(&self, tol: f64) -> bool {
        self.data.iter().all(|x| x.is_integral(tol))
    }

    /// Copy of the `h x w` block whose top-left entry is `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, h: usize, w: usize) -> Result<Self> {
        if r0 + h > self.rows || c0 + w > self.cols {
            return Err(Error::Dimension(format!(
                "block ({r0},{c0}) of size {h}x{w} outside {}x{}",
                self.rows, self.cols
            )));
        }
        let mut b = Self::zeros(h, w);
        for i in 0..h {
            for j in 0..w {
                b[(i, j)] = self[(r0 + i, c0 + j)].clone();
            }
        }
        Ok(b)
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Self) -> Result<()> {
        if r0 + b.rows > self.rows || c0 + b.cols > self.cols {
            return Err(Error::Dimension("block does not fit".into()));
        }
        for i in 0..b.rows {
            for j in 0..b.cols {
                self[(r0 + i, c0 + j)] = b[(i, j)].clone();
            }
        }
        Ok(())
    }

    /// Assembles a matrix from a rectangular grid of blocks.
    pub fn from_blocks(blocks: &[Vec<Self>]) -> Result<Self> {
        let heights: Vec<usize> = blocks
            .iter()
            .map(|row| row.first().map_or(0, Matrix::rows))
            .collect();
        let widths: Vec<usize> = blocks
            .first()
            .map(|row| row.iter().map(Matrix::cols).collect())
            .unwrap_or_default();
        for (bi, row) in blocks.iter().enumerate() {
            if row.len() != widths.len() {
                return Err(Error::Dimension("ragged block rows".into()));
            }
            for (bj, b) in row.iter().enumerate() {
                if b.rows != heights[bi] || b.cols != widths[bj] {
                    return Err(Error::Dimension(format!("block ({bi},{bj}) has wrong shape")));
                }
            }
        }
        let mut out = Self::zeros(heights.iter().sum(), widths.iter().sum());
        let mut r0 = 0;
        for (bi, row) in blocks.iter().enumerate() {
            let mut c0 = 0;
            for (bj, b) in row.iter().enumerate() {
                out.set_block(r0, c0, b)?;
                c0 += widths[bj];
            }
            r0 += heights[bi];
        }
        Ok(out)
    }

    /// 2x2 block matrix `[[a, b], [c, d]]`.
    pub fn block2(a: &Self, b: &Self, c: &Self, d: &Self) -> Result<Self> {
        Self::from_blocks(&[vec![a.clone(), b.clone()], vec![c.clone(), d.clone()]])
    }

    /// Gauss-Jordan elimination with partial pivoting. Returns the reduced
    /// form of `[self | rhs]`, the rank of `self` and its determinant.
    fn eliminate(&self, rhs: Option<&Self>, tol: f64) -> (Self, usize, T) {
        let n = self.rows;
        let extra = rhs.map_or(0, Matrix::cols);
        let width = self.cols + extra;
        let mut a = Self::zeros(n, width);
        a.set_block(0, 0, self).expect("fits");
        if let Some(r) = rhs {
            a.set_block(0, self.cols, r).expect("fits");
        }
        let scale = self.max_norm().max(f64::MIN_POSITIVE);
        let mut det = T::one();
        let mut rank = 0;
        for c in 0..self.cols {
            if rank == n {
                break;
            }
            let pivot = (rank..n)
                .filter(|&i| !a[(i, c)].is_negligible(tol * scale))
                .max_by(|&i, &j| a[(i, c)].magnitude().total_cmp(&a[(j, c)].magnitude()));
            let Some(p) = pivot else {
                det = T::zero();
                continue;
            };
            if p != rank {
                for j in 0..width {
                    a.data.swap(p * width + j, rank * width + j);
                }
                det = -det;
            }
            let pv = a[(rank, c)].clone();
            det = det * pv.clone();
            for j in 0..width {
                a[(rank, j)] = a[(rank, j)].clone() / pv.clone();
            }
            for i in 0..n {
                if i == rank || a[(i, c)].is_zero() {
                    continue;
                }
                let factor = a[(i, c)].clone();
                for j in 0..width {
                    let v = a[(rank, j)].clone() * factor.clone();
                    a[(i, j)] = a[(i, j)].clone() - v;
                }
            }
            rank += 1;
        }
        if rank < self.rows.min(self.cols) || !self.is_square() {
            det = T::zero();
        }
        (a, rank, det)
    }

    /// Pivot threshold relative to the max-norm; zero means exact.
    fn pivot_tol() -> f64 {
        match T::MODE {
            ScalarMode::Rational => 0.0,
            ScalarMode::Float => 1e-13,
        }
    }

    pub fn rank(&self) -> usize {
        self.eliminate(None, Self::pivot_tol()).1
    }

    pub fn determinant(&self) -> Result<T> {
        if !self.is_square() {
            return Err(Error::Dimension("determinant of non-square matrix".into()));
        }
        if self.rows == 0 {
            return Ok(T::one());
        }
        // exact determinant needs elimination without the float cutoff
        Ok(self.eliminate(None, 0.0).2)
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::Dimension("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let (a, rank, _) = self.eliminate(Some(&Self::identity(n)), Self::pivot_tol());
        if rank < n {
            return Err(Error::Singular);
        }
        a.block(0, n, n, n)
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Scalar + fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} ", self.rows, self.cols)?;
        f.debug_list()
            .entries(self.data.chunks(self.cols.max(1)))
            .finish()
    }
}

impl RatMatrix {
    /// Exact rational copy of a float matrix.
    pub fn from_f64(m: &FloatMatrix) -> Result<Self> {
        let data = m.entries().iter().map(|&v| rational_from_f64(v)).collect::<Result<_>>()?;
        Matrix::from_vec(m.rows(), m.cols(), data)
    }
}

/// A matrix read from or written to disk, in either scalar mode.
#[derive(Debug, Clone, PartialEq)]
pub enum DynMatrix {
    Rational(RatMatrix),
    Float(FloatMatrix),
}

impl DynMatrix {
    pub fn mode(&self) -> ScalarMode {
        match self {
            DynMatrix::Rational(_) => ScalarMode::Rational,
            DynMatrix::Float(_) => ScalarMode::Float,
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        match self {
            DynMatrix::Rational(m) => m.shape(),
            DynMatrix::Float(m) => m.shape(),
        }
    }

    pub fn to_f64(&self) -> FloatMatrix {
        match self {
            DynMatrix::Rational(m) => m.to_f64(),
            DynMatrix::Float(m) => m.clone(),
        }
    }

    pub fn to_json(&self) -> Value {
        let (rows, cols) = self.shape();
        let entries: Vec<Value> = match self {
            DynMatrix::Rational(m) => (0..rows)
                .map(|i| Value::from(m.row(i).iter().map(format_rational).collect::<Vec<_>>()))
                .collect(),
            DynMatrix::Float(m) => (0..rows).map(|i| Value::from(m.row(i).to_vec())).collect(),
        };
        json!({
            "rows": rows,
            "cols": cols,
            "mode": self.mode().as_str(),
            "entries": entries,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let field = |k: &str| v.get(k).ok_or_else(|| Error::Parse(format!("missing field {k:?}")));
        let as_count = |k: &str| -> Result<usize> {
            field(k)?
                .as_u64()
                .map(|n| n as usize)
                .ok_or_else(|| Error::Parse(format!("{k:?} is not a count")))
        };
        let rows = as_count("rows")?;
        let cols = as_count("cols")?;
        let mode = field("mode")?
            .as_str()
            .ok_or_else(|| Error::Parse("mode is not a string".into()))?;
        let entries = field("entries")?
            .as_array()
            .ok_or_else(|| Error::Parse("entries is not an array".into()))?;
        if entries.len() != rows {
            return Err(Error::Parse(format!("{} rows listed, header says {rows}", entries.len())));
        }
        let mut flat = Vec::with_capacity(rows * cols);
        for row in entries {
            let row = row
                .as_array()
                .ok_or_else(|| Error::Parse("row is not an array".into()))?;
            if row.len() != cols {
                return Err(Error::Parse(format!("row of length {}, header says {cols}", row.len())));
            }
            flat.extend(row.iter().cloned());
        }
        match mode {
            "rational" => {
                let data = flat
                    .iter()
                    .map(|e| match e {
                        Value::String(s) => parse_rational(s),
                        Value::Number(n) if n.is_i64() => Ok(Rational::from_i64(n.as_i64().unwrap())),
                        _ => Err(Error::Parse(format!("bad rational entry {e}"))),
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(DynMatrix::Rational(Matrix::from_vec(rows, cols, data)?))
            }
            "float64" => {
                let data = flat
                    .iter()
                    .map(|e| e.as_f64().ok_or_else(|| Error::Parse(format!("bad float entry {e}"))))
                    .collect::<Result<Vec<_>>>()?;
                Ok(DynMatrix::Float(Matrix::from_vec(rows, cols, data)?))
            }
            other => Err(Error::Parse(format!("unknown mode {other:?}"))),
        }
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&serde_json::from_str(&text)?)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        if let DynMatrix::Float(m) = self {
            if m.entries().iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidArgument("non-finite matrix entry".into()));
            }
        }
        let mut text = serde_json::to_string_pretty(&self.to_json())?;
        text.push('\n');
        std::fs::write(path, text)?;
        Ok(())
    }
}

impl From<RatMatrix> for DynMatrix {
    fn from(m: RatMatrix) -> Self {
        DynMatrix::Rational(m)
    }
}

impl From<FloatMatrix> for DynMatrix {
    fn from(m: FloatMatrix) -> Self {
        DynMatrix::Float(m)
    }
}
