//! Scalar modes for [`Matrix`](crate::matrix::Matrix): exact rationals and `f64`.

use std::fmt::Debug;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact arbitrary-precision rational.
pub type Rational = BigRational;

/// Which arithmetic a matrix carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarMode {
    Rational,
    Float,
}

impl ScalarMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ScalarMode::Rational => "rational",
            ScalarMode::Float => "float64",
        }
    }
}

/// Field element usable as a matrix entry.
///
/// Rational arithmetic is exact and ignores every tolerance argument; float
/// arithmetic compares against the caller-supplied tolerance.
pub trait Scalar: Clone + Debug + PartialEq + Num + std::ops::Neg<Output = Self> + Send + Sync {
    const MODE: ScalarMode;

    fn from_i64(v: i64) -> Self;

    /// `num / den`; `den` must be nonzero.
    fn from_ratio(num: i64, den: i64) -> Self;

    fn to_float(&self) -> f64;

    /// Magnitude used for pivot selection and max-norms.
    fn magnitude(&self) -> f64;

    /// Exact zero test in rational mode, `|x| <= tol` in float mode.
    fn is_negligible(&self, tol: f64) -> bool;

    /// True when the value is an integer (within `tol` in float mode).
    fn is_integral(&self, tol: f64) -> bool;
}

impl Scalar for Rational {
    const MODE: ScalarMode = ScalarMode::Rational;

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_float(&self) -> f64 {
        // numer/denom may individually overflow f64 for tall heights
        match (self.numer().to_f64(), self.denom().to_f64()) {
            (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
            _ => {
                let shift = self.numer().bits().max(self.denom().bits()) as i64 - 900;
                let shift = shift.max(0) as u32;
                let n = (self.numer() >> shift).to_f64().unwrap_or(f64::NAN);
                let d = (self.denom() >> shift).to_f64().unwrap_or(f64::NAN);
                n / d
            }
        }
    }

    fn magnitude(&self) -> f64 {
        self.abs().to_float()
    }

    fn is_negligible(&self, _tol: f64) -> bool {
        self.is_zero()
    }

    fn is_integral(&self, _tol: f64) -> bool {
        self.denom().is_one()
    }
}

impl Scalar for f64 {
    const MODE: ScalarMode = ScalarMode::Float;

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn to_float(&self) -> f64 {
        *self
    }

    fn magnitude(&self) -> f64 {
        self.abs()
    }

    fn is_negligible(&self, tol: f64) -> bool {
        self.abs() <= tol
    }

    fn is_integral(&self, tol: f64) -> bool {
        (self - self.round()).abs() <= tol
    }
}

/// Parses `"p/q"` or `"p"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(
            BigInt::from_str(s).map_err(|_| bad())?,
        )),
    }
}

/// Always writes `"p/q"`, including integers (`"3/1"`).
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Exact rational with the same value as a finite `f64`.
pub fn rational_from_f64(v: f64) -> Result<Rational> {
    BigRational::from_float(v).ok_or_else(|| Error::Parse(format!("non-finite value {v}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_text_round_trip() {
        let r = Rational::from_ratio(-6, 4);
        assert_eq!(format_rational(&r), "-3/2");
        assert_eq!(parse_rational("-3/2").unwrap(), r);
        assert_eq!(parse_rational(" 7 ").unwrap(), Rational::from_i64(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn huge_rational_to_f64() {
        let big = BigInt::from(10).pow(400);
        let r = BigRational::new(big.clone() * 3, big * 2);
        assert!((r.to_float() - 1.5).abs() < 1e-15);
    }

    #[test]
    fn float_tolerances() {
        assert!(1e-13f64.is_negligible(1e-12));
        assert!(!1e-11f64.is_negligible(1e-12));
        assert!(3.0000000000001f64.is_integral(1e-9));
        assert!(!Rational::from_ratio(1, 2).is_integral(0.0));
    }
}
