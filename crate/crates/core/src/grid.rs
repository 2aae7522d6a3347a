//! Sampling grids and complex signals on them.
//!
//! A grid has `N` samples per axis on `[-T/2, T/2)` with spacing `h = T/N`;
//! sample `k` sits at `(k - N/2) h`. Signals are stored row-major, axis 0
//! slowest.

use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub d: usize,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "T")]
    pub t: f64,
}

impl GridSpec {
    pub fn new(d: usize, n: usize, t: f64) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidGrid("dimension must be positive".into()));
        }
        if n < 4 || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(format!("N = {n} must be a power of two >= 4")));
        }
        if !(t.is_finite() && t > 0.0) {
            return Err(Error::InvalidGrid(format!("T = {t} must be positive")));
        }
        Ok(GridSpec { d, n, t })
    }

    /// The self-dual grid `T = sqrt(N)`, on which the Fourier transform maps
    /// the grid to itself.
    pub fn self_dual(d: usize, n: usize) -> Result<Self> {
        Self::new(d, n, (n as f64).sqrt())
    }

    pub fn spacing(&self) -> f64 {
        self.t / self.n as f64
    }

    /// Total number of samples, `N^d`.
    pub fn len(&self) -> usize {
        self.n.pow(self.d as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_self_dual(&self) -> bool {
        (self.t * self.t - self.n as f64).abs() <= 1e-9 * self.n as f64
    }

    pub fn require_self_dual(&self) -> Result<()> {
        if self.is_self_dual() {
            Ok(())
        } else {
            Err(Error::InvalidGrid(format!(
                "grid is not self-dual (T = {}, need sqrt(N) = {})",
                self.t,
                (self.n as f64).sqrt()
            )))
        }
    }

    /// Same axis layout with a different dimension.
    pub fn with_dim(&self, d: usize) -> Self {
        GridSpec { d, ..*self }
    }

    /// Centered integer index `k - N/2` of axis position `k`.
    pub fn centered(&self, k: usize) -> i64 {
        k as i64 - (self.n / 2) as i64
    }

    pub fn coord(&self, k: usize) -> f64 {
        self.centered(k) as f64 * self.spacing()
    }

    /// Axis positions of the flat index `idx`.
    pub fn unflatten(&self, mut idx: usize, out: &mut [usize]) {
        for a in (0..self.d).rev() {
            out[a] = idx % self.n;
            idx /= self.n;
        }
    }

    pub fn flatten(&self, pos: &[usize]) -> usize {
        pos.iter().fold(0, |acc, &k| acc * self.n + k)
    }

    /// Flat index of centered integer coordinates, wrapped periodically.
    pub fn flatten_wrapped(&self, m: &[i64]) -> usize {
        let n = self.n as i64;
        m.iter().fold(0, |acc, &c| acc * self.n + (c + n / 2).rem_euclid(n) as usize)
    }

    /// Flat index of centered integer coordinates, or `None` outside the grid.
    pub fn flatten_checked(&self, m: &[i64]) -> Option<usize> {
        let half = (self.n / 2) as i64;
        let mut acc = 0;
        for &c in m {
            if c < -half || c >= half {
                return None;
            }
            acc = acc * self.n + (c + half) as usize;
        }
        Some(acc)
    }

    /// Coordinates of every sample, in storage order.
    pub fn points(&self) -> Vec<Vec<f64>> {
        let mut pos = vec![0; self.d];
        (0..self.len())
            .map(|i| {
                self.unflatten(i, &mut pos);
                pos.iter().map(|&k| self.coord(k)).collect()
            })
            .collect()
    }

    /// `v / h` as an integer when `v` is a grid multiple.
    pub fn grid_steps(&self, v: f64) -> Result<i64> {
        let s = v / self.spacing();
        let r = s.round();
        if (s - r).abs() > 1e-9 * s.abs().max(1.0) {
            return Err(Error::OffGrid(format!("{v} is not a multiple of the spacing {}", self.spacing())));
        }
        Ok(r as i64)
    }
}

/// Sampled complex function on a [`GridSpec`].
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteSignal {
    spec: GridSpec,
    samples: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct Sidecar {
    d: usize,
    #[serde(rename = "N")]
    n: usize,
    #[serde(rename = "T")]
    t: f64,
}

pub(crate) fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

impl DiscreteSignal {
    pub fn new(spec: GridSpec, samples: Vec<Complex64>) -> Result<Self> {
        if samples.len() != spec.len() {
            return Err(Error::Dimension(format!(
                "expected {} samples, got {}",
                spec.len(),
                samples.len()
            )));
        }
        if samples.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidArgument("signal has non-finite samples".into()));
        }
        Ok(DiscreteSignal { spec, samples })
    }

    pub(crate) fn from_raw(spec: GridSpec, samples: Vec<Complex64>) -> Self {
        debug_assert_eq!(samples.len(), spec.len());
        DiscreteSignal { spec, samples }
    }

    pub fn zeros(spec: GridSpec) -> Self {
        DiscreteSignal { spec, samples: vec![Complex64::new(0.0, 0.0); spec.len()] }
    }

    pub fn from_fn(spec: GridSpec, f: impl Fn(&[f64]) -> Complex64) -> Self {
        let samples = spec.points().iter().map(|p| f(p)).collect();
        DiscreteSignal { spec, samples }
    }

    /// `2^{d/4} e^{-pi |x - x0|^2} e^{2 pi i xi0 . x}`, unit norm on the line.
    pub fn gaussian(spec: GridSpec, x0: &[f64], xi0: &[f64]) -> Result<Self> {
        Self::gaussian_scaled(spec, x0, xi0, 1.0)
    }

    /// Gaussian of width parameter `a`: `(2a)^{d/4} e^{-pi a |x - x0|^2} e^{2 pi i xi0 . x}`.
    pub fn gaussian_scaled(spec: GridSpec, x0: &[f64], xi0: &[f64], a: f64) -> Result<Self> {
        if x0.len() != spec.d || xi0.len() != spec.d {
            return Err(Error::Dimension("center and frequency must have d entries".into()));
        }
        #[allow(clippy::neg_cmp_op_on_partial_ord)] // also rejects NaN
        if !(a > 0.0) {
            return Err(Error::InvalidArgument("Gaussian width must be positive".into()));
        }
        let norm = (2.0 * a).powf(spec.d as f64 / 4.0);
        Ok(Self::from_fn(spec, |x| {
            let mut r2 = 0.0;
            let mut ph = 0.0;
            for i in 0..x.len() {
                r2 += (x[i] - x0[i]).powi(2);
                ph += xi0[i] * x[i];
            }
            Complex64::from_polar(norm * (-std::f64::consts::PI * a * r2).exp(), 2.0 * std::f64::consts::PI * ph)
        }))
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn samples_mut(&mut self) -> &mut [Complex64] {
        &mut self.samples
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    /// `<f, g> = sum f conj(g) h^d`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.check_same_grid(other)?;
        let s: Complex64 = self.samples.iter().zip(&other.samples).map(|(a, b)| a * b.conj()).sum();
        Ok(s * self.cell())
    }

    pub fn norm(&self) -> f64 {
        (self.samples.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.cell()).sqrt()
    }

    pub fn cell(&self) -> f64 {
        self.spec.spacing().powi(self.spec.d as i32)
    }

    pub fn check_same_grid(&self, other: &Self) -> Result<()> {
        if self.spec != other.spec {
            return Err(Error::Dimension(format!(
                "grid mismatch: {:?} vs {:?}",
                self.spec, other.spec
            )));
        }
        Ok(())
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map(|z| z * c)
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        DiscreteSignal { spec: self.spec, samples: self.samples.iter().map(|&z| f(z)).collect() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_grid(other)?;
        Ok(DiscreteSignal {
            spec: self.spec,
            samples: self.samples.iter().zip(&other.samples).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// `(f ⊗ g)(x, y) = f(x) g(y)` on the grid of dimension `d_f + d_g`.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        if self.spec.n != other.spec.n || self.spec.t != other.spec.t {
            return Err(Error::Dimension("tensor factors need the same axis grid".into()));
        }
        let spec = self.spec.with_dim(self.spec.d + other.spec.d);
        let mut samples = Vec::with_capacity(spec.len());
        for a in &self.samples {
            for b in &other.samples {
                samples.push(a * b);
            }
        }
        Ok(DiscreteSignal { spec, samples })
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_same_grid(other)?;
        Ok(self.samples.iter().zip(&other.samples).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }

    /// `max | |f| - |g| |`.
    pub fn modulus_diff(&self, other: &Self) -> Result<f64> {
        self.check_same_grid(other)?;
        Ok(self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| (a.norm() - b.norm()).abs())
            .fold(0.0, f64::max))
    }

    /// Multiplies by the unit phase that makes `self` agree with `reference`
    /// at the reference's largest-magnitude sample.
    pub fn phase_aligned_to(&self, reference: &Self) -> Result<Self> {
        self.check_same_grid(reference)?;
        let (k, _) = reference
            .samples
            .iter()
            .enumerate()
            .fold((0, -1.0), |best, (i, z)| if z.norm() > best.1 { (i, z.norm()) } else { best });
        let a = self.samples[k];
        if a.norm() == 0.0 {
            return Ok(self.clone());
        }
        let phase = reference.samples[k] / reference.samples[k].norm() * (a.conj() / a.norm());
        Ok(self.scale(phase))
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Writes `re,im` lines plus a `<path>.json` sidecar with the grid.
    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let mut w = BufWriter::new(fs::File::create(path)?);
        for z in &self.samples {
            writeln!(w, "{},{}", z.re, z.im)?;
        }
        w.flush()?;
        let side = Sidecar { d: self.spec.d, n: self.spec.n, t: self.spec.t };
        fs::write(sidecar_path(path), serde_json::to_string_pretty(&side)?)?;
        Ok(())
    }

    pub fn read_csv(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let side: Sidecar = serde_json::from_str(&fs::read_to_string(sidecar_path(path))?)?;
        let spec = GridSpec::new(side.d, side.n, side.t)?;
        let mut samples = Vec::with_capacity(spec.len());
        for (lineno, line) in BufReader::new(fs::File::open(path)?).lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let bad = || Error::Parse(format!("{}:{}: expected \"re,im\"", path.display(), lineno + 1));
            let (re, im) = line.split_once(',').ok_or_else(bad)?;
            let re: f64 = re.trim().parse().map_err(|_| bad())?;
            let im: f64 = im.trim().parse().map_err(|_| bad())?;
            samples.push(Complex64::new(re, im));
        }
        Self::new(spec, samples)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_validation() {
        assert!(GridSpec::new(1, 6, 1.0).is_err());
        assert!(GridSpec::new(1, 2, 1.0).is_err());
        assert!(GridSpec::new(1, 8, 0.0).is_err());
        let g = GridSpec::self_dual(1, 16).unwrap();
        assert!(g.is_self_dual());
        assert_eq!(g.spacing(), 0.25);
        assert_eq!(g.coord(0), -2.0);
        assert_eq!(g.coord(8), 0.0);
        assert!(!GridSpec::new(1, 16, 3.0).unwrap().is_self_dual());
    }

    #[test]
    fn index_helpers() {
        let g = GridSpec::self_dual(2, 4).unwrap();
        let mut pos = [0; 2];
        g.unflatten(9, &mut pos);
        assert_eq!(pos, [2, 1]);
        assert_eq!(g.flatten(&pos), 9);
        assert_eq!(g.flatten_wrapped(&[0, -1]), g.flatten(&[2, 1]));
        assert_eq!(g.flatten_wrapped(&[2, -1]), g.flatten(&[0, 1]));
        assert_eq!(g.flatten_checked(&[2, 0]), None);
        assert_eq!(g.grid_steps(1.5).unwrap(), 3);
        assert!(g.grid_steps(0.3).is_err());
    }

    #[test]
    fn gaussian_has_unit_norm() {
        let g = GridSpec::self_dual(1, 64).unwrap();
        let f = DiscreteSignal::gaussian(g, &[0.5], &[1.0]).unwrap();
        assert!((f.norm() - 1.0).abs() < 1e-10);
        let g2 = GridSpec::self_dual(2, 32).unwrap();
        let f2 = DiscreteSignal::gaussian_scaled(g2, &[0.0, 0.0], &[0.0, 0.0], 2.0).unwrap();
        assert!((f2.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn tensor_and_inner() {
        let g = GridSpec::self_dual(1, 16).unwrap();
        let f = DiscreteSignal::gaussian(g, &[0.3], &[0.0]).unwrap();
        let h = DiscreteSignal::gaussian(g, &[-0.2], &[0.5]).unwrap();
        let t = f.tensor(&h).unwrap();
        assert_eq!(t.spec().d, 2);
        assert!((t.norm() - f.norm() * h.norm()).abs() < 1e-12);
        let ip = t.inner(&t).unwrap();
        assert!((ip.re - t.norm().powi(2)).abs() < 1e-12 && ip.im.abs() < 1e-15);
    }

    #[test]
    fn phase_alignment() {
        let g = GridSpec::self_dual(1, 16).unwrap();
        let f = DiscreteSignal::gaussian(g, &[0.0], &[0.5]).unwrap();
        let rotated = f.scale(Complex64::from_polar(1.0, 2.0));
        assert!(rotated.phase_aligned_to(&f).unwrap().max_abs_diff(&f).unwrap() < 1e-14);
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("f.csv");
        let g = GridSpec::self_dual(1, 16).unwrap();
        let f = DiscreteSignal::gaussian(g, &[0.1], &[0.7]).unwrap();
        f.write_csv(&p).unwrap();
        assert_eq!(DiscreteSignal::read_csv(&p).unwrap(), f);
        std::fs::write(&p, "1,2\n3\n").unwrap();
        assert!(DiscreteSignal::read_csv(&p).is_err());
    }
}
