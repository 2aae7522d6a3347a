//! Time-frequency distributions: the short-time Fourier transform, the
//! tau-Wigner family and general metaplectic Wigner distributions
//! `W_A(f, g) = Â(f ⊗ conj g)`, plus covariance and reproducing-formula checks.

use std::f64::consts::PI;
use std::fs;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::fourier;
use crate::grid::{sidecar_path, DiscreteSignal, GridSpec};
use crate::matrix::{FloatMatrix, Matrix};
use crate::discrete::{interpolate, metaplectic_apply, tf_shift, MetaplecticPlan};
use crate::scalar::Scalar;
use crate::shift_invertible::{compute_ma, deformation, factorize, is_invertible, is_shift_invertible};
use crate::symplectic::{submatrices, swap_l};

/// Values of a distribution on the phase-space grid (dimension `2d`), stored
/// row-major over `(x, xi)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TfGrid {
    values: DiscreteSignal,
    provenance: String,
}

#[derive(Serialize, Deserialize)]
struct TfSidecar {
    d: usize,
    #[serde(rename = "N")]
    n: usize,
    #[serde(rename = "T")]
    t: f64,
    layout: String,
    provenance: String,
}

impl TfGrid {
    pub fn new(values: DiscreteSignal, provenance: impl Into<String>) -> Result<Self> {
        if !values.spec().d.is_multiple_of(2) {
            return Err(Error::Dimension("phase-space grids have even dimension".into()));
        }
        Ok(TfGrid { values, provenance: provenance.into() })
    }

    pub fn values(&self) -> &DiscreteSignal {
        &self.values
    }

    pub fn into_values(self) -> DiscreteSignal {
        self.values
    }

    pub fn spec(&self) -> &GridSpec {
        self.values.spec()
    }

    /// Dimension `d` of the underlying signals.
    pub fn half_dim(&self) -> usize {
        self.spec().d / 2
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn norm(&self) -> f64 {
        self.values.norm()
    }

    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.values.inner(&other.values)
    }

    /// Value at the flat index of the centered integer point `m`, periodic.
    pub fn at(&self, m: &[i64]) -> Complex64 {
        self.values.samples()[self.spec().flatten_wrapped(m)]
    }

    /// Raw little-endian `f64` pairs `(re, im)` plus a `<path>.json` sidecar.
    pub fn write_bin(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let mut bytes = Vec::with_capacity(16 * self.values.samples().len());
        for z in self.values.samples() {
            bytes.extend_from_slice(&z.re.to_le_bytes());
            bytes.extend_from_slice(&z.im.to_le_bytes());
        }
        fs::write(path, bytes)?;
        let spec = self.spec();
        let side = TfSidecar {
            d: self.half_dim(),
            n: spec.n,
            t: spec.t,
            layout: "row-major over (x, xi), interleaved little-endian f64 (re, im)".into(),
            provenance: self.provenance.clone(),
        };
        fs::write(sidecar_path(path), serde_json::to_string_pretty(&side)?)?;
        Ok(())
    }

    pub fn read_bin(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let side: TfSidecar = serde_json::from_str(&fs::read_to_string(sidecar_path(path))?)?;
        let spec = GridSpec::new(2 * side.d, side.n, side.t)?;
        let bytes = fs::read(path)?;
        if bytes.len() != 16 * spec.len() {
            return Err(Error::Parse(format!(
                "{}: expected {} bytes, found {}",
                path.display(),
                16 * spec.len(),
                bytes.len()
            )));
        }
        let samples = bytes
            .chunks_exact(16)
            .map(|c| {
                let re = f64::from_le_bytes(c[..8].try_into().expect("8 bytes"));
                let im = f64::from_le_bytes(c[8..].try_into().expect("8 bytes"));
                Complex64::new(re, im)
            })
            .collect();
        TfGrid::new(DiscreteSignal::new(spec, samples)?, side.provenance)
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        self.values.write_csv(path)
    }

    /// 8-bit binary PGM of `log10 |W|` over the top `dynamic_range_db` decibels.
    /// Rows run over `x`, columns over `xi`.
    pub fn write_pgm(&self, path: impl AsRef<Path>, dynamic_range_db: f64) -> Result<()> {
        let side = self.spec().n.pow(self.half_dim() as u32);
        let mags: Vec<f64> = self.values.samples().iter().map(|z| z.norm()).collect();
        let max = mags.iter().cloned().fold(0.0, f64::max);
        let floor = dynamic_range_db.max(1.0);
        let pixels: Vec<u8> = mags
            .iter()
            .map(|&m| {
                if max == 0.0 || m == 0.0 {
                    return 0;
                }
                let db = 20.0 * (m / max).log10();
                (((db + floor) / floor).clamp(0.0, 1.0) * 255.0).round() as u8
            })
            .collect();
        let mut out = fs::File::create(path)?;
        write!(out, "P5\n{side} {side}\n255\n")?;
        out.write_all(&pixels)?;
        Ok(())
    }
}

fn check_pair(f: &DiscreteSignal, g: &DiscreteSignal) -> Result<()> {
    f.check_same_grid(g)?;
    f.spec().require_self_dual()?;
    if g.samples().iter().all(|z| *z == Complex64::new(0.0, 0.0)) {
        return Err(Error::ZeroWindow);
    }
    Ok(())
}

/// `V_g f(x, xi) = h^d sum_t f(t) conj(g(t - x)) e^{-2 pi i xi.t}` evaluated
/// point by point (periodic translation of the window).
pub fn stft(f: &DiscreteSignal, g: &DiscreteSignal) -> Result<TfGrid> {
    check_pair(f, g)?;
    let spec = *f.spec();
    let (d, n) = (spec.d, spec.n);
    // e^{-2 pi i xi_b t_k} per axis
    let table: Vec<Complex64> = (0..n * n)
        .map(|i| Complex64::from_polar(1.0, -2.0 * PI * spec.coord(i / n) * spec.coord(i % n)))
        .collect();
    let cell = f.cell();
    let out_spec = spec.with_dim(2 * d);
    let values: Vec<Complex64> = (0..out_spec.len())
        .into_par_iter()
        .map(|p| {
            let mut pos = vec![0; 2 * d];
            out_spec.unflatten(p, &mut pos);
            let (xa, xb) = pos.split_at(d);
            let mut tpos = vec![0; d];
            let mut shifted = vec![0i64; d];
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, fv) in f.samples().iter().enumerate() {
                spec.unflatten(k, &mut tpos);
                let mut e = Complex64::new(1.0, 0.0);
                for i in 0..d {
                    shifted[i] = spec.centered(tpos[i]) - spec.centered(xa[i]);
                    e *= table[xb[i] * n + tpos[i]];
                }
                acc += fv * g.samples()[spec.flatten_wrapped(&shifted)].conj() * e;
            }
            acc * cell
        })
        .collect();
    TfGrid::new(DiscreteSignal::from_raw(out_spec, values), "stft")
}

/// Writes `tau = p / 2^k` with the smallest such `k <= 6`.
fn dyadic(tau: f64) -> Option<(i64, u32)> {
    (0..=6).find_map(|k| {
        let scaled = tau * f64::from(1u32 << k);
        ((scaled - scaled.round()).abs() < 1e-12).then(|| (scaled.round() as i64, k))
    })
}

/// `W_tau(f, g)(x, xi) = int f(x + tau t) conj(g(x - (1 - tau) t)) e^{-2 pi i xi.t} dt`.
///
/// `tau = 0` and `tau = 1` use the closed forms
/// `f(x) conj(ĝ(xi)) e^{-2 pi i xi.x}` and `f̂(xi) conj(g(x)) e^{2 pi i xi.x}`.
/// Other dyadic `tau = p / 2^k` evaluate the integral as a Riemann sum over
/// `t` in `[-T, T)` with step `h`, after band-limited upsampling of `f` and `g`
/// by `2^k` so that both arguments fall on samples.
pub fn tau_wigner(tau: f64, f: &DiscreteSignal, g: &DiscreteSignal) -> Result<TfGrid> {
    check_pair(f, g)?;
    let spec = *f.spec();
    let d = spec.d;
    let out_spec = spec.with_dim(2 * d);
    let points = out_spec.points();
    let label = format!("tau_wigner({tau})");
    if tau == 0.0 || tau == 1.0 {
        let (a, b) = if tau == 0.0 { (f.clone(), fourier(g)?.conj()) } else { (fourier(f)?, g.conj()) };
        let sign = if tau == 0.0 { -1.0 } else { 1.0 };
        let values = points
            .iter()
            .enumerate()
            .map(|(p, z)| {
                let (x, xi) = z.split_at(d);
                let dot: f64 = x.iter().zip(xi).map(|(u, v)| u * v).sum();
                let (ix, ixi) = (p / spec.len(), p % spec.len());
                let (va, vb) = if tau == 0.0 { (a.samples()[ix], b.samples()[ixi]) } else { (a.samples()[ixi], b.samples()[ix]) };
                va * vb * Complex64::from_polar(1.0, sign * 2.0 * PI * dot)
            })
            .collect();
        return TfGrid::new(DiscreteSignal::from_raw(out_spec, values), label);
    }
    let (p, k) = dyadic(tau).ok_or(Error::UnsupportedTau(tau))?;
    let up = 1i64 << k;
    let n = spec.n as i64;
    // fine grid with spacing h / 2^k covering [-T/2, T/2)
    let fine_n = (spec.n as i64 * up) as usize;
    let fine_axis: Vec<f64> = (0..fine_n).map(|j| (j as f64 - (fine_n / 2) as f64) * spec.spacing() / up as f64).collect();
    let fine_len = fine_n.pow(d as u32);
    let fine_pts: Vec<Vec<f64>> = (0..fine_len)
        .map(|mut j| {
            let mut v = vec![0.0; d];
            for a in (0..d).rev() {
                v[a] = fine_axis[j % fine_n];
                j /= fine_n;
            }
            v
        })
        .collect();
    let fu = interpolate(f, &fine_pts)?;
    let gu = interpolate(g, &fine_pts)?;
    let fine_index = |m: &[i64]| -> Option<usize> {
        let half = (fine_n / 2) as i64;
        let mut acc = 0;
        for &c in m {
            if c < -half || c >= half {
                return None;
            }
            acc = acc * fine_n + (c + half) as usize;
        }
        Some(acc)
    };
    let t_count = (2 * n) as usize;
    let t_len = t_count.pow(d as u32);
    let h = spec.spacing();
    let cell = f.cell();
    let values = (0..out_spec.len())
        .into_par_iter()
        .map(|q| {
            let mut pos = vec![0; 2 * d];
            out_spec.unflatten(q, &mut pos);
            let xa: Vec<i64> = pos[..d].iter().map(|&k| spec.centered(k)).collect();
            let xib: Vec<i64> = pos[d..].iter().map(|&k| spec.centered(k)).collect();
            let mut s = vec![0i64; d];
            let mut u = vec![0i64; d];
            let mut v = vec![0i64; d];
            let mut acc = Complex64::new(0.0, 0.0);
            for ti in 0..t_len {
                let mut r = ti;
                for a in (0..d).rev() {
                    s[a] = (r % t_count) as i64 - n;
                    r /= t_count;
                }
                let mut phase = 0i64;
                for a in 0..d {
                    u[a] = up * xa[a] + p * s[a];
                    v[a] = up * xa[a] - (up - p) * s[a];
                    phase += xib[a] * s[a];
                }
                if let (Some(iu), Some(iv)) = (fine_index(&u), fine_index(&v)) {
                    // xi_b t_s = b s h^2 = b s / N
                    let e = Complex64::from_polar(1.0, -2.0 * PI * (phase.rem_euclid(n)) as f64 * h * h);
                    acc += fu[iu] * gu[iv].conj() * e;
                }
            }
            acc * cell
        })
        .collect();
    TfGrid::new(DiscreteSignal::from_raw(out_spec, values), label)
}

/// A metaplectic Wigner distribution compiled for one grid.
#[derive(Debug, Clone)]
pub struct WignerPlan {
    plan: MetaplecticPlan,
    signal_spec: GridSpec,
}

impl WignerPlan {
    /// `a` is `4d x 4d` and symplectic; `spec` is the `d`-dimensional grid.
    pub fn new<T: Scalar>(a: &Matrix<T>, spec: &GridSpec) -> Result<Self> {
        if a.rows() != 4 * spec.d || !a.is_square() {
            return Err(Error::Dimension(format!(
                "a {}x{} matrix does not define a distribution of {}-dimensional signals",
                a.rows(),
                a.cols(),
                spec.d
            )));
        }
        let plan = MetaplecticPlan::for_matrix(a, &spec.with_dim(2 * spec.d))?;
        Ok(WignerPlan { plan, signal_spec: *spec })
    }

    pub fn plan(&self) -> &MetaplecticPlan {
        &self.plan
    }

    pub fn apply(&self, f: &DiscreteSignal, g: &DiscreteSignal) -> Result<TfGrid> {
        check_pair(f, g)?;
        if f.spec() != &self.signal_spec {
            return Err(Error::Dimension("signal grid differs from the plan's grid".into()));
        }
        let w = self.plan.apply(&f.tensor(&g.conj())?)?;
        TfGrid::new(w, format!("wigner_general[{}]", self.plan.word().signature()))
    }
}

/// `W_A(f, g) = Â(f ⊗ conj g)`, defined up to a unit phase.
pub fn wigner_general<T: Scalar>(a: &Matrix<T>, f: &DiscreteSignal, g: &DiscreteSignal) -> Result<TfGrid> {
    WignerPlan::new(a, f.spec())?.apply(f, g)
}

/// The normal form of a shift-invertible distribution:
/// `|det E|^{-1/2} Φ_C(E^-1 z) V_{δ̂ g} f(E^-1 z)`, where `δ̂` has projection
/// `deformation`. `E^-1 z` is a re-indexing when `E^-1` is an integer
/// matrix and a band-limited interpolation of the STFT otherwise.
pub fn wigner_via_normal_form(
    e: &FloatMatrix,
    c: &FloatMatrix,
    deformation: &FloatMatrix,
    f: &DiscreteSignal,
    g: &DiscreteSignal,
) -> Result<TfGrid> {
    check_pair(f, g)?;
    let d = f.spec().d;
    for (m, name, size) in [(e, "E", 2 * d), (c, "C", 2 * d), (deformation, "deformation", 2 * d)] {
        if m.shape() != (size, size) {
            return Err(Error::Dimension(format!("{name} must be {size}x{size}")));
        }
    }
    if !is_invertible(e) {
        return Err(Error::Singular);
    }
    if !c.is_symmetric(1e-10) {
        return Err(Error::NotSymmetric);
    }
    let dg = metaplectic_apply(deformation, g)?;
    let v = stft(f, &dg)?.into_values();
    let spec = *v.spec();
    let ei = e.inverse()?;
    let prefactor = e.determinant()?.abs().powf(-0.5);
    let pts = spec.points();
    let us: Vec<Vec<f64>> = pts.iter().map(|z| ei.mul_vec(z).expect("conformable")).collect();
    let raw: Vec<Complex64> = if ei.is_integer(1e-12) {
        let h = spec.spacing();
        us.iter()
            .map(|u| {
                let m: Vec<i64> = u.iter().map(|x| (x / h).round() as i64).collect();
                spec.flatten_checked(&m).map_or(Complex64::new(0.0, 0.0), |k| v.samples()[k])
            })
            .collect()
    } else {
        interpolate(&v, &us)?
    };
    let values = raw
        .iter()
        .zip(&us)
        .map(|(val, u)| {
            let mut q = 0.0;
            for i in 0..u.len() {
                for j in 0..u.len() {
                    q += u[i] * c[(i, j)] * u[j];
                }
            }
            val * Complex64::from_polar(prefactor, PI * q)
        })
        .collect();
    TfGrid::new(DiscreteSignal::from_raw(spec, values), "wigner_normal_form")
}

/// [`wigner_via_normal_form`] with the parameters read off a
/// shift-invertible `A`: `E = E_A`, `C = M_A + L` and the deformation of `G_A`.
pub fn wigner_normal_form_of<T: Scalar>(a: &Matrix<T>, f: &DiscreteSignal, g: &DiscreteSignal) -> Result<TfGrid> {
    let t = factorize(a)?;
    let d = t.half_dim();
    let c = t.c.add(&swap_l::<T>(d))?;
    wigner_via_normal_form(&t.e.to_f64(), &c.to_f64(), &deformation(a)?.to_f64(), f, g)
}

/// Relative defect of the Moyal identity
/// `<W_A(f1, f2), W_A(g1, g2)> = <f1, g1> conj(<f2, g2>)`, measured against
/// the right-hand side.
pub fn moyal_check<T: Scalar>(
    a: &Matrix<T>,
    f: (&DiscreteSignal, &DiscreteSignal),
    g: (&DiscreteSignal, &DiscreteSignal),
) -> Result<f64> {
    let plan = WignerPlan::new(a, f.0.spec())?;
    let lhs = plan.apply(f.0, f.1)?.inner(&plan.apply(g.0, g.1)?)?;
    let rhs = f.0.inner(g.0)? * f.1.inner(g.1)?.conj();
    if rhs.norm() == 0.0 {
        return Err(Error::InvalidArgument("the inputs are orthogonal; the relative defect is undefined".into()));
    }
    Ok((lhs - rhs).norm() / rhs.norm())
}

/// Deviations found by [`covariance_check`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CovarianceDeviation {
    /// `max_z | |W_A(pi(w) f, g)(z)| - |W_A(f, g)(z - E_A w)| |`.
    pub modulus: f64,
    /// `max_z |W_A(pi(w) f, g) - Φ_{-M_A}(w) pi(E_A w, F_A w) W_A(f, g)|`
    /// after aligning the global phase.
    pub phase: f64,
}

/// Checks the covariance of `W_A` under time-frequency shifts of `f` by
/// `w = (x, xi)`; `E_A w` and `F_A w` must be grid points (translation wraps).
pub fn covariance_check<T: Scalar>(
    a: &Matrix<T>,
    w: &[f64],
    f: &DiscreteSignal,
    g: &DiscreteSignal,
) -> Result<CovarianceDeviation> {
    if !is_shift_invertible(a)? {
        return Err(Error::NotShiftInvertible);
    }
    let plan = WignerPlan::new(a, f.spec())?;
    let af = a.to_f64();
    let sub = submatrices(&af)?;
    let ew = sub.e.mul_vec(w)?;
    let fw = sub.f.mul_vec(w)?;
    let tf_spec = f.spec().with_dim(2 * f.spec().d);
    for v in ew.iter().chain(&fw) {
        tf_spec.grid_steps(*v)?;
    }
    let w0 = plan.apply(f, g)?.into_values();
    let w1 = plan.apply(&tf_shift(w, f)?, g)?.into_values();
    let mut shift = ew.clone();
    shift.extend(std::iter::repeat_n(0.0, ew.len()));
    let translated = tf_shift(&shift, &w0)?;
    let modulus = w1.modulus_diff(&translated)?;
    let m = compute_ma(&af)?;
    let mut full = ew;
    full.extend(fw);
    let mw = m.mul_vec(w)?;
    let q: f64 = w.iter().zip(&mw).map(|(a, b)| a * b).sum();
    let rhs = tf_shift(&full, &w0)?.scale(Complex64::from_polar(1.0, -PI * q));
    let phase = rhs.phase_aligned_to(&w1)?.max_abs_diff(&w1)?;
    Ok(CovarianceDeviation { modulus, phase })
}

/// Relative error `||lhs - rhs|| / ||lhs||` of the reproducing formula
/// `W_A(f, g) = <γ, g>^-1 sum_w V_g f(w) W_A(pi(w) γ, g) h^{2d}`, the sum
/// running over every grid point `w`.
pub fn reproducing_check<T: Scalar>(
    a: &Matrix<T>,
    f: &DiscreteSignal,
    g: &DiscreteSignal,
    gamma: &DiscreteSignal,
) -> Result<f64> {
    check_pair(f, g)?;
    f.check_same_grid(gamma)?;
    let spec = *f.spec();
    let tf_spec = spec.with_dim(2 * spec.d);
    if tf_spec.len() > 4096 {
        return Err(Error::ResourceCap(format!(
            "the reproducing sum needs {} distributions; use a grid with N^(2d) <= 4096",
            tf_spec.len()
        )));
    }
    let ip = gamma.inner(g)?;
    if ip.norm() <= 1e-12 * gamma.norm() * g.norm() {
        return Err(Error::Hypothesis("<gamma, g> vanishes".into()));
    }
    let plan = WignerPlan::new(a, &spec)?;
    let lhs = plan.apply(f, g)?.into_values();
    let v = stft(f, g)?.into_values();
    let pts = tf_spec.points();
    let cell = tf_spec.spacing().powi(tf_spec.d as i32);
    let zero = || vec![Complex64::new(0.0, 0.0); tf_spec.len()];
    let sum = pts
        .par_iter()
        .zip(v.samples().par_iter())
        .try_fold(zero, |mut acc, (w, coeff)| -> Result<Vec<Complex64>> {
            let term = plan.apply(&tf_shift(w, gamma)?, g)?;
            for (a, b) in acc.iter_mut().zip(term.values().samples()) {
                *a += coeff * b;
            }
            Ok(acc)
        })
        .try_reduce(zero, |mut a, b| {
            for (x, y) in a.iter_mut().zip(&b) {
                *x += y;
            }
            Ok(a)
        })?;
    let scale = cell / ip;
    let rhs = DiscreteSignal::from_raw(tf_spec, sum.into_iter().map(|z| z * scale).collect());
    Ok(lhs.sub(&rhs)?.norm() / lhs.norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::stft_matrix;

    fn gauss(n: usize, x0: f64, xi0: f64) -> DiscreteSignal {
        DiscreteSignal::gaussian(GridSpec::self_dual(1, n).unwrap(), &[x0], &[xi0]).unwrap()
    }

    #[test]
    fn stft_at_origin_is_inner_product() {
        let (f, g) = (gauss(16, 0.3, 0.5), gauss(16, -0.2, 0.0));
        let v = stft(&f, &g).unwrap();
        assert!((v.at(&[0, 0]) - f.inner(&g).unwrap()).norm() < 1e-14);
    }

    #[test]
    fn zero_window_is_rejected() {
        let f = gauss(16, 0.0, 0.0);
        let z = DiscreteSignal::zeros(*f.spec());
        assert!(matches!(stft(&f, &z), Err(Error::ZeroWindow)));
    }

    #[test]
    fn unsupported_tau() {
        let f = gauss(16, 0.0, 0.0);
        assert!(matches!(tau_wigner(1.0 / 3.0, &f, &f), Err(Error::UnsupportedTau(_))));
    }

    #[test]
    fn pipeline_reproduces_stft() {
        let (f, g) = (gauss(16, 0.3, 0.5), gauss(16, 0.0, 0.0));
        let v = stft(&f, &g).unwrap();
        let w = wigner_general(&stft_matrix::<f64>(1), &f, &g).unwrap();
        assert!(w.values().modulus_diff(v.values()).unwrap() < 1e-12);
    }

    #[test]
    fn tf_grid_io_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let f = gauss(8, 0.0, 0.0);
        let v = stft(&f, &f).unwrap();
        let p = dir.path().join("w.bin");
        v.write_bin(&p).unwrap();
        let back = TfGrid::read_bin(&p).unwrap();
        assert_eq!(back.values(), v.values());
        assert_eq!(back.provenance(), "stft");
        let img = dir.path().join("w.pgm");
        v.write_pgm(&img, 80.0).unwrap();
        let bytes = std::fs::read(&img).unwrap();
        assert!(bytes.starts_with(b"P5\n8 8\n255\n"));
        assert_eq!(bytes.len(), b"P5\n8 8\n255\n".len() + 64);
    }
}
