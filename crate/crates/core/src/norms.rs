//! Weights, weighted mixed `L^{p,q}_m` norms on phase-space grids, modulation
//! norms, and the finite-grid forms of the dilation, equivalence and
//! counterexample statements.
//!
//! Phase-space grids are stored row-major over `(x, y)`; the inner `p`-norm
//! runs over the first `d` axes and the outer `q`-norm over the last `d`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::distributions::{stft, TfGrid, WignerPlan};
use crate::error::{Error, Result};
use crate::grid::{DiscreteSignal, GridSpec};
use crate::matrix::{FloatMatrix, Matrix};
use crate::scalar::Scalar;
use crate::shift_invertible::is_shift_invertible;
use crate::symplectic::{standard_j, submatrices};

/// A positive weight on phase space.
#[derive(Debug, Clone, PartialEq)]
pub enum Weight {
    /// `v_s(z) = (1 + |z|)^s`.
    Polynomial { s: f64 },
    /// Values on the points of a grid, read off at the nearest sample.
    Tabulated { spec: GridSpec, values: Vec<f64> },
}

impl Weight {
    pub fn unit() -> Self {
        Weight::Polynomial { s: 0.0 }
    }

    pub fn polynomial(s: f64) -> Result<Self> {
        if !s.is_finite() {
            return Err(Error::InvalidWeight(format!("exponent {s} is not finite")));
        }
        Ok(Weight::Polynomial { s })
    }

    /// Tabulated weight; values must be positive and even (`w(z) = w(-z)`
    /// wherever both points are on the grid).
    pub fn tabulated(spec: GridSpec, values: Vec<f64>) -> Result<Self> {
        if values.len() != spec.len() {
            return Err(Error::Dimension(format!("{} values for a grid of {} points", values.len(), spec.len())));
        }
        if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
            return Err(Error::InvalidWeight(format!("weight value {v} is not positive")));
        }
        let mut pos = vec![0; spec.d];
        for (i, &v) in values.iter().enumerate() {
            spec.unflatten(i, &mut pos);
            let neg: Vec<i64> = pos.iter().map(|&k| -spec.centered(k)).collect();
            if let Some(j) = spec.flatten_checked(&neg) {
                if (values[j] - v).abs() > 1e-12 * v.max(values[j]) {
                    return Err(Error::InvalidWeight("tabulated weight is not even".into()));
                }
            }
        }
        Ok(Weight::Tabulated { spec, values })
    }

    pub fn is_unit(&self) -> bool {
        matches!(self, Weight::Polynomial { s } if *s == 0.0)
    }

    pub fn eval(&self, z: &[f64]) -> f64 {
        match self {
            Weight::Polynomial { s } => {
                if *s == 0.0 {
                    return 1.0;
                }
                let r = z.iter().map(|v| v * v).sum::<f64>().sqrt();
                (1.0 + r).powf(*s)
            }
            Weight::Tabulated { spec, values } => {
                let h = spec.spacing();
                let half = (spec.n / 2) as i64;
                let idx: Vec<i64> = z.iter().map(|v| ((v / h).round() as i64).clamp(-half, half - 1)).collect();
                values[spec.flatten_wrapped(&idx)]
            }
        }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::Polynomial { s } if *s == 0.0 => write!(f, "1"),
            Weight::Polynomial { s } => write!(f, "vs:{s}"),
            Weight::Tabulated { spec, .. } => write!(f, "tabulated({}-dim, N={})", spec.d, spec.n),
        }
    }
}

/// Parses `1` (unit weight) or `vs:S` (polynomial weight of exponent `S`).
impl FromStr for Weight {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "1" || s.eq_ignore_ascii_case("none") {
            return Ok(Weight::unit());
        }
        match s.strip_prefix("vs:") {
            Some(e) => Weight::polynomial(
                e.parse().map_err(|_| Error::InvalidWeight(format!("bad polynomial exponent '{e}'")))?,
            ),
            None => Err(Error::InvalidWeight(format!("unknown weight '{s}' (expected 1 or vs:S)"))),
        }
    }
}

/// Parses an exponent in `(0, inf]`; `inf` is accepted.
pub fn parse_exponent(s: &str) -> Result<f64> {
    let v = match s.trim() {
        "inf" | "infinity" | "Inf" => f64::INFINITY,
        t => t.parse().map_err(|_| Error::InvalidExponent(format!("'{t}' is not a number")))?,
    };
    check_exponent(v)?;
    Ok(v)
}

fn check_exponent(p: f64) -> Result<()> {
    if p > 0.0 && !p.is_nan() {
        Ok(())
    } else {
        Err(Error::InvalidExponent(format!("{p} is not in (0, inf]")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MixedNormParams {
    pub p: f64,
    pub q: f64,
    pub weight: Weight,
}

impl MixedNormParams {
    pub fn new(p: f64, q: f64, weight: Weight) -> Result<Self> {
        check_exponent(p)?;
        check_exponent(q)?;
        Ok(MixedNormParams { p, q, weight })
    }

    pub fn unweighted(p: f64, q: f64) -> Result<Self> {
        Self::new(p, q, Weight::unit())
    }
}

fn lp_accumulate(values: impl Iterator<Item = f64>, p: f64, cell: f64) -> f64 {
    if p.is_infinite() {
        values.fold(0.0, f64::max)
    } else {
        (values.map(|v| v.powf(p)).sum::<f64>() * cell).powf(1.0 / p)
    }
}

fn mixed_norm_with_cell(f: &TfGrid, params: &MixedNormParams, cell: f64) -> Result<f64> {
    check_exponent(params.p)?;
    check_exponent(params.q)?;
    let spec = *f.spec();
    if spec.is_empty() {
        return Err(Error::InvalidGrid("empty grid".into()));
    }
    let block = spec.n.pow(f.half_dim() as u32);
    let samples = f.values().samples();
    let weighted: Vec<f64> = if params.weight.is_unit() {
        samples.iter().map(|z| z.norm()).collect()
    } else {
        let pts = spec.points();
        samples.iter().zip(&pts).map(|(z, x)| z.norm() * params.weight.eval(x)).collect()
    };
    let inner: Vec<f64> = (0..block)
        .map(|y| lp_accumulate((0..block).map(|x| weighted[x * block + y]), params.p, cell))
        .collect();
    Ok(lp_accumulate(inner.into_iter(), params.q, cell))
}

/// Riemann-sum `L^{p,q}_m` norm with cell measure `h^d` in each block; a
/// quasi-norm when `min(p, q) < 1`, a maximum for infinite exponents.
pub fn mixed_norm(f: &TfGrid, params: &MixedNormParams) -> Result<f64> {
    let h = f.spec().spacing();
    mixed_norm_with_cell(f, params, h.powi(f.half_dim() as i32))
}

/// The same functional with counting measure (the plain sequence norm).
pub fn sequence_mixed_norm(f: &TfGrid, params: &MixedNormParams) -> Result<f64> {
    mixed_norm_with_cell(f, params, 1.0)
}

/// `||V_g f||_{L^{p,q}_m}`.
pub fn modulation_norm(f: &DiscreteSignal, g: &DiscreteSignal, params: &MixedNormParams) -> Result<f64> {
    mixed_norm(&stft(f, g)?, params)
}

/// Result of [`check_moderate`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModerateReport {
    pub samples: usize,
    /// Largest observed `m(z1 + z2) / (v(z1) m(z2))`.
    pub worst_ratio: f64,
    pub moderate: bool,
}

/// Samples `m(z1 + z2) / (v(z1) m(z2))` over random pairs of points of
/// `spec`; `m` counts as `v`-moderate when every ratio is at most `constant`.
pub fn check_moderate(
    m: &Weight,
    v: &Weight,
    spec: &GridSpec,
    samples: usize,
    constant: f64,
    seed: u64,
) -> Result<ModerateReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let half = (spec.n / 2) as i64;
    let h = spec.spacing();
    let mut worst: f64 = 0.0;
    let point = |rng: &mut ChaCha8Rng| -> Vec<f64> { (0..spec.d).map(|_| rng.gen_range(-half..half) as f64 * h).collect() };
    for _ in 0..samples {
        let z1 = point(&mut rng);
        let z2 = point(&mut rng);
        let sum: Vec<f64> = z1.iter().zip(&z2).map(|(a, b)| a + b).collect();
        let (a, b, c) = (m.eval(&sum), v.eval(&z1), m.eval(&z2));
        for w in [a, b, c] {
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::InvalidWeight(format!("weight value {w} is not positive")));
            }
        }
        worst = worst.max(a / (b * c));
    }
    Ok(ModerateReport { samples, worst_ratio: worst, moderate: worst <= constant })
}

/// `T_S F = |det S|^{1/2} F(S .)` for an integer matrix `S`; samples whose
/// image leaves the grid are taken as zero.
pub fn tf_dilate(s: &FloatMatrix, f: &TfGrid) -> Result<TfGrid> {
    let spec = *f.spec();
    if s.shape() != (spec.d, spec.d) {
        return Err(Error::Dimension(format!("matrix is {:?}, grid has dimension {}", s.shape(), spec.d)));
    }
    if !s.is_integer(1e-12) {
        return Err(Error::OffGrid("only integer matrices map the grid into itself".into()));
    }
    let det = s.determinant()?;
    if det.abs() < 0.5 {
        return Err(Error::Singular);
    }
    let scale = det.abs().sqrt();
    let si: Vec<i64> = s.entries().iter().map(|v| v.round() as i64).collect();
    let d = spec.d;
    let src = f.values().samples();
    let values: Vec<Complex64> = (0..spec.len())
        .into_par_iter()
        .map_init(
            || (vec![0usize; d], vec![0i64; d]),
            |(pos, img), i| {
                spec.unflatten(i, pos);
                for r in 0..d {
                    img[r] = (0..d).map(|c| si[r * d + c] * spec.centered(pos[c])).sum();
                }
                spec.flatten_checked(img).map_or(Complex64::new(0.0, 0.0), |j| src[j] * scale)
            },
        )
        .collect();
    TfGrid::new(DiscreteSignal::new(spec, values)?, format!("dilation of {}", f.provenance()))
}

/// Random smooth phase-space function: a few Gaussian bumps with complex
/// amplitudes, centred near the origin.
pub fn random_bumps<R: Rng>(rng: &mut R, spec: GridSpec) -> Result<TfGrid> {
    let count = rng.gen_range(1..=4);
    let bumps: Vec<(Complex64, Vec<f64>, Vec<f64>)> = (0..count)
        .map(|_| {
            let amp = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let centre = (0..spec.d).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let width = (0..spec.d).map(|_| rng.gen_range(0.5..1.0)).collect();
            (amp, centre, width)
        })
        .collect();
    let values = DiscreteSignal::from_fn(spec, |z| {
        bumps
            .iter()
            .map(|(a, c, w)| {
                let r: f64 = z.iter().zip(c).zip(w).map(|((x, c), w)| ((x - c) / w).powi(2)).sum();
                a * (-std::f64::consts::PI * r).exp()
            })
            .sum()
    });
    TfGrid::new(values, "random bumps")
}

fn inv_exp(p: f64) -> f64 {
    if p.is_infinite() {
        0.0
    } else {
        1.0 / p
    }
}

/// Statistics of `||T_S F|| / ||F||` over random `F`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DilationReport {
    pub trials: usize,
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub mean_ratio: f64,
    /// Standard deviation over mean.
    pub relative_spread: f64,
    /// `|det A|^{1/2 - 1/p} |det D|^{1/2 - 1/q}`.
    pub constant: f64,
    pub pass: bool,
}

/// Measures `mixed_norm(T_S F) / mixed_norm(F)` for `S = [[A, B], [0, D]]`
/// on random smooth `F`; passes when the ratio is constant and equal to the
/// closed-form constant, both within `tol` (relative).
pub fn dilation_norm_ratio(
    s: &FloatMatrix,
    params: &MixedNormParams,
    spec: &GridSpec,
    trials: usize,
    tol: f64,
    seed: u64,
) -> Result<DilationReport> {
    if !spec.d.is_multiple_of(2) || s.shape() != (spec.d, spec.d) {
        return Err(Error::Dimension("S must be square of the phase-space dimension".into()));
    }
    if trials == 0 {
        return Err(Error::InvalidArgument("at least one trial is required".into()));
    }
    let d = spec.d / 2;
    if !s.block(d, 0, d, d)?.is_zero_matrix(0.0) {
        return Err(Error::Hypothesis("lower-left block of S must vanish".into()));
    }
    let det_a = s.block(0, 0, d, d)?.determinant()?;
    let det_d = s.block(d, d, d, d)?.determinant()?;
    if det_a == 0.0 || det_d == 0.0 {
        return Err(Error::Singular);
    }
    let constant = det_a.abs().powf(0.5 - inv_exp(params.p)) * det_d.abs().powf(0.5 - inv_exp(params.q));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ratios = Vec::with_capacity(trials);
    for _ in 0..trials {
        let f = random_bumps(&mut rng, *spec)?;
        ratios.push(mixed_norm(&tf_dilate(s, &f)?, params)? / mixed_norm(&f, params)?);
    }
    let n = trials as f64;
    let mean = ratios.iter().sum::<f64>() / n;
    let var = ratios.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / n;
    let relative_spread = var.sqrt() / mean;
    Ok(DilationReport {
        trials,
        min_ratio: ratios.iter().copied().fold(f64::INFINITY, f64::min),
        max_ratio: ratios.iter().copied().fold(0.0, f64::max),
        mean_ratio: mean,
        relative_spread,
        constant,
        pass: relative_spread <= tol && (mean / constant - 1.0).abs() <= tol,
    })
}

/// Outcome of a verifier, serialized as the JSON report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub theorem: String,
    pub hypothesis: String,
    pub trials: usize,
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub slope: Option<f64>,
    pub pass: bool,
}

impl VerificationReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Random test signal: a Gaussian with random centre, frequency and width
/// plus a little complex noise.
pub fn random_gaussian_with_noise<R: Rng>(rng: &mut R, spec: GridSpec, noise: f64) -> Result<DiscreteSignal> {
    let x0: Vec<f64> = (0..spec.d).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let xi0: Vec<f64> = (0..spec.d).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let g = DiscreteSignal::gaussian_scaled(spec, &x0, &xi0, rng.gen_range(0.5..2.0))?;
    let samples = g
        .samples()
        .iter()
        .map(|z| z + Complex64::new(rng.gen_range(-noise..=noise), rng.gen_range(-noise..=noise)))
        .collect();
    DiscreteSignal::new(spec, samples)
}

/// Compares `mixed_norm(W_A(f, g))` with `modulation_norm(f, g)` over random
/// `f`. Passes when the hypotheses hold (`A` shift-invertible, and `E_A`
/// block upper triangular unless `p = q`) and `max/min` of the ratio stays
/// below `spread_bound`.
pub fn equivalence_check<T: Scalar>(
    a: &Matrix<T>,
    g: &DiscreteSignal,
    params: &MixedNormParams,
    trials: usize,
    spread_bound: f64,
    seed: u64,
) -> Result<VerificationReport> {
    if g.norm() == 0.0 {
        return Err(Error::ZeroWindow);
    }
    if trials == 0 {
        return Err(Error::InvalidArgument("at least one trial is required".into()));
    }
    if !is_shift_invertible(a)? {
        return Err(Error::NotShiftInvertible);
    }
    let spec = *g.spec();
    let d = spec.d;
    let e = submatrices(&a.to_f64())?.e;
    let upper = e.block(d, 0, d, d)?.is_zero_matrix(1e-12);
    let einv = e.inverse()?;
    let tf_spec = spec.with_dim(2 * d);
    let comparability = tf_spec
        .points()
        .iter()
        .map(|z| {
            let r = params.weight.eval(&einv.mul_vec(z).unwrap_or_default()) / params.weight.eval(z);
            r.max(1.0 / r)
        })
        .fold(1.0, f64::max);
    let holds = upper || params.p == params.q;
    let hypothesis = format!(
        "shift-invertible; E_A {}upper triangular; p = {}, q = {}; weight {} with m(E^-1 z)/m(z) within factor {:.3} on the grid",
        if upper { "" } else { "not " },
        params.p,
        params.q,
        params.weight,
        comparability
    );
    let plan = WignerPlan::new(a, &spec)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let signals: Vec<DiscreteSignal> =
        (0..trials).map(|_| random_gaussian_with_noise(&mut rng, spec, 0.05)).collect::<Result<_>>()?;
    let ratios: Vec<f64> = signals
        .par_iter()
        .map(|f| Ok(mixed_norm(&plan.apply(f, g)?, params)? / modulation_norm(f, g, params)?))
        .collect::<Result<_>>()?;
    let min_ratio = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let max_ratio = ratios.iter().copied().fold(0.0, f64::max);
    Ok(VerificationReport {
        theorem: "norm equivalence of W_A(f, g) with the modulation norm".into(),
        hypothesis,
        trials,
        min_ratio,
        max_ratio,
        slope: None,
        pass: holds && max_ratio / min_ratio <= spread_bound,
    })
}

/// Indicator of `[0, a) x [0, 1)` on a `2`-dimensional grid; `a` must be a
/// multiple of the spacing inside the grid.
pub fn box_indicator(spec: &GridSpec, a: f64) -> Result<TfGrid> {
    if spec.d != 2 {
        return Err(Error::Dimension("the box indicator lives on a 2-dimensional grid".into()));
    }
    let na = spec.grid_steps(a)?;
    let n1 = spec.grid_steps(1.0)?;
    let half = (spec.n / 2) as i64;
    if na <= 0 || na > half || n1 > half {
        return Err(Error::OffGrid(format!("[0, {a}) x [0, 1) does not fit in the grid")));
    }
    let mut values = vec![Complex64::new(0.0, 0.0); spec.len()];
    for i in 0..na {
        for j in 0..n1 {
            values[spec.flatten_wrapped(&[i, j])] = Complex64::new(1.0, 0.0);
        }
    }
    TfGrid::new(DiscreteSignal::new(*spec, values)?, format!("indicator of [0,{a})x[0,1)"))
}

/// `mixed_norm(D_J F_a) / mixed_norm(F_a)` for the box indicator `F_a`.
pub fn dj_ratio(spec: &GridSpec, p: f64, q: f64, a: f64) -> Result<f64> {
    let params = MixedNormParams::unweighted(p, q)?;
    let f = box_indicator(spec, a)?;
    let j: FloatMatrix = standard_j(1);
    Ok(mixed_norm(&tf_dilate(&j, &f)?, &params)? / mixed_norm(&f, &params)?)
}

/// Least-squares slope of `log y` against `log x`.
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (lx, ly): (Vec<f64>, Vec<f64>) = points.iter().map(|(x, y)| (x.ln(), y.ln())).unzip();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

/// Table of `D_J` ratios over `a_values` and the fitted power law.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CounterexampleTable {
    pub p: f64,
    pub q: f64,
    pub rows: Vec<(f64, f64)>,
    pub slope: f64,
    /// `1/q - 1/p`.
    pub expected_slope: f64,
    pub pass: bool,
}

impl CounterexampleTable {
    pub fn report(&self) -> VerificationReport {
        let ratios = self.rows.iter().map(|r| r.1);
        VerificationReport {
            theorem: "D_J is unbounded on L^{p,q} for p != q".into(),
            hypothesis: format!("p = {}, q = {}, a in {:?}", self.p, self.q, self.rows.iter().map(|r| r.0).collect::<Vec<_>>()),
            trials: self.rows.len(),
            min_ratio: ratios.clone().fold(f64::INFINITY, f64::min),
            max_ratio: ratios.fold(0.0, f64::max),
            slope: Some(self.slope),
            pass: self.pass,
        }
    }
}

/// Measures the growth `a^{1/q - 1/p}` of the `D_J` ratio on box indicators;
/// passes when the log-log slope is within 5% of `1/q - 1/p`.
pub fn counterexample_dj(spec: &GridSpec, p: f64, q: f64, a_values: &[f64]) -> Result<CounterexampleTable> {
    check_exponent(p)?;
    check_exponent(q)?;
    if p == q {
        return Err(Error::InvalidArgument("p = q gives a constant ratio, not a counterexample".into()));
    }
    if a_values.len() < 2 {
        return Err(Error::InvalidArgument("need at least two values of a".into()));
    }
    let rows: Vec<(f64, f64)> = a_values.iter().map(|&a| Ok((a, dj_ratio(spec, p, q, a)?))).collect::<Result<_>>()?;
    let slope = log_log_slope(&rows);
    let expected_slope = inv_exp(q) - inv_exp(p);
    Ok(CounterexampleTable { p, q, rows, slope, expected_slope, pass: (slope - expected_slope).abs() <= 0.05 * expected_slope.abs() })
}

/// Default grid for the counterexample: `N = 64`, `T = 16`.
pub fn counterexample_grid() -> GridSpec {
    GridSpec::new(2, 64, 16.0).expect("valid grid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::stft_matrix;

    fn sd(d: usize, n: usize) -> GridSpec {
        GridSpec::self_dual(d, n).unwrap()
    }

    #[test]
    fn two_two_norm_is_l2() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = random_bumps(&mut rng, sd(2, 16)).unwrap();
        let n = mixed_norm(&f, &MixedNormParams::unweighted(2.0, 2.0).unwrap()).unwrap();
        assert!((n - f.norm()).abs() < 1e-12 * n);
    }

    #[test]
    fn single_cell_indicator() {
        let spec = sd(2, 16);
        let mut v = vec![Complex64::new(0.0, 0.0); spec.len()];
        v[spec.flatten_wrapped(&[1, -2])] = Complex64::new(1.0, 0.0);
        let f = TfGrid::new(DiscreteSignal::new(spec, v).unwrap(), "cell").unwrap();
        let h = spec.spacing();
        for (p, q) in [(1.0, 1.0), (2.0, 1.0), (1.0, 3.0), (0.5, 4.0)] {
            let n = mixed_norm(&f, &MixedNormParams::unweighted(p, q).unwrap()).unwrap();
            let expect = h.powf(1.0 / p) * h.powf(1.0 / q);
            assert!((n - expect).abs() < 1e-12, "p={p} q={q}");
        }
        let inf = mixed_norm(&f, &MixedNormParams::unweighted(f64::INFINITY, 2.0).unwrap()).unwrap();
        assert!((inf - h.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn box_indicator_norms() {
        let spec = counterexample_grid();
        for (p, q) in [(2.0, 1.0), (1.0, 2.0), (4.0, 2.0)] {
            let params = MixedNormParams::unweighted(p, q).unwrap();
            for a in [1.0, 2.0, 4.0, 8.0] {
                let f = box_indicator(&spec, a).unwrap();
                let n = mixed_norm(&f, &params).unwrap();
                assert!((n - a.powf(1.0 / p)).abs() < 1e-12);
                let r = dj_ratio(&spec, p, q, a).unwrap();
                assert!((r - a.powf(1.0 / q - 1.0 / p)).abs() < 1e-12);
            }
        }
        assert!((dj_ratio(&spec, 2.0, 1.0, 4.0).unwrap() - 2.0).abs() < 1e-12);
        assert!((dj_ratio(&spec, 3.0, 3.0, 8.0).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn counterexample_rejects_equal_exponents() {
        assert!(counterexample_dj(&counterexample_grid(), 2.0, 2.0, &[1.0, 2.0]).is_err());
        let t = counterexample_dj(&counterexample_grid(), 2.0, 1.0, &[1.0, 2.0, 4.0, 8.0]).unwrap();
        assert!(t.pass && (t.slope - 0.5).abs() < 1e-12);
    }

    #[test]
    fn weights_and_moderateness() {
        let spec = sd(2, 16);
        let unit = Weight::unit();
        assert!(check_moderate(&unit, &unit, &spec, 200, 1.0, 3).unwrap().moderate);
        for s in [-2.0, -0.5, 1.0, 3.0] {
            let m = Weight::polynomial(s).unwrap();
            let v = Weight::polynomial(f64::abs(s)).unwrap();
            let r = check_moderate(&m, &v, &spec, 500, 1.0 + 1e-12, 4).unwrap();
            assert!(r.moderate, "s={s} worst={}", r.worst_ratio);
        }
        let w: Weight = "vs:1.5".parse().unwrap();
        assert_eq!(w, Weight::Polynomial { s: 1.5 });
        assert!("vs:x".parse::<Weight>().is_err());
        assert!("triangle".parse::<Weight>().is_err());
    }

    #[test]
    fn tabulated_weight_validation() {
        let spec = sd(2, 4);
        let pts = spec.points();
        let even: Vec<f64> = pts.iter().map(|z| 1.0 + z[0] * z[0] + z[1].abs()).collect();
        let w = Weight::tabulated(spec, even).unwrap();
        assert_eq!(w.eval(&[0.0, 0.0]), 1.0);
        let odd: Vec<f64> = pts.iter().map(|z| 2.0 + z[0]).collect();
        assert!(matches!(Weight::tabulated(spec, odd), Err(Error::InvalidWeight(_))));
        assert!(Weight::tabulated(spec, vec![0.0; 16]).is_err());
    }

    #[test]
    fn exponents_are_validated() {
        assert!(MixedNormParams::unweighted(0.0, 1.0).is_err());
        assert!(MixedNormParams::unweighted(1.0, -2.0).is_err());
        assert_eq!(parse_exponent("inf").unwrap(), f64::INFINITY);
        assert!(parse_exponent("zero").is_err());
    }

    #[test]
    fn dilation_ratio_identity_and_diagonal() {
        let spec = GridSpec::new(2, 64, 8.0).unwrap();
        let params = MixedNormParams::unweighted(1.0, 2.0).unwrap();
        let id = FloatMatrix::identity(2);
        let r = dilation_norm_ratio(&id, &params, &spec, 5, 1e-12, 1).unwrap();
        assert!(r.pass && (r.mean_ratio - 1.0).abs() < 1e-12);
        let s = FloatMatrix::diag(&[2.0, 1.0]);
        let r = dilation_norm_ratio(&s, &params, &spec, 10, 0.02, 2).unwrap();
        assert!(r.pass, "{r:?}");
        let lower = FloatMatrix::from_rows(vec![vec![1.0, 0.0], vec![1.0, 1.0]]).unwrap();
        assert!(matches!(dilation_norm_ratio(&lower, &params, &spec, 1, 0.02, 0), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn modulation_norm_is_moyal_for_two_two() {
        let spec = sd(1, 32);
        let f = DiscreteSignal::gaussian(spec, &[0.5], &[-0.5]).unwrap();
        let g = DiscreteSignal::gaussian_scaled(spec, &[0.0], &[0.0], 2.0).unwrap();
        let n = modulation_norm(&f, &g, &MixedNormParams::unweighted(2.0, 2.0).unwrap()).unwrap();
        assert!((n - f.norm() * g.norm()).abs() < 1e-8);
    }

    #[test]
    fn equivalence_for_stft_is_identity() {
        let spec = sd(1, 16);
        let g = DiscreteSignal::gaussian(spec, &[0.0], &[0.0]).unwrap();
        let params = MixedNormParams::unweighted(1.0, 2.0).unwrap();
        let r = equivalence_check(&stft_matrix::<f64>(1), &g, &params, 4, 10.0, 9).unwrap();
        assert!(r.pass && (r.max_ratio - 1.0).abs() < 1e-6 && (r.min_ratio - 1.0).abs() < 1e-6);
        let json = r.to_json().unwrap();
        assert!(json.contains("\"slope\": null"));
    }
}
