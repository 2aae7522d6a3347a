//! Discrete metaplectic operators.
//!
//! Every symplectic matrix is written as a word in the generators `J`, `D_E`
//! and `V_C`, and the word is applied factor by factor on a self-dual grid:
//!
//! * `J`   -> centered DFT,
//! * `V_C` -> multiplication by the chirp `e^{i pi x.Cx}`,
//! * `D_E` -> `|det E|^{1/2} f(E x)`; an exact periodic permutation when `E` is
//!   an integer matrix with `|det E| = 1`, band-limited resampling otherwise.
//!
//! Operators are determined by their projection only up to a unit phase.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fourier::fourier;
use crate::grid::{DiscreteSignal, GridSpec};
use crate::matrix::{FloatMatrix, Matrix};
use crate::scalar::Scalar;
use crate::shift_invertible::is_invertible;
use crate::symplectic::{chirp, dilation, is_symplectic, standard_j};

/// Upper bound on the number of kernel evaluations of one dense application.
pub const MAX_DENSE_WORK: usize = 1 << 28;

/// How many of the cheapest candidate words a plan compares on probes.
const PROBED_WORDS: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub enum Factor<T> {
    J,
    Dilation(Matrix<T>),
    Chirp(Matrix<T>),
    /// A free symplectic matrix (invertible upper-right block) applied
    /// through its integral kernel.
    FreeKernel(Matrix<T>),
}

impl<T: Scalar> Factor<T> {
    /// Projection of the factor at half-dimension `n`.
    pub fn matrix(&self, n: usize) -> Result<Matrix<T>> {
        match self {
            Factor::J => Ok(standard_j(n)),
            Factor::Dilation(e) => dilation(e),
            Factor::Chirp(c) => chirp(c),
            Factor::FreeKernel(s) => Ok(s.clone()),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Factor::J => "J",
            Factor::Dilation(_) => "D",
            Factor::Chirp(_) => "V",
            Factor::FreeKernel(_) => "K",
        }
    }

    /// True when the factor acts exactly on the periodic grid (no resampling).
    pub fn is_grid_exact(&self) -> bool {
        match self {
            Factor::J => true,
            Factor::Chirp(c) => c.is_integer(1e-12),
            Factor::Dilation(e) => is_unimodular_integer(e),
            Factor::FreeKernel(_) => false,
        }
    }

    pub fn to_f64(&self) -> Factor<f64> {
        match self {
            Factor::J => Factor::J,
            Factor::Dilation(e) => Factor::Dilation(e.to_f64()),
            Factor::Chirp(c) => Factor::Chirp(c.to_f64()),
            Factor::FreeKernel(s) => Factor::FreeKernel(s.to_f64()),
        }
    }
}

fn is_unimodular_integer<T: Scalar>(e: &Matrix<T>) -> bool {
    e.is_integer(1e-12)
        && e.determinant()
            .map(|d| (d.magnitude() - 1.0).abs() < 1e-9)
            .unwrap_or(false)
}

/// Product of factors (left to right) equal to a symplectic matrix, applied
/// right to left. `phase` is the unit scalar multiplying the operator.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorWord<T> {
    pub n: usize,
    pub factors: Vec<Factor<T>>,
    pub phase: Complex64,
}

impl<T: Scalar> GeneratorWord<T> {
    pub fn product(&self) -> Result<Matrix<T>> {
        let mut acc = Matrix::identity(2 * self.n);
        for f in &self.factors {
            acc = acc.mul(&f.matrix(self.n)?)?;
        }
        Ok(acc)
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn is_grid_exact(&self) -> bool {
        self.factors.iter().all(Factor::is_grid_exact)
    }

    /// Largest row 2-norm among the partial products applied right to left;
    /// a proxy for how far intermediate signals spread on the grid.
    pub fn spread_cost(&self) -> f64 {
        let mut acc = FloatMatrix::identity(2 * self.n);
        let mut cost: f64 = 1.0;
        for f in self.factors.iter().rev() {
            acc = f.to_f64().matrix(self.n).expect("valid factor").mul(&acc).expect("conformable");
            for i in 0..acc.rows() {
                cost = cost.max(acc.row(i).iter().map(|x| x * x).sum::<f64>().sqrt());
            }
        }
        cost
    }

    pub fn to_f64(&self) -> GeneratorWord<f64> {
        GeneratorWord { n: self.n, factors: self.factors.iter().map(Factor::to_f64).collect(), phase: self.phase }
    }

    /// Short textual form, e.g. `V D J V`.
    pub fn signature(&self) -> String {
        self.factors.iter().map(Factor::name).collect::<Vec<_>>().join(" ")
    }

    /// Drops trivial factors and merges neighbours of the same kind.
    fn simplified(mut self) -> Self {
        let n = self.n;
        loop {
            let before = self.factors.len();
            let mut out: Vec<Factor<T>> = Vec::with_capacity(before);
            for f in self.factors.drain(..) {
                let f = match f {
                    Factor::Chirp(c) if c.is_zero_matrix(0.0) => continue,
                    Factor::Dilation(e) if e == Matrix::identity(n) => continue,
                    other => other,
                };
                let merged = match (out.last(), &f) {
                    (Some(Factor::Chirp(a)), Factor::Chirp(b)) => Some(Factor::Chirp(a.add(b).expect("same size"))),
                    // D_E D_F = D_{FE}
                    (Some(Factor::Dilation(a)), Factor::Dilation(b)) => {
                        Some(Factor::Dilation(b.mul(a).expect("same size")))
                    }
                    // J J = -I = D_{-I}
                    (Some(Factor::J), Factor::J) => Some(Factor::Dilation(Matrix::identity(n).neg())),
                    _ => None,
                };
                match merged {
                    Some(m) => {
                        out.pop();
                        out.push(m);
                    }
                    None => out.push(f),
                }
            }
            self.factors = out;
            if self.factors.len() == before {
                return self;
            }
        }
    }
}

fn blocks_of<T: Scalar>(s: &Matrix<T>) -> (Matrix<T>, Matrix<T>, Matrix<T>, Matrix<T>) {
    let n = s.rows() / 2;
    (
        s.block(0, 0, n, n).expect("in range"),
        s.block(0, n, n, n).expect("in range"),
        s.block(n, 0, n, n).expect("in range"),
        s.block(n, n, n, n).expect("in range"),
    )
}

/// `S = V_{DB^-1} D_{B^-1} J V_{B^-1 A}` when `B` is invertible.
fn free_word<T: Scalar>(s: &Matrix<T>) -> Option<Vec<Factor<T>>> {
    let (a, b, _, d) = blocks_of(s);
    if !is_invertible(&b) {
        return None;
    }
    let bi = b.inverse().ok()?;
    Some(vec![
        Factor::Chirp(d.mul(&bi).ok()?),
        Factor::Dilation(bi.clone()),
        Factor::J,
        Factor::Chirp(bi.mul(&a).ok()?),
    ])
}

/// Replaces the dilation of a free word `V D_X J V` by `D_{-X}`, absorbing a
/// trailing `D_{-I}` (which commutes with every generator).
fn negate_dilation<T: Scalar>(mut w: Vec<Factor<T>>) -> Vec<Factor<T>> {
    if let Factor::Dilation(x) = &w[1] {
        w[1] = Factor::Dilation(x.neg());
    }
    w
}

fn shift_candidates<T: Scalar>(n: usize) -> Vec<Matrix<T>> {
    let mut out: Vec<Matrix<T>> = Vec::new();
    for t in 1..=16 {
        out.push(Matrix::scalar_identity(n, T::from_i64(t)));
    }
    for (p, q) in [(1, 2), (-1, 2), (-1, 1), (-2, 1), (-3, 1)] {
        out.push(Matrix::scalar_identity(n, T::from_ratio(p, q)));
    }
    // small integer symmetric shifts, enumerated only while that stays cheap
    if n <= 2 {
        let slots: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
        let total = 3usize.pow(slots.len() as u32);
        for code in 0..total {
            let mut m = Matrix::zeros(n, n);
            let mut c = code;
            for &(i, j) in &slots {
                let v = T::from_i64((c % 3) as i64 - 1);
                c /= 3;
                m[(i, j)] = v.clone();
                m[(j, i)] = v;
            }
            if !m.is_zero_matrix(0.0) && !out.contains(&m) {
                out.push(m);
            }
        }
    }
    out
}

/// All generator words considered for `s`.
fn candidate_words<T: Scalar>(s: &Matrix<T>) -> Result<Vec<Vec<Factor<T>>>> {
    let n = s.rows() / 2;
    let mut out = Vec::new();
    let (a, b, c, _) = blocks_of(s);
    if b.is_zero_matrix(0.0) && is_invertible(&a) {
        let ai = a.inverse()?;
        out.push(vec![Factor::Chirp(c.mul(&ai)?), Factor::Dilation(ai)]);
    }
    if let Some(w) = free_word(s) {
        out.push(w);
    }
    for p in shift_candidates::<T>(n) {
        // S = (S V_P^T) V_{-P}^T and V_{-P}^T = J V_P J^{-1}, J^{-1} = D_{-I} J
        let vpt = chirp(&p)?.transpose();
        if let Some(w) = free_word(&s.mul(&vpt)?) {
            let mut w = negate_dilation(w);
            w.extend([Factor::J, Factor::Chirp(p), Factor::J]);
            out.push(w);
        }
    }
    // S = (S J) J^{-1}
    if let Some(w) = free_word(&s.mul(&standard_j(n))?) {
        let mut w = negate_dilation(w);
        w.push(Factor::J);
        out.push(w);
    }
    Ok(out)
}

/// Every generator word [`decompose_generators`] chooses from.
pub fn candidate_generator_words<T: Scalar>(s: &Matrix<T>) -> Result<Vec<GeneratorWord<T>>> {
    if !s.is_square() || !s.rows().is_multiple_of(2) || s.rows() == 0 {
        return Err(Error::Dimension("decomposition needs a 2n x 2n matrix".into()));
    }
    let n = s.rows() / 2;
    let tol = 1e-10 * s.max_norm().max(1.0).powi(2);
    if !is_symplectic(s, n, if T::MODE == crate::ScalarMode::Rational { 0.0 } else { tol })? {
        return Err(Error::NotSymplectic);
    }
    Ok(candidate_words(s)?
        .into_iter()
        .map(|f| GeneratorWord { n, factors: f, phase: Complex64::new(1.0, 0.0) }.simplified())
        .collect())
}

/// Writes a symplectic `S` as a word in `J`, `D_E`, `V_C`.
///
/// Among the candidate factorizations, words acting exactly on the periodic
/// grid are preferred; ties are broken by [`GeneratorWord::spread_cost`] and
/// then by length.
pub fn decompose_generators<T: Scalar>(s: &Matrix<T>) -> Result<GeneratorWord<T>> {
    let words = candidate_generator_words(s)?;
    if words.is_empty() {
        return Err(Error::Decomposition(
            "no shift P = tI (t <= 16) or small symmetric P makes the upper-right block invertible".into(),
        ));
    }
    let any_exact = words.iter().any(GeneratorWord::is_grid_exact);
    let best = words
        .into_iter()
        .filter(|w| !any_exact || w.is_grid_exact())
        .map(|w| (w.spread_cost(), w.len(), w))
        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
        .map(|(_, _, w)| w)
        .expect("non-empty");
    Ok(best)
}

fn chirp_phase(c: &FloatMatrix, x: &[f64]) -> Complex64 {
    let mut q = 0.0;
    for i in 0..x.len() {
        for j in 0..x.len() {
            q += x[i] * c[(i, j)] * x[j];
        }
    }
    Complex64::from_polar(1.0, PI * q)
}

fn check_square(m: &FloatMatrix, n: usize, what: &str) -> Result<()> {
    if m.shape() != (n, n) {
        return Err(Error::Dimension(format!("{what} must be {n}x{n} for this signal")));
    }
    Ok(())
}

/// Multiplication by `e^{i pi x.Cx}`.
pub fn chirp_mul(c: &FloatMatrix, f: &DiscreteSignal) -> Result<DiscreteSignal> {
    check_square(c, f.spec().d, "C")?;
    if !c.is_symmetric(1e-12) {
        return Err(Error::NotSymmetric);
    }
    let pts = f.spec().points();
    let samples = f.samples().iter().zip(&pts).map(|(v, x)| v * chirp_phase(c, x)).collect();
    Ok(DiscreteSignal::from_raw(*f.spec(), samples))
}

/// Re-indexing map of an integer dilation: output sample `p` reads input
/// sample `src[p]` (or zero).
fn integer_dilation_map(e: &FloatMatrix, spec: &GridSpec) -> Vec<Option<usize>> {
    let d = spec.d;
    let ei: Vec<i64> = e.entries().iter().map(|x| x.round() as i64).collect();
    let periodic = is_unimodular_integer(e);
    let mut pos = vec![0; d];
    let mut m = vec![0i64; d];
    let mut u = vec![0i64; d];
    (0..spec.len())
        .map(|p| {
            spec.unflatten(p, &mut pos);
            for (mi, &k) in m.iter_mut().zip(&pos) {
                *mi = spec.centered(k);
            }
            for i in 0..d {
                u[i] = (0..d).map(|j| ei[i * d + j] * m[j]).sum();
            }
            if periodic {
                Some(spec.flatten_wrapped(&u))
            } else {
                spec.flatten_checked(&u)
            }
        })
        .collect()
}

/// `|det E|^{1/2} f(E x)` for integer `E`: a periodic permutation when
/// `|det E| = 1`, otherwise a re-indexing with zeros off the grid.
pub fn dilate(e: &FloatMatrix, f: &DiscreteSignal) -> Result<DiscreteSignal> {
    check_square(e, f.spec().d, "E")?;
    if !is_invertible(e) {
        return Err(Error::Singular);
    }
    if !e.is_integer(1e-12) {
        return Err(Error::OffGrid(
            "dilation by a non-integer matrix needs resampling (use dilate_resampled)".into(),
        ));
    }
    let scale = e.determinant()?.abs().sqrt();
    let map = integer_dilation_map(e, f.spec());
    let zero = Complex64::new(0.0, 0.0);
    let samples = map.iter().map(|s| s.map_or(zero, |k| f.samples()[k] * scale)).collect();
    Ok(DiscreteSignal::from_raw(*f.spec(), samples))
}

/// `|det E|^{1/2} f(E x)` using the band-limited interpolant of `f`, taken
/// to vanish outside `[-T/2, T/2]^d`. Cost `O(N^{2d})`.
pub fn dilate_resampled(e: &FloatMatrix, f: &DiscreteSignal) -> Result<DiscreteSignal> {
    check_square(e, f.spec().d, "E")?;
    if !is_invertible(e) {
        return Err(Error::Singular);
    }
    let op = Resampler::new(e, f.spec())?;
    op.apply(f)
}

/// Evaluates the band-limited interpolant of `f` at arbitrary points.
pub fn interpolate(f: &DiscreteSignal, points: &[Vec<f64>]) -> Result<Vec<Complex64>> {
    let spec = *f.spec();
    check_work(spec.len(), points.len())?;
    let fh = fourier(f)?;
    Ok(points.par_iter().map(|u| eval_interpolant(&spec, fh.samples(), u)).collect())
}

fn check_work(inputs: usize, outputs: usize) -> Result<()> {
    match inputs.checked_mul(outputs) {
        Some(w) if w <= MAX_DENSE_WORK => Ok(()),
        _ => Err(Error::ResourceCap(format!(
            "{inputs} x {outputs} dense evaluation exceeds the cap of {MAX_DENSE_WORK}"
        ))),
    }
}

/// `f(u) = h^d sum_eta F(eta) e^{2 pi i u.eta}` (Nyquist column as a cosine),
/// zero when `u` leaves `[-T/2, T/2]^d`.
fn eval_interpolant(spec: &GridSpec, fh: &[Complex64], u: &[f64]) -> Complex64 {
    let n = spec.n;
    let h = spec.spacing();
    let half = spec.t / 2.0;
    if u.iter().any(|&ui| ui.abs() > half + 1e-9 * h) {
        return Complex64::new(0.0, 0.0);
    }
    let weights: Vec<Vec<Complex64>> = u
        .iter()
        .map(|&ui| {
            (0..n)
                .map(|j| {
                    let eta = spec.coord(j);
                    if j == 0 {
                        Complex64::new(h * (2.0 * PI * ui * eta).cos(), 0.0)
                    } else {
                        Complex64::from_polar(h, 2.0 * PI * ui * eta)
                    }
                })
                .collect()
        })
        .collect();
    // contract the last axis first
    let mut acc: Vec<Complex64> = fh.to_vec();
    for w in weights.iter().rev() {
        acc = acc.chunks(n).map(|c| c.iter().zip(w).map(|(a, b)| a * b).sum()).collect();
    }
    acc[0]
}

#[derive(Debug, Clone)]
struct Resampler {
    spec: GridSpec,
    scale: f64,
    targets: Vec<Vec<f64>>,
}

impl Resampler {
    fn new(e: &FloatMatrix, spec: &GridSpec) -> Result<Self> {
        spec.require_self_dual()?;
        check_work(spec.len(), spec.len())?;
        let targets = spec.points().iter().map(|x| e.mul_vec(x).expect("conformable")).collect();
        Ok(Resampler { spec: *spec, scale: e.determinant()?.abs().sqrt(), targets })
    }

    fn apply(&self, f: &DiscreteSignal) -> Result<DiscreteSignal> {
        let fh = fourier(f)?;
        let samples = self
            .targets
            .par_iter()
            .map(|u| eval_interpolant(&self.spec, fh.samples(), u) * self.scale)
            .collect();
        Ok(DiscreteSignal::from_raw(self.spec, samples))
    }
}

/// Free symplectic `S` applied through its kernel
/// `|det B|^{-1/2} e^{i pi (DB^-1 x.x - 2 B^-1 x.y + B^-1 A y.y)}` as a dense sum.
pub fn free_kernel_apply(s: &FloatMatrix, f: &DiscreteSignal) -> Result<DiscreteSignal> {
    let op = FreeKernelOp::new(s, f.spec())?;
    op.apply(f)
}

#[derive(Debug, Clone)]
struct FreeKernelOp {
    spec: GridSpec,
    db: FloatMatrix,
    bi: FloatMatrix,
    ba: FloatMatrix,
    scale: f64,
}

impl FreeKernelOp {
    fn new(s: &FloatMatrix, spec: &GridSpec) -> Result<Self> {
        let n = spec.d;
        if s.shape() != (2 * n, 2 * n) {
            return Err(Error::Dimension(format!("S must be {0}x{0} for this signal", 2 * n)));
        }
        if !is_symplectic(s, n, 1e-10 * s.max_norm().max(1.0).powi(2))? {
            return Err(Error::NotSymplectic);
        }
        check_work(spec.len(), spec.len())?;
        let (a, b, _, d) = blocks_of(s);
        if !is_invertible(&b) {
            return Err(Error::Singular);
        }
        let bi = b.inverse()?;
        Ok(FreeKernelOp {
            spec: *spec,
            db: d.mul(&bi)?,
            ba: bi.mul(&a)?,
            scale: b.determinant()?.abs().powf(-0.5) * spec.spacing().powi(n as i32),
            bi,
        })
    }

    fn apply(&self, f: &DiscreteSignal) -> Result<DiscreteSignal> {
        let pts = self.spec.points();
        let half = self.spec.t / 2.0 + 1e-9 * self.spec.spacing();
        let pre: Vec<Complex64> = pts.iter().zip(f.samples()).map(|(y, v)| v * chirp_phase(&self.ba, y)).collect();
        let samples = pts
            .par_iter()
            .map(|x| {
                let bx = self.bi.mul_vec(x).expect("conformable");
                // frequencies beyond the band of the grid alias; the band-limited
                // input has no content there
                if bx.iter().any(|v| v.abs() > half) {
                    return Complex64::new(0.0, 0.0);
                }
                let acc: Complex64 = pts
                    .iter()
                    .zip(&pre)
                    .map(|(y, v)| {
                        let dot: f64 = bx.iter().zip(y).map(|(a, b)| a * b).sum();
                        v * Complex64::from_polar(1.0, -2.0 * PI * dot)
                    })
                    .sum();
                acc * chirp_phase(&self.db, x) * self.scale
            })
            .collect();
        Ok(DiscreteSignal::from_raw(self.spec, samples))
    }
}

#[derive(Debug, Clone)]
enum Op {
    Fourier,
    Multiply(Vec<Complex64>),
    Gather { src: Vec<Option<usize>>, scale: f64 },
    Resample(Resampler),
    Kernel(FreeKernelOp),
}

/// A generator word compiled for one grid, reusable across many signals.
#[derive(Debug, Clone)]
pub struct MetaplecticPlan {
    spec: GridSpec,
    word: GeneratorWord<f64>,
    ops: Vec<Op>,
}

impl MetaplecticPlan {
    pub fn new<T: Scalar>(word: &GeneratorWord<T>, spec: &GridSpec) -> Result<Self> {
        spec.require_self_dual()?;
        if word.n != spec.d {
            return Err(Error::Dimension(format!(
                "word acts in dimension {}, grid has dimension {}",
                word.n, spec.d
            )));
        }
        let word = word.to_f64();
        let pts = spec.points();
        let mut ops = Vec::with_capacity(word.len());
        for f in word.factors.iter().rev() {
            ops.push(match f {
                Factor::J => Op::Fourier,
                Factor::Chirp(c) => Op::Multiply(pts.iter().map(|x| chirp_phase(c, x)).collect()),
                Factor::Dilation(e) if e.is_integer(1e-12) => Op::Gather {
                    src: integer_dilation_map(e, spec),
                    scale: e.determinant()?.abs().sqrt(),
                },
                Factor::Dilation(e) => Op::Resample(Resampler::new(e, spec)?),
                Factor::FreeKernel(s) => Op::Kernel(FreeKernelOp::new(s, spec)?),
            });
        }
        Ok(MetaplecticPlan { spec: *spec, word, ops })
    }

    /// Decomposes `s` and compiles the resulting word.
    ///
    /// When no candidate word acts exactly on the grid, the cheapest
    /// candidates are compiled and the one that best reproduces the exactly
    /// known images of Gaussian probes is kept.
    pub fn for_matrix<T: Scalar>(s: &Matrix<T>, spec: &GridSpec) -> Result<Self> {
        let best = decompose_generators(s)?;
        if best.is_grid_exact() {
            return Self::new(&best, spec);
        }
        let mut words = candidate_generator_words(s)?;
        words.sort_by(|a, b| a.spread_cost().total_cmp(&b.spread_cost()).then(a.len().cmp(&b.len())));
        words.dedup();
        let sf = s.to_f64();
        let mut chosen: Option<(f64, MetaplecticPlan)> = None;
        for w in words.iter().take(PROBED_WORDS) {
            let plan = match Self::new(w, spec) {
                Ok(p) => p,
                Err(Error::ResourceCap(m)) => return Err(Error::ResourceCap(m)),
                Err(_) => continue,
            };
            let err = gaussian_probe_error(&plan, &sf)?;
            if chosen.as_ref().is_none_or(|(e, _)| err < *e) {
                chosen = Some((err, plan));
            }
        }
        chosen.map(|(_, p)| p).ok_or_else(|| Error::Decomposition("no candidate word compiles on this grid".into()))
    }

    pub fn word(&self) -> &GeneratorWord<f64> {
        &self.word
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn apply(&self, f: &DiscreteSignal) -> Result<DiscreteSignal> {
        if f.spec() != &self.spec {
            return Err(Error::Dimension(format!(
                "plan built for {:?}, signal on {:?}",
                self.spec,
                f.spec()
            )));
        }
        let zero = Complex64::new(0.0, 0.0);
        let mut cur = f.clone();
        for op in &self.ops {
            cur = match op {
                Op::Fourier => fourier(&cur)?,
                Op::Multiply(w) => {
                    DiscreteSignal::from_raw(self.spec, cur.samples().iter().zip(w).map(|(a, b)| a * b).collect())
                }
                Op::Gather { src, scale } => DiscreteSignal::from_raw(
                    self.spec,
                    src.iter().map(|s| s.map_or(zero, |k| cur.samples()[k] * *scale)).collect(),
                ),
                Op::Resample(r) => r.apply(&cur)?,
                Op::Kernel(k) => k.apply(&cur)?,
            };
        }
        if self.word.phase != Complex64::new(1.0, 0.0) {
            cur = cur.scale(self.word.phase);
        }
        Ok(cur)
    }
}

/// Largest modulus error of `plan` on three Gaussian probes (centred, shifted
/// in position, shifted in frequency), against the exact images.
///
/// A metaplectic operator with projection `S = [[A, B], [C, D]]` maps
/// `pi(z) 2^{n/4} e^{-pi |x|^2}` to a unit-norm Gaussian whose modulus is
/// `det(2Y)^{1/4} e^{-pi (x - a).Y(x - a)}`, with `Y = (AA^T + BB^T)^{-1}` and
/// `a` the position part of `Sz`.
pub fn gaussian_probe_error(plan: &MetaplecticPlan, s: &FloatMatrix) -> Result<f64> {
    let spec = *plan.spec();
    let n = spec.d;
    if s.shape() != (2 * n, 2 * n) {
        return Err(Error::Dimension("matrix does not match the plan".into()));
    }
    let (a, b, _, _) = blocks_of(s);
    let y = a.mul(&a.transpose())?.add(&b.mul(&b.transpose())?)?.inverse()?;
    let amp = y.scale(&2.0).determinant()?.abs().powf(0.25);
    let k = (0.5 / spec.spacing()).round() * spec.spacing();
    let mut worst: f64 = 0.0;
    for probe in 0..3 {
        let z: Vec<f64> = (0..2 * n)
            .map(|i| match probe {
                1 if i < n => k,
                2 if i >= n => k,
                _ => 0.0,
            })
            .collect();
        let input = tf_shift(&z, &DiscreteSignal::gaussian(spec, &vec![0.0; n], &vec![0.0; n])?)?;
        let out = plan.apply(&input)?;
        let centre: Vec<f64> = s.mul_vec(&z)?[..n].to_vec();
        let pts = spec.points();
        for (v, x) in out.samples().iter().zip(&pts) {
            let r: Vec<f64> = x.iter().zip(&centre).map(|(p, c)| p - c).collect();
            let yr = y.mul_vec(&r)?;
            let q: f64 = r.iter().zip(&yr).map(|(p, c)| p * c).sum();
            worst = worst.max((v.norm() - amp * (-PI * q).exp()).abs());
        }
    }
    Ok(worst)
}

/// Applies a metaplectic operator with projection `s` (up to a unit phase).
pub fn metaplectic_apply<T: Scalar>(s: &Matrix<T>, f: &DiscreteSignal) -> Result<DiscreteSignal> {
    if s.rows() != 2 * f.spec().d {
        return Err(Error::Dimension(format!(
            "a {}x{} matrix does not act on {}-dimensional signals",
            s.rows(),
            s.cols(),
            f.spec().d
        )));
    }
    MetaplecticPlan::for_matrix(s, f.spec())?.apply(f)
}

fn split_point(z: &[f64], d: usize) -> Result<(&[f64], &[f64])> {
    if z.len() != 2 * d {
        return Err(Error::Dimension(format!("phase-space point needs {} coordinates", 2 * d)));
    }
    Ok(z.split_at(d))
}

/// `pi(x, xi) f(t) = e^{2 pi i xi.t} f(t - x)`; translation wraps periodically.
pub fn tf_shift(z: &[f64], f: &DiscreteSignal) -> Result<DiscreteSignal> {
    let spec = *f.spec();
    spec.require_self_dual()?;
    let (x, xi) = split_point(z, spec.d)?;
    let steps: Vec<i64> = x.iter().map(|&v| spec.grid_steps(v)).collect::<Result<_>>()?;
    // on the self-dual grid the dual spacing 1/T equals h
    xi.iter().map(|&v| spec.grid_steps(v)).collect::<Result<Vec<_>>>()?;
    let mut pos = vec![0; spec.d];
    let mut m = vec![0i64; spec.d];
    let samples = (0..spec.len())
        .map(|p| {
            spec.unflatten(p, &mut pos);
            let mut ph = 0.0;
            for i in 0..spec.d {
                m[i] = spec.centered(pos[i]) - steps[i];
                ph += xi[i] * spec.coord(pos[i]);
            }
            f.samples()[spec.flatten_wrapped(&m)] * Complex64::from_polar(1.0, 2.0 * PI * ph)
        })
        .collect();
    Ok(DiscreteSignal::from_raw(spec, samples))
}

/// `rho(x, xi; tau) = e^{2 pi i tau} e^{-pi i xi.x} pi(x, xi)`.
pub fn schrodinger(z: &[f64], tau: f64, f: &DiscreteSignal) -> Result<DiscreteSignal> {
    let (x, xi) = split_point(z, f.spec().d)?;
    let dot: f64 = x.iter().zip(xi).map(|(a, b)| a * b).sum();
    Ok(tf_shift(z, f)?.scale(Complex64::from_polar(1.0, 2.0 * PI * tau - PI * dot)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::RatMatrix;
    use crate::scalar::Rational;
    use crate::symplectic::{stft_matrix, tau_matrix};

    fn spec(n: usize) -> GridSpec {
        GridSpec::self_dual(1, n).unwrap()
    }

    #[test]
    fn trivial_words() {
        let j = decompose_generators(&standard_j::<Rational>(1)).unwrap();
        assert_eq!(j.factors, vec![Factor::J]);
        let c = RatMatrix::from_i64_rows(&[&[2, 1], &[1, -1]]);
        let v = decompose_generators(&chirp(&c).unwrap()).unwrap();
        assert_eq!(v.factors, vec![Factor::Chirp(c)]);
        let e = RatMatrix::from_i64_rows(&[&[1, 1], &[0, 1]]);
        let dw = decompose_generators(&dilation(&e).unwrap()).unwrap();
        assert_eq!(dw.factors, vec![Factor::Dilation(e)]);
    }

    #[test]
    fn words_reconstruct_exactly() {
        for s in [stft_matrix::<Rational>(1), tau_matrix(1, &Rational::from_ratio(1, 2)), standard_j(2)] {
            let w = decompose_generators(&s).unwrap();
            assert_eq!(w.product().unwrap(), s, "word {}", w.signature());
        }
        assert!(decompose_generators(&stft_matrix::<Rational>(1)).unwrap().is_grid_exact());
    }

    #[test]
    fn apply_j_is_fourier() {
        let f = DiscreteSignal::gaussian(spec(32), &[0.4], &[0.3]).unwrap();
        let a = metaplectic_apply(&standard_j::<f64>(1), &f).unwrap();
        assert!(a.max_abs_diff(&fourier(&f).unwrap()).unwrap() < 1e-14);
    }

    #[test]
    fn integer_dilations() {
        let f = DiscreteSignal::gaussian(spec(16), &[0.5], &[0.0]).unwrap();
        let id = dilate(&FloatMatrix::identity(1), &f).unwrap();
        assert_eq!(id, f);
        let r = FloatMatrix::identity(1).neg();
        let refl = dilate(&r, &f).unwrap();
        assert_eq!(dilate(&r, &refl).unwrap(), f);
        assert!(matches!(dilate(&FloatMatrix::diag(&[0.5]), &f), Err(Error::OffGrid(_))));
    }

    #[test]
    fn resampling_reproduces_grid_values() {
        let f = DiscreteSignal::gaussian(spec(32), &[0.2], &[0.5]).unwrap();
        let same = dilate_resampled(&FloatMatrix::identity(1), &f).unwrap();
        assert!(same.max_abs_diff(&f).unwrap() < 1e-12);
        let e = FloatMatrix::diag(&[0.75]);
        let g = dilate_resampled(&e, &f).unwrap();
        let exact = DiscreteSignal::from_fn(*f.spec(), |x| {
            let u = 0.75 * x[0];
            0.75f64.sqrt() * 2f64.powf(0.25) * Complex64::from_polar((-PI * (u - 0.2).powi(2)).exp(), PI * u)
        });
        assert!(g.max_abs_diff(&exact).unwrap() < 1e-8);
    }

    #[test]
    fn free_kernel_matches_word() {
        let s = FloatMatrix::from_rows(vec![vec![0.8, 1.0], vec![-0.2, 1.0]]).unwrap();
        let f = DiscreteSignal::gaussian(spec(64), &[0.0], &[0.0]).unwrap();
        let k = free_kernel_apply(&s, &f).unwrap();
        let w = metaplectic_apply(&s, &f).unwrap();
        assert!(k.modulus_diff(&w).unwrap() < 1e-3);
        assert!((k.norm() - 1.0).abs() < 1e-3);
    }

    #[test]
    fn shifts_compose_with_phase() {
        let sp = spec(16);
        let f = DiscreteSignal::gaussian(sp, &[0.0], &[0.0]).unwrap();
        let h = sp.spacing();
        let (z, w) = ([2.0 * h, 3.0 * h], [-h, 5.0 * h]);
        let lhs = tf_shift(&z, &tf_shift(&w, &f).unwrap()).unwrap();
        let sum = [z[0] + w[0], z[1] + w[1]];
        let phase = Complex64::from_polar(1.0, -2.0 * PI * w[1] * z[0]);
        let rhs = tf_shift(&sum, &f).unwrap().scale(phase);
        assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-12);
        assert!(tf_shift(&[0.1, 0.0], &f).is_err());
        assert_eq!(tf_shift(&[0.0, 0.0], &f).unwrap(), f);
    }
}
