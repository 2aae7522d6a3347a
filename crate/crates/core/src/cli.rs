//! Command-line front end. Exit codes: 0 success or verified, 1 verification
//! failed (or a hypothesis was violated), 2 usage or I/O error.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::discrete::{decompose_generators, Factor};
use crate::distributions::{
    covariance_check, moyal_check, reproducing_check, wigner_general, wigner_normal_form_of, TfGrid,
};
use crate::error::{Error, Result};
use crate::grid::{DiscreteSignal, GridSpec};
use crate::matrix::{DynMatrix, FloatMatrix, Matrix, RatMatrix};
use crate::norms::{
    counterexample_dj, counterexample_grid, dilation_norm_ratio, equivalence_check, mixed_norm, modulation_norm,
    parse_exponent, MixedNormParams, VerificationReport,
};
use crate::scalar::{parse_rational, Rational, Scalar};
use crate::shift_invertible::{alpha, factorize, CgTriple};
use crate::symplectic::{blocks, is_symplectic, make_named, submatrices, symplectic_defect, Named};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "metaplectic", version, about = "Symplectic matrices, metaplectic Wigner distributions and mixed norms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Symplectic matrix analysis.
    #[command(subcommand)]
    Symplectic(SymplecticCmd),
    /// Compute a metaplectic Wigner distribution W_A(f, g).
    Wdist(WdistArgs),
    /// Mixed and modulation norms.
    #[command(subcommand)]
    Norm(NormCmd),
    /// Run a verifier and emit a JSON report.
    Verify(VerifyArgs),
    /// Render a distribution as an 8-bit PGM magnitude image.
    Plot(PlotArgs),
    /// Generate signals.
    #[command(subcommand)]
    Signal(SignalCmd),
}

#[derive(Subcommand, Debug)]
enum SymplecticCmd {
    /// Test whether a matrix is symplectic.
    Check {
        matrix: PathBuf,
        /// Tolerance for float matrices (rational matrices are checked exactly).
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Print the 4x4 block structure and the submatrices E, F, Ɛ, 𝓕.
    Blocks {
        matrix: PathBuf,
        /// Also write E.json, F.json, Ecal.json and Fcal.json here.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Write E.json, C.json and S.json with alpha(E, C, S) = A.
    Factorize {
        matrix: PathBuf,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Assemble A = alpha(E, C, S).
    Alpha {
        #[arg(long)]
        e: PathBuf,
        #[arg(long)]
        c: PathBuf,
        #[arg(long)]
        s: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Factor a symplectic matrix into J, D_E and V_C generators.
    Decompose {
        matrix: PathBuf,
        /// Write the word as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write one of the standard matrices.
    Named {
        #[arg(value_enum)]
        name: NamedKind,
        #[arg(long, default_value_t = 1)]
        d: usize,
        /// Parameter of the tau-Wigner matrix (rational, e.g. 1/2).
        #[arg(long, default_value = "1/2")]
        tau: String,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum NamedKind {
    J,
    L,
    K,
    St,
    Tau,
    Ft2,
}

#[derive(Args, Debug)]
struct WdistArgs {
    #[arg(long)]
    matrix: PathBuf,
    #[arg(long)]
    signal: PathBuf,
    #[arg(long)]
    window: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Evaluate through the shift-invertible normal form instead of the
    /// generator pipeline.
    #[arg(long)]
    normal_form: bool,
    /// Also write the values as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct NormParamArgs {
    #[arg(long, default_value = "2")]
    p: String,
    #[arg(long, default_value = "2")]
    q: String,
    /// `1` or `vs:S` for the polynomial weight (1 + |z|)^S.
    #[arg(long, default_value = "1")]
    weight: String,
}

impl NormParamArgs {
    fn params(&self) -> Result<MixedNormParams> {
        MixedNormParams::new(parse_exponent(&self.p)?, parse_exponent(&self.q)?, self.weight.parse()?)
    }
}

#[derive(Subcommand, Debug)]
enum NormCmd {
    /// L^{p,q}_m norm of a stored distribution.
    Mixed {
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        params: NormParamArgs,
    },
    /// M^{p,q}_m norm of a signal with respect to a window.
    Modulation {
        #[arg(long)]
        signal: PathBuf,
        #[arg(long)]
        window: PathBuf,
        #[command(flatten)]
        params: NormParamArgs,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
enum Verifier {
    Moyal,
    Covariance,
    Reproducing,
    Dilation,
    Equivalence,
    Counterexample,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(value_enum)]
    which: Verifier,
    /// Write the JSON report here (it is always printed).
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Matrix file; defaults to the short-time Fourier transform matrix
    /// (for `dilation`: diag(2, 1)).
    #[arg(long)]
    matrix: Option<PathBuf>,
    /// Use a standard matrix instead of a file.
    #[arg(long, value_enum, conflicts_with = "matrix")]
    named: Option<NamedKind>,
    /// Points per axis of the signal grid.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    /// Pass threshold (error bound, or relative spread for `dilation`).
    #[arg(long)]
    tol: Option<f64>,
    /// Largest max/min ratio accepted by `equivalence`.
    #[arg(long, default_value_t = 10.0)]
    spread_bound: f64,
    #[command(flatten)]
    params: NormParamArgs,
}

#[derive(Args, Debug)]
struct PlotArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Dynamic range of the logarithmic grey scale.
    #[arg(long, default_value_t = 60.0)]
    range_db: f64,
}

#[derive(Subcommand, Debug)]
enum SignalCmd {
    /// (2a)^{d/4} e^{-pi a |x - x0|^2} e^{2 pi i xi0 x} on a self-dual grid.
    Gaussian {
        #[arg(long, default_value_t = 1)]
        d: usize,
        #[arg(long, default_value_t = 32)]
        n: usize,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        x0: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        xi0: f64,
        #[arg(long, default_value_t = 1.0)]
        width: f64,
        #[arg(long)]
        out: PathBuf,
    },
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, A>(args: I) -> i32
where
    I: IntoIterator<Item = A>,
    A: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

fn dispatch(cmd: Command) -> Result<i32> {
    match cmd {
        Command::Symplectic(c) => symplectic_cmd(c),
        Command::Wdist(a) => wdist(a),
        Command::Norm(c) => norm_cmd(c),
        Command::Verify(a) => verify(a),
        Command::Plot(a) => {
            read_grid(&a.input)?.write_pgm(&a.out, a.range_db)?;
            println!("wrote {}", a.out.display());
            Ok(EXIT_OK)
        }
        Command::Signal(SignalCmd::Gaussian { d, n, x0, xi0, width, out }) => {
            let spec = GridSpec::self_dual(d, n)?;
            DiscreteSignal::gaussian_scaled(spec, &vec![x0; d], &vec![xi0; d], width)?.write_csv(&out)?;
            println!("wrote {}", out.display());
            Ok(EXIT_OK)
        }
    }
}

fn with_path<T>(path: &Path, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Io(io) => Error::Io(std::io::Error::new(io.kind(), format!("{}: {io}", path.display()))),
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

fn read_matrix(path: &Path) -> Result<DynMatrix> {
    with_path(path, DynMatrix::read(path))
}

fn read_signal(path: &Path) -> Result<DiscreteSignal> {
    with_path(path, DiscreteSignal::read_csv(path))
}

fn read_grid(path: &Path) -> Result<TfGrid> {
    with_path(path, TfGrid::read_bin(path))
}

fn write_matrix<T: Scalar>(m: &Matrix<T>, path: &Path) -> Result<()>
where
    DynMatrix: From<Matrix<T>>,
{
    DynMatrix::from(m.clone()).write(path)
}

fn half_dim_of(shape: (usize, usize), what: &str) -> Result<usize> {
    if shape.0 != shape.1 || !shape.0.is_multiple_of(2) || shape.0 == 0 {
        return Err(Error::Dimension(format!("{what} must be square of even size, got {}x{}", shape.0, shape.1)));
    }
    Ok(shape.0 / 2)
}

fn symplectic_cmd(c: SymplecticCmd) -> Result<i32> {
    match c {
        SymplecticCmd::Check { matrix, tol } => {
            let m = read_matrix(&matrix)?;
            let d = half_dim_of(m.shape(), "matrix")?;
            let (ok, defect) = match &m {
                DynMatrix::Rational(m) => (is_symplectic(m, d, 0.0)?, symplectic_defect(m)?.to_f64().max_norm()),
                DynMatrix::Float(m) => (is_symplectic(m, d, tol)?, symplectic_defect(m)?.max_norm()),
            };
            println!("symplectic: {ok}");
            println!("defect: {defect:e}");
            Ok(if ok { EXIT_OK } else { EXIT_FAILED })
        }
        SymplecticCmd::Blocks { matrix, out_dir } => match read_matrix(&matrix)? {
            DynMatrix::Rational(m) => print_blocks(&m, out_dir.as_deref()),
            DynMatrix::Float(m) => print_blocks(&m, out_dir.as_deref()),
        },
        SymplecticCmd::Factorize { matrix, out_dir } => match read_matrix(&matrix)? {
            DynMatrix::Rational(m) => write_factorization(&m, &out_dir),
            DynMatrix::Float(m) => write_factorization(&m, &out_dir),
        },
        SymplecticCmd::Alpha { e, c, s, out } => {
            let (e, c, s) = (read_matrix(&e)?, read_matrix(&c)?, read_matrix(&s)?);
            match (e, c, s) {
                (DynMatrix::Rational(e), DynMatrix::Rational(c), DynMatrix::Rational(s)) => {
                    write_matrix(&alpha(&CgTriple::new(e, c, s)?)?, &out)?
                }
                (e, c, s) => write_matrix(&alpha(&CgTriple::new(e.to_f64(), c.to_f64(), s.to_f64())?)?, &out)?,
            }
            println!("wrote {}", out.display());
            Ok(EXIT_OK)
        }
        SymplecticCmd::Decompose { matrix, out } => match read_matrix(&matrix)? {
            DynMatrix::Rational(m) => print_word(&m, out.as_deref()),
            DynMatrix::Float(m) => print_word(&m, out.as_deref()),
        },
        SymplecticCmd::Named { name, d, tau, out } => {
            let m = named_matrix(name, d, &parse_rational(&tau)?)?;
            write_matrix(&m, &out)?;
            println!("wrote {}", out.display());
            Ok(EXIT_OK)
        }
    }
}

fn named_matrix(name: NamedKind, d: usize, tau: &Rational) -> Result<RatMatrix> {
    if d == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    let kind = match name {
        NamedKind::J => Named::J,
        NamedKind::L => Named::L,
        NamedKind::K => Named::K,
        NamedKind::St => Named::Stft,
        NamedKind::Tau => Named::TauWigner(tau.clone()),
        NamedKind::Ft2 => Named::PartialFourier2,
    };
    make_named(&kind, d)
}

fn print_blocks<T: Scalar + std::fmt::Display>(m: &Matrix<T>, out_dir: Option<&Path>) -> Result<i32>
where
    DynMatrix: From<Matrix<T>>,
{
    let b = blocks(m)?;
    for i in 1..=4 {
        for j in 1..=4 {
            println!("A{i}{j} =\n{}", b.get(i, j));
        }
    }
    let s = submatrices(m)?;
    let named = [("E", &s.e), ("F", &s.f), ("Ecal", &s.e_cal), ("Fcal", &s.f_cal)];
    for (name, mat) in named {
        println!("{name} =\n{mat}");
    }
    let tol = if T::MODE == crate::ScalarMode::Rational { 0.0 } else { 1e-10 };
    println!("relations hold: {}", s.relations_hold(tol)?);
    if let Some(dir) = out_dir {
        fs::create_dir_all(dir)?;
        for (name, mat) in named {
            write_matrix(mat, &dir.join(format!("{name}.json")))?;
        }
    }
    Ok(EXIT_OK)
}

fn write_factorization<T: Scalar + std::fmt::Display>(m: &Matrix<T>, out_dir: &Path) -> Result<i32>
where
    DynMatrix: From<Matrix<T>>,
{
    let t = factorize(m)?;
    fs::create_dir_all(out_dir)?;
    for (name, mat) in [("E", &t.e), ("C", &t.c), ("S", &t.s)] {
        let path = out_dir.join(format!("{name}.json"));
        write_matrix(mat, &path)?;
        println!("{name} =\n{mat}");
    }
    Ok(EXIT_OK)
}

fn print_word<T: Scalar>(m: &Matrix<T>, out: Option<&Path>) -> Result<i32>
where
    DynMatrix: From<Matrix<T>>,
{
    let w = decompose_generators(m)?;
    println!("word: {}", w.signature());
    let factors: Vec<serde_json::Value> = w
        .factors
        .iter()
        .map(|f| match f {
            Factor::J => json!({"kind": "J"}),
            Factor::Dilation(e) => json!({"kind": "D", "matrix": DynMatrix::from(e.clone()).to_json()}),
            Factor::Chirp(c) => json!({"kind": "V", "matrix": DynMatrix::from(c.clone()).to_json()}),
            Factor::FreeKernel(s) => json!({"kind": "K", "matrix": DynMatrix::from(s.clone()).to_json()}),
        })
        .collect();
    let doc = json!({"n": w.n, "factors": factors, "phase": [w.phase.re, w.phase.im]});
    if let Some(path) = out {
        fs::write(path, serde_json::to_string_pretty(&doc)?)?;
    }
    let err = w.product()?.to_f64().max_abs_diff(&m.to_f64())?;
    println!("reconstruction error: {err:e}");
    Ok(EXIT_OK)
}

fn wdist(a: WdistArgs) -> Result<i32> {
    let m = read_matrix(&a.matrix)?;
    let f = read_signal(&a.signal)?;
    let g = read_signal(&a.window)?;
    let w = match (&m, a.normal_form) {
        (DynMatrix::Rational(m), false) => wigner_general(m, &f, &g)?,
        (DynMatrix::Float(m), false) => wigner_general(m, &f, &g)?,
        (DynMatrix::Rational(m), true) => wigner_normal_form_of(m, &f, &g)?,
        (DynMatrix::Float(m), true) => wigner_normal_form_of(m, &f, &g)?,
    };
    w.write_bin(&a.out)?;
    if let Some(csv) = &a.csv {
        w.write_csv(csv)?;
    }
    println!("wrote {} ({} points, norm {:.6})", a.out.display(), w.spec().len(), w.norm());
    Ok(EXIT_OK)
}

fn norm_cmd(c: NormCmd) -> Result<i32> {
    let value = match c {
        NormCmd::Mixed { input, params } => mixed_norm(&read_grid(&input)?, &params.params()?)?,
        NormCmd::Modulation { signal, window, params } => modulation_norm(
            &read_signal(&signal)?,
            &read_signal(&window)?,
            &params.params()?,
        )?,
    };
    println!("{value:.12e}");
    Ok(EXIT_OK)
}

fn verify_matrix(a: &VerifyArgs) -> Result<FloatMatrix> {
    if let Some(path) = &a.matrix {
        return Ok(read_matrix(path)?.to_f64());
    }
    let kind = a.named.unwrap_or(NamedKind::St);
    Ok(named_matrix(kind, 1, &Rational::from_ratio(1, 2))?.to_f64())
}

fn is_hypothesis_failure(e: &Error) -> bool {
    matches!(e, Error::Hypothesis(_) | Error::NotShiftInvertible)
}

fn verify(a: VerifyArgs) -> Result<i32> {
    let report = match run_verifier(&a) {
        Ok(r) => r,
        Err(e) if is_hypothesis_failure(&e) => VerificationReport {
            theorem: format!("{:?}", a.which).to_lowercase(),
            hypothesis: e.to_string(),
            trials: 0,
            min_ratio: f64::NAN,
            max_ratio: f64::NAN,
            slope: None,
            pass: false,
        },
        Err(e) => return Err(e),
    };
    let text = report.to_json()?;
    println!("{text}");
    if let Some(path) = &a.report {
        fs::write(path, &text)?;
    }
    Ok(if report.pass { EXIT_OK } else { EXIT_FAILED })
}

fn random_gaussian(rng: &mut ChaCha8Rng, spec: GridSpec) -> Result<DiscreteSignal> {
    let x0: Vec<f64> = (0..spec.d).map(|_| rng.gen_range(-0.5..0.5)).collect();
    let xi0: Vec<f64> = (0..spec.d).map(|_| rng.gen_range(-0.5..0.5)).collect();
    DiscreteSignal::gaussian_scaled(spec, &x0, &xi0, rng.gen_range(0.7..1.4))
}

fn summary(theorem: &str, hypothesis: String, values: &[f64], tol: f64) -> VerificationReport {
    let max = values.iter().copied().fold(0.0, f64::max);
    VerificationReport {
        theorem: theorem.into(),
        hypothesis,
        trials: values.len(),
        min_ratio: values.iter().copied().fold(f64::INFINITY, f64::min),
        max_ratio: max,
        slope: None,
        pass: max <= tol,
    }
}

fn run_verifier(a: &VerifyArgs) -> Result<VerificationReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let spec = || GridSpec::self_dual(1, a.n.unwrap_or(32));
    match a.which {
        Verifier::Moyal => {
            let m = verify_matrix(a)?;
            let spec = spec()?;
            let tol = a.tol.unwrap_or(1e-3);
            let errors: Vec<f64> = (0..a.trials.unwrap_or(3))
                .map(|_| {
                    let s: Vec<DiscreteSignal> = (0..4).map(|_| random_gaussian(&mut rng, spec)).collect::<Result<_>>()?;
                    moyal_check(&m, (&s[0], &s[1]), (&s[2], &s[3]))
                })
                .collect::<Result<_>>()?;
            Ok(summary("Moyal identity for W_A (relative defect)", format!("N = {}, tol = {tol}", spec.n), &errors, tol))
        }
        Verifier::Covariance => {
            let m = verify_matrix(a)?;
            let spec = spec()?;
            let tol = a.tol.unwrap_or(1e-3);
            let f = random_gaussian(&mut rng, spec)?;
            let g = DiscreteSignal::gaussian(spec, &[0.0], &[0.0])?;
            let h = spec.spacing();
            let mut deviations = Vec::new();
            let mut used = Vec::new();
            for steps in [1.0, 2.0, 4.0] {
                for w in [[steps * h, 0.0], [0.0, steps * h]] {
                    match covariance_check(&m, &w, &f, &g) {
                        Ok(dev) => {
                            deviations.push(dev.modulus);
                            used.push(w);
                        }
                        Err(Error::OffGrid(_)) => {}
                        Err(e) => return Err(e),
                    }
                }
                if !deviations.is_empty() {
                    break;
                }
            }
            if deviations.is_empty() {
                return Err(Error::OffGrid("no small shift keeps E_A w and F_A w on the grid".into()));
            }
            Ok(summary("covariance of W_A under time-frequency shifts (modulus deviation)", format!("shifts w = {used:?}, tol = {tol}"), &deviations, tol))
        }
        Verifier::Reproducing => {
            let m = verify_matrix(a)?;
            let spec = spec()?;
            let tol = a.tol.unwrap_or(1e-2);
            let f = random_gaussian(&mut rng, spec)?;
            let g = DiscreteSignal::gaussian(spec, &[0.0], &[0.0])?;
            let gamma = DiscreteSignal::gaussian_scaled(spec, &[0.0], &[0.0], 1.5)?;
            let err = reproducing_check(&m, &f, &g, &gamma)?;
            Ok(summary("reproducing formula for W_A (relative error)", format!("N = {}, tol = {tol}", spec.n), &[err], tol))
        }
        Verifier::Dilation => {
            let s = match &a.matrix {
                Some(p) => read_matrix(p)?.to_f64(),
                None => FloatMatrix::diag(&[2.0, 1.0]),
            };
            let params = a.params.params()?;
            let tol = a.tol.unwrap_or(0.02);
            let grid = GridSpec::new(s.rows(), a.n.unwrap_or(64), 8.0)?;
            let r = dilation_norm_ratio(&s, &params, &grid, a.trials.unwrap_or(100), tol, a.seed)?;
            Ok(VerificationReport {
                theorem: "T_S is an isomorphism of L^{p,q} with constant |det A|^{1/2-1/p} |det D|^{1/2-1/q}".into(),
                hypothesis: format!(
                    "S upper triangular; p = {}, q = {}; constant {:.6}, mean ratio {:.6}, std/mean {:.2e}, tol {tol}",
                    params.p, params.q, r.constant, r.mean_ratio, r.relative_spread
                ),
                trials: r.trials,
                min_ratio: r.min_ratio,
                max_ratio: r.max_ratio,
                slope: None,
                pass: r.pass,
            })
        }
        Verifier::Equivalence => {
            let m = verify_matrix(a)?;
            let spec = spec()?;
            let g = DiscreteSignal::gaussian(spec, &[0.0], &[0.0])?;
            equivalence_check(&m, &g, &a.params.params()?, a.trials.unwrap_or(20), a.spread_bound, a.seed)
        }
        Verifier::Counterexample => {
            let params = a.params.params()?;
            if params.p == params.q {
                return Err(Error::Hypothesis("p = q: D_J is bounded, there is no counterexample".into()));
            }
            Ok(counterexample_dj(&counterexample_grid(), params.p, params.q, &[1.0, 2.0, 4.0, 8.0])?.report())
        }
    }
}
