//! Seeded generators for random rational symplectic matrices and triples.
//!
//! Matrices are built as short words in `J`, `D_E` and `V_C` with small
//! rational entries, which keeps exact arithmetic cheap.

use rand::Rng;

use crate::error::Result;
use crate::matrix::RatMatrix;
use crate::scalar::{Rational, Scalar};
use crate::shift_invertible::{alpha, CgTriple};
use crate::symplectic::{chirp, dilation, standard_j};

fn small_rational<R: Rng>(rng: &mut R, height: i64) -> Rational {
    let num = rng.gen_range(-height..=height);
    let den = rng.gen_range(1..=2);
    Rational::from_ratio(num, den)
}

pub fn random_symmetric<R: Rng>(rng: &mut R, n: usize, height: i64) -> RatMatrix {
    let mut m = RatMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = small_rational(rng, height);
            m[(i, j)] = v.clone();
            m[(j, i)] = v;
        }
    }
    m
}

pub fn random_invertible<R: Rng>(rng: &mut R, n: usize, height: i64) -> RatMatrix {
    loop {
        let mut m = RatMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = small_rational(rng, height);
            }
        }
        if m.rank() == n {
            return m;
        }
    }
}

/// Integer matrix with determinant `±1`: a product of `steps` random
/// elementary shears with entries in `{-1, 1}` and an optional sign flip.
pub fn random_unimodular<R: Rng>(rng: &mut R, n: usize, steps: usize) -> RatMatrix {
    let mut m = RatMatrix::identity(n);
    if n < 2 {
        return if rng.gen_bool(0.5) { m } else { m.neg() };
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let mut e = RatMatrix::identity(n);
        e[(i, j)] = Rational::from_i64(if rng.gen_bool(0.5) { 1 } else { -1 });
        m = m.mul(&e).expect("square");
    }
    if rng.gen_bool(0.5) {
        let k = rng.gen_range(0..n);
        for c in 0..n {
            m[(k, c)] = -m[(k, c)].clone();
        }
    }
    m
}

/// Product of `1..=max_len` random generators of `Sp(d)`.
pub fn random_symplectic<R: Rng>(rng: &mut R, d: usize, max_len: usize) -> RatMatrix {
    let len = rng.gen_range(1..=max_len.max(1));
    let mut acc = RatMatrix::identity(2 * d);
    for _ in 0..len {
        let g = match rng.gen_range(0..3) {
            0 => standard_j(d),
            1 => dilation(&random_invertible(rng, d, 2)).expect("invertible"),
            _ => chirp(&random_symmetric(rng, d, 2)).expect("symmetric"),
        };
        acc = acc.mul(&g).expect("conformable");
    }
    acc
}

/// A random `(E, C, S)` at half-dimension `d` (so `E`, `C` are `2d x 2d`).
pub fn random_cg_triple<R: Rng>(rng: &mut R, d: usize) -> CgTriple<Rational> {
    CgTriple {
        e: random_invertible(rng, 2 * d, 2),
        c: random_symmetric(rng, 2 * d, 2),
        s: random_symplectic(rng, d, 4),
    }
}

/// A random shift-invertible `4d x 4d` matrix, `alpha` of a random triple.
pub fn random_shift_invertible<R: Rng>(rng: &mut R, d: usize) -> Result<(RatMatrix, CgTriple<Rational>)> {
    let t = random_cg_triple(rng, d);
    Ok((alpha(&t)?, t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::is_symplectic;
    use num_traits::Signed;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_matrices_have_their_properties() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let s = random_symplectic(&mut rng, 2, 8);
            assert!(is_symplectic(&s, 2, 0.0).unwrap());
            let u = random_unimodular(&mut rng, 3, 6);
            assert_eq!(u.determinant().unwrap().abs(), Rational::from_i64(1));
            assert!(u.inverse().unwrap().is_integer(0.0));
            let c = random_symmetric(&mut rng, 3, 3);
            assert_eq!(c, c.transpose());
            assert_eq!(random_invertible(&mut rng, 3, 1).rank(), 3);
        }
    }

    #[test]
    fn seeds_are_deterministic() {
        let a = random_symplectic(&mut ChaCha8Rng::seed_from_u64(3), 1, 8);
        let b = random_symplectic(&mut ChaCha8Rng::seed_from_u64(3), 1, 8);
        assert_eq!(a, b);
    }
}
