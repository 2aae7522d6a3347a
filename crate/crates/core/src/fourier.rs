//! Centered discrete Fourier transform with the `e^{-2 pi i x xi}` convention.
//!
//! On a self-dual grid (`T = sqrt(N)`) the transform
//! `F(xi_j) = h sum_k f(x_k) e^{-2 pi i x_k xi_j}` maps the grid to itself and
//! is unitary.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::grid::DiscreteSignal;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

/// Transforms `f` along each axis in `axes`.
pub fn fourier_axes(f: &DiscreteSignal, axes: &[usize], dir: Direction) -> Result<DiscreteSignal> {
    let spec = *f.spec();
    spec.require_self_dual()?;
    if let Some(&a) = axes.iter().find(|&&a| a >= spec.d) {
        return Err(Error::Dimension(format!("axis {a} out of range for dimension {}", spec.d)));
    }
    let mut data = f.samples().to_vec();
    if dir == Direction::Inverse {
        data.iter_mut().for_each(|z| *z = z.conj());
    }
    let n = spec.n;
    let h = spec.spacing();
    let fft = FftPlanner::new().plan_fft_forward(n);
    let sign = |k: usize| if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    let post: Vec<f64> = (0..n).map(|j| h * sign(j + n / 2)).collect();
    let mut line = vec![Complex64::new(0.0, 0.0); n];
    for &a in axes {
        let stride = n.pow((spec.d - 1 - a) as u32);
        let outer = spec.len() / (n * stride);
        for o in 0..outer {
            for i in 0..stride {
                let base = o * n * stride + i;
                for (k, z) in line.iter_mut().enumerate() {
                    *z = data[base + k * stride] * sign(k);
                }
                fft.process(&mut line);
                for (j, z) in line.iter().enumerate() {
                    data[base + j * stride] = z * post[j];
                }
            }
        }
    }
    if dir == Direction::Inverse {
        data.iter_mut().for_each(|z| *z = z.conj());
    }
    Ok(DiscreteSignal::from_raw(spec, data))
}

/// Full `d`-dimensional transform.
pub fn fourier(f: &DiscreteSignal) -> Result<DiscreteSignal> {
    let axes: Vec<usize> = (0..f.spec().d).collect();
    fourier_axes(f, &axes, Direction::Forward)
}

pub fn inverse_fourier(f: &DiscreteSignal) -> Result<DiscreteSignal> {
    let axes: Vec<usize> = (0..f.spec().d).collect();
    fourier_axes(f, &axes, Direction::Inverse)
}

/// Transform in the second half of the variables of a `2d`-dimensional signal.
pub fn partial_fourier_2(f: &DiscreteSignal) -> Result<DiscreteSignal> {
    let dd = f.spec().d;
    if !dd.is_multiple_of(2) {
        return Err(Error::Dimension(format!("partial transform needs an even dimension, got {dd}")));
    }
    let axes: Vec<usize> = (dd / 2..dd).collect();
    fourier_axes(f, &axes, Direction::Forward)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;
    use std::f64::consts::PI;

    fn naive(f: &DiscreteSignal) -> Vec<Complex64> {
        let s = f.spec();
        let pts = s.points();
        pts.iter()
            .map(|xi| {
                pts.iter()
                    .zip(f.samples())
                    .map(|(x, v)| {
                        let dot: f64 = x.iter().zip(xi).map(|(a, b)| a * b).sum();
                        v * Complex64::from_polar(1.0, -2.0 * PI * dot)
                    })
                    .sum::<Complex64>()
                    * f.cell()
            })
            .collect()
    }

    #[test]
    fn matches_direct_sum() {
        for d in 1..=2 {
            let g = GridSpec::self_dual(d, 16).unwrap();
            let f = DiscreteSignal::from_fn(g, |x| Complex64::new(x[0].sin() + 0.3, x[x.len() - 1].cos() * x[0]));
            let fast = fourier(&f).unwrap();
            let slow = naive(&f);
            let err = fast.samples().iter().zip(&slow).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            assert!(err < 1e-11, "d={d} err={err}");
        }
    }

    #[test]
    fn inverse_round_trip() {
        let g = GridSpec::self_dual(2, 8).unwrap();
        let f = DiscreteSignal::from_fn(g, |x| Complex64::new(x[0], x[1] * x[1]));
        let back = inverse_fourier(&fourier(&f).unwrap()).unwrap();
        assert!(back.max_abs_diff(&f).unwrap() < 1e-12);
    }

    #[test]
    fn requires_self_dual_grid() {
        let g = GridSpec::new(1, 16, 2.0).unwrap();
        assert!(matches!(fourier(&DiscreteSignal::zeros(g)), Err(Error::InvalidGrid(_))));
        assert!(partial_fourier_2(&DiscreteSignal::zeros(GridSpec::self_dual(1, 16).unwrap())).is_err());
    }
}
