//! Bounding `max |A(z)|^2` over the unit circle.
//!
//! Dense evaluation at the N-th roots of unity `z_j = exp(+2 pi i j / N)`
//! followed by quadratic-interpolation refinement of each sampled local
//! maximum. A `true` answer from [`exceeds_bound`] is a certificate (a
//! concrete angle with `f(theta) > bound + epsilon`); `false` is only a
//! heuristic statement that no such angle was found.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sampling and refinement parameters for the spectral filters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FilterSchedule {
    pub coarse_points: usize,
    pub refine_rounds: usize,
    pub epsilon: f64,
    pub final_points: usize,
}

impl Default for FilterSchedule {
    fn default() -> Self {
        FilterSchedule {
            coarse_points: 128,
            refine_rounds: 3,
            epsilon: 1e-3,
            final_points: 1024,
        }
    }
}

impl FilterSchedule {
    pub fn validate(&self) -> Result<()> {
        if !self.coarse_points.is_power_of_two() || !self.final_points.is_power_of_two() {
            return Err(Error::domain(format!(
                "sample counts must be powers of two (coarse {}, final {})",
                self.coarse_points, self.final_points
            )));
        }
        if self.epsilon <= 0.0 || !self.epsilon.is_finite() {
            return Err(Error::domain(format!(
                "epsilon must be positive, got {}",
                self.epsilon
            )));
        }
        Ok(())
    }

    /// The same schedule sampling at `final_points` instead of `coarse_points`.
    pub fn dense(&self) -> FilterSchedule {
        FilterSchedule {
            coarse_points: self.final_points,
            ..*self
        }
    }
}

/// Table of `exp(2 pi i j / N)` for `j = 0..N`.
#[derive(Clone, Debug)]
pub struct RootTable {
    roots: Vec<Complex64>,
}

impl RootTable {
    pub fn new(points: usize) -> Result<Self> {
        if !points.is_power_of_two() {
            return Err(Error::domain(format!(
                "transform size {points} is not a power of two"
            )));
        }
        let roots = (0..points)
            .map(|j| Complex64::from_polar(1.0, TAU * j as f64 / points as f64))
            .collect();
        Ok(RootTable { roots })
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// `sum_k c_k z_j^k` for every j. Indices are reduced mod N exactly, so no
    /// error accumulates along the powers.
    pub fn evaluate(&self, coeffs: &[Complex64]) -> Vec<Complex64> {
        let n = self.roots.len();
        let mask = n - 1;
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for (k, &c) in coeffs.iter().enumerate() {
            if c == Complex64::new(0.0, 0.0) {
                continue;
            }
            let mut idx = 0usize;
            let step = k & mask;
            for value in out.iter_mut() {
                *value += c * self.roots[idx];
                idx = (idx + step) & mask;
            }
        }
        out
    }
}

/// Values `A'(z_j)` at all N-th roots of unity.
#[derive(Clone, Debug)]
pub struct PaddedSpectrum {
    pub values: Vec<Complex64>,
}

impl PaddedSpectrum {
    pub fn new(coeffs: &[Complex64], points: usize) -> Result<Self> {
        Ok(PaddedSpectrum {
            values: RootTable::new(points)?.evaluate(coeffs),
        })
    }

    pub fn points(&self) -> usize {
        self.values.len()
    }

    pub fn norms(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm_sqr()).collect()
    }
}

/// `|A'(z_j)|^2` for `j = 0..points`.
pub fn dft_norms(coeffs: &[Complex64], points: usize) -> Result<Vec<f64>> {
    if coeffs.len() > points {
        return Err(Error::domain(format!(
            "{} coefficients do not fit in a transform of size {points}",
            coeffs.len()
        )));
    }
    Ok(PaddedSpectrum::new(coeffs, points)?.norms())
}

/// `sum_k c_k e^{i k theta}`.
pub fn eval_at(coeffs: &[Complex64], theta: f64) -> Complex64 {
    coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| c.re != 0.0 || c.im != 0.0)
        .map(|(k, &c)| c * Complex64::from_polar(1.0, k as f64 * theta))
        .sum()
}

/// Vertex of the parabola through three points, or `None` when the points
/// are (numerically) collinear.
pub fn quad_refine(lo: (f64, f64), mid: (f64, f64), hi: (f64, f64)) -> Option<f64> {
    let ((t0, f0), (t1, f1), (t2, f2)) = (lo, mid, hi);
    // offsets from the middle point keep the cancellation small
    let (d0, d2) = (t0 - t1, t2 - t1);
    let num = d0 * d0 * (f1 - f2) - d2 * d2 * (f1 - f0);
    let den = d0 * (f1 - f2) - d2 * (f1 - f0);
    if den.abs() < 1e-12 {
        return None;
    }
    Some(t1 + 0.5 * num / den)
}

/// Precomputed state for repeatedly applying [`exceeds_bound`] with one
/// schedule.
#[derive(Clone, Debug)]
pub struct SpectralFilter {
    schedule: FilterSchedule,
    roots: RootTable,
}

impl SpectralFilter {
    pub fn new(schedule: FilterSchedule) -> Result<Self> {
        schedule.validate()?;
        Ok(SpectralFilter {
            roots: RootTable::new(schedule.coarse_points)?,
            schedule,
        })
    }

    pub fn schedule(&self) -> &FilterSchedule {
        &self.schedule
    }

    pub fn exceeds(&self, coeffs: &[Complex64], bound: f64) -> bool {
        let limit = bound + self.schedule.epsilon;
        let samples: Vec<f64> = self
            .roots
            .evaluate(coeffs)
            .iter()
            .map(|v| v.norm_sqr())
            .collect();
        if samples.iter().any(|&f| f > limit) {
            return true;
        }

        let points = samples.len();
        let step = TAU / points as f64;
        for k in 0..points {
            let prev = samples[(k + points - 1) % points];
            let next = samples[(k + 1) % points];
            if samples[k] < prev || samples[k] < next {
                continue;
            }
            let centre = step * k as f64;
            let bracket = [
                (centre - step, prev),
                (centre, samples[k]),
                (centre + step, next),
            ];
            if self.refine_peak(coeffs, bracket, limit) {
                return true;
            }
        }
        false
    }

    /// Up to `refine_rounds` interpolation steps on one bracketed maximum.
    fn refine_peak(&self, coeffs: &[Complex64], bracket: [(f64, f64); 3], limit: f64) -> bool {
        let [mut lo, mut mid, mut hi] = bracket;
        for _ in 0..self.schedule.refine_rounds {
            let Some(theta) = quad_refine(lo, mid, hi) else {
                break;
            };
            if !(theta > lo.0 && theta < hi.0) || theta == mid.0 {
                break;
            }
            let f = eval_at(coeffs, theta).norm_sqr();
            if f > limit {
                return true;
            }
            let probe = (theta, f);
            // Keep the best three points that still bracket a maximum.
            if theta < mid.0 {
                if f > mid.1 {
                    (hi, mid) = (mid, probe);
                } else {
                    lo = probe;
                }
            } else if f > mid.1 {
                (lo, mid) = (mid, probe);
            } else {
                hi = probe;
            }
        }
        false
    }
}

/// Whether some `theta` with `|A'(e^{i theta})|^2 > bound + epsilon` is found.
pub fn exceeds_bound(coeffs: &[Complex64], bound: f64, schedule: &FilterSchedule) -> Result<bool> {
    Ok(SpectralFilter::new(*schedule)?.exceeds(coeffs, bound))
}
