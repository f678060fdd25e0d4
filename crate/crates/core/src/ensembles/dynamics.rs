use alloc::vec::Vec;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::Spectrum;
use crate::model::{Observable, StateVector};
use crate::{Error, Result};

/// Levels with `|c_n| ≤ this` are left out of the pair sum.
const COEFFICIENT_CUTOFF: f64 = 1e-12;
/// Total `|amplitude|` of the discarded oscillating terms (per-spin units).
const PAIR_BUDGET: f64 = 1e-12;
/// Phasor recurrences are re-synchronised after this many steps.
const RESYNC: usize = 1024;

/// Sampled `<O>(t)/J`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    times: Vec<f64>,
    values: Vec<f64>,
}

impl TimeSeries {
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::DimensionMismatch { expected: times.len(), found: values.len() });
        }
        if times.iter().any(|t| !t.is_finite()) || times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter("times must be finite and strictly increasing"));
        }
        Ok(TimeSeries { times, values })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    fn at(&self, i: usize, t: f64) -> f64 {
        let (t0, t1) = (self.times[i], self.times[i + 1]);
        let w = (t - t0) / (t1 - t0);
        self.values[i] + w * (self.values[i + 1] - self.values[i])
    }
}

/// `(1/T) ∫_t^{t+T} <O>(τ) dτ` by the trapezoidal rule on the samples,
/// interpolating linearly at the window edges.
pub fn time_average(series: &TimeSeries, t: f64, window: f64) -> Result<f64> {
    if !(window > 0.0) || !t.is_finite() || !window.is_finite() {
        return Err(Error::InvalidParameter("averaging window must be positive"));
    }
    let times = series.times();
    if times.len() < 2 {
        return Err(Error::RangeViolation);
    }
    let (a, b) = (t, t + window);
    let first = times[0];
    let last = times[times.len() - 1];
    let slack = 1e-12 * (first.abs() + last.abs() + 1.0);
    if a < first - slack || b > last + slack {
        return Err(Error::RangeViolation);
    }
    let (a, b) = (a.max(first), b.min(last));
    let mut i = times.partition_point(|&x| x <= a).saturating_sub(1).min(times.len() - 2);
    let mut area = 0.0;
    while i + 1 < times.len() && times[i] < b {
        let lo = times[i].max(a);
        let hi = times[i + 1].min(b);
        if hi > lo {
            area += 0.5 * (series.at(i, lo) + series.at(i, hi)) * (hi - lo);
        }
        i += 1;
    }
    Ok(area / window)
}

/// `<ψ(t)|O|ψ(t)>/J` as a constant plus a sum of cosines over level pairs.
#[derive(Debug, Clone)]
pub struct Dynamics {
    constant: f64,
    frequencies: Vec<f64>,
    amplitudes: Vec<Complex64>,
    norm: f64,
}

impl Dynamics {
    /// Expands `state` in the solver eigenbasis with the exact energies
    /// (`ħ = 1`), so doublet tunnelling is kept.
    pub fn new(spectrum: &Spectrum, state: &StateVector, which: Observable) -> Result<Self> {
        let coeffs = spectrum.eigen_coefficients(state)?;
        let norm = coeffs.iter().map(|c| c.norm_sqr()).sum();
        let kept: Vec<usize> = (0..coeffs.len()).filter(|&n| coeffs[n].norm() > COEFFICIENT_CUTOFF).collect();
        let model = spectrum.model();
        let j = model.j();
        let op = model.observable(which);
        let vectors: Vec<Vec<f64>> = kept.iter().map(|&n| spectrum.eigenvector(n)).collect();
        let applied: Vec<Vec<f64>> = vectors.iter().map(|v| op.apply(v)).collect();

        let mut constant = 0.0;
        let mut terms: Vec<(f64, Complex64)> = Vec::new();
        for (a, &n) in kept.iter().enumerate() {
            let vn = &vectors[a];
            let diag: f64 = vn.iter().zip(&applied[a]).map(|(x, y)| x * y).sum();
            constant += coeffs[n].norm_sqr() * diag / j;
            for (b, &m) in kept.iter().enumerate().skip(a + 1) {
                let o_nm: f64 = vn.iter().zip(&applied[b]).map(|(x, y)| x * y).sum();
                let amp = coeffs[n].conj() * coeffs[m] * (2.0 * o_nm / j);
                let omega = spectrum.exact_energy(m) - spectrum.exact_energy(n);
                if omega == 0.0 {
                    constant += amp.re;
                } else {
                    terms.push((omega, amp));
                }
            }
        }

        terms.sort_by(|x, y| x.1.norm().total_cmp(&y.1.norm()));
        let mut dropped = 0.0;
        let mut start = 0;
        while start < terms.len() && dropped + terms[start].1.norm() <= PAIR_BUDGET {
            dropped += terms[start].1.norm();
            start += 1;
        }
        let terms = &terms[start..];
        Ok(Dynamics {
            constant,
            frequencies: terms.iter().map(|t| t.0).collect(),
            amplitudes: terms.iter().map(|t| t.1).collect(),
            norm,
        })
    }

    /// Infinite-time average in the solver eigenbasis. Equals the
    /// recombined diagonal ensemble up to intra-doublet interference.
    pub fn constant(&self) -> f64 {
        self.constant
    }

    /// `Σ |c_n|²`; conserved exactly by the spectral propagator.
    pub fn norm(&self) -> f64 {
        self.norm
    }

    pub fn pair_count(&self) -> usize {
        self.frequencies.len()
    }

    pub fn max_frequency(&self) -> f64 {
        self.frequencies.iter().fold(0.0, |a, &w| a.max(w.abs()))
    }

    /// Step with `ω_max dt = 0.1`.
    pub fn suggested_dt(&self) -> f64 {
        let w = self.max_frequency();
        if w > 0.0 {
            0.1 / w
        } else {
            1.0
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        let mut acc = self.constant;
        for (w, a) in self.frequencies.iter().zip(&self.amplitudes) {
            let (s, c) = (w * t).sin_cos();
            acc += a.re * c + a.im * s;
        }
        acc
    }

    /// Samples `t0 + k dt` for `k < count` by phasor recurrence.
    pub fn sample_uniform(&self, t0: f64, dt: f64, count: usize) -> Result<TimeSeries> {
        if !(dt > 0.0) || !t0.is_finite() {
            return Err(Error::InvalidParameter("uniform grid needs dt > 0"));
        }
        let steps: Vec<Complex64> = self.frequencies.iter().map(|w| Complex64::from_polar(1.0, -w * dt)).collect();
        let mut phasors: Vec<Complex64> = Vec::new();
        let mut times = Vec::with_capacity(count);
        let mut values = Vec::with_capacity(count);
        for k in 0..count {
            let t = t0 + k as f64 * dt;
            if k % RESYNC == 0 {
                phasors = self
                    .frequencies
                    .iter()
                    .zip(&self.amplitudes)
                    .map(|(w, a)| a * Complex64::from_polar(1.0, -w * t))
                    .collect();
            }
            values.push(self.constant + phasors.iter().map(|p| p.re).sum::<f64>());
            for (p, r) in phasors.iter_mut().zip(&steps) {
                *p *= r;
            }
            times.push(t);
        }
        TimeSeries::new(times, values)
    }

    /// Samples arbitrary increasing times.
    pub fn sample(&self, times: &[f64]) -> Result<TimeSeries> {
        TimeSeries::new(times.to_vec(), times.iter().map(|&t| self.value(t)).collect())
    }
}

/// `<ψ(t)|O|ψ(t)>/J` at the requested times, `ψ(t) = Σ c_n e^{−i E_n t}|n>`.
pub fn evolve_expectation(
    spectrum: &Spectrum,
    state: &StateVector,
    which: Observable,
    times: &[f64],
) -> Result<TimeSeries> {
    if times.iter().any(|&t| !(t >= 0.0)) {
        return Err(Error::InvalidParameter("times must be non-negative"));
    }
    let dynamics = Dynamics::new(spectrum, state, which)?;
    if times.len() > 2 {
        let dt = times[1] - times[0];
        let uniform = times
            .iter()
            .enumerate()
            .all(|(k, &t)| (t - (times[0] + k as f64 * dt)).abs() <= 1e-9 * dt);
        if uniform && dt > 0.0 {
            let mut series = dynamics.sample_uniform(times[0], dt, times.len())?;
            series.times.copy_from_slice(times);
            return Ok(series);
        }
    }
    dynamics.sample(times)
}
