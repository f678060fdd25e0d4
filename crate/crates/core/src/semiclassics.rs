//! Asymptotics of the separatrix memory effect.
//!
//! A coherent state on `E = 1` has a Gaussian energy profile of width `σ`
//! multiplied by the orbit normalization `ω(E)`, which vanishes
//! logarithmically on the separatrix. The resulting double peak sits at
//! `E = 1 ± δ` with `δ` given by the lower Lambert branch, and the long-time
//! observables follow from the near-separatrix orbit averages at `1 ± δ`
//! weighted 2:1 toward the self-trapped side.

use alloc::vec::Vec;
use core::f64::consts::{E, PI};
#[allow(unused_imports)]
use num_traits::Float;

use crate::classical::{omega_inv, wrap_phase, z_on_contour, Branch, BranchSum};
use crate::model::SpinModel;
use crate::quad::{integrate_pieces, QuadOptions};
use crate::states::gaussian_widths;
use crate::{Error, Result};

/// Coherent-state energy width `σ` (per spin) from the linearized energy:
/// `σ² = γ²/(2α_z) + κ²/(2α_φ)` with `γ = ∂H/∂z`, `κ = ∂H/∂φ`.
pub fn energy_variance_sigma(model: &SpinModel, z: f64, phi: f64) -> Result<f64> {
    let widths = gaussian_widths(model, z)?;
    let s = ((1.0 - z) * (1.0 + z)).sqrt();
    let gamma = model.lambda() * z + z * phi.cos() / s;
    let kappa = s * phi.sin();
    if gamma.abs() < 1e-14 && kappa.abs() < 1e-14 {
        return Err(Error::FixedPoint);
    }
    let var = gamma * gamma / (2.0 * widths.alpha_z) + kappa * kappa / (2.0 * widths.alpha_phi);
    Ok(var.sqrt())
}

/// Which side of the separatrix: `E = 1 + δ` or `E = 1 − δ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Above,
    Below,
}

/// Parameters of the double-peak saddle.
///
/// `g_above`/`g_below` are the log-prefactor constants in
/// `ω(1 ± δ)⁻¹ ∝ 1 − G ln δ`. The pure asymptotic limit, in which the
/// additive constants vanish, is `G = ∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaddleModel {
    pub f: f64,
    pub g_above: f64,
    pub g_below: f64,
    pub sigma: f64,
}

impl SaddleModel {
    /// `F = 1/(2σ²J)` for the coherent state at `(z', φ')`, with `G = ∞`.
    pub fn new(model: &SpinModel, z: f64, phi: f64) -> Result<Self> {
        let sigma = energy_variance_sigma(model, z, phi)?;
        let f = 1.0 / (2.0 * sigma * sigma * model.j());
        Ok(SaddleModel { f, g_above: f64::INFINITY, g_below: f64::INFINITY, sigma })
    }

    pub fn with_log_constants(self, g_above: f64, g_below: f64) -> Result<Self> {
        if !(g_above > 0.0 && g_below > 0.0) {
            return Err(Error::InvalidParameter("log-prefactor constants must be positive"));
        }
        Ok(SaddleModel { g_above, g_below, ..self })
    }

    /// Replaces `G±` by [`log_constants`] of the model.
    pub fn with_derived_constants(self, lambda: f64) -> Result<Self> {
        let (above, below) = log_constants(lambda)?;
        self.with_log_constants(above, below)
    }

    pub fn g(&self, side: Side) -> f64 {
        match side {
            Side::Above => self.g_above,
            Side::Below => self.g_below,
        }
    }
}

/// `G±` from the quadrature periods: `T(1 ± δ) ≈ A±(−ln δ) + B±` with the
/// exact log slopes `A₊ = 1/sqrt(Λ−1)` (one lobe) and `A₋ = 2/sqrt(Λ−1)`,
/// so `G± = A±/B±`.
pub fn log_constants(lambda: f64) -> Result<(f64, f64)> {
    let delta: f64 = 1e-8;
    let slope = 1.0 / (lambda - 1.0).sqrt();
    let log = -delta.ln();
    let mut out = [0.0; 2];
    for (k, (energy, a)) in [(1.0 + delta, slope), (1.0 - delta, 2.0 * slope)].into_iter().enumerate() {
        let b = omega_inv(energy, lambda, BranchSum::PerBranch)? - a * log;
        if !(b > 0.0) {
            return Err(Error::OutOfRegime("log-prefactor constant is not positive"));
        }
        out[k] = a / b;
    }
    Ok((out[0], out[1]))
}

/// Lower real branch `W₋₁(x)` for `x ∈ [−1/e, 0)`.
pub fn lambert_w_minus1(x: f64) -> Result<f64> {
    let branch_point = -1.0 / E;
    if !(x < 0.0) || x < branch_point * (1.0 + 4.0 * f64::EPSILON) {
        return Err(Error::InvalidParameter("W_-1 is defined on [-1/e, 0)"));
    }
    if x <= branch_point {
        return Ok(-1.0);
    }
    let near_branch = x < -0.25;
    let mut w = if near_branch {
        let p = -(2.0 * (1.0 + E * x)).sqrt();
        -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p
    } else {
        let l1 = (-x).ln();
        let l2 = (-l1).ln();
        l1 - l2 + l2 / l1
    };
    let target = (-x).ln();
    for _ in 0..64 {
        let step = if near_branch {
            let ew = w.exp();
            let f = w * ew - x;
            let fp = ew * (w + 1.0);
            if fp == 0.0 {
                break;
            }
            f / (fp - (w + 2.0) * f / (2.0 * (w + 1.0)))
        } else {
            // Halley on w + ln(−w) = ln(−x), which stays well scaled for tiny x.
            let g = w + (-w).ln() - target;
            let gp = 1.0 + 1.0 / w;
            let gpp = -1.0 / (w * w);
            g / (gp - g * gpp / (2.0 * gp))
        };
        if !step.is_finite() {
            break;
        }
        w -= step;
        if step.abs() <= 4.0 * f64::EPSILON * w.abs() {
            break;
        }
    }
    Ok(w.min(-1.0))
}

/// Distance `|δ|` of the saddle from `E = 1` on one side:
/// `δ = 1/sqrt(2JF · (−W₋₁(−e^{−2/G}/(2JF))))`.
pub fn saddle_delta(j: f64, f: f64, g: f64) -> Result<f64> {
    if !(j > 0.0 && f > 0.0 && g > 0.0) {
        return Err(Error::InvalidParameter("saddle needs J, F, G > 0"));
    }
    let scale = 2.0 * j * f;
    let x = -(-2.0 / g).exp() / scale;
    if x < -1.0 / E {
        return Err(Error::OutOfRegime("pre-asymptotic: 2JF e^(2/G) <= e, no saddle"));
    }
    let w = lambert_w_minus1(x)?;
    Ok(1.0 / (scale * -w).sqrt())
}

/// `d/dδ [−2JFδ² − ln(1 − G ln δ)]` divided by `4JFδ`, so a root gives 0
/// on a scale of one.
pub fn saddle_residual(j: f64, f: f64, g: f64, delta: f64) -> f64 {
    let curvature = 4.0 * j * f * delta;
    let log_term = if g.is_infinite() {
        -1.0 / (delta * delta.ln())
    } else {
        g / (delta * (1.0 - g * delta.ln()))
    };
    (log_term - curvature) / curvature
}

/// Near-separatrix orbit averages `(jx, |jz|)` at `E = 1 ± δ`.
pub fn separatrix_observables(delta: f64, side: Side, lambda: f64) -> Result<(f64, f64)> {
    if !(delta > 0.0 && delta <= 0.1) {
        return Err(Error::InvalidParameter("separatrix offset must satisfy 0 < delta <= 0.1"));
    }
    Ok(match side {
        Side::Above => (
            -1.0 + 2.0 * delta / (lambda - 1.0),
            4.0 * PI * (lambda - 1.0).sqrt() / (lambda * -delta.ln()),
        ),
        Side::Below => (-1.0 + delta, 0.0),
    })
}

/// Predicted long-time `(jx, |jz|)` for a coherent state on `E = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LtoPrediction {
    pub jx: f64,
    pub jz: f64,
    pub f: f64,
}

/// How the two saddles enter the 2:1 combination.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SaddleWeighting {
    /// Both observables at the common large-J offset.
    Symmetric,
    /// Each side at its own finite-J saddle.
    Asymmetric,
}

/// `F(φ')` of the coherent state on `E = 1` at `φ'`, rejecting phases
/// within three angular widths of the unstable fixed point.
pub fn memory_factor(model: &SpinModel, phi: f64) -> Result<f64> {
    let z = z_on_contour(1.0, phi, model.lambda(), Branch::Plus)?;
    let alpha_phi = gaussian_widths(model, z)?.alpha_phi;
    if wrap_phase(phi - PI).abs() < 3.0 / (2.0 * alpha_phi).sqrt() {
        return Err(Error::OutOfRegime("initial phase within the Gaussian width of the unstable fixed point"));
    }
    Ok(SaddleModel::new(model, z, phi)?.f)
}

/// Closed forms `jz = 4π sqrt(Λ−1) / (3Λ ln(FJ ln J))` and
/// `jx = −1 + (3+Λ)/(3(Λ−1)) / sqrt(FJ ln J)`.
pub fn predict_lto(model: &SpinModel, phi: f64) -> Result<LtoPrediction> {
    let lambda = model.lambda();
    let j = model.j();
    let f = memory_factor(model, phi)?;
    let arg = f * j * j.ln();
    if !(arg > 1.0) {
        return Err(Error::OutOfRegime("F J ln J must exceed 1"));
    }
    Ok(LtoPrediction {
        jx: -1.0 + (3.0 + lambda) / (3.0 * (lambda - 1.0)) / arg.sqrt(),
        jz: 4.0 * PI * (lambda - 1.0).sqrt() / (3.0 * lambda * arg.ln()),
        f,
    })
}

/// `O = (2 O(1+δ₊) + O(1−δ₋))/3` with `δ±` from [`saddle_delta`].
pub fn predict_lto_saddle(model: &SpinModel, saddle: &SaddleModel, weighting: SaddleWeighting) -> Result<LtoPrediction> {
    let (j, lambda) = (model.j(), model.lambda());
    let (g_above, g_below) = match weighting {
        SaddleWeighting::Symmetric => (f64::INFINITY, f64::INFINITY),
        SaddleWeighting::Asymmetric => (saddle.g_above, saddle.g_below),
    };
    let d_above = saddle_delta(j, saddle.f, g_above)?;
    let d_below = saddle_delta(j, saddle.f, g_below)?;
    let regime = |r: Result<(f64, f64)>| r.map_err(|_| Error::OutOfRegime("saddle offset above 0.1"));
    let above = regime(separatrix_observables(d_above, Side::Above, lambda))?;
    let below = regime(separatrix_observables(d_below, Side::Below, lambda))?;
    Ok(LtoPrediction {
        jx: (2.0 * above.0 + below.0) / 3.0,
        jz: (2.0 * above.1 + below.1) / 3.0,
        f: saddle.f,
    })
}

/// Asymptotic diagonal-ensemble density `∝ exp(−(E − E₀)²/(2σ²)) ω(E)`.
///
/// Above the separatrix `ω` is the single-lobe normalization, since a
/// coherent state with `z' ≠ 0` overlaps one branch only.
#[derive(Debug, Clone, Copy)]
pub struct DiagonalDensity {
    pub center: f64,
    pub sigma: f64,
    lambda: f64,
    lo: f64,
    hi: f64,
    norm: f64,
}

impl DiagonalDensity {
    fn raw(center: f64, sigma: f64, lambda: f64, energy: f64) -> f64 {
        if energy == 1.0 {
            return 0.0;
        }
        let gauss = (-(energy - center).powi(2) / (2.0 * sigma * sigma)).exp();
        match omega_inv(energy, lambda, BranchSum::PerBranch) {
            Ok(t) => gauss / t,
            Err(_) => 0.0,
        }
    }

    /// Normalized density at `energy`; zero outside the integration range.
    pub fn value(&self, energy: f64) -> f64 {
        if energy < self.lo || energy > self.hi {
            return 0.0;
        }
        Self::raw(self.center, self.sigma, self.lambda, energy) / self.norm
    }

    /// Energy range carrying all but a negligible part of the weight.
    pub fn support(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    /// Local maxima on a uniform grid of `points` over the support.
    pub fn peaks(&self, points: usize) -> Vec<f64> {
        let points = points.max(3);
        let grid: Vec<(f64, f64)> = (0..points)
            .map(|k| {
                let e = self.lo + (self.hi - self.lo) * k as f64 / (points - 1) as f64;
                (e, self.value(e))
            })
            .collect();
        grid.windows(3).filter(|w| w[1].1 > w[0].1 && w[1].1 >= w[2].1).map(|w| w[1].0).collect()
    }
}

pub fn semiclassical_diag_density(model: &SpinModel, z: f64, phi: f64) -> Result<DiagonalDensity> {
    let lambda = model.lambda();
    let center = crate::classical::classical_energy(z, phi, lambda)?;
    if !(center > -1.0 && center < 0.5 * lambda) {
        return Err(Error::OutOfBand { energy: center });
    }
    let sigma = energy_variance_sigma(model, z, phi)?;
    let eps = 1e-12;
    let lo = (center - 12.0 * sigma).max(-1.0 + eps);
    let hi = (center + 12.0 * sigma).min(0.5 * lambda - eps);
    let mut points = alloc::vec![lo, hi];
    if lo < 1.0 && hi > 1.0 {
        points.insert(1, 1.0);
    }
    let opts = QuadOptions { abs_tol: 0.0, rel_tol: 1e-8, max_intervals: 2000 };
    let norm = integrate_pieces(|e| DiagonalDensity::raw(center, sigma, lambda, e), &points, opts).value;
    if !(norm > 0.0) {
        return Err(Error::OutOfBand { energy: center });
    }
    Ok(DiagonalDensity { center, sigma, lambda, lo, hi, norm })
}

/// Ordinary least squares `y = slope · x + intercept`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<LinearFit> {
    if xs.len() != ys.len() {
        return Err(Error::DimensionMismatch { expected: xs.len(), found: ys.len() });
    }
    if xs.len() < 2 {
        return Err(Error::InvalidParameter("a line needs at least two points"));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidParameter("abscissae must not all coincide"));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let ss_res: f64 = xs.iter().zip(ys).map(|(x, y)| (y - slope * x - intercept).powi(2)).sum();
    let r2 = if ss_tot == 0.0 { 1.0 } else { 1.0 - ss_res / ss_tot };
    Ok(LinearFit { slope, intercept, r2 })
}

/// Scaling abscissa `1/sqrt(J ln J)`.
pub fn memory_abscissa(j: f64) -> f64 {
    1.0 / (j * j.ln()).sqrt()
}

/// `F` such that `jx = −1 + (3+Λ)/(3(Λ−1)) / sqrt(F J ln J)` best fits the
/// data with the intercept pinned at −1.
pub fn fit_memory_factor(lambda: f64, js: &[f64], jx: &[f64]) -> Result<f64> {
    if js.len() != jx.len() || js.is_empty() {
        return Err(Error::DimensionMismatch { expected: js.len(), found: jx.len() });
    }
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (&j, &y) in js.iter().zip(jx) {
        let x = memory_abscissa(j);
        sxy += x * (y + 1.0);
        sxx += x * x;
    }
    let a = sxy / sxx;
    if !(a > 0.0) {
        return Err(Error::OutOfRegime("data do not approach -1 from above"));
    }
    Ok(((3.0 + lambda) / (3.0 * (lambda - 1.0) * a)).powi(2))
}
