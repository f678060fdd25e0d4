//! SU(2) spin coherent states and their phase-space widths.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::classical::{z_on_contour, Branch};
use crate::model::{expectation, Observable, SpinModel, StateVector};
use crate::{Error, Result};

/// Coherent state centred on `(z', φ')`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherentState {
    pub z: f64,
    pub phi: f64,
    pub state: StateVector,
}

/// Amplitudes `c_m ∝ sqrt(C(2J, J+m)) cos(θ/2)^(J+m) sin(θ/2)^(J-m) e^(-i m φ')`
/// with `cos θ = z'`.
///
/// `|c_m|²` is a binomial distribution in `k = J + m` with success
/// probability `(1 + z')/2`. Log-weights are accumulated outward from the
/// mode, so no factorial is ever formed.
pub fn coherent_state(model: &SpinModel, z: f64, phi: f64) -> Result<CoherentState> {
    if !z.is_finite() || !phi.is_finite() {
        return Err(Error::InvalidParameter("coherent state centre must be finite"));
    }
    if z.abs() >= 1.0 {
        return Err(Error::Pole);
    }
    let n = model.two_j() as usize;
    let p = 0.5 * (1.0 + z);
    let q = 0.5 * (1.0 - z);
    let log_odds = p.ln() - q.ln();
    let mode = ((((n + 1) as f64) * p).floor() as usize).min(n);

    let mut log_w = vec![0.0; n + 1];
    for k in mode..n {
        log_w[k + 1] = log_w[k] + (((n - k) as f64) / ((k + 1) as f64)).ln() + log_odds;
    }
    for k in (0..mode).rev() {
        log_w[k] = log_w[k + 1] - (((n - k) as f64) / ((k + 1) as f64)).ln() - log_odds;
    }

    let j = model.j();
    let amplitudes: Vec<Complex64> = log_w
        .iter()
        .enumerate()
        .map(|(k, &lw)| {
            let m = k as f64 - j;
            Complex64::from_polar((0.5 * lw).exp(), -m * phi)
        })
        .collect();
    Ok(CoherentState { z, phi, state: StateVector::new(amplitudes)? })
}

/// Coherent state on the classical energy contour `E` at phase `φ'`.
///
/// `branch` selects the sign of `z'`; `Branch::Zero` is accepted only when
/// the contour crosses `z' = 0` there.
pub fn coherent_state_for_energy(
    model: &SpinModel,
    energy: f64,
    phi: f64,
    branch: Branch,
) -> Result<CoherentState> {
    let z = z_on_contour(energy, phi, model.lambda(), branch)?;
    coherent_state(model, z, phi)
}

/// Inverse variances of the Gaussian approximating a coherent state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianWidths {
    pub alpha_z: f64,
    pub alpha_phi: f64,
}

/// `α_φ = J(1 − z'²)/2`, `α_z = 2J/(1 − z'²)`.
pub fn gaussian_widths(model: &SpinModel, z: f64) -> Result<GaussianWidths> {
    if !(z.abs() < 1.0) {
        return Err(Error::Pole);
    }
    let j = model.j();
    let w = 1.0 - z * z;
    Ok(GaussianWidths { alpha_z: 2.0 * j / w, alpha_phi: 0.5 * j * w })
}

/// Standard deviation of `H/J` in `state`: `sqrt(<H²> − <H>²)/J`.
pub fn energy_width(model: &SpinModel, state: &StateVector) -> Result<f64> {
    let h = model.hamiltonian();
    if state.dim() != h.dim() {
        return Err(Error::DimensionMismatch { expected: h.dim(), found: state.dim() });
    }
    let mean = expectation(state, &h)?;
    let amps = state.amplitudes();
    let n = amps.len();
    let mut second = 0.0;
    for i in 0..n {
        let mut hv = amps[i] * h.diag[i];
        if i > 0 {
            hv += amps[i - 1] * h.offdiag[i - 1];
        }
        if i + 1 < n {
            hv += amps[i + 1] * h.offdiag[i];
        }
        second += hv.norm_sqr();
    }
    Ok((second - mean * mean).max(0.0).sqrt() / model.j())
}

/// `<ψ|O|ψ>/J` for one of the model's observables.
pub fn scaled_expectation(model: &SpinModel, state: &StateVector, which: Observable) -> Result<f64> {
    Ok(expectation(state, &model.observable(which))? / model.j())
}
