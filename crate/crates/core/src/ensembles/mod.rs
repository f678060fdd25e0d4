//! Exact long-time behaviour: eigenbasis expansion, diagonal and
//! micro-canonical ensembles, unitary dynamics, and level statistics.

mod dynamics;
mod spectrum;

pub use dynamics::{evolve_expectation, time_average, Dynamics, TimeSeries};
pub use spectrum::Spectrum;

use alloc::vec::Vec;

use crate::classical::Branch;
use crate::model::{Observable, StateVector};
use crate::{Error, Result};

/// Eigenbasis weights `|c_n|²` with the per-spin energies they sit at.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalEnsemble {
    pub weights: Vec<f64>,
    pub energies: Vec<f64>,
}

impl DiagonalEnsemble {
    /// `Σ_n w_n x_n` for precomputed per-level values.
    pub fn average(&self, values: &[f64]) -> Result<f64> {
        if values.len() != self.weights.len() {
            return Err(Error::DimensionMismatch { expected: self.weights.len(), found: values.len() });
        }
        Ok(self.weights.iter().zip(values).map(|(w, x)| w * x).sum())
    }

    /// Mean per-spin energy `Σ w_n E_n`.
    pub fn mean_energy(&self) -> f64 {
        self.weights.iter().zip(&self.energies).map(|(w, e)| w * e).sum()
    }
}

pub fn diagonal_ensemble(state: &StateVector, spectrum: &Spectrum) -> Result<DiagonalEnsemble> {
    let coeffs = spectrum.coefficients(state)?;
    Ok(DiagonalEnsemble {
        weights: coeffs.iter().map(|c| c.norm_sqr()).collect(),
        energies: spectrum.energies().to_vec(),
    })
}

/// `Σ_n |c_n|² <n|O|n>/J`, using branch-recombined vectors inside doublets.
pub fn diagonal_average(ens: &DiagonalEnsemble, spectrum: &Spectrum, which: Observable) -> Result<f64> {
    ens.average(&spectrum.expectations(which))
}

/// Energy window for micro-canonical averages.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Window {
    /// The `k` eligible levels nearest in energy.
    Nearest(usize),
    /// All eligible levels with `|E_n − E| ≤ w` (per-spin).
    HalfWidth(f64),
}

impl Default for Window {
    fn default() -> Self {
        Window::Nearest(21)
    }
}

/// Which levels are eligible for a micro-canonical average.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BranchFilter {
    #[default]
    All,
    Only(Branch),
}

impl BranchFilter {
    fn admits(self, b: Branch) -> bool {
        match self {
            BranchFilter::All => true,
            BranchFilter::Only(want) => want == b,
        }
    }
}

/// Unweighted mean of per-level `values` over the window around per-spin
/// `energy`.
pub fn microcanonical_average(
    spectrum: &Spectrum,
    values: &[f64],
    energy: f64,
    window: Window,
    filter: BranchFilter,
) -> Result<f64> {
    if values.len() != spectrum.dim() {
        return Err(Error::DimensionMismatch { expected: spectrum.dim(), found: values.len() });
    }
    let energies = spectrum.energies();
    let mut eligible: Vec<usize> = (0..spectrum.dim()).filter(|&n| filter.admits(spectrum.branch(n))).collect();
    match window {
        Window::Nearest(k) => {
            eligible.sort_by(|&a, &b| (energies[a] - energy).abs().total_cmp(&(energies[b] - energy).abs()));
            eligible.truncate(k);
        }
        Window::HalfWidth(w) => eligible.retain(|&n| (energies[n] - energy).abs() <= w),
    }
    if eligible.is_empty() {
        return Err(Error::EmptyWindow);
    }
    Ok(eligible.iter().map(|&n| values[n]).sum::<f64>() / eligible.len() as f64)
}

/// Consecutive per-spin spacings of the solver eigenvalues.
pub fn level_spacings(spectrum: &Spectrum) -> Vec<f64> {
    let j = spectrum.model().j();
    spectrum.exact_energies().windows(2).map(|w| (w[1] - w[0]) / j).collect()
}

/// Mean consecutive per-spin spacing among the `count` levels nearest
/// `energy`.
pub fn local_mean_spacing(spectrum: &Spectrum, energy: f64, count: usize) -> Result<f64> {
    if count < 2 || count > spectrum.dim() {
        return Err(Error::InvalidParameter("spacing window needs 2 <= count <= N"));
    }
    let centre = spectrum.nearest(energy);
    let lo = centre.saturating_sub(count / 2).min(spectrum.dim() - count);
    let exact = spectrum.exact_energies();
    Ok((exact[lo + count - 1] - exact[lo]) / ((count - 1) as f64 * spectrum.model().j()))
}

/// Per-spin gap between the level nearest `energy` and its opposite-parity
/// neighbour. Defined above the separatrix only.
pub fn doublet_splitting(spectrum: &Spectrum, energy: f64) -> Result<f64> {
    let lambda = spectrum.model().lambda();
    if !(energy > 1.0 && energy < 0.5 * lambda + 0.5 / lambda) {
        return Err(Error::OutOfBand { energy });
    }
    let exact = spectrum.exact_energies();
    let j = spectrum.model().j();
    let k = spectrum.nearest(energy);
    let mut best: Option<f64> = None;
    for other in [k.wrapping_sub(1), k + 1] {
        if other < spectrum.dim() && spectrum.parity(other) != spectrum.parity(k) {
            let gap = (exact[other] - exact[k]).abs() / j;
            best = Some(best.map_or(gap, |b: f64| b.min(gap)));
        }
    }
    best.ok_or(Error::OutOfBand { energy })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::SpinModel;
    use crate::states::coherent_state;
    use num_complex::Complex64;

    #[test]
    fn eigenvector_has_single_weight() {
        let model = SpinModel::new(6.0, 10.0).unwrap();
        let spec = Spectrum::new(&model).unwrap();
        let amps = spec.vector(3).iter().map(|&x| Complex64::new(x, 0.0)).collect();
        let ens = diagonal_ensemble(&StateVector::new(amps).unwrap(), &spec).unwrap();
        for (n, w) in ens.weights.iter().enumerate() {
            assert!((w - if n == 3 { 1.0 } else { 0.0 }).abs() < 1e-14);
        }
        let jx = diagonal_average(&ens, &spec, Observable::Jx).unwrap();
        assert!((jx - spec.expectations(Observable::Jx)[3]).abs() < 1e-14);
    }

    #[test]
    fn weights_are_complete() {
        let model = SpinModel::new(5.0, 10.0).unwrap();
        let spec = Spectrum::new(&model).unwrap();
        let cs = coherent_state(&model, 0.2, 1.1).unwrap();
        let ens = diagonal_ensemble(&cs.state, &spec).unwrap();
        assert!((ens.weights.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_state_window() {
        let model = SpinModel::new(5.0, 10.0).unwrap();
        let spec = Spectrum::new(&model).unwrap();
        let jx = spec.expectations(Observable::Jx);
        let e = spec.energies()[2];
        let v = microcanonical_average(&spec, &jx, e, Window::Nearest(1), BranchFilter::All).unwrap();
        assert_eq!(v, jx[2]);
        let v = microcanonical_average(&spec, &jx, e, Window::HalfWidth(1e-12), BranchFilter::All).unwrap();
        assert_eq!(v, jx[2]);
        assert_eq!(
            microcanonical_average(&spec, &jx, 100.0, Window::HalfWidth(0.1), BranchFilter::All),
            Err(Error::EmptyWindow)
        );
    }

    #[test]
    fn spin_half_spacing() {
        let spec = Spectrum::new(&SpinModel::new(0.5, 10.0).unwrap()).unwrap();
        let gaps = level_spacings(&spec);
        assert_eq!(gaps.len(), 1);
        // Absolute gap 3.0 - 2.0 = 1.0, i.e. 2.0 per spin.
        assert!((gaps[0] * 0.5 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn splitting_needs_self_trapped_energy() {
        let spec = Spectrum::new(&SpinModel::new(20.0, 10.0).unwrap()).unwrap();
        assert!(doublet_splitting(&spec, 0.5).is_err());
        let s = doublet_splitting(&spec, 1.5).unwrap();
        assert!(s > 0.0 && s < 1e-3);
    }
}
