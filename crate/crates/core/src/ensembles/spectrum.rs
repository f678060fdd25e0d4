use alloc::vec::Vec;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::classical::Branch;
use crate::eigen::eigh_tridiagonal;
use crate::model::{Observable, Parity, SpinModel, StateVector};
use crate::{Error, Result};

/// Neighbours on each side used for the local mean spacing in doublet
/// detection.
const SPACING_HALF_WINDOW: usize = 10;

/// Full spectrum of a model with parity and branch labels.
///
/// Eigenvectors come from the two reflection sectors, so every raw vector
/// has definite parity. Above the separatrix, adjacent opposite-parity
/// levels closer than `max(1e-12 J, 1e-3 × local spacing)` are rotated
/// into the eigenvectors of `Jz` restricted to their span; the member with
/// `<Jz> > 0` is labelled `Branch::Plus`. Both members then carry the
/// pair's mean energy, while [`Spectrum::exact_energy`] keeps the solver's
/// values and [`Spectrum::eigenvector`] undoes the rotation.
#[derive(Debug, Clone)]
pub struct Spectrum {
    model: SpinModel,
    exact: Vec<f64>,
    energies: Vec<f64>,
    parity: Vec<Parity>,
    branch: Vec<Branch>,
    vectors: Vec<f64>,
    /// `(cos, sin)` of the doublet rotation, stored at the `Minus` index.
    mixing: Vec<Option<(f64, f64)>>,
}

impl Spectrum {
    pub fn new(model: &SpinModel) -> Result<Self> {
        let n = model.dim();
        let blocks = model.parity_blocks();
        let even = eigh_tridiagonal(&blocks.even)?;
        let odd = eigh_tridiagonal(&blocks.odd)?;

        let mut exact = Vec::with_capacity(n);
        let mut parity = Vec::with_capacity(n);
        let mut vectors = Vec::with_capacity(n * n);
        let (mut i, mut k) = (0, 0);
        while i < even.dim() || k < odd.dim() {
            let take_even = k >= odd.dim() || (i < even.dim() && even.values()[i] <= odd.values()[k]);
            if take_even {
                exact.push(even.values()[i]);
                parity.push(Parity::Even);
                vectors.extend(blocks.expand(Parity::Even, even.vector(i)));
                i += 1;
            } else {
                exact.push(odd.values()[k]);
                parity.push(Parity::Odd);
                vectors.extend(blocks.expand(Parity::Odd, odd.vector(k)));
                k += 1;
            }
        }

        let j = model.j();
        let mut spectrum = Spectrum {
            model: *model,
            energies: exact.iter().map(|e| e / j).collect(),
            exact,
            parity,
            branch: alloc::vec![Branch::Zero; n],
            vectors,
            mixing: alloc::vec![None; n],
        };
        spectrum.recombine_doublets();
        Ok(spectrum)
    }

    fn local_spacing(&self, i: usize) -> f64 {
        let n = self.dim();
        let lo = i.saturating_sub(SPACING_HALF_WINDOW);
        let hi = (i + SPACING_HALF_WINDOW + 1).min(n - 1);
        if hi <= lo {
            return 0.0;
        }
        (self.exact[hi] - self.exact[lo]) / (hi - lo) as f64
    }

    fn recombine_doublets(&mut self) {
        let n = self.dim();
        let j = self.model.j();
        let mut i = 0;
        while i + 1 < n {
            let gap = self.exact[i + 1] - self.exact[i];
            let threshold = (1e-12 * j).max(1e-3 * self.local_spacing(i));
            let paired = self.exact[i] > j && self.parity[i] != self.parity[i + 1] && gap < threshold;
            if !paired {
                i += 1;
                continue;
            }
            self.rotate_pair(i);
            let mean = 0.5 * (self.exact[i] + self.exact[i + 1]) / j;
            self.energies[i] = mean;
            self.energies[i + 1] = mean;
            self.branch[i] = Branch::Minus;
            self.branch[i + 1] = Branch::Plus;
            i += 2;
        }
    }

    /// Replaces columns `i`, `i + 1` by the `Jz` eigenvectors of their span,
    /// the negative-`<Jz>` one first.
    fn rotate_pair(&mut self, i: usize) {
        let n = self.dim();
        let (jaa, jbb, jab) = {
            let (a, b) = (self.vector(i), self.vector(i + 1));
            let mut acc = (0.0, 0.0, 0.0);
            for (k, (x, y)) in a.iter().zip(b).enumerate() {
                let m = self.model.m(k);
                acc.0 += m * x * x;
                acc.1 += m * y * y;
                acc.2 += m * x * y;
            }
            acc
        };
        let theta = 0.5 * (2.0 * jab).atan2(jaa - jbb);
        let (s, c) = theta.sin_cos();
        self.mixing[i] = Some((c, s));
        let (left, right) = self.vectors.split_at_mut((i + 1) * n);
        let a = &mut left[i * n..];
        let b = &mut right[..n];
        for (x, y) in a.iter_mut().zip(b.iter_mut()) {
            let plus = c * *x + s * *y;
            let minus = -s * *x + c * *y;
            *x = minus;
            *y = plus;
        }
    }

    pub fn model(&self) -> &SpinModel {
        &self.model
    }

    pub fn dim(&self) -> usize {
        self.exact.len()
    }

    /// Per-spin energies `E_n/J`, ascending; doublet members share their
    /// mean.
    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// Solver eigenvalue of level `n` in absolute units.
    pub fn exact_energy(&self, n: usize) -> f64 {
        self.exact[n]
    }

    pub fn exact_energies(&self) -> &[f64] {
        &self.exact
    }

    /// Reflection parity of the solver vector at this level.
    pub fn parity(&self, n: usize) -> Parity {
        self.parity[n]
    }

    pub fn branch(&self, n: usize) -> Branch {
        self.branch[n]
    }

    /// Eigenvector `n` in the `m = −J..J` basis (recombined inside doublets).
    pub fn vector(&self, n: usize) -> &[f64] {
        let d = self.dim();
        &self.vectors[n * d..(n + 1) * d]
    }

    /// Solver eigenvector `n` with definite parity, paired with
    /// [`Spectrum::exact_energy`]. Differs from [`Spectrum::vector`] only
    /// inside recombined doublets.
    pub fn eigenvector(&self, n: usize) -> Vec<f64> {
        match self.pair_of(n) {
            None => self.vector(n).to_vec(),
            Some((i, c, s)) => {
                let (minus, plus) = (self.vector(i), self.vector(i + 1));
                let (a, b) = if n == i { (c, -s) } else { (s, c) };
                plus.iter().zip(minus).map(|(p, m)| a * p + b * m).collect()
            }
        }
    }

    fn pair_of(&self, n: usize) -> Option<(usize, f64, f64)> {
        if let Some((c, s)) = self.mixing[n] {
            return Some((n, c, s));
        }
        match n.checked_sub(1).and_then(|i| self.mixing[i]) {
            Some((c, s)) if self.branch[n] == Branch::Plus => Some((n - 1, c, s)),
            _ => None,
        }
    }

    /// `<n|ψ>` in the solver eigenbasis (see [`Spectrum::eigenvector`]).
    pub fn eigen_coefficients(&self, state: &StateVector) -> Result<Vec<Complex64>> {
        let mut coeffs = self.coefficients(state)?;
        for i in 0..self.dim() {
            if let Some((c, s)) = self.mixing[i] {
                let (minus, plus) = (coeffs[i], coeffs[i + 1]);
                coeffs[i] = plus * c - minus * s;
                coeffs[i + 1] = plus * s + minus * c;
            }
        }
        Ok(coeffs)
    }

    /// `c_n = <n|ψ>` in the recombined basis of [`Spectrum::vector`].
    pub fn coefficients(&self, state: &StateVector) -> Result<Vec<Complex64>> {
        if state.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: state.dim() });
        }
        let amps = state.amplitudes();
        Ok((0..self.dim())
            .map(|n| self.vector(n).iter().zip(amps).map(|(v, a)| a * *v).sum())
            .collect())
    }

    /// `<n|O|n>/J` for every level.
    pub fn expectations(&self, which: Observable) -> Vec<f64> {
        let op = self.model.observable(which);
        let j = self.model.j();
        (0..self.dim()).map(|n| op.bilinear(self.vector(n), self.vector(n)) / j).collect()
    }

    /// Index of the level whose per-spin energy is closest to `energy`.
    pub fn nearest(&self, energy: f64) -> usize {
        let idx = self.energies.partition_point(|&e| e < energy);
        if idx == 0 {
            0
        } else if idx == self.dim() || energy - self.energies[idx - 1] <= self.energies[idx] - energy {
            idx - 1
        } else {
            idx
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::eigvalsh_tridiagonal;

    #[test]
    fn matches_full_solver() {
        for &j in &[0.5, 1.0, 2.5, 7.0, 30.0, 30.5] {
            let model = SpinModel::new(j, 6.0).unwrap();
            let spec = Spectrum::new(&model).unwrap();
            let full = eigvalsh_tridiagonal(&model.hamiltonian()).unwrap();
            for (a, b) in spec.exact_energies().iter().zip(&full) {
                assert!((a - b).abs() < 1e-11 * (1.0 + b.abs()), "J={j}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn vectors_are_orthonormal_eigenvectors() {
        let model = SpinModel::new(12.0, 10.0).unwrap();
        let spec = Spectrum::new(&model).unwrap();
        let h = model.hamiltonian();
        for a in 0..spec.dim() {
            let va = spec.vector(a);
            let hv = h.apply(va);
            let e = spec.exact_energy(a);
            let tol = 1e-9 * (1.0 + e.abs());
            if spec.branch(a) == Branch::Zero {
                assert!(hv.iter().zip(va).all(|(x, y)| (x - e * y).abs() < tol));
            }
            for b in a..spec.dim() {
                let dot: f64 = va.iter().zip(spec.vector(b)).map(|(x, y)| x * y).sum();
                assert!((dot - if a == b { 1.0 } else { 0.0 }).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn branches_are_labelled_by_jz_sign() {
        let model = SpinModel::new(40.0, 10.0).unwrap();
        let spec = Spectrum::new(&model).unwrap();
        let jz = spec.expectations(Observable::Jz);
        let mut pairs = 0;
        for n in 0..spec.dim() {
            match spec.branch(n) {
                Branch::Plus => {
                    pairs += 1;
                    assert_eq!(spec.branch(n - 1), Branch::Minus);
                    assert!(jz[n] > 0.0 && (jz[n] + jz[n - 1]).abs() < 1e-6);
                    assert_eq!(spec.energies()[n], spec.energies()[n - 1]);
                }
                Branch::Minus => assert!(jz[n] < 0.0),
                Branch::Zero => assert!(jz[n].abs() < 1e-8),
            }
        }
        assert!(pairs > 10);
    }

    #[test]
    fn undoing_the_rotation_restores_eigenvectors() {
        let model = SpinModel::new(15.0, 10.0).unwrap();
        let spec = Spectrum::new(&model).unwrap();
        let h = model.hamiltonian();
        let mut seen = 0;
        for n in 0..spec.dim() {
            let v = spec.eigenvector(n);
            let e = spec.exact_energy(n);
            assert!(h.apply(&v).iter().zip(&v).all(|(x, y)| (x - e * y).abs() < 1e-9 * (1.0 + e.abs())));
            let sign = f64::from(spec.parity(n).sign());
            assert!((0..v.len()).all(|i| (v[i] - sign * v[v.len() - 1 - i]).abs() < 1e-12));
            seen += usize::from(spec.branch(n) != Branch::Zero);
        }
        assert!(seen > 0);
        let amps = (0..spec.dim()).map(|k| Complex64::new(k as f64, 1.0 - k as f64)).collect();
        let psi = StateVector::new(amps).unwrap();
        let direct: Vec<Complex64> = (0..spec.dim())
            .map(|n| spec.eigenvector(n).iter().zip(psi.amplitudes()).map(|(v, a)| a * *v).sum())
            .collect();
        for (a, b) in spec.eigen_coefficients(&psi).unwrap().iter().zip(&direct) {
            assert!((a - b).norm() < 1e-10 * (1.0 + b.norm()));
        }
    }

    #[test]
    fn nearest_level() {
        let model = SpinModel::new(5.0, 10.0).unwrap();
        let spec = Spectrum::new(&model).unwrap();
        assert_eq!(spec.nearest(-100.0), 0);
        assert_eq!(spec.nearest(100.0), spec.dim() - 1);
        let e = spec.energies()[4];
        assert_eq!(spec.energies()[spec.nearest(e + 1e-9)], e);
    }
}
