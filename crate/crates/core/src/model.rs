//! The nonlinear spin model in the `Jz` eigenbasis.
//!
//! Basis vectors are ordered `m = -J, -J+1, ..., +J`; index `i` holds
//! `m = i - J`. All matrices are real symmetric tridiagonal.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::{Error, Result};

/// Spin size `J` and nonlinearity `Λ`.
///
/// `J` is stored doubled so half-integer sizes stay exact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinModel {
    two_j: u32,
    lambda: f64,
}

impl SpinModel {
    /// `j` must be a positive multiple of 1/2 and `lambda > 1`.
    pub fn new(j: f64, lambda: f64) -> Result<Self> {
        if !j.is_finite() || j <= 0.0 {
            return Err(Error::InvalidParameter("spin size J must be positive"));
        }
        let doubled = 2.0 * j;
        if (doubled - doubled.round()).abs() > 1e-9 || doubled.round() > u32::MAX as f64 {
            return Err(Error::InvalidParameter("spin size J must be a multiple of 1/2"));
        }
        if !lambda.is_finite() || lambda <= 1.0 {
            return Err(Error::InvalidParameter("nonlinearity must satisfy lambda > 1"));
        }
        Ok(SpinModel { two_j: doubled.round() as u32, lambda })
    }

    pub fn j(&self) -> f64 {
        0.5 * self.two_j as f64
    }

    pub fn two_j(&self) -> u32 {
        self.two_j
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Hilbert-space dimension `2J + 1`.
    pub fn dim(&self) -> usize {
        self.two_j as usize + 1
    }

    /// Magnetic quantum number of basis index `i`.
    pub fn m(&self, i: usize) -> f64 {
        i as f64 - self.j()
    }

    /// `<m+1| J+ |m> = sqrt(J(J+1) - m(m+1))` for the pair `(i, i+1)`.
    fn ladder(&self, i: usize) -> f64 {
        let j = self.j();
        let m = self.m(i);
        (j * (j + 1.0) - m * (m + 1.0)).max(0.0).sqrt()
    }

    /// `H = -Jx + Λ/(2J) Jz²` in absolute units.
    pub fn hamiltonian(&self) -> TridiagonalMatrix {
        let n = self.dim();
        let scale = self.lambda / (2.0 * self.j());
        let diag = (0..n).map(|i| scale * self.m(i) * self.m(i)).collect();
        let offdiag = (0..n - 1).map(|i| -0.5 * self.ladder(i)).collect();
        TridiagonalMatrix { diag, offdiag }
    }

    pub fn observable(&self, which: Observable) -> TridiagonalMatrix {
        let n = self.dim();
        match which {
            Observable::Jx => TridiagonalMatrix {
                diag: vec![0.0; n],
                offdiag: (0..n - 1).map(|i| 0.5 * self.ladder(i)).collect(),
            },
            Observable::Jz => TridiagonalMatrix {
                diag: (0..n).map(|i| self.m(i)).collect(),
                offdiag: vec![0.0; n - 1],
            },
            Observable::JzSquared => TridiagonalMatrix {
                diag: (0..n).map(|i| self.m(i) * self.m(i)).collect(),
                offdiag: vec![0.0; n - 1],
            },
            Observable::Energy => self.hamiltonian(),
        }
    }

    /// Hamiltonian restricted to the even and odd sectors of the reflection
    /// `|m> -> |-m>`, which commutes with `H`.
    pub fn parity_blocks(&self) -> ParityBlocks {
        let h = self.hamiltonian();
        let n = self.dim();
        // First index with m >= 0 (m = 0 for integer J, m = 1/2 otherwise).
        let centre = n / 2;
        let integer = self.two_j.is_multiple_of(2);
        let upper_diag = &h.diag[centre..];
        let upper_off = &h.offdiag[centre..];
        let (even, odd) = if integer {
            let mut even_off = upper_off.to_vec();
            even_off[0] *= core::f64::consts::SQRT_2;
            let even = TridiagonalMatrix { diag: upper_diag.to_vec(), offdiag: even_off };
            let odd = TridiagonalMatrix {
                diag: upper_diag[1..].to_vec(),
                offdiag: upper_off[1..].to_vec(),
            };
            (even, odd)
        } else {
            // <1/2|H|-1/2> folds into the first diagonal entry with sign ±.
            let link = h.offdiag[centre - 1];
            let mut even_diag = upper_diag.to_vec();
            let mut odd_diag = upper_diag.to_vec();
            even_diag[0] += link;
            odd_diag[0] -= link;
            (
                TridiagonalMatrix { diag: even_diag, offdiag: upper_off.to_vec() },
                TridiagonalMatrix { diag: odd_diag, offdiag: upper_off.to_vec() },
            )
        };
        ParityBlocks { dim: n, integer, even, odd }
    }
}

/// Observables available as tridiagonal matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Observable {
    Jx,
    Jz,
    JzSquared,
    /// The Hamiltonian itself (absolute units).
    Energy,
}

impl Observable {
    pub fn name(self) -> &'static str {
        match self {
            Observable::Jx => "jx",
            Observable::Jz => "jz",
            Observable::JzSquared => "jz2",
            Observable::Energy => "energy",
        }
    }

    /// `true` when the observable commutes with the reflection `m -> -m`.
    pub fn parity_even(self) -> bool {
        !matches!(self, Observable::Jz)
    }
}

/// Real symmetric tridiagonal matrix. Symmetry is structural.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalMatrix {
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
}

impl TridiagonalMatrix {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::InvalidParameter("tridiagonal matrix must have N >= 1"));
        }
        if offdiag.len() + 1 != diag.len() {
            return Err(Error::DimensionMismatch { expected: diag.len() - 1, found: offdiag.len() });
        }
        Ok(TridiagonalMatrix { diag, offdiag })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// `y = T x` for a real vector.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim();
        debug_assert_eq!(x.len(), n);
        let mut y: Vec<f64> = self.diag.iter().zip(x).map(|(d, v)| d * v).collect();
        for (i, &e) in self.offdiag.iter().enumerate() {
            y[i] += e * x[i + 1];
            y[i + 1] += e * x[i];
        }
        y
    }

    /// `<u|T|v>` for real vectors, without allocating.
    pub fn bilinear(&self, u: &[f64], v: &[f64]) -> f64 {
        let mut acc: f64 = self.diag.iter().zip(u).zip(v).map(|((d, a), b)| d * a * b).sum();
        for (i, &e) in self.offdiag.iter().enumerate() {
            acc += e * (u[i] * v[i + 1] + u[i + 1] * v[i]);
        }
        acc
    }

    /// `<ψ|T|ψ>` for a complex vector (real by hermiticity).
    pub fn quadratic_form(&self, psi: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (d, c) in self.diag.iter().zip(psi) {
            acc += c.norm_sqr() * d;
        }
        for (i, &e) in self.offdiag.iter().enumerate() {
            acc += (psi[i].conj() * psi[i + 1] + psi[i + 1].conj() * psi[i]) * e;
        }
        acc
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        TridiagonalMatrix {
            diag: self.diag.iter().map(|d| alpha * d).collect(),
            offdiag: self.offdiag.iter().map(|e| alpha * e).collect(),
        }
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.diag.iter().chain(&self.offdiag).fold(0.0, |a, &b| a.max(b.abs()))
    }

    /// Row-major dense copy, mostly for cross-checks.
    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.dim();
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            a[i * n + i] = self.diag[i];
        }
        for (i, &e) in self.offdiag.iter().enumerate() {
            a[i * n + i + 1] = e;
            a[(i + 1) * n + i] = e;
        }
        a
    }
}

/// The Hamiltonian split into reflection-even and reflection-odd blocks.
///
/// Even basis: `|0>` (integer J) and `(|m> + |-m>)/√2` for `m > 0`.
/// Odd basis: `(|m> - |-m>)/√2` for `m > 0`. Sector index 0 is the
/// smallest `|m|` present in that sector.
#[derive(Debug, Clone)]
pub struct ParityBlocks {
    dim: usize,
    integer: bool,
    pub even: TridiagonalMatrix,
    pub odd: TridiagonalMatrix,
}

impl ParityBlocks {
    /// Maps a sector vector back to the full `m` basis.
    pub fn expand(&self, parity: Parity, sector: &[f64]) -> Vec<f64> {
        let n = self.dim;
        let centre = n / 2;
        let mut full = vec![0.0; n];
        let r = core::f64::consts::FRAC_1_SQRT_2;
        let sign = match parity {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        };
        let mut iter = sector.iter();
        if self.integer && parity == Parity::Even {
            full[centre] = *iter.next().expect("even sector is never empty");
        }
        let first = if self.integer { centre + 1 } else { centre };
        for (k, &u) in iter.enumerate() {
            let up = first + k;
            let down = n - 1 - up;
            full[up] = r * u;
            full[down] = sign * r * u;
        }
        full
    }
}

/// Eigenvalue of the reflection `|m> -> |-m>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn sign(self) -> i8 {
        match self {
            Parity::Even => 1,
            Parity::Odd => -1,
        }
    }
}

/// Normalized state in the `Jz` basis.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Normalizes `amplitudes`; rejects the zero vector.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::InvalidParameter("state vector must have finite nonzero norm"));
        }
        let amplitudes = amplitudes.into_iter().map(|c| c / norm).collect();
        Ok(StateVector { amplitudes })
    }

    /// The `Jz` eigenstate `|m>`.
    pub fn basis(model: &SpinModel, m: f64) -> Result<Self> {
        let idx = m + model.j();
        if idx < -1e-9 || idx > model.two_j() as f64 + 1e-9 || (idx - idx.round()).abs() > 1e-9 {
            return Err(Error::InvalidParameter("m must lie on the ladder -J..J"));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); model.dim()];
        amplitudes[idx.round() as usize] = Complex64::new(1.0, 0.0);
        Ok(StateVector { amplitudes })
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum()
    }
}

/// `<ψ|O|ψ>` for a normalized state.
pub fn expectation(state: &StateVector, obs: &TridiagonalMatrix) -> Result<f64> {
    if state.dim() != obs.dim() {
        return Err(Error::DimensionMismatch { expected: obs.dim(), found: state.dim() });
    }
    let value = obs.quadratic_form(state.amplitudes());
    debug_assert!(
        value.im.abs() <= 1e-10 * (1.0 + obs.max_abs()),
        "imaginary part {} of a hermitian expectation",
        value.im
    );
    Ok(value.re)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn rejects_invalid_models() {
        assert!(SpinModel::new(0.0, 10.0).is_err());
        assert!(SpinModel::new(0.3, 10.0).is_err());
        assert!(SpinModel::new(5.0, 1.0).is_err());
        assert!(SpinModel::new(5.0, 0.5).is_err());
        assert!(SpinModel::new(5.0, f64::NAN).is_err());
        let m = SpinModel::new(2.5, 3.0).unwrap();
        assert_eq!(m.dim(), 6);
    }

    #[test]
    fn spin_half_hamiltonian() {
        let h = SpinModel::new(0.5, 10.0).unwrap().hamiltonian();
        assert_eq!(h.diag, vec![2.5, 2.5]);
        assert_eq!(h.offdiag, vec![-0.5]);
    }

    #[test]
    fn spin_one_hamiltonian_and_odd_eigenvector() {
        let h = SpinModel::new(1.0, 10.0).unwrap().hamiltonian();
        assert_eq!(h.diag, vec![5.0, 0.0, 5.0]);
        let r = core::f64::consts::FRAC_1_SQRT_2;
        assert!(h.offdiag.iter().all(|&e| close(e, -r, 1e-15)));
        let v = [r, 0.0, -r];
        let hv = h.apply(&v);
        for (a, b) in hv.iter().zip(&v) {
            assert!(close(*a, 5.0 * b, 1e-14));
        }
    }

    #[test]
    fn observables_follow_ladder_formula() {
        let half = SpinModel::new(0.5, 2.0).unwrap();
        assert_eq!(half.observable(Observable::Jz).diag, vec![-0.5, 0.5]);
        let one = SpinModel::new(1.0, 2.0).unwrap();
        let jx = one.observable(Observable::Jx);
        let r = core::f64::consts::FRAC_1_SQRT_2;
        assert!(jx.offdiag.iter().all(|&e| close(e, r, 1e-15)));
        let big = SpinModel::new(7.5, 2.0).unwrap();
        assert!(big.observable(Observable::Jx).diag.iter().all(|&d| d == 0.0));
        assert_eq!(big.observable(Observable::JzSquared).diag[0], 56.25);
    }

    #[test]
    fn basis_expectations() {
        let model = SpinModel::new(3.0, 4.0).unwrap();
        let jz = model.observable(Observable::Jz);
        let top = StateVector::basis(&model, 3.0).unwrap();
        assert!(close(expectation(&top, &jz).unwrap(), 3.0, 1e-15));
        let mut amps = vec![Complex64::new(0.0, 0.0); model.dim()];
        amps[0] = Complex64::new(1.0, 0.0);
        amps[6] = Complex64::new(1.0, 0.0);
        let cat = StateVector::new(amps).unwrap();
        assert!(close(expectation(&cat, &jz).unwrap(), 0.0, 1e-15));
        assert!(StateVector::basis(&model, 3.5).is_err());
    }

    #[test]
    fn expectation_checks_dimension() {
        let a = SpinModel::new(3.0, 4.0).unwrap();
        let b = SpinModel::new(2.0, 4.0).unwrap();
        let psi = StateVector::basis(&a, 0.0).unwrap();
        assert_eq!(
            expectation(&psi, &b.observable(Observable::Jz)),
            Err(Error::DimensionMismatch { expected: 5, found: 7 })
        );
    }

    #[test]
    fn parity_blocks_reassemble_hamiltonian() {
        for &j in &[1.0, 1.5, 4.0, 4.5] {
            let model = SpinModel::new(j, 3.0).unwrap();
            let blocks = model.parity_blocks();
            assert_eq!(blocks.even.dim() + blocks.odd.dim(), model.dim());
            let h = model.hamiltonian();
            // Every sector basis vector e_k maps to the full vector; check
            // <e_k|H|e_l> reproduces the block.
            for (parity, block) in [(Parity::Even, &blocks.even), (Parity::Odd, &blocks.odd)] {
                let n = block.dim();
                let dense = block.to_dense();
                for k in 0..n {
                    let mut ek = vec![0.0; n];
                    ek[k] = 1.0;
                    let fk = blocks.expand(parity, &ek);
                    for l in 0..n {
                        let mut el = vec![0.0; n];
                        el[l] = 1.0;
                        let fl = blocks.expand(parity, &el);
                        assert!(close(h.bilinear(&fk, &fl), dense[k * n + l], 1e-12));
                    }
                }
            }
        }
    }
}
