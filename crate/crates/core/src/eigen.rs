//! Full eigendecomposition of real symmetric tridiagonal matrices.
//!
//! Implicit QL with Wilkinson shifts and plane-rotation accumulation of the
//! eigenvectors. Eigenvectors are stored column-major so every rotation
//! touches two contiguous columns.

use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::model::TridiagonalMatrix;
use crate::{Error, Result};

/// Sweep limit per eigenvalue. QL converges cubically, so hitting this
/// means the input is pathological.
pub const MAX_SWEEPS: usize = 50;

/// Ascending eigenvalues and orthonormal eigenvectors (column `k` belongs to
/// eigenvalue `k`).
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    values: Vec<f64>,
    vectors: Vec<f64>,
}

impl EigenDecomposition {
    /// Assembles a decomposition from ascending `values` and column-major
    /// `vectors`. Used by callers that combine several blocks.
    pub fn from_parts(values: Vec<f64>, vectors: Vec<f64>) -> Result<Self> {
        let n = values.len();
        if vectors.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, found: vectors.len() });
        }
        if values.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidParameter("eigenvalues must be non-decreasing"));
        }
        Ok(EigenDecomposition { values, vectors })
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn vector(&self, k: usize) -> &[f64] {
        let n = self.dim();
        &self.vectors[k * n..(k + 1) * n]
    }

    /// Column-major storage of all eigenvectors.
    pub fn vectors(&self) -> &[f64] {
        &self.vectors
    }

    /// `max_k ||T v_k - λ_k v_k||_∞`.
    pub fn max_residual(&self, t: &TridiagonalMatrix) -> f64 {
        let mut worst: f64 = 0.0;
        for (k, &lambda) in self.values.iter().enumerate() {
            let v = self.vector(k);
            let tv = t.apply(v);
            for (a, b) in tv.iter().zip(v) {
                worst = worst.max((a - lambda * b).abs());
            }
        }
        worst
    }

    /// `max |VᵀV - I|`.
    pub fn orthogonality_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for a in 0..n {
            for b in a..n {
                let dot: f64 = self.vector(a).iter().zip(self.vector(b)).map(|(x, y)| x * y).sum();
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }
}

/// Eigenvalues and eigenvectors of `t`.
pub fn eigh_tridiagonal(t: &TridiagonalMatrix) -> Result<EigenDecomposition> {
    check_input(t)?;
    let n = t.dim();
    let mut d = t.diag.clone();
    let mut e = t.offdiag.clone();
    e.push(0.0);
    let mut z = vec![0.0; n * n];
    for k in 0..n {
        z[k * n + k] = 1.0;
    }
    ql_implicit(&mut d, &mut e, Some(&mut z), t)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let values = order.iter().map(|&k| d[k]).collect();
    let mut vectors = Vec::with_capacity(n * n);
    for &k in &order {
        vectors.extend_from_slice(&z[k * n..(k + 1) * n]);
    }
    Ok(EigenDecomposition { values, vectors })
}

/// Ascending eigenvalues only; `O(N²)`.
pub fn eigvalsh_tridiagonal(t: &TridiagonalMatrix) -> Result<Vec<f64>> {
    check_input(t)?;
    let mut d = t.diag.clone();
    let mut e = t.offdiag.clone();
    e.push(0.0);
    ql_implicit(&mut d, &mut e, None, t)?;
    d.sort_by(f64::total_cmp);
    Ok(d)
}

fn check_input(t: &TridiagonalMatrix) -> Result<()> {
    if t.diag.is_empty() {
        return Err(Error::InvalidParameter("tridiagonal matrix must have N >= 1"));
    }
    if t.offdiag.len() + 1 != t.diag.len() {
        return Err(Error::DimensionMismatch { expected: t.diag.len() - 1, found: t.offdiag.len() });
    }
    if t.diag.iter().chain(&t.offdiag).any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(())
}

/// FNV-1a over the bit patterns of the matrix entries.
pub fn fingerprint(t: &TridiagonalMatrix) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for x in t.diag.iter().chain(&t.offdiag) {
        for byte in x.to_bits().to_le_bytes() {
            h ^= byte as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }
    h
}

/// In-place implicit QL. `e[i]` couples `i` and `i + 1`; `e[n-1]` is scratch.
/// `z`, when present, is column-major and receives the eigenvectors.
fn ql_implicit(
    d: &mut [f64],
    e: &mut [f64],
    mut z: Option<&mut [f64]>,
    source: &TridiagonalMatrix,
) -> Result<()> {
    let n = d.len();
    let eps = f64::EPSILON;
    let norm = source.max_abs();
    let floor = eps * eps * norm;

    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= (eps * dd).max(floor) {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > MAX_SWEEPS {
                return Err(Error::NoConvergence { index: l, fingerprint: fingerprint(source) });
            }

            // Wilkinson shift from the leading 2x2 block.
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;

            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(z) = z.as_deref_mut() {
                    rotate_columns(z, n, i, c, s);
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

#[inline]
fn rotate_columns(z: &mut [f64], n: usize, i: usize, c: f64, s: f64) {
    let (left, right) = z.split_at_mut((i + 1) * n);
    let zi = &mut left[i * n..];
    let zj = &mut right[..n];
    for (a, b) in zi.iter_mut().zip(zj.iter_mut()) {
        let f = *b;
        *b = s * *a + c * f;
        *a = c * *a - s * f;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_by_one() {
        let t = TridiagonalMatrix::new(vec![3.0], vec![]).unwrap();
        let eig = eigh_tridiagonal(&t).unwrap();
        assert_eq!(eig.values(), &[3.0]);
        assert_eq!(eig.vector(0), &[1.0]);
    }

    #[test]
    fn two_by_two_closed_form() {
        let t = TridiagonalMatrix::new(vec![2.5, 2.5], vec![-0.5]).unwrap();
        let eig = eigh_tridiagonal(&t).unwrap();
        assert!((eig.values()[0] - 2.0).abs() < 1e-15);
        assert!((eig.values()[1] - 3.0).abs() < 1e-15);
        let r = core::f64::consts::FRAC_1_SQRT_2;
        let v0 = eig.vector(0);
        let v1 = eig.vector(1);
        assert!((v0[0] * v0[1].signum() - r).abs() < 1e-15 && (v0[0] - v0[1]).abs() < 1e-15);
        assert!((v1[0] + v1[1]).abs() < 1e-15 && (v1[0].abs() - r).abs() < 1e-15);
    }

    #[test]
    fn rejects_non_finite_input() {
        let t = TridiagonalMatrix::new(vec![1.0, f64::NAN], vec![0.5]).unwrap();
        assert_eq!(eigh_tridiagonal(&t), Err(Error::NonFinite));
        let t = TridiagonalMatrix::new(vec![1.0, 2.0], vec![f64::INFINITY]).unwrap();
        assert_eq!(eigvalsh_tridiagonal(&t), Err(Error::NonFinite));
    }

    #[test]
    fn already_diagonal_matrix_is_sorted() {
        let t = TridiagonalMatrix::new(vec![3.0, -1.0, 2.0], vec![0.0, 0.0]).unwrap();
        let eig = eigh_tridiagonal(&t).unwrap();
        assert_eq!(eig.values(), &[-1.0, 2.0, 3.0]);
        assert_eq!(eig.vector(0), &[0.0, 1.0, 0.0]);
    }

    #[test]
    fn values_only_path_agrees() {
        let t = TridiagonalMatrix::new(
            (0..40).map(|i| ((i * 7) % 11) as f64 - 5.0).collect(),
            (0..39).map(|i| 1.0 + ((i * 3) % 5) as f64 * 0.25).collect(),
        )
        .unwrap();
        let full = eigh_tridiagonal(&t).unwrap();
        let vals = eigvalsh_tridiagonal(&t).unwrap();
        for (a, b) in full.values().iter().zip(&vals) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn fingerprint_tracks_content() {
        let a = TridiagonalMatrix::new(vec![1.0, 2.0], vec![0.5]).unwrap();
        let b = TridiagonalMatrix::new(vec![1.0, 2.0], vec![0.25]).unwrap();
        assert_eq!(fingerprint(&a), fingerprint(&a.clone()));
        assert_ne!(fingerprint(&a), fingerprint(&b));
    }

    /// Number of eigenvalues below `x` from the Sturm sequence.
    fn sturm_count(t: &TridiagonalMatrix, x: f64) -> usize {
        let mut count = 0;
        let mut q = 1.0;
        for i in 0..t.dim() {
            let off = if i == 0 { 0.0 } else { t.offdiag[i - 1] * t.offdiag[i - 1] };
            q = t.diag[i] - x - if i == 0 { 0.0 } else { off / q };
            if q == 0.0 {
                q = -f64::EPSILON;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn bisection_eigenvalue(t: &TridiagonalMatrix, k: usize) -> f64 {
        let bound = 2.0 * t.max_abs() + 1.0;
        let (mut lo, mut hi) = (-bound, bound);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid == lo || mid == hi {
                break;
            }
            if sturm_count(t, mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    fn lcg(seed: &mut u64) -> f64 {
        *seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (*seed >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    }

    #[test]
    fn agrees_with_sturm_bisection() {
        let mut seed = 7;
        for n in [3usize, 17, 64, 129] {
            let t = TridiagonalMatrix::new(
                (0..n).map(|_| 10.0 * lcg(&mut seed)).collect(),
                (0..n - 1).map(|_| 4.0 * lcg(&mut seed)).collect(),
            )
            .unwrap();
            let eig = eigh_tridiagonal(&t).unwrap();
            for (k, &v) in eig.values().iter().enumerate() {
                assert!((v - bisection_eigenvalue(&t, k)).abs() < 1e-11, "n={n} k={k}");
            }
            assert!(eig.max_residual(&t) < 1e-11 * t.max_abs());
            assert!(eig.orthogonality_defect() < 1e-12 * n as f64);
        }
    }

    #[test]
    fn clustered_spectrum() {
        // Wilkinson W21+: eigenvalue pairs agree to many digits.
        let t = TridiagonalMatrix::new((0..21).map(|i| (10i32 - i).abs() as f64).collect(), vec![1.0; 20]).unwrap();
        let eig = eigh_tridiagonal(&t).unwrap();
        assert!((eig.values()[20] - 10.746_194_182_903_39).abs() < 1e-12);
        assert!((eig.values()[20] - eig.values()[19]).abs() < 1e-12);
        assert!(eig.max_residual(&t) < 1e-12 * 10.0);
        assert!(eig.orthogonality_defect() < 1e-13);
    }

    #[test]
    fn scaling_commutes_with_decomposition() {
        let t = TridiagonalMatrix::new(vec![1.0, -2.0, 0.5, 3.0], vec![0.3, -1.1, 2.0]).unwrap();
        let base = eigvalsh_tridiagonal(&t).unwrap();
        let scaled = eigvalsh_tridiagonal(&t.scaled(-3.5)).unwrap();
        for (a, b) in base.iter().rev().zip(&scaled) {
            assert!((-3.5 * a - b).abs() < 1e-13);
        }
    }
}
