//! Classical limit of the model on the `(z, φ)` phase space.
//!
//! Per-spin energy `H(z, φ) = Λ/2 z² − sqrt(1 − z²) cos φ`. Writing
//! `s = sqrt(1 − z²)`, the contour `H = E` at fixed `φ` is the quadratic
//! `Λ/2 s² + s cos φ + (E − Λ/2) = 0`, which every quadrature below uses
//! instead of solving for `z` directly.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};
#[allow(unused_imports)]
use num_traits::Float;

use crate::model::{Observable, SpinModel};
use crate::quad::{brent, integrate_pieces, QuadOptions};
use crate::{Error, Result};

/// Which self-trapped lobe an orbit or eigenstate belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    /// Josephson side (`E < 1`), symmetric under `z → −z`.
    Zero,
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Zero => 0.0,
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Branch::Zero => "0",
            Branch::Plus => "+",
            Branch::Minus => "-",
        }
    }
}

/// Wraps a phase into `(−π, π]`.
pub fn wrap_phase(phi: f64) -> f64 {
    phi - 2.0 * PI * ((phi - PI) / (2.0 * PI)).ceil()
}

/// A phase-space point with `|z| ≤ 1` and wrapped `φ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalState {
    pub z: f64,
    pub phi: f64,
}

impl ClassicalState {
    pub fn new(z: f64, phi: f64) -> Result<Self> {
        if !(z.abs() <= 1.0) || !phi.is_finite() {
            return Err(Error::InvalidParameter("classical state needs |z| <= 1 and finite phase"));
        }
        Ok(ClassicalState { z, phi: wrap_phase(phi) })
    }
}

pub fn classical_energy(z: f64, phi: f64, lambda: f64) -> Result<f64> {
    if !(z.abs() <= 1.0) {
        return Err(Error::InvalidParameter("|z| must not exceed 1"));
    }
    Ok(0.5 * lambda * z * z - ((1.0 - z) * (1.0 + z)).sqrt() * phi.cos())
}

/// `(dz/dt, dφ/dt) = (−∂H/∂φ, ∂H/∂z)`.
pub fn equations_of_motion(state: ClassicalState, lambda: f64) -> Result<(f64, f64)> {
    flow(state.z, state.phi, lambda)
}

fn flow(z: f64, phi: f64, lambda: f64) -> Result<(f64, f64)> {
    if !(z.abs() < 1.0) {
        return Err(Error::Pole);
    }
    let s = ((1.0 - z) * (1.0 + z)).sqrt();
    let (sin, cos) = phi.sin_cos();
    Ok((-s * sin, lambda * z + z * cos / s))
}

/// Roots of the contour quadratic at one phase.
#[derive(Debug, Clone, Copy)]
struct Contour {
    /// Larger root `s₊`.
    s: f64,
    /// `1 − s₊`, computed without cancellation.
    one_minus_s: f64,
    /// `sqrt(D)`; equals `s₊ (Λ + cos φ / s₊)`.
    sqrt_disc: f64,
}

impl Contour {
    fn z(&self) -> f64 {
        (self.one_minus_s * (1.0 + self.s)).max(0.0).sqrt()
    }
}

/// `e_plus_cos` is `E + cos φ`, passed separately so callers near the
/// turning point can supply it without cancellation.
fn contour(energy: f64, cos: f64, e_plus_cos: f64, lambda: f64) -> Option<Contour> {
    let disc = cos * cos + lambda * lambda - 2.0 * lambda * energy;
    if disc < 0.0 {
        return None;
    }
    let sqrt_disc = disc.sqrt();
    let s = if cos > 0.0 {
        2.0 * (0.5 * lambda - energy) / (cos + sqrt_disc)
    } else {
        (sqrt_disc - cos) / lambda
    };
    let one_minus_s = 2.0 * e_plus_cos / (lambda + cos + sqrt_disc);
    Some(Contour { s, one_minus_s, sqrt_disc })
}

/// The larger root `s₊ = sqrt(1 − z²)` of the energy equation at `φ`.
pub fn transverse_root(energy: f64, phi: f64, lambda: f64) -> Result<f64> {
    let cos = phi.cos();
    let c = contour(energy, cos, energy + cos, lambda).ok_or(Error::ComplexRoots { energy, phi })?;
    if c.s > 1.0 + 1e-12 {
        return Err(Error::Unreachable { energy, phi });
    }
    if c.s < -1e-15 {
        return Err(Error::Unreachable { energy, phi });
    }
    if c.s <= 1e-15 {
        return Err(Error::Pole);
    }
    Ok(c.s.min(1.0))
}

/// `z'` on the contour `H = E` at `φ'`, with the sign fixed by `branch`.
pub fn z_on_contour(energy: f64, phi: f64, lambda: f64, branch: Branch) -> Result<f64> {
    if !energy.is_finite() || !phi.is_finite() {
        return Err(Error::InvalidParameter("energy and phase must be finite"));
    }
    let s = transverse_root(energy, phi, lambda)?;
    let cos = phi.cos();
    let c = contour(energy, cos, energy + cos, lambda).ok_or(Error::ComplexRoots { energy, phi })?;
    let z = if s >= 1.0 { 0.0 } else { c.z() };
    match branch {
        Branch::Plus => Ok(z),
        Branch::Minus => Ok(-z),
        Branch::Zero if z < 1e-9 => Ok(0.0),
        Branch::Zero => Err(Error::InvalidParameter("branch 0 requires the contour to cross z = 0")),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrbitClass {
    Josephson,
    SelfTrapped,
    Separatrix,
}

impl OrbitClass {
    pub fn of_energy(energy: f64) -> Self {
        if (energy - 1.0).abs() <= 1e-12 {
            OrbitClass::Separatrix
        } else if energy < 1.0 {
            OrbitClass::Josephson
        } else {
            OrbitClass::SelfTrapped
        }
    }
}

#[derive(Debug, Clone)]
pub struct ClassicalOrbit {
    pub energy: f64,
    pub branch: Branch,
    pub class: OrbitClass,
    pub dt: f64,
    pub samples: Vec<ClassicalState>,
    /// First Poincaré return time, if one occurred within the step budget.
    pub period: Option<f64>,
    /// `max |H(sample) − H(start)|`.
    pub energy_drift: f64,
}

/// RK4 trajectory from `start`, sampled every step.
pub fn integrate_orbit(start: ClassicalState, lambda: f64, dt: f64, steps: usize) -> Result<ClassicalOrbit> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::InvalidParameter("time step must be positive"));
    }
    let energy = classical_energy(start.z, start.phi, lambda)?;
    let class = OrbitClass::of_energy(energy);
    let branch = match class {
        OrbitClass::SelfTrapped if start.z > 0.0 => Branch::Plus,
        OrbitClass::SelfTrapped => Branch::Minus,
        _ => Branch::Zero,
    };
    let (dz0, dphi0) = flow(start.z, start.phi, lambda)?;
    let mut orbit = ClassicalOrbit {
        energy,
        branch,
        class,
        dt,
        samples: Vec::with_capacity(steps + 1),
        period: None,
        energy_drift: 0.0,
    };
    orbit.samples.push(start);
    if dz0.abs() < 1e-14 && dphi0.abs() < 1e-14 {
        return Ok(orbit);
    }

    // Section on φ (modulo 2π) unless φ is nearly stationary at the start.
    let on_phi = dphi0.abs() >= 0.1 * dz0.abs();
    let direction = if on_phi { dphi0.signum() } else { dz0.signum() };
    let (mut z, mut phi) = (start.z, start.phi);
    let (mut dz, mut dphi) = (dz0, dphi0);
    for step in 0..steps {
        let (nz, nphi) = rk4_step(z, phi, dt, lambda)?;
        let (ndz, ndphi) = flow(nz, nphi, lambda)?;
        if orbit.period.is_none() && step > 0 {
            let (a, b, da, db, target) = if on_phi {
                let k = ((nphi - start.phi) / (2.0 * PI)).round();
                (phi, nphi, dphi, ndphi, start.phi + 2.0 * PI * k)
            } else {
                (z, nz, dz, ndz, start.z)
            };
            if (a - target) * (b - target) <= 0.0 && a != b && (b - a).signum() == direction {
                let frac = hermite_crossing(a, b, da * dt, db * dt, target);
                orbit.period = Some((step as f64 + frac) * dt);
            }
        }
        z = nz;
        phi = nphi;
        dz = ndz;
        dphi = ndphi;
        let state = ClassicalState { z, phi: wrap_phase(phi) };
        let e = classical_energy(state.z, state.phi, lambda)?;
        orbit.energy_drift = orbit.energy_drift.max((e - energy).abs());
        orbit.samples.push(state);
    }
    Ok(orbit)
}

fn rk4_step(z: f64, phi: f64, dt: f64, lambda: f64) -> Result<(f64, f64)> {
    let k1 = flow(z, phi, lambda)?;
    let k2 = flow(z + 0.5 * dt * k1.0, phi + 0.5 * dt * k1.1, lambda)?;
    let k3 = flow(z + 0.5 * dt * k2.0, phi + 0.5 * dt * k2.1, lambda)?;
    let k4 = flow(z + dt * k3.0, phi + dt * k3.1, lambda)?;
    Ok((
        z + dt / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0),
        phi + dt / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1),
    ))
}

/// Fraction `τ ∈ [0, 1]` where the cubic Hermite interpolant through
/// `(a, da)` and `(b, db)` (derivatives per unit `τ`) hits `target`.
fn hermite_crossing(a: f64, b: f64, da: f64, db: f64, target: f64) -> f64 {
    let eval = |t: f64| {
        let t2 = t * t;
        let t3 = t2 * t;
        (2.0 * t3 - 3.0 * t2 + 1.0) * a + (t3 - 2.0 * t2 + t) * da + (-2.0 * t3 + 3.0 * t2) * b + (t3 - t2) * db
            - target
    };
    let (mut lo, mut hi) = (0.0, 1.0);
    let rising = b > a;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if (eval(mid) < 0.0) == rising {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Whether quantities above the separatrix refer to one lobe or both.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchSum {
    PerBranch,
    Summed,
}

fn check_band(energy: f64, lambda: f64) -> Result<()> {
    if !(energy > -1.0 && energy < 0.5 * lambda) {
        return Err(Error::OutOfBand { energy });
    }
    Ok(())
}

fn quad_opts() -> QuadOptions {
    QuadOptions { abs_tol: 0.0, rel_tol: 1e-11, max_intervals: 4000 }
}

/// `∫ f(z, s, cos φ) |∂H/∂z|⁻¹ dφ` over the `z > 0` half of the orbit.
///
/// Josephson orbits use `φ = φ_max sin θ` to flatten the turning points;
/// self-trapped orbits integrate the full circle.
fn orbit_integral<F: FnMut(f64, f64, f64) -> f64>(energy: f64, lambda: f64, mut f: F) -> f64 {
    if energy < 1.0 {
        let phi_max = (-energy).acos();
        let g = |theta: f64| {
            let phi = phi_max * theta.sin();
            let cos = phi.cos();
            // E + cos φ = cos φ − cos φ_max, factored to keep precision.
            let gap = 2.0 * phi_max * (0.25 * PI - 0.5 * theta).sin().powi(2);
            let e_plus_cos = 2.0 * (0.5 * (phi_max + phi)).sin() * (0.5 * gap).sin();
            let Some(c) = contour(energy, cos, e_plus_cos, lambda) else { return 0.0 };
            let z = c.z();
            if z == 0.0 {
                return 0.0;
            }
            let jac = phi_max * theta.cos();
            f(z, c.s, cos) * jac * c.s / (z * c.sqrt_disc)
        };
        2.0 * integrate_pieces(g, &[0.0, FRAC_PI_2], quad_opts()).value
    } else {
        let g = |phi: f64| {
            let cos = phi.cos();
            let Some(c) = contour(energy, cos, energy + cos, lambda) else { return 0.0 };
            let z = c.z();
            f(z, c.s, cos) * c.s / (z * c.sqrt_disc)
        };
        2.0 * integrate_pieces(g, &[0.0, 0.5 * PI, PI], quad_opts()).value
    }
}

/// `ω(E)⁻¹`, the orbit period.
///
/// Below the separatrix this is the Josephson period; above it, the period
/// of one lobe (`PerBranch`) or twice that (`Summed`).
pub fn omega_inv(energy: f64, lambda: f64, mode: BranchSum) -> Result<f64> {
    check_band(energy, lambda)?;
    if energy == 1.0 {
        return Err(Error::OutOfRegime("the period diverges on the separatrix"));
    }
    let half = orbit_integral(energy, lambda, |_, _, _| 1.0);
    Ok(if energy < 1.0 || mode == BranchSum::Summed { 2.0 * half } else { half })
}

/// Orbit time-average of `which/J` on the contour `E` (eigenstate Wigner
/// function expectation). `branch` must be `Zero` below the separatrix and
/// `Plus`/`Minus` above it.
pub fn ewf_observable(energy: f64, branch: Branch, lambda: f64, which: Observable) -> Result<f64> {
    if energy == -1.0 {
        return Ok(match which {
            Observable::Jx => 1.0,
            Observable::Jz | Observable::JzSquared => 0.0,
            Observable::Energy => -1.0,
        });
    }
    check_band(energy, lambda)?;
    if which == Observable::Energy {
        return Ok(energy);
    }
    if OrbitClass::of_energy(energy) == OrbitClass::Separatrix {
        return Ok(match which {
            Observable::Jx => -1.0,
            _ => 0.0,
        });
    }
    let sign = branch.sign();
    match (energy < 1.0, branch) {
        (true, Branch::Zero) | (false, Branch::Plus | Branch::Minus) => {}
        _ => return Err(Error::InvalidParameter("branch does not match the orbit class")),
    }
    let norm = orbit_integral(energy, lambda, |_, _, _| 1.0);
    let value = match which {
        Observable::Jx => orbit_integral(energy, lambda, |_, s, cos| s * cos),
        Observable::Jz if energy < 1.0 => 0.0,
        Observable::Jz => sign * orbit_integral(energy, lambda, |z, _, _| z),
        Observable::JzSquared => orbit_integral(energy, lambda, |z, _, _| z * z),
        Observable::Energy => unreachable!(),
    };
    Ok(value / norm)
}

/// Highest classical energy, reached at `φ = π`, `sqrt(1 − z²) = 1/Λ`.
pub fn energy_max(lambda: f64) -> f64 {
    0.5 * lambda + 0.5 / lambda
}

/// Length of `{z ∈ [0, 1] : H(z, φ) > E}`.
fn superlevel_measure(energy: f64, phi: f64, lambda: f64) -> f64 {
    let cos = phi.cos();
    let Some(c) = contour(energy, cos, energy + cos, lambda) else { return 0.0 };
    let s_minus = if c.sqrt_disc + cos > 0.0 {
        // Product of roots is 2(E − Λ/2)/Λ.
        2.0 * (energy - 0.5 * lambda) / (lambda * c.s)
    } else {
        -(c.sqrt_disc + cos) / lambda
    };
    let lo = s_minus.max(0.0);
    if c.s <= lo {
        return 0.0;
    }
    let z_lo = ((1.0 - lo) * (1.0 + lo)).sqrt();
    let z_hi = if c.s >= 1.0 { 0.0 } else { c.z() };
    (z_lo - z_hi).max(0.0)
}

/// Phase-space area of `{H < E}` in the `(z, φ)` plane; the sphere has
/// total area `4π`.
pub fn sublevel_area(energy: f64, lambda: f64) -> f64 {
    if energy <= -1.0 {
        return 0.0;
    }
    let top = energy_max(lambda);
    if energy >= top {
        return 4.0 * PI;
    }
    let mut points = alloc::vec![0.0, PI];
    if energy.abs() < 1.0 {
        points.push((-energy).acos());
    }
    let d_zero = 2.0 * lambda * energy - lambda * lambda;
    if energy > 0.5 * lambda && d_zero < 1.0 {
        points.push((-d_zero.sqrt()).acos());
    }
    points.sort_by(f64::total_cmp);
    points.dedup();
    let superlevel = integrate_pieces(|phi| superlevel_measure(energy, phi, lambda), &points, quad_opts()).value;
    4.0 * PI - 4.0 * superlevel
}

/// Area enclosed by one self-trapped lobe `{H > E, z > 0}` for `E ≥ 1`.
pub fn cap_area(energy: f64, lambda: f64) -> f64 {
    0.5 * (4.0 * PI - sublevel_area(energy, lambda))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WkbLevel {
    pub energy: f64,
    pub branch: Branch,
    /// `n` for Josephson levels, `k` counted from the top of each lobe.
    pub quantum_number: usize,
    /// Quantized area within one quantum of the separatrix area.
    pub near_separatrix: bool,
}

/// Levels from the area rule: Josephson `A(E) = (n + ½) 2π/J`; each lobe
/// `A_cap(E) = (k + ½) 2π/J`, giving one level per branch.
pub fn wkb_energies(model: &SpinModel) -> Result<Vec<WkbLevel>> {
    if model.j() < 10.0 {
        return Err(Error::OutOfRegime("WKB levels need J >= 10"));
    }
    let lambda = model.lambda();
    let quantum = 2.0 * PI / model.j();
    let a_sep = sublevel_area(1.0, lambda);
    let cap_sep = 0.5 * (4.0 * PI - a_sep);
    let top = energy_max(lambda);
    let xtol = 1e-14;
    let mut levels = Vec::with_capacity(model.dim() + 2);

    let mut n = 0;
    loop {
        let target = (n as f64 + 0.5) * quantum;
        if target >= a_sep {
            break;
        }
        let energy = brent(|e| sublevel_area(e, lambda) - target, -1.0, 1.0, xtol)?;
        levels.push(WkbLevel { energy, branch: Branch::Zero, quantum_number: n, near_separatrix: a_sep - target < quantum });
        n += 1;
    }
    let mut k = 0;
    loop {
        let target = (k as f64 + 0.5) * quantum;
        if target >= cap_sep {
            break;
        }
        let energy = brent(|e| cap_area(e, lambda) - target, 1.0, top, xtol)?;
        let near_separatrix = cap_sep - target < quantum;
        for branch in [Branch::Minus, Branch::Plus] {
            levels.push(WkbLevel { energy, branch, quantum_number: k, near_separatrix });
        }
        k += 1;
    }
    levels.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    Ok(levels)
}

/// Upper half (`z ≥ 0`) of the separatrix as `(φ, z)` pairs on a uniform
/// grid over `[−π, π]`.
pub fn separatrix_curve(lambda: f64, points: usize) -> Vec<(f64, f64)> {
    let points = points.max(2);
    (0..points)
        .map(|i| {
            let phi = -PI + 2.0 * PI * i as f64 / (points - 1) as f64;
            let cos = phi.cos();
            let z = contour(1.0, cos, 1.0 + cos, lambda).map_or(0.0, |c| c.z());
            (phi, z)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const L: f64 = 10.0;

    #[test]
    fn energy_at_fixed_points() {
        assert_eq!(classical_energy(0.0, 0.0, L).unwrap(), -1.0);
        assert!((classical_energy(0.0, PI, L).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(classical_energy(1.0, 0.7, L).unwrap(), 5.0);
        assert_eq!(classical_energy(-1.0, -2.0, L).unwrap(), 5.0);
        assert!(classical_energy(1.1, 0.0, L).is_err());
    }

    #[test]
    fn flow_at_special_points() {
        let f = |z, phi| equations_of_motion(ClassicalState { z, phi }, L).unwrap();
        assert_eq!(f(0.0, 0.0), (0.0, 0.0));
        let (a, b) = f(0.0, PI);
        assert!(a.abs() < 1e-15 && b == 0.0);
        let (a, b) = f(0.0, FRAC_PI_2);
        assert_eq!((a, b), (-1.0, 0.0));
        assert_eq!(equations_of_motion(ClassicalState { z: 1.0, phi: 0.0 }, L), Err(Error::Pole));
    }

    #[test]
    fn separatrix_stall() {
        let (dz, dphi) = equations_of_motion(ClassicalState { z: 0.0, phi: PI - 1e-6 }, L).unwrap();
        assert!(dz.abs() < 1e-5 && dphi.abs() < 1e-5);
    }

    #[test]
    fn wrap_phase_range() {
        assert_eq!(wrap_phase(PI), PI);
        assert!((wrap_phase(-PI) - PI).abs() < 1e-15);
        assert!((wrap_phase(3.0 * PI + 0.5) - (-PI + 0.5)).abs() < 1e-12);
    }

    #[test]
    fn contour_roots() {
        assert!((z_on_contour(1.0, 0.0, L, Branch::Plus).unwrap() - 0.6).abs() < 1e-15);
        assert!((z_on_contour(1.0, 0.0, L, Branch::Minus).unwrap() + 0.6).abs() < 1e-15);
        assert_eq!(z_on_contour(1.0, PI, L, Branch::Zero).unwrap(), 0.0);
        assert_eq!(z_on_contour(5.0, 0.3, L, Branch::Plus), Err(Error::Pole));
        assert!(matches!(z_on_contour(-0.5, 2.5, L, Branch::Plus), Err(Error::Unreachable { .. })));
        assert!(matches!(z_on_contour(5.2, 0.0, L, Branch::Plus), Err(Error::ComplexRoots { .. })));
        // On the top of the band a root exists only where cos φ < 0.
        let z = z_on_contour(5.0, 2.0, L, Branch::Plus).unwrap();
        assert!((classical_energy(z, 2.0, L).unwrap() - 5.0).abs() < 1e-12 && z < 1.0);
    }

    #[test]
    fn contour_residuals() {
        for &e in &[-0.9, -0.2, 0.5, 0.99, 1.0, 1.5, 3.0, 4.9] {
            for k in 0..32 {
                let phi = -PI + 2.0 * PI * (k as f64 + 0.5) / 32.0;
                if let Ok(z) = z_on_contour(e, phi, L, Branch::Plus) {
                    let r = classical_energy(z, phi, L).unwrap() - e;
                    assert!(r.abs() < 1e-12, "E {e} phi {phi} residual {r}");
                }
            }
        }
    }

    #[test]
    fn josephson_orbit_closes() {
        let z0 = z_on_contour(0.5, 0.0, L, Branch::Plus).unwrap();
        let t = omega_inv(0.5, L, BranchSum::PerBranch).unwrap();
        let orbit = integrate_orbit(ClassicalState::new(z0, 0.0).unwrap(), L, t / 1e4, 12_000).unwrap();
        assert_eq!(orbit.class, OrbitClass::Josephson);
        let period = orbit.period.unwrap();
        assert!((period - t).abs() < 1e-6 * t, "{period} vs {t}");
        assert!(orbit.energy_drift < 1e-8);
    }

    #[test]
    fn self_trapped_orbit_winds_downward() {
        let z0 = z_on_contour(3.0, 0.0, L, Branch::Plus).unwrap();
        let t = omega_inv(3.0, L, BranchSum::PerBranch).unwrap();
        let orbit = integrate_orbit(ClassicalState::new(z0, 0.0).unwrap(), L, t / 1e4, 11_000).unwrap();
        assert_eq!((orbit.class, orbit.branch), (OrbitClass::SelfTrapped, Branch::Plus));
        assert!(orbit.samples.iter().all(|s| s.z > 0.0));
        assert!((orbit.period.unwrap() - t).abs() < 1e-6 * t);
        assert!(orbit.energy_drift < 1e-8);
        // With dφ/dt = ∂H/∂z the upper lobe winds toward increasing φ.
        for s in &orbit.samples {
            assert!(equations_of_motion(*s, L).unwrap().1 > 0.0);
        }
    }

    #[test]
    fn fixed_point_orbit_is_degenerate() {
        let orbit = integrate_orbit(ClassicalState::new(0.0, 0.0).unwrap(), L, 0.01, 100).unwrap();
        assert_eq!(orbit.samples.len(), 1);
        assert!(orbit.period.is_none());
    }

    #[test]
    fn period_near_ground_is_harmonic() {
        // Small oscillations about (0, 0) have frequency sqrt(Λ + 1).
        let t = omega_inv(-1.0 + 1e-8, L, BranchSum::PerBranch).unwrap();
        let expected = 2.0 * PI / (L + 1.0).sqrt();
        assert!((t - expected).abs() < 1e-6 * expected, "{t} vs {expected}");
    }

    #[test]
    fn omega_band_checks() {
        assert!(omega_inv(-1.0, L, BranchSum::Summed).is_err());
        assert!(omega_inv(5.0, L, BranchSum::Summed).is_err());
        assert!(matches!(omega_inv(1.0, L, BranchSum::Summed), Err(Error::OutOfRegime(_))));
        let per = omega_inv(2.0, L, BranchSum::PerBranch).unwrap();
        let sum = omega_inv(2.0, L, BranchSum::Summed).unwrap();
        assert!((sum - 2.0 * per).abs() < 1e-12 * sum);
    }

    #[test]
    fn area_derivative_is_period() {
        for &(e, mode) in &[(-0.5, BranchSum::Summed), (0.7, BranchSum::Summed), (2.5, BranchSum::Summed)] {
            let h = 1e-5;
            let slope = (sublevel_area(e + h, L) - sublevel_area(e - h, L)) / (2.0 * h);
            let t = omega_inv(e, L, mode).unwrap();
            assert!((slope - t).abs() < 1e-6 * t, "E {e}: {slope} vs {t}");
        }
    }

    #[test]
    fn area_limits() {
        assert_eq!(sublevel_area(-1.0, L), 0.0);
        assert_eq!(sublevel_area(energy_max(L), L), 4.0 * PI);
        let near_top = sublevel_area(energy_max(L) - 1e-9, L);
        assert!(near_top < 4.0 * PI && near_top > 4.0 * PI - 1e-3);
        let mut prev = 0.0;
        for k in 1..60 {
            let e = -1.0 + (energy_max(L) + 1.0) * k as f64 / 60.0;
            let a = sublevel_area(e, L);
            assert!(a > prev);
            prev = a;
        }
    }

    #[test]
    fn ewf_limits_and_symmetry() {
        assert_eq!(ewf_observable(-1.0, Branch::Zero, L, Observable::Jx).unwrap(), 1.0);
        let jx = ewf_observable(-1.0 + 1e-6, Branch::Zero, L, Observable::Jx).unwrap();
        assert!((jx - 1.0).abs() < 1e-5);
        assert_eq!(ewf_observable(0.3, Branch::Zero, L, Observable::Jz).unwrap(), 0.0);
        let p = ewf_observable(2.0, Branch::Plus, L, Observable::Jz).unwrap();
        let m = ewf_observable(2.0, Branch::Minus, L, Observable::Jz).unwrap();
        assert!(p > 0.0 && (p + m).abs() < 1e-14);
        assert!(ewf_observable(2.0, Branch::Zero, L, Observable::Jz).is_err());
        assert!(ewf_observable(0.5, Branch::Plus, L, Observable::Jz).is_err());
        let near = ewf_observable(1.0 - 1e-9, Branch::Zero, L, Observable::Jx).unwrap();
        assert!(near < -0.8, "{near}");
    }

    #[test]
    fn ewf_jz_large_lambda() {
        let lambda = 50.0;
        let e = 1.01;
        let jz = ewf_observable(e, Branch::Plus, lambda, Observable::Jz).unwrap();
        let approx = 2.0 * PI / (lambda * omega_inv(e, lambda, BranchSum::PerBranch).unwrap());
        assert!((jz / approx - 1.0).abs() < 0.1, "{jz} vs {approx}");
    }

    #[test]
    fn wkb_counts_levels() {
        let model = SpinModel::new(100.0, L).unwrap();
        let levels = wkb_energies(&model).unwrap();
        let n = model.dim() as i64;
        assert!((levels.len() as i64 - n).abs() <= 2, "{} vs {n}", levels.len());
        assert!(levels[0].energy > -1.0);
        assert!(levels.windows(2).all(|w| w[0].energy <= w[1].energy));
        assert!(levels.iter().any(|l| l.near_separatrix));
        assert!(wkb_energies(&SpinModel::new(5.0, L).unwrap()).is_err());
    }

    #[test]
    fn separatrix_curve_passes_through_unstable_point() {
        let curve = separatrix_curve(L, 101);
        assert_eq!(curve.len(), 101);
        assert!(curve[0].1.abs() < 1e-7 && curve[100].1.abs() < 1e-7);
        assert!((curve[50].1 - 0.6).abs() < 1e-12);
    }
}
