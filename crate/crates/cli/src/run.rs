use rayon::prelude::*;
use spinlab_core::classical::{
    ewf_observable, integrate_orbit, omega_inv, separatrix_curve, wkb_energies, wrap_phase, z_on_contour, Branch,
    BranchSum, ClassicalState,
};
use spinlab_core::ensembles::{
    diagonal_average, diagonal_ensemble, microcanonical_average, BranchFilter, Dynamics, Spectrum, Window,
};
use spinlab_core::model::{Observable, SpinModel};
use spinlab_core::semiclassics::{fit_memory_factor, linear_fit, memory_abscissa, predict_lto};
use spinlab_core::states::{coherent_state_for_energy, energy_width};

use crate::args::{
    Command, DynamicsArgs, EnsembleArgs, ObservableArg, PortraitArgs, ScalingArgs, SemiclassicsArgs, Side,
    SpectrumArgs, MAX_SAMPLES,
};
use crate::error::CliError;
use crate::output::{Cell, Table};

type Rows = Vec<Vec<Cell>>;

/// RK4 steps per classical orbit before decimation to the requested samples.
const ORBIT_STEPS: usize = 4000;

pub fn run(command: &Command) -> Result<Table, CliError> {
    match command {
        Command::Spectrum(a) => spectrum(a),
        Command::Portrait(a) => portrait(a),
        Command::Ensemble(a) => ensemble(a),
        Command::Dynamics(a) => dynamics(a),
        Command::Scaling(a) => scaling(a),
        Command::Semiclassics(a) => semiclassics(a),
    }
}

fn branch_of(side: Side) -> Branch {
    match side {
        Side::Plus => Branch::Plus,
        Side::Minus => Branch::Minus,
    }
}

fn observable_of(o: ObservableArg) -> Observable {
    match o {
        ObservableArg::Jx => Observable::Jx,
        ObservableArg::Jz => Observable::Jz,
        ObservableArg::Jz2 => Observable::JzSquared,
        ObservableArg::Energy => Observable::Energy,
    }
}

/// Spectra for each `J`, in input order.
fn spectra(js: &[f64], lambda: f64) -> Result<Vec<Spectrum>, CliError> {
    js.par_iter()
        .map(|&j| Ok(Spectrum::new(&SpinModel::new(j, lambda)?)?))
        .collect()
}

/// Evaluates `cell` on every `(J index, φ')` pair in parallel; results come
/// back in grid order.
fn grid<T: Send>(
    specs: &[Spectrum],
    phis: &[f64],
    cell: impl Fn(&Spectrum, f64) -> Result<T, CliError> + Sync,
) -> Result<Vec<T>, CliError> {
    let cells: Vec<(usize, f64)> = (0..specs.len()).flat_map(|a| phis.iter().map(move |&p| (a, p))).collect();
    cells.par_iter().map(|&(a, p)| cell(&specs[a], p)).collect()
}

fn spectrum(a: &SpectrumArgs) -> Result<Table, CliError> {
    let mut table = Table::new(vec![
        ("J", "spin"),
        ("n", "index"),
        ("E_abs", "energy"),
        ("E", "energy/J"),
        ("parity", "sign"),
        ("branch", "label"),
        ("jx", "Jx/J"),
        ("jz", "Jz/J"),
    ]);
    for spec in spectra(&a.j, a.lambda)? {
        let j = spec.model().j();
        let jx = spec.expectations(Observable::Jx);
        let jz = spec.expectations(Observable::Jz);
        for n in 0..spec.dim() {
            table.push(vec![
                j.into(),
                n.into(),
                spec.exact_energy(n).into(),
                spec.energies()[n].into(),
                i64::from(spec.parity(n).sign()).into(),
                spec.branch(n).label().into(),
                jx[n].into(),
                jz[n].into(),
            ]);
        }
    }
    Ok(table)
}

fn portrait(a: &PortraitArgs) -> Result<Table, CliError> {
    let mut table = Table::new(vec![
        ("kind", "label"),
        ("E", "energy/J"),
        ("branch", "label"),
        ("t", "1/J"),
        ("z", "Jz/J"),
        ("phi", "rad"),
    ]);
    let mut orbits: Vec<(f64, Branch)> = Vec::new();
    for &e in &a.energies {
        if e < 1.0 {
            orbits.push((e, Branch::Zero));
        } else {
            orbits.push((e, Branch::Plus));
            orbits.push((e, Branch::Minus));
        }
    }
    let traced: Vec<Rows> = orbits
        .par_iter()
        .map(|&(e, branch)| {
            let side = if branch == Branch::Minus { Branch::Minus } else { Branch::Plus };
            let z = z_on_contour(e, 0.0, a.lambda, side)?;
            let period = omega_inv(e, a.lambda, BranchSum::PerBranch)?;
            let intervals = a.samples - 1;
            let substeps = ORBIT_STEPS.div_ceil(intervals);
            let steps = intervals * substeps;
            let orbit = integrate_orbit(ClassicalState::new(z, 0.0)?, a.lambda, period / steps as f64, steps)?;
            Ok(orbit
                .samples
                .iter()
                .step_by(substeps)
                .enumerate()
                .map(|(k, s)| {
                    vec![
                        "orbit".into(),
                        e.into(),
                        branch.label().into(),
                        (k as f64 * substeps as f64 * orbit.dt).into(),
                        s.z.into(),
                        wrap_phase(s.phi).into(),
                    ]
                })
                .collect())
        })
        .collect::<Result<_, CliError>>()?;
    table.rows.extend(traced.into_iter().flatten());
    for (sign, label) in [(1.0, "+"), (-1.0, "-")] {
        for (phi, z) in separatrix_curve(a.lambda, a.separatrix_points) {
            table.push(vec!["separatrix".into(), 1.0.into(), label.into(), f64::NAN.into(), (sign * z).into(), phi.into()]);
        }
    }
    Ok(table)
}

fn ensemble(a: &EnsembleArgs) -> Result<Table, CliError> {
    let mut table = Table::new(vec![
        ("J", "spin"),
        ("phi", "rad"),
        ("z", "Jz/J"),
        ("E_mean", "energy/J"),
        ("E_width", "energy/J"),
        ("jx_diag", "Jx/J"),
        ("jz_diag", "Jz/J"),
        ("jx_micro", "Jx/J"),
        ("jz_micro", "Jz/J"),
    ]);
    let specs = spectra(&a.j, a.lambda)?;
    let branch = branch_of(a.branch);
    let filter = if a.energy > 1.0 { BranchFilter::Only(branch) } else { BranchFilter::All };
    let window = Window::Nearest(a.window);
    let rows = grid(&specs, &a.phi, |spec, phi| {
        let model = spec.model();
        let cs = coherent_state_for_energy(model, a.energy, phi, branch)?;
        let ens = diagonal_ensemble(&cs.state, spec)?;
        let mut row: Vec<Cell> = vec![
            model.j().into(),
            phi.into(),
            cs.z.into(),
            ens.mean_energy().into(),
            energy_width(model, &cs.state)?.into(),
        ];
        for which in [Observable::Jx, Observable::Jz] {
            row.push(diagonal_average(&ens, spec, which)?.into());
        }
        for which in [Observable::Jx, Observable::Jz] {
            let values = spec.expectations(which);
            row.push(microcanonical_average(spec, &values, a.energy, window, filter)?.into());
        }
        Ok(row)
    })?;
    table.rows = rows;
    Ok(table)
}

fn dynamics(a: &DynamicsArgs) -> Result<Table, CliError> {
    let which = observable_of(a.observable);
    let unit = match which {
        Observable::JzSquared => "Jz^2/J",
        Observable::Energy => "energy/J",
        Observable::Jz => "Jz/J",
        Observable::Jx => "Jx/J",
    };
    let mut table = Table::new(vec![("J", "spin"), ("phi", "rad"), ("t", "1/J"), ("value", unit)]);
    let specs = spectra(&a.j, a.lambda)?;
    let branch = branch_of(a.branch);
    let series = grid(&specs, &a.phi, |spec, phi| {
        let cs = coherent_state_for_energy(spec.model(), a.energy, phi, branch)?;
        let dyn_ = Dynamics::new(spec, &cs.state, which)?;
        let dt = a.dt.unwrap_or_else(|| dyn_.suggested_dt());
        let span = a.t_end - a.t_start;
        if span / dt > MAX_SAMPLES {
            return Err(CliError::Config(format!(
                "the default step {dt:e} gives more than {MAX_SAMPLES} samples; pass --dt"
            )));
        }
        let count = (span / dt * (1.0 + 1e-12)).floor() as usize + 1;
        let ts = dyn_.sample_uniform(a.t_start, dt, count)?;
        let j = spec.model().j();
        Ok(ts
            .times()
            .iter()
            .zip(ts.values())
            .map(|(&t, &v)| vec![j.into(), phi.into(), t.into(), v.into()])
            .collect::<Rows>())
    })?;
    table.rows = series.into_iter().flatten().collect();
    Ok(table)
}

fn scaling(a: &ScalingArgs) -> Result<Table, CliError> {
    let mut table = Table::new(vec![
        ("J", "spin"),
        ("phi", "rad"),
        ("x", "1/sqrt(J ln J)"),
        ("jx_exact", "Jx/J"),
        ("jx_predicted", "Jx/J"),
        ("jx_closed_form", "Jx/J"),
        ("F_fit", "1"),
        ("r2", "1"),
        ("intercept", "Jx/J"),
    ]);
    let specs = spectra(&a.j, a.lambda)?;
    let exact = grid(&specs, &a.phi, |spec, phi| {
        let cs = coherent_state_for_energy(spec.model(), a.energy, phi, Branch::Plus)?;
        let ens = diagonal_ensemble(&cs.state, spec)?;
        let closed = predict_lto(spec.model(), phi)?;
        Ok((diagonal_average(&ens, spec, Observable::Jx)?, closed.jx))
    })?;
    let xs: Vec<f64> = a.j.iter().map(|&j| memory_abscissa(j)).collect();
    let per_phi = a.phi.len();
    for (p, &phi) in a.phi.iter().enumerate() {
        let ys: Vec<f64> = (0..a.j.len()).map(|k| exact[k * per_phi + p].0).collect();
        let f = fit_memory_factor(a.lambda, &a.j, &ys)?;
        let fit = linear_fit(&xs, &ys)?;
        let prefactor = (3.0 + a.lambda) / (3.0 * (a.lambda - 1.0));
        for (k, &j) in a.j.iter().enumerate() {
            let predicted = -1.0 + prefactor / (f * j * j.ln()).sqrt();
            table.push(vec![
                j.into(),
                phi.into(),
                xs[k].into(),
                ys[k].into(),
                predicted.into(),
                exact[k * per_phi + p].1.into(),
                f.into(),
                fit.r2.into(),
                fit.intercept.into(),
            ]);
        }
    }
    Ok(table)
}

fn semiclassics(a: &SemiclassicsArgs) -> Result<Table, CliError> {
    let mut table = Table::new(vec![
        ("kind", "label"),
        ("index", "count"),
        ("E", "energy/J"),
        ("branch", "label"),
        ("quantity", "label"),
        ("value", "see quantity"),
    ]);
    let lambda = a.lambda;
    for &e in &a.energies {
        let per = omega_inv(e, lambda, BranchSum::PerBranch)?;
        let sum = omega_inv(e, lambda, BranchSum::Summed)?;
        let row = |q: &str, v: f64, b: Branch| vec!["orbit".into(), Cell::Int(-1), e.into(), b.label().into(), q.into(), v.into()];
        table.push(row("omega_inv_branch", per, Branch::Zero));
        table.push(row("omega_inv_summed", sum, Branch::Zero));
        let branches: &[Branch] = if e < 1.0 { &[Branch::Zero] } else { &[Branch::Plus, Branch::Minus] };
        for &b in branches {
            for which in [Observable::Jx, Observable::Jz] {
                let q = if which == Observable::Jx { "ewf_jx" } else { "ewf_jz" };
                table.push(row(q, ewf_observable(e, b, lambda, which)?, b));
            }
        }
    }
    if let Some(j) = a.j {
        let model = SpinModel::new(j, lambda)?;
        let spec = Spectrum::new(&model)?;
        for level in wkb_energies(&model)? {
            // Josephson levels count from the bottom, lobe levels from the top in pairs.
            let index = match level.branch {
                Branch::Zero => Some(level.quantum_number),
                Branch::Plus => spec.dim().checked_sub(1 + 2 * level.quantum_number),
                Branch::Minus => spec.dim().checked_sub(2 + 2 * level.quantum_number),
            };
            let exact = index.and_then(|k| spec.exact_energies().get(k)).map(|e| e / j);
            let b = level.branch.label();
            let n = level.quantum_number;
            let row = |q: &str, v: f64| vec!["wkb".into(), n.into(), level.energy.into(), b.into(), q.into(), v.into()];
            table.push(row("exact_energy", exact.unwrap_or(f64::NAN)));
            table.push(row("near_separatrix", f64::from(u8::from(level.near_separatrix))));
        }
    }
    Ok(table)
}
