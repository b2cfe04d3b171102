//! The six subcommands. Each turns a [`RunConfig`] into a [`Report`]; writing
//! files is left to the caller.

use std::f64::consts::PI;

use ddesim_core::models::{dicke_basis, population_period};
use ddesim_core::operator::{kron, sigma_x, sigma_y};
use ddesim_core::{
    adiabatic_eliminate, analytic_populations, build_effective_model, build_full_model,
    concurrence, concurrence_with, default_tau_max, dicke_transform, extract_timescale, g2_trace,
    g2_zero, run_sweep_with, truncation_check, Axis, ComplexMatrix, DensityMatrix,
    DickePopulations, FullModelParams, GridSpec, ObservableSet, Propagation, RkTolerances,
};

use crate::config::{AxisSettings, ConfigError, RunConfig};
use crate::executor::Parallel;
use crate::output::{number, optional, Table};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Populations,
    Steady,
    ConcurrenceMap,
    G2,
    TimescaleMap,
    Validate,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Populations => "populations",
            Command::Steady => "steady",
            Command::ConcurrenceMap => "concurrence-map",
            Command::G2 => "g2",
            Command::TimescaleMap => "timescale-map",
            Command::Validate => "validate",
        }
    }
}

pub const POPULATIONS_HEADER: [&str; 10] = [
    "t_native",
    "t_seconds",
    "rho_e",
    "rho_s",
    "rho_a",
    "rho_g",
    "analytic_e",
    "analytic_s",
    "analytic_a",
    "analytic_g",
];
pub const STEADY_HEADER: [&str; 5] = ["quantity", "row", "col", "re", "im"];
pub const G2_HEADER: [&str; 4] = ["tau_native", "tau_seconds", "raw", "normalized"];
pub const MAP_HEADER: [&str; 8] = [
    "axis1",
    "axis2",
    "concurrence",
    "g2_zero",
    "period_native",
    "period_seconds",
    "period_legend",
    "error",
];
pub const VALIDATE_HEADER: [&str; 4] = ["check", "status", "value", "limit"];

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("numerical failure: {0}")]
    Numerical(#[from] ddesim_core::Error),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl RunError {
    pub fn exit_code(&self) -> u8 {
        match self {
            RunError::Config(_) | RunError::Io(_) => 1,
            // bad axes or parameters are user input, not numerics
            RunError::Numerical(ddesim_core::Error::InvalidParameter { .. }) => 1,
            RunError::Numerical(_) => 2,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub table: Table,
    pub notes: Vec<String>,
    pub cell_seconds: Option<Vec<f64>>,
    /// Failed checks; only `validate` sets this.
    pub failed_checks: usize,
}

pub fn run(command: Command, config: &RunConfig, exec: &Parallel) -> Result<Report, RunError> {
    let mut report = match command {
        Command::Populations => populations(config)?,
        Command::Steady => steady(config)?,
        Command::ConcurrenceMap => map(config, exec, false)?,
        Command::G2 => g2(config)?,
        Command::TimescaleMap => map(config, exec, true)?,
        Command::Validate => validate(config),
    };
    if config.params.weak_coupling_advisory() {
        report
            .notes
            .push("couplings exceed the weak-coupling range of the effective model".into());
    }
    Ok(report)
}

fn seconds(native: f64, p: &FullModelParams) -> f64 {
    native / p.gamma_a_abs
}

fn populations(config: &RunConfig) -> Result<Report, RunError> {
    let p = &config.params;
    let (delta, eta) = (p.analytic_delta(), p.analytic_eta());
    let t_max = match config.t_max {
        Some(t) => t,
        // two Rabi cycles
        None => 4.0 * population_period(delta, eta),
    };
    if !(t_max.is_finite() && t_max > 0.0) {
        return Err(
            ConfigError::Invalid("t_max: no drive to set a default, give t_max".into()).into(),
        );
    }
    let n = config.n_times;
    let times: Vec<f64> = (0..n).map(|k| t_max * k as f64 / (n - 1) as f64).collect();

    let model = build_full_model(p)?;
    let l = model.liouvillian()?;
    let run = l.evolve(&model.ground_state(), &times)?;

    let mut table = Table::new(&POPULATIONS_HEADER);
    table.comment(format!(
        "analytic delta = {}, eta = {}",
        number(delta),
        number(eta)
    ));
    for (t, state) in times.iter().zip(&run.states) {
        let numeric = DickePopulations::of_state(state)?;
        let exact = analytic_populations(delta, eta, *t)?;
        let mut row = vec![*t, seconds(*t, p)];
        row.extend(numeric.as_array());
        row.extend(exact.as_array());
        table.push_numbers(&row);
    }
    Ok(Report {
        table,
        notes: vec![
            format!("propagation: {:?}", run.method),
            format!("max trace drift: {:e}", run.max_trace_drift),
        ],
        ..Report::default()
    })
}

fn steady(config: &RunConfig) -> Result<Report, RunError> {
    let model = build_full_model(&config.params)?;
    let l = model.liouvillian()?;
    let rho = l.steady_state()?;
    let qubits = rho.partial_trace(&[0, 1])?;

    let mut table = Table::new(&STEADY_HEADER);
    let mut entry = |q: &str, r: usize, c: usize, re: f64, im: f64| {
        table.push(vec![
            q.into(),
            r.to_string(),
            c.to_string(),
            number(re),
            number(im),
        ]);
    };
    for (name, m) in [("rho", rho.matrix()), ("rho_qubits", qubits.matrix())] {
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                entry(name, r, c, m[(r, c)].re, m[(r, c)].im);
            }
        }
    }
    for (k, v) in DickePopulations::of_state(&qubits)?
        .as_array()
        .into_iter()
        .enumerate()
    {
        entry("dicke_population", k, k, v, 0.0);
    }
    let c = concurrence_with(&qubits, config.concurrence_variant)?;
    entry("concurrence", 0, 0, c.value, 0.0);
    entry("g2_zero", 0, 0, g2_zero(&l, &rho)?, 0.0);
    let a = model.boson();
    entry(
        "boson_number",
        0,
        0,
        rho.expectation(&(&a.adjoint() * a))?.re,
        0.0,
    );
    table.comment("dicke_population rows: 0 = E, 1 = S, 2 = A, 3 = G");
    Ok(Report {
        table,
        ..Report::default()
    })
}

fn g2(config: &RunConfig) -> Result<Report, RunError> {
    let p = &config.params;
    let l = build_full_model(p)?.liouvillian()?;
    let rho = l.steady_state()?;
    let tau_max = match config.tau_max {
        Some(t) => t,
        None => default_tau_max(p)?,
    };
    let trace = g2_trace(&l, &rho, tau_max, config.n_samples)?;

    let mut table = Table::new(&G2_HEADER);
    table.comment(format!("asymptote = {}", number(trace.asymptote)));
    if !trace.skipped_emitters.is_empty() {
        table.comment(format!(
            "dark emitters skipped: {:?}",
            trace.skipped_emitters
        ));
    }
    for ((tau, raw), norm) in trace.taus.iter().zip(&trace.raw).zip(&trace.normalized) {
        table.push_numbers(&[*tau, seconds(*tau, p), *raw, *norm]);
    }
    let mut notes = vec![format!("propagation: {:?}", trace.propagation)];
    match extract_timescale(&trace, p.gamma_a_abs) {
        Ok(ts) => notes.push(format!(
            "timescale: {} (1/gamma_a), {} s",
            number(ts.period_native),
            number(ts.period_seconds)
        )),
        Err(e) => notes.push(format!("timescale: {e}")),
    }
    Ok(Report {
        table,
        notes,
        ..Report::default()
    })
}

fn resolve_axis(
    s: &AxisSettings,
    name: &str,
    min: f64,
    max: f64,
    points: usize,
) -> Result<Axis, RunError> {
    Ok(Axis::new(
        s.name.as_deref().unwrap_or(name),
        s.min.unwrap_or(min),
        s.max.unwrap_or(max),
        s.points.unwrap_or(points),
    )?)
}

fn map(config: &RunConfig, exec: &Parallel, timescale: bool) -> Result<Report, RunError> {
    let (axis1, axis2) = if timescale {
        (
            resolve_axis(&config.axis1, "eta0", 0.01, 0.05, 41)?,
            resolve_axis(&config.axis2, "eta1", 0.01, 0.05, 41)?,
        )
    } else {
        (
            resolve_axis(&config.axis1, "delta0", -0.05, 0.05, 41)?,
            resolve_axis(&config.axis2, "delta1", -0.05, 0.05, 41)?,
        )
    };
    let spec = GridSpec {
        observables: ObservableSet {
            concurrence: true,
            g2_zero: true,
            timescale,
        },
        n_samples: config.n_samples,
        tau_max: config.tau_max,
        concurrence_variant: config.concurrence_variant,
        ..GridSpec::new(axis1, Some(axis2), config.params.clone())
    };
    let result = run_sweep_with(&spec, exec)?;

    let mut table = Table::new(&MAP_HEADER);
    table.comment(format!(
        "axis1 = {}, axis2 = {}",
        spec.axis1.name,
        spec.axis2.as_ref().unwrap().name
    ));
    table.comment(format!(
        "period_legend unit: {}",
        if config.pi_units {
            "1/(pi gamma_a)"
        } else {
            "1/gamma_a"
        }
    ));
    let legend = |v: Option<f64>| v.map(|t| if config.pi_units { t * PI } else { t });
    for r in &result.rows {
        table.push(vec![
            number(r.axis1),
            optional(r.axis2),
            optional(r.concurrence),
            optional(r.g2_zero),
            optional(r.period_native),
            optional(r.period_seconds),
            optional(legend(r.period_native)),
            r.error.unwrap_or("").to_owned(),
        ]);
    }
    let mut notes = Vec::new();
    if result.failed_cells() > 0 {
        notes.push(format!(
            "{} of {} cells flagged",
            result.failed_cells(),
            result.rows.len()
        ));
    }
    Ok(Report {
        table,
        notes,
        cell_seconds: Some(result.metadata.cell_seconds),
        failed_checks: 0,
    })
}

struct Check {
    name: &'static str,
    value: f64,
    limit: f64,
    passed: bool,
    detail: Option<String>,
}

/// `value <= limit`, or the error that prevented computing it.
fn at_most(name: &'static str, limit: f64, value: ddesim_core::Result<f64>) -> Check {
    match value {
        Ok(v) => Check {
            name,
            value: v,
            limit,
            passed: v <= limit,
            detail: None,
        },
        Err(e) => Check {
            name,
            value: f64::NAN,
            limit,
            passed: false,
            detail: Some(e.to_string()),
        },
    }
}

/// Same model with both qubits given the mean couplings and opposite
/// detunings, where the populations have a closed form.
fn symmetrized(p: &FullModelParams) -> FullModelParams {
    let half = (p.delta0 - p.delta1) / 2.0;
    let g = (p.g0 + p.g1) / 2.0;
    FullModelParams {
        delta0: half,
        delta1: -half,
        delta_a: 0.0,
        g0: g,
        g1: g,
        eta0: p.analytic_eta(),
        eta1: p.analytic_eta(),
        ..p.clone()
    }
}

fn validate(config: &RunConfig) -> Report {
    let p = &config.params;
    let mut checks = Vec::new();

    let model = build_full_model(p);
    let l = model
        .as_ref()
        .map_err(Clone::clone)
        .and_then(|m| m.liouvillian());
    let rho = l
        .as_ref()
        .map_err(Clone::clone)
        .and_then(|l| l.steady_state());

    checks.push(at_most(
        "hamiltonian_hermitian",
        1e-12,
        model
            .as_ref()
            .map(|m| m.hamiltonian.hermitian_deviation())
            .map_err(Clone::clone),
    ));
    checks.push(at_most(
        "trace_preservation",
        1e-12,
        l.as_ref().map_err(Clone::clone).map(|l| {
            let s = l.superop();
            let n = l.layout().total_dim();
            (0..n * n)
                .map(|col| {
                    (0..n)
                        .map(|k| s[(k * n + k, col)])
                        .sum::<ddesim_core::c64>()
                        .norm()
                })
                .fold(0.0, f64::max)
        }),
    ));
    checks.push(at_most(
        "spectrum_contractive",
        1e-10,
        l.as_ref().map_err(Clone::clone).and_then(|l| {
            let ev = l.eigenvalues().ok_or(ddesim_core::Error::EigenFailure)?;
            Ok(ev.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max))
        }),
    ));
    let both = || -> ddesim_core::Result<(&ddesim_core::Liouvillian, &DensityMatrix)> {
        Ok((
            l.as_ref().map_err(Clone::clone)?,
            rho.as_ref().map_err(Clone::clone)?,
        ))
    };
    checks.push(at_most(
        "steady_residual",
        1e-10,
        both().and_then(|(l, r)| Ok(l.apply(r)?.max_abs())),
    ));
    checks.push(at_most(
        "steady_trace",
        1e-10,
        both().map(|(_, r)| (r.trace().re - 1.0).abs()),
    ));
    checks.push(at_most(
        "steady_positivity",
        1e-9,
        both().and_then(|(_, r)| Ok(-r.min_eigenvalue()?)),
    ));
    checks.push(at_most(
        "steady_fixed_point",
        1e-8,
        both().and_then(|(l, r)| {
            let later = l.evolve(r, &[0.0, 100.0])?;
            Ok(later.states[1].matrix().max_abs_diff(r.matrix()))
        }),
    ));

    let qubits = both().and_then(|(_, r)| r.partial_trace(&[0, 1]));
    checks.push(at_most(
        "concurrence_in_range",
        0.0,
        qubits.clone().and_then(|q| {
            let c = concurrence(&q)?.value;
            Ok((-c).max(c - 1.0))
        }),
    ));
    checks.push(at_most(
        "concurrence_local_invariance",
        1e-9,
        qubits.and_then(|q| {
            let u = kron(&sigma_x(), &sigma_y());
            let m = &(&u * q.matrix()) * &u.adjoint();
            let rotated = DensityMatrix::new(q.layout().clone(), m)?;
            Ok((concurrence(&q)?.value - concurrence(&rotated)?.value).abs())
        }),
    ));
    checks.push(at_most(
        "emitter_exchange_symmetry",
        1e-8,
        both().and_then(|(l, r)| {
            let swapped = build_full_model(&p.swapped_qubits())?.liouvillian()?;
            let rs = swapped.steady_state()?;
            Ok((g2_zero(l, r)? - g2_zero(&swapped, &rs)?).abs())
        }),
    ));
    checks.push(at_most(
        "correlation_tail",
        0.05,
        both().and_then(|(l, r)| {
            let tau_max = match config.tau_max {
                Some(t) => t,
                None => default_tau_max(p)?,
            };
            let trace = g2_trace(l, r, tau_max, config.n_samples)?;
            if trace.min_normalized() < -1e-9 {
                return Ok(f64::INFINITY);
            }
            Ok(trace.tail_deviation())
        }),
    ));
    checks.push(at_most(
        "truncation_shift",
        1e-4,
        truncation_check(p, p.n_max),
    ));

    let e = adiabatic_eliminate(p);
    checks.push(at_most(
        "dicke_round_trip",
        1e-12,
        dicke_transform(&e).and_then(|d| {
            let b = dicke_basis();
            let back: ComplexMatrix = &(&b * &d.hamiltonian) * &b.adjoint();
            let rates = (d.gamma_s + d.gamma_a - e.gamma00 - e.gamma11).abs();
            Ok(back
                .max_abs_diff(&build_effective_model(&e)?.hamiltonian)
                .max(rates))
        }),
    ));
    let (delta, eta) = (p.analytic_delta(), p.analytic_eta());
    checks.push(at_most(
        "analytic_normalization",
        1e-12,
        (0..50)
            .map(|k| {
                let t = k as f64 * population_period(delta, eta) / 17.0;
                Ok((analytic_populations(delta, eta, t)?.sum() - 1.0).abs())
            })
            .try_fold(0.0, |acc: f64, v: ddesim_core::Result<f64>| Ok(acc.max(v?))),
    ));
    checks.push(at_most("coherent_closed_form", 1e-6, coherent_deviation(p)));

    let mut table = Table::new(&VALIDATE_HEADER);
    let mut notes = Vec::new();
    let mut failed = 0;
    for c in &checks {
        if !c.passed {
            failed += 1;
        }
        if let Some(d) = &c.detail {
            notes.push(format!("{}: {d}", c.name));
        }
        table.push(vec![
            c.name.into(),
            if c.passed { "pass" } else { "fail" }.into(),
            number(c.value),
            number(c.limit),
        ]);
    }
    if let Ok(d) = dicke_transform(&e) {
        for diag in d.diagnostics {
            notes.push(format!(
                "dicke form {}: textbook {} vs derived {}",
                diag.element,
                number(diag.printed),
                number(diag.derived)
            ));
        }
    }
    Report {
        table,
        notes,
        cell_seconds: None,
        failed_checks: failed,
    }
}

/// Largest population error of the coherent effective model against the
/// closed form over two Rabi cycles.
fn coherent_deviation(p: &FullModelParams) -> ddesim_core::Result<f64> {
    let s = symmetrized(p);
    let (delta, eta) = (s.analytic_delta(), s.analytic_eta());
    let model = build_effective_model(&adiabatic_eliminate(&s).coherent_only())?;
    let l = model.liouvillian()?;
    let period = population_period(delta, eta);
    let times: Vec<f64> = (0..41).map(|k| k as f64 * period / 10.0).collect();
    let ground = DensityMatrix::basis(model.layout.clone(), 0)?;
    let out = l.evolve_integrator(&ground, &times, RkTolerances::default())?;
    debug_assert!(matches!(out.method, Propagation::Integrator { .. }));
    times
        .iter()
        .zip(&out.states)
        .try_fold(0.0, |acc: f64, (t, state)| {
            let numeric = DickePopulations::of_state(state)?;
            Ok(acc.max(numeric.max_abs_diff(&analytic_populations(delta, eta, *t)?)))
        })
}
