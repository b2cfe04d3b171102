//! Acceptance criteria, one line per criterion.
//!
//! Runs as a plain binary (`harness = false`) so every criterion is executed
//! and reported even when an earlier one fails; the exit status is nonzero if
//! any criterion fails or exceeds its runtime budget.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use ddesim_core::models::{dicke_basis, population_period, DICKE_A};
use ddesim_core::observables::{default_tau_max, DEFAULT_SAMPLES};
use ddesim_core::operator::{kron, sigma_y};
use ddesim_core::sweep::ObservableSet;
use ddesim_core::{
    adiabatic_eliminate, analytic_populations, build_effective_model, build_full_model, c64,
    concurrence, correlation_stats, extract_timescale, g2_trace, run_sweep, truncation_check,
    Axis, ComplexMatrix, DensityMatrix, DickePopulations, FullModelParams, GridSpec,
    RkTolerances, SpaceLayout, SweepResult,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<(bool, String), ddesim_core::Error>;

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Duration,
    run: fn() -> Check,
}

/// Anti-symmetric detunings ±0.02, drives and couplings 0.02, tiny rates.
fn coherent_regime() -> FullModelParams {
    FullModelParams {
        delta0: 0.02,
        delta1: -0.02,
        g0: 0.02,
        g1: 0.02,
        eta0: 0.02,
        eta1: 0.02,
        gamma_r0: 5e-9,
        gamma_r1: 5e-9,
        gamma_d0: 1e-8,
        gamma_d1: 1e-8,
        ..FullModelParams::default()
    }
}

fn map_grid(observables: ObservableSet, swapped: bool) -> GridSpec {
    let (a, b) = if swapped { ("delta1", "delta0") } else { ("delta0", "delta1") };
    GridSpec {
        observables,
        ..GridSpec::new(
            Axis::new(a, -0.05, 0.05, 9).unwrap(),
            Some(Axis::new(b, -0.05, 0.05, 9).unwrap()),
            if swapped {
                FullModelParams::default().swapped_qubits()
            } else {
                FullModelParams::default()
            },
        )
    }
}

fn ground(layout: SpaceLayout) -> DensityMatrix {
    DensityMatrix::basis(layout, 0).unwrap()
}

fn linspace(end: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| end * k as f64 / (n - 1) as f64).collect()
}

fn analytic_oracle() -> Check {
    let p = coherent_regime();
    let (delta, eta) = (p.analytic_delta(), p.analytic_eta());
    let model = build_effective_model(&adiabatic_eliminate(&p).coherent_only())?;
    let l = model.liouvillian()?;
    // two full Rabi cycles of the single-qubit amplitudes
    let times = linspace(4.0 * population_period(delta, eta), 200);
    let evolved = l.evolve(&ground(model.layout.clone()), &times)?;
    let mut worst = 0.0f64;
    for (t, state) in times.iter().zip(&evolved.states) {
        let numeric = DickePopulations::of_state(state)?;
        worst = worst.max(numeric.max_abs_diff(&analytic_populations(delta, eta, *t)?));
    }
    Ok((worst < 1e-6, format!("max |numeric - closed form| = {worst:.3e} (< 1e-6)")))
}

fn full_model_tracking() -> Check {
    let p = coherent_regime();
    let (delta, eta) = (p.analytic_delta(), p.analytic_eta());
    let model = build_full_model(&p)?;
    let l = model.liouvillian()?;
    let times = linspace(population_period(delta, eta), 200);
    let evolved = l.evolve(&model.ground_state(), &times)?;
    let mut worst = 0.0f64;
    for (t, state) in times.iter().zip(&evolved.states) {
        let numeric = DickePopulations::of_state(state)?;
        worst = worst.max(numeric.max_abs_diff(&analytic_populations(delta, eta, *t)?));
    }
    let late = l.evolve(&model.ground_state(), &[1e4])?;
    let rho_a = DickePopulations::of_state(&late.states[0])?.a;
    Ok((
        worst < 0.05 && rho_a > 0.8,
        format!("max deviation over first period = {worst:.4} (< 0.05), rho_A(1e4) = {rho_a:.4} (> 0.8)"),
    ))
}

fn near_unity_concurrence() -> Check {
    let l = build_full_model(&FullModelParams::default())?.liouvillian()?;
    let rho = l.steady_state()?;
    let c = concurrence(&rho.partial_trace(&[0, 1])?)?.value;
    Ok((c >= 0.9, format!("C = {c:.4} (>= 0.9)")))
}

fn concurrence_map(swapped: bool) -> Result<SweepResult, ddesim_core::Error> {
    let only_c = ObservableSet {
        concurrence: true,
        g2_zero: false,
        timescale: false,
    };
    run_sweep(&map_grid(only_c, swapped))
}

fn anti_diagonal() -> Check {
    let map = concurrence_map(false)?;
    let swapped = concurrence_map(true)?;
    if map.failed_cells() + swapped.failed_cells() > 0 {
        return Ok((false, format!("{} failed cells", map.failed_cells() + swapped.failed_cells())));
    }
    let (rows, cols) = map.shape();
    let step = 0.1 / 8.0;
    let mut off_band = 0;
    for i in 0..rows {
        let row = &map.rows[i * cols..(i + 1) * cols];
        let best = row
            .iter()
            .max_by(|a, b| a.concurrence.unwrap().total_cmp(&b.concurrence.unwrap()))
            .unwrap();
        if (best.axis1 + best.axis2.unwrap()).abs() > step * (1.0 + 1e-9) {
            off_band += 1;
        }
    }
    let mut asym = 0.0f64;
    for i in 0..rows {
        for j in 0..cols {
            let a = map.rows[i * cols + j].concurrence.unwrap();
            let b = swapped.rows[j * cols + i].concurrence.unwrap();
            asym = asym.max((a - b).abs());
        }
    }
    Ok((
        off_band == 0 && asym <= 1e-8,
        format!("rows off the anti-diagonal band = {off_band}, exchange asymmetry = {asym:.2e} (<= 1e-8)"),
    ))
}

fn overlap() -> Check {
    let result = run_sweep(&map_grid(ObservableSet::default(), false))?;
    let r = correlation_stats(&result)?;
    let worst = result
        .rows
        .iter()
        .filter(|row| row.concurrence.is_some_and(|c| c > 0.9))
        .filter_map(|row| row.g2_zero)
        .fold(f64::NEG_INFINITY, f64::max);
    let high = result
        .rows
        .iter()
        .filter(|row| row.concurrence.is_some_and(|c| c > 0.9))
        .count();
    Ok((
        r <= -0.5 && worst < 0.2,
        format!(
            "pearson = {r:.4} (<= -0.5), max g2(0) over {high} cells with C > 0.9 = {worst:.2e} (< 0.2), failed cells = {}",
            result.failed_cells()
        ),
    ))
}

fn dip_emergence() -> Check {
    let base = FullModelParams {
        delta0: 0.02,
        delta1: -0.02,
        ..FullModelParams::default()
    };
    let axis = Axis::new("eta0", 0.04, 0.06, 9)?;
    let mut zeros = Vec::new();
    let mut worst_tail = 0.0f64;
    for eta0 in axis.values() {
        let p = FullModelParams { eta0, ..base.clone() };
        let l = build_full_model(&p)?.liouvillian()?;
        let rho = l.steady_state()?;
        let trace = g2_trace(&l, &rho, default_tau_max(&p)?, DEFAULT_SAMPLES)?;
        worst_tail = worst_tail.max(trace.tail_deviation());
        zeros.push(trace.g2_zero);
    }
    let (lo, mid, hi) = (zeros[0], zeros[4], zeros[8]);
    let factor = lo.min(hi) / mid;
    Ok((
        factor >= 2.0 && worst_tail <= 0.05,
        format!(
            "g2(0) at eta0 = 0.04/0.05/0.06: {lo:.3e}/{mid:.3e}/{hi:.3e}, dip factor = {factor:.1} (>= 2), worst tail = {worst_tail:.2e} (<= 0.05)"
        ),
    ))
}

fn timescale_anchor() -> Check {
    let p = FullModelParams {
        eta0: 0.03,
        eta1: 0.03,
        ..FullModelParams::default()
    };
    let l = build_full_model(&p)?.liouvillian()?;
    let rho = l.steady_state()?;
    let trace = g2_trace(&l, &rho, default_tau_max(&p)?, DEFAULT_SAMPLES)?;
    let ts = extract_timescale(&trace, p.gamma_a_abs)?;
    let ps = ts.period_seconds * 1e12;
    Ok((
        (3.0..=30.0).contains(&ps),
        format!(
            "period = {:.2} / gamma_a = {ps:.2} ps (in [3, 30] ps)",
            ts.period_native
        ),
    ))
}

fn random_weak_coupling(rng: &mut ChaCha8Rng) -> FullModelParams {
    FullModelParams {
        delta0: rng.random_range(-0.05..0.05),
        delta1: rng.random_range(-0.05..0.05),
        delta_a: rng.random_range(-0.5..0.5),
        g0: rng.random_range(0.01..0.1),
        g1: rng.random_range(0.01..0.1),
        eta0: rng.random_range(0.01..0.1),
        eta1: rng.random_range(0.01..0.1),
        eta_a: rng.random_range(0.0..0.05),
        ..FullModelParams::default()
    }
}

fn hygiene() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let (mut worst_residual, mut worst_min_eig) = (0.0f64, f64::INFINITY);
    let (mut worst_drift, mut worst_gap) = (0.0f64, 0.0f64);
    for draw in 0..50 {
        let p = random_weak_coupling(&mut rng);
        let model = build_full_model(&p)?;
        let l = model.liouvillian()?;
        let rho = l.steady_state()?;
        worst_residual = worst_residual.max(l.apply(&rho)?.max_abs());
        worst_min_eig = worst_min_eig.min(rho.min_eigenvalue()?);
        if draw % 10 == 0 {
            let times = linspace(200.0, 21);
            let spectral = l.evolve(&model.ground_state(), &times)?;
            let integrated = l.evolve_integrator(&model.ground_state(), &times, RkTolerances::default())?;
            worst_drift = worst_drift
                .max(spectral.max_trace_drift)
                .max(integrated.max_trace_drift);
            for (a, b) in spectral.states.iter().zip(&integrated.states) {
                worst_gap = worst_gap.max(a.matrix().max_abs_diff(b.matrix()));
            }
        }
    }
    let truncation = truncation_check(&FullModelParams::default(), 2)?;
    Ok((
        worst_residual < 1e-10
            && worst_min_eig >= -1e-9
            && worst_drift <= 1e-9
            && worst_gap <= 1e-6
            && truncation < 1e-6,
        format!(
            "residual {worst_residual:.1e} (< 1e-10), min eig {worst_min_eig:.1e} (>= -1e-9), trace drift {worst_drift:.1e} (<= 1e-9), spectral vs RK {worst_gap:.1e} (<= 1e-6), n_max 2->3 shift {truncation:.1e} (< 1e-6)"
        ),
    ))
}

fn random_pure_pair(rng: &mut ChaCha8Rng) -> Vec<c64> {
    let mut psi: Vec<c64> = (0..4)
        .map(|_| c64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in &mut psi {
        *z /= norm;
    }
    psi
}

fn concurrence_oracle() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let yy = kron(&sigma_y(), &sigma_y());
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let psi = random_pure_pair(&mut rng);
        let conj: Vec<c64> = psi.iter().map(|z| z.conj()).collect();
        let flipped = yy.apply(&conj)?;
        let overlap: c64 = psi.iter().zip(&flipped).map(|(a, b)| a.conj() * b).sum();
        let rho = DensityMatrix::pure(SpaceLayout::qubit_pair(), &psi)?;
        worst = worst.max((concurrence(&rho)?.value - overlap.norm()).abs());
    }
    let b = dicke_basis();
    let a_ket: Vec<c64> = (0..4).map(|i| b[(i, DICKE_A)]).collect();
    let singlet = ComplexMatrix::outer(&a_ket);
    let mut worst_werner = 0.0f64;
    for p in [0.2, 0.5, 0.9] {
        let m = &singlet.scale_real(p) + &ComplexMatrix::identity(4).scale_real((1.0 - p) / 4.0);
        let rho = DensityMatrix::new(SpaceLayout::qubit_pair(), m)?;
        let expected = f64::max(0.0, (3.0 * p - 1.0) / 2.0);
        worst_werner = worst_werner.max((concurrence(&rho)?.value - expected).abs());
    }
    Ok((
        worst < 1e-9 && worst_werner < 1e-9,
        format!("pure-state error {worst:.1e}, Werner error {worst_werner:.1e} (< 1e-9)"),
    ))
}

fn main() -> ExitCode {
    let criteria = [
            Criterion { id: 1, name: "analytic oracle", budget: Duration::from_secs(1), run: analytic_oracle },
            Criterion { id: 2, name: "full-model population tracking", budget: Duration::from_secs(10), run: full_model_tracking },
            Criterion { id: 3, name: "near-unity concurrence", budget: Duration::from_secs(5), run: near_unity_concurrence },
            Criterion { id: 4, name: "anti-diagonal concurrence map", budget: Duration::from_secs(120), run: anti_diagonal },
            Criterion { id: 5, name: "anti-bunching / entanglement overlap", budget: Duration::from_secs(600), run: overlap },
            Criterion { id: 6, name: "zero-delay dip emergence", budget: Duration::from_secs(300), run: dip_emergence },
            Criterion { id: 7, name: "anti-bunching timescale", budget: Duration::from_secs(60), run: timescale_anchor },
            Criterion { id: 8, name: "numerical hygiene", budget: Duration::from_secs(300), run: hygiene },
            Criterion { id: 9, name: "concurrence oracle", budget: Duration::from_secs(1), run: concurrence_oracle },
    ];

    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let in_budget = elapsed <= c.budget;
        let (pass, detail) = match outcome {
            Ok((ok, detail)) => (ok && in_budget, detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failed += 1;
        }
        println!(
            "criterion {} {}: {} | {} | {:.2}s of {}s{}",
            c.id,
            if pass { "PASS" } else { "FAIL" },
            c.name,
            detail,
            elapsed.as_secs_f64(),
            c.budget.as_secs(),
            if in_budget { "" } else { " (over budget)" },
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
