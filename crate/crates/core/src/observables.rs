//! Entanglement and photon-statistics diagnostics.

use alloc::{vec, vec::Vec};

use faer::c64;
// shadowed by inherent f64 methods whenever std is linked
#[allow(unused_imports)]
use num_traits::Float;

use crate::fft::fft_in_place;
use crate::liouvillian::{Liouvillian, Propagation};
use crate::models::{adiabatic_eliminate, dicke_transform, FullModelParams};
use crate::operator::{embed, hermitize, kron, sigma_minus, sigma_y, ComplexMatrix, DensityMatrix};
use crate::{Error, Result};

/// Input tolerance for the two-qubit state handed to [`concurrence`].
pub const CONCURRENCE_INPUT_TOLERANCE: f64 = 1e-8;
/// Relative cutoff below which eigenvalues of ρ are treated as zero.
const EIGEN_FLOOR: f64 = 1e-14;
/// Post-jump weights below this mark the emitter as dark.
pub const DARK_WEIGHT: f64 = 1e-14;
/// Minimum and default lengths of the τ grid.
pub const MIN_SAMPLES: usize = 256;
pub const DEFAULT_SAMPLES: usize = 4096;
/// Spectral peak must exceed the median magnitude by this factor.
pub const OSCILLATION_RATIO: f64 = 3.0;

/// How the Wootters spectral values are formed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ConcurrenceVariant {
    /// `λ = √eig(ρρ̃)`, the standard definition.
    #[default]
    Standard,
    /// `λ = eig(ρρ̃)` without the square root; comparison only.
    Literal,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConcurrenceResult {
    pub value: f64,
    /// Descending, nonnegative.
    pub lambdas: [f64; 4],
}

pub fn concurrence(rho: &DensityMatrix) -> Result<ConcurrenceResult> {
    concurrence_with(rho, ConcurrenceVariant::Standard)
}

pub fn concurrence_with(rho: &DensityMatrix, variant: ConcurrenceVariant) -> Result<ConcurrenceResult> {
    if rho.layout().dims() != [2, 2] {
        return Err(Error::InvalidLayout("concurrence needs a [2, 2] state".into()));
    }
    let m = rho.matrix();
    let dev = m.hermitian_deviation();
    if dev > CONCURRENCE_INPUT_TOLERANCE {
        return Err(Error::NotHermitian { deviation: dev });
    }
    let tr = m.trace();
    if (tr - c64::new(1.0, 0.0)).norm() > CONCURRENCE_INPUT_TOLERANCE {
        return Err(Error::TraceNotOne { trace: tr.re });
    }

    // With ρ = W W†, the λ's are the singular values of τ = Wᵀ (σʸ⊗σʸ) W.
    // This avoids square roots of round-off sized eigenvalues of ρρ̃.
    let (w, v) = hermitize(m)?.hermitian_eigen()?;
    let floor = EIGEN_FLOOR * w.iter().fold(0.0f64, |a, &b| a.max(b));
    let roots: Vec<f64> = w.iter().map(|&x| if x > floor { x.sqrt() } else { 0.0 }).collect();
    let factor = &v * &ComplexMatrix::diagonal(&roots);
    let yy = kron(&sigma_y(), &sigma_y());
    let tau = &(&factor.transpose() * &yy) * &factor;
    let mut eig = tau.singular_values()?;
    if variant == ConcurrenceVariant::Literal {
        for x in eig.iter_mut() {
            *x *= *x;
        }
    }
    let lambdas = [eig[0], eig[1], eig[2], eig[3]];
    let value = (lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).clamp(0.0, 1.0);
    Ok(ConcurrenceResult { value, lambdas })
}

/// `σᵢ⁻ ρ σᵢ⁺` normalized, together with its weight `Tr[σᵢ⁻ρσᵢ⁺] = ⟨nᵢ⟩`.
pub fn post_jump_state(rho: &DensityMatrix, emitter: usize) -> Result<(DensityMatrix, f64)> {
    let s = emitter_lowering(rho, emitter)?;
    let jumped = &(&s * rho.matrix()) * &s.adjoint();
    let weight = jumped.trace().re;
    if !(weight >= DARK_WEIGHT) {
        return Err(Error::EmitterDark { emitter });
    }
    let state = DensityMatrix::unchecked(rho.layout().clone(), hermitize(&jumped)?.scale_real(1.0 / weight))?;
    Ok((state, weight))
}

fn emitter_lowering(rho: &DensityMatrix, emitter: usize) -> Result<ComplexMatrix> {
    let dims = rho.layout().dims();
    if emitter > 1 || dims.len() < 2 {
        return Err(Error::InvalidSubsystem {
            index: emitter,
            count: dims.len().min(2),
        });
    }
    if dims[emitter] != 2 {
        return Err(Error::InvalidLayout("emitters must be qubits".into()));
    }
    embed(&sigma_minus(), emitter, rho.layout())
}

/// `n₀ + n₁` on the state's layout.
fn total_emitter_number(rho: &DensityMatrix) -> Result<ComplexMatrix> {
    let s0 = emitter_lowering(rho, 0)?;
    let s1 = emitter_lowering(rho, 1)?;
    Ok(&(&s0.adjoint() * &s0) + &(&s1.adjoint() * &s1))
}

/// Second-order correlation sampled on a uniform τ grid.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationTrace {
    pub taus: Vec<f64>,
    /// `Σᵢⱼ Tr[nⱼ ρᵢ(τ)]` over the emitters that can emit.
    pub raw: Vec<f64>,
    pub normalized: Vec<f64>,
    pub asymptote: f64,
    pub g2_zero: f64,
    /// Emitters with no excitation in the steady state.
    pub skipped_emitters: Vec<usize>,
    pub propagation: Option<Propagation>,
}

impl CorrelationTrace {
    /// Wraps an already normalized signal, e.g. a synthetic one.
    pub fn from_samples(taus: Vec<f64>, normalized: Vec<f64>) -> Result<Self> {
        if taus.len() != normalized.len() {
            return Err(Error::InvalidSamples("taus and values differ in length".into()));
        }
        if taus.len() < 2 {
            return Err(Error::InvalidSamples("need at least two samples".into()));
        }
        let g2_zero = normalized[0];
        Ok(Self {
            taus,
            raw: normalized.clone(),
            normalized,
            asymptote: 1.0,
            g2_zero,
            skipped_emitters: Vec::new(),
            propagation: None,
        })
    }

    pub fn spacing(&self) -> f64 {
        self.taus[1] - self.taus[0]
    }

    /// Largest `|normalized − 1|` over the last 5% of the grid.
    pub fn tail_deviation(&self) -> f64 {
        let n = self.normalized.len();
        let start = n - (n / 20).max(1);
        self.normalized[start..]
            .iter()
            .map(|v| (v - 1.0).abs())
            .fold(0.0, f64::max)
    }

    pub fn min_normalized(&self) -> f64 {
        self.normalized.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Default τ range: ten effective Rabi periods, but at least 50 lifetimes of
/// the symmetric Dicke state.
pub fn default_tau_max(p: &FullModelParams) -> Result<f64> {
    let dicke = dicke_transform(&adiabatic_eliminate(p))?;
    let omega = p.rabi_frequency();
    let rabi = if omega > 0.0 {
        10.0 * 2.0 * core::f64::consts::PI / omega
    } else {
        0.0
    };
    let decay = if dicke.gamma_s > 0.0 { 50.0 / dicke.gamma_s } else { 0.0 };
    let tau_max = rabi.max(decay);
    if !(tau_max > 0.0 && tau_max.is_finite()) {
        return Err(Error::param("tau_max", "no drive and no decay to set a time scale"));
    }
    Ok(tau_max)
}

/// Uniform grid `τₖ = k·tau_max/(n−1)`.
pub fn tau_grid(tau_max: f64, n_samples: usize) -> Result<Vec<f64>> {
    if n_samples < MIN_SAMPLES || !n_samples.is_power_of_two() {
        return Err(Error::InvalidSamples(alloc::format!(
            "n_samples must be a power of two >= {MIN_SAMPLES}, got {n_samples}"
        )));
    }
    if !(tau_max > 0.0 && tau_max.is_finite()) {
        return Err(Error::param("tau_max", "must be positive and finite"));
    }
    let step = tau_max / (n_samples - 1) as f64;
    let mut taus: Vec<f64> = (0..n_samples).map(|k| k as f64 * step).collect();
    taus[n_samples - 1] = tau_max;
    Ok(taus)
}

struct Emission {
    states: Vec<DensityMatrix>,
    skipped: Vec<usize>,
    number: ComplexMatrix,
    asymptote: f64,
}

fn emission(rho_ss: &DensityMatrix) -> Result<Emission> {
    let number = total_emitter_number(rho_ss)?;
    let mut states = Vec::with_capacity(2);
    let mut skipped = Vec::new();
    for emitter in 0..2 {
        match post_jump_state(rho_ss, emitter) {
            Ok((state, _)) => states.push(state),
            Err(Error::EmitterDark { .. }) => skipped.push(emitter),
            Err(e) => return Err(e),
        }
    }
    if states.is_empty() {
        return Err(Error::AllEmittersDark);
    }
    let asymptote = states.len() as f64 * rho_ss.expectation(&number)?.re;
    Ok(Emission {
        states,
        skipped,
        number,
        asymptote,
    })
}

/// Correlation trace after a photon from either emitter.
pub fn g2_trace(
    l: &Liouvillian,
    rho_ss: &DensityMatrix,
    tau_max: f64,
    n_samples: usize,
) -> Result<CorrelationTrace> {
    let taus = tau_grid(tau_max, n_samples)?;
    let em = emission(rho_ss)?;
    let mut raw = vec![0.0; taus.len()];
    let mut propagation = Propagation::Spectral;
    for state in &em.states {
        let (values, method) = l.expectation_series(state, &em.number, &taus)?;
        if method != Propagation::Spectral {
            propagation = method;
        }
        for (acc, v) in raw.iter_mut().zip(&values) {
            *acc += v.re;
        }
    }
    raw[0] = zero_delay_raw(&em)?;
    let normalized: Vec<f64> = raw.iter().map(|r| r / em.asymptote).collect();
    Ok(CorrelationTrace {
        g2_zero: normalized[0],
        taus,
        raw,
        normalized,
        asymptote: em.asymptote,
        skipped_emitters: em.skipped,
        propagation: Some(propagation),
    })
}

fn zero_delay_raw(em: &Emission) -> Result<f64> {
    em.states
        .iter()
        .map(|s| s.expectation(&em.number).map(|v| v.re))
        .sum()
}

/// Normalized correlation at zero delay.
pub fn g2_zero(l: &Liouvillian, rho_ss: &DensityMatrix) -> Result<f64> {
    if rho_ss.dim() != l.layout().total_dim() {
        return Err(Error::DimensionMismatch {
            context: "state",
            expected: l.layout().total_dim(),
            found: rho_ss.dim(),
        });
    }
    let em = emission(rho_ss)?;
    Ok(zero_delay_raw(&em)? / em.asymptote)
}

#[derive(Clone, Debug, PartialEq)]
pub struct TimescaleResult {
    /// In units of γ_a.
    pub peak_frequency: f64,
    /// In units of 1/γ_a.
    pub period_native: f64,
    pub period_seconds: f64,
    /// Peak magnitude over the median magnitude.
    pub peak_ratio: f64,
    /// `(frequency, magnitude)` for bins `1..=n/2`.
    pub spectrum: Vec<(f64, f64)>,
}

impl TimescaleResult {
    /// Period in the units used for map legends: `1/γ_a`, or `1/(πγ_a)`
    /// when `pi_units` is set.
    pub fn period_legend(&self, pi_units: bool) -> f64 {
        if pi_units {
            self.period_native * core::f64::consts::PI
        } else {
            self.period_native
        }
    }
}

/// Dominant oscillation frequency of `normalized − 1`.
pub fn extract_timescale(trace: &CorrelationTrace, gamma_a_abs: f64) -> Result<TimescaleResult> {
    let n = trace.normalized.len();
    if n < 8 || !n.is_power_of_two() || trace.taus.len() != n {
        return Err(Error::InvalidSamples(alloc::format!(
            "FFT needs a power-of-two length >= 8, got {n}"
        )));
    }
    if !(gamma_a_abs > 0.0 && gamma_a_abs.is_finite()) {
        return Err(Error::param("gamma_a_abs", "must be positive and finite"));
    }
    let dt = trace.spacing();
    if !(dt > 0.0) {
        return Err(Error::InvalidSamples("τ grid must be increasing".into()));
    }

    let span = (n - 1) as f64;
    let mut data: Vec<c64> = trace
        .normalized
        .iter()
        .enumerate()
        .map(|(k, v)| {
            let w = 0.5 * (1.0 - (2.0 * core::f64::consts::PI * k as f64 / span).cos());
            c64::new((v - 1.0) * w, 0.0)
        })
        .collect();
    fft_in_place(&mut data);

    let df = 1.0 / (n as f64 * dt);
    let half = n / 2;
    let mags: Vec<f64> = data[..=half].iter().map(|z| z.norm()).collect();
    let (peak_bin, peak) = mags
        .iter()
        .enumerate()
        .skip(1)
        .fold((1, f64::NEG_INFINITY), |best, (k, &m)| if m > best.1 { (k, m) } else { best });

    let mut sorted: Vec<f64> = mags[1..].to_vec();
    sorted.sort_by(f64::total_cmp);
    let mid = sorted.len() / 2;
    let median = if sorted.len() % 2 == 0 {
        0.5 * (sorted[mid - 1] + sorted[mid])
    } else {
        sorted[mid]
    };
    let ratio = if median > 0.0 { peak / median } else { f64::INFINITY };
    if !(ratio >= OSCILLATION_RATIO) || !(peak > 0.0) {
        return Err(Error::NoOscillation {
            ratio,
            threshold: OSCILLATION_RATIO,
        });
    }

    let mut offset = 0.0;
    if peak_bin > 1 && peak_bin < half {
        let (a, b, c) = (mags[peak_bin - 1], mags[peak_bin], mags[peak_bin + 1]);
        let denom = a - 2.0 * b + c;
        if denom != 0.0 {
            offset = (0.5 * (a - c) / denom).clamp(-0.5, 0.5);
        }
    }
    let peak_frequency = (peak_bin as f64 + offset) * df;
    let period_native = 1.0 / peak_frequency;
    Ok(TimescaleResult {
        peak_frequency,
        period_native,
        period_seconds: period_native / gamma_a_abs,
        peak_ratio: ratio,
        spectrum: mags
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &m)| (k as f64 * df, m))
            .collect(),
    })
}
