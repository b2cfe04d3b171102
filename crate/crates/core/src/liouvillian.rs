//! Lindblad generator, propagation and steady states.
//!
//! The generator acts on column-stacked density matrices:
//!
//! ```text
//! L = −i (I ⊗ H − Hᵀ ⊗ I) + Σ_k γ_k (L̄_k ⊗ L_k − ½ I ⊗ L_k†L_k − ½ (L_k†L_k)ᵀ ⊗ I)
//! ```
//!
//! Its eigendecomposition is computed once at construction and reused for
//! propagation (`exp(L t) = V e^{Λt} V⁻¹`) and for the steady state (the
//! kernel eigenvector). An adaptive Dormand–Prince integrator provides an
//! independent propagation path and the fallback when the eigenbasis is
//! ill-conditioned.

mod rk45;

use alloc::vec::Vec;

use faer::c64;
use faer::linalg::solvers::DenseSolveCore;

use crate::models::{build_full_model, FullModelParams};
use crate::observables::{concurrence, g2_zero};
use crate::operator::{hermitize, kron, ComplexMatrix, DensityMatrix, SpaceLayout};
use crate::{Error, Result};

pub use rk45::RkTolerances;

/// Hamiltonian Hermiticity tolerance accepted by [`build_liouvillian`].
pub const HERMITIAN_TOLERANCE: f64 = 1e-10;
/// Eigenvalues below this magnitude count as kernel directions.
pub const KERNEL_THRESHOLD: f64 = 1e-10;
/// Maximum `‖L ρ_ss‖_max` accepted for a steady state.
pub const RESIDUAL_TOLERANCE: f64 = 1e-10;
/// Largest trace drift tolerated on a spectrally propagated sample before the
/// integrator path takes over.
pub const TRACE_DRIFT_TOLERANCE: f64 = 1e-9;
/// Eigenbasis condition number above which spectral propagation is disabled.
pub const CONDITION_LIMIT: f64 = 1e12;

/// One dissipation channel `γ (L ρ L† − ½{L†L, ρ})`.
#[derive(Clone, Debug, PartialEq)]
pub struct JumpTerm {
    rate: f64,
    operator: ComplexMatrix,
}

impl JumpTerm {
    pub fn new(rate: f64, operator: ComplexMatrix) -> Result<Self> {
        if !rate.is_finite() || rate < 0.0 {
            return Err(Error::param("rate", "jump rate must be finite and nonnegative"));
        }
        operator.require_square()?;
        Ok(Self { rate, operator })
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn operator(&self) -> &ComplexMatrix {
        &self.operator
    }
}

/// How a trajectory was propagated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Propagation {
    /// Eigendecomposition of the generator.
    Spectral,
    /// Adaptive Runge–Kutta; `fallback` is set when the spectral path was
    /// unusable (ill-conditioned eigenbasis or excessive trace drift).
    Integrator { fallback: bool },
}

#[derive(Clone, Debug)]
pub struct EvolveResult {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
    pub method: Propagation,
    /// Largest `|Tr ρ − 1|` observed before renormalization.
    pub max_trace_drift: f64,
}

#[derive(Clone, Debug)]
struct SpectralCache {
    eigenvalues: Vec<c64>,
    right: ComplexMatrix,
    right_inv: ComplexMatrix,
    condition: f64,
}

/// Dense Lindblad superoperator with its eigendecomposition.
#[derive(Clone, Debug)]
pub struct Liouvillian {
    layout: SpaceLayout,
    superop: ComplexMatrix,
    spectral: Option<SpectralCache>,
}

/// Builds the superoperator of `−i[h, ρ] + Σ_k γ_k (L_k ρ L_k† − ½{L_k†L_k, ρ})`.
pub fn build_liouvillian(
    layout: &SpaceLayout,
    h: &ComplexMatrix,
    jumps: &[JumpTerm],
) -> Result<Liouvillian> {
    let n = h.require_square()?;
    if n != layout.total_dim() {
        return Err(Error::DimensionMismatch {
            context: "Hamiltonian",
            expected: layout.total_dim(),
            found: n,
        });
    }
    let deviation = h.hermitian_deviation();
    if deviation > HERMITIAN_TOLERANCE {
        return Err(Error::NotHermitian { deviation });
    }
    for jump in jumps {
        if jump.operator.rows() != n {
            return Err(Error::DimensionMismatch {
                context: "jump operator",
                expected: n,
                found: jump.operator.rows(),
            });
        }
    }

    let id = ComplexMatrix::identity(n);
    let minus_i = c64::new(0.0, -1.0);
    let mut superop = (&kron(&id, h) - &kron(&h.transpose(), &id)).scale(minus_i);
    for jump in jumps.iter().filter(|j| j.rate > 0.0) {
        let l = &jump.operator;
        let ldl = &l.adjoint() * l;
        let sandwich = kron(&l.conj(), l);
        let left = kron(&id, &ldl).scale_real(0.5);
        let right = kron(&ldl.transpose(), &id).scale_real(0.5);
        let term = &(&sandwich - &left) - &right;
        superop = &superop + &term.scale_real(jump.rate);
    }

    let spectral = spectral_decomposition(&superop);
    Ok(Liouvillian {
        layout: layout.clone(),
        superop,
        spectral,
    })
}

fn spectral_decomposition(superop: &ComplexMatrix) -> Option<SpectralCache> {
    let evd = superop.as_faer().eigen().ok()?;
    let eigenvalues: Vec<c64> = evd.S().column_vector().iter().copied().collect();
    let right = ComplexMatrix::from_faer(evd.U().to_owned());
    let right_inv = ComplexMatrix::from_faer(right.as_faer().partial_piv_lu().inverse());
    let condition = one_norm(&right) * one_norm(&right_inv);
    if eigenvalues.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return None;
    }
    Some(SpectralCache {
        eigenvalues,
        right,
        right_inv,
        condition: if condition.is_finite() { condition } else { f64::INFINITY },
    })
}

fn one_norm(m: &ComplexMatrix) -> f64 {
    (0..m.cols())
        .map(|j| (0..m.rows()).map(|i| m[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

impl Liouvillian {
    pub fn layout(&self) -> &SpaceLayout {
        &self.layout
    }

    pub fn superop(&self) -> &ComplexMatrix {
        &self.superop
    }

    /// Generator eigenvalues, if the decomposition converged.
    pub fn eigenvalues(&self) -> Option<&[c64]> {
        self.spectral.as_ref().map(|s| s.eigenvalues.as_slice())
    }

    /// `‖V‖₁‖V⁻¹‖₁` of the eigenbasis (infinite if unavailable).
    pub fn condition_number(&self) -> f64 {
        self.spectral.as_ref().map_or(f64::INFINITY, |s| s.condition)
    }

    /// True when propagation goes through the eigendecomposition.
    pub fn spectral_usable(&self) -> bool {
        self.condition_number() <= CONDITION_LIMIT
    }

    /// Slowest nonzero relaxation rate `min |Re λ|` over non-kernel modes.
    pub fn spectral_gap(&self) -> Option<f64> {
        let values = self.eigenvalues()?;
        values
            .iter()
            .filter(|z| z.norm() >= KERNEL_THRESHOLD)
            .map(|z| z.re.abs())
            .fold(None, |acc: Option<f64>, r| Some(acc.map_or(r, |a| a.min(r))))
    }

    fn check_state(&self, rho: &DensityMatrix) -> Result<()> {
        if rho.dim() != self.layout.total_dim() {
            return Err(Error::DimensionMismatch {
                context: "state",
                expected: self.layout.total_dim(),
                found: rho.dim(),
            });
        }
        Ok(())
    }

    /// `dρ/dt` for the given state.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<ComplexMatrix> {
        self.check_state(rho)?;
        let out = self.superop.apply(&rho.matrix().vectorize())?;
        ComplexMatrix::from_column_stacked(rho.dim(), &out)
    }

    /// Propagates `rho0` to each of `times` (measured from `rho0`).
    pub fn evolve(&self, rho0: &DensityMatrix, times: &[f64]) -> Result<EvolveResult> {
        self.check_state(rho0)?;
        validate_times(times)?;
        if self.spectral_usable() {
            if let Some(result) = self.evolve_spectral(rho0, times)? {
                return Ok(result);
            }
        }
        let mut result = self.evolve_integrator(rho0, times, RkTolerances::default())?;
        result.method = Propagation::Integrator { fallback: true };
        Ok(result)
    }

    /// Spectral path; `None` if some sample drifted beyond tolerance.
    fn evolve_spectral(&self, rho0: &DensityMatrix, times: &[f64]) -> Result<Option<EvolveResult>> {
        let cache = self.spectral.as_ref().ok_or(Error::EigenFailure)?;
        let coeffs = cache.right_inv.apply(&rho0.matrix().vectorize())?;
        let n = rho0.dim();
        let mut states = Vec::with_capacity(times.len());
        let mut max_drift = 0.0f64;
        let mut weighted = coeffs.clone();
        for &t in times {
            for ((w, &c), &lambda) in weighted.iter_mut().zip(&coeffs).zip(&cache.eigenvalues) {
                *w = c * (lambda * t).exp();
            }
            let vec_rho = cache.right.apply(&weighted)?;
            let raw = ComplexMatrix::from_column_stacked(n, &vec_rho)?;
            let h = hermitize(&raw)?;
            let tr = h.trace().re;
            let drift = (tr - 1.0).abs();
            if !(drift <= TRACE_DRIFT_TOLERANCE) {
                return Ok(None);
            }
            max_drift = max_drift.max(drift);
            states.push(DensityMatrix::unchecked(self.layout.clone(), h.scale_real(1.0 / tr))?);
        }
        Ok(Some(EvolveResult {
            times: times.to_vec(),
            states,
            method: Propagation::Spectral,
            max_trace_drift: max_drift,
        }))
    }

    /// Independent adaptive Runge–Kutta (Dormand–Prince 5(4)) propagation.
    pub fn evolve_integrator(
        &self,
        rho0: &DensityMatrix,
        times: &[f64],
        tolerances: RkTolerances,
    ) -> Result<EvolveResult> {
        self.check_state(rho0)?;
        validate_times(times)?;
        let n = rho0.dim();
        let samples = rk45::integrate(&self.superop, rho0.matrix().vectorize(), times, tolerances)?;
        let mut states = Vec::with_capacity(samples.len());
        let mut max_drift = 0.0f64;
        for sample in samples {
            let raw = ComplexMatrix::from_column_stacked(n, &sample)?;
            let h = hermitize(&raw)?;
            let tr = h.trace().re;
            max_drift = max_drift.max((tr - 1.0).abs());
            states.push(DensityMatrix::unchecked(self.layout.clone(), h.scale_real(1.0 / tr))?);
        }
        Ok(EvolveResult {
            times: times.to_vec(),
            states,
            method: Propagation::Integrator { fallback: false },
            max_trace_drift: max_drift,
        })
    }

    /// `Tr[O ρ(t)] / Tr[ρ(t)]` at each time, starting from `rho0`.
    ///
    /// Equivalent to calling [`Liouvillian::evolve`] and taking expectations,
    /// but on the spectral path it never materializes the states.
    pub fn expectation_series(
        &self,
        rho0: &DensityMatrix,
        observable: &ComplexMatrix,
        times: &[f64],
    ) -> Result<(Vec<c64>, Propagation)> {
        self.check_state(rho0)?;
        validate_times(times)?;
        let n = rho0.dim();
        if observable.rows() != n || observable.cols() != n {
            return Err(Error::DimensionMismatch {
                context: "observable",
                expected: n,
                found: observable.rows(),
            });
        }
        if self.spectral_usable() {
            let cache = self.spectral.as_ref().ok_or(Error::EigenFailure)?;
            let coeffs = cache.right_inv.apply(&rho0.matrix().vectorize())?;
            // Tr[O X] = Σ_p vec(Oᵀ)_p vec(X)_p
            let obs = observable.transpose().vectorize();
            let ident = ComplexMatrix::identity(n).vectorize();
            let dim = cache.eigenvalues.len();
            let mut obs_weights = Vec::with_capacity(dim);
            let mut trace_weights = Vec::with_capacity(dim);
            for m in 0..dim {
                let (mut o, mut t) = (c64::new(0.0, 0.0), c64::new(0.0, 0.0));
                for p in 0..dim {
                    let v = cache.right[(p, m)];
                    o += obs[p] * v;
                    t += ident[p] * v;
                }
                obs_weights.push(o * coeffs[m]);
                trace_weights.push(t * coeffs[m]);
            }
            let mut values = Vec::with_capacity(times.len());
            for &time in times {
                let (mut o, mut t) = (c64::new(0.0, 0.0), c64::new(0.0, 0.0));
                for m in 0..dim {
                    let phase = (cache.eigenvalues[m] * time).exp();
                    o += obs_weights[m] * phase;
                    t += trace_weights[m] * phase;
                }
                if !((t.re - 1.0).abs() <= TRACE_DRIFT_TOLERANCE) {
                    return self.expectation_series_integrated(rho0, observable, times, true);
                }
                values.push(o / t.re);
            }
            return Ok((values, Propagation::Spectral));
        }
        self.expectation_series_integrated(rho0, observable, times, true)
    }

    fn expectation_series_integrated(
        &self,
        rho0: &DensityMatrix,
        observable: &ComplexMatrix,
        times: &[f64],
        fallback: bool,
    ) -> Result<(Vec<c64>, Propagation)> {
        let result = self.evolve_integrator(rho0, times, RkTolerances::default())?;
        let values = result
            .states
            .iter()
            .map(|s| s.expectation(observable))
            .collect::<Result<Vec<_>>>()?;
        Ok((values, Propagation::Integrator { fallback }))
    }

    /// Unique fixed point of the dynamics, taken from the kernel eigenvector.
    pub fn steady_state(&self) -> Result<DensityMatrix> {
        let cache = self.spectral.as_ref().ok_or(Error::EigenFailure)?;
        let kernel_count = cache
            .eigenvalues
            .iter()
            .filter(|z| z.norm() < KERNEL_THRESHOLD)
            .count();
        if kernel_count > 1 {
            return Err(Error::DegenerateKernel {
                count: kernel_count,
                threshold: KERNEL_THRESHOLD,
            });
        }
        let idx = cache
            .eigenvalues
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
            .map(|(i, _)| i)
            .ok_or(Error::EigenFailure)?;

        let n = self.layout.total_dim();
        let column: Vec<c64> = (0..n * n).map(|p| cache.right[(p, idx)]).collect();
        let raw = ComplexMatrix::from_column_stacked(n, &column)?;
        let tr = raw.trace();
        if !(tr.norm() > 1e-300) {
            return Err(Error::TraceNotOne { trace: tr.re });
        }
        let rho = hermitize(&raw.scale(tr.inv()))?;
        let state = DensityMatrix::unchecked(self.layout.clone(), rho)?;

        let min = state.min_eigenvalue()?;
        if min < -crate::operator::POSITIVITY_TOLERANCE {
            return Err(Error::NotPositive {
                min_eigenvalue: min,
            });
        }
        let residual = self.apply(&state)?.max_abs();
        if !(residual < RESIDUAL_TOLERANCE) {
            return Err(Error::ResidualTooLarge {
                residual,
                tolerance: RESIDUAL_TOLERANCE,
            });
        }
        state.validate(crate::operator::STATE_TOLERANCE, crate::operator::POSITIVITY_TOLERANCE)?;
        Ok(state)
    }
}

fn validate_times(times: &[f64]) -> Result<()> {
    if times.is_empty() {
        return Err(Error::InvalidTimes("empty time list"));
    }
    if times.iter().any(|t| !t.is_finite() || *t < 0.0) {
        return Err(Error::InvalidTimes("times must be finite and nonnegative"));
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidTimes("times must be strictly increasing"));
    }
    Ok(())
}

/// Sensitivity of the steady-state concurrence and g²(0) to the boson
/// truncation: `max |value(n_max + 1) − value(n_max)|` over both observables.
pub fn truncation_check(params: &FullModelParams, n_max: usize) -> Result<f64> {
    if n_max == 0 {
        return Err(Error::param("n_max", "boson truncation must be at least 1"));
    }
    let (c_lo, g_lo) = steady_observables(params, n_max)?;
    let (c_hi, g_hi) = steady_observables(params, n_max + 1)?;
    Ok((c_hi - c_lo).abs().max((g_hi - g_lo).abs()))
}

fn steady_observables(params: &FullModelParams, n_max: usize) -> Result<(f64, f64)> {
    let mut p = params.clone();
    p.n_max = n_max;
    let model = build_full_model(&p)?;
    let l = model.liouvillian()?;
    let rho = l.steady_state()?;
    let qubits = rho.partial_trace(&[0, 1])?;
    let c = concurrence(&qubits)?.value;
    let g = g2_zero(&l, &rho)?;
    Ok((c, g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{sigma_minus, sigma_x, sigma_z};

    fn qubit() -> SpaceLayout {
        SpaceLayout::new(alloc::vec![2]).unwrap()
    }

    #[test]
    fn null_generator() {
        let l = build_liouvillian(&qubit(), &ComplexMatrix::zeros(2, 2), &[]).unwrap();
        assert_eq!(l.superop().max_abs(), 0.0);
    }

    #[test]
    fn rejects_non_hermitian_and_mismatched_jumps() {
        let mut h = ComplexMatrix::zeros(2, 2);
        h[(0, 1)] = c64::new(1.0, 0.0);
        assert!(matches!(
            build_liouvillian(&qubit(), &h, &[]),
            Err(Error::NotHermitian { .. })
        ));
        let jump = JumpTerm::new(1.0, ComplexMatrix::identity(3)).unwrap();
        assert!(matches!(
            build_liouvillian(&qubit(), &ComplexMatrix::zeros(2, 2), &[jump]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(JumpTerm::new(-1.0, ComplexMatrix::identity(2)).is_err());
    }

    #[test]
    fn amplitude_damping_closed_form() {
        let gamma = 0.3;
        let jump = JumpTerm::new(gamma, sigma_minus()).unwrap();
        let l = build_liouvillian(&qubit(), &ComplexMatrix::zeros(2, 2), &[jump]).unwrap();
        let excited = DensityMatrix::basis(qubit(), 1).unwrap();
        let times = [0.0, 0.5, 1.0, 2.5, 10.0];
        for result in [
            l.evolve(&excited, &times).unwrap(),
            l.evolve_integrator(&excited, &times, RkTolerances::default()).unwrap(),
        ] {
            for (t, state) in result.times.iter().zip(&result.states) {
                let expected = (-gamma * t).exp();
                assert!((state.matrix()[(1, 1)].re - expected).abs() < 1e-9, "t = {t}");
            }
        }
    }

    #[test]
    fn zero_time_returns_initial_state() {
        let jump = JumpTerm::new(0.2, sigma_minus()).unwrap();
        let h = sigma_x().scale_real(0.4);
        let l = build_liouvillian(&qubit(), &h, &[jump]).unwrap();
        let rho0 = DensityMatrix::basis(qubit(), 1).unwrap();
        let out = l.evolve(&rho0, &[0.0]).unwrap();
        assert!(out.states[0].matrix().max_abs_diff(rho0.matrix()) < 1e-12);
    }

    #[test]
    fn rejects_bad_time_grids() {
        let l = build_liouvillian(&qubit(), &ComplexMatrix::zeros(2, 2), &[]).unwrap();
        let rho0 = DensityMatrix::basis(qubit(), 0).unwrap();
        assert!(l.evolve(&rho0, &[]).is_err());
        assert!(l.evolve(&rho0, &[-1.0]).is_err());
        assert!(l.evolve(&rho0, &[1.0, 1.0]).is_err());
        assert!(l.evolve(&rho0, &[2.0, 1.0]).is_err());
    }

    #[test]
    fn pure_dephasing_has_degenerate_kernel() {
        let jump = JumpTerm::new(0.1, sigma_z()).unwrap();
        let l = build_liouvillian(&qubit(), &ComplexMatrix::zeros(2, 2), &[jump]).unwrap();
        assert!(matches!(
            l.steady_state(),
            Err(Error::DegenerateKernel { count: 2, .. })
        ));
    }

    #[test]
    fn driven_damped_qubit_steady_state() {
        let gamma = 1.0;
        let omega = 0.3;
        let jump = JumpTerm::new(gamma, sigma_minus()).unwrap();
        let h = sigma_x().scale_real(omega);
        let l = build_liouvillian(&qubit(), &h, &[jump]).unwrap();
        let ss = l.steady_state().unwrap();
        // resonant Rabi drive Ω_R = 2ω: ρ_ee = (Ω_R²/4)/(γ²/4 + Ω_R²/2)
        let rabi = 2.0 * omega;
        let expected = (rabi * rabi / 4.0) / (gamma * gamma / 4.0 + rabi * rabi / 2.0);
        assert!((ss.matrix()[(1, 1)].re - expected).abs() < 1e-12);
        assert!(l.apply(&ss).unwrap().max_abs() < 1e-12);
    }
}
