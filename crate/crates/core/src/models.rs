//! Hamiltonians and dissipators for the driven qubit pair.
//!
//! Three levels of description are provided:
//!
//! 1. the full qubit–qubit–boson model in the rotating frame,
//!    `H = Σᵢ[Δᵢσᵢ⁺σᵢ⁻ − ηᵢ(σᵢ⁺+σᵢ⁻) − gᵢ(σᵢ⁺a + σᵢ⁻a†)] + Δ_a a†a − η_a(a+a†)`
//!    with boson decay (rate 1), emitter relaxation and emitter dephasing;
//! 2. the two-qubit model obtained by adiabatically eliminating the boson,
//!    which carries a collective (non-diagonal) dissipator;
//! 3. its representation in the Dicke basis `{|E⟩, |S⟩, |A⟩, |G⟩}`, with
//!    `|S⟩, |A⟩ = (|eg⟩ ± |ge⟩)/√2`, where `|eg⟩` has qubit 0 excited.

use alloc::{vec, vec::Vec};

use faer::c64;
// shadowed by inherent f64 methods whenever std is linked
#[allow(unused_imports)]
use num_traits::Float;

use crate::liouvillian::{build_liouvillian, JumpTerm, Liouvillian};
use crate::operator::{
    boson_destroy, embed, sigma_minus, sigma_plus, sigma_z, ComplexMatrix, DensityMatrix,
    SpaceLayout,
};
use crate::{Error, Result};

/// Emitter relaxation rate γ_r in units of γ_a (2.5 MHz against 50 THz).
pub const DEFAULT_GAMMA_R: f64 = 5e-8;
/// Emitter dephasing rate γ_d in units of γ_a (5 MHz against 50 THz).
pub const DEFAULT_GAMMA_D: f64 = 1e-7;
/// Absolute boson decay rate in Hz.
pub const DEFAULT_GAMMA_A_HZ: f64 = 50e12;
pub const DEFAULT_N_MAX: usize = 2;
/// Above this coupling/drive the adiabatically eliminated model is not
/// trustworthy.
pub const WEAK_COUPLING_LIMIT: f64 = 0.2;

/// Jump operator used for the emitter "relaxation" channel.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum RelaxationOperator {
    /// `σ⁻`: physical decay towards `|g⟩`.
    #[default]
    Lower,
    /// `σ⁺`: incoherent pumping, kept only for comparison runs.
    Raise,
}

impl RelaxationOperator {
    pub fn as_str(self) -> &'static str {
        match self {
            RelaxationOperator::Lower => "lower",
            RelaxationOperator::Raise => "raise",
        }
    }
}

impl core::str::FromStr for RelaxationOperator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lower" => Ok(RelaxationOperator::Lower),
            "raise" => Ok(RelaxationOperator::Raise),
            _ => Err(Error::param("relaxation_operator", "expected `lower` or `raise`")),
        }
    }
}

/// Physical parameters of the full model, in units of γ_a.
#[derive(Clone, Debug, PartialEq)]
pub struct FullModelParams {
    pub delta0: f64,
    pub delta1: f64,
    pub delta_a: f64,
    pub g0: f64,
    pub g1: f64,
    pub eta0: f64,
    pub eta1: f64,
    pub eta_a: f64,
    pub gamma_r0: f64,
    pub gamma_r1: f64,
    pub gamma_d0: f64,
    pub gamma_d1: f64,
    /// Absolute boson decay rate in Hz; only used to convert times.
    pub gamma_a_abs: f64,
    pub n_max: usize,
    pub relaxation: RelaxationOperator,
}

impl Default for FullModelParams {
    /// Anti-symmetric detunings ±0.01, equal drives and couplings of 0.05,
    /// undriven resonant boson.
    fn default() -> Self {
        Self {
            delta0: 0.01,
            delta1: -0.01,
            delta_a: 0.0,
            g0: 0.05,
            g1: 0.05,
            eta0: 0.05,
            eta1: 0.05,
            eta_a: 0.0,
            gamma_r0: DEFAULT_GAMMA_R,
            gamma_r1: DEFAULT_GAMMA_R,
            gamma_d0: DEFAULT_GAMMA_D,
            gamma_d1: DEFAULT_GAMMA_D,
            gamma_a_abs: DEFAULT_GAMMA_A_HZ,
            n_max: DEFAULT_N_MAX,
            relaxation: RelaxationOperator::Lower,
        }
    }
}

impl FullModelParams {
    /// Names of the real-valued fields, in declaration order.
    pub const REAL_FIELDS: [&'static str; 13] = [
        "delta0",
        "delta1",
        "delta_a",
        "g0",
        "g1",
        "eta0",
        "eta1",
        "eta_a",
        "gamma_r0",
        "gamma_r1",
        "gamma_d0",
        "gamma_d1",
        "gamma_a_abs",
    ];

    fn field_mut(&mut self, name: &str) -> Option<&mut f64> {
        Some(match name {
            "delta0" => &mut self.delta0,
            "delta1" => &mut self.delta1,
            "delta_a" => &mut self.delta_a,
            "g0" => &mut self.g0,
            "g1" => &mut self.g1,
            "eta0" => &mut self.eta0,
            "eta1" => &mut self.eta1,
            "eta_a" => &mut self.eta_a,
            "gamma_r0" => &mut self.gamma_r0,
            "gamma_r1" => &mut self.gamma_r1,
            "gamma_d0" => &mut self.gamma_d0,
            "gamma_d1" => &mut self.gamma_d1,
            "gamma_a_abs" => &mut self.gamma_a_abs,
            _ => return None,
        })
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.clone().field_mut(name).map(|v| *v)
    }

    /// Sets a real field by name.
    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        if !value.is_finite() {
            return Err(Error::param(name, "value must be finite"));
        }
        match self.field_mut(name) {
            Some(slot) => {
                *slot = value;
                Ok(())
            }
            None => Err(Error::param(name, "unknown model parameter")),
        }
    }

    pub fn validate(&self) -> Result<()> {
        for name in Self::REAL_FIELDS {
            let v = self.get(name).unwrap_or(f64::NAN);
            if !v.is_finite() {
                return Err(Error::param(name, "value must be finite"));
            }
        }
        for (name, v) in [
            ("gamma_r0", self.gamma_r0),
            ("gamma_r1", self.gamma_r1),
            ("gamma_d0", self.gamma_d0),
            ("gamma_d1", self.gamma_d1),
        ] {
            if v < 0.0 {
                return Err(Error::param(name, "rates must be nonnegative"));
            }
        }
        if !(self.gamma_a_abs > 0.0) {
            return Err(Error::param("gamma_a_abs", "absolute boson rate must be positive"));
        }
        if self.n_max == 0 {
            return Err(Error::param("n_max", "boson truncation must be at least 1"));
        }
        Ok(())
    }

    /// True when any coupling or drive exceeds [`WEAK_COUPLING_LIMIT`].
    pub fn weak_coupling_advisory(&self) -> bool {
        [self.g0, self.g1, self.eta0, self.eta1]
            .iter()
            .any(|v| v.abs() > WEAK_COUPLING_LIMIT)
    }

    /// Same physics with the qubit labels exchanged.
    pub fn swapped_qubits(&self) -> Self {
        Self {
            delta0: self.delta1,
            delta1: self.delta0,
            g0: self.g1,
            g1: self.g0,
            eta0: self.eta1,
            eta1: self.eta0,
            gamma_r0: self.gamma_r1,
            gamma_r1: self.gamma_r0,
            gamma_d0: self.gamma_d1,
            gamma_d1: self.gamma_d0,
            ..self.clone()
        }
    }

    /// Detuning symbol of the closed-form populations, `(Δ₀ − Δ₁)/4`.
    ///
    /// Each qubit undergoes an independent Rabi oscillation at
    /// `√((Δᵢ/2)² + η²)`, so for `Δ₀ = −Δ₁` the formula symbol is half the
    /// individual detuning.
    pub fn analytic_delta(&self) -> f64 {
        (self.delta0 - self.delta1) / 4.0
    }

    /// Drive symbol of the closed-form populations (mean drive).
    pub fn analytic_eta(&self) -> f64 {
        (self.eta0 + self.eta1) / 2.0
    }

    /// Effective two-qubit Rabi frequency `Ω = √(δ² + η²)`.
    pub fn rabi_frequency(&self) -> f64 {
        self.analytic_delta().hypot(self.analytic_eta())
    }
}

/// Hamiltonian, jumps and frequently used operators of the full model.
#[derive(Clone, Debug)]
pub struct FullModel {
    pub layout: SpaceLayout,
    pub hamiltonian: ComplexMatrix,
    pub jumps: Vec<JumpTerm>,
    lowering: [ComplexMatrix; 2],
    boson: ComplexMatrix,
}

impl FullModel {
    pub fn liouvillian(&self) -> Result<Liouvillian> {
        build_liouvillian(&self.layout, &self.hamiltonian, &self.jumps)
    }

    /// `|gg⟩ ⊗ |0⟩`.
    pub fn ground_state(&self) -> DensityMatrix {
        DensityMatrix::basis(self.layout.clone(), 0).expect("index 0 always exists")
    }

    /// `σᵢ⁻` on the full space.
    pub fn lowering(&self, emitter: usize) -> &ComplexMatrix {
        &self.lowering[emitter]
    }

    /// Boson annihilation operator on the full space.
    pub fn boson(&self) -> &ComplexMatrix {
        &self.boson
    }
}

/// Builds the full rotating-frame model on the `[2, 2, n_max + 1]` layout.
///
/// Jumps, in order: boson decay `(1, a)`, emitter relaxation for qubits 0 and
/// 1, emitter dephasing `σᶻ` for qubits 0 and 1.
pub fn build_full_model(p: &FullModelParams) -> Result<FullModel> {
    p.validate()?;
    let layout = SpaceLayout::qubits_and_boson(p.n_max)?;
    let s0 = embed(&sigma_minus(), 0, &layout)?;
    let s1 = embed(&sigma_minus(), 1, &layout)?;
    let a = embed(&boson_destroy(p.n_max)?, 2, &layout)?;
    let a_dag = a.adjoint();

    let mut h = (&a_dag * &a).scale_real(p.delta_a);
    h = &h - &(&a + &a_dag).scale_real(p.eta_a);
    for (s, delta, eta, g) in [
        (&s0, p.delta0, p.eta0, p.g0),
        (&s1, p.delta1, p.eta1, p.g1),
    ] {
        let s_dag = s.adjoint();
        h = &h + &(&s_dag * s).scale_real(delta);
        h = &h - &(&s_dag + s).scale_real(eta);
        let exchange = &(&s_dag * &a) + &(s * &a_dag);
        h = &h - &exchange.scale_real(g);
    }

    let relax = |site| match p.relaxation {
        RelaxationOperator::Lower => embed(&sigma_minus(), site, &layout),
        RelaxationOperator::Raise => embed(&sigma_plus(), site, &layout),
    };
    let jumps = vec![
        JumpTerm::new(1.0, a.clone())?,
        JumpTerm::new(p.gamma_r0, relax(0)?)?,
        JumpTerm::new(p.gamma_r1, relax(1)?)?,
        JumpTerm::new(p.gamma_d0, embed(&sigma_z(), 0, &layout)?)?,
        JumpTerm::new(p.gamma_d1, embed(&sigma_z(), 1, &layout)?)?,
    ];
    Ok(FullModel {
        layout,
        hamiltonian: h,
        jumps,
        lowering: [s0, s1],
        boson: a,
    })
}

/// Parameters of the two-qubit model after eliminating the boson.
#[derive(Clone, Debug, PartialEq)]
pub struct EffectiveParams {
    pub dtilde0: f64,
    pub dtilde1: f64,
    pub etatilde0: f64,
    pub etatilde1: f64,
    pub gtilde: f64,
    pub gamma00: f64,
    pub gamma11: f64,
    pub gamma01: f64,
    /// `(γ_a/2)² + Δ_a²` with γ_a = 1.
    pub z: f64,
    /// Emitter dephasing rates, carried through unchanged.
    pub gamma_d0: f64,
    pub gamma_d1: f64,
    /// Intrinsic σ⁺ rates when the raising relaxation variant is selected;
    /// zero otherwise (the intrinsic rate then sits inside `gamma00/11`).
    pub raise0: f64,
    pub raise1: f64,
}

/// Adiabatic elimination of the boson (`ȧ = 0`).
pub fn adiabatic_eliminate(p: &FullModelParams) -> EffectiveParams {
    let z = 0.25 + p.delta_a * p.delta_a;
    let (lower0, lower1, raise0, raise1) = match p.relaxation {
        RelaxationOperator::Lower => (p.gamma_r0, p.gamma_r1, 0.0, 0.0),
        RelaxationOperator::Raise => (0.0, 0.0, p.gamma_r0, p.gamma_r1),
    };
    EffectiveParams {
        dtilde0: p.delta0 - p.g0 * p.g0 * p.delta_a / z,
        dtilde1: p.delta1 - p.g1 * p.g1 * p.delta_a / z,
        etatilde0: p.eta0 + p.g0 * p.delta_a * p.eta_a / z,
        etatilde1: p.eta1 + p.g1 * p.delta_a * p.eta_a / z,
        gtilde: p.g0 * p.g1 * p.delta_a / z,
        gamma00: lower0 + p.g0 * p.g0 / z,
        gamma11: lower1 + p.g1 * p.g1 / z,
        gamma01: p.g0 * p.g1 / z,
        z,
        gamma_d0: p.gamma_d0,
        gamma_d1: p.gamma_d1,
        raise0,
        raise1,
    }
}

impl EffectiveParams {
    /// The dissipationless part only: all rates set to zero.
    pub fn coherent_only(&self) -> Self {
        Self {
            gamma00: 0.0,
            gamma11: 0.0,
            gamma01: 0.0,
            gamma_d0: 0.0,
            gamma_d1: 0.0,
            raise0: 0.0,
            raise1: 0.0,
            ..self.clone()
        }
    }
}

/// Two-qubit Hamiltonian with its dissipator realized as independent jumps.
#[derive(Clone, Debug)]
pub struct EffectiveModel {
    pub layout: SpaceLayout,
    pub hamiltonian: ComplexMatrix,
    /// Eigen-channels of the collective rate matrix `[[γ̃₀₀, γ̃₀₁], [γ̃₀₁, γ̃₁₁]]`.
    pub collective: Vec<JumpTerm>,
    /// Dephasing and (optionally) raising channels.
    pub local: Vec<JumpTerm>,
}

impl EffectiveModel {
    pub fn jumps(&self) -> Vec<JumpTerm> {
        self.collective.iter().chain(&self.local).cloned().collect()
    }

    pub fn liouvillian(&self) -> Result<Liouvillian> {
        build_liouvillian(&self.layout, &self.hamiltonian, &self.jumps())
    }
}

/// Tolerated negative eigenvalue of the collective rate matrix.
pub const RATE_MATRIX_TOLERANCE: f64 = 1e-12;

pub fn build_effective_model(e: &EffectiveParams) -> Result<EffectiveModel> {
    let layout = SpaceLayout::qubit_pair();
    let s = [
        embed(&sigma_minus(), 0, &layout)?,
        embed(&sigma_minus(), 1, &layout)?,
    ];
    let sd = [s[0].adjoint(), s[1].adjoint()];

    let mut h = (&sd[0] * &s[0]).scale_real(e.dtilde0);
    h = &h + &(&sd[1] * &s[1]).scale_real(e.dtilde1);
    h = &h - &(&sd[0] + &s[0]).scale_real(e.etatilde0);
    h = &h - &(&sd[1] + &s[1]).scale_real(e.etatilde1);
    let hop = &(&sd[0] * &s[1]) + &(&sd[1] * &s[0]);
    h = &h - &hop.scale_real(e.gtilde);

    let mut collective = Vec::with_capacity(2);
    for (rate, (u0, u1)) in rate_channels(e.gamma00, e.gamma11, e.gamma01)? {
        if rate > 0.0 {
            let op = &s[0].scale_real(u0) + &s[1].scale_real(u1);
            collective.push(JumpTerm::new(rate, op)?);
        }
    }
    let mut local = Vec::new();
    for (rate, site) in [(e.gamma_d0, 0), (e.gamma_d1, 1)] {
        if rate > 0.0 {
            local.push(JumpTerm::new(rate, embed(&sigma_z(), site, &layout)?)?);
        }
    }
    for (rate, site) in [(e.raise0, 0), (e.raise1, 1)] {
        if rate > 0.0 {
            local.push(JumpTerm::new(rate, embed(&sigma_plus(), site, &layout)?)?);
        }
    }
    Ok(EffectiveModel {
        layout,
        hamiltonian: h,
        collective,
        local,
    })
}

/// Eigen-decomposition of the real symmetric rate matrix `[[a, b], [b, c]]`
/// into `(rate, unit vector)` pairs.
fn rate_channels(a: f64, c: f64, b: f64) -> Result<[(f64, (f64, f64)); 2]> {
    if b == 0.0 {
        for (name, v) in [("gamma00", a), ("gamma11", c)] {
            if v < -RATE_MATRIX_TOLERANCE {
                return Err(Error::param(name, "negative single-qubit rate"));
            }
        }
        return Ok([(a.max(0.0), (1.0, 0.0)), (c.max(0.0), (0.0, 1.0))]);
    }
    let mean = 0.5 * (a + c);
    let radius = (0.5 * (a - c)).hypot(b);
    let hi = mean + radius;
    // lo = (ac − b²)/hi avoids cancellation when the channel is nearly dark
    let lo = if hi != 0.0 { (a * c - b * b) / hi } else { mean - radius };
    if lo < -RATE_MATRIX_TOLERANCE {
        return Err(Error::param(
            "gamma01",
            "collective rate matrix is not positive semidefinite",
        ));
    }
    // eigenvector of hi: (b, hi − a), or (hi − c, b); pick the better conditioned
    let (x, y) = if (hi - a).abs() >= (hi - c).abs() {
        (b, hi - a)
    } else {
        (hi - c, b)
    };
    let norm = x.hypot(y);
    let (x, y) = (x / norm, y / norm);
    Ok([(hi, (x, y)), (lo.max(0.0), (-y, x))])
}

/// Basis-change matrix whose columns are `|E⟩, |S⟩, |A⟩, |G⟩` in the
/// computational ordering `|gg⟩, |ge⟩, |eg⟩, |ee⟩`.
pub fn dicke_basis() -> ComplexMatrix {
    let r = core::f64::consts::FRAC_1_SQRT_2;
    let c = |v: f64| c64::new(v, 0.0);
    let cols: [[f64; 4]; 4] = [
        [0.0, 0.0, 0.0, 1.0], // E
        [0.0, r, r, 0.0],     // S
        [0.0, -r, r, 0.0],    // A
        [1.0, 0.0, 0.0, 0.0], // G
    ];
    ComplexMatrix::from_fn(4, 4, |i, j| c(cols[j][i]))
}

/// Dicke-basis indices within [`dicke_basis`].
pub const DICKE_E: usize = 0;
pub const DICKE_S: usize = 1;
pub const DICKE_A: usize = 2;
pub const DICKE_G: usize = 3;

/// One printed-vs-derived mismatch in the Dicke-basis Hamiltonian.
#[derive(Clone, Debug, PartialEq)]
pub struct DickeDiagnostic {
    pub element: &'static str,
    pub printed: f64,
    pub derived: f64,
}

/// Dicke-basis form of the effective model, obtained by explicit basis change.
#[derive(Clone, Debug)]
pub struct DickeParams {
    /// `Δ₊ = (Δ̃₀ + Δ̃₁)/2`.
    pub delta_plus: f64,
    pub delta_e: f64,
    pub delta_s: f64,
    pub delta_a: f64,
    /// `⟨S|H|A⟩ = Δ₋ = (Δ̃₀ − Δ̃₁)/2`.
    pub delta_minus: f64,
    /// `η± = (η̃₀ ± η̃₁)/√2`.
    pub eta_plus: f64,
    pub eta_minus: f64,
    /// Derived couplings `⟨X|H|Y⟩`.
    pub s_ground: f64,
    pub a_ground: f64,
    pub s_excited: f64,
    pub a_excited: f64,
    /// Decay rates `|E⟩ → |S⟩` and `|E⟩ → |A⟩` from the collective dissipator.
    pub gamma_s: f64,
    pub gamma_a: f64,
    /// `B† H B` with `B` = [`dicke_basis`].
    pub hamiltonian: ComplexMatrix,
    /// Deviations from the textbook form
    /// `ΔₑEE + Δ_S SS + Δ_A AA + Δ₋(AS + SA) − η₋(SG + SE + h.c.) − η₊(AG − AE + h.c.)`
    /// with `Δ_S = Δ₊ + g̃`, `Δ_A = Δ₊ − g̃`.
    pub diagnostics: Vec<DickeDiagnostic>,
}

pub fn dicke_transform(e: &EffectiveParams) -> Result<DickeParams> {
    let model = build_effective_model(e)?;
    let b = dicke_basis();
    let hd = &(&b.adjoint() * &model.hamiltonian) * &b;
    let at = |i: usize, j: usize| hd[(i, j)].re;

    let delta_plus = 0.5 * (e.dtilde0 + e.dtilde1);
    let delta_minus_def = 0.5 * (e.dtilde0 - e.dtilde1);
    let sqrt2 = core::f64::consts::SQRT_2;
    let eta_plus = (e.etatilde0 + e.etatilde1) / sqrt2;
    let eta_minus = (e.etatilde0 - e.etatilde1) / sqrt2;

    // E → X transfer rate Σ_k γ_k |⟨X|L_k|E⟩|²
    let transfer = |target: usize| -> f64 {
        model
            .collective
            .iter()
            .map(|jump| {
                let lk = &(&b.adjoint() * jump.operator()) * &b;
                jump.rate() * lk[(target, DICKE_E)].norm_sqr()
            })
            .sum()
    };

    let printed = [
        ("<E|H|E>", 2.0 * delta_plus, at(DICKE_E, DICKE_E)),
        ("<S|H|S>", delta_plus + e.gtilde, at(DICKE_S, DICKE_S)),
        ("<A|H|A>", delta_plus - e.gtilde, at(DICKE_A, DICKE_A)),
        ("<S|H|A>", delta_minus_def, at(DICKE_S, DICKE_A)),
        ("<S|H|G>", -eta_minus, at(DICKE_S, DICKE_G)),
        ("<S|H|E>", -eta_minus, at(DICKE_S, DICKE_E)),
        ("<A|H|G>", -eta_plus, at(DICKE_A, DICKE_G)),
        ("<A|H|E>", eta_plus, at(DICKE_A, DICKE_E)),
    ];
    let diagnostics = printed
        .iter()
        .filter(|(_, p, d)| (p - d).abs() > 1e-12 * (1.0 + p.abs().max(d.abs())))
        .map(|&(element, printed, derived)| DickeDiagnostic {
            element,
            printed,
            derived,
        })
        .collect();

    Ok(DickeParams {
        delta_plus,
        delta_e: at(DICKE_E, DICKE_E),
        delta_s: at(DICKE_S, DICKE_S),
        delta_a: at(DICKE_A, DICKE_A),
        delta_minus: at(DICKE_S, DICKE_A),
        eta_plus,
        eta_minus,
        s_ground: at(DICKE_S, DICKE_G),
        a_ground: at(DICKE_A, DICKE_G),
        s_excited: at(DICKE_S, DICKE_E),
        a_excited: at(DICKE_A, DICKE_E),
        gamma_s: transfer(DICKE_S),
        gamma_a: transfer(DICKE_A),
        hamiltonian: hd,
        diagnostics,
    })
}

/// Populations of the four Dicke states.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DickePopulations {
    pub e: f64,
    pub s: f64,
    pub a: f64,
    pub g: f64,
}

impl DickePopulations {
    pub fn as_array(&self) -> [f64; 4] {
        [self.e, self.s, self.a, self.g]
    }

    pub fn sum(&self) -> f64 {
        self.e + self.s + self.a + self.g
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.as_array()
            .iter()
            .zip(other.as_array())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Dicke populations of a state whose first two subsystems are the qubits.
    pub fn of_state(rho: &DensityMatrix) -> Result<Self> {
        let reduced;
        let qubits = if rho.layout().dims() == [2, 2] {
            rho
        } else {
            if rho.layout().dims().len() < 2 || rho.layout().dims()[..2] != [2, 2] {
                return Err(Error::InvalidLayout("first two subsystems must be qubits".into()));
            }
            reduced = rho.partial_trace(&[0, 1])?;
            &reduced
        };
        let b = dicke_basis();
        let m = &(&b.adjoint() * qubits.matrix()) * &b;
        Ok(Self {
            e: m[(DICKE_E, DICKE_E)].re,
            s: m[(DICKE_S, DICKE_S)].re,
            a: m[(DICKE_A, DICKE_A)].re,
            g: m[(DICKE_G, DICKE_G)].re,
        })
    }
}

/// Closed-form coherent populations starting from `|G⟩`, for equal drives
/// `η` and anti-symmetric detunings; `delta` is the formula symbol
/// ([`FullModelParams::analytic_delta`]).
pub fn analytic_populations(delta: f64, eta: f64, t: f64) -> Result<DickePopulations> {
    let omega = delta.hypot(eta);
    if !(omega > 0.0) {
        return Err(Error::param("omega", "Rabi frequency must be nonzero"));
    }
    let (d2, e2, o2) = (delta * delta, eta * eta, omega * omega);
    let o4 = o2 * o2;
    let cos2 = (2.0 * t * omega).cos();
    let sin2 = (2.0 * t * omega).sin();
    let sin1 = (t * omega).sin();
    Ok(DickePopulations {
        e: (d2 + e2 * cos2 - o2).powi(2) / (4.0 * o4),
        s: e2 * sin2 * sin2 / (2.0 * o2),
        a: 2.0 * d2 * e2 * sin1.powi(4) / o4,
        g: (d2 + e2 * cos2 + o2).powi(2) / (4.0 * o4),
    })
}

/// Period of the closed-form populations, `π/Ω`.
pub fn population_period(delta: f64, eta: f64) -> f64 {
    core::f64::consts::PI / delta.hypot(eta)
}
