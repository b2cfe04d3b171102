//! Dormand–Prince 5(4) with local extrapolation and FSAL.

use alloc::{vec, vec::Vec};

use faer::c64;
// shadowed by inherent f64 methods whenever std is linked
#[allow(unused_imports)]
use num_traits::Float;

use crate::operator::ComplexMatrix;
use crate::{Error, Result};

/// Error control for the adaptive integrator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RkTolerances {
    pub relative: f64,
    pub absolute: f64,
    pub max_steps: usize,
}

impl Default for RkTolerances {
    fn default() -> Self {
        Self {
            relative: 1e-9,
            absolute: 1e-12,
            max_steps: 5_000_000,
        }
    }
}

const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
// fifth-order weights (row 7 of A) minus the embedded fourth-order weights
const E: [f64; 7] = [
    35.0 / 384.0 - 5179.0 / 57600.0,
    0.0,
    500.0 / 1113.0 - 7571.0 / 16695.0,
    125.0 / 192.0 - 393.0 / 640.0,
    -2187.0 / 6784.0 + 92097.0 / 339200.0,
    11.0 / 84.0 - 187.0 / 2100.0,
    -1.0 / 40.0,
];

/// Integrates `dy/dt = m y` from `t = 0`, returning `y` at each requested time.
pub(crate) fn integrate(
    m: &ComplexMatrix,
    y0: Vec<c64>,
    times: &[f64],
    tol: RkTolerances,
) -> Result<Vec<Vec<c64>>> {
    let n = y0.len();
    let zero = c64::new(0.0, 0.0);
    let mut k: Vec<Vec<c64>> = (0..7).map(|_| vec![zero; n]).collect();
    let mut stage = vec![zero; n];
    let mut y_new = vec![zero; n];
    let mut y = y0;
    let mut t = 0.0f64;
    let mut steps = 0usize;

    let norm_inf = (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let mut h = if norm_inf > 0.0 { 0.1 / norm_inf } else { 1.0 };

    m.apply_into(&y, &mut k[0]);
    let mut out = Vec::with_capacity(times.len());
    for &target in times {
        while t < target {
            if steps >= tol.max_steps {
                return Err(Error::IntegratorFailure {
                    time: t,
                    reason: "step budget exhausted",
                });
            }
            let remaining = target - t;
            let clipped = h >= remaining;
            let step = if clipped { remaining } else { h };

            for s in 1..7 {
                for i in 0..n {
                    let mut acc = y[i];
                    for (j, kj) in k.iter().enumerate().take(s) {
                        let a = A[s][j];
                        if a != 0.0 {
                            acc += kj[i] * (a * step);
                        }
                    }
                    stage[i] = acc;
                }
                if s == 6 {
                    y_new.copy_from_slice(&stage);
                }
                m.apply_into(&stage, &mut k[s]);
            }
            let mut err = 0.0f64;
            for i in 0..n {
                let mut e = c64::new(0.0, 0.0);
                for (j, kj) in k.iter().enumerate() {
                    if E[j] != 0.0 {
                        e += kj[i] * (E[j] * step);
                    }
                }
                let scale = tol.absolute + tol.relative * y[i].norm().max(y_new[i].norm());
                err = err.max(e.norm() / scale);
            }
            if !err.is_finite() {
                return Err(Error::IntegratorFailure {
                    time: t,
                    reason: "non-finite error estimate",
                });
            }
            steps += 1;
            if err <= 1.0 {
                t = if clipped { target } else { t + step };
                core::mem::swap(&mut y, &mut y_new);
                let (head, tail) = k.split_at_mut(6);
                head[0].copy_from_slice(&tail[0]);
                let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                // a clipped step says nothing about the natural step size
                if !clipped || step * factor > h {
                    h = step * factor;
                }
            } else {
                h = step * (0.9 * err.powf(-0.2)).clamp(0.1, 1.0);
                if h < 1e-14 * t.max(1.0) {
                    return Err(Error::IntegratorFailure {
                        time: t,
                        reason: "step size underflow",
                    });
                }
            }
        }
        out.push(y.clone());
    }
    Ok(out)
}
