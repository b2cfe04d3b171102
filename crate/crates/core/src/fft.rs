//! In-place iterative radix-2 FFT.

use faer::c64;
// shadowed by inherent f64 methods whenever std is linked
#[allow(unused_imports)]
use num_traits::Float;

/// Forward DFT `X[k] = Σ x[n] e^{−2πi kn/N}`; `data.len()` must be a power
/// of two.
pub(crate) fn fft_in_place(data: &mut [c64]) {
    let n = data.len();
    debug_assert!(n.is_power_of_two());
    if n < 2 {
        return;
    }

    // bit-reversal permutation
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            data.swap(i, j);
        }
    }

    let mut len = 2;
    while len <= n {
        let angle = -2.0 * core::f64::consts::PI / len as f64;
        let half = len / 2;
        for start in (0..n).step_by(len) {
            for k in 0..half {
                // twiddles computed directly rather than by recurrence to
                // keep the rounding error flat in k
                let theta = angle * k as f64;
                let w = c64::new(theta.cos(), theta.sin());
                let u = data[start + k];
                let v = data[start + k + half] * w;
                data[start + k] = u + v;
                data[start + k + half] = u - v;
            }
        }
        len <<= 1;
    }
}
