//! Seeded random streams and the few distributions the samplers need.

use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::math::{cos, exp, log, sqrt, normal_cdf, normal_quantile};

pub type Rng = ChaCha8Rng;

pub fn seeded(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform on `[0, 1)`.
#[inline]
pub fn uniform(rng: &mut Rng) -> f64 {
    rng.random::<f64>()
}

/// Uniform on `(0, 1]`, safe to take the log of.
#[inline]
pub fn uniform_pos(rng: &mut Rng) -> f64 {
    1.0 - rng.random::<f64>()
}

/// Uniform integer in `0..n`.
#[inline]
pub fn below(rng: &mut Rng, n: usize) -> usize {
    rng.random_range(0..n)
}

/// Standard normal via Box–Muller, one draw per call.
pub fn std_normal(rng: &mut Rng) -> f64 {
    let u1 = uniform_pos(rng);
    let u2 = uniform(rng);
    sqrt(-2.0 * log(u1)) * cos(core::f64::consts::TAU * u2)
}

pub fn exponential(rng: &mut Rng, rate: f64) -> f64 {
    -log(uniform_pos(rng)) / rate
}

/// Standard normal conditioned on `z > a`.
pub fn std_normal_above(rng: &mut Rng, a: f64) -> f64 {
    if a < 0.5 {
        // plain rejection; acceptance stays above ~0.3
        loop {
            let z = std_normal(rng);
            if z > a {
                return z;
            }
        }
    }
    // exponential proposal with the optimal rate
    let lam = 0.5 * (a + sqrt(a * a + 4.0));
    loop {
        let z = a + exponential(rng, lam);
        let rho = exp(-0.5 * (z - lam) * (z - lam));
        if uniform(rng) <= rho {
            return z;
        }
    }
}

/// `N(mean, 1)` truncated to `(0, ∞)` when `positive`, else `(-∞, 0]`.
pub fn probit_latent(rng: &mut Rng, mean: f64, positive: bool) -> f64 {
    if positive {
        mean + std_normal_above(rng, -mean)
    } else {
        mean - std_normal_above(rng, mean)
    }
}

/// Inverse-CDF fallback used only by tests to cross-check the samplers.
#[doc(hidden)]
pub fn std_normal_above_inverse(rng: &mut Rng, a: f64) -> f64 {
    let lo = normal_cdf(a);
    normal_quantile(lo + uniform(rng) * (1.0 - lo))
}
