//! Seeded, portable randomness for the Monte Carlo estimators.
//!
//! Every randomized computation in this crate draws from ChaCha8 keyed by a
//! user-visible `u64` seed, with Gaussians produced by Box-Muller from
//! explicit 53-bit uniforms. Both pieces are fixed, named algorithms so a
//! reimplementation in another language can reproduce estimates
//! bit-approximately; reports carry [`ALGORITHM`] next to the seed.
//!
//! Parallel sampling splits the sample index range into substreams: sample
//! `i` of seed `s` uses ChaCha stream id `i`, so the estimate does not
//! depend on how samples are scheduled.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Name of the generator pipeline, quoted in Monte Carlo reports.
pub const ALGORITHM: &str = "chacha8/box-muller";

/// Deterministic stream of uniforms and Gaussians.
pub struct SampleRng {
    rng: ChaCha8Rng,
    spare_gaussian: Option<f64>,
}

impl SampleRng {
    pub fn from_seed(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            spare_gaussian: None,
        }
    }

    /// Substream `index` of the seed, independent of all other substreams.
    pub fn substream(seed: u64, index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index.wrapping_add(1));
        Self {
            rng,
            spare_gaussian: None,
        }
    }

    /// Uniform in [0,1) with 53 random bits.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard Gaussian via Box-Muller.
    pub fn gaussian(&mut self) -> f64 {
        if let Some(z) = self.spare_gaussian.take() {
            return z;
        }
        // Reject u1 == 0 so the log is finite.
        let mut u1 = self.uniform();
        while u1 == 0.0 {
            u1 = self.uniform();
        }
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = 2.0 * std::f64::consts::PI * u2;
        self.spare_gaussian = Some(r * theta.sin());
        r * theta.cos()
    }

    /// Uniform point on the unit sphere in `dim` dimensions.
    pub fn unit_vector(&mut self, dim: usize) -> nalgebra::DVector<f64> {
        loop {
            let v = nalgebra::DVector::from_fn(dim, |_, _| self.gaussian());
            let n = v.norm();
            if n > 1e-8 {
                return v / n;
            }
        }
    }
}
