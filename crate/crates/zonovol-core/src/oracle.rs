//! Independent brute-force evaluators: polarization mixed volumes over
//! hull-computed Minkowski sums, and Monte Carlo intrinsic volumes via the
//! projection average. These deliberately share no code path with the
//! generator-sum formulas they are used to validate.

use rayon::prelude::*;

use crate::bodies::{Budget, VPolytope};
use crate::error::{Error, Result};
use crate::kahan::KahanSum;
use crate::linalg::sample_grassmannian;
use crate::rng::{SampleRng, ALGORITHM};
use crate::zonoid::{binomial, kappa};

/// A Monte Carlo estimate with its provenance.
#[derive(Debug, Clone, serde::Serialize)]
pub struct McEstimate {
    pub value: f64,
    pub stderr: f64,
    pub samples: usize,
    pub seed: u64,
    /// Name of the RNG pipeline, for cross-language reproduction.
    pub algorithm: &'static str,
}

/// Mixed volume by inclusion-exclusion over the volumes of all Minkowski
/// subset sums:
/// `V(K_1,..,K_n) = (1/n!) sum_k (-1)^{n+k} sum_{i_1<..<i_k} V_n(K_{i_1}+..+K_{i_k})`.
///
/// Exponential in `n`; guarded for n <= 5 and moderate vertex counts.
pub fn polarization_mixed_volume(slots: &[&VPolytope], budget: &Budget) -> Result<f64> {
    let n = slots.len();
    if n == 0 {
        return Err(Error::Applicability("no bodies given".into()));
    }
    let ambient = slots[0].ambient_dim();
    if ambient != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: ambient,
        });
    }
    for s in slots {
        if s.ambient_dim() != ambient {
            return Err(Error::DimensionMismatch {
                expected: ambient,
                got: s.ambient_dim(),
            });
        }
    }
    if n > 5 {
        return Err(Error::Budget(format!(
            "polarization over {n} slots needs 2^{n}-1 hull volumes; limit is n <= 5"
        )));
    }
    let mut point_count: u128 = 1;
    for s in slots {
        point_count = point_count.saturating_mul(s.vertices().len() as u128);
    }
    if point_count > budget.tuple_limit {
        return Err(Error::Budget(format!(
            "vertex product {point_count} exceeds budget {}",
            budget.tuple_limit
        )));
    }

    // Sums over the subset lattice, reusing the smaller sums.
    let mut sums: Vec<Option<VPolytope>> = vec![None; 1 << n];
    let mut acc = KahanSum::new();
    let mut scale = 1.0f64;
    for mask in 1usize..(1 << n) {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        let sum = if rest == 0 {
            slots[low].clone()
        } else {
            sums[rest]
                .as_ref()
                .expect("smaller sum computed")
                .minkowski_sum(slots[low])?
        };
        let vol = sum.volume();
        scale = scale.max(vol);
        let k = mask.count_ones() as i32;
        let sign = if (n as i32 + k) % 2 == 0 { 1.0 } else { -1.0 };
        acc.add(sign * vol);
        sums[mask] = Some(sum);
    }
    let mut fact = 1.0;
    for k in 2..=n {
        fact *= k as f64;
    }
    let raw = acc.value() / fact;
    if raw < -1e-10 * scale {
        return Err(Error::Numerical(format!(
            "polarization produced a negative mixed volume {raw}"
        )));
    }
    Ok(raw.max(0.0))
}

/// Monte Carlo intrinsic volume `V_i(K)` from the projection formula:
/// `binom(n,i) * kappa_n / (kappa_i * kappa_{n-i})` times the Haar average
/// of the i-dimensional measure of `K|L`. Each projection measure is exact
/// (hull plus volume in subspace coordinates).
pub fn kubota_intrinsic_volume_mc(
    body: &VPolytope,
    i: usize,
    samples: usize,
    seed: u64,
) -> Result<McEstimate> {
    let n = body.ambient_dim();
    if i == 0 || i >= n {
        return Err(Error::Applicability(format!(
            "projection average needs 1 <= i <= n-1, got i={i}, n={n}"
        )));
    }
    if samples < 100 {
        return Err(Error::Applicability(format!(
            "needs at least 100 samples, got {samples}"
        )));
    }
    let factor = binomial(n, i) * kappa(n) / (kappa(i) * kappa(n - i));
    let values: Vec<f64> = (0..samples)
        .into_par_iter()
        .map(|s| {
            let mut rng = SampleRng::substream(seed, s as u64);
            let l = sample_grassmannian(n, i, &mut rng).expect("valid grassmannian dims");
            match body.project_coords(&l) {
                Ok(q) => q.volume(),
                Err(_) => 0.0,
            }
        })
        .collect();
    let mut mean = KahanSum::new();
    for v in &values {
        mean.add(*v);
    }
    let mean = mean.value() / samples as f64;
    let mut var = KahanSum::new();
    for v in &values {
        var.add((v - mean) * (v - mean));
    }
    let std = (var.value() / (samples as f64 - 1.0)).sqrt();
    Ok(McEstimate {
        value: factor * mean,
        stderr: factor * std / (samples as f64).sqrt(),
        samples,
        seed,
        algorithm: ALGORITHM,
    })
}

/// Inscribed polytopal approximation of the unit ball: hull of `count`
/// quasi-uniform sphere points. Only for oracle cross-checks; the volume is
/// biased low by the inscription and callers must treat results as
/// approximate.
pub fn ball_polytope_approximation(n: usize, count: usize, seed: u64) -> Result<VPolytope> {
    let mut rng = SampleRng::from_seed(seed);
    let mut pts = Vec::with_capacity(count + 2 * n);
    // Always include the axis points so the approximation is symmetric
    // enough for centered tests.
    for i in 0..n {
        let mut e = nalgebra::DVector::zeros(n);
        e[i] = 1.0;
        pts.push(e.clone());
        pts.push(-e);
    }
    while pts.len() < count {
        pts.push(rng.unit_vector(n));
    }
    VPolytope::new(n, pts)
}
