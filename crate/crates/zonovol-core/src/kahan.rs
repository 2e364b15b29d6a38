//! Compensated summation and deterministic parallel reduction.
//!
//! The tuple enumerations in the mixed-volume formulas add up to ~1e8 terms
//! of similar magnitude. Plain `f64` accumulation loses digits and naive
//! parallel reduction is nondeterministic (the split depends on the thread
//! pool). Both suites therefore run on Kahan accumulators over a fixed
//! chunking of the index range: partial sums are produced per chunk in
//! chunk order and combined sequentially, so the result is independent of
//! how many workers rayon actually uses.

use rayon::prelude::*;

/// Kahan-Babuska compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    compensation: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        let y = value - self.compensation;
        let t = self.sum + y;
        self.compensation = (t - self.sum) - y;
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum
    }
}

/// Number of consecutive indices evaluated by one worker before its partial
/// sum is handed back. Fixed so that the reduction tree never depends on the
/// scheduler.
pub const CHUNK: u64 = 1 << 14;

/// Deterministic parallel sum of `term(i)` for `i in 0..count`.
///
/// Each chunk `[k*CHUNK, (k+1)*CHUNK)` is summed sequentially with Kahan
/// compensation; the per-chunk partials are collected in chunk order and
/// combined with a second Kahan pass.
pub fn par_sum_indexed<F>(count: u64, term: F) -> f64
where
    F: Fn(u64) -> f64 + Sync,
{
    if count == 0 {
        return 0.0;
    }
    let chunks = count.div_ceil(CHUNK);
    if chunks == 1 {
        let mut acc = KahanSum::new();
        for i in 0..count {
            acc.add(term(i));
        }
        return acc.value();
    }
    let partials: Vec<f64> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(count);
            let mut acc = KahanSum::new();
            for i in lo..hi {
                acc.add(term(i));
            }
            acc.value()
        })
        .collect();
    let mut total = KahanSum::new();
    for p in partials {
        total.add(p);
    }
    total.value()
}
