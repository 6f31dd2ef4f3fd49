//! Large-argument Hankel expansions (DLMF 10.17.5/10.17.6): seeds at orders
//! 0 and 1 for the upward order ladder, plus prefactor-stripped variants
//! whose ratios stay representable when e^{±iz} itself would not.
//!
//! The series Σ_k (±i)^k a_k(ν)/z^k is truncated at its smallest term
//! (optimal truncation); for |z| ≥ 17 that term is ≲ e^{−2|z|} ≈ 2e-15
//! relative, which is what lets the series routes hand over at that radius.

use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

const MAX_ASYMPTOTIC_TERMS: usize = 60;

/// Σ_k (±i)^k a_k(ν)/z^k with a_k(ν) = Π_{j≤k} (4ν² − (2j−1)²)/(8j),
/// stopped at the smallest term.
fn asymptotic_sum(nu: f64, z: Complex64, upper: bool) -> Complex64 {
    let four_nu2 = 4.0 * nu * nu;
    let step = Complex64::new(0.0, if upper { 1.0 } else { -1.0 }) / z;
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut prev_mag = f64::INFINITY;
    for k in 1..=MAX_ASYMPTOTIC_TERMS {
        let twok1 = (2 * k - 1) as f64;
        term = term * step * ((four_nu2 - twok1 * twok1) / (8.0 * k as f64));
        let mag = term.norm();
        if mag >= prev_mag {
            break; // divergence onset: the previous partial sum is optimal
        }
        sum += term;
        prev_mag = mag;
        if mag < 1e-17 * sum.norm() {
            break;
        }
    }
    sum
}

/// H^{(1)}_ν(z) ≈ sqrt(2/(πz)) e^{i(z − νπ/2 − π/4)} Σ_k i^k a_k(ν)/z^k,
/// valid for −π < arg z < 2π; accurate to ~e^{−2|z|} relative.
pub(crate) fn hankel1_large(nu: f64, z: Complex64) -> Complex64 {
    let pref = (Complex64::new(2.0 / PI, 0.0) / z).sqrt();
    let phase = (Complex64::new(0.0, 1.0) * (z - nu * FRAC_PI_2 - FRAC_PI_4)).exp();
    pref * phase * asymptotic_sum(nu, z, true)
}

/// H^{(2)}_ν(z), the e^{−i(⋯)} companion (valid −2π < arg z < π); only used
/// to synthesize J = (H^{(1)} + H^{(2)})/2 away from the negative real axis.
pub(crate) fn hankel2_large(nu: f64, z: Complex64) -> Complex64 {
    let pref = (Complex64::new(2.0 / PI, 0.0) / z).sqrt();
    let phase = (Complex64::new(0.0, -1.0) * (z - nu * FRAC_PI_2 - FRAC_PI_4)).exp();
    pref * phase * asymptotic_sum(nu, z, false)
}

/// Ladder seeds (s_0, s_1) proportional to (H^{(1)}_0, H^{(1)}_1) with the
/// common factor sqrt(2/(πz)) e^{i(z−π/4)} stripped: s_ν = (−i)^ν Σ_k i^k
/// a_k(ν)/z^k. The three-term recurrence is linear, so every downstream
/// ratio of ladder values is exact while the magnitudes stay O(1).
pub(crate) fn stripped_seeds(z: Complex64) -> (Complex64, Complex64) {
    let s0 = asymptotic_sum(0.0, z, true);
    let s1 = asymptotic_sum(1.0, z, true) * Complex64::new(0.0, -1.0);
    (s0, s1)
}
