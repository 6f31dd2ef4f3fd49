//! Complex-argument Bessel and Hankel functions of integer order, plus the
//! stable ratio evaluators the stability pencil is built from.
//!
//! # Region map
//!
//! Values (`bessel_j`, `hankel1`):
//!
//! * `|z| ≤ 17` — ascending series in double-double precision ([`series`]).
//!   For `hankel1` with `Im z > 2` the composition J + iY would cancel like
//!   e^{2 Im z}, so that band goes through K_ν(−iz) (CF2 plus value ladder,
//!   [`cf`]) instead; everywhere else J + iY is benign.
//! * `|z| > 17` — Hankel asymptotics at orders 0, 1 ([`asymptotic`]) and the
//!   three-term ladder in the order. Left half-plane arguments are reflected
//!   through the connection formulas first (see [`hankel1_seeds_large`]):
//!   the one-exponential expansion is only ~e^{−2|Im z|} accurate past the
//!   Stokes lines, which is catastrophic near the negative real axis.
//!   `bessel_j` synthesizes J = (H¹+H²)/2, recurring upward while
//!   `p ≤ |z|/2` (oscillatory regime, stable) and otherwise anchoring a
//!   downward Miller pass with the J-ratio continued fraction.
//!
//! Ratios (`ratio_j*`, `ratio_h*`): continued fractions and pure-ratio
//! ladders only — no exponential prefactors are ever materialized, so the
//! ratio surface keeps working where the values themselves would
//! under/overflow (the pencil assembly leans on this at |z| up to ~1100).
//!
//! # Documented bounds
//!
//! Value routes return [`BesselError::OutOfRange`] outside
//! `|Im z| ≤ 690` (e^{|Im z|} must stay clear of f64 overflow),
//! `|z| ≤ 1e6` (phase accuracy of e^{iz}), and order `p ≤ 2048`; results
//! whose true magnitude overflows f64 (huge order at small |z|) are also
//! reported as `OutOfRange` rather than returned as ±∞. Ratio routes accept
//! any `z ≠ 0` with `|z| ≤ 2e4` (continued-fraction iteration budget), except
//! that `ratio_h` in the left half-plane beyond the series radius rides the
//! value route and inherits its `|Im z| ≤ 690` bound. `ratio_h_real` needs
//! `Im z ≥ 0` with `Im z ≥ 1` or `|z| < 2` (the K-route sector — every
//! pencil argument satisfies it with margin).
//!
//! All branches are principal; arguments on the negative real axis are
//! outside the supported domain for values with `|z| > 17` (the reflection
//! J_p(−z) = (−1)^p J_p(z) keeps `bessel_j` itself total there).

mod asymptotic;
mod cf;
mod series;

use crate::dd::DdC;
use num_complex::Complex64;
use std::f64::consts::FRAC_2_PI;
use thiserror::Error;

/// Hand-over radius between the dd series and the asymptotic expansions,
/// chosen so both sides meet at ~2e-15 relative error (series cancellation
/// e^{17} against dd headroom; asymptotic optimal truncation e^{−2·17}).
const SERIES_RADIUS: f64 = 17.0;
/// Within the series disc, the J + iY composition is used only while the
/// cancellation amplification e^{2 Im z} stays below ~e^4.
const SERIES_IM_CEIL: f64 = 2.0;
/// Forward order recurrence for J is kept below this fraction of |z|.
const FORWARD_RECURRENCE_FRACTION: f64 = 0.5;

/// |Im z| ceiling for value routes.
pub const VALUE_IM_BOUND: f64 = 690.0;
/// |z| ceiling for value routes.
pub const VALUE_ABS_BOUND: f64 = 1e6;
/// |z| ceiling for ratio routes (continued-fraction iteration budget).
pub const RATIO_ABS_BOUND: f64 = 2e4;
/// Largest accepted integer order.
pub const ORDER_BOUND: u32 = 2048;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BesselError {
    /// Argument or order outside the documented safe domain, or a result
    /// whose magnitude is not representable in f64.
    #[error("{what}: argument z = {z} outside the supported domain")]
    OutOfRange { what: &'static str, z: Complex64 },
    /// z = 0 where the function or ratio has a pole/branch point.
    #[error("{what} is singular at z = 0")]
    SingularAtZero { what: &'static str },
    /// A continued fraction hit its iteration budget.
    #[error("{what} did not converge at z = {z}")]
    NoConvergence { what: &'static str, z: Complex64 },
    /// The denominator function vanishes at this argument.
    #[error("{what}: denominator vanishes at z = {z} (ratio pole)")]
    Pole { what: &'static str, z: Complex64 },
}

fn check_value_domain(what: &'static str, p: u32, z: Complex64) -> Result<(), BesselError> {
    if !z.is_finite()
        || z.im.abs() > VALUE_IM_BOUND
        || z.norm() > VALUE_ABS_BOUND
        || p > ORDER_BOUND
    {
        return Err(BesselError::OutOfRange { what, z });
    }
    Ok(())
}

fn ensure_finite(what: &'static str, v: Complex64, z: Complex64) -> Result<Complex64, BesselError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(BesselError::OutOfRange { what, z })
    }
}

/// Bessel function of the first kind, J_p(z), integer order p ≥ 0.
pub fn bessel_j(p: u32, z: Complex64) -> Result<Complex64, BesselError> {
    check_value_domain("J_p", p, z)?;
    if z.norm() <= SERIES_RADIUS {
        ensure_finite("J_p", series::j_series(p, z).to_c64(), z)
    } else {
        let v = j_large(p, z)?;
        ensure_finite("J_p", v, z)
    }
}

fn j_large(p: u32, z: Complex64) -> Result<Complex64, BesselError> {
    if z.re < 0.0 {
        // J_p(−z) = (−1)^p J_p(z); reflecting keeps both Hankel expansions
        // well inside their validity sectors.
        let v = j_large(p, -z)?;
        return Ok(if p % 2 == 0 { v } else { -v });
    }
    let j0 = (asymptotic::hankel1_large(0.0, z) + asymptotic::hankel2_large(0.0, z)) * 0.5;
    if p == 0 {
        return Ok(j0);
    }
    let j1 = (asymptotic::hankel1_large(1.0, z) + asymptotic::hankel2_large(1.0, z)) * 0.5;
    if p == 1 {
        return Ok(j1);
    }
    if (p as f64) <= FORWARD_RECURRENCE_FRACTION * z.norm() {
        let mut jm = j0;
        let mut jc = j1;
        for nu in 1..p {
            let jn = jc * (2.0 * nu as f64) / z - jm;
            jm = jc;
            jc = jn;
        }
        return Ok(jc);
    }
    // Above the oscillatory regime: anchor the top order with the continued
    // fraction, run the recurrence downward (Miller), and normalize against
    // the asymptotic J_0/J_1 — whichever the ladder says is larger.
    let f = cf::cf1_j_ratio(p as f64 - 1.0, z)?; // J_{p−1}/J_p
    let y_p = 1.0 / f;
    let mut upper = y_p; // ∝ J_ν+1 during the descent
    let mut lower = Complex64::new(1.0, 0.0); // ∝ J_ν
    let mut rescale = 1.0f64;
    for nu in (1..p).rev() {
        let ym = lower * (2.0 * nu as f64) / z - upper;
        upper = lower;
        lower = ym;
        if lower.norm() > 1e250 {
            upper /= 1e250;
            lower /= 1e250;
            rescale *= 1e250;
        }
    }
    // lower ∝ J_0, upper ∝ J_1
    let lambda = if upper.norm() > lower.norm() {
        j1 / upper
    } else {
        j0 / lower
    };
    Ok(y_p * lambda / rescale)
}

/// Hankel function of the first kind, H^{(1)}_p(z) = J_p(z) + iY_p(z).
pub fn hankel1(p: u32, z: Complex64) -> Result<Complex64, BesselError> {
    if z.re == 0.0 && z.im == 0.0 {
        return Err(BesselError::SingularAtZero { what: "H_p" });
    }
    check_value_domain("H_p", p, z)?;
    let v = if z.norm() <= SERIES_RADIUS {
        if z.im > SERIES_IM_CEIL {
            // deep upper half-plane: go through K_p(−iz), which is
            // cancellation-free there, then H_p = (2/π)(−i)^{p+1} K_p
            let w = Complex64::new(z.im, -z.re);
            let kp = cf::k_value_integer(p, w)?;
            kp * FRAC_2_PI * minus_i_pow(p + 1)
        } else {
            let j = series::j_series(p, z);
            let y = series::y_series(p, z);
            DdC { re: j.re.sub(y.im), im: j.im.add(y.re) }.to_c64()
        }
    } else {
        let (h0, h1) = hankel1_seeds_large(z);
        if p == 0 {
            h0
        } else {
            ladder_up(h0, h1, p, z)
        }
    };
    ensure_finite("H_p", v, z)
}

/// (H¹_0(z), H¹_1(z)) for |z| beyond the series radius. The one-exponential
/// expansion is only good to ~e^{−2|Im z|} once Re z < 0 (the resurgent
/// subdominant term switches on past the Stokes lines at arg z = ±π/2), so
/// the left half-plane reflects to the central sector instead:
///
///   Im z ≥ 0:  H¹_p(z) = −(−1)^p H²_p(−z)
///   Im z < 0:  H¹_p(z) = (−1)^p [2H¹_p(−z) + H²_p(−z)]
///
/// In both, −z sits where the expansions are ~e^{−2|z|} accurate, and the
/// combined term is recessive-plus-dominant — never a cancellation.
fn hankel1_seeds_large(z: Complex64) -> (Complex64, Complex64) {
    if z.re >= 0.0 {
        (
            asymptotic::hankel1_large(0.0, z),
            asymptotic::hankel1_large(1.0, z),
        )
    } else if z.im >= 0.0 {
        let w = -z;
        (
            -asymptotic::hankel2_large(0.0, w),
            asymptotic::hankel2_large(1.0, w),
        )
    } else {
        let w = -z;
        let c0 = 2.0 * asymptotic::hankel1_large(0.0, w) + asymptotic::hankel2_large(0.0, w);
        let c1 = 2.0 * asymptotic::hankel1_large(1.0, w) + asymptotic::hankel2_large(1.0, w);
        (c0, -c1)
    }
}

/// (−i)^k
fn minus_i_pow(k: u32) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    }
}

/// H_{ν+1} = (2ν/z)H_ν − H_{ν−1} from (H_0, H_1) up to H_p; stable because
/// Hankel magnitudes grow with the order.
fn ladder_up(h0: Complex64, h1: Complex64, p: u32, z: Complex64) -> Complex64 {
    let mut hm = h0;
    let mut hc = h1;
    for nu in 1..p {
        let hn = hc * (2.0 * nu as f64) / z - hm;
        hm = hc;
        hc = hn;
    }
    hc
}

/// J_p(z)/J_{p+1}(z), integer order.
pub fn ratio_j(p: u32, z: Complex64) -> Result<Complex64, BesselError> {
    ratio_j_real(p as f64, z)
}

/// J_ν(z)/J_{ν+1}(z) at real order ν ≥ 0 — the form the pencil assembly
/// needs, since the wavenumber it sweeps is a real variable.
///
/// Values at arguments close to a zero of J_{ν+1} are returned faithfully
/// (they are the correct ratios for the given floating-point z); only a
/// non-representable result is reported as [`BesselError::Pole`].
pub fn ratio_j_real(order: f64, z: Complex64) -> Result<Complex64, BesselError> {
    if z.re == 0.0 && z.im == 0.0 {
        return Err(BesselError::SingularAtZero { what: "J-ratio" });
    }
    if !z.is_finite() || !(order >= 0.0) || z.norm() > RATIO_ABS_BOUND {
        return Err(BesselError::OutOfRange { what: "J-ratio", z });
    }
    let f = cf::cf1_j_ratio(order, z)?;
    if f.is_finite() {
        Ok(f)
    } else {
        Err(BesselError::Pole { what: "J-ratio", z })
    }
}

/// H^{(1)}_p(z)/H^{(1)}_{p−1}(z), integer order p ≥ 1, any z ≠ 0 within the
/// documented bounds (all half-planes; routing picks a division-free path
/// where cancellation or underflow threatens).
pub fn ratio_h(p: u32, z: Complex64) -> Result<Complex64, BesselError> {
    if p == 0 {
        return Err(BesselError::OutOfRange { what: "H-ratio (needs p ≥ 1)", z });
    }
    if z.re == 0.0 && z.im == 0.0 {
        return Err(BesselError::SingularAtZero { what: "H-ratio" });
    }
    if !z.is_finite() || z.norm() > RATIO_ABS_BOUND {
        return Err(BesselError::OutOfRange { what: "H-ratio", z });
    }
    if z.im >= 0.0 && (z.norm() < 2.0 || z.im >= 1.0) {
        return ratio_h_real(p as f64, z);
    }
    let f = if z.norm() <= SERIES_RADIUS || z.re < 0.0 {
        // Series disc: J + iY is constructive for Im z < 0, so values divide
        // cleanly. Left half-plane beyond it: the reflected value route is
        // the accurate one; magnitudes stay representable while
        // |Im z| ≤ the value bound, and the domain check inside `hankel1`
        // reports the (deep lower-left) remainder honestly.
        hankel1(p, z)? / hankel1(p - 1, z)?
    } else {
        // right half-plane, |z| beyond the series radius: prefactor-stripped
        // asymptotic seeds + renormalized ladder, immune to the e^{±iz}
        // under/overflow that rules out the value route at large |Im z|
        let (s0, s1) = asymptotic::stripped_seeds(z);
        let mut sm = s0;
        let mut sc = s1;
        for nu in 1..p {
            let sn = sc * (2.0 * nu as f64) / z - sm;
            sm = sc;
            sc = sn;
            if sc.norm() > 1e250 {
                sm /= 1e250;
                sc /= 1e250;
            }
        }
        sc / sm
    };
    if f.is_finite() {
        Ok(f)
    } else {
        Err(BesselError::Pole { what: "H-ratio", z })
    }
}

/// H^{(1)}_p(z)/H^{(1)}_{p−1}(z) at real order p > 0 through the K-route
/// ratio ladder (never forms a Hankel value, so it is immune to the
/// e^{−Im z} underflow at pencil-sized arguments).
///
/// Domain: `Im z ≥ 0` and (`|z| < 2` or `Im z ≥ 1`) — see module docs.
pub fn ratio_h_real(p: f64, z: Complex64) -> Result<Complex64, BesselError> {
    if z.re == 0.0 && z.im == 0.0 {
        return Err(BesselError::SingularAtZero { what: "H-ratio" });
    }
    if !z.is_finite() || !(p > 0.0) || z.norm() > RATIO_ABS_BOUND {
        return Err(BesselError::OutOfRange { what: "H-ratio", z });
    }
    if !(z.im >= 0.0 && (z.norm() < 2.0 || z.im >= 1.0)) {
        return Err(BesselError::OutOfRange { what: "H-ratio K-route sector", z });
    }
    let w = Complex64::new(z.im, -z.re);
    let rho = cf::k_ratio(p, w)?;
    // H_p/H_{p−1} = −i K_p/K_{p−1}
    let f = Complex64::new(rho.im, -rho.re);
    if f.is_finite() {
        Ok(f)
    } else {
        Err(BesselError::Pole { what: "H-ratio", z })
    }
}
