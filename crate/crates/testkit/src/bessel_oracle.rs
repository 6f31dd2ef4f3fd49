//! Arbitrary-precision reference evaluations of cylinder functions.
//!
//! Three independent routes, none shared with the production code paths:
//!
//! * `oracle_j` / `oracle_y` / `oracle_h1`: ascending power series at integer
//!   order, evaluated in 256-bit complex arithmetic so cancellation money is
//!   simply paid up front.
//! * `oracle_j_ratio`: the gamma-free quotient form
//!   J_nu/J_{nu+1} = (2(nu+1)/z) * S_nu/S_{nu+1} valid at any real order,
//!   where S_nu is the hypergeometric tail of the ascending series.
//! * `oracle_k` / `oracle_h1_ratio`: the integral
//!   K_nu(w) = int_0^inf exp(-w cosh t) cosh(nu t) dt  (Re w > 0),
//!   by trapezoidal quadrature with step halving; the integrand is even,
//!   entire, positive-kernel, and decays double-exponentially, so no
//!   cancellation occurs at any argument size.

use crate::bigc::{bf, bf_i, cosh, pi, to_f64, BigC, PREC};
use astro_float::{BigFloat, RoundingMode};
use num_complex::Complex64;

const RM: RoundingMode = RoundingMode::ToEven;
const MAX_TERMS: usize = 600;

/// Relative magnitude at which a series tail is considered dead at 256-bit
/// working precision.
fn tail_is_negligible(term: &BigFloat, scale: &BigFloat) -> bool {
    // |term| <= |scale| * 2^-240
    let t = term.exponent().unwrap_or(i32::MIN);
    let s = scale.exponent().unwrap_or(i32::MIN);
    t < s - 240
}

/// J_n(z) for integer n >= 0 by the ascending series
/// J_n(z) = sum_k (-1)^k (z/2)^{n+2k} / (k! (n+k)!).
pub fn oracle_j(n: u32, z: Complex64) -> Complex64 {
    oracle_j_big(n, &BigC::from_c64(z)).to_c64()
}

fn oracle_j_big(n: u32, z: &BigC) -> BigC {
    let half = z.scale_f64(0.5);
    let q = half.mul(&half); // (z/2)^2
    // term_0 = (z/2)^n / n!
    let mut term = BigC::one();
    for k in 1..=n as i64 {
        term = term.mul(&half);
        term = term.scale(&bf(1.0).div(&bf_i(k), PREC, RM));
    }
    let mut sum = term.clone();
    let mut max_abs = term.abs();
    for k in 1..MAX_TERMS as i64 {
        term = term.mul(&q).neg();
        let den = bf_i(k).mul(&bf_i(k + n as i64), PREC, RM);
        term = BigC::new(term.re.div(&den, PREC, RM), term.im.div(&den, PREC, RM));
        sum = sum.add(&term);
        let a = term.abs();
        if a.cmp(&max_abs).unwrap_or(0) > 0 {
            max_abs = a.clone();
        }
        if tail_is_negligible(&a, &max_abs) {
            return sum;
        }
    }
    panic!("J series did not converge for n={n}");
}

/// Y_n(z) for integer n >= 0 on the principal branch, via the logarithmic
/// series (DLMF 10.8.1):
/// (pi/2) Y_n = (ln(z/2) + gamma_E) J_n  - (1/2) sum_{k=0}^{n-1} (n-1-k)!/k! (z/2)^{2k-n}
///              - (1/2) sum_{k>=0} (-1)^k (H_k + H_{n+k}) / (k! (n+k)!) (z/2)^{2k+n}
/// with H_m the m-th harmonic number.
pub fn oracle_y(n: u32, z: Complex64) -> Complex64 {
    oracle_y_big(n, &BigC::from_c64(z)).to_c64()
}

fn oracle_y_big(n: u32, z: &BigC) -> BigC {
    let half = z.scale_f64(0.5);
    let q = half.mul(&half);
    let jn = oracle_j_big(n, z);

    // Euler-Mascheroni to full precision: gamma = lim (H_m - ln m); instead of
    // summing that slowly convergent limit, use the stored decimal literal.
    let gamma = BigFloat::parse(
        "5.77215664901532860606512090082402431042159335939923598805767234884867726777665e-1",
        astro_float::Radix::Dec,
        PREC,
        RM,
        &mut astro_float::Consts::new().unwrap(),
    );

    let log_part = half.ln().add(&BigC::from_real(gamma)).mul(&jn);

    // Finite sum of negative powers.
    let mut finite = BigC::zero();
    if n > 0 {
        // (z/2)^{2k-n} for k = 0..n-1; factorial fraction (n-1-k)!/k!
        let mut fact_num: Vec<BigFloat> = vec![bf(1.0); n as usize + 1];
        for m in 1..=n as usize {
            fact_num[m] = fact_num[m - 1].mul(&bf_i(m as i64), PREC, RM);
        }
        let inv_half = BigC::one().div(&half);
        let mut power = BigC::one();
        for _ in 0..n {
            power = power.mul(&inv_half); // (z/2)^{-n} after n steps
        }
        for k in 0..n as usize {
            let coeff = fact_num[n as usize - 1 - k].div(&fact_num[k], PREC, RM);
            finite = finite.add(&power.scale(&coeff));
            power = power.mul(&q); // raise exponent by 2
        }
        finite = finite.scale_f64(0.5);
    }

    // Harmonic-number series.
    let mut harm_k = bf(0.0);
    let mut harm_nk = bf(0.0);
    for m in 1..=n as i64 {
        harm_nk = harm_nk.add(&bf(1.0).div(&bf_i(m), PREC, RM), PREC, RM);
    }
    // term_0 = (H_0 + H_n) (z/2)^n / (0! n!)
    let mut base = BigC::one();
    let mut nfact = bf(1.0);
    for m in 1..=n as i64 {
        base = base.mul(&half);
        nfact = nfact.mul(&bf_i(m), PREC, RM);
    }
    base = BigC::new(base.re.div(&nfact, PREC, RM), base.im.div(&nfact, PREC, RM));
    let mut series = base.scale(&harm_k.add(&harm_nk, PREC, RM));
    let mut max_abs = series.abs();
    for k in 1..MAX_TERMS as i64 {
        base = base.mul(&q).neg();
        let den = bf_i(k).mul(&bf_i(k + n as i64), PREC, RM);
        base = BigC::new(base.re.div(&den, PREC, RM), base.im.div(&den, PREC, RM));
        harm_k = harm_k.add(&bf(1.0).div(&bf_i(k), PREC, RM), PREC, RM);
        harm_nk = harm_nk.add(&bf(1.0).div(&bf_i(k + n as i64), PREC, RM), PREC, RM);
        let term = base.scale(&harm_k.add(&harm_nk, PREC, RM));
        series = series.add(&term);
        let a = term.abs();
        if a.cmp(&max_abs).unwrap_or(0) > 0 {
            max_abs = a.clone();
        }
        if tail_is_negligible(&a, &max_abs) {
            break;
        }
    }
    series = series.scale_f64(0.5);

    let sum = log_part.sub(&finite).sub(&series);
    let two_over_pi = bf(2.0).div(&pi(), PREC, RM);
    sum.scale(&two_over_pi)
}

/// H^(1)_n(z) = J_n(z) + i Y_n(z) at integer order.
pub fn oracle_h1(n: u32, z: Complex64) -> Complex64 {
    let j = oracle_j_big(n, &BigC::from_c64(z));
    let y = oracle_y_big(n, &BigC::from_c64(z));
    j.add(&BigC::i().mul(&y)).to_c64()
}

/// J_nu(z)/J_{nu+1}(z) at any real order nu > -1, gamma-free:
/// with S_nu(z) = sum_k (-z^2/4)^k / (k! (nu+1)_k), the ratio is
/// (2(nu+1)/z) * S_nu / S_{nu+1}.
pub fn oracle_j_ratio(nu: f64, z: Complex64) -> Complex64 {
    let bz = BigC::from_c64(z);
    let s0 = hyper_tail(nu, &bz);
    let s1 = hyper_tail(nu + 1.0, &bz);
    let front = BigC::from_c64(Complex64::new(2.0 * (nu + 1.0), 0.0)).div(&bz);
    front.mul(&s0).div(&s1).to_c64()
}

fn hyper_tail(nu: f64, z: &BigC) -> BigC {
    let half = z.scale_f64(0.5);
    let q = half.mul(&half).neg(); // -(z/2)^2
    let mut term = BigC::one();
    let mut sum = BigC::one();
    let mut max_abs = sum.abs();
    let bnu = bf(nu);
    for k in 1..MAX_TERMS as i64 {
        let den = bf_i(k).mul(&bnu.add(&bf_i(k), PREC, RM), PREC, RM);
        term = term.mul(&q);
        term = BigC::new(term.re.div(&den, PREC, RM), term.im.div(&den, PREC, RM));
        sum = sum.add(&term);
        let a = term.abs();
        if a.cmp(&max_abs).unwrap_or(0) > 0 {
            max_abs = a.clone();
        }
        if tail_is_negligible(&a, &max_abs) {
            return sum;
        }
    }
    panic!("hypergeometric tail did not converge for nu={nu}");
}

/// K_nu(w) for real nu and Re w > 0 by trapezoidal quadrature of
/// int_0^inf exp(-w cosh t) cosh(nu t) dt with automatic step halving.
pub fn oracle_k(nu: f64, w: Complex64) -> Complex64 {
    assert!(w.re > 0.0, "K integral requires Re w > 0, got {w}");
    oracle_k_big(nu, &BigC::from_c64(w)).to_c64()
}

fn oracle_k_big(nu: f64, w: &BigC) -> BigC {
    // Upper limit: exp(-Re w cosh T + |nu| T) below 2^-280 relative to K ~ e^-Re w.
    let rw = to_f64(&w.re).max(1e-3);
    let target = 280.0 * std::f64::consts::LN_2 + nu.abs() * 10.0;
    let mut t_max = 4.0f64;
    while rw * (t_max.cosh() - 1.0) - nu.abs() * t_max < target {
        t_max += 0.5;
    }

    let integrand = |t: &BigFloat| -> BigC {
        let c = cosh(t);
        let e = w.scale(&c).neg().exp();
        let cn = cosh(&t.mul(&bf(nu), PREC, RM));
        e.scale(&cn)
    };

    // Trapezoid at step h over [0, t_max] (integrand even in t, so the
    // half-weight endpoint rule converges like the full-line rule).
    let mut h = 0.25f64;
    let mut n_pts = (t_max / h).ceil() as usize;
    let f0 = integrand(&bf(0.0));
    let mut acc = f0.scale_f64(0.5);
    for i in 1..=n_pts {
        acc = acc.add(&integrand(&bf(i as f64 * h)));
    }
    let mut value = acc.scale_f64(h);
    // Halve until stable to ~70 digits (each halving reuses midpoints only).
    for _ in 0..5 {
        let mut mid = BigC::zero();
        let n_mid = n_pts;
        for i in 0..n_mid {
            mid = mid.add(&integrand(&bf((i as f64 + 0.5) * h)));
        }
        let refined = value.scale_f64(0.5).add(&mid.scale_f64(h * 0.5));
        let diff = refined.sub(&value).abs();
        let scale = refined.abs();
        value = refined;
        h *= 0.5;
        n_pts *= 2;
        let d = diff.exponent().unwrap_or(i32::MIN);
        let s = scale.exponent().unwrap_or(0);
        if d < s - 235 {
            break;
        }
    }
    value
}

/// H^(1)_p(z) / H^(1)_{p-1}(z) at real order p, for Im z > 0, via the
/// Macdonald connection H^(1)_nu(z) = (2/pi)(-i)^{nu+1} K_nu(-iz):
/// the prefactors telescope to exactly -i * K_p(-iz)/K_{p-1}(-iz).
pub fn oracle_h1_ratio(p: f64, z: Complex64) -> Complex64 {
    assert!(z.im > 0.0, "H ratio oracle requires Im z > 0, got {z}");
    let w = Complex64::new(z.im, -z.re); // -i z
    let kp = oracle_k_big(p, &BigC::from_c64(w));
    let km = oracle_k_big(p - 1.0, &BigC::from_c64(w));
    let r = kp.div(&km);
    BigC::new(r.im.clone(), r.re.neg()).to_c64() // multiply by -i
}
