//! Ascending power series for J_n and Y_n at complex argument, summed in
//! double-double precision.
//!
//! The series partial sums grow like `e^|z|` before cancelling down to the
//! O(1) result, so the ~32 dd digits keep full f64 accuracy up to the
//! routing radius |z| <= 17 (worst transient ~ e^17 ~ 2.4e7, i.e. 25 bits of
//! cancellation, leaving ~80 significant bits).
//!
//! `ln(z/2)` inside the Y series is evaluated in plain f64 and promoted; its
//! 1-ulp rounding is amplified by at most ~e^4 through the `J + iY`
//! composition on the routes that reach here (see `bessel` module docs), so
//! the final Hankel values stay well inside the 1e-10 oracle tolerance.

use crate::dd::{Dd, DdC};
use num_complex::Complex64;

const PI_DD: Dd = Dd::raw(3.141592653589793, 1.2246467991473532e-16);
const EULER_GAMMA_DD: Dd = Dd::raw(0.5772156649015329, -4.942915152430645e-18);

const MAX_TERMS: usize = 400;
/// Relative noise floor of a dd accumulation, measured against the largest
/// partial sum (the cancellation-aware convergence test).
const TAIL_EPS: f64 = 1e-33;

/// J_n(z) = Σ_{k>=0} (−1)^k (z/2)^{n+2k} / (k! (n+k)!).
pub(crate) fn j_series(n: u32, z: Complex64) -> DdC {
    let half = DdC::from_c64(z * 0.5);
    let q = half.mul(half);
    // t_0 = (z/2)^n / n!, interleaved so partial products stay near the result scale
    let mut t = DdC::from_f64(1.0);
    for j in 1..=n {
        t = t.mul(half).div_f64(j as f64);
    }
    let mut sum = t;
    let mut peak = t.mag();
    for k in 1..=MAX_TERMS {
        t = t.mul(q).div_f64(-((k * (n as usize + k)) as f64));
        sum = sum.add(t);
        peak = peak.max(sum.mag());
        if t.mag() <= TAIL_EPS * peak {
            break;
        }
    }
    sum
}

/// Y_n(z) from the standard logarithmic series
///
/// ```text
/// Y_n = (2/π) ln(z/2) J_n
///     − (1/π) Σ_{k=0}^{n−1} (n−1−k)!/k! (z/2)^{2k−n}
///     − (1/π) Σ_{k>=0} (−1)^k [ψ(k+1)+ψ(n+k+1)] (z/2)^{n+2k} / (k!(n+k)!)
/// ```
///
/// with the principal log branch and ψ(m+1) = −γ + Σ_{j<=m} 1/j.
pub(crate) fn y_series(n: u32, z: Complex64) -> DdC {
    let halfc = z * 0.5;
    let half = DdC::from_c64(halfc);
    let q = half.mul(half);

    let mut acc = DdC::from_c64(halfc.ln()).mul(j_series(n, z)).mul_f64(2.0);

    if n >= 1 {
        // v_0 = (n−1)! (z/2)^{−n}, again interleaved against over/underflow
        let inv_half = DdC::from_f64(1.0).div(half);
        let mut v = inv_half;
        for j in 1..n {
            v = v.mul(inv_half).mul_f64(j as f64);
        }
        let mut fin = v;
        for k in 1..(n as usize) {
            v = v.mul(q).div_f64(((n as usize - k) * k) as f64);
            fin = fin.add(v);
        }
        acc = acc.sub(fin);
    }

    // digamma-weighted companion of the J series
    let mut t = DdC::from_f64(1.0);
    for j in 1..=n {
        t = t.mul(half).div_f64(j as f64);
    }
    let mut h_k = Dd::ZERO; // H_0
    let mut h_nk = Dd::ZERO; // becomes H_n
    for j in 1..=n {
        h_nk = h_nk.add(Dd::ONE.div_f64(j as f64));
    }
    let two_gamma = EULER_GAMMA_DD.mul_f64(2.0);
    let mut inf = t.mul_dd(h_k.add(h_nk).sub(two_gamma));
    let mut peak = inf.mag();
    for k in 1..=MAX_TERMS {
        t = t.mul(q).div_f64(-((k * (n as usize + k)) as f64));
        h_k = h_k.add(Dd::ONE.div_f64(k as f64));
        h_nk = h_nk.add(Dd::ONE.div_f64((n as usize + k) as f64));
        let term = t.mul_dd(h_k.add(h_nk).sub(two_gamma));
        inf = inf.add(term);
        peak = peak.max(inf.mag());
        if term.mag() <= TAIL_EPS * peak {
            break;
        }
    }
    acc = acc.sub(inf);

    let inv_pi = Dd::ONE.div(PI_DD);
    acc.mul_dd(inv_pi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use parares_testkit::{oracle_j, oracle_y};

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm().max(1e-300)
    }

    #[test]
    fn j_series_matches_oracle_across_quadrants() {
        let pts = [
            Complex64::new(0.3, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(4.0, 3.0),
            Complex64::new(-5.0, 2.0),
            Complex64::new(-8.0, -9.0),
            Complex64::new(0.1, -12.0),
            Complex64::new(12.0, 12.0), // |z| ≈ 17, worst cancellation accepted
        ];
        for &z in &pts {
            for n in [0u32, 1, 2, 5, 9] {
                let got = j_series(n, z).to_c64();
                let want = oracle_j(n, z);
                assert!(
                    rel(got, want) < 1e-13,
                    "J_{n}({z}) = {got}, oracle {want}"
                );
            }
        }
    }

    #[test]
    fn j_series_is_exact_at_zero() {
        let z = Complex64::new(0.0, 0.0);
        assert_eq!(j_series(0, z).to_c64(), Complex64::new(1.0, 0.0));
        assert_eq!(j_series(1, z).to_c64(), Complex64::new(0.0, 0.0));
        assert_eq!(j_series(7, z).to_c64(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn y_series_matches_oracle() {
        let pts = [
            Complex64::new(0.5, 0.3),
            Complex64::new(2.0, -1.0),
            Complex64::new(7.0, -2.0),
            Complex64::new(-3.0, 4.0),
            Complex64::new(10.0, -10.0),
        ];
        for &z in &pts {
            for n in [0u32, 1, 3, 5] {
                let got = y_series(n, z).to_c64();
                let want = oracle_y(n, z);
                assert!(
                    rel(got, want) < 1e-12,
                    "Y_{n}({z}) = {got}, oracle {want}"
                );
            }
        }
    }

    #[test]
    fn y_series_keeps_precision_at_the_routing_radius() {
        // Im z < 0 at |z| near 17 is the deepest the Hankel route leans on
        // the series; the composition J + iY is cancellation-free there but
        // each part must individually carry full accuracy.
        let z = Complex64::new(9.0, -14.0);
        for n in [0u32, 1, 4, 8] {
            let got = y_series(n, z).to_c64();
            let want = oracle_y(n, z);
            assert!(rel(got, want) < 1e-12, "Y_{n}({z}) = {got}, oracle {want}");
        }
    }
}
