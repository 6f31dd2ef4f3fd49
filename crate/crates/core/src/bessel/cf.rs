//! Continued-fraction and small-argument kernels: the Wallis fraction for
//! J-ratios (modified Lentz) and the modified-Bessel-K machinery — Temme's
//! series for |w| < 2 and the Steed CF2 otherwise — that backs every Hankel
//! ratio through H_ν(z) = (2/π)(−i)^{ν+1} K_ν(−iz).
//!
//! Working in K instead of H = J + iY sidesteps the catastrophic J/iY
//! cancellation deep in the upper half-plane: K_ν(w) is single-signed for
//! Re w > 0, and the ratio forms here never materialize e^{−w}, so nothing
//! under- or overflows even at Re w ≈ 800.

use super::BesselError;
use num_complex::Complex64;
use std::f64::consts::PI;

const FPMIN: f64 = 1e-290;
const EPS: f64 = 1e-16;
const CF1_MAX_ITER: usize = 100_000;
const CF2_MAX_ITER: usize = 10_000;

/// Taylor coefficients of 1/Γ(1+x) about x = 0; index k holds the x^k
/// coefficient. Truncation error < 1e-25 for |x| ≤ 1/2.
const RECIP_GAMMA_TAYLOR: [f64; 27] = [
    1.0,
    0.5772156649015329,
    -0.6558780715202539,
    -0.04200263503409524,
    0.16653861138229148,
    -0.04219773455554433,
    -0.009621971527876973,
    0.0072189432466631,
    -0.0011651675918590652,
    -0.00021524167411495098,
    0.0001280502823881162,
    -2.013485478078824e-05,
    -1.2504934821426706e-06,
    1.133027231981696e-06,
    -2.056338416977607e-07,
    6.116095104481416e-09,
    5.002007644469223e-09,
    -1.18127457048702e-09,
    1.0434267116911005e-10,
    7.782263439905071e-12,
    -3.696805618642206e-12,
    5.100370287454476e-13,
    -2.0583260535665066e-14,
    -5.348122539423018e-15,
    1.2267786282382608e-15,
    -1.1812593016974588e-16,
    1.1866922547516004e-18,
];

/// Temme's auxiliary quotients at order μ, |μ| ≤ 1/2:
/// gam1 = [1/Γ(1−μ) − 1/Γ(1+μ)]/(2μ), gam2 = [1/Γ(1−μ) + 1/Γ(1+μ)]/2,
/// gampl = 1/Γ(1+μ), gammi = 1/Γ(1−μ). The odd/even split avoids the μ → 0
/// cancellation in gam1.
fn recip_gamma_combo(mu: f64) -> (f64, f64, f64, f64) {
    let mu2 = mu * mu;
    let mut odd = 0.0; // Σ_{k odd} a_k μ^{k−1}
    let mut even = 0.0; // Σ_{k even} a_k μ^k
    let mut pow = 1.0; // μ^{k−1} for odd k, tracks μ² steps
    let mut k = 1;
    while k < RECIP_GAMMA_TAYLOR.len() {
        odd += RECIP_GAMMA_TAYLOR[k] * pow;
        if k + 1 < RECIP_GAMMA_TAYLOR.len() {
            even += RECIP_GAMMA_TAYLOR[k + 1] * pow * mu2;
        }
        pow *= mu2;
        k += 2;
    }
    let gam1 = -odd;
    let gam2 = 1.0 + even;
    let gampl = gam2 - mu * gam1;
    let gammi = gam2 + mu * gam1;
    (gam1, gam2, gampl, gammi)
}

/// J_ν(z)/J_{ν+1}(z) by modified Lentz on
/// 2(ν+1)/z − 1/(2(ν+2)/z − 1/(⋯)). Converges for any z ≠ 0; the iteration
/// count scales with |z|, which sets the practical |z| ceiling documented in
/// the module root.
pub(crate) fn cf1_j_ratio(order: f64, z: Complex64) -> Result<Complex64, BesselError> {
    let two_over_z = Complex64::new(2.0, 0.0) / z;
    let b = |k: usize| two_over_z * (order + 1.0 + k as f64);
    let tiny = Complex64::new(FPMIN, 0.0);

    let mut f = b(0);
    if f.norm() < FPMIN {
        f = tiny;
    }
    let mut c = f;
    let mut d = Complex64::new(0.0, 0.0);
    for k in 1..=CF1_MAX_ITER {
        let bk = b(k);
        d = bk - d;
        if d.norm() < FPMIN {
            d = tiny;
        }
        c = bk - 1.0 / c;
        if c.norm() < FPMIN {
            c = tiny;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).norm() < EPS {
            return Ok(f);
        }
    }
    Err(BesselError::NoConvergence { what: "J-ratio continued fraction", z })
}

/// Steed's CF2 for K (Numerical Recipes' `bessik`, complexified). Returns
/// (h, s) with
///
/// ```text
/// K_μ(w)      = sqrt(π/(2w)) e^{−w} / s
/// K_{μ+1}/K_μ = (μ + w + 1/2 − h)/w
/// ```
///
/// Reliable for Re w ≥ 1 with |w| ≥ 2; |μ| ≤ 1/2.
pub(crate) fn cf2_k(mu: f64, w: Complex64) -> Result<(Complex64, Complex64), BesselError> {
    let a1 = 0.25 - mu * mu;
    let mut b = (w + 1.0) * 2.0;
    let tiny = Complex64::new(FPMIN, 0.0);
    let mut d = 1.0 / b;
    let mut delh = d;
    let mut h = d;
    let mut q1 = Complex64::new(0.0, 0.0);
    let mut q2 = Complex64::new(1.0, 0.0);
    let mut q = Complex64::new(a1, 0.0);
    let mut c = a1;
    let mut a = -a1;
    let mut s = q * delh + 1.0;
    for i in 2..=CF2_MAX_ITER {
        a -= (2 * (i - 1)) as f64;
        c = -a * c / i as f64;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = b + a * d;
        if d.norm() < FPMIN {
            d = tiny;
        }
        d = 1.0 / d;
        delh = (b * d - 1.0) * delh;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).norm() <= EPS {
            return Ok((h * a1, s));
        }
    }
    Err(BesselError::NoConvergence { what: "K continued fraction (CF2)", z: w })
}

/// Temme's series for (K_μ(w), K_{μ+1}(w)); |w| ≤ 2, |μ| ≤ 1/2.
pub(crate) fn temme_k(mu: f64, w: Complex64) -> Result<(Complex64, Complex64), BesselError> {
    let mu2 = mu * mu;
    let x2 = w * 0.5;
    let pimu = PI * mu;
    let fact = if pimu.abs() < 1e-30 { 1.0 } else { pimu / pimu.sin() };
    let d = -x2.ln();
    let e1 = d * mu;
    let fact2 = if e1.norm() < 1e-8 {
        e1 * e1 / 6.0 + 1.0
    } else {
        e1.sinh() / e1
    };
    let (gam1, gam2, gampl, gammi) = recip_gamma_combo(mu);
    let mut ff = (e1.cosh() * gam1 + d * fact2 * gam2) * fact;
    let mut sum = ff;
    let e = e1.exp();
    let mut p = e * (0.5 / gampl);
    let mut q = 0.5 / (e * gammi);
    let mut cterm = Complex64::new(1.0, 0.0);
    let x4 = x2 * x2;
    let mut sum1 = p;
    for i in 1..=200 {
        let fi = i as f64;
        ff = (ff * fi + p + q) / (fi * fi - mu2);
        cterm = cterm * x4 / fi;
        p /= fi - mu;
        q /= fi + mu;
        let del = cterm * ff;
        sum += del;
        sum1 += cterm * (p - ff * fi);
        if del.norm() < sum.norm() * EPS {
            return Ok((sum, sum1 * (2.0 / w)));
        }
    }
    Err(BesselError::NoConvergence { what: "K small-argument series", z: w })
}

/// K_{μ+1}(w)/K_μ(w) with the route picked by |w|.
fn base_rho(mu: f64, w: Complex64) -> Result<Complex64, BesselError> {
    if w.norm() < 2.0 {
        let (kmu, kmu1) = temme_k(mu, w)?;
        Ok(kmu1 / kmu)
    } else {
        let (h, _) = cf2_k(mu, w)?;
        Ok((h * (-1.0) + mu + 0.5 + w) / w)
    }
}

/// K_p(w)/K_{p−1}(w) for real p > 0 via one base ratio at |μ| ≤ 1/2 plus the
/// upward ratio ladder ρ_{ν+1} = 2ν/w + 1/ρ_ν. Never forms a K value, so the
/// result survives arguments where e^{−w} itself would underflow.
pub(crate) fn k_ratio(p: f64, w: Complex64) -> Result<Complex64, BesselError> {
    debug_assert!(p > 0.0);
    let ell = (p + 0.5).floor() as i64;
    if ell == 0 {
        // 0 < p < 1/2: K_{p−1} = K_{1−p} by evenness, then one recurrence step
        // gives K_p/K_{1−p} = 1/(ρ_{p+1} − 2p/w).
        let rho = base_rho(p, w)?;
        return Ok(1.0 / (rho - 2.0 * p / w));
    }
    let mu = p - ell as f64;
    let mut rho = base_rho(mu, w)?;
    let mut nu = mu + 1.0;
    for _ in 1..ell {
        rho = 2.0 * nu / w + 1.0 / rho;
        nu += 1.0;
    }
    Ok(rho)
}

/// K_p(w) at integer order by CF2 seeds at μ = 0 and the upward value ladder
/// K_{ν+1} = (2ν/w)K_ν + K_{ν−1} (stable: K grows with order).
pub(crate) fn k_value_integer(p: u32, w: Complex64) -> Result<Complex64, BesselError> {
    let (h, s) = cf2_k(0.0, w)?;
    let k0 = (Complex64::new(PI, 0.0) / (w * 2.0)).sqrt() * (-w).exp() / s;
    if p == 0 {
        return Ok(k0);
    }
    let k1 = k0 * (h * (-1.0) + 0.5 + w) / w;
    let mut km = k0;
    let mut kc = k1;
    for nu in 1..p {
        let kn = kc * (2.0 * nu as f64) / w + km;
        km = kc;
        kc = kn;
    }
    Ok(kc)
}
