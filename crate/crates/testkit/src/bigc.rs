//! Complex arithmetic over `astro_float::BigFloat` at a fixed working precision.
//!
//! Just enough surface for the series and quadrature oracles: field ops,
//! elementary functions on the real part, and exact conversion to/from f64.

use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use num_complex::Complex64;
use std::cell::RefCell;

/// Working precision in bits (~77 decimal digits). Large enough that the
/// worst series cancellation in the tested domain (|z| <= 50, so at most
/// ~e^100 between max term and value of J + iY) still leaves > 30 digits.
pub const PREC: usize = 256;

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constants cache"));
}

pub fn pi() -> BigFloat {
    CONSTS.with(|c| c.borrow_mut().pi(PREC, RM))
}

pub fn exp(x: &BigFloat) -> BigFloat {
    CONSTS.with(|c| x.exp(PREC, RM, &mut c.borrow_mut()))
}

pub fn ln(x: &BigFloat) -> BigFloat {
    CONSTS.with(|c| x.ln(PREC, RM, &mut c.borrow_mut()))
}

pub fn sin(x: &BigFloat) -> BigFloat {
    CONSTS.with(|c| x.sin(PREC, RM, &mut c.borrow_mut()))
}

pub fn cos(x: &BigFloat) -> BigFloat {
    CONSTS.with(|c| x.cos(PREC, RM, &mut c.borrow_mut()))
}

pub fn cosh(x: &BigFloat) -> BigFloat {
    CONSTS.with(|c| x.cosh(PREC, RM, &mut c.borrow_mut()))
}

pub fn atan(x: &BigFloat) -> BigFloat {
    CONSTS.with(|c| x.atan(PREC, RM, &mut c.borrow_mut()))
}

pub fn bf(x: f64) -> BigFloat {
    BigFloat::from_f64(x, PREC)
}

pub fn bf_i(n: i64) -> BigFloat {
    BigFloat::from_i64(n, PREC)
}

/// Truncating conversion back to f64 (error <= 1 ulp, immaterial for the
/// tolerances the oracles serve).
pub fn to_f64(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    if x.is_nan() {
        return f64::NAN;
    }
    if x.is_inf() {
        return if x.is_inf_pos() { f64::INFINITY } else { f64::NEG_INFINITY };
    }
    let (words, _nbits, sign, exp, _): (&[astro_float::Word], usize, Sign, i32, bool) =
        x.as_raw_parts().expect("finite number has raw parts");
    let top = words[words.len() - 1];
    let next = if words.len() >= 2 { words[words.len() - 2] } else { 0 };
    // Mantissa is a binary fraction in [1/2, 1); value = sign * frac * 2^exp.
    let frac = (top as f64) * 2f64.powi(-64) + (next as f64) * 2f64.powi(-128);
    let v = frac * 2f64.powi(exp);
    if sign == Sign::Neg {
        -v
    } else {
        v
    }
}

fn add(a: &BigFloat, b: &BigFloat) -> BigFloat {
    a.add(b, PREC, RM)
}

fn sub(a: &BigFloat, b: &BigFloat) -> BigFloat {
    a.sub(b, PREC, RM)
}

fn mul(a: &BigFloat, b: &BigFloat) -> BigFloat {
    a.mul(b, PREC, RM)
}

fn div(a: &BigFloat, b: &BigFloat) -> BigFloat {
    a.div(b, PREC, RM)
}

/// Complex number with BigFloat components.
#[derive(Clone, Debug)]
pub struct BigC {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl BigC {
    pub fn new(re: BigFloat, im: BigFloat) -> Self {
        Self { re, im }
    }

    pub fn zero() -> Self {
        Self::new(bf(0.0), bf(0.0))
    }

    pub fn one() -> Self {
        Self::new(bf(1.0), bf(0.0))
    }

    pub fn i() -> Self {
        Self::new(bf(0.0), bf(1.0))
    }

    pub fn from_c64(z: Complex64) -> Self {
        Self::new(bf(z.re), bf(z.im))
    }

    pub fn from_real(x: BigFloat) -> Self {
        Self::new(x, bf(0.0))
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(to_f64(&self.re), to_f64(&self.im))
    }

    pub fn add(&self, o: &BigC) -> BigC {
        BigC::new(add(&self.re, &o.re), add(&self.im, &o.im))
    }

    pub fn sub(&self, o: &BigC) -> BigC {
        BigC::new(sub(&self.re, &o.re), sub(&self.im, &o.im))
    }

    pub fn mul(&self, o: &BigC) -> BigC {
        BigC::new(
            sub(&mul(&self.re, &o.re), &mul(&self.im, &o.im)),
            add(&mul(&self.re, &o.im), &mul(&self.im, &o.re)),
        )
    }

    pub fn div(&self, o: &BigC) -> BigC {
        let den = add(&mul(&o.re, &o.re), &mul(&o.im, &o.im));
        let num = self.mul(&o.conj());
        BigC::new(div(&num.re, &den), div(&num.im, &den))
    }

    pub fn conj(&self) -> BigC {
        BigC::new(self.re.clone(), self.im.neg())
    }

    pub fn neg(&self) -> BigC {
        BigC::new(self.re.neg(), self.im.neg())
    }

    pub fn scale(&self, s: &BigFloat) -> BigC {
        BigC::new(mul(&self.re, s), mul(&self.im, s))
    }

    pub fn scale_f64(&self, s: f64) -> BigC {
        self.scale(&bf(s))
    }

    /// |self|^2 as a BigFloat.
    pub fn norm_sqr(&self) -> BigFloat {
        add(&mul(&self.re, &self.re), &mul(&self.im, &self.im))
    }

    pub fn abs(&self) -> BigFloat {
        self.norm_sqr().sqrt(PREC, RM)
    }

    /// Principal complex logarithm.
    pub fn ln(&self) -> BigC {
        let half = bf(0.5);
        let re = mul(&ln(&self.norm_sqr()), &half);
        BigC::new(re, self.arg())
    }

    /// Principal argument via atan with quadrant fixes.
    pub fn arg(&self) -> BigFloat {
        let x = &self.re;
        let y = &self.im;
        let zero = bf(0.0);
        if x.cmp(&zero) == Some(0) {
            // On the imaginary axis.
            let half_pi = mul(&pi(), &bf(0.5));
            return if y.cmp(&zero).unwrap_or(0) >= 0 { half_pi } else { half_pi.neg() };
        }
        let base = atan(&div(y, x));
        match x.cmp(&zero) {
            Some(c) if c > 0 => base,
            _ => {
                // Left half plane: shift by +/- pi toward the sign of y.
                if y.cmp(&zero).unwrap_or(0) >= 0 {
                    add(&base, &pi())
                } else {
                    sub(&base, &pi())
                }
            }
        }
    }

    /// e^self.
    pub fn exp(&self) -> BigC {
        let m = exp(&self.re);
        BigC::new(mul(&m, &cos(&self.im)), mul(&m, &sin(&self.im)))
    }

    /// self^a for real a (principal branch).
    pub fn powf(&self, a: f64) -> BigC {
        self.ln().scale_f64(a).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f64_roundtrip_is_faithful() {
        for &x in &[0.0, 1.0, -1.0, 3.25e-8, -7.1e22, 0.1, 123456.789] {
            let back = to_f64(&bf(x));
            assert_eq!(back, x, "roundtrip of {x}");
        }
    }

    #[test]
    fn complex_field_ops() {
        let a = BigC::from_c64(Complex64::new(1.5, -2.25));
        let b = BigC::from_c64(Complex64::new(-0.75, 4.0));
        let sum = a.add(&b).to_c64();
        assert_eq!(sum, Complex64::new(0.75, 1.75));
        let prod = a.mul(&b).to_c64();
        let want = Complex64::new(1.5, -2.25) * Complex64::new(-0.75, 4.0);
        assert!((prod - want).norm() < 1e-15);
        let q = a.div(&b).to_c64();
        let wq = Complex64::new(1.5, -2.25) / Complex64::new(-0.75, 4.0);
        assert!((q - wq).norm() < 1e-15);
    }

    #[test]
    fn exp_ln_and_arg_cover_all_quadrants() {
        for &(re, im) in &[(2.0, 3.0), (-2.0, 3.0), (-2.0, -3.0), (2.0, -3.0), (0.0, 5.0), (0.0, -5.0)] {
            let z = Complex64::new(re, im);
            let bz = BigC::from_c64(z);
            let back = bz.ln().exp().to_c64();
            assert!((back - z).norm() < 1e-14 * z.norm(), "exp(ln(z)) for {z}");
            let arg = to_f64(&bz.arg());
            assert!((arg - z.arg()).abs() < 1e-15, "arg for {z}: {arg} vs {}", z.arg());
        }
    }
}
