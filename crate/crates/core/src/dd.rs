//! Double-double arithmetic for the power-series Bessel routes.
//!
//! A [`Dd`] is the unevaluated sum `hi + lo` of two doubles with
//! `|lo| <= ulp(hi)/2`, carrying roughly 106 significand bits. The ascending
//! series for J and Y alternate in sign and their partial sums transiently
//! grow like `e^|z|` before collapsing to an O(1) result, so plain f64 runs
//! out of significance near |z| ~ 8. Double-double keeps ~15 spare digits
//! through the worst cancellation the series routes accept (|z| <= 17).
//!
//! Only the handful of operations the series evaluators need are implemented;
//! this is not a general extended-precision library.

use num_complex::Complex64;

/// Error-free sum: `(s, e)` with `s = fl(a + b)` and `a + b = s + e` exactly.
#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

/// Error-free sum assuming `|a| >= |b|`.
#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

/// Error-free product via FMA: `a * b = p + e` exactly.
#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, f64::mul_add(a, b, -p))
}

/// Unevaluated double-double sum `hi + lo`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    /// Raw constructor; `hi`/`lo` must already be a normalized pair
    /// (used for compile-time constants split with extra precision).
    pub const fn raw(hi: f64, lo: f64) -> Dd {
        Dd { hi, lo }
    }

    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Dd {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            self.neg()
        } else {
            self
        }
    }

    pub fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }

    pub fn add(self, o: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, o.hi);
        let (t1, t2) = two_sum(self.lo, o.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        Dd { hi, lo }
    }

    pub fn sub(self, o: Dd) -> Dd {
        self.add(o.neg())
    }

    pub fn mul(self, o: Dd) -> Dd {
        let (p1, p2) = two_prod(self.hi, o.hi);
        let p2 = p2 + (self.hi * o.lo + self.lo * o.hi);
        let (hi, lo) = quick_two_sum(p1, p2);
        Dd { hi, lo }
    }

    pub fn mul_f64(self, x: f64) -> Dd {
        let (p1, p2) = two_prod(self.hi, x);
        let (hi, lo) = quick_two_sum(p1, p2 + self.lo * x);
        Dd { hi, lo }
    }

    /// Long division: three quotient corrections give a full dd-accurate quotient.
    pub fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self.sub(o.mul_f64(q1));
        let q2 = r.hi / o.hi;
        let r = r.sub(o.mul_f64(q2));
        let q3 = r.hi / o.hi;
        let (s, e) = quick_two_sum(q1, q2);
        let (hi, lo) = quick_two_sum(s, e + q3);
        Dd { hi, lo }
    }

    pub fn div_f64(self, x: f64) -> Dd {
        self.div(Dd::from_f64(x))
    }
}

/// Complex number with double-double components.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct DdC {
    pub re: Dd,
    pub im: Dd,
}

impl DdC {
    pub fn from_c64(z: Complex64) -> DdC {
        DdC { re: Dd::from_f64(z.re), im: Dd::from_f64(z.im) }
    }

    pub fn from_f64(x: f64) -> DdC {
        DdC { re: Dd::from_f64(x), im: Dd::ZERO }
    }

    pub fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn add(self, o: DdC) -> DdC {
        DdC { re: self.re.add(o.re), im: self.im.add(o.im) }
    }

    pub fn sub(self, o: DdC) -> DdC {
        DdC { re: self.re.sub(o.re), im: self.im.sub(o.im) }
    }

    pub fn mul(self, o: DdC) -> DdC {
        DdC {
            re: self.re.mul(o.re).sub(self.im.mul(o.im)),
            im: self.re.mul(o.im).add(self.im.mul(o.re)),
        }
    }

    pub fn mul_dd(self, s: Dd) -> DdC {
        DdC { re: self.re.mul(s), im: self.im.mul(s) }
    }

    pub fn mul_f64(self, x: f64) -> DdC {
        DdC { re: self.re.mul_f64(x), im: self.im.mul_f64(x) }
    }

    pub fn div_f64(self, x: f64) -> DdC {
        DdC { re: self.re.div_f64(x), im: self.im.div_f64(x) }
    }

    /// Smith's algorithm, so `1/(tiny + tiny*i)` survives without the
    /// intermediate `re^2 + im^2` underflowing.
    pub fn div(self, o: DdC) -> DdC {
        if o.re.abs().hi >= o.im.abs().hi {
            let t = o.im.div(o.re);
            let den = o.re.add(o.im.mul(t));
            DdC {
                re: self.re.add(self.im.mul(t)).div(den),
                im: self.im.sub(self.re.mul(t)).div(den),
            }
        } else {
            let t = o.re.div(o.im);
            let den = o.im.add(o.re.mul(t));
            DdC {
                re: self.re.mul(t).add(self.im).div(den),
                im: self.im.mul(t).sub(self.re).div(den),
            }
        }
    }

    /// Crude magnitude estimate at f64 accuracy (enough for convergence tests).
    pub fn mag(self) -> f64 {
        self.re.hi.hypot(self.im.hi)
    }
}
