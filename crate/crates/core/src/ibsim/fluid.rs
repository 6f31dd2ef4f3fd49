//! Pseudo-spectral incompressible flow on a periodic square.
//!
//! The velocity lives on a uniform `g × g` grid and is advanced by a
//! first-order splitting: explicit advection in rotational form (dealiased by
//! the two-thirds rule), an exact Leray projection in Fourier space, and
//! viscosity applied through the integrating factor `exp(−ν|k|² dt)`.  The
//! viscous half is therefore unconditionally stable and a single Fourier mode
//! with no nonlinear feedback decays by precisely that factor each step; the
//! explicit advection half is what the caller's time-step bound must respect.
//!
//! Nyquist lines (`|m| = g/2`) are annihilated every step: their derivative is
//! sign-ambiguous on a real grid, and keeping them out of the state lets the
//! projection, the spectral derivatives, and the divergence diagnostic agree
//! exactly, so a projected field measures divergence-free to rounding.

use super::SimError;
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

/// Planned 1-D transforms plus the scratch needed to run them over both axes
/// of a square field.
struct Spectral {
    n: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    scratch: Vec<Complex64>,
    tmp: Vec<Complex64>,
}

impl Spectral {
    fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(n);
        let inv = planner.plan_fft_inverse(n);
        let scratch_len = fwd
            .get_inplace_scratch_len()
            .max(inv.get_inplace_scratch_len());
        Spectral {
            n,
            fwd,
            inv,
            scratch: vec![Complex64::new(0.0, 0.0); scratch_len],
            tmp: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    /// In-place 2-D transform: rows, then columns via transpose.  The inverse
    /// direction includes the 1/n² normalization.
    fn transform2d(&mut self, f: &mut [Complex64], forward: bool) {
        let n = self.n;
        debug_assert_eq!(f.len(), n * n);
        let op = if forward {
            self.fwd.clone()
        } else {
            self.inv.clone()
        };
        for row in f.chunks_exact_mut(n) {
            op.process_with_scratch(row, &mut self.scratch);
        }
        for j in 0..n {
            for i in 0..n {
                self.tmp[i * n + j] = f[j * n + i];
            }
        }
        for row in self.tmp.chunks_exact_mut(n) {
            op.process_with_scratch(row, &mut self.scratch);
        }
        for i in 0..n {
            for j in 0..n {
                f[j * n + i] = self.tmp[i * n + j];
            }
        }
        if !forward {
            let s = 1.0 / (n * n) as f64;
            for z in f.iter_mut() {
                *z *= s;
            }
        }
    }
}

/// Incompressible velocity field on a `g × g` periodic grid of side `l`.
///
/// Fields are row-major with the row index along y, matching the spreading
/// and interpolation routines.
pub struct FluidGrid {
    g: usize,
    l: f64,
    nu: f64,
    u: Vec<f64>,
    v: Vec<f64>,
    spec: Spectral,
    /// Signed wavenumber 2π m / l for each 1-D index (Nyquist kept at +g/2;
    /// only used where the Nyquist line has already been zeroed).
    wave: Vec<f64>,
    /// Same, but zero on the Nyquist line: the multiplier for derivatives.
    deriv: Vec<f64>,
    /// Two-thirds dealias mask per 1-D index.
    keep: Vec<bool>,
    /// exp(−ν k² dt) per 1-D index, cached for the most recent dt.
    visc1d: Vec<f64>,
    visc_dt: f64,
    bu: Vec<Complex64>,
    bv: Vec<Complex64>,
    bw: Vec<Complex64>,
    bnx: Vec<Complex64>,
    bny: Vec<Complex64>,
    bfx: Vec<Complex64>,
    bfy: Vec<Complex64>,
}

impl FluidGrid {
    /// A quiescent grid.  `g` must be even and at least 8 so the dealias mask
    /// and Nyquist handling are meaningful; `l` and `nu` must be positive.
    pub fn new(g: usize, l: f64, nu: f64) -> Result<Self, SimError> {
        if g < 8 || g % 2 != 0 {
            return Err(SimError::Config {
                what: format!("grid size must be even and at least 8, got {g}"),
            });
        }
        if !(l > 0.0 && l.is_finite()) {
            return Err(SimError::Config {
                what: format!("domain side must be positive, got {l}"),
            });
        }
        if !(nu > 0.0 && nu.is_finite()) {
            return Err(SimError::Config {
                what: format!("viscosity must be positive, got {nu}"),
            });
        }
        let half = g / 2;
        let mut wave = vec![0.0; g];
        let mut deriv = vec![0.0; g];
        let mut keep = vec![false; g];
        for (i, ((w, d), k)) in wave
            .iter_mut()
            .zip(deriv.iter_mut())
            .zip(keep.iter_mut())
            .enumerate()
        {
            let m = if i <= half {
                i as i64
            } else {
                i as i64 - g as i64
            };
            *w = std::f64::consts::TAU * m as f64 / l;
            *d = if i == half { 0.0 } else { *w };
            *k = 3 * m.unsigned_abs() as usize <= g;
        }
        let zeros = vec![Complex64::new(0.0, 0.0); g * g];
        Ok(FluidGrid {
            g,
            l,
            nu,
            u: vec![0.0; g * g],
            v: vec![0.0; g * g],
            spec: Spectral::new(g),
            wave,
            deriv,
            keep,
            visc1d: vec![1.0; g],
            visc_dt: f64::NAN,
            bu: zeros.clone(),
            bv: zeros.clone(),
            bw: zeros.clone(),
            bnx: zeros.clone(),
            bny: zeros.clone(),
            bfx: zeros.clone(),
            bfy: zeros,
        })
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn l(&self) -> f64 {
        self.l
    }

    /// Mesh width.
    pub fn h(&self) -> f64 {
        self.l / self.g as f64
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn u(&self) -> &[f64] {
        &self.u
    }

    pub fn v(&self) -> &[f64] {
        &self.v
    }

    /// Overwrites the velocity field.  The caller is responsible for handing
    /// in a discretely divergence-free field; the first step strips Nyquist
    /// content but does not re-project the initial data.
    pub fn set_velocity(&mut self, u: &[f64], v: &[f64]) -> Result<(), SimError> {
        let nn = self.g * self.g;
        if u.len() != nn || v.len() != nn {
            return Err(SimError::Config {
                what: format!(
                    "velocity fields must have {} entries, got {} and {}",
                    nn,
                    u.len(),
                    v.len()
                ),
            });
        }
        self.u.copy_from_slice(u);
        self.v.copy_from_slice(v);
        Ok(())
    }

    /// Largest pointwise speed, the quantity the blow-up guard watches.
    pub fn max_speed(&self) -> f64 {
        self.u
            .iter()
            .zip(&self.v)
            .map(|(a, b)| a.hypot(*b))
            .fold(0.0, f64::max)
    }

    /// One splitting step under the body force (`fx`, `fy`): explicit
    /// rotational-form advection and forcing, Leray projection, then the
    /// exact viscous factor.
    pub fn step(&mut self, fx: &[f64], fy: &[f64], dt: f64) {
        let n = self.g;
        let nn = n * n;
        assert_eq!(fx.len(), nn, "fx must be a g × g field");
        assert_eq!(fy.len(), nn, "fy must be a g × g field");
        assert!(dt > 0.0 && dt.is_finite(), "dt must be positive");

        if dt != self.visc_dt {
            for (e, w) in self.visc1d.iter_mut().zip(&self.wave) {
                *e = (-self.nu * w * w * dt).exp();
            }
            self.visc_dt = dt;
        }

        for i in 0..nn {
            self.bu[i] = Complex64::new(self.u[i], 0.0);
            self.bv[i] = Complex64::new(self.v[i], 0.0);
        }
        self.spec.transform2d(&mut self.bu, true);
        self.spec.transform2d(&mut self.bv, true);

        // Vorticity ω = ∂v/∂x − ∂u/∂y, back to physical space.
        for iy in 0..n {
            let ky = self.deriv[iy];
            for ix in 0..n {
                let idx = iy * n + ix;
                let d = self.deriv[ix] * self.bv[idx] - ky * self.bu[idx];
                self.bw[idx] = Complex64::new(-d.im, d.re);
            }
        }
        self.spec.transform2d(&mut self.bw, false);

        // Rotational form: (u·∇)u = ω ẑ × u + ∇(|u|²/2), and the gradient
        // part is annihilated by the projection, so only ω(−v, u) is needed.
        for i in 0..nn {
            let w = self.bw[i].re;
            self.bnx[i] = Complex64::new(-w * self.v[i], 0.0);
            self.bny[i] = Complex64::new(w * self.u[i], 0.0);
        }
        self.spec.transform2d(&mut self.bnx, true);
        self.spec.transform2d(&mut self.bny, true);

        for i in 0..nn {
            self.bfx[i] = Complex64::new(fx[i], 0.0);
            self.bfy[i] = Complex64::new(fy[i], 0.0);
        }
        self.spec.transform2d(&mut self.bfx, true);
        self.spec.transform2d(&mut self.bfy, true);

        let half = n / 2;
        for iy in 0..n {
            let ky = self.wave[iy];
            let ey = self.visc1d[iy];
            let keep_y = self.keep[iy];
            for ix in 0..n {
                let idx = iy * n + ix;
                if ix == half || iy == half {
                    self.bu[idx] = Complex64::new(0.0, 0.0);
                    self.bv[idx] = Complex64::new(0.0, 0.0);
                    continue;
                }
                let kx = self.wave[ix];
                let adv = if keep_y && self.keep[ix] { 1.0 } else { 0.0 };
                let mut wx = self.bu[idx] + (self.bfx[idx] - self.bnx[idx] * adv) * dt;
                let mut wy = self.bv[idx] + (self.bfy[idx] - self.bny[idx] * adv) * dt;
                let k2 = kx * kx + ky * ky;
                if k2 > 0.0 {
                    let d = (wx * kx + wy * ky) / k2;
                    wx -= d * kx;
                    wy -= d * ky;
                }
                let e = ey * self.visc1d[ix];
                self.bu[idx] = wx * e;
                self.bv[idx] = wy * e;
            }
        }

        self.spec.transform2d(&mut self.bu, false);
        self.spec.transform2d(&mut self.bv, false);
        for i in 0..nn {
            self.u[i] = self.bu[i].re;
            self.v[i] = self.bv[i].re;
        }
    }

    /// Largest pointwise spectral divergence of the current field — the
    /// diagnostic behind the divergence-free invariant.  Needs `&mut self`
    /// only for the transform scratch buffers.
    pub fn max_divergence(&mut self) -> f64 {
        let n = self.g;
        let nn = n * n;
        for i in 0..nn {
            self.bu[i] = Complex64::new(self.u[i], 0.0);
            self.bv[i] = Complex64::new(self.v[i], 0.0);
        }
        self.spec.transform2d(&mut self.bu, true);
        self.spec.transform2d(&mut self.bv, true);
        for iy in 0..n {
            let ky = self.deriv[iy];
            for ix in 0..n {
                let idx = iy * n + ix;
                let d = self.deriv[ix] * self.bu[idx] + ky * self.bv[idx];
                self.bw[idx] = Complex64::new(-d.im, d.re);
            }
        }
        self.spec.transform2d(&mut self.bw, false);
        self.bw.iter().map(|z| z.re.abs()).fold(0.0, f64::max)
    }
}
