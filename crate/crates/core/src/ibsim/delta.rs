//! Regularized delta coupling between the Lagrangian fiber and the fluid grid.
//!
//! Both directions of the coupling — spreading point forces onto the grid and
//! interpolating grid velocities back to the fiber — use the classical
//! four-point kernel.  Its defining sum rules (the even- and odd-indexed
//! translates each sum to one half) give three properties we test for
//! directly: interpolation reproduces constant fields exactly, spreading
//! conserves total force, and the two maps are adjoint with respect to the
//! discrete inner products on the curve and the grid.

use super::SimError;

/// One-dimensional four-point kernel, with the argument measured in mesh
/// widths.  Supported on `|r| < 2`, continuous, and non-negative.
pub fn phi4(r: f64) -> f64 {
    let a = r.abs();
    if a < 1.0 {
        (3.0 - 2.0 * a + (1.0 + 4.0 * a - 4.0 * a * a).sqrt()) / 8.0
    } else if a < 2.0 {
        (5.0 - 2.0 * a - (-7.0 + 12.0 * a - 4.0 * a * a).sqrt()) / 8.0
    } else {
        0.0
    }
}

/// The four grid indices nearest `x` and their kernel weights, wrapped
/// periodically into `0..g`.  `h` is the mesh width.
fn stencil(x: f64, h: f64, g: usize) -> ([usize; 4], [f64; 4]) {
    let s = x / h;
    let base = s.floor() as i64 - 1;
    let mut idx = [0usize; 4];
    let mut w = [0.0f64; 4];
    for (o, (i, wt)) in idx.iter_mut().zip(w.iter_mut()).enumerate() {
        let line = base + o as i64;
        *i = line.rem_euclid(g as i64) as usize;
        *wt = phi4(s - line as f64);
    }
    (idx, w)
}

fn check_finite(p: &[f64; 2]) -> Result<(), SimError> {
    if p[0].is_finite() && p[1].is_finite() {
        Ok(())
    } else {
        Err(SimError::State {
            what: format!("non-finite fiber position ({}, {})", p[0], p[1]),
        })
    }
}

/// Spreads fiber force densities onto the grid:
/// `f(x) = Σ_k F_k δ_h(x − X_k) Δs` with `δ_h(x) = φ(x/h)φ(y/h)/h²`.
///
/// `fx`/`fy` are dense `g × g` row-major fields (row index = y) and are
/// overwritten.  Points may sit anywhere; coordinates wrap periodically, so a
/// fiber crossing the domain edge is handled like any other.
pub fn spread(
    points: &[[f64; 2]],
    forces: &[[f64; 2]],
    ds: f64,
    g: usize,
    l: f64,
    fx: &mut [f64],
    fy: &mut [f64],
) -> Result<(), SimError> {
    assert_eq!(points.len(), forces.len(), "one force per fiber point");
    assert_eq!(fx.len(), g * g, "fx must be a g × g field");
    assert_eq!(fy.len(), g * g, "fy must be a g × g field");
    fx.fill(0.0);
    fy.fill(0.0);
    let h = l / g as f64;
    let scale = ds / (h * h);
    for (p, f) in points.iter().zip(forces) {
        check_finite(p)?;
        let (ix, wx) = stencil(p[0], h, g);
        let (iy, wy) = stencil(p[1], h, g);
        for (j, &gy) in iy.iter().enumerate() {
            let row = gy * g;
            let wy_scaled = wy[j] * scale;
            for (i, &gx) in ix.iter().enumerate() {
                let w = wx[i] * wy_scaled;
                fx[row + gx] += f[0] * w;
                fy[row + gx] += f[1] * w;
            }
        }
    }
    Ok(())
}

/// Interpolates a grid velocity field to the fiber points with the same
/// kernel: `U_k = Σ_x u(x) δ_h(x − X_k) h²`, so the `h²` cancels and each
/// fiber velocity is a convex-like combination of sixteen grid values.
///
/// `out` is cleared and refilled, letting the caller reuse its allocation.
pub fn interpolate(
    points: &[[f64; 2]],
    g: usize,
    l: f64,
    u: &[f64],
    v: &[f64],
    out: &mut Vec<[f64; 2]>,
) -> Result<(), SimError> {
    assert_eq!(u.len(), g * g, "u must be a g × g field");
    assert_eq!(v.len(), g * g, "v must be a g × g field");
    out.clear();
    let h = l / g as f64;
    for p in points {
        check_finite(p)?;
        let (ix, wx) = stencil(p[0], h, g);
        let (iy, wy) = stencil(p[1], h, g);
        let mut uk = 0.0;
        let mut vk = 0.0;
        for (j, &gy) in iy.iter().enumerate() {
            let row = gy * g;
            for (i, &gx) in ix.iter().enumerate() {
                let w = wx[i] * wy[j];
                uk += u[row + gx] * w;
                vk += v[row + gx] * w;
            }
        }
        out.push([uk, vk]);
    }
    Ok(())
}
