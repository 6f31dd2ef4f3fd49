//! Assembly of the truncated Floquet pencil (A, B).
//!
//! A disturbance with wavenumber p on the periodically stiffened fiber is
//! expanded in coupled harmonics X_n e^{(γ+in)t}, n ∈ [−N, N], with Floquet
//! exponent γ = 0 (harmonic response) or γ = i/2 (subharmonic). Each n
//! contributes two linear equations in the radial/tangential coefficients
//! (X_n^r, X_n^θ); the forcing amplitude τ couples X_{n±1} only. Writing the
//! system as (A − τB)X = 0 makes the stability boundary a generalized
//! eigenvalue: A collects the 2×2 diagonal blocks (viscous/elastic response
//! at each harmonic), B the interharmonic coupling with zero diagonal.
//!
//! The viscous response enters through Ω_n = sqrt((γ+in)/ν) (principal
//! branch, Re ≥ 0) and four Bessel-ratio kernels at z = iΩ_n. The n with
//! γ + in = 0 (harmonic, n = 0) is special: the viscous terms drop out
//! exactly and a dedicated degenerate block applies.

use crate::bessel::{self, BesselError};
use crate::matrix::ComplexMatrix;
use num_complex::Complex64;
use std::f64::consts::FRAC_1_SQRT_2;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FloquetError {
    #[error("invalid parameter {name} = {value}: must be positive and finite")]
    InvalidParameter { name: &'static str, value: f64 },
    #[error("harmonic index n = {n} is degenerate (γ + in = 0); it takes the degenerate rows")]
    DegenerateIndex { n: i32 },
    #[error("the degenerate rows apply only at γ + in = 0")]
    NotDegenerate,
    #[error("special function evaluation failed: {0}")]
    Bessel(#[from] BesselError),
}

/// The dimensionless groups of a case study: stiffness κ, viscosity ν, and
/// the derived group φ = ν²/κ that scales the viscous terms of the pencil.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParameters {
    pub kappa: f64,
    pub nu: f64,
    pub phi: f64,
}

impl PhysicalParameters {
    /// φ is computed as ν²/κ, so the defining relation holds to the last bit.
    pub fn from_kappa_nu(kappa: f64, nu: f64) -> Result<Self, FloquetError> {
        check_positive("kappa", kappa)?;
        check_positive("nu", nu)?;
        Ok(PhysicalParameters { kappa, nu, phi: nu * nu / kappa })
    }

    /// Construction from (φ, ν); κ is derived so the relation again holds
    /// exactly to representation accuracy.
    pub fn from_phi_nu(phi: f64, nu: f64) -> Result<Self, FloquetError> {
        check_positive("phi", phi)?;
        check_positive("nu", nu)?;
        Ok(PhysicalParameters { kappa: nu * nu / phi, nu, phi })
    }
}

fn check_positive(name: &'static str, value: f64) -> Result<(), FloquetError> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(FloquetError::InvalidParameter { name, value })
    }
}

/// Floquet response class: γ = 0 repeats the forcing period, γ = i/2 repeats
/// every second period.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FloquetClass {
    Harmonic,
    Subharmonic,
}

impl FloquetClass {
    pub fn gamma(self) -> Complex64 {
        match self {
            FloquetClass::Harmonic => Complex64::new(0.0, 0.0),
            FloquetClass::Subharmonic => Complex64::new(0.0, 0.5),
        }
    }

    /// Imaginary part of γ + in as a real number (γ is purely imaginary).
    fn m(self, n: i32) -> f64 {
        match self {
            FloquetClass::Harmonic => n as f64,
            FloquetClass::Subharmonic => n as f64 + 0.5,
        }
    }
}

impl std::fmt::Display for FloquetClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            FloquetClass::Harmonic => "harmonic",
            FloquetClass::Subharmonic => "subharmonic",
        })
    }
}

/// Ω_n = sqrt((γ + in)/ν), principal branch with Re ≥ 0; exactly zero at the
/// degenerate harmonic index. Since γ + in = i·m with real m, the root lies
/// on arg ±π/4 and is built directly from |m| (no complex sqrt rounding).
pub fn omega(n: i32, class: FloquetClass, nu: f64) -> Complex64 {
    let m = class.m(n);
    if m == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let r = (m.abs() / nu).sqrt() * FRAC_1_SQRT_2;
    Complex64::new(r, r * m.signum())
}

/// One harmonic's worth of pencil rows: the diagonal block of A and the
/// sub/superdiagonal blocks of B, in (X^r, X^θ) column order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockRows {
    pub a: [[Complex64; 2]; 2],
    pub b_left: [[Complex64; 2]; 2],
    pub b_right: [[Complex64; 2]; 2],
}

fn neg2x2(b: [[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
    [[-b[0][0], -b[0][1]], [-b[1][0], -b[1][1]]]
}

/// The τ-coupling blocks, common to every nondegenerate harmonic: they carry
/// only powers of p (no φ, ν, or γ dependence).
fn coupling_blocks(p: f64) -> ([[Complex64; 2]; 2], [[Complex64; 2]; 2]) {
    let p2 = p * p;
    let p3 = p2 * p;
    let b_left = [
        [Complex64::new(0.0, p), Complex64::new(-p2, 0.0)],
        [Complex64::new(2.0 * p3, 0.0), Complex64::new(0.0, 2.0 * p2)],
    ];
    (b_left, neg2x2(b_left))
}

/// Nondegenerate rows evaluated at an explicit Ω — the surface the
/// degenerate-limit continuity check drives with Ω(ε) directly.
pub fn block_rows_at_omega(
    p: f64,
    omega_n: Complex64,
    phi: f64,
) -> Result<BlockRows, FloquetError> {
    if !(p > 0.0) || !p.is_finite() {
        return Err(FloquetError::InvalidParameter { name: "p", value: p });
    }
    if omega_n == Complex64::new(0.0, 0.0) {
        return Err(FloquetError::NotDegenerate);
    }
    let z = Complex64::new(-omega_n.im, omega_n.re); // iΩ
    let rh1 = bessel::ratio_h_real(p, z)?; // H_p/H_{p−1}
    let rj1 = bessel::ratio_j_real(p, z)?; // J_p/J_{p+1}
    let two_p_over_z = 2.0 * p / z;
    let rh2 = two_p_over_z * rh1 - 1.0; // H_{p+1}/H_{p−1}
    let rj2 = two_p_over_z * rj1 - 1.0; // J_{p−1}/J_{p+1}

    let i = Complex64::new(0.0, 1.0);
    let om3 = omega_n * omega_n * omega_n;
    let om4 = om3 * omega_n;
    let p2 = p * p;
    let p3 = p2 * p;

    let a = [
        [
            i * (phi * om3 * (rh1 - rj1)) - p,
            phi * om3 * (rh1 + rj1) - i * p2,
        ],
        [
            i * (phi * om4 * (2.0 - rh2 - rj2)) + i * (2.0 * p3),
            -(phi * om4 * (rh2 - rj2)) - 2.0 * p2,
        ],
    ];
    let (b_left, b_right) = coupling_blocks(p);
    Ok(BlockRows { a, b_left, b_right })
}

/// Rows for a nondegenerate harmonic index (γ + in ≠ 0).
pub fn block_rows_nondegenerate(
    p: f64,
    n: i32,
    class: FloquetClass,
    params: &PhysicalParameters,
) -> Result<BlockRows, FloquetError> {
    if class.m(n) == 0.0 {
        return Err(FloquetError::DegenerateIndex { n });
    }
    block_rows_at_omega(p, omega(n, class, params.nu), params.phi)
}

/// Rows for the degenerate index γ + in = 0, where the printed equations
/// reduce to X_n ∓ iτ X_{n∓1}-type constraints in each component. The 2×2
/// determinant p³ + p⁵ is nonzero for p > 0, so these rows are never
/// trivially satisfied.
pub fn block_rows_degenerate(p: f64) -> Result<BlockRows, FloquetError> {
    if !(p > 0.0) || !p.is_finite() {
        return Err(FloquetError::InvalidParameter { name: "p", value: p });
    }
    let i = Complex64::new(0.0, 1.0);
    let p2 = p * p;
    let p3 = p2 * p;
    let a = [
        [Complex64::new(p, 0.0), i * p2],
        [i * p3, Complex64::new(p2, 0.0)],
    ];
    // B chosen so the degenerate block is the entrywise −1 limit of the
    // nondegenerate rows (the equation-1 continuity property): B_left = −iA.
    let b_left = [
        [a[0][0] * (-i), a[0][1] * (-i)],
        [a[1][0] * (-i), a[1][1] * (-i)],
    ];
    let b_right = neg2x2(b_left);
    Ok(BlockRows { a, b_left, b_right })
}

/// The assembled pencil for one (p, class): side 2(2N+1), row pair
/// (eq1_n, eq2_n) and column pair (X_n^r, X_n^θ) laid out for n = −N..N.
#[derive(Debug, Clone)]
pub struct FloquetPencil {
    pub a: ComplexMatrix,
    pub b: ComplexMatrix,
    pub truncation: usize,
    pub p: f64,
    pub class: FloquetClass,
    pub params: PhysicalParameters,
}

pub fn assemble_pencil(
    p: f64,
    class: FloquetClass,
    params: &PhysicalParameters,
    truncation: usize,
) -> Result<FloquetPencil, FloquetError> {
    if truncation < 1 {
        return Err(FloquetError::InvalidParameter {
            name: "truncation",
            value: truncation as f64,
        });
    }
    if !(p > 0.0) || !p.is_finite() {
        return Err(FloquetError::InvalidParameter { name: "p", value: p });
    }
    let big_n = truncation as i32;
    let side = 2 * (2 * truncation + 1);
    let mut a = ComplexMatrix::zeros(side);
    let mut b = ComplexMatrix::zeros(side);
    for (idx, n) in (-big_n..=big_n).enumerate() {
        let rows = if class.m(n) == 0.0 {
            block_rows_degenerate(p)?
        } else {
            block_rows_nondegenerate(p, n, class, params)?
        };
        let r0 = 2 * idx;
        a.set_block2(r0, r0, rows.a);
        if idx > 0 {
            b.set_block2(r0, r0 - 2, rows.b_left);
        }
        if n < big_n {
            b.set_block2(r0, r0 + 2, rows.b_right);
        }
    }
    Ok(FloquetPencil { a, b, truncation, p, class, params: *params })
}

/// One harmonic's coefficients extracted from a pencil eigenvector.
#[derive(Debug, Clone, Copy)]
pub struct FloquetMode {
    pub p: f64,
    pub n: i32,
    pub gamma: Complex64,
    pub omega_n: Complex64,
    pub x_r: Complex64,
    pub x_theta: Complex64,
}

impl FloquetPencil {
    /// Unpacks an eigenvector (length = side) into per-harmonic modes.
    pub fn modes_from_vector(&self, v: &[Complex64]) -> Vec<FloquetMode> {
        assert_eq!(v.len(), self.a.side(), "eigenvector length mismatch");
        let big_n = self.truncation as i32;
        (-big_n..=big_n)
            .enumerate()
            .map(|(idx, n)| FloquetMode {
                p: self.p,
                n,
                gamma: self.class.gamma(),
                omega_n: omega(n, self.class, self.params.nu),
                x_r: v[2 * idx],
                x_theta: v[2 * idx + 1],
            })
            .collect()
    }
}
