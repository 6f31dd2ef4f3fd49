//! Wavenumber sweep: trace the instability tongues over a p-grid, control
//! the harmonic truncation by self-convergence, and pick out the integer
//! wavenumbers a closed fiber can actually realize.
//!
//! Truncation is the one discretization this analysis introduces (the
//! harmonic ladder is infinite); every emitted point therefore records the
//! truncation at which its column's amplitude set stopped moving, and a
//! column that keeps drifting is an error, not a plot point.

use crate::eig::{self, EigenError};
use crate::floquet::{self, FloquetClass, FloquetError, PhysicalParameters};
use thiserror::Error;

/// Certification threshold handed to the eigensolver: a point enters the
/// data set only if its independent residual stays below this.
pub const RESIDUAL_TOL: f64 = 1e-8;

/// Default ceiling for the truncation-doubling ladder.
pub const N_MAX: usize = 256;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SweepError {
    #[error("invalid sweep configuration: {what}")]
    InvalidConfig { what: &'static str },
    #[error("pencil assembly failed at p = {p} ({class}): {source}")]
    Assembly {
        p: f64,
        class: FloquetClass,
        source: FloquetError,
    },
    #[error("eigensolve failed at p = {p} ({class}): {source}")]
    Eigen {
        p: f64,
        class: FloquetClass,
        source: EigenError,
    },
    #[error(
        "truncation did not converge at p = {p} ({class}) by N = {n_max}; \
         drift per doubling: {drift_history:?}"
    )]
    TruncationDiverged {
        p: f64,
        class: FloquetClass,
        n_max: usize,
        drift_history: Vec<f64>,
    },
}

/// One certified point on a stability boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityPoint {
    pub p: f64,
    pub tau: f64,
    pub class: FloquetClass,
    pub residual: f64,
    /// Truncation at which this point's column passed the convergence check.
    pub truncation_n: usize,
}

/// Grid and tolerance settings for a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepConfig {
    pub p_min: f64,
    pub p_max: f64,
    pub p_step: f64,
    pub tau_max: f64,
    pub n_initial: usize,
    /// Ceiling for the truncation-doubling ladder; a column still drifting
    /// here is reported as divergent.
    pub n_max: usize,
    /// Largest allowed amplitude drift between successive truncations.
    pub convergence_tol: f64,
    /// Reality threshold for eigenvalues, relative above |τ| = 1.
    pub rel_imag_tol: f64,
}

impl Default for SweepConfig {
    /// Grid covering all four case studies' visible tongue structure.
    fn default() -> Self {
        SweepConfig {
            p_min: 0.25,
            p_max: 20.0,
            p_step: 0.05,
            tau_max: 1.0,
            n_initial: 16,
            n_max: N_MAX,
            convergence_tol: 1e-6,
            rel_imag_tol: 1e-8,
        }
    }
}

impl SweepConfig {
    fn validate(&self) -> Result<(), SweepError> {
        let bad = |what| Err(SweepError::InvalidConfig { what });
        if !(self.p_min > 0.0) || !self.p_min.is_finite() {
            return bad("p_min must be positive and finite");
        }
        if !(self.p_step > 0.0) || !self.p_step.is_finite() {
            return bad("p_step must be positive and finite");
        }
        if !self.p_max.is_finite() {
            return bad("p_max must be finite");
        }
        if self.n_initial < 4 {
            return bad("N_initial must be at least 4");
        }
        if self.n_max < self.n_initial {
            return bad("N_max must be at least N_initial");
        }
        if !(self.tau_max >= 0.0) {
            return bad("tau_max must be non-negative");
        }
        if !(self.rel_imag_tol > 0.0) {
            return bad("rel_imag_tol must be positive");
        }
        Ok(())
    }
}

/// An integer wavenumber whose tongue dips below the physical forcing
/// ceiling τ = 1/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalMode {
    pub p: u32,
    pub tau_onset: f64,
    pub class: FloquetClass,
}

/// Real amplitudes (with residuals) at one (p, class, N), sorted ascending.
fn solve_column(
    p: f64,
    class: FloquetClass,
    params: &PhysicalParameters,
    truncation: usize,
    tau_max: f64,
    rel_imag_tol: f64,
) -> Result<Vec<(f64, f64)>, SweepError> {
    let pencil = floquet::assemble_pencil(p, class, params, truncation)
        .map_err(|source| SweepError::Assembly { p, class, source })?;
    let results = eig::generalized_eigenvalues(&pencil.a, &pencil.b, RESIDUAL_TOL)
        .map_err(|source| SweepError::Eigen { p, class, source })?;
    Ok(eig::filter_real_with_residuals(&results, rel_imag_tol, tau_max))
}

/// Largest movement of any reportable amplitude (τ ≤ window_max) between two
/// truncations, under nearest-neighbor pairing against the other level's
/// full margin-widened list.  Amplitudes above the reporting window never
/// demand a partner — they only serve as pairing targets — so a value
/// sliding across the window cut between truncations cannot masquerade as a
/// tongue appearing or vanishing.  A reportable amplitude with no
/// counterpart at all is infinite drift (that really is a tongue appearing
/// or vanishing, which is never "converged").
fn amplitude_drift(a: &[(f64, f64)], b: &[(f64, f64)], window_max: f64) -> f64 {
    let directed = |from: &[(f64, f64)], to: &[(f64, f64)]| {
        from.iter()
            .filter(|(x, _)| *x <= window_max)
            .map(|(x, _)| {
                to.iter()
                    .map(|(y, _)| (x - y).abs())
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0f64, f64::max)
    };
    directed(a, b).max(directed(b, a))
}

fn converge_column(
    p: f64,
    class: FloquetClass,
    params: &PhysicalParameters,
    config: &SweepConfig,
) -> Result<(Vec<(f64, f64)>, usize), SweepError> {
    // Solve on a slightly wider τ window than is reported: an amplitude
    // sitting essentially on tau_max slides across the cut between
    // truncations by its last few ulps of movement, and comparing sets
    // clipped at the cut would read that as a tongue appearing or vanishing
    // (infinite drift).  The widened lists give every reportable amplitude
    // its pairing partner back; the margin is orders of magnitude above the
    // convergence tolerance, so nothing that matters escapes.
    let tau_cmp = config.tau_max + (0.05 * config.tau_max).max(0.05);
    let mut n = config.n_initial;
    let mut prev = solve_column(p, class, params, n, tau_cmp, config.rel_imag_tol)?;
    let mut drift_history = Vec::new();
    loop {
        let next_n = 2 * n;
        if next_n > config.n_max {
            return Err(SweepError::TruncationDiverged {
                p,
                class,
                n_max: config.n_max,
                drift_history,
            });
        }
        let cur = solve_column(p, class, params, next_n, tau_cmp, config.rel_imag_tol)?;
        let drift = amplitude_drift(&prev, &cur, config.tau_max);
        drift_history.push(drift);
        if drift < config.convergence_tol {
            let reported = cur
                .into_iter()
                .filter(|&(tau, _)| tau <= config.tau_max)
                .collect();
            return Ok((reported, next_n));
        }
        prev = cur;
        n = next_n;
    }
}

/// Doubles the truncation until every amplitude at (p, class) moves by less
/// than `config.convergence_tol` between successive N (nearest-neighbor
/// pairing); returns the settled amplitudes and the truncation that
/// certified them. A tolerance of zero is unreachable by design and reports
/// divergence with the recorded drifts.
pub fn converge_truncation(
    p: f64,
    class: FloquetClass,
    params: &PhysicalParameters,
    config: &SweepConfig,
) -> Result<(Vec<f64>, usize), SweepError> {
    config.validate()?;
    let (pairs, n) = converge_column(p, class, params, config)?;
    Ok((pairs.into_iter().map(|(tau, _)| tau).collect(), n))
}

/// Trace both Floquet classes over the p-grid. Points come out ordered by
/// (class, p, τ); an empty grid (p_max < p_min) is a valid, empty sweep.
pub fn sweep(
    config: &SweepConfig,
    params: &PhysicalParameters,
) -> Result<Vec<StabilityPoint>, SweepError> {
    config.validate()?;
    let mut points = Vec::new();
    for class in [FloquetClass::Harmonic, FloquetClass::Subharmonic] {
        for p in grid(config) {
            let (pairs, truncation_n) = converge_column(p, class, params, config)?;
            points.extend(pairs.into_iter().map(|(tau, residual)| StabilityPoint {
                p,
                tau,
                class,
                residual,
                truncation_n,
            }));
        }
    }
    Ok(points)
}

fn grid(config: &SweepConfig) -> impl Iterator<Item = f64> + '_ {
    let count = if config.p_max < config.p_min {
        0
    } else {
        ((config.p_max - config.p_min) / config.p_step + 1e-9).floor() as usize + 1
    };
    (0..count).map(move |k| config.p_min + k as f64 * config.p_step)
}

/// Integer wavenumbers lying inside a tongue at τ ≤ 1/2: the two grid
/// columns nearest to the integer (from below and above; one column when the
/// integer sits on the grid) must both carry a point at τ ≤ 1/2, and the
/// onset is the smallest such τ. Sorted by (p, class).
pub fn physical_modes(points: &[StabilityPoint]) -> Vec<PhysicalMode> {
    let mut modes = Vec::new();
    for class in [FloquetClass::Harmonic, FloquetClass::Subharmonic] {
        let of_class: Vec<&StabilityPoint> =
            points.iter().filter(|pt| pt.class == class).collect();
        if of_class.is_empty() {
            continue;
        }
        let mut columns: Vec<f64> = of_class.iter().map(|pt| pt.p).collect();
        columns.sort_by(|x, y| x.partial_cmp(y).unwrap());
        columns.dedup();

        let lo = columns[0].ceil() as i64;
        let hi = columns[columns.len() - 1].floor() as i64;
        for p_int in lo.max(1)..=hi {
            let target = p_int as f64;
            let left = columns.iter().rev().find(|&&c| c <= target);
            let right = columns.iter().find(|&&c| c >= target);
            let (Some(&left), Some(&right)) = (left, right) else {
                continue;
            };
            let column_min = |col: f64| {
                of_class
                    .iter()
                    .filter(|pt| pt.p == col && pt.tau <= 0.5)
                    .map(|pt| pt.tau)
                    .fold(f64::INFINITY, f64::min)
            };
            let (lmin, rmin) = (column_min(left), column_min(right));
            if lmin.is_finite() && rmin.is_finite() {
                modes.push(PhysicalMode {
                    p: p_int as u32,
                    tau_onset: lmin.min(rmin),
                    class,
                });
            }
        }
    }
    modes.sort_by(|x, y| {
        (x.p, x.class == FloquetClass::Subharmonic)
            .partial_cmp(&(y.p, y.class == FloquetClass::Subharmonic))
            .unwrap()
    });
    modes
}

#[cfg(test)]
mod tests {
    use super::*;

    fn case(idx: usize) -> PhysicalParameters {
        let (kappa, nu) = [
            (0.5, 0.004),
            (0.04, 0.00056),
            (0.02, 0.0002),
            (0.08, 0.0002),
        ][idx - 1];
        PhysicalParameters::from_kappa_nu(kappa, nu).unwrap()
    }

    fn taus_at(p: f64, class: FloquetClass, params: &PhysicalParameters, n: usize) -> Vec<f64> {
        solve_column(p, class, params, n, 1.0, 1e-8)
            .unwrap()
            .into_iter()
            .map(|(tau, _)| tau)
            .collect()
    }

    /// Cross-implementation anchors: amplitudes computed independently with
    /// a high-precision prototype of the same equations (fixed truncation).
    #[test]
    fn fixed_truncation_anchors() {
        let h = FloquetClass::Harmonic;
        let s = FloquetClass::Subharmonic;

        let taus = taus_at(2.0, h, &case(1), 16);
        assert_eq!(taus.len(), 1);
        assert!((taus[0] - 0.442312765745).abs() < 1e-9, "case I: {taus:?}");

        let taus = taus_at(4.0, h, &case(2), 16);
        assert_eq!(taus.len(), 1);
        assert!((taus[0] - 0.297752772799).abs() < 1e-9, "case II: {taus:?}");

        // case II's subharmonic neighbor at p = 3 sits just above τ = 1/2;
        // a second branch near 0.977 resolves once N reaches 16
        let taus = taus_at(3.0, s, &case(2), 16);
        assert_eq!(taus.len(), 2);
        assert!(taus[0] > 0.5 && taus[0] < 0.52, "case II p=3: {taus:?}");
        assert!((taus[1] - 0.977371177369).abs() < 1e-9, "case II p=3: {taus:?}");

        let taus = taus_at(3.0, s, &case(3), 16);
        assert_eq!(taus.len(), 1);
        assert!((taus[0] - 0.104093854426).abs() < 1e-9, "case III: {taus:?}");

        let taus = taus_at(2.0, s, &case(4), 16);
        assert_eq!(taus.len(), 2);
        assert!((taus[0] - 0.086750049048).abs() < 1e-9, "case IV: {taus:?}");
        assert!((taus[1] - 0.871067931379).abs() < 1e-9, "case IV: {taus:?}");

        // non-integer column with two nearby amplitudes, small truncation
        let taus = taus_at(2.6, h, &case(1), 8);
        assert_eq!(taus.len(), 2);
        assert!((taus[0] - 0.667937484896).abs() < 1e-9, "p=2.6: {taus:?}");
        assert!((taus[1] - 0.692273583944).abs() < 1e-9, "p=2.6: {taus:?}");
    }

    /// The corrected equations keep the small-p subharmonic tongue that the
    /// original computation lost.
    #[test]
    fn lowest_wavenumber_subharmonic_tongue_is_present() {
        let s = FloquetClass::Subharmonic;
        let taus = taus_at(0.75, s, &case(3), 16);
        assert_eq!(taus.len(), 1);
        assert!((taus[0] - 0.948785401).abs() < 1e-6, "case III p=0.75: {taus:?}");

        let taus = taus_at(1.5, s, &case(4), 16);
        assert_eq!(taus.len(), 1);
        assert!((taus[0] - 0.975970736).abs() < 1e-6, "case IV p=1.5: {taus:?}");

        let taus = taus_at(1.75, s, &case(4), 16);
        assert_eq!(taus.len(), 2);
        assert!((taus[0] - 0.735902758).abs() < 1e-6, "case IV p=1.75: {taus:?}");
        assert!((taus[1] - 0.981089612).abs() < 1e-6, "case IV p=1.75: {taus:?}");
    }

    #[test]
    fn truncation_artifact_is_weeded_out() {
        // At N = 8 the case-I harmonic column at p = 2 carries a spurious
        // extra amplitude near 0.862 that vanishes for N ≥ 12; convergence
        // from N = 8 must discard it and settle on the true point.
        let params = case(1);
        let h = FloquetClass::Harmonic;
        let fixed = taus_at(2.0, h, &params, 8);
        assert!(
            fixed.iter().any(|t| (t - 0.862466243054).abs() < 1e-6),
            "expected the N=8 artifact to exist: {fixed:?}"
        );

        let config = SweepConfig { n_initial: 8, ..SweepConfig::default() };
        let (taus, n_final) = converge_truncation(2.0, h, &params, &config).unwrap();
        assert!(n_final >= 16);
        assert_eq!(taus.len(), 1);
        assert!((taus[0] - 0.442312765745).abs() < 1e-6, "converged: {taus:?}");
    }

    #[test]
    fn zero_tolerance_reports_divergence_with_history() {
        // Even a bitwise-stable column cannot satisfy drift < 0, so the
        // ladder must climb to its ceiling and report every recorded drift.
        let config = SweepConfig {
            n_initial: 8,
            n_max: 32,
            convergence_tol: 0.0,
            ..SweepConfig::default()
        };
        let err = converge_truncation(2.0, FloquetClass::Harmonic, &case(1), &config).unwrap_err();
        match err {
            SweepError::TruncationDiverged { p, n_max, drift_history, .. } => {
                assert_eq!(p, 2.0);
                assert_eq!(n_max, 32);
                assert_eq!(drift_history.len(), 2, "one drift per doubling: {drift_history:?}");
                assert!(drift_history.iter().all(|d| *d >= 0.0));
            }
            other => panic!("expected TruncationDiverged, got {other:?}"),
        }
    }

    #[test]
    fn default_ladder_ceiling_is_pinned() {
        assert_eq!(SweepConfig::default().n_max, 256);
        assert_eq!(N_MAX, 256);
    }

    #[test]
    fn config_validation() {
        let params = case(1);
        for (config, what) in [
            (SweepConfig { p_min: 0.0, ..SweepConfig::default() }, "p_min"),
            (SweepConfig { p_step: -0.1, ..SweepConfig::default() }, "p_step"),
            (SweepConfig { n_initial: 3, ..SweepConfig::default() }, "N_initial"),
            (SweepConfig { n_max: 8, ..SweepConfig::default() }, "N_max"),
        ] {
            let err = sweep(&config, &params).unwrap_err();
            assert!(
                matches!(&err, SweepError::InvalidConfig { what: w } if w.contains(what)),
                "{what}: {err:?}"
            );
        }
    }

    #[test]
    fn empty_grid_is_an_empty_sweep() {
        let config = SweepConfig { p_min: 5.0, p_max: 4.0, ..SweepConfig::default() };
        assert!(sweep(&config, &case(1)).unwrap().is_empty());
    }

    #[test]
    fn sweep_is_deterministic_and_ordered() {
        let config = SweepConfig {
            p_min: 1.9,
            p_max: 2.1,
            p_step: 0.1,
            n_initial: 8,
            ..SweepConfig::default()
        };
        let params = case(1);
        let a = sweep(&config, &params).unwrap();
        let b = sweep(&config, &params).unwrap();
        assert_eq!(a, b);
        assert!(!a.is_empty());
        for pt in &a {
            assert!(pt.residual <= RESIDUAL_TOL);
            assert!(pt.tau >= 0.0 && pt.tau <= config.tau_max);
        }
        for w in a.windows(2) {
            let key = |pt: &StabilityPoint| {
                (pt.class == FloquetClass::Subharmonic, pt.p, pt.tau)
            };
            assert!(key(&w[0]) <= key(&w[1]), "ordering violated: {w:?}");
        }
    }

    #[test]
    fn tongue_varies_continuously_across_the_grid() {
        // Adjacent-column drift stays bounded by C·p_step (C calibrated on
        // this window; the largest observed drift, ≈0.23 at the left edge,
        // is a boundary branch crossing τ_max between columns).
        let config = SweepConfig {
            p_min: 1.8,
            p_max: 2.2,
            p_step: 0.05,
            ..SweepConfig::default()
        };
        let points = sweep(&config, &case(1)).unwrap();
        let columns: Vec<f64> = {
            let mut c: Vec<f64> = points.iter().map(|pt| pt.p).collect();
            c.sort_by(|x, y| x.partial_cmp(y).unwrap());
            c.dedup();
            c
        };
        assert!(columns.len() >= 8);
        for w in columns.windows(2) {
            let taus = |col: f64| -> Vec<(f64, f64)> {
                points
                    .iter()
                    .filter(|pt| pt.p == col && pt.class == FloquetClass::Harmonic)
                    .map(|pt| (pt.tau, 0.0))
                    .collect()
            };
            let drift = amplitude_drift(&taus(w[0]), &taus(w[1]), f64::INFINITY);
            assert!(
                drift <= 6.0 * config.p_step,
                "drift {drift} between p = {} and {}",
                w[0],
                w[1]
            );
        }
    }

    #[test]
    fn physical_modes_from_synthetic_points() {
        let mk = |p: f64, tau: f64, class| StabilityPoint {
            p,
            tau,
            class,
            residual: 0.0,
            truncation_n: 16,
        };
        let h = FloquetClass::Harmonic;
        let s = FloquetClass::Subharmonic;
        let points = vec![
            // tongue around p = 2, dipping below 1/2: physical
            mk(1.95, 0.48, h),
            mk(2.0, 0.44, h),
            mk(2.0, 0.80, h),
            mk(2.05, 0.47, h),
            // tongue near p = 3 entirely above 1/2: not physical
            mk(2.95, 0.55, h),
            mk(3.0, 0.52, h),
            mk(3.05, 0.56, h),
            // subharmonic strictly between integers: carries no integer mode
            mk(4.3, 0.2, s),
            mk(4.4, 0.25, s),
        ];
        let modes = physical_modes(&points);
        assert_eq!(modes.len(), 1);
        assert_eq!(modes[0].p, 2);
        assert_eq!(modes[0].class, h);
        assert!((modes[0].tau_onset - 0.44).abs() < 1e-15);

        assert!(physical_modes(&[]).is_empty());
        // nothing below τ = 1/2 → nothing physical
        let high = vec![mk(1.95, 0.6, h), mk(2.0, 0.7, h), mk(2.05, 0.65, h)];
        assert!(physical_modes(&high).is_empty());
    }

    #[test]
    fn bracketing_requires_both_sides() {
        let mk = |p: f64, tau: f64| StabilityPoint {
            p,
            tau,
            class: FloquetClass::Harmonic,
            residual: 0.0,
            truncation_n: 16,
        };
        // only a left column at τ ≤ 1/2: the right bracket misses, so the
        // integer between them is not claimed
        let points = vec![mk(1.95, 0.4), mk(2.05, 0.9)];
        assert!(physical_modes(&points).is_empty());
    }
}
