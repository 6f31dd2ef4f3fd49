//! Run configuration: presets, flat key=value config files, and the
//! precedence rules that merge them with command-line flags.
//!
//! Resolution order is defaults → preset (`--case`) → config file
//! (`--config`) → explicit flags, later layers overriding earlier ones key by
//! key.  Validation is total: any unknown key, unparsable value, or violated
//! invariant rejects the whole run with a diagnostic naming the key, before
//! any file is written or sweep started.

use crate::error::CliError;
use parares_core::ibsim::SimConfig;
use parares_core::{PhysicalParameters, SweepConfig};
use std::collections::HashSet;
use std::path::Path;

/// Everything a run can configure, before command-specific validation.
/// Physics fields stay optional until finalized so the "exactly one of
/// (κ,ν)/(φ,ν)" rule can distinguish "absent" from "given".
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub kappa: Option<f64>,
    pub nu: Option<f64>,
    pub phi: Option<f64>,
    pub p_min: f64,
    pub p_max: f64,
    pub p_step: f64,
    pub tau_max: f64,
    pub n_initial: usize,
    pub convergence_tol: f64,
    pub rel_imag_tol: f64,
    pub seed_mode: Option<u32>,
    pub tau: Option<f64>,
    pub periods: usize,
    pub grid_points: usize,
    pub fiber_points: usize,
    pub steps_per_period: usize,
    pub samples_per_period: usize,
    pub perturbation: f64,
    pub domain: f64,
    pub rest_radius: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        let sweep = SweepConfig::default();
        let sim = SimConfig::default();
        RunConfig {
            kappa: None,
            nu: None,
            phi: None,
            p_min: sweep.p_min,
            p_max: sweep.p_max,
            p_step: sweep.p_step,
            tau_max: sweep.tau_max,
            n_initial: sweep.n_initial,
            convergence_tol: sweep.convergence_tol,
            rel_imag_tol: sweep.rel_imag_tol,
            seed_mode: None,
            tau: None,
            periods: sim.periods,
            grid_points: sim.grid_points,
            fiber_points: sim.fiber_points,
            steps_per_period: sim.steps_per_period,
            samples_per_period: sim.samples_per_period,
            perturbation: sim.perturbation,
            domain: sim.domain,
            rest_radius: sim.rest_radius,
        }
    }
}

impl RunConfig {
    /// Applies one of the four built-in parameter sets.  Each fixes the base
    /// stiffness κ and viscosity ν from the published tables (φ follows as
    /// ν²/κ) and suggests the resonant wavenumber as the simulation seed.
    pub fn apply_preset(&mut self, case: u8) -> Result<(), CliError> {
        let (kappa, nu, seed) = match case {
            1 => (0.5, 0.004, 2),
            2 => (0.04, 0.00056, 4),
            3 => (0.02, 0.0002, 3),
            4 => (0.08, 0.0002, 2),
            other => {
                return Err(CliError::Config(format!(
                    "key 'case': preset must be 1..=4, got {other}"
                )))
            }
        };
        self.kappa = Some(kappa);
        self.nu = Some(nu);
        self.phi = None;
        if self.seed_mode.is_none() {
            self.seed_mode = Some(seed);
        }
        Ok(())
    }

    /// Merges a flat `key = value` file (with `#` comments) into the config.
    pub fn apply_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let mut seen = HashSet::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Config(format!(
                    "{}:{}: expected 'key = value', got '{line}'",
                    path.display(),
                    lineno + 1
                )));
            };
            let key = key.trim();
            let value = value.trim();
            if !seen.insert(key.to_string()) {
                return Err(CliError::Config(format!(
                    "{}:{}: duplicate key '{key}'",
                    path.display(),
                    lineno + 1
                )));
            }
            self.set_key(key, value).map_err(|msg| {
                CliError::Config(format!("{}:{}: {msg}", path.display(), lineno + 1))
            })?;
        }
        Ok(())
    }

    /// Sets a single configuration key from its text value.  Used by the file
    /// parser; the message (without location) names the offending key.
    fn set_key(&mut self, key: &str, value: &str) -> Result<(), String> {
        fn float(key: &str, value: &str) -> Result<f64, String> {
            value
                .parse::<f64>()
                .map_err(|_| format!("key '{key}': expected a number, got '{value}'"))
        }
        fn count(key: &str, value: &str) -> Result<usize, String> {
            value
                .parse::<usize>()
                .map_err(|_| format!("key '{key}': expected a non-negative integer, got '{value}'"))
        }
        match key {
            "kappa" => self.kappa = Some(float(key, value)?),
            "nu" => self.nu = Some(float(key, value)?),
            "phi" => self.phi = Some(float(key, value)?),
            "p_min" => self.p_min = float(key, value)?,
            "p_max" => self.p_max = float(key, value)?,
            "p_step" => self.p_step = float(key, value)?,
            "tau_max" => self.tau_max = float(key, value)?,
            "n_initial" => self.n_initial = count(key, value)?,
            "convergence_tol" => self.convergence_tol = float(key, value)?,
            "rel_imag_tol" => self.rel_imag_tol = float(key, value)?,
            "seed_mode" => {
                self.seed_mode = Some(count(key, value)?.try_into().map_err(|_| {
                    format!("key '{key}': value '{value}' out of range")
                })?)
            }
            "tau" => self.tau = Some(float(key, value)?),
            "periods" => self.periods = count(key, value)?,
            "grid_points" => self.grid_points = count(key, value)?,
            "fiber_points" => self.fiber_points = count(key, value)?,
            "steps_per_period" => self.steps_per_period = count(key, value)?,
            "samples_per_period" => self.samples_per_period = count(key, value)?,
            "perturbation" => self.perturbation = float(key, value)?,
            "domain" => self.domain = float(key, value)?,
            "rest_radius" => self.rest_radius = float(key, value)?,
            other => return Err(format!("unknown key '{other}'")),
        }
        Ok(())
    }

    /// Resolves the physical parameters, enforcing the (κ,ν)/(φ,ν) rule:
    /// ν plus at least one of κ and φ, and if both are present they must
    /// agree with φ = ν²/κ to 1e-12 relative.
    pub fn physical_parameters(&self) -> Result<PhysicalParameters, CliError> {
        let nu = self.nu.ok_or_else(|| {
            CliError::Config("key 'nu': viscosity is required (give --case, a config file, or nu=)".into())
        })?;
        let params = match (self.kappa, self.phi) {
            (None, None) => {
                return Err(CliError::Config(
                    "key 'kappa' or 'phi': one of the stiffness parameters is required".into(),
                ))
            }
            (Some(kappa), None) => PhysicalParameters::from_kappa_nu(kappa, nu),
            (None, Some(phi)) => PhysicalParameters::from_phi_nu(phi, nu),
            (Some(kappa), Some(phi)) => {
                let derived = nu * nu / kappa;
                let scale = derived.abs().max(phi.abs());
                if !((phi - derived).abs() <= 1e-12 * scale) {
                    return Err(CliError::Config(format!(
                        "keys 'kappa' and 'phi' disagree: phi = {phi:e} but nu²/kappa = {derived:e} \
                         (must match to 1e-12 relative)"
                    )));
                }
                PhysicalParameters::from_kappa_nu(kappa, nu)
            }
        };
        params.map_err(|e| CliError::Config(e.to_string()))
    }

    /// The sweep half of the configuration.
    pub fn sweep_config(&self) -> SweepConfig {
        SweepConfig {
            p_min: self.p_min,
            p_max: self.p_max,
            p_step: self.p_step,
            tau_max: self.tau_max,
            n_initial: self.n_initial,
            convergence_tol: self.convergence_tol,
            rel_imag_tol: self.rel_imag_tol,
            ..SweepConfig::default()
        }
    }

    /// The simulation half: modulation amplitude, seed mode, discretization.
    /// The CSV schema tracks modes 1..=8, so the fiber must resolve at least
    /// that many (32 points puts Nyquist comfortably above mode 8).
    pub fn sim_setup(&self) -> Result<(f64, u32, SimConfig), CliError> {
        let tau = self.tau.ok_or_else(|| {
            CliError::Config("key 'tau': the modulation amplitude is required for simulate".into())
        })?;
        let seed = self.seed_mode.ok_or_else(|| {
            CliError::Config(
                "key 'seed_mode': the seeded wavenumber is required for simulate".into(),
            )
        })?;
        if self.fiber_points < 32 {
            return Err(CliError::Config(format!(
                "key 'fiber_points': need at least 32 to track modes 1..8, got {}",
                self.fiber_points
            )));
        }
        Ok((
            tau,
            seed,
            SimConfig {
                grid_points: self.grid_points,
                fiber_points: self.fiber_points,
                domain: self.domain,
                rest_radius: self.rest_radius,
                steps_per_period: self.steps_per_period,
                periods: self.periods,
                samples_per_period: self.samples_per_period,
                perturbation: self.perturbation,
            },
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_config(text: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(text.as_bytes()).unwrap();
        f
    }

    #[test]
    fn file_layer_overrides_preset_layer() {
        let mut rc = RunConfig::default();
        rc.apply_preset(3).unwrap();
        assert_eq!(rc.kappa, Some(0.02));
        assert_eq!(rc.seed_mode, Some(3));
        let f = write_config("# stiffer variant\nkappa = 0.03\np_max = 7.5\n");
        rc.apply_file(f.path()).unwrap();
        assert_eq!(rc.kappa, Some(0.03));
        assert_eq!(rc.nu, Some(0.0002), "untouched keys keep the preset value");
        assert_eq!(rc.p_max, 7.5);
    }

    #[test]
    fn comments_blanks_and_spacing_are_tolerated() {
        let mut rc = RunConfig::default();
        let f = write_config(
            "\n# full-line comment\n  nu=0.004   # trailing comment\n\tkappa =\t0.5\n\n",
        );
        rc.apply_file(f.path()).unwrap();
        assert_eq!(rc.nu, Some(0.004));
        assert_eq!(rc.kappa, Some(0.5));
    }

    #[test]
    fn unknown_key_is_rejected_by_name() {
        let mut rc = RunConfig::default();
        let f = write_config("viscosity = 0.004\n");
        let err = rc.apply_file(f.path()).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("unknown key 'viscosity'"), "got: {msg}");
        assert!(msg.contains(":1:"), "diagnostic should carry the line: {msg}");
    }

    #[test]
    fn malformed_values_name_the_key() {
        let mut rc = RunConfig::default();
        let f = write_config("nu = fast\n");
        let msg = rc.apply_file(f.path()).unwrap_err().to_string();
        assert!(msg.contains("key 'nu'"), "got: {msg}");
        let f = write_config("n_initial = -4\n");
        let msg = rc.apply_file(f.path()).unwrap_err().to_string();
        assert!(msg.contains("key 'n_initial'"), "got: {msg}");
        let f = write_config("just words\n");
        let msg = rc.apply_file(f.path()).unwrap_err().to_string();
        assert!(msg.contains("expected 'key = value'"), "got: {msg}");
    }

    #[test]
    fn duplicate_keys_are_rejected() {
        let mut rc = RunConfig::default();
        let f = write_config("nu = 0.004\nnu = 0.005\n");
        let msg = rc.apply_file(f.path()).unwrap_err().to_string();
        assert!(msg.contains("duplicate key 'nu'"), "got: {msg}");
    }

    #[test]
    fn physics_requires_nu_and_one_stiffness_form() {
        let rc = RunConfig::default();
        let msg = rc.physical_parameters().unwrap_err().to_string();
        assert!(msg.contains("'nu'"), "got: {msg}");

        let rc = RunConfig {
            nu: Some(0.004),
            ..RunConfig::default()
        };
        let msg = rc.physical_parameters().unwrap_err().to_string();
        assert!(msg.contains("'kappa' or 'phi'"), "got: {msg}");

        let rc = RunConfig {
            nu: Some(0.004),
            phi: Some(3.2e-5),
            ..RunConfig::default()
        };
        let p = rc.physical_parameters().unwrap();
        assert!((p.kappa - 0.5).abs() < 1e-15);
    }

    #[test]
    fn kappa_phi_consistency_is_checked_at_1e12_relative() {
        let nu = 0.004f64;
        let kappa = 0.5f64;
        let phi = nu * nu / kappa;
        let ok = RunConfig {
            nu: Some(nu),
            kappa: Some(kappa),
            phi: Some(phi),
            ..RunConfig::default()
        };
        assert!(ok.physical_parameters().is_ok());
        // A relative nudge just inside the band passes…
        let near = RunConfig {
            phi: Some(phi * (1.0 + 5e-13)),
            ..ok.clone()
        };
        assert!(near.physical_parameters().is_ok());
        // …and one well outside is rejected, naming both keys.
        let far = RunConfig {
            phi: Some(phi * (1.0 + 1e-9)),
            ..ok
        };
        let msg = far.physical_parameters().unwrap_err().to_string();
        assert!(msg.contains("'kappa' and 'phi'"), "got: {msg}");
    }

    #[test]
    fn presets_match_the_published_tables() {
        for (case, kappa, nu, phi) in [
            (1u8, 0.5, 0.004, 3.2e-5),
            (2, 0.04, 0.00056, 7.84e-6),
            (3, 0.02, 0.0002, 2e-6),
            (4, 0.08, 0.0002, 5e-7),
        ] {
            let mut rc = RunConfig::default();
            rc.apply_preset(case).unwrap();
            let p = rc.physical_parameters().unwrap();
            assert_eq!(p.kappa, kappa);
            assert_eq!(p.nu, nu);
            // The identity φ = ν²/κ holds bitwise; the decimal table value
            // is its correctly rounded rendering, so agreement there is a
            // few ulps at most.
            assert_eq!(p.phi, nu * nu / kappa, "case {case} phi must satisfy the identity");
            assert!(
                (p.phi - phi).abs() <= 4.0 * f64::EPSILON * phi,
                "case {case} phi {} vs table {phi}",
                p.phi
            );
        }
    }

    #[test]
    fn sim_setup_demands_tau_and_seed() {
        let mut rc = RunConfig::default();
        rc.apply_preset(3).unwrap();
        let msg = rc.sim_setup().unwrap_err().to_string();
        assert!(msg.contains("'tau'"), "got: {msg}");
        rc.tau = Some(0.3);
        let (tau, seed, sim) = rc.sim_setup().unwrap();
        assert_eq!(tau, 0.3);
        assert_eq!(seed, 3, "preset suggests the resonant wavenumber");
        assert_eq!(sim.grid_points, 128);
        rc.seed_mode = None;
        let msg = rc.sim_setup().unwrap_err().to_string();
        assert!(msg.contains("'seed_mode'"), "got: {msg}");
    }
}
