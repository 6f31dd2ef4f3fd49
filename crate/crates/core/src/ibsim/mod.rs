//! Immersed-boundary verification runs: a closed elastic fiber with
//! periodically modulated stiffness, coupled to incompressible flow.
//!
//! The point of this module is not a high-accuracy Navier–Stokes study but a
//! desk-scale check that the resonances predicted by the Floquet analysis are
//! real instabilities: initialize a circle with a small shape perturbation at
//! one integer wavenumber, drive the stiffness at `K(t) = κ(1 + 2τ sin t)`,
//! and watch whether that mode's amplitude grows while its neighbours stay
//! quiet.  The pieces are deliberately simple and first-order:
//!
//! * fiber forces from a zero-rest-length tension model, `K(t) X_ss`, whose
//!   linearization about the circle is exactly the restoring term the
//!   stability analysis assumes;
//! * the four-point regularized delta for spreading and interpolation
//!   ([`delta`]);
//! * a pseudo-spectral periodic fluid solver with exact projection and exact
//!   viscous factor ([`fluid`]);
//! * forward Euler for the fiber, giving the kick-then-drift splitting
//!   force → spread → fluid → interpolate → move.
//!
//! One simulation instance is plain sequential state; independent runs can
//! live on separate threads.  For a fixed grid the step is bitwise
//! deterministic — there is no internal threading and no reduction-order
//! ambiguity.
//!
//! The modulation `K(t) = κ(1 + 2τ sin t)` makes the stiffness positive for
//! all time exactly when τ < 1/2, which is the physical amplitude band the
//! tongue classification cares about; forcing amplitudes at or above 1/2 are
//! accepted but transiently soften the fiber to zero or negative stiffness.

mod delta;
mod fluid;

pub use delta::{interpolate, phi4, spread};
pub use fluid::FluidGrid;

use crate::floquet::PhysicalParameters;
use thiserror::Error;

/// The forcing period: the stiffness modulation is `sin t`, so one period is
/// 2π time units and all bookkeeping (samples, snapshots, envelopes) is done
/// in these units.
pub const FORCING_PERIOD: f64 = std::f64::consts::TAU;

/// Fluid speed above which a run is declared blown up.  The configuration
/// check couples this to the time step (`dt · BLOWUP_SPEED ≤ h`), so any run
/// that survives the guard also satisfied the advective CFL bound throughout.
pub const BLOWUP_SPEED: f64 = 10.0;

#[derive(Debug, Error)]
pub enum SimError {
    /// The fluid speed crossed [`BLOWUP_SPEED`] (or stopped being finite).
    #[error("simulation diverged at t = {t:.6}: fluid speed crossed the blow-up threshold")]
    Diverged { t: f64 },
    /// The evolving state became unusable (non-finite fiber positions).
    #[error("invalid state: {what}")]
    State { what: String },
    /// A precondition on sizes, steps, or parameters failed at setup.
    #[error("invalid configuration: {what}")]
    Config { what: String },
}

/// Time-periodic fiber stiffness `K(t) = κ(1 + 2τ sin t)`.
#[derive(Debug, Clone, Copy)]
pub struct ForcingSchedule {
    kappa: f64,
    tau: f64,
}

impl ForcingSchedule {
    pub fn new(kappa: f64, tau: f64) -> Result<Self, SimError> {
        if !(kappa > 0.0 && kappa.is_finite()) {
            return Err(SimError::Config {
                what: format!("base stiffness must be positive, got {kappa}"),
            });
        }
        if !(tau >= 0.0 && tau.is_finite()) {
            return Err(SimError::Config {
                what: format!("modulation amplitude must be non-negative, got {tau}"),
            });
        }
        Ok(ForcingSchedule { kappa, tau })
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// `K(t)`, positive for all `t` whenever `τ < 1/2`.
    pub fn stiffness(&self, t: f64) -> f64 {
        self.kappa * (1.0 + 2.0 * self.tau * t.sin())
    }
}

/// Closed Lagrangian curve: `m` material points at parameter values
/// `s_k = 2πk/m`, plus the rest radius and reference center used for the
/// radius signal `r(s_k) = |X_k − center|`.
#[derive(Debug, Clone)]
pub struct FiberState {
    points: Vec<[f64; 2]>,
    rest_radius: f64,
    center: [f64; 2],
}

impl FiberState {
    /// A circle of radius `rest_radius·(1 + amplitude·cos(mode·s))` — the
    /// standard seeded shape.  `m` must be a power of two (so mode analysis
    /// has clean wavenumbers) and at least 8.
    pub fn perturbed_circle(
        m: usize,
        rest_radius: f64,
        center: [f64; 2],
        mode: u32,
        amplitude: f64,
    ) -> Result<Self, SimError> {
        if !(rest_radius > 0.0 && rest_radius.is_finite()) {
            return Err(SimError::Config {
                what: format!("rest radius must be positive, got {rest_radius}"),
            });
        }
        let points = (0..m)
            .map(|k| {
                let s = std::f64::consts::TAU * k as f64 / m as f64;
                let r = rest_radius * (1.0 + amplitude * (mode as f64 * s).cos());
                [center[0] + r * s.cos(), center[1] + r * s.sin()]
            })
            .collect();
        Self::from_points(points, rest_radius, center)
    }

    /// The unperturbed circle.
    pub fn circle(m: usize, rest_radius: f64, center: [f64; 2]) -> Result<Self, SimError> {
        Self::perturbed_circle(m, rest_radius, center, 0, 0.0)
    }

    /// Wraps an explicit point list (for tests and for restoring snapshots).
    pub fn from_points(
        points: Vec<[f64; 2]>,
        rest_radius: f64,
        center: [f64; 2],
    ) -> Result<Self, SimError> {
        let m = points.len();
        if m < 8 || !m.is_power_of_two() {
            return Err(SimError::Config {
                what: format!("fiber point count must be a power of two ≥ 8, got {m}"),
            });
        }
        if points.iter().any(|p| !(p[0].is_finite() && p[1].is_finite())) {
            return Err(SimError::State {
                what: "fiber points must be finite".into(),
            });
        }
        Ok(FiberState {
            points,
            rest_radius,
            center,
        })
    }

    pub fn m(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[[f64; 2]] {
        &self.points
    }

    pub fn rest_radius(&self) -> f64 {
        self.rest_radius
    }

    pub fn center(&self) -> [f64; 2] {
        self.center
    }

    /// Lagrangian parameter spacing Δs = 2π/m.
    pub fn ds(&self) -> f64 {
        std::f64::consts::TAU / self.m() as f64
    }

    /// Radius signal `r_k = |X_k − center|`.
    pub fn radii(&self) -> Vec<f64> {
        self.points
            .iter()
            .map(|p| (p[0] - self.center[0]).hypot(p[1] - self.center[1]))
            .collect()
    }

    pub fn mean_radius(&self) -> f64 {
        self.radii().iter().sum::<f64>() / self.m() as f64
    }

    /// Shape-mode amplitudes `a_p = |(1/m) Σ_k (r_k − r̄) e^{−i p s_k}|` for
    /// `p = 1..=p_max` (entry `p−1` of the result).  With this normalization
    /// a perturbation `r = R(1 + ε cos(p s))` has `a_p = εR/2` exactly, and
    /// Parseval reads `Σ_{p<m/2} 2a_p² ≤ (1/m) Σ_k (r_k − r̄)²`.
    pub fn mode_amplitudes(&self, p_max: usize) -> Vec<f64> {
        let m = self.m();
        assert!(p_max < m, "mode index must be below the point count");
        let radii = self.radii();
        let mean = radii.iter().sum::<f64>() / m as f64;
        let mut out = Vec::with_capacity(p_max);
        for p in 1..=p_max {
            let mut re = 0.0;
            let mut im = 0.0;
            for (k, r) in radii.iter().enumerate() {
                // Reduce the angle exactly: p·k mod m keeps the argument small
                // even for the highest modes.
                let angle = std::f64::consts::TAU * ((p * k) % m) as f64 / m as f64;
                let (sin, cos) = angle.sin_cos();
                let d = r - mean;
                re += d * cos;
                im -= d * sin;
            }
            out.push(re.hypot(im) / m as f64);
        }
        out
    }

    /// Forward-Euler advection by the interpolated velocities.
    pub fn advance(&mut self, velocities: &[[f64; 2]], dt: f64) {
        assert_eq!(velocities.len(), self.m(), "one velocity per fiber point");
        for (p, v) in self.points.iter_mut().zip(velocities) {
            p[0] += dt * v[0];
            p[1] += dt * v[1];
        }
    }
}

/// Elastic force density at each fiber point: the discrete tension
/// `F_k = K(t)·(X_{k+1} − 2X_k + X_{k−1})/Δs²`, a zero-rest-length model
/// whose linearization about the circle carries exactly the restoring terms
/// assumed by the stability analysis.  Indexing wraps around the closed
/// curve.
pub fn fiber_force(fiber: &FiberState, t: f64, schedule: &ForcingSchedule) -> Vec<[f64; 2]> {
    let m = fiber.m();
    let ds = fiber.ds();
    let c = schedule.stiffness(t) / (ds * ds);
    let pts = fiber.points();
    (0..m)
        .map(|k| {
            let prev = pts[(k + m - 1) % m];
            let here = pts[k];
            let next = pts[(k + 1) % m];
            [
                c * (next[0] - 2.0 * here[0] + prev[0]),
                c * (next[1] - 2.0 * here[1] + prev[1]),
            ]
        })
        .collect()
}

/// Recorded history of the shape-mode amplitudes `a_p(t)`.
#[derive(Debug, Clone)]
pub struct ModeAmplitudeSeries {
    times: Vec<f64>,
    rows: Vec<Vec<f64>>,
    p_max: usize,
}

impl ModeAmplitudeSeries {
    pub fn new(p_max: usize) -> Self {
        ModeAmplitudeSeries {
            times: Vec::new(),
            rows: Vec::new(),
            p_max,
        }
    }

    pub fn push(&mut self, t: f64, amplitudes: Vec<f64>) {
        assert_eq!(amplitudes.len(), self.p_max, "row width must match p_max");
        self.times.push(t);
        self.rows.push(amplitudes);
    }

    /// Largest `p` recorded; rows run `p = 1..=p_max`.
    pub fn p_max(&self) -> usize {
        self.p_max
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    /// The amplitude row at sample `i`, ordered `a_1, …, a_{p_max}`.
    pub fn row(&self, i: usize) -> &[f64] {
        &self.rows[i]
    }

    /// The history of a single mode.
    pub fn amplitude_history(&self, p: usize) -> Vec<f64> {
        assert!((1..=self.p_max).contains(&p), "mode out of range");
        self.rows.iter().map(|r| r[p - 1]).collect()
    }

    /// Splits the record into consecutive windows of one `period` and takes
    /// the maximum of `a_p` in each: the envelope the growth criterion reads.
    pub fn per_period_maxima(&self, p: usize, period: f64) -> Vec<f64> {
        assert!(period > 0.0);
        let hist = self.amplitude_history(p);
        let t_last = *self.times.last().expect("series must not be empty");
        let buckets = (t_last / period).round().max(1.0) as usize;
        let mut maxima = vec![f64::NEG_INFINITY; buckets];
        for (t, a) in self.times.iter().zip(&hist) {
            let b = ((t / period).floor() as usize).min(buckets - 1);
            maxima[b] = maxima[b].max(*a);
        }
        maxima
    }

    /// The growth verdict: the per-period maxima of `a_p` strictly increase
    /// over the final `tail` periods.  Returns false when fewer than `tail`
    /// full periods were recorded.
    pub fn envelope_grows(&self, p: usize, period: f64, tail: usize) -> bool {
        let maxima = self.per_period_maxima(p, period);
        if maxima.len() < tail || tail < 2 {
            return false;
        }
        maxima[maxima.len() - tail..]
            .windows(2)
            .all(|w| w[1] > w[0])
    }

    /// The mirrored verdict for stable runs: strictly decreasing maxima over
    /// the final `tail` periods.
    pub fn envelope_decays(&self, p: usize, period: f64, tail: usize) -> bool {
        let maxima = self.per_period_maxima(p, period);
        if maxima.len() < tail || tail < 2 {
            return false;
        }
        maxima[maxima.len() - tail..]
            .windows(2)
            .all(|w| w[1] < w[0])
    }

    /// Max of `a_p` over the final period divided by its max over the first —
    /// the size of the excursion, complementing the monotone-envelope check.
    pub fn growth_ratio(&self, p: usize, period: f64) -> f64 {
        let maxima = self.per_period_maxima(p, period);
        maxima[maxima.len() - 1] / maxima[0]
    }
}

/// Discretization knobs for a verification run.  The defaults are the
/// desk-scale configuration: a 128² grid on a box four rest radii across,
/// 256 fiber points, and 2048 steps per forcing period — the smallest
/// power-of-two step count satisfying the advective bound
/// `dt · BLOWUP_SPEED ≤ h` on that grid.
#[derive(Debug, Clone)]
pub struct SimConfig {
    /// Fluid grid points per side (even, ≥ 8).
    pub grid_points: usize,
    /// Fiber points (power of two, ≥ 8).
    pub fiber_points: usize,
    /// Domain side length; the fiber must fit with room to spare.
    pub domain: f64,
    /// Fiber rest radius.
    pub rest_radius: f64,
    /// Time steps per forcing period.
    pub steps_per_period: usize,
    /// Whole forcing periods to run.
    pub periods: usize,
    /// Amplitude samples recorded per period (divides `steps_per_period`).
    pub samples_per_period: usize,
    /// Relative amplitude of the seeded shape perturbation.
    pub perturbation: f64,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            grid_points: 128,
            fiber_points: 256,
            domain: 4.0,
            rest_radius: 1.0,
            steps_per_period: 2048,
            periods: 20,
            samples_per_period: 32,
            perturbation: 0.05,
        }
    }
}

impl SimConfig {
    pub fn dt(&self) -> f64 {
        FORCING_PERIOD / self.steps_per_period as f64
    }

    fn validate(&self, p_init: u32) -> Result<(), SimError> {
        let fail = |what: String| Err(SimError::Config { what });
        if self.grid_points < 8 || self.grid_points % 2 != 0 {
            return fail(format!(
                "grid size must be even and at least 8, got {}",
                self.grid_points
            ));
        }
        if self.fiber_points < 8 || !self.fiber_points.is_power_of_two() {
            return fail(format!(
                "fiber point count must be a power of two ≥ 8, got {}",
                self.fiber_points
            ));
        }
        if !(self.domain > 0.0 && self.rest_radius > 0.0) {
            return fail("domain and rest radius must be positive".into());
        }
        if self.rest_radius * (1.0 + self.perturbation) * 2.0 >= self.domain {
            return fail(format!(
                "fiber of radius {} does not fit in a periodic box of side {}",
                self.rest_radius, self.domain
            ));
        }
        if self.periods == 0 {
            return fail("must run at least one forcing period".into());
        }
        if self.samples_per_period == 0
            || self.steps_per_period % self.samples_per_period != 0
        {
            return fail(format!(
                "samples per period ({}) must divide steps per period ({})",
                self.samples_per_period, self.steps_per_period
            ));
        }
        if !(0.0..1.0).contains(&self.perturbation) {
            return fail(format!(
                "perturbation must lie in [0, 1), got {}",
                self.perturbation
            ));
        }
        if p_init < 1 || p_init as usize >= self.fiber_points / 2 {
            return fail(format!(
                "seed mode must satisfy 1 ≤ p < fiber_points/2, got {p_init}"
            ));
        }
        // The advective stability bound for the explicit half of the
        // splitting, stated against the blow-up threshold: any speed the
        // guard allows then also satisfies u·dt ≤ h.
        let h = self.domain / self.grid_points as f64;
        if self.dt() * BLOWUP_SPEED > h {
            return fail(format!(
                "time step {:.3e} too large for mesh width {h:.3e}: need dt·{BLOWUP_SPEED} ≤ h",
                self.dt()
            ));
        }
        Ok(())
    }
}

/// Everything a verification run produces: the mode-amplitude record, the
/// mean-radius trace on the same sample times, and one fiber snapshot per
/// period (plus the initial shape).
#[derive(Debug, Clone)]
pub struct SimulationRun {
    pub series: ModeAmplitudeSeries,
    pub mean_radius: Vec<f64>,
    pub snapshots: Vec<(f64, Vec<[f64; 2]>)>,
}

/// Runs the coupled fiber–fluid system for `config.periods` forcing periods
/// with stiffness `κ(1 + 2τ sin t)`, seeding a 5-percent-style cosine
/// perturbation at wavenumber `p_init` (the amplitude is
/// `config.perturbation`).
///
/// Each step is the first-order splitting force → spread → fluid →
/// interpolate → move.  The fluid speed is checked against [`BLOWUP_SPEED`]
/// after every step and a crossing aborts the run with the time stamp.
pub fn run_simulation(
    params: &PhysicalParameters,
    tau: f64,
    p_init: u32,
    config: &SimConfig,
) -> Result<SimulationRun, SimError> {
    config.validate(p_init)?;
    let schedule = ForcingSchedule::new(params.kappa, tau)?;
    let g = config.grid_points;
    let l = config.domain;
    let center = [l / 2.0, l / 2.0];
    let mut fiber = FiberState::perturbed_circle(
        config.fiber_points,
        config.rest_radius,
        center,
        p_init,
        config.perturbation,
    )?;
    let mut grid = FluidGrid::new(g, l, params.nu)?;
    let dt = config.dt();
    let stride = config.steps_per_period / config.samples_per_period;
    let p_max = config.fiber_points / 2 - 1;

    let mut series = ModeAmplitudeSeries::new(p_max);
    let mut mean_radius = Vec::new();
    let mut snapshots = Vec::new();
    series.push(0.0, fiber.mode_amplitudes(p_max));
    mean_radius.push(fiber.mean_radius());
    snapshots.push((0.0, fiber.points().to_vec()));

    let mut fx = vec![0.0; g * g];
    let mut fy = vec![0.0; g * g];
    let mut velocities = Vec::with_capacity(fiber.m());
    let total_steps = config.steps_per_period * config.periods;
    for n in 0..total_steps {
        let t = n as f64 * dt;
        let forces = fiber_force(&fiber, t, &schedule);
        spread(fiber.points(), &forces, fiber.ds(), g, l, &mut fx, &mut fy)?;
        grid.step(&fx, &fy, dt);
        let speed = grid.max_speed();
        if !speed.is_finite() || speed > BLOWUP_SPEED {
            return Err(SimError::Diverged {
                t: (n + 1) as f64 * dt,
            });
        }
        interpolate(fiber.points(), g, l, grid.u(), grid.v(), &mut velocities)?;
        fiber.advance(&velocities, dt);
        let done = n + 1;
        if done % stride == 0 {
            series.push(done as f64 * dt, fiber.mode_amplitudes(p_max));
            mean_radius.push(fiber.mean_radius());
        }
        if done % config.steps_per_period == 0 {
            snapshots.push((done as f64 * dt, fiber.points().to_vec()));
        }
    }
    Ok(SimulationRun {
        series,
        mean_radius,
        snapshots,
    })
}
