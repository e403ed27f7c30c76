//! Particle minimisation of the discrete energy: multi-start projected
//! gradient descent with Armijo backtracking, and an explicit Euler
//! integrator for the particle form of the aggregation flow.
//!
//! Both move particle `i` along `-v_i`, where `v_i = sum_j w_j grad W(x_i - x_j)`
//! is the gradient of `W * rho` at `x_i` (the energy gradient divided by
//! the particle's weight). Step acceptance compares the excess energy
//! relative to `W(0)` so that nearly collapsed clusters remain resolvable.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::energy::{
    self, energy_offset, excess_energy, map_rows, velocity_field, ConfigurationError, ParticleConfiguration,
    SelfInteraction,
};
use crate::potential::PotentialProfile;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MinimiseError {
    #[error("invalid options: {0}")]
    InvalidOptions(String),
    #[error("could not draw a finite-energy initial configuration in {attempts} attempts")]
    Initialisation { attempts: usize },
    #[error("initial configuration has non-finite energy")]
    NonFiniteStart,
    #[error(transparent)]
    Configuration(#[from] ConfigurationError),
    #[error("time step underflow (dt = {dt:e}) at t = {time}")]
    DtUnderflow { time: f64, dt: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum StepRule {
    /// Fixed step `h`, halved whenever it would increase the energy.
    Fixed { h: f64 },
    /// Armijo backtracking. The first trial is `initial`; later trials start
    /// from the Barzilai-Borwein step of the last move when `spectral` is set
    /// and that step is positive, else from the last accepted step divided
    /// by `shrink`.
    Backtracking {
        c: f64,
        shrink: f64,
        initial: f64,
        #[serde(default = "default_spectral")]
        spectral: bool,
    },
}

impl Default for StepRule {
    fn default() -> Self {
        StepRule::Backtracking {
            c: 1e-4,
            shrink: 0.5,
            initial: 1.0,
            spectral: true,
        }
    }
}

fn default_spectral() -> bool {
    true
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MinimiseOptions {
    pub n: usize,
    pub restarts: usize,
    pub max_iters: usize,
    /// Stop once `max_i |v_i| <= grad_tol` (projected on the ball boundary).
    pub grad_tol: f64,
    pub step_rule: StepRule,
    /// Constrain every particle to the closed ball of this radius.
    pub ball_radius: Option<f64>,
    pub recentre: bool,
    pub seed: u64,
    /// Radius of the initial uniform cloud; `max(4 R6, 4)` when unset.
    pub init_radius: Option<f64>,
}

impl Default for MinimiseOptions {
    fn default() -> Self {
        MinimiseOptions {
            n: 64,
            restarts: 8,
            max_iters: 20_000,
            grad_tol: 1e-8,
            step_rule: StepRule::default(),
            ball_radius: None,
            recentre: true,
            seed: 0,
            init_radius: None,
        }
    }
}

impl MinimiseOptions {
    pub fn validate(&self) -> Result<(), MinimiseError> {
        let bad = |msg: &str| Err(MinimiseError::InvalidOptions(msg.into()));
        if self.n < 2 {
            return bad("n must be at least 2");
        }
        if self.restarts < 1 {
            return bad("restarts must be at least 1");
        }
        if !(self.grad_tol > 0.0) {
            return bad("grad_tol must be positive");
        }
        validate_rule(&self.step_rule)?;
        if let Some(r) = self.ball_radius {
            if !(r > 0.0 && r.is_finite()) {
                return bad("ball_radius must be positive");
            }
        }
        if let Some(r) = self.init_radius {
            if !(r > 0.0 && r.is_finite()) {
                return bad("init_radius must be positive");
            }
        }
        Ok(())
    }

    pub fn initial_radius(&self, profile: &PotentialProfile) -> f64 {
        let default = (4.0 * profile.monotone_radius().unwrap_or(1.0)).max(4.0);
        let r = self.init_radius.unwrap_or(default);
        match self.ball_radius {
            Some(ball) => r.min(ball),
            None => r,
        }
    }
}

fn validate_rule(rule: &StepRule) -> Result<(), MinimiseError> {
    match *rule {
        StepRule::Fixed { h } if !(h > 0.0) => Err(MinimiseError::InvalidOptions("fixed step must be positive".into())),
        StepRule::Backtracking { c, shrink, initial, .. } => {
            if !(c > 0.0 && c < 1.0) {
                Err(MinimiseError::InvalidOptions("Armijo constant must lie in (0, 1)".into()))
            } else if !(shrink > 0.0 && shrink < 1.0) {
                Err(MinimiseError::InvalidOptions("shrink factor must lie in (0, 1)".into()))
            } else if !(initial > 0.0) {
                Err(MinimiseError::InvalidOptions("initial step must be positive".into()))
            } else {
                Ok(())
            }
        }
        _ => Ok(()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TraceRow {
    pub iter: usize,
    pub energy: f64,
    pub grad_norm: f64,
    /// Accepted step length (line search) or time step (flow).
    pub dt: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RestartSummary {
    pub restart: usize,
    pub energy: f64,
    pub converged: bool,
    pub iterations: usize,
    /// Energy never increased along the accepted steps of this restart.
    pub monotone: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct MinimisationResult {
    #[serde(skip)]
    pub config: ParticleConfiguration,
    /// Diagonal-free discrete energy of `config`.
    pub energy: f64,
    pub grad_norm: f64,
    pub converged: bool,
    pub iterations: usize,
    pub rejected_steps: usize,
    #[serde(skip)]
    pub energy_trace: Vec<TraceRow>,
    pub diameter: f64,
    pub restarts_summary: Vec<RestartSummary>,
    /// Restarts ended at energies differing by more than `1e-6` relative.
    pub multimodal: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepOutcome {
    Accepted,
    /// No acceptable step could be found.
    Stalled,
}

/// Stateful projected descent on one configuration.
#[derive(Clone, Debug)]
pub struct Descent {
    profile: PotentialProfile,
    config: ParticleConfiguration,
    offset: f64,
    excess: f64,
    velocity: Vec<f64>,
    rule: StepRule,
    ball_radius: Option<f64>,
    recentre: bool,
    step: f64,
    iterations: usize,
    rejected: usize,
    trace: Vec<TraceRow>,
}

impl Descent {
    pub fn new(
        profile: &PotentialProfile,
        mut config: ParticleConfiguration,
        rule: StepRule,
        ball_radius: Option<f64>,
        recentre: bool,
    ) -> Result<Self, MinimiseError> {
        validate_rule(&rule)?;
        if let Some(r) = ball_radius {
            let d = config.dim();
            project(config.positions_mut(), d, r);
        } else if recentre {
            config.recentre();
        }
        let excess = excess_energy(&config, profile);
        if !excess.is_finite() {
            return Err(MinimiseError::NonFiniteStart);
        }
        let velocity = velocity_field(&config, profile).map_err(|_| MinimiseError::NonFiniteStart)?;
        let step = match rule {
            StepRule::Fixed { h } => h,
            StepRule::Backtracking { initial, .. } => initial,
        };
        let mut descent = Descent {
            profile: profile.clone(),
            offset: energy_offset(&config, profile),
            config,
            excess,
            velocity,
            rule,
            ball_radius,
            recentre,
            step,
            iterations: 0,
            rejected: 0,
            trace: Vec::new(),
        };
        descent.trace.push(TraceRow {
            iter: 0,
            energy: descent.energy(),
            grad_norm: descent.grad_norm(),
            dt: 0.0,
        });
        Ok(descent)
    }

    pub fn config(&self) -> &ParticleConfiguration {
        &self.config
    }

    /// Current diagonal-free energy.
    pub fn energy(&self) -> f64 {
        self.offset + self.excess
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    pub fn trace(&self) -> &[TraceRow] {
        &self.trace
    }

    /// `max_i |v_i|`, dropping the outward radial part for particles on the
    /// constraint sphere.
    pub fn grad_norm(&self) -> f64 {
        projected_velocity_norm(&self.config, &self.velocity, self.ball_radius)
    }

    pub fn step(&mut self) -> StepOutcome {
        let d = self.config.dim();
        let current = self.config.positions().to_vec();
        let mut trial = self.config.clone();
        let (c, shrink) = match self.rule {
            StepRule::Fixed { .. } => (0.0, 0.5),
            StepRule::Backtracking { c, shrink, .. } => (c, shrink),
        };
        let mut t = self.step;
        for _ in 0..200 {
            {
                let pos = trial.positions_mut();
                for (k, p) in pos.iter_mut().enumerate() {
                    *p = current[k] - t * self.velocity[k];
                }
                if let Some(r) = self.ball_radius {
                    project(pos, d, r);
                }
            }
            // g . (x_new - x) with g_i = w_i v_i
            let predicted: f64 = trial
                .positions()
                .chunks_exact(d)
                .zip(current.chunks_exact(d))
                .zip(self.velocity.chunks_exact(d))
                .zip(self.config.weights())
                .map(|(((xn, xo), v), w)| w * xn.iter().zip(xo).zip(v).map(|((a, b), g)| g * (a - b)).sum::<f64>())
                .sum();
            if !(predicted < 0.0) {
                return StepOutcome::Stalled;
            }
            let excess = excess_energy(&trial, &self.profile);
            if excess.is_finite() && excess <= self.excess + c * predicted {
                if let Ok(velocity) = velocity_field(&trial, &self.profile) {
                    let spectral = match self.rule {
                        StepRule::Backtracking { spectral: true, .. } => {
                            spectral_step(&current, trial.positions(), &self.velocity, &velocity, trial.weights(), d)
                        }
                        _ => None,
                    };
                    self.accept(trial, excess, velocity, t);
                    self.step = match self.rule {
                        StepRule::Fixed { .. } => t,
                        StepRule::Backtracking { .. } => spectral.unwrap_or(t / shrink).min(1e6),
                    };
                    return StepOutcome::Accepted;
                }
            }
            self.rejected += 1;
            t *= shrink;
            if t < 1e-300 {
                break;
            }
        }
        StepOutcome::Stalled
    }

    fn accept(&mut self, mut config: ParticleConfiguration, excess: f64, velocity: Vec<f64>, t: f64) {
        if self.recentre && self.ball_radius.is_none() {
            // v is translation invariant, so it is kept
            config.recentre();
        }
        self.config = config;
        self.excess = excess;
        self.velocity = velocity;
        self.iterations += 1;
        self.trace.push(TraceRow {
            iter: self.iterations,
            energy: self.energy(),
            grad_norm: self.grad_norm(),
            dt: t,
        });
    }

    /// Iterates until the gradient tolerance, `max_iters`, or a stall.
    pub fn run(&mut self, grad_tol: f64, max_iters: usize) -> bool {
        while self.iterations < max_iters {
            if self.grad_norm() <= grad_tol {
                return true;
            }
            if self.step() == StepOutcome::Stalled {
                break;
            }
        }
        self.grad_norm() <= grad_tol
    }

    fn into_result(self, converged: bool) -> MinimisationResult {
        let energy = self.energy();
        let grad_norm = self.grad_norm();
        MinimisationResult {
            diameter: self.config.diameter(),
            config: self.config,
            energy,
            grad_norm,
            converged,
            iterations: self.iterations,
            rejected_steps: self.rejected,
            energy_trace: self.trace,
            restarts_summary: Vec::new(),
            multimodal: false,
        }
    }
}

/// `<s, s>_w / <s, y>_w` for `s = x_new - x_old`, `y = v_new - v_old`,
/// in the weight-scaled inner product matching the direction `-v`.
fn spectral_step(old: &[f64], new: &[f64], v_old: &[f64], v_new: &[f64], weights: &[f64], d: usize) -> Option<f64> {
    let mut ss = 0.0;
    let mut sy = 0.0;
    for (i, w) in weights.iter().enumerate() {
        for k in i * d..(i + 1) * d {
            let s = new[k] - old[k];
            ss += w * s * s;
            sy += w * s * (v_new[k] - v_old[k]);
        }
    }
    let t = ss / sy;
    (sy > 0.0 && t.is_finite() && t > 0.0).then_some(t)
}

fn project(positions: &mut [f64], d: usize, radius: f64) {
    for x in positions.chunks_exact_mut(d) {
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if r > radius {
            let s = radius / r;
            x.iter_mut().for_each(|v| *v *= s);
        }
    }
}

fn projected_velocity_norm(config: &ParticleConfiguration, velocity: &[f64], ball: Option<f64>) -> f64 {
    let d = config.dim();
    let mut worst = 0.0f64;
    for (x, v) in config.points().zip(velocity.chunks_exact(d)) {
        let mut sq: f64 = v.iter().map(|a| a * a).sum();
        if let Some(radius) = ball {
            let r = x.iter().map(|a| a * a).sum::<f64>().sqrt();
            let radial: f64 = x.iter().zip(v).map(|(a, b)| a * b).sum::<f64>() / r.max(f64::MIN_POSITIVE);
            // -v points outward: the constraint is active for that component
            if r >= radius * (1.0 - 1e-12) && radial < 0.0 {
                sq = (sq - radial * radial).max(0.0);
            }
        }
        worst = worst.max(sq.sqrt());
    }
    worst
}

pub fn trace_is_monotone(trace: &[TraceRow]) -> bool {
    trace.windows(2).all(|w| w[1].energy <= w[0].energy)
}

/// `n` i.i.d. uniform points in `B(0, radius)`.
pub fn sample_uniform_ball<R: Rng>(rng: &mut R, n: usize, d: usize, radius: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n * d);
    let mut x = vec![0.0; d];
    for _ in 0..n {
        loop {
            let mut sq = 0.0;
            for v in x.iter_mut() {
                *v = rng.sample::<f64, _>(StandardNormal);
                sq += *v * *v;
            }
            if sq > 0.0 {
                let u: f64 = rng.random();
                let s = radius * u.powf(1.0 / d as f64) / sq.sqrt();
                out.extend(x.iter().map(|v| v * s));
                break;
            }
        }
    }
    out
}

/// The ChaCha stream used by restart `index` of a run seeded with `seed`.
pub fn restart_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

fn initial_configuration(
    profile: &PotentialProfile,
    opts: &MinimiseOptions,
    restart: usize,
) -> Result<ParticleConfiguration, MinimiseError> {
    const ATTEMPTS: usize = 16;
    let d = profile.dimension();
    let radius = opts.initial_radius(profile);
    let mut rng = restart_rng(opts.seed, restart);
    for _ in 0..ATTEMPTS {
        let positions = sample_uniform_ball(&mut rng, opts.n, d, radius);
        let config = ParticleConfiguration::uniform(d, positions)?;
        if excess_energy(&config, profile).is_finite() {
            return Ok(config);
        }
    }
    Err(MinimiseError::Initialisation { attempts: ATTEMPTS })
}

/// Best-of-restarts descent from seeded uniform clouds.
///
/// Restarts run in parallel; each draws from its own ChaCha stream, so the
/// result is independent of scheduling. Global optimality is not claimed.
pub fn minimise_discrete(
    profile: &PotentialProfile,
    opts: &MinimiseOptions,
) -> Result<MinimisationResult, MinimiseError> {
    opts.validate()?;
    let runs = map_rows(opts.restarts, |restart| -> Result<MinimisationResult, MinimiseError> {
        let config = initial_configuration(profile, opts, restart)?;
        let mut descent = Descent::new(profile, config, opts.step_rule, opts.ball_radius, opts.recentre)?;
        let converged = descent.run(opts.grad_tol, opts.max_iters);
        Ok(descent.into_result(converged))
    });
    let mut results = Vec::with_capacity(runs.len());
    for r in runs {
        results.push(r?);
    }
    let summary: Vec<RestartSummary> = results
        .iter()
        .enumerate()
        .map(|(restart, r)| RestartSummary {
            restart,
            energy: r.energy,
            converged: r.converged,
            iterations: r.iterations,
            monotone: trace_is_monotone(&r.energy_trace),
        })
        .collect();
    let lo = summary.iter().map(|s| s.energy).fold(f64::INFINITY, f64::min);
    let hi = summary.iter().map(|s| s.energy).fold(f64::NEG_INFINITY, f64::max);
    let best_index = summary
        .iter()
        .position(|s| s.energy == lo)
        .unwrap_or(0);
    let mut best = results.swap_remove(best_index);
    best.multimodal = hi - lo > 1e-6 * lo.abs().max(1.0);
    best.restarts_summary = summary;
    Ok(best)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FlowOptions {
    pub dt: f64,
    pub t_end: f64,
    /// Keep every `record_every`-th accepted step in the trajectory.
    pub record_every: usize,
    /// Reported `converged` means the final `max_i |v_i|` is below this.
    pub grad_tol: f64,
}

impl Default for FlowOptions {
    fn default() -> Self {
        FlowOptions {
            dt: 0.1,
            t_end: 100.0,
            record_every: 100,
            grad_tol: 1e-8,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Snapshot {
    pub step: usize,
    pub time: f64,
    #[serde(skip)]
    pub positions: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FlowResult {
    pub result: MinimisationResult,
    #[serde(skip)]
    pub trajectory: Vec<Snapshot>,
    /// `max_t |centre of mass(t) - centre of mass(0)|` over accepted steps.
    pub com_drift: f64,
    pub final_dt: f64,
    pub time: f64,
}

const MIN_DT: f64 = 1e-15;

/// Explicit Euler for `x_i' = -sum_{j != i} w_j grad W(x_i - x_j)`.
///
/// A step that raises the energy is discarded and `dt` halved; `dt` never
/// grows back. No recentring, so the centre of mass drift measures the
/// pairwise force cancellation.
pub fn flow_simulate(
    profile: &PotentialProfile,
    config0: &ParticleConfiguration,
    opts: &FlowOptions,
) -> Result<FlowResult, MinimiseError> {
    if !(opts.dt > 0.0) || !(opts.t_end >= 0.0) || opts.record_every == 0 {
        return Err(MinimiseError::InvalidOptions(
            "flow needs dt > 0, t_end >= 0 and record_every >= 1".into(),
        ));
    }
    let mut config = config0.clone();
    let offset = energy_offset(&config, profile);
    let mut excess = excess_energy(&config, profile);
    if !excess.is_finite() {
        return Err(MinimiseError::NonFiniteStart);
    }
    let mut velocity = velocity_field(&config, profile).map_err(|_| MinimiseError::NonFiniteStart)?;
    let com0 = config.centre_of_mass();
    let mut dt = opts.dt;
    let mut time = 0.0;
    let mut steps = 0;
    let mut rejected = 0;
    let mut drift = 0.0f64;
    let mut trace = vec![TraceRow {
        iter: 0,
        energy: offset + excess,
        grad_norm: projected_velocity_norm(&config, &velocity, None),
        dt: 0.0,
    }];
    let mut trajectory = vec![Snapshot {
        step: 0,
        time: 0.0,
        positions: config.positions().to_vec(),
    }];
    let mut trial = config.clone();

    while time < opts.t_end {
        let h = dt.min(opts.t_end - time);
        for (p, (x, v)) in trial
            .positions_mut()
            .iter_mut()
            .zip(config.positions().iter().zip(&velocity))
        {
            *p = x - h * v;
        }
        let new_excess = excess_energy(&trial, profile);
        let new_velocity = if new_excess.is_finite() && new_excess <= excess {
            velocity_field(&trial, profile).ok()
        } else {
            None
        };
        let Some(new_velocity) = new_velocity else {
            rejected += 1;
            dt *= 0.5;
            if dt < MIN_DT {
                return Err(MinimiseError::DtUnderflow { time, dt });
            }
            continue;
        };
        std::mem::swap(&mut config, &mut trial);
        excess = new_excess;
        velocity = new_velocity;
        time += h;
        steps += 1;
        let com = config.centre_of_mass();
        let shift = com.iter().zip(&com0).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
        drift = drift.max(shift);
        trace.push(TraceRow {
            iter: steps,
            energy: offset + excess,
            grad_norm: projected_velocity_norm(&config, &velocity, None),
            dt: h,
        });
        if steps % opts.record_every == 0 || time >= opts.t_end {
            trajectory.push(Snapshot {
                step: steps,
                time,
                positions: config.positions().to_vec(),
            });
        }
    }

    let grad_norm = projected_velocity_norm(&config, &velocity, None);
    let energy = offset + excess;
    let monotone = trace_is_monotone(&trace);
    let result = MinimisationResult {
        diameter: config.diameter(),
        config,
        energy,
        grad_norm,
        converged: grad_norm <= opts.grad_tol,
        iterations: steps,
        rejected_steps: rejected,
        energy_trace: trace,
        restarts_summary: vec![RestartSummary {
            restart: 0,
            energy,
            converged: grad_norm <= opts.grad_tol,
            iterations: steps,
            monotone,
        }],
        multimodal: false,
    };
    Ok(FlowResult {
        result,
        trajectory,
        com_drift: drift,
        final_dt: dt,
        time,
    })
}

/// Genuine measure energy of a particle configuration (self pairs included),
/// usable as an upper bound for the minimum over measures.
pub fn measure_energy(config: &ParticleConfiguration, profile: &PotentialProfile) -> f64 {
    energy::discrete_energy(config, profile, SelfInteraction::Include)
}
