//! Stability classification of pair potentials.
//!
//! A potential is unstable when some probability measure has energy below
//! `W_inf / 2`. Two sufficient tests are implemented: `W_inf = +inf`, and a
//! negative integral of `W - W_inf` over `R^d`. Neither is necessary, so a
//! failed test is reported as undetermined, never as stable. The only
//! stability-side statement made is the equality case `W(0) = W_inf`,
//! where the Dirac mass attains `W_inf / 2`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use statrs::function::beta::beta_reg;
use statrs::function::gamma::{gamma, gamma_ui};
use thiserror::Error;

use crate::energy::map_rows;
use crate::potential::{Hypothesis, PotentialProfile, Tail};
use crate::quadrature::{integrate_with_breakpoints, QuadratureOptions};

/// Default seed of the Monte-Carlo cross-check.
pub const MONTE_CARLO_SEED: u64 = 0x5EED;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StabilityError {
    #[error("ball radius must be positive, got {0}")]
    NonPositiveRadius(f64),
    #[error("{}: uniform-ball energy diverges", Hypothesis::LocallyIntegrable)]
    NotIntegrable,
    #[error("quadrature did not converge (estimated error {abs_error:e})")]
    Quadrature { abs_error: f64 },
}

/// Surface area of the unit sphere in `R^d`, `2 pi^(d/2) / Gamma(d/2)`.
pub fn unit_sphere_area(d: usize) -> f64 {
    let h = d as f64 / 2.0;
    2.0 * std::f64::consts::PI.powf(h) / gamma(h)
}

/// Volume of the unit ball in `R^d`.
pub fn unit_ball_volume(d: usize) -> f64 {
    let h = d as f64 / 2.0;
    std::f64::consts::PI.powf(h) / gamma(h + 1.0)
}

/// Density of `|X - Y|` for `X, Y` independent and uniform on a `d`-ball of radius `radius`.
///
/// `f(s) = sigma_{d-1} s^(d-1) I_x((d+1)/2, 1/2) / |B(0,1)| R^d` with `x = 1 - (s/2R)^2`;
/// the incomplete beta factor is the normalised volume of the lens
/// `B(0,R) ∩ B(s e_1, R)`.
pub fn distance_density(s: f64, radius: f64, d: usize) -> f64 {
    if !(0.0..=2.0 * radius).contains(&s) {
        return 0.0;
    }
    let t = s / (2.0 * radius);
    let x = (1.0 - t * t).clamp(0.0, 1.0);
    let lens = beta_reg((d as f64 + 1.0) / 2.0, 0.5, x);
    unit_sphere_area(d) * s.powi(d as i32 - 1) * lens / (unit_ball_volume(d) * radius.powi(d as i32))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Unstable,
    BoundaryStable,
    Undetermined,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reason {
    WInfinityDivergent,
    NegativeIntegral,
    WitnessFound,
    DeltaEquality,
    IntegralNonnegative,
    /// `W - W_inf` has a non-integrable positive tail.
    IntegralInapplicable,
    QuadratureFailed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExistenceVerdict {
    MinimiserExists,
    /// Needs a proof of strict stability, which no routine here produces;
    /// kept for report consumers.
    NoMinimiser,
    Unknown,
}

/// A measure with energy at or below `W_inf / 2`: the uniform ball of
/// `radius`, or the Dirac mass when `radius = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub radius: f64,
    pub energy: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct StabilityReport {
    pub verdict: Verdict,
    pub reason: Reason,
    /// `int_{R^d} (W - W_inf)`; `null` when `W_inf = +inf`.
    #[serde(serialize_with = "crate::extended::serialize")]
    pub integral_value: f64,
    #[serde(serialize_with = "crate::extended::serialize")]
    pub value_at_infinity: f64,
    pub witness: Option<Witness>,
    pub existence_verdict: ExistenceVerdict,
    pub diagnostic: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RadialIntegral {
    Finite { value: f64, abs_error: f64 },
    NegativeInfinite,
    PositivePartNotIntegrable,
    NotConverged { value: f64, abs_error: f64 },
}

fn geometric_breakpoints(upper: f64, levels: i32) -> Vec<f64> {
    let mut points = vec![0.0];
    points.extend((0..=levels).rev().map(|k| upper * 2f64.powi(-k)));
    points
}

/// `sigma_{d-1} int_0^inf r^(d-1) (w(r) - W_inf) dr`, with the tail decided
/// from the profile's tail metadata and completed analytically.
pub fn radial_integral(profile: &PotentialProfile, opts: &QuadratureOptions) -> RadialIntegral {
    let w_inf = profile.value_at_infinity();
    let d = profile.dimension();
    let sigma = unit_sphere_area(d);
    let integrand = |r: f64| sigma * r.powi(d as i32 - 1) * (profile.radial(r) - w_inf);
    let base = profile.monotone_radius().unwrap_or(1.0).max(1.0);

    match profile.tail() {
        Tail::Divergent => RadialIntegral::PositivePartNotIntegrable,
        Tail::DecaysExponentially { rate } => {
            let mut cut = (40.0 / rate).max(2.0 * base);
            for _ in 0..60 {
                if (integrand(cut) * cut).abs() < 1e-14 {
                    break;
                }
                cut *= 2.0;
            }
            let out = integrate_with_breakpoints(integrand, &geometric_breakpoints(cut, 40), opts);
            // |W - W_inf| ~ C exp(-rate r) beyond the cut
            let c = (profile.radial(cut) - w_inf) * (rate * cut).exp();
            let tail = sigma * c * gamma_ui(d as f64, rate * cut) / rate.powi(d as i32);
            let value = out.value + if tail.is_finite() { tail } else { 0.0 };
            if out.converged {
                RadialIntegral::Finite {
                    value,
                    abs_error: out.abs_error,
                }
            } else {
                RadialIntegral::NotConverged {
                    value,
                    abs_error: out.abs_error,
                }
            }
        }
        Tail::DecaysPower { exponent } => {
            let far = 1e6 * base;
            let sign = (profile.radial(far) - w_inf).signum();
            if d as f64 - 1.0 + exponent >= -1.0 {
                return if sign < 0.0 {
                    RadialIntegral::NegativeInfinite
                } else {
                    RadialIntegral::PositivePartNotIntegrable
                };
            }
            let cut = 1e4 * base;
            let out = integrate_with_breakpoints(integrand, &geometric_breakpoints(cut, 60), opts);
            let c = (profile.radial(cut) - w_inf) / cut.powf(exponent);
            let tail = sigma * c * cut.powf(d as f64 + exponent) / -(d as f64 + exponent);
            let value = out.value + tail;
            if out.converged {
                RadialIntegral::Finite {
                    value,
                    abs_error: out.abs_error,
                }
            } else {
                RadialIntegral::NotConverged {
                    value,
                    abs_error: out.abs_error,
                }
            }
        }
    }
}

/// `int_{R^d} W` for the Morse profile in closed form:
/// `sigma_{d-1} Gamma(d) (c_r ell_r^d - c_a ell_a^d)`.
pub fn morse_integral(c_r: f64, c_a: f64, ell_r: f64, ell_a: f64, d: usize) -> f64 {
    let di = d as i32;
    unit_sphere_area(d) * gamma(d as f64) * (c_r * ell_r.powi(di) - c_a * ell_a.powi(di))
}

/// Closed-form instability regime of the Morse potential:
/// `ell_r < ell_a` and `c_r / c_a < (ell_a / ell_r)^d`.
pub fn morse_criterion(c_r: f64, c_a: f64, ell_r: f64, ell_a: f64, d: usize) -> bool {
    ell_r < ell_a && c_r / c_a < (ell_a / ell_r).powi(d as i32)
}

fn equality_tolerance(w_inf: f64) -> f64 {
    1e-12 * w_inf.abs().max(1.0)
}

/// Runs the sufficient instability tests, then the Dirac-mass check.
pub fn classify(profile: &PotentialProfile, opts: &QuadratureOptions) -> StabilityReport {
    let w_inf = profile.value_at_infinity();
    let mut report = StabilityReport {
        verdict: Verdict::Undetermined,
        reason: Reason::IntegralNonnegative,
        integral_value: f64::NAN,
        value_at_infinity: w_inf,
        witness: None,
        existence_verdict: ExistenceVerdict::Unknown,
        diagnostic: None,
    };

    if w_inf == f64::INFINITY {
        report.verdict = Verdict::Unstable;
        report.reason = Reason::WInfinityDivergent;
        report.existence_verdict = minimiser_existence(profile, &report);
        return report;
    }

    let fallback = match radial_integral(profile, opts) {
        RadialIntegral::NegativeInfinite => {
            report.integral_value = f64::NEG_INFINITY;
            report.verdict = Verdict::Unstable;
            report.reason = Reason::NegativeIntegral;
            None
        }
        RadialIntegral::Finite { value, .. } if value < 0.0 => {
            report.integral_value = value;
            report.verdict = Verdict::Unstable;
            report.reason = Reason::NegativeIntegral;
            None
        }
        RadialIntegral::Finite { value, .. } => {
            report.integral_value = value;
            Some(Reason::IntegralNonnegative)
        }
        RadialIntegral::PositivePartNotIntegrable => {
            report.integral_value = f64::INFINITY;
            report.diagnostic = Some(
                "positive part of W - W_inf is not integrable; the integral test does not apply".into(),
            );
            Some(Reason::IntegralInapplicable)
        }
        RadialIntegral::NotConverged { value, abs_error } => {
            report.integral_value = value;
            report.diagnostic = Some(format!(
                "radial integral did not converge (value {value}, error estimate {abs_error:e})"
            ));
            Some(Reason::QuadratureFailed)
        }
    };

    if let Some(reason) = fallback {
        let w0 = profile.value_at_origin();
        let delta = Witness {
            radius: 0.0,
            energy: 0.5 * w0,
        };
        if w0.is_finite() && w0 < w_inf - equality_tolerance(w_inf) {
            report.verdict = Verdict::Unstable;
            report.reason = Reason::WitnessFound;
            report.witness = Some(delta);
        } else if w0.is_finite() && (w0 - w_inf).abs() <= equality_tolerance(w_inf) {
            report.verdict = Verdict::BoundaryStable;
            report.reason = Reason::DeltaEquality;
            report.witness = Some(delta);
        } else {
            report.reason = reason;
        }
    }

    report.existence_verdict = minimiser_existence(profile, &report);
    report
}

/// Existence of a global minimiser, decided from a stability report.
///
/// Every profile here is radial, so the monotone-tail assumption is not
/// needed: a minimiser exists iff some measure reaches energy `<= W_inf/2`
/// (provided the positive part of `W - W_inf` is integrable). Without such
/// a measure nothing is claimed.
pub fn minimiser_existence(profile: &PotentialProfile, report: &StabilityReport) -> ExistenceVerdict {
    let hypotheses = profile.validate_hypotheses();
    let standing = [
        Hypothesis::BoundedBelow,
        Hypothesis::LocallyIntegrable,
        Hypothesis::Symmetric,
        Hypothesis::LimitAtInfinity,
        Hypothesis::LowerSemicontinuous,
    ]
    .iter()
    .all(|h| hypotheses.holds(*h));
    let positive_part_integrable =
        profile.value_at_infinity() == f64::INFINITY || report.reason != Reason::IntegralInapplicable;
    if !standing || !positive_part_integrable {
        return ExistenceVerdict::Unknown;
    }
    match report.verdict {
        Verdict::Unstable | Verdict::BoundaryStable => ExistenceVerdict::MinimiserExists,
        Verdict::Undetermined => ExistenceVerdict::Unknown,
    }
}

/// `E(rho_R)` for the uniform probability density on `B(0, radius)`,
/// as `1/2 int_0^{2R} w(s) f_d(s; R) ds` with the distance density above.
pub fn uniform_ball_energy(
    profile: &PotentialProfile,
    radius: f64,
    opts: &QuadratureOptions,
) -> Result<f64, StabilityError> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(StabilityError::NonPositiveRadius(radius));
    }
    if !profile.origin_integrable() {
        return Err(StabilityError::NotIntegrable);
    }
    let d = profile.dimension();
    let w_inf = profile.value_at_infinity();
    // integrate W - W_inf when W_inf is finite so that tiny deviations keep
    // their relative accuracy for large balls
    let shift = if w_inf.is_finite() { w_inf } else { 0.0 };
    let integrand = |s: f64| (profile.radial(s) - shift) * distance_density(s, radius, d);
    let out = integrate_with_breakpoints(integrand, &geometric_breakpoints(2.0 * radius, 60), opts);
    if !out.converged {
        if out.value == f64::INFINITY {
            return Err(StabilityError::NotIntegrable);
        }
        return Err(StabilityError::Quadrature {
            abs_error: out.abs_error,
        });
    }
    Ok(0.5 * shift + 0.5 * out.value)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MonteCarloEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: usize,
}

fn sample_ball(rng: &mut ChaCha8Rng, radius: f64, out: &mut [f64]) {
    let d = out.len();
    loop {
        let mut sq = 0.0;
        for v in out.iter_mut() {
            *v = rng.sample::<f64, _>(StandardNormal);
            sq += *v * *v;
        }
        if sq > 0.0 {
            let u: f64 = rng.random();
            let scale = radius * u.powf(1.0 / d as f64) / sq.sqrt();
            out.iter_mut().for_each(|v| *v *= scale);
            return;
        }
    }
}

/// Monte-Carlo estimate of `E(rho_R)`: mean of `W(X - Y) / 2` over independent
/// uniform pairs. Work is split into fixed chunks, each on its own ChaCha
/// stream, so the result does not depend on thread scheduling.
pub fn uniform_ball_energy_monte_carlo(
    profile: &PotentialProfile,
    radius: f64,
    samples: usize,
    seed: u64,
) -> MonteCarloEstimate {
    const CHUNKS: usize = 16;
    let d = profile.dimension();
    let per_chunk = samples.div_ceil(CHUNKS);
    let partial = map_rows(CHUNKS, |chunk| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(chunk as u64);
        let count = per_chunk.min(samples.saturating_sub(chunk * per_chunk));
        let mut x = vec![0.0; d];
        let mut y = vec![0.0; d];
        let (mut sum, mut sq) = (0.0, 0.0);
        for _ in 0..count {
            sample_ball(&mut rng, radius, &mut x);
            sample_ball(&mut rng, radius, &mut y);
            let r = x.iter().zip(&y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
            let v = 0.5 * profile.radial(r);
            sum += v;
            sq += v * v;
        }
        (count, sum, sq)
    });
    let (n, sum, sq) = partial
        .iter()
        .fold((0usize, 0.0, 0.0), |acc, p| (acc.0 + p.0, acc.1 + p.1, acc.2 + p.2));
    let mean = sum / n as f64;
    let var = (sq / n as f64 - mean * mean).max(0.0) * n as f64 / (n as f64 - 1.0);
    MonteCarloEstimate {
        mean,
        std_error: (var / n as f64).sqrt(),
        samples: n,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WitnessOptions {
    /// Number of doublings of the starting radius `max(R6, 1)`.
    pub steps: u32,
    /// Largest radius scanned; defaults to `2^steps` times the start.
    pub r_max: Option<f64>,
    /// Required margin below `W_inf / 2`.
    pub tolerance: f64,
    pub quadrature: QuadratureOptions,
}

impl Default for WitnessOptions {
    fn default() -> Self {
        WitnessOptions {
            steps: 20,
            r_max: None,
            tolerance: 1e-9,
            quadrature: QuadratureOptions::default(),
        }
    }
}

/// Smallest radius on the grid `2^k max(R6, 1)` whose uniform ball has
/// energy below `W_inf / 2 - tolerance`.
pub fn instability_witness(profile: &PotentialProfile, opts: &WitnessOptions) -> Option<Witness> {
    let start = profile.monotone_radius().unwrap_or(1.0).max(1.0);
    let r_max = opts.r_max.unwrap_or(start * 2f64.powi(opts.steps as i32));
    let half_inf = 0.5 * profile.value_at_infinity();
    (0..=opts.steps)
        .map(|k| start * 2f64.powi(k as i32))
        .take_while(|r| *r <= r_max)
        .find_map(|radius| {
            let energy = uniform_ball_energy(profile, radius, &opts.quadrature).ok()?;
            let below = if half_inf == f64::INFINITY {
                energy.is_finite()
            } else {
                energy < half_inf - opts.tolerance
            };
            below.then_some(Witness { radius, energy })
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::{CustomRadial, Family, PotentialSpec, RadialFunction};
    use approx::assert_relative_eq;
    use std::sync::Arc;

    fn build(spec: PotentialSpec) -> PotentialProfile {
        PotentialProfile::build(spec).unwrap()
    }

    #[test]
    fn sphere_constants() {
        assert_relative_eq!(unit_sphere_area(1), 2.0, epsilon = 1e-14);
        assert_relative_eq!(unit_sphere_area(2), 2.0 * std::f64::consts::PI, epsilon = 1e-13);
        assert_relative_eq!(unit_sphere_area(3), 4.0 * std::f64::consts::PI, epsilon = 1e-13);
        assert_relative_eq!(unit_ball_volume(3), 4.0 / 3.0 * std::f64::consts::PI, epsilon = 1e-13);
    }

    #[test]
    fn distance_density_is_normalised() {
        let opts = QuadratureOptions::default();
        for d in 1..=5 {
            for radius in [0.5, 1.0, 3.0] {
                let out = crate::quadrature::integrate(|s| distance_density(s, radius, d), 0.0, 2.0 * radius, &opts);
                assert_relative_eq!(out.value, 1.0, epsilon = 1e-9);
            }
        }
        // d = 1, R = 1/2: density 2(1 - s) on [0, 1]
        assert_relative_eq!(distance_density(0.25, 0.5, 1), 1.5, epsilon = 1e-13);
    }

    #[test]
    fn power_law_with_divergent_limit_is_unstable() {
        let report = classify(&build(PotentialSpec::power_law(2.0, 0.0, 2)), &QuadratureOptions::default());
        assert_eq!(report.verdict, Verdict::Unstable);
        assert_eq!(report.reason, Reason::WInfinityDivergent);
        assert_eq!(report.existence_verdict, ExistenceVerdict::MinimiserExists);
    }

    #[test]
    fn power_law_with_decaying_tail_has_minus_infinite_integral() {
        let report = classify(&build(PotentialSpec::power_law(-0.5, -1.0, 2)), &QuadratureOptions::default());
        assert_eq!(report.verdict, Verdict::Unstable);
        assert_eq!(report.reason, Reason::NegativeIntegral);
        assert_eq!(report.integral_value, f64::NEG_INFINITY);
    }

    #[test]
    fn morse_one_dimensional_integral() {
        let p = build(PotentialSpec::morse(1.0, 1.0, 1.0, 2.0, 1));
        let report = classify(&p, &QuadratureOptions::default());
        assert_eq!(report.verdict, Verdict::Unstable);
        assert_eq!(report.reason, Reason::NegativeIntegral);
        assert_relative_eq!(report.integral_value, -2.0, epsilon = 1e-9);
    }

    #[test]
    fn gaussian_bump_is_boundary_stable() {
        let p = build(PotentialSpec::gaussian_bump(2));
        let report = classify(&p, &QuadratureOptions::default());
        assert!(report.integral_value > 0.0);
        // sigma_1 int r^3 e^{-r^2} dr = 2 pi / 2
        assert_relative_eq!(report.integral_value, std::f64::consts::PI, epsilon = 1e-9);
        assert_eq!(report.verdict, Verdict::BoundaryStable);
        assert_eq!(report.reason, Reason::DeltaEquality);
        assert_eq!(report.existence_verdict, ExistenceVerdict::MinimiserExists);
    }

    #[test]
    fn stable_morse_without_monotone_tail_is_unknown() {
        // repulsion with the longer range: H6 fails, integral positive, W(0) > 0
        let p = build(PotentialSpec::morse(2.0, 1.0, 2.0, 1.0, 2));
        let report = classify(&p, &QuadratureOptions::default());
        assert_eq!(report.verdict, Verdict::Undetermined);
        assert_eq!(report.reason, Reason::IntegralNonnegative);
        assert_eq!(report.existence_verdict, ExistenceVerdict::Unknown);
    }

    #[test]
    fn negative_origin_value_is_a_dirac_witness() {
        // integral positive (c_r ell_r^2 > c_a ell_a^2) but W(0) = -0.5 < 0
        let p = build(PotentialSpec::morse(0.5, 1.0, 1.0, 0.5, 2));
        let report = classify(&p, &QuadratureOptions::default());
        assert!(report.integral_value > 0.0);
        assert_eq!(report.verdict, Verdict::Unstable);
        assert_eq!(report.reason, Reason::WitnessFound);
        let w = report.witness.unwrap();
        assert!(w.energy < 0.5 * p.value_at_infinity());
    }

    #[test]
    fn morse_criterion_examples() {
        assert!(morse_criterion(1.0, 2.0, 0.5, 1.0, 2));
        for d in 1..=3 {
            assert!(!morse_criterion(1.0, 1.0, 1.0, 1.0, d));
        }
        assert!(!morse_criterion(8.0, 1.0, 0.5, 1.0, 2));
    }

    #[test]
    fn morse_quadrature_matches_closed_form() {
        for d in 1..=3 {
            for (c_r, c_a, l_r, l_a) in [(1.0, 2.0, 0.5, 1.0), (3.0, 1.0, 1.0, 1.3), (1.0, 1.0, 0.7, 0.7)] {
                let p = build(PotentialSpec::morse(c_r, c_a, l_r, l_a, d));
                let RadialIntegral::Finite { value, .. } = radial_integral(&p, &QuadratureOptions::default()) else {
                    panic!("expected a finite integral");
                };
                assert_relative_eq!(value, morse_integral(c_r, c_a, l_r, l_a, d), epsilon = 1e-8);
            }
        }
    }

    #[derive(Debug)]
    struct Constant(f64);

    impl RadialFunction for Constant {
        fn value(&self, _: f64) -> f64 {
            self.0
        }
        fn derivative(&self, _: f64) -> f64 {
            0.0
        }
    }

    #[derive(Debug)]
    struct Identity;

    impl RadialFunction for Identity {
        fn value(&self, r: f64) -> f64 {
            r
        }
        fn derivative(&self, _: f64) -> f64 {
            1.0
        }
    }

    fn custom(function: Arc<dyn RadialFunction>, at_origin: f64, at_infinity: f64, tail: Tail, d: usize) -> PotentialProfile {
        build(PotentialSpec {
            family: Family::Custom(CustomRadial {
                function,
                label: "test".into(),
                value_at_origin: at_origin,
                value_at_infinity: at_infinity,
                tail,
                origin_integrable: true,
                continuous: true,
                monotone_beyond: None,
            }),
            dimension: d,
        })
    }

    #[test]
    fn uniform_ball_energy_of_constant_kernel() {
        for d in 1..=3 {
            let p = custom(Arc::new(Constant(2.5)), 2.5, f64::INFINITY, Tail::Divergent, d);
            for radius in [0.3, 1.0, 7.0] {
                let e = uniform_ball_energy(&p, radius, &QuadratureOptions::default()).unwrap();
                assert_relative_eq!(e, 1.25, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn uniform_ball_energy_of_distance_on_an_interval() {
        let p = custom(Arc::new(Identity), 0.0, f64::INFINITY, Tail::Divergent, 1);
        let e = uniform_ball_energy(&p, 0.5, &QuadratureOptions::default()).unwrap();
        assert_relative_eq!(e, 1.0 / 6.0, epsilon = 1e-12);
    }

    #[test]
    fn unit_disk_log_gas_energy() {
        // W * rho = 3/4 on the unit disk, so E = 3/8
        let p = build(PotentialSpec::power_law(2.0, 0.0, 2));
        let e = uniform_ball_energy(&p, 1.0, &QuadratureOptions::default()).unwrap();
        assert_relative_eq!(e, 0.375, epsilon = 1e-9);
    }

    #[test]
    fn uniform_ball_energy_errors() {
        let p = build(PotentialSpec::gaussian_bump(2));
        assert_eq!(
            uniform_ball_energy(&p, 0.0, &QuadratureOptions::default()),
            Err(StabilityError::NonPositiveRadius(0.0))
        );
    }

    #[test]
    fn monte_carlo_agrees_on_morse() {
        let p = build(PotentialSpec::morse(1.0, 2.0, 0.5, 1.0, 2));
        let exact = uniform_ball_energy(&p, 2.0, &QuadratureOptions::default()).unwrap();
        let mc = uniform_ball_energy_monte_carlo(&p, 2.0, 200_000, MONTE_CARLO_SEED);
        assert!((mc.mean - exact).abs() < 3.0 * mc.std_error, "{exact} vs {mc:?}");
        let again = uniform_ball_energy_monte_carlo(&p, 2.0, 200_000, MONTE_CARLO_SEED);
        assert_eq!(mc.mean.to_bits(), again.mean.to_bits());
    }

    #[test]
    fn witness_examples() {
        let opts = WitnessOptions::default();
        let power = build(PotentialSpec::power_law(2.0, 0.0, 2));
        let w = instability_witness(&power, &opts).unwrap();
        assert_eq!(w.radius, 1.0);
        assert!(w.energy.is_finite());

        let bump = build(PotentialSpec::gaussian_bump(2));
        assert_eq!(instability_witness(&bump, &opts), None);

        let morse = build(PotentialSpec::morse(1.0, 2.0, 0.5, 1.0, 2));
        let w = instability_witness(&morse, &opts).unwrap();
        assert!(w.energy < 0.0);
        let again = uniform_ball_energy(&morse, w.radius, &QuadratureOptions::default()).unwrap();
        assert!(again < 0.0);
    }

    #[test]
    fn witness_needs_a_large_ball_when_repulsion_is_strong_at_short_range() {
        // unstable by the integral, but small balls still have positive energy
        let p = build(PotentialSpec::morse(3.0, 1.0, 0.5, 1.0, 2));
        assert!(morse_criterion(3.0, 1.0, 0.5, 1.0, 2));
        let small = uniform_ball_energy(&p, 0.25, &QuadratureOptions::default()).unwrap();
        assert!(small > 0.0);
        let w = instability_witness(&p, &WitnessOptions::default()).unwrap();
        assert!(w.energy < 0.0 && w.radius >= 1.0, "{w:?}");
    }
}
