//! A-priori bound parameters for an unstable potential, and post-hoc checks
//! of a particle configuration against them.
//!
//! Every check is a necessary condition for a global minimiser, so a failed
//! check proves the configuration is not one. Passing proves nothing.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::energy::{discrete_energy, field_at_particles, map_rows, ParticleConfiguration, SelfInteraction};
use crate::minimise::{minimise_discrete, MinimiseOptions, StepRule};
use crate::potential::PotentialProfile;
use crate::stability::{instability_witness, WitnessOptions};

pub const SOUNDNESS_NOTE: &str = "E_S_hat is an upper bound for the minimal energy over measures supported in \
B(0, S); a larger E_S_hat only shrinks m and enlarges K, so K is a certified but not sharp diameter bound.";

/// Slack added to the gap bound `2 R6` and to `K` when comparing.
pub const COMPARISON_SLACK: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundError {
    #[error("instability not established; bound unavailable")]
    NoWitness,
    #[error("potential has no eventual-monotonicity radius R6; bound unavailable")]
    NoMonotoneRadius,
    #[error("could not locate r': w stays below 2A up to r = {searched}")]
    TailSearch { searched: f64 },
    #[error("bound parameters violate their invariants: {0}")]
    Invariant(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundParameters {
    pub dimension: usize,
    /// Radius of the instability witness.
    pub s: f64,
    /// Upper bound for the minimal energy over measures supported in `B(0, S)`.
    pub e_s_hat: f64,
    pub a: f64,
    pub r_prime: f64,
    pub r: f64,
    /// Lower bound for the mass of any ball of radius `r` centred in the support.
    pub m: f64,
    pub r6: f64,
    /// Diameter bound.
    pub k: f64,
    pub w_min: f64,
    #[serde(
        serialize_with = "crate::extended::serialize",
        deserialize_with = "crate::extended::deserialize"
    )]
    pub w_inf: f64,
}

/// `(A - E_S_hat) / (A - W_min / 2)`.
pub fn mass_bound(a: f64, e_s_hat: f64, w_min: f64) -> f64 {
    (a - e_s_hat) / (a - 0.5 * w_min)
}

/// `sqrt(d) (4r + (ceil(1/m) - 1)(4r + 2 R6))`.
pub fn diameter_bound(dimension: usize, r: f64, m: f64, r6: f64) -> f64 {
    (dimension as f64).sqrt() * (4.0 * r + ((1.0 / m).ceil() - 1.0) * (4.0 * r + 2.0 * r6))
}

/// Level `A` strictly between `E_S_hat` and `W_inf / 2`.
pub fn level(e_s_hat: f64, w_inf: f64) -> f64 {
    if w_inf.is_finite() {
        0.5 * (e_s_hat + 0.5 * w_inf)
    } else {
        e_s_hat + 1.0
    }
}

/// `r = r' + delta` with `delta = max(r'/100, 1e-3)`.
pub fn enlarge_radius(r_prime: f64) -> f64 {
    r_prime + (0.01 * r_prime).max(1e-3)
}

impl BoundParameters {
    /// Structural invariants plus bit-exact recomputation of `m` and `K`.
    pub fn check(&self) -> Result<(), BoundError> {
        let fail = |m: String| Err(BoundError::Invariant(m));
        if !(self.e_s_hat < self.a && self.a < 0.5 * self.w_inf && self.a.is_finite()) {
            return fail(format!(
                "need E_S_hat < A < W_inf/2, got {} < {} < {}",
                self.e_s_hat,
                self.a,
                0.5 * self.w_inf
            ));
        }
        if !(self.m > 0.0 && self.m <= 1.0) {
            return fail(format!("m = {} outside (0, 1]", self.m));
        }
        if !(self.k > 0.0 && self.k.is_finite()) {
            return fail(format!("K = {} not positive", self.k));
        }
        if !(self.r > self.r_prime && self.r_prime >= 0.0) {
            return fail(format!("need r > r' >= 0, got r = {}, r' = {}", self.r, self.r_prime));
        }
        if mass_bound(self.a, self.e_s_hat, self.w_min).to_bits() != self.m.to_bits() {
            return fail("stored m does not match its formula".into());
        }
        if diameter_bound(self.dimension, self.r, self.m, self.r6).to_bits() != self.k.to_bits() {
            return fail("stored K does not match its formula".into());
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BoundOptions {
    pub witness: WitnessOptions,
    /// Particle minimisation inside `B(0, S)` used to lower `E_S_hat`;
    /// `None` keeps the witness energy.
    pub ball_refinement: Option<MinimiseOptions>,
}

impl Default for BoundOptions {
    fn default() -> Self {
        BoundOptions {
            witness: WitnessOptions::default(),
            ball_refinement: Some(MinimiseOptions {
                n: 64,
                restarts: 2,
                max_iters: 3000,
                grad_tol: 1e-8,
                step_rule: StepRule::default(),
                ball_radius: None,
                recentre: true,
                seed: 0,
                init_radius: None,
            }),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    #[serde(flatten)]
    pub parameters: BoundParameters,
    /// Energy of the uniform-ball witness.
    pub witness_energy: f64,
    /// Self-inclusive particle energy from the ball refinement, if run.
    pub refined_energy: Option<f64>,
    pub soundness_note: &'static str,
}

/// Runs the bound pipeline: witness radius `S`, energy bound `E_S_hat`,
/// level `A`, tail radius `r'`, then `r`, `m` and `K`.
pub fn theoretical_bound(profile: &PotentialProfile, opts: &BoundOptions) -> Result<BoundReport, BoundError> {
    let r6 = profile.monotone_radius().ok_or(BoundError::NoMonotoneRadius)?;
    let witness = instability_witness(profile, &opts.witness).ok_or(BoundError::NoWitness)?;
    let s = witness.radius;
    let w_min = profile.lower_bound();
    let w_inf = profile.value_at_infinity();

    // Self-inclusive particle energy is the energy of an actual measure in
    // P_S, hence a valid upper bound; for singular W it is +inf and ignored.
    let refined_energy = match &opts.ball_refinement {
        Some(m) => {
            let ball = MinimiseOptions {
                ball_radius: Some(s),
                ..*m
            };
            minimise_discrete(profile, &ball)
                .ok()
                .map(|out| discrete_energy(&out.config, profile, SelfInteraction::Include))
                .filter(|e| e.is_finite())
        }
        None => None,
    };
    let raw = refined_energy.map_or(witness.energy, |e| e.min(witness.energy));
    // every measure has energy >= W_min / 2; clamp away rounding below it
    let e_s_hat = raw.max(0.5 * w_min);

    let a = level(e_s_hat, w_inf);
    let r_prime = tail_radius(profile, 2.0 * a, r6)?;
    let r = enlarge_radius(r_prime);
    let m = mass_bound(a, e_s_hat, w_min);
    let k = diameter_bound(profile.dimension(), r, m, r6);
    let parameters = BoundParameters {
        dimension: profile.dimension(),
        s,
        e_s_hat,
        a,
        r_prime,
        r,
        m,
        r6,
        k,
        w_min,
        w_inf,
    };
    parameters.check()?;
    Ok(BoundReport {
        parameters,
        witness_energy: witness.energy,
        refined_energy,
        soundness_note: SOUNDNESS_NOTE,
    })
}

/// Smallest `r'` with `w >= level` on `[r', inf)`.
///
/// Beyond `R6` the profile is nondecreasing, so the crossing there is found
/// by bisection. When `w(R6) >= level` already, `[0, R6]` is scanned on a
/// fine grid for the last sub-level sample.
pub fn tail_radius(profile: &PotentialProfile, level: f64, r6: f64) -> Result<f64, BoundError> {
    let w = |r: f64| profile.radial(r);
    if w(r6) < level {
        let mut lo = r6;
        let mut hi = r6.max(1.0);
        while w(hi) < level {
            lo = hi;
            hi *= 2.0;
            if hi > 1e300 {
                return Err(BoundError::TailSearch { searched: lo });
            }
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if w(mid) < level {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        return Ok(hi);
    }
    const GRID: usize = 10_000;
    let last_below = (0..GRID).rev().map(|k| r6 * k as f64 / GRID as f64).find(|&r| w(r) < level);
    let Some(mut lo) = last_below else {
        return Ok(0.0);
    };
    let mut hi = lo + r6 / GRID as f64;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if w(mid) < level {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EulerLagrangeResidual {
    /// `C = 2 E_N` (self pairs excluded).
    pub constant: f64,
    pub max: f64,
    /// Weighted root mean square of `U_i - C`.
    pub rms: f64,
    pub tolerance: f64,
    pub pass: bool,
}

pub const DEFAULT_EL_TOLERANCE: f64 = 1e-3;

/// Compares `U_i = sum_{j != i} w_j W(x_i - x_j)` with `C = 2 E_N`.
/// The check passes when `max_i |U_i - C| <= el_tolerance * max(1, |C|)`.
pub fn euler_lagrange_residual(
    config: &ParticleConfiguration,
    profile: &PotentialProfile,
    el_tolerance: f64,
) -> EulerLagrangeResidual {
    let constant = 2.0 * discrete_energy(config, profile, SelfInteraction::Exclude);
    let field = field_at_particles(config, profile);
    let mut max = 0.0f64;
    let mut sq = 0.0;
    for (u, w) in field.iter().zip(config.weights()) {
        let e = u - constant;
        max = max.max(e.abs());
        sq += w * e * e;
    }
    if !constant.is_finite() {
        max = f64::INFINITY;
    }
    EulerLagrangeResidual {
        constant,
        max,
        rms: sq.sqrt(),
        tolerance: el_tolerance,
        pass: max <= el_tolerance * constant.abs().max(1.0),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LocalMassReport {
    pub r: f64,
    pub m: f64,
    pub min_found: f64,
    pub worst_particle: usize,
    pub pass: bool,
}

/// Smallest mass in an open ball `B(x_i, r)` over particles, self included.
pub fn check_local_mass(config: &ParticleConfiguration, r: f64, m: f64) -> LocalMassReport {
    let w = config.weights();
    let mass = map_rows(config.len(), |i| {
        let xi = config.point(i);
        config
            .points()
            .zip(w)
            .filter(|(xj, _)| dist(xi, xj) < r)
            .map(|(_, wj)| wj)
            .sum::<f64>()
    });
    let (worst_particle, min_found) = mass
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::INFINITY), |best, (i, v)| if v < best.1 { (i, v) } else { best });
    LocalMassReport {
        r,
        m,
        min_found,
        worst_particle,
        pass: min_found >= m,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GapReport {
    pub coordinate: usize,
    /// Largest difference between consecutive sorted coordinates; 0 for a
    /// single particle.
    pub largest_interior_gap: f64,
    pub bound: f64,
    pub pass: bool,
}

/// Per-coordinate largest gap between particles of weight `>= weight_floor`,
/// compared with `2 R6 + 1e-9`.
pub fn detect_gaps(config: &ParticleConfiguration, r6: f64, weight_floor: f64) -> Vec<GapReport> {
    let bound = 2.0 * r6;
    map_rows(config.dim(), |k| {
        let mut xs: Vec<f64> = config
            .points()
            .zip(config.weights())
            .filter(|(_, w)| **w >= weight_floor)
            .map(|(x, _)| x[k])
            .collect();
        xs.sort_by(f64::total_cmp);
        let gap = xs.windows(2).map(|p| p[1] - p[0]).fold(0.0, f64::max);
        GapReport {
            coordinate: k,
            largest_interior_gap: gap,
            bound,
            pass: gap <= bound + COMPARISON_SLACK,
        }
    })
}

/// Largest pairwise distance.
pub fn diameter(config: &ParticleConfiguration) -> f64 {
    config.diameter()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Passes {
    pub el: bool,
    pub local_mass: bool,
    pub gaps: bool,
    pub diameter: bool,
}

impl Passes {
    pub fn all(&self) -> bool {
        self.el && self.local_mass && self.gaps && self.diameter
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CertificateReport {
    pub el_constant: f64,
    pub el_residual_max: f64,
    pub el_residual_rms: f64,
    pub el_tolerance: f64,
    pub local_mass: LocalMassReport,
    pub gaps: Vec<GapReport>,
    pub diameter: f64,
    pub k: f64,
    pub passes: Passes,
    /// Necessary conditions for a global minimiser that the configuration
    /// violates.
    pub violations: Vec<String>,
    pub bounds: BoundParameters,
    pub soundness_note: &'static str,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CertifyOptions {
    pub el_tolerance: f64,
    pub weight_floor: f64,
    pub bounds: BoundOptions,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            el_tolerance: DEFAULT_EL_TOLERANCE,
            weight_floor: 0.0,
            bounds: BoundOptions::default(),
        }
    }
}

/// Computes the bound parameters and runs every check against them.
pub fn certify_all(
    config: &ParticleConfiguration,
    profile: &PotentialProfile,
    opts: &CertifyOptions,
) -> Result<CertificateReport, BoundError> {
    let bounds = theoretical_bound(profile, &opts.bounds)?.parameters;
    Ok(certify_with_bounds(config, profile, &bounds, opts))
}

/// [`certify_all`] with precomputed bound parameters.
pub fn certify_with_bounds(
    config: &ParticleConfiguration,
    profile: &PotentialProfile,
    bounds: &BoundParameters,
    opts: &CertifyOptions,
) -> CertificateReport {
    let el = euler_lagrange_residual(config, profile, opts.el_tolerance);
    let local_mass = check_local_mass(config, bounds.r, bounds.m);
    let gaps = detect_gaps(config, bounds.r6, opts.weight_floor);
    let diameter = config.diameter();
    let passes = Passes {
        el: el.pass,
        local_mass: local_mass.pass,
        gaps: gaps.iter().all(|g| g.pass),
        diameter: diameter <= bounds.k + COMPARISON_SLACK,
    };
    let mut violations = Vec::new();
    if !passes.el {
        violations.push(format!(
            "Euler-Lagrange condition: W * rho is not constant on the support (max |U_i - C| = {:e})",
            el.max
        ));
    }
    if !passes.local_mass {
        violations.push(format!(
            "no small isolated mass: ball of radius {} around particle {} holds {} < m = {}",
            bounds.r, local_mass.worst_particle, local_mass.min_found, bounds.m
        ));
    }
    for g in gaps.iter().filter(|g| !g.pass) {
        violations.push(format!(
            "no large holes: coordinate {} has a gap {} > 2 R6 = {}",
            g.coordinate, g.largest_interior_gap, g.bound
        ));
    }
    if !passes.diameter {
        violations.push(format!("diameter bound: diameter {} > K = {}", diameter, bounds.k));
    }
    CertificateReport {
        el_constant: el.constant,
        el_residual_max: el.max,
        el_residual_rms: el.rms,
        el_tolerance: opts.el_tolerance,
        local_mass,
        gaps,
        diameter,
        k: bounds.k,
        passes,
        violations,
        bounds: *bounds,
        soundness_note: SOUNDNESS_NOTE,
    }
}

fn dist(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::PotentialSpec;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn build(spec: PotentialSpec) -> PotentialProfile {
        PotentialProfile::build(spec).unwrap()
    }

    #[test]
    fn log_gas_pipeline_values() {
        let p = build(PotentialSpec::power_law(2.0, 0.0, 2));
        let report = theoretical_bound(&p, &BoundOptions::default()).unwrap();
        let b = report.parameters;
        assert_eq!(b.s, 1.0);
        assert_relative_eq!(b.e_s_hat, 0.375, epsilon = 1e-8);
        assert_relative_eq!(b.a, 1.375, epsilon = 1e-8);
        assert_relative_eq!(b.m, 8.0 / 9.0, epsilon = 1e-8);
        assert_relative_eq!(p.radial(b.r_prime), 2.0 * b.a, epsilon = 1e-9);
        assert!(b.k >= 2.0 && b.k.is_finite());
        assert!(report.refined_energy.is_none());
        b.check().unwrap();
    }

    #[test]
    fn morse_pipeline_values() {
        let p = build(PotentialSpec::morse(1.0, 2.0, 0.5, 1.0, 2));
        let b = theoretical_bound(&p, &BoundOptions::default()).unwrap().parameters;
        assert_eq!(b.r6, 0.0);
        assert_relative_eq!(b.w_min, -1.0, epsilon = 1e-9);
        // the refinement collapses to a point mass of energy W(0)/2
        assert_relative_eq!(b.e_s_hat, -0.5, epsilon = 1e-6);
        assert_relative_eq!(b.a, -0.25, epsilon = 1e-6);
        let expected = -(1.0 - 0.5f64.sqrt()).ln();
        assert_relative_eq!(b.r_prime, expected, epsilon = 1e-5);
        assert!(b.m > 0.99 && b.m <= 1.0);
        b.check().unwrap();
    }

    #[test]
    fn stable_potential_has_no_bound() {
        let p = build(PotentialSpec::morse(3.0, 1.0, 1.0, 1.2, 2));
        let opts = BoundOptions {
            witness: WitnessOptions {
                steps: 4,
                ..Default::default()
            },
            ball_refinement: None,
        };
        let err = theoretical_bound(&p, &opts).unwrap_err();
        assert_eq!(err.to_string(), "instability not established; bound unavailable");
    }

    #[test]
    fn bump_has_no_bound() {
        let p = build(PotentialSpec::gaussian_bump(2));
        assert!(theoretical_bound(&p, &BoundOptions::default()).is_err());
    }

    #[test]
    fn tail_radius_is_correct_on_samples() {
        let p = build(PotentialSpec::power_law(2.0, 0.0, 2));
        let b = theoretical_bound(&p, &BoundOptions::default()).unwrap().parameters;
        let level = 2.0 * b.a;
        for k in 0..1000 {
            let rho = b.r_prime * (1.0 + 1e-3 * k as f64).powi(2);
            assert!(p.radial(rho) >= level, "{rho}");
        }
        assert!(p.radial(b.r_prime * (1.0 - 1e-9)) < level);
    }

    #[test]
    fn tail_radius_below_monotone_radius() {
        // w(R6) already above the level: the crossing lies inside [0, R6]
        let p = build(PotentialSpec::power_law(2.0, 1.0, 1));
        let r = tail_radius(&p, -0.4, 3.0).unwrap();
        // r^2/2 - r = -0.4 at r = 1 + sqrt(0.2)
        assert_relative_eq!(r, 1.0 + 0.2f64.sqrt(), epsilon = 1e-9);
        assert_eq!(tail_radius(&p, -1.0, 3.0).unwrap(), 0.0);
    }

    #[test]
    fn bounds_reject_tampering() {
        let p = build(PotentialSpec::power_law(2.0, 0.0, 2));
        let mut b = theoretical_bound(&p, &BoundOptions::default()).unwrap().parameters;
        b.k = f64::from_bits(b.k.to_bits() + 1);
        assert!(b.check().is_err());
    }

    #[test]
    fn bound_serialisation_round_trips() {
        let p = build(PotentialSpec::morse(1.0, 2.0, 0.5, 1.0, 2));
        let b = theoretical_bound(&p, &BoundOptions::default()).unwrap().parameters;
        let json = serde_json::to_string(&b).unwrap();
        let back: BoundParameters = serde_json::from_str(&json).unwrap();
        assert_eq!(b, back);
        let p = build(PotentialSpec::power_law(2.0, 0.0, 2));
        let b = theoretical_bound(&p, &BoundOptions::default()).unwrap().parameters;
        let json = serde_json::to_string(&b).unwrap();
        assert!(json.contains("\"w_inf\":\"+inf\""));
        let back: BoundParameters = serde_json::from_str(&json).unwrap();
        assert_eq!(b, back);
        back.check().unwrap();
    }

    proptest! {
        #[test]
        fn better_energy_bounds_never_worsen_m_or_k(
            e1 in 0.25f64..2.0, gap in 0.0f64..1.0, d in 1usize..4,
        ) {
            // log gas in its own chart: W_min = 1/2, W_inf = inf, R6 = 1, r fixed
            let e2 = e1 + gap;
            let (a1, a2) = (level(e1, f64::INFINITY), level(e2, f64::INFINITY));
            let m1 = mass_bound(a1, e1, 0.5);
            let m2 = mass_bound(a2, e2, 0.5);
            prop_assert!(m1 >= m2);
            prop_assert!(m1 <= 1.0 && m2 > 0.0);
            prop_assert!(diameter_bound(d, 3.0, m1, 1.0) <= diameter_bound(d, 3.0, m2, 1.0));
        }

        #[test]
        fn mass_bound_at_fixed_level_is_monotone(a in -0.2f64..0.0, e1 in -0.5f64..-0.2, gap in 0.0f64..0.2) {
            // fixed A: lowering E_S_hat raises m and lowers K
            let e2 = (e1 + gap).min(a - 1e-6);
            let m1 = mass_bound(a, e1, -1.0);
            let m2 = mass_bound(a, e2, -1.0);
            prop_assert!(m1 >= m2);
            prop_assert!(diameter_bound(2, 1.0, m1, 0.0) <= diameter_bound(2, 1.0, m2, 0.0));
        }
    }

    #[test]
    fn el_residual_vanishes_for_equilibrium_pair() {
        let p = build(PotentialSpec::power_law(2.0, 1.0, 1));
        let c = ParticleConfiguration::uniform(1, vec![0.0, 1.0]).unwrap();
        let r = euler_lagrange_residual(&c, &p, DEFAULT_EL_TOLERANCE);
        // U_1 = U_2 = w(1)/2 = C
        assert_eq!(r.constant, 0.5 * p.radial(1.0));
        assert_eq!(r.max, 0.0);
        assert!(r.pass);
    }

    #[test]
    fn el_residual_flags_random_configurations() {
        let p = build(PotentialSpec::power_law(2.0, 0.0, 2));
        let c = ParticleConfiguration::uniform(2, vec![0.0, 0.0, 0.1, 0.0, 3.0, 1.0, -2.0, 0.5]).unwrap();
        assert!(!euler_lagrange_residual(&c, &p, DEFAULT_EL_TOLERANCE).pass);
    }

    #[test]
    fn local_mass_examples() {
        let single = ParticleConfiguration::uniform(2, vec![0.3, 0.4]).unwrap();
        let r = check_local_mass(&single, 0.1, 1.0);
        assert_eq!(r.min_found, 1.0);
        assert!(r.pass);
        let two = ParticleConfiguration::uniform(1, vec![0.0, 0.01, 5.0, 5.01]).unwrap();
        let r = check_local_mass(&two, 1.0, 0.5);
        assert_eq!(r.min_found, 0.5);
        assert!(r.pass);
        assert!(!check_local_mass(&two, 1.0, 0.6).pass);
        // the ball is open
        let pair = ParticleConfiguration::uniform(1, vec![0.0, 1.0]).unwrap();
        assert_eq!(check_local_mass(&pair, 1.0, 0.0).min_found, 0.5);
    }

    #[test]
    fn gap_examples() {
        let single = ParticleConfiguration::uniform(2, vec![1.0, 2.0]).unwrap();
        assert!(detect_gaps(&single, 1.0, 0.0).iter().all(|g| g.pass && g.largest_interior_gap == 0.0));
        let pair = ParticleConfiguration::uniform(1, vec![0.0, 5.0]).unwrap();
        let g = detect_gaps(&pair, 1.0, 0.0);
        assert_eq!(g[0].largest_interior_gap, 5.0);
        assert!(!g[0].pass);
        // a light far particle is ignored above the weight floor
        let c = ParticleConfiguration::new(1, vec![0.0, 0.5, 9.0], vec![0.45, 0.45, 0.1]).unwrap();
        assert!(!detect_gaps(&c, 1.0, 0.0)[0].pass);
        assert!(detect_gaps(&c, 1.0, 0.2)[0].pass);
    }

    #[test]
    fn diameter_example() {
        let c = ParticleConfiguration::uniform(2, vec![0.0, 0.0, 3.0, 0.0]).unwrap();
        assert_eq!(diameter(&c), 3.0);
    }

    #[test]
    fn violations_are_named() {
        let p = build(PotentialSpec::power_law(2.0, 0.0, 2));
        let c = ParticleConfiguration::uniform(2, vec![0.0, 0.0, 100.0, 0.0]).unwrap();
        let report = certify_all(&c, &p, &CertifyOptions::default()).unwrap();
        assert!(!report.passes.all());
        assert!(!report.passes.diameter && !report.passes.gaps && !report.passes.local_mass);
        assert!(report.violations.iter().any(|v| v.starts_with("diameter bound")));
        assert!(report.violations.iter().any(|v| v.starts_with("no large holes")));
        assert!(report.violations.iter().any(|v| v.starts_with("no small isolated mass")));
    }

    #[test]
    fn certificate_is_translation_invariant() {
        let p = build(PotentialSpec::morse(1.0, 2.0, 0.5, 1.0, 2));
        let mut rng = crate::minimise::restart_rng(3, 0);
        let pos = crate::minimise::sample_uniform_ball(&mut rng, 30, 2, 2.0);
        let c = ParticleConfiguration::uniform(2, pos).unwrap();
        let opts = CertifyOptions::default();
        let a = certify_all(&c, &p, &opts).unwrap();
        let b = certify_all(&c.translated(&[3.5, -1.25]), &p, &opts).unwrap();
        let close = |x: f64, y: f64| (x - y).abs() <= 1e-12 * x.abs().max(1.0);
        assert!(close(a.el_constant, b.el_constant));
        assert!(close(a.el_residual_max, b.el_residual_max));
        assert!(close(a.el_residual_rms, b.el_residual_rms));
        assert!(close(a.diameter, b.diameter));
        assert_eq!(a.local_mass.min_found, b.local_mass.min_found);
        for (g, h) in a.gaps.iter().zip(&b.gaps) {
            assert!(close(g.largest_interior_gap, h.largest_interior_gap));
        }
        assert_eq!(a.passes, b.passes);
        assert_eq!(a.bounds, b.bounds);
    }
}
