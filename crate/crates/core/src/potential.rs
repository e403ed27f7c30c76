//! Radial pair potentials `W(x) = w(|x|)` and their asymptotic metadata.
//!
//! Three families are built in (power law, Morse, and the bump
//! `|x|^2 exp(-|x|^2)`); anything else can be plugged in through
//! [`RadialFunction`] together with declared metadata.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

/// Standing assumptions on a pair potential, in their customary order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Hypothesis {
    /// H1: bounded below by a finite constant.
    BoundedBelow,
    /// H2: locally integrable.
    LocallyIntegrable,
    /// H3: symmetric, `W(x) = W(-x)`.
    Symmetric,
    /// H4: the limit at infinity exists.
    LimitAtInfinity,
    /// H5: lower semi-continuous.
    LowerSemicontinuous,
    /// H6: strictly increasing outside a ball.
    EventuallyIncreasing,
}

impl Hypothesis {
    pub const ALL: [Hypothesis; 6] = [
        Hypothesis::BoundedBelow,
        Hypothesis::LocallyIntegrable,
        Hypothesis::Symmetric,
        Hypothesis::LimitAtInfinity,
        Hypothesis::LowerSemicontinuous,
        Hypothesis::EventuallyIncreasing,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Hypothesis::BoundedBelow => "H1 (bounded below)",
            Hypothesis::LocallyIntegrable => "H2 (locally integrable)",
            Hypothesis::Symmetric => "H3 (symmetric)",
            Hypothesis::LimitAtInfinity => "H4 (limit at infinity exists)",
            Hypothesis::LowerSemicontinuous => "H5 (lower semi-continuous)",
            Hypothesis::EventuallyIncreasing => "H6 (strictly increasing outside a ball)",
        }
    }
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PotentialError {
    #[error("dimension must be at least 1")]
    InvalidDimension,
    #[error("{hypothesis} violated: {detail}")]
    Hypothesis {
        hypothesis: Hypothesis,
        detail: String,
    },
    #[error("invalid parameter: {0}")]
    Parameter(String),
}

/// User-supplied radial profile `w` and its derivative.
pub trait RadialFunction: Send + Sync + fmt::Debug {
    fn value(&self, r: f64) -> f64;
    fn derivative(&self, r: f64) -> f64;
}

/// Behaviour of `w(r) - W_inf` as `r -> inf`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Tail {
    Divergent,
    /// `|w(r) - W_inf| <= C exp(-rate r)` for large `r`.
    DecaysExponentially { rate: f64 },
    /// `w(r) - W_inf ~ C r^exponent` for large `r`, `exponent < 0`.
    DecaysPower { exponent: f64 },
}

/// A custom radial potential with declared metadata.
#[derive(Clone, Debug)]
pub struct CustomRadial {
    pub function: Arc<dyn RadialFunction>,
    pub label: String,
    pub value_at_origin: f64,
    pub value_at_infinity: f64,
    pub tail: Tail,
    pub origin_integrable: bool,
    /// Evidence for lower semi-continuity; `false` leaves H5 undetermined.
    pub continuous: bool,
    /// A radius beyond which `w' > 0` is known to hold. `R6` is refined
    /// from it by bisection on `w'`.
    pub monotone_beyond: Option<f64>,
}

#[derive(Clone, Debug)]
pub enum Family {
    /// `r^a/a - r^b/b`, with `r^0/0` read as `ln r`.
    PowerLaw { a: f64, b: f64 },
    /// `c_r exp(-r/ell_r) - c_a exp(-r/ell_a)`.
    Morse {
        c_r: f64,
        c_a: f64,
        ell_r: f64,
        ell_a: f64,
    },
    /// `r^2 exp(-r^2)`.
    GaussianBump,
    Custom(CustomRadial),
}

impl Family {
    pub fn name(&self) -> &str {
        match self {
            Family::PowerLaw { .. } => "power_law",
            Family::Morse { .. } => "morse",
            Family::GaussianBump => "gaussian_bump",
            Family::Custom(c) => &c.label,
        }
    }
}

#[derive(Clone, Debug)]
pub struct PotentialSpec {
    pub family: Family,
    pub dimension: usize,
}

impl PotentialSpec {
    pub fn power_law(a: f64, b: f64, dimension: usize) -> Self {
        PotentialSpec {
            family: Family::PowerLaw { a, b },
            dimension,
        }
    }

    pub fn morse(c_r: f64, c_a: f64, ell_r: f64, ell_a: f64, dimension: usize) -> Self {
        PotentialSpec {
            family: Family::Morse {
                c_r,
                c_a,
                ell_r,
                ell_a,
            },
            dimension,
        }
    }

    pub fn gaussian_bump(dimension: usize) -> Self {
        PotentialSpec {
            family: Family::GaussianBump,
            dimension,
        }
    }

    pub fn validate(&self) -> Result<(), PotentialError> {
        if self.dimension == 0 {
            return Err(PotentialError::InvalidDimension);
        }
        let d = self.dimension as f64;
        match &self.family {
            Family::PowerLaw { a, b } => {
                if !a.is_finite() || !b.is_finite() {
                    return Err(PotentialError::Parameter("exponents must be finite".into()));
                }
                if *b <= -d {
                    return Err(PotentialError::Hypothesis {
                        hypothesis: Hypothesis::LocallyIntegrable,
                        detail: format!("power law needs b > -d, got b = {b}, d = {d}"),
                    });
                }
                if b >= a {
                    return Err(PotentialError::Hypothesis {
                        hypothesis: Hypothesis::BoundedBelow,
                        detail: format!("power law needs b < a, got a = {a}, b = {b}"),
                    });
                }
            }
            Family::Morse {
                c_r,
                c_a,
                ell_r,
                ell_a,
            } => {
                for (name, v) in [("c_r", c_r), ("c_a", c_a), ("ell_r", ell_r), ("ell_a", ell_a)] {
                    if !(v.is_finite() && *v > 0.0) {
                        return Err(PotentialError::Parameter(format!(
                            "Morse parameter {name} must be finite and > 0, got {v}"
                        )));
                    }
                }
            }
            Family::GaussianBump => {}
            Family::Custom(c) => {
                if !c.origin_integrable {
                    return Err(PotentialError::Hypothesis {
                        hypothesis: Hypothesis::LocallyIntegrable,
                        detail: format!("custom potential {:?} declared non-integrable at the origin", c.label),
                    });
                }
                if c.value_at_infinity.is_nan() {
                    return Err(PotentialError::Hypothesis {
                        hypothesis: Hypothesis::LimitAtInfinity,
                        detail: "value at infinity must be declared".into(),
                    });
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug)]
enum PowerTerm {
    Log,
    Int(i32),
    Real(f64),
}

impl PowerTerm {
    fn new(exponent: f64) -> Self {
        if exponent == 0.0 {
            PowerTerm::Log
        } else if exponent.fract() == 0.0 && exponent.abs() < 64.0 {
            PowerTerm::Int(exponent as i32)
        } else {
            PowerTerm::Real(exponent)
        }
    }

    /// `(r^p/p, r^(p-1))`, with `(ln r, 1/r)` for `p = 0`.
    #[inline]
    fn eval(self, r: f64) -> (f64, f64) {
        match self {
            PowerTerm::Log => (r.ln(), r.recip()),
            PowerTerm::Int(k) => {
                let lower = r.powi(k - 1);
                (lower * r / k as f64, lower)
            }
            PowerTerm::Real(p) => {
                let lower = r.powf(p - 1.0);
                (lower * r / p, lower)
            }
        }
    }
}

#[derive(Clone, Debug)]
enum Kernel {
    PowerLaw {
        attractive: PowerTerm,
        repulsive: PowerTerm,
        origin: f64,
    },
    Morse {
        c_r: f64,
        c_a: f64,
        inv_r: f64,
        inv_a: f64,
    },
    GaussianBump,
    Custom(Arc<dyn RadialFunction>),
}

impl Kernel {
    #[inline]
    fn value(&self, r: f64) -> f64 {
        match self {
            Kernel::PowerLaw {
                attractive,
                repulsive,
                origin,
            } => {
                if r == 0.0 {
                    *origin
                } else {
                    attractive.eval(r).0 - repulsive.eval(r).0
                }
            }
            Kernel::Morse {
                c_r,
                c_a,
                inv_r,
                inv_a,
            } => c_r * (-r * inv_r).exp() - c_a * (-r * inv_a).exp(),
            Kernel::GaussianBump => r * r * (-r * r).exp(),
            Kernel::Custom(f) => f.value(r),
        }
    }

    /// `w(r) - w(0)` without cancellation for small `r` (finite `w(0)` only).
    #[inline]
    fn excess(&self, r: f64, origin: f64) -> f64 {
        match self {
            Kernel::Morse {
                c_r,
                c_a,
                inv_r,
                inv_a,
            } => c_r * (-r * inv_r).exp_m1() - c_a * (-r * inv_a).exp_m1(),
            Kernel::GaussianBump => self.value(r),
            _ => self.value(r) - origin,
        }
    }

    /// `(w(r), w'(r))` in one pass.
    #[inline]
    fn value_and_derivative(&self, r: f64) -> (f64, f64) {
        match self {
            Kernel::PowerLaw {
                attractive,
                repulsive,
                origin,
            } => {
                if r == 0.0 {
                    return (*origin, 0.0);
                }
                let (va, da) = attractive.eval(r);
                let (vb, db) = repulsive.eval(r);
                (va - vb, da - db)
            }
            Kernel::Morse {
                c_r,
                c_a,
                inv_r,
                inv_a,
            } => {
                let er = c_r * (-r * inv_r).exp();
                let ea = c_a * (-r * inv_a).exp();
                (er - ea, ea * inv_a - er * inv_r)
            }
            Kernel::GaussianBump => {
                let e = (-r * r).exp();
                (r * r * e, 2.0 * r * e * (1.0 - r * r))
            }
            Kernel::Custom(f) => (f.value(r), f.derivative(r)),
        }
    }
}

/// Signal raised when a gradient is requested at a singular point of `W`.
#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
#[error("gradient requested at the origin of a potential singular there")]
pub struct SingularGradient;

/// A validated radial potential plus the metadata the analysis needs.
///
/// Immutable after construction; share it freely across threads.
#[derive(Clone, Debug)]
pub struct PotentialProfile {
    spec: PotentialSpec,
    kernel: Kernel,
    value_at_origin: f64,
    lower_bound: f64,
    value_at_infinity: f64,
    monotone_radius: Option<f64>,
    tail: Tail,
    origin_integrable: bool,
    continuous: bool,
}

/// Serializable snapshot of a profile's metadata, echoed into reports.
#[derive(Clone, Debug, Serialize)]
pub struct ProfileSummary {
    pub family: String,
    pub dimension: usize,
    #[serde(serialize_with = "crate::extended::serialize")]
    pub value_at_origin: f64,
    pub lower_bound: f64,
    #[serde(serialize_with = "crate::extended::serialize")]
    pub value_at_infinity: f64,
    pub monotone_radius: Option<f64>,
    pub tail: Tail,
    pub origin_integrable: bool,
}

impl PotentialProfile {
    /// Validates `spec` and computes the profile metadata.
    pub fn build(spec: PotentialSpec) -> Result<Self, PotentialError> {
        spec.validate()?;
        let profile = match &spec.family {
            Family::PowerLaw { a, b } => {
                let (a, b) = (*a, *b);
                // b >= 0 makes -r^b/b blow up at the origin (ln for b = 0)
                let origin = if b > 0.0 { 0.0 } else { f64::INFINITY };
                let inv = |p: f64| if p == 0.0 { 0.0 } else { p.recip() };
                let (value_at_infinity, tail) = if a >= 0.0 {
                    (f64::INFINITY, Tail::Divergent)
                } else {
                    (0.0, Tail::DecaysPower { exponent: a })
                };
                PotentialProfile {
                    kernel: Kernel::PowerLaw {
                        attractive: PowerTerm::new(a),
                        repulsive: PowerTerm::new(b),
                        origin,
                    },
                    value_at_origin: origin,
                    // w' = r^(b-1) (r^(a-b) - 1) changes sign only at r = 1
                    lower_bound: inv(a) - inv(b),
                    value_at_infinity,
                    monotone_radius: Some(1.0),
                    tail,
                    origin_integrable: true,
                    continuous: true,
                    spec,
                }
            }
            Family::Morse {
                c_r,
                c_a,
                ell_r,
                ell_a,
            } => {
                let (c_r, c_a, ell_r, ell_a) = (*c_r, *c_a, *ell_r, *ell_a);
                let kernel = Kernel::Morse {
                    c_r,
                    c_a,
                    inv_r: ell_r.recip(),
                    inv_a: ell_a.recip(),
                };
                let monotone_radius = morse_monotone_radius(c_r, c_a, ell_r, ell_a);
                let rate = ell_r.max(ell_a).recip();
                let scale = 50.0 * ell_r.max(ell_a);
                let hi = scale.max(10.0 * monotone_radius.unwrap_or(0.0)).max(100.0);
                let lower_bound = numeric_lower_bound(&kernel, c_r - c_a, 0.0, hi);
                PotentialProfile {
                    kernel,
                    value_at_origin: c_r - c_a,
                    lower_bound,
                    value_at_infinity: 0.0,
                    monotone_radius,
                    tail: Tail::DecaysExponentially { rate },
                    origin_integrable: true,
                    continuous: true,
                    spec,
                }
            }
            Family::GaussianBump => PotentialProfile {
                kernel: Kernel::GaussianBump,
                value_at_origin: 0.0,
                lower_bound: 0.0,
                value_at_infinity: 0.0,
                monotone_radius: None,
                // decays like exp(-r^2), so faster than any exponential
                tail: Tail::DecaysExponentially { rate: 1.0 },
                origin_integrable: true,
                continuous: true,
                spec,
            },
            Family::Custom(c) => {
                let kernel = Kernel::Custom(c.function.clone());
                let monotone_radius = c
                    .monotone_beyond
                    .map(|beyond| refine_monotone_radius(&kernel, beyond));
                let hi = (10.0 * monotone_radius.unwrap_or(0.0)).max(100.0);
                let lower_bound =
                    numeric_lower_bound(&kernel, c.value_at_origin, c.value_at_infinity, hi);
                PotentialProfile {
                    kernel,
                    value_at_origin: c.value_at_origin,
                    lower_bound,
                    value_at_infinity: c.value_at_infinity,
                    monotone_radius,
                    tail: c.tail,
                    origin_integrable: c.origin_integrable,
                    continuous: c.continuous,
                    spec,
                }
            }
        };
        if !profile.lower_bound.is_finite() {
            return Err(PotentialError::Hypothesis {
                hypothesis: Hypothesis::BoundedBelow,
                detail: "no finite lower bound found".into(),
            });
        }
        Ok(profile)
    }

    pub fn spec(&self) -> &PotentialSpec {
        &self.spec
    }

    pub fn dimension(&self) -> usize {
        self.spec.dimension
    }

    /// `w(r)`; `r = 0` returns `W(0)`, possibly `+inf`.
    #[inline]
    pub fn radial(&self, r: f64) -> f64 {
        if r == 0.0 {
            return self.value_at_origin;
        }
        self.kernel.value(r)
    }

    /// `w'(r)` for `r > 0`.
    #[inline]
    pub fn radial_derivative(&self, r: f64) -> f64 {
        match &self.kernel {
            Kernel::Custom(f) => f.derivative(r),
            k => k.value_and_derivative(r).1,
        }
    }

    /// `w(r) - W(0)`, accurate for small `r`; `w(r)` itself when `W(0) = +inf`.
    #[inline]
    pub fn radial_excess(&self, r: f64) -> f64 {
        if self.is_singular_at_origin() {
            return self.radial(r);
        }
        if r == 0.0 {
            return 0.0;
        }
        self.kernel.excess(r, self.value_at_origin)
    }

    /// The constant separating [`radial_excess`](Self::radial_excess) from `w`.
    pub fn excess_offset(&self) -> f64 {
        if self.is_singular_at_origin() {
            0.0
        } else {
            self.value_at_origin
        }
    }

    pub fn evaluate(&self, x: &[f64]) -> f64 {
        self.radial(norm(x))
    }

    /// Writes `w'(|x|) x/|x|` into `out`; the zero vector at `x = 0`.
    pub fn gradient(&self, x: &[f64], out: &mut [f64]) -> Result<(), SingularGradient> {
        let r = norm(x);
        if r == 0.0 {
            if self.is_singular_at_origin() {
                return Err(SingularGradient);
            }
            out.iter_mut().for_each(|o| *o = 0.0);
            return Ok(());
        }
        let s = self.radial_derivative(r) / r;
        for (o, xi) in out.iter_mut().zip(x) {
            *o = s * xi;
        }
        Ok(())
    }

    pub fn value_at_origin(&self) -> f64 {
        self.value_at_origin
    }

    pub fn is_singular_at_origin(&self) -> bool {
        self.value_at_origin == f64::INFINITY
    }

    /// `W_min`, a finite lower bound of `W`.
    pub fn lower_bound(&self) -> f64 {
        self.lower_bound
    }

    /// `W_inf`, possibly `+inf`.
    pub fn value_at_infinity(&self) -> f64 {
        self.value_at_infinity
    }

    /// `R6`: `w` is strictly increasing on `[R6, inf)`.
    pub fn monotone_radius(&self) -> Option<f64> {
        self.monotone_radius
    }

    pub fn tail(&self) -> Tail {
        self.tail
    }

    pub fn origin_integrable(&self) -> bool {
        self.origin_integrable
    }

    pub fn summary(&self) -> ProfileSummary {
        ProfileSummary {
            family: self.spec.family.name().to_string(),
            dimension: self.dimension(),
            value_at_origin: self.value_at_origin,
            lower_bound: self.lower_bound,
            value_at_infinity: self.value_at_infinity,
            monotone_radius: self.monotone_radius,
            tail: self.tail,
            origin_integrable: self.origin_integrable,
        }
    }

    pub fn validate_hypotheses(&self) -> HypothesisReport {
        validate_hypotheses(self)
    }
}

#[inline]
pub(crate) fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Zero of `w'` for the two-exponential profile, clamped at 0.
fn morse_monotone_radius(c_r: f64, c_a: f64, ell_r: f64, ell_a: f64) -> Option<f64> {
    if ell_r < ell_a {
        let r = (c_r * ell_a / (c_a * ell_r)).ln() / (ell_r.recip() - ell_a.recip());
        Some(r.max(0.0))
    } else if ell_r == ell_a && c_r < c_a {
        Some(0.0)
    } else {
        // repulsion has the longer range (or w is constant): w decreases near infinity
        None
    }
}

/// Last sign change of `w'` below `beyond`, found by a downward scan and bisection.
fn refine_monotone_radius(kernel: &Kernel, beyond: f64) -> f64 {
    const STEPS: usize = 4000;
    let dw = |r: f64| kernel.value_and_derivative(r).1;
    let h = beyond / STEPS as f64;
    let mut upper = beyond;
    for k in (0..STEPS).rev() {
        let r = k as f64 * h;
        if r == 0.0 {
            return 0.0;
        }
        if dw(r) <= 0.0 {
            let (mut lo, mut hi) = (r, upper);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if dw(mid) <= 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return hi;
        }
        upper = r;
    }
    0.0
}

/// Dense sampling on `[0, hi]` followed by golden-section refinement (tolerance 1e-10),
/// then compared against the values at both ends.
fn numeric_lower_bound(kernel: &Kernel, at_origin: f64, at_infinity: f64, hi: f64) -> f64 {
    const SAMPLES: usize = 20_000;
    let w = |r: f64| kernel.value(r);
    let grid = |k: usize| hi * (k as f64 / SAMPLES as f64).powi(2);
    let mut best_k = 1;
    let mut best = f64::INFINITY;
    for k in 1..=SAMPLES {
        let v = w(grid(k));
        if v < best {
            best = v;
            best_k = k;
        }
    }
    let (mut a, mut b) = (grid(best_k - 1), grid((best_k + 1).min(SAMPLES)));
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let (mut f1, mut f2) = (w(x1), w(x2));
    while b - a > 1e-10 {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = w(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = w(x2);
        }
    }
    let mut out = best.min(f1).min(f2);
    if at_origin.is_finite() {
        out = out.min(at_origin);
    }
    if at_infinity.is_finite() {
        out = out.min(at_infinity);
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HypothesisStatus {
    Holds,
    Fails,
    NotDetermined,
}

#[derive(Clone, Debug, Serialize)]
pub struct HypothesisCheck {
    pub hypothesis: Hypothesis,
    pub status: HypothesisStatus,
    pub evidence: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct HypothesisReport {
    pub checks: Vec<HypothesisCheck>,
}

impl HypothesisReport {
    pub fn status(&self, hypothesis: Hypothesis) -> HypothesisStatus {
        self.checks
            .iter()
            .find(|c| c.hypothesis == hypothesis)
            .map(|c| c.status)
            .unwrap_or(HypothesisStatus::NotDetermined)
    }

    pub fn holds(&self, hypothesis: Hypothesis) -> bool {
        self.status(hypothesis) == HypothesisStatus::Holds
    }
}

/// Per-hypothesis status with the evidence used.
///
/// H6 is only certified through the radial sufficient condition (a finite
/// `R6`). Built-in families whose profile is known to decrease near infinity
/// report `Fails`; custom profiles without a declared monotone tail report
/// `NotDetermined`.
pub fn validate_hypotheses(profile: &PotentialProfile) -> HypothesisReport {
    use HypothesisStatus::*;
    let custom = matches!(profile.spec.family, Family::Custom(_));
    let mut checks = Vec::with_capacity(6);
    let mut push = |hypothesis, status, evidence: String| {
        checks.push(HypothesisCheck {
            hypothesis,
            status,
            evidence,
        })
    };

    if profile.lower_bound.is_finite() {
        push(Hypothesis::BoundedBelow, Holds, format!("W_min = {}", profile.lower_bound));
    } else {
        push(Hypothesis::BoundedBelow, Fails, "no finite lower bound".into());
    }

    match &profile.spec.family {
        Family::PowerLaw { b, .. } => push(
            Hypothesis::LocallyIntegrable,
            Holds,
            format!("r^(d-1+b) integrable near 0 since b = {b} > -d = -{}", profile.dimension()),
        ),
        _ if profile.origin_integrable => push(
            Hypothesis::LocallyIntegrable,
            Holds,
            "integrable near the origin".into(),
        ),
        _ => push(Hypothesis::LocallyIntegrable, Fails, "not integrable at the origin".into()),
    }

    push(Hypothesis::Symmetric, Holds, "radial profile".into());

    if profile.value_at_infinity.is_nan() {
        push(Hypothesis::LimitAtInfinity, Fails, "no limit at infinity".into());
    } else {
        push(
            Hypothesis::LimitAtInfinity,
            Holds,
            format!("W_inf = {}", profile.value_at_infinity),
        );
    }

    if custom && !profile.continuous {
        push(
            Hypothesis::LowerSemicontinuous,
            NotDetermined,
            "custom profile without continuity evidence".into(),
        );
    } else {
        push(
            Hypothesis::LowerSemicontinuous,
            Holds,
            "continuous away from the origin, +inf limit at a singular origin".into(),
        );
    }

    match profile.monotone_radius {
        Some(r6) => push(
            Hypothesis::EventuallyIncreasing,
            Holds,
            format!("w strictly increasing for r >= R6 = {r6}"),
        ),
        None if custom => push(
            Hypothesis::EventuallyIncreasing,
            NotDetermined,
            "no monotone tail declared".into(),
        ),
        None => push(
            Hypothesis::EventuallyIncreasing,
            Fails,
            "w decreases towards its limit at infinity".into(),
        ),
    }

    HypothesisReport { checks }
}
