//! wasm-bindgen bindings for the static demo page in `www/`.
//!
//! Everything returns plain numbers, vectors or JSON strings, so the same
//! functions are exercised by native tests.

use interaction_minimiser::certify::{certify_with_bounds, theoretical_bound, BoundOptions, CertifyOptions};
use interaction_minimiser::minimise::{restart_rng, sample_uniform_ball, Descent, StepOutcome, StepRule};
use interaction_minimiser::quadrature::QuadratureOptions;
use interaction_minimiser::stability::{classify, morse_criterion, Verdict};
use interaction_minimiser::{ParticleConfiguration, PotentialProfile, PotentialSpec};
use serde_json::json;
use wasm_bindgen::prelude::*;

/// `family` is `power_law` (params `a, b`), `morse` (`c_r, c_a, ell_r,
/// ell_a`) or `gaussian_bump` (none).
fn spec_from(family: &str, params: &[f64], dim: usize) -> Result<PotentialSpec, String> {
    let need = |k: usize| {
        if params.len() == k {
            Ok(())
        } else {
            Err(format!("{family} takes {k} parameters, got {}", params.len()))
        }
    };
    match family {
        "power_law" => need(2).map(|_| PotentialSpec::power_law(params[0], params[1], dim)),
        "morse" => need(4).map(|_| PotentialSpec::morse(params[0], params[1], params[2], params[3], dim)),
        "gaussian_bump" => need(0).map(|_| PotentialSpec::gaussian_bump(dim)),
        other => Err(format!("unknown family {other:?}")),
    }
}

fn profile_from(family: &str, params: &[f64], dim: usize) -> Result<PotentialProfile, String> {
    PotentialProfile::build(spec_from(family, params, dim)?).map_err(|e| e.to_string())
}

/// Morse grid over log-spaced `C_R/C_A` in `[0.1, 10]` and linear
/// `ell_A/ell_R` in `[1.1, 4]`, as a JSON array of cells.
#[wasm_bindgen]
pub fn phase_diagram(dim: usize, ratio_steps: usize, length_steps: usize) -> Result<String, String> {
    if dim == 0 || ratio_steps < 2 || length_steps < 2 || ratio_steps * length_steps > 10_000 {
        return Err("need dim >= 1 and a grid of 2..=10000 cells per axis pair".into());
    }
    let quadrature = QuadratureOptions::default();
    let mut cells = Vec::with_capacity(ratio_steps * length_steps);
    for i in 0..ratio_steps {
        let ratio = 0.1 * 100f64.powf(i as f64 / (ratio_steps - 1) as f64);
        for j in 0..length_steps {
            let lengths = 1.1 + 2.9 * j as f64 / (length_steps - 1) as f64;
            let p = profile_from("morse", &[ratio, 1.0, 1.0, lengths], dim)?;
            let report = classify(&p, &quadrature);
            cells.push(json!({
                "i": i,
                "j": j,
                "c_ratio": ratio,
                "length_ratio": lengths,
                "integral": report.integral_value,
                "unstable": report.verdict == Verdict::Unstable,
                "criterion": morse_criterion(ratio, 1.0, 1.0, lengths, dim),
            }));
        }
    }
    Ok(serde_json::Value::Array(cells).to_string())
}

/// Bound parameters as JSON, or the pipeline's error message.
#[wasm_bindgen]
pub fn bounds(family: &str, params: Vec<f64>, dim: usize) -> Result<String, String> {
    let p = profile_from(family, &params, dim)?;
    let report = theoretical_bound(&p, &BoundOptions::default()).map_err(|e| e.to_string())?;
    serde_json::to_string(&report).map_err(|e| e.to_string())
}

/// A particle minimisation advanced a few steps per animation frame.
#[wasm_bindgen]
pub struct Simulation {
    profile: PotentialProfile,
    descent: Descent,
    stalled: bool,
}

#[wasm_bindgen]
impl Simulation {
    #[wasm_bindgen(constructor)]
    pub fn new(family: &str, params: Vec<f64>, dim: usize, n: usize, seed: u64, init_radius: f64) -> Result<Simulation, String> {
        let profile = profile_from(family, &params, dim)?;
        if n < 2 || !(init_radius > 0.0) {
            return Err("need n >= 2 and a positive initial radius".into());
        }
        let mut rng = restart_rng(seed, 0);
        let config = ParticleConfiguration::uniform(dim, sample_uniform_ball(&mut rng, n, dim, init_radius))
            .map_err(|e| e.to_string())?;
        let descent = Descent::new(&profile, config, StepRule::default(), None, true).map_err(|e| e.to_string())?;
        Ok(Simulation {
            profile,
            descent,
            stalled: false,
        })
    }

    /// Runs up to `steps` descent steps; returns how many were accepted.
    pub fn step(&mut self, steps: usize) -> usize {
        let mut accepted = 0;
        for _ in 0..steps {
            if self.stalled || self.descent.grad_norm() <= 1e-10 {
                break;
            }
            match self.descent.step() {
                StepOutcome::Accepted => accepted += 1,
                StepOutcome::Stalled => self.stalled = true,
            }
        }
        accepted
    }

    /// Flattened `N x d` positions.
    pub fn positions(&self) -> Vec<f64> {
        self.descent.config().positions().to_vec()
    }

    pub fn dim(&self) -> usize {
        self.descent.config().dim()
    }

    pub fn energy(&self) -> f64 {
        self.descent.energy()
    }

    pub fn grad_norm(&self) -> f64 {
        self.descent.grad_norm()
    }

    pub fn iterations(&self) -> usize {
        self.descent.iterations()
    }

    pub fn diameter(&self) -> f64 {
        self.descent.config().diameter()
    }

    /// Certificate of the current configuration as JSON.
    pub fn certificate(&self) -> Result<String, String> {
        let bounds = theoretical_bound(&self.profile, &BoundOptions::default()).map_err(|e| e.to_string())?;
        let report = certify_with_bounds(
            self.descent.config(),
            &self.profile,
            &bounds.parameters,
            &CertifyOptions::default(),
        );
        serde_json::to_string(&report).map_err(|e| e.to_string())
    }
}
