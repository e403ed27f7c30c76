//! JSON run configuration and command-line overrides.

use std::path::{Path, PathBuf};

use interaction_minimiser::certify::{BoundOptions, CertifyOptions};
use interaction_minimiser::minimise::{FlowOptions, MinimiseOptions};
use interaction_minimiser::quadrature::QuadratureOptions;
use interaction_minimiser::PotentialSpec;
use serde::{Deserialize, Serialize};

use crate::cli::CommonArgs;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[clap(rename_all = "snake_case")]
pub enum FamilyName {
    PowerLaw,
    Morse,
    GaussianBump,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialConfig {
    pub family: FamilyName,
    #[serde(default)]
    pub params: serde_json::Map<String, serde_json::Value>,
    pub dimension: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PowerLawParams {
    a: f64,
    b: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MorseParams {
    c_r: f64,
    c_a: f64,
    ell_r: f64,
    ell_a: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NoParams {}

impl PotentialConfig {
    pub fn to_spec(&self) -> Result<PotentialSpec, String> {
        let params = serde_json::Value::Object(self.params.clone());
        let bad = |e: serde_json::Error| format!("potential params: {e}");
        Ok(match self.family {
            FamilyName::PowerLaw => {
                let p: PowerLawParams = serde_json::from_value(params).map_err(bad)?;
                PotentialSpec::power_law(p.a, p.b, self.dimension)
            }
            FamilyName::Morse => {
                let p: MorseParams = serde_json::from_value(params).map_err(bad)?;
                PotentialSpec::morse(p.c_r, p.c_a, p.ell_r, p.ell_a, self.dimension)
            }
            FamilyName::GaussianBump => {
                let _: NoParams = serde_json::from_value(params).map_err(bad)?;
                PotentialSpec::gaussian_bump(self.dimension)
            }
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    Linear,
    Log,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
    pub scale: Scale,
}

impl Axis {
    pub fn values(&self) -> Vec<f64> {
        match self.steps {
            0 => Vec::new(),
            1 => vec![self.min],
            n => (0..n)
                .map(|k| {
                    let t = k as f64 / (n - 1) as f64;
                    match self.scale {
                        Scale::Linear => self.min + t * (self.max - self.min),
                        Scale::Log => self.min * (self.max / self.min).powf(t),
                    }
                })
                .collect(),
        }
    }

    fn validate(&self, name: &str) -> Result<(), String> {
        if !(self.min.is_finite() && self.max.is_finite() && self.min <= self.max) {
            return Err(format!("sweep.{name}: need finite min <= max"));
        }
        if self.scale == Scale::Log && !(self.min > 0.0) {
            return Err(format!("sweep.{name}: log scale needs min > 0"));
        }
        Ok(())
    }
}

/// Morse phase-diagram grid over `C_R/C_A` and `ell_A/ell_R` at fixed
/// `c_a` and `ell_r`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    pub c_ratio: Axis,
    pub length_ratio: Axis,
    pub dimensions: Vec<usize>,
    pub c_a: f64,
    pub ell_r: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            c_ratio: Axis {
                min: 0.1,
                max: 10.0,
                steps: 10,
                scale: Scale::Log,
            },
            length_ratio: Axis {
                min: 1.1,
                max: 4.0,
                steps: 10,
                scale: Scale::Linear,
            },
            dimensions: vec![2],
            c_a: 1.0,
            ell_r: 1.0,
        }
    }
}

pub const MAX_SWEEP_CELLS: usize = 10_000;

impl SweepConfig {
    pub fn validate(&self) -> Result<(), String> {
        self.c_ratio.validate("c_ratio")?;
        self.length_ratio.validate("length_ratio")?;
        let cells = self.c_ratio.steps * self.length_ratio.steps * self.dimensions.len();
        if cells > MAX_SWEEP_CELLS {
            return Err(format!("sweep grid has {cells} cells, limit {MAX_SWEEP_CELLS}"));
        }
        if self.dimensions.iter().any(|d| *d == 0) {
            return Err("sweep.dimensions must be positive".into());
        }
        if !(self.c_a > 0.0 && self.ell_r > 0.0) {
            return Err("sweep.c_a and sweep.ell_r must be positive".into());
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Formats {
    pub json: bool,
    pub csv: bool,
}

impl Default for Formats {
    fn default() -> Self {
        Formats { json: true, csv: true }
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub potential: Option<PotentialConfig>,
    pub minimise: MinimiseOptions,
    pub flow: FlowOptions,
    pub quadrature: QuadratureOptions,
    pub certify: CertifyOptions,
    pub sweep: SweepConfig,
    /// Particle CSV read by `certify` and, when set, by `flow`.
    pub particles: Option<PathBuf>,
    pub output_dir: Option<PathBuf>,
    pub formats: Formats,
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, String> {
        match path {
            None => Ok(RunConfig::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| format!("reading {}: {e}", p.display()))?;
                serde_json::from_str(&text).map_err(|e| format!("config {}: {e}", p.display()))
            }
        }
    }

    /// Applies flags on top of file values.
    pub fn apply(&mut self, args: &CommonArgs) -> Result<(), String> {
        if let Some(family) = args.potential {
            let keep = self.potential.as_ref().filter(|p| p.family == family).map(|p| p.params.clone());
            let dimension = args
                .dim
                .or(self.potential.as_ref().map(|p| p.dimension))
                .ok_or("--potential needs --dim (or a dimension in the config)")?;
            self.potential = Some(PotentialConfig {
                family,
                params: keep.unwrap_or_default(),
                dimension,
            });
        }
        let set = |cfg: &mut Option<PotentialConfig>, key: &str, v: Option<f64>| -> Result<(), String> {
            if let Some(v) = v {
                let p = cfg.as_mut().ok_or_else(|| format!("--{key} given without a potential"))?;
                p.params.insert(key.into(), serde_json::json!(v));
            }
            Ok(())
        };
        set(&mut self.potential, "a", args.a)?;
        set(&mut self.potential, "b", args.b)?;
        set(&mut self.potential, "c_r", args.cr)?;
        set(&mut self.potential, "c_a", args.ca)?;
        set(&mut self.potential, "ell_r", args.lr)?;
        set(&mut self.potential, "ell_a", args.la)?;
        if let (Some(d), Some(p)) = (args.dim, self.potential.as_mut()) {
            p.dimension = d;
        }
        let m = &mut self.minimise;
        if let Some(v) = args.n {
            m.n = v;
        }
        if let Some(v) = args.restarts {
            m.restarts = v;
        }
        if let Some(v) = args.max_iters {
            m.max_iters = v;
        }
        if let Some(v) = args.grad_tol {
            m.grad_tol = v;
        }
        if let Some(v) = args.seed {
            m.seed = v;
        }
        if let Some(v) = args.ball_radius {
            m.ball_radius = Some(v);
        }
        if let Some(v) = args.init_radius {
            m.init_radius = Some(v);
        }
        if let Some(v) = args.dt {
            self.flow.dt = v;
        }
        if let Some(v) = args.t_end {
            self.flow.t_end = v;
        }
        if let Some(v) = args.el_tolerance {
            self.certify.el_tolerance = v;
        }
        if let Some(p) = &args.particles {
            self.particles = Some(p.clone());
        }
        if let Some(p) = &args.output_dir {
            self.output_dir = Some(p.clone());
        }
        Ok(())
    }

    pub fn potential_spec(&self) -> Result<PotentialSpec, String> {
        self.potential
            .as_ref()
            .ok_or("no potential given (use --potential or a config file)")?
            .to_spec()
    }

    pub fn output_dir(&self) -> PathBuf {
        self.output_dir.clone().unwrap_or_else(|| PathBuf::from("."))
    }

    pub fn bound_options(&self) -> BoundOptions {
        self.certify.bounds
    }
}
