use std::path::PathBuf;

use interaction_minimiser::certify::{certify_with_bounds, theoretical_bound, BoundError};
use interaction_minimiser::minimise::{restart_rng, sample_uniform_ball, MinimiseError};
use interaction_minimiser::stability::{classify, morse_criterion, morse_integral, Verdict};
use interaction_minimiser::{
    flow_simulate, minimise_discrete, ParticleConfiguration, PotentialProfile, PotentialSpec,
};
use serde::Serialize;
use serde_json::json;

use crate::config::RunConfig;
use crate::io::{format_num, particles_csv, read_particles, table_csv, trace_csv, write_atomic, write_json};

pub enum Failure {
    /// Bad configuration or input; exit code 2.
    Validation(String),
    /// A computation could not complete; exit code 3.
    Computation(String),
    /// Checks ran and at least one failed; exit code 4.
    Certification(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 2,
            Failure::Computation(_) => 3,
            Failure::Certification(_) => 4,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Failure::Validation(_) => "validation",
            Failure::Computation(_) => "computation",
            Failure::Certification(_) => "certification",
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Validation(m) | Failure::Computation(m) | Failure::Certification(m) => m,
        }
    }
}

pub type Outcome = Result<String, Failure>;

fn validation(e: impl ToString) -> Failure {
    Failure::Validation(e.to_string())
}

fn computation(e: impl ToString) -> Failure {
    Failure::Computation(e.to_string())
}

fn minimise_failure(e: MinimiseError) -> Failure {
    match e {
        MinimiseError::InvalidOptions(_) | MinimiseError::Configuration(_) => validation(e),
        _ => computation(e),
    }
}

fn bound_failure(e: BoundError) -> Failure {
    computation(e)
}

pub fn note(event: &str, path: &std::path::Path) {
    eprintln!("{}", json!({"level": "info", "event": event, "path": path.display().to_string()}));
}

struct Output {
    dir: PathBuf,
    json: bool,
    csv: bool,
}

impl Output {
    fn new(cfg: &RunConfig) -> Self {
        Output {
            dir: cfg.output_dir(),
            json: cfg.formats.json,
            csv: cfg.formats.csv,
        }
    }

    fn json<T: Serialize>(&self, name: &str, value: &T) -> Result<(), Failure> {
        if self.json {
            let path = write_json(&self.dir, name, value).map_err(computation)?;
            note("wrote", &path);
        }
        Ok(())
    }

    fn csv(&self, name: &str, bytes: Result<Vec<u8>, String>) -> Result<(), Failure> {
        if self.csv {
            let path = self.dir.join(name);
            write_atomic(&path, &bytes.map_err(computation)?).map_err(computation)?;
            note("wrote", &path);
        }
        Ok(())
    }
}

fn build_profile(cfg: &RunConfig) -> Result<PotentialProfile, Failure> {
    let spec = cfg.potential_spec().map_err(validation)?;
    PotentialProfile::build(spec).map_err(validation)
}

pub fn classify_cmd(cfg: &RunConfig) -> Outcome {
    let profile = build_profile(cfg)?;
    let report = classify(&profile, &cfg.quadrature);
    let hypotheses = profile.validate_hypotheses();
    Output::new(cfg).json(
        "classify.json",
        &json!({
            "config": cfg,
            "profile": profile.summary(),
            "hypotheses": hypotheses,
            "stability": report,
        }),
    )?;
    let verdict = serde_json::to_value(report.verdict).unwrap_or_default();
    let reason = serde_json::to_value(report.reason).unwrap_or_default();
    let existence = serde_json::to_value(report.existence_verdict).unwrap_or_default();
    Ok(format!(
        "verdict {} ({}), integral {}, existence {}",
        verdict.as_str().unwrap_or("?"),
        reason.as_str().unwrap_or("?"),
        report.integral_value,
        existence.as_str().unwrap_or("?")
    ))
}

pub fn minimise_cmd(cfg: &RunConfig) -> Outcome {
    let profile = build_profile(cfg)?;
    let result = minimise_discrete(&profile, &cfg.minimise).map_err(minimise_failure)?;
    let out = Output::new(cfg);
    out.csv("particles.csv", particles_csv(&result.config))?;
    out.csv("trace.csv", trace_csv(&result.energy_trace))?;
    out.json("result.json", &json!({"config": cfg, "result": result}))?;
    Ok(format!(
        "energy {} after {} iterations (converged {}, grad_norm {:e}, diameter {}{})",
        result.energy,
        result.iterations,
        result.converged,
        result.grad_norm,
        result.diameter,
        if result.multimodal { ", restarts disagree" } else { "" }
    ))
}

fn initial_particles(cfg: &RunConfig, profile: &PotentialProfile) -> Result<ParticleConfiguration, Failure> {
    if let Some(path) = &cfg.particles {
        let config = read_particles(path).map_err(validation)?;
        if config.dim() != profile.dimension() {
            return Err(validation(format!(
                "particle file has dimension {}, potential has {}",
                config.dim(),
                profile.dimension()
            )));
        }
        return Ok(config);
    }
    let m = &cfg.minimise;
    m.validate().map_err(validation)?;
    let mut rng = restart_rng(m.seed, 0);
    let d = profile.dimension();
    let positions = sample_uniform_ball(&mut rng, m.n, d, m.initial_radius(profile));
    ParticleConfiguration::uniform(d, positions).map_err(validation)
}

pub fn flow_cmd(cfg: &RunConfig) -> Outcome {
    let profile = build_profile(cfg)?;
    let start = initial_particles(cfg, &profile)?;
    let flow = flow_simulate(&profile, &start, &cfg.flow).map_err(minimise_failure)?;
    let out = Output::new(cfg);
    out.csv("particles.csv", particles_csv(&flow.result.config))?;
    out.csv("trace.csv", trace_csv(&flow.result.energy_trace))?;
    let d = start.dim();
    let mut header = vec!["step".to_string(), "time".into(), "particle".into()];
    header.extend((1..=d).map(|k| format!("x{k}")));
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let rows = flow.trajectory.iter().flat_map(|s| {
        s.positions.chunks_exact(d).enumerate().map(move |(i, x)| {
            let mut row = vec![s.step.to_string(), format_num(s.time), i.to_string()];
            row.extend(x.iter().map(|v| format_num(*v)));
            row
        })
    });
    out.csv("trajectory.csv", table_csv(&header, rows))?;
    out.json("result.json", &json!({"config": cfg, "flow": flow}))?;
    Ok(format!(
        "t = {} in {} steps, energy {}, final dt {}, centre-of-mass drift {:e}",
        flow.time, flow.result.iterations, flow.result.energy, flow.final_dt, flow.com_drift
    ))
}

pub fn bounds_cmd(cfg: &RunConfig) -> Outcome {
    let profile = build_profile(cfg)?;
    let report = theoretical_bound(&profile, &cfg.bound_options()).map_err(bound_failure)?;
    Output::new(cfg).json("bounds.json", &json!({"config": cfg, "bounds": report}))?;
    let b = report.parameters;
    Ok(format!(
        "S = {}, E_S_hat = {}, A = {}, r' = {}, r = {}, m = {}, K = {}",
        b.s, b.e_s_hat, b.a, b.r_prime, b.r, b.m, b.k
    ))
}

pub fn certify_cmd(cfg: &RunConfig) -> Outcome {
    let profile = build_profile(cfg)?;
    let path = cfg
        .particles
        .as_ref()
        .ok_or_else(|| validation("certify needs --particles (or \"particles\" in the config)"))?;
    let config = read_particles(path).map_err(validation)?;
    if config.dim() != profile.dimension() {
        return Err(validation(format!(
            "particle file has dimension {}, potential has {}",
            config.dim(),
            profile.dimension()
        )));
    }
    let bounds = theoretical_bound(&profile, &cfg.bound_options()).map_err(bound_failure)?;
    let report = certify_with_bounds(&config, &profile, &bounds.parameters, &cfg.certify);
    Output::new(cfg).json("certificate.json", &json!({"config": cfg, "certificate": report}))?;
    let p = report.passes;
    let summary = format!(
        "el {}, local mass {}, gaps {}, diameter {} (diameter {} vs K = {})",
        p.el, p.local_mass, p.gaps, p.diameter, report.diameter, report.k
    );
    if p.all() {
        Ok(summary)
    } else {
        for v in &report.violations {
            eprintln!("{}", json!({"level": "warning", "kind": "violation", "message": v}));
        }
        Err(Failure::Certification(summary))
    }
}

pub fn sweep_cmd(cfg: &RunConfig) -> Outcome {
    let s = &cfg.sweep;
    s.validate().map_err(validation)?;
    let header = [
        "dimension", "c_r", "c_a", "ell_r", "ell_a", "integral", "verdict", "criterion", "agree",
    ];
    let mut rows = Vec::new();
    let mut disagreements = 0;
    for &d in &s.dimensions {
        for ratio in s.c_ratio.values() {
            for lengths in s.length_ratio.values() {
                let (c_r, ell_a) = (ratio * s.c_a, lengths * s.ell_r);
                let spec = PotentialSpec::morse(c_r, s.c_a, s.ell_r, ell_a, d);
                let row_base = [d.to_string(), format_num(c_r), format_num(s.c_a), format_num(s.ell_r), format_num(ell_a)];
                let criterion = morse_criterion(c_r, s.c_a, s.ell_r, ell_a, d);
                let (integral, verdict, agree) = match PotentialProfile::build(spec) {
                    Ok(p) => {
                        let r = classify(&p, &cfg.quadrature);
                        let unstable = r.verdict == Verdict::Unstable;
                        let v = serde_json::to_value(r.verdict).unwrap_or_default();
                        (r.integral_value, v.as_str().unwrap_or("?").to_string(), unstable == criterion)
                    }
                    Err(e) => {
                        eprintln!(
                            "{}",
                            json!({"level": "warning", "kind": "cell", "message": e.to_string(), "c_r": c_r, "ell_a": ell_a, "dimension": d})
                        );
                        (morse_integral(c_r, s.c_a, s.ell_r, ell_a, d), "invalid".into(), false)
                    }
                };
                disagreements += usize::from(!agree);
                let mut row = row_base.to_vec();
                row.extend([format_num(integral), verdict, criterion.to_string(), agree.to_string()]);
                rows.push(row);
            }
        }
    }
    let out = Output {
        csv: true,
        ..Output::new(cfg)
    };
    let n = rows.len();
    out.csv("sweep.csv", table_csv(&header, rows.into_iter()))?;
    Ok(format!("{n} cells, {} agree with the closed-form criterion", n - disagreements))
}
