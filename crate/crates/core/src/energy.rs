//! Discrete interaction energy of weighted particle measures, its gradient,
//! and the potential field `W * rho`.
//!
//! Pair sums are direct O(N^2). Rows may be evaluated in parallel but are
//! always reduced in index order, so results do not depend on scheduling.

use serde::Serialize;
use thiserror::Error;

use crate::potential::PotentialProfile;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigurationError {
    #[error("a configuration needs at least one particle")]
    Empty,
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("{len} coordinates do not split into points of dimension {dim}")]
    Ragged { len: usize, dim: usize },
    #[error("{weights} weights for {points} points")]
    WeightCount { weights: usize, points: usize },
    #[error("weight {index} is {value}; weights must be positive")]
    NonPositiveWeight { index: usize, value: f64 },
    #[error("weights sum to {0}, not 1")]
    NotNormalised(f64),
    #[error("coordinate {index} is not finite")]
    NonFinite { index: usize },
}

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
#[error("particles {i} and {j} coincide at a singularity of the potential")]
pub struct SingularPair {
    pub i: usize,
    pub j: usize,
}

/// Whether the `i = j` self-pairs enter the double sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SelfInteraction {
    Include,
    #[default]
    Exclude,
}

/// `N` weighted point masses in `R^d`; weights are positive and sum to 1.
#[derive(Clone, Debug, PartialEq)]
pub struct ParticleConfiguration {
    dim: usize,
    positions: Vec<f64>,
    weights: Vec<f64>,
}

impl ParticleConfiguration {
    pub fn new(dim: usize, positions: Vec<f64>, weights: Vec<f64>) -> Result<Self, ConfigurationError> {
        if dim == 0 {
            return Err(ConfigurationError::ZeroDimension);
        }
        if positions.len() % dim != 0 {
            return Err(ConfigurationError::Ragged {
                len: positions.len(),
                dim,
            });
        }
        let n = positions.len() / dim;
        if n == 0 {
            return Err(ConfigurationError::Empty);
        }
        if weights.len() != n {
            return Err(ConfigurationError::WeightCount {
                weights: weights.len(),
                points: n,
            });
        }
        if let Some(index) = positions.iter().position(|v| !v.is_finite()) {
            return Err(ConfigurationError::NonFinite { index });
        }
        if let Some((index, &value)) = weights.iter().enumerate().find(|(_, w)| !(**w > 0.0)) {
            return Err(ConfigurationError::NonPositiveWeight { index, value });
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(ConfigurationError::NotNormalised(total));
        }
        Ok(ParticleConfiguration {
            dim,
            positions,
            weights,
        })
    }

    /// Equal weights `1/N`.
    pub fn uniform(dim: usize, positions: Vec<f64>) -> Result<Self, ConfigurationError> {
        if dim == 0 {
            return Err(ConfigurationError::ZeroDimension);
        }
        let n = positions.len() / dim;
        ParticleConfiguration::new(dim, positions, vec![1.0 / n.max(1) as f64; n])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.positions[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> {
        self.positions.chunks_exact(self.dim)
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub(crate) fn positions_mut(&mut self) -> &mut [f64] {
        &mut self.positions
    }

    /// Replaces the positions, keeping weights. Panics on length mismatch.
    pub fn set_positions(&mut self, positions: &[f64]) {
        assert_eq!(positions.len(), self.positions.len());
        self.positions.copy_from_slice(positions);
    }

    pub fn centre_of_mass(&self) -> Vec<f64> {
        let mut c = vec![0.0; self.dim];
        for (x, w) in self.points().zip(&self.weights) {
            for (ck, xk) in c.iter_mut().zip(x) {
                *ck += w * xk;
            }
        }
        c
    }

    pub fn translated(&self, z: &[f64]) -> Self {
        let mut out = self.clone();
        out.translate(z);
        out
    }

    pub fn translate(&mut self, z: &[f64]) {
        assert_eq!(z.len(), self.dim);
        for chunk in self.positions.chunks_exact_mut(self.dim) {
            for (x, dz) in chunk.iter_mut().zip(z) {
                *x += dz;
            }
        }
    }

    /// Moves the centre of mass to the origin.
    pub fn recentre(&mut self) {
        let c: Vec<f64> = self.centre_of_mass().iter().map(|v| -v).collect();
        self.translate(&c);
    }
}

#[cfg(feature = "parallel")]
pub(crate) fn map_rows<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_rows<T, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..n).map(f).collect()
}

#[inline]
fn distance(x: &[f64], y: &[f64]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt()
}

/// `1/2 sum_i sum_j w_i w_j W(x_i - x_j)`, with or without `i = j`.
///
/// Returns `+inf` as soon as an included pair sits at a singularity.
pub fn discrete_energy(
    config: &ParticleConfiguration,
    profile: &PotentialProfile,
    self_interaction: SelfInteraction,
) -> f64 {
    let n = config.len();
    let w = config.weights();
    let rows = map_rows(n, |i| {
        let xi = config.point(i);
        let mut acc = 0.0;
        for j in (i + 1)..n {
            acc += w[j] * profile.radial(distance(xi, config.point(j)));
        }
        w[i] * acc
    });
    let mut energy: f64 = rows.iter().sum();
    if self_interaction == SelfInteraction::Include {
        let w0 = profile.value_at_origin();
        let sq: f64 = w.iter().map(|v| v * v).sum();
        energy += 0.5 * w0 * sq;
    }
    energy
}

/// Diagonal-free energy split as `offset + excess`, where the excess sums
/// `w_i w_j (W(x_i - x_j) - W(0))` over pairs. Minimisers compare excesses,
/// which stay resolvable when particles nearly coincide.
pub(crate) fn excess_energy(config: &ParticleConfiguration, profile: &PotentialProfile) -> f64 {
    let n = config.len();
    let w = config.weights();
    let rows = map_rows(n, |i| {
        let xi = config.point(i);
        let mut acc = 0.0;
        for j in (i + 1)..n {
            acc += w[j] * profile.radial_excess(distance(xi, config.point(j)));
        }
        w[i] * acc
    });
    rows.iter().sum()
}

/// `W(0) sum_{i<j} w_i w_j`, or 0 for potentials singular at the origin.
pub(crate) fn energy_offset(config: &ParticleConfiguration, profile: &PotentialProfile) -> f64 {
    let sq: f64 = config.weights().iter().map(|v| v * v).sum();
    0.5 * profile.excess_offset() * (1.0 - sq)
}

impl ParticleConfiguration {
    /// Largest pairwise distance.
    pub fn diameter(&self) -> f64 {
        let n = self.len();
        let rows = map_rows(n, |i| {
            let xi = self.point(i);
            ((i + 1)..n).map(|j| distance(xi, self.point(j))).fold(0.0, f64::max)
        });
        rows.into_iter().fold(0.0, f64::max)
    }

    /// `max_i |x_i - centre of mass|`.
    pub fn support_radius(&self) -> f64 {
        let c = self.centre_of_mass();
        self.points().map(|x| distance(x, &c)).fold(0.0, f64::max)
    }

    /// Mean over particles of the distance to the nearest other particle.
    pub fn mean_nearest_neighbour_distance(&self) -> f64 {
        let n = self.len();
        if n < 2 {
            return 0.0;
        }
        let nearest = map_rows(n, |i| {
            let xi = self.point(i);
            (0..n)
                .filter(|&j| j != i)
                .map(|j| distance(xi, self.point(j)))
                .fold(f64::INFINITY, f64::min)
        });
        nearest.iter().sum::<f64>() / n as f64
    }
}

/// Per-particle velocity `v_i = sum_{j != i} w_j grad W(x_i - x_j)`,
/// flattened `N x d`. The energy gradient is `g_i = w_i v_i`.
pub fn velocity_field(
    config: &ParticleConfiguration,
    profile: &PotentialProfile,
) -> Result<Vec<f64>, SingularPair> {
    let n = config.len();
    let d = config.dim();
    let w = config.weights();
    let singular = profile.is_singular_at_origin();
    // w'(r)/r for every pair j > i; the transcendental part runs in parallel
    let rows = map_rows(n, |i| {
        let xi = config.point(i);
        let mut scale = Vec::with_capacity(n - i - 1);
        for j in (i + 1)..n {
            let r = distance(xi, config.point(j));
            if r == 0.0 {
                if singular {
                    return Err(SingularPair { i, j });
                }
                scale.push(0.0);
            } else {
                scale.push(profile.radial_derivative(r) / r);
            }
        }
        Ok(scale)
    });
    let mut v = vec![0.0; n * d];
    for (i, row) in rows.into_iter().enumerate() {
        let row = row?;
        for (j, s) in ((i + 1)..n).zip(row) {
            for k in 0..d {
                let f = s * (config.positions[i * d + k] - config.positions[j * d + k]);
                v[i * d + k] += w[j] * f;
                v[j * d + k] -= w[i] * f;
            }
        }
    }
    Ok(v)
}

/// `g_i = w_i sum_{j != i} w_j grad W(x_i - x_j)`, flattened `N x d`.
pub fn discrete_gradient(
    config: &ParticleConfiguration,
    profile: &PotentialProfile,
) -> Result<Vec<f64>, SingularPair> {
    let d = config.dim();
    let mut v = velocity_field(config, profile)?;
    for (chunk, w) in v.chunks_exact_mut(d).zip(config.weights()) {
        chunk.iter_mut().for_each(|g| *g *= w);
    }
    Ok(v)
}

/// `sum_j w_j W(query - x_j)`, skipping `j = exclude`.
pub fn potential_field(
    config: &ParticleConfiguration,
    profile: &PotentialProfile,
    query: &[f64],
    exclude: Option<usize>,
) -> f64 {
    config
        .points()
        .zip(config.weights())
        .enumerate()
        .filter(|(j, _)| Some(*j) != exclude)
        .map(|(_, (xj, wj))| wj * profile.radial(distance(query, xj)))
        .sum()
}

/// `U_i = sum_{j != i} w_j W(x_i - x_j)` for every particle.
pub fn field_at_particles(config: &ParticleConfiguration, profile: &PotentialProfile) -> Vec<f64> {
    map_rows(config.len(), |i| potential_field(config, profile, config.point(i), Some(i)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::PotentialSpec;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn profile(spec: PotentialSpec) -> PotentialProfile {
        PotentialProfile::build(spec).unwrap()
    }

    fn random_config(rng: &mut ChaCha8Rng, n: usize, d: usize, weighted: bool) -> ParticleConfiguration {
        let positions: Vec<f64> = (0..n * d).map(|_| rng.random_range(-2.0..2.0)).collect();
        if weighted {
            let raw: Vec<f64> = (0..n).map(|_| rng.random_range(0.1..1.0)).collect();
            let total: f64 = raw.iter().sum();
            let mut weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
            let err: f64 = 1.0 - weights.iter().sum::<f64>();
            weights[0] += err;
            ParticleConfiguration::new(d, positions, weights).unwrap()
        } else {
            ParticleConfiguration::uniform(d, positions).unwrap()
        }
    }

    #[test]
    fn configuration_validation() {
        assert_eq!(
            ParticleConfiguration::new(2, vec![], vec![]).unwrap_err(),
            ConfigurationError::Empty
        );
        assert!(matches!(
            ParticleConfiguration::new(2, vec![0.0; 3], vec![1.0]),
            Err(ConfigurationError::Ragged { .. })
        ));
        assert!(matches!(
            ParticleConfiguration::new(1, vec![0.0, 1.0], vec![1.5, -0.5]),
            Err(ConfigurationError::NonPositiveWeight { index: 1, .. })
        ));
        assert!(matches!(
            ParticleConfiguration::new(1, vec![0.0, 1.0], vec![0.5, 0.6]),
            Err(ConfigurationError::NotNormalised(_))
        ));
        assert!(ParticleConfiguration::new(1, vec![f64::NAN], vec![1.0]).is_err());
    }

    #[test]
    fn two_particle_energy() {
        let p = profile(PotentialSpec::power_law(2.0, 1.0, 2));
        let c = ParticleConfiguration::uniform(2, vec![0.0, 0.0, 1.0, 0.0]).unwrap();
        assert_eq!(discrete_energy(&c, &p, SelfInteraction::Exclude), -0.125);
        // self pairs add 1/2 W(0) sum w_i^2 = 0 here
        assert_eq!(discrete_energy(&c, &p, SelfInteraction::Include), -0.125);
    }

    #[test]
    fn single_particle_self_energy() {
        let p = profile(PotentialSpec::morse(1.0, 2.0, 1.0, 1.0, 3));
        let c = ParticleConfiguration::uniform(3, vec![0.4, -1.0, 2.0]).unwrap();
        assert_eq!(discrete_energy(&c, &p, SelfInteraction::Include), -0.5);
        assert_eq!(discrete_energy(&c, &p, SelfInteraction::Exclude), 0.0);
        let singular = profile(PotentialSpec::power_law(2.0, 0.0, 3));
        assert_eq!(discrete_energy(&c, &singular, SelfInteraction::Include), f64::INFINITY);
    }

    #[test]
    fn coincident_singular_pair() {
        let p = profile(PotentialSpec::power_law(2.0, -1.0, 2));
        let c = ParticleConfiguration::uniform(2, vec![0.0, 0.0, 1.0, 1.0, 0.0, 0.0]).unwrap();
        assert_eq!(discrete_energy(&c, &p, SelfInteraction::Exclude), f64::INFINITY);
        assert_eq!(discrete_gradient(&c, &p), Err(SingularPair { i: 0, j: 2 }));

        // smooth potential: coincident particles simply exert no force on each other
        let smooth = profile(PotentialSpec::morse(1.0, 2.0, 0.5, 1.0, 2));
        assert!(discrete_gradient(&c, &smooth).is_ok());
    }

    #[test]
    fn stationary_pair_has_zero_gradient() {
        let p = profile(PotentialSpec::power_law(2.0, 1.0, 2));
        let c = ParticleConfiguration::uniform(2, vec![0.3, 0.1, 0.3, 1.1]).unwrap();
        let g = discrete_gradient(&c, &p).unwrap();
        assert!(g.iter().all(|v| v.abs() < 1e-15), "{g:?}");
    }

    #[test]
    fn symmetric_pair_gradients_cancel_exactly() {
        let p = profile(PotentialSpec::morse(1.0, 2.0, 0.5, 1.0, 3));
        let c = ParticleConfiguration::uniform(3, vec![0.1, 0.7, -0.2, 1.3, -0.4, 0.5]).unwrap();
        let g = discrete_gradient(&c, &p).unwrap();
        for k in 0..3 {
            assert_eq!(g[k], -g[3 + k]);
        }
    }

    #[test]
    fn field_single_particle() {
        let p = profile(PotentialSpec::power_law(2.0, 0.0, 2));
        let c = ParticleConfiguration::uniform(2, vec![0.0, 0.0]).unwrap();
        let q = [0.6, -0.8];
        assert_eq!(potential_field(&c, &p, &q, None), p.evaluate(&q));
        assert_eq!(potential_field(&c, &p, &q, Some(0)), 0.0);
    }

    #[test]
    fn energy_field_consistency() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let potentials = [
            PotentialSpec::power_law(2.0, 0.0, 2),
            PotentialSpec::morse(1.0, 2.0, 0.5, 1.0, 2),
            PotentialSpec::gaussian_bump(2),
        ];
        for spec in potentials {
            let p = profile(spec);
            for weighted in [false, true] {
                let c = random_config(&mut rng, 40, 2, weighted);
                let u = field_at_particles(&c, &p);
                let lhs: f64 = u.iter().zip(c.weights()).map(|(u, w)| u * w).sum();
                let rhs = 2.0 * discrete_energy(&c, &p, SelfInteraction::Exclude);
                assert_relative_eq!(lhs, rhs, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = profile(PotentialSpec::power_law(2.0, -0.5, 3));
        let c = random_config(&mut rng, 12, 3, true);
        let g = discrete_gradient(&c, &p).unwrap();
        let scale = g.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for idx in 0..c.positions().len() {
            let h = 1e-6;
            let mut plus = c.clone();
            plus.positions_mut()[idx] += h;
            let mut minus = c.clone();
            minus.positions_mut()[idx] -= h;
            let fd = (discrete_energy(&plus, &p, SelfInteraction::Exclude)
                - discrete_energy(&minus, &p, SelfInteraction::Exclude))
                / (2.0 * h);
            assert!((fd - g[idx]).abs() <= 1e-6 * scale, "{idx}: {fd} vs {}", g[idx]);
        }
    }

    #[test]
    fn weighted_forces_cancel() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let p = profile(PotentialSpec::morse(1.0, 2.0, 0.5, 1.0, 2));
        let c = random_config(&mut rng, 64, 2, true);
        let g = discrete_gradient(&c, &p).unwrap();
        for k in 0..2 {
            let total: f64 = g.chunks_exact(2).map(|gi| gi[k]).sum();
            assert!(total.abs() < 1e-12, "{total}");
        }
    }

    #[test]
    fn excess_split_reproduces_energy() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let p = profile(PotentialSpec::morse(1.0, 2.0, 0.5, 1.0, 3));
        let c = random_config(&mut rng, 30, 3, true);
        let split = energy_offset(&c, &p) + excess_energy(&c, &p);
        assert_relative_eq!(split, discrete_energy(&c, &p, SelfInteraction::Exclude), max_relative = 1e-13);
    }

    #[test]
    fn radius_and_spacing() {
        let c = ParticleConfiguration::uniform(1, vec![0.0, 1.0, 3.0]).unwrap();
        assert!((c.support_radius() - 5.0 / 3.0).abs() < 1e-15);
        assert!((c.mean_nearest_neighbour_distance() - 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn diameter_of_two_points() {
        let c = ParticleConfiguration::uniform(2, vec![0.0, 0.0, 3.0, 0.0]).unwrap();
        assert_eq!(c.diameter(), 3.0);
        let one = ParticleConfiguration::uniform(2, vec![1.0, 1.0]).unwrap();
        assert_eq!(one.diameter(), 0.0);
    }

    #[test]
    fn recentre_zeroes_centre_of_mass() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut c = random_config(&mut rng, 10, 3, true);
        c.translate(&[5.0, -3.0, 1.0]);
        c.recentre();
        assert!(c.centre_of_mass().iter().all(|v| v.abs() < 1e-14));
    }
}
