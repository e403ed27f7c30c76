//! Interaction-energy minimisation for radial pair potentials in `R^d`.
//!
//! Potentials are described by [`PotentialSpec`] and compiled into a
//! [`PotentialProfile`] carrying the metadata the rest of the crate needs
//! (value at the origin and at infinity, lower bound, eventual-monotonicity
//! radius, tail behaviour). On top of that sit the stability classifier,
//! the discrete energy of weighted particle configurations, a seeded
//! multi-start minimiser, and a post-hoc certificate for computed
//! minimisers.

pub mod certify;
pub mod energy;
pub mod extended;
pub mod minimise;
pub mod potential;
pub mod quadrature;
pub mod stability;

pub use energy::{discrete_energy, ConfigurationError, ParticleConfiguration, SelfInteraction};
pub use minimise::{flow_simulate, minimise_discrete, FlowOptions, MinimisationResult, MinimiseOptions, StepRule};
pub use potential::{Family, Hypothesis, PotentialError, PotentialProfile, PotentialSpec};
pub use stability::{classify, instability_witness, StabilityReport, Verdict};
