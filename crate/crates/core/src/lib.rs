//! Energy–time and frequency–time uncertainty relations.
//!
//! Decay-time functionals of energy distributions, the extremal
//! minimal-uncertainty signal, stationarity times of Gaussian Wigner states
//! and quantum speed limits, each evaluated as a named [`BoundReport`].

pub mod catalog;
pub mod decay;
pub mod error;
pub mod extended;
pub mod extremal;
pub mod numerics;
pub mod report;
pub mod spectral;
pub mod speed;
pub mod wigner;

pub use catalog::{run_suite, BoundFilter, CatalogEntry, SuiteResult};
pub use decay::DecayTimes;
pub use error::{Error, Result};
pub use extended::Extended;
pub use extremal::{solve_mu, ExtremalSolution};
pub use report::{BoundReport, PointwiseReport, Relation};
pub use spectral::{DistributionForm, EnergyDistribution, Grid, SignalPair, SurvivalAmplitude};
pub use wigner::GaussianWignerState;
