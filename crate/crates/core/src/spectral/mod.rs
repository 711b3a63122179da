//! Energy distributions, survival amplitudes, signals and the transforms
//! that connect them.

pub mod amplitude;
pub mod checks;
pub mod distribution;
pub mod grid;
pub mod io;
pub mod signal;

pub use amplitude::{survival_amplitude, SurvivalAmplitude};
pub use checks::{luo_check, short_time_check};
pub use distribution::{DistributionForm, EnergyDistribution, Moments};
pub use grid::Grid;
pub use signal::{
    analytic_signal, equivalent_width, equivalent_width_fn, AnalyticSignal, SignalMoments, SignalPair,
};
