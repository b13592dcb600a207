//! Particle creation in a uniformly accelerated cavity, for light and for
//! sound.
//!
//! A rigid 1+1-dimensional cavity that suddenly starts accelerating mixes
//! its field modes: the overlap between the inertial and the accelerated
//! Dirichlet bases is a Bogoliubov transformation whose beta block measures
//! created excitations. The same machinery covers an optical cavity and a
//! phonon cavity in a stationary medium, because sound propagates on an
//! effective flat metric with the sound speed in place of c — every result
//! depends only on the dimensionless acceleration h = aL/c_eff².
//!
//! Module map:
//! - [`acoustic_metric`]: effective geometry of sound in a moving medium,
//!   sound speed from an equation of state, time rescaling between charts.
//! - [`charts`]: the right-wedge hyperbolic chart, proper time and
//!   acceleration, the Galilean limit and its residuals.
//! - [`cavity_modes`]: Dirichlet mode bases in both charts, the
//!   Klein-Gordon inner product, wedge placement from h, wave-operator
//!   residuals.
//! - [`bogoliubov`]: coefficient matrices, canonical identities with
//!   measured trusted blocks, particle numbers, composition and inversion.
//! - [`quadrature`]: the adaptive Gauss-Kronrod integrator everything above
//!   leans on.

// Validation code writes `!(x > 0.0)` rather than `x <= 0.0` on purpose: the
// negated form also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod acoustic_metric;
pub mod bogoliubov;
pub mod cavity_modes;
pub mod charts;
pub mod error;
pub mod quadrature;

pub use acoustic_metric::{
    analogue_metric, effective_metric, rescale_time, rescale_time_inverse, speed_of_sound,
    BackgroundState, ConformalFactor, EquationOfState, FourVelocity, MetricTensor,
};
pub use bogoliubov::{
    coefficient_difference, compose, compute_coefficients, galilean_coefficients, h_parameter,
    inverse, BogoliubovPair,
};
pub use cavity_modes::{
    inertial_mode, kg_inner_product, kg_inner_product_in_form, rindler_mode,
    wave_equation_residual, wedge_from_h, Cavity, InnerProduct, ModeChart, ModeFunction,
    ProductForm, Surface, WedgeCavity,
};
pub use charts::{RindlerChart, WorldlinePoint};
pub use error::{Error, Result};
pub use quadrature::{QuadratureConfig, QuadratureOutcome};
