use num_complex::Complex64;

/// Everything that can go wrong when building metrics, charts, modes or
/// Bogoliubov coefficients. Variants carry enough context to be actionable
/// without re-running the computation.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// A quantity that must be strictly positive was not.
    #[error("{name} must be positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },

    /// Mode indices are 1-based; `n = 0` labels no mode.
    #[error("mode index must be at least 1")]
    ZeroModeIndex,

    /// Tabulated equation of state is not strictly monotone.
    #[error("equation-of-state table is not strictly increasing at row {row} (column {column})")]
    NonMonotoneTable { row: usize, column: &'static str },

    /// Tabulated equation of state does not bracket the background density
    /// with enough points for a centered derivative.
    #[error("equation-of-state table needs at least 3 rows bracketing rho = {rho}")]
    TableDoesNotBracket { rho: f64 },

    /// dp/drho > 1 would make the sound cone wider than the light cone.
    #[error("dp/drho = {derivative} exceeds 1: sound would be superluminal")]
    SuperluminalSound { derivative: f64 },

    /// dp/drho <= 0 gives no propagating sound at all.
    #[error("dp/drho = {derivative} is not positive: medium has no restoring force")]
    NonPositiveCompressibility { derivative: f64 },

    /// Metric components are not symmetric.
    #[error("metric components are not symmetric at ({row}, {col})")]
    AsymmetricMetric { row: usize, col: usize },

    /// Metric does not have Lorentzian signature (-, +, +, +).
    #[error("metric signature is not (-,+,+,+): eigenvalue signs {negative} negative, {positive} positive")]
    NonLorentzianSignature { negative: usize, positive: usize },

    /// Conformal factor must be a positive finite scalar when present.
    #[error("conformal factor must be positive and finite, got {value}")]
    BadConformalFactor { value: f64 },

    /// Four-velocity is not timelike under the supplied metric, so it cannot
    /// be normalized into a flow direction.
    #[error("four-velocity is not timelike: g_ab V^a V^b = {norm} (must be negative)")]
    NonTimelikeVelocity { norm: f64 },

    /// Event outside the right Rindler wedge. The wedge boundary is the
    /// acceleration horizon x = c_eff * |t|.
    #[error("event (t = {t}, x = {x}) lies outside the right wedge: the horizon sits at x = c_eff*|t| = {horizon}")]
    OutsideWedge { t: f64, x: f64, horizon: f64 },

    /// The weak-acceleration expansion is only implemented through second
    /// order in position.
    #[error("expansion order {order} not supported (only order 2)")]
    UnsupportedOrder { order: usize },

    /// Choosing h >= 2 puts the horizon chi = 0 at or inside the cavity.
    #[error("h = {h} >= 2: the acceleration horizon would touch or enter the cavity (left wall at chi = {chi_left})")]
    HorizonInsideCavity { h: f64, chi_left: f64 },

    /// Coordinate outside the cavity walls where the mode is defined.
    #[error("coordinate {x} is outside the cavity [{lo}, {hi}]")]
    OutsideCavity { x: f64, lo: f64, hi: f64 },

    /// Finite-difference stencil would poke through a cavity wall.
    #[error("stencil at x = {x} with step {step} reaches outside the walls [{lo}, {hi}]")]
    StencilNearWall { x: f64, step: f64, lo: f64, hi: f64 },

    /// The finite-difference wave operator only handles diagonal constant
    /// metrics; anything else needs a different discretisation.
    #[error("wave-operator residual requires a diagonal metric, found nonzero ({row}, {col}) component")]
    NonDiagonalMetric { row: usize, col: usize },

    /// Adaptive quadrature ran out of panels before reaching the requested
    /// absolute tolerance. The best estimate and its error bound are kept so
    /// callers can decide whether the value is still usable.
    #[error("quadrature tolerance not reached: requested {requested:.3e}, achieved {achieved:.3e} after {panels} panels")]
    ToleranceNotReached {
        value: Complex64,
        achieved: f64,
        requested: f64,
        panels: usize,
    },

    /// Inner products mix modes that propagate at different speeds.
    #[error("modes carry different signal speeds ({a} vs {b}); products are only defined within one chart family")]
    MismatchedSignalSpeed { a: f64, b: f64 },

    /// The chart-specific product form was asked for with modes from the
    /// wrong chart.
    #[error("the accelerated-chart product form needs two accelerated-chart modes")]
    WrongChartForForm,

    /// Refusing to invert a transformation whose canonical identities are
    /// already violated beyond repair.
    #[error("identity residual {residual:.3e} exceeds {limit:.3e}; inverse would not be trustworthy")]
    IdentityResidualTooLarge { residual: f64, limit: f64 },

    /// Composition needs equally sized matrices.
    #[error("cutoff mismatch: {first} vs {second}")]
    CutoffMismatch { first: usize, second: usize },

    /// Serialized coefficient matrices must hold cutoff^2 entries.
    #[error("serialized {matrix} has {got} entries, expected {expected}")]
    BadMatrixLength {
        matrix: &'static str,
        got: usize,
        expected: usize,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
