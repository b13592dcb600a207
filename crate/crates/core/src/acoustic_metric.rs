//! Effective spacetime geometry seen by sound in a moving medium.
//!
//! Low-frequency perturbations of a barotropic fluid propagate along the
//! cones of an *effective* metric built from the laboratory metric, the flow
//! four-velocity and the speed of sound, rather than along light cones. This
//! module computes that metric, the rank-one flow term that deforms it away
//! from the laboratory geometry, and the time rescaling that maps the
//! stationary-medium case back onto ordinary flat spacetime with the sound
//! speed playing the role of the signal speed.
//!
//! Conventions: coordinates are ordered (t, x, y, z) with time in seconds, so
//! the flat laboratory metric is diag(-c^2, 1, 1, 1). The overall conformal
//! prefactor n0^2 / (c_s (rho0 + p0)) multiplying the effective metric is
//! kept out of the stored components and carried separately; none of the
//! 1+1-dimensional physics downstream depends on it.

use nalgebra::Matrix4;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Homogeneous background medium: densities, pressure and its equation of
/// state, plus the ambient light speed used to express the sound speed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BackgroundState {
    /// Number density of the medium.
    pub n0: f64,
    /// Total energy density of the background.
    pub rho0: f64,
    /// Background pressure.
    pub p0: f64,
    /// Ambient light speed (m/s). Configurable so natural-unit setups run
    /// with c = 1.
    pub c: f64,
    /// Pressure as a function of total energy density.
    pub eos: EquationOfState,
}

/// Equation of state: either an analytic power law or a tabulated curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum EquationOfState {
    /// p = K rho^gamma, differentiated analytically.
    Polytrope {
        #[serde(rename = "K")]
        k: f64,
        gamma: f64,
    },
    /// Strictly increasing (rho, p) rows, differentiated with a centered
    /// three-point stencil.
    Table { rows: Vec<[f64; 2]> },
}

impl BackgroundState {
    fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("n0", self.n0),
            ("rho0", self.rho0),
            ("c", self.c),
            ("rho0 + p0", self.rho0 + self.p0),
        ] {
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::NonPositive { name, value });
            }
        }
        Ok(())
    }
}

/// dp/drho at the background density, as a dimensionless number.
fn pressure_derivative(eos: &EquationOfState, rho: f64) -> Result<f64> {
    match eos {
        EquationOfState::Polytrope { k, gamma } => Ok(k * gamma * rho.powf(gamma - 1.0)),
        EquationOfState::Table { rows } => {
            if rows.len() < 3 {
                return Err(Error::TableDoesNotBracket { rho });
            }
            for (i, pair) in rows.windows(2).enumerate() {
                if pair[1][0] <= pair[0][0] {
                    return Err(Error::NonMonotoneTable {
                        row: i + 1,
                        column: "rho",
                    });
                }
                if pair[1][1] <= pair[0][1] {
                    return Err(Error::NonMonotoneTable {
                        row: i + 1,
                        column: "p",
                    });
                }
            }
            if rho < rows[0][0] || rho > rows[rows.len() - 1][0] {
                return Err(Error::TableDoesNotBracket { rho });
            }
            // Centered quadratic through the three rows nearest the target.
            let j = rows.partition_point(|r| r[0] < rho);
            let mid = j.clamp(1, rows.len() - 2);
            let [x0, y0] = rows[mid - 1];
            let [x1, y1] = rows[mid];
            let [x2, y2] = rows[mid + 1];
            Ok(y0 * (2.0 * rho - x1 - x2) / ((x0 - x1) * (x0 - x2))
                + y1 * (2.0 * rho - x0 - x2) / ((x1 - x0) * (x1 - x2))
                + y2 * (2.0 * rho - x0 - x1) / ((x2 - x0) * (x2 - x1)))
        }
    }
}

/// Speed of sound c_s = c * sqrt(dp/drho) evaluated at the background
/// density.
///
/// Rejects equations of state whose slope is non-positive (no restoring
/// force) or greater than one (the sound cone would open wider than the
/// light cone). The luminal edge dp/drho = 1 is allowed.
pub fn speed_of_sound(bg: &BackgroundState) -> Result<f64> {
    bg.validate()?;
    let slope = pressure_derivative(&bg.eos, bg.rho0)?;
    if !(slope > 0.0) {
        return Err(Error::NonPositiveCompressibility { derivative: slope });
    }
    if slope > 1.0 + 1e-12 {
        return Err(Error::SuperluminalSound { derivative: slope });
    }
    Ok(bg.c * slope.min(1.0).sqrt())
}

/// Conformal prefactor stored next to metric components, or a marker that it
/// has already been folded in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ConformalRepr", into = "ConformalRepr")]
pub enum ConformalFactor {
    Scalar(f64),
    Absorbed,
}

impl ConformalFactor {
    /// Numeric value of the prefactor; `Absorbed` reads as 1.
    pub fn value(&self) -> f64 {
        match self {
            ConformalFactor::Scalar(s) => *s,
            ConformalFactor::Absorbed => 1.0,
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ConformalRepr {
    Number(f64),
    Text(String),
}

impl TryFrom<ConformalRepr> for ConformalFactor {
    type Error = String;
    fn try_from(repr: ConformalRepr) -> std::result::Result<Self, String> {
        match repr {
            ConformalRepr::Number(s) => Ok(ConformalFactor::Scalar(s)),
            ConformalRepr::Text(t) if t == "absorbed" => Ok(ConformalFactor::Absorbed),
            ConformalRepr::Text(t) => Err(format!("unknown conformal factor tag {t:?}")),
        }
    }
}

impl From<ConformalFactor> for ConformalRepr {
    fn from(cf: ConformalFactor) -> Self {
        match cf {
            ConformalFactor::Scalar(s) => ConformalRepr::Number(s),
            ConformalFactor::Absorbed => ConformalRepr::Text("absorbed".into()),
        }
    }
}

/// A constant symmetric rank-2 tensor with named coordinates and an optional
/// conformal prefactor kept separate from the components.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricTensor {
    /// Row-major components, conformal prefactor *not* folded in.
    pub components: [[f64; 4]; 4],
    /// Coordinate labels with units, e.g. `"t [s]"`.
    pub coords: [String; 4],
    pub conformal_factor: ConformalFactor,
}

impl MetricTensor {
    /// Validated constructor: components must be exactly symmetric, have
    /// Lorentzian signature (-,+,+,+), and any scalar conformal factor must
    /// be positive and finite.
    #[allow(clippy::needless_range_loop)] // paired tensor indices
    pub fn new(
        components: [[f64; 4]; 4],
        coords: [String; 4],
        conformal_factor: ConformalFactor,
    ) -> Result<Self> {
        for a in 0..4 {
            for b in (a + 1)..4 {
                if components[a][b] != components[b][a] {
                    return Err(Error::AsymmetricMetric { row: a, col: b });
                }
            }
        }
        if let ConformalFactor::Scalar(s) = conformal_factor {
            if !(s > 0.0) || !s.is_finite() {
                return Err(Error::BadConformalFactor { value: s });
            }
        }
        let tensor = MetricTensor {
            components,
            coords,
            conformal_factor,
        };
        let (neg, pos) = tensor.signature();
        if neg != 1 || pos != 3 {
            return Err(Error::NonLorentzianSignature {
                negative: neg,
                positive: pos,
            });
        }
        Ok(tensor)
    }

    /// Flat laboratory metric diag(-c_eff^2, 1, 1, 1) in (t, x, y, z).
    pub fn flat(c_eff: f64) -> Result<Self> {
        if !(c_eff > 0.0) {
            return Err(Error::NonPositive {
                name: "c_eff",
                value: c_eff,
            });
        }
        let mut components = [[0.0; 4]; 4];
        components[0][0] = -c_eff * c_eff;
        components[1][1] = 1.0;
        components[2][2] = 1.0;
        components[3][3] = 1.0;
        MetricTensor::new(components, Self::txyz_labels(), ConformalFactor::Scalar(1.0))
    }

    fn txyz_labels() -> [String; 4] {
        ["t [s]", "x [m]", "y [m]", "z [m]"].map(str::to_owned)
    }

    fn matrix(&self) -> Matrix4<f64> {
        Matrix4::from_fn(|r, c| self.components[r][c])
    }

    /// Counts of (negative, positive) eigenvalues of the component matrix.
    pub fn signature(&self) -> (usize, usize) {
        let eig = self.matrix().symmetric_eigenvalues();
        let mut neg = 0;
        let mut pos = 0;
        for ev in eig.iter() {
            if *ev < 0.0 {
                neg += 1;
            } else if *ev > 0.0 {
                pos += 1;
            }
        }
        (neg, pos)
    }

    /// Determinant of the component matrix (prefactor excluded).
    pub fn determinant(&self) -> f64 {
        self.matrix().determinant()
    }

    /// Lower an index: V_a = g_ab V^b.
    #[allow(clippy::needless_range_loop)] // paired tensor indices
    pub fn lower(&self, v: &[f64; 4]) -> [f64; 4] {
        let mut out = [0.0; 4];
        for a in 0..4 {
            for b in 0..4 {
                out[a] += self.components[a][b] * v[b];
            }
        }
        out
    }
}

/// Contravariant flow four-velocity.
///
/// Only the timelike *direction* of the vector enters the metric
/// construction: components are lowered with the supplied metric and
/// normalized to a unit covector internally, so `(c, 0, 0, 0)` and
/// `(1, 0, 0, 0)` describe the same comoving flow. Against the
/// unit-signature flat form diag(-1, 1, 1, 1) the comoving vector satisfies
/// g_ab V^a V^b = -c^2 exactly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FourVelocity {
    pub components: [f64; 4],
}

impl FourVelocity {
    pub fn new(components: [f64; 4]) -> Self {
        FourVelocity { components }
    }

    /// Medium at rest in the laboratory: V = (c, 0, 0, 0).
    pub fn comoving(c: f64) -> Self {
        FourVelocity {
            components: [c, 0.0, 0.0, 0.0],
        }
    }

    /// g_ab V^a V^b under the given metric (components only).
    pub fn normalization(&self, g: &MetricTensor) -> f64 {
        let lowered = g.lower(&self.components);
        lowered
            .iter()
            .zip(self.components.iter())
            .map(|(lo, up)| lo * up)
            .sum()
    }

    /// Lowered and normalized to a unit timelike covector; rejects
    /// spacelike, null or zero vectors.
    fn unit_covector(&self, g: &MetricTensor) -> Result<[f64; 4]> {
        let norm = self.normalization(g);
        if !(norm < 0.0) || !norm.is_finite() {
            return Err(Error::NonTimelikeVelocity { norm });
        }
        let scale = (-norm).sqrt();
        let mut lowered = g.lower(&self.components);
        for c in lowered.iter_mut() {
            *c /= scale;
        }
        Ok(lowered)
    }
}

/// Full effective metric for sound: g_ab plus the flow deformation, with the
/// conformal prefactor n0^2 / (c_s (rho0 + p0)) reported separately.
///
/// For the flat laboratory metric and a comoving medium the components come
/// out as diag(-c_s^2, 1, 1, 1): sound sees ordinary flat spacetime with the
/// sound speed as its signal speed.
pub fn effective_metric(
    bg: &BackgroundState,
    g: &MetricTensor,
    v: &FourVelocity,
) -> Result<MetricTensor> {
    let c_s = speed_of_sound(bg)?;
    let u = v.unit_covector(g)?;
    let weight = 1.0 - (c_s * c_s) / (bg.c * bg.c);
    let mut components = g.components;
    for a in 0..4 {
        for b in 0..4 {
            // Grouped so the (a,b) and (b,a) entries round identically.
            components[a][b] += weight * (u[a] * u[b]);
        }
    }
    MetricTensor::new(
        components,
        g.coords.clone(),
        ConformalFactor::Scalar(conformal_prefactor(bg, c_s)),
    )
}

/// Just the flow term of the effective metric: the rank-one piece
/// experimentalists actually steer by changing the medium.
///
/// The four-velocity is lowered against the flat laboratory metric built
/// from the background's light speed. Comoving flow gives a single
/// time-time entry c^2 - c_s^2. The result is a deliberately degenerate
/// tensor, so it is not passed through the Lorentzian-signature check.
pub fn analogue_metric(bg: &BackgroundState, v: &FourVelocity) -> Result<MetricTensor> {
    let c_s = speed_of_sound(bg)?;
    let flat = MetricTensor::flat(bg.c)?;
    let u = v.unit_covector(&flat)?;
    let weight = 1.0 - (c_s * c_s) / (bg.c * bg.c);
    let mut components = [[0.0; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            components[a][b] = weight * (u[a] * u[b]);
        }
    }
    Ok(MetricTensor {
        components,
        coords: flat.coords,
        conformal_factor: ConformalFactor::Scalar(conformal_prefactor(bg, c_s)),
    })
}

fn conformal_prefactor(bg: &BackgroundState, c_s: f64) -> f64 {
    bg.n0 * bg.n0 / (c_s * (bg.rho0 + bg.p0))
}

/// Map a (t, x, y, z) event to the rescaled chart t' = (c / c_s) t in which
/// a comoving medium's sound dynamics matches light dynamics run at speed
/// c_s. Spatial coordinates are untouched.
pub fn rescale_time(bg: &BackgroundState, event: [f64; 4]) -> Result<[f64; 4]> {
    let c_s = speed_of_sound(bg)?;
    Ok([event[0] * (bg.c / c_s), event[1], event[2], event[3]])
}

/// Inverse of [`rescale_time`]: t = (c_s / c) t'.
pub fn rescale_time_inverse(bg: &BackgroundState, event: [f64; 4]) -> Result<[f64; 4]> {
    let c_s = speed_of_sound(bg)?;
    Ok([event[0] * (c_s / bg.c), event[1], event[2], event[3]])
}
