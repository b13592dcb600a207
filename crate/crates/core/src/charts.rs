//! Uniformly accelerated coordinates on flat 1+1 spacetime.
//!
//! The chart covers the right wedge x > c|t| with coordinates (eta, chi):
//!
//! ```text
//!     t = (chi / c) sinh(eta),      x = chi cosh(eta)
//! ```
//!
//! Curves of constant chi are hyperbolas x^2 - c^2 t^2 = chi^2, the
//! worldlines of observers with constant proper acceleration c^2/chi; eta is
//! their shared "boost time". The same formulas apply verbatim to a sound
//! cavity dragged through a stationary medium, with c replaced by the sound
//! speed, which is why everything here takes an explicit effective signal
//! speed instead of hard-coding the vacuum value.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Right-wedge hyperbolic chart at a fixed effective signal speed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RindlerChart {
    pub c_eff: f64,
}

/// An event expressed in one of the two charts this module converts between.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum WorldlinePoint {
    Minkowski { t: f64, x: f64 },
    Rindler { eta: f64, chi: f64 },
}

impl RindlerChart {
    pub fn new(c_eff: f64) -> Result<Self> {
        if !(c_eff > 0.0) || !c_eff.is_finite() {
            return Err(Error::NonPositive {
                name: "c_eff",
                value: c_eff,
            });
        }
        Ok(RindlerChart { c_eff })
    }

    /// (eta, chi) -> (t, x). Requires chi > 0 (the chart only covers the
    /// right wedge).
    pub fn to_minkowski(&self, eta: f64, chi: f64) -> Result<(f64, f64)> {
        if !(chi > 0.0) {
            return Err(Error::NonPositive {
                name: "chi",
                value: chi,
            });
        }
        Ok((chi / self.c_eff * eta.sinh(), chi * eta.cosh()))
    }

    /// (t, x) -> (eta, chi). Events on or beyond the horizon x = c_eff |t|
    /// are rejected: no accelerated worldline of this family passes through
    /// them.
    pub fn from_minkowski(&self, t: f64, x: f64) -> Result<(f64, f64)> {
        let ct = self.c_eff * t;
        if x <= ct.abs() {
            return Err(Error::OutsideWedge {
                t,
                x,
                horizon: ct.abs(),
            });
        }
        // Factored product keeps precision close to the horizon where
        // x^2 - (ct)^2 would cancel.
        let chi = ((x - ct) * (x + ct)).sqrt();
        let eta = (ct / x).atanh();
        Ok((eta, chi))
    }

    /// Convert an event to the other chart.
    pub fn map(&self, point: WorldlinePoint) -> Result<WorldlinePoint> {
        match point {
            WorldlinePoint::Minkowski { t, x } => {
                let (eta, chi) = self.from_minkowski(t, x)?;
                Ok(WorldlinePoint::Rindler { eta, chi })
            }
            WorldlinePoint::Rindler { eta, chi } => {
                let (t, x) = self.to_minkowski(eta, chi)?;
                Ok(WorldlinePoint::Minkowski { t, x })
            }
        }
    }

    /// Proper time elapsed at fixed chi0 between eta = 0 and the given eta:
    /// tau = chi0 eta / c_eff.
    pub fn proper_time(&self, chi0: f64, eta: f64) -> Result<f64> {
        if !(chi0 > 0.0) {
            return Err(Error::NonPositive {
                name: "chi0",
                value: chi0,
            });
        }
        Ok(chi0 * eta / self.c_eff)
    }

    /// Constant proper acceleration of the chi = chi0 worldline:
    /// a = c_eff^2 / chi0.
    pub fn proper_acceleration(&self, chi0: f64) -> Result<f64> {
        if !(chi0 > 0.0) {
            return Err(Error::NonPositive {
                name: "chi0",
                value: chi0,
            });
        }
        Ok(self.c_eff * self.c_eff / chi0)
    }

    /// Low-velocity limit of the accelerated worldline, truncated at the
    /// stated order in tau. Only the quadratic (Newtonian) truncation
    /// t = tau, x = chi0 + a tau^2 / 2 is supported.
    pub fn galilean_limit(&self, tau: f64, accel: f64, order: usize) -> Result<(f64, f64)> {
        if order != 2 {
            return Err(Error::UnsupportedOrder { order });
        }
        if !(accel > 0.0) {
            return Err(Error::NonPositive {
                name: "accel",
                value: accel,
            });
        }
        let chi0 = self.c_eff * self.c_eff / accel;
        Ok((tau, chi0 + 0.5 * accel * tau * tau))
    }

    /// Signed gap (exact minus Newtonian) of the accelerated worldline at
    /// proper time tau, as (dt, dx).
    ///
    /// With eps = a tau / c_eff, the exact worldline gives
    /// dt = (chi0/c_eff)(sinh eps - eps) and
    /// dx = chi0 (cosh eps - 1 - eps^2/2), i.e. leading orders eps^3/6 and
    /// eps^4/24. The dx branch evaluates cosh - 1 as 2 sinh^2(eps/2) so the
    /// quartic remainder survives in double precision down to eps ~ 1e-6.
    pub fn expansion_residual(&self, tau: f64, accel: f64) -> Result<(f64, f64)> {
        if !(accel > 0.0) {
            return Err(Error::NonPositive {
                name: "accel",
                value: accel,
            });
        }
        let chi0 = self.c_eff * self.c_eff / accel;
        let eps = accel * tau / self.c_eff;
        let dt = chi0 / self.c_eff * (eps.sinh() - eps);
        let cosh_minus_one = 2.0 * (0.5 * eps).sinh().powi(2);
        let dx = chi0 * (cosh_minus_one - 0.5 * eps * eps);
        Ok((dt, dx))
    }
}
