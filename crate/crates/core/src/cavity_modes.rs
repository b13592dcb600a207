//! Mode bases for a massless field in a rigid 1+1-dimensional cavity, in both
//! the inertial and the uniformly accelerated chart, plus the Klein-Gordon
//! inner product that compares them.
//!
//! Both bases are Dirichlet sine modes with positive frequency, normalized to
//! unit Klein-Gordon norm:
//!
//! ```text
//!   u_n(t, x)    = (n pi)^(-1/2) sin(n pi (x - x_L)/L)       exp(-i omega_n t),
//!                  omega_n = n pi c_eff / L
//!   v_n(eta,chi) = (n pi)^(-1/2) sin(n pi ln(chi/chi_L)/D)   exp(-i Omega_n eta),
//!                  Omega_n = n pi / D,  D = ln(chi_R/chi_L)
//! ```
//!
//! The two families are compared on the t = 0 slice, where eta = 0 and the
//! charts agree pointwise (x = chi). Everything downstream — Bogoliubov
//! matrices, particle creation — is a set of Klein-Gordon inner products
//! between these functions.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{integrate, QuadratureConfig};

/// Inertial cavity with rigid walls at fixed laboratory positions.
///
/// Walls must sit at positive x so the same box can also be read as the
/// t = 0 snapshot of an accelerated cavity in the right wedge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cavity {
    pub x_l: f64,
    pub x_r: f64,
    pub c_eff: f64,
}

impl Cavity {
    pub fn new(x_l: f64, x_r: f64, c_eff: f64) -> Result<Self> {
        if !(x_l > 0.0) {
            return Err(Error::NonPositive {
                name: "x_l",
                value: x_l,
            });
        }
        if !(x_r > x_l) {
            return Err(Error::NonPositive {
                name: "x_r - x_l",
                value: x_r - x_l,
            });
        }
        if !(c_eff > 0.0) {
            return Err(Error::NonPositive {
                name: "c_eff",
                value: c_eff,
            });
        }
        Ok(Cavity { x_l, x_r, c_eff })
    }

    pub fn length(&self) -> f64 {
        self.x_r - self.x_l
    }
}

/// The same rigid cavity seen in the accelerated chart: walls at fixed chi.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WedgeCavity {
    pub chi_l: f64,
    pub chi_r: f64,
}

impl WedgeCavity {
    pub fn new(chi_l: f64, chi_r: f64) -> Result<Self> {
        if !(chi_l > 0.0) {
            return Err(Error::NonPositive {
                name: "chi_l",
                value: chi_l,
            });
        }
        if !(chi_r > chi_l) {
            return Err(Error::NonPositive {
                name: "chi_r - chi_l",
                value: chi_r - chi_l,
            });
        }
        Ok(WedgeCavity { chi_l, chi_r })
    }

    /// Midpoint wall distance, the chi of the cavity-center worldline.
    pub fn chi0(&self) -> f64 {
        0.5 * (self.chi_l + self.chi_r)
    }

    /// Logarithmic width D = ln(chi_R / chi_L), the natural length in this
    /// chart.
    pub fn log_width(&self) -> f64 {
        (self.chi_r / self.chi_l).ln()
    }
}

/// Place a cavity of length L in the wedge so that the center worldline has
/// dimensionless acceleration h = aL/c_eff^2 = L/chi0.
///
/// h must stay below 2: at h = 2 the near wall touches the horizon and the
/// accelerated description of the whole cavity breaks down.
pub fn wedge_from_h(h: f64, length: f64) -> Result<WedgeCavity> {
    if !(length > 0.0) {
        return Err(Error::NonPositive {
            name: "length",
            value: length,
        });
    }
    if !(h > 0.0) {
        return Err(Error::NonPositive { name: "h", value: h });
    }
    let chi0 = length / h;
    let chi_l = chi0 - 0.5 * length;
    if h >= 2.0 || !(chi_l > 0.0) {
        return Err(Error::HorizonInsideCavity { h, chi_left: chi_l });
    }
    WedgeCavity::new(chi_l, chi0 + 0.5 * length)
}

/// Which chart a mode is expressed in, with its domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ModeChart {
    Inertial(Cavity),
    Rindler(WedgeCavity),
}

/// One member of a Dirichlet mode basis: positive integer index, chart tag,
/// and an optional complex conjugation (negative-frequency partner).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeFunction {
    pub chart: ModeChart,
    pub n: usize,
    pub conjugated: bool,
}

impl ModeFunction {
    pub fn inertial(cavity: Cavity, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroModeIndex);
        }
        Ok(ModeFunction {
            chart: ModeChart::Inertial(cavity),
            n,
            conjugated: false,
        })
    }

    pub fn rindler(wedge: WedgeCavity, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroModeIndex);
        }
        Ok(ModeFunction {
            chart: ModeChart::Rindler(wedge),
            n,
            conjugated: false,
        })
    }

    /// The complex-conjugate partner mode.
    pub fn conjugate(&self) -> Self {
        ModeFunction {
            conjugated: !self.conjugated,
            ..*self
        }
    }

    /// Angular frequency conjugate to this chart's time: omega_n (rad/s) for
    /// inertial modes, the dimensionless Omega_n for accelerated modes.
    pub fn frequency(&self) -> f64 {
        let n = self.n as f64;
        match &self.chart {
            ModeChart::Inertial(cav) => n * std::f64::consts::PI * cav.c_eff / cav.length(),
            ModeChart::Rindler(wedge) => n * std::f64::consts::PI / wedge.log_width(),
        }
    }

    /// Spatial support at t = 0, as an interval in laboratory x (= chi).
    pub fn support(&self) -> (f64, f64) {
        match &self.chart {
            ModeChart::Inertial(cav) => (cav.x_l, cav.x_r),
            ModeChart::Rindler(wedge) => (wedge.chi_l, wedge.chi_r),
        }
    }

    fn check_position(&self, pos: f64) -> Result<()> {
        let (lo, hi) = self.support();
        if pos < lo || pos > hi {
            return Err(Error::OutsideCavity { x: pos, lo, hi });
        }
        Ok(())
    }

    fn maybe_conj(&self, z: Complex64) -> Complex64 {
        if self.conjugated {
            z.conj()
        } else {
            z
        }
    }

    /// Real spatial profile (n pi)^(-1/2) sin(...) and its phase argument
    /// gradient factor, without domain checks.
    fn profile(&self, pos: f64) -> (f64, f64) {
        let n = self.n as f64;
        let norm = 1.0 / (n * std::f64::consts::PI).sqrt();
        match &self.chart {
            ModeChart::Inertial(cav) => {
                let arg = n * std::f64::consts::PI * (pos - cav.x_l) / cav.length();
                (norm * arg.sin(), norm * arg.cos() * n * std::f64::consts::PI / cav.length())
            }
            ModeChart::Rindler(wedge) => {
                let d = wedge.log_width();
                let arg = n * std::f64::consts::PI * (pos / wedge.chi_l).ln() / d;
                (
                    norm * arg.sin(),
                    norm * arg.cos() * n * std::f64::consts::PI / (d * pos),
                )
            }
        }
    }

    /// Complex value at (time, pos); time means t for inertial modes and eta
    /// for accelerated ones, pos means x or chi likewise.
    pub fn value(&self, time: f64, pos: f64) -> Result<Complex64> {
        self.check_position(pos)?;
        let (amp, _) = self.profile(pos);
        let phase = Complex64::from_polar(1.0, -self.frequency() * time);
        Ok(self.maybe_conj(amp * phase))
    }

    /// Derivative along this chart's time direction (d/dt or d/deta).
    pub fn time_derivative(&self, time: f64, pos: f64) -> Result<Complex64> {
        let v = self.value(time, pos)?;
        let base = if self.conjugated { v.conj() } else { v };
        Ok(self.maybe_conj(Complex64::new(0.0, -self.frequency()) * base))
    }

    /// Derivative along this chart's space direction (d/dx or d/dchi).
    pub fn space_derivative(&self, time: f64, pos: f64) -> Result<Complex64> {
        self.check_position(pos)?;
        let (_, damp) = self.profile(pos);
        let phase = Complex64::from_polar(1.0, -self.frequency() * time);
        Ok(self.maybe_conj(damp * phase))
    }

    /// Value on the matching slice (t = 0, eta = 0), where the spatial
    /// profile is the whole story.
    fn value_t0(&self, x: f64) -> Complex64 {
        let (amp, _) = self.profile(x);
        Complex64::new(amp, 0.0)
    }

    /// (d/dt phi) / c_eff on the matching slice. For accelerated modes the
    /// chain rule d/dt = (c_eff/x) d/deta applies there, and the signal
    /// speed cancels *algebraically*: inertial modes contribute
    /// -i (n pi / L) phi and accelerated ones -i (Omega_n / x) phi, so no
    /// c_eff ever enters the returned number. This exact cancellation is
    /// what makes mixed inner products depend only on dimensionless shape
    /// ratios, not on the medium.
    fn reduced_time_rate_t0(&self, x: f64) -> Complex64 {
        let n = self.n as f64;
        let rate = match &self.chart {
            ModeChart::Inertial(cav) => n * std::f64::consts::PI / cav.length(),
            ModeChart::Rindler(_) => self.frequency() / x,
        };
        self.maybe_conj(Complex64::new(0.0, -rate) * self.value_t0(x))
    }

    /// d/deta on the matching slice; only accelerated modes live in that
    /// chart.
    fn eta_rate_t0(&self, chi: f64) -> Result<Complex64> {
        match &self.chart {
            ModeChart::Rindler(_) => {
                Ok(self.maybe_conj(Complex64::new(0.0, -self.frequency()) * self.value_t0(chi)))
            }
            ModeChart::Inertial(_) => Err(Error::WrongChartForForm),
        }
    }
}

/// Evaluate an inertial Dirichlet mode: (value, d/dt, d/dx).
pub fn inertial_mode(
    cavity: &Cavity,
    n: usize,
    t: f64,
    x: f64,
) -> Result<(Complex64, Complex64, Complex64)> {
    let mode = ModeFunction::inertial(*cavity, n)?;
    Ok((
        mode.value(t, x)?,
        mode.time_derivative(t, x)?,
        mode.space_derivative(t, x)?,
    ))
}

/// Evaluate an accelerated-chart Dirichlet mode: (value, d/deta, d/dchi).
pub fn rindler_mode(
    wedge: &WedgeCavity,
    n: usize,
    eta: f64,
    chi: f64,
) -> Result<(Complex64, Complex64, Complex64)> {
    let mode = ModeFunction::rindler(*wedge, n)?;
    Ok((
        mode.value(eta, chi)?,
        mode.time_derivative(eta, chi)?,
        mode.space_derivative(eta, chi)?,
    ))
}

/// The hypersurface on which inner products are evaluated. Only the sudden
/// matching slice t = 0 (equivalently eta = 0, where x = chi pointwise) is
/// meaningful for this problem, so the type admits nothing else.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Surface {
    InitialTime,
}

/// Which analytical form of the inner product to integrate. Picked
/// automatically by [`kg_inner_product`]; exposed so the chain-rule
/// equivalence between the forms can be tested directly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProductForm {
    /// -(i/c_eff) Int [phi d_t psi* - psi* d_t phi] dx over the overlap.
    InertialChart,
    /// -i Int [phi d_eta psi* - psi* d_eta phi] dchi/chi; both modes must be
    /// accelerated-chart modes.
    RindlerChart,
}

/// Result of a Klein-Gordon inner product evaluation.
#[derive(Debug, Clone, Copy)]
pub struct InnerProduct {
    pub value: Complex64,
    /// Absolute error estimate reported by the quadrature.
    pub error_estimate: f64,
    /// Set when the two modes' spatial supports do not overlap; the value is
    /// then exactly zero without any integration.
    pub disjoint_support: bool,
}

/// Klein-Gordon inner product of two modes on the matching slice.
///
/// The form is chosen by chart: two accelerated modes are integrated in
/// their own chart, every other combination in the inertial chart with the
/// chain rule d_t = (c_eff/x) d_eta applied to accelerated participants.
/// Whenever an accelerated mode participates, the integration variable is
/// w = ln x, which turns its log-periodic profile into a plain sine and
/// removes the 1/chi measure; panels then cost the same everywhere.
///
/// Two inertial modes with different signal speeds have no common
/// single-speed form and are rejected.
pub fn kg_inner_product(
    a: &ModeFunction,
    b: &ModeFunction,
    surface: Surface,
    cfg: &QuadratureConfig,
) -> Result<InnerProduct> {
    let Surface::InitialTime = surface;
    let form = match (&a.chart, &b.chart) {
        (ModeChart::Rindler(_), ModeChart::Rindler(_)) => ProductForm::RindlerChart,
        (ModeChart::Inertial(ca), ModeChart::Inertial(cb)) => {
            if ca.c_eff != cb.c_eff {
                return Err(Error::MismatchedSignalSpeed {
                    a: ca.c_eff,
                    b: cb.c_eff,
                });
            }
            ProductForm::InertialChart
        }
        _ => ProductForm::InertialChart,
    };
    kg_inner_product_in_form(a, b, form, surface, cfg)
}

/// Same product with the analytical form forced. The accelerated-chart form
/// requires both modes to be accelerated; the inertial-chart form accepts
/// any combination.
pub fn kg_inner_product_in_form(
    a: &ModeFunction,
    b: &ModeFunction,
    form: ProductForm,
    surface: Surface,
    cfg: &QuadratureConfig,
) -> Result<InnerProduct> {
    let Surface::InitialTime = surface;
    let (alo, ahi) = a.support();
    let (blo, bhi) = b.support();
    let lo = alo.max(blo);
    let hi = ahi.min(bhi);
    if !(hi > lo) {
        return Ok(InnerProduct {
            value: Complex64::new(0.0, 0.0),
            error_estimate: 0.0,
            disjoint_support: true,
        });
    }

    let any_rindler = matches!(a.chart, ModeChart::Rindler(_))
        || matches!(b.chart, ModeChart::Rindler(_));

    let outcome = match form {
        ProductForm::RindlerChart => {
            // Both factors checked up front so the closure below can assume
            // eta_rate never fails.
            a.eta_rate_t0(lo)?;
            b.eta_rate_t0(lo)?;
            let f = |w: f64| {
                let chi = w.exp();
                let term = a.value_t0(chi) * b.eta_rate_t0(chi).unwrap().conj()
                    - b.value_t0(chi).conj() * a.eta_rate_t0(chi).unwrap();
                Complex64::new(0.0, -1.0) * term
            };
            integrate(f, lo.ln(), hi.ln(), cfg)?
        }
        ProductForm::InertialChart if any_rindler => {
            let f = |w: f64| {
                let x = w.exp();
                let term = a.value_t0(x) * b.reduced_time_rate_t0(x).conj()
                    - b.value_t0(x).conj() * a.reduced_time_rate_t0(x);
                Complex64::new(0.0, -1.0) * term * x
            };
            integrate(f, lo.ln(), hi.ln(), cfg)?
        }
        ProductForm::InertialChart => {
            let f = |x: f64| {
                let term = a.value_t0(x) * b.reduced_time_rate_t0(x).conj()
                    - b.value_t0(x).conj() * a.reduced_time_rate_t0(x);
                Complex64::new(0.0, -1.0) * term
            };
            integrate(f, lo, hi, cfg)?
        }
    };

    Ok(InnerProduct {
        value: outcome.value,
        error_estimate: outcome.error_estimate,
        disjoint_support: false,
    })
}

/// Absolute wave-operator residual |Box phi| of a sampled field at one
/// event, by central second differences under a constant diagonal metric.
///
/// For the diagonal form Box phi = g^tt d2_t phi + g^xx d2_x phi; only the
/// (t, x) block enters since cavity fields carry no transverse dependence.
/// The time step is step/(2 c) with c the metric's signal speed: the 1/c
/// factor keeps the oscillation of a mode resolved at any c, and the extra
/// 1/2 avoids the symmetric choice dt = dx/c, whose fourth-derivative
/// truncation terms cancel exactly on true eigenmodes and would fake
/// higher-order convergence.
pub fn wave_equation_residual<F>(
    field: F,
    metric: &crate::acoustic_metric::MetricTensor,
    domain: &Cavity,
    t: f64,
    x: f64,
    step: f64,
) -> Result<f64>
where
    F: Fn(f64, f64) -> Complex64,
{
    for r in 0..4 {
        for c in 0..4 {
            if r != c && metric.components[r][c] != 0.0 {
                return Err(Error::NonDiagonalMetric { row: r, col: c });
            }
        }
    }
    let g_tt = metric.components[0][0];
    let g_xx = metric.components[1][1];
    if !(g_tt < 0.0) || !(g_xx > 0.0) {
        let (neg, pos) = metric.signature();
        return Err(Error::NonLorentzianSignature {
            negative: neg,
            positive: pos,
        });
    }
    if !(step > 0.0) {
        return Err(Error::NonPositive {
            name: "step",
            value: step,
        });
    }
    if x - step < domain.x_l || x + step > domain.x_r {
        return Err(Error::StencilNearWall {
            x,
            step,
            lo: domain.x_l,
            hi: domain.x_r,
        });
    }
    let signal_speed = (-g_tt / g_xx).sqrt();
    let dt = step / (2.0 * signal_speed);
    let dx = step;

    let second = |fm: Complex64, f0: Complex64, fp: Complex64, h: f64| (fp - 2.0 * f0 + fm) / (h * h);
    let f0 = field(t, x);
    let dtt = second(field(t - dt, x), f0, field(t + dt, x), dt);
    let dxx = second(field(t, x - dx), f0, field(t, x + dx), dx);
    Ok((dtt / g_tt + dxx / g_xx).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::acoustic_metric::MetricTensor;

    fn unit_cavity() -> Cavity {
        Cavity::new(9.5, 10.5, 1.0).unwrap()
    }

    fn tight_tol() -> QuadratureConfig {
        QuadratureConfig::with_tol(1e-12)
    }

    #[test]
    fn cavity_wall_order_enforced() {
        assert!(Cavity::new(1.0, 2.0, 3.0e8).is_ok());
        assert!(Cavity::new(-1.0, 2.0, 1.0).is_err());
        assert!(Cavity::new(2.0, 2.0, 1.0).is_err());
        assert!(Cavity::new(1.0, 2.0, 0.0).is_err());
        assert!(WedgeCavity::new(0.0, 1.0).is_err());
        assert!(WedgeCavity::new(2.0, 1.0).is_err());
    }

    #[test]
    fn wedge_placement_from_h() {
        let w = wedge_from_h(0.1, 1.0).unwrap();
        assert_eq!((w.chi_l, w.chi_r), (9.5, 10.5));
        assert_eq!(w.chi0(), 10.0);

        // Near wall approaches the horizon as h -> 2.
        let close = wedge_from_h(1.999, 1.0).unwrap();
        assert!(close.chi_l > 0.0 && close.chi_l < 1e-3);
        match wedge_from_h(2.0, 1.0) {
            Err(Error::HorizonInsideCavity { h, .. }) => assert_eq!(h, 2.0),
            other => panic!("expected horizon error, got {other:?}"),
        }
        assert!(wedge_from_h(2.5, 1.0).is_err());
        assert!(wedge_from_h(-0.1, 1.0).is_err());
        assert!(wedge_from_h(0.1, 0.0).is_err());
    }

    #[test]
    fn modes_vanish_at_walls() {
        let cav = unit_cavity();
        let wedge = wedge_from_h(0.1, 1.0).unwrap();
        for n in 1..=4 {
            for t in [0.0, 0.37, -1.4] {
                let (u, _, _) = inertial_mode(&cav, n, t, cav.x_l).unwrap();
                assert!(u.norm() < 1e-15);
                let (v, _, _) = rindler_mode(&wedge, n, t, wedge.chi_l).unwrap();
                assert!(v.norm() < 1e-15);
                // Far walls land on sin(n pi), zero only to round-off of the
                // wall argument.
                let (u, _, _) = inertial_mode(&cav, n, t, cav.x_r).unwrap();
                assert!(u.norm() < 1e-13);
                let (v, _, _) = rindler_mode(&wedge, n, t, wedge.chi_r).unwrap();
                assert!(v.norm() < 1e-13);
            }
        }
    }

    #[test]
    fn fundamental_midpoint_value() {
        let cav = unit_cavity();
        let (u, _, _) = inertial_mode(&cav, 1, 0.0, 10.0).unwrap();
        assert!((u.re - 0.5641895835477563).abs() < 1e-12);
        assert_eq!(u.im, 0.0);
    }

    #[test]
    fn harmonic_spectrum_ratios() {
        let cav = Cavity::new(3.0, 5.0, 2.0).unwrap();
        let u1 = ModeFunction::inertial(cav, 1).unwrap();
        let u2 = ModeFunction::inertial(cav, 2).unwrap();
        assert_eq!(u2.frequency() / u1.frequency(), 2.0);
        // omega_1 = pi c / L.
        assert_eq!(u1.frequency(), std::f64::consts::PI);
    }

    #[test]
    fn log_spaced_spectrum() {
        // chi_R/chi_L = e^pi makes D = pi and Omega_1 = 1.
        let wedge = WedgeCavity::new(1.0, std::f64::consts::PI.exp()).unwrap();
        let v1 = ModeFunction::rindler(wedge, 1).unwrap();
        assert!((v1.frequency() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn zero_mode_index_rejected() {
        assert!(matches!(
            ModeFunction::inertial(unit_cavity(), 0),
            Err(Error::ZeroModeIndex)
        ));
    }

    #[test]
    fn out_of_cavity_evaluation_rejected() {
        let cav = unit_cavity();
        match inertial_mode(&cav, 1, 0.0, 11.0) {
            Err(Error::OutsideCavity { x, lo, hi }) => {
                assert_eq!((x, lo, hi), (11.0, 9.5, 10.5));
            }
            other => panic!("expected domain error, got {other:?}"),
        }
        let wedge = wedge_from_h(0.5, 1.0).unwrap();
        assert!(rindler_mode(&wedge, 1, 0.0, 0.1).is_err());
    }

    #[test]
    fn inertial_self_norms_are_unity() {
        let cav = unit_cavity();
        let cfg = tight_tol();
        for n in 1..=5 {
            let u = ModeFunction::inertial(cav, n).unwrap();
            let ip = kg_inner_product(&u, &u, Surface::InitialTime, &cfg).unwrap();
            assert!(
                (ip.value.re - 1.0).abs() < 1e-10 && ip.value.im.abs() < 1e-10,
                "n={n}: {:?}",
                ip.value
            );
        }
    }

    #[test]
    fn rindler_self_norms_are_unity() {
        let wedge = wedge_from_h(0.1, 1.0).unwrap();
        let cfg = tight_tol();
        for n in 1..=5 {
            let v = ModeFunction::rindler(wedge, n).unwrap();
            let ip = kg_inner_product(&v, &v, Surface::InitialTime, &cfg).unwrap();
            assert!(
                (ip.value.re - 1.0).abs() < 1e-10 && ip.value.im.abs() < 1e-10,
                "n={n}: {:?}",
                ip.value
            );
        }
    }

    #[test]
    fn distinct_modes_are_orthogonal() {
        let cav = unit_cavity();
        let wedge = wedge_from_h(0.1, 1.0).unwrap();
        let cfg = tight_tol();
        for m in 1..=4 {
            for n in 1..=4 {
                if m == n {
                    continue;
                }
                let um = ModeFunction::inertial(cav, m).unwrap();
                let un = ModeFunction::inertial(cav, n).unwrap();
                let ip = kg_inner_product(&um, &un, Surface::InitialTime, &cfg).unwrap();
                assert!(ip.value.norm() < 1e-10, "u {m},{n}: {:?}", ip.value);

                let vm = ModeFunction::rindler(wedge, m).unwrap();
                let vn = ModeFunction::rindler(wedge, n).unwrap();
                let ip = kg_inner_product(&vm, &vn, Surface::InitialTime, &cfg).unwrap();
                assert!(ip.value.norm() < 1e-10, "v {m},{n}: {:?}", ip.value);
            }
        }
    }

    #[test]
    fn conjugate_modes_carry_negative_norm() {
        let cav = unit_cavity();
        let cfg = tight_tol();
        for n in 1..=3 {
            let u = ModeFunction::inertial(cav, n).unwrap().conjugate();
            let ip = kg_inner_product(&u, &u, Surface::InitialTime, &cfg).unwrap();
            assert!((ip.value.re + 1.0).abs() < 1e-10, "n={n}: {:?}", ip.value);
        }
        let wedge = wedge_from_h(0.3, 2.0).unwrap();
        let v = ModeFunction::rindler(wedge, 2).unwrap().conjugate();
        let ip = kg_inner_product(&v, &v, Surface::InitialTime, &cfg).unwrap();
        assert!((ip.value.re + 1.0).abs() < 1e-10);
    }

    #[test]
    fn mismatched_inertial_speeds_rejected() {
        let a = ModeFunction::inertial(Cavity::new(1.0, 2.0, 1.0).unwrap(), 1).unwrap();
        let b = ModeFunction::inertial(Cavity::new(1.0, 2.0, 2.0).unwrap(), 1).unwrap();
        assert!(matches!(
            kg_inner_product(&a, &b, Surface::InitialTime, &tight_tol()),
            Err(Error::MismatchedSignalSpeed { .. })
        ));
    }

    #[test]
    fn disjoint_supports_flagged_not_integrated() {
        let a = ModeFunction::inertial(Cavity::new(1.0, 2.0, 1.0).unwrap(), 1).unwrap();
        let b = ModeFunction::inertial(Cavity::new(3.0, 4.0, 1.0).unwrap(), 1).unwrap();
        let ip = kg_inner_product(&a, &b, Surface::InitialTime, &tight_tol()).unwrap();
        assert!(ip.disjoint_support);
        assert_eq!(ip.value, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn rindler_form_requires_rindler_modes() {
        let cav = unit_cavity();
        let u = ModeFunction::inertial(cav, 1).unwrap();
        let err = kg_inner_product_in_form(
            &u,
            &u,
            ProductForm::RindlerChart,
            Surface::InitialTime,
            &tight_tol(),
        );
        assert!(matches!(err, Err(Error::WrongChartForForm)));
    }

    #[test]
    fn quadrature_failure_surfaces_achieved_estimate() {
        let cav = unit_cavity();
        let u = ModeFunction::inertial(cav, 29).unwrap();
        let w = ModeFunction::rindler(wedge_from_h(0.1, 1.0).unwrap(), 30).unwrap();
        let cfg = QuadratureConfig {
            abs_tol: 1e-300,
            panel_budget: 8,
        };
        match kg_inner_product(&u, &w, Surface::InitialTime, &cfg) {
            Err(Error::ToleranceNotReached {
                achieved,
                requested,
                ..
            }) => {
                assert!(achieved > requested);
            }
            other => panic!("expected tolerance failure, got {other:?}"),
        }
    }

    #[test]
    fn constant_field_solves_wave_equation() {
        let metric = MetricTensor::flat(1.0).unwrap();
        let cav = unit_cavity();
        let residual = wave_equation_residual(
            |_, _| Complex64::new(3.25, -1.0),
            &metric,
            &cav,
            0.1,
            10.0,
            1e-3,
        )
        .unwrap();
        assert!(residual < 1e-9, "residual {residual}");
    }

    #[test]
    fn true_mode_residual_shrinks_quadratically() {
        // A cavity mode solves the wave equation for the matching metric, so
        // the finite-difference residual is pure truncation: quartering with
        // each halving of the step.
        let c_s = 0.5;
        let mut comp = [[0.0; 4]; 4];
        comp[0][0] = -c_s * c_s;
        comp[1][1] = 1.0;
        comp[2][2] = 1.0;
        comp[3][3] = 1.0;
        let labels = ["t [s]", "x [m]", "y [m]", "z [m]"].map(str::to_owned);
        let metric = MetricTensor::new(
            comp,
            labels,
            crate::acoustic_metric::ConformalFactor::Scalar(1.0),
        )
        .unwrap();
        let cav = Cavity::new(9.5, 10.5, c_s).unwrap();
        let mode = ModeFunction::inertial(cav, 2).unwrap();
        let field = |t: f64, x: f64| mode.value(t, x).unwrap();

        let r1 = wave_equation_residual(field, &metric, &cav, 0.3, 10.2, 2e-3).unwrap();
        let r2 = wave_equation_residual(field, &metric, &cav, 0.3, 10.2, 1e-3).unwrap();
        let ratio = r1 / r2;
        assert!(
            (ratio - 4.0).abs() < 0.4,
            "expected quadratic shrink, got ratio {ratio}"
        );
    }

    #[test]
    fn wrong_dispersion_is_detected() {
        // Doubling the frequency breaks the dispersion relation; the
        // residual saturates at 3 (n pi / L)^2 |phi| instead of vanishing.
        let metric = MetricTensor::flat(1.0).unwrap();
        let cav = unit_cavity();
        let n = 2.0;
        let omega = n * std::f64::consts::PI; // L = 1, c_eff = 1
        let bad = move |t: f64, x: f64| {
            let amp = (n * std::f64::consts::PI * (x - 9.5)).sin();
            amp * Complex64::from_polar(1.0, -2.0 * omega * t)
        };
        let r_coarse = wave_equation_residual(bad, &metric, &cav, 0.0, 10.2, 1e-2).unwrap();
        let r_fine = wave_equation_residual(bad, &metric, &cav, 0.0, 10.2, 1e-4).unwrap();
        let expected = 3.0 * omega * omega * (n * std::f64::consts::PI * 0.7).sin().abs();
        assert!((r_fine - expected).abs() < 1e-2 * expected);
        assert!((r_coarse - expected).abs() < 0.1 * expected);
    }

    #[test]
    fn stencil_near_wall_rejected() {
        let metric = MetricTensor::flat(1.0).unwrap();
        let cav = unit_cavity();
        let err = wave_equation_residual(
            |_, _| Complex64::new(0.0, 0.0),
            &metric,
            &cav,
            0.0,
            10.4999,
            1e-3,
        );
        assert!(matches!(err, Err(Error::StencilNearWall { .. })));
    }

    #[test]
    fn off_diagonal_metric_rejected() {
        let mut comp = MetricTensor::flat(1.0).unwrap().components;
        comp[0][1] = 0.1;
        comp[1][0] = 0.1;
        let labels = ["t [s]", "x [m]", "y [m]", "z [m]"].map(str::to_owned);
        let metric = MetricTensor::new(
            comp,
            labels,
            crate::acoustic_metric::ConformalFactor::Absorbed,
        )
        .unwrap();
        let err = wave_equation_residual(
            |_, _| Complex64::new(0.0, 0.0),
            &metric,
            &unit_cavity(),
            0.0,
            10.0,
            1e-3,
        );
        assert!(matches!(err, Err(Error::NonDiagonalMetric { row: 0, col: 1 })));
    }
}
