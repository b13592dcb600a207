//! Bogoliubov transformation between the inertial and the uniformly
//! accelerated mode basis of a rigid cavity, for the sudden switch of
//! acceleration at t = 0.
//!
//! The overlap matrices are assembled from Klein-Gordon inner products on
//! the matching slice:
//!
//! ```text
//!   alpha_mn = (v_m, u_n),        beta_mn = -(v_m, u_n*)
//! ```
//!
//! Index convention, stated once and loudly: rows of *both* matrices carry
//! the accelerated index m, columns the inertial index n. One sometimes
//! sees the beta rows and columns swapped (beta_mn = -(v_n, u_m*)); that
//! orientation pairs each matrix with a different row basis and breaks the
//! symplectic symmetry identity alpha beta^T = beta alpha^T at first order
//! in h, so it is not used here. With the convention above both canonical
//! identities hold to quadrature accuracy on the trusted block:
//!
//! ```text
//!   alpha alpha^dag - beta beta^dag = I,     alpha beta^T = beta alpha^T
//! ```
//!
//! Truncation makes the identities degrade near the cutoff edge — rows only
//! sum over the modes we kept — so every pair carries a measured
//! `trusted_block`: the largest leading block on which both residuals stay
//! below 100x the quadrature tolerance. Nothing downstream silently uses
//! entries outside it.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cavity_modes::{
    kg_inner_product, wedge_from_h, Cavity, ModeFunction, Surface,
};
use crate::error::{Error, Result};
use crate::quadrature::QuadratureConfig;

/// Dimensionless acceleration h = a L / c_eff^2 of a cavity of length L
/// whose center worldline has proper acceleration a.
pub fn h_parameter(a: f64, length: f64, c_eff: f64) -> Result<f64> {
    for (name, value) in [("a", a), ("length", length), ("c_eff", c_eff)] {
        if !(value > 0.0) || !value.is_finite() {
            return Err(Error::NonPositive { name, value });
        }
    }
    Ok(a * length / (c_eff * c_eff))
}

/// A truncated bosonic Bogoliubov transformation, carrying the parameters
/// it was computed from and the block size it can vouch for.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PairOnDisk", into = "PairOnDisk")]
pub struct BogoliubovPair {
    pub alpha: DMatrix<Complex64>,
    pub beta: DMatrix<Complex64>,
    pub cutoff: usize,
    /// Dimensionless acceleration this pair was computed at; 0 marks pairs
    /// that are not single-acceleration transformations (identity, composed).
    pub h: f64,
    /// Quadrature tolerance the matrix elements were computed to.
    pub tol: f64,
    /// Largest leading block on which both canonical identities hold within
    /// 100x tol.
    pub trusted_block: usize,
}

/// Max |entry| over the leading k x k block.
fn block_max(m: &DMatrix<Complex64>, k: usize) -> f64 {
    let mut worst: f64 = 0.0;
    for r in 0..k {
        for c in 0..k {
            worst = worst.max(m[(r, c)].norm());
        }
    }
    worst
}

impl BogoliubovPair {
    fn residual_matrices(&self) -> (DMatrix<Complex64>, DMatrix<Complex64>) {
        let n = self.cutoff;
        let eye = DMatrix::<Complex64>::identity(n, n);
        let canonical = &self.alpha * self.alpha.adjoint() - &self.beta * self.beta.adjoint() - eye;
        let symmetry = &self.alpha * self.beta.transpose() - &self.beta * self.alpha.transpose();
        (canonical, symmetry)
    }

    /// Max |(alpha alpha^dag - beta beta^dag - I)_ij| over the leading
    /// k x k block (full rows enter the products; only the block is read).
    pub fn canonical_residual(&self, k: usize) -> f64 {
        let k = k.min(self.cutoff);
        block_max(&self.residual_matrices().0, k)
    }

    /// Max |(alpha beta^T - beta alpha^T)_ij| over the leading k x k block.
    pub fn symmetry_residual(&self, k: usize) -> f64 {
        let k = k.min(self.cutoff);
        block_max(&self.residual_matrices().1, k)
    }

    fn measure_trusted_block(&mut self) {
        let (canonical, symmetry) = self.residual_matrices();
        let threshold = 100.0 * self.tol;
        let mut trusted = 0;
        let mut worst: f64 = 0.0;
        for k in 1..=self.cutoff {
            // Expand the block by one rim and keep the running maximum.
            for i in 0..k {
                worst = worst
                    .max(canonical[(i, k - 1)].norm())
                    .max(canonical[(k - 1, i)].norm())
                    .max(symmetry[(i, k - 1)].norm())
                    .max(symmetry[(k - 1, i)].norm());
            }
            if worst <= threshold {
                trusted = k;
            }
        }
        self.trusted_block = trusted;
    }

    /// Expected occupation of each accelerated mode when the inertial state
    /// is vacuum: N_m = sum_n |beta_mn|^2, reported for m up to the trusted
    /// block (each row summed over every column we computed), plus the
    /// total.
    pub fn particle_number(&self) -> (Vec<f64>, f64) {
        let per_mode: Vec<f64> = (0..self.trusted_block)
            .map(|m| {
                (0..self.cutoff)
                    .map(|n| self.beta[(m, n)].norm_sqr())
                    .sum()
            })
            .collect();
        let total = per_mode.iter().sum();
        (per_mode, total)
    }
}

/// Assemble the transformation for a sudden jump to dimensionless
/// acceleration h.
///
/// The wedge walls come from [`wedge_from_h`] with the cavity's length; the
/// inertial box is placed coincident with them (the cavity is momentarily
/// at rest at t = 0), and every matrix element is one quadrature. Elements
/// are computed in parallel; each is independent, so results are
/// bit-identical across thread counts.
pub fn compute_coefficients(
    cavity: &Cavity,
    h: f64,
    cutoff: usize,
    tol: f64,
) -> Result<BogoliubovPair> {
    if cutoff == 0 {
        return Err(Error::ZeroModeIndex);
    }
    if !(tol > 0.0) {
        return Err(Error::NonPositive {
            name: "tol",
            value: tol,
        });
    }
    let wedge = wedge_from_h(h, cavity.length())?;
    let box_at_rest = Cavity::new(wedge.chi_l, wedge.chi_r, cavity.c_eff)?;
    let cfg = QuadratureConfig {
        abs_tol: tol,
        panel_budget: 10_000,
    };

    let elements: Vec<(usize, usize)> = (0..cutoff)
        .flat_map(|m| (0..cutoff).map(move |n| (m, n)))
        .collect();
    let computed = elements
        .par_iter()
        .map(|&(m, n)| -> Result<(Complex64, Complex64)> {
            let v_m = ModeFunction::rindler(wedge, m + 1)?;
            let u_n = ModeFunction::inertial(box_at_rest, n + 1)?;
            let a = kg_inner_product(&v_m, &u_n, Surface::InitialTime, &cfg)?;
            let b = kg_inner_product(&v_m, &u_n.conjugate(), Surface::InitialTime, &cfg)?;
            Ok((a.value, -b.value))
        })
        .collect::<Result<Vec<_>>>()?;

    let alpha = DMatrix::from_fn(cutoff, cutoff, |r, c| computed[r * cutoff + c].0);
    let beta = DMatrix::from_fn(cutoff, cutoff, |r, c| computed[r * cutoff + c].1);
    let mut pair = BogoliubovPair {
        alpha,
        beta,
        cutoff,
        h,
        tol,
        trusted_block: 0,
    };
    pair.measure_trusted_block();
    Ok(pair)
}

/// The transformation induced by a Galilean (non-relativistic) change of
/// frame: exactly the identity. No mode mixing, no particle creation.
pub fn galilean_coefficients(cutoff: usize) -> Result<BogoliubovPair> {
    if cutoff == 0 {
        return Err(Error::ZeroModeIndex);
    }
    Ok(BogoliubovPair {
        alpha: DMatrix::identity(cutoff, cutoff),
        beta: DMatrix::zeros(cutoff, cutoff),
        cutoff,
        h: 0.0,
        tol: 0.0,
        trusted_block: cutoff,
    })
}

/// Apply `first`, then `second`:
///
/// ```text
///   alpha = alpha_2 alpha_1 + beta_2 beta_1*,
///   beta  = alpha_2 beta_1  + beta_2 alpha_1*.
/// ```
///
/// The trusted block of the result is re-measured from the composed
/// matrices against the looser of the two input tolerances.
pub fn compose(first: &BogoliubovPair, second: &BogoliubovPair) -> Result<BogoliubovPair> {
    if first.cutoff != second.cutoff {
        return Err(Error::CutoffMismatch {
            first: first.cutoff,
            second: second.cutoff,
        });
    }
    let alpha = &second.alpha * &first.alpha + &second.beta * first.beta.conjugate();
    let beta = &second.alpha * &first.beta + &second.beta * first.alpha.conjugate();
    let mut pair = BogoliubovPair {
        alpha,
        beta,
        cutoff: first.cutoff,
        h: 0.0,
        tol: first.tol.max(second.tol),
        trusted_block: 0,
    };
    pair.measure_trusted_block();
    Ok(pair)
}

/// Largest entrywise modulus difference between two pairs' coefficient
/// matrices, reported as (alpha gap, beta gap). The pairs must share a
/// cutoff.
pub fn coefficient_difference(a: &BogoliubovPair, b: &BogoliubovPair) -> Result<(f64, f64)> {
    if a.cutoff != b.cutoff {
        return Err(Error::CutoffMismatch {
            first: a.cutoff,
            second: b.cutoff,
        });
    }
    let gap = |x: &DMatrix<Complex64>, y: &DMatrix<Complex64>| {
        (x - y).iter().fold(0.0f64, |m, z| m.max(z.norm()))
    };
    Ok((gap(&a.alpha, &b.alpha), gap(&a.beta, &b.beta)))
}

/// Residual ceiling above which [`inverse`] refuses to pretend the algebra
/// still works.
const INVERSION_RESIDUAL_LIMIT: f64 = 1e-4;

/// Inverse transformation (accelerated operators back to inertial):
/// alpha' = alpha^dag, beta' = -beta^T.
///
/// Valid only when the canonical identities actually hold; if even the most
/// trusted corner of the pair violates them beyond 1e-4 the inversion is
/// refused rather than silently wrong.
pub fn inverse(pair: &BogoliubovPair) -> Result<BogoliubovPair> {
    let k = pair.trusted_block.max(1);
    let residual = pair.canonical_residual(k).max(pair.symmetry_residual(k));
    if residual > INVERSION_RESIDUAL_LIMIT {
        return Err(Error::IdentityResidualTooLarge {
            residual,
            limit: INVERSION_RESIDUAL_LIMIT,
        });
    }
    Ok(BogoliubovPair {
        alpha: pair.alpha.adjoint(),
        beta: -pair.beta.transpose(),
        cutoff: pair.cutoff,
        h: pair.h,
        tol: pair.tol,
        trusted_block: pair.trusted_block,
    })
}

/// On-disk layout: complex matrices flattened row-major as [re, im] pairs.
#[derive(Serialize, Deserialize)]
struct PairOnDisk {
    cutoff: usize,
    h: f64,
    tol: f64,
    alpha: Vec<[f64; 2]>,
    beta: Vec<[f64; 2]>,
    trusted_block: usize,
}

impl From<BogoliubovPair> for PairOnDisk {
    fn from(pair: BogoliubovPair) -> Self {
        let n = pair.cutoff;
        let flatten = |m: &DMatrix<Complex64>| -> Vec<[f64; 2]> {
            (0..n)
                .flat_map(|r| (0..n).map(move |c| (r, c)))
                .map(|(r, c)| [m[(r, c)].re, m[(r, c)].im])
                .collect()
        };
        PairOnDisk {
            cutoff: n,
            h: pair.h,
            tol: pair.tol,
            alpha: flatten(&pair.alpha),
            beta: flatten(&pair.beta),
            trusted_block: pair.trusted_block,
        }
    }
}

impl TryFrom<PairOnDisk> for BogoliubovPair {
    type Error = Error;
    fn try_from(disk: PairOnDisk) -> Result<Self> {
        let n = disk.cutoff;
        if n == 0 {
            return Err(Error::ZeroModeIndex);
        }
        let expected = n * n;
        let unflatten = |name: &'static str, flat: &[[f64; 2]]| -> Result<DMatrix<Complex64>> {
            if flat.len() != expected {
                return Err(Error::BadMatrixLength {
                    matrix: name,
                    got: flat.len(),
                    expected,
                });
            }
            Ok(DMatrix::from_fn(n, n, |r, c| {
                Complex64::new(flat[r * n + c][0], flat[r * n + c][1])
            }))
        };
        Ok(BogoliubovPair {
            alpha: unflatten("alpha", &disk.alpha)?,
            beta: unflatten("beta", &disk.beta)?,
            cutoff: n,
            h: disk.h,
            tol: disk.tol,
            trusted_block: disk.trusted_block.min(n),
        })
    }
}
