//! Sweep execution and artifact writing.
//!
//! `run` turns a validated config into one Bogoliubov pair per h value and
//! reports particle totals, identity residuals and a fitted power law.
//! Artifacts: a CSV table (one timestamp comment line, then a fixed header,
//! then rows — reruns reproduce the body byte for byte), a `result.json`
//! summary, and one `pair_NNN.json` per row from which every particle number
//! can be recomputed independently.

use std::fs;
use std::io::Write as _;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use rindler_cavity::{
    coefficient_difference, compute_coefficients, galilean_coefficients, wedge_from_h,
    BogoliubovPair, Cavity, RindlerChart,
};

use crate::scenario::{ScenarioConfig, ScenarioError, Sweep};

/// Differences below this are treated as "the same physics" when comparing
/// two runs entry by entry.
pub const COMPARE_TOLERANCE: f64 = 1e-10;

/// One h point of a sweep.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepRow {
    pub h: f64,
    pub total_n: f64,
    pub per_mode: Vec<f64>,
    pub residual_canonical: f64,
    pub residual_symmetry: f64,
    pub trusted_block: usize,
    pub runtime_s: f64,
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    /// The pair behind each row, in the same (h-sorted) order.
    pub pairs: Vec<BogoliubovPair>,
    /// Fitted d ln(total_N) / d ln(h), when at least two rows have particles.
    pub slope: Option<f64>,
}

/// Least-squares slope of ln y against ln x. None when fewer than two
/// usable (positive) points exist.
pub fn log_log_slope(points: &[(f64, f64)]) -> Option<f64> {
    let logs: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if logs.len() < 2 {
        return None;
    }
    let n = logs.len() as f64;
    let sx: f64 = logs.iter().map(|(x, _)| x).sum();
    let sy: f64 = logs.iter().map(|(_, y)| y).sum();
    let sxx: f64 = logs.iter().map(|(x, _)| x * x).sum();
    let sxy: f64 = logs.iter().map(|(x, y)| x * y).sum();
    Some((n * sxy - sx * sy) / (n * sxx - sx * sx))
}

fn row_from_pair(h: f64, pair: &BogoliubovPair, runtime_s: f64) -> SweepRow {
    let (per_mode, total_n) = pair.particle_number();
    // Residuals are quoted at the block the pair itself vouches for; an
    // untrusted pair (block 0) still gets its leading entry reported.
    let k = pair.trusted_block.max(1);
    SweepRow {
        h,
        total_n,
        per_mode,
        residual_canonical: pair.canonical_residual(k),
        residual_symmetry: pair.symmetry_residual(k),
        trusted_block: pair.trusted_block,
        runtime_s,
    }
}

/// Run every h point of the scenario. Rows come back sorted by h.
pub fn run(config: &ScenarioConfig) -> Result<SweepResult, ScenarioError> {
    config.validate()?;
    let c_eff = config.c_eff()?;
    let mut hs = config.h_values()?;
    hs.sort_by(f64::total_cmp);

    let computed: Result<Vec<(f64, BogoliubovPair, f64)>, ScenarioError> = hs
        .par_iter()
        .map(|&h| {
            let wedge = wedge_from_h(h, config.length)
                .map_err(|source| ScenarioError::Numeric { h, source })?;
            let cavity = Cavity::new(wedge.chi_l, wedge.chi_r, c_eff)
                .map_err(|source| ScenarioError::Numeric { h, source })?;
            let started = Instant::now();
            let pair = compute_coefficients(&cavity, h, config.cutoff, config.tol)
                .map_err(|source| ScenarioError::Numeric { h, source })?;
            Ok((h, pair, started.elapsed().as_secs_f64()))
        })
        .collect();
    let computed = computed?;

    let rows: Vec<SweepRow> = computed
        .iter()
        .map(|(h, pair, dt)| row_from_pair(*h, pair, *dt))
        .collect();
    let pairs: Vec<BogoliubovPair> = computed.into_iter().map(|(_, p, _)| p).collect();
    let slope = log_log_slope(
        &rows
            .iter()
            .map(|r| (r.h, r.total_n))
            .collect::<Vec<_>>(),
    );

    let result = SweepResult { rows, pairs, slope };
    if let Some(dir) = &config.out {
        write_artifacts(dir, config, &result)?;
    }
    Ok(result)
}

pub const CSV_HEADER: &str = "h,total_N,residual_canonical,residual_symmetry,trusted_block,runtime_s";

/// Shortest decimal form that parses back to the same f64 bits, switching to
/// scientific notation where that is shorter (`0.001`, `3.25e-10`). Plain
/// `Display` would expand tiny values into hundreds of zeros.
pub fn format_float(v: f64) -> String {
    serde_json::to_string(&v).expect("finite float")
}

fn csv_row(r: &SweepRow) -> String {
    format!(
        "{},{},{},{},{},{}",
        format_float(r.h),
        format_float(r.total_n),
        format_float(r.residual_canonical),
        format_float(r.residual_symmetry),
        r.trusted_block,
        format_float(r.runtime_s)
    )
}

/// CSV body below the timestamp line: header plus one row per h. Identical
/// runs produce identical bytes apart from the runtime column.
pub fn csv_body(rows: &[SweepRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&csv_row(r));
        out.push('\n');
    }
    out
}

#[derive(Debug, Serialize, Deserialize)]
struct RowSummary {
    #[serde(flatten)]
    row: SweepRow,
    pair_file: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct RunSummary {
    medium: crate::scenario::Medium,
    c_eff: f64,
    #[serde(rename = "L")]
    length: f64,
    cutoff: usize,
    tol: f64,
    slope: Option<f64>,
    rows: Vec<RowSummary>,
}

fn write_artifacts(
    dir: &Path,
    config: &ScenarioConfig,
    result: &SweepResult,
) -> Result<(), ScenarioError> {
    fs::create_dir_all(dir)?;

    let mut csv = fs::File::create(dir.join("sweep.csv"))?;
    // Timestamps live only on this comment line so the body stays
    // reproducible.
    writeln!(csv, "# generated {}", chrono::Utc::now().to_rfc3339())?;
    csv.write_all(csv_body(&result.rows).as_bytes())?;

    let mut summaries = Vec::with_capacity(result.rows.len());
    for (i, (row, pair)) in result.rows.iter().zip(&result.pairs).enumerate() {
        let pair_file = format!("pair_{i:03}.json");
        fs::write(dir.join(&pair_file), serde_json::to_string_pretty(pair)?)?;
        summaries.push(RowSummary {
            row: row.clone(),
            pair_file,
        });
    }
    let summary = RunSummary {
        medium: config.medium,
        c_eff: config.c_eff()?,
        length: config.length,
        cutoff: config.cutoff,
        tol: config.tol,
        slope: result.slope,
        rows: summaries,
    };
    fs::write(
        dir.join("result.json"),
        serde_json::to_string_pretty(&summary)?,
    )?;
    Ok(())
}

/// Entrywise comparison of two scenario runs.
#[derive(Debug, Clone, Serialize)]
pub struct CompareReport {
    pub h_matched: bool,
    pub max_alpha_diff: f64,
    pub max_beta_diff: f64,
    pub max_total_particle_diff: f64,
    pub within_tolerance: bool,
}

/// Run both configs and diff the coefficient matrices and particle totals.
/// The status is "within tolerance" only when the h grids agree exactly and
/// every difference stays below `COMPARE_TOLERANCE`.
pub fn compare(
    first: &ScenarioConfig,
    second: &ScenarioConfig,
) -> Result<CompareReport, ScenarioError> {
    if first.cutoff != second.cutoff {
        return Err(ScenarioError::Config {
            field: "cutoff",
            message: format!(
                "comparison needs equal mode counts, got {} vs {}",
                first.cutoff, second.cutoff
            ),
        });
    }
    let run_a = run(first)?;
    let run_b = run(second)?;

    let h_matched = run_a.rows.len() == run_b.rows.len()
        && run_a
            .rows
            .iter()
            .zip(&run_b.rows)
            .all(|(x, y)| x.h == y.h);

    let mut max_alpha = 0.0f64;
    let mut max_beta = 0.0f64;
    let mut max_total = 0.0f64;
    for ((pa, pb), (ra, rb)) in run_a
        .pairs
        .iter()
        .zip(&run_b.pairs)
        .zip(run_a.rows.iter().zip(&run_b.rows))
    {
        let (da, db) = coefficient_difference(pa, pb).map_err(|source| {
            ScenarioError::Numeric { h: ra.h, source }
        })?;
        max_alpha = max_alpha.max(da);
        max_beta = max_beta.max(db);
        max_total = max_total.max((ra.total_n - rb.total_n).abs());
    }

    let within_tolerance = h_matched
        && max_alpha < COMPARE_TOLERANCE
        && max_beta < COMPARE_TOLERANCE
        && max_total < COMPARE_TOLERANCE;
    Ok(CompareReport {
        h_matched,
        max_alpha_diff: max_alpha,
        max_beta_diff: max_beta,
        max_total_particle_diff: max_total,
        within_tolerance,
    })
}

/// Low-acceleration limit report: how fast the hyperbolic worldline collapses
/// onto the parabolic one, and how fast particle production switches off.
#[derive(Debug, Clone, Serialize)]
pub struct GalileanReport {
    /// (epsilon, |dt|, |dx|) residuals between the exact and the parabolic
    /// worldline at dimensionless time epsilon = a tau / c.
    pub residual_rows: Vec<(f64, f64, f64)>,
    pub slope_dt: Option<f64>,
    pub slope_dx: Option<f64>,
    /// (h, total particle number) for a few small h, demonstrating the
    /// quadratic die-off.
    pub beta_rows: Vec<(f64, f64)>,
    /// Particle total of the exact identity transformation — zero by
    /// construction, printed as the limit row.
    pub galilean_total: f64,
}

/// Build the Galilean-limit report for epsilon in the given log range.
/// Epsilons must stay inside (0, 0.5): beyond that the "limit" stops being
/// one and the fitted slopes drift off their leading orders.
pub fn galilean_report(
    config: &ScenarioConfig,
    epsilons: &Sweep,
) -> Result<GalileanReport, ScenarioError> {
    config.validate()?;
    let eps = epsilons.values();
    if eps.len() < 2 {
        return Err(ScenarioError::Config {
            field: "--galilean",
            message: "need at least two epsilon points to fit slopes".into(),
        });
    }
    for &e in &eps {
        if !(e > 0.0 && e < 0.5) {
            return Err(ScenarioError::Config {
                field: "--galilean",
                message: format!("epsilon = {e} outside (0, 0.5)"),
            });
        }
    }

    let c_eff = config.c_eff()?;
    let chart = RindlerChart::new(c_eff).map_err(|source| ScenarioError::Numeric {
        h: f64::NAN,
        source,
    })?;
    let mut residual_rows = Vec::with_capacity(eps.len());
    for &e in &eps {
        // epsilon = a tau / c fixes the proper time for this config's a.
        let tau = e * c_eff / config.a;
        let (dt, dx) = chart
            .expansion_residual(tau, config.a)
            .map_err(|source| ScenarioError::Numeric { h: f64::NAN, source })?;
        residual_rows.push((e, dt.abs(), dx.abs()));
    }
    let slope_dt = log_log_slope(
        &residual_rows
            .iter()
            .map(|(e, dt, _)| (*e, *dt))
            .collect::<Vec<_>>(),
    );
    let slope_dx = log_log_slope(
        &residual_rows
            .iter()
            .map(|(e, _, dx)| (*e, *dx))
            .collect::<Vec<_>>(),
    );

    // Small-h trend with a modest mode count: enough to see N_total ~ h^2
    // without turning a report into a long computation.
    let beta_cutoff = config.cutoff.min(12);
    let beta_hs = [1e-3, 3.162277660168379e-3, 1e-2];
    let beta_rows: Result<Vec<(f64, f64)>, ScenarioError> = beta_hs
        .par_iter()
        .map(|&h| {
            let wedge = wedge_from_h(h, config.length)
                .map_err(|source| ScenarioError::Numeric { h, source })?;
            let cavity = Cavity::new(wedge.chi_l, wedge.chi_r, c_eff)
                .map_err(|source| ScenarioError::Numeric { h, source })?;
            let pair = compute_coefficients(&cavity, h, beta_cutoff, config.tol)
                .map_err(|source| ScenarioError::Numeric { h, source })?;
            Ok((h, pair.particle_number().1))
        })
        .collect();

    let galilean_total = galilean_coefficients(config.cutoff)
        .map_err(|source| ScenarioError::Numeric {
            h: 0.0,
            source,
        })?
        .particle_number()
        .1;

    Ok(GalileanReport {
        residual_rows,
        slope_dt,
        slope_dx,
        beta_rows: beta_rows?,
        galilean_total,
    })
}
