//! Helix characterizations for spacelike curves: the curvature-ratio
//! invariant, the axis construction and its residual, the f-function
//! conditions, the second-order gamma ODE along the axis, the m/n constants,
//! and the integral/exponential least-squares fits.
//!
//! Notation: r = k1/k2, theta(s) = integral of k3 from the grid start,
//! eta/mu = (cosh, sinh) when eps1 = +1 and (cos, sin) when eps1 = -1.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::curve::{reparameterize_arclength, unit_speed_deviation, Curve};
use crate::error::{Error, Result};
use crate::frenet::{compute_frame_field, FrameField, FrenetApparatus, K_FLOOR};
use crate::minkowski::{CausalCharacter, Vec4};
use crate::numerics::{
    constancy_statistic, cumulative_quadrature, derivative_field, SampledFunction,
};

/// Detection thresholds. `tol_u` is a base value; the axis test compares
/// against `tol_u * (1 + max curvature)` so stiff profiles are not penalized.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Tolerances {
    pub tol_h: f64,
    pub tol_u: f64,
    pub null_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances::sampled()
    }
}

impl Tolerances {
    /// Defaults for frames reconstructed from position samples.
    pub fn sampled() -> Self {
        Tolerances { tol_h: 1e-3, tol_u: 1e-3, null_tol: 1e-6 }
    }

    /// Tighter defaults for frames carried exactly by the synthesizer.
    pub fn carried() -> Self {
        Tolerances { tol_h: 1e-6, tol_u: 1e-4, null_tol: 1e-6 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Helix,
    NonHelix,
    /// Constant invariant but no fixed axis: the constant-ratio, nonzero-k3
    /// family where the invariant test alone is a false positive.
    InvariantConstantNonHelix,
}

/// Full detection report. Per-point sequences cover interior grid points
/// only (boundary stencils excluded).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HelixReport {
    pub is_helix: bool,
    pub verdict: Verdict,
    pub eps1: f64,
    pub eps2: f64,
    pub s_min: f64,
    pub s_max: f64,
    pub h: f64,
    pub n_samples: usize,
    pub n_interior: usize,
    pub invariant_samples: Vec<f64>,
    pub invariant_spread: f64,
    /// Mean of the invariant: the constant the helix theorems call m.
    pub m_value: f64,
    /// Mean axis bracket vector, deliberately not normalized.
    pub axis: Vec4,
    /// g(axis, axis); near zero for a degenerate (null-axis) helix.
    pub axis_sq: f64,
    /// Normalized axis, present only when the axis is not (near-)null.
    pub axis_unit: Option<Vec4>,
    pub axis_class: CausalCharacter,
    pub axis_residual: f64,
    /// The threshold the axis residual was compared against.
    pub axis_tolerance: f64,
    /// Constancy of g(T, U) along the curve.
    pub tangent_axis_spread: f64,
    pub f_residual: f64,
    pub gamma_ode_residual: f64,
    pub beta_relation_residual: f64,
    #[serde(rename = "fit_C1")]
    pub fit_c1: Option<f64>,
    #[serde(rename = "fit_C2")]
    pub fit_c2: Option<f64>,
    pub fit_residual: Option<f64>,
    #[serde(rename = "fit_D")]
    pub fit_d: Option<f64>,
    #[serde(rename = "fit_D_residual")]
    pub fit_d_residual: Option<f64>,
    pub mn_mean_m: f64,
    pub mn_mean_n: f64,
    pub mn_spread: f64,
    pub tolerances: Tolerances,
}

/// Per-point series backing the report, for the plot CSV.
#[derive(Debug, Clone)]
pub struct PlotData {
    pub s: Vec<f64>,
    pub r: Vec<f64>,
    pub theta: Vec<f64>,
    pub invariant: Vec<f64>,
    pub f: Vec<f64>,
    pub m: Vec<f64>,
    pub n: Vec<f64>,
    pub axis_residual_pointwise: Vec<f64>,
}

/// Derivative stride for field-level quantities: carried frames are exact to
/// integrator accuracy, so plain stencils are optimal; reconstructed frames
/// carry sampling noise that wide strides suppress.
fn field_stride(field: &FrameField) -> usize {
    if field.carried {
        1
    } else {
        field.stride()
    }
}

/// Index range for analysis statistics. Field values near the interior
/// boundary are themselves products of one-sided stencils; every further
/// differentiation (r', U', gamma'') drags that pollution another stencil
/// width inward, so the statistics window shrinks by two more widths.
fn stat_range(field: &FrameField) -> std::ops::Range<usize> {
    let extra = 2 * (4 * field_stride(field) + 2);
    let lo = field.interior.start + extra;
    let hi = field.interior.end.saturating_sub(extra);
    if hi > lo && hi - lo >= 10 {
        lo..hi
    } else {
        field.interior.clone()
    }
}

fn interior_sup(field: &FrameField, values: &[f64]) -> f64 {
    values[stat_range(field)].iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

/// r = k1/k2 and its derivative on the full grid.
fn ratio_series(field: &FrameField) -> Result<(Vec<f64>, Vec<f64>)> {
    let r: Vec<f64> = field.apparatus.iter().map(|a| a.k1 / a.k2).collect();
    let rp = derivative_field(&r, field.grid.h, 1, field_stride(field))?;
    Ok((r, rp))
}

/// theta(s): cumulative integral of k3 anchored at the first grid point.
pub fn theta_series(field: &FrameField) -> Result<Vec<f64>> {
    let k3: Vec<f64> = field.apparatus.iter().map(|a| a.k3).collect();
    Ok(cumulative_quadrature(&SampledFunction::new(field.grid, k3))?.values)
}

fn eta_mu(eps1: f64, theta: f64) -> (f64, f64) {
    if eps1 > 0.0 {
        (theta.cosh(), theta.sinh())
    } else {
        (theta.cos(), theta.sin())
    }
}

/// H = r^2 - eps1 * (r'/k3)^2 on the full grid; constancy over the interior
/// is the necessary helix screen.
pub fn helix_invariant(field: &FrameField) -> Result<Vec<f64>> {
    let (r, rp) = ratio_series(field)?;
    Ok(field
        .apparatus
        .iter()
        .enumerate()
        .map(|(i, a)| r[i] * r[i] - a.eps1 * (rp[i] / a.k3).powi(2))
        .collect())
}

/// Axis bracket vector U = T - eps2 r B1 + eps1 eps2 (r'/k3) B2,
/// deliberately un-normalized (g(U,U) vanishes for null-axis helices).
pub fn axis_vector(a: &FrenetApparatus, r: f64, r_prime: f64) -> Result<Vec4> {
    if a.k3.abs() < K_FLOOR {
        return Err(Error::CurvatureVanishes { index: 3, s: a.s });
    }
    Ok(a.t - a.b1 * (a.eps2 * r) + a.b2 * (a.eps1 * a.eps2 * r_prime / a.k3))
}

/// Axis samples on the full grid.
pub fn axis_field(field: &FrameField) -> Result<Vec<Vec4>> {
    let (r, rp) = ratio_series(field)?;
    field
        .apparatus
        .iter()
        .enumerate()
        .map(|(i, a)| axis_vector(a, r[i], rp[i]))
        .collect()
}

/// Sup of euclid_norm(dU/ds) over the interior, the constancy of g(T,U),
/// and the pointwise norms (full grid).
pub fn axis_residual(field: &FrameField, axis: &[Vec4]) -> Result<(f64, f64, Vec<f64>)> {
    let up = derivative_field(axis, field.grid.h, 1, field_stride(field))?;
    let pointwise: Vec<f64> = up.iter().map(|v| v.euclid_norm()).collect();
    let sup = interior_sup(field, &pointwise);
    let tu: Vec<f64> = field
        .apparatus
        .iter()
        .zip(axis)
        .map(|(a, u)| a.t.inner(u))
        .collect();
    let spread = constancy_statistic(&tu[stat_range(field)])?;
    Ok((sup, spread, pointwise))
}

/// f = r'/k3 per point and the residual of the closure condition
/// f' = eps1 k3 r. Both hold simultaneously exactly on helices.
pub fn f_function_check(field: &FrameField) -> Result<(Vec<f64>, f64)> {
    let (r, rp) = ratio_series(field)?;
    let f: Vec<f64> = field
        .apparatus
        .iter()
        .enumerate()
        .map(|(i, a)| rp[i] / a.k3)
        .collect();
    let fp = derivative_field(&f, field.grid.h, 1, field_stride(field))?;
    let res: Vec<f64> = field
        .apparatus
        .iter()
        .enumerate()
        .map(|(i, a)| fp[i] - a.eps1 * a.k3 * r[i])
        .collect();
    Ok((f, interior_sup(field, &res)))
}

/// Residual of gamma'' - (k3'/k3) gamma' - eps1 k3^2 gamma = 0 with
/// gamma = eps2 g(U, B2), plus the residual of the coefficient relation
/// beta = -eps2 r alpha where alpha = g(U,T) and beta = -eps1 eps2 g(U,B1).
pub fn gamma_ode_check(field: &FrameField, axis: &[Vec4]) -> Result<(f64, f64)> {
    let h = field.grid.h;
    let stride = field_stride(field);
    let (eps1, eps2) = field.eps();
    let gamma: Vec<f64> = field
        .apparatus
        .iter()
        .zip(axis)
        .map(|(a, u)| eps2 * u.inner(&a.b2))
        .collect();
    let gp = derivative_field(&gamma, h, 1, stride)?;
    let gpp = derivative_field(&gamma, h, 2, stride)?;
    let k3: Vec<f64> = field.apparatus.iter().map(|a| a.k3).collect();
    let k3p = derivative_field(&k3, h, 1, stride)?;
    let ode: Vec<f64> = (0..field.grid.n)
        .map(|i| gpp[i] - (k3p[i] / k3[i]) * gp[i] - eps1 * k3[i] * k3[i] * gamma[i])
        .collect();

    let (r, _) = ratio_series(field)?;
    let beta_res: Vec<f64> = field
        .apparatus
        .iter()
        .zip(axis)
        .enumerate()
        .map(|(i, (a, u))| {
            let alpha = u.inner(&a.t);
            let beta = -eps1 * eps2 * u.inner(&a.b1);
            beta - (-eps2 * r[i] * alpha)
        })
        .collect();
    Ok((interior_sup(field, &ode), interior_sup(field, &beta_res)))
}

/// Least squares of r on {eta(theta), mu(theta)} over the interior.
/// Residual is RMS misfit scaled by max(1, max|r|).
pub fn fit_integral_characterization(field: &FrameField) -> Result<(f64, f64, f64)> {
    let (eps1, _) = field.eps();
    let (r, _) = ratio_series(field)?;
    let theta = theta_series(field)?;
    let idx = stat_range(field);
    if idx.len() < 10 {
        return Err(Error::GridTooShort { needed: 10, got: idx.len() });
    }
    let range = theta[idx.end - 1] - theta[idx.start];
    let (mut a11, mut a12, mut a22, mut b1, mut b2) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for i in idx.clone() {
        let (e, m) = eta_mu(eps1, theta[i]);
        a11 += e * e;
        a12 += e * m;
        a22 += m * m;
        b1 += e * r[i];
        b2 += m * r[i];
    }
    let det = a11 * a22 - a12 * a12;
    let tr = a11 + a22;
    let disc = (tr * tr / 4.0 - det).max(0.0).sqrt();
    let (lmax, lmin) = (tr / 2.0 + disc, tr / 2.0 - disc);
    let cond = if lmin > 0.0 { lmax / lmin } else { f64::INFINITY };
    if cond > 1e8 || (eps1 < 0.0 && range.abs() < 0.5) {
        return Err(Error::IllConditioned { cond });
    }
    let c1 = (b1 * a22 - b2 * a12) / det;
    let c2 = (a11 * b2 - a12 * b1) / det;
    let mut ss = 0.0;
    let mut rmax = 0.0f64;
    for i in idx.clone() {
        let (e, m) = eta_mu(eps1, theta[i]);
        ss += (r[i] - c1 * e - c2 * m).powi(2);
        rmax = rmax.max(r[i].abs());
    }
    let residual = (ss / idx.len() as f64).sqrt() / rmax.max(1.0);
    Ok((c1, c2, residual))
}

/// m = r eta - f mu and n = -eps1 r mu + f eta per point; both are constant
/// on a helix and reproduce the integral-fit constants (C1, C2).
pub fn mn_constants(field: &FrameField, f: &[f64]) -> Result<(Vec<f64>, Vec<f64>, f64)> {
    let (eps1, _) = field.eps();
    let (r, _) = ratio_series(field)?;
    let theta = theta_series(field)?;
    let mut m = Vec::with_capacity(field.grid.n);
    let mut n = Vec::with_capacity(field.grid.n);
    for i in 0..field.grid.n {
        let (e, mu) = eta_mu(eps1, theta[i]);
        m.push(r[i] * e - f[i] * mu);
        n.push(-eps1 * r[i] * mu + f[i] * e);
    }
    let idx = stat_range(field);
    let spread = constancy_statistic(&m[idx.clone()])?.max(constancy_statistic(&n[idx])?);
    Ok((m, n, spread))
}

/// Log-linear fit ln r = ln D + theta with unit slope enforced; only valid
/// for eps1 = +1 and strictly positive ratio.
pub fn fit_exponential(field: &FrameField) -> Result<(f64, f64)> {
    let (eps1, _) = field.eps();
    if eps1 < 0.0 {
        return Err(Error::WrongEpsilon);
    }
    let (r, _) = ratio_series(field)?;
    let theta = theta_series(field)?;
    let idx = stat_range(field);
    let mut logs = Vec::with_capacity(idx.len());
    for i in idx {
        if r[i] <= 0.0 {
            return Err(Error::NonPositiveRatio);
        }
        logs.push(r[i].ln() - theta[i]);
    }
    let ln_d = logs.iter().sum::<f64>() / logs.len() as f64;
    let residual =
        (logs.iter().map(|v| (v - ln_d).powi(2)).sum::<f64>() / logs.len() as f64).sqrt();
    Ok((ln_d.exp(), residual))
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Run every characterization on a frame field and assemble the report.
/// The verdict needs both the invariant screen and the axis test; constant
/// invariant with a moving axis is flagged as the degenerate non-helix.
pub fn analyze_field(field: &FrameField, tol: &Tolerances) -> Result<(HelixReport, PlotData)> {
    let idx = stat_range(field);
    let (eps1, eps2) = field.eps();

    let invariant = helix_invariant(field)?;
    let invariant_interior = invariant[idx.clone()].to_vec();
    let invariant_spread = constancy_statistic(&invariant_interior)?;
    let m_value = mean(&invariant_interior);

    let axis = axis_field(field)?;
    let (axis_res, tangent_axis_spread, axis_pointwise) = axis_residual(field, &axis)?;
    let axis_mean = axis[idx.clone()]
        .iter()
        .fold(Vec4::ZERO, |acc, u| acc + *u)
        * (1.0 / idx.len() as f64);
    let axis_sq = axis_mean.inner_sq();
    let axis_class = axis_mean.causal_character(tol.null_tol);
    let axis_unit = if axis_class == CausalCharacter::Null {
        None
    } else {
        axis_mean.normalize().ok()
    };

    let (f, f_residual) = f_function_check(field)?;
    let (gamma_ode_residual, beta_relation_residual) = gamma_ode_check(field, &axis)?;
    let (m, n, mn_spread) = mn_constants(field, &f)?;
    let mn_mean_m = mean(&m[idx.clone()]);
    let mn_mean_n = mean(&n[idx.clone()]);

    let fit = fit_integral_characterization(field);
    let (fit_c1, fit_c2, fit_residual) = match fit {
        Ok((c1, c2, res)) => (Some(c1), Some(c2), Some(res)),
        Err(Error::IllConditioned { .. }) => (None, None, None),
        Err(e) => return Err(e),
    };
    let (fit_d, fit_d_residual) = match fit_exponential(field) {
        Ok((d, res)) => (Some(d), Some(res)),
        Err(Error::WrongEpsilon) | Err(Error::NonPositiveRatio) => (None, None),
        Err(e) => return Err(e),
    };

    let max_curvature = field
        .interior_apparatus()
        .iter()
        .map(|a| a.k1.max(a.k2).max(a.k3.abs()))
        .fold(0.0f64, f64::max);
    let axis_tolerance = tol.tol_u * (1.0 + max_curvature);

    let invariant_ok = invariant_spread <= tol.tol_h;
    let axis_ok = axis_res <= axis_tolerance;
    let verdict = match (invariant_ok, axis_ok) {
        (true, true) => Verdict::Helix,
        (true, false) => Verdict::InvariantConstantNonHelix,
        _ => Verdict::NonHelix,
    };

    let theta = theta_series(field)?;
    let (r, _) = ratio_series(field)?;
    let take = |v: &[f64]| v[idx.clone()].to_vec();
    let plot = PlotData {
        s: take(&field.grid.points().collect::<Vec<_>>()),
        r: take(&r),
        theta: take(&theta),
        invariant: invariant_interior.clone(),
        f: take(&f),
        m: take(&m),
        n: take(&n),
        axis_residual_pointwise: take(&axis_pointwise),
    };

    let report = HelixReport {
        is_helix: verdict == Verdict::Helix,
        verdict,
        eps1,
        eps2,
        s_min: field.grid.start,
        s_max: field.grid.end(),
        h: field.grid.h,
        n_samples: field.grid.n,
        n_interior: idx.len(),
        invariant_samples: invariant_interior,
        invariant_spread,
        m_value,
        axis: axis_mean,
        axis_sq,
        axis_unit,
        axis_class,
        axis_residual: axis_res,
        axis_tolerance,
        tangent_axis_spread,
        f_residual,
        gamma_ode_residual,
        beta_relation_residual,
        fit_c1,
        fit_c2,
        fit_residual,
        fit_d,
        fit_d_residual,
        mn_mean_m,
        mn_mean_n,
        mn_spread,
        tolerances: *tol,
    };
    Ok((report, plot))
}

/// End-to-end detection: reparameterize when needed, reconstruct the frame
/// field, run every characterization.
pub fn detect_helix(curve: &Curve, h: f64, tol: &Tolerances) -> Result<HelixReport> {
    let (report, _) = detect_helix_with_plot(curve, h, tol)?;
    Ok(report)
}

pub fn detect_helix_with_plot(
    curve: &Curve,
    h: f64,
    tol: &Tolerances,
) -> Result<(HelixReport, PlotData)> {
    let field = detection_field(curve, h)?;
    analyze_field(&field, tol)
}

/// The frame field `detect_helix` operates on (reconstruction path).
pub fn detection_field(curve: &Curve, h: f64) -> Result<FrameField> {
    let prepared: Curve = match curve {
        Curve::Analytic(c) => {
            let grid = crate::numerics::UniformGrid::spanning(c.s_min, c.s_max, h);
            let unit = grid
                .points()
                .all(|s| (c.derivative(s, 1).map(|v| v.inner_sq()).unwrap_or(0.0) - 1.0).abs() <= 1e-6);
            if unit {
                curve.clone()
            } else {
                Curve::Sampled(reparameterize_arclength(curve, h)?)
            }
        }
        Curve::Sampled(c) => {
            let certified = c.arclength_certified && unit_speed_deviation(c)? <= 1e-6;
            if certified {
                curve.clone()
            } else {
                Curve::Sampled(reparameterize_arclength(curve, c.grid.h)?)
            }
        }
    };
    compute_frame_field(&prepared, h)
}

/// Plot CSV: `s,r,theta,H,f,m,n,axis_residual_pointwise`, interior rows.
pub fn save_plot_csv(plot: &PlotData, path: &Path) -> Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "s,r,theta,H,f,m,n,axis_residual_pointwise")?;
    for i in 0..plot.s.len() {
        writeln!(
            out,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            plot.s[i],
            plot.r[i],
            plot.theta[i],
            plot.invariant[i],
            plot.f[i],
            plot.m[i],
            plot.n[i],
            plot.axis_residual_pointwise[i],
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::UniformGrid;
    use crate::synthesis::{
        profile_constant, profile_exponential, profile_from_eq21, profile_nonhelix_control,
        synthesize, ControlKind, SynthesisOptions,
    };
    use std::sync::Arc;

    fn grid(s_max: f64, h: f64) -> UniformGrid {
        UniformGrid::spanning(0.0, s_max, h)
    }

    fn w_curve_field() -> FrameField {
        let p = profile_constant(1.0, 1.0, 0.7, 0.5, 0.3, grid(10.0, 1e-3)).unwrap();
        synthesize(&p, Vec4::ZERO, &SynthesisOptions::default()).unwrap().field
    }

    fn cosh_field() -> FrameField {
        let p = profile_from_eq21(
            1.0,
            1.0,
            1.0,
            0.0,
            Arc::new(|_| 1.0),
            Arc::new(|_| 0.5),
            grid(3.0, 1e-3),
        )
        .unwrap();
        synthesize(&p, Vec4::ZERO, &SynthesisOptions::default()).unwrap().field
    }

    fn trig_field() -> FrameField {
        let p = profile_from_eq21(
            -1.0,
            1.0,
            2.0,
            1.0,
            Arc::new(|_| 1.0),
            Arc::new(|_| 0.5),
            grid(2.0, 1e-3),
        )
        .unwrap();
        synthesize(&p, Vec4::ZERO, &SynthesisOptions::default()).unwrap().field
    }

    fn exp_field() -> FrameField {
        let p = profile_exponential(
            1.0,
            Arc::new(|_| 1.0),
            Arc::new(|_| 0.3),
            grid(3.0, 1e-3),
        )
        .unwrap();
        synthesize(&p, Vec4::ZERO, &SynthesisOptions::default()).unwrap().field
    }

    #[test]
    fn invariant_constant_curvatures() {
        let field = w_curve_field();
        let h = helix_invariant(&field).unwrap();
        for v in &h[field.interior.clone()] {
            assert!((v - 1.96).abs() <= 1e-6, "H = {v}");
        }
    }

    #[test]
    fn invariant_identities_on_eq21_and_exponential() {
        // cosh branch: H == C1^2 - C2^2 = 1.
        let field = cosh_field();
        let h = helix_invariant(&field).unwrap();
        for v in &h[field.interior.clone()] {
            assert!((v - 1.0).abs() <= 1e-6, "cosh H = {v}");
        }
        // trig branch: H == C1^2 + C2^2 = 5.
        let field = trig_field();
        let h = helix_invariant(&field).unwrap();
        for v in &h[field.interior.clone()] {
            assert!((v - 5.0).abs() <= 1e-6, "trig H = {v}");
        }
        // exponential branch: H == 0.
        let field = exp_field();
        let h = helix_invariant(&field).unwrap();
        for v in &h[field.interior.clone()] {
            assert!(v.abs() <= 1e-6, "exp H = {v}");
        }
    }

    #[test]
    fn axis_vector_substitution_example() {
        // Constant r with the standard (+1,+1) frame: U = e2 - r e1.
        let a = FrenetApparatus {
            s: 0.0,
            t: Vec4::E2,
            n: Vec4::E3,
            b1: Vec4::E1,
            b2: Vec4::E4,
            k1: 0.7,
            k2: 0.5,
            k3: 0.3,
            eps1: 1.0,
            eps2: 1.0,
        };
        let u = axis_vector(&a, 1.4, 0.0).unwrap();
        assert_eq!(u, Vec4::E2 - Vec4::E1 * 1.4);
        assert!((a.t.inner(&u) - 1.0).abs() <= 1e-15);
    }

    #[test]
    fn axis_residual_discriminates() {
        let field = cosh_field();
        let axis = axis_field(&field).unwrap();
        let (res, tu_spread, _) = axis_residual(&field, &axis).unwrap();
        assert!(res <= 1e-4, "helix axis residual = {res:.3e}");
        assert!(tu_spread <= 1e-6, "g(T,U) spread = {tu_spread:.3e}");

        let field = w_curve_field();
        let axis = axis_field(&field).unwrap();
        let (res, _, _) = axis_residual(&field, &axis).unwrap();
        assert!(res > 1e-1, "W-curve axis residual = {res:.3e}");
    }

    #[test]
    fn f_check_exponential_and_wcurve() {
        // Exponential: f = r, f' = k3 r exactly.
        let field = exp_field();
        let (f, res) = f_function_check(&field).unwrap();
        let (r, _) = ratio_series(&field).unwrap();
        for i in field.interior.clone().step_by(100) {
            assert!((f[i] - r[i]).abs() <= 1e-6);
        }
        assert!(res <= 1e-6, "exp f residual = {res:.3e}");

        // W-curve: f == 0 but eps1 k3 r = 0.3 * 1.4 = 0.42.
        let field = w_curve_field();
        let (_, res) = f_function_check(&field).unwrap();
        assert!((res - 0.42).abs() <= 1e-3, "w_curve f residual = {res}");

        // Trig helix: residual small.
        let field = trig_field();
        let (_, res) = f_function_check(&field).unwrap();
        assert!(res <= 1e-4, "trig f residual = {res:.3e}");
    }

    #[test]
    fn gamma_ode_on_helices() {
        for field in [cosh_field(), trig_field()] {
            let axis = axis_field(&field).unwrap();
            let (ode, beta) = gamma_ode_check(&field, &axis).unwrap();
            assert!(ode <= 1e-2, "gamma residual = {ode:.3e}");
            assert!(beta <= 1e-4, "beta residual = {beta:.3e}");
        }
    }

    #[test]
    fn integral_fit_recovers_constants() {
        let field = cosh_field();
        let (c1, c2, res) = fit_integral_characterization(&field).unwrap();
        assert!((c1 - 1.0).abs() <= 1e-6 && c2.abs() <= 1e-6, "({c1}, {c2})");
        assert!(res <= 1e-8, "res = {res:.3e}");

        let field = trig_field();
        let (c1, c2, res) = fit_integral_characterization(&field).unwrap();
        assert!((c1 - 2.0).abs() <= 1e-6 && (c2 - 1.0).abs() <= 1e-6, "({c1}, {c2})");
        assert!(res <= 1e-8, "res = {res:.3e}");
    }

    #[test]
    fn integral_fit_rejects_linear_theta() {
        let p = profile_nonhelix_control(ControlKind::LinearTheta, grid(5.0, 1e-3)).unwrap();
        let field = synthesize(&p, Vec4::ZERO, &SynthesisOptions::default()).unwrap().field;
        let (_, _, res) = fit_integral_characterization(&field).unwrap();
        assert!(res > 0.05, "linear-theta fit residual = {res}");
        let h = helix_invariant(&field).unwrap();
        let spread = constancy_statistic(&h[field.interior.clone()]).unwrap();
        assert!(spread > 0.1, "H spread = {spread}");
    }

    #[test]
    fn mn_constants_identities() {
        let field = cosh_field();
        let (f, _) = f_function_check(&field).unwrap();
        let (m, n, spread) = mn_constants(&field, &f).unwrap();
        assert!(spread <= 1e-3, "spread = {spread:.3e}");
        assert!((mean(&m[field.interior.clone()]) - 1.0).abs() <= 1e-3);
        assert!(mean(&n[field.interior.clone()]).abs() <= 1e-3);

        let field = trig_field();
        let (f, _) = f_function_check(&field).unwrap();
        let (m, n, _) = mn_constants(&field, &f).unwrap();
        assert!((mean(&m[field.interior.clone()]) - 2.0).abs() <= 1e-3);
        assert!((mean(&n[field.interior.clone()]) - 1.0).abs() <= 1e-3);

        let field = w_curve_field();
        let (f, _) = f_function_check(&field).unwrap();
        let (_, _, spread) = mn_constants(&field, &f).unwrap();
        assert!(spread > 0.1, "w_curve mn spread = {spread}");
    }

    #[test]
    fn exponential_fit() {
        let field = exp_field();
        let (d, res) = fit_exponential(&field).unwrap();
        assert!((d - 1.0).abs() <= 1e-6, "D = {d}");
        assert!(res <= 1e-8, "res = {res:.3e}");

        let p = profile_exponential(
            3.0,
            Arc::new(|_| 1.0),
            Arc::new(|_| 0.3),
            grid(3.0, 1e-3),
        )
        .unwrap();
        let field = synthesize(&p, Vec4::ZERO, &SynthesisOptions::default()).unwrap().field;
        let (d, _) = fit_exponential(&field).unwrap();
        assert!((d - 3.0).abs() <= 1e-5, "D = {d}");

        // cosh ratio is not exponential: clear misfit.
        let (_, res) = fit_exponential(&cosh_field()).unwrap();
        assert!(res > 0.01, "cosh-as-exponential res = {res}");

        assert!(matches!(fit_exponential(&trig_field()), Err(Error::WrongEpsilon)));
    }

    #[test]
    fn analyze_field_verdicts() {
        let tol = Tolerances::carried();
        let (report, _) = analyze_field(&trig_field(), &tol).unwrap();
        assert_eq!(report.verdict, Verdict::Helix);
        assert!((report.m_value - 5.0).abs() <= 1e-6);
        assert!((report.fit_c1.unwrap() - 2.0).abs() <= 1e-3);
        assert!((report.fit_c2.unwrap() - 1.0).abs() <= 1e-3);

        let (report, _) = analyze_field(&w_curve_field(), &tol).unwrap();
        assert_eq!(report.verdict, Verdict::InvariantConstantNonHelix);
        assert!(!report.is_helix);
        assert!(report.invariant_spread <= 1e-6);
        assert!(report.axis_residual > 1e-1);

        let (report, _) = analyze_field(&exp_field(), &tol).unwrap();
        assert_eq!(report.verdict, Verdict::Helix);
        assert!(report.m_value.abs() <= 1e-6);
        assert!((report.fit_d.unwrap() - 1.0).abs() <= 1e-3);
    }

    #[test]
    fn detect_helix_reconstruction_path() {
        let p = profile_from_eq21(
            -1.0,
            1.0,
            2.0,
            1.0,
            Arc::new(|_| 1.0),
            Arc::new(|_| 0.5),
            grid(2.0, 1e-3),
        )
        .unwrap();
        let syn = synthesize(&p, Vec4::ZERO, &SynthesisOptions::default()).unwrap();
        let report = detect_helix(
            &Curve::Sampled(syn.curve),
            1e-3,
            &Tolerances::sampled(),
        )
        .unwrap();
        assert!(report.is_helix, "verdict = {:?}", report.verdict);
        assert!(report.invariant_spread <= 1e-3);
        assert!((report.m_value - 5.0).abs() <= 1e-3, "m = {}", report.m_value);
        assert!((report.fit_c1.unwrap() - 2.0).abs() <= 1e-3);
        assert!((report.fit_c2.unwrap() - 1.0).abs() <= 1e-3);
    }

    #[test]
    fn plot_csv_round_trip() {
        let tol = Tolerances::carried();
        let (_, plot) = analyze_field(&cosh_field(), &tol).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("plot.csv");
        save_plot_csv(&plot, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "s,r,theta,H,f,m,n,axis_residual_pointwise");
        assert_eq!(lines.count(), plot.s.len());
    }
}
