//! Generate spacelike curves with prescribed curvature functions by
//! integrating the Frenet system, and construct curvature profiles that
//! satisfy (or deliberately violate) the integral helix characterization.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::curve::SampledCurve;
use crate::error::{Error, Result};
use crate::frenet::{FrameField, FrenetApparatus, K_FLOOR};
use crate::minkowski::Vec4;
use crate::numerics::{cumulative_quadrature, rk4_integrate, SampledFunction, UniformGrid};

type ScalarMap = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// How a curvature profile was constructed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Provenance {
    /// k1/k2 = C1*eta(theta) + C2*mu(theta); invariant C1^2 - eps1*C2^2.
    Eq21 { c1: f64, c2: f64 },
    /// k1/k2 = D*exp(theta); the degenerate zero-invariant branch.
    Exponential { d: f64 },
    Constant { k1: f64, k2: f64, k3: f64 },
    Control { name: String },
    Custom,
}

/// Non-helix control profiles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ControlKind {
    /// Constant curvatures (0.7, 0.5, 0.3): constant invariant, no axis.
    WCurve,
    /// k1/k2 = theta with k2 = k3 = 1: invariant grows quadratically.
    LinearTheta,
}

/// Sign constants plus the three curvature functions on a grid.
#[derive(Clone)]
pub struct CurvatureProfile {
    pub eps1: f64,
    pub eps2: f64,
    pub grid: UniformGrid,
    pub provenance: Provenance,
    k1: ScalarMap,
    k2: ScalarMap,
    k3: ScalarMap,
}

impl std::fmt::Debug for CurvatureProfile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CurvatureProfile")
            .field("eps1", &self.eps1)
            .field("eps2", &self.eps2)
            .field("grid", &self.grid)
            .field("provenance", &self.provenance)
            .finish()
    }
}

fn check_signature_rule(eps1: f64, eps2: f64) -> Result<()> {
    if !(eps1 == 1.0 || eps1 == -1.0) || !(eps2 == 1.0 || eps2 == -1.0) {
        return Err(Error::InvalidSpec("eps1 and eps2 must be +1 or -1".into()));
    }
    if eps1 < 0.0 && eps2 < 0.0 {
        return Err(Error::SignatureRuleViolation);
    }
    Ok(())
}

impl CurvatureProfile {
    /// Custom profile; k2 and k3 must stay bounded away from zero on the grid.
    pub fn new(
        eps1: f64,
        eps2: f64,
        grid: UniformGrid,
        k1: ScalarMap,
        k2: ScalarMap,
        k3: ScalarMap,
        provenance: Provenance,
    ) -> Result<Self> {
        check_signature_rule(eps1, eps2)?;
        for s in grid.points() {
            if k2(s).abs() < K_FLOOR {
                return Err(Error::CurvatureVanishes { index: 2, s });
            }
            if k3(s).abs() < K_FLOOR {
                return Err(Error::CurvatureVanishes { index: 3, s });
            }
        }
        Ok(CurvatureProfile { eps1, eps2, grid, provenance, k1, k2, k3 })
    }

    pub fn k1(&self, s: f64) -> f64 {
        (self.k1)(s)
    }
    pub fn k2(&self, s: f64) -> f64 {
        (self.k2)(s)
    }
    pub fn k3(&self, s: f64) -> f64 {
        (self.k3)(s)
    }
}

/// theta(s) = cumulative integral of k3, precomputed on a half-step grid so
/// that every Runge-Kutta stage point hits a table node exactly.
pub struct ThetaTable {
    grid: UniformGrid,
    values: Vec<f64>,
}

impl ThetaTable {
    pub fn build(k3: &ScalarMap, grid: &UniformGrid) -> Result<Self> {
        let half = UniformGrid::new(grid.start, grid.h / 2.0, 2 * grid.n - 1);
        let samples: Vec<f64> = half.points().map(|s| k3(s)).collect();
        let theta = cumulative_quadrature(&SampledFunction::new(half, samples))?;
        Ok(ThetaTable { grid: half, values: theta.values })
    }

    pub fn eval(&self, s: f64) -> f64 {
        let x = (s - self.grid.start) / self.grid.h;
        let i = x.round();
        if (x - i).abs() < 1e-9 {
            let idx = (i as isize).clamp(0, self.grid.n as isize - 1) as usize;
            return self.values[idx];
        }
        // Off-node query: linear interpolation.
        let i0 = (x.floor() as isize).clamp(0, self.grid.n as isize - 2) as usize;
        let t = x - i0 as f64;
        self.values[i0] * (1.0 - t) + self.values[i0 + 1] * t
    }
}

/// k1(s) = k2(s) * (C1*eta(theta) + C2*mu(theta)); eta/mu = cosh/sinh for
/// eps1 = +1 and cos/sin for eps1 = -1. By construction the helix invariant
/// is C1^2 - eps1*C2^2.
pub fn profile_from_eq21(
    eps1: f64,
    eps2: f64,
    c1: f64,
    c2: f64,
    k2: ScalarMap,
    k3: ScalarMap,
    grid: UniformGrid,
) -> Result<CurvatureProfile> {
    check_signature_rule(eps1, eps2)?;
    let theta = Arc::new(ThetaTable::build(&k3, &grid)?);
    let k2_for_k1 = k2.clone();
    let k1: ScalarMap = Arc::new(move |s| {
        let th = theta.eval(s);
        let ratio = if eps1 > 0.0 {
            c1 * th.cosh() + c2 * th.sinh()
        } else {
            c1 * th.cos() + c2 * th.sin()
        };
        k2_for_k1(s) * ratio
    });
    for s in grid.points() {
        if k1(s) <= K_FLOOR {
            return Err(Error::RatioSignViolation { s });
        }
    }
    CurvatureProfile::new(eps1, eps2, grid, k1, k2, k3, Provenance::Eq21 { c1, c2 })
}

/// k1(s) = D * exp(theta) * k2(s) with eps1 fixed to +1; the invariant is
/// identically zero.
pub fn profile_exponential(
    d: f64,
    k2: ScalarMap,
    k3: ScalarMap,
    grid: UniformGrid,
) -> Result<CurvatureProfile> {
    if d <= 0.0 {
        return Err(Error::NonPositiveD);
    }
    let theta = Arc::new(ThetaTable::build(&k3, &grid)?);
    let k2_for_k1 = k2.clone();
    let k1: ScalarMap = Arc::new(move |s| d * theta.eval(s).exp() * k2_for_k1(s));
    CurvatureProfile::new(1.0, 1.0, grid, k1, k2, k3, Provenance::Exponential { d })
}

/// Constant-curvature profile.
pub fn profile_constant(
    eps1: f64,
    eps2: f64,
    k1: f64,
    k2: f64,
    k3: f64,
    grid: UniformGrid,
) -> Result<CurvatureProfile> {
    CurvatureProfile::new(
        eps1,
        eps2,
        grid,
        Arc::new(move |_| k1),
        Arc::new(move |_| k2),
        Arc::new(move |_| k3),
        Provenance::Constant { k1, k2, k3 },
    )
}

/// Negative controls for the detector.
pub fn profile_nonhelix_control(kind: ControlKind, grid: UniformGrid) -> Result<CurvatureProfile> {
    match kind {
        ControlKind::WCurve => {
            let mut p = profile_constant(1.0, 1.0, 0.7, 0.5, 0.3, grid)?;
            p.provenance = Provenance::Control { name: "w_curve".into() };
            Ok(p)
        }
        ControlKind::LinearTheta => {
            // k3 = 1 so theta = s and k1/k2 = s + 1/2; linear in theta, so
            // not in the eta/mu span, while k1 stays bounded away from zero.
            let mut p = CurvatureProfile::new(
                1.0,
                1.0,
                grid,
                Arc::new(|s| s + 0.5),
                Arc::new(|_| 1.0),
                Arc::new(|_| 1.0),
                Provenance::Control { name: "linear_theta".into() },
            )?;
            p.provenance = Provenance::Control { name: "linear_theta".into() };
            Ok(p)
        }
    }
}

/// A coordinate-axis frame with Gram matrix diag(1, eps1, -eps1*eps2, eps2)
/// and determinant +1.
pub fn standard_initial_frame(eps1: f64, eps2: f64) -> Result<[Vec4; 4]> {
    check_signature_rule(eps1, eps2)?;
    Ok(match (eps1 > 0.0, eps2 > 0.0) {
        // (T, N, B1, B2); exactly one vector is timelike (e1).
        (true, true) => [Vec4::E2, Vec4::E3, Vec4::E1, Vec4::E4],
        (true, false) => [Vec4::E2, Vec4::E4, Vec4::E3, Vec4::E1],
        (false, true) => [Vec4::E2, Vec4::E1, Vec4::E4, Vec4::E3],
        (false, false) => unreachable!(),
    })
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SynthesisOptions {
    /// Re-orthonormalize the carried frame (indefinite Gram-Schmidt) every N
    /// steps. Off by default so the run doubles as an integrator drift test.
    pub reorthonormalize_every: Option<usize>,
}

/// A synthesized curve with the frame carried exactly from the integrator.
#[derive(Debug, Clone)]
pub struct SynthesizedCurve {
    pub curve: SampledCurve,
    pub field: FrameField,
    pub eps1: f64,
    pub eps2: f64,
    pub provenance: Provenance,
    /// Max Gram deviation of the carried frame over the whole grid.
    pub gram_drift: f64,
}

fn state_to_vectors(y: &[f64]) -> [Vec4; 5] {
    let mut out = [Vec4::ZERO; 5];
    for (k, v) in out.iter_mut().enumerate() {
        *v = Vec4::new(y[4 * k], y[4 * k + 1], y[4 * k + 2], y[4 * k + 3]);
    }
    out
}

fn vectors_to_state(v: &[Vec4; 5]) -> Vec<f64> {
    v.iter().flat_map(|w| w.as_array()).collect()
}

fn indefinite_gram_schmidt(frame: &mut [Vec4; 4]) {
    for i in 0..4 {
        for j in 0..i {
            let denom = frame[j].inner_sq();
            let coef = frame[i].inner(&frame[j]) / denom;
            frame[i] = frame[i] - frame[j] * coef;
        }
        frame[i] = frame[i] * (1.0 / frame[i].pseudo_norm());
    }
}

/// Integrate the 20-component system (position + four frame vectors):
/// x' = T, T' = k1 N, N' = -eps1 k1 T + k2 B1, B1' = eps2 k2 N + k3 B2,
/// B2' = eps1 k3 B1. The result is unit-speed spacelike by construction.
pub fn synthesize(
    profile: &CurvatureProfile,
    x0: Vec4,
    options: &SynthesisOptions,
) -> Result<SynthesizedCurve> {
    let (eps1, eps2) = (profile.eps1, profile.eps2);
    let frame0 = standard_initial_frame(eps1, eps2)?;
    let grid = profile.grid;
    let y0 = vectors_to_state(&[x0, frame0[0], frame0[1], frame0[2], frame0[3]]);

    let rhs = |s: f64, y: &[f64]| -> Vec<f64> {
        let [_, t, n, b1, b2] = state_to_vectors(y);
        let (k1, k2, k3) = (profile.k1(s), profile.k2(s), profile.k3(s));
        let dx = t;
        let dt = n * k1;
        let dn = t * (-eps1 * k1) + b1 * k2;
        let db1 = n * (eps2 * k2) + b2 * k3;
        let db2 = b1 * (eps1 * k3);
        vectors_to_state(&[dx, dt, dn, db1, db2])
    };

    let states = match options.reorthonormalize_every {
        None => rk4_integrate(rhs, &y0, &grid)?,
        Some(every) => {
            // Stepwise integration with periodic frame cleanup.
            let mut states = Vec::with_capacity(grid.n);
            let mut y = y0.clone();
            states.push(y.clone());
            for i in 0..grid.n - 1 {
                let sub = UniformGrid::new(grid.s(i), grid.h, 2);
                y = rk4_integrate(&rhs, &y, &sub)?.pop().unwrap();
                if every > 0 && (i + 1) % every == 0 {
                    let [x, t, n, b1, b2] = state_to_vectors(&y);
                    let mut frame = [t, n, b1, b2];
                    indefinite_gram_schmidt(&mut frame);
                    y = vectors_to_state(&[x, frame[0], frame[1], frame[2], frame[3]]);
                }
                states.push(y.clone());
            }
            states
        }
    };

    let mut points = Vec::with_capacity(grid.n);
    let mut apparatus = Vec::with_capacity(grid.n);
    for (i, y) in states.iter().enumerate() {
        let s = grid.s(i);
        let [x, t, n, b1, b2] = state_to_vectors(y);
        points.push(x);
        apparatus.push(FrenetApparatus {
            s,
            t,
            n,
            b1,
            b2,
            k1: profile.k1(s),
            k2: profile.k2(s),
            k3: profile.k3(s),
            eps1,
            eps2,
        });
    }
    let gram_drift = apparatus.iter().map(|a| a.gram_deviation()).fold(0.0f64, f64::max);
    let curve = SampledCurve::new(grid, points, true);
    let field = FrameField::new_carried(grid, apparatus);
    Ok(SynthesizedCurve {
        curve,
        field,
        eps1,
        eps2,
        provenance: profile.provenance.clone(),
        gram_drift,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::unit_speed_deviation;

    fn grid(s_max: f64, h: f64) -> UniformGrid {
        UniformGrid::spanning(0.0, s_max, h)
    }

    #[test]
    fn initial_frames_have_expected_gram() {
        let f = standard_initial_frame(1.0, 1.0).unwrap();
        let gram: Vec<f64> = f.iter().map(|v| v.inner_sq()).collect();
        assert_eq!(gram, vec![1.0, 1.0, -1.0, 1.0]);
        let f = standard_initial_frame(-1.0, 1.0).unwrap();
        let gram: Vec<f64> = f.iter().map(|v| v.inner_sq()).collect();
        assert_eq!(gram, vec![1.0, -1.0, 1.0, 1.0]);
        for f in [standard_initial_frame(1.0, 1.0).unwrap(), standard_initial_frame(1.0, -1.0).unwrap(), standard_initial_frame(-1.0, 1.0).unwrap()] {
            assert_eq!(crate::minkowski::det4(&f), 1.0);
        }
        assert!(matches!(
            standard_initial_frame(-1.0, -1.0),
            Err(Error::SignatureRuleViolation)
        ));
    }

    #[test]
    fn zero_curvature_integrates_to_line() {
        // Integrator-level test; the profile validator would reject k2 = 0.
        let g = grid(1.0, 1e-2);
        let frame0 = standard_initial_frame(1.0, 1.0).unwrap();
        let y0 = vectors_to_state(&[Vec4::ZERO, frame0[0], frame0[1], frame0[2], frame0[3]]);
        let states = rk4_integrate(
            |_, y| {
                let [_, t, ..] = state_to_vectors(y);
                vectors_to_state(&[t, Vec4::ZERO, Vec4::ZERO, Vec4::ZERO, Vec4::ZERO])
            },
            &y0,
            &g,
        )
        .unwrap();
        let [x_end, t_end, ..] = state_to_vectors(states.last().unwrap());
        assert!((x_end - frame0[0] * 1.0).euclid_norm() <= 1e-12);
        assert_eq!(t_end, frame0[0]);
    }

    #[test]
    fn constant_profile_synthesis_is_unit_speed() {
        let p = profile_constant(1.0, 1.0, 0.7, 0.5, 0.3, grid(10.0, 1e-3)).unwrap();
        let syn = synthesize(&p, Vec4::ZERO, &SynthesisOptions::default()).unwrap();
        assert!(syn.gram_drift <= 1e-9, "drift = {:.3e}", syn.gram_drift);
        assert!(unit_speed_deviation(&syn.curve).unwrap() <= 1e-8);
    }

    #[test]
    fn eq21_profile_examples() {
        // eps1 = +1, C1 = 1, C2 = 0, k3 = 0.5 -> k1(s) = cosh(0.5 s).
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
        for s in [0.0, 0.5, 1.5, 3.0] {
            assert!((p.k1(s) - (0.5 * s).cosh()).abs() <= 1e-10, "s = {s}");
        }

        // eps1 = -1, C1 = 2, C2 = 1: positive over [0,2]...
        let ok = profile_from_eq21(
            -1.0,
            1.0,
            2.0,
            1.0,
            Arc::new(|_| 1.0),
            Arc::new(|_| 0.5),
            grid(2.0, 1e-3),
        );
        assert!(ok.is_ok());
        // ...but crosses zero over [0,10].
        let bad = profile_from_eq21(
            -1.0,
            1.0,
            2.0,
            1.0,
            Arc::new(|_| 1.0),
            Arc::new(|_| 0.5),
            grid(10.0, 1e-3),
        );
        assert!(matches!(bad, Err(Error::RatioSignViolation { .. })));

        let zero = profile_from_eq21(
            1.0,
            1.0,
            0.0,
            0.0,
            Arc::new(|_| 1.0),
            Arc::new(|_| 0.5),
            grid(2.0, 1e-3),
        );
        assert!(matches!(zero, Err(Error::RatioSignViolation { .. })));
    }

    #[test]
    fn exponential_profile_examples() {
        let p = profile_exponential(
            1.0,
            Arc::new(|_| 1.0),
            Arc::new(|_| 0.3),
            grid(5.0, 1e-3),
        )
        .unwrap();
        for s in [0.0, 1.0, 3.3, 5.0] {
            assert!((p.k1(s) - (0.3 * s).exp()).abs() <= 1e-9, "s = {s}");
        }
        let p3 = profile_exponential(
            3.0,
            Arc::new(|_| 1.0),
            Arc::new(|_| 0.3),
            grid(5.0, 1e-3),
        )
        .unwrap();
        assert!((p3.k1(0.0) - 3.0).abs() <= 1e-12);
        assert!(matches!(
            profile_exponential(0.0, Arc::new(|_| 1.0), Arc::new(|_| 0.3), grid(5.0, 1e-3)),
            Err(Error::NonPositiveD)
        ));
    }

    #[test]
    fn gram_drift_converges_fourth_order() {
        let drift = |h: f64| {
            let p = profile_from_eq21(
                -1.0,
                1.0,
                2.0,
                1.0,
                Arc::new(|_| 1.0),
                Arc::new(|_| 0.5),
                grid(2.0, h),
            )
            .unwrap();
            synthesize(&p, Vec4::ZERO, &SynthesisOptions::default()).unwrap().gram_drift
        };
        let d1 = drift(0.02);
        let d2 = drift(0.01);
        assert!(d1 / d2 >= 12.0, "ratio = {}", d1 / d2);
    }

    #[test]
    fn reorthonormalization_reduces_drift() {
        let p = profile_constant(1.0, 1.0, 0.7, 0.5, 0.3, grid(10.0, 0.02)).unwrap();
        let plain = synthesize(&p, Vec4::ZERO, &SynthesisOptions::default()).unwrap();
        let cleaned = synthesize(
            &p,
            Vec4::ZERO,
            &SynthesisOptions { reorthonormalize_every: Some(10) },
        )
        .unwrap();
        assert!(cleaned.gram_drift <= plain.gram_drift);
    }

    #[test]
    fn controls_are_valid_spacelike_curves() {
        // linear_theta reaches k1 = 5, so it needs the finer step for RK4.
        let w = profile_nonhelix_control(ControlKind::WCurve, grid(10.0, 1e-2)).unwrap();
        let lt = profile_nonhelix_control(ControlKind::LinearTheta, grid(5.0, 1e-3)).unwrap();
        for p in [w, lt] {
            let syn = synthesize(&p, Vec4::ZERO, &SynthesisOptions::default()).unwrap();
            assert!(unit_speed_deviation(&syn.curve).unwrap() <= 1e-6);
        }
    }
}
