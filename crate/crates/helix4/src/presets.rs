//! Single preset registry shared by the CLI, the verification suite, and
//! the examples, plus the JSON spec loaders for curves and profiles.

use std::path::Path;
use std::sync::Arc;

use serde::Deserialize;

use crate::curve::{AnalyticCurve, Curve};
use crate::error::{Error, Result};
use crate::minkowski::Vec4;
use crate::numerics::UniformGrid;
use crate::synthesis::{
    profile_constant, profile_exponential, profile_from_eq21, profile_nonhelix_control,
    synthesize, ControlKind, CurvatureProfile, SynthesisOptions, SynthesizedCurve,
};

/// Default step and domain for synthesis runs (overridable everywhere).
pub const DEFAULT_H: f64 = 1e-3;
pub const DEFAULT_S_MAX: f64 = 10.0;

#[derive(Debug, Clone)]
pub struct PresetInfo {
    pub name: &'static str,
    pub description: &'static str,
    /// Default domain end; chosen so the fixture stays well-conditioned.
    pub s_max: f64,
}

pub const PRESETS: &[PresetInfo] = &[
    PresetInfo {
        name: "hyperbolic_circular",
        description: "analytic W-curve (a cosh, a sinh, b cos, b sin) with constant \
                      curvatures; the canonical invariant-constant non-helix",
        s_max: 5.0,
    },
    PresetInfo {
        name: "hyperbolic_circular_nonunit",
        description: "same curve with alpha = 1.2: constant speed sqrt(2.08) != 1, \
                      exercises arclength reparameterization",
        s_max: 2.0,
    },
    PresetInfo {
        name: "line",
        description: "straight line; k1 = 0, rejected by frame reconstruction",
        s_max: 1.0,
    },
    PresetInfo {
        name: "trig_helix",
        description: "synthesized helix, eps1 = -1 branch: k1/k2 = 2 cos(theta) + \
                      sin(theta), k2 = 1, k3 = 0.5; invariant 5",
        s_max: 2.0,
    },
    PresetInfo {
        name: "cosh_helix",
        description: "synthesized helix, eps1 = +1 branch: k1/k2 = cosh(theta), \
                      k2 = 1, k3 = 0.5; invariant 1",
        s_max: 3.0,
    },
    PresetInfo {
        name: "exp_helix",
        description: "synthesized degenerate-branch helix: k1/k2 = exp(theta), \
                      k3 = 0.3; invariant 0",
        s_max: 3.0,
    },
    PresetInfo {
        name: "w_curve",
        description: "synthesized constant-curvature control (0.7, 0.5, 0.3): \
                      constant invariant, no fixed axis",
        s_max: 10.0,
    },
    PresetInfo {
        name: "linear_theta",
        description: "synthesized non-helix control: k1/k2 = theta + 1/2, k2 = k3 = 1; \
                      invariant grows quadratically",
        s_max: 5.0,
    },
];

pub fn preset_info(name: &str) -> Result<&'static PresetInfo> {
    PRESETS
        .iter()
        .find(|p| p.name == name)
        .ok_or_else(|| Error::UnknownPreset(name.to_string()))
}

const CONST_ONE: fn(f64) -> f64 = |_| 1.0;

/// Curvature profile behind a synthesized preset.
pub fn preset_profile(name: &str, s_max: f64, h: f64) -> Result<CurvatureProfile> {
    let grid = UniformGrid::spanning(0.0, s_max, h);
    match name {
        "trig_helix" => profile_from_eq21(
            -1.0,
            1.0,
            2.0,
            1.0,
            Arc::new(CONST_ONE),
            Arc::new(|_| 0.5),
            grid,
        ),
        "cosh_helix" => profile_from_eq21(
            1.0,
            1.0,
            1.0,
            0.0,
            Arc::new(CONST_ONE),
            Arc::new(|_| 0.5),
            grid,
        ),
        "exp_helix" => profile_exponential(1.0, Arc::new(CONST_ONE), Arc::new(|_| 0.3), grid),
        "w_curve" => profile_nonhelix_control(ControlKind::WCurve, grid),
        "linear_theta" => profile_nonhelix_control(ControlKind::LinearTheta, grid),
        other => Err(Error::UnknownPreset(other.to_string())),
    }
}

/// Synthesize a preset profile with the standard initial data.
pub fn preset_synthesized(name: &str, s_max: f64, h: f64) -> Result<SynthesizedCurve> {
    let profile = preset_profile(name, s_max, h)?;
    synthesize(&profile, Vec4::ZERO, &SynthesisOptions::default())
}

/// Build the fixture curve for a preset (analytic where available,
/// otherwise synthesized as a certified sampled curve).
pub fn build_curve(name: &str, s_max: Option<f64>, h: Option<f64>) -> Result<Curve> {
    let info = preset_info(name)?;
    let s_max = s_max.unwrap_or(info.s_max);
    let h = h.unwrap_or(DEFAULT_H);
    match name {
        "hyperbolic_circular" => Ok(Curve::Analytic(AnalyticCurve::hyperbolic_circular(
            1.0, 0.6, 1.0, 0.8, 0.0, s_max,
        ))),
        "hyperbolic_circular_nonunit" => Ok(Curve::Analytic(
            AnalyticCurve::hyperbolic_circular(1.0, 1.2, 1.0, 0.8, 0.0, s_max),
        )),
        "line" => Ok(Curve::Analytic(AnalyticCurve::line(
            Vec4::ZERO,
            Vec4::E2,
            0.0,
            s_max,
        ))),
        _ => Ok(Curve::Sampled(preset_synthesized(name, s_max, h)?.curve)),
    }
}

/// Preset spec JSON: `{"preset": <name>, "params": {..}, "s_min": r,
/// "s_max": r, "h": r}`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresetSpec {
    pub preset: String,
    #[serde(default)]
    pub params: serde_json::Map<String, serde_json::Value>,
    pub s_min: Option<f64>,
    pub s_max: Option<f64>,
    pub h: Option<f64>,
}

fn param_f64(
    params: &serde_json::Map<String, serde_json::Value>,
    key: &str,
    default: f64,
) -> Result<f64> {
    match params.get(key) {
        None => Ok(default),
        Some(v) => v
            .as_f64()
            .ok_or_else(|| Error::InvalidSpec(format!("param `{key}` must be a number"))),
    }
}

pub fn load_preset_spec(path: &Path) -> Result<Curve> {
    let text = std::fs::read_to_string(path)?;
    let spec: PresetSpec = serde_json::from_str(&text)?;
    curve_from_preset_spec(&spec)
}

pub fn curve_from_preset_spec(spec: &PresetSpec) -> Result<Curve> {
    let info = preset_info(&spec.preset)?;
    let s_min = spec.s_min.unwrap_or(0.0);
    let s_max = spec.s_max.unwrap_or(info.s_max);
    if s_max <= s_min {
        return Err(Error::InvalidSpec("s_max must exceed s_min".into()));
    }
    match spec.preset.as_str() {
        "hyperbolic_circular" | "hyperbolic_circular_nonunit" => {
            let default_alpha = if spec.preset.ends_with("nonunit") { 1.2 } else { 0.6 };
            let a = param_f64(&spec.params, "a", 1.0)?;
            let alpha = param_f64(&spec.params, "alpha", default_alpha)?;
            let b = param_f64(&spec.params, "b", 1.0)?;
            let beta = param_f64(&spec.params, "beta", 0.8)?;
            Ok(Curve::Analytic(AnalyticCurve::hyperbolic_circular(
                a, alpha, b, beta, s_min, s_max,
            )))
        }
        _ => build_curve(&spec.preset, spec.s_max, spec.h),
    }
}

/// Profile spec JSON: `{"eps1": +-1, "eps2": +-1, "kind": "eq21" |
/// "exponential" | "constant" | "control", "params": {...}, "s_max": r,
/// "h": r}`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileSpec {
    pub eps1: Option<f64>,
    pub eps2: Option<f64>,
    pub kind: String,
    #[serde(default)]
    pub params: serde_json::Map<String, serde_json::Value>,
    pub s_max: Option<f64>,
    pub h: Option<f64>,
}

pub fn load_profile_spec(path: &Path) -> Result<CurvatureProfile> {
    let text = std::fs::read_to_string(path)?;
    let spec: ProfileSpec = serde_json::from_str(&text)?;
    profile_from_spec(&spec)
}

pub fn profile_from_spec(spec: &ProfileSpec) -> Result<CurvatureProfile> {
    let s_max = spec.s_max.unwrap_or(DEFAULT_S_MAX);
    let h = spec.h.unwrap_or(DEFAULT_H);
    if !(s_max > 0.0) || !(h > 0.0) || h > 1e-2 {
        return Err(Error::InvalidSpec(
            "require 0 < h <= 1e-2 and s_max > 0".into(),
        ));
    }
    let grid = UniformGrid::spanning(0.0, s_max, h);
    let eps1 = spec.eps1.unwrap_or(1.0);
    let eps2 = spec.eps2.unwrap_or(1.0);
    // Spec-file validation errors (including the signature rule) are file
    // errors, not runtime domain errors.
    let invalid = |e: Error| match e {
        Error::SignatureRuleViolation => {
            Error::InvalidSpec("SignatureRuleViolation: (eps1, eps2) = (-1, -1) is not \
                                an admissible signature"
                .into())
        }
        other => other,
    };
    match spec.kind.as_str() {
        "eq21" => {
            let c1 = param_f64(&spec.params, "c1", 1.0)?;
            let c2 = param_f64(&spec.params, "c2", 0.0)?;
            let k2 = param_f64(&spec.params, "k2", 1.0)?;
            let k3 = param_f64(&spec.params, "k3", 0.5)?;
            profile_from_eq21(
                eps1,
                eps2,
                c1,
                c2,
                Arc::new(move |_| k2),
                Arc::new(move |_| k3),
                grid,
            )
            .map_err(invalid)
        }
        "exponential" => {
            let d = param_f64(&spec.params, "d", 1.0)?;
            let k2 = param_f64(&spec.params, "k2", 1.0)?;
            let k3 = param_f64(&spec.params, "k3", 0.3)?;
            profile_exponential(d, Arc::new(move |_| k2), Arc::new(move |_| k3), grid)
        }
        "constant" => {
            let k1 = param_f64(&spec.params, "k1", 0.7)?;
            let k2 = param_f64(&spec.params, "k2", 0.5)?;
            let k3 = param_f64(&spec.params, "k3", 0.3)?;
            profile_constant(eps1, eps2, k1, k2, k3, grid).map_err(invalid)
        }
        "control" => {
            let name = spec
                .params
                .get("name")
                .and_then(|v| v.as_str())
                .unwrap_or("w_curve");
            let kind = match name {
                "w_curve" => ControlKind::WCurve,
                "linear_theta" => ControlKind::LinearTheta,
                other => {
                    return Err(Error::InvalidSpec(format!("unknown control `{other}`")))
                }
            };
            profile_nonhelix_control(kind, grid)
        }
        other => Err(Error::InvalidSpec(format!("unknown profile kind `{other}`"))),
    }
}
