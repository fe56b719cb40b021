//! Curve representations: analytic presets carrying exact derivatives up to
//! fourth order, sampled point lists, pseudo-arclength reparameterization and
//! CSV ingestion.

use std::fmt;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::minkowski::{CausalCharacter, Vec4};
use crate::numerics::{
    auto_stride, cumulative_quadrature, derivative_field, SampledFunction, UniformGrid,
};

/// Relative null tolerance used when classifying curve velocities.
pub const CURVE_NULL_TOL: f64 = 1e-9;

/// Maximum allowed |g(x',x') - 1| for a grid to count as pseudo-arclength.
pub const UNIT_SPEED_TOL: f64 = 1e-6;

type CurveMap = Arc<dyn Fn(f64) -> Vec4 + Send + Sync>;

/// A curve given by closed-form position and derivative maps (orders 1-4).
/// The frame reconstruction consumes all four derivative orders.
#[derive(Clone)]
pub struct AnalyticCurve {
    pub name: String,
    pub params: Vec<(String, f64)>,
    pub s_min: f64,
    pub s_max: f64,
    position: CurveMap,
    derivs: [CurveMap; 4],
}

impl fmt::Debug for AnalyticCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AnalyticCurve")
            .field("name", &self.name)
            .field("params", &self.params)
            .field("s_min", &self.s_min)
            .field("s_max", &self.s_max)
            .finish()
    }
}

impl AnalyticCurve {
    pub fn from_maps(
        name: impl Into<String>,
        params: Vec<(String, f64)>,
        s_min: f64,
        s_max: f64,
        position: CurveMap,
        derivs: [CurveMap; 4],
    ) -> Self {
        AnalyticCurve { name: name.into(), params, s_min, s_max, position, derivs }
    }

    fn check_domain(&self, s: f64) -> Result<()> {
        let slack = 1e-9 * (1.0 + self.s_max.abs());
        if s < self.s_min - slack || s > self.s_max + slack {
            return Err(Error::OutOfDomain { s, min: self.s_min, max: self.s_max });
        }
        Ok(())
    }

    pub fn evaluate(&self, s: f64) -> Result<Vec4> {
        self.check_domain(s)?;
        Ok((self.position)(s))
    }

    pub fn derivative(&self, s: f64, order: usize) -> Result<Vec4> {
        if !(1..=4).contains(&order) {
            return Err(Error::OrderUnsupported { order });
        }
        self.check_domain(s)?;
        Ok((self.derivs[order - 1])(s))
    }

    /// x(s) = (a cosh(alpha s), a sinh(alpha s), b cos(beta s), b sin(beta s)).
    ///
    /// Unit speed iff a^2 alpha^2 + b^2 beta^2 = 1. All curvatures are
    /// constant, which makes it the canonical invariant-constant non-helix
    /// control. Requires b^2 beta^4 != a^2 alpha^4 so the principal normal is
    /// non-null.
    pub fn hyperbolic_circular(a: f64, alpha: f64, b: f64, beta: f64, s_min: f64, s_max: f64) -> Self {
        let pos: CurveMap = Arc::new(move |s| {
            Vec4::new(
                a * (alpha * s).cosh(),
                a * (alpha * s).sinh(),
                b * (beta * s).cos(),
                b * (beta * s).sin(),
            )
        });
        let d = |k: u32| -> CurveMap {
            Arc::new(move |s: f64| {
                let (ca, sa) = ((alpha * s).cosh(), (alpha * s).sinh());
                let (cb, sb) = ((beta * s).cos(), (beta * s).sin());
                let pa = a * alpha.powi(k as i32);
                let pb = b * beta.powi(k as i32);
                // Hyperbolic pair alternates (sinh, cosh); circular pair cycles
                // with period 4.
                let (h1, h2) = if k % 2 == 1 { (sa, ca) } else { (ca, sa) };
                let (c1, c2) = match k % 4 {
                    1 => (-sb, cb),
                    2 => (-cb, -sb),
                    3 => (sb, -cb),
                    _ => (cb, sb),
                };
                Vec4::new(pa * h1, pa * h2, pb * c1, pb * c2)
            })
        };
        AnalyticCurve::from_maps(
            "hyperbolic_circular",
            vec![
                ("a".into(), a),
                ("alpha".into(), alpha),
                ("b".into(), b),
                ("beta".into(), beta),
            ],
            s_min,
            s_max,
            pos,
            [d(1), d(2), d(3), d(4)],
        )
    }

    /// Straight line x(s) = p + s * dir; degenerate (k1 = 0) downstream.
    pub fn line(p: Vec4, dir: Vec4, s_min: f64, s_max: f64) -> Self {
        let pos: CurveMap = Arc::new(move |s| p + dir * s);
        let d1: CurveMap = Arc::new(move |_| dir);
        let zero: CurveMap = Arc::new(|_| Vec4::ZERO);
        AnalyticCurve::from_maps(
            "line",
            vec![],
            s_min,
            s_max,
            pos,
            [d1, zero.clone(), zero.clone(), zero],
        )
    }
}

/// A curve sampled on a uniform parameter grid.
#[derive(Debug, Clone)]
pub struct SampledCurve {
    pub grid: UniformGrid,
    pub points: Vec<Vec4>,
    /// True when the grid is certified pseudo-arclength (unit speed).
    pub arclength_certified: bool,
}

impl SampledCurve {
    pub fn new(grid: UniformGrid, points: Vec<Vec4>, arclength_certified: bool) -> Self {
        assert_eq!(grid.n, points.len(), "grid/point length mismatch");
        SampledCurve { grid, points, arclength_certified }
    }

    /// Componentwise derivative field of the given order on the whole grid.
    /// Cascades first/second-derivative stencils; noise-limited strides are
    /// chosen automatically on fine grids.
    pub fn derivative_fields(&self, max_order: usize) -> Result<Vec<Vec<Vec4>>> {
        if !(1..=4).contains(&max_order) {
            return Err(Error::OrderUnsupported { order: max_order });
        }
        let h = self.grid.h;
        let stride = auto_stride(h, self.grid.n);
        let mut fields: Vec<Vec<Vec4>> = Vec::with_capacity(max_order);
        let d1 = derivative_field(&self.points, h, 1, stride)?;
        fields.push(d1);
        if max_order >= 2 {
            fields.push(derivative_field(&self.points, h, 2, stride)?);
        }
        if max_order >= 3 {
            fields.push(derivative_field(&fields[1], h, 1, stride)?);
        }
        if max_order >= 4 {
            fields.push(derivative_field(&fields[1], h, 2, stride)?);
        }
        Ok(fields)
    }
}

/// Either representation, for pipeline entry points.
#[derive(Debug, Clone)]
pub enum Curve {
    Analytic(AnalyticCurve),
    Sampled(SampledCurve),
}

/// Verdict of the causal classification sweep along a curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CurveCausalClass {
    Spacelike,
    /// First violation, with the parameter value where it occurs.
    Violation { character: CausalCharacter, s: f64 },
}

fn velocity_samples(curve: &Curve, h: f64) -> Result<(UniformGrid, Vec<Vec4>)> {
    match curve {
        Curve::Analytic(c) => {
            let grid = UniformGrid::spanning(c.s_min, c.s_max, h);
            let v = grid.points().map(|s| (c.derivs[0])(s)).collect();
            Ok((grid, v))
        }
        Curve::Sampled(c) => {
            let d1 = derivative_field(&c.points, c.grid.h, 1, 1)?;
            Ok((c.grid, d1))
        }
    }
}

/// Sweep the velocity along the curve. Returns `Spacelike` only if every
/// checked point is strictly spacelike.
pub fn causal_class_along(curve: &Curve) -> Result<CurveCausalClass> {
    let h = match curve {
        Curve::Analytic(c) => ((c.s_max - c.s_min) / 512.0).max(1e-6),
        Curve::Sampled(c) => c.grid.h,
    };
    let (grid, vels) = velocity_samples(curve, h)?;
    for (i, v) in vels.iter().enumerate() {
        let ch = v.causal_character(CURVE_NULL_TOL);
        if ch != CausalCharacter::Spacelike || v.euclid_sq() == 0.0 {
            let ch = if v.euclid_sq() == 0.0 { CausalCharacter::Null } else { ch };
            return Ok(CurveCausalClass::Violation { character: ch, s: grid.s(i) });
        }
    }
    Ok(CurveCausalClass::Spacelike)
}

/// Monotone cubic interpolant (Fritsch-Carlson slope limiting), used to
/// invert the arclength function without parameter fold-back.
pub struct MonotoneCubic {
    x: Vec<f64>,
    y: Vec<f64>,
    m: Vec<f64>,
}

impl MonotoneCubic {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Self {
        let n = x.len();
        assert!(n >= 2);
        let mut d = vec![0.0; n - 1];
        for i in 0..n - 1 {
            d[i] = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
        }
        let mut m = vec![0.0; n];
        m[0] = d[0];
        m[n - 1] = d[n - 2];
        for i in 1..n - 1 {
            m[i] = if d[i - 1] * d[i] <= 0.0 { 0.0 } else { 0.5 * (d[i - 1] + d[i]) };
        }
        // Fritsch-Carlson limiter.
        for i in 0..n - 1 {
            if d[i] == 0.0 {
                m[i] = 0.0;
                m[i + 1] = 0.0;
            } else {
                let a = m[i] / d[i];
                let b = m[i + 1] / d[i];
                let r = a * a + b * b;
                if r > 9.0 {
                    let t = 3.0 / r.sqrt();
                    m[i] = t * a * d[i];
                    m[i + 1] = t * b * d[i];
                }
            }
        }
        MonotoneCubic { x, y, m }
    }

    fn segment(&self, xq: f64) -> usize {
        match self.x.binary_search_by(|v| v.partial_cmp(&xq).unwrap()) {
            Ok(i) => i.min(self.x.len() - 2),
            Err(i) => i.saturating_sub(1).min(self.x.len() - 2),
        }
    }

    pub fn eval(&self, xq: f64) -> f64 {
        let i = self.segment(xq);
        let hx = self.x[i + 1] - self.x[i];
        let t = (xq - self.x[i]) / hx;
        let (t2, t3) = (t * t, t * t * t);
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * self.y[i] + h10 * hx * self.m[i] + h01 * self.y[i + 1] + h11 * hx * self.m[i + 1]
    }
}

/// Cubic Hermite resampler for Vec4 samples, with fourth-order finite
/// difference slopes. Used when reparameterizing sampled curves.
struct HermiteResampler {
    grid: UniformGrid,
    points: Vec<Vec4>,
    slopes: Vec<Vec4>,
}

impl HermiteResampler {
    fn new(curve: &SampledCurve) -> Result<Self> {
        let slopes = derivative_field(&curve.points, curve.grid.h, 1, 1)?;
        Ok(HermiteResampler { grid: curve.grid, points: curve.points.clone(), slopes })
    }

    fn eval(&self, t: f64) -> Vec4 {
        let h = self.grid.h;
        let fi = ((t - self.grid.start) / h).floor();
        let i = (fi as isize).clamp(0, self.grid.n as isize - 2) as usize;
        let u = (t - self.grid.s(i)) / h;
        let (u2, u3) = (u * u, u * u * u);
        let h00 = 2.0 * u3 - 3.0 * u2 + 1.0;
        let h10 = u3 - 2.0 * u2 + u;
        let h01 = -2.0 * u3 + 3.0 * u2;
        let h11 = u3 - u2;
        self.points[i] * h00
            + self.slopes[i] * (h10 * h)
            + self.points[i + 1] * h01
            + self.slopes[i + 1] * (h11 * h)
    }
}

const GAUSS5_NODES: [f64; 5] = [
    -0.906179845938664,
    -0.5384693101056831,
    0.0,
    0.5384693101056831,
    0.906179845938664,
];
const GAUSS5_WEIGHTS: [f64; 5] = [
    0.23692688505618908,
    0.47862867049936647,
    0.5688888888888889,
    0.47862867049936647,
    0.23692688505618908,
];

/// Resample a spacelike curve to a uniform pseudo-arclength grid with
/// spacing `target_h`. The output satisfies |g(x',x') - 1| <= 1e-6.
pub fn reparameterize_arclength(curve: &Curve, target_h: f64) -> Result<SampledCurve> {
    match causal_class_along(curve)? {
        CurveCausalClass::Spacelike => {}
        CurveCausalClass::Violation { character, s } => {
            return Err(Error::NotSpacelike { character, s });
        }
    }
    let sample_h = match curve {
        Curve::Analytic(c) => target_h.min((c.s_max - c.s_min) / 16.0),
        Curve::Sampled(c) => c.grid.h,
    };
    let (grid, vels) = velocity_samples(curve, sample_h)?;
    let speeds: Vec<f64> = vels.iter().map(|v| v.inner_sq().sqrt()).collect();
    let speed_fn = SampledFunction::new(grid, speeds.clone());
    let arclen = cumulative_quadrature(&speed_fn)?;
    let total = *arclen.values.last().unwrap();

    let n_out = (total / target_h).floor() as usize + 1;
    if n_out < 2 {
        return Err(Error::GridTooShort { needed: 2, got: n_out });
    }
    let out_grid = UniformGrid::new(0.0, target_h, n_out);

    // Invert L(t) by monotone cubic interpolation of t as a function of L.
    let t_nodes: Vec<f64> = grid.points().collect();
    let inverse = MonotoneCubic::new(arclen.values.clone(), t_nodes.clone());

    let mut params = Vec::with_capacity(n_out);
    for k in 0..n_out {
        let target = out_grid.s(k);
        let mut t = inverse.eval(target).clamp(grid.start, grid.end());
        if let Curve::Analytic(c) = curve {
            // Newton refinement with locally exact arclength increments.
            let j = ((t - grid.start) / grid.h).floor().clamp(0.0, (grid.n - 2) as f64) as usize;
            for _ in 0..4 {
                let len = arclen.values[j] + gauss_arclength(c, grid.s(j), t);
                let v = (c.derivs[0])(t).inner_sq().sqrt();
                let step = (len - target) / v;
                t -= step;
                t = t.clamp(c.s_min, c.s_max);
                if step.abs() < 1e-15 * (1.0 + t.abs()) {
                    break;
                }
            }
        }
        params.push(t);
    }

    let points = match curve {
        Curve::Analytic(c) => params.iter().map(|&t| (c.position)(t)).collect(),
        Curve::Sampled(c) => {
            let resampler = HermiteResampler::new(c)?;
            params.iter().map(|&t| resampler.eval(t)).collect()
        }
    };
    Ok(SampledCurve::new(out_grid, points, true))
}

fn gauss_arclength(c: &AnalyticCurve, a: f64, b: f64) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for (node, w) in GAUSS5_NODES.iter().zip(GAUSS5_WEIGHTS.iter()) {
        let t = mid + half * node;
        acc += w * (c.derivs[0])(t).inner_sq().sqrt();
    }
    acc * half
}

/// Maximum |g(x',x') - 1| along a sampled curve (velocity by finite
/// differences). Used to certify pseudo-arclength grids.
pub fn unit_speed_deviation(curve: &SampledCurve) -> Result<f64> {
    // Stride 1: for a first derivative the h^4 truncation already beats the
    // roundoff floor, and large strides inflate the truncation term.
    let d1 = derivative_field(&curve.points, curve.grid.h, 1, 1)?;
    Ok(d1
        .iter()
        .map(|v| (v.inner_sq() - 1.0).abs())
        .fold(0.0f64, f64::max))
}

const CSV_HEADER: &str = "s,x1,x2,x3,x4";

/// Write a curve as CSV (`s,x1,x2,x3,x4`, 17 significant digits, LF newlines).
pub fn save_curve(curve: &SampledCurve, path: &Path) -> Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(f, "{CSV_HEADER}")?;
    for (s, p) in curve.grid.points().zip(&curve.points) {
        writeln!(f, "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}", s, p.x1, p.x2, p.x3, p.x4)?;
    }
    Ok(())
}

/// Load a curve from CSV. The parameter column must be strictly increasing
/// and uniform; rows must carry exactly four coordinates.
pub fn load_curve(path: &Path) -> Result<SampledCurve> {
    let f = BufReader::new(std::fs::File::open(path)?);
    let mut s_col = Vec::new();
    let mut points = Vec::new();
    for (idx, line) in f.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if idx == 0 {
            if trimmed != CSV_HEADER {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("expected header `{CSV_HEADER}`, got `{trimmed}`"),
                });
            }
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').collect();
        if fields.len() != 5 {
            return Err(Error::DimensionMismatch { line: lineno, got: fields.len() - 1 });
        }
        let mut vals = [0.0f64; 5];
        for (k, field) in fields.iter().enumerate() {
            vals[k] = field.trim().parse().map_err(|e| Error::Parse {
                line: lineno,
                msg: format!("bad number `{field}`: {e}"),
            })?;
        }
        if let Some(&prev) = s_col.last() {
            if vals[0] <= prev {
                return Err(Error::NonMonotoneParameter { line: lineno });
            }
        }
        s_col.push(vals[0]);
        points.push(Vec4::new(vals[1], vals[2], vals[3], vals[4]));
    }
    if s_col.len() < 2 {
        return Err(Error::GridTooShort { needed: 2, got: s_col.len() });
    }
    let grid = UniformGrid::from_samples(&s_col)?;
    Ok(SampledCurve::new(grid, points, false))
}
