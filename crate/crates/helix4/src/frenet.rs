//! Frenet apparatus {T, N, B1, B2; k1, k2, k3; eps1, eps2} of a spacelike
//! curve, reconstructed either from exact derivatives (analytic curves) or
//! from finite differences of position samples.
//!
//! Frame equations:
//!   T'  =  k1 N
//!   N'  = -eps1 k1 T + k2 B1
//!   B1' =  eps2 k2 N + k3 B2
//!   B2' =  eps1 k3 B1
//! with g(T,T) = 1, g(N,N) = eps1, g(B1,B1) = -eps1 eps2, g(B2,B2) = eps2.

use std::io::Write;
use std::ops::Range;
use std::path::Path;

use crate::curve::{AnalyticCurve, Curve, SampledCurve, UNIT_SPEED_TOL};
use crate::error::{Error, Result};
use crate::minkowski::{det4, orthogonal_complement, Vec4};
use crate::numerics::{auto_stride, derivative_field, UniformGrid};

/// Curvatures below this absolute floor leave the frame undefined.
pub const K_FLOOR: f64 = 1e-6;

/// The frame, curvatures and sign constants at one parameter value.
#[derive(Debug, Clone, Copy)]
pub struct FrenetApparatus {
    pub s: f64,
    pub t: Vec4,
    pub n: Vec4,
    pub b1: Vec4,
    pub b2: Vec4,
    pub k1: f64,
    pub k2: f64,
    /// Signed third curvature; the sign convention is fixed by requiring
    /// frame determinant +1.
    pub k3: f64,
    pub eps1: f64,
    pub eps2: f64,
}

impl FrenetApparatus {
    pub fn frame(&self) -> [Vec4; 4] {
        [self.t, self.n, self.b1, self.b2]
    }

    /// Expected Gram diagonal diag(1, eps1, -eps1*eps2, eps2).
    pub fn gram_target(&self) -> [f64; 4] {
        [1.0, self.eps1, -self.eps1 * self.eps2, self.eps2]
    }

    /// Max deviation of the frame Gram matrix from its target over all ten
    /// independent pairs.
    pub fn gram_deviation(&self) -> f64 {
        let f = self.frame();
        let d = self.gram_target();
        let mut dev = 0.0f64;
        for i in 0..4 {
            for j in i..4 {
                let target = if i == j { d[i] } else { 0.0 };
                dev = dev.max((f[i].inner(&f[j]) - target).abs());
            }
        }
        dev
    }
}

/// Partial apparatus from the first three derivatives; k3 needs one more
/// derivative order and is filled in by the caller.
struct PartialApparatus {
    t: Vec4,
    n: Vec4,
    b1: Vec4,
    b2: Vec4,
    k1: f64,
    k2: f64,
    eps1: f64,
    eps2: f64,
    /// k1' (needed for the exact-k3 route).
    k1p: f64,
}

fn partial_from_derivs(
    s: f64,
    d1: Vec4,
    d2: Vec4,
    d3: Vec4,
    speed_tol: f64,
) -> Result<PartialApparatus> {
    let speed_sq = d1.inner_sq();
    if (speed_sq - 1.0).abs() > speed_tol {
        return Err(Error::NotUnitSpeed { s, speed_sq });
    }
    let t = d1;
    let q2 = d2.inner_sq();
    let k1 = q2.abs().sqrt();
    if k1 < K_FLOOR {
        return Err(Error::CurvatureVanishes { index: 1, s });
    }
    let eps1 = q2.signum();
    let n = d2 * (1.0 / k1);
    let k1p = eps1 * d2.inner(&d3) / k1;
    let np = d3 * (1.0 / k1) + d2 * (-k1p / (k1 * k1));
    let w = np + t * (eps1 * k1);
    let qw = w.inner_sq();
    let k2 = qw.abs().sqrt();
    if k2 < K_FLOOR {
        return Err(Error::CurvatureVanishes { index: 2, s });
    }
    let b1 = w * (1.0 / k2);
    // g(B1,B1) = -eps1*eps2.
    let eps2 = -eps1 * qw.signum();
    if eps1 < 0.0 && eps2 < 0.0 {
        return Err(Error::SignatureRuleViolation);
    }
    let mut b2 = orthogonal_complement(&t, &n, &b1);
    let qb2 = b2.inner_sq();
    if qb2.abs() <= K_FLOOR * K_FLOOR * b2.euclid_sq().max(1.0) {
        return Err(Error::CurvatureVanishes { index: 2, s });
    }
    b2 = b2 * (1.0 / qb2.abs().sqrt());
    if det4(&[t, n, b1, b2]) < 0.0 {
        b2 = -b2;
    }
    Ok(PartialApparatus { t, n, b1, b2, k1, k2, eps1, eps2, k1p })
}

/// Full apparatus at one point from exact derivatives up to fourth order.
pub fn apparatus_from_derivs(s: f64, d: [Vec4; 4]) -> Result<FrenetApparatus> {
    let p = partial_from_derivs(s, d[0], d[1], d[2], UNIT_SPEED_TOL)?;
    let (k1, k1p, eps1) = (p.k1, p.k1p, p.eps1);
    // k1'' from eps1*k1^2 = g(x'',x'').
    let k1pp = (eps1 * (d[2].inner_sq() + d[1].inner(&d[3])) - k1p * k1p) / k1;
    // N'' with N = x''/k1.
    let npp = d[3] * (1.0 / k1)
        + d[2] * (-2.0 * k1p / (k1 * k1))
        + d[1] * (2.0 * k1p * k1p / (k1 * k1 * k1) - k1pp / (k1 * k1));
    // W = k2 B1, so g(B1', B2) = g(W', B2) / k2.
    let wp = npp + (p.t * k1p + d[1] * k1) * eps1;
    let k3 = p.eps2 * wp.inner(&p.b2) / p.k2;
    if k3.abs() < K_FLOOR {
        return Err(Error::CurvatureVanishes { index: 3, s });
    }
    Ok(FrenetApparatus {
        s,
        t: p.t,
        n: p.n,
        b1: p.b1,
        b2: p.b2,
        k1: p.k1,
        k2: p.k2,
        k3,
        eps1: p.eps1,
        eps2: p.eps2,
    })
}

/// Frenet apparatus of an analytic curve at parameter s.
pub fn compute_apparatus(curve: &AnalyticCurve, s: f64) -> Result<FrenetApparatus> {
    let d = [
        curve.derivative(s, 1)?,
        curve.derivative(s, 2)?,
        curve.derivative(s, 3)?,
        curve.derivative(s, 4)?,
    ];
    apparatus_from_derivs(s, d)
}

/// Frenet apparatus at every grid point.
///
/// Statistics downstream must be taken over `interior`, the index range
/// unaffected by one-sided and stride-shrunken boundary stencils.
#[derive(Debug, Clone)]
pub struct FrameField {
    pub grid: UniformGrid,
    pub apparatus: Vec<FrenetApparatus>,
    pub interior: Range<usize>,
    /// True when the frames were carried by an integrator rather than
    /// reconstructed from samples.
    pub carried: bool,
}

impl FrameField {
    pub fn eps(&self) -> (f64, f64) {
        let a = &self.apparatus[self.interior.start];
        (a.eps1, a.eps2)
    }

    pub fn interior_apparatus(&self) -> &[FrenetApparatus] {
        &self.apparatus[self.interior.clone()]
    }

    pub fn stride(&self) -> usize {
        auto_stride(self.grid.h, self.grid.n)
    }

    /// Interior margin: stencil half-width times stride, for cascaded
    /// derivatives of field quantities.
    pub fn margin(grid: &UniformGrid) -> usize {
        4 * auto_stride(grid.h, grid.n) + 2
    }

    pub fn new_carried(grid: UniformGrid, apparatus: Vec<FrenetApparatus>) -> Self {
        let margin = Self::margin(&grid).min(grid.n / 3);
        FrameField { grid, apparatus, interior: margin..grid.n - margin, carried: true }
    }

    fn check_consistency(&self) -> Result<()> {
        let (eps1, eps2) = self.eps();
        for a in self.interior_apparatus() {
            if a.eps1 != eps1 || a.eps2 != eps2 {
                return Err(Error::SignFlip { s: a.s });
            }
            if a.k1 < K_FLOOR {
                return Err(Error::CurvatureVanishes { index: 1, s: a.s });
            }
            if a.k2 < K_FLOOR {
                return Err(Error::CurvatureVanishes { index: 2, s: a.s });
            }
            if a.k3.abs() < K_FLOOR {
                return Err(Error::CurvatureVanishes { index: 3, s: a.s });
            }
        }
        Ok(())
    }

    /// Max Gram deviation over the interior.
    pub fn gram_deviation(&self) -> f64 {
        self.interior_apparatus()
            .iter()
            .map(|a| a.gram_deviation())
            .fold(0.0f64, f64::max)
    }
}

/// Reconstruct the frame field of a curve.
///
/// Analytic curves use exact derivatives on a grid with spacing `h`; sampled
/// curves use finite differences of the positions on their own grid.
pub fn compute_frame_field(curve: &Curve, h: f64) -> Result<FrameField> {
    match curve {
        Curve::Analytic(c) => {
            let grid = UniformGrid::spanning(c.s_min, c.s_max, h);
            let mut apparatus = Vec::with_capacity(grid.n);
            for s in grid.points() {
                apparatus.push(compute_apparatus(c, s)?);
            }
            let margin = FrameField::margin(&grid).min(grid.n / 3);
            let field = FrameField {
                grid,
                apparatus,
                interior: margin..grid.n - margin,
                carried: false,
            };
            field.check_consistency()?;
            Ok(field)
        }
        Curve::Sampled(c) => frame_field_from_samples(c),
    }
}

fn frame_field_from_samples(curve: &SampledCurve) -> Result<FrameField> {
    let grid = curve.grid;
    if grid.n < 9 {
        return Err(Error::GridTooShort { needed: 9, got: grid.n });
    }
    let fields = curve.derivative_fields(3)?;
    let margin = FrameField::margin(&grid).min(grid.n / 3);
    let interior = margin..grid.n - margin;

    let mut partials = Vec::with_capacity(grid.n);
    for i in 0..grid.n {
        let s = grid.s(i);
        // The strided difference of the tangent carries truncation noise well
        // above the curve's true speed deviation; hold it to the reconstructed
        // Gram budget rather than the input unit-speed tolerance.
        let p = partial_from_derivs(s, fields[0][i], fields[1][i], fields[2][i], 1e-4)?;
        partials.push(p);
    }
    // k3 from the differentiated B1 field: k3 = eps2 * g(B1', B2).
    let b1_field: Vec<Vec4> = partials.iter().map(|p| p.b1).collect();
    let b1p = derivative_field(&b1_field, grid.h, 1, auto_stride(grid.h, grid.n))?;
    let apparatus: Vec<FrenetApparatus> = partials
        .into_iter()
        .enumerate()
        .map(|(i, p)| FrenetApparatus {
            s: grid.s(i),
            k3: p.eps2 * b1p[i].inner(&p.b2),
            t: p.t,
            n: p.n,
            b1: p.b1,
            b2: p.b2,
            k1: p.k1,
            k2: p.k2,
            eps1: p.eps1,
            eps2: p.eps2,
        })
        .collect();
    let field = FrameField { grid, apparatus, interior, carried: false };
    field.check_consistency()?;
    Ok(field)
}

/// Pointwise residual of all four Frenet equation rows, with frame
/// derivatives by central differences. Euclidean norm of the stacked rows.
pub fn frenet_residual(field: &FrameField) -> Result<Vec<f64>> {
    let h = field.grid.h;
    let stride = field.stride();
    let collect = |f: fn(&FrenetApparatus) -> Vec4| -> Vec<Vec4> {
        field.apparatus.iter().map(f).collect()
    };
    let t = collect(|a| a.t);
    let n = collect(|a| a.n);
    let b1 = collect(|a| a.b1);
    let b2 = collect(|a| a.b2);
    let tp = derivative_field(&t, h, 1, stride)?;
    let np = derivative_field(&n, h, 1, stride)?;
    let b1p = derivative_field(&b1, h, 1, stride)?;
    let b2p = derivative_field(&b2, h, 1, stride)?;
    let mut out = Vec::with_capacity(field.grid.n);
    for (i, a) in field.apparatus.iter().enumerate() {
        let r1 = tp[i] - a.n * a.k1;
        let r2 = np[i] + a.t * (a.eps1 * a.k1) - a.b1 * a.k2;
        let r3 = b1p[i] - a.n * (a.eps2 * a.k2) - a.b2 * a.k3;
        let r4 = b2p[i] - a.b1 * (a.eps1 * a.k3);
        out.push(
            (r1.euclid_sq() + r2.euclid_sq() + r3.euclid_sq() + r4.euclid_sq()).sqrt(),
        );
    }
    Ok(out)
}

/// Max Frenet residual over the interior.
pub fn frenet_residual_sup(field: &FrameField) -> Result<f64> {
    let r = frenet_residual(field)?;
    Ok(r[field.interior.clone()].iter().fold(0.0f64, |m, v| m.max(*v)))
}

/// Export `s,k1,k2,k3,eps1,eps2` plus the 16 frame components for plotting.
pub fn save_frame_field(field: &FrameField, path: &Path) -> Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    write!(f, "s,k1,k2,k3,eps1,eps2")?;
    for name in ["T", "N", "B1", "B2"] {
        for c in 1..=4 {
            write!(f, ",{name}{c}")?;
        }
    }
    writeln!(f)?;
    for a in &field.apparatus {
        write!(f, "{:.16e},{:.16e},{:.16e},{:.16e},{},{}", a.s, a.k1, a.k2, a.k3, a.eps1, a.eps2)?;
        for v in a.frame() {
            for c in v.as_array() {
                write!(f, ",{c:.16e}")?;
            }
        }
        writeln!(f)?;
    }
    Ok(())
}
