//! Shared numerical kernels: finite differences, cumulative quadrature,
//! explicit Runge-Kutta stepping and constancy statistics.
//!
//! All grids are uniform. Differentiation stencils are fourth-order accurate;
//! near-boundary points fall back to one-sided windows of the same order.

use std::ops::{Add, Mul};

use crate::error::{Error, Result};
use crate::minkowski::Vec4;

/// Elements that can be formed into weighted sums (f64 and Vec4).
pub trait Linear: Copy + Default + Add<Output = Self> + Mul<f64, Output = Self> {}
impl<T> Linear for T where T: Copy + Default + Add<Output = T> + Mul<f64, Output = T> {}

/// Target effective step for strided differentiation. On fine grids the
/// stencil nodes are spread `stride` points apart so that rounding noise in
/// the samples is not amplified by 1/h powers; `stride = round(0.02 / h)`.
pub const FD_STEP_TARGET: f64 = 0.02;

/// Relative deviation allowed when checking grid uniformity.
pub const GRID_UNIFORM_TOL: f64 = 1e-12;

/// A uniform parameter grid s_i = start + i * h, i = 0..n-1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformGrid {
    pub start: f64,
    pub h: f64,
    pub n: usize,
}

impl UniformGrid {
    pub fn new(start: f64, h: f64, n: usize) -> Self {
        assert!(h > 0.0 && n > 0, "grid requires h > 0 and n > 0");
        UniformGrid { start, h, n }
    }

    /// Grid covering [start, end] with spacing as close to `h` as possible
    /// while landing exactly on the endpoints.
    pub fn spanning(start: f64, end: f64, h: f64) -> Self {
        let n = ((end - start) / h).round().max(1.0) as usize + 1;
        UniformGrid::new(start, (end - start) / (n - 1) as f64, n)
    }

    pub fn s(&self, i: usize) -> f64 {
        self.start + i as f64 * self.h
    }

    pub fn end(&self) -> f64 {
        self.s(self.n - 1)
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |i| self.s(i))
    }

    /// Validate that an explicit sample vector is uniform and build the grid.
    pub fn from_samples(s: &[f64]) -> Result<Self> {
        if s.len() < 2 {
            return Err(Error::GridTooShort { needed: 2, got: s.len() });
        }
        let h = s[1] - s[0];
        if h <= 0.0 {
            return Err(Error::NonUniformGrid);
        }
        let scale = h.abs().max(s.iter().fold(0.0f64, |m, v| m.max(v.abs())));
        for i in 1..s.len() {
            let d = s[i] - s[i - 1];
            if (d - h).abs() > GRID_UNIFORM_TOL * scale.max(1.0) {
                return Err(Error::NonUniformGrid);
            }
        }
        Ok(UniformGrid::new(s[0], h, s.len()))
    }
}

/// Values sampled on a uniform grid.
#[derive(Debug, Clone)]
pub struct SampledFunction<T = f64> {
    pub grid: UniformGrid,
    pub values: Vec<T>,
}

impl<T: Linear> SampledFunction<T> {
    pub fn new(grid: UniformGrid, values: Vec<T>) -> Self {
        assert_eq!(grid.n, values.len(), "grid/value length mismatch");
        SampledFunction { grid, values }
    }
}

/// Finite-difference weights for the m-th derivative at `x0` on the nodes
/// `xs` (Fornberg's recurrence). Nodes are in grid-index units; callers
/// divide the result by h^m.
pub fn fd_weights(x0: f64, xs: &[f64], m: usize) -> Vec<f64> {
    let n = xs.len();
    let mut c = vec![vec![0.0f64; m + 1]; n];
    let mut c1 = 1.0;
    let mut c4 = xs[0] - x0;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - x0;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[m]).collect()
}

/// Stride that keeps the effective differentiation step near
/// [`FD_STEP_TARGET`] without starving the grid of stencil nodes.
pub fn auto_stride(h: f64, n: usize) -> usize {
    let by_step = (FD_STEP_TARGET / h).round() as usize;
    let by_grid = ((n.saturating_sub(1)) / 8).max(1);
    by_step.clamp(1, by_grid)
}

fn window_nodes(i: usize, n: usize, order: usize, stride: usize) -> Vec<usize> {
    match order {
        1 => {
            // 5 nodes, symmetric when possible.
            let m = stride.min(i / 2).min((n - 1 - i) / 2);
            if m >= 1 {
                vec![i - 2 * m, i - m, i, i + m, i + 2 * m]
            } else {
                let start = (i as isize - 2).clamp(0, n as isize - 5) as usize;
                (start..start + 5).collect()
            }
        }
        2 => {
            // 6 nodes; choose the more symmetric feasible placement.
            let m_lo = stride.min(i / 2).min((n - 1 - i) / 3);
            let m_hi = stride.min(i / 3).min((n - 1 - i) / 2);
            let (m, lo) = if m_hi > m_lo { (m_hi, 3) } else { (m_lo, 2) };
            if m >= 1 {
                (0..6).map(|k| i + k * m - lo * m).collect()
            } else {
                let start = (i as isize - 2).clamp(0, n as isize - 6) as usize;
                (start..start + 6).collect()
            }
        }
        _ => unreachable!(),
    }
}

/// Differentiate `values` on a uniform grid with spacing `h`.
///
/// `order` is 1 or 2. `stride` spreads the stencil nodes; stride 1 is the
/// classic fourth-order scheme with one-sided boundary stencils.
pub fn derivative_field<T: Linear>(
    values: &[T],
    h: f64,
    order: usize,
    stride: usize,
) -> Result<Vec<T>> {
    if !(1..=2).contains(&order) {
        return Err(Error::OrderUnsupported { order });
    }
    let needed = if order == 1 { 5 } else { 6 };
    let n = values.len();
    if n < needed {
        return Err(Error::GridTooShort { needed, got: n });
    }
    let scale = 1.0 / h.powi(order as i32);
    let mut out = Vec::with_capacity(n);
    let mut cached: Option<(Vec<isize>, Vec<f64>)> = None;
    for i in 0..n {
        let nodes = window_nodes(i, n, order, stride.max(1));
        let offsets: Vec<isize> = nodes.iter().map(|&j| j as isize - i as isize).collect();
        let weights = match &cached {
            Some((offs, w)) if *offs == offsets => w.clone(),
            _ => {
                let xs: Vec<f64> = offsets.iter().map(|&o| o as f64).collect();
                let w = fd_weights(0.0, &xs, order);
                cached = Some((offsets, w.clone()));
                w
            }
        };
        let mut acc = T::default();
        for (&j, &w) in nodes.iter().zip(weights.iter()) {
            acc = acc + values[j] * (w * scale);
        }
        out.push(acc);
    }
    Ok(out)
}

/// First or second derivative of a sampled function on its own grid,
/// fourth-order accurate, one-sided at the boundaries.
pub fn central_difference<T: Linear>(
    f: &SampledFunction<T>,
    order: usize,
) -> Result<SampledFunction<T>> {
    let values = derivative_field(&f.values, f.grid.h, order, 1)?;
    Ok(SampledFunction::new(f.grid, values))
}

/// Cumulative integral with value 0 at the first grid point.
///
/// Each interval is integrated by the local cubic through its four nearest
/// nodes, which keeps the running integral fourth-order accurate and defined
/// at every grid point.
pub fn cumulative_quadrature(f: &SampledFunction<f64>) -> Result<SampledFunction<f64>> {
    let n = f.grid.n;
    if n < 4 {
        return Err(Error::GridTooShort { needed: 4, got: n });
    }
    let h = f.grid.h;
    let v = &f.values;
    let mut out = Vec::with_capacity(n);
    out.push(0.0);
    let mut acc = 0.0;
    for i in 0..n - 1 {
        let inc = if i == 0 {
            h * (9.0 * v[0] + 19.0 * v[1] - 5.0 * v[2] + v[3]) / 24.0
        } else if i == n - 2 {
            h * (v[n - 4] - 5.0 * v[n - 3] + 19.0 * v[n - 2] + 9.0 * v[n - 1]) / 24.0
        } else {
            h * (-v[i - 1] + 13.0 * v[i] + 13.0 * v[i + 1] - v[i + 2]) / 24.0
        };
        acc += inc;
        out.push(acc);
    }
    Ok(SampledFunction::new(f.grid, out))
}

/// Classic fourth-order Runge-Kutta over a uniform grid. The output contains
/// the state at every grid point, starting with `y0`.
pub fn rk4_integrate<F>(mut rhs: F, y0: &[f64], grid: &UniformGrid) -> Result<Vec<Vec<f64>>>
where
    F: FnMut(f64, &[f64]) -> Vec<f64>,
{
    let h = grid.h;
    let dim = y0.len();
    let mut states = Vec::with_capacity(grid.n);
    let mut y = y0.to_vec();
    states.push(y.clone());
    for i in 0..grid.n - 1 {
        let s = grid.s(i);
        let k1 = rhs(s, &y);
        let y2: Vec<f64> = (0..dim).map(|d| y[d] + 0.5 * h * k1[d]).collect();
        let k2 = rhs(s + 0.5 * h, &y2);
        let y3: Vec<f64> = (0..dim).map(|d| y[d] + 0.5 * h * k2[d]).collect();
        let k3 = rhs(s + 0.5 * h, &y3);
        let y4: Vec<f64> = (0..dim).map(|d| y[d] + h * k3[d]).collect();
        let k4 = rhs(s + h, &y4);
        for d in 0..dim {
            y[d] += h / 6.0 * (k1[d] + 2.0 * k2[d] + 2.0 * k3[d] + k4[d]);
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteState { s: grid.s(i + 1) });
        }
        states.push(y.clone());
    }
    Ok(states)
}

/// Scale-aware spread (max - min) / max(1, max |value|). Zero iff all values
/// are equal; sub-unit sequences are judged by absolute spread so that
/// "constant zero" cases are not measured against a meaningless relative scale.
pub fn constancy_statistic(values: &[f64]) -> Result<f64> {
    if values.len() < 2 {
        return Err(Error::EmptyInput);
    }
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    let mut amp = 0.0f64;
    for &v in values {
        min = min.min(v);
        max = max.max(v);
        amp = amp.max(v.abs());
    }
    Ok((max - min) / amp.max(1.0))
}

/// Componentwise access used when differencing Vec4-valued fields.
pub fn vec4_field(values: &[Vec4]) -> Vec<Vec4> {
    values.to_vec()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sampled(start: f64, end: f64, h: f64, f: impl Fn(f64) -> f64) -> SampledFunction<f64> {
        let grid = UniformGrid::spanning(start, end, h);
        let values = grid.points().map(f).collect();
        SampledFunction::new(grid, values)
    }

    #[test]
    fn derivative_exact_on_quartic() {
        // 5-node first-derivative windows are exact on degree <= 4.
        let f = sampled(0.0, 1.0, 0.01, |s| {
            1.0 + s - 2.0 * s.powi(2) + 0.5 * s.powi(3) + 0.25 * s.powi(4)
        });
        let d = central_difference(&f, 1).unwrap();
        for (s, v) in d.grid.points().zip(&d.values) {
            let exact = 1.0 - 4.0 * s + 1.5 * s * s + s.powi(3);
            assert!((v - exact).abs() <= 1e-10, "s={s} err={}", (v - exact).abs());
        }
    }

    #[test]
    fn derivative_of_square_and_constant() {
        let f = sampled(0.0, 1.0, 0.01, |s| s * s);
        let d = central_difference(&f, 1).unwrap();
        for (s, v) in d.grid.points().zip(&d.values) {
            assert!((v - 2.0 * s).abs() <= 1e-10);
        }
        let c = sampled(0.0, 1.0, 0.01, |_| 3.5);
        let dc = central_difference(&c, 1).unwrap();
        assert!(dc.values.iter().all(|v| v.abs() <= 1e-12));
    }

    #[test]
    fn derivative_of_sine() {
        let f = sampled(0.0, 1.0, 1e-3, f64::sin);
        let d = central_difference(&f, 1).unwrap();
        let max_err = d
            .grid
            .points()
            .zip(&d.values)
            .map(|(s, v)| (v - s.cos()).abs())
            .fold(0.0f64, f64::max);
        assert!(max_err <= 1e-11, "max_err = {max_err:.3e}");
    }

    #[test]
    fn second_derivative_of_sine() {
        let f = sampled(0.0, 1.0, 1e-3, f64::sin);
        let d = central_difference(&f, 2).unwrap();
        let max_err = d
            .grid
            .points()
            .zip(&d.values)
            .map(|(s, v)| (v + s.sin()).abs())
            .fold(0.0f64, f64::max);
        assert!(max_err <= 1e-8, "max_err = {max_err:.3e}");
    }

    #[test]
    fn derivative_errors() {
        let short = sampled(0.0, 0.03, 0.01, |s| s);
        assert!(matches!(
            central_difference(&short, 1),
            Err(Error::GridTooShort { .. })
        ));
        let f = sampled(0.0, 1.0, 0.01, |s| s);
        assert!(matches!(
            central_difference(&f, 3),
            Err(Error::OrderUnsupported { order: 3 })
        ));
    }

    #[test]
    fn nonuniform_grid_rejected() {
        let s = vec![0.0, 0.1, 0.2, 0.35, 0.4];
        assert!(matches!(UniformGrid::from_samples(&s), Err(Error::NonUniformGrid)));
        let ok = vec![0.0, 0.1, 0.2, 0.3, 0.4];
        assert!(UniformGrid::from_samples(&ok).is_ok());
    }

    #[test]
    fn cumulative_quadrature_examples() {
        let f = sampled(0.0, 2.0, 0.01, |_| 0.5);
        let q = cumulative_quadrature(&f).unwrap();
        assert!((q.values.last().unwrap() - 1.0).abs() <= 1e-12);
        assert_eq!(q.values[0], 0.0);

        let z = sampled(0.0, 2.0, 0.01, |_| 0.0);
        let qz = cumulative_quadrature(&z).unwrap();
        assert!(qz.values.iter().all(|v| *v == 0.0));

        let lin = sampled(0.0, 1.0, 1e-3, |s| s);
        let ql = cumulative_quadrature(&lin).unwrap();
        assert!((ql.values.last().unwrap() - 0.5).abs() <= 1e-12);
    }

    #[test]
    fn quadrature_of_derivative_recovers_function() {
        let f = sampled(0.0, 2.0, 1e-2, |s| (0.7 * s).sin() + 0.3 * s);
        let d = central_difference(&f, 1).unwrap();
        let q = cumulative_quadrature(&d).unwrap();
        let max_err = q
            .values
            .iter()
            .zip(&f.values)
            .map(|(qi, fi)| (qi - (fi - f.values[0])).abs())
            .fold(0.0f64, f64::max);
        assert!(max_err <= 1e-8, "max_err = {max_err:.3e}");
    }

    #[test]
    fn rk4_constant_and_exponential() {
        let grid = UniformGrid::spanning(0.0, 1.0, 1e-3);
        let states = rk4_integrate(|_, _| vec![0.0], &[2.5], &grid).unwrap();
        assert!(states.iter().all(|y| y[0] == 2.5));

        let states = rk4_integrate(|_, y| vec![y[0]], &[1.0], &grid).unwrap();
        let e = std::f64::consts::E;
        assert!((states.last().unwrap()[0] - e).abs() <= 1e-12);

        let grid10 = UniformGrid::spanning(0.0, 10.0, 1e-2);
        let states = rk4_integrate(|_, y| vec![-y[0]], &[1.0], &grid10).unwrap();
        let exact = (-10.0f64).exp();
        assert!(((states.last().unwrap()[0] - exact) / exact).abs() <= 1e-8);
    }

    #[test]
    fn rk4_fourth_order_convergence() {
        let err = |h: f64| {
            let grid = UniformGrid::spanning(0.0, 1.0, h);
            let states = rk4_integrate(|_, y| vec![y[0]], &[1.0], &grid).unwrap();
            (states.last().unwrap()[0] - std::f64::consts::E).abs()
        };
        let e1 = err(0.02);
        let e2 = err(0.01);
        assert!(e1 / e2 >= 12.0, "ratio = {}", e1 / e2);
    }

    #[test]
    fn rk4_detects_non_finite() {
        let grid = UniformGrid::spanning(0.0, 2.0, 1e-2);
        let res = rk4_integrate(|_, y| vec![y[0] * y[0] * 1e6], &[1.0], &grid);
        assert!(matches!(res, Err(Error::NonFiniteState { .. })));
    }

    #[test]
    fn constancy_statistic_examples() {
        assert_eq!(constancy_statistic(&[5.0, 5.0, 5.0]).unwrap(), 0.0);
        let v = constancy_statistic(&[0.0, 1e-9, -1e-9]).unwrap();
        assert!((v - 2e-9).abs() <= 1e-24);
        let w = constancy_statistic(&[100.0, 101.0]).unwrap();
        assert!((w - 1.0 / 101.0).abs() <= 1e-15);
        assert!(matches!(constancy_statistic(&[1.0]), Err(Error::EmptyInput)));
    }

    #[test]
    fn strided_derivative_matches_on_smooth_data() {
        let grid = UniformGrid::spanning(0.0, 2.0, 1e-3);
        let values: Vec<f64> = grid.points().map(|s| (1.3 * s).cos()).collect();
        let d = derivative_field(&values, grid.h, 1, 20).unwrap();
        for (i, s) in grid.points().enumerate() {
            let exact = -1.3 * (1.3 * s).sin();
            assert!((d[i] - exact).abs() <= 1e-7, "i={i}");
        }
    }
}
