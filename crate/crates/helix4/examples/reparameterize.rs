//! Resample a non-unit-speed curve by pseudo-arclength. The Frenet equations
//! assume g(x', x') = 1, so any analysis of raw data starts here.

use helix4::curve::{reparameterize_arclength, unit_speed_deviation, Curve};
use helix4::presets::build_curve;

fn main() -> helix4::error::Result<()> {
    // Constant speed sqrt(2.08) != 1.
    let curve = build_curve("hyperbolic_circular_nonunit", Some(2.0), None)?;
    if let Curve::Analytic(c) = &curve {
        let v = c.derivative(1.0, 1)?;
        println!("input speed: g(x',x') = {:.6}", v.inner_sq());
    }

    let resampled = reparameterize_arclength(&curve, 1e-3)?;
    println!(
        "resampled to {} unit-speed samples on [0, {:.6}]",
        resampled.points.len(),
        resampled.grid.end()
    );
    println!("max |g(x',x') - 1| after resampling: {:.3e}", unit_speed_deviation(&resampled)?);

    // The uniform output grid ends at the last full step below the curve's
    // total arclength 2 * sqrt(2.08).
    println!("grid covers [0, {:.6}] of the total arclength {:.9}",
        resampled.grid.end() - resampled.grid.start,
        2.0 * 2.08f64.sqrt());
    Ok(())
}
