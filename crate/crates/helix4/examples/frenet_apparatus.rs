//! Reconstruct the Frenet apparatus (frame, curvatures, sign constants) of
//! an analytic spacelike curve and check the frame against its target Gram
//! matrix.

use helix4::frenet::compute_frame_field;
use helix4::presets::build_curve;

fn main() -> helix4::error::Result<()> {
    // x(s) = (a cosh(alpha s), a sinh(alpha s), b cos(beta s), b sin(beta s))
    // with parameters chosen so the curve is unit speed.
    let curve = build_curve("hyperbolic_circular", Some(5.0), None)?;
    let field = compute_frame_field(&curve, 1e-3)?;

    let (eps1, eps2) = field.eps();
    println!("sign constants: eps1 = {eps1:+}, eps2 = {eps2:+}");
    println!("max Gram deviation over the interior: {:.3e}", field.gram_deviation());

    println!("\n      s        k1        k2        k3");
    for a in field.interior_apparatus().iter().step_by(800) {
        println!("{:7.3}  {:8.5}  {:8.5}  {:8.5}", a.s, a.k1, a.k2, a.k3);
    }

    // A W-curve: all three curvatures are constant along the curve.
    let mid = &field.apparatus[field.grid.n / 2];
    println!("\nframe at s = {:.3}:", mid.s);
    for (label, v) in [("T ", mid.t), ("N ", mid.n), ("B1", mid.b1), ("B2", mid.b2)] {
        println!("  {label} = {:+.5?}   g(v,v) = {:+.3}", v.as_array(), v.inner_sq());
    }
    Ok(())
}
