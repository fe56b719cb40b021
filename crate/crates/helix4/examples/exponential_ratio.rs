//! The degenerate eps1 = +1 branch: k1/k2 = D e^theta gives a helix whose
//! invariant H vanishes identically because the f-function f = r'/k3
//! coincides with r itself.

use helix4::analysis::{analyze_field, f_function_check, Tolerances};
use helix4::presets::preset_synthesized;

fn main() -> helix4::error::Result<()> {
    let syn = preset_synthesized("exp_helix", 3.0, 1e-3)?;
    let (report, _) = analyze_field(&syn.field, &Tolerances::carried())?;

    println!("verdict: {:?}", report.verdict);
    println!("invariant H: mean {:.3e}, spread {:.3e}", report.m_value, report.invariant_spread);
    println!("g(U,U) of the axis bracket: {:.3e} -> class {:?}", report.axis_sq, report.axis_class);
    println!("fitted D = {:.6} (residual {:.3e})",
        report.fit_d.unwrap(),
        report.fit_d_residual.unwrap());

    // f == r on this branch: check it pointwise.
    let (f, _) = f_function_check(&syn.field)?;
    let worst = syn
        .field
        .interior_apparatus()
        .iter()
        .zip(&f[syn.field.interior.clone()])
        .map(|(a, fi)| (fi - a.k1 / a.k2).abs())
        .fold(0.0f64, f64::max);
    println!("max |f - r| over the interior: {worst:.3e}");
    Ok(())
}
