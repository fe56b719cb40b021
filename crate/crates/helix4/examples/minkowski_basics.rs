//! Vectors under the indefinite metric g = -dx1^2 + dx2^2 + dx3^2 + dx4^2:
//! causal characters, pseudo-norms, and why residuals need the auxiliary
//! Euclidean norm.

use helix4::minkowski::Vec4;

fn main() {
    let spacelike = Vec4::new(0.0, 3.0, 4.0, 0.0);
    let timelike = Vec4::new(5.0, 3.0, 0.0, 0.0);
    let null = Vec4::new(1.0, 1.0, 0.0, 0.0);

    for (label, v) in [("spacelike", spacelike), ("timelike", timelike), ("null", null)] {
        println!(
            "{label:10} v = {:?}  g(v,v) = {:+.3}  character = {:?}",
            v.as_array(),
            v.inner_sq(),
            v.causal_character(1e-9),
        );
    }

    // The pseudo-norm of a null vector vanishes even though the vector is
    // far from zero; the Euclidean norm is the right scale for residuals.
    println!(
        "\nnull vector: pseudo-norm = {:.3}, Euclidean norm = {:.3}",
        null.pseudo_norm(),
        null.euclid_norm()
    );

    // Normalizing flips nothing: a unit timelike vector has g(v,v) = -1.
    let u = timelike.normalize().unwrap();
    println!("normalized timelike: g(u,u) = {:+.12}", u.inner_sq());

    // Orthogonality in g is not orthogonality in the Euclidean sense.
    let a = Vec4::new(2.0, 1.0, 0.0, 0.0);
    let b = Vec4::new(1.0, 2.0, 0.0, 0.0);
    println!("g(a,b) = {:+.3} (g-orthogonal, Euclidean dot = {:.3})",
        a.inner(&b),
        a.as_array().iter().zip(b.as_array()).map(|(x, y)| x * y).sum::<f64>());
}
