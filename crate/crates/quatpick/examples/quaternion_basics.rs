//! Quaternion arithmetic, 2-spheres and complex slices.

use quatpick::quat::{same_sphere, similarity, slice_coords, ImagUnit};
use quatpick::{Quaternion, Result};

fn main() -> Result<()> {
    let (i, j) = (ImagUnit::I.get(), ImagUnit::J.get());
    println!("ij = {}, ji = {}", i * j, j * i);

    let p = Quaternion::new(0.3, 0.4, -0.1, 0.2);
    println!("p = {p}, |p| = {:.6}, p⁻¹ = {}", p.abs(), p.inv()?);

    // conjugates h⁻¹ p h stay on the 2-sphere of p
    let h = Quaternion::new(1.0, -2.0, 0.5, 3.0);
    let q = similarity(h, p)?;
    println!("h⁻¹ph = {q}, same sphere: {}", same_sphere(p, q, 1e-12));

    // every point lies on a complex slice x + I y
    let (x, y, unit) = slice_coords(p);
    println!("p = {x:.3} + {y:.3} I with I = {}", unit.get());
    println!("back on the slice: {}", unit.slice_point(x, y));
    Ok(())
}
