//! Hardy space of the ball: inner products, Szegő kernel Gram matrices and
//! the kernel of a Schur function.

use quatpick::hardy::{h2_norm_radial, h2_norm_sqr, ks_gram, szego_gram, szego_kernel};
use quatpick::npsolve::blaschke;
use quatpick::quat::ImagUnit;
use quatpick::sampling::{rand_quat, rng};
use quatpick::{Quaternion, Result};

fn main() -> Result<()> {
    let b = blaschke(Quaternion::new(0.3, 0.1, 0.0, -0.2))?;
    let s = b.series(256);
    let radial = h2_norm_radial(&s, 0.999, ImagUnit::J, 4096);
    println!("‖b‖² from coefficients {:.6}, on the slice at r = 0.999 {:.6}", h2_norm_sqr(&s), radial * radial);

    let p = Quaternion::new(0.2, 0.1, -0.3, 0.0);
    let q = Quaternion::new(-0.1, 0.4, 0.0, 0.2);
    println!("k(p, q) = {}", szego_kernel(p, q)?);

    let mut r = rng(4);
    let pts: Vec<Quaternion> = (0..6).map(|_| rand_quat(&mut r, 0.9)).collect();
    let g = szego_gram(&pts)?;
    println!("Szegő Gram min pivot {:.3e}", g.psd(1e-12).min_pivot);
    let ks = ks_gram(&b.slice_fn(), &pts)?;
    println!("K_S Gram for a Blaschke factor: rank {} of {}", ks.psd(1e-10).rank, pts.len());
    Ok(())
}
