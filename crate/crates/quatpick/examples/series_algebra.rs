//! Left power series: star products, conjugates, star inverses, and their
//! pointwise counterparts.

use quatpick::series::{star_apply_pointwise, star_inverse_pointwise};
use quatpick::{QSeries, Quaternion, Result, SliceFn};

fn main() -> Result<()> {
    let f = QSeries::new(vec![Quaternion::new(1.0, 0.0, 0.5, 0.0), Quaternion::new(0.0, 0.3, 0.0, -0.2)]);
    let g = QSeries::new(vec![Quaternion::new(0.2, 0.1, 0.0, 0.0), Quaternion::new(0.0, 0.0, 0.0, 0.7)]);

    let fg = f.star_mul(&g);
    let gf = g.star_mul(&f);
    println!("f⋆g = {:?}", fg.coeffs());
    println!("g⋆f = {:?}", gf.coeffs());
    println!("f⋆f^c has real coefficients: max imag {:.1e}", f.star_mul(&f.conj_series()).max_imag());

    let p = Quaternion::new(0.1, 0.2, -0.4, 0.3);
    let pointwise = star_apply_pointwise(&SliceFn::from(g.clone()), &f, p)?;
    println!("(g⋆f)(p): series {} / pointwise {}", gf.eval(p), pointwise);

    let inv = f.star_inverse(64)?;
    println!("f^(-⋆)(p): series {} / pointwise {}", inv.eval(p), star_inverse_pointwise(&f, p)?);
    println!("f⋆f^(-⋆) - 1 = {:.1e}", f.star_mul_to(&inv, 64).sub(&QSeries::constant(Quaternion::ONE)).max_coeff());
    Ok(())
}
