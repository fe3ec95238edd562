//! Three nodes on one 2-sphere: the first two determine the third value.

use quatpick::hardy::{kernel_dependence, sphere_representation};
use quatpick::npsolve::{reduce_problem, Problem};
use quatpick::quat::ImagUnit;
use quatpick::Result;

fn main() -> Result<()> {
    let (i, j, k) = (ImagUnit::I.get() * 0.5, ImagUnit::J.get() * 0.5, ImagUnit::K.get() * 0.5);
    println!("identity map forces f(k/2) = {}", sphere_representation(i, i, j, j, k)?);

    let dep = kernel_dependence(&[i, j, k])?;
    println!("Szegő kernels independent: {}; relation {:?}", dep.independent, dep.relation);

    let good = Problem::new(vec![i, j, k], vec![i, j, k])?;
    let red = reduce_problem(&good, 1e-9);
    println!("consistent data: kept {:?}, status {:?}", red.kept, red.status);

    let bad = Problem::new(vec![i, j, k], vec![i, j, i])?;
    println!("inconsistent data: {:?}", reduce_problem(&bad, 1e-9).status);
    Ok(())
}
