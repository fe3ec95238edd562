//! A problem with a singular Pick matrix has exactly one solution. Two
//! independent constructions recover it.

use quatpick::npsolve::{classify, determinate_solve, extended_gamma_solve, gamma_report};
use quatpick::sampling::{rand_quat, rand_singular_problem, rng};
use quatpick::Result;

fn main() -> Result<()> {
    let mut r = rng(21);
    let (generator, pb) = rand_singular_problem(&mut r, 4, 2, 0.7);
    let c = classify(&pb)?;
    println!("{} nodes, rank {}, determinate {}", pb.len(), c.rank, c.determinate);

    let a = determinate_solve(&pb)?;
    let b = extended_gamma_solve(&pb)?;
    let (rep, _) = gamma_report(&pb, None)?;
    println!("γ = {} (spread over excess nodes {:.1e})", rep.gamma, rep.spread);

    for _ in 0..5 {
        let p = rand_quat(&mut r, 0.7);
        let (va, vb, vg) = (a.eval(p)?, b.eval(p)?, generator.eval(p));
        println!("p = {p}: null vector {:.1e} / extended {:.1e} from generator", (va - vg).abs(), (vb - vg).abs());
    }
    Ok(())
}
