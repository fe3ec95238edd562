//! All solutions of an indeterminate problem as linear fractional images of
//! Schur-class parameters.

use quatpick::npsolve::{build_pick, lft_solution, theta_build, theta_j_check, Problem};
use quatpick::sampling::{rand_quat, rand_schur, rng};
use quatpick::{QSeries, Quaternion, Result};

fn main() -> Result<()> {
    let nodes = vec![Quaternion::new(0.1, 0.2, 0.0, 0.0), Quaternion::new(-0.3, 0.0, 0.1, 0.4)];
    let targets = vec![Quaternion::new(0.05, 0.1, 0.3, 0.0), Quaternion::new(-0.15, 0.0, 0.35, 0.2)];
    let pb = Problem::new(nodes, targets)?;
    let theta = theta_build(&build_pick(&pb)?, 256)?;
    println!("Θ(1) = {:?}", theta.eval(Quaternion::ONE)?);

    let mut r = rng(5);
    let pts: Vec<Quaternion> = (0..8).map(|_| rand_quat(&mut r, 0.9)).collect();
    let chk = theta_j_check(&theta, &pts)?;
    println!("J-kernel Gram min pivot {:.2e}, factored vs direct {:.1e}", chk.psd.min_pivot, chk.direct_diff);

    let probe = Quaternion::new(0.2, -0.1, 0.3, 0.0);
    for k in 0..4 {
        let param = if k == 0 { QSeries::constant(Quaternion::ZERO) } else { rand_schur(&mut r, 0.9, 32) };
        let sol = lft_solution(&theta, &param)?;
        println!(
            "parameter {k}: node residual {:.1e}, series residual {:.1e}, S(probe) = {}",
            sol.max_residual(),
            sol.max_series_residual(),
            sol.eval(probe)?
        );
    }
    Ok(())
}
