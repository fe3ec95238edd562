//! The Schwarz–Pick inequality for a computed solution, with equality for
//! automorphisms of the ball.

use quatpick::npsolve::{blaschke, build_pick, lft_solution, schwarz_pick_check, theta_build, Problem};
use quatpick::sampling::{rand_quat, rng};
use quatpick::{QSeries, Quaternion, Result};

fn main() -> Result<()> {
    let pb = Problem::new(
        vec![Quaternion::new(0.1, 0.2, 0.0, 0.0), Quaternion::new(0.0, 0.3, -0.2, 0.1)],
        vec![Quaternion::new(0.05, 0.1, 0.3, 0.0), Quaternion::new(0.0, 0.15, 0.2, 0.05)],
    )?;
    let theta = theta_build(&build_pick(&pb)?, 256)?;
    let sol = lft_solution(&theta, &QSeries::constant(Quaternion::ZERO))?;

    let mut r = rng(8);
    let samples: Vec<Quaternion> = (0..1000).map(|_| rand_quat(&mut r, 0.95)).collect();
    let rep = schwarz_pick_check(&sol.evaluator, pb.nodes()[0], &samples)?;
    let tightest = rep.samples.iter().map(|s| s.slack()).fold(f64::INFINITY, f64::min);
    println!("central solution: max violation {:.1e}, smallest slack {tightest:.3e}", rep.max_violation);

    let auto = blaschke(Quaternion::new(-0.2, 0.0, 0.4, 0.1))?.slice_fn();
    let rep = schwarz_pick_check(&auto, pb.nodes()[0], &samples)?;
    println!("automorphism: {} of {} samples at equality", rep.equality_points.len(), samples.len());
    Ok(())
}
