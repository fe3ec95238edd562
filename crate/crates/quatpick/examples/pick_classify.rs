//! Building the Pick matrix and classifying a problem.

use quatpick::npsolve::{build_pick, classify, Problem};
use quatpick::{Quaternion, Result};

fn main() -> Result<()> {
    let nodes = vec![Quaternion::new(0.1, 0.2, 0.0, 0.0), Quaternion::new(0.0, 0.3, -0.2, 0.1)];
    let cases = [
        ("contractive data", vec![Quaternion::new(0.05, 0.1, 0.3, 0.0), Quaternion::new(0.0, 0.15, 0.2, 0.05)]),
        ("identity data", nodes.clone()),
        ("too steep", vec![Quaternion::real(-0.9), Quaternion::real(0.9)]),
    ];
    for (name, targets) in cases {
        let pb = Problem::new(nodes.clone(), targets)?;
        let pick = build_pick(&pb)?;
        let c = classify(&pb)?;
        println!("{name}:");
        for i in 0..pick.dim() {
            let row: Vec<String> = (0..pick.dim()).map(|j| format!("{}", pick.p[(i, j)])).collect();
            println!("  [{}]", row.join(", "));
        }
        println!(
            "  Stein residual {:.1e}, solvable {}, determinate {}, rank {}",
            pick.stein_residual, c.solvable, c.determinate, c.rank
        );
    }
    Ok(())
}
