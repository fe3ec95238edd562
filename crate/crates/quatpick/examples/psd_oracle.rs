//! Positivity of quaternionic Hermitian matrices: LDL pivots against the
//! eigenvalues of the complex image.

use quatpick::qlinalg::{complex_embed, default_psd_tol, hermitian_eigenvalues, ldl_psd, HermitianQMatrix, QMatrix};
use quatpick::sampling::{rand_quat, rng};
use quatpick::Quaternion;

fn fmt(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:.3e}")).collect::<Vec<_>>().join(" ")
}

fn main() {
    let mut r = rng(3);
    for (n, rank, shift) in [(4, 4, 0.0), (5, 2, 0.0), (3, 3, 0.8)] {
        let a = QMatrix::from_fn(n, rank, |_, _| rand_quat(&mut r, 1.0));
        let mut h = a.matmul(&a.adjoint()).expect("conformable");
        for d in 0..n {
            h[(d, d)] -= Quaternion::real(shift);
        }
        let h = HermitianQMatrix::symmetrize(h);
        let rep = ldl_psd(&h, default_psd_tol(&h));
        let eig = hermitian_eigenvalues(&complex_embed(h.matrix()));
        println!("n = {n}, rank {rank}, shift {shift}:");
        println!("  LDL: psd {}, rank {}, pivots {}", rep.is_psd, rep.rank, fmt(&rep.pivots));
        println!("  embedded spectrum {}", fmt(&eig));
    }
}
