use crate::error::{Error, Result};
use crate::quat::Quaternion;

const BASIS: [Quaternion; 4] = [Quaternion::ONE, Quaternion::I, Quaternion::J, Quaternion::K];

/// Unique solution of `x − a·x·b = c` for `|a|·|b| < 1`.
///
/// `x ↦ a x b` is linear over ℝ⁴, so this solves the 4×4 real system
/// `(I − L_a R_b) x = c`. The solution equals `Σ_k aᵏ c bᵏ`; every two-point
/// kernel in the crate is one of these sums.
pub fn sylvester_unit(a: Quaternion, b: Quaternion, c: Quaternion) -> Result<Quaternion> {
    let r = a.abs() * b.abs();
    if !(r < 1.0) {
        return Err(Error::Divergent(r));
    }
    if c.is_zero() {
        return Ok(Quaternion::ZERO);
    }
    let mut m = [[0.0f64; 5]; 4];
    for (col, &e) in BASIS.iter().enumerate() {
        let img = e - a * e * b;
        let img: [f64; 4] = img.into();
        for row in 0..4 {
            m[row][col] = img[row];
        }
    }
    let rhs: [f64; 4] = c.into();
    for row in 0..4 {
        m[row][4] = rhs[row];
    }
    // the system matrix has singular values in [1 − r, 1 + r]; partial pivoting suffices
    for k in 0..4 {
        let piv = (k..4).max_by(|&i, &j| m[i][k].abs().total_cmp(&m[j][k].abs())).unwrap();
        m.swap(k, piv);
        let d = m[k][k];
        for i in k + 1..4 {
            let f = m[i][k] / d;
            if f != 0.0 {
                for j in k..5 {
                    m[i][j] -= f * m[k][j];
                }
            }
        }
    }
    let mut x = [0.0f64; 4];
    for i in (0..4).rev() {
        let s: f64 = (i + 1..4).map(|j| m[i][j] * x[j]).sum();
        x[i] = (m[i][4] - s) / m[i][i];
    }
    Ok(Quaternion::from(x))
}

/// Partial sum `Σ_{k<terms} aᵏ c bᵏ`.
pub fn sylvester_series(a: Quaternion, b: Quaternion, c: Quaternion, terms: usize) -> Quaternion {
    let mut acc = Quaternion::ZERO;
    let mut left = Quaternion::ONE;
    let mut right = Quaternion::ONE;
    for _ in 0..terms {
        acc += left * c * right;
        left *= a;
        right *= b;
    }
    acc
}
