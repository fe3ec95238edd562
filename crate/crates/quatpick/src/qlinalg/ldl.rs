use serde::Serialize;

use super::{qmat_inverse, HermitianQMatrix, QMatrix, QVector};
use crate::quat::Quaternion;

/// Outcome of [`ldl_psd`].
#[derive(Clone, Debug, Serialize)]
pub struct PsdReport {
    pub is_psd: bool,
    /// Number of pivots above the tolerance.
    pub rank: usize,
    /// Pivots in elimination order. Stops at the first certificate of
    /// indefiniteness when `is_psd` is false.
    pub pivots: Vec<f64>,
    pub min_pivot: f64,
    /// Index of the pivot that proved the matrix indefinite.
    pub failed_at: Option<usize>,
    /// Unit vectors spanning the numerical kernel (only when `is_psd`).
    pub null_basis: Vec<QVector>,
    pub tol: f64,
}

/// `n · 2⁻⁵⁰ · max|diag|`.
pub fn default_psd_tol(a: &HermitianQMatrix) -> f64 {
    let n = a.dim();
    let d = (0..n).map(|i| a[(i, i)].re().abs()).fold(0.0, f64::max);
    n as f64 * 2f64.powi(-50) * d
}

/// Positive semidefiniteness test by outer-product `A = L D L*` elimination,
/// in natural order, without pivoting.
///
/// Hermitian diagonals are real, so every division is by a real pivot. A
/// pivot in `[−tol, tol]` is treated as zero; it is accepted only when the
/// rest of its column is also negligible, in which case `L* v = e_k` yields a
/// kernel vector.
pub fn ldl_psd(a: &HermitianQMatrix, tol: f64) -> PsdReport {
    let n = a.dim();
    let tol = tol.max(0.0);
    let scale = (0..n).map(|i| a[(i, i)].re().abs()).fold(0.0, f64::max).max(a.matrix().max_abs());
    // |a_ik|² ≤ a_ii·a_kk for PSD matrices bounds what a zero pivot's column may hold
    let col_tol = (tol * scale).sqrt() * 4.0 + tol;

    let mut w = a.matrix().clone();
    let mut l = QMatrix::identity(n);
    let mut pivots = Vec::with_capacity(n);
    let mut zero_cols = Vec::new();
    let mut is_psd = true;
    let mut failed_at = None;
    let mut rank = 0;

    for k in 0..n {
        let d = w[(k, k)].re();
        pivots.push(d);
        if d > tol {
            rank += 1;
            let col: Vec<Quaternion> = (k + 1..n).map(|i| w[(i, k)]).collect();
            for (off, &c) in col.iter().enumerate() {
                l[(k + 1 + off, k)] = c / d;
            }
            for (oi, &ci) in col.iter().enumerate() {
                let i = k + 1 + oi;
                let li = ci / d;
                for j in i..n {
                    let upd = li * w[(k, j)];
                    w[(i, j)] -= upd;
                    if j != i {
                        w[(j, i)] = w[(i, j)].conj();
                    }
                }
                w[(i, i)] = Quaternion::real(w[(i, i)].re());
            }
        } else if d < -tol {
            is_psd = false;
            failed_at = Some(k);
            break;
        } else {
            let resid = (k + 1..n).map(|i| w[(i, k)].abs()).fold(0.0, f64::max);
            if resid > col_tol {
                is_psd = false;
                failed_at = Some(k);
                break;
            }
            zero_cols.push(k);
        }
    }

    let min_pivot = pivots.iter().copied().fold(f64::INFINITY, f64::min);
    let null_basis = if is_psd {
        zero_cols.iter().map(|&k| refine(a, null_from_factor(&l, k), tol, scale)).collect()
    } else {
        Vec::new()
    };

    PsdReport { is_psd, rank, pivots, min_pivot: if n == 0 { 0.0 } else { min_pivot }, failed_at, null_basis, tol }
}

/// Indices chosen by diagonally pivoted elimination: at each step the
/// largest remaining Schur-complement diagonal is taken, stopping once it
/// drops to `tol`. The principal submatrix on the returned indices is
/// positive definite.
pub fn pivoted_rank_indices(a: &HermitianQMatrix, tol: f64) -> Vec<usize> {
    let n = a.dim();
    let mut w = a.matrix().clone();
    let mut remaining: Vec<usize> = (0..n).collect();
    let mut chosen = Vec::new();
    while !remaining.is_empty() {
        let (pos, &k) = remaining
            .iter()
            .enumerate()
            .max_by(|x, y| w[(*x.1, *x.1)].re().total_cmp(&w[(*y.1, *y.1)].re()))
            .expect("non-empty");
        let d = w[(k, k)].re();
        if d <= tol {
            break;
        }
        remaining.swap_remove(pos);
        chosen.push(k);
        for &i in &remaining {
            let li = w[(i, k)] / d;
            for &j in &remaining {
                let upd = li * w[(k, j)];
                w[(i, j)] -= upd;
            }
        }
    }
    chosen
}

/// Solves `L* v = e_k` by back substitution (`L` unit lower triangular).
fn null_from_factor(l: &QMatrix, k: usize) -> QVector {
    let n = l.rows();
    let mut v = vec![Quaternion::ZERO; n];
    v[k] = Quaternion::ONE;
    for j in (0..k).rev() {
        let s: Quaternion = (j + 1..=k).map(|m| l[(m, j)].conj() * v[m]).sum();
        v[j] = -s;
    }
    normalize(v)
}

/// One step of shifted inverse iteration, `(A + σI) w = v`. Keeps `v` when
/// the shifted system cannot be solved or the step does not reduce `|A v|`.
fn refine(a: &HermitianQMatrix, v: QVector, tol: f64, scale: f64) -> QVector {
    let n = a.dim();
    let sigma = tol.max(f64::EPSILON * scale.max(1e-300));
    let mut shifted = a.matrix().clone();
    for i in 0..n {
        shifted[(i, i)] += Quaternion::real(sigma);
    }
    let Ok(inv) = qmat_inverse(&shifted) else { return v };
    let Ok(w) = inv.mul_vec(&v) else { return v };
    let w = normalize(w);
    let resid = |x: &QVector| a.matrix().mul_vec(x).map(|y| norm(&y)).unwrap_or(f64::INFINITY);
    if w.iter().all(|q| q.is_finite()) && resid(&w) <= resid(&v) {
        w
    } else {
        v
    }
}

pub(crate) fn norm(v: &[Quaternion]) -> f64 {
    v.iter().map(|q| q.norm_sqr()).sum::<f64>().sqrt()
}

fn normalize(v: QVector) -> QVector {
    let n = norm(&v);
    if n == 0.0 {
        return v;
    }
    v.into_iter().map(|q| q / n).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlinalg::{complex_embed, hermitian_eigenvalues};
    use crate::sampling::{rand_quat, rng};

    const I: Quaternion = Quaternion::I;

    fn herm(rows: Vec<Vec<Quaternion>>) -> HermitianQMatrix {
        HermitianQMatrix::new(QMatrix::from_rows(rows).unwrap()).unwrap()
    }

    #[test]
    fn rank_one_two_by_two() {
        let one = Quaternion::ONE;
        let a = herm(vec![vec![one, I], vec![-I, one]]);
        let rep = ldl_psd(&a, default_psd_tol(&a));
        assert!(rep.is_psd);
        assert_eq!(rep.rank, 1);
        assert_eq!(rep.null_basis.len(), 1);
        let v = &rep.null_basis[0];
        // proportional to (−i, 1) on the right
        let ratio = v[0] * v[1].inv().unwrap();
        assert!((ratio + I).abs() < 1e-12, "{ratio:?}");
    }

    #[test]
    fn identity_and_negative() {
        let id = HermitianQMatrix::new(QMatrix::identity(3)).unwrap();
        let rep = ldl_psd(&id, default_psd_tol(&id));
        assert!(rep.is_psd);
        assert_eq!(rep.rank, 3);
        assert!(rep.null_basis.is_empty());

        let neg = herm(vec![vec![Quaternion::real(-1.0)]]);
        let rep = ldl_psd(&neg, default_psd_tol(&neg));
        assert!(!rep.is_psd);
        assert_eq!(rep.failed_at, Some(0));
    }

    #[test]
    fn zero_pivot_with_live_column_is_indefinite() {
        let z = Quaternion::ZERO;
        let a = herm(vec![vec![z, Quaternion::ONE], vec![Quaternion::ONE, z]]);
        let rep = ldl_psd(&a, default_psd_tol(&a));
        assert!(!rep.is_psd);
    }

    #[test]
    fn gram_matrices_are_psd_with_exact_kernel() {
        let mut r = rng(11);
        for trial in 0..40 {
            let n = 2 + trial % 5;
            let rank = 1 + trial % n;
            // A = B B*, B n×rank
            let b = QMatrix::from_fn(n, rank, |_, _| rand_quat(&mut r, 1.0));
            let a = HermitianQMatrix::symmetrize(b.matmul(&b.adjoint()).unwrap());
            let tol = 1e-10 * a.matrix().max_abs();
            let rep = ldl_psd(&a, tol);
            assert!(rep.is_psd);
            assert_eq!(rep.rank, rank);
            assert_eq!(rep.null_basis.len(), n - rank);
            for v in &rep.null_basis {
                let q = a.quadratic_form(v).unwrap();
                assert!(q.abs() <= 1e-10 * a.matrix().max_abs());
                let av = a.matrix().mul_vec(v).unwrap();
                assert!(norm(&av) <= 1e-8 * a.matrix().max_abs());
            }
        }
    }

    #[test]
    fn agrees_with_embedded_spectrum() {
        let mut r = rng(5);
        let mut checked = 0;
        while checked < 100 {
            let n = 1 + checked % 6;
            let b = QMatrix::from_fn(n, n, |_, _| rand_quat(&mut r, 1.0));
            let mut a = b.matmul(&b.adjoint()).unwrap();
            let shift = Quaternion::real(r_shift(checked));
            for i in 0..n {
                a[(i, i)] -= shift;
            }
            let a = HermitianQMatrix::symmetrize(a);
            let ev = hermitian_eigenvalues(&complex_embed(a.matrix()));
            let min_ev = ev.iter().copied().fold(f64::INFINITY, f64::min);
            if ev.iter().any(|e| e.abs() < 1e-6) {
                continue;
            }
            let rep = ldl_psd(&a, default_psd_tol(&a));
            assert_eq!(rep.is_psd, min_ev > 0.0, "n={n} min_ev={min_ev}");
            checked += 1;
        }
    }

    fn r_shift(i: usize) -> f64 {
        [0.0, 0.05, 0.2, 0.5][i % 4]
    }

    #[test]
    fn pivoted_selection_finds_rank() {
        let mut r = rng(404);
        for rank in 1..=3 {
            let b = QMatrix::from_fn(5, rank, |_, _| rand_quat(&mut r, 1.0));
            let g = HermitianQMatrix::symmetrize(b.matmul(&b.adjoint()).unwrap());
            let idx = pivoted_rank_indices(&g, 1e-10);
            assert_eq!(idx.len(), rank);
            let sub = g.principal(&idx);
            let rep = ldl_psd(&sub, 1e-10);
            assert!(rep.is_psd && rep.rank == rank);
        }
        let one = Quaternion::ONE;
        let a = herm(vec![vec![one, one], vec![one, one]]);
        assert_eq!(pivoted_rank_indices(&a, 1e-12).len(), 1);
    }
}
