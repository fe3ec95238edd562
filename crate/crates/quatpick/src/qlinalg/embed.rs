//! Complex adjoint representation `ℍ^{m×n} → ℂ^{2m×2n}`, used as an
//! independent check on quaternionic eigen/PSD questions.

use num_complex::Complex64;

use super::QMatrix;

/// Dense row-major complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix { rows, cols, data: vec![Complex64::new(0.0, 0.0); rows * cols] }
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn matmul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.at(k, j);
                }
            }
        }
        out
    }

    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

/// Writes each entry `q = α + βj` (`α = w + xi`, `β = y + zi`) as the block
/// `[[α, β], [−β̄, ᾱ]]`. The map is a ring homomorphism and sends Hermitian
/// matrices to Hermitian matrices with doubled spectrum.
pub fn complex_embed(a: &QMatrix) -> CMatrix {
    let mut out = CMatrix::zeros(2 * a.rows(), 2 * a.cols());
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let q = a[(i, j)];
            let alpha = Complex64::new(q.w, q.x);
            let beta = Complex64::new(q.y, q.z);
            out.set(2 * i, 2 * j, alpha);
            out.set(2 * i, 2 * j + 1, beta);
            out.set(2 * i + 1, 2 * j, -beta.conj());
            out.set(2 * i + 1, 2 * j + 1, alpha.conj());
        }
    }
    out
}

/// Eigenvalues of a complex Hermitian matrix by cyclic Jacobi sweeps, sorted
/// ascending.
pub fn hermitian_eigenvalues(h: &CMatrix) -> Vec<f64> {
    assert_eq!(h.rows, h.cols, "square matrix required");
    let n = h.rows;
    let mut a = h.clone();
    let total: f64 = a.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if total == 0.0 {
        return vec![0.0; n];
    }
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a.at(i, j).norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * total {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a.at(p, q);
                let mag = apq.norm();
                if mag <= 1e-300 {
                    continue;
                }
                let phase = apq / mag;
                let app = a.at(p, p).re;
                let aqq = a.at(q, q).re;
                let theta = (aqq - app) / (2.0 * mag);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // unitary rotation J = diag(1, e^{-iφ}) · [[c, s], [−s, c]]
                let jpp = Complex64::new(c, 0.0);
                let jpq = Complex64::new(s, 0.0);
                let jqp = -phase.conj() * s;
                let jqq = phase.conj() * c;
                for k in 0..n {
                    let akp = a.at(k, p);
                    let akq = a.at(k, q);
                    a.set(k, p, akp * jpp + akq * jqp);
                    a.set(k, q, akp * jpq + akq * jqq);
                }
                for k in 0..n {
                    let apk = a.at(p, k);
                    let aqk = a.at(q, k);
                    a.set(p, k, jpp.conj() * apk + jqp.conj() * aqk);
                    a.set(q, k, jpq.conj() * apk + jqq.conj() * aqk);
                }
                a.set(p, q, Complex64::new(0.0, 0.0));
                a.set(q, p, Complex64::new(0.0, 0.0));
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a.at(i, i).re).collect();
    ev.sort_by(|x, y| x.partial_cmp(y).unwrap());
    ev
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlinalg::HermitianQMatrix;
    use crate::quat::Quaternion;
    use crate::sampling::{rand_quat, rng};

    fn single(q: Quaternion) -> CMatrix {
        complex_embed(&QMatrix::from_rows(vec![vec![q]]).unwrap())
    }

    #[test]
    fn embeds_units() {
        let c = |re, im| Complex64::new(re, im);
        assert_eq!(single(Quaternion::ONE).data, vec![c(1., 0.), c(0., 0.), c(0., 0.), c(1., 0.)]);
        assert_eq!(single(Quaternion::J).data, vec![c(0., 0.), c(1., 0.), c(-1., 0.), c(0., 0.)]);
    }

    #[test]
    fn embedding_is_multiplicative() {
        let mut r = rng(1);
        let mut worst: f64 = 0.0;
        for _ in 0..100 {
            let a = rand_quat(&mut r, 1.0);
            let b = rand_quat(&mut r, 1.0);
            let lhs = single(a * b);
            let rhs = single(a).matmul(&single(b));
            worst = worst.max(lhs.max_abs_diff(&rhs));
        }
        assert!(worst <= 1e-13, "{worst}");
    }

    #[test]
    fn jacobi_on_known_spectrum() {
        // [[1, i], [−i, 1]] has eigenvalues 0 and 2, each doubled in the embedding
        let one = Quaternion::ONE;
        let m = QMatrix::from_rows(vec![vec![one, Quaternion::I], vec![-Quaternion::I, one]]).unwrap();
        let ev = hermitian_eigenvalues(&complex_embed(&m));
        let expect = [0.0, 0.0, 2.0, 2.0];
        for (a, b) in ev.iter().zip(expect) {
            assert!((a - b).abs() < 1e-13, "{ev:?}");
        }
    }

    #[test]
    fn jacobi_trace_and_frobenius() {
        let mut r = rng(9);
        for n in 1..7 {
            let b = QMatrix::from_fn(n, n, |_, _| rand_quat(&mut r, 1.0));
            let h = HermitianQMatrix::symmetrize(b.add(&b.adjoint()).unwrap());
            let c = complex_embed(h.matrix());
            let ev = hermitian_eigenvalues(&c);
            let trace: f64 = (0..2 * n).map(|i| c.at(i, i).re).sum();
            let frob: f64 = c.data.iter().map(|z| z.norm_sqr()).sum();
            assert!((ev.iter().sum::<f64>() - trace).abs() < 1e-12 * (1.0 + trace.abs()));
            assert!((ev.iter().map(|e| e * e).sum::<f64>() - frob).abs() < 1e-11 * (1.0 + frob));
        }
    }
}
