use serde::Serialize;

use super::{PickData, Problem};
use crate::error::{Error, Result};
use crate::hardy::ks_kernel;
use crate::qlinalg::{ldl_psd, sylvester_unit, HermitianQMatrix, PsdReport, QMatrix};
use crate::quat::Quaternion;
use crate::series::{QSeries, SliceEval, SliceFn};

/// Blaschke factor `(p − a) ⋆ (1 − p ā)^{−⋆}`, the self-map of the ball
/// vanishing at `a`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Blaschke {
    pub a: Quaternion,
}

impl Blaschke {
    /// Coefficients `b₀ = −a`, `bₖ = (1 − |a|²) āᵏ⁻¹`.
    pub fn series(&self, order: usize) -> QSeries {
        crate::sampling::blaschke_series(self.a, order)
    }

    pub fn slice_fn(&self) -> SliceFn {
        SliceFn::custom(*self)
    }
}

impl SliceEval for Blaschke {
    fn eval(&self, p: Quaternion) -> Result<Quaternion> {
        let s = 1.0 - self.a.norm_sqr();
        Ok(-self.a + p * sylvester_unit(p, self.a.conj(), Quaternion::ONE)? * s)
    }

    fn eval_conj(&self, p: Quaternion) -> Result<Quaternion> {
        let s = 1.0 - self.a.norm_sqr();
        Ok(-self.a.conj() + p * sylvester_unit(p, self.a, Quaternion::ONE)? * s)
    }
}

pub fn blaschke(a: Quaternion) -> Result<Blaschke> {
    if !(a.abs() < 1.0) {
        return Err(Error::Domain(format!("Blaschke zero {a} is not inside the unit ball")));
    }
    Ok(Blaschke { a })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SchwarzPickSample {
    pub p: Quaternion,
    pub lhs: f64,
    pub rhs: f64,
}

impl SchwarzPickSample {
    pub fn slack(&self) -> f64 {
        self.rhs - self.lhs
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SchwarzPickReport {
    pub p1: Quaternion,
    pub samples: Vec<SchwarzPickSample>,
    /// `max(lhs − rhs)`; nonpositive when the inequality holds everywhere.
    pub max_violation: f64,
    /// Sample indices with `|lhs − rhs| ≤ 1e−9`.
    pub equality_points: Vec<usize>,
}

/// Both sides of
/// `|(S − s₁) ⋆ (1 − s̄₁ ⋆ S)^{−⋆}| ≤ |(p − p₁) ⋆ (1 − p p̄₁)^{−⋆}|`
/// with `s₁ = S(p₁)`, at every sample.
pub fn schwarz_pick_check(s: &SliceFn, p1: Quaternion, samples: &[Quaternion]) -> Result<SchwarzPickReport> {
    let b = blaschke(p1)?;
    let s1 = s.eval(p1)?;
    let c = SliceFn::constant(s1);
    let num = s.minus(&c);
    let den = SliceFn::constant(Quaternion::ONE).minus(&SliceFn::constant(s1.conj()).star(s));
    let lhs_fn = num.star(&den.star_inverse());

    let mut out = Vec::with_capacity(samples.len());
    let mut max_violation = f64::NEG_INFINITY;
    let mut equality_points = Vec::new();
    for (i, &p) in samples.iter().enumerate() {
        let lhs = lhs_fn.eval(p)?.abs();
        let rhs = b.eval(p)?.abs();
        max_violation = max_violation.max(lhs - rhs);
        if (lhs - rhs).abs() <= 1e-9 {
            equality_points.push(i);
        }
        out.push(SchwarzPickSample { p, lhs, rhs });
    }
    if samples.is_empty() {
        max_violation = 0.0;
    }
    Ok(SchwarzPickReport { p1, samples: out, max_violation, equality_points })
}

/// Block Gram matrix `[[P, B(qⱼ)*], [B(qᵢ), K_S(qᵢ, qⱼ)]]` with
/// `B(q)ᵢ = Σ qᵏ (1 − S(q) s̄ᵢ) p̄ᵢᵏ`; it is PSD whenever `S` is a
/// Schur-class solution.
pub fn bs_gram(
    problem: &Problem,
    pick: &PickData,
    s: &SliceFn,
    points: &[Quaternion],
) -> Result<(HermitianQMatrix, PsdReport)> {
    let n = problem.len();
    let m = points.len();
    let vals = points.iter().map(|&q| s.eval(q)).collect::<Result<Vec<_>>>()?;
    let mut g = QMatrix::zeros(n + m, n + m);
    for i in 0..n {
        for j in 0..n {
            g[(i, j)] = pick.p[(i, j)];
        }
    }
    for (a, &q) in points.iter().enumerate() {
        for i in 0..n {
            let c = Quaternion::ONE - vals[a] * problem.targets()[i].conj();
            let b = sylvester_unit(q, problem.nodes()[i].conj(), c)?;
            g[(n + a, i)] = b;
            g[(i, n + a)] = b.conj();
        }
        for (c, &r) in points.iter().enumerate() {
            g[(n + a, n + c)] = ks_kernel(vals[a], vals[c], q, r)?;
        }
    }
    let h = HermitianQMatrix::symmetrize(g);
    let tol = 1e-12 * (1.0 + h.matrix().max_abs());
    let rep = ldl_psd(&h, tol);
    Ok((h, rep))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::npsolve::{build_pick, lft_solution, theta_build};
    use crate::sampling::{rand_quat, rand_schur, rand_schur_problem, rng};
    use crate::series::DEFAULT_ORDER;

    fn q(w: f64) -> Quaternion {
        Quaternion::real(w)
    }

    #[test]
    fn blaschke_examples() {
        let a = Quaternion::new(0.2, -0.3, 0.1, 0.4);
        let b = blaschke(a).unwrap();
        assert!(b.eval(a).unwrap().abs() < 1e-15);
        let id = blaschke(Quaternion::ZERO).unwrap();
        let p = Quaternion::new(0.3, 0.1, 0.2, -0.4);
        assert!((id.eval(p).unwrap() - p).abs() < 1e-15);
        let v = blaschke(q(0.6)).unwrap().eval(q(0.3)).unwrap();
        assert!((v.re() - (0.3 - 0.6) / (1.0 - 0.18)).abs() < 1e-15);
        assert!(blaschke(q(1.0)).is_err());
    }

    #[test]
    fn blaschke_paths_agree() {
        let mut r = rng(10);
        for _ in 0..50 {
            let a = rand_quat(&mut r, 0.8);
            let b = blaschke(a).unwrap();
            let ser = b.series(DEFAULT_ORDER);
            let p = rand_quat(&mut r, 0.9);
            assert!((b.eval(p).unwrap() - ser.eval(p)).abs() < 1e-10);
            assert!((b.eval_conj(p).unwrap() - ser.conj_series().eval(p)).abs() < 1e-10);
            // star product of the two defining pieces
            let lin = SliceFn::from(QSeries::new(vec![-a, Quaternion::ONE]));
            let den = SliceFn::from(QSeries::new(vec![Quaternion::ONE, -a.conj()]));
            let direct = lin.star(&den.star_inverse()).eval(p).unwrap();
            assert!((direct - b.eval(p).unwrap()).abs() < 1e-13);
            assert!(b.eval(p).unwrap().abs() < 1.0);
        }
    }

    #[test]
    fn schwarz_pick_examples() {
        let mut r = rng(11);
        let samples: Vec<Quaternion> = (0..50).map(|_| rand_quat(&mut r, 0.95)).collect();
        let p1 = Quaternion::new(0.1, 0.3, -0.2, 0.1);
        let rep = schwarz_pick_check(&SliceFn::identity(), p1, &samples).unwrap();
        assert!(rep.max_violation.abs() < 1e-12);
        assert_eq!(rep.equality_points.len(), samples.len());

        let c = Quaternion::new(0.2, 0.1, 0.0, -0.3);
        let rep = schwarz_pick_check(&SliceFn::constant(c), p1, &samples).unwrap();
        assert!(rep.samples.iter().all(|s| s.lhs == 0.0));

        let auto = blaschke(Quaternion::new(-0.2, 0.0, 0.4, 0.1)).unwrap().slice_fn();
        let rep = schwarz_pick_check(&auto, p1, &samples).unwrap();
        assert!(rep.samples.iter().all(|s| (s.lhs - s.rhs).abs() < 1e-9));

        for _ in 0..10 {
            let s = SliceFn::from(rand_schur(&mut r, 0.95, 128));
            let rep = schwarz_pick_check(&s, rand_quat(&mut r, 0.7), &samples).unwrap();
            assert!(rep.max_violation <= 1e-10, "{}", rep.max_violation);
        }
    }

    #[test]
    fn bs_gram_is_positive_for_solutions() {
        let mut r = rng(12);
        for _ in 0..10 {
            let (_, pb) = rand_schur_problem(&mut r, 3, 0.7);
            let pk = build_pick(&pb).unwrap();
            let Ok(th) = theta_build(&pk, 64) else { continue };
            let sol = lft_solution(&th, &QSeries::constant(Quaternion::ZERO)).unwrap();
            let pts: Vec<Quaternion> = (0..4).map(|_| rand_quat(&mut r, 0.9)).collect();
            let (_, rep) = bs_gram(&pb, &pk, &sol.evaluator, &pts).unwrap();
            assert!(rep.min_pivot >= -1e-9, "{}", rep.min_pivot);
        }
        // a non-solution breaks positivity
        let pb = Problem::new(vec![q(0.0), q(0.5)], vec![q(0.0), q(0.5)]).unwrap();
        let pk = build_pick(&pb).unwrap();
        let wrong = SliceFn::constant(q(0.9));
        let (_, rep) = bs_gram(&pb, &pk, &wrong, &[q(0.3), q(-0.4)]).unwrap();
        assert!(!rep.is_psd);
    }
}
