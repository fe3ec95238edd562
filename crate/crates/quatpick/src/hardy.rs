//! Hardy space `H²(𝔹)` of square-summable left power series.
//!
//! Two-point kernels `Σ pᵏ c q̄ᵏ` are always computed in closed form with
//! [`sylvester_unit`]; truncated series only appear in tests.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::qlinalg::{ldl_psd, sylvester_unit, HermitianQMatrix, PsdReport, QMatrix};
use crate::quat::{same_sphere, slice_coords, sphere_tol, ImagUnit, Quaternion};
use crate::series::{QSeries, SliceEval, SliceFn};

/// Szegő kernel `k(p, q) = Σ pⁿ q̄ⁿ`.
pub fn szego_kernel(p: Quaternion, q: Quaternion) -> Result<Quaternion> {
    sylvester_unit(p, q.conj(), Quaternion::ONE)
}

/// `⟨f, g⟩ = Σ ḡₖ fₖ` over the shared truncation.
pub fn h2_inner(f: &QSeries, g: &QSeries) -> Quaternion {
    let n = f.order().min(g.order());
    (0..=n).map(|k| g.coeff(k).conj() * f.coeff(k)).sum()
}

pub fn h2_norm_sqr(f: &QSeries) -> f64 {
    f.coeffs().iter().map(|c| c.norm_sqr()).sum()
}

/// Mean of `|f(r e^{Iθ})|²` over `m` equispaced angles. For a polynomial of
/// degree below `m/2` this equals `Σ r²ⁿ|fₙ|²` up to rounding, whatever `I`.
pub fn h2_norm_radial(f: &QSeries, r: f64, unit: ImagUnit, m: usize) -> f64 {
    let m = m.max(1);
    let sum: f64 = (0..m)
        .map(|t| {
            let theta = 2.0 * std::f64::consts::PI * t as f64 / m as f64;
            let p = unit.slice_point(r * theta.cos(), r * theta.sin());
            f.eval(p).norm_sqr()
        })
        .sum();
    sum / m as f64
}

/// Default number of quadrature nodes: `max(512, 4·order)`.
pub fn default_quadrature_points(f: &QSeries) -> usize {
    (4 * f.order()).max(512)
}

/// `I − 𝐒ₙ𝐒ₙ*` where `𝐒ₙ` is the `(n+1)×(n+1)` lower triangular Toeplitz
/// matrix of the coefficients `S₀ … Sₙ`.
pub fn toeplitz_defect(s: &QSeries, n: usize) -> HermitianQMatrix {
    let dim = n + 1;
    let t = QMatrix::from_fn(dim, dim, |i, j| if i >= j { s.coeff(i - j) } else { Quaternion::ZERO });
    let tt = t.matmul(&t.adjoint()).expect("square");
    HermitianQMatrix::symmetrize(QMatrix::identity(dim).sub(&tt).expect("same shape"))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SchurTest {
    pub pass: bool,
    /// Smallest `n` for which `I − 𝐒ₙ𝐒ₙ*` is not PSD.
    pub first_failure: Option<usize>,
    pub n_max: usize,
    /// Smallest LDL pivot seen across all tested `n`.
    pub min_pivot: f64,
}

/// Checks `I − 𝐒ₙ𝐒ₙ* ⪰ 0` for `n = 0..=n_max`; `tol` is the pivot tolerance.
pub fn schur_toeplitz_test(s: &QSeries, n_max: usize, tol: f64) -> SchurTest {
    let mut min_pivot = f64::INFINITY;
    for n in 0..=n_max {
        let rep = ldl_psd(&toeplitz_defect(s, n), tol);
        min_pivot = min_pivot.min(rep.min_pivot);
        if !rep.is_psd {
            return SchurTest { pass: false, first_failure: Some(n), n_max, min_pivot };
        }
    }
    SchurTest { pass: true, first_failure: None, n_max, min_pivot }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelKind {
    Szego,
    Schur,
    ThetaJ,
}

/// Gram matrix `[K(pᵢ, pⱼ)]` of a kernel at finitely many points. Matrix
/// valued kernels (`ThetaJ`) are laid out in `m×m` blocks.
#[derive(Clone, Debug, Serialize)]
pub struct KernelGram {
    pub points: Vec<Quaternion>,
    pub gram: HermitianQMatrix,
    pub kind: KernelKind,
}

impl KernelGram {
    pub fn psd(&self, tol: f64) -> PsdReport {
        ldl_psd(&self.gram, tol)
    }
}

fn check_in_ball(points: &[Quaternion]) -> Result<()> {
    match points.iter().find(|p| !(p.abs() < 1.0)) {
        Some(p) => Err(Error::Domain(format!("point {p} is not inside the unit ball"))),
        None => Ok(()),
    }
}

pub fn szego_gram(points: &[Quaternion]) -> Result<KernelGram> {
    check_in_ball(points)?;
    let n = points.len();
    let mut g = QMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            g[(i, j)] = szego_kernel(points[i], points[j])?;
        }
    }
    Ok(KernelGram { points: points.to_vec(), gram: HermitianQMatrix::symmetrize(g), kind: KernelKind::Szego })
}

/// `K_S(p, q) = Σ pᵏ (1 − S(p) S(q)‾) q̄ᵏ`.
pub fn ks_kernel(sp: Quaternion, sq: Quaternion, p: Quaternion, q: Quaternion) -> Result<Quaternion> {
    sylvester_unit(p, q.conj(), Quaternion::ONE - sp * sq.conj())
}

/// Gram matrix of `K_S` at `points`.
pub fn ks_gram(s: &SliceFn, points: &[Quaternion]) -> Result<KernelGram> {
    check_in_ball(points)?;
    let vals = points.iter().map(|&p| s.eval(p)).collect::<Result<Vec<_>>>()?;
    let n = points.len();
    let mut g = QMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            g[(i, j)] = ks_kernel(vals[i], vals[j], points[i], points[j])?;
            g[(j, i)] = g[(i, j)].conj();
        }
    }
    Ok(KernelGram { points: points.to_vec(), gram: HermitianQMatrix::symmetrize(g), kind: KernelKind::Schur })
}

/// Three kernel functions that are right linearly dependent:
/// `Σ k(·, p_{indices[m]}) coeffs[m] ≡ 0`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KernelRelation {
    pub indices: [usize; 3],
    pub coeffs: [Quaternion; 3],
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KernelDependence {
    pub independent: bool,
    pub relation: Option<KernelRelation>,
}

/// Groups indices of `points` by 2-sphere, preserving first-seen order.
pub fn sphere_groups(points: &[Quaternion]) -> Vec<Vec<usize>> {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (i, &p) in points.iter().enumerate() {
        match groups.iter_mut().find(|g| {
            let q = points[g[0]];
            same_sphere(p, q, sphere_tol(p, q))
        }) {
            Some(g) => g.push(i),
            None => groups.push(vec![i]),
        }
    }
    groups
}

/// The kernels `k(·, qᵢ)` are independent iff no three points share a sphere.
/// For the first such triple, returns coefficients of the linear relation.
pub fn kernel_dependence(points: &[Quaternion]) -> Result<KernelDependence> {
    check_in_ball(points)?;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if (points[i] - points[j]).abs() <= 1e-14 * (1.0 + points[i].abs()) {
                return Err(Error::Domain(format!("duplicate points at {i} and {j}")));
            }
        }
    }
    for g in sphere_groups(points) {
        if g.len() >= 3 {
            let [a, b, c] = [g[0], g[1], g[2]];
            let (c1, c2) = kernel_relation_coeffs(points[a], points[b], points[c])?;
            return Ok(KernelDependence {
                independent: false,
                relation: Some(KernelRelation { indices: [a, b, c], coeffs: [c1, c2, -Quaternion::ONE] }),
            });
        }
    }
    Ok(KernelDependence { independent: true, relation: None })
}

fn sphere_units(p1: Quaternion, p2: Quaternion, p3: Quaternion) -> Result<(Quaternion, Quaternion, Quaternion)> {
    let tol12 = sphere_tol(p1, p2);
    let tol13 = sphere_tol(p1, p3);
    if !same_sphere(p1, p2, tol12) || !same_sphere(p1, p3, tol13) {
        return Err(Error::Domain("points do not share a 2-sphere".into()));
    }
    let (_, y, i1) = slice_coords(p1);
    if y <= tol12 {
        return Err(Error::Domain("sphere is degenerate (real point)".into()));
    }
    let (i2, i3) = (slice_coords(p2).2, slice_coords(p3).2);
    if (i1.get() - i2.get()).abs() <= 1e-12 {
        return Err(Error::Domain("first two points coincide".into()));
    }
    Ok((i1.get(), i2.get(), i3.get()))
}

/// Coefficients `(c₁, c₂)` with `k(·,p₃) = k(·,p₁)c₁ + k(·,p₂)c₂` for three
/// points `pᵢ = x + yIᵢ` of one sphere:
/// `c₁ = (I₁−I₂)⁻¹(I₃−I₂)`, `c₂ = (I₁−I₂)⁻¹(I₁−I₃)`.
pub fn kernel_relation_coeffs(p1: Quaternion, p2: Quaternion, p3: Quaternion) -> Result<(Quaternion, Quaternion)> {
    let (i1, i2, i3) = sphere_units(p1, p2, p3)?;
    let d = (i1 - i2).inv()?;
    Ok((d * (i3 - i2), d * (i1 - i3)))
}

/// Value at `p₃` forced on any slice regular `f` with `f(p₁) = s₁` and
/// `f(p₂) = s₂`, all three points on one sphere:
/// `(I₂−I₃)(I₂−I₁)⁻¹ s₁ + (I₃−I₁)(I₂−I₁)⁻¹ s₂`.
pub fn sphere_representation(
    p1: Quaternion,
    s1: Quaternion,
    p2: Quaternion,
    s2: Quaternion,
    p3: Quaternion,
) -> Result<Quaternion> {
    let (i1, i2, i3) = sphere_units(p1, p2, p3)?;
    let d = (i2 - i1).inv()?;
    Ok((i2 - i3) * d * s1 + (i3 - i1) * d * s2)
}

/// The same combination with the inverse on the left,
/// `(I₂−I₁)⁻¹{(I₂−I₃)s₁ + (I₃−I₁)s₂}`. This ordering does not reproduce
/// slice regular functions in general; it is exposed so the discrepancy can
/// be tested.
pub fn sphere_representation_unreversed(
    p1: Quaternion,
    s1: Quaternion,
    p2: Quaternion,
    s2: Quaternion,
    p3: Quaternion,
) -> Result<Quaternion> {
    let (i1, i2, i3) = sphere_units(p1, p2, p3)?;
    let d = (i2 - i1).inv()?;
    Ok(d * ((i2 - i3) * s1 + (i3 - i1) * s2))
}

/// `Σᵢ k(·, xᵢ) cᵢ`, a finite right combination of Szegő kernels.
///
/// Evaluates as `Σ sylvester(p, x̄ᵢ, 1) cᵢ`; the slice conjugate is
/// `Σ sylvester(p, xᵢ, c̄ᵢ)` and coefficient `k` is `Σ x̄ᵢᵏ cᵢ`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KernelSum {
    pub points: Vec<Quaternion>,
    pub coeffs: Vec<Quaternion>,
}

impl KernelSum {
    pub fn new(points: Vec<Quaternion>, coeffs: Vec<Quaternion>) -> Result<Self> {
        if points.len() != coeffs.len() {
            return Err(Error::Dimension(format!("{} points, {} coefficients", points.len(), coeffs.len())));
        }
        check_in_ball(&points)?;
        Ok(KernelSum { points, coeffs })
    }

    pub fn series(&self, order: usize) -> QSeries {
        let mut pows: Vec<Quaternion> = vec![Quaternion::ONE; self.points.len()];
        QSeries::from_fn(order, |_| {
            let mut acc = Quaternion::ZERO;
            for (i, pw) in pows.iter_mut().enumerate() {
                acc += *pw * self.coeffs[i];
                *pw *= self.points[i].conj();
            }
            acc
        })
    }
}

impl SliceEval for KernelSum {
    fn eval(&self, p: Quaternion) -> Result<Quaternion> {
        let mut acc = Quaternion::ZERO;
        for (x, c) in self.points.iter().zip(&self.coeffs) {
            acc += sylvester_unit(p, x.conj(), Quaternion::ONE)? * *c;
        }
        Ok(acc)
    }

    fn eval_conj(&self, p: Quaternion) -> Result<Quaternion> {
        let mut acc = Quaternion::ZERO;
        for (x, c) in self.points.iter().zip(&self.coeffs) {
            acc += sylvester_unit(p, *x, c.conj())?;
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlinalg::default_psd_tol;
    use crate::sampling::{blaschke_series, rand_imag_unit, rand_quat, rand_schur, rand_series, rng};
    use rand::Rng;

    const I: Quaternion = Quaternion::I;
    const J: Quaternion = Quaternion::J;
    const K: Quaternion = Quaternion::K;

    fn q(w: f64) -> Quaternion {
        Quaternion::real(w)
    }

    #[test]
    fn szego_examples() {
        assert!((szego_kernel(q(0.5), q(0.5)).unwrap() - q(4.0 / 3.0)).abs() < 1e-15);
        let p = Quaternion::new(0.1, 0.5, -0.2, 0.3);
        assert_eq!(szego_kernel(p, Quaternion::ZERO).unwrap(), Quaternion::ONE);
    }

    #[test]
    fn reproducing_property() {
        let f = QSeries::new(vec![Quaternion::ONE, I, J]);
        let qpt = Quaternion::new(0.2, 0.0, 0.0, 0.3);
        // k(·, q) = Σ pⁿ q̄ⁿ
        let kq = QSeries::from_fn(200, |n| qpt.conj().powi(n as u32));
        let lhs = h2_inner(&f, &kq);
        assert!((lhs - f.eval(qpt)).abs() < 1e-15);

        let mut r = rng(31);
        for _ in 0..50 {
            let f = rand_series(&mut r, 30, 1.0);
            let qpt = rand_quat(&mut r, 0.7);
            let kq = QSeries::from_fn(200, |n| qpt.conj().powi(n as u32));
            let (val, tail) = f.eval_with_tail(qpt);
            assert!((h2_inner(&f, &kq) - val).abs() <= tail + 1e-13);
        }
    }

    #[test]
    fn inner_product_examples() {
        let f = QSeries::monomial(1, I);
        let g = QSeries::new(vec![Quaternion::ONE, I]);
        assert_eq!(h2_inner(&f, &g), Quaternion::ONE);
        let h = QSeries::new(vec![I, J, Quaternion::new(1.0, 2.0, 0.0, -1.0)]);
        let v = h2_inner(&h, &h);
        assert!(v.im_abs() == 0.0 && (v.re() - 8.0).abs() < 1e-15);
        assert!(h2_inner(&QSeries::monomial(2, I), &QSeries::monomial(3, J)).is_zero());
    }

    #[test]
    fn radial_norm() {
        let one = QSeries::constant(Quaternion::ONE);
        assert!((h2_norm_radial(&one, 0.7, ImagUnit::I, 512) - 1.0).abs() < 1e-14);
        let p = QSeries::monomial(1, Quaternion::ONE);
        assert!((h2_norm_radial(&p, 0.5, ImagUnit::I, 512) - 0.25).abs() < 1e-14);

        let mut r = rng(41);
        let f = rand_series(&mut r, 12, 1.0);
        let m = default_quadrature_points(&f);
        let exact: f64 = f.coeffs().iter().enumerate().map(|(n, c)| 0.8f64.powi(2 * n as i32) * c.norm_sqr()).sum();
        let a = h2_norm_radial(&f, 0.8, ImagUnit::I, m);
        let mixed = ImagUnit::new(Quaternion::new(0.0, 1.0, 1.0, 0.0)).unwrap();
        let b = h2_norm_radial(&f, 0.8, mixed, m);
        assert!((a - b).abs() < 1e-10);
        assert!((a - exact).abs() < 1e-12 * (1.0 + exact));
        let c = h2_norm_radial(&f, 0.8, ImagUnit::new(rand_imag_unit(&mut r)).unwrap(), m);
        assert!((c - exact).abs() < 1e-12 * (1.0 + exact));
    }

    #[test]
    fn toeplitz_test_examples() {
        let shift = QSeries::monomial(1, Quaternion::ONE);
        let d = toeplitz_defect(&shift, 3);
        for i in 0..4 {
            for j in 0..4 {
                let e = if i == 0 && j == 0 { 1.0 } else { 0.0 };
                assert_eq!(d[(i, j)], q(e));
            }
        }
        assert!(schur_toeplitz_test(&shift, 20, 1e-12).pass);

        let c = QSeries::constant(Quaternion::new(0.6, 0.0, 0.8, 0.0));
        assert!(schur_toeplitz_test(&c, 10, 1e-12).pass);

        let big = QSeries::monomial(1, q(1.1));
        let t = schur_toeplitz_test(&big, 10, 1e-12);
        assert!(!t.pass);
        assert_eq!(t.first_failure, Some(1));

        let over = QSeries::constant(q(1.2));
        assert_eq!(schur_toeplitz_test(&over, 5, 1e-12).first_failure, Some(0));
    }

    #[test]
    fn toeplitz_failure_is_monotone() {
        let mut r = rng(51);
        for _ in 0..20 {
            let s = rand_series(&mut r, 6, 0.8);
            let t = schur_toeplitz_test(&s, 12, 1e-12);
            if let Some(n0) = t.first_failure {
                for n in n0..=12 {
                    let d = toeplitz_defect(&s, n);
                    assert!(!ldl_psd(&d, 1e-12).is_psd, "n = {n} after failure at {n0}");
                }
            }
        }
    }

    #[test]
    fn ks_gram_examples() {
        let pts = [Quaternion::new(0.1, 0.2, 0.0, 0.3), Quaternion::new(-0.4, 0.0, 0.5, 0.1), q(0.3)];
        let zero = SliceFn::constant(Quaternion::ZERO);
        let kg = ks_gram(&zero, &pts).unwrap();
        let sz = szego_gram(&pts).unwrap();
        assert!(kg.gram.matrix().sub(sz.gram.matrix()).unwrap().max_abs() < 1e-15);
        assert!(kg.psd(default_psd_tol(&kg.gram)).is_psd);

        let id = SliceFn::identity();
        let kg = ks_gram(&id, &[q(0.2), q(0.5)]).unwrap();
        for e in kg.gram.matrix().entries() {
            assert!((*e - Quaternion::ONE).abs() < 1e-15);
        }
        let rep = kg.psd(1e-12);
        assert!(rep.is_psd);
        assert_eq!(rep.rank, 1);

        let big = SliceFn::constant(q(1.2));
        let kg = ks_gram(&big, &[q(0.3)]).unwrap();
        assert!(kg.gram[(0, 0)].re() < 0.0);
    }

    #[test]
    fn schur_functions_have_psd_kernels() {
        let mut r = rng(61);
        for _ in 0..20 {
            let s = rand_schur(&mut r, 1.0, 128);
            assert!(schur_toeplitz_test(&s, 64, 1e-9).pass);
            let pts: Vec<Quaternion> = (0..8).map(|_| rand_quat(&mut r, 0.9)).collect();
            let kg = ks_gram(&SliceFn::from(s), &pts).unwrap();
            assert!(kg.psd(1e-9).min_pivot >= -1e-9);
        }
    }

    #[test]
    fn dependence_examples() {
        let d = kernel_dependence(&[I * 0.5, J * 0.5, K * 0.5]).unwrap();
        assert!(!d.independent);
        let rel = d.relation.unwrap();
        // Σ k(p, pᵢ)αᵢ vanishes identically; check at a few points
        let pts = [I * 0.5, J * 0.5, K * 0.5];
        let mut r = rng(71);
        for _ in 0..10 {
            let x = rand_quat(&mut r, 0.9);
            let s: Quaternion = (0..3).map(|m| szego_kernel(x, pts[rel.indices[m]]).unwrap() * rel.coeffs[m]).sum();
            assert!(s.abs() < 1e-14);
        }
        assert!(kernel_dependence(&[q(0.1), q(0.2), q(0.3)]).unwrap().independent);
        assert!(kernel_dependence(&[I * 0.5, J * 0.5]).unwrap().independent);
        assert!(kernel_dependence(&[q(0.1), q(0.1)]).is_err());
    }

    #[test]
    fn sphere_representation_examples() {
        let v = sphere_representation(I * 0.5, I * 0.5, J * 0.5, J * 0.5, K * 0.5).unwrap();
        assert!((v - K * 0.5).abs() < 1e-15, "{v:?}");
        let c = Quaternion::new(0.1, -0.3, 0.2, 0.4);
        let v = sphere_representation(I * 0.5, c, J * 0.5, c, K * 0.5).unwrap();
        assert!((v - c).abs() < 1e-15);
        let s1 = Quaternion::new(0.3, 0.1, 0.0, -0.2);
        let v = sphere_representation(I * 0.5, s1, J * 0.5, c, I * 0.5).unwrap();
        assert!((v - s1).abs() < 1e-15);
        assert!(sphere_representation(I * 0.5, s1, I * 0.5, c, K * 0.5).is_err());
        assert!(sphere_representation(I * 0.5, s1, J * 0.4, c, K * 0.5).is_err());
    }

    #[test]
    fn unreversed_order_fails_identity() {
        let v = sphere_representation_unreversed(I * 0.5, I * 0.5, J * 0.5, J * 0.5, K * 0.5).unwrap();
        assert!((v - K * 0.5).abs() > 0.1);
    }

    #[test]
    fn sphere_representation_reproduces_polynomials() {
        let mut r = rng(81);
        for _ in 0..100 {
            let deg = r.gen_range(0..=8);
            let f = rand_series(&mut r, deg, 1.0);
            let x = r.gen_range(-0.5..0.5);
            let y = r.gen_range(0.1..0.8);
            let ps: Vec<Quaternion> = (0..3).map(|_| Quaternion::real(x) + rand_imag_unit(&mut r) * y).collect();
            let v = sphere_representation(ps[0], f.eval(ps[0]), ps[1], f.eval(ps[1]), ps[2]).unwrap();
            assert!((v - f.eval(ps[2])).abs() < 1e-11);
        }
    }

    #[test]
    fn blaschke_series_is_inner_on_toeplitz() {
        let b = blaschke_series(q(0.6), 200);
        assert!(schur_toeplitz_test(&b, 64, 1e-9).pass);
    }

    #[test]
    fn kernel_sum_paths_agree() {
        let mut r = rng(91);
        for _ in 0..30 {
            let pts: Vec<Quaternion> = (0..3).map(|_| rand_quat(&mut r, 0.7)).collect();
            let cs: Vec<Quaternion> = (0..3).map(|_| rand_quat(&mut r, 1.0)).collect();
            let ks = KernelSum::new(pts, cs).unwrap();
            let ser = ks.series(200);
            let p = rand_quat(&mut r, 0.7);
            assert!((ks.eval(p).unwrap() - ser.eval(p)).abs() < 1e-12);
            assert!((ks.eval_conj(p).unwrap() - ser.conj_series().eval(p)).abs() < 1e-12);
        }
    }
}
