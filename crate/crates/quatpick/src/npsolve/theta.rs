use serde::Serialize;

use super::{auto_psd_tol, PickData, Problem, Provenance, SolutionHandle};
use crate::error::{Error, Result};
use crate::hardy::{schur_toeplitz_test, KernelGram, KernelKind};
use crate::qlinalg::{ldl_psd, qmat_inverse, sylvester_unit, HermitianQMatrix, PsdReport, QMatrix};
use crate::quat::Quaternion;
use crate::series::{QSeries, SliceEval, SliceFn};

pub type Mat2 = [[Quaternion; 2]; 2];

const ID2: Mat2 = [[Quaternion::ONE, Quaternion::ZERO], [Quaternion::ZERO, Quaternion::ONE]];

/// Order used to admit LFT parameters by the Toeplitz test.
const PARAM_TEST_ORDER: usize = 32;
const PARAM_TEST_TOL: f64 = 1e-9;

/// The 2×2 function `Θ(p) = I₂ + (p−1) Σₖ pᵏ W T*ᵏ κ` with `W = [E*; N*]`
/// and `κ = P⁻¹(I−T)⁻¹[E, −N]`.
#[derive(Clone, Debug, Serialize)]
pub struct ThetaRep {
    pub problem: Problem,
    /// `w[a][i]`: row `a` of `W`, i.e. `1` and `s̄ᵢ`.
    pub w: [Vec<Quaternion>; 2],
    /// `kappa[i][b]`.
    pub kappa: Vec<[Quaternion; 2]>,
    pub p_inv: QMatrix,
    /// Taylor coefficients `Θ₀ … Θ_N`.
    pub coeffs: Vec<Mat2>,
}

/// One entry `Θ_ab` as a pointwise slice function.
#[derive(Clone, Debug)]
pub struct ThetaEntry {
    nodes: Vec<Quaternion>,
    w: Vec<Quaternion>,
    kappa: Vec<Quaternion>,
    delta: f64,
}

impl SliceEval for ThetaEntry {
    fn eval(&self, p: Quaternion) -> Result<Quaternion> {
        let mut acc = Quaternion::ZERO;
        for i in 0..self.nodes.len() {
            acc += sylvester_unit(p, self.nodes[i].conj(), self.w[i])? * self.kappa[i];
        }
        Ok(Quaternion::real(self.delta) + (p - Quaternion::ONE) * acc)
    }

    fn eval_conj(&self, p: Quaternion) -> Result<Quaternion> {
        let mut acc = Quaternion::ZERO;
        for i in 0..self.nodes.len() {
            acc += sylvester_unit(p, self.nodes[i], self.kappa[i].conj())? * self.w[i].conj();
        }
        Ok(Quaternion::real(self.delta) + (p - Quaternion::ONE) * acc)
    }
}

/// Builds `Θ` for a problem whose Pick matrix is positive definite, with
/// coefficients up to `order`.
pub fn theta_build(pick: &PickData, order: usize) -> Result<ThetaRep> {
    let n = pick.dim();
    let rep = ldl_psd(&pick.p, auto_psd_tol(pick));
    if !rep.is_psd || rep.rank < n {
        return Err(Error::Precondition(format!("Pick matrix is not positive definite (rank {} of {n})", rep.rank)));
    }
    let p_inv = qmat_inverse(pick.p.matrix())?;
    let nodes = &pick.nodes;
    let targets = &pick.targets;
    let w = [vec![Quaternion::ONE; n], targets.iter().map(|s| s.conj()).collect()];
    let mut e_col = Vec::with_capacity(n);
    let mut n_col = Vec::with_capacity(n);
    for i in 0..n {
        let d = (Quaternion::ONE - nodes[i]).inv()?;
        e_col.push(d);
        n_col.push(-(d * targets[i]));
    }
    let k0 = p_inv.mul_vec(&e_col)?;
    let k1 = p_inv.mul_vec(&n_col)?;
    let kappa: Vec<[Quaternion; 2]> = (0..n).map(|i| [k0[i], k1[i]]).collect();

    // Cₖ = W T*ᵏ κ; Θ₀ = I − C₀, Θₘ = C_{m−1} − Cₘ
    let mut pows = vec![Quaternion::ONE; n];
    let mut prev = [[Quaternion::ZERO; 2]; 2];
    let mut coeffs = Vec::with_capacity(order + 1);
    for m in 0..=order {
        let mut c = [[Quaternion::ZERO; 2]; 2];
        for (a, row) in c.iter_mut().enumerate() {
            for (b, entry) in row.iter_mut().enumerate() {
                *entry = (0..n).map(|i| w[a][i] * pows[i] * kappa[i][b]).sum();
            }
        }
        let mut theta = [[Quaternion::ZERO; 2]; 2];
        for a in 0..2 {
            for b in 0..2 {
                theta[a][b] = if m == 0 { ID2[a][b] - c[a][b] } else { prev[a][b] - c[a][b] };
            }
        }
        coeffs.push(theta);
        prev = c;
        for i in 0..n {
            pows[i] *= nodes[i].conj();
        }
    }

    let problem = Problem::new(nodes.clone(), targets.clone())?;
    Ok(ThetaRep { problem, w, kappa, p_inv, coeffs })
}

impl ThetaRep {
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn dim(&self) -> usize {
        self.kappa.len()
    }

    fn entry_data(&self, a: usize, b: usize) -> ThetaEntry {
        ThetaEntry {
            nodes: self.problem.nodes().to_vec(),
            w: self.w[a].clone(),
            kappa: self.kappa.iter().map(|k| k[b]).collect(),
            delta: if a == b { 1.0 } else { 0.0 },
        }
    }

    /// `Θ_ab` as a pointwise evaluator.
    pub fn entry(&self, a: usize, b: usize) -> SliceFn {
        SliceFn::custom(self.entry_data(a, b))
    }

    /// Taylor series of `Θ_ab`.
    pub fn entry_series(&self, a: usize, b: usize) -> QSeries {
        QSeries::new(self.coeffs.iter().map(|c| c[a][b]).collect())
    }

    pub fn eval(&self, p: Quaternion) -> Result<Mat2> {
        let mut out = [[Quaternion::ZERO; 2]; 2];
        for (a, row) in out.iter_mut().enumerate() {
            for (b, entry) in row.iter_mut().enumerate() {
                *entry = self.entry_data(a, b).eval(p)?;
            }
        }
        Ok(out)
    }

    /// `Θ(p)` from the truncated coefficients.
    pub fn eval_series(&self, p: Quaternion) -> Mat2 {
        let mut out = [[Quaternion::ZERO; 2]; 2];
        for (a, row) in out.iter_mut().enumerate() {
            for (b, entry) in row.iter_mut().enumerate() {
                *entry = self.entry_series(a, b).eval(p);
            }
        }
        out
    }

    /// Row `a` of `Σₖ pᵏ W T*ᵏ`: entries `sylvester(p, p̄ᵢ, W_ai)`.
    fn g_row(&self, p: Quaternion, a: usize) -> Result<Vec<Quaternion>> {
        self.problem.nodes().iter().zip(&self.w[a]).map(|(x, &w)| sylvester_unit(p, x.conj(), w)).collect()
    }

    /// `K_{Θ,J}(p, q)` in the factored form `G(p) P⁻¹ G(q)*`.
    pub fn kernel(&self, p: Quaternion, q: Quaternion) -> Result<Mat2> {
        let gp = [self.g_row(p, 0)?, self.g_row(p, 1)?];
        let gq = [self.g_row(q, 0)?, self.g_row(q, 1)?];
        let n = self.dim();
        let mut out = [[Quaternion::ZERO; 2]; 2];
        for a in 0..2 {
            for b in 0..2 {
                let mut acc = Quaternion::ZERO;
                for i in 0..n {
                    for j in 0..n {
                        acc += gp[a][i] * self.p_inv[(i, j)] * gq[b][j].conj();
                    }
                }
                out[a][b] = acc;
            }
        }
        Ok(out)
    }

    /// `Σ pᵏ (J − Θ(p) J Θ(q)*) q̄ᵏ` evaluated directly from `Θ`.
    pub fn kernel_direct(&self, p: Quaternion, q: Quaternion) -> Result<Mat2> {
        let tp = self.eval(p)?;
        let tq = self.eval(q)?;
        let jd = [1.0, -1.0];
        let mut out = [[Quaternion::ZERO; 2]; 2];
        for a in 0..2 {
            for b in 0..2 {
                let mut c = if a == b { Quaternion::real(jd[a]) } else { Quaternion::ZERO };
                for (m, &sign) in jd.iter().enumerate() {
                    c -= tp[a][m] * tq[b][m].conj() * sign;
                }
                out[a][b] = sylvester_unit(p, q.conj(), c)?;
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ThetaJCheck {
    pub gram: KernelGram,
    pub psd: PsdReport,
    /// Largest gap between the factored and direct kernel values.
    pub direct_diff: f64,
    pub theta22_min: f64,
}

/// Gram matrix of `K_{Θ,J}` at `points` in `2×2` blocks, with a PSD check
/// and the minimum of `|Θ₂₂|` over the points.
pub fn theta_j_check(theta: &ThetaRep, points: &[Quaternion]) -> Result<ThetaJCheck> {
    let m = points.len();
    let mut g = QMatrix::zeros(2 * m, 2 * m);
    let mut direct_diff = 0.0f64;
    let mut theta22_min = f64::INFINITY;
    for (i, &p) in points.iter().enumerate() {
        if !(p.abs() < 1.0) {
            return Err(Error::Domain(format!("point {p} is not inside the unit ball")));
        }
        theta22_min = theta22_min.min(theta.entry_data(1, 1).eval(p)?.abs());
        for (j, &q) in points.iter().enumerate() {
            let k = theta.kernel(p, q)?;
            let d = theta.kernel_direct(p, q)?;
            for a in 0..2 {
                for b in 0..2 {
                    g[(2 * i + a, 2 * j + b)] = k[a][b];
                    direct_diff = direct_diff.max((k[a][b] - d[a][b]).abs());
                }
            }
        }
    }
    let gram = HermitianQMatrix::symmetrize(g);
    let tol = 1e-12 * (1.0 + gram.matrix().max_abs());
    let psd = ldl_psd(&gram, tol);
    Ok(ThetaJCheck {
        gram: KernelGram { points: points.to_vec(), gram, kind: KernelKind::ThetaJ },
        psd,
        direct_diff,
        theta22_min,
    })
}

/// `S = (Θ₁₁⋆ℰ + Θ₁₂) ⋆ (Θ₂₁⋆ℰ + Θ₂₂)^{−⋆}` for a Schur-class parameter `ℰ`.
pub fn lft_solution(theta: &ThetaRep, param: &QSeries) -> Result<SolutionHandle> {
    let (evaluator, series) = lft_parts(theta, param)?;
    let provenance = Provenance::Lft { parameter: param.coeffs().to_vec() };
    Ok(SolutionHandle::new(evaluator, series, provenance, &theta.problem))
}

/// Pointwise evaluator and truncated series of the linear fractional image.
pub(super) fn lft_parts(theta: &ThetaRep, param: &QSeries) -> Result<(SliceFn, QSeries)> {
    let test = schur_toeplitz_test(param, PARAM_TEST_ORDER, PARAM_TEST_TOL);
    if !test.pass {
        return Err(Error::InvalidParameter(format!(
            "Toeplitz test fails at n = {}",
            test.first_failure.unwrap_or_default()
        )));
    }
    let e = SliceFn::from(param.clone());
    let num = theta.entry(0, 0).star(&e).plus(&theta.entry(0, 1));
    let den = theta.entry(1, 0).star(&e).plus(&theta.entry(1, 1));
    let evaluator = num.star(&den.star_inverse());

    let order = theta.order();
    let es = param.truncate(order);
    let num_s = theta.entry_series(0, 0).star_mul_to(&es, order).add(&theta.entry_series(0, 1));
    let den_s = theta.entry_series(1, 0).star_mul_to(&es, order).add(&theta.entry_series(1, 1));
    let series = num_s.star_mul_to(&den_s.star_inverse(order)?, order);
    Ok((evaluator, series))
}
