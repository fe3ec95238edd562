use serde::Serialize;

use super::theta::lft_parts;
use super::{auto_psd_tol, build_pick, theta_build, Problem, Provenance, SolutionHandle};
use crate::error::{Error, Result};
use crate::hardy::KernelSum;
use crate::qlinalg::{ldl_psd, pivoted_rank_indices};
use crate::quat::Quaternion;
use crate::series::{QSeries, SliceFn, DEFAULT_ORDER};

/// Relative size below which a leading series coefficient is treated as zero.
const LEADING_ZERO: f64 = 1e-10;

/// The unique solution of a determinate problem, `S = R ⋆ Q^{−⋆}` with
/// `R = Σ k(·, pᵢ) αᵢ`, `Q = Σ_{sᵢ≠0} k(·, sᵢ⁻¹pᵢsᵢ) s̄ᵢ αᵢ` and `Py = 0`.
pub fn determinate_solve(problem: &Problem) -> Result<SolutionHandle> {
    determinate_solve_with_tol(problem, None)
}

/// [`determinate_solve`] with an explicit pivot tolerance (`None` for
/// [`auto_psd_tol`]).
pub fn determinate_solve_with_tol(problem: &Problem, tol: Option<f64>) -> Result<SolutionHandle> {
    let pick = build_pick(problem)?;
    let tol = tol.unwrap_or_else(|| auto_psd_tol(&pick));
    let rep = ldl_psd(&pick.p, tol);
    if !rep.is_psd {
        return Err(Error::Precondition("Pick matrix is not positive semidefinite".into()));
    }
    if rep.rank == problem.len() {
        return Err(Error::Precondition("Pick matrix is nonsingular".into()));
    }
    // kernel vectors come in the order of the zero pivots
    let zero_pivots: Vec<f64> = rep.pivots.iter().copied().filter(|d| d.abs() <= tol).collect();
    let pos = (0..zero_pivots.len())
        .min_by(|&a, &b| zero_pivots[a].abs().total_cmp(&zero_pivots[b].abs()))
        .ok_or_else(|| Error::Precondition("no kernel vector".into()))?;
    let y = rep.null_basis[pos].clone();
    solve_with_null_vector(problem, &y)
}

/// [`determinate_solve`] with a caller-supplied kernel vector of `P`.
pub fn solve_with_null_vector(problem: &Problem, y: &[Quaternion]) -> Result<SolutionHandle> {
    let (nodes, targets) = (problem.nodes(), problem.targets());
    if y.len() != nodes.len() {
        return Err(Error::Dimension(format!("kernel vector of length {}", y.len())));
    }
    let r = KernelSum::new(nodes.to_vec(), y.to_vec())?;
    let mut qpts = Vec::new();
    let mut qcs = Vec::new();
    for i in 0..nodes.len() {
        let s = targets[i];
        if s.norm_sqr() > 1e-300 {
            qpts.push(s.inv_unchecked() * nodes[i] * s);
            qcs.push(s.conj() * y[i]);
        }
    }
    let ymax = y.iter().map(|a| a.abs()).fold(0.0, f64::max);
    if qcs.iter().all(|c| c.abs() <= 1e-14 * ymax) {
        return Err(Error::DegenerateData("Q vanishes identically".into()));
    }
    let q = KernelSum::new(qpts, qcs)?;

    let rs = r.series(DEFAULT_ORDER);
    let qs = q.series(DEFAULT_ORDER);
    let series = series_quotient(&rs, &qs)?;

    let evaluator = SliceFn::custom(r).star(&SliceFn::custom(q).star_inverse());
    Ok(SolutionHandle::new(evaluator, series, Provenance::Determinate { null_vector: y.to_vec() }, problem))
}

/// Coefficients of `R ⋆ Q^{−⋆}` after removing leading zeros shared by both.
fn series_quotient(r: &QSeries, q: &QSeries) -> Result<QSeries> {
    let thresh = LEADING_ZERO * (1.0 + q.max_coeff());
    let m = (0..=q.order()).find(|&k| q.coeff(k).abs() > thresh).ok_or(Error::NotInvertible(0.0))?;
    let (r, q) = (r.shift_down(m), q.shift_down(m));
    let order = r.order().min(q.order());
    Ok(r.star_mul_to(&q.star_inverse(order)?, order))
}

#[derive(Clone, Debug, Serialize)]
pub struct ExcessNode {
    pub index: usize,
    pub u: Quaternion,
    pub v: Quaternion,
    /// `−u⁻¹v`.
    pub gamma: Quaternion,
}

/// Data of the extended-problem construction: the positive definite
/// sub-problem, and `u`, `v`, `γ` at every remaining node.
#[derive(Clone, Debug, Serialize)]
pub struct GammaReport {
    pub indices: Vec<usize>,
    pub excess: Vec<ExcessNode>,
    /// Value of `γ` actually used.
    pub gamma: Quaternion,
    /// Largest distance between the `γ` values of different excess nodes.
    pub spread: f64,
}

/// Computes `u`, `v` and `γ` for a singular positive semidefinite problem.
/// Returns the sub-problem indices and, for `rank > 0`, the built `Θ`.
pub fn gamma_report(problem: &Problem, tol: Option<f64>) -> Result<(GammaReport, Option<super::ThetaRep>)> {
    let pick = build_pick(problem)?;
    let tol = tol.unwrap_or_else(|| auto_psd_tol(&pick));
    let rep = ldl_psd(&pick.p, tol);
    if !rep.is_psd {
        return Err(Error::Precondition("Pick matrix is not positive semidefinite".into()));
    }
    let idx = pivoted_rank_indices(&pick.p, tol);
    let n = problem.len();
    if idx.len() == n {
        return Err(Error::Precondition("Pick matrix is nonsingular".into()));
    }
    let (nodes, targets) = (problem.nodes(), problem.targets());
    if idx.is_empty() {
        let g = targets[0];
        let excess =
            (0..n).map(|i| ExcessNode { index: i, u: Quaternion::ONE, v: -targets[i], gamma: targets[i] }).collect();
        let spread = targets.iter().map(|t| (*t - g).abs()).fold(0.0, f64::max);
        return Ok((GammaReport { indices: idx, excess, gamma: g, spread }, None));
    }

    let sub = problem.select(&idx);
    let theta = theta_build(&build_pick(&sub)?, DEFAULT_ORDER)?;
    let mut excess = Vec::new();
    for e in (0..n).filter(|i| !idx.contains(i)) {
        let pe = nodes[e];
        let mut a0 = Quaternion::ZERO;
        let mut a1 = Quaternion::ZERO;
        for (j, &k) in idx.iter().enumerate() {
            let p1 = pick.p[(e, k)];
            a0 += p1 * theta.kappa[j][0];
            a1 += p1 * theta.kappa[j][1];
        }
        let u = Quaternion::ONE + (pe - Quaternion::ONE) * a0;
        let v = -targets[e] + (pe - Quaternion::ONE) * a1;
        let (ua, va) = (u.abs(), v.abs());
        if ua <= 1e-12 || (ua - va).abs() > 1e-6 * (1.0 + ua + va) {
            return Err(Error::Assumption(format!("node {e}: |u| = {ua}, |v| = {va}")));
        }
        let g = -(u.inv_unchecked() * v);
        excess.push(ExcessNode { index: e, u, v, gamma: g / g.abs() });
    }
    let best = excess.iter().max_by(|a, b| a.u.abs().total_cmp(&b.u.abs())).expect("at least one excess node");
    let gamma = best.gamma;
    let spread = excess.iter().map(|x| (x.gamma - gamma).abs()).fold(0.0, f64::max);
    Ok((GammaReport { indices: idx, excess, gamma, spread }, Some(theta)))
}

/// The unique solution of a determinate problem as the linear fractional
/// image of a unimodular constant `γ`, built from a positive definite
/// sub-problem chosen by pivoting.
pub fn extended_gamma_solve(problem: &Problem) -> Result<SolutionHandle> {
    extended_gamma_solve_with_tol(problem, None)
}

pub fn extended_gamma_solve_with_tol(problem: &Problem, tol: Option<f64>) -> Result<SolutionHandle> {
    let (report, theta) = gamma_report(problem, tol)?;
    let provenance = Provenance::ExtendedGamma { gamma: report.gamma, indices: report.indices.clone() };
    match theta {
        None => Ok(SolutionHandle::new(
            SliceFn::constant(report.gamma),
            QSeries::constant(report.gamma),
            provenance,
            problem,
        )),
        Some(theta) => {
            let (evaluator, series) = lft_parts(&theta, &QSeries::constant(report.gamma))?;
            Ok(SolutionHandle::new(evaluator, series, provenance, problem))
        }
    }
}
