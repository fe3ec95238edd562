//! Nevanlinna–Pick interpolation in the quaternionic Schur class.
//!
//! Given nodes `p₁ … pₙ` in the open unit ball and targets `s₁ … sₙ`, find a
//! slice regular `S` with `|S| ≤ 1` and `S(pᵢ) = sᵢ`. The problem is solvable
//! iff the Pick matrix `P` is positive semidefinite; it has a unique solution
//! iff `P` is in addition singular (once nodes sharing a 2-sphere have been
//! reduced), and otherwise all solutions are a linear fractional image of the
//! Schur class.

mod determinate;
mod schwarz;
mod theta;

pub use determinate::{
    determinate_solve, determinate_solve_with_tol, extended_gamma_solve, extended_gamma_solve_with_tol, gamma_report,
    solve_with_null_vector, ExcessNode, GammaReport,
};
pub use schwarz::{blaschke, bs_gram, schwarz_pick_check, Blaschke, SchwarzPickReport, SchwarzPickSample};
pub use theta::{lft_solution, theta_build, theta_j_check, Mat2, ThetaEntry, ThetaJCheck, ThetaRep};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hardy::{sphere_groups, sphere_representation};
use crate::qlinalg::{ldl_psd, sylvester_unit, HermitianQMatrix, PsdReport, QMatrix};
use crate::quat::Quaternion;
use crate::series::{QSeries, SliceFn};

/// Interpolation data: distinct nodes in the open unit ball and targets.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Problem {
    nodes: Vec<Quaternion>,
    targets: Vec<Quaternion>,
}

impl Problem {
    pub fn new(nodes: Vec<Quaternion>, targets: Vec<Quaternion>) -> Result<Self> {
        if nodes.len() != targets.len() {
            return Err(Error::Dimension(format!("{} nodes but {} targets", nodes.len(), targets.len())));
        }
        if let Some(q) = nodes.iter().chain(&targets).find(|q| !q.is_finite()) {
            return Err(Error::Domain(format!("non-finite value {q}")));
        }
        if let Some((i, p)) = nodes.iter().enumerate().find(|(_, p)| !(p.abs() < 1.0)) {
            return Err(Error::Domain(format!("node {i} = {p} is not inside the unit ball")));
        }
        for i in 0..nodes.len() {
            for j in i + 1..nodes.len() {
                if nodes[i] == nodes[j] {
                    return Err(Error::Domain(format!("nodes {i} and {j} coincide")));
                }
            }
        }
        Ok(Problem { nodes, targets })
    }

    pub fn nodes(&self) -> &[Quaternion] {
        &self.nodes
    }

    pub fn targets(&self) -> &[Quaternion] {
        &self.targets
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Sub-problem on the given node indices, in that order.
    pub fn select(&self, idx: &[usize]) -> Problem {
        Problem {
            nodes: idx.iter().map(|&i| self.nodes[i]).collect(),
            targets: idx.iter().map(|&i| self.targets[i]).collect(),
        }
    }
}

/// `Σₖ pᵏ (1 − s t̄) q̄ᵏ`, one Pick entry.
pub fn pick_entry(p: Quaternion, s: Quaternion, q: Quaternion, t: Quaternion) -> Result<Quaternion> {
    sylvester_unit(p, q.conj(), Quaternion::ONE - s * t.conj())
}

/// Pick matrix `P` together with the data `T = diag(pᵢ)`, `E = (1…1)ᵀ`,
/// `N = (s₁…sₙ)ᵀ` of the Stein equation `P − TPT* = EE* − NN*`.
#[derive(Clone, Debug, Serialize)]
pub struct PickData {
    pub p: HermitianQMatrix,
    pub nodes: Vec<Quaternion>,
    pub targets: Vec<Quaternion>,
    pub stein_residual: f64,
}

impl PickData {
    pub fn dim(&self) -> usize {
        self.nodes.len()
    }

    pub fn t(&self) -> QMatrix {
        QMatrix::diagonal(&self.nodes)
    }

    pub fn e(&self) -> QMatrix {
        QMatrix::column(&vec![Quaternion::ONE; self.dim()])
    }

    pub fn n(&self) -> QMatrix {
        QMatrix::column(&self.targets)
    }

    /// `1 + max|Pᵢⱼ|`.
    pub fn scale(&self) -> f64 {
        1.0 + self.p.matrix().max_abs()
    }

    /// `max|P − TPT* − EE* + NN*|`.
    pub fn stein_residual_of(p: &QMatrix, nodes: &[Quaternion], targets: &[Quaternion]) -> f64 {
        let n = nodes.len();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let r = p[(i, j)] - nodes[i] * p[(i, j)] * nodes[j].conj() - Quaternion::ONE
                    + targets[i] * targets[j].conj();
                worst = worst.max(r.abs());
            }
        }
        worst
    }

    pub fn psd(&self, tol: f64) -> PsdReport {
        ldl_psd(&self.p, tol)
    }
}

/// Builds the Pick matrix entrywise with Sylvester solves.
pub fn build_pick(problem: &Problem) -> Result<PickData> {
    let n = problem.len();
    let (nodes, targets) = (problem.nodes(), problem.targets());
    let mut p = QMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            p[(i, j)] = pick_entry(nodes[i], targets[i], nodes[j], targets[j])?;
            p[(j, i)] = p[(i, j)].conj();
        }
    }
    let stein_residual = PickData::stein_residual_of(&p, nodes, targets);
    Ok(PickData {
        p: HermitianQMatrix::symmetrize(p),
        nodes: nodes.to_vec(),
        targets: targets.to_vec(),
        stein_residual,
    })
}

/// Default pivot tolerance for Pick matrices, `1e−10·(1 + max|P|)`.
pub fn auto_psd_tol(pick: &PickData) -> f64 {
    1e-10 * pick.scale()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SphereCheck {
    /// Node indices sharing one 2-sphere; the first two are kept.
    pub group: Vec<usize>,
    pub removed: usize,
    pub expected: Quaternion,
    pub got: Quaternion,
    pub consistent: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "status")]
pub enum ReductionStatus {
    Consistent,
    Inconsistent { group: Vec<usize>, node: usize, expected: Quaternion, got: Quaternion },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Reduction {
    pub reduced: Problem,
    /// Indices into the original problem of the nodes kept.
    pub kept: Vec<usize>,
    pub checks: Vec<SphereCheck>,
    pub status: ReductionStatus,
}

impl Reduction {
    pub fn is_consistent(&self) -> bool {
        self.status == ReductionStatus::Consistent
    }
}

/// Removes nodes beyond the second on each 2-sphere, checking each removed
/// target against the value forced by the two kept ones.
pub fn reduce_problem(problem: &Problem, tol: f64) -> Reduction {
    let mut kept = Vec::new();
    let mut checks = Vec::new();
    let mut status = ReductionStatus::Consistent;
    let (nodes, targets) = (problem.nodes(), problem.targets());
    for group in sphere_groups(nodes) {
        kept.extend(group.iter().take(2));
        if group.len() < 3 {
            continue;
        }
        let (a, b) = (group[0], group[1]);
        for &c in &group[2..] {
            let got = targets[c];
            let (expected, ok) = match sphere_representation(nodes[a], targets[a], nodes[b], targets[b], nodes[c]) {
                Ok(v) => (v, (v - got).abs() <= tol),
                Err(_) => (Quaternion::ZERO, false),
            };
            if !ok && status == ReductionStatus::Consistent {
                status = ReductionStatus::Inconsistent { group: group.clone(), node: c, expected, got };
            }
            checks.push(SphereCheck { group: group.clone(), removed: c, expected, got, consistent: ok });
        }
    }
    kept.sort_unstable();
    Reduction { reduced: problem.select(&kept), kept, checks, status }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Classification {
    pub solvable: bool,
    pub determinate: bool,
    pub rank: usize,
    pub min_pivot: f64,
    pub tol: f64,
}

/// Solvable iff `P ⪰ 0`; determinate iff also `rank P < n`. Assumes the
/// problem has already been reduced.
pub fn classify_pick(pick: &PickData, tol: f64) -> Classification {
    let rep = pick.psd(tol);
    Classification {
        solvable: rep.is_psd,
        determinate: rep.is_psd && rep.rank < pick.dim(),
        rank: rep.rank,
        min_pivot: rep.min_pivot,
        tol,
    }
}

/// [`classify_pick`] with [`auto_psd_tol`].
pub fn classify(problem: &Problem) -> Result<Classification> {
    let pick = build_pick(problem)?;
    let tol = auto_psd_tol(&pick);
    Ok(classify_pick(&pick, tol))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Provenance {
    /// `R ⋆ Q^{−⋆}` from a null vector of `P`.
    Determinate { null_vector: Vec<Quaternion> },
    /// Linear fractional image of a Schur-class parameter.
    Lft { parameter: Vec<Quaternion> },
    /// Linear fractional image of the unimodular constant `γ`.
    ExtendedGamma { gamma: Quaternion, indices: Vec<usize> },
    /// Constant solution.
    Constant { value: Quaternion },
}

/// A computed interpolant: a pointwise evaluator, a truncated series, and
/// residuals at the interpolation nodes along both paths.
#[derive(Clone, Debug)]
pub struct SolutionHandle {
    pub evaluator: SliceFn,
    pub series: QSeries,
    pub provenance: Provenance,
    pub residuals: Vec<f64>,
    pub series_residuals: Vec<f64>,
}

impl SolutionHandle {
    pub(crate) fn new(evaluator: SliceFn, series: QSeries, provenance: Provenance, problem: &Problem) -> Self {
        let mut residuals = Vec::with_capacity(problem.len());
        let mut series_residuals = Vec::with_capacity(problem.len());
        for (&p, &s) in problem.nodes().iter().zip(problem.targets()) {
            residuals.push(evaluator.eval(p).map(|v| (v - s).abs()).unwrap_or(f64::INFINITY));
            series_residuals.push((series.eval(p) - s).abs());
        }
        SolutionHandle { evaluator, series, provenance, residuals, series_residuals }
    }

    pub fn eval(&self, p: Quaternion) -> Result<Quaternion> {
        self.evaluator.eval(p)
    }

    pub fn eval_series(&self, p: Quaternion) -> Quaternion {
        self.series.eval(p)
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    pub fn max_series_residual(&self) -> f64 {
        self.series_residuals.iter().copied().fold(0.0, f64::max)
    }
}
