//! Front end for the `quatpick` binary: input files, the solve pipeline and
//! JSON reports.
//!
//! Exit codes: `0` success, `1` I/O or schema error, `2` unsolvable problem
//! or failed check, `3` inconsistent data on a 2-sphere.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::hardy::schur_toeplitz_test;
use crate::npsolve::{
    auto_psd_tol, bs_gram, build_pick, classify_pick, determinate_solve_with_tol, extended_gamma_solve_with_tol,
    lft_solution, reduce_problem, schwarz_pick_check, theta_build, theta_j_check, Classification, Mat2, PickData,
    Problem, Provenance, Reduction, SchwarzPickSample, SolutionHandle,
};
use crate::qlinalg::{complex_embed, hermitian_eigenvalues, ldl_psd, sylvester_series, sylvester_unit};
use crate::quat::Quaternion;
use crate::sampling::{rand_quat, rng, SampleRng};
use crate::series::{QSeries, DEFAULT_ORDER};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_FAIL: i32 = 2;
pub const EXIT_INCONSISTENT: i32 = 3;

/// Number of sample points used by `solve` and `theta` for their checks.
const CHECK_SAMPLES: usize = 64;

#[derive(Debug, Parser)]
#[command(name = "quatpick", version, about = "Quaternionic Nevanlinna-Pick interpolation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify a problem and compute a solution.
    Solve {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
        /// Add wall-clock timing to the report (makes output non-reproducible).
        #[arg(long)]
        timing: bool,
    },
    /// Toeplitz test of a coefficient file.
    Schur {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 64)]
        n_max: usize,
    },
    /// Build the 2×2 function parametrizing all solutions.
    Theta {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Run fixture expectations and property suites.
    Verify {
        /// A fixture file or a directory of `*.json` fixtures.
        path: PathBuf,
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub truncation: Option<usize>,
    /// Pivot tolerance, or `auto`.
    #[arg(long)]
    pub psd_tol: Option<PsdTol>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Emit per-sample Schwarz–Pick values as CSV on standard output.
    #[arg(long)]
    pub grid: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PsdTol {
    Value(f64),
    #[serde(with = "auto_tag")]
    Auto,
}

mod auto_tag {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str("auto")
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<(), D::Error> {
        let s = String::deserialize(d)?;
        if s == "auto" {
            Ok(())
        } else {
            Err(serde::de::Error::custom(format!("expected \"auto\" or a number, got {s:?}")))
        }
    }
}

impl FromStr for PsdTol {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "auto" {
            return Ok(PsdTol::Auto);
        }
        match s.parse::<f64>() {
            Ok(v) if v.is_finite() && v >= 0.0 => Ok(PsdTol::Value(v)),
            _ => Err(format!("expected `auto` or a nonnegative number, got `{s}`")),
        }
    }
}

impl PsdTol {
    fn resolve(self, pick: &PickData) -> f64 {
        match self {
            PsdTol::Value(v) => v,
            PsdTol::Auto => auto_psd_tol(pick),
        }
    }

    fn explicit(self) -> Option<f64> {
        match self {
            PsdTol::Value(v) => Some(v),
            PsdTol::Auto => None,
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileOptions {
    pub truncation: Option<usize>,
    pub psd_tol: Option<PsdTol>,
    pub seed: Option<u64>,
}

/// Expected outcome recorded in a fixture, checked by `verify`.
#[derive(Debug, Clone, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Expect {
    pub exit: Option<i32>,
    pub solvable: Option<bool>,
    pub determinate: Option<bool>,
    pub rank: Option<usize>,
    /// `[p, S(p)]` pairs the solution must reproduce to `1e−8`.
    #[serde(default)]
    pub values: Vec<[Quaternion; 2]>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub nodes: Vec<Quaternion>,
    pub targets: Vec<Quaternion>,
    #[serde(default)]
    pub options: FileOptions,
    #[serde(default)]
    pub expect: Option<Expect>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum CoeffFile {
    Bare(Vec<Quaternion>),
    Tagged { coefficients: Vec<Quaternion> },
}

/// Options after merging file values, flags and defaults.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Options {
    pub truncation: usize,
    pub psd_tol: PsdTol,
    pub seed: u64,
}

impl Options {
    fn merge(file: &FileOptions, common: &Common) -> Result<Self, String> {
        let truncation = common.truncation.or(file.truncation).unwrap_or(DEFAULT_ORDER);
        if !(1..=4096).contains(&truncation) {
            return Err(format!("truncation {truncation} outside 1..=4096"));
        }
        let psd_tol = common.psd_tol.or(file.psd_tol).unwrap_or(PsdTol::Auto);
        if let PsdTol::Value(v) = psd_tol {
            if !(v.is_finite() && v >= 0.0) {
                return Err(format!("psd_tol {v} must be a nonnegative number"));
            }
        }
        Ok(Options { truncation, psd_tol, seed: common.seed.or(file.seed).unwrap_or(0) })
    }
}

#[derive(Debug)]
pub enum CliError {
    Io(String),
    Schema(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Io(m) => write!(f, "I/O error: {m}"),
            CliError::Schema(m) => write!(f, "schema error: {m}"),
        }
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Schema(format!("{}: line {} column {}: {e}", path.display(), e.line(), e.column())))
}

pub fn load_problem(path: &Path) -> Result<(Problem, ProblemFile), CliError> {
    let file: ProblemFile = read_json(path)?;
    let problem = Problem::new(file.nodes.clone(), file.targets.clone())
        .map_err(|e| CliError::Schema(format!("{}: {e}", path.display())))?;
    Ok((problem, file))
}

fn sample_points(r: &mut SampleRng, m: usize, radius: f64) -> Vec<Quaternion> {
    (0..m).map(|_| rand_quat(r, radius)).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct SolutionReport {
    pub provenance: Provenance,
    pub truncation: usize,
    /// `|S(pᵢ) − sᵢ|` at every input node, pointwise path.
    pub residuals: Vec<f64>,
    /// The same from the truncated series.
    pub series_residuals: Vec<f64>,
    pub max_residual: f64,
    /// For determinate problems: largest gap between the two independent
    /// constructions at the check points.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cross_check: Option<f64>,
    pub coefficients: Vec<Quaternion>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SchwarzPickSummary {
    pub p1: Quaternion,
    pub samples: usize,
    pub max_violation: f64,
    pub equality_points: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    pub problem: Problem,
    pub options: Options,
    pub reduction: Reduction,
    pub pick_matrix: Vec<Vec<Quaternion>>,
    pub stein_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classification: Option<Classification>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solution: Option<SolutionReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub schwarz_pick: Option<SchwarzPickSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bs_gram_min_pivot: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

/// Output of [`solve_pipeline`].
pub struct SolveOutcome {
    pub report: SolveReport,
    pub exit: i32,
    pub solution: Option<SolutionHandle>,
    pub grid: Vec<SchwarzPickSample>,
}

/// Reduction, classification, solution and checks for one problem.
pub fn solve_pipeline(problem: &Problem, opts: Options) -> SolveOutcome {
    let sphere_tol = 1e-9 * (1.0 + problem.targets().iter().map(|s| s.abs()).fold(0.0, f64::max));
    let reduction = reduce_problem(problem, sphere_tol);
    let reduced = reduction.reduced.clone();
    let mut report = SolveReport {
        problem: problem.clone(),
        options: opts,
        reduction,
        pick_matrix: Vec::new(),
        stein_residual: 0.0,
        classification: None,
        solution: None,
        schwarz_pick: None,
        bs_gram_min_pivot: None,
        error: None,
        timing_ms: None,
    };
    let pick = match build_pick(&reduced) {
        Ok(p) => p,
        Err(e) => {
            report.error = Some(e.to_string());
            return SolveOutcome { report, exit: EXIT_IO, solution: None, grid: Vec::new() };
        }
    };
    report.pick_matrix = pick.p.matrix().to_rows();
    report.stein_residual = pick.stein_residual;
    if !report.reduction.is_consistent() {
        return SolveOutcome { report, exit: EXIT_INCONSISTENT, solution: None, grid: Vec::new() };
    }
    let tol = opts.psd_tol.resolve(&pick);
    let class = classify_pick(&pick, tol);
    report.classification = Some(class.clone());
    if !class.solvable {
        return SolveOutcome { report, exit: EXIT_FAIL, solution: None, grid: Vec::new() };
    }

    let mut r = rng(opts.seed);
    let checks = sample_points(&mut r, CHECK_SAMPLES, 0.95);
    let explicit = opts.psd_tol.explicit();
    let solved = if class.determinate {
        determinate_solve_with_tol(&reduced, explicit).and_then(|s| {
            let g = extended_gamma_solve_with_tol(&reduced, explicit)?;
            let mut gap = 0.0f64;
            for &p in checks.iter().filter(|p| p.abs() <= 0.7) {
                gap = gap.max((s.eval(p)? - g.eval(p)?).abs());
            }
            Ok((s, Some(gap)))
        })
    } else {
        theta_build(&pick, opts.truncation)
            .and_then(|th| lft_solution(&th, &QSeries::constant(Quaternion::ZERO)))
            .map(|s| (s, None))
    };
    let (sol, cross_check) = match solved {
        Ok(v) => v,
        Err(e) => {
            report.error = Some(e.to_string());
            return SolveOutcome { report, exit: EXIT_FAIL, solution: None, grid: Vec::new() };
        }
    };

    let mut residuals = Vec::with_capacity(problem.len());
    let mut series_residuals = Vec::with_capacity(problem.len());
    for (&p, &s) in problem.nodes().iter().zip(problem.targets()) {
        residuals.push(sol.eval(p).map(|v| (v - s).abs()).unwrap_or(f64::INFINITY));
        series_residuals.push((sol.eval_series(p) - s).abs());
    }
    let max_residual = residuals.iter().copied().fold(0.0, f64::max);
    report.solution = Some(SolutionReport {
        provenance: sol.provenance.clone(),
        truncation: opts.truncation.min(sol.series.order()),
        residuals,
        series_residuals,
        max_residual,
        cross_check,
        coefficients: sol.series.truncate(opts.truncation.min(sol.series.order())).coeffs().to_vec(),
    });

    let mut grid = Vec::new();
    let p1 = problem.nodes()[0];
    match schwarz_pick_check(&sol.evaluator, p1, &checks) {
        Ok(sp) => {
            report.schwarz_pick = Some(SchwarzPickSummary {
                p1,
                samples: sp.samples.len(),
                max_violation: sp.max_violation,
                equality_points: sp.equality_points.len(),
            });
            grid = sp.samples;
        }
        Err(e) => report.error = Some(format!("Schwarz-Pick check: {e}")),
    }
    if let Ok((_, rep)) = bs_gram(&reduced, &pick, &sol.evaluator, &checks[..4.min(checks.len())]) {
        report.bs_gram_min_pivot = Some(rep.min_pivot);
    }
    SolveOutcome { report, exit: EXIT_OK, solution: Some(sol), grid }
}

#[derive(Debug, Clone, Serialize)]
pub struct SchurReport {
    pub order: usize,
    pub n_max: usize,
    pub tol: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<usize>,
    pub min_pivot: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ThetaReport {
    pub problem: Problem,
    pub options: Options,
    pub pick_matrix: Vec<Vec<Quaternion>>,
    pub positive_definite: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa: Option<Vec<[Quaternion; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta_at_one: Option<Mat2>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j_kernel_min_pivot: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j_kernel_direct_diff: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta22_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coefficients: Option<Vec<Mat2>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FixtureResult {
    pub file: String,
    pub exit: i32,
    pub pass: bool,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Section {
    pub name: String,
    pub checked: usize,
    pub failed: usize,
    pub worst: f64,
    pub tolerance: f64,
}

impl Section {
    fn new(name: &str, tolerance: f64) -> Self {
        Section { name: name.into(), tolerance, ..Default::default() }
    }

    /// Records an error measure, failing when it exceeds the tolerance.
    fn record(&mut self, err: f64) {
        self.checked += 1;
        self.worst = self.worst.max(err);
        if !(err <= self.tolerance) {
            self.failed += 1;
        }
    }

    fn record_bool(&mut self, ok: bool) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub samples: usize,
    pub seed: u64,
    pub fixtures: Vec<FixtureResult>,
    pub sections: Vec<Section>,
    pub pass: bool,
}

fn write_output(out: &Option<PathBuf>, text: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => stdout.write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string())),
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn grid_csv(samples: &[SchwarzPickSample]) -> String {
    let mut s = String::from("p_w,p_x,p_y,p_z,lhs,rhs,slack\n");
    for x in samples {
        let _ = writeln!(s, "{},{},{},{},{},{},{}", x.p.w, x.p.x, x.p.y, x.p.z, x.lhs, x.rhs, x.slack());
    }
    s
}

/// Writes the JSON report, plus the CSV grid on standard output when asked.
/// With `--grid` and no `--out`, only the CSV goes to standard output.
fn emit<T: Serialize>(
    common: &Common,
    report: &T,
    grid: &[SchwarzPickSample],
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    if common.grid {
        if common.out.is_some() {
            write_output(&common.out, &to_json(report), stdout)?;
        }
        write_output(&None, &grid_csv(grid), stdout)
    } else {
        write_output(&common.out, &to_json(report), stdout)
    }
}

fn cmd_solve(file: &Path, common: &Common, timing: bool, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let start = Instant::now();
    let (problem, pf) = load_problem(file)?;
    let opts = Options::merge(&pf.options, common).map_err(CliError::Schema)?;
    let mut outcome = solve_pipeline(&problem, opts);
    if timing {
        outcome.report.timing_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    emit(common, &outcome.report, &outcome.grid, stdout)?;
    Ok(outcome.exit)
}

fn cmd_schur(file: &Path, common: &Common, n_max: usize, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let coeffs = match read_json::<CoeffFile>(file)? {
        CoeffFile::Bare(c) | CoeffFile::Tagged { coefficients: c } => c,
    };
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(CliError::Schema(format!("{}: non-finite coefficient", file.display())));
    }
    let s = QSeries::new(coeffs);
    let tol = match common.psd_tol {
        Some(PsdTol::Value(v)) => v,
        _ => 1e-9,
    };
    let t = schur_toeplitz_test(&s, n_max, tol);
    let report = SchurReport {
        order: s.order(),
        n_max,
        tol,
        pass: t.pass,
        first_failure: t.first_failure,
        min_pivot: t.min_pivot,
    };
    write_output(&common.out, &to_json(&report), stdout)?;
    Ok(if t.pass { EXIT_OK } else { EXIT_FAIL })
}

fn cmd_theta(file: &Path, common: &Common, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let (problem, pf) = load_problem(file)?;
    let opts = Options::merge(&pf.options, common).map_err(CliError::Schema)?;
    let pick = build_pick(&problem).map_err(|e| CliError::Schema(e.to_string()))?;
    let mut report = ThetaReport {
        problem: problem.clone(),
        options: opts,
        pick_matrix: pick.p.matrix().to_rows(),
        positive_definite: false,
        kappa: None,
        theta_at_one: None,
        j_kernel_min_pivot: None,
        j_kernel_direct_diff: None,
        theta22_min: None,
        coefficients: None,
        error: None,
    };
    let exit = match theta_build(&pick, opts.truncation) {
        Ok(th) => {
            report.positive_definite = true;
            let mut r = rng(opts.seed);
            let pts = sample_points(&mut r, 8, 0.9);
            let chk = theta_j_check(&th, &pts);
            let mut t22 = f64::INFINITY;
            for p in sample_points(&mut r, CHECK_SAMPLES, 0.95) {
                if let Ok(v) = th.entry(1, 1).eval(p) {
                    t22 = t22.min(v.abs());
                }
            }
            report.kappa = Some(th.kappa.clone());
            report.theta_at_one = th.eval(Quaternion::ONE).ok();
            report.coefficients = Some(th.coeffs.clone());
            match chk {
                Ok(c) => {
                    report.j_kernel_min_pivot = Some(c.psd.min_pivot);
                    report.j_kernel_direct_diff = Some(c.direct_diff);
                    report.theta22_min = Some(t22.min(c.theta22_min));
                    if c.psd.min_pivot >= -1e-9 && t22 >= 1.0 - 1e-12 {
                        EXIT_OK
                    } else {
                        EXIT_FAIL
                    }
                }
                Err(e) => {
                    report.error = Some(e.to_string());
                    EXIT_FAIL
                }
            }
        }
        Err(e) => {
            report.error = Some(e.to_string());
            EXIT_FAIL
        }
    };
    write_output(&common.out, &to_json(&report), stdout)?;
    Ok(exit)
}

fn fixture_paths(path: &Path) -> Result<Vec<PathBuf>, CliError> {
    if path.is_dir() {
        let mut v: Vec<PathBuf> = std::fs::read_dir(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "json"))
            .collect();
        v.sort();
        Ok(v)
    } else if path.is_file() {
        Ok(vec![path.to_path_buf()])
    } else {
        Err(CliError::Io(format!("{}: no such file or directory", path.display())))
    }
}

fn check_expect(expect: &Expect, outcome: &SolveOutcome) -> Vec<String> {
    let mut failures = Vec::new();
    if let Some(e) = expect.exit {
        if e != outcome.exit {
            failures.push(format!("exit {} (expected {e})", outcome.exit));
        }
    }
    let class = outcome.report.classification.as_ref();
    let mut flag = |name: &str, want: Option<bool>, got: Option<bool>| {
        if let Some(w) = want {
            if got != Some(w) {
                failures.push(format!("{name} {got:?} (expected {w})"));
            }
        }
    };
    flag("solvable", expect.solvable, class.map(|c| c.solvable));
    flag("determinate", expect.determinate, class.map(|c| c.determinate));
    if let Some(r) = expect.rank {
        if class.map(|c| c.rank) != Some(r) {
            failures.push(format!("rank {:?} (expected {r})", class.map(|c| c.rank)));
        }
    }
    for [p, v] in &expect.values {
        match outcome.solution.as_ref().map(|s| s.eval(*p)) {
            Some(Ok(got)) if (got - *v).abs() <= 1e-8 => {}
            other => failures.push(format!("value at {p}: {other:?} (expected {v})")),
        }
    }
    failures
}

/// Fixture expectations plus the property suites, each driven by `samples`
/// seeded draws.
pub fn verify(
    paths: &[PathBuf],
    samples: usize,
    common: &Common,
) -> Result<(VerifyReport, Vec<SchwarzPickSample>), CliError> {
    let seed = common.seed.unwrap_or(0);
    let mut r = rng(seed);
    let mut fixtures = Vec::new();
    let mut solved: Vec<(Problem, SolutionHandle)> = Vec::new();
    for path in paths {
        let (problem, pf) = load_problem(path)?;
        let opts = Options::merge(&pf.options, common).map_err(CliError::Schema)?;
        let outcome = solve_pipeline(&problem, opts);
        let failures = pf.expect.as_ref().map(|e| check_expect(e, &outcome)).unwrap_or_default();
        fixtures.push(FixtureResult {
            file: path.file_name().map(|f| f.to_string_lossy().into_owned()).unwrap_or_default(),
            exit: outcome.exit,
            pass: failures.is_empty(),
            failures,
        });
        if let Some(sol) = outcome.solution {
            solved.push((outcome.report.reduction.reduced.clone(), sol));
        }
    }

    let mut sylv = Section::new("series_vs_sylvester", 1e-12);
    for _ in 0..samples {
        let p = rand_quat(&mut r, 0.8);
        let q = rand_quat(&mut r, 0.8);
        let c = rand_quat(&mut r, 1.0);
        let rho = p.abs() * q.abs();
        let exact = sylvester_unit(p, q.conj(), c).expect("inside the ball");
        let ser = sylvester_series(p, q.conj(), c, 200);
        let bound = rho.powi(200) * 2.0 / (1.0 - rho) * c.abs();
        sylv.record(((exact - ser).abs() - bound).max(0.0));
    }

    let mut ldl = Section::new("ldl_vs_embedding", 0.0);
    for _ in 0..samples.div_ceil(10) {
        let n = 1 + (rand_quat(&mut r, 1.0).abs() * 6.0) as usize;
        let a = crate::qlinalg::QMatrix::from_fn(n, n, |_, _| rand_quat(&mut r, 1.0));
        let shift = rand_quat(&mut r, 1.0).w * 2.0;
        let mut h = a.matmul(&a.adjoint()).expect("square");
        for i in 0..n {
            h[(i, i)] -= Quaternion::real(shift);
        }
        let h = crate::qlinalg::HermitianQMatrix::symmetrize(h);
        let eig = hermitian_eigenvalues(&complex_embed(h.matrix()));
        let min = eig.iter().copied().fold(f64::INFINITY, f64::min);
        if min.abs() < 1e-6 {
            continue;
        }
        let rep = ldl_psd(&h, crate::qlinalg::default_psd_tol(&h));
        ldl.record_bool(rep.is_psd == (min > 0.0));
    }

    let mut pw = Section::new("pointwise_vs_series", 1e-8);
    let mut sp = Section::new("schwarz_pick", 1e-10);
    let mut bs = Section::new("bs_gram", 1e-9);
    let mut grid = Vec::new();
    for (problem, sol) in &solved {
        let pts = sample_points(&mut r, samples, 0.7);
        for &p in &pts {
            let a = sol.eval(p).unwrap_or(Quaternion::real(f64::NAN));
            let (b, tail) = sol.series.eval_with_tail(p);
            pw.record(((a - b).abs() - tail).max(0.0));
        }
        let spts = sample_points(&mut r, samples, 0.95);
        match schwarz_pick_check(&sol.evaluator, problem.nodes()[0], &spts) {
            Ok(rep) => {
                for s in &rep.samples {
                    sp.record((s.lhs - s.rhs).max(0.0));
                }
                grid.extend(rep.samples);
            }
            Err(_) => sp.record(f64::INFINITY),
        }
        if let Ok(pick) = build_pick(problem) {
            for chunk in pts.chunks(4).take(samples.div_ceil(40)) {
                match bs_gram(problem, &pick, &sol.evaluator, chunk) {
                    Ok((_, rep)) => bs.record((-rep.min_pivot).max(0.0)),
                    Err(_) => bs.record(f64::INFINITY),
                }
            }
        }
    }

    let sections = vec![sylv, ldl, pw, sp, bs];
    let pass = fixtures.iter().all(|f| f.pass) && sections.iter().all(|s| s.failed == 0);
    Ok((VerifyReport { samples, seed, fixtures, sections, pass }, grid))
}

fn cmd_verify(path: &Path, common: &Common, samples: usize, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let paths = fixture_paths(path)?;
    let (report, grid) = verify(&paths, samples, common)?;
    emit(common, &report, &grid, stdout)?;
    Ok(if report.pass { EXIT_OK } else { EXIT_FAIL })
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_IO } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(stderr, "{}", e.render()) } else { write!(stdout, "{}", e.render()) };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Solve { file, common, timing } => cmd_solve(file, common, *timing, stdout),
        Command::Schur { file, common, n_max } => cmd_schur(file, common, *n_max, stdout),
        Command::Theta { file, common } => cmd_theta(file, common, stdout),
        Command::Verify { path, common, samples } => cmd_verify(path, common, *samples, stdout),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "quatpick: {e}");
            EXIT_IO
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn psd_tol_parsing() {
        assert_eq!("auto".parse::<PsdTol>().unwrap(), PsdTol::Auto);
        assert_eq!("1e-9".parse::<PsdTol>().unwrap(), PsdTol::Value(1e-9));
        assert!("-1".parse::<PsdTol>().is_err());
        assert!("x".parse::<PsdTol>().is_err());
        let v: PsdTol = serde_json::from_str("\"auto\"").unwrap();
        assert_eq!(v, PsdTol::Auto);
        let v: PsdTol = serde_json::from_str("1e-8").unwrap();
        assert_eq!(v, PsdTol::Value(1e-8));
        assert_eq!(serde_json::to_string(&PsdTol::Auto).unwrap(), "\"auto\"");
    }

    #[test]
    fn schema_errors_carry_location() {
        let dir = std::env::temp_dir().join(format!("quatpick-schema-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let f = dir.join("bad.json");
        std::fs::write(&f, "{\n  \"nodes\": [[0, 0, 0]],\n  \"targets\": []\n}").unwrap();
        match load_problem(&f) {
            Err(CliError::Schema(m)) => assert!(m.contains("line 2"), "{m}"),
            other => panic!("{other:?}"),
        }
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn pipeline_single_node() {
        let pb = Problem::new(vec![Quaternion::ZERO], vec![Quaternion::real(0.5)]).unwrap();
        let opts = Options { truncation: 64, psd_tol: PsdTol::Auto, seed: 0 };
        let out = solve_pipeline(&pb, opts);
        assert_eq!(out.exit, EXIT_OK);
        let c = out.report.classification.unwrap();
        assert!(c.solvable && !c.determinate);
        let s = out.solution.unwrap();
        assert!((s.eval(Quaternion::ZERO).unwrap() - Quaternion::real(0.5)).abs() < 1e-14);
    }
}
