//! Seeded random generators for quaternions, Schur-class functions and
//! interpolation problems. Everything is driven by a ChaCha stream so runs are
//! reproducible from a seed.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::npsolve::Problem;
use crate::quat::{same_sphere, Quaternion};
use crate::series::{QSeries, DEFAULT_ORDER};

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform in the open ball of radius `radius`.
pub fn rand_quat(rng: &mut SampleRng, radius: f64) -> Quaternion {
    loop {
        let q = Quaternion::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        let n = q.abs();
        if n < 1.0 && n > 1e-3 {
            return q.scale(radius);
        }
    }
}

pub fn rand_unit(rng: &mut SampleRng) -> Quaternion {
    let q = rand_quat(rng, 1.0);
    q / q.abs()
}

/// Random unit imaginary quaternion.
pub fn rand_imag_unit(rng: &mut SampleRng) -> Quaternion {
    loop {
        let q = rand_quat(rng, 1.0).im();
        if q.abs() > 1e-3 {
            return q / q.abs();
        }
    }
}

/// Coefficients uniform in the ball of radius `radius`.
pub fn rand_series(rng: &mut SampleRng, order: usize, radius: f64) -> QSeries {
    QSeries::from_fn(order, |_| rand_quat(rng, radius))
}

/// Blaschke factor `(p − a) ⋆ (1 − p ā)^{−⋆}` as a series:
/// `b₀ = −a`, `bₖ = (1 − |a|²) āᵏ⁻¹`.
pub fn blaschke_series(a: Quaternion, order: usize) -> QSeries {
    let ab = a.conj();
    let s = 1.0 - a.norm_sqr();
    let mut pow = Quaternion::ONE;
    QSeries::from_fn(order, |k| {
        if k == 0 {
            -a
        } else {
            let c = pow * s;
            pow *= ab;
            c
        }
    })
}

/// A random element of the closed Schur class, built from operations that
/// preserve contractivity: star products of Blaschke factors and contractive
/// constants, polynomials with `Σ|cₖ| ≤ bound`, and real convex mixtures.
/// `bound < 1` keeps it strictly inside the ball.
pub fn rand_schur(rng: &mut SampleRng, bound: f64, order: usize) -> QSeries {
    let kind = rng.gen_range(0..3);
    let s = match kind {
        0 => {
            let deg = rng.gen_range(1..=3);
            let mut acc = QSeries::constant(rand_unit(rng) * bound);
            for _ in 0..deg {
                let a = rand_quat(rng, 0.8);
                acc = acc.star_mul_to(&blaschke_series(a, order), order);
            }
            acc
        }
        1 => {
            let deg = rng.gen_range(1..=4);
            let raw: Vec<Quaternion> = (0..=deg).map(|_| rand_quat(rng, 1.0)).collect();
            let total: f64 = raw.iter().map(|q| q.abs()).sum();
            QSeries::new(raw.into_iter().map(|q| q * (bound / total)).collect())
        }
        _ => {
            let t: f64 = rng.gen_range(0.2..0.8);
            let a = rand_quat(rng, 0.7);
            let b1 = blaschke_series(a, order).scale_right(rand_unit(rng));
            let poly = QSeries::new(vec![rand_quat(rng, 0.5), rand_quat(rng, 0.5)]);
            let total = poly.coeffs().iter().map(|q| q.abs()).sum::<f64>().max(1e-12);
            let poly = poly.scale_right(Quaternion::real(1.0 / total));
            b1.scale_right(Quaternion::real(t * bound)).add(&poly.scale_right(Quaternion::real((1.0 - t) * bound)))
        }
    };
    s.truncate(order)
}

/// `n` nodes in the ball of radius `radius`, pairwise on distinct spheres.
pub fn rand_nodes(rng: &mut SampleRng, n: usize, radius: f64) -> Vec<Quaternion> {
    let mut nodes: Vec<Quaternion> = Vec::with_capacity(n);
    while nodes.len() < n {
        let p = rand_quat(rng, radius);
        if nodes.iter().all(|&q| !same_sphere(p, q, 1e-3)) {
            nodes.push(p);
        }
    }
    nodes
}

/// Interpolation data sampled from a known function.
pub fn problem_from(f: &QSeries, nodes: Vec<Quaternion>) -> Problem {
    let targets = nodes.iter().map(|&p| f.eval(p)).collect();
    Problem::new(nodes, targets).expect("sampled nodes are valid")
}

/// A problem whose data come from a random Schur-class generator.
pub fn rand_schur_problem(rng: &mut SampleRng, n: usize, radius: f64) -> (QSeries, Problem) {
    let s = rand_schur(rng, 1.0, DEFAULT_ORDER);
    let nodes = rand_nodes(rng, n, radius);
    let pb = problem_from(&s, nodes);
    (s, pb)
}

/// A problem whose Pick matrix is singular: data from a Blaschke product of
/// degree `deg < n` times a unimodular constant.
pub fn rand_singular_problem(rng: &mut SampleRng, n: usize, deg: usize, radius: f64) -> (QSeries, Problem) {
    assert!(deg < n);
    let mut s = QSeries::constant(rand_unit(rng));
    for _ in 0..deg {
        let a = rand_quat(rng, 0.6);
        s = s.star_mul_to(&blaschke_series(a, DEFAULT_ORDER), DEFAULT_ORDER);
    }
    let nodes = rand_nodes(rng, n, radius);
    let pb = problem_from(&s, nodes);
    (s, pb)
}
