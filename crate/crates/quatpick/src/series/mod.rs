//! Truncated left power series `Σ pᵏ fₖ` and their star algebra.
//!
//! Coefficient-level operations live on [`QSeries`]; the pointwise formulas
//! (`g⋆f(p) = g(p) f(g(p)⁻¹ p g(p))` and `f^{−⋆}(p) = f(p̃)⁻¹`) live in
//! [`slice`]. The two are kept independent so each can check the other.

pub mod slice;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quat::Quaternion;

pub use slice::{right_star_apply_pointwise, star_apply_pointwise, star_inverse_pointwise, SliceEval, SliceFn};

/// Default truncation degree for series produced by the solver.
pub const DEFAULT_ORDER: usize = 256;

/// `Σ_{k=0}^{N} pᵏ fₖ` with `N = order()`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct QSeries {
    coeffs: Vec<Quaternion>,
}

impl QSeries {
    /// Empty coefficient lists are promoted to the zero constant.
    pub fn new(mut coeffs: Vec<Quaternion>) -> Self {
        if coeffs.is_empty() {
            coeffs.push(Quaternion::ZERO);
        }
        QSeries { coeffs }
    }

    pub fn constant(c: Quaternion) -> Self {
        QSeries { coeffs: vec![c] }
    }

    pub fn zero(order: usize) -> Self {
        QSeries { coeffs: vec![Quaternion::ZERO; order + 1] }
    }

    /// `pᵏ c`.
    pub fn monomial(k: usize, c: Quaternion) -> Self {
        let mut coeffs = vec![Quaternion::ZERO; k + 1];
        coeffs[k] = c;
        QSeries { coeffs }
    }

    pub fn from_fn(order: usize, f: impl FnMut(usize) -> Quaternion) -> Self {
        QSeries { coeffs: (0..=order).map(f).collect() }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Quaternion] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Quaternion {
        self.coeffs.get(k).copied().unwrap_or(Quaternion::ZERO)
    }

    pub fn max_coeff(&self) -> f64 {
        self.coeffs.iter().map(|q| q.abs()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|q| q.is_finite())
    }

    pub fn truncate(&self, order: usize) -> Self {
        QSeries::from_fn(order, |k| self.coeff(k))
    }

    /// `Σ pᵏ fₖ`, accumulated with iterated left powers of `p`.
    pub fn eval(&self, p: Quaternion) -> Quaternion {
        let mut acc = Quaternion::ZERO;
        let mut pk = Quaternion::ONE;
        for &c in &self.coeffs {
            acc += pk * c;
            pk *= p;
        }
        acc
    }

    /// Value together with the bound `max|fₖ|·|p|^{N+1}/(1−|p|)` on the
    /// omitted tail, assuming later coefficients stay below the largest
    /// retained one.
    pub fn eval_with_tail(&self, p: Quaternion) -> (Quaternion, f64) {
        (self.eval(p), self.tail_bound(p.abs()))
    }

    pub fn tail_bound(&self, r: f64) -> f64 {
        if r >= 1.0 {
            return f64::INFINITY;
        }
        self.max_coeff() * r.powi(self.order() as i32 + 1) / (1.0 - r)
    }

    /// Right-convention value `Σ fₖ pᵏ`.
    pub fn eval_right(&self, p: Quaternion) -> Quaternion {
        let mut acc = Quaternion::ZERO;
        let mut pk = Quaternion::ONE;
        for &c in &self.coeffs {
            acc += c * pk;
            pk *= p;
        }
        acc
    }

    /// Slice regular conjugate: coefficients conjugated.
    pub fn conj_series(&self) -> Self {
        QSeries { coeffs: self.coeffs.iter().map(|c| c.conj()).collect() }
    }

    pub fn add(&self, other: &QSeries) -> Self {
        let n = self.order().max(other.order());
        QSeries::from_fn(n, |k| self.coeff(k) + other.coeff(k))
    }

    pub fn sub(&self, other: &QSeries) -> Self {
        let n = self.order().max(other.order());
        QSeries::from_fn(n, |k| self.coeff(k) - other.coeff(k))
    }

    pub fn neg(&self) -> Self {
        QSeries { coeffs: self.coeffs.iter().map(|&c| -c).collect() }
    }

    /// `c ⋆ f`: coefficients `c fₖ`.
    pub fn scale_left(&self, c: Quaternion) -> Self {
        QSeries { coeffs: self.coeffs.iter().map(|&f| c * f).collect() }
    }

    /// `f ⋆ c`: coefficients `fₖ c`, which is also the pointwise product `f(p) c`.
    pub fn scale_right(&self, c: Quaternion) -> Self {
        QSeries { coeffs: self.coeffs.iter().map(|&f| f * c).collect() }
    }

    /// `g ⋆ f` with `g = self` on the left, truncated at
    /// `min(order_g + order_f, max(order_g, order_f, DEFAULT_ORDER))`.
    pub fn star_mul(&self, f: &QSeries) -> Self {
        let cap = self.order().max(f.order()).max(DEFAULT_ORDER);
        self.star_mul_to(f, (self.order() + f.order()).min(cap))
    }

    /// `g ⋆ f` truncated at `order`.
    pub fn star_mul_to(&self, f: &QSeries, order: usize) -> Self {
        QSeries::from_fn(order, |k| convolve(&self.coeffs, &f.coeffs, k))
    }

    /// Right slice product of the right-convention series `Σ gₖ pᵏ` and
    /// `Σ fₖ pᵏ`. The coefficient formula matches [`QSeries::star_mul`]; only
    /// the evaluation convention ([`QSeries::eval_right`]) differs.
    pub fn right_star_mul(&self, f: &QSeries) -> Self {
        self.star_mul(f)
    }

    /// Star inverse by `a₀ = f₀⁻¹`, `aₖ = −f₀⁻¹ Σ_{j=1..k} fⱼ a_{k−j}`.
    pub fn star_inverse(&self, order: usize) -> Result<Self> {
        let f0 = self.coeffs[0];
        let thresh = 1e-12 * (1.0 + self.max_coeff());
        if f0.abs() <= thresh {
            return Err(Error::NotInvertible(f0.abs()));
        }
        let f0inv = f0.inv_unchecked();
        let mut a = Vec::with_capacity(order + 1);
        a.push(f0inv);
        for k in 1..=order {
            let s: Quaternion = (1..=k.min(self.order())).map(|j| self.coeffs[j] * a[k - j]).sum();
            a.push(-(f0inv * s));
        }
        Ok(QSeries { coeffs: a })
    }

    /// Drops `m` leading coefficients (`f = pᵐ g` ↦ `g`).
    pub fn shift_down(&self, m: usize) -> Self {
        if m > self.order() {
            return QSeries::constant(Quaternion::ZERO);
        }
        QSeries { coeffs: self.coeffs[m..].to_vec() }
    }

    /// Largest coefficient of the imaginary parts, for checking realness.
    pub fn max_imag(&self) -> f64 {
        self.coeffs.iter().map(|q| q.im_abs()).fold(0.0, f64::max)
    }

    /// Maximum coefficient distance up to the shorter order.
    pub fn max_diff(&self, other: &QSeries) -> f64 {
        let n = self.order().min(other.order());
        (0..=n).map(|k| (self.coeff(k) - other.coeff(k)).abs()).fold(0.0, f64::max)
    }
}

fn convolve(g: &[Quaternion], f: &[Quaternion], k: usize) -> Quaternion {
    let lo = k.saturating_sub(f.len() - 1);
    let hi = k.min(g.len() - 1);
    if lo > hi {
        return Quaternion::ZERO;
    }
    (lo..=hi).map(|r| g[r] * f[k - r]).sum()
}
