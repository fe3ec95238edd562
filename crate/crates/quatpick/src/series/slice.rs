//! Pointwise star algebra.
//!
//! A [`SliceFn`] evaluates a slice regular function and its slice conjugate
//! at a point without needing coefficients. Products use
//! `g⋆f(p) = g(p)·f(g(p)⁻¹ p g(p))` (zero when `g(p) = 0`) and inverses use
//! `f^{−⋆}(p) = f(p̃)⁻¹` with `p̃ = f^c(p)⁻¹ p f^c(p)`. Conjugates follow from
//! `(g⋆f)^c = f^c⋆g^c` and `(f^{−⋆})^c = (f^c)^{−⋆}`.

use std::fmt;
use std::sync::Arc;

use super::QSeries;
use crate::error::{Error, Result};
use crate::quat::Quaternion;

/// Values below this squared modulus are treated as exact zeros in the
/// pointwise formulas.
const ZERO_SQR: f64 = 1e-300;

/// A slice regular function known through point evaluations of itself and
/// of its slice conjugate.
pub trait SliceEval: Send + Sync {
    fn eval(&self, p: Quaternion) -> Result<Quaternion>;
    fn eval_conj(&self, p: Quaternion) -> Result<Quaternion>;
}

#[derive(Clone)]
pub enum SliceFn {
    Const(Quaternion),
    Series(Arc<QSeries>),
    Sum(Arc<SliceFn>, Arc<SliceFn>),
    Neg(Arc<SliceFn>),
    /// `left ⋆ right`.
    Star(Arc<SliceFn>, Arc<SliceFn>),
    StarInverse(Arc<SliceFn>),
    Custom(Arc<dyn SliceEval>),
}

impl fmt::Debug for SliceFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SliceFn::Const(c) => write!(f, "Const({c})"),
            SliceFn::Series(s) => write!(f, "Series(order {})", s.order()),
            SliceFn::Sum(a, b) => write!(f, "Sum({a:?}, {b:?})"),
            SliceFn::Neg(a) => write!(f, "Neg({a:?})"),
            SliceFn::Star(a, b) => write!(f, "Star({a:?}, {b:?})"),
            SliceFn::StarInverse(a) => write!(f, "StarInverse({a:?})"),
            SliceFn::Custom(_) => write!(f, "Custom"),
        }
    }
}

impl From<QSeries> for SliceFn {
    fn from(s: QSeries) -> Self {
        SliceFn::Series(Arc::new(s))
    }
}

impl SliceFn {
    pub fn constant(c: Quaternion) -> Self {
        SliceFn::Const(c)
    }

    /// The identity map `p ↦ p`.
    pub fn identity() -> Self {
        SliceFn::from(QSeries::monomial(1, Quaternion::ONE))
    }

    pub fn custom(f: impl SliceEval + 'static) -> Self {
        SliceFn::Custom(Arc::new(f))
    }

    pub fn plus(&self, other: &SliceFn) -> Self {
        SliceFn::Sum(Arc::new(self.clone()), Arc::new(other.clone()))
    }

    pub fn minus(&self, other: &SliceFn) -> Self {
        self.plus(&other.negate())
    }

    pub fn negate(&self) -> Self {
        SliceFn::Neg(Arc::new(self.clone()))
    }

    /// `self ⋆ right`.
    pub fn star(&self, right: &SliceFn) -> Self {
        SliceFn::Star(Arc::new(self.clone()), Arc::new(right.clone()))
    }

    pub fn star_inverse(&self) -> Self {
        SliceFn::StarInverse(Arc::new(self.clone()))
    }

    pub fn eval(&self, p: Quaternion) -> Result<Quaternion> {
        match self {
            SliceFn::Const(c) => Ok(*c),
            SliceFn::Series(s) => Ok(s.eval(p)),
            SliceFn::Sum(a, b) => Ok(a.eval(p)? + b.eval(p)?),
            SliceFn::Neg(a) => Ok(-a.eval(p)?),
            SliceFn::Star(g, f) => {
                let gp = g.eval(p)?;
                if gp.norm_sqr() < ZERO_SQR {
                    return Ok(Quaternion::ZERO);
                }
                Ok(gp * f.eval(gp.inv_unchecked() * p * gp)?)
            }
            SliceFn::StarInverse(f) => {
                let fc = f.eval_conj(p)?;
                if fc.norm_sqr() < ZERO_SQR {
                    return Err(Error::Pole(format!("f^c vanishes at {p}")));
                }
                let shifted = fc.inv_unchecked() * p * fc;
                let v = f.eval(shifted)?;
                if v.norm_sqr() < ZERO_SQR {
                    return Err(Error::Pole(format!("f vanishes at {shifted}")));
                }
                Ok(v.inv_unchecked())
            }
            SliceFn::Custom(c) => c.eval(p),
        }
    }

    pub fn eval_conj(&self, p: Quaternion) -> Result<Quaternion> {
        match self {
            SliceFn::Const(c) => Ok(c.conj()),
            SliceFn::Series(s) => Ok(s.conj_series().eval(p)),
            SliceFn::Sum(a, b) => Ok(a.eval_conj(p)? + b.eval_conj(p)?),
            SliceFn::Neg(a) => Ok(-a.eval_conj(p)?),
            SliceFn::Star(g, f) => {
                // (g⋆f)^c = f^c ⋆ g^c
                let fc = f.eval_conj(p)?;
                if fc.norm_sqr() < ZERO_SQR {
                    return Ok(Quaternion::ZERO);
                }
                Ok(fc * g.eval_conj(fc.inv_unchecked() * p * fc)?)
            }
            SliceFn::StarInverse(f) => {
                // (f^{−⋆})^c = (f^c)^{−⋆}, whose own conjugate is f
                let fp = f.eval(p)?;
                if fp.norm_sqr() < ZERO_SQR {
                    return Err(Error::Pole(format!("f vanishes at {p}")));
                }
                let shifted = fp.inv_unchecked() * p * fp;
                let v = f.eval_conj(shifted)?;
                if v.norm_sqr() < ZERO_SQR {
                    return Err(Error::Pole(format!("f^c vanishes at {shifted}")));
                }
                Ok(v.inv_unchecked())
            }
            SliceFn::Custom(c) => c.eval_conj(p),
        }
    }
}

/// `g⋆f(p)` from a pointwise evaluator of the left factor and the
/// coefficients of the right factor.
pub fn star_apply_pointwise(g: &SliceFn, f: &QSeries, p: Quaternion) -> Result<Quaternion> {
    let gp = g.eval(p)?;
    if gp.norm_sqr() < ZERO_SQR {
        return Ok(Quaternion::ZERO);
    }
    Ok(gp * f.eval(gp.inv_unchecked() * p * gp))
}

/// `f^{−⋆}(p) = f(p̃)⁻¹`, `p̃ = f^c(p)⁻¹ p f^c(p)`.
pub fn star_inverse_pointwise(f: &QSeries, p: Quaternion) -> Result<Quaternion> {
    SliceFn::from(f.clone()).star_inverse().eval(p)
}

/// Right slice product `g ⋆_r f` at `p` for right-convention series:
/// `g(f(p) p f(p)⁻¹)·f(p)` when `f(p) ≠ 0`, zero otherwise.
///
/// This is the branch assignment that mirrors the left formula; some printed
/// versions of the identity list the two conditions the other way round.
pub fn right_star_apply_pointwise(g: &QSeries, f: &QSeries, p: Quaternion) -> Quaternion {
    let fp = f.eval_right(p);
    if fp.norm_sqr() < ZERO_SQR {
        return Quaternion::ZERO;
    }
    g.eval_right(fp * p * fp.inv_unchecked()) * fp
}
