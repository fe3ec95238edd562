//! Real quaternion scalars.
//!
//! `Quaternion` is `w + xi + yj + zk` with `ij = k`, `jk = i`, `ki = j` and
//! `i² = j² = k² = −1`. Multiplication is not commutative; every product in
//! this crate is written in the order it appears in the formula it implements.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `w + xi + yj + zk`. Serialized as the array `[w, x, y, z]`.
#[derive(Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 4]", into = "[f64; 4]")]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl From<[f64; 4]> for Quaternion {
    fn from(a: [f64; 4]) -> Self {
        Quaternion::new(a[0], a[1], a[2], a[3])
    }
}

impl From<Quaternion> for [f64; 4] {
    fn from(q: Quaternion) -> Self {
        [q.w, q.x, q.y, q.z]
    }
}

impl From<f64> for Quaternion {
    fn from(r: f64) -> Self {
        Quaternion::real(r)
    }
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion { w: 0.0, x: 0.0, y: 0.0, z: 0.0 };
    pub const ONE: Quaternion = Quaternion { w: 1.0, x: 0.0, y: 0.0, z: 0.0 };
    pub const I: Quaternion = Quaternion { w: 0.0, x: 1.0, y: 0.0, z: 0.0 };
    pub const J: Quaternion = Quaternion { w: 0.0, x: 0.0, y: 1.0, z: 0.0 };
    pub const K: Quaternion = Quaternion { w: 0.0, x: 0.0, y: 0.0, z: 1.0 };

    #[inline]
    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Quaternion { w, x, y, z }
    }

    #[inline]
    pub const fn real(r: f64) -> Self {
        Quaternion { w: r, x: 0.0, y: 0.0, z: 0.0 }
    }

    #[inline]
    pub fn conj(self) -> Self {
        Quaternion::new(self.w, -self.x, -self.y, -self.z)
    }

    #[inline]
    pub fn norm_sqr(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    #[inline]
    pub fn abs(self) -> f64 {
        // hypot-style scaling is unnecessary for the magnitudes used here
        self.norm_sqr().sqrt()
    }

    #[inline]
    pub fn re(self) -> f64 {
        self.w
    }

    /// Imaginary part `xi + yj + zk`.
    #[inline]
    pub fn im(self) -> Self {
        Quaternion::new(0.0, self.x, self.y, self.z)
    }

    #[inline]
    pub fn im_abs(self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn is_finite(self) -> bool {
        self.w.is_finite() && self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn is_zero(self) -> bool {
        self.norm_sqr() == 0.0
    }

    /// `conj(a) / |a|²`.
    pub fn inv(self) -> Result<Self> {
        let n = self.norm_sqr();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::Domain("inverse of a zero quaternion".into()));
        }
        Ok(self.conj() * (1.0 / n))
    }

    /// Inverse without the zero check; callers guarantee `self != 0`.
    #[inline]
    pub(crate) fn inv_unchecked(self) -> Self {
        self.conj() * (1.0 / self.norm_sqr())
    }

    pub fn scale(self, s: f64) -> Self {
        Quaternion::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }

    /// Integer power `self^n` by repeated squaring.
    pub fn powi(self, mut n: u32) -> Self {
        let mut base = self;
        let mut acc = Quaternion::ONE;
        while n > 0 {
            if n & 1 == 1 {
                acc *= base;
            }
            base = base * base;
            n >>= 1;
        }
        acc
    }

    /// Euclidean distance `|self − other|`.
    pub fn dist(self, other: Self) -> f64 {
        (self - other).abs()
    }
}

/// True iff `p` and `q` lie on the same 2-sphere `x + y𝕊`, i.e. share the
/// real part and the modulus of the imaginary part, each within `tol`.
pub fn same_sphere(p: Quaternion, q: Quaternion, tol: f64) -> bool {
    (p.re() - q.re()).abs() <= tol && (p.im_abs() - q.im_abs()).abs() <= tol
}

/// Default scale-aware tolerance for [`same_sphere`].
pub fn sphere_tol(p: Quaternion, q: Quaternion) -> f64 {
    1e-10 * (1.0 + p.abs() + q.abs())
}

/// `h⁻¹ p h`.
pub fn similarity(h: Quaternion, p: Quaternion) -> Result<Quaternion> {
    Ok(h.inv()? * p * h)
}

/// A unit imaginary quaternion `I`, `I² = −1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ImagUnit(Quaternion);

impl ImagUnit {
    pub const I: ImagUnit = ImagUnit(Quaternion::I);
    pub const J: ImagUnit = ImagUnit(Quaternion::J);
    pub const K: ImagUnit = ImagUnit(Quaternion::K);

    /// Normalizes the imaginary part of `q`.
    pub fn new(q: Quaternion) -> Result<Self> {
        let n = q.im_abs();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::Domain("imaginary unit from a real quaternion".into()));
        }
        Ok(ImagUnit(q.im().scale(1.0 / n)))
    }

    pub fn get(self) -> Quaternion {
        self.0
    }

    /// `x + yI`.
    pub fn slice_point(self, x: f64, y: f64) -> Quaternion {
        Quaternion::real(x) + self.0.scale(y)
    }
}

/// Writes `p = x + yI` with `y ≥ 0`. For real `p` the unit is `i`.
pub fn slice_coords(p: Quaternion) -> (f64, f64, ImagUnit) {
    let y = p.im_abs();
    if y == 0.0 {
        (p.re(), 0.0, ImagUnit::I)
    } else {
        (p.re(), y, ImagUnit(p.im().scale(1.0 / y)))
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn add(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn sub(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn neg(self) -> Quaternion {
        Quaternion::new(-self.w, -self.x, -self.y, -self.z)
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn mul(self, o: Quaternion) -> Quaternion {
        let (a, b) = (self, o);
        Quaternion::new(
            a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn mul(self, s: f64) -> Quaternion {
        self.scale(s)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    #[inline]
    fn mul(self, q: Quaternion) -> Quaternion {
        q.scale(self)
    }
}

impl Div<f64> for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn div(self, s: f64) -> Quaternion {
        self.scale(1.0 / s)
    }
}

impl AddAssign for Quaternion {
    #[inline]
    fn add_assign(&mut self, o: Quaternion) {
        *self = *self + o;
    }
}

impl SubAssign for Quaternion {
    #[inline]
    fn sub_assign(&mut self, o: Quaternion) {
        *self = *self - o;
    }
}

impl MulAssign for Quaternion {
    #[inline]
    fn mul_assign(&mut self, o: Quaternion) {
        *self = *self * o;
    }
}

impl std::iter::Sum for Quaternion {
    fn sum<I: Iterator<Item = Quaternion>>(iter: I) -> Self {
        iter.fold(Quaternion::ZERO, |a, b| a + b)
    }
}

impl fmt::Debug for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {:+}i {:+}j {:+}k)", self.w, self.x, self.y, self.z)
    }
}
