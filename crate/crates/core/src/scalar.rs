//! Scalar abstraction shared by every numerical module.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real floating point type the crate computes over: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Tolerance used when no override is supplied.
    fn default_tol() -> Self;

    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {
    fn default_tol() -> Self {
        1e-4
    }
}

impl Real for f64 {
    fn default_tol() -> Self {
        1e-9
    }
}

pub type C<T> = Complex<T>;

pub(crate) fn one<T: Real>() -> C<T> {
    Complex::new(T::one(), T::zero())
}

pub(crate) fn zero<T: Real>() -> C<T> {
    Complex::new(T::zero(), T::zero())
}

pub(crate) fn from_f64_pair<T: Real>(re: f64, im: f64) -> C<T> {
    Complex::new(T::lit(re), T::lit(im))
}

/// `exp(2 pi i k / m)`.
pub fn root_of_unity<T: Real>(k: i64, m: u64) -> C<T> {
    let m = m.max(1) as i64;
    let k = k.rem_euclid(m);
    let angle = T::TAU() * T::lit(k as f64) / T::lit(m as f64);
    Complex::from_polar(T::one(), angle)
}

/// Principal `m`-th root: modulus `|z|^(1/m)`, argument `Arg(z)/m` with `Arg(z)` in `[0, 2 pi)`.
pub fn principal_root<T: Real>(z: C<T>, m: usize) -> C<T> {
    if m <= 1 {
        return z;
    }
    let (r, mut arg) = z.to_polar();
    if arg < T::zero() {
        arg += T::TAU();
    }
    // arguments within rounding of 2 pi fold back to 0
    if T::TAU() - arg < T::epsilon() * T::lit(64.0) {
        arg = T::zero();
    }
    let m_t = T::lit(m as f64);
    Complex::from_polar(r.powf(T::one() / m_t), arg / m_t)
}

/// Index `k` with `z ~ exp(2 pi i k / m)`, if `z` lies within `tol` of an `m`-th root of unity.
pub(crate) fn root_index<T: Real>(z: C<T>, m: u64, tol: T) -> Option<i64> {
    let (_, arg) = z.to_polar();
    let k = (arg / T::TAU() * T::lit(m as f64)).round();
    let k = k.to_i64()?.rem_euclid(m as i64);
    ((z - root_of_unity::<T>(k, m)).norm() <= tol).then_some(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn principal_root_branch() {
        let z = root_of_unity::<f64>(3, 4); // -i
        let r = principal_root(z, 2);
        // Arg(-i) = 3 pi / 2, half is 3 pi / 4
        assert!((r - Complex::from_polar(1.0, 3.0 * std::f64::consts::PI / 4.0)).norm() < 1e-12);
        assert!((principal_root(one::<f64>(), 5) - one()).norm() < 1e-12);
        let m1 = principal_root(Complex::new(-1.0f64, 0.0), 2);
        assert!((m1 - Complex::new(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn root_index_detects_roots() {
        assert_eq!(root_index(Complex::new(-1.0f64, 1e-12), 4, 1e-9), Some(2));
        assert_eq!(root_index(Complex::new(0.0f64, -1.0), 4, 1e-9), Some(3));
        assert_eq!(root_index(Complex::new(0.5f64, 0.5), 4, 1e-9), None);
    }
}
