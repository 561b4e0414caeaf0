//! Scalar abstraction shared by every numeric routine in the crate.
//!
//! All matrix, permanent and Fock-space code is written against [`Real`], which
//! is implemented for `f32` and `f64`. Tolerances that depend on the working
//! precision live on the trait so that the same invariant checks scale with the
//! type instead of being hard-coded for double precision.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real floating-point scalar usable throughout the crate.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Max-norm bound on `U†U − I` accepted when constructing a unitary.
    fn unitarity_tol() -> Self;

    /// Coefficients below this magnitude are dropped from creation polynomials.
    fn prune_tol() -> Self;

    /// Allowed deviation of a probability distribution's total mass from one.
    fn normalization_tol() -> Self;

    /// Converts an `f64` literal into this type.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    /// Converts a count into this type.
    #[inline]
    fn count(n: usize) -> Self {
        Self::from_usize(n).expect("representable count")
    }
}

impl Real for f64 {
    fn unitarity_tol() -> Self {
        1e-10
    }
    fn prune_tol() -> Self {
        1e-15
    }
    fn normalization_tol() -> Self {
        1e-9
    }
}

impl Real for f32 {
    fn unitarity_tol() -> Self {
        5e-4
    }
    fn prune_tol() -> Self {
        1e-7
    }
    fn normalization_tol() -> Self {
        1e-4
    }
}

/// Complex amplitude over a [`Real`] scalar.
pub type C<T> = Complex<T>;

/// `e^{iθ}`.
#[inline]
pub fn cis<T: Real>(theta: T) -> C<T> {
    C::new(theta.cos(), theta.sin())
}

/// Relative difference `|a − b| / max(1, |a|, |b|)`.
///
/// Stays meaningful both for permanents that vanish (Hong-Ou-Mandel cases) and
/// for values of factorial scale.
pub fn rel_diff<T: Real>(a: C<T>, b: C<T>) -> T {
    let scale = T::one().max(a.norm()).max(b.norm());
    (a - b).norm() / scale
}

/// Scalar version of [`rel_diff`].
pub fn rel_diff_real<T: Real>(a: T, b: T) -> T {
    let scale = T::one().max(a.abs()).max(b.abs());
    (a - b).abs() / scale
}
