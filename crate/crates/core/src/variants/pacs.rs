use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Number types that can evaluate `P_i = C(n,i) x^{n−i} / (1+x)^n`.
///
/// Floating-point types work in log space so that `n` in the millions stays
/// finite; `BigRational` evaluates the expression exactly.
pub trait PacsScalar: Sized {
    fn pacs_probability(n: u64, alpha_sq: &Self, i: u64) -> Self;
    fn is_valid_intensity(alpha_sq: &Self) -> bool;
}

impl<T: Real> PacsScalar for T {
    fn pacs_probability(n: u64, x: &T, i: u64) -> T {
        let x = *x;
        if x == T::zero() {
            return if i == n { T::one() } else { T::zero() };
        }
        let k = i.min(n - i);
        let ln_choose: T = (0..k).map(|j| (T::from_u64(n - j).unwrap() / T::from_u64(j + 1).unwrap()).ln()).sum();
        let (up, down) = (T::from_u64(n - i).unwrap(), T::from_u64(i).unwrap());
        let log_rest = if x >= T::one() {
            -(up * x.recip().ln_1p()) - down * x.ln_1p()
        } else {
            up * x.ln() - T::from_u64(n).unwrap() * x.ln_1p()
        };
        (ln_choose + log_rest).exp()
    }

    fn is_valid_intensity(x: &T) -> bool {
        *x >= T::zero() && x.is_finite()
    }
}

impl PacsScalar for BigRational {
    fn pacs_probability(n: u64, x: &Self, i: u64) -> Self {
        let choose = (0..i).fold(BigInt::one(), |acc, j| acc * BigInt::from(n - j) / BigInt::from(j + 1));
        let num = num_traits::pow(x.clone(), (n - i) as usize) * BigRational::from_integer(choose);
        let den = num_traits::pow(x.clone() + BigRational::one(), n as usize);
        num / den
    }

    fn is_valid_intensity(x: &Self) -> bool {
        *x >= BigRational::zero()
    }
}

/// Probability of detecting `i` photons in total when `n` photon-added
/// coherent inputs of intensity `|α|²` are post-selected.
pub fn pacs_postselection<F: PacsScalar>(n: u64, alpha_sq: &F, i: u64) -> Result<F> {
    if i > n {
        return Err(Error::InvalidArgument(format!("detected count {i} exceeds {n}")));
    }
    if !F::is_valid_intensity(alpha_sq) {
        return Err(Error::InvalidArgument("intensity must be finite and non-negative".into()));
    }
    Ok(F::pacs_probability(n, alpha_sq, i))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PacsRegime {
    /// `|α|² ≤ 1/n`
    BsHard,
    Intermediate,
    /// `|α|² ≥ n²`
    ClassicallyTrivial,
}

pub fn pacs_regime<T: Real>(n: u64, alpha_sq: T) -> Result<PacsRegime> {
    if n == 0 {
        return Err(Error::InvalidArgument("n ≥ 1 required".into()));
    }
    let nn = T::from_u64(n).unwrap();
    Ok(if alpha_sq <= nn.recip() {
        PacsRegime::BsHard
    } else if alpha_sq >= nn * nn {
        PacsRegime::ClassicallyTrivial
    } else {
        PacsRegime::Intermediate
    })
}
