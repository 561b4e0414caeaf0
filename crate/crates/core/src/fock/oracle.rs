use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::fock::{check_modes, OccupationVector};
use crate::netlib::UnitaryMatrix;
use crate::scalar::{Real, C};

const MAX_PHOTONS: usize = 6;
const MAX_MODES: usize = 8;

/// Polynomial in output creation operators, keyed by exponent vector.
#[derive(Debug, Clone, PartialEq)]
pub struct CreationPolynomial<T: Real> {
    pub modes: usize,
    pub terms: BTreeMap<OccupationVector, C<T>>,
}

impl<T: Real> CreationPolynomial<T> {
    pub fn coefficient(&self, s: &OccupationVector) -> C<T> {
        self.terms.get(s).copied().unwrap_or(C::new(T::zero(), T::zero()))
    }

    /// Transition amplitude read off the expansion:
    /// `coeff(s) · √(Π s_j!) / √(Π k_i!)`.
    pub fn amplitude(&self, input: &OccupationVector, output: &OccupationVector) -> C<T> {
        let ratio = output.factorial_product::<T>() / input.factorial_product::<T>();
        self.coefficient(output) * ratio.sqrt()
    }
}

/// Expands `Π_i (Σ_j U_ij a_j†)^{k_i}` term by term. Intended as an oracle for
/// the permanent route, so it is limited to at most 6 photons in 8 modes.
pub fn polynomial_oracle<T: Real>(u: &UnitaryMatrix<T>, input: &OccupationVector) -> Result<CreationPolynomial<T>> {
    check_modes(u, input)?;
    let m = u.dim();
    if m > MAX_MODES {
        return Err(Error::Guard { what: "oracle modes", size: m as u128, limit: MAX_MODES as u128 });
    }
    if input.total() > MAX_PHOTONS {
        return Err(Error::Guard { what: "oracle photons", size: input.total() as u128, limit: MAX_PHOTONS as u128 });
    }
    let mut terms: BTreeMap<OccupationVector, C<T>> = BTreeMap::new();
    terms.insert(OccupationVector(vec![0; m]), C::new(T::one(), T::zero()));
    for (i, &k) in input.counts().iter().enumerate() {
        for _ in 0..k {
            let mut next = BTreeMap::new();
            for (mono, coeff) in &terms {
                for j in 0..m {
                    let mut e = mono.clone();
                    e.0[j] += 1;
                    *next.entry(e).or_insert(C::new(T::zero(), T::zero())) += *coeff * u[(i, j)];
                }
            }
            terms = next;
        }
    }
    terms.retain(|_, c| c.norm() >= T::prune_tol());
    Ok(CreationPolynomial { modes: m, terms })
}
