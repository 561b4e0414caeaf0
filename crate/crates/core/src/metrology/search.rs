use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::metrology::error_propagation;
use crate::netlib::{haar_unitary, qft_matrix, ComplexMatrix, UnitaryMatrix};
use crate::permanent::permanent_fast;
use crate::scalar::{cis, Real, C};

const MAX_TRIALS: usize = 10_000;

/// `Δφ` for `U = W · X(φ) · W†` where `X` carries the phase on mode 0 only.
///
/// `U = I + (e^{iφ} − 1) w w†` with `w` the first column of `W`, so the phase
/// derivative of `perm U` is the cofactor sum `Σ_ij perm(U⁽ⁱʲ⁾) · i e^{iφ} w_i w_j*`
/// and no finite differencing is needed.
pub fn delta_strategy_delta_phi<T: Real>(w: &UnitaryMatrix<T>, phi: T) -> Result<T> {
    let n = w.dim();
    let mut x = vec![C::new(T::one(), T::zero()); n];
    x[0] = cis(phi);
    let u = w.matmul(&ComplexMatrix::diagonal(&x))?.matmul(&w.adjoint())?;
    let f = permanent_fast(&u)?;
    let de = C::new(T::zero(), T::one()) * cis(phi);
    let mut df = C::new(T::zero(), T::zero());
    for i in 0..n {
        for j in 0..n {
            let minor = if n == 1 {
                C::new(T::one(), T::zero())
            } else {
                let rows: Vec<usize> = (0..n).filter(|&r| r != i).collect();
                let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
                permanent_fast(&ComplexMatrix::from_fn(n - 1, n - 1, |r, c| u[(rows[r], cols[c])]))?
            };
            df += minor * de * w[(i, 0)] * w[(j, 0)].conj();
        }
    }
    let dp = T::lit(2.0) * (f.conj() * df).re;
    Ok(error_propagation(f.norm_sqr(), dp, 1)?.delta_phi)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchReport<T> {
    pub n: usize,
    pub phi: T,
    pub trials: usize,
    pub qft_delta_phi: T,
    pub min_delta_phi: Option<T>,
    pub mean_delta_phi: Option<T>,
    pub samples: Vec<T>,
}

impl<T: Real> SearchReport<T> {
    /// The Fourier network beats (or ties) every sampled unitary.
    pub fn qft_is_best(&self) -> bool {
        self.min_delta_phi.is_none_or(|m| self.qft_delta_phi <= m)
    }
}

/// Compares the Fourier network against Haar-random ones for the delta
/// strategy. Each trial gets its own generator seeded from `rng`, so results
/// do not depend on scheduling.
pub fn qft_optimality_search<T, R>(n: usize, trials: usize, rng: &mut R, phi: T) -> Result<SearchReport<T>>
where
    T: Real,
    R: Rng + ?Sized,
    StandardNormal: Distribution<T>,
{
    if !(2..=6).contains(&n) {
        return Err(Error::InvalidArgument(format!("search supports 2 ≤ n ≤ 6, got {n}")));
    }
    if trials > MAX_TRIALS {
        return Err(Error::Guard { what: "search trials", size: trials as u128, limit: MAX_TRIALS as u128 });
    }
    let qft_delta_phi = delta_strategy_delta_phi(&qft_matrix::<T>(n)?, phi)?;
    let seeds: Vec<u64> = (0..trials).map(|_| rng.next_u64()).collect();
    let samples: Vec<T> = seeds
        .par_iter()
        .map(|&s| {
            let w = haar_unitary::<T, _>(n, &mut ChaCha8Rng::seed_from_u64(s))?;
            delta_strategy_delta_phi(&w, phi)
        })
        .collect::<Result<_>>()?;
    let min_delta_phi = samples.iter().copied().reduce(T::min);
    let mean_delta_phi = (!samples.is_empty()).then(|| samples.iter().copied().sum::<T>() / T::count(samples.len()));
    Ok(SearchReport { n, phi, trials, qft_delta_phi, min_delta_phi, mean_delta_phi, samples })
}
