//! Non-Fock inputs: coherent, squeezed, photon-added and displaced states.

mod pacs;
mod passv;

pub use pacs::{pacs_postselection, pacs_regime, PacsRegime, PacsScalar};
pub use passv::{passv_normalization, passv_parity_distribution, ParityDistribution, ParityOutcome, PassvKind};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::netlib::{wrap_phase, UnitaryMatrix};
use crate::scalar::{Real, C};

/// Squeezing `ξ = r e^{iθ}` with `r ≥ 0` and `θ` reduced to `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SqueezingParameter<T> {
    pub r: T,
    pub theta: T,
}

impl<T: Real> SqueezingParameter<T> {
    pub fn new(r: T, theta: T) -> Result<Self> {
        if !(r >= T::zero()) || !r.is_finite() || !theta.is_finite() {
            return Err(Error::InvalidArgument(format!("squeezing magnitude {r} must be finite and ≥ 0")));
        }
        Ok(Self { r, theta: wrap_phase(theta) })
    }

    pub fn real(r: T) -> Result<Self> {
        Self::new(r, T::zero())
    }
}

/// Fock coefficients `c_0 … c_cutoff` with the probability mass left out.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedState<T: Real> {
    pub coefficients: Vec<C<T>>,
    pub norm_deficit: T,
}

impl<T: Real> TruncatedState<T> {
    fn from_coefficients(coefficients: Vec<C<T>>) -> Self {
        let kept: T = coefficients.iter().map(|c| c.norm_sqr()).sum();
        Self { coefficients, norm_deficit: (T::one() - kept).max(T::zero()) }
    }

    pub fn probabilities(&self) -> Vec<T> {
        self.coefficients.iter().map(|c| c.norm_sqr()).collect()
    }

    pub fn mean_photon_number(&self) -> T {
        self.probabilities().iter().enumerate().map(|(k, &p)| T::count(k) * p).sum()
    }

    pub fn photon_number_variance(&self) -> T {
        let mean = self.mean_photon_number();
        let second: T = self.probabilities().iter().enumerate().map(|(k, &p)| T::count(k * k) * p).sum();
        second - mean * mean
    }
}

/// `e^{−|α|²/2} αⁿ / √n!` for `n ≤ cutoff`.
pub fn coherent_coefficients<T: Real>(alpha: C<T>, cutoff: usize) -> Result<TruncatedState<T>> {
    if !alpha.re.is_finite() || !alpha.im.is_finite() {
        return Err(Error::InvalidArgument("coherent amplitude must be finite".into()));
    }
    let mut c = C::new((-alpha.norm_sqr() / T::lit(2.0)).exp(), T::zero());
    let mut out = Vec::with_capacity(cutoff + 1);
    out.push(c);
    for k in 1..=cutoff {
        c = c * alpha / T::count(k).sqrt();
        out.push(c);
    }
    Ok(TruncatedState::from_coefficients(out))
}

/// Single-mode squeezed vacuum; only even photon numbers are populated:
/// `c_{2m} = (−1)^m √((2m)!) / (2^m m!) · e^{imθ} tanh^m r / √cosh r`.
pub fn squeezed_vacuum_coefficients<T: Real>(xi: SqueezingParameter<T>, cutoff: usize) -> TruncatedState<T> {
    let zero = C::new(T::zero(), T::zero());
    let mut out = vec![zero; cutoff + 1];
    let t = xi.r.tanh();
    let step = -crate::scalar::cis(xi.theta) * t;
    let mut c = C::new(T::one() / xi.r.cosh().sqrt(), T::zero());
    out[0] = c;
    let mut m = 1;
    while 2 * m <= cutoff {
        // c_{2m} / c_{2m−2} = −e^{iθ} tanh r · √((2m−1)/(2m))
        c = c * step * (T::count(2 * m - 1) / T::count(2 * m)).sqrt();
        out[2 * m] = c;
        m += 1;
    }
    TruncatedState::from_coefficients(out)
}

/// Output displacements `β_j = Σ_i U_ij α_i` of coherent inputs.
pub fn displace_through_network<T: Real>(u: &UnitaryMatrix<T>, alphas: &[C<T>]) -> Result<Vec<C<T>>> {
    if alphas.len() != u.dim() {
        return Err(Error::DimensionMismatch { expected: u.dim(), found: alphas.len() });
    }
    Ok((0..u.dim())
        .map(|j| alphas.iter().enumerate().fold(C::new(T::zero(), T::zero()), |acc, (i, &a)| acc + u[(i, j)] * a))
        .collect())
}

/// Wigner function of the single-photon-added coherent state `a†|α⟩`:
/// `2(|2z − α|² − 1) / (π(1 + |α|²)) · e^{−2|z−α|²}`.
pub fn spacs_wigner<T: Real>(alpha: C<T>, z: C<T>) -> T {
    let two = T::lit(2.0);
    let lead = two * ((z * two - alpha).norm_sqr() - T::one()) / (T::PI() * (T::one() + alpha.norm_sqr()));
    lead * (-two * (z - alpha).norm_sqr()).exp()
}

/// `(x, y, W(x + iy))` on a `steps × steps` grid spanning `[−extent, extent]²`.
pub fn spacs_wigner_grid<T: Real>(alpha: C<T>, extent: T, steps: usize) -> Result<Vec<(T, T, T)>> {
    if steps < 2 || !(extent > T::zero()) {
        return Err(Error::InvalidArgument("grid needs steps ≥ 2 and a positive extent".into()));
    }
    let h = extent * T::lit(2.0) / T::count(steps - 1);
    let coord = |k: usize| -extent + h * T::count(k);
    let mut out = Vec::with_capacity(steps * steps);
    for iy in 0..steps {
        for ix in 0..steps {
            let (x, y) = (coord(ix), coord(iy));
            out.push((x, y, spacs_wigner(alpha, C::new(x, y))));
        }
    }
    Ok(out)
}
