use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::netlib::{ComplexMatrix, UnitaryMatrix};
use crate::scalar::{cis, Real, C};

/// Discrete Fourier transform `V_jk = ω^{jk}/√n`, `ω = e^{2πi/n}`, zero-based.
pub fn qft_matrix<T: Real>(n: usize) -> Result<UnitaryMatrix<T>> {
    if n == 0 {
        return Err(Error::InvalidArgument("QFT needs at least one mode".into()));
    }
    let norm = T::one() / T::count(n).sqrt();
    let step = T::TAU() / T::count(n);
    // reduce the exponent mod n before converting so large n keeps full accuracy
    let m = ComplexMatrix::from_fn(n, n, |j, k| cis(step * T::count((j * k) % n)) * norm);
    UnitaryMatrix::new(m)
}

/// Lossless two-mode coupler acting on `(mode_p, mode_q)`.
///
/// The 2×2 block is `[[√η, r], [−r*, √η]]` with `r = √(1−η) e^{iτ}`, so that
/// `η = ½, τ = π/2` gives the symmetric 50:50 coupler `(1/√2)[[1, i], [i, 1]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeamsplitterElement<T> {
    pub mode_p: usize,
    pub mode_q: usize,
    pub eta: T,
    pub tau: T,
}

impl<T: Real> BeamsplitterElement<T> {
    /// Validates `η ∈ [0, 1]` and distinct modes; `τ` is reduced to `[0, 2π)`.
    pub fn new(mode_p: usize, mode_q: usize, eta: T, tau: T) -> Result<Self> {
        if mode_p == mode_q {
            return Err(Error::SameMode(mode_p));
        }
        if !(eta >= T::zero() && eta <= T::one()) {
            return Err(Error::Transmissivity(eta.to_f64().unwrap_or(f64::NAN)));
        }
        if !tau.is_finite() {
            return Err(Error::InvalidArgument("beamsplitter phase must be finite".into()));
        }
        Ok(Self { mode_p, mode_q, eta, tau: wrap_phase(tau) })
    }

    pub fn transmission(&self) -> T {
        self.eta.sqrt()
    }

    pub fn reflection(&self) -> C<T> {
        cis(self.tau) * (T::one() - self.eta).sqrt()
    }

    /// `[[t, r], [−r*, t]]` indexed by `(p, q)`.
    pub fn block(&self) -> [[C<T>; 2]; 2] {
        let t = C::new(self.transmission(), T::zero());
        let r = self.reflection();
        [[t, r], [-r.conj(), t]]
    }

    /// The inverse element; equal to the same `η` with `τ + π`.
    pub fn inverse(&self) -> Self {
        Self { tau: wrap_phase(self.tau + T::PI()), ..*self }
    }

    /// Left-multiplies `m` in place: rows `p` and `q` are mixed.
    pub fn apply_left(&self, m: &mut ComplexMatrix<T>) {
        let [[a, b], [c, d]] = self.block();
        for col in 0..m.cols() {
            let x = m[(self.mode_p, col)];
            let y = m[(self.mode_q, col)];
            m[(self.mode_p, col)] = a * x + b * y;
            m[(self.mode_q, col)] = c * x + d * y;
        }
    }
}

/// Reduces a phase to `[0, 2π)`.
pub fn wrap_phase<T: Real>(x: T) -> T {
    let tau = T::TAU();
    let mut y = x % tau;
    if y < T::zero() {
        y += tau;
    }
    if y >= tau {
        y -= tau;
    }
    y
}

/// Embeds a single coupler in an `n`-mode identity.
pub fn beamsplitter_unitary<T: Real>(elem: &BeamsplitterElement<T>, n: usize) -> Result<UnitaryMatrix<T>> {
    for idx in [elem.mode_p, elem.mode_q] {
        if idx >= n {
            return Err(Error::ModeOutOfRange { index: idx, modes: n });
        }
    }
    let mut m = ComplexMatrix::identity(n);
    elem.apply_left(&mut m);
    UnitaryMatrix::new(m)
}

/// Diagonal phase screen `diag(e^{iφ_j})`.
pub fn phase_screen<T: Real>(phases: &[T]) -> Result<UnitaryMatrix<T>> {
    if phases.is_empty() {
        return Err(Error::InvalidArgument("phase screen needs at least one mode".into()));
    }
    let d: Vec<_> = phases.iter().map(|&p| cis(p)).collect();
    UnitaryMatrix::new(ComplexMatrix::diagonal(&d))
}
